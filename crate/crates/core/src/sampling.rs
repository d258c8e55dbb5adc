//! Seeded random group elements, points and smooth off-shell configurations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fields::{FieldExpr, GaugeConfig, MatterConfig, Polynomial, C64};
use crate::galgroup::{rotation, GalileiElement, HomogeneousElement, Mat3, Vec3};

pub type SuiteRng = ChaCha8Rng;

pub const BETA_MAX: f64 = 0.5;
pub const A_MAX: f64 = 2.0;
pub const B_MAX: f64 = 2.0;

pub fn rng(seed: u64) -> SuiteRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit_vector<R: Rng>(rng: &mut R) -> Vec3 {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - z * z).max(0.0).sqrt();
    Vec3::new(s * phi.cos(), s * phi.sin(), z)
}

/// Uniform in the ball of the given radius.
pub fn ball<R: Rng>(rng: &mut R, radius: f64) -> Vec3 {
    let u: f64 = rng.random();
    unit_vector(rng) * (radius * u.cbrt())
}

/// Uniform axis on the sphere, angle uniform in `[0, π]`.
pub fn random_rotation<R: Rng>(rng: &mut R) -> Mat3 {
    let axis = unit_vector(rng);
    rotation(&axis, rng.random_range(0.0..=std::f64::consts::PI))
}

pub fn random_element<R: Rng>(rng: &mut R) -> GalileiElement {
    GalileiElement {
        b: rng.random_range(-B_MAX..=B_MAX),
        a: ball(rng, A_MAX),
        beta: ball(rng, BETA_MAX),
        r: random_rotation(rng),
    }
}

pub fn random_homogeneous<R: Rng>(rng: &mut R) -> HomogeneousElement {
    HomogeneousElement::new(ball(rng, BETA_MAX), random_rotation(rng))
}

/// Spacetime point with every coordinate in `[−radius, radius]`.
pub fn random_point<R: Rng>(rng: &mut R, radius: f64) -> [f64; 4] {
    std::array::from_fn(|_| rng.random_range(-radius..=radius))
}

fn random_poly<R: Rng>(rng: &mut R, max_degree: u32, scale: f64) -> Polynomial {
    let mut terms = Vec::new();
    for e0 in 0..=max_degree as u8 {
        for e1 in 0..=max_degree as u8 {
            for e2 in 0..=max_degree as u8 {
                for e3 in 0..=max_degree as u8 {
                    let e = [e0, e1, e2, e3];
                    let deg: u32 = e.iter().map(|&k| k as u32).sum();
                    if deg <= max_degree && rng.random_bool(0.35) {
                        let w = scale / (1.0 + deg as f64);
                        terms.push((e, rng.random_range(-w..=w)));
                    }
                }
            }
        }
    }
    Polynomial::from_terms(terms)
}

/// Quadratic polynomial for gauge functions `λ` or phases.
pub fn random_quadratic<R: Rng>(rng: &mut R, scale: f64) -> Polynomial {
    random_poly(rng, 2, scale)
}

/// Generic complex matter field: a modulated, phase-twisted bump plus a plane wave.
pub fn random_matter<R: Rng>(rng: &mut R, c: f64) -> MatterConfig {
    let bump = FieldExpr::gaussian_bump(rng.random_range(0.9..1.6), ball(rng, 0.5)).expect("positive width");
    let envelope = FieldExpr::polynomial(random_poly(rng, 2, 0.4) + Polynomial::constant(1.0)).expect("degree 2");
    let imag = FieldExpr::polynomial(random_poly(rng, 2, 0.4))
        .expect("degree 2")
        .scale(C64::i());
    let twisted = (bump * (envelope + imag))
        .phase_mul(random_quadratic(rng, 0.5))
        .expect("degree 2");
    let amp = C64::new(rng.random_range(-0.3..0.3), rng.random_range(-0.3..0.3));
    let wave = FieldExpr::plane_wave(amp, ball(rng, 1.0), rng.random_range(-0.5..0.5), c);
    MatterConfig::new(twisted + wave)
}

/// Generic time-dependent potentials: cubic polynomials plus a bump.
pub fn random_gauge<R: Rng>(rng: &mut R) -> GaugeConfig {
    let comp = |rng: &mut R| {
        let bump = FieldExpr::gaussian_bump(rng.random_range(0.9..1.6), ball(rng, 0.5)).expect("positive width");
        FieldExpr::polynomial(random_poly(rng, 3, 0.5)).expect("degree 3") + bump.scale_re(rng.random_range(-0.5..0.5))
    };
    let a0 = comp(rng);
    let avec = [comp(rng), comp(rng), comp(rng)];
    GaugeConfig::new(a0, avec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elements_respect_bounds() {
        let mut r = rng(7);
        for _ in 0..500 {
            let g = random_element(&mut r);
            assert!(g.beta.norm() <= BETA_MAX && g.a.norm() <= A_MAX && g.b.abs() <= B_MAX);
            assert!(GalileiElement::new(g.b, g.a, g.beta, g.r).is_ok());
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let a: Vec<[f64; 4]> = (0..5).scan(rng(3), |r, _| Some(random_point(r, 2.0))).collect();
        let b: Vec<[f64; 4]> = (0..5).scan(rng(3), |r, _| Some(random_point(r, 2.0))).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn random_configs_are_finite_and_nontrivial() {
        let mut r = rng(11);
        let m = random_matter(&mut r, 1.0);
        let a = random_gauge(&mut r);
        let x = random_point(&mut r, 2.0);
        let j = m.psi.checked_jet(&x).unwrap();
        assert!(j.v.norm() > 0.0 && j.dd.iter().any(|z| z.norm() > 0.0));
        for f in std::iter::once(&a.a0).chain(a.avec.iter()) {
            assert!(f.checked_jet(&x).is_ok());
        }
    }
}
