//! Differential-operator realization of the Galilei Lie algebra with central mass.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fields::{FieldExpr, Jet};

/// Complex affine function `c + Σ_μ k_μ x^μ`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct AffineCoeff {
    c: C64,
    k: [C64; 4],
}

impl AffineCoeff {
    const ZERO: AffineCoeff = AffineCoeff {
        c: C64::new(0.0, 0.0),
        k: [C64::new(0.0, 0.0); 4],
    };

    fn constant(c: C64) -> Self {
        Self { c, ..Self::ZERO }
    }

    fn linear(mu: usize, s: C64) -> Self {
        let mut out = Self::ZERO;
        out.k[mu] = s;
        out
    }

    fn jet(&self, x: &[f64; 4]) -> Jet {
        let mut j = Jet::constant(self.c);
        for mu in 0..4 {
            j.v += self.k[mu] * x[mu];
            j.d[mu] = self.k[mu];
        }
        j
    }

    fn add(self, o: Self) -> Self {
        Self {
            c: self.c + o.c,
            k: std::array::from_fn(|mu| self.k[mu] + o.k[mu]),
        }
    }
}

/// `φ ↦ Σ_μ a^μ(x) ∂_μ φ + b(x) φ` with affine coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderOp {
    a: [AffineCoeff; 4],
    b: AffineCoeff,
}

impl FirstOrderOp {
    fn zero() -> Self {
        Self {
            a: [AffineCoeff::ZERO; 4],
            b: AffineCoeff::ZERO,
        }
    }

    /// Jet of `Oφ`, one derivative level below the input jet.
    pub fn apply(&self, phi: &Jet, x: &[f64; 4]) -> Result<Jet> {
        if phi.order == 0 {
            return Err(Error::InsufficientJetOrder {
                required: 1,
                available: 0,
            });
        }
        let mut out = self.b.jet(x) * *phi;
        for mu in 0..4 {
            if self.a[mu] != AffineCoeff::ZERO {
                out = out + self.a[mu].jet(x) * phi.derivative(mu).expect("order checked above");
            }
        }
        out.order = phi.order - 1;
        Ok(out)
    }
}

/// A basis element of the extended Galilei algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    H,
    P(usize),
    J(usize),
    K(usize),
    M,
}

impl std::fmt::Display for Generator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Generator::H => write!(f, "H"),
            Generator::P(i) => write!(f, "P{}", i + 1),
            Generator::J(i) => write!(f, "J{}", i + 1),
            Generator::K(i) => write!(f, "K{}", i + 1),
            Generator::M => write!(f, "M"),
        }
    }
}

/// Generators acting on functions of `(x⁰, x)` with `t = x⁰/c`:
/// `H = i∂_t`, `P = i∇`, `J = −x×P`, `K = tP − m x`, `M = m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSet {
    pub m: f64,
    pub c: f64,
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

impl GeneratorSet {
    pub fn new(m: f64, c: f64) -> Result<Self> {
        if !(m > 0.0 && c > 0.0) {
            return Err(Error::InvalidParameter(format!("need m > 0 and c > 0, got {m}, {c}")));
        }
        Ok(Self { m, c })
    }

    pub fn op(&self, g: Generator) -> FirstOrderOp {
        let i = C64::i();
        let mut op = FirstOrderOp::zero();
        match g {
            Generator::H => op.a[0] = AffineCoeff::constant(i * self.c),
            Generator::P(j) => op.a[j + 1] = AffineCoeff::constant(i),
            Generator::J(l) => {
                for j in 0..3 {
                    for k in 0..3 {
                        let e = levi_civita(l, j, k);
                        if e != 0.0 {
                            op.a[k + 1] = op.a[k + 1].add(AffineCoeff::linear(j + 1, -i * e));
                        }
                    }
                }
            }
            Generator::K(j) => {
                op.a[j + 1] = AffineCoeff::linear(0, i / self.c);
                op.b = AffineCoeff::linear(j + 1, C64::new(-self.m, 0.0));
            }
            Generator::M => op.b = AffineCoeff::constant(C64::new(self.m, 0.0)),
        }
        op
    }

    /// `([A, B] φ)(x)`; needs second-order jets of `φ`.
    pub fn commutator(&self, a: Generator, b: Generator, phi: &Jet, x: &[f64; 4]) -> Result<C64> {
        if phi.order < 2 {
            return Err(Error::InsufficientJetOrder {
                required: 2,
                available: phi.order,
            });
        }
        let (oa, ob) = (self.op(a), self.op(b));
        let ab = oa.apply(&ob.apply(phi, x)?, x)?;
        let ba = ob.apply(&oa.apply(phi, x)?, x)?;
        Ok(ab.v - ba.v)
    }

    /// `(Wφ)(x)` for the internal-energy Casimir `W = H − P²/2M`, composed
    /// from the first-order generators.
    pub fn casimir(&self, phi: &Jet, x: &[f64; 4]) -> Result<C64> {
        if phi.order < 2 {
            return Err(Error::InsufficientJetOrder {
                required: 2,
                available: phi.order,
            });
        }
        let mut p2 = C64::new(0.0, 0.0);
        for j in 0..3 {
            let p = self.op(Generator::P(j));
            p2 += p.apply(&p.apply(phi, x)?, x)?.v;
        }
        Ok(self.op(Generator::H).apply(phi, x)?.v - p2 / (2.0 * self.m))
    }

    /// The Casimir written directly as `i c ∂₀ + ∇²/2m`.
    pub fn casimir_direct(&self, phi: &Jet) -> C64 {
        let lap = phi.dd_at(1, 1) + phi.dd_at(2, 2) + phi.dd_at(3, 3);
        C64::i() * self.c * phi.d[0] + lap / (2.0 * self.m)
    }
}

/// One commutation relation `[A, B] = Σ coeff · G`.
#[derive(Debug, Clone)]
struct Relation {
    a: Generator,
    b: Generator,
    rhs: Vec<(C64, Generator)>,
}

fn relations() -> Vec<Relation> {
    use Generator::*;
    let i = C64::i();
    let mut out = Vec::new();
    let rel = |a, b, rhs| Relation { a, b, rhs };
    for j in 0..3 {
        out.push(rel(H, P(j), vec![]));
        out.push(rel(H, J(j), vec![]));
        out.push(rel(H, K(j), vec![(i, P(j))]));
        out.push(rel(M, H, vec![]));
        out.push(rel(M, P(j), vec![]));
        out.push(rel(M, J(j), vec![]));
        out.push(rel(M, K(j), vec![]));
        for k in 0..3 {
            out.push(rel(P(j), P(k), vec![]));
            out.push(rel(K(j), K(k), vec![]));
            let cyc = |g: fn(usize) -> Generator| -> Vec<(C64, Generator)> {
                (0..3)
                    .filter(|&l| levi_civita(j, k, l) != 0.0)
                    .map(|l| (i * levi_civita(j, k, l), g(l)))
                    .collect()
            };
            out.push(rel(J(j), J(k), cyc(J)));
            out.push(rel(J(j), P(k), cyc(P)));
            out.push(rel(J(j), K(k), cyc(K)));
            let delta = if j == k { vec![(i, M)] } else { vec![] };
            out.push(rel(K(j), P(k), delta));
        }
    }
    out
}

/// Maximum deviation per relation over all test functions and points.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorReport {
    /// `(relation, max |([A,B] − rhs) φ|)` in a fixed order.
    pub relations: Vec<(String, f64)>,
    /// Max over relations.
    pub max_deviation: f64,
    /// `max |Wφ − (i c ∂₀ + ∇²/2m) φ|`: the composed Casimir against its
    /// direct second-order form.
    pub casimir_consistency: f64,
}

pub fn generator_commutator_check(
    gen: &GeneratorSet,
    test_fns: &[FieldExpr],
    points: &[[f64; 4]],
) -> Result<CommutatorReport> {
    let rels = relations();
    let mut worst = vec![0.0_f64; rels.len()];
    let mut casimir_consistency = 0.0_f64;
    for f in test_fns {
        for x in points {
            let phi = f.checked_jet(x)?;
            for (r, w) in rels.iter().zip(worst.iter_mut()) {
                let lhs = gen.commutator(r.a, r.b, &phi, x)?;
                let mut rhs = C64::new(0.0, 0.0);
                for (coef, g) in &r.rhs {
                    rhs += coef * gen.op(*g).apply(&phi, x)?.v;
                }
                *w = crate::par::nan_max(*w, (lhs - rhs).norm());
            }
            let w = gen.casimir(&phi, x)?;
            casimir_consistency = crate::par::nan_max(casimir_consistency, (w - gen.casimir_direct(&phi)).norm());
        }
    }
    let relations: Vec<(String, f64)> = rels
        .iter()
        .zip(&worst)
        .map(|(r, &w)| {
            let rhs = if r.rhs.is_empty() {
                "0".to_string()
            } else {
                r.rhs
                    .iter()
                    .map(|(c, g)| format!("({}){}", fmt_coef(*c), g))
                    .collect::<Vec<_>>()
                    .join(" + ")
            };
            (format!("[{},{}] = {}", r.a, r.b, rhs), w)
        })
        .collect();
    let max_deviation = worst.iter().copied().fold(0.0, crate::par::nan_max);
    Ok(CommutatorReport {
        relations,
        max_deviation,
        casimir_consistency,
    })
}

fn fmt_coef(c: C64) -> String {
    match (c.re, c.im) {
        (r, i) if r == 0.0 && i == 1.0 => "i".into(),
        (r, i) if r == 0.0 && i == -1.0 => "-i".into(),
        (r, i) => format!("{r}{i:+}i"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{GaussianPacket, Polynomial};
    use crate::galgroup::Vec3;

    fn gens() -> GeneratorSet {
        GeneratorSet::new(1.7, 1.3).unwrap()
    }

    fn points() -> Vec<[f64; 4]> {
        vec![[0.3, 0.1, -0.4, 0.7], [-1.0, 0.5, 0.2, -0.3], [2.0, -1.2, 0.8, 0.1]]
    }

    #[test]
    fn k_and_p_give_the_mass() {
        let g = gens();
        let pw = FieldExpr::plane_wave(C64::new(1.0, 0.0), Vec3::new(0.4, -1.0, 0.3), 0.2, g.c);
        for x in points() {
            let phi = pw.jet(&x).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    let got = g.commutator(Generator::K(i), Generator::P(j), &phi, &x).unwrap();
                    let expected = if i == j {
                        C64::i() * g.m * phi.v
                    } else {
                        C64::new(0.0, 0.0)
                    };
                    assert!((got - expected).norm() < 1e-10);
                    assert_eq!(
                        g.commutator(Generator::P(i), Generator::P(j), &phi, &x).unwrap(),
                        C64::new(0.0, 0.0)
                    );
                }
            }
        }
    }

    #[test]
    fn hamiltonian_commutes_with_rotations_on_a_bump() {
        let g = gens();
        let bump = FieldExpr::gaussian_bump(0.8, Vec3::new(0.2, -0.1, 0.4)).unwrap();
        for x in points() {
            let phi = bump.jet(&x).unwrap();
            for i in 0..3 {
                assert!(g.commutator(Generator::H, Generator::J(i), &phi, &x).unwrap().norm() < 1e-10);
            }
        }
    }

    #[test]
    fn every_relation_holds_on_builtin_functions() {
        let g = gens();
        let packet = GaussianPacket {
            m: g.m,
            sigma: 0.9,
            center: Vec3::new(0.1, 0.2, -0.1),
            p0: Vec3::new(0.3, 0.0, -0.5),
            c: g.c,
        };
        let fns = vec![
            FieldExpr::plane_wave(C64::new(1.0, 0.5), Vec3::new(0.4, -1.0, 0.3), 0.7, g.c),
            FieldExpr::gaussian_packet(packet).unwrap(),
            FieldExpr::gaussian_bump(1.1, Vec3::zeros()).unwrap(),
            FieldExpr::polynomial(Polynomial::from_terms([([1, 1, 1, 0], 1.0), ([0, 0, 2, 2], 0.5)])).unwrap(),
        ];
        let report = generator_commutator_check(&g, &fns, &points()).unwrap();
        assert_eq!(report.relations.len(), 3 * 7 + 9 * 6);
        assert!(report.max_deviation < 1e-9, "{report:?}");
        assert!(report.casimir_consistency < 1e-12);
    }

    #[test]
    fn casimir_vanishes_on_free_solutions() {
        let g = gens();
        let p = Vec3::new(0.5, -0.2, 0.1);
        let pw = FieldExpr::plane_wave(C64::new(1.0, 0.0), p, p.norm_squared() / (2.0 * g.m), g.c);
        let x = points()[0];
        assert!(g.casimir(&pw.jet(&x).unwrap(), &x).unwrap().norm() < 1e-14);
    }

    #[test]
    fn first_order_jets_are_rejected() {
        let g = gens();
        let f = FieldExpr::gaussian_bump(1.0, Vec3::zeros()).unwrap().derivative(1);
        let err = generator_commutator_check(&g, &[f], &points()).unwrap_err();
        assert_eq!(
            err,
            Error::InsufficientJetOrder {
                required: 2,
                available: 1
            }
        );
    }
}
