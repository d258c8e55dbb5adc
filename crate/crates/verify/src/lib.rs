//! Independent reference implementations used to cross-check `galgauge`.
//!
//! Everything is written from the defining formulas on plain closures and
//! central finite differences. Nothing here goes through the library's
//! expression engine, jets or transformation code, so agreement with the
//! library is evidence rather than tautology.

use std::sync::Arc;

use galgauge::fields::{FieldExpr, C64};
use galgauge::galgroup::{GalileiElement, Mat3, Vec3};
use nalgebra::Matrix4;

pub type Scalar = Arc<dyn Fn(&[f64; 4]) -> C64 + Send + Sync>;
pub type Momentum = Arc<dyn Fn(&Vec3) -> C64 + Send + Sync>;

pub fn from_expr(f: &FieldExpr) -> Scalar {
    let f = f.clone();
    Arc::new(move |x| f.value(x).expect("finite field"))
}

pub fn real(f: impl Fn(&[f64; 4]) -> f64 + Send + Sync + 'static) -> Scalar {
    Arc::new(move |x| C64::new(f(x), 0.0))
}

fn shifted(x: &[f64; 4], mu: usize, h: f64) -> [f64; 4] {
    let mut y = *x;
    y[mu] += h;
    y
}

pub const H1: f64 = 1e-4;
pub const H2: f64 = 1e-3;

/// Central first derivative.
pub fn d(f: &dyn Fn(&[f64; 4]) -> C64, x: &[f64; 4], mu: usize) -> C64 {
    (f(&shifted(x, mu, H1)) - f(&shifted(x, mu, -H1))) / (2.0 * H1)
}

/// Central second derivative.
pub fn dd(f: &dyn Fn(&[f64; 4]) -> C64, x: &[f64; 4], mu: usize, nu: usize) -> C64 {
    let h = H2;
    if mu == nu {
        return (f(&shifted(x, mu, h)) - 2.0 * f(x) + f(&shifted(x, mu, -h))) / (h * h);
    }
    let pp = f(&shifted(&shifted(x, mu, h), nu, h));
    let pm = f(&shifted(&shifted(x, mu, h), nu, -h));
    let mp = f(&shifted(&shifted(x, mu, -h), nu, h));
    let mm = f(&shifted(&shifted(x, mu, -h), nu, -h));
    (pp - pm - mp + mm) / (4.0 * h * h)
}

/// `D` built column by column from `(x⁰, x) ↦ (x⁰, Rx + βx⁰)`.
pub fn d_matrix(beta: &Vec3, r: &Mat3) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    for col in 0..4 {
        let x0 = if col == 0 { 1.0 } else { 0.0 };
        let xs = Vec3::from_fn(|i, _| if col == i + 1 { 1.0 } else { 0.0 });
        let ys = r * xs + beta * x0;
        m[(0, col)] = x0;
        for i in 0..3 {
            m[(i + 1, col)] = ys[i];
        }
    }
    m
}

/// The dual: the inverse transpose, so the Euclidean pairing is preserved.
pub fn c_matrix(beta: &Vec3, r: &Mat3) -> Matrix4<f64> {
    d_matrix(beta, r).try_inverse().expect("invertible").transpose()
}

pub fn compose(g2: &GalileiElement, g1: &GalileiElement) -> GalileiElement {
    GalileiElement {
        b: g1.b + g2.b,
        a: g2.a + g2.r * g1.a + g2.beta * g1.b,
        beta: g2.beta + g2.r * g1.beta,
        r: g2.r * g1.r,
    }
}

/// A group element with the model constants needed by its unitary action.
#[derive(Clone, Copy)]
pub struct Frame {
    pub g: GalileiElement,
    pub m: f64,
    pub c: f64,
}

impl Frame {
    pub fn new(g: GalileiElement, m: f64, c: f64) -> Self {
        Self { g, m, c }
    }

    /// Solves `x = (x′⁰ + b, Rx′ + βx′⁰ + a)` for `x′`.
    pub fn preimage(&self, x: &[f64; 4]) -> [f64; 4] {
        let GalileiElement { b, a, beta, r } = self.g;
        let t = x[0] - b;
        let xs = r.transpose() * (Vec3::new(x[1], x[2], x[3]) - a - beta * t);
        [t, xs[0], xs[1], xs[2]]
    }

    /// `mc(−R⁻¹β·x′ − ½β²x′⁰ − ½a·β)`.
    pub fn gamma(&self, xp: &[f64; 4]) -> f64 {
        let GalileiElement { a, beta, r, .. } = self.g;
        let u = r.transpose() * beta;
        let xs = Vec3::new(xp[1], xp[2], xp[3]);
        self.m * self.c * (-u.dot(&xs) - 0.5 * beta.norm_squared() * xp[0] - 0.5 * a.dot(&beta))
    }

    /// `ψ′(x) = e^{−iγ(x′)} ψ(x′)`.
    pub fn boost(&self, psi: Scalar) -> Scalar {
        let fr = *self;
        Arc::new(move |x| {
            let xp = fr.preimage(x);
            C64::from_polar(1.0, -fr.gamma(&xp)) * psi(&xp)
        })
    }

    /// Potentials under the covariant rule: `A′₀ = A₀ − R⁻¹β·A`, `A′ = RA`, at `x′`.
    pub fn boost_potentials(&self, a0: Scalar, a: [Scalar; 3]) -> (Scalar, [Scalar; 3]) {
        let fr = *self;
        let (a0c, ac) = (a0.clone(), a.clone());
        let new_a0: Scalar = Arc::new(move |x| {
            let xp = fr.preimage(x);
            let u = fr.g.r.transpose() * fr.g.beta;
            a0c(&xp) - (0..3).map(|k| ac[k](&xp) * u[k]).sum::<C64>()
        });
        let new_a = std::array::from_fn(|i| {
            let a = a.clone();
            Arc::new(move |x: &[f64; 4]| {
                let xp = fr.preimage(x);
                (0..3).map(|j| a[j](&xp) * fr.g.r[(i, j)]).sum::<C64>()
            }) as Scalar
        });
        (new_a0, new_a)
    }

    /// `(Uφ)(p) = e^{−iΘ} φ(p′)`, `p′ = R⁻¹(p − mcβ)`,
    /// `Θ = ½mc a·β + a·Rp′ − (b/c) p²/2m`.
    pub fn boost_momentum(&self, phi: Momentum) -> Momentum {
        let fr = *self;
        Arc::new(move |p| {
            let GalileiElement { b, a, beta, r } = fr.g;
            let (m, c) = (fr.m, fr.c);
            let pp = r.transpose() * (p - beta * (m * c));
            let theta = 0.5 * m * c * a.dot(&beta) + a.dot(&(r * pp)) - (b / c) * p.norm_squared() / (2.0 * m);
            C64::from_polar(1.0, -theta) * phi(&pp)
        })
    }
}

/// `½mc(a2·R2β1 − β2·R2a1 + b1 β2·R2β1)`.
pub fn omega(g2: &GalileiElement, g1: &GalileiElement, m: f64, c: f64) -> f64 {
    let r2b1 = g2.r * g1.beta;
    0.5 * m * c * (g2.a.dot(&r2b1) - g2.beta.dot(&(g2.r * g1.a)) + g1.b * g2.beta.dot(&r2b1))
}

/// Model constants for the field-equation oracles.
#[derive(Clone, Copy)]
pub struct Model {
    pub m: f64,
    pub c: f64,
    pub q: f64,
}

/// A configuration `(ψ, A₀, A)` as closures.
#[derive(Clone)]
pub struct Config {
    pub psi: Scalar,
    pub a0: Scalar,
    pub a: [Scalar; 3],
}

impl Config {
    pub fn from_library(m: &galgauge::fields::MatterConfig, a: &galgauge::fields::GaugeConfig) -> Self {
        Self {
            psi: from_expr(&m.psi),
            a0: from_expr(&a.a0),
            a: std::array::from_fn(|k| from_expr(&a.avec[k])),
        }
    }

    fn re(f: &Scalar) -> impl Fn(&[f64; 4]) -> C64 + '_ {
        move |x| C64::new(f(x).re, 0.0)
    }

    /// `E = ∇A₀ − ∂₀A`.
    pub fn e(&self, x: &[f64; 4]) -> Vec3 {
        Vec3::from_fn(|i, _| (d(&Self::re(&self.a0), x, i + 1) - d(&Self::re(&self.a[i]), x, 0)).re)
    }

    /// `B = (1/c)∇×A`.
    pub fn b(&self, x: &[f64; 4], c: f64) -> Vec3 {
        Vec3::from_fn(|i, _| {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            (d(&Self::re(&self.a[k]), x, j + 1) - d(&Self::re(&self.a[j]), x, k + 1)).re / c
        })
    }

    pub fn rho(&self, model: &Model, x: &[f64; 4]) -> f64 {
        -model.q * (self.psi)(x).norm_sqr()
    }

    /// `j = −(iq/2m)(ψ∇ψ* − ψ*∇ψ) − (q²/m)A|ψ|²`.
    pub fn j(&self, model: &Model, x: &[f64; 4]) -> Vec3 {
        let psi = (self.psi)(x);
        Vec3::from_fn(|k, _| {
            let dpsi = d(&*self.psi, x, k + 1);
            let cross = psi * dpsi.conj() - psi.conj() * dpsi;
            (C64::new(0.0, -model.q / (2.0 * model.m)) * cross).re
                - model.q * model.q / model.m * (self.a[k])(x).re * psi.norm_sqr()
        })
    }

    /// `ic(∂₀ + iqA₀)ψ + (1/2m)(∇ + iqA)·(∇ + iqA)ψ`.
    pub fn sch(&self, model: &Model, x: &[f64; 4]) -> C64 {
        let i = C64::i();
        let Model { m, c, q } = *model;
        let psi = (self.psi)(x);
        let a = Vec3::from_fn(|k, _| (self.a[k])(x).re);
        let div_a: f64 = (0..3).map(|k| d(&Self::re(&self.a[k]), x, k + 1).re).sum();
        let mut cov = C64::new(0.0, 0.0);
        for k in 1..4 {
            cov += dd(&*self.psi, x, k, k) + 2.0 * i * q * a[k - 1] * d(&*self.psi, x, k);
        }
        cov += (i * q * div_a - q * q * a.norm_squared()) * psi;
        i * c * (d(&*self.psi, x, 0) + i * q * (self.a0)(x).re * psi) + cov / (2.0 * m)
    }

    /// Matter Lagrangian with `f = (c/2)(E² − B²)`.
    pub fn lagrangian_maxwell(&self, model: &Model, x: &[f64; 4]) -> f64 {
        let i = C64::i();
        let Model { m, c, q } = *model;
        let psi = (self.psi)(x);
        let d0 = d(&*self.psi, x, 0) + i * q * (self.a0)(x).re * psi;
        let time = (i * (c / 2.0) * (psi.conj() * d0 - psi * d0.conj())).re;
        let grad: f64 = (0..3)
            .map(|k| (d(&*self.psi, x, k + 1) + i * q * (self.a[k])(x).re * psi).norm_sqr())
            .sum();
        let (e, b) = (self.e(x), self.b(x, c));
        time - grad / (2.0 * m) + 0.5 * c * (e.norm_squared() - b.norm_squared())
    }

    /// Maxwell-specialised Gauss and Ampère residuals:
    /// `c(∇·E − ρ)` and `−c∂₀E + ∇×B − j`.
    pub fn maxwell_residuals(&self, model: &Model, x: &[f64; 4]) -> (f64, Vec3) {
        let c = model.c;
        let this = self.clone();
        let e_at = |i: usize| {
            let s = this.clone();
            move |y: &[f64; 4]| C64::new(s.e(y)[i], 0.0)
        };
        let b_at = |i: usize| {
            let s = this.clone();
            move |y: &[f64; 4]| C64::new(s.b(y, c)[i], 0.0)
        };
        let div_e: f64 = (0..3).map(|i| d_outer(&e_at(i), x, i + 1)).sum();
        let gauss = c * (div_e - self.rho(model, x));
        let j = self.j(model, x);
        let ampere = Vec3::from_fn(|i, _| {
            let (k, l) = ((i + 1) % 3, (i + 2) % 3);
            let curl = d_outer(&b_at(l), x, k + 1) - d_outer(&b_at(k), x, l + 1);
            -c * d_outer(&e_at(i), x, 0) + curl - j[i]
        });
        (gauss, ampere)
    }
}

/// Central difference with the coarser step, for derivatives of derivatives.
fn d_outer(f: &dyn Fn(&[f64; 4]) -> C64, x: &[f64; 4], mu: usize) -> f64 {
    ((f(&shifted(x, mu, H2)) - f(&shifted(x, mu, -H2))) / (2.0 * H2)).re
}

/// Width-`σ` packet variance along one axis at time `t`.
pub fn packet_variance(sigma: f64, m: f64, t: f64) -> f64 {
    let tau = t / (2.0 * m * sigma * sigma);
    sigma * sigma * (1.0 + tau * tau)
}

/// Product of the maps `x̃₀ = x₀ − βx₁, x̃₁ = x₁ − βx₀` for `β1` then `β2`.
pub fn first_order_product(beta1: f64, beta2: f64) -> [[f64; 2]; 2] {
    [
        [1.0 + beta1 * beta2, -(beta1 + beta2)],
        [-(beta1 + beta2), 1.0 + beta1 * beta2],
    ]
}
