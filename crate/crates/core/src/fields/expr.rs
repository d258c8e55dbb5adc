//! Expression trees of closed-form fields with exact second-order jets.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::jet::{Jet, C64};
use super::polynomial::Polynomial;
use crate::error::{Error, Result};
use crate::galgroup::{Affine4, Spacetime4Vector, Variance, Vec3};

/// Maximum total degree of a `Polynomial` node.
pub const MAX_POLY_DEGREE: u32 = 4;
/// Maximum total degree of a phase polynomial.
pub const MAX_PHASE_DEGREE: u32 = 2;

/// Normalized free Schrödinger wave packet (`ℏ = 1`).
///
/// At `t = 0` it is a Gaussian of position spread `sigma` centred on `center`
/// with mean momentum `p0`; it then spreads according to the free evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    pub m: f64,
    pub sigma: f64,
    pub center: Vec3,
    pub p0: Vec3,
    pub c: f64,
}

impl GaussianPacket {
    fn jet(&self, x: &[f64; 4]) -> Jet {
        let t = Jet::coordinate(0, x).scale_re(1.0 / self.c);
        let s2 = self.sigma * self.sigma;
        let i = C64::i();
        // 1 + iτ with τ = t / (2mσ²)
        let w = Jet::real(1.0) + t.scale(i / (2.0 * self.m * s2));
        let w_inv = w.recip();
        let half_log_w = w.ln().scale_re(-0.5);
        let mut log_psi = Jet::zero();
        for axis in 0..3 {
            let xi = Jet::coordinate(axis + 1, x) - Jet::real(self.center[axis]);
            let p = self.p0[axis];
            let u = xi - t.scale_re(p / self.m);
            let gauss = (u * u * w_inv).scale_re(-1.0 / (4.0 * s2));
            let phase = (xi.scale_re(p) - t.scale_re(p * p / (2.0 * self.m))).scale(i);
            log_psi = log_psi + gauss + phase + half_log_w + Jet::real(-0.25 * (2.0 * PI * s2).ln());
        }
        log_psi.exp()
    }

    /// Closed-form position variance along one axis at time `t`.
    pub fn variance_at(&self, t: f64) -> f64 {
        let tau = t / (2.0 * self.m * self.sigma * self.sigma);
        self.sigma * self.sigma * (1.0 + tau * tau)
    }
}

#[derive(Debug)]
pub enum Node {
    Constant(C64),
    /// `amp · exp(i(p·x − E x⁰/c))`.
    PlaneWave {
        amp: C64,
        p: Vec3,
        energy: f64,
        c: f64,
    },
    FreeGaussianPacket(GaussianPacket),
    /// `exp(−|x − center|² / 2σ²)`, static.
    GaussianBump {
        sigma: f64,
        center: Vec3,
    },
    Polynomial(Polynomial),
    /// `exp(iφ) · inner`.
    PhaseMul {
        phase: Polynomial,
        inner: FieldExpr,
    },
    /// `inner(M x + v)`.
    AffinePullback {
        map: Affine4,
        inner: FieldExpr,
    },
    Sum(Vec<FieldExpr>),
    Product(FieldExpr, FieldExpr),
    ScalarMul(C64, FieldExpr),
    Conjugate(FieldExpr),
    RealPart(FieldExpr),
    /// `∂_μ inner`; carries one derivative level fewer than `inner`.
    Derivative {
        mu: usize,
        inner: FieldExpr,
    },
}

/// Shared handle to an immutable expression tree.
#[derive(Debug, Clone)]
pub struct FieldExpr(Arc<Node>);

/// A field with three spatial components.
pub type VectorField = [FieldExpr; 3];

impl FieldExpr {
    fn new(node: Node) -> Self {
        Self(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn constant(v: C64) -> Self {
        Self::new(Node::Constant(v))
    }

    pub fn real(v: f64) -> Self {
        Self::constant(C64::new(v, 0.0))
    }

    pub fn zero() -> Self {
        Self::real(0.0)
    }

    pub fn zero_vector() -> VectorField {
        [Self::zero(), Self::zero(), Self::zero()]
    }

    pub fn plane_wave(amp: C64, p: Vec3, energy: f64, c: f64) -> Self {
        Self::new(Node::PlaneWave { amp, p, energy, c })
    }

    pub fn gaussian_packet(packet: GaussianPacket) -> Result<Self> {
        if !(packet.m > 0.0 && packet.sigma > 0.0 && packet.c > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "packet needs m, sigma, c > 0, got {}, {}, {}",
                packet.m, packet.sigma, packet.c
            )));
        }
        Ok(Self::new(Node::FreeGaussianPacket(packet)))
    }

    pub fn gaussian_bump(sigma: f64, center: Vec3) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "bump width must be positive, got {sigma}"
            )));
        }
        Ok(Self::new(Node::GaussianBump { sigma, center }))
    }

    pub fn polynomial(p: Polynomial) -> Result<Self> {
        let degree = p.degree();
        if degree > MAX_POLY_DEGREE {
            return Err(Error::DegreeTooHigh {
                degree,
                max: MAX_POLY_DEGREE,
            });
        }
        Ok(Self::new(Node::Polynomial(p)))
    }

    /// `exp(iφ) · self`, merging with an outer phase already present.
    pub fn phase_mul(&self, phase: Polynomial) -> Result<Self> {
        let (phase, inner) = match self.node() {
            Node::PhaseMul { phase: p0, inner } => (p0.clone() + phase, inner.clone()),
            _ => (phase, self.clone()),
        };
        let degree = phase.degree();
        if degree > MAX_PHASE_DEGREE {
            return Err(Error::DegreeTooHigh {
                degree,
                max: MAX_PHASE_DEGREE,
            });
        }
        if phase.is_zero() {
            return Ok(inner);
        }
        Ok(Self::new(Node::PhaseMul { phase, inner }))
    }

    /// `x ↦ self(T x)`. Nested pullbacks collapse into one map and phases
    /// are pulled back along with their argument.
    pub fn pullback(&self, t: &Affine4) -> Self {
        match self.node() {
            Node::AffinePullback { map, inner } => Self::new(Node::AffinePullback {
                map: map.after(t),
                inner: inner.clone(),
            }),
            Node::PhaseMul { phase, inner } => Self::new(Node::PhaseMul {
                phase: phase.pullback(t),
                inner: inner.pullback(t),
            }),
            Node::Constant(_) => self.clone(),
            _ => Self::new(Node::AffinePullback {
                map: *t,
                inner: self.clone(),
            }),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(Node::ScalarMul(s, self.clone()))
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn conj(&self) -> Self {
        Self::new(Node::Conjugate(self.clone()))
    }

    pub fn re(&self) -> Self {
        Self::new(Node::RealPart(self.clone()))
    }

    pub fn derivative(&self, mu: usize) -> Self {
        assert!(mu < 4, "spacetime index out of range: {mu}");
        Self::new(Node::Derivative {
            mu,
            inner: self.clone(),
        })
    }

    pub fn sum(terms: Vec<FieldExpr>) -> Self {
        Self::new(Node::Sum(terms))
    }

    /// Jet at raw coordinates `(x⁰, x¹, x², x³)`.
    pub fn jet(&self, x: &[f64; 4]) -> Result<Jet> {
        Ok(match self.node() {
            Node::Constant(v) => Jet::constant(*v),
            Node::PlaneWave { amp, p, energy, c } => {
                let mut arg = Jet::coordinate(0, x).scale_re(-energy / c);
                for k in 0..3 {
                    arg = arg + Jet::coordinate(k + 1, x).scale_re(p[k]);
                }
                arg.scale(C64::i()).exp().scale(*amp)
            }
            Node::FreeGaussianPacket(packet) => packet.jet(x),
            Node::GaussianBump { sigma, center } => {
                let mut r2 = Jet::zero();
                for k in 0..3 {
                    let dx = Jet::coordinate(k + 1, x) - Jet::real(center[k]);
                    r2 = r2 + dx * dx;
                }
                r2.scale_re(-0.5 / (sigma * sigma)).exp()
            }
            Node::Polynomial(p) => p.jet(x),
            Node::PhaseMul { phase, inner } => phase.jet(x).scale(C64::i()).exp() * inner.jet(x)?,
            Node::AffinePullback { map, inner } => pullback_jet(&inner.jet(&map.apply(x))?, map),
            Node::Sum(terms) => {
                let mut acc = Jet::zero();
                for t in terms {
                    acc = acc + t.jet(x)?;
                }
                acc
            }
            Node::Product(a, b) => a.jet(x)? * b.jet(x)?,
            Node::ScalarMul(s, inner) => inner.jet(x)?.scale(*s),
            Node::Conjugate(inner) => inner.jet(x)?.conj(),
            Node::RealPart(inner) => inner.jet(x)?.re(),
            Node::Derivative { mu, inner } => {
                let j = inner.jet(x)?;
                j.derivative(*mu).ok_or(Error::InsufficientJetOrder {
                    required: 1,
                    available: j.order,
                })?
            }
        })
    }

    /// Jet with a finiteness check; the error carries the offending point.
    pub fn checked_jet(&self, x: &[f64; 4]) -> Result<Jet> {
        let j = self.jet(x)?;
        if j.is_finite() {
            Ok(j)
        } else {
            Err(Error::NonFinite(*x))
        }
    }

    pub fn value(&self, x: &[f64; 4]) -> Result<C64> {
        Ok(self.jet(x)?.v)
    }
}

/// Chain rule for `g(x) = f(M x + v)` given the jet of `f` at `M x + v`.
fn pullback_jet(f: &Jet, t: &Affine4) -> Jet {
    let m = &t.m;
    let mut out = Jet {
        v: f.v,
        order: f.order,
        ..Jet::zero()
    };
    for mu in 0..4 {
        out.d[mu] = (0..4).map(|a| f.d[a] * m[(a, mu)]).sum();
    }
    for mu in 0..4 {
        for nu in mu..4 {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..4 {
                for b in 0..4 {
                    acc += f.dd_at(a, b) * (m[(a, mu)] * m[(b, nu)]);
                }
            }
            out.set_dd(mu, nu, acc);
        }
    }
    out
}

/// Exact jet at a contravariant spacetime point.
pub fn eval_jet(f: &FieldExpr, x: &Spacetime4Vector) -> Result<Jet> {
    if x.variance() != Variance::Contravariant {
        return Err(Error::VarianceMismatch {
            expected: "contravariant",
            found: "covariant",
        });
    }
    f.checked_jet(&x.to_array())
}

impl Add for FieldExpr {
    type Output = FieldExpr;

    fn add(self, rhs: FieldExpr) -> FieldExpr {
        FieldExpr::sum(vec![self, rhs])
    }
}

impl Sub for FieldExpr {
    type Output = FieldExpr;

    fn sub(self, rhs: FieldExpr) -> FieldExpr {
        self + (-rhs)
    }
}

impl Neg for FieldExpr {
    type Output = FieldExpr;

    fn neg(self) -> FieldExpr {
        self.scale_re(-1.0)
    }
}

impl Mul for FieldExpr {
    type Output = FieldExpr;

    fn mul(self, rhs: FieldExpr) -> FieldExpr {
        FieldExpr::new(Node::Product(self, rhs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::fd::fd_jet;
    use nalgebra::{Matrix4, Vector4};

    fn sample_exprs() -> Vec<FieldExpr> {
        let packet = GaussianPacket {
            m: 1.3,
            sigma: 0.8,
            center: Vec3::new(0.2, -0.1, 0.3),
            p0: Vec3::new(0.7, 0.2, -0.4),
            c: 1.5,
        };
        let poly = Polynomial::from_terms([
            ([1, 1, 0, 0], 0.3),
            ([0, 0, 2, 1], -0.1),
            ([0, 0, 0, 1], 1.0),
            ([0; 4], 0.5),
        ]);
        let phase = Polynomial::from_terms([([0, 1, 0, 0], 0.4), ([1, 0, 0, 0], -0.2), ([0, 0, 1, 1], 0.1)]);
        let map = Affine4 {
            m: Matrix4::new(
                1.0, 0.0, 0.0, 0.0, 0.3, 0.8, -0.6, 0.0, 0.0, 0.6, 0.8, 0.0, -0.1, 0.0, 0.0, 1.0,
            ),
            v: Vector4::new(0.5, -0.2, 0.1, 0.3),
        };
        let pw = FieldExpr::plane_wave(C64::new(0.5, 0.5), Vec3::new(1.0, -0.5, 0.25), 0.8, 1.5);
        let bump = FieldExpr::gaussian_bump(0.9, Vec3::new(0.1, 0.0, -0.2)).unwrap();
        let pk = FieldExpr::gaussian_packet(packet).unwrap();
        let pl = FieldExpr::polynomial(poly).unwrap();
        vec![
            pw.clone(),
            pk.clone(),
            bump.clone(),
            pl.clone(),
            pk.phase_mul(phase.clone()).unwrap().pullback(&map),
            pw.clone() * bump.clone() + pl.clone().scale(C64::new(0.0, 2.0)),
            pk.conj().re() - pw.clone(),
        ]
    }

    #[test]
    fn plane_wave_example() {
        let pw = FieldExpr::plane_wave(C64::new(1.0, 0.0), Vec3::new(1.0, 0.0, 0.0), 0.5, 1.0);
        let j = eval_jet(&pw, &Spacetime4Vector::contravariant(0.0, Vec3::zeros())).unwrap();
        assert_eq!(j.v, C64::new(1.0, 0.0));
        assert_eq!(j.d[1], C64::new(0.0, 1.0));
        assert_eq!(j.d[0], C64::new(0.0, -0.5));
    }

    #[test]
    fn exact_jets_match_finite_differences() {
        let x = [0.4, 0.3, -0.7, 1.1];
        for f in sample_exprs() {
            let exact = f.jet(&x).unwrap();
            let fd = fd_jet(&f, &x, 1e-3).unwrap();
            let scale = 1.0 + exact.max_abs();
            assert!(exact.max_diff(&fd) / scale < 1e-8, "{f:?}: {}", exact.max_diff(&fd));
        }
    }

    #[test]
    fn pullback_collapses_and_matches_chain_rule() {
        let f = FieldExpr::gaussian_bump(1.0, Vec3::zeros()).unwrap();
        let t1 = Affine4 {
            m: Matrix4::new(
                1.0, 0.0, 0.0, 0.0, 0.5, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 1.0, 0.0,
            ),
            v: Vector4::new(0.0, 1.0, 0.0, 0.0),
        };
        let t2 = Affine4 {
            m: Matrix4::identity() * 1.0,
            v: Vector4::new(0.5, 0.0, -0.3, 0.2),
        };
        let g = f.pullback(&t1).pullback(&t2);
        match g.node() {
            Node::AffinePullback { inner, .. } => assert!(matches!(inner.node(), Node::GaussianBump { .. })),
            other => panic!("expected a single pullback, got {other:?}"),
        }
        let x = [0.3, 0.2, -0.5, 0.7];
        let direct = f.jet(&t1.apply(&t2.apply(&x))).unwrap().v;
        assert!((g.jet(&x).unwrap().v - direct).norm() < 1e-15);
    }

    #[test]
    fn phases_add() {
        let f = FieldExpr::real(2.0);
        let g = f
            .phase_mul(Polynomial::coordinate(1))
            .unwrap()
            .phase_mul(Polynomial::coordinate(1).scale(-1.0))
            .unwrap();
        assert!(matches!(g.node(), Node::Constant(_)));
        let bad = f.phase_mul(&Polynomial::coordinate(1) * &(&Polynomial::coordinate(1) * &Polynomial::coordinate(2)));
        assert!(matches!(bad, Err(Error::DegreeTooHigh { degree: 3, max: 2 })));
    }

    #[test]
    fn conjugate_is_exact() {
        let x = [0.1, -0.3, 0.2, 0.5];
        for f in sample_exprs() {
            assert_eq!(f.conj().jet(&x).unwrap(), f.jet(&x).unwrap().conj());
        }
    }

    #[test]
    fn derivative_nodes_track_order() {
        let f = FieldExpr::polynomial(&Polynomial::coordinate(1) * &Polynomial::coordinate(1)).unwrap();
        let d2 = f.derivative(1).derivative(1);
        let j = d2.jet(&[0.0, 3.0, 0.0, 0.0]).unwrap();
        assert_eq!(j.order, 0);
        assert_eq!(j.v.re, 2.0);
        assert!(matches!(
            d2.derivative(1).jet(&[0.0; 4]),
            Err(Error::InsufficientJetOrder {
                required: 1,
                available: 0
            })
        ));
    }

    #[test]
    fn overflow_is_reported() {
        let f = FieldExpr::polynomial(Polynomial::from_terms([([0, 4, 0, 0], 1e300)])).unwrap();
        let fine = Spacetime4Vector::contravariant(0.0, Vec3::new(1.0, 0.0, 0.0));
        assert!(eval_jet(&f, &fine).is_ok());
        let far = Spacetime4Vector::contravariant(0.0, Vec3::new(1e3, 0.0, 0.0));
        assert!(matches!(eval_jet(&f, &far), Err(Error::NonFinite(_))));
    }

    #[test]
    fn covariant_points_are_rejected() {
        let f = FieldExpr::real(1.0);
        assert!(eval_jet(&f, &Spacetime4Vector::covariant(0.0, Vec3::zeros())).is_err());
    }

    #[test]
    fn packet_solves_free_equation_and_is_normalized() {
        let packet = GaussianPacket {
            m: 0.7,
            sigma: 0.6,
            center: Vec3::zeros(),
            p0: Vec3::new(0.5, 0.0, 0.0),
            c: 2.0,
        };
        let f = FieldExpr::gaussian_packet(packet).unwrap();
        let x = [1.3, 0.2, -0.1, 0.4];
        let j = f.jet(&x).unwrap();
        let lap = j.dd_at(1, 1) + j.dd_at(2, 2) + j.dd_at(3, 3);
        let res = C64::i() * packet.c * j.d[0] + lap / (2.0 * packet.m);
        assert!(res.norm() < 1e-12);
        // crude 3D quadrature of |ψ|² at t = 0
        let (n, l) = (40, 8.0);
        let h = l / n as f64;
        let mut total = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let p = [
                        0.0,
                        -l / 2.0 + a as f64 * h,
                        -l / 2.0 + b as f64 * h,
                        -l / 2.0 + c as f64 * h,
                    ];
                    total += f.value(&p).unwrap().norm_sqr() * h * h * h;
                }
            }
        }
        assert!((total - 1.0).abs() < 1e-6);
    }
}
