//! Second-order jets of complex fields on spacetime.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Position of the unordered pair `(μ, ν)` in the packed second-derivative array.
pub const fn sym_index(mu: usize, nu: usize) -> usize {
    let (i, j) = if mu <= nu { (mu, nu) } else { (nu, mu) };
    i * 4 - i * (i + 1) / 2 + j
}

/// Value plus first and second partial derivatives at one point.
///
/// `order` records how many derivative levels are meaningful: a jet built by
/// differentiating another jet loses one level. Entries above `order` are
/// zero and must not be read.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: C64,
    pub d: [C64; 4],
    pub dd: [C64; 10],
    pub order: u8,
}

pub type JetValue = Jet;

impl Jet {
    pub fn constant(v: C64) -> Self {
        Self {
            v,
            d: [ZERO; 4],
            dd: [ZERO; 10],
            order: 2,
        }
    }

    pub fn real(v: f64) -> Self {
        Self::constant(C64::new(v, 0.0))
    }

    pub fn zero() -> Self {
        Self::constant(ZERO)
    }

    /// The coordinate function `x^μ` evaluated at `x`.
    pub fn coordinate(mu: usize, x: &[f64; 4]) -> Self {
        let mut j = Self::real(x[mu]);
        j.d[mu] = C64::new(1.0, 0.0);
        j
    }

    pub fn dd_at(&self, mu: usize, nu: usize) -> C64 {
        self.dd[sym_index(mu, nu)]
    }

    pub fn set_dd(&mut self, mu: usize, nu: usize, value: C64) {
        self.dd[sym_index(mu, nu)] = value;
    }

    /// Jet of `∂_μ f`, one order lower.
    pub fn derivative(&self, mu: usize) -> Option<Jet> {
        if self.order == 0 {
            return None;
        }
        let mut out = Jet {
            v: self.d[mu],
            d: [ZERO; 4],
            dd: [ZERO; 10],
            order: self.order - 1,
        };
        if out.order >= 1 {
            for nu in 0..4 {
                out.d[nu] = self.dd_at(mu, nu);
            }
        }
        Some(out)
    }

    pub fn scale(&self, s: C64) -> Jet {
        Jet {
            v: self.v * s,
            d: self.d.map(|z| z * s),
            dd: self.dd.map(|z| z * s),
            order: self.order,
        }
    }

    pub fn scale_re(&self, s: f64) -> Jet {
        self.scale(C64::new(s, 0.0))
    }

    pub fn conj(&self) -> Jet {
        Jet {
            v: self.v.conj(),
            d: self.d.map(|z| z.conj()),
            dd: self.dd.map(|z| z.conj()),
            order: self.order,
        }
    }

    pub fn re(&self) -> Jet {
        let re = |z: C64| C64::new(z.re, 0.0);
        Jet {
            v: re(self.v),
            d: self.d.map(re),
            dd: self.dd.map(re),
            order: self.order,
        }
    }

    /// Chain rule for `g(f)` given `g(v)`, `g′(v)`, `g″(v)`.
    pub fn compose(&self, g0: C64, g1: C64, g2: C64) -> Jet {
        let mut out = Jet {
            v: g0,
            d: self.d.map(|z| z * g1),
            dd: [ZERO; 10],
            order: self.order,
        };
        for mu in 0..4 {
            for nu in mu..4 {
                let k = sym_index(mu, nu);
                out.dd[k] = g2 * self.d[mu] * self.d[nu] + g1 * self.dd[k];
            }
        }
        out
    }

    pub fn exp(&self) -> Jet {
        let e = self.v.exp();
        self.compose(e, e, e)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Jet {
        let r = self.v.inv();
        self.compose(self.v.ln(), r, -r * r)
    }

    pub fn recip(&self) -> Jet {
        let r = self.v.inv();
        self.compose(r, -r * r, 2.0 * r * r * r)
    }

    pub fn norm_sqr(&self) -> Jet {
        (*self * self.conj()).re()
    }

    pub fn is_finite(&self) -> bool {
        let ok = |z: &C64| z.re.is_finite() && z.im.is_finite();
        ok(&self.v) && self.d.iter().all(ok) && self.dd.iter().all(ok)
    }

    /// Largest modulus over value and all meaningful derivatives.
    pub fn max_abs(&self) -> f64 {
        let mut m = self.v.norm();
        if self.order >= 1 {
            m = self.d.iter().fold(m, |a, z| a.max(z.norm()));
        }
        if self.order >= 2 {
            m = self.dd.iter().fold(m, |a, z| a.max(z.norm()));
        }
        m
    }

    /// Largest modulus of the difference over the levels both jets carry.
    pub fn max_diff(&self, other: &Jet) -> f64 {
        let mut diff = *self - *other;
        diff.order = self.order.min(other.order);
        diff.max_abs()
    }
}

impl Add for Jet {
    type Output = Jet;

    fn add(self, rhs: Jet) -> Jet {
        let mut out = self;
        out.v += rhs.v;
        for k in 0..4 {
            out.d[k] += rhs.d[k];
        }
        for k in 0..10 {
            out.dd[k] += rhs.dd[k];
        }
        out.order = self.order.min(rhs.order);
        out
    }
}

impl Sub for Jet {
    type Output = Jet;

    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;

    fn neg(self) -> Jet {
        self.scale_re(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;

    fn mul(self, rhs: Jet) -> Jet {
        let (a, b) = (self, rhs);
        let mut out = Jet {
            v: a.v * b.v,
            d: [ZERO; 4],
            dd: [ZERO; 10],
            order: a.order.min(b.order),
        };
        for mu in 0..4 {
            out.d[mu] = a.d[mu] * b.v + a.v * b.d[mu];
        }
        for mu in 0..4 {
            for nu in mu..4 {
                let k = sym_index(mu, nu);
                out.dd[k] = a.dd[k] * b.v + a.d[mu] * b.d[nu] + a.d[nu] * b.d[mu] + a.v * b.dd[k];
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sym_index_is_a_bijection_onto_ten_slots() {
        let mut seen = [false; 10];
        for mu in 0..4 {
            for nu in 0..4 {
                assert_eq!(sym_index(mu, nu), sym_index(nu, mu));
                seen[sym_index(mu, nu)] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
        assert_eq!(sym_index(3, 3), 9);
    }

    #[test]
    fn product_rule_on_coordinates() {
        let x = [0.5, 2.0, -1.0, 3.0];
        let j = Jet::coordinate(1, &x) * Jet::coordinate(1, &x) * Jet::coordinate(2, &x);
        // x1² x2
        assert_eq!(j.v.re, -4.0);
        assert_eq!(j.d[1].re, -4.0);
        assert_eq!(j.d[2].re, 4.0);
        assert_eq!(j.dd_at(1, 1).re, -2.0);
        assert_eq!(j.dd_at(1, 2).re, 4.0);
        assert_eq!(j.dd_at(2, 2).re, 0.0);
    }

    #[test]
    fn exp_of_ln_is_identity() {
        let x = [0.1, 0.2, 0.3, 0.4];
        let mut j = Jet::coordinate(1, &x) * Jet::coordinate(3, &x).scale(C64::new(1.0, 2.0));
        j = j + Jet::real(1.5);
        let back = j.ln().exp();
        assert!(back.max_diff(&j) < 1e-14);
        let one = j * j.recip();
        assert!(one.max_diff(&Jet::real(1.0)) < 1e-14);
    }

    #[test]
    fn derivative_drops_an_order() {
        let x = [0.0, 3.0, 0.0, 0.0];
        let j = Jet::coordinate(1, &x) * Jet::coordinate(1, &x);
        let d = j.derivative(1).unwrap();
        assert_eq!(d.order, 1);
        assert_eq!(d.v.re, 6.0);
        assert_eq!(d.d[1].re, 2.0);
        let dd = d.derivative(1).unwrap();
        assert_eq!(dd.order, 0);
        assert_eq!(dd.v.re, 2.0);
        assert!(dd.derivative(1).is_none());
    }
}
