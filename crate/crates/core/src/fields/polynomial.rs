//! Real polynomials in `(x⁰, x¹, x², x³)`.

use std::collections::BTreeMap;

use super::jet::{sym_index, Jet};
use crate::galgroup::Affine4;

/// Exponents of `x⁰, x¹, x², x³` in one monomial.
pub type Exponents = [u8; 4];

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Exponents, f64>,
}

fn total(e: &Exponents) -> u32 {
    e.iter().map(|&k| k as u32).sum()
}

fn ipow(x: f64, k: u8) -> f64 {
    x.powi(k as i32)
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::from_terms([([0; 4], c)])
    }

    /// The coordinate `x^μ`.
    pub fn coordinate(mu: usize) -> Self {
        let mut e = [0; 4];
        e[mu] = 1;
        Self::from_terms([(e, 1.0)])
    }

    /// `c + Σ_μ k_μ x^μ`.
    pub fn affine(k: [f64; 4], c: f64) -> Self {
        let mut p = Self::constant(c);
        for (mu, &kmu) in k.iter().enumerate() {
            p = p + Self::coordinate(mu).scale(kmu);
        }
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exponents, f64)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            *p.terms.entry(e).or_insert(0.0) += c;
        }
        p.prune();
        p
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| *c != 0.0);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &f64)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(total).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (*e, c * s)))
    }

    pub fn eval(&self, x: &[f64; 4]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c * (0..4).map(|mu| ipow(x[mu], e[mu])).product::<f64>())
            .sum()
    }

    /// Exact value and derivatives up to second order.
    pub fn jet(&self, x: &[f64; 4]) -> Jet {
        let mut out = Jet::zero();
        for (e, &c) in &self.terms {
            // Powers and their first two derivatives per axis.
            let mut p = [[0.0; 3]; 4];
            for mu in 0..4 {
                let k = e[mu];
                let kf = k as f64;
                p[mu][0] = ipow(x[mu], k);
                p[mu][1] = if k >= 1 { kf * ipow(x[mu], k - 1) } else { 0.0 };
                p[mu][2] = if k >= 2 {
                    kf * (kf - 1.0) * ipow(x[mu], k - 2)
                } else {
                    0.0
                };
            }
            let mono = |orders: [usize; 4]| -> f64 { (0..4).map(|mu| p[mu][orders[mu]]).product::<f64>() };
            out.v += c * mono([0; 4]);
            for mu in 0..4 {
                let mut o = [0; 4];
                o[mu] = 1;
                out.d[mu] += c * mono(o);
                for nu in mu..4 {
                    let mut o = [0; 4];
                    o[mu] += 1;
                    o[nu] += 1;
                    out.dd[sym_index(mu, nu)] += c * mono(o);
                }
            }
        }
        out
    }

    /// Gradient `∂_μ p` as a polynomial.
    pub fn partial(&self, mu: usize) -> Self {
        Self::from_terms(self.terms.iter().filter(|(e, _)| e[mu] > 0).map(|(e, c)| {
            let mut e2 = *e;
            e2[mu] -= 1;
            (e2, c * e[mu] as f64)
        }))
    }

    /// `p(M x + v)`.
    pub fn pullback(&self, t: &Affine4) -> Self {
        let images: Vec<Polynomial> = (0..4)
            .map(|a| {
                let k = [t.m[(a, 0)], t.m[(a, 1)], t.m[(a, 2)], t.m[(a, 3)]];
                Polynomial::affine(k, t.v[a])
            })
            .collect();
        let mut out = Polynomial::zero();
        for (e, &c) in &self.terms {
            let mut term = Polynomial::constant(c);
            for a in 0..4 {
                for _ in 0..e[a] {
                    term = &term * &images[a];
                }
            }
            out = out + term;
        }
        out
    }
}

impl std::ops::Add for Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: Polynomial) -> Polynomial {
        Polynomial::from_terms(self.terms.into_iter().chain(rhs.terms))
    }
}

impl std::ops::Neg for Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl std::ops::Sub for Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: Polynomial) -> Polynomial {
        self + (-rhs)
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                out.push((e, ca * cb));
            }
        }
        Polynomial::from_terms(out)
    }
}
