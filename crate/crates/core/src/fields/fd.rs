//! Fourth-order central-difference jets.

use super::expr::FieldExpr;
use super::jet::{sym_index, Jet, C64};
use crate::error::{Error, Result};

const FIRST: [(f64, f64); 2] = [(1.0, 8.0 / 12.0), (2.0, -1.0 / 12.0)];

/// Cross-validation jet of `f` at `x` using values only.
pub fn fd_jet(f: &FieldExpr, x: &[f64; 4], h: f64) -> Result<Jet> {
    fd_jet_with(|p| f.value(p), x, h)
}

/// Fourth-order jet of an arbitrary pointwise evaluator.
///
/// Pure second derivatives use the five-point stencil; mixed ones the tensor
/// product of the first-derivative stencil.
pub fn fd_jet_with<F>(f: F, x: &[f64; 4], h: f64) -> Result<Jet>
where
    F: Fn(&[f64; 4]) -> Result<C64>,
{
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    let at = |shifts: &[(usize, f64)]| -> Result<C64> {
        let mut p = *x;
        for &(mu, s) in shifts {
            p[mu] += s * h;
        }
        f(&p)
    };
    let v = at(&[])?;
    let mut jet = Jet::constant(v);
    for mu in 0..4 {
        let mut d = C64::new(0.0, 0.0);
        for &(k, w) in &FIRST {
            d += (at(&[(mu, k)])? - at(&[(mu, -k)])?) * w;
        }
        jet.d[mu] = d / h;

        let pure =
            -at(&[(mu, 2.0)])? + at(&[(mu, 1.0)])? * 16.0 - v * 30.0 + at(&[(mu, -1.0)])? * 16.0 - at(&[(mu, -2.0)])?;
        jet.dd[sym_index(mu, mu)] = pure / (12.0 * h * h);

        for nu in mu + 1..4 {
            let mut acc = C64::new(0.0, 0.0);
            for &(a, wa) in &FIRST {
                for &(b, wb) in &FIRST {
                    let quad = at(&[(mu, a), (nu, b)])? - at(&[(mu, a), (nu, -b)])? - at(&[(mu, -a), (nu, b)])?
                        + at(&[(mu, -a), (nu, -b)])?;
                    acc += quad * (wa * wb);
                }
            }
            jet.dd[sym_index(mu, nu)] = acc / (h * h);
        }
    }
    Ok(jet)
}
