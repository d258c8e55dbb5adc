use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fields::{FieldExpr, Jet, C64};

/// Lagrangian density as a function of field values, their first
/// derivatives and the point. Fields are treated as independent complex
/// arguments, so `ψ` and `ψ*` occupy separate slots.
pub trait PointLagrangian: Send + Sync {
    fn eval(&self, phi: &[C64], dphi: &[[C64; 4]], x: &[f64; 4]) -> C64;
}

/// `(ic/2)(ψ*∂₀ψ − ψ∂₀ψ*) − (1/2m)∇ψ*·∇ψ` over the slots `[ψ, ψ*]`.
#[derive(Debug, Clone, Copy)]
pub struct FreeSchrodingerLagrangian {
    pub m: f64,
    pub c: f64,
}

impl PointLagrangian for FreeSchrodingerLagrangian {
    fn eval(&self, phi: &[C64], dphi: &[[C64; 4]], _x: &[f64; 4]) -> C64 {
        let (psi, psi_c) = (phi[0], phi[1]);
        let (d, d_c) = (&dphi[0], &dphi[1]);
        let time = C64::new(0.0, self.c / 2.0) * (psi_c * d[0] - psi * d_c[0]);
        let grad: C64 = (1..4).map(|k| d_c[k] * d[k]).sum();
        time - grad / (2.0 * self.m)
    }
}

type FieldVariation = Arc<dyn Fn(&[C64]) -> Vec<C64> + Send + Sync>;
type CoordVariation = Arc<dyn Fn(&[f64; 4]) -> [f64; 4] + Send + Sync>;

/// One-parameter symmetry: `Λ̄` per field slot and `χ̄` per coordinate.
#[derive(Clone)]
pub struct SymmetrySpec {
    pub name: String,
    pub field_variation: FieldVariation,
    pub coord_variation: CoordVariation,
}

impl fmt::Debug for SymmetrySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymmetrySpec")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

impl SymmetrySpec {
    fn spacetime(name: String, chi: impl Fn(&[f64; 4]) -> [f64; 4] + Send + Sync + 'static) -> Self {
        Self {
            name,
            field_variation: Arc::new(|phi: &[C64]| vec![C64::new(0.0, 0.0); phi.len()]),
            coord_variation: Arc::new(chi),
        }
    }

    pub fn time_translation() -> Self {
        Self::spacetime("time_translation".into(), |_| [1.0, 0.0, 0.0, 0.0])
    }

    /// Translation along spatial axis `axis ∈ {0, 1, 2}`.
    pub fn space_translation(axis: usize) -> Self {
        assert!(axis < 3, "spatial axis out of range");
        Self::spacetime(format!("space_translation_{axis}"), move |_| {
            let mut chi = [0.0; 4];
            chi[axis + 1] = 1.0;
            chi
        })
    }

    /// Infinitesimal rotation about spatial axis `axis`, `δx = e_axis × x`.
    pub fn rotation(axis: usize) -> Self {
        assert!(axis < 3, "spatial axis out of range");
        Self::spacetime(format!("rotation_{axis}"), move |x| {
            let (i, j) = ((axis + 1) % 3, (axis + 2) % 3);
            let mut chi = [0.0; 4];
            chi[i + 1] = -x[j + 1];
            chi[j + 1] = x[i + 1];
            chi
        })
    }

    /// `Λ̄_ψ = iψ`, `Λ̄_ψ* = −iψ*` over the slots `[ψ, ψ*]`.
    pub fn global_u1() -> Self {
        Self {
            name: "global_u1".into(),
            field_variation: Arc::new(|phi: &[C64]| vec![C64::i() * phi[0], -C64::i() * phi[1]]),
            coord_variation: Arc::new(|_| [0.0; 4]),
        }
    }
}

/// Step sizes for the two finite-difference layers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoetherSteps {
    /// Relative step in field-argument space, scaled by `1 + |value|`.
    pub arg_rel: f64,
    /// Spacetime step for the outer divergence.
    pub x: f64,
}

impl Default for NoetherSteps {
    fn default() -> Self {
        Self { arg_rel: 1e-4, x: 5e-3 }
    }
}

const W1: [f64; 2] = [8.0 / 12.0, -1.0 / 12.0];

fn arg_derivative(g: impl Fn(C64) -> C64, z: C64, rel: f64) -> C64 {
    let h = rel * (1.0 + z.norm());
    let mut acc = C64::new(0.0, 0.0);
    for (s, w) in W1.iter().enumerate() {
        let k = (s + 1) as f64 * h;
        acc += (g(z + k) - g(z - k)) * *w;
    }
    acc / h
}

/// The current `J^ν = Σ_l P_l^ν Λ̄_l + χ̄_μ(δ_μ^ν ℒ − Σ_l P_l^ν ∂_μφ_l)` with
/// `P_l^ν = ∂ℒ/∂(∂_νφ_l)`.
pub fn noether_current(
    l: &dyn PointLagrangian,
    spec: &SymmetrySpec,
    fields: &[FieldExpr],
    x: &[f64; 4],
    arg_rel: f64,
) -> Result<[C64; 4]> {
    let jets: Vec<Jet> = fields.iter().map(|f| f.checked_jet(x)).collect::<Result<_>>()?;
    if let Some(j) = jets.iter().find(|j| j.order < 2) {
        return Err(Error::InsufficientJetOrder {
            required: 2,
            available: j.order,
        });
    }
    let phi: Vec<C64> = jets.iter().map(|j| j.v).collect();
    let dphi: Vec<[C64; 4]> = jets.iter().map(|j| j.d).collect();
    let lag = l.eval(&phi, &dphi, x);
    let lambda = (spec.field_variation)(&phi);
    let chi = (spec.coord_variation)(x);

    let mut current = [C64::new(0.0, 0.0); 4];
    for (nu, out) in current.iter_mut().enumerate() {
        *out = lag * chi[nu];
        for slot in 0..phi.len() {
            let p = arg_derivative(
                |z| {
                    let mut d = dphi.clone();
                    d[slot][nu] = z;
                    l.eval(&phi, &d, x)
                },
                dphi[slot][nu],
                arg_rel,
            );
            let transport: C64 = (0..4).map(|mu| dphi[slot][mu] * chi[mu]).sum();
            *out += p * (lambda[slot] - transport);
        }
    }
    Ok(current)
}

/// `∂_ν J^ν` at `x`, vanishing for on-shell fields. Returns the real part;
/// the current is real whenever the slots hold a field and its conjugate.
pub fn noether_divergence(
    l: &dyn PointLagrangian,
    spec: &SymmetrySpec,
    fields: &[FieldExpr],
    x: &[f64; 4],
    steps: NoetherSteps,
) -> Result<f64> {
    let mut div = C64::new(0.0, 0.0);
    for nu in 0..4 {
        for (s, w) in W1.iter().enumerate() {
            let k = (s + 1) as f64 * steps.x;
            let mut xp = *x;
            let mut xm = *x;
            xp[nu] += k;
            xm[nu] -= k;
            let jp = noether_current(l, spec, fields, &xp, steps.arg_rel)?[nu];
            let jm = noether_current(l, spec, fields, &xm, steps.arg_rel)?[nu];
            div += (jp - jm) * *w;
        }
    }
    Ok(div.re / steps.x)
}
