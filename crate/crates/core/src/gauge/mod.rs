//! Global and local U(1) actions, the probability current, and a generic
//! Noether-current divergence evaluator.

mod noether;

pub use noether::{
    noether_current, noether_divergence, FreeSchrodingerLagrangian, NoetherSteps, PointLagrangian, SymmetrySpec,
};

use crate::error::{Error, Result};
use crate::fields::{FieldExpr, GaugeConfig, MatterConfig, Polynomial, VectorField, C64};

/// Real gauge parameter `λ(x)`, a polynomial of degree at most two.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeFunction {
    lambda: Polynomial,
}

impl GaugeFunction {
    pub fn new(lambda: Polynomial) -> Result<Self> {
        let degree = lambda.degree();
        if degree > 2 {
            return Err(Error::DegreeTooHigh { degree, max: 2 });
        }
        Ok(Self { lambda })
    }

    pub fn constant(l: f64) -> Self {
        Self {
            lambda: Polynomial::constant(l),
        }
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.lambda
    }

    pub fn expr(&self) -> FieldExpr {
        FieldExpr::polynomial(self.lambda.clone()).expect("degree checked on construction")
    }

    pub fn is_static(&self) -> bool {
        self.lambda.partial(0).is_zero()
    }
}

/// `ψ ↦ e^{−iλ₀} ψ`.
pub fn apply_global_u1(lambda0: f64, m: &MatterConfig) -> MatterConfig {
    MatterConfig::new(m.psi.phase_mul(Polynomial::constant(-lambda0)).expect("constant phase"))
}

/// `ψ ↦ e^{−iλ}ψ`, `A₀ ↦ A₀ + (1/q)∂₀λ`, `A ↦ A + (1/q)∇λ`.
pub fn apply_local_u1(
    lam: &GaugeFunction,
    m: &MatterConfig,
    a: &GaugeConfig,
    q: f64,
) -> Result<(MatterConfig, GaugeConfig)> {
    if q == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    let psi = m.psi.phase_mul(-lam.lambda.clone())?;
    let shift = |mu: usize| FieldExpr::polynomial(lam.lambda.partial(mu).scale(1.0 / q)).expect("degree ≤ 1");
    let a0 = a.a0.clone() + shift(0);
    let avec = std::array::from_fn(|k| a.avec[k].clone() + shift(k + 1));
    Ok((MatterConfig::new(psi), GaugeConfig::new(a0, avec)))
}

/// Probability density `cψ*ψ` and current `(i/2m)(ψ∇ψ* − ψ*∇ψ)`.
#[derive(Debug, Clone)]
pub struct ProbabilityCurrent {
    pub density: FieldExpr,
    pub current: VectorField,
}

impl ProbabilityCurrent {
    /// `∂₀(density) + ∇·current`.
    pub fn divergence(&self, x: &[f64; 4]) -> Result<f64> {
        let mut div = self.density.checked_jet(x)?.d[0].re;
        for k in 0..3 {
            div += self.current[k].checked_jet(x)?.d[k + 1].re;
        }
        Ok(div)
    }

    pub fn values(&self, x: &[f64; 4]) -> Result<(f64, [f64; 3])> {
        let d = self.density.value(x)?.re;
        let mut j = [0.0; 3];
        for k in 0..3 {
            j[k] = self.current[k].value(x)?.re;
        }
        Ok((d, j))
    }
}

pub fn u1_probability_current(m: &MatterConfig, mass: f64, c: f64) -> ProbabilityCurrent {
    let psi = &m.psi;
    let conj = psi.conj();
    let density = (conj.clone() * psi.clone()).re().scale_re(c);
    let current = std::array::from_fn(|k| {
        let d = psi.derivative(k + 1);
        (psi.clone() * d.conj() - conj.clone() * d)
            .scale(C64::new(0.0, 1.0 / (2.0 * mass)))
            .re()
    });
    ProbabilityCurrent { density, current }
}
