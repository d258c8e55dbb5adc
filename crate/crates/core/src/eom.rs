//! Lagrangian densities and pointwise Euler–Lagrange residuals of the
//! gauge-coupled Schrödinger system.

use std::fmt;
use std::sync::Arc;

use nalgebra::Matrix6;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{GaugeConfig, Jet, MatterConfig, C64};
use crate::galgroup::Vec3;

/// Mass, speed scale and coupling, in units with `ℏ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub m: f64,
    pub c: f64,
    pub q: f64,
}

impl ModelParams {
    pub fn new(m: f64, c: f64, q: f64) -> Result<Self> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {m}")));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!("c must be positive, got {c}")));
        }
        if !q.is_finite() {
            return Err(Error::InvalidParameter(format!("coupling must be finite, got {q}")));
        }
        Ok(Self { m, c, q })
    }

    pub fn with_q(self, q: f64) -> Self {
        Self { q, ..self }
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self { m: 1.0, c: 1.0, q: 1.0 }
    }
}

/// Value, gradients and Hessian of `f(E, B)`. The Hessian is ordered
/// `(E₁, E₂, E₃, B₁, B₂, B₃)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FDerivs {
    pub f: f64,
    pub de: Vec3,
    pub db: Vec3,
    pub hess: Matrix6<f64>,
}

pub type CustomF = Arc<dyn Fn(&Vec3, &Vec3) -> FDerivs + Send + Sync>;

#[derive(Clone)]
pub enum GaugeScalarKind {
    /// `(c/2)(E² − B²)`.
    Maxwell,
    /// `(c/2)s + κs²` with `s = E² − B²`.
    Quartic { kappa: f64 },
    /// User-supplied `f` with analytic gradient and Hessian.
    Custom { name: String, eval: CustomF },
}

impl fmt::Debug for GaugeScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Maxwell => write!(f, "Maxwell"),
            Self::Quartic { kappa } => write!(f, "Quartic {{ kappa: {kappa} }}"),
            Self::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

/// Rotation-scalar gauge-field Lagrangian `f(E, B)`.
#[derive(Debug, Clone)]
pub struct GaugeScalarF {
    pub kind: GaugeScalarKind,
    pub c: f64,
}

impl GaugeScalarF {
    pub fn maxwell(c: f64) -> Self {
        Self {
            kind: GaugeScalarKind::Maxwell,
            c,
        }
    }

    pub fn quartic(c: f64, kappa: f64) -> Self {
        Self {
            kind: GaugeScalarKind::Quartic { kappa },
            c,
        }
    }

    pub fn custom(c: f64, name: impl Into<String>, eval: CustomF) -> Self {
        Self {
            kind: GaugeScalarKind::Custom {
                name: name.into(),
                eval,
            },
            c,
        }
    }

    pub fn name(&self) -> String {
        match &self.kind {
            GaugeScalarKind::Maxwell => "maxwell".into(),
            GaugeScalarKind::Quartic { kappa } => format!("quartic(kappa={kappa})"),
            GaugeScalarKind::Custom { name, .. } => name.clone(),
        }
    }

    pub fn eval(&self, e: &Vec3, b: &Vec3) -> FDerivs {
        let c = self.c;
        match &self.kind {
            GaugeScalarKind::Maxwell => self.polynomial_in_s(e, b, 0.5 * c, 0.0),
            GaugeScalarKind::Quartic { kappa } => self.polynomial_in_s(e, b, 0.5 * c, *kappa),
            GaugeScalarKind::Custom { eval, .. } => eval(e, b),
        }
    }

    /// `α s + κ s²` with `s = E² − B²`.
    fn polynomial_in_s(&self, e: &Vec3, b: &Vec3, alpha: f64, kappa: f64) -> FDerivs {
        let s = e.norm_squared() - b.norm_squared();
        let g = alpha + 2.0 * kappa * s; // df/ds
        let mut hess = Matrix6::zeros();
        // s gradient: (2E, −2B)
        let ds: [f64; 6] = [
            2.0 * e[0],
            2.0 * e[1],
            2.0 * e[2],
            -2.0 * b[0],
            -2.0 * b[1],
            -2.0 * b[2],
        ];
        for i in 0..6 {
            for j in 0..6 {
                hess[(i, j)] = 2.0 * kappa * ds[i] * ds[j];
            }
            hess[(i, i)] += if i < 3 { 2.0 * g } else { -2.0 * g };
        }
        FDerivs {
            f: alpha * s + kappa * s * s,
            de: e * (2.0 * g),
            db: b * (-2.0 * g),
            hess,
        }
    }
}

/// First-order jets of `E` and `B` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmJets {
    pub e: [Jet; 3],
    pub b: [Jet; 3],
}

impl EmJets {
    pub fn e_value(&self) -> Vec3 {
        Vec3::from_fn(|i, _| self.e[i].v.re)
    }

    pub fn b_value(&self) -> Vec3 {
        Vec3::from_fn(|i, _| self.b[i].v.re)
    }
}

/// Second-order jets of the potentials at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialJets {
    pub a0: Jet,
    pub a: [Jet; 3],
}

impl PotentialJets {
    pub fn eval(cfg: &GaugeConfig, x: &[f64; 4]) -> Result<Self> {
        Ok(Self {
            a0: cfg.a0.checked_jet(x)?,
            a: [
                cfg.avec[0].checked_jet(x)?,
                cfg.avec[1].checked_jet(x)?,
                cfg.avec[2].checked_jet(x)?,
            ],
        })
    }

    fn d(j: &Jet, mu: usize) -> Result<Jet> {
        j.derivative(mu).ok_or(Error::InsufficientJetOrder {
            required: 2,
            available: j.order,
        })
    }

    /// `E = ∇A₀ − ∂₀A`, `B = (1/c)∇×A`.
    pub fn em(&self, c: f64) -> Result<EmJets> {
        let mut e = [Jet::zero(); 3];
        let mut b = [Jet::zero(); 3];
        for i in 0..3 {
            e[i] = Self::d(&self.a0, i + 1)? - Self::d(&self.a[i], 0)?;
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            b[i] = (Self::d(&self.a[k], j + 1)? - Self::d(&self.a[j], k + 1)?).scale_re(1.0 / c);
        }
        Ok(EmJets { e, b })
    }
}

pub fn em_jets(a: &GaugeConfig, c: f64, x: &[f64; 4]) -> Result<EmJets> {
    PotentialJets::eval(a, x)?.em(c)
}

/// First-order jets of `∇_E f` and `∇_B f` along the given field jets.
pub fn f_gradient_jets(f: &GaugeScalarF, em: &EmJets) -> ([Jet; 3], [Jet; 3]) {
    let d = f.eval(&em.e_value(), &em.b_value());
    let field = |k: usize| if k < 3 { &em.e[k] } else { &em.b[k - 3] };
    let comp = |row: usize, value: f64| -> Jet {
        let mut out = Jet::real(value);
        out.order = 1;
        for mu in 0..4 {
            let mut acc = 0.0;
            for k in 0..6 {
                acc += d.hess[(row, k)] * field(k).d[mu].re;
            }
            out.d[mu] = C64::new(acc, 0.0);
        }
        out
    };
    (
        std::array::from_fn(|i| comp(i, d.de[i])),
        std::array::from_fn(|i| comp(i + 3, d.db[i])),
    )
}

/// First-order jets of `ρ` and `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceJets {
    pub rho: Jet,
    pub j: [Jet; 3],
}

impl SourceJets {
    pub fn rho_value(&self) -> f64 {
        self.rho.v.re
    }

    pub fn j_value(&self) -> Vec3 {
        Vec3::from_fn(|i, _| self.j[i].v.re)
    }
}

/// `ρ = −q|ψ|²`, `j = −(iq/2m)(ψ∇ψ* − ψ*∇ψ) − (q²/m)A|ψ|²`.
pub fn source_jets(psi: &Jet, pot: &PotentialJets, p: &ModelParams) -> Result<SourceJets> {
    let (q, m) = (p.q, p.m);
    let conj = psi.conj();
    let dens = (*psi * conj).re();
    let mut j = [Jet::zero(); 3];
    for k in 0..3 {
        let dpsi = PotentialJets::d(psi, k + 1)?;
        let dconj = dpsi.conj();
        let cross = *psi * dconj - conj * dpsi;
        j[k] = (cross.scale(C64::new(0.0, -q / (2.0 * m))) - pot.a[k] * dens.scale_re(q * q / m)).re();
    }
    Ok(SourceJets {
        rho: dens.scale_re(-q),
        j,
    })
}

pub fn sources(m: &MatterConfig, a: &GaugeConfig, p: &ModelParams, x: &[f64; 4]) -> Result<SourceJets> {
    source_jets(&m.psi.checked_jet(x)?, &PotentialJets::eval(a, x)?, p)
}

/// `(ic/2)(ψ* ∂₀ψ − ψ ∂₀ψ*) − (1/2m)∇ψ·∇ψ*`.
pub fn lagrangian_free(m: &MatterConfig, p: &ModelParams, x: &[f64; 4]) -> Result<f64> {
    let psi = m.psi.checked_jet(x)?;
    Ok(free_density(&psi, p))
}

fn free_density(psi: &Jet, p: &ModelParams) -> f64 {
    let i = C64::i();
    let time = i * (p.c / 2.0) * (psi.v.conj() * psi.d[0] - psi.v * psi.d[0].conj());
    let grad: f64 = (1..4).map(|k| psi.d[k].norm_sqr()).sum();
    time.re - grad / (2.0 * p.m)
}

/// Gauge-covariant matter Lagrangian plus `f(E, B)`.
pub fn lagrangian_full(
    m: &MatterConfig,
    a: &GaugeConfig,
    f: &GaugeScalarF,
    p: &ModelParams,
    x: &[f64; 4],
) -> Result<f64> {
    let psi = m.psi.checked_jet(x)?;
    let pot = PotentialJets::eval(a, x)?;
    let em = pot.em(p.c)?;
    let i = C64::i();
    let q = p.q;
    let d0 = psi.d[0] + i * q * pot.a0.v.re * psi.v;
    let time = i * (p.c / 2.0) * (psi.v.conj() * d0 - psi.v * d0.conj());
    let grad: f64 = (0..3)
        .map(|k| (psi.d[k + 1] + i * q * pot.a[k].v.re * psi.v).norm_sqr())
        .sum();
    let fv = f.eval(&em.e_value(), &em.b_value()).f;
    Ok(time.re - grad / (2.0 * p.m) + fv)
}

/// `ic(∂₀ + iqA₀)ψ + (1/2m)(∇ + iqA)²ψ` from jets.
pub fn sch_residual_jets(psi: &Jet, pot: &PotentialJets, p: &ModelParams) -> C64 {
    let i = C64::i();
    let q = p.q;
    let a = Vec3::from_fn(|k, _| pot.a[k].v.re);
    let div_a: f64 = (0..3).map(|k| pot.a[k].d[k + 1].re).sum();
    let mut cov_lap = psi.dd_at(1, 1) + psi.dd_at(2, 2) + psi.dd_at(3, 3);
    for k in 0..3 {
        cov_lap += 2.0 * i * q * a[k] * psi.d[k + 1];
    }
    cov_lap += (i * q * div_a - q * q * a.norm_squared()) * psi.v;
    i * p.c * (psi.d[0] + i * q * pot.a0.v.re * psi.v) + cov_lap / (2.0 * p.m)
}

pub fn sch_residual(m: &MatterConfig, a: &GaugeConfig, p: &ModelParams, x: &[f64; 4]) -> Result<C64> {
    let psi = m.psi.checked_jet(x)?;
    if psi.order < 2 {
        return Err(Error::InsufficientJetOrder {
            required: 2,
            available: psi.order,
        });
    }
    Ok(sch_residual_jets(&psi, &PotentialJets::eval(a, x)?, p))
}

pub fn charge_density(m: &MatterConfig, p: &ModelParams, x: &[f64; 4]) -> Result<f64> {
    Ok(-p.q * m.psi.checked_jet(x)?.v.norm_sqr())
}

pub fn current_density(m: &MatterConfig, a: &GaugeConfig, p: &ModelParams, x: &[f64; 4]) -> Result<Vec3> {
    Ok(sources(m, a, p, x)?.j_value())
}

/// `∇·F − cρ` for given jets of `F = ∇_E f` and `ρ`.
pub fn gauss_from(fe: &[Jet; 3], rho: f64, c: f64) -> f64 {
    (0..3).map(|i| fe[i].d[i + 1].re).sum::<f64>() - c * rho
}

/// `−∂₀F − (1/c)∇×G − j` for jets of `F = ∇_E f`, `G = ∇_B f`.
pub fn ampere_from(fe: &[Jet; 3], fb: &[Jet; 3], j: &Vec3, c: f64) -> Vec3 {
    Vec3::from_fn(|i, _| {
        let (k, l) = ((i + 1) % 3, (i + 2) % 3);
        let curl = fb[l].d[k + 1].re - fb[k].d[l + 1].re;
        -fe[i].d[0].re - curl / c - j[i]
    })
}

pub fn gauss_residual(
    a: &GaugeConfig,
    m: &MatterConfig,
    f: &GaugeScalarF,
    p: &ModelParams,
    x: &[f64; 4],
) -> Result<f64> {
    Ok(residuals(m, a, f, p, x)?.gauss)
}

pub fn ampere_residual(
    a: &GaugeConfig,
    m: &MatterConfig,
    f: &GaugeScalarF,
    p: &ModelParams,
    x: &[f64; 4],
) -> Result<Vec3> {
    Ok(residuals(m, a, f, p, x)?.ampere)
}

/// `(∇·B, ∇×E + ∂₀(cB))`.
pub fn homogeneous_check(a: &GaugeConfig, p: &ModelParams, x: &[f64; 4]) -> Result<(f64, Vec3)> {
    let em = em_jets(a, p.c, x)?;
    let div_b: f64 = (0..3).map(|i| em.b[i].d[i + 1].re).sum();
    let faraday = Vec3::from_fn(|i, _| {
        let (k, l) = ((i + 1) % 3, (i + 2) % 3);
        em.e[l].d[k + 1].re - em.e[k].d[l + 1].re + p.c * em.b[i].d[0].re
    });
    Ok((div_b, faraday))
}

/// `c ∂₀ρ + ∇·j`.
pub fn continuity_from(src: &SourceJets, c: f64) -> f64 {
    c * src.rho.d[0].re + (0..3).map(|k| src.j[k].d[k + 1].re).sum::<f64>()
}

pub fn continuity_residual(m: &MatterConfig, a: &GaugeConfig, p: &ModelParams, x: &[f64; 4]) -> Result<f64> {
    Ok(continuity_from(&sources(m, a, p, x)?, p.c))
}

/// Every residual at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals {
    pub sch: C64,
    pub gauss: f64,
    pub ampere: Vec3,
    pub continuity: f64,
}

pub fn residuals(
    m: &MatterConfig,
    a: &GaugeConfig,
    f: &GaugeScalarF,
    p: &ModelParams,
    x: &[f64; 4],
) -> Result<Residuals> {
    let psi = m.psi.checked_jet(x)?;
    let pot = PotentialJets::eval(a, x)?;
    let em = pot.em(p.c)?;
    let src = source_jets(&psi, &pot, p)?;
    let (fe, fb) = f_gradient_jets(f, &em);
    Ok(Residuals {
        sch: sch_residual_jets(&psi, &pot, p),
        gauss: gauss_from(&fe, src.rho_value(), p.c),
        ampere: ampere_from(&fe, &fb, &src.j_value(), p.c),
        continuity: continuity_from(&src, p.c),
    })
}
