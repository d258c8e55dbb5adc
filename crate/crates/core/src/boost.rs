//! Galilean transformation of whole field configurations and the
//! covariance checks built on them.
//!
//! Primed fields are always built by composing closed-form expressions
//! (pullback by `g⁻¹` plus a linear phase), so every check runs at jet
//! precision.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::eom::{
    ampere_from, em_jets, f_gradient_jets, gauss_from, homogeneous_check, residuals, sch_residual, sources, EmJets,
    GaugeScalarF, ModelParams,
};
use crate::error::{Error, Result};
use crate::fields::{derive_b, derive_e, FieldExpr, GaugeConfig, Jet, MatterConfig, Polynomial, VectorField, C64};
use crate::galgroup::{cocycle_omega, CocycleVariant, GalileiElement, Mat3, Spacetime4Vector, Variance, Vec3};
use crate::par::{self, Exec};

/// Which closed form to use for the representation phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseConvention {
    /// `γ = mc(−R⁻¹β·x′ + ½β²x′⁰ − C)`, `C = −½a·β + ½bβ²`, and the
    /// momentum phase `½mc a·β + a·p′ − bE′`.
    AsWritten,
    /// `γ = mc(−R⁻¹β·x′ − ½β²x′⁰ − ½a·β)` and the momentum phase
    /// `½mc a·β + a·Rp′ − (b/c)p²/2m`.
    #[default]
    Consistent,
}

impl PhaseConvention {
    pub const ALL: [PhaseConvention; 2] = [PhaseConvention::AsWritten, PhaseConvention::Consistent];

    pub fn name(self) -> &'static str {
        match self {
            PhaseConvention::AsWritten => "as_written",
            PhaseConvention::Consistent => "consistent",
        }
    }
}

/// A group element together with the model parameters it acts with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameMap {
    pub g: GalileiElement,
    pub params: ModelParams,
    pub variant: CocycleVariant,
    pub phase: PhaseConvention,
}

impl FrameMap {
    pub fn new(g: GalileiElement, params: ModelParams) -> Self {
        Self {
            g,
            params,
            variant: CocycleVariant::default(),
            phase: PhaseConvention::default(),
        }
    }

    pub fn with_variant(mut self, variant: CocycleVariant) -> Self {
        self.variant = variant;
        self
    }

    pub fn with_phase(mut self, phase: PhaseConvention) -> Self {
        self.phase = phase;
        self
    }

    /// `x ↦ x′ = g⁻¹x` on raw coordinates.
    pub fn preimage(&self, x: &[f64; 4]) -> [f64; 4] {
        self.g.inverse_affine().apply(x)
    }

    /// `γ` as a polynomial in the preimage coordinates `x′`.
    pub fn gamma_polynomial(&self) -> Polynomial {
        let ModelParams { m, c, .. } = self.params;
        let GalileiElement { b, a, beta, r } = self.g;
        let u = r.transpose() * beta;
        let b2 = beta.norm_squared();
        let (k0, constant) = match self.phase {
            PhaseConvention::AsWritten => (0.5 * b2, 0.5 * a.dot(&beta) - 0.5 * b * b2),
            PhaseConvention::Consistent => (-0.5 * b2, -0.5 * a.dot(&beta)),
        };
        Polynomial::affine([k0, -u[0], -u[1], -u[2]], constant).scale(m * c)
    }

    /// `ω(g2, g1)` for this map's mass, light speed and cocycle variant.
    pub fn omega(&self, g2: &GalileiElement, g1: &GalileiElement) -> f64 {
        cocycle_omega(g2, g1, self.params.m, self.params.c, self.variant)
    }

    fn with_g(&self, g: GalileiElement) -> Self {
        Self { g, ..*self }
    }
}

pub fn gamma_phase(fm: &FrameMap, xprime: &Spacetime4Vector) -> Result<f64> {
    if xprime.variance() != Variance::Contravariant {
        return Err(Error::VarianceMismatch {
            expected: "contravariant",
            found: "covariant",
        });
    }
    Ok(fm.gamma_polynomial().eval(&xprime.to_array()))
}

/// `ψ′(x) = e^{−iγ(x′)} ψ(x′)`.
pub fn boost_matter(fm: &FrameMap, m: &MatterConfig) -> MatterConfig {
    let inv = fm.g.inverse_affine();
    let phase = -fm.gamma_polynomial().pullback(&inv);
    let psi = m.psi.pullback(&inv).phase_mul(phase).expect("γ is affine");
    MatterConfig::new(psi)
}

fn rotate(r: &Mat3, v: &VectorField) -> VectorField {
    std::array::from_fn(|i| FieldExpr::sum((0..3).map(|j| v[j].scale_re(r[(i, j)])).collect()))
}

fn pulled(fm: &FrameMap, a: &GaugeConfig) -> GaugeConfig {
    let inv = fm.g.inverse_affine();
    GaugeConfig::new(a.a0.pullback(&inv), std::array::from_fn(|k| a.avec[k].pullback(&inv)))
}

/// Covariant rule: `A′₀ = A₀ − R⁻¹β·A`, `A′ = RA`, all at `x′`.
pub fn boost_gauge_cov(fm: &FrameMap, a: &GaugeConfig) -> GaugeConfig {
    let p = pulled(fm, a);
    let u = fm.g.r.transpose() * fm.g.beta;
    let mut a0 = vec![p.a0.clone()];
    a0.extend((0..3).map(|k| p.avec[k].scale_re(-u[k])));
    GaugeConfig::new(FieldExpr::sum(a0), rotate(&fm.g.r, &p.avec))
}

/// Contravariant rule: `A′⁰ = A⁰`, `A′ = RA + βA⁰`, all at `x′`.
pub fn boost_gauge_contra(fm: &FrameMap, a: &GaugeConfig) -> GaugeConfig {
    let p = pulled(fm, a);
    let rotated = rotate(&fm.g.r, &p.avec);
    let avec = std::array::from_fn(|i| rotated[i].clone() + p.a0.scale_re(fm.g.beta[i]));
    GaugeConfig::new(p.a0, avec)
}

/// Magnetic limit: `E′ = RE − β×cRB`, `B′ = RB`.
pub fn transform_eb_magnetic(fm: &FrameMap, e: &Vec3, b: &Vec3) -> (Vec3, Vec3) {
    let (r, beta, c) = (fm.g.r, fm.g.beta, fm.params.c);
    let rb = r * b;
    (r * e - beta.cross(&rb) * c, rb)
}

/// Electric limit: `E′ = RE`, `cB′ = cRB + β×RE`.
pub fn transform_eb_electric(fm: &FrameMap, e: &Vec3, b: &Vec3) -> (Vec3, Vec3) {
    let (r, beta, c) = (fm.g.r, fm.g.beta, fm.params.c);
    let re = r * e;
    (re, r * b + beta.cross(&re) / c)
}

/// Charge density and current as closed-form expressions.
#[derive(Debug, Clone)]
pub struct CurrentField {
    pub rho: FieldExpr,
    pub jvec: VectorField,
}

impl CurrentField {
    /// `ρ = −q|ψ|²`, `j = −(iq/2m)(ψ∇ψ* − ψ*∇ψ) − (q²/m)A|ψ|²`.
    pub fn from_config(m: &MatterConfig, a: &GaugeConfig, p: &ModelParams) -> Self {
        let psi = &m.psi;
        let conj = psi.conj();
        let dens = (conj.clone() * psi.clone()).re();
        let jvec = std::array::from_fn(|k| {
            let d = psi.derivative(k + 1);
            let kinetic = (psi.clone() * d.conj() - conj.clone() * d).scale(C64::new(0.0, -p.q / (2.0 * p.m)));
            (kinetic - a.avec[k].clone() * dens.scale_re(p.q * p.q / p.m)).re()
        });
        Self {
            rho: dens.scale_re(-p.q),
            jvec,
        }
    }

    pub fn values(&self, x: &[f64; 4]) -> Result<(f64, Vec3)> {
        let rho = self.rho.value(x)?.re;
        let mut j = Vec3::zeros();
        for k in 0..3 {
            j[k] = self.jvec[k].value(x)?.re;
        }
        Ok((rho, j))
    }

    /// `c∂₀ρ + ∇·j`.
    pub fn continuity(&self, c: f64, x: &[f64; 4]) -> Result<f64> {
        let mut div = c * self.rho.checked_jet(x)?.d[0].re;
        for k in 0..3 {
            div += self.jvec[k].checked_jet(x)?.d[k + 1].re;
        }
        Ok(div)
    }

    /// The 4-current `(cρ, j)`, tagged contravariant.
    pub fn four_current(&self, c: f64, x: &[f64; 4]) -> Result<Spacetime4Vector> {
        let (rho, j) = self.values(x)?;
        Ok(Spacetime4Vector::contravariant(c * rho, j))
    }
}

/// `ρ′ = ρ(x′)`, `j′ = Rj(x′) + cβρ(x′)`: the `D` action on `(cρ, j)`.
pub fn transform_current(fm: &FrameMap, cur: &CurrentField) -> CurrentField {
    let inv = fm.g.inverse_affine();
    let rho = cur.rho.pullback(&inv);
    let j: VectorField = std::array::from_fn(|k| cur.jvec[k].pullback(&inv));
    let rotated = rotate(&fm.g.r, &j);
    let c = fm.params.c;
    let jvec = std::array::from_fn(|i| rotated[i].clone() + rho.scale_re(c * fm.g.beta[i]));
    CurrentField { rho, jvec }
}

/// Momentum-space wave function.
pub type MomentumFn = Arc<dyn Fn(&Vec3) -> C64 + Send + Sync>;

/// `(Uφ)(p) = e^{−iΘ} φ(p′)` with `p′ = R⁻¹(p − mcβ)`.
pub fn momentum_rep(fm: &FrameMap, phi: MomentumFn) -> MomentumFn {
    let fm = *fm;
    Arc::new(move |p: &Vec3| {
        let ModelParams { m, c, .. } = fm.params;
        let GalileiElement { b, a, beta, r } = fm.g;
        let pp = r.transpose() * (p - beta * (m * c));
        let theta = match fm.phase {
            PhaseConvention::AsWritten => {
                let e = p.norm_squared() / (2.0 * m);
                let e_shift = e + c * beta.dot(p) + 0.5 * m * c * c * beta.norm_squared();
                0.5 * m * c * a.dot(&beta) + a.dot(&pp) - b * e_shift
            }
            PhaseConvention::Consistent => {
                0.5 * m * c * a.dot(&beta) + a.dot(&(r * pp)) - (b / c) * p.norm_squared() / (2.0 * m)
            }
        };
        C64::from_polar(1.0, -theta) * phi(&pp)
    })
}

/// `momentum_rep` sampled on a list of momenta.
pub fn momentum_rep_sampled(fm: &FrameMap, phi: MomentumFn, momenta: &[Vec3], exec: Exec) -> Vec<C64> {
    let u = momentum_rep(fm, phi);
    par::map(exec, momenta, |p| u(p))
}

/// Normalised Gaussian in momentum space, centred on `p0` with width `s`.
pub fn gaussian_momentum(p0: Vec3, s: f64) -> MomentumFn {
    Arc::new(move |p: &Vec3| C64::new((-(p - p0).norm_squared() / (2.0 * s * s)).exp(), 0.0))
}

/// Maximum over points of a fallible per-point deviation; the first error in
/// point order wins.
pub fn max_over<F>(exec: Exec, points: &[[f64; 4]], f: F) -> Result<f64>
where
    F: Fn(&[f64; 4]) -> Result<f64> + Sync + Send,
{
    let mut out = 0.0;
    for r in par::map(exec, points, f) {
        out = par::nan_max(out, r?);
    }
    Ok(out)
}

/// Inputs for the two-path check `U(g2)U(g1) = e^{−iω}U(g2g1)`.
#[derive(Clone)]
pub struct ProjectiveSetup {
    pub pairs: Vec<(GalileiElement, GalileiElement)>,
    pub fields: Vec<FieldExpr>,
    pub points: Vec<[f64; 4]>,
    pub momentum_fns: Vec<MomentumFn>,
    pub momenta: Vec<Vec3>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProjectiveReport {
    pub variant: CocycleVariant,
    pub phase: PhaseConvention,
    pub position_max: f64,
    pub momentum_max: f64,
}

impl ProjectiveReport {
    pub fn max(&self) -> f64 {
        par::nan_max(self.position_max, self.momentum_max)
    }
}

impl ProjectiveSetup {
    pub fn check(
        &self,
        params: ModelParams,
        variant: CocycleVariant,
        phase: PhaseConvention,
        exec: Exec,
    ) -> Result<ProjectiveReport> {
        let mut position_max: f64 = 0.0;
        let mut momentum_max: f64 = 0.0;
        for (g2, g1) in &self.pairs {
            let base = FrameMap::new(*g2, params).with_variant(variant).with_phase(phase);
            let f2 = base;
            let f1 = base.with_g(*g1);
            let f21 = base.with_g(g2.compose(g1));
            let factor = C64::from_polar(1.0, -base.omega(g2, g1));
            for psi in &self.fields {
                let m = MatterConfig::new(psi.clone());
                let two = boost_matter(&f2, &boost_matter(&f1, &m)).psi;
                let one = boost_matter(&f21, &m).psi;
                let dev = max_over(exec, &self.points, |x| {
                    Ok((two.value(x)? - factor * one.value(x)?).norm())
                })?;
                position_max = par::nan_max(position_max, dev);
            }
            for phi in &self.momentum_fns {
                let two = momentum_rep(&f2, momentum_rep(&f1, phi.clone()));
                let one = momentum_rep(&f21, phi.clone());
                let devs = par::map(exec, &self.momenta, |p| (two(p) - factor * one(p)).norm());
                momentum_max = devs.into_iter().fold(momentum_max, par::nan_max);
            }
        }
        Ok(ProjectiveReport {
            variant,
            phase,
            position_max,
            momentum_max,
        })
    }
}

/// `max |SchRes[ψ′, A′](x) − e^{−iγ(x′)} SchRes[ψ, A](x′)|` with `A′` from the
/// covariant rule.
pub fn matter_covariance_check(
    fm: &FrameMap,
    m: &MatterConfig,
    a: &GaugeConfig,
    points: &[[f64; 4]],
    exec: Exec,
) -> Result<f64> {
    let mp = boost_matter(fm, m);
    let ap = boost_gauge_cov(fm, a);
    let gamma = fm.gamma_polynomial();
    max_over(exec, points, |x| {
        let xp = fm.preimage(x);
        let lhs = sch_residual(&mp, &ap, &fm.params, x)?;
        let rhs = C64::from_polar(1.0, -gamma.eval(&xp)) * sch_residual(m, a, &fm.params, &xp)?;
        Ok((lhs - rhs).norm())
    })
}

/// Deviations of the primed Gauss and Ampère residuals from two candidate
/// mappings of the unprimed ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxwellCovarianceReport {
    /// `Gauss′(x)` against `Gauss(x′)`.
    pub gauss_literal: f64,
    /// `Ampère′(x)` against `R·Ampère(x′) + β·Gauss(x′)`.
    pub ampere_literal: f64,
    /// Same comparison with residuals of the field equations re-expressed in
    /// the unprimed frame.
    pub gauss_transformed: f64,
    pub ampere_transformed: f64,
}

impl MaxwellCovarianceReport {
    pub fn literal_max(&self) -> f64 {
        par::nan_max(self.gauss_literal, self.ampere_literal)
    }

    pub fn transformed_max(&self) -> f64 {
        par::nan_max(self.gauss_transformed, self.ampere_transformed)
    }
}

/// Gauss and Ampère residuals of the unprimed configuration written in the
/// boosted frame: `f` is evaluated at `(E − c u×B, B)` with `u = R⁻¹β`, and
/// `∂₀` picks up the convective terms `−u(∇·F) + (u·∇)F`.
fn transformed_frame_residuals(
    fm: &FrameMap,
    m: &MatterConfig,
    a: &GaugeConfig,
    f: &GaugeScalarF,
    xp: &[f64; 4],
) -> Result<(f64, Vec3)> {
    let c = fm.params.c;
    let u = fm.g.r.transpose() * fm.g.beta;
    let em = em_jets(a, c, xp)?;
    let shifted: [Jet; 3] = std::array::from_fn(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        em.e[i] - (em.b[k].scale_re(u[j]) - em.b[j].scale_re(u[k])).scale_re(c)
    });
    let (fe, fb) = f_gradient_jets(f, &EmJets { e: shifted, b: em.b });
    let src = sources(m, a, &fm.params, xp)?;
    let gauss = gauss_from(&fe, src.rho_value(), c);
    let div: f64 = (0..3).map(|i| fe[i].d[i + 1].re).sum();
    let base = ampere_from(&fe, &fb, &src.j_value(), c);
    let ampere = Vec3::from_fn(|i, _| {
        let advect: f64 = (0..3).map(|k| u[k] * fe[i].d[k + 1].re).sum();
        base[i] - u[i] * div + advect
    });
    Ok((gauss, ampere))
}

pub fn maxwell_covariance_check(
    fm: &FrameMap,
    m: &MatterConfig,
    a: &GaugeConfig,
    f: &GaugeScalarF,
    points: &[[f64; 4]],
    exec: Exec,
) -> Result<MaxwellCovarianceReport> {
    let mp = boost_matter(fm, m);
    let ap = boost_gauge_cov(fm, a);
    let (r, beta) = (fm.g.r, fm.g.beta);
    let rows = par::map(exec, points, |x| -> Result<[f64; 4]> {
        let xp = fm.preimage(x);
        let primed = residuals(&mp, &ap, f, &fm.params, x)?;
        let orig = residuals(m, a, f, &fm.params, &xp)?;
        let (gt, at) = transformed_frame_residuals(fm, m, a, f, &xp)?;
        Ok([
            (primed.gauss - orig.gauss).abs(),
            (primed.ampere - (r * orig.ampere + beta * orig.gauss)).norm(),
            (primed.gauss - gt).abs(),
            (primed.ampere - (r * at + beta * gt)).norm(),
        ])
    });
    let mut worst = [0.0f64; 4];
    for row in rows {
        let row = row?;
        for k in 0..4 {
            worst[k] = par::nan_max(worst[k], row[k]);
        }
    }
    Ok(MaxwellCovarianceReport {
        gauss_literal: worst[0],
        ampere_literal: worst[1],
        gauss_transformed: worst[2],
        ampere_transformed: worst[3],
    })
}

/// Sources recomputed from the primed fields against `transform_current` of
/// the unprimed sources.
pub fn current_transform_consistency(
    fm: &FrameMap,
    m: &MatterConfig,
    a: &GaugeConfig,
    points: &[[f64; 4]],
    exec: Exec,
) -> Result<f64> {
    let mp = boost_matter(fm, m);
    let ap = boost_gauge_cov(fm, a);
    let moved = transform_current(fm, &CurrentField::from_config(m, a, &fm.params));
    max_over(exec, points, |x| {
        let direct = sources(&mp, &ap, &fm.params, x)?;
        let (rho, j) = moved.values(x)?;
        Ok((direct.rho_value() - rho).abs().max((direct.j_value() - j).norm()))
    })
}

/// `|cont′(x) − cont(x′)|` for the transformed current.
pub fn transformed_continuity_check(
    fm: &FrameMap,
    m: &MatterConfig,
    a: &GaugeConfig,
    points: &[[f64; 4]],
    exec: Exec,
) -> Result<f64> {
    let cur = CurrentField::from_config(m, a, &fm.params);
    let moved = transform_current(fm, &cur);
    let c = fm.params.c;
    max_over(exec, points, |x| {
        Ok((moved.continuity(c, x)? - cur.continuity(c, &fm.preimage(x))?).abs())
    })
}

/// `E, B` derived from the covariantly boosted potentials against the
/// magnetic-limit transform of the unprimed `E, B`.
pub fn derived_field_consistency(fm: &FrameMap, a: &GaugeConfig, points: &[[f64; 4]], exec: Exec) -> Result<f64> {
    let c = fm.params.c;
    let ap = boost_gauge_cov(fm, a);
    let (e, b) = (derive_e(a), derive_b(a, c));
    let (ep, bp) = (derive_e(&ap), derive_b(&ap, c));
    let value = |v: &VectorField, x: &[f64; 4]| -> Result<Vec3> {
        let mut out = Vec3::zeros();
        for k in 0..3 {
            out[k] = v[k].value(x)?.re;
        }
        Ok(out)
    };
    max_over(exec, points, |x| {
        let xp = fm.preimage(x);
        let (et, bt) = transform_eb_magnetic(fm, &value(&e, &xp)?, &value(&b, &xp)?);
        Ok((value(&ep, x)? - et).norm().max((value(&bp, x)? - bt).norm()))
    })
}

/// Homogeneous field equations for the covariantly boosted potentials.
pub fn primed_homogeneous_check(fm: &FrameMap, a: &GaugeConfig, points: &[[f64; 4]], exec: Exec) -> Result<f64> {
    let ap = boost_gauge_cov(fm, a);
    max_over(exec, points, |x| {
        let (div_b, faraday) = homogeneous_check(&ap, &fm.params, x)?;
        Ok(div_b.abs().max(faraday.norm()))
    })
}

/// Distance from the input after applying the magnetic then the electric rule
/// with the same `(β, R)`; nonzero in general.
pub fn limit_round_trip_deviation(fm: &FrameMap, e: &Vec3, b: &Vec3) -> f64 {
    let (e1, b1) = transform_eb_magnetic(fm, e, b);
    let (e2, b2) = transform_eb_electric(fm, &e1, &b1);
    (e2 - e).norm().max((b2 - b).norm())
}
