//! Canned runs with closed-form or structural oracles, shared by the test
//! suites and the command-line harness.

use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;

use serde::Serialize;

use super::maxwell::{fdtd_maxwell_step, MaxwellState, Polarization};
use super::schrodinger::{evolve, evolve_recorded, gauge_evolution_equivalence, LatticePotential, SchrodingerState};
use super::TimeSeries;
use crate::eom::ModelParams;
use crate::error::Result;
use crate::fields::{FieldExpr, GaugeConfig, GaussianPacket, GridSpec, Polynomial, SampledField};
use crate::galgroup::Vec3;
use crate::gauge::GaugeFunction;
use crate::par::{self, Exec};

/// Unit-width packet sampled on `grid` and normalised on the lattice.
pub fn packet_state(grid: GridSpec, params: ModelParams, p0: f64, exec: Exec) -> Result<SchrodingerState> {
    let packet = GaussianPacket {
        m: params.m,
        sigma: 1.0,
        center: Vec3::zeros(),
        p0: Vec3::new(p0, 0.5 * p0, 0.0),
        c: params.c,
    };
    let f = FieldExpr::gaussian_packet(packet)?;
    let mut s = SchrodingerState::from_fields(&f, &GaugeConfig::zero(), grid, params, exec)?;
    s.normalize();
    Ok(s)
}

/// Smooth static potentials with nonzero `A₀` and curl.
pub fn bumpy_potentials() -> Result<GaugeConfig> {
    Ok(GaugeConfig::new(
        FieldExpr::gaussian_bump(1.5, Vec3::new(0.5, 0.0, 0.0))?.scale_re(0.4),
        [
            FieldExpr::gaussian_bump(1.0, Vec3::zeros())?,
            FieldExpr::gaussian_bump(2.0, Vec3::new(0.0, 1.0, 0.0))?.scale_re(-0.5),
            FieldExpr::zero(),
        ],
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConservationReport {
    pub norm_drift: f64,
    pub charge_drift: f64,
}

/// Norm and charge drift over `steps` steps in the bumpy potentials.
pub fn norm_drift(
    grid: GridSpec,
    params: ModelParams,
    dt: f64,
    steps: usize,
    exec: Exec,
) -> Result<ConservationReport> {
    let mut s = packet_state(grid, params, 1.0, exec)?;
    s.potential = LatticePotential::sample(&bumpy_potentials()?, &grid)?;
    let start = s.observables(0);
    let end = evolve(&s, dt, steps, exec, &mut |_, _| {})?.observables(steps);
    Ok(ConservationReport {
        norm_drift: (end.norm - start.norm).abs(),
        charge_drift: (end.charge - start.charge).abs(),
    })
}

#[derive(Debug, Clone)]
pub struct SpreadingRun {
    /// `|σ²_lattice − σ²_exact| / σ²_exact` at the final time.
    pub relative_error: f64,
    pub series: TimeSeries,
    pub final_psi: SampledField,
}

/// Packet-spreading run on a 1D periodic grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpreadingSetup {
    pub n: usize,
    pub extent: f64,
    /// Mean momentum of the unit-width packet.
    pub p0: f64,
    pub dt: f64,
    pub steps: usize,
    pub record_every: usize,
}

/// Free packet against the closed-form variance.
pub fn packet_spreading(setup: SpreadingSetup, params: ModelParams, exec: Exec) -> Result<SpreadingRun> {
    let SpreadingSetup {
        n,
        extent,
        p0,
        dt,
        steps,
        record_every,
    } = setup;
    let grid = GridSpec::new(1, n, extent, 0.0)?;
    let s = packet_state(grid, params, p0, exec)?;
    let (end, series) = evolve_recorded(&s, dt, steps, record_every, exec)?;
    let exact = GaussianPacket {
        m: params.m,
        sigma: 1.0,
        center: Vec3::zeros(),
        p0: Vec3::zeros(),
        c: params.c,
    }
    .variance_at(end.time);
    let relative_error = ((end.variance(0) - exact) / exact).abs();
    let final_psi = SampledField {
        spec: GridSpec::new(1, n, extent, params.c * end.time)?,
        values: end.psi,
    };
    Ok(SpreadingRun {
        relative_error,
        series,
        final_psi,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RefinementReport {
    pub coarse: f64,
    pub fine: f64,
    pub ratio: f64,
}

impl RefinementReport {
    fn new(coarse: f64, fine: f64) -> Self {
        Self {
            coarse,
            fine,
            ratio: coarse / fine,
        }
    }
}

/// Gauge-equivalence error for `λ = kx` with `k = 4π/L`, on `n` and `2n`
/// points with `dt` halved, up to unit time.
pub fn gauge_refinement(n: usize, params: ModelParams, exec: Exec) -> Result<RefinementReport> {
    let l = 20.0;
    let lam = GaugeFunction::new(Polynomial::affine([0.0, 4.0 * PI / l, 0.0, 0.0], 0.0))?;
    let run = |n: usize, dt: f64| -> Result<f64> {
        let s = packet_state(GridSpec::new(1, n, l, 0.0)?, params, 1.0, exec)?;
        Ok(gauge_evolution_equivalence(&s, &lam, dt, (1.0 / dt).round() as usize, exec)?.sup_error)
    };
    Ok(RefinementReport::new(run(n, 0.01)?, run(2 * n, 0.005)?))
}

type Field3 = Box<dyn Fn(f64, f64, f64) -> [f64; 3] + Send + Sync>;

/// TE and TM plane waves of wavelength `L/√2` along the diagonal, and their period.
fn diagonal_wave(l: f64) -> (Field3, Field3, f64) {
    let k = 2.0 * PI / l;
    let phase = move |x: f64, y: f64, t: f64| k * (x + y) - k * SQRT_2 * t;
    let e = move |x: f64, y: f64, t: f64| {
        let (f, g) = (phase(x, y, t).cos(), 0.5 * phase(x, y, t).sin());
        [-f / SQRT_2, f / SQRT_2, g]
    };
    let b = move |x: f64, y: f64, t: f64| {
        let (f, g) = (phase(x, y, t).cos(), 0.5 * phase(x, y, t).sin());
        [g / SQRT_2, -g / SQRT_2, f]
    };
    (Box::new(e), Box::new(b), 2.0 * PI / (k * SQRT_2))
}

/// L2 error after one period of the vacuum wave on an `n × n` lattice.
pub fn vacuum_wave_error(n: usize, exec: Exec) -> Result<f64> {
    let l = 8.0;
    let (e, b, period) = diagonal_wave(l);
    let mut s = MaxwellState::new(n, l, 1.0, 0.0, &e, &b, None)?;
    let steps = (period / (0.5 * s.spacing())).ceil() as usize;
    let dt = period / steps as f64;
    for _ in 0..steps {
        s = fdtd_maxwell_step(&s, dt, exec)?;
    }
    Ok(s.l2_error(&e, &b))
}

pub fn vacuum_wave_refinement(n: usize, exec: Exec) -> Result<RefinementReport> {
    Ok(RefinementReport::new(
        vacuum_wave_error(n, exec)?,
        vacuum_wave_error(2 * n, exec)?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstraintReport {
    /// Largest per-step change of `max |∇·E − ρ|`.
    pub gauss_drift_per_step: f64,
    /// Largest change of `max |∇·B|` over the run.
    pub div_b_drift: f64,
    /// `max |ρ|`, to show the sources are not trivial.
    pub max_charge: f64,
}

/// Oscillating localised polarisation driving the lattice from `E = −P`.
pub fn sourced_constraints(n: usize, steps: usize, exec: Exec) -> Result<ConstraintReport> {
    let pol: Polarization = Arc::new(|x: f64, y: f64, t: f64| {
        let env = (-(x * x + y * y)).exp();
        [env * (2.0 * t).sin(), 0.5 * env * (t + x).cos(), env * t.sin()]
    });
    let p0 = pol.clone();
    let e0 = move |x: f64, y: f64, t: f64| p0(x, y, t).map(|v| -v);
    let b0 = |x: f64, y: f64, _: f64| [0.1 * (x + y).sin(), 0.2 * (x - y).cos(), (-(x * x)).exp()];
    let mut s = MaxwellState::new(n, 6.0, 1.0, 0.0, &e0, &b0, Some(pol))?;
    let max_abs = |v: Vec<f64>| v.into_iter().map(f64::abs).fold(0.0, par::nan_max);
    let db0 = max_abs(s.div_b());
    let mut prev = s.gauss_residual();
    let mut gauss_drift: f64 = prev;
    let mut max_charge = max_abs(s.charge_density());
    let dt = 0.5 * s.cfl_limit();
    for _ in 0..steps {
        s = fdtd_maxwell_step(&s, dt, exec)?;
        let g = s.gauss_residual();
        gauss_drift = par::nan_max(gauss_drift, (g - prev).abs());
        prev = g;
        max_charge = max_charge.max(max_abs(s.charge_density()));
    }
    Ok(ConstraintReport {
        gauss_drift_per_step: gauss_drift,
        div_b_drift: (max_abs(s.div_b()) - db0).abs(),
        max_charge,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenarios_meet_their_targets() {
        let p = ModelParams::default();
        let g = gauge_refinement(64, p, Exec::Parallel).unwrap();
        assert!((3.2..=4.8).contains(&g.ratio), "{g:?}");
        let w = vacuum_wave_refinement(32, Exec::Parallel).unwrap();
        assert!((3.5..=4.5).contains(&w.ratio), "{w:?}");
        let c = sourced_constraints(24, 100, Exec::Parallel).unwrap();
        assert!(
            c.gauss_drift_per_step < 1e-12 && c.div_b_drift < 1e-12 && c.max_charge > 1e-3,
            "{c:?}"
        );
        let d = norm_drift(GridSpec::new(2, 16, 8.0, 0.0).unwrap(), p, 0.01, 100, Exec::Parallel).unwrap();
        assert!(d.norm_drift < 1e-10 && d.charge_drift < 1e-10, "{d:?}");
    }

    #[test]
    fn spreading_run_records_series() {
        let setup = SpreadingSetup {
            n: 128,
            extent: 30.0,
            p0: 0.5,
            dt: 1e-2,
            steps: 100,
            record_every: 10,
        };
        let run = packet_spreading(setup, ModelParams::default(), Exec::Parallel).unwrap();
        assert!(run.relative_error < 0.01);
        assert_eq!(run.series.rows.len(), 11);
        assert_eq!(run.final_psi.values.len(), 128);
        assert!((run.final_psi.spec.x0 - 1.0).abs() < 1e-12);
    }
}
