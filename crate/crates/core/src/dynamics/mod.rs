//! Desk-scale time evolution: Crank–Nicolson Schrödinger stepping in static
//! external potentials and a staggered Maxwell stepper with prescribed sources.

mod maxwell;
pub mod scenarios;
mod schrodinger;

use std::io::Write;

use serde::Serialize;

use crate::error::Result;

pub use maxwell::{fdtd_maxwell_step, MaxwellState, Polarization, VectorFn};
pub use schrodinger::{
    cn_schrodinger_step, evolve, evolve_recorded, gauge_evolution_equivalence, GaugeEvolutionReport, LatticePotential,
    SchrodingerState, SOLVER_TOL,
};

/// One row of the observable time series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Observables {
    pub step: usize,
    pub time: f64,
    pub norm: f64,
    pub charge: f64,
    pub px: f64,
    pub py: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TimeSeries {
    pub rows: Vec<Observables>,
}

impl TimeSeries {
    /// CSV with header `step,time,norm,charge,px,py`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "step,time,norm,charge,px,py")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                r.step, r.time, r.norm, r.charge, r.px, r.py
            )?;
        }
        Ok(())
    }
}
