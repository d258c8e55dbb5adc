use serde::Serialize;

use crate::eom::ModelParams;
use crate::error::{Error, Result};
use crate::fields::{FieldExpr, GaugeConfig, GridSpec, C64};
use crate::gauge::GaugeFunction;
use crate::par::{self, pairwise_sum, Exec};

use super::{Observables, TimeSeries};

/// Relative residual accepted from the linear solvers.
pub const SOLVER_TOL: f64 = 1e-12;
const CG_TARGET: f64 = 1e-15;
const CG_MAX_ITER: usize = 500;

/// Static external potentials sampled on a periodic lattice: `A₀` and `A` at
/// nodes, and `A_a` at the midpoint of each link from a node towards `+a`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticePotential {
    pub a0: Vec<f64>,
    pub a_node: Vec<[f64; 2]>,
    pub a_link: Vec<[f64; 2]>,
}

impl LatticePotential {
    pub fn zero(grid: &GridSpec) -> Self {
        Self {
            a0: vec![0.0; grid.len()],
            a_node: vec![[0.0; 2]; grid.len()],
            a_link: vec![[0.0; 2]; grid.len()],
        }
    }

    /// Samples `a` at the grid's time coordinate.
    pub fn sample(a: &GaugeConfig, grid: &GridSpec) -> Result<Self> {
        let h = grid.spacing();
        let mut out = Self::zero(grid);
        for k in 0..grid.len() {
            let x = grid.point(k);
            out.a0[k] = a.a0.value(&x)?.re;
            for axis in 0..grid.dims {
                out.a_node[k][axis] = a.avec[axis].value(&x)?.re;
                let mut mid = x;
                mid[axis + 1] += 0.5 * h;
                out.a_link[k][axis] = a.avec[axis].value(&mid)?.re;
            }
        }
        Ok(out)
    }
}

/// Schrödinger field on a 1D or 2D periodic grid. `time` is `t = x⁰/c`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchrodingerState {
    pub grid: GridSpec,
    pub psi: Vec<C64>,
    pub time: f64,
    pub params: ModelParams,
    pub potential: LatticePotential,
}

fn check_grid(grid: &GridSpec) -> Result<()> {
    if !(1..=2).contains(&grid.dims) {
        return Err(Error::InvalidGrid(format!(
            "dynamics needs 1 or 2 dimensions, got {}",
            grid.dims
        )));
    }
    if grid.n < 3 {
        return Err(Error::InvalidGrid(format!(
            "need at least 3 points per axis, got {}",
            grid.n
        )));
    }
    Ok(())
}

impl SchrodingerState {
    pub fn new(grid: GridSpec, psi: Vec<C64>, params: ModelParams, potential: LatticePotential) -> Result<Self> {
        check_grid(&grid)?;
        let n = grid.len();
        if psi.len() != n || potential.a0.len() != n || potential.a_node.len() != n || potential.a_link.len() != n {
            return Err(Error::InvalidGrid(format!("arrays must have {n} entries")));
        }
        if psi.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("initial wave function is not finite".into()));
        }
        Ok(Self {
            grid,
            psi,
            time: grid.x0 / params.c,
            params,
            potential,
        })
    }

    /// Samples `f` on the grid in the potentials `a`.
    pub fn from_fields(
        f: &FieldExpr,
        a: &GaugeConfig,
        grid: GridSpec,
        params: ModelParams,
        exec: Exec,
    ) -> Result<Self> {
        check_grid(&grid)?;
        let psi = crate::fields::sample_on_grid(f, &grid, exec)?.values;
        Self::new(grid, psi, params, LatticePotential::sample(a, &grid)?)
    }

    pub fn cell_volume(&self) -> f64 {
        self.grid.spacing().powi(self.grid.dims as i32)
    }

    pub fn normalize(&mut self) {
        let s = 1.0 / self.norm().sqrt();
        self.psi.iter_mut().for_each(|z| *z *= s);
    }

    /// `Σ|ψ|² ΔV`.
    pub fn norm(&self) -> f64 {
        let dens: Vec<f64> = self.psi.iter().map(|z| z.norm_sqr()).collect();
        pairwise_sum(&dens) * self.cell_volume()
    }

    /// `⟨−i∂_a⟩` from centred differences.
    pub fn momentum(&self, axis: usize) -> f64 {
        if axis >= self.grid.dims {
            return 0.0;
        }
        let h = self.grid.spacing();
        let terms: Vec<f64> = (0..self.psi.len())
            .map(|k| {
                let d = (self.psi[self.neighbor(k, axis, true)] - self.psi[self.neighbor(k, axis, false)]) / (2.0 * h);
                (self.psi[k].conj() * d * C64::new(0.0, -1.0)).re
            })
            .collect();
        pairwise_sum(&terms) * self.cell_volume()
    }

    /// Position variance of `|ψ|²` along one axis, about the mean.
    pub fn variance(&self, axis: usize) -> f64 {
        let w: Vec<f64> = self.psi.iter().map(|z| z.norm_sqr()).collect();
        let total = pairwise_sum(&w);
        let coord = |k: usize| self.grid.point(k)[axis + 1];
        let mean = pairwise_sum(&(0..w.len()).map(|k| w[k] * coord(k)).collect::<Vec<_>>()) / total;
        let second: Vec<f64> = (0..w.len()).map(|k| w[k] * (coord(k) - mean).powi(2)).collect();
        pairwise_sum(&second) / total
    }

    pub fn observables(&self, step: usize) -> Observables {
        let norm = self.norm();
        Observables {
            step,
            time: self.time,
            norm,
            charge: -self.params.q * norm,
            px: self.momentum(0),
            py: self.momentum(1),
        }
    }

    fn neighbor(&self, k: usize, axis: usize, forward: bool) -> usize {
        let n = self.grid.n;
        let stride = if self.grid.dims == 2 && axis == 0 { n } else { 1 };
        let coord = (k / stride) % n;
        let next = if forward { (coord + 1) % n } else { (coord + n - 1) % n };
        k - coord * stride + next * stride
    }

    /// Coupling from node `k` to its `+axis` neighbour.
    fn hop(&self, k: usize, axis: usize) -> C64 {
        let (h, m, q) = (self.grid.spacing(), self.params.m, self.params.q);
        C64::new(1.0 / (h * h), q * self.potential.a_link[k][axis] / h) * (-1.0 / (2.0 * m))
    }

    fn diagonal(&self, k: usize) -> f64 {
        let (h, m, q, c) = (self.grid.spacing(), self.params.m, self.params.q, self.params.c);
        let a2: f64 = self.potential.a_node[k][..self.grid.dims].iter().map(|a| a * a).sum();
        (2.0 * self.grid.dims as f64 / (h * h) + q * q * a2) / (2.0 * m) + q * c * self.potential.a0[k]
    }

    fn apply_h_at(&self, v: &[C64], k: usize) -> C64 {
        let mut out = v[k] * self.diagonal(k);
        for axis in 0..self.grid.dims {
            let fwd = self.neighbor(k, axis, true);
            let back = self.neighbor(k, axis, false);
            out += self.hop(k, axis) * v[fwd] + self.hop(back, axis).conj() * v[back];
        }
        out
    }

    /// The Hermitian lattice Hamiltonian applied to `v`.
    pub fn apply_hamiltonian(&self, v: &[C64], exec: Exec) -> Vec<C64> {
        par::map_range(exec, v.len(), |k| self.apply_h_at(v, k))
    }

    /// `(1 + i s H) v`.
    fn apply_shifted(&self, v: &[C64], s: f64, exec: Exec) -> Vec<C64> {
        par::map_range(exec, v.len(), |k| v[k] + C64::new(0.0, s) * self.apply_h_at(v, k))
    }
}

fn norm2(v: &[C64]) -> f64 {
    pairwise_sum(&v.iter().map(|z| z.norm_sqr()).collect::<Vec<_>>())
}

/// Periodic tridiagonal solve `lower_i x_{i−1} + diag_i x_i + upper_i x_{i+1} = rhs_i`.
fn solve_cyclic(lower: &[C64], diag: &[C64], upper: &[C64], rhs: &[C64]) -> Vec<C64> {
    let n = diag.len();
    let thomas = |b: &[C64], r: &[C64]| -> Vec<C64> {
        let mut cp = vec![C64::new(0.0, 0.0); n];
        let mut dp = vec![C64::new(0.0, 0.0); n];
        cp[0] = upper[0] / b[0];
        dp[0] = r[0] / b[0];
        for i in 1..n {
            let den = b[i] - lower[i] * cp[i - 1];
            cp[i] = upper[i] / den;
            dp[i] = (r[i] - lower[i] * dp[i - 1]) / den;
        }
        let mut x = dp;
        for i in (0..n - 1).rev() {
            let next = x[i + 1];
            x[i] -= cp[i] * next;
        }
        x
    };
    let (corner_top, corner_bottom) = (lower[0], upper[n - 1]);
    let gamma = -diag[0];
    let mut b = diag.to_vec();
    b[0] -= gamma;
    b[n - 1] -= corner_bottom * corner_top / gamma;
    let x = thomas(&b, rhs);
    let mut u = vec![C64::new(0.0, 0.0); n];
    u[0] = gamma;
    u[n - 1] = corner_bottom;
    let z = thomas(&b, &u);
    let fact = (x[0] + corner_top * x[n - 1] / gamma) / (C64::new(1.0, 0.0) + z[0] + corner_top * z[n - 1] / gamma);
    x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect()
}

/// CGNR on `(1 + i s H) x = b`, warm-started from `x`.
fn solve_cgnr(s: &SchrodingerState, shift: f64, b: &[C64], mut x: Vec<C64>, exec: Exec) -> Result<Vec<C64>> {
    let bnorm = norm2(b).sqrt().max(f64::MIN_POSITIVE);
    let ax = s.apply_shifted(&x, shift, exec);
    let mut r: Vec<C64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    let mut z = s.apply_shifted(&r, -shift, exec);
    let mut p = z.clone();
    let mut zz = norm2(&z);
    let mut res = norm2(&r).sqrt() / bnorm;
    for _ in 0..CG_MAX_ITER {
        if res <= CG_TARGET || zz == 0.0 {
            break;
        }
        let w = s.apply_shifted(&p, shift, exec);
        let alpha = zz / norm2(&w);
        x.iter_mut().zip(&p).for_each(|(xi, pi)| *xi += pi * alpha);
        r.iter_mut().zip(&w).for_each(|(ri, wi)| *ri -= wi * alpha);
        let new_res = norm2(&r).sqrt() / bnorm;
        z = s.apply_shifted(&r, -shift, exec);
        let zz_new = norm2(&z);
        p = z.iter().zip(&p).map(|(zi, pi)| zi + pi * (zz_new / zz)).collect();
        zz = zz_new;
        if new_res >= res && res <= SOLVER_TOL {
            break;
        }
        res = new_res;
    }
    let ax = s.apply_shifted(&x, shift, exec);
    let check = norm2(&b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect::<Vec<_>>()).sqrt() / bnorm;
    if check > SOLVER_TOL {
        return Err(Error::SolverNonConvergence {
            iterations: CG_MAX_ITER,
            residual: check,
        });
    }
    Ok(x)
}

/// One Crank–Nicolson step `(1 + i dt H/2) ψ⁺ = (1 − i dt H/2) ψ` of
/// `i∂ₜψ = −(1/2m)(∇ + iqA)²ψ + qcA₀ψ`.
pub fn cn_schrodinger_step(s: &SchrodingerState, dt: f64, exec: Exec) -> Result<SchrodingerState> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParameter(format!("time step must be positive, got {dt}")));
    }
    let half = 0.5 * dt;
    let rhs = s.apply_shifted(&s.psi, -half, exec);
    let psi = if s.grid.dims == 1 {
        let n = s.psi.len();
        let i = C64::new(0.0, half);
        let diag: Vec<C64> = (0..n).map(|k| C64::new(1.0, 0.0) + i * s.diagonal(k)).collect();
        let upper: Vec<C64> = (0..n).map(|k| i * s.hop(k, 0)).collect();
        let lower: Vec<C64> = (0..n).map(|k| i * s.hop((k + n - 1) % n, 0).conj()).collect();
        let x = solve_cyclic(&lower, &diag, &upper, &rhs);
        let ax = s.apply_shifted(&x, half, exec);
        let res = norm2(&rhs.iter().zip(&ax).map(|(a, b)| a - b).collect::<Vec<_>>()).sqrt()
            / norm2(&rhs).sqrt().max(f64::MIN_POSITIVE);
        if !(res <= SOLVER_TOL) {
            return Err(Error::SolverNonConvergence {
                iterations: 1,
                residual: res,
            });
        }
        x
    } else {
        solve_cgnr(s, half, &rhs, s.psi.clone(), exec)?
    };
    Ok(SchrodingerState {
        psi,
        time: s.time + dt,
        ..s.clone()
    })
}

/// Steps `n_steps` times, calling `observer` before the first step and after
/// every step.
pub fn evolve(
    s: &SchrodingerState,
    dt: f64,
    n_steps: usize,
    exec: Exec,
    observer: &mut dyn FnMut(usize, &SchrodingerState),
) -> Result<SchrodingerState> {
    let mut cur = s.clone();
    observer(0, &cur);
    for step in 1..=n_steps {
        cur = cn_schrodinger_step(&cur, dt, exec)?;
        observer(step, &cur);
    }
    Ok(cur)
}

/// `evolve` recording observables at step 0, every `every` steps, and at the end.
pub fn evolve_recorded(
    s: &SchrodingerState,
    dt: f64,
    n_steps: usize,
    every: usize,
    exec: Exec,
) -> Result<(SchrodingerState, TimeSeries)> {
    let every = every.max(1);
    let mut series = TimeSeries::default();
    let end = evolve(s, dt, n_steps, exec, &mut |step, st| {
        if step % every == 0 || step == n_steps {
            series.rows.push(st.observables(step));
        }
    })?;
    Ok((end, series))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaugeEvolutionReport {
    /// `max_x |e^{−iλ}ψ(T) − ψ′(T)|`.
    pub sup_error: f64,
    pub steps: usize,
    pub dt: f64,
    pub n: usize,
}

/// Evolves `s` and its gauge transform side by side and compares the results
/// after transforming the first back. `λ` must be static and compatible with
/// the periodic box.
pub fn gauge_evolution_equivalence(
    s: &SchrodingerState,
    lam: &GaugeFunction,
    dt: f64,
    n_steps: usize,
    exec: Exec,
) -> Result<GaugeEvolutionReport> {
    if !lam.is_static() {
        return Err(Error::InvalidParameter("gauge function must not depend on time".into()));
    }
    let q = s.params.q;
    if q == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    let grid = s.grid;
    let poly = lam.polynomial();
    let grads: Vec<_> = (0..grid.dims).map(|a| poly.partial(a + 1)).collect();
    for k in 0..grid.len() {
        let x = grid.point(k);
        for axis in 0..grid.dims {
            let mut wrapped = x;
            wrapped[axis + 1] += grid.extent;
            let jump = poly.eval(&wrapped) - poly.eval(&x);
            if ((jump / std::f64::consts::TAU).round() * std::f64::consts::TAU - jump).abs() > 1e-9 {
                return Err(Error::InvalidParameter(
                    "gauge function is not periodic on the grid".into(),
                ));
            }
        }
    }
    let h = grid.spacing();
    let phase: Vec<C64> = (0..grid.len())
        .map(|k| C64::from_polar(1.0, -poly.eval(&grid.point(k))))
        .collect();
    let mut moved = s.clone();
    for k in 0..grid.len() {
        let x = grid.point(k);
        moved.psi[k] *= phase[k];
        for axis in 0..grid.dims {
            moved.potential.a_node[k][axis] += grads[axis].eval(&x) / q;
            let mut mid = x;
            mid[axis + 1] += 0.5 * h;
            moved.potential.a_link[k][axis] += grads[axis].eval(&mid) / q;
        }
    }
    let a = evolve(s, dt, n_steps, exec, &mut |_, _| {})?;
    let b = evolve(&moved, dt, n_steps, exec, &mut |_, _| {})?;
    let sup_error = (0..grid.len())
        .map(|k| (phase[k] * a.psi[k] - b.psi[k]).norm())
        .fold(0.0, par::nan_max);
    Ok(GaugeEvolutionReport {
        sup_error,
        steps: n_steps,
        dt,
        n: grid.n,
    })
}
