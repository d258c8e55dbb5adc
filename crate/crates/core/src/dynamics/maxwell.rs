use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::par::{self, pairwise_sum, Exec};

/// Prescribed polarisation `P(x, y, t)`. Sources are `ρ = −∇·P` and
/// `j = ∂ₜP`, taken discretely so that lattice continuity holds exactly.
pub type Polarization = Arc<dyn Fn(f64, f64, f64) -> [f64; 3] + Send + Sync>;

/// Analytic field used for initial data, `(x, y, t) ↦ vector`.
pub type VectorFn<'a> = &'a dyn Fn(f64, f64, f64) -> [f64; 3];

/// Staggered fields on a periodic `n × n` Yee lattice invariant along `z`.
///
/// With node `(i, j)` at `(−L/2 + iΔ, −L/2 + jΔ)`: `Ex` sits at `(i+½, j)`,
/// `Ey` at `(i, j+½)`, `Ez` at `(i, j)`, `Bx` at `(i, j+½)`, `By` at
/// `(i+½, j)` and `Bz` at `(i+½, j+½)`. Flat index `i·n + j`.
#[derive(Clone)]
pub struct MaxwellState {
    pub n: usize,
    pub extent: f64,
    pub c: f64,
    pub e: [Vec<f64>; 3],
    pub b: [Vec<f64>; 3],
    pub time: f64,
    pub source: Option<Polarization>,
}

impl fmt::Debug for MaxwellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MaxwellState")
            .field("n", &self.n)
            .field("extent", &self.extent)
            .field("c", &self.c)
            .field("time", &self.time)
            .field("sourced", &self.source.is_some())
            .finish_non_exhaustive()
    }
}

/// Offsets of each component from its node, in cells.
const E_OFFSET: [(f64, f64); 3] = [(0.5, 0.0), (0.0, 0.5), (0.0, 0.0)];
const B_OFFSET: [(f64, f64); 3] = [(0.0, 0.5), (0.5, 0.0), (0.5, 0.5)];

impl MaxwellState {
    /// Samples `e` and `b` at time `t0` on their staggered locations.
    pub fn new(
        n: usize,
        extent: f64,
        c: f64,
        t0: f64,
        e: VectorFn<'_>,
        b: VectorFn<'_>,
        source: Option<Polarization>,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points per axis, got {n}")));
        }
        if !(extent > 0.0) || !(c > 0.0) {
            return Err(Error::InvalidGrid("extent and c must be positive".into()));
        }
        let mut s = Self {
            n,
            extent,
            c,
            e: Default::default(),
            b: Default::default(),
            time: t0,
            source,
        };
        s.e = std::array::from_fn(|k| s.sample(E_OFFSET[k], |x, y| e(x, y, t0)[k]));
        s.b = std::array::from_fn(|k| s.sample(B_OFFSET[k], |x, y| b(x, y, t0)[k]));
        Ok(s)
    }

    pub fn spacing(&self) -> f64 {
        self.extent / self.n as f64
    }

    /// Largest accepted time step, `min(1, 1/c)·Δ/√2`.
    pub fn cfl_limit(&self) -> f64 {
        self.spacing() / std::f64::consts::SQRT_2 * (1.0f64).min(1.0 / self.c)
    }

    fn coord(&self, i: usize, off: f64) -> f64 {
        -0.5 * self.extent + (i as f64 + off) * self.spacing()
    }

    fn sample(&self, off: (f64, f64), f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        (0..self.n * self.n)
            .map(|k| f(self.coord(k / self.n, off.0), self.coord(k % self.n, off.1)))
            .collect()
    }

    fn polarization(&self, t: f64) -> Option<[Vec<f64>; 3]> {
        self.source
            .as_ref()
            .map(|p| std::array::from_fn(|k| self.sample(E_OFFSET[k], |x, y| p(x, y, t)[k])))
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        (i % self.n) * self.n + j % self.n
    }

    /// Discrete `∇·E` at nodes.
    pub fn div_e(&self) -> Vec<f64> {
        let (n, h) = (self.n, self.spacing());
        (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                (self.e[0][k] - self.e[0][self.idx(i + n - 1, j)] + self.e[1][k] - self.e[1][self.idx(i, j + n - 1)])
                    / h
            })
            .collect()
    }

    /// Discrete `∇·B` at cell centres.
    pub fn div_b(&self) -> Vec<f64> {
        let (n, h) = (self.n, self.spacing());
        (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                (self.b[0][self.idx(i + 1, j)] - self.b[0][k] + self.b[1][self.idx(i, j + 1)] - self.b[1][k]) / h
            })
            .collect()
    }

    /// Discrete `ρ = −∇·P` at nodes at the current time.
    pub fn charge_density(&self) -> Vec<f64> {
        let n = self.n;
        match self.polarization(self.time) {
            None => vec![0.0; n * n],
            Some(p) => {
                let h = self.spacing();
                (0..n * n)
                    .map(|k| {
                        let (i, j) = (k / n, k % n);
                        -(p[0][k] - p[0][self.idx(i + n - 1, j)] + p[1][k] - p[1][self.idx(i, j + n - 1)]) / h
                    })
                    .collect()
            }
        }
    }

    /// `max |∇·E − ρ|` over nodes.
    pub fn gauss_residual(&self) -> f64 {
        self.div_e()
            .iter()
            .zip(self.charge_density())
            .map(|(d, r)| (d - r).abs())
            .fold(0.0, par::nan_max)
    }

    /// `Σ (E² + B²) ΔA / 2`.
    pub fn energy(&self) -> f64 {
        let h2 = self.spacing().powi(2);
        let sq: Vec<f64> = self.e.iter().chain(self.b.iter()).flatten().map(|v| v * v).collect();
        0.5 * pairwise_sum(&sq) * h2
    }

    /// L2 distance to analytic fields at the current time.
    pub fn l2_error(&self, e: VectorFn<'_>, b: VectorFn<'_>) -> f64 {
        let t = self.time;
        let mut sq = Vec::with_capacity(6 * self.n * self.n);
        for k in 0..3 {
            let exact = self.sample(E_OFFSET[k], |x, y| e(x, y, t)[k]);
            sq.extend(exact.iter().zip(&self.e[k]).map(|(a, b)| (a - b).powi(2)));
            let exact = self.sample(B_OFFSET[k], |x, y| b(x, y, t)[k]);
            sq.extend(exact.iter().zip(&self.b[k]).map(|(a, b)| (a - b).powi(2)));
        }
        (pairwise_sum(&sq) * self.spacing().powi(2)).sqrt()
    }

    /// `B ← B − s ∇×E`.
    fn kick_b(&mut self, s: f64, exec: Exec) {
        let (n, r) = (self.n, s / self.spacing());
        let (e, b) = (&self.e, &self.b);
        let idx = |i: usize, j: usize| (i % n) * n + j % n;
        let bx = par::map_range(exec, n * n, |k| {
            let (i, j) = (k / n, k % n);
            b[0][k] - r * (e[2][idx(i, j + 1)] - e[2][k])
        });
        let by = par::map_range(exec, n * n, |k| {
            let (i, j) = (k / n, k % n);
            b[1][k] + r * (e[2][idx(i + 1, j)] - e[2][k])
        });
        let bz = par::map_range(exec, n * n, |k| {
            let (i, j) = (k / n, k % n);
            b[2][k] - r * ((e[1][idx(i + 1, j)] - e[1][k]) - (e[0][idx(i, j + 1)] - e[0][k]))
        });
        self.b = [bx, by, bz];
    }

    /// `E ← E + s ∇×B − ΔP`.
    fn kick_e(&mut self, s: f64, dp: Option<&[Vec<f64>; 3]>, exec: Exec) {
        let (n, r) = (self.n, s / self.spacing());
        let (e, b) = (&self.e, &self.b);
        let idx = |i: usize, j: usize| (i % n) * n + j % n;
        let src = |c: usize, k: usize| dp.map_or(0.0, |d| d[c][k]);
        let ex = par::map_range(exec, n * n, |k| {
            let (i, j) = (k / n, k % n);
            e[0][k] + r * (b[2][k] - b[2][idx(i, j + n - 1)]) - src(0, k)
        });
        let ey = par::map_range(exec, n * n, |k| {
            let (i, j) = (k / n, k % n);
            e[1][k] - r * (b[2][k] - b[2][idx(i + n - 1, j)]) - src(1, k)
        });
        let ez = par::map_range(exec, n * n, |k| {
            let (i, j) = (k / n, k % n);
            e[2][k] + r * ((b[1][k] - b[1][idx(i + n - 1, j)]) - (b[0][k] - b[0][idx(i, j + n - 1)])) - src(2, k)
        });
        self.e = [ex, ey, ez];
    }
}

/// One staggered step of `∂ₜB = −∇×E`, `∂ₜE = ∇×B − j`: half a kick of
/// `B`, a full kick of `E`, half a kick of `B`. Equivalent to Yee leapfrog.
pub fn fdtd_maxwell_step(s: &MaxwellState, dt: f64, exec: Exec) -> Result<MaxwellState> {
    let limit = s.cfl_limit();
    if !(dt > 0.0) || dt > limit {
        return Err(Error::CflViolation { dt, limit });
    }
    let mut next = s.clone();
    next.kick_b(0.5 * dt, exec);
    let dp = match (s.polarization(s.time), s.polarization(s.time + dt)) {
        (Some(p0), Some(p1)) => Some(std::array::from_fn(|k| {
            p1[k].iter().zip(&p0[k]).map(|(a, b)| a - b).collect()
        })),
        _ => None,
    };
    next.kick_e(dt, dp.as_ref(), exec);
    next.kick_b(0.5 * dt, exec);
    next.time = s.time + dt;
    Ok(next)
}
