//! Sampling fields on uniform periodic grids.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::expr::FieldExpr;
use super::jet::C64;
use crate::error::{Error, Result};
use crate::par::{self, Exec};

/// Uniform periodic grid over `[−L/2, L/2)` in the first `dims` spatial axes,
/// at a fixed time coordinate `x0`. Remaining axes sit at 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dims: usize,
    pub n: usize,
    pub extent: f64,
    pub x0: f64,
}

impl GridSpec {
    pub fn new(dims: usize, n: usize, extent: f64, x0: f64) -> Result<Self> {
        if !(1..=3).contains(&dims) {
            return Err(Error::InvalidGrid(format!("dimension must be 1, 2 or 3, got {dims}")));
        }
        if n == 0 {
            return Err(Error::InvalidGrid("points per axis must be positive".into()));
        }
        if !(extent > 0.0) || !extent.is_finite() {
            return Err(Error::InvalidGrid(format!("extent must be positive, got {extent}")));
        }
        Ok(Self { dims, n, extent, x0 })
    }

    pub fn spacing(&self) -> f64 {
        self.extent / self.n as f64
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.dims as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn axis_coordinate(&self, k: usize) -> f64 {
        -0.5 * self.extent + k as f64 * self.spacing()
    }

    /// Spacetime point of the flat index, row-major with the last axis fastest.
    pub fn point(&self, flat: usize) -> [f64; 4] {
        let mut x = [self.x0, 0.0, 0.0, 0.0];
        let mut rest = flat;
        for axis in (0..self.dims).rev() {
            x[axis + 1] = self.axis_coordinate(rest % self.n);
            rest /= self.n;
        }
        x
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    pub spec: GridSpec,
    pub values: Vec<C64>,
}

impl SampledField {
    pub fn points(&self) -> impl Iterator<Item = [f64; 4]> + '_ {
        (0..self.values.len()).map(|k| self.spec.point(k))
    }

    /// CSV with header `x0,x1,x2,x3,re,im` and 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x0,x1,x2,x3,re,im")?;
        for (x, v) in self.points().zip(&self.values) {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                x[0], x[1], x[2], x[3], v.re, v.im
            )?;
        }
        Ok(())
    }
}

/// Samples `f` at every grid point. Output order does not depend on `exec`.
pub fn sample_on_grid(f: &FieldExpr, spec: &GridSpec, exec: Exec) -> Result<SampledField> {
    let spec = GridSpec::new(spec.dims, spec.n, spec.extent, spec.x0)?;
    let values = par::map_range(exec, spec.len(), |k| f.value(&spec.point(k)));
    Ok(SampledField {
        spec,
        values: values.into_iter().collect::<Result<_>>()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galgroup::Vec3;
    use std::f64::consts::TAU;

    #[test]
    fn constant_field_is_uniform() {
        let spec = GridSpec::new(2, 8, 4.0, 0.0).unwrap();
        let s = sample_on_grid(&FieldExpr::real(3.5), &spec, Exec::Parallel).unwrap();
        assert_eq!(s.values.len(), 64);
        assert!(s.values.iter().all(|v| *v == C64::new(3.5, 0.0)));
    }

    #[test]
    fn commensurate_plane_wave_wraps_around() {
        let (n, l) = (16, 5.0);
        let spec = GridSpec::new(1, n, l, 0.0).unwrap();
        let f = FieldExpr::plane_wave(C64::new(1.0, 0.0), Vec3::new(3.0 * TAU / l, 0.0, 0.0), 0.0, 1.0);
        let s = sample_on_grid(&f, &spec, Exec::Sequential).unwrap();
        // the sample one step past the last point is the first one again
        let next = f.value(&[0.0, spec.axis_coordinate(n), 0.0, 0.0]).unwrap();
        assert!((next - s.values[0]).norm() < 1e-12);
    }

    #[test]
    fn bump_peaks_at_nearest_node() {
        let spec = GridSpec::new(2, 20, 10.0, 0.0).unwrap();
        let f = FieldExpr::gaussian_bump(1.0, Vec3::new(1.1, -2.3, 0.0)).unwrap();
        let s = sample_on_grid(&f, &spec, Exec::Parallel).unwrap();
        let best = (0..s.values.len())
            .max_by(|&a, &b| s.values[a].re.total_cmp(&s.values[b].re))
            .unwrap();
        let x = spec.point(best);
        assert_eq!([x[1], x[2]], [1.0, -2.5]);
    }

    #[test]
    fn modes_agree_and_csv_is_stable() {
        let spec = GridSpec::new(3, 6, 3.0, 0.25).unwrap();
        let f = FieldExpr::plane_wave(C64::new(0.5, 0.1), Vec3::new(1.0, 2.0, -1.0), 0.3, 1.0);
        let a = sample_on_grid(&f, &spec, Exec::Parallel).unwrap();
        let b = sample_on_grid(&f, &spec, Exec::Sequential).unwrap();
        assert_eq!(a, b);
        let mut buf = Vec::new();
        a.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x0,x1,x2,x3,re,im"));
        assert_eq!(text.lines().count(), 6 * 6 * 6 + 1);
        let first: Vec<f64> = lines.next().unwrap().split(',').map(|t| t.parse().unwrap()).collect();
        assert_eq!(first[..4], [0.25, -1.5, -1.5, -1.5]);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(GridSpec::new(2, 0, 1.0, 0.0).is_err());
        assert!(GridSpec::new(2, 4, -1.0, 0.0).is_err());
        assert!(GridSpec::new(4, 4, 1.0, 0.0).is_err());
    }
}
