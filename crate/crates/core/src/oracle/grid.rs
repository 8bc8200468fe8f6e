use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::OracleError;

/// Smallest admissible grid size.
pub const MIN_POINTS: usize = 16;

/// Default points per axis for field and kernel propagation.
pub const DEFAULT_POINTS: usize = 1024;

/// Default half width, in units of the widest beam width in a scan.
pub const DEFAULT_HALF_WIDTH_FACTOR: f64 = 8.0;

/// Environment variable overriding [`DEFAULT_POINTS`].
pub const GRID_POINTS_ENV: &str = "BEAMLAB_GRID_POINTS";

/// A uniform grid centered at the origin, `x_i = -L + i h` with
/// `h = 2L/n`, so `x_{n/2} = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    n_points: usize,
    half_width: f64,
}

impl Grid1D {
    pub fn new(n_points: usize, half_width: f64) -> Result<Self, OracleError> {
        if n_points < MIN_POINTS || !n_points.is_power_of_two() {
            return Err(OracleError::InvalidGrid(format!(
                "n_points must be a power of two >= {MIN_POINTS}, got {n_points}"
            )));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(OracleError::InvalidGrid(format!(
                "half_width must be finite and positive, got {half_width}"
            )));
        }
        Ok(Grid1D {
            n_points,
            half_width,
        })
    }

    /// `DEFAULT_POINTS` (or the environment override) spanning
    /// `±8 × max_width`.
    pub fn default_for(max_width: f64) -> Result<Self, OracleError> {
        Grid1D::new(default_points()?, DEFAULT_HALF_WIDTH_FACTOR * max_width)
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n_points as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    /// Angular spatial frequencies in FFT order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n_points;
        let dk = 2.0 * PI / (n as f64 * self.spacing());
        (0..n)
            .map(|j| {
                let m = if j < n / 2 {
                    j as isize
                } else {
                    j as isize - n as isize
                };
                m as f64 * dk
            })
            .collect()
    }

    /// Whether `x_i` lies in the outer 5% band on either side.
    pub(crate) fn is_edge(&self, i: usize) -> bool {
        self.point(i).abs() >= 0.95 * self.half_width
    }

    /// Fractional index of `x` and whether it falls inside the sampled range.
    pub(crate) fn locate(&self, x: f64) -> Option<(usize, f64)> {
        let t = (x + self.half_width) / self.spacing();
        if t < 0.0 {
            return None;
        }
        let i = t.floor() as usize;
        if i + 1 >= self.n_points {
            return None;
        }
        Some((i, t - i as f64))
    }
}

/// Grid size from `BEAMLAB_GRID_POINTS`, falling back to [`DEFAULT_POINTS`].
pub fn default_points() -> Result<usize, OracleError> {
    match std::env::var(GRID_POINTS_ENV) {
        Ok(text) => {
            let n: usize = text.trim().parse().map_err(|_| {
                OracleError::InvalidGrid(format!("{GRID_POINTS_ENV}={text:?} is not an integer"))
            })?;
            Grid1D::new(n, 1.0)?;
            Ok(n)
        }
        Err(_) => Ok(DEFAULT_POINTS),
    }
}

/// Samples of a one-dimensional field.
#[derive(Debug, Clone, PartialEq)]
pub struct Field1D {
    pub grid: Grid1D,
    pub values: Vec<Complex64>,
}

impl Field1D {
    pub fn sample(grid: Grid1D, f: impl Fn(f64) -> Complex64) -> Self {
        Field1D {
            grid,
            values: grid.points().into_iter().map(f).collect(),
        }
    }

    /// `∫|ψ|² dx` by the trapezoid rule.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.spacing()
    }

    pub(crate) fn edge_fraction(&self) -> f64 {
        let total: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        let edge: f64 = self
            .values
            .iter()
            .enumerate()
            .filter(|(i, _)| self.grid.is_edge(*i))
            .map(|(_, v)| v.norm_sqr())
            .sum();
        edge / total
    }
}

/// Samples of a two-dimensional field, stored row-major with `y` fastest:
/// `values[ix * ny + iy]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    pub grid_x: Grid1D,
    pub grid_y: Grid1D,
    pub values: Vec<Complex64>,
}

impl Field2D {
    pub fn sample(grid_x: Grid1D, grid_y: Grid1D, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let ys = grid_y.points();
        let mut values = Vec::with_capacity(grid_x.n_points() * grid_y.n_points());
        for x in grid_x.points() {
            for &y in &ys {
                values.push(f(x, y));
            }
        }
        Field2D {
            grid_x,
            grid_y,
            values,
        }
    }

    pub fn at(&self, ix: usize, iy: usize) -> Complex64 {
        self.values[ix * self.grid_y.n_points() + iy]
    }

    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()
            * self.grid_x.spacing()
            * self.grid_y.spacing()
    }

    pub(crate) fn edge_fraction(&self) -> f64 {
        let ny = self.grid_y.n_points();
        let mut total = 0.0;
        let mut edge = 0.0;
        for (idx, v) in self.values.iter().enumerate() {
            let e = v.norm_sqr();
            total += e;
            if self.grid_x.is_edge(idx / ny) || self.grid_y.is_edge(idx % ny) {
                edge += e;
            }
        }
        edge / total
    }
}
