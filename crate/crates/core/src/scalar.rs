//! Exact snoidal solutions of the massless quartic scalar field and the
//! strong-coupling (gradient) expansion built on them.
//!
//! The field equation is `d_tau^2 phi - Lap phi + lambda phi^3 = 0` over a time
//! `tau` and up to four spatial coordinates. Plane waves
//! `phi = mu (2/lambda)^(1/4) sn(p.x + phase, i)` solve it whenever
//! `p_tau^2 - |p_space|^2 = mu^2 sqrt(lambda/2)`; the quadratic form on the left
//! is what [`wave_norm`] computes and is preserved by boosts and spatial
//! rotations.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elliptic::{jacobi_sn_cn_dn, quarter_period_imaginary_unit, EllipticModulus};
use crate::error::{Error, Result};
use crate::grid::{Axis, Grid, ResidualReport, StencilOrder};
use crate::ode::{integrate_sampled, richardson_error};

/// Number of coordinates of a point: `tau` followed by four spatial ones.
pub const POINT_DIM: usize = 5;

/// `p_0^2 - p_1^2 - ... - p_4^2`.
pub fn wave_norm(p: &[f64; POINT_DIM]) -> f64 {
    p[0] * p[0] - p[1..].iter().map(|x| x * x).sum::<f64>()
}

/// Boost with the given rapidity mixing `tau` with spatial coordinate `axis` (1..=4).
pub fn boost(p: &[f64; POINT_DIM], axis: usize, rapidity: f64) -> [f64; POINT_DIM] {
    assert!((1..POINT_DIM).contains(&axis));
    let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
    let mut q = *p;
    q[0] = ch * p[0] + sh * p[axis];
    q[axis] = sh * p[0] + ch * p[axis];
    q
}

/// Rotation by `angle` in the plane of spatial coordinates `i` and `j` (1..=4).
pub fn rotate(p: &[f64; POINT_DIM], i: usize, j: usize, angle: f64) -> [f64; POINT_DIM] {
    assert!(i != j && (1..POINT_DIM).contains(&i) && (1..POINT_DIM).contains(&j));
    let (s, c) = angle.sin_cos();
    let mut q = *p;
    q[i] = c * p[i] - s * p[j];
    q[j] = s * p[i] + c * p[j];
    q
}

/// Parameters of one exact snoidal solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarSolution {
    pub lambda: f64,
    pub mu: f64,
    pub phase: f64,
    pub wavevector: [f64; POINT_DIM],
}

impl ScalarSolution {
    /// Builds the solution whose wavevector points along `direction` and
    /// satisfies the dispersion relation. `direction` must be timelike
    /// (`wave_norm(direction) > 0`); its normalisation is irrelevant.
    pub fn make_exact(lambda: f64, mu: f64, phase: f64, direction: [f64; POINT_DIM]) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::domain(format!("lambda must be positive, got {lambda}")));
        }
        if !(mu.is_finite() && phase.is_finite()) {
            return Err(Error::domain("mu and phase must be finite"));
        }
        if direction.iter().all(|&d| d == 0.0) {
            return Err(Error::domain("direction must be non-zero"));
        }
        let norm = wave_norm(&direction);
        if !(norm > 0.0) {
            return Err(Error::domain(format!(
                "direction must be timelike (p_tau^2 > |p_space|^2), got wave norm {norm}"
            )));
        }
        let scale = (mu * mu * (0.5 * lambda).sqrt() / norm).sqrt();
        Ok(ScalarSolution {
            lambda,
            mu,
            phase,
            wavevector: direction.map(|d| d * scale),
        })
    }

    /// `mu (2/lambda)^(1/4)`.
    pub fn amplitude(&self) -> f64 {
        self.mu * (2.0 / self.lambda).powf(0.25)
    }

    /// `mu^2 sqrt(lambda / 2)`, the value the wave norm must take.
    pub fn dispersion_target(&self) -> f64 {
        self.mu * self.mu * (0.5 * self.lambda).sqrt()
    }

    /// `wave_norm(p) - mu^2 sqrt(lambda/2)`; zero for an exact solution.
    pub fn dispersion_defect(&self) -> f64 {
        wave_norm(&self.wavevector) - self.dispersion_target()
    }

    /// Leading-order frequency `p_0 = mu (lambda/2)^(1/4)` of the time-only solution.
    pub fn p0(&self) -> f64 {
        self.mu * (0.5 * self.lambda).powf(0.25)
    }

    /// `mu (2/lambda)^(1/4) sn(p.x + phase, i)`.
    pub fn eval(&self, point: &[f64; POINT_DIM]) -> f64 {
        let arg: f64 = self.wavevector.iter().zip(point).map(|(p, x)| p * x).sum::<f64>() + self.phase;
        self.amplitude() * crate::elliptic::sn_imaginary_unit(arg)
    }

    /// Samples the solution; grid axis 0 is `tau`, further axes are `x_1, x_2, ...`.
    pub fn sample(&self, grid: &Grid) -> Result<ScalarGrid> {
        if !(2..=POINT_DIM).contains(&grid.ndim()) {
            return Err(Error::config("spatial_dims", "scalar grids carry 1..=4 spatial axes"));
        }
        let values = (0..grid.len())
            .into_par_iter()
            .map(|idx| {
                let mut pt = [0.0; POINT_DIM];
                for (ax, c) in grid.coords(idx).into_iter().enumerate() {
                    pt[ax] = c;
                }
                self.eval(&pt)
            })
            .collect();
        ScalarGrid::new(grid.clone(), values)
    }

    /// A grid that is periodic along every axis on which the wave varies,
    /// holding `periods` full periods of `sn` along each such axis with
    /// `samples_per_period` points per period. Axes on which the wave is
    /// constant get `MIN_RESOLUTION`-style coverage of unit length.
    pub fn period_matched_grid(&self, spatial_dims: usize, samples_per_period: usize, periods: usize) -> Result<Grid> {
        if !(1..POINT_DIM).contains(&spatial_dims) {
            return Err(Error::config("spatial_dims", "must lie in 1..=4"));
        }
        let period = 4.0 * quarter_period_imaginary_unit();
        let axes = (0..=spatial_dims)
            .map(|ax| {
                let p = self.wavevector[ax].abs();
                if p > 0.0 {
                    Axis::periodic(periods as f64 * period / p, periods * samples_per_period)
                } else {
                    Axis::periodic(1.0, crate::grid::MIN_RESOLUTION)
                }
            })
            .collect();
        Grid::new(axes)
    }
}

/// A real scalar field sampled on a grid (axis 0 is time).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarGrid {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl ScalarGrid {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::config(
                "values",
                format!("grid has {} points but {} values were given", grid.len(), values.len()),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("values", "field contains non-finite values"));
        }
        Ok(ScalarGrid { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        let n = grid.len();
        ScalarGrid { grid, values: vec![0.0; n] }
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        crate::grid::write_field_csv(out, &self.grid, &["value".to_string()], &self.values)
    }

    pub fn read_csv<R: std::io::BufRead>(input: R) -> Result<Self> {
        let (grid, labels, values) = crate::grid::read_field_csv(input)?;
        if labels.len() != 1 {
            return Err(Error::config("field", "a scalar field has exactly one column"));
        }
        ScalarGrid::new(grid, values)
    }
}

/// Which time variable the grid's axis 0 measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TimeVariable {
    /// Physical time: residual `d_tau^2 phi - Lap phi + lambda phi^3`.
    Tau,
    /// Rescaled time `theta = sqrt(lambda) tau`: residual
    /// `d_theta^2 phi + phi^3 - Lap phi / lambda` (the physical residual divided by `lambda`).
    Theta,
}

/// Field-equation residual by central differences on interior points
/// (periodic axes wrap, so every point of a fully periodic grid counts).
pub fn scalar_residual(
    field: &ScalarGrid,
    lambda: f64,
    time: TimeVariable,
    stencil: StencilOrder,
) -> Result<ResidualReport> {
    let grid = &field.grid;
    if !(2..=POINT_DIM).contains(&grid.ndim()) {
        return Err(Error::config("spatial_dims", "scalar grids carry 1..=4 spatial axes"));
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::domain(format!("lambda must be positive, got {lambda}")));
    }
    let halo = stencil.half_width();
    let v = &field.values;
    let rows: Vec<Vec<f64>> = (0..grid.len())
        .into_par_iter()
        .filter(|&i| grid.is_interior(i, halo))
        .map(|i| {
            let f = |j: usize| v[j];
            let dtt = grid.d2(stencil, i, 0, f).unwrap();
            let lap: f64 = (1..grid.ndim()).map(|ax| grid.d2(stencil, i, ax, f).unwrap()).sum();
            let phi = v[i];
            let r = match time {
                TimeVariable::Tau => dtt - lap + lambda * phi * phi * phi,
                TimeVariable::Theta => dtt + phi * phi * phi - lap / lambda,
            };
            vec![r]
        })
        .collect();
    Ok(ResidualReport::from_rows(
        &["phi".to_string()],
        &rows,
        grid.spacings(),
        serde_json::json!({ "equation": "scalar", "lambda": lambda, "time": time, "stencil": stencil }),
    ))
}

/// Orders of the expansion `phi = sum_n lambda^(-n) phi_n` in rescaled time.
#[derive(Debug, Clone)]
pub struct ExpansionHierarchy {
    pub grid: Grid,
    pub lambda: f64,
    /// `orders[n]` holds `phi_n` on `grid`.
    pub orders: Vec<Vec<f64>>,
    /// Always true: axis 0 of `grid` is `theta = sqrt(lambda) tau`.
    pub rescaled_time: bool,
    /// Richardson estimate of the time-integration error of the corrections.
    pub integration_error: f64,
}

impl ExpansionHierarchy {
    /// `sum_{n < n_terms} lambda^(-n) phi_n`.
    pub fn assembled(&self, n_terms: usize) -> ScalarGrid {
        let mut values = vec![0.0; self.grid.len()];
        for (n, order) in self.orders.iter().take(n_terms).enumerate() {
            let w = self.lambda.powi(-(n as i32));
            for (acc, v) in values.iter_mut().zip(order) {
                *acc += w * v;
            }
        }
        ScalarGrid {
            grid: self.grid.clone(),
            values,
        }
    }

    pub fn order(&self, n: usize) -> ScalarGrid {
        ScalarGrid {
            grid: self.grid.clone(),
            values: self.orders[n].clone(),
        }
    }

    /// The order-0 time series at one spatial point.
    pub fn order0_series(&self, spatial_index: usize) -> Vec<f64> {
        let s = self.grid.spatial_len();
        (0..self.grid.axis(0).len).map(|t| self.orders[0][t * s + spatial_index]).collect()
    }
}

/// Leading-order oscillator `phi_0(theta) = a sn(a theta / sqrt 2 + phase, i)` with
/// `a = mu (2/lambda)^(1/4)`, together with its `theta` derivative.
#[inline]
fn order0_with_derivative(amplitude: f64, phase: f64, theta: f64) -> (f64, f64) {
    let w = amplitude / std::f64::consts::SQRT_2;
    let t = jacobi_sn_cn_dn(w * theta + phase, EllipticModulus::IMAGINARY_UNIT)
        .expect("finite argument");
    (amplitude * t.sn, amplitude * w * t.cn * t.dn)
}

/// `a sn(a theta / sqrt 2 + phase, i)`, the leading-order oscillator in rescaled time.
pub fn order0_series_value(amplitude: f64, phase: f64, theta: f64) -> f64 {
    order0_with_derivative(amplitude, phase, theta).0
}

/// `theta`-period of the leading-order oscillator with amplitude `a`.
pub fn order0_period(amplitude: f64) -> f64 {
    4.0 * quarter_period_imaginary_unit() * std::f64::consts::SQRT_2 / amplitude.abs()
}

/// Spatial Laplacian of a slice. Interior points use `stencil`; on non-periodic
/// axes the two edge layers fall back to second-order central and one-sided
/// formulas.
pub(crate) fn slice_laplacian(axes: &[Axis], values: &[f64], stencil: StencilOrder) -> Vec<f64> {
    if axes.is_empty() {
        return vec![0.0; values.len()];
    }
    let grid = Grid::new(axes.to_vec()).expect("validated axes");
    (0..values.len())
        .map(|i| {
            (0..axes.len())
                .map(|ax| slice_d2(&grid, ax, i, values, stencil))
                .sum()
        })
        .collect()
}

fn slice_d2(grid: &Grid, ax: usize, i: usize, values: &[f64], stencil: StencilOrder) -> f64 {
    let f = |j: usize| values[j];
    if let Some(d) = grid.d2(stencil, i, ax, f) {
        return d;
    }
    if let Some(d) = grid.d2(StencilOrder::Second, i, ax, f) {
        return d;
    }
    // One-sided, second order: (2 f0 - 5 f1 + 4 f2 - f3) / h^2.
    let h = grid.axis(ax).spacing;
    let dir = if grid.shift(i, ax, -1).is_none() { 1 } else { -1 };
    let f0 = values[i];
    let at = |k: isize| values[grid.shift(i, ax, dir * k).unwrap()] - f0;
    (-5.0 * at(1) + 4.0 * at(2) - at(3)) / (h * h)
}

/// Solves the hierarchy
///
/// ```text
/// d_theta^2 phi_0 + phi_0^3 = 0
/// d_theta^2 phi_1 + 3 phi_0^2 phi_1 = Lap phi_0
/// d_theta^2 phi_2 + 3 phi_0^2 phi_2 = -3 phi_0 phi_1^2 + Lap phi_1
/// ```
///
/// on `grid` (axis 0 is `theta`, the rest spatial). `phi_0` is the closed-form
/// snoidal oscillator with spatially varying `mu` and `phase`; the
/// corrections start from zero data and are integrated with RK4 (at least
/// 200 steps per oscillator period) by the method of lines.
pub fn solve_hierarchy(
    lambda: f64,
    mu: &[f64],
    phase: &[f64],
    n_orders: usize,
    grid: &Grid,
    stencil: StencilOrder,
) -> Result<ExpansionHierarchy> {
    if !(1..=3).contains(&n_orders) {
        return Err(Error::config("orders", format!("n_orders must be 1, 2 or 3, got {n_orders}")));
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::domain(format!("lambda must be positive, got {lambda}")));
    }
    if !(2..=POINT_DIM).contains(&grid.ndim()) {
        return Err(Error::config("spatial_dims", "scalar grids carry 1..=4 spatial axes"));
    }
    let ns = grid.spatial_len();
    if mu.len() != ns || phase.len() != ns {
        return Err(Error::config("profile", "profile length does not match the spatial grid"));
    }
    if grid.axis(0).periodic {
        return Err(Error::config("time", "the time axis of a hierarchy grid must be open"));
    }
    let amp_scale = (2.0 / lambda).powf(0.25);
    let amps: Vec<f64> = mu.iter().map(|m| m * amp_scale).collect();
    let nt = grid.axis(0).len;
    let dt = grid.axis(0).spacing;
    let spatial_axes: Vec<Axis> = grid.axes()[1..].to_vec();

    let mut orders = Vec::with_capacity(n_orders);
    let mut order0 = vec![0.0; grid.len()];
    for t in 0..nt {
        let theta = t as f64 * dt;
        for s in 0..ns {
            order0[t * ns + s] = order0_with_derivative(amps[s], phase[s], theta).0;
        }
    }
    orders.push(order0);

    let mut integration_error = 0.0;
    if n_orders > 1 {
        let n_corr = n_orders - 1;
        // state layout: for each correction order c, [phi_c (ns), dphi_c (ns)]
        let dim = 2 * ns * n_corr;
        let rhs = |theta: f64, y: &[f64], dydt: &mut [f64]| {
            let phi0: Vec<f64> = (0..ns).map(|s| order0_with_derivative(amps[s], phase[s], theta).0).collect();
            let mut source = slice_laplacian(&spatial_axes, &phi0, stencil);
            for c in 0..n_corr {
                let base = 2 * ns * c;
                let (phi_c, dphi_c) = y[base..base + 2 * ns].split_at(ns);
                dydt[base..base + ns].copy_from_slice(dphi_c);
                for s in 0..ns {
                    let mut acc = -3.0 * phi0[s] * phi0[s] * phi_c[s] + source[s];
                    if c == 1 {
                        let p1 = y[s];
                        acc -= 3.0 * phi0[s] * p1 * p1;
                    }
                    dydt[base + ns + s] = acc;
                }
                if c + 1 < n_corr {
                    source = slice_laplacian(&spatial_axes, phi_c, stencil);
                }
            }
        };
        let sys = (dim, rhs);
        let max_amp = amps.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        let substeps = if max_amp > 0.0 {
            (dt / (order0_period(max_amp) / 200.0)).ceil().max(1.0) as usize
        } else {
            1
        };
        let y0 = vec![0.0; dim];
        let out = integrate_sampled(&sys, 0.0, &y0, dt, nt, substeps);
        integration_error = richardson_error(&sys, 0.0, &y0, dt, nt.min(64), substeps);
        for c in 0..n_corr {
            let base = 2 * ns * c;
            let mut vals = vec![0.0; grid.len()];
            for t in 0..nt {
                vals[t * ns..(t + 1) * ns].copy_from_slice(&out[t * dim + base..t * dim + base + ns]);
            }
            orders.push(vals);
        }
    }

    Ok(ExpansionHierarchy {
        grid: grid.clone(),
        lambda,
        orders,
        rescaled_time: true,
        integration_error,
    })
}

/// Energy record of a leading-order time series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyDrift {
    /// `E(theta) = (d_theta phi)^2 / 2 + phi^4 / 4` at interior samples.
    pub energies: Vec<f64>,
    /// `max |E - E_first| / E_first`, zero for a vanishing field.
    pub max_relative_drift: f64,
}

/// Oscillator energy of a leading-order series with uniform step, the
/// derivative taken by fourth-order central differences.
pub fn energy_density(series: &[f64], step: f64) -> Result<EnergyDrift> {
    if series.len() < 16 {
        return Err(Error::config("series", format!("need at least 16 samples, got {}", series.len())));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::config("step", "step must be positive"));
    }
    let energies: Vec<f64> = (2..series.len() - 2)
        .map(|i| {
            let d = StencilOrder::Fourth.d1(step, |o| series[(i as isize + o) as usize]);
            let p = series[i];
            0.5 * d * d + 0.25 * p * p * p * p
        })
        .collect();
    let e0 = energies[0];
    let max_relative_drift = if e0 == 0.0 {
        0.0
    } else {
        energies.iter().map(|e| (e - e0).abs() / e0).fold(0.0, f64::max)
    };
    Ok(EnergyDrift {
        energies,
        max_relative_drift,
    })
}

/// Period of an oscillating series from its zero crossings (linear
/// interpolation; successive crossings are half a period apart).
pub fn zero_crossing_period(series: &[f64], step: f64) -> Option<f64> {
    let crossings: Vec<f64> = series
        .windows(2)
        .enumerate()
        .filter(|(_, w)| (w[0] < 0.0 && w[1] >= 0.0) || (w[0] > 0.0 && w[1] <= 0.0))
        .filter(|(_, w)| w[1] != 0.0 || w[0] != 0.0)
        .map(|(i, w)| (i as f64 + w[0] / (w[0] - w[1])) * step)
        .collect();
    if crossings.len() < 2 {
        return None;
    }
    let span = crossings[crossings.len() - 1] - crossings[0];
    Some(2.0 * span / (crossings.len() - 1) as f64)
}
