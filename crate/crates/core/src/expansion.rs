//! The `1/g` expansion of the gauge field around the Smilga embedding.
//!
//! With `theta = g tau` the rescaled field equations split as
//! `T0(A) + T1(A)/g + T2(A)/g^2`, and the ansatz
//!
//! ```text
//! A = A0 + A1 / g + ...
//! ```
//!
//! is solved order by order. `A0 = eta phi_0` with
//! `phi_0 = mu sn(mu theta + phase, i)`, `mu` and `phase` arbitrary smooth
//! functions of space (here `mu` is the `theta`-frame amplitude, so `A0` does
//! not depend on `g`). The correction `A1` solves a driven linear system in
//! `theta` at each spatial point, integrated from zero data.
//!
//! Two next-to-leading-order systems are available, see [`NloScheme`].

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elliptic::{jacobi_sn_cn_dn, quarter_period_imaginary_unit, EllipticModulus};
use crate::error::{Error, Result};
use crate::grid::{fmt_f64, Axis, Grid, StencilOrder};
use crate::ode::{integrate_sampled, richardson_error};
use crate::profile::Profile;
use crate::su2::{epsilon, quartic_eom_term, ColorVectorField, Metric, StructureConstants, Su2, COLORS, SPACETIME};
use crate::ym::{ym_eom_residual, Frame, GaugeFieldGrid, GaugeParams, COMPONENTS};

/// Which next-to-leading-order system [`nlo_correction`] integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NloScheme {
    /// The reduced Smilga system
    ///
    /// ```text
    /// (1/alpha) A0'' + 6 phi_0^2 A0 = -(1 - 1/alpha) d_theta d_a phi_0
    /// A_k''     + 6 phi_0^2 A_k     = -eps_{abk} A0^b d_theta phi_0
    /// ```
    ///
    /// Vanishes identically at `alpha = 1`.
    #[default]
    Simplified,
    /// The exact linearisation `DT0[A0](A1) = -T1(A0)`, which keeps the
    /// magnetic source `-3 eps_{aik} phi_0 d_i phi_0` and the full quartic
    /// mass matrix. Removes the whole `O(1/g)` residual, but is non-zero
    /// at `alpha = 1`.
    Linearized,
}

impl std::str::FromStr for NloScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "simplified" => Ok(NloScheme::Simplified),
            "linearized" => Ok(NloScheme::Linearized),
            _ => Err(Error::config("scheme", format!("expected `simplified` or `linearized`, got `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionConfig {
    pub params: GaugeParams,
    /// `theta`-frame amplitude `mu(x)`.
    pub mu: Profile,
    pub phase: Profile,
    /// 1 (leading order only) or 2 (with the correction).
    pub n_orders: usize,
    pub spatial_dims: usize,
    /// Length of each periodic spatial axis.
    pub spatial_extent: f64,
    pub spatial_points: usize,
    /// Length of the (open) `theta` axis.
    pub time_extent: f64,
    pub time_points: usize,
    pub stencil: StencilOrder,
    pub scheme: NloScheme,
}

impl Default for ExpansionConfig {
    fn default() -> Self {
        ExpansionConfig {
            params: GaugeParams::new(10.0, 1.0).expect("valid defaults"),
            mu: Profile::parse(DEFAULT_MU_PROFILE, "mu").expect("valid default"),
            phase: Profile::Const(0.0),
            n_orders: 1,
            spatial_dims: 1,
            spatial_extent: 4.0,
            spatial_points: 64,
            time_extent: 6.0,
            time_points: 513,
            stencil: StencilOrder::Fourth,
            scheme: NloScheme::Simplified,
        }
    }
}

/// Bump-shaped amplitude used by the sweeps unless configured otherwise.
pub const DEFAULT_MU_PROFILE: &str = "const:1+bump:2,1.6,0.1";

/// Couplings swept by default.
pub const DEFAULT_G_LIST: [f64; 4] = [10.0, 20.0, 40.0, 80.0];

impl ExpansionConfig {
    pub fn validate(&self) -> Result<()> {
        GaugeParams::new(self.params.g, self.params.alpha)?;
        if !(1..=2).contains(&self.n_orders) {
            return Err(Error::config("orders", format!("must be 1 or 2, got {}", self.n_orders)));
        }
        if !(1..=3).contains(&self.spatial_dims) {
            return Err(Error::config("spatial_dims", format!("must be 1..=3, got {}", self.spatial_dims)));
        }
        if !(self.spatial_extent.is_finite() && self.spatial_extent > 0.0) {
            return Err(Error::config("spatial_extent", "must be positive"));
        }
        if !(self.time_extent.is_finite() && self.time_extent > 0.0) {
            return Err(Error::config("time_extent", "must be positive"));
        }
        Ok(())
    }

    /// `theta` axis followed by the periodic spatial axes.
    pub fn grid(&self) -> Result<Grid> {
        self.validate()?;
        let mut axes = vec![Axis::closed(self.time_extent, self.time_points)];
        axes.extend((0..self.spatial_dims).map(|_| Axis::periodic(self.spatial_extent, self.spatial_points)));
        Grid::new(axes)
    }

    fn spatial_grid(&self) -> Result<Grid> {
        Grid::new((0..self.spatial_dims).map(|_| Axis::periodic(self.spatial_extent, self.spatial_points)).collect())
    }
}

/// Amplitude and phase at every spatial point.
struct Background {
    spatial: Grid,
    mu: Vec<f64>,
    phase: Vec<f64>,
    stencil: StencilOrder,
}

impl Background {
    fn new(config: &ExpansionConfig) -> Result<Self> {
        let spatial = config.spatial_grid()?;
        let mu = config.mu.sample(spatial.axes())?;
        let phase = config.phase.sample(spatial.axes())?;
        Ok(Background {
            spatial,
            mu,
            phase,
            stencil: config.stencil,
        })
    }

    /// `(phi_0, d_theta phi_0)` at spatial point `s`.
    #[inline]
    fn phi(&self, s: usize, theta: f64) -> (f64, f64) {
        let m = self.mu[s];
        if m == 0.0 {
            return (0.0, 0.0);
        }
        let t = jacobi_sn_cn_dn(m * theta + self.phase[s], EllipticModulus::IMAGINARY_UNIT).expect("finite argument");
        (m * t.sn, m * m * t.cn * t.dn)
    }

    /// Spatial derivative along axis `i` (0-based) of `f(q)`; zero for absent axes.
    #[inline]
    fn d(&self, s: usize, i: usize, f: impl Fn(usize) -> f64) -> f64 {
        if i >= self.spatial.ndim() {
            return 0.0;
        }
        self.spatial.d1(self.stencil, s, i, f).expect("periodic axis")
    }

    fn max_mu(&self) -> f64 {
        self.mu.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// `A0 = eta phi_0` on the configured grid; every other component, in
/// particular `A^a_0`, is zero.
pub fn leading_order(config: &ExpansionConfig) -> Result<GaugeFieldGrid> {
    let grid = config.grid()?;
    let bg = Background::new(config)?;
    let ns = grid.spatial_len();
    let dt = grid.axis(0).spacing;
    let phi: Vec<f64> = (0..grid.len())
        .into_par_iter()
        .map(|p| bg.phi(p % ns, (p / ns) as f64 * dt).0)
        .collect();
    GaugeFieldGrid::smilga(grid, &phi)
}

/// Time-derivative part of the `O(g^0)` cubic terms, bilinear in
/// `(x, y)` with their `theta` derivatives supplied:
/// `nu = 0: f (x^b_i y'^c_i + (x^b_0 y^c_0)')`, `nu = k: f (x^b_0 y'^c_k + (x^b_0 y^c_k)')`.
fn cubic_t0(
    x: &ColorVectorField,
    dx: &ColorVectorField,
    y: &ColorVectorField,
    dy: &ColorVectorField,
) -> [[f64; SPACETIME]; COLORS] {
    let f = Su2;
    let mut out = [[0.0; SPACETIME]; COLORS];
    for a in 0..COLORS {
        for b in 0..COLORS {
            for c in 0..COLORS {
                let fabc = f.f(a, b, c);
                if fabc == 0.0 {
                    continue;
                }
                let (xb, dxb, yc, dyc) = (&x.values[b], &dx.values[b], &y.values[c], &dy.values[c]);
                let mut e0 = dxb[0] * yc[0] + xb[0] * dyc[0];
                for i in 1..SPACETIME {
                    e0 += xb[i] * dyc[i];
                }
                out[a][0] += fabc * e0;
                for k in 1..SPACETIME {
                    out[a][k] += fabc * (2.0 * xb[0] * dyc[k] + dxb[0] * yc[k]);
                }
            }
        }
    }
    out
}

fn unpack(y: &[f64]) -> ColorVectorField {
    let mut out = ColorVectorField::zero();
    for a in 0..COLORS {
        out.values[a].copy_from_slice(&y[a * SPACETIME..(a + 1) * SPACETIME]);
    }
    out
}

/// Source `T1(A0)` at spatial point `s` and time `theta`:
/// `nu = 0: kappa d_theta d_a phi_0`,
/// `nu = k: -eps_{aik} (phi_0 d_i phi_0 + d_i phi_0^2)`.
fn t1_source(bg: &Background, kappa: f64, s: usize, theta: f64) -> [[f64; SPACETIME]; COLORS] {
    let mut out = [[0.0; SPACETIME]; COLORS];
    let (phi, _) = bg.phi(s, theta);
    let grads: Vec<f64> = (0..COLORS).map(|i| bg.d(s, i, |q| bg.phi(q, theta).0)).collect();
    let grads_sq: Vec<f64> = (0..COLORS)
        .map(|i| {
            bg.d(s, i, |q| {
                let v = bg.phi(q, theta).0;
                v * v
            })
        })
        .collect();
    for a in 0..COLORS {
        if kappa != 0.0 {
            out[a][0] = kappa * bg.d(s, a, |q| bg.phi(q, theta).1);
        }
        for k in 1..SPACETIME {
            let mut v = 0.0;
            for i in 0..COLORS {
                v -= epsilon(a, i, k - 1) * (phi * grads[i] + grads_sq[i]);
            }
            out[a][k] = v;
        }
    }
    out
}

/// Right-hand side of the correction system at spatial point `s`; state is
/// `[A1 (12), A1' (12)]`.
fn correction_rhs(bg: &Background, params: &GaugeParams, scheme: NloScheme, s: usize, theta: f64, y: &[f64], dydt: &mut [f64]) {
    let (state, rate) = y.split_at(COMPONENTS);
    dydt[..COMPONENTS].copy_from_slice(rate);
    let alpha = params.alpha;
    let kappa = params.kappa();
    let (phi, dphi) = bg.phi(s, theta);
    let acc = &mut dydt[COMPONENTS..];
    match scheme {
        NloScheme::Simplified => {
            let mass = 6.0 * phi * phi;
            for a in 0..COLORS {
                let drive = if kappa != 0.0 {
                    kappa * bg.d(s, a, |q| bg.phi(q, theta).1)
                } else {
                    0.0
                };
                acc[a * SPACETIME] = -alpha * (mass * state[a * SPACETIME] + drive);
            }
            for a in 0..COLORS {
                for k in 1..SPACETIME {
                    let mut v = mass * state[a * SPACETIME + k];
                    for b in 0..COLORS {
                        v += epsilon(a, b, k - 1) * state[b * SPACETIME] * dphi;
                    }
                    acc[a * SPACETIME + k] = -v;
                }
            }
        }
        NloScheme::Linearized => {
            let (x, dx) = (ColorVectorField::smilga(phi), ColorVectorField::smilga(dphi));
            let (y1, dy1) = (unpack(state), unpack(rate));
            let c1 = cubic_t0(&x, &dx, &y1, &dy1);
            let c2 = cubic_t0(&y1, &dy1, &x, &dx);
            let src = t1_source(bg, kappa, s, theta);
            let m = Metric::Minkowski;
            for a in 0..COLORS {
                for nu in 0..SPACETIME {
                    let q = quartic_eom_term(&Su2, &y1, &x, &x, m, a, nu)
                        + quartic_eom_term(&Su2, &x, &y1, &x, m, a, nu)
                        + quartic_eom_term(&Su2, &x, &x, &y1, m, a, nu);
                    let rest = c1[a][nu] + c2[a][nu] + q + src[a][nu];
                    acc[a * SPACETIME + nu] = if nu == 0 { -alpha * rest } else { -rest };
                }
            }
        }
    }
}

/// The order-1 correction, integrated per spatial point from zero data with
/// RK4 (at least 200 steps per oscillator period).
pub fn nlo_correction(config: &ExpansionConfig) -> Result<GaugeFieldGrid> {
    nlo_correction_with_error(config).map(|(f, _)| f)
}

/// [`nlo_correction`] together with a Richardson estimate of the integration
/// error (largest over spatial points).
pub fn nlo_correction_with_error(config: &ExpansionConfig) -> Result<(GaugeFieldGrid, f64)> {
    let grid = config.grid()?;
    let bg = Background::new(config)?;
    let params = config.params;
    let ns = grid.spatial_len();
    let nt = grid.axis(0).len;
    let dt = grid.axis(0).spacing;
    let max_mu = bg.max_mu();
    let substeps = if max_mu > 0.0 {
        (dt / (oscillator_period(max_mu) / 200.0)).ceil().max(1.0) as usize
    } else {
        1
    };
    let y0 = vec![0.0; 2 * COMPONENTS];
    let per_point: Vec<(Vec<f64>, f64)> = (0..ns)
        .into_par_iter()
        .map(|s| {
            let rhs = |t: f64, y: &[f64], dydt: &mut [f64]| correction_rhs(&bg, &params, config.scheme, s, t, y, dydt);
            let sys = (2 * COMPONENTS, rhs);
            let out = integrate_sampled(&sys, 0.0, &y0, dt, nt, substeps);
            let err = richardson_error(&sys, 0.0, &y0, dt, nt.min(32), substeps);
            (out, err)
        })
        .collect();
    let mut values = vec![0.0; grid.len() * COMPONENTS];
    let mut err = 0.0f64;
    for (s, (out, e)) in per_point.into_iter().enumerate() {
        err = err.max(e);
        for t in 0..nt {
            let p = t * ns + s;
            values[p * COMPONENTS..(p + 1) * COMPONENTS]
                .copy_from_slice(&out[t * 2 * COMPONENTS..t * 2 * COMPONENTS + COMPONENTS]);
        }
    }
    Ok((GaugeFieldGrid::new(grid, values)?, err))
}

/// `theta`-period `4 K(i) / mu` of `mu sn(mu theta, i)`.
pub fn oscillator_period(mu: f64) -> f64 {
    4.0 * quarter_period_imaginary_unit() / mu.abs()
}

/// Orders `0..n_orders` of the expansion.
pub fn expansion_orders(config: &ExpansionConfig) -> Result<Vec<GaugeFieldGrid>> {
    let mut orders = vec![leading_order(config)?];
    if config.n_orders == 2 {
        orders.push(nlo_correction(config)?);
    }
    Ok(orders)
}

/// `sum_n g^{-n} A^(n)`.
pub fn assemble(orders: &[GaugeFieldGrid], g: f64) -> Result<GaugeFieldGrid> {
    let first = orders.first().ok_or_else(|| Error::config("orders", "nothing to assemble"))?;
    if !(g.is_finite() && g > 0.0) {
        return Err(Error::domain(format!("coupling g must be positive, got {g}")));
    }
    let mut values = first.values.clone();
    let mut w = 1.0;
    for o in &orders[1..] {
        if !o.grid.compatible(&first.grid) {
            return Err(Error::config("grid", "expansion orders live on different grids"));
        }
        w /= g;
        for (v, x) in values.iter_mut().zip(&o.values) {
            *v += w * x;
        }
    }
    GaugeFieldGrid::new(first.grid.clone(), values)
}

/// Outcome of a coupling sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GSweepResult {
    pub g_values: Vec<f64>,
    pub residual_l2: Vec<f64>,
    pub residual_linf: Vec<f64>,
    pub fitted_slope: f64,
    /// Jackknife standard error of the slope.
    pub slope_ci: f64,
    /// The residual hardly moves with `g`: it sits at the discretisation floor.
    pub floor_limited: bool,
    pub n_orders: usize,
    pub alpha: f64,
    pub scheme: NloScheme,
    pub integration_error: f64,
}

impl GSweepResult {
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "g,residual_l2,residual_linf")?;
        for i in 0..self.g_values.len() {
            writeln!(
                out,
                "{},{},{}",
                fmt_f64(self.g_values[i]),
                fmt_f64(self.residual_l2[i]),
                fmt_f64(self.residual_linf[i])
            )?;
        }
        Ok(())
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "fitted_slope": self.fitted_slope,
            "slope_ci": self.slope_ci,
            "floor_limited": self.floor_limited,
            "n_orders": self.n_orders,
            "alpha": self.alpha,
            "scheme": self.scheme,
            "g_values": self.g_values,
            "residual_l2": self.residual_l2,
            "integration_error": self.integration_error,
        })
    }
}

/// Least-squares slope of `y` against `x`.
fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Log-log slope and its leave-one-out jackknife standard error.
pub fn loglog_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() || x.len() < 3 {
        return Err(Error::config("g", "a slope fit needs at least 3 points"));
    }
    if x.iter().chain(y).any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::domain("log-log fit needs positive finite data"));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let slope = ls_slope(&lx, &ly);
    let n = lx.len();
    let loo: Vec<f64> = (0..n)
        .map(|k| {
            let (xs, ys): (Vec<f64>, Vec<f64>) =
                (0..n).filter(|&i| i != k).map(|i| (lx[i], ly[i])).unzip();
            ls_slope(&xs, &ys)
        })
        .collect();
    let mean = loo.iter().sum::<f64>() / n as f64;
    let var = loo.iter().map(|s| (s - mean).powi(2)).sum::<f64>() * (n - 1) as f64 / n as f64;
    Ok((slope, var.sqrt()))
}

/// Builds the expansion to `n_orders` once (the orders do not depend on
/// `g`), assembles it at every coupling and fits the rescaled-frame residual
/// against `g` on log-log axes.
pub fn g_sweep(config: &ExpansionConfig, g_list: &[f64]) -> Result<GSweepResult> {
    if g_list.len() < 3 {
        return Err(Error::config("g", format!("need at least 3 couplings, got {}", g_list.len())));
    }
    if g_list.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
        return Err(Error::config("g", "couplings must be positive"));
    }
    let lo = g_list.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = g_list.iter().cloned().fold(0.0, f64::max);
    if hi < 8.0 * lo {
        return Err(Error::config("g", format!("couplings must span a factor of 8, got {}", hi / lo)));
    }
    config.validate()?;
    let mut orders = vec![leading_order(config)?];
    let mut integration_error = 0.0;
    if config.n_orders == 2 {
        let (a1, err) = nlo_correction_with_error(config)?;
        orders.push(a1);
        integration_error = err;
    }
    let mut l2 = Vec::with_capacity(g_list.len());
    let mut linf = Vec::with_capacity(g_list.len());
    for &g in g_list {
        let params = GaugeParams::new(g, config.params.alpha)?;
        let field = assemble(&orders, g)?;
        let r = ym_eom_residual(&field, &params, Frame::Rescaled, config.stencil)?;
        l2.push(r.l2);
        linf.push(r.linf);
    }
    let rmax = l2.iter().cloned().fold(0.0, f64::max);
    let rmin = l2.iter().cloned().fold(f64::INFINITY, f64::min);
    let floor_limited = rmin <= 0.0 || rmax / rmin < 1.5;
    let (fitted_slope, slope_ci) = if rmin > 0.0 {
        loglog_fit(g_list, &l2)?
    } else {
        (0.0, 0.0)
    };
    Ok(GSweepResult {
        g_values: g_list.to_vec(),
        residual_l2: l2,
        residual_linf: linf,
        fitted_slope,
        slope_ci,
        floor_limited,
        n_orders: config.n_orders,
        alpha: config.params.alpha,
        scheme: config.scheme,
        integration_error,
    })
}

/// Monodromy matrix of `y'' + 6 phi_0^2 y = 0` over one period `2K(i)/mu` of
/// `phi_0^2`, with `n_steps` RK4 steps. Columns are the solutions started
/// from `(1, 0)` and `(0, 1)`.
pub fn hill_monodromy(mu: f64, n_steps: usize) -> Result<[[f64; 2]; 2]> {
    if !(mu.is_finite() && mu != 0.0) {
        return Err(Error::domain("monodromy needs a non-zero amplitude"));
    }
    let period = oscillator_period(mu) / 2.0;
    let rhs = |theta: f64, y: &[f64], dydt: &mut [f64]| {
        let sn = jacobi_sn_cn_dn(mu * theta, EllipticModulus::IMAGINARY_UNIT).expect("finite").sn;
        let phi = mu * sn;
        dydt[0] = y[1];
        dydt[1] = -6.0 * phi * phi * y[0];
    };
    let sys = (2, rhs);
    let col = |y0: [f64; 2]| {
        let out = integrate_sampled(&sys, 0.0, &y0, period, 2, n_steps.max(1));
        [out[2], out[3]]
    };
    let (c0, c1) = (col([1.0, 0.0]), col([0.0, 1.0]));
    Ok([[c0[0], c1[0]], [c0[1], c1[1]]])
}
