//! Residuals of the gauge-fixed SU(2) Yang-Mills field equations
//!
//! ```text
//! d^mu d_mu A^a_nu - (1 - 1/alpha) d_nu (d^mu A^a_mu)
//!   + g f^{abc} A^{b mu} (d_mu A^c_nu - d_nu A^c_mu)
//!   + g f^{abc} d^mu (A^b_mu A^c_nu)
//!   + g^2 f^{abc} f^{cde} A^{b mu} A^d_mu A^e_nu = 0
//! ```
//!
//! with metric `diag(+, -, -, -)`, evaluated by central differences on a
//! sampled [`GaugeFieldGrid`].
//!
//! Two independent evaluation routes exist. [`ym_eom_residual`] contracts the
//! covariant expression above directly, in either physical time `tau` or the
//! rescaled time `theta = g tau` (where the result is divided by `g^2`). The
//! split route organises the rescaled equation by explicit powers of `1/g`,
//!
//! ```text
//! E = T0(A) + T1(A) / g + T2(A) / g^2,
//! ```
//!
//! separately for `nu = 0` and `nu = k`; it underlies the leading-order and
//! next-to-leading-order residuals. [`split_residual`] re-sums it so the two
//! routes can be compared.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, ResidualReport, StencilOrder};
use crate::su2::{epsilon, quartic_eom_term, ColorVectorField, Metric, StructureConstants, Su2, COLORS, SPACETIME};

/// Number of field components per grid point.
pub const COMPONENTS: usize = COLORS * SPACETIME;

/// Coupling, gauge parameter and the scalar coupling they map onto.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaugeParams {
    pub g: f64,
    pub alpha: f64,
    /// `lambda = 2 g^2`.
    pub lambda_link: f64,
}

impl GaugeParams {
    pub fn new(g: f64, alpha: f64) -> Result<Self> {
        if !(g.is_finite() && g > 0.0) {
            return Err(Error::domain(format!("coupling g must be positive, got {g}")));
        }
        if !alpha.is_finite() || alpha == 0.0 {
            return Err(Error::domain(format!("gauge parameter alpha must be finite and non-zero, got {alpha}")));
        }
        Ok(GaugeParams {
            g,
            alpha,
            lambda_link: 2.0 * g * g,
        })
    }

    /// `1 - 1/alpha`; zero in the Lorenz gauge.
    #[inline]
    pub fn kappa(&self) -> f64 {
        1.0 - 1.0 / self.alpha
    }

    fn check(&self) -> Result<()> {
        GaugeParams::new(self.g, self.alpha).map(|_| ())
    }
}

/// Column label of component `(a, nu)` (`a` zero-based internally, printed one-based).
pub fn component_label(a: usize, nu: usize) -> String {
    format!("A{}_{}", a + 1, nu)
}

fn labels() -> Vec<String> {
    (0..COLORS)
        .flat_map(|a| (0..SPACETIME).map(move |nu| component_label(a, nu)))
        .collect()
}

/// Gauge field `A^a_nu` sampled on a grid whose axis 0 is time and whose
/// remaining 1..=3 axes are `x_1, x_2, x_3`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeFieldGrid {
    pub grid: Grid,
    /// `values[p * 12 + a * 4 + nu]`.
    pub values: Vec<f64>,
}

impl GaugeFieldGrid {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if !(2..=4).contains(&grid.ndim()) {
            return Err(Error::config("spatial_dims", "gauge grids carry 1..=3 spatial axes"));
        }
        if values.len() != grid.len() * COMPONENTS {
            return Err(Error::config(
                "values",
                format!("expected {} values, got {}", grid.len() * COMPONENTS, values.len()),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("values", "field contains non-finite values"));
        }
        Ok(GaugeFieldGrid { grid, values })
    }

    pub fn zeros(grid: Grid) -> Result<Self> {
        let n = grid.len() * COMPONENTS;
        GaugeFieldGrid::new(grid, vec![0.0; n])
    }

    /// `A = eta * phi` from a scalar sampled on the same grid.
    pub fn smilga(grid: Grid, phi: &[f64]) -> Result<Self> {
        if phi.len() != grid.len() {
            return Err(Error::config("values", "scalar and gauge grids differ"));
        }
        let mut values = vec![0.0; grid.len() * COMPONENTS];
        for (p, &v) in phi.iter().enumerate() {
            for a in 0..COLORS {
                values[p * COMPONENTS + a * SPACETIME + a + 1] = v;
            }
        }
        GaugeFieldGrid::new(grid, values)
    }

    #[inline]
    pub fn get(&self, p: usize, a: usize, nu: usize) -> f64 {
        self.values[p * COMPONENTS + a * SPACETIME + nu]
    }

    #[inline]
    pub fn set(&mut self, p: usize, a: usize, nu: usize, v: f64) {
        self.values[p * COMPONENTS + a * SPACETIME + nu] = v;
    }

    pub fn point(&self, p: usize) -> ColorVectorField {
        let mut out = ColorVectorField::zero();
        for a in 0..COLORS {
            for nu in 0..SPACETIME {
                out.values[a][nu] = self.get(p, a, nu);
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        crate::grid::write_field_csv(out, &self.grid, &labels(), &self.values)
    }

    pub fn read_csv<R: std::io::BufRead>(input: R) -> Result<Self> {
        let (grid, cols, values) = crate::grid::read_field_csv(input)?;
        if cols != labels() {
            return Err(Error::config("field", "gauge fields carry the 12 columns A1_0 .. A3_3"));
        }
        GaugeFieldGrid::new(grid, values)
    }
}

/// Time variable of axis 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Frame {
    /// Physical time `tau`.
    Physical,
    /// `theta = g tau`; residuals are divided by `g^2`.
    Rescaled,
}

/// Finite-difference access to one field on one grid.
struct Diff<'a> {
    grid: &'a Grid,
    stencil: StencilOrder,
}

impl Diff<'_> {
    /// Grid axis of spacetime direction `mu` (0 = time), if present.
    #[inline]
    fn axis(&self, mu: usize) -> Option<usize> {
        (mu < self.grid.ndim()).then_some(mu)
    }

    /// Plain grid derivative along spacetime direction `mu` (zero for absent axes).
    #[inline]
    fn d(&self, p: usize, mu: usize, f: impl Fn(usize) -> f64) -> f64 {
        match self.axis(mu) {
            Some(ax) => self.grid.d1(self.stencil, p, ax, f).expect("interior point"),
            None => 0.0,
        }
    }

    #[inline]
    fn dd(&self, p: usize, mu: usize, nu: usize, f: impl Fn(usize) -> f64) -> f64 {
        match (self.axis(mu), self.axis(nu)) {
            (Some(a), Some(b)) => self.grid.d11(self.stencil, p, a, b, f).expect("interior point"),
            _ => 0.0,
        }
    }
}

fn check_field(field: &GaugeFieldGrid, params: &GaugeParams) -> Result<()> {
    params.check()?;
    if !(2..=4).contains(&field.grid.ndim()) {
        return Err(Error::config("spatial_dims", "gauge grids carry 1..=3 spatial axes"));
    }
    Ok(())
}

fn interior_points(grid: &Grid, stencil: StencilOrder) -> Vec<usize> {
    (0..grid.len()).filter(|&p| grid.is_interior(p, stencil.half_width())).collect()
}

fn flags(params: &GaugeParams, frame: Frame, stencil: StencilOrder, equation: &str) -> serde_json::Value {
    serde_json::json!({
        "equation": equation,
        "g": params.g,
        "alpha": params.alpha,
        "frame": frame,
        "metric": Metric::Minkowski,
        "stencil": stencil,
    })
}

fn report(
    grid: &Grid,
    rows: Vec<[[f64; SPACETIME]; COLORS]>,
    flags: serde_json::Value,
) -> ResidualReport {
    let rows: Vec<Vec<f64>> = rows.into_iter().map(|r| r.iter().flatten().copied().collect()).collect();
    ResidualReport::from_rows(&labels(), &rows, grid.spacings(), flags)
}

/// Residual of the full field equations, contracted covariantly.
///
/// In the [`Frame::Rescaled`] frame, axis 0 is `theta = g tau` and the
/// residual is the physical one divided by `g^2`.
pub fn ym_eom_residual(
    field: &GaugeFieldGrid,
    params: &GaugeParams,
    frame: Frame,
    stencil: StencilOrder,
) -> Result<ResidualReport> {
    let rows = ym_eom_residual_points(field, params, frame, stencil)?
        .into_iter()
        .map(|(_, r)| r)
        .collect();
    Ok(report(&field.grid, rows, flags(params, frame, stencil, "full-covariant")))
}

/// Pointwise form of [`ym_eom_residual`]: `(grid index, r[a][nu])` for every
/// interior point, in grid order.
pub fn ym_eom_residual_points(
    field: &GaugeFieldGrid,
    params: &GaugeParams,
    frame: Frame,
    stencil: StencilOrder,
) -> Result<Vec<(usize, [[f64; SPACETIME]; COLORS])>> {
    check_field(field, params)?;
    Ok(interior_points(&field.grid, stencil)
        .into_par_iter()
        .map(|p| (p, covariant_point(field, params, frame, stencil, p)))
        .collect())
}

fn covariant_point(
    field: &GaugeFieldGrid,
    params: &GaugeParams,
    frame: Frame,
    stencil: StencilOrder,
    p: usize,
) -> [[f64; SPACETIME]; COLORS] {
    let m = Metric::Minkowski;
    let g = params.g;
    let kappa = params.kappa();
    let diff = Diff { grid: &field.grid, stencil };
    // d_0 = s * (grid derivative along axis 0)
    let s = match frame {
        Frame::Physical => 1.0,
        Frame::Rescaled => g,
    };
    let scale = |mu: usize| if mu == 0 { s } else { 1.0 };
    let a_at = |q: usize, a: usize, nu: usize| field.get(q, a, nu);
    let d = |mu: usize, a: usize, nu: usize| scale(mu) * diff.d(p, mu, |q| a_at(q, a, nu));
    let here = field.point(p);
    let f = Su2;

    let mut out = [[0.0; SPACETIME]; COLORS];
    for a in 0..COLORS {
        for nu in 0..SPACETIME {
            let mut e = 0.0;
            for mu in 0..SPACETIME {
                e += m.eta(mu) * scale(mu) * scale(mu) * diff.dd(p, mu, mu, |q| a_at(q, a, nu));
                e -= kappa * m.eta(mu) * scale(mu) * scale(nu) * diff.dd(p, nu, mu, |q| a_at(q, a, mu));
            }
            let mut cubic = 0.0;
            for b in 0..COLORS {
                for c in 0..COLORS {
                    let fabc = f.f(a, b, c);
                    if fabc == 0.0 {
                        continue;
                    }
                    for mu in 0..SPACETIME {
                        let w = fabc * m.eta(mu);
                        cubic += w * here.values[b][mu] * (d(mu, c, nu) - d(nu, c, mu));
                        cubic += w * scale(mu) * diff.d(p, mu, |q| a_at(q, b, mu) * a_at(q, c, nu));
                    }
                }
            }
            e += g * cubic;
            e += g * g * quartic_eom_term(&f, &here, &here, &here, m, a, nu);
            out[a][nu] = match frame {
                Frame::Physical => e,
                Frame::Rescaled => e / (g * g),
            };
        }
    }
    out
}

/// Contributions of one group of terms, by explicit power of `1/g`:
/// `orders[n][a][nu]` multiplies `g^{-n}`.
#[derive(Debug, Clone, Copy, Default)]
struct Orders {
    orders: [[[f64; SPACETIME]; COLORS]; 3],
}

impl std::ops::AddAssign for Orders {
    fn add_assign(&mut self, rhs: Self) {
        for n in 0..3 {
            for a in 0..COLORS {
                for nu in 0..SPACETIME {
                    self.orders[n][a][nu] += rhs.orders[n][a][nu];
                }
            }
        }
    }
}

/// Split (rescaled) terms, written out separately for `nu = 0` and `nu = k`.
struct Split<'a> {
    diff: Diff<'a>,
    kappa: f64,
}

impl Split<'_> {
    /// Kinetic and gauge-fixing terms of `x`.
    fn linear(&self, p: usize, x: &GaugeFieldGrid) -> Orders {
        let d = &self.diff;
        let k = self.kappa;
        let mut o = Orders::default();
        for a in 0..COLORS {
            // nu = 0
            let xa0 = |q: usize| x.get(q, a, 0);
            o.orders[0][a][0] += d.dd(p, 0, 0, xa0) - k * d.dd(p, 0, 0, xa0);
            let mut div_t = 0.0;
            for i in 1..SPACETIME {
                div_t += d.dd(p, 0, i, |q| x.get(q, a, i));
                o.orders[2][a][0] -= d.dd(p, i, i, xa0);
            }
            o.orders[1][a][0] += k * div_t;
            // nu = k
            for kk in 1..SPACETIME {
                let xak = |q: usize| x.get(q, a, kk);
                o.orders[0][a][kk] += d.dd(p, 0, 0, xak);
                o.orders[1][a][kk] -= k * d.dd(p, kk, 0, xa0);
                for i in 1..SPACETIME {
                    o.orders[2][a][kk] -= d.dd(p, i, i, xak);
                    o.orders[2][a][kk] += k * d.dd(p, kk, i, |q| x.get(q, a, i));
                }
            }
        }
        o
    }

    /// Both cubic terms, bilinear in `(x, y)`:
    /// `f X^{b mu} (d_mu Y^c_nu - d_nu Y^c_mu) + f d^mu (X^b_mu Y^c_nu)`.
    fn cubic(&self, p: usize, x: &GaugeFieldGrid, y: &GaugeFieldGrid) -> Orders {
        let d = &self.diff;
        let f = Su2;
        let mut o = Orders::default();
        for a in 0..COLORS {
            for b in 0..COLORS {
                for c in 0..COLORS {
                    let fabc = f.f(a, b, c);
                    if fabc == 0.0 {
                        continue;
                    }
                    // nu = 0
                    {
                        let mut o0 = 0.0;
                        let mut o1 = 0.0;
                        for i in 1..SPACETIME {
                            o0 += x.get(p, b, i) * d.d(p, 0, |q| y.get(q, c, i));
                            o1 -= x.get(p, b, i) * d.d(p, i, |q| y.get(q, c, 0));
                            o1 -= d.d(p, i, |q| x.get(q, b, i) * y.get(q, c, 0));
                        }
                        o0 += d.d(p, 0, |q| x.get(q, b, 0) * y.get(q, c, 0));
                        o.orders[0][a][0] += fabc * o0;
                        o.orders[1][a][0] += fabc * o1;
                    }
                    // nu = k
                    for k in 1..SPACETIME {
                        let mut o0 = x.get(p, b, 0) * d.d(p, 0, |q| y.get(q, c, k));
                        o0 += d.d(p, 0, |q| x.get(q, b, 0) * y.get(q, c, k));
                        let mut o1 = -x.get(p, b, 0) * d.d(p, k, |q| y.get(q, c, 0));
                        for i in 1..SPACETIME {
                            o1 -= x.get(p, b, i)
                                * (d.d(p, i, |q| y.get(q, c, k)) - d.d(p, k, |q| y.get(q, c, i)));
                            o1 -= d.d(p, i, |q| x.get(q, b, i) * y.get(q, c, k));
                        }
                        o.orders[0][a][k] += fabc * o0;
                        o.orders[1][a][k] += fabc * o1;
                    }
                }
            }
        }
        o
    }

    fn quartic(&self, p: usize, x: &GaugeFieldGrid, y: &GaugeFieldGrid, z: &GaugeFieldGrid) -> Orders {
        let (xp, yp, zp) = (x.point(p), y.point(p), z.point(p));
        let mut o = Orders::default();
        for a in 0..COLORS {
            for nu in 0..SPACETIME {
                o.orders[0][a][nu] = quartic_eom_term(&Su2, &xp, &yp, &zp, Metric::Minkowski, a, nu);
            }
        }
        o
    }

    fn all(&self, p: usize, x: &GaugeFieldGrid) -> Orders {
        let mut o = self.linear(p, x);
        o += self.cubic(p, x, x);
        o += self.quartic(p, x, x, x);
        o
    }
}

fn split_ctx<'a>(field: &'a GaugeFieldGrid, params: &GaugeParams, stencil: StencilOrder) -> Split<'a> {
    Split {
        diff: Diff {
            grid: &field.grid,
            stencil,
        },
        kappa: params.kappa(),
    }
}

/// The rescaled residual re-summed from the split `nu = 0` / `nu = k` terms,
/// `T0 + T1/g + T2/g^2`. Agrees with [`ym_eom_residual`] in the rescaled frame.
pub fn split_residual(field: &GaugeFieldGrid, params: &GaugeParams, stencil: StencilOrder) -> Result<ResidualReport> {
    check_field(field, params)?;
    let split = split_ctx(field, params, stencil);
    let g = params.g;
    let rows = interior_points(&field.grid, stencil)
        .into_par_iter()
        .map(|p| {
            let o = split.all(p, field);
            let mut r = [[0.0; SPACETIME]; COLORS];
            for a in 0..COLORS {
                for nu in 0..SPACETIME {
                    r[a][nu] = o.orders[0][a][nu] + o.orders[1][a][nu] / g + o.orders[2][a][nu] / (g * g);
                }
            }
            r
        })
        .collect();
    Ok(report(&field.grid, rows, flags(params, Frame::Rescaled, stencil, "full-split")))
}

/// Pointwise difference between the covariant and split routes (rescaled
/// frame), as a report over the interior.
pub fn route_discrepancy(field: &GaugeFieldGrid, params: &GaugeParams, stencil: StencilOrder) -> Result<ResidualReport> {
    check_field(field, params)?;
    let split = split_ctx(field, params, stencil);
    let g = params.g;
    let rows = interior_points(&field.grid, stencil)
        .into_par_iter()
        .map(|p| {
            let o = split.all(p, field);
            let cov = covariant_point(field, params, Frame::Rescaled, stencil, p);
            let mut r = [[0.0; SPACETIME]; COLORS];
            for a in 0..COLORS {
                for nu in 0..SPACETIME {
                    let s = o.orders[0][a][nu] + o.orders[1][a][nu] / g + o.orders[2][a][nu] / (g * g);
                    r[a][nu] = s - cov[a][nu];
                }
            }
            r
        })
        .collect();
    Ok(report(&field.grid, rows, flags(params, Frame::Rescaled, stencil, "covariant-minus-split")))
}

/// Residual of the leading-order equations (no `1/g` terms), written as
///
/// ```text
/// nu = 0:  (1/alpha) d_theta^2 A^a_0 + f A^b_i d_theta A^c_i + f d_theta (A^b_0 A^c_0) + f f A A A_0
/// nu = k:  d_theta^2 A^a_k + f A^b_0 d_theta A^c_k + f d_theta (A^b_0 A^c_k) + f f A A A_k
/// ```
///
/// (the `nu = 0` kinetic and gauge terms combined into `1/alpha`).
pub fn leading_order_residual(
    field: &GaugeFieldGrid,
    params: &GaugeParams,
    stencil: StencilOrder,
) -> Result<ResidualReport> {
    check_field(field, params)?;
    let split = split_ctx(field, params, stencil);
    let inv_alpha = 1.0 / params.alpha;
    let rows = interior_points(&field.grid, stencil)
        .into_par_iter()
        .map(|p| {
            let d = &split.diff;
            let mut cubic = split.cubic(p, field, field);
            cubic += split.quartic(p, field, field, field);
            let mut r = cubic.orders[0];
            for a in 0..COLORS {
                r[a][0] += inv_alpha * d.dd(p, 0, 0, |q| field.get(q, a, 0));
                for k in 1..SPACETIME {
                    r[a][k] += d.dd(p, 0, 0, |q| field.get(q, a, k));
                }
            }
            r
        })
        .collect();
    Ok(report(&field.grid, rows, flags(params, Frame::Rescaled, stencil, "leading-order")))
}

/// Next-to-leading-order residuals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NloReport {
    /// Coefficient of `1/g` in the rescaled equations for `A0 + A1/g`:
    /// the linearisation of `T0` at `A0` applied to `A1`, plus `T1(A0)`.
    pub full: ResidualReport,
    /// The reduced system for a Smilga background with `phi_0` read off the diagonal,
    ///
    /// ```text
    /// (1/alpha) d_theta^2 A^a_0 + 6 phi_0^2 A^a_0 + (1 - 1/alpha) d_theta d_a phi_0 = 0
    /// d_theta^2 A^a_k + 6 phi_0^2 A^a_k + eps_{abk} A^b_0 d_theta phi_0 = 0
    /// ```
    pub simplified: ResidualReport,
    /// `full - simplified`, pointwise.
    pub gap: ResidualReport,
}

/// Evaluates the next-to-leading-order equations on `(order0, order1)`.
///
/// The two systems are not algebraically identical on a spatially varying
/// background: the full one keeps the `T1(A0)` magnetic terms
/// `-3 eps_{abk} phi_0 d_b phi_0` and the true quartic mass matrix; the gap is
/// reported rather than asserted away.
pub fn nlo_residual(
    order0: &GaugeFieldGrid,
    order1: &GaugeFieldGrid,
    params: &GaugeParams,
    stencil: StencilOrder,
) -> Result<NloReport> {
    check_field(order0, params)?;
    check_field(order1, params)?;
    if !order0.grid.compatible(&order1.grid) {
        return Err(Error::config("grid", "order-0 and order-1 fields live on different grids"));
    }
    let split = split_ctx(order0, params, stencil);
    let kappa = params.kappa();
    let inv_alpha = 1.0 / params.alpha;
    let points = interior_points(&order0.grid, stencil);
    let rows: Vec<_> = points
        .into_par_iter()
        .map(|p| {
            let d = &split.diff;
            let mut lin = split.linear(p, order1);
            lin += split.cubic(p, order0, order1);
            lin += split.cubic(p, order1, order0);
            lin += split.quartic(p, order1, order0, order0);
            lin += split.quartic(p, order0, order1, order0);
            lin += split.quartic(p, order0, order0, order1);
            let mut src = split.linear(p, order0);
            src += split.cubic(p, order0, order0);
            let mut full = [[0.0; SPACETIME]; COLORS];
            for a in 0..COLORS {
                for nu in 0..SPACETIME {
                    full[a][nu] = lin.orders[0][a][nu] + src.orders[1][a][nu];
                }
            }

            let phi0 = |q: usize| (0..COLORS).map(|c| order0.get(q, c, c + 1)).sum::<f64>() / COLORS as f64;
            let phi = phi0(p);
            let dphi = d.d(p, 0, phi0);
            let mut simp = [[0.0; SPACETIME]; COLORS];
            for a in 0..COLORS {
                simp[a][0] = inv_alpha * d.dd(p, 0, 0, |q| order1.get(q, a, 0))
                    + 6.0 * phi * phi * order1.get(p, a, 0)
                    + kappa * d.dd(p, 0, a + 1, phi0);
                for k in 1..SPACETIME {
                    let mut v = d.dd(p, 0, 0, |q| order1.get(q, a, k)) + 6.0 * phi * phi * order1.get(p, a, k);
                    for b in 0..COLORS {
                        v += epsilon(a, b, k - 1) * order1.get(p, b, 0) * dphi;
                    }
                    simp[a][k] = v;
                }
            }
            let mut gap = [[0.0; SPACETIME]; COLORS];
            for a in 0..COLORS {
                for nu in 0..SPACETIME {
                    gap[a][nu] = full[a][nu] - simp[a][nu];
                }
            }
            (full, simp, gap)
        })
        .collect();
    let grid = &order0.grid;
    let (mut full, mut simp, mut gap) = (Vec::new(), Vec::new(), Vec::new());
    for (f, s, g) in rows {
        full.push(f);
        simp.push(s);
        gap.push(g);
    }
    Ok(NloReport {
        full: report(grid, full, flags(params, Frame::Rescaled, stencil, "nlo-full")),
        simplified: report(grid, simp, flags(params, Frame::Rescaled, stencil, "nlo-simplified")),
        gap: report(grid, gap, flags(params, Frame::Rescaled, stencil, "nlo-gap")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Axis;

    fn grid() -> Grid {
        Grid::new(vec![Axis::closed(1.0, 12), Axis::periodic(1.0, 10)]).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(GaugeParams::new(1.0, 0.0).is_err());
        assert!(GaugeParams::new(0.0, 1.0).is_err());
        let p = GaugeParams::new(3.0, 2.0).unwrap();
        assert_eq!(p.lambda_link, 18.0);
        assert_eq!(p.kappa(), 0.5);
    }

    #[test]
    fn zero_field_has_zero_residual() {
        let f = GaugeFieldGrid::zeros(grid()).unwrap();
        let p = GaugeParams::new(2.0, 0.5).unwrap();
        for frame in [Frame::Physical, Frame::Rescaled] {
            assert_eq!(ym_eom_residual(&f, &p, frame, StencilOrder::Second).unwrap().linf, 0.0);
        }
        assert_eq!(leading_order_residual(&f, &p, StencilOrder::Second).unwrap().linf, 0.0);
        let n = nlo_residual(&f, &f, &p, StencilOrder::Second).unwrap();
        assert_eq!(n.full.linf, 0.0);
        assert_eq!(n.simplified.linf, 0.0);
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let a = GaugeFieldGrid::zeros(grid()).unwrap();
        let b = GaugeFieldGrid::zeros(Grid::new(vec![Axis::closed(1.0, 13), Axis::periodic(1.0, 10)]).unwrap()).unwrap();
        let p = GaugeParams::new(2.0, 1.0).unwrap();
        assert!(matches!(nlo_residual(&a, &b, &p, StencilOrder::Second), Err(Error::Config { .. })));
    }

    #[test]
    fn csv_round_trip() {
        let g = grid();
        let values: Vec<f64> = (0..g.len() * COMPONENTS).map(|i| (i as f64).cos()).collect();
        let f = GaugeFieldGrid::new(g, values).unwrap();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        assert_eq!(GaugeFieldGrid::read_csv(buf.as_slice()).unwrap(), f);
    }
}
