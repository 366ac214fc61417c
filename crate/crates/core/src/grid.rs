//! Uniform tensor-product grids, finite-difference stencils and the shared
//! CSV field format.
//!
//! Axis 0 is always the time axis (`tau` or the rescaled `theta`); the
//! remaining axes are spatial. Values are stored row-major with the last axis
//! varying fastest.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum number of samples along any axis.
pub const MIN_RESOLUTION: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub len: usize,
    pub spacing: f64,
    /// Periodic axes wrap around; the point `len` coincides with point 0.
    pub periodic: bool,
}

impl Axis {
    /// `len` samples covering `[0, extent]` inclusive.
    pub fn closed(extent: f64, len: usize) -> Self {
        Axis {
            len,
            spacing: extent / (len.max(2) - 1) as f64,
            periodic: false,
        }
    }

    /// `len` samples covering `[0, extent)` with wrap-around.
    pub fn periodic(extent: f64, len: usize) -> Self {
        Axis {
            len,
            spacing: extent / len as f64,
            periodic: true,
        }
    }

    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        i as f64 * self.spacing
    }

    pub fn extent(&self) -> f64 {
        if self.periodic {
            self.len as f64 * self.spacing
        } else {
            (self.len - 1) as f64 * self.spacing
        }
    }
}

/// Finite-difference accuracy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum StencilOrder {
    #[default]
    Second,
    Fourth,
}

impl StencilOrder {
    pub fn half_width(self) -> usize {
        match self {
            StencilOrder::Second => 1,
            StencilOrder::Fourth => 2,
        }
    }

    pub fn order(self) -> u32 {
        match self {
            StencilOrder::Second => 2,
            StencilOrder::Fourth => 4,
        }
    }

    /// Positive offsets and weights of the antisymmetric first-derivative
    /// stencil: `f' ~ sum_o w_o (f(o) - f(-o)) / h`.
    pub(crate) fn first(self) -> &'static [(isize, f64)] {
        match self {
            StencilOrder::Second => &[(1, 0.5)],
            StencilOrder::Fourth => &[(1, 8.0 / 12.0), (2, -1.0 / 12.0)],
        }
    }

    /// Positive offsets and weights of the symmetric second-derivative
    /// stencil: `f'' ~ sum_o w_o ((f(o) - f(0)) + (f(-o) - f(0))) / h^2`.
    fn second(self) -> &'static [(isize, f64)] {
        match self {
            StencilOrder::Second => &[(1, 1.0)],
            StencilOrder::Fourth => &[(1, 16.0 / 12.0), (2, -1.0 / 12.0)],
        }
    }

    /// First derivative from a sample accessor `f(offset)`. Differences are
    /// formed before weighting, so a constant field gives exactly zero.
    #[inline]
    pub fn d1(self, h: f64, f: impl Fn(isize) -> f64) -> f64 {
        self.first().iter().map(|&(o, w)| w * (f(o) - f(-o))).sum::<f64>() / h
    }

    /// Second derivative from a sample accessor `f(offset)`.
    #[inline]
    pub fn d2(self, h: f64, f: impl Fn(isize) -> f64) -> f64 {
        let f0 = f(0);
        self.second()
            .iter()
            .map(|&(o, w)| w * ((f(o) - f0) + (f(-o) - f0)))
            .sum::<f64>()
            / (h * h)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    axes: Vec<Axis>,
    strides: Vec<usize>,
}

impl Grid {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::config("grid", "at least one axis is required"));
        }
        for (i, ax) in axes.iter().enumerate() {
            if ax.len < MIN_RESOLUTION {
                return Err(Error::config(
                    "resolution",
                    format!("axis {i} has {} points, need at least {MIN_RESOLUTION}", ax.len),
                ));
            }
            if !(ax.spacing.is_finite() && ax.spacing > 0.0) {
                return Err(Error::config(
                    "extent",
                    format!("axis {i} has non-positive spacing {}", ax.spacing),
                ));
            }
        }
        let mut strides = vec![1; axes.len()];
        for i in (0..axes.len() - 1).rev() {
            strides[i] = strides[i + 1] * axes[i + 1].len;
        }
        Ok(Grid { axes, strides })
    }

    #[inline]
    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    #[inline]
    pub fn axis(&self, i: usize) -> &Axis {
        &self.axes[i]
    }

    #[inline]
    pub fn ndim(&self) -> usize {
        self.axes.len()
    }

    pub fn spatial_dims(&self) -> usize {
        self.axes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.strides[0] * self.axes[0].len
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacings(&self) -> Vec<f64> {
        self.axes.iter().map(|a| a.spacing).collect()
    }

    /// Number of points on one time slice.
    pub fn spatial_len(&self) -> usize {
        self.strides[0]
    }

    #[inline]
    pub fn index_along(&self, idx: usize, axis: usize) -> usize {
        (idx / self.strides[axis]) % self.axes[axis].len
    }

    pub fn coords(&self, idx: usize) -> Vec<f64> {
        (0..self.ndim())
            .map(|ax| self.axes[ax].coord(self.index_along(idx, ax)))
            .collect()
    }

    /// Flat index of the point displaced by `offset` samples along `axis`,
    /// or `None` when that falls off a non-periodic edge.
    #[inline]
    pub fn shift(&self, idx: usize, axis: usize, offset: isize) -> Option<usize> {
        let ax = &self.axes[axis];
        let i = self.index_along(idx, axis) as isize;
        let n = ax.len as isize;
        let j = i + offset;
        let j = if ax.periodic {
            j.rem_euclid(n)
        } else if (0..n).contains(&j) {
            j
        } else {
            return None;
        };
        Some((idx as isize + (j - i) * self.strides[axis] as isize) as usize)
    }

    /// True when every stencil of half-width `halo` centred at `idx` stays on
    /// the grid.
    pub fn is_interior(&self, idx: usize, halo: usize) -> bool {
        self.axes.iter().enumerate().all(|(ax, a)| {
            if a.periodic {
                return true;
            }
            let i = self.index_along(idx, ax);
            i >= halo && i + halo < a.len
        })
    }

    /// Same axes, same shape.
    pub fn compatible(&self, other: &Grid) -> bool {
        self.axes.len() == other.axes.len()
            && self.axes.iter().zip(&other.axes).all(|(a, b)| {
                a.len == b.len && a.periodic == b.periodic && (a.spacing - b.spacing).abs() <= 1e-12 * a.spacing
            })
    }

    /// First derivative along `axis` at `idx` of a field given by `f(flat index)`.
    /// `None` when the stencil leaves the grid.
    #[inline]
    pub fn d1(&self, stencil: StencilOrder, idx: usize, axis: usize, f: impl Fn(usize) -> f64) -> Option<f64> {
        let h = self.axes[axis].spacing;
        let hw = stencil.half_width() as isize;
        self.shift(idx, axis, -hw)?;
        self.shift(idx, axis, hw)?;
        Some(stencil.d1(h, |o| f(self.shift(idx, axis, o).unwrap())))
    }

    /// Second derivative along `axis` at `idx`.
    #[inline]
    pub fn d2(&self, stencil: StencilOrder, idx: usize, axis: usize, f: impl Fn(usize) -> f64) -> Option<f64> {
        let h = self.axes[axis].spacing;
        let hw = stencil.half_width() as isize;
        self.shift(idx, axis, -hw)?;
        self.shift(idx, axis, hw)?;
        Some(stencil.d2(h, |o| f(self.shift(idx, axis, o).unwrap())))
    }

    /// Mixed derivative `d^2 / d(axis_a) d(axis_b)` by nesting first-derivative stencils.
    pub fn d11(
        &self,
        stencil: StencilOrder,
        idx: usize,
        axis_a: usize,
        axis_b: usize,
        f: impl Fn(usize) -> f64,
    ) -> Option<f64> {
        if axis_a == axis_b {
            return self.d2(stencil, idx, axis_a, f);
        }
        let h = self.axes[axis_a].spacing;
        let mut acc = 0.0;
        for &(o, w) in stencil.first() {
            let plus = self.shift(idx, axis_a, o)?;
            let minus = self.shift(idx, axis_a, -o)?;
            acc += w * (self.d1(stencil, plus, axis_b, &f)? - self.d1(stencil, minus, axis_b, &f)?);
        }
        Some(acc / h)
    }
}

/// Norms of one residual component over the interior points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentNorm {
    pub label: String,
    /// Root-mean-square over interior points.
    pub l2: f64,
    pub linf: f64,
}

/// Aggregate residual norms plus the metadata needed to interpret them.
///
/// `l2` is the root-mean-square over interior points of the Euclidean norm of
/// the residual vector (all components); `linf` is the largest absolute
/// component value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub l2: f64,
    pub linf: f64,
    pub per_component: Vec<ComponentNorm>,
    pub grid_spacing: Vec<f64>,
    pub interior_points: usize,
    pub flags: serde_json::Value,
}

impl ResidualReport {
    /// Builds a report from per-point residual vectors (one `Vec` entry per
    /// interior point, `labels.len()` values each). Summation order follows
    /// the input order.
    pub fn from_rows(
        labels: &[String],
        rows: &[Vec<f64>],
        grid_spacing: Vec<f64>,
        flags: serde_json::Value,
    ) -> Self {
        let nc = labels.len();
        let mut sq = vec![0.0; nc];
        let mut sup = vec![0.0f64; nc];
        for row in rows {
            for (c, &r) in row.iter().enumerate() {
                sq[c] += r * r;
                sup[c] = sup[c].max(r.abs());
            }
        }
        let n = rows.len().max(1) as f64;
        let per_component = labels
            .iter()
            .enumerate()
            .map(|(c, l)| ComponentNorm {
                label: l.clone(),
                l2: (sq[c] / n).sqrt(),
                linf: sup[c],
            })
            .collect();
        ResidualReport {
            l2: (sq.iter().sum::<f64>() / n).sqrt(),
            linf: sup.iter().copied().fold(0.0, f64::max),
            per_component,
            grid_spacing,
            interior_points: rows.len(),
            flags,
        }
    }

    pub fn component(&self, label: &str) -> Option<&ComponentNorm> {
        self.per_component.iter().find(|c| c.label == label)
    }
}

/// Formats a float with 17 significant digits, independent of locale.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes a multi-component field in the shared CSV layout:
///
/// ```text
/// sizes,<n0>,<n1>,...
/// spacings,<h0>,<h1>,...
/// periodic,<0|1>,...
/// <column labels>
/// <one row per grid point, row-major>
/// ```
pub fn write_field_csv<W: Write>(
    mut out: W,
    grid: &Grid,
    labels: &[String],
    values: &[f64],
) -> Result<()> {
    let nc = labels.len();
    debug_assert_eq!(values.len(), grid.len() * nc);
    let mut line = String::from("sizes");
    for a in grid.axes() {
        write!(line, ",{}", a.len).unwrap();
    }
    writeln!(out, "{line}")?;
    line = String::from("spacings");
    for a in grid.axes() {
        write!(line, ",{}", fmt_f64(a.spacing)).unwrap();
    }
    writeln!(out, "{line}")?;
    line = String::from("periodic");
    for a in grid.axes() {
        write!(line, ",{}", a.periodic as u8).unwrap();
    }
    writeln!(out, "{line}")?;
    writeln!(out, "{}", labels.join(","))?;
    for row in values.chunks(nc) {
        line.clear();
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&fmt_f64(*v));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Reads a field written by [`write_field_csv`].
pub fn read_field_csv<R: BufRead>(input: R) -> Result<(Grid, Vec<String>, Vec<f64>)> {
    let mut lines = input.lines();
    let mut header = |name: &str| -> Result<Vec<String>> {
        let line = lines
            .next()
            .ok_or_else(|| Error::config("field", format!("missing `{name}` header line")))??;
        let mut parts = line.split(',').map(|s| s.trim().to_string());
        match parts.next() {
            Some(tag) if tag == name => Ok(parts.collect()),
            _ => Err(Error::config("field", format!("expected `{name}` header, got `{line}`"))),
        }
    };
    let parse_err = |what: &str, s: &str| Error::config("field", format!("cannot parse {what} `{s}`"));
    let sizes = header("sizes")?
        .iter()
        .map(|s| s.parse::<usize>().map_err(|_| parse_err("size", s)))
        .collect::<Result<Vec<_>>>()?;
    let spacings = header("spacings")?
        .iter()
        .map(|s| s.parse::<f64>().map_err(|_| parse_err("spacing", s)))
        .collect::<Result<Vec<_>>>()?;
    let periodic = header("periodic")?
        .iter()
        .map(|s| match s.as_str() {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(parse_err("periodic flag", s)),
        })
        .collect::<Result<Vec<_>>>()?;
    if sizes.len() != spacings.len() || sizes.len() != periodic.len() {
        return Err(Error::config("field", "header rows disagree on the number of axes"));
    }
    let grid = Grid::new(
        sizes
            .iter()
            .zip(&spacings)
            .zip(&periodic)
            .map(|((&len, &spacing), &periodic)| Axis { len, spacing, periodic })
            .collect(),
    )?;
    let labels_line = lines
        .next()
        .ok_or_else(|| Error::config("field", "missing column label line"))??;
    let labels: Vec<String> = labels_line.split(',').map(|s| s.trim().to_string()).collect();
    let mut values = Vec::with_capacity(grid.len() * labels.len());
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        for s in line.split(',') {
            values.push(s.trim().parse::<f64>().map_err(|_| parse_err("value", s))?);
        }
    }
    if values.len() != grid.len() * labels.len() {
        return Err(Error::config(
            "field",
            format!("expected {} values, found {}", grid.len() * labels.len(), values.len()),
        ));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::config("field", "non-finite value"));
    }
    Ok((grid, labels, values))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid2() -> Grid {
        Grid::new(vec![Axis::closed(1.0, 11), Axis::periodic(2.0, 8)]).unwrap()
    }

    #[test]
    fn rejects_coarse_axes() {
        assert!(Grid::new(vec![Axis::closed(1.0, 4)]).is_err());
    }

    #[test]
    fn shift_wraps_only_periodic_axes() {
        let g = grid2();
        assert_eq!(g.shift(0, 0, -1), None);
        assert_eq!(g.shift(0, 1, -1), Some(7));
        assert_eq!(g.shift(7, 1, 1), Some(0));
        assert_eq!(g.shift(0, 0, 1), Some(8));
        assert!(!g.is_interior(0, 1));
        assert!(g.is_interior(8, 1));
    }

    #[test]
    fn stencils_are_exact_on_low_degree_polynomials() {
        let g = Grid::new(vec![Axis::closed(2.0, 21)]).unwrap();
        let x = |i: usize| g.coords(i)[0];
        let cubic = |i: usize| {
            let x = x(i);
            1.0 + 2.0 * x - x * x + 0.5 * x * x * x
        };
        let i = 10; // x = 1
        let d1 = g.d1(StencilOrder::Fourth, i, 0, cubic).unwrap();
        let d2 = g.d2(StencilOrder::Second, i, 0, cubic).unwrap();
        assert!((d1 - (2.0 - 2.0 + 1.5)).abs() < 1e-12);
        assert!((d2 - (-2.0 + 3.0)).abs() < 1e-12);
    }

    #[test]
    fn csv_round_trip_is_lossless() {
        let g = grid2();
        let values: Vec<f64> = (0..g.len()).map(|i| (i as f64 * 0.1).sin() / 3.0).collect();
        let mut buf = Vec::new();
        write_field_csv(&mut buf, &g, &["value".to_string()], &values).unwrap();
        let (g2, labels, v2) = read_field_csv(buf.as_slice()).unwrap();
        assert_eq!(g2, g);
        assert_eq!(labels, vec!["value"]);
        assert_eq!(v2, values);
    }

    #[test]
    fn malformed_csv_is_a_config_error() {
        let err = read_field_csv("sizes,8\nspacings,x\nperiodic,0\nvalue\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Config { .. }));
    }
}
