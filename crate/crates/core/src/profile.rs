//! Spatial profiles for the parameters of the leading-order solution.
//!
//! Grammar (terms may be joined with `+`):
//!
//! ```text
//! const:<v>
//! bump:<center>,<width>,<height>     height * (1 - r^2)^3 for r = |x - center| / width < 1, else 0
//! cosine:<mean>,<amp>,<wavelength>   mean + amp * cos(2 pi x_1 / wavelength)
//! ```
//!
//! The bump is compactly supported with two continuous derivatives; `r`
//! measures distance from the point `(center, center, ...)` in all spatial
//! dimensions. The cosine varies along the first spatial axis only.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Axis, Grid};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Profile {
    Const(f64),
    Bump { center: f64, width: f64, height: f64 },
    Cosine { mean: f64, amp: f64, wavelength: f64 },
    Sum(Vec<Profile>),
}

impl Profile {
    /// Parses a profile spec; `key` names the configuration field in errors.
    pub fn parse(spec: &str, key: &str) -> Result<Self> {
        let terms: Vec<&str> = spec.split('+').map(str::trim).collect();
        if terms.len() > 1 {
            return terms
                .iter()
                .map(|t| Profile::parse_term(t, key))
                .collect::<Result<Vec<_>>>()
                .map(Profile::Sum);
        }
        Profile::parse_term(spec.trim(), key)
    }

    fn parse_term(term: &str, key: &str) -> Result<Self> {
        let bad = |msg: &str| Error::config(key, format!("{msg} in profile `{term}`"));
        let (kind, args) = term.split_once(':').ok_or_else(|| bad("missing `:`"))?;
        let nums = args
            .split(',')
            .map(|s| s.trim().parse::<f64>().ok().filter(|v| v.is_finite()))
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| bad("non-numeric argument"))?;
        let want = |n: usize| {
            if nums.len() == n {
                Ok(())
            } else {
                Err(bad(&format!("expected {n} argument(s), got {}", nums.len())))
            }
        };
        match kind.trim() {
            "const" => {
                want(1)?;
                Ok(Profile::Const(nums[0]))
            }
            "bump" => {
                want(3)?;
                if nums[1] <= 0.0 {
                    return Err(bad("bump width must be positive"));
                }
                Ok(Profile::Bump {
                    center: nums[0],
                    width: nums[1],
                    height: nums[2],
                })
            }
            "cosine" => {
                want(3)?;
                if nums[2] <= 0.0 {
                    return Err(bad("wavelength must be positive"));
                }
                Ok(Profile::Cosine {
                    mean: nums[0],
                    amp: nums[1],
                    wavelength: nums[2],
                })
            }
            other => Err(bad(&format!("unknown profile kind `{other}`"))),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Profile::Const(v) => *v,
            Profile::Bump { center, width, height } => {
                let r2: f64 = x.iter().map(|xi| ((xi - center) / width).powi(2)).sum();
                if r2 < 1.0 {
                    height * (1.0 - r2).powi(3)
                } else {
                    0.0
                }
            }
            Profile::Cosine { mean, amp, wavelength } => {
                mean + amp * (2.0 * PI * x.first().copied().unwrap_or(0.0) / wavelength).cos()
            }
            Profile::Sum(terms) => terms.iter().map(|t| t.eval(x)).sum(),
        }
    }

    /// Samples the profile row-major over the given spatial axes.
    pub fn sample(&self, spatial_axes: &[Axis]) -> Result<Vec<f64>> {
        let grid = Grid::new(spatial_axes.to_vec())?;
        Ok((0..grid.len()).map(|i| self.eval(&grid.coords(i))).collect())
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Profile::Const(_) => true,
            Profile::Bump { height, .. } => *height == 0.0,
            Profile::Cosine { amp, .. } => *amp == 0.0,
            Profile::Sum(t) => t.iter().all(Profile::is_constant),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Const(v) => write!(f, "const:{v}"),
            Profile::Bump { center, width, height } => write!(f, "bump:{center},{width},{height}"),
            Profile::Cosine { mean, amp, wavelength } => write!(f, "cosine:{mean},{amp},{wavelength}"),
            Profile::Sum(t) => {
                for (i, p) in t.iter().enumerate() {
                    if i > 0 {
                        f.write_str("+")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::str::FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Profile::parse(s, "profile")
    }
}
