//! Classical solutions of the massless quartic scalar field and of SU(2)
//! Yang-Mills theory, and the numerical machinery that checks the mapping
//! between them.
//!
//! Under the embedding `A^1_1 = A^2_2 = A^3_3 = phi` (all other components
//! zero) with `lambda = 2 g^2`, the time-only Yang-Mills equations reduce to
//! `phi'' + lambda phi^3 = 0`, solved by a Jacobi snoidal wave at imaginary
//! modulus. With spatial dependence the mapping holds order by order in `1/g`.
//!
//! - [`elliptic`]: `K(m)` and `sn`, `cn`, `dn`, including `m < 0`.
//! - [`scalar`]: exact snoidal waves, PDE residuals, the `1/lambda` hierarchy.
//! - [`su2`]: structure constants, the quartic potential, mass coefficients.
//! - [`ym`]: residuals of the gauge-fixed field equations.
//! - [`expansion`]: the `1/g` expansion and coupling sweeps.
//! - [`spectrum`]: the odd-harmonic Fourier series and its FFT check.
//! - [`verify`]: the end-to-end checks run by `ymscalar verify-all`.
//!
//! ```
//! use ymscalar::elliptic::{complete_elliptic_k, EllipticModulus};
//!
//! let k = complete_elliptic_k(EllipticModulus::IMAGINARY_UNIT);
//! assert!((k - 1.3110287771461).abs() < 1e-12);
//! ```

pub mod elliptic;
pub mod error;
pub mod expansion;
pub mod grid;
pub mod ode;
pub mod profile;
pub mod scalar;
pub mod spectrum;
pub mod su2;
pub mod verify;
pub mod ym;

pub use error::{Error, Result};
pub use grid::{Axis, Grid, ResidualReport, StencilOrder};
pub use profile::Profile;
pub use ym::{GaugeFieldGrid, GaugeParams};
