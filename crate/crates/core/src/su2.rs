//! Colour algebra: structure constants, quartic contractions, the Smilga
//! embedding `A_1^1 = A_2^2 = A_3^3 = phi`, the ghost coupling and the
//! linearised quartic mass term.
//!
//! Contractions are written against [`StructureConstants`] so that other
//! groups only need a new constant table. Colour indices run over `0..3`
//! internally (colour `a` is stored at `a - 1`); spacetime index `nu = 0` is
//! time.

use serde::{Deserialize, Serialize};

pub const COLORS: usize = 3;
pub const SPACETIME: usize = 4;

/// Antisymmetric structure constants `f^{abc}` of a Lie algebra with `n` generators.
pub trait StructureConstants {
    fn n(&self) -> usize;
    fn f(&self, a: usize, b: usize, c: usize) -> f64;
}

/// `f^{abc} = epsilon_{abc}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Su2;

/// Levi-Civita symbol on `0..3`.
#[inline]
pub fn epsilon(a: usize, b: usize, c: usize) -> f64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

#[inline]
fn delta(a: usize, b: usize) -> f64 {
    (a == b) as u8 as f64
}

impl StructureConstants for Su2 {
    fn n(&self) -> usize {
        COLORS
    }

    #[inline]
    fn f(&self, a: usize, b: usize, c: usize) -> f64 {
        epsilon(a, b, c)
    }
}

/// Checks `sum_a f^{abc} f^{ars} = delta_br delta_cs - delta_bs delta_cr` for
/// every `(b, c, r, s)` by explicit summation, `trials` times over.
pub fn epsilon_contraction_identity_check(trials: usize) -> bool {
    let f = Su2;
    (0..trials.max(1)).all(|_| {
        (0..81).all(|t| {
            let (b, c, r, s) = (t / 27, (t / 9) % 3, (t / 3) % 3, t % 3);
            contraction_lhs(&f, b, c, r, s) == delta(b, r) * delta(c, s) - delta(b, s) * delta(c, r)
        })
    })
}

/// `sum_a f^{abc} f^{ars}`.
pub fn contraction_lhs<F: StructureConstants>(f: &F, b: usize, c: usize, r: usize, s: usize) -> f64 {
    (0..f.n()).map(|a| f.f(a, b, c) * f.f(a, r, s)).sum()
}

/// How spacetime indices are raised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Metric {
    /// All-plus contraction.
    #[default]
    Euclidean,
    /// `diag(+1, -1, -1, -1)`.
    Minkowski,
}

impl Metric {
    #[inline]
    pub fn eta(self, mu: usize) -> f64 {
        match self {
            Metric::Euclidean => 1.0,
            Metric::Minkowski => {
                if mu == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }
}

/// Gauge-field components `A_nu^a` at one spacetime point.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ColorVectorField {
    /// `values[a][nu]`.
    pub values: [[f64; SPACETIME]; COLORS],
}

impl ColorVectorField {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Smilga embedding `eta * phi`.
    pub fn smilga(phi: f64) -> Self {
        SmilgaPattern.embed(phi)
    }

    pub fn scaled(&self, t: f64) -> Self {
        let mut out = *self;
        out.values.iter_mut().flatten().for_each(|v| *v *= t);
        out
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().flatten().all(|v| v.is_finite())
    }
}

/// The constant pattern `eta_nu^a`, one on `(a, nu) = (1,1), (2,2), (3,3)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SmilgaPattern;

impl SmilgaPattern {
    #[inline]
    pub fn eta(a: usize, nu: usize) -> f64 {
        (nu == a + 1) as u8 as f64
    }

    pub fn embed(self, phi: f64) -> ColorVectorField {
        let mut out = ColorVectorField::zero();
        for a in 0..COLORS {
            out.values[a][a + 1] = phi;
        }
        out
    }
}

/// Brute-force quartic contraction
/// `f^{abc} f^{ars} A^b_mu A^c_nu A^{r mu} A^{s nu}`, which by the epsilon
/// identity equals `(A_mu^a A^{a mu})^2 - (A_mu^a A^{a nu})(A^{b mu} A^b_nu)`.
pub fn quartic_contraction<F: StructureConstants>(f: &F, a_field: &ColorVectorField, metric: Metric) -> f64 {
    let n = f.n();
    let a = &a_field.values;
    let mut total = 0.0;
    for mu in 0..SPACETIME {
        for nu in 0..SPACETIME {
            let w = metric.eta(mu) * metric.eta(nu);
            for e in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        let f1 = f.f(e, b, c);
                        if f1 == 0.0 {
                            continue;
                        }
                        for r in 0..n {
                            for s in 0..n {
                                let f2 = f.f(e, r, s);
                                if f2 != 0.0 {
                                    total += w * f1 * f2 * a[b][mu] * a[c][nu] * a[r][mu] * a[s][nu];
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    total
}

/// The quartic potential with its sign convention recorded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuarticPotential {
    pub value: f64,
    pub metric: Metric,
    /// The contraction before the sign flip.
    pub contraction: f64,
}

/// Quartic potential `V(A)` oriented so that the Smilga embedding gives
/// `V(eta phi) = -6 phi^4 = -V(phi)`.
///
/// The bare contraction evaluates to `+6 phi^4` on the Smilga point in both
/// metrics (the three equal squared components make
/// `(3 phi^2)^2 - 3 phi^4`); the potential is its negative, the orientation
/// under which the scalar potential `6 phi^4` and the gauge one cancel. The
/// bare value is kept in [`QuarticPotential::contraction`].
pub fn quartic_potential(a_field: &ColorVectorField, metric: Metric) -> QuarticPotential {
    let contraction = quartic_contraction(&Su2, a_field, metric);
    QuarticPotential {
        value: -contraction,
        metric,
        contraction,
    }
}

/// Ghost fields at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GhostPoint {
    pub cbar: [f64; COLORS],
    pub c: [f64; COLORS],
    /// `grad_cbar[a][mu] = d_mu cbar^a`.
    pub grad_cbar: [[f64; SPACETIME]; COLORS],
}

impl GhostPoint {
    /// Ghost with every colour component equal.
    pub fn uniform(cbar: f64, c: f64, grad: [f64; SPACETIME]) -> Self {
        GhostPoint {
            cbar: [cbar; COLORS],
            c: [c; COLORS],
            grad_cbar: [grad; COLORS],
        }
    }
}

/// `g f^{abc} d_mu cbar^a A^{b mu} c^c`, summed over all indices.
///
/// Summed over antisymmetric pairs `a < c`, so equal ghost components cancel
/// exactly rather than to rounding.
pub fn ghost_coupling_term(g: f64, a_field: &ColorVectorField, ghost: &GhostPoint, metric: Metric) -> f64 {
    let f = Su2;
    let mut total = 0.0;
    for a in 0..COLORS {
        for c in a + 1..COLORS {
            for b in 0..COLORS {
                let fabc = f.f(a, b, c);
                if fabc == 0.0 {
                    continue;
                }
                for mu in 0..SPACETIME {
                    let pair = ghost.grad_cbar[a][mu] * ghost.c[c] - ghost.grad_cbar[c][mu] * ghost.c[a];
                    total += fabc * metric.eta(mu) * a_field.values[b][mu] * pair;
                }
            }
        }
    }
    g * total
}

/// Quartic term of the field equation, `f^{abc} f^{cde} A^{b mu} A^d_mu A^e_nu`,
/// for the component `(a, nu)`; trilinear in `(x, y, z)`.
pub fn quartic_eom_term<F: StructureConstants>(
    f: &F,
    x: &ColorVectorField,
    y: &ColorVectorField,
    z: &ColorVectorField,
    metric: Metric,
    a: usize,
    nu: usize,
) -> f64 {
    let n = f.n();
    let mut total = 0.0;
    for b in 0..n {
        for c in 0..n {
            let fabc = f.f(a, b, c);
            if fabc == 0.0 {
                continue;
            }
            for d in 0..n {
                for e in 0..n {
                    let fcde = f.f(c, d, e);
                    if fcde == 0.0 {
                        continue;
                    }
                    let xy: f64 = (0..SPACETIME)
                        .map(|mu| metric.eta(mu) * x.values[b][mu] * y.values[d][mu])
                        .sum();
                    total += fabc * fcde * xy * z.values[e][nu];
                }
            }
        }
    }
    total
}

/// Perturbation shapes for the linearised quartic term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PerturbationSlot {
    /// A single time component `A_0^a` (colour `0..3`).
    Time { color: usize },
    /// `delta A_k^a = delta_{ak} psi`, the Smilga direction itself.
    Breathing,
    /// A single component `A_nu^a`.
    Component { color: usize, nu: usize },
}

/// Result of [`linearized_mass_coefficient`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MassCoefficient {
    /// Coefficient of the perturbation amplitude divided by `phi_0^2`.
    pub value: f64,
    /// Whether the slot is one of the shapes that appear with a `6 phi_0^2`
    /// mass in the next-to-leading-order equations (`Time` and `Breathing`).
    pub supported: bool,
}

/// Brute-force linearisation of the quartic field-equation term around the
/// Smilga background `eta phi0`: the component of
/// `d/d eps Q(B + eps P)` along the perturbation `P`, divided by `phi0^2`
/// (zero for a vanishing background).
pub fn linearized_mass_coefficient(phi0: f64, slot: PerturbationSlot, metric: Metric) -> MassCoefficient {
    let background = ColorVectorField::smilga(phi0);
    let mut pert = ColorVectorField::zero();
    let supported = match slot {
        PerturbationSlot::Time { color } => {
            pert.values[color][0] = 1.0;
            true
        }
        PerturbationSlot::Breathing => {
            pert = ColorVectorField::smilga(1.0);
            true
        }
        PerturbationSlot::Component { color, nu } => {
            pert.values[color][nu] = 1.0;
            false
        }
    };
    if phi0 == 0.0 {
        return MassCoefficient { value: 0.0, supported };
    }
    let f = Su2;
    // exact derivative of the trilinear term: sum over the three slots
    let mut proj = 0.0;
    let mut norm = 0.0;
    for a in 0..COLORS {
        for nu in 0..SPACETIME {
            let lin = quartic_eom_term(&f, &pert, &background, &background, metric, a, nu)
                + quartic_eom_term(&f, &background, &pert, &background, metric, a, nu)
                + quartic_eom_term(&f, &background, &background, &pert, metric, a, nu);
            proj += lin * pert.values[a][nu];
            norm += pert.values[a][nu] * pert.values[a][nu];
        }
    }
    MassCoefficient {
        value: proj / norm / (phi0 * phi0),
        supported,
    }
}
