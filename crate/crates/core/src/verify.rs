//! End-to-end checks, one runner per acceptance criterion.
//!
//! Each runner measures, compares against a stated target and tolerance, and
//! reports every number it looked at. Nothing here is tuned to pass: a
//! failing check is reported as such.

use std::f64::consts::PI;

use serde::Serialize;

use crate::elliptic::{complete_elliptic_k, jacobi_sn_cn_dn, EllipticModulus};
use crate::error::Result;
use crate::expansion::{g_sweep, nlo_correction, ExpansionConfig, NloScheme, DEFAULT_G_LIST};
use crate::grid::{Axis, Grid, StencilOrder};
use crate::ode::integrate_sampled;
use crate::profile::Profile;
use crate::scalar::{scalar_residual, ScalarSolution, TimeVariable};
use crate::spectrum::{matched_step, measured_spectrum, partial_sum};
use crate::su2::{
    epsilon_contraction_identity_check, ghost_coupling_term, linearized_mass_coefficient, quartic_potential,
    ColorVectorField, GhostPoint, Metric, PerturbationSlot,
};
use crate::ym::{leading_order_residual, ym_eom_residual, Frame, GaugeFieldGrid, GaugeParams};

/// `K(-1)` from the quadrature oracle, frozen.
pub const K_IMAGINARY_UNIT_REFERENCE: f64 = 1.311_028_777_146_06;

/// One measured quantity and its verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub value: f64,
    /// Human-readable target, e.g. `-1 +- 0.1`.
    pub target: String,
    pub passed: bool,
}

impl Check {
    fn within(label: impl Into<String>, value: f64, expected: f64, tol: f64) -> Self {
        Check {
            label: label.into(),
            value,
            target: format!("{expected} +- {tol:e}"),
            passed: (value - expected).abs() <= tol,
        }
    }

    fn at_most(label: impl Into<String>, value: f64, bound: f64) -> Self {
        Check {
            label: label.into(),
            value,
            target: format!("<= {bound:e}"),
            passed: value <= bound,
        }
    }

    fn at_least(label: impl Into<String>, value: f64, bound: f64) -> Self {
        Check {
            label: label.into(),
            value,
            target: format!(">= {bound:e}"),
            passed: value >= bound,
        }
    }

    /// Recorded for context only; never fails.
    fn info(label: impl Into<String>, value: f64) -> Self {
        Check {
            label: label.into(),
            value,
            target: "informational".into(),
            passed: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl CriterionReport {
    fn new(id: u8, checks: Vec<Check>) -> Self {
        CriterionReport {
            id,
            title: title(id),
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }

    /// `criterion  7  PASS  O(1/g) mapping  [slope=-1.0052 (-1 +- 1e-1)]`; failing checks listed first.
    pub fn line(&self) -> String {
        let mut checks: Vec<&Check> = self.checks.iter().filter(|c| !c.passed).collect();
        if checks.is_empty() {
            checks = self.checks.iter().filter(|c| c.target != "informational").collect();
        }
        let detail: Vec<String> = checks
            .iter()
            .map(|c| format!("{}={:.6e} ({})", c.label, c.value, c.target))
            .collect();
        format!(
            "criterion {:>2}  {}  {}  [{}]",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            detail.join("; ")
        )
    }
}

pub const CRITERIA: [u8; 10] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10];

pub fn title(id: u8) -> &'static str {
    match id {
        1 => "elliptic core",
        2 => "quartic identity and ghost decoupling",
        3 => "epsilon contraction identity",
        4 => "exact scalar wave",
        5 => "time-only gauge solution",
        6 => "leading-order gauge equations",
        7 => "O(1/g) mapping",
        8 => "next-to-leading-order improvement",
        9 => "oscillator spectrum",
        10 => "energy conservation",
        _ => "unknown",
    }
}

pub fn run_criterion(id: u8) -> Result<CriterionReport> {
    let checks = match id {
        1 => elliptic_core()?,
        2 => quartic_identity(),
        3 => vec![Check::at_least(
            "identity_holds",
            epsilon_contraction_identity_check(81) as u8 as f64,
            1.0,
        )],
        4 => exact_scalar_wave()?,
        5 => time_only_gauge()?,
        6 => leading_order_gauge()?,
        7 => order_one_mapping()?,
        8 => nlo_improvement()?,
        9 => oscillator_spectrum()?,
        10 => energy_conservation()?,
        _ => return Err(crate::Error::config("criterion", format!("no criterion {id}"))),
    };
    Ok(CriterionReport::new(id, checks))
}

/// Runs every criterion; an error inside a runner becomes a failed report.
pub fn run_all() -> Vec<CriterionReport> {
    CRITERIA
        .iter()
        .map(|&id| {
            run_criterion(id).unwrap_or_else(|e| {
                CriterionReport::new(
                    id,
                    vec![Check {
                        label: format!("error: {e}"),
                        value: f64::NAN,
                        target: "no error".into(),
                        passed: false,
                    }],
                )
            })
        })
        .collect()
}

/// Deterministic, well-spread points in `[lo, hi)` (additive golden-ratio sequence).
fn spread(n: usize, lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    const G: f64 = 0.618_033_988_749_894_8;
    (0..n).map(move |i| lo + (hi - lo) * ((0.5 + i as f64 * G) % 1.0))
}

/// `K(m)` by the trapezoid rule on `[0, pi/2]`; the integrand is smooth and
/// even about both ends, so the rule converges geometrically.
fn k_by_quadrature(m: f64) -> f64 {
    let n = 256;
    let h = 0.5 * PI / n as f64;
    let f = |t: f64| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt();
    h * (0.5 * f(0.0) + (1..n).map(|i| f(i as f64 * h)).sum::<f64>() + 0.5 * f(0.5 * PI))
}

fn elliptic_core() -> Result<Vec<Check>> {
    let m_i = EllipticModulus::IMAGINARY_UNIT;
    let k = complete_elliptic_k(m_i);
    let mut checks = vec![
        Check::within("K(-1)-vs-quadrature", k, k_by_quadrature(-1.0), 1e-10),
        Check::within("K(-1)-vs-reference", k, K_IMAGINARY_UNIT_REFERENCE, 1e-10),
    ];
    for m in [-1.0, 0.5] {
        let modulus = EllipticModulus::new(m)?;
        let km = complete_elliptic_k(modulus);
        let (m_real, _) = modulus.real_equivalent();
        let (mut pyth, mut dn_id, mut period) = (0.0f64, 0.0f64, 0.0f64);
        for u in spread(10_000, -20.0, 20.0) {
            let t = jacobi_sn_cn_dn(u, modulus)?;
            pyth = pyth.max((t.sn * t.sn + t.cn * t.cn - 1.0).abs());
            dn_id = dn_id.max((t.dn * t.dn + m * t.sn * t.sn - 1.0).abs());
            period = period.max((jacobi_sn_cn_dn(u + 4.0 * km, modulus)?.sn - t.sn).abs());
        }
        checks.push(Check::at_most(format!("sn2+cn2-1@m={m}"), pyth, 1e-10));
        checks.push(Check::at_most(format!("dn2+m*sn2-1@m={m}"), dn_id, 1e-10));
        checks.push(Check::at_most(format!("periodicity@m={m}"), period, 1e-10));
        checks.push(Check::info(format!("real-parameter@m={m}"), m_real));
    }
    Ok(checks)
}

fn quartic_identity() -> Vec<Check> {
    let mut worst = 0.0f64;
    let mut ghost_max = 0.0f64;
    for (phi, c) in spread(1000, -3.0, 3.0).zip(spread(1000, -2.0, 2.0).skip(7)) {
        let v = quartic_potential(&ColorVectorField::smilga(phi), Metric::Minkowski).value;
        worst = worst.max((v + 6.0 * phi.powi(4)).abs() / phi.powi(4).max(1.0));
        let ghost = GhostPoint::uniform(c, 0.5 - c, [c, -1.3 * c, 0.7, 2.0 * c]);
        ghost_max = ghost_max.max(ghost_coupling_term(1.7, &ColorVectorField::smilga(phi), &ghost, Metric::Minkowski).abs());
    }
    vec![
        Check::at_most("max|V+6phi^4|", worst, 1e-12),
        Check::at_most("max|ghost coupling|", ghost_max, 0.0),
    ]
}

/// Observed order from residuals at `h` and `h/2`.
fn order(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}

fn exact_scalar_wave() -> Result<Vec<Check>> {
    let lambda = 2.0;
    let exact = ScalarSolution::make_exact(lambda, 1.0, 0.3, [1.0, 0.6, 0.0, 0.0, 0.0])?;
    let period = 4.0 * complete_elliptic_k(EllipticModulus::IMAGINARY_UNIT);
    let grid_for = |n: usize| {
        Grid::new(vec![
            Axis::closed(period / exact.wavevector[0], n),
            Axis::closed(period / exact.wavevector[1], n),
        ])
    };
    let res = |sol: &ScalarSolution, n: usize| -> Result<f64> {
        let field = sol.sample(&grid_for(n)?)?;
        Ok(scalar_residual(&field, lambda, TimeVariable::Tau, StencilOrder::Second)?.l2)
    };
    let r: Vec<f64> = [32, 64, 128].iter().map(|&n| res(&exact, n)).collect::<Result<_>>()?;
    let mut wrong = exact;
    let s = 1.1f64.sqrt();
    wrong.wavevector = exact.wavevector.map(|p| p * s);
    let floor = res(&wrong, 128)?;
    Ok(vec![
        Check::info("residual@n=32", r[0]),
        Check::info("residual@n=64", r[1]),
        Check::info("residual@n=128", r[2]),
        Check::within("order(64->128)", order(r[1], r[2]), 2.0, 0.1),
        Check::at_least("violated/converged", floor / r[2], 100.0),
    ])
}

fn time_only_gauge() -> Result<Vec<Check>> {
    let g: f64 = 1.5;
    let mu = 1.0;
    let lambda = 2.0 * g * g;
    let amp = mu * (2.0 / lambda).powf(0.25);
    let p0 = mu * (lambda / 2.0).powf(0.25);
    let period = 4.0 * complete_elliptic_k(EllipticModulus::IMAGINARY_UNIT) / p0;
    let mut checks = Vec::new();
    for alpha in [0.5, 1.0, 2.0] {
        let params = GaugeParams::new(g, alpha)?;
        let mut r = Vec::new();
        for n in [64, 128, 256] {
            let grid = Grid::new(vec![Axis::closed(period, n), Axis::periodic(1.0, 8)])?;
            let phi: Vec<f64> = (0..grid.len())
                .map(|p| amp * crate::elliptic::sn_imaginary_unit(p0 * grid.coords(p)[0] + 0.2))
                .collect();
            let field = GaugeFieldGrid::smilga(grid, &phi)?;
            r.push(ym_eom_residual(&field, &params, Frame::Physical, StencilOrder::Second)?.l2);
        }
        checks.push(Check::info(format!("residual@n=256,alpha={alpha}"), r[2]));
        checks.push(Check::within(format!("order(alpha={alpha})"), order(r[1], r[2]), 2.0, 0.1));
    }
    Ok(checks)
}

fn leading_order_gauge() -> Result<Vec<Check>> {
    let mu = 1.3;
    let period = 4.0 * complete_elliptic_k(EllipticModulus::IMAGINARY_UNIT) / mu;
    let mut r = Vec::new();
    for n in [64, 128, 256] {
        let cfg = ExpansionConfig {
            params: GaugeParams::new(5.0, 2.0)?,
            mu: Profile::Const(mu),
            phase: Profile::Const(0.4),
            spatial_points: 8,
            time_extent: period,
            time_points: n,
            stencil: StencilOrder::Second,
            ..ExpansionConfig::default()
        };
        let a0 = crate::expansion::leading_order(&cfg)?;
        r.push(leading_order_residual(&a0, &cfg.params, cfg.stencil)?.l2);
    }
    let time = linearized_mass_coefficient(1.0, PerturbationSlot::Time { color: 0 }, Metric::Minkowski).value;
    let breathing = linearized_mass_coefficient(1.0, PerturbationSlot::Breathing, Metric::Minkowski).value;
    Ok(vec![
        Check::info("residual@n=256", r[2]),
        Check::within("order(128->256)", order(r[1], r[2]), 2.0, 0.1),
        Check::within("mass(time slot)/phi0^2", time, 6.0, 0.0),
        Check::within("mass(breathing)/phi0^2", breathing, 6.0, 0.0),
    ])
}

fn sweep_config(n_orders: usize, alpha: f64, scheme: NloScheme) -> Result<ExpansionConfig> {
    Ok(ExpansionConfig {
        params: GaugeParams::new(DEFAULT_G_LIST[0], alpha)?,
        n_orders,
        scheme,
        ..ExpansionConfig::default()
    })
}

fn order_one_mapping() -> Result<Vec<Check>> {
    let r = g_sweep(&sweep_config(1, 1.0, NloScheme::Simplified)?, &DEFAULT_G_LIST)?;
    Ok(vec![
        Check::within("slope", r.fitted_slope, -1.0, 0.1),
        Check::info("slope_jackknife", r.slope_ci),
        Check::at_most("floor_limited", r.floor_limited as u8 as f64, 0.0),
    ])
}

fn nlo_improvement() -> Result<Vec<Check>> {
    let simplified = g_sweep(&sweep_config(2, 2.0, NloScheme::Simplified)?, &DEFAULT_G_LIST)?;
    let lorenz = nlo_correction(&sweep_config(2, 1.0, NloScheme::Simplified)?)?;
    let nonzero = lorenz.values.iter().filter(|&&v| v != 0.0).count();
    let linearized = g_sweep(&sweep_config(2, 2.0, NloScheme::Linearized)?, &DEFAULT_G_LIST)?;
    let lin_lorenz = nlo_correction(&sweep_config(2, 1.0, NloScheme::Linearized)?)?;
    Ok(vec![
        Check::within("slope(alpha=2)", simplified.fitted_slope, -2.0, 0.2),
        Check::at_most("nonzero entries of A1(alpha=1)", nonzero as f64, 0.0),
        Check::info("slope(alpha=2, exact linearisation)", linearized.fitted_slope),
        Check::info("max|A1|(alpha=1, exact linearisation)", lin_lorenz.max_abs()),
    ])
}

fn oscillator_spectrum() -> Result<Vec<Check>> {
    let p0 = 1.0;
    let n = 4096;
    let periods = 8;
    let step = matched_step(n, periods, p0);
    let series: Vec<f64> = (0..n).map(|j| crate::elliptic::sn_imaginary_unit(p0 * j as f64 * step)).collect();
    let spec = measured_spectrum(&series, step, p0, 1.0, 4)?;
    let mut checks = Vec::new();
    let mut worst_peak = 0.0f64;
    for l in &spec.lines {
        let peak = l.peak_omega.unwrap_or(f64::NAN);
        worst_peak = worst_peak.max((peak - l.omega).abs() / spec.bin_width);
    }
    checks.push(Check::at_most("peak offset (bins, n<=4)", worst_peak, 1.0));
    let mut worst_ratio = 0.0f64;
    for w in spec.lines.windows(2).take(3) {
        let ratio = (w[1].measured_amplitude / w[0].measured_amplitude).abs();
        worst_ratio = worst_ratio.max((ratio / (-PI).exp() - 1.0).abs());
    }
    checks.push(Check::at_most("amplitude ratio vs e^-pi (rel)", worst_ratio, 0.05));
    let k = complete_elliptic_k(EllipticModulus::IMAGINARY_UNIT);
    checks.push(Check::within("partial sum at u=K (n<=6)", partial_sum(k, 6), 1.0, 1e-4));
    let fundamental_err = spec.lines[0].abs_error();
    checks.push(Check::at_most("|measured-analytic| n=0", fundamental_err, 1e-6));
    checks.push(Check::at_most("even/fundamental power", spec.even_to_fundamental, 1e-10));
    Ok(checks)
}

fn energy_conservation() -> Result<Vec<Check>> {
    // phi'' + phi^3 = 0 from a turning point, RK4 at the hierarchy's default
    // step (period / 200), energy from the integrated state.
    let a = 1.0;
    let period = 4.0 * complete_elliptic_k(EllipticModulus::IMAGINARY_UNIT) * std::f64::consts::SQRT_2 / a;
    let steps_per_period = 200;
    let h = period / steps_per_period as f64;
    let sys = (2, |_t: f64, y: &[f64], d: &mut [f64]| {
        d[0] = y[1];
        d[1] = -y[0] * y[0] * y[0];
    });
    let out = integrate_sampled(&sys, 0.0, &[a, 0.0], h, 10 * steps_per_period + 1, 1);
    let e0 = 0.25 * a.powi(4);
    let drift = out
        .chunks(2)
        .map(|y| ((0.5 * y[1] * y[1] + 0.25 * y[0].powi(4)) - e0).abs() / e0)
        .fold(0.0, f64::max);
    Ok(vec![Check::at_most("energy drift (10 periods)", drift, 1e-6)])
}
