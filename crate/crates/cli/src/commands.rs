//! One function per subcommand. Parameters are parsed and validated, output
//! files opened, and only then does computation start.

use std::fmt;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use serde_json::json;
use ymscalar::elliptic::{complete_elliptic_k, jacobi_sn_cn_dn, sn_imaginary_unit, EllipticModulus};
use ymscalar::expansion::{
    assemble, expansion_orders, g_sweep as run_sweep, ExpansionConfig, NloScheme, DEFAULT_G_LIST, DEFAULT_MU_PROFILE,
};
use ymscalar::grid::{fmt_f64, ResidualReport, StencilOrder};
use ymscalar::scalar::{self, ScalarGrid, ScalarSolution, TimeVariable};
use ymscalar::spectrum::{matched_step, measured_spectrum, write_spectrum_csv};
use ymscalar::verify::{run_criterion, CRITERIA};
use ymscalar::ym::{nlo_residual, ym_eom_residual, Frame, GaugeFieldGrid, GaugeParams};
use ymscalar::{Error, Profile};

use crate::config::Params;
use crate::output::Sinks;

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// Bad, missing or inconsistent input, or an unwritable output.
    Config(Error),
    /// The computation ran but a requested check did not hold.
    Numerical(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(e) => write!(f, "{e}"),
            Failure::Numerical(m) => write!(f, "numerical check failed: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Config(e)
    }
}

type Outcome = Result<(), Failure>;

fn config_err(key: &str, message: impl Into<String>) -> Failure {
    Failure::Config(Error::Config {
        key: key.to_string(),
        message: message.into(),
    })
}

fn sinks(p: &Params) -> Result<Sinks, Failure> {
    Ok(Sinks::open(p.opt::<PathBuf>("out")?, p.opt::<PathBuf>("summary")?)?)
}

fn stencil(p: &Params, default: StencilOrder) -> Result<StencilOrder, Failure> {
    match p.raw("stencil") {
        None => Ok(default),
        Some("2") => Ok(StencilOrder::Second),
        Some("4") => Ok(StencilOrder::Fourth),
        Some(s) => Err(config_err("stencil", format!("expected 2 or 4, got `{s}`"))),
    }
}

fn positive(p: &Params, key: &str, default: Option<f64>) -> Result<f64, Failure> {
    let v = match default {
        Some(d) => p.get(key, d)?,
        None => p.require(key)?,
    };
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(config_err(key, format!("must be positive, got {v}")))
    }
}

fn open_input(p: &Params) -> Result<BufReader<File>, Failure> {
    let path: PathBuf = p.require("input")?;
    File::open(&path)
        .map(BufReader::new)
        .map_err(|e| config_err("input", format!("cannot read `{}`: {e}", path.display())))
}

fn write_norms(out: &mut dyn std::io::Write, r: &ResidualReport) -> ymscalar::Result<()> {
    writeln!(out, "component,l2,linf")?;
    for c in &r.per_component {
        writeln!(out, "{},{},{}", c.label, fmt_f64(c.l2), fmt_f64(c.linf))?;
    }
    Ok(())
}

pub fn elliptic_eval(p: &Params) -> Outcome {
    let u = p.list("u")?.ok_or_else(|| config_err("u", "missing required parameter"))?;
    let m = EllipticModulus::new(p.get("m", -1.0)?).map_err(|e| config_err("m", e.to_string()))?;
    let mut sinks = sinks(p)?;
    let rows = u
        .iter()
        .map(|&x| jacobi_sn_cn_dn(x, m).map(|t| (x, t)))
        .collect::<ymscalar::Result<Vec<_>>>()?;
    sinks.write_data(|out| {
        writeln!(out, "u,sn,cn,dn")?;
        for (x, t) in &rows {
            writeln!(out, "{},{},{},{}", fmt_f64(*x), fmt_f64(t.sn), fmt_f64(t.cn), fmt_f64(t.dn))?;
        }
        Ok(())
    })?;
    sinks.write_summary(&json!({ "m": m.parameter(), "K": complete_elliptic_k(m) }))?;
    Ok(())
}

pub fn scalar_exact(p: &Params) -> Outcome {
    let lambda = positive(p, "lambda", Some(2.0))?;
    let mu: f64 = p.get("mu", 1.0)?;
    let phase: f64 = p.get("phase", 0.0)?;
    let dir = p.list("direction")?.unwrap_or_else(|| vec![1.0, 0.5, 0.0, 0.0, 0.0]);
    let direction: [f64; 5] = dir
        .as_slice()
        .try_into()
        .map_err(|_| config_err("direction", format!("expected 5 components, got {}", dir.len())))?;
    let spatial_dims: usize = p.get("spatial_dims", 1)?;
    let samples: usize = p.get("samples", 64)?;
    let periods: usize = p.get("periods", 1)?;
    if periods == 0 {
        return Err(config_err("periods", "must be at least 1"));
    }
    let sol = ScalarSolution::make_exact(lambda, mu, phase, direction).map_err(|e| config_err("direction", e.to_string()))?;
    let grid = sol.period_matched_grid(spatial_dims, samples, periods)?;
    let mut sinks = sinks(p)?;
    let field = sol.sample(&grid)?;
    sinks.write_data(|out| field.write_csv(out))?;
    sinks.write_summary(&json!({
        "solution": sol,
        "amplitude": sol.amplitude(),
        "dispersion_target": sol.dispersion_target(),
        "dispersion_defect": sol.dispersion_defect(),
        "sizes": grid.axes().iter().map(|a| a.len).collect::<Vec<_>>(),
        "spacings": grid.spacings(),
    }))?;
    Ok(())
}

pub fn scalar_residual(p: &Params) -> Outcome {
    let lambda = positive(p, "lambda", None)?;
    let time = match p.raw("time").unwrap_or("tau") {
        "tau" => TimeVariable::Tau,
        "theta" => TimeVariable::Theta,
        s => return Err(config_err("time", format!("expected tau or theta, got `{s}`"))),
    };
    let st = stencil(p, StencilOrder::Second)?;
    let tol = positive(p, "tol", Some(1e-2))?;
    let input = open_input(p)?;
    let mut sinks = sinks(p)?;
    let field = ScalarGrid::read_csv(input).map_err(|e| config_err("input", e.to_string()))?;
    let report = scalar::scalar_residual(&field, lambda, time, st)?;
    // relative to the RMS of the cubic term
    let coupling = if time == TimeVariable::Tau { lambda } else { 1.0 };
    let scale = (field.values.iter().map(|v| (coupling * v * v * v).powi(2)).sum::<f64>() / field.values.len() as f64).sqrt();
    let relative = if scale > 0.0 { report.l2 / scale } else { report.l2 };
    let passed = relative <= tol;
    sinks.write_data(|out| write_norms(out, &report))?;
    sinks.write_summary(&json!({ "report": report, "relative_l2": relative, "tol": tol, "passed": passed }))?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Numerical(format!("relative residual {relative:e} exceeds tol {tol:e}")))
    }
}

pub fn ym_residual(p: &Params) -> Outcome {
    let params = GaugeParams::new(positive(p, "g", None)?, p.get("alpha", 1.0)?).map_err(|e| config_err("alpha", e.to_string()))?;
    let frame = match p.raw("frame").unwrap_or("physical") {
        "physical" => Frame::Physical,
        "rescaled" => Frame::Rescaled,
        s => return Err(config_err("frame", format!("expected physical or rescaled, got `{s}`"))),
    };
    let st = stencil(p, StencilOrder::Second)?;
    let tol: Option<f64> = p.opt("tol")?;
    let input = open_input(p)?;
    let mut sinks = sinks(p)?;
    let field = GaugeFieldGrid::read_csv(input).map_err(|e| config_err("input", e.to_string()))?;
    let report = ym_eom_residual(&field, &params, frame, st)?;
    let passed = tol.is_none_or(|t| report.l2 <= t);
    sinks.write_data(|out| write_norms(out, &report))?;
    sinks.write_summary(&json!({ "report": report, "tol": tol, "passed": passed }))?;
    match tol {
        Some(t) if !passed => Err(Failure::Numerical(format!("residual {:e} exceeds tol {t:e}", report.l2))),
        _ => Ok(()),
    }
}

fn expansion_config(p: &Params, g: f64) -> Result<ExpansionConfig, Failure> {
    let d = ExpansionConfig::default();
    let params = GaugeParams::new(g, p.get("alpha", d.params.alpha)?).map_err(|e| config_err("alpha", e.to_string()))?;
    let profile = |key: &str, default: &str| Profile::parse(p.raw(key).unwrap_or(default), key);
    let cfg = ExpansionConfig {
        params,
        mu: profile("mu", DEFAULT_MU_PROFILE)?,
        phase: profile("phase", "const:0")?,
        n_orders: p.get("orders", d.n_orders)?,
        scheme: p.get::<NloScheme>("scheme", d.scheme)?,
        spatial_dims: p.get("spatial_dims", d.spatial_dims)?,
        spatial_extent: p.get("spatial_extent", d.spatial_extent)?,
        spatial_points: p.get("spatial_points", d.spatial_points)?,
        time_extent: p.get("time_extent", d.time_extent)?,
        time_points: p.get("time_points", d.time_points)?,
        stencil: stencil(p, d.stencil)?,
    };
    cfg.grid()?;
    Ok(cfg)
}

pub fn expand(p: &Params) -> Outcome {
    let g = positive(p, "g", Some(10.0))?;
    let cfg = expansion_config(p, g)?;
    let mut sinks = sinks(p)?;
    let orders = expansion_orders(&cfg)?;
    let field = assemble(&orders, g)?;
    let residual = ym_eom_residual(&field, &cfg.params, Frame::Rescaled, cfg.stencil)?;
    let nlo = match orders.as_slice() {
        [a0, a1] => {
            let r = nlo_residual(a0, a1, &cfg.params, cfg.stencil)?;
            json!({ "full_l2": r.full.l2, "simplified_l2": r.simplified.l2, "gap_l2": r.gap.l2 })
        }
        _ => serde_json::Value::Null,
    };
    sinks.write_data(|out| field.write_csv(out))?;
    sinks.write_summary(&json!({
        "config": cfg,
        "order_max_abs": orders.iter().map(GaugeFieldGrid::max_abs).collect::<Vec<_>>(),
        "residual_l2": residual.l2,
        "residual_linf": residual.linf,
        "nlo_equations": nlo,
    }))?;
    Ok(())
}

pub fn g_sweep(p: &Params) -> Outcome {
    let g_list = p.list("g")?.unwrap_or_else(|| DEFAULT_G_LIST.to_vec());
    let first = *g_list.first().ok_or_else(|| config_err("g", "empty coupling list"))?;
    let cfg = expansion_config(p, first)?;
    let expect: Option<f64> = p.opt("expect_slope")?;
    let slope_tol = positive(p, "slope_tol", Some(0.1))?;
    let mut sinks = sinks(p)?;
    let result = run_sweep(&cfg, &g_list)?;
    sinks.write_data(|out| result.write_csv(out))?;
    let mut summary = result.summary_json();
    summary["expected_slope"] = json!(expect);
    summary["slope_tol"] = json!(slope_tol);
    sinks.write_summary(&summary)?;
    if let Some(e) = expect {
        if result.floor_limited {
            return Err(Failure::Numerical("residual sits at the discretisation floor".into()));
        }
        if (result.fitted_slope - e).abs() > slope_tol {
            return Err(Failure::Numerical(format!(
                "slope {} outside {e} +- {slope_tol}",
                result.fitted_slope
            )));
        }
    }
    Ok(())
}

pub fn spectrum(p: &Params) -> Outcome {
    let p0 = positive(p, "p0", Some(1.0))?;
    let amplitude: f64 = p.get("amplitude", 1.0)?;
    let samples: usize = p.get("samples", 4096)?;
    let periods: usize = p.get("periods", 8)?;
    if periods == 0 {
        return Err(config_err("periods", "must be at least 1"));
    }
    let n_max: usize = p.get("n_max", 8)?;
    let tol = positive(p, "tol", Some(1e-6))?;
    let mut sinks = sinks(p)?;
    let step = matched_step(samples, periods, p0);
    let series: Vec<f64> = (0..samples).map(|j| amplitude * sn_imaginary_unit(p0 * j as f64 * step)).collect();
    let spec = measured_spectrum(&series, step, p0, amplitude, n_max)?;
    let worst = spec.lines.iter().map(|l| l.abs_error()).fold(0.0, f64::max);
    sinks.write_data(|out| write_spectrum_csv(out, &spec.lines))?;
    sinks.write_summary(&json!({
        "p0": p0,
        "step": step,
        "periods": spec.periods,
        "bin_width": spec.bin_width,
        "even_to_fundamental": spec.even_to_fundamental,
        "max_abs_error": worst,
        "tol": tol,
    }))?;
    if worst <= tol {
        Ok(())
    } else {
        Err(Failure::Numerical(format!("max |measured - analytic| {worst:e} exceeds {tol:e}")))
    }
}

pub fn verify_all(p: &Params) -> Outcome {
    let ids: Vec<u8> = match p.list("criteria")? {
        None => CRITERIA.to_vec(),
        Some(v) => v
            .iter()
            .map(|&x| {
                let id = x as u8;
                if x.fract() == 0.0 && CRITERIA.contains(&id) {
                    Ok(id)
                } else {
                    Err(config_err("criteria", format!("no criterion {x}")))
                }
            })
            .collect::<Result<_, _>>()?,
    };
    let mut sinks = Sinks::open(None, p.opt::<PathBuf>("summary")?)?;
    let reports: Vec<_> = ids
        .iter()
        .map(|&id| run_criterion(id))
        .collect::<ymscalar::Result<Vec<_>>>()
        .map_err(|e| Failure::Numerical(e.to_string()))?;
    sinks.write_data(|out| {
        for r in &reports {
            writeln!(out, "{}", r.line())?;
        }
        Ok(())
    })?;
    if p.raw("summary").is_some() {
        sinks.write_summary(&serde_json::to_value(&reports).map_err(Error::from)?)?;
    }
    let failed: Vec<u8> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Numerical(format!("criteria {failed:?} failed")))
    }
}
