//! `ymscalar` command-line front end.
//!
//! Every parameter can come from a flat `key = value` file (`--config`) or a
//! flag of the same name (`--spatial-points` for `spatial_points`); flags win.
//! Exit status: 0 success, 2 configuration error, 3 numerical-check failure.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::Params;

/// Declares a flag struct whose every field is an optional string keyed by
/// its own name, so flags and config-file entries share one namespace.
macro_rules! params {
    ($name:ident { $($field:ident: $help:literal),* $(,)? }) => {
        #[derive(Debug, clap::Args)]
        pub struct $name {
            $(
                #[arg(long, help = $help, allow_hyphen_values = true, value_name = "VALUE")]
                $field: Option<String>,
            )*
        }

        impl $name {
            fn keys(&self) -> &'static [&'static str] {
                &[$(stringify!($field)),*]
            }

            fn flags(self) -> Vec<(&'static str, Option<String>)> {
                vec![$((stringify!($field), self.$field)),*]
            }
        }
    };
}

params!(EllipticArgs {
    u: "comma-separated arguments",
    m: "parameter m <= 1 [default: -1]",
    out: "CSV path [default: stdout]",
    summary: "JSON summary path",
});

params!(ScalarExactArgs {
    lambda: "self-coupling [default: 2]",
    mu: "mass scale [default: 1]",
    phase: "additive phase [default: 0]",
    direction: "5 comma-separated wavevector direction components [default: 1,0.5,0,0,0]",
    spatial_dims: "spatial axes, 1..=4 [default: 1]",
    samples: "samples per period [default: 64]",
    periods: "periods per axis [default: 1]",
    out: "field CSV path [default: stdout]",
    summary: "JSON summary path",
});

params!(ScalarResidualArgs {
    input: "field CSV",
    lambda: "self-coupling",
    time: "tau or theta [default: tau]",
    stencil: "2 or 4 [default: 2]",
    tol: "bound on the relative residual [default: 1e-2]",
    out: "per-component CSV path [default: stdout]",
    summary: "JSON summary path",
});

params!(YmResidualArgs {
    input: "gauge-field CSV",
    g: "coupling",
    alpha: "gauge parameter [default: 1]",
    frame: "physical or rescaled [default: physical]",
    stencil: "2 or 4 [default: 2]",
    tol: "bound on the RMS residual (no check when absent)",
    out: "per-component CSV path [default: stdout]",
    summary: "JSON summary path",
});

params!(ExpandArgs {
    g: "coupling at which the orders are assembled [default: 10]",
    alpha: "gauge parameter [default: 1]",
    mu: "amplitude profile [default: const:1+bump:2,1.6,0.1]",
    phase: "phase profile [default: const:0]",
    orders: "1 or 2 [default: 1]",
    scheme: "simplified or linearized [default: simplified]",
    spatial_dims: "1..=3 [default: 1]",
    spatial_extent: "periodic spatial length [default: 4]",
    spatial_points: "points per spatial axis [default: 64]",
    time_extent: "theta length [default: 6]",
    time_points: "theta samples [default: 513]",
    stencil: "2 or 4 [default: 4]",
    out: "assembled field CSV path [default: stdout]",
    summary: "JSON summary path",
});

params!(GSweepArgs {
    g: "comma-separated couplings [default: 10,20,40,80]",
    alpha: "gauge parameter [default: 1]",
    mu: "amplitude profile [default: const:1+bump:2,1.6,0.1]",
    phase: "phase profile [default: const:0]",
    orders: "1 or 2 [default: 1]",
    scheme: "simplified or linearized [default: simplified]",
    spatial_dims: "1..=3 [default: 1]",
    spatial_extent: "periodic spatial length [default: 4]",
    spatial_points: "points per spatial axis [default: 64]",
    time_extent: "theta length [default: 6]",
    time_points: "theta samples [default: 513]",
    stencil: "2 or 4 [default: 4]",
    expect_slope: "expected log-log slope (no check when absent)",
    slope_tol: "tolerance on the slope [default: 0.1]",
    out: "CSV path [default: stdout]",
    summary: "JSON summary path",
});

params!(SpectrumArgs {
    p0: "oscillator frequency scale [default: 1]",
    amplitude: "oscillator amplitude [default: 1]",
    samples: "series length, a power of two >= 1024 [default: 4096]",
    periods: "whole periods covered [default: 8]",
    n_max: "highest harmonic index [default: 8]",
    tol: "bound on |measured - analytic| [default: 1e-6]",
    out: "CSV path [default: stdout]",
    summary: "JSON summary path",
});

params!(VerifyArgs {
    criteria: "comma-separated criterion ids [default: all]",
    summary: "JSON report path",
});

#[derive(Debug, Subcommand)]
enum Command {
    /// Jacobi sn, cn, dn and K at one parameter.
    EllipticEval(EllipticArgs),
    /// Samples an exact travelling snoidal wave of the scalar theory.
    ScalarExact(ScalarExactArgs),
    /// Field-equation residual of a scalar field CSV.
    ScalarResidual(ScalarResidualArgs),
    /// Yang-Mills equation-of-motion residual of a gauge-field CSV.
    YmResidual(YmResidualArgs),
    /// Builds the strong-coupling expansion and assembles it at one coupling.
    Expand(ExpandArgs),
    /// Residual of the assembled expansion against the coupling.
    GSweep(GSweepArgs),
    /// Harmonic amplitudes of the leading-order oscillator, measured and analytic.
    Spectrum(SpectrumArgs),
    /// Runs the acceptance criteria and prints a pass/fail table.
    VerifyAll(VerifyArgs),
}

#[derive(Debug, Parser)]
#[command(name = "ymscalar", version, about = "Quartic scalar and SU(2) Yang-Mills solutions: residuals, expansions, spectra")]
struct Cli {
    /// Flat `key = value` parameter file; flags override its entries.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

fn params(config: Option<PathBuf>, keys: &[&str], flags: Vec<(&'static str, Option<String>)>) -> ymscalar::Result<Params> {
    let mut p = match config {
        Some(path) => Params::load(&path)?,
        None => Params::default(),
    };
    p.overlay(flags);
    p.restrict(keys)?;
    Ok(p)
}

fn run(cli: Cli) -> Result<(), commands::Failure> {
    macro_rules! dispatch {
        ($args:expr, $f:path) => {{
            let keys = $args.keys();
            let p = params(cli.config, keys, $args.flags())?;
            $f(&p)
        }};
    }
    match cli.command {
        Command::EllipticEval(a) => dispatch!(a, commands::elliptic_eval),
        Command::ScalarExact(a) => dispatch!(a, commands::scalar_exact),
        Command::ScalarResidual(a) => dispatch!(a, commands::scalar_residual),
        Command::YmResidual(a) => dispatch!(a, commands::ym_residual),
        Command::Expand(a) => dispatch!(a, commands::expand),
        Command::GSweep(a) => dispatch!(a, commands::g_sweep),
        Command::Spectrum(a) => dispatch!(a, commands::spectrum),
        Command::VerifyAll(a) => dispatch!(a, commands::verify_all),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("ymscalar: {f}");
            ExitCode::from(f.code())
        }
    }
}
