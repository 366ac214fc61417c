use ymscalar::expansion::{
    assemble, expansion_orders, g_sweep, hill_monodromy, leading_order, nlo_correction, nlo_correction_with_error,
    ExpansionConfig, NloScheme, DEFAULT_G_LIST,
};
use ymscalar::profile::Profile;
use ymscalar::ym::{ym_eom_residual_points, Frame, GaugeParams};
use ymscalar::Error;

fn config(n_orders: usize, alpha: f64) -> ExpansionConfig {
    ExpansionConfig {
        params: GaugeParams::new(10.0, alpha).unwrap(),
        n_orders,
        time_extent: 3.0,
        time_points: 257,
        ..ExpansionConfig::default()
    }
}

#[test]
fn lorenz_gauge_correction_is_the_zero_grid() {
    let a1 = nlo_correction(&config(2, 1.0)).unwrap();
    assert!(a1.values.iter().all(|&v| v == 0.0));
}

#[test]
fn leading_order_has_no_time_components() {
    let a0 = leading_order(&config(1, 2.0)).unwrap();
    for p in 0..a0.grid.len() {
        for a in 0..3 {
            assert_eq!(a0.get(p, a, 0), 0.0);
            assert_eq!(a0.get(p, a, a + 1), a0.get(p, 0, 1));
        }
    }
}

#[test]
fn doubling_g_halves_the_order_zero_residual_pointwise() {
    let cfg = config(1, 1.0);
    let a0 = leading_order(&cfg).unwrap();
    let at = |g: f64| {
        ym_eom_residual_points(&a0, &GaugeParams::new(g, 1.0).unwrap(), Frame::Rescaled, cfg.stencil).unwrap()
    };
    let (r40, r80) = (at(40.0), at(80.0));
    let peak = r40.iter().flat_map(|(_, r)| r.iter().flatten()).fold(0.0f64, |m, v| m.max(v.abs()));
    let mut checked = 0;
    for ((_, x), (_, y)) in r40.iter().zip(&r80) {
        for a in 0..3 {
            for nu in 0..4 {
                if x[a][nu].abs() > 0.1 * peak {
                    let ratio = y[a][nu] / x[a][nu];
                    assert!((ratio - 0.5).abs() < 0.05, "ratio {ratio}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn correction_integration_is_accurate() {
    let (_, err) = nlo_correction_with_error(&config(2, 2.0)).unwrap();
    assert!(err < 1e-8, "{err}");
}

#[test]
fn assembling_one_order_is_the_identity() {
    let orders = expansion_orders(&config(2, 2.0)).unwrap();
    assert_eq!(orders.len(), 2);
    assert_eq!(assemble(&orders[..1], 17.0).unwrap(), orders[0]);
    let lorenz = expansion_orders(&config(2, 1.0)).unwrap();
    assert_eq!(assemble(&lorenz, 17.0).unwrap(), lorenz[0]);
}

#[test]
fn assembling_mismatched_grids_fails() {
    let a = leading_order(&config(1, 1.0)).unwrap();
    let b = leading_order(&ExpansionConfig { time_points: 129, ..config(1, 1.0) }).unwrap();
    assert!(matches!(assemble(&[a, b], 10.0), Err(Error::Config { .. })));
}

#[test]
fn constant_amplitude_sweep_is_floor_limited() {
    let cfg = ExpansionConfig {
        mu: Profile::Const(1.0),
        ..config(1, 1.0)
    };
    let r = g_sweep(&cfg, &DEFAULT_G_LIST).unwrap();
    assert!(r.floor_limited);
    assert!(r.residual_l2.iter().all(|&v| v < 1e-6));
}

#[test]
fn leading_order_sweep_decays_as_one_over_g() {
    let r = g_sweep(&config(1, 1.0), &DEFAULT_G_LIST).unwrap();
    assert!(!r.floor_limited);
    assert!((r.fitted_slope + 1.0).abs() < 0.1, "{}", r.fitted_slope);
    let mut csv = Vec::new();
    r.write_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with("g,residual_l2,residual_linf\n"));
    assert_eq!(text.lines().count(), 5);
    assert_eq!(r.summary_json()["fitted_slope"], r.fitted_slope);
}

#[test]
fn exact_linearisation_removes_the_order_one_residual() {
    let cfg = ExpansionConfig {
        scheme: NloScheme::Linearized,
        ..config(2, 2.0)
    };
    let r = g_sweep(&cfg, &DEFAULT_G_LIST).unwrap();
    assert!((r.fitted_slope + 2.0).abs() < 0.2, "{}", r.fitted_slope);
}

#[test]
fn sweep_preconditions() {
    let cfg = config(1, 1.0);
    assert!(matches!(g_sweep(&cfg, &[10.0, 80.0]), Err(Error::Config { .. })));
    assert!(matches!(g_sweep(&cfg, &[10.0, 20.0, 40.0]), Err(Error::Config { .. })));
    assert!(matches!(g_sweep(&ExpansionConfig { n_orders: 3, ..cfg }, &DEFAULT_G_LIST), Err(Error::Config { .. })));
}

#[test]
fn hill_monodromy_is_unimodular() {
    for mu in [0.7, 1.0, 2.3] {
        let m = hill_monodromy(mu, 400).unwrap();
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        assert!((det - 1.0).abs() < 1e-8, "mu {mu}: det {det}");
    }
}
