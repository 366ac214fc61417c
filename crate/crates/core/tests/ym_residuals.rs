use rand::{rngs::StdRng, Rng, SeedableRng};
use ymscalar::expansion::{leading_order, nlo_correction, ExpansionConfig, NloScheme};
use ymscalar::grid::{Axis, Grid, StencilOrder};
use ymscalar::profile::Profile;
use ymscalar::su2::{quartic_eom_term, Metric, Su2};
use ymscalar::ym::{
    leading_order_residual, nlo_residual, route_discrepancy, split_residual, ym_eom_residual, ym_eom_residual_points,
    Frame, GaugeFieldGrid, GaugeParams, COMPONENTS,
};
use ymscalar::Error;

/// Random cubic polynomial in `(t, x, y)` per component.
fn polynomial_field(grid: &Grid, seed: u64) -> GaugeFieldGrid {
    let mut rng = StdRng::seed_from_u64(seed);
    let coeffs: Vec<[f64; 10]> = (0..COMPONENTS).map(|_| std::array::from_fn(|_| rng.gen_range(-1.0..1.0))).collect();
    let mut values = vec![0.0; grid.len() * COMPONENTS];
    for p in 0..grid.len() {
        let c = grid.coords(p);
        let (t, x, y) = (c[0], c[1], c.get(2).copied().unwrap_or(0.0));
        let monomials = [1.0, t, x, y, t * x, x * y, t * t, x * x * y, t * t * t, y * y * t];
        for (k, cf) in coeffs.iter().enumerate() {
            values[p * COMPONENTS + k] = cf.iter().zip(&monomials).map(|(a, m)| a * m).sum();
        }
    }
    GaugeFieldGrid::new(grid.clone(), values).unwrap()
}

fn closed_grid(n: usize) -> Grid {
    Grid::new(vec![Axis::closed(1.0, n), Axis::closed(1.0, n), Axis::closed(1.0, n)]).unwrap()
}

#[test]
fn zero_field_has_exactly_zero_residual() {
    let field = GaugeFieldGrid::zeros(closed_grid(9)).unwrap();
    let params = GaugeParams::new(2.0, 0.5).unwrap();
    for frame in [Frame::Physical, Frame::Rescaled] {
        assert_eq!(ym_eom_residual(&field, &params, frame, StencilOrder::Second).unwrap().linf, 0.0);
    }
    assert_eq!(leading_order_residual(&field, &params, StencilOrder::Second).unwrap().linf, 0.0);
}

#[test]
fn constant_field_leaves_only_the_quartic_term() {
    let grid = closed_grid(9);
    let mut rng = StdRng::seed_from_u64(3);
    let point: Vec<f64> = (0..COMPONENTS).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let values: Vec<f64> = (0..grid.len()).flat_map(|_| point.clone()).collect();
    let field = GaugeFieldGrid::new(grid, values).unwrap();
    let g = 1.7;
    let params = GaugeParams::new(g, 3.0).unwrap();
    let here = field.point(0);
    for (_, r) in ym_eom_residual_points(&field, &params, Frame::Physical, StencilOrder::Second).unwrap() {
        for a in 0..3 {
            for nu in 0..4 {
                let q = g * g * quartic_eom_term(&Su2, &here, &here, &here, Metric::Minkowski, a, nu);
                assert!((r[a][nu] - q).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn covariant_and_split_routes_agree_on_random_fields() {
    let grid = closed_grid(11);
    for (seed, alpha, g) in [(1, 1.0, 3.0), (2, 0.5, 0.7), (3, 4.0, 12.0)] {
        let params = GaugeParams::new(g, alpha).unwrap();
        let smooth = polynomial_field(&grid, seed);
        let d = route_discrepancy(&smooth, &params, StencilOrder::Second).unwrap();
        assert!(d.linf < 1e-10, "seed {seed}: {}", d.linf);
        // white noise exercises every stencil entry
        let mut rng = StdRng::seed_from_u64(seed + 100);
        let noise: Vec<f64> = (0..grid.len() * COMPONENTS).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let noise = GaugeFieldGrid::new(grid.clone(), noise).unwrap();
        for stencil in [StencilOrder::Second, StencilOrder::Fourth] {
            let d = route_discrepancy(&noise, &params, stencil).unwrap();
            let scale = split_residual(&noise, &params, stencil).unwrap().linf;
            assert!(d.linf < 1e-10 * scale.max(1.0), "noise {seed} {stencil:?}: {} vs {scale}", d.linf);
        }
    }
}

#[test]
fn rescaled_frame_is_physical_over_g_squared() {
    let g = 2.5;
    let params = GaugeParams::new(g, 2.0).unwrap();
    let tau_grid = Grid::new(vec![Axis::closed(0.4, 11), Axis::closed(1.0, 11)]).unwrap();
    let field = polynomial_field(&tau_grid, 9);
    let mut axes = tau_grid.axes().to_vec();
    axes[0].spacing *= g;
    let theta_field = GaugeFieldGrid::new(Grid::new(axes).unwrap(), field.values.clone()).unwrap();
    let phys = ym_eom_residual_points(&field, &params, Frame::Physical, StencilOrder::Second).unwrap();
    let resc = ym_eom_residual_points(&theta_field, &params, Frame::Rescaled, StencilOrder::Second).unwrap();
    for ((_, p), (_, r)) in phys.iter().zip(&resc) {
        for a in 0..3 {
            for nu in 0..4 {
                assert!((p[a][nu] / (g * g) - r[a][nu]).abs() < 1e-11 * (1.0 + p[a][nu].abs()));
            }
        }
    }
}

/// `max |E_h - E_{h/2}|` over the shared points of the fixed sub-cube
/// `[1/4, 3/4]^3`, so the sampled set does not drift with `h`.
fn successive_difference(n: usize, seed: u64, params: &GaugeParams) -> f64 {
    let coarse = ym_eom_residual_points(&polynomial_field(&closed_grid(n), seed), params, Frame::Physical, StencilOrder::Second)
        .unwrap();
    let fine_grid = closed_grid(2 * n - 1);
    let fine = ym_eom_residual_points(&polynomial_field(&fine_grid, seed), params, Frame::Physical, StencilOrder::Second)
        .unwrap();
    let fine: std::collections::HashMap<usize, [[f64; 4]; 3]> = fine.into_iter().collect();
    let coarse_grid = closed_grid(n);
    let mut worst = 0.0f64;
    for (p, r) in coarse {
        if !coarse_grid.coords(p).iter().all(|c| (0.25 - 1e-12..=0.75 + 1e-12).contains(c)) {
            continue;
        }
        let idx: Vec<usize> = (0..3).map(|ax| 2 * coarse_grid.index_along(p, ax)).collect();
        let q = (idx[0] * fine_grid.axis(1).len + idx[1]) * fine_grid.axis(2).len + idx[2];
        let rf = fine[&q];
        for a in 0..3 {
            for nu in 0..4 {
                worst = worst.max((r[a][nu] - rf[a][nu]).abs());
            }
        }
    }
    worst
}

#[test]
fn manufactured_fields_show_second_order_discretisation() {
    let params = GaugeParams::new(1.3, 2.0).unwrap();
    let e1 = successive_difference(9, 5, &params);
    let e2 = successive_difference(17, 5, &params);
    let order = (e1 / e2).log2();
    assert!((order - 2.0).abs() < 0.1, "order {order} ({e1}, {e2})");
}

fn varying_config(alpha: f64, time_points: usize) -> ExpansionConfig {
    ExpansionConfig {
        params: GaugeParams::new(10.0, alpha).unwrap(),
        n_orders: 2,
        time_extent: 3.0,
        time_points,
        ..ExpansionConfig::default()
    }
}

#[test]
fn gauge_term_is_proportional_to_kappa() {
    let base = leading_order(&varying_config(1.0, 129)).unwrap();
    let reference = ym_eom_residual_points(&base, &GaugeParams::new(10.0, 1.0).unwrap(), Frame::Rescaled, StencilOrder::Fourth)
        .unwrap();
    let mut per_kappa = Vec::new();
    for alpha in [0.5, 2.0, 4.0] {
        let params = GaugeParams::new(10.0, alpha).unwrap();
        let r = ym_eom_residual_points(&base, &params, Frame::Rescaled, StencilOrder::Fourth).unwrap();
        let diff: Vec<f64> = r
            .iter()
            .zip(&reference)
            .flat_map(|((_, x), (_, y))| (0..3).flat_map(move |a| (0..4).map(move |nu| x[a][nu] - y[a][nu])))
            .collect();
        let norm = diff.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(norm > 0.0);
        per_kappa.push(diff.iter().map(|v| v / params.kappa()).collect::<Vec<f64>>());
    }
    let scale = per_kappa[0].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for other in &per_kappa[1..] {
        for (a, b) in per_kappa[0].iter().zip(other) {
            assert!((a - b).abs() < 1e-9 * scale);
        }
    }
}

#[test]
fn components_chosen_zero_acquire_residuals() {
    let cfg = varying_config(2.0, 129);
    let a0 = leading_order(&cfg).unwrap();
    let r = ym_eom_residual(&a0, &cfg.params, Frame::Rescaled, StencilOrder::Fourth).unwrap();
    for label in ["A1_0", "A2_3", "A3_2"] {
        assert!(r.component(label).unwrap().l2 > 1e-4, "{label}");
    }
    // in the Lorenz gauge the time components close, the magnetic ones do not
    let lorenz = GaugeParams::new(10.0, 1.0).unwrap();
    let r = ym_eom_residual(&a0, &lorenz, Frame::Rescaled, StencilOrder::Fourth).unwrap();
    assert_eq!(r.component("A1_0").unwrap().linf, 0.0);
    assert!(r.component("A2_3").unwrap().l2 > 1e-4);
}

#[test]
fn leading_order_residual_converges_and_detects_wrong_amplitude() {
    let mu = 1.2;
    let period = 4.0 * ymscalar::elliptic::quarter_period_imaginary_unit() / mu;
    let res = |n: usize, scale: f64| {
        let cfg = ExpansionConfig {
            params: GaugeParams::new(4.0, 0.5).unwrap(),
            mu: Profile::Const(mu),
            spatial_points: 8,
            time_extent: period,
            time_points: n,
            stencil: StencilOrder::Second,
            ..ExpansionConfig::default()
        };
        let mut a0 = leading_order(&cfg).unwrap();
        a0.values.iter_mut().for_each(|v| *v *= scale);
        leading_order_residual(&a0, &cfg.params, cfg.stencil).unwrap().l2
    };
    let (r1, r2) = (res(100, 1.0), res(200, 1.0));
    assert!(((r1 / r2).log2() - 2.0).abs() < 0.1);
    assert!(res(200, 1.1) > 100.0 * r2);
}

#[test]
fn nlo_systems_on_the_lorenz_gauge() {
    let cfg = varying_config(1.0, 129);
    let a0 = leading_order(&cfg).unwrap();
    let zero = GaugeFieldGrid::zeros(a0.grid.clone()).unwrap();
    let r = nlo_residual(&a0, &zero, &cfg.params, cfg.stencil).unwrap();
    assert_eq!(r.simplified.linf, 0.0);
    // the full system keeps -3 eps phi grad phi, absent from the reduced one
    assert!(r.full.l2 > 1e-3);
    assert!(r.gap.l2 > 1e-3);
}

#[test]
fn nlo_residual_vanishes_without_driving() {
    let cfg = ExpansionConfig {
        mu: Profile::Const(1.0),
        ..varying_config(2.0, 65)
    };
    let a0 = leading_order(&cfg).unwrap();
    let zero = GaugeFieldGrid::zeros(a0.grid.clone()).unwrap();
    let r = nlo_residual(&a0, &zero, &cfg.params, cfg.stencil).unwrap();
    assert_eq!(r.full.linf, 0.0);
    assert_eq!(r.simplified.linf, 0.0);
}

#[test]
fn nlo_residuals_of_solved_corrections_converge() {
    for (scheme, pick) in [(NloScheme::Simplified, 0), (NloScheme::Linearized, 1)] {
        let res = |n: usize| {
            let cfg = ExpansionConfig {
                scheme,
                ..varying_config(2.0, n)
            };
            let a0 = leading_order(&cfg).unwrap();
            let a1 = nlo_correction(&cfg).unwrap();
            let r = nlo_residual(&a0, &a1, &cfg.params, cfg.stencil).unwrap();
            if pick == 0 {
                r.simplified.l2
            } else {
                r.full.l2
            }
        };
        let (coarse, fine) = (res(65), res(129));
        assert!(fine < coarse / 8.0, "{scheme:?}: {coarse} -> {fine}");
    }
}

#[test]
fn configuration_errors() {
    assert!(matches!(GaugeParams::new(1.0, 0.0), Err(Error::Domain(_))));
    assert!(matches!(GaugeParams::new(0.0, 1.0), Err(Error::Domain(_))));
    let a = GaugeFieldGrid::zeros(closed_grid(9)).unwrap();
    let b = GaugeFieldGrid::zeros(closed_grid(10)).unwrap();
    let params = GaugeParams::new(1.0, 1.0).unwrap();
    assert!(matches!(nlo_residual(&a, &b, &params, StencilOrder::Second), Err(Error::Config { .. })));
    assert!(Grid::new(vec![Axis::closed(1.0, 7), Axis::closed(1.0, 9)]).is_err());
}
