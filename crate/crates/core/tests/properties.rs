use proptest::prelude::*;
use ymscalar::elliptic::{complete_elliptic_k, jacobi_sn_cn_dn, EllipticModulus};
use ymscalar::expansion::{assemble, loglog_fit};
use ymscalar::grid::{read_field_csv, write_field_csv, Axis, Grid};
use ymscalar::profile::Profile;
use ymscalar::scalar::{boost, rotate, wave_norm, ScalarSolution};
use ymscalar::su2::{
    contraction_lhs, epsilon, ghost_coupling_term, quartic_potential, ColorVectorField, GhostPoint, Metric,
    StructureConstants, Su2,
};
use ymscalar::ym::GaugeFieldGrid;

fn modulus() -> impl Strategy<Value = f64> {
    prop_oneof![Just(-1.0), Just(0.5)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn jacobi_identities(u in -20.0f64..20.0, m in modulus()) {
        let t = jacobi_sn_cn_dn(u, EllipticModulus::new(m).unwrap()).unwrap();
        prop_assert!((t.sn * t.sn + t.cn * t.cn - 1.0).abs() < 1e-10);
        prop_assert!((t.dn * t.dn + m * t.sn * t.sn - 1.0).abs() < 1e-10);
    }

    #[test]
    fn jacobi_periodicity(u in -20.0f64..20.0, m in modulus()) {
        let m = EllipticModulus::new(m).unwrap();
        let k = complete_elliptic_k(m);
        let a = jacobi_sn_cn_dn(u, m).unwrap();
        let b = jacobi_sn_cn_dn(u + 4.0 * k, m).unwrap();
        prop_assert!((a.sn - b.sn).abs() < 1e-9);
        // half-period antiperiodicity of sn
        let c = jacobi_sn_cn_dn(u + 2.0 * k, m).unwrap();
        prop_assert!((a.sn + c.sn).abs() < 1e-9);
    }
}

proptest! {
    #[test]
    fn smilga_quartic_potential(phi in -5.0f64..5.0) {
        for metric in [Metric::Euclidean, Metric::Minkowski] {
            let v = quartic_potential(&ColorVectorField::smilga(phi), metric);
            prop_assert!((v.value + 6.0 * phi.powi(4)).abs() <= 1e-12 * phi.powi(4).max(1.0));
            prop_assert_eq!(v.contraction, -v.value);
        }
    }

    #[test]
    fn ghost_with_equal_components_decouples(
        phi in -5.0f64..5.0,
        cbar in -3.0f64..3.0,
        c in -3.0f64..3.0,
        grad in prop::array::uniform4(-3.0f64..3.0),
        g in 0.1f64..10.0,
    ) {
        let ghost = GhostPoint::uniform(cbar, c, grad);
        prop_assert_eq!(ghost_coupling_term(g, &ColorVectorField::smilga(phi), &ghost, Metric::Minkowski), 0.0);
    }

    #[test]
    fn structure_constants_antisymmetric(a in 0usize..3, b in 0usize..3, c in 0usize..3) {
        let f = Su2;
        prop_assert_eq!(f.f(a, b, c), -f.f(b, a, c));
        prop_assert_eq!(f.f(a, b, c), -f.f(a, c, b));
        prop_assert_eq!(f.f(a, b, c), epsilon(a, b, c));
    }

    #[test]
    fn epsilon_contraction(b in 0usize..3, c in 0usize..3, r in 0usize..3, s in 0usize..3) {
        let d = |x: usize, y: usize| (x == y) as u8 as f64;
        prop_assert_eq!(contraction_lhs(&Su2, b, c, r, s), d(b, r) * d(c, s) - d(b, s) * d(c, r));
    }

    #[test]
    fn dispersion_is_invariant_under_boosts_and_rotations(
        lambda in 0.1f64..20.0,
        mu in 0.1f64..3.0,
        spatial in prop::array::uniform4(-0.2f64..0.2),
        rapidity in -1.5f64..1.5,
        angle in -3.2f64..3.2,
        axis in 1usize..5,
    ) {
        let dir = [1.0, spatial[0], spatial[1], spatial[2], spatial[3]];
        let sol = ScalarSolution::make_exact(lambda, mu, 0.0, dir).unwrap();
        prop_assert!(sol.dispersion_defect().abs() <= 1e-12 * sol.dispersion_target());
        let other = if axis == 4 { 1 } else { axis + 1 };
        let moved = rotate(&boost(&sol.wavevector, axis, rapidity), axis, other, angle);
        let boosted = ScalarSolution { wavevector: moved, ..sol };
        let scale = sol.wavevector.iter().map(|x| x * x).sum::<f64>() * (2.0 * rapidity.abs()).exp();
        prop_assert!(boosted.dispersion_defect().abs() <= 1e-12 * scale.max(1.0));
        prop_assert!((wave_norm(&moved) - wave_norm(&sol.wavevector)).abs() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn profile_display_round_trips(
        c in -5.0f64..5.0,
        centre in 0.0f64..1.0,
        width in 0.01f64..1.0,
        h in -1.0f64..1.0,
        wl in 0.1f64..4.0,
    ) {
        let spec = format!("const:{c}+bump:{centre},{width},{h}+cosine:{c},{h},{wl}");
        let p = Profile::parse(&spec, "mu").unwrap();
        prop_assert_eq!(Profile::parse(&p.to_string(), "mu").unwrap(), p);
    }

    #[test]
    fn field_csv_is_lossless(values in prop::collection::vec(-1e6f64..1e6, 8 * 8 * 2)) {
        let grid = Grid::new(vec![Axis::closed(1.3, 8), Axis::periodic(0.7, 8)]).unwrap();
        let labels = vec!["u".to_string(), "v".to_string()];
        let mut buf = Vec::new();
        write_field_csv(&mut buf, &grid, &labels, &values).unwrap();
        let (g2, l2, v2) = read_field_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(g2, grid);
        prop_assert_eq!(l2, labels);
        prop_assert_eq!(v2, values);
    }

    #[test]
    fn assembly_is_linear_in_inverse_coupling(g in 1.0f64..100.0, seed in prop::collection::vec(-1.0f64..1.0, 16)) {
        let grid = Grid::new(vec![Axis::closed(1.0, 8), Axis::periodic(1.0, 8)]).unwrap();
        let n = grid.len() * 12;
        let a0 = GaugeFieldGrid::new(grid.clone(), (0..n).map(|i| seed[i % 16]).collect()).unwrap();
        let a1 = GaugeFieldGrid::new(grid, (0..n).map(|i| seed[(i * 7) % 16] + 0.5).collect()).unwrap();
        let orders = [a0.clone(), a1.clone()];
        let s = assemble(&orders, g).unwrap();
        let d = assemble(&orders, 2.0 * g).unwrap();
        for i in 0..n {
            prop_assert!((s.values[i] - a0.values[i] - a1.values[i] / g).abs() < 1e-14);
            let (ds, dd) = (s.values[i] - a0.values[i], d.values[i] - a0.values[i]);
            prop_assert!((ds - 2.0 * dd).abs() < 1e-14);
        }
    }

    #[test]
    fn loglog_fit_is_exact_on_power_laws(p in -3.0f64..3.0, c in 0.01f64..100.0) {
        let x = [10.0f64, 20.0, 40.0, 80.0];
        let y: Vec<f64> = x.iter().map(|v| c * v.powf(p)).collect();
        let (slope, ci) = loglog_fit(&x, &y).unwrap();
        prop_assert!((slope - p).abs() < 1e-10);
        prop_assert!(ci < 1e-10);
    }
}
