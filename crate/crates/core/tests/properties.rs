//! Property checks over randomized geometries, spectra and fits.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use specgeo::fitting::{fit_series, log_grid, series_residual, FitConfig};
use specgeo::invariants::{
    hyper_series_legacy, lune_series, orbifold_series, polygon_series, sphere_mod_cyclic,
    sphere_mod_dihedral,
};
use specgeo::numkit::rat;
use specgeo::specimens::{
    orbifold_round_trip, polygon_round_trip, random_orbifold, random_polygon,
};
use specgeo::spectra::{heat_trace, Spectrum};
use specgeo::Scalar;
use std::f64::consts::PI;

fn exactly_zero(s: &Scalar) -> bool {
    s.is_exact() && s.is_zero()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn random_specimens_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_polygon(&mut rng);
        let r = polygon_round_trip(&p, 84).unwrap();
        prop_assert!(r.pass, "{:?}", r);
        let o = random_orbifold(&mut rng);
        let r = orbifold_round_trip(&o, 84).unwrap();
        prop_assert!(r.pass, "{:?}", r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // c0 - chi/6 is the sum of (pi - gamma)^2 / (24 pi gamma) over the corners
    #[test]
    fn constant_term_exceeds_euler_sixth(seed in any::<u64>()) {
        let p = random_polygon(&mut ChaCha8Rng::seed_from_u64(seed));
        let c0 = polygon_series(&p, 0).unwrap().coeff(0).to_f64();
        let chi = p.euler_characteristic().unwrap() as f64;
        let excess: f64 = p
            .angles
            .iter()
            .map(|a| {
                let g = a.to_radians();
                (PI - g).powi(2) / (24.0 * PI * g)
            })
            .sum();
        prop_assert!((c0 - chi / 6.0 - excess).abs() <= 1e-12 * (1.0 + c0.abs()));
        prop_assert!(c0 - chi / 6.0 >= -1e-14);
    }

    #[test]
    fn sphere_trace_scales_with_radius(r in 0.2f64..5.0, t in 0.01f64..2.0) {
        let a = heat_trace(&Spectrum::sphere(r).unwrap(), t, 1e-14).unwrap().value;
        let b = heat_trace(&Spectrum::sphere(1.0).unwrap(), t / (r * r), 1e-14).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-13 * b, "{} vs {}", a, b);
    }

    #[test]
    fn trace_decreases_in_time(k in 2u64..12, t in 0.01f64..2.0, dt in 0.001f64..1.0) {
        for s in [Spectrum::sphere(1.0).unwrap(), Spectrum::lune(k, 1.0).unwrap()] {
            let a = heat_trace(&s, t, 1e-13).unwrap().value;
            let b = heat_trace(&s, t + dt, 1e-13).unwrap().value;
            prop_assert!(b <= a * (1.0 + 1e-12), "{:?}: {} then {}", s.kind, a, b);
        }
    }

    #[test]
    fn hyperbolic_series_match_legacy_assembly(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = loop {
            let p = random_polygon(&mut rng);
            if p.curvature == Scalar::integer(-1) {
                break p;
            }
        };
        let a = polygon_series(&p, 24).unwrap();
        let b = hyper_series_legacy(&p, 24).unwrap();
        prop_assert!(exactly_zero(&series_residual(&a, &b).unwrap()));
    }

    #[test]
    fn cyclic_minus_dihedral_is_lune(k in 2u32..16, root in prop::sample::select(vec![(1i64, 1i64), (2, 1), (1, 2), (3, 2)])) {
        let kappa = rat(root.0 * root.0, root.1 * root.1);
        let z = orbifold_series(&sphere_mod_cyclic(k, kappa.clone()), 20).unwrap();
        let d = orbifold_series(&sphere_mod_dihedral(k, kappa.clone()).unwrap(), 20).unwrap();
        let lune = lune_series(k, &Scalar::rational(kappa), 20).unwrap();
        prop_assert!(exactly_zero(&series_residual(&z.minus(&d).unwrap(), &lune).unwrap()));
    }

    #[test]
    fn synthetic_orbifold_series_is_refitted(seed in any::<u64>()) {
        let o = random_orbifold(&mut ChaCha8Rng::seed_from_u64(seed));
        let series = orbifold_series(&o, 4).unwrap().to_float();
        let exponents: Vec<i32> = series.terms().map(|(n, _)| n).collect();
        let config = FitConfig::new(log_grid(0.02, 0.2, 24), exponents);
        let samples: Vec<(f64, f64)> = config.t_grid.iter().map(|&t| (t, series.evaluate(t))).collect();
        let fit = fit_series(&samples, &config).unwrap();
        for (n, c) in series.terms() {
            let want = c.to_f64();
            let got = fit.coeff(n).unwrap();
            prop_assert!((got - want).abs() <= 1e-8 * want.abs().max(1.0), "n={} {} vs {}", n, got, want);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    // least squares over nested bases cannot increase the misfit
    #[test]
    fn nested_fits_do_not_increase_residual(k in 2u64..8) {
        let spec = Spectrum::lune(k, 1.0).unwrap();
        let grid = log_grid(0.02, 0.2, 20);
        let samples: Vec<(f64, f64)> = grid
            .iter()
            .map(|&t| (t, heat_trace(&spec, t, 1e-14).unwrap().value))
            .collect();
        let mut prev = f64::INFINITY;
        for top in -1..=4 {
            let config = FitConfig::new(grid.clone(), (-2..=top).collect());
            let Ok(fit) = fit_series(&samples, &config) else { break };
            prop_assert!(fit.residual_norm <= prev * (1.0 + 1e-6) + 1e-15, "top={} {} after {}", top, fit.residual_norm, prev);
            prev = fit.residual_norm;
        }
    }
}
