//! Property tests over randomized parameters and band-limited fields.

use proptest::prelude::*;
use rch::nonlocal::{
    conv_half_kernels, dealiased_product, helmholtz_inverse, spectral_derivative, Field,
    PeriodicGrid,
};
use rch::params::{derive_params, identity_report, omega_sup, z0_sup};
use rch::solver::{scale_map, scale_map_inverse, Scaling, WaveState};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

const L: f64 = 20.0;

fn band_limited(grid: &PeriodicGrid, coeffs: &[(f64, f64)]) -> Field {
    Field::from_fn(grid, |x| {
        coeffs
            .iter()
            .enumerate()
            .map(|(m, &(a, b))| {
                let k = 2.0 * PI * (m + 1) as f64 / grid.length();
                a * (k * x).cos() + b * (k * x).sin()
            })
            .sum()
    })
    .unwrap()
}

fn max_abs_diff(a: &Field, b: &Field) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn params_invariants_hold_across_the_admissible_range(
        frac in 0.0f64..0.999999f64,
        eps in 1e-4f64..1.0f64,
        mu in 1e-6f64..0.5f64,
    ) {
        let omega = frac * omega_sup();
        let p = derive_params(omega, eps, mu).unwrap();
        prop_assert!((p.c * p.c + 2.0 * omega * p.c - 1.0).abs() < 1e-12);
        prop_assert!(p.beta > 0.0);
        prop_assert!(p.z0 >= FRAC_1_SQRT_2 - 1e-12 && p.z0 < z0_sup() + 1e-12);
        let z0sq = 0.5 - 2.0 / (3.0 * (p.c * p.c + 1.0))
            + 4.0 / (3.0 * (p.c * p.c + 1.0).powi(2));
        prop_assert!((p.z0 * p.z0 - z0sq).abs() < 1e-14);
        for row in identity_report(&p) {
            if !row.informational {
                prop_assert!(row.residual < 1e-10, "{} at omega={}", row.name, omega);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn operator_kit_identities_on_random_fields(
        coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 12),
        lam in 0.05f64..5.0f64,
    ) {
        let grid = PeriodicGrid::new(L, 256).unwrap();
        let raw = band_limited(&grid, &coeffs);
        let sup = raw.values().iter().fold(1e-12f64, |a, v| a.max(v.abs()));
        let f = raw.scaled(1.0 / sup);

        // roundtrip through the forward operator built from the derivative
        let g = helmholtz_inverse(&grid, lam, &f).unwrap();
        let back = g.axpy(-lam, &spectral_derivative(&grid, &g, 2).unwrap());
        prop_assert!(max_abs_diff(&back, &f) < 1e-12);

        // kernel sum and difference identities
        let (plus, minus) = conv_half_kernels(&grid, &f).unwrap();
        let pf = helmholtz_inverse(&grid, 1.0, &f).unwrap();
        let pxf = spectral_derivative(&grid, &pf, 1).unwrap();
        prop_assert!(max_abs_diff(&plus.axpy(1.0, &minus), &pf) < 1e-12);
        prop_assert!(max_abs_diff(&minus.axpy(-1.0, &plus), &pxf) < 1e-12);

        // helmholtz commutes with the derivative
        let a = helmholtz_inverse(&grid, lam, &spectral_derivative(&grid, &f, 1).unwrap()).unwrap();
        let b = spectral_derivative(&grid, &helmholtz_inverse(&grid, lam, &f).unwrap(), 1).unwrap();
        prop_assert!(max_abs_diff(&a, &b) < 1e-12);
    }

    #[test]
    fn linear_operators_superpose(
        c1 in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 8),
        c2 in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 8),
        scale in -3.0f64..3.0f64,
    ) {
        let grid = PeriodicGrid::new(L, 128).unwrap();
        let f1 = band_limited(&grid, &c1);
        let f2 = band_limited(&grid, &c2);
        let combo = f1.axpy(scale, &f2);
        for order in 1..=3usize {
            let lhs = spectral_derivative(&grid, &combo, order).unwrap();
            let rhs = spectral_derivative(&grid, &f1, order)
                .unwrap()
                .axpy(scale, &spectral_derivative(&grid, &f2, order).unwrap());
            prop_assert!(max_abs_diff(&lhs, &rhs) < 1e-10);
        }
        let (lp, lm) = conv_half_kernels(&grid, &combo).unwrap();
        let (p1, m1) = conv_half_kernels(&grid, &f1).unwrap();
        let (p2, m2) = conv_half_kernels(&grid, &f2).unwrap();
        prop_assert!(max_abs_diff(&lp, &p1.axpy(scale, &p2)) < 1e-12);
        prop_assert!(max_abs_diff(&lm, &m1.axpy(scale, &m2)) < 1e-12);
    }

    #[test]
    fn dealiased_product_is_multilinear_in_each_slot(
        c1 in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 6),
        c2 in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 6),
        c3 in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 6),
        scale in -2.0f64..2.0f64,
    ) {
        let grid = PeriodicGrid::new(L, 128).unwrap();
        let f1 = band_limited(&grid, &c1);
        let f2 = band_limited(&grid, &c2);
        let f3 = band_limited(&grid, &c3);
        let combo = f1.axpy(scale, &f2);
        let lhs = dealiased_product(&grid, &[&combo, &f3]).unwrap();
        let rhs = dealiased_product(&grid, &[&f1, &f3])
            .unwrap()
            .axpy(scale, &dealiased_product(&grid, &[&f2, &f3]).unwrap());
        prop_assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn scale_map_roundtrips(
        coeffs in prop::collection::vec((-0.5f64..0.5, -0.5f64..0.5), 6),
        omega in 0.0f64..1.2f64,
        t in 0.0f64..10.0f64,
    ) {
        let p = derive_params(omega, 0.1, 0.01).unwrap();
        let grid = PeriodicGrid::new(L, 64).unwrap();
        let state = WaveState {
            grid,
            u: band_limited(&grid, &coeffs),
            t,
            scaling: Scaling::Normalized,
        };
        let back = scale_map_inverse(&p, &scale_map(&p, &state).unwrap()).unwrap();
        prop_assert!((back.grid.length() - grid.length()).abs() < 1e-9);
        prop_assert!((back.t - t).abs() < 1e-12 * t.max(1.0));
        prop_assert!(max_abs_diff(&back.u, &state.u) < 1e-13);
    }
}
