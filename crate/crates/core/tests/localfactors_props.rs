mod common;

use num_complex::Complex64;
use period_invariant::localfactors::{self, SatakeData};
use proptest::prelude::*;

const SMALL_PRIMES: [u64; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];

fn unitary() -> impl Strategy<Value = SatakeData> {
    (
        prop::sample::select(SMALL_PRIMES.to_vec()),
        0.0..std::f64::consts::PI,
    )
        .prop_map(|(p, th)| SatakeData::from_angle(p, th).unwrap())
}

proptest! {
    #![proptest_config(common::proptest_config(500))]

    #[test]
    fn lambda_l_identity(d in unitary()) {
        let r = localfactors::normalized_factor(&d).unwrap();
        let rhs = 1.0 - r.q_term;
        // Both sides vanish at p = 3, t = 2; scale by the terms of 1 - Q.
        prop_assert!((r.normalized - rhs).abs() <= 1e-13 * (1.0 + r.q_term.abs()));
    }

    #[test]
    fn adjoint_matches_alpha_product(d in unitary()) {
        let alpha = common::alpha_from_t(d.t);
        let want = common::sym_power_from_alpha(alpha, d.p, 1, 1.0);
        let got = localfactors::adjoint_l_local(&d).unwrap();
        prop_assert!(want.im.abs() < 1e-12);
        prop_assert!((got - want.re).abs() < 1e-12 * want.re);
    }

    #[test]
    fn lambda_from_alpha(d in unitary()) {
        let a = common::alpha_from_t(d.t);
        let want = Complex64::new(1.0, 0.0) - (a * a + 1.0 + (a * a).inv()) / d.p as f64;
        prop_assert!((localfactors::lambda_p(&d) - want.re).abs() < 1e-13);
    }

    #[test]
    fn sym_power_matches_alpha_product(d in unitary(), l in 0usize..8, s in 0.5f64..4.0) {
        let alpha = common::alpha_from_t(d.t);
        let want = common::sym_power_from_alpha(alpha, d.p, l, s);
        let got = localfactors::sym_power_l_local(&d, l, s).unwrap();
        prop_assert!((got - want.re).abs() < 1e-10 * want.re.abs());
    }

    #[test]
    fn sym_one_is_adjoint(d in unitary()) {
        prop_assert_eq!(
            localfactors::sym_power_l_local(&d, 1, 1.0).unwrap(),
            localfactors::adjoint_l_local(&d).unwrap()
        );
    }

    #[test]
    fn whittaker_matches_alpha_formula(d in unitary()) {
        let a = common::alpha_from_t(d.t);
        let w = localfactors::whittaker_unramified(&d, 12);
        for (n, wn) in w.iter().enumerate() {
            let num: Complex64 = (0..=n).map(|j| a.powi(n as i32 - 2 * j as i32)).sum();
            let want = num.re * (d.p as f64).powf(-(n as f64) / 2.0);
            prop_assert!((wn - want).abs() < 1e-12, "n = {}", n);
        }
    }

    #[test]
    fn hecke_zeta_converges(d in unitary(), x in -0.95f64..0.95) {
        let x = x * (d.p as f64).sqrt();
        let closed = localfactors::local_hecke_closed_form(&d, x).unwrap();
        let partial = localfactors::local_hecke_zeta_sum(&d, x, 2000).unwrap();
        prop_assert!((partial - closed).abs() < 1e-12 * closed.abs().max(1.0));
    }

    #[test]
    fn satake_construction_round_trips(d in unitary()) {
        let again = SatakeData::new(d.p, d.t).unwrap();
        prop_assert_eq!(again.s2, d.t * d.t - 2.0);
        prop_assert!(again.is_unitary());
    }
}

#[test]
fn hecke_zeta_rejects_divergent_region() {
    let d = SatakeData::new(5, 1.0).unwrap();
    let edge = 5f64.sqrt();
    assert!(localfactors::local_hecke_zeta_sum(&d, edge, 10).is_err());
    assert!(localfactors::local_hecke_closed_form(&d, -edge * 1.01).is_err());
}
