use proptest::prelude::*;

use smallball::asymptotics::{
    chaos_sup_constant, sup_bm_cdf, tauberian_forward, tauberian_inverse, tsb_constant,
    weighted_sum_constant, AsymptoticOrder, Partition, WeightSequenceSpec,
};

proptest! {
    #[test]
    fn tauberian_round_trip(alpha in 0.01f64..20.0, beta in -5.0f64..5.0, k in 1e-3f64..1e3) {
        let o = AsymptoticOrder::new(alpha, beta, k).unwrap();
        let back = tauberian_inverse(&tauberian_forward(&o));
        prop_assert!((back.alpha() - alpha).abs() <= 1e-12 * alpha.max(1.0));
        prop_assert!((back.beta() - beta).abs() <= 1e-12 * beta.abs().max(1.0));
        prop_assert!((back.big_k() - k).abs() <= 1e-11 * k);
    }

    #[test]
    fn laplace_constant_scales_as_a_power_of_k(alpha in 0.1f64..5.0, beta in -2.0f64..2.0, k in 0.01f64..10.0, c in 0.1f64..10.0) {
        let l1 = tauberian_forward(&AsymptoticOrder::new(alpha, beta, k).unwrap()).big_l();
        let l2 = tauberian_forward(&AsymptoticOrder::new(alpha, beta, c * k).unwrap()).big_l();
        let expected = c.powf(1.0 / (1.0 + alpha));
        prop_assert!((l2 / l1 - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn sup_constant_is_additive_under_refinement(w in 0.1f64..4.0, t in 0.1f64..3.0, b in 0.5f64..3.0, split in 0.05f64..0.95) {
        let whole = Partition::single(t).unwrap().with_windows(vec![(0.0, b)]).unwrap();
        let k: Vec<f64> = [split * t, (1.0 - split) * t].iter().map(|dt| 0.125 * w * w * dt * dt).collect();
        let refined = tsb_constant(1.0, 0.0, &k, &[b, b]).unwrap();
        prop_assert!((refined - chaos_sup_constant(w, &whole).unwrap()).abs() <= 1e-12 * refined);
    }

    #[test]
    fn sup_cdf_is_monotone(x in 0.05f64..4.0, dx in 1e-3f64..1.0) {
        let a = sup_bm_cdf(x).unwrap();
        let b = sup_bm_cdf(x + dx).unwrap();
        prop_assert!(a <= b);
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn geometric_weighted_sum_closed_form(lead in 0.1f64..3.0, ratio in 0.05f64..0.9, alpha in 0.2f64..3.0, k in 0.05f64..2.0) {
        let base = AsymptoticOrder::new(alpha, 0.0, k).unwrap();
        let got = weighted_sum_constant(&base, &WeightSequenceSpec::geometric(lead, ratio).unwrap()).unwrap();
        let e = alpha / (1.0 + alpha);
        let want = k * lead.powf(alpha) / (1.0 - ratio.powf(e)).powf(1.0 + alpha);
        prop_assert!((got - want).abs() <= 1e-10 * want);
    }
}
