use std::collections::BTreeSet;

use proptest::prelude::*;
use topodyn::entourage::smooth_gauge;
use topodyn::{CompactWitness, Entourage, Metric, Region};

fn relation(n: u32, extra: Vec<(u32, u32)>) -> Entourage<u32> {
    let mut pairs: BTreeSet<(u32, u32)> = (0..n).map(|i| (i, i)).collect();
    pairs.extend(extra.into_iter().map(|(a, b)| (a % n, b % n)));
    Entourage::finite("F", pairs)
}

fn gauge() -> Entourage<f64> {
    Entourage::gauge("R", "wave", Metric::real(), |x: &f64| 0.05 + 0.5 * (1.0 + x.sin()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn operations_keep_the_diagonal(n in 1u32..8, extra in prop::collection::vec((0u32..8, 0u32..8), 0..20), k in 1usize..4) {
        let u = relation(n, extra);
        let samples: Vec<u32> = (0..n).collect();
        let all = samples.clone();
        let witness = CompactWitness::new(vec![Region::new("all", 1.0, move |x: &u32| all.contains(x))]);
        let ops = [
            u.transpose(),
            u.symmetrize(),
            u.compose_n(k, &samples).unwrap(),
            u.proper_restrict(&witness).unwrap(),
        ];
        for v in &ops {
            prop_assert!(v.contains_diagonal_on(&samples));
        }
    }

    #[test]
    fn symmetrize_is_its_own_transpose_on_relations(n in 1u32..8, extra in prop::collection::vec((0u32..8, 0u32..8), 0..20)) {
        let s = relation(n, extra).symmetrize();
        let t = s.transpose();
        for a in 0..n {
            for b in 0..n {
                prop_assert_eq!(s.contains(&a, &b), t.contains(&a, &b));
            }
        }
    }

    #[test]
    fn symmetrize_is_its_own_transpose_on_gauges(pairs in prop::collection::vec((-5.0f64..5.0, -1.0f64..1.0), 200)) {
        let s = gauge().symmetrize();
        let t = s.transpose();
        for (x, dy) in pairs {
            let y = x + dy;
            prop_assert_eq!(s.contains(&x, &y), t.contains(&x, &y));
            let want = (x - y).abs() < (0.05 + 0.5 * (1.0 + x.sin())).min(0.05 + 0.5 * (1.0 + y.sin()));
            prop_assert_eq!(s.contains(&x, &y), want);
        }
    }

    #[test]
    fn composition_powers_nest(n in 2u32..7, extra in prop::collection::vec((0u32..7, 0u32..7), 0..12), m in 1usize..3, k in 1usize..3) {
        let u = relation(n, extra);
        let samples: Vec<u32> = (0..n).collect();
        let um = u.compose_n(m, &samples).unwrap();
        let uk = u.compose_n(k, &samples).unwrap();
        let umk = u.compose_n(m + k, &samples).unwrap();
        for a in 0..n {
            for c in 0..n {
                let through = (0..n).any(|b| um.contains(&a, &b) && uk.contains(&b, &c));
                prop_assert!(!through || umk.contains(&a, &c));
            }
        }
    }

    #[test]
    fn smooth_gauge_is_positive_below_h_and_lipschitz(width in 0.05f64..0.5, count in 5usize..40) {
        let samples: Vec<f64> = (0..count).map(|i| -2.0 + 4.0 * i as f64 / (count - 1) as f64).collect();
        let u = Entourage::gauge("R", "bump", Metric::real(), move |x: &f64| width * (1.0 + x * x).recip() + 0.3);
        let g = smooth_gauge(&u, &samples, &Metric::real()).unwrap();
        for (i, x) in samples.iter().enumerate() {
            let d = g.value(x);
            prop_assert!(d > 0.0);
            prop_assert!(d < g.profile()[i]);
            for y in &samples {
                prop_assert!((d - g.value(y)).abs() <= (x - y).abs() + 1e-12);
            }
        }
    }
}

#[test]
fn exponential_gauge_contains_no_uniform_ball() {
    let u = Entourage::gauge("R", "exp(-x^2)", Metric::real(), |x: &f64| (-x * x).exp());
    for delta in [0.5, 0.1, 1e-3, 1e-6, 1e-12] {
        let x: f64 = (1.0f64 / delta).ln().sqrt() + 0.01;
        let h = (-x * x).exp();
        assert!(h < delta);
        // a pair inside the delta-ball but outside U
        let y = x + 0.5 * (h + delta);
        assert!((y - x) < delta && !u.contains(&x, &y));
    }
}
