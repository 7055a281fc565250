use netrecon::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

const T: f64 = 10.0;

fn spans() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0..T, 0.0..3.0f64), 0..6)
}

fn set(v: &[(f64, f64)]) -> IntervalSet {
    IntervalSet::from_spans(v.iter().map(|&(a, l)| Interval::new(a, (a + l).min(T))))
}

fn d(a: &IntervalSet, b: &IntervalSet) -> f64 {
    interval_symmetric_difference_measure(a, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn symmetric_difference_is_a_metric(a in spans(), b in spans(), c in spans()) {
        let (a, b, c) = (set(&a), set(&b), set(&c));
        prop_assert!(d(&a, &b) >= 0.0);
        prop_assert!((d(&a, &b) - d(&b, &a)).abs() <= 1e-12);
        prop_assert!(d(&a, &a).abs() <= 1e-12);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12);
    }

    #[test]
    fn measure_zero_additions_are_invisible(a in spans(), p in 0.0..T) {
        let a = set(&a);
        let with_point = interval_union(&a, &IntervalSet::from_spans([Interval::new(p, p)]));
        prop_assert!(d(&a, &with_point).abs() <= 1e-12);
    }

    #[test]
    fn union_and_intersection_measures(a in spans(), b in spans()) {
        let (a, b) = (set(&a), set(&b));
        let u = interval_union(&a, &b);
        let i = a.intersection(&b);
        prop_assert!((u.measure() + i.measure() - a.measure() - b.measure()).abs() <= 1e-9);
        prop_assert!((d(&a, &b) - (u.measure() - i.measure())).abs() <= 1e-9);
        prop_assert!(u.spans().windows(2).all(|p| p[0].end < p[1].start));
    }
}

#[test]
fn symmetric_difference_matches_monte_carlo() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
            let v: Vec<(f64, f64)> = (0..4).map(|_| (rng.random_range(0.0..T), rng.random_range(0.0..3.0))).collect();
            set(&v)
        };
        let a = mk(&mut rng);
        let b = mk(&mut rng);
        let samples = 200_000;
        let hits = (0..samples)
            .filter(|_| {
                let t = rng.random_range(0.0..T);
                a.contains(t) != b.contains(t)
            })
            .count();
        let estimate = T * hits as f64 / samples as f64;
        // binomial standard error is at most T / (2√samples) ≈ 0.011
        assert!((estimate - d(&a, &b)).abs() < 0.05, "{estimate} vs {}", d(&a, &b));
    }
}
