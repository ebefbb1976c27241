mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use teamneg_core::{iso_offer, iso_offer_dual, Offer, Orientation, UtilityProfile};

struct Query {
    profile: UtilityProfile,
    target: f64,
    a: Vec<f64>,
    b: Vec<f64>,
}

fn random_query(n: usize, rng: &mut ChaCha8Rng) -> Query {
    let profile = UtilityProfile::new(common::simplex_weights(n, rng), common::random_kinds(n, rng), 0.0).unwrap();
    Query {
        profile,
        target: rng.random::<f64>(),
        a: common::random_point(n, rng),
        b: common::random_point(n, rng),
    }
}

fn steps(n: usize) -> usize {
    if n == 2 { 20_000 } else { 300 }
}

#[test]
fn single_reference_beats_every_feasible_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x150);
    for n in [2, 3] {
        for _ in 0..100 {
            let q = random_query(n, &mut rng);
            let x = iso_offer(&q.profile, q.target, &Offer::new(q.a.clone()).unwrap());
            assert!((common::utility(q.profile.weights(), q.profile.kinds(), x.values()) - q.target).abs() <= 1e-6);
            let got = common::similarity(x.values(), &q.a);
            let mut best = f64::NEG_INFINITY;
            common::for_each_exact_iso_point(&q.profile, q.target, steps(n), |p| {
                best = best.max(common::similarity(p, &q.a))
            });
            assert!(got >= best - 1e-9, "n={n} got {got} oracle {best}");
        }
    }
}

#[test]
fn dual_reference_beats_every_feasible_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x151);
    for n in [2, 3] {
        for _ in 0..100 {
            let q = random_query(n, &mut rng);
            let x = iso_offer_dual(
                &q.profile,
                q.target,
                &Offer::new(q.a.clone()).unwrap(),
                &Offer::new(q.b.clone()).unwrap(),
            );
            assert!((common::utility(q.profile.weights(), q.profile.kinds(), x.values()) - q.target).abs() <= 1e-6);
            let got = common::similarity(x.values(), &q.a) * common::similarity(x.values(), &q.b);
            let mut best = f64::NEG_INFINITY;
            common::for_each_exact_iso_point(&q.profile, q.target, steps(n), |p| {
                best = best.max(common::similarity(p, &q.a) * common::similarity(p, &q.b))
            });
            assert!(got >= best * (1.0 - 1e-4), "n={n} got {got} oracle {best}");
        }
    }
}

#[test]
fn symmetric_dual_references() {
    let profile = UtilityProfile::new(vec![0.5, 0.5], vec![Orientation::Increasing; 2], 0.0).unwrap();
    let a = vec![0.0, 0.0];
    let b = vec![1.0, 1.0];
    let x = iso_offer_dual(&profile, 0.5, &Offer::new(a.clone()).unwrap(), &Offer::new(b.clone()).unwrap());
    let got = common::similarity(x.values(), &a) * common::similarity(x.values(), &b);
    assert!(got >= common::grid_best_product(&profile, 0.5, &a, &b) * 0.98);
}

#[test]
fn worked_example_against_grid() {
    let profile = UtilityProfile::new(vec![0.5, 0.3, 0.2], vec![Orientation::Increasing; 3], 0.0).unwrap();
    let r = vec![1.0, 1.0, 1.0];
    let x = iso_offer(&profile, 0.6, &Offer::new(r.clone()).unwrap());
    let got = common::similarity(x.values(), &r);
    assert!(got >= common::grid_best_similarity(&profile, 0.6, &r) - 0.02);
}

#[test]
fn outputs_stay_on_the_iso_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x152);
    for _ in 0..10_000 {
        let n = rng.random_range(1..=6);
        let q = random_query(n, &mut rng);
        let a = Offer::new(q.a).unwrap();
        let b = Offer::new(q.b).unwrap();
        for x in [iso_offer(&q.profile, q.target, &a), iso_offer_dual(&q.profile, q.target, &a, &b)] {
            assert!(x.values().iter().all(|v| (0.0..=1.0).contains(v)));
            assert!((q.profile.utility(x.values()) - q.target).abs() <= 1e-6);
        }
        assert_eq!(iso_offer_dual(&q.profile, q.target, &a, &b), iso_offer_dual(&q.profile, q.target, &a, &b));
    }
}
