#![allow(clippy::needless_range_loop)]

mod common;

use common::best_response_oracle;
use fgame_core::influence::colonization;
use fgame_core::landowner::*;
use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const A: f64 = 20.0;
const COST: f64 = 1.0;

fn solve(s: &LandownerScenario) -> LaborEquilibrium {
    landowner_equilibrium(s).unwrap()
}

fn free(n: usize) -> LaborEquilibrium {
    solve(&scenario_free(n, A, COST).unwrap())
}

/// No own-quantity perturbation on a 1e-4 grid improves a peasant's mixed
/// utility by more than 1e-6.
fn assert_unilaterally_stable(s: &LandownerScenario, e: &LaborEquilibrium) {
    let c = colonization(&s.influence).unwrap();
    for k in 0..s.n_peasants {
        let base = mixed_utility(&c, s.a, s.cost, k + 1, &e.quantities);
        for step in -200i32..=200 {
            let mut q = e.quantities.clone();
            q[k] += f64::from(step) * 1e-4;
            if q[k] < 0.0 {
                continue;
            }
            let v = mixed_utility(&c, s.a, s.cost, k + 1, &q);
            assert!(v <= base + 1e-6, "peasant {} gains {} by moving {}", k + 1, v - base, f64::from(step) * 1e-4);
        }
        // a coarse sweep over the whole admissible range
        for x in 0..=200 {
            let mut q = e.quantities.clone();
            q[k] = f64::from(x) * 0.1;
            assert!(mixed_utility(&c, s.a, s.cost, k + 1, &q) <= base + 1e-6);
        }
    }
}

#[test]
fn free_system_matches_cournot_closed_form() {
    for n in 1..=8 {
        let e = free(n);
        let q = (A - COST) / (n as f64 + 1.0);
        assert!(e.quantities.iter().all(|&x| (x - q).abs() < 1e-9), "n = {n}");
        assert!((e.wage - (A - n as f64 * q)).abs() < 1e-9);
    }
}

#[test]
fn solver_agrees_with_best_response_iteration() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let scenarios = vec![
        scenario_free(4, A, COST).unwrap(),
        scenario_union(4, A, COST, &[1, 2], 0.8).unwrap(),
        scenario_union(4, A, COST, &[1, 2, 3, 4], 0.3).unwrap(),
        scenario_dominion(4, A, COST, &[1], 0.8).unwrap(),
        scenario_dominion(4, A, COST, &[1, 2, 3, 4], 0.8).unwrap(),
        scenario_union_vs_dominion(4, A, COST, 0.2, 0.3).unwrap(),
    ];
    let mut all = scenarios;
    for _ in 0..40 {
        let n = rng.gen_range(1..=5);
        let w = rng.gen_range(0.0..0.9);
        let mut subjects: Vec<usize> = (1..=n).collect();
        subjects.shuffle(&mut rng);
        subjects.truncate(rng.gen_range(0..=n));
        all.push(scenario_dominion(n, A, COST, &subjects, w).unwrap());
    }
    for s in &all {
        let e = solve(s);
        let c = colonization(&s.influence).unwrap();
        let oracle = best_response_oracle(&c.to_rows(), s.a, s.cost, s.n_peasants);
        for (x, y) in e.quantities.iter().zip(&oracle) {
            assert!((x - y).abs() < 1e-9, "{s:?}: {:?} vs {oracle:?}", e.quantities);
        }
        assert_unilaterally_stable(s, &e);
    }
}

#[test]
fn qualitative_orderings() {
    let base = free(4);
    let u = |e: &LaborEquilibrium, i: usize| e.pure_utilities[i];

    let partial = solve(&scenario_union(4, A, COST, &[1, 2], 0.8).unwrap());
    for i in [1, 2] {
        assert!(u(&partial, i) < u(&base, i));
    }
    for i in [3, 4] {
        assert!(u(&partial, i) > u(&base, i));
    }
    assert!(partial.wage > base.wage && partial.total < base.total);

    let full = solve(&scenario_union(4, A, COST, &[1, 2, 3, 4], 0.3).unwrap());
    assert!(full.wage > base.wage && full.total < base.total);

    let single = solve(&scenario_dominion(4, A, COST, &[1], 0.8).unwrap());
    assert!(u(&single, 1) > u(&base, 1));
    assert!((2..=4).all(|i| u(&single, i) < u(&base, i)));
    assert!(single.wage < base.wage);

    let hierarchy = solve(&scenario_dominion(4, A, COST, &[1, 2, 3, 4], 0.8).unwrap());
    assert!((1..=4).all(|i| u(&hierarchy, i) < u(&base, i)));
    assert!(hierarchy.total > base.total);
}

#[test]
fn union_and_dominion_cancel() {
    let base = free(4);
    let d = balancing_dominion_weight(4, A, COST, 0.2).unwrap();
    let e = solve(&scenario_union_vs_dominion(4, A, COST, 0.2, d).unwrap());
    assert!((e.wage - base.wage).abs() <= 0.05 * base.wage);
    assert!(d > 0.0 && d < 0.4);
    // both forces at zero is the free system
    assert_eq!(scenario_union_vs_dominion(4, A, COST, 0.0, 0.0).unwrap(), scenario_free(4, A, COST).unwrap());
    // union only is the full union scenario
    assert_eq!(
        scenario_union_vs_dominion(4, A, COST, 0.3, 0.0).unwrap(),
        scenario_union(4, A, COST, &[1, 2, 3, 4], 0.3).unwrap()
    );
}

#[test]
fn permutation_equivariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..50 {
        let n = rng.gen_range(2..=5);
        let mut edges = Vec::new();
        for i in 1..=n {
            let budget = rng.gen_range(0.0..0.9);
            let src = rng.gen_range(0..=n);
            if src != i {
                edges.push((src, i, budget * if rng.gen_bool(0.7) { 1.0 } else { -1.0 }));
            }
        }
        let s = LandownerScenario::with_edges(A, COST, n, edges.clone()).unwrap();
        let mut perm: Vec<usize> = (1..=n).collect();
        perm.shuffle(&mut rng);
        // node k maps to perm[k-1]; the landowner stays at 0
        let map = |k: usize| if k == 0 { 0 } else { perm[k - 1] };
        let moved =
            LandownerScenario::with_edges(A, COST, n, edges.iter().map(|&(j, i, w)| (map(j), map(i), w))).unwrap();
        let (Ok(e1), Ok(e2)) = (landowner_equilibrium(&s), landowner_equilibrium(&moved)) else { continue };
        for k in 1..=n {
            assert!((e1.quantities[k - 1] - e2.quantities[map(k) - 1]).abs() < 1e-9);
        }
    }
}

#[test]
fn negative_influence_handled() {
    // peasant 1 resents the landowner and works less
    let s = LandownerScenario::with_edges(A, COST, 2, [(0, 1, -0.5)]).unwrap();
    let e = solve(&s);
    assert!(e.quantities[0] < e.quantities[1]);
    assert_unilaterally_stable(&s, &e);
}
