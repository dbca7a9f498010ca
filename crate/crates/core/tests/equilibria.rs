#![allow(clippy::needless_range_loop)]

mod common;

use common::{brute_force_nash, is_best_response_pair, random_game, random_influence};
use fgame_core::game::{is_f_equilibrium, pure_f_equilibria, Profile};
use fgame_core::influence::{mixed_utilities, InfluenceMatrix};
use fgame_core::mixed::{mixed_equilibria_2x2, Shape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn pure_equilibria_match_brute_force_nash() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..500 {
        let n = rng.gen_range(1..=3);
        let counts: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
        let game = random_game(&mut rng, &counts, k % 2 == 0);
        let got = pure_f_equilibria(&game, &InfluenceMatrix::zeros(n)).unwrap();
        assert_eq!(got, brute_force_nash(&game), "{game:?}");
    }
}

#[test]
fn returned_profiles_satisfy_d4_under_influence() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let n = rng.gen_range(2..=3);
        let counts: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
        let game = random_game(&mut rng, &counts, false);
        let f = random_influence(&mut rng, n, false);
        let c = game.colonize(&f).unwrap();
        let eq = pure_f_equilibria(&game, &f).unwrap();
        for p in game.profiles() {
            let here = mixed_utilities(&c, &game.pure_utilities(&p)).unwrap();
            let stable = (0..n).all(|i| {
                (0..counts[i])
                    .all(|s| mixed_utilities(&c, &game.pure_utilities(&p.deviate(i, s))).unwrap()[i] <= here[i] + 1e-9)
            });
            assert_eq!(stable, eq.contains(&p));
            assert_eq!(stable, is_f_equilibrium(&game, &c, &p));
        }
    }
}

#[test]
fn nondegenerate_games_have_odd_equilibrium_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..500 {
        let game = random_game(&mut rng, &[2, 2], false);
        let set = mixed_equilibria_2x2(&game, &InfluenceMatrix::zeros(2)).unwrap();
        assert!(set.components.iter().all(|c| c.is_isolated()));
        assert_eq!(set.components.len() % 2, 1, "{game:?}");
    }
}

#[test]
fn equilibria_are_best_responses_under_random_influence() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for k in 0..800 {
        let counts = [rng.gen_range(1..=2), rng.gen_range(1..=2)];
        let game = random_game(&mut rng, &counts, k % 2 == 0);
        let f = if k % 4 == 0 { InfluenceMatrix::zeros(2) } else { random_influence(&mut rng, 2, false) };
        let c = game.colonize(&f).unwrap();
        let set = mixed_equilibria_2x2(&game, &f).unwrap();
        assert!(!set.components.is_empty());
        for comp in &set.components {
            let probes: Vec<(f64, f64)> = match &comp.shape {
                Shape::Point(p, q) => vec![(*p, *q)],
                Shape::Segments(segs) => segs.iter().flat_map(|s| [s.at(0.0), s.at(0.37), s.at(1.0)]).collect(),
                Shape::Region { p, q } => vec![(p.0, q.0), (p.1, q.1), (0.3, 0.8)],
            };
            for (p, q) in probes {
                assert!((0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&q));
                assert!(is_best_response_pair(&game, &c, p, q), "{game:?} {f:?} at ({p}, {q})");
            }
        }
        for pts in set.isolated_points() {
            for probs in &pts {
                assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                assert!(probs.iter().all(|&x| x >= 0.0));
            }
        }
        // every pure F-equilibrium shows up inside some component
        for prof in pure_f_equilibria(&game, &f).unwrap() {
            let (p, q) = (if prof.0[0] == 0 { 1.0 } else { 0.0 }, if prof.0[1] == 0 { 1.0 } else { 0.0 });
            let covered = set.components.iter().any(|comp| match &comp.shape {
                Shape::Point(a, b) => (a - p).abs() < 1e-9 && (b - q).abs() < 1e-9,
                Shape::Segments(segs) => segs.iter().any(|s| {
                    let (lo0, hi0) = (s.start.0.min(s.end.0), s.start.0.max(s.end.0));
                    let (lo1, hi1) = (s.start.1.min(s.end.1), s.start.1.max(s.end.1));
                    p >= lo0 - 1e-9 && p <= hi0 + 1e-9 && q >= lo1 - 1e-9 && q <= hi1 + 1e-9
                }),
                Shape::Region { .. } => true,
            });
            assert!(covered, "{game:?} {prof:?}");
        }
    }
}

#[test]
fn pd_flip_threshold() {
    let game = fgame_core::game::catalog::prisoners_dilemma();
    // c = f / (1 + f) for symmetric influence; c = 1/6 at f = 1/5
    for (f, want) in [(0.15, "DR"), (0.25, "UL")] {
        let m = InfluenceMatrix::new(vec![vec![0.0, f], vec![f, 0.0]]).unwrap();
        assert_eq!(pure_f_equilibria(&game, &m).unwrap(), vec![Profile::from_label(want).unwrap()]);
    }
}
