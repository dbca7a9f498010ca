#![allow(clippy::needless_range_loop)]

mod common;

use common::random_game;
use fgame_core::game::{catalog::*, StrategicGame};
use fgame_core::landowner::pure_utilities;
use fgame_core::power::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn quick() -> PowerOptions {
    PowerOptions { resolution: 20, tol: 1e-7 }
}

fn scale_all(g: &StrategicGame, k: f64) -> StrategicGame {
    g.map_payoffs(0, |v| k * v).map_payoffs(1, |v| k * v)
}

#[test]
fn normalized_power_ignores_constant_shifts() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..25 {
        let g = random_game(&mut rng, &[2, 2], false);
        let k = rng.gen_range(-50.0..50.0);
        for (s, t) in [(0, 1), (1, 0)] {
            let shifted = g.map_payoffs(t, |v| v + k);
            let a = potential_power_with(&g, s, t, &quick()).unwrap();
            let b = potential_power_with(&shifted, s, t, &quick()).unwrap();
            assert!((a.power - b.power).abs() < 1e-6, "{} vs {}", a.power, b.power);
            match (a.normalized, b.normalized) {
                (Some(x), Some(y)) => assert!((x - y).abs() < 1e-8),
                (x, y) => assert_eq!(x, y),
            }
        }
    }
}

#[test]
fn scaling_every_payoff_scales_power() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..25 {
        let g = random_game(&mut rng, &[2, 2], false);
        let a = potential_power_with(&g, 0, 1, &quick()).unwrap();
        let b = potential_power_with(&scale_all(&g, 2.0), 0, 1, &quick()).unwrap();
        assert!((b.power - 2.0 * a.power).abs() < 1e-5 * (1.0 + a.power));
        if let (Some(x), Some(y)) = (a.normalized, b.normalized) {
            assert!((x - y).abs() < 1e-7);
        }
    }
}

/// Doubling only the target's payoffs doubles the welfare but also doubles
/// the source's effective weight ratio `f / (1 − |f|)`, so the curve is
/// reparametrized rather than scaled.
#[test]
fn scaling_target_payoffs_reparametrizes_curve() {
    let phi = |f: f64| {
        let r = 2.0 * f / (1.0 - f.abs());
        r / (1.0 + r.abs())
    };
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    for _ in 0..25 {
        let g = random_game(&mut rng, &[2, 2], false);
        let doubled = g.map_payoffs(1, |v| 2.0 * v);
        for k in 1..20 {
            let f = -0.95 + 0.1 * f64::from(k) - 0.0123;
            let lhs = welfare_at(&doubled, 0, 1, f).unwrap();
            let rhs = 2.0 * welfare_at(&g, 0, 1, phi(f)).unwrap();
            assert!((lhs - rhs).abs() < 1e-8, "f = {f}: {lhs} vs {rhs}");
        }
    }
    // the Lutheran step is sign-preserving under the reparametrization
    let g = lutheran();
    let a = potential_power(&g, 1, 0).unwrap();
    let b = potential_power(&g.map_payoffs(0, |v| 2.0 * v), 1, 0).unwrap();
    assert!((b.power - 2.0 * a.power).abs() < 1e-6);
    assert!((b.normalized().unwrap() - a.normalized().unwrap()).abs() < 1e-9);
}

#[test]
fn symmetric_games_have_symmetric_power() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let mut games = vec![prisoners_dilemma(), coordination()];
    for _ in 0..15 {
        let m: Vec<Vec<f64>> = (0..2).map(|_| (0..2).map(|_| rng.gen_range(-10.0..10.0)).collect()).collect();
        let t = vec![vec![m[0][0], m[1][0]], vec![m[0][1], m[1][1]]];
        games.push(StrategicGame::bimatrix(m, t).unwrap());
    }
    for g in &games {
        let a = potential_power_with(g, 0, 1, &quick()).unwrap();
        let b = potential_power_with(g, 1, 0, &quick()).unwrap();
        assert!((a.power - b.power).abs() < 1e-6, "{} vs {}", a.power, b.power);
    }
}

#[test]
fn constant_target_payoffs_give_a_flat_curve() {
    let mut rng = ChaCha8Rng::seed_from_u64(59);
    for _ in 0..10 {
        let g = random_game(&mut rng, &[2, 2], false).map_payoffs(1, |_| 3.5);
        let r = potential_power_with(&g, 0, 1, &quick()).unwrap();
        assert!(r.curve.samples.iter().all(|s| s.1.abs() < 1e-12));
        assert!(r.power < 1e-11);
        assert!(r.curve.discontinuities.is_empty());
        assert!(matches!(r.normalized(), Err(PowerError::UnboundedRange)));
    }
}

#[test]
fn landowner_sympathy_curve() {
    // peasant 1's sympathy for peasant 2
    let r = landowner_power_curve(2, 20.0, 1.0, 1, 2, &PowerOptions::default()).unwrap();
    assert!(r.curve.discontinuities.is_empty());
    assert!(r.normalized.is_none());
    let baseline = 361.0 / 9.0;
    let oracle = |f: f64| {
        let q1 = if f >= 0.5 {
            0.0
        } else if f >= 0.0 {
            19.0 * (1.0 - 2.0 * f) / (3.0 - 4.0 * f)
        } else {
            19.0 / (3.0 + 2.0 * f)
        };
        let q2 = (19.0 - q1) / 2.0;
        pure_utilities(20.0, 1.0, &[q1, q2])[2] - baseline
    };
    for w in r.curve.samples.windows(2) {
        assert!(w[1].1 >= w[0].1 - 1e-12);
    }
    for &(f, y) in &r.curve.samples {
        assert!((y - oracle(f)).abs() < 1e-9, "f = {f}");
    }
    assert!(r.positive_side > -r.negative_side);
    assert!((r.power - (r.positive_side - r.negative_side)).abs() < 1e-6);
}
