//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use fgame_core::game::{Profile, StrategicGame};
use fgame_core::influence::{mixed_utilities, ColonizationMatrix, InfluenceMatrix};
use rand::Rng;

/// Random valid influence matrix with mixed signs. Each column's budget is
/// drawn in `[0, 0.95)` and split over the off-diagonal entries.
pub fn random_influence<R: Rng>(rng: &mut R, n: usize, nonnegative: bool) -> InfluenceMatrix {
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        let budget = rng.gen_range(0.0..0.95);
        let raw: Vec<f64> = (0..n).map(|j| if j == i { 0.0 } else { rng.gen_range(0.0..1.0) }).collect();
        let total: f64 = raw.iter().sum();
        for j in 0..n {
            if j != i && total > 0.0 {
                let sign = if nonnegative || rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                rows[j][i] = sign * budget * raw[j] / total;
            }
        }
    }
    InfluenceMatrix::new(rows).expect("constructed within budget")
}

/// Partial colonization by plain fixed-point iteration of the mixing rule
/// `U_i = Σ_k f_{k,i} U_k + (1 − Σ_k |f_{k,i}|) u_i`, tracked in the basis of
/// pure utilities.
pub fn partial_by_iteration(f: &InfluenceMatrix) -> Vec<Vec<f64>> {
    let n = f.n();
    let free: Vec<f64> = (0..n).map(|i| 1.0 - (0..n).map(|k| f.get(k, i).abs()).sum::<f64>()).collect();
    let mut p = vec![vec![0.0; n]; n];
    for _ in 0..20_000 {
        let mut next = vec![vec![0.0; n]; n];
        let mut change = 0.0_f64;
        for j in 0..n {
            for i in 0..n {
                let mut v: f64 = (0..n).map(|k| f.get(k, i) * p[j][k]).sum();
                if i == j {
                    v += free[i];
                }
                change = change.max((v - p[j][i]).abs());
                next[j][i] = v;
            }
        }
        p = next;
        if change < 1e-15 {
            break;
        }
    }
    p
}

pub fn random_game<R: Rng>(rng: &mut R, counts: &[usize], integer: bool) -> StrategicGame {
    let cells: usize = counts.iter().product();
    let payoffs = (0..counts.len())
        .map(|_| {
            (0..cells)
                .map(|_| if integer { f64::from(rng.gen_range(-3..=3)) } else { rng.gen_range(-10.0..10.0) })
                .collect()
        })
        .collect();
    StrategicGame::new(counts.to_vec(), payoffs).unwrap()
}

/// Classical pure Nash equilibria by exhaustive comparison of pure payoffs.
pub fn brute_force_nash(game: &StrategicGame) -> Vec<Profile> {
    game.profiles()
        .filter(|p| {
            (0..game.n_players()).all(|i| {
                let here = game.payoff(i, p);
                (0..game.strategy_counts()[i]).all(|s| game.payoff(i, &p.deviate(i, s)) <= here)
            })
        })
        .collect()
}

/// Landowner equilibrium by Gauss–Seidel best responses on the mixed
/// utilities. `c[j][i]` is the colonization weight with the landowner at 0.
pub fn best_response_oracle(c: &[Vec<f64>], a: f64, cost: f64, n: usize) -> Vec<f64> {
    let margin = a - cost;
    let mut q = vec![0.0; n];
    for _ in 0..100_000 {
        let mut change = 0.0_f64;
        for k in 0..n {
            let i = k + 1;
            let others: f64 = q.iter().enumerate().filter(|&(m, _)| m != k).map(|(_, v)| v).sum();
            let cross: f64 = (0..n).filter(|&m| m != k).map(|m| c[m + 1][i] * q[m]).sum();
            // maximize c_ii (margin − others − x) x − cross·x + c_Li x over x ≥ 0
            let best = ((c[i][i] * (margin - others) - cross + c[0][i]) / (2.0 * c[i][i])).max(0.0);
            change = change.max((best - q[k]).abs());
            q[k] = best;
        }
        if change < 1e-14 {
            break;
        }
    }
    q
}

/// Expected mixed utility of `player` when the row player's first strategy
/// has probability `p` and the column player's first has probability `q`.
pub fn expected_mixed(game: &StrategicGame, c: &ColonizationMatrix, player: usize, p: f64, q: f64) -> f64 {
    let counts = game.strategy_counts();
    let weight = |x: f64, m: usize, s: usize| {
        if m == 1 {
            1.0
        } else if s == 0 {
            x
        } else {
            1.0 - x
        }
    };
    game.profiles()
        .map(|prof| {
            let u = mixed_utilities(c, &game.pure_utilities(&prof)).unwrap();
            weight(p, counts[0], prof.0[0]) * weight(q, counts[1], prof.0[1]) * u[player]
        })
        .sum()
}

/// No pure deviation improves either player's expected mixed utility.
pub fn is_best_response_pair(game: &StrategicGame, c: &ColonizationMatrix, p: f64, q: f64) -> bool {
    let counts = game.strategy_counts();
    let row_ok = (0..counts[0]).all(|s| {
        let dev = if s == 0 { 1.0 } else { 0.0 };
        expected_mixed(game, c, 0, dev, q) <= expected_mixed(game, c, 0, p, q) + 1e-9
    });
    let col_ok = (0..counts[1]).all(|s| {
        let dev = if s == 0 { 1.0 } else { 0.0 };
        expected_mixed(game, c, 1, p, dev) <= expected_mixed(game, c, 1, p, q) + 1e-9
    });
    row_ok && col_ok
}
