//! Welfare curves and potential power.
//!
//! For a source `i` and target `j`, the only nonzero influence is
//! `f_{j,i} = f`: player `i`'s sympathy for `j`. The welfare of `j` at `f`
//! is its pure payoff averaged over all equilibria of the induced game, and
//! the curve is shifted so it vanishes at `f = 0`. Potential power is the
//! area between the curve and the axis over `(−1, 1)`.

use crate::game::{GameError, StrategicGame};
use crate::influence::{InfluenceError, InfluenceMatrix};
use crate::landowner::{labor_equilibria, LandownerError, LandownerScenario};
use crate::mixed::mixed_equilibria_2x2;
use crate::quadrature::{integrate_pieces, Break};
use rayon::prelude::*;
use thiserror::Error;

/// Jumps are bisected until their bracket is this narrow.
pub const JUMP_BRACKET: f64 = 1e-10;
/// Jump threshold as a fraction of the target's payoff range.
pub const JUMP_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PowerError {
    #[error("influence {0} is outside (-1, 1)")]
    OutOfRange(f64),
    #[error("source and target must differ")]
    SamePlayer,
    #[error("player {0} does not exist")]
    UnknownPlayer(usize),
    #[error("no equilibrium found at f = {0}")]
    NoEquilibrium(f64),
    #[error("payoff range of the target is degenerate; only the raw power is defined")]
    UnboundedRange,
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Landowner(#[from] LandownerError),
    #[error(transparent)]
    Influence(#[from] InfluenceError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOptions {
    /// Samples per side of zero; the curve holds `2·resolution + 1` points.
    pub resolution: usize,
    /// Absolute quadrature tolerance.
    pub tol: f64,
}

impl Default for PowerOptions {
    fn default() -> Self {
        Self { resolution: 100, tol: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WelfareCurve {
    pub source: usize,
    pub target: usize,
    /// `(f, π̄_target(f))`, increasing in `f`, strictly inside `(−1, 1)`.
    pub samples: Vec<(f64, f64)>,
    /// Localized jump positions.
    pub discontinuities: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerReport {
    pub source: usize,
    pub target: usize,
    /// Total area between the welfare curve and zero.
    pub power: f64,
    /// `power / (max u_target − min u_target)` when that range is positive
    /// and bounded.
    pub normalized: Option<f64>,
    /// Signed integral of the curve over `(0, 1)`.
    pub positive_side: f64,
    /// Signed integral of the curve over `(−1, 0)`.
    pub negative_side: f64,
    pub curve: WelfareCurve,
}

impl PowerReport {
    pub fn normalized(&self) -> Result<f64, PowerError> {
        self.normalized.ok_or(PowerError::UnboundedRange)
    }
}

fn check_f(f: f64) -> Result<(), PowerError> {
    if f.is_finite() && f.abs() < 1.0 {
        Ok(())
    } else {
        Err(PowerError::OutOfRange(f))
    }
}

fn single_edge(n: usize, source: usize, target: usize, f: f64) -> Result<InfluenceMatrix, PowerError> {
    check_f(f)?;
    if source == target {
        return Err(PowerError::SamePlayer);
    }
    if source >= n || target >= n {
        return Err(PowerError::UnknownPlayer(source.max(target)));
    }
    // f_{target, source}: the weight `source` places on `target`
    Ok(InfluenceMatrix::from_edges(n, [(target, source, f)])?)
}

/// Mean pure welfare of `target` across the equilibria of `game` when
/// `source` has sympathy `f` for `target`.
pub fn welfare_at(game: &StrategicGame, source: usize, target: usize, f: f64) -> Result<f64, PowerError> {
    let fm = single_edge(game.n_players(), source, target, f)?;
    Ok(mixed_equilibria_2x2(game, &fm)?.mean_welfare(target))
}

/// Same for the Landowner game with no other influence. Node 0 is the
/// landowner.
pub fn landowner_welfare_at(
    n_peasants: usize,
    a: f64,
    cost: f64,
    source: usize,
    target: usize,
    f: f64,
) -> Result<f64, PowerError> {
    let fm = single_edge(n_peasants + 1, source, target, f)?;
    let eqs = labor_equilibria(&LandownerScenario::new(a, cost, n_peasants, fm)?)?;
    if eqs.is_empty() {
        return Err(PowerError::NoEquilibrium(f));
    }
    Ok(eqs.iter().map(|e| e.pure_utilities[target]).sum::<f64>() / eqs.len() as f64)
}

/// Sample abscissae `k / (resolution + 1)` for `k = −resolution..=resolution`.
pub fn sample_points(resolution: usize) -> Vec<f64> {
    let m = resolution as i64;
    (-m..=m).map(|k| k as f64 / (m + 1) as f64).collect()
}

/// Samples `welfare` (raw, unshifted) and localizes jumps larger than
/// `threshold`.
fn build_curve<W>(
    source: usize,
    target: usize,
    resolution: usize,
    threshold: Option<f64>,
    welfare: &W,
) -> Result<WelfareCurve, PowerError>
where
    W: Fn(f64) -> Result<f64, PowerError> + Sync,
{
    let base = welfare(0.0)?;
    let shifted = |f: f64| -> Result<f64, PowerError> {
        if f == 0.0 {
            Ok(0.0)
        } else {
            Ok(welfare(f)? - base)
        }
    };
    let xs = sample_points(resolution.max(1));
    let ys = xs.par_iter().map(|&x| shifted(x)).collect::<Result<Vec<_>, _>>()?;
    let samples: Vec<(f64, f64)> = xs.into_iter().zip(ys).collect();
    let threshold = threshold.unwrap_or_else(|| {
        let (lo, hi) = samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), s| (l.min(s.1), h.max(s.1)));
        JUMP_FRACTION * (hi - lo)
    });
    let threshold = threshold.max(1e-12);

    // one-sided limits at zero stand in for the baseline sample there
    let near_zero = 1e-12;
    let (left0, right0) = (shifted(-near_zero)?, shifted(near_zero)?);
    let mut discontinuities = Vec::new();
    for w in samples.windows(2) {
        let ((mut lo, mut ylo), (mut hi, mut yhi)) = (w[0], w[1]);
        if lo == 0.0 {
            ylo = right0;
        }
        if hi == 0.0 {
            yhi = left0;
        }
        if (yhi - ylo).abs() <= threshold {
            continue;
        }
        while hi - lo > JUMP_BRACKET {
            let mid = 0.5 * (lo + hi);
            let ym = shifted(mid)?;
            if (ym - ylo).abs() >= (yhi - ym).abs() {
                hi = mid;
                yhi = ym;
            } else {
                lo = mid;
                ylo = ym;
            }
        }
        if (yhi - ylo).abs() > threshold {
            discontinuities.push(0.5 * (lo + hi));
        }
    }
    if (right0 - left0).abs() > threshold || left0.abs().max(right0.abs()) > threshold {
        let at = discontinuities.partition_point(|&d| d < 0.0);
        discontinuities.insert(at, 0.0);
    }
    Ok(WelfareCurve { source, target, samples, discontinuities })
}

fn integrate_curve<W>(curve: WelfareCurve, welfare: &W, tol: f64, range: Option<f64>) -> Result<PowerReport, PowerError>
where
    W: Fn(f64) -> Result<f64, PowerError>,
{
    let base = welfare(0.0)?;
    let mut shifted_abs = |f: f64| -> Result<f64, PowerError> { Ok((welfare(f)? - base).abs()) };
    let mut shifted = |f: f64| -> Result<f64, PowerError> { Ok(welfare(f)? - base) };

    let side = |lo: f64, hi: f64| -> Vec<Break> {
        let mut b: Vec<Break> = vec![Break::singular(lo)];
        b.extend(curve.samples.iter().filter(|s| s.0 > lo && s.0 < hi).map(|s| Break::regular(s.0)));
        b.extend(curve.discontinuities.iter().filter(|&&d| d > lo && d < hi).map(|&d| Break::singular(d)));
        b.push(Break::singular(hi));
        b.sort_by(|x, y| x.x.total_cmp(&y.x).then(y.singular.cmp(&x.singular)));
        b.dedup_by(|x, y| {
            if (x.x - y.x).abs() < 2e-12 {
                y.singular |= x.singular;
                true
            } else {
                false
            }
        });
        b
    };
    let neg = side(-1.0, 0.0);
    let pos = side(0.0, 1.0);
    let half = 0.25 * tol;
    let negative_side = integrate_pieces(&mut shifted, &neg, half)?;
    let positive_side = integrate_pieces(&mut shifted, &pos, half)?;
    let power = integrate_pieces(&mut shifted_abs, &neg, half)? + integrate_pieces(&mut shifted_abs, &pos, half)?;
    let normalized = range.filter(|r| *r > 0.0 && r.is_finite()).map(|r| power / r);
    Ok(PowerReport {
        source: curve.source,
        target: curve.target,
        power,
        normalized,
        positive_side,
        negative_side,
        curve,
    })
}

/// Shifted welfare curve of `target` against `source`'s sympathy.
pub fn welfare_curve(
    game: &StrategicGame,
    source: usize,
    target: usize,
    resolution: usize,
) -> Result<WelfareCurve, PowerError> {
    single_edge(game.n_players(), source, target, 0.0)?;
    let (lo, hi) = game.payoff_range(target);
    let welfare = |f: f64| welfare_at(game, source, target, f);
    build_curve(source, target, resolution, Some(JUMP_FRACTION * (hi - lo)), &welfare)
}

/// Potential power of `source` over `target` with default options.
pub fn potential_power(game: &StrategicGame, source: usize, target: usize) -> Result<PowerReport, PowerError> {
    potential_power_with(game, source, target, &PowerOptions::default())
}

pub fn potential_power_with(
    game: &StrategicGame,
    source: usize,
    target: usize,
    opts: &PowerOptions,
) -> Result<PowerReport, PowerError> {
    let curve = welfare_curve(game, source, target, opts.resolution)?;
    let (lo, hi) = game.payoff_range(target);
    let welfare = |f: f64| welfare_at(game, source, target, f);
    integrate_curve(curve, &welfare, opts.tol, Some(hi - lo))
}

/// Potential power between nodes of the Landowner game. The payoff range is
/// unbounded, so no normalized value is reported.
pub fn landowner_power_curve(
    n_peasants: usize,
    a: f64,
    cost: f64,
    source: usize,
    target: usize,
    opts: &PowerOptions,
) -> Result<PowerReport, PowerError> {
    let welfare = |f: f64| landowner_welfare_at(n_peasants, a, cost, source, target, f);
    let curve = build_curve(source, target, opts.resolution, None, &welfare)?;
    integrate_curve(curve, &welfare, opts.tol, None)
}
