//! The Landowner game: peasants choose hours of labor, the wage follows
//! `W = a − Q`, a peasant earns `(W − C)·q_i` and the landowner, a passive
//! node with no strategy, gets `Q`.
//!
//! Node 0 is always the landowner; peasants are nodes `1..=n`. Each peasant
//! maximizes its mixed utility `Σ_j c_{j,i} u_j`, which is concave in its
//! own quantity when `c_{i,i} > 0`, so the equilibrium is the solution of the
//! linear first-order conditions under `q ≥ 0`.

use crate::influence::{colonization, ColonizationMatrix, InfluenceError, InfluenceMatrix};
use crate::linalg::Lu;
use thiserror::Error;

pub const LANDOWNER: usize = 0;
/// Active-set rounds before giving up.
pub const MAX_ACTIVE_SET_ROUNDS: usize = 64;
/// Residual allowed on first-order and complementarity conditions.
pub const KKT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LandownerError {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("mixed utility of peasant {0} is not concave in its own labor")]
    NonConcaveUtility(usize),
    #[error("active-set iteration did not settle")]
    NoConvergence,
    #[error("no dominion weight in the admissible range balances the union")]
    NoBalance,
    #[error(transparent)]
    Influence(#[from] InfluenceError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LandownerScenario {
    /// Demand intercept, in hours.
    pub a: f64,
    /// Minimum acceptable hourly wage.
    pub cost: f64,
    pub n_peasants: usize,
    /// Influence over `n_peasants + 1` nodes, landowner first.
    pub influence: InfluenceMatrix,
}

impl LandownerScenario {
    pub fn new(a: f64, cost: f64, n_peasants: usize, influence: InfluenceMatrix) -> Result<Self, LandownerError> {
        if !(a.is_finite() && cost.is_finite() && a > cost && cost > 0.0) {
            return Err(LandownerError::InvalidScenario(format!("need a > cost > 0, got a = {a}, cost = {cost}")));
        }
        if n_peasants == 0 {
            return Err(LandownerError::InvalidScenario("at least one peasant required".into()));
        }
        if influence.n() != n_peasants + 1 {
            return Err(LandownerError::InvalidScenario(format!(
                "influence matrix has {} nodes, expected {}",
                influence.n(),
                n_peasants + 1
            )));
        }
        Ok(Self { a, cost, n_peasants, influence })
    }

    /// Builds a scenario from `(source, target, weight)` edges.
    pub fn with_edges(
        a: f64,
        cost: f64,
        n_peasants: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self, LandownerError> {
        let f = InfluenceMatrix::from_edges(n_peasants + 1, edges)?;
        Self::new(a, cost, n_peasants, f)
    }

    /// `(source, target, weight)` for every nonzero influence.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let n = self.influence.n();
        (0..n)
            .flat_map(|j| (0..n).map(move |i| (j, i)))
            .filter_map(|(j, i)| {
                let w = self.influence.get(j, i);
                (w != 0.0).then_some((j, i, w))
            })
            .collect()
    }
}

/// Nobody influences anybody.
pub fn scenario_free(n: usize, a: f64, cost: f64) -> Result<LandownerScenario, LandownerError> {
    LandownerScenario::with_edges(a, cost, n, [])
}

fn check_peasants(n: usize, set: &[usize]) -> Result<(), LandownerError> {
    match set.iter().find(|&&p| p == LANDOWNER || p > n) {
        Some(p) => Err(LandownerError::InvalidScenario(format!("node {p} is not a peasant"))),
        None => Ok(()),
    }
}

fn union_edges(members: &[usize], weight: f64) -> Vec<(usize, usize, f64)> {
    let mut edges = Vec::new();
    for &i in members {
        for &j in members {
            if i != j {
                edges.push((i, j, weight));
            }
        }
    }
    edges
}

/// Mutual influence `weight` between every pair of `members` (peasant nodes).
pub fn scenario_union(
    n: usize,
    a: f64,
    cost: f64,
    members: &[usize],
    weight: f64,
) -> Result<LandownerScenario, LandownerError> {
    check_peasants(n, members)?;
    LandownerScenario::with_edges(a, cost, n, union_edges(members, weight))
}

/// The landowner's utility enters each subject's with `weight`.
pub fn scenario_dominion(
    n: usize,
    a: f64,
    cost: f64,
    subjects: &[usize],
    weight: f64,
) -> Result<LandownerScenario, LandownerError> {
    check_peasants(n, subjects)?;
    LandownerScenario::with_edges(a, cost, n, subjects.iter().map(|&s| (LANDOWNER, s, weight)))
}

/// A union of all peasants together with a dominion over all of them.
pub fn scenario_union_vs_dominion(
    n: usize,
    a: f64,
    cost: f64,
    union_weight: f64,
    dominion_weight: f64,
) -> Result<LandownerScenario, LandownerError> {
    let all: Vec<usize> = (1..=n).collect();
    let mut edges = union_edges(&all, union_weight);
    edges.extend(all.iter().map(|&s| (LANDOWNER, s, dominion_weight)));
    LandownerScenario::with_edges(a, cost, n, edges)
}

/// Perfect competition and joint monopoly reference points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceBounds {
    /// Total labor under perfect competition, where `W = C`.
    pub max_q: f64,
    /// Total labor a single labor monopoly would supply.
    pub min_q: f64,
    /// Wage at the monopoly quantity.
    pub max_wage: f64,
}

pub fn reference_bounds(a: f64, cost: f64) -> ReferenceBounds {
    let max_q = (a - cost).max(0.0);
    let min_q = max_q / 2.0;
    ReferenceBounds { max_q, min_q, max_wage: a - min_q }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaborEquilibrium {
    /// Hours per peasant, in peasant order.
    pub quantities: Vec<f64>,
    pub total: f64,
    pub wage: f64,
    /// Per node, landowner first.
    pub pure_utilities: Vec<f64>,
    pub mixed_utilities: Vec<f64>,
    /// Active-set rounds used.
    pub rounds: usize,
}

/// Pure utilities of every node for the given peasant quantities.
pub fn pure_utilities(a: f64, cost: f64, quantities: &[f64]) -> Vec<f64> {
    let total: f64 = quantities.iter().sum();
    let wage = a - total;
    std::iter::once(total).chain(quantities.iter().map(|q| (wage - cost) * q)).collect()
}

/// Mixed utility of `node` for the given peasant quantities.
pub fn mixed_utility(c: &ColonizationMatrix, a: f64, cost: f64, node: usize, quantities: &[f64]) -> f64 {
    c.mixed_utility(node, &pure_utilities(a, cost, quantities))
}

/// Derivative of peasant `i`'s mixed utility (node `i`) in its own labor.
fn marginal(c: &ColonizationMatrix, margin: f64, i: usize, q: &[f64]) -> f64 {
    let total: f64 = q.iter().sum();
    let mut m = c.get(i, i) * (margin - total - q[i - 1]) + c.get(LANDOWNER, i);
    for j in (1..=q.len()).filter(|&j| j != i) {
        m -= c.get(j, i) * q[j - 1];
    }
    m
}

/// Solves the labor game by active-set iteration on the first-order
/// conditions.
///
/// Each round solves the first-order system restricted to the active
/// peasants and flips the lowest-indexed peasant that violates either
/// `q_i ≥ 0` (active) or a non-positive marginal (inactive). When that does
/// not settle within [`MAX_ACTIVE_SET_ROUNDS`], every support is tried.
pub fn landowner_equilibrium(scenario: &LandownerScenario) -> Result<LaborEquilibrium, LandownerError> {
    let c = colonization(&scenario.influence)?;
    solve_with_colonization(scenario, &c)
}

/// Every equilibrium of the labor game, found by trying every support.
/// Ordered by decreasing support size, then lexicographically.
pub fn labor_equilibria(scenario: &LandownerScenario) -> Result<Vec<LaborEquilibrium>, LandownerError> {
    let c = colonization(&scenario.influence)?;
    enumerate_supports(scenario, &c)
}

struct Kkt<'a> {
    c: &'a ColonizationMatrix,
    n: usize,
    margin: f64,
    scale: f64,
}

impl Kkt<'_> {
    fn new<'a>(scenario: &LandownerScenario, c: &'a ColonizationMatrix) -> Result<Kkt<'a>, LandownerError> {
        let n = scenario.n_peasants;
        for i in 1..=n {
            if c.get(i, i) <= 0.0 {
                return Err(LandownerError::NonConcaveUtility(i));
            }
        }
        let margin = scenario.a - scenario.cost;
        Ok(Kkt { c, n, margin, scale: margin.abs().max(1.0) })
    }

    /// Quantities with the first-order conditions of `active` peasants
    /// holding with equality and everyone else at zero.
    fn solve_support(&self, active: &[bool]) -> Option<Vec<f64>> {
        let c = self.c;
        let idx: Vec<usize> = (0..self.n).filter(|&k| active[k]).collect();
        let mut q = vec![0.0; self.n];
        if idx.is_empty() {
            return Some(q);
        }
        let m = idx.len();
        let mut sys = vec![0.0; m * m];
        let mut rhs = vec![0.0; m];
        for (r, &ki) in idx.iter().enumerate() {
            let i = ki + 1;
            let cii = c.get(i, i);
            rhs[r] = cii * self.margin + c.get(LANDOWNER, i);
            for (s, &kj) in idx.iter().enumerate() {
                let j = kj + 1;
                sys[r * m + s] = if i == j { 2.0 * cii } else { cii + c.get(j, i) };
            }
        }
        let lu = Lu::factor(m, sys, 1e-13)?;
        for (s, v) in lu.solve(&rhs).into_iter().enumerate() {
            q[idx[s]] = v;
        }
        Some(q)
    }

    /// Lowest-indexed peasant violating complementarity, if any.
    fn first_violation(&self, active: &[bool], q: &[f64]) -> Option<usize> {
        let eps = 1e-12 * self.scale;
        (0..self.n).find(|&k| if active[k] { q[k] < -eps } else { marginal(self.c, self.margin, k + 1, q) > eps })
    }

    fn certify(&self, scenario: &LandownerScenario, mut q: Vec<f64>, rounds: usize) -> Option<LaborEquilibrium> {
        if q.iter().any(|&v| v < -1e-12 * self.scale) {
            return None;
        }
        q.iter_mut().for_each(|v| *v = v.max(0.0));
        for k in 0..self.n {
            let m = marginal(self.c, self.margin, k + 1, &q);
            let ok = if q[k] > 0.0 { m.abs() <= KKT_TOL * self.scale } else { m <= KKT_TOL * self.scale };
            if !ok {
                return None;
            }
        }
        let total: f64 = q.iter().sum();
        let pure = pure_utilities(scenario.a, scenario.cost, &q);
        let mixed = (0..=self.n).map(|i| self.c.mixed_utility(i, &pure)).collect();
        Some(LaborEquilibrium {
            quantities: q,
            total,
            wage: scenario.a - total,
            pure_utilities: pure,
            mixed_utilities: mixed,
            rounds,
        })
    }
}

pub(crate) fn solve_with_colonization(
    scenario: &LandownerScenario,
    c: &ColonizationMatrix,
) -> Result<LaborEquilibrium, LandownerError> {
    let kkt = Kkt::new(scenario, c)?;
    let mut active = vec![true; kkt.n];
    for round in 1..=MAX_ACTIVE_SET_ROUNDS {
        let Some(q) = kkt.solve_support(&active) else { break };
        match kkt.first_violation(&active, &q) {
            Some(k) => active[k] = !active[k],
            None => match kkt.certify(scenario, q, round) {
                Some(eq) => return Ok(eq),
                None => break,
            },
        }
    }
    enumerate_supports(scenario, c)?.into_iter().next().ok_or(LandownerError::NoConvergence)
}

/// Supports larger than this are not enumerated.
const MAX_ENUMERATED_PEASANTS: usize = 20;

fn enumerate_supports(
    scenario: &LandownerScenario,
    c: &ColonizationMatrix,
) -> Result<Vec<LaborEquilibrium>, LandownerError> {
    let kkt = Kkt::new(scenario, c)?;
    if kkt.n > MAX_ENUMERATED_PEASANTS {
        return Err(LandownerError::NoConvergence);
    }
    let mut masks: Vec<u32> = (0..1u32 << kkt.n).collect();
    masks.sort_by_key(|&m| (std::cmp::Reverse(m.count_ones()), m.reverse_bits()));
    let mut found: Vec<LaborEquilibrium> = Vec::new();
    for mask in masks {
        let active: Vec<bool> = (0..kkt.n).map(|k| mask >> k & 1 == 1).collect();
        let Some(q) = kkt.solve_support(&active) else { continue };
        if let Some(eq) = kkt.certify(scenario, q, 0) {
            let dup = found
                .iter()
                .any(|f| f.quantities.iter().zip(&eq.quantities).all(|(x, y)| (x - y).abs() <= 1e-9 * kkt.scale));
            if !dup {
                found.push(eq);
            }
        }
    }
    Ok(found)
}

/// Dominion weight that brings the wage of a full union back to the free
/// system's wage, found by bisection on the admissible range.
pub fn balancing_dominion_weight(n: usize, a: f64, cost: f64, union_weight: f64) -> Result<f64, LandownerError> {
    let free = landowner_equilibrium(&scenario_free(n, a, cost)?)?.wage;
    let gap = |d: f64| -> Result<f64, LandownerError> {
        Ok(landowner_equilibrium(&scenario_union_vs_dominion(n, a, cost, union_weight, d)?)?.wage - free)
    };
    let mut lo = 0.0;
    let mut hi = (1.0 - (n as f64 - 1.0) * union_weight.abs()) * (1.0 - 1e-9);
    let (glo, ghi) = (gap(lo)?, gap(hi)?);
    if glo == 0.0 {
        return Ok(0.0);
    }
    if glo.signum() == ghi.signum() {
        return Err(LandownerError::NoBalance);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gap(mid)?.signum() == glo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
