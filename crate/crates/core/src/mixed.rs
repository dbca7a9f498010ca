//! Exact mixed-equilibrium enumeration for two-player games with at most two
//! strategies per player.
//!
//! Both best-response correspondences are unions of axis-aligned boxes in
//! the `(p, q)` square, where `p` is the probability of the row player's
//! first strategy and `q` that of the column player's first strategy. The
//! equilibrium set is their intersection, grouped into connected
//! components. A single-strategy player has `p` (or `q`) pinned at 1.

use crate::game::{GameError, StrategicGame};
use crate::influence::{ColonizationMatrix, InfluenceMatrix};

/// Rows (or columns) of mixed utility closer than this are one strategy.
pub const DEGENERACY_TOL: f64 = 1e-10;
const ROOT_TOL: f64 = 1e-12;
const TOUCH_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Span {
    lo: f64,
    hi: f64,
}

impl Span {
    const UNIT: Span = Span { lo: 0.0, hi: 1.0 };

    fn at(v: f64) -> Span {
        Span { lo: v, hi: v }
    }

    fn len(self) -> f64 {
        self.hi - self.lo
    }

    fn mid(self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    fn intersect(self, o: Span) -> Option<Span> {
        let lo = self.lo.max(o.lo);
        let hi = self.hi.min(o.hi);
        if lo <= hi + TOUCH_TOL {
            Some(Span { lo, hi: hi.max(lo) })
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Rect {
    p: Span,
    q: Span,
}

impl Rect {
    fn intersect(self, o: Rect) -> Option<Rect> {
        Some(Rect { p: self.p.intersect(o.p)?, q: self.q.intersect(o.q)? })
    }

    fn touches(self, o: Rect) -> bool {
        self.intersect(o).is_some()
    }
}

/// An axis-aligned segment in `(p, q)` coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start: (f64, f64),
    pub end: (f64, f64),
}

impl Segment {
    pub fn length(&self) -> f64 {
        (self.end.0 - self.start.0).abs() + (self.end.1 - self.start.1).abs()
    }

    pub fn midpoint(&self) -> (f64, f64) {
        (0.5 * (self.start.0 + self.end.0), 0.5 * (self.start.1 + self.end.1))
    }

    /// Point at parameter `t ∈ [0, 1]`.
    pub fn at(&self, t: f64) -> (f64, f64) {
        (self.start.0 + t * (self.end.0 - self.start.0), self.start.1 + t * (self.end.1 - self.start.1))
    }
}

/// Geometry of one connected equilibrium component.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// Isolated equilibrium at `(p, q)`.
    Point(f64, f64),
    /// A continuum where at least one player is indifferent.
    Segments(Vec<Segment>),
    /// Both players indifferent over their whole strategy sets.
    Region { p: (f64, f64), q: (f64, f64) },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub shape: Shape,
    /// Pure expected payoff of each player, averaged uniformly over the
    /// component.
    pub mean_payoffs: Vec<f64>,
}

impl Component {
    pub fn is_isolated(&self) -> bool {
        matches!(self.shape, Shape::Point(..))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumSet {
    pub strategy_counts: [usize; 2],
    pub components: Vec<Component>,
}

impl EquilibriumSet {
    /// Mixed strategies of both players at `(p, q)`.
    pub fn strategies_at(&self, p: f64, q: f64) -> [Vec<f64>; 2] {
        let probs = |x: f64, m: usize| if m == 2 { vec![x, 1.0 - x] } else { vec![1.0] };
        [probs(p, self.strategy_counts[0]), probs(q, self.strategy_counts[1])]
    }

    /// Strategy vectors of every isolated equilibrium.
    pub fn isolated_points(&self) -> Vec<[Vec<f64>; 2]> {
        self.components
            .iter()
            .filter_map(|c| match c.shape {
                Shape::Point(p, q) => Some(self.strategies_at(p, q)),
                _ => None,
            })
            .collect()
    }

    /// `player`'s pure welfare averaged uniformly over components.
    pub fn mean_welfare(&self, player: usize) -> f64 {
        let total: f64 = self.components.iter().map(|c| c.mean_payoffs[player]).sum();
        total / self.components.len() as f64
    }
}

/// Expected value of a `rows × cols` payoff table at `(p, q)`.
pub fn expected(table: &[f64], counts: [usize; 2], p: f64, q: f64) -> f64 {
    let pr = |x: f64, m: usize, k: usize| {
        if m == 1 {
            1.0
        } else if k == 0 {
            x
        } else {
            1.0 - x
        }
    };
    let mut v = 0.0;
    for r in 0..counts[0] {
        for c in 0..counts[1] {
            v += pr(p, counts[0], r) * pr(q, counts[1], c) * table[r * counts[1] + c];
        }
    }
    v
}

/// Best-response graph of one player as `(own, other)` spans.
///
/// `adv(x)` is the advantage of the first own strategy when the opponent
/// plays its first strategy with probability `x ∈ other`; it is affine.
fn best_response(own_count: usize, other: Span, adv: impl Fn(f64) -> f64, identical: bool) -> Vec<(Span, Span)> {
    if own_count == 1 {
        return vec![(Span::at(1.0), other)];
    }
    if identical {
        return vec![(Span::UNIT, other)];
    }
    let pick = |d: f64| if d > 0.0 { Span::at(1.0) } else { Span::at(0.0) };
    let (d_lo, d_hi) = (adv(other.lo), adv(other.hi));
    if d_lo > ROOT_TOL && d_hi > ROOT_TOL || d_lo < -ROOT_TOL && d_hi < -ROOT_TOL {
        return vec![(pick(d_lo), other)];
    }
    if other.len() == 0.0 || d_lo.abs() <= ROOT_TOL && d_hi.abs() <= ROOT_TOL {
        return vec![(Span::UNIT, other)];
    }
    // an end within tolerance of indifference is the root itself
    let root = if d_lo.abs() <= ROOT_TOL {
        other.lo
    } else if d_hi.abs() <= ROOT_TOL {
        other.hi
    } else {
        (other.lo + other.len() * d_lo / (d_lo - d_hi)).clamp(other.lo, other.hi)
    };
    let mut out = Vec::with_capacity(3);
    if d_lo.abs() > ROOT_TOL {
        out.push((pick(d_lo), Span { lo: other.lo, hi: root }));
    }
    out.push((Span::UNIT, Span::at(root)));
    if d_hi.abs() > ROOT_TOL {
        out.push((pick(d_hi), Span { lo: root, hi: other.hi }));
    }
    out
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Equilibria of the game whose mixed utilities are `c`-weighted sums of
/// the pure payoffs.
pub fn equilibria_with_colonization(game: &StrategicGame, c: &ColonizationMatrix) -> Result<EquilibriumSet, GameError> {
    let counts = game.strategy_counts();
    if counts.len() != 2 || counts.iter().any(|&m| m > 2) {
        return Err(GameError::NotTwoByTwo);
    }
    if c.n() != 2 {
        return Err(GameError::DimensionMismatch { expected: 2, actual: c.n() });
    }
    let counts = [counts[0], counts[1]];
    let (rows, cols) = (counts[0], counts[1]);
    let cells = rows * cols;
    let mixed: Vec<Vec<f64>> = (0..2)
        .map(|i| {
            (0..cells)
                .map(|k| c.get(0, i) * game.payoff_tensor(0)[k] + c.get(1, i) * game.payoff_tensor(1)[k])
                .collect()
        })
        .collect();
    let (a, b) = (&mixed[0], &mixed[1]);

    let q_dom = if cols == 2 { Span::UNIT } else { Span::at(1.0) };
    let p_dom = if rows == 2 { Span::UNIT } else { Span::at(1.0) };

    let row_value = |r: usize, q: f64| if cols == 2 { q * a[r * 2] + (1.0 - q) * a[r * 2 + 1] } else { a[r] };
    let col_value = |k: usize, p: f64| if rows == 2 { p * b[k] + (1.0 - p) * b[cols + k] } else { b[k] };

    let row_identical = rows == 2 && (0..cols).all(|k| (a[k] - a[cols + k]).abs() <= DEGENERACY_TOL);
    let col_identical = cols == 2 && (0..rows).all(|r| (b[r * 2] - b[r * 2 + 1]).abs() <= DEGENERACY_TOL);

    let br_row: Vec<Rect> = best_response(rows, q_dom, |q| row_value(0, q) - row_value(1, q), row_identical)
        .into_iter()
        .map(|(p, q)| Rect { p, q })
        .collect();
    let br_col: Vec<Rect> = best_response(cols, p_dom, |p| col_value(0, p) - col_value(1, p), col_identical)
        .into_iter()
        .map(|(q, p)| Rect { p, q })
        .collect();

    let mut pieces: Vec<Rect> = Vec::new();
    for r in &br_row {
        for k in &br_col {
            if let Some(x) = r.intersect(*k) {
                pieces.push(x);
            }
        }
    }

    let mut parent: Vec<usize> = (0..pieces.len()).collect();
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            if pieces[i].touches(pieces[j]) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    let mut groups: Vec<(usize, Vec<Rect>)> = Vec::new();
    for i in 0..pieces.len() {
        let root = find(&mut parent, i);
        match groups.iter_mut().find(|(r, _)| *r == root) {
            Some((_, g)) => g.push(pieces[i]),
            None => groups.push((root, vec![pieces[i]])),
        }
    }

    let value = |player: usize, p: f64, q: f64| expected(game.payoff_tensor(player), counts, p, q);
    let mut components: Vec<Component> = groups
        .into_iter()
        .map(|(_, g)| {
            let shape = shape_of(&g);
            let mean_payoffs = (0..2)
                .map(|j| match &shape {
                    Shape::Point(p, q) => value(j, *p, *q),
                    Shape::Region { p, q } => value(j, 0.5 * (p.0 + p.1), 0.5 * (q.0 + q.1)),
                    Shape::Segments(segs) => {
                        let total: f64 = segs.iter().map(Segment::length).sum();
                        segs.iter()
                            .map(|s| {
                                let (p, q) = s.midpoint();
                                s.length() * value(j, p, q)
                            })
                            .sum::<f64>()
                            / total
                    }
                })
                .collect();
            Component { shape, mean_payoffs }
        })
        .collect();
    components.sort_by(|x, y| anchor(&x.shape).partial_cmp(&anchor(&y.shape)).unwrap());
    Ok(EquilibriumSet { strategy_counts: counts, components })
}

fn anchor(s: &Shape) -> (f64, f64) {
    match s {
        Shape::Point(p, q) => (*p, *q),
        Shape::Segments(v) => v[0].start,
        Shape::Region { p, q } => (p.0, q.0),
    }
}

fn shape_of(group: &[Rect]) -> Shape {
    let extent = |r: &Rect| (r.p.len() > TOUCH_TOL, r.q.len() > TOUCH_TOL);
    if let Some(r) = group.iter().find(|r| extent(r) == (true, true)) {
        return Shape::Region { p: (r.p.lo, r.p.hi), q: (r.q.lo, r.q.hi) };
    }
    let segs: Vec<Segment> = group
        .iter()
        .filter(|r| extent(r) != (false, false))
        .map(|r| Segment { start: (r.p.lo, r.q.lo), end: (r.p.hi, r.q.hi) })
        .collect();
    if segs.is_empty() {
        let r = group[0];
        Shape::Point(r.p.mid(), r.q.mid())
    } else {
        Shape::Segments(segs)
    }
}

/// All equilibria of the mixed-utility game induced by `f`.
pub fn mixed_equilibria_2x2(game: &StrategicGame, f: &InfluenceMatrix) -> Result<EquilibriumSet, GameError> {
    let counts = game.strategy_counts();
    if counts.len() != 2 || counts.iter().any(|&m| m > 2) {
        return Err(GameError::NotTwoByTwo);
    }
    let c = game.colonize(f)?;
    equilibria_with_colonization(game, &c)
}
