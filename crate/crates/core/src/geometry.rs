//! Colonization and influence spaces of two-player profiles.
//!
//! Coordinates are `x = c_{2,1}` (the weight of player 2's pure utility in
//! player 1's mixed utility) and `y = c_{1,2}`. With two players each self
//! weight is `1 − |off-diagonal|`, so a colonization matrix is a point of
//! the diamond `|x| + |y| < 1`.
//!
//! A profile survives a unilateral deviation by player 1 iff
//! `(1 − |x|)·a + x·b ≥ 0`, with `a` and `b` the payoff differences of
//! the deviator and of the other player. For `b ≠ 0` that set is the ray
//! `x ≥ −a / (b + |a|)` (`b > 0`) or `x ≤ −a / (b − |a|)` (`b < 0`).

use crate::game::{GameError, Profile, StrategicGame};
use crate::influence::{two_player_c_to_f, two_player_f_to_c, InfluenceError};
use rayon::prelude::*;
use thiserror::Error;

/// Slack for membership tests against threshold constraints.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpaceError {
    #[error("game is not a two-player game with at most two strategies each")]
    NotTwoByTwo,
    #[error("invalid profile {0:?}")]
    InvalidProfile(Vec<usize>),
    #[error("region is empty")]
    EmptyRegion,
    #[error("resolution must be at least 2")]
    BadResolution,
    #[error(transparent)]
    Influence(#[from] InfluenceError),
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Payoff differences at one deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviationDelta {
    /// Deviator's own loss from deviating, `u_self(σ) − u_self(σ')`.
    pub a: f64,
    /// The other player's loss from the same deviation.
    pub b: f64,
}

impl DeviationDelta {
    /// `(1 − |c|)·a + c·b ≥ 0`.
    pub fn holds_at(&self, c: f64) -> bool {
        (1.0 - c.abs()) * self.a + c * self.b >= 0.0
    }
}

/// Admissible values of one colonization coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    All,
    Empty,
    AtLeast(f64),
    AtMost(f64),
}

impl Bound {
    pub fn admits(&self, c: f64) -> bool {
        match *self {
            Bound::All => true,
            Bound::Empty => false,
            Bound::AtLeast(t) => c >= t - MEMBERSHIP_TOL,
            Bound::AtMost(t) => c <= t + MEMBERSHIP_TOL,
        }
    }

    pub fn threshold(&self) -> Option<f64> {
        match *self {
            Bound::AtLeast(t) | Bound::AtMost(t) => Some(t),
            _ => None,
        }
    }
}

/// Threshold form of the deviation inequality.
pub fn deviation_constraint(delta: DeviationDelta) -> Bound {
    let DeviationDelta { a, b } = delta;
    if b == 0.0 {
        return if a >= 0.0 { Bound::All } else { Bound::Empty };
    }
    let t = -a / (b + b.signum() * a.abs());
    if b > 0.0 {
        Bound::AtLeast(t)
    } else {
        Bound::AtMost(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// `c_{2,1}`, constrained by player 1's deviations.
    Horizontal,
    /// `c_{1,2}`, constrained by player 2's deviations.
    Vertical,
}

/// One generating constraint of a region.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub player: usize,
    pub deviation: Profile,
    pub delta: DeviationDelta,
    pub axis: Axis,
    pub bound: Bound,
}

impl Constraint {
    fn coord(&self, p: Point) -> f64 {
        match self.axis {
            Axis::Horizontal => p.x,
            Axis::Vertical => p.y,
        }
    }

    pub fn admits(&self, p: Point) -> bool {
        self.bound.admits(self.coord(p))
    }

    /// Distance of `p` from the constraint's boundary line, if it has one.
    pub fn boundary_distance(&self, p: Point) -> Option<f64> {
        self.bound.threshold().map(|t| (self.coord(p) - t).abs())
    }
}

/// Closed convex polygon (counterclockwise) inside the diamond, with the
/// constraints that cut it out.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexRegion {
    pub vertices: Vec<Point>,
    pub constraints: Vec<Constraint>,
}

/// The diamond `|x| + |y| ≤ 1`, counterclockwise.
pub fn diamond() -> Vec<Point> {
    vec![Point::new(1.0, 0.0), Point::new(0.0, 1.0), Point::new(-1.0, 0.0), Point::new(0.0, -1.0)]
}

pub fn in_diamond(p: Point) -> bool {
    p.x.abs() + p.y.abs() <= 1.0 + MEMBERSHIP_TOL
}

/// Points on the diamond's edge are excluded by the budget bound on `F`.
pub fn on_diamond_boundary(p: Point) -> bool {
    (p.x.abs() + p.y.abs() - 1.0).abs() <= MEMBERSHIP_TOL
}

/// Sutherland–Hodgman clip of a convex polygon by `{p : s(p) ≥ 0}` with
/// `s` affine.
fn clip(poly: &[Point], s: impl Fn(Point) -> f64) -> Vec<Point> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    for (k, &cur) in poly.iter().enumerate() {
        let prev = poly[(k + poly.len() - 1) % poly.len()];
        let (sc, sp) = (s(cur), s(prev));
        if sc >= 0.0 {
            if sp < 0.0 {
                out.push(cross(prev, cur, sp, sc));
            }
            out.push(cur);
        } else if sp >= 0.0 {
            out.push(cross(prev, cur, sp, sc));
        }
    }
    dedup(out)
}

fn cross(a: Point, b: Point, sa: f64, sb: f64) -> Point {
    let t = sa / (sa - sb);
    Point::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
}

fn dedup(mut v: Vec<Point>) -> Vec<Point> {
    v.dedup_by(|a, b| (a.x - b.x).abs() < 1e-15 && (a.y - b.y).abs() < 1e-15);
    while v.len() > 1 {
        let (f, l) = (v[0], v[v.len() - 1]);
        if (f.x - l.x).abs() < 1e-15 && (f.y - l.y).abs() < 1e-15 {
            v.pop();
        } else {
            break;
        }
    }
    v
}

impl ConvexRegion {
    /// Clips the diamond by every constraint.
    pub fn from_constraints(constraints: Vec<Constraint>) -> Self {
        let mut poly = diamond();
        for c in &constraints {
            let axis = c.axis;
            let coord = move |p: Point| match axis {
                Axis::Horizontal => p.x,
                Axis::Vertical => p.y,
            };
            poly = match c.bound {
                Bound::All => poly,
                Bound::Empty => Vec::new(),
                Bound::AtLeast(t) => clip(&poly, |p| coord(p) - t),
                Bound::AtMost(t) => clip(&poly, |p| t - coord(p)),
            };
            if poly.is_empty() {
                break;
            }
        }
        Self { vertices: poly, constraints }
    }

    /// Closed-set membership: inside the diamond and every constraint.
    pub fn contains(&self, p: Point) -> bool {
        in_diamond(p) && self.constraints.iter().all(|c| c.admits(p))
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() < 3 || self.area() <= 1e-15
    }

    /// Signed shoelace area (positive for counterclockwise).
    pub fn area(&self) -> f64 {
        let v = &self.vertices;
        if v.len() < 3 {
            return 0.0;
        }
        0.5 * (0..v.len())
            .map(|k| {
                let (p, q) = (v[k], v[(k + 1) % v.len()]);
                p.x * q.y - q.x * p.y
            })
            .sum::<f64>()
    }

    /// Smallest distance from `p` to any constraint's threshold line.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        self.constraints.iter().filter_map(|c| c.boundary_distance(p)).fold(f64::INFINITY, f64::min)
    }
}

/// Area centroid of a non-empty region.
pub fn region_centroid(region: &ConvexRegion) -> Result<Point, SpaceError> {
    if region.is_empty() {
        return Err(SpaceError::EmptyRegion);
    }
    let v = &region.vertices;
    // shift to the first vertex to keep the cross products well conditioned
    let o = v[0];
    let (mut a2, mut cx, mut cy) = (0.0, 0.0, 0.0);
    for k in 1..v.len() - 1 {
        let (p, q) = (Point::new(v[k].x - o.x, v[k].y - o.y), Point::new(v[k + 1].x - o.x, v[k + 1].y - o.y));
        let cr = p.x * q.y - q.x * p.y;
        a2 += cr;
        cx += cr * (p.x + q.x);
        cy += cr * (p.y + q.y);
    }
    Ok(Point::new(o.x + cx / (3.0 * a2), o.y + cy / (3.0 * a2)))
}

fn check_game(game: &StrategicGame, profile: &Profile) -> Result<(), SpaceError> {
    let counts = game.strategy_counts();
    if counts.len() != 2 || counts.iter().any(|&m| m > 2) {
        return Err(SpaceError::NotTwoByTwo);
    }
    if !game.is_valid_profile(profile) {
        return Err(SpaceError::InvalidProfile(profile.0.clone()));
    }
    Ok(())
}

/// Deviation constraints of `profile`, one per alternative strategy.
pub fn profile_constraints(game: &StrategicGame, profile: &Profile) -> Result<Vec<Constraint>, SpaceError> {
    check_game(game, profile)?;
    let here = game.pure_utilities(profile);
    let mut out = Vec::new();
    for player in 0..2 {
        let other = 1 - player;
        for s in (0..game.strategy_counts()[player]).filter(|&s| s != profile.0[player]) {
            let dev = profile.deviate(player, s);
            let there = game.pure_utilities(&dev);
            let delta = DeviationDelta { a: here[player] - there[player], b: here[other] - there[other] };
            out.push(Constraint {
                player,
                deviation: dev,
                delta,
                axis: if player == 0 { Axis::Horizontal } else { Axis::Vertical },
                bound: deviation_constraint(delta),
            });
        }
    }
    Ok(out)
}

/// Colonization space of `profile`: the closed polygon of `(c_{2,1}, c_{1,2})`
/// under which it is an equilibrium.
pub fn colonization_space_2x2(game: &StrategicGame, profile: &Profile) -> Result<ConvexRegion, SpaceError> {
    Ok(ConvexRegion::from_constraints(profile_constraints(game, profile)?))
}

/// Centroid of the colonization space mapped back to influence coordinates.
pub fn influence_centroid(game: &StrategicGame, profile: &Profile) -> Result<Point, SpaceError> {
    let h = region_centroid(&colonization_space_2x2(game, profile)?)?;
    let (x, y) = two_player_c_to_f(h.x, h.y)?;
    Ok(Point::new(x, y))
}

/// Whether `profile` is an equilibrium at influences `(f_{2,1}, f_{1,2})`.
pub fn influence_contains(region: &ConvexRegion, f: Point) -> bool {
    match two_player_f_to_c(f.x, f.y) {
        Ok((x, y)) => region.contains(Point::new(x, y)),
        Err(_) => false,
    }
}

/// Node coordinate `k` of an evenly spaced grid over `[−1, 1]`.
pub fn grid_coord(k: usize, resolution: usize) -> f64 {
    -1.0 + 2.0 * k as f64 / (resolution - 1) as f64
}

/// Boolean membership over a `resolution × resolution` node grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    pub resolution: usize,
    /// Row-major with `y` as the slow index.
    pub cells: Vec<bool>,
}

impl Raster {
    pub fn point(&self, idx: usize) -> Point {
        let (row, col) = (idx / self.resolution, idx % self.resolution);
        Point::new(grid_coord(col, self.resolution), grid_coord(row, self.resolution))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Point, bool)> + '_ {
        self.cells.iter().enumerate().map(|(k, &m)| (self.point(k), m))
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&m| m).count()
    }
}

/// Samples the influence space of `profile`. Grid nodes with `|f| = 1` lie
/// outside the admissible influences and are never members.
pub fn influence_space_sample(
    game: &StrategicGame,
    profile: &Profile,
    resolution: usize,
) -> Result<Raster, SpaceError> {
    if resolution < 2 {
        return Err(SpaceError::BadResolution);
    }
    let region = colonization_space_2x2(game, profile)?;
    let cells = (0..resolution * resolution)
        .into_par_iter()
        .map(|k| {
            let f = Point::new(grid_coord(k % resolution, resolution), grid_coord(k / resolution, resolution));
            influence_contains(&region, f)
        })
        .collect();
    Ok(Raster { resolution, cells })
}

/// How many profile regions contain one diamond sample.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionCell {
    pub point: Point,
    pub count: usize,
    /// Members by profile index in row-major order.
    pub members: Vec<usize>,
    /// Distance to the nearest constraint line of any profile.
    pub boundary_distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionReport {
    pub resolution: usize,
    pub profiles: Vec<Profile>,
    pub regions: Vec<ConvexRegion>,
    pub cells: Vec<PartitionCell>,
}

impl PartitionReport {
    /// Cells at least `margin` away from every constraint line.
    pub fn interior_cells(&self, margin: f64) -> impl Iterator<Item = &PartitionCell> {
        self.cells.iter().filter(move |c| c.boundary_distance > margin)
    }

    pub fn max_overlap(&self) -> usize {
        self.cells.iter().map(|c| c.count).max().unwrap_or(0)
    }
}

/// Counts region membership at every grid node strictly inside the diamond.
pub fn partition_report(game: &StrategicGame, resolution: usize) -> Result<PartitionReport, SpaceError> {
    if resolution < 2 {
        return Err(SpaceError::BadResolution);
    }
    let profiles: Vec<Profile> = game.profiles().collect();
    let regions = profiles.iter().map(|p| colonization_space_2x2(game, p)).collect::<Result<Vec<_>, _>>()?;
    let cells = (0..resolution * resolution)
        .into_par_iter()
        .filter_map(|k| {
            let p = Point::new(grid_coord(k % resolution, resolution), grid_coord(k / resolution, resolution));
            if p.x.abs() + p.y.abs() >= 1.0 {
                return None;
            }
            let members: Vec<usize> = (0..regions.len()).filter(|&r| regions[r].contains(p)).collect();
            let boundary_distance = regions.iter().map(|r| r.boundary_distance(p)).fold(f64::INFINITY, f64::min);
            Some(PartitionCell { point: p, count: members.len(), members, boundary_distance })
        })
        .collect();
    Ok(PartitionReport { resolution, profiles, regions, cells })
}

/// Distance from the origin.
pub fn energy(p: Point) -> f64 {
    p.x.hypot(p.y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::catalog::*;

    fn label(s: &str) -> Profile {
        Profile::from_label(s).unwrap()
    }

    #[test]
    fn deviation_thresholds() {
        assert_eq!(deviation_constraint(DeviationDelta { a: 1.0, b: -5.0 }), Bound::AtMost(1.0 / 6.0));
        assert_eq!(deviation_constraint(DeviationDelta { a: -1.0, b: 5.0 }), Bound::AtLeast(1.0 / 6.0));
        assert_eq!(deviation_constraint(DeviationDelta { a: 2.0, b: 0.0 }), Bound::All);
        assert_eq!(deviation_constraint(DeviationDelta { a: -1.0, b: 0.0 }), Bound::Empty);
    }

    #[test]
    fn pd_dr_region_and_centroid() {
        let g = prisoners_dilemma();
        let r = colonization_space_2x2(&g, &label("DR")).unwrap();
        let t: Vec<_> = r.constraints.iter().map(|c| c.bound).collect();
        assert_eq!(t, vec![Bound::AtMost(1.0 / 6.0), Bound::AtMost(1.0 / 6.0)]);
        assert!((r.area() - 5.0 / 6.0).abs() < 1e-14);
        let h = region_centroid(&r).unwrap();
        assert!((h.x + 4.0 / 15.0).abs() < 1e-14 && (h.y + 4.0 / 15.0).abs() < 1e-14);
        let hp = influence_centroid(&g, &label("DR")).unwrap();
        assert!((hp.x + 4.0 / 11.0).abs() < 1e-14 && (hp.y + 4.0 / 11.0).abs() < 1e-14);
    }

    #[test]
    fn pd_ul_region() {
        let g = prisoners_dilemma();
        let r = colonization_space_2x2(&g, &label("UL")).unwrap();
        // triangle (1/6, 1/6), (5/6, 1/6), (1/6, 5/6)
        assert!((r.area() - 2.0 / 9.0).abs() < 1e-14);
        let c = region_centroid(&r).unwrap();
        assert!((c.x - 7.0 / 18.0).abs() < 1e-14 && (c.y - 7.0 / 18.0).abs() < 1e-14);
        let dr = region_centroid(&colonization_space_2x2(&g, &label("DR")).unwrap()).unwrap();
        assert!(energy(c) > energy(dr));
        assert!((energy(dr) - 4.0 * 2f64.sqrt() / 15.0).abs() < 1e-14);
    }

    #[test]
    fn full_and_empty_regions() {
        let full = ConvexRegion::from_constraints(Vec::new());
        assert!((full.area() - 2.0).abs() < 1e-15);
        let c = region_centroid(&full).unwrap();
        assert!(c.x.abs() < 1e-15 && c.y.abs() < 1e-15);
        // player 1 strictly prefers deviating and player 2 does not care
        let g = StrategicGame::bimatrix(vec![vec![0.0, 0.0], vec![1.0, 0.0]], vec![vec![0.0, 0.0], vec![0.0, 0.0]])
            .unwrap();
        let r = colonization_space_2x2(&g, &label("UL")).unwrap();
        assert!(r.is_empty());
        assert_eq!(region_centroid(&r), Err(SpaceError::EmptyRegion));
    }

    #[test]
    fn influence_membership() {
        let g = prisoners_dilemma();
        let dr = colonization_space_2x2(&g, &label("DR")).unwrap();
        assert!(influence_contains(&dr, Point::new(-0.5, -0.5)));
        let ul = colonization_space_2x2(&g, &label("UL")).unwrap();
        assert!(!influence_contains(&ul, Point::new(0.0, 0.0)));
        let raster = influence_space_sample(&g, &label("DR"), 5).unwrap();
        // node 12 is the origin
        assert!(raster.cells[12]);
        assert_eq!(raster.point(12), Point::new(0.0, 0.0));
    }

    #[test]
    fn shared_boundary_counts_twice() {
        let g = prisoners_dilemma();
        let regions: Vec<_> = g.profiles().map(|p| colonization_space_2x2(&g, &p).unwrap()).collect();
        let p = Point::new(1.0 / 6.0, -0.3);
        assert_eq!(regions.iter().filter(|r| r.contains(p)).count(), 2);
    }
}
