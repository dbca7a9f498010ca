//! Command dispatch and artifact writing.

use crate::config::{Command, Format, RunConfig};
use crate::histogram::emit_histogram;
use crate::schema::{self, GameDoc, MatrixDoc, PowerInput, ScenarioDoc, SchemaError};
use crate::svg::{Frame, Svg};
use crate::{num, sig12, sig12_all};
use fgame_core::game::{pure_f_equilibria, GameError, Profile, StrategicGame};
use fgame_core::geometry::{
    colonization_space_2x2, energy, influence_space_sample, partition_report, region_centroid, Axis, Bound,
    ConvexRegion, Point, SpaceError,
};
use fgame_core::influence::{
    colonization, normalize_colonization, partial_colonization, two_player_c_to_f, InfluenceError,
};
use fgame_core::landowner::{labor_equilibria, landowner_equilibrium, reference_bounds, LandownerError};
use fgame_core::mixed::{mixed_equilibria_2x2, EquilibriumSet, Shape};
use fgame_core::power::{landowner_power_curve, potential_power_with, PowerError, PowerOptions, PowerReport};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("cannot read {path}: {source}")]
    Input { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Output { path: String, source: std::io::Error },
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("solver failed: {0}")]
    Solver(String),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Input { .. } => 2,
            RunError::Validation(_) => 3,
            RunError::Solver(_) => 4,
            RunError::Output { .. } => 1,
        }
    }
}

impl From<SchemaError> for RunError {
    fn from(e: SchemaError) -> Self {
        RunError::Validation(e.to_string())
    }
}

impl From<InfluenceError> for RunError {
    fn from(e: InfluenceError) -> Self {
        match e {
            InfluenceError::SingularSystem
            | InfluenceError::DegenerateColumn(_)
            | InfluenceError::NonPositiveSelfWeight { .. } => RunError::Solver(e.to_string()),
            _ => RunError::Validation(e.to_string()),
        }
    }
}

impl From<GameError> for RunError {
    fn from(e: GameError) -> Self {
        match e {
            GameError::Influence(inner) => inner.into(),
            _ => RunError::Validation(e.to_string()),
        }
    }
}

impl From<SpaceError> for RunError {
    fn from(e: SpaceError) -> Self {
        match e {
            SpaceError::Influence(inner) => inner.into(),
            SpaceError::Game(inner) => inner.into(),
            _ => RunError::Validation(e.to_string()),
        }
    }
}

impl From<LandownerError> for RunError {
    fn from(e: LandownerError) -> Self {
        match e {
            LandownerError::Influence(inner) => inner.into(),
            LandownerError::InvalidScenario(_) => RunError::Validation(e.to_string()),
            _ => RunError::Solver(e.to_string()),
        }
    }
}

impl From<PowerError> for RunError {
    fn from(e: PowerError) -> Self {
        match e {
            PowerError::Game(inner) => inner.into(),
            PowerError::Landowner(inner) => inner.into(),
            PowerError::Influence(inner) => inner.into(),
            PowerError::NoEquilibrium(_) => RunError::Solver(e.to_string()),
            _ => RunError::Validation(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ManifestEntry {
    pub file: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportBundle {
    pub metadata: Metadata,
    pub files: Vec<ManifestEntry>,
}

/// Artifacts of one command, in emission order.
struct Artifacts {
    files: Vec<(String, String)>,
}

impl Artifacts {
    fn new() -> Self {
        Self { files: Vec::new() }
    }

    fn add(&mut self, name: impl Into<String>, body: String) {
        self.files.push((name.into(), body));
    }
}

pub fn run(config: &RunConfig) -> Result<ReportBundle, RunError> {
    let text = std::fs::read_to_string(&config.input_path)
        .map_err(|source| RunError::Input { path: config.input_path.display().to_string(), source })?;
    let mut out = Artifacts::new();
    match config.command {
        Command::Colonize => colonize(config, &schema::parse(&text)?, &mut out)?,
        Command::Equilibria => equilibria(config, &schema::parse(&text)?, &mut out)?,
        Command::Space => space(config, &schema::parse(&text)?, &mut out)?,
        Command::Landowner => landowner(config, &schema::parse(&text)?, &mut out)?,
        Command::Power => power(config, &schema::parse(&text)?, &mut out)?,
    }
    write_bundle(config, out)
}

fn write_bundle(config: &RunConfig, out: Artifacts) -> Result<ReportBundle, RunError> {
    let dir = &config.output_dir;
    let io = |path: &Path| {
        let path = path.display().to_string();
        move |source| RunError::Output { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    let mut files = Vec::new();
    for (name, body) in out.files {
        let path = dir.join(&name);
        std::fs::write(&path, &body).map_err(io(&path))?;
        files.push(ManifestEntry {
            file: name,
            bytes: body.len(),
            sha256: format!("{:x}", Sha256::digest(body.as_bytes())),
        });
    }
    let bundle = ReportBundle {
        metadata: Metadata { tool: "fgame".into(), version: env!("CARGO_PKG_VERSION").into(), config: config.clone() },
        files,
    };
    let path = dir.join("manifest.json");
    std::fs::write(&path, schema::emit(&bundle)).map_err(io(&path))?;
    Ok(bundle)
}

fn rows12(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    rows.iter().map(|r| sig12_all(r)).collect()
}

fn pt(p: Point) -> [f64; 2] {
    [sig12(p.x), sig12(p.y)]
}

// ---------------------------------------------------------------- colonize

#[derive(Serialize)]
struct ColonizeReport<'a> {
    influence: &'a MatrixDoc,
    partial: Vec<Vec<f64>>,
    colonization: Vec<Vec<f64>>,
}

fn colonize(config: &RunConfig, doc: &MatrixDoc, out: &mut Artifacts) -> Result<(), RunError> {
    let f = doc.to_influence()?;
    let partial = partial_colonization(&f)?;
    let c = normalize_colonization(partial.clone())?;
    if config.wants(Format::Json) {
        let report = ColonizeReport { influence: doc, partial: rows12(&partial), colonization: rows12(&c.to_rows()) };
        out.add("colonization.json", schema::emit(&report));
    }
    let hist = emit_histogram(&c, None);
    if config.wants(Format::Csv) {
        out.add("colonization.csv", hist.csv);
    }
    if config.wants(Format::Svg) {
        out.add("colonization.svg", hist.svg);
    }
    Ok(())
}

// -------------------------------------------------------------- equilibria

fn profile_name(p: &Profile) -> String {
    p.label().map_or_else(|| p.0.iter().map(usize::to_string).collect::<Vec<_>>().join("."), str::to_string)
}

#[derive(Serialize)]
struct ProfileRow {
    profile: String,
    strategies: Vec<usize>,
    equilibrium: bool,
    pure_utilities: Vec<f64>,
    mixed_utilities: Vec<f64>,
}

#[derive(Serialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
enum ShapeDoc {
    Point { p: f64, q: f64 },
    Segments { segments: Vec<[[f64; 2]; 2]> },
    Region { p: [f64; 2], q: [f64; 2] },
}

#[derive(Serialize)]
struct ComponentDoc {
    #[serde(flatten)]
    shape: ShapeDoc,
    mean_payoffs: Vec<f64>,
}

#[derive(Serialize)]
struct EquilibriaReport {
    players: Vec<String>,
    colonization: Vec<Vec<f64>>,
    pure_equilibria: Vec<String>,
    profiles: Vec<ProfileRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mixed: Option<Vec<ComponentDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mean_welfare: Option<Vec<f64>>,
}

fn shape_doc(shape: &Shape) -> ShapeDoc {
    match shape {
        Shape::Point(p, q) => ShapeDoc::Point { p: sig12(*p), q: sig12(*q) },
        Shape::Segments(segs) => ShapeDoc::Segments {
            segments: segs
                .iter()
                .map(|s| [[sig12(s.start.0), sig12(s.start.1)], [sig12(s.end.0), sig12(s.end.1)]])
                .collect(),
        },
        Shape::Region { p, q } => ShapeDoc::Region { p: [sig12(p.0), sig12(p.1)], q: [sig12(q.0), sig12(q.1)] },
    }
}

fn equilibria(config: &RunConfig, doc: &GameDoc, out: &mut Artifacts) -> Result<(), RunError> {
    let game = doc.to_game()?;
    let f = doc.influence()?;
    let c = game.colonize(&f)?;
    let eq = pure_f_equilibria(&game, &f)?;
    let n = game.n_players();
    let names: Vec<String> = (0..n).map(|k| doc.name(k)).collect();
    let rows: Vec<ProfileRow> = game
        .profiles()
        .map(|p| {
            let u = game.pure_utilities(&p);
            ProfileRow {
                profile: profile_name(&p),
                equilibrium: eq.contains(&p),
                mixed_utilities: sig12_all(&(0..n).map(|i| c.mixed_utility(i, &u)).collect::<Vec<_>>()),
                pure_utilities: sig12_all(&u),
                strategies: p.0,
            }
        })
        .collect();
    let two_by_two = n == 2 && game.strategy_counts().iter().all(|&m| m <= 2);
    let mixed = if two_by_two { Some(mixed_equilibria_2x2(&game, &f)?) } else { None };

    if config.wants(Format::Json) {
        let report = EquilibriaReport {
            players: names.clone(),
            colonization: rows12(&c.to_rows()),
            pure_equilibria: eq.iter().map(profile_name).collect(),
            mixed: mixed.as_ref().map(|set| {
                set.components
                    .iter()
                    .map(|comp| ComponentDoc {
                        shape: shape_doc(&comp.shape),
                        mean_payoffs: sig12_all(&comp.mean_payoffs),
                    })
                    .collect()
            }),
            mean_welfare: mixed.as_ref().map(|set| (0..2).map(|i| sig12(set.mean_welfare(i))).collect()),
            profiles: rows,
        };
        out.add("equilibria.json", schema::emit(&report));
    }
    if config.wants(Format::Csv) {
        let mut csv = String::from("profile,equilibrium");
        for name in &names {
            write!(csv, ",u_{name}").unwrap();
        }
        for name in &names {
            write!(csv, ",U_{name}").unwrap();
        }
        csv.push('\n');
        for p in game.profiles() {
            let u = game.pure_utilities(&p);
            write!(csv, "{},{}", profile_name(&p), eq.contains(&p)).unwrap();
            for v in &u {
                write!(csv, ",{}", num(*v)).unwrap();
            }
            for i in 0..n {
                write!(csv, ",{}", num(c.mixed_utility(i, &u))).unwrap();
            }
            csv.push('\n');
        }
        out.add("equilibria.csv", csv);
    }
    if let (true, Some(set)) = (config.wants(Format::Svg), &mixed) {
        out.add("equilibria.svg", equilibria_svg(set, &names));
    }
    Ok(())
}

fn equilibria_svg(set: &EquilibriumSet, names: &[String]) -> String {
    let frame = Frame { x: (0.0, 1.0), y: (0.0, 1.0), left: 60.0, top: 20.0, width: 300.0, height: 300.0 };
    let mut svg = Svg::new(400.0, 380.0);
    let corners: Vec<(f64, f64)> =
        [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)].iter().map(|&(x, y)| frame.map(x, y)).collect();
    svg.polygon(&corners, "none", 0.0, "black");
    for (k, comp) in set.components.iter().enumerate() {
        let color = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd"][k % 4];
        match &comp.shape {
            Shape::Point(p, q) => svg.circle(frame.map(*p, *q), 5.0, color),
            Shape::Segments(segs) => {
                for s in segs {
                    svg.line(frame.map(s.start.0, s.start.1), frame.map(s.end.0, s.end.1), color, 3.0);
                }
            }
            Shape::Region { p, q } => {
                let pts = [(p.0, q.0), (p.1, q.0), (p.1, q.1), (p.0, q.1)].map(|(x, y)| frame.map(x, y));
                svg.polygon(&pts, color, 0.4, color);
            }
        }
    }
    let (bx, by) = frame.map(0.5, 0.0);
    svg.text((bx, by + 30.0), 12.0, "middle", &format!("p = P({} plays first strategy)", names[0]));
    let (lx, ly) = frame.map(0.0, 0.5);
    svg.text((lx - 10.0, ly), 12.0, "end", "q");
    svg.text((lx - 10.0, ly + 14.0), 10.0, "end", &names[1]);
    for t in [0.0, 1.0] {
        let (x, y) = frame.map(t, 0.0);
        svg.text((x, y + 14.0), 10.0, "middle", &format!("{t:.0}"));
        let (x, y) = frame.map(0.0, t);
        svg.text((x - 4.0, y + 4.0), 10.0, "end", &format!("{t:.0}"));
    }
    svg.finish()
}

// ------------------------------------------------------------------- space

#[derive(Serialize)]
struct BoundDoc {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    threshold: Option<f64>,
}

#[derive(Serialize)]
struct ConstraintDoc {
    player: String,
    deviation: String,
    own_loss: f64,
    other_loss: f64,
    coordinate: &'static str,
    bound: BoundDoc,
}

#[derive(Serialize)]
struct RegionDoc {
    profile: String,
    nash: bool,
    constraints: Vec<ConstraintDoc>,
    vertices: Vec<[f64; 2]>,
    area: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    centroid: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    influence_centroid: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    energy: Option<f64>,
    influence_raster_share: f64,
}

#[derive(Serialize)]
struct SpaceReport {
    players: Vec<String>,
    resolution: usize,
    regions: Vec<RegionDoc>,
    max_overlap: usize,
    uncovered_interior_points: usize,
}

fn axis_name(axis: Axis) -> &'static str {
    match axis {
        Axis::Horizontal => "c21",
        Axis::Vertical => "c12",
    }
}

fn bound_doc(b: Bound) -> BoundDoc {
    match b {
        Bound::All => BoundDoc { kind: "all", threshold: None },
        Bound::Empty => BoundDoc { kind: "empty", threshold: None },
        Bound::AtLeast(t) => BoundDoc { kind: "at_least", threshold: Some(sig12(t)) },
        Bound::AtMost(t) => BoundDoc { kind: "at_most", threshold: Some(sig12(t)) },
    }
}

struct ProfileSpace {
    profile: Profile,
    region: ConvexRegion,
    centroid: Option<Point>,
    image: Option<Point>,
}

fn space(config: &RunConfig, doc: &GameDoc, out: &mut Artifacts) -> Result<(), RunError> {
    let game = doc.to_game()?;
    let names: Vec<String> = (0..game.n_players()).map(|k| doc.name(k)).collect();
    let profiles: Vec<Profile> = match &config.profile {
        Some(label) => vec![Profile::from_label(label)?],
        None => game.profiles().collect(),
    };
    let mut spaces = Vec::new();
    for p in &profiles {
        let region = colonization_space_2x2(&game, p)?;
        let centroid = if region.is_empty() { None } else { Some(region_centroid(&region)?) };
        let image = centroid.and_then(|h| two_player_c_to_f(h.x, h.y).ok()).map(|(x, y)| Point::new(x, y));
        spaces.push(ProfileSpace { profile: p.clone(), region, centroid, image });
    }
    let res = config.resolution;
    let rasters = profiles.iter().map(|p| influence_space_sample(&game, p, res)).collect::<Result<Vec<_>, _>>()?;
    let partition = partition_report(&game, res)?;

    if config.wants(Format::Json) {
        let origin = Point::new(0.0, 0.0);
        let regions = spaces
            .iter()
            .zip(&rasters)
            .map(|(s, raster)| RegionDoc {
                profile: profile_name(&s.profile),
                nash: s.region.contains(origin),
                constraints: s
                    .region
                    .constraints
                    .iter()
                    .map(|c| ConstraintDoc {
                        player: names[c.player].clone(),
                        deviation: profile_name(&c.deviation),
                        own_loss: sig12(c.delta.a),
                        other_loss: sig12(c.delta.b),
                        coordinate: axis_name(c.axis),
                        bound: bound_doc(c.bound),
                    })
                    .collect(),
                vertices: s.region.vertices.iter().map(|&v| pt(v)).collect(),
                area: sig12(s.region.area()),
                centroid: s.centroid.map(pt),
                influence_centroid: s.image.map(pt),
                energy: s.image.map(|p| sig12(energy(p))),
                influence_raster_share: sig12(raster.count() as f64 / raster.cells.len() as f64),
            })
            .collect();
        let report = SpaceReport {
            players: names.clone(),
            resolution: res,
            regions,
            max_overlap: partition.max_overlap(),
            uncovered_interior_points: partition.interior_cells(1e-9).filter(|c| c.count == 0).count(),
        };
        out.add("space.json", schema::emit(&report));
    }
    if config.wants(Format::Csv) {
        let mut csv = String::from("c21,c12");
        for s in &spaces {
            write!(csv, ",{}", profile_name(&s.profile)).unwrap();
        }
        csv.push('\n');
        for cell in &partition.cells {
            write!(csv, "{},{}", num(cell.point.x), num(cell.point.y)).unwrap();
            for s in &spaces {
                write!(csv, ",{}", u8::from(s.region.contains(cell.point))).unwrap();
            }
            csv.push('\n');
        }
        out.add("space_colonization.csv", csv);

        let mut csv = String::from("f21,f12");
        for s in &spaces {
            write!(csv, ",{}", profile_name(&s.profile)).unwrap();
        }
        csv.push('\n');
        for k in 0..res * res {
            let p = rasters[0].point(k);
            write!(csv, "{},{}", num(p.x), num(p.y)).unwrap();
            for r in &rasters {
                write!(csv, ",{}", u8::from(r.cells[k])).unwrap();
            }
            csv.push('\n');
        }
        out.add("space_influence.csv", csv);
    }
    if config.wants(Format::Svg) {
        out.add("space.svg", space_svg(&spaces, &names));
    }
    Ok(())
}

fn space_svg(spaces: &[ProfileSpace], names: &[String]) -> String {
    let frame = Frame { x: (-1.0, 1.0), y: (-1.0, 1.0), left: 60.0, top: 30.0, width: 400.0, height: 400.0 };
    let mut svg = Svg::new(860.0, 490.0);
    let diamond: Vec<(f64, f64)> =
        [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)].iter().map(|&(x, y)| frame.map(x, y)).collect();
    svg.polygon(&diamond, "none", 0.0, "black");
    svg.line(frame.map(-1.0, 0.0), frame.map(1.0, 0.0), "#999999", 0.5);
    svg.line(frame.map(0.0, -1.0), frame.map(0.0, 1.0), "#999999", 0.5);

    // equilibria at the origin first, then the rest
    let origin = Point::new(0.0, 0.0);
    let (mut nash_colors, mut other_colors) =
        (["#2ca02c", "#d62728"].iter().cycle(), ["#1f77b4", "#9467bd"].iter().cycle());
    let mut legend = Vec::new();
    for s in spaces {
        let color = if s.region.contains(origin) { nash_colors.next() } else { other_colors.next() }.unwrap();
        if !s.region.is_empty() {
            let pts: Vec<(f64, f64)> = s.region.vertices.iter().map(|v| frame.map(v.x, v.y)).collect();
            svg.polygon(&pts, color, 0.35, color);
        }
        legend.push((profile_name(&s.profile), *color, s));
    }
    let mut placed: Vec<Point> = Vec::new();
    for (name, _, s) in &legend {
        if let Some(h) = s.centroid {
            // stack labels of coinciding centroids
            let below = placed.iter().filter(|p| (p.x - h.x).abs() + (p.y - h.y).abs() < 0.05).count() as f64;
            placed.push(h);
            let at = frame.map(h.x, h.y);
            svg.circle(at, 3.5, "black");
            svg.text(
                (at.0 + 6.0, at.1 - 6.0 + 13.0 * below),
                11.0,
                "start",
                &format!("{name} ({}, {})", num(h.x), num(h.y)),
            );
        }
    }
    let lx = frame.left + frame.width + 30.0;
    for (k, (name, color, s)) in legend.iter().enumerate() {
        let y = frame.top + 20.0 + 64.0 * k as f64;
        svg.rect(lx, y, 12.0, 12.0, color, color);
        svg.text((lx + 18.0, y + 10.0), 12.0, "start", &format!("{name}, area {}", num(s.region.area())));
        if let Some(h) = s.centroid {
            svg.text((lx + 18.0, y + 26.0), 11.0, "start", &format!("centroid ({}, {})", num(h.x), num(h.y)));
        }
        if let Some(f) = s.image {
            svg.text((lx + 18.0, y + 40.0), 11.0, "start", &format!("in influence ({}, {})", num(f.x), num(f.y)));
        }
    }
    let (bx, by) = frame.map(0.0, -1.0);
    svg.text((bx, by + 30.0), 12.0, "middle", &format!("c21: weight of {} in {}", names[1], names[0]));
    let (lx, ly) = frame.map(-1.0, 0.0);
    svg.text((lx - 8.0, ly - 8.0), 12.0, "end", "c12");
    svg.finish()
}

// --------------------------------------------------------------- landowner

#[derive(Serialize)]
struct EquilibriumDoc {
    quantities: Vec<f64>,
    total: f64,
    wage: f64,
    pure_utilities: Vec<f64>,
    mixed_utilities: Vec<f64>,
    active_set_rounds: usize,
}

#[derive(Serialize)]
struct BoundsDoc {
    max_quantity: f64,
    min_quantity: f64,
    max_wage: f64,
}

#[derive(Serialize)]
struct LandownerReport<'a> {
    scenario: &'a ScenarioDoc,
    nodes: Vec<String>,
    colonization: Vec<Vec<f64>>,
    equilibrium: EquilibriumDoc,
    equilibrium_count: usize,
    bounds: BoundsDoc,
}

fn landowner(config: &RunConfig, doc: &ScenarioDoc, out: &mut Artifacts) -> Result<(), RunError> {
    let scenario = doc.to_scenario()?;
    let e = landowner_equilibrium(&scenario)?;
    let count = labor_equilibria(&scenario)?.len();
    let c = colonization(&scenario.influence)?;
    let nodes: Vec<String> = (0..=doc.peasants).map(ScenarioDoc::name).collect();
    if config.wants(Format::Json) {
        let b = reference_bounds(doc.a, doc.cost);
        let report = LandownerReport {
            scenario: doc,
            nodes: nodes.clone(),
            colonization: rows12(&c.to_rows()),
            equilibrium: EquilibriumDoc {
                quantities: sig12_all(&e.quantities),
                total: sig12(e.total),
                wage: sig12(e.wage),
                pure_utilities: sig12_all(&e.pure_utilities),
                mixed_utilities: sig12_all(&e.mixed_utilities),
                active_set_rounds: e.rounds,
            },
            equilibrium_count: count,
            bounds: BoundsDoc {
                max_quantity: sig12(b.max_q),
                min_quantity: sig12(b.min_q),
                max_wage: sig12(b.max_wage),
            },
        };
        out.add("landowner.json", schema::emit(&report));
    }
    if config.wants(Format::Csv) {
        let mut csv = String::from("series,node,value\n");
        writeln!(csv, "wage,market,{}", num(e.wage)).unwrap();
        writeln!(csv, "total,market,{}", num(e.total)).unwrap();
        for (k, q) in e.quantities.iter().enumerate() {
            writeln!(csv, "quantity,{},{}", nodes[k + 1], num(*q)).unwrap();
        }
        for (k, u) in e.pure_utilities.iter().enumerate() {
            writeln!(csv, "pure_utility,{},{}", nodes[k], num(*u)).unwrap();
        }
        for (k, u) in e.mixed_utilities.iter().enumerate() {
            writeln!(csv, "mixed_utility,{},{}", nodes[k], num(*u)).unwrap();
        }
        out.add("landowner.csv", csv);
    }
    if config.wants(Format::Svg) {
        out.add("landowner.svg", landowner_svg(&nodes, &e.pure_utilities, &e.quantities, e.wage));
    }
    Ok(())
}

fn landowner_svg(nodes: &[String], utilities: &[f64], quantities: &[f64], wage: f64) -> String {
    let top = utilities.iter().chain(quantities).fold(1.0_f64, |m, v| m.max(v.abs()));
    let bottom = utilities.iter().fold(0.0_f64, |m, &v| m.min(v));
    let width = 60.0 * nodes.len() as f64 + 40.0;
    let frame = Frame { x: (0.0, 1.0), y: (bottom, top * 1.1), left: 60.0, top: 40.0, width, height: 260.0 };
    let mut svg = Svg::new(frame.left + width + 140.0, 360.0);
    let (x0, y0) = frame.map(0.0, 0.0);
    svg.line((x0, y0), (x0 + width, y0), "black", 1.0);
    for (k, name) in nodes.iter().enumerate() {
        let left = x0 + 20.0 + 60.0 * k as f64;
        let (_, yu) = frame.map(0.0, utilities[k]);
        svg.rect(left, yu.min(y0), 22.0, (y0 - yu).abs(), "#4e79a7", "#4e79a7");
        if k > 0 {
            let (_, yq) = frame.map(0.0, quantities[k - 1]);
            svg.rect(left + 24.0, yq.min(y0), 22.0, (y0 - yq).abs(), "#f28e2b", "#f28e2b");
        }
        svg.text((left + 23.0, y0 + 16.0), 12.0, "middle", name);
    }
    let lx = x0 + width + 20.0;
    svg.rect(lx, frame.top, 12.0, 12.0, "#4e79a7", "#4e79a7");
    svg.text((lx + 18.0, frame.top + 10.0), 12.0, "start", "pure utility");
    svg.rect(lx, frame.top + 20.0, 12.0, 12.0, "#f28e2b", "#f28e2b");
    svg.text((lx + 18.0, frame.top + 30.0), 12.0, "start", "labor");
    svg.text((lx, frame.top + 56.0), 12.0, "start", &format!("wage {}", num(wage)));
    svg.finish()
}

// ------------------------------------------------------------------- power

#[derive(Serialize)]
struct PowerDoc {
    source: String,
    target: String,
    power: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    normalized: Option<f64>,
    positive_side: f64,
    negative_side: f64,
    discontinuities: Vec<f64>,
    samples: Vec<[f64; 2]>,
}

fn power(config: &RunConfig, doc: &PowerInput, out: &mut Artifacts) -> Result<(), RunError> {
    let opts = PowerOptions { resolution: config.resolution, ..PowerOptions::default() };
    let (source_key, target_key) = (config.source.as_deref().unwrap_or(""), config.target.as_deref().unwrap_or(""));
    let (report, names): (PowerReport, (String, String)) = match doc {
        PowerInput::Game(g) => {
            let game: StrategicGame = g.to_game()?;
            let (s, t) = (g.lookup(source_key)?, g.lookup(target_key)?);
            (potential_power_with(&game, s, t, &opts)?, (g.name(s), g.name(t)))
        }
        PowerInput::Scenario(sc) => {
            if !sc.edges.is_empty() {
                return Err(RunError::Validation(
                    "power on a scenario uses only the source-target edge; remove `edges`".into(),
                ));
            }
            let (s, t) = (sc.lookup(source_key)?, sc.lookup(target_key)?);
            (
                landowner_power_curve(sc.peasants, sc.a, sc.cost, s, t, &opts)?,
                (ScenarioDoc::name(s), ScenarioDoc::name(t)),
            )
        }
    };
    if config.wants(Format::Json) {
        let d = PowerDoc {
            source: names.0.clone(),
            target: names.1.clone(),
            power: sig12(report.power),
            normalized: report.normalized.map(sig12),
            positive_side: sig12(report.positive_side),
            negative_side: sig12(report.negative_side),
            discontinuities: sig12_all(&report.curve.discontinuities),
            samples: report.curve.samples.iter().map(|&(f, y)| [sig12(f), sig12(y)]).collect(),
        };
        out.add("power.json", schema::emit(&d));
    }
    if config.wants(Format::Csv) {
        let mut csv = String::from("f,welfare\n");
        for &(f, y) in &report.curve.samples {
            writeln!(csv, "{},{}", num(f), num(y)).unwrap();
        }
        out.add("power.csv", csv);
    }
    if config.wants(Format::Svg) {
        out.add("power.svg", power_svg(&report, &names));
    }
    Ok(())
}

fn power_svg(report: &PowerReport, names: &(String, String)) -> String {
    let samples = &report.curve.samples;
    let span = samples.iter().fold(1e-12_f64, |m, s| m.max(s.1.abs())) * 1.1;
    let frame = Frame { x: (-1.0, 1.0), y: (-span, span), left: 90.0, top: 30.0, width: 420.0, height: 280.0 };
    let mut svg = Svg::new(560.0, 370.0);
    let area = |clip: fn(f64) -> f64| -> Vec<(f64, f64)> {
        let mut pts = vec![frame.map(samples[0].0, 0.0)];
        pts.extend(samples.iter().map(|&(f, y)| frame.map(f, clip(y))));
        pts.push(frame.map(samples[samples.len() - 1].0, 0.0));
        pts
    };
    svg.polygon(&area(|y| y.max(0.0)), "#2ca02c", 0.35, "none");
    svg.polygon(&area(|y| y.min(0.0)), "#d62728", 0.35, "none");
    // break the polyline at jumps
    let mut run: Vec<(f64, f64)> = Vec::new();
    let mut jumps = report.curve.discontinuities.iter().peekable();
    for w in samples.windows(2) {
        if run.is_empty() {
            run.push(frame.map(w[0].0, w[0].1));
        }
        if jumps.peek().is_some_and(|&&d| d > w[0].0 && d <= w[1].0) {
            jumps.next();
            svg.polyline(&run, "black");
            run.clear();
            continue;
        }
        run.push(frame.map(w[1].0, w[1].1));
    }
    if run.is_empty() {
        let last = samples[samples.len() - 1];
        run.push(frame.map(last.0, last.1));
    }
    svg.polyline(&run, "black");
    svg.line(frame.map(-1.0, 0.0), frame.map(1.0, 0.0), "#999999", 0.5);
    svg.line(frame.map(0.0, -span), frame.map(0.0, span), "#999999", 0.5);
    let (bx, by) = frame.map(0.0, -span);
    svg.text((bx, by + 30.0), 12.0, "middle", &format!("sympathy of {} for {}", names.0, names.1));
    svg.text((frame.left - 8.0, frame.top + 10.0), 11.0, "end", &format!("{span:.4}"));
    svg.text((frame.left - 8.0, frame.top + frame.height), 11.0, "end", &format!("{:.4}", -span));
    for t in [-1.0, 0.0, 1.0] {
        let (x, y) = frame.map(t, -span);
        svg.text((x, y + 14.0), 10.0, "middle", &format!("{t:.0}"));
    }
    let mut caption = format!("power {}", num(report.power));
    if let Some(p) = report.normalized {
        write!(caption, ", normalized {}", num(p)).unwrap();
    }
    svg.text((frame.left + 8.0, frame.top + 14.0), 12.0, "start", &caption);
    svg.finish()
}
