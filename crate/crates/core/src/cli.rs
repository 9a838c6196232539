//! JSON job layer behind the `sf` binary.
//!
//! A job names a triangle (by vertices or by side lengths), weights and
//! command options; the result is a document with a fixed field order and
//! every float printed with 17 significant digits, so identical jobs give
//! byte-identical output.

use std::fs;
use std::io::{self, BufRead, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};

use crate::apollonius::{apollonian_common_points, TildeTriangle};
use crate::billiards::{simulate, solve_river, BilliardState, RiverInstance, RiverSolution};
use crate::construction::{
    coeffs_from_weights, snell_fagnano_point, verify_snell_point, OrbitStatus, RefractionCoeffs,
    SnellOrbitResult, Weights,
};
use crate::coords::{
    conway_data, from_barycentric, isogonal_conjugate_point, to_barycentric, to_trilinear,
    trilinear_to_barycentric, tripolar_of_point, tripolar_to_points, Barycentric, Trilinear,
    Tripolar,
};
use crate::error::Error;
use crate::geometry::{InscribedTriangle, Point2, Side, Triangle};
use crate::optimize::{minimize_inscribed, MinimizeOptions, MinimizeReport};
use crate::svg::{render_svg, RenderOptions};
use crate::tolerance::Tolerances;

pub const VERSION: &str = concat!("snell-fagnano ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Point,
    Convert,
    Simulate,
    Minimize,
    River,
    Render,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Point => "point",
            Command::Convert => "convert",
            Command::Simulate => "simulate",
            Command::Minimize => "minimize",
            Command::River => "river",
            Command::Render => "render",
        }
    }
}

/// Command-line arguments of `sf`.
#[derive(Debug, Clone, Parser)]
#[command(name = "sf", version, about = "Weighted Fagnano points and Snell billiards")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Job file (JSON); stdin when absent.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Override for the generic residual tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// JSON file with tolerance overrides.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// JSON-lines file of jobs; one compact result per line, in input order.
    #[arg(long, conflicts_with = "input")]
    pub batch: Option<PathBuf>,
    /// Write the figure of the job to this SVG file.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Worker threads for --batch.
    #[arg(long, default_value_t = 4)]
    pub jobs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TriangleSpec {
    Vertices([[f64; 2]; 3]),
    Sides([f64; 3]),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoordKind {
    Barycentric,
    Trilinear,
    Tripolar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoordSpec {
    pub kind: CoordKind,
    pub values: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StartSpec {
    /// `"orbit"`: the vertex A' of the constructed orbit, heading to B'.
    Named(String),
    Toward {
        side: Side,
        param: f64,
        toward: [f64; 2],
    },
    Direction {
        side: Side,
        param: f64,
        direction: [f64; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiverSpec {
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub line: [[f64; 2]; 2],
    pub lam1: f64,
    pub lam2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderSpec {
    pub apollonian: bool,
}

/// One job. Only the fields the command needs are read.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triangle: Option<TriangleSpec>,
    #[serde(default = "unit_weights")]
    pub weights: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<CoordSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<StartSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    /// Refraction coefficients for `simulate`; derived from the weights when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimize: Option<MinimizeOptions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub river: Option<RiverSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub render: Option<RenderSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
}

fn unit_weights() -> [f64; 3] {
    [1.0, 1.0, 1.0]
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("invalid job: {0}")]
    Job(String),
    #[error("no interior construction: {0}")]
    Nonexistence(String),
    #[error("i/o failure: {0}")]
    Io(String),
}

impl CliError {
    /// 0 success, 2 invalid input, 3 nonexistence, 4 dynamics failure,
    /// 5 I/O failure, 1 internal consistency failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Job(_) => 2,
            CliError::Nonexistence(_) => 3,
            CliError::Io(_) => 5,
            CliError::Core(e) => match e {
                Error::TriangleInequalityViolated(..)
                | Error::DegenerateTriangle { .. }
                | Error::DegenerateLine
                | Error::IdealPoint
                | Error::OnSideLine(_)
                | Error::InvalidInput(_) => 2,
                Error::SingularConversion | Error::NoSuchPoint | Error::TildeDegenerate => 3,
                Error::TotalInternalReflection { .. } | Error::HitVertex | Error::Dynamics { .. } => 4,
                Error::ConcurrencyViolation { .. }
                | Error::ThirdCircleMissed { .. }
                | Error::InteriorMismatch { .. } => 1,
            },
        }
    }

    fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "invalid_input",
            3 => "nonexistence",
            4 => "dynamics",
            5 => "io",
            _ => "internal",
        }
    }
}

/// Resolved triangle as used by the computation.
#[derive(Debug, Clone, Serialize)]
pub struct TriangleInfo {
    pub vertices: [Point2; 3],
    pub sides: [f64; 3],
    pub angles: [f64; 3],
    pub area: f64,
    /// Input vertices were clockwise; B and C (and their weights and
    /// coordinates) were swapped.
    pub reoriented: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointCoords {
    pub cartesian: Point2,
    pub barycentric: [f64; 3],
    pub barycentric_normalized: [f64; 3],
    pub trilinear: [f64; 3],
    pub trilinear_normalized: Option<[f64; 3]>,
    pub tripolar: [f64; 3],
    pub tripolar_normalized: [f64; 3],
}

impl PointCoords {
    pub fn of(p: Point2, tri: &Triangle) -> Self {
        let bn = to_barycentric(p, tri);
        let area = tri.area();
        let tl = to_trilinear(p, tri);
        let tp = tripolar_of_point(p, tri);
        PointCoords {
            cartesian: p,
            barycentric: bn.0.map(|x| x * area),
            barycentric_normalized: bn.0,
            trilinear: tl.0,
            trilinear_normalized: tl.normalized().ok().map(|t| t.0),
            tripolar: tp.0,
            tripolar_normalized: tp.normalized().0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TildeInfo {
    pub sides: [f64; 3],
    pub angles: Option<[f64; 3]>,
    pub exists: bool,
    pub failing_inequality: Option<String>,
}

impl TildeInfo {
    fn of(t: &TildeTriangle) -> Self {
        TildeInfo {
            sides: t.sides,
            angles: t.angles,
            exists: t.exists,
            failing_inequality: failing_inequality(t),
        }
    }
}

fn failing_inequality(t: &TildeTriangle) -> Option<String> {
    if t.exists {
        return None;
    }
    let names = ["λA·a", "λB·b", "λC·c"];
    let i = t.failing_side()?;
    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
    Some(format!(
        "{} < {} + {} fails: {:.16e} >= {:.16e} + {:.16e}",
        names[i], names[j], names[k], t.sides[i], t.sides[j], t.sides[k]
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjugateInfo {
    pub cartesian: Point2,
    /// Vertex distances divided by the weights; equal for the Snell point.
    pub tripolar_over_weights: [f64; 3],
    pub max_relative_spread: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub constructed_cost: f64,
    pub relative_gap: f64,
    pub max_vertex_distance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointOutput {
    pub triangle: TriangleInfo,
    pub weights: [f64; 3],
    pub kappa: [f64; 3],
    pub tilde: TildeInfo,
    pub conditions: Option<[bool; 3]>,
    pub point: Option<PointCoords>,
    pub orbit: Option<InscribedTriangle>,
    pub weighted_perimeter: f64,
    pub concurrency_residual: Option<f64>,
    pub snell_residuals: Option<[f64; 3]>,
    pub conjugate: Option<ConjugateInfo>,
    pub erected: Option<[Point2; 3]>,
    pub fallback: Option<FallbackInfo>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FallbackInfo {
    pub weighted_choice: Side,
    pub shortest_altitude: Side,
    pub altitude_costs: [f64; 3],
    pub altitude_lengths: [f64; 3],
    pub admissible: [bool; 3],
    pub orbit: InscribedTriangle,
    pub brute_force: MinimizeReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConwayInfo {
    pub f: f64,
    pub s2_plus: Option<f64>,
    pub s2_minus: Option<f64>,
    pub tilde_exists: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvertOutput {
    pub triangle: TriangleInfo,
    pub kind: CoordKind,
    pub values: [f64; 3],
    pub candidates: Vec<PointCoords>,
    pub conway: Option<ConwayInfo>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StateInfo {
    pub side: Side,
    pub param: f64,
    pub point: Point2,
    pub direction: Point2,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulateOutput {
    pub triangle: TriangleInfo,
    pub kappa: [f64; 3],
    pub steps: usize,
    pub trajectory: Vec<StateInfo>,
    /// Whether state 3 equals state 0 within 1e-8 (present when steps ≥ 3).
    pub periodic: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimizeOutput {
    pub triangle: TriangleInfo,
    pub weights: [f64; 3],
    pub report: MinimizeReport,
    pub degenerate: bool,
    pub comparison: Option<Comparison>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RiverOutput {
    pub solution: RiverSolution,
}

#[derive(Debug, Clone, Serialize)]
pub struct RenderOutput {
    pub triangle: TriangleInfo,
    pub status: OrbitStatus,
    pub svg_path: Option<String>,
    pub svg_bytes: usize,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Outputs {
    Point(Box<PointOutput>),
    Convert(ConvertOutput),
    Simulate(SimulateOutput),
    Minimize(MinimizeOutput),
    River(RiverOutput),
    Render(RenderOutput),
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorInfo {
    pub kind: &'static str,
    pub exit_code: i32,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultDoc {
    pub version: &'static str,
    pub command: &'static str,
    pub status: String,
    pub job: Option<JobSpec>,
    pub tolerances: Tolerances,
    pub outputs: Option<Outputs>,
    pub error: Option<ErrorInfo>,
}

/// Result of one job: the document, its exit code and an optional figure.
pub struct JobOutcome {
    pub doc: ResultDoc,
    pub exit_code: i32,
    pub svg: Option<String>,
}

struct Ctx {
    tri: Triangle,
    info: TriangleInfo,
}

fn relabel<T: Copy>(v: [T; 3], reoriented: bool) -> [T; 3] {
    if reoriented {
        [v[0], v[2], v[1]]
    } else {
        v
    }
}

fn resolve_triangle(spec: &JobSpec, tol: &Tolerances) -> Result<Ctx, CliError> {
    let tri = match &spec.triangle {
        Some(TriangleSpec::Vertices(v)) => {
            let [a, b, c] = v.map(Point2::from);
            Triangle::with_tolerances(a, b, c, tol)?
        }
        Some(TriangleSpec::Sides([a, b, c])) => Triangle::from_sides_with_tolerances(*a, *b, *c, tol)?,
        None => return Err(CliError::Job("missing \"triangle\"".into())),
    };
    let info = TriangleInfo {
        vertices: tri.vertices(),
        sides: tri.sides(),
        angles: tri.angles(),
        area: tri.area(),
        reoriented: tri.reoriented(),
    };
    Ok(Ctx { tri, info })
}

fn weights_of(spec: &JobSpec, ctx: &Ctx) -> Result<Weights, CliError> {
    Ok(Weights::from_array(relabel(spec.weights, ctx.info.reoriented))?)
}

fn status_name(s: OrbitStatus) -> &'static str {
    match s {
        OrbitStatus::Interior => "interior",
        OrbitStatus::PedalOutside => "pedal_outside",
        OrbitStatus::Degenerate => "degenerate",
        OrbitStatus::NoTildeTriangle => "no_tilde_triangle",
    }
}

fn fallback_info(res: &SnellOrbitResult) -> Option<FallbackInfo> {
    let fb = res.fallback.as_ref()?;
    Some(FallbackInfo {
        weighted_choice: Side::from_index(fb.weighted_choice),
        shortest_altitude: Side::from_index(fb.shortest_altitude),
        altitude_costs: fb.candidates.map(|c| c.weighted_cost),
        altitude_lengths: fb.candidates.map(|c| c.length),
        admissible: fb.candidates.map(|c| c.admissible),
        orbit: fb.candidates[fb.weighted_choice].orbit,
        brute_force: fb.brute_force.clone(),
    })
}

fn cmd_point(spec: &JobSpec, tol: &Tolerances) -> Result<(String, Outputs, SnellOrbitResult, Ctx), CliError> {
    let ctx = resolve_triangle(spec, tol)?;
    let w = weights_of(spec, &ctx)?;
    let tri = &ctx.tri;
    let res = snell_fagnano_point(tri, &w, tol)?;
    let k = coeffs_from_weights(&w);
    let interior = matches!(res.status, OrbitStatus::Interior | OrbitStatus::PedalOutside);
    let (snell_residuals, conjugate) = match (interior, res.point) {
        (true, Some(f)) => {
            let r = verify_snell_point(f, tri, &k)?;
            let g = isogonal_conjugate_point(f, tri)?;
            let tp = tripolar_of_point(g, tri).0;
            let l = w.as_array();
            let ratios = [0, 1, 2].map(|i| tp[i] / l[i]);
            let mean = ratios.iter().sum::<f64>() / 3.0;
            let spread = ratios.iter().map(|x| (x - mean).abs()).fold(0.0, f64::max) / mean;
            (
                Some(r),
                Some(ConjugateInfo {
                    cartesian: g,
                    tripolar_over_weights: ratios,
                    max_relative_spread: spread,
                }),
            )
        }
        _ => (None, None),
    };
    let out = PointOutput {
        triangle: ctx.info.clone(),
        weights: w.as_array(),
        kappa: k.as_array(),
        tilde: TildeInfo::of(&res.tilde),
        conditions: res.conditions,
        point: res.point.map(|p| PointCoords::of(p, tri)),
        orbit: res.orbit,
        weighted_perimeter: res.weighted_perimeter,
        concurrency_residual: res.concurrency_residual,
        snell_residuals,
        conjugate,
        erected: res.erected,
        fallback: fallback_info(&res),
    };
    Ok((status_name(res.status).into(), Outputs::Point(Box::new(out)), res, ctx))
}

fn cmd_convert(spec: &JobSpec, tol: &Tolerances) -> Result<(String, Outputs), CliError> {
    let ctx = resolve_triangle(spec, tol)?;
    let tri = &ctx.tri;
    let cs = spec
        .coords
        .as_ref()
        .ok_or_else(|| CliError::Job("convert needs \"coords\": {\"kind\", \"values\"}".into()))?;
    let values = relabel(cs.values, ctx.info.reoriented);
    let (candidates, conway) = match cs.kind {
        CoordKind::Barycentric => {
            let p = from_barycentric(&Barycentric::new(values)?, tri)?;
            (vec![p], None)
        }
        CoordKind::Trilinear => {
            let bc = trilinear_to_barycentric(&Trilinear::new(values)?, tri);
            (vec![from_barycentric(&bc, tri)?], None)
        }
        CoordKind::Tripolar => {
            let tp = Tripolar::new(values)?;
            let pts = tripolar_to_points(&tp, tri, tol)?;
            if pts.is_empty() {
                return Err(Error::NoSuchPoint.into());
            }
            let conway = conway_data(tri, values[0], values[1], values[2]).ok().map(|d| ConwayInfo {
                f: d.f,
                s2_plus: d.s2_plus,
                s2_minus: d.s2_minus,
                tilde_exists: d.tilde_exists,
            });
            (pts.into_iter().map(|c| c.point).collect(), conway)
        }
    };
    let status = if candidates.len() == 2 { "two_points" } else { "one_point" };
    Ok((
        status.into(),
        Outputs::Convert(ConvertOutput {
            triangle: ctx.info.clone(),
            kind: cs.kind,
            values: cs.values,
            candidates: candidates.into_iter().map(|p| PointCoords::of(p, tri)).collect(),
            conway,
        }),
    ))
}

fn cmd_simulate(spec: &JobSpec, tol: &Tolerances) -> Result<(String, Outputs), CliError> {
    let ctx = resolve_triangle(spec, tol)?;
    let tri = &ctx.tri;
    let w = weights_of(spec, &ctx)?;
    let k = match spec.kappa {
        Some(kap) => {
            let [a, b, c] = relabel(kap, ctx.info.reoriented);
            RefractionCoeffs::new(a, b, c)?
        }
        None => coeffs_from_weights(&w),
    };
    let steps = spec.steps.unwrap_or(3);
    if steps == 0 {
        return Err(CliError::Job("steps must be at least 1".into()));
    }
    let start = match spec.start.as_ref().unwrap_or(&StartSpec::Named("orbit".into())) {
        StartSpec::Named(name) if name == "orbit" => {
            let res = snell_fagnano_point(tri, &w, tol)?;
            if res.status != OrbitStatus::Interior {
                return Err(CliError::Nonexistence(format!(
                    "no inscribed Snell orbit (status {})",
                    status_name(res.status)
                )));
            }
            let orbit = res.orbit.expect("interior result has an orbit");
            BilliardState::toward(tri, Side::A, orbit.params[0], orbit.points[1])?
        }
        StartSpec::Named(other) => {
            return Err(CliError::Job(format!("unknown start \"{other}\"")));
        }
        StartSpec::Toward { side, param, toward } => {
            BilliardState::toward(tri, relabel_side(*side, ctx.info.reoriented), *param, Point2::from(*toward))?
        }
        StartSpec::Direction { side, param, direction } => {
            BilliardState::new(tri, relabel_side(*side, ctx.info.reoriented), *param, Point2::from(*direction))?
        }
    };
    let states = simulate(&start, tri, &k, steps, tol)?;
    let periodic = (steps >= 3).then(|| {
        let end = states[3];
        end.side == start.side
            && (end.param - start.param).abs() <= 1e-8
            && (end.direction - start.direction).norm() <= 1e-8
    });
    let trajectory = states
        .iter()
        .map(|s| StateInfo {
            side: s.side,
            param: s.param,
            point: s.position(tri),
            direction: s.direction,
        })
        .collect();
    let status = match periodic {
        Some(true) => "periodic",
        _ => "ok",
    };
    Ok((
        status.into(),
        Outputs::Simulate(SimulateOutput {
            triangle: ctx.info.clone(),
            kappa: k.as_array(),
            steps,
            trajectory,
            periodic,
        }),
    ))
}

fn relabel_side(side: Side, reoriented: bool) -> Side {
    match (reoriented, side) {
        (true, Side::B) => Side::C,
        (true, Side::C) => Side::B,
        _ => side,
    }
}

fn cmd_minimize(spec: &JobSpec, tol: &Tolerances) -> Result<(String, Outputs), CliError> {
    let ctx = resolve_triangle(spec, tol)?;
    let tri = &ctx.tri;
    let w = weights_of(spec, &ctx)?;
    let opts = spec.minimize.unwrap_or_default();
    let report = minimize_inscribed(tri, &w, &opts)?;
    let res = snell_fagnano_point(tri, &w, tol)?;
    let comparison = match (res.status, res.orbit) {
        (OrbitStatus::Interior, Some(orbit)) => Some(Comparison {
            constructed_cost: res.weighted_perimeter,
            relative_gap: (report.cost - res.weighted_perimeter) / res.weighted_perimeter,
            max_vertex_distance: report
                .best
                .points
                .iter()
                .zip(orbit.points)
                .map(|(p, q)| p.dist(q))
                .fold(0.0, f64::max),
        }),
        _ => None,
    };
    let degenerate = report.flatness < 1e-3;
    let status = if degenerate { "degenerate" } else { "ok" };
    Ok((
        status.into(),
        Outputs::Minimize(MinimizeOutput {
            triangle: ctx.info.clone(),
            weights: w.as_array(),
            report,
            degenerate,
            comparison,
        }),
    ))
}

fn cmd_river(spec: &JobSpec) -> Result<(String, Outputs), CliError> {
    let r = spec
        .river
        .as_ref()
        .ok_or_else(|| CliError::Job("river needs \"river\": {a, b, line, lam1, lam2}".into()))?;
    let inst = RiverInstance {
        a: r.a.into(),
        b: r.b.into(),
        line: r.line.map(Point2::from),
        lam1: r.lam1,
        lam2: r.lam2,
    };
    let solution = solve_river(&inst)?;
    Ok(("ok".into(), Outputs::River(RiverOutput { solution })))
}

fn render_job(spec: &JobSpec, tol: &Tolerances) -> Result<(String, TriangleInfo, OrbitStatus), CliError> {
    let ctx = resolve_triangle(spec, tol)?;
    let w = weights_of(spec, &ctx)?;
    let res = snell_fagnano_point(&ctx.tri, &w, tol)?;
    let apollonian = spec.render.unwrap_or_default().apollonian;
    let common = if apollonian {
        apollonian_common_points(&ctx.tri, &w, tol)?
    } else {
        Vec::new()
    };
    let svg = render_svg(
        &ctx.tri,
        &w,
        &res,
        &RenderOptions {
            apollonian,
            common_points: common,
        },
    )?;
    Ok((svg, ctx.info, res.status))
}

/// Tolerances for a job: the job's own block if present (replacing the
/// config file values), otherwise `base`; `--tol` goes on top.
pub fn effective_tolerances(base: &Tolerances, spec: Option<&JobSpec>, tol_flag: Option<f64>) -> Tolerances {
    let mut t = spec.and_then(|s| s.tolerances).unwrap_or(*base);
    if let Some(r) = tol_flag {
        t.residual = r;
    }
    t
}

/// Runs one job given as JSON text.
pub fn run_job(command: Command, text: &str, base: &Tolerances, tol_flag: Option<f64>, want_svg: bool) -> JobOutcome {
    let parsed: Result<JobSpec, _> = serde_json::from_str(text);
    let spec = match parsed {
        Ok(s) => s,
        Err(e) => {
            let tol = effective_tolerances(base, None, tol_flag);
            return failure(command, None, tol, CliError::Job(e.to_string()));
        }
    };
    let tol = effective_tolerances(base, Some(&spec), tol_flag);
    if let Some(r) = tol_flag {
        if !(r.is_finite() && r > 0.0) {
            return failure(command, Some(spec), tol, CliError::Job(format!("--tol must be positive, got {r}")));
        }
    }
    let mut svg = None;
    let result = match command {
        Command::Point => cmd_point(&spec, &tol).and_then(|(status, out, res, _)| {
            if want_svg {
                svg = Some(render_job(&spec, &tol)?.0);
            }
            if res.status == OrbitStatus::NoTildeTriangle {
                let msg = failing_inequality(&res.tilde).unwrap_or_else(|| "tilde triangle is flat".into());
                return Ok((status, out, Some(CliError::Nonexistence(msg))));
            }
            Ok((status, out, None))
        }),
        Command::Render => render_job(&spec, &tol).map(|(text, info, status)| {
            let bytes = text.len();
            svg = Some(text);
            (
                "ok".to_string(),
                Outputs::Render(RenderOutput {
                    triangle: info,
                    status,
                    svg_path: None,
                    svg_bytes: bytes,
                }),
                None,
            )
        }),
        Command::Convert => cmd_convert(&spec, &tol).map(|(s, o)| (s, o, None)),
        Command::Simulate => cmd_simulate(&spec, &tol).map(|(s, o)| (s, o, None)),
        Command::Minimize => cmd_minimize(&spec, &tol).map(|(s, o)| (s, o, None)),
        Command::River => cmd_river(&spec).map(|(s, o)| (s, o, None)),
    };
    match result {
        Ok((status, outputs, soft_error)) => {
            let (exit_code, error) = match soft_error {
                Some(e) => (e.exit_code(), Some(error_info(&e))),
                None => (0, None),
            };
            JobOutcome {
                doc: ResultDoc {
                    version: VERSION,
                    command: command.name(),
                    status,
                    job: Some(spec),
                    tolerances: tol,
                    outputs: Some(outputs),
                    error,
                },
                exit_code,
                svg,
            }
        }
        Err(e) => failure(command, Some(spec), tol, e),
    }
}

fn error_info(e: &CliError) -> ErrorInfo {
    ErrorInfo {
        kind: e.kind(),
        exit_code: e.exit_code(),
        message: e.to_string(),
    }
}

fn failure(command: Command, job: Option<JobSpec>, tol: Tolerances, e: CliError) -> JobOutcome {
    JobOutcome {
        doc: ResultDoc {
            version: VERSION,
            command: command.name(),
            status: "error".into(),
            job,
            tolerances: tol,
            outputs: None,
            error: Some(error_info(&e)),
        },
        exit_code: e.exit_code(),
        svg: None,
    }
}

/// Formats every float with 17 significant digits and rejects non-finite values.
struct Sig17<F>(F);

macro_rules! delegate {
    ($($name:ident),*) => {
        $(
            fn $name<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
                self.0.$name(w)
            }
        )*
    };
}

impl<F: Formatter> Formatter for Sig17<F> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if !value.is_finite() {
            return Err(io::Error::new(io::ErrorKind::InvalidData, "non-finite number in output"));
        }
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    delegate!(begin_array, end_array, begin_object, end_object, end_object_key, end_array_value, end_object_value);

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
}

fn write_with<F: Formatter, T: Serialize>(value: &T, fmt: F) -> io::Result<Vec<u8>> {
    value
        .serialize(finite::Check)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.0))?;
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17(fmt));
    value.serialize(&mut ser).map_err(io::Error::other)?;
    Ok(buf)
}

/// Indented JSON with the fixed float format.
pub fn to_pretty_json<T: Serialize>(value: &T) -> io::Result<String> {
    let buf = write_with(value, PrettyFormatter::new())?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

/// Single-line JSON with the fixed float format.
pub fn to_compact_json<T: Serialize>(value: &T) -> io::Result<String> {
    let buf = write_with(value, CompactFormatter)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

fn load_config(path: &Path) -> Result<Tolerances, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Job(format!("config {}: {e}", path.display())))
}

/// Entry point of the binary; returns the process exit code.
pub fn run(args: &Args, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let base = match &args.config {
        Some(p) => match load_config(p) {
            Ok(t) => t,
            Err(e) => {
                let _ = writeln!(stderr, "sf: {e}");
                return e.exit_code();
            }
        },
        None => Tolerances::default(),
    };
    match &args.batch {
        Some(path) => run_batch(args, path, &base, stdout, stderr),
        None => run_single(args, &base, stdin, stdout, stderr),
    }
}

fn run_single(args: &Args, base: &Tolerances, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let text = match &args.input {
        Some(p) => fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map(|_| s)
                .map_err(|e| CliError::Io(format!("stdin: {e}")))
        }
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "sf: {e}");
            return e.exit_code();
        }
    };
    let want_svg = args.svg.is_some() || args.command == Command::Render;
    let mut outcome = run_job(args.command, &text, base, args.tol, want_svg);
    if let Some(svg) = &outcome.svg {
        match &args.svg {
            Some(path) => {
                if let Err(e) = fs::write(path, svg) {
                    let err = CliError::Io(format!("{}: {e}", path.display()));
                    let _ = writeln!(stderr, "sf: {err}");
                    return err.exit_code();
                }
                if let Some(Outputs::Render(r)) = &mut outcome.doc.outputs {
                    r.svg_path = Some(path.display().to_string());
                }
            }
            None => {
                // render without --svg prints the figure instead of the document
                if stdout.write_all(svg.as_bytes()).is_err() {
                    return 5;
                }
                return outcome.exit_code;
            }
        }
    }
    emit(&outcome, to_pretty_json(&outcome.doc), stdout, stderr)
}

fn emit(outcome: &JobOutcome, json: io::Result<String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let json = match json {
        Ok(j) => j,
        Err(e) => {
            let _ = writeln!(stderr, "sf: cannot serialize result: {e}");
            return 1;
        }
    };
    if writeln!(stdout, "{json}").is_err() {
        return 5;
    }
    if let Some(err) = &outcome.doc.error {
        let _ = writeln!(stderr, "sf: {}", err.message);
    }
    outcome.exit_code
}

fn run_batch(args: &Args, path: &Path, base: &Tolerances, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let file = match fs::File::open(path) {
        Ok(f) => f,
        Err(e) => {
            let err = CliError::Io(format!("{}: {e}", path.display()));
            let _ = writeln!(stderr, "sf: {err}");
            return err.exit_code();
        }
    };
    let lines: Vec<String> = match io::BufReader::new(file).lines().collect() {
        Ok(l) => l,
        Err(e) => {
            let _ = writeln!(stderr, "sf: {}: {e}", path.display());
            return 5;
        }
    };
    let jobs: Vec<&str> = lines.iter().map(|l| l.trim()).filter(|l| !l.is_empty()).collect();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(args.jobs.max(1)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "sf: cannot start workers: {e}");
            return 1;
        }
    };
    let outcomes: Vec<JobOutcome> = pool.install(|| {
        jobs.par_iter()
            .map(|text| run_job(args.command, text, base, args.tol, false))
            .collect()
    });
    let mut code = 0;
    for outcome in &outcomes {
        let c = emit(outcome, to_compact_json(&outcome.doc), stdout, stderr);
        if code == 0 {
            code = c;
        }
    }
    code
}

/// A serializer that only walks the value and fails on a non-finite float;
/// serde_json would silently print those as `null`.
mod finite {
    use serde::ser::{self, Serialize};

    #[derive(Debug)]
    pub struct NonFinite(pub String);

    impl std::fmt::Display for NonFinite {
        fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
            f.write_str(&self.0)
        }
    }

    impl std::error::Error for NonFinite {}

    impl ser::Error for NonFinite {
        fn custom<T: std::fmt::Display>(msg: T) -> Self {
            NonFinite(msg.to_string())
        }
    }

    pub struct Check;

    type R = Result<(), NonFinite>;

    macro_rules! leaf {
        ($($name:ident: $ty:ty),*) => {
            $(fn $name(self, _: $ty) -> R { Ok(()) })*
        };
    }

    impl ser::Serializer for Check {
        type Ok = ();
        type Error = NonFinite;
        type SerializeSeq = Check;
        type SerializeTuple = Check;
        type SerializeTupleStruct = Check;
        type SerializeTupleVariant = Check;
        type SerializeMap = Check;
        type SerializeStruct = Check;
        type SerializeStructVariant = Check;

        leaf!(serialize_bool: bool, serialize_i8: i8, serialize_i16: i16, serialize_i32: i32,
              serialize_i64: i64, serialize_u8: u8, serialize_u16: u16, serialize_u32: u32,
              serialize_u64: u64, serialize_char: char, serialize_str: &str, serialize_bytes: &[u8]);

        fn serialize_f32(self, v: f32) -> R {
            self.serialize_f64(v as f64)
        }
        fn serialize_f64(self, v: f64) -> R {
            if v.is_finite() {
                Ok(())
            } else {
                Err(NonFinite(format!("non-finite number {v} in output")))
            }
        }
        fn serialize_none(self) -> R {
            Ok(())
        }
        fn serialize_some<T: ?Sized + Serialize>(self, v: &T) -> R {
            v.serialize(self)
        }
        fn serialize_unit(self) -> R {
            Ok(())
        }
        fn serialize_unit_struct(self, _: &'static str) -> R {
            Ok(())
        }
        fn serialize_unit_variant(self, _: &'static str, _: u32, _: &'static str) -> R {
            Ok(())
        }
        fn serialize_newtype_struct<T: ?Sized + Serialize>(self, _: &'static str, v: &T) -> R {
            v.serialize(self)
        }
        fn serialize_newtype_variant<T: ?Sized + Serialize>(self, _: &'static str, _: u32, _: &'static str, v: &T) -> R {
            v.serialize(self)
        }
        fn serialize_seq(self, _: Option<usize>) -> Result<Check, NonFinite> {
            Ok(Check)
        }
        fn serialize_tuple(self, _: usize) -> Result<Check, NonFinite> {
            Ok(Check)
        }
        fn serialize_tuple_struct(self, _: &'static str, _: usize) -> Result<Check, NonFinite> {
            Ok(Check)
        }
        fn serialize_tuple_variant(self, _: &'static str, _: u32, _: &'static str, _: usize) -> Result<Check, NonFinite> {
            Ok(Check)
        }
        fn serialize_map(self, _: Option<usize>) -> Result<Check, NonFinite> {
            Ok(Check)
        }
        fn serialize_struct(self, _: &'static str, _: usize) -> Result<Check, NonFinite> {
            Ok(Check)
        }
        fn serialize_struct_variant(self, _: &'static str, _: u32, _: &'static str, _: usize) -> Result<Check, NonFinite> {
            Ok(Check)
        }
    }

    macro_rules! compound {
        ($tr:ident, $method:ident) => {
            impl ser::$tr for Check {
                type Ok = ();
                type Error = NonFinite;
                fn $method<T: ?Sized + Serialize>(&mut self, v: &T) -> R {
                    v.serialize(Check)
                }
                fn end(self) -> R {
                    Ok(())
                }
            }
        };
        ($tr:ident, $method:ident, keyed) => {
            impl ser::$tr for Check {
                type Ok = ();
                type Error = NonFinite;
                fn $method<T: ?Sized + Serialize>(&mut self, _: &'static str, v: &T) -> R {
                    v.serialize(Check)
                }
                fn end(self) -> R {
                    Ok(())
                }
            }
        };
    }

    compound!(SerializeSeq, serialize_element);
    compound!(SerializeTuple, serialize_element);
    compound!(SerializeTupleStruct, serialize_field);
    compound!(SerializeTupleVariant, serialize_field);
    compound!(SerializeStruct, serialize_field, keyed);
    compound!(SerializeStructVariant, serialize_field, keyed);

    impl ser::SerializeMap for Check {
        type Ok = ();
        type Error = NonFinite;
        fn serialize_key<T: ?Sized + Serialize>(&mut self, k: &T) -> R {
            k.serialize(Check)
        }
        fn serialize_value<T: ?Sized + Serialize>(&mut self, v: &T) -> R {
            v.serialize(Check)
        }
        fn end(self) -> R {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(text: &str, command: Command) -> JobOutcome {
        run_job(command, text, &Tolerances::default(), None, false)
    }

    #[test]
    fn equilateral_point_is_centroid() {
        let out = job(r#"{"triangle":{"sides":[1,1,1]}}"#, Command::Point);
        assert_eq!(out.exit_code, 0);
        assert_eq!(out.doc.status, "interior");
        let Some(Outputs::Point(p)) = &out.doc.outputs else { panic!() };
        let g = p.point.as_ref().unwrap().cartesian;
        let c = Triangle::from_sides(1.0, 1.0, 1.0).unwrap().centroid();
        assert!(g.dist(c) < 1e-12);
    }

    #[test]
    fn missing_tilde_exits_three_with_inequality() {
        let out = job(r#"{"triangle":{"sides":[1,1,1]},"weights":[1,1,5]}"#, Command::Point);
        assert_eq!(out.exit_code, 3);
        let msg = &out.doc.error.as_ref().unwrap().message;
        assert!(msg.contains("λC·c < λA·a + λB·b"), "{msg}");
    }

    #[test]
    fn both_triangle_forms_rejected() {
        let out = job(r#"{"triangle":{"sides":[1,1,1],"vertices":[[0,0],[1,0],[0,1]]}}"#, Command::Point);
        assert_eq!(out.exit_code, 2);
        let out = job(r#"{"triangle":{"sides":[1,1,1]},"weights":[1,-1,1]}"#, Command::Point);
        assert_eq!(out.exit_code, 2);
    }

    #[test]
    fn floats_have_seventeen_digits() {
        let s = to_compact_json(&[0.1f64, 1.0, -2.5e-300]).unwrap();
        assert_eq!(s, "[1.0000000000000001e-1,1.0000000000000000e0,-2.5000000000000000e-300]");
        assert!(to_compact_json(&[f64::NAN]).is_err());
    }

    #[test]
    fn clockwise_input_keeps_weights_on_their_vertices() {
        let ccw = job(r#"{"triangle":{"vertices":[[0,0],[4,0],[1,3]]},"weights":[1,1.2,0.9]}"#, Command::Point);
        let cw = job(r#"{"triangle":{"vertices":[[0,0],[1,3],[4,0]]},"weights":[1,0.9,1.2]}"#, Command::Point);
        let pt = |o: &JobOutcome| match &o.doc.outputs {
            Some(Outputs::Point(p)) => p.point.as_ref().unwrap().cartesian,
            _ => panic!(),
        };
        assert!(pt(&ccw).dist(pt(&cw)) < 1e-12);
    }

    #[test]
    fn tripolar_circumcenter_converts() {
        let out = job(r#"{"triangle":{"sides":[4,5,6]},"coords":{"kind":"tripolar","values":[1,1,1]}}"#, Command::Convert);
        assert_eq!(out.exit_code, 0);
        let Some(Outputs::Convert(c)) = &out.doc.outputs else { panic!() };
        assert_eq!(c.candidates.len(), 1);
        let t = c.candidates[0].tripolar;
        assert!((t[0] - t[1]).abs() < 1e-9 && (t[1] - t[2]).abs() < 1e-9);
    }
}
