//! Command-line surface for the `realtrop` library: parse JSON problem
//! descriptions, dispatch to library operations, emit JSON results and
//! deterministic SVG renderings of charts and subdivisions.
//!
//! Exit codes: 0 on success, 1 on domain errors (with a machine-readable
//! error object on stdout), 2 on malformed input.

mod render;

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num::{BigInt, BigRational};
use serde::Deserialize;
use serde_json::{json, Value};

use realtrop::bergman::{bergman_membership, enumerate_s_flags, RouteMode};
use realtrop::orientedmatroid::{
    circuits_from_matrix, initial_matroid, is_covector, topes, validate_circuit_axioms,
};
use realtrop::singular::{
    build_singular_setup, classify_singularity, is_max_dimensional_type, singsat_membership,
    EndValence, SingularityClass,
};
use realtrop::tropcurve::{
    compute_chart, regular_marked_subdivision, Chart, Klein, LatticePoint, QPoint, Ray,
    RealTropPoly, Segment, KLEIN_ELEMENTS,
};
use realtrop::{QMatrix, Rat, SignVector};

#[derive(Parser)]
#[command(name = "realtrop", about = "Exact real tropical plane curve computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Input JSON file; "-" reads standard input.
    #[arg(global = true, default_value = "-")]
    input: String,
    /// Write an SVG rendering to this path.
    #[arg(long, global = true)]
    svg: Option<String>,
    /// Chart selector: one of ++, +-, -+, --.
    #[arg(long, global = true, allow_hyphen_values = true)]
    chart: Option<String>,
    /// Cross-check Bergman membership through all three routes.
    #[arg(long, global = true)]
    verify: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Signed circuits of a rational matrix.
    Circuits,
    /// Validate the circuit axioms for the matrix's circuits.
    Axioms,
    /// Topes (pure covectors) of the matrix's oriented matroid.
    Topes,
    /// Decide whether `vector` is a covector of the matrix's matroid.
    Covector,
    /// Circuits of the initial matroid at the given weights.
    Initial,
    /// Signed Bergman fan membership of (signs, lifts).
    Bergman,
    /// All maximal s-flags for the given signs.
    Sflags,
    /// Signed regular marked subdivision of (support, lifts).
    Subdivide,
    /// One chart of the real tropical curve (requires --chart).
    Chart,
    /// All four charts of the real tropical curve.
    Charts,
    /// Membership of (signs, lifts) in the real tropicalized singular family.
    SingularMember,
    /// Classify the singularity at the origin of the (+,+) chart.
    Classify,
}

#[derive(Debug)]
enum CliError {
    Malformed { path: String, message: String },
    Domain { kind: String, message: String },
}

impl CliError {
    fn malformed(path: &str, message: impl Into<String>) -> CliError {
        CliError::Malformed { path: path.to_string(), message: message.into() }
    }
}

impl From<realtrop::orientedmatroid::MatroidError> for CliError {
    fn from(e: realtrop::orientedmatroid::MatroidError) -> Self {
        CliError::Domain { kind: "matroid".into(), message: e.to_string() }
    }
}

impl From<realtrop::bergman::BergmanError> for CliError {
    fn from(e: realtrop::bergman::BergmanError) -> Self {
        CliError::Domain { kind: "bergman".into(), message: e.to_string() }
    }
}

impl From<realtrop::tropcurve::TropError> for CliError {
    fn from(e: realtrop::tropcurve::TropError) -> Self {
        CliError::Domain { kind: "tropcurve".into(), message: e.to_string() }
    }
}

impl From<realtrop::singular::SingularError> for CliError {
    fn from(e: realtrop::singular::SingularError) -> Self {
        CliError::Domain { kind: "singular".into(), message: e.to_string() }
    }
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    kind: Option<String>,
    support: Option<Vec<[i64; 2]>>,
    signs: Option<String>,
    lifts: Option<Vec<Value>>,
    vector: Option<String>,
    matrix: Option<Vec<Vec<Value>>>,
    options: Option<RawOptions>,
    // Chart re-input (round-tripping `chart` output back into --svg).
    sign_index: Option<String>,
    vertices: Option<Vec<Value>>,
    segments: Option<Vec<Value>>,
    rays: Option<Vec<Value>>,
}

#[derive(Deserialize, Default, Clone)]
#[serde(deny_unknown_fields)]
struct RawOptions {
    #[serde(rename = "box")]
    bbox: Option<[Value; 4]>,
    scale: Option<Value>,
    labels: Option<bool>,
}

fn parse_rat(v: &Value, path: &str) -> Result<Rat, CliError> {
    match v {
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| CliError::malformed(path, "expected an integer or \"p/q\""))?;
            Ok(Rat::from_integer(BigInt::from(i)))
        }
        Value::String(s) => s
            .parse::<BigRational>()
            .map_err(|_| CliError::malformed(path, format!("bad rational {s:?}"))),
        _ => Err(CliError::malformed(path, "expected an integer or \"p/q\"")),
    }
}

fn rat_str(r: &Rat) -> String {
    r.to_string()
}

fn qpoint_json(p: &QPoint) -> Value {
    json!([rat_str(&p[0]), rat_str(&p[1])])
}

fn klein_str(v: Klein) -> String {
    v.iter().map(|s| s.to_char()).collect()
}

fn parse_klein(s: &str) -> Option<Klein> {
    let sv = SignVector::parse(s)?;
    if sv.len() != 2 || !sv.is_pure() {
        return None;
    }
    Some([sv.get(0), sv.get(1)])
}

struct Problem {
    raw: RawProblem,
}

impl Problem {
    fn matrix(&self) -> Result<QMatrix, CliError> {
        let raw = self
            .raw
            .matrix
            .as_ref()
            .ok_or_else(|| CliError::malformed("/matrix", "missing required field"))?;
        if raw.is_empty() {
            return Err(CliError::malformed("/matrix", "matrix must be nonempty"));
        }
        let cols = raw[0].len();
        let mut rows = Vec::new();
        for (i, r) in raw.iter().enumerate() {
            if r.len() != cols {
                return Err(CliError::malformed(
                    &format!("/matrix/{i}"),
                    "ragged matrix rows",
                ));
            }
            let mut row = Vec::new();
            for (j, v) in r.iter().enumerate() {
                row.push(parse_rat(v, &format!("/matrix/{i}/{j}"))?);
            }
            rows.push(row);
        }
        Ok(QMatrix::from_rows(rows))
    }

    fn support(&self) -> Result<Vec<LatticePoint>, CliError> {
        let raw = self
            .raw
            .support
            .as_ref()
            .ok_or_else(|| CliError::malformed("/support", "missing required field"))?;
        Ok(raw.iter().map(|&[x, y]| (x, y)).collect())
    }

    fn signs(&self, expected_len: Option<usize>) -> Result<SignVector, CliError> {
        let raw = self
            .raw
            .signs
            .as_ref()
            .ok_or_else(|| CliError::malformed("/signs", "missing required field"))?;
        let sv = SignVector::parse(raw)
            .ok_or_else(|| CliError::malformed("/signs", "expected a string over \"+-0\""))?;
        if let Some(n) = expected_len {
            if sv.len() != n {
                return Err(CliError::malformed(
                    "/signs",
                    format!("length {} does not match {}", sv.len(), n),
                ));
            }
        }
        Ok(sv)
    }

    fn lifts(&self, expected_len: Option<usize>) -> Result<Vec<Rat>, CliError> {
        let raw = self
            .raw
            .lifts
            .as_ref()
            .ok_or_else(|| CliError::malformed("/lifts", "missing required field"))?;
        if let Some(n) = expected_len {
            if raw.len() != n {
                return Err(CliError::malformed(
                    "/lifts",
                    format!("length {} does not match {}", raw.len(), n),
                ));
            }
        }
        raw.iter()
            .enumerate()
            .map(|(i, v)| parse_rat(v, &format!("/lifts/{i}")))
            .collect()
    }

    fn vector(&self) -> Result<SignVector, CliError> {
        let raw = self
            .raw
            .vector
            .as_ref()
            .ok_or_else(|| CliError::malformed("/vector", "missing required field"))?;
        SignVector::parse(raw)
            .ok_or_else(|| CliError::malformed("/vector", "expected a string over \"+-0\""))
    }

    fn poly(&self) -> Result<RealTropPoly, CliError> {
        let support = self.support()?;
        let signs = self.signs(Some(support.len()))?;
        let lifts = self.lifts(Some(support.len()))?;
        RealTropPoly::new(support, signs, lifts).map_err(CliError::from)
    }

    fn render_spec(&self) -> Result<render::RenderSpec, CliError> {
        let opts = self.raw.options.clone().unwrap_or_default();
        let bbox = match &opts.bbox {
            Some(vals) => {
                let mut out = Vec::new();
                for (i, v) in vals.iter().enumerate() {
                    out.push(parse_rat(v, &format!("/options/box/{i}"))?);
                }
                [out[0].clone(), out[1].clone(), out[2].clone(), out[3].clone()]
            }
            None => render::default_box(),
        };
        if bbox[0] >= bbox[2] || bbox[1] >= bbox[3] {
            return Err(CliError::Domain {
                kind: "render".into(),
                message: "empty bounding box".into(),
            });
        }
        let scale = match &opts.scale {
            Some(v) => parse_rat(v, "/options/scale")?,
            None => Rat::from_integer(BigInt::from(40)),
        };
        if scale <= Rat::from_integer(BigInt::from(0)) {
            return Err(CliError::malformed("/options/scale", "scale must be positive"));
        }
        Ok(render::RenderSpec { bbox, scale, labels: opts.labels.unwrap_or(true) })
    }

    /// Re-parse a chart previously emitted by the `chart` command.
    fn chart_from_self(&self) -> Result<Option<Chart>, CliError> {
        if self.raw.kind.as_deref() != Some("chart") {
            return Ok(None);
        }
        let sign_index = self
            .raw
            .sign_index
            .as_ref()
            .and_then(|s| parse_klein(s))
            .ok_or_else(|| CliError::malformed("/sign_index", "expected one of ++ +- -+ --"))?;
        let parse_qpoint = |v: &Value, path: &str| -> Result<QPoint, CliError> {
            let arr = v
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| CliError::malformed(path, "expected [x, y]"))?;
            Ok([parse_rat(&arr[0], path)?, parse_rat(&arr[1], path)?])
        };
        let mut vertices = Vec::new();
        for (i, v) in self.raw.vertices.as_deref().unwrap_or(&[]).iter().enumerate() {
            vertices.push(parse_qpoint(v, &format!("/vertices/{i}"))?);
        }
        let mut segments = Vec::new();
        for (i, v) in self.raw.segments.as_deref().unwrap_or(&[]).iter().enumerate() {
            let path = format!("/segments/{i}");
            let obj = v
                .as_object()
                .ok_or_else(|| CliError::malformed(&path, "expected an object"))?;
            segments.push(Segment {
                a: parse_qpoint(
                    obj.get("a").ok_or_else(|| CliError::malformed(&path, "missing a"))?,
                    &path,
                )?,
                b: parse_qpoint(
                    obj.get("b").ok_or_else(|| CliError::malformed(&path, "missing b"))?,
                    &path,
                )?,
                weight: obj
                    .get("weight")
                    .and_then(Value::as_i64)
                    .ok_or_else(|| CliError::malformed(&path, "missing weight"))?,
            });
        }
        let mut rays = Vec::new();
        for (i, v) in self.raw.rays.as_deref().unwrap_or(&[]).iter().enumerate() {
            let path = format!("/rays/{i}");
            let obj = v
                .as_object()
                .ok_or_else(|| CliError::malformed(&path, "expected an object"))?;
            let dir = obj
                .get("dir")
                .and_then(Value::as_array)
                .filter(|a| a.len() == 2)
                .and_then(|a| Some((a[0].as_i64()?, a[1].as_i64()?)))
                .ok_or_else(|| CliError::malformed(&path, "missing dir"))?;
            rays.push(Ray {
                base: parse_qpoint(
                    obj.get("base").ok_or_else(|| CliError::malformed(&path, "missing base"))?,
                    &path,
                )?,
                dir,
                weight: obj
                    .get("weight")
                    .and_then(Value::as_i64)
                    .ok_or_else(|| CliError::malformed(&path, "missing weight"))?,
            });
        }
        Ok(Some(Chart { sign_index, vertices, segments, rays }))
    }
}

fn circuit_strings(m: &realtrop::OrientedMatroid) -> Vec<String> {
    let mut out: Vec<String> = m.circuits().iter().map(|c| c.sign().to_string()).collect();
    out.sort();
    out
}

fn chart_json(c: &Chart) -> Value {
    json!({
        "kind": "chart",
        "sign_index": klein_str(c.sign_index),
        "vertices": c.vertices.iter().map(qpoint_json).collect::<Vec<_>>(),
        "segments": c.segments.iter().map(|s| json!({
            "a": qpoint_json(&s.a),
            "b": qpoint_json(&s.b),
            "weight": s.weight,
        })).collect::<Vec<_>>(),
        "rays": c.rays.iter().map(|r| json!({
            "base": qpoint_json(&r.base),
            "dir": [r.dir.0, r.dir.1],
            "weight": r.weight,
        })).collect::<Vec<_>>(),
    })
}

fn subdivision_json(t: &realtrop::tropcurve::SignedMarkedSubdivision) -> Value {
    json!({
        "support": t.support.iter().map(|&(x, y)| json!([x, y])).collect::<Vec<_>>(),
        "cells": t.cells.iter().map(|c| json!({
            "vertices": c.vertices.iter().map(|&(x, y)| json!([x, y])).collect::<Vec<_>>(),
            "marked": c.marked.iter().collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "signs": t.signs.as_ref().map(|s| s.to_string()),
        "max_dimensional_type": is_max_dimensional_type(t),
    })
}

fn classification_json(c: &SingularityClass) -> Value {
    let valence = |v: &EndValence| match v {
        EndValence::OneValent => "OneValent",
        EndValence::ThreeValent => "ThreeValent",
    };
    match c {
        SingularityClass::FourValentVertex { vertex, edge_weights } => json!({
            "case": "FourValentVertex",
            "vertex": qpoint_json(vertex),
            "edges": 4,
            "weights": edge_weights,
        }),
        SingularityClass::IsolatedVertexMult3 { vertex, multiplicity } => json!({
            "case": "IsolatedVertexMult3",
            "vertex": qpoint_json(vertex),
            "multiplicity": multiplicity,
        }),
        SingularityClass::Weight2EdgeMidpoint { vertices, ends } => json!({
            "case": "Weight2EdgeMidpoint",
            "vertices": [qpoint_json(&vertices[0]), qpoint_json(&vertices[1])],
            "ends": valence(ends),
        }),
        SingularityClass::Weight2EdgeInterval { near_vertex, far_vertex, midpoint, far_end } => {
            json!({
                "case": "Weight2EdgeInterval",
                "near_vertex": qpoint_json(near_vertex),
                "far_vertex": qpoint_json(far_vertex),
                "midpoint": qpoint_json(midpoint),
                "far_end": valence(far_end),
            })
        }
        SingularityClass::Weight2InfiniteEdge { endpoint } => json!({
            "case": "Weight2InfiniteEdge",
            "endpoint": qpoint_json(endpoint),
        }),
    }
}

fn read_problem(input: &str) -> Result<Problem, CliError> {
    let text = if input == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::malformed("", format!("cannot read stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(input)
            .map_err(|e| CliError::malformed("", format!("cannot read {input}: {e}")))?
    };
    let raw: RawProblem = serde_json::from_str(&text)
        .map_err(|e| CliError::malformed("", format!("invalid JSON: {e}")))?;
    Ok(Problem { raw })
}

fn write_svg(path: &str, doc: &str) -> Result<(), CliError> {
    std::fs::write(path, doc)
        .map_err(|e| CliError::Domain { kind: "io".into(), message: format!("cannot write {path}: {e}") })
}

fn run(cli: &Cli) -> Result<Value, CliError> {
    let problem = read_problem(&cli.input)?;
    match cli.command {
        Command::Circuits => {
            let m = circuits_from_matrix(&problem.matrix()?);
            Ok(json!({ "circuits": circuit_strings(&m) }))
        }
        Command::Axioms => {
            let m = circuits_from_matrix(&problem.matrix()?);
            match validate_circuit_axioms(m.circuits(), m.ground_size()) {
                Ok(()) => Ok(json!({ "valid": true, "violation": null })),
                Err(v) => Ok(json!({ "valid": false, "violation": format!("{v:?}") })),
            }
        }
        Command::Topes => {
            let m = circuits_from_matrix(&problem.matrix()?);
            let mut out: Vec<String> =
                topes(&m)?.iter().map(|t| t.to_string()).collect();
            out.sort();
            Ok(json!({ "topes": out }))
        }
        Command::Covector => {
            let m = circuits_from_matrix(&problem.matrix()?);
            let v = problem.vector()?;
            let witness = is_covector(&m, &v)?;
            Ok(json!({
                "is_covector": witness.is_some(),
                "witness": witness.map(|w| w.iter().map(rat_str).collect::<Vec<_>>()),
            }))
        }
        Command::Initial => {
            let m = circuits_from_matrix(&problem.matrix()?);
            let w = problem.lifts(Some(m.ground_size()))?;
            let init = initial_matroid(&m, &w)?;
            Ok(json!({ "circuits": circuit_strings(&init) }))
        }
        Command::Bergman => {
            let m = circuits_from_matrix(&problem.matrix()?);
            let s = problem.signs(Some(m.ground_size()))?;
            let w = problem.lifts(Some(m.ground_size()))?;
            let mode = if cli.verify { RouteMode::Verify } else { RouteMode::Fast };
            let (member, report) = bergman_membership(&m, &s, &w, mode)?;
            Ok(json!({
                "member": member,
                "routes": {
                    "circuit": report.circuit_route,
                    "initial_matroid": report.initial_matroid_route,
                    "flag": report.flag_route,
                },
            }))
        }
        Command::Sflags => {
            let m = circuits_from_matrix(&problem.matrix()?);
            let s = problem.signs(Some(m.ground_size()))?;
            let flags = enumerate_s_flags(&m, &s)?;
            Ok(json!({
                "flags": flags.iter().map(|f| {
                    f.flats().iter().map(|flat| flat.iter().collect::<Vec<_>>()).collect::<Vec<_>>()
                }).collect::<Vec<_>>(),
            }))
        }
        Command::Subdivide => {
            let support = problem.support()?;
            let lifts = problem.lifts(Some(support.len()))?;
            let mut t = regular_marked_subdivision(&support, &lifts)?;
            if problem.raw.signs.is_some() {
                t.signs = Some(problem.signs(Some(support.len()))?);
            }
            if let Some(path) = &cli.svg {
                let spec = problem.render_spec()?;
                write_svg(path, &render::render_subdivision(&t, &spec))?;
            }
            Ok(subdivision_json(&t))
        }
        Command::Chart => {
            let chart = if let Some(chart) = problem.chart_from_self()? {
                chart
            } else {
                let v = cli
                    .chart
                    .as_deref()
                    .and_then(parse_klein)
                    .ok_or_else(|| CliError::malformed("--chart", "expected one of ++ +- -+ --"))?;
                compute_chart(&problem.poly()?, v)?
            };
            if let Some(path) = &cli.svg {
                let spec = problem.render_spec()?;
                write_svg(path, &render::render_charts(std::slice::from_ref(&chart), &spec))?;
            }
            Ok(chart_json(&chart))
        }
        Command::Charts => {
            let f = problem.poly()?;
            let mut charts = Vec::new();
            for v in KLEIN_ELEMENTS {
                charts.push(compute_chart(&f, v)?);
            }
            if let Some(path) = &cli.svg {
                let spec = problem.render_spec()?;
                write_svg(path, &render::render_charts(&charts, &spec))?;
            }
            Ok(json!({ "charts": charts.iter().map(chart_json).collect::<Vec<_>>() }))
        }
        Command::SingularMember => {
            let support = problem.support()?;
            let setup = build_singular_setup(&support)?;
            let s = problem.signs(Some(support.len()))?;
            let u = problem.lifts(Some(support.len()))?;
            Ok(json!({ "member": singsat_membership(&setup, &s, &u)? }))
        }
        Command::Classify => {
            let support = problem.support()?;
            let setup = build_singular_setup(&support)?;
            let s = problem.signs(Some(support.len()))?;
            let u = problem.lifts(Some(support.len()))?;
            let class = classify_singularity(&setup, &s, &u)?;
            Ok(classification_json(&class))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(value) => {
            println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
            ExitCode::SUCCESS
        }
        Err(CliError::Domain { kind, message }) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "error": { "class": "domain", "kind": kind, "message": message }
                }))
                .expect("serializable")
            );
            ExitCode::from(1)
        }
        Err(CliError::Malformed { path, message }) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "error": { "class": "malformed", "path": path, "message": message }
                }))
                .expect("serializable")
            );
            ExitCode::from(2)
        }
    }
}
