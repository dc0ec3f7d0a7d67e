//! The `torcat` command line: argument parsing, dispatch, and JSON reports
//! with sorted keys. `run` never touches the process; `main` prints and exits.

pub mod document;
pub mod human;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::bounds::{apply_rules, BoundsError, Invariant, SpaceDescriptor};
use crate::catalog::{catalog_entries, lookup, reproduce};
use crate::charpair::Base;
use crate::combi::{validate_triangulation, Face, OrbitSurface, Triangulation};
use crate::cover::{
    consum_cover, qtm4_cover, triangulation_cover, verify_cover, vertex_cover, CoverBase, CoverCertificate, CoverError,
    Orientation,
};
use crate::facering::{
    cuplength_rational, graded_dimensions, h_vector, minimal_non_faces, vertex_cuplength_witness, FaceRingError,
};
use crate::intlat::smith_normal_form;
use crate::invariants::{
    all_invariants, consum_cat, consum_cat_g, consum_simply_connected, diagonal_product_cat_g, simply_connected,
    InvariantError,
};

use document::{build_connected_sum, build_matrix, build_pair, export_entry, parse, ConnectedSumDoc, Document, ParsedPair, FORMAT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Math(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => 1,
            CliError::Math(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    fn category(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Parse(_) => "parse",
            CliError::Math(_) => "invalid-input",
            CliError::Internal(_) => "internal",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Parser)]
#[command(name = "torcat", version, about = "LS-category of torus manifolds from combinatorial data")]
pub struct Args {
    /// Render reports as plain-text tables instead of JSON.
    #[arg(long, global = true)]
    human: bool,
    /// Ignore unknown fields in input documents.
    #[arg(long, global = true)]
    lenient: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a document; for pairs, the characteristic condition at every vertex.
    Validate {
        file: PathBuf,
        #[arg(long)]
        triangulation: Option<PathBuf>,
    },
    /// Category values with citations. Several pair files also give the diagonal product.
    Invariants {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Build a categorical cover certificate and verify it.
    Cover {
        kind: CoverKind,
        file: PathBuf,
        #[arg(long)]
        triangulation: Option<PathBuf>,
        /// Per boundary component: forward or reversed.
        #[arg(long, value_delimiter = ',')]
        orientation: Vec<OrientationArg>,
    },
    /// Face-ring data and cup-length of a pair.
    Cohomology {
        file: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Propagate bounds through a descriptor world.
    Bounds { file: PathBuf },
    /// Smith normal form of a matrix document.
    Snf { file: PathBuf },
    /// Built-in examples.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Write a connected-sum document from two pair documents.
    Consum {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long)]
        k: usize,
        /// Comma-separated facet names cutting out the gluing face; "interior" for the whole polytope.
        #[arg(long, allow_hyphen_values = true)]
        face1: String,
        #[arg(long, allow_hyphen_values = true)]
        face2: String,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogAction {
    List,
    Show { name: String },
    Export { name: String },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CoverKind {
    Vertex,
    Consum,
    #[value(name = "catM3")]
    CatM3,
    Qtm4,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OrientationArg {
    Forward,
    Reversed,
}

impl From<OrientationArg> for Orientation {
    fn from(o: OrientationArg) -> Self {
        match o {
            OrientationArg::Forward => Orientation::Forward,
            OrientationArg::Reversed => Orientation::Reversed,
        }
    }
}

struct Ctx {
    strict: bool,
}

fn report(kind: &str, fields: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    map.insert("format".into(), FORMAT.into());
    map.insert("kind".into(), kind.into());
    for (k, v) in fields {
        map.insert(k.into(), v);
    }
    Value::Object(map)
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Internal(format!("serialization: {e}")))
}

fn bigint_value(b: &BigInt) -> Value {
    match b.to_i64() {
        Some(i) => i.into(),
        None => b.to_string().into(),
    }
}

impl Ctx {
    fn load(&self, path: &Path) -> Result<Document, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        parse(&text, self.strict).map_err(|e| match e {
            CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    fn load_pair(&self, path: &Path) -> Result<(ParsedPair, document::PairBody), CliError> {
        match self.load(path)? {
            Document::Pair(body) => Ok((build_pair(&body)?, body)),
            other => Err(CliError::Parse(format!(
                "{}: expected a characteristic-pair document, found {}",
                path.display(),
                other.kind()
            ))),
        }
    }

    fn load_triangulation(&self, path: &Path) -> Result<Triangulation, CliError> {
        match self.load(path)? {
            Document::Triangulation(t) => Ok(t),
            other => Err(CliError::Parse(format!(
                "{}: expected a triangulation document, found {}",
                path.display(),
                other.kind()
            ))),
        }
    }

    /// The triangulation from `--triangulation`, else the one embedded in the pair.
    fn triangulation(&self, pair: &ParsedPair, flag: Option<&Path>) -> Result<Option<Triangulation>, CliError> {
        match flag {
            Some(path) => self.load_triangulation(path).map(Some),
            None => Ok(pair.triangulation.clone()),
        }
    }
}

fn bounds_error(e: BoundsError) -> CliError {
    match e {
        BoundsError::DuplicateName(_) | BoundsError::UnknownFactor { .. } | BoundsError::TooFewFactors { .. } => {
            CliError::Parse(e.to_string())
        }
        BoundsError::NoFixpoint => CliError::Internal(e.to_string()),
        _ => CliError::Math(e.to_string()),
    }
}

fn invariant_error(e: InvariantError) -> CliError {
    CliError::Math(e.to_string())
}

fn cover_error(e: CoverError) -> CliError {
    match e {
        CoverError::BaseMismatch { .. } | CoverError::DanglingReference(_) => CliError::Internal(e.to_string()),
        _ => CliError::Math(e.to_string()),
    }
}

fn surface_summary(s: &OrbitSurface) -> Value {
    json!({
        "genus": s.genus(),
        "orientable": s.orientable(),
        "boundary_components": s.components().len(),
        "corners": s.corner_count(),
        "circles": s.circle_count(),
        "edges": s.edge_count(),
        "polygon_component": s.has_polygon_component(),
    })
}

fn validate(ctx: &Ctx, file: &Path, tri_flag: Option<&Path>) -> Result<(Value, i32), CliError> {
    match ctx.load(file)? {
        Document::Pair(body) => {
            let parsed = build_pair(&body)?;
            let validation = parsed.pair.validate();
            let mut valid = validation.valid;
            let mut fields = vec![("validation", to_value(&validation)?)];
            if let Some(name) = &body.name {
                fields.push(("name", name.clone().into()));
            }
            match parsed.pair.base() {
                Base::Polytope(p) => fields.push((
                    "base",
                    json!({"type": "polytope", "dimension": p.dimension(), "facets": p.facet_count(), "vertices": p.vertex_count()}),
                )),
                Base::Surface(s) => {
                    let mut summary = surface_summary(s);
                    summary["type"] = "surface".into();
                    fields.push(("base", summary));
                    if let Some(t) = ctx.triangulation(&parsed, tri_flag)? {
                        let tr = validate_triangulation(&t, s).map_err(|e| CliError::Math(format!("triangulation: {e}")))?;
                        valid &= tr.is_valid();
                        fields.push(("triangulation", to_value(&tr)?));
                    }
                }
            }
            if tri_flag.is_some() && parsed.pair.base().as_surface().is_none() {
                return Err(CliError::Usage("--triangulation applies to surface pairs only".into()));
            }
            fields.push(("valid", valid.into()));
            fields.push(("status", if valid { "valid" } else { "invalid" }.into()));
            Ok((report("validation", fields), if valid { 0 } else { 2 }))
        }
        Document::Surface(d) => {
            let s = OrbitSurface::build(&d).map_err(|e| CliError::Math(e.to_string()))?;
            Ok((report("validation", vec![("surface", surface_summary(&s)), ("status", "valid".into()), ("valid", true.into())]), 0))
        }
        Document::Triangulation(_) => Err(CliError::Usage(
            "a triangulation is checked against its surface: validate the pair with --triangulation".into(),
        )),
        Document::ConnectedSum(doc) => {
            let (d, _) = build_connected_sum(&doc)?;
            Ok((
                report(
                    "validation",
                    vec![
                        ("dimension", d.dimension().into()),
                        ("k", d.k.into()),
                        ("fixed_points", to_value(&d.vertex_count())?),
                        ("quasitoric_redirect", d.is_quasitoric_redirect().into()),
                        ("status", "valid".into()),
                        ("valid", true.into()),
                    ],
                ),
                0,
            ))
        }
        Document::World(w) => {
            apply_rules(&w.spaces).map_err(bounds_error)?;
            Ok((
                report("validation", vec![("spaces", w.spaces.len().into()), ("status", "valid".into()), ("valid", true.into())]),
                0,
            ))
        }
        Document::Matrix(m) => {
            let m = build_matrix(&m)?;
            Ok((
                report(
                    "validation",
                    vec![("rows", m.rows().into()), ("cols", m.cols().into()), ("status", "valid".into()), ("valid", true.into())],
                ),
                0,
            ))
        }
    }
}

fn world_intervals(spaces: &[SpaceDescriptor]) -> Result<Value, CliError> {
    let state = apply_rules(spaces).map_err(bounds_error)?;
    let mut out = Map::new();
    for d in spaces {
        let cat = state.interval(&d.name, Invariant::Cat).map(|i| i.to_string());
        let cat_g = state.interval(&d.name, Invariant::CatG).map(|i| i.to_string());
        out.insert(d.name.clone(), json!({"cat": cat, "cat_G": cat_g}));
    }
    Ok(Value::Object(out))
}

fn invariants(ctx: &Ctx, files: &[PathBuf]) -> Result<Value, CliError> {
    if files.len() > 1 {
        let pairs: Vec<ParsedPair> = files.iter().map(|f| ctx.load_pair(f).map(|p| p.0)).collect::<Result<_, _>>()?;
        let refs: Vec<_> = pairs.iter().map(|p| &p.pair).collect();
        let product = diagonal_product_cat_g(&refs).map_err(invariant_error)?;
        return Ok(report("invariants", vec![("factors", files.len().into()), ("results", to_value(&[product])?)]));
    }
    match ctx.load(&files[0])? {
        Document::Pair(body) => {
            let parsed = build_pair(&body)?;
            let results = all_invariants(&parsed.pair).map_err(invariant_error)?;
            let mut fields = vec![
                ("results", to_value(&results)?),
                ("simply_connected", to_value(&simply_connected(&parsed.pair))?),
            ];
            if let Some(name) = body.name {
                fields.push(("name", name.into()));
            }
            Ok(report("invariants", fields))
        }
        Document::ConnectedSum(doc) => {
            let (d, _) = build_connected_sum(&doc)?;
            let mut results = vec![to_value(&consum_cat(&d))?];
            let mut fields = Vec::new();
            match consum_cat_g(&d) {
                Ok(r) => results.push(to_value(&r)?),
                Err(e) => fields.push(("note", e.to_string().into())),
            }
            fields.push(("results", Value::Array(results)));
            fields.push(("simply_connected", to_value(&consum_simply_connected(&d))?));
            Ok(report("invariants", fields))
        }
        Document::World(w) => {
            let mut fields = vec![("spaces", world_intervals(&w.spaces)?)];
            if let Some(s) = w.subject {
                fields.push(("subject", s.into()));
            }
            Ok(report("invariants", fields))
        }
        other => Err(CliError::Parse(format!(
            "invariants needs a characteristic-pair, connected-sum or descriptor-world document, found {}",
            other.kind()
        ))),
    }
}

fn check_certificate(cert: &CoverCertificate, base: CoverBase<'_>) -> Result<Value, CliError> {
    let again = verify_cover(cert, base).map_err(cover_error)?;
    if !cert.passed() || !again.passed || again != cert.verification {
        let failed: Vec<String> = again.failures().map(|c| c.name.clone()).collect();
        return Err(CliError::Internal(format!("certificate failed its own verification: {}", failed.join(", "))));
    }
    Ok(report("cover-certificate", vec![("certificate", to_value(cert)?), ("verified", true.into())]))
}

fn cover(ctx: &Ctx, kind: CoverKind, file: &Path, tri_flag: Option<&Path>, orientation: &[OrientationArg]) -> Result<Value, CliError> {
    if !orientation.is_empty() && !matches!(kind, CoverKind::Qtm4) {
        return Err(CliError::Usage("--orientation applies to qtm4 covers only".into()));
    }
    if tri_flag.is_some() && matches!(kind, CoverKind::Vertex | CoverKind::Consum) {
        return Err(CliError::Usage("--triangulation applies to catM3 and qtm4 covers only".into()));
    }
    match kind {
        CoverKind::Vertex => {
            let (parsed, _) = ctx.load_pair(file)?;
            let cert = vertex_cover(&parsed.pair).map_err(cover_error)?;
            check_certificate(&cert, CoverBase::Polytope(&parsed.pair))
        }
        CoverKind::Consum => {
            let doc = match ctx.load(file)? {
                Document::ConnectedSum(doc) => doc,
                other => return Err(CliError::Parse(format!("consum cover needs a connected-sum document, found {}", other.kind()))),
            };
            let (d, _) = build_connected_sum(&doc)?;
            let cert = consum_cover(&d).map_err(cover_error)?;
            check_certificate(&cert, CoverBase::ConnectedSum(&d))
        }
        CoverKind::CatM3 | CoverKind::Qtm4 => {
            let (parsed, _) = ctx.load_pair(file)?;
            let t = ctx
                .triangulation(&parsed, tri_flag)?
                .ok_or_else(|| CliError::Usage("surface covers need a triangulation (embedded or --triangulation)".into()))?;
            let cert = if matches!(kind, CoverKind::CatM3) {
                triangulation_cover(&parsed.pair, &t)
            } else {
                let o: Vec<Orientation> = orientation.iter().map(|&o| o.into()).collect();
                qtm4_cover(&parsed.pair, &t, (!o.is_empty()).then_some(o.as_slice()))
            }
            .map_err(cover_error)?;
            check_certificate(&cert, CoverBase::Surface { pair: &parsed.pair, triangulation: &t })
        }
    }
}

fn face_ring_error(e: FaceRingError) -> CliError {
    CliError::Math(e.to_string())
}

fn cohomology(ctx: &Ctx, file: &Path, cap: Option<usize>) -> Result<Value, CliError> {
    let (parsed, _) = ctx.load_pair(file)?;
    let pair = &parsed.pair;
    if !pair.is_valid() {
        return Err(CliError::Math("characteristic pair is not valid".into()));
    }
    let witness = match vertex_cuplength_witness(pair) {
        Ok(w) => to_value(&w)?,
        Err(FaceRingError::WitnessUnavailable { reason, citation }) => {
            json!({"unavailable": true, "reason": reason, "citation": citation.tag()})
        }
        Err(e) => return Err(face_ring_error(e)),
    };
    match pair.base() {
        Base::Polytope(p) => {
            let n = p.dimension();
            let h = h_vector(p);
            let mut betti = vec![0i64; 2 * n + 1];
            for (i, hi) in h.iter().enumerate() {
                betti[2 * i] = *hi;
            }
            let cup = cuplength_rational(pair, cap.unwrap_or(n + 1)).map_err(face_ring_error)?;
            let non_faces: Vec<Vec<usize>> = minimal_non_faces(p).iter().map(|f: &Face| f.facets().to_vec()).collect();
            Ok(report(
                "cohomology",
                vec![
                    ("dimension", n.into()),
                    ("f_vector", to_value(&p.f_vector())?),
                    ("h_vector", to_value(&h)?),
                    ("betti_numbers", to_value(&betti)?),
                    ("graded_dimensions", to_value(&graded_dimensions(pair).map_err(face_ring_error)?)?),
                    ("cup_length", to_value(&cup)?),
                    ("minimal_non_faces", to_value(&non_faces)?),
                    ("witness", witness),
                ],
            ))
        }
        Base::Surface(s) => Ok(report("cohomology", vec![("surface", surface_summary(s)), ("witness", witness)])),
    }
}

fn bounds(ctx: &Ctx, file: &Path) -> Result<Value, CliError> {
    let w = match ctx.load(file)? {
        Document::World(w) => w,
        other => return Err(CliError::Parse(format!("bounds needs a descriptor-world document, found {}", other.kind()))),
    };
    let state = apply_rules(&w.spaces).map_err(bounds_error)?;
    let mut fields = vec![("state", to_value(&state)?)];
    if let Some(s) = w.subject {
        fields.push(("subject", s.into()));
    }
    Ok(report("bound-state", fields))
}

fn snf(ctx: &Ctx, file: &Path) -> Result<Value, CliError> {
    let m = match ctx.load(file)? {
        Document::Matrix(m) => build_matrix(&m)?,
        other => return Err(CliError::Parse(format!("snf needs a matrix document, found {}", other.kind()))),
    };
    let r = smith_normal_form(&m).map_err(|e| CliError::Math(e.to_string()))?;
    Ok(report(
        "smith-normal-form",
        vec![
            ("rows", m.rows().into()),
            ("cols", m.cols().into()),
            ("rank", r.rank.into()),
            ("diagonal", Value::Array(r.diagonal.iter().map(bigint_value).collect())),
        ],
    ))
}

fn catalog(action: &CatalogAction) -> Result<Value, CliError> {
    match action {
        CatalogAction::List => {
            let entries: Vec<Value> = catalog_entries()
                .iter()
                .map(|e| json!({"name": e.name, "summary": e.summary, "known_values": e.known_values}))
                .collect();
            Ok(report("catalog", vec![("entries", Value::Array(entries))]))
        }
        CatalogAction::Show { name } => {
            let e = lookup(name).map_err(|e| CliError::Usage(e.to_string()))?;
            let mut fields = vec![
                ("name", e.name.clone().into()),
                ("summary", e.summary.clone().into()),
                ("known_values", to_value(&e.known_values)?),
                ("reproduction", to_value(&reproduce(&e))?),
                ("notes", to_value(&e.notes)?),
                ("document", export_entry(&e).to_value()),
            ];
            if let Some(cert) = e.certificate() {
                fields.push(("certificate", to_value(&cert)?));
            }
            Ok(report("catalog-entry", fields))
        }
        CatalogAction::Export { name } => {
            let e = lookup(name).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(export_entry(&e).to_value())
        }
    }
}

fn face_names(list: &str) -> Vec<String> {
    let list = list.trim();
    if list.is_empty() || list == "interior" {
        return Vec::new();
    }
    list.split(',').map(|s| s.trim().to_string()).collect()
}

fn consum(ctx: &Ctx, files: [&Path; 2], k: usize, faces: [&str; 2]) -> Result<Value, CliError> {
    let (_, left) = ctx.load_pair(files[0])?;
    let (_, right) = ctx.load_pair(files[1])?;
    let doc = ConnectedSumDoc { left, right, k, face_left: face_names(faces[0]), face_right: face_names(faces[1]) };
    build_connected_sum(&doc)?;
    Ok(Document::ConnectedSum(doc).to_value())
}

fn dispatch(args: &Args) -> Result<(Value, i32), CliError> {
    let ctx = Ctx { strict: !args.lenient };
    let ok = |v: Value| Ok((v, 0));
    match &args.command {
        Command::Validate { file, triangulation } => validate(&ctx, file, triangulation.as_deref()),
        Command::Invariants { files } => ok(invariants(&ctx, files)?),
        Command::Cover { kind, file, triangulation, orientation } => {
            ok(cover(&ctx, *kind, file, triangulation.as_deref(), orientation)?)
        }
        Command::Cohomology { file, cap } => ok(cohomology(&ctx, file, *cap)?),
        Command::Bounds { file } => ok(bounds(&ctx, file)?),
        Command::Snf { file } => ok(snf(&ctx, file)?),
        Command::Catalog { action } => ok(catalog(action)?),
        Command::Consum { file1, file2, k, face1, face2 } => ok(consum(&ctx, [file1, file2], *k, [face1, face2])?),
    }
}

fn render(value: &Value, human: bool) -> String {
    if human {
        human::render(value)
    } else {
        let mut s = serde_json::to_string_pretty(value).expect("values serialize");
        s.push('\n');
        s
    }
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(&args) {
        Ok((value, code)) => {
            let stderr = if code == 0 { String::new() } else { "torcat: input is mathematically invalid\n".to_string() };
            Outcome { code, stdout: render(&value, args.human), stderr }
        }
        Err(e) => {
            let code = e.exit_code();
            let doc = report("error", vec![("category", e.category().into()), ("message", e.to_string().into()), ("exit_code", code.into())]);
            Outcome { code, stdout: render(&doc, args.human), stderr: format!("torcat: {e}\n") }
        }
    }
}
