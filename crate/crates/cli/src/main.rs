use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use hilbert_geom::domain::{ConvexDomain, DomainError};
use hilbert_geom::faces::{FaceError, FaceId, FaceLattice, PairClass};
use hilbert_geom::flats::{flat_dual, validate_flat, Flat, FlatError};
use hilbert_geom::io::{self, IoError};
use hilbert_geom::projective::ProjPoint;
use hilbert_geom::scalar::{Rat, DEFAULT_TOL};
use hilbert_geom::slice::{self, SliceError};
use hilbert_geom::verify::{run_suite, VerifyConfig, SUITES};

mod render;

#[derive(Parser)]
#[command(name = "hilbert-geom", version, about = "Hilbert geometry of properly convex projective domains")]
struct Cli {
    /// Numerical tolerance for float predicates.
    #[arg(long, global = true, env = "HILBERT_GEOM_TOL")]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hilbert distance between two points, with the boundary pair.
    Dist {
        domain: PathBuf,
        /// Comma-separated rationals, affine or homogeneous.
        x: String,
        y: String,
    },
    /// Dual domain, as exact JSON.
    Dual {
        domain: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Face lattice as JSON.
    Faces { domain: PathBuf },
    /// Which case of the four-way classification holds for two faces.
    ///
    /// A face is given by its id from `faces` or as `v:i,j,..` listing its
    /// vertex ids.
    Classify { domain: PathBuf, a: String, b: String },
    /// Validates a flat and prints its pseudo-dual.
    FlatsCheck {
        domain: PathBuf,
        flat: PathBuf,
        /// Also emit the dual flat in the dual domain.
        #[arg(long)]
        dual: bool,
    },
    /// Runs an invariant suite and prints a JSON report.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        jobs: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-dimensional slice of the domain as SVG or CSV.
    Slice {
        domain: PathBuf,
        /// Three points `p0;p1;p2` spanning the plane.
        #[arg(long, allow_hyphen_values = true)]
        plane: String,
        #[arg(long)]
        out: PathBuf,
        /// Output format; inferred from the extension by default.
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Boundary samples.
        #[arg(long, default_value_t = slice::DEFAULT_SAMPLES)]
        points: usize,
        /// Flat to draw with its normal lines.
        #[arg(long)]
        flat: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Svg,
    Csv,
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Membership(DomainError),
    #[error(transparent)]
    Face(#[from] FaceError),
    #[error("no face has vertex set {0:?}")]
    NoSuchFace(String),
    #[error("{0}")]
    Misses(SliceError),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    /// Already reported on stdout.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            Self::Io(_) | Self::Invalid(_) | Self::Write { .. } => 2,
            Self::Membership(_) => 3,
            Self::Face(_) | Self::NoSuchFace(_) => 4,
            Self::Misses(_) => 5,
            Self::Failed(_) => 1,
        }
    }
}

impl From<DomainError> for CliError {
    fn from(e: DomainError) -> Self {
        match e {
            DomainError::NotInDomain => Self::Membership(e),
            other => Self::Invalid(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hilbert-geom: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let tol = cli.tol.unwrap_or(DEFAULT_TOL);
    match cli.command {
        Command::Dist { domain, x, y } => dist(&domain, &x, &y, tol),
        Command::Dual { domain, out } => {
            let dual = io::read_domain(&domain)?.dual_domain()?;
            emit(out.as_deref(), &pretty(&io::domain_to_json(&dual)))
        }
        Command::Faces { domain } => {
            let lattice = FaceLattice::new(polytope(&io::read_domain(&domain)?)?);
            emit(None, &pretty(&lattice.to_json()))
        }
        Command::Classify { domain, a, b } => classify(&domain, &a, &b),
        Command::FlatsCheck { domain, flat, dual } => flats_check(&domain, &flat, dual),
        Command::Verify {
            suite,
            samples,
            seed,
            jobs,
            out,
        } => {
            let cfg = VerifyConfig {
                samples: samples as usize,
                seed,
                tol: cli.tol,
                jobs: jobs as usize,
            };
            let report = run_suite(&suite, &cfg).map_err(|e| CliError::Invalid(e.to_string()))?;
            let text = pretty(&serde_json::to_value(&report).expect("report serializes"));
            emit(out.as_deref(), &text)?;
            if report.passed {
                Ok(())
            } else {
                let witness = report.first_counterexample.unwrap_or(Value::Null);
                Err(CliError::Failed(format!("suite {suite} failed; first counterexample {witness}")))
            }
        }
        Command::Slice {
            domain,
            plane,
            out,
            format,
            points,
            flat,
        } => {
            let format = match format {
                Some(f) => f,
                None => match out.extension().and_then(|e| e.to_str()) {
                    Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
                    Some(e) if e.eq_ignore_ascii_case("svg") => Format::Svg,
                    _ => return Err(CliError::Invalid("cannot infer the format from --out; pass --format".into())),
                },
            };
            let dom = io::read_domain(&domain)?;
            let plane = parse_plane(&plane, dom.dim())?;
            let flat = flat.map(|p| load_flat(&dom, &p)).transpose()?;
            let s = slice::slice(&dom, &plane, points, flat.as_ref()).map_err(|e| match e {
                SliceError::Misses => CliError::Misses(e),
                other => CliError::Invalid(other.to_string()),
            })?;
            let text = match format {
                Format::Svg => render::svg(&s),
                Format::Csv => render::csv(&s),
            };
            write_file(&out, &text)
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write_file(p, text),
        None => {
            // A closed pipe is not worth an error message.
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn polytope(domain: &ConvexDomain) -> Result<&hilbert_geom::domain::Polytope, CliError> {
    domain
        .as_polytope()
        .ok_or_else(|| CliError::Invalid("this command needs a polytope domain".into()))
}

/// `v` with 12 significant digits.
fn sig12(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{:.12}", if v == 0.0 { 0.0 } else { v });
    }
    let exp = v.abs().log10().floor() as i32;
    let decimals = (11 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

fn point_line(p: &ProjPoint<f64>) -> String {
    let coords = p.affine().unwrap_or_else(|| p.normalized().into_coords());
    coords.iter().map(|c| sig12(*c)).collect::<Vec<_>>().join(" ")
}

fn dist(domain: &Path, x: &str, y: &str, tol: f64) -> Result<(), CliError> {
    let dom = io::read_domain(domain)?;
    let x = io::parse_point(x, dom.dim())?.to_f64();
    let y = io::parse_point(y, dom.dim())?.to_f64();
    let d = dom.hilbert_distance(&x, &y, tol)?;
    let mut out = format!("{}\n", sig12(d));
    if !x.same_point(&y, tol * tol) {
        let pair = dom.boundary_intersections(&x, &y, tol)?;
        out += &format!("z1 {}\nz2 {}\n", point_line(&pair.z1), point_line(&pair.z2));
    }
    emit(None, &out)
}

fn face_id(lattice: &FaceLattice, spec: &str) -> Result<FaceId, CliError> {
    let spec = spec.trim();
    if let Some(list) = spec.strip_prefix("v:") {
        let verts = list
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<BTreeSet<_>, _>>()
            .map_err(|e| CliError::Invalid(format!("bad vertex list {spec:?}: {e}")))?;
        return lattice.find(&verts).ok_or_else(|| CliError::NoSuchFace(spec.to_string()));
    }
    let id = spec
        .parse::<FaceId>()
        .map_err(|e| CliError::Invalid(format!("bad face spec {spec:?}: {e}")))?;
    lattice.face(id)?;
    Ok(id)
}

fn classify(domain: &Path, a: &str, b: &str) -> Result<(), CliError> {
    let dom = io::read_domain(domain)?;
    let lattice = FaceLattice::new(polytope(&dom)?);
    let (l, k) = (face_id(&lattice, a)?, face_id(&lattice, b)?);
    let line = match lattice.classify_pair(l, k)? {
        PairClass::Equal => "equal".to_string(),
        PairClass::Disjoint => "disjoint".to_string(),
        PairClass::BoundaryInclusion => "boundary-inclusion".to_string(),
        PairClass::ProperMeeting(m) => {
            let verts = lattice.face(m)?.vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>();
            format!("proper-meeting {m} v:{}", verts.join(","))
        }
    };
    emit(None, &format!("{line}\n"))
}

fn load_flat(dom: &ConvexDomain, path: &Path) -> Result<Flat, CliError> {
    let spec = io::read_flat(path)?;
    validate_flat(dom, &spec.points(dom.dim())?).map_err(|e| CliError::Invalid(format!("invalid flat: {e}")))
}

fn flat_json(flat: &Flat) -> Value {
    json!({
        "vertices": flat.vertices().iter().map(io::point_json).collect::<Vec<_>>(),
        "carrier": io::point_json(&flat.carrier().as_point()),
    })
}

fn flats_check(domain: &Path, flat_path: &Path, dual: bool) -> Result<(), CliError> {
    let dom = io::read_domain(domain)?;
    let spec = io::read_flat(flat_path)?;
    let points = spec.points(dom.dim())?;
    let verdict = validate_flat(&dom, &points).and_then(|flat| {
        let hat = flat.pseudo_dual()?.clone();
        let mut report = flat_json(&flat);
        report["valid"] = json!(true);
        report["pseudo_dual"] = io::point_json(&hat);
        if let Some(p) = dom.as_polytope() {
            if let Some(i) = p.vertices().iter().position(|v| v.same_point(&hat, 0.0)) {
                report["pseudo_dual_vertex"] = json!(i);
            }
        }
        if dual {
            report["dual"] = flat_json(&flat_dual(&flat)?);
        }
        Ok::<Value, FlatError>(report)
    });
    match verdict {
        Ok(report) => emit(None, &pretty(&report)),
        Err(FlatError::Domain(e)) if e != DomainError::NotInDomain => Err(e.into()),
        Err(e) => {
            emit(None, &pretty(&json!({"valid": false, "reason": e.to_string()})))?;
            Err(CliError::Failed(format!("invalid flat: {e}")))
        }
    }
}

fn parse_plane(spec: &str, dim: usize) -> Result<[ProjPoint<Rat>; 3], CliError> {
    let pts = spec
        .split(';')
        .map(|p| io::parse_point(p.trim(), dim))
        .collect::<Result<Vec<_>, _>>()?;
    <[ProjPoint<Rat>; 3]>::try_from(pts)
        .map_err(|v| CliError::Invalid(format!("a plane needs 3 points separated by ';', got {}", v.len())))
}
