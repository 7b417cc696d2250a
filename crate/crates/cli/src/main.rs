mod pointfile;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use rectinf::boxhull::{build_hull, disjoint_cover};
use rectinf::cover::{build_cover, build_cover_basic, build_k_cover, verify_cover, verify_k_cover, BicliqueCover};
use rectinf::depth::{approx_max_depth, build_depth_index, log_approx_max_depth, query_depth};
use rectinf::lab::{edge_count_experiment, gen_lower_bound, gen_two_diagonals, gen_uniform, structural_fuzz};
use rectinf::{validate, PointSet64, QueryPoint64};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

/// Oracle comparisons are quadratic; larger inputs skip `--verify`.
const VERIFY_CAP: usize = 4096;

#[derive(Parser)]
#[command(name = "rectinf", version, about = "Empty-rectangle graphs, box hulls and rectangle depth")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    TwoDiagonals,
    LowerBound,
    Uniform,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a point file.
    Gen {
        family: Family,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Build a biclique cover and report its statistics.
    Cover {
        points: PathBuf,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long, conflicts_with = "k")]
        basic: bool,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        verify: bool,
    },
    /// Box hull boundary, with optional drawings.
    Hull {
        points: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        cover_svg: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Approximate rectangle depth at a point or its maximum.
    #[command(group(ArgGroup::new("mode").required(true).args(["query", "max"])))]
    Depth {
        points: PathBuf,
        #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true)]
        query: Option<Vec<String>>,
        #[arg(long)]
        max: bool,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long, requires = "max")]
        log_approx: bool,
    },
    /// Edge counts of uniform instances.
    Bench {
        #[arg(long, value_delimiter = ',')]
        ns: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Structural checks on small uniform instances.
    Fuzz {
        #[arg(long, value_delimiter = ',', default_value = "40")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        seeds: u64,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {msg}")]
    Input { path: PathBuf, msg: String },
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Serialize)]
struct StatsJson {
    schema: u32,
    n: usize,
    edges: usize,
    biclique_count: usize,
    cover_weight: usize,
    build_ms: u64,
    hull_area: Option<i128>,
    max_depth_estimate: Option<u64>,
    parameters: Value,
}

#[derive(Serialize)]
struct HullJson {
    schema: u32,
    n: usize,
    hull_area: i128,
    bbox: [[i64; 2]; 2],
    boundary: Vec<[i64; 2]>,
    disjoint_pieces: Option<usize>,
}

fn read_points(path: &Path) -> Result<PointSet64> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    let raw = pointfile::parse(&text).map_err(|e| CliError::Input { path: path.into(), msg: e.to_string() })?;
    validate(&raw).map_err(|e| CliError::Input { path: path.into(), msg: e.to_string() })
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io { path: p.into(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn gen(family: Family, m: Option<usize>, n: Option<usize>, seed: u64, out: Option<&Path>) -> Result<()> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| CliError::Usage(format!("this family needs --{flag}")));
    let inst = match family {
        Family::TwoDiagonals => gen_two_diagonals(need(m, "m")?),
        Family::LowerBound => gen_lower_bound(need(n, "n")?),
        Family::Uniform => gen_uniform(need(n, "n")?, seed),
    };
    write_out(out, &pointfile::render(&inst.points.coords()))
}

fn cover(points: &Path, k: usize, basic: bool, json: Option<&Path>, verify: bool) -> Result<()> {
    let ps = read_points(points)?;
    let started = Instant::now();
    let c: BicliqueCover = match (basic, k) {
        (true, _) => build_cover_basic(&ps),
        (false, 0) => build_cover(&ps),
        (false, k) => build_k_cover(&ps, k),
    };
    let build_ms = started.elapsed().as_millis() as u64;
    let stats = StatsJson {
        schema: 1,
        n: ps.len(),
        edges: c.stats.edges,
        biclique_count: c.stats.count,
        cover_weight: c.stats.weight,
        build_ms,
        hull_area: build_hull(&ps).ok().map(|h| h.area()),
        max_depth_estimate: None,
        parameters: json!({ "k": k, "basic": basic }),
    };
    write_out(json, &to_json(&stats))?;
    if verify {
        if ps.len() > VERIFY_CAP {
            eprintln!("verification skipped: n = {} exceeds {VERIFY_CAP}", ps.len());
            return Ok(());
        }
        let report = if k == 0 { verify_cover(&c, &ps) } else { verify_k_cover(&c, &ps, k) };
        if !report.ok {
            return Err(CliError::Failed(format!(
                "cover mismatch: {} edges covered, {} expected, {} violations",
                report.edges,
                report.expected_edges,
                report.violations.len()
            )));
        }
        eprintln!("verified: {} edges", report.edges);
    }
    Ok(())
}

fn hull(points: &Path, svg_out: Option<&Path>, cover_svg: Option<&Path>, json: Option<&Path>) -> Result<()> {
    let ps = read_points(points)?;
    let bad = |e: rectinf::boxhull::HullError| CliError::Input { path: points.into(), msg: e.to_string() };
    let h = build_hull(&ps).map_err(bad)?;
    let f = |v: i64| v as f64;
    let (lo, hi) = h.bbox;
    let canvas = || svg::Canvas::new((f(lo.x), f(lo.y)), (f(hi.x), f(hi.y)));
    let boundary: Vec<[i64; 2]> = h.boundary.iter().map(|p| [p.x, p.y]).collect();
    let mut pieces = None;
    if let Some(path) = cover_svg {
        let dc = disjoint_cover(&ps).map_err(bad)?;
        let mut c = canvas();
        for p in &dc.pieces {
            c.rect((f(p.lo.x), f(p.lo.y)), (f(p.hi.x), f(p.hi.y)), "steelblue");
        }
        for p in &ps.points {
            c.circle(f(p.x), f(p.y));
        }
        pieces = Some(dc.pieces.len());
        write_out(Some(path), &c.finish())?;
    }
    if let Some(path) = svg_out {
        let mut c = canvas();
        let pts: Vec<(f64, f64)> = h.boundary.iter().map(|p| (f(p.x), f(p.y))).collect();
        c.polyline(&pts, true);
        for p in &ps.points {
            c.circle(f(p.x), f(p.y));
        }
        c.text(f(lo.x), f(hi.y), &format!("n = {}, area = {}", ps.len(), h.area()));
        write_out(Some(path), &c.finish())?;
    }
    let doc = HullJson {
        schema: 1,
        n: ps.len(),
        hull_area: h.area(),
        bbox: [[lo.x, lo.y], [hi.x, hi.y]],
        boundary,
        disjoint_pieces: pieces,
    };
    write_out(json, &to_json(&doc))
}

/// Integer or half-integer decimal as a doubled coordinate.
fn parse_half(s: &str) -> Option<i64> {
    let (int, frac) = s.split_once('.').unwrap_or((s, "0"));
    let whole: i64 = int.parse().ok()?;
    let neg = int.starts_with('-');
    match frac.trim_end_matches('0') {
        "" => whole.checked_mul(2),
        "5" => whole.checked_mul(2)?.checked_add(if neg { -1 } else { 1 }),
        _ => None,
    }
}

fn depth(points: &Path, query: Option<&[String]>, eps: f64, log_approx: bool) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(CliError::Usage(format!("--eps must lie in (0, 1), got {eps}")));
    }
    let ps = read_points(points)?;
    let bad = |e: rectinf::depth::DepthError| CliError::Input { path: points.into(), msg: e.to_string() };
    match query {
        Some([x, y]) => {
            let coord = |s: &String| parse_half(s).ok_or_else(|| CliError::Usage(format!("bad coordinate {s:?}")));
            let q = QueryPoint64::halves(coord(x)?, coord(y)?);
            let ix = build_depth_index(&ps, eps).map_err(bad)?;
            println!("{}", query_depth(&ix, &q));
        }
        Some(_) => return Err(CliError::Usage("--query takes two coordinates".into())),
        None => {
            let (q, v) = if log_approx { log_approx_max_depth(&ps) } else { approx_max_depth(&ps, eps) }.map_err(bad)?;
            println!("{q} {v}");
        }
    }
    Ok(())
}

fn bench(ns: &[usize], seeds: u64, out: Option<&Path>) -> Result<()> {
    let seeds: Vec<u64> = (1..=seeds).collect();
    let report = edge_count_experiment(ns, &seeds).map_err(|e| CliError::Usage(e.to_string()))?;
    write_out(out, &to_json(&report))?;
    for &n in ns.iter().filter(|&&n| n <= VERIFY_CAP) {
        for &seed in &seeds {
            let ps = gen_uniform(n, seed).points;
            if !verify_cover(&build_cover(&ps), &ps).ok {
                return Err(CliError::Failed(format!("cover mismatch at n = {n}, seed = {seed}")));
            }
        }
    }
    Ok(())
}

fn fuzz(ns: &[usize], seeds: u64, out: Option<&Path>) -> Result<()> {
    let seeds: Vec<u64> = (1..=seeds).collect();
    let report = structural_fuzz(ns, &seeds).map_err(|e| CliError::Usage(e.to_string()))?;
    write_out(out, &to_json(&report))?;
    if report.k5_found > 0 {
        return Err(CliError::Failed(format!("{} instances contain K5", report.k5_found)));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Gen { family, m, n, seed, out } => gen(family, m, n, seed, out.as_deref()),
        Cmd::Cover { points, k, basic, json, verify } => cover(&points, k, basic, json.as_deref(), verify),
        Cmd::Hull { points, svg, cover_svg, json } => hull(&points, svg.as_deref(), cover_svg.as_deref(), json.as_deref()),
        Cmd::Depth { points, query, max: _, eps, log_approx } => depth(&points, query.as_deref(), eps, log_approx),
        Cmd::Bench { ns, seeds, out } => bench(&ns, seeds, out.as_deref()),
        Cmd::Fuzz { n, seeds, out } => fuzz(&n, seeds, out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rectinf: {e}");
            ExitCode::from(e.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_coordinates() {
        assert_eq!(parse_half("3"), Some(6));
        assert_eq!(parse_half("2.5"), Some(5));
        assert_eq!(parse_half("-0.5"), Some(-1));
        assert_eq!(parse_half("-2.50"), Some(-5));
        assert_eq!(parse_half("1.0"), Some(2));
        assert_eq!(parse_half("1.25"), None);
        assert_eq!(parse_half("x"), None);
    }
}
