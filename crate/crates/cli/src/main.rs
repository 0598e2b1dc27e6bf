//! Command-line surface for the crescent-configuration toolkit.
//!
//! Exit codes are scriptable: 0 on success, 1 on a semantic failure (a
//! configuration that does not verify, an exhausted construction, a failed
//! realization round-trip), 2 on usage or parse errors. Diagnostics go to
//! standard error only.

use clap::{Parser, Subcommand};
use crescent_core::{
    construct_crescent, parse_rational, realization_residual, realize, search_with_options,
    verify_crescent, ConfigFile, ConstructError, ConstructParams, HexRegion, LatticePoint,
    Region, SearchOptions, SearchRecord, SearchSpec,
};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "crescent",
    version,
    about = "Construct, verify, and search for crescent configurations with exact arithmetic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct an n-point crescent configuration in dimension n-2.
    Construct {
        /// Number of points (at least 3).
        #[arg(long)]
        n: usize,
        /// Output configuration file (JSON).
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        /// Squared sides "s,t" of the seed isosceles triangle, as
        /// rationals (e.g. "1,2" or "1,1/2").
        #[arg(long, value_name = "S,T")]
        seed_base: Option<String>,
    },
    /// Verify that a configuration file is a crescent configuration.
    Verify {
        /// Configuration file to check.
        input: PathBuf,
    },
    /// Exhaustively search a triangular-lattice region for n-point
    /// crescent configurations.
    Search {
        /// Region: "hex:R" for the centered hexagon of radius R, or a
        /// path to a JSON file holding a list of [a, b] lattice points.
        #[arg(long)]
        region: String,
        /// Number of points to place.
        #[arg(long)]
        n: usize,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Emit one canonical representative per isometry class.
        #[arg(long)]
        symmetry_reduce: bool,
        /// Output file for JSON-lines results (stdout if omitted).
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Emit a progress line to stderr every N finished tasks (0 = off).
        #[arg(long, default_value_t = 0)]
        progress_interval: u64,
    },
    /// Append a floating-point realization to a configuration file.
    Realize {
        /// Configuration file to realize.
        input: PathBuf,
        /// Output file with coords_float filled in.
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Construct { n, out, seed_base } => cmd_construct(n, &out, seed_base.as_deref()),
        Command::Verify { input } => cmd_verify(&input),
        Command::Search {
            region,
            n,
            threads,
            symmetry_reduce,
            out,
            progress_interval,
        } => cmd_search(
            &region,
            n,
            threads,
            symmetry_reduce,
            out.as_deref(),
            progress_interval,
        ),
        Command::Realize { input, out } => cmd_realize(&input, &out),
    };
    ExitCode::from(code)
}

fn cmd_construct(n: usize, out: &Path, seed_base: Option<&str>) -> u8 {
    if n < 3 {
        eprintln!("crescent: n must be at least 3, got {n}");
        return EXIT_USAGE;
    }
    let mut params = ConstructParams::default();
    if let Some(spec) = seed_base {
        match parse_seed_base(spec) {
            Ok(base) => params.base = base,
            Err(msg) => {
                eprintln!("crescent: invalid --seed-base: {msg}");
                return EXIT_USAGE;
            }
        }
    }
    match construct_crescent(n, &params) {
        Ok((config, trace)) => {
            let file = ConfigFile::new(config).with_trace(trace);
            match file.write_to(out) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    eprintln!("crescent: cannot write {}: {e}", out.display());
                    EXIT_USAGE
                }
            }
        }
        Err(e @ ConstructError::RetryBudgetExhausted { .. }) => {
            eprintln!("crescent: construction failed: {e}");
            EXIT_FAIL
        }
        Err(e) => {
            eprintln!("crescent: {e}");
            EXIT_USAGE
        }
    }
}

fn parse_seed_base(spec: &str) -> Result<(crescent_core::Rational, crescent_core::Rational), String> {
    let (s, t) = spec
        .split_once(',')
        .ok_or_else(|| format!("expected \"s,t\", got {spec:?}"))?;
    let s = parse_rational(s).map_err(|e| e.to_string())?;
    let t = parse_rational(t).map_err(|e| e.to_string())?;
    Ok((s, t))
}

fn cmd_verify(input: &Path) -> u8 {
    let file = match ConfigFile::read_from(input) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("crescent: cannot read {}: {e}", input.display());
            return EXIT_USAGE;
        }
    };
    match verify_crescent(&file.config) {
        Ok(()) => {
            eprintln!(
                "crescent: ok: {} points in dimension {}",
                file.config.n(),
                file.config.dim()
            );
            EXIT_OK
        }
        Err(violation) => {
            eprintln!("crescent: violation: {violation}");
            EXIT_FAIL
        }
    }
}

fn parse_region(spec: &str) -> Result<Region, String> {
    if let Some(r) = spec.strip_prefix("hex:") {
        let radius: u32 = r
            .parse()
            .map_err(|_| format!("bad hexagon radius {r:?}"))?;
        return Ok(Region::Hex(HexRegion::new(radius)));
    }
    let text = fs::read_to_string(spec).map_err(|e| format!("cannot read {spec}: {e}"))?;
    let pairs: Vec<[i64; 2]> =
        serde_json::from_str(&text).map_err(|e| format!("bad points file {spec}: {e}"))?;
    Ok(Region::Points(
        pairs.iter().map(|&[a, b]| LatticePoint::new(a, b)).collect(),
    ))
}

fn cmd_search(
    region: &str,
    n: usize,
    threads: usize,
    symmetry_reduce: bool,
    out: Option<&Path>,
    progress_interval: u64,
) -> u8 {
    let region = match parse_region(region) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("crescent: {msg}");
            return EXIT_USAGE;
        }
    };
    let mut spec = SearchSpec::new(region, n);
    spec.symmetry_reduce = symmetry_reduce;
    let options = SearchOptions {
        progress_interval,
        cancel: None,
    };
    let (results, stats) = match search_with_options(&spec, threads.max(1), &options) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("crescent: {e}");
            return EXIT_USAGE;
        }
    };
    let mut body = String::new();
    for r in &results {
        body.push_str(&SearchRecord::from_result(r).to_json_line());
        body.push('\n');
    }
    let write_result = match out {
        Some(path) => fs::write(path, body.as_bytes()).map_err(|e| (path.display().to_string(), e)),
        None => std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| ("stdout".to_owned(), e)),
    };
    if let Err((target, e)) = write_result {
        eprintln!("crescent: cannot write {target}: {e}");
        return EXIT_USAGE;
    }
    eprintln!(
        "search: {} result(s); {} nodes visited; pruned {} collinear, {} concyclic, {} spectrum; {:.3}s",
        results.len(),
        stats.nodes_visited,
        stats.pruned_by_collinear,
        stats.pruned_by_concyclic,
        stats.pruned_by_spectrum,
        stats.elapsed.as_secs_f64()
    );
    // Zero results is a finding, not a failure.
    EXIT_OK
}

fn cmd_realize(input: &Path, out: &Path) -> u8 {
    let mut file = match ConfigFile::read_from(input) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("crescent: cannot read {}: {e}", input.display());
            return EXIT_USAGE;
        }
    };
    let coords = match realize(&file.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("crescent: {e}");
            return EXIT_FAIL;
        }
    };
    let residual = realization_residual(&file.config, &coords);
    if residual > 1e-9 {
        eprintln!("crescent: realization residual {residual:.3e} exceeds 1e-9");
        return EXIT_FAIL;
    }
    eprintln!("crescent: realized with residual {residual:.3e}");
    file.coords_float = Some(coords);
    match file.write_to(out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("crescent: cannot write {}: {e}", out.display());
            EXIT_USAGE
        }
    }
}
