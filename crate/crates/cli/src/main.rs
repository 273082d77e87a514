use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use steiner_core::bounds::BoundError;
use steiner_core::graph::{validate_tree, ValidationError};
use steiner_core::hanan::{self, HananError, DEFAULT_GRID_CAP};
use steiner_core::io::{
    parse_solution_json, parse_stp_bytes, write_solution, write_stp, CsvTable, Format, RunSummary,
    SolutionRecord,
};
use steiner_core::{solve, BoundSpec, PruneMode, RootRule, SolveError, SolverConfig, SteinerInstance};

mod exit {
    pub const FAILURE: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const INFEASIBLE: u8 = 3;
    pub const TIMEOUT: u8 = 4;
    pub const MEMORY: u8 = 5;
    pub const MISMATCH: u8 = 6;
}

#[derive(Parser)]
#[command(name = "steiner", version, about = "Exact Steiner tree solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one STP instance and print the solution record.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value = "json")]
        format: Format,
        /// Write the record here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build the Hanan grid of a point file (or of random points) as STP.
    Hanan {
        /// Point file: "d k" then k lines of d integers.
        points: Option<PathBuf>,
        /// Generate random points of this dimension instead of reading a file.
        #[arg(long, requires = "count", conflicts_with = "points")]
        dim: Option<usize>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        coord_max: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_GRID_CAP)]
        max_vertices: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Solve every STP file listed in a manifest and print a CSV table.
    Bench {
        /// One path per line, relative to the manifest; `#` starts a comment.
        manifest: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a JSON solution record against its instance.
    Validate { file: PathBuf, solution: PathBuf },
}

#[derive(Args, Clone)]
struct RunArgs {
    #[arg(long, default_value = "onetree")]
    bound: BoundSpec,
    #[arg(long, default_value = "full")]
    prune: PruneMode,
    #[arg(long, default_value = "last")]
    root: RootRule,
    /// Seconds.
    #[arg(long, value_parser = parse_seconds)]
    time_limit: Option<Duration>,
    /// Bytes, with an optional K, M or G suffix.
    #[arg(long, value_parser = parse_bytes)]
    mem_limit: Option<u64>,
    /// Accepted for symmetry with `hanan`; the solver itself is deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl RunArgs {
    fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            bound: self.bound.clone(),
            prune: self.prune,
            root: self.root,
            time_limit: self.time_limit,
            memory_limit: self.mem_limit.or(SolverConfig::default().memory_limit),
            ..SolverConfig::default()
        }
    }

    fn summary(&self) -> RunSummary {
        RunSummary {
            bound: self.bound.to_string(),
            prune: self.prune.to_string(),
            root: self.root.to_string(),
        }
    }
}

fn parse_seconds(s: &str) -> Result<Duration, String> {
    let secs: f64 = s.parse().map_err(|_| format!("not a number of seconds: {s:?}"))?;
    if !(secs > 0.0 && secs.is_finite()) {
        return Err("time limit must be positive".into());
    }
    Ok(Duration::from_secs_f64(secs))
}

fn parse_bytes(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let (digits, shift) = match s.char_indices().last() {
        Some((i, 'k' | 'K')) => (&s[..i], 10),
        Some((i, 'm' | 'M')) => (&s[..i], 20),
        Some((i, 'g' | 'G')) => (&s[..i], 30),
        _ => (s, 0),
    };
    let n: u64 = digits.parse().map_err(|_| format!("not a byte count: {s:?}"))?;
    if n == 0 {
        return Err("memory limit must be positive".into());
    }
    n.checked_mul(1 << shift).ok_or_else(|| "memory limit overflows".into())
}

/// Error with its exit code and a short machine-readable kind.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn new(code: u8, kind: &'static str, message: impl ToString) -> Self {
        Failure {
            code,
            kind,
            message: message.to_string(),
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Failure::new(exit::FAILURE, "io", format!("{}: {e}", path.display()))
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        let (code, kind) = match e {
            SolveError::Infeasible(_) => (exit::INFEASIBLE, "infeasible"),
            SolveError::TimeLimit(_) => (exit::TIMEOUT, "timeout"),
            SolveError::MemoryLimit { .. } => (exit::MEMORY, "memory"),
            SolveError::CenterRuleNeedsCoordinates | SolveError::RootIndexOutOfRange { .. } => {
                (exit::PARSE, "config")
            }
            SolveError::Bound(BoundError::TspTableTooLarge { .. }) => (exit::MEMORY, "memory"),
            SolveError::Bound(BoundError::JTermOrder(_)) => (exit::PARSE, "config"),
            SolveError::Internal(_) => (exit::FAILURE, "internal"),
        };
        Failure::new(code, kind, e)
    }
}

fn read_instance(path: &Path) -> Result<SteinerInstance, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::io(path, e))?;
    let mut instance = parse_stp_bytes(&bytes)
        .map_err(|e| Failure::new(exit::PARSE, "parse", format!("{}: {e}", path.display())))?;
    if instance.name.is_empty() {
        instance.name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
    }
    Ok(instance)
}

fn run_one(instance: &SteinerInstance, run: &RunArgs) -> Result<SolutionRecord, Failure> {
    let solution = solve(instance, &run.solver_config())?;
    log::info!(
        "{}: opt {} labels {} permanent {} in {:?}",
        instance.name,
        solution.cost,
        solution.stats.labels,
        solution.stats.permanent,
        solution.elapsed
    );
    Ok(SolutionRecord {
        instance: instance.name.clone(),
        n: instance.vertex_count(),
        m: instance.edge_count(),
        k: instance.terminal_count(),
        opt: solution.cost,
        edges: solution.edges.iter().map(|&(u, v)| [u + 1, v + 1]).collect(),
        config: run.summary(),
        time_ms: solution.elapsed.as_secs_f64() * 1e3,
        labels: solution.stats.labels,
        permanent_labels: solution.stats.permanent,
    })
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::io(path, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::new(exit::FAILURE, "io", e))
        }
    }
}

fn cmd_solve(file: &Path, run: &RunArgs, format: Format, output: Option<&Path>) -> Result<(), Failure> {
    let instance = read_instance(file)?;
    let record = run_one(&instance, run)?;
    emit(output, &write_solution(&record, format))
}

fn read_manifest(path: &Path) -> Result<Vec<PathBuf>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    let base = path.parent().unwrap_or(Path::new(""));
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| base.join(l))
        .collect())
}

fn cmd_bench(manifest: &Path, run: &RunArgs, parallel: usize, output: Option<&Path>) -> Result<(), Failure> {
    let files = read_manifest(manifest)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallel.max(1))
        .build()
        .map_err(|e| Failure::new(exit::FAILURE, "internal", e))?;
    let rows: Vec<(String, Result<SolutionRecord, Failure>)> = pool.install(|| {
        files
            .par_iter()
            .map(|f| {
                let label = f
                    .file_stem()
                    .map_or_else(|| f.display().to_string(), |s| s.to_string_lossy().into_owned());
                let result = read_instance(f).and_then(|i| run_one(&i, run));
                (label, result)
            })
            .collect()
    });
    let mut table = CsvTable::with_error_column();
    let summary = run.summary();
    for (label, row) in &rows {
        match row {
            Ok(record) => table.push(record, None),
            Err(e) => {
                log::warn!("{label}: {}", e.message);
                table.push_failure(label, &summary, e.kind);
            }
        }
    }
    emit(output, &table.finish())
}

#[allow(clippy::too_many_arguments)]
fn cmd_hanan(
    points: Option<&Path>,
    dim: Option<usize>,
    count: Option<usize>,
    coord_max: i64,
    seed: u64,
    cap: u64,
    output: &Path,
) -> Result<(), Failure> {
    let hanan_failure = |e: HananError| {
        let code = match e {
            HananError::PointFile { .. } | HananError::Dimension(_) | HananError::NoPoints | HananError::Arity { .. } => {
                exit::PARSE
            }
            HananError::GridTooLarge { .. } => exit::MEMORY,
            HananError::Instance(_) => exit::PARSE,
        };
        Failure::new(code, "hanan", e)
    };
    let (name, set) = match (points, dim) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
            let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            (name, hanan::parse_points(&text).map_err(hanan_failure)?)
        }
        (None, Some(d)) => {
            let k = count.unwrap_or(0);
            if d == 0 || k == 0 || coord_max < 1 {
                return Err(Failure::new(exit::PARSE, "config", "--dim, --count and --coord-max must be positive"));
            }
            (format!("hanan-{d}-{k}-{seed}"), hanan::generate_random_points(d, k, coord_max, seed))
        }
        (None, None) => return Err(Failure::new(exit::PARSE, "config", "give a point file or --dim and --count")),
    };
    let grid = hanan::build_hanan_grid(&name, &set, cap).map_err(hanan_failure)?;
    let inst = &grid.instance;
    fs::write(output, write_stp(inst)).map_err(|e| Failure::io(output, e))?;
    println!("{} {} {}", inst.vertex_count(), inst.edge_count(), inst.terminal_count());
    Ok(())
}

fn cmd_validate(file: &Path, solution: &Path) -> Result<(), Failure> {
    let instance = read_instance(file)?;
    let text = fs::read_to_string(solution).map_err(|e| Failure::io(solution, e))?;
    let record = parse_solution_json(&text).map_err(|e| Failure::new(exit::PARSE, "parse", e))?;
    let edges = record
        .zero_based_edges()
        .ok_or_else(|| Failure::new(exit::PARSE, "parse", "edge endpoints are 1-based"))?;
    let mismatch = |e: ValidationError| Failure::new(exit::MISMATCH, "invalid", e);
    let cost = validate_tree(&instance, &edges).map_err(mismatch)?;
    println!("{cost}");
    if cost != record.opt {
        return Err(Failure::new(
            exit::MISMATCH,
            "mismatch",
            format!("tree costs {cost} but the record claims {}", record.opt),
        ));
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve {
            file,
            run,
            format,
            output,
        } => cmd_solve(file, run, *format, output.as_deref()),
        Command::Hanan {
            points,
            dim,
            count,
            coord_max,
            seed,
            max_vertices,
            output,
        } => cmd_hanan(points.as_deref(), *dim, *count, *coord_max, *seed, *max_vertices, output),
        Command::Bench {
            manifest,
            run,
            parallel,
            output,
        } => cmd_bench(manifest, run, *parallel, output.as_deref()),
        Command::Validate { file, solution } => cmd_validate(file, solution),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let err = serde_json::json!({ "error": f.kind, "message": f.message });
            eprintln!("{err}");
            ExitCode::from(f.code)
        }
    }
}
