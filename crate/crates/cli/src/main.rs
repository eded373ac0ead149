use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mcs_core::graph::{all_pairs_distances, is_consistent, ColoredGraph, DistanceMatrix, Vertex};
use mcs_core::instance::{generate, parse_instance, serialize_instance, Model};
use mcs_core::nd::{solve_nd_with, NdConfig, DEFAULT_R_LIMIT};
use mcs_core::oracle::{self, brute_force_mcs_with, OracleConfig};
use mcs_core::structural::{
    minimum_vertex_cover, neighborhood_decomposition, TypeDecomposition, TypeKind,
};
use mcs_core::vc::{solve_vc_with, VcConfig, DEFAULT_K_LIMIT};
use mcs_core::{Deadline, Solution, SolveError};

/// Largest instance `auto` hands to the exhaustive solver.
const AUTO_BRUTE_LIMIT: usize = 14;

#[derive(Parser)]
#[command(
    name = "mcs",
    version,
    about = "Minimum consistent subsets of vertex-colored graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a minimum consistent subset.
    Solve(SolveArgs),
    /// Check whether a vertex subset is consistent.
    Check {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated 1-based vertex ids.
        #[arg(long, allow_hyphen_values = true)]
        subset: String,
    },
    /// Report size and structural parameters.
    Params {
        #[arg(long)]
        input: PathBuf,
        /// Give up on the vertex cover number above this value.
        #[arg(long, default_value_t = 24)]
        k_budget: usize,
    },
    /// Write a random instance.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Brute,
    Vc,
    Nd,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    timeout_ms: Option<u64>,
    /// Also run the exhaustive solver and compare sizes.
    #[arg(long)]
    compare_oracle: bool,
    /// Human-readable output.
    #[arg(long)]
    pretty: bool,
    /// Include wall time in the report.
    #[arg(long)]
    timing: bool,
    /// Seed for sampled labelings on instances with many colors.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Gnp,
    PlantedVc,
    PlantedNd,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Vertex count (gnp, planted-vc).
    #[arg(long)]
    n: Option<usize>,
    /// Edge probability (gnp).
    #[arg(long)]
    p: Option<f64>,
    /// Number of colors.
    #[arg(long, default_value_t = 2)]
    c: usize,
    /// Planted cover size (planted-vc).
    #[arg(long)]
    k: Option<usize>,
    /// Edge or class-join probability (planted models).
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    /// Comma-separated class sizes (planted-nd).
    #[arg(long)]
    sizes: Option<String>,
    /// Comma-separated class kinds, `clique` or `independent` (planted-nd).
    #[arg(long)]
    kinds: Option<String>,
}

/// Error carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

const EXIT_INPUT: u8 = 2;
const EXIT_PARAMETER: u8 = 3;
const EXIT_VERIFY: u8 = 4;
const EXIT_TIMEOUT: u8 = 5;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("MCS_LOG")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => solve(&args),
        Command::Check { input, subset } => check(&input, &subset),
        Command::Params { input, k_budget } => params(&input, k_budget),
        Command::Generate(args) => generate_cmd(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load(path: &Path) -> Result<ColoredGraph, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string(value).expect("serializable report")
    );
}

#[derive(Serialize)]
struct SolveReport {
    method: String,
    size: usize,
    vertices: Vec<Vertex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<u64>,
    explored: u64,
    verified: bool,
    optimal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_size: Option<usize>,
}

impl SolveReport {
    fn new(s: &Solution, elapsed: Option<Duration>) -> Self {
        Self {
            method: s.method.to_string(),
            size: s.size(),
            vertices: s.vertices.iter().map(|v| v + 1).collect(),
            elapsed_ms: elapsed.map(|d| d.as_millis() as u64),
            explored: s.explored,
            verified: s.verified,
            optimal: s.optimal,
            oracle_size: None,
        }
    }

    fn print(&self, pretty: bool) {
        if !pretty {
            print_json(self);
            return;
        }
        let ids: Vec<String> = self.vertices.iter().map(ToString::to_string).collect();
        println!("method    {}", self.method);
        println!("size      {}", self.size);
        println!("vertices  {}", ids.join(" "));
        if let Some(ms) = self.elapsed_ms {
            println!("elapsed   {ms} ms");
        }
        println!("explored  {}", self.explored);
        println!("verified  {}", self.verified);
        println!("optimal   {}", self.optimal);
        if let Some(size) = self.oracle_size {
            println!("oracle    {size}");
        }
    }
}

#[derive(Serialize)]
struct ParameterReport {
    error: String,
    n: usize,
    m: usize,
    c: usize,
    k: Option<usize>,
    r: usize,
}

fn too_large(g: &ColoredGraph, message: String, k: Option<usize>, r: usize) -> Failure {
    print_json(&ParameterReport {
        error: message.clone(),
        n: g.n(),
        m: g.m(),
        c: g.num_colors(),
        k,
        r,
    });
    Failure::new(EXIT_PARAMETER, message)
}

fn solve(args: &SolveArgs) -> Result<u8, Failure> {
    if let Some(threads) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::new(EXIT_INPUT, e.to_string()))?;
    }
    let g = load(&args.input)?;
    let start = Instant::now();
    let deadline = args.timeout_ms.map_or(Deadline::none(), |ms| {
        Deadline::after(Duration::from_millis(ms))
    });
    let dist = all_pairs_distances(&g);

    let method = match args.method {
        MethodArg::Auto if g.n() <= AUTO_BRUTE_LIMIT => MethodArg::Brute,
        MethodArg::Auto => match minimum_vertex_cover(&g, Some(DEFAULT_K_LIMIT)) {
            Ok(_) => MethodArg::Vc,
            Err(_) => {
                let r = neighborhood_decomposition(&g).r();
                if r > DEFAULT_R_LIMIT {
                    let msg = format!("vertex cover number exceeds {DEFAULT_K_LIMIT} and r = {r} exceeds {DEFAULT_R_LIMIT}");
                    return Err(too_large(&g, msg, None, r));
                }
                MethodArg::Nd
            }
        },
        m => m,
    };

    let outcome = match method {
        MethodArg::Brute => brute_force_mcs_with(
            &g,
            &dist,
            &OracleConfig {
                limit: oracle::DEFAULT_LIMIT,
                deadline,
            },
        ),
        MethodArg::Vc => match minimum_vertex_cover(&g, Some(DEFAULT_K_LIMIT)) {
            Ok(cover) => solve_vc_with(
                &g,
                &dist,
                Some(&cover),
                &VcConfig {
                    k_limit: DEFAULT_K_LIMIT,
                    deadline,
                },
            ),
            Err(_) => Err(SolveError::ParameterTooLarge {
                name: "vertex cover number",
                value: DEFAULT_K_LIMIT + 1,
                limit: DEFAULT_K_LIMIT,
            }),
        },
        MethodArg::Nd => {
            let decomp = neighborhood_decomposition(&g);
            let config = NdConfig {
                seed: args.seed,
                deadline,
                ..NdConfig::default()
            };
            solve_nd_with(&g, &dist, Some(&decomp), &config)
        }
        MethodArg::Auto => unreachable!("resolved above"),
    };
    let elapsed = args.timing.then(|| start.elapsed());

    let solution = match outcome {
        Ok(s) => s,
        Err(SolveError::Timeout { best }) => {
            let Some(best) = best else {
                return Err(Failure::new(
                    EXIT_TIMEOUT,
                    "time limit reached before any solution was found",
                ));
            };
            SolveReport::new(&best, elapsed).print(args.pretty);
            return Ok(EXIT_TIMEOUT);
        }
        Err(e @ (SolveError::TooLarge { .. } | SolveError::ParameterTooLarge { .. })) => {
            let k = minimum_vertex_cover(&g, Some(DEFAULT_K_LIMIT))
                .ok()
                .map(|c| c.k());
            return Err(too_large(
                &g,
                e.to_string(),
                k,
                neighborhood_decomposition(&g).r(),
            ));
        }
        Err(e) => return Err(Failure::new(EXIT_VERIFY, e.to_string())),
    };

    let mut report = SolveReport::new(&solution, elapsed);
    let mut code = 0;
    if !solution.verified || !is_consistent(&g, &dist, &solution.vertices).consistent {
        code = EXIT_VERIFY;
    }
    if args.compare_oracle {
        let reference = brute_force_mcs_with(&g, &dist, &OracleConfig::default())
            .map_err(|e| Failure::new(EXIT_PARAMETER, format!("oracle: {e}")))?;
        report.oracle_size = Some(reference.size());
        if solution.optimal && reference.size() != solution.size() {
            code = EXIT_VERIFY;
        }
    }
    report.print(args.pretty);
    if code == EXIT_VERIFY {
        eprintln!("error: solution failed verification");
    }
    Ok(code)
}

#[derive(Serialize)]
struct CheckReport {
    consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nearest_colors: Option<Vec<u32>>,
}

fn parse_subset(list: &str, n: usize) -> Result<Vec<Vertex>, Failure> {
    let mut out = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let id: usize = item
            .parse()
            .map_err(|_| Failure::new(EXIT_INPUT, format!("bad vertex id `{item}`")))?;
        if id == 0 || id > n {
            return Err(Failure::new(
                EXIT_INPUT,
                format!("vertex id {id} outside 1..={n}"),
            ));
        }
        out.push(id - 1);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn check(input: &Path, subset: &str) -> Result<u8, Failure> {
    let g = load(input)?;
    let set = parse_subset(subset, g.n())?;
    let dist: DistanceMatrix = all_pairs_distances(&g);
    let verdict = is_consistent(&g, &dist, &set);
    let report = CheckReport {
        consistent: verdict.consistent,
        witness: verdict.witness.as_ref().map(|w| w.vertex + 1),
        nearest_colors: verdict.witness.map(|w| w.nearest_colors),
    };
    print_json(&report);
    Ok(if report.consistent { 0 } else { 1 })
}

#[derive(Serialize)]
struct TypeRow {
    kind: &'static str,
    size: usize,
    vertices: Vec<Vertex>,
}

#[derive(Serialize)]
struct ParamsReport {
    n: usize,
    m: usize,
    c: usize,
    /// `None` when the cover number exceeds the budget.
    k: Option<usize>,
    cover: Option<Vec<Vertex>>,
    r: usize,
    types: Vec<TypeRow>,
}

fn type_rows(decomp: &TypeDecomposition) -> Vec<TypeRow> {
    decomp
        .types
        .iter()
        .zip(&decomp.kinds)
        .map(|(members, kind)| TypeRow {
            kind: match (members.len(), kind) {
                (1, _) => "single",
                (_, TypeKind::Clique) => "clique",
                (_, TypeKind::Independent) => "independent",
            },
            size: members.len(),
            vertices: members.iter().map(|v| v + 1).collect(),
        })
        .collect()
}

fn params(input: &Path, k_budget: usize) -> Result<u8, Failure> {
    let g = load(input)?;
    let cover = minimum_vertex_cover(&g, Some(k_budget)).ok();
    let decomp = neighborhood_decomposition(&g);
    print_json(&ParamsReport {
        n: g.n(),
        m: g.m(),
        c: g.num_colors(),
        k: cover.as_ref().map(|c| c.k()),
        cover: cover.map(|c| c.cover.iter().map(|v| v + 1).collect()),
        r: decomp.r(),
        types: type_rows(&decomp),
    });
    Ok(0)
}

fn list<T: std::str::FromStr>(raw: &str, what: &str) -> Result<Vec<T>, Failure> {
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Failure::new(EXIT_INPUT, format!("bad {what} `{s}`")))
        })
        .collect()
}

fn required<T: Copy>(value: Option<T>, flag: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::new(EXIT_INPUT, format!("--{flag} is required for this model")))
}

fn generate_cmd(args: &GenerateArgs) -> Result<u8, Failure> {
    let model = match args.model {
        ModelArg::Gnp => Model::GnpConnected {
            n: required(args.n, "n")?,
            p: required(args.p, "p")?,
            c: args.c,
        },
        ModelArg::PlantedVc => Model::PlantedVc {
            k: required(args.k, "k")?,
            n: required(args.n, "n")?,
            c: args.c,
            density: args.density,
        },
        ModelArg::PlantedNd => {
            let sizes = list(
                args.sizes
                    .as_deref()
                    .ok_or_else(|| Failure::new(EXIT_INPUT, "--sizes is required"))?,
                "size",
            )?;
            let kinds = match &args.kinds {
                None => None,
                Some(raw) => Some(
                    raw.split(',')
                        .map(|s| match s.trim() {
                            "clique" => Ok(TypeKind::Clique),
                            "independent" => Ok(TypeKind::Independent),
                            other => Err(Failure::new(EXIT_INPUT, format!("bad kind `{other}`"))),
                        })
                        .collect::<Result<Vec<_>, _>>()?,
                ),
            };
            Model::PlantedNd {
                sizes,
                kinds,
                c: args.c,
                density: args.density,
            }
        }
    };
    let g = generate(&model, args.seed).map_err(|e| Failure::new(EXIT_INPUT, e.to_string()))?;
    fs::write(&args.out, serialize_instance(&g))
        .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", args.out.display())))?;
    Ok(0)
}
