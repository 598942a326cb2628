use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use witnesskit::detection::{detect, DetectConfig, DetectionReport, SearchMode};
use witnesskit::io::{emit_report, emit_state, emit_witness, parse_state};
use witnesskit::states::{
    example_34, example_35, maximally_entangled, random_pure_with_rank, random_separable, BasisOrdering, BipartiteDims,
};
use witnesskit::witnesses::{rank4_witness, witness_kps, WitnessSpec};
use witnesskit::{selfcheck, Error, Permutation};

mod scan;

/// Entanglement witnesses and entry-based detection for bipartite states.
#[derive(Parser, Debug)]
#[command(name = "witnesskit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every detection criterion on a state file.
    Detect(DetectArgs),
    /// Write one of the built-in states as a state file.
    Example(ExampleArgs),
    /// Build a witness and write it as a witness file.
    Witness(WitnessArgs),
    /// Evaluate the PPT, realignment and entry criteria over a parameter grid.
    Scan(scan::ScanArgs),
    /// Run the numerical self-checks.
    Selfcheck(SelfcheckArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(clap::Args, Debug)]
struct DetectArgs {
    /// State file (JSON).
    path: PathBuf,
    /// Largest n tried by the entry criterion.
    #[arg(long, default_value_t = 6)]
    n_cap: usize,
    /// `exact` searches exactly up to n = 6 and heuristically above; `heuristic` never enumerates.
    #[arg(long, default_value = "exact")]
    mode: SearchMode,
    #[arg(long, env = "WITNESSKIT_SEED", default_value_t = 0)]
    seed: u64,
    /// Restarts of the distillability search.
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    /// Skip the distillability search.
    #[arg(long)]
    no_distill: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum ExampleName {
    E34,
    E35,
    MaxEnt,
    Pure,
    Separable,
}

#[derive(clap::Args, Debug)]
struct ExampleArgs {
    name: ExampleName,
    /// Weights q1,q2,... (e34, e35).
    #[arg(long, value_delimiter = ',')]
    q: Vec<f64>,
    /// Off-diagonal entries a,b,c for e34; each is `re` or `re:im`.
    #[arg(long, value_delimiter = ',', value_parser = parse_complex)]
    abc: Vec<Complex64>,
    /// Off-diagonal entries a,b,c,d for e35; each is `re` or `re:im`.
    #[arg(long, value_delimiter = ',', value_parser = parse_complex)]
    abcd: Vec<Complex64>,
    /// Support size of the maximally entangled state.
    #[arg(long)]
    n: Option<usize>,
    /// Local dimensions `dim_h,dim_k` (max_ent, pure, separable).
    #[arg(long, value_delimiter = ',')]
    dims: Vec<usize>,
    /// Schmidt rank of the random pure state.
    #[arg(long)]
    rank: Option<usize>,
    /// Number of product terms in the random separable state.
    #[arg(long, default_value_t = 4)]
    terms: usize,
    #[arg(long, env = "WITNESSKIT_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = OrderingArg::HMajor)]
    ordering: OrderingArg,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum OrderingArg {
    HMajor,
    KMajor,
}

impl From<OrderingArg> for BasisOrdering {
    fn from(o: OrderingArg) -> Self {
        match o {
            OrderingArg::HMajor => BasisOrdering::HMajor,
            OrderingArg::KMajor => BasisOrdering::KMajor,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum WitnessType {
    Rank4,
    Kps,
}

#[derive(clap::Args, Debug)]
struct WitnessArgs {
    #[arg(long = "type", value_enum)]
    kind: WitnessType,
    /// Local dimensions `dim_h,dim_k`; defaults to 2,2 for rank4 and n,n for kps.
    #[arg(long, value_delimiter = ',')]
    dims: Vec<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Permutation images, e.g. `2,3,1`.
    #[arg(long)]
    kappa: Option<String>,
    #[arg(long)]
    pi: Option<String>,
    #[arg(long)]
    sigma: Option<String>,
    /// Include the realized matrix.
    #[arg(long)]
    matrix: bool,
    #[arg(long, value_enum, default_value_t = OrderingArg::HMajor)]
    ordering: OrderingArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct SelfcheckArgs {
    #[arg(long, env = "WITNESSKIT_SEED", default_value_t = 0)]
    seed: u64,
    /// Run only these criteria, e.g. `1,2,9`.
    #[arg(long, value_delimiter = ',')]
    only: Vec<u8>,
}

/// Failure classes, mapped onto exit codes 2 and 3.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numerical(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence { .. } => CliError::Numerical(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    match s.split_once(':') {
        Some((re, im)) => Ok(Complex64::new(num(re)?, num(im)?)),
        None => Ok(Complex64::new(num(s)?, 0.0)),
    }
}

fn parse_perm(flag: &str, s: &str) -> CliResult<Permutation> {
    s.parse().map_err(|e: Error| CliError::Input(format!("--{flag}: {e}")))
}

fn parse_dims(dims: &[usize]) -> CliResult<Option<BipartiteDims>> {
    match dims {
        [] => Ok(None),
        [h, k] => Ok(Some(BipartiteDims::new(*h, *k)?)),
        _ => Err(CliError::Input(format!("--dims: expected `dim_h,dim_k`, got {} values", dims.len()))),
    }
}

fn write_output(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render_text(r: &DetectionReport) -> String {
    let mut s = String::new();
    let verdict = serde_json::to_value(r.verdict).expect("enum serializes");
    s += &format!("verdict: {}\n", verdict.as_str().unwrap_or_default());
    s += &format!("fired: {}\n", if r.fired.is_empty() { "none".to_string() } else { r.fired.join(", ") });
    s += &format!("ppt min eigenvalue: {:.6e}\n", r.ppt_min_eig);
    s += &format!("realignment trace norm: {:.6}\n", r.ccnr_trace_norm);
    for m in &r.entry_minima {
        s += &format!("entry minimum n={}: {:.6e} ({})\n", m.n, m.value, m.mode);
    }
    if let Some(c) = &r.entry_certificate {
        s += &format!(
            "entry certificate: n={} k={:?} h={:?} value={:.6e} witness kappa={} pi={} sigma={}\n",
            c.n, c.k_indices, c.h_indices, c.value, c.witness_spec.kappa, c.witness_spec.pi, c.witness_spec.sigma
        );
    }
    if let Some(d) = &r.distill_certificate {
        s += &format!("distillability certificate value: {:.6e}\n", d.value);
    }
    s
}

fn cmd_detect(args: &DetectArgs) -> CliResult<()> {
    let text = fs::read_to_string(&args.path).map_err(|e| CliError::Input(format!("{}: {e}", args.path.display())))?;
    let rho = parse_state(&text)?;
    let config = DetectConfig {
        n_cap: args.n_cap,
        exact_max: match args.mode {
            SearchMode::Exact => DetectConfig::default().exact_max,
            SearchMode::Heuristic => 0,
        },
        seed: args.seed,
        restarts: args.restarts,
        run_distill: !args.no_distill,
        ..DetectConfig::default()
    };
    let report = detect(&rho, &config)?;
    let out = match args.format {
        Format::Json => emit_report(&report, &config),
        Format::Text => render_text(&report),
    };
    write_output(None, &out)
}

fn need<T: Copy>(flag: &str, values: &[T], len: usize) -> CliResult<Vec<T>> {
    if values.len() != len {
        return Err(CliError::Input(format!("--{flag}: expected {len} comma-separated values, got {}", values.len())));
    }
    Ok(values.to_vec())
}

fn cmd_example(args: &ExampleArgs) -> CliResult<()> {
    let dims = parse_dims(&args.dims)?;
    let rho = match args.name {
        ExampleName::E34 => {
            let q = need("q", &args.q, 3)?;
            let abc = need("abc", &args.abc, 3)?;
            example_34(q[0], q[1], q[2], abc[0], abc[1], abc[2])?
        }
        ExampleName::E35 => {
            let q = need("q", &args.q, 4)?;
            let v = need("abcd", &args.abcd, 4)?;
            example_35(q[0], q[1], q[2], q[3], v[0], v[1], v[2], v[3])?
        }
        ExampleName::MaxEnt => {
            let n = args.n.or(dims.map(|d| d.min_dim())).unwrap_or(2);
            maximally_entangled(n, dims.map_or_else(|| BipartiteDims::square(n), Ok)?)?
        }
        ExampleName::Pure => {
            let d = dims.map_or_else(|| BipartiteDims::square(2), Ok)?;
            let rank = args.rank.unwrap_or(d.min_dim());
            random_pure_with_rank(d, rank, args.seed)?.density()
        }
        ExampleName::Separable => {
            let d = dims.map_or_else(|| BipartiteDims::square(2), Ok)?;
            random_separable(d, args.terms, args.seed)?
        }
    };
    write_output(args.out.as_deref(), &emit_state(&rho.reorder(args.ordering.into())))
}

fn cmd_witness(args: &WitnessArgs) -> CliResult<()> {
    let dims = parse_dims(&args.dims)?;
    let ordering = args.ordering.into();
    let w = match args.kind {
        WitnessType::Rank4 => rank4_witness(dims.map_or_else(|| BipartiteDims::square(2), Ok)?, ordering)?,
        WitnessType::Kps => {
            let kappa = parse_perm("kappa", args.kappa.as_deref().ok_or(CliError::Input("kps needs --kappa".into()))?)?;
            let n = args.n.unwrap_or(kappa.n());
            let pi = args.pi.as_deref().map_or(Ok(Permutation::identity(n)), |s| parse_perm("pi", s))?;
            let sigma = args.sigma.as_deref().map_or(Ok(Permutation::identity(n)), |s| parse_perm("sigma", s))?;
            let d = dims.map_or_else(|| BipartiteDims::square(n), Ok)?;
            witness_kps(&WitnessSpec::new(n, kappa, pi, sigma, d)?, ordering)?
        }
    };
    write_output(args.out.as_deref(), &emit_witness(&w, args.matrix)?)
}

fn cmd_selfcheck(args: &SelfcheckArgs) -> CliResult<bool> {
    type Check = fn(u64) -> witnesskit::Result<selfcheck::CheckResult>;
    let checks: [(u8, Check); 10] = [
        (1, selfcheck::check_example_34_entry_values),
        (2, |_| selfcheck::check_example_34_spectrum()),
        (3, |_| selfcheck::check_example_35()),
        (4, selfcheck::check_choi_identity),
        (5, selfcheck::check_witness_soundness),
        (6, selfcheck::check_map_positivity),
        (7, selfcheck::check_pure_states),
        (8, selfcheck::check_search_exactness),
        (9, selfcheck::check_certificate_chain),
        (10, selfcheck::check_distillability),
    ];
    if let Some(bad) = args.only.iter().find(|id| !(1..=10).contains(*id)) {
        return Err(CliError::Input(format!("--only: no criterion {bad}")));
    }
    let mut all = true;
    for (id, check) in checks {
        if !args.only.is_empty() && !args.only.contains(&id) {
            continue;
        }
        let r = check(args.seed).map_err(|e| CliError::Numerical(format!("criterion {id}: {e}")))?;
        println!("{r}");
        all &= r.passed;
    }
    Ok(all)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Detect(a) => cmd_detect(a).map(|_| true),
        Command::Example(a) => cmd_example(a).map(|_| true),
        Command::Witness(a) => cmd_witness(a).map(|_| true),
        Command::Scan(a) => scan::run(a).map(|_| true),
        Command::Selfcheck(a) => cmd_selfcheck(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
    }
}
