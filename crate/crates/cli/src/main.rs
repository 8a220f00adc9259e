//! `prover`: termination prover for first-order rewrite systems.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use gwpo::algebra::AlgebraKind;
use gwpo::encode::{OrderClass, DEFAULT_CONST_BOUND};
use gwpo::parse_trs;
use gwpo::prover::{
    bench_config, conclude, prove_text, run_corpus, Answer, BenchConfig, Certificate, ProverConfig, Timings,
    BENCH_CONFIGS,
};
use gwpo::smt::SolverConfig;

#[derive(Parser)]
#[command(name = "prover", version, about = "Termination prover based on generalized weighted path orders")]
#[command(args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    prove: ProveArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Run every .trs file in a directory under several configurations
    Bench(BenchArgs),
    /// Check a certificate against a rewrite system without searching
    Verify { certificate: PathBuf, file: PathBuf },
}

#[derive(Args)]
struct SolverArgs {
    /// Solver command line; `-in` makes it read the script from stdin
    #[arg(long, default_value = "z3 -smt2")]
    solver: String,
    /// Per-problem timeout in seconds
    #[arg(long, default_value_t = 60)]
    timeout: u64,
    /// Bound on interpretation constants
    #[arg(long, default_value_t = DEFAULT_CONST_BOUND)]
    coeff_bound: i64,
}

#[derive(Args)]
struct ProveArgs {
    #[arg(long, default_value = "gwpo", value_parser = ["kbo", "lpo", "wpo", "gwpo"])]
    order: String,
    /// Defaults to linear, or maxplus for lpo
    #[arg(long, value_parser = ["linear", "maxplus"])]
    interp: Option<String>,
    #[command(flatten)]
    solver: SolverArgs,
    /// Print the certificate and derivations after the answer
    #[arg(long)]
    proof: bool,
    /// Write the SMT-LIB script to this path
    #[arg(long, value_name = "PATH")]
    dump_smt: Option<PathBuf>,
    /// Exit with status 2 on parse errors
    #[arg(long)]
    strict: bool,
    file: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Comma-separated configuration names
    #[arg(long, value_delimiter = ',', default_value = "kbo,wpo-linear,gwpo-linear,lpo,wpo-maxplus,gwpo-maxplus")]
    configs: Vec<String>,
    /// Also write the results as CSV
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
    dir: PathBuf,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("prover: {msg}");
    ExitCode::from(2)
}

fn solver_config(args: &SolverArgs) -> Result<SolverConfig, String> {
    if args.timeout == 0 {
        return Err("--timeout must be positive".into());
    }
    if args.coeff_bound < 0 {
        return Err("--coeff-bound must be non-negative".into());
    }
    let cfg = SolverConfig::from_command(&args.solver).ok_or("empty --solver command")?;
    Ok(cfg.with_timeout(Duration::from_secs(args.timeout)))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Some(Command::Bench(args)) => bench(args),
        Some(Command::Verify { certificate, file }) => verify(certificate, file),
        None => prove(cli.prove),
    }
}

fn prove(args: ProveArgs) -> ExitCode {
    let Some(file) = &args.file else { return usage("missing FILE (see --help)") };
    let order: OrderClass = args.order.parse().expect("validated by clap");
    let interp = match &args.interp {
        Some(i) => i.parse().expect("validated by clap"),
        None if order == OrderClass::Lpo => AlgebraKind::MaxPlus,
        None => AlgebraKind::Linear,
    };
    let solver = match solver_config(&args.solver) {
        Ok(s) => s,
        Err(e) => return usage(e),
    };
    let mut cfg = match ProverConfig::new(order, interp) {
        Ok(c) => c.with_solver(solver),
        Err(e) => return usage(e),
    };
    cfg.space = cfg.space.with_bound(args.solver.coeff_bound);
    cfg.dump_smt = args.dump_smt.clone();
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => return usage(format!("cannot read {}: {e}", file.display())),
    };
    let (trs, result) = prove_text(&text, &cfg);
    println!("{}", result.answer);
    if args.proof {
        println!();
        print!("{}", result.proof_text(trs.as_ref()));
    } else if let Some(d) = &result.diagnostic {
        eprintln!("{d}");
    }
    if result.parse_error && args.strict {
        return ExitCode::from(2);
    }
    exit_for(result.answer)
}

fn exit_for(a: Answer) -> ExitCode {
    if a.is_decided() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn bench(args: BenchArgs) -> ExitCode {
    let mut configs: Vec<BenchConfig> = Vec::new();
    for name in &args.configs {
        match bench_config(name.trim()) {
            Some(c) => configs.push(c),
            None => {
                let known: Vec<_> = BENCH_CONFIGS.iter().map(|c| c.name).collect();
                return usage(format!("unknown configuration `{name}` (known: {})", known.join(", ")));
            }
        }
    }
    let solver = match solver_config(&args.solver) {
        Ok(s) => s,
        Err(e) => return usage(e),
    };
    let report = match run_corpus(&args.dir, &configs, &solver, args.solver.coeff_bound, args.jobs) {
        Ok(r) => r,
        Err(e) => return usage(format!("cannot read {}: {e}", args.dir.display())),
    };
    print!("{}", report.table());
    if let Some(path) = &args.csv {
        if let Err(e) = std::fs::write(path, report.csv()) {
            return usage(format!("cannot write {}: {e}", path.display()));
        }
    }
    ExitCode::SUCCESS
}

fn verify(certificate: PathBuf, file: PathBuf) -> ExitCode {
    let read = |p: &PathBuf| std::fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display()));
    let (cert_text, trs_text) = match (read(&certificate), read(&file)) {
        (Ok(c), Ok(t)) => (c, t),
        (Err(e), _) | (_, Err(e)) => return usage(e),
    };
    let cert = match Certificate::parse(&cert_text) {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    let trs = match parse_trs(&trs_text) {
        Ok(t) => t,
        Err(e) => return usage(format!("parse error: {e}")),
    };
    let result = conclude(&trs, cert, Timings::default());
    println!("{}", result.answer);
    match &result.diagnostic {
        Some(d) => eprintln!("{d}"),
        None => {
            println!();
            print!("{}", result.proof_text(Some(&trs)));
        }
    }
    exit_for(result.answer)
}
