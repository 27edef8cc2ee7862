use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use wsts::check::{check_problem, CheckOptions};
use wsts::engine::{Limits, Verdict};
use wsts::fischer::fischer_model;
use wsts::gallery::{
    expand_ad_to_b, expand_s2_to_s1, AdAtom, AdConstraint, ConstRange, S2Atom, S2Constraint,
    DEFAULT_EXPANSION_CAP,
};
use wsts::lcs::{normalize_expr, L2Expr};
use wsts::model::{load_problem, parse_marking, ModelError, ModelFile, Problem};

#[derive(Parser)]
#[command(name = "wsts", version, about = "Backward-reachability coverability checker")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide coverability of every target in a model file.
    Check(CheckArgs),
    /// Write the Fischer protocol net as a model file ("-" for stdout).
    GenerateFischer {
        out: PathBuf,
        /// Drop the waiting guard on `enter`.
        #[arg(long)]
        mutate_enter: bool,
    },
    /// Expand a constraint into its equivalent disjunction.
    #[command(subcommand)]
    Expand(Expand),
    /// Normalize a constraint expression.
    #[command(subcommand)]
    Normalize(Normalize),
}

#[derive(clap::Args)]
struct CheckArgs {
    file: PathBuf,
    #[arg(long)]
    target: Option<String>,
    /// Report timing and witness traces on stderr.
    #[arg(long)]
    stats: bool,
    /// Print the final constraint set after each verdict line.
    #[arg(long)]
    dump_fixpoint: bool,
    #[arg(long, value_enum)]
    expect: Option<Expect>,
    #[arg(long, default_value_t = Limits::default().max_constraints)]
    max_constraints: usize,
    #[arg(long, default_value_t = Limits::default().max_seconds)]
    max_seconds: f64,
    /// Start from a literal marking instead of the file's init family.
    #[arg(long)]
    init_from_file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Expect {
    Reachable,
    Unreachable,
}

#[derive(Subcommand)]
enum Expand {
    /// Sum constraints such as `x1+x2>=2` into minimal vectors.
    Ad {
        #[arg(long)]
        dim: usize,
        #[arg(required = true)]
        atoms: Vec<String>,
    },
    /// Gap constraints such as `6<=x2` into sparser-than constraints.
    S2 {
        #[arg(long)]
        vars: usize,
        #[arg(long, allow_hyphen_values = true)]
        cmin: i64,
        #[arg(long, allow_hyphen_values = true)]
        cmax: i64,
        #[arg(long, default_value_t = DEFAULT_EXPANSION_CAP)]
        cap: usize,
        #[arg(allow_hyphen_values = true)]
        atoms: Vec<String>,
    },
}

#[derive(Subcommand)]
enum Normalize {
    /// An expression over `.`, `&`, `+` into its minimal word set.
    L2 { expr: String },
}

/// A failure reported with exit code 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(args) => check(args),
        Command::GenerateFischer { out, mutate_enter } => generate(out, mutate_enter),
        Command::Expand(e) => expand(e),
        Command::Normalize(Normalize::L2 { expr }) => normalize(&expr),
    };
    match result {
        Ok(code) => code,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn check(args: CheckArgs) -> Result<ExitCode, Failure> {
    let text = read(&args.file)?;
    let problem = load_problem(&text).map_err(|e| match e {
        ModelError::Syntax { .. } => Failure(format!("{}:{e}", args.file.display())),
        other => Failure(format!("{}: {other}", args.file.display())),
    })?;
    let init_marking = match (&args.init_from_file, &problem) {
        (None, _) => None,
        (Some(path), Problem::Tpn(p)) => Some(
            parse_marking(&read(path)?, &p.net)
                .map_err(|e| Failure(format!("{}: {e}", path.display())))?,
        ),
        (Some(_), Problem::Lcs(_)) => {
            return Err(Failure("--init-from-file applies to timed Petri nets only".into()))
        }
    };
    let opts = CheckOptions {
        target: args.target,
        limits: Limits {
            max_constraints: args.max_constraints,
            max_seconds: args.max_seconds,
        },
        dump_fixpoint: args.dump_fixpoint,
        init_marking,
    };
    let started = Instant::now();
    let reports = check_problem(&problem, &opts)?;
    let mut mismatch = false;
    for r in &reports {
        println!("{}", r.line());
        if let Some(fix) = &r.fixpoint {
            println!("{fix}");
        }
        if args.stats {
            if let Some(trace) = &r.witness_trace {
                eprintln!("{}: trace {}", r.name, trace.join(" "));
            }
        }
        let want = args.expect.map(|e| match e {
            Expect::Reachable => Verdict::Reachable,
            Expect::Unreachable => Verdict::Unreachable,
        });
        if want.is_some_and(|w| w != r.verdict) {
            eprintln!("{}: expected {}, got {}", r.name, want.unwrap(), r.verdict);
            mismatch = true;
        }
    }
    if args.stats {
        eprintln!("time={:.3}s", started.elapsed().as_secs_f64());
    }
    Ok(if mismatch {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn generate(out: PathBuf, mutate_enter: bool) -> Result<ExitCode, Failure> {
    let json = ModelFile::Tpn(fischer_model(mutate_enter)).to_json();
    if out.as_os_str() == "-" {
        print!("{json}");
    } else {
        fs::write(&out, json).map_err(|e| Failure(format!("{}: {e}", out.display())))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn expand(e: Expand) -> Result<ExitCode, Failure> {
    match e {
        Expand::Ad { dim, atoms } => {
            let atoms = atoms
                .iter()
                .map(|a| a.parse::<AdAtom>())
                .collect::<Result<Vec<_>, _>>()?;
            for v in expand_ad_to_b(&AdConstraint::new(atoms)?, dim)? {
                println!("{v}");
            }
        }
        Expand::S2 {
            vars,
            cmin,
            cmax,
            cap,
            atoms,
        } => {
            let atoms = atoms
                .iter()
                .map(|a| a.parse::<S2Atom>())
                .collect::<Result<Vec<_>, _>>()?;
            let psi = S2Constraint::new(vars, atoms)?;
            for c in expand_s2_to_s1(&psi, ConstRange::new(cmin, cmax)?, cap)? {
                println!("{c}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn normalize(expr: &str) -> Result<ExitCode, Failure> {
    let e: L2Expr = expr.parse().map_err(|e| Failure(format!("expression: {e}")))?;
    println!("{}", normalize_expr(&e));
    Ok(ExitCode::SUCCESS)
}
