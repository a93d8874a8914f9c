use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lambda_orders::cmp::Cmp;
use lambda_orders::config::parse_signature;
use lambda_orders::gen::{Gen, GenConfig};
use lambda_orders::lambda_order::{compare_using, Algorithm, OrderKind, OrderParams};
use lambda_orders::props::{check_named, CheckOptions, PROPERTY_NAMES};
use lambda_orders::syntax::parse_term;

mod bench;

/// Compare polymorphic higher-order terms with λKBO and λLPO.
#[derive(Parser)]
#[command(name = "lambda-orders", version)]
struct Cli {
    /// Signature file (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    sig: Option<PathBuf>,
    /// Order to use; defaults to the signature file's, or both for check and bench.
    #[arg(long, global = true, value_enum)]
    order: Option<OrderArg>,
    /// Algorithm for compare and check; bench always times both.
    #[arg(long, global = true, value_enum, default_value_t = AlgoArg::Optimized)]
    algo: AlgoArg,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Instances per property (check) or pairs per corpus (bench).
    #[arg(long, global = true, default_value_t = 100)]
    iters: u64,
    /// Reject leaking De Bruijn indices of conflicting types instead of
    /// answering U.
    #[arg(long, global = true)]
    strict: bool,
    /// Give the oracle a reversed precedence; the oracle equivalence check
    /// must then fail.
    #[arg(long, global = true, hide = true)]
    inject_oracle_fault: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare two term files; prints one of G GE E LE L U.
    Compare { left: PathBuf, right: PathBuf },
    /// Run the randomized property checks; one line per property.
    Check {
        /// Properties to run; all by default.
        #[arg(value_name = "PROPERTY")]
        properties: Vec<String>,
    },
    /// Time the naive and optimized algorithms.
    Bench {
        /// Deepest member of the same-head nesting family.
        #[arg(long, default_value_t = 14)]
        max_depth: usize,
        /// Stop running the naive algorithm on the nesting family once one
        /// comparison takes longer than this many seconds.
        #[arg(long, default_value_t = 5.0)]
        naive_limit: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Kbo,
    Lpo,
}

impl From<OrderArg> for OrderKind {
    fn from(o: OrderArg) -> OrderKind {
        match o {
            OrderArg::Kbo => OrderKind::Kbo,
            OrderArg::Lpo => OrderKind::Lpo,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Naive,
    Optimized,
    Both,
}

const EXIT_INVALID: u8 = 1;
const EXIT_PROPERTY: u8 = 2;

/// An error carrying its exit status.
struct Failure {
    code: u8,
    msg: String,
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_INVALID, msg: msg.into() }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

impl Cli {
    fn kind(&self) -> Option<OrderKind> {
        self.order.map(OrderKind::from)
    }

    fn load_signature(&self, path: &Path, kind: Option<OrderKind>) -> Result<OrderParams, Failure> {
        let mut p = parse_signature(&read(path)?, kind).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        p.strict = self.strict;
        Ok(p)
    }

    /// The signatures to check or benchmark: the given file, or one
    /// generated from the seed per order kind.
    fn signatures(&self) -> Result<Vec<OrderParams>, Failure> {
        if let Some(path) = &self.sig {
            return Ok(vec![self.load_signature(path, self.kind())?]);
        }
        let kinds = match self.kind() {
            Some(k) => vec![k],
            None => vec![OrderKind::Kbo, OrderKind::Lpo],
        };
        Ok(kinds
            .into_iter()
            .map(|k| {
                let mut p = Gen::new(GenConfig { seed: self.seed, ..GenConfig::default() }).signature(k);
                p.strict = self.strict;
                p
            })
            .collect())
    }

    fn algorithms(&self) -> Vec<Algorithm> {
        match self.algo {
            AlgoArg::Naive => vec![Algorithm::Naive],
            AlgoArg::Optimized => vec![Algorithm::Optimized],
            AlgoArg::Both => vec![Algorithm::Naive, Algorithm::Optimized],
        }
    }
}

fn compare(cli: &Cli, left: &Path, right: &Path) -> Result<(), Failure> {
    let Some(sig) = &cli.sig else {
        return Err(invalid("compare needs --sig"));
    };
    let p = cli.load_signature(sig, cli.kind())?;
    let parse =
        |path: &Path| parse_term(&read(path)?, &p.signature).map_err(|e| invalid(format!("{}:{e}", path.display())));
    let (t, s) = (parse(left)?, parse(right)?);
    let mut results: Vec<(Algorithm, Cmp)> = Vec::new();
    for a in cli.algorithms() {
        let (c, _) = compare_using(&t, &s, &p, p.kind, a).map_err(|e| invalid(e.to_string()))?;
        results.push((a, c));
    }
    if let [(_, naive), (_, opt)] = results[..] {
        if naive != opt {
            return Err(Failure { code: EXIT_PROPERTY, msg: format!("naive gave {naive}, optimized gave {opt}") });
        }
    }
    println!("{}", results[0].1);
    Ok(())
}

fn check(cli: &Cli, properties: &[String]) -> Result<(), Failure> {
    if let Some(bad) = properties.iter().find(|n| !PROPERTY_NAMES.contains(&n.as_str())) {
        return Err(invalid(format!("unknown property '{bad}'; known: {}", PROPERTY_NAMES.join(", "))));
    }
    if cli.iters == 0 {
        return Ok(());
    }
    let opts = CheckOptions {
        iters: cli.iters,
        gen: GenConfig { seed: cli.seed.wrapping_add(1), ..GenConfig::default() },
        algorithm: if cli.algo == AlgoArg::Naive { Algorithm::Naive } else { Algorithm::Optimized },
        inject_oracle_fault: cli.inject_oracle_fault,
        ..CheckOptions::default()
    };
    let mut failed = 0;
    for p in cli.signatures()? {
        let names: Vec<&str> = if properties.is_empty() {
            PROPERTY_NAMES.to_vec()
        } else {
            properties.iter().map(String::as_str).collect()
        };
        for r in names.into_iter().filter_map(|n| check_named(n, &p, &opts)) {
            println!("order={} {r}", p.kind);
            if !r.ok() {
                failed += 1;
            }
        }
    }
    if failed > 0 {
        return Err(Failure { code: EXIT_PROPERTY, msg: format!("{failed} properties failed") });
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Compare { left, right } => compare(cli, left, right),
        Command::Check { properties } => check(cli, properties),
        Command::Bench { max_depth, naive_limit } => {
            bench::run(&cli.signatures()?, cli.seed, cli.iters, *max_depth, *naive_limit);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INVALID) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
