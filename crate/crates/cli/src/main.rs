use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gvc_core::dsl::{run, Command, RunOptions, VerifyTarget, EXIT_ERROR};
use gvc_core::oracle::{BUDGET_ENV, DEFAULT_BUDGET, DEFAULT_MAX_ORDER};

/// Cohomology rings, graded traces and point counts of group varieties.
///
/// Expressions use the grammar `GL(3)`, `ext(torus(2), abelian(1; t^2+3t+5))`
/// and so on; pass `-` to read one from stdin.
#[derive(Parser, Debug)]
#[command(name = "gvc", version)]
struct Cli {
    /// Emit a JSON report instead of tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Debug)]
struct EndoArgs {
    /// Endomorphism spec, e.g. `frobenius(5)` or `block(ab.* : charpoly t^2+3t+5), frobenius(5)`.
    #[arg(long)]
    endo: Option<String>,
    /// Shorthand for `--endo frobenius(Q)`.
    #[arg(long)]
    q: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Generators, Betti numbers and Euler characteristic.
    Cohomology { expr: String },
    /// Poincaré polynomial.
    Poincare { expr: String },
    /// Graded alternating trace of an endomorphism.
    Trace {
        expr: String,
        #[command(flatten)]
        endo: EndoArgs,
    },
    /// The sequence d_1..d_n of traces of iterates.
    Dn {
        expr: String,
        #[command(flatten)]
        endo: EndoArgs,
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Number of F_q-points.
    Count {
        expr: String,
        #[arg(long)]
        q: u64,
        /// Compare against brute-force enumeration.
        #[arg(long)]
        check_oracle: bool,
    },
    /// Truncated zeta series exp(Σ d_n t^n / n).
    Zeta {
        expr: String,
        #[command(flatten)]
        endo: EndoArgs,
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
    /// Cross-checks against explicit algebras and oracles.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// Hopf axioms and structure theorem for the explicit algebra.
    Hopf { expr: String },
    /// Multiplicativity and exactness at every extension node.
    Decomposition { expr: String },
    /// Molien-series degrees and root counts against the table.
    WeylDegrees {
        #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
        max_order: usize,
    },
    /// Structural point counts against enumeration on a fixed grid.
    PointCounts,
}

fn read_expr(expr: String) -> Result<String, String> {
    if expr != "-" {
        return Ok(expr);
    }
    let mut s = String::new();
    std::io::stdin()
        .read_to_string(&mut s)
        .map_err(|e| format!("reading stdin: {e}"))?;
    Ok(s)
}

fn endo_spec(args: EndoArgs) -> Result<String, String> {
    match (args.endo, args.q) {
        (Some(e), _) => Ok(e),
        (None, Some(q)) => Ok(format!("frobenius({q})")),
        (None, None) => Err("give an endomorphism with --endo or --q".into()),
    }
}

fn budget() -> Result<u64, String> {
    match std::env::var(BUDGET_ENV) {
        Err(_) => Ok(DEFAULT_BUDGET),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{BUDGET_ENV} must be a non-negative integer, got `{v}`")),
    }
}

fn command(cmd: Cmd) -> Result<Command, String> {
    Ok(match cmd {
        Cmd::Cohomology { expr } => Command::Cohomology { expr: read_expr(expr)? },
        Cmd::Poincare { expr } => Command::Poincare { expr: read_expr(expr)? },
        Cmd::Trace { expr, endo } => Command::Trace {
            expr: read_expr(expr)?,
            endo: endo_spec(endo)?,
        },
        Cmd::Dn { expr, endo, n } => Command::Dn {
            expr: read_expr(expr)?,
            endo: endo_spec(endo)?,
            n,
        },
        Cmd::Count { expr, q, check_oracle } => Command::Count {
            expr: read_expr(expr)?,
            q,
            check_oracle,
        },
        Cmd::Zeta { expr, endo, order } => Command::Zeta {
            expr: read_expr(expr)?,
            endo: endo_spec(endo)?,
            order,
        },
        Cmd::Verify(v) => Command::Verify(match v {
            VerifyCmd::Hopf { expr } => VerifyTarget::Hopf { expr: read_expr(expr)? },
            VerifyCmd::Decomposition { expr } => VerifyTarget::Decomposition { expr: read_expr(expr)? },
            VerifyCmd::WeylDegrees { max_order } => VerifyTarget::WeylDegrees { max_order },
            VerifyCmd::PointCounts => VerifyTarget::PointCounts,
        }),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let prepared = command(cli.command).and_then(|c| Ok((c, budget()?)));
    let (cmd, budget) = match prepared {
        Ok(x) => x,
        Err(msg) => {
            eprintln!("gvc: {msg}");
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    let opts = RunOptions {
        budget,
        ..RunOptions::default()
    };
    let outcome = run(&cmd, &opts);
    if cli.json {
        println!("{}", outcome.report.to_json());
    } else {
        print!("{}", outcome.report.render_text());
    }
    ExitCode::from(outcome.exit_code as u8)
}
