use std::fmt::Display;
use std::process::ExitCode;

use arboreal::doubling_prelie::{bigstar, leadsto_lin, Doubling};
use arboreal::grafting::{bracket, graft, Grafting};
use arboreal::linear::{extend_bilinear, LinComb};
use arboreal::oudom_guin::{unshuffle, Enveloping};
use arboreal::relations::{alpha_lin, diamond_lin};
use arboreal::text::{parse, to_forests, to_marked_trees, to_trees};
use arboreal::{ck, doubling, Config, Error, IdentityId, Report};
use clap::{Parser, Subcommand, ValueEnum};

const DEFAULT_MAX_DEGREE: usize = 9;

#[derive(Parser)]
#[command(name = "arboreal", version, about = "Exact algebra on rooted trees")]
struct Cli {
    /// Emit JSON instead of canonical text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate `"<op>: <expr> ; <expr>"`. Ops: graft, bracket, star[ck],
    /// star[dbl], bigstar, leadsto, diamond, alpha.
    Eval { input: String },
    /// Apply a coproduct to an expression.
    Coproduct {
        #[arg(long, value_enum)]
        algebra: Algebra,
        expr: String,
    },
    /// List the trees with N vertices, one per line.
    Enumerate {
        n: usize,
        /// List trees with every descendant-closed marking.
        #[arg(long)]
        marked: bool,
    },
    /// Verify catalog identities on every input up to the degree bound.
    Check {
        #[arg(long)]
        identity: Option<String>,
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algebra {
    /// Connes–Kreimer, admissible cuts.
    Ck,
    /// Doubling bialgebra, cuts inside the marks.
    Dbl,
    /// Unshuffling on forests.
    Gamma,
    /// Unshuffling on marked forests.
    Chi,
}

enum Failure {
    Usage(String),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ClosureViolation(_) => Failure::Failed(e.to_string()),
            Error::ResourceLimit { ref partial } => Failure::Failed(format!("{e}\n{partial}")),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn max_degree() -> Result<usize, Failure> {
    match std::env::var("ARBOREAL_MAX_DEGREE") {
        Ok(v) => v.parse().map_err(|_| Failure::Usage(format!("ARBOREAL_MAX_DEGREE must be a number, got `{v}`"))),
        Err(_) => Ok(DEFAULT_MAX_DEGREE),
    }
}

fn render<B: Ord + Clone + Display>(x: &LinComb<B>, json: bool) -> String {
    if json {
        x.to_json().to_string()
    } else {
        x.to_string()
    }
}

fn eval(input: &str, json: bool) -> Result<String, Failure> {
    let (op, rest) = input
        .split_once(':')
        .ok_or_else(|| Failure::Usage(format!("expected `<op>: <expr> ; <expr>`, got `{input}`")))?;
    let (lhs, rhs) = rest
        .split_once(';')
        .ok_or_else(|| Failure::Usage(format!("expected two operands separated by `;` in `{input}`")))?;
    let (a, b) = (parse(lhs.trim())?, parse(rhs.trim())?);
    let out = match op.trim() {
        "graft" => render(&graft(&to_trees(&a)?, &to_trees(&b)?), json),
        "bracket" => render(&bracket(&to_trees(&a)?, &to_trees(&b)?), json),
        "star[ck]" => {
            let env = Enveloping::new(Grafting::default());
            render(&env.star_lin(&to_forests(&a)?, &to_forests(&b)?), json)
        }
        "star[dbl]" => render(&Enveloping::new(Doubling).star_lin(&a, &b), json),
        "bigstar" => render(&extend_bilinear(&a, &b, bigstar), json),
        "leadsto" => render(&leadsto_lin(&to_marked_trees(&a)?, &to_marked_trees(&b)?), json),
        "diamond" => render(&diamond_lin(&to_trees(&a)?, &to_marked_trees(&b)?), json),
        "alpha" => render(&alpha_lin(&a, &to_forests(&b)?), json),
        other => return Err(Failure::Usage(format!("unknown operation `{other}`"))),
    };
    Ok(out)
}

fn coproduct(algebra: Algebra, expr: &str, json: bool) -> Result<String, Failure> {
    let x = parse(expr.trim())?;
    Ok(match algebra {
        Algebra::Ck => render(&ck::coproduct_lin(&to_forests(&x)?), json),
        Algebra::Dbl => render(&doubling::coproduct_lin(&x), json),
        Algebra::Gamma => render(&to_forests(&x)?.linear(unshuffle), json),
        Algebra::Chi => render(&x.linear(unshuffle), json),
    })
}

fn enumerate(n: usize, marked: bool, json: bool) -> Result<String, Failure> {
    let cap = max_degree()?;
    if n == 0 || n > cap {
        return Err(Failure::Usage(format!("degree must be between 1 and {cap}, got {n}")));
    }
    let lines: Vec<String> = if marked {
        arboreal::enumerate_marked_trees(n).iter().map(ToString::to_string).collect()
    } else {
        arboreal::enumerate_trees(n).iter().map(ToString::to_string).collect()
    };
    eprintln!("{} trees", lines.len());
    if json {
        Ok(serde_json::json!({ "degree": n, "marked": marked, "count": lines.len(), "trees": lines }).to_string())
    } else {
        Ok(lines.join("\n"))
    }
}

fn check(identity: Option<&str>, bound: usize, json: bool) -> Result<(String, bool), Failure> {
    let cap = max_degree()?;
    if bound == 0 || bound > cap {
        return Err(Failure::Usage(format!("bound must be between 1 and {cap}, got {bound}")));
    }
    let config = Config::new(bound);
    let reports: Vec<Report> = match identity {
        Some(name) => vec![arboreal::check_with(name.parse::<IdentityId>()?, &config)?],
        None => arboreal::run_suite_with(&config)?,
    };
    let ok = reports.iter().all(Report::passed);
    let text = if json {
        serde_json::to_string_pretty(&reports).expect("reports serialize")
    } else {
        reports.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n")
    };
    Ok((text, ok))
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let (text, ok) = match &cli.command {
        Command::Eval { input } => (eval(input, cli.json)?, true),
        Command::Coproduct { algebra, expr } => (coproduct(*algebra, expr, cli.json)?, true),
        Command::Enumerate { n, marked } => (enumerate(*n, *marked, cli.json)?, true),
        Command::Check { identity, bound } => check(identity.as_deref(), *bound, cli.json)?,
    };
    println!("{text}");
    if arboreal::closure_violations() > 0 {
        return Err(Failure::Failed(format!("{} closure violations", arboreal::closure_violations())));
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
