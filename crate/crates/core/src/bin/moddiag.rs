//! Command-line front end. Exit codes: 0 all checks pass, 1 a verification
//! or validation failure, 2 invalid input or usage.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use moddiag::diagonals::{albanese_image_dim, degree_criterion, gamma_expansion, gamma_map, vanishing_threshold};
use moddiag::reports::{
    class_to_json, diff_reports, load_class_file, load_model_file, parse_params, resolve_model, run_suite,
    ModelFile, SuiteReport,
};
use moddiag::{Builtin, Error, TensorClass};

#[derive(Parser)]
#[command(name = "moddiag", version, about = "Exact modified diagonal computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Model files and builtin models.
    #[command(subcommand)]
    Model(ModelCmd),
    /// Compute classes.
    #[command(subcommand)]
    Compute(ComputeCmd),
    /// Search for the smallest n with a vanishing modified diagonal.
    Threshold {
        #[arg(long)]
        model: String,
        #[arg(long = "max-n")]
        max_n: usize,
    },
    /// Run a verification suite and emit its report.
    Verify {
        #[arg(long)]
        suite: String,
        /// Suite parameter as key=value; repeatable.
        #[arg(long = "param")]
        params: Vec<String>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare reports.
    #[command(subcommand)]
    Report(ReportCmd),
}

#[derive(Subcommand)]
enum ModelCmd {
    /// Parse and validate a JSON model file.
    Validate { file: PathBuf },
    /// List builtin model specs, or print one as a model file.
    Builtin {
        #[arg(long)]
        list: bool,
        #[arg(long, conflicts_with = "list")]
        show: Option<String>,
    },
}

#[derive(Subcommand)]
enum ComputeCmd {
    /// γⁿ of a class (default: the fundamental class) on a model.
    Gamma(GammaArgs),
}

#[derive(Args)]
struct GammaArgs {
    #[arg(long)]
    model: String,
    #[arg(long)]
    n: usize,
    /// Class file; defaults to [X].
    #[arg(long)]
    alpha: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = RouteArg::Projector)]
    route: RouteArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Projector,
    Expansion,
    Both,
}

#[derive(Subcommand)]
enum ReportCmd {
    /// Differences between two report payloads.
    Diff { a: PathBuf, b: PathBuf },
}

/// Validation failures exit 1, anything else that went wrong exits 2.
fn fail(e: Error) -> ExitCode {
    match &e {
        Error::InvalidModel(violations) => {
            eprintln!("invalid model: {} violation(s)", violations.len());
            for v in violations {
                eprintln!("  {v}");
            }
            ExitCode::from(1)
        }
        _ => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn verdict(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, format!("{text}\n"))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => fail(e),
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Model(ModelCmd::Validate { file }) => {
            let m = load_model_file(&file)?;
            println!("ok: {} (dimension {}, ranks {:?})", m.name(), m.dimension(), m.ranks());
            Ok(ExitCode::SUCCESS)
        }
        Command::Model(ModelCmd::Builtin { list, show }) => {
            if let Some(spec) = show {
                let m = resolve_model(&spec)?;
                println!("{}", serde_json::to_string_pretty(&ModelFile::from_model(&m))?);
            } else if list {
                for line in Builtin::catalogue() {
                    println!("{line}");
                }
                println!("cover:g=<g>,h=<h>          total space of a double cover of a genus-h curve");
                println!("file:<path>                JSON model file");
            } else {
                return Err(Error::Parse("model builtin needs --list or --show <spec>".into()));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Compute(ComputeCmd::Gamma(args)) => compute_gamma(args),
        Command::Threshold { model, max_n } => {
            let m = resolve_model(&model)?;
            let search = vanishing_threshold(&m, max_n)?;
            let (d, e) = (m.dimension() as u64, albanese_image_dim(&m)? as u64);
            let mut agrees = true;
            for (k, &v) in search.vanishing.iter().enumerate() {
                agrees &= degree_criterion(k as u64 + 1, d, e)? == v;
            }
            let out = json!({
                "model": model,
                "d": d,
                "e": e,
                "maxN": max_n,
                "vanishing": search.vanishing,
                "threshold": search.threshold,
                "expected": d + e + 1,
                "matchesDegreeCriterion": agrees,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(verdict(agrees))
        }
        Command::Verify { suite, params, out } => {
            let params = parse_params(params.iter().map(String::as_str))?;
            let report = run_suite(&suite, &params)?;
            let text = report.to_json();
            match out {
                Some(path) => write(&path, &text)?,
                None => println!("{text}"),
            }
            let failed = report.payload.failures().count();
            eprintln!(
                "{}: {} checks, {} failed, {} ms",
                suite,
                report.payload.checks.len(),
                failed,
                report.wall_time_millis
            );
            Ok(verdict(report.passed()))
        }
        Command::Report(ReportCmd::Diff { a, b }) => {
            let ra = SuiteReport::from_json(&std::fs::read_to_string(&a)?)?;
            let rb = SuiteReport::from_json(&std::fs::read_to_string(&b)?)?;
            let mut ok = true;
            for (path, r) in [(&a, &ra), (&b, &rb)] {
                if !r.checksum_valid() {
                    println!("checksum mismatch in {}", path.display());
                    ok = false;
                }
            }
            let d = diff_reports(&ra, &rb);
            if let Some((x, y)) = &d.suite_changed {
                println!("suite: {x} -> {y}");
            }
            if d.parameters_changed {
                println!("parameters differ");
            }
            let show = |s: Option<moddiag::reports::Status>| s.map_or("absent".to_string(), |s| format!("{s:?}").to_lowercase());
            for (id, x, y) in &d.status_changes {
                println!("{id}: {} -> {}", show(*x), show(*y));
            }
            for id in &d.witness_changes {
                println!("{id}: witness differs");
            }
            ok &= d.is_empty();
            if ok {
                println!("identical payloads ({})", ra.checksum);
            }
            Ok(verdict(ok))
        }
    }
}

fn compute_gamma(args: GammaArgs) -> Result<ExitCode, Error> {
    let m = resolve_model(&args.model)?;
    let alpha = match &args.alpha {
        Some(path) => load_class_file(path, &m)?,
        None => TensorClass::fundamental(&m, 1)?,
    };
    let projector = matches!(args.route, RouteArg::Projector | RouteArg::Both).then(|| gamma_map(&alpha, args.n)).transpose()?;
    let expansion =
        matches!(args.route, RouteArg::Expansion | RouteArg::Both).then(|| gamma_expansion(&alpha, args.n)).transpose()?;
    let agree = match (&projector, &expansion) {
        (Some(p), Some(e)) => p.result == e.result,
        _ => true,
    };
    let result = projector.as_ref().or(expansion.as_ref()).expect("a route ran");
    let mut out = json!({
        "model": args.model,
        "n": args.n,
        "route": match args.route {
            RouteArg::Projector => "projector",
            RouteArg::Expansion => "expansion",
            RouteArg::Both => "both",
        },
        "input": class_to_json(&alpha),
        "result": class_to_json(&result.result),
        "isZero": result.is_zero(),
    });
    if args.route == RouteArg::Both {
        out["routesAgree"] = json!(agree);
        if let Some(e) = &expansion {
            out["expansionResult"] = class_to_json(&e.result);
        }
    }
    write(&args.out, &serde_json::to_string_pretty(&out)?)?;
    if !agree {
        eprintln!("projector and expansion routes disagree");
    }
    Ok(verdict(agree))
}
