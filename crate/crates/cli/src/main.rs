use std::path::PathBuf;
use std::process::ExitCode;

use clap::{error::ErrorKind, Parser, Subcommand};
use serde_json::{json, Value};

use meroshare::expr::{parse, Expr, Mobius};
use meroshare::local::{Sense, SharingMode, Weight};
use meroshare::region::{Region, MIN_PREC};
use meroshare::verdict::{
    mobius_outcome, quotient_triple, transfer_outcome, Analysis, Global, MobiusOutcome, TransferOutcome,
};
use meroshare_cli::corpus::corpus;
use meroshare_cli::run::{render_report, run_corpus, Status};

const EXIT_OK: u8 = 0;
const EXIT_FAILS: u8 = 1;
const EXIT_UNDECIDED: u8 = 2;
const EXIT_USAGE: u8 = 3;

/// Decide whether two meromorphic functions share a function on a rectangle.
///
/// Exit status: 0 all checks pass, 1 a verdict fails, 2 undecided,
/// 3 usage or parse error.
#[derive(Parser)]
#[command(name = "meroshare", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one triple (f, g, alpha) under one sharing mode.
    Analyze(AnalyzeArgs),
    /// Run the corpus of worked examples and print PASS/FAIL per check.
    Corpus {
        /// Also write the results as JSON to this path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct AnalyzeArgs {
    /// First function of z, e.g. "1/z + exp(z)".
    #[arg(long)]
    f: String,
    /// Second function of z.
    #[arg(long)]
    g: String,
    /// The shared function of z (a constant is allowed).
    #[arg(long)]
    alpha: String,
    /// re_min,re_max,im_min,im_max with rational entries.
    #[arg(long, default_value = "-7,7,-1,1", allow_hyphen_values = true)]
    region: String,
    /// vanishing or value.
    #[arg(long, default_value = "vanishing")]
    sense: Sense,
    /// A nonnegative integer, or inf for CM.
    #[arg(long, default_value = "inf")]
    weight: Weight,
    /// Also compare value-sense verdicts under w -> (a*w + b)/(c*w + d).
    #[arg(long, value_name = "a,b,c,d", allow_hyphen_values = true)]
    mobius: Option<String>,
    /// Also check whether f/alpha and g/alpha share the value 1.
    #[arg(long)]
    transfer: bool,
    /// Bits used to refine zeros (at least 128).
    #[arg(long, default_value_t = 256)]
    precision: u32,
    /// Write the JSON report to this path.
    #[arg(long)]
    json: Option<PathBuf>,
}

struct Usage(String);

fn expr(name: &str, s: &str) -> Result<Expr, Usage> {
    parse(s).map_err(|e| Usage(format!("--{name} `{s}`: {e}")))
}

fn write_json(path: &PathBuf, v: &Value) -> Result<(), Usage> {
    let text = serde_json::to_string_pretty(v).expect("report serializes");
    std::fs::write(path, text + "\n").map_err(|e| Usage(format!("cannot write {}: {e}", path.display())))
}

fn global_code(g: &Global) -> u8 {
    match g {
        Global::Shares => EXIT_OK,
        Global::Fails(_) => EXIT_FAILS,
        Global::Undecided(_) => EXIT_UNDECIDED,
    }
}

fn analyze(a: AnalyzeArgs) -> Result<u8, Usage> {
    let (f, g, alpha) = (expr("f", &a.f)?, expr("g", &a.g)?, expr("alpha", &a.alpha)?);
    let region: Region = a.region.parse().map_err(|e| Usage(format!("--region: {e}")))?;
    if a.precision < MIN_PREC {
        return Err(Usage(format!("--precision must be at least {MIN_PREC}")));
    }
    let mobius = match &a.mobius {
        None => None,
        Some(s) => {
            let parts: Vec<&str> = s.split(',').collect();
            if parts.len() != 4 {
                return Err(Usage(format!("--mobius expects four coefficients a,b,c,d, got `{s}`")));
            }
            let c = parts.iter().map(|p| expr("mobius", p)).collect::<Result<Vec<_>, _>>()?;
            let [ca, cb, cc, cd]: [Expr; 4] = c.try_into().expect("four coefficients");
            Some(Mobius::new(ca, cb, cc, cd).map_err(|e| Usage(format!("--mobius: {e}")))?)
        }
    };
    let mode = SharingMode::new(a.sense, a.weight);

    let analysis = match Analysis::with_precision(&f, &g, &alpha, &region, a.precision) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("undecided: {e}");
            return Ok(EXIT_UNDECIDED);
        }
    };
    let report = analysis.report(mode);
    print!("{}", render_report(&report));
    let mut code = global_code(&report.global);
    let mut json = report.to_json();

    if let Some(m) = mobius {
        let images = (m.apply(&f), m.apply(&g), m.apply(&alpha));
        let (mf, mg, ma) = match images {
            (Ok(x), Ok(y), Ok(z)) => (x, y, z),
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return Err(Usage(format!("--mobius: {e}"))),
        };
        let value = SharingMode::new(Sense::Value, a.weight);
        let before = analysis.report(value);
        let outcome = match Analysis::with_precision(&mf, &mg, &ma, &analysis.region, a.precision) {
            Ok(after) => {
                let after = after.report(value);
                println!("\nimage under the map:");
                print!("{}", render_report(&after));
                let o = mobius_outcome(&before, &after);
                json["mobius"] =
                    json!({"outcome": format!("{o:?}"), "before": before.to_json(), "after": after.to_json()});
                o
            }
            Err(e) => MobiusOutcome::Undecided(e.to_string()),
        };
        println!("mobius: {outcome:?}");
        code = code.max(match outcome {
            MobiusOutcome::Consistent => EXIT_OK,
            MobiusOutcome::Violation(_) => EXIT_FAILS,
            MobiusOutcome::Undecided(_) => EXIT_UNDECIDED,
        });
    }

    if a.transfer {
        let (qf, qg, one) = quotient_triple(&f, &g, &alpha);
        let outcome = match Analysis::with_precision(&qf, &qg, &one, &region, a.precision) {
            Ok(q) => {
                let q = q.report(mode);
                println!("\nquotients f/alpha, g/alpha against 1:");
                print!("{}", render_report(&q));
                json["transfer_quotients"] = q.to_json();
                transfer_outcome(&report.global, &q.global)
            }
            Err(e) => TransferOutcome::Undecided(e.to_string()),
        };
        println!("transfer: {outcome}");
        json["transfer"] = json!(outcome.to_string());
        code = code.max(match (&outcome, mode == SharingMode::cm(Sense::Value)) {
            (TransferOutcome::TransferFails(_), true) => EXIT_FAILS,
            (TransferOutcome::Undecided(_), _) => EXIT_UNDECIDED,
            _ => EXIT_OK,
        });
    }

    if let Some(path) = &a.json {
        write_json(path, &json)?;
    }
    Ok(code)
}

fn corpus_cmd(json_path: Option<PathBuf>) -> Result<u8, Usage> {
    let results = run_corpus(&corpus());
    let mut rows = Vec::new();
    for r in &results {
        println!("{:<9} {:<22} {}  => {}", r.status.to_string(), r.entry, r.check, r.got);
        rows.push(json!({"entry": r.entry, "check": r.check, "got": r.got, "status": r.status.to_string()}));
    }
    let count = |s: Status| results.iter().filter(|r| r.status == s).count();
    let (pass, fail, und) = (count(Status::Pass), count(Status::Fail), count(Status::Undecided));
    println!("{pass} passed, {fail} failed, {und} undecided");
    if let Some(p) = &json_path {
        write_json(p, &json!({"checks": rows, "passed": pass, "failed": fail, "undecided": und}))?;
    }
    Ok(if fail > 0 {
        EXIT_FAILS
    } else if und > 0 {
        EXIT_UNDECIDED
    } else {
        EXIT_OK
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let res = match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Corpus { json } => corpus_cmd(json),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
