//! Evaluation of corpus checks and formatting of reports.

use std::collections::HashMap;
use std::fmt;

use meroshare::constants::SymConst;
use meroshare::expr::{parse, Expr, Mobius};
use meroshare::laurent::local_order;
use meroshare::region::{Region, RegionError};
use meroshare::verdict::{
    quotient_triple, same_point_set, transfer_outcome, verify_mobius_invariance, Analysis, Global, MobiusOutcome,
    SharingReport, TransferOutcome,
};

use crate::corpus::{Check, CorpusEntry, Expected, ExpectedTransfer};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Undecided,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Undecided => "UNDECIDED",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub entry: String,
    pub check: String,
    pub got: String,
    pub status: Status,
}

pub fn expr(s: &str) -> Expr {
    parse(s).unwrap_or_else(|e| panic!("corpus expression `{s}`: {e}"))
}

fn point(s: &str) -> SymConst {
    SymConst::from_expr(&expr(s)).unwrap_or_else(|e| panic!("corpus point `{s}`: {e}"))
}

fn points(v: &[&str]) -> Vec<SymConst> {
    v.iter().map(|s| point(s)).collect()
}

/// Analyses keyed by the triple, shared between checks of one run.
#[derive(Default)]
pub struct Cache {
    map: HashMap<(String, String, String), Result<Analysis, RegionError>>,
}

impl Cache {
    pub fn analysis(&mut self, f: &Expr, g: &Expr, alpha: &Expr, r: &Region) -> Result<&Analysis, RegionError> {
        let key = (f.to_string(), g.to_string(), alpha.to_string());
        self.map.entry(key).or_insert_with(|| Analysis::new(f, g, alpha, r)).as_ref().map_err(Clone::clone)
    }
}

fn judge_share(got: &Global, expect: &Expected) -> Status {
    match (got, expect) {
        (Global::Undecided(_), _) => Status::Undecided,
        (Global::Shares, Expected::Shares) => Status::Pass,
        (Global::Fails(w), Expected::FailsAt(v)) if same_point_set(w, &points(v)) => Status::Pass,
        _ => Status::Fail,
    }
}

fn judge_transfer(got: &TransferOutcome, expect: &ExpectedTransfer) -> Status {
    match (got, expect) {
        (TransferOutcome::Undecided(_), _) => Status::Undecided,
        (TransferOutcome::TransferHolds, ExpectedTransfer::Holds) => Status::Pass,
        (TransferOutcome::PreconditionFails, ExpectedTransfer::PreconditionFails) => Status::Pass,
        (TransferOutcome::TransferFails(w), ExpectedTransfer::FailsAt(v)) if same_point_set(w, &points(v)) => {
            Status::Pass
        }
        _ => Status::Fail,
    }
}

fn describe_expected(e: &Expected) -> String {
    match e {
        Expected::Shares => "Shares".into(),
        Expected::FailsAt(v) => format!("Fails@{{{}}}", v.join(", ")),
    }
}

fn describe_transfer(e: &ExpectedTransfer) -> String {
    match e {
        ExpectedTransfer::Holds => "TransferHolds".into(),
        ExpectedTransfer::FailsAt(v) => format!("TransferFails@{{{}}}", v.join(", ")),
        ExpectedTransfer::PreconditionFails => "PreconditionFails".into(),
    }
}

fn region_error(entry: &str, check: String, e: RegionError) -> CheckResult {
    CheckResult { entry: entry.to_string(), check, got: format!("error: {e}"), status: Status::Undecided }
}

pub fn run_check(entry: &CorpusEntry, check: &Check, cache: &mut Cache) -> CheckResult {
    let region: Region = entry.region.parse().expect("corpus region");
    let result =
        |check: String, got: String, status: Status| CheckResult { entry: entry.id.clone(), check, got, status };
    match check {
        Check::Share { label, f, g, alpha, mode, expect } => {
            let name = format!("({label}) {mode}: expect {}", describe_expected(expect));
            match cache.analysis(&expr(f), &expr(g), &expr(alpha), &region) {
                Ok(a) => {
                    let rep = a.report(*mode);
                    let status = judge_share(&rep.global, expect);
                    result(name, rep.global.to_string(), status)
                }
                Err(e) => region_error(&entry.id, name, e),
            }
        }
        Check::Transfer { mode, expect } => {
            let name = format!("quotients share 1 after {mode}: expect {}", describe_transfer(expect));
            let (f, g, a) = (expr(entry.f), expr(entry.g), expr(entry.alpha));
            let pre = match cache.analysis(&f, &g, &a, &region) {
                Ok(an) => an.report(*mode).global,
                Err(e) => return region_error(&entry.id, name, e),
            };
            let (qf, qg, one) = quotient_triple(&f, &g, &a);
            let quo = match cache.analysis(&qf, &qg, &one, &region) {
                Ok(an) => an.report(*mode).global,
                Err(e) => return region_error(&entry.id, name, e),
            };
            let got = transfer_outcome(&pre, &quo);
            let status = judge_transfer(&got, expect);
            result(name, got.to_string(), status)
        }
        Check::MobiusConsistent { map, weight } => {
            let name = format!(
                "value/{weight} under w -> (({})*w + ({}))/(({})*w + ({})): expect Consistent",
                map[0], map[1], map[2], map[3]
            );
            let m = match Mobius::new(expr(map[0]), expr(map[1]), expr(map[2]), expr(map[3])) {
                Ok(m) => m,
                Err(e) => return result(name, format!("error: {e}"), Status::Fail),
            };
            match verify_mobius_invariance(&expr(entry.f), &expr(entry.g), &expr(entry.alpha), &m, &region, *weight) {
                Ok(c) => {
                    let got = format!("{:?} ({} -> {})", c.outcome, c.before.global, c.after.global);
                    let status = match c.outcome {
                        MobiusOutcome::Consistent => Status::Pass,
                        MobiusOutcome::Violation(_) => Status::Fail,
                        MobiusOutcome::Undecided(_) => Status::Undecided,
                    };
                    result(name, got, status)
                }
                Err(e) => result(name, format!("error: {e}"), Status::Undecided),
            }
        }
        Check::Order { expr: e, point: p, expect } => {
            let name = format!("order of {e} at {p}: expect {expect}");
            let got = local_order(&expr(e), &point(p)).to_string();
            let status = if got == *expect { Status::Pass } else { Status::Fail };
            result(name, got, status)
        }
    }
}

/// Every check of every entry, in corpus order.
pub fn run_corpus(entries: &[CorpusEntry]) -> Vec<CheckResult> {
    let mut cache = Cache::default();
    let mut out = Vec::new();
    for e in entries {
        for c in &e.checks {
            out.push(run_check(e, c, &mut cache));
        }
    }
    out
}

/// Human-readable table for a sharing report.
pub fn render_report(rep: &SharingReport) -> String {
    let mut s = format!("mode {} on region {}\n", rep.mode, rep.region);
    if rep.region != rep.diagnostics.requested_region {
        s += &format!("  (requested {}, shrunk to avoid a zero on the boundary)\n", rep.diagnostics.requested_region);
    }
    let rows: Vec<[String; 5]> = rep
        .points
        .iter()
        .map(|p| {
            let c = &p.classification;
            let recip = match (&c.ord_recip_f, &c.ord_recip_g) {
                (Some(a), Some(b)) => format!("{a} / {b}"),
                _ => "-".into(),
            };
            let verdict = match &p.reason {
                Some(r) => format!("{:?} ({r})", p.verdict),
                None => format!("{:?}", p.verdict),
            };
            [
                c.point.to_string(),
                c.ord_alpha.to_string(),
                format!("{} / {}", c.ord_f_minus_alpha, c.ord_g_minus_alpha),
                recip,
                verdict,
            ]
        })
        .collect();
    let head = ["point", "alpha", "f-alpha / g-alpha", "1/f-1/alpha / 1/g-1/alpha", "verdict"].map(String::from);
    let mut width = head.clone().map(|h| h.len());
    for r in &rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    for r in std::iter::once(&head).chain(&rows) {
        let line: Vec<String> = r.iter().zip(width).map(|(c, w)| format!("{c:<w$}")).collect();
        s += "  ";
        s += line.join("  ").trim_end();
        s += "\n";
    }
    s += &format!("global: {}\n", rep.global);
    s
}
