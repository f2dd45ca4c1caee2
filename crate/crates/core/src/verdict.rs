//! Region-level sharing verdicts, and harnesses for the behavior of sharing
//! under Möbius maps and under division by the shared function.

use std::fmt;
use std::thread;

use serde_json::{json, Value};
use thiserror::Error;

use crate::constants::SymConst;
use crate::expr::{Expr, Mobius, MobiusError};
use crate::laurent::LocalOrder;
use crate::local::{classify_point, local_verdict, LocalVerdict, PointClassification, Sense, SharingMode, Weight};
use crate::region::{locate_candidates_with, Candidate, Region, RegionError, Source, REFINE_PREC, SNAP_TOL};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerdictError {
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Mobius(#[from] MobiusError),
}

/// The candidates of a triple in a region together with their local
/// classification, reusable across sharing modes.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub f: Expr,
    pub g: Expr,
    pub alpha: Expr,
    pub requested: Region,
    pub region: Region,
    pub points: Vec<AnalyzedPoint>,
    pub precision: u32,
    pub cells: usize,
}

#[derive(Clone, Debug)]
pub struct AnalyzedPoint {
    pub candidate: Candidate,
    pub classification: PointClassification,
}

impl Analysis {
    pub fn new(f: &Expr, g: &Expr, alpha: &Expr, r: &Region) -> Result<Analysis, RegionError> {
        Analysis::with_precision(f, g, alpha, r, REFINE_PREC)
    }

    pub fn with_precision(
        f: &Expr,
        g: &Expr,
        alpha: &Expr,
        r: &Region,
        precision: u32,
    ) -> Result<Analysis, RegionError> {
        let set = locate_candidates_with(f, g, alpha, r, precision)?;
        let classes: Vec<PointClassification> = thread::scope(|s| {
            let handles: Vec<_> =
                set.points.iter().map(|c| s.spawn(move || classify_point(f, g, alpha, &c.point))).collect();
            handles.into_iter().map(|h| h.join().expect("classification thread panicked")).collect()
        });
        let points = set
            .points
            .into_iter()
            .zip(classes)
            .map(|(candidate, classification)| AnalyzedPoint { candidate, classification })
            .collect();
        Ok(Analysis {
            f: f.clone(),
            g: g.clone(),
            alpha: alpha.clone(),
            requested: r.clone(),
            region: set.region,
            points,
            precision,
            cells: set.cells,
        })
    }

    pub fn report(&self, mode: SharingMode) -> SharingReport {
        let points: Vec<PointReport> = self
            .points
            .iter()
            .map(|p| {
                let verdict = local_verdict(&p.classification, mode);
                let reason = match verdict {
                    LocalVerdict::Undecided => Some(undecided_reason(&p.classification, mode)),
                    _ => None,
                };
                PointReport {
                    classification: p.classification.clone(),
                    snapped: p.candidate.snapped,
                    sources: p.candidate.sources.clone(),
                    verdict,
                    reason,
                }
            })
            .collect();
        let pick = |v: LocalVerdict| -> Vec<SymConst> {
            points.iter().filter(|p| p.verdict == v).map(|p| p.classification.point.clone()).collect()
        };
        let failed = pick(LocalVerdict::NotShared);
        let undecided = pick(LocalVerdict::Undecided);
        let global = if !failed.is_empty() {
            Global::Fails(failed)
        } else if !undecided.is_empty() {
            Global::Undecided(undecided)
        } else {
            Global::Shares
        };
        SharingReport {
            mode,
            region: self.region.clone(),
            points,
            global,
            diagnostics: Diagnostics {
                precision: self.precision,
                cells: self.cells,
                requested_region: self.requested.clone(),
            },
        }
    }
}

fn describe(name: &str, o: &LocalOrder) -> Option<String> {
    match o {
        LocalOrder::VanishesToDepth(d) => Some(format!("{name} vanishes to the truncation cap (depth {d})")),
        LocalOrder::Undecided(r) => Some(format!("{name}: {r}")),
        _ => None,
    }
}

fn undecided_reason(c: &PointClassification, mode: SharingMode) -> String {
    let mut orders = vec![("alpha", Some(&c.ord_alpha))];
    if mode.sense == Sense::Value && c.ord_alpha.is_pole() {
        orders.push(("1/f - 1/alpha", c.ord_recip_f.as_ref()));
        orders.push(("1/g - 1/alpha", c.ord_recip_g.as_ref()));
    } else {
        orders.push(("f - alpha", Some(&c.ord_f_minus_alpha)));
        orders.push(("g - alpha", Some(&c.ord_g_minus_alpha)));
    }
    orders
        .into_iter()
        .filter_map(|(n, o)| o.and_then(|o| describe(n, o)))
        .next()
        .unwrap_or_else(|| "local order undecided".into())
}

/// Region-level outcome.
#[derive(Clone, Debug)]
pub enum Global {
    Shares,
    /// Every point where the local verdict is NotShared.
    Fails(Vec<SymConst>),
    /// Points with an undecided local verdict; only reported when nothing fails.
    Undecided(Vec<SymConst>),
}

impl Global {
    pub fn status(&self) -> &'static str {
        match self {
            Global::Shares => "shares",
            Global::Fails(_) => "fails",
            Global::Undecided(_) => "undecided",
        }
    }

    pub fn witnesses(&self) -> &[SymConst] {
        match self {
            Global::Shares => &[],
            Global::Fails(w) | Global::Undecided(w) => w,
        }
    }

    pub fn is_shares(&self) -> bool {
        matches!(self, Global::Shares)
    }

    pub fn is_fails(&self) -> bool {
        matches!(self, Global::Fails(_))
    }

    pub fn is_undecided(&self) -> bool {
        matches!(self, Global::Undecided(_))
    }
}

impl fmt::Display for Global {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |w: &[SymConst]| w.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ");
        match self {
            Global::Shares => f.write_str("Shares"),
            Global::Fails(w) => write!(f, "Fails@{{{}}}", list(w)),
            Global::Undecided(w) => write!(f, "Undecided@{{{}}}", list(w)),
        }
    }
}

/// Whether two point lists denote the same set.
pub fn same_point_set(a: &[SymConst], b: &[SymConst]) -> bool {
    let covered = |x: &[SymConst], y: &[SymConst]| x.iter().all(|p| y.iter().any(|q| p.same_point(q, SNAP_TOL)));
    covered(a, b) && covered(b, a)
}

#[derive(Clone, Debug)]
pub struct PointReport {
    pub classification: PointClassification,
    pub snapped: bool,
    pub sources: Vec<(Source, u32)>,
    pub verdict: LocalVerdict,
    pub reason: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Diagnostics {
    pub precision: u32,
    pub cells: usize,
    pub requested_region: Region,
}

#[derive(Clone, Debug)]
pub struct SharingReport {
    pub mode: SharingMode,
    /// The region actually searched.
    pub region: Region,
    pub points: Vec<PointReport>,
    pub global: Global,
    pub diagnostics: Diagnostics,
}

fn order_json(o: &LocalOrder) -> Value {
    match o {
        LocalOrder::Zero(m) => json!({"kind": "zero", "order": m}),
        LocalOrder::Regular(v) => json!({"kind": "regular", "value": v.to_string()}),
        LocalOrder::Pole(m) => json!({"kind": "pole", "order": m}),
        LocalOrder::VanishesToDepth(d) => json!({"kind": "vanishes_to_depth", "depth": d}),
        LocalOrder::Undecided(r) => json!({"kind": "undecided", "reason": r}),
    }
}

impl SharingReport {
    pub fn to_json(&self) -> Value {
        let points: Vec<Value> = self
            .points
            .iter()
            .map(|p| {
                let c = &p.classification;
                let mut orders = json!({
                    "alpha": order_json(&c.ord_alpha),
                    "f_minus_alpha": order_json(&c.ord_f_minus_alpha),
                    "g_minus_alpha": order_json(&c.ord_g_minus_alpha),
                });
                if let (Some(rf), Some(rg)) = (&c.ord_recip_f, &c.ord_recip_g) {
                    orders["recip_f_minus_recip_alpha"] = order_json(rf);
                    orders["recip_g_minus_recip_alpha"] = order_json(rg);
                }
                let sources: Vec<Value> =
                    p.sources.iter().map(|(s, m)| json!({"source": s, "multiplicity": m})).collect();
                let mut v = json!({
                    "point": {"snapped": p.snapped, "value": c.point.to_string()},
                    "sources": sources,
                    "orders": orders,
                    "values": {
                        "f": c.value_f.to_string(),
                        "g": c.value_g.to_string(),
                        "alpha": c.value_alpha.to_string(),
                    },
                    "verdict": p.verdict,
                });
                if let Some(r) = &p.reason {
                    v["reason"] = json!(r);
                }
                v
            })
            .collect();
        let witnesses: Vec<String> = self.global.witnesses().iter().map(|p| p.to_string()).collect();
        json!({
            "mode": self.mode,
            "region": self.region.corners(),
            "points": points,
            "global": {"status": self.global.status(), "witnesses": witnesses},
            "diagnostics": {
                "precision": self.diagnostics.precision,
                "cells": self.diagnostics.cells,
                "candidates": self.points.len(),
                "requested_region": self.diagnostics.requested_region.corners(),
            },
        })
    }
}

pub fn check_sharing(
    f: &Expr,
    g: &Expr,
    alpha: &Expr,
    r: &Region,
    mode: SharingMode,
) -> Result<SharingReport, RegionError> {
    Ok(Analysis::new(f, g, alpha, r)?.report(mode))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MobiusOutcome {
    Consistent,
    Violation(String),
    Undecided(String),
}

#[derive(Clone, Debug)]
pub struct MobiusCheck {
    pub before: SharingReport,
    pub after: SharingReport,
    pub outcome: MobiusOutcome,
}

/// Analyses of `(f, g, alpha)` and of its image under `m`, on one common
/// effective region.
pub fn mobius_analyses(
    f: &Expr,
    g: &Expr,
    alpha: &Expr,
    m: &Mobius,
    r: &Region,
) -> Result<(Analysis, Analysis), VerdictError> {
    let (mf, mg, ma) = (m.apply(f)?, m.apply(g)?, m.apply(alpha)?);
    let mut before = Analysis::new(f, g, alpha, r)?;
    let mut after = Analysis::new(&mf, &mg, &ma, &before.region)?;
    if after.region != before.region {
        let region = after.region.clone();
        before = Analysis::new(f, g, alpha, &region)?;
        after = Analysis::new(&mf, &mg, &ma, &region)?;
    }
    Ok((before, after))
}

/// Compare the value-sense verdicts of `(f, g, alpha)` and of its image
/// under `m` on the same region.
pub fn verify_mobius_invariance(
    f: &Expr,
    g: &Expr,
    alpha: &Expr,
    m: &Mobius,
    r: &Region,
    weight: Weight,
) -> Result<MobiusCheck, VerdictError> {
    let (before, after) = mobius_analyses(f, g, alpha, m, r)?;
    let mode = SharingMode::new(Sense::Value, weight);
    let (before, after) = (before.report(mode), after.report(mode));
    let outcome = mobius_outcome(&before, &after);
    Ok(MobiusCheck { before, after, outcome })
}

/// Compare the value-sense reports of a triple and of its image.
pub fn mobius_outcome(before: &SharingReport, after: &SharingReport) -> MobiusOutcome {
    if before.region != after.region {
        return MobiusOutcome::Undecided(format!("regions differ: {} vs {}", before.region, after.region));
    }
    match (&before.global, &after.global) {
        (Global::Undecided(_), _) | (_, Global::Undecided(_)) => {
            MobiusOutcome::Undecided(format!("{} before, {} after", before.global, after.global))
        }
        (Global::Shares, Global::Shares) => MobiusOutcome::Consistent,
        (Global::Fails(a), Global::Fails(b)) if same_point_set(a, b) => MobiusOutcome::Consistent,
        (a, b) => MobiusOutcome::Violation(format!("{a} before, {b} after")),
    }
}

#[derive(Clone, Debug)]
pub enum TransferOutcome {
    TransferHolds,
    TransferFails(Vec<SymConst>),
    PreconditionFails,
    Undecided(String),
}

impl fmt::Display for TransferOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransferOutcome::TransferHolds => f.write_str("TransferHolds"),
            TransferOutcome::TransferFails(w) => {
                let list = w.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ");
                write!(f, "TransferFails@{{{list}}}")
            }
            TransferOutcome::PreconditionFails => f.write_str("PreconditionFails"),
            TransferOutcome::Undecided(r) => write!(f, "Undecided ({r})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TransferCheck {
    pub precondition: SharingReport,
    /// Sharing of the constant 1 by `f/alpha` and `g/alpha`.
    pub quotient: SharingReport,
    pub outcome: TransferOutcome,
}

/// `f/alpha` and `g/alpha` under the same sharing mode, with target 1.
pub fn quotient_triple(f: &Expr, g: &Expr, alpha: &Expr) -> (Expr, Expr, Expr) {
    (Expr::div(f.clone(), alpha.clone()), Expr::div(g.clone(), alpha.clone()), Expr::one())
}

/// Whether sharing `alpha` under `mode` carries over to `f/alpha` and
/// `g/alpha` sharing the value 1.
pub fn verify_quotient_transfer(
    f: &Expr,
    g: &Expr,
    alpha: &Expr,
    r: &Region,
    mode: SharingMode,
) -> Result<TransferCheck, RegionError> {
    if alpha.is_literal_zero() {
        return Err(RegionError::IdenticallyVanishing("alpha".into()));
    }
    let precondition = check_sharing(f, g, alpha, r, mode)?;
    let (qf, qg, one) = quotient_triple(f, g, alpha);
    let quotient = check_sharing(&qf, &qg, &one, r, mode)?;
    let outcome = transfer_outcome(&precondition.global, &quotient.global);
    Ok(TransferCheck { precondition, quotient, outcome })
}

/// Classify the implication from the verdict on `(f, g, alpha)` and the
/// verdict on the quotients sharing 1.
pub fn transfer_outcome(precondition: &Global, quotient: &Global) -> TransferOutcome {
    match (precondition, quotient) {
        (Global::Fails(_), _) => TransferOutcome::PreconditionFails,
        (Global::Undecided(_), _) => TransferOutcome::Undecided(format!("precondition {precondition}")),
        (Global::Shares, Global::Shares) => TransferOutcome::TransferHolds,
        (Global::Shares, Global::Fails(w)) => TransferOutcome::TransferFails(w.clone()),
        (Global::Shares, Global::Undecided(_)) => TransferOutcome::Undecided(format!("quotients {quotient}")),
    }
}
