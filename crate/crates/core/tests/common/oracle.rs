//! Exact sharing verdicts for rational triples by gcd and squarefree
//! decomposition over Q.

use meroshare::local::{Sense, SharingMode, Weight};

use super::poly::{QFrac, QPoly};

/// Zeros of a function grouped by multiplicity: `(m, P)` with `P`
/// squarefree, vanishing exactly at the zeros of order `m`.
type ZeroData = Vec<(u32, QPoly)>;

fn zero_data(h: &QFrac) -> ZeroData {
    h.num.squarefree()
}

/// Keep, from each part, the roots that are (or are not) roots of `d`.
fn restrict(data: ZeroData, d: &QPoly, inside: bool) -> ZeroData {
    data.into_iter()
        .filter_map(|(m, p)| {
            let common = p.gcd(d);
            let kept = if inside { common } else { p.divrem(&common).0 };
            (kept.degree() > 0).then_some((m, kept))
        })
        .collect()
}

fn sense_data(f: &QFrac, alpha: &QFrac, sense: Sense) -> ZeroData {
    let diff = zero_data(&f.sub(alpha));
    match sense {
        Sense::Vanishing => diff,
        Sense::Value => {
            let poles = alpha.den.squarefree().into_iter().fold(QPoly::one(), |acc, (_, p)| acc.mul(&p));
            if poles.degree() == 0 {
                return diff;
            }
            let recip = zero_data(&f.recip().sub(&alpha.recip()));
            let mut out = restrict(diff, &poles, false);
            out.extend(restrict(recip, &poles, true));
            out
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleVerdict {
    pub shares: bool,
    /// Number of distinct points where the local condition fails.
    pub failing_points: usize,
}

/// Multiplicities `a`, `b` (0 for no zero) are compatible under `w`: equal,
/// or both above a finite weight.
fn agree(a: u32, b: u32, w: Weight) -> bool {
    match w {
        Weight::Infinite => a == b,
        Weight::Finite(m) => a == b || (a > m && b > m),
    }
}

/// Common roots whose multiplicities disagree.
fn mismatched(a: &ZeroData, b: &ZeroData, mode: SharingMode) -> usize {
    let mut n = 0;
    for (i, p) in a {
        for (j, q) in b {
            if !agree(*i, *j, mode.weight) {
                n += p.gcd(q).degree();
            }
        }
    }
    n
}

/// Roots in `a` that are not roots in `b` at all.
fn unmatched(a: &ZeroData, b: &ZeroData, mode: SharingMode) -> usize {
    let mut n = 0;
    for (i, p) in a {
        let matched: usize = b.iter().map(|(_, q)| p.gcd(q).degree()).sum();
        if !agree(*i, 0, mode.weight) {
            n += p.degree() - matched;
        }
    }
    n
}

pub fn oracle_verdict(f: &QFrac, g: &QFrac, alpha: &QFrac, mode: SharingMode) -> OracleVerdict {
    let a = sense_data(f, alpha, mode.sense);
    let b = sense_data(g, alpha, mode.sense);
    let n = mismatched(&a, &b, mode) + unmatched(&a, &b, mode) + unmatched(&b, &a, mode);
    OracleVerdict { shares: n == 0, failing_points: n }
}

/// A square region centered at 0 containing every zero and pole relevant
/// to the triple, as `R` with region `[-R, R]^2`.
pub fn cauchy_radius(f: &QFrac, g: &QFrac, alpha: &QFrac) -> u32 {
    let parts = [
        f.clone(),
        g.clone(),
        alpha.clone(),
        f.sub(alpha),
        g.sub(alpha),
        f.recip().sub(&alpha.recip()),
        g.recip().sub(&alpha.recip()),
    ];
    let b = parts.iter().map(QFrac::cauchy_bound).fold(1.0, f64::max);
    b.ceil() as u32 + 1
}
