//! Randomized property runs shared by the integration and acceptance tests.

use meroshare::constants::{SymConst, ZeroTest};
use meroshare::expr::Expr;
use meroshare::laurent::{expand, local_order};
use meroshare::local::{Sense, SharingMode, Weight};
use meroshare::region::{locate_candidates, net_zero_pole_count, Region};
use meroshare::verdict::{same_point_set, Analysis, Global};
use rug::Rational;

use super::gen::{
    self, random_center, random_entire, random_order_case, random_order_case_at, random_triple, Rand, Triple,
};
use super::oracle::{cauchy_radius, oracle_verdict};
use super::p;

/// Outcome of a randomized run.
#[derive(Debug, Default)]
pub struct Tally {
    pub total: usize,
    pub decisive: usize,
    pub failures: Vec<String>,
}

impl Tally {
    pub fn decisive_rate(&self) -> f64 {
        if self.total == 0 {
            return 1.0;
        }
        self.decisive as f64 / self.total as f64
    }

    pub fn merge(&mut self, o: Tally) {
        self.total += o.total;
        self.decisive += o.decisive;
        self.failures.extend(o.failures);
    }

    pub fn summary(&self) -> String {
        format!("{} instances, {} decisive, {} failures", self.total, self.decisive, self.failures.len())
    }
}

fn point(s: &str) -> SymConst {
    SymConst::from_expr(&p(s)).unwrap_or_else(|e| panic!("`{s}`: {e}"))
}

fn not_nonzero(c: &SymConst) -> bool {
    c.zero_test() != ZeroTest::NonZero
}

pub const ALL_MODES: [SharingMode; 8] = [
    SharingMode { sense: Sense::Vanishing, weight: Weight::Finite(0) },
    SharingMode { sense: Sense::Vanishing, weight: Weight::Finite(1) },
    SharingMode { sense: Sense::Vanishing, weight: Weight::Finite(2) },
    SharingMode { sense: Sense::Vanishing, weight: Weight::Infinite },
    SharingMode { sense: Sense::Value, weight: Weight::Finite(0) },
    SharingMode { sense: Sense::Value, weight: Weight::Finite(1) },
    SharingMode { sense: Sense::Value, weight: Weight::Finite(2) },
    SharingMode { sense: Sense::Value, weight: Weight::Infinite },
];

/// Random rational triples against the exact oracle in every mode, on the
/// Cauchy-bound square. Undecided counts as a failure.
pub fn oracle_agreement(r: &mut Rand, n: usize) -> Tally {
    let mut t = Tally::default();
    for i in 0..n {
        t.merge(oracle_case(i, &random_triple(r)));
    }
    t
}

pub fn oracle_case(i: usize, tr: &Triple) -> Tally {
    let mut t = Tally::default();
    let (f, g, a) = tr.strings();
    let rad = cauchy_radius(&tr.f, &tr.g, &tr.alpha);
    let region = Region::square(Rational::from(rad)).expect("square region");
    let an = match Analysis::new(&p(&f), &p(&g), &p(&a), &region) {
        Ok(an) => an,
        Err(e) => {
            t.total += ALL_MODES.len();
            t.failures.push(format!("#{i} f={f} g={g} alpha={a}: {e}"));
            return t;
        }
    };
    for mode in ALL_MODES {
        t.total += 1;
        let want = oracle_verdict(&tr.f, &tr.g, &tr.alpha, mode);
        let got = an.report(mode).global;
        let ok = match &got {
            Global::Shares => want.shares,
            Global::Fails(w) => !want.shares && w.len() == want.failing_points,
            Global::Undecided(_) => false,
        };
        if !got.is_undecided() {
            t.decisive += 1;
        }
        if !ok {
            t.failures.push(format!("#{i} {mode} f={f} g={g} alpha={a}: got {got}, want {want:?}"));
        }
    }
    t
}

/// `ord(e1 e2) = ord(e1) + ord(e2)`, each matching its constructed order.
pub fn order_additivity(r: &mut Rand, n: usize) -> Tally {
    let mut t = Tally::default();
    for _ in 0..n {
        t.total += 1;
        let c = random_center(r);
        let (a, b) = (random_order_case_at(r, &c), random_order_case_at(r, &c));
        let z0 = point(&c);
        let prod = format!("({})*({})", a.expr, b.expr);
        let (oa, ob, oab) = (local_order(&p(&a.expr), &z0), local_order(&p(&b.expr), &z0), local_order(&p(&prod), &z0));
        if let (Some(x), Some(y), Some(s)) = (oa.signed(), ob.signed(), oab.signed()) {
            t.decisive += 1;
            if x != a.order || y != b.order || s != x + y {
                t.failures.push(format!("{prod} at {c}: {x} + {y} vs {s}, built {} + {}", a.order, b.order));
            }
        }
    }
    t
}

/// Series of the derivative equals the termwise derivative of the series.
pub fn derivative_consistency(r: &mut Rand, n: usize) -> Tally {
    const N: i64 = 6;
    let mut t = Tally::default();
    for _ in 0..n {
        t.total += 1;
        let case = random_order_case(r);
        let z0 = point(&case.center);
        let e = p(&case.expr);
        let (s, d) = match (expand(&e, &z0, N), expand(&e.differentiate(), &z0, N - 1)) {
            (Ok(s), Ok(d)) => (s, d),
            _ => continue,
        };
        t.decisive += 1;
        let ds = s.derivative();
        for k in ds.min_index().min(d.min_index())..N {
            let ok = match (ds.coefficient(k), d.coefficient(k)) {
                (Some(x), Some(y)) => not_nonzero(&x.sub(&y)),
                _ => false,
            };
            if !ok {
                t.failures.push(format!("d/dz {} at {}: coefficient {k} differs", case.expr, case.center));
                break;
            }
        }
    }
    t
}

/// `ord(1/e) = -ord(e)`.
pub fn inversion_consistency(r: &mut Rand, n: usize) -> Tally {
    let mut t = Tally::default();
    for _ in 0..n {
        t.total += 1;
        let case = random_order_case(r);
        let z0 = point(&case.center);
        let e = p(&case.expr);
        let inv = Expr::reciprocal_of(&e).expect("nonzero expression");
        let (o, oi) = (local_order(&e, &z0), local_order(&inv, &z0));
        if let (Some(x), Some(y)) = (o.signed(), oi.signed()) {
            t.decisive += 1;
            if x != case.order || y != -x || oi != o.negated() {
                t.failures.push(format!("1/({}) at {}: {o} vs {oi}", case.expr, case.center));
            }
        }
    }
    t
}

/// `exp(s) exp(-s) = 1 + O((z - z0)^N)` for entire `s`.
pub fn exp_inverse(r: &mut Rand, n: usize) -> Tally {
    const N: i64 = 8;
    let mut t = Tally::default();
    for _ in 0..n {
        t.total += 1;
        let c = random_center(r);
        let s = random_entire(r);
        let z0 = point(&c);
        let (a, b) = match (expand(&p(&format!("exp({s})")), &z0, N), expand(&p(&format!("exp(-({s}))")), &z0, N)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => continue,
        };
        let prod = a.mul(&b);
        let mut decided = true;
        let mut ok = true;
        for k in prod.min_index().min(0)..=N {
            let want = if k == 0 { SymConst::one() } else { SymConst::zero() };
            match prod.coefficient(k).map(|x| x.sub(&want).zero_test()) {
                Some(ZeroTest::Zero) => {}
                Some(ZeroTest::Unknown) => decided = false,
                _ => ok = false,
            }
        }
        if decided {
            t.decisive += 1;
        }
        if !ok {
            t.failures.push(format!("exp({s}) exp(-({s})) at {c}"));
        }
    }
    t
}

/// Net zero count of a product of linear factors with Gaussian-integer
/// roots, on `[-3, 3]^2`.
pub fn gaussian_counts(r: &mut Rand, n: usize) -> Tally {
    let mut t = Tally::default();
    let region = Region::square(Rational::from(3)).expect("square region");
    for _ in 0..n {
        t.total += 1;
        let roots = gen::gaussian_roots(r);
        let e = gen::gaussian_product(&roots);
        match net_zero_pole_count(&p(&e), &region) {
            Ok(k) => {
                t.decisive += 1;
                if k != roots.len() as i64 {
                    t.failures.push(format!("{e}: counted {k}, want {}", roots.len()));
                }
            }
            Err(err) => t.failures.push(format!("{e}: {err}")),
        }
    }
    t
}

/// Candidates of `f - alpha` with planted rational roots are exactly those
/// roots, and swapping `f` and `g` changes nothing.
pub fn rational_root_completeness(r: &mut Rand, n: usize) -> Tally {
    use rand::Rng;
    let mut t = Tally::default();
    let region = Region::square(Rational::from(3)).expect("square region");
    for _ in 0..n {
        t.total += 1;
        let k = r.gen_range(1..=4);
        let mut roots: Vec<Rational> = Vec::new();
        while roots.len() < k {
            let x = gen::small_rational(r, 8, 3);
            if x.clone().abs() < 3 && !roots.contains(&x) {
                roots.push(x);
            }
        }
        let f = roots.iter().map(|x| format!("(z - ({x}))^{}", r.gen_range(1..=3))).collect::<Vec<_>>().join("*");
        let f = format!("{f} + 1");
        let (fe, g, ae) = (p(&f), p("1 + exp(z)"), p("1"));
        let got = locate_candidates(&fe, &g, &ae, &region);
        let swapped = locate_candidates(&g, &fe, &ae, &region);
        match (got, swapped) {
            (Ok(c), Ok(s)) => {
                t.decisive += 1;
                let want: Vec<SymConst> = roots.iter().map(|x| SymConst::rational(x.clone())).collect();
                let have: Vec<SymConst> = c.points.iter().map(|c| c.point.clone()).collect();
                let other: Vec<SymConst> = s.points.iter().map(|c| c.point.clone()).collect();
                let exact = c.points.iter().all(|c| c.snapped);
                if !exact || !same_point_set(&have, &want) || !same_point_set(&have, &other) {
                    t.failures.push(format!("{f}: got {have:?}"));
                }
            }
            (a, b) => t.failures.push(format!("{f}: {:?} / {:?}", a.err(), b.err())),
        }
    }
    t
}
