//! Truncated Laurent series at a point and the zero/pole order they imply.

use std::fmt;
use std::sync::Arc;

use rug::Rational;
use thiserror::Error;

use crate::constants::{ConstError, SymConst, ZeroTest};
use crate::expr::Expr;

/// Precision marker of a series that is an exact finite sum.
const EXACT: i64 = i64::MAX;

/// Truncation depths tried by [`local_order`].
pub const DEPTH_SCHEDULE: [u32; 5] = [8, 16, 32, 64, 128];

/// Threshold below which a coefficient at an approximate point counts as zero.
pub const NUMERIC_ZERO_TOL: f64 = 1e-20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("leading coefficient of a divisor could not be decided (index {index})")]
    DivisorValuationUnresolved { index: i64 },
    #[error("divisor vanishes to the working depth")]
    DivisorVanishes,
    #[error("division by a function that is identically zero")]
    DivisionByZero,
    #[error("no decisive coefficient up to depth {depth}")]
    TruncationExhausted { depth: u32 },
    #[error("argument of a transcendental function has a pole")]
    SingularArgument,
    #[error(transparent)]
    Constant(#[from] ConstError),
}

/// How coefficients are tested for zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ZeroPolicy {
    /// The three-valued certified test.
    Exact,
    /// For approximate centers: magnitudes up to `tol` count as zero.
    Numeric { tol: f64 },
}

impl ZeroPolicy {
    pub fn for_center(center: &SymConst) -> ZeroPolicy {
        if center.is_exact() {
            ZeroPolicy::Exact
        } else {
            ZeroPolicy::Numeric { tol: NUMERIC_ZERO_TOL }
        }
    }

    pub fn test(&self, c: &SymConst) -> ZeroTest {
        match self {
            ZeroPolicy::Numeric { tol } if !c.is_exact() => {
                let b = c.enclose(64);
                if b.abs_upper().to_f64() <= *tol {
                    ZeroTest::Zero
                } else if b.abs_lower().to_f64() > *tol {
                    ZeroTest::NonZero
                } else {
                    ZeroTest::Unknown
                }
            }
            _ => c.zero_test(),
        }
    }
}

/// `sum c_n (z - center)^n` for `n` from the valuation up to, excluding,
/// the precision.  A series whose precision is infinite is a finite sum.
#[derive(Clone, Debug)]
pub struct LaurentSeries {
    center: Arc<SymConst>,
    val: i64,
    coeffs: Vec<SymConst>,
    prec: i64,
}

impl LaurentSeries {
    fn build(center: &Arc<SymConst>, val: i64, coeffs: Vec<SymConst>, prec: i64) -> LaurentSeries {
        let mut s = LaurentSeries { center: center.clone(), val, coeffs, prec };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.is_literal_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.val += lead as i64;
        }
        if self.prec == EXACT {
            while self.coeffs.last().is_some_and(|c| c.is_literal_zero()) {
                self.coeffs.pop();
            }
            if self.coeffs.is_empty() {
                self.val = EXACT;
            }
        } else {
            if self.val >= self.prec {
                self.val = self.prec;
                self.coeffs.clear();
            }
            let len = (self.prec - self.val) as usize;
            self.coeffs.truncate(len);
            while self.coeffs.len() < len {
                self.coeffs.push(SymConst::zero());
            }
        }
    }

    pub fn constant(center: Arc<SymConst>, c: SymConst) -> LaurentSeries {
        LaurentSeries::build(&center, 0, vec![c], EXACT)
    }

    /// The series of `z` itself.
    pub fn variable(center: Arc<SymConst>) -> LaurentSeries {
        let c = center.as_ref().clone();
        LaurentSeries::build(&center, 0, vec![c, SymConst::one()], EXACT)
    }

    fn zero_like(&self) -> LaurentSeries {
        LaurentSeries::build(&self.center, 0, Vec::new(), EXACT)
    }

    pub fn center(&self) -> &SymConst {
        &self.center
    }

    pub fn is_exact_zero(&self) -> bool {
        self.prec == EXACT && self.coeffs.is_empty()
    }

    /// Index of the first stored coefficient.
    pub fn min_index(&self) -> i64 {
        self.val
    }

    pub fn coefficients(&self) -> &[SymConst] {
        &self.coeffs
    }

    /// Highest index whose coefficient is known, `None` for a finite sum.
    pub fn truncation_order(&self) -> Option<i64> {
        (self.prec != EXACT).then(|| self.prec - 1)
    }

    /// Coefficient of `(z - center)^n`; `None` beyond the truncation.
    pub fn coefficient(&self, n: i64) -> Option<SymConst> {
        if n >= self.prec {
            return None;
        }
        if self.is_exact_zero() || n < self.val {
            return Some(SymConst::zero());
        }
        Some(self.coeffs.get((n - self.val) as usize).cloned().unwrap_or_else(SymConst::zero))
    }

    fn at(&self, n: i64) -> SymConst {
        self.coefficient(n).unwrap_or_else(SymConst::zero)
    }

    /// One past the last index worth iterating over.
    fn end(&self) -> i64 {
        if self.prec == EXACT {
            if self.is_exact_zero() {
                return self.val;
            }
            self.val + self.coeffs.len() as i64
        } else {
            self.prec
        }
    }

    pub fn neg(&self) -> LaurentSeries {
        LaurentSeries {
            center: self.center.clone(),
            val: self.val,
            coeffs: self.coeffs.iter().map(SymConst::neg).collect(),
            prec: self.prec,
        }
    }

    pub fn add(&self, o: &LaurentSeries) -> LaurentSeries {
        if self.is_exact_zero() {
            return o.clone();
        }
        if o.is_exact_zero() {
            return self.clone();
        }
        let val = self.val.min(o.val);
        let prec = self.prec.min(o.prec);
        let end = if prec == EXACT { self.end().max(o.end()) } else { prec };
        let coeffs = (val..end).map(|n| self.at(n).add(&o.at(n))).collect();
        LaurentSeries::build(&self.center, val, coeffs, prec)
    }

    pub fn sub(&self, o: &LaurentSeries) -> LaurentSeries {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &LaurentSeries) -> LaurentSeries {
        if self.is_exact_zero() || o.is_exact_zero() {
            return self.zero_like();
        }
        let val = self.val + o.val;
        let prec = shift(self.prec, o.val).min(shift(o.prec, self.val));
        let end = if prec == EXACT { self.end() + o.end() - 1 } else { prec };
        let mut coeffs = Vec::with_capacity((end - val).max(0) as usize);
        for n in val..end {
            let mut acc = SymConst::zero();
            for (i, a) in self.coeffs.iter().enumerate() {
                let j = n - val - i as i64;
                if j < 0 {
                    break;
                }
                if let Some(b) = o.coeffs.get(j as usize) {
                    if !a.is_literal_zero() && !b.is_literal_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
            }
            coeffs.push(acc);
        }
        LaurentSeries::build(&self.center, val, coeffs, prec)
    }

    pub fn scale(&self, k: &SymConst) -> LaurentSeries {
        let coeffs = self.coeffs.iter().map(|c| c.mul(k)).collect();
        LaurentSeries::build(&self.center, self.val, coeffs, self.prec)
    }

    /// `self / o`, keeping at most `terms` coefficients of an otherwise
    /// infinite quotient.
    pub fn div(&self, o: &LaurentSeries, policy: ZeroPolicy, terms: u32) -> Result<LaurentSeries, LaurentError> {
        if o.is_exact_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        let mut b = o.clone();
        loop {
            let Some(b0) = b.coeffs.first() else {
                return Err(LaurentError::DivisorVanishes);
            };
            match policy.test(b0) {
                ZeroTest::NonZero => break,
                ZeroTest::Unknown => return Err(LaurentError::DivisorValuationUnresolved { index: b.val }),
                ZeroTest::Zero => {
                    b.coeffs.remove(0);
                    b.val += 1;
                }
            }
        }
        if self.is_exact_zero() {
            return Ok(self.zero_like());
        }
        let val = self.val - b.val;
        let prec = shift(self.prec, -b.val).min(shift(b.prec, self.val - 2 * b.val)).min(val + terms as i64);
        let inv = b.coeffs[0].recip()?;
        let len = (prec - val).max(0) as usize;
        let mut q: Vec<SymConst> = Vec::with_capacity(len);
        for k in 0..len {
            let mut acc = self.at(self.val + k as i64);
            for j in 1..=k {
                let bj = b.at(b.val + j as i64);
                if !bj.is_literal_zero() && !q[k - j].is_literal_zero() {
                    acc = acc.sub(&bj.mul(&q[k - j]));
                }
            }
            q.push(acc.mul(&inv));
        }
        Ok(LaurentSeries::build(&self.center, val, q, prec))
    }

    pub fn powi(&self, n: i64, policy: ZeroPolicy, terms: u32) -> Result<LaurentSeries, LaurentError> {
        let mut acc = LaurentSeries::constant(self.center.clone(), SymConst::one());
        let mut base = self.clone();
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        if n < 0 {
            let one = LaurentSeries::constant(self.center.clone(), SymConst::one());
            return one.div(&acc, policy, terms);
        }
        Ok(acc)
    }

    /// Split into the constant term and `k * h_k` for `k >= 1`, for
    /// composition with an entire function.
    fn composition_parts(&self, terms: u32) -> Result<(SymConst, Vec<SymConst>, i64), LaurentError> {
        if self.is_exact_zero() {
            return Ok((SymConst::zero(), Vec::new(), EXACT));
        }
        if self.val < 0 {
            return Err(LaurentError::SingularArgument);
        }
        let c0 = self.at(0);
        let has_tail = self.end() > 1;
        let prec = if self.prec == EXACT && !has_tail { EXACT } else { self.prec.min(terms as i64) };
        let upto = if prec == EXACT { 1 } else { prec };
        let kh = (1..upto).map(|k| self.at(k).mul(&SymConst::int(k))).collect();
        Ok((c0, kh, prec))
    }

    pub fn exp(&self, terms: u32) -> Result<LaurentSeries, LaurentError> {
        let (c0, kh, prec) = self.composition_parts(terms)?;
        let ec0 = c0.exp();
        if prec == EXACT {
            return Ok(LaurentSeries::constant(self.center.clone(), ec0));
        }
        let mut e = vec![SymConst::one()];
        for n in 1..prec as usize {
            let mut acc = SymConst::zero();
            for k in 1..=n {
                let h = &kh[k - 1];
                if !h.is_literal_zero() && !e[n - k].is_literal_zero() {
                    acc = acc.add(&h.mul(&e[n - k]));
                }
            }
            e.push(acc.mul(&inv_int(n)));
        }
        let coeffs = e.iter().map(|c| c.mul(&ec0)).collect();
        Ok(LaurentSeries::build(&self.center, 0, coeffs, prec))
    }

    /// `(sin, cos)` of the series.
    pub fn sin_cos(&self, terms: u32) -> Result<(LaurentSeries, LaurentSeries), LaurentError> {
        let (c0, kh, prec) = self.composition_parts(terms)?;
        let (s0, co) = (c0.sin(), c0.cos());
        if prec == EXACT {
            let k = |c| LaurentSeries::constant(self.center.clone(), c);
            return Ok((k(s0), k(co)));
        }
        let mut s = vec![SymConst::zero()];
        let mut c = vec![SymConst::one()];
        for n in 1..prec as usize {
            let mut sa = SymConst::zero();
            let mut ca = SymConst::zero();
            for k in 1..=n {
                let h = &kh[k - 1];
                if h.is_literal_zero() {
                    continue;
                }
                if !c[n - k].is_literal_zero() {
                    sa = sa.add(&h.mul(&c[n - k]));
                }
                if !s[n - k].is_literal_zero() {
                    ca = ca.sub(&h.mul(&s[n - k]));
                }
            }
            let inv = inv_int(n);
            s.push(sa.mul(&inv));
            c.push(ca.mul(&inv));
        }
        let combine = |a: &SymConst, x: &[SymConst], b: &SymConst, y: &[SymConst]| -> Vec<SymConst> {
            x.iter().zip(y).map(|(u, v)| u.mul(a).add(&v.mul(b))).collect()
        };
        // sin(c0 + h) = sin c0 cos h + cos c0 sin h
        let sin = combine(&s0, &c, &co, &s);
        // cos(c0 + h) = cos c0 cos h - sin c0 sin h
        let cos = combine(&co, &c, &s0.neg(), &s);
        Ok((LaurentSeries::build(&self.center, 0, sin, prec), LaurentSeries::build(&self.center, 0, cos, prec)))
    }

    /// Termwise derivative.
    pub fn derivative(&self) -> LaurentSeries {
        if self.is_exact_zero() {
            return self.clone();
        }
        let coeffs = self.coeffs.iter().enumerate().map(|(i, c)| c.mul(&SymConst::int(self.val + i as i64))).collect();
        LaurentSeries::build(&self.center, self.val - 1, coeffs, shift(self.prec, -1))
    }
}

fn shift(p: i64, d: i64) -> i64 {
    if p == EXACT {
        EXACT
    } else {
        p + d
    }
}

fn inv_int(n: usize) -> SymConst {
    SymConst::rational(Rational::from((1, n as u64)))
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_literal_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*t^{}", self.val + i as i64)?;
        }
        if first {
            write!(f, "0")?;
        }
        if self.prec != EXACT {
            write!(f, " + O(t^{})", self.prec)?;
        }
        Ok(())
    }
}

/// Series of `e` at `center`, with infinite expansions cut after `terms`
/// coefficients.
pub fn series(e: &Expr, center: &Arc<SymConst>, policy: ZeroPolicy, terms: u32) -> Result<LaurentSeries, LaurentError> {
    let rec = |a: &Expr| series(a, center, policy, terms);
    Ok(match e {
        Expr::Var => LaurentSeries::variable(center.clone()),
        Expr::Rational(r) => LaurentSeries::constant(center.clone(), SymConst::rational(r.clone())),
        Expr::Pi => LaurentSeries::constant(center.clone(), SymConst::pi()),
        Expr::I => LaurentSeries::constant(center.clone(), SymConst::i()),
        Expr::Neg(a) => rec(a)?.neg(),
        Expr::Add(a, b) => rec(a)?.add(&rec(b)?),
        Expr::Mul(a, b) => rec(a)?.mul(&rec(b)?),
        Expr::Div(a, b) => rec(a)?.div(&rec(b)?, policy, terms)?,
        Expr::Pow(a, n) => rec(a)?.powi(*n, policy, terms)?,
        Expr::Exp(a) => rec(a)?.exp(terms)?,
        Expr::Sin(a) => rec(a)?.sin_cos(terms)?.0,
        Expr::Cos(a) => rec(a)?.sin_cos(terms)?.1,
    })
}

/// Laurent expansion of `e` at `center` with every coefficient up to
/// index `order` known.
pub fn expand(e: &Expr, center: &SymConst, order: i64) -> Result<LaurentSeries, LaurentError> {
    let center = Arc::new(center.clone());
    let policy = ZeroPolicy::for_center(&center);
    let mut terms = (order.max(1) as u32).saturating_add(8);
    loop {
        match series(e, &center, policy, terms) {
            Ok(s) if s.prec > order => return Ok(s),
            Ok(_) | Err(LaurentError::DivisorVanishes) => {}
            Err(err) => return Err(err),
        }
        if terms >= 4 * DEPTH_SCHEDULE[DEPTH_SCHEDULE.len() - 1] + order.max(0) as u32 {
            return Err(LaurentError::TruncationExhausted { depth: terms });
        }
        terms *= 2;
    }
}

/// Classification of a function at a point.
#[derive(Clone, Debug)]
pub enum LocalOrder {
    Zero(u32),
    /// Holomorphic and nonzero, with the value there.
    Regular(SymConst),
    Pole(u32),
    /// All coefficients vanish up to the given depth.
    VanishesToDepth(u32),
    Undecided(String),
}

impl LocalOrder {
    fn from_index(k: i64, c: SymConst) -> LocalOrder {
        match k {
            k if k > 0 => LocalOrder::Zero(k as u32),
            k if k < 0 => LocalOrder::Pole((-k) as u32),
            _ => LocalOrder::Regular(c),
        }
    }

    /// Zero order as a positive, pole order as a negative integer.
    pub fn signed(&self) -> Option<i64> {
        match self {
            LocalOrder::Zero(m) => Some(*m as i64),
            LocalOrder::Pole(m) => Some(-(*m as i64)),
            LocalOrder::Regular(_) => Some(0),
            _ => None,
        }
    }

    pub fn is_decisive(&self) -> bool {
        self.signed().is_some()
    }

    pub fn zero_order(&self) -> Option<u32> {
        match self {
            LocalOrder::Zero(m) => Some(*m),
            _ => None,
        }
    }

    pub fn is_pole(&self) -> bool {
        matches!(self, LocalOrder::Pole(_))
    }

    pub fn negated(&self) -> LocalOrder {
        match self {
            LocalOrder::Zero(m) => LocalOrder::Pole(*m),
            LocalOrder::Pole(m) => LocalOrder::Zero(*m),
            LocalOrder::Regular(v) => match v.recip() {
                Ok(r) => LocalOrder::Regular(r),
                Err(e) => LocalOrder::Undecided(e.to_string()),
            },
            other => other.clone(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            LocalOrder::Zero(_) => "zero",
            LocalOrder::Regular(_) => "regular",
            LocalOrder::Pole(_) => "pole",
            LocalOrder::VanishesToDepth(_) => "vanishes_to_depth",
            LocalOrder::Undecided(_) => "undecided",
        }
    }
}

impl PartialEq for LocalOrder {
    fn eq(&self, o: &LocalOrder) -> bool {
        match (self, o) {
            (LocalOrder::Zero(a), LocalOrder::Zero(b)) => a == b,
            (LocalOrder::Pole(a), LocalOrder::Pole(b)) => a == b,
            (LocalOrder::Regular(a), LocalOrder::Regular(b)) => a.same_point(b, NUMERIC_ZERO_TOL),
            (LocalOrder::VanishesToDepth(a), LocalOrder::VanishesToDepth(b)) => a == b,
            (LocalOrder::Undecided(a), LocalOrder::Undecided(b)) => a == b,
            _ => false,
        }
    }
}

impl fmt::Display for LocalOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalOrder::Zero(m) => write!(f, "zero of order {m}"),
            LocalOrder::Regular(v) => write!(f, "regular, value {v}"),
            LocalOrder::Pole(m) => write!(f, "pole of order {m}"),
            LocalOrder::VanishesToDepth(n) => write!(f, "vanishes to depth {n}"),
            LocalOrder::Undecided(r) => write!(f, "undecided: {r}"),
        }
    }
}

pub fn local_order(e: &Expr, center: &SymConst) -> LocalOrder {
    local_order_with(e, center, ZeroPolicy::for_center(center))
}

pub fn local_order_with(e: &Expr, center: &SymConst, policy: ZeroPolicy) -> LocalOrder {
    let center = Arc::new(center.clone());
    // a one-term probe settles regular points without expanding further
    for depth in std::iter::once(1).chain(DEPTH_SCHEDULE) {
        let s = match series(e, &center, policy, depth) {
            Ok(s) => s,
            Err(LaurentError::DivisorVanishes) => continue,
            Err(err) => return LocalOrder::Undecided(err.to_string()),
        };
        if s.is_exact_zero() {
            return LocalOrder::VanishesToDepth(DEPTH_SCHEDULE[DEPTH_SCHEDULE.len() - 1]);
        }
        for (i, c) in s.coeffs.iter().enumerate() {
            let k = s.val + i as i64;
            match policy.test(c) {
                ZeroTest::Zero => {}
                ZeroTest::NonZero => return LocalOrder::from_index(k, c.clone()),
                ZeroTest::Unknown => {
                    return LocalOrder::Undecided(format!("coefficient of index {k} could not be decided"))
                }
            }
        }
    }
    LocalOrder::VanishesToDepth(DEPTH_SCHEDULE[DEPTH_SCHEDULE.len() - 1])
}
