//! Candidate points in a rectangle: every place where f - alpha or
//! g - alpha vanishes, where alpha has a zero or a pole, and where f or g
//! has a pole.

mod contour;
mod isolate;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rug::Rational;
use serde::Serialize;
use thiserror::Error;

use crate::constants::{SymConst, ZeroTest};
use crate::expr::Expr;
use crate::laurent::{local_order, LocalOrder};

pub use isolate::{best_rational, REFINE_PREC, SNAP_MAX_DEN, SNAP_MAX_PI_DEN, SNAP_TOL};

/// Lowest refinement precision that can reach the required residual.
pub const MIN_PREC: u32 = 128;
/// Most cells a single zero search may examine.
pub const SUBDIVISION_BUDGET: usize = 10_000;
/// Relative inward shifts tried when the region boundary passes through a zero.
const SHRINK_STEPS: [(u32, u32); 4] = [(1, 1000), (3, 1000), (7, 1000), (13, 1000)];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegionError {
    #[error("invalid region: {0}")]
    Invalid(String),
    #[error("zero or pole too close to a contour near {at}")]
    BoundaryEvent { at: String },
    #[error("winding number did not round to an integer (raw {raw})")]
    ResidualTooLarge { raw: String },
    #[error("{0} vanishes identically")]
    IdenticallyVanishing(String),
    #[error("subdivision budget of {0} cells exceeded")]
    SubdivisionBudgetExceeded(usize),
    #[error("could not decide whether {0} is zero")]
    ConstantUndecided(String),
}

/// Closed rectangle with rational corners.  Points on the boundary count as
/// outside.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub re_min: Rational,
    pub re_max: Rational,
    pub im_min: Rational,
    pub im_max: Rational,
}

impl Region {
    pub fn new(re_min: Rational, re_max: Rational, im_min: Rational, im_max: Rational) -> Result<Region, RegionError> {
        if re_min >= re_max || im_min >= im_max {
            return Err(RegionError::Invalid(format!("empty interior: {re_min},{re_max},{im_min},{im_max}")));
        }
        Ok(Region { re_min, re_max, im_min, im_max })
    }

    /// `[-r, r] x [-r, r]`.
    pub fn square(r: Rational) -> Result<Region, RegionError> {
        Region::new(Rational::from(-&r), r.clone(), Rational::from(-&r), r)
    }

    pub fn lo(&self) -> Complex64 {
        Complex64::new(self.re_min.to_f64(), self.im_min.to_f64())
    }

    pub fn hi(&self) -> Complex64 {
        Complex64::new(self.re_max.to_f64(), self.im_max.to_f64())
    }

    /// Strict interior membership of a double-precision point.
    pub fn contains(&self, z: Complex64) -> bool {
        let (lo, hi) = (self.lo(), self.hi());
        z.re > lo.re && z.re < hi.re && z.im > lo.im && z.im < hi.im
    }

    /// The region moved inward by `num/den` of its smaller side on every edge.
    pub fn shrunk(&self, num: u32, den: u32) -> Region {
        let w = Rational::from(&self.re_max - &self.re_min);
        let h = Rational::from(&self.im_max - &self.im_min);
        let d = w.min(h) * Rational::from((num, den));
        Region {
            re_min: Rational::from(&self.re_min + &d),
            re_max: Rational::from(&self.re_max - &d),
            im_min: Rational::from(&self.im_min + &d),
            im_max: Rational::from(&self.im_max - &d),
        }
    }

    pub fn corners(&self) -> [String; 4] {
        [&self.re_min, &self.re_max, &self.im_min, &self.im_max].map(|r| r.to_string())
    }
}

fn parse_rational(s: &str) -> Result<Rational, RegionError> {
    let s = s.trim();
    let bad = || RegionError::Invalid(format!("`{s}` is not a rational number"));
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: Rational = format!("{int}{frac}").parse().map_err(|_| bad())?;
        let scale = rug::Integer::from(rug::Integer::u_pow_u(10, frac.len() as u32));
        return Ok(digits / Rational::from(scale));
    }
    let r: Rational = s.parse().map_err(|_| bad())?;
    Ok(r)
}

impl FromStr for Region {
    type Err = RegionError;

    /// `re_min,re_max,im_min,im_max`, entries like `-7`, `1/2` or `0.25`.
    fn from_str(s: &str) -> Result<Region, RegionError> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 4 {
            return Err(RegionError::Invalid(format!("expected four comma-separated numbers, got `{s}`")));
        }
        let v = parts.iter().map(|p| parse_rational(p)).collect::<Result<Vec<_>, _>>()?;
        let [a, b, c, d]: [Rational; 4] = v.try_into().expect("four entries");
        Region::new(a, b, c, d)
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.re_min, self.re_max, self.im_min, self.im_max)
    }
}

/// Zeros minus poles of `e` inside `r`, with multiplicity.
pub fn net_zero_pole_count(e: &Expr, r: &Region) -> Result<i64, RegionError> {
    isolate::rect_count(e, r.lo(), r.hi()).map_err(isolate::contour_error)
}

/// Absolute winding number of `e` around the circle of the given radius,
/// i.e. the order of the single zero or pole it encloses.
pub fn multiplicity_by_winding(e: &Expr, center: &SymConst, radius: &Rational) -> Result<u32, RegionError> {
    let path = contour::CirclePath { center: center.to_complex(), radius: radius.to_f64() };
    let n = contour::winding(e, &path).map_err(isolate::contour_error)?;
    Ok(n.unsigned_abs() as u32)
}

/// Why a point is a candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    FMinusAlpha,
    GMinusAlpha,
    AlphaZero,
    AlphaPole,
    FPole,
    GPole,
}

#[derive(Clone, Debug)]
pub struct Candidate {
    pub point: SymConst,
    /// Whether `point` is an exact snapped value.
    pub snapped: bool,
    /// Each source with the multiplicity of the zero found for it.  The
    /// multiplicity is that of the cleared numerator or denominator, which
    /// may exceed the order of the original function.
    pub sources: Vec<(Source, u32)>,
    /// Every source multiplicity was reproduced by a Laurent expansion of
    /// the cleared part at `point`.
    pub confirmed: bool,
}

#[derive(Clone, Debug)]
pub struct CandidateSet {
    pub points: Vec<Candidate>,
    /// The region actually searched; smaller than the requested one when
    /// its boundary passed through a zero.
    pub region: Region,
    pub cells: usize,
}

impl CandidateSet {
    pub fn contains(&self, p: &SymConst) -> bool {
        self.points.iter().any(|c| c.point.same_point(p, SNAP_TOL))
    }
}

/// Interior sample points used to rule out identically vanishing functions.
fn probes(r: &Region) -> [Complex64; 3] {
    let (lo, hi) = (r.lo(), r.hi());
    let at = |s: f64, t: f64| Complex64::new(lo.re + s * (hi.re - lo.re), lo.im + t * (hi.im - lo.im));
    [at(0.3137, 0.5772), at(0.6917, 0.2718), at(0.4142, 0.8660)]
}

fn rational_probe(r: &Region) -> SymConst {
    let t = Rational::from((3137, 10_000));
    let u = Rational::from((5772, 10_000));
    let re = &r.re_min + Rational::from(&r.re_max - &r.re_min) * &t;
    let im = &r.im_min + Rational::from(&r.im_max - &r.im_min) * &u;
    SymConst::gaussian(re, im)
}

fn ensure_not_identically_zero(name: &str, e: &Expr, r: &Region) -> Result<(), RegionError> {
    if probes(r).iter().any(|&z| contour::certainly_nonzero_at(e, z)) {
        return Ok(());
    }
    match local_order(e, &rational_probe(r)) {
        LocalOrder::VanishesToDepth(_) => Err(RegionError::IdenticallyVanishing(name.to_string())),
        _ => Ok(()),
    }
}

/// An entire expression whose zeros are wanted.
struct Target {
    source: Source,
    entire: Expr,
}

/// `None` when `e` is a nonzero constant and has no zeros at all.
fn nonconstant(e: Expr) -> Result<Option<Expr>, RegionError> {
    if !e.is_constant() {
        return Ok(Some(e));
    }
    match SymConst::from_expr(&e).map(|c| c.zero_test()) {
        Ok(ZeroTest::NonZero) => Ok(None),
        Ok(ZeroTest::Zero) => Err(RegionError::IdenticallyVanishing(e.to_string())),
        _ => Err(RegionError::ConstantUndecided(e.to_string())),
    }
}

fn targets(f: &Expr, g: &Expr, alpha: &Expr) -> Result<Vec<Target>, RegionError> {
    let fa = Expr::sub(f.clone(), alpha.clone()).numer_denom();
    let ga = Expr::sub(g.clone(), alpha.clone()).numer_denom();
    let a = alpha.numer_denom();
    let parts = [
        (Source::FMinusAlpha, fa.numer),
        (Source::GMinusAlpha, ga.numer),
        (Source::AlphaZero, a.numer),
        (Source::AlphaPole, a.denom),
        (Source::FPole, f.numer_denom().denom),
        (Source::GPole, g.numer_denom().denom),
    ];
    let mut out = Vec::new();
    for (source, e) in parts {
        if let Some(entire) = nonconstant(e)? {
            out.push(Target { source, entire });
        }
    }
    Ok(out)
}

/// Counts for every target on `r`, or the boundary problem met.
fn count_all(targets: &[Target], r: &Region) -> Result<Vec<i64>, RegionError> {
    targets.iter().map(|t| net_zero_pole_count(&t.entire, r)).collect()
}

fn merge(into: &mut Vec<Candidate>, source: Source, root: isolate::Root) {
    if let Some(c) = into.iter_mut().find(|c| c.point.same_point(&root.point, SNAP_TOL)) {
        c.sources.push((source, root.multiplicity));
        c.confirmed &= root.confirmed;
        if root.snapped && !c.snapped {
            c.point = root.point;
            c.snapped = true;
        }
        return;
    }
    into.push(Candidate {
        point: root.point,
        snapped: root.snapped,
        sources: vec![(source, root.multiplicity)],
        confirmed: root.confirmed,
    });
}

/// Every point of `r` where a sharing-relevant event can occur.
pub fn locate_candidates(f: &Expr, g: &Expr, alpha: &Expr, r: &Region) -> Result<CandidateSet, RegionError> {
    locate_candidates_with(f, g, alpha, r, REFINE_PREC)
}

/// [`locate_candidates`] with Newton refinement at `prec` bits (at least
/// [`MIN_PREC`]).
pub fn locate_candidates_with(
    f: &Expr,
    g: &Expr,
    alpha: &Expr,
    r: &Region,
    prec: u32,
) -> Result<CandidateSet, RegionError> {
    if prec < MIN_PREC {
        return Err(RegionError::Invalid(format!("precision {prec} is below {MIN_PREC} bits")));
    }
    ensure_not_identically_zero("alpha", alpha, r)?;
    ensure_not_identically_zero("f - alpha", &Expr::sub(f.clone(), alpha.clone()), r)?;
    ensure_not_identically_zero("g - alpha", &Expr::sub(g.clone(), alpha.clone()), r)?;
    let targets = targets(f, g, alpha)?;

    let mut region = r.clone();
    let mut counts = count_all(&targets, &region);
    for (num, den) in SHRINK_STEPS {
        match &counts {
            Err(RegionError::BoundaryEvent { .. }) => {
                region = r.shrunk(num, den);
                counts = count_all(&targets, &region);
            }
            _ => break,
        }
    }
    let counts = counts?;

    let mut points = Vec::new();
    let mut cells = 0;
    for (t, &n) in targets.iter().zip(&counts) {
        let mut budget = isolate::Budget { cells: 0, cap: SUBDIVISION_BUDGET, prec };
        let roots = isolate::find_zeros(&t.entire, region.lo(), region.hi(), n, &mut budget)?;
        cells += budget.cells;
        for root in roots {
            merge(&mut points, t.source, root);
        }
    }
    for c in &mut points {
        c.sources.sort();
    }
    points.sort_by(|a, b| {
        let (p, q) = (a.point.to_complex(), b.point.to_complex());
        p.re.total_cmp(&q.re).then(p.im.total_cmp(&q.im))
    });
    Ok(CandidateSet { points, region, cells })
}
