//! Zeros of an entire expression in a rectangle: subdivision by winding
//! numbers, high precision Newton refinement and snapping to exact points.

use std::sync::Arc;

use num_complex::Complex64;
use rug::{Float, Integer, Rational};

use super::contour::{log_derivative, winding, ContourError, RectPath};
use super::RegionError;
use crate::constants::{Ball, SymConst};
use crate::expr::Expr;
use crate::laurent::{local_order, series, LocalOrder, ZeroPolicy, NUMERIC_ZERO_TOL};

/// Default precision of the Newton refinement.
pub const REFINE_PREC: u32 = 256;
/// Largest denominator tried when snapping to a rational.
pub const SNAP_MAX_DEN: u32 = 1_000_000;
/// Largest denominator tried when snapping to a rational multiple of pi.
pub const SNAP_MAX_PI_DEN: u32 = 24;
/// Snapping distance.
pub const SNAP_TOL: f64 = 1e-20;

/// Split positions tried in turn when a cut runs through a zero.
const SPLITS: [f64; 5] = [0.4817, 0.5261, 0.4473, 0.5629, 0.3911];

#[derive(Clone, Debug)]
pub(crate) struct Root {
    pub point: SymConst,
    pub snapped: bool,
    pub multiplicity: u32,
    /// The Laurent order of the function at `point` equals `multiplicity`.
    pub confirmed: bool,
}

pub(crate) struct Budget {
    pub cells: usize,
    pub cap: usize,
    /// Working precision of the refinement.
    pub prec: u32,
}

impl Budget {
    fn spend(&mut self) -> Result<(), RegionError> {
        self.cells += 1;
        if self.cells > self.cap {
            return Err(RegionError::SubdivisionBudgetExceeded(self.cap));
        }
        Ok(())
    }
}

pub(crate) fn contour_error(e: ContourError) -> RegionError {
    match e {
        ContourError::Singular { at } | ContourError::NotConverged { at } => {
            RegionError::BoundaryEvent { at: format!("{} + {}i", at.re, at.im) }
        }
        ContourError::Residual { raw } => RegionError::ResidualTooLarge { raw: format!("{} + {}i", raw.re, raw.im) },
    }
}

pub(crate) fn rect_count(e: &Expr, lo: Complex64, hi: Complex64) -> Result<i64, ContourError> {
    winding(e, &RectPath::new(lo, hi))
}

#[derive(Clone, Copy)]
struct Cell {
    lo: Complex64,
    hi: Complex64,
    count: i64,
}

impl Cell {
    fn contains(&self, z: Complex64) -> bool {
        z.re > self.lo.re && z.re < self.hi.re && z.im > self.lo.im && z.im < self.hi.im
    }

    fn diameter(&self) -> f64 {
        (self.hi - self.lo).norm()
    }

    fn halves(&self, frac: f64) -> (Cell, Cell) {
        let d = self.hi - self.lo;
        if d.re >= d.im {
            let x = self.lo.re + frac * d.re;
            (
                Cell { lo: self.lo, hi: Complex64::new(x, self.hi.im), count: 0 },
                Cell { lo: Complex64::new(x, self.lo.im), hi: self.hi, count: 0 },
            )
        } else {
            let y = self.lo.im + frac * d.im;
            (
                Cell { lo: self.lo, hi: Complex64::new(self.hi.re, y), count: 0 },
                Cell { lo: Complex64::new(self.lo.re, y), hi: self.hi, count: 0 },
            )
        }
    }
}

/// All zeros of the entire expression `n` in the rectangle `lo..hi`, whose
/// total multiplicity is already known to be `count`.
pub(crate) fn find_zeros(
    n: &Expr,
    lo: Complex64,
    hi: Complex64,
    count: i64,
    budget: &mut Budget,
) -> Result<Vec<Root>, RegionError> {
    let mut roots = Vec::new();
    let mut stack = vec![Cell { lo, hi, count }];
    while let Some(cell) = stack.pop() {
        if cell.count == 0 {
            continue;
        }
        if cell.count < 0 {
            return Err(RegionError::ResidualTooLarge { raw: format!("negative zero count {}", cell.count) });
        }
        budget.spend()?;
        let k = cell.count as u32;
        if let Some(root) = isolate(n, &cell, k, budget.prec) {
            roots.push(root);
            continue;
        }
        if cell.diameter() < 1e-12 * (1.0 + lo.norm().max(hi.norm())) {
            return Err(RegionError::SubdivisionBudgetExceeded(budget.cap));
        }
        let mut last = None;
        let mut split = None;
        for frac in SPLITS {
            let (mut a, mut b) = cell.halves(frac);
            match (rect_count(n, a.lo, a.hi), rect_count(n, b.lo, b.hi)) {
                (Ok(ca), Ok(cb)) if ca + cb == cell.count => {
                    a.count = ca;
                    b.count = cb;
                    split = Some((a, b));
                    break;
                }
                (Err(e), _) | (_, Err(e)) => last = Some(contour_error(e)),
                _ => {}
            }
        }
        let Some((a, b)) = split else {
            return Err(last.unwrap_or(RegionError::ResidualTooLarge { raw: "inconsistent cell counts".into() }));
        };
        stack.push(b);
        stack.push(a);
    }
    Ok(roots)
}

/// Try to show that the `k` zeros in `cell` sit at a single point.
fn isolate(n: &Expr, cell: &Cell, k: u32, prec: u32) -> Option<Root> {
    let mut z = 0.5 * (cell.lo + cell.hi);
    let scale = cell.diameter();
    let mut converged = false;
    for _ in 0..60 {
        let q = log_derivative(n, z)?;
        if q.norm() == 0.0 {
            return None;
        }
        let step = k as f64 / q;
        z -= step;
        if !cell.contains(z) {
            return None;
        }
        if step.norm() <= 1e-13 * (1.0 + z.norm()) + 1e-9 * scale {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }
    let refined = refine(n, z, k, prec)?;
    if !cell.contains(refined.mid_f64()) {
        return None;
    }
    Some(finish(n, &refined, k))
}

/// Taylor coefficients `c_0..=c_k` of `n` at the exact point `z`.
fn taylor(n: &Expr, z: &Ball, k: u32, prec: u32) -> Option<Vec<Ball>> {
    let center = Arc::new(SymConst::approx(z.clone()));
    let s = series(n, &center, ZeroPolicy::Numeric { tol: NUMERIC_ZERO_TOL }, k + 1).ok()?;
    (0..=k as i64).map(|j| s.coefficient(j).map(|c| c.enclose(prec))).collect()
}

fn ball_from(z: Complex64, prec: u32) -> Ball {
    Ball::exact(Float::with_val(prec, z.re), Float::with_val(prec, z.im))
}

/// Newton's method on the `(k-1)`-th derivative, which has a simple zero
/// at a zero of multiplicity `k`.
fn refine(n: &Expr, start: Complex64, k: u32, prec: u32) -> Option<Ball> {
    let mut z = ball_from(start, prec);
    let kk = Ball::from_real(&Rational::from(k), prec);
    let tiny = Float::with_val(64, Float::i_exp(1, -(prec as i32) + 24));
    let mut settled = 0;
    for _ in 0..100 {
        let c = taylor(n, &z, k, prec)?;
        let top = c[k as usize].mul(&kk);
        if top.contains_zero() {
            return None;
        }
        let step = c[k as usize - 1].div(&top);
        z = z.sub(&step).midpoint();
        let size = step.abs_upper();
        let bound = Float::with_val(64, &tiny * (1.0 + z.mid_f64().norm()));
        if size <= bound {
            settled += 1;
            if settled >= 2 {
                break;
            }
        }
    }
    let c = taylor(n, &z, k, prec)?;
    let top = c[k as usize].abs_lower();
    for cj in &c[..k as usize] {
        let r = Float::with_val(64, &top * 1e-30);
        if cj.abs_upper() > r {
            return None;
        }
    }
    Some(z)
}

fn finish(n: &Expr, z: &Ball, k: u32) -> Root {
    if let Some(p) = snap(z) {
        if local_order(n, &p) == LocalOrder::Zero(k) {
            return Root { point: p, snapped: true, multiplicity: k, confirmed: true };
        }
    }
    let p = SymConst::approx(z.clone());
    let confirmed = local_order(n, &p) == LocalOrder::Zero(k);
    Root { point: p, snapped: false, multiplicity: k, confirmed }
}

/// Last continued-fraction convergent of `x` with denominator at most `max_den`.
pub fn best_rational(x: &Rational, max_den: u32) -> Rational {
    let max_den = Integer::from(max_den);
    let (mut h0, mut h1) = (Integer::from(0), Integer::from(1));
    let (mut k0, mut k1) = (Integer::from(1), Integer::from(0));
    let mut y = x.clone();
    let mut best = x.clone().floor();
    loop {
        let a = Integer::from(y.floor_ref());
        let h2 = Integer::from(&a * &h1) + &h0;
        let k2 = Integer::from(&a * &k1) + &k0;
        if k2 > max_den {
            break;
        }
        best = Rational::from((h2.clone(), k2.clone()));
        let frac = y - Rational::from(a);
        if frac == 0 {
            break;
        }
        y = frac.recip();
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
    }
    best
}

fn snap_part(x: &Float, pi: &Rational) -> Option<SymConst> {
    let x = x.to_rational()?;
    let tol = Rational::from_f64(SNAP_TOL)?;
    let close = |a: &Rational| Rational::from(&x - a).abs() < tol;
    if close(&Rational::new()) {
        return Some(SymConst::zero());
    }
    let r = best_rational(&x, SNAP_MAX_DEN);
    if close(&r) {
        return Some(SymConst::rational(r));
    }
    let q = best_rational(&Rational::from(&x / pi), SNAP_MAX_PI_DEN);
    if q != 0 && close(&Rational::from(&q * pi)) {
        return Some(SymConst::pi().mul(&SymConst::rational(q)));
    }
    None
}

/// Exact point within the snapping distance of `z`, if there is a simple one.
pub(crate) fn snap(z: &Ball) -> Option<SymConst> {
    let pi = Float::with_val(z.prec() + 64, rug::float::Constant::Pi).to_rational()?;
    let re = snap_part(&z.re.mid, &pi)?;
    let im = snap_part(&z.im.mid, &pi)?;
    Some(re.add(&im.mul(&SymConst::i())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn zeros(e: &str, r: f64) -> Vec<Root> {
        let n = parse(e).unwrap();
        let (lo, hi) = (Complex64::new(-r, -r * 0.77), Complex64::new(r * 1.03, r * 0.81));
        let count = rect_count(&n, lo, hi).unwrap();
        let mut b = Budget { cells: 0, cap: 10_000, prec: REFINE_PREC };
        let mut roots = find_zeros(&n, lo, hi, count, &mut b).unwrap();
        roots.sort_by(|a, b| a.point.to_complex().re.total_cmp(&b.point.to_complex().re));
        roots
    }

    #[test]
    fn continued_fractions() {
        let x = Rational::from((355, 113));
        assert_eq!(best_rational(&x, 1000), x);
        assert_eq!(best_rational(&x, 100), Rational::from((22, 7)));
        assert_eq!(best_rational(&Rational::from((-7, 3)), 10), Rational::from((-7, 3)));
    }

    #[test]
    fn snaps_rationals_and_pi_multiples() {
        let roots = zeros("sin(z)*(z - 3/7)^2*(z + 1/2)", 4.0);
        let got: Vec<(String, u32, bool)> =
            roots.iter().map(|r| (r.point.to_string(), r.multiplicity, r.snapped && r.confirmed)).collect();
        assert_eq!(
            got,
            vec![
                ("(-1)*pi".to_string(), 1, true),
                ("-1/2".to_string(), 1, true),
                ("0".to_string(), 1, true),
                ("3/7".to_string(), 2, true),
                ("pi".to_string(), 1, true),
            ]
        );
    }

    #[test]
    fn irrational_zeros_stay_approximate() {
        let roots = zeros("z^2 - 2", 2.0);
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert!(!r.snapped && r.confirmed && r.multiplicity == 1);
            let v = r.point.to_complex();
            assert!((v.re.abs() - std::f64::consts::SQRT_2).abs() < 1e-15);
        }
    }

    #[test]
    fn complex_and_multiple_zeros() {
        let roots = zeros("(z - 1/2 - i)^3*(z + 1)^4*exp(z)", 2.0);
        let got: Vec<(String, u32)> = roots.iter().map(|r| (r.point.to_string(), r.multiplicity)).collect();
        assert_eq!(got, vec![("-1".to_string(), 4), ("(1/2 + 1*i)".to_string(), 3)]);
    }
}
