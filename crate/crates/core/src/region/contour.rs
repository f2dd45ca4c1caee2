//! Winding numbers by adaptive Gauss-Kronrod integration of `e'/e`.

use num_complex::Complex64;
use rug::{Float, Rational};

use crate::constants::Ball;
use crate::expr::{Expr, Scalar};

/// Working precision for samples where double precision is unreliable.
const FALLBACK_PREC: u32 = 256;
/// Relative error above which a double precision sample is recomputed.
const MAX_REL_ERR: f64 = 1e-7;
const UNIT_ROUNDOFF: f64 = 2.3e-16;
const MAX_DEPTH: u32 = 40;
/// Initial pieces per edge or circle.
const INITIAL_PIECES: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum ContourError {
    /// The integrand is singular or unresolvable near `at`.
    Singular {
        at: Complex64,
    },
    NotConverged {
        at: Complex64,
    },
    Residual {
        raw: Complex64,
    },
}

/// Double precision value with a running bound on its absolute error.
#[derive(Clone, Copy, Debug)]
struct Tracked {
    v: Complex64,
    e: f64,
}

impl Tracked {
    fn exact(v: Complex64) -> Tracked {
        Tracked { v, e: 0.0 }
    }

    fn rounded(v: Complex64, e: f64) -> Tracked {
        Tracked { v, e: e + UNIT_ROUNDOFF * v.norm() }
    }
}

impl Scalar for Tracked {
    fn from_rational(r: &Rational, _: &Self) -> Self {
        Tracked::rounded(Complex64::new(r.to_f64(), 0.0), 0.0)
    }
    fn pi(_: &Self) -> Self {
        Tracked::rounded(Complex64::new(std::f64::consts::PI, 0.0), 0.0)
    }
    fn imag_unit(_: &Self) -> Self {
        Tracked::exact(Complex64::i())
    }
    fn add(&self, o: &Self) -> Self {
        Tracked::rounded(self.v + o.v, self.e + o.e)
    }
    fn sub(&self, o: &Self) -> Self {
        Tracked::rounded(self.v - o.v, self.e + o.e)
    }
    fn mul(&self, o: &Self) -> Self {
        let v = self.v * o.v;
        Tracked::rounded(v, self.v.norm() * o.e + o.v.norm() * self.e + self.e * o.e + UNIT_ROUNDOFF * v.norm())
    }
    fn div(&self, o: &Self) -> Self {
        let b = o.v.norm();
        if b <= o.e {
            return Tracked { v: self.v / o.v, e: f64::INFINITY };
        }
        let v = self.v / o.v;
        Tracked::rounded(v, (self.e + v.norm() * o.e) / (b - o.e) + UNIT_ROUNDOFF * v.norm())
    }
    fn neg(&self) -> Self {
        Tracked { v: -self.v, e: self.e }
    }
    fn exp(&self) -> Self {
        let v = self.v.exp();
        Tracked::rounded(v, v.norm() * self.e.exp_m1() + 2.0 * UNIT_ROUNDOFF * v.norm())
    }
    fn sin(&self) -> Self {
        let v = self.v.sin();
        let growth = (self.v.im.abs() + self.e).cosh();
        Tracked::rounded(v, self.e * growth + 2.0 * UNIT_ROUNDOFF * growth)
    }
    fn cos(&self) -> Self {
        let v = self.v.cos();
        let growth = (self.v.im.abs() + self.e).cosh();
        Tracked::rounded(v, self.e * growth + 2.0 * UNIT_ROUNDOFF * growth)
    }
}

fn ball_at(z: Complex64, prec: u32) -> Ball {
    Ball::exact(Float::with_val(prec, z.re), Float::with_val(prec, z.im))
}

/// `e'(z)/e(z)`, `None` when `e` vanishes or blows up at `z`.
pub(crate) fn log_derivative(e: &Expr, z: Complex64) -> Option<Complex64> {
    let (v, d) = e.eval_dual(&Tracked::exact(z));
    let a = v.v.norm();
    if a.is_finite() && a > v.e && d.v.norm().is_finite() && d.e.is_finite() {
        let q = d.v / v.v;
        let err = (d.e + q.norm() * v.e) / (a - v.e);
        if err <= MAX_REL_ERR * (1.0 + q.norm()) {
            return Some(q);
        }
    }
    for prec in [FALLBACK_PREC, 4 * FALLBACK_PREC] {
        let (v, d) = e.eval_dual(&ball_at(z, prec));
        if !v.is_finite() || !d.is_finite() || v.contains_zero() {
            continue;
        }
        let q = d.div(&v);
        let mid = q.mid_f64();
        if q.is_finite() && q.radius().to_f64() <= MAX_REL_ERR * (1.0 + mid.norm()) {
            return Some(mid);
        }
    }
    None
}

/// True when `e(z)` is certainly nonzero (or infinite) in double precision.
pub(crate) fn certainly_nonzero_at(e: &Expr, z: Complex64) -> bool {
    let v = e.eval(&Tracked::exact(z));
    !v.v.norm().is_finite() || v.v.norm() > v.e
}

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// A closed path `z(t)`, `t` in `[0, 1]`, with its derivative.
pub(crate) trait Path {
    fn point(&self, t: f64) -> Complex64;
    fn tangent(&self, t: f64) -> Complex64;
}

struct Integrator<'a, P: Path> {
    e: &'a Expr,
    path: &'a P,
    evals: usize,
}

impl<P: Path> Integrator<'_, P> {
    fn sample(&mut self, t: f64) -> Result<Complex64, ContourError> {
        self.evals += 1;
        let z = self.path.point(t);
        log_derivative(self.e, z).map(|q| q * self.path.tangent(t)).ok_or(ContourError::Singular { at: z })
    }

    fn gk(&mut self, a: f64, b: f64) -> Result<(Complex64, f64), ContourError> {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mid = self.sample(c)?;
        let mut kron = mid * WGK[7];
        let mut gauss = mid * WG[3];
        for (j, x) in XGK.iter().take(7).enumerate() {
            let s = self.sample(c - h * x)? + self.sample(c + h * x)?;
            kron += s * WGK[j];
            if j % 2 == 1 {
                gauss += s * WG[j / 2];
            }
        }
        Ok((kron * h, ((kron - gauss) * h).norm()))
    }

    fn adaptive(&mut self, a: f64, b: f64, tol: f64, depth: u32) -> Result<Complex64, ContourError> {
        let (val, err) = self.gk(a, b)?;
        if err <= tol.max(1e-14 * val.norm()) {
            return Ok(val);
        }
        if depth >= MAX_DEPTH || self.evals > 2_000_000 {
            let at = self.path.point(0.5 * (a + b));
            return Err(if b - a < 1e-9 { ContourError::Singular { at } } else { ContourError::NotConverged { at } });
        }
        let m = 0.5 * (a + b);
        Ok(self.adaptive(a, m, 0.5 * tol, depth + 1)? + self.adaptive(m, b, 0.5 * tol, depth + 1)?)
    }
}

/// Winding number of `e` along `path`, i.e. zeros minus poles inside.
pub(crate) fn winding<P: Path>(e: &Expr, path: &P) -> Result<i64, ContourError> {
    let mut it = Integrator { e, path, evals: 0 };
    let mut total = Complex64::new(0.0, 0.0);
    let step = 1.0 / INITIAL_PIECES as f64;
    for k in 0..INITIAL_PIECES {
        let a = k as f64 * step;
        let b = if k + 1 == INITIAL_PIECES { 1.0 } else { a + step };
        total += it.adaptive(a, b, 1e-6 * step, 0)?;
    }
    let raw = total / Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let n = raw.re.round();
    if (raw - Complex64::new(n, 0.0)).norm() >= 1e-3 {
        return Err(ContourError::Residual { raw });
    }
    Ok(n as i64)
}

/// Counterclockwise boundary of an axis-parallel rectangle.
pub(crate) struct RectPath {
    corners: [Complex64; 4],
}

impl RectPath {
    pub(crate) fn new(lo: Complex64, hi: Complex64) -> RectPath {
        RectPath { corners: [lo, Complex64::new(hi.re, lo.im), hi, Complex64::new(lo.re, hi.im)] }
    }

    fn edge(&self, t: f64) -> (usize, f64) {
        let s = (t * 4.0).clamp(0.0, 4.0);
        let k = (s.floor() as usize).min(3);
        (k, s - k as f64)
    }
}

impl Path for RectPath {
    fn point(&self, t: f64) -> Complex64 {
        let (k, u) = self.edge(t);
        let a = self.corners[k];
        let b = self.corners[(k + 1) % 4];
        a + (b - a) * u
    }

    fn tangent(&self, t: f64) -> Complex64 {
        let (k, _) = self.edge(t);
        (self.corners[(k + 1) % 4] - self.corners[k]) * 4.0
    }
}

/// Counterclockwise circle.
pub(crate) struct CirclePath {
    pub center: Complex64,
    pub radius: f64,
}

impl Path for CirclePath {
    fn point(&self, t: f64) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, 2.0 * std::f64::consts::PI * t)
    }

    fn tangent(&self, t: f64) -> Complex64 {
        let tau = 2.0 * std::f64::consts::PI;
        Complex64::new(0.0, tau) * Complex64::from_polar(self.radius, tau * t)
    }
}
