//! Midpoint-radius enclosures over MPFR floats.
//!
//! A [`RealBall`] is a midpoint at the working precision and a radius kept
//! at [`MAG_PREC`] bits, always rounded upward.  A [`Ball`] is a rectangle
//! in the complex plane made of two real balls.  Every operation returns an
//! enclosure of the exact result for all inputs in the operand balls; an
//! operation that cannot produce a finite enclosure (division by a ball
//! containing zero) returns an indeterminate ball with infinite radius.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use rug::float::{Constant, Round, Special};
use rug::ops::AssignRound;
use rug::{Float, Rational};

/// Bits kept in radii.
pub const MAG_PREC: u32 = 64;

fn up<T>(val: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(MAG_PREC, val, Round::Up).0
}

fn down<T>(val: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(MAG_PREC, val, Round::Down).0
}

fn mag_zero() -> Float {
    Float::new(MAG_PREC)
}

fn mag_inf() -> Float {
    Float::with_val(MAG_PREC, Special::Infinity)
}

/// Upper bound on the rounding error of a correctly rounded result.
fn ulp(x: &Float) -> Float {
    match x.get_exp() {
        Some(e) if !x.is_zero() => {
            let mut u = Float::with_val(MAG_PREC, 1);
            u <<= e - x.prec() as i32;
            u
        }
        _ => mag_zero(),
    }
}

/// Correctly rounded value and a bound on its rounding error.
fn rounded<T>(p: u32, val: T) -> (Float, Float)
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    let (mid, ord) = Float::with_val_round(p, val, Round::Nearest);
    let err = if ord == Ordering::Equal { mag_zero() } else { ulp(&mid) };
    (mid, err)
}

fn abs_up(x: &Float) -> Float {
    up(&*x.as_abs())
}

fn abs_down(x: &Float) -> Float {
    down(&*x.as_abs())
}

#[derive(Clone, Debug)]
pub struct RealBall {
    pub mid: Float,
    pub rad: Float,
}

impl RealBall {
    pub fn exact(mid: Float) -> RealBall {
        RealBall { mid, rad: mag_zero() }
    }

    pub fn from_rational(r: &Rational, prec: u32) -> RealBall {
        let (mid, ord) = Float::with_val_round(prec, r, Round::Nearest);
        let rad = if ord == Ordering::Equal { mag_zero() } else { ulp(&mid) };
        RealBall { mid, rad }
    }

    pub fn indeterminate(prec: u32) -> RealBall {
        RealBall { mid: Float::new(prec), rad: mag_inf() }
    }

    pub fn is_finite(&self) -> bool {
        self.rad.is_finite() && self.mid.is_finite()
    }

    pub fn prec(&self) -> u32 {
        self.mid.prec()
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_finite() || abs_down(&self.mid) <= self.rad
    }

    pub fn add(&self, o: &RealBall) -> RealBall {
        let p = self.prec().max(o.prec());
        if !self.is_finite() || !o.is_finite() {
            return RealBall::indeterminate(p);
        }
        let (mid, err) = rounded(p, &self.mid + &o.mid);
        let rad = up(&up(&self.rad + &o.rad) + &err);
        RealBall { mid, rad }
    }

    pub fn neg(&self) -> RealBall {
        RealBall { mid: Float::with_val(self.prec(), -&self.mid), rad: self.rad.clone() }
    }

    pub fn sub(&self, o: &RealBall) -> RealBall {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RealBall) -> RealBall {
        let p = self.prec().max(o.prec());
        if !self.is_finite() || !o.is_finite() {
            return RealBall::indeterminate(p);
        }
        let (mid, err) = rounded(p, &self.mid * &o.mid);
        let t1 = up(&abs_up(&self.mid) * &o.rad);
        let t2 = up(&abs_up(&o.mid) * &self.rad);
        let t3 = up(&self.rad * &o.rad);
        let rad = up(&up(&up(&t1 + &t2) + &t3) + &err);
        RealBall { mid, rad }
    }

    pub fn mul_f(&self, k: f64) -> RealBall {
        let p = self.prec();
        self.mul(&RealBall::exact(Float::with_val(p, k)))
    }

    pub fn recip(&self) -> RealBall {
        let p = self.prec();
        if self.contains_zero() {
            return RealBall::indeterminate(p);
        }
        let (mid, err) = rounded(p, self.mid.recip_ref());
        let m = abs_down(&self.mid);
        let gap = down(&m - &self.rad);
        let denom = down(&m * &gap);
        let rad = up(&up(&self.rad / &denom) + &err);
        RealBall { mid, rad }
    }

    fn from_bounds(lo: Float, hi: Float, p: u32) -> RealBall {
        if !lo.is_finite() || !hi.is_finite() {
            return RealBall::indeterminate(p);
        }
        let mid = Float::with_val(p, &lo + &hi) / 2u32;
        let a = up(&hi - &mid);
        let b = up(&mid - &lo);
        let rad = if a > b { a } else { b };
        RealBall { mid, rad }
    }

    pub fn exp(&self) -> RealBall {
        let p = self.prec();
        if !self.is_finite() {
            return RealBall::indeterminate(p);
        }
        let mut lo = Float::with_val_round(p, &self.mid - &self.rad, Round::Down).0;
        lo.exp_round(Round::Down);
        let mut hi = Float::with_val_round(p, &self.mid + &self.rad, Round::Up).0;
        hi.exp_round(Round::Up);
        RealBall::from_bounds(lo, hi, p)
    }

    fn lipschitz(&self, mid: Float) -> RealBall {
        let rad = up(&self.rad + &ulp(&mid));
        if rad > 2 {
            return RealBall { mid: Float::new(mid.prec()), rad: Float::with_val(MAG_PREC, 1) };
        }
        RealBall { mid, rad }
    }

    pub fn sin(&self) -> RealBall {
        if !self.is_finite() {
            return RealBall::indeterminate(self.prec());
        }
        self.lipschitz(Float::with_val(self.prec(), self.mid.sin_ref()))
    }

    pub fn cos(&self) -> RealBall {
        if !self.is_finite() {
            return RealBall::indeterminate(self.prec());
        }
        self.lipschitz(Float::with_val(self.prec(), self.mid.cos_ref()))
    }

    /// `(cosh x, sinh x)`.
    fn cosh_sinh(&self) -> (RealBall, RealBall) {
        let e = self.exp();
        let einv = self.neg().exp();
        (e.add(&einv).mul_f(0.5), e.sub(&einv).mul_f(0.5))
    }

    pub fn abs_upper(&self) -> Float {
        if !self.is_finite() {
            return mag_inf();
        }
        up(&abs_up(&self.mid) + &self.rad)
    }

    pub fn abs_lower(&self) -> Float {
        if self.contains_zero() {
            return mag_zero();
        }
        down(&abs_down(&self.mid) - &self.rad)
    }
}

/// A complex ball: real and imaginary parts enclosed separately.
#[derive(Clone, Debug)]
pub struct Ball {
    pub re: RealBall,
    pub im: RealBall,
}

impl Ball {
    pub fn from_rationals(re: &Rational, im: &Rational, prec: u32) -> Ball {
        Ball { re: RealBall::from_rational(re, prec), im: RealBall::from_rational(im, prec) }
    }

    pub fn from_real(r: &Rational, prec: u32) -> Ball {
        Ball::from_rationals(r, &Rational::new(), prec)
    }

    pub fn exact(re: Float, im: Float) -> Ball {
        Ball { re: RealBall::exact(re), im: RealBall::exact(im) }
    }

    pub fn zero(prec: u32) -> Ball {
        Ball::exact(Float::new(prec), Float::new(prec))
    }

    pub fn one(prec: u32) -> Ball {
        Ball::exact(Float::with_val(prec, 1), Float::new(prec))
    }

    pub fn i(prec: u32) -> Ball {
        Ball::exact(Float::new(prec), Float::with_val(prec, 1))
    }

    pub fn pi(prec: u32) -> Ball {
        let mid = Float::with_val(prec, Constant::Pi);
        let rad = ulp(&mid);
        Ball { re: RealBall { mid, rad }, im: RealBall::exact(Float::new(prec)) }
    }

    pub fn indeterminate(prec: u32) -> Ball {
        Ball { re: RealBall::indeterminate(prec), im: RealBall::indeterminate(prec) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn excludes_zero(&self) -> bool {
        !self.contains_zero()
    }

    /// Upper bound on the modulus of every point in the ball.
    pub fn abs_upper(&self) -> Float {
        let a = self.re.abs_upper();
        let b = self.im.abs_upper();
        let s = up(&up(a.square_ref()) + &up(b.square_ref()));
        Float::with_val_round(MAG_PREC, s.sqrt_ref(), Round::Up).0
    }

    /// Lower bound on the modulus of every point in the ball.
    pub fn abs_lower(&self) -> Float {
        let a = self.re.abs_lower();
        let b = self.im.abs_lower();
        if a > b {
            a
        } else {
            b
        }
    }

    /// Largest of the two radii.
    pub fn radius(&self) -> Float {
        if self.re.rad > self.im.rad {
            self.re.rad.clone()
        } else {
            self.im.rad.clone()
        }
    }

    pub fn mid_f64(&self) -> Complex64 {
        Complex64::new(self.re.mid.to_f64(), self.im.mid.to_f64())
    }

    /// Same midpoint, radius dropped.
    pub fn midpoint(&self) -> Ball {
        Ball::exact(self.re.mid.clone(), self.im.mid.clone())
    }

    /// True when the two balls share at least one point.
    pub fn overlaps(&self, o: &Ball) -> bool {
        self.sub(o).contains_zero()
    }

    pub fn add(&self, o: &Ball) -> Ball {
        Ball { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &Ball) -> Ball {
        Ball { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn neg(&self) -> Ball {
        Ball { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        Ball { re, im }
    }

    pub fn recip(&self) -> Ball {
        let p = self.prec();
        if self.contains_zero() {
            return Ball::indeterminate(p);
        }
        let den = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        let r = den.recip();
        Ball { re: self.re.mul(&r), im: self.im.neg().mul(&r) }
    }

    pub fn div(&self, o: &Ball) -> Ball {
        self.mul(&o.recip())
    }

    pub fn exp(&self) -> Ball {
        let m = self.re.exp();
        Ball { re: m.mul(&self.im.cos()), im: m.mul(&self.im.sin()) }
    }

    pub fn sin(&self) -> Ball {
        let (ch, sh) = self.im.cosh_sinh();
        Ball { re: self.re.sin().mul(&ch), im: self.re.cos().mul(&sh) }
    }

    pub fn cos(&self) -> Ball {
        let (ch, sh) = self.im.cosh_sinh();
        Ball { re: self.re.cos().mul(&ch), im: self.re.sin().mul(&sh).neg() }
    }

    /// Midpoint in decimal with `digits` significant digits.
    pub fn mid_string(&self, digits: usize) -> String {
        let re = self.re.mid.to_string_radix(10, Some(digits));
        let im = self.im.mid.to_string_radix(10, Some(digits));
        format!("{re} {} {}i", if self.im.mid.is_sign_negative() { "-" } else { "+" }, im.trim_start_matches('-'))
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) +/- {}", self.mid_string(20), self.radius().to_f64())
    }
}

impl crate::expr::Scalar for Ball {
    fn from_rational(r: &Rational, like: &Self) -> Self {
        Ball::from_real(r, like.prec())
    }
    fn pi(like: &Self) -> Self {
        Ball::pi(like.prec())
    }
    fn imag_unit(like: &Self) -> Self {
        Ball::i(like.prec())
    }
    fn add(&self, o: &Self) -> Self {
        Ball::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Ball::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Ball::mul(self, o)
    }
    fn div(&self, o: &Self) -> Self {
        Ball::div(self, o)
    }
    fn neg(&self) -> Self {
        Ball::neg(self)
    }
    fn exp(&self) -> Self {
        Ball::exp(self)
    }
    fn sin(&self) -> Self {
        Ball::sin(self)
    }
    fn cos(&self) -> Self {
        Ball::cos(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn contains(b: &RealBall, x: &Rational) -> bool {
        let lo = Float::with_val(4096, &b.mid - &b.rad);
        let hi = Float::with_val(4096, &b.mid + &b.rad);
        lo <= *x && *x <= hi
    }

    #[test]
    fn rational_enclosures() {
        let b = RealBall::from_rational(&Rational::from((3, 2)), 64);
        assert_eq!(b.mid, 1.5);
        assert!(b.rad.is_zero());
        let third = Rational::from((1, 3));
        let b = RealBall::from_rational(&third, 64);
        assert!(contains(&b, &third));
        assert!(b.rad > 0);
    }

    #[test]
    fn pi_is_tight() {
        let p = Ball::pi(64);
        assert!(p.re.rad <= Float::with_val(64, 1) >> 60u32);
        assert!((p.re.mid.to_f64() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn recip_of_ball_containing_zero_is_indeterminate() {
        let b = Ball::zero(64).recip();
        assert!(!b.is_finite());
        assert!(b.contains_zero());
    }

    #[test]
    fn euler_identity_encloses_minus_one() {
        let z = Ball::pi(128).mul(&Ball::i(128));
        let e = z.exp().add(&Ball::one(128));
        assert!(e.contains_zero());
        assert!(e.abs_upper() < 1e-30);
    }

    #[test]
    fn sin_cos_pythagoras() {
        let z = Ball::from_rationals(&Rational::from((7, 3)), &Rational::from((-1, 2)), 128);
        let s = z.sin();
        let c = z.cos();
        let one = s.mul(&s).add(&c.mul(&c)).sub(&Ball::one(128));
        assert!(one.contains_zero());
        assert!(one.abs_upper() < 1e-30);
    }
}
