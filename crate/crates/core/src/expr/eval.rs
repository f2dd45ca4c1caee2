use num_complex::Complex64;
use rug::Rational;

use super::Expr;
use crate::constants::Ball;

/// Numbers an expression can be evaluated over.
pub trait Scalar: Clone {
    fn from_rational(r: &Rational, like: &Self) -> Self;
    fn pi(like: &Self) -> Self;
    fn imag_unit(like: &Self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn exp(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;

    fn powi(&self, n: i64) -> Self {
        let one = Self::from_rational(&Rational::from(1), self);
        let mut base = self.clone();
        let mut acc = one.clone();
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
            one.div(&acc)
        } else {
            acc
        }
    }
}

impl Scalar for Complex64 {
    fn from_rational(r: &Rational, _: &Self) -> Self {
        Complex64::new(r.to_f64(), 0.0)
    }
    fn pi(_: &Self) -> Self {
        Complex64::new(std::f64::consts::PI, 0.0)
    }
    fn imag_unit(_: &Self) -> Self {
        Complex64::i()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exp(&self) -> Self {
        Complex64::exp(*self)
    }
    fn sin(&self) -> Self {
        Complex64::sin(*self)
    }
    fn cos(&self) -> Self {
        Complex64::cos(*self)
    }
}

impl Expr {
    pub fn eval<S: Scalar>(&self, z: &S) -> S {
        match self {
            Expr::Var => z.clone(),
            Expr::Rational(r) => S::from_rational(r, z),
            Expr::Pi => S::pi(z),
            Expr::I => S::imag_unit(z),
            Expr::Neg(a) => a.eval(z).neg(),
            Expr::Add(a, b) => a.eval(z).add(&b.eval(z)),
            Expr::Mul(a, b) => a.eval(z).mul(&b.eval(z)),
            Expr::Div(a, b) => a.eval(z).div(&b.eval(z)),
            Expr::Pow(a, n) => a.eval(z).powi(*n),
            Expr::Exp(a) => a.eval(z).exp(),
            Expr::Sin(a) => a.eval(z).sin(),
            Expr::Cos(a) => a.eval(z).cos(),
        }
    }

    /// Forward-mode evaluation of `(e(z), e'(z))`.
    pub fn eval_dual<S: Scalar>(&self, z: &S) -> (S, S) {
        let zero = S::from_rational(&Rational::new(), z);
        match self {
            Expr::Var => (z.clone(), S::from_rational(&Rational::from(1), z)),
            Expr::Rational(r) => (S::from_rational(r, z), zero),
            Expr::Pi => (S::pi(z), zero),
            Expr::I => (S::imag_unit(z), zero),
            Expr::Neg(a) => {
                let (v, d) = a.eval_dual(z);
                (v.neg(), d.neg())
            }
            Expr::Add(a, b) => {
                let (av, ad) = a.eval_dual(z);
                let (bv, bd) = b.eval_dual(z);
                (av.add(&bv), ad.add(&bd))
            }
            Expr::Mul(a, b) => {
                let (av, ad) = a.eval_dual(z);
                let (bv, bd) = b.eval_dual(z);
                (av.mul(&bv), ad.mul(&bv).add(&av.mul(&bd)))
            }
            Expr::Div(a, b) => {
                let (av, ad) = a.eval_dual(z);
                let (bv, bd) = b.eval_dual(z);
                let q = av.div(&bv);
                (q.clone(), ad.sub(&q.mul(&bd)).div(&bv))
            }
            Expr::Pow(a, n) => {
                let (av, ad) = a.eval_dual(z);
                let lower = av.powi(n - 1);
                let v = lower.mul(&av);
                let k = S::from_rational(&Rational::from(*n), z);
                (v, k.mul(&lower).mul(&ad))
            }
            Expr::Exp(a) => {
                let (av, ad) = a.eval_dual(z);
                let v = av.exp();
                (v.clone(), v.mul(&ad))
            }
            Expr::Sin(a) => {
                let (av, ad) = a.eval_dual(z);
                (av.sin(), av.cos().mul(&ad))
            }
            Expr::Cos(a) => {
                let (av, ad) = a.eval_dual(z);
                (av.cos(), av.sin().neg().mul(&ad))
            }
        }
    }

    pub fn eval_dual_f64(&self, z: Complex64) -> (Complex64, Complex64) {
        self.eval_dual(&z)
    }

    pub fn eval_f64(&self, z: Complex64) -> Complex64 {
        self.eval(&z)
    }

    pub fn eval_ball(&self, z: &Ball) -> Ball {
        self.eval(z)
    }
}
