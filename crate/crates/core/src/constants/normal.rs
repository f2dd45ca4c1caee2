//! Exact normal form for constants built from rationals, `i`, `pi`, the
//! field operations and `exp`/`sin`/`cos`.
//!
//! A [`Poly`] is a finite sum of terms `c * pi^k * exp(E)` with `c` in
//! Q(i), `k` a signed integer and `E` itself a `Poly`.  Products of
//! exponentials are merged (`exp(A) exp(B) = exp(A + B)`), and the purely
//! imaginary `pi` part of every exponent is reduced modulo `2 pi i`, with
//! `exp(i q pi)` for `q` in `{0, 1/2, 1, 3/2}` replaced by the unit `i^(2q)`.
//! `sin` and `cos` are rewritten through exponentials.  A sum that
//! reduces to no terms is exactly zero.

use std::collections::BTreeMap;
use std::fmt;

use rug::Rational;

use super::ball::Ball;

/// An element of Q(i).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gauss {
    pub re: Rational,
    pub im: Rational,
}

impl Gauss {
    pub fn new(re: Rational, im: Rational) -> Gauss {
        Gauss { re, im }
    }

    pub fn real(re: Rational) -> Gauss {
        Gauss { re, im: Rational::new() }
    }

    pub fn int(n: i64) -> Gauss {
        Gauss::real(Rational::from(n))
    }

    pub fn i() -> Gauss {
        Gauss { re: Rational::new(), im: Rational::from(1) }
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn add(&self, o: &Gauss) -> Gauss {
        Gauss { re: Rational::from(&self.re + &o.re), im: Rational::from(&self.im + &o.im) }
    }

    pub fn neg(&self) -> Gauss {
        Gauss { re: Rational::from(-&self.re), im: Rational::from(-&self.im) }
    }

    pub fn mul(&self, o: &Gauss) -> Gauss {
        let re = Rational::from(&self.re * &o.re) - Rational::from(&self.im * &o.im);
        let im = Rational::from(&self.re * &o.im) + Rational::from(&self.im * &o.re);
        Gauss { re, im }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Gauss> {
        if self.is_zero() {
            return None;
        }
        let n = Rational::from(self.re.square_ref()) + Rational::from(self.im.square_ref());
        Some(Gauss { re: Rational::from(&self.re / &n), im: -Rational::from(&self.im / &n) })
    }

    pub fn ball(&self, prec: u32) -> Ball {
        Ball::from_rationals(&self.re, &self.im, prec)
    }

    /// `i^k`.
    fn unit(k: i64) -> Gauss {
        match k.rem_euclid(4) {
            0 => Gauss::int(1),
            1 => Gauss::i(),
            2 => Gauss::int(-1),
            _ => Gauss::i().neg(),
        }
    }
}

impl fmt::Display for Gauss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re == 0, self.im == 0) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}*i", self.im),
            (false, false) => write!(f, "({} + {}*i)", self.re, self.im),
        }
    }
}

/// `pi^pi_pow * exp(exp_arg)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub pi_pow: i64,
    pub exp_arg: Poly,
}

impl Monomial {
    fn one() -> Monomial {
        Monomial::default()
    }

    fn pi() -> Monomial {
        Monomial { pi_pow: 1, exp_arg: Poly::zero() }
    }

    /// Product of two canonical monomials, with the root of unity split
    /// off by exponent reduction.
    fn mul(&self, o: &Monomial) -> (Monomial, Gauss) {
        let (exp_arg, unit) = canonical_exponent(self.exp_arg.add(&o.exp_arg));
        (Monomial { pi_pow: self.pi_pow + o.pi_pow, exp_arg }, unit)
    }
}

/// Split `E` into a canonical exponent and the root of unity `exp(i q pi)`
/// that was removed from it.
fn canonical_exponent(mut e: Poly) -> (Poly, Gauss) {
    let key = Monomial::pi();
    let Some(c) = e.terms.get(&key).cloned() else {
        return (e, Gauss::int(1));
    };
    // q mod 2 in [0, 2)
    let two = Rational::from(2);
    let q = c.im.clone();
    let floor = Rational::from(&q / &two).floor();
    let r = q - Rational::from(&floor * &two);
    let twice = Rational::from(&r * &two);
    let (new_im, unit) = if *twice.denom() == 1 {
        let k = twice.numer().to_i64().unwrap_or(0);
        (Rational::new(), Gauss::unit(k))
    } else {
        (r, Gauss::int(1))
    };
    let new = Gauss { re: c.re, im: new_im };
    if new.is_zero() {
        e.terms.remove(&key);
    } else {
        e.terms.insert(key, new);
    }
    (e, unit)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Gauss>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn constant(c: Gauss) -> Poly {
        let mut p = Poly::zero();
        p.push(Monomial::one(), c);
        p
    }

    pub fn rational(r: Rational) -> Poly {
        Poly::constant(Gauss::real(r))
    }

    pub fn int(n: i64) -> Poly {
        Poly::constant(Gauss::int(n))
    }

    pub fn i() -> Poly {
        Poly::constant(Gauss::i())
    }

    pub fn pi() -> Poly {
        let mut p = Poly::zero();
        p.push(Monomial::pi(), Gauss::int(1));
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as an element of Q(i), if the constant is one.
    pub fn as_gauss(&self) -> Option<Gauss> {
        match self.terms.len() {
            0 => Some(Gauss::default()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                (*m == Monomial::one()).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn single_term(&self) -> Option<(&Monomial, &Gauss)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn is_single_term(&self) -> bool {
        self.terms.len() == 1
    }

    fn push(&mut self, m: Monomial, c: Gauss) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let sum = old.add(&c);
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.push(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Gauss) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.mul(k))).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if let Some(g) = o.as_gauss() {
            return self.scale(&g);
        }
        if let Some(g) = self.as_gauss() {
            return o.scale(&g);
        }
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let (m, unit) = ma.mul(mb);
                out.push(m, ca.mul(cb).mul(&unit));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::int(1);
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Inverse of a single-term constant; `None` for sums.
    pub fn monomial_recip(&self) -> Option<Poly> {
        let (m, c) = self.single_term()?;
        let mut p = Poly::zero();
        let (exp_arg, unit) = canonical_exponent(m.exp_arg.neg());
        let inv = Monomial { pi_pow: -m.pi_pow, exp_arg };
        p.push(inv, c.recip()?.mul(&unit));
        Some(p)
    }

    pub fn exp(&self) -> Poly {
        let (exp_arg, unit) = canonical_exponent(self.clone());
        let mut p = Poly::zero();
        p.push(Monomial { pi_pow: 0, exp_arg }, unit);
        p
    }

    pub fn sin(&self) -> Poly {
        let ix = self.scale(&Gauss::i());
        // (e^{ix} - e^{-ix}) / (2i) = -i/2 (e^{ix} - e^{-ix})
        let half_minus_i = Gauss::new(Rational::new(), Rational::from((-1, 2)));
        ix.exp().sub(&ix.neg().exp()).scale(&half_minus_i)
    }

    pub fn cos(&self) -> Poly {
        let ix = self.scale(&Gauss::i());
        ix.exp().add(&ix.neg().exp()).scale(&Gauss::real(Rational::from((1, 2))))
    }

    /// Enclosure at `prec` bits.
    pub fn ball(&self, prec: u32) -> Ball {
        let pi = Ball::pi(prec);
        self.ball_with(prec, &pi)
    }

    fn ball_with(&self, prec: u32, pi: &Ball) -> Ball {
        let mut acc = Ball::zero(prec);
        for (m, c) in &self.terms {
            let mut t = c.ball(prec);
            if m.pi_pow != 0 {
                t = t.mul(&crate::expr::Scalar::powi(pi, m.pi_pow));
            }
            if !m.exp_arg.is_zero() {
                t = t.mul(&m.exp_arg.ball_with(prec, pi).exp());
            }
            acc = acc.add(&t);
        }
        acc
    }
}

fn fmt_rational(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let coef = match (c.re == 0, c.im == 0) {
                (_, true) => fmt_rational(&c.re),
                (true, false) => format!("{}*i", fmt_rational(&c.im)),
                _ => format!("({} + {}*i)", fmt_rational(&c.re), fmt_rational(&c.im)),
            };
            let mut factors = Vec::new();
            if coef != "1" || (m.pi_pow == 0 && m.exp_arg.is_zero()) {
                factors.push(if coef.starts_with('-') && (m.pi_pow != 0 || !m.exp_arg.is_zero()) {
                    format!("({coef})")
                } else {
                    coef
                });
            }
            match m.pi_pow {
                0 => {}
                1 => factors.push("pi".into()),
                k => factors.push(format!("pi^{k}")),
            }
            if !m.exp_arg.is_zero() {
                factors.push(format!("exp({})", m.exp_arg));
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
