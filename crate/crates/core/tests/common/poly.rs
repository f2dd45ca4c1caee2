//! Exact arithmetic in Q[z] and Q(z), used as an independent oracle.

use std::fmt;

use rug::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    /// Coefficients from the constant term up, no trailing zeros.
    c: Vec<Rational>,
}

impl QPoly {
    pub fn new(mut c: Vec<Rational>) -> QPoly {
        while c.last().is_some_and(|x| *x == 0) {
            c.pop();
        }
        QPoly { c }
    }

    pub fn zero() -> QPoly {
        QPoly { c: vec![] }
    }

    pub fn constant(k: Rational) -> QPoly {
        QPoly::new(vec![k])
    }

    pub fn one() -> QPoly {
        QPoly::constant(Rational::from(1))
    }

    /// `z - r`.
    pub fn linear(r: &Rational) -> QPoly {
        QPoly::new(vec![Rational::from(-r), Rational::from(1)])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn lead(&self) -> Rational {
        self.c.last().cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.c.len().max(o.c.len());
        let mut c = vec![Rational::new(); n];
        for (i, x) in self.c.iter().enumerate() {
            c[i] += x;
        }
        for (i, x) in o.c.iter().enumerate() {
            c[i] += x;
        }
        QPoly::new(c)
    }

    pub fn scale(&self, k: &Rational) -> QPoly {
        QPoly::new(self.c.iter().map(|x| Rational::from(x * k)).collect())
    }

    pub fn neg(&self) -> QPoly {
        self.scale(&Rational::from(-1))
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut c = vec![Rational::new(); self.c.len() + o.c.len() - 1];
        for (i, x) in self.c.iter().enumerate() {
            for (j, y) in o.c.iter().enumerate() {
                c[i + j] += Rational::from(x * y);
            }
        }
        QPoly::new(c)
    }

    pub fn pow(&self, n: u32) -> QPoly {
        (0..n).fold(QPoly::one(), |acc, _| acc.mul(self))
    }

    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut r = self.c.clone();
        let dl = d.lead();
        let dd = d.degree();
        if self.c.len() < d.c.len() {
            return (QPoly::zero(), self.clone());
        }
        let mut q = vec![Rational::new(); self.c.len() - d.c.len() + 1];
        for k in (0..q.len()).rev() {
            let t = Rational::from(&r[k + dd] / &dl);
            for (j, y) in d.c.iter().enumerate() {
                r[k + j] -= Rational::from(&t * y);
            }
            q[k] = t;
        }
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        self.scale(&self.lead().recip())
    }

    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(self.c.iter().enumerate().skip(1).map(|(i, x)| Rational::from(x * i as u32)).collect())
    }

    /// Squarefree parts `(i, P_i)` with `self = lead * prod P_i^i`, by Yun's algorithm.
    pub fn squarefree(&self) -> Vec<(u32, QPoly)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let f = self.monic();
        let d = f.derivative();
        let a0 = f.gcd(&d);
        let mut b = f.divrem(&a0).0;
        let mut c = d.divrem(&a0).0;
        let mut dd = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree() > 0 {
            let a = b.gcd(&dd);
            if a.degree() > 0 {
                out.push((i, a.clone()));
            }
            b = b.divrem(&a).0;
            c = dd.divrem(&a).0;
            dd = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// Cauchy's bound: every root has modulus below it.
    pub fn cauchy_bound(&self) -> f64 {
        if self.degree() == 0 {
            return 0.0;
        }
        let l = self.lead();
        let m = self.c[..self.c.len() - 1].iter().map(|x| Rational::from(x / &l).abs().to_f64()).fold(0.0, f64::max);
        1.0 + m
    }

    pub fn eval(&self, z: &Rational) -> Rational {
        self.c.iter().rev().fold(Rational::new(), |acc, x| acc * z + x)
    }
}

impl fmt::Display for QPoly {
    /// Parseable text such as `(-3/2) + (5)*z + (1/3)*z^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, x) in self.c.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({x})")?,
                1 => write!(f, "({x})*z")?,
                _ => write!(f, "({x})*z^{i}")?,
            }
        }
        Ok(())
    }
}

/// Reduced quotient of polynomials with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QFrac {
    pub num: QPoly,
    pub den: QPoly,
}

impl QFrac {
    pub fn new(num: QPoly, den: QPoly) -> QFrac {
        assert!(!den.is_zero(), "zero denominator");
        let g = num.gcd(&den);
        let num = num.divrem(&g).0;
        let den = den.divrem(&g).0;
        let l = den.lead().recip();
        QFrac { num: num.scale(&l), den: den.scale(&l) }
    }

    pub fn poly(p: QPoly) -> QFrac {
        QFrac::new(p, QPoly::one())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &QFrac) -> QFrac {
        QFrac::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn sub(&self, o: &QFrac) -> QFrac {
        QFrac::new(self.num.mul(&o.den).sub(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn mul(&self, o: &QFrac) -> QFrac {
        QFrac::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn recip(&self) -> QFrac {
        QFrac::new(self.den.clone(), self.num.clone())
    }

    pub fn cauchy_bound(&self) -> f64 {
        self.num.cauchy_bound().max(self.den.cauchy_bound())
    }
}

impl fmt::Display for QFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
