use rug::{Integer, Rational};
use thiserror::Error;

use super::Expr;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("fractional power at offset {offset}: exponents must be integer literals")]
    FractionalPower { offset: usize },
    #[error("transcendental argument not entire at offset {offset}: {function}(...) may not contain a division or a negative power")]
    NonEntireArgument { offset: usize, function: &'static str },
    #[error("division by zero at offset {offset}")]
    DivisionByZero { offset: usize },
    #[error("reciprocal of the literal 0")]
    ReciprocalOfZero,
}

impl ParseError {
    pub fn offset(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::FractionalPower { offset }
            | ParseError::NonEntireArgument { offset, .. }
            | ParseError::DivisionByZero { offset } => Some(*offset),
            ParseError::ReciprocalOfZero => None,
        }
    }
}

/// Parse an expression in `z`.
///
/// Grammar, loosest binding first: `+ -`, `* /`, unary `-`, `^` with an
/// integer literal exponent.  Atoms are `z`, integers, `pi`, `i`,
/// `exp(E)`, `sin(E)`, `cos(E)` and `(E)`.  `p/q` of two literals folds to
/// an exact rational.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax(format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn syntax(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { offset: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.syntax(format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = Expr::add(acc, self.term()?);
            } else if self.eat(b'-') {
                acc = Expr::sub(acc, self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = Expr::mul(acc, self.unary()?);
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let rhs = self.unary()?;
                if rhs.is_literal_zero() {
                    return Err(ParseError::DivisionByZero { offset: at });
                }
                acc = Expr::div(acc, rhs);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            Ok(Expr::neg(self.unary()?))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.atom()?;
        while self.peek() == Some(b'^') {
            let at = self.pos;
            self.pos += 1;
            let n = self.exponent(at)?;
            if n < 0 && base.is_literal_zero() {
                return Err(ParseError::DivisionByZero { offset: at });
            }
            base = Expr::pow(base, n);
        }
        Ok(base)
    }

    fn exponent(&mut self, caret: usize) -> Result<i64, ParseError> {
        let frac = ParseError::FractionalPower { offset: caret };
        let parenthesized = self.eat(b'(');
        let negative = self.eat(b'-');
        self.skip_ws();
        let digits = self.digits().ok_or(frac.clone())?;
        if parenthesized && !self.eat(b')') {
            return Err(frac);
        }
        if !parenthesized && matches!(self.src.get(self.pos), Some(b'.')) {
            return Err(frac);
        }
        let n: i64 = digits.parse().map_err(|_| self.syntax("exponent out of range"))?;
        Ok(if negative { -n } else { n })
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            None => Err(self.syntax("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits().unwrap_or_default();
                if self.src.get(self.pos) == Some(&b'.') {
                    return Err(self.syntax("decimal literals are not supported; write p/q"));
                }
                let n: Integer = d.parse().map_err(|_| self.syntax("bad integer"))?;
                Ok(Expr::rational(Rational::from(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                match word {
                    "z" => Ok(Expr::Var),
                    "pi" => Ok(Expr::Pi),
                    "i" => Ok(Expr::I),
                    "exp" | "sin" | "cos" => {
                        let function: &'static str = match word {
                            "exp" => "exp",
                            "sin" => "sin",
                            _ => "cos",
                        };
                        self.expect(b'(')?;
                        let arg = self.expr()?;
                        self.expect(b')')?;
                        if !arg.is_entire_form() {
                            return Err(ParseError::NonEntireArgument { offset: start, function });
                        }
                        Ok(match function {
                            "exp" => Expr::exp(arg),
                            "sin" => Expr::sin(arg),
                            _ => Expr::cos(arg),
                        })
                    }
                    _ => {
                        self.pos = start;
                        Err(self.syntax(format!("unknown identifier '{word}'")))
                    }
                }
            }
            Some(c) => Err(self.syntax(format!("unexpected '{}'", c as char))),
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;

    #[test]
    fn sum_of_pole_and_exponential() {
        let e = parse("1/z + exp(z)").unwrap();
        let expected = Expr::Add(
            Arc::new(Expr::Div(Arc::new(Expr::one()), Arc::new(Expr::Var))),
            Arc::new(Expr::Exp(Arc::new(Expr::Var))),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn integer_power_of_sine() {
        let e = parse("sin(z)^3").unwrap();
        assert_eq!(e, Expr::Pow(Arc::new(Expr::Sin(Arc::new(Expr::Var))), 3));
    }

    #[test]
    fn unbalanced_parenthesis() {
        let err = parse("exp(z").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { offset: 5, .. }), "{err:?}");
    }

    #[test]
    fn fractional_powers_rejected() {
        assert!(matches!(parse("z^(1/2)"), Err(ParseError::FractionalPower { offset: 1 })));
        assert!(matches!(parse("z^0.5"), Err(ParseError::FractionalPower { .. })));
        assert!(matches!(parse("z^z"), Err(ParseError::FractionalPower { .. })));
    }

    #[test]
    fn non_entire_arguments_rejected() {
        assert!(matches!(parse("2 + exp(1/z)"), Err(ParseError::NonEntireArgument { offset: 4, function: "exp" })));
        assert!(matches!(parse("sin(z^-1)"), Err(ParseError::NonEntireArgument { .. })));
    }

    #[test]
    fn literal_fractions_fold() {
        assert_eq!(parse("3/2").unwrap(), Expr::rational(Rational::from((3, 2))));
        assert_eq!(parse("-3/2").unwrap(), Expr::rational(Rational::from((-3, 2))));
        assert!(matches!(parse("1/(2-2)"), Err(ParseError::DivisionByZero { .. })));
    }

    #[test]
    fn precedence() {
        assert_eq!(parse("-z^2").unwrap(), Expr::neg(Expr::pow(Expr::Var, 2)));
        assert_eq!(parse("z^-2").unwrap(), Expr::pow(Expr::Var, -2));
        assert_eq!(parse("z - z*z").unwrap(), Expr::sub(Expr::Var, Expr::mul(Expr::Var, Expr::Var)));
    }

    #[test]
    fn print_parse_round_trip_is_structural() {
        for s in [
            "1/z + exp(z)",
            "z + z^2*exp(z)",
            "1/sin(z) + exp(z^2)",
            "(1 + exp(z^2))/sin(z)",
            "sin(z)^3 + sin(z)^4*exp(z^2)",
            "-(z - 1)^-2*cos(pi*z) - i*z",
            "z - (z - 1) - -z",
            "(3/4)*z/(2 - z)",
        ] {
            let e = parse(s).unwrap();
            let again = parse(&e.to_string()).unwrap();
            assert_eq!(e, again, "{s} -> {e}");
        }
    }

    #[test]
    fn reciprocal_of_zero_rejected() {
        assert_eq!(Expr::reciprocal_of(&Expr::zero()), Err(ParseError::ReciprocalOfZero));
        assert_eq!(Expr::reciprocal_of(&Expr::Var).unwrap().to_string(), "1/z");
        assert_eq!(Expr::reciprocal_of(&parse("sin(z)").unwrap()).unwrap().to_string(), "1/sin(z)");
    }
}
