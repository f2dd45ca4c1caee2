use super::Expr;

/// An expression written as `numer / denom` with both parts entire
/// (free of divisions and negative powers).
///
/// No common factors are cancelled, so the zero set of `numer` may
/// contain points that are not zeros of the original expression.  Zero
/// location only needs a superset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumerDenom {
    pub numer: Expr,
    pub denom: Expr,
}

impl Expr {
    pub fn numer_denom(&self) -> NumerDenom {
        let nd = |numer, denom| NumerDenom { numer, denom };
        match self {
            Expr::Var | Expr::Rational(_) | Expr::Pi | Expr::I => nd(self.clone(), Expr::one()),
            // arguments are entire by construction
            Expr::Exp(_) | Expr::Sin(_) | Expr::Cos(_) => nd(self.clone(), Expr::one()),
            Expr::Neg(a) => {
                let a = a.numer_denom();
                nd(Expr::neg(a.numer), a.denom)
            }
            Expr::Add(a, b) => {
                let (a, b) = (a.numer_denom(), b.numer_denom());
                if a.denom == b.denom {
                    return nd(Expr::add(a.numer, b.numer), a.denom);
                }
                nd(
                    Expr::add(Expr::mul(a.numer, b.denom.clone()), Expr::mul(b.numer, a.denom.clone())),
                    Expr::mul(a.denom, b.denom),
                )
            }
            Expr::Mul(a, b) => {
                let (a, b) = (a.numer_denom(), b.numer_denom());
                nd(Expr::mul(a.numer, b.numer), Expr::mul(a.denom, b.denom))
            }
            Expr::Div(a, b) => {
                let (a, b) = (a.numer_denom(), b.numer_denom());
                nd(Expr::mul(a.numer, b.denom), Expr::mul(a.denom, b.numer))
            }
            Expr::Pow(a, n) => {
                let a = a.numer_denom();
                if *n >= 0 {
                    nd(Expr::pow(a.numer, *n), Expr::pow(a.denom, *n))
                } else {
                    nd(Expr::pow(a.denom, -n), Expr::pow(a.numer, -n))
                }
            }
        }
    }
}
