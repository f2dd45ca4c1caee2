use super::Expr;

impl Expr {
    /// Complex derivative d/dz by the sum, product, quotient and chain rules.
    pub fn differentiate(&self) -> Expr {
        match self {
            Expr::Var => Expr::one(),
            Expr::Rational(_) | Expr::Pi | Expr::I => Expr::zero(),
            Expr::Neg(a) => Expr::neg(a.differentiate()),
            Expr::Add(a, b) => Expr::add(a.differentiate(), b.differentiate()),
            Expr::Mul(a, b) => {
                let (a, b) = (a.as_ref().clone(), b.as_ref().clone());
                Expr::add(Expr::mul(a.differentiate(), b.clone()), Expr::mul(a, b.differentiate()))
            }
            Expr::Div(a, b) => {
                let (a, b) = (a.as_ref().clone(), b.as_ref().clone());
                let num = Expr::sub(Expr::mul(a.differentiate(), b.clone()), Expr::mul(a, b.differentiate()));
                Expr::div(num, Expr::pow(b, 2))
            }
            Expr::Pow(a, n) => {
                let a = a.as_ref().clone();
                Expr::mul(Expr::mul(Expr::int(*n), Expr::pow(a.clone(), n - 1)), a.differentiate())
            }
            Expr::Exp(a) => Expr::mul(self.clone(), a.differentiate()),
            Expr::Sin(a) => Expr::mul(Expr::cos(a.as_ref().clone()), a.differentiate()),
            Expr::Cos(a) => Expr::neg(Expr::mul(Expr::sin(a.as_ref().clone()), a.differentiate())),
        }
    }
}
