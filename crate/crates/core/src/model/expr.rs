use std::fmt;
use std::ops;

use crate::int::Int;

pub type VarId = usize;

/// An arithmetic expression over integer variables.
///
/// Parsed constraints only use variables, literals, negation, addition,
/// subtraction and multiplication. `Pow`, `Root` and `Div` appear in
/// expressions built internally to describe reduction rules.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(VarId),
    Lit(Int),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Root(Box<Expr>, u32),
    Div(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(v: VarId) -> Expr {
        Expr::Var(v)
    }

    pub fn lit(v: impl Into<Int>) -> Expr {
        Expr::Lit(v.into())
    }

    /// `selfⁿ` written as a product of `n` factors.
    pub fn pow_mul(self, n: u32) -> Expr {
        assert!(n >= 1);
        let mut e = self.clone();
        for _ in 1..n {
            e = e * self.clone();
        }
        e
    }

    /// Sum of the given terms, `0` when there are none.
    pub fn sum(terms: impl IntoIterator<Item = Expr>) -> Expr {
        terms.into_iter().reduce(|a, b| a + b).unwrap_or_else(|| Expr::lit(0))
    }

    /// Product of the given factors, `1` when there are none.
    pub fn product(factors: impl IntoIterator<Item = Expr>) -> Expr {
        factors.into_iter().reduce(|a, b| a * b).unwrap_or_else(|| Expr::lit(1))
    }

    /// True when the expression only uses the constraint alphabet (no
    /// `Pow`, `Root` or `Div`).
    pub fn is_plain(&self) -> bool {
        match self {
            Expr::Var(_) | Expr::Lit(_) => true,
            Expr::Neg(e) => e.is_plain(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.is_plain() && b.is_plain(),
            Expr::Pow(..) | Expr::Root(..) | Expr::Div(..) => false,
        }
    }

    /// Evaluates the expression at an integer point.
    ///
    /// Division must be exact and roots must be integral, otherwise the
    /// result is `None`. An even root yields the non-negative root.
    pub fn eval(&self, point: &[Int]) -> Option<Int> {
        Some(match self {
            Expr::Var(v) => point[*v].clone(),
            Expr::Lit(c) => c.clone(),
            Expr::Neg(e) => -e.eval(point)?,
            Expr::Add(a, b) => &a.eval(point)? + &b.eval(point)?,
            Expr::Sub(a, b) => &a.eval(point)? - &b.eval(point)?,
            Expr::Mul(a, b) => &a.eval(point)? * &b.eval(point)?,
            Expr::Pow(e, n) => e.eval(point)?.pow(*n),
            Expr::Root(e, n) => {
                let v = e.eval(point)?;
                if v.is_negative() && n % 2 == 0 {
                    return None;
                }
                let r = if v.is_negative() { -v.abs().nth_root_floor(*n) } else { v.nth_root_floor(*n) };
                if r.pow(*n) != v {
                    return None;
                }
                r
            }
            Expr::Div(a, b) => {
                let (x, y) = (a.eval(point)?, b.eval(point)?);
                if y.is_zero() || !x.is_multiple_of(&y) {
                    return None;
                }
                x.div_exact(&y)
            }
        })
    }

    /// Variables occurring in the expression, in first-occurrence order.
    pub fn vars(&self) -> Vec<VarId> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<VarId>) {
        match self {
            Expr::Var(v) => {
                if !out.contains(v) {
                    out.push(*v)
                }
            }
            Expr::Lit(_) => {}
            Expr::Neg(e) | Expr::Pow(e, _) | Expr::Root(e, _) => e.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Renders the expression with variable names supplied by `name`.
    pub fn display<'a>(&'a self, name: &'a dyn Fn(VarId) -> String) -> impl fmt::Display + 'a {
        Shown { e: self, name }
    }
}

struct Shown<'a> {
    e: &'a Expr,
    name: &'a dyn Fn(VarId) -> String,
}

impl Shown<'_> {
    fn sub<'b>(&'b self, e: &'b Expr) -> Shown<'b> {
        Shown { e, name: self.name }
    }
}

impl fmt::Display for Shown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.e {
            Expr::Var(v) => f.write_str(&(self.name)(*v)),
            Expr::Lit(c) => write!(f, "{c}"),
            Expr::Neg(e) => write!(f, "-({})", self.sub(e)),
            Expr::Add(a, b) => write!(f, "({} + {})", self.sub(a), self.sub(b)),
            Expr::Sub(a, b) => write!(f, "({} - {})", self.sub(a), self.sub(b)),
            Expr::Mul(a, b) => write!(f, "{}*{}", self.sub(a), self.sub(b)),
            Expr::Pow(e, n) => write!(f, "({})^{n}", self.sub(e)),
            Expr::Root(e, n) => write!(f, "root{n}({})", self.sub(e)),
            Expr::Div(a, b) => write!(f, "({})/({})", self.sub(a), self.sub(b)),
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |v: VarId| format!("v{v}");
        let shown = Shown { e: self, name: &name };
        write!(f, "{shown}")
    }
}

impl ops::Add for Expr {
    type Output = Expr;
    fn add(self, o: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(o))
    }
}

impl ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, o: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(o))
    }
}

impl ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, o: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(o))
    }
}

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation() {
        let (x, y) = (Expr::var(0), Expr::var(1));
        let e = x.clone().pow_mul(3) * y.clone() - x.clone();
        let p = [Int::from(2), Int::from(5)];
        assert_eq!(e.eval(&p), Some(Int::from(38)));
        let d = Expr::Div(Box::new(y.clone()), Box::new(x.clone()));
        assert_eq!(d.eval(&p), None);
        let r = Expr::Root(Box::new(Expr::lit(-27)), 3);
        assert_eq!(r.eval(&p), Some(Int::from(-3)));
        assert_eq!(Expr::Root(Box::new(Expr::lit(8)), 2).eval(&p), None);
    }
}
