//! Constraint model: expressions, polynomial normal form, CSPs and the
//! problem-file parser.

pub mod csp;
pub mod expr;
pub mod parser;
pub mod poly;

pub use csp::{Csp, Goal, SourceConstraint, Variable};
pub use expr::{Expr, VarId};
pub use parser::{parse, ParseError};
pub use poly::{normalize, Cmp, Monomial, Normalized, Polynomial, PolynomialConstraint, PowerProduct, RelOp};
