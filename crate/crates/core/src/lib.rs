//! Constraint propagation over integer intervals for polynomial constraints,
//! with branch and propagate search.
//!
//! ```
//! use intprop::search::{solve_all, SearchConfig};
//!
//! let csp = intprop::parse("var x in [1..10]; var y in [1..10]; constraint x * y = 4;").unwrap();
//! assert_eq!(solve_all(&csp, &SearchConfig::default()).unwrap().solutions.len(), 3);
//! ```

pub mod bench;
pub mod counters;
pub mod decompose;
pub mod engine;
pub mod int;
pub mod interval;
pub mod model;
pub mod rational;
pub mod rules;
pub mod search;

pub use counters::OpCounters;
pub use int::{ExtInt, Int};
pub use interval::{IntegerInterval, IntervalKind, IntervalUnion};
pub use model::{parse, Cmp, Csp, Expr, Goal, Polynomial, PolynomialConstraint, RelOp, VarId};
pub use rational::{QBound, Rational, RationalInterval, Side};

/// Chapters of the guide in `book/`, compiled here so their examples run as
/// doc tests.
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/intervals.md")]
    pub mod intervals {}
    #[doc = include_str!("../../../book/src/modelling.md")]
    pub mod modelling {}
    #[doc = include_str!("../../../book/src/rules.md")]
    pub mod rules {}
    #[doc = include_str!("../../../book/src/decompositions.md")]
    pub mod decompositions {}
    #[doc = include_str!("../../../book/src/search.md")]
    pub mod search {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
