//! Benchmark problems and run reports.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::decompose::Variant;
use crate::interval::IntegerInterval;
use crate::model::{Cmp, Csp, Expr, Goal, VarId};
use crate::search::SearchStats;

/// The built-in problems.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Benchmark {
    /// Numbers up to the bound that are a sum of four distinct cubes.
    Cubes { max: i64 },
    /// Maximize `2x·y - z` subject to `x³ + y² = z³`.
    Opt { max: i64 },
    /// `A/BC + D/EF + G/HI = 1` with distinct nonzero digits.
    Fractions,
    /// `KYOTO + KYOTO + KYOTO = TOKYO` in some base up to `max_base`.
    Kyoto { max_base: i64 },
    /// `n` numbers in `[1..n]` with the sum and product of `1..n`.
    Sumprod { n: u32 },
}

impl Benchmark {
    pub fn name(&self) -> &'static str {
        match self {
            Benchmark::Cubes { .. } => "cubes",
            Benchmark::Opt { .. } => "opt",
            Benchmark::Fractions => "fractions",
            Benchmark::Kyoto { .. } => "kyoto",
            Benchmark::Sumprod { .. } => "sumprod",
        }
    }

    /// The problem at its standard size; `n` sizes sumprod.
    pub fn standard(name: &str, n: u32) -> Option<Benchmark> {
        Some(match name {
            "cubes" => Benchmark::Cubes { max: 100_000 },
            "opt" => Benchmark::Opt { max: 100_000 },
            "fractions" => Benchmark::Fractions,
            "kyoto" => Benchmark::Kyoto { max_base: 100 },
            "sumprod" => Benchmark::Sumprod { n },
            _ => return None,
        })
    }

    pub fn build(&self) -> Csp {
        match *self {
            Benchmark::Cubes { max } => cubes(max),
            Benchmark::Opt { max } => opt(max),
            Benchmark::Fractions => fractions(),
            Benchmark::Kyoto { max_base } => kyoto(max_base),
            Benchmark::Sumprod { n } => sumprod(n),
        }
    }
}

fn v(id: VarId) -> Expr {
    Expr::var(id)
}

fn c(k: i64) -> Expr {
    Expr::lit(k)
}

pub fn cubes(max: i64) -> Csp {
    let mut csp = Csp::new();
    let x: Vec<VarId> = (1..=4).map(|i| csp.add_var(format!("x{i}"), IntegerInterval::UNBOUNDED)).collect();
    let n = csp.add_var("n", IntegerInterval::new(1, max));
    csp.add_constraint(c(1), Cmp::Le, v(x[0]));
    for i in 0..3 {
        csp.add_constraint(v(x[i]), Cmp::Le, v(x[i + 1]) - c(1));
    }
    csp.add_constraint(v(x[3]), Cmp::Le, v(n));
    csp.add_constraint(Expr::sum(x.iter().map(|&xi| v(xi).pow_mul(3))), Cmp::Eq, v(n));
    csp
}

pub fn opt(max: i64) -> Csp {
    let mut csp = Csp::new();
    let [x, y, z] = ["x", "y", "z"].map(|name| csp.add_var(name, IntegerInterval::new(1, max)));
    csp.add_constraint(v(x).pow_mul(3) + v(y).pow_mul(2), Cmp::Eq, v(z).pow_mul(3));
    csp.goal = Goal::Maximize(c(2) * v(x) * v(y) - v(z));
    csp
}

pub fn fractions() -> Csp {
    let mut csp = Csp::new();
    let d: Vec<VarId> = "ABCDEFGHI".chars().map(|l| csp.add_var(l.to_string(), IntegerInterval::new(1, 9))).collect();
    let [a, b, cc, dd, e, f, g, h, i] = [0, 1, 2, 3, 4, 5, 6, 7, 8].map(|k| d[k]);
    let two = |p: VarId, q: VarId| c(10) * v(p) + v(q);
    let (bc, ef, hi) = (two(b, cc), two(e, f), two(h, i));
    csp.add_constraint(
        v(a) * ef.clone() * hi.clone() + v(dd) * bc.clone() * hi.clone() + v(g) * bc.clone() * ef.clone(),
        Cmp::Eq,
        bc.clone() * ef.clone() * hi.clone(),
    );
    csp.add_constraint(v(a) * ef.clone(), Cmp::Ge, v(dd) * bc.clone());
    csp.add_constraint(v(dd) * hi.clone(), Cmp::Ge, v(g) * ef.clone());
    csp.add_constraint(c(3) * v(a), Cmp::Ge, bc);
    csp.add_constraint(c(3) * v(g), Cmp::Le, hi);
    for p in 0..9 {
        for q in p + 1..9 {
            csp.add_constraint(v(d[p]), Cmp::Ne, v(d[q]));
        }
    }
    csp
}

pub fn kyoto(max_base: i64) -> Csp {
    let mut csp = Csp::new();
    // The base comes first so that search fixes it before any digit.
    let n = csp.add_var("B", IntegerInterval::new(2, max_base));
    let k = csp.add_var("K", IntegerInterval::new(1, max_base - 1));
    let y = csp.add_var("Y", IntegerInterval::new(0, max_base - 1));
    let o = csp.add_var("O", IntegerInterval::new(0, max_base - 1));
    let t = csp.add_var("T", IntegerInterval::new(1, max_base - 1));
    let word = |ds: [VarId; 5]| Expr::sum(ds.iter().enumerate().map(|(p, &dg)| v(dg) * pow(n, 4 - p as u32)));
    csp.add_constraint(c(3) * word([k, y, o, t, o]), Cmp::Eq, word([t, o, k, y, o]));
    let digits = [k, y, o, t];
    for p in 0..4 {
        for q in p + 1..4 {
            csp.add_constraint(v(digits[p]), Cmp::Ne, v(digits[q]));
        }
    }
    for dg in digits {
        csp.add_constraint(v(dg), Cmp::Lt, v(n));
    }
    csp
}

fn pow(x: VarId, n: u32) -> Expr {
    if n == 0 {
        c(1)
    } else {
        v(x).pow_mul(n)
    }
}

/// The constants `1..n` are fixed variables, so their product is only ever
/// computed by propagation.
pub fn sumprod(n: u32) -> Csp {
    let mut csp = Csp::new();
    let x: Vec<VarId> = (1..=n).map(|i| csp.add_var(format!("x{i}"), IntegerInterval::new(1, n))).collect();
    let k: Vec<VarId> = (1..=n).map(|i| csp.add_var(format!("c{i}"), IntegerInterval::new(i, i))).collect();
    csp.add_constraint(Expr::sum(x.iter().map(|&xi| v(xi))), Cmp::Eq, Expr::sum(k.iter().map(|&ci| v(ci))));
    csp.add_constraint(Expr::product(x.iter().map(|&xi| v(xi))), Cmp::Eq, Expr::product(k.iter().map(|&ci| v(ci))));
    for w in x.windows(2) {
        csp.add_constraint(v(w[0]), Cmp::Le, v(w[1]));
    }
    csp
}

/// Statistics of one run in reportable form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StatsReport {
    pub problem: String,
    pub variant: Variant,
    pub nvar: usize,
    #[serde(rename = "nDRF")]
    pub ndrf: usize,
    pub nodes: u64,
    pub solutions: u64,
    pub drf_applications: u64,
    pub percent_effective: f64,
    /// Seconds.
    pub elapsed: f64,
    pub root: u64,
    pub exp: u64,
    pub div: u64,
    #[serde(rename = "multI")]
    pub mult_i: u64,
    #[serde(rename = "multF")]
    pub mult_f: u64,
    pub sum: u64,
    pub q_div: u64,
    pub q_sum: u64,
    pub total: u64,
    pub complete: bool,
}

impl StatsReport {
    pub fn new(problem: &str, variant: Variant, stats: &SearchStats, elapsed: f64) -> StatsReport {
        let k = &stats.counters;
        let percent_effective = if stats.drf_applications == 0 {
            0.0
        } else {
            100.0 * stats.drf_effective as f64 / stats.drf_applications as f64
        };
        StatsReport {
            problem: problem.to_string(),
            variant,
            nvar: stats.nvar,
            ndrf: stats.ndrf,
            nodes: stats.nodes,
            solutions: stats.solutions,
            drf_applications: stats.drf_applications,
            percent_effective,
            elapsed,
            root: k.root,
            exp: k.exp,
            div: k.div,
            mult_i: k.mult_i,
            mult_f: k.mult_f,
            sum: k.sum,
            q_div: k.q_div,
            q_sum: k.q_sum,
            total: k.total(),
            complete: stats.complete,
        }
    }
}

const COLUMNS: [&str; 19] = [
    "problem", "variant", "nvar", "nDRF", "nodes", "solutions", "drf_applications", "percent_effective", "elapsed", "root",
    "exp", "div", "multI", "multF", "sum", "q_div", "q_sum", "total", "complete",
];

fn fields(r: &StatsReport) -> Vec<String> {
    vec![
        r.problem.clone(),
        r.variant.to_string(),
        r.nvar.to_string(),
        r.ndrf.to_string(),
        r.nodes.to_string(),
        r.solutions.to_string(),
        r.drf_applications.to_string(),
        format!("{:.2}", r.percent_effective),
        format!("{:.3}", r.elapsed),
        r.root.to_string(),
        r.exp.to_string(),
        r.div.to_string(),
        r.mult_i.to_string(),
        r.mult_f.to_string(),
        r.sum.to_string(),
        r.q_div.to_string(),
        r.q_sum.to_string(),
        r.total.to_string(),
        r.complete.to_string(),
    ]
}

/// Comma separated, with a header line.
pub fn to_csv(reports: &[StatsReport]) -> String {
    let mut out = COLUMNS.join(",");
    out.push('\n');
    for r in reports {
        out.push_str(&fields(r).join(","));
        out.push('\n');
    }
    out
}

/// Aligned columns for reading in a terminal.
pub fn to_table(reports: &[StatsReport]) -> String {
    let rows: Vec<Vec<String>> = reports.iter().map(fields).collect();
    let widths: Vec<usize> =
        (0..COLUMNS.len()).map(|j| rows.iter().map(|r| r[j].len()).chain([COLUMNS[j].len()]).max().unwrap_or(0)).collect();
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        for (j, cell) in cells.iter().enumerate() {
            if j < 2 {
                let _ = write!(out, "{:<w$}  ", cell, w = widths[j]);
            } else {
                let _ = write!(out, "{:>w$}  ", cell, w = widths[j]);
            }
        }
        let trimmed = out.trim_end().len();
        out.truncate(trimmed);
        out.push('\n');
    };
    line(COLUMNS.to_vec(), &mut out);
    for r in &rows {
        line(r.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

/// Parses `du`, `fe`, ... or `all`.
pub fn parse_variants(s: &str) -> Result<Vec<Variant>, String> {
    if s == "all" {
        return Ok(Variant::ALL.to_vec());
    }
    s.split(',').map(Variant::from_str).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RelOp;

    #[test]
    fn shapes() {
        let cubes = cubes(100_000);
        assert_eq!((cubes.num_vars(), cubes.constraints.len()), (5, 6));
        let f = fractions();
        assert_eq!(f.num_vars(), 9);
        let ops: Vec<RelOp> = f.constraints.iter().map(|c| c.op).collect();
        assert_eq!(ops.iter().filter(|&&o| o == RelOp::Eq).count(), 1);
        assert_eq!(ops.iter().filter(|&&o| o == RelOp::Leq).count(), 4);
        assert_eq!(ops.iter().filter(|&&o| o == RelOp::Neq).count(), 36);
        let k = kyoto(100);
        assert_eq!(k.constraints.len(), 11);
        assert_eq!(k.constraints.iter().filter(|c| c.op == RelOp::Leq && c.lhs.is_linear()).count(), 4);
        assert_eq!(sumprod(14).num_vars(), 28);
    }

    #[test]
    fn report_formats() {
        let stats = SearchStats { nvar: 2, ndrf: 3, nodes: 5, drf_applications: 4, drf_effective: 1, complete: true, ..Default::default() };
        let r = StatsReport::new("p", Variant::FullExponentiation, &stats, 0.5);
        assert_eq!(r.percent_effective, 25.0);
        let csv = to_csv(&[r.clone()]);
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.lines().nth(1).unwrap().starts_with("p,fe,2,3,5,0,4,25.00,0.500,"));
        assert_eq!(to_table(&[r]).lines().count(), 2);
    }
}
