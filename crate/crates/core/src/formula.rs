//! CNF and two-block QBF formulas, partial assignments, and their text formats.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Longest clause accepted by the gadget constructors.
pub const MAX_CLAUSE_WIDTH: usize = 3;

/// A signed reference to variable `x_var` (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal {
            var,
            positive: true,
        }
    }

    pub fn neg(var: usize) -> Self {
        Literal {
            var,
            positive: false,
        }
    }

    /// DIMACS-style signed integer.
    pub fn from_dimacs(code: i64) -> Option<Self> {
        if code == 0 {
            return None;
        }
        let var = usize::try_from(code.unsigned_abs()).ok()?;
        Some(Literal {
            var,
            positive: code > 0,
        })
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64;
        if self.positive {
            v
        } else {
            -v
        }
    }

    pub fn eval(self, value: bool) -> bool {
        value == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "x{}", self.var)
        } else {
            write!(f, "¬x{}", self.var)
        }
    }
}

/// A CNF formula over `x_1..x_num_vars` whose clauses hold 1 to 3 literals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<Literal>>,
}

impl CnfFormula {
    /// Rejects empty formulas, empty or over-wide clauses, and out-of-range literals.
    pub fn new(num_vars: usize, clauses: Vec<Vec<Literal>>) -> Result<Self> {
        if clauses.is_empty() {
            return Err(Error::Parse("formula needs at least one clause".into()));
        }
        for (j, clause) in clauses.iter().enumerate() {
            if clause.is_empty() || clause.len() > MAX_CLAUSE_WIDTH {
                return Err(Error::Parse(format!(
                    "clause {} has {} literals, expected 1 to {MAX_CLAUSE_WIDTH}",
                    j + 1,
                    clause.len()
                )));
            }
            for lit in clause {
                if lit.var == 0 || lit.var > num_vars {
                    return Err(Error::VariableOutOfRange {
                        var: lit.var,
                        num_vars,
                    });
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    /// Convenience constructor from DIMACS-style signed integers.
    pub fn from_ints(num_vars: usize, clauses: &[&[i64]]) -> Result<Self> {
        let clauses = clauses
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&x| {
                        Literal::from_dimacs(x)
                            .ok_or_else(|| Error::Parse("literal 0 inside a clause".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        CnfFormula::new(num_vars, clauses)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    pub fn num_literals(&self) -> usize {
        self.clauses.iter().map(Vec::len).sum()
    }

    /// Evaluates under a full assignment; `values[i]` is the value of `x_{i+1}`.
    pub fn eval(&self, values: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| l.eval(values[l.var - 1])))
    }

    /// Evaluates under a full assignment packed into bits (`x_{i+1}` at bit `i`).
    pub fn eval_bits(&self, bits: u64) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| l.eval((bits >> (l.var - 1)) & 1 == 1)))
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                out.push_str(&l.to_dimacs().to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, c) in self.clauses.iter().enumerate() {
            if j > 0 {
                write!(f, " ∧ ")?;
            }
            write!(f, "(")?;
            for (k, l) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ∨ ")?;
                }
                write!(f, "{l}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// `∃X ∀Y ¬φ(X, Y)` where the matrix `φ` is in CNF.
///
/// Variables `1..=exists.len()` need not be the existential ones; the
/// blocks list arbitrary disjoint variable indices of the matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Qbf2Formula {
    exists: Vec<usize>,
    forall: Vec<usize>,
    matrix: CnfFormula,
}

impl Qbf2Formula {
    pub fn new(exists: Vec<usize>, forall: Vec<usize>, matrix: CnfFormula) -> Result<Self> {
        let n = matrix.num_vars();
        let mut owner = vec![0u8; n + 1];
        for (block, vars) in [(1u8, &exists), (2u8, &forall)] {
            for &v in vars {
                if v == 0 || v > n {
                    return Err(Error::VariableOutOfRange { var: v, num_vars: n });
                }
                if owner[v] != 0 {
                    return Err(Error::Parse(format!("variable {v} quantified twice")));
                }
                owner[v] = block;
            }
        }
        if let Some(v) = (1..=n).find(|&v| owner[v] == 0) {
            return Err(Error::Parse(format!("variable {v} is not quantified")));
        }
        Ok(Qbf2Formula {
            exists,
            forall,
            matrix,
        })
    }

    pub fn exists_vars(&self) -> &[usize] {
        &self.exists
    }

    pub fn forall_vars(&self) -> &[usize] {
        &self.forall
    }

    pub fn matrix(&self) -> &CnfFormula {
        &self.matrix
    }

    pub fn to_qdimacs(&self) -> String {
        let body = self.matrix.to_dimacs();
        let (header, clauses) = body.split_once('\n').unwrap_or((&body, ""));
        let block = |tag: &str, vars: &[usize]| {
            let mut s = tag.to_string();
            for v in vars {
                s.push_str(&format!(" {v}"));
            }
            s.push_str(" 0\n");
            s
        };
        format!(
            "{header}\n{}{}{clauses}",
            block("e", &self.exists),
            block("a", &self.forall)
        )
    }
}

/// Truth values for some variables; the rest are undefined.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PartialAssignment {
    values: BTreeMap<usize, bool>,
}

impl PartialAssignment {
    pub fn new() -> Self {
        PartialAssignment::default()
    }

    pub fn with(mut self, var: usize, value: bool) -> Self {
        self.values.insert(var, value);
        self
    }

    pub fn set(&mut self, var: usize, value: bool) {
        self.values.insert(var, value);
    }

    pub fn get(&self, var: usize) -> Option<bool> {
        self.values.get(&var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Fails if some assigned variable lies outside `1..=num_vars`.
    pub fn check_range(&self, num_vars: usize) -> Result<()> {
        match self.values.keys().find(|&&v| v == 0 || v > num_vars) {
            Some(&var) => Err(Error::VariableOutOfRange { var, num_vars }),
            None => Ok(()),
        }
    }

    /// All `3^n` partial assignments over `x_1..x_n`.
    pub fn all(num_vars: usize) -> Vec<PartialAssignment> {
        let mut out = vec![PartialAssignment::new()];
        for v in 1..=num_vars {
            out = out
                .into_iter()
                .flat_map(|p| {
                    [
                        p.clone(),
                        p.clone().with(v, true),
                        p.with(v, false),
                    ]
                })
                .collect();
        }
        out
    }
}

struct Tokens<'a> {
    lines: std::iter::Peekable<std::str::Lines<'a>>,
}

fn tokens_of(line: &str) -> Result<Vec<i64>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad token `{t}`")))
        })
        .collect()
}

fn parse_header(lines: &mut Tokens<'_>) -> Result<(usize, usize)> {
    for line in lines.lines.by_ref() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() == 4 && parts[0] == "p" && parts[1] == "cnf" {
            let vars = parts[2]
                .parse()
                .map_err(|_| Error::Parse("bad variable count".into()))?;
            let clauses = parts[3]
                .parse()
                .map_err(|_| Error::Parse("bad clause count".into()))?;
            return Ok((vars, clauses));
        }
        return Err(Error::Parse(format!("expected `p cnf` header, found `{line}`")));
    }
    Err(Error::Parse("missing `p cnf` header".into()))
}

fn parse_clauses(lines: &mut Tokens<'_>, num_vars: usize, expected: usize) -> Result<CnfFormula> {
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for line in lines.lines.by_ref() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        for code in tokens_of(line)? {
            match Literal::from_dimacs(code) {
                Some(l) => current.push(l),
                None => clauses.push(std::mem::take(&mut current)),
            }
        }
    }
    if !current.is_empty() {
        return Err(Error::Parse("last clause is not terminated by 0".into()));
    }
    if clauses.len() != expected {
        return Err(Error::Parse(format!(
            "header announces {expected} clauses, found {}",
            clauses.len()
        )));
    }
    CnfFormula::new(num_vars, clauses)
}

/// Parses a DIMACS CNF file.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut t = Tokens {
        lines: text.lines().peekable(),
    };
    let (vars, clauses) = parse_header(&mut t)?;
    parse_clauses(&mut t, vars, clauses)
}

/// Parses a DIMACS CNF file with one `e ... 0` and one `a ... 0` line after
/// the header. Either block may be empty.
pub fn parse_qdimacs(text: &str) -> Result<Qbf2Formula> {
    let mut t = Tokens {
        lines: text.lines().peekable(),
    };
    let (vars, clauses) = parse_header(&mut t)?;
    let mut blocks: [Option<Vec<usize>>; 2] = [None, None];
    while let Some(line) = t.lines.peek() {
        let line = line.trim();
        let slot = if line.starts_with('e') {
            0
        } else if line.starts_with('a') {
            1
        } else if line.is_empty() || line.starts_with('c') {
            t.lines.next();
            continue;
        } else {
            break;
        };
        if blocks[slot].is_some() {
            return Err(Error::Parse("quantifier block given twice".into()));
        }
        let codes = tokens_of(&line[1..])?;
        match codes.split_last() {
            Some((0, vars)) => {
                let vars = vars
                    .iter()
                    .map(|&v| {
                        usize::try_from(v)
                            .ok()
                            .filter(|&v| v > 0)
                            .ok_or_else(|| Error::Parse(format!("bad quantified variable {v}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                blocks[slot] = Some(vars);
            }
            _ => return Err(Error::Parse("quantifier line must end with 0".into())),
        }
        t.lines.next();
    }
    let [Some(exists), Some(forall)] = blocks else {
        return Err(Error::Parse("need both an `e` and an `a` line".into()));
    };
    let matrix = parse_clauses(&mut t, vars, clauses)?;
    Qbf2Formula::new(exists, forall, matrix)
}
