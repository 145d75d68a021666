use std::fmt;

use rand::Rng;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CnfError {
    #[error("DIMACS line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("clause {0} has {1} literals, expected 1 to 3")]
    ClauseSize(usize, usize),
    #[error("literal {lit} refers to a variable outside 1..={n}")]
    VariableOutOfRange { lit: i64, n: usize },
    #[error("formula needs at least one variable")]
    NoVariables,
}

/// A variable index (0-based) with a sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    /// From a nonzero DIMACS literal: `3` is `x3`, `-3` is `not x3`.
    pub fn from_dimacs(lit: i64, n: usize) -> Result<Self, CnfError> {
        let var = lit.unsigned_abs() as usize;
        if lit == 0 || var > n {
            return Err(CnfError::VariableOutOfRange { lit, n });
        }
        Ok(Literal { var: var - 1, negated: lit < 0 })
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }

    pub fn holds(self, assignment: &[bool]) -> bool {
        assignment[self.var] != self.negated
    }
}

/// A 3-CNF formula over `n` variables. Shorter clauses are padded by
/// repeating their last literal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf3 {
    pub n: usize,
    pub clauses: Vec<[Literal; 3]>,
}

impl Cnf3 {
    /// Builds a formula from DIMACS-style signed literals.
    pub fn new(n: usize, clauses: &[Vec<i64>]) -> Result<Self, CnfError> {
        if n == 0 {
            return Err(CnfError::NoVariables);
        }
        let clauses = clauses
            .iter()
            .enumerate()
            .map(|(j, c)| {
                if c.is_empty() || c.len() > 3 {
                    return Err(CnfError::ClauseSize(j, c.len()));
                }
                let lits = c.iter().map(|&l| Literal::from_dimacs(l, n)).collect::<Result<Vec<_>, _>>()?;
                let last = lits[lits.len() - 1];
                Ok([lits[0], *lits.get(1).unwrap_or(&last), last])
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Cnf3 { n, clauses })
    }

    /// `c` clauses, each on three distinct variables (fewer when `n < 3`)
    /// with independent uniform signs.
    pub fn random<R: Rng + ?Sized>(n: usize, c: usize, rng: &mut R) -> Result<Self, CnfError> {
        if n == 0 {
            return Err(CnfError::NoVariables);
        }
        let width = n.min(3);
        let clauses = (0..c)
            .map(|_| {
                let vars = rand::seq::index::sample(rng, n, width).into_vec();
                let mut lit = |k: usize| Literal { var: vars[k.min(width - 1)], negated: rng.gen() };
                [lit(0), lit(1), lit(2)]
            })
            .collect();
        Ok(Cnf3 { n, clauses })
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.holds(assignment)))
    }

    /// Number of satisfying assignments, by enumeration.
    pub fn count_models(&self) -> u64 {
        let mut a = vec![false; self.n];
        (0u64..1 << self.n)
            .filter(|&bits| {
                for (i, x) in a.iter_mut().enumerate() {
                    *x = bits >> i & 1 == 1;
                }
                self.satisfied_by(&a)
            })
            .count() as u64
    }

    /// Parses DIMACS CNF. Clauses end with `0` and may span lines; a missing
    /// `p cnf` header is an error.
    pub fn parse_dimacs(text: &str) -> Result<Self, CnfError> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses: Vec<Vec<i64>> = Vec::new();
        let mut current: Vec<i64> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let err = |msg: &str| CnfError::Parse { line: i + 1, msg: msg.to_string() };
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                match parts.as_slice() {
                    ["cnf", n, c] => {
                        let n = n.parse().map_err(|_| err("bad variable count"))?;
                        let c = c.parse().map_err(|_| err("bad clause count"))?;
                        header = Some((n, c));
                    }
                    _ => return Err(err("expected `p cnf <vars> <clauses>`")),
                }
                continue;
            }
            if header.is_none() {
                return Err(err("clause before `p cnf` header"));
            }
            for tok in line.split_whitespace() {
                let lit: i64 = tok.parse().map_err(|_| err(&format!("bad literal `{tok}`")))?;
                if lit == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else {
                    current.push(lit);
                }
            }
        }
        let Some((n, c)) = header else {
            return Err(CnfError::Parse { line: 0, msg: "missing `p cnf` header".into() });
        };
        if !current.is_empty() {
            clauses.push(current);
        }
        if clauses.len() != c {
            return Err(CnfError::Parse {
                line: 0,
                msg: format!("header declares {c} clauses, found {}", clauses.len()),
            });
        }
        Cnf3::new(n, &clauses)
    }

    /// DIMACS text with every clause written as three literals.
    pub fn to_dimacs(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Cnf3 {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(out, "p cnf {} {}", self.n, self.clauses.len())?;
        for c in &self.clauses {
            writeln!(out, "{} {} {} 0", c[0].to_dimacs(), c[1].to_dimacs(), c[2].to_dimacs())?;
        }
        Ok(())
    }
}
