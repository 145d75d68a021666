use crate::algebra::{is_prime, Fe, Field};
use crate::sumcheck::PolyOracle;

use super::cnf::{Cnf3, Literal};

/// Largest variable count accepted by [`pick_prime`].
pub const MAX_VARS: usize = 30;

/// The smallest prime above `2^n`, for `1 <= n <= MAX_VARS`.
pub fn pick_prime(n: usize) -> Option<u64> {
    if n == 0 || n > MAX_VARS {
        return None;
    }
    ((1u64 << n) + 1..).find(|&q| is_prime(q))
}

/// The arithmetization `A(x) = prod_j (1 - prod_{l in C_j} (1 - l(x)))`
/// with `l(x) = x_i` for a positive literal and `1 - x_i` for a negated one.
///
/// Repeated literals within a clause are counted once, so every variable
/// has degree at most 2 per clause and the individual degree stays below
/// `3c`.
#[derive(Clone, Debug)]
pub struct Arithmetization {
    n: usize,
    clauses: Vec<Vec<Literal>>,
}

impl Arithmetization {
    pub fn new(cnf: &Cnf3) -> Self {
        let clauses = cnf
            .clauses
            .iter()
            .map(|c| {
                let mut lits = c.to_vec();
                lits.sort();
                lits.dedup();
                lits
            })
            .collect();
        Arithmetization { n: cnf.n, clauses }
    }

    /// The coefficient count `d = 3c` used for the sumcheck.
    pub fn degree_bound(&self) -> usize {
        3 * self.clauses.len()
    }
}

impl PolyOracle for Arithmetization {
    fn num_vars(&self) -> usize {
        self.n
    }

    fn eval(&self, f: &Field, x: &[Fe]) -> Fe {
        let one = f.one();
        self.clauses.iter().fold(one, |acc, clause| {
            let unsat = clause.iter().fold(one, |p, l| {
                let xi = x[l.var];
                f.mul(p, if l.negated { xi } else { f.sub(one, xi) })
            });
            f.mul(acc, f.sub(one, unsat))
        })
    }
}
