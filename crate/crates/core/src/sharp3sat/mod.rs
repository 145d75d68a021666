//! Counting satisfying assignments of 3-CNF formulas.
//!
//! A pair `(phi, N)` is reduced to the sumcheck claim
//! `sum_{x in {0,1}^n} A(x) = N` over the smallest prime field larger than
//! `2^n`, with `m = n`, `d = 3c` and `H = {0, 1}`, and proven with the
//! zero-knowledge sumcheck. The arithmetization `A` serves as the `F`
//! oracle for both the verifier and the simulator.

mod arith;
mod cnf;

use std::sync::Arc;

pub use arith::{pick_prime, Arithmetization, MAX_VARS};
pub use cnf::{Cnf3, CnfError, Literal};

use crate::algebra::{Fe, Field};
use crate::protocol::{Coins, Execution, ProtocolError};
use crate::sumcheck::{run_real, CheatingProver, PzkProver, PzkSimulator, PzkVerifier, SumcheckInstance};

impl From<CnfError> for ProtocolError {
    fn from(e: CnfError) -> Self {
        ProtocolError::Invalid(e.to_string())
    }
}

/// A counting claim `(phi, N)` and the sumcheck instance it reduces to.
#[derive(Clone, Debug)]
pub struct CountClaim {
    pub cnf: Cnf3,
    pub count: u64,
    pub inst: Arc<SumcheckInstance>,
}

impl CountClaim {
    /// Fails unless `3cn/q < 1/2`, `N <= 2^n` and `n <= MAX_VARS`.
    pub fn new(cnf: Cnf3, count: u64) -> Result<Self, ProtocolError> {
        Self::build(cnf, count, true)
    }

    /// Skips the `3cn/q < 1/2` check, for micro instances used in exact audits.
    pub fn new_unchecked(cnf: Cnf3, count: u64) -> Result<Self, ProtocolError> {
        Self::build(cnf, count, false)
    }

    fn build(cnf: Cnf3, count: u64, checked: bool) -> Result<Self, ProtocolError> {
        let q =
            pick_prime(cnf.n).ok_or_else(|| ProtocolError::Invalid(format!("n = {} outside 1..={MAX_VARS}", cnf.n)))?;
        if cnf.num_clauses() == 0 {
            return Err(ProtocolError::Invalid("formula has no clauses".into()));
        }
        if count > 1 << cnf.n {
            return Err(ProtocolError::Invalid(format!("count {count} exceeds 2^{}", cnf.n)));
        }
        let f = Field::prime(q)?;
        let poly = Arithmetization::new(&cnf);
        let d = poly.degree_bound();
        let h = vec![Fe(0), Fe(1)];
        let v = f.from_u64(count);
        let inst = if checked {
            SumcheckInstance::new(&f, cnf.n, d, h, v, Arc::new(poly))?
        } else {
            SumcheckInstance::new_unchecked(&f, cnf.n, d, h, v, Arc::new(poly))?
        };
        Ok(CountClaim { cnf, count, inst: Arc::new(inst) })
    }

    pub fn field(&self) -> &Field {
        &self.inst.field
    }

    /// The soundness bound `3 n d / q`.
    pub fn soundness_bound(&self) -> f64 {
        3.0 * (self.inst.m * self.inst.d) as f64 / self.inst.field.order() as f64
    }

    pub fn prover(&self, coins: &mut dyn Coins) -> Result<PzkProver, ProtocolError> {
        PzkProver::new(self.inst.clone(), coins)
    }

    pub fn cheating_prover(&self, coins: &mut dyn Coins) -> Result<CheatingProver, ProtocolError> {
        CheatingProver::new(self.inst.clone(), true, coins)
    }

    pub fn verifier(&self) -> PzkVerifier {
        PzkVerifier::new(&self.inst)
    }

    pub fn simulator(&self) -> Result<PzkSimulator, ProtocolError> {
        PzkSimulator::new(self.inst.clone())
    }

    /// Honest prover against the honest verifier.
    pub fn run_honest(&self, coins: &mut dyn Coins) -> Result<Execution, ProtocolError> {
        run_real(&self.inst, &self.verifier(), coins)
    }

    /// Best cheating prover against the honest verifier.
    pub fn run_cheat(&self, coins: &mut dyn Coins) -> Result<Execution, ProtocolError> {
        let mut p = self.cheating_prover(coins)?;
        crate::protocol::run_interactive(&self.inst.field, self.inst.public_input(), &self.verifier(), &mut p, coins)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{Party, SeededCoins};
    use crate::sumcheck::{
        audit_exact_views, run_simulated, MaliciousStrategy, MaliciousVerifier, PolyOracle, ORACLE_F,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pick_prime_examples() {
        assert_eq!(pick_prime(3), Some(11));
        assert_eq!(pick_prime(4), Some(17));
        assert_eq!(pick_prime(1), Some(3));
        assert_eq!(pick_prime(0), None);
        assert_eq!(pick_prime(31), None);
        for n in 1..=MAX_VARS {
            let q = pick_prime(n).unwrap();
            assert!(q > 1 << n && q <= 1 << (2 * n), "{n}");
        }
    }

    #[test]
    fn arithmetization_examples() {
        let f = Field::prime(11).unwrap();
        let or3 = Arithmetization::new(&Cnf3::new(3, &[vec![1, 2, 3]]).unwrap());
        assert_eq!(or3.eval(&f, &[Fe(1), Fe(1), Fe(1)]), Fe(1));
        assert_eq!(or3.eval(&f, &[Fe(0), Fe(0), Fe(0)]), Fe(0));
        let contradiction = Arithmetization::new(&Cnf3::new(1, &[vec![1], vec![-1]]).unwrap());
        let f3 = Field::prime(3).unwrap();
        assert_eq!(contradiction.eval(&f3, &[Fe(0)]), Fe(0));
        assert_eq!(contradiction.eval(&f3, &[Fe(1)]), Fe(0));
        assert_ne!(contradiction.eval(&f3, &[Fe(2)]), Fe(0));
    }

    #[test]
    fn boolean_sums_match_model_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for trial in 0..40 {
            let n = 1 + trial % 12;
            let c = 1 + trial % 7;
            let cnf = Cnf3::random(n, c, &mut rng).unwrap();
            let q = pick_prime(n).unwrap();
            let f = Field::prime(q).unwrap();
            let a = Arithmetization::new(&cnf);
            let sum = a.partial_sum(&f, &[], &[Fe(0), Fe(1)]);
            assert_eq!(sum, f.from_u64(cnf.count_models()), "n={n} c={c}");
            for bits in 0u64..(1 << n).min(64) {
                let x: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
                let pt: Vec<Fe> = x.iter().map(|&b| Fe(b as u64)).collect();
                assert_eq!(a.eval(&f, &pt), Fe(cnf.satisfied_by(&x) as u64));
            }
        }
    }

    #[test]
    fn arithmetization_degree_is_below_the_bound() {
        // x1 in every clause, in both polarities and repeated
        let cnf = Cnf3::new(2, &[vec![1, 1, 1], vec![-1, 1, 2], vec![1, -1, -1]]).unwrap();
        let a = Arithmetization::new(&cnf);
        let f = Field::prime(pick_prime(8).unwrap()).unwrap();
        // degree in x1 along the line (t, 5) is below 9: interpolation at 9
        // points predicts a tenth
        let pts: Vec<(Fe, Fe)> = (0..10).map(|t| (Fe(t), a.eval(&f, &[Fe(t), Fe(5)]))).collect();
        let p = crate::algebra::UniPoly::interpolate(&f, &pts[..9]).unwrap();
        assert_eq!(p.eval(&f, pts[9].0), pts[9].1);
        assert!(p.degree().unwrap_or(0) <= 6);
    }

    #[test]
    fn dimacs_roundtrip_and_errors() {
        let text = "c example\np cnf 4 3\n1 -2 3 0\n-4\n 2 0\n1 0\n";
        let cnf = Cnf3::parse_dimacs(text).unwrap();
        assert_eq!(cnf.n, 4);
        assert_eq!(cnf.clauses[1][2], Literal { var: 1, negated: false });
        assert_eq!(cnf.clauses[2], [Literal { var: 0, negated: false }; 3]);
        assert_eq!(Cnf3::parse_dimacs(&cnf.to_dimacs()).unwrap(), cnf);
        assert!(matches!(Cnf3::parse_dimacs("1 2 0\n"), Err(CnfError::Parse { .. })));
        assert!(matches!(Cnf3::parse_dimacs("p cnf 2 1\n1 3 0\n"), Err(CnfError::VariableOutOfRange { .. })));
        assert!(matches!(Cnf3::parse_dimacs("p cnf 4 1\n1 2 3 4 0\n"), Err(CnfError::ClauseSize(0, 4))));
        assert!(matches!(Cnf3::parse_dimacs("p cnf 4 2\n1 2 3 0\n"), Err(CnfError::Parse { .. })));
    }

    #[test]
    fn claims_validate_parameters() {
        let cnf = Cnf3::new(3, &[vec![1, 2, 3]]).unwrap();
        // 3cn = 9 against q = 11
        assert!(CountClaim::new(cnf.clone(), 7).is_err());
        assert!(CountClaim::new_unchecked(cnf.clone(), 7).is_ok());
        assert!(CountClaim::new_unchecked(cnf, 9).is_err());
        let wide = Cnf3::new(8, &[vec![1, 2, 3]]).unwrap();
        assert!(CountClaim::new(wide, 224).unwrap().inst.is_yes());
    }

    #[test]
    fn honest_and_simulated_runs_accept_correct_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (n, c, simulate) in [(5, 1, true), (6, 1, true), (7, 2, false), (8, 1, true)] {
            let cnf = Cnf3::random(n, c, &mut rng).unwrap();
            let claim = CountClaim::new(cnf.clone(), cnf.count_models()).unwrap();
            for seed in 0..3 {
                let exec = claim.run_honest(&mut SeededCoins::new(seed)).unwrap();
                assert!(exec.decision, "n={n} c={c}");
                // one F query, at the final point
                assert_eq!(exec.counts.get(ORACLE_F), Some(&1));
            }
            if simulate {
                let run = run_simulated(&claim.inst, &claim.verifier(), &mut SeededCoins::new(1)).unwrap();
                assert!(run.exec.decision);
                assert_eq!(run.simulator_queries(), run.verifier_queries());
                let to_verifier = run.exec.view.rounds.iter().filter(|m| m.to == Party::Verifier);
                assert!(to_verifier.clone().all(|m| m.payload.len() == 3 * c));
            }
        }
    }

    #[test]
    fn off_by_one_counts_are_rejected_mostly() {
        let cnf = Cnf3::new(8, &[vec![1, -2, 3]]).unwrap();
        let claim = CountClaim::new(cnf.clone(), cnf.count_models() + 1).unwrap();
        let trials = 300;
        let wins = (0..trials).filter(|&s| claim.run_cheat(&mut SeededCoins::new(s)).unwrap().decision).count();
        let bound = claim.soundness_bound();
        let sigma = crate::stats::binomial_sigma(bound, trials);
        assert!((wins as f64) / (trials as f64) <= bound + 3.0 * sigma, "{wins} / {trials}");
    }

    #[test]
    fn micro_claim_exact_audit() {
        let cnf = Cnf3::new(2, &[vec![1, -2]]).unwrap();
        let claim = CountClaim::new_unchecked(cnf, 3).unwrap();
        assert!(claim.inst.is_yes());
        let v = MaliciousVerifier::new(MaliciousStrategy::PeekBeforeChallenge, &claim.inst);
        let report = audit_exact_views(&claim.inst, &v, 32, 2_000_000).unwrap();
        assert!(report.equal);
        assert_eq!(report.paths.0, 5usize.pow(8));
    }
}
