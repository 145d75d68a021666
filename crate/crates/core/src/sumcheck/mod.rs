//! Classic sumcheck and its perfect zero-knowledge variant.
//!
//! In the zero-knowledge protocol the prover first commits to a random mask
//! `R` of individual degree `< d` summing to zero on `H^m` (the oracle
//! [`ORACLE_PI`]), receives a random `rho` and proves the claim
//! `sum Q = rho v` for `Q = rho F + R` by the classic protocol. The verifier
//! checks that the oracle is close to low degree and self-corrects it at
//! the final point. The straightline [`PzkSimulator`] answers everything
//! from the conditional sampler of the partial-sum code, querying `F` once
//! per distinct verifier query.

mod cheat;
mod classic;
mod instance;
mod malicious;
mod mask;
mod pzk;

use std::collections::BTreeSet;
use std::sync::Arc;

pub use cheat::{CheatingProver, CorruptedProver};
pub use classic::{verify_rounds, ClassicProver, ClassicVerifier, ORACLE_F};
pub use instance::{eval_coeffs, field_label, round_poly, sum_over, PolyOracle, SumcheckInstance};
pub use malicious::{MaliciousStrategy, MaliciousVerifier};
pub use mask::{designated_monomial, sample_mask, sample_mask_explicit, zero_sum_session, MaskOracle, MASK_COEFF_CAP};
pub use pzk::{
    distinct_coins, individual_degree_test, self_correct, PzkProver, PzkSimulator, PzkVerifier, LDT_REPS, ORACLE_PI,
    SELF_CORRECT_TRIALS,
};

use crate::algebra::Fe;
use crate::detect::QueryPoint;
use crate::protocol::{
    audit_chi_square, audit_exact, run_interactive, AuditReport, Coins, EnumCoins, Execution, ProtocolError,
    SeededCoins, Verifier, View,
};

/// Runs `verifier` against the honest zero-knowledge prover.
pub fn run_real(
    inst: &Arc<SumcheckInstance>,
    verifier: &dyn Verifier,
    coins: &mut dyn Coins,
) -> Result<Execution, ProtocolError> {
    let mut prover = PzkProver::new(inst.clone(), coins)?;
    run_interactive(&inst.field, inst.public_input(), verifier, &mut prover, coins)
}

/// A simulated execution together with the simulator's queries to `F`.
#[derive(Clone, Debug)]
pub struct SimulatedRun {
    pub exec: Execution,
    pub f_log: Vec<Vec<Fe>>,
}

impl SimulatedRun {
    pub fn simulator_queries(&self) -> usize {
        self.f_log.len()
    }

    /// Distinct verifier queries to `F` or the mask oracle.
    pub fn verifier_queries(&self) -> usize {
        self.exec.distinct_queries()
    }
}

/// Runs `verifier` against the simulator and checks the query accounting:
/// the simulator queries `F` exactly once per distinct verifier query and
/// only at points the verifier queried.
pub fn run_simulated(
    inst: &Arc<SumcheckInstance>,
    verifier: &dyn Verifier,
    coins: &mut dyn Coins,
) -> Result<SimulatedRun, ProtocolError> {
    let mut sim = PzkSimulator::new(inst.clone())?;
    let exec = run_interactive(&inst.field, inst.public_input(), verifier, &mut sim, coins)?;
    let run = SimulatedRun { exec, f_log: sim.f_log().to_vec() };
    if run.simulator_queries() != run.verifier_queries() {
        return Err(ProtocolError::Accounting(format!(
            "simulator made {} queries to F, verifier made {}",
            run.simulator_queries(),
            run.verifier_queries()
        )));
    }
    let asked: BTreeSet<&QueryPoint> = run.exec.view.queries.iter().map(|q| &q.point).collect();
    if let Some(p) = run.f_log.iter().find(|p| !asked.contains(&QueryPoint::Tuple(p.to_vec()))) {
        return Err(ProtocolError::Accounting(format!("simulator queried F at unasked point {p:?}")));
    }
    Ok(run)
}

/// Exact comparison of real and simulated view distributions by enumerating
/// all prover, simulator and verifier coins.
pub fn audit_exact_views(
    inst: &Arc<SumcheckInstance>,
    verifier: &dyn Verifier,
    budget: usize,
    max_paths: u64,
) -> Result<AuditReport, ProtocolError> {
    audit_exact(
        budget,
        max_paths,
        |c: &mut EnumCoins| Ok(run_real(inst, verifier, c)?.view.canonical()),
        |c: &mut EnumCoins| Ok(run_simulated(inst, verifier, c)?.exec.view.canonical()),
    )
}

/// Chi-square comparison of real and simulated views under `project`,
/// which maps a view to one key per projection.
pub fn audit_chi_square_views<V, P>(
    inst: &Arc<SumcheckInstance>,
    verifier: &V,
    samples: u64,
    alpha: f64,
    seed: u64,
    projections: usize,
    project: P,
) -> Result<AuditReport, ProtocolError>
where
    V: Verifier + Sync,
    P: Fn(&View) -> Vec<String> + Sync,
{
    audit_chi_square(
        samples,
        alpha,
        seed,
        projections,
        |s| Ok(project(&run_real(inst, verifier, &mut SeededCoins::new(s))?.view)),
        |s| Ok(project(&run_simulated(inst, verifier, &mut SeededCoins::new(s))?.exec.view)),
    )
}

/// Projections of an honest-verifier view: the challenge with the first
/// round polynomial, the second challenge with the second round polynomial,
/// the first degree-test line, and the last oracle answer with the decision.
pub fn honest_view_projections(view: &View) -> Vec<String> {
    let join = |xs: &[Fe]| xs.iter().map(|x| x.0.to_string()).collect::<Vec<_>>().join(",");
    let coin = |label: &str, k: usize| {
        view.ledger.iter().filter(|e| e.label == label).nth(k).map_or("-".to_string(), |e| e.value.to_string())
    };
    let msg = |k: usize| view.rounds.get(k).map_or("-".to_string(), |m| join(&m.payload));
    let line: Vec<Fe> = view.queries.iter().take_while(|q| q.oracle == ORACLE_PI).take(3).map(|q| q.answer).collect();
    let last =
        view.queries.iter().rev().find(|q| q.oracle == ORACLE_PI).map_or("-".to_string(), |q| q.answer.0.to_string());
    vec![
        format!("{}|{}", coin("rho", 0), msg(1)),
        format!("{}|{}", coin("theta1", 0), msg(3)),
        format!("{}|{}", coin("ldt-axis", 0), join(&line)),
        format!("{}|{:?}", last, view.decision),
    ]
}

#[cfg(test)]
mod tests;
