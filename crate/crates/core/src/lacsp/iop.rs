use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::Fe;
use crate::detect::QueryPoint;
use crate::masking::fits_degree;
use crate::protocol::{
    audit_exact, run_interactive, AuditReport, Coins, EnumCoins, Execution, Namespace, ProtocolError, Responder,
    Transcript, Verifier,
};

use super::{apply_map, LacspInstance, RlacspInstance, RsCode};

pub const ORACLE_W0: &str = "w0";
pub const ORACLE_W1: &str = "w1";

/// Passes of the interpolation tester per component.
pub const TESTER_REPS: usize = 2;

fn at(j: usize) -> QueryPoint {
    QueryPoint::Index(j)
}

/// Reads `degree + 1` distinct random positions of `oracle` and checks that
/// they lie on a polynomial of degree below `degree`.
fn interpolation_test(t: &mut Transcript<'_>, oracle: &str, code: &RsCode) -> Result<bool, ProtocolError> {
    let mut pool: Vec<usize> = (0..code.len()).collect();
    let mut pts = Vec::with_capacity(code.degree + 1);
    for _ in 0..=code.degree.min(code.len() - 1) {
        let k = t.coin_index("tester", pool.len() as u64)? as usize;
        let i = pool.swap_remove(k);
        pts.push((code.domain[i], t.query(oracle, at(i))?));
    }
    fits_degree(&code.field, &pts, code.degree)
}

/// The LACSP verifier: `reps` passes of the interpolation tester on each
/// of `w0` and `w1`, then `g(w0)[j] = w1[j]` at a uniform `j`.
#[derive(Clone, Debug)]
pub struct LacspVerifier {
    inst: LacspInstance,
    reps: usize,
    consistency: bool,
}

impl LacspVerifier {
    pub fn new(inst: &LacspInstance) -> Self {
        LacspVerifier { inst: inst.clone(), reps: TESTER_REPS, consistency: true }
    }

    pub fn with_reps(mut self, reps: usize) -> Self {
        self.reps = reps;
        self
    }

    /// Only the interpolation tester on `w0`, whose acceptance rate on a
    /// word is the `eps` of the soundness bound.
    pub fn tester_only(mut self) -> Self {
        self.consistency = false;
        self
    }
}

impl Verifier for LacspVerifier {
    fn run(&self, t: &mut Transcript<'_>) -> Result<bool, ProtocolError> {
        let inst = &self.inst;
        for _ in 0..self.reps {
            if !interpolation_test(t, ORACLE_W0, &inst.c0)? {
                return Ok(false);
            }
            if self.consistency && !interpolation_test(t, ORACLE_W1, &inst.c1)? {
                return Ok(false);
            }
        }
        if !self.consistency {
            return Ok(true);
        }
        let j = t.coin_index("j", inst.len() as u64)? as usize;
        let support = inst.g.support(j);
        if support.len() != inst.g.locality() {
            return Err(ProtocolError::Invalid(format!("support of {j} has {} positions", support.len())));
        }
        let vals = support.iter().map(|&i| t.query(ORACLE_W0, at(i))).collect::<Result<Vec<_>, _>>()?;
        let want = inst.g.eval_local(inst.field(), j, &vals);
        Ok(t.query(ORACLE_W1, at(j))? == want)
    }
}

fn oracle_index(point: &QueryPoint, len: usize) -> Result<usize, ProtocolError> {
    match point {
        QueryPoint::Index(j) if *j < len => Ok(*j),
        _ => Err(ProtocolError::Shape(format!("query {point} outside 0..{len}"))),
    }
}

/// Answers witness queries from a fixed pair `(w0, w1)`.
#[derive(Clone, Debug)]
pub struct LacspProver {
    pub w0: Vec<Fe>,
    pub w1: Vec<Fe>,
}

impl Responder for LacspProver {
    fn receive(&mut self, _msg: &[Fe], _coins: &mut dyn Coins) -> Result<(), ProtocolError> {
        Err(ProtocolError::Shape("the witness protocol has no verifier messages".into()))
    }

    fn reply(&mut self, _coins: &mut dyn Coins) -> Result<Vec<Fe>, ProtocolError> {
        Err(ProtocolError::Shape("the witness protocol has no prover messages".into()))
    }

    fn answer(&mut self, oracle: &str, point: &QueryPoint, _coins: &mut dyn Coins) -> Result<Fe, ProtocolError> {
        let w = match oracle {
            ORACLE_W0 => &self.w0,
            ORACLE_W1 => &self.w1,
            _ => return Err(ProtocolError::UnknownOracle(oracle.into())),
        };
        Ok(w[oracle_index(point, w.len())?])
    }
}

/// Runs `verifier` with oracle access to the witness `(w0, w1)`.
pub fn run_lacsp(
    inst: &LacspInstance,
    w0: &[Fe],
    w1: &[Fe],
    verifier: &dyn Verifier,
    coins: &mut dyn Coins,
) -> Result<Execution, ProtocolError> {
    let mut p = LacspProver { w0: w0.to_vec(), w1: w1.to_vec() };
    run_interactive(inst.field(), inst.describe(), verifier, &mut p, coins)
}

/// The RLACSP prover: sends `w0' = w0 + u'` for a uniform `u' in C'` and
/// `w1' = g(w0')`, then answers as [`LacspProver`].
pub struct RlacspProver(LacspProver);

impl RlacspProver {
    pub fn new(inst: &RlacspInstance, w0: &[Fe], coins: &mut dyn Coins) -> Result<Self, ProtocolError> {
        let f = inst.field();
        let u = inst.subcode.random(coins, Namespace::Prover)?;
        let shifted: Vec<Fe> = w0.iter().zip(&u).map(|(&a, &b)| f.add(a, b)).collect();
        let w1 = apply_map(inst.base.g.as_ref(), f, &shifted);
        Ok(RlacspProver(LacspProver { w0: shifted, w1 }))
    }

    pub fn witness(&self) -> (&[Fe], &[Fe]) {
        (&self.0.w0, &self.0.w1)
    }
}

impl Responder for RlacspProver {
    fn receive(&mut self, msg: &[Fe], coins: &mut dyn Coins) -> Result<(), ProtocolError> {
        self.0.receive(msg, coins)
    }

    fn reply(&mut self, coins: &mut dyn Coins) -> Result<Vec<Fe>, ProtocolError> {
        self.0.reply(coins)
    }

    fn answer(&mut self, oracle: &str, point: &QueryPoint, coins: &mut dyn Coins) -> Result<Fe, ProtocolError> {
        self.0.answer(oracle, point, coins)
    }
}

/// Simulator for verifiers making at most `b = t / q` distinct queries.
/// Entries of `w0` are drawn uniformly on first use; `w1[j]` is computed
/// from `w0` on `I_j`. At most `q` entries of `w0` are defined per query,
/// so at most `t`. Query `b + 1` is refused.
pub struct RlacspSimulator {
    inst: Arc<RlacspInstance>,
    w0: BTreeMap<usize, Fe>,
    w1: BTreeMap<usize, Fe>,
    queries: usize,
}

impl RlacspSimulator {
    pub fn new(inst: Arc<RlacspInstance>) -> Self {
        RlacspSimulator { inst, w0: BTreeMap::new(), w1: BTreeMap::new(), queries: 0 }
    }

    /// Number of defined entries of `w0`.
    pub fn footprint(&self) -> usize {
        self.w0.len()
    }

    fn w0_at(&mut self, i: usize, coins: &mut dyn Coins) -> Result<Fe, ProtocolError> {
        if let Some(&v) = self.w0.get(&i) {
            return Ok(v);
        }
        let v = coins.draw_fe(Namespace::Prover, self.inst.field())?;
        self.w0.insert(i, v);
        Ok(v)
    }
}

impl Responder for RlacspSimulator {
    fn receive(&mut self, _msg: &[Fe], _coins: &mut dyn Coins) -> Result<(), ProtocolError> {
        Err(ProtocolError::Shape("the witness protocol has no verifier messages".into()))
    }

    fn reply(&mut self, _coins: &mut dyn Coins) -> Result<Vec<Fe>, ProtocolError> {
        Err(ProtocolError::Shape("the witness protocol has no prover messages".into()))
    }

    fn answer(&mut self, oracle: &str, point: &QueryPoint, coins: &mut dyn Coins) -> Result<Fe, ProtocolError> {
        let j = oracle_index(point, self.inst.base.len())?;
        if oracle != ORACLE_W0 && oracle != ORACLE_W1 {
            return Err(ProtocolError::UnknownOracle(oracle.into()));
        }
        let b = self.inst.query_bound();
        self.queries += 1;
        if self.queries > b {
            return Err(ProtocolError::QueryBound(b));
        }
        if oracle == ORACLE_W0 {
            return self.w0_at(j, coins);
        }
        if let Some(&v) = self.w1.get(&j) {
            return Ok(v);
        }
        let g = self.inst.base.g.clone();
        let vals = g.support(j).into_iter().map(|i| self.w0_at(i, coins)).collect::<Result<Vec<_>, _>>()?;
        let v = g.eval_local(self.inst.field(), j, &vals);
        self.w1.insert(j, v);
        Ok(v)
    }
}

pub fn run_rlacsp_real(
    inst: &RlacspInstance,
    w0: &[Fe],
    verifier: &dyn Verifier,
    coins: &mut dyn Coins,
) -> Result<Execution, ProtocolError> {
    let mut p = RlacspProver::new(inst, w0, coins)?;
    run_interactive(inst.field(), inst.describe(), verifier, &mut p, coins)
}

#[derive(Clone, Debug)]
pub struct RlacspSimRun {
    pub exec: Execution,
    pub footprint: usize,
}

/// Runs `verifier` against the simulator, failing if more than `t` entries
/// of `w0` were defined.
pub fn run_rlacsp_simulated(
    inst: &Arc<RlacspInstance>,
    verifier: &dyn Verifier,
    coins: &mut dyn Coins,
) -> Result<RlacspSimRun, ProtocolError> {
    let mut sim = RlacspSimulator::new(inst.clone());
    let exec = run_interactive(inst.field(), inst.describe(), verifier, &mut sim, coins)?;
    if sim.footprint() > inst.t() {
        return Err(ProtocolError::Accounting(format!(
            "simulator defined {} entries of w0, t = {}",
            sim.footprint(),
            inst.t()
        )));
    }
    Ok(RlacspSimRun { exec, footprint: sim.footprint() })
}

/// Exact comparison of the real and simulated view distributions.
pub fn audit_exact_rlacsp(
    inst: &Arc<RlacspInstance>,
    w0: &[Fe],
    verifier: &dyn Verifier,
    budget: usize,
    max_paths: u64,
) -> Result<AuditReport, ProtocolError> {
    audit_exact(
        budget,
        max_paths,
        |c: &mut EnumCoins| Ok(run_rlacsp_real(inst, w0, verifier, c)?.view.canonical()),
        |c: &mut EnumCoins| Ok(run_rlacsp_simulated(inst, verifier, c)?.exec.view.canonical()),
    )
}

/// Two-query verifiers for the RLACSP zero-knowledge audit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RlacspStrategy {
    /// Reads `w0[0]` and then `w1` at the position named by that value.
    Adaptive,
    /// Reads `w1[3]` and then `w0[3]`.
    SameIndex,
    /// Reads `w0[j]` and `w1[j + 1]` for a uniform `j`.
    RandomPair,
}

impl RlacspStrategy {
    pub const ALL: [RlacspStrategy; 3] =
        [RlacspStrategy::Adaptive, RlacspStrategy::SameIndex, RlacspStrategy::RandomPair];

    pub fn name(self) -> &'static str {
        match self {
            RlacspStrategy::Adaptive => "adaptive",
            RlacspStrategy::SameIndex => "same-index",
            RlacspStrategy::RandomPair => "random-pair",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.name() == s)
    }
}

#[derive(Clone, Debug)]
pub struct RlacspMalicious {
    pub strategy: RlacspStrategy,
    pub len: usize,
}

impl Verifier for RlacspMalicious {
    fn run(&self, t: &mut Transcript<'_>) -> Result<bool, ProtocolError> {
        let n = self.len;
        let (a, b) = match self.strategy {
            RlacspStrategy::Adaptive => {
                let a = t.query(ORACLE_W0, at(0))?;
                (a, t.query(ORACLE_W1, at(a.0 as usize % n))?)
            }
            RlacspStrategy::SameIndex => (t.query(ORACLE_W1, at(3 % n))?, t.query(ORACLE_W0, at(3 % n))?),
            RlacspStrategy::RandomPair => {
                let j = t.coin_index("j", n as u64)? as usize;
                (t.query(ORACLE_W0, at(j))?, t.query(ORACLE_W1, at((j + 1) % n))?)
            }
        };
        Ok(a == b)
    }
}
