//! Zero-knowledge proximity testing by random self-masking.
//!
//! Given a linear PCPP for a code `C` (the proof map `w -> pi(w)` is
//! linear), the masked IOPP runs in two rounds: the prover sends a uniform
//! codeword `z` of `C`, the verifier answers with a uniform `rho`, and the
//! prover sends `pi(rho w + z)`. The verifier then runs the PCPP verifier on
//! `w' = rho w + z`, realising each read of `w'` as one read of `w` and one
//! of `z`. Since `w'` is a uniform codeword whenever `w` is one, the
//! [`MaskSimulator`] can answer every query from the conditional sampler of
//! the concatenated family `{c || pi(c)}` while reading `w` once per
//! verifier query.
//!
//! Two instantiations are provided: [`RsPcpp`] for Reed–Solomon codes over
//! binary subspaces with BS-RS proofs, and [`ErsPcpp`] for pairs of
//! Reed–Solomon words of which the second vanishes on a set `H`.

mod ers;
mod malicious;
mod rs;

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

pub use ers::{ers_pcpp, ErsCode, ErsPcpp, LINK_CHECKS};
pub use malicious::{MaskMaliciousVerifier, MaskStrategy};
pub use rs::{row_column_test, rs_pcpp, RsPcpp, DEFAULT_REPS};

use crate::algebra::{Fe, Field, UniPoly};
use crate::bsrs::BsrsError;
use crate::detect::{Detector, LinearCode, QueryPoint, SamplerSession};
use crate::protocol::{
    audit_chi_square, audit_exact, run_interactive, AuditReport, Coins, EnumCoins, Execution, Namespace, ProtocolError,
    Responder, SeededCoins, Transcript, Verifier, View,
};

/// The input word.
pub const ORACLE_W: &str = "w";
/// The prover's masking codeword.
pub const ORACLE_Z: &str = "z";
/// The proof for `rho w + z`.
pub const ORACLE_PROOF: &str = "pi";

impl From<BsrsError> for ProtocolError {
    fn from(e: BsrsError) -> Self {
        match e {
            BsrsError::Algebra(a) => ProtocolError::Algebra(a),
            BsrsError::Detect(d) => ProtocolError::Detect(d),
            other => ProtocolError::Invalid(other.to_string()),
        }
    }
}

/// Position-level access for a proximity verifier: positions below the
/// input length address the tested word, the rest address the proof.
pub trait ProximityAccess {
    fn read(&mut self, pos: usize) -> Result<Fe, ProtocolError>;

    fn coin_index(&mut self, label: &str, n: u64) -> Result<u64, ProtocolError>;
}

/// A PCPP for a linear code whose proof map is linear, together with a
/// constraint detector for the concatenated family `{c || pi(c) : c in C}`.
pub trait LinearPcpp: Send + Sync {
    fn field(&self) -> &Field;

    fn input_len(&self) -> usize;

    fn proof_len(&self) -> usize;

    /// Dimension of `C`.
    fn code_dim(&self) -> usize;

    /// The codeword of `C` with message `msg`.
    fn encode(&self, msg: &[Fe]) -> Result<Vec<Fe>, ProtocolError>;

    /// The honest proof for a codeword.
    fn prove(&self, w: &[Fe]) -> Result<Vec<Fe>, ProtocolError>;

    /// Detector over positions `0..input_len + proof_len` of the
    /// concatenated family.
    fn detector(&self) -> Arc<dyn Detector + Send + Sync>;

    fn verify(&self, access: &mut dyn ProximityAccess) -> Result<bool, ProtocolError>;

    /// Public description, used as the transcript input.
    fn describe(&self) -> String;
}

pub type SharedPcpp = Arc<dyn LinearPcpp>;

/// A uniform codeword of `C`: a uniform message, encoded.
pub fn random_codeword(pcpp: &dyn LinearPcpp, coins: &mut dyn Coins, ns: Namespace) -> Result<Vec<Fe>, ProtocolError> {
    let f = pcpp.field();
    let msg = (0..pcpp.code_dim()).map(|_| coins.draw_fe(ns, f)).collect::<Result<Vec<_>, _>>()?;
    pcpp.encode(&msg)
}

/// Encodings of the unit messages.
pub fn code_generators(pcpp: &dyn LinearPcpp) -> Result<Vec<Vec<Fe>>, ProtocolError> {
    let f = pcpp.field();
    (0..pcpp.code_dim())
        .map(|j| {
            let mut e = vec![f.zero(); pcpp.code_dim()];
            e[j] = f.one();
            pcpp.encode(&e)
        })
        .collect()
}

/// Whether the first `bound` points determine a polynomial of degree below
/// `bound` that passes through all of them.
pub fn fits_degree(f: &Field, pts: &[(Fe, Fe)], bound: usize) -> Result<bool, ProtocolError> {
    if pts.len() <= bound {
        return Ok(true);
    }
    if bound == 0 {
        return Ok(pts.iter().all(|p| p.1 .0 == 0));
    }
    let p = UniPoly::interpolate(f, &pts[..bound])?;
    Ok(pts[bound..].iter().all(|&(x, y)| p.eval(f, x) == y))
}

pub(crate) fn scaled_sum(f: &Field, a: Fe, x: &[Fe], y: &[Fe]) -> Vec<Fe> {
    x.iter().zip(y).map(|(&u, &v)| f.add(f.mul(a, u), v)).collect()
}

/// Checks `pi(a w1 + w2) = a pi(w1) + pi(w2)` on `pairs` random pairs of
/// codewords and random scalars `a`, returning the number of failures.
pub fn linearity_failures(pcpp: &dyn LinearPcpp, pairs: usize, coins: &mut dyn Coins) -> Result<usize, ProtocolError> {
    let f = pcpp.field();
    let mut failures = 0;
    for _ in 0..pairs {
        let w1 = random_codeword(pcpp, coins, Namespace::Prover)?;
        let w2 = random_codeword(pcpp, coins, Namespace::Prover)?;
        let a = coins.draw_fe(Namespace::Prover, f)?;
        let lhs = pcpp.prove(&scaled_sum(f, a, &w1, &w2))?;
        let rhs = scaled_sum(f, a, &pcpp.prove(&w1)?, &pcpp.prove(&w2)?);
        failures += usize::from(lhs != rhs);
    }
    Ok(failures)
}

/// Hamming distance from `w` to the nearest of `codewords`.
pub fn distance_to_code(w: &[Fe], codewords: &[Vec<Fe>]) -> usize {
    codewords.iter().map(|c| c.iter().zip(w).filter(|(a, b)| a != b).count()).min().unwrap_or(w.len())
}

/// The challenges `rho` for which `rho w + z` lies within Hamming distance
/// `radius` of the code spanned by `code`, by exhaustive search.
pub fn close_challenges(code: &LinearCode, f: &Field, w: &[Fe], z: &[Fe], radius: usize) -> Vec<Fe> {
    let words = code.codewords();
    f.elements().filter(|&rho| distance_to_code(&scaled_sum(f, rho, w, z), &words) <= radius).collect()
}

/// Direct access to a word and its proof, for running the PCPP verifier on
/// its own.
pub struct WordAccess<'a> {
    pub word: &'a [Fe],
    pub proof: &'a [Fe],
    pub coins: &'a mut dyn Coins,
    pub reads: usize,
}

impl ProximityAccess for WordAccess<'_> {
    fn read(&mut self, pos: usize) -> Result<Fe, ProtocolError> {
        self.reads += 1;
        let n = self.word.len();
        let v = if pos < n { self.word.get(pos) } else { self.proof.get(pos - n) };
        v.copied().ok_or_else(|| ProtocolError::Shape(format!("position {pos} out of range")))
    }

    fn coin_index(&mut self, _label: &str, n: u64) -> Result<u64, ProtocolError> {
        Ok(self.coins.draw(Namespace::Verifier, n)?)
    }
}

/// Runs the PCPP verifier directly on `word || proof`.
pub fn verify_direct(
    pcpp: &dyn LinearPcpp,
    word: &[Fe],
    proof: &[Fe],
    coins: &mut dyn Coins,
) -> Result<bool, ProtocolError> {
    pcpp.verify(&mut WordAccess { word, proof, coins, reads: 0 })
}

/// Reads of `w'` realised through the transcript.
struct MaskedAccess<'t, 'a> {
    t: &'t mut Transcript<'a>,
    rho: Fe,
    n: usize,
}

impl ProximityAccess for MaskedAccess<'_, '_> {
    fn read(&mut self, pos: usize) -> Result<Fe, ProtocolError> {
        if pos < self.n {
            let w = self.t.query(ORACLE_W, QueryPoint::Index(pos))?;
            let z = self.t.query(ORACLE_Z, QueryPoint::Index(pos))?;
            let f = self.t.field();
            Ok(f.add(f.mul(self.rho, w), z))
        } else {
            self.t.query(ORACLE_PROOF, QueryPoint::Index(pos - self.n))
        }
    }

    fn coin_index(&mut self, label: &str, n: u64) -> Result<u64, ProtocolError> {
        self.t.coin_index(label, n)
    }
}

/// The honest verifier of the masked IOPP.
#[derive(Clone)]
pub struct MaskVerifier {
    pcpp: SharedPcpp,
}

impl MaskVerifier {
    pub fn new(pcpp: SharedPcpp) -> Self {
        MaskVerifier { pcpp }
    }
}

impl Verifier for MaskVerifier {
    fn run(&self, t: &mut Transcript<'_>) -> Result<bool, ProtocolError> {
        t.receive(0)?;
        let rho = t.coin("rho")?;
        t.send(vec![rho])?;
        t.receive(0)?;
        self.pcpp.verify(&mut MaskedAccess { t, rho, n: self.pcpp.input_len() })
    }
}

/// Protocol progress shared by the prover and the simulator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    Start,
    MaskSent,
    Challenged,
    ProofSent,
}

fn index_of(point: &QueryPoint, len: usize) -> Result<usize, ProtocolError> {
    match point {
        QueryPoint::Index(i) if *i < len => Ok(*i),
        _ => Err(ProtocolError::Shape(format!("query {point} outside 0..{len}"))),
    }
}

fn advance_reply(phase: &mut Phase) -> Result<Vec<Fe>, ProtocolError> {
    *phase = match *phase {
        Phase::Start => Phase::MaskSent,
        Phase::Challenged => Phase::ProofSent,
        other => return Err(ProtocolError::Shape(format!("no prover message due in phase {other:?}"))),
    };
    Ok(Vec::new())
}

fn take_challenge(phase: &mut Phase, msg: &[Fe]) -> Result<Fe, ProtocolError> {
    if *phase != Phase::MaskSent || msg.len() != 1 {
        return Err(ProtocolError::Shape(format!("unexpected verifier message of length {} in {phase:?}", msg.len())));
    }
    *phase = Phase::Challenged;
    Ok(msg[0])
}

fn oracle_ready(phase: Phase, oracle: &str) -> Result<(), ProtocolError> {
    let ready = match oracle {
        ORACLE_W => true,
        ORACLE_Z => phase != Phase::Start,
        ORACLE_PROOF => phase == Phase::ProofSent,
        _ => return Err(ProtocolError::UnknownOracle(oracle.into())),
    };
    if ready {
        Ok(())
    } else {
        Err(ProtocolError::Shape(format!("oracle {oracle} queried before it was sent")))
    }
}

/// The honest prover: a uniform mask `z`, then `pi(rho w + z)`.
pub struct MaskProver {
    pcpp: SharedPcpp,
    w: Vec<Fe>,
    z: Vec<Fe>,
    proof: Vec<Fe>,
    phase: Phase,
    /// Codeword proven in place of `w`, if cheating.
    stand_in: Option<Vec<Fe>>,
}

impl MaskProver {
    pub fn new(pcpp: SharedPcpp, w: Vec<Fe>, coins: &mut dyn Coins) -> Result<Self, ProtocolError> {
        let z = random_codeword(pcpp.as_ref(), coins, Namespace::Prover)?;
        Ok(Self::with_mask(pcpp, w, z))
    }

    /// A prover with a fixed mask, e.g. `z = 0` to show what masking hides.
    pub fn with_mask(pcpp: SharedPcpp, w: Vec<Fe>, z: Vec<Fe>) -> Self {
        MaskProver { pcpp, w, z, proof: Vec::new(), phase: Phase::Start, stand_in: None }
    }

    /// A cheating prover for a word `w` that is not a codeword: it answers
    /// `w` honestly but sends the proof of `rho c + z` for the codeword `c`.
    pub fn cheating(pcpp: SharedPcpp, w: Vec<Fe>, c: Vec<Fe>, coins: &mut dyn Coins) -> Result<Self, ProtocolError> {
        let mut p = Self::new(pcpp, w, coins)?;
        p.stand_in = Some(c);
        Ok(p)
    }

    pub fn mask(&self) -> &[Fe] {
        &self.z
    }
}

impl Responder for MaskProver {
    fn receive(&mut self, msg: &[Fe], _coins: &mut dyn Coins) -> Result<(), ProtocolError> {
        let rho = take_challenge(&mut self.phase, msg)?;
        let f = self.pcpp.field();
        let base = self.stand_in.as_ref().unwrap_or(&self.w);
        self.proof = self.pcpp.prove(&scaled_sum(f, rho, base, &self.z))?;
        Ok(())
    }

    fn reply(&mut self, _coins: &mut dyn Coins) -> Result<Vec<Fe>, ProtocolError> {
        advance_reply(&mut self.phase)
    }

    fn answer(&mut self, oracle: &str, point: &QueryPoint, _coins: &mut dyn Coins) -> Result<Fe, ProtocolError> {
        oracle_ready(self.phase, oracle)?;
        let n = self.pcpp.input_len();
        Ok(match oracle {
            ORACLE_W => self.w[index_of(point, n)?],
            ORACLE_Z => self.z[index_of(point, n)?],
            _ => self.proof[index_of(point, self.pcpp.proof_len())?],
        })
    }
}

/// One read of `w` by the simulator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WRead {
    pub pos: usize,
    /// Reads that only keep the count equal to the verifier's.
    pub padding: bool,
}

/// Straightline simulator. One lazily sampled codeword `c || pi(c)` of the
/// concatenated family stands for `z` before `rho` and for
/// `w' || pi(w')` afterwards; the switch translates every fixed input entry
/// by `rho w(a)`. Each distinct verifier query costs one read of `w`,
/// including proof queries, which read `w` at position 0.
pub struct MaskSimulator {
    pcpp: SharedPcpp,
    w: Vec<Fe>,
    session: SamplerSession<Arc<dyn Detector + Send + Sync>>,
    phase: Phase,
    rho: Fe,
    early_w: HashMap<usize, Fe>,
    w_log: Vec<WRead>,
}

impl MaskSimulator {
    pub fn new(pcpp: SharedPcpp, w: Vec<Fe>) -> Self {
        let session = SamplerSession::new(pcpp.detector());
        let rho = pcpp.field().zero();
        MaskSimulator { pcpp, w, session, phase: Phase::Start, rho, early_w: HashMap::new(), w_log: Vec::new() }
    }

    fn read_w(&mut self, pos: usize, padding: bool) -> Fe {
        self.w_log.push(WRead { pos, padding });
        self.w[pos]
    }

    pub fn w_log(&self) -> &[WRead] {
        &self.w_log
    }
}

impl Responder for MaskSimulator {
    fn receive(&mut self, msg: &[Fe], _coins: &mut dyn Coins) -> Result<(), ProtocolError> {
        let rho = take_challenge(&mut self.phase, msg)?;
        self.rho = rho;
        let f = self.pcpp.field().clone();
        let early = &self.early_w;
        self.session.translate(|q, v| match q {
            QueryPoint::Index(a) => f.add(v, f.mul(rho, early[a])),
            _ => unreachable!("the table holds input positions only before rho"),
        });
        Ok(())
    }

    fn reply(&mut self, _coins: &mut dyn Coins) -> Result<Vec<Fe>, ProtocolError> {
        advance_reply(&mut self.phase)
    }

    fn answer(&mut self, oracle: &str, point: &QueryPoint, coins: &mut dyn Coins) -> Result<Fe, ProtocolError> {
        oracle_ready(self.phase, oracle)?;
        let n = self.pcpp.input_len();
        match oracle {
            ORACLE_W => {
                let a = index_of(point, n)?;
                Ok(self.read_w(a, false))
            }
            ORACLE_Z => {
                let a = index_of(point, n)?;
                let v = self.session.answer(point, coins, Namespace::Prover)?;
                let wa = self.read_w(a, false);
                if self.phase == Phase::MaskSent {
                    self.early_w.insert(a, wa);
                    Ok(v)
                } else {
                    let f = self.pcpp.field();
                    Ok(f.sub(v, f.mul(self.rho, wa)))
                }
            }
            _ => {
                let j = index_of(point, self.pcpp.proof_len())?;
                let v = self.session.answer(&QueryPoint::Index(n + j), coins, Namespace::Prover)?;
                self.read_w(0, true);
                Ok(v)
            }
        }
    }
}

pub fn run_masked_real(
    pcpp: &SharedPcpp,
    w: &[Fe],
    verifier: &dyn Verifier,
    coins: &mut dyn Coins,
) -> Result<Execution, ProtocolError> {
    let mut p = MaskProver::new(pcpp.clone(), w.to_vec(), coins)?;
    run_interactive(pcpp.field(), pcpp.describe(), verifier, &mut p, coins)
}

/// A cheating run on a word `w` that is not a codeword, proving the
/// codeword `c` in its place.
pub fn run_masked_cheat(
    pcpp: &SharedPcpp,
    w: &[Fe],
    c: &[Fe],
    verifier: &dyn Verifier,
    coins: &mut dyn Coins,
) -> Result<Execution, ProtocolError> {
    let mut p = MaskProver::cheating(pcpp.clone(), w.to_vec(), c.to_vec(), coins)?;
    run_interactive(pcpp.field(), pcpp.describe(), verifier, &mut p, coins)
}

/// A simulated execution with the simulator's reads of `w`.
#[derive(Clone, Debug)]
pub struct MaskedSimRun {
    pub exec: Execution,
    pub w_log: Vec<WRead>,
}

impl MaskedSimRun {
    pub fn simulator_queries(&self) -> usize {
        self.w_log.len()
    }

    pub fn verifier_queries(&self) -> usize {
        self.exec.distinct_queries()
    }
}

/// Runs `verifier` against the simulator and checks that the simulator
/// read `w` once per distinct verifier query, and outside padding only at
/// positions the verifier queried in `w` or `z`.
pub fn run_masked_simulated(
    pcpp: &SharedPcpp,
    w: &[Fe],
    verifier: &dyn Verifier,
    coins: &mut dyn Coins,
) -> Result<MaskedSimRun, ProtocolError> {
    let mut sim = MaskSimulator::new(pcpp.clone(), w.to_vec());
    let exec = run_interactive(pcpp.field(), pcpp.describe(), verifier, &mut sim, coins)?;
    let run = MaskedSimRun { exec, w_log: sim.w_log().to_vec() };
    if run.simulator_queries() != run.verifier_queries() {
        return Err(ProtocolError::Accounting(format!(
            "simulator read w {} times, verifier made {} queries",
            run.simulator_queries(),
            run.verifier_queries()
        )));
    }
    let asked: BTreeSet<usize> = run
        .exec
        .view
        .queries
        .iter()
        .filter(|q| q.oracle != ORACLE_PROOF)
        .filter_map(|q| match q.point {
            QueryPoint::Index(i) => Some(i),
            _ => None,
        })
        .collect();
    if let Some(r) = run.w_log.iter().find(|r| !r.padding && !asked.contains(&r.pos)) {
        return Err(ProtocolError::Accounting(format!("simulator read w at unasked position {}", r.pos)));
    }
    Ok(run)
}

/// Exact comparison of real and simulated views.
pub fn audit_exact_masked(
    pcpp: &SharedPcpp,
    w: &[Fe],
    verifier: &dyn Verifier,
    budget: usize,
    max_paths: u64,
) -> Result<AuditReport, ProtocolError> {
    audit_exact(
        budget,
        max_paths,
        |c: &mut EnumCoins| Ok(run_masked_real(pcpp, w, verifier, c)?.view.canonical()),
        |c: &mut EnumCoins| Ok(run_masked_simulated(pcpp, w, verifier, c)?.exec.view.canonical()),
    )
}

/// Chi-square comparison of real and simulated views under `project`.
#[allow(clippy::too_many_arguments)]
pub fn audit_chi_square_masked<V, P>(
    pcpp: &SharedPcpp,
    w: &[Fe],
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
        |s| Ok(project(&run_masked_real(pcpp, w, verifier, &mut SeededCoins::new(s))?.view)),
        |s| Ok(project(&run_masked_simulated(pcpp, w, verifier, &mut SeededCoins::new(s))?.exec.view)),
    )
}

/// Projections of an honest masked view: the first three answers of each
/// oracle, and the challenge with the first proof answer.
pub fn masked_view_projections(view: &View) -> Vec<String> {
    let first = |oracle: &str| {
        view.queries
            .iter()
            .filter(|q| q.oracle == oracle)
            .take(3)
            .map(|q| q.answer.0.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    let rho = view.ledger.iter().find(|e| e.label == "rho").map_or("-".to_string(), |e| e.value.to_string());
    let pi0 =
        view.queries.iter().find(|q| q.oracle == ORACLE_PROOF).map_or("-".to_string(), |q| q.answer.0.to_string());
    vec![first(ORACLE_Z), first(ORACLE_PROOF), format!("{rho}|{pi0}")]
}

#[cfg(test)]
mod tests;
