use crate::algebra::Fe;
use crate::detect::QueryPoint;
use crate::protocol::{ProtocolError, Transcript, Verifier};

use super::{ORACLE_PROOF, ORACLE_W, ORACLE_Z};

/// Deterministic cheating verifiers for the masked IOPP.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaskStrategy {
    /// Reads `z` at two positions, sets `rho = z(0) + z(1) + 1`, then reads
    /// the proof, `z` and `w` at one further position each.
    PeekBeforeChallenge,
    /// Sends `rho = 0`, so the proof is a proof for `z` alone, and reads
    /// it at two positions along with `z(0)`.
    ZeroChallenge,
    /// Draws `rho` honestly and reads the last proof position, `w(0)` and
    /// `z(0)`.
    ProofTail,
}

impl MaskStrategy {
    pub const ALL: [MaskStrategy; 3] =
        [MaskStrategy::PeekBeforeChallenge, MaskStrategy::ZeroChallenge, MaskStrategy::ProofTail];

    pub fn name(self) -> &'static str {
        match self {
            MaskStrategy::PeekBeforeChallenge => "peek-before-challenge",
            MaskStrategy::ZeroChallenge => "zero-challenge",
            MaskStrategy::ProofTail => "proof-tail",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.name() == s)
    }
}

#[derive(Clone, Debug)]
pub struct MaskMaliciousVerifier {
    pub strategy: MaskStrategy,
    pub input_len: usize,
    pub proof_len: usize,
}

impl MaskMaliciousVerifier {
    pub fn new(strategy: MaskStrategy, pcpp: &dyn super::LinearPcpp) -> Self {
        MaskMaliciousVerifier { strategy, input_len: pcpp.input_len(), proof_len: pcpp.proof_len() }
    }
}

impl Verifier for MaskMaliciousVerifier {
    fn run(&self, t: &mut Transcript<'_>) -> Result<bool, ProtocolError> {
        let at = |i: usize| QueryPoint::Index(i);
        let (n, p) = (self.input_len, self.proof_len);
        t.receive(0)?;
        let rho = match self.strategy {
            MaskStrategy::PeekBeforeChallenge => {
                let a = t.query(ORACLE_Z, at(0))?;
                let b = t.query(ORACLE_Z, at(1 % n))?;
                let f = t.field();
                f.add(f.add(a, b), f.one())
            }
            MaskStrategy::ZeroChallenge => Fe(0),
            MaskStrategy::ProofTail => t.coin("rho")?,
        };
        t.send(vec![rho])?;
        t.receive(0)?;
        let answers = match self.strategy {
            MaskStrategy::PeekBeforeChallenge => {
                vec![t.query(ORACLE_PROOF, at(0))?, t.query(ORACLE_Z, at(2 % n))?, t.query(ORACLE_W, at(2 % n))?]
            }
            MaskStrategy::ZeroChallenge => {
                vec![t.query(ORACLE_PROOF, at(0))?, t.query(ORACLE_PROOF, at(1 % p))?, t.query(ORACLE_Z, at(0))?]
            }
            MaskStrategy::ProofTail => {
                vec![t.query(ORACLE_PROOF, at(p - 1))?, t.query(ORACLE_W, at(0))?, t.query(ORACLE_Z, at(0))?]
            }
        };
        Ok(answers[0] == answers[2])
    }
}
