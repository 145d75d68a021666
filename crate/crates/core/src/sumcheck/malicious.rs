use crate::algebra::{Fe, Field};
use crate::detect::QueryPoint;
use crate::protocol::{ProtocolError, Transcript, Verifier};

use super::classic::ORACLE_F;
use super::instance::{eval_coeffs, sum_over};
use super::pzk::ORACLE_PI;

/// Deterministic cheating verifiers used to audit zero knowledge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaliciousStrategy {
    /// Reads the oracle at two points before choosing `rho` from the
    /// answers, derives every challenge from the received polynomial and
    /// queries both oracles at the final point (one of them twice).
    PeekBeforeChallenge,
    /// Sends `rho = 0`, so the sumcheck runs on the mask alone, and then
    /// reads both oracles at a point unrelated to the challenges.
    ZeroChallenge,
    /// Plays the rounds, then reads both oracles along a whole axis line.
    QueryLine,
}

impl MaliciousStrategy {
    pub const ALL: [MaliciousStrategy; 3] =
        [MaliciousStrategy::PeekBeforeChallenge, MaliciousStrategy::ZeroChallenge, MaliciousStrategy::QueryLine];

    pub fn name(self) -> &'static str {
        match self {
            MaliciousStrategy::PeekBeforeChallenge => "peek-before-challenge",
            MaliciousStrategy::ZeroChallenge => "zero-challenge",
            MaliciousStrategy::QueryLine => "query-line",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.name() == s)
    }
}

#[derive(Clone, Debug)]
pub struct MaliciousVerifier {
    pub strategy: MaliciousStrategy,
    pub m: usize,
    pub d: usize,
    pub h: Vec<Fe>,
    pub v: Fe,
}

/// Largest number of points read along a line by [`MaliciousStrategy::QueryLine`].
const LINE_CAP: u64 = 64;

fn diagonal(f: &Field, m: usize, i: u64) -> QueryPoint {
    QueryPoint::Tuple(vec![f.elem(i % f.order()); m])
}

impl MaliciousVerifier {
    pub fn new(strategy: MaliciousStrategy, inst: &super::SumcheckInstance) -> Self {
        MaliciousVerifier { strategy, m: inst.m, d: inst.d, h: inst.h.clone(), v: inst.v }
    }

    /// Plays every round, choosing each challenge with `pick`. Returns the
    /// challenge point, the last claim and whether all sums were consistent.
    fn rounds(
        &self,
        t: &mut Transcript<'_>,
        mut claim: Fe,
        mut pick: impl FnMut(&Field, usize, &[Fe]) -> Fe,
    ) -> Result<(Vec<Fe>, Fe, bool), ProtocolError> {
        let f = t.field().clone();
        let mut point = Vec::with_capacity(self.m);
        let mut consistent = true;
        for i in 0..self.m {
            let g = t.receive(self.d)?;
            consistent &= sum_over(&f, &g, &self.h) == claim;
            let theta = pick(&f, i, &g);
            claim = eval_coeffs(&f, &g, theta);
            point.push(theta);
            if i + 1 < self.m {
                t.send(vec![theta])?;
            }
        }
        Ok((point, claim, consistent))
    }
}

impl Verifier for MaliciousVerifier {
    fn run(&self, t: &mut Transcript<'_>) -> Result<bool, ProtocolError> {
        let f = t.field().clone();
        match self.strategy {
            MaliciousStrategy::PeekBeforeChallenge => {
                let a = t.query(ORACLE_PI, diagonal(&f, self.m, 2))?;
                let b = t.query(ORACLE_PI, diagonal(&f, self.m, 3))?;
                let rho = f.add(f.add(a, b), f.one());
                t.send(vec![rho])?;
                let (point, claim, ok) =
                    self.rounds(t, f.mul(rho, self.v), |f, i, g| f.add(g[0], f.elem(i as u64 % f.order())))?;
                let r = t.query(ORACLE_PI, QueryPoint::Tuple(point.clone()))?;
                let fx = t.query(ORACLE_F, QueryPoint::Tuple(point.clone()))?;
                let again = t.query(ORACLE_PI, QueryPoint::Tuple(point))?;
                Ok(ok && r == again && claim == f.add(f.mul(rho, fx), r))
            }
            MaliciousStrategy::ZeroChallenge => {
                t.send(vec![f.zero()])?;
                let (point, claim, ok) = self.rounds(t, f.zero(), |f, i, _| f.elem((i as u64 + 1) % f.order()))?;
                let r = t.query(ORACLE_PI, QueryPoint::Tuple(point))?;
                t.query(ORACLE_PI, diagonal(&f, self.m, 4))?;
                t.query(ORACLE_F, diagonal(&f, self.m, 4))?;
                Ok(ok && r == claim)
            }
            MaliciousStrategy::QueryLine => {
                let rho = f.elem(3 % f.order());
                t.send(vec![rho])?;
                let (point, claim, ok) = self.rounds(t, f.mul(rho, self.v), |_, _, g| g[g.len() - 1])?;
                let mut last = (f.zero(), f.zero());
                for x in f.elements().take(LINE_CAP as usize) {
                    let mut p = point.clone();
                    p[0] = x;
                    let r = t.query(ORACLE_PI, QueryPoint::Tuple(p.clone()))?;
                    let fx = t.query(ORACLE_F, QueryPoint::Tuple(p))?;
                    if x == point[0] {
                        last = (r, fx);
                    }
                }
                Ok(ok && claim == f.add(f.mul(rho, last.1), last.0))
            }
        }
    }
}
