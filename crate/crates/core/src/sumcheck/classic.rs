use std::sync::Arc;

use crate::algebra::Fe;
use crate::detect::QueryPoint;
use crate::protocol::{Coins, ProtocolError, Responder, Transcript, Verifier};

use super::instance::{eval_coeffs, round_poly, sum_over, SumcheckInstance};

/// Oracle holding the summed polynomial.
pub const ORACLE_F: &str = "F";

/// Runs the `m` rounds of sumcheck against the claim `claim`. Returns the
/// challenge point and the final claim on `Q(point)`, or `None` if some
/// round polynomial is inconsistent with the running claim.
pub fn verify_rounds(
    t: &mut Transcript<'_>,
    m: usize,
    d: usize,
    h: &[Fe],
    mut claim: Fe,
) -> Result<Option<(Vec<Fe>, Fe)>, ProtocolError> {
    let f = t.field().clone();
    let mut point = Vec::with_capacity(m);
    for i in 0..m {
        let g = t.receive(d)?;
        if sum_over(&f, &g, h) != claim {
            return Ok(None);
        }
        let theta = t.coin(&format!("theta{}", i + 1))?;
        claim = eval_coeffs(&f, &g, theta);
        point.push(theta);
        if i + 1 < m {
            t.send(vec![theta])?;
        }
    }
    Ok(Some((point, claim)))
}

pub(crate) fn expect_point(point: &QueryPoint, m: usize) -> Result<&[Fe], ProtocolError> {
    match point {
        QueryPoint::Tuple(t) if t.len() == m => Ok(t),
        other => Err(ProtocolError::Shape(format!("query {other} is not a point of F^{m}"))),
    }
}

/// Honest prover of the classic sumcheck on the instance polynomial.
pub struct ClassicProver {
    inst: Arc<SumcheckInstance>,
    prefix: Vec<Fe>,
}

impl ClassicProver {
    pub fn new(inst: Arc<SumcheckInstance>) -> Self {
        ClassicProver { inst, prefix: Vec::new() }
    }
}

impl Responder for ClassicProver {
    fn receive(&mut self, msg: &[Fe], _coins: &mut dyn Coins) -> Result<(), ProtocolError> {
        match msg {
            [theta] if self.prefix.len() + 1 < self.inst.m => {
                self.prefix.push(*theta);
                Ok(())
            }
            _ => Err(ProtocolError::Shape("unexpected verifier message".into())),
        }
    }

    fn reply(&mut self, _coins: &mut dyn Coins) -> Result<Vec<Fe>, ProtocolError> {
        let SumcheckInstance { field: f, d, h, poly, .. } = &*self.inst;
        let mut x = self.prefix.clone();
        x.push(Fe(0));
        round_poly(f, *d, |delta| {
            *x.last_mut().expect("nonempty") = delta;
            Ok(poly.partial_sum(f, &x, h))
        })
    }

    fn answer(&mut self, oracle: &str, point: &QueryPoint, _coins: &mut dyn Coins) -> Result<Fe, ProtocolError> {
        if oracle != ORACLE_F {
            return Err(ProtocolError::UnknownOracle(oracle.into()));
        }
        let x = expect_point(point, self.inst.m)?;
        Ok(self.inst.poly.eval(&self.inst.field, x))
    }
}

/// Verifier of the classic sumcheck: `m` rounds, then one query to `F`.
pub struct ClassicVerifier {
    pub m: usize,
    pub d: usize,
    pub h: Vec<Fe>,
    pub v: Fe,
}

impl ClassicVerifier {
    pub fn new(inst: &SumcheckInstance) -> Self {
        ClassicVerifier { m: inst.m, d: inst.d, h: inst.h.clone(), v: inst.v }
    }
}

impl Verifier for ClassicVerifier {
    fn run(&self, t: &mut Transcript<'_>) -> Result<bool, ProtocolError> {
        let Some((point, claim)) = verify_rounds(t, self.m, self.d, &self.h, self.v)? else {
            return Ok(false);
        };
        Ok(t.query(ORACLE_F, QueryPoint::Tuple(point))? == claim)
    }
}
