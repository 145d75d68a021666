use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::algebra::{Fe, Field, UniPoly};
use crate::detect::{QueryPoint, SamplerSession, SrmCode};
use crate::protocol::{Coins, Namespace, ProtocolError, Responder, Transcript, Verifier};

use super::classic::{expect_point, verify_rounds, ORACLE_F};
use super::instance::{round_poly, SumcheckInstance};
use super::mask::{sample_mask, zero_sum_session, MaskOracle};

/// Oracle holding the mask evaluations sent by the prover.
pub const ORACLE_PI: &str = "pi";

/// Default number of line tests in the individual-degree test.
pub const LDT_REPS: usize = 32;
/// Default number of lines used to self-correct one value.
pub const SELF_CORRECT_TRIALS: usize = 16;

/// Honest prover of the zero-knowledge sumcheck: sends the mask `R` as the
/// oracle `pi`, receives `rho`, then runs sumcheck on `Q = rho F + R`.
pub struct PzkProver {
    inst: Arc<SumcheckInstance>,
    mask: MaskOracle,
    rho: Option<Fe>,
    prefix: Vec<Fe>,
}

impl PzkProver {
    /// Samples the mask from the prover's coins.
    pub fn new(inst: Arc<SumcheckInstance>, coins: &mut dyn Coins) -> Result<Self, ProtocolError> {
        let mask = sample_mask(&inst.field, inst.m, inst.d, &inst.h, coins)?;
        Ok(Self::with_mask(inst, mask))
    }

    pub fn with_mask(inst: Arc<SumcheckInstance>, mask: MaskOracle) -> Self {
        PzkProver { inst, mask, rho: None, prefix: Vec::new() }
    }

    pub fn field(&self) -> &Field {
        &self.inst.field
    }

    pub fn mask(&self) -> &MaskOracle {
        &self.mask
    }
}

/// Shared message handling: the first verifier message is `rho`, later ones
/// are sumcheck challenges.
fn take_message(rho: &mut Option<Fe>, prefix: &mut Vec<Fe>, m: usize, msg: &[Fe]) -> Result<bool, ProtocolError> {
    match (msg, rho.is_some()) {
        ([r], false) => {
            *rho = Some(*r);
            Ok(true)
        }
        ([theta], true) if prefix.len() + 1 < m => {
            prefix.push(*theta);
            Ok(false)
        }
        _ => Err(ProtocolError::Shape(format!("unexpected verifier message of length {}", msg.len()))),
    }
}

fn round_ready(rho: Option<Fe>, prefix: &[Fe], m: usize) -> Result<Fe, ProtocolError> {
    let rho = rho.ok_or_else(|| ProtocolError::Shape("round polynomial requested before rho".into()))?;
    if prefix.len() >= m {
        return Err(ProtocolError::Shape("all rounds already played".into()));
    }
    Ok(rho)
}

impl Responder for PzkProver {
    fn receive(&mut self, msg: &[Fe], _coins: &mut dyn Coins) -> Result<(), ProtocolError> {
        take_message(&mut self.rho, &mut self.prefix, self.inst.m, msg).map(|_| ())
    }

    fn reply(&mut self, coins: &mut dyn Coins) -> Result<Vec<Fe>, ProtocolError> {
        let rho = round_ready(self.rho, &self.prefix, self.inst.m)?;
        let inst = self.inst.clone();
        let f = &inst.field;
        let mut x = self.prefix.clone();
        x.push(Fe(0));
        round_poly(f, inst.d, |delta| {
            *x.last_mut().expect("nonempty") = delta;
            let r = self.mask.value(f, &inst.h, &x, coins)?;
            Ok(f.add(f.mul(rho, inst.poly.partial_sum(f, &x, &inst.h)), r))
        })
    }

    fn answer(&mut self, oracle: &str, point: &QueryPoint, coins: &mut dyn Coins) -> Result<Fe, ProtocolError> {
        let x = expect_point(point, self.inst.m)?.to_vec();
        match oracle {
            ORACLE_F => Ok(self.inst.poly.eval(&self.inst.field, &x)),
            ORACLE_PI => self.mask.value(&self.inst.field, &self.inst.h, &x, coins),
            _ => Err(ProtocolError::UnknownOracle(oracle.into())),
        }
    }
}

/// The `k`-th (0-based) field element, in index order, outside `excluded`.
fn nth_outside(f: &Field, k: u64, excluded: &[Fe]) -> Fe {
    let mut idx: Vec<u64> = excluded.iter().map(|&x| f.index(x)).collect();
    idx.sort_unstable();
    idx.dedup();
    let mut r = k;
    for s in idx {
        if s <= r {
            r += 1;
        } else {
            break;
        }
    }
    f.elem(r)
}

/// `count` distinct uniform field elements outside `excluded`, drawn from
/// the verifier's public coins.
pub fn distinct_coins(
    t: &mut Transcript<'_>,
    label: &str,
    count: usize,
    excluded: &[Fe],
) -> Result<Vec<Fe>, ProtocolError> {
    let f = t.field().clone();
    let mut taken: Vec<Fe> = excluded.to_vec();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let free = f.order() - taken.len() as u64;
        let k = t.coin_index(label, free)?;
        let x = nth_outside(&f, k, &taken);
        taken.push(x);
        out.push(x);
    }
    Ok(out)
}

fn line_point(base: &[Fe], axis: usize, x: Fe) -> QueryPoint {
    let mut p = base.to_vec();
    p[axis] = x;
    QueryPoint::Tuple(p)
}

/// Axis-parallel line test repeated `reps` times: on a random line, the
/// values at `d + 1` distinct random points must lie on a polynomial of
/// degree `< d`.
pub fn individual_degree_test(
    t: &mut Transcript<'_>,
    oracle: &str,
    m: usize,
    d: usize,
    reps: usize,
) -> Result<bool, ProtocolError> {
    let f = t.field().clone();
    for _ in 0..reps {
        let axis = t.coin_index("ldt-axis", m as u64)? as usize;
        let mut base = vec![f.zero(); m];
        for (j, b) in base.iter_mut().enumerate() {
            if j != axis {
                *b = t.coin("ldt-base")?;
            }
        }
        let xs = distinct_coins(t, "ldt-point", d + 1, &[])?;
        let mut pts = Vec::with_capacity(d + 1);
        for &x in &xs {
            pts.push((x, t.query(oracle, line_point(&base, axis, x))?));
        }
        let (last, first) = pts.split_last().expect("d + 1 >= 2 points");
        let g = UniPoly::interpolate(&f, first)?;
        if g.eval(&f, last.0) != last.1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Plurality vote over `trials` random axis-parallel lines through `target`,
/// each interpolated from `d` fresh points. Ties go to the smallest value.
pub fn self_correct(
    t: &mut Transcript<'_>,
    oracle: &str,
    target: &[Fe],
    d: usize,
    trials: usize,
) -> Result<Fe, ProtocolError> {
    let f = t.field().clone();
    let m = target.len();
    let mut votes: BTreeMap<Fe, usize> = BTreeMap::new();
    for _ in 0..trials {
        let axis = t.coin_index("sc-axis", m as u64)? as usize;
        let xs = distinct_coins(t, "sc-point", d, &[target[axis]])?;
        let mut pts = Vec::with_capacity(d);
        for &x in &xs {
            pts.push((x, t.query(oracle, line_point(target, axis, x))?));
        }
        let g = UniPoly::interpolate(&f, &pts)?;
        *votes.entry(g.eval(&f, target[axis])).or_insert(0) += 1;
    }
    let best = votes.values().copied().max().unwrap_or(0);
    Ok(votes.into_iter().find(|&(_, c)| c == best).map_or(f.zero(), |(v, _)| v))
}

/// Honest verifier of the zero-knowledge sumcheck. All oracle queries are
/// made after the interaction.
#[derive(Clone, Debug)]
pub struct PzkVerifier {
    pub m: usize,
    pub d: usize,
    pub h: Vec<Fe>,
    pub v: Fe,
    pub ldt_reps: usize,
    pub sc_trials: usize,
}

impl PzkVerifier {
    pub fn new(inst: &SumcheckInstance) -> Self {
        PzkVerifier {
            m: inst.m,
            d: inst.d,
            h: inst.h.clone(),
            v: inst.v,
            ldt_reps: LDT_REPS,
            sc_trials: SELF_CORRECT_TRIALS,
        }
    }

    pub fn with_reps(mut self, ldt_reps: usize, sc_trials: usize) -> Self {
        self.ldt_reps = ldt_reps;
        self.sc_trials = sc_trials;
        self
    }
}

impl Verifier for PzkVerifier {
    fn run(&self, t: &mut Transcript<'_>) -> Result<bool, ProtocolError> {
        let f = t.field().clone();
        let rho = t.coin("rho")?;
        t.send(vec![rho])?;
        let Some((gamma, claim)) = verify_rounds(t, self.m, self.d, &self.h, f.mul(rho, self.v))? else {
            return Ok(false);
        };
        if !individual_degree_test(t, ORACLE_PI, self.m, self.d, self.ldt_reps)? {
            return Ok(false);
        }
        let r = self_correct(t, ORACLE_PI, &gamma, self.d, self.sc_trials)?;
        let fv = t.query(ORACLE_F, QueryPoint::Tuple(gamma))?;
        Ok(claim == f.add(f.mul(rho, fv), r))
    }
}

/// Straightline simulator. Mask values and partial sums are drawn from the
/// conditional sampler of the partial-sum code: before `rho` for `R`
/// (seeded with `R(bottom) = 0`), after `rho` for `Q = rho F + R`. Every
/// distinct verifier query costs exactly one query to `F`.
pub struct PzkSimulator {
    inst: Arc<SumcheckInstance>,
    session: SamplerSession<SrmCode>,
    rho: Option<Fe>,
    prefix: Vec<Fe>,
    early_f: HashMap<Vec<Fe>, Fe>,
    f_log: Vec<Vec<Fe>>,
}

impl PzkSimulator {
    pub fn new(inst: Arc<SumcheckInstance>) -> Result<Self, ProtocolError> {
        let session = zero_sum_session(&inst.field, inst.m, inst.d, &inst.h)?;
        Ok(PzkSimulator { inst, session, rho: None, prefix: Vec::new(), early_f: HashMap::new(), f_log: Vec::new() })
    }

    fn query_f(&mut self, x: &[Fe]) -> Fe {
        self.f_log.push(x.to_vec());
        self.inst.poly.eval(&self.inst.field, x)
    }

    /// Number of queries made to `F`.
    pub fn f_queries(&self) -> usize {
        self.f_log.len()
    }

    /// Points at which `F` was queried, in order.
    pub fn f_log(&self) -> &[Vec<Fe>] {
        &self.f_log
    }
}

impl Responder for PzkSimulator {
    fn receive(&mut self, msg: &[Fe], _coins: &mut dyn Coins) -> Result<(), ProtocolError> {
        if take_message(&mut self.rho, &mut self.prefix, self.inst.m, msg)? {
            let rho = msg[0];
            let f = self.inst.field.clone();
            let (m, v) = (self.inst.m, self.inst.v);
            let early = &self.early_f;
            self.session.translate(|q, val| {
                let fq = match q {
                    QueryPoint::Tuple(t) if t.is_empty() => v,
                    QueryPoint::Tuple(t) if t.len() == m => early[t],
                    _ => unreachable!("before rho the table holds the empty sum and mask queries only"),
                };
                f.add(val, f.mul(rho, fq))
            });
        }
        Ok(())
    }

    fn reply(&mut self, coins: &mut dyn Coins) -> Result<Vec<Fe>, ProtocolError> {
        round_ready(self.rho, &self.prefix, self.inst.m)?;
        let f = self.inst.field.clone();
        let mut x = self.prefix.clone();
        x.push(Fe(0));
        let session = &mut self.session;
        round_poly(&f, self.inst.d, |delta| {
            *x.last_mut().expect("nonempty") = delta;
            Ok(session.answer(&QueryPoint::Tuple(x.clone()), coins, Namespace::Prover)?)
        })
    }

    fn answer(&mut self, oracle: &str, point: &QueryPoint, coins: &mut dyn Coins) -> Result<Fe, ProtocolError> {
        let x = expect_point(point, self.inst.m)?.to_vec();
        match oracle {
            ORACLE_F => Ok(self.query_f(&x)),
            ORACLE_PI => {
                let beta = self.session.answer(point, coins, Namespace::Prover)?;
                let fx = self.query_f(&x);
                match self.rho {
                    None => {
                        self.early_f.insert(x, fx);
                        Ok(beta)
                    }
                    Some(rho) => {
                        let f = &self.inst.field;
                        Ok(f.sub(beta, f.mul(rho, fx)))
                    }
                }
            }
            _ => Err(ProtocolError::UnknownOracle(oracle.into())),
        }
    }
}
