use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{exponents, power_sums, powers, Fe, UniPoly};
use crate::detect::QueryPoint;
use crate::protocol::{Coins, Namespace, ProtocolError, Responder};

use super::classic::{expect_point, ORACLE_F};
use super::instance::{eval_coeffs, round_poly, sum_over, SumcheckInstance};
use super::mask::designated_monomial;
use super::pzk::{PzkProver, ORACLE_PI};

/// Prover for false claims. Its oracle is the low-degree `R = s X^e` for a
/// random `s != 0` and the designated monomial `X^e`, so it passes every
/// degree test. Whenever the running claim is false it sends the true round
/// polynomial shifted by `c prod_j (X - a_j)` for fresh random `a_j`, which
/// agrees with the truth at `d - 1` points, and plays honestly once a lucky
/// challenge makes the claim true.
///
/// With `with_mask = false` it plays the classic sumcheck on `F` alone.
pub struct CheatingProver {
    inst: Arc<SumcheckInstance>,
    with_mask: bool,
    s: Fe,
    mono: Vec<u32>,
    rho: Option<Fe>,
    prefix: Vec<Fe>,
    claim: Fe,
    last: Vec<Fe>,
}

impl CheatingProver {
    pub fn new(inst: Arc<SumcheckInstance>, with_mask: bool, coins: &mut dyn Coins) -> Result<Self, ProtocolError> {
        let f = &inst.field;
        let e = designated_monomial(f, inst.m, inst.d, &inst.h).unwrap_or(0);
        let mono = exponents(e, inst.m, inst.d);
        let s = if with_mask { f.elem(1 + coins.draw(Namespace::Prover, f.order() - 1)?) } else { f.zero() };
        let (rho, claim) = if with_mask { (None, f.zero()) } else { (Some(f.one()), inst.v) };
        Ok(CheatingProver { inst, with_mask, s, mono, rho, prefix: Vec::new(), claim, last: Vec::new() })
    }

    /// `R(prefix)` as a partial sum.
    fn mask(&self, x: &[Fe]) -> Fe {
        let f = &self.inst.field;
        let sums = power_sums(f, &self.inst.h, self.inst.d);
        self.mono.iter().enumerate().fold(self.s, |acc, (i, &e)| {
            let w = if i < x.len() { powers(f, x[i], self.inst.d)[e as usize] } else { sums[e as usize] };
            f.mul(acc, w)
        })
    }

    fn shift_poly(&self, coins: &mut dyn Coins) -> Result<Vec<Fe>, ProtocolError> {
        let f = &self.inst.field;
        let d = self.inst.d;
        for _ in 0..64 {
            let mut roots: Vec<Fe> = Vec::with_capacity(d - 1);
            while roots.len() + 1 < d {
                let a = coins.draw_fe(Namespace::Prover, f)?;
                if !roots.contains(&a) {
                    roots.push(a);
                }
            }
            let p = roots
                .iter()
                .fold(UniPoly::constant(f.one()), |acc, &a| acc.mul(f, &UniPoly::new(vec![f.neg(a), f.one()])));
            let p = p.padded(d);
            if sum_over(f, &p, &self.inst.h).0 != 0 {
                return Ok(p);
            }
        }
        Err(ProtocolError::Invalid("no shift polynomial with nonzero sum over H".into()))
    }
}

impl Responder for CheatingProver {
    fn receive(&mut self, msg: &[Fe], _coins: &mut dyn Coins) -> Result<(), ProtocolError> {
        let f = &self.inst.field;
        match (msg, self.rho) {
            ([r], None) => {
                self.rho = Some(*r);
                self.claim = f.mul(*r, self.inst.v);
                Ok(())
            }
            ([theta], Some(_)) if self.prefix.len() + 1 < self.inst.m => {
                self.claim = eval_coeffs(f, &self.last, *theta);
                self.prefix.push(*theta);
                Ok(())
            }
            _ => Err(ProtocolError::Shape("unexpected verifier message".into())),
        }
    }

    fn reply(&mut self, coins: &mut dyn Coins) -> Result<Vec<Fe>, ProtocolError> {
        let rho = self.rho.ok_or_else(|| ProtocolError::Shape("round polynomial requested before rho".into()))?;
        let inst = self.inst.clone();
        let f = &inst.field;
        let mut x = self.prefix.clone();
        x.push(Fe(0));
        let truth = round_poly(f, inst.d, |delta| {
            *x.last_mut().expect("nonempty") = delta;
            let r = if self.with_mask { self.mask(&x) } else { f.zero() };
            Ok(f.add(f.mul(rho, inst.poly.partial_sum(f, &x, &inst.h)), r))
        })?;
        let gap = f.sub(self.claim, sum_over(f, &truth, &inst.h));
        let g = if gap.0 == 0 {
            truth
        } else {
            let p = self.shift_poly(coins)?;
            let c = f.div(gap, sum_over(f, &p, &inst.h));
            truth.iter().zip(&p).map(|(&a, &b)| f.add(a, f.mul(c, b))).collect()
        };
        self.last = g.clone();
        Ok(g)
    }

    fn answer(&mut self, oracle: &str, point: &QueryPoint, _coins: &mut dyn Coins) -> Result<Fe, ProtocolError> {
        let x = expect_point(point, self.inst.m)?;
        match oracle {
            ORACLE_F => Ok(self.inst.poly.eval(&self.inst.field, x)),
            ORACLE_PI if self.with_mask => Ok(self.mask(x)),
            _ => Err(ProtocolError::UnknownOracle(oracle.into())),
        }
    }
}

/// Honest prover whose oracle is corrupted on a planted set of points.
pub struct CorruptedProver {
    inner: PzkProver,
    offsets: HashMap<Vec<Fe>, Fe>,
}

impl CorruptedProver {
    /// Corrupts `floor(fraction |F|^m)` distinct uniformly random points by
    /// uniformly random nonzero offsets. Requires `|F|^m <= 2^20`.
    pub fn new(inst: Arc<SumcheckInstance>, fraction: f64, coins: &mut dyn Coins) -> Result<Self, ProtocolError> {
        let f = inst.field.clone();
        let total = f
            .order()
            .checked_pow(inst.m as u32)
            .filter(|&n| n <= 1 << 20)
            .ok_or_else(|| ProtocolError::Invalid("|F|^m too large to plant a corruption".into()))?;
        let count = (fraction * total as f64).floor() as u64;
        let inner = PzkProver::new(inst.clone(), coins)?;
        let mut offsets = HashMap::new();
        while (offsets.len() as u64) < count {
            let mut idx = coins.draw(Namespace::Prover, total)?;
            let point: Vec<Fe> = (0..inst.m)
                .map(|_| {
                    let x = f.elem(idx % f.order());
                    idx /= f.order();
                    x
                })
                .collect();
            let delta = f.elem(1 + coins.draw(Namespace::Prover, f.order() - 1)?);
            offsets.entry(point).or_insert(delta);
        }
        Ok(CorruptedProver { inner, offsets })
    }

    pub fn corrupted(&self) -> usize {
        self.offsets.len()
    }
}

impl Responder for CorruptedProver {
    fn receive(&mut self, msg: &[Fe], coins: &mut dyn Coins) -> Result<(), ProtocolError> {
        self.inner.receive(msg, coins)
    }

    fn reply(&mut self, coins: &mut dyn Coins) -> Result<Vec<Fe>, ProtocolError> {
        self.inner.reply(coins)
    }

    fn answer(&mut self, oracle: &str, point: &QueryPoint, coins: &mut dyn Coins) -> Result<Fe, ProtocolError> {
        let v = self.inner.answer(oracle, point, coins)?;
        match (oracle, point) {
            (ORACLE_PI, QueryPoint::Tuple(x)) => match self.offsets.get(x) {
                Some(&delta) => Ok(self.inner.field().add(v, delta)),
                None => Ok(v),
            },
            _ => Ok(v),
        }
    }
}
