use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::algebra::{Fe, Field};

/// Which party a random draw belongs to. Verifier draws are public and end
/// up in the view; prover and simulator draws stay private.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Namespace {
    Verifier,
    Prover,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoinError {
    #[error("randomness budget of {0} draws exhausted")]
    BudgetExceeded(usize),
    #[error("draw {index} asked for range {got} but an earlier path saw {expected}")]
    Nondeterministic { index: usize, expected: u64, got: u64 },
    #[error("cannot draw from an empty range")]
    EmptyRange,
    #[error("enumeration exceeded {0} paths")]
    TooManyPaths(u64),
}

/// Source of uniform integers in `[0, n)`.
pub trait Coins {
    fn draw(&mut self, ns: Namespace, n: u64) -> Result<u64, CoinError>;

    fn draw_fe(&mut self, ns: Namespace, f: &Field) -> Result<Fe, CoinError> {
        Ok(f.elem(self.draw(ns, f.order())?))
    }
}

/// Deterministic coins from a 64-bit seed, one ChaCha20 stream per namespace.
#[derive(Clone, Debug)]
pub struct SeededCoins {
    verifier: ChaCha20Rng,
    prover: ChaCha20Rng,
}

impl SeededCoins {
    pub fn new(seed: u64) -> Self {
        let mut verifier = ChaCha20Rng::seed_from_u64(seed);
        verifier.set_stream(0);
        let mut prover = ChaCha20Rng::seed_from_u64(seed);
        prover.set_stream(1);
        SeededCoins { verifier, prover }
    }
}

impl Coins for SeededCoins {
    fn draw(&mut self, ns: Namespace, n: u64) -> Result<u64, CoinError> {
        if n == 0 {
            return Err(CoinError::EmptyRange);
        }
        let rng = match ns {
            Namespace::Verifier => &mut self.verifier,
            Namespace::Prover => &mut self.prover,
        };
        Ok(rng.gen_range(0..n))
    }
}

/// Coins that replay a fixed prefix of choices and answer `0` beyond it,
/// recording every draw. Driven by [`enumerate`].
#[derive(Clone, Debug)]
pub struct EnumCoins {
    prefix: Vec<u64>,
    trace: Vec<(u64, u64)>,
    budget: usize,
}

impl EnumCoins {
    pub fn new(prefix: Vec<u64>, budget: usize) -> Self {
        EnumCoins { prefix, trace: Vec::new(), budget }
    }

    /// `(choice, range)` for every draw made so far.
    pub fn trace(&self) -> &[(u64, u64)] {
        &self.trace
    }

    /// Probability of the recorded path under uniform coins.
    pub fn weight(&self) -> BigRational {
        let denom = self.trace.iter().fold(BigInt::one(), |acc, &(_, n)| acc * BigInt::from(n));
        BigRational::new(BigInt::one(), denom)
    }
}

impl Coins for EnumCoins {
    fn draw(&mut self, _ns: Namespace, n: u64) -> Result<u64, CoinError> {
        if n == 0 {
            return Err(CoinError::EmptyRange);
        }
        let i = self.trace.len();
        if i >= self.budget {
            return Err(CoinError::BudgetExceeded(self.budget));
        }
        let c = self.prefix.get(i).copied().unwrap_or(0);
        if c >= n {
            return Err(CoinError::Nondeterministic { index: i, expected: c + 1, got: n });
        }
        self.trace.push((c, n));
        Ok(c)
    }
}

/// Runs `run` once per coin path in depth-first order and returns each
/// outcome with its exact probability. `run` must be deterministic given the
/// coins it draws.
pub fn enumerate<T, E, F>(budget: usize, max_paths: u64, mut run: F) -> Result<Vec<(T, BigRational)>, E>
where
    F: FnMut(&mut EnumCoins) -> Result<T, E>,
    E: From<CoinError>,
{
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    loop {
        if out.len() as u64 >= max_paths {
            return Err(CoinError::TooManyPaths(max_paths).into());
        }
        let mut coins = EnumCoins::new(prefix, budget);
        let value = run(&mut coins)?;
        let weight = coins.weight();
        out.push((value, weight));
        let mut trace = coins.trace;
        while let Some(&(c, n)) = trace.last() {
            if c + 1 < n {
                break;
            }
            trace.pop();
        }
        let Some(last) = trace.last_mut() else {
            return Ok(out);
        };
        last.0 += 1;
        prefix = trace.into_iter().map(|(c, _)| c).collect();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn enumeration_weights_sum_to_one() {
        let paths = enumerate::<_, CoinError, _>(10, 1000, |c| {
            let a = c.draw(Namespace::Verifier, 3)?;
            let b = if a == 0 { c.draw(Namespace::Prover, 4)? } else { 0 };
            Ok((a, b))
        })
        .unwrap();
        assert_eq!(paths.len(), 6);
        let total = paths.iter().fold(BigRational::zero(), |acc, (_, w)| acc + w);
        assert!(total.is_one());
        assert_eq!(paths[0].1, BigRational::new(1.into(), 12.into()));
    }

    #[test]
    fn budget_is_enforced() {
        let r = enumerate::<(), CoinError, _>(2, 100, |c| {
            for _ in 0..3 {
                c.draw(Namespace::Verifier, 2)?;
            }
            Ok(())
        });
        assert_eq!(r, Err(CoinError::BudgetExceeded(2)));
    }

    #[test]
    fn seeded_streams_are_independent_of_interleaving() {
        let mut a = SeededCoins::new(9);
        let mut b = SeededCoins::new(9);
        let x: Vec<u64> = (0..5).map(|_| a.draw(Namespace::Verifier, 1000).unwrap()).collect();
        let _ = b.draw(Namespace::Prover, 1000).unwrap();
        let y: Vec<u64> = (0..5).map(|_| b.draw(Namespace::Verifier, 1000).unwrap()).collect();
        assert_eq!(x, y);
    }
}
