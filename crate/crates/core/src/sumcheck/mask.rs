use crate::algebra::{exponents, power_sums, DenseMultiPoly, Fe, Field};
use crate::detect::{QueryPoint, SamplerSession, SrmCode};
use crate::protocol::{Coins, Namespace, ProtocolError};

/// Largest coefficient count `d^m` for which masks are sampled explicitly.
pub const MASK_COEFF_CAP: usize = 1 << 20;

/// A uniformly random `R` of individual degree `< d` with
/// `sum_{H^m} R = 0`, either sampled in full or revealed lazily.
pub enum MaskOracle {
    Explicit(DenseMultiPoly),
    /// Values drawn on demand from the conditional sampler of the
    /// partial-sum code, seeded with `R(bottom) = 0`.
    Lazy(Box<SamplerSession<SrmCode>>),
}

impl MaskOracle {
    /// `R(prefix)`: the partial sum over `H^{m - |prefix|}`, which for a full
    /// point is the evaluation.
    pub fn value(&mut self, f: &Field, h: &[Fe], prefix: &[Fe], coins: &mut dyn Coins) -> Result<Fe, ProtocolError> {
        match self {
            MaskOracle::Explicit(p) => Ok(p.partial_sum(f, prefix, h)),
            MaskOracle::Lazy(s) => Ok(s.answer(&QueryPoint::Tuple(prefix.to_vec()), coins, Namespace::Prover)?),
        }
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self, MaskOracle::Explicit(_))
    }
}

/// Index of the first monomial whose sum over `H^m` is nonzero, if any.
pub fn designated_monomial(f: &Field, m: usize, d: usize, h: &[Fe]) -> Option<usize> {
    let sums = power_sums(f, h, d);
    let j = sums.iter().position(|s| s.0 != 0)?;
    // X_1^j ... X_m^j has weight sums[j]^m, and j is the least such exponent
    Some((0..m).fold(0, |acc, _| acc * d + j))
}

/// Samples a uniform `R` with `sum_{H^m} R = 0` by drawing every coefficient
/// except the designated one and solving for it.
pub fn sample_mask_explicit(
    f: &Field,
    m: usize,
    d: usize,
    h: &[Fe],
    coins: &mut dyn Coins,
) -> Result<DenseMultiPoly, ProtocolError> {
    let n = d
        .checked_pow(m as u32)
        .filter(|&n| n <= MASK_COEFF_CAP)
        .ok_or_else(|| ProtocolError::Invalid(format!("d^m exceeds the mask cap {MASK_COEFF_CAP}")))?;
    let sums = power_sums(f, h, d);
    let weight = |idx: usize| exponents(idx, m, d).iter().fold(f.one(), |acc, &e| f.mul(acc, sums[e as usize]));
    let designated = designated_monomial(f, m, d, h);
    let mut coeffs = vec![f.zero(); n];
    for (i, c) in coeffs.iter_mut().enumerate() {
        if Some(i) != designated {
            *c = coins.draw_fe(Namespace::Prover, f)?;
        }
    }
    if let Some(e) = designated {
        let rest = f.sum((0..n).filter(|&i| i != e).map(|i| f.mul(coeffs[i], weight(i))));
        coeffs[e] = f.neg(f.div(rest, weight(e)));
    }
    Ok(DenseMultiPoly::new(m, d, coeffs))
}

/// Explicit mask when `d^m <= MASK_COEFF_CAP`, lazy otherwise.
pub fn sample_mask(
    f: &Field,
    m: usize,
    d: usize,
    h: &[Fe],
    coins: &mut dyn Coins,
) -> Result<MaskOracle, ProtocolError> {
    if d.checked_pow(m as u32).is_some_and(|n| n <= MASK_COEFF_CAP) {
        return Ok(MaskOracle::Explicit(sample_mask_explicit(f, m, d, h, coins)?));
    }
    Ok(MaskOracle::Lazy(Box::new(zero_sum_session(f, m, d, h)?)))
}

/// A sampler session for the partial-sum code with `R(bottom) = 0` fixed.
pub fn zero_sum_session(f: &Field, m: usize, d: usize, h: &[Fe]) -> Result<SamplerSession<SrmCode>, ProtocolError> {
    let mut s = SamplerSession::new(SrmCode::new(f, m, d, h.to_vec())?);
    s.insert(&QueryPoint::bottom(), f.zero())?;
    Ok(s)
}
