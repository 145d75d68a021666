use std::collections::BTreeMap;

use super::field::{Fe, Field};
use super::AlgebraError;

/// Univariate polynomial, coefficients in ascending degree. Trailing zeros
/// are allowed; [`UniPoly::degree`] ignores them.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UniPoly {
    pub coeffs: Vec<Fe>,
}

impl UniPoly {
    pub fn new(coeffs: Vec<Fe>) -> Self {
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Fe) -> Self {
        UniPoly { coeffs: vec![c] }
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| c.0 != 0)
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    pub fn trimmed(mut self) -> Self {
        let len = self.degree().map_or(0, |d| d + 1);
        self.coeffs.truncate(len);
        self
    }

    /// Pads or truncates to exactly `n` coefficients.
    pub fn padded(&self, n: usize) -> Vec<Fe> {
        let mut c = self.coeffs.clone();
        c.resize(n, Fe(0));
        c
    }

    pub fn eval(&self, f: &Field, x: Fe) -> Fe {
        self.coeffs.iter().rev().fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, f: &Field, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &UniPoly, i: usize| p.coeffs.get(i).copied().unwrap_or(Fe(0));
        UniPoly::new((0..n).map(|i| f.add(get(self, i), get(other, i))).collect())
    }

    pub fn scale(&self, f: &Field, s: Fe) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|&c| f.mul(c, s)).collect())
    }

    pub fn mul(&self, f: &Field, other: &UniPoly) -> UniPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return UniPoly::zero();
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.0 == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        UniPoly::new(out)
    }

    /// Quotient and remainder of division by a nonzero polynomial.
    pub fn divrem(&self, f: &Field, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(divisor.coeffs[dd]).expect("leading coefficient is nonzero");
        let mut rem = self.clone().trimmed().coeffs;
        if rem.len() <= dd {
            return (UniPoly::zero(), UniPoly::new(rem));
        }
        let mut quot = vec![f.zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = f.mul(rem[i], lead_inv);
            if c.0 == 0 {
                continue;
            }
            quot[i - dd] = c;
            for j in 0..=dd {
                rem[i - dd + j] = f.sub(rem[i - dd + j], f.mul(c, divisor.coeffs[j]));
            }
        }
        rem.truncate(dd);
        (UniPoly::new(quot), UniPoly::new(rem).trimmed())
    }

    /// The unique polynomial of degree `< points.len()` through the points.
    pub fn interpolate(f: &Field, points: &[(Fe, Fe)]) -> Result<UniPoly, AlgebraError> {
        for (i, (x, _)) in points.iter().enumerate() {
            if points[..i].iter().any(|(y, _)| y == x) {
                return Err(AlgebraError::DuplicateX(f.format(*x)));
            }
        }
        // Newton divided differences, then expansion into monomial form.
        let n = points.len();
        let xs: Vec<Fe> = points.iter().map(|p| p.0).collect();
        let mut dd: Vec<Fe> = points.iter().map(|p| p.1).collect();
        for level in 1..n {
            for i in (level..n).rev() {
                let num = f.sub(dd[i], dd[i - 1]);
                let den = f.sub(xs[i], xs[i - level]);
                dd[i] = f.div(num, den);
            }
        }
        let mut out = vec![f.zero(); n];
        for k in (0..n).rev() {
            // out = out * (X - x_k) + dd[k]
            let mut next = vec![f.zero(); n];
            for i in 0..n {
                if out[i].0 == 0 {
                    continue;
                }
                if i + 1 < n {
                    next[i + 1] = f.add(next[i + 1], out[i]);
                }
                next[i] = f.sub(next[i], f.mul(out[i], xs[k]));
            }
            next[0] = f.add(next[0], dd[k]);
            out = next;
        }
        Ok(UniPoly::new(out))
    }
}

/// `p_t = sum_{h in H} h^t` for `t < d`.
pub fn power_sums(f: &Field, h: &[Fe], d: usize) -> Vec<Fe> {
    (0..d).map(|t| f.sum(h.iter().map(|&x| f.pow(x, t as u64)))).collect()
}

/// `1, x, ..., x^{d-1}`.
pub fn powers(f: &Field, x: Fe, d: usize) -> Vec<Fe> {
    let mut out = Vec::with_capacity(d);
    let mut acc = f.one();
    for _ in 0..d {
        out.push(acc);
        acc = f.mul(acc, x);
    }
    out
}

/// Multivariate polynomial with individual degree `< d` in `m` variables,
/// stored sparsely by exponent vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    m: usize,
    d: usize,
    terms: BTreeMap<Vec<u32>, Fe>,
}

impl MultiPoly {
    pub fn zero(m: usize, d: usize) -> Self {
        MultiPoly { m, d, terms: BTreeMap::new() }
    }

    pub fn from_terms<I>(f: &Field, m: usize, d: usize, terms: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (Vec<u32>, Fe)>,
    {
        let mut p = MultiPoly::zero(m, d);
        for (e, c) in terms {
            p.add_term(f, e, c)?;
        }
        Ok(p)
    }

    pub fn add_term(&mut self, f: &Field, exps: Vec<u32>, c: Fe) -> Result<(), AlgebraError> {
        if exps.len() != self.m {
            return Err(AlgebraError::DimensionMismatch { expected: self.m, got: exps.len() });
        }
        if exps.iter().any(|&e| e as usize >= self.d) {
            return Err(AlgebraError::DegreeBound { bound: self.d });
        }
        let entry = self.terms.entry(exps).or_insert(Fe(0));
        *entry = f.add(*entry, c);
        if entry.0 == 0 {
            self.terms.retain(|_, v| v.0 != 0);
        }
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.m
    }

    pub fn degree_bound(&self) -> usize {
        self.d
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Fe)> {
        self.terms.iter()
    }

    pub fn eval(&self, f: &Field, x: &[Fe]) -> Result<Fe, AlgebraError> {
        if x.len() != self.m {
            return Err(AlgebraError::DimensionMismatch { expected: self.m, got: x.len() });
        }
        self.partial_sum(f, x, &[])
    }

    /// `sum_{g in H^{m-j}} P(prefix, g)` where `j = prefix.len()`.
    pub fn partial_sum(&self, f: &Field, prefix: &[Fe], h: &[Fe]) -> Result<Fe, AlgebraError> {
        if prefix.len() > self.m {
            return Err(AlgebraError::DimensionMismatch { expected: self.m, got: prefix.len() });
        }
        let weights: Vec<Vec<Fe>> = prefix.iter().map(|&a| powers(f, a, self.d)).collect();
        let sums = power_sums(f, h, self.d);
        Ok(f.sum(self.terms.iter().map(|(e, &c)| {
            e.iter().enumerate().fold(c, |acc, (i, &ei)| {
                let w = if i < prefix.len() { weights[i][ei as usize] } else { sums[ei as usize] };
                f.mul(acc, w)
            })
        })))
    }
}

/// Dense multivariate polynomial: coefficient of `X^e` sits at index
/// `sum_i e_i d^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMultiPoly {
    pub m: usize,
    pub d: usize,
    pub coeffs: Vec<Fe>,
}

impl DenseMultiPoly {
    pub fn new(m: usize, d: usize, coeffs: Vec<Fe>) -> Self {
        assert_eq!(coeffs.len(), d.pow(m as u32), "coefficient count must be d^m");
        DenseMultiPoly { m, d, coeffs }
    }

    /// Contracts variable `i` against `weights[i]` for every `i`.
    pub fn contract(&self, f: &Field, weights: &[Vec<Fe>]) -> Fe {
        debug_assert_eq!(weights.len(), self.m);
        let mut cur = self.coeffs.clone();
        for w in weights {
            cur = cur.chunks(self.d).map(|chunk| f.dot(chunk, w)).collect();
        }
        cur[0]
    }

    pub fn eval(&self, f: &Field, x: &[Fe]) -> Fe {
        let w: Vec<Vec<Fe>> = x.iter().map(|&a| powers(f, a, self.d)).collect();
        self.contract(f, &w)
    }

    pub fn partial_sum(&self, f: &Field, prefix: &[Fe], h: &[Fe]) -> Fe {
        let sums = power_sums(f, h, self.d);
        let w: Vec<Vec<Fe>> =
            (0..self.m).map(|i| if i < prefix.len() { powers(f, prefix[i], self.d) } else { sums.clone() }).collect();
        self.contract(f, &w)
    }

    pub fn to_sparse(&self) -> MultiPoly {
        let mut terms = BTreeMap::new();
        for (idx, &c) in self.coeffs.iter().enumerate() {
            if c.0 != 0 {
                terms.insert(exponents(idx, self.m, self.d), c);
            }
        }
        MultiPoly { m: self.m, d: self.d, terms }
    }
}

/// Exponent vector of the dense index `idx`.
pub fn exponents(mut idx: usize, m: usize, d: usize) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let e = (idx % d) as u32;
            idx /= d;
            e
        })
        .collect()
}
