use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Display;
use std::hash::Hash;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::stats::{pooled_chi_square, ChiSquare};

use super::coins::{enumerate, EnumCoins};
use super::ProtocolError;

/// Default sample count per side of a chi-square audit.
pub const CHI2_SAMPLES: u64 = 100_000;
/// Default significance of a chi-square audit.
pub const CHI2_ALPHA: f64 = 0.001;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuditMode {
    Exact,
    ChiSquare,
}

/// One projection's chi-square result.
#[derive(Clone, Debug)]
pub struct ProjectionTest {
    pub support: usize,
    pub test: ChiSquare,
    /// Significance after splitting `alpha` across projections.
    pub threshold: f64,
    pub histogram_a: BTreeMap<String, u64>,
    pub histogram_b: BTreeMap<String, u64>,
}

#[derive(Clone, Debug)]
pub struct AuditReport {
    pub mode: AuditMode,
    /// Size of the union of both supports (summed over projections in
    /// chi-square mode).
    pub support_size: usize,
    /// Exact mode: `(outcome, P_A, P_B)` over the joint support.
    pub exact: Vec<(String, BigRational, BigRational)>,
    pub paths: (usize, usize),
    pub projections: Vec<ProjectionTest>,
    pub samples: u64,
    pub alpha: f64,
    /// Exact: the distributions are identical. Chi-square: no projection
    /// rejects homogeneity.
    pub equal: bool,
}

impl AuditReport {
    pub fn to_json(&self) -> Value {
        let mode = match self.mode {
            AuditMode::Exact => "exact",
            AuditMode::ChiSquare => "chi-square",
        };
        let mut v = json!({
            "mode": mode,
            "support_size": self.support_size,
            "verdict": if self.equal { "equal" } else { "different" },
        });
        match self.mode {
            AuditMode::Exact => {
                v["paths"] = json!([self.paths.0, self.paths.1]);
                v["distributions"] = self
                    .exact
                    .iter()
                    .map(|(k, a, b)| json!({"outcome": k, "a": a.to_string(), "b": b.to_string()}))
                    .collect();
            }
            AuditMode::ChiSquare => {
                v["samples"] = json!(self.samples);
                v["alpha"] = json!(self.alpha);
                v["projections"] = self
                    .projections
                    .iter()
                    .map(|p| {
                        json!({
                            "support": p.support,
                            "statistic": p.test.statistic,
                            "df": p.test.df,
                            "p_value": p.test.p_value,
                            "threshold": p.threshold,
                        })
                    })
                    .collect();
            }
        }
        v
    }
}

fn collect_distribution<K: Ord>(paths: Vec<(K, BigRational)>) -> BTreeMap<K, BigRational> {
    let mut d = BTreeMap::new();
    for (k, w) in paths {
        *d.entry(k).or_insert_with(BigRational::zero) += w;
    }
    d
}

/// Enumerates every coin path of both processes (each with at most `budget`
/// draws) and compares the resulting outcome distributions exactly.
pub fn audit_exact<K, A, B>(budget: usize, max_paths: u64, a: A, b: B) -> Result<AuditReport, ProtocolError>
where
    K: Ord + Display,
    A: FnMut(&mut EnumCoins) -> Result<K, ProtocolError>,
    B: FnMut(&mut EnumCoins) -> Result<K, ProtocolError>,
{
    let pa = enumerate(budget, max_paths, a)?;
    let pb = enumerate(budget, max_paths, b)?;
    let paths = (pa.len(), pb.len());
    let da = collect_distribution(pa);
    let db = collect_distribution(pb);
    let keys: BTreeSet<&K> = da.keys().chain(db.keys()).collect();
    let exact: Vec<(String, BigRational, BigRational)> = keys
        .iter()
        .map(|k| {
            let get = |d: &BTreeMap<K, BigRational>| d.get(*k).cloned().unwrap_or_else(BigRational::zero);
            (k.to_string(), get(&da), get(&db))
        })
        .collect();
    let equal = exact.iter().all(|(_, x, y)| x == y);
    Ok(AuditReport {
        mode: AuditMode::Exact,
        support_size: exact.len(),
        exact,
        paths,
        projections: Vec::new(),
        samples: 0,
        alpha: 0.0,
        equal,
    })
}

/// Seed of trial `i` on side `side` derived from `base`.
pub fn trial_seed(base: u64, side: u64, i: u64) -> u64 {
    let mut z = base ^ side.wrapping_mul(0xD1B5_4A32_D192_ED03) ^ i.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

type Histograms<K> = Vec<HashMap<K, u64>>;

fn sample_histograms<K, S>(
    n: u64,
    base: u64,
    side: u64,
    projections: usize,
    sample: &S,
) -> Result<Histograms<K>, ProtocolError>
where
    K: Hash + Eq + Send,
    S: Fn(u64) -> Result<Vec<K>, ProtocolError> + Sync,
{
    (0..n)
        .into_par_iter()
        .try_fold(
            || (0..projections).map(|_| HashMap::new()).collect::<Histograms<K>>(),
            |mut h, i| {
                let keys = sample(trial_seed(base, side, i))?;
                if keys.len() != projections {
                    return Err(ProtocolError::Shape(format!("sampler returned {} projections", keys.len())));
                }
                for (hp, k) in h.iter_mut().zip(keys) {
                    *hp.entry(k).or_insert(0) += 1;
                }
                Ok(h)
            },
        )
        .try_reduce(
            || (0..projections).map(|_| HashMap::new()).collect(),
            |mut x, y| {
                for (hx, hy) in x.iter_mut().zip(y) {
                    for (k, c) in hy {
                        *hx.entry(k).or_insert(0) += c;
                    }
                }
                Ok(x)
            },
        )
}

/// Draws `n` samples from each process and runs one pooled Pearson test per
/// projection at significance `alpha / projections`. Sample `i` of a side is
/// computed from [`trial_seed`], so results do not depend on thread count.
pub fn audit_chi_square<K, A, B>(
    n: u64,
    alpha: f64,
    base_seed: u64,
    projections: usize,
    a: A,
    b: B,
) -> Result<AuditReport, ProtocolError>
where
    K: Hash + Eq + Ord + Display + Send,
    A: Fn(u64) -> Result<Vec<K>, ProtocolError> + Sync,
    B: Fn(u64) -> Result<Vec<K>, ProtocolError> + Sync,
{
    let ha = sample_histograms(n, base_seed, 1, projections, &a)?;
    let hb = sample_histograms(n, base_seed, 2, projections, &b)?;
    let threshold = alpha / projections.max(1) as f64;
    let mut tests = Vec::with_capacity(projections);
    for (xa, xb) in ha.into_iter().zip(hb) {
        let mut xa: BTreeMap<K, u64> = xa.into_iter().collect();
        let mut xb: BTreeMap<K, u64> = xb.into_iter().collect();
        let keys: BTreeSet<&K> = xa.keys().chain(xb.keys()).collect();
        let ca: Vec<u64> = keys.iter().map(|k| xa.get(*k).copied().unwrap_or(0)).collect();
        let cb: Vec<u64> = keys.iter().map(|k| xb.get(*k).copied().unwrap_or(0)).collect();
        let support = keys.len();
        let test = pooled_chi_square(&ca, &cb);
        let render =
            |m: &mut BTreeMap<K, u64>| std::mem::take(m).into_iter().map(|(k, c)| (k.to_string(), c)).collect();
        tests.push(ProjectionTest {
            support,
            test,
            threshold,
            histogram_a: render(&mut xa),
            histogram_b: render(&mut xb),
        });
    }
    let equal = tests.iter().all(|t| t.test.p_value >= t.threshold);
    Ok(AuditReport {
        mode: AuditMode::ChiSquare,
        support_size: tests.iter().map(|t| t.support).sum(),
        exact: Vec::new(),
        paths: (0, 0),
        projections: tests,
        samples: n,
        alpha,
        equal,
    })
}
