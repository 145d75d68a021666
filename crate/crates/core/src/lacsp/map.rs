use rand::Rng;

use crate::algebra::{Fe, Field};

/// A map `g: F^l -> F^l` whose `j`-th output depends only on the inputs at
/// `support(j)`, a set of exactly `locality()` positions.
pub trait LocalMap: Send + Sync {
    fn name(&self) -> String;

    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `q`.
    fn locality(&self) -> usize;

    /// `I_j`, in the order `eval_local` expects its values.
    fn support(&self, j: usize) -> Vec<usize>;

    /// `g(w)[j]` from `w` restricted to `support(j)`.
    fn eval_local(&self, f: &Field, j: usize, values: &[Fe]) -> Fe;
}

/// `g(w) = w`.
#[derive(Clone, Debug)]
pub struct IdentityMap {
    len: usize,
}

impl IdentityMap {
    pub fn new(len: usize) -> Self {
        IdentityMap { len }
    }
}

impl LocalMap for IdentityMap {
    fn name(&self) -> String {
        "identity".into()
    }

    fn len(&self) -> usize {
        self.len
    }

    fn locality(&self) -> usize {
        1
    }

    fn support(&self, j: usize) -> Vec<usize> {
        vec![j]
    }

    fn eval_local(&self, _f: &Field, _j: usize, values: &[Fe]) -> Fe {
        values[0]
    }
}

/// `g(w)[j] = a w[j] + b w[j + 1 mod l]`, a 2-local linear map.
#[derive(Clone, Debug)]
pub struct PairMap {
    len: usize,
    a: Fe,
    b: Fe,
}

impl PairMap {
    pub fn new(len: usize, a: Fe, b: Fe) -> Self {
        PairMap { len, a, b }
    }
}

impl LocalMap for PairMap {
    fn name(&self) -> String {
        format!("pair({},{})", self.a.0, self.b.0)
    }

    fn len(&self) -> usize {
        self.len
    }

    fn locality(&self) -> usize {
        2
    }

    fn support(&self, j: usize) -> Vec<usize> {
        vec![j, (j + 1) % self.len]
    }

    fn eval_local(&self, f: &Field, _j: usize, values: &[Fe]) -> Fe {
        f.add(f.mul(self.a, values[0]), f.mul(self.b, values[1]))
    }
}

/// `g(w)` evaluated position by position.
pub fn apply_map(g: &dyn LocalMap, f: &Field, w: &[Fe]) -> Vec<Fe> {
    (0..g.len())
        .map(|j| {
            let vals: Vec<Fe> = g.support(j).iter().map(|&i| w[i]).collect();
            g.eval_local(f, j, &vals)
        })
        .collect()
}

/// Number of trials in which re-randomising every position outside `I_j`
/// changed `g(w)[j]`, for random `w` and `j`.
pub fn locality_violations<R: Rng + ?Sized>(g: &dyn LocalMap, f: &Field, trials: usize, rng: &mut R) -> usize {
    let n = g.len();
    (0..trials)
        .filter(|_| {
            let w: Vec<Fe> = (0..n).map(|_| f.random(rng)).collect();
            let j = rng.gen_range(0..n);
            let support = g.support(j);
            let mut v = w.clone();
            for (i, x) in v.iter_mut().enumerate() {
                if !support.contains(&i) {
                    *x = f.random(rng);
                }
            }
            apply_map(g, f, &w)[j] != apply_map(g, f, &v)[j]
        })
        .count()
}

/// Fraction of `j` whose support meets `set`.
pub fn evasiveness(g: &dyn LocalMap, set: &[usize]) -> f64 {
    let hits = (0..g.len()).filter(|&j| g.support(j).iter().any(|i| set.contains(i))).count();
    hits as f64 / g.len() as f64
}
