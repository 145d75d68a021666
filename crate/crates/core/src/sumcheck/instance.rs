use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::{DenseMultiPoly, Fe, Field, MultiPoly};
use crate::protocol::ProtocolError;

/// Oracle access to an `m`-variate polynomial of individual degree `< d`.
pub trait PolyOracle: Send + Sync {
    fn num_vars(&self) -> usize;

    fn eval(&self, f: &Field, x: &[Fe]) -> Fe;

    /// `sum_{s in H^{m-j}} P(prefix, s)` for `j = prefix.len()`. The default
    /// enumerates `H^{m-j}`.
    fn partial_sum(&self, f: &Field, prefix: &[Fe], h: &[Fe]) -> Fe {
        let m = self.num_vars();
        let free = m - prefix.len();
        let mut point: Vec<Fe> = prefix.to_vec();
        point.resize(m, Fe(0));
        let mut digits = vec![0usize; free];
        let mut acc = f.zero();
        if h.is_empty() && free > 0 {
            return acc;
        }
        loop {
            for (i, &di) in digits.iter().enumerate() {
                point[prefix.len() + i] = h[di];
            }
            acc = f.add(acc, self.eval(f, &point));
            let mut i = 0;
            loop {
                if i == free {
                    return acc;
                }
                digits[i] += 1;
                if digits[i] < h.len() {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }
}

impl PolyOracle for MultiPoly {
    fn num_vars(&self) -> usize {
        MultiPoly::num_vars(self)
    }

    fn eval(&self, f: &Field, x: &[Fe]) -> Fe {
        MultiPoly::eval(self, f, x).expect("point has m coordinates")
    }

    fn partial_sum(&self, f: &Field, prefix: &[Fe], h: &[Fe]) -> Fe {
        MultiPoly::partial_sum(self, f, prefix, h).expect("prefix is at most m long")
    }
}

impl PolyOracle for DenseMultiPoly {
    fn num_vars(&self) -> usize {
        self.m
    }

    fn eval(&self, f: &Field, x: &[Fe]) -> Fe {
        DenseMultiPoly::eval(self, f, x)
    }

    fn partial_sum(&self, f: &Field, prefix: &[Fe], h: &[Fe]) -> Fe {
        DenseMultiPoly::partial_sum(self, f, prefix, h)
    }
}

/// A sumcheck claim `sum_{x in H^m} F(x) = v` with oracle access to `F`.
#[derive(Clone)]
pub struct SumcheckInstance {
    pub field: Field,
    pub m: usize,
    pub d: usize,
    pub h: Vec<Fe>,
    pub v: Fe,
    pub poly: Arc<dyn PolyOracle>,
}

impl std::fmt::Debug for SumcheckInstance {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(out, "SumcheckInstance({})", self.public_input())
    }
}

impl SumcheckInstance {
    /// Requires `d >= 1`, `2md < |F|`, `H` a nonempty set of distinct field
    /// elements and `poly` to have `m` variables.
    pub fn new(
        field: &Field,
        m: usize,
        d: usize,
        h: Vec<Fe>,
        v: Fe,
        poly: Arc<dyn PolyOracle>,
    ) -> Result<Self, ProtocolError> {
        let q = field.order();
        if 2 * (m as u64) * (d as u64) >= q {
            return Err(ProtocolError::Invalid(format!("md/|F| = {}/{q} is not below 1/2", m * d)));
        }
        Self::new_unchecked(field, m, d, h, v, poly)
    }

    /// Like [`SumcheckInstance::new`] but without the `2md < |F|` bound,
    /// for small classic-sumcheck examples where soundness is not at stake.
    pub fn new_unchecked(
        field: &Field,
        m: usize,
        d: usize,
        h: Vec<Fe>,
        v: Fe,
        poly: Arc<dyn PolyOracle>,
    ) -> Result<Self, ProtocolError> {
        let q = field.order();
        if d == 0 || m == 0 || d as u64 > q {
            return Err(ProtocolError::Invalid("need 1 <= d <= |F| and m >= 1".into()));
        }
        if h.is_empty() || h.iter().any(|x| x.0 >= q) || (1..h.len()).any(|i| h[..i].contains(&h[i])) {
            return Err(ProtocolError::Invalid("H must be a nonempty set of field elements".into()));
        }
        if v.0 >= q {
            return Err(ProtocolError::Invalid("v is not a field element".into()));
        }
        if poly.num_vars() != m {
            return Err(ProtocolError::Invalid(format!("polynomial has {} variables, expected {m}", poly.num_vars())));
        }
        Ok(SumcheckInstance { field: field.clone(), m, d, h, v, poly })
    }

    /// Same instance with a different claimed value.
    pub fn with_claim(&self, v: Fe) -> Self {
        SumcheckInstance { v, ..self.clone() }
    }

    pub fn true_sum(&self) -> Fe {
        self.poly.partial_sum(&self.field, &[], &self.h)
    }

    pub fn is_yes(&self) -> bool {
        self.true_sum() == self.v
    }

    /// The public part of the instance, used as the view input.
    pub fn public_input(&self) -> String {
        let f = &self.field;
        json!({
            "field": field_label(f),
            "m": self.m,
            "d": self.d,
            "H": self.h.iter().map(|&x| f.format(x)).collect::<Vec<_>>(),
            "v": f.format(self.v),
        })
        .to_string()
    }

    /// Parses `{field, m, d, H, v, poly: {terms: [{exp, coeff}]}}`.
    pub fn from_json(v: &Value) -> Result<Self, ProtocolError> {
        let bad = |k: &str| ProtocolError::Invalid(format!("instance JSON: missing or bad `{k}`"));
        let field_spec = match v.get("field") {
            Some(Value::String(s)) => s.clone(),
            Some(Value::Number(n)) => n.to_string(),
            _ => return Err(bad("field")),
        };
        let f = Field::from_spec(&field_spec)?;
        let m = v.get("m").and_then(Value::as_u64).ok_or_else(|| bad("m"))? as usize;
        let d = v.get("d").and_then(Value::as_u64).ok_or_else(|| bad("d"))? as usize;
        let elem = |x: &Value| -> Result<Fe, ProtocolError> {
            match x {
                Value::String(s) => Ok(f.parse(s)?),
                Value::Number(n) => n.as_i64().map(|i| f.from_i64(i)).ok_or_else(|| bad("element")),
                _ => Err(bad("element")),
            }
        };
        let h = v
            .get("H")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("H"))?
            .iter()
            .map(elem)
            .collect::<Result<Vec<_>, _>>()?;
        let terms =
            v.get("poly").and_then(|p| p.get("terms")).and_then(Value::as_array).ok_or_else(|| bad("poly.terms"))?;
        let mut poly = MultiPoly::zero(m, d);
        for t in terms {
            let exps = t
                .get("exp")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("exp"))?
                .iter()
                .map(|e| e.as_u64().map(|e| e as u32).ok_or_else(|| bad("exp")))
                .collect::<Result<Vec<_>, _>>()?;
            let c = elem(t.get("coeff").ok_or_else(|| bad("coeff"))?)?;
            poly.add_term(&f, exps, c)?;
        }
        let claim = match v.get("v") {
            Some(x) => elem(x)?,
            None => poly.partial_sum(&f, &[], &h)?,
        };
        SumcheckInstance::new(&f, m, d, h, claim, Arc::new(poly))
    }
}

/// `"17"` for prime fields, `"2^4"` for binary ones.
pub fn field_label(f: &Field) -> String {
    if f.is_binary() {
        format!("2^{}", f.extension_degree())
    } else {
        f.order().to_string()
    }
}

/// The univariate polynomial of degree `< d` through `(x_j, value(x_j))`
/// for the first `d` field elements `x_j`, as a coefficient list of length `d`.
pub fn round_poly(
    f: &Field,
    d: usize,
    mut value: impl FnMut(Fe) -> Result<Fe, ProtocolError>,
) -> Result<Vec<Fe>, ProtocolError> {
    let pts = f.elements().take(d).map(|x| Ok((x, value(x)?))).collect::<Result<Vec<_>, ProtocolError>>()?;
    Ok(crate::algebra::UniPoly::interpolate(f, &pts)?.padded(d))
}

/// Evaluates a coefficient list at `x`.
pub fn eval_coeffs(f: &Field, coeffs: &[Fe], x: Fe) -> Fe {
    coeffs.iter().rev().fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
}

/// `sum_{h in H} g(h)`.
pub fn sum_over(f: &Field, coeffs: &[Fe], h: &[Fe]) -> Fe {
    f.sum(h.iter().map(|&x| eval_coeffs(f, coeffs, x)))
}
