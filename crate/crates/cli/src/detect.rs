use pzk_core::algebra::Field;
use pzk_core::bsrs::{BsrsCode, BsrsIndex};
use pzk_core::detect::{Detector, QueryPoint, SrmCode};
use pzk_core::sumcheck::field_label;
use serde_json::json;

use crate::args::{DetectBsrsArgs, DetectSrmArgs};
use crate::output::{read_json, usage, CliError, Outcome};

fn read_points(f: &Field, path: &std::path::Path) -> Result<Vec<QueryPoint>, CliError> {
    let v = read_json(path)?;
    let items = v.as_array().ok_or_else(|| usage(format!("{}: expected a JSON array of points", path.display())))?;
    items.iter().map(|p| QueryPoint::from_json(f, p).map_err(usage)).collect()
}

pub fn srm(a: &DetectSrmArgs) -> Result<Outcome, CliError> {
    let f = Field::from_spec(&a.field).map_err(usage)?;
    let h = a.h.iter().map(|x| f.parse(x).map_err(usage)).collect::<Result<Vec<_>, _>>()?;
    let code = SrmCode::new(&f, a.m, a.d, h.clone()).map_err(usage)?;
    let points = read_points(&f, &a.queries)?;
    if let Some(p) = points.iter().find(|p| !matches!(p, QueryPoint::Tuple(_))) {
        return Err(usage(format!("{p} is not a tuple")));
    }
    let basis = code.detect(&points).map_err(usage)?;
    let report = json!({
        "code": {
            "family": "srm",
            "field": field_label(&f),
            "m": a.m,
            "d": a.d,
            "H": h.iter().map(|&x| f.format(x)).collect::<Vec<_>>(),
        },
        "rank": basis.rank(),
        "basis": basis.to_json(&f),
    });
    Ok(Outcome::new(report, true))
}

pub fn bsrs(a: &DetectBsrsArgs) -> Result<Outcome, CliError> {
    let idx = BsrsIndex::standard(a.e, a.dim_l, a.mu, a.k).map_err(usage)?;
    let code = BsrsCode::new(&idx).map_err(usage)?;
    let f = idx.field.clone();
    let points = read_points(&f, &a.queries)?;
    let basis = code.detect(&points).map_err(usage)?;
    let report = json!({
        "code": {
            "family": "bsrs",
            "field": field_label(&f),
            "dimL": a.dim_l,
            "mu": a.mu,
            "k": a.k,
            "length": code.root().len(),
        },
        "rank": basis.rank(),
        "basis": basis.to_json(&f),
    });
    Ok(Outcome::new(report, true))
}
