//! Browser bindings: three small operations over the core library, each returning JSON text.
//! The `*_json` functions are plain Rust so they can be tested natively.

use std::sync::Arc;

use serde_json::{json, Value};
use subdesign::design::{
    classify, construct_field_partition, construct_glued, construct_pseudoregulus, construct_twisted,
    hyperplane_weight_distribution, SubspaceDesign,
};
use subdesign::gf::{format_expr, parse_expr, FieldOps, FieldTower};
use subdesign::hamming::{ext_system, srg_from_two_intersection, weight_enumerator};
use subdesign::skewpoly::element_of_norm;
use subdesign::subspace::AmbientSpace;
use wasm_bindgen::prelude::*;

/// Sweeps in the page stay well under a second.
const DEMO_CAP: u64 = 200_000;

fn err(e: impl ToString) -> String {
    e.to_string()
}

fn tower(q: u32, m: usize) -> Result<Arc<FieldTower>, String> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).ok_or("q must be a prime power")?;
    let mut h = 0;
    let mut rest = q;
    while rest.is_multiple_of(p) {
        rest /= p;
        h += 1;
    }
    if rest != 1 {
        return Err(format!("{q} is not a prime power"));
    }
    FieldTower::with_defaults(p, h, m).map_err(err)
}

/// `kind` ∈ {twisted, pseudoregulus, glued, field-partition}; `t` members with norms 1, …, t.
pub fn build(kind: &str, q: u32, m: usize, k: usize, t: usize) -> Result<SubspaceDesign, String> {
    let tw = tower(q, m)?;
    let alphas = (1..=t as u32).map(|l| element_of_norm(&tw, l).map_err(err)).collect::<Result<Vec<_>, _>>();
    let full: Vec<u32> = (0..m).map(|j| tw.pow(tw.generator(), j as u64)).collect();
    match kind {
        "twisted" => {
            let a = AmbientSpace::new(&tw, k).map_err(err)?;
            construct_twisted(&a, &alphas?, 0, &vec![full; t]).map_err(err)
        }
        "pseudoregulus" => {
            let a = AmbientSpace::new(&tw, k).map_err(err)?;
            construct_pseudoregulus(&a, 1, &alphas?).map_err(err)
        }
        "glued" => construct_glued(&tw, k, 1, &alphas?).map_err(err),
        "field-partition" => construct_field_partition(&tw, k).map_err(err),
        _ => Err(format!("unknown construction `{kind}`")),
    }
}

/// Member dimensions and the exact profile for s = 1..k−1.
pub fn classify_json(kind: &str, q: u32, m: usize, k: usize, t: usize) -> Result<String, String> {
    let d = build(kind, q, m, k, t)?;
    let r = classify(&d, k.saturating_sub(1).max(1), DEMO_CAP).map_err(err)?;
    let levels: Vec<Value> = r
        .levels
        .iter()
        .map(|l| json!({ "s": l.profile.s, "a_min": l.profile.a_min, "design": l.is_design, "maximum": l.is_maximum }))
        .collect();
    Ok(json!({ "dims": r.dims, "levels": levels, "msrd": r.optimal, "t_bound_ok": r.t_bound_ok }).to_string())
}

/// Hyperplane histogram, Ext weight enumerator and, for two-intersection sets, SRG parameters.
pub fn two_weight_json(kind: &str, q: u32, m: usize, k: usize, t: usize) -> Result<String, String> {
    let d = build(kind, q, m, k, t)?;
    let hist = hyperplane_weight_distribution(&d, DEMO_CAP).map_err(err)?;
    let ext = ext_system(&d, DEMO_CAP).map_err(err)?;
    let en = weight_enumerator(&ext, DEMO_CAP).map_err(err)?;
    let srg = srg_from_two_intersection(&ext, DEMO_CAP).ok();
    let text = |m: Vec<(String, String)>| Value::Object(m.into_iter().map(|(k, v)| (k, Value::String(v))).collect());
    Ok(json!({
        "histogram": text(hist.counts.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()),
        "closed_form_checked": hist.max1_checked,
        "enumerator": text(en.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()),
        "srg": srg.map(|p| [p.v, p.k, p.lambda, p.mu].map(|x| x.to_string())),
    })
    .to_string())
}

/// `a op b` in F_{q^m} for op ∈ {+, -, *, /}, with norm and trace of the result.
pub fn field_json(q: u32, m: usize, a: &str, op: &str, b: &str) -> Result<String, String> {
    let t = tower(q, m)?;
    let x = parse_expr(&t, a).map_err(err)?;
    let y = parse_expr(&t, b).map_err(err)?;
    let r = match op {
        "+" => t.add(x, y),
        "-" => t.sub(x, y),
        "*" => t.mul(x, y),
        "/" if y == 0 => return Err("division by zero".into()),
        "/" => t.mul(x, t.inv(y)),
        _ => return Err(format!("unknown operator `{op}`")),
    };
    Ok(json!({
        "result": format_expr(&t, r), "digits": t.digits(r),
        "norm": format_expr(&t, t.norm(r)), "trace": format_expr(&t, t.trace(r)),
    })
    .to_string())
}

#[wasm_bindgen]
pub fn classify_design(kind: &str, q: u32, m: usize, k: usize, t: usize) -> Result<String, JsError> {
    classify_json(kind, q, m, k, t).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn two_weight(kind: &str, q: u32, m: usize, k: usize, t: usize) -> Result<String, JsError> {
    two_weight_json(kind, q, m, k, t).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn field_op(q: u32, m: usize, a: &str, op: &str, b: &str) -> Result<String, JsError> {
    field_json(q, m, a, op, b).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pseudoregulus_is_maximum() {
        let v: Value = serde_json::from_str(&classify_json("pseudoregulus", 3, 2, 2, 2).unwrap()).unwrap();
        assert_eq!(v["dims"], json!([2, 2]));
        assert_eq!(v["levels"][0]["maximum"], true);
    }

    #[test]
    fn twisted_srg() {
        let v: Value = serde_json::from_str(&two_weight_json("twisted", 2, 2, 2, 1).unwrap()).unwrap();
        assert_eq!(v["srg"], json!(["16", "9", "4", "6"]));
        assert_eq!(v["enumerator"], json!({ "0": "1", "2": "9", "3": "6" }));
    }

    #[test]
    fn field_ops() {
        let v: Value = serde_json::from_str(&field_json(3, 2, "i+1", "/", "i+1").unwrap()).unwrap();
        assert_eq!((&v["result"], &v["norm"], &v["trace"]), (&json!("1"), &json!("1"), &json!("2")));
        assert!(field_json(3, 2, "1", "/", "0").is_err());
        assert!(build("nope", 2, 2, 2, 1).is_err());
    }
}
