//! Browser bindings for the static demo page in `www/`.
//!
//! Every export returns a JSON string; errors surface as a thrown string.

use cartan_core::domain::{
    on_shilov, perturb_off_shilov, sample_shilov, shilov_defect, DomainDescriptor,
};
use cartan_core::linalg::{gaussian_matrix, svd, youla_canonical, youla_residual};
use cartan_core::verify::verify_equivalence;
use serde_json::json;
use wasm_bindgen::prelude::*;

const TOL: f64 = 1e-8;

fn parse(domain: &str) -> Result<DomainDescriptor, JsValue> {
    domain
        .parse()
        .map_err(|e: cartan_core::Error| JsValue::from_str(&e.to_string()))
}

fn js_err(e: cartan_core::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Samples `count` Shilov points, multiplies them by `scale`, and tests membership.
#[wasm_bindgen]
pub fn sample_points(domain: &str, count: u32, seed: u32, scale: f64) -> Result<String, JsValue> {
    let d = parse(domain)?;
    if !(scale > 0.0 && scale <= 1.0) {
        return Err(JsValue::from_str("scale must lie in (0, 1]"));
    }
    let mut rows = Vec::new();
    for z in sample_shilov(&d, count.min(500) as usize, seed.into()) {
        let z = if scale < 1.0 {
            perturb_off_shilov(&d, &z, scale, TOL).map_err(js_err)?
        } else {
            z
        };
        rows.push(json!({
            "point": z,
            "on_shilov": on_shilov(&d, &z, TOL).map_err(js_err)?,
            "defect": shilov_defect(&d, &z).map_err(js_err)?,
        }));
    }
    Ok(json!({ "descriptor": d, "dimension": d.dimension(), "points": rows }).to_string())
}

/// Canonical form of `G − Gᵗ` for a seeded Gaussian `n × n` matrix `G`.
#[wasm_bindgen]
pub fn canonical_form(n: u32, seed: u32) -> Result<String, JsValue> {
    let n = n.clamp(1, 12) as usize;
    let g = gaussian_matrix(n, n, seed.into());
    let z = &g - &g.transpose();
    let form = youla_canonical(&z, 1e-10).map_err(js_err)?;
    let singular = svd(&z).map_err(js_err)?.sigmas;
    Ok(json!({
        "n": n,
        "sigmas": form.sigmas,
        "singular_values": singular,
        "residual": youla_residual(&z, &form),
    })
    .to_string())
}

/// Spectral vs identity classification on random normal tuples.
#[wasm_bindgen]
pub fn equivalence_sweep(domain: &str, trials: u32, seed: u32) -> Result<String, JsValue> {
    let d = parse(domain)?;
    let r = verify_equivalence(&d, trials.min(500) as usize, seed.into(), TOL).map_err(js_err)?;
    let positives = r.outcomes.iter().filter(|o| o.all_shilov).count();
    let worst = r
        .outcomes
        .iter()
        .filter(|o| o.all_shilov)
        .map(|o| o.max_residual)
        .fold(0.0, f64::max);
    Ok(json!({
        "descriptor": d,
        "trials": r.trials,
        "all_shilov_trials": positives,
        "disagreements": r.disagreements,
        "marginal": r.marginal,
        "block_mismatches": r.block_mismatches,
        "errors": r.errors,
        "max_residual_on_boundary": worst,
    })
    .to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exports_produce_json() {
        let v: serde_json::Value =
            serde_json::from_str(&sample_points("IV(2)", 3, 1, 1.0).unwrap()).unwrap();
        assert_eq!(v["points"].as_array().unwrap().len(), 3);
        assert!(v["points"]
            .as_array()
            .unwrap()
            .iter()
            .all(|p| p["on_shilov"] == true));

        let v: serde_json::Value = serde_json::from_str(&canonical_form(5, 2).unwrap()).unwrap();
        assert_eq!(v["sigmas"].as_array().unwrap().len(), 2);
        assert!(v["residual"].as_f64().unwrap() < 1e-10);

        let v: serde_json::Value =
            serde_json::from_str(&equivalence_sweep("III(3)", 10, 3).unwrap()).unwrap();
        assert_eq!(v["disagreements"], 0);
    }
}
