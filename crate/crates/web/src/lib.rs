//! Browser bindings: the JSON solver, figure rendering and a chain explorer.

use curvatura::figure::{self, FigureId};
use curvatura::parallelism::{self, ChainCenter};
use curvatura::{solve, Kind, SpaceForm};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn err(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Answers a request document; malformed requests come back as an error
/// document too, so the page can show them the same way.
#[wasm_bindgen]
pub fn solve_json(request: &str) -> String {
    let out = solve::solve_str(request).unwrap_or_else(|e| solve::schema_error(&e));
    serde_json::to_string_pretty(&out).unwrap_or_default()
}

/// SVG for figure `id` (`fig1` … `profile`).
#[wasm_bindgen]
pub fn figure_svg(id: &str, params: &str) -> Result<String, JsValue> {
    let id = FigureId::parse(id).map_err(err)?;
    let v: Value = serde_json::from_str(params).map_err(err)?;
    figure::render(id, &v).map_err(err)
}

pub fn chain_report(kind: &str, radius: f64, s: f64, theta: f64, n: usize) -> Result<Value, String> {
    let kind: Kind = serde_json::from_value(json!(kind)).map_err(|e| e.to_string())?;
    let space = SpaceForm::new(kind, radius).map_err(|e| e.to_string())?;
    let chain = parallelism::build_chain(&space, s, theta, n).map_err(|e| e.to_string())?;
    let center = parallelism::classify_chain_center(&chain).map_err(|e| e.to_string())?;
    let critical = match kind {
        Kind::Hyperbolic => Some(parallelism::critical_side_closed_form(&space, theta)),
        _ => None,
    };
    let params = json!({"space": {"kind": kind, "radius": radius}, "s": s, "theta": theta, "n": n});
    let svg = figure::render(FigureId::Fig3, &params).map_err(|e| e.to_string())?;
    let extra = match center {
        ChainCenter::Circle { radius, .. } => json!({"radius": radius}),
        ChainCenter::Equidistant { distance, .. } => json!({"distance": distance}),
        ChainCenter::Horocycle => json!({}),
    };
    Ok(json!({
        "locus": center.tag(),
        "residual": center.residual(&chain),
        "critical_side": critical,
        "detail": extra,
        "svg": svg,
    }))
}

/// Builds a chain, classifies its vertex locus and draws it. Returns JSON
/// with `locus`, `critical_side` (hyperbolic only) and `svg`.
#[wasm_bindgen]
pub fn chain_explorer(kind: &str, radius: f64, s: f64, theta: f64, n: usize) -> Result<String, JsValue> {
    chain_report(kind, radius, s, theta, n)
        .map(|v| v.to_string())
        .map_err(err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hexagon_is_a_circle() {
        let v = chain_report("euclidean", 1.0, 1.0, 2.0 * std::f64::consts::PI / 3.0, 6).unwrap();
        assert_eq!(v["locus"], "circle");
        assert!(v["svg"].as_str().unwrap().starts_with("<?xml"));
    }

    #[test]
    fn past_critical_side_is_equidistant() {
        let v = chain_report("hyperbolic", 1.0, 1.5, 2.0 * std::f64::consts::PI / 3.0, 8).unwrap();
        assert_eq!(v["locus"], "equidistant");
        assert!((v["critical_side"].as_f64().unwrap() - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn solver_reports_schema_errors() {
        let out: Value = serde_json::from_str(&solve_json("{")).unwrap();
        assert_eq!(out["error"]["code"], "schema");
    }
}
