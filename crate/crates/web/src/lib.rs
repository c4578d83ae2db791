//! wasm-bindgen exports for the static demo page in `www/`. Every export
//! takes a complex (a shipped fixture name or complex JSON) and returns a
//! JSON string; errors become JavaScript exceptions.

use std::sync::Arc;

use serde_json::json;
use sheafbn::bncheck::{self, Limits};
use sheafbn::cellsheaf::{constant_sheaf, sheaf_cohomology_all};
use sheafbn::exactalg::RingSpec;
use sheafbn::fixtures;
use sheafbn::fundgroup::presentation;
use sheafbn::localsys::Representation;
use sheafbn::simplicial::SimplicialComplex;
use wasm_bindgen::prelude::*;

fn complex(input: &str) -> Result<Arc<SimplicialComplex>, String> {
    let input = input.trim();
    let x = if input.starts_with('{') { SimplicialComplex::parse_json(input) } else { fixtures::by_name(input) };
    x.map(Arc::new).map_err(|e| e.to_string())
}

fn ring(s: &str) -> Result<RingSpec, String> {
    s.parse().map_err(|e: sheafbn::Error| e.to_string())
}

/// JSON of a shipped complex, for filling the editor.
pub fn fixture_json_impl(name: &str) -> Result<String, String> {
    let x = fixtures::by_name(name).map_err(|e| e.to_string())?;
    serde_json::to_string(&x.to_json()).map_err(|e| e.to_string())
}

/// Cohomology of the constant sheaf plus the homology of the complex.
pub fn cohomology_impl(input: &str, ring_name: &str) -> Result<String, String> {
    let x = complex(input)?;
    let r = ring(ring_name)?;
    let h = sheaf_cohomology_all(&constant_sheaf(&x, r, 1)).map_err(|e| e.to_string())?;
    let homology = (0..=x.dimension()).map(|n| x.homology(n, r)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
    let text = |ms: &[sheafbn::exactalg::FpModule]| ms.iter().map(ToString::to_string).collect::<Vec<_>>();
    Ok(json!({"ring": r, "cohomology": text(&h), "homology": text(&homology), "euler_characteristic": x.euler_characteristic()})
        .to_string())
}

/// Equivalence report for the trivial rank-one representation.
pub fn bn_check_impl(input: &str, ring_name: &str, max_degree: usize) -> Result<String, String> {
    let x = complex(input)?;
    let r = ring(ring_name)?;
    let (p, _) = presentation(&x, 0).map_err(|e| e.to_string())?;
    let reps = [("trivial".to_string(), Representation::trivial(&p, r, 1))];
    let limits = Limits { budget: 2000, ..Limits::default() };
    let report = bncheck::bn_verdict(&x, r, &reps, &[], max_degree, &limits).map_err(|e| e.to_string())?;
    Ok(report.to_json().to_string())
}

/// E_2 page of the constant sheaf; needs a finite group and a field.
pub fn e2_page_impl(input: &str, ring_name: &str, pmax: usize, qmax: usize) -> Result<String, String> {
    let x = complex(input)?;
    let r = ring(ring_name)?;
    let limits = Limits { budget: 2000, ..Limits::default() };
    let page = bncheck::e2_page(&x, &constant_sheaf(&x, r, 1), pmax, qmax, &limits).map_err(|e| e.to_string())?;
    Ok(page.to_json().to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn fixture_json(name: &str) -> Result<String, JsValue> {
    js(fixture_json_impl(name))
}

#[wasm_bindgen]
pub fn cohomology(input: &str, ring: &str) -> Result<String, JsValue> {
    js(cohomology_impl(input, ring))
}

#[wasm_bindgen]
pub fn bn_check(input: &str, ring: &str, max_degree: usize) -> Result<String, JsValue> {
    js(bn_check_impl(input, ring, max_degree))
}

#[wasm_bindgen]
pub fn e2_page(input: &str, ring: &str, pmax: usize, qmax: usize) -> Result<String, JsValue> {
    js(e2_page_impl(input, ring, pmax, qmax))
}
