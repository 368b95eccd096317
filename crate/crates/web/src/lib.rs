//! wasm-bindgen entry points for the static page in `www/`.
//!
//! Every export returns a JSON string; the `*_json` functions are the same
//! operations without the JS boundary, for native tests.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use bmv_sohs::certificate::{self, Parity};
use bmv_sohs::gram::{gram_of_certificate, Status};
use bmv_sohs::verifier;

const MAX_M: usize = 32;
const MAX_GRAM_M: usize = 24;
const MAX_DIM: usize = 8;
const MAX_TRIALS: usize = 5000;

#[derive(Serialize)]
struct ClassRow {
    class: String,
    words: usize,
    coefficient_sum: String,
    order: usize,
}

#[derive(Serialize)]
struct Explorer {
    m: usize,
    parity: Parity,
    multiplier: String,
    generators: Vec<String>,
    classes: Vec<ClassRow>,
    expansion_terms: usize,
    verified: bool,
    failing_classes: usize,
    word_counts: bool,
}

#[derive(Serialize)]
struct Heatmap {
    m: usize,
    basis: Vec<String>,
    g: Vec<Vec<f64>>,
    rank: Option<usize>,
    exact_psd: bool,
    constraints_exact: bool,
}

#[derive(Serialize)]
struct Traces {
    m: usize,
    k: usize,
    dim: usize,
    seed: u64,
    samples: Vec<f64>,
    min: Option<f64>,
    max: Option<f64>,
}

fn in_range(name: &str, v: usize, lo: usize, hi: usize) -> Result<(), String> {
    if v < lo || v > hi {
        return Err(format!("{name} must be in {lo}..={hi}, got {v}"));
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serialises")
}

/// Certificate for m with its per-class table and the exact check.
pub fn explore_json(m: usize) -> Result<String, String> {
    in_range("m", m, 5, MAX_M)?;
    let cert = certificate::build(m).map_err(|e| e.to_string())?;
    let report = verifier::verify_symbolic(&cert);
    let classes = certificate::class_tallies(&cert)
        .into_iter()
        .map(|(c, t)| ClassRow {
            class: c.canonical().to_string(),
            words: t.words,
            coefficient_sum: t.coefficient_sum,
            order: t.order,
        })
        .collect();
    Ok(to_json(&Explorer {
        m,
        parity: cert.parity(),
        multiplier: cert.multiplier().to_string(),
        generators: cert.generators().iter().map(|f| f.to_string()).collect(),
        classes,
        expansion_terms: cert.expand().len(),
        verified: report.passed,
        failing_classes: report.failing_classes.len(),
        word_counts: certificate::word_count_check(&cert).passed,
    }))
}

/// Exact Gram matrix of the certificate, as floats for drawing.
pub fn gram_json(m: usize) -> Result<String, String> {
    in_range("m", m, 5, MAX_GRAM_M)?;
    let cg = gram_of_certificate(&certificate::build(m).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let g = &cg.solution.g;
    Ok(to_json(&Heatmap {
        m,
        basis: cg.problem.basis.iter().map(|w| w.to_string()).collect(),
        g: (0..g.nrows()).map(|i| g.row(i).iter().copied().collect()).collect(),
        rank: cg.ldl.as_ref().map(|f| f.rank),
        exact_psd: cg.ldl.is_some(),
        constraints_exact: cg.solution.status == Status::Feasible,
    }))
}

/// Scaled traces of S_{m,k}(A, B) over seeded random PSD pairs.
pub fn traces_json(m: usize, k: usize, dim: usize, trials: usize, seed: u64) -> Result<String, String> {
    in_range("m", m, 1, MAX_M)?;
    in_range("k", k, 0, m)?;
    in_range("dim", dim, 1, MAX_DIM)?;
    in_range("trials", trials, 1, MAX_TRIALS)?;
    let samples = verifier::scaled_trace_samples(m, k, trials, dim, seed).map_err(|e| e.to_string())?;
    let min = samples.iter().copied().reduce(f64::min);
    let max = samples.iter().copied().reduce(f64::max);
    Ok(to_json(&Traces { m, k, dim, seed, samples, min, max }))
}

#[wasm_bindgen]
pub fn explore(m: usize) -> Result<String, JsError> {
    explore_json(m).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn gram_heatmap(m: usize) -> Result<String, JsError> {
    gram_json(m).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn trace_samples(m: usize, k: usize, dim: usize, trials: usize, seed: u64) -> Result<String, JsError> {
    traces_json(m, k, dim, trials, seed).map_err(|e| JsError::new(&e))
}
