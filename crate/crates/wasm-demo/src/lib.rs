//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every exported function takes plain numbers and strings and returns a JSON
//! document, so the page needs no generated glue beyond `wasm-bindgen`. The
//! `*_json` functions hold the logic and are tested natively.

use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;
use weighted_qr::ortho::parse_method_list;
use weighted_qr::sweep::{exponent_grid, run_cell, run_sweep, SweepConfig, SweepRecord};
use weighted_qr::testbed::Case;
use weighted_qr::{Error, Method, Result};

/// Largest problem the page accepts; keeps a heatmap interactive.
pub const MAX_M: usize = 200;

#[derive(Serialize)]
struct MethodOutcome {
    method: String,
    status: String,
    loss_a_orth: Option<f64>,
    rep_error_rel: Option<f64>,
    mv_count: u64,
}

#[derive(Serialize)]
struct Instance {
    kappa_a: f64,
    kappa_az: Option<f64>,
    delta1: Option<f64>,
    delta2: Option<f64>,
    methods: Vec<MethodOutcome>,
}

#[derive(Serialize)]
struct Series {
    method: String,
    loss: Vec<Option<f64>>,
}

#[derive(Serialize)]
struct Curve {
    kappa_az: Vec<Option<f64>>,
    delta1: Vec<Option<f64>>,
    series: Vec<Series>,
}

#[derive(Serialize)]
struct Heatmap {
    method: String,
    exponents: Vec<f64>,
    /// `log10` loss, row = κ(A) exponent, column = κ(A^{1/2}Z) exponent.
    log_loss: Vec<Vec<Option<f64>>>,
    status: Vec<Vec<String>>,
}

fn config(case: u8, m: usize, n: usize, seed: u64, methods: &str) -> Result<SweepConfig> {
    if m > MAX_M {
        return Err(Error::InvalidArgument(format!(
            "m = {m} exceeds the demo limit {MAX_M}"
        )));
    }
    if n == 0 || n > m {
        return Err(Error::InvalidArgument(format!("n = {n} outside 1..={m}")));
    }
    Ok(SweepConfig::square(
        Case::from_number(case)?,
        m,
        n,
        Vec::new(),
        seed,
        parse_method_list(methods)?,
    ))
}

fn to_json<T: Serialize>(value: Result<T>) -> String {
    match value {
        Ok(v) => serde_json::to_string(&v).expect("plain data serializes"),
        Err(e) => serde_json::json!({ "error": e.to_string() }).to_string(),
    }
}

/// One testbed instance factored by every listed method.
pub fn factor_demo_json(
    case: u8,
    m: usize,
    n: usize,
    log_ka: f64,
    log_kaz: f64,
    seed: u64,
    methods: &str,
) -> String {
    to_json((|| {
        let cfg = config(case, m, n, seed, methods)?;
        let recs = run_cell(&cfg, log_ka, log_kaz)?;
        let first = &recs[0];
        Ok(Instance {
            kappa_a: first.kappa_a_measured,
            kappa_az: first.kappa_az_measured,
            delta1: first.delta1,
            delta2: first.delta2,
            methods: recs
                .iter()
                .map(|r| MethodOutcome {
                    method: r.method.to_string(),
                    status: r.status.to_string(),
                    loss_a_orth: r.loss_a_orth,
                    rep_error_rel: r.rep_error_rel,
                    mv_count: r.method.expected_mv_count(n),
                })
                .collect(),
        })
    })())
}

/// Loss against κ(A^{1/2}Z) at fixed κ(A), one series per method.
pub fn loss_curve_json(
    case: u8,
    m: usize,
    n: usize,
    log_ka: f64,
    lo: f64,
    hi: f64,
    step: f64,
    seed: u64,
    methods: &str,
) -> String {
    to_json((|| {
        let mut cfg = config(case, m, n, seed, methods)?;
        cfg.kappa_a_exponents = vec![log_ka];
        cfg.kappa_az_exponents = exponent_grid(lo, hi, step)?;
        let recs = run_sweep(&cfg)?;
        let k = cfg.methods.len();
        let cells: Vec<&[SweepRecord]> = recs.chunks(k).collect();
        Ok(Curve {
            kappa_az: cells.iter().map(|c| c[0].kappa_az_measured).collect(),
            delta1: cells.iter().map(|c| c[0].delta1).collect(),
            series: cfg
                .methods
                .iter()
                .enumerate()
                .map(|(i, m)| Series {
                    method: m.to_string(),
                    loss: cells.iter().map(|c| c[i].loss_a_orth).collect(),
                })
                .collect(),
        })
    })())
}

/// Square κ grid for one method.
pub fn heatmap_json(
    case: u8,
    m: usize,
    n: usize,
    lo: f64,
    hi: f64,
    step: f64,
    seed: u64,
    method: &str,
) -> String {
    to_json((|| {
        let method: Method = method.parse()?;
        let mut cfg = config(case, m, n, seed, &method.to_string())?;
        let exps = exponent_grid(lo, hi, step)?;
        cfg.kappa_a_exponents = exps.clone();
        cfg.kappa_az_exponents = exps.clone();
        let recs = run_sweep(&cfg)?;
        let rows: Vec<&[SweepRecord]> = recs.chunks(exps.len()).collect();
        Ok(Heatmap {
            method: method.to_string(),
            log_loss: rows
                .iter()
                .map(|row| row.iter().map(|r| r.loss_a_orth.map(f64::log10)).collect())
                .collect(),
            status: rows
                .iter()
                .map(|row| row.iter().map(|r| r.status.to_string()).collect())
                .collect(),
            exponents: exps,
        })
    })())
}

#[wasm_bindgen]
pub fn factor_demo(
    case: u8,
    m: usize,
    n: usize,
    log_ka: f64,
    log_kaz: f64,
    seed: u32,
    methods: &str,
) -> String {
    factor_demo_json(case, m, n, log_ka, log_kaz, seed.into(), methods)
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn loss_curve(
    case: u8,
    m: usize,
    n: usize,
    log_ka: f64,
    lo: f64,
    hi: f64,
    step: f64,
    seed: u32,
    methods: &str,
) -> String {
    loss_curve_json(case, m, n, log_ka, lo, hi, step, seed.into(), methods)
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn heatmap(
    case: u8,
    m: usize,
    n: usize,
    lo: f64,
    hi: f64,
    step: f64,
    seed: u32,
    method: &str,
) -> String {
    heatmap_json(case, m, n, lo, hi, step, seed.into(), method)
}
