//! wasm-bindgen exports for the static page in `www/`. Each export returns
//! a JSON report; errors come back as a JSON error report.

use gvc_core::dsl::{run, Command, RunOptions, EXIT_ERROR};
use wasm_bindgen::prelude::*;

/// Largest `n` accepted for `d_sequence`, so the page stays responsive.
pub const MAX_ITERATES: usize = 64;

fn exec(cmd: Command) -> Result<String, String> {
    let outcome = run(&cmd, &RunOptions::default());
    let json = outcome.report.to_json();
    if outcome.exit_code == EXIT_ERROR {
        Err(json)
    } else {
        Ok(json)
    }
}

pub fn cohomology_json(expr: &str) -> Result<String, String> {
    exec(Command::Cohomology { expr: expr.to_string() })
}

pub fn point_count_json(expr: &str, q: u32, check_oracle: bool) -> Result<String, String> {
    exec(Command::Count {
        expr: expr.to_string(),
        q: q as u64,
        check_oracle,
    })
}

pub fn d_sequence_json(expr: &str, endo: &str, n: usize) -> Result<String, String> {
    exec(Command::Dn {
        expr: expr.to_string(),
        endo: endo.to_string(),
        n: n.min(MAX_ITERATES),
    })
}

#[wasm_bindgen]
pub fn cohomology(expr: &str) -> Result<String, JsValue> {
    cohomology_json(expr).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn point_count(expr: &str, q: u32, check_oracle: bool) -> Result<String, JsValue> {
    point_count_json(expr, q, check_oracle).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn d_sequence(expr: &str, endo: &str, n: usize) -> Result<String, JsValue> {
    d_sequence_json(expr, endo, n).map_err(|e| JsValue::from_str(&e))
}
