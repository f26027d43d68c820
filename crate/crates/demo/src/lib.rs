//! Browser bindings for a few `symhyper` operations.
//!
//! Each export runs the matching CLI subcommand and returns its JSON output;
//! an empty `params` string selects the seeded random point 1.

use wasm_bindgen::prelude::*;

fn run(mut args: Vec<String>, params: &str) -> Result<String, String> {
    if !params.trim().is_empty() {
        args.push("--params".into());
        args.push(params.into());
    }
    let out = symhyper::cli::run(std::iter::once("symhyper".to_string()).chain(args));
    if out.code == symhyper::cli::EXIT_OK {
        Ok(out.stdout.trim_end().to_string())
    } else {
        Err(out.stderr.trim_end().to_string())
    }
}

fn args(parts: &[&str]) -> Vec<String> {
    parts.iter().map(|s| s.to_string()).collect()
}

fn build_json(family: &str, params: &str, lambda: &str, n: u32) -> Result<String, String> {
    let n = n.to_string();
    run(
        args(&["build", "--family", family, "--lambda", lambda, "--n", &n]),
        params,
    )
}

fn pieri_json(
    family: &str,
    params: &str,
    lambda: &str,
    mu: &str,
    n: u32,
    r: u32,
) -> Result<String, String> {
    let (n, r) = (n.to_string(), r.to_string());
    run(
        args(&[
            "pieri", "--family", family, "--lambda", lambda, "--mu", mu, "--n", &n, "--r", &r,
        ]),
        params,
    )
}

fn branch_json(
    family: &str,
    params: &str,
    lambda: &str,
    mu: &str,
    n: u32,
) -> Result<String, String> {
    let n = n.to_string();
    run(
        args(&[
            "branch", "--family", family, "--lambda", lambda, "--mu", mu, "--n", &n,
        ]),
        params,
    )
}

/// `P_λ` in `n` variables as SymPoly JSON.
#[wasm_bindgen]
pub fn build(family: &str, params: &str, lambda: &str, n: u32) -> Result<String, JsValue> {
    build_json(family, params, lambda, n).map_err(|e| JsValue::from_str(&e))
}

/// The Pieri coefficient `C^{μ,n}_{λ,r}`.
#[wasm_bindgen]
pub fn pieri(
    family: &str,
    params: &str,
    lambda: &str,
    mu: &str,
    n: u32,
    r: u32,
) -> Result<String, JsValue> {
    pieri_json(family, params, lambda, mu, n, r).map_err(|e| JsValue::from_str(&e))
}

/// Branching coefficients `B^0..B^d` of `λ ∈ Λ_{n+1}` over `μ ∈ Λ_n`.
#[wasm_bindgen]
pub fn branch(
    family: &str,
    params: &str,
    lambda: &str,
    mu: &str,
    n: u32,
) -> Result<String, JsValue> {
    branch_json(family, params, lambda, mu, n).map_err(|e| JsValue::from_str(&e))
}
