//! Browser bindings for the demo page in `www/`.
//!
//! Every export returns a flat `Float64Array`; the row layout is given on
//! each function. The `*_rows` functions are the same computations without
//! the JS error type, so they can be tested natively.

use pcattack::secrecy_analytics::{ccdf_eve, excess_rate, excess_rate_asymptote, secrecy_rate};
use pcattack::{db_to_linear, linear_to_db, AttackKind, ScenarioParams};
use wasm_bindgen::prelude::*;

const MAX_POINTS: usize = 2001;

fn grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, String> {
    if !(start.is_finite() && stop.is_finite() && step > 0.0 && start <= stop) {
        return Err(format!("bad range {start}..{stop} step {step}"));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > MAX_POINTS {
        return Err(format!("range has {count} points, limit is {MAX_POINTS}"));
    }
    Ok((0..count).map(|k| start + k as f64 * step).collect())
}

fn attack(name: &str) -> Result<AttackKind, String> {
    name.parse()
}

/// Rows of `[gamma0_db, cs, rs]`.
pub fn secrecy_curve_rows(
    m: u32,
    gamma_e_db: f64,
    start_db: f64,
    stop_db: f64,
    step_db: f64,
    kind: &str,
) -> Result<Vec<f64>, String> {
    let kind = attack(kind)?;
    let mut out = Vec::new();
    for g0 in grid(start_db, stop_db, step_db)? {
        let p = ScenarioParams::new(m, g0, gamma_e_db).map_err(|e| e.to_string())?;
        let cs = secrecy_rate(&p, AttackKind::None)
            .map_err(|e| e.to_string())?
            .rate;
        let rs = secrecy_rate(&p, kind).map_err(|e| e.to_string())?.rate;
        out.extend([g0, cs, rs]);
    }
    Ok(out)
}

/// Rows of `[gammaB_db, d, d_asymptote]`. With `scale_eve` set, Eve's SNR
/// drops by `10 log10 M`.
pub fn excess_curve_rows(
    m: u32,
    gamma_e_db: f64,
    scale_eve: bool,
    start_db: f64,
    stop_db: f64,
    step_db: f64,
    kind: &str,
) -> Result<Vec<f64>, String> {
    let kind = attack(kind)?;
    if !kind.is_attack() {
        return Err("excess rate needs an attack".into());
    }
    let gain_db = linear_to_db(f64::from(m.max(1)));
    let ge_db = if scale_eve {
        gamma_e_db - gain_db
    } else {
        gamma_e_db
    };
    let asym = excess_rate_asymptote(db_to_linear(ge_db), kind).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for gb in grid(start_db, stop_db, step_db)? {
        let p = ScenarioParams::new(m, gb - gain_db, ge_db).map_err(|e| e.to_string())?;
        let d = excess_rate(&p, kind).map_err(|e| e.to_string())?;
        out.extend([gb, d, asym]);
    }
    Ok(out)
}

/// Rows of `[x, none, rayleigh, uniform]` for `x` in units of `γ̄_E`.
pub fn eve_ccdf_rows(x_max: f64, points: usize) -> Result<Vec<f64>, String> {
    if !(x_max > 0.0 && x_max.is_finite()) || !(2..=MAX_POINTS).contains(&points) {
        return Err("need x_max > 0 and 2..=2001 points".into());
    }
    let mut out = Vec::with_capacity(points * 4);
    for i in 0..points {
        let x = x_max * i as f64 / (points - 1) as f64;
        out.push(x);
        for kind in AttackKind::ALL {
            out.push(ccdf_eve(x, 1.0, kind).map_err(|e| e.to_string())?);
        }
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn secrecy_curves(
    m: u32,
    gamma_e_db: f64,
    start_db: f64,
    stop_db: f64,
    step_db: f64,
    kind: &str,
) -> Result<Vec<f64>, JsError> {
    secrecy_curve_rows(m, gamma_e_db, start_db, stop_db, step_db, kind)
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn excess_curve(
    m: u32,
    gamma_e_db: f64,
    scale_eve: bool,
    start_db: f64,
    stop_db: f64,
    step_db: f64,
    kind: &str,
) -> Result<Vec<f64>, JsError> {
    excess_curve_rows(m, gamma_e_db, scale_eve, start_db, stop_db, step_db, kind)
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn eve_ccdfs(x_max: f64, points: usize) -> Result<Vec<f64>, JsError> {
    eve_ccdf_rows(x_max, points).map_err(|e| JsError::new(&e))
}
