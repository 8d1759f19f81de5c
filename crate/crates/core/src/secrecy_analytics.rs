//! Average secrecy metrics of the MRT wiretap link, with and without the
//! product channel attack.
//!
//! The average secrecy capacity is split as `C̄_S = C̄_B − L` where
//!
//! ```text
//! L = (1/ln 2) ∫₀^∞ F̄_E(x) F̄_B(x) / (1 + x) dx
//! ```
//!
//! and `F̄_B`, `F̄_E` are the complementary CDFs of Bob's and Eve's SNRs. When
//! the base station designs its rate from the attacked estimate `γ̂_E`, the
//! same construction with `F̄_Ê` in place of `F̄_E` yields `L̂` and the
//! compromised rate `R̄_S = C̄_B − L̂`. The excess rate is `D = L − L̂`.
//!
//! All rates are in bps/Hz.

use std::f64::consts::{LN_2, PI};

use crate::channel_model::{AttackKind, ScenarioParams};
use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_semi_infinite_with, QuadConfig};
use crate::specfun::{bessel_k1_scaled, erfc, erfc_scaled, exp_integral_en_scaled};

/// How a loss term was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Closed,
    Quadrature,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::Quadrature => "quadrature",
        }
    }
}

/// Average capacity, loss and secrecy rate for one operating point.
///
/// `rate` is `C̄_S` when `attack` is [`AttackKind::None`] and the compromised
/// rate `R̄_S` otherwise. `rate = c_bar_b − loss` holds exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyReport {
    pub c_bar_b: f64,
    pub loss: f64,
    pub rate: f64,
    pub method: Method,
    pub attack: AttackKind,
}

impl SecrecyReport {
    /// A negative average rate can only come from numerical error.
    pub fn is_anomalous(&self) -> bool {
        self.rate < 0.0
    }
}

fn quad_config() -> QuadConfig {
    QuadConfig::default()
}

fn check_x(func: &'static str, x: f64) -> Result<()> {
    if !(x >= 0.0) {
        return Err(domain(func, format!("x = {x} must be non-negative")));
    }
    Ok(())
}

fn check_snr(func: &'static str, name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(domain(
            func,
            format!("{name} = {v} must be positive and finite"),
        ));
    }
    Ok(())
}

fn check_m(func: &'static str, m: u32) -> Result<()> {
    if m < 1 {
        return Err(domain(func, "m must be at least 1"));
    }
    Ok(())
}

/// cCDF of Bob's SNR under MRT: Erlang with shape `M` and rate `M / γ̄_B`,
/// `e^{-Mx/γ̄_B} Σ_{n<M} (Mx/γ̄_B)^n / n!`.
pub fn ccdf_bob(x: f64, gamma_b_bar: f64, m: u32) -> Result<f64> {
    check_x("ccdf_bob", x)?;
    check_snr("ccdf_bob", "gamma_b_bar", gamma_b_bar)?;
    check_m("ccdf_bob", m)?;
    Ok(erlang_ccdf(f64::from(m) * x / gamma_b_bar, m))
}

fn erlang_ccdf(y: f64, m: u32) -> f64 {
    if y == 0.0 {
        return 1.0;
    }
    let mut sum = 0.0;
    if y < 700.0 {
        let mut term = (-y).exp();
        for n in 0..m {
            sum += term;
            term *= y / f64::from(n + 1);
        }
    } else {
        let ln_y = y.ln();
        let mut log_term = -y;
        for n in 0..m {
            sum += log_term.exp();
            log_term += ln_y - f64::from(n + 1).ln();
        }
    }
    sum.min(1.0)
}

/// cCDF of Eve's SNR as seen by the base station.
///
/// * `None`: exponential, `e^{-x/γ̄_E}`.
/// * `RayleighTheta`: product of two unit-mean exponentials scaled by `γ̄_E`,
///   `t K₁(t)` with `t = 2√(x/γ̄_E)`.
/// * `UniformTheta`: `e^{-u²} − √π u erfc(u)` with `u = √(x / (3γ̄_E))`.
pub fn ccdf_eve(x: f64, gamma_e_bar: f64, kind: AttackKind) -> Result<f64> {
    check_x("ccdf_eve", x)?;
    check_snr("ccdf_eve", "gamma_e_bar", gamma_e_bar)?;
    Ok(eve_ccdf(x, gamma_e_bar, kind))
}

fn eve_ccdf(x: f64, gamma_e_bar: f64, kind: AttackKind) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    match kind {
        AttackKind::None => (-x / gamma_e_bar).exp(),
        AttackKind::RayleighTheta => {
            let t = 2.0 * (x / gamma_e_bar).sqrt();
            if t > 745.0 {
                return 0.0;
            }
            let k1s = bessel_k1_scaled(t).expect("t is positive and finite");
            (t * k1s * (-t).exp()).clamp(0.0, 1.0)
        }
        AttackKind::UniformTheta => {
            let u = (x / (3.0 * gamma_e_bar)).sqrt();
            let v = if u < 2.0 {
                (-u * u).exp() - (PI * u * u).sqrt() * erfc(u)
            } else {
                (-u * u).exp() * (1.0 - PI.sqrt() * u * erfc_scaled(u))
            };
            v.clamp(0.0, 1.0)
        }
    }
}

/// Bob's average capacity
/// `C̄_B = (1/ln 2) e^{M/γ̄_B} Σ_{n<M} E_{n+1}(M/γ̄_B)`.
pub fn avg_capacity_bob(gamma_b_bar: f64, m: u32) -> Result<f64> {
    check_snr("avg_capacity_bob", "gamma_b_bar", gamma_b_bar)?;
    check_m("avg_capacity_bob", m)?;
    let a = f64::from(m) / gamma_b_bar;
    let mut sum = 0.0;
    for n in 0..m {
        sum += exp_integral_en_scaled(n + 1, a)?;
    }
    Ok(sum / LN_2)
}

/// Eve's average capacity under the base station's view of her channel.
///
/// Closed form `e^{1/γ̄_E} E_1(1/γ̄_E) / ln 2` without attack, quadrature of
/// `(1/ln 2) ∫ F̄_Ê(x) / (1+x) dx` otherwise.
pub fn avg_capacity_eve(gamma_e_bar: f64, kind: AttackKind) -> Result<f64> {
    check_snr("avg_capacity_eve", "gamma_e_bar", gamma_e_bar)?;
    match kind {
        AttackKind::None => Ok(exp_integral_en_scaled(1, 1.0 / gamma_e_bar)? / LN_2),
        _ => {
            let r = integrate_semi_infinite_with(
                |x| eve_ccdf(x, gamma_e_bar, kind) / (1.0 + x),
                &quad_config(),
            )?;
            Ok(r.value / LN_2)
        }
    }
}

/// Average secrecy capacity loss `L` (no attack) or `L̂` (attacked).
///
/// The closed form
/// `(1/ln 2) e^{a+b} Σ_{n<M} a^n Γ(−n, a+b)` with `a = M/γ̄_B`, `b = 1/γ̄_E`
/// exists only for the unattacked exponential law; asking for it with an
/// attacked kind is an error.
pub fn asc_loss(
    gamma_b_bar: f64,
    gamma_e_bar: f64,
    m: u32,
    kind: AttackKind,
    method: Method,
) -> Result<f64> {
    check_snr("asc_loss", "gamma_b_bar", gamma_b_bar)?;
    check_snr("asc_loss", "gamma_e_bar", gamma_e_bar)?;
    check_m("asc_loss", m)?;
    match method {
        Method::Closed => {
            if kind.is_attack() {
                return Err(Error::InvalidCombination(format!(
                    "no closed form for the loss under the {kind} attack; use quadrature"
                )));
            }
            let a = f64::from(m) / gamma_b_bar;
            let s = a + 1.0 / gamma_e_bar;
            let ratio = a / s;
            let mut sum = 0.0;
            for n in 0..m {
                // a^n e^s Γ(−n, s) = (a/s)^n e^s E_{n+1}(s)
                sum += ratio.powi(n as i32) * exp_integral_en_scaled(n + 1, s)?;
            }
            Ok(sum / LN_2)
        }
        Method::Quadrature => {
            let mf = f64::from(m);
            let r = integrate_semi_infinite_with(
                |x| {
                    let fb = erlang_ccdf(mf * x / gamma_b_bar, m);
                    if fb == 0.0 {
                        return 0.0;
                    }
                    eve_ccdf(x, gamma_e_bar, kind) * fb / (1.0 + x)
                },
                &quad_config(),
            )?;
            Ok(r.value / LN_2)
        }
    }
}

/// The method used by default: closed form when one exists.
pub fn default_method(kind: AttackKind) -> Method {
    if kind.is_attack() {
        Method::Quadrature
    } else {
        Method::Closed
    }
}

/// `C̄_S` (no attack) or `R̄_S` (attacked) for one operating point.
pub fn secrecy_rate(params: &ScenarioParams, kind: AttackKind) -> Result<SecrecyReport> {
    secrecy_rate_with_method(params, kind, default_method(kind))
}

pub fn secrecy_rate_with_method(
    params: &ScenarioParams,
    kind: AttackKind,
    method: Method,
) -> Result<SecrecyReport> {
    params.validate()?;
    let gb = params.gamma_b_bar();
    let c_bar_b = avg_capacity_bob(gb, params.m)?;
    let loss = asc_loss(gb, params.gamma_e_bar(), params.m, kind, method)?;
    Ok(SecrecyReport {
        c_bar_b,
        loss,
        rate: c_bar_b - loss,
        method,
        attack: kind,
    })
}

fn require_attack(func: &str, kind: AttackKind) -> Result<()> {
    if !kind.is_attack() {
        return Err(Error::InvalidCombination(format!(
            "{func} needs an attacked kind, got `none`"
        )));
    }
    Ok(())
}

/// Excess secrecy rate `D = L − L̂ = R̄_S − C̄_S`.
pub fn excess_rate(params: &ScenarioParams, kind: AttackKind) -> Result<f64> {
    require_attack("excess_rate", kind)?;
    params.validate()?;
    let gb = params.gamma_b_bar();
    let ge = params.gamma_e_bar();
    let l = asc_loss(gb, ge, params.m, AttackKind::None, Method::Closed)?;
    let l_hat = asc_loss(gb, ge, params.m, kind, Method::Quadrature)?;
    Ok(l - l_hat)
}

/// Limit of `D` as `γ̄_B → ∞`: `C̄_E − Ĉ_E`. Independent of `M` and `γ̄_B`.
pub fn excess_rate_asymptote(gamma_e_bar: f64, kind: AttackKind) -> Result<f64> {
    require_attack("excess_rate_asymptote", kind)?;
    Ok(avg_capacity_eve(gamma_e_bar, AttackKind::None)? - avg_capacity_eve(gamma_e_bar, kind)?)
}
