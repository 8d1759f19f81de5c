//! Quick invariant checks run by `pcattack selftest`.

use crate::channel_model::{db_to_linear, AttackKind, ScenarioParams};
use crate::montecarlo::{estimate_rate_pair, McConfig};
use crate::quadrature::integrate_semi_infinite;
use crate::secrecy_analytics::{
    asc_loss, avg_capacity_bob, ccdf_bob, ccdf_eve, secrecy_rate, Method,
};
use crate::specfun::{bessel_k1, erfc, exp_integral_en, upper_incomplete_gamma_negint};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

type Check = fn() -> crate::Result<(bool, String)>;

fn en_recurrence() -> crate::Result<(bool, String)> {
    let mut worst = 0.0f64;
    for n in 1..=16u32 {
        for &x in &[0.01, 0.1, 1.0, 10.0] {
            let lhs = exp_integral_en(n + 1, x)?;
            let rhs = ((-x).exp() - x * exp_integral_en(n, x)?) / f64::from(n);
            worst = worst.max(rel_err(lhs, rhs));
        }
    }
    Ok((worst <= 1e-12, format!("max relative error {worst:.3e}")))
}

fn gamma_identity() -> crate::Result<(bool, String)> {
    let mut worst = 0.0f64;
    for n in 0..=8u32 {
        for &x in &[0.01, 0.1, 1.0, 10.0, 50.0] {
            let g = upper_incomplete_gamma_negint(n, x)? * x.powi(n as i32);
            worst = worst.max(rel_err(g, exp_integral_en(n + 1, x)?));
        }
    }
    Ok((worst <= 1e-12, format!("max relative error {worst:.3e}")))
}

fn erfc_reflection() -> crate::Result<(bool, String)> {
    let worst = (-270..=270)
        .map(|i| {
            let x = 0.1 * f64::from(i);
            (erfc(x) + erfc(-x) - 2.0).abs()
        })
        .fold(0.0, f64::max);
    Ok((
        worst <= 1e-15,
        format!("max |erfc(x)+erfc(-x)-2| = {worst:.3e}"),
    ))
}

fn k1_shape() -> crate::Result<(bool, String)> {
    let mut prev = f64::INFINITY;
    for i in 1..=2000 {
        let x = 0.01 * f64::from(i);
        let k = bessel_k1(x)?;
        if !(k < prev) || !(x * k > 0.0 && x * k <= 1.0) {
            return Ok((false, format!("shape violated at x = {x}")));
        }
        prev = k;
    }
    let small = 1e-8 * bessel_k1(1e-8)?;
    Ok((
        (1.0 - small).abs() < 1e-6,
        format!("x K1(x) at 1e-8 = {small}"),
    ))
}

fn closed_vs_quadrature() -> crate::Result<(bool, String)> {
    let mut worst = 0.0f64;
    for &m in &[1u32, 2, 4, 8] {
        for gb_db in [-10.0, 0.0, 10.0, 20.0, 30.0] {
            for ge_db in [5.0, 15.0] {
                let (gb, ge) = (db_to_linear(gb_db), db_to_linear(ge_db));
                let c = asc_loss(gb, ge, m, AttackKind::None, Method::Closed)?;
                let q = asc_loss(gb, ge, m, AttackKind::None, Method::Quadrature)?;
                worst = worst.max(rel_err(c, q));
            }
        }
    }
    Ok((worst <= 1e-8, format!("max relative error {worst:.3e}")))
}

fn capacity_integral() -> crate::Result<(bool, String)> {
    let mut worst = 0.0f64;
    for &m in &[1u32, 4] {
        for gb_db in [-10.0, 10.0, 30.0] {
            let gb = db_to_linear(gb_db);
            let q = integrate_semi_infinite(
                |x| ccdf_bob(x, gb, m).unwrap_or(f64::NAN) / (1.0 + x),
                1e-12,
                1e-14,
            )?
            .value
                / std::f64::consts::LN_2;
            worst = worst.max(rel_err(avg_capacity_bob(gb, m)?, q));
        }
    }
    Ok((worst <= 1e-8, format!("max relative error {worst:.3e}")))
}

fn attack_success() -> crate::Result<(bool, String)> {
    for &m in &[1u32, 4, 8] {
        for g0 in [-10.0, 10.0, 30.0] {
            for ge in [5.0, 15.0] {
                let p = ScenarioParams::new(m, g0, ge)?;
                let cs = secrecy_rate(&p, AttackKind::None)?.rate;
                for kind in [AttackKind::RayleighTheta, AttackKind::UniformTheta] {
                    let rs = secrecy_rate(&p, kind)?.rate;
                    if !(rs > cs) {
                        return Ok((
                            false,
                            format!("R_S <= C_S at M={m}, g0={g0}, gE={ge}, {kind}"),
                        ));
                    }
                }
            }
        }
    }
    Ok((true, "R_S > C_S on every grid point".into()))
}

fn ccdf_shape() -> crate::Result<(bool, String)> {
    for kind in AttackKind::ALL {
        let mut prev = 1.0;
        for i in 0..=1000 {
            let v = ccdf_eve(0.1 * f64::from(i), 2.0, kind)?;
            if v > prev + 1e-15 || !(0.0..=1.0).contains(&v) {
                return Ok((false, format!("{kind} cCDF not monotone in [0,1]")));
            }
            prev = v;
        }
    }
    Ok((true, "all cCDFs start at 1 and decrease".into()))
}

fn mc_agreement() -> crate::Result<(bool, String)> {
    let p = ScenarioParams::new(2, 10.0, 5.0)?;
    let (cs, rs) = estimate_rate_pair(&p, AttackKind::RayleighTheta, &McConfig::new(200_000, 42))?;
    let cs_a = secrecy_rate(&p, AttackKind::None)?.rate;
    let rs_a = secrecy_rate(&p, AttackKind::RayleighTheta)?.rate;
    let zc = (cs.mean - cs_a) / cs.stderr;
    let zr = (rs.mean - rs_a) / rs.stderr;
    Ok((
        zc.abs() <= 3.0 && zr.abs() <= 3.0,
        format!("z-scores C_S {zc:.2}, R_S {zr:.2}"),
    ))
}

const CHECKS: [(&str, Check); 9] = [
    ("E_n recurrence", en_recurrence),
    ("Gamma(-n,x) identity", gamma_identity),
    ("erfc reflection", erfc_reflection),
    ("K1 shape", k1_shape),
    ("closed-form vs quadrature loss", closed_vs_quadrature),
    ("capacity as cCDF integral", capacity_integral),
    ("attack success", attack_success),
    ("cCDF shape", ccdf_shape),
    ("MC vs analytic", mc_agreement),
];

/// Runs every check; numeric errors count as failures.
pub fn run_all() -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|&(name, check)| match check() {
            Ok((passed, detail)) => CheckOutcome {
                name,
                passed,
                detail,
            },
            Err(e) => CheckOutcome {
                name,
                passed: false,
                detail: format!("error: {e}"),
            },
        })
        .collect()
}
