//! Scalar special functions backing the closed-form secrecy expressions.
//!
//! Every function here targets a relative error of about 1e-12 or better on
//! its stated range. Arguments that would push a plain evaluation into
//! overflow (large `x` in `e^x E_n(x)` and friends) have fused, exponentially
//! scaled variants that the analytics layer uses directly.

use crate::error::{domain, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const EPS: f64 = f64::EPSILON;
const MAX_ITER: usize = 100_000;
const FPMIN: f64 = f64::MIN_POSITIVE / EPS;

/// Generalized exponential integral `E_n(x) = ∫₁^∞ e^{-xt} t^{-n} dt`.
///
/// Returns a domain error for `n < 1` or `x <= 0`. Underflows to zero for
/// `x` beyond roughly 745.
pub fn exp_integral_en(n: u32, x: f64) -> Result<f64> {
    check_en_args(n, x)?;
    if x >= 1.0 {
        Ok(en_continued_fraction(n, x) * (-x).exp())
    } else {
        Ok(en_series(n, x))
    }
}

/// `e^x · E_n(x)`, finite for every `x > 0`.
pub(crate) fn exp_integral_en_scaled(n: u32, x: f64) -> Result<f64> {
    check_en_args(n, x)?;
    if x >= 1.0 {
        Ok(en_continued_fraction(n, x))
    } else {
        Ok(en_series(n, x) * x.exp())
    }
}

fn check_en_args(n: u32, x: f64) -> Result<()> {
    if n < 1 {
        return Err(domain("exp_integral_en", format!("order n = {n} < 1")));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(
            "exp_integral_en",
            format!("x = {x} is not a positive finite number"),
        ));
    }
    Ok(())
}

/// Modified Lentz evaluation of the continued fraction for `e^x E_n(x)`.
/// Converges quickly for `x >= 1`.
fn en_continued_fraction(n: u32, x: f64) -> f64 {
    let n = f64::from(n);
    let mut b = x + n;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let i = i as f64;
        let an = -i * (n - 1.0 + i);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Power series for `E_n(x)`, used for `0 < x < 1`.
fn en_series(n: u32, x: f64) -> f64 {
    let nm1 = n - 1;
    let mut ans = if nm1 == 0 {
        -x.ln() - EULER_GAMMA
    } else {
        1.0 / f64::from(nm1)
    };
    let mut fact = 1.0;
    for i in 1..MAX_ITER as u32 {
        fact *= -x / f64::from(i);
        let del = if i != nm1 {
            -fact / (f64::from(i) - f64::from(nm1))
        } else {
            let psi = -EULER_GAMMA + (1..=nm1).map(|k| 1.0 / f64::from(k)).sum::<f64>();
            fact * (-x.ln() + psi)
        };
        ans += del;
        if del.abs() < ans.abs() * EPS {
            break;
        }
    }
    ans
}

/// Upper incomplete gamma function at a non-positive integer order, `Γ(-n, x)`.
///
/// Evaluated through `Γ(-n, x) = x^{-n} E_{n+1}(x)`, which sidesteps the poles
/// of the gamma function at the negative integers.
pub fn upper_incomplete_gamma_negint(n: u32, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(
            "upper_incomplete_gamma_negint",
            format!("x = {x} is not a positive finite number"),
        ));
    }
    Ok(x.powi(-(n as i32)) * exp_integral_en(n + 1, x)?)
}

/// Modified Bessel function of the second kind, order one.
pub fn bessel_k1(x: f64) -> Result<f64> {
    Ok(bessel_k1_scaled(x)? * (-x).exp())
}

/// `e^x · K₁(x)`.
pub(crate) fn bessel_k1_scaled(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(
            "bessel_k1",
            format!("x = {x} is not a positive finite number"),
        ));
    }
    if x <= 2.0 {
        Ok(k1_series(x) * x.exp())
    } else {
        Ok(k1_scaled_steed(x))
    }
}

/// Small-argument expansion
/// `K₁(x) = 1/x + ln(x/2) I₁(x) - (x/4) Σ_k [ψ(k+1) + ψ(k+2)] (x²/4)^k / (k! (k+1)!)`.
fn k1_series(x: f64) -> f64 {
    let y = 0.25 * x * x;
    let mut term = 1.0;
    let mut psi1 = -EULER_GAMMA;
    let mut psi2 = 1.0 - EULER_GAMMA;
    let mut i1_sum = 0.0;
    let mut k_sum = 0.0;
    for k in 0..MAX_ITER {
        i1_sum += term;
        let dk = (psi1 + psi2) * term;
        k_sum += dk;
        if term < EPS * i1_sum && dk.abs() < EPS * k_sum.abs() {
            break;
        }
        let k1 = (k + 1) as f64;
        let k2 = (k + 2) as f64;
        term *= y / (k1 * k2);
        psi1 += 1.0 / k1;
        psi2 += 1.0 / k2;
    }
    let i1 = 0.5 * x * i1_sum;
    1.0 / x + (0.5 * x).ln() * i1 - 0.25 * x * k_sum
}

/// Steed's continued fraction (CF2) for `e^x K₀(x)`, followed by the ratio
/// that yields `e^x K₁(x)`. Valid for `x >= 2`.
fn k1_scaled_steed(x: f64) -> f64 {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    h *= a1;
    let k0 = (std::f64::consts::PI / (2.0 * x)).sqrt() / s;
    k0 * (x + 0.5 - h) / x
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 2.0 {
        1.0 - erf_series(x)
    } else {
        erfc_scaled(x) * (-x * x).exp()
    }
}

/// `e^{x²} · erfc(x)` for `x >= 0`.
pub(crate) fn erfc_scaled(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < 2.0 {
        (x * x).exp() * (1.0 - erf_series(x))
    } else {
        erfc_cf(x) / std::f64::consts::PI.sqrt()
    }
}

/// `erf(x) = (2/√π) e^{-x²} Σ_n 2^n x^{2n+1} / (1·3·…·(2n+1))`; every term is
/// positive so there is no cancellation.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    for n in 1..MAX_ITER {
        term *= 2.0 * x2 / (2 * n + 1) as f64;
        sum += term;
        if term < EPS * sum {
            break;
        }
    }
    std::f64::consts::FRAC_2_SQRT_PI * (-x2).exp() * sum
}

/// Laplace continued fraction `1/(x + (1/2)/(x + 1/(x + (3/2)/(x + …))))`,
/// equal to `√π e^{x²} erfc(x)`.
fn erfc_cf(x: f64) -> f64 {
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..MAX_ITER {
        let a = 0.5 * k as f64;
        d = x + a * d;
        d = if d.abs() < FPMIN {
            1.0 / FPMIN
        } else {
            1.0 / d
        };
        c = x + a / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        let del = c * d;
        f *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    1.0 / f
}
