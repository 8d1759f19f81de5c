//! Statistical checks of the channel sampler and the Monte-Carlo estimators
//! against analytic laws.

use pcattack::channel_model::{
    mrt_equivalent_gains, sample_channel_vector, sample_theta_power, snr_realization, RngStream,
};
use pcattack::montecarlo::{
    binomial_stderr, empirical_ccdf, estimate_avg_rate, estimate_mean, leakage_fraction,
    sample_snrs, DesignView, McConfig,
};
use pcattack::secrecy_analytics::{
    avg_capacity_eve, excess_rate_asymptote, secrecy_rate, secrecy_rate_with_method, Method,
};
use pcattack::specfun::bessel_k1;
use pcattack::{db_to_linear, AttackKind, ScenarioParams};
use statrs::function::gamma::gamma_ur;

const N: usize = 1_000_000;

fn mean_and_stderr(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / std::f64::consts::LN_2
}

#[test]
fn entry_power_is_unit() {
    let mut rng = RngStream::new(1, 0);
    let sum: f64 = (0..N / 4)
        .flat_map(|_| sample_channel_vector(4, &mut rng))
        .map(|h| h.norm_sqr())
        .sum();
    let mean = sum / N as f64;
    assert!((mean - 1.0).abs() <= 0.005, "mean |h|^2 = {mean}");
}

#[test]
fn channel_norm_is_gamma4() {
    let mut rng = RngStream::new(2, 0);
    let norms: Vec<f64> = (0..N)
        .map(|_| {
            sample_channel_vector(4, &mut rng)
                .iter()
                .map(|h| h.norm_sqr())
                .sum()
        })
        .collect();
    let (mean, se) = mean_and_stderr(&norms);
    assert!((mean - 4.0).abs() <= 3.0 * se, "mean {mean} +- {se}");
    let p = gamma_ur(4.0, 4.0);
    let emp = empirical_ccdf(&norms, &[4.0]).unwrap()[0];
    assert!(
        (emp - p).abs() <= 3.0 * binomial_stderr(p, N),
        "{emp} vs {p}"
    );
}

#[test]
fn eve_gain_under_mrt_is_unit_exponential() {
    let mut rng = RngStream::new(3, 0);
    let ge: Vec<f64> = (0..N)
        .map(|_| {
            let hb = sample_channel_vector(8, &mut rng);
            let he = sample_channel_vector(8, &mut rng);
            mrt_equivalent_gains(&hb, &he).unwrap().1
        })
        .collect();
    let p = (-1.0f64).exp();
    let emp = empirical_ccdf(&ge, &[1.0]).unwrap()[0];
    assert!(
        (emp - p).abs() <= 3.0 * binomial_stderr(p, N),
        "{emp} vs {p}"
    );
}

#[test]
fn theta_power_has_unit_mean() {
    for kind in [AttackKind::RayleighTheta, AttackKind::UniformTheta] {
        let mut rng = RngStream::new(4, 0);
        let draws: Vec<f64> = (0..N).map(|_| sample_theta_power(kind, &mut rng)).collect();
        let mean = draws.iter().sum::<f64>() / N as f64;
        assert!((mean - 1.0).abs() <= 0.005, "{kind}: mean {mean}");
        if kind == AttackKind::UniformTheta {
            let max = draws.iter().cloned().fold(0.0, f64::max);
            assert!(max <= 3.0, "max {max}");
        }
    }
}

#[test]
fn snr_means_follow_array_gain_and_stealth() {
    let p = ScenarioParams::new(4, 0.0, 5.0).unwrap();
    let mut rng = RngStream::new(5, 0);
    let b: Vec<f64> = (0..N)
        .map(|_| {
            snr_realization(&p, AttackKind::None, &mut rng)
                .unwrap()
                .snr_b
        })
        .collect();
    let (mean, se) = mean_and_stderr(&b);
    assert!((mean - 4.0).abs() <= 3.0 * se, "snr_b mean {mean} +- {se}");

    for kind in AttackKind::ALL {
        let est = estimate_mean(&p, kind, &McConfig::new(N, 6), |t| t.snr_e_hat).unwrap();
        let z = (est.mean - p.gamma_e_bar()) / est.stderr;
        assert!(z.abs() <= 3.0, "{kind}: z = {z}");
    }
}

#[test]
fn rayleigh_hat_ccdf_at_unit_snr() {
    let p = ScenarioParams::new(1, 0.0, 0.0).unwrap();
    let s = sample_snrs(&p, AttackKind::RayleighTheta, N, 7).unwrap();
    let exact = 2.0 * bessel_k1(2.0).unwrap();
    let emp = empirical_ccdf(&s.snr_e_hat, &[1.0]).unwrap()[0];
    assert!(
        (emp - exact).abs() <= 3.0 * binomial_stderr(exact, N),
        "{emp} vs {exact}"
    );
}

#[test]
fn estimator_examples_match_analytics() {
    let p = ScenarioParams::new(4, 10.0, 5.0).unwrap();
    let est = estimate_avg_rate(&p, AttackKind::None, DesignView::TrueView, N, 8).unwrap();
    let exact = secrecy_rate(&p, AttackKind::None).unwrap().rate;
    assert!(
        (est.mean - exact).abs() <= 3.0 * est.stderr,
        "{} vs {exact}",
        est.mean
    );

    let p = ScenarioParams::new(1, 10.0, 15.0).unwrap();
    let est = estimate_avg_rate(&p, AttackKind::UniformTheta, DesignView::BsView, N, 9).unwrap();
    let exact = secrecy_rate_with_method(&p, AttackKind::UniformTheta, Method::Quadrature)
        .unwrap()
        .rate;
    assert!(
        (est.mean - exact).abs() <= 3.0 * est.stderr,
        "{} vs {exact}",
        est.mean
    );
}

#[test]
fn stderr_halves_when_n_quadruples() {
    let p = ScenarioParams::new(2, 10.0, 5.0).unwrap();
    let small =
        estimate_avg_rate(&p, AttackKind::RayleighTheta, DesignView::BsView, N / 4, 10).unwrap();
    let large =
        estimate_avg_rate(&p, AttackKind::RayleighTheta, DesignView::BsView, N, 10).unwrap();
    let ratio = small.stderr / large.stderr;
    assert!((ratio / 2.0 - 1.0).abs() <= 0.2, "ratio {ratio}");
}

#[test]
fn leakage_fraction_respects_theta_bounds() {
    let p = ScenarioParams::new(2, 10.0, 5.0).unwrap();
    for (kind, bound) in [
        (AttackKind::RayleighTheta, 1.0 - (-1.0f64).exp()),
        (AttackKind::UniformTheta, 1.0 / 3f64.sqrt()),
    ] {
        let est = leakage_fraction(&p, kind, N, 11).unwrap();
        assert!(est.mean > 0.0);
        assert!(
            est.mean <= bound + 3.0 * est.stderr,
            "{kind}: {} > {bound}",
            est.mean
        );
    }
}

#[test]
fn jensen_direction() {
    let p = ScenarioParams::new(1, 0.0, 10.0).unwrap();
    let ge = p.gamma_e_bar();
    let plain = estimate_mean(&p, AttackKind::None, &McConfig::new(N, 12), |t| {
        log2_1p(t.snr_e)
    })
    .unwrap();
    for kind in [AttackKind::RayleighTheta, AttackKind::UniformTheta] {
        let hat = estimate_mean(&p, kind, &McConfig::new(N, 12), |t| log2_1p(t.snr_e_hat)).unwrap();
        assert!(
            hat.mean <= log2_1p(ge),
            "{kind}: {} > log2(1+{ge})",
            hat.mean
        );
        assert!(
            hat.mean <= plain.mean + 3.0 * hat.stderr,
            "{kind}: {} vs {}",
            hat.mean,
            plain.mean
        );
    }
}

#[test]
fn eve_capacity_under_uniform_attack_matches_mc() {
    let ge = db_to_linear(15.0);
    let p = ScenarioParams::new(1, 0.0, 15.0).unwrap();
    let exact = avg_capacity_eve(ge, AttackKind::UniformTheta).unwrap();
    let est = estimate_mean(
        &p,
        AttackKind::UniformTheta,
        &McConfig::new(10 * N, 13),
        |t| log2_1p(t.snr_e_hat),
    )
    .unwrap();
    assert!(
        (est.mean - exact).abs() <= 3.0 * est.stderr,
        "{} vs {exact}",
        est.mean
    );
}

#[test]
fn rayleigh_asymptote_matches_mc() {
    let p = ScenarioParams::new(1, 0.0, 0.0).unwrap();
    let exact = excess_rate_asymptote(1.0, AttackKind::RayleighTheta).unwrap();
    let est = estimate_mean(
        &p,
        AttackKind::RayleighTheta,
        &McConfig::new(10 * N, 14),
        |t| log2_1p(t.snr_e) - log2_1p(t.snr_e_hat),
    )
    .unwrap();
    assert!(
        (est.mean - exact).abs() <= 3.0 * est.stderr,
        "{} vs {exact}",
        est.mean
    );
}
