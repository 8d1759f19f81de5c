//! Monte-Carlo estimators of average secrecy rates.
//!
//! Samples are split into fixed-size blocks. Block `b` draws from
//! `RngStream::new(seed, b)` and produces its own running moments; blocks are
//! then merged with a fixed pairwise tree. The result is bit-identical for a
//! given `(seed, n, block_size)` whether blocks run serially or on a thread
//! pool of any size.

use crate::channel_model::{AttackKind, RngStream, ScenarioParams, SnrSampler, SnrTriple};
use crate::error::{Error, Result};

pub const DEFAULT_BLOCK_SIZE: usize = 1 << 16;
pub const DEFAULT_SAMPLES: usize = 1_000_000;
pub const MIN_SAMPLES: usize = 10_000;

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// `sample_std / √n`.
    pub stderr: f64,
    pub n_samples: usize,
    pub seed: u64,
}

/// Which Eve SNR the base station uses when picking its rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DesignView {
    /// Attacked estimate `γ̂_E`; averages to `R̄_S`.
    BsView,
    /// True `γ_E`; averages to `C̄_S`.
    TrueView,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub n: usize,
    pub seed: u64,
    pub block_size: usize,
}

impl McConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        Self {
            n,
            seed,
            block_size: DEFAULT_BLOCK_SIZE,
        }
    }

    fn check(&self) -> Result<()> {
        if self.n < MIN_SAMPLES {
            return Err(Error::InvalidParameter {
                name: "n",
                detail: format!(
                    "{} samples requested, at least {MIN_SAMPLES} required",
                    self.n
                ),
            });
        }
        if self.block_size == 0 {
            return Err(Error::InvalidParameter {
                name: "block_size",
                detail: "must be positive".into(),
            });
        }
        Ok(())
    }
}

/// Rate selected for one realization: `[log₂(1+γ_B) − log₂(1+γ_design)]⁺`.
///
/// With the true `γ_E` this is the instantaneous secrecy capacity; with the
/// base station's estimate `γ̂_E` it is the compromised rate.
pub fn instantaneous_rate(snr_b: f64, snr_e_design: f64) -> f64 {
    // log2((1+a)/(1+b)) via ln_1p keeps small SNRs accurate
    ((snr_b.ln_1p() - snr_e_design.ln_1p()) / std::f64::consts::LN_2).max(0.0)
}

/// Welford running moments.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Moments {
    count: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, v: f64) {
        self.count += 1;
        let delta = v - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (v - self.mean);
    }

    fn merge(a: Moments, b: Moments) -> Moments {
        if a.count == 0 {
            return b;
        }
        if b.count == 0 {
            return a;
        }
        let count = a.count + b.count;
        let (na, nb, n) = (a.count as f64, b.count as f64, count as f64);
        let delta = b.mean - a.mean;
        Moments {
            count,
            mean: a.mean + delta * nb / n,
            m2: a.m2 + b.m2 + delta * delta * na * nb / n,
        }
    }

    fn estimate(self, seed: u64) -> McEstimate {
        let var = if self.count > 1 {
            self.m2 / (self.count - 1) as f64
        } else {
            0.0
        };
        McEstimate {
            mean: self.mean,
            stderr: (var / self.count as f64).sqrt(),
            n_samples: self.count,
            seed,
        }
    }
}

/// Pairwise merge in index order: the tree shape depends only on the
/// number of blocks.
fn tree_merge(parts: &[Moments]) -> Moments {
    match parts.len() {
        0 => Moments::default(),
        1 => parts[0],
        len => {
            let mid = len / 2;
            Moments::merge(tree_merge(&parts[..mid]), tree_merge(&parts[mid..]))
        }
    }
}

/// Runs `body(block_len, rng)` for every block and returns the per-block
/// outputs in block order.
fn run_blocks<T, F>(config: &McConfig, body: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, &mut RngStream) -> Result<T> + Sync,
{
    let n_blocks = config.n.div_ceil(config.block_size);
    let block = |b: usize| {
        let start = b * config.block_size;
        let len = config.block_size.min(config.n - start);
        let mut rng = RngStream::new(config.seed, b as u64);
        body(len, &mut rng)
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n_blocks).into_par_iter().map(block).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n_blocks).map(block).collect()
    }
}

/// Mean of an arbitrary statistic of the SNR triple over `config.n`
/// realizations.
pub fn estimate_mean<F>(
    params: &ScenarioParams,
    kind: AttackKind,
    config: &McConfig,
    statistic: F,
) -> Result<McEstimate>
where
    F: Fn(&SnrTriple) -> f64 + Sync,
{
    let [m] = estimate_means(params, kind, config, |t| [statistic(t)])?;
    Ok(m)
}

/// Several statistics estimated from the same realizations.
pub fn estimate_means<const K: usize, F>(
    params: &ScenarioParams,
    kind: AttackKind,
    config: &McConfig,
    statistics: F,
) -> Result<[McEstimate; K]>
where
    F: Fn(&SnrTriple) -> [f64; K] + Sync,
{
    config.check()?;
    params.validate()?;
    let blocks = run_blocks(config, |len, rng| {
        let mut sampler = SnrSampler::new(params, kind)?;
        let mut acc = [Moments::default(); K];
        for _ in 0..len {
            let t = sampler.draw(rng)?;
            for (a, v) in acc.iter_mut().zip(statistics(&t)) {
                a.push(v);
            }
        }
        Ok(acc)
    })?;
    let mut out = [McEstimate {
        mean: 0.0,
        stderr: 0.0,
        n_samples: 0,
        seed: config.seed,
    }; K];
    for (k, slot) in out.iter_mut().enumerate() {
        let parts: Vec<Moments> = blocks.iter().map(|b| b[k]).collect();
        *slot = tree_merge(&parts).estimate(config.seed);
    }
    Ok(out)
}

/// MC estimate of `C̄_S` (true view) or `R̄_S` (base-station view).
pub fn estimate_avg_rate(
    params: &ScenarioParams,
    kind: AttackKind,
    view: DesignView,
    n: usize,
    seed: u64,
) -> Result<McEstimate> {
    let config = McConfig::new(n, seed);
    match view {
        DesignView::BsView => estimate_mean(params, kind, &config, |t| {
            instantaneous_rate(t.snr_b, t.snr_e_hat)
        }),
        DesignView::TrueView => estimate_mean(params, kind, &config, |t| {
            instantaneous_rate(t.snr_b, t.snr_e)
        }),
    }
}

/// `(C̄_S, R̄_S)` estimated from one shared set of realizations.
pub fn estimate_rate_pair(
    params: &ScenarioParams,
    kind: AttackKind,
    config: &McConfig,
) -> Result<(McEstimate, McEstimate)> {
    let [cs, rs] = estimate_means(params, kind, config, |t| {
        [
            instantaneous_rate(t.snr_b, t.snr_e),
            instantaneous_rate(t.snr_b, t.snr_e_hat),
        ]
    })?;
    Ok((cs, rs))
}

/// Fraction of realizations where the rate picked from `γ̂_E` exceeds the
/// instantaneous secrecy capacity.
pub fn leakage_fraction(
    params: &ScenarioParams,
    kind: AttackKind,
    n: usize,
    seed: u64,
) -> Result<McEstimate> {
    if !kind.is_attack() {
        return Err(Error::InvalidCombination(
            "leakage is only defined under an attack".into(),
        ));
    }
    estimate_mean(params, kind, &McConfig::new(n, seed), |t| {
        let selected = instantaneous_rate(t.snr_b, t.snr_e_hat);
        let secure = instantaneous_rate(t.snr_b, t.snr_e);
        if selected > secure {
            1.0
        } else {
            0.0
        }
    })
}

/// Columns of simulated SNRs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SnrSamples {
    pub snr_b: Vec<f64>,
    pub snr_e: Vec<f64>,
    pub snr_e_hat: Vec<f64>,
}

/// Draws `n` SNR triples using the same block layout as the estimators.
pub fn sample_snrs(
    params: &ScenarioParams,
    kind: AttackKind,
    n: usize,
    seed: u64,
) -> Result<SnrSamples> {
    params.validate()?;
    let config = McConfig::new(n, seed);
    if n == 0 {
        return Ok(SnrSamples::default());
    }
    let blocks = run_blocks(&config, |len, rng| {
        let mut sampler = SnrSampler::new(params, kind)?;
        (0..len)
            .map(|_| sampler.draw(rng))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut out = SnrSamples {
        snr_b: Vec::with_capacity(n),
        snr_e: Vec::with_capacity(n),
        snr_e_hat: Vec::with_capacity(n),
    };
    for t in blocks.iter().flatten() {
        out.snr_b.push(t.snr_b);
        out.snr_e.push(t.snr_e);
        out.snr_e_hat.push(t.snr_e_hat);
    }
    Ok(out)
}

/// Fraction of `samples` strictly greater than each grid point.
pub fn empirical_ccdf(samples: &[f64], x_grid: &[f64]) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter {
            name: "samples",
            detail: "empirical cCDF of an empty sample".into(),
        });
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    Ok(x_grid
        .iter()
        .map(|&x| {
            let at_or_below = sorted.partition_point(|&s| s <= x);
            (sorted.len() - at_or_below) as f64 / n
        })
        .collect())
}

/// Binomial standard error of an empirical probability `p` from `n` draws.
pub fn binomial_stderr(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn instantaneous_rate_cases() {
        assert_eq!(instantaneous_rate(0.0, 0.0), 0.0);
        assert_relative_eq!(instantaneous_rate(3.0, 1.0), 1.0, max_relative = 1e-15);
        assert_eq!(instantaneous_rate(1.0, 3.0), 0.0);
    }

    #[test]
    fn moments_merge_matches_single_pass() {
        let data: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1).collect();
        let mut whole = Moments::default();
        data.iter().for_each(|&v| whole.push(v));
        let parts: Vec<Moments> = data
            .chunks(64)
            .map(|c| {
                let mut m = Moments::default();
                c.iter().for_each(|&v| m.push(v));
                m
            })
            .collect();
        let merged = tree_merge(&parts);
        assert_eq!(merged.count, whole.count);
        assert_relative_eq!(merged.mean, whole.mean, max_relative = 1e-13);
        assert_relative_eq!(merged.m2, whole.m2, max_relative = 1e-12);
    }

    #[test]
    fn empirical_ccdf_counts() {
        let s = [1.0, 2.0, 3.0];
        assert_eq!(
            empirical_ccdf(&s, &[0.0, 2.0, 3.0]).unwrap(),
            vec![1.0, 1.0 / 3.0, 0.0]
        );
        assert!(empirical_ccdf(&[], &[0.0]).is_err());
        let v = empirical_ccdf(&[0.5, 0.1, 2.0, 2.0, 7.0], &[0.0, 0.5, 1.0, 2.0, 10.0]).unwrap();
        assert!(v.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn rejects_small_n_and_no_attack_leakage() {
        let p = ScenarioParams::new(1, 0.0, 0.0).unwrap();
        assert!(estimate_avg_rate(&p, AttackKind::None, DesignView::TrueView, 100, 1).is_err());
        assert!(matches!(
            leakage_fraction(&p, AttackKind::None, 20_000, 1),
            Err(Error::InvalidCombination(_))
        ));
    }

    #[test]
    fn no_attack_views_coincide() {
        let p = ScenarioParams::new(2, 5.0, 5.0).unwrap();
        let cfg = McConfig::new(20_000, 3);
        let (cs, rs) = estimate_rate_pair(&p, AttackKind::None, &cfg).unwrap();
        assert_eq!(cs, rs);
        let t = estimate_avg_rate(&p, AttackKind::None, DesignView::TrueView, 20_000, 3).unwrap();
        let b = estimate_avg_rate(&p, AttackKind::None, DesignView::BsView, 20_000, 3).unwrap();
        assert_eq!(t, b);
        assert_eq!(t, cs);
    }

    #[test]
    fn block_size_only_changes_layout() {
        let p = ScenarioParams::new(2, 5.0, 5.0).unwrap();
        let a = estimate_mean(
            &p,
            AttackKind::RayleighTheta,
            &McConfig::new(30_000, 9),
            |t| t.snr_b,
        )
        .unwrap();
        let b = estimate_mean(
            &p,
            AttackKind::RayleighTheta,
            &McConfig::new(30_000, 9),
            |t| t.snr_b,
        )
        .unwrap();
        assert_eq!(a, b);
        let c = estimate_mean(
            &p,
            AttackKind::RayleighTheta,
            &McConfig {
                block_size: 1000,
                ..McConfig::new(30_000, 9)
            },
            |t| t.snr_b,
        )
        .unwrap();
        assert_eq!(c.n_samples, 30_000);
        assert!((a.mean - c.mean).abs() < 5.0 * a.stderr);
    }

    #[test]
    fn sample_snrs_layout() {
        let p = ScenarioParams::new(1, 0.0, 0.0).unwrap();
        let s = sample_snrs(&p, AttackKind::UniformTheta, 70_000, 4).unwrap();
        assert_eq!(s.snr_b.len(), 70_000);
        let mean_b = s.snr_b.iter().sum::<f64>() / 70_000.0;
        let est = estimate_mean(
            &p,
            AttackKind::UniformTheta,
            &McConfig::new(70_000, 4),
            |t| t.snr_b,
        )
        .unwrap();
        assert_relative_eq!(mean_b, est.mean, max_relative = 1e-12);
    }
}
