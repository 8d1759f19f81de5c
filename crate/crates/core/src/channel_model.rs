//! Random channel realizations for an `M`-antenna MRT downlink with one
//! legitimate receiver (Bob) and one eavesdropping system user (Eve).
//!
//! Channel vectors are drawn entry by entry as circularly symmetric complex
//! Gaussians with unit second moment, beamformed towards Bob, and reduced to
//! the instantaneous SNR triple `(γ_B, γ_E, γ̂_E)`. Eve's attack enters only
//! through `|θ_E|²`, so the phase of the synthetic symbol is never drawn.
//!
//! # Random streams
//!
//! [`RngStream`] is ChaCha8 keyed by a 64-bit seed (expanded with the PCG32
//! routine of `rand_core::SeedableRng::seed_from_u64`) with the stream id
//! placed in ChaCha's 64-bit stream word. Normals come from the ziggurat
//! sampler of `rand_distr::StandardNormal`, exponentials from `rand_distr::Exp1`
//! and uniforms from the 53-bit `[0, 1)` conversion of `rand`. A given
//! `(seed, stream_id)` therefore always produces the same sequence.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Error, Result};

/// `10^(dB/10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// `10·log10(linear)`.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Physical link budget from which average SNRs can be derived as
/// `P_T · R^{-α} / N₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub pt_watts: f64,
    pub n0_watts: f64,
    pub r_b_m: f64,
    pub r_e_m: f64,
    pub alpha: f64,
}

impl LinkBudget {
    fn snr(&self, distance: f64) -> f64 {
        self.pt_watts * distance.powf(-self.alpha) / self.n0_watts
    }
}

/// Antenna count and average SNRs of one operating point.
///
/// `gamma0_db` is the average legitimate SNR with a single transmit antenna;
/// MRT with `m` antennas raises Bob's average SNR to `m · γ̄₀`. Eve's average
/// SNR does not depend on `m` because the beam is not steered towards her.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioParams {
    pub m: u32,
    pub gamma0_db: f64,
    pub gamma_e_db: f64,
}

impl ScenarioParams {
    pub fn new(m: u32, gamma0_db: f64, gamma_e_db: f64) -> Result<Self> {
        let p = Self {
            m,
            gamma0_db,
            gamma_e_db,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn from_link_budget(m: u32, budget: &LinkBudget) -> Result<Self> {
        let fields = [
            ("pt_watts", budget.pt_watts),
            ("n0_watts", budget.n0_watts),
            ("r_b_m", budget.r_b_m),
            ("r_e_m", budget.r_e_m),
        ];
        for (name, v) in fields {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    detail: format!("{v} must be positive and finite"),
                });
            }
        }
        if !budget.alpha.is_finite() {
            return Err(Error::InvalidParameter {
                name: "alpha",
                detail: format!("{} is not finite", budget.alpha),
            });
        }
        Self::new(
            m,
            linear_to_db(budget.snr(budget.r_b_m)),
            linear_to_db(budget.snr(budget.r_e_m)),
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(Error::InvalidParameter {
                name: "m",
                detail: "at least one transmit antenna is required".into(),
            });
        }
        for (name, v) in [
            ("gamma0_db", self.gamma0_db),
            ("gammaE_db", self.gamma_e_db),
        ] {
            let lin = db_to_linear(v);
            if !v.is_finite() || !(lin > 0.0) || !lin.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    detail: format!("{v} dB does not map to a positive finite SNR"),
                });
            }
        }
        Ok(())
    }

    /// Per-antenna average legitimate SNR `γ̄₀` (linear).
    pub fn gamma0(&self) -> f64 {
        db_to_linear(self.gamma0_db)
    }

    /// Bob's average SNR under MRT, `γ̄_B = M · γ̄₀` (linear).
    pub fn gamma_b_bar(&self) -> f64 {
        f64::from(self.m) * self.gamma0()
    }

    pub fn gamma_b_db(&self) -> f64 {
        self.gamma0_db + linear_to_db(f64::from(self.m))
    }

    /// Eve's average SNR `γ̄_E` (linear).
    pub fn gamma_e_bar(&self) -> f64 {
        db_to_linear(self.gamma_e_db)
    }
}

/// Distribution of the synthetic symbol magnitude `|θ_E|` used by Eve.
///
/// Both attacked variants keep `E{|θ_E|²} = 1`, so the average SNR seen by
/// the base station is unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AttackKind {
    /// No attack: `θ_E = 1`.
    None,
    /// `|θ_E|` Rayleigh, so `|θ_E|²` is unit-mean exponential.
    RayleighTheta,
    /// `|θ_E|` uniform on `[0, √3]`.
    UniformTheta,
}

impl AttackKind {
    pub const ALL: [AttackKind; 3] = [
        AttackKind::None,
        AttackKind::RayleighTheta,
        AttackKind::UniformTheta,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AttackKind::None => "none",
            AttackKind::RayleighTheta => "rayleigh",
            AttackKind::UniformTheta => "uniform",
        }
    }

    pub fn is_attack(self) -> bool {
        self != AttackKind::None
    }
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AttackKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "none" => Ok(AttackKind::None),
            "rayleigh" | "rayleightheta" => Ok(AttackKind::RayleighTheta),
            "uniform" | "uniformtheta" => Ok(AttackKind::UniformTheta),
            other => Err(format!(
                "unknown attack kind `{other}` (expected none, rayleigh or uniform)"
            )),
        }
    }
}

/// Deterministic random stream identified by `(seed, stream_id)`.
#[derive(Debug)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Unit-mean exponential.
    pub fn exponential(&mut self) -> f64 {
        self.rng.sample(Exp1)
    }

    /// Circularly symmetric complex Gaussian with `E{|h|²} = 1`.
    pub fn complex_gaussian(&mut self) -> Complex64 {
        let re = self.standard_normal();
        let im = self.standard_normal();
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }
}

/// One draw of both channel vectors and everything derived from it.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h_b: Vec<Complex64>,
    pub h_e: Vec<Complex64>,
    /// `|h_B^eq|² = ‖h_B‖²`.
    pub g_b: f64,
    /// `|h_E^eq|²`.
    pub g_e: f64,
    /// `|θ_E|²`, exactly 1 without attack.
    pub theta_pow: f64,
    pub snr_b: f64,
    pub snr_e: f64,
    /// Eve's SNR as estimated by the base station, `|θ_E|² γ_E`.
    pub snr_e_hat: f64,
}

/// `m` i.i.d. unit-power circularly symmetric complex Gaussian entries.
pub fn sample_channel_vector(m: usize, rng: &mut RngStream) -> Vec<Complex64> {
    (0..m).map(|_| rng.complex_gaussian()).collect()
}

/// Equivalent channel gains after MRT towards Bob.
///
/// With `w_B = h_B / ‖h_B‖`, returns `(|h_Bᴴ w_B|², |h_Eᴴ w_B|²)`. The first
/// entry is `‖h_B‖²` by construction.
pub fn mrt_equivalent_gains(h_b: &[Complex64], h_e: &[Complex64]) -> Result<(f64, f64)> {
    if h_b.len() != h_e.len() || h_b.is_empty() {
        return Err(Error::InvalidParameter {
            name: "channel vectors",
            detail: format!(
                "lengths {} and {} must be equal and non-zero",
                h_b.len(),
                h_e.len()
            ),
        });
    }
    let norm_sqr: f64 = h_b.iter().map(|h| h.norm_sqr()).sum();
    if !(norm_sqr > 0.0) {
        return Err(Error::DegenerateChannel);
    }
    let inv_norm = norm_sqr.sqrt().recip();
    let proj: Complex64 = h_e
        .iter()
        .zip(h_b)
        .map(|(e, b)| e.conj() * (b * inv_norm))
        .sum();
    Ok((norm_sqr, proj.norm_sqr()))
}

/// Draws `|θ_E|²` for the given attack.
pub fn sample_theta_power(kind: AttackKind, rng: &mut RngStream) -> f64 {
    match kind {
        AttackKind::None => 1.0,
        AttackKind::RayleighTheta => rng.exponential(),
        AttackKind::UniformTheta => {
            let u = rng.uniform();
            3.0 * u * u
        }
    }
}

/// Draws one full realization: `h_B`, then `h_E`, then `|θ_E|²`.
pub fn snr_realization(
    params: &ScenarioParams,
    kind: AttackKind,
    rng: &mut RngStream,
) -> Result<ChannelRealization> {
    params.validate()?;
    let m = params.m as usize;
    let h_b = sample_channel_vector(m, rng);
    let h_e = sample_channel_vector(m, rng);
    let (g_b, g_e) = mrt_equivalent_gains(&h_b, &h_e)?;
    let theta_pow = sample_theta_power(kind, rng);
    let snr_b = params.gamma0() * g_b;
    let snr_e = params.gamma_e_bar() * g_e;
    Ok(ChannelRealization {
        h_b,
        h_e,
        g_b,
        g_e,
        theta_pow,
        snr_b,
        snr_e,
        snr_e_hat: theta_pow * snr_e,
    })
}

/// Allocation-free version of [`snr_realization`] for the Monte-Carlo loops.
/// Consumes the stream in exactly the same order.
#[derive(Debug)]
pub(crate) struct SnrSampler {
    kind: AttackKind,
    gamma0: f64,
    gamma_e: f64,
    h_b: Vec<Complex64>,
    h_e: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrTriple {
    pub snr_b: f64,
    pub snr_e: f64,
    pub snr_e_hat: f64,
}

impl SnrSampler {
    pub(crate) fn new(params: &ScenarioParams, kind: AttackKind) -> Result<Self> {
        params.validate()?;
        let m = params.m as usize;
        Ok(Self {
            kind,
            gamma0: params.gamma0(),
            gamma_e: params.gamma_e_bar(),
            h_b: vec![Complex64::default(); m],
            h_e: vec![Complex64::default(); m],
        })
    }

    pub(crate) fn draw(&mut self, rng: &mut RngStream) -> Result<SnrTriple> {
        for h in self.h_b.iter_mut() {
            *h = rng.complex_gaussian();
        }
        for h in self.h_e.iter_mut() {
            *h = rng.complex_gaussian();
        }
        let (g_b, g_e) = mrt_equivalent_gains(&self.h_b, &self.h_e)?;
        let theta_pow = sample_theta_power(self.kind, rng);
        let snr_e = self.gamma_e * g_e;
        Ok(SnrTriple {
            snr_b: self.gamma0 * g_b,
            snr_e,
            snr_e_hat: theta_pow * snr_e,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn e(i: usize, m: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::default(); m];
        v[i] = Complex64::new(1.0, 0.0);
        v
    }

    #[test]
    fn db_conversion() {
        assert_relative_eq!(db_to_linear(10.0), 10.0, max_relative = 1e-15);
        assert_relative_eq!(db_to_linear(-30.0), 1e-3, max_relative = 1e-15);
        assert_relative_eq!(linear_to_db(db_to_linear(5.0)), 5.0, max_relative = 1e-14);
    }

    #[test]
    fn scenario_identities() {
        let p = ScenarioParams::new(4, 3.0, 5.0).unwrap();
        assert_relative_eq!(
            p.gamma_b_bar(),
            4.0 * db_to_linear(3.0),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            p.gamma_b_db(),
            3.0 + 10.0 * 4f64.log10(),
            max_relative = 1e-15
        );
        let q = ScenarioParams::new(8, 3.0, 5.0).unwrap();
        assert_eq!(p.gamma_e_bar(), q.gamma_e_bar());
        assert!(ScenarioParams::new(0, 0.0, 0.0).is_err());
        assert!(ScenarioParams::new(1, f64::NAN, 0.0).is_err());
        assert!(ScenarioParams::new(1, 0.0, 5000.0).is_err());
    }

    #[test]
    fn link_budget_derivation() {
        let lb = LinkBudget {
            pt_watts: 1.0,
            n0_watts: 1e-9,
            r_b_m: 100.0,
            r_e_m: 200.0,
            alpha: 3.0,
        };
        let p = ScenarioParams::from_link_budget(2, &lb).unwrap();
        assert_relative_eq!(p.gamma0(), 1e9 * 100f64.powi(-3), max_relative = 1e-12);
        assert_relative_eq!(p.gamma_e_bar(), 1e9 * 200f64.powi(-3), max_relative = 1e-12);
        let bad = LinkBudget {
            n0_watts: 0.0,
            ..lb
        };
        assert!(ScenarioParams::from_link_budget(2, &bad).is_err());
    }

    #[test]
    fn orthogonal_and_aligned_channels() {
        let (gb, ge) = mrt_equivalent_gains(&e(0, 3), &e(1, 3)).unwrap();
        assert_eq!((gb, ge), (1.0, 0.0));
        let v = vec![Complex64::new(0.3, -1.2), Complex64::new(2.0, 0.5)];
        let (gb, ge) = mrt_equivalent_gains(&v, &v).unwrap();
        let n2 = 0.09 + 1.44 + 4.0 + 0.25;
        assert_relative_eq!(gb, n2, max_relative = 1e-15);
        assert_relative_eq!(ge, n2, max_relative = 1e-14);
    }

    #[test]
    fn degenerate_and_mismatched_channels() {
        let z = vec![Complex64::default(); 2];
        assert_eq!(
            mrt_equivalent_gains(&z, &e(0, 2)),
            Err(Error::DegenerateChannel)
        );
        assert!(matches!(
            mrt_equivalent_gains(&e(0, 2), &e(0, 3)),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn mrt_identity_against_explicit_inner_product() {
        let mut rng = RngStream::new(9, 0);
        for _ in 0..1000 {
            let hb = sample_channel_vector(5, &mut rng);
            let he = sample_channel_vector(5, &mut rng);
            let (gb, _) = mrt_equivalent_gains(&hb, &he).unwrap();
            let n = hb.iter().map(|h| h.norm_sqr()).sum::<f64>().sqrt();
            let explicit: Complex64 = hb.iter().map(|h| h.conj() * (h / n)).sum();
            assert_relative_eq!(gb, explicit.norm_sqr(), max_relative = 1e-13);
        }
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = sample_channel_vector(4, &mut RngStream::new(42, 7));
        let b = sample_channel_vector(4, &mut RngStream::new(42, 7));
        let c = sample_channel_vector(4, &mut RngStream::new(42, 8));
        let d = sample_channel_vector(4, &mut RngStream::new(43, 7));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn theta_none_is_one() {
        let mut rng = RngStream::new(1, 0);
        assert_eq!(sample_theta_power(AttackKind::None, &mut rng), 1.0);
    }

    #[test]
    fn sampler_matches_snr_realization() {
        let p = ScenarioParams::new(3, 2.0, 4.0).unwrap();
        for kind in AttackKind::ALL {
            let mut r1 = RngStream::new(5, 1);
            let mut r2 = RngStream::new(5, 1);
            let mut s = SnrSampler::new(&p, kind).unwrap();
            for _ in 0..100 {
                let full = snr_realization(&p, kind, &mut r1).unwrap();
                let t = s.draw(&mut r2).unwrap();
                assert_eq!(full.snr_b, t.snr_b);
                assert_eq!(full.snr_e, t.snr_e);
                assert_eq!(full.snr_e_hat, t.snr_e_hat);
                assert_eq!(full.g_b, full.h_b.iter().map(|h| h.norm_sqr()).sum::<f64>());
                assert_relative_eq!(full.snr_b, p.gamma0() * full.g_b);
                assert_eq!(full.snr_e_hat, full.theta_pow * full.snr_e);
                if kind == AttackKind::None {
                    assert_eq!(full.snr_e_hat, full.snr_e);
                }
            }
        }
    }

    #[test]
    fn attack_kind_parsing() {
        for k in AttackKind::ALL {
            assert_eq!(k.as_str().parse::<AttackKind>().unwrap(), k);
        }
        assert_eq!(
            " Rayleigh ".parse::<AttackKind>().unwrap(),
            AttackKind::RayleighTheta
        );
        assert!("gaussian".parse::<AttackKind>().is_err());
    }
}
