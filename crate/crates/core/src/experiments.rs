//! Parameter sweeps over `(M, γ̄_E, γ̄₀ or γ̄_B, attack)` with CSV output.
//!
//! # Config format
//!
//! UTF-8 text, one `key = value` per line, `#` starts a comment, lists are
//! comma-separated:
//!
//! ```text
//! m_list          = 1,2,4,8
//! gammaE_db_list  = 5
//! gamma0_db_range = 0,30,1        # start, stop, step in dB (x axis)
//! attacks         = none,rayleigh,uniform
//! mc_samples      = 1000000       # 0 disables Monte-Carlo columns
//! seed            = 42
//! x_axis          = gamma0_db     # or gammaB_db
//! gammaE_scaling  = fixed         # or reduce_by_10log10M
//! ```
//!
//! `gamma0_db_range` always spans the x axis: with `x_axis = gammaB_db` its
//! endpoints are Bob's average SNR and `γ̄₀ = γ̄_B − 10 log10 M`.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use thiserror::Error;

use crate::channel_model::{linear_to_db, AttackKind, ScenarioParams};
use crate::montecarlo::{estimate_rate_pair, McConfig, DEFAULT_SAMPLES, MIN_SAMPLES};
use crate::secrecy_analytics::{excess_rate, excess_rate_asymptote, secrecy_rate};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("invalid value for `{key}`: {message}")]
    Invalid { key: &'static str, message: String },
    #[error("unknown preset `{0}` (expected fig1, fig2 or fig3)")]
    UnknownPreset(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XAxis {
    Gamma0Db,
    GammaBDb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaEScaling {
    Fixed,
    /// `γ̄_E(dB) → γ̄_E(dB) − 10 log10 M`.
    ReduceBy10Log10M,
}

/// Inclusive dB range `start, start + step, …, ≤ stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DbRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl DbRange {
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| self.start + k as f64 * self.step)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub m_list: Vec<u32>,
    pub gamma_e_db_list: Vec<f64>,
    pub gamma0_db_range: DbRange,
    pub attacks: Vec<AttackKind>,
    pub mc_samples: usize,
    pub seed: u64,
    pub x_axis: XAxis,
    pub gamma_e_scaling: GammaEScaling,
}

/// A config under construction; `None` means "not given yet".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartialConfig {
    pub m_list: Option<Vec<u32>>,
    pub gamma_e_db_list: Option<Vec<f64>>,
    pub gamma0_db_range: Option<DbRange>,
    pub attacks: Option<Vec<AttackKind>>,
    pub mc_samples: Option<usize>,
    pub seed: Option<u64>,
    pub x_axis: Option<XAxis>,
    pub gamma_e_scaling: Option<GammaEScaling>,
}

impl PartialConfig {
    /// Applies defaults and validates.
    pub fn finish(self) -> Result<SweepConfig, ConfigError> {
        let cfg = SweepConfig {
            m_list: self.m_list.unwrap_or_else(|| vec![1]),
            gamma_e_db_list: self.gamma_e_db_list.unwrap_or_else(|| vec![5.0]),
            gamma0_db_range: self
                .gamma0_db_range
                .ok_or(ConfigError::MissingKey("gamma0_db_range"))?,
            attacks: self.attacks.unwrap_or_else(|| AttackKind::ALL.to_vec()),
            mc_samples: self.mc_samples.unwrap_or(DEFAULT_SAMPLES),
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            x_axis: self.x_axis.unwrap_or(XAxis::Gamma0Db),
            gamma_e_scaling: self.gamma_e_scaling.unwrap_or(GammaEScaling::Fixed),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |key, message: &str| ConfigError::Invalid {
            key,
            message: message.to_string(),
        };
        if self.m_list.is_empty() {
            return Err(invalid("m_list", "list is empty"));
        }
        if self.m_list.contains(&0) {
            return Err(invalid("m_list", "antenna counts must be at least 1"));
        }
        if self.gamma_e_db_list.is_empty() {
            return Err(invalid("gammaE_db_list", "list is empty"));
        }
        if self.gamma_e_db_list.iter().any(|v| !v.is_finite()) {
            return Err(invalid("gammaE_db_list", "values must be finite"));
        }
        if self.attacks.is_empty() {
            return Err(invalid("attacks", "list is empty"));
        }
        let r = &self.gamma0_db_range;
        if !(r.start.is_finite() && r.stop.is_finite() && r.step.is_finite()) {
            return Err(invalid("gamma0_db_range", "values must be finite"));
        }
        if !(r.step > 0.0) {
            return Err(invalid("gamma0_db_range", "step must be positive"));
        }
        if r.start > r.stop {
            return Err(invalid("gamma0_db_range", "start is greater than stop"));
        }
        if self.mc_samples != 0 && self.mc_samples < MIN_SAMPLES {
            return Err(ConfigError::Invalid {
                key: "mc_samples",
                message: format!("must be 0 or at least {MIN_SAMPLES}"),
            });
        }
        Ok(())
    }
}

/// Built-in reproduction targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Rayleigh θ, γ̄_E = 5 dB, M ∈ {1,2,4,8}, γ̄₀ from 0 to 30 dB.
    Fig1,
    /// Uniform θ, M = 4, γ̄_E ∈ {5,10,15} dB, γ̄₀ from 0 to 30 dB.
    Fig2,
    /// Both attacks, γ̄_E = 15 dB reduced by 10 log10 M, γ̄_B from 0 to 40 dB,
    /// analytics only.
    Fig3,
}

impl FromStr for Preset {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fig1" => Ok(Preset::Fig1),
            "fig2" => Ok(Preset::Fig2),
            "fig3" => Ok(Preset::Fig3),
            other => Err(ConfigError::UnknownPreset(other.to_string())),
        }
    }
}

impl Preset {
    pub fn partial(self) -> PartialConfig {
        let base = PartialConfig {
            mc_samples: Some(DEFAULT_SAMPLES),
            seed: Some(DEFAULT_SEED),
            ..PartialConfig::default()
        };
        match self {
            Preset::Fig1 => PartialConfig {
                m_list: Some(vec![1, 2, 4, 8]),
                gamma_e_db_list: Some(vec![5.0]),
                gamma0_db_range: Some(DbRange {
                    start: 0.0,
                    stop: 30.0,
                    step: 1.0,
                }),
                attacks: Some(vec![AttackKind::RayleighTheta]),
                x_axis: Some(XAxis::Gamma0Db),
                gamma_e_scaling: Some(GammaEScaling::Fixed),
                ..base
            },
            Preset::Fig2 => PartialConfig {
                m_list: Some(vec![4]),
                gamma_e_db_list: Some(vec![5.0, 10.0, 15.0]),
                gamma0_db_range: Some(DbRange {
                    start: 0.0,
                    stop: 30.0,
                    step: 1.0,
                }),
                attacks: Some(vec![AttackKind::UniformTheta]),
                x_axis: Some(XAxis::Gamma0Db),
                gamma_e_scaling: Some(GammaEScaling::Fixed),
                ..base
            },
            Preset::Fig3 => PartialConfig {
                m_list: Some(vec![1, 2, 4, 8]),
                gamma_e_db_list: Some(vec![15.0]),
                gamma0_db_range: Some(DbRange {
                    start: 0.0,
                    stop: 40.0,
                    step: 1.0,
                }),
                attacks: Some(vec![AttackKind::RayleighTheta, AttackKind::UniformTheta]),
                mc_samples: Some(0),
                x_axis: Some(XAxis::GammaBDb),
                gamma_e_scaling: Some(GammaEScaling::ReduceBy10Log10M),
                ..base
            },
        }
    }

    pub fn config(self) -> SweepConfig {
        self.partial().finish().expect("presets are valid")
    }
}

/// Parses a config document on top of the built-in defaults.
pub fn parse_config(text: &str) -> Result<SweepConfig, ConfigError> {
    parse_config_over(text, PartialConfig::default())
}

/// Parses a config document whose keys override `base` (e.g. a preset).
pub fn parse_config_over(text: &str, base: PartialConfig) -> Result<SweepConfig, ConfigError> {
    let mut cfg = base;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Parse {
            line,
            message: format!("expected `key = value`, found `{content}`"),
        })?;
        let key = key.trim();
        let value = value.trim();
        let err = |message: String| ConfigError::Parse { line, message };
        match key {
            "m_list" => cfg.m_list = Some(parse_list(value).map_err(err)?),
            "gammaE_db_list" => cfg.gamma_e_db_list = Some(parse_list(value).map_err(err)?),
            "gamma0_db_range" => {
                let v: Vec<f64> = parse_list(value).map_err(err)?;
                let [start, stop, step] = v[..] else {
                    return Err(ConfigError::Parse {
                        line,
                        message: format!(
                            "gamma0_db_range needs start,stop,step; got {} values",
                            v.len()
                        ),
                    });
                };
                cfg.gamma0_db_range = Some(DbRange { start, stop, step });
            }
            "attacks" => cfg.attacks = Some(parse_list(value).map_err(err)?),
            "mc_samples" => cfg.mc_samples = Some(parse_scalar(value).map_err(err)?),
            "seed" => cfg.seed = Some(parse_scalar(value).map_err(err)?),
            "x_axis" => {
                cfg.x_axis = Some(match value {
                    "gamma0_db" => XAxis::Gamma0Db,
                    "gammaB_db" => XAxis::GammaBDb,
                    other => {
                        return Err(err(format!(
                            "x_axis must be gamma0_db or gammaB_db, got `{other}`"
                        )))
                    }
                })
            }
            "gammaE_scaling" => {
                cfg.gamma_e_scaling = Some(match value {
                    "fixed" => GammaEScaling::Fixed,
                    "reduce_by_10log10M" => GammaEScaling::ReduceBy10Log10M,
                    other => {
                        return Err(err(format!(
                            "gammaE_scaling must be fixed or reduce_by_10log10M, got `{other}`"
                        )))
                    }
                })
            }
            other => return Err(err(format!("unknown key `{other}`"))),
        }
    }
    cfg.finish()
}

fn parse_scalar<T: FromStr>(s: &str) -> Result<T, String>
where
    T::Err: fmt::Display,
{
    s.trim()
        .parse()
        .map_err(|e| format!("cannot parse `{}`: {e}", s.trim()))
}

fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>, String>
where
    T::Err: fmt::Display,
{
    if s.trim().is_empty() {
        return Err("empty list".into());
    }
    s.split(',').map(parse_scalar).collect()
}

/// One CSV record.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub m: u32,
    pub gamma0_db: f64,
    pub gamma_b_db: f64,
    /// Eve's average SNR after any per-`M` scaling.
    pub gamma_e_db: f64,
    pub attack: AttackKind,
    pub cs_analytic: f64,
    pub rs_analytic: f64,
    pub d_excess: f64,
    pub d_asymptote: f64,
    pub cs_mc: Option<f64>,
    pub cs_mc_stderr: Option<f64>,
    pub rs_mc: Option<f64>,
    pub rs_mc_stderr: Option<f64>,
    /// Set when a metric of this row failed; failed cells are written as
    /// `error`.
    pub error: Option<String>,
}

pub const CSV_HEADER: [&str; 13] = [
    "m",
    "gamma0_db",
    "gammaB_db",
    "gammaE_db",
    "attack",
    "cs_analytic",
    "rs_analytic",
    "d_excess",
    "d_asymptote",
    "cs_mc",
    "cs_mc_stderr",
    "rs_mc",
    "rs_mc_stderr",
];

#[derive(Debug, Clone, Copy)]
struct SweepPoint {
    m: u32,
    gamma0_db: f64,
    gamma_e_db: f64,
    attack: AttackKind,
}

fn sweep_points(config: &SweepConfig) -> Vec<SweepPoint> {
    let xs = config.gamma0_db_range.points();
    let mut points = Vec::new();
    for &m in &config.m_list {
        let array_gain_db = linear_to_db(f64::from(m));
        for &ge in &config.gamma_e_db_list {
            let gamma_e_db = match config.gamma_e_scaling {
                GammaEScaling::Fixed => ge,
                GammaEScaling::ReduceBy10Log10M => ge - array_gain_db,
            };
            for &x in &xs {
                let gamma0_db = match config.x_axis {
                    XAxis::Gamma0Db => x,
                    XAxis::GammaBDb => x - array_gain_db,
                };
                for &attack in &config.attacks {
                    points.push(SweepPoint {
                        m,
                        gamma0_db,
                        gamma_e_db,
                        attack,
                    });
                }
            }
        }
    }
    points
}

fn evaluate_point(p: SweepPoint, config: &SweepConfig) -> SweepRow {
    let mut row = SweepRow {
        m: p.m,
        gamma0_db: p.gamma0_db,
        gamma_b_db: p.gamma0_db + linear_to_db(f64::from(p.m)),
        gamma_e_db: p.gamma_e_db,
        attack: p.attack,
        cs_analytic: f64::NAN,
        rs_analytic: f64::NAN,
        d_excess: f64::NAN,
        d_asymptote: f64::NAN,
        cs_mc: None,
        cs_mc_stderr: None,
        rs_mc: None,
        rs_mc_stderr: None,
        error: None,
    };
    let params = match ScenarioParams::new(p.m, p.gamma0_db, p.gamma_e_db) {
        Ok(params) => params,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    let analytic = (|| -> crate::Result<(f64, f64, f64, f64)> {
        let cs = secrecy_rate(&params, AttackKind::None)?.rate;
        if !p.attack.is_attack() {
            return Ok((cs, cs, 0.0, 0.0));
        }
        let rs = secrecy_rate(&params, p.attack)?.rate;
        let d = excess_rate(&params, p.attack)?;
        let asym = excess_rate_asymptote(params.gamma_e_bar(), p.attack)?;
        Ok((cs, rs, d, asym))
    })();
    match analytic {
        Ok((cs, rs, d, asym)) => {
            row.cs_analytic = cs;
            row.rs_analytic = rs;
            row.d_excess = d;
            row.d_asymptote = asym;
        }
        Err(e) => row.error = Some(format!("analytic: {e}")),
    }
    if config.mc_samples > 0 {
        match estimate_rate_pair(
            &params,
            p.attack,
            &McConfig::new(config.mc_samples, config.seed),
        ) {
            Ok((cs, rs)) => {
                row.cs_mc = Some(cs.mean);
                row.cs_mc_stderr = Some(cs.stderr);
                row.rs_mc = Some(rs.mean);
                row.rs_mc_stderr = Some(rs.stderr);
            }
            Err(e) => {
                let msg = format!("monte-carlo: {e}");
                row.error = Some(match row.error.take() {
                    Some(prev) => format!("{prev}; {msg}"),
                    None => msg,
                });
                row.cs_mc = Some(f64::NAN);
                row.cs_mc_stderr = Some(f64::NAN);
                row.rs_mc = Some(f64::NAN);
                row.rs_mc_stderr = Some(f64::NAN);
            }
        }
    }
    row
}

/// Evaluates every point of the sweep. Rows come back in axis order
/// (`m`, `γ̄_E`, x, attack) however the points were scheduled.
pub fn run_sweep(config: &SweepConfig) -> Vec<SweepRow> {
    let points = sweep_points(config);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        points
            .into_par_iter()
            .map(|p| evaluate_point(p, config))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        points
            .into_iter()
            .map(|p| evaluate_point(p, config))
            .collect()
    }
}

/// `%.9g`-style rendering: 9 significant digits, trailing zeros trimmed,
/// scientific notation outside `1e-4 ≤ |v| < 1e9`.
pub fn format_sig9(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim_fraction(&format!("{v:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn cell(v: f64, failed: bool) -> String {
    if failed && v.is_nan() {
        "error".into()
    } else {
        format_sig9(v)
    }
}

fn opt_cell(v: Option<f64>, failed: bool) -> String {
    v.map(|v| cell(v, failed)).unwrap_or_default()
}

/// Writes the rows as CSV with a header line and `\n` endings; returns the
/// number of bytes written.
pub fn write_csv<W: Write>(rows: &[SweepRow], mut sink: W) -> io::Result<usize> {
    let mut out = String::new();
    out.push_str(&CSV_HEADER.join(","));
    out.push('\n');
    for r in rows {
        let failed = r.error.is_some();
        let fields = [
            r.m.to_string(),
            format_sig9(r.gamma0_db),
            format_sig9(r.gamma_b_db),
            format_sig9(r.gamma_e_db),
            r.attack.to_string(),
            cell(r.cs_analytic, failed),
            cell(r.rs_analytic, failed),
            cell(r.d_excess, failed),
            cell(r.d_asymptote, failed),
            opt_cell(r.cs_mc, failed),
            opt_cell(r.cs_mc_stderr, failed),
            opt_cell(r.rs_mc, failed),
            opt_cell(r.rs_mc_stderr, failed),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    sink.write_all(out.as_bytes())?;
    sink.flush()?;
    Ok(out.len())
}
