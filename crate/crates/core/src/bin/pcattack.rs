use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pcattack::experiments::{
    parse_config_over, run_sweep, write_csv, PartialConfig, Preset, SweepConfig,
};
use pcattack::secrecy_analytics::{excess_rate, excess_rate_asymptote, secrecy_rate};
use pcattack::{selftest, AttackKind, ScenarioParams};

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERIC: u8 = 2;
const EXIT_SELFTEST: u8 = 3;

#[derive(Parser)]
#[command(
    name = "pcattack",
    version,
    about = "Secrecy-rate experiments for the product channel attack"
)]
struct Cli {
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a parameter sweep and write CSV
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        /// fig1, fig2 or fig3; config keys override preset values
        #[arg(long)]
        preset: Option<String>,
        /// Output path; `-` for stdout
        #[arg(long)]
        out: PathBuf,
    },
    /// Print analytic metrics for one operating point
    Point {
        #[arg(long)]
        m: u32,
        #[arg(long = "gamma0-db", allow_hyphen_values = true)]
        gamma0_db: f64,
        #[arg(long = "gammaE-db", allow_hyphen_values = true)]
        gamma_e_db: f64,
        #[arg(long, default_value = "rayleigh")]
        attack: String,
    },
    /// Run the invariant checks
    Selftest,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    pool.install(|| match cli.command {
        Command::Sweep {
            config,
            preset,
            out,
        } => sweep(config, preset, out),
        Command::Point {
            m,
            gamma0_db,
            gamma_e_db,
            attack,
        } => point(m, gamma0_db, gamma_e_db, &attack),
        Command::Selftest => run_selftest(),
    })
}

fn load_config(config: Option<PathBuf>, preset: Option<String>) -> Result<SweepConfig, String> {
    let base = match preset {
        Some(p) => p.parse::<Preset>().map_err(|e| e.to_string())?.partial(),
        None => PartialConfig::default(),
    };
    let text = match config {
        Some(path) => std::fs::read_to_string(&path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?,
        None => String::new(),
    };
    parse_config_over(&text, base).map_err(|e| e.to_string())
}

fn sweep(config: Option<PathBuf>, preset: Option<String>, out: PathBuf) -> ExitCode {
    let cfg = match load_config(config, preset) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    eprintln!(
        "sweep: M={:?} gammaE_db={:?} range={:?} attacks={:?} mc_samples={} seed={}",
        cfg.m_list, cfg.gamma_e_db_list, cfg.gamma0_db_range, cfg.attacks, cfg.mc_samples, cfg.seed
    );
    let rows = run_sweep(&cfg);
    let failed: Vec<_> = rows.iter().filter(|r| r.error.is_some()).collect();
    for r in &failed {
        eprintln!(
            "row M={} gamma0_db={} gammaE_db={} attack={}: {}",
            r.m,
            r.gamma0_db,
            r.gamma_e_db,
            r.attack,
            r.error.as_deref().unwrap_or_default()
        );
    }
    let written = if out.as_os_str() == "-" {
        write_csv(&rows, io::stdout().lock())
    } else {
        File::create(&out).and_then(|f| write_csv(&rows, BufWriter::new(f)))
    };
    match written {
        Ok(bytes) => eprintln!("wrote {} rows ({bytes} bytes)", rows.len()),
        Err(e) => {
            eprintln!("error: writing {}: {e}", out.display());
            return ExitCode::from(EXIT_USAGE);
        }
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NUMERIC)
    }
}

fn point(m: u32, gamma0_db: f64, gamma_e_db: f64, attack: &str) -> ExitCode {
    let kind: AttackKind = match attack.parse() {
        Ok(k) => k,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let params = match ScenarioParams::new(m, gamma0_db, gamma_e_db) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let result = (|| -> pcattack::Result<()> {
        println!("m = {m}");
        println!("gamma0_db = {gamma0_db}");
        println!("gammaB_db = {}", params.gamma_b_db());
        println!("gammaE_db = {gamma_e_db}");
        let kinds: Vec<AttackKind> = if kind.is_attack() {
            vec![AttackKind::None, kind]
        } else {
            vec![AttackKind::None]
        };
        for k in kinds {
            let r = secrecy_rate(&params, k)?;
            println!(
                "[{}] c_bar_b = {:.9} loss = {:.9} rate = {:.9} method = {}{}",
                k,
                r.c_bar_b,
                r.loss,
                r.rate,
                r.method.as_str(),
                if r.is_anomalous() {
                    " (negative rate: numerical anomaly)"
                } else {
                    ""
                }
            );
        }
        if kind.is_attack() {
            println!("d_excess = {:.9}", excess_rate(&params, kind)?);
            println!(
                "d_asymptote = {:.9}",
                excess_rate_asymptote(params.gamma_e_bar(), kind)?
            );
        }
        Ok(())
    })();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_NUMERIC)
        }
    }
}

fn run_selftest() -> ExitCode {
    let outcomes = selftest::run_all();
    let mut ok = true;
    for c in &outcomes {
        println!(
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
        ok &= c.passed;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_SELFTEST)
    }
}
