#![cfg(feature = "cli")]

use std::process::{Command, Output};

fn pcattack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcattack"))
        .args(args)
        .output()
        .expect("spawn pcattack")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn point_prints_report() {
    let o = pcattack(&[
        "point",
        "--m",
        "1",
        "--gamma0-db",
        "0",
        "--gammaE-db",
        "0",
        "--attack",
        "rayleigh",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(
        out.contains("[none] c_bar_b = 0.860347382 loss = 0.521287004 rate = 0.339060379"),
        "{out}"
    );
    assert!(out.contains("[rayleigh]"));
    assert!(out.contains("d_excess = "));
    assert!(out.contains("d_asymptote = "));
}

#[test]
fn point_accepts_negative_db() {
    let o = pcattack(&[
        "point",
        "--m",
        "2",
        "--gamma0-db",
        "-10",
        "--gammaE-db",
        "-5",
        "--attack",
        "none",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("d_excess"));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(pcattack(&[]).status.code(), Some(1));
    assert_eq!(pcattack(&["frobnicate"]).status.code(), Some(1));
    let bad_attack = [
        "point",
        "--m",
        "1",
        "--gamma0-db",
        "0",
        "--gammaE-db",
        "0",
        "--attack",
        "bogus",
    ];
    assert_eq!(pcattack(&bad_attack).status.code(), Some(1));
    let zero_m = ["point", "--m", "0", "--gamma0-db", "0", "--gammaE-db", "0"];
    assert_eq!(pcattack(&zero_m).status.code(), Some(1));
    assert_eq!(
        pcattack(&["sweep", "--preset", "fig9", "--out", "-"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn config_errors_exit_1() {
    let dir = std::env::temp_dir().join(format!("pcattack-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("bad.cfg");
    std::fs::write(&cfg, "gamma0_db_range = 30,0,1\n").unwrap();
    let o = pcattack(&["sweep", "--config", cfg.to_str().unwrap(), "--out", "-"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("gamma0_db_range"));
    let missing = dir.join("missing.cfg");
    let o = pcattack(&["sweep", "--config", missing.to_str().unwrap(), "--out", "-"]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn sweep_writes_csv_to_file_and_stdout() {
    let dir = std::env::temp_dir().join(format!("pcattack-sweep-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("one.cfg");
    std::fs::write(
        &cfg,
        "# single point\nm_list = 2\ngammaE_db_list = 5\ngamma0_db_range = 10,10,1\nattacks = uniform\nmc_samples = 0\n",
    )
    .unwrap();
    let out = dir.join("out.csv");
    let o = pcattack(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let file = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = file.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("m,gamma0_db,gammaB_db,gammaE_db,attack,"));
    assert!(
        lines[1].starts_with("2,10,13.0103,5,uniform,"),
        "{}",
        lines[1]
    );
    assert!(lines[1].ends_with(",,,,"));

    let o = pcattack(&["sweep", "--config", cfg.to_str().unwrap(), "--out", "-"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), file);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn selftest_passes() {
    let o = pcattack(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert_eq!(
        out.lines().filter(|l| l.starts_with("PASS ")).count(),
        9,
        "{out}"
    );
}
