use std::path::PathBuf;
use std::process::Command;

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include").join("trustdyn.h")
}

#[test]
fn header_declares_every_export() {
    let text = std::fs::read_to_string(header()).unwrap();
    for sym in [
        "td_last_error_message",
        "td_version",
        "td_params_new",
        "td_params_free",
        "td_expected_payoffs",
        "td_replicator_rhs",
        "td_thresholds",
        "td_classify_regime",
        "td_equilibria_new",
        "td_equilibria_len",
        "td_equilibria_get",
        "td_equilibria_free",
        "td_integrator_default",
        "td_basin_integrator_default",
        "td_trajectory_new",
        "td_trajectory_len",
        "td_trajectory_get",
        "td_trajectory_terminal",
        "td_trajectory_free",
        "td_basin_fraction",
        "typedef struct TdParams TdParams;",
        "TD_STATUS_OK = 0",
    ] {
        assert!(text.contains(sym), "header lacks {sym}");
    }
}

#[test]
fn header_compiles_as_c() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let probe = Command::new(&cc).arg("--version").output();
    if probe.is_err() {
        eprintln!("skipping: no C compiler at {cc}");
        return;
    }
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c"])
        .arg(header())
        .status()
        .unwrap();
    assert!(status.success());
}
