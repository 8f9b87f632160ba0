macro_rules! example {
    ($module:ident, $file:literal) => {
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }
    };
}

example!(state_profiles, "state_profiles.rs");
example!(channel_json, "channel_json.rs");
example!(nonunital_families, "nonunital_families.rs");
example!(noise_catalog, "noise_catalog.rs");
example!(oracle_crosscheck, "oracle_crosscheck.rs");
example!(dephasing_sweep, "dephasing_sweep.rs");
example!(thresholds, "thresholds.rs");
example!(search_uqt, "search_uqt.rs");
example!(analyze_channel, "analyze_channel.rs");

#[test]
fn state_profiles_runs() {
    let lines = state_profiles::run_example().expect("state profiles example should run");
    assert_eq!(lines.len(), 5);
}

#[test]
fn channel_json_runs() {
    let text = channel_json::run_example().expect("channel json example should run");
    assert!(text.contains("\"kraus\""));
}

#[test]
fn nonunital_families_stay_uqt() {
    for (rank, f, delta) in nonunital_families::run_example().expect("non-unital example should run") {
        assert!(rank >= 3 && f > 2.0 / 3.0 && delta < 1e-12);
    }
}

#[test]
fn noise_catalog_covers_every_family() {
    let verdicts = noise_catalog::run_example().expect("catalog example should run");
    assert_eq!(verdicts.len(), uqt::families::CATALOG.len());
    assert!(verdicts["depolarizing_nm"] && !verdicts["dephasing"]);
}

#[test]
fn oracle_crosscheck_agrees() {
    assert!(oracle_crosscheck::run_example().expect("oracle example should run") < 1e-9);
}

#[test]
fn dephasing_sweep_csv() {
    let csv = dephasing_sweep::run_example().expect("sweep example should run");
    assert_eq!(csv.lines().count(), 22);
}

#[test]
fn thresholds_run() {
    let r = thresholds::run_example().expect("threshold example should run");
    assert!((r[0].critical_value - 0.5).abs() < 1e-8);
    assert!((r[1].critical_value - 2.0 * (2f64.sqrt() - 1.0)).abs() < 1e-8);
}

#[test]
fn search_uqt_runs() {
    let r = search_uqt::run_example().expect("search example should run");
    assert!(r[0].hit_count > 0);
}

#[test]
fn analyze_channel_runs() {
    let r = analyze_channel::run_example().expect("analyze example should run");
    assert!(r.profile.uqt && !r.oracle_disagrees());
}
