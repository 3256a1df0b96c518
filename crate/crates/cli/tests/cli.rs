//! End-to-end CLI behavior: command output, the exit-code contract, config
//! precedence, and output formats.

use std::path::Path;
use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_critpair"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn sumset_reports_sizes_bounds_and_criticality() {
    let (code, stdout, _) = run(&["sumset", "{0,1}", "{0,1}"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("A+^B       = {1}  (size 1)"), "{stdout}");
    assert!(stdout.contains("critical   = yes"), "{stdout}");

    let (code, stdout, _) = run(&["sumset", "{0,3,5,8}", "{0,3,5,8}", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["restricted_size"], 5);
    assert_eq!(v["critical"], true);

    let (code, stdout, _) = run(&["sumset", "{5,6}", "{5,6}", "--mod", "7"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("mod 7: {3,4,5}"), "{stdout}");
}

#[test]
fn sumset_rejects_bad_input_with_exit_2() {
    let (code, _, stderr) = run(&["sumset", "{0,1}", "{0,1,2}", "--mod", "4"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("not prime"), "{stderr}");

    let (code, _, stderr) = run(&["sumset", "{1,1}", "{0,2}"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("duplicate"), "{stderr}");

    let (code, _, _) = run(&["sumset", "{0,1}"]);
    assert_eq!(code, 2); // clap usage error: missing operand
}

#[test]
fn classify_prints_cases_and_witnesses() {
    let (code, stdout, _) = run(&["classify", "{0,2,4,6,8}", "{0,2,4,6,8}"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("case       = StandardPair"), "{stdout}");
    assert!(stdout.contains("progression start=0 diff=2 len=5"), "{stdout}");

    let (code, stdout, _) = run(&["classify", "{0,1,3,4}", "{0,1,3,4}", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["case_tag"], "BiPair");
    assert_eq!(v["witness"]["a"], 0);
    assert_eq!(v["witness"]["c"], 3);
    assert_eq!(v["witness"]["d"], 1);

    let (code, stdout, _) = run(&["classify", "{0,1}", "{0,2}", "--check"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("critical   = no"), "{stdout}");
    assert!(stdout.contains("agrees"), "{stdout}");
}

#[test]
fn classify_rejects_out_of_hypothesis_input_with_exit_2() {
    // residue out of range
    let (code, _, stderr) = run(&["classify", "{0,1}", "{0,3}", "--mod", "3"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("out of range"), "{stderr}");

    // p < |A|+|B|-2: the characterization does not apply
    let (code, _, stderr) = run(&["classify", "{0,1,2}", "{0,1,2}", "--mod", "3"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("hypothesis"), "{stderr}");
}

#[test]
fn gaps_profiles_single_and_all_generators() {
    let (code, stdout, _) = run(&["gaps", "mod 11: {0,1,2,3,4}", "--gen", "1", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v[0]["longest_gap"], 6);
    assert_eq!(v[0]["exponents"], serde_json::json!([0, 1, 2, 3, 4]));
    assert_eq!(v[0]["blocks"], serde_json::json!([[0, 4]]));

    // all four generators report gap 4 for the singleton {0}
    let (code, stdout, _) = run(&["gaps", "mod 5: {0}", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let profiles = v.as_array().unwrap();
    assert_eq!(profiles.len(), 4);
    for (i, prof) in profiles.iter().enumerate() {
        assert_eq!(prof["d"], i as u64 + 1);
        assert_eq!(prof["longest_gap"], 4);
    }
    let (code, stdout, _) = run(&["gaps", "mod 5: {0}"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("mode       = linear"), "{stdout}");

    let (code, stdout, _) = run(&["gaps", "mod 11: {0,2,4,6,8}", "--gen", "2", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v[0]["longest_gap"], 6);
}

#[test]
fn gaps_rejects_bad_generators_and_moduli() {
    let (code, _, _) = run(&["gaps", "mod 11: {0,1}", "--gen", "0"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["gaps", "mod 9: {0,1}"]);
    assert_eq!(code, 2);
    let (code, _, stderr) = run(&["gaps", "{0,1}"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("mod-p set literal"), "{stderr}");
}

#[test]
fn verify_clean_run_exits_0() {
    let (code, stdout, _) = run(&["verify", "--theorem", "T1", "--window", "6"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("result: PASS (0 counterexamples)"), "{stdout}");
}

#[test]
fn verify_usage_errors_exit_2() {
    // budget gate
    let (code, _, stderr) = run(&["verify", "--theorem", "T4", "--mod", "19"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("exceeds the budget"), "{stderr}");

    // selector/context mismatch
    let (code, _, _) = run(&["verify", "--theorem", "LEMMAS", "--mod", "7"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["verify", "--theorem", "T5", "--window", "8"]);
    assert_eq!(code, 2);

    // unknown selector
    let (code, _, _) = run(&["verify", "--theorem", "T9", "--window", "8"]);
    assert_eq!(code, 2);

    // both universes at once
    let (code, _, _) = run(&["verify", "--theorem", "T1", "--window", "8", "--mod", "7"]);
    assert_eq!(code, 2);
}

#[test]
fn verify_search_mode_always_exits_0() {
    let (code, stdout, _) = run(&["verify", "--theorem", "KAROLYI", "--mod", "5", "--search", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["spec"]["mode"], "search");
    assert_eq!(v["boundary_band"]["checked"], 165);
}

#[test]
fn verify_exits_1_when_a_sweep_reports_counterexamples() {
    // Resume from a checkpoint whose tally records a disagreement: the
    // assembled report must carry it through to exit code 1.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seeded.checkpoint");
    let echo = critpair_core::verify::SpecEcho {
        context: critpair_core::verify::SweepContext::ModP { p: 5 },
        theorem: critpair_core::verify::Theorem::Karolyi,
        min_size: 2,
        max_size: 5,
        normalize: false,
        gap_mode: critpair_core::verify::GapModeChoice::Both,
        counterexample_cap: 100,
        budget: critpair_core::verify::DEFAULT_BUDGET,
        mode: critpair_core::verify::RunMode::Assert,
    };
    let checkpoint = serde_json::json!({
        "version": 1,
        "spec_sha256": echo.sha256(),
        "chunk_pairs": 32768,
        "total_pairs": 351,
        "done_chunks": [0],
        "tally": {
            "enumerated": 351,
            "after_normalization": 351,
            "checked": 320,
            "agreements": 319,
            "ce_total": 1,
            "ces": [{
                "index": 5,
                "A": "mod 5: {0,1}",
                "B": "mod 5: {0,2}",
                "oracle": "critical",
                "predicted": "not critical",
                "sumset_size": 1
            }],
            "band": {"checked": 165, "agreements": 164, "disagreements": 1},
            "gap": {
                "standard_checked": 0,
                "min_linear_gap": null,
                "min_cyclic_gap": null,
                "nonstandard_seen": 0,
                "nonstandard_min_best_gap": null
            }
        },
        "elapsed_ms": 0
    });
    std::fs::write(&path, serde_json::to_string(&checkpoint).unwrap()).unwrap();

    let (code, stdout, _) = run(&[
        "verify", "--theorem", "KAROLYI", "--mod", "5",
        "--resume", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 1, "{stdout}");
    assert!(stdout.contains("result: FAIL (1 counterexamples)"), "{stdout}");
    assert!(stdout.contains("A=mod 5: {0,1}"), "{stdout}");

    // the same seeded run in search mode reports but exits 0
    let echo_search = critpair_core::verify::SpecEcho {
        mode: critpair_core::verify::RunMode::Search,
        ..echo
    };
    let checkpoint = {
        let mut v = checkpoint;
        v["spec_sha256"] = serde_json::json!(echo_search.sha256());
        v
    };
    std::fs::write(&path, serde_json::to_string(&checkpoint).unwrap()).unwrap();
    let (code, _, _) = run(&[
        "verify", "--theorem", "KAROLYI", "--mod", "5", "--search",
        "--resume", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
}

#[test]
fn verify_resume_mismatch_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cp.checkpoint");
    let (code, _, _) = run(&[
        "verify", "--theorem", "KAROLYI", "--mod", "5",
        "--checkpoint", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    // altered spec (different prime) against the recorded hash
    let (code, _, stderr) = run(&[
        "verify", "--theorem", "KAROLYI", "--mod", "7",
        "--resume", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("hash mismatch"), "{stderr}");
    // missing file
    let (code, _, _) = run(&[
        "verify", "--theorem", "KAROLYI", "--mod", "5",
        "--resume", dir.path().join("missing").to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
}

#[test]
fn verify_json_round_trips_stably() {
    let (code, stdout, _) = run(&["verify", "--theorem", "T2", "--window", "7", "--json"]);
    assert_eq!(code, 0);
    let v1: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let s1 = serde_json::to_string(&v1).unwrap();
    let v2: serde_json::Value = serde_json::from_str(&s1).unwrap();
    assert_eq!(v1, v2);
}

#[test]
fn config_file_values_are_used_and_flags_override_them() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("critpair.conf");
    std::fs::write(&cfg, "window = 6\nformat = json\ncounterexample_cap = 9\n").unwrap();

    // config supplies window, format and cap
    let (code, stdout, _) = run(&["verify", "--theorem", "T1", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["spec"]["context"]["n"], 6);
    assert_eq!(v["spec"]["counterexample_cap"], 9);

    // flags win over the file
    let (code, stdout, _) = run(&[
        "verify", "--theorem", "T1", "--window", "7", "--cap", "11",
        "--config", cfg.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["spec"]["context"]["n"], 7);
    assert_eq!(v["spec"]["counterexample_cap"], 11);

    // unknown keys are rejected
    std::fs::write(&cfg, "windoww = 6\n").unwrap();
    let (code, _, stderr) = run(&["verify", "--theorem", "T1", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("unknown key"), "{stderr}");
}

#[test]
fn config_primes_drive_modular_sweeps_without_an_explicit_modulus() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("critpair.conf");
    std::fs::write(&cfg, "primes = 5, 7\n").unwrap();
    let (code, stdout, _) = run(&[
        "verify", "--theorem", "KAROLYI", "--json", "--config", cfg.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert_eq!(reports[0]["spec"]["context"]["p"], 5);
    assert_eq!(reports[1]["spec"]["context"]["p"], 7);
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let (code, stdout, _) = run(&[
        "verify", "--theorem", "T1", "--window", "5", "--json",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["counts"]["counterexamples"], 0);
}

#[test]
fn csv_format_flattens_counterexamples_with_a_header() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("critpair.conf");
    std::fs::write(&cfg, "format = csv\n").unwrap();
    let (code, stdout, _) = run(&[
        "verify", "--theorem", "T1", "--window", "5", "--config", cfg.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "A,B,oracle,predicted,sumset_size");

    // set literals contain commas, so CSV fields must be quoted
    let (code, stdout, _) = run(&["sumset", "{0,1}", "{0,1}", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("\"{0,1}\""), "{stdout}");
}

#[test]
fn checkpoint_dir_config_places_bare_names() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("critpair.conf");
    std::fs::write(
        &cfg,
        format!("checkpoint_dir = {}\n", dir.path().display()),
    )
    .unwrap();
    let (code, _, _) = run(&[
        "verify", "--theorem", "KAROLYI", "--mod", "5",
        "--checkpoint", "bare.checkpoint", "--config", cfg.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(dir.path().join("bare.checkpoint").exists());
    assert!(!Path::new("bare.checkpoint").exists());
}
