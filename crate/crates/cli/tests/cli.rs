mod common;

use std::fs;

use common::{code, rgl, rgl_env, stdout};
use rgl_cli::manifest::RunManifest;
use serde_json::Value;

fn read_manifest(path: &std::path::Path) -> RunManifest {
    serde_json::from_slice(&fs::read(path).unwrap()).unwrap()
}

#[test]
fn eqsearch_prints_solutions_as_lines() {
    let o = rgl(&["eqsearch", "--a", "-1", "--nmax", "100"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "3 3 2 -1\n5 5 3 -1\n");
}

#[test]
fn lhs6_at_four_prints_zero() {
    let o = rgl(&["analytic", "lhs6", "--m", "4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "0\n");
    assert_eq!(stdout(&rgl(&["analytic", "lhs6", "--m", "3"])), "1/6\n");
}

#[test]
fn disc_prints_both_values_and_verdict() {
    let o = rgl(&["poly", "disc", "--p", "7", "--a", "7"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "closed: 1297500400\nresultant: -1297500400\nequal: true\n");
    let o = rgl(&["poly", "disc", "--p", "7", "--a", "-7"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("closed: singular\n"));
}

#[test]
fn poly_subcommands() {
    let o = rgl(&["poly", "roots", "--p", "7", "--a", "-127"]);
    assert_eq!(stdout(&o), "2\n");
    let o = rgl(&["poly", "shape", "--p", "7", "--a", "-39991"]);
    assert_eq!(stdout(&o), "linear_times_irreducible root=-6 certificate={\"kind\":\"dumas\",\"prime\":7,\"e\":2}\n");
    let o = rgl(&["poly", "newton", "--p", "7", "--a", "-39991", "--shifted"]);
    assert_eq!(stdout(&o), "(0,2)-(1,1)-(6,0)\nreflected: (0,0)-(5,1)-(6,2)\nslopes: -1 -1/5\n");
    let o = rgl(&["poly", "newton", "--p", "7", "--a", "-39991"]);
    assert!(stdout(&o).starts_with("(0,0)-(6,0)\n"));
}

#[test]
fn obstruct_subcommands() {
    let o = rgl(&["obstruct", "cert", "--a", "15", "--p", "7", "--format", "jsonl"]);
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["status"], "obstructed");
    assert_eq!(v["residues"].as_array().unwrap().len() as u64, v["q"].as_u64().unwrap());
    let o = rgl(&["obstruct", "cert", "--a", "-43", "--p", "7", "--format", "jsonl"]);
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["status"], "survivor");
    assert_eq!(v["roots"].as_array().unwrap().len(), 14);
    assert_eq!(stdout(&rgl(&["obstruct", "least-rootless", "--p", "7", "--a", "7"])), "3\n");
    let o = rgl(&["obstruct", "density", "--p", "7", "--a", "7", "--x", "1e4", "--format", "jsonl"]);
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["primes"], 1229);
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        &["bogus"][..],
        &["eqsearch"],
        &["poly", "disc", "--p", "7"],
        &["poly", "disc", "--p", "7", "--a", "x"],
        &["--format", "xml", "eqsearch", "--a", "1"],
        &["--jobs", "0", "eqsearch", "--a", "1"],
        &["analytic", "prop-pom", "--x", "1.5"],
        &["poly", "shape", "--p", "5", "--a", "3"],
    ] {
        assert_eq!(code(&rgl(args)), 64, "{args:?}");
    }
    assert_eq!(code(&rgl(&["--help"])), 0);
}

#[test]
fn failed_checks_exit_1() {
    assert_eq!(code(&rgl(&["analytic", "excluded", "--m", "12"])), 1);
    assert_eq!(code(&rgl(&["analytic", "excluded", "--m", "1001"])), 0);
}

#[test]
fn corrupted_baseline_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("s0_paper.json");
    let text = String::from_utf8(rgl_cli::baseline::EMBEDDED.to_vec()).unwrap();
    fs::write(&bad, text.replace("-547", "-548")).unwrap();
    let o = rgl(&["obstruct", "scan", "--amax", "100", "--baseline", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("checksum"));
    let out = dir.path().join("rep");
    let o = rgl(&["--out", out.to_str().unwrap(), "reproduce-all", "--amax", "100", "--baseline", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    // an intact copy is accepted
    fs::write(&bad, rgl_cli::baseline::EMBEDDED).unwrap();
    let o = rgl(&["obstruct", "scan", "--amax", "100", "--baseline", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
}

#[test]
fn manifest_digests_and_reruns_are_stable() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s0.jsonl");
    let args = ["--jobs", "2", "--out", out.to_str().unwrap(), "obstruct", "scan", "--amax", "5000"];
    assert_eq!(code(&rgl(&args)), 0);
    let first = fs::read(&out).unwrap();
    let m1 = read_manifest(&dir.path().join("s0.jsonl.manifest.json"));
    assert!(m1.stale_outputs(dir.path()).is_empty());
    assert_eq!(m1.outputs.len(), 1);
    assert_eq!(m1.jobs, 2);
    assert_eq!(m1.metadata["discrepancies"], 0);
    assert_eq!(code(&rgl(&args)), 0);
    assert_eq!(fs::read(&out).unwrap(), first);
    let m2 = read_manifest(&dir.path().join("s0.jsonl.manifest.json"));
    assert_eq!(m1.without_timing(), m2.without_timing());
    // a changed output no longer matches its digest
    fs::write(&out, b"{}\n").unwrap();
    assert_eq!(m2.stale_outputs(dir.path()), vec![out.display().to_string()]);
}

#[test]
fn jobs_do_not_change_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let run = |jobs: &str| {
        let out = dir.path().join(format!("s0-{jobs}.jsonl"));
        assert_eq!(code(&rgl(&["--jobs", jobs, "--out", out.to_str().unwrap(), "obstruct", "scan", "--amax", "20000"])), 0);
        fs::read(out).unwrap()
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn manifest_goes_to_stderr_without_out() {
    let o = rgl(&["analytic", "lhs6", "--m", "5"]);
    let m: RunManifest = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(m.outputs[0].path, "-");
    assert_eq!(m.outputs[0].sha256, rgl_cli::output::sha256_hex(&o.stdout));
    assert_eq!(m.exit_code, 0);
}

#[test]
fn sieve_cache_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("sieve.bin");
    let args = ["--seed-cache", cache.to_str().unwrap(), "obstruct", "density", "--p", "7", "--a", "7", "--x", "20000"];
    let a = stdout(&rgl(&args));
    assert!(cache.exists());
    assert_eq!(stdout(&rgl(&args)), a);

    let env_dir = dir.path().join("env");
    let o = rgl_env(&["analytic", "bt", "--x", "1000", "--k", "7"], &[("RGL_CACHE_DIR", &env_dir)]);
    assert_eq!(code(&o), 0);
    assert!(env_dir.join("sieve-1000.bin").exists());
}

#[test]
fn reproduce_all_small_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bundle");
    let o = rgl(&["--jobs", "2", "--out", out.to_str().unwrap(), "reproduce-all", "--amax", "3000"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: Value = serde_json::from_slice(&fs::read(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["status"], "ok");
    assert_eq!(report["disc"]["checked"], 300);
    assert_eq!(report["eqsearch"]["known_found"], true);
    let matched = report["s0"]["listed_matched"].as_array().unwrap();
    assert_eq!(matched.len(), 7);
    let m = read_manifest(&out.join("manifest.json"));
    assert_eq!(m.outputs.len(), 8);
    assert!(m.stale_outputs(dir.path()).is_empty());
}
