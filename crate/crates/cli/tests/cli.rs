use std::fs;
use std::path::Path;
use std::process::Command;

use qkdv::hierarchy::ENGINE_VERSION;
use qkdv_cli::cache::{Cache, Manifest, Source, MANIFEST};
use serde_json::Value;

fn manifest(dir: &Path) -> Manifest {
    serde_json::from_str(&fs::read_to_string(dir.join(MANIFEST)).unwrap()).unwrap()
}

fn qkdv(args: &[&str], cwd: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qkdv")).args(args).current_dir(cwd).env_remove("QKDV_CACHE").output().unwrap()
}

#[test]
fn cache_stores_and_reuses_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let cache = Cache::new(tmp.path(), ENGINE_VERSION);
    let (h, src) = cache.hierarchy(1, 1).unwrap();
    assert_eq!(src, Source::Built);
    let m = manifest(tmp.path());
    assert_eq!(m.entries.len(), 1);
    let e = &m.entries[0];
    assert_eq!((e.k_max, e.j_max, e.engine_version.as_str()), (1, 1, ENGINE_VERSION));
    assert_eq!(e.key, Cache::key(ENGINE_VERSION, 1, 1));
    assert!(tmp.path().join(&e.file).exists());

    let (h2, src) = cache.hierarchy(1, 1).unwrap();
    assert_eq!(src, Source::Hit);
    assert_eq!(h.tables(), h2.tables());
    // a narrower request is served by the wider entry
    assert_eq!(cache.hierarchy(0, 1).unwrap().1, Source::Hit);
    assert_eq!(manifest(tmp.path()).entries.len(), 1);
}

#[test]
fn new_engine_version_rebuilds() {
    let tmp = tempfile::tempdir().unwrap();
    Cache::new(tmp.path(), ENGINE_VERSION).hierarchy(1, 1).unwrap();
    let (_, src) = Cache::new(tmp.path(), "0.0.0-other").hierarchy(1, 1).unwrap();
    assert_eq!(src, Source::Built);
    let m = manifest(tmp.path());
    assert_eq!(m.entries.len(), 2);
    assert_ne!(m.entries[0].file, m.entries[1].file);
}

#[test]
fn corrupted_entries_are_rebuilt() {
    let tmp = tempfile::tempdir().unwrap();
    let cache = Cache::new(tmp.path(), ENGINE_VERSION);
    cache.hierarchy(1, 1).unwrap();
    let file = tmp.path().join(&manifest(tmp.path()).entries[0].file);
    fs::write(&file, b"[[{\"truncated\":").unwrap();
    let (_, src) = cache.hierarchy(1, 1).unwrap();
    assert_eq!(src, Source::Built);
    assert_eq!(cache.hierarchy(1, 1).unwrap().1, Source::Hit);

    fs::write(tmp.path().join(MANIFEST), b"not json").unwrap();
    assert_eq!(cache.hierarchy(1, 1).unwrap().1, Source::Built);
}

#[test]
fn spectrum_degree_two() {
    let tmp = tempfile::tempdir().unwrap();
    let args = ["spectrum", "--kmax", "2", "--jmax", "1", "--nmax", "2", "--kset", "1", "--cache", "c", "--out", "o"];
    let out = qkdv(&args, tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(tmp.path().join("o/eigen-n2.json")).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let e = v["entries"].as_array().unwrap().iter().find(|e| e["lambda"] == "2").unwrap();
    assert_eq!(e["E"]["1,1"], "1201/2880");
    let terms = e["r"]["1"]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!((terms[0]["key"].as_str(), terms[0]["coeff"].as_str()), (Some("1+1"), Some("-1/8")));

    // reruns are served from the cache and reproduce the output byte for byte
    let again = qkdv(&args, tmp.path());
    assert!(again.status.success());
    assert_eq!(fs::read_to_string(tmp.path().join("o/eigen-n2.json")).unwrap(), text);
}

#[test]
fn verify_exit_codes_and_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let base = ["--kmax", "3", "--jmax", "1", "--nmax", "4", "--kset", "1,2", "--cache", "c", "--out", "o"];
    let run = |extra: &[&str]| qkdv(&[extra, &base[..]].concat(), tmp.path());
    let out = run(&["verify", "thm1"]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.lines().any(|l| l == "PASS thm1"), "{stdout}");
    let report: Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("o/verify-thm1.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);

    assert!(run(&["verify", "appendix", "--format", "csv"]).status.success());
    let csv = fs::read_to_string(tmp.path().join("o/appendix-fits.csv")).unwrap();
    assert!(csv.starts_with("nu,D,"));

    // inconsistent configuration
    assert_eq!(run(&["verify", "thm1", "--mmax", "3"]).status.code(), Some(2));
}

#[test]
fn config_file_is_read() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("run.toml"), "kMax = 3\njMax = 2\nkSet = [1, 2]\noutDir = \"res\"\ncacheDir = \"c\"\n").unwrap();
    let out = qkdv(&["hodge", "--config", "run.toml", "--gmax", "3"], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows: Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("res/hodge.json")).unwrap()).unwrap();
    assert_eq!(rows[0]["value"], "1/2880");
}
