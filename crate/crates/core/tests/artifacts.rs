//! Artifact-level contracts of the batch front-end: byte reproducibility and
//! embedded provenance.

use std::fs;

use liouville_core::experiments::{run, RunConfig};

fn config(out: &str) -> RunConfig {
    RunConfig::from_json(&format!(
        r#"{{
          "experiment": "identities",
          "domain": {{"kind": "unit_disk"}},
          "potential": {{"a0": 1.0}},
          "N": 1,
          "alphas": [1, 2],
          "output_dir": "{out}"
        }}"#
    ))
    .unwrap()
}

#[test]
fn rerun_byte_reproduces_artifacts() {
    let dir = tempdir("liouville_repro");
    let cfg = config(&dir);
    let out1 = run(&cfg).unwrap();
    assert!(out1.ok);
    let snapshot: Vec<Vec<u8>> = out1.files.iter().map(|f| fs::read(f).unwrap()).collect();
    let out2 = run(&cfg).unwrap();
    assert_eq!(out1.files, out2.files);
    for (f, before) in out2.files.iter().zip(&snapshot) {
        let after = fs::read(f).unwrap();
        assert_eq!(
            &after,
            before,
            "artifact differs between identical runs: {}",
            f.display()
        );
    }
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn artifacts_embed_hash_and_version() {
    let dir = tempdir("liouville_stamp");
    let cfg = config(&dir);
    let out = run(&cfg).unwrap();
    let hash = cfg.hash();
    for f in &out.files {
        let text = fs::read_to_string(f).unwrap();
        assert!(
            text.contains(&hash),
            "{} lacks the config hash",
            f.display()
        );
        assert!(
            text.contains(env!("CARGO_PKG_VERSION")),
            "{} lacks the version string",
            f.display()
        );
    }
    fs::remove_dir_all(&dir).ok();
}

fn tempdir(prefix: &str) -> String {
    let d = std::env::temp_dir().join(format!("{prefix}_{}", std::process::id()));
    fs::create_dir_all(&d).unwrap();
    d.to_string_lossy().into_owned()
}
