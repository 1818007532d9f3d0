use std::path::Path;
use std::process::{Command as Process, Output};

use sha2::{Digest, Sha256};
use treeanneal_cli::output::Cell;
use treeanneal_cli::{execute, run_command, CliError, Command, ExperimentConfig, RunManifest};

fn treeanneal(args: &[&str]) -> Output {
    Process::new(env!("CARGO_BIN_EXE_treeanneal")).args(args).output().expect("spawn treeanneal")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.toml");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn defaults_validate() {
    ExperimentConfig::default().validate().unwrap();
    assert_eq!(ExperimentConfig::from_toml("").unwrap(), ExperimentConfig::default());
}

#[test]
fn toml_round_trip() {
    let mut cfg = ExperimentConfig::default();
    cfg.seed = 99;
    cfg.model.tau = 7.5;
    cfg.sweep.epsilons = vec![0.0, 0.03];
    cfg.noise.readout = vec![[0.97, 0.93]; 7];
    let back = ExperimentConfig::from_toml(&cfg.to_toml()).unwrap();
    assert_eq!(back, cfg);
}

#[test]
fn invalid_values_name_the_field() {
    let cases = [
        ("[model]\ntau = -1.0\n", "model.tau"),
        ("[lattice]\ngenerations = 9\n", "lattice.generations"),
        ("[digitization]\nblocks = 0\n", "digitization.blocks"),
        ("[measurement]\nreference_spin = 7\n", "measurement.reference_spin"),
        ("[noise]\nt1 = 10.0\nt2 = 30.0\n", "noise.t2"),
        ("[sweep]\nepsilons = []\n", "sweep.epsilons"),
        ("[model]\ninteraction = \"slowly_decaying\"\n", "model.interaction"),
    ];
    for (text, field) in cases {
        match ExperimentConfig::from_toml(text) {
            Err(CliError::Config(msg)) => assert!(msg.contains(field), "{msg:?} should name {field}"),
            other => panic!("{text:?} gave {other:?}"),
        }
    }
}

#[test]
fn unknown_keys_rejected() {
    for text in ["sed = 3\n", "[model]\ntua = 5.0\n", "[nosie]\nepsilon = 0.1\n"] {
        assert!(matches!(ExperimentConfig::from_toml(text), Err(CliError::Config(_))), "{text:?}");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();

    let bad = write_config(dir.path(), "[model]\ntau = 0.0\n");
    let r = treeanneal(&["parity", "--config", &bad, "--out", out]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("model.tau"));

    assert_eq!(treeanneal(&["parity", "--threads", "0", "--out", out]).status.code(), Some(2));
    assert_eq!(treeanneal(&["no-such-command"]).status.code(), Some(2));

    let big = write_config(dir.path(), "[lattice]\ngenerations = 4\n");
    let r = treeanneal(&["renyi", "--config", &big, "--out", out]);
    assert_eq!(r.status.code(), Some(3), "{}", String::from_utf8_lossy(&r.stderr));

    assert_eq!(treeanneal(&["parity", "--out", out]).status.code(), Some(0));
}

#[test]
fn manifest_lists_every_file() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = execute(Command::Correlations, &ExperimentConfig::default(), dir.path()).unwrap();
    let mut listed: Vec<&str> = manifest.outputs.iter().map(|o| o.file.as_str()).collect();
    listed.sort();
    let mut on_disk: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|f| f != "manifest.json")
        .collect();
    on_disk.sort();
    assert_eq!(listed, on_disk);
    for o in &manifest.outputs {
        let bytes = std::fs::read(dir.path().join(&o.file)).unwrap();
        assert_eq!(bytes.len(), o.bytes);
        assert_eq!(hex::encode(Sha256::digest(&bytes)), o.sha256);
    }
    let written: RunManifest = serde_json::from_slice(&std::fs::read(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(written.run.command, "correlations");
    assert_eq!(written.outputs.len(), manifest.outputs.len());
}

#[test]
fn seed_changes_sampled_outputs_only() {
    let a = ExperimentConfig::default();
    let b = ExperimentConfig { seed: 1, ..a.clone() };
    let ra = run_command(Command::Renyi, &a).unwrap();
    let rb = run_command(Command::Renyi, &b).unwrap();
    let (ta, tb) = (ra.get("renyi_masks").unwrap(), rb.get("renyi_masks").unwrap());
    let (exact, mean) = (ta.column("exact_bits").unwrap(), ta.column("mean_bits").unwrap());
    assert!(ta.rows.iter().zip(&tb.rows).all(|(x, y)| x[exact] == y[exact]));
    assert!(ta.rows.iter().zip(&tb.rows).any(|(x, y)| x[mean] != y[mean]));
}

fn num(c: &Cell) -> f64 {
    match c {
        Cell::Num(x) => *x,
        Cell::Int(i) => *i as f64,
        other => panic!("not a number: {other:?}"),
    }
}

#[test]
fn first_block_keeps_zero_xy_energy() {
    // The field exponential only rephases a Néel state and the coupling
    // exponential then conserves the coupling energy.
    let out = run_command(Command::EnergySplit, &ExperimentConfig::default()).unwrap();
    let t = out.get("energy_split").unwrap();
    let (cs, cb, ce, cmz) = (t.column("series").unwrap(), t.column("block").unwrap(), t.column("e_eq4").unwrap(), t.column("mz").unwrap());
    for row in t.rows.iter().filter(|r| r[cs] == Cell::Text("digitized".into())) {
        let block = num(&row[cb]) as usize;
        if block <= 1 {
            assert!(num(&row[ce]).abs() < 1e-12, "block {block}: {:?}", row[ce]);
        }
        assert!((num(&row[cmz]).abs() - 1.5).abs() < 1e-9);
    }
}

#[test]
fn text_and_json_tables_agree() {
    let dir = tempfile::tempdir().unwrap();
    execute(Command::Parity, &ExperimentConfig::default(), dir.path()).unwrap();
    let mut csv = csv::Reader::from_path(dir.path().join("parity.csv")).unwrap();
    let header: Vec<String> = csv.headers().unwrap().iter().map(String::from).collect();
    let rows: Vec<csv::StringRecord> = csv.records().map(|r| r.unwrap()).collect();
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("parity.json")).unwrap()).unwrap();
    let items = json["rows"].as_array().unwrap();
    assert_eq!(items.len(), rows.len());
    let parity = header.iter().position(|h| h == "parity").unwrap();
    for (rec, item) in rows.iter().zip(items) {
        let from_csv: f64 = rec[parity].parse().unwrap();
        let from_json = item[parity].as_f64().unwrap();
        assert_eq!(from_csv, from_json);
    }
}

#[test]
fn shipped_config_is_the_default() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.toml");
    assert_eq!(ExperimentConfig::load(&path).unwrap(), ExperimentConfig::default());
}
