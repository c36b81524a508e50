use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dmm_core::engine::{NetworkState, WatchKey};
use dmm_core::experiments::{build_gru, build_oscillation, build_wave, wave_columns, GruParams};
use dmm_core::neurons::builtin_registry;
use dmm_core::spec_file::SpecFile;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tempfile::TempDir;

fn dmm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dmm"))
        .args(args)
        .output()
        .expect("run dmm")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn emit_oscillation(dir: &TempDir) -> String {
    let text = SpecFile::from_spec(&build_oscillation(), Some(4)).to_json_pretty();
    write(dir, "osc.json", &text)
}

fn read_trace(path: &Path) -> Vec<Value> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn validate_accepts_emitted_spec() {
    let dir = TempDir::new().unwrap();
    let path = emit_oscillation(&dir);
    let o = dmm(&["validate", &path]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn validate_reports_missing_self() {
    let dir = TempDir::new().unwrap();
    let mut v: Value = serde_json::from_str(&fs::read_to_string(emit_oscillation(&dir)).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("self");
    let path = write(&dir, "noself.json", &v.to_string());
    let o = dmm(&["validate", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("missing Self"), "{}", stderr(&o));
}

#[test]
fn validate_reports_bad_row_key() {
    let dir = TempDir::new().unwrap();
    let text = r#"{
      "mode": {"kind": "countable"},
      "neurons": [{"name": "m", "type": "self2"}],
      "self": {"neuron": "m"},
      "initial_matrix": [["self2@i1@m", "self2@o1%m", 1]]
    }"#;
    let path = write(&dir, "bad.json", text);
    let o = dmm(&["validate", &path]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("bad row key") && err.contains("cannot parse index"), "{err}");
}

#[test]
fn validate_reports_unreadable_json() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "junk.json", "{ not json");
    assert_eq!(dmm(&["validate", &path]).status.code(), Some(1));
    assert_eq!(dmm(&["validate", "/nonexistent/spec.json"]).status.code(), Some(1));
}

#[test]
fn run_writes_oscillation_trace() {
    let dir = TempDir::new().unwrap();
    let path = emit_oscillation(&dir);
    let trace = dir.path().join("t.jsonl");
    let o = dmm(&["run", &path, "--steps", "4", "--watch", "Y0[1][1]", "--trace", trace.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let records = read_trace(&trace);
    let values: Vec<f64> = records.iter().map(|r| r["watched"]["Y0[1][1]"].as_f64().unwrap()).collect();
    assert_eq!(values, vec![-1.0, 1.0, -1.0, 1.0]);
    let ts: Vec<u64> = records.iter().map(|r| r["t"].as_u64().unwrap()).collect();
    assert_eq!(ts, vec![1, 2, 3, 4]);
}

#[test]
fn run_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let path = emit_oscillation(&dir);
    let a = dmm(&["run", &path, "--steps", "9", "--watch", "Y0[1][1],out:1"]);
    let b = dmm(&["run", &path, "--steps", "9", "--watch", "Y0[1][1],out:1"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn run_zero_steps_writes_empty_trace() {
    let dir = TempDir::new().unwrap();
    let path = emit_oscillation(&dir);
    let trace = dir.path().join("empty.jsonl");
    let o = dmm(&["run", &path, "--steps", "0", "--watch", "Y0[1][1]", "--trace", trace.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&trace).unwrap(), "");
}

#[test]
fn run_wave_support_has_period_five() {
    let dir = TempDir::new().unwrap();
    let spec = build_wave(&wave_columns(5)).unwrap();
    let path = write(&dir, "wave.json", &SpecFile::from_spec(&spec, None).to_json_pretty());
    let watch: Vec<String> = (0..7).map(|j| format!("Y0[1][{j}]")).collect();
    let o = dmm(&["run", &path, "--steps", "10", "--watch", &watch.join(",")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let positions: Vec<usize> = stdout(&o)
        .lines()
        .map(|l| {
            let r: Value = serde_json::from_str(l).unwrap();
            let hits: Vec<usize> = (0..7)
                .filter(|j| r["watched"][format!("Y0[1][{j}]")].as_f64().unwrap() != 0.0)
                .collect();
            assert_eq!(hits.len(), 1);
            hits[0]
        })
        .collect();
    assert_eq!(positions, vec![3, 4, 5, 6, 2, 3, 4, 5, 6, 2]);
}

#[test]
fn run_rejects_bad_watch_and_missing_steps() {
    let dir = TempDir::new().unwrap();
    let path = emit_oscillation(&dir);
    assert_eq!(dmm(&["run", &path, "--watch", "Y0[9][9]"]).status.code(), Some(1));
    assert_eq!(dmm(&["run", &path, "--watch", "nonsense"]).status.code(), Some(1));
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("steps");
    let path = write(&dir, "nosteps.json", &v.to_string());
    assert_eq!(dmm(&["run", &path]).status.code(), Some(1));
}

#[test]
fn overflow_under_halt_exits_two() {
    let dir = TempDir::new().unwrap();
    let text = r#"{
      "mode": {"kind": "countable"},
      "neurons": [
        {"name": "m", "type": "self2"},
        {"name": "k", "type": "const", "params": {"matrix": {"scalar": 1}}}
      ],
      "self": {"neuron": "m", "overflow_policy": "halt"},
      "initial_matrix": [["self2@i1\\m", "self2@o1%m", 1], ["self2@i2\\m", "const@o1%k", 1]]
    }"#;
    let path = write(&dir, "halt.json", text);
    assert_eq!(dmm(&["validate", &path]).status.code(), Some(0));
    let o = dmm(&["run", &path, "--steps", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("finite support"), "{}", stderr(&o));

    let reset = text.replace("\"halt\"", "\"reset_to_zero\"");
    let path = write(&dir, "reset.json", &reset);
    let o = dmm(&["run", &path, "--steps", "2", "--watch", "cell:self2@i1\\m,self2@o1%m"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for line in stdout(&o).lines() {
        let r: Value = serde_json::from_str(line).unwrap();
        assert_eq!(r["watched"]["cell:self2@i1\\m,self2@o1%m"].as_f64(), Some(0.0));
    }
}

#[test]
fn optimized_self_mode_gives_same_trace() {
    let dir = TempDir::new().unwrap();
    let path = emit_oscillation(&dir);
    let a = dmm(&["run", &path, "--steps", "12", "--watch", "Y0[1][1],Y0[0][0]"]);
    let b = dmm(&["run", &path, "--steps", "12", "--watch", "Y0[1][1],Y0[0][0]", "--self-mode", "optimized"]);
    assert_eq!(b.status.code(), Some(0), "{}", stderr(&b));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn parse_index_prints_parts() {
    let o = dmm(&["parse-index", "sum2@i1\\acc"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "type=sum2 kind=input k=1 name=acc");
    let o = dmm(&["parse-index", "self@main"]);
    assert_eq!(stdout(&o).trim(), "type=self kind=neuron name=main");
    let o = dmm(&["parse-index", "bad%%name"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!stderr(&o).is_empty());
}

#[test]
fn demos_run() {
    let o = dmm(&["demo", "oscillation", "--steps", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[-1.0, 1.0, -1.0, 1.0, -1.0, 1.0]"), "{}", stdout(&o));

    let o = dmm(&["demo", "wave", "--n", "5", "--steps", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("t=0 row 1 support: 2:1") && out.contains("t=5 row 1 support: 2:1"), "{out}");

    let o = dmm(&["demo", "gru", "--seed", "42", "--steps", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o).lines().find(|l| l.starts_with("max |")).unwrap().to_string();
    let err: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(err <= 1e-9, "{line}");

    let o = dmm(&["demo", "dfa", "--seed", "7", "--steps", "30"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("matches direct simulation: true"));

    assert_eq!(dmm(&["demo", "lstm"]).status.code(), Some(1));
    assert_eq!(dmm(&["demo", "wave", "--columns", "0,2"]).status.code(), Some(1));
}

fn in_process_trace(spec_text: &str, steps: u64, watch: &str) -> String {
    let reg = builtin_registry();
    let spec = SpecFile::from_json(spec_text).unwrap().to_spec(&reg).unwrap();
    let mut net = NetworkState::build(&spec, &reg).unwrap();
    let trace = net.run(steps, &WatchKey::parse_list(watch).unwrap()).unwrap();
    trace.iter().map(|r| serde_json::to_string(r).unwrap() + "\n").collect()
}

#[test]
fn emitted_specs_reproduce_demo_traces() {
    let dir = TempDir::new().unwrap();
    let cases: [(&[&str], &str, u64); 4] = [
        (&["oscillation", "--steps", "8"], "Y0[1][1],Y0[0][0],out:1", 8),
        (&["wave", "--n", "4", "--steps", "8"], "Y0[1][2],Y0[1][3],Y0[1][4],Y0[1][5]", 8),
        (&["dfa", "--seed", "3", "--steps", "20"], "Y0[1][1],Y0[1][2],Y0[1][3],Y0[1][4]", 23),
        (&["gru", "--seed", "9", "--steps", "5"], "out:16,out:3", 26),
    ];
    for (args, watch, steps) in cases {
        let spec_path = dir.path().join(format!("{}.json", args[0]));
        let mut full = vec!["demo"];
        full.extend_from_slice(args);
        full.extend_from_slice(&["--emit-spec", spec_path.to_str().unwrap()]);
        let o = dmm(&full);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let text = fs::read_to_string(&spec_path).unwrap();
        let file = SpecFile::from_json(&text).unwrap();
        assert_eq!(file.steps, Some(steps));
        let o = dmm(&["run", spec_path.to_str().unwrap(), "--watch", watch]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert_eq!(stdout(&o), in_process_trace(&text, steps, watch), "{}", args[0]);
    }
}

#[test]
fn gru_spec_file_round_trip_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let p = GruParams::random(&mut rng);
    let spec = build_gru(&p, &[0.1, -0.7, 0.3333333333333333]);
    let text = SpecFile::from_spec(&spec, None).to_json_pretty();
    let back = SpecFile::from_json(&text).unwrap().to_spec(&builtin_registry()).unwrap();
    assert_eq!(back, spec);
}
