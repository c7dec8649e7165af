use std::fs;
use std::process::{Command, Output};

use hfp_core::circulant::{full_analysis, CirculantAnalysis};
use hfp_core::hadamard::{format_signs, sylvester_matrix};
use hfp_core::search::SearchResult;
use serde_json::Value;

fn hfp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hfp"))
        .args(args)
        .env_remove("HFP_JOBS")
        .env_remove("HFP_BUDGET_LOG2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn analyze_exit_codes() {
    let ok = hfp(&["analyze", "1000"]);
    assert_eq!(ok.status.code(), Some(0));
    let v = json(&ok);
    assert_eq!(v["is_hadamard"], true);
    assert_eq!(v["rank_gcd"], 3);
    assert_eq!(v["kernel_dim"], 3);
    assert_eq!(v["group_type"], "C4xC2u");

    let no = hfp(&["analyze", "1010"]);
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(json(&no)["is_hadamard"], false);

    for bad in ["10", "10x0", "", "0000"] {
        assert_eq!(hfp(&["analyze", bad]).status.code(), Some(2), "{bad:?}");
    }
}

#[test]
fn analyze_json_round_trips() {
    let out = hfp(&["analyze", "0111"]);
    let parsed: CirculantAnalysis = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(parsed, full_analysis(&"0111".parse().unwrap()).unwrap());
}

#[test]
fn text_and_json_agree() {
    let j = json(&hfp(&["analyze", "1000"]));
    let text = stdout(&hfp(&["--format", "text", "analyze", "1000"]));
    let obj = j.as_object().unwrap();
    assert_eq!(text.lines().count(), obj.len());
    for (key, value) in obj {
        let rendered = match value {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        assert!(text.contains(&format!("{key}: {rendered}\n")), "{key}");
    }
}

#[test]
fn search_commands() {
    let out = hfp(&["search", "--order", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let r: SearchResult = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((r.candidates_tested, r.hits.len(), r.shift_complement_classes.len()), (16, 8, 2));

    let r: SearchResult = serde_json::from_slice(&hfp(&["search", "--order", "16", "--prune", "none", "--jobs", "4"]).stdout).unwrap();
    assert_eq!((r.candidates_tested, r.hits.len()), (65536, 0));

    let r: SearchResult = serde_json::from_slice(&hfp(&["search", "--order", "16", "--prune", "turyn"]).stdout).unwrap();
    assert_eq!(r.candidates_tested, 0);

    assert_eq!(hfp(&["search", "--order", "6"]).status.code(), Some(2));
    assert_eq!(hfp(&["search", "--order", "28"]).status.code(), Some(3));
    assert_eq!(hfp(&["search", "--order", "4", "--prune", "fast"]).status.code(), Some(2));
}

#[test]
fn search_budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_hfp"))
        .args(["search", "--order", "12"])
        .env("HFP_BUDGET_LOG2", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn search_checkpoint_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("order8.cp");
    let p = path.to_str().unwrap();
    let out = hfp(&["search", "--order", "8", "--checkpoint", p]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("order=8\ncursor=256\nhits=\n"));
    let again = hfp(&["search", "--order", "8", "--checkpoint", p, "--resume"]);
    let r: SearchResult = serde_json::from_slice(&again.stdout).unwrap();
    assert_eq!((r.candidates_tested, r.hits.len()), (256, 0));
    let mismatched = hfp(&["search", "--order", "12", "--checkpoint", p, "--resume"]);
    assert_eq!(mismatched.status.code(), Some(2));
}

#[test]
fn verify_matrix_files() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let path = dir.path().join(name);
        fs::write(&path, body).unwrap();
        path.to_str().unwrap().to_string()
    };
    let circ = write("circ.txt", "4\n-+++\n+-++\n++-+\n+++-\n");
    let out = hfp(&["verify-matrix", &circ, "--normalize", "--binarize"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!((v["hadamard"].clone(), v["circulant"].clone()), (Value::Bool(true), Value::Bool(true)));
    assert_eq!(v["binarized"][0], "1000");
    assert_eq!(v["normalized"][0], "++++");

    let zero = write("zero.txt", "4\n0000\n0000\n0000\n0000\n");
    let out = hfp(&["verify-matrix", &zero, "--normalize"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["hadamard"], false);
    assert_eq!(json(&out)["normalized"], Value::Null);

    let syl = write("syl.txt", &format_signs(&sylvester_matrix(3).unwrap()));
    let v = json(&hfp(&["verify-matrix", &syl]));
    assert_eq!((v["hadamard"].clone(), v["circulant"].clone()), (Value::Bool(true), Value::Bool(false)));

    let broken = write("broken.txt", "4\n+-01\n");
    assert_eq!(hfp(&["verify-matrix", &broken]).status.code(), Some(2));
    assert_eq!(hfp(&["verify-matrix", "/nonexistent/matrix"]).status.code(), Some(2));
}

#[test]
fn verify_structure_files() {
    let dir = tempfile::tempdir().unwrap();
    let g = "1000".parse().unwrap();
    let s = hfp_core::circulant::build_hfp(&g).unwrap();
    let path = dir.path().join("s.json");
    fs::write(&path, s.to_json()).unwrap();
    let out = hfp(&["verify-structure", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["propelinear"], true);
    assert_eq!(v["full"], true);
    assert_eq!(v["group_type"], "C4xC2u");

    fs::write(&path, "{\"words\": [\"0000\"], \"perms\": []}").unwrap();
    assert_eq!(hfp(&["verify-structure", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn fixtures() {
    let lines = |args: &[&str]| -> Vec<String> {
        let mut full = vec!["--format", "text", "fixtures"];
        full.extend_from_slice(args);
        stdout(&hfp(&full)).lines().map(String::from).collect()
    };
    let s2 = lines(&["sylvester", "2"]);
    assert_eq!(s2.len(), 8);
    assert!(s2.iter().all(|w| w.len() == 4));
    let p11 = lines(&["paley", "11"]);
    assert_eq!(p11.len(), 24);
    assert!(p11.iter().all(|w| w.len() == 12));
    let mut c4 = lines(&["circulant4"]);
    c4.sort();
    assert_eq!(c4, ["0000", "0011", "0101", "0110", "1001", "1010", "1100", "1111"]);

    let as_json = json(&hfp(&["fixtures", "sylvester", "2"]));
    assert_eq!(as_json.as_array().unwrap().len(), 8);
    assert_eq!(hfp(&["fixtures", "paley", "13"]).status.code(), Some(2));
    assert_eq!(hfp(&["fixtures", "sylvester", "0"]).status.code(), Some(2));
}
