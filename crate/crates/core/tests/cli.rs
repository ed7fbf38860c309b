mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oversquash"))
        .args(args)
        .output()
        .unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn measure_path_of_three() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("p3.txt");
    fs::write(&input, "0 1\n1 2\n").unwrap();
    let out = tmp.path().join("r.json");
    let o = run(&["measure", "--input", s(&input), "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&out);
    assert_eq!(r["graphs"][0]["prevalence"], 0.0);
    assert_eq!(r["graphs"][0]["valid_pairs"], 6);
    assert_eq!(r["dataset"]["prevalence"], 0.0);
}

#[test]
fn measure_bundle_averages_graphs() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("FX");
    fs::create_dir(&dir).unwrap();
    fs::write(dir.join("FX_graph_indicator.txt"), "1\n1\n1\n2\n2\n").unwrap();
    fs::write(dir.join("FX_A.txt"), "1, 2\n2, 3\n4, 5\n").unwrap();
    let out = tmp.path().join("r.json");
    let pairs = tmp.path().join("pairs.csv");
    let o = run(&[
        "measure",
        "--input",
        s(&dir),
        "--out",
        s(&out),
        "--pairs-csv",
        s(&pairs),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&out);
    assert_eq!(r["input"]["format"], "tudataset");
    assert_eq!(r["graphs"].as_array().unwrap().len(), 2);
    for m in ["prevalence", "intensity", "variability", "extremity"] {
        let a = r["graphs"][0][m].as_f64().unwrap();
        let b = r["graphs"][1][m].as_f64().unwrap();
        assert_eq!(r["dataset"][m].as_f64().unwrap(), (a + b) / 2.0);
    }
    let csv = fs::read_to_string(&pairs).unwrap();
    assert_eq!(csv.lines().count(), 1 + 6 + 2);
}

#[test]
fn measure_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let lonely = tmp.path().join("lonely.txt");
    fs::write(&lonely, "# nodes: 3\n").unwrap();
    assert_eq!(
        run(&["measure", "--input", s(&lonely)]).status.code(),
        Some(3)
    );

    let bad = tmp.path().join("bad.txt");
    fs::write(&bad, "0 x\n").unwrap();
    let o = run(&["measure", "--input", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":1:"));

    let missing = tmp.path().join("nope.txt");
    assert_eq!(
        run(&["measure", "--input", s(&missing)]).status.code(),
        Some(2)
    );
}

#[test]
fn rewire_gtr_on_path() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("p3.txt");
    fs::write(&input, "0 1\n1 2\n").unwrap();
    let out = tmp.path().join("rw");
    let o = run(&[
        "rewire",
        "--input",
        s(&input),
        "--method",
        "gtr",
        "--num-edges",
        "1",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let g = oversquash::io::load_edge_list(&out.join("p3.txt")).unwrap();
    assert_eq!(g.num_edges(), 3);
    let acc = json(&out.join("accounting.json"));
    assert_eq!(acc["graphs"][0]["added"], 1);
    assert_eq!(acc["mean_added"], 1.0);
}

#[test]
fn rewire_digl_empties_dyad() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("dyad.txt");
    fs::write(&input, "0 1\n").unwrap();
    let out = tmp.path().join("rw");
    let o = run(&[
        "rewire",
        "--input",
        s(&input),
        "--method",
        "digl",
        "--alpha",
        "0.5",
        "--eps",
        "0.4",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let acc = json(&out.join("accounting.json"));
    assert_eq!(acc["graphs"][0]["removed"], 1);
    assert_eq!(acc["graphs"][0]["edges_after"], 0);
}

#[test]
fn rewire_import_identity() {
    let tmp = tempfile::tempdir().unwrap();
    let (src, treated) = (tmp.path().join("src"), tmp.path().join("treated"));
    fs::create_dir_all(&src).unwrap();
    fs::create_dir_all(&treated).unwrap();
    fs::write(src.join("a.txt"), "0 1\n1 2\n").unwrap();
    fs::write(treated.join("a.txt"), "1 0\n2 1\n").unwrap();
    let out = tmp.path().join("rw");
    let o = run(&[
        "rewire",
        "--input",
        s(&src),
        "--method",
        "import",
        "--treated-dir",
        s(&treated),
        "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let acc = json(&out.join("accounting.json"));
    assert_eq!(acc["graphs"][0]["added"], 0);
    assert_eq!(acc["graphs"][0]["removed"], 0);
}

#[test]
fn rewire_rejects_bad_parameters_without_output() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("p3.txt");
    fs::write(&input, "0 1\n1 2\n").unwrap();
    let out = tmp.path().join("rw");
    let o = run(&[
        "rewire",
        "--input",
        s(&input),
        "--method",
        "digl",
        "--alpha",
        "1.5",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&[
        "rewire",
        "--input",
        s(&input),
        "--method",
        "fosr",
        "--num-edges",
        "1",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn causal_node_task_unchanged_graph() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("g");
    common::write_edge_lists(&dir, &[common::path(6)]);
    let out = tmp.path().join("c.json");
    let o = run(&[
        "causal",
        "--input",
        s(&dir),
        "--treated-dir",
        s(&dir),
        "--task",
        "node",
        "--lcc-only",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&out);
    let m = &r["causal"]["node"][0]["mcnemar"];
    assert_eq!((m["b"].as_u64(), m["c"].as_u64()), (Some(0), Some(0)));
    assert_eq!(m["p"], 1.0);
    assert!(m["flag"].is_string());
}

#[test]
fn causal_rejects_count_mismatch() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    common::write_edge_lists(&a, &[common::path(4), common::path(5)]);
    common::write_edge_lists(&b, &[common::path(4)]);
    let o = run(&["causal", "--input", s(&a), "--treated-dir", s(&b)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn causal_output_is_thread_independent() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("g");
    let mut r = common::rng(3);
    let graphs: Vec<_> = (0..8).map(|_| common::random_tree(&mut r, 12)).collect();
    common::write_edge_lists(&dir, &graphs);
    let mut texts = Vec::new();
    for threads in ["1", "3"] {
        let out = tmp.path().join(format!("c{threads}.json"));
        let o = run(&[
            "causal",
            "--input",
            s(&dir),
            "--method",
            "fosr",
            "--num-edges",
            "2",
            "--seed",
            "5",
            "--threads",
            threads,
            "--responsiveness",
            "--out",
            s(&out),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        texts.push(fs::read_to_string(&out).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
    let r: Value = serde_json::from_str(&texts[0]).unwrap();
    assert_eq!(r["causal"]["ate"].as_array().unwrap().len(), 4);
    assert!(r["causal"]["responsiveness"]["prevalence"].is_number());
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("p4.txt");
    fs::write(&input, "0 1\n1 2\n2 3\n").unwrap();
    let cfg = tmp.path().join("run.toml");
    fs::write(
        &cfg,
        format!("input = {:?}\nmethod = \"gtr\"\nnum_edges = 3\n", s(&input)),
    )
    .unwrap();
    let out = tmp.path().join("rw");
    let o = run(&[
        "rewire",
        "--config",
        s(&cfg),
        "--num-edges",
        "1",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let acc = json(&out.join("accounting.json"));
    assert_eq!(acc["graphs"][0]["added"], 1);
}

fn correlate(effects: &str, gains: &str) -> (Output, Option<Value>, String) {
    let tmp = tempfile::tempdir().unwrap();
    let (e, g, out) = (
        tmp.path().join("e.csv"),
        tmp.path().join("g.csv"),
        tmp.path().join("corr.json"),
    );
    fs::write(&e, effects).unwrap();
    fs::write(&g, gains).unwrap();
    let o = run(&[
        "correlate",
        "--input",
        s(&e),
        "--gains",
        s(&g),
        "--out",
        s(&out),
    ]);
    let v = out.exists().then(|| json(&out));
    let csv = fs::read_to_string(out.with_extension("csv")).unwrap_or_default();
    (o, v, csv)
}

const EFFECTS: &str = "config_id,prevalence,intensity,variability,extremity\n\
a,0.1,0.1,0.1,0.1\nb,0.2,0.2,0.2,0.2\nc,0.3,0.3,0.3,0.3\nd,0.4,0.4,0.4,0.4\n";

#[test]
fn correlate_decreasing_gains() {
    let (o, v, csv) = correlate(EFFECTS, "config_id,gain_percent\na,4\nb,3\nc,2\nd,1\n");
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for c in v.unwrap()["correlations"].as_array().unwrap() {
        assert_eq!(c["rho"], -1.0);
        assert_eq!(c["p_two_tailed"], 0.0);
    }
    assert!(csv.starts_with("metric,rho,p,n\n"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn correlate_constant_gains_undefined() {
    let (o, v, _) = correlate(EFFECTS, "config_id,gain_percent\na,1\nb,1\nc,1\nd,1\n");
    assert!(o.status.success());
    for c in v.unwrap()["correlations"].as_array().unwrap() {
        assert!(c["rho"].is_null());
    }
}

#[test]
fn correlate_example_ranks() {
    let effects = "config_id,prevalence,intensity,variability,extremity\n\
a,1,1,1,1\nb,2,2,2,2\nc,3,3,3,3\nd,4,4,4,4\n";
    let (_, v, _) = correlate(effects, "config_id,gain_percent\na,2\nb,1\nc,4\nd,3\n");
    assert_eq!(v.unwrap()["correlations"][0]["rho"], 0.6);
}

#[test]
fn correlate_unmatched_ids() {
    let (o, v, _) = correlate(EFFECTS, "config_id,gain_percent\na,4\nb,3\nc,2\nz,1\n");
    assert_eq!(o.status.code(), Some(2));
    assert!(v.is_none());
}
