use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;
use tempo_ncg::harness::Instance;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tempo-ncg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Runs `gen` and writes the result into `dir`.
fn gen(dir: &Path, file: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(file);
    let mut all = vec!["gen"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let o = run(&all);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    path
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn bought(v: &serde_json::Value) -> usize {
    v["profile"]["strategies"].as_object().map_or(0, |m| {
        m.values().map(|es| es.as_array().unwrap().len()).sum()
    })
}

#[test]
fn gen_families() {
    let dir = TempDir::new().unwrap();
    let dc = json(&gen(dir.path(), "dc.json", &["dense-cycle", "--x", "2"]));
    assert_eq!(dc["host"]["nodes"].as_array().unwrap().len(), 8);
    assert_eq!(bought(&dc), 12);
    assert_eq!(dc["profile"]["setting"], "global");

    let k2 = json(&gen(dir.path(), "k2.json", &["hypercube", "--d", "1"]));
    assert_eq!(k2["host"]["nodes"], serde_json::json!(["0", "1"]));
    assert_eq!(bought(&k2), 1);

    let left = json(&gen(dir.path(), "left.json", &["fig5-left"]));
    assert_eq!(left["profile"]["setting"], "global");
    assert_eq!(bought(&left), 5);

    let f = gen(dir.path(), "f.json", &["fig5-left"]);
    let ext = json(&gen(
        dir.path(),
        "ext.json",
        &["extend-nonterminal", "--input", f.to_str().unwrap()],
    ));
    assert_eq!(bought(&ext), 6);

    let k2p = dir.path().join("k2.json");
    let k2s = k2p.to_str().unwrap();
    let sq = json(&gen(
        dir.path(),
        "sq.json",
        &["product", "--left", k2s, "--right", k2s],
    ));
    assert_eq!(bought(&sq), 4);

    let sc = json(&gen(
        dir.path(),
        "sc.json",
        &["scale", "--d", "3", "--c", "3"],
    ));
    assert_eq!(sc["host"]["nodes"].as_array().unwrap().len(), 24);
    assert_eq!(bought(&sc), 52);

    let tt = json(&gen(
        dir.path(),
        "tt.json",
        &["two-terminal", "--n", "7", "--seed", "5"],
    ));
    assert_eq!(tt["host"]["terminals"].as_array().unwrap().len(), 2);
}

#[test]
fn generator_output_round_trips() {
    let dir = TempDir::new().unwrap();
    let k2 = gen(dir.path(), "k2.json", &["hypercube", "--d", "1"]);
    let k2 = k2.to_str().unwrap();
    let cases: [&[&str]; 10] = [
        &["fig4"],
        &["fig5-left"],
        &["fig5-right"],
        &["dense-cycle", "--x", "4"],
        &["hypercube", "--d", "2"],
        &["scale", "--d", "2", "--c", "2"],
        &["product", "--left", k2, "--right", k2],
        &["extend-terminal", "--input", k2],
        &["extend-nonterminal", "--input", k2],
        &[
            "two-terminal",
            "--n",
            "6",
            "--seed",
            "1",
            "--labels-per-edge",
            "3",
        ],
    ];
    for args in cases {
        let mut all = vec!["gen"];
        all.extend_from_slice(args);
        let o = run(&all);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        let text = stdout(&o);
        let inst = Instance::from_json(&text).unwrap();
        assert_eq!(inst.to_json(), text, "{args:?}");
    }
}

#[test]
fn bad_parameters_exit_2() {
    for args in [
        &["gen", "dense-cycle", "--x", "3"][..],
        &["gen", "dense-cycle"],
        &["gen", "hypercube", "--d", "0"],
        &["gen", "nonsense"],
        &["verify", "/does/not/exist.json"],
        &["--format", "csv", "gen", "fig4"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let left = gen(dir.path(), "left.json", &["fig5-left"]);
    let o = run(&["verify", left.to_str().unwrap(), "--kind", "ne"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("equilibrium"));
    assert!(stdout(&o).contains("certificate terminal-trees"));

    let fig4 = gen(dir.path(), "fig4.json", &["fig4"]);
    let o = run(&["verify", fig4.to_str().unwrap(), "--kind", "ne"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("v3 → {(v1,v3,1)}"), "{}", stdout(&o));
    let o = run(&["verify", fig4.to_str().unwrap(), "--kind", "ge"]);
    assert_eq!(o.status.code(), Some(0));

    let empty = dir.path().join("empty.json");
    std::fs::write(
        &empty,
        r#"{"v": 1, "host": {"nodes": ["a", "b", "c"], "terminals": ["a", "b"], "default_label": 1},
            "profile": {"setting": "local"}}"#,
    )
    .unwrap();
    let o = run(&["--format", "json", "verify", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["verdict"], "refuted");
    assert_eq!(report["witness"]["strategy"].as_array().unwrap().len(), 1);

    let o = run(&["--budget", "1", "verify", left.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweeps() {
    let dir = TempDir::new().unwrap();
    let fig4 = gen(dir.path(), "fig4.json", &["fig4"]);
    let o = run(&[
        "sweep",
        fig4.to_str().unwrap(),
        "--mode",
        "global",
        "--expected",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1024 assignments"));

    let left = gen(dir.path(), "left.json", &["fig5-left"]);
    let o = run(&[
        "sweep",
        left.to_str().unwrap(),
        "--mode",
        "local",
        "--expected",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("32 assignments"));

    let right = gen(dir.path(), "right.json", &["fig5-right"]);
    let o = run(&[
        "--format",
        "json",
        "sweep",
        right.to_str().unwrap(),
        "--mode",
        "global",
        "--prefilter",
        "--expected",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["assignments"], 6u64.pow(8));

    let o = run(&[
        "sweep",
        right.to_str().unwrap(),
        "--mode",
        "local",
        "--expected",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&[
        "sweep",
        right.to_str().unwrap(),
        "--mode",
        "global",
        "--max-assignments",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dynamics_and_optimum() {
    let dir = TempDir::new().unwrap();
    let host = dir.path().join("host.json");
    std::fs::write(
        &host,
        r#"{"v": 1, "host": {"nodes": ["a", "b", "c", "d"], "terminals": ["a", "b", "c", "d"],
            "edges": {"a|b": [1], "a|c": [2], "a|d": [3], "b|c": [4], "b|d": [5], "c|d": [6]}}}"#,
    )
    .unwrap();
    let o = run(&["dynamics", host.to_str().unwrap(), "--setting", "global"]);
    assert_eq!(o.status.code(), Some(0));
    let out = dir.path().join("out.json");
    std::fs::write(&out, stdout(&o)).unwrap();
    let o = run(&["verify", out.to_str().unwrap(), "--kind", "ge"]);
    assert_eq!(o.status.code(), Some(0));

    let o = run(&["optimum", host.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("optimum: 5 (exact)"));
    let o = run(&[
        "--format",
        "json",
        "optimum",
        host.to_str().unwrap(),
        "--max-candidate-edges",
        "2",
    ]);
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["exact"], false);
    assert_eq!(
        (&r["lower"], &r["upper"]),
        (&serde_json::json!(3), &serde_json::json!(5))
    );
}

#[test]
fn poa_csv_is_sorted_and_skips_unverified() {
    let dir = TempDir::new().unwrap();
    let sc = gen(dir.path(), "sc.json", &["scale", "--d", "3", "--c", "3"]);
    let dc = gen(dir.path(), "dc.json", &["dense-cycle", "--x", "2"]);
    let k2 = gen(dir.path(), "k2.json", &["hypercube", "--d", "1"]);
    let f4 = gen(dir.path(), "f4.json", &["fig4"]);
    let paths: Vec<&str> = [&sc, &f4, &k2, &dc]
        .iter()
        .map(|p| p.to_str().unwrap())
        .collect();
    let mut args = vec!["--workers", "2", "poa"];
    args.extend(paths);
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("skipping"));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "name,n,k,lifetime,kind,setting,equilibrium_edges,optimum_min,optimum_max,optimum_exact,ratio_min,ratio_max"
    );
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("dense-cycle-x2,8,8,4,NE,global,12,7,7,true,"));
    assert!(lines[2].starts_with("hypercube-d1,2,2,1,NE,local,1,1,1,true,1.0,1.0"));
    assert!(lines[3].starts_with("scale-c3,24,8,7,NE,local,52,23,23,true,"));
}
