use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;

use nsobolev::formats::{parse_graph, parse_parabolic, parse_vertex_function, read_graph, write_graph, write_parabolic};

fn fixture(name: &str) -> &'static str {
    let path: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    Box::leak(path.into_os_string().into_string().unwrap().into_boxed_str())
}

fn nsobolev(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nsobolev")).args(args).output().unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn modulus_of_single_unit_edge() {
    let out = nsobolev(&["modulus", "--p", "2", "--graph", fixture("single_edge.graph")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "2.0\n");
}

#[test]
fn modulus_writes_extremal_density() {
    let dir = tempfile::tempdir().unwrap();
    let rho = dir.path().join("rho.vf");
    let graph = fixture("p3.graph");
    let out = nsobolev(&[
        "modulus", "--p", "2", "--graph", graph, "--from", "a", "--to", "c", "--out", path_str(&rho),
    ]);
    assert_eq!(out.status.code(), Some(0));
    // (Σ c²)^{-1} with c = (1/2, 1, 1/2).
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0.666666666667\n");
    let g = read_graph(Path::new(graph)).unwrap();
    let density = parse_vertex_function(&std::fs::read_to_string(rho).unwrap(), &g).unwrap();
    assert!((density[1] - 2.0 / 3.0).abs() < 1e-9);
}

#[test]
fn gradient_of_constant_is_zero() {
    let graph = fixture("p3.graph");
    let out = nsobolev(&["gradient", "--graph", graph, "--function", fixture("constant_p3.vf")]);
    assert_eq!(out.status.code(), Some(0));
    let g = read_graph(Path::new(graph)).unwrap();
    let grad = parse_vertex_function(&String::from_utf8(out.stdout).unwrap(), &g).unwrap();
    assert_eq!(grad.values(), &[0.0, 0.0, 0.0]);

    let out = nsobolev(&["gradient", "--graph", graph, "--function", fixture("constant_p3.pf")]);
    assert_eq!(out.status.code(), Some(0));
    let f = parse_parabolic(&String::from_utf8(out.stdout).unwrap(), Arc::new(g)).unwrap();
    assert!(f.values().iter().all(|v| v.max_abs() == 0.0));
}

#[test]
fn smooth_sweep_on_two_piece_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let svg = dir.path().join("sweep.svg");
    let args = [
        "smooth-sweep",
        "--p",
        "2",
        "--kernel",
        "hat",
        "--graph",
        fixture("p3.graph"),
        "--function",
        fixture("two_piece_p3.pf"),
        "--out",
        path_str(&csv),
        "--plot",
        path_str(&svg),
    ];
    let out = nsobolev(&args);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(reader.headers().unwrap(), vec!["param", "norm", "sup_norm", "rate_running"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 13);
    let norm = |r: &csv::StringRecord| r[1].parse::<f64>().unwrap();
    for r in &rows {
        let eps: f64 = r[0].parse().unwrap();
        assert!((norm(r) - (0.3 * eps).sqrt()).abs() < 1e-12);
    }
    for r in &rows[1..] {
        assert!((r[3].parse::<f64>().unwrap() - 0.5).abs() < 1e-9);
    }
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    // N decays like ε^{1/2}: over twelve halvings the ratio is 2^{-6}, above
    // the 10^{-3} decay threshold, so the run reports a criterion failure.
    let ratio = norm(&rows[12]) / norm(&rows[0]);
    assert!((ratio - 2f64.powi(-6)).abs() < 1e-12);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("decay"));
}

#[test]
fn sweeps_pass_for_p_one() {
    let out = nsobolev(&[
        "smooth-sweep",
        "--p",
        "1",
        "--graph",
        fixture("p3.graph"),
        "--function",
        fixture("two_piece_p3.pf"),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn verify_bound_and_shift_sweep() {
    let common = ["--graph", fixture("p3.graph"), "--function", fixture("two_piece_p3.pf")];
    let mut args = vec!["verify-bound", "--p", "2", "--shift", "0.05"];
    args.extend(common);
    let out = nsobolev(&args);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.ends_with("ok true\n"), "{text}");

    let mut args = vec!["shift-sweep", "--p", "1", "--steps", "4", "--window-vertices", "a,b"];
    args.extend(common);
    let out = nsobolev(&args);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 6);
    assert!(!rows[1].split(',').nth(2).unwrap().is_empty());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (g, f) = (dir.path().join("g.graph"), dir.path().join("f.pf"));
    let gen = |seed: &str| {
        nsobolev(&["generate", "--seed", seed, "--vertices", "9", "--pieces", "5", "--graph", path_str(&g), "--function", path_str(&f)])
    };
    assert_eq!(gen("17").status.code(), Some(0));
    let first = (std::fs::read(&g).unwrap(), std::fs::read(&f).unwrap());
    assert_eq!(gen("17").status.code(), Some(0));
    assert_eq!(first, (std::fs::read(&g).unwrap(), std::fs::read(&f).unwrap()));

    let sweep = || nsobolev(&["smooth-sweep", "--p", "1.5", "--graph", path_str(&g), "--function", path_str(&f)]).stdout;
    let a = sweep();
    assert!(!a.is_empty());
    assert_eq!(a, sweep());
}

#[test]
fn generated_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (g, f) = (dir.path().join("g.graph"), dir.path().join("f.pf"));
    for seed in ["1", "2", "3"] {
        let out = nsobolev(&["generate", "--seed", seed, "--graph", path_str(&g), "--function", path_str(&f)]);
        assert_eq!(out.status.code(), Some(0));
        let gt = std::fs::read_to_string(&g).unwrap();
        let graph = parse_graph(&gt).unwrap();
        assert_eq!(write_graph(&graph), gt);
        let ft = std::fs::read_to_string(&f).unwrap();
        let func = parse_parabolic(&ft, Arc::new(graph)).unwrap();
        assert_eq!(write_parabolic(&func), ft);
    }
}

#[test]
fn errors_exit_with_one_and_explain() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.graph");
    std::fs::write(&bad, "v a 1\nv b 1\ne a c 1\n").unwrap();
    let out = nsobolev(&["modulus", "--graph", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 3"));

    let out = nsobolev(&[
        "smooth-sweep",
        "--eps0",
        "0.3",
        "--graph",
        fixture("p3.graph"),
        "--function",
        fixture("two_piece_p3.pf"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("distance") && err.contains("time window"), "{err}");

    let out = nsobolev(&["modulus", "--p", "0.5", "--graph", fixture("single_edge.graph")]);
    assert_eq!(out.status.code(), Some(1));
}
