use std::fs;
use std::path::Path;

use nullweight::graph::{
    gen_petersen, verify_proper, GpParams, Graph, GraphFile, ListAssignment, ListsFile,
    TotalWeighting, WeightingFile,
};
use nullweight::rational::int;
use nullweight_cli::{run, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn nw(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("nullweight").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn json(r: &Run) -> Value {
    serde_json::from_str(&r.out).unwrap_or_else(|e| panic!("{e}: {}", r.out))
}

fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> String {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path.to_str().unwrap().to_owned()
}

fn constant_lists(g: &Graph) -> ListsFile {
    ListsFile::from(&ListAssignment::uniform(
        g,
        &[int(0)],
        &[int(1), int(2), int(3)],
    ))
}

#[test]
fn diamond_coefficient_line() {
    let r = nw(&["verify-lemma", "--kind", "ii"]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.out, "kind=II computed=-8 expected=-8 OK\n");
}

#[test]
fn kind_iii_with_steps_reports_every_residual() {
    let r = nw(&[
        "--json",
        "verify-lemma",
        "--kind",
        "iii",
        "--n",
        "11",
        "--t",
        "4",
        "--steps",
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let v = json(&r);
    assert_eq!(v["matched"], true);
    assert_eq!(v["reports"][0]["computed"], v["reports"][0]["expected"]);
    assert_eq!(v["steps"].as_array().unwrap().len(), 3);
}

#[test]
fn gen_emits_thirty_edges() {
    let r = nw(&["gen", "--n", "10", "--t", "4"]);
    assert_eq!(r.code, EXIT_OK);
    let file: GraphFile = serde_json::from_str(&r.out).unwrap();
    assert_eq!(file.to_graph().unwrap().edge_count(), 30);
}

#[test]
fn decompose_n_eq_2t_is_a_matching() {
    let r = nw(&["--json", "decompose", "--n", "8", "--t", "4"]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(json(&r)["inner"]["matching"].as_array().unwrap().len(), 4);
}

#[test]
fn solve_constant_lists_is_verified() {
    let r = nw(&[
        "--json", "solve", "--n", "7", "--t", "3", "--style", "constant",
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let v = json(&r);
    assert_eq!(v["verified"], true);
    assert_eq!(v["case"], "T3_N_EQ_2T1");
    assert_eq!(v["millis"], 0);
}

#[test]
fn solve_writes_a_proper_weighting() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.json");
    let r = nw(&[
        "solve",
        "--n",
        "9",
        "--t",
        "2",
        "--style",
        "random",
        "--seed",
        "4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let file: WeightingFile = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let w = TotalWeighting::try_from(&file).unwrap();
    let g = gen_petersen(GpParams::new(9, 2).unwrap()).unwrap();
    assert!(verify_proper(&g, &w).unwrap().proper);
}

#[test]
fn solve_reads_a_lists_file() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen_petersen(GpParams::new(6, 2).unwrap()).unwrap();
    let lists = write_json(dir.path(), "l.json", &constant_lists(&g));
    let r = nw(&["solve", "--n", "6", "--t", "2", "--lists", &lists]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.ends_with("verified=true\n"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &[
            "--json", "solve", "--n", "11", "--t", "3", "--style", "random", "--seed", "7",
        ][..],
        &[
            "solve",
            "--n",
            "10",
            "--t",
            "5",
            "--style",
            "arithmetic",
            "--seed",
            "2",
        ],
        &["--json", "verify-lemma", "--kind", "i"],
        &["--json", "verify-observation", "--max-t", "8"],
    ] {
        let a = nw(args);
        let b = nw(args);
        assert_eq!(a.code, EXIT_OK, "{args:?}: {}", a.err);
        assert_eq!(a.out, b.out, "{args:?}");
    }
}

#[test]
fn sweep_output_does_not_depend_on_jobs() {
    let one = nw(&[
        "--json", "--jobs", "1", "sweep", "--max-n", "6", "--seeds", "2",
    ]);
    let two = nw(&[
        "--json", "--jobs", "2", "sweep", "--max-n", "6", "--seeds", "2",
    ]);
    assert_eq!(one.code, EXIT_OK, "{}", one.err);
    assert_eq!(one.out, two.out);
    let v = json(&one);
    assert_eq!(v["defects"], 0);
    assert_eq!(v["runs"], v["verified"]);
    // (n,t) pairs with n <= 6, in key order.
    let keys: Vec<(u64, u64)> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["n"].as_u64().unwrap(), r["t"].as_u64().unwrap()))
        .collect();
    assert_eq!(
        keys,
        [
            (3, 1),
            (4, 1),
            (4, 2),
            (5, 1),
            (5, 2),
            (6, 1),
            (6, 2),
            (6, 3)
        ]
    );
}

#[test]
fn oracle_reports_existence() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen_petersen(GpParams::new(5, 1).unwrap()).unwrap();
    let graph = write_json(dir.path(), "g.json", &GraphFile::from_graph(&g, None));
    let lists = write_json(dir.path(), "l.json", &constant_lists(&g));
    let r = nw(&["--json", "oracle", "--graph", &graph, "--lists", &lists]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(json(&r)["exists"], true);

    let edge: GraphFile =
        serde_json::from_str(r#"{"vertices":["u1","u2"],"edges":[["u1","u2"]]}"#).unwrap();
    let k2 = edge.to_graph().unwrap();
    let graph = write_json(dir.path(), "k2.json", &edge);
    let lists = write_json(dir.path(), "k2l.json", &constant_lists(&k2));
    let r = nw(&["--json", "oracle", "--graph", &graph, "--lists", &lists]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(json(&r)["exists"], false);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &[][..],
        &["frobnicate"],
        &["solve", "--n", "7"],
        &["solve", "--n", "7", "--t", "3", "--style", "geometric"],
        &[
            "solve", "--n", "7", "--t", "3", "--lists", "l.json", "--seed", "1",
        ],
        &["--jobs", "0", "gen", "--n", "5", "--t", "1"],
        &["verify-lemma", "--kind", "ii", "--n", "5"],
        &["verify-lemma", "--kind", "i", "--steps"],
        &["verify-lemma", "--kind", "iii", "--n", "9", "--t", "4"],
        &["verify-observation", "--max-t", "1"],
        &["gen", "--n", "7", "--t", "4"],
        &["bench", "--t", "5", "--max-n", "8"],
    ] {
        let r = nw(args);
        assert_eq!(r.code, EXIT_USAGE, "{args:?}");
        assert!(r.out.is_empty(), "{args:?}");
        assert!(!r.err.is_empty(), "{args:?}");
    }
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen_petersen(GpParams::new(5, 1).unwrap()).unwrap();
    let graph = write_json(dir.path(), "g.json", &GraphFile::from_graph(&g, None));
    let good = write_json(dir.path(), "l.json", &constant_lists(&g));
    let missing = dir.path().join("absent.json").to_str().unwrap().to_owned();
    let garbage = dir.path().join("garbage.json");
    fs::write(&garbage, "{\"vertices\": [").unwrap();
    let garbage = garbage.to_str().unwrap().to_owned();
    let mut short = constant_lists(&g);
    short.edges.values_mut().next().unwrap().pop();
    let short = write_json(dir.path(), "short.json", &short);
    let mut wide = constant_lists(&g);
    wide.vertices.values_mut().next().unwrap().push("5".into());
    let wide = write_json(dir.path(), "wide.json", &wide);
    let bad_value = write_json(
        dir.path(),
        "bad.json",
        &serde_json::json!({"vertices": {"u1": ["x/0"]}, "edges": {}}),
    );
    let unwritable = dir
        .path()
        .join("no/such/dir/w.json")
        .to_str()
        .unwrap()
        .to_owned();

    for args in [
        vec!["solve", "--n", "5", "--t", "1", "--lists", &missing],
        vec!["solve", "--n", "5", "--t", "1", "--lists", &garbage],
        vec!["solve", "--n", "5", "--t", "1", "--lists", &short],
        vec!["solve", "--n", "5", "--t", "1", "--lists", &wide],
        vec!["solve", "--n", "5", "--t", "1", "--lists", &bad_value],
        vec!["solve", "--n", "6", "--t", "2", "--lists", &good],
        vec!["solve", "--n", "5", "--t", "1", "--out", &unwritable],
        vec!["oracle", "--graph", &garbage, "--lists", &good],
        vec!["oracle", "--graph", &graph, "--lists", &missing],
        vec![
            "oracle", "--graph", &graph, "--lists", &good, "--budget", "10",
        ],
    ] {
        let r = nw(&args);
        assert_eq!(r.code, EXIT_USAGE, "{args:?}: {}", r.err);
        assert!(r.err.starts_with("error: "), "{args:?}: {}", r.err);
        assert!(r.out.is_empty(), "{args:?}");
    }
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(nw(&["--help"]).code, EXIT_OK);
    assert_eq!(nw(&["--version"]).code, EXIT_OK);
    assert!(nw(&["solve", "--help"]).out.contains("--style"));
}
