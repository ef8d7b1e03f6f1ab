//! Frozen outputs. Set `UPDATE_GOLDEN=1` to rewrite the files after an
//! intentional change, then review the diff.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use nullweight::graph::GpParams;
use nullweight::lemma::{build_config, recursion_trace, ConfigSpec};
use nullweight::solver::{gen_lists, solve, ListStyle};

fn check(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "{name} differs from its golden file");
}

#[test]
fn witness_monomials() {
    let mut specs: Vec<ConfigSpec> = (5..=8).map(ConfigSpec::kind_i).collect();
    specs.push(ConfigSpec::kind_ii());
    specs.extend(
        [(8, 3), (10, 4), (11, 4), (12, 5), (14, 6)].map(|(n, t)| ConfigSpec::kind_iii(n, t)),
    );
    let mut out = String::new();
    for spec in specs {
        let cfg = build_config(spec).unwrap();
        writeln!(out, "{spec} {}", cfg.witness.display(&cfg.ctx.vars)).unwrap();
    }
    check("witnesses.txt", &out);
}

#[test]
fn kind_i_witness_shape() {
    // z1^2 z2 w^2 times y_i^2 for i < n.
    for n in 5..=9u32 {
        let cfg = build_config(ConfigSpec::kind_i(n)).unwrap();
        let ys: Vec<String> = (1..n).map(|i| format!("y{i}^2")).collect();
        assert_eq!(
            cfg.witness.display(&cfg.ctx.vars).to_string(),
            format!("z1^2*z2*w^2*{}", ys.join("*"))
        );
    }
}

#[test]
fn kind_iii_residual_dumps() {
    let cfg = build_config(ConfigSpec::kind_iii(12, 5)).unwrap();
    let trace = recursion_trace(&cfg).unwrap();
    let mut out = String::new();
    for (k, r) in trace.residuals.iter().enumerate() {
        writeln!(out, "# after block {}", k + 1).unwrap();
        out.push_str(&r.dump(&cfg.ctx.vars));
    }
    writeln!(out, "# value {}", trace.value).unwrap();
    check("residuals_kind_iii_12_5.txt", &out);
}

#[test]
fn solve_reports() {
    let mut out = String::new();
    for (n, t, style, seed) in [
        (7, 3, ListStyle::Constant, 0),
        (10, 4, ListStyle::Random, 3),
        (8, 4, ListStyle::Arithmetic, 1),
    ] {
        let p = GpParams::new(n, t).unwrap();
        let mut report = solve(p, &gen_lists(p, seed, style).unwrap()).unwrap();
        report.millis = 0;
        out.push_str(&serde_json::to_string_pretty(&report).unwrap());
        out.push('\n');
    }
    check("solve_reports.json", &out);
}
