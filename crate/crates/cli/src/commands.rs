use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use nullweight::graph::{
    decompose, gen_petersen, verify_proper, GpParams, GraphFile, ListAssignment, ListsFile,
    WeightingFile,
};
use nullweight::lemma::{
    recursion_checks, verify_config, verify_observation, ConfigReport, ConfigSpec, RecursionCheck,
};
use nullweight::oracle::{brute_force_weighting, OracleBudget};
use nullweight::solver::{gen_lists, solve, CaseTag, ListStyle, SolveReport};
use nullweight::Error;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::{
    BenchArgs, Cli, Command, Failure, KindArg, OracleArgs, Outcome, SolveArgs, SweepArgs,
    VerifyLemmaArgs,
};

type Result<T> = std::result::Result<T, Failure>;

pub(crate) fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Gen(a) => {
            let p = GpParams::new(a.n, a.t)?;
            let g = gen_petersen(p)?;
            document(cli.json, &GraphFile::from_graph(&g, Some(p)))
        }
        Command::Decompose(a) => document(cli.json, &decompose(GpParams::new(a.n, a.t)?)?),
        Command::VerifyLemma(a) => verify_lemma(cli, a),
        Command::VerifyObservation { max_t } => observation(cli, *max_t),
        Command::Solve(a) => solve_one(cli, a),
        Command::Oracle(a) => oracle(cli, a),
        Command::Sweep(a) => sweep(cli, a),
        Command::Bench(a) => bench(cli, a),
    }
}

fn to_json<T: Serialize>(value: &T, pretty: bool) -> Result<String> {
    let mut s = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .map_err(|e| Failure::Core(Error::Internal(format!("serialization: {e}"))))?;
    s.push('\n');
    Ok(s)
}

/// Data-producing commands print JSON either way; `--json` makes it compact.
fn document<T: Serialize>(json: bool, value: &T) -> Result<Outcome> {
    Ok(Outcome::new(to_json(value, !json)?, true))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| Failure::Read {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Core(Error::Input(format!("{}: {e}", path.display()))))
}

fn read_lists(path: &Path) -> Result<ListAssignment> {
    let file: ListsFile = read_json(path)?;
    Ok(ListAssignment::try_from(&file)?)
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "OK"
    } else {
        "MISMATCH"
    }
}

fn lemma_specs(a: &VerifyLemmaArgs) -> Result<Vec<ConfigSpec>> {
    let specs = match (a.kind, a.n, a.t) {
        (KindArg::I, _, Some(_)) | (KindArg::Ii, Some(_), _) | (KindArg::Ii, _, Some(_)) => {
            return Err(Failure::Usage(
                "kind ii takes no --n/--t and kind i takes no --t".into(),
            ))
        }
        (KindArg::I, Some(n), None) => vec![ConfigSpec::kind_i(n)],
        (KindArg::I, None, None) => (5..=16).map(ConfigSpec::kind_i).collect(),
        (KindArg::Ii, None, None) => vec![ConfigSpec::kind_ii()],
        (KindArg::Iii, Some(n), Some(t)) => vec![ConfigSpec::kind_iii(n, t)],
        (KindArg::Iii, None, Some(t)) => (2 * t + 2..=2 * t + 10)
            .map(|n| ConfigSpec::kind_iii(n, t))
            .collect(),
        (KindArg::Iii, Some(n), None) => (3..=n.saturating_sub(2) / 2)
            .map(|t| ConfigSpec::kind_iii(n, t))
            .collect(),
        (KindArg::Iii, None, None) => (3..=9)
            .flat_map(|t| (2 * t + 2..=2 * t + 10).map(move |n| ConfigSpec::kind_iii(n, t)))
            .collect(),
    };
    if a.steps && a.kind != KindArg::Iii {
        return Err(Failure::Usage("--steps applies to kind iii only".into()));
    }
    if specs.is_empty() {
        return Err(Failure::Usage("no configuration in range".into()));
    }
    for s in &specs {
        s.validate()?;
    }
    Ok(specs)
}

#[derive(Serialize)]
struct LemmaOutput {
    reports: Vec<ConfigReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    steps: Vec<RecursionCheck>,
    matched: bool,
}

fn verify_lemma(cli: &Cli, a: &VerifyLemmaArgs) -> Result<Outcome> {
    let specs = lemma_specs(a)?;
    let results = specs
        .par_iter()
        .map(|&spec| {
            let report = verify_config(spec)?;
            let steps = if a.steps {
                recursion_checks(spec)?
            } else {
                Vec::new()
            };
            Ok((report, steps))
        })
        .collect::<nullweight::Result<Vec<_>>>()?;
    let (reports, steps): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let steps: Vec<RecursionCheck> = steps.into_iter().flatten().collect();
    let matched = reports.iter().all(|r| r.matched) && steps.iter().all(|c| c.matched);
    let text = if cli.json {
        to_json(
            &LemmaOutput {
                reports,
                steps,
                matched,
            },
            false,
        )?
    } else {
        let mut s = String::new();
        for r in &reports {
            writeln!(s, "{r}").unwrap();
        }
        for c in &steps {
            writeln!(
                s,
                "{} {} computed={} expected={} {}",
                c.spec,
                c.step,
                c.computed,
                c.expected,
                verdict(c.matched)
            )
            .unwrap();
        }
        s
    };
    Ok(Outcome::new(text, matched))
}

#[derive(Serialize)]
struct ObservationOutput {
    max_t: u32,
    pairs: usize,
    failures: Vec<(u32, u32)>,
    matched: bool,
}

fn observation(cli: &Cli, max_t: u32) -> Result<Outcome> {
    if max_t < 2 {
        return Err(Failure::Usage("--max-t must be at least 2".into()));
    }
    let pairs: Vec<(u32, u32)> = (2..=max_t)
        .flat_map(|t| (1..t).map(move |s| (s, t)))
        .collect();
    let holds = pairs
        .par_iter()
        .map(|&(s, t)| verify_observation(s, t))
        .collect::<nullweight::Result<Vec<bool>>>()?;
    let failures: Vec<(u32, u32)> = pairs
        .iter()
        .zip(&holds)
        .filter(|(_, ok)| !**ok)
        .map(|(p, _)| *p)
        .collect();
    let out = ObservationOutput {
        max_t,
        pairs: pairs.len(),
        matched: failures.is_empty(),
        failures,
    };
    let text = if cli.json {
        to_json(&out, false)?
    } else {
        let mut s = String::new();
        for (ps, pt) in &out.failures {
            writeln!(s, "s={ps} t={pt} MISMATCH").unwrap();
        }
        writeln!(
            s,
            "observation max_t={}: {} of {} pairs equal 1 {}",
            max_t,
            out.pairs - out.failures.len(),
            out.pairs,
            verdict(out.matched)
        )
        .unwrap();
        s
    };
    Ok(Outcome::new(text, out.matched))
}

fn solve_one(cli: &Cli, a: &SolveArgs) -> Result<Outcome> {
    let params = GpParams::new(a.n, a.t)?;
    let lists = match &a.lists {
        Some(path) => read_lists(path)?,
        None => gen_lists(
            params,
            a.seed.unwrap_or(0),
            a.style.unwrap_or(ListStyle::Constant),
        )?,
    };
    let mut report = solve(params, &lists)?;
    if !cli.timing {
        report.millis = 0;
    }
    if let Some(path) = &a.out {
        fs::write(path, to_json(&report.weighting, true)?).map_err(|source| Failure::Write {
            path: path.clone(),
            source,
        })?;
    }
    let text = if cli.json {
        to_json(&report, false)?
    } else {
        solve_text(&report, cli.timing)
    };
    Ok(Outcome::new(text, report.verified))
}

fn solve_text(r: &SolveReport, timing: bool) -> String {
    let mut s = String::new();
    writeln!(s, "P({},{}) case={}", r.n, r.t, r.case).unwrap();
    if let Some(w) = &r.witness {
        writeln!(s, "witness {}", w.monomial).unwrap();
    }
    if let Some(cn) = &r.cn {
        writeln!(
            s,
            "extension: {} steps, {} candidates tried, product {}",
            cn.steps, cn.tried, cn.product
        )
        .unwrap();
    }
    for (z, q) in r.weighting.vertices.iter().chain(&r.weighting.edges) {
        writeln!(s, "{z} = {q}").unwrap();
    }
    writeln!(s, "verified={}", r.verified).unwrap();
    if timing {
        writeln!(s, "millis={}", r.millis).unwrap();
    }
    s
}

#[derive(Serialize)]
struct OracleOutput {
    vertices: usize,
    edges: usize,
    exists: bool,
    weighting: Option<WeightingFile>,
}

fn oracle(cli: &Cli, a: &OracleArgs) -> Result<Outcome> {
    let graph: GraphFile = read_json(&a.graph)?;
    let g = graph.to_graph()?;
    let lists = read_lists(&a.lists)?;
    let mut budget = OracleBudget::default();
    if let Some(b) = a.budget {
        budget = OracleBudget::new(b, budget.max_terms)?;
    }
    let found = brute_force_weighting(&g, &lists, budget)?;
    if let Some(w) = &found {
        if !verify_proper(&g, w)?.proper {
            return Err(Error::Internal("the oracle returned an improper weighting".into()).into());
        }
    }
    let out = OracleOutput {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        exists: found.is_some(),
        weighting: found.as_ref().map(WeightingFile::from),
    };
    let text = if cli.json {
        to_json(&out, false)?
    } else {
        let mut s = String::new();
        writeln!(
            s,
            "{} vertices, {} edges: proper weighting {}",
            out.vertices,
            out.edges,
            if out.exists {
                "exists"
            } else {
                "does not exist"
            }
        )
        .unwrap();
        if let Some(w) = &out.weighting {
            for (z, q) in w.vertices.iter().chain(&w.edges) {
                writeln!(s, "{z} = {q}").unwrap();
            }
        }
        s
    };
    Ok(Outcome::new(text, true))
}

#[derive(Serialize)]
struct SweepRow {
    n: u32,
    t: u32,
    case: Option<CaseTag>,
    runs: usize,
    verified: usize,
    defects: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_defect: Option<String>,
}

#[derive(Serialize)]
struct SweepOutput {
    rows: Vec<SweepRow>,
    runs: usize,
    verified: usize,
    defects: usize,
}

fn sweep(cli: &Cli, a: &SweepArgs) -> Result<Outcome> {
    let styles: Vec<ListStyle> = if a.style.is_empty() {
        ListStyle::ALL.to_vec()
    } else {
        a.style.clone()
    };
    let params = GpParams::all_up_to(a.max_n);
    let jobs: Vec<(GpParams, ListStyle, u64)> = params
        .iter()
        .flat_map(|&p| {
            styles
                .iter()
                .flat_map(move |&st| (0..a.seeds).map(move |seed| (p, st, seed)))
        })
        .collect();
    let results: Vec<std::result::Result<SolveReport, String>> = jobs
        .par_iter()
        .map(|&(p, style, seed)| {
            gen_lists(p, seed, style)
                .and_then(|l| solve(p, &l))
                .map_err(|e| format!("{style} seed {seed}: {e}"))
        })
        .collect();
    let per = styles.len() * a.seeds as usize;
    let rows: Vec<SweepRow> = params
        .iter()
        .zip(results.chunks(per))
        .map(|(p, chunk)| SweepRow {
            n: p.n,
            t: p.t,
            case: chunk.iter().find_map(|r| r.as_ref().ok().map(|r| r.case)),
            runs: chunk.len(),
            verified: chunk
                .iter()
                .filter(|r| r.as_ref().is_ok_and(|r| r.verified))
                .count(),
            defects: chunk.iter().filter(|r| r.is_err()).count(),
            first_defect: chunk.iter().find_map(|r| r.as_ref().err().cloned()),
        })
        .collect();
    let out = SweepOutput {
        runs: results.len(),
        verified: rows.iter().map(|r| r.verified).sum(),
        defects: rows.iter().map(|r| r.defects).sum(),
        rows,
    };
    let text = if cli.json {
        to_json(&out, false)?
    } else {
        let mut s = String::new();
        writeln!(
            s,
            "{:>4} {:>4}  {:<12} {:>5} {:>9} {:>8}",
            "n", "t", "case", "runs", "verified", "defects"
        )
        .unwrap();
        for r in &out.rows {
            let case = r.case.map_or_else(|| "-".to_string(), |c| c.to_string());
            writeln!(
                s,
                "{:>4} {:>4}  {:<12} {:>5} {:>9} {:>8}",
                r.n, r.t, case, r.runs, r.verified, r.defects
            )
            .unwrap();
        }
        for r in out.rows.iter().filter(|r| r.defects > 0) {
            writeln!(
                s,
                "P({},{}): {}",
                r.n,
                r.t,
                r.first_defect.as_deref().unwrap_or("")
            )
            .unwrap();
        }
        writeln!(
            s,
            "total: {} runs, {} verified, {} defects",
            out.runs, out.verified, out.defects
        )
        .unwrap();
        s
    };
    let defect = (out.defects > 0).then(|| {
        let first = out
            .rows
            .iter()
            .find_map(|r| r.first_defect.clone())
            .unwrap_or_default();
        format!(
            "{} of {} runs failed; first: {first}",
            out.defects, out.runs
        )
    });
    Ok(Outcome {
        text,
        ok: true,
        defect,
    })
}

#[derive(Serialize)]
struct BenchRow {
    n: u32,
    t: u32,
    millis: u64,
    max_terms: usize,
    matched: bool,
}

/// Timings are inherently irreproducible; this is the one command whose
/// output varies between runs.
fn bench(cli: &Cli, a: &BenchArgs) -> Result<Outcome> {
    let mut rows = Vec::new();
    for n in 2 * a.t + 2..=a.max_n {
        let start = Instant::now();
        let r = verify_config(ConfigSpec::kind_iii(n, a.t))?;
        rows.push(BenchRow {
            n,
            t: a.t,
            millis: start.elapsed().as_millis() as u64,
            max_terms: r.max_terms,
            matched: r.matched,
        });
    }
    if rows.is_empty() {
        return Err(Failure::Usage(format!(
            "--max-n must be at least {}",
            2 * a.t + 2
        )));
    }
    let ok = rows.iter().all(|r| r.matched);
    let text = if cli.json {
        to_json(&rows, false)?
    } else {
        let mut s = format!(
            "{:>4} {:>4} {:>8} {:>10}\n",
            "n", "t", "millis", "max_terms"
        );
        for r in &rows {
            writeln!(
                s,
                "{:>4} {:>4} {:>8} {:>10} {}",
                r.n,
                r.t,
                r.millis,
                r.max_terms,
                verdict(r.matched)
            )
            .unwrap();
        }
        s
    };
    Ok(Outcome::new(text, ok))
}
