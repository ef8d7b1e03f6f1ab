//! The ten acceptance criteria, each at its stated tolerance. Prints one
//! PASS/FAIL line per criterion and exits nonzero if any fails.

use std::collections::{BTreeSet, HashSet};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use nullweight::graph::{
    components, gen_petersen, structural_predicates, verify_proper, GpParams, ListAssignment,
    TotalWeighting,
};
use nullweight::lemma::{recursion_checks, verify_config, verify_observation, ConfigSpec};
use nullweight::oracle::{brute_force_weighting, naive_expand, OracleBudget};
use nullweight::poly::{extract_ordered, Monomial, Poly, Var, Vars};
use nullweight::rational::int;
use nullweight::solver::{choose_case, gen_lists, solve, CaseTag, ListStyle, SolveReport};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn sign(e: u32) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// The closed form of the kind III coefficient, transcribed independently
/// of the library's table.
fn closed_form(n: u32, t: u32) -> i64 {
    match (t % 3, t % 6, n % 3) {
        (0, _, _) => -1 + 2 * sign(t),
        (1, _, _) => 1 - 2 * sign(t),
        (_, 2, _) => -4,
        (_, _, 2) => 2 * sign(n) - 4,
        _ => sign(n - 1) - 4,
    }
}

fn c1_observation() -> Verdict {
    let start = Instant::now();
    let pairs: Vec<(u32, u32)> = (2..=25).flat_map(|t| (1..t).map(move |s| (s, t))).collect();
    let bad: Vec<_> = pairs
        .iter()
        .filter(|&&(s, t)| !verify_observation(s, t).unwrap())
        .collect();
    let took = start.elapsed();
    let pass = bad.is_empty() && took < Duration::from_secs(5);
    verdict(
        pass,
        format!(
            "{}/{} pairs with 1 <= s < t <= 25 give 1 in {} (limit 5s); failures {bad:?}",
            pairs.len() - bad.len(),
            pairs.len(),
            secs(took)
        ),
    )
}

fn c2_kind_i() -> Verdict {
    let bad: Vec<(u32, String)> = (5..=16)
        .map(|n| (n, verify_config(ConfigSpec::kind_i(n)).unwrap().computed))
        .filter(|(_, c)| c != "-3")
        .collect();
    verdict(
        bad.is_empty(),
        format!("coefficient -3 for n in [5,16]; deviations {bad:?}"),
    )
}

fn c3_kind_ii() -> Verdict {
    let r = verify_config(ConfigSpec::kind_ii()).unwrap();
    verdict(
        r.computed == "-8",
        format!("computed {} (expected -8)", r.computed),
    )
}

fn c4_kind_iii_table() -> Verdict {
    let start = Instant::now();
    let specs: Vec<(u32, u32)> = (3..=9)
        .flat_map(|t| (2 * t + 2..=2 * t + 10).map(move |n| (n, t)))
        .collect();
    let mut classes = BTreeSet::new();
    let mut bad = Vec::new();
    for &(n, t) in &specs {
        let computed = verify_config(ConfigSpec::kind_iii(n, t)).unwrap().computed;
        let want = closed_form(n, t);
        if computed != want.to_string() {
            bad.push((n, t, computed, want));
        }
        let class = match t % 3 {
            0 => "t=0(3)",
            1 => "t=1(3)",
            _ if t % 6 == 2 => "t=2(6)",
            _ => "t=5(6)",
        };
        classes.insert((class, n % 3));
    }
    let took = start.elapsed();
    // Every t class with all three n residues.
    let pass = bad.is_empty() && classes.len() == 12 && took < Duration::from_secs(60);
    verdict(
        pass,
        format!(
            "{} instances, {} (t class, n mod 3) cells, {} (limit 60s); mismatches {bad:?}",
            specs.len(),
            classes.len(),
            secs(took)
        ),
    )
}

fn c5_recursion() -> Verdict {
    // (20,8) adds the t = 2 (mod 6) terminal case to the four required pairs.
    let pairs = [(12, 5), (14, 5), (10, 3), (11, 4), (20, 8)];
    let mut total = 0;
    let mut bad = Vec::new();
    let mut chain_classes = BTreeSet::new();
    for (n, t) in pairs {
        for c in recursion_checks(ConfigSpec::kind_iii(n, t)).unwrap() {
            total += 1;
            if let Some(i) = c
                .step
                .strip_prefix("i=")
                .and_then(|i| i.parse::<u32>().ok())
            {
                if i + 1 < t {
                    chain_classes.insert(i % 3);
                }
            }
            if !c.matched {
                bad.push(format!("({n},{t}) {}", c.step));
            }
        }
    }
    let pass = bad.is_empty() && chain_classes.len() == 3;
    verdict(pass, format!("{total} residual identities over {pairs:?}, chain classes {chain_classes:?}; mismatches {bad:?}"))
}

fn random_factors(rng: &mut ChaCha8Rng, vars: &[Var]) -> Vec<Poly<BigInt>> {
    let count = rng.gen_range(1..=12);
    (0..count)
        .map(|_| {
            let terms: Vec<(Var, BigInt)> = (0..rng.gen_range(1..=3))
                .map(|_| {
                    (
                        vars[rng.gen_range(0..vars.len())],
                        BigInt::from(rng.gen_range(-3..=3)),
                    )
                })
                .collect();
            Poly::linear(terms, BigInt::from(rng.gen_range(-2..=2)))
        })
        .collect()
}

fn c6_extraction_oracle() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut checked, mut nonzero) = (0, 0);
    let mut bad = Vec::new();
    for case in 0..500 {
        let mut names = Vars::new();
        let k = rng.gen_range(1..=8);
        let xs: Vec<Var> = (0..k).map(|i| names.intern(&format!("x{i}"))).collect();
        let fs = random_factors(&mut rng, &xs);
        let full = naive_expand(&fs, OracleBudget::default()).unwrap();
        let present: Vec<Var> = fs
            .iter()
            .flat_map(|f| f.vars())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let degree_of = |x: Var| fs.iter().filter(|f| f.vars().contains(&x)).count() as u32;
        let mut terms: Vec<Monomial> = full.terms().map(|(m, _)| m.clone()).collect();
        terms.sort();
        let mut targets = Vec::new();
        for _ in 0..2 {
            if !terms.is_empty() {
                targets.push(terms[rng.gen_range(0..terms.len())].clone());
            }
        }
        targets.push(Monomial::from_pairs(
            present
                .iter()
                .map(|&x| (x, rng.gen_range(0..=degree_of(x).min(2)))),
        ));
        for j in targets {
            let want = full.coefficient_of(&j).coeff(&Monomial::one());
            let got = extract_ordered(&fs, &j).unwrap();
            checked += 1;
            nonzero += usize::from(!want.is_zero());
            if got != want {
                bad.push(case);
            }
        }
    }
    verdict(
        bad.is_empty(),
        format!(
            "500 factor lists, {checked} targets ({nonzero} nonzero); disagreeing lists {bad:?}"
        ),
    )
}

/// One run of the end-to-end sweep, checked outside the solver.
struct RunCheck {
    key: (GpParams, ListStyle, u64),
    result: Result<SolveReport, String>,
    admissible: bool,
    proper: bool,
}

fn sweep_runs() -> Vec<RunCheck> {
    let jobs: Vec<(GpParams, ListStyle, u64)> = GpParams::all_up_to(14)
        .into_iter()
        .flat_map(|p| {
            ListStyle::ALL
                .into_iter()
                .flat_map(move |s| (0..25).map(move |seed| (p, s, seed)))
        })
        .collect();
    jobs.into_par_iter()
        .map(|key @ (p, style, seed)| {
            let lists = gen_lists(p, seed, style).unwrap();
            let g = gen_petersen(p).unwrap();
            match solve(p, &lists) {
                Ok(report) => {
                    let w = TotalWeighting::try_from(&report.weighting).unwrap();
                    let proper = verify_proper(&g, &w).is_ok_and(|r| r.proper);
                    RunCheck {
                        key,
                        admissible: lists.admits(&g, &w),
                        proper,
                        result: Ok(report),
                    }
                }
                Err(e) => RunCheck {
                    key,
                    result: Err(e.to_string()),
                    admissible: false,
                    proper: false,
                },
            }
        })
        .collect()
}

fn c7_end_to_end(runs: &[RunCheck], took: Duration) -> Verdict {
    let failed: Vec<String> = runs
        .iter()
        .filter(|r| !(r.result.is_ok() && r.admissible && r.proper))
        .map(|r| {
            let (p, s, seed) = r.key;
            format!(
                "P({},{}) {s} seed {seed}: {}",
                p.n,
                p.t,
                r.result
                    .as_ref()
                    .err()
                    .map_or("invalid weighting", String::as_str)
            )
        })
        .collect();
    let pairs = runs.iter().map(|r| r.key.0).collect::<BTreeSet<_>>().len();
    verdict(
        failed.is_empty(),
        format!(
            "{} runs over {pairs} (n,t) pairs with n <= 14 in {}; failures {failed:?}",
            runs.len(),
            secs(took)
        ),
    )
}

fn c8_oracle_agreement() -> Verdict {
    let start = Instant::now();
    // 3^21 combinations for P(7,3) exceed the default budget.
    let budget = OracleBudget::new(20_000_000_000, 1_000_000).unwrap();
    let mut rows = Vec::new();
    let mut pass = true;
    for (n, t) in [(4, 2), (5, 1), (6, 2), (6, 3), (7, 3)] {
        let p = GpParams::new(n, t).unwrap();
        let g = gen_petersen(p).unwrap();
        let lists = ListAssignment::uniform(&g, &[int(0)], &[int(1), int(2), int(3)]);
        let brute = brute_force_weighting(&g, &lists, budget).unwrap();
        let brute_ok = brute
            .as_ref()
            .is_none_or(|w| verify_proper(&g, w).unwrap().proper);
        let solved = solve(p, &lists).is_ok();
        pass &= brute_ok && brute.is_some() == solved;
        rows.push(format!(
            "P({n},{t}) oracle={} solve={solved}",
            brute.is_some()
        ));
    }
    let took = start.elapsed();
    pass &= took <= Duration::from_secs(600);
    verdict(
        pass,
        format!("{} in {} (limit 600s)", rows.join(", "), secs(took)),
    )
}

fn c9_cn_soundness(runs: &[RunCheck]) -> Verdict {
    let mut extensions = 0;
    let mut steps = 0;
    let mut bad = Vec::new();
    for r in runs {
        let Ok(report) = &r.result else {
            bad.push(format!("{:?}: no report", r.key));
            continue;
        };
        match (&report.cn, report.case) {
            (None, CaseTag::NEq2T) => {}
            (None, tag) => bad.push(format!("{:?}: {tag} without an extension", r.key)),
            (Some(cn), _) => {
                extensions += 1;
                steps += cn.steps;
                if !cn.all_residuals_nonzero || !cn.product_nonzero {
                    bad.push(format!(
                        "{:?}: residuals {} product {}",
                        r.key, cn.all_residuals_nonzero, cn.product
                    ));
                }
            }
        }
    }
    verdict(bad.is_empty(), format!("{extensions} extensions, {steps} fixing steps, every residual and final product nonzero; violations {bad:?}"))
}

fn c10_case_partition() -> Verdict {
    let mut bad = Vec::new();
    let params = GpParams::all_up_to(40);
    for &p in &params {
        let tags = CaseTag::matching(p);
        if tags.len() != 1 {
            bad.push(format!("P({},{}) tags {tags:?}", p.n, p.t));
            continue;
        }
        let plan = choose_case(p).unwrap();
        let eh: HashSet<_> = plan.h.edges().iter().collect();
        let eg: HashSet<_> = plan.gprime.edges().iter().collect();
        let all: HashSet<_> = plan.g.edges().iter().collect();
        let partition =
            eh.is_disjoint(&eg) && eh.union(&eg).copied().collect::<HashSet<_>>() == all;
        let sp = structural_predicates(&plan.gprime);
        let connected = components(&plan.gprime).len() == 1;
        let claim = match plan.tag {
            CaseTag::T1 => sp.is_forest,
            CaseTag::T2 if p.n <= 6 => sp.is_forest,
            CaseTag::T2 | CaseTag::T3NEq2T1 => connected && !sp.is_bipartite && sp.degeneracy == 2,
            CaseTag::T3NGe2T2 => sp.components_at_most_unicyclic,
            CaseTag::NEq2T => eh.is_empty() && sp.degeneracy <= 3,
        };
        if !partition || !claim {
            bad.push(format!(
                "P({},{}) {} partition={partition} claim={claim}",
                p.n, p.t, plan.tag
            ));
        }
    }
    verdict(
        bad.is_empty(),
        format!(
            "{} (n,t) pairs with n <= 40; violations {bad:?}",
            params.len()
        ),
    )
}

fn main() {
    let mut results: Vec<(u32, &str, Verdict)> = vec![
        (1, "observation", c1_observation()),
        (2, "kind I coefficient", c2_kind_i()),
        (3, "kind II coefficient", c3_kind_ii()),
        (4, "kind III table", c4_kind_iii_table()),
        (5, "intermediate recursion", c5_recursion()),
        (6, "extraction oracle", c6_extraction_oracle()),
    ];
    let start = Instant::now();
    let runs = sweep_runs();
    let took = start.elapsed();
    results.push((7, "end-to-end solving", c7_end_to_end(&runs, took)));
    results.push((8, "oracle agreement", c8_oracle_agreement()));
    results.push((9, "constructive CN soundness", c9_cn_soundness(&runs)));
    results.push((10, "case partition", c10_case_partition()));
    results.sort_by_key(|r| r.0);

    let mut failed = 0;
    for (k, name, v) in &results {
        println!(
            "criterion {k:>2} {} {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
        failed += usize::from(!v.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
