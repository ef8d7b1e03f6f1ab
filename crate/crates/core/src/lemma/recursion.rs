//! Closed forms for the kind III residuals, compared against the residuals
//! the extraction engine produces block by block.

use num_bigint::BigInt;
use serde::Serialize;

use super::{build_config, Config, ConfigSpec, Kind};
use crate::error::{Error, Result};
use crate::poly::{extract_trace, Poly, Trace};

/// Sign `(-1)^e`.
fn sgn(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `Σ c · ∏ y_idx` over `(c, indices)`.
fn form(cfg: &Config, terms: &[(i64, &[i64])]) -> Poly<BigInt> {
    let mut out = Poly::zero();
    for &(c, idx) in terms {
        let p = idx.iter().fold(Poly::constant(BigInt::from(c)), |acc, &i| {
            &acc * &cfg.y_poly(i)
        });
        out = &out + &p;
    }
    out
}

fn q_star(cfg: &Config) -> Poly<BigInt> {
    let (n, t) = (cfg.spec.n as i64, cfg.spec.t as i64);
    form(
        cfg,
        &[
            (-1, &[n, n]),
            (-1, &[n - 1, t - 1]),
            (-1, &[n, t - 1]),
            (-1, &[n - 1, t]),
            (1, &[n, t]),
            (-1, &[t, t]),
            (-2, &[n, t + 2]),
            (2, &[t, t + 2]),
            (-1, &[t + 2, t + 2]),
        ],
    )
}

/// Residual after `P_i` for `i` in `[1, t-2]`, by the class of `i` mod 3.
fn chain_form(cfg: &Config, i: i64) -> Poly<BigInt> {
    let (n, t) = (cfg.spec.n as i64, cfg.spec.t as i64);
    let (a, b, s) = (i + 1, i + 2, sgn(i));
    let body = match i.rem_euclid(3) {
        1 => form(
            cfg,
            &[
                (-1, &[a, a]),
                (-2 * s, &[a, n]),
                (2 * s, &[a, t]),
                (-s, &[a, t + 2]),
                (s, &[a, t + 3]),
                (s, &[b, t + 2]),
                (s, &[b, t + 3]),
            ],
        ),
        2 => form(
            cfg,
            &[
                (1, &[a, b]),
                (2 * s, &[a, n]),
                (-2 * s, &[a, t]),
                (-2 * s, &[a, t + 3]),
                (2 * s, &[b, t]),
                (-2 * s, &[b, n]),
                (-s, &[b, t + 2]),
                (s, &[b, t + 3]),
            ],
        ),
        _ => form(
            cfg,
            &[
                (1, &[a, a]),
                (-1, &[a, b]),
                (s, &[a, t + 2]),
                (s, &[a, t + 3]),
                (2 * s, &[b, n]),
                (-2 * s, &[b, t]),
                (-2 * s, &[b, t + 3]),
            ],
        ),
    };
    &body + &q_star(cfg)
}

/// Residual after `P_{t-1}`.
fn terminal_form(cfg: &Config) -> Poly<BigInt> {
    let (n, t) = (cfg.spec.n as i64, cfg.spec.t as i64);
    match (t % 3, t % 6) {
        (0, _) => form(cfg, &[(-1 + 2 * sgn(t), &[])]),
        (1, _) => form(cfg, &[(1 - 2 * sgn(t), &[])]),
        (_, 2) => form(cfg, &[(-4, &[])]),
        _ => form(
            cfg,
            &[(-2, &[n - 1]), (-2, &[n]), (1, &[t + 2]), (1, &[t + 3])],
        ),
    }
}

/// Residual after `P_{t+s}` when `t ≡ 5 (mod 6)`.
fn tail_form(cfg: &Config, s: i64) -> Poly<BigInt> {
    let (n, t) = (cfg.spec.n as i64, cfg.spec.t as i64);
    let (a, b) = (t + s + 1, t + s + 2);
    let q0: [(i64, &[i64]); 2] = [(-2, &[n - 1]), (-2, &[n])];
    let tail = match s.rem_euclid(3) {
        1 => [(sgn(s + 1), a), (sgn(s + 1), b)],
        2 => [(2 * sgn(s), a), (-sgn(s), b)],
        _ => [(sgn(s + 1), a), (-2 * sgn(s + 1), b)],
    };
    let ia = [tail[0].1];
    let ib = [tail[1].1];
    form(cfg, &[q0[0], q0[1], (tail[0].0, &ia), (tail[1].0, &ib)])
}

/// Residual after `P_{n-2}` when `t ≡ 5 (mod 6)`, by `n mod 3`.
fn n_minus_2_form(cfg: &Config) -> Poly<BigInt> {
    let n = cfg.spec.n as i64;
    match n % 3 {
        2 => form(cfg, &[(sgn(n) - 2, &[n - 1]), (sgn(n) - 2, &[n])]),
        0 => form(
            cfg,
            &[(2 * (sgn(n - 1) - 1), &[n - 1]), (-(2 + sgn(n - 1)), &[n])],
        ),
        _ => form(cfg, &[(sgn(n) - 2, &[n - 1]), (-2 * (1 + sgn(n)), &[n])]),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecursionCheck {
    pub spec: ConfigSpec,
    /// `"i=3"`, `"s=2"` or `"n-2"`.
    pub step: String,
    pub computed: String,
    pub expected: String,
    pub matched: bool,
}

fn kind_iii(spec: ConfigSpec) -> Result<Config> {
    if spec.kind != Kind::III {
        return Err(Error::Param(
            "recursion checks apply to kind III only".into(),
        ));
    }
    build_config(spec)
}

/// Residual after every block (`P_1`, `P_2`, .., `P_{t-1}`, `P_{t+2}`, ..).
pub fn recursion_trace(cfg: &Config) -> Result<Trace<BigInt>> {
    extract_trace(&cfg.factors, &cfg.witness.monomial, &cfg.block_ends, None)
}

fn check(
    cfg: &Config,
    step: String,
    computed: &Poly<BigInt>,
    expected: &Poly<BigInt>,
) -> RecursionCheck {
    RecursionCheck {
        spec: cfg.spec,
        step,
        computed: computed.display(&cfg.ctx.vars).to_string(),
        expected: expected.display(&cfg.ctx.vars).to_string(),
        matched: computed == expected,
    }
}

/// Compares the residual after `P_i`, `i` in `[1, t-1]`, with its closed
/// form (the general classes for `i <= t-2`, the terminal display for
/// `i = t-1`).
pub fn verify_recursion(spec: ConfigSpec, i: u32) -> Result<RecursionCheck> {
    let cfg = kind_iii(spec)?;
    if i == 0 || i >= spec.t {
        return Err(Error::Param(format!(
            "step {i} outside [1, {}]",
            spec.t - 1
        )));
    }
    let trace = recursion_trace(&cfg)?;
    let expected = if i + 1 == spec.t {
        terminal_form(&cfg)
    } else {
        chain_form(&cfg, i as i64)
    };
    Ok(check(
        &cfg,
        format!("i={i}"),
        &trace.residuals[i as usize - 1],
        &expected,
    ))
}

/// A step of the `t ≡ 5 (mod 6)` tail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailStep {
    /// Residual after `P_{t+s}` (`s = 1` is the residual after `P_{t-1}`).
    S(u32),
    /// The residual after `P_{n-2}` in its `n mod 3` form.
    NMinus2,
}

fn tail_residual_index(spec: ConfigSpec, s: u32) -> Option<usize> {
    // P_1..P_{t-1} occupy blocks 0..t-2; P_{t+s} for s >= 2 follows.
    let idx = spec.t as usize + s as usize - 3;
    (s >= 1 && spec.t + s <= spec.n - 2).then_some(idx)
}

pub fn verify_tail(spec: ConfigSpec, step: TailStep) -> Result<RecursionCheck> {
    let cfg = kind_iii(spec)?;
    if spec.t % 6 != 5 {
        return Err(Error::Param(
            "the tail recursion applies to t ≡ 5 (mod 6)".into(),
        ));
    }
    let trace = recursion_trace(&cfg)?;
    let (label, s) = match step {
        TailStep::S(s) => (format!("s={s}"), s),
        TailStep::NMinus2 => ("n-2".to_string(), spec.n - spec.t - 2),
    };
    let idx = tail_residual_index(spec, s)
        .ok_or_else(|| Error::Param(format!("no block P_(t+{s}) for n={} t={}", spec.n, spec.t)))?;
    let expected = match step {
        TailStep::S(s) => tail_form(&cfg, s as i64),
        TailStep::NMinus2 => n_minus_2_form(&cfg),
    };
    Ok(check(&cfg, label, &trace.residuals[idx], &expected))
}

/// Every step check from one trace: `i` in `[1, t-1]`, then for
/// `t ≡ 5 (mod 6)` the tail `s` in `[2, n-t-2]` and the `n-2` form.
pub fn recursion_checks(spec: ConfigSpec) -> Result<Vec<RecursionCheck>> {
    let cfg = kind_iii(spec)?;
    let trace = recursion_trace(&cfg)?;
    let mut out = Vec::new();
    for i in 1..spec.t {
        let expected = if i + 1 == spec.t {
            terminal_form(&cfg)
        } else {
            chain_form(&cfg, i as i64)
        };
        out.push(check(
            &cfg,
            format!("i={i}"),
            &trace.residuals[i as usize - 1],
            &expected,
        ));
    }
    if spec.t % 6 == 5 {
        let last = spec.n - spec.t - 2;
        for s in 2..=last {
            let idx = tail_residual_index(spec, s).expect("s <= n-t-2 has a block");
            out.push(check(
                &cfg,
                format!("s={s}"),
                &trace.residuals[idx],
                &tail_form(&cfg, s as i64),
            ));
        }
        let idx = tail_residual_index(spec, last).expect("n-t-2 has a block");
        out.push(check(
            &cfg,
            "n-2".into(),
            &trace.residuals[idx],
            &n_minus_2_form(&cfg),
        ));
    }
    Ok(out)
}

/// The tail index range: the largest `hi` such that the closed form holds for
/// every `s` in `[2, hi]`, next to the stated bound `n - t + 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailRange {
    pub derived_hi: u32,
    pub stated_hi: u32,
    /// Steps in the stated range for which no block exists.
    pub beyond_last_block: Vec<u32>,
}

pub fn tail_range(spec: ConfigSpec) -> Result<TailRange> {
    let cfg = kind_iii(spec)?;
    if spec.t % 6 != 5 {
        return Err(Error::Param(
            "the tail recursion applies to t ≡ 5 (mod 6)".into(),
        ));
    }
    let trace = recursion_trace(&cfg)?;
    let stated_hi = spec.n - spec.t + 2;
    let mut derived_hi = 1;
    let mut beyond = Vec::new();
    for s in 2..=stated_hi {
        match tail_residual_index(spec, s) {
            Some(idx)
                if derived_hi + 1 == s && trace.residuals[idx] == tail_form(&cfg, s as i64) =>
            {
                derived_hi = s
            }
            Some(_) => {}
            None => beyond.push(s),
        }
    }
    Ok(TailRange {
        derived_hi,
        stated_hi,
        beyond_last_block: beyond,
    })
}
