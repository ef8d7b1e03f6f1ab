//! Ordered coefficient extraction.
//!
//! Factors are multiplied into a working polynomial one at a time. After
//! each multiplication every term that can no longer reach the target is
//! dropped, and every variable occurring in no later factor is projected
//! away. Three modes share the same loop:
//!
//! * exact: the coefficient of `J` in the product (all variables pruned);
//! * trace: like exact, but only variables that die inside the current block
//!   are pruned, so the residual after each block is `η` of the prefix;
//! * grid: the product functional `∏ L_x` with `L_x(x^a) = h_{a-k}(S_x)`
//!   (zero for `a < k`), optionally keeping one variable symbolic.

use std::collections::HashMap;

use rustc_hash::FxHashMap;

use super::{Coeff, Monomial, Poly, Var};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExtractStats {
    /// Largest working polynomial seen, in (monomial, excess) states.
    pub max_terms: usize,
}

/// Residuals after each block, and the final coefficient.
#[derive(Clone, Debug)]
pub struct Trace<C> {
    pub residuals: Vec<Poly<C>>,
    pub value: C,
    pub stats: ExtractStats,
}

struct Grid<C> {
    /// `h[x][m] = h_m(S_x)` for `m <= slack`, indexed by variable id.
    h: Vec<Vec<C>>,
    slack: u32,
}

/// Simultaneously live variables the engine can track.
pub const MAX_LIVE_VARS: usize = 32;

/// A working monomial: exponents by slot, plus the grid excess consumed.
/// A slot is reused once its variable has been projected away.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Key {
    e: [u8; MAX_LIVE_VARS],
    ex: u32,
}

/// A live variable as seen by the pruning test at one factor.
struct Live {
    slot: usize,
    var: Var,
    prunable: bool,
    k: u32,
    /// Degree of the variable in the factors after this one.
    rest: u32,
    dies_later: bool,
}

struct Step<C> {
    terms: Vec<(Vec<(usize, u8)>, C)>,
    live: Vec<Live>,
    /// Sum of targets over prunable variables alive after this factor.
    pending: u32,
    /// Degree available to prunable variables after this factor.
    capacity: u32,
    /// `(slot, var)` projected after this factor.
    dies: Vec<(usize, Var)>,
}

struct Engine<C> {
    steps: Vec<Step<C>>,
    /// Target exponent by variable id.
    target: Vec<u32>,
    /// Whether the variable occurs in some factor, by id.
    present: Vec<bool>,
    /// `(slot, var)` still live at the end (only the held variable).
    survivors: Vec<(usize, Var)>,
    grid: Option<Grid<C>>,
    max_terms: Option<usize>,
}

type State<C> = FxHashMap<Key, C>;

impl<C: Coeff> Engine<C> {
    /// `None` when the target is unreachable, so the answer is zero.
    fn new(
        factors: &[Poly<C>],
        target: &Monomial,
        hold: Option<Var>,
        block_ends: &[usize],
        max_terms: Option<usize>,
    ) -> Result<Option<Self>> {
        let nf = factors.len();
        let nv = factors
            .iter()
            .flat_map(|f| f.vars())
            .chain(target.vars())
            .map(|x| x.0 as usize + 1)
            .max()
            .unwrap_or(0);
        // occ[x][p]: degree of x summed over factors p..
        let mut occ: Vec<Vec<u32>> = vec![Vec::new(); nv];
        let mut first = vec![usize::MAX; nv];
        for (p, f) in factors.iter().enumerate() {
            for x in f.vars() {
                let i = x.0 as usize;
                if occ[i].is_empty() {
                    occ[i].resize(nf + 1, 0);
                    first[i] = p;
                }
                occ[i][p] = f.degree_in(x);
            }
        }
        for (x, _) in target.iter() {
            if occ[x.0 as usize].is_empty() {
                return Err(Error::Input(format!(
                    "target variable {x:?} occurs in no factor"
                )));
            }
        }
        let present: Vec<bool> = occ.iter().map(|v| !v.is_empty()).collect();
        let mut death = vec![usize::MAX; nv];
        for (i, v) in occ.iter_mut().enumerate() {
            if !present[i] {
                continue;
            }
            death[i] = (0..nf).rev().find(|&p| v[p] > 0).unwrap();
            for p in (0..nf).rev() {
                v[p] += v[p + 1];
            }
            if v[0] > u8::MAX as u32 {
                return Err(Error::Size(format!(
                    "variable {i} has degree {} in the product",
                    v[0]
                )));
            }
        }
        let mut tgt = vec![0; nv];
        for (x, k) in target.iter() {
            tgt[x.0 as usize] = k;
        }
        if (0..nv).any(|i| present[i] && tgt[i] > occ[i][0]) {
            return Ok(None);
        }
        let is_hold = |i: usize| hold == Some(Var(i as u32));
        // The held variable is never projected.
        let end = |i: usize| if is_hold(i) { nf } else { death[i] };

        let mut order: Vec<usize> = (0..nv).filter(|&i| present[i]).collect();
        order.sort_by_key(|&i| (first[i], i));
        let mut slot_of = vec![usize::MAX; nv];
        let mut busy: Vec<Option<usize>> = vec![None; MAX_LIVE_VARS];
        for &i in &order {
            for b in busy.iter_mut() {
                if b.is_some_and(|j| end(j) < first[i]) {
                    *b = None;
                }
            }
            let s = busy.iter().position(Option::is_none).ok_or_else(|| {
                Error::Size(format!("more than {MAX_LIVE_VARS} variables live at once"))
            })?;
            busy[s] = Some(i);
            slot_of[i] = s;
        }

        let mut horizon = vec![nf.saturating_sub(1); nf];
        let mut start = 0;
        for &end in block_ends {
            for h in horizon.iter_mut().take(end.min(nf)).skip(start) {
                *h = end - 1;
            }
            start = end;
        }
        let degs: Vec<u32> = factors.iter().map(|f| f.degree().unwrap_or(0)).collect();
        let mut steps = Vec::with_capacity(nf);
        for (p, f) in factors.iter().enumerate() {
            let terms = f
                .terms()
                .map(|(m, c)| {
                    (
                        m.iter()
                            .map(|(x, a)| (slot_of[x.0 as usize], a as u8))
                            .collect(),
                        c.clone(),
                    )
                })
                .collect();
            let prunable = |i: usize| !is_hold(i) && death[i] <= horizon[p];
            let mut live = Vec::new();
            let (mut pending, mut dies) = (0, Vec::new());
            for &i in &order {
                if first[i] > p || end(i) < p {
                    continue;
                }
                let (k, rest) = (tgt[i], occ[i][p + 1]);
                live.push(Live {
                    slot: slot_of[i],
                    var: Var(i as u32),
                    prunable: prunable(i),
                    k,
                    rest,
                    dies_later: death[i] > p,
                });
                if prunable(i) && death[i] > p {
                    pending += k;
                }
                if death[i] == p && !is_hold(i) {
                    dies.push((slot_of[i], Var(i as u32)));
                }
            }
            dies.sort_by_key(|&(_, x)| x);
            let capacity = degs[p + 1..=horizon[p]].iter().sum();
            steps.push(Step {
                terms,
                live,
                pending,
                capacity,
                dies,
            });
        }
        let survivors = hold
            .filter(|x| present[x.0 as usize])
            .map(|x| vec![(slot_of[x.0 as usize], x)])
            .unwrap_or_default();
        Ok(Some(Engine {
            steps,
            target: tgt,
            present,
            survivors,
            grid: None,
            max_terms,
        }))
    }

    /// Whether a term after factor `p` can still reach the target.
    fn viable(&self, key: &Key, step: &Step<C>) -> bool {
        let mut excess = key.ex;
        let mut covered = 0;
        for l in &step.live {
            let a = key.e[l.slot] as u32;
            if !l.prunable || a == 0 {
                if l.prunable && l.k > l.rest {
                    return false;
                }
                continue;
            }
            if a > l.k {
                excess += a - l.k;
            } else if l.k - a > l.rest {
                return false;
            }
            if l.dies_later {
                covered += a.min(l.k);
            }
        }
        let budget = self.grid.as_ref().map_or(0, |g| g.slack);
        excess <= budget && step.pending.saturating_sub(covered) <= step.capacity
    }

    fn project(&self, state: State<C>, slot: usize, x: Var) -> State<C> {
        let k = self.target[x.0 as usize];
        let mut out: State<C> =
            FxHashMap::with_capacity_and_hasher(state.len(), Default::default());
        for (mut key, c) in state {
            let a = key.e[slot] as u32;
            let c = match &self.grid {
                None if a == k => c,
                Some(g) if a >= k => {
                    key.ex += a - k;
                    c * &g.h[x.0 as usize][(a - k) as usize]
                }
                _ => continue,
            };
            if c.is_zero() {
                continue;
            }
            key.e[slot] = 0;
            *out.entry(key).or_insert_with(C::zero) += &c;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    fn run(&self, snapshots: &[usize]) -> Result<(Vec<Poly<C>>, Poly<C>, ExtractStats)> {
        let mut state: State<C> = FxHashMap::default();
        state.insert(
            Key {
                e: [0; MAX_LIVE_VARS],
                ex: 0,
            },
            C::one(),
        );
        let mut stats = ExtractStats { max_terms: 1 };
        let mut residuals = Vec::new();
        for (p, step) in self.steps.iter().enumerate() {
            let mut next: State<C> =
                FxHashMap::with_capacity_and_hasher(state.len() * 2, Default::default());
            for (key, c) in &state {
                for (pairs, fc) in &step.terms {
                    let mut k2 = *key;
                    for &(s, a) in pairs {
                        k2.e[s] += a;
                    }
                    if !self.viable(&k2, step) {
                        continue;
                    }
                    *next.entry(k2).or_insert_with(C::zero) += &(c.clone() * fc);
                }
            }
            next.retain(|_, c| !c.is_zero());
            stats.max_terms = stats.max_terms.max(next.len());
            if let Some(cap) = self.max_terms {
                if next.len() > cap {
                    return Err(Error::Size(format!(
                        "working polynomial reached {} terms (cap {cap}) at factor {p}",
                        next.len()
                    )));
                }
            }
            state = next;
            for &(slot, x) in &step.dies {
                state = self.project(state, slot, x);
            }
            if snapshots.contains(&(p + 1)) {
                let alive: Vec<(usize, Var)> = step
                    .live
                    .iter()
                    .filter(|l| l.dies_later || self.survivors.iter().any(|s| s.1 == l.var))
                    .map(|l| (l.slot, l.var))
                    .collect();
                residuals.push(collapse(&state, &alive));
            }
            if state.is_empty() {
                residuals.resize(snapshots.len(), Poly::zero());
                break;
            }
        }
        Ok((residuals, collapse(&state, &self.survivors), stats))
    }
}

fn collapse<C: Coeff>(state: &State<C>, alive: &[(usize, Var)]) -> Poly<C> {
    Poly::from_terms(state.iter().map(|(key, c)| {
        let m = Monomial::from_pairs(
            alive
                .iter()
                .map(|&(s, x)| (x, key.e[s] as u32))
                .filter(|&(_, a)| a > 0),
        );
        (m, c.clone())
    }))
}

/// Coefficient of `target` in the product of `factors`. Variables absent
/// from `target` must end with exponent zero, so the result is a constant.
pub fn extract_ordered<C: Coeff>(factors: &[Poly<C>], target: &Monomial) -> Result<C> {
    extract_ordered_stats(factors, target, None).map(|r| r.0)
}

/// [`extract_ordered`] with frontier statistics and an optional term cap.
pub fn extract_ordered_stats<C: Coeff>(
    factors: &[Poly<C>],
    target: &Monomial,
    max_terms: Option<usize>,
) -> Result<(C, ExtractStats)> {
    let Some(engine) = Engine::new(factors, target, None, &[], max_terms)? else {
        return Ok((C::zero(), ExtractStats::default()));
    };
    let (_, out, stats) = engine.run(&[])?;
    Ok((out.constant_term(), stats))
}

/// Extraction that also reports the residual after each block. Blocks are
/// given by their exclusive end indices; a variable is pruned only inside
/// the block where it dies, so each residual equals `η` of the prefix product
/// with respect to the target restricted to the variables already dead.
pub fn extract_trace<C: Coeff>(
    factors: &[Poly<C>],
    target: &Monomial,
    block_ends: &[usize],
    max_terms: Option<usize>,
) -> Result<Trace<C>> {
    if block_ends.windows(2).any(|w| w[0] >= w[1])
        || block_ends.last().is_some_and(|&e| e > factors.len())
    {
        return Err(Error::Input(
            "block ends must increase and stay within the factor list".into(),
        ));
    }
    let Some(engine) = Engine::new(factors, target, None, block_ends, max_terms)? else {
        return Ok(Trace {
            residuals: vec![Poly::zero(); block_ends.len()],
            value: C::zero(),
            stats: ExtractStats::default(),
        });
    };
    let (residuals, out, stats) = engine.run(block_ends)?;
    Ok(Trace {
        residuals,
        value: out.constant_term(),
        stats,
    })
}

/// `∏_{x ≠ hold} L_x` applied to the product, where `L_x(x^a) = 0` for
/// `a < k_x` and `h_{a-k_x}(S_x)` otherwise, `S_x` being the first `k_x + 1`
/// entries of `grid[x]`. The result is a polynomial in `hold` alone; the
/// target exponent of `hold` is ignored.
///
/// `L_x(f) = Σ_{s ∈ S_x} f(s) / ∏_{s' ≠ s}(s - s')`, so a nonzero value
/// certifies a point of the grid where the product does not vanish; when
/// the product's degree equals `deg(target)` the value is the coefficient of
/// `target`.
pub fn grid_functional<C: Coeff>(
    factors: &[Poly<C>],
    target: &Monomial,
    grid: &HashMap<Var, Vec<C>>,
    hold: Option<Var>,
    max_terms: Option<usize>,
) -> Result<(Poly<C>, ExtractStats)> {
    let Some(mut engine) = Engine::new(factors, target, hold, &[], max_terms)? else {
        return Ok((Poly::zero(), ExtractStats::default()));
    };
    let total: u32 = factors.iter().map(|f| f.degree().unwrap_or(0)).sum();
    let need: u32 = target
        .iter()
        .filter(|(x, _)| Some(*x) != hold)
        .map(|(_, k)| k)
        .sum();
    let Some(slack) = total.checked_sub(need) else {
        return Ok((Poly::zero(), ExtractStats::default()));
    };
    let mut h = vec![Vec::new(); engine.target.len()];
    for (i, &k) in engine.target.iter().enumerate() {
        let x = Var(i as u32);
        if Some(x) == hold || !engine.present[i] {
            continue;
        }
        let values = grid
            .get(&x)
            .filter(|s| s.len() > k as usize)
            .ok_or_else(|| {
                Error::Input(format!("grid for {x:?} needs at least {} values", k + 1))
            })?;
        h[i] = complete_homogeneous(&values[..=k as usize], slack);
    }
    engine.grid = Some(Grid { h, slack });
    let (_, out, stats) = engine.run(&[])?;
    Ok((out, stats))
}

/// `[h_0(s), .., h_max(s)]`.
fn complete_homogeneous<C: Coeff>(s: &[C], max: u32) -> Vec<C> {
    let mut h = vec![C::zero(); max as usize + 1];
    h[0] = C::one();
    for v in s {
        for m in 1..h.len() {
            let add = h[m - 1].clone() * v;
            h[m] += &add;
        }
    }
    h
}
