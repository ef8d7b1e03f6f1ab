use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{gen_petersen, Element, GpParams, ListAssignment};
use crate::rational::{int, ratio, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ListStyle {
    /// `{0}` on vertices, `{1,2,3}` on edges.
    Constant,
    /// A random integer per vertex; `a, a+d, a+2d` per edge.
    Arithmetic,
    /// Random rationals with denominators up to 4.
    Random,
}

impl ListStyle {
    pub const ALL: [ListStyle; 3] = [
        ListStyle::Constant,
        ListStyle::Arithmetic,
        ListStyle::Random,
    ];
}

impl fmt::Display for ListStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ListStyle::Constant => "constant",
            ListStyle::Arithmetic => "arithmetic",
            ListStyle::Random => "random",
        })
    }
}

impl FromStr for ListStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" => Ok(ListStyle::Constant),
            "arithmetic" => Ok(ListStyle::Arithmetic),
            "random" => Ok(ListStyle::Random),
            _ => Err(Error::Input(format!("unknown list style {s:?}"))),
        }
    }
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

/// A (1,3) list assignment over `P(n,t)`, a pure function of its arguments.
/// Elements draw from one stream in vertex-then-edge graph order.
pub fn gen_lists(params: GpParams, seed: u64, style: ListStyle) -> Result<ListAssignment> {
    let g = gen_petersen(params)?;
    if style == ListStyle::Constant {
        return Ok(ListAssignment::uniform(
            &g,
            &[int(0)],
            &[int(1), int(2), int(3)],
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lists = ListAssignment::new();
    for z in g.elements() {
        let values = match (style, z) {
            (ListStyle::Arithmetic, Element::Vertex(_)) => vec![int(rng.gen_range(-3..=3))],
            (ListStyle::Arithmetic, Element::Edge(_)) => {
                let a = rng.gen_range(-5..=5);
                let d = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
                vec![int(a), int(a + d), int(a + 2 * d)]
            }
            (_, Element::Vertex(_)) => vec![small_rational(&mut rng)],
            (_, Element::Edge(_)) => {
                let mut seen = BTreeSet::new();
                let mut out = Vec::with_capacity(3);
                while out.len() < 3 {
                    let q = small_rational(&mut rng);
                    if seen.insert(q.clone()) {
                        out.push(q);
                    }
                }
                out
            }
        };
        lists.set(z, values)?;
    }
    Ok(lists)
}
