use std::fmt;

use serde::Serialize;

use super::{Arrow, Groupoid};
use crate::{Error, Result};

/// Default cap on `2^|arrows|` for exhaustive subset enumeration.
pub const DEFAULT_WORK_BOUND: u64 = 1 << 20;

/// A set of arrows on which source and range are both injective.
///
/// Arrows are kept sorted, so equal bisections compare equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Bisection(Vec<Arrow>);

impl Bisection {
    pub fn empty() -> Self {
        Bisection(Vec::new())
    }

    pub fn singleton(x: Arrow) -> Self {
        Bisection(vec![x])
    }

    /// Checks injectivity of source and range on `arrows`.
    pub fn new(g: &Groupoid, mut arrows: Vec<Arrow>) -> Option<Self> {
        arrows.sort_unstable();
        arrows.dedup();
        if arrows.iter().any(|&x| x >= g.len()) || !g.is_bisection(&arrows) {
            return None;
        }
        Some(Bisection(arrows))
    }

    /// The set of all units.
    pub fn units(g: &Groupoid) -> Self {
        Bisection(g.units().to_vec())
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: Arrow) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    /// `s(B)`, as a bisection of units.
    pub fn source_set(&self, g: &Groupoid) -> Bisection {
        let mut v: Vec<_> = self.0.iter().map(|&x| g.source(x)).collect();
        v.sort_unstable();
        Bisection(v)
    }

    /// `r(B)`, as a bisection of units.
    pub fn range_set(&self, g: &Groupoid) -> Bisection {
        let mut v: Vec<_> = self.0.iter().map(|&x| g.range(x)).collect();
        v.sort_unstable();
        Bisection(v)
    }

    pub fn is_unit_subset(&self, g: &Groupoid) -> bool {
        self.0.iter().all(|&x| g.is_unit(x))
    }

    pub fn display<'a>(&'a self, g: &'a Groupoid) -> impl fmt::Display + 'a {
        DisplayBisection(self, g)
    }
}

struct DisplayBisection<'a>(&'a Bisection, &'a Groupoid);

impl fmt::Display for DisplayBisection<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, &x) in self.0.arrows().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(self.1.name(x))?;
        }
        f.write_str("}")
    }
}

impl Groupoid {
    pub fn is_bisection(&self, arrows: &[Arrow]) -> bool {
        let mut src = vec![false; self.len()];
        let mut rng = vec![false; self.len()];
        arrows.iter().all(|&x| {
            !std::mem::replace(&mut src[self.source(x)], true)
                && !std::mem::replace(&mut rng[self.range(x)], true)
        })
    }
}

/// Every bisection of `g`, ordered by size and then lexicographically.
///
/// The empty bisection comes first. Refuses when `2^|arrows|` exceeds
/// `work_bound`.
pub fn enumerate_bisections(g: &Groupoid, work_bound: u64) -> Result<Vec<Bisection>> {
    let n = g.len();
    if n >= 64 || (1u64 << n) > work_bound {
        return Err(Error::WorkBoundExceeded {
            arrows: n,
            bound: work_bound,
        });
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    let mut src = vec![false; n];
    let mut rng = vec![false; n];
    extend(g, 0, &mut current, &mut src, &mut rng, &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

fn extend(
    g: &Groupoid,
    next: Arrow,
    current: &mut Vec<Arrow>,
    src: &mut [bool],
    rng: &mut [bool],
    out: &mut Vec<Bisection>,
) {
    if next == g.len() {
        out.push(Bisection(current.clone()));
        return;
    }
    extend(g, next + 1, current, src, rng, out);
    let (s, r) = (g.source(next), g.range(next));
    if !src[s] && !rng[r] {
        src[s] = true;
        rng[r] = true;
        current.push(next);
        extend(g, next + 1, current, src, rng, out);
        current.pop();
        src[s] = false;
        rng[r] = false;
    }
}

/// `AB = { ab : a ∈ A, b ∈ B, s(a) = r(b) }`.
pub fn bisection_mul(g: &Groupoid, a: &Bisection, b: &Bisection) -> Bisection {
    let mut out: Vec<Arrow> = a
        .arrows()
        .iter()
        .flat_map(|&x| b.arrows().iter().filter_map(move |&y| g.compose(x, y)))
        .collect();
    out.sort_unstable();
    debug_assert!(g.is_bisection(&out));
    Bisection(out)
}

/// `A⁻¹ = { a⁻¹ : a ∈ A }`.
pub fn bisection_inv(g: &Groupoid, a: &Bisection) -> Bisection {
    let mut out: Vec<Arrow> = a.arrows().iter().map(|&x| g.inv(x)).collect();
    out.sort_unstable();
    Bisection(out)
}
