//! Finite groupoids with dense composition tables.
//!
//! Arrows are integer ids `0..n`. Units are arrows too: `source` and `range`
//! map every arrow to a unit arrow, and `compose(x, y)` is defined exactly
//! when `source(x) == range(y)`.

mod bisection;
mod build;
mod iso;
mod json;

use std::fmt;

use serde::Serialize;

use crate::{Error, Result};

pub use bisection::{
    bisection_inv, bisection_mul, enumerate_bisections, Bisection, DEFAULT_WORK_BOUND,
};
pub use build::{
    action_groupoid, disjoint_union, group_cyclic, group_from_table, group_klein, group_symmetric,
    pair,
};
pub use iso::{groupoid_isomorphic, is_isomorphism, DEFAULT_SEARCH_BUDGET};
pub use json::GroupoidDoc;

pub type Arrow = usize;

/// Raw tables of a (not yet validated) groupoid.
#[derive(Clone, Debug)]
pub struct GroupoidTables {
    pub names: Vec<String>,
    pub units: Vec<Arrow>,
    pub source: Vec<Arrow>,
    pub range: Vec<Arrow>,
    /// Row-major `n x n` table; `compose[x * n + y]` is `x·y`.
    pub compose: Vec<Option<Arrow>>,
    pub inv: Vec<Arrow>,
}

#[derive(Clone, Debug)]
pub struct Groupoid {
    names: Vec<String>,
    units: Vec<Arrow>,
    is_unit: Vec<bool>,
    source: Vec<Arrow>,
    range: Vec<Arrow>,
    compose: Vec<Option<Arrow>>,
    inv: Vec<Arrow>,
    // Indexed by arrow id; empty for non-units.
    source_fibers: Vec<Vec<Arrow>>,
    range_fibers: Vec<Vec<Arrow>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Axiom {
    UnitNotFixed,
    SourceNotUnit,
    RangeNotUnit,
    ComposableUndefined,
    ComposedNotComposable,
    ComposeSource,
    ComposeRange,
    LeftUnit,
    RightUnit,
    Associativity,
    RightInverse,
    LeftInverse,
    InverseNotInvolution,
    InverseMismatch,
}

impl Axiom {
    pub fn describe(self) -> &'static str {
        match self {
            Axiom::UnitNotFixed => "s(u) ≠ u or r(u) ≠ u for a unit",
            Axiom::SourceNotUnit => "source is not a unit",
            Axiom::RangeNotUnit => "range is not a unit",
            Axiom::ComposableUndefined => "x·y undefined although s(x) = r(y)",
            Axiom::ComposedNotComposable => "x·y defined although s(x) ≠ r(y)",
            Axiom::ComposeSource => "s(xy) ≠ s(y)",
            Axiom::ComposeRange => "r(xy) ≠ r(x)",
            Axiom::LeftUnit => "r(x)·x ≠ x",
            Axiom::RightUnit => "x·s(x) ≠ x",
            Axiom::Associativity => "(xy)z ≠ x(yz)",
            Axiom::RightInverse => "x·inv ≠ range",
            Axiom::LeftInverse => "inv·x ≠ source",
            Axiom::InverseNotInvolution => "inv(inv(x)) ≠ x",
            Axiom::InverseMismatch => "supplied inverse differs from derived inverse",
        }
    }
}

/// One failed axiom together with the arrows that witness it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub arrows: Vec<Arrow>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (arrows {:?})", self.axiom.describe(), self.arrows)
    }
}

impl Groupoid {
    /// Builds a groupoid from tables without checking the axioms.
    ///
    /// Only the shapes of the tables are checked. Use [`Groupoid::new`] unless
    /// the result is going to be passed to [`Groupoid::validate`] explicitly.
    pub fn from_tables_unchecked(t: GroupoidTables) -> Result<Self> {
        let n = t.names.len();
        let shape_ok = t.source.len() == n
            && t.range.len() == n
            && t.inv.len() == n
            && t.compose.len() == n * n;
        if !shape_ok {
            return Err(Error::Malformed(format!(
                "table sizes do not match {n} arrows"
            )));
        }
        let in_range = |a: &Arrow| *a < n;
        let ids_ok = t.units.iter().all(in_range)
            && t.source.iter().all(in_range)
            && t.range.iter().all(in_range)
            && t.inv.iter().all(in_range)
            && t.compose.iter().flatten().all(in_range);
        if !ids_ok {
            return Err(Error::Malformed("arrow id out of range".into()));
        }
        let mut is_unit = vec![false; n];
        for &u in &t.units {
            if is_unit[u] {
                return Err(Error::Malformed(format!("unit {u} listed twice")));
            }
            is_unit[u] = true;
        }
        let mut units = t.units;
        units.sort_unstable();
        let mut source_fibers = vec![Vec::new(); n];
        let mut range_fibers = vec![Vec::new(); n];
        for x in 0..n {
            source_fibers[t.source[x]].push(x);
            range_fibers[t.range[x]].push(x);
        }
        Ok(Groupoid {
            names: t.names,
            units,
            is_unit,
            source: t.source,
            range: t.range,
            compose: t.compose,
            inv: t.inv,
            source_fibers,
            range_fibers,
        })
    }

    /// Builds a groupoid and rejects it unless every axiom holds.
    pub fn new(t: GroupoidTables) -> Result<Self> {
        let g = Self::from_tables_unchecked(t)?;
        let violations = g.validate();
        if violations.is_empty() {
            Ok(g)
        } else {
            Err(Error::InvalidGroupoid(violations))
        }
    }

    pub fn tables(&self) -> GroupoidTables {
        GroupoidTables {
            names: self.names.clone(),
            units: self.units.clone(),
            source: self.source.clone(),
            range: self.range.clone(),
            compose: self.compose.clone(),
            inv: self.inv.clone(),
        }
    }

    /// Checks every groupoid axiom and lists the failures.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.len();
        let mut out = Vec::new();
        let mut push = |axiom, arrows: Vec<Arrow>| out.push(Violation { axiom, arrows });

        for &u in &self.units {
            if self.source[u] != u || self.range[u] != u {
                push(Axiom::UnitNotFixed, vec![u]);
            }
        }
        for x in 0..n {
            if !self.is_unit[self.source[x]] {
                push(Axiom::SourceNotUnit, vec![x]);
            }
            if !self.is_unit[self.range[x]] {
                push(Axiom::RangeNotUnit, vec![x]);
            }
        }
        for x in 0..n {
            for y in 0..n {
                let composable = self.source[x] == self.range[y];
                match (composable, self.compose(x, y)) {
                    (true, None) => push(Axiom::ComposableUndefined, vec![x, y]),
                    (false, Some(_)) => push(Axiom::ComposedNotComposable, vec![x, y]),
                    (true, Some(xy)) => {
                        if self.source[xy] != self.source[y] {
                            push(Axiom::ComposeSource, vec![x, y, xy]);
                        }
                        if self.range[xy] != self.range[x] {
                            push(Axiom::ComposeRange, vec![x, y, xy]);
                        }
                    }
                    (false, None) => {}
                }
            }
        }
        for x in 0..n {
            if self.compose(self.range[x], x) != Some(x) {
                push(Axiom::LeftUnit, vec![x]);
            }
            if self.compose(x, self.source[x]) != Some(x) {
                push(Axiom::RightUnit, vec![x]);
            }
        }
        for x in 0..n {
            for y in 0..n {
                let Some(xy) = self.compose(x, y) else {
                    continue;
                };
                for z in 0..n {
                    let Some(yz) = self.compose(y, z) else {
                        continue;
                    };
                    if self.compose(xy, z) != self.compose(x, yz) {
                        push(Axiom::Associativity, vec![x, y, z]);
                    }
                }
            }
        }
        for x in 0..n {
            let i = self.inv[x];
            if self.compose(x, i) != Some(self.range[x]) {
                push(Axiom::RightInverse, vec![x, i]);
            }
            if self.compose(i, x) != Some(self.source[x]) {
                push(Axiom::LeftInverse, vec![i, x]);
            }
            if self.inv[i] != x {
                push(Axiom::InverseNotInvolution, vec![x, i]);
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn arrows(&self) -> std::ops::Range<Arrow> {
        0..self.len()
    }

    pub fn name(&self, x: Arrow) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn arrow_by_name(&self, name: &str) -> Option<Arrow> {
        self.names.iter().position(|n| n == name)
    }

    /// Unit arrows in increasing id order.
    pub fn units(&self) -> &[Arrow] {
        &self.units
    }

    pub fn is_unit(&self, x: Arrow) -> bool {
        self.is_unit[x]
    }

    #[inline]
    pub fn source(&self, x: Arrow) -> Arrow {
        self.source[x]
    }

    #[inline]
    pub fn range(&self, x: Arrow) -> Arrow {
        self.range[x]
    }

    #[inline]
    pub fn inv(&self, x: Arrow) -> Arrow {
        self.inv[x]
    }

    #[inline]
    pub fn compose(&self, x: Arrow, y: Arrow) -> Option<Arrow> {
        self.compose[x * self.len() + y]
    }

    /// `G_u`: arrows with source `u`, in increasing id order.
    pub fn source_fiber(&self, u: Arrow) -> &[Arrow] {
        &self.source_fibers[u]
    }

    /// `G^u`: arrows with range `u`, in increasing id order.
    pub fn range_fiber(&self, u: Arrow) -> &[Arrow] {
        &self.range_fibers[u]
    }

    /// Number of arrows from `u` to itself.
    pub fn isotropy_order(&self, u: Arrow) -> usize {
        self.source_fibers[u]
            .iter()
            .filter(|&&x| self.range[x] == u)
            .count()
    }

    /// Smallest `k >= 1` with `x^k` a unit, for loops (`s(x) = r(x)`).
    pub fn loop_order(&self, x: Arrow) -> Option<usize> {
        if self.source[x] != self.range[x] {
            return None;
        }
        let mut power = x;
        for k in 1..=self.len() {
            if self.is_unit[power] {
                return Some(k);
            }
            power = self.compose(power, x)?;
        }
        None
    }

    /// Returns a copy whose arrow `i` is this groupoid's arrow `perm[i]`.
    pub fn relabel(&self, perm: &[Arrow]) -> Result<Self> {
        let n = self.len();
        let mut pos = vec![usize::MAX; n];
        if perm.len() != n {
            return Err(Error::Malformed("relabeling has the wrong length".into()));
        }
        for (i, &p) in perm.iter().enumerate() {
            if p >= n || pos[p] != usize::MAX {
                return Err(Error::Malformed("relabeling is not a permutation".into()));
            }
            pos[p] = i;
        }
        let mut compose = vec![None; n * n];
        for i in 0..n {
            for j in 0..n {
                compose[i * n + j] = self.compose(perm[i], perm[j]).map(|z| pos[z]);
            }
        }
        Groupoid::new(GroupoidTables {
            names: perm.iter().map(|&p| self.names[p].clone()).collect(),
            units: self.units.iter().map(|&u| pos[u]).collect(),
            source: perm.iter().map(|&p| pos[self.source[p]]).collect(),
            range: perm.iter().map(|&p| pos[self.range[p]]).collect(),
            compose,
            inv: perm.iter().map(|&p| pos[self.inv[p]]).collect(),
        })
    }
}
