use serde::Serialize;

use super::{Elem, InvSemigroup};
use crate::{Error, Result};

/// A finite meet-semilattice. Elements are local indices `0..len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semilattice {
    names: Vec<String>,
    meet: Vec<usize>,
    zero: Option<usize>,
    /// Semigroup element behind each local index, when built from one.
    origin: Vec<Elem>,
}

/// A filter, as the sorted list of its members.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Filter(pub Vec<usize>);

impl Filter {
    pub fn contains(&self, e: usize) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Semilattice {
    /// `E(S)` with meet given by multiplication.
    pub fn of(s: &InvSemigroup) -> Self {
        let origin = s.idempotents();
        let local = |a: Elem| {
            origin
                .binary_search(&a)
                .expect("product of idempotents is idempotent")
        };
        let meet = origin
            .iter()
            .flat_map(|&e| origin.iter().map(move |&f| (e, f)))
            .map(|(e, f)| local(s.mul(e, f)))
            .collect();
        let zero = s.zero().map(local);
        Semilattice {
            names: origin.iter().map(|&e| s.name(e).to_string()).collect(),
            meet,
            zero,
            origin,
        }
    }

    /// Checks that `meet` is commutative, associative and idempotent.
    pub fn from_meet_table(names: Vec<String>, meet: Vec<usize>) -> Result<Self> {
        let n = names.len();
        if meet.len() != n * n || meet.iter().any(|&m| m >= n) {
            return Err(Error::Malformed("meet table has the wrong shape".into()));
        }
        let m = |a: usize, b: usize| meet[a * n + b];
        for (a, name) in names.iter().enumerate() {
            if m(a, a) != a {
                return Err(Error::Malformed(format!(
                    "meet is not idempotent at {name}"
                )));
            }
            for b in 0..n {
                if m(a, b) != m(b, a) {
                    return Err(Error::Malformed("meet is not commutative".into()));
                }
                for c in 0..n {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(Error::Malformed("meet is not associative".into()));
                    }
                }
            }
        }
        let zero = (0..n).find(|&z| (0..n).all(|a| m(z, a) == z));
        Ok(Semilattice {
            names,
            meet,
            zero,
            origin: (0..n).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, e: usize) -> &str {
        &self.names[e]
    }

    pub fn meet(&self, e: usize, f: usize) -> usize {
        self.meet[e * self.len() + f]
    }

    pub fn zero(&self) -> Option<usize> {
        self.zero
    }

    pub fn origin(&self, e: usize) -> Elem {
        self.origin[e]
    }

    pub fn local(&self, a: Elem) -> Option<usize> {
        self.origin.iter().position(|&x| x == a)
    }

    /// `e ≤ f` iff `ef = e`.
    pub fn leq(&self, e: usize, f: usize) -> bool {
        self.meet(e, f) == e
    }

    fn is_zero(&self, e: usize) -> bool {
        self.zero == Some(e)
    }

    fn nonzero(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&e| !self.is_zero(e))
    }

    pub fn up_set(&self, e: usize) -> Filter {
        Filter((0..self.len()).filter(|&f| self.leq(e, f)).collect())
    }

    pub fn is_filter(&self, xi: &Filter) -> bool {
        !xi.is_empty()
            && xi.0.iter().all(|&e| !self.is_zero(e))
            && xi
                .0
                .iter()
                .all(|&e| (0..self.len()).all(|f| !self.leq(e, f) || xi.contains(f)))
            && xi
                .0
                .iter()
                .all(|&e| xi.0.iter().all(|&f| xi.contains(self.meet(e, f))))
    }

    /// Every filter of a finite semilattice is the up-set of its meet.
    pub fn filters(&self) -> Vec<Filter> {
        let mut out: Vec<Filter> = self.nonzero().map(|e| self.up_set(e)).collect();
        out.sort();
        out.dedup();
        debug_assert!(out.iter().all(|f| self.is_filter(f)));
        out
    }

    /// Least member of a filter.
    pub fn minimum(&self, xi: &Filter) -> usize {
        xi.0.iter()
            .copied()
            .reduce(|a, b| self.meet(a, b))
            .expect("filters are nonempty")
    }

    /// Whether `z` is an outer cover of `e`: every nonzero `g ≤ e` meets
    /// some member of `z` nontrivially. Members of `z` must lie below `e`.
    pub fn is_cover(&self, e: usize, z: &[usize]) -> bool {
        z.iter().all(|&f| self.leq(f, e))
            && self
                .nonzero()
                .filter(|&g| self.leq(g, e))
                .all(|g| z.iter().any(|&f| !self.is_zero(self.meet(g, f))))
    }

    /// Tightness of a filter. Covers are closed under enlargement, so `xi`
    /// fails exactly when the nonzero elements below `e` outside `xi` already
    /// cover `e` for some `e ∈ xi`.
    pub fn is_tight(&self, xi: &Filter) -> bool {
        xi.0.iter().all(|&e| {
            let outside: Vec<usize> = self
                .nonzero()
                .filter(|&f| self.leq(f, e) && !xi.contains(f))
                .collect();
            !self.is_cover(e, &outside)
        })
    }
}

/// Maximal filters, computed both as maximal elements of the filter poset
/// and as up-sets of minimal nonzero elements. The two must agree.
pub fn ultrafilters(l: &Semilattice) -> Result<Vec<Filter>> {
    let all = l.filters();
    let maximal: Vec<Filter> = all
        .iter()
        .filter(|f| {
            !all.iter()
                .any(|g| g.len() > f.len() && f.0.iter().all(|&e| g.contains(e)))
        })
        .cloned()
        .collect();
    let mut minimal: Vec<Filter> = l
        .nonzero()
        .filter(|&e| !l.nonzero().any(|f| f != e && l.leq(f, e)))
        .map(|e| l.up_set(e))
        .collect();
    minimal.sort();
    if maximal != minimal {
        return Err(Error::Inconsistent(format!(
            "{} maximal filters but {} minimal principal filters",
            maximal.len(),
            minimal.len()
        )));
    }
    Ok(maximal)
}

/// Filters passing the cover condition. In a finite semilattice these are
/// the ultrafilters; the equality is checked.
pub fn tight_filters(l: &Semilattice) -> Result<Vec<Filter>> {
    let tight: Vec<Filter> = l.filters().into_iter().filter(|f| l.is_tight(f)).collect();
    let ultra = ultrafilters(l)?;
    if tight != ultra {
        return Err(Error::Inconsistent(format!(
            "{} tight filters but {} ultrafilters",
            tight.len(),
            ultra.len()
        )));
    }
    Ok(tight)
}
