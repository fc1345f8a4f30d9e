//! Finite inverse semigroups, their idempotent semilattices, filters, and
//! Exel's tight groupoid of germs.

mod build;
mod filters;
mod normalizer;
mod tight;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, FORMAT_VERSION};

pub use build::{from_bisections, symmetric_inverse_monoid, BisectionSemigroup};
pub use filters::{tight_filters, ultrafilters, Filter, Semilattice};
pub use normalizer::{normalizer_members, normalizer_semigroup, Normalizer};
pub use tight::{tight_groupoid, Germ, TightGroupoid};

/// Index of an element of a semigroup.
pub type Elem = usize;

/// A finite magma given by its multiplication table, not yet known to be an
/// inverse semigroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyTable {
    pub names: Vec<String>,
    /// Row-major; `mul[a * n + b]` is `ab`.
    pub mul: Vec<Elem>,
}

impl CayleyTable {
    pub fn new(names: Vec<String>, mul: Vec<Elem>) -> Result<Self> {
        let n = names.len();
        if mul.len() != n * n {
            return Err(Error::Malformed(format!(
                "multiplication table has {} entries, expected {}",
                mul.len(),
                n * n
            )));
        }
        if let Some(&bad) = mul.iter().find(|&&c| c >= n) {
            return Err(Error::Malformed(format!("table entry {bad} out of range")));
        }
        Ok(CayleyTable { names, mul })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a * self.len() + b]
    }

    fn is_idempotent(&self, a: Elem) -> bool {
        self.mul(a, a) == a
    }

    /// All `t` with `sts = s` and `tst = t`.
    fn generalized_inverses(&self, s: Elem) -> impl Iterator<Item = Elem> + '_ {
        (0..self.len())
            .filter(move |&t| self.mul(self.mul(s, t), s) == s && self.mul(self.mul(t, s), t) == t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "law", rename_all = "kebab-case")]
pub enum SemigroupViolation {
    NotAssociative { a: Elem, b: Elem, c: Elem },
    NoGeneralizedInverse { a: Elem },
    IdempotentsDoNotCommute { e: Elem, f: Elem },
    DaggerMismatch { a: Elem, supplied: Elem },
}

impl fmt::Display for SemigroupViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemigroupViolation::NotAssociative { a, b, c } => {
                write!(f, "(ab)c != a(bc) for ({a}, {b}, {c})")
            }
            SemigroupViolation::NoGeneralizedInverse { a } => {
                write!(f, "{a} has no generalized inverse")
            }
            SemigroupViolation::IdempotentsDoNotCommute { e, f: g } => {
                write!(f, "idempotents {e} and {g} do not commute")
            }
            SemigroupViolation::DaggerMismatch { a, supplied } => {
                write!(
                    f,
                    "supplied dagger {supplied} of {a} is not its generalized inverse"
                )
            }
        }
    }
}

// Keeps reports readable on badly broken tables.
const MAX_REPORTED: usize = 32;

/// Checks associativity, existence of generalized inverses, and
/// commutation of idempotents. Empty iff the table is an inverse semigroup.
pub fn verify_inverse_semigroup(t: &CayleyTable) -> Vec<SemigroupViolation> {
    let n = t.len();
    let mut out = Vec::new();
    'assoc: for a in 0..n {
        for b in 0..n {
            let ab = t.mul(a, b);
            for c in 0..n {
                if t.mul(ab, c) != t.mul(a, t.mul(b, c)) {
                    out.push(SemigroupViolation::NotAssociative { a, b, c });
                    if out.len() >= MAX_REPORTED {
                        break 'assoc;
                    }
                }
            }
        }
    }
    for a in 0..n {
        if t.generalized_inverses(a).next().is_none() {
            out.push(SemigroupViolation::NoGeneralizedInverse { a });
        }
    }
    let idem: Vec<Elem> = (0..n).filter(|&a| t.is_idempotent(a)).collect();
    for (i, &e) in idem.iter().enumerate() {
        for &f in &idem[i + 1..] {
            if t.mul(e, f) != t.mul(f, e) {
                out.push(SemigroupViolation::IdempotentsDoNotCommute { e, f });
            }
        }
    }
    out
}

/// A verified finite inverse semigroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvSemigroup {
    table: CayleyTable,
    dagger: Vec<Elem>,
    zero: Option<Elem>,
}

impl InvSemigroup {
    /// Verifies `table` and derives the dagger. A supplied dagger must agree
    /// with the derived one.
    pub fn new(table: CayleyTable, dagger: Option<Vec<Elem>>) -> Result<Self> {
        let mut violations = verify_inverse_semigroup(&table);
        let n = table.len();
        let derived: Vec<Elem> = if violations.is_empty() {
            (0..n)
                .map(|a| table.generalized_inverses(a).next().expect("verified"))
                .collect()
        } else {
            Vec::new()
        };
        if let (Some(supplied), false) = (&dagger, derived.is_empty()) {
            if supplied.len() != n {
                return Err(Error::Malformed(format!(
                    "dagger table has {} entries, expected {n}",
                    supplied.len()
                )));
            }
            for a in 0..n {
                if supplied[a] != derived[a] {
                    violations.push(SemigroupViolation::DaggerMismatch {
                        a,
                        supplied: supplied[a],
                    });
                }
            }
        }
        if !violations.is_empty() {
            let shown: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            return Err(Error::NotInverseSemigroup(shown.join("; ")));
        }
        let zero = (0..n).find(|&z| (0..n).all(|a| table.mul(z, a) == z && table.mul(a, z) == z));
        Ok(InvSemigroup {
            table,
            dagger: derived,
            zero,
        })
    }

    pub fn table(&self) -> &CayleyTable {
        &self.table
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.table.names
    }

    pub fn name(&self, a: Elem) -> &str {
        &self.table.names[a]
    }

    pub fn index_of(&self, name: &str) -> Option<Elem> {
        self.table.names.iter().position(|n| n == name)
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table.mul(a, b)
    }

    pub fn dagger(&self, a: Elem) -> Elem {
        self.dagger[a]
    }

    pub fn dagger_table(&self) -> &[Elem] {
        &self.dagger
    }

    pub fn zero(&self) -> Option<Elem> {
        self.zero
    }

    pub fn is_idempotent(&self, a: Elem) -> bool {
        self.table.is_idempotent(a)
    }

    pub fn idempotents(&self) -> Vec<Elem> {
        (0..self.len()).filter(|&a| self.is_idempotent(a)).collect()
    }

    /// Adjoins a new zero `0` as the last element unless one exists.
    /// Returns whether an element was added.
    pub fn with_zero(&self) -> (InvSemigroup, bool) {
        if self.zero.is_some() {
            return (self.clone(), false);
        }
        let n = self.len();
        let z = n;
        let mut mul = vec![z; (n + 1) * (n + 1)];
        for a in 0..n {
            for b in 0..n {
                mul[a * (n + 1) + b] = self.mul(a, b);
            }
        }
        let mut names = self.table.names.clone();
        let mut zero_name = "0".to_string();
        while names.contains(&zero_name) {
            zero_name.push('\'');
        }
        names.push(zero_name);
        let mut dagger = self.dagger.clone();
        dagger.push(z);
        let s = InvSemigroup {
            table: CayleyTable { names, mul },
            dagger,
            zero: Some(z),
        };
        (s, true)
    }

    /// Whether `phi` is an isomorphism onto `other` (`phi[a]` is the image).
    pub fn is_isomorphism(&self, other: &InvSemigroup, phi: &[Elem]) -> bool {
        let n = self.len();
        if phi.len() != n || other.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &b in phi {
            if b >= n || std::mem::replace(&mut seen[b], true) {
                return false;
            }
        }
        (0..n).all(|a| (0..n).all(|b| phi[self.mul(a, b)] == other.mul(phi[a], phi[b])))
    }

    pub fn to_doc(&self) -> SemigroupDoc {
        let n = self.len();
        SemigroupDoc {
            format: FORMAT_VERSION,
            elements: self.table.names.clone(),
            mul: (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| self.name(self.mul(a, b)).to_string())
                        .collect()
                })
                .collect(),
            dagger: Some(
                (0..n)
                    .map(|a| {
                        (
                            self.name(a).to_string(),
                            self.name(self.dagger(a)).to_string(),
                        )
                    })
                    .collect(),
            ),
        }
    }
}

/// JSON form of an inverse semigroup. `mul[i][j]` names the product of
/// elements `i` and `j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemigroupDoc {
    pub format: u32,
    pub elements: Vec<String>,
    pub mul: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dagger: Option<BTreeMap<String, String>>,
}

impl SemigroupDoc {
    pub fn to_semigroup(&self) -> Result<InvSemigroup> {
        if self.format != FORMAT_VERSION {
            return Err(Error::Malformed(format!(
                "unsupported format {}",
                self.format
            )));
        }
        let index: BTreeMap<&str, Elem> = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        if index.len() != self.elements.len() {
            return Err(Error::Malformed("duplicate element names".into()));
        }
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::Malformed(format!("unknown element {s:?}")))
        };
        let n = self.elements.len();
        if self.mul.len() != n || self.mul.iter().any(|row| row.len() != n) {
            return Err(Error::Malformed(format!("mul must be a {n}x{n} table")));
        }
        let mul = self
            .mul
            .iter()
            .flatten()
            .map(|s| lookup(s))
            .collect::<Result<Vec<_>>>()?;
        let dagger = match &self.dagger {
            None => None,
            Some(map) => {
                let mut d = vec![usize::MAX; n];
                for (a, b) in map {
                    d[lookup(a)?] = lookup(b)?;
                }
                if d.contains(&usize::MAX) {
                    return Err(Error::Malformed("dagger table is not total".into()));
                }
                Some(d)
            }
        };
        InvSemigroup::new(CayleyTable::new(self.elements.clone(), mul)?, dagger)
    }
}
