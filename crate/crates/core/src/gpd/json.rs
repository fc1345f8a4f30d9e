//! JSON exchange format for groupoids.
//!
//! ```json
//! { "format": 1,
//!   "arrows": ["e", "g"], "units": ["e"],
//!   "source": {"e": "e", "g": "e"}, "range": {"e": "e", "g": "e"},
//!   "compose": [["e","e","e"], ["e","g","g"], ["g","e","g"], ["g","g","e"]] }
//! ```
//!
//! Inversion is derived from the composition table. An optional `inverse`
//! map is used as the inverse table and cross-checked against the derived one.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{Axiom, Groupoid, GroupoidTables, Violation};
use crate::{Error, Result, FORMAT_VERSION};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupoidDoc {
    #[serde(default = "default_format")]
    pub format: u32,
    pub arrows: Vec<String>,
    pub units: Vec<String>,
    pub source: BTreeMap<String, String>,
    pub range: BTreeMap<String, String>,
    pub compose: Vec<[String; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<BTreeMap<String, String>>,
}

fn default_format() -> u32 {
    FORMAT_VERSION
}

impl GroupoidDoc {
    pub fn from_groupoid(g: &Groupoid) -> Self {
        let name = |x| g.name(x).to_string();
        let mut compose = Vec::new();
        for x in g.arrows() {
            for y in g.arrows() {
                if let Some(xy) = g.compose(x, y) {
                    compose.push([name(x), name(y), name(xy)]);
                }
            }
        }
        GroupoidDoc {
            format: FORMAT_VERSION,
            arrows: g.names().to_vec(),
            units: g.units().iter().map(|&u| name(u)).collect(),
            source: g.arrows().map(|x| (name(x), name(g.source(x)))).collect(),
            range: g.arrows().map(|x| (name(x), name(g.range(x)))).collect(),
            compose,
            inverse: None,
        }
    }

    /// Builds the groupoid without rejecting axiom failures; the failures are
    /// returned alongside it.
    pub fn to_groupoid_unchecked(&self) -> Result<(Groupoid, Vec<Violation>)> {
        if self.format != FORMAT_VERSION {
            return Err(Error::Malformed(format!(
                "unsupported format {}",
                self.format
            )));
        }
        let n = self.arrows.len();
        let mut ids = HashMap::with_capacity(n);
        for (i, a) in self.arrows.iter().enumerate() {
            if ids.insert(a.as_str(), i).is_some() {
                return Err(Error::Malformed(format!("duplicate arrow name {a:?}")));
            }
        }
        let id = |s: &str| {
            ids.get(s)
                .copied()
                .ok_or_else(|| Error::Malformed(format!("unknown arrow {s:?}")))
        };
        let lookup = |map: &BTreeMap<String, String>, what: &str| -> Result<Vec<usize>> {
            self.arrows
                .iter()
                .map(|a| {
                    let v = map
                        .get(a)
                        .ok_or_else(|| Error::Malformed(format!("{what} of {a:?} missing")))?;
                    id(v)
                })
                .collect()
        };
        let source = lookup(&self.source, "source")?;
        let range = lookup(&self.range, "range")?;
        let units = self
            .units
            .iter()
            .map(|u| id(u))
            .collect::<Result<Vec<_>>>()?;
        let mut compose = vec![None; n * n];
        for [x, y, xy] in &self.compose {
            let (x, y, xy) = (id(x)?, id(y)?, id(xy)?);
            match compose[x * n + y] {
                Some(prev) if prev != xy => {
                    return Err(Error::Malformed(format!(
                        "conflicting products for ({}, {})",
                        self.arrows[x], self.arrows[y]
                    )))
                }
                _ => compose[x * n + y] = Some(xy),
            }
        }
        let derived: Vec<Option<usize>> = (0..n)
            .map(|x| {
                (0..n).find(|&y| {
                    compose[x * n + y] == Some(range[x]) && compose[y * n + x] == Some(source[x])
                })
            })
            .collect();
        let mut extra = Vec::new();
        let inv: Vec<usize> = match &self.inverse {
            Some(map) => {
                let supplied = lookup(map, "inverse")?;
                for x in 0..n {
                    if derived[x] != Some(supplied[x]) {
                        extra.push(Violation {
                            axiom: Axiom::InverseMismatch,
                            arrows: vec![x, supplied[x]],
                        });
                    }
                }
                supplied
            }
            // A missing inverse falls back to x itself; validation reports it.
            None => derived
                .iter()
                .enumerate()
                .map(|(x, d)| d.unwrap_or(x))
                .collect(),
        };
        let g = Groupoid::from_tables_unchecked(GroupoidTables {
            names: self.arrows.clone(),
            units,
            source,
            range,
            compose,
            inv,
        })?;
        let mut violations = g.validate();
        violations.extend(extra);
        Ok((g, violations))
    }

    pub fn to_groupoid(&self) -> Result<Groupoid> {
        let (g, violations) = self.to_groupoid_unchecked()?;
        if violations.is_empty() {
            Ok(g)
        } else {
            Err(Error::InvalidGroupoid(violations))
        }
    }
}
