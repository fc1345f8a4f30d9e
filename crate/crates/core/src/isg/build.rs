use std::collections::HashMap;

use super::{CayleyTable, InvSemigroup};
use crate::gpd::{bisection_mul, enumerate_bisections, Bisection, Groupoid};
use crate::Result;

/// `B(G)` together with the bisection behind each element.
#[derive(Clone, Debug)]
pub struct BisectionSemigroup {
    pub semigroup: InvSemigroup,
    pub bisections: Vec<Bisection>,
}

impl BisectionSemigroup {
    pub fn index_of(&self, b: &Bisection) -> Option<usize> {
        self.bisections.iter().position(|x| x == b)
    }
}

/// The inverse semigroup of all bisections of `g` under setwise product.
pub fn from_bisections(g: &Groupoid, work_bound: u64) -> Result<BisectionSemigroup> {
    let bisections = enumerate_bisections(g, work_bound)?;
    let index: HashMap<&Bisection, usize> =
        bisections.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let mul = bisections
        .iter()
        .flat_map(|a| bisections.iter().map(move |b| (a, b)))
        .map(|(a, b)| index[&bisection_mul(g, a, b)])
        .collect();
    let names = bisections
        .iter()
        .map(|b| b.display(g).to_string())
        .collect();
    let semigroup = InvSemigroup::new(CayleyTable::new(names, mul)?, None)?;
    Ok(BisectionSemigroup {
        semigroup,
        bisections,
    })
}

/// The symmetric inverse monoid `I_n` of partial bijections of `{1..n}`,
/// with `(st)(i) = s(t(i))`.
pub fn symmetric_inverse_monoid(n: usize) -> InvSemigroup {
    let mut maps: Vec<Vec<Option<usize>>> = vec![Vec::new()];
    for _ in 0..n {
        maps = maps
            .into_iter()
            .flat_map(|m| {
                (0..=n).filter_map(move |v| {
                    let img = (v < n).then_some(v);
                    if img.is_some() && m.contains(&img) {
                        return None;
                    }
                    let mut next = m.clone();
                    next.push(img);
                    Some(next)
                })
            })
            .collect();
    }
    maps.sort_by_key(|m| m.iter().filter(|v| v.is_some()).count());
    let index: HashMap<&Vec<Option<usize>>, usize> =
        maps.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let compose = |s: &[Option<usize>], t: &[Option<usize>]| -> Vec<Option<usize>> {
        t.iter().map(|&ti| ti.and_then(|j| s[j])).collect()
    };
    let mul = maps
        .iter()
        .flat_map(|s| maps.iter().map(move |t| (s, t)))
        .map(|(s, t)| index[&compose(s, t)])
        .collect();
    let names = maps
        .iter()
        .map(|m| {
            let parts: Vec<String> = m
                .iter()
                .enumerate()
                .filter_map(|(i, v)| v.map(|j| format!("{}>{}", i + 1, j + 1)))
                .collect();
            if parts.is_empty() {
                "0".to_string()
            } else {
                parts.join(",")
            }
        })
        .collect();
    InvSemigroup::new(CayleyTable::new(names, mul).expect("square table"), None)
        .expect("partial bijections form an inverse semigroup")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gpd::{disjoint_union, group_cyclic, pair, DEFAULT_WORK_BOUND};

    /// Brute-force semigroup isomorphism over all bijections fixing nothing
    /// in particular; only for tiny semigroups.
    fn isomorphic(a: &InvSemigroup, b: &InvSemigroup) -> bool {
        fn extend(
            a: &InvSemigroup,
            b: &InvSemigroup,
            phi: &mut Vec<usize>,
            used: &mut [bool],
        ) -> bool {
            let k = phi.len();
            if k == a.len() {
                return a.is_isomorphism(b, phi);
            }
            for v in 0..b.len() {
                if used[v] || a.is_idempotent(k) != b.is_idempotent(v) {
                    continue;
                }
                phi.push(v);
                used[v] = true;
                let ok = (0..=k).all(|i| {
                    (0..=k).all(|j| {
                        let p = a.mul(i, j);
                        p > k || phi[p] == b.mul(phi[i], phi[j])
                    })
                });
                if ok && extend(a, b, phi, used) {
                    return true;
                }
                used[v] = false;
                phi.pop();
            }
            false
        }
        a.len() == b.len() && extend(a, b, &mut Vec::new(), &mut vec![false; b.len()])
    }

    #[test]
    fn pair_groupoid_bisections_are_i2() {
        let s = from_bisections(&pair(2), DEFAULT_WORK_BOUND).unwrap();
        assert_eq!(s.semigroup.len(), 7);
        assert!(isomorphic(&s.semigroup, &symmetric_inverse_monoid(2)));
    }

    #[test]
    fn cyclic_group_with_zero() {
        let s = from_bisections(&group_cyclic(2), DEFAULT_WORK_BOUND).unwrap();
        assert_eq!(s.semigroup.len(), 3);
        assert_eq!(s.semigroup.zero(), Some(0));
        assert_eq!(s.semigroup.idempotents().len(), 2);
    }

    #[test]
    fn union_of_groups_by_enumeration() {
        let g = disjoint_union(&group_cyclic(2), &group_cyclic(2));
        let s = from_bisections(&g, DEFAULT_WORK_BOUND).unwrap();
        assert_eq!(s.semigroup.len(), s.bisections.len());
        assert_eq!(s.semigroup.idempotents().len(), 4);
    }

    #[test]
    fn symmetric_inverse_monoid_sizes() {
        // Σ C(n,k)² k!
        assert_eq!(symmetric_inverse_monoid(1).len(), 2);
        assert_eq!(symmetric_inverse_monoid(2).len(), 7);
        let i3 = symmetric_inverse_monoid(3);
        assert_eq!(i3.len(), 34);
        assert_eq!(i3.idempotents().len(), 8);
        assert_eq!(i3.name(0), "0");
        assert_eq!(i3.zero(), Some(0));
    }
}
