//! Exact isomorphism testing by backtracking.
//!
//! Units are matched first, pruned by fiber size and isotropy order; each
//! remaining arrow then only has candidates between the already-fixed images
//! of its source and range. Composition is checked incrementally.

use super::{Arrow, Groupoid};
use crate::{Error, Result};

pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Signature {
    unit: bool,
    fiber: usize,
    isotropy: usize,
    loop_order: Option<usize>,
}

fn signature(g: &Groupoid, x: Arrow) -> Signature {
    Signature {
        unit: g.is_unit(x),
        fiber: g.source_fiber(g.source(x)).len(),
        isotropy: g.isotropy_order(g.source(x)),
        loop_order: g.loop_order(x),
    }
}

/// Searches for an isomorphism `g → h`.
///
/// Returns `map` with `map[x]` the image of arrow `x`, or `None` when the
/// groupoids are not isomorphic. Exceeding `budget` search nodes is an error,
/// distinct from a negative answer.
pub fn groupoid_isomorphic(g: &Groupoid, h: &Groupoid, budget: u64) -> Result<Option<Vec<Arrow>>> {
    if g.len() != h.len() || g.units().len() != h.units().len() {
        return Ok(None);
    }
    let sig_g: Vec<_> = g.arrows().map(|x| signature(g, x)).collect();
    let sig_h: Vec<_> = h.arrows().map(|x| signature(h, x)).collect();
    let mut a: Vec<_> = sig_g.iter().map(key).collect();
    let mut b: Vec<_> = sig_h.iter().map(key).collect();
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return Ok(None);
    }
    let order: Vec<Arrow> = g
        .units()
        .iter()
        .copied()
        .chain(g.arrows().filter(|&x| !g.is_unit(x)))
        .collect();
    let mut search = Search {
        g,
        h,
        sig_g,
        sig_h,
        order,
        map: vec![None; g.len()],
        used: vec![false; h.len()],
        nodes: 0,
        budget,
    };
    if search.assign(0)? {
        let map: Vec<Arrow> = search.map.into_iter().map(Option::unwrap).collect();
        if !is_isomorphism(g, h, &map) {
            return Err(Error::Inconsistent(
                "isomorphism search returned a non-isomorphism".into(),
            ));
        }
        Ok(Some(map))
    } else {
        Ok(None)
    }
}

fn key(s: &Signature) -> (bool, usize, usize, Option<usize>) {
    (s.unit, s.fiber, s.isotropy, s.loop_order)
}

struct Search<'a> {
    g: &'a Groupoid,
    h: &'a Groupoid,
    sig_g: Vec<Signature>,
    sig_h: Vec<Signature>,
    order: Vec<Arrow>,
    map: Vec<Option<Arrow>>,
    used: Vec<bool>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn assign(&mut self, depth: usize) -> Result<bool> {
        if depth == self.order.len() {
            return Ok(true);
        }
        let x = self.order[depth];
        let candidates: Vec<Arrow> = if self.g.is_unit(x) {
            self.h.units().to_vec()
        } else {
            let s = self.map[self.g.source(x)].expect("units are mapped first");
            let r = self.map[self.g.range(x)].expect("units are mapped first");
            self.h
                .source_fiber(s)
                .iter()
                .copied()
                .filter(|&y| self.h.range(y) == r)
                .collect()
        };
        for y in candidates {
            if self.used[y] || self.sig_g[x] != self.sig_h[y] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::SearchBudgetExceeded {
                    budget: self.budget,
                });
            }
            self.map[x] = Some(y);
            self.used[y] = true;
            if self.consistent(x) && self.assign(depth + 1)? {
                return Ok(true);
            }
            self.map[x] = None;
            self.used[y] = false;
        }
        Ok(false)
    }

    /// Checks every composable pair among mapped arrows that involves `x`.
    fn consistent(&self, x: Arrow) -> bool {
        let (g, h) = (self.g, self.h);
        let img = |a: Arrow| self.map[a];
        for a in g.arrows() {
            let Some(fa) = img(a) else { continue };
            for (p, q) in [(x, a), (a, x)] {
                if let Some(pq) = g.compose(p, q) {
                    if let (Some(fp), Some(fq), Some(fpq)) = (img(p), img(q), img(pq)) {
                        if h.compose(fp, fq) != Some(fpq) {
                            return false;
                        }
                    }
                }
            }
            // x as a product of a and some mapped b.
            for b in g.arrows() {
                if g.compose(a, b) == Some(x) {
                    if let Some(fb) = img(b) {
                        if h.compose(fa, fb) != img(x) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Checks that `map` is a bijection preserving units, source, range and
/// composition.
pub fn is_isomorphism(g: &Groupoid, h: &Groupoid, map: &[Arrow]) -> bool {
    if map.len() != g.len() || g.len() != h.len() {
        return false;
    }
    let mut seen = vec![false; h.len()];
    if map
        .iter()
        .any(|&y| y >= h.len() || std::mem::replace(&mut seen[y], true))
    {
        return false;
    }
    g.arrows().all(|x| {
        g.is_unit(x) == h.is_unit(map[x])
            && map[g.source(x)] == h.source(map[x])
            && map[g.range(x)] == h.range(map[x])
            && g.arrows().all(|y| match g.compose(x, y) {
                Some(xy) => h.compose(map[x], map[y]) == Some(map[xy]),
                None => h.compose(map[x], map[y]).is_none(),
            })
    })
}
