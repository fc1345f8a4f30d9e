use std::collections::HashMap;

use super::{CayleyTable, InvSemigroup};
use crate::conv::{convolve_all, AlgElem};
use crate::structure::{mp_inverse, AlgebraContext};
use crate::{Error, Result, ALGEBRAIC_TOL};

/// `N_E` realized as an abstract inverse semigroup.
#[derive(Clone, Debug)]
pub struct Normalizer {
    /// Indices of the input elements that normalize `E`.
    pub members: Vec<usize>,
    /// Product and dagger closure of the members.
    pub elements: Vec<AlgElem>,
    pub semigroup: InvSemigroup,
}

// Exact-match index over algebra elements with a grid key and an
// approximate fallback.
struct ElemIndex {
    elems: Vec<AlgElem>,
    by_key: HashMap<Vec<(i64, i64)>, usize>,
}

impl ElemIndex {
    fn new() -> Self {
        ElemIndex {
            elems: Vec::new(),
            by_key: HashMap::new(),
        }
    }

    fn key(f: &AlgElem) -> Vec<(i64, i64)> {
        f.coeffs()
            .iter()
            .map(|c| ((c.re * 1e7).round() as i64, (c.im * 1e7).round() as i64))
            .collect()
    }

    fn find(&self, f: &AlgElem) -> Option<usize> {
        if let Some(&i) = self.by_key.get(&Self::key(f)) {
            if self.elems[i].approx_eq(f, ALGEBRAIC_TOL) {
                return Some(i);
            }
        }
        self.elems
            .iter()
            .position(|e| e.approx_eq(f, ALGEBRAIC_TOL))
    }

    /// Index of `f`, inserting it if new. The flag tells whether it was new.
    fn insert(&mut self, f: AlgElem) -> (usize, bool) {
        if let Some(i) = self.find(&f) {
            return (i, false);
        }
        self.by_key.insert(Self::key(&f), self.elems.len());
        self.elems.push(f);
        (self.elems.len() - 1, true)
    }
}

fn in_family(family: &[AlgElem], f: &AlgElem) -> bool {
    family.iter().any(|e| e.approx_eq(f, ALGEBRAIC_TOL))
}

/// Indices of the elements `a` with `a†a, aa† ∈ E`, `a†Ea ⊆ E` and
/// `aEa† ⊆ E`. Elements without a closed-form dagger are skipped.
pub fn normalizer_members(
    ctx: &AlgebraContext,
    elements: &[AlgElem],
    idempotents: &[AlgElem],
) -> Result<Vec<usize>> {
    let g = ctx.g();
    let mut out = Vec::new();
    for (i, a) in elements.iter().enumerate() {
        let Some(d) = mp_inverse(ctx, a)? else {
            continue;
        };
        let mut ok =
            in_family(idempotents, &ctx.mul(&d, a)?) && in_family(idempotents, &ctx.mul(a, &d)?);
        for e in idempotents {
            if !ok {
                break;
            }
            ok = in_family(idempotents, &convolve_all(g, &[&d, e, a])?)
                && in_family(idempotents, &convolve_all(g, &[a, e, &d])?);
        }
        if ok {
            out.push(i);
        }
    }
    Ok(out)
}

/// The normalizer semigroup of the commuting idempotent family `idempotents`
/// among `elements`, closed under products and daggers.
pub fn normalizer_semigroup(
    ctx: &AlgebraContext,
    elements: &[AlgElem],
    idempotents: &[AlgElem],
    closure_bound: usize,
) -> Result<Normalizer> {
    let members = normalizer_members(ctx, elements, idempotents)?;
    let mut index = ElemIndex::new();
    for &i in &members {
        index.insert(elements[i].clone());
        let d = mp_inverse(ctx, &elements[i])?.expect("members have daggers");
        index.insert(d);
    }
    if index.elems.len() > closure_bound {
        return Err(Error::ClosureBoundExceeded(closure_bound));
    }
    // Breadth-first closure; `done` elements have all products with
    // earlier elements recorded.
    let mut products: HashMap<(usize, usize), usize> = HashMap::new();
    let mut done = 0;
    while done < index.elems.len() {
        let k = done;
        done += 1;
        for j in 0..=k {
            for (x, y) in [(k, j), (j, k)] {
                if products.contains_key(&(x, y)) {
                    continue;
                }
                let p = ctx.mul(&index.elems[x], &index.elems[y])?;
                let (id, _) = index.insert(p);
                if index.elems.len() > closure_bound {
                    return Err(Error::ClosureBoundExceeded(closure_bound));
                }
                products.insert((x, y), id);
            }
        }
    }
    let n = index.elems.len();
    let mul = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .map(|(a, b)| products[&(a, b)])
        .collect();
    let mut dagger = Vec::with_capacity(n);
    for f in &index.elems {
        let d = mp_inverse(ctx, f)?.ok_or(Error::NotPartialIsometry)?;
        dagger.push(
            index
                .find(&d)
                .ok_or_else(|| Error::Inconsistent("closure is not closed under daggers".into()))?,
        );
    }
    let names = (0..n).map(|i| format!("n{i}")).collect();
    let semigroup = InvSemigroup::new(CayleyTable::new(names, mul)?, Some(dagger))?;
    Ok(Normalizer {
        members,
        elements: index.elems,
        semigroup,
    })
}
