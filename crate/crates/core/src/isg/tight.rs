use std::collections::HashMap;

use serde::Serialize;

use super::{tight_filters, Elem, Filter, InvSemigroup, Semilattice};
use crate::gpd::{Groupoid, GroupoidTables};
use crate::{Error, Result};

/// Canonical representative of a germ class `[s, φ]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Germ {
    /// Least-index element of the class.
    pub element: Elem,
    /// Index into [`TightGroupoid::filters`].
    pub filter: usize,
}

#[derive(Clone, Debug)]
pub struct TightGroupoid {
    pub groupoid: Groupoid,
    /// The semigroup actually used, with a zero adjoined if needed.
    pub semigroup: InvSemigroup,
    pub zero_adjoined: bool,
    /// Tight filters, as sets of semigroup elements.
    pub filters: Vec<Vec<Elem>>,
    /// Germ behind each arrow of `groupoid`.
    pub germs: Vec<Germ>,
}

/// Exel's groupoid of germs of the action of `s` on its tight spectrum.
pub fn tight_groupoid(s: &InvSemigroup) -> Result<TightGroupoid> {
    let (s, zero_adjoined) = s.with_zero();
    let l = Semilattice::of(&s);
    let tight = tight_filters(&l)?;
    let minima: Vec<usize> = tight.iter().map(|f| l.minimum(f)).collect();
    let filter_of_min: HashMap<Elem, usize> = minima
        .iter()
        .enumerate()
        .map(|(i, &m)| (l.origin(m), i))
        .collect();
    let contains = |phi: &Filter, a: Elem| l.local(a).is_some_and(|e| phi.contains(e));

    // (s, φ) ~ (t, φ) iff se = te for some e ∈ φ.
    let equivalent = |phi: &Filter, a: Elem, b: Elem| {
        phi.members().iter().any(|&e| {
            let e = l.origin(e);
            s.mul(a, e) == s.mul(b, e)
        })
    };

    let mut germs: Vec<Germ> = Vec::new();
    let mut class_of: HashMap<(Elem, usize), usize> = HashMap::new();
    for (fi, phi) in tight.iter().enumerate() {
        let mut reps: Vec<Elem> = Vec::new();
        for a in 0..s.len() {
            if !contains(phi, s.mul(s.dagger(a), a)) {
                continue;
            }
            let id = match reps.iter().position(|&r| equivalent(phi, a, r)) {
                Some(k) => germs.len() - reps.len() + k,
                None => {
                    reps.push(a);
                    germs.push(Germ {
                        element: a,
                        filter: fi,
                    });
                    germs.len() - 1
                }
            };
            class_of.insert((a, fi), id);
        }
        // Transitivity of the computed relation within each class.
        let members: Vec<Elem> = (0..s.len())
            .filter(|&a| class_of.contains_key(&(a, fi)))
            .collect();
        for &a in &members {
            for &b in &members {
                if (class_of[&(a, fi)] == class_of[&(b, fi)]) != equivalent(phi, a, b) {
                    return Err(Error::Inconsistent(format!(
                        "germ relation is not transitive at ({}, {})",
                        s.name(a),
                        s.name(b)
                    )));
                }
            }
        }
    }

    // θ_a(↑e) = ↑(a e a†) for the least element e of the filter.
    let theta = |a: Elem, fi: usize| -> Result<usize> {
        let e = l.origin(minima[fi]);
        let image = s.mul(s.mul(a, e), s.dagger(a));
        filter_of_min.get(&image).copied().ok_or_else(|| {
            Error::Inconsistent(format!(
                "{} moves a tight filter to a non-tight one",
                s.name(a)
            ))
        })
    };

    let n = germs.len();
    let unit_germ: Vec<usize> = minima
        .iter()
        .enumerate()
        .map(|(fi, &m)| class_of[&(l.origin(m), fi)])
        .collect();
    let mut source = vec![0; n];
    let mut range = vec![0; n];
    let mut inv = vec![0; n];
    let mut names = Vec::with_capacity(n);
    for (k, germ) in germs.iter().enumerate() {
        let a = germ.element;
        let target = theta(a, germ.filter)?;
        source[k] = unit_germ[germ.filter];
        range[k] = unit_germ[target];
        inv[k] = class_of[&(s.dagger(a), target)];
        names.push(format!(
            "[{}|up({})]",
            s.name(a),
            s.name(l.origin(minima[germ.filter]))
        ));
    }
    // [a, θ_b(φ)]·[b, φ] = [ab, φ]
    let mut compose = vec![None; n * n];
    for (x, gx) in germs.iter().enumerate() {
        for (y, gy) in germs.iter().enumerate() {
            if theta(gy.element, gy.filter)? == gx.filter {
                let ab = s.mul(gx.element, gy.element);
                let z = class_of
                    .get(&(ab, gy.filter))
                    .copied()
                    .ok_or_else(|| Error::Inconsistent("product germ has no class".into()))?;
                compose[x * n + y] = Some(z);
            }
        }
    }
    let groupoid = Groupoid::new(GroupoidTables {
        names,
        units: unit_germ,
        source,
        range,
        compose,
        inv,
    })?;
    Ok(TightGroupoid {
        groupoid,
        filters: tight
            .iter()
            .map(|f| f.members().iter().map(|&e| l.origin(e)).collect())
            .collect(),
        semigroup: s,
        zero_adjoined,
        germs,
    })
}
