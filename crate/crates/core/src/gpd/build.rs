//! Constructors for the standard catalog of finite groupoids.

use super::{Arrow, Groupoid, GroupoidTables};
use crate::{Error, Result};

/// Pair groupoid on `{1..n}`: one arrow `(i,j)` from `j` to `i` for each pair.
pub fn pair(n: usize) -> Groupoid {
    let idx = |i: usize, j: usize| i * n + j;
    let m = n * n;
    let mut compose = vec![None; m * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                compose[idx(i, j) * m + idx(j, k)] = Some(idx(i, k));
            }
        }
    }
    let mut names = Vec::with_capacity(m);
    let (mut source, mut range, mut inv) = (vec![0; m], vec![0; m], vec![0; m]);
    for i in 0..n {
        for j in 0..n {
            names.push(format!("({},{})", i + 1, j + 1));
            source[idx(i, j)] = idx(j, j);
            range[idx(i, j)] = idx(i, i);
            inv[idx(i, j)] = idx(j, i);
        }
    }
    Groupoid::new(GroupoidTables {
        names,
        units: (0..n).map(|i| idx(i, i)).collect(),
        source,
        range,
        compose,
        inv,
    })
    .expect("pair groupoid satisfies the axioms")
}

/// A group as a one-unit groupoid. `mul` is the row-major Cayley table.
pub fn group_from_table(names: Vec<String>, mul: &[usize], identity: usize) -> Result<Groupoid> {
    let n = names.len();
    if mul.len() != n * n || identity >= n {
        return Err(Error::Malformed("group table has the wrong shape".into()));
    }
    let mut inv = vec![0; n];
    for x in 0..n {
        inv[x] = (0..n)
            .find(|&y| mul[x * n + y] == identity && mul[y * n + x] == identity)
            .ok_or_else(|| Error::Malformed(format!("element {} has no inverse", names[x])))?;
    }
    Groupoid::new(GroupoidTables {
        names,
        units: vec![identity],
        source: vec![identity; n],
        range: vec![identity; n],
        compose: mul.iter().map(|&z| Some(z)).collect(),
        inv,
    })
}

/// The cyclic group `Z_n` with elements named `e, g, g^2, ...`.
pub fn group_cyclic(n: usize) -> Groupoid {
    assert!(n >= 1, "cyclic group needs n >= 1");
    let names = (0..n)
        .map(|k| match k {
            0 => "e".to_string(),
            1 => "g".to_string(),
            k => format!("g^{k}"),
        })
        .collect();
    let mul: Vec<usize> = (0..n * n).map(|i| (i / n + i % n) % n).collect();
    group_from_table(names, &mul, 0).expect("cyclic group table is a group")
}

/// The Klein four-group `Z_2 ⊕ Z_2` with elements `e, a, b, c`.
pub fn group_klein() -> Groupoid {
    let names = ["e", "a", "b", "c"].map(String::from).to_vec();
    let mul: Vec<usize> = (0..16).map(|i| (i / 4) ^ (i % 4)).collect();
    group_from_table(names, &mul, 0).expect("Klein table is a group")
}

/// The symmetric group `S_n`, elements in lexicographic one-line notation.
pub fn group_symmetric(n: usize) -> Groupoid {
    let perms = permutations(n);
    let pos = |p: &[usize]| perms.iter().position(|q| q == p).unwrap();
    let m = perms.len();
    let mut mul = vec![0; m * m];
    for (i, s) in perms.iter().enumerate() {
        for (j, t) in perms.iter().enumerate() {
            let st: Vec<usize> = t.iter().map(|&k| s[k]).collect();
            mul[i * m + j] = pos(&st);
        }
    }
    let names = perms
        .iter()
        .map(|p| p.iter().map(|k| (k + 1).to_string()).collect::<String>())
        .collect();
    group_from_table(names, &mul, 0).expect("permutation table is a group")
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn go(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for k in 0..n {
            if !used[k] {
                used[k] = true;
                cur.push(k);
                go(n, cur, used, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    go(n, &mut current, &mut used, &mut out);
    out
}

/// Disjoint union; arrows of `g` come first, prefixed `L:`, then `R:` for `h`.
pub fn disjoint_union(g: &Groupoid, h: &Groupoid) -> Groupoid {
    let (n, m) = (g.len(), h.len());
    let total = n + m;
    let mut compose = vec![None; total * total];
    for x in 0..n {
        for y in 0..n {
            compose[x * total + y] = g.compose(x, y);
        }
    }
    for x in 0..m {
        for y in 0..m {
            compose[(n + x) * total + n + y] = h.compose(x, y).map(|z| n + z);
        }
    }
    let shift = |a: Arrow| n + a;
    Groupoid::new(GroupoidTables {
        names: g
            .names()
            .iter()
            .map(|s| format!("L:{s}"))
            .chain(h.names().iter().map(|s| format!("R:{s}")))
            .collect(),
        units: g
            .units()
            .iter()
            .copied()
            .chain(h.units().iter().map(|&u| shift(u)))
            .collect(),
        source: g
            .arrows()
            .map(|x| g.source(x))
            .chain(h.arrows().map(|x| shift(h.source(x))))
            .collect(),
        range: g
            .arrows()
            .map(|x| g.range(x))
            .chain(h.arrows().map(|x| shift(h.range(x))))
            .collect(),
        compose,
        inv: g
            .arrows()
            .map(|x| g.inv(x))
            .chain(h.arrows().map(|x| shift(h.inv(x))))
            .collect(),
    })
    .expect("disjoint union of groupoids is a groupoid")
}

/// Transformation groupoid of a group acting on `{0..points}` by permutations.
///
/// `action[g]` is the permutation by which group element `g` acts. Arrow
/// `(g,x)` goes from `x` to `g·x`, and `(h, g·x)·(g, x) = (hg, x)`.
pub fn action_groupoid(group: &Groupoid, action: &[Vec<usize>], points: usize) -> Result<Groupoid> {
    if group.units().len() != 1 {
        return Err(Error::Malformed("acting groupoid must be a group".into()));
    }
    let k = group.len();
    let e = group.units()[0];
    if action.len() != k || action.iter().any(|p| !is_permutation(p, points)) {
        return Err(Error::Malformed(
            "action must give one permutation per group element".into(),
        ));
    }
    if (0..points).any(|x| action[e][x] != x) {
        return Err(Error::Malformed("identity does not act trivially".into()));
    }
    for g in 0..k {
        for h in 0..k {
            let hg = group.compose(h, g).expect("group composition is total");
            if (0..points).any(|x| action[hg][x] != action[h][action[g][x]]) {
                return Err(Error::Malformed(
                    "permutations do not form an action".into(),
                ));
            }
        }
    }
    let idx = |g: usize, x: usize| g * points + x;
    let total = k * points;
    let mut compose = vec![None; total * total];
    for h in 0..k {
        for y in 0..points {
            for g in 0..k {
                for x in 0..points {
                    if action[g][x] == y {
                        let hg = group.compose(h, g).unwrap();
                        compose[idx(h, y) * total + idx(g, x)] = Some(idx(hg, x));
                    }
                }
            }
        }
    }
    let mut names = Vec::with_capacity(total);
    let (mut source, mut range, mut inv) = (vec![0; total], vec![0; total], vec![0; total]);
    for g in 0..k {
        for x in 0..points {
            names.push(format!("({},{})", group.name(g), x));
            source[idx(g, x)] = idx(e, x);
            range[idx(g, x)] = idx(e, action[g][x]);
            inv[idx(g, x)] = idx(group.inv(g), action[g][x]);
        }
    }
    Groupoid::new(GroupoidTables {
        names,
        units: (0..points).map(|x| idx(e, x)).collect(),
        source,
        range,
        compose,
        inv,
    })
}

fn is_permutation(p: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    p.len() == n
        && p.iter()
            .all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_constructors_validate() {
        let z2 = group_cyclic(2);
        let swap = action_groupoid(&z2, &[vec![0, 1], vec![1, 0]], 2).unwrap();
        for g in [
            group_cyclic(3),
            group_klein(),
            group_symmetric(3),
            pair(3),
            disjoint_union(&z2, &pair(2)),
            swap,
        ] {
            assert!(g.validate().is_empty());
        }
    }

    #[test]
    fn symmetric_group_is_nonabelian() {
        let s3 = group_symmetric(3);
        assert_eq!(s3.len(), 6);
        let abelian = s3
            .arrows()
            .all(|x| s3.arrows().all(|y| s3.compose(x, y) == s3.compose(y, x)));
        assert!(!abelian);
    }

    #[test]
    fn swap_action_is_a_pair_groupoid_in_disguise() {
        let z2 = group_cyclic(2);
        let swap = action_groupoid(&z2, &[vec![0, 1], vec![1, 0]], 2).unwrap();
        assert!(crate::gpd::groupoid_isomorphic(&swap, &pair(2), 10_000)
            .unwrap()
            .is_some());
    }

    #[test]
    fn bad_action_rejected() {
        let z2 = group_cyclic(2);
        assert!(action_groupoid(&z2, &[vec![1, 0], vec![1, 0]], 2).is_err());
        assert!(action_groupoid(&z2, &[vec![0, 0], vec![1, 0]], 2).is_err());
    }
}
