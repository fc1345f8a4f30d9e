use crate::gpd::{
    action_groupoid, disjoint_union, group_cyclic, group_klein, group_symmetric, pair, Groupoid,
};
use crate::lprep::PNorm;
use crate::structure::NormKind;
use crate::{Error, Result};

pub const BUILTIN_HELP: &str =
    "cyclic:<n>, klein, symmetric:<n>, pair:<n>, swap-action, union:<a>+<b>";

// Keeps builtins within what exhaustive bisection enumeration can handle.
const MAX_BUILTIN_PARAM: usize = 8;

fn param(name: &str, arg: Option<&str>) -> Result<usize> {
    let arg =
        arg.ok_or_else(|| Error::Malformed(format!("builtin {name} needs a size, e.g. {name}:3")))?;
    let n: usize = arg
        .parse()
        .map_err(|_| Error::Malformed(format!("bad size {arg:?} for builtin {name}")))?;
    if n == 0 || n > MAX_BUILTIN_PARAM {
        return Err(Error::Malformed(format!(
            "size {n} for builtin {name} must be between 1 and {MAX_BUILTIN_PARAM}"
        )));
    }
    Ok(n)
}

/// Parses a builtin groupoid name such as `pair:3` or `union:cyclic:2+pair:2`.
pub fn builtin(spec: &str) -> Result<Groupoid> {
    if let Some(rest) = spec.strip_prefix("union:") {
        let (a, b) = rest
            .split_once('+')
            .ok_or_else(|| Error::Malformed(format!("union needs two parts: {spec:?}")))?;
        return Ok(disjoint_union(&builtin(a)?, &builtin(b)?));
    }
    let (name, arg) = match spec.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (spec, None),
    };
    match name {
        "cyclic" => Ok(group_cyclic(param(name, arg)?)),
        "symmetric" => {
            let n = param(name, arg)?;
            if n > 4 {
                return Err(Error::Malformed("symmetric:n is limited to n <= 4".into()));
            }
            Ok(group_symmetric(n))
        }
        "pair" => Ok(pair(param(name, arg)?)),
        "klein" if arg.is_none() => Ok(group_klein()),
        "swap-action" if arg.is_none() => {
            action_groupoid(&group_cyclic(2), &[vec![0, 1], vec![1, 0]], 2)
        }
        _ => Err(Error::Malformed(format!(
            "unknown builtin {spec:?}; known: {BUILTIN_HELP}"
        ))),
    }
}

/// The nine catalog groupoids, by builtin name.
pub fn catalog() -> Vec<(&'static str, Groupoid)> {
    [
        "cyclic:2",
        "cyclic:3",
        "cyclic:4",
        "klein",
        "symmetric:3",
        "pair:2",
        "pair:3",
        "union:cyclic:2+pair:2",
        "swap-action",
    ]
    .into_iter()
    .map(|name| (name, builtin(name).expect("catalog names parse")))
    .collect()
}

/// `{1, 3/2, 3} × {Fp, SymFp}` and the I-norm.
pub fn catalog_kinds() -> Vec<NormKind> {
    let mut out = Vec::new();
    for p in [1.0, 1.5, 3.0] {
        let p = PNorm::new(p).expect("valid exponent");
        out.push(NormKind::Fp(p));
        out.push(NormKind::SymFp(p));
    }
    out.push(NormKind::I);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gpd::groupoid_isomorphic;

    #[test]
    fn builtins_parse() {
        assert_eq!(builtin("cyclic:4").unwrap().len(), 4);
        assert_eq!(builtin("pair:3").unwrap().units().len(), 3);
        assert_eq!(builtin("symmetric:3").unwrap().len(), 6);
        assert_eq!(builtin("union:cyclic:2+pair:2").unwrap().len(), 6);
        let swap = builtin("swap-action").unwrap();
        assert_eq!(swap.len(), 4);
        // Z_2 acting on two points by the swap is the pair groupoid.
        assert!(groupoid_isomorphic(&swap, &pair(2), 1000)
            .unwrap()
            .is_some());
    }

    #[test]
    fn bad_builtins() {
        for bad in [
            "cyclic",
            "cyclic:x",
            "cyclic:0",
            "pair:99",
            "klein:2",
            "torus",
            "union:klein",
        ] {
            assert!(matches!(builtin(bad), Err(Error::Malformed(_))), "{bad}");
        }
    }

    #[test]
    fn catalog_shape() {
        assert_eq!(catalog().len(), 9);
        assert_eq!(catalog_kinds().len(), 7);
    }
}
