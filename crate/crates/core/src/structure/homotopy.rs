use num_complex::Complex64;
use serde::Serialize;

use super::{is_mp_partial_isometry, AlgebraContext};
use crate::conv::{self, AlgElem};
use crate::gpd::Bisection;
use crate::isg::{from_bisections, BisectionSemigroup, CayleyTable, InvSemigroup};
use crate::par;
use crate::{Error, Result};

/// Canonical representative of the homotopy class of an MP-partial
/// isometry: its support.
pub fn homotopy_rep(ctx: &AlgebraContext, a: &AlgElem) -> Result<Bisection> {
    is_mp_partial_isometry(ctx, a)?
        .map(|d| d.bisection)
        .ok_or(Error::NotPartialIsometry)
}

#[derive(Clone, Debug, Serialize)]
pub struct HomotopyPath {
    #[serde(skip)]
    pub samples: Vec<AlgElem>,
    pub steps: usize,
    pub all_in_pi_mp: bool,
    /// Largest distance between consecutive samples in the context norm.
    pub max_gap: f64,
    /// The same distances measured in the sup norm.
    pub max_sup_gap: f64,
}

/// The path `h_t(x) = exp(i(1−t)θ_x)` on `B = supp(a)` where
/// `a(x) = exp(iθ_x)`, sampled at `t = k/steps`. It runs from `a` to `1_B`.
pub fn homotopy_path(ctx: &AlgebraContext, a: &AlgElem, steps: usize) -> Result<HomotopyPath> {
    let g = ctx.g();
    let d = is_mp_partial_isometry(ctx, a)?.ok_or(Error::NotPartialIsometry)?;
    let steps = steps.max(1);
    let angles: Vec<f64> = d.phases.iter().map(|c| c.arg()).collect();
    let samples: Vec<AlgElem> = (0..=steps)
        .map(|k| {
            let t = k as f64 / steps as f64;
            let mut h = AlgElem::zero(g);
            for (&x, &theta) in d.bisection.arrows().iter().zip(&angles) {
                h.set(x, Complex64::from_polar(1.0, (1.0 - t) * theta));
            }
            h
        })
        .collect();
    let checks = par::try_map_indexed(
        ctx.solver.mode,
        samples.len(),
        |k| -> Result<(bool, f64, f64)> {
            let member = is_mp_partial_isometry(ctx, &samples[k])?.is_some();
            if k == 0 {
                return Ok((member, 0.0, 0.0));
            }
            let diff = &samples[k] - &samples[k - 1];
            Ok((member, ctx.norm(&diff)?.value, diff.sup_norm()))
        },
    )?;
    Ok(HomotopyPath {
        steps,
        all_in_pi_mp: checks.iter().all(|c| c.0),
        max_gap: checks.iter().map(|c| c.1).fold(0.0, f64::max),
        max_sup_gap: checks.iter().map(|c| c.2).fold(0.0, f64::max),
        samples,
    })
}

/// `S_π`: homotopy classes of MP-partial isometries, together with the map
/// `Φ(B) = [1_B]` from the bisection semigroup.
#[derive(Clone, Debug)]
pub struct SpiSemigroup {
    pub bisections: BisectionSemigroup,
    /// Class representatives (supports), one per element of `semigroup`.
    pub classes: Vec<Bisection>,
    pub semigroup: InvSemigroup,
    /// `phi[i]` is the class of `1_B` for the `i`-th bisection.
    pub phi: Vec<usize>,
    pub phi_is_isomorphism: bool,
}

/// Builds `S_π` with products computed in the algebra: the class of
/// `[1_A][1_B]` is the support of `1_A ∗ 1_B`.
pub fn spi_semigroup(ctx: &AlgebraContext, work_bound: u64) -> Result<SpiSemigroup> {
    ctx.require_structural()?;
    let g = ctx.g();
    let bisections = from_bisections(g, work_bound)?;
    let bs = &bisections.bisections;
    let indicators: Vec<AlgElem> = bs.iter().map(|b| conv::indicator(g, b)).collect();
    let classes: Vec<Bisection> = par::try_map_indexed(ctx.solver.mode, bs.len(), |i| {
        homotopy_rep(ctx, &indicators[i])
    })?;
    let class_index = |b: &Bisection| {
        classes
            .iter()
            .position(|c| c == b)
            .ok_or_else(|| Error::Inconsistent(format!("support {} is not a class", b.display(g))))
    };
    let phi = classes
        .iter()
        .map(class_index)
        .collect::<Result<Vec<_>>>()?;
    let n = classes.len();
    let mul = par::try_map_indexed(ctx.solver.mode, n * n, |k| {
        let prod = ctx.mul(&indicators[k / n], &indicators[k % n])?;
        class_index(&homotopy_rep(ctx, &prod)?)
    })?;
    let names = classes
        .iter()
        .map(|c| format!("[1_{}]", c.display(g)))
        .collect();
    let semigroup = InvSemigroup::new(CayleyTable::new(names, mul)?, None)?;
    let phi_is_isomorphism = bisections.semigroup.is_isomorphism(&semigroup, &phi);
    Ok(SpiSemigroup {
        bisections,
        classes,
        semigroup,
        phi,
        phi_is_isomorphism,
    })
}
