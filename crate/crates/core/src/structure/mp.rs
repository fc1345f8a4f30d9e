use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::{is_hermitian, is_real_on_units, AlgebraContext};
use crate::conv::{self, convolve_all, AlgElem};
use crate::gpd::{Bisection, Groupoid};
use crate::isg::normalizer_semigroup;
use crate::par;
use crate::{Error, Result, ALGEBRAIC_TOL};

// Coefficients below this fraction of the sup norm count as zero when
// reading off supports.
const SUPPORT_TOL: f64 = 1e-12;

/// Support of `a`, ignoring roundoff-level coefficients.
pub(crate) fn support(a: &AlgElem) -> Vec<usize> {
    a.support(SUPPORT_TOL * a.sup_norm())
}

/// `b(x⁻¹) = 1/a(x)` on a bisection support, checked against the four
/// Moore-Penrose conditions. `None` when the support is not a bisection.
pub fn mp_inverse(ctx: &AlgebraContext, a: &AlgElem) -> Result<Option<AlgElem>> {
    let g = ctx.g();
    conv::check_len(g, a)?;
    let supp = support(a);
    if !g.is_bisection(&supp) {
        return Ok(None);
    }
    let mut b = AlgElem::zero(g);
    for &x in &supp {
        b.set(g.inv(x), a.coeff(x).inv());
    }
    if !verify_mp(ctx, a, &b)? {
        return Err(Error::MpVerification(format!(
            "closed-form inverse fails the Moore-Penrose conditions on support {}",
            Bisection::new(g, supp).expect("checked").display(g)
        )));
    }
    Ok(Some(b))
}

/// `a = aba`, `b = bab`, and `ab`, `ba` hermitian.
pub fn verify_mp(ctx: &AlgebraContext, a: &AlgElem, b: &AlgElem) -> Result<bool> {
    let g = ctx.g();
    if !convolve_all(g, &[a, b, a])?.approx_eq(a, ALGEBRAIC_TOL)
        || !convolve_all(g, &[b, a, b])?.approx_eq(b, ALGEBRAIC_TOL)
    {
        return Ok(false);
    }
    Ok(is_hermitian(ctx, &ctx.mul(a, b)?)?.hermitian
        && is_hermitian(ctx, &ctx.mul(b, a)?)?.hermitian)
}

/// Moore-Penrose inverse found without assuming anything about the support
/// of `a`.
///
/// For `p ≠ 2` the hermitian idempotents are the indicators `1_X` of unit
/// subsets, so `ab = 1_X`, `ba = 1_Y` for some `X, Y`. Each pair gives the
/// linear system `ab = 1_X, ba = 1_Y, b·1_X = b, 1_Y·b = b`, solved in the
/// least-squares sense; candidates must then pass [`verify_mp`].
pub fn mp_inverse_by_search(ctx: &AlgebraContext, a: &AlgElem) -> Result<Option<AlgElem>> {
    ctx.require_structural()?;
    let g = ctx.g();
    conv::check_len(g, a)?;
    let units = g.units();
    if units.len() > 10 {
        return Err(Error::WorkBoundExceeded {
            arrows: 2 * units.len(),
            bound: 1 << 20,
        });
    }
    let n = g.len();
    let subsets = 1usize << units.len();
    let idem = |mask: usize| {
        let chosen: Vec<usize> = (0..units.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| units[i])
            .collect();
        conv::indicator_of(g, &chosen)
    };
    let scale = a.sup_norm().max(1.0);
    for xm in 0..subsets {
        let ex = idem(xm);
        for ym in 0..subsets {
            let ey = idem(ym);
            let mut l = DMatrix::<Complex64>::zeros(4 * n, n);
            for k in 0..n {
                let d = AlgElem::delta(g, k);
                let blocks = [
                    ctx.mul(a, &d)?,
                    ctx.mul(&d, a)?,
                    &ctx.mul(&d, &ex)? - &d,
                    &ctx.mul(&ey, &d)? - &d,
                ];
                for (bi, col) in blocks.iter().enumerate() {
                    for (r, v) in col.coeffs().iter().enumerate() {
                        l[(bi * n + r, k)] = *v;
                    }
                }
            }
            let mut rhs = DVector::<Complex64>::zeros(4 * n);
            for r in 0..n {
                rhs[r] = ex.coeff(r);
                rhs[n + r] = ey.coeff(r);
            }
            let svd = l.clone().svd(true, true);
            let Ok(sol) = svd.solve(&rhs, 1e-12 * scale) else {
                continue;
            };
            let residual = (&l * &sol - &rhs)
                .iter()
                .map(|c| c.norm())
                .fold(0.0, f64::max);
            if residual > ALGEBRAIC_TOL * scale {
                continue;
            }
            let b = AlgElem::from_coeffs(sol.iter().copied().collect());
            if verify_mp(ctx, a, &b)? {
                return Ok(Some(b));
            }
        }
    }
    Ok(None)
}

/// Witness that `a = Σ_{x∈B} phase(x)·δ_x` with `B` a bisection and
/// unimodular phases.
#[derive(Clone, Debug, PartialEq)]
pub struct MpDecomposition {
    pub bisection: Bisection,
    /// Aligned with `bisection.arrows()`.
    pub phases: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionDoc {
    pub bisection: Vec<String>,
    pub phases: Vec<[f64; 2]>,
}

impl MpDecomposition {
    pub fn reassemble(&self, g: &Groupoid) -> AlgElem {
        let mut f = AlgElem::zero(g);
        for (&x, &ph) in self.bisection.arrows().iter().zip(&self.phases) {
            f.set(x, ph);
        }
        f
    }

    pub fn doc(&self, g: &Groupoid) -> DecompositionDoc {
        DecompositionDoc {
            bisection: self
                .bisection
                .arrows()
                .iter()
                .map(|&x| g.name(x).to_string())
                .collect(),
            phases: self.phases.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

/// Membership in `PI_MP`: `a` and its Moore-Penrose inverse are both
/// contractions. Returns the support/phase decomposition on success.
pub fn is_mp_partial_isometry(
    ctx: &AlgebraContext,
    a: &AlgElem,
) -> Result<Option<MpDecomposition>> {
    ctx.require_structural()?;
    let Some(b) = mp_inverse(ctx, a)? else {
        return Ok(None);
    };
    let bound = 1.0 + ALGEBRAIC_TOL;
    if ctx.norm(a)?.value > bound || ctx.norm(&b)?.value > bound {
        return Ok(None);
    }
    let g = ctx.g();
    let arrows = support(a);
    let phases: Vec<Complex64> = arrows.iter().map(|&x| a.coeff(x)).collect();
    if let Some(bad) = phases
        .iter()
        .find(|c| (c.norm() - 1.0).abs() > ALGEBRAIC_TOL)
    {
        return Err(Error::Inconsistent(format!(
            "contractive element with contractive inverse has a coefficient of modulus {}",
            bad.norm()
        )));
    }
    let bisection = Bisection::new(g, arrows).expect("mp_inverse checked the support");
    Ok(Some(MpDecomposition { bisection, phases }))
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PiMpReport {
    pub samples: usize,
    pub products_in_pi_mp: bool,
    pub daggers_in_pi_mp: bool,
    /// Largest `‖(ab)† − b†a†‖_∞`.
    pub reverse_order_error: f64,
    pub hermitian_idempotents: usize,
    pub idempotents_commute: bool,
    /// `a†ea` is a hermitian idempotent for every sample `a` and every `e`.
    pub compressions_ok: bool,
    pub zero_absorbing: Option<bool>,
    pub normalizer_members: usize,
    /// Size of the product closure of the normalizer members, when it
    /// stays within the bound.
    pub normalizer_size: Option<usize>,
    pub normalizer_note: Option<String>,
    pub all_pass: bool,
}

/// Indicators of all unit subsets, the hermitian idempotents for `p ≠ 2`.
pub fn unit_idempotents(g: &Groupoid) -> Vec<AlgElem> {
    let units = g.units();
    (0..1usize << units.len())
        .map(|mask| {
            let chosen: Vec<usize> = (0..units.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| units[i])
                .collect();
            conv::indicator_of(g, &chosen)
        })
        .collect()
}

fn is_hermitian_idempotent(ctx: &AlgebraContext, e: &AlgElem) -> Result<bool> {
    Ok(ctx.mul(e, e)?.approx_eq(e, ALGEBRAIC_TOL)
        && is_real_on_units(ctx.g(), e)
        && is_hermitian(ctx, e)?.hermitian)
}

/// Checks that a sample of MP-partial isometries behaves as an inverse
/// semigroup: products and daggers stay in `PI_MP`, `(ab)† = b†a†`,
/// hermitian idempotents commute, and `a†ea` is a hermitian idempotent.
pub fn pi_mp_semigroup_check(
    ctx: &AlgebraContext,
    sample: &[AlgElem],
    closure_bound: usize,
) -> Result<PiMpReport> {
    ctx.require_structural()?;
    let g = ctx.g();
    let mode = ctx.solver.mode;
    let daggers = par::try_map_indexed(mode, sample.len(), |i| {
        if is_mp_partial_isometry(ctx, &sample[i])?.is_none() {
            return Err(Error::NotPartialIsometry);
        }
        Ok(mp_inverse(ctx, &sample[i])?.expect("member of PI_MP"))
    })?;
    let daggers_in_pi_mp = par::try_map_indexed(mode, daggers.len(), |i| {
        is_mp_partial_isometry(ctx, &daggers[i]).map(|d| d.is_some())
    })?
    .into_iter()
    .all(|x| x);

    let n = sample.len();
    let pairs = par::try_map_indexed(mode, n * n, |k| -> Result<(bool, f64)> {
        let (i, j) = (k / n, k % n);
        let ab = ctx.mul(&sample[i], &sample[j])?;
        if is_mp_partial_isometry(ctx, &ab)?.is_none() {
            return Ok((false, f64::INFINITY));
        }
        let lhs = mp_inverse(ctx, &ab)?.expect("member of PI_MP");
        let rhs = ctx.mul(&daggers[j], &daggers[i])?;
        Ok((true, (&lhs - &rhs).sup_norm()))
    })?;
    let products_in_pi_mp = pairs.iter().all(|p| p.0);
    let reverse_order_error = pairs.iter().map(|p| p.1).fold(0.0, f64::max);

    let idempotents = unit_idempotents(g);
    let m = idempotents.len();
    let commute = par::try_map_indexed(mode, m * m, |k| -> Result<bool> {
        let (e, f) = (&idempotents[k / m], &idempotents[k % m]);
        let ef = ctx.mul(e, f)?;
        Ok(ef.approx_eq(&ctx.mul(f, e)?, ALGEBRAIC_TOL) && is_hermitian_idempotent(ctx, &ef)?)
    })?;
    let idempotents_commute = commute.into_iter().all(|x| x);
    let compressions = par::try_map_indexed(mode, n * m, |k| {
        let (i, e) = (k / m, &idempotents[k % m]);
        is_hermitian_idempotent(ctx, &convolve_all(g, &[&daggers[i], e, &sample[i]])?)
    })?;
    let compressions_ok = compressions.into_iter().all(|x| x);

    let zero = AlgElem::zero(g);
    let zero_absorbing = sample.iter().any(|a| a.sup_norm() == 0.0).then(|| {
        sample.iter().all(|a| {
            ctx.mul(&zero, a)
                .map(|p| p.sup_norm() == 0.0)
                .unwrap_or(false)
                && ctx
                    .mul(a, &zero)
                    .map(|p| p.sup_norm() == 0.0)
                    .unwrap_or(false)
        })
    });

    let (normalizer_members, normalizer_size, normalizer_note) =
        match normalizer_semigroup(ctx, sample, &idempotents, closure_bound) {
            Ok(nz) => (nz.members.len(), Some(nz.semigroup.len()), None),
            Err(Error::ClosureBoundExceeded(bound)) => {
                let members = crate::isg::normalizer_members(ctx, sample, &idempotents)?;
                (
                    members.len(),
                    None,
                    Some(format!(
                        "product closure exceeds {bound} elements; table not built"
                    )),
                )
            }
            Err(e) => return Err(e),
        };
    let all_pass = products_in_pi_mp
        && daggers_in_pi_mp
        && reverse_order_error <= ALGEBRAIC_TOL
        && idempotents_commute
        && compressions_ok
        && zero_absorbing != Some(false)
        && normalizer_members == n;
    Ok(PiMpReport {
        samples: n,
        products_in_pi_mp,
        daggers_in_pi_mp,
        reverse_order_error,
        hermitian_idempotents: m,
        idempotents_commute,
        compressions_ok,
        zero_absorbing,
        normalizer_members,
        normalizer_size,
        normalizer_note,
        all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gpd::{enumerate_bisections, group_cyclic, pair, DEFAULT_WORK_BOUND};
    use crate::lprep::PNorm;
    use crate::sample::{phase_decorated, random_bisection, random_element, stream_rng};
    use crate::structure::NormKind;

    fn ctx_at(g: &Groupoid, p: f64) -> AlgebraContext<'_> {
        AlgebraContext::new(g, NormKind::Fp(PNorm::new(p).unwrap()))
    }

    fn named(g: &Groupoid, names: &[&str]) -> Bisection {
        Bisection::new(
            g,
            names.iter().map(|n| g.arrow_by_name(n).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn indicator_inverse() {
        let p2 = pair(2);
        let ctx = ctx_at(&p2, 3.0);
        let b = named(&p2, &["(1,2)"]);
        let a = conv::indicator(&p2, &b);
        let d = mp_inverse(&ctx, &a).unwrap().unwrap();
        assert_eq!(d, conv::indicator(&p2, &named(&p2, &["(2,1)"])));
        assert_eq!(
            ctx.mul(&d, &a).unwrap(),
            conv::indicator(&p2, &b.source_set(&p2))
        );
        assert_eq!(
            ctx.mul(&a, &d).unwrap(),
            conv::indicator(&p2, &b.range_set(&p2))
        );
    }

    #[test]
    fn zero_and_scaled_generator() {
        let z2 = group_cyclic(2);
        let ctx = ctx_at(&z2, 3.0);
        assert_eq!(
            mp_inverse(&ctx, &AlgElem::zero(&z2)).unwrap().unwrap(),
            AlgElem::zero(&z2)
        );
        let a = AlgElem::delta(&z2, 1).scale(Complex64::new(2.0, 0.0));
        let b = mp_inverse(&ctx, &a).unwrap().unwrap();
        assert!(b.approx_eq(
            &AlgElem::delta(&z2, 1).scale(Complex64::new(0.5, 0.0)),
            1e-15
        ));
        assert!((ctx.norm(&b).unwrap().value - 0.5).abs() < 1e-9);
        assert!(is_mp_partial_isometry(&ctx, &a).unwrap().is_none());
    }

    #[test]
    fn non_bisection_support_has_no_closed_form() {
        let p2 = pair(2);
        let ctx = ctx_at(&p2, 1.5);
        let a = conv::indicator_of(&p2, &[0, 1]);
        assert!(mp_inverse(&ctx, &a).unwrap().is_none());
    }

    #[test]
    fn verify_mp_rejections() {
        let p2 = pair(2);
        let ctx = ctx_at(&p2, 3.0);
        let b = named(&p2, &["(1,2)"]);
        let a = conv::indicator(&p2, &b);
        let inv = conv::indicator(&p2, &crate::gpd::bisection_inv(&p2, &b));
        assert!(verify_mp(&ctx, &a, &inv).unwrap());
        // B·B = ∅, so a·a·a = 0 ≠ a.
        assert!(!verify_mp(&ctx, &a, &a).unwrap());
        // e = δ(1,1) + δ(1,2) is idempotent, so (e, e) satisfies the two
        // generalized-inverse identities, but e·e = e is not hermitian.
        let e = conv::indicator_of(
            &p2,
            &[
                p2.arrow_by_name("(1,1)").unwrap(),
                p2.arrow_by_name("(1,2)").unwrap(),
            ],
        );
        assert!(convolve_all(&p2, &[&e, &e, &e])
            .unwrap()
            .approx_eq(&e, 1e-12));
        assert!(!verify_mp(&ctx, &e, &e).unwrap());
        assert!(mp_inverse(&ctx, &e).unwrap().is_none());
    }

    #[test]
    fn decomposition_of_phases() {
        let p3 = pair(3);
        let ctx = ctx_at(&p3, 1.5);
        for k in 0..20 {
            let mut rng = stream_rng(11, k);
            let b = random_bisection(&p3, &mut rng);
            let a = phase_decorated(&p3, &b, &mut rng);
            let d = is_mp_partial_isometry(&ctx, &a).unwrap().unwrap();
            assert_eq!(d.bisection, b);
            assert!(d.reassemble(&p3).approx_eq(&a, 0.0));
            let half = a.scale(Complex64::new(0.5, 0.0));
            assert!(is_mp_partial_isometry(&ctx, &half).unwrap().is_none());
        }
    }

    #[test]
    fn decomposition_json_shape() {
        let p2 = pair(2);
        let ctx = ctx_at(&p2, 3.0);
        let b = named(&p2, &["(1,2)", "(2,1)"]);
        let d = is_mp_partial_isometry(&ctx, &conv::indicator(&p2, &b))
            .unwrap()
            .unwrap();
        let json = serde_json::to_value(d.doc(&p2)).unwrap();
        assert_eq!(json["bisection"], serde_json::json!(["(1,2)", "(2,1)"]));
        assert_eq!(json["phases"], serde_json::json!([[1.0, 0.0], [1.0, 0.0]]));
    }

    #[test]
    fn p_two_refused() {
        let z2 = group_cyclic(2);
        let ctx = ctx_at(&z2, 2.0);
        let one = conv::unit(&z2);
        assert!(matches!(
            is_mp_partial_isometry(&ctx, &one),
            Err(Error::PTwoRefused)
        ));
        assert!(matches!(
            mp_inverse_by_search(&ctx, &one),
            Err(Error::PTwoRefused)
        ));
    }

    #[test]
    fn search_agrees_with_closed_form() {
        let p2 = pair(2);
        for p in [1.5, 3.0] {
            let ctx = ctx_at(&p2, p);
            for k in 0..12 {
                let mut rng = stream_rng(5, k);
                let b = random_bisection(&p2, &mut rng);
                let a = crate::sample::supported_on(&p2, b.arrows(), &mut rng, |r| {
                    crate::sample::random_complex(r) + Complex64::new(0.1, 0.0)
                });
                let closed = mp_inverse(&ctx, &a).unwrap().unwrap();
                let searched = mp_inverse_by_search(&ctx, &a).unwrap().unwrap();
                assert!((&closed - &searched).sup_norm() <= 1e-9 * closed.sup_norm().max(1.0));
            }
            // A dense element of C_c(P2) is generically invertible: its
            // Moore-Penrose inverse is the ordinary inverse, which the closed
            // form does not see.
            let mut rng = stream_rng(6, 0);
            let a = random_element(&p2, &mut rng);
            assert!(mp_inverse(&ctx, &a).unwrap().is_none());
            let b = mp_inverse_by_search(&ctx, &a).unwrap().unwrap();
            assert!(ctx.mul(&a, &b).unwrap().approx_eq(&conv::unit(&p2), 1e-9));
            assert!(is_mp_partial_isometry(&ctx, &a).unwrap().is_none());
        }
    }

    #[test]
    fn hermitian_idempotents_commute_exhaustively() {
        let p3 = pair(3);
        let ctx = ctx_at(&p3, 3.0);
        let e = unit_idempotents(&p3);
        assert_eq!(e.len(), 8);
        for x in &e {
            for y in &e {
                let xy = ctx.mul(x, y).unwrap();
                assert_eq!(xy, ctx.mul(y, x).unwrap());
                assert!(is_hermitian_idempotent(&ctx, &xy).unwrap());
            }
        }
    }

    #[test]
    fn semigroup_check_on_p2_indicators() {
        let p2 = pair(2);
        let ctx = ctx_at(&p2, 3.0);
        let sample: Vec<AlgElem> = enumerate_bisections(&p2, DEFAULT_WORK_BOUND)
            .unwrap()
            .iter()
            .map(|b| conv::indicator(&p2, b))
            .collect();
        let r = pi_mp_semigroup_check(&ctx, &sample, 1000).unwrap();
        assert!(r.all_pass, "{r:?}");
        assert_eq!(r.zero_absorbing, Some(true));
        assert_eq!(r.normalizer_size, Some(7));
    }

    #[test]
    fn semigroup_check_with_random_phases() {
        let p2 = pair(2);
        let ctx = ctx_at(&p2, 1.5);
        let mut rng = stream_rng(3, 0);
        let sample: Vec<AlgElem> = enumerate_bisections(&p2, DEFAULT_WORK_BOUND)
            .unwrap()
            .iter()
            .map(|b| phase_decorated(&p2, b, &mut rng))
            .collect();
        let r = pi_mp_semigroup_check(&ctx, &sample, 200).unwrap();
        assert!(r.all_pass, "{r:?}");
        assert!(r.normalizer_size.is_none());
        assert_eq!(r.normalizer_members, 7);
    }

    #[test]
    fn non_members_rejected() {
        let p2 = pair(2);
        let ctx = ctx_at(&p2, 3.0);
        let half = conv::unit(&p2).scale(Complex64::new(0.5, 0.0));
        assert!(matches!(
            pi_mp_semigroup_check(&ctx, &[half], 10),
            Err(Error::NotPartialIsometry)
        ));
    }
}
