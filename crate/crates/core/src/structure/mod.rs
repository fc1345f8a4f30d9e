//! Hermitian elements, the C*-core, ultrahermitian idempotents and
//! Moore-Penrose partial isometries of a finite groupoid algebra.
//!
//! Every operation takes an [`AlgebraContext`], which fixes the groupoid and
//! the norm the algebra carries: the reduced `F^p_λ` norm, its symmetrized
//! version, or the I-norm. In the finite case all three live on the same
//! vector space `C_c(G)`.

mod homotopy;
mod mp;

use num_complex::Complex64;
use serde::Serialize;

use crate::conv::{self, convolve, convolve_all, i_norm, involution, AlgElem};
use crate::gpd::Groupoid;
use crate::lprep::{fp_norm, sym_norm, NormEstimate, PNorm, Regime, SolverConfig};
use crate::par;
use crate::sample::{random_element, random_unit_function, stream_rng};
use crate::{Error, Result, ALGEBRAIC_TOL, ITERATIVE_TOL};

pub use homotopy::{homotopy_path, homotopy_rep, spi_semigroup, HomotopyPath, SpiSemigroup};
pub use mp::{
    is_mp_partial_isometry, mp_inverse, mp_inverse_by_search, pi_mp_semigroup_check,
    unit_idempotents, verify_mp, DecompositionDoc, MpDecomposition, PiMpReport,
};

/// Which completion of `C_c(G)` the algebra is.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "p", rename_all = "kebab-case")]
pub enum NormKind {
    /// `F^p_λ(G)`.
    Fp(PNorm),
    /// `F^{p,*}_λ(G)`, norm `max(‖f‖_λ, ‖f*‖_λ)`.
    SymFp(PNorm),
    /// `L^I(G)`.
    I,
}

impl NormKind {
    pub fn exponent(self) -> PNorm {
        match self {
            NormKind::Fp(p) | NormKind::SymFp(p) => p,
            NormKind::I => PNorm::ONE,
        }
    }

    pub fn regime(self) -> Regime {
        match self {
            NormKind::I => Regime::Exact,
            NormKind::Fp(p) | NormKind::SymFp(p) => p.regime(),
        }
    }

    /// The structure results for MP-partial isometries need `p ≠ 2`.
    pub fn is_structural(self) -> bool {
        !self.exponent().is_two()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct AlgebraContext<'g> {
    pub groupoid: &'g Groupoid,
    pub kind: NormKind,
    pub solver: SolverConfig,
}

impl<'g> AlgebraContext<'g> {
    pub fn new(groupoid: &'g Groupoid, kind: NormKind) -> Self {
        AlgebraContext {
            groupoid,
            kind,
            solver: SolverConfig::default(),
        }
    }

    pub fn with_solver(self, solver: SolverConfig) -> Self {
        AlgebraContext { solver, ..self }
    }

    pub fn g(&self) -> &'g Groupoid {
        self.groupoid
    }

    pub fn norm(&self, f: &AlgElem) -> Result<NormEstimate> {
        let g = self.groupoid;
        match self.kind {
            NormKind::Fp(p) => fp_norm(g, f, p, &self.solver),
            NormKind::SymFp(p) => sym_norm(g, f, p, &self.solver),
            NormKind::I => {
                conv::check_len(g, f)?;
                Ok(NormEstimate {
                    value: i_norm(g, f),
                    regime: Regime::Exact,
                    converged: true,
                    witness: vec![],
                    iterations: 0,
                })
            }
        }
    }

    pub fn mul(&self, a: &AlgElem, b: &AlgElem) -> Result<AlgElem> {
        convolve(self.groupoid, a, b)
    }

    pub fn star(&self, a: &AlgElem) -> AlgElem {
        involution(self.groupoid, a)
    }

    pub fn one(&self) -> AlgElem {
        conv::unit(self.groupoid)
    }

    pub(crate) fn require_structural(&self) -> Result<()> {
        if self.kind.is_structural() {
            Ok(())
        } else {
            Err(Error::PTwoRefused)
        }
    }
}

/// The `t` grid for the `‖exp(itf)‖ ≤ 1` test.
pub const EXP_GRID: [f64; 10] = [0.1, 0.3, 1.0, 3.0, 10.0, -0.1, -0.3, -1.0, -3.0, -10.0];

#[derive(Clone, Debug, Serialize)]
pub struct HermitianEvidence {
    /// `f` vanishes off the units and is real on them.
    pub structural: bool,
    /// `‖exp(itf)‖ ≤ 1 + tol` across [`EXP_GRID`].
    pub numerical: bool,
    pub max_exp_norm: f64,
    pub hermitian: bool,
}

/// Whether `f` is real-valued and supported on the unit space.
pub fn is_real_on_units(g: &Groupoid, f: &AlgElem) -> bool {
    let tol = ALGEBRAIC_TOL * f.sup_norm().max(1.0);
    g.arrows().all(|x| {
        let v = f.coeff(x);
        if g.is_unit(x) {
            v.im.abs() <= tol
        } else {
            v.norm() <= tol
        }
    })
}

/// Both hermitian tests, without judging their agreement.
pub fn hermitian_evidence(ctx: &AlgebraContext, f: &AlgElem) -> Result<HermitianEvidence> {
    let g = ctx.g();
    conv::check_len(g, f)?;
    let structural = is_real_on_units(g, f);
    let norms = par::try_map_indexed(ctx.solver.mode, EXP_GRID.len(), |k| {
        let e = conv::exp(g, &f.scale(Complex64::new(0.0, EXP_GRID[k])))?;
        ctx.norm(&e).map(|n| n.value)
    })?;
    let max_exp_norm = norms.into_iter().fold(0.0, f64::max);
    let numerical = max_exp_norm <= 1.0 + ITERATIVE_TOL;
    let hermitian = if ctx.kind.is_structural() {
        structural
    } else {
        numerical
    };
    Ok(HermitianEvidence {
        structural,
        numerical,
        max_exp_norm,
        hermitian,
    })
}

/// Hermitian test. For `p ≠ 2` the structural and numerical verdicts must
/// agree; a disagreement is reported as an error.
pub fn is_hermitian(ctx: &AlgebraContext, f: &AlgElem) -> Result<HermitianEvidence> {
    let ev = hermitian_evidence(ctx, f)?;
    if ctx.kind.is_structural() && ev.structural != ev.numerical {
        return Err(Error::HermitianDisagreement {
            structural: ev.structural,
            numerical: ev.numerical,
        });
    }
    Ok(ev)
}

#[derive(Clone, Debug, Serialize)]
pub struct CoreReport {
    pub dimension: usize,
    /// `δ_u` for each unit `u`, in unit order.
    #[serde(skip)]
    pub basis: Vec<AlgElem>,
    pub samples: usize,
    /// Largest `|‖x*x‖ − ‖x‖²|`, relative to `‖x‖²`.
    pub cstar_max_error: f64,
    pub commutator_max_error: f64,
}

/// The C*-core `span{A_h + iA_h}`: functions supported on the unit space.
///
/// Checks the C*-identity and commutativity on `samples` seeded random core
/// elements.
pub fn core(ctx: &AlgebraContext, samples: usize, seed: u64) -> Result<CoreReport> {
    ctx.require_structural()?;
    let g = ctx.g();
    let basis: Vec<AlgElem> = g.units().iter().map(|&u| AlgElem::delta(g, u)).collect();
    let errors = par::try_map_indexed(ctx.solver.mode, samples, |k| -> Result<(f64, f64)> {
        let mut rng = stream_rng(seed, k as u64);
        let x = random_unit_function(g, &mut rng, true);
        let y = random_unit_function(g, &mut rng, true);
        let xsx = ctx.mul(&ctx.star(&x), &x)?;
        let nx = ctx.norm(&x)?.value;
        let lhs = ctx.norm(&xsx)?.value;
        let cstar = (lhs - nx * nx).abs() / (nx * nx).max(f64::MIN_POSITIVE);
        let comm = (&ctx.mul(&x, &y)? - &ctx.mul(&y, &x)?).sup_norm();
        Ok((cstar, comm))
    })?;
    let (cstar_max_error, commutator_max_error) = errors
        .into_iter()
        .fold((0.0f64, 0.0f64), |(a, b), (c, d)| (a.max(c), b.max(d)));
    Ok(CoreReport {
        dimension: basis.len(),
        basis,
        samples,
        cstar_max_error,
        commutator_max_error,
    })
}

/// `res ∘ j`: values on the unit space, in unit order.
pub fn restrict_to_units(g: &Groupoid, f: &AlgElem) -> Vec<Complex64> {
    g.units().iter().map(|&u| f.coeff(u)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct UltraEvidence {
    /// `e` is a `{0,1}`-valued function on the unit space.
    pub structural: bool,
    /// Every sampled compression stayed within `1 + tol`.
    pub sampled: bool,
    pub worst_norm: f64,
    pub samples: usize,
    #[serde(skip)]
    pub witness: Option<(AlgElem, AlgElem)>,
}

/// Tests `‖eae + (1−e)b(1−e)‖ ≤ 1` over random contraction pairs.
pub fn is_ultrahermitian_idempotent(
    ctx: &AlgebraContext,
    e: &AlgElem,
    samples: usize,
    seed: u64,
) -> Result<UltraEvidence> {
    let g = ctx.g();
    let defect = ctx.mul(e, e)?.relative_distance(e);
    if defect > ALGEBRAIC_TOL {
        return Err(Error::NotIdempotent(defect));
    }
    let structural = is_real_on_units(g, e)
        && g.units().iter().all(|&u| {
            let v = e.coeff(u).re;
            v.abs() <= ALGEBRAIC_TOL || (v - 1.0).abs() <= ALGEBRAIC_TOL
        });
    let complement = &ctx.one() - e;
    let results = par::try_map_indexed(ctx.solver.mode, samples, |k| {
        let mut rng = stream_rng(seed, k as u64);
        let a = contraction(ctx, random_element(g, &mut rng))?;
        let b = contraction(ctx, random_element(g, &mut rng))?;
        let m = &convolve_all(g, &[e, &a, e])? + &convolve_all(g, &[&complement, &b, &complement])?;
        Ok::<_, Error>((ctx.norm(&m)?.value, a, b))
    })?;
    let mut worst_norm = 0.0f64;
    let mut witness = None;
    for (v, a, b) in results {
        if v > worst_norm {
            worst_norm = v;
            if v > 1.0 + ITERATIVE_TOL {
                witness = Some((a, b));
            }
        }
    }
    Ok(UltraEvidence {
        structural,
        sampled: worst_norm <= 1.0 + ITERATIVE_TOL,
        worst_norm,
        samples,
        witness,
    })
}

/// Rescales `f` to norm one in the context norm.
pub fn contraction(ctx: &AlgebraContext, f: AlgElem) -> Result<AlgElem> {
    let n = ctx.norm(&f)?.value;
    Ok(if n > 0.0 { &f * (1.0 / n) } else { f })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gpd::{group_cyclic, pair};

    fn p(v: f64) -> PNorm {
        PNorm::new(v).unwrap()
    }

    #[test]
    fn hermitian_examples() {
        let z2 = group_cyclic(2);
        for kind in [
            NormKind::Fp(p(3.0)),
            NormKind::Fp(p(1.5)),
            NormKind::SymFp(p(3.0)),
            NormKind::I,
        ] {
            let ctx = AlgebraContext::new(&z2, kind);
            let one = ctx.one();
            assert!(is_hermitian(&ctx, &one).unwrap().hermitian);
            let ev = is_hermitian(&ctx, &one.scale(Complex64::new(0.0, 1.0))).unwrap();
            assert!(!ev.hermitian);
            assert!((ev.max_exp_norm - 10f64.exp()).abs() < 1e-6 * 10f64.exp());
            let dg = AlgElem::delta(&z2, 1);
            let ev = is_hermitian(&ctx, &dg).unwrap();
            assert!(!ev.structural && !ev.numerical);
        }
    }

    #[test]
    fn p_two_uses_the_numerical_test() {
        // δ_g is self-adjoint in the group C*-algebra.
        let z2 = group_cyclic(2);
        let ctx = AlgebraContext::new(&z2, NormKind::Fp(p(2.0)));
        let ev = is_hermitian(&ctx, &AlgElem::delta(&z2, 1)).unwrap();
        assert!(ev.hermitian && !ev.structural);
        assert!(matches!(core(&ctx, 1, 0), Err(Error::PTwoRefused)));
    }

    #[test]
    fn core_of_catalog_groupoids() {
        for g in [group_cyclic(3), pair(2), pair(3)] {
            let ctx = AlgebraContext::new(&g, NormKind::Fp(p(1.5)));
            let report = core(&ctx, 50, 1).unwrap();
            assert_eq!(report.dimension, g.units().len());
            assert!(report.cstar_max_error < 1e-6);
            assert_eq!(report.commutator_max_error, 0.0);
        }
    }

    #[test]
    fn unit_subsets_are_ultrahermitian() {
        let p3 = pair(3);
        let ctx = AlgebraContext::new(&p3, NormKind::Fp(p(3.0)));
        let units = p3.units().to_vec();
        for mask in 0..8usize {
            let chosen: Vec<_> = (0..3)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| units[i])
                .collect();
            let e = conv::indicator_of(&p3, &chosen);
            let ev = is_ultrahermitian_idempotent(&ctx, &e, 40, mask as u64).unwrap();
            assert!(ev.structural && ev.sampled, "{mask}: {}", ev.worst_norm);
        }
    }

    #[test]
    fn non_hermitian_idempotent_in_p2() {
        let p2 = pair(2);
        let ctx = AlgebraContext::new(&p2, NormKind::Fp(p(3.0)));
        let e = &AlgElem::delta(&p2, p2.arrow_by_name("(1,1)").unwrap())
            + &AlgElem::delta(&p2, p2.arrow_by_name("(1,2)").unwrap());
        assert!(!is_hermitian(&ctx, &e).unwrap().hermitian);
        let ev = is_ultrahermitian_idempotent(&ctx, &e, 200, 3).unwrap();
        assert!(!ev.structural);
        assert!(!ev.sampled, "worst {}", ev.worst_norm);
        let (a, b) = ev.witness.unwrap();
        assert!(ctx.norm(&a).unwrap().value <= 1.0 + 1e-9);
        assert!(ctx.norm(&b).unwrap().value <= 1.0 + 1e-9);
    }

    #[test]
    fn non_idempotent_rejected() {
        let p2 = pair(2);
        let ctx = AlgebraContext::new(&p2, NormKind::I);
        let f = AlgElem::delta(&p2, 1);
        assert!(matches!(
            is_ultrahermitian_idempotent(&ctx, &f, 1, 0),
            Err(Error::NotIdempotent(_))
        ));
    }

    #[test]
    fn restriction_reads_unit_values() {
        let p2 = pair(2);
        let f = AlgElem::from_real(&[1.0, 2.0, 3.0, 4.0]);
        let r = restrict_to_units(&p2, &f);
        assert_eq!(r, vec![Complex64::new(1.0, 0.0), Complex64::new(4.0, 0.0)]);
    }
}
