use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::conv::{self, AlgElem};
use crate::gpd::{Bisection, Groupoid};
use crate::lprep::PNorm;
use crate::structure::{is_real_on_units, mp_inverse, unit_idempotents, AlgebraContext, NormKind};
use crate::{par, Error, Result, ALGEBRAIC_TOL, ITERATIVE_TOL};

use super::builtin;

/// Terms `1..=HEAD` are inspected individually.
const HEAD: u64 = 50;
/// Terms `10^k` and `10^k + 1` for these `k` probe the declared tail.
const LADDER: std::ops::RangeInclusive<u32> = 1..=12;
/// Limits are read off the ladder from here on.
const TAIL_START: u64 = 100_000_000;
/// `sup ‖a_n†‖` counts as finite when the ladder stays within this factor of
/// the head.
const BOUND_FACTOR: f64 = 1.5;

type Term = dyn Fn(&Groupoid, u64) -> AlgElem + Send + Sync;

/// A sequence `a_n → a` in `A_MP` given by a closed-form term.
#[derive(Clone)]
pub struct MpSequence {
    pub name: String,
    pub groupoid: Groupoid,
    pub kind: NormKind,
    pub limit: AlgElem,
    /// Analytic answer to whether `a_n† → a†`, when known.
    pub declared: Option<bool>,
    term: Arc<Term>,
}

impl fmt::Debug for MpSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MpSequence")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .field("declared", &self.declared)
            .finish_non_exhaustive()
    }
}

impl MpSequence {
    pub fn new<F>(
        name: &str,
        groupoid: Groupoid,
        kind: NormKind,
        limit: AlgElem,
        declared: Option<bool>,
        term: F,
    ) -> Self
    where
        F: Fn(&Groupoid, u64) -> AlgElem + Send + Sync + 'static,
    {
        MpSequence {
            name: name.to_string(),
            groupoid,
            kind,
            limit,
            declared,
            term: Arc::new(term),
        }
    }

    /// The `n`-th term, `n ≥ 1`.
    pub fn term(&self, n: u64) -> AlgElem {
        (self.term)(&self.groupoid, n)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RakocevicReport {
    pub name: String,
    pub norm: NormKind,
    /// `a_n† → a†`.
    pub inverses_converge: bool,
    /// `sup ‖a_n†‖ < ∞`.
    pub inverses_bounded: bool,
    /// `a_n†a_n → a†a` and `a_na_n† → aa†`.
    pub projections_converge: bool,
    pub sup_head: f64,
    pub sup_ladder: f64,
    pub tail_inverse_distance: f64,
    pub tail_projection_distance: f64,
    /// All three conditions agree.
    pub consistent: bool,
    pub declared: Option<bool>,
    pub matches_declared: Option<bool>,
}

fn sample_points() -> Vec<u64> {
    (1..=HEAD)
        .chain(LADDER.flat_map(|k| [10u64.pow(k), 10u64.pow(k) + 1]))
        .collect()
}

/// Evaluates the three equivalent conditions of the continuity theorem on
/// `seq`.
pub fn rakocevic_experiment(seq: &MpSequence) -> Result<RakocevicReport> {
    let g = &seq.groupoid;
    let ctx = AlgebraContext::new(g, seq.kind);
    ctx.require_structural()?;
    let limit_dagger = mp_inverse(&ctx, &seq.limit)?.ok_or_else(|| {
        Error::InvalidSequence(format!(
            "{}: the limit has no Moore-Penrose inverse",
            seq.name
        ))
    })?;
    let limit_src = ctx.mul(&limit_dagger, &seq.limit)?;
    let limit_rng = ctx.mul(&seq.limit, &limit_dagger)?;

    let points = sample_points();
    struct Probe {
        n: u64,
        dagger_norm: f64,
        distance: f64,
        inverse_distance: f64,
        projection_distance: f64,
    }
    let probes = par::try_map_indexed(ctx.solver.mode, points.len(), |i| -> Result<Probe> {
        let n = points[i];
        let a = seq.term(n);
        let b = mp_inverse(&ctx, &a)?.ok_or_else(|| {
            Error::InvalidSequence(format!("{}: term {n} is not bisection supported", seq.name))
        })?;
        let dist = |x: &AlgElem, y: &AlgElem| ctx.norm(&(x - y)).map(|e| e.value);
        Ok(Probe {
            n,
            dagger_norm: ctx.norm(&b)?.value,
            distance: dist(&a, &seq.limit)?,
            inverse_distance: dist(&b, &limit_dagger)?,
            projection_distance: dist(&ctx.mul(&b, &a)?, &limit_src)?
                .max(dist(&ctx.mul(&a, &b)?, &limit_rng)?),
        })
    })?;
    let tail: Vec<&Probe> = probes.iter().filter(|p| p.n >= TAIL_START).collect();
    let tail_max = |f: fn(&Probe) -> f64| tail.iter().map(|p| f(p)).fold(0.0, f64::max);
    if tail_max(|p| p.distance) > ITERATIVE_TOL {
        return Err(Error::InvalidSequence(format!(
            "{}: terms do not converge to the limit",
            seq.name
        )));
    }
    let tail_inverse_distance = tail_max(|p| p.inverse_distance);
    let tail_projection_distance = tail_max(|p| p.projection_distance);
    let sup_head = probes
        .iter()
        .filter(|p| p.n <= HEAD)
        .map(|p| p.dagger_norm)
        .fold(0.0, f64::max);
    let sup_ladder = probes
        .iter()
        .filter(|p| p.n > HEAD)
        .map(|p| p.dagger_norm)
        .fold(0.0, f64::max);

    let inverses_converge = tail_inverse_distance <= ITERATIVE_TOL;
    let inverses_bounded = sup_ladder <= BOUND_FACTOR * sup_head.max(1.0);
    let projections_converge = tail_projection_distance <= ITERATIVE_TOL;
    let consistent =
        inverses_converge == inverses_bounded && inverses_bounded == projections_converge;
    Ok(RakocevicReport {
        name: seq.name.clone(),
        norm: seq.kind,
        inverses_converge,
        inverses_bounded,
        projections_converge,
        sup_head,
        sup_ladder,
        tail_inverse_distance,
        tail_projection_distance,
        consistent,
        declared: seq.declared,
        matches_declared: seq.declared.map(|d| consistent && inverses_converge == d),
    })
}

fn named(g: &Groupoid, names: &[&str]) -> Bisection {
    Bisection::new(
        g,
        names
            .iter()
            .map(|n| g.arrow_by_name(n).expect("arrow exists"))
            .collect(),
    )
    .expect("names form a bisection")
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Sequences with known behaviour, covering both outcomes of the theorem.
pub fn rakocevic_battery() -> Vec<MpSequence> {
    let p = |v: f64| PNorm::new(v).expect("valid exponent");
    let p2 = builtin("pair:2").expect("builtin");
    let p3 = builtin("pair:3").expect("builtin");
    let z2 = builtin("cyclic:2").expect("builtin");
    let z3 = builtin("cyclic:3").expect("builtin");
    let swap = builtin("swap-action").expect("builtin");

    let flip = conv::indicator(&p2, &named(&p2, &["(1,2)", "(2,1)"]));
    let corner = conv::indicator(&p2, &named(&p2, &["(1,2)"]));
    let other = conv::indicator(&p2, &named(&p2, &["(2,1)"]));
    let gen3 = AlgElem::delta(&z3, z3.arrow_by_name("g").expect("generator"));
    let swap_b = conv::indicator(
        &swap,
        &Bisection::new(&swap, vec![2, 3]).expect("bisection"),
    );
    let cycle = named(&p3, &["(1,2)", "(2,3)", "(3,1)"]);
    let angles = [0.7, -2.1, 3.0];
    let drift = [1.0, -3.0, 0.5];
    // Phases drifting towards fixed angles at rate t = 1/n.
    let decorated = move |g: &Groupoid, t: f64| {
        let mut f = AlgElem::zero(g);
        for (k, &x) in cycle.arrows().iter().enumerate() {
            f.set(x, Complex64::from_polar(1.0, angles[k] + drift[k] * t));
        }
        f
    };

    vec![
        MpSequence::new(
            "phase-drift",
            p2.clone(),
            NormKind::Fp(p(1.5)),
            flip.clone(),
            Some(true),
            {
                let flip = flip.clone();
                move |_, n| flip.scale(Complex64::from_polar(1.0, 1.0 / n as f64))
            },
        ),
        MpSequence::new(
            "shrinking",
            p2.clone(),
            NormKind::Fp(p(3.0)),
            AlgElem::zero(&p2),
            Some(false),
            {
                let corner = corner.clone();
                move |_, n| corner.scale(real(1.0 / n as f64))
            },
        ),
        MpSequence::new(
            "scaled-units",
            p2.clone(),
            NormKind::I,
            conv::unit(&p2),
            Some(true),
            |g, n| conv::unit(g).scale(real(1.0 + 1.0 / n as f64)),
        ),
        MpSequence::new(
            "vanishing-corner",
            p2.clone(),
            NormKind::Fp(p(1.5)),
            corner.clone(),
            Some(false),
            {
                let (corner, other) = (corner.clone(), other.clone());
                move |_, n| &corner + &other.scale(real(1.0 / n as f64))
            },
        ),
        MpSequence::new(
            "rotating-generator",
            z3.clone(),
            NormKind::SymFp(p(3.0)),
            gen3.clone(),
            Some(true),
            {
                let gen3 = gen3.clone();
                move |_, n| {
                    let t = 1.0 / n as f64;
                    gen3.scale(Complex64::from_polar(1.0 + t * t, t))
                }
            },
        ),
        MpSequence::new(
            "quadratic-decay",
            swap.clone(),
            NormKind::Fp(p(3.0)),
            AlgElem::zero(&swap),
            Some(false),
            {
                let swap_b = swap_b.clone();
                move |_, n| swap_b.scale(Complex64::from_polar(1.0 / (n as f64 * n as f64), 0.4))
            },
        ),
        MpSequence::new(
            "constant-zero",
            z2.clone(),
            NormKind::Fp(p(1.5)),
            AlgElem::zero(&z2),
            Some(true),
            |g, _| AlgElem::zero(g),
        ),
        MpSequence::new(
            "decorated-cycle",
            p3.clone(),
            NormKind::Fp(p(3.0)),
            decorated(&p3, 0.0),
            Some(true),
            move |g, n| decorated(g, 1.0 / n as f64),
        ),
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct GapCheck {
    pub distance: f64,
    pub equal: bool,
    /// `‖e − f‖ < 1` implies `e = f`.
    pub holds: bool,
}

fn require_hermitian_idempotent(ctx: &AlgebraContext, e: &AlgElem) -> Result<()> {
    let defect = ctx.mul(e, e)?.relative_distance(e);
    if defect > ALGEBRAIC_TOL {
        return Err(Error::NotIdempotent(defect));
    }
    if !is_real_on_units(ctx.g(), e) {
        return Err(Error::NotIdempotent(defect));
    }
    Ok(())
}

/// For commuting hermitian idempotents, distance below one forces equality.
pub fn projection_gap_check(ctx: &AlgebraContext, e: &AlgElem, f: &AlgElem) -> Result<GapCheck> {
    require_hermitian_idempotent(ctx, e)?;
    require_hermitian_idempotent(ctx, f)?;
    let distance = ctx.norm(&(e - f))?.value;
    let equal = e.approx_eq(f, ALGEBRAIC_TOL);
    Ok(GapCheck {
        distance,
        equal,
        holds: equal || distance >= 1.0 - ITERATIVE_TOL,
    })
}

/// Runs [`projection_gap_check`] over all pairs of unit-subset indicators.
/// Returns the number of pairs and the failing pairs.
pub fn projection_gap_exhaustive(ctx: &AlgebraContext) -> Result<(usize, Vec<(usize, usize)>)> {
    let e = unit_idempotents(ctx.g());
    let m = e.len();
    let checks = par::try_map_indexed(ctx.solver.mode, m * m, |k| {
        projection_gap_check(ctx, &e[k / m], &e[k % m])
    })?;
    let failures = checks
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.holds)
        .map(|(k, _)| (k / m, k % m))
        .collect();
    Ok((m * m, failures))
}
