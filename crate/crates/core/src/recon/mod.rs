//! The reconstruction pipeline `G ↦ S_π(F^p_λ(G)) ↦ G_tight`, rigidity
//! comparisons, and the Rakočević continuity harness.

mod catalog;
mod rakocevic;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::gpd::{
    groupoid_isomorphic, is_isomorphism, Groupoid, GroupoidDoc, DEFAULT_SEARCH_BUDGET,
    DEFAULT_WORK_BOUND,
};
use crate::isg::{tight_groupoid, TightGroupoid};
use crate::lprep::{PNorm, Regime, SolverConfig};
use crate::structure::{spi_semigroup, AlgebraContext, NormKind};
use crate::{Error, Result, FORMAT_VERSION};

pub use catalog::{builtin, catalog, catalog_kinds, BUILTIN_HELP};
pub use rakocevic::{
    projection_gap_check, projection_gap_exhaustive, rakocevic_battery, rakocevic_experiment,
    GapCheck, MpSequence, RakocevicReport,
};

#[derive(Clone, Copy, Debug)]
pub struct ReconOptions {
    pub solver: SolverConfig,
    pub work_bound: u64,
    pub search_budget: u64,
}

impl Default for ReconOptions {
    fn default() -> Self {
        ReconOptions {
            solver: SolverConfig::default(),
            work_bound: DEFAULT_WORK_BOUND,
            search_budget: DEFAULT_SEARCH_BUDGET,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupoidSummary {
    pub arrows: usize,
    pub units: usize,
}

impl GroupoidSummary {
    pub fn of(g: &Groupoid) -> Self {
        GroupoidSummary {
            arrows: g.len(),
            units: g.units().len(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Success,
    Failed,
}

#[derive(Clone, Debug, Default)]
pub struct Timings {
    pub spi: Duration,
    pub tight: Duration,
    pub isomorphism: Duration,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReconstructionReport {
    pub format: u32,
    pub groupoid: GroupoidSummary,
    pub norm: NormKind,
    /// Regime of the norm evaluations behind the membership checks.
    pub regime: Regime,
    /// Number of indicators `1_B` checked for membership in `PI_MP`.
    pub pi_mp_sample: usize,
    pub spi_elements: usize,
    pub spi_idempotents: usize,
    pub phi_is_isomorphism: bool,
    pub tight_spectrum: usize,
    pub germs: usize,
    pub zero_adjoined: bool,
    pub status: Status,
    /// Arrow of the input ↦ germ of the reconstruction.
    pub isomorphism: Option<BTreeMap<String, String>>,
    #[serde(skip)]
    pub timings: Timings,
}

#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub report: ReconstructionReport,
    pub tight: TightGroupoid,
}

impl Reconstruction {
    pub fn groupoid(&self) -> &Groupoid {
        &self.tight.groupoid
    }

    pub fn groupoid_doc(&self) -> GroupoidDoc {
        GroupoidDoc::from_groupoid(&self.tight.groupoid)
    }
}

/// Normalizes the context: the I-norm carries `p = 1` semantics.
pub fn norm_kind(p: PNorm, ctx: &str) -> Result<NormKind> {
    match ctx {
        "fp" => Ok(NormKind::Fp(p)),
        "symfp" => Ok(NormKind::SymFp(p)),
        "i" => Ok(NormKind::I),
        other => Err(Error::Malformed(format!(
            "unknown context {other:?}; expected fp, symfp or i"
        ))),
    }
}

/// Runs `spi_semigroup → tight_groupoid → groupoid_isomorphic(g, ·)`.
pub fn reconstruct(g: &Groupoid, kind: NormKind, opts: &ReconOptions) -> Result<Reconstruction> {
    let ctx = AlgebraContext::new(g, kind).with_solver(opts.solver);
    ctx.require_structural().map_err(Error::at("context"))?;

    let t0 = Instant::now();
    let spi = spi_semigroup(&ctx, opts.work_bound).map_err(Error::at("spi"))?;
    let t1 = Instant::now();
    let tight = tight_groupoid(&spi.semigroup).map_err(Error::at("tight"))?;
    let t2 = Instant::now();
    let iso = groupoid_isomorphic(g, &tight.groupoid, opts.search_budget)
        .map_err(Error::at("isomorphism"))?;
    let t3 = Instant::now();

    let h = &tight.groupoid;
    let isomorphism = match iso {
        Some(map) if is_isomorphism(g, h, &map) => Some(
            g.arrows()
                .map(|x| (g.name(x).to_string(), h.name(map[x]).to_string()))
                .collect(),
        ),
        Some(_) => {
            return Err(Error::at("isomorphism")(Error::Inconsistent(
                "search returned a map that is not an isomorphism".into(),
            )))
        }
        None => None,
    };
    let status = if isomorphism.is_some() && spi.phi_is_isomorphism {
        Status::Success
    } else {
        Status::Failed
    };
    let report = ReconstructionReport {
        format: FORMAT_VERSION,
        groupoid: GroupoidSummary::of(g),
        norm: kind,
        regime: kind.regime(),
        pi_mp_sample: spi.bisections.bisections.len(),
        spi_elements: spi.semigroup.len(),
        spi_idempotents: spi.semigroup.idempotents().len(),
        phi_is_isomorphism: spi.phi_is_isomorphism,
        tight_spectrum: tight.filters.len(),
        germs: h.len(),
        zero_adjoined: tight.zero_adjoined,
        status,
        isomorphism,
        timings: Timings {
            spi: t1 - t0,
            tight: t2 - t1,
            isomorphism: t3 - t2,
        },
    };
    Ok(Reconstruction { report, tight })
}

#[derive(Clone, Debug, Serialize)]
pub struct RigidityVerdict {
    pub format: u32,
    pub norm: NormKind,
    /// `G ≅ H` decided on the groupoids themselves.
    pub direct: bool,
    /// `G_tight(S_π(G)) ≅ G_tight(S_π(H))`.
    pub reconstructed: bool,
    pub verdict: &'static str,
}

/// Compares `g` and `h` directly and through their reconstructions. The two
/// answers must agree.
pub fn rigidity_compare(
    g: &Groupoid,
    h: &Groupoid,
    kind: NormKind,
    opts: &ReconOptions,
) -> Result<RigidityVerdict> {
    let direct = groupoid_isomorphic(g, h, opts.search_budget)?.is_some();
    let rg = reconstruct(g, kind, opts)?;
    let rh = reconstruct(h, kind, opts)?;
    let reconstructed =
        groupoid_isomorphic(rg.groupoid(), rh.groupoid(), opts.search_budget)?.is_some();
    if direct != reconstructed {
        return Err(Error::Inconsistent(format!(
            "direct comparison says {direct}, reconstructed comparison says {reconstructed}"
        )));
    }
    Ok(RigidityVerdict {
        format: FORMAT_VERSION,
        norm: kind,
        direct,
        reconstructed,
        verdict: if direct {
            "isomorphic"
        } else {
            "not isomorphic"
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gpd::{group_cyclic, group_klein, pair};

    fn p(v: f64) -> PNorm {
        PNorm::new(v).unwrap()
    }

    #[test]
    fn pair_groupoid_at_three_halves() {
        let r = reconstruct(&pair(2), NormKind::Fp(p(1.5)), &ReconOptions::default()).unwrap();
        assert_eq!(r.report.status, Status::Success);
        assert_eq!(r.report.germs, 4);
        assert_eq!(r.report.tight_spectrum, 2);
        assert_eq!(r.report.regime, Regime::Iterative);
        assert_eq!(r.report.isomorphism.as_ref().unwrap().len(), 4);
    }

    #[test]
    fn cyclic_in_the_i_norm() {
        let r = reconstruct(&group_cyclic(4), NormKind::I, &ReconOptions::default()).unwrap();
        assert_eq!(r.report.status, Status::Success);
        assert_eq!(r.report.spi_elements, 5);
    }

    #[test]
    fn pair_three_symmetrized() {
        let r = reconstruct(&pair(3), NormKind::SymFp(p(3.0)), &ReconOptions::default()).unwrap();
        assert_eq!(r.report.status, Status::Success);
        assert_eq!(r.report.spi_elements, 34);
        assert_eq!(r.report.tight_spectrum, 3);
    }

    #[test]
    fn p_two_fails_with_stage() {
        let err =
            reconstruct(&pair(2), NormKind::Fp(p(2.0)), &ReconOptions::default()).unwrap_err();
        match err {
            Error::Stage { stage, source } => {
                assert_eq!(stage, "context");
                assert!(matches!(*source, Error::PTwoRefused));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rigidity_examples() {
        let o = ReconOptions::default();
        let v =
            rigidity_compare(&group_cyclic(4), &group_klein(), NormKind::Fp(p(1.5)), &o).unwrap();
        assert!(!v.direct && !v.reconstructed);
        assert_eq!(v.verdict, "not isomorphic");
        let relabeled = pair(2).relabel(&[3, 1, 2, 0]).unwrap();
        let v = rigidity_compare(&pair(2), &relabeled, NormKind::I, &o).unwrap();
        assert!(v.direct && v.reconstructed);
        let v = rigidity_compare(&group_cyclic(2), &pair(2), NormKind::Fp(p(3.0)), &o).unwrap();
        assert_eq!(v.verdict, "not isomorphic");
    }

    #[test]
    fn report_json_is_deterministic() {
        let a = reconstruct(&pair(2), NormKind::Fp(p(3.0)), &ReconOptions::default()).unwrap();
        let b = reconstruct(&pair(2), NormKind::Fp(p(3.0)), &ReconOptions::default()).unwrap();
        let ja = serde_json::to_string(&a.report).unwrap();
        assert_eq!(ja, serde_json::to_string(&b.report).unwrap());
        let v: serde_json::Value = serde_json::from_str(&ja).unwrap();
        assert_eq!(v["format"], 1);
        assert_eq!(v["norm"], serde_json::json!({"kind": "fp", "p": 3.0}));
        assert!(v.get("timings").is_none());
    }

    #[test]
    fn context_names() {
        assert_eq!(norm_kind(p(3.0), "symfp").unwrap(), NormKind::SymFp(p(3.0)));
        assert_eq!(norm_kind(p(3.0), "i").unwrap(), NormKind::I);
        assert!(norm_kind(p(3.0), "l2").is_err());
    }
}
