use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use lpgroupoid::conv::{self, i_norm, AlgElem};
use lpgroupoid::gpd::{enumerate_bisections, Axiom, Groupoid, GroupoidDoc};
use lpgroupoid::isg::{from_bisections, tight_groupoid};
use lpgroupoid::lprep::{fp_norm, sym_norm, NormEstimate, Regime};
use lpgroupoid::par::{self, ExecMode};
use lpgroupoid::recon::{
    self, catalog_kinds, projection_gap_exhaustive, rakocevic_battery, rakocevic_experiment,
    rigidity_compare, RakocevicReport, Status,
};
use lpgroupoid::sample::{phase_decorated, random_bisection, random_element, stream_rng};
use lpgroupoid::structure::{
    contraction, is_mp_partial_isometry, mp_inverse, spi_semigroup, AlgebraContext,
    DecompositionDoc, NormKind,
};
use lpgroupoid::{Error, Result, FORMAT_VERSION};
use serde::Serialize;

use crate::input::{self, SemigroupInput};
use crate::{Opts, Outcome};

fn emit<T: Serialize>(opts: &Opts, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match &opts.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::Malformed(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct Number {
    value: f64,
    regime: Regime,
}

impl From<NormEstimate> for Number {
    fn from(e: NormEstimate) -> Self {
        Number {
            value: e.value,
            regime: e.regime,
        }
    }
}

fn exact(value: f64) -> Number {
    Number {
        value,
        regime: Regime::Exact,
    }
}

#[derive(Serialize)]
struct ViolationDoc {
    axiom: Axiom,
    description: &'static str,
    arrows: Vec<String>,
}

pub fn validate(opts: &Opts, path: Option<PathBuf>) -> Result<Outcome> {
    let (g, violations) = match (&opts.builtin, &path) {
        (Some(name), _) => (recon::builtin(name)?, Vec::new()),
        (None, Some(p)) => input::load_unchecked(p)?,
        (None, None) => {
            return Err(Error::Malformed(
                "no input: give a path or --builtin".into(),
            ))
        }
    };
    #[derive(Serialize)]
    struct Report {
        format: u32,
        valid: bool,
        arrows: usize,
        units: usize,
        violations: Vec<ViolationDoc>,
    }
    let valid = violations.is_empty();
    emit(
        opts,
        &Report {
            format: FORMAT_VERSION,
            valid,
            arrows: g.len(),
            units: g.units().len(),
            violations: violations
                .iter()
                .map(|v| ViolationDoc {
                    axiom: v.axiom,
                    description: v.axiom.describe(),
                    arrows: v.arrows.iter().map(|&x| g.name(x).to_string()).collect(),
                })
                .collect(),
        },
    )?;
    Ok(Outcome::check(valid, "groupoid axioms"))
}

pub fn bisections(opts: &Opts, path: Option<PathBuf>) -> Result<Outcome> {
    let g = input::groupoid(opts, path.as_ref())?;
    let all = enumerate_bisections(&g, opts.work_bound)?;
    #[derive(Serialize)]
    struct Report {
        format: u32,
        count: usize,
        idempotents: usize,
        bisections: Vec<Vec<String>>,
    }
    emit(
        opts,
        &Report {
            format: FORMAT_VERSION,
            count: all.len(),
            idempotents: all.iter().filter(|b| b.is_unit_subset(&g)).count(),
            bisections: all
                .iter()
                .map(|b| b.arrows().iter().map(|&x| g.name(x).to_string()).collect())
                .collect(),
        },
    )?;
    Ok(Outcome::ok())
}

fn element_or_random(opts: &Opts, g: &Groupoid, path: Option<PathBuf>) -> Result<AlgElem> {
    match path {
        Some(p) => input::element(g, &p),
        None => Ok(random_element(g, &mut stream_rng(opts.seed, 0))),
    }
}

pub fn norms(opts: &Opts, path: Option<PathBuf>, element: Option<PathBuf>) -> Result<Outcome> {
    let g = input::groupoid(opts, path.as_ref())?;
    let f = element_or_random(opts, &g, element)?;
    let p = input::exponent(opts)?;
    let cfg = input::solver(opts);
    #[derive(Serialize)]
    struct Report {
        format: u32,
        p: f64,
        element: BTreeMap<String, [f64; 2]>,
        sup: Number,
        reduced: Number,
        symmetrized: Number,
        i: Number,
    }
    emit(
        opts,
        &Report {
            format: FORMAT_VERSION,
            p: p.value(),
            element: conv::to_json(&g, &f),
            sup: exact(f.sup_norm()),
            reduced: fp_norm(&g, &f, p, &cfg)?.into(),
            symmetrized: sym_norm(&g, &f, p, &cfg)?.into(),
            i: exact(i_norm(&g, &f)),
        },
    )?;
    Ok(Outcome::ok())
}

#[derive(Serialize)]
struct Classified {
    element: BTreeMap<String, [f64; 2]>,
    norm: Number,
    closed_form_inverse: bool,
    mp_partial_isometry: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    decomposition: Option<DecompositionDoc>,
}

pub fn mp_classify(
    opts: &Opts,
    path: Option<PathBuf>,
    element: Option<PathBuf>,
) -> Result<Outcome> {
    let g = input::groupoid(opts, path.as_ref())?;
    let kind = input::kind(opts)?;
    let ctx = AlgebraContext::new(&g, kind).with_solver(input::solver(opts));
    let elements: Vec<AlgElem> = match element {
        Some(p) => vec![input::element(&g, &p)?],
        // Alternate phase-decorated bisections with random contractions.
        None => (0..opts.samples)
            .map(|k| {
                let mut rng = stream_rng(opts.seed, k as u64);
                if k % 2 == 0 {
                    let b = random_bisection(&g, &mut rng);
                    Ok(phase_decorated(&g, &b, &mut rng))
                } else {
                    contraction(&ctx, random_element(&g, &mut rng))
                }
            })
            .collect::<Result<_>>()?,
    };
    let mut out = Vec::with_capacity(elements.len());
    for f in &elements {
        let decomposition = is_mp_partial_isometry(&ctx, f)?;
        out.push(Classified {
            element: conv::to_json(&g, f),
            norm: ctx.norm(f)?.into(),
            closed_form_inverse: mp_inverse(&ctx, f)?.is_some(),
            mp_partial_isometry: decomposition.is_some(),
            decomposition: decomposition.map(|d| d.doc(&g)),
        });
    }
    #[derive(Serialize)]
    struct Report {
        format: u32,
        norm: NormKind,
        elements: Vec<Classified>,
    }
    emit(
        opts,
        &Report {
            format: FORMAT_VERSION,
            norm: kind,
            elements: out,
        },
    )?;
    Ok(Outcome::ok())
}

pub fn spi(opts: &Opts, path: Option<PathBuf>) -> Result<Outcome> {
    let g = input::groupoid(opts, path.as_ref())?;
    let kind = input::kind(opts)?;
    let ctx = AlgebraContext::new(&g, kind).with_solver(input::solver(opts));
    let s = spi_semigroup(&ctx, opts.work_bound)?;
    #[derive(Serialize)]
    struct Report {
        format: u32,
        norm: NormKind,
        elements: usize,
        idempotents: usize,
        phi_is_isomorphism: bool,
        /// Bisection ↦ class of its indicator.
        phi: BTreeMap<String, String>,
        semigroup: lpgroupoid::isg::SemigroupDoc,
    }
    let phi = s
        .bisections
        .bisections
        .iter()
        .zip(&s.phi)
        .map(|(b, &c)| (b.display(&g).to_string(), s.semigroup.name(c).to_string()))
        .collect();
    emit(
        opts,
        &Report {
            format: FORMAT_VERSION,
            norm: kind,
            elements: s.semigroup.len(),
            idempotents: s.semigroup.idempotents().len(),
            phi_is_isomorphism: s.phi_is_isomorphism,
            phi,
            semigroup: s.semigroup.to_doc(),
        },
    )?;
    Ok(Outcome::check(
        s.phi_is_isomorphism,
        "Phi is not an isomorphism",
    ))
}

pub fn tight(opts: &Opts, path: Option<PathBuf>) -> Result<Outcome> {
    let s = match input::semigroup_or_groupoid(opts, path.as_ref())? {
        SemigroupInput::Semigroup(s) => s,
        SemigroupInput::Groupoid(g) => from_bisections(&g, opts.work_bound)?.semigroup,
    };
    let t = tight_groupoid(&s)?;
    emit(opts, &GroupoidDoc::from_groupoid(&t.groupoid))?;
    Ok(Outcome::ok())
}

pub fn reconstruct(opts: &Opts, path: Option<PathBuf>) -> Result<Outcome> {
    let g = input::groupoid(opts, path.as_ref())?;
    let r = recon::reconstruct(&g, input::kind(opts)?, &input::recon_options(opts))?;
    emit(opts, &r.report)?;
    Ok(Outcome::check(
        r.report.status == Status::Success,
        "reconstruction failed",
    ))
}

pub fn compare(opts: &Opts, paths: Vec<PathBuf>) -> Result<Outcome> {
    let mut files = paths.iter();
    let mut next = |name: &Option<String>| -> Result<Groupoid> {
        match name {
            Some(n) => recon::builtin(n),
            None => match files.next() {
                Some(p) => input::load_groupoid(p),
                None => Err(Error::Malformed("compare needs two groupoids".into())),
            },
        }
    };
    let g = next(&opts.builtin)?;
    let h = next(&opts.builtin2)?;
    let v = rigidity_compare(&g, &h, input::kind(opts)?, &input::recon_options(opts))?;
    emit(opts, &v)?;
    Ok(Outcome::ok())
}

pub fn rakocevic(opts: &Opts) -> Result<Outcome> {
    let reports = rakocevic_battery()
        .iter()
        .map(rakocevic_experiment)
        .collect::<Result<Vec<RakocevicReport>>>()?;
    let name = opts.builtin.clone().unwrap_or_else(|| "pair:3".to_string());
    let g = recon::builtin(&name)?;
    let ctx = AlgebraContext::new(&g, input::kind(opts)?).with_solver(input::solver(opts));
    let (pairs, failures) = projection_gap_exhaustive(&ctx)?;
    #[derive(Serialize)]
    struct Gap {
        groupoid: String,
        norm: NormKind,
        pairs: usize,
        failures: Vec<(usize, usize)>,
    }
    #[derive(Serialize)]
    struct Report {
        format: u32,
        sequences: Vec<RakocevicReport>,
        projection_gap: Gap,
        all_pass: bool,
    }
    let all_pass = failures.is_empty()
        && reports
            .iter()
            .all(|r| r.consistent && r.matches_declared != Some(false));
    emit(
        opts,
        &Report {
            format: FORMAT_VERSION,
            sequences: reports,
            projection_gap: Gap {
                groupoid: name,
                norm: ctx.kind,
                pairs,
                failures,
            },
            all_pass,
        },
    )?;
    Ok(Outcome::check(all_pass, "continuity battery"))
}

pub fn catalog(opts: &Opts) -> Result<Outcome> {
    let entries = recon::catalog();
    let kinds = catalog_kinds();
    let recon_opts = input::recon_options(opts);
    #[derive(Serialize)]
    struct Row {
        groupoid: &'static str,
        norm: NormKind,
        status: Status,
        spi_elements: usize,
        tight_spectrum: usize,
        germs: usize,
    }
    let jobs: Vec<(usize, NormKind)> = (0..entries.len())
        .flat_map(|i| kinds.iter().map(move |&k| (i, k)))
        .collect();
    let rows = par::try_map_indexed(ExecMode::default(), jobs.len(), |j| -> Result<Row> {
        let (i, kind) = jobs[j];
        let (name, g) = &entries[i];
        let r = recon::reconstruct(g, kind, &recon_opts)?;
        Ok(Row {
            groupoid: name,
            norm: kind,
            status: r.report.status,
            spi_elements: r.report.spi_elements,
            tight_spectrum: r.report.tight_spectrum,
            germs: r.report.germs,
        })
    })?;
    #[derive(Serialize)]
    struct Report {
        format: u32,
        runs: usize,
        all_success: bool,
        rows: Vec<Row>,
    }
    let all_success = rows.iter().all(|r| r.status == Status::Success);
    emit(
        opts,
        &Report {
            format: FORMAT_VERSION,
            runs: rows.len(),
            all_success,
            rows,
        },
    )?;
    Ok(Outcome::check(all_success, "catalog reconstruction"))
}
