use std::fs;
use std::path::{Path, PathBuf};

use lpgroupoid::conv::{self, AlgElem};
use lpgroupoid::gpd::{Groupoid, GroupoidDoc, Violation};
use lpgroupoid::isg::{symmetric_inverse_monoid, InvSemigroup, SemigroupDoc};
use lpgroupoid::lprep::{PNorm, SolverConfig};
use lpgroupoid::recon::{builtin, norm_kind, ReconOptions};
use lpgroupoid::structure::NormKind;
use lpgroupoid::{Error, Result};

use crate::{Ctx, Opts};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Malformed(format!("cannot read {}: {e}", path.display())))
}

/// A groupoid file parsed without rejecting axiom failures.
pub fn load_unchecked(path: &Path) -> Result<(Groupoid, Vec<Violation>)> {
    let doc: GroupoidDoc = serde_json::from_str(&read(path)?)?;
    doc.to_groupoid_unchecked()
}

pub fn load_groupoid(path: &Path) -> Result<Groupoid> {
    let doc: GroupoidDoc = serde_json::from_str(&read(path)?)?;
    doc.to_groupoid()
}

/// The groupoid named by `--builtin`, or else the one in `path`.
pub fn groupoid(opts: &Opts, path: Option<&PathBuf>) -> Result<Groupoid> {
    match (&opts.builtin, path) {
        (Some(name), _) => builtin(name),
        (None, Some(p)) => load_groupoid(p),
        (None, None) => Err(Error::Malformed(
            "no input: give a path or --builtin".into(),
        )),
    }
}

pub enum SemigroupInput {
    Semigroup(InvSemigroup),
    Groupoid(Groupoid),
}

/// A semigroup file or builtin `inverse-monoid:<n>`, or a groupoid whose
/// bisections are meant.
pub fn semigroup_or_groupoid(opts: &Opts, path: Option<&PathBuf>) -> Result<SemigroupInput> {
    if let Some(name) = &opts.builtin {
        if let Some(n) = name.strip_prefix("inverse-monoid:") {
            let n: usize = n
                .parse()
                .ok()
                .filter(|n| (1..=4).contains(n))
                .ok_or_else(|| Error::Malformed(format!("bad size in {name:?}; 1 to 4 allowed")))?;
            return Ok(SemigroupInput::Semigroup(symmetric_inverse_monoid(n)));
        }
        return builtin(name).map(SemigroupInput::Groupoid);
    }
    let path = path.ok_or_else(|| Error::Malformed("no input: give a path or --builtin".into()))?;
    let value: serde_json::Value = serde_json::from_str(&read(path)?)?;
    if value.get("elements").is_some() {
        let doc: SemigroupDoc = serde_json::from_value(value)?;
        Ok(SemigroupInput::Semigroup(doc.to_semigroup()?))
    } else {
        let doc: GroupoidDoc = serde_json::from_value(value)?;
        Ok(SemigroupInput::Groupoid(doc.to_groupoid()?))
    }
}

pub fn element(g: &Groupoid, path: &Path) -> Result<AlgElem> {
    let map = serde_json::from_str(&read(path)?)?;
    conv::from_json(g, &map)
}

pub fn exponent(opts: &Opts) -> Result<PNorm> {
    PNorm::new(opts.p)
}

pub fn kind(opts: &Opts) -> Result<NormKind> {
    let name = match opts.ctx {
        Ctx::Fp => "fp",
        Ctx::Symfp => "symfp",
        Ctx::I => "i",
    };
    norm_kind(exponent(opts)?, name)
}

pub fn solver(opts: &Opts) -> SolverConfig {
    SolverConfig::with_seed(opts.seed)
}

pub fn recon_options(opts: &Opts) -> ReconOptions {
    ReconOptions {
        solver: solver(opts),
        work_bound: opts.work_bound,
        ..ReconOptions::default()
    }
}
