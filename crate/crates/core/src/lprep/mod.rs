//! Matrix realizations of the regular representations on `ℓ^p(G)`.
//!
//! `λ(f)` acts on `ℓ^p(G)` by left convolution. Every source fiber `G_u` is
//! invariant, so `λ(f)` is block diagonal up to a permutation of the basis,
//! with blocks `λ_u(f)`. The reduced norm is the largest block norm.

mod solver;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::conv::{check_len, i_norm, involution, AlgElem};
use crate::gpd::{Arrow, Groupoid};
use crate::{Error, Result, ALGEBRAIC_TOL, ITERATIVE_TOL};

pub use solver::{lp_norm, matrix_p_norm, NormEstimate, Regime, SolverConfig};

/// An exponent `p ∈ [1, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
pub struct PNorm(f64);

impl PNorm {
    pub const ONE: PNorm = PNorm(1.0);
    pub const INFINITY: PNorm = PNorm(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            Err(Error::InvalidExponent(p))
        } else {
            Ok(PNorm(p))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Hölder conjugate `q` with `1/p + 1/q = 1`.
    pub fn dual(self) -> PNorm {
        if self.is_one() {
            PNorm::INFINITY
        } else if self.is_infinite() {
            PNorm::ONE
        } else {
            PNorm(self.0 / (self.0 - 1.0))
        }
    }

    pub fn is_one(self) -> bool {
        self.0 == 1.0
    }

    pub fn is_two(self) -> bool {
        (self.0 - 2.0).abs() < 1e-12
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// Whether norms at this exponent are computed in closed form.
    pub fn regime(self) -> Regime {
        if self.is_one() || self.is_infinite() || self.is_two() {
            Regime::Exact
        } else {
            Regime::Iterative
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Origin {
    /// `λ(f)` on all of `ℓ^p(G)`.
    Regular,
    /// `λ_u(f)` on `ℓ^p(G_u)`.
    Fiber(Arrow),
    /// `ρ(1_y)`.
    RightPoint(Arrow),
    Other,
}

/// A square matrix whose rows and columns are labelled by arrows.
#[derive(Clone, Debug, PartialEq)]
pub struct OpMatrix {
    pub entries: DMatrix<Complex64>,
    pub index: Vec<Arrow>,
    pub origin: Origin,
}

impl OpMatrix {
    pub fn new(entries: DMatrix<Complex64>, index: Vec<Arrow>, origin: Origin) -> Self {
        assert_eq!(entries.nrows(), index.len());
        assert_eq!(entries.ncols(), index.len());
        OpMatrix {
            entries,
            index,
            origin,
        }
    }

    pub fn dim(&self) -> usize {
        self.index.len()
    }

    pub fn mul(&self, other: &OpMatrix) -> OpMatrix {
        OpMatrix::new(
            &self.entries * &other.entries,
            self.index.clone(),
            Origin::Other,
        )
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Rows of `[re, im]` pairs, for reports.
    pub fn to_rows(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.dim())
            .map(|i| {
                (0..self.dim())
                    .map(|j| [self.entries[(i, j)].re, self.entries[(i, j)].im])
                    .collect()
            })
            .collect()
    }
}

fn matrix_on(g: &Groupoid, f: &AlgElem, index: &[Arrow]) -> DMatrix<Complex64> {
    DMatrix::from_fn(index.len(), index.len(), |i, j| {
        let (x, y) = (index[i], index[j]);
        match g.compose(x, g.inv(y)) {
            Some(z) if g.source(x) == g.source(y) => f.coeff(z),
            _ => Complex64::new(0.0, 0.0),
        }
    })
}

/// `λ(f)` in the δ-basis: entry `(x, y)` is `f(xy⁻¹)` when `s(x) = s(y)`.
pub fn lambda_matrix(g: &Groupoid, f: &AlgElem) -> Result<OpMatrix> {
    check_len(g, f)?;
    let index: Vec<Arrow> = g.arrows().collect();
    Ok(OpMatrix::new(
        matrix_on(g, f, &index),
        index,
        Origin::Regular,
    ))
}

/// `λ_u(f)` on `ℓ^p(G_u)`, basis ordered by arrow id.
pub fn lambda_u_matrix(g: &Groupoid, f: &AlgElem, u: Arrow) -> Result<OpMatrix> {
    check_len(g, f)?;
    if !g.is_unit(u) {
        return Err(Error::Malformed(format!("{} is not a unit", g.name(u))));
    }
    let index = g.source_fiber(u).to_vec();
    Ok(OpMatrix::new(
        matrix_on(g, f, &index),
        index,
        Origin::Fiber(u),
    ))
}

/// Right convolution by the point mass at `y`: `ξ ↦ (x ↦ ξ(xy⁻¹))` for
/// `s(x) = s(y)`, and 0 elsewhere.
pub fn rho_point(g: &Groupoid, y: Arrow) -> OpMatrix {
    let n = g.len();
    let yi = g.inv(y);
    let mut m = DMatrix::zeros(n, n);
    for x in g.arrows() {
        if g.source(x) == g.source(y) {
            let z = g.compose(x, yi).expect("s(x) = r(y⁻¹)");
            m[(x, z)] = Complex64::new(1.0, 0.0);
        }
    }
    OpMatrix::new(m, g.arrows().collect(), Origin::RightPoint(y))
}

pub fn p_op_norm(m: &OpMatrix, p: PNorm, cfg: &SolverConfig) -> Result<NormEstimate> {
    matrix_p_norm(&m.entries, p, cfg)
}

/// `‖f‖_λ = max_u ‖λ_u(f)‖_p`.
pub fn fp_norm(g: &Groupoid, f: &AlgElem, p: PNorm, cfg: &SolverConfig) -> Result<NormEstimate> {
    check_len(g, f)?;
    let mut best: Option<NormEstimate> = None;
    for &u in g.units() {
        let block = lambda_u_matrix(g, f, u)?;
        let mut est = p_op_norm(&block, p, cfg)?;
        // Report the witness in full-space coordinates.
        let mut full = vec![Complex64::new(0.0, 0.0); g.len()];
        for (k, &x) in block.index.iter().enumerate() {
            full[x] = est.witness[k];
        }
        est.witness = full;
        match &mut best {
            Some(b) => {
                b.converged &= est.converged;
                b.iterations += est.iterations;
                b.regime = b.regime.combine(est.regime);
                if est.value > b.value {
                    b.value = est.value;
                    b.witness = est.witness;
                }
            }
            None => best = Some(est),
        }
    }
    Ok(best.unwrap_or(NormEstimate {
        value: 0.0,
        regime: p.regime(),
        converged: true,
        witness: vec![],
        iterations: 0,
    }))
}

/// Norm of the symmetrized algebra: `max(‖f‖_λ, ‖f*‖_λ)`.
///
/// For `1 < p < ∞` the same quantity is also computed as
/// `max(‖f‖_{λ,p}, ‖f‖_{λ,q})`; for `p ∈ {1, ∞}` it is compared with the
/// I-norm. A disagreement beyond tolerance is an error.
pub fn sym_norm(g: &Groupoid, f: &AlgElem, p: PNorm, cfg: &SolverConfig) -> Result<NormEstimate> {
    let direct = fp_norm(g, f, p, cfg)?;
    let adjoint = fp_norm(g, &involution(g, f), p, cfg)?;
    let regime = direct.regime.combine(adjoint.regime);
    let mut est = if adjoint.value > direct.value {
        adjoint
    } else {
        direct.clone()
    };
    est.regime = regime;
    if p.is_one() || p.is_infinite() {
        let i = i_norm(g, f);
        if (est.value - i).abs() > ALGEBRAIC_TOL * i.max(1.0) {
            return Err(Error::NormDisagreement {
                first: est.value,
                second: i,
            });
        }
        return Ok(est);
    }
    let dual = fp_norm(g, f, p.dual(), cfg)?;
    let alternative = direct.value.max(dual.value);
    if (est.value - alternative).abs() > ITERATIVE_TOL * est.value.max(1.0) {
        return Err(Error::NormDisagreement {
            first: est.value,
            second: alternative,
        });
    }
    // Both are lower bounds of the same number.
    est.value = est.value.max(alternative);
    est.regime = est.regime.combine(dual.regime);
    Ok(est)
}

/// Renault's j-map `j(M)(x) = M(δ_{s(x)})(x)`.
///
/// Rejects matrices that fail to commute with every `ρ(1_y)`, since those
/// are not in the image of `λ`.
pub fn j_map(g: &Groupoid, m: &OpMatrix) -> Result<AlgElem> {
    if m.dim() != g.len() || m.index.iter().enumerate().any(|(i, &x)| i != x) {
        return Err(Error::DimensionMismatch {
            expected: g.len(),
            found: m.dim(),
        });
    }
    let scale = m.max_abs().max(1.0);
    let mut worst = 0.0f64;
    for y in g.arrows() {
        let r = rho_point(g, y);
        let c = &m.entries * &r.entries - &r.entries * &m.entries;
        worst = worst.max(c.iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    if worst > ALGEBRAIC_TOL * scale {
        return Err(Error::NotInImage(worst));
    }
    Ok(AlgElem::from_coeffs(
        g.arrows().map(|x| m.entries[(x, g.source(x))]).collect(),
    ))
}
