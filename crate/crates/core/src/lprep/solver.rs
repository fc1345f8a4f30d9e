//! Operator norms `‖M‖_{p→p}` of small complex matrices.
//!
//! `p = 1` and `p = ∞` are exact (column / row sums), `p = 2` uses the
//! largest singular value, and every other `p` runs Boyd's nonlinear power
//! iteration from each standard basis vector plus `restarts` random starts.
//! The iterative value is a lower bound attained by the returned witness.
//!
//! A matrix with at most one nonzero entry in every row and column has
//! norm equal to its largest entry modulus for every `p`; such matrices are
//! answered exactly unless `monomial_shortcut` is off.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::PNorm;
use crate::par::{self, ExecMode};
use crate::sample::{random_complex, stream_rng};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Exact,
    Iterative,
}

impl Regime {
    /// Tolerance appropriate for values computed in this regime.
    pub fn tolerance(self) -> f64 {
        match self {
            Regime::Exact => crate::ALGEBRAIC_TOL,
            Regime::Iterative => crate::ITERATIVE_TOL,
        }
    }

    pub fn combine(self, other: Regime) -> Regime {
        if self == Regime::Exact && other == Regime::Exact {
            Regime::Exact
        } else {
            Regime::Iterative
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolverConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Stop once successive norm estimates differ by less than this.
    pub tolerance: f64,
    pub seed: u64,
    pub mode: ExecMode,
    pub monomial_shortcut: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            restarts: 32,
            max_iterations: 500,
            tolerance: 1e-10,
            seed: 0,
            mode: ExecMode::Parallel,
            monomial_shortcut: true,
        }
    }
}

impl SolverConfig {
    pub fn with_seed(seed: u64) -> Self {
        SolverConfig {
            seed,
            ..Self::default()
        }
    }

    pub fn with_mode(self, mode: ExecMode) -> Self {
        SolverConfig { mode, ..self }
    }

    /// Forces the iterative solver on weighted partial permutations too.
    pub fn without_shortcut(self) -> Self {
        SolverConfig {
            monomial_shortcut: false,
            ..self
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub regime: Regime,
    pub converged: bool,
    /// Unit vector `x` (in `ℓ^p`) with `‖Mx‖_p = value`.
    #[serde(skip)]
    pub witness: Vec<Complex64>,
    pub iterations: usize,
}

impl NormEstimate {
    fn exact(value: f64, witness: Vec<Complex64>) -> Self {
        NormEstimate {
            value,
            regime: Regime::Exact,
            converged: true,
            witness,
            iterations: 0,
        }
    }
}

pub fn lp_norm(v: &[Complex64], p: PNorm) -> f64 {
    if p.is_infinite() {
        v.iter().map(|z| z.norm()).fold(0.0, f64::max)
    } else if p.is_one() {
        v.iter().map(|z| z.norm()).sum()
    } else {
        let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let r = p.value();
        scale
            * v.iter()
                .map(|z| (z.norm() / scale).powf(r))
                .sum::<f64>()
                .powf(1.0 / r)
    }
}

/// Norming functional of `v` in `ℓ^r`: the unit vector `w` of `ℓ^{r'}` with
/// `Σ conj(w_i) v_i = ‖v‖_r`.
fn dual_vector(v: &[Complex64], r: f64) -> Vec<Complex64> {
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut w: Vec<Complex64> = v
        .iter()
        .map(|z| {
            let a = z.norm();
            if a == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                (z / a) * (a / scale).powf(r - 1.0)
            }
        })
        .collect();
    let r_dual = r / (r - 1.0);
    let n = lp_norm(&w, PNorm(r_dual));
    for z in &mut w {
        *z /= n;
    }
    w
}

fn matvec(m: &DMatrix<Complex64>, x: &[Complex64]) -> Vec<Complex64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * x[j]).sum())
        .collect()
}

/// `‖M‖_{p→p}` with a witness vector.
pub fn matrix_p_norm(m: &DMatrix<Complex64>, p: PNorm, cfg: &SolverConfig) -> Result<NormEstimate> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Ok(NormEstimate::exact(
            0.0,
            vec![Complex64::new(0.0, 0.0); cols],
        ));
    }
    if p.is_one() {
        let (j, v) = (0..cols)
            .map(|j| (j, m.column(j).iter().map(|z| z.norm()).sum::<f64>()))
            .fold((0, -1.0), |best, c| if c.1 > best.1 { c } else { best });
        let mut w = vec![Complex64::new(0.0, 0.0); cols];
        w[j] = Complex64::new(1.0, 0.0);
        return Ok(NormEstimate::exact(v, w));
    }
    if p.is_infinite() {
        let (i, v) = (0..rows)
            .map(|i| (i, m.row(i).iter().map(|z| z.norm()).sum::<f64>()))
            .fold((0, -1.0), |best, c| if c.1 > best.1 { c } else { best });
        let w = m
            .row(i)
            .iter()
            .map(|z| {
                if z.norm() == 0.0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    z.conj() / z.norm()
                }
            })
            .collect();
        return Ok(NormEstimate::exact(v, w));
    }
    if p.is_two() {
        let svd = m.clone().svd(false, true);
        let (k, s) = svd
            .singular_values
            .iter()
            .copied()
            .enumerate()
            .fold((0, 0.0), |best, c| if c.1 > best.1 { c } else { best });
        let witness = svd
            .v_t
            .map(|vt| vt.row(k).iter().map(|z| z.conj()).collect())
            .unwrap_or_default();
        return Ok(NormEstimate::exact(s, witness));
    }
    if cfg.monomial_shortcut {
        if let Some(est) = monomial_norm(m) {
            return Ok(est);
        }
    }
    boyd(m, p, cfg)
}

/// Norm of a weighted partial permutation matrix, if `m` is one.
fn monomial_norm(m: &DMatrix<Complex64>) -> Option<NormEstimate> {
    let (rows, cols) = m.shape();
    let mut row_used = vec![false; rows];
    let mut best = (0, 0.0);
    for j in 0..cols {
        let mut seen = false;
        for i in 0..rows {
            let v = m[(i, j)].norm();
            if v == 0.0 {
                continue;
            }
            if seen || std::mem::replace(&mut row_used[i], true) {
                return None;
            }
            seen = true;
            if v > best.1 {
                best = (j, v);
            }
        }
    }
    let mut w = vec![Complex64::new(0.0, 0.0); cols];
    w[best.0] = Complex64::new(1.0, 0.0);
    Some(NormEstimate::exact(best.1, w))
}

fn boyd(m: &DMatrix<Complex64>, p: PNorm, cfg: &SolverConfig) -> Result<NormEstimate> {
    let n = m.ncols();
    let mh = m.adjoint();
    let q = p.dual();
    let starts = n + cfg.restarts;
    let runs = par::map_indexed(cfg.mode, starts, |k| {
        let x0: Vec<Complex64> = if k < n {
            (0..n)
                .map(|i| Complex64::new(if i == k { 1.0 } else { 0.0 }, 0.0))
                .collect()
        } else {
            let mut rng = stream_rng(cfg.seed, k as u64);
            (0..n).map(|_| random_complex(&mut rng)).collect()
        };
        run_from(m, &mh, p, q, x0, cfg)
    });
    let mut best: Option<NormEstimate> = None;
    let mut any_converged = false;
    let mut total_iterations = 0;
    for run in runs {
        any_converged |= run.converged;
        total_iterations += run.iterations;
        if best.as_ref().is_none_or(|b| run.value > b.value) {
            best = Some(run);
        }
    }
    let mut best = best.expect("at least one start");
    best.iterations = total_iterations;
    if !any_converged {
        return Err(Error::NotConverged {
            best: best.value,
            iterations: cfg.max_iterations,
        });
    }
    Ok(best)
}

fn run_from(
    m: &DMatrix<Complex64>,
    mh: &DMatrix<Complex64>,
    p: PNorm,
    q: PNorm,
    x0: Vec<Complex64>,
    cfg: &SolverConfig,
) -> NormEstimate {
    let zero = |x: Vec<Complex64>| NormEstimate {
        value: 0.0,
        regime: Regime::Iterative,
        converged: true,
        witness: x,
        iterations: 0,
    };
    let n0 = lp_norm(&x0, p);
    if n0 == 0.0 {
        return zero(x0);
    }
    let mut x: Vec<Complex64> = x0.iter().map(|z| z / n0).collect();
    let mut best = zero(x.clone());
    let mut previous = f64::NEG_INFINITY;
    for it in 1..=cfg.max_iterations {
        let y = matvec(m, &x);
        let gamma = lp_norm(&y, p);
        if gamma > best.value {
            best.value = gamma;
            best.witness = x.clone();
        }
        best.iterations = it;
        if gamma == 0.0 || (gamma - previous).abs() < cfg.tolerance * gamma.max(1.0) {
            best.converged = true;
            return best;
        }
        previous = gamma;
        let w = dual_vector(&y, p.value());
        let z = matvec(mh, &w);
        if z.iter().all(|c| c.norm() == 0.0) {
            best.converged = true;
            return best;
        }
        x = dual_vector(&z, q.value());
    }
    best.converged = false;
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::stream_rng;
    use rand::Rng;

    fn p(v: f64) -> PNorm {
        PNorm::new(v).unwrap()
    }

    fn real(rows: usize, cols: usize, v: &[f64]) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(
            rows,
            cols,
            &v.iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect::<Vec<_>>(),
        )
    }

    fn random_matrix(n: usize, seed: u64) -> DMatrix<Complex64> {
        let mut rng = stream_rng(seed, 0);
        DMatrix::from_fn(n, n, |_, _| random_complex(&mut rng))
    }

    #[test]
    fn identity_has_norm_one() {
        let id = DMatrix::<Complex64>::identity(4, 4);
        for v in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
            let e = matrix_p_norm(&id, p(v), &SolverConfig::default()).unwrap();
            assert!((e.value - 1.0).abs() < 1e-12, "p={v}: {}", e.value);
        }
    }

    #[test]
    fn column_sum_at_p_one() {
        let m = real(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        let e = matrix_p_norm(&m, PNorm::ONE, &SolverConfig::default()).unwrap();
        assert_eq!(e.value, 3.0);
        assert_eq!(e.regime, Regime::Exact);
    }

    // Witness really attains the value.
    #[test]
    fn witness_attains_value() {
        for seed in 0..10 {
            let m = random_matrix(4, seed);
            for v in [1.5, 3.0] {
                let e = matrix_p_norm(&m, p(v), &SolverConfig::with_seed(seed)).unwrap();
                let x = &e.witness;
                assert!((lp_norm(x, p(v)) - 1.0).abs() < 1e-12);
                assert!((lp_norm(&matvec(&m, x), p(v)) - e.value).abs() < 1e-12);
            }
        }
    }

    // Oracle: the closed form at p = 1 against the iteration at p close to 1.
    #[test]
    fn iteration_approaches_column_sum() {
        for seed in 0..200 {
            let m = random_matrix(3, seed);
            let exact = matrix_p_norm(&m, PNorm::ONE, &SolverConfig::default())
                .unwrap()
                .value;
            let near = matrix_p_norm(&m, p(1.0 + 1e-7), &SolverConfig::with_seed(seed))
                .unwrap()
                .value;
            assert!((exact - near).abs() / exact <= 1e-6, "{exact} vs {near}");
        }
    }

    #[test]
    fn duality_with_transpose() {
        for seed in 0..20 {
            let m = random_matrix(4, 100 + seed);
            let t = m.transpose();
            let cfg = SolverConfig::with_seed(seed);
            for v in [1.5, 3.0] {
                let a = matrix_p_norm(&m, p(v), &cfg).unwrap().value;
                let b = matrix_p_norm(&t, p(v).dual(), &cfg).unwrap().value;
                assert!((a - b).abs() <= 1e-6 * a.max(1.0), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn spectral_norm_matches_known_value() {
        // [[1,1],[0,1]] has spectral norm golden ratio.
        let m = real(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        let e = matrix_p_norm(&m, p(2.0), &SolverConfig::default()).unwrap();
        assert!((e.value - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn modes_agree_bitwise() {
        let m = random_matrix(5, 3);
        let cfg = SolverConfig::with_seed(9);
        let a = matrix_p_norm(&m, p(3.0), &cfg.with_mode(ExecMode::Sequential)).unwrap();
        let b = matrix_p_norm(&m, p(3.0), &cfg.with_mode(ExecMode::Parallel)).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn shortcut_matches_iteration_on_partial_permutations() {
        for seed in 0..30 {
            let mut rng = stream_rng(seed, 1);
            let n = 4;
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let mut m = DMatrix::<Complex64>::zeros(n, n);
            for (j, &i) in perm.iter().enumerate() {
                if rng.gen_bool(0.8) {
                    m[(i, j)] = random_complex(&mut rng);
                }
            }
            for v in [1.5, 3.0] {
                let cfg = SolverConfig::with_seed(seed);
                let fast = matrix_p_norm(&m, p(v), &cfg).unwrap();
                let slow = matrix_p_norm(&m, p(v), &cfg.without_shortcut()).unwrap();
                assert_eq!(fast.regime, Regime::Exact);
                assert_eq!(slow.regime, Regime::Iterative);
                assert!((fast.value - slow.value).abs() <= 1e-9 * fast.value.max(1.0));
            }
        }
        let dense = real(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        let e = matrix_p_norm(&dense, p(3.0), &SolverConfig::default()).unwrap();
        assert_eq!(e.regime, Regime::Iterative);
    }

    #[test]
    fn zero_matrix() {
        let m = DMatrix::<Complex64>::zeros(3, 3);
        assert_eq!(
            matrix_p_norm(&m, p(3.0), &SolverConfig::default())
                .unwrap()
                .value,
            0.0
        );
    }
}
