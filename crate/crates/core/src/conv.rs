//! The convolution `*`-algebra `C_c(G)` of a finite groupoid.
//!
//! Elements are dense coefficient vectors indexed by arrow id.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::gpd::{Arrow, Bisection, Groupoid};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct AlgElem(Vec<Complex64>);

impl AlgElem {
    pub fn zero(g: &Groupoid) -> Self {
        AlgElem(vec![Complex64::new(0.0, 0.0); g.len()])
    }

    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        AlgElem(coeffs)
    }

    pub fn from_real(values: &[f64]) -> Self {
        AlgElem(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// `δ_x`, the indicator of a single arrow.
    pub fn delta(g: &Groupoid, x: Arrow) -> Self {
        let mut f = Self::zero(g);
        f.0[x] = Complex64::new(1.0, 0.0);
        f
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.0
    }

    pub fn coeff(&self, x: Arrow) -> Complex64 {
        self.0[x]
    }

    pub fn set(&mut self, x: Arrow, value: Complex64) {
        self.0[x] = value;
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        AlgElem(self.0.iter().map(|&v| v * c).collect())
    }

    pub fn sup_norm(&self) -> f64 {
        self.0.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Arrows where `|f(x)| > tol`.
    pub fn support(&self, tol: f64) -> Vec<Arrow> {
        (0..self.len())
            .filter(|&x| self.0[x].norm() > tol)
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Sup-norm distance, scaled by the larger of the two sup norms when
    /// that exceeds one.
    pub fn relative_distance(&self, other: &AlgElem) -> f64 {
        let d = (self - other).sup_norm();
        d / self.sup_norm().max(other.sup_norm()).max(1.0)
    }

    pub fn approx_eq(&self, other: &AlgElem, tol: f64) -> bool {
        self.len() == other.len() && self.relative_distance(other) <= tol
    }
}

impl Add for &AlgElem {
    type Output = AlgElem;
    fn add(self, rhs: &AlgElem) -> AlgElem {
        AlgElem(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &AlgElem {
    type Output = AlgElem;
    fn sub(self, rhs: &AlgElem) -> AlgElem {
        AlgElem(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &AlgElem {
    type Output = AlgElem;
    fn neg(self) -> AlgElem {
        AlgElem(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<Complex64> for &AlgElem {
    type Output = AlgElem;
    fn mul(self, rhs: Complex64) -> AlgElem {
        self.scale(rhs)
    }
}

impl Mul<f64> for &AlgElem {
    type Output = AlgElem;
    fn mul(self, rhs: f64) -> AlgElem {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

pub(crate) fn check_len(g: &Groupoid, f: &AlgElem) -> Result<()> {
    if f.len() == g.len() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: g.len(),
            found: f.len(),
        })
    }
}

/// `(f1 ∗ f2)(x) = Σ_{y ∈ G_{s(x)}} f1(xy⁻¹) f2(y)`.
///
/// Computed by summing `f1(a) f2(b)` into `ab` over all composable pairs,
/// which visits the same terms.
pub fn convolve(g: &Groupoid, f1: &AlgElem, f2: &AlgElem) -> Result<AlgElem> {
    check_len(g, f1)?;
    check_len(g, f2)?;
    let mut out = AlgElem::zero(g);
    for a in g.arrows() {
        let fa = f1.0[a];
        if fa == Complex64::new(0.0, 0.0) {
            continue;
        }
        for &b in g.range_fiber(g.source(a)) {
            let ab = g.compose(a, b).expect("s(a) = r(b)");
            out.0[ab] += fa * f2.0[b];
        }
    }
    Ok(out)
}

/// Product of several elements, left to right.
pub fn convolve_all(g: &Groupoid, factors: &[&AlgElem]) -> Result<AlgElem> {
    let mut acc = unit(g);
    for f in factors {
        acc = convolve(g, &acc, f)?;
    }
    Ok(acc)
}

/// `f*(x) = conj(f(x⁻¹))`.
pub fn involution(g: &Groupoid, f: &AlgElem) -> AlgElem {
    AlgElem(g.arrows().map(|x| f.0[g.inv(x)].conj()).collect())
}

/// Larger of the sup over units of the source-fiber and range-fiber ℓ¹ sums.
pub fn i_norm(g: &Groupoid, f: &AlgElem) -> f64 {
    let fiber_sum = |fiber: &[Arrow]| fiber.iter().map(|&x| f.0[x].norm()).sum::<f64>();
    g.units()
        .iter()
        .map(|&u| fiber_sum(g.source_fiber(u)).max(fiber_sum(g.range_fiber(u))))
        .fold(0.0, f64::max)
}

pub fn indicator(g: &Groupoid, b: &Bisection) -> AlgElem {
    indicator_of(g, b.arrows())
}

/// Indicator function of an arbitrary arrow set.
pub fn indicator_of(g: &Groupoid, arrows: &[Arrow]) -> AlgElem {
    let mut f = AlgElem::zero(g);
    for &x in arrows {
        f.0[x] = Complex64::new(1.0, 0.0);
    }
    f
}

/// The unit `1_{G^(0)}`.
pub fn unit(g: &Groupoid) -> AlgElem {
    indicator_of(g, g.units())
}

/// Exponential in `C_c(G)` by scaling and squaring a truncated Taylor series.
pub fn exp(g: &Groupoid, f: &AlgElem) -> Result<AlgElem> {
    check_len(g, f)?;
    let norm = i_norm(g, f);
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as u32
    } else {
        0
    };
    let h = f * 0.5f64.powi(squarings as i32);
    let mut sum = unit(g);
    let mut term = unit(g);
    for k in 1..=40 {
        term = &convolve(g, &term, &h)? * (1.0 / k as f64);
        sum = &sum + &term;
        if term.sup_norm() < 1e-18 * sum.sup_norm().max(1.0) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = convolve(g, &sum, &sum)?;
    }
    Ok(sum)
}

/// JSON form: a map from arrow name to `[re, im]`.
pub fn to_json(g: &Groupoid, f: &AlgElem) -> BTreeMap<String, [f64; 2]> {
    g.arrows()
        .map(|x| (g.name(x).to_string(), [f.0[x].re, f.0[x].im]))
        .collect()
}

/// Inverse of [`to_json`]; arrows that are not mentioned get coefficient 0.
pub fn from_json(g: &Groupoid, map: &BTreeMap<String, [f64; 2]>) -> Result<AlgElem> {
    let mut f = AlgElem::zero(g);
    for (name, [re, im]) in map {
        let x = g
            .arrow_by_name(name)
            .ok_or_else(|| Error::Malformed(format!("unknown arrow {name:?}")))?;
        f.0[x] = Complex64::new(*re, *im);
    }
    if !f.is_finite() {
        return Err(Error::Malformed("non-finite coefficient".into()));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gpd::{
        bisection_inv, bisection_mul, enumerate_bisections, group_cyclic, pair, DEFAULT_WORK_BOUND,
    };
    use crate::sample::random_element;
    use crate::ALGEBRAIC_TOL;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn group_law_in_z2() {
        let z2 = group_cyclic(2);
        let dg = AlgElem::delta(&z2, 1);
        assert_eq!(convolve(&z2, &dg, &dg).unwrap(), AlgElem::delta(&z2, 0));
    }

    // Oracle: E_ij E_kl = [j == k] E_il.
    #[test]
    fn p2_matrix_units() {
        let p2 = pair(2);
        let e = |i: usize, j: usize| {
            AlgElem::delta(&p2, p2.arrow_by_name(&format!("({i},{j})")).unwrap())
        };
        for i in 1..=2 {
            for j in 1..=2 {
                for k in 1..=2 {
                    for l in 1..=2 {
                        let expected = if j == k { e(i, l) } else { AlgElem::zero(&p2) };
                        assert_eq!(convolve(&p2, &e(i, j), &e(k, l)).unwrap(), expected);
                    }
                }
            }
        }
    }

    #[test]
    fn mismatched_lengths() {
        let p2 = pair(2);
        let f = AlgElem::zero(&group_cyclic(3));
        assert!(matches!(
            convolve(&p2, &f, &AlgElem::zero(&p2)),
            Err(Error::DimensionMismatch {
                expected: 4,
                found: 3
            })
        ));
    }

    #[test]
    fn involution_examples() {
        let p2 = pair(2);
        let x12 = p2.arrow_by_name("(1,2)").unwrap();
        let x21 = p2.arrow_by_name("(2,1)").unwrap();
        assert_eq!(
            involution(&p2, &AlgElem::delta(&p2, x12)),
            AlgElem::delta(&p2, x21)
        );
        let z3 = group_cyclic(3);
        let f = AlgElem::delta(&z3, 1).scale(c(0.0, 1.0));
        assert_eq!(
            involution(&z3, &f),
            AlgElem::delta(&z3, 2).scale(c(0.0, -1.0))
        );
    }

    #[test]
    fn i_norm_examples() {
        let z2 = group_cyclic(2);
        assert_eq!(i_norm(&z2, &AlgElem::from_real(&[1.0, 2.0])), 3.0);
        let p3 = pair(3);
        for b in enumerate_bisections(&p3, DEFAULT_WORK_BOUND).unwrap() {
            let expected = if b.is_empty() { 0.0 } else { 1.0 };
            assert_eq!(i_norm(&p3, &indicator(&p3, &b)), expected);
        }
    }

    #[test]
    fn random_p3_identities() {
        let p3 = pair(3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let f = random_element(&p3, &mut rng);
            let h = random_element(&p3, &mut rng);
            let k = random_element(&p3, &mut rng);
            let fh = convolve(&p3, &f, &h).unwrap();
            assert!(i_norm(&p3, &fh) <= i_norm(&p3, &f) * i_norm(&p3, &h) + 1e-12);
            assert!((i_norm(&p3, &involution(&p3, &f)) - i_norm(&p3, &f)).abs() < 1e-12);
            assert!(f.sup_norm() <= i_norm(&p3, &f) + 1e-12);
            let lhs = involution(&p3, &fh);
            let rhs = convolve(&p3, &involution(&p3, &h), &involution(&p3, &f)).unwrap();
            assert!(lhs.approx_eq(&rhs, 1e-12));
            let left = convolve(&p3, &fh, &k).unwrap();
            let right = convolve(&p3, &f, &convolve(&p3, &h, &k).unwrap()).unwrap();
            assert!(left.approx_eq(&right, 1e-12));
            let dist = convolve(&p3, &f, &(&h + &k)).unwrap();
            assert!(dist.approx_eq(&(&fh + &convolve(&p3, &f, &k).unwrap()), 1e-12));
            assert_eq!(involution(&p3, &involution(&p3, &f)), f);
        }
    }

    #[test]
    fn indicator_is_a_homomorphism_on_p3() {
        let p3 = pair(3);
        let bis = enumerate_bisections(&p3, DEFAULT_WORK_BOUND).unwrap();
        let one = unit(&p3);
        assert!(indicator(&p3, &Bisection::empty()).sup_norm() == 0.0);
        for a in &bis {
            let fa = indicator(&p3, a);
            assert_eq!(convolve(&p3, &one, &fa).unwrap(), fa);
            assert_eq!(convolve(&p3, &fa, &one).unwrap(), fa);
            assert_eq!(involution(&p3, &fa), indicator(&p3, &bisection_inv(&p3, a)));
            assert_eq!(i_norm(&p3, &fa), fa.sup_norm());
            for b in &bis {
                let prod = convolve(&p3, &fa, &indicator(&p3, b)).unwrap();
                assert_eq!(prod, indicator(&p3, &bisection_mul(&p3, a, b)));
            }
        }
    }

    #[test]
    fn exp_of_scalar_and_group_elements() {
        let z2 = group_cyclic(2);
        let t = 0.7;
        // exp(i t δ_g) = cos t δ_e + i sin t δ_g.
        let f = AlgElem::delta(&z2, 1).scale(c(0.0, t));
        let e = exp(&z2, &f).unwrap();
        assert!(e.approx_eq(
            &AlgElem::from_coeffs(vec![c(t.cos(), 0.0), c(0.0, t.sin())]),
            ALGEBRAIC_TOL
        ));
        // Large argument exercises the squaring path.
        let big = unit(&z2).scale(c(0.0, 10.0));
        let e = exp(&z2, &big).unwrap();
        assert!(e.approx_eq(
            &unit(&z2).scale(Complex64::from_polar(1.0, 10.0)),
            ALGEBRAIC_TOL
        ));
    }

    #[test]
    fn json_round_trip() {
        let p2 = pair(2);
        let f = AlgElem::from_coeffs(vec![c(1.0, 2.0), c(0.0, -1.0), c(3.5, 0.0), c(0.0, 0.0)]);
        let back = from_json(&p2, &to_json(&p2, &f)).unwrap();
        assert_eq!(back, f);
        let mut bad = to_json(&p2, &f);
        bad.insert("nope".into(), [0.0, 0.0]);
        assert!(from_json(&p2, &bad).is_err());
    }
}
