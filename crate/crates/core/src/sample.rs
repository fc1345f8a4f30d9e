//! Seeded random elements for searches and tests.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::conv::AlgElem;
use crate::gpd::{Arrow, Bisection, Groupoid};

/// RNG for work item `index` of a job seeded with `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(
        1.0,
        rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
    )
}

/// Dense element with coefficients uniform in the unit square.
pub fn random_element<R: Rng + ?Sized>(g: &Groupoid, rng: &mut R) -> AlgElem {
    AlgElem::from_coeffs(g.arrows().map(|_| random_complex(rng)).collect())
}

/// Element supported on `arrows` with the given value generator.
pub fn supported_on<R, F>(g: &Groupoid, arrows: &[Arrow], rng: &mut R, mut value: F) -> AlgElem
where
    R: Rng + ?Sized,
    F: FnMut(&mut R) -> Complex64,
{
    let mut f = AlgElem::zero(g);
    for &x in arrows {
        f.set(x, value(rng));
    }
    f
}

/// Unimodular values on `b`, zero elsewhere.
pub fn phase_decorated<R: Rng + ?Sized>(g: &Groupoid, b: &Bisection, rng: &mut R) -> AlgElem {
    supported_on(g, b.arrows(), rng, random_phase)
}

/// A random element on a random bisection of `g`.
pub fn random_bisection<R: Rng + ?Sized>(g: &Groupoid, rng: &mut R) -> Bisection {
    let mut order: Vec<Arrow> = g.arrows().collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut chosen = Vec::new();
    for x in order {
        if rng.gen_bool(0.6) {
            chosen.push(x);
            if !g.is_bisection(&chosen) {
                chosen.pop();
            }
        }
    }
    Bisection::new(g, chosen).expect("built greedily as a bisection")
}

/// Random real function on the unit space.
pub fn random_unit_function<R: Rng + ?Sized>(g: &Groupoid, rng: &mut R, complex: bool) -> AlgElem {
    supported_on(g, g.units(), rng, |r| {
        if complex {
            random_complex(r)
        } else {
            Complex64::new(r.gen_range(-1.0..1.0), 0.0)
        }
    })
}
