//! Finite-scale computations with groupoid L^p-operator algebras.
//!
//! The crate builds the convolution algebra `C_c(G)` of a finite groupoid,
//! evaluates its operator norms on `ℓ^p(G)`, classifies Moore-Penrose
//! partial isometries, forms the inverse semigroup of their homotopy classes
//! and runs the tight-groupoid construction on it, which recovers `G` up to
//! isomorphism.
//!
//! Module map:
//!
//! * [`gpd`]: finite groupoids, bisections, isomorphism search.
//! * [`conv`]: the `*`-algebra `C_c(G)`, I-norm, indicators.
//! * [`lprep`]: regular representations, p-operator norms, Renault's j-map.
//! * [`structure`]: hermitian elements, MP-inverses, MP-partial isometries.
//! * [`isg`]: finite inverse semigroups, filters, tight groupoids.
//! * [`recon`]: end-to-end reconstruction and the MP-continuity harness.
//!
//! With the default `parallel` feature the data-parallel loops (norm-solver
//! restarts, randomized searches, catalog sweeps) run on rayon; see [`par`].

pub mod conv;
mod error;
pub mod gpd;
pub mod isg;
pub mod lprep;
pub mod par;
pub mod recon;
pub mod sample;
pub mod structure;

pub use error::{Error, Result};

pub use num_complex::Complex64;

/// Tolerance for identities that only involve finitely many exact
/// floating-point sums and products.
pub const ALGEBRAIC_TOL: f64 = 1e-9;

/// Tolerance for quantities that pass through the iterative norm solver.
pub const ITERATIVE_TOL: f64 = 1e-6;

/// Version tag written into every JSON document.
pub const FORMAT_VERSION: u32 = 1;
