//! Exact-arithmetic kernels for local harmonic analysis on gl(n)/sl(2):
//!
//! * [`padic`] — p-adic valuations, exact integration of locally constant
//!   functions on Q_p^n, and additive character sums in cyclotomic fields;
//! * [`roots`] — parabolic/Levi combinatorics for GL(n): chambers, the
//!   τ/τ̂ indicator calculus, the Langlands combinatorial lemma, and the
//!   Γ′ truncation kernels with their exact polyhedral integrals;
//! * [`families`] — orthogonal sets and weight families: the c_M limit,
//!   convex-hull weight volumes, descent constants d and the s-map;
//! * [`sl2`] — orbital integrals on sl(2,Q_p) computed both by brute-force
//!   cell sweeps and by closed forms, weighted and invariant variants, the
//!   Weyl integration anchor and the local trace identity;
//! * [`scissors`] — polytopes modulo translational scissors congruence:
//!   rigged flags, Hadwiger invariants, the total graded ring, and orbital
//!   integrohedra assembled from sl(2) data.
//!
//! Everything is exact: rationals throughout, cyclotomic integers for
//! character values, and certified tail bounds wherever an integral has to
//! be truncated. No floating point anywhere — even the Monte-Carlo
//! cross-checks sample rational grid points.

pub mod families;
pub mod linalg;
pub mod padic;
pub mod q;
pub mod roots;
pub mod scissors;
pub mod sl2;

pub use q::Q;
