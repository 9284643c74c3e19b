//! Exact-arithmetic laboratory for harmonic analysis over finite fields.
//!
//! Everything here works over `F_q` with `q = p^ell` an odd prime power at
//! desk scale (`q <= 4096`, `q^d <= 4*10^6`). The crate provides:
//!
//! * [`field`] — field arithmetic, additive/quadratic characters, traces,
//!   Gauss sums and their closed forms;
//! * [`geometry`] — points, norms, paraboloids and spheres, quadratic-form
//!   equivalence, affine subspaces on spheres, mutually orthogonal systems;
//! * [`fourier`] — discrete Fourier transforms on `F_q^d`, `L^r` norms under
//!   the counting / normalized / surface measures, and closed-form variety
//!   transforms checked against brute force;
//! * [`energy`] — additive energy, zero-distance pair counts, and
//!   point–hyperplane incidence checks;
//! * [`scheme`] — the association scheme on non-square-type non-isotropic
//!   projective points and its first relation graph;
//! * [`distance`] — distance-set profiles, second-moment bounds, the four
//!   explicit-constant distance theorems, and sharpness constructions;
//! * [`extension`] — extension/restriction norm-ratio probes and critical
//!   exponent arithmetic.
//!
//! All identities are checked bit-exactly where the quantities are integers
//! and within a fixed 1e-9 relative tolerance where they are complex sums.

pub mod distance;
pub mod energy;
pub mod error;
pub mod extension;
pub mod field;
pub mod fourier;
pub mod geometry;
pub mod numeric;
pub mod scheme;

pub use error::{Error, Result};
pub use field::{FiniteField, Fq};
pub use geometry::{AffineSubspace, PointSet, Variety, VarietyKind};

