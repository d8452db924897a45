//! Multideviation analysis of Bell scenarios.
//!
//! The crate decomposes probability distributions over product sets into
//! multideviations — one independent correlation degree of freedom per
//! subset of indices — and uses the decomposition to generate and verify
//! tight Bell inequalities for arbitrary numbers of observers, observables,
//! and outcomes:
//!
//! * [`algebra`] — exact rationals, bitmask index sets, product sets and
//!   intuples with a deterministic mixed-radix encoding.
//! * [`multidev`] — seed functions, the multideviation transform and its
//!   inverse, probability constraints, binary and Boolean specializations,
//!   and the vector-space embedding.
//! * [`contexts`] — multiple-context event spaces and distributions, the
//!   omni-joint projection, parameter/outcome-independence checks, and
//!   inequality evaluation against observed statistics.
//! * [`pioneer`] — pioneer-set generation of tight Bell inequalities: the
//!   odd-out transform, connectivity, membership, coefficient formulas,
//!   enumeration, lifting, and hypercube realizability.
//! * [`tbic`] — the exact tightness verifier: the linear system of the
//!   dependence condition, rational nullspace computation, facet checks,
//!   and the small-case facet census.
//! * [`quantum`] — even-correlation-state statistics and the violation
//!   curves, the one floating-point corner of the crate.
//! * [`json`] — the serialized forms used by the CLI and FFI surfaces.

pub mod algebra;
pub mod contexts;
pub mod error;
pub mod json;
pub mod multidev;
pub mod pioneer;
pub mod quantum;
pub mod tbic;

pub use error::{Error, Result};
