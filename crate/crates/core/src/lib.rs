//! Exact, desk-scale harmonic analysis on finite unital inverse semigroups.
//!
//! The crate builds the restricted semigroup `S_r` and the associated
//! groupoid `S_a` of a finite inverse semigroup, realizes restricted
//! representations as complex matrices, decides membership in the various
//! positive definite cones, and computes the restricted C*-norm together with
//! its dual norm on the restricted Fourier-Stieltjes algebra.
//!
//! Everything is finite dimensional: a semigroup is a Cayley table, a
//! function is a vector of complex numbers indexed by elements, and a
//! representation is one square matrix per element.

pub mod analysis;
pub mod cfunction;
pub mod error;
pub mod groupoid;
pub mod linalg;
pub mod random;
pub mod representations;
pub mod restricted;
pub mod semigroup;
pub mod tolerance;

pub use analysis::{
    b_norm, b_norm_with, fourier_spans, is_extendible, is_positive_definite_star, is_restricted_pd, plateau,
    separation_suite, sigma_r_norm, verify_semigroup, wedderburn_blocks, BlockDecomposition, Extendibility,
    FourierSpans, NormMethod, NormReport, PlateauReport, PsdCertificate, PsdVerdict, SemigroupReport, Status,
    SuiteReport, VerifyConfig,
};
pub use cfunction::CFunction;
pub use error::{Error, Result};
pub use groupoid::{build_associated_groupoid, check_groupoid, Groupoid, GroupoidRep};
pub use representations::{
    check_restricted_rep, coefficient, direct_sum, gns, groupoid_to_rep, rep_to_groupoid, tensor, GnsResult,
    RestrictedRepCheckReport,
};
pub use restricted::{
    build_restricted_semigroup, coefficient_pair, lambda_r, restricted_convolution, restricted_product, rho_r, tilde,
    MatrixRep, RestrictedSemigroup,
};
pub use semigroup::{
    build_builtin, build_standard, builtin_corpus, check_inverse_semigroup, idempotents, parse_raw_semigroup,
    parse_semigroup, render_semigroup, IdempotentSet, InverseSemigroup, RawSemigroup, StandardKind, ValidationReport,
    Violation, BUILTIN_NAMES,
};
pub use tolerance::Tolerance;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
