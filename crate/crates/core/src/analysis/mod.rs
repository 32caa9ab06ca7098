//! Positive definite cones, the restricted C*-norm and its dual norm, and
//! the verification routines built on them.

pub mod fourier;
pub mod norms;
pub mod psd;
pub mod verify;
pub mod wedderburn;

pub use fourier::{fourier_spans, idempotent_sum, plateau, FourierSpans, PlateauReport, SpanReport};
pub use norms::{b_norm, b_norm_with, sigma_r_norm, NormMethod, NormReport};
pub use psd::{is_extendible, is_positive_definite_star, is_restricted_pd, Extendibility, PsdCertificate, PsdVerdict};
pub use verify::{
    separation_suite, verify_semigroup, CheckResult, SemigroupReport, SeparationReport, Status, SuiteReport,
    VerifyConfig, DEFAULT_SEED, REPORT_SCHEMA,
};
pub use wedderburn::{wedderburn_blocks, wedderburn_blocks_seeded, Block, BlockDecomposition};
