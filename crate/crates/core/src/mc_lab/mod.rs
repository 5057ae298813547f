//! Seeded random matrices, adversarial sparse certificates, and brute-force
//! RIP constants for small instances.

mod adversarial;
mod exact;
mod experiment;
mod matrix;

pub use adversarial::{adversarial_pair, AdversarialCertificate};
pub use exact::{binomial, exact_rip, exact_rip_with_cap, ExactRip, DEFAULT_SUPPORT_CAP};
pub use experiment::{
    run_experiment, ExperimentConfig, ExperimentSummary, Quantiles, TrialRecord,
};
pub use matrix::{sample_matrix, DenseMatrix, Ensemble};
