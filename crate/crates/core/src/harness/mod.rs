//! Randomized experiments: seeded generators, threshold tables,
//! counterexample hunts and lemma-chain audits.

pub mod audit;
pub mod corpus;
pub mod generate;
pub mod hunt;
pub mod rng;
pub mod threshold;

pub use audit::{
    audit_statement1, audit_statement1_with, audit_statement2, audit_statement2_with,
    family_digest, AuditReport, AuditStep, IdentityCheck, Statement1Auditor, Statement2Auditor,
    Verdict,
};
pub use corpus::{audit_corpus, corpus_instance, CorpusSummary};
pub use generate::{generate_family, DistributionKind, FamilyDistribution};
pub use hunt::{
    counterexample_hunt, counterexample_hunt_with, hunt_targets, HuntOptions, HuntReport,
};
pub use rng::{derive_seed, Rng};
pub use threshold::{threshold_experiment, ThresholdRow, ThresholdTable};
