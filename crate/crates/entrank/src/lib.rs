//! Rank-based entanglement analysis of multipartite pure states.
//!
//! The library answers three families of questions about a dense n-partite
//! pure state:
//!
//! * **Classification** — is the state a full product, biseparable, or
//!   genuinely multipartite entangled? ([`classify`], [`rank_profile`])
//! * **Robustness** — how many product states can be superposed onto it
//!   without ever producing a biseparable / fully separable / triple
//!   separable state? ([`certify`])
//! * **Construction** — explicit superposition plans that do reach
//!   separability, and an adversarial numerical search for
//!   entanglement-breaking superpositions. ([`lemma2_construction`],
//!   [`theorem4_construction`], [`theorem5_construction`],
//!   [`adversarial_search`])
//!
//! Everything is built on Schmidt decompositions across bipartitions of the
//! party set, computed by dense SVD. States are immutable and all functions
//! are pure, so values can be shared freely across threads.

pub mod disentangle;
pub mod error;
pub mod fixtures;
pub mod json;
pub mod partition;
pub mod robustness;
pub mod sample;
pub mod schmidt;
pub mod search;
pub mod state;

pub use error::{Error, Result};
pub use partition::{enumerate_ordered, enumerate_unordered, nested, Bipartition};
pub use state::{ProductState, PureState, SuperpositionPlan};

pub use disentangle::{
    lemma2_construction, pairwise_eliminate, theorem4_construction, theorem5_construction,
    verify_plan, EliminationStep, PlanVerification,
};
pub use robustness::{
    certify, classify, is_triple_separable, tensor_factor_count, Classification,
    RobustnessCertificate, StateClass,
};
pub use schmidt::{
    r2_min, rank_profile, rank_profile_full, schmidt_decompose, schmidt_rank, RankProfile,
    SchmidtDecomposition,
};
pub use search::{adversarial_search, gme_gap, sep_gap, Objective, SearchConfig, SearchReport};

/// Default relative tolerance for numerical rank decisions.
pub const DEFAULT_TOL: f64 = 1e-10;
