//! Classification of pure states by their rank profile and the robustness
//! budgets that bound how many superposed product states the entanglement
//! survives.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{enumerate_unordered, Bipartition};
use crate::schmidt::{rank_profile, rank_profile_full, schmidt_decompose, RankProfile};
use crate::state::{ProductState, PureState};

/// Entanglement class of a pure state. Bipartite states use the
/// `Separable` / `Entangled` pair; three or more parties use the finer
/// product / biseparable / genuine split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StateClass {
    FullySeparableProduct,
    #[serde(rename = "BiseparableNotGME")]
    BiseparableNotGme,
    #[serde(rename = "GME")]
    Gme,
    Separable,
    Entangled,
}

impl std::fmt::Display for StateClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StateClass::FullySeparableProduct => "FullySeparableProduct",
            StateClass::BiseparableNotGme => "BiseparableNotGME",
            StateClass::Gme => "GME",
            StateClass::Separable => "Separable",
            StateClass::Entangled => "Entangled",
        };
        f.write_str(s)
    }
}

/// A class label together with the bipartitions justifying it.
#[derive(Debug, Clone)]
pub struct Classification {
    pub class: StateClass,
    /// For GME: the cuts attaining the minimal rank. For biseparable or
    /// bipartite-separable states: the rank-1 cuts. Empty only for a full
    /// product on three or more parties.
    pub witness: Vec<Bipartition>,
}

/// Classifies a state from its first-order rank profile.
///
/// A state of three or more parties is genuinely multipartite entangled
/// exactly when every bipartition has rank at least 2, and a full product
/// exactly when every bipartition has rank 1.
pub fn classify(state: &PureState, tol: f64) -> Result<Classification> {
    let profile = rank_profile(state, tol)?;
    Ok(classify_profile(state.n_parties(), &profile))
}

/// Classification read off an already-computed profile, avoiding a second
/// pass over the bipartitions.
pub fn classify_from_profile(state: &PureState, profile: &RankProfile) -> Classification {
    classify_profile(state.n_parties(), profile)
}

pub(crate) fn classify_profile(n: usize, profile: &RankProfile) -> Classification {
    if n == 2 {
        let part = profile.ranks.keys().next().expect("one cut").clone();
        let class = if profile.r1_max >= 2 {
            StateClass::Entangled
        } else {
            StateClass::Separable
        };
        return Classification {
            class,
            witness: vec![part],
        };
    }
    if profile.r1_max == 1 {
        Classification {
            class: StateClass::FullySeparableProduct,
            witness: Vec::new(),
        }
    } else if profile.r1_min >= 2 {
        Classification {
            class: StateClass::Gme,
            witness: profile.witnesses_with_rank(profile.r1_min),
        }
    } else {
        Classification {
            class: StateClass::BiseparableNotGme,
            witness: profile.witnesses_with_rank(1),
        }
    }
}

/// Superposition robustness budgets of a state.
///
/// Each budget counts the product states that can be superposed (with any
/// nonzero coefficients) while the corresponding property is guaranteed to
/// survive: `gme_budget` for genuine multipartite entanglement,
/// `insep_budget` for entanglement, `triple_budget` against triple
/// separability.
#[derive(Debug, Clone)]
pub struct RobustnessCertificate {
    pub gme_budget: usize,
    pub insep_budget: usize,
    pub triple_budget: usize,
    pub profile: RankProfile,
    /// Set when the state is not entangled and the budgets are vacuous.
    pub note: Option<String>,
}

/// Computes the robustness budgets `r1_min - 2`, `r1_max - 2`, and
/// `r2_min - 2`, floored at zero.
pub fn certify(state: &PureState, tol: f64) -> Result<RobustnessCertificate> {
    let profile = rank_profile_full(state, tol)?;
    let r2 = profile.r2_min.expect("full profile");
    if profile.r1_max < 2 {
        return Ok(RobustnessCertificate {
            gme_budget: 0,
            insep_budget: 0,
            triple_budget: 0,
            profile,
            note: Some("state is a full product; budgets are vacuous".into()),
        });
    }
    Ok(RobustnessCertificate {
        gme_budget: profile.r1_min.saturating_sub(2),
        insep_budget: profile.r1_max.saturating_sub(2),
        triple_budget: r2.saturating_sub(2),
        profile,
        note: None,
    })
}

/// Number of tensor factors in the finest product factorization of the
/// state, grouping parties as needed.
///
/// Finds a rank-1 bipartition, extracts both factors from the Schmidt
/// form, and recurses. A state with no rank-1 cut is a single factor.
pub fn tensor_factor_count(state: &PureState, tol: f64) -> Result<usize> {
    if state.n_parties() == 1 {
        return Ok(1);
    }
    for part in enumerate_unordered(state.n_parties())? {
        let sd = schmidt_decompose(state, &part, tol)?;
        if sd.rank == 1 {
            let left_dims: Vec<usize> = part.left().iter().map(|&p| state.dims()[p]).collect();
            let right_dims: Vec<usize> = part.right().iter().map(|&p| state.dims()[p]).collect();
            let left = PureState::new(left_dims, sd.left_vecs[0].iter().copied().collect())?;
            let right = PureState::new(right_dims, sd.right_vecs[0].iter().copied().collect())?;
            return Ok(tensor_factor_count(&left, tol)? + tensor_factor_count(&right, tol)?);
        }
    }
    Ok(1)
}

/// True when the state factors into at least three tensor factors under
/// some grouping of parties.
pub fn is_triple_separable(state: &PureState, tol: f64) -> Result<bool> {
    if state.n_parties() < 3 {
        return Err(Error::TooFewParties {
            required: 3,
            got: state.n_parties(),
        });
    }
    Ok(tensor_factor_count(state, tol)? >= 3)
}

/// Extracts the per-party factors of a full product state. Returns `None`
/// when some single-party cut has rank above 1.
pub fn extract_product_factors(state: &PureState, tol: f64) -> Result<Option<ProductState>> {
    let n = state.n_parties();
    if n == 1 {
        let factor: Vec<Complex64> = state.amps().iter().copied().collect();
        return Ok(Some(ProductState::new(vec![factor])?));
    }
    let mut factors = Vec::with_capacity(n);
    for party in 0..n {
        let part = Bipartition::split(n, &[party])?;
        let sd = schmidt_decompose(state, &part, tol)?;
        if sd.rank != 1 {
            return Ok(None);
        }
        factors.push(sd.left_vecs[0].iter().copied().collect());
    }
    Ok(Some(ProductState::new(factors)?))
}
