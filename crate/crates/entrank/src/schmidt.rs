//! Schmidt decompositions, numerical ranks, and the first- and second-order
//! rank profiles of a state.
//!
//! The Schmidt rank across a bipartition is the numerical rank of the
//! reshaped amplitude matrix, i.e. the number of singular values above
//! `tol * sigma_1` (with an absolute floor of 1e-12). The first-order
//! profile collects these ranks over all unordered bipartitions; the
//! second-order quantity drills one level deeper by ranking the left
//! Schmidt vectors themselves across nested splits.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::partition::{enumerate_ordered, enumerate_unordered, nested, Bipartition};
use crate::state::PureState;

/// Absolute floor below which singular values never count toward the rank.
const RANK_FLOOR: f64 = 1e-12;

/// Schmidt form of a state across one bipartition: descending nonnegative
/// coefficients with orthonormal vector sets on both sides.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub part: Bipartition,
    /// All min-dimension singular values, descending.
    pub coeffs: Vec<f64>,
    /// Column vectors on the left subsystem, one per coefficient.
    pub left_vecs: Vec<DVector<Complex64>>,
    /// Column vectors on the right subsystem, one per coefficient.
    pub right_vecs: Vec<DVector<Complex64>>,
    /// Number of coefficients above the rank tolerance.
    pub rank: usize,
    pub tol: f64,
}

impl SchmidtDecomposition {
    /// Rebuilds the bipartition matrix from the decomposition.
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let rows = self.left_vecs[0].len();
        let cols = self.right_vecs[0].len();
        let mut m = DMatrix::zeros(rows, cols);
        for (s, (u, w)) in self
            .coeffs
            .iter()
            .zip(self.left_vecs.iter().zip(&self.right_vecs))
        {
            for r in 0..rows {
                for c in 0..cols {
                    m[(r, c)] += Complex64::new(*s, 0.0) * u[r] * w[c];
                }
            }
        }
        m
    }

    /// True when some coefficient sits within a factor 10 of the rank
    /// threshold, i.e. the rank decision is numerically fragile.
    pub fn is_marginal(&self) -> bool {
        let top = self.coeffs[0];
        if top < RANK_FLOOR {
            return true;
        }
        self.coeffs
            .iter()
            .any(|&s| s / top >= self.tol / 10.0 && s / top <= self.tol * 10.0)
    }
}

/// Number of singular values above `tol * svals[0]`, with the absolute
/// floor applied. `svals` must be sorted descending.
fn numerical_rank(svals: &[f64], tol: f64) -> usize {
    let top = svals.first().copied().unwrap_or(0.0);
    let cut = (tol * top).max(RANK_FLOOR);
    svals.iter().take_while(|&&s| s > cut).count()
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}

/// Schmidt decomposition of `state` across `part` by dense SVD.
pub fn schmidt_decompose(
    state: &PureState,
    part: &Bipartition,
    tol: f64,
) -> Result<SchmidtDecomposition> {
    check_tol(tol)?;
    let m = state.bipartition_matrix(part)?;
    let svd = m.svd(true, true);
    let u = svd.u.expect("svd with u requested");
    let vt = svd.v_t.expect("svd with v_t requested");
    let k = svd.singular_values.len();

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .expect("singular values are finite")
    });

    let mut coeffs = Vec::with_capacity(k);
    let mut left_vecs = Vec::with_capacity(k);
    let mut right_vecs = Vec::with_capacity(k);
    for &i in &order {
        coeffs.push(svd.singular_values[i]);
        left_vecs.push(u.column(i).into_owned());
        right_vecs.push(vt.row(i).transpose());
    }
    let rank = numerical_rank(&coeffs, tol);
    Ok(SchmidtDecomposition {
        part: part.clone(),
        coeffs,
        left_vecs,
        right_vecs,
        rank,
        tol,
    })
}

/// Singular values of the bipartition matrix, descending.
pub fn singular_values(state: &PureState, part: &Bipartition) -> Result<Vec<f64>> {
    let m = state.bipartition_matrix(part)?;
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    Ok(sv)
}

/// Schmidt rank of `state` across `part`.
pub fn schmidt_rank(state: &PureState, part: &Bipartition, tol: f64) -> Result<usize> {
    check_tol(tol)?;
    Ok(numerical_rank(&singular_values(state, part)?, tol))
}

/// First-order rank data of a state, optionally extended with the
/// second-order minimum.
#[derive(Debug, Clone)]
pub struct RankProfile {
    /// Rank across every unordered bipartition, keyed canonically.
    pub ranks: BTreeMap<Bipartition, usize>,
    pub r1_min: usize,
    pub r1_max: usize,
    /// Second-order minimal rank; `None` until computed on demand.
    pub r2_min: Option<usize>,
    /// True when the state is bipartite, where no nested split exists and
    /// the second-order value degenerates to `r1_min`.
    pub r2_from_first_order: bool,
    /// True when some bipartition spectrum sits near the rank threshold.
    pub marginal: bool,
    pub tol: f64,
}

impl RankProfile {
    /// The bipartitions attaining a given rank.
    pub fn witnesses_with_rank(&self, rank: usize) -> Vec<Bipartition> {
        self.ranks
            .iter()
            .filter(|(_, &r)| r == rank)
            .map(|(p, _)| p.clone())
            .collect()
    }
}

/// Ranks across all unordered bipartitions; `r2_min` is left unset.
pub fn rank_profile(state: &PureState, tol: f64) -> Result<RankProfile> {
    check_tol(tol)?;
    let n = state.n_parties();
    let parts = enumerate_unordered(n)?;
    let mut ranks = BTreeMap::new();
    let mut marginal = false;
    for part in parts {
        let sv = singular_values(state, &part)?;
        let rank = numerical_rank(&sv, tol);
        let top = sv[0];
        if top < RANK_FLOOR
            || sv
                .iter()
                .any(|&s| s / top >= tol / 10.0 && s / top <= tol * 10.0)
        {
            marginal = true;
        }
        ranks.insert(part, rank);
    }
    let r1_min = *ranks.values().min().expect("nonempty");
    let r1_max = *ranks.values().max().expect("nonempty");
    Ok(RankProfile {
        ranks,
        r1_min,
        r1_max,
        r2_min: None,
        r2_from_first_order: n == 2,
        marginal,
        tol,
    })
}

/// Rank profile with the second-order minimum filled in.
pub fn rank_profile_full(state: &PureState, tol: f64) -> Result<RankProfile> {
    let mut profile = rank_profile(state, tol)?;
    profile.r2_min = Some(r2_min(state, tol)?);
    Ok(profile)
}

/// Second-order minimal Schmidt rank.
///
/// For each ordered bipartition `(X1, X2)` the state is Schmidt-decomposed;
/// every left Schmidt vector is itself ranked across all nested splits of
/// `X1` (taking the minimum; a single-party `X1` contributes 1 per vector),
/// and these minima are summed. The result is the minimum of the sums over
/// all ordered bipartitions.
///
/// For a bipartite state no nested split exists and the value degenerates
/// to `r1_min`.
///
/// When Schmidt coefficients are degenerate the left vectors are only
/// determined up to rotation; the value then depends on the basis the SVD
/// returns. The backend is deterministic and the bipartition order fixed,
/// so repeated runs always agree.
pub fn r2_min(state: &PureState, tol: f64) -> Result<usize> {
    check_tol(tol)?;
    let n = state.n_parties();
    if n < 2 {
        return Err(Error::TooFewParties { required: 2, got: n });
    }
    if n == 2 {
        return Ok(rank_profile(state, tol)?.r1_min);
    }
    let mut best = usize::MAX;
    for part in enumerate_ordered(n)? {
        let sd = schmidt_decompose(state, &part, tol)?;
        let total = if part.left().len() == 1 {
            // Single subspace on the splitting side: each left vector
            // counts 1, so the sum collapses to the first-order rank.
            sd.rank
        } else {
            let sub_dims: Vec<usize> = part.left().iter().map(|&p| state.dims()[p]).collect();
            let splits = nested_position_splits(part.left());
            let mut sum = 0usize;
            for vec in sd.left_vecs.iter().take(sd.rank) {
                let sub = PureState::new(sub_dims.clone(), vec.iter().copied().collect())?;
                let mut min_rank = usize::MAX;
                for split in &splits {
                    min_rank = min_rank.min(schmidt_rank(&sub, split, tol)?);
                }
                sum += min_rank;
            }
            sum
        };
        best = best.min(total);
    }
    Ok(best)
}

/// Nested splits of a party subset, re-labelled to positions `0..m` within
/// the sorted subset so they apply to the extracted sub-state.
fn nested_position_splits(subset: &[usize]) -> Vec<Bipartition> {
    nested(subset)
        .into_iter()
        .map(|b| {
            let pos = |labels: &[usize]| -> Vec<usize> {
                labels
                    .iter()
                    .map(|l| subset.binary_search(l).expect("label in subset"))
                    .collect()
            };
            Bipartition::new(pos(b.left()), pos(b.right())).expect("valid by construction")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::ProductState;
    use crate::DEFAULT_TOL;
    use num_complex::Complex64;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn w_state() -> PureState {
        let v = 1.0 / 3f64.sqrt();
        let mut amps = vec![Complex64::ZERO; 8];
        amps[0b001] = re(v);
        amps[0b010] = re(v);
        amps[0b100] = re(v);
        PureState::new(vec![2, 2, 2], amps).unwrap()
    }

    #[test]
    fn ghz_schmidt_coefficients() {
        let ghz = PureState::ghz(3, 2).unwrap();
        let part = Bipartition::split(3, &[0]).unwrap();
        let sd = schmidt_decompose(&ghz, &part, DEFAULT_TOL).unwrap();
        assert_eq!(sd.rank, 2);
        let v = 1.0 / 2f64.sqrt();
        assert!((sd.coeffs[0] - v).abs() < 1e-12);
        assert!((sd.coeffs[1] - v).abs() < 1e-12);
    }

    #[test]
    fn product_state_has_rank_one_everywhere() {
        let p = ProductState::new(vec![
            vec![re(1.0), re(1.0)],
            vec![re(1.0), re(0.0)],
            vec![re(0.0), re(1.0)],
        ])
        .unwrap()
        .to_pure();
        for part in enumerate_unordered(3).unwrap() {
            let sd = schmidt_decompose(&p, &part, DEFAULT_TOL).unwrap();
            assert_eq!(sd.rank, 1);
            assert!((sd.coeffs[0] - 1.0).abs() < 1e-10);
            assert!(sd.coeffs[1] < 1e-10);
        }
    }

    #[test]
    fn decomposition_invariants() {
        let w = w_state();
        for part in enumerate_unordered(3).unwrap() {
            let sd = schmidt_decompose(&w, &part, DEFAULT_TOL).unwrap();
            // coefficients descending, squares sum to one
            let sum_sq: f64 = sd.coeffs.iter().map(|s| s * s).sum();
            assert!((sum_sq - 1.0).abs() < 1e-10);
            for i in 1..sd.coeffs.len() {
                assert!(sd.coeffs[i] <= sd.coeffs[i - 1] + 1e-14);
            }
            // orthonormal sides
            for i in 0..sd.left_vecs.len() {
                for j in 0..sd.left_vecs.len() {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((sd.left_vecs[i].dotc(&sd.left_vecs[j]).norm() - expect).abs() < 1e-10);
                    assert!(
                        (sd.right_vecs[i].dotc(&sd.right_vecs[j]).norm() - expect).abs() < 1e-10
                    );
                }
            }
            // reconstruction
            let m = w.bipartition_matrix(&part).unwrap();
            assert!((sd.reconstruct() - m).norm() < 1e-10);
        }
    }

    #[test]
    fn w_state_singular_values_match_gram_oracle() {
        // Across {1,2}|{3} the Gram matrix of the 4x2 reshape is
        // diag(2/3, 1/3), so the singular values are sqrt(2/3), sqrt(1/3).
        let w = w_state();
        let part = Bipartition::split(3, &[0, 1]).unwrap();
        let sv = singular_values(&w, &part).unwrap();
        assert!((sv[0] - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!((sv[1] - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn ghz_rank_profile_all_levels() {
        for n in [3usize, 4] {
            for d in [2usize, 3, 4] {
                let ghz = PureState::ghz(n, d).unwrap();
                let profile = rank_profile_full(&ghz, DEFAULT_TOL).unwrap();
                assert_eq!(profile.r1_min, d, "n={} d={}", n, d);
                assert_eq!(profile.r1_max, d, "n={} d={}", n, d);
                assert_eq!(profile.r2_min, Some(d), "n={} d={}", n, d);
                assert!(!profile.marginal);
            }
        }
    }

    #[test]
    fn w_state_profile() {
        let w = w_state();
        let profile = rank_profile_full(&w, DEFAULT_TOL).unwrap();
        assert_eq!(profile.r1_min, 2);
        assert_eq!(profile.r1_max, 2);
        // Ordered split ({1},{2,3}) contributes its rank 2 directly; the
        // pair-side orientations sum to 3; the minimum is 2.
        assert_eq!(profile.r2_min, Some(2));
    }

    #[test]
    fn full_product_r2_is_one() {
        let p = PureState::basis(vec![2, 2, 2], &[0, 1, 0]).unwrap();
        assert_eq!(r2_min(&p, DEFAULT_TOL).unwrap(), 1);
    }

    #[test]
    fn bipartite_r2_degenerates_to_r1() {
        let bell = PureState::ghz(2, 2).unwrap();
        assert_eq!(r2_min(&bell, DEFAULT_TOL).unwrap(), 2);
        let profile = rank_profile(&bell, DEFAULT_TOL).unwrap();
        assert!(profile.r2_from_first_order);
    }

    #[test]
    fn out_of_range_tolerance_rejected() {
        let ghz = PureState::ghz(3, 2).unwrap();
        for bad in [0.0, -1e-10, 1.0, 2.0] {
            assert!(matches!(
                rank_profile(&ghz, bad),
                Err(crate::Error::InvalidTolerance(_))
            ));
        }
    }

    #[test]
    fn rank_symmetry_under_side_swap() {
        let w = w_state();
        for part in enumerate_unordered(3).unwrap() {
            let a = schmidt_rank(&w, &part, DEFAULT_TOL).unwrap();
            let b = schmidt_rank(&w, &part.swapped(), DEFAULT_TOL).unwrap();
            assert_eq!(a, b);
        }
    }
}
