//! Constructive superposition plans that drive an entangled state to
//! separability, and a verifier that classifies a plan's outcome.
//!
//! Three constructions are provided, mirroring the CLI's
//! `construct --method {lemma2|thm4|thm5}`:
//!
//! * [`lemma2_construction`] — for a bipartite state of Schmidt rank `r`,
//!   `r` mutually orthogonal product states (each also orthogonal to the
//!   state) whose superposition is separable.
//! * [`theorem4_construction`] — `r - 1` pairwise orthogonal product
//!   states reaching separability; exists only when the Schmidt spectrum
//!   is not flat.
//! * [`theorem5_construction`] — for a tripartite diagonal state
//!   `sum_i a_i |iii>`, `2r - 1` product states each orthogonal to the
//!   state whose superposition is fully separable.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::partition::Bipartition;
use crate::robustness::{classify, Classification};
use crate::schmidt::{schmidt_decompose, SchmidtDecomposition};
use crate::state::{ProductState, PureState, SuperpositionPlan};

/// Tolerance below which two Schmidt coefficients count as equal for the
/// flat-spectrum (maximally entangled) exclusions.
const COEFF_EQ_TOL: f64 = 1e-8;

/// Grid resolution of the angle scan in [`pairwise_eliminate`].
const ALPHA_GRID: usize = 10_000;

/// One pairwise elimination: the angles and mixing weight that cancel the
/// entanglement of a two-term Schmidt block `a0|00> + a1|11>`.
///
/// The eliminating product state
/// `(cos a |0> + sin a |1>) ⊗ (cos b |0> + sin b |1>)` is orthogonal to the
/// block, and mixing it with weight `sqrt(1-p)` against `sqrt(p)` of the
/// block yields the rank-1 `resulting_factor`.
#[derive(Debug, Clone)]
pub struct EliminationStep {
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Phase angles of the two factors; the construction is real, so both
    /// are zero.
    pub theta: f64,
    pub delta: f64,
    /// The orthogonal eliminating product state on `[2, 2]`.
    pub eliminator: ProductState,
    /// The separable two-term superposition, as a product state on `[2, 2]`.
    pub resulting_factor: ProductState,
}

impl EliminationStep {
    /// Residual of the orthogonality condition
    /// `a0 cos(alpha) cos(beta) + a1 sin(alpha) sin(beta)`.
    pub fn orthogonality_residual(&self, a0: f64, a1: f64) -> f64 {
        a0 * self.alpha.cos() * self.beta.cos() + a1 * self.alpha.sin() * self.beta.sin()
    }

    /// Residual of the separability condition
    /// `p a0 a1 + sqrt(p(1-p)) [a0 sin(alpha) sin(beta) + a1 cos(alpha) cos(beta)]`.
    pub fn separability_residual(&self, a0: f64, a1: f64) -> f64 {
        let s = self.alpha.sin() * self.beta.sin();
        let c = self.alpha.cos() * self.beta.cos();
        self.p * a0 * a1 + (self.p * (1.0 - self.p)).sqrt() * (a0 * s + a1 * c)
    }
}

/// Given the feasibility data at angle `alpha`, solve the two conditions:
/// beta from orthogonality (exactly), then the mixing weight `p` from the
/// separability condition. Returns `None` when no `p` in (0,1) exists.
fn solve_at_alpha(a0: f64, a1: f64, alpha: f64) -> Option<(f64, f64, f64)> {
    let (sa, ca) = alpha.sin_cos();
    // (cos b, sin b) proportional to (a1 sin a, -a0 cos a) kills the
    // orthogonality residual identically.
    let r = (a1 * sa).hypot(a0 * ca);
    if r < 1e-300 {
        return None;
    }
    let cb = a1 * sa / r;
    let sb = -a0 * ca / r;
    let denom = a0 * sa * sb + a1 * ca * cb;
    let k = -a0 * a1 / denom;
    if !k.is_finite() || k <= 0.0 {
        return None;
    }
    let p = 1.0 / (1.0 + k * k);
    if p <= 0.0 || p >= 1.0 {
        return None;
    }
    Some((p, cb, sb))
}

/// Finds `(p, alpha, beta)` cancelling the entanglement of the normalized
/// coefficient pair `(a0, a1)` with an orthogonal product state.
///
/// The angle is scanned on a grid over `(0, pi)`; the edges of the first
/// feasible interval are then sharpened by bisection and its midpoint is
/// taken, which keeps `p` well inside `(0, 1)`.
///
/// Errors with [`Error::MaximallyEntangledPair`] when `|a0| = |a1|`, where
/// the two conditions have no common solution.
pub fn pairwise_eliminate(a0: f64, a1: f64) -> Result<EliminationStep> {
    if !(a0 > 0.0 && a1 > 0.0) {
        return Err(Error::ShapeMismatch(
            "coefficients must be strictly positive".into(),
        ));
    }
    if (a0 * a0 + a1 * a1 - 1.0).abs() > 1e-8 {
        return Err(Error::ShapeMismatch(
            "coefficient pair must be normalized".into(),
        ));
    }
    if (a0 - a1).abs() <= COEFF_EQ_TOL {
        return Err(Error::MaximallyEntangledPair);
    }

    let grid = |i: usize| std::f64::consts::PI * i as f64 / (ALPHA_GRID + 1) as f64;
    let feasible = |alpha: f64| solve_at_alpha(a0, a1, alpha).is_some();

    let first = (1..=ALPHA_GRID)
        .find(|&i| feasible(grid(i)))
        .ok_or(Error::NoRootFound)?;
    let last = (first..=ALPHA_GRID)
        .take_while(|&i| feasible(grid(i)))
        .last()
        .unwrap_or(first);

    // Bisect both edges of the feasible interval to 1e-12, then take the
    // midpoint.
    let mut lo = grid(first - 1);
    let mut hi = grid(first);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let left_edge = hi;
    let mut lo2 = grid(last);
    let mut hi2 = grid(last + 1);
    while hi2 - lo2 > 1e-12 {
        let mid = 0.5 * (lo2 + hi2);
        if feasible(mid) {
            lo2 = mid;
        } else {
            hi2 = mid;
        }
    }
    let right_edge = lo2;

    let alpha = 0.5 * (left_edge + right_edge);
    let (p, cb, sb) = solve_at_alpha(a0, a1, alpha).ok_or(Error::NoRootFound)?;
    let beta = sb.atan2(cb);
    let (sa, ca) = alpha.sin_cos();

    let re = |x: f64| Complex64::new(x, 0.0);
    let eliminator = ProductState::new(vec![vec![re(ca), re(sa)], vec![re(cb), re(sb)]])?;

    // sqrt(p) diag(a0, a1) + sqrt(1-p) eliminator is rank 1 by construction.
    let sp = p.sqrt();
    let sq = (1.0 - p).sqrt();
    let m = nalgebra::Matrix2::new(
        sp * a0 + sq * ca * cb,
        sq * ca * sb,
        sq * sa * cb,
        sp * a1 + sq * sa * sb,
    );
    let (left, right) = rank1_factors_2x2(&m);
    let resulting_factor =
        ProductState::new(vec![vec![re(left[0]), re(left[1])], vec![re(right[0]), re(right[1])]])?;

    Ok(EliminationStep {
        p,
        alpha,
        beta,
        theta: 0.0,
        delta: 0.0,
        eliminator,
        resulting_factor,
    })
}

/// Unit rank-1 factors of a real 2x2 matrix that is rank 1 up to round-off.
/// Returns (column direction, row direction) without the scale.
fn rank1_factors_2x2(m: &nalgebra::Matrix2<f64>) -> ([f64; 2], [f64; 2]) {
    let n0 = m[(0, 0)].hypot(m[(1, 0)]);
    let n1 = m[(0, 1)].hypot(m[(1, 1)]);
    let x = if n0 >= n1 {
        [m[(0, 0)] / n0, m[(1, 0)] / n0]
    } else {
        [m[(0, 1)] / n1, m[(1, 1)] / n1]
    };
    let mut y = [
        x[0] * m[(0, 0)] + x[1] * m[(1, 0)],
        x[0] * m[(0, 1)] + x[1] * m[(1, 1)],
    ];
    let ny = y[0].hypot(y[1]);
    y[0] /= ny;
    y[1] /= ny;
    (x, y)
}

fn bipartite_schmidt(state: &PureState, tol: f64) -> Result<SchmidtDecomposition> {
    if state.n_parties() != 2 {
        return Err(Error::NotBipartite(state.n_parties()));
    }
    let part = Bipartition::split(2, &[0])?;
    schmidt_decompose(state, &part, tol)
}

/// Builds `r` mutually orthogonal product states, each orthogonal to the
/// bipartite input, whose superposition with it is separable:
/// `p_i = |u_i> ⊗ (1/sqrt(r-1)) sum_{j != i} |v_j>` in the Schmidt bases,
/// with lead `1/sqrt(r)` and coefficients `sqrt((r-1)/r) a_i`.
pub fn lemma2_construction(state: &PureState, tol: f64) -> Result<SuperpositionPlan> {
    let sd = bipartite_schmidt(state, tol)?;
    let r = sd.rank;
    if r < 2 {
        return Err(Error::RankTooLow(r));
    }
    let rf = r as f64;
    let mut terms = Vec::with_capacity(r);
    for i in 0..r {
        let mut rest: DVector<Complex64> = DVector::zeros(sd.right_vecs[0].len());
        for j in 0..r {
            if j != i {
                rest += &sd.right_vecs[j];
            }
        }
        rest /= Complex64::new((rf - 1.0).sqrt(), 0.0);
        let p = ProductState::from_vectors(vec![sd.left_vecs[i].clone(), rest])?;
        let mu = Complex64::new(((rf - 1.0) / rf).sqrt() * sd.coeffs[i], 0.0);
        terms.push((mu, p));
    }
    SuperpositionPlan::new(Complex64::new(1.0 / rf.sqrt(), 0.0), terms)
}

/// Builds `r - 1` pairwise orthogonal product states whose superposition
/// with 'state' is separable.
///
/// The two most unequal Schmidt coefficients are merged with one
/// [`pairwise_eliminate`] step; each untouched Schmidt term `a_k |u_k v_k>`
/// is then removed by superposing `|u_k> ⊗ |v_k>` itself with coefficient
/// `-a_k sqrt(p) / nu`. Every plan state lives in a subspace orthogonal to
/// all the others, so the Gram matrix is exactly diagonal.
///
/// Errors with [`Error::MaximallyEntangled`] when the spectrum is flat,
/// where no such plan exists.
pub fn theorem4_construction(state: &PureState, tol: f64) -> Result<SuperpositionPlan> {
    let sd = bipartite_schmidt(state, tol)?;
    let r = sd.rank;
    if r < 2 {
        return Err(Error::RankTooLow(r));
    }
    let hi = 0;
    let lo = r - 1;
    let nu = (sd.coeffs[hi].powi(2) + sd.coeffs[lo].powi(2)).sqrt();
    let step = match pairwise_eliminate(sd.coeffs[hi] / nu, sd.coeffs[lo] / nu) {
        Err(Error::MaximallyEntangledPair) => return Err(Error::MaximallyEntangled),
        other => other?,
    };

    let (sa, ca) = (step.alpha.sin(), step.alpha.cos());
    let (sb, cb) = (step.beta.sin(), step.beta.cos());
    let cc = |x: f64| Complex64::new(x, 0.0);
    let merged_left = &sd.left_vecs[hi] * cc(ca) + &sd.left_vecs[lo] * cc(sa);
    let merged_right = &sd.right_vecs[hi] * cc(cb) + &sd.right_vecs[lo] * cc(sb);
    let eliminator = ProductState::from_vectors(vec![merged_left, merged_right])?;

    let lead = step.p.sqrt() / nu;
    let mut terms = vec![(cc((1.0 - step.p).sqrt()), eliminator)];
    for k in 1..r - 1 {
        let p = ProductState::from_vectors(vec![
            sd.left_vecs[k].clone(),
            sd.right_vecs[k].clone(),
        ])?;
        terms.push((cc(-sd.coeffs[k] * lead), p));
    }
    SuperpositionPlan::new(cc(lead), terms)
}

/// A bipartite elimination whose every product state is orthogonal to the
/// *input* state (not merely to the running intermediate), built by
/// sequential two-term merges in the Schmidt frame. Mutual orthogonality
/// is not guaranteed. Returns the lead coefficient and the terms; applying
/// them yields a unit product state.
pub(crate) fn base_orthogonal_elimination(
    state: &PureState,
    tol: f64,
) -> Result<(f64, Vec<(f64, ProductState)>)> {
    let sd = bipartite_schmidt(state, tol)?;
    let r = sd.rank;
    if r < 2 {
        return Err(Error::RankTooLow(r));
    }
    if (sd.coeffs[0] - sd.coeffs[r - 1]).abs()
        / (sd.coeffs[0].powi(2) + sd.coeffs[r - 1].powi(2)).sqrt()
        <= COEFF_EQ_TOL
    {
        return Err(Error::MaximallyEntangled);
    }
    let a: Vec<f64> = sd.coeffs[..r].to_vec();

    // Everything below runs in the real r-dimensional Schmidt frame:
    // the state is diag(a), rank-1 terms are real coordinate vectors, and
    // <state|x ⊗ y> = sum_m a_m x_m y_m.
    let overlap = |x: &[f64], y: &[f64]| -> f64 {
        a.iter().zip(x.iter().zip(y)).map(|(am, (xm, ym))| am * xm * ym).sum()
    };

    let mut merged_c = a[0];
    let mut mx = vec![0.0; r];
    let mut my = vec![0.0; r];
    mx[0] = 1.0;
    my[0] = 1.0;
    let mut merged_w = a[0];
    let mut remaining: Vec<usize> = (1..r).collect();
    let mut raw_terms: Vec<(f64, Vec<f64>, Vec<f64>)> = Vec::with_capacity(r - 1);

    while !remaining.is_empty() {
        // Merge the most non-degenerate remaining term first: the step is
        // singular when c1 w1 = c2 w2.
        let (pos, gap) = remaining
            .iter()
            .enumerate()
            .map(|(pos, &k)| (pos, (merged_c * merged_w - a[k] * a[k]).abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).expect("finite"))
            .expect("nonempty");
        if gap <= 1e-8 * (merged_c * merged_w + a[remaining[pos]].powi(2)) {
            return Err(Error::DegenerateMergeUnavoidable);
        }
        let k = remaining.remove(pos);
        let (c1, w1) = (merged_c, merged_w);
        let (c2, w2) = (a[k], a[k]);

        // alpha = pi/4; beta solves the base-orthogonality constraint
        // exactly: (cos b, sin b) ~ (w2, -w1).
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let rho = w1.hypot(w2);
        let (cb, sb) = (w2 / rho, -w1 / rho);
        let t = -c1 * c2 / (c1 * inv_sqrt2 * sb + c2 * inv_sqrt2 * cb);

        let mut qx = vec![0.0; r];
        let mut qy = vec![0.0; r];
        for m in 0..r {
            qx[m] = inv_sqrt2 * mx[m];
            qy[m] = cb * my[m];
        }
        qx[k] += inv_sqrt2;
        qy[k] += sb;
        debug_assert!(overlap(&qx, &qy).abs() < 1e-12);
        raw_terms.push((t, qx.clone(), qy.clone()));

        // New merged term: the rank-1 sum of the 2x2 block
        // diag(c1, c2) + t (cos a, sin a)^T (cos b, sin b) in the basis
        // {(mx,my), (e_k,e_k)}.
        let m2 = nalgebra::Matrix2::new(
            c1 + t * inv_sqrt2 * cb,
            t * inv_sqrt2 * sb,
            t * inv_sqrt2 * cb,
            c2 + t * inv_sqrt2 * sb,
        );
        let (gx, gy) = rank1_factors_2x2(&m2);
        let scale = {
            // sigma = ||M gy|| since gy is the unit row direction
            let r0 = m2[(0, 0)] * gy[0] + m2[(0, 1)] * gy[1];
            let r1 = m2[(1, 0)] * gy[0] + m2[(1, 1)] * gy[1];
            r0.hypot(r1)
        };
        let mut nx = vec![0.0; r];
        let mut ny = vec![0.0; r];
        for m in 0..r {
            nx[m] = gx[0] * mx[m];
            ny[m] = gy[0] * my[m];
        }
        nx[k] += gx[1];
        ny[k] += gy[1];
        // Fix the sign so the merged weight stays positive.
        let mut w_new = overlap(&nx, &ny);
        if w_new < 0.0 {
            for x in nx.iter_mut() {
                *x = -*x;
            }
            w_new = -w_new;
        }
        merged_c = scale;
        mx = nx;
        my = ny;
        merged_w = w_new;
    }

    // Divide through by the final scale so the plan lands exactly on a
    // unit product state.
    let lead = 1.0 / merged_c;
    let mut terms = Vec::with_capacity(raw_terms.len());
    for (t, qx, qy) in raw_terms {
        let mut left: DVector<Complex64> = DVector::zeros(sd.left_vecs[0].len());
        let mut right: DVector<Complex64> = DVector::zeros(sd.right_vecs[0].len());
        for m in 0..r {
            left += &sd.left_vecs[m] * Complex64::new(qx[m], 0.0);
            right += &sd.right_vecs[m] * Complex64::new(qy[m], 0.0);
        }
        let prod = ProductState::from_vectors(vec![left, right])?;
        terms.push((t * lead, prod));
    }
    Ok((lead, terms))
}

/// Decodes a tripartite diagonal-GHZ-form state `sum_i a_i |iii>` in the
/// computational basis. Returns the support indices and their amplitudes.
fn ghz_form_support(state: &PureState) -> Result<(Vec<usize>, Vec<Complex64>)> {
    if state.n_parties() != 3 {
        return Err(Error::NotGhzForm);
    }
    let dims = state.dims();
    let mut support = Vec::new();
    let mut amps = Vec::new();
    let strides = [dims[1] * dims[2], dims[2], 1];
    for k in 0..state.total_dim() {
        let i = k / strides[0];
        let j = (k / strides[1]) % dims[1];
        let l = k % dims[2];
        let a = state.amps()[k];
        if i == j && j == l {
            if a.norm() > 1e-10 {
                support.push(i);
                amps.push(a);
            }
        } else if a.norm() > 1e-10 {
            return Err(Error::NotGhzForm);
        }
    }
    Ok((support, amps))
}

/// For a tripartite state `sum_i a_i |iii>` with `r >= 3` nonzero terms and
/// a non-flat spectrum, builds `2r - 1` product states, all orthogonal to
/// the input, whose superposition is fully separable.
///
/// The first `r` states strip the third party off onto a biseparable
/// intermediate `(sum_i a_i |ii>) ⊗ uniform`; the remaining `r - 1` apply a
/// base-orthogonal bipartite elimination to the pair factor, padded with
/// the uniform third factor.
pub fn theorem5_construction(state: &PureState, tol: f64) -> Result<SuperpositionPlan> {
    let (support, amps) = ghz_form_support(state)?;
    let r = support.len();
    if r < 3 {
        return Err(Error::RankTooLow(r));
    }
    let mags: Vec<f64> = amps.iter().map(|a| a.norm()).collect();
    let max = mags.iter().cloned().fold(0.0, f64::max);
    let min = mags.iter().cloned().fold(f64::INFINITY, f64::min);
    if max - min <= COEFF_EQ_TOL {
        return Err(Error::MaximallyEntangled);
    }

    let dims = state.dims();
    let rf = r as f64;
    let cc = |x: f64| Complex64::new(x, 0.0);
    let basis_vec = |d: usize, i: usize| -> Vec<Complex64> {
        let mut v = vec![Complex64::ZERO; d];
        v[i] = Complex64::ONE;
        v
    };
    let uniform_over = |d: usize, idxs: &[usize]| -> Vec<Complex64> {
        let mut v = vec![Complex64::ZERO; d];
        let w = cc(1.0 / (idxs.len() as f64).sqrt());
        for &i in idxs {
            v[i] = w;
        }
        v
    };

    // Bipartite pair state chi = sum_i a_i |ii> on parties 1 and 2.
    let mut chi_amps = vec![Complex64::ZERO; dims[0] * dims[1]];
    for (&i, &a) in support.iter().zip(&amps) {
        chi_amps[i * dims[1] + i] = a;
    }
    let chi = PureState::new(vec![dims[0], dims[1]], chi_amps)?;
    let (x, sub_terms) = base_orthogonal_elimination(&chi, tol)?;

    let lead = cc(x / rf.sqrt());
    let mut terms = Vec::with_capacity(2 * r - 1);

    // r strip-off states |ii> ⊗ (1/sqrt(r-1)) sum_{j != i} |j>.
    for (&i, &a) in support.iter().zip(&amps) {
        let others: Vec<usize> = support.iter().copied().filter(|&j| j != i).collect();
        let p = ProductState::new(vec![
            basis_vec(dims[0], i),
            basis_vec(dims[1], i),
            uniform_over(dims[2], &others),
        ])?;
        let mu = a * cc(((rf - 1.0) / rf).sqrt() * x);
        terms.push((mu, p));
    }

    // r - 1 pair-eliminating states padded with the uniform third factor.
    let uniform_all = uniform_over(dims[2], &support);
    for (y, q2) in sub_terms {
        let q = ProductState::new(vec![
            q2.factor(0).iter().copied().collect(),
            q2.factor(1).iter().copied().collect(),
            uniform_all.clone(),
        ])?;
        terms.push((cc(y), q));
    }

    SuperpositionPlan::new(lead, terms)
}

/// Outcome of applying and checking a superposition plan.
#[derive(Debug, Clone)]
pub struct PlanVerification {
    pub classification: Classification,
    pub superposed: PureState,
    /// Gram matrix of `[base, p_1, .., p_k]` under the state inner product;
    /// row and column 0 hold the overlaps of the plan states with the base.
    pub gram: DMatrix<Complex64>,
}

/// Applies a plan to a base state, classifies the result, and reports the
/// pairwise overlaps of the base and all plan states.
pub fn verify_plan(
    base: &PureState,
    plan: &SuperpositionPlan,
    tol: f64,
) -> Result<PlanVerification> {
    let superposed = plan.apply(base)?;
    let classification = classify(&superposed, tol)?;
    let k = plan.terms.len();
    let states: Vec<PureState> = std::iter::once(base.clone())
        .chain(plan.terms.iter().map(|(_, p)| p.to_pure()))
        .collect();
    let mut gram = DMatrix::zeros(k + 1, k + 1);
    for i in 0..=k {
        for j in 0..=k {
            gram[(i, j)] = states[i].inner(&states[j])?;
        }
    }
    Ok(PlanVerification {
        classification,
        superposed,
        gram,
    })
}
