//! Adversarial numerical search for superpositions of product states that
//! break genuine multipartite entanglement or reach full separability.
//!
//! Rank is integer-valued, so the search minimizes a continuous surrogate:
//! the second-largest singular value across bipartitions. That value hits
//! zero exactly when the rank across the relevant cut drops to 1.
//!
//! The base state's lead coefficient is fixed at 1 (any superposition with
//! nonzero lead rescales to this form) and term coefficients are clamped to
//! `|c| <= 1e3`. Without both constraints the optimizer could fake success
//! by shrinking the base contribution to nothing, which corresponds to no
//! genuine superposition at all.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::partition::{enumerate_unordered, Bipartition};
use crate::sample::rng_from_seed;
use crate::schmidt::singular_values;
use crate::state::{strides_of, ProductState, PureState, SuperpositionPlan};

/// What the search tries to achieve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Drive some bipartition to rank 1 (destroy GME).
    BreakGme,
    /// Drive every bipartition to rank 1 (reach a full product).
    ReachFullSeparability,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Number of superposed product terms.
    pub k: usize,
    pub objective: Objective,
    pub restarts: usize,
    /// Line-search iterations allowed per restart (each costs two or three
    /// objective evaluations).
    pub max_iters: usize,
    pub seed: u64,
    pub success_threshold: f64,
    pub tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            k: 1,
            objective: Objective::BreakGme,
            restarts: 32,
            max_iters: 2000,
            seed: 0,
            success_threshold: 1e-8,
            tol: crate::DEFAULT_TOL,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    /// Smallest surrogate gap found over all restarts.
    pub best_gap: f64,
    /// The plan achieving `best_gap`, present exactly when the search
    /// succeeded.
    pub best_plan: Option<SuperpositionPlan>,
    /// Total line-search iterations across restarts.
    pub iterations_used: usize,
    pub succeeded: bool,
}

/// Minimum over all bipartitions of the second-largest singular value.
/// Positive exactly when the state is genuinely multipartite entangled
/// (no cut has rank 1).
pub fn gme_gap(state: &PureState, _tol: f64) -> Result<f64> {
    let mut best = f64::INFINITY;
    for part in enumerate_unordered(state.n_parties())? {
        let sv = singular_values(state, &part)?;
        best = best.min(sv[1]);
    }
    Ok(best)
}

/// Maximum over all bipartitions of the second-largest singular value.
/// Zero exactly when the state is a full product.
pub fn sep_gap(state: &PureState, _tol: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for part in enumerate_unordered(state.n_parties())? {
        let sv = singular_values(state, &part)?;
        worst = worst.max(sv[1]);
    }
    Ok(worst)
}

const COEFF_CLAMP: f64 = 1e3;
const PENALTY: f64 = 10.0;

/// Flat parameter layout per term: for each party `2 d` reals for the
/// unnormalized local vector, then 2 reals for the complex coefficient.
struct Parametrization {
    dims: Vec<usize>,
    k: usize,
}

impl Parametrization {
    fn len(&self) -> usize {
        let per_term: usize = self.dims.iter().map(|d| 2 * d).sum::<usize>() + 2;
        self.k * per_term
    }

    /// Overwrites every term with a computational basis product and a real
    /// coefficient from a coarse grid. Term `t` gets the basis product of
    /// flat index `seed + t`.
    fn encode_basis_products(&self, x: &mut [f64], seed: usize) {
        const COEFF_GRID: [f64; 8] = [0.5, -0.5, 1.0, -1.0, 0.25, -0.25, 2.0, -2.0];
        let total: usize = self.dims.iter().product();
        let mut at = 0usize;
        for t in 0..self.k {
            let mut flat = (seed + t) % total;
            let mut digits = vec![0usize; self.dims.len()];
            for (p, &d) in self.dims.iter().enumerate().rev() {
                digits[p] = flat % d;
                flat /= d;
            }
            for (p, &d) in self.dims.iter().enumerate() {
                for j in 0..d {
                    x[at + 2 * j] = if j == digits[p] { 1.0 } else { 0.0 };
                    x[at + 2 * j + 1] = 0.0;
                }
                at += 2 * d;
            }
            x[at] = COEFF_GRID[(seed / total + t) % COEFF_GRID.len()];
            x[at + 1] = 0.0;
            at += 2;
        }
    }

    /// Coordinate visit order: the coefficient parameters of every term
    /// first (they are the most sensitive knobs and tuning them before the
    /// factors keeps good starting products intact), then the factors.
    fn coordinate_order(&self) -> Vec<usize> {
        let per_factors: usize = self.dims.iter().map(|d| 2 * d).sum();
        let per_term = per_factors + 2;
        let mut order = Vec::with_capacity(self.len());
        for t in 0..self.k {
            let base = t * per_term + per_factors;
            order.push(base);
            order.push(base + 1);
        }
        for t in 0..self.k {
            let base = t * per_term;
            order.extend(base..base + per_factors);
        }
        order
    }

    /// Decodes parameters into plan terms; `None` when a local vector is
    /// numerically zero.
    fn decode(&self, x: &[f64]) -> Option<Vec<(Complex64, ProductState)>> {
        let mut terms = Vec::with_capacity(self.k);
        let mut at = 0usize;
        for _ in 0..self.k {
            let mut factors = Vec::with_capacity(self.dims.len());
            for &d in &self.dims {
                let mut f = Vec::with_capacity(d);
                let mut norm_sq = 0.0;
                for j in 0..d {
                    let c = Complex64::new(x[at + 2 * j], x[at + 2 * j + 1]);
                    norm_sq += c.norm_sqr();
                    f.push(c);
                }
                at += 2 * d;
                if norm_sq < 1e-18 {
                    return None;
                }
                factors.push(f);
            }
            let mut coeff = Complex64::new(x[at], x[at + 1]);
            at += 2;
            let mag = coeff.norm();
            if mag > COEFF_CLAMP {
                coeff *= COEFF_CLAMP / mag;
            }
            let prod = ProductState::new(factors).ok()?;
            terms.push((coeff, prod));
        }
        Some(terms)
    }
}

/// How [`evaluate`] reduces the per-cut second singular values.
#[derive(Clone, Copy, PartialEq)]
enum Reduce {
    /// The objective's true gap: min sigma_2 for GME breaking, max sigma_2
    /// for full separability.
    Gap,
    /// Descent surrogate with the same zero set, reshaped for the line
    /// searches: squared values are locally quadratic near the zero set, so
    /// parabola fits land on it instead of creeping down a kink, and the
    /// sum over cuts (for full separability) removes the kinks of the max
    /// wherever two cuts tie.
    Descent,
}

/// Second singular values of the superposed state across the given cuts,
/// reduced per the objective. `PENALTY` signals an invalid parameter point.
fn evaluate(
    base: &PureState,
    parts: &[Bipartition],
    objective: Objective,
    reduce: Reduce,
    par: &Parametrization,
    x: &[f64],
) -> f64 {
    let Some(terms) = par.decode(x) else {
        return PENALTY;
    };
    let mut amps: DVector<Complex64> = base.amps().clone();
    for (coeff, prod) in &terms {
        amps += prod.to_pure().amps() * *coeff;
    }
    let norm = amps.norm();
    if norm < 1e-12 {
        return PENALTY;
    }
    amps /= Complex64::new(norm, 0.0);

    let dims = base.dims();
    let strides = strides_of(dims);
    let mut digits = vec![0usize; dims.len()];
    let mut min_s2 = f64::INFINITY;
    let mut max_s2: f64 = 0.0;
    let mut sum_sq: f64 = 0.0;
    for part in parts {
        let rows: usize = part.left().iter().map(|&p| dims[p]).product();
        let cols: usize = part.right().iter().map(|&p| dims[p]).product();
        let mut m = DMatrix::zeros(rows, cols);
        for k in 0..amps.len() {
            let mut rem = k;
            for (p, s) in strides.iter().enumerate() {
                digits[p] = rem / s;
                rem %= s;
            }
            let r = part.left().iter().fold(0usize, |a, &p| a * dims[p] + digits[p]);
            let c = part.right().iter().fold(0usize, |a, &p| a * dims[p] + digits[p]);
            m[(r, c)] = amps[k];
        }
        let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
        sv.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
        min_s2 = min_s2.min(sv[1]);
        max_s2 = max_s2.max(sv[1]);
        sum_sq += sv[1] * sv[1];
    }
    match (objective, reduce) {
        (Objective::BreakGme, Reduce::Gap) => min_s2,
        (Objective::BreakGme, Reduce::Descent) => min_s2 * min_s2,
        (Objective::ReachFullSeparability, Reduce::Gap) => max_s2,
        (Objective::ReachFullSeparability, Reduce::Descent) => sum_sq,
    }
}

/// Derivative-free minimization of the superposition gap from random
/// restarts.
///
/// Each restart runs a coordinate-wise quadratic-fit line search with
/// per-coordinate adaptive steps, augmented with random-direction passes
/// and basin-hopping kicks on stall, deterministic given the seed. Half
/// the restarts start from computational-basis product terms, the rest
/// from random points. Restarts are independent and run in parallel; the
/// result is the lexicographically smallest `(gap, restart_index)`, so
/// the report does not depend on scheduling.
///
/// A failed search is evidence, not proof: only the rank bounds guarantee
/// robustness.
pub fn adversarial_search(base: &PureState, cfg: &SearchConfig) -> Result<SearchReport> {
    if cfg.k < 1 || cfg.restarts < 1 || !(cfg.success_threshold > 0.0 && cfg.success_threshold < 1.0)
    {
        return Err(Error::ShapeMismatch(
            "search config needs k >= 1, restarts >= 1, threshold in (0,1)".into(),
        ));
    }
    let profile = crate::schmidt::rank_profile(base, cfg.tol)?;
    if profile.r1_max < 2 {
        return Err(Error::BaseNotEntangled);
    }
    let parts = enumerate_unordered(base.n_parties())?;
    let par = Parametrization {
        dims: base.dims().to_vec(),
        k: cfg.k,
    };

    let results: Vec<(f64, Vec<f64>, usize)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|ridx| {
            let mut rng =
                rng_from_seed(cfg.seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(ridx as u64 + 1)));
            let n = par.len();
            let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            // Half the restarts start from computational-basis product
            // terms, the canonical candidates for eliminating states; the
            // rest explore from fully random points.
            if ridx < cfg.restarts.div_ceil(2) {
                par.encode_basis_products(&mut x, ridx * cfg.k);
            }
            let order = par.coordinate_order();
            // Descent values are on a squared scale relative to the gap.
            let exit_level = (cfg.success_threshold * 0.1).powi(2);
            let mut steps = vec![0.25f64; n];
            let mut rand_step = 0.25f64;
            let mut iters = 0usize;
            let mut f0 = evaluate(base, &parts, cfg.objective, Reduce::Descent, &par, &x);

            // Quadratic-fit line search along one direction: sample at
            // +-h, fit a parabola, move to the best of the four points.
            // Returns the new value and the improvement achieved.
            let line = |x: &mut [f64], dir: &[f64], h: f64, f0: f64| -> (f64, f64) {
                let x0 = x.to_vec();
                let place = |x: &mut [f64], t: f64| {
                    for (xi, (&x0i, &di)) in x.iter_mut().zip(x0.iter().zip(dir)) {
                        *xi = x0i + t * di;
                    }
                };
                place(x, -h);
                let fm = evaluate(base, &parts, cfg.objective, Reduce::Descent, &par, x);
                place(x, h);
                let fp = evaluate(base, &parts, cfg.objective, Reduce::Descent, &par, x);
                let mut best_f = f0;
                let mut best_t = 0.0;
                if fm < best_f {
                    best_f = fm;
                    best_t = -h;
                }
                if fp < best_f {
                    best_f = fp;
                    best_t = h;
                }
                let curv = fp - 2.0 * f0 + fm;
                if curv > 1e-300 {
                    let t = (0.5 * (fm - fp) / curv * h).clamp(-5.0 * h, 5.0 * h);
                    place(x, t);
                    let fv = evaluate(base, &parts, cfg.objective, Reduce::Descent, &par, x);
                    if fv < best_f {
                        best_f = fv;
                        best_t = t;
                    }
                }
                place(x, best_t);
                (best_f, f0 - best_f)
            };

            let mut best_f = f0;
            let mut best_x = x.clone();
            // Kick scales for the stall restarts, cycled.
            const KICKS: [f64; 3] = [0.3, 0.1, 0.02];
            let mut kicks = 0usize;

            'outer: while iters < cfg.max_iters {
                let mut improved = false;

                // Coordinate pass with per-axis adaptive steps. Coordinates
                // whose step has collapsed are frozen until the next kick.
                let mut axis = vec![0.0f64; n];
                for &i in &order {
                    if iters >= cfg.max_iters {
                        break 'outer;
                    }
                    if steps[i] <= 1e-12 {
                        continue;
                    }
                    iters += 1;
                    axis[i] = 1.0;
                    let (f_new, gain) = line(&mut x, &axis, steps[i], f0);
                    axis[i] = 0.0;
                    f0 = f_new;
                    if gain > 1e-15 {
                        steps[i] = (steps[i] * 1.4).min(2.0);
                        improved = true;
                    } else {
                        steps[i] = (steps[i] * 0.4).max(1e-13);
                    }
                    if f0 < exit_level {
                        break 'outer;
                    }
                }

                // Random-direction passes escape curved valleys where no
                // single axis improves.
                for _ in 0..4 {
                    if iters >= cfg.max_iters {
                        break 'outer;
                    }
                    let mut dir: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    let norm: f64 = dir.iter().map(|d| d * d).sum::<f64>().sqrt();
                    if norm < 1e-12 {
                        continue;
                    }
                    for d in dir.iter_mut() {
                        *d /= norm;
                    }
                    iters += 1;
                    let (f_new, gain) = line(&mut x, &dir, rand_step, f0);
                    f0 = f_new;
                    if gain > 1e-15 {
                        rand_step = (rand_step * 1.3).min(2.0);
                        improved = true;
                    } else {
                        rand_step = (rand_step * 0.6).max(1e-13);
                    }
                    if f0 < exit_level {
                        break 'outer;
                    }
                }

                if f0 < best_f {
                    best_f = f0;
                    best_x = x.clone();
                }
                let stalled =
                    !improved && steps.iter().all(|&h| h <= 1e-12) && rand_step <= 1e-10;
                if stalled {
                    // Basin hop: kick the best point and re-descend. The
                    // local minima of the gap sit on curved constraint
                    // families; a fresh start nearby often rolls into the
                    // deeper basin at their intersection.
                    let scale = KICKS[kicks % KICKS.len()];
                    kicks += 1;
                    for (xi, &bi) in x.iter_mut().zip(&best_x) {
                        *xi = bi + scale * rng.gen_range(-1.0..1.0);
                    }
                    steps.fill(scale * 0.5);
                    rand_step = scale * 0.5;
                    f0 = evaluate(base, &parts, cfg.objective, Reduce::Descent, &par, &x);
                }
            }
            if f0 < best_f {
                best_x = x.clone();
            }
            let gap = evaluate(base, &parts, cfg.objective, Reduce::Gap, &par, &best_x);
            (gap, best_x, iters)
        })
        .collect();

    let iterations_used: usize = results.iter().map(|(_, _, e)| e).sum();
    let (best_gap, best_x) = results
        .into_iter()
        .map(|(g, x, _)| (g, x))
        .reduce(|a, b| if b.0 < a.0 { b } else { a })
        .expect("at least one restart");

    let succeeded = best_gap < cfg.success_threshold;
    let best_plan = if succeeded {
        let terms = par.decode(&best_x).expect("best point decodes");
        Some(SuperpositionPlan::new(Complex64::ONE, terms)?)
    } else {
        None
    };
    Ok(SearchReport {
        best_gap,
        best_plan,
        iterations_used,
        succeeded,
    })
}
