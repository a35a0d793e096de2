//! Dense representation of n-partite pure states, product states, and
//! superpositions.
//!
//! A [`PureState`] stores the full complex coefficient tensor of a state in
//! `H_1 ⊗ ... ⊗ H_n` in row-major multi-index order and is normalized at
//! construction. All operations are pure; states are immutable once built.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::partition::Bipartition;

/// Absolute norm threshold below which a vector counts as zero.
pub const ZERO_TOL: f64 = 1e-12;

/// Normalizes `v` in place. Vectors whose norm already sits within the
/// skip band around 1 are left untouched, which makes normalization
/// idempotent at the bit level: the recomputed norm of a just-normalized
/// vector drifts by a few ulps per thousand amplitudes, well inside the
/// band, while the band itself keeps the squared norm within 1e-12 of 1.
fn normalize(v: &mut DVector<Complex64>) -> Result<()> {
    let norm = v.norm();
    if norm < ZERO_TOL {
        return Err(Error::ZeroVector);
    }
    if (norm - 1.0).abs() > 2.5e-13 {
        *v /= Complex64::new(norm, 0.0);
    }
    Ok(())
}

/// An n-partite pure state with local dimensions `dims` and unit-norm
/// amplitude tensor `amps` (row-major multi-index order).
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amps: DVector<Complex64>,
}

impl PureState {
    /// Builds a normalized state from raw amplitudes.
    ///
    /// Rejects empty or sub-qubit local dimensions, amplitude vectors of the
    /// wrong length, and the zero vector.
    pub fn new(dims: Vec<usize>, amps: Vec<Complex64>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::ShapeMismatch("dims must be nonempty".into()));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDimension(d));
        }
        let total: usize = dims.iter().product();
        if amps.len() != total {
            return Err(Error::ShapeMismatch(format!(
                "expected {} amplitudes for dims {:?}, got {}",
                total,
                dims,
                amps.len()
            )));
        }
        let mut amps = DVector::from_vec(amps);
        normalize(&mut amps)?;
        Ok(Self { dims, amps })
    }

    /// Builds a computational basis state `|idx_1 .. idx_n>`.
    pub fn basis(dims: Vec<usize>, idx: &[usize]) -> Result<Self> {
        Ok(ProductState::basis(dims, idx)?.to_pure())
    }

    /// The generalized n-partite GHZ state of level `d`:
    /// an equal-weight sum of `|ii...i>` over `i < d`.
    pub fn ghz(n: usize, d: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewParties { required: 2, got: n });
        }
        let dims = vec![d; n];
        let total: usize = dims.iter().product();
        let mut amps = vec![Complex64::ZERO; total];
        // Step between consecutive diagonal entries |ii...i>.
        let stride: usize = strides_of(&dims).iter().sum();
        let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
        for i in 0..d {
            amps[i * stride] = amp;
        }
        Self::new(dims, amps)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &DVector<Complex64> {
        &self.amps
    }

    /// Row-major strides of the multi-index.
    pub(crate) fn strides(&self) -> Vec<usize> {
        strides_of(&self.dims)
    }

    /// Amplitude at a full multi-index.
    pub fn amp_at(&self, idx: &[usize]) -> Complex64 {
        debug_assert_eq!(idx.len(), self.dims.len());
        let strides = self.strides();
        let k: usize = idx.iter().zip(&strides).map(|(i, s)| i * s).sum();
        self.amps[k]
    }

    /// Inner product `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dims != other.dims {
            return Err(Error::ShapeMismatch(format!(
                "dims {:?} vs {:?}",
                self.dims, other.dims
            )));
        }
        Ok(self.amps.dotc(&other.amps))
    }

    /// Fidelity `|<self|other>|^2`. Global phase is unphysical, so states
    /// are compared this way rather than componentwise.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Superposes `lead * self + sum_i coeff_i * term_i` and renormalizes.
    pub fn superpose(
        &self,
        lead: Complex64,
        terms: &[(Complex64, ProductState)],
    ) -> Result<Self> {
        if lead == Complex64::ZERO {
            return Err(Error::TrivialLead);
        }
        let mut sum = self.amps.clone() * lead;
        for (coeff, term) in terms {
            if term.dims() != self.dims {
                return Err(Error::ShapeMismatch(format!(
                    "product term dims {:?} vs state dims {:?}",
                    term.dims(),
                    self.dims
                )));
            }
            sum += term.to_pure().amps * *coeff;
        }
        if sum.norm() < ZERO_TOL {
            return Err(Error::CancellationToZero);
        }
        let mut amps = sum;
        normalize(&mut amps).map_err(|_| Error::CancellationToZero)?;
        Ok(Self {
            dims: self.dims.clone(),
            amps,
        })
    }

    /// Reshapes the amplitude tensor into the matrix of a bipartition:
    /// rows run over the combined index of `part.left()`, columns over
    /// `part.right()`. The Frobenius norm equals the state norm.
    pub fn bipartition_matrix(&self, part: &Bipartition) -> Result<DMatrix<Complex64>> {
        part.check_universe(self.n_parties())?;
        let rows: usize = part.left().iter().map(|&p| self.dims[p]).product();
        let cols: usize = part.right().iter().map(|&p| self.dims[p]).product();
        let mut m = DMatrix::zeros(rows, cols);
        let strides = self.strides();
        let mut digits = vec![0usize; self.dims.len()];
        for k in 0..self.amps.len() {
            let mut rem = k;
            for (p, s) in strides.iter().enumerate() {
                digits[p] = rem / s;
                rem %= s;
            }
            let r = part
                .left()
                .iter()
                .fold(0usize, |acc, &p| acc * self.dims[p] + digits[p]);
            let c = part
                .right()
                .iter()
                .fold(0usize, |acc, &p| acc * self.dims[p] + digits[p]);
            m[(r, c)] = self.amps[k];
        }
        Ok(m)
    }

    /// Applies a local operator to one party: `(I ⊗ .. ⊗ op ⊗ .. ⊗ I)|psi>`,
    /// renormalized. With a unitary `op` the norm is already preserved.
    pub fn apply_local(&self, party: usize, op: &DMatrix<Complex64>) -> Result<Self> {
        if party >= self.n_parties() {
            return Err(Error::ShapeMismatch(format!(
                "party {} out of range for {} parties",
                party,
                self.n_parties()
            )));
        }
        let d = self.dims[party];
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::ShapeMismatch(format!(
                "operator is {}x{}, party {} has dimension {}",
                op.nrows(),
                op.ncols(),
                party,
                d
            )));
        }
        let strides = self.strides();
        let stride = strides[party];
        let mut out = DVector::zeros(self.amps.len());
        for k in 0..self.amps.len() {
            let i = (k / stride) % d;
            let base = k - i * stride;
            let mut acc = Complex64::ZERO;
            for j in 0..d {
                acc += op[(i, j)] * self.amps[base + j * stride];
            }
            out[k] = acc;
        }
        normalize(&mut out)?;
        Ok(Self {
            dims: self.dims.clone(),
            amps: out,
        })
    }
}

pub(crate) fn strides_of(dims: &[usize]) -> Vec<usize> {
    let n = dims.len();
    let mut strides = vec![1usize; n];
    for p in (0..n.saturating_sub(1)).rev() {
        strides[p] = strides[p + 1] * dims[p + 1];
    }
    strides
}

/// A fully product state stored as one normalized local vector per party.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    factors: Vec<DVector<Complex64>>,
}

impl ProductState {
    /// Builds a product state, normalizing each factor.
    pub fn new(factors: Vec<Vec<Complex64>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::ShapeMismatch("no factors".into()));
        }
        let mut out = Vec::with_capacity(factors.len());
        for (i, f) in factors.into_iter().enumerate() {
            if f.len() < 2 {
                return Err(Error::InvalidDimension(f.len()));
            }
            let mut v = DVector::from_vec(f);
            normalize(&mut v).map_err(|_| Error::ZeroFactor(i))?;
            out.push(v);
        }
        Ok(Self { factors: out })
    }

    pub(crate) fn from_vectors(factors: Vec<DVector<Complex64>>) -> Result<Self> {
        Self::new(factors.into_iter().map(|v| v.iter().copied().collect()).collect())
    }

    /// The computational basis product `|idx_1> ⊗ ... ⊗ |idx_n>`.
    pub fn basis(dims: Vec<usize>, idx: &[usize]) -> Result<Self> {
        if idx.len() != dims.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} indices for {} parties",
                idx.len(),
                dims.len()
            )));
        }
        let mut factors = Vec::with_capacity(dims.len());
        for (&d, &i) in dims.iter().zip(idx) {
            if i >= d {
                return Err(Error::ShapeMismatch(format!(
                    "basis index {} out of range for dimension {}",
                    i, d
                )));
            }
            let mut f = vec![Complex64::ZERO; d];
            f[i] = Complex64::ONE;
            factors.push(f);
        }
        Self::new(factors)
    }

    pub fn n_parties(&self) -> usize {
        self.factors.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.len()).collect()
    }

    pub fn factor(&self, party: usize) -> &DVector<Complex64> {
        &self.factors[party]
    }

    pub fn factors(&self) -> &[DVector<Complex64>] {
        &self.factors
    }

    /// Expands the outer product into a dense `PureState`.
    pub fn to_pure(&self) -> PureState {
        let dims = self.dims();
        let total: usize = dims.iter().product();
        let strides = strides_of(&dims);
        let mut amps = DVector::from_element(total, Complex64::ONE);
        for k in 0..total {
            let mut a = Complex64::ONE;
            for (p, s) in strides.iter().enumerate() {
                a *= self.factors[p][(k / s) % dims[p]];
            }
            amps[k] = a;
        }
        // Factors are unit vectors, so the expansion is already unit norm.
        PureState { dims, amps }
    }

    /// Inner product `<self|other>` as the product of per-party overlaps.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dims() != other.dims() {
            return Err(Error::ShapeMismatch(format!(
                "dims {:?} vs {:?}",
                self.dims(),
                other.dims()
            )));
        }
        let mut acc = Complex64::ONE;
        for (a, b) in self.factors.iter().zip(&other.factors) {
            acc *= a.dotc(b);
        }
        Ok(acc)
    }
}

/// A superposition recipe: a nonzero lead coefficient for the base state
/// plus coefficient / product-state pairs.
#[derive(Debug, Clone)]
pub struct SuperpositionPlan {
    pub lead: Complex64,
    pub terms: Vec<(Complex64, ProductState)>,
}

impl SuperpositionPlan {
    pub fn new(lead: Complex64, terms: Vec<(Complex64, ProductState)>) -> Result<Self> {
        if lead == Complex64::ZERO {
            return Err(Error::TrivialLead);
        }
        Ok(Self { lead, terms })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Applies the plan to a base state and renormalizes.
    pub fn apply(&self, base: &PureState) -> Result<PureState> {
        base.superpose(self.lead, &self.terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn bell_state_normalizes() {
        let s = PureState::new(vec![2, 2], vec![re(1.0), re(0.0), re(0.0), re(1.0)]).unwrap();
        assert!((s.amps().norm() - 1.0).abs() < 1e-12);
        assert!((s.amp_at(&[0, 0]).re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn ghz_matches_manual_amplitudes() {
        let s = PureState::ghz(3, 2).unwrap();
        let v = 1.0 / 2f64.sqrt();
        assert!((s.amp_at(&[0, 0, 0]).re - v).abs() < 1e-15);
        assert!((s.amp_at(&[1, 1, 1]).re - v).abs() < 1e-15);
        assert_eq!(s.amp_at(&[0, 1, 1]), Complex64::ZERO);
    }

    #[test]
    fn zero_vector_rejected() {
        let err = PureState::new(vec![2, 2], vec![Complex64::ZERO; 4]).unwrap_err();
        assert_eq!(err, Error::ZeroVector);
    }

    #[test]
    fn shape_mismatch_rejected() {
        let err = PureState::new(vec![2, 2], vec![re(1.0); 3]).unwrap_err();
        assert!(matches!(err, Error::ShapeMismatch(_)));
    }

    #[test]
    fn trivial_dimension_rejected() {
        let err = PureState::new(vec![2, 1], vec![re(1.0), re(0.0)]).unwrap_err();
        assert_eq!(err, Error::InvalidDimension(1));
    }

    #[test]
    fn product_basis_states() {
        let p = ProductState::basis(vec![2, 2, 2], &[0, 0, 0]).unwrap();
        let s = p.to_pure();
        assert_eq!(s.amp_at(&[0, 0, 0]), Complex64::ONE);

        let plus = vec![re(1.0), re(1.0)];
        let p = ProductState::new(vec![plus, vec![re(1.0), re(0.0)], vec![re(0.0), re(1.0)]])
            .unwrap();
        let s = p.to_pure();
        let v = 1.0 / 2f64.sqrt();
        assert!((s.amp_at(&[0, 0, 1]).re - v).abs() < 1e-12);
        assert!((s.amp_at(&[1, 0, 1]).re - v).abs() < 1e-12);
        assert_eq!(s.amp_at(&[0, 0, 0]), Complex64::ZERO);
    }

    #[test]
    fn zero_factor_rejected() {
        let err = ProductState::new(vec![vec![Complex64::ZERO; 2], vec![re(1.0), re(0.0)]])
            .unwrap_err();
        assert_eq!(err, Error::ZeroFactor(0));
    }

    #[test]
    fn superpose_identity_is_exact() {
        let s = PureState::new(vec![2, 2, 2], vec![
            c(0.1, 0.2), c(0.3, -0.1), c(0.0, 0.5), c(0.2, 0.2),
            c(-0.4, 0.1), c(0.3, 0.3), c(0.1, 0.0), c(0.2, -0.2),
        ])
        .unwrap();
        let same = s.superpose(Complex64::ONE, &[]).unwrap();
        assert_eq!(s.amps(), same.amps());
    }

    #[test]
    fn superposing_ghz_with_000_gives_111() {
        // sqrt(2)|psi+> - |000> = |111>
        let ghz = PureState::ghz(3, 2).unwrap();
        let p000 = ProductState::basis(vec![2, 2, 2], &[0, 0, 0]).unwrap();
        let s = ghz
            .superpose(re(2f64.sqrt()), &[(re(-1.0), p000)])
            .unwrap();
        let one11 = PureState::basis(vec![2, 2, 2], &[1, 1, 1]).unwrap();
        assert!(s.fidelity(&one11).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn trivial_lead_rejected() {
        let ghz = PureState::ghz(3, 2).unwrap();
        let err = ghz.superpose(Complex64::ZERO, &[]).unwrap_err();
        assert_eq!(err, Error::TrivialLead);
    }

    #[test]
    fn full_cancellation_rejected() {
        let p = ProductState::basis(vec![2, 2], &[0, 1]).unwrap();
        let base = p.to_pure();
        let err = base.superpose(Complex64::ONE, &[(re(-1.0), p)]).unwrap_err();
        assert_eq!(err, Error::CancellationToZero);
    }

    #[test]
    fn bell_bipartition_matrix_is_diagonal() {
        let bell = PureState::new(vec![2, 2], vec![re(1.0), re(0.0), re(0.0), re(1.0)]).unwrap();
        let part = Bipartition::split(2, &[0]).unwrap();
        let m = bell.bipartition_matrix(&part).unwrap();
        let v = 1.0 / 2f64.sqrt();
        assert!((m[(0, 0)].re - v).abs() < 1e-12);
        assert!((m[(1, 1)].re - v).abs() < 1e-12);
        assert_eq!(m[(0, 1)], Complex64::ZERO);
        assert_eq!(m[(1, 0)], Complex64::ZERO);
    }

    #[test]
    fn ghz_bipartition_matrix_entries() {
        let ghz = PureState::ghz(3, 2).unwrap();
        let part = Bipartition::split(3, &[0]).unwrap();
        let m = ghz.bipartition_matrix(&part).unwrap();
        assert_eq!(m.nrows(), 2);
        assert_eq!(m.ncols(), 4);
        let v = 1.0 / 2f64.sqrt();
        assert!((m[(0, 0)].re - v).abs() < 1e-12);
        assert!((m[(1, 3)].re - v).abs() < 1e-12);
        assert!((m.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inner_product_cases() {
        let ghz = PureState::ghz(3, 2).unwrap();
        assert!((ghz.inner(&ghz).unwrap() - Complex64::ONE).norm() < 1e-12);
        let zero = PureState::basis(vec![2, 2, 2], &[0, 0, 0]).unwrap();
        let v = ghz.inner(&zero).unwrap();
        assert!((v.re - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn inner_is_conjugate_linear_in_first_argument() {
        let a = PureState::new(vec![2, 2], vec![c(0.5, 0.5), re(0.0), re(0.0), c(0.5, -0.5)])
            .unwrap();
        let b = PureState::new(vec![2, 2], vec![re(1.0), re(0.0), re(0.0), re(0.0)]).unwrap();
        let ab = a.inner(&b).unwrap();
        let ba = b.inner(&a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-12);
    }
}
