//! JSON interchange formats for states and superposition plans.
//!
//! States are written sparsely: only nonzero amplitudes appear, each as a
//! multi-index with real and imaginary parts. Serialization keeps full
//! double precision, so a parse / serialize / parse round trip reproduces
//! the amplitudes bit for bit.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{strides_of, ProductState, PureState, SuperpositionPlan};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AmpEntry {
    pub idx: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

/// `{"dims":[2,2,2],"amps":[{"idx":[0,0,0],"re":0.70710678118654757,"im":0.0},...]}`
/// Omitted indices are zero; amplitudes need not be normalized.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateJson {
    pub dims: Vec<usize>,
    pub amps: Vec<AmpEntry>,
}

impl StateJson {
    pub fn from_state(state: &PureState) -> Self {
        let dims = state.dims().to_vec();
        let strides = strides_of(&dims);
        let mut amps = Vec::new();
        for (k, a) in state.amps().iter().enumerate() {
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            let idx: Vec<usize> = strides
                .iter()
                .zip(&dims)
                .map(|(&s, &d)| (k / s) % d)
                .collect();
            amps.push(AmpEntry {
                idx,
                re: a.re,
                im: a.im,
            });
        }
        Self { dims, amps }
    }

    pub fn to_state(&self) -> Result<PureState> {
        if self.dims.is_empty() {
            return Err(Error::ShapeMismatch("dims must be nonempty".into()));
        }
        let total: usize = self.dims.iter().product();
        let strides = strides_of(&self.dims);
        let mut amps = vec![Complex64::ZERO; total];
        for entry in &self.amps {
            if entry.idx.len() != self.dims.len() {
                return Err(Error::ShapeMismatch(format!(
                    "index {:?} has {} entries for {} parties",
                    entry.idx,
                    entry.idx.len(),
                    self.dims.len()
                )));
            }
            let mut k = 0usize;
            for ((&i, &d), &s) in entry.idx.iter().zip(&self.dims).zip(&strides) {
                if i >= d {
                    return Err(Error::ShapeMismatch(format!(
                        "index {:?} out of range for dims {:?}",
                        entry.idx, self.dims
                    )));
                }
                k += i * s;
            }
            amps[k] += Complex64::new(entry.re, entry.im);
        }
        PureState::new(self.dims.clone(), amps)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(c: Complex64) -> Self {
        Self { re: c.re, im: c.im }
    }
}

impl From<ComplexJson> for Complex64 {
    fn from(c: ComplexJson) -> Self {
        Complex64::new(c.re, c.im)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanTermJson {
    pub coeff: ComplexJson,
    /// One complex vector per party.
    pub factors: Vec<Vec<ComplexJson>>,
}

/// `{"lead":{"re":..,"im":..},"terms":[...],"verified":"..."}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanJson {
    pub lead: ComplexJson,
    pub terms: Vec<PlanTermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verified: Option<String>,
}

impl PlanJson {
    pub fn from_plan(plan: &SuperpositionPlan, verified: Option<String>) -> Self {
        Self {
            lead: plan.lead.into(),
            terms: plan
                .terms
                .iter()
                .map(|(coeff, prod)| PlanTermJson {
                    coeff: (*coeff).into(),
                    factors: prod
                        .factors()
                        .iter()
                        .map(|f| f.iter().map(|&c| c.into()).collect())
                        .collect(),
                })
                .collect(),
            verified,
        }
    }

    pub fn to_plan(&self) -> Result<SuperpositionPlan> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let factors: Vec<Vec<Complex64>> = t
                .factors
                .iter()
                .map(|f| f.iter().map(|&c| c.into()).collect())
                .collect();
            terms.push((Complex64::from(t.coeff), ProductState::new(factors)?));
        }
        SuperpositionPlan::new(self.lead.into(), terms)
    }
}
