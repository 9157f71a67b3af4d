//! Positive operator-valued measures with validation, PSD clipping and a
//! projective-measurement check.

use crate::error::{Error, Result};
use crate::linalg::{self, dagger, identity, max_abs, CMat, CVec};

pub const PSD_TOL: f64 = 1e-10;
pub const COMPLETENESS_TOL: f64 = 1e-9;

/// Ordered set of positive effects summing to the identity.
#[derive(Debug, Clone)]
pub struct Povm {
    effects: Vec<CMat>,
    labels: Vec<String>,
    /// When every effect is |v><v| for a known vector, the vectors are kept
    /// for cheap amplitude evaluation (domain analysis, likelihood maps).
    vectors: Option<Vec<CVec>>,
}

impl Povm {
    pub fn new(effects: Vec<CMat>) -> Result<Self> {
        let labels = (0..effects.len()).map(|i| i.to_string()).collect();
        Self::with_labels(effects, labels)
    }

    pub fn with_labels(effects: Vec<CMat>, labels: Vec<String>) -> Result<Self> {
        let povm = Povm {
            effects,
            labels,
            vectors: None,
        };
        povm.validate()?;
        Ok(povm)
    }

    /// Rank-1 POVM from (not necessarily normalized) vectors M_mu = |v><v|.
    pub fn from_vectors(vectors: Vec<CVec>) -> Result<Self> {
        let povm = Self::from_vectors_unchecked(vectors);
        povm.validate()?;
        Ok(povm)
    }

    /// Rank-1 POVM without validation; for optimizer internals where the
    /// completeness sum holds only to iteration tolerance.
    pub fn from_vectors_unchecked(vectors: Vec<CVec>) -> Self {
        let effects = vectors.iter().map(|v| linalg::outer(v, v)).collect();
        let labels = (0..vectors.len()).map(|i| i.to_string()).collect();
        Povm {
            effects,
            labels,
            vectors: Some(vectors),
        }
    }

    /// Rank-1 vectors plus a completeness remainder effect if the vectors do
    /// not already resolve the identity.
    pub fn from_vectors_completed(vectors: Vec<CVec>) -> Result<Self> {
        let dim = vectors
            .first()
            .ok_or_else(|| Error::invalid("empty vector list"))?
            .len();
        let mut sum = CMat::zeros((dim, dim));
        for v in &vectors {
            sum = sum + linalg::outer(v, v);
        }
        let rest = identity(dim) - &sum;
        let mut effects: Vec<CMat> = vectors.iter().map(|v| linalg::outer(v, v)).collect();
        let mut labels: Vec<String> = (0..vectors.len()).map(|i| i.to_string()).collect();
        if max_abs(&rest) > COMPLETENESS_TOL {
            effects.push(rest);
            labels.push("rest".into());
        }
        let povm = Povm {
            effects,
            labels,
            vectors: None,
        };
        povm.validate()?;
        Ok(povm)
    }

    pub fn validate(&self) -> Result<()> {
        if self.effects.len() < 2 {
            return Err(Error::ContractViolation(
                "a POVM needs at least 2 effects".into(),
            ));
        }
        let dim = self.effects[0].nrows();
        let mut sum = CMat::zeros((dim, dim));
        for (idx, m) in self.effects.iter().enumerate() {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::ContractViolation(format!(
                    "effect {idx} has inconsistent dimensions"
                )));
            }
            if !linalg::is_hermitian(m, 1e-9) {
                return Err(Error::ContractViolation(format!(
                    "effect {idx} is not Hermitian"
                )));
            }
            let (vals, _) = linalg::eigh(m);
            if vals.first().copied().unwrap_or(0.0) < -PSD_TOL {
                return Err(Error::ContractViolation(format!(
                    "effect {idx} is not positive semidefinite (min eigenvalue {:.3e})",
                    vals[0]
                )));
            }
            sum = sum + m;
        }
        let resid = max_abs(&(&sum - &identity(dim)));
        if resid > COMPLETENESS_TOL {
            return Err(Error::ContractViolation(format!(
                "effects do not sum to the identity (residual {resid:.3e})"
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.effects[0].nrows()
    }

    pub fn effects(&self) -> &[CMat] {
        &self.effects
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vectors(&self) -> Option<&[CVec]> {
        self.vectors.as_deref()
    }

    pub fn completeness_residual(&self) -> f64 {
        let dim = self.dim();
        let mut sum = CMat::zeros((dim, dim));
        for m in &self.effects {
            sum = sum + m;
        }
        max_abs(&(&sum - &identity(dim)))
    }

    /// Largest eigenvalue deficit below zero over all effects (0 if PSD).
    pub fn psd_deficit(&self) -> f64 {
        let mut worst = 0.0f64;
        for m in &self.effects {
            let (vals, _) = linalg::eigh(m);
            worst = worst.max(-vals.first().copied().unwrap_or(0.0));
        }
        worst.max(0.0)
    }

    /// True when all effects are rank-1 and mutually orthogonal projectors.
    pub fn is_projective(&self, tol: f64) -> bool {
        if self.effects.len() != self.dim() {
            return false;
        }
        for m in &self.effects {
            let m2 = m.dot(m);
            if max_abs(&(&m2 - m)) > tol {
                return false;
            }
        }
        true
    }

    /// Project all effects onto the PSD cone and restore completeness by a
    /// symmetric normalization. Returns the largest clipped eigenvalue
    /// magnitude (0 when nothing needed clipping).
    pub fn clip_psd(&mut self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        let mut clipped = Vec::with_capacity(self.effects.len());
        for m in &self.effects {
            let (p, clip) = linalg::project_psd(m);
            worst = worst.max(clip);
            clipped.push(p);
        }
        let mut sum = CMat::zeros((dim, dim));
        for m in &clipped {
            sum = sum + m;
        }
        let t = linalg::inv_sqrt_psd(&sum, 1e-14);
        self.effects = clipped.into_iter().map(|m| t.dot(&m).dot(&t)).collect();
        self.vectors = None;
        worst
    }

    /// Rotate every effect by a fixed unitary: M -> U M U^dagger.
    pub fn conjugated(&self, u: &CMat) -> Povm {
        let ud = dagger(u);
        Povm {
            effects: self.effects.iter().map(|m| u.dot(m).dot(&ud)).collect(),
            labels: self.labels.clone(),
            vectors: self
                .vectors
                .as_ref()
                .map(|vs| vs.iter().map(|v| u.dot(v)).collect()),
        }
    }
}
