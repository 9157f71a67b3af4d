//! Gaussian priors and tensor-product Gauss-Hermite quadrature.
//!
//! All Bayesian-cost integrals in this crate are expectations of smooth
//! probability polynomials under a Gaussian, so Gauss-Hermite nodes in the
//! principal axes of the covariance converge spectrally.

use ndarray::Array2;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::linalg;

pub const DEFAULT_NODES: usize = 24;
pub const MIN_NODES: usize = 8;

/// Gaussian prior over phase space: center, covariance, quadrature order.
#[derive(Debug, Clone)]
pub struct GaussianPrior {
    pub center: Vec<f64>,
    pub covariance: Array2<f64>,
    pub nodes_per_axis: usize,
}

impl GaussianPrior {
    pub fn new(center: Vec<f64>, covariance: Array2<f64>, nodes_per_axis: usize) -> Result<Self> {
        let d = center.len();
        if covariance.nrows() != d || covariance.ncols() != d {
            return Err(Error::invalid("covariance dimension mismatch"));
        }
        if nodes_per_axis < MIN_NODES {
            return Err(Error::invalid(format!(
                "nodes_per_axis must be >= {MIN_NODES}"
            )));
        }
        let sym = linalg::max_abs(
            &(&covariance - &covariance.t().to_owned()).mapv(|x| linalg::cr(x)),
        );
        if sym > 1e-12 {
            return Err(Error::invalid("covariance must be symmetric"));
        }
        let evs = linalg::eigh(&covariance.mapv(|x| linalg::cr(x))).0;
        if evs[0] <= 0.0 {
            return Err(Error::invalid(
                "covariance must be symmetric positive definite",
            ));
        }
        Ok(GaussianPrior {
            center,
            covariance,
            nodes_per_axis,
        })
    }

    /// Isotropic prior of width delta per axis.
    pub fn isotropic(center: Vec<f64>, delta: f64, nodes_per_axis: usize) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::invalid("prior width must be positive"));
        }
        let d = center.len();
        let cov = Array2::from_diag_elem(d, delta * delta);
        Self::new(center, cov, nodes_per_axis)
    }

    pub fn d(&self) -> usize {
        self.center.len()
    }

    /// Total prior variance: trace of the covariance.
    pub fn variance(&self) -> f64 {
        (0..self.d()).map(|i| self.covariance[(i, i)]).sum()
    }

    /// Quadrature nodes (absolute phase points) and weights summing to 1.
    pub fn quadrature(&self) -> Vec<(Vec<f64>, f64)> {
        let d = self.d();
        let (x, w) = gauss_hermite(self.nodes_per_axis);
        // principal axes
        let (evals, evecs) = linalg::eigh(&self.covariance.mapv(|v| linalg::cr(v)));
        let scales: Vec<f64> = evals.iter().map(|&l| (2.0 * l).sqrt()).collect();
        let n = self.nodes_per_axis;
        let total = n.pow(d as u32);
        let norm = std::f64::consts::PI.powf(-(d as f64) / 2.0);
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; d];
        for _ in 0..total {
            let mut point = self.center.clone();
            let mut weight = norm;
            for (axis, &k) in idx.iter().enumerate() {
                weight *= w[k];
                let step = scales[axis] * x[k];
                for r in 0..d {
                    point[r] += evecs[(r, axis)].re * step;
                }
            }
            out.push((point, weight));
            // odometer
            for axis in 0..d {
                idx[axis] += 1;
                if idx[axis] < n {
                    break;
                }
                idx[axis] = 0;
            }
        }
        out
    }
}

/// Physicists' Gauss-Hermite nodes and weights for weight e^{-x^2},
/// by Golub-Welsch on the Jacobi matrix. Cached per order.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    static CACHE: OnceLock<Mutex<HashMap<usize, (Vec<f64>, Vec<f64>)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&n) {
        return hit.clone();
    }
    let mut t = linalg::CMat::zeros((n, n));
    for k in 1..n {
        let b = (k as f64 / 2.0).sqrt();
        t[(k, k - 1)] = linalg::cr(b);
        t[(k - 1, k)] = linalg::cr(b);
    }
    let (vals, vecs) = linalg::eigh(&t);
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let weights: Vec<f64> = (0..n)
        .map(|j| sqrt_pi * vecs[(0, j)].norm_sqr())
        .collect();
    cache.lock().unwrap().insert(n, (vals.clone(), weights.clone()));
    (vals, weights)
}
