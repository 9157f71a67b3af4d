//! Asymptotic Bayesian cost: optimal single-shot estimators, the cost
//! itself, its Taylor coefficients in the prior width, and the effective
//! measurement variance used to track annealing progress.

use ndarray::Array2;

use crate::deriv;
use crate::error::{Error, Result};
use crate::info::P_FLOOR;
use crate::linalg::CVec;
use crate::povm::Povm;
use crate::prior::GaussianPrior;
use crate::spin::SpinSystem;

/// One phase-space estimator vector per POVM outcome.
pub type EstimatorSet = Vec<Vec<f64>>;

/// Marginals rho_mu and centered first moments over the prior.
pub struct QuadratureStats {
    pub rho: Vec<f64>,
    /// rho_vec[mu] = integral (phi - phi0) p(mu|phi) P(phi) dphi
    pub rho_vec: Vec<Vec<f64>>,
}

pub fn quadrature_stats(
    sys: &SpinSystem,
    psi_in: &CVec,
    povm: &Povm,
    prior: &GaussianPrior,
) -> Result<QuadratureStats> {
    let d = prior.d();
    let l = povm.len();
    let mut rho = vec![0.0; l];
    let mut rho_vec = vec![vec![0.0; d]; l];
    for (point, w) in prior.quadrature() {
        let psi_phi = sys.encode(psi_in, &point)?;
        let probs = crate::info::probs_of_state(povm, &psi_phi);
        for mu in 0..l {
            let wp = w * probs[mu];
            rho[mu] += wp;
            for i in 0..d {
                rho_vec[mu][i] += wp * (point[i] - prior.center[i]);
            }
        }
    }
    Ok(QuadratureStats { rho, rho_vec })
}

/// Minimum-mean-square-error estimators: posterior means per outcome.
/// Outcomes with vanishing marginal get the prior center.
pub fn optimal_estimators(
    sys: &SpinSystem,
    psi_in: &CVec,
    povm: &Povm,
    prior: &GaussianPrior,
) -> Result<EstimatorSet> {
    let stats = quadrature_stats(sys, psi_in, povm, prior)?;
    Ok(estimators_from_stats(&stats, prior))
}

pub fn estimators_from_stats(stats: &QuadratureStats, prior: &GaussianPrior) -> EstimatorSet {
    let d = prior.d();
    stats
        .rho
        .iter()
        .zip(&stats.rho_vec)
        .map(|(&r, v)| {
            if r < P_FLOOR {
                prior.center.clone()
            } else {
                (0..d).map(|i| prior.center[i] + v[i] / r).collect()
            }
        })
        .collect()
}

/// Breakdown of the cost into the prior variance and the information gain,
/// Xi = var(P) - gain. The gain is accumulated directly so that tiny
/// differences at narrow priors are not lost to cancellation.
#[derive(Debug, Clone, Copy)]
pub struct XiBreakdown {
    pub xi: f64,
    pub prior_var: f64,
    pub info_gain: f64,
}

pub fn xi_breakdown(
    sys: &SpinSystem,
    psi_in: &CVec,
    povm: &Povm,
    estimators: &EstimatorSet,
    prior: &GaussianPrior,
) -> Result<XiBreakdown> {
    if estimators.len() != povm.len() {
        return Err(Error::invalid("estimator count must match POVM outcomes"));
    }
    let stats = quadrature_stats(sys, psi_in, povm, prior)?;
    Ok(xi_from_stats(&stats, estimators, prior))
}

/// Xi for given estimators from precomputed quadrature statistics:
/// Xi = var(P) - sum_mu [2 (zeta - phi0) . rho_vec - |zeta - phi0|^2 rho].
pub fn xi_from_stats(
    stats: &QuadratureStats,
    estimators: &EstimatorSet,
    prior: &GaussianPrior,
) -> XiBreakdown {
    let d = prior.d();
    let mut gain = 0.0;
    for mu in 0..stats.rho.len() {
        let mut dot = 0.0;
        let mut nrm2 = 0.0;
        for i in 0..d {
            let z = estimators[mu][i] - prior.center[i];
            dot += z * stats.rho_vec[mu][i];
            nrm2 += z * z;
        }
        gain += 2.0 * dot - nrm2 * stats.rho[mu];
    }
    let var = prior.variance();
    XiBreakdown {
        xi: var - gain,
        prior_var: var,
        info_gain: gain,
    }
}

/// The asymptotic Bayesian cost for the given estimators.
pub fn xi_cost(
    sys: &SpinSystem,
    psi_in: &CVec,
    povm: &Povm,
    estimators: &EstimatorSet,
    prior: &GaussianPrior,
) -> Result<f64> {
    Ok(xi_breakdown(sys, psi_in, povm, estimators, prior)?.xi)
}

/// Effective measurement variance from the Bayesian update identity
/// 1/Xi = 1/Delta^2_M + 1/var(P); +infinity for an uninformative sensor.
pub fn effective_variance(xi: f64, prior_var: f64) -> f64 {
    if xi >= prior_var {
        return f64::INFINITY;
    }
    1.0 / (1.0 / xi - 1.0 / prior_var)
}

/// Taylor coefficients of the cost in the isotropic-prior convention
/// Xi = var - C1 delta^4 - C2 delta^6 - C3 delta^8 - ... (delta^2 = 1/K).
#[derive(Debug, Clone, Copy)]
pub struct CostCoefficients {
    pub c1: f64,
    pub c2: f64,
    /// Printed closed form assumes the even scalar derivative terms vanish;
    /// None when that precondition fails at the requested point.
    pub c3: Option<f64>,
    /// Largest |p^(2)| encountered (the C3 precondition residual).
    pub p2_residual: f64,
    pub singular: bool,
}

pub fn cost_coefficients(
    sys: &SpinSystem,
    psi_in: &CVec,
    povm: &Povm,
    phi0: &[f64],
    order: usize,
) -> Result<CostCoefficients> {
    if !(1..=3).contains(&order) {
        return Err(Error::invalid("coefficient order must be 1..=3"));
    }
    let max_deriv = match order {
        1 => 1,
        2 => 3,
        _ => 5,
    };
    let tensors = deriv::prob_derivatives(sys, psi_in, povm, phi0, max_deriv)?;
    let d = phi0.len();
    let mut c1 = 0.0;
    let mut c2 = 0.0;
    let mut c3 = 0.0;
    let mut p2_residual = 0.0f64;
    let mut singular = false;
    for t in &tensors {
        let p0 = t.p0();
        let p1 = t.p1();
        let g1: f64 = p1.iter().map(|x| x * x).sum();
        if p0 < P_FLOOR {
            if g1.sqrt() >= crate::info::GRAD_FLOOR {
                singular = true;
            }
            continue;
        }
        c1 += g1 / p0;
        if order >= 2 {
            let p2 = t.p2();
            let p3 = t.p3();
            p2_residual = p2_residual.max(p2.abs());
            let dot13: f64 = p1.iter().zip(&p3).map(|(a, b)| a * b).sum();
            c2 += (2.0 * dot13 - g1 * p2 / p0) / p0;
            if order >= 3 {
                let p5 = t.p5();
                let dot15: f64 = p1.iter().zip(&p5).map(|(a, b)| a * b).sum();
                let dot33: f64 = p3.iter().map(|x| x * x).sum();
                c3 += (2.0 * dot15 + dot33) / p0;
            }
        }
    }
    let _ = d;
    let c3_out = if order >= 3 && p2_residual <= 1e-8 {
        Some(c3)
    } else {
        None
    };
    Ok(CostCoefficients {
        c1,
        c2,
        c3: c3_out,
        p2_residual,
        singular,
    })
}

/// Leading cost coefficients for a general prior shape: the prior covariance
/// is (1/K) S and the squared error keeps the plain Euclidean weight.
/// C1 = sum grad(p)^T S^2 grad(p)/p,
/// C2 = sum [(S grad p).(S g) - (grad p^T S^2 grad p) t2/p]/p with
/// g_j = sum_ab S_ab d_j d_a d_b p and t2 = (1/2) sum_ab S_ab d_a d_b p.
pub fn cost_coefficients_general(
    sys: &SpinSystem,
    psi_in: &CVec,
    povm: &Povm,
    phi0: &[f64],
    shape: &Array2<f64>,
    order: usize,
) -> Result<CostCoefficients> {
    let d = phi0.len();
    if shape.nrows() != d || shape.ncols() != d {
        return Err(Error::invalid("prior shape dimension mismatch"));
    }
    if !(1..=2).contains(&order) {
        return Err(Error::invalid(
            "general-shape coefficients are implemented up to order 2",
        ));
    }
    let tensors = deriv::prob_derivatives(sys, psi_in, povm, phi0, if order == 1 { 1 } else { 3 })?;
    let mut c1 = 0.0;
    let mut c2 = 0.0;
    let mut p2_residual = 0.0f64;
    let mut singular = false;
    for t in &tensors {
        let p0 = t.p0();
        let p1 = t.p1();
        if p0 < P_FLOOR {
            let g1: f64 = p1.iter().map(|x| x * x).sum();
            if g1.sqrt() >= crate::info::GRAD_FLOOR {
                singular = true;
            }
            continue;
        }
        let sp: Vec<f64> = (0..d)
            .map(|i| (0..d).map(|j| shape[(i, j)] * p1[j]).sum())
            .collect();
        let quad: f64 = sp.iter().map(|x| x * x).sum();
        c1 += quad / p0;
        if order >= 2 {
            // third derivatives contracted with the shape
            let mut g = vec![0.0; d];
            let mut t2 = 0.0;
            for a in 0..d {
                for b in 0..d {
                    let mut idx_ab = [0usize; 3];
                    idx_ab[a] += 1;
                    idx_ab[b] += 1;
                    t2 += 0.5 * shape[(a, b)] * t.get(idx_ab);
                    for j in 0..d {
                        let mut idx = [0usize; 3];
                        idx[j] += 1;
                        idx[a] += 1;
                        idx[b] += 1;
                        g[j] += shape[(a, b)] * t.get(idx);
                    }
                }
            }
            p2_residual = p2_residual.max(t2.abs());
            let sg: Vec<f64> = (0..d)
                .map(|i| (0..d).map(|j| shape[(i, j)] * g[j]).sum())
                .collect();
            let dot: f64 = sp.iter().zip(&sg).map(|(a, b)| a * b).sum();
            c2 += (dot - quad * t2 / p0) / p0;
        }
    }
    Ok(CostCoefficients {
        c1,
        c2,
        c3: None,
        p2_residual,
        singular,
    })
}

/// Full cost report at a given prior: optimal-estimator cost, expansion
/// coefficients at the prior center, and the effective measurement variance.
#[derive(Debug, Clone)]
pub struct CostReport {
    pub xi: f64,
    pub prior_var: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: Option<f64>,
    pub delta2_m: f64,
}

pub fn cost_report(
    sys: &SpinSystem,
    psi_in: &CVec,
    povm: &Povm,
    prior: &GaussianPrior,
) -> Result<CostReport> {
    let stats = quadrature_stats(sys, psi_in, povm, prior)?;
    let est = estimators_from_stats(&stats, prior);
    let b = xi_from_stats(&stats, &est, prior);
    let coeffs = cost_coefficients(sys, psi_in, povm, &prior.center, 3)?;
    Ok(CostReport {
        xi: b.xi,
        prior_var: b.prior_var,
        c1: coeffs.c1,
        c2: coeffs.c2,
        c3: coeffs.c3,
        delta2_m: effective_variance(b.xi, b.prior_var),
    })
}
