//! High-order derivative tensors of the conditional probabilities p(mu|phi).
//!
//! At phi = 0 the mixed partials of exp(-i phi.J) are symmetrized generator
//! products, evaluated exactly; away from zero we fall back to
//! Richardson-extrapolated central finite differences on the probabilities.

use crate::error::{Error, Result};
use crate::linalg::{self, c, inner, CVec};
use crate::povm::Povm;
use crate::spin::SpinSystem;

pub const MAX_ORDER: usize = 5;

/// Dense tensor of mixed partial derivatives d^alpha p indexed by the
/// multi-index alpha (up to 3 axes, total order <= 5).
#[derive(Debug, Clone)]
pub struct DerivTensor {
    pub d: usize,
    pub max_order: usize,
    data: Vec<f64>,
}

impl DerivTensor {
    fn new(d: usize, max_order: usize) -> Self {
        DerivTensor {
            d,
            max_order,
            data: vec![0.0; (MAX_ORDER + 1).pow(3)],
        }
    }

    fn idx(alpha: [usize; 3]) -> usize {
        (alpha[0] * (MAX_ORDER + 1) + alpha[1]) * (MAX_ORDER + 1) + alpha[2]
    }

    pub fn get(&self, alpha: [usize; 3]) -> f64 {
        self.data[Self::idx(alpha)]
    }

    fn set(&mut self, alpha: [usize; 3], v: f64) {
        self.data[Self::idx(alpha)] = v;
    }

    pub fn p0(&self) -> f64 {
        self.get([0, 0, 0])
    }

    /// Gradient vector.
    pub fn p1(&self) -> Vec<f64> {
        (0..self.d).map(|j| self.get(unit(j))).collect()
    }

    /// p^(2) = 1/2 sum_k d^2_k p.
    pub fn p2(&self) -> f64 {
        0.5 * (0..self.d).map(|k| self.get(scaled(k, 2))).sum::<f64>()
    }

    /// p^(3)_j = 1/2 sum_k d_j d^2_k p.
    pub fn p3(&self) -> Vec<f64> {
        (0..self.d)
            .map(|j| {
                0.5 * (0..self.d)
                    .map(|k| self.get(add(unit(j), scaled(k, 2))))
                    .sum::<f64>()
            })
            .collect()
    }

    /// p^(4) = 1/8 sum_{k,l} d^2_k d^2_l p.
    pub fn p4(&self) -> f64 {
        let mut acc = 0.0;
        for k in 0..self.d {
            for l in 0..self.d {
                acc += self.get(add(scaled(k, 2), scaled(l, 2)));
            }
        }
        acc / 8.0
    }

    /// p^(5)_j = 1/8 sum_{k,l} d_j d^2_k d^2_l p.
    pub fn p5(&self) -> Vec<f64> {
        (0..self.d)
            .map(|j| {
                let mut acc = 0.0;
                for k in 0..self.d {
                    for l in 0..self.d {
                        acc += self.get(add(unit(j), add(scaled(k, 2), scaled(l, 2))));
                    }
                }
                acc / 8.0
            })
            .collect()
    }
}

fn unit(axis: usize) -> [usize; 3] {
    let mut a = [0; 3];
    a[axis] = 1;
    a
}

fn scaled(axis: usize, n: usize) -> [usize; 3] {
    let mut a = [0; 3];
    a[axis] = n;
    a
}

fn add(a: [usize; 3], b: [usize; 3]) -> [usize; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn order(a: [usize; 3]) -> usize {
    a[0] + a[1] + a[2]
}

/// All multi-indices over `d` axes with total order <= max_order.
pub fn multi_indices(d: usize, max_order: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    let lim = |axis: usize| if axis < d { max_order } else { 0 };
    for a in 0..=lim(0) {
        for b in 0..=lim(1) {
            for cc in 0..=lim(2) {
                if a + b + cc <= max_order {
                    out.push([a, b, cc]);
                }
            }
        }
    }
    out
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn binom(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Mixed partials D^alpha |psi_phi> at phi = 0 for all |alpha| <= max_order.
///
/// d^alpha exp(-i phi.J)|_0 = (-i)^n (alpha!/n!) sum over the distinct
/// generator strings with multiset alpha.
pub fn state_derivatives_at_zero(
    sys: &SpinSystem,
    psi_in: &CVec,
    d: usize,
    max_order: usize,
) -> Result<Vec<([usize; 3], CVec)>> {
    if !(1..=3).contains(&d) {
        return Err(Error::invalid("d must be in 1..=3"));
    }
    if max_order > MAX_ORDER {
        return Err(Error::invalid("derivative order beyond 5 is unsupported"));
    }
    let gens: Vec<&linalg::CMat> = match d {
        1 => vec![sys.jz()],
        2 => vec![sys.jx(), sys.jy()],
        _ => vec![sys.jx(), sys.jy(), sys.jz()],
    };
    let dims = sys.dim();
    // bucket[alpha] accumulates the sum over distinct strings
    let mut buckets: std::collections::HashMap<[usize; 3], CVec> = Default::default();
    buckets.insert([0, 0, 0], psi_in.clone());
    // level n: vectors for every string of length n, indexed by the string
    let mut level: Vec<(Vec<usize>, CVec)> = vec![(Vec::new(), psi_in.clone())];
    for n in 1..=max_order {
        let mut next = Vec::with_capacity(level.len() * d);
        for (string, v) in &level {
            for axis in 0..d {
                let mut s = Vec::with_capacity(n);
                s.push(axis);
                s.extend_from_slice(string);
                let nv = gens[axis].dot(v);
                next.push((s, nv));
            }
        }
        for (string, v) in &next {
            let mut alpha = [0usize; 3];
            for &a in string {
                alpha[a] += 1;
            }
            buckets
                .entry(alpha)
                .and_modify(|acc| *acc = &*acc + v)
                .or_insert_with(|| v.clone());
        }
        level = next;
    }
    let mut out = Vec::new();
    for alpha in multi_indices(d, max_order) {
        let n = order(alpha);
        let bucket = buckets
            .get(&alpha)
            .cloned()
            .unwrap_or_else(|| CVec::zeros(dims));
        let alpha_fact = factorial(alpha[0]) * factorial(alpha[1]) * factorial(alpha[2]);
        let scale = alpha_fact / factorial(n);
        let phase = c(0.0, -1.0).powu(n as u32);
        out.push((alpha, bucket.mapv(|z| z * phase * scale)));
    }
    Ok(out)
}

/// Derivative tensors of p(mu|phi) at phi0 = 0 for every POVM outcome,
/// assembled exactly from the state derivatives by the Leibniz rule.
pub fn prob_derivatives_at_zero(
    sys: &SpinSystem,
    psi_in: &CVec,
    povm: &Povm,
    d: usize,
    max_order: usize,
) -> Result<Vec<DerivTensor>> {
    let derivs = state_derivatives_at_zero(sys, psi_in, d, max_order)?;
    let lookup: std::collections::HashMap<[usize; 3], &CVec> =
        derivs.iter().map(|(a, v)| (*a, v)).collect();
    let alphas = multi_indices(d, max_order);
    let mut out = Vec::with_capacity(povm.len());
    for m in povm.effects() {
        let mv: std::collections::HashMap<[usize; 3], CVec> = derivs
            .iter()
            .map(|(a, v)| (*a, m.dot(v)))
            .collect();
        let mut t = DerivTensor::new(d, max_order);
        for &alpha in &alphas {
            let mut acc = c(0.0, 0.0);
            for beta in multi_indices(d, order(alpha)) {
                if beta[0] > alpha[0] || beta[1] > alpha[1] || beta[2] > alpha[2] {
                    continue;
                }
                let gamma = [alpha[0] - beta[0], alpha[1] - beta[1], alpha[2] - beta[2]];
                let coeff = binom(alpha[0], beta[0])
                    * binom(alpha[1], beta[1])
                    * binom(alpha[2], beta[2]);
                let left = lookup[&beta];
                let right = &mv[&gamma];
                acc += inner(left, right) * coeff;
            }
            t.set(alpha, acc.re);
        }
        out.push(t);
    }
    Ok(out)
}

/// Fornberg finite-difference weights: weights[k][j] approximates the k-th
/// derivative at z from samples at grid[j].
pub fn fd_weights(z: f64, grid: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = grid.len();
    let m = max_order;
    let mut c_tab = vec![vec![0.0f64; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = grid[0] - z;
    c_tab[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = grid[i] - z;
        for j in 0..i {
            let c3 = grid[i] - grid[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c_tab[i][k] = c1 * (k as f64 * c_tab[i - 1][k - 1] - c5 * c_tab[i - 1][k]) / c2;
                }
                c_tab[i][0] = -c1 * c5 * c_tab[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c_tab[j][k] = (c4 * c_tab[j][k] - k as f64 * c_tab[j][k - 1]) / c3;
            }
            c_tab[j][0] = c4 * c_tab[j][0] / c3;
        }
        c1 = c2;
    }
    // transpose to weights[k][j]
    (0..=m)
        .map(|k| (0..n).map(|j| c_tab[j][k]).collect())
        .collect()
}

/// Derivative tensors of p(mu|phi) at an arbitrary phi0 by central finite
/// differences on a 9-point-per-axis grid with one Richardson step.
pub fn prob_derivatives_fd(
    sys: &SpinSystem,
    psi_in: &CVec,
    povm: &Povm,
    phi0: &[f64],
    max_order: usize,
    h: f64,
) -> Result<Vec<DerivTensor>> {
    let d = phi0.len();
    let coarse = prob_derivatives_fd_once(sys, psi_in, povm, phi0, max_order, h)?;
    let fine = prob_derivatives_fd_once(sys, psi_in, povm, phi0, max_order, h / 2.0)?;
    // Leading error exponent of a symmetric 9-point stencil for order k.
    let acc = |k: usize| -> f64 {
        let p = [8, 8, 8, 6, 6, 4][k.min(5)];
        (2.0f64).powi(p)
    };
    let mut out = Vec::with_capacity(coarse.len());
    for (tc, tf) in coarse.iter().zip(fine.iter()) {
        let mut t = DerivTensor::new(d, max_order);
        for alpha in multi_indices(d, max_order) {
            let k = order(alpha);
            let f = acc(k);
            let val = (f * tf.get(alpha) - tc.get(alpha)) / (f - 1.0);
            t.set(alpha, val);
        }
        out.push(t);
    }
    Ok(out)
}

fn prob_derivatives_fd_once(
    sys: &SpinSystem,
    psi_in: &CVec,
    povm: &Povm,
    phi0: &[f64],
    max_order: usize,
    h: f64,
) -> Result<Vec<DerivTensor>> {
    let d = phi0.len();
    let half = 4i32; // 9 points per axis
    let npts = (2 * half + 1) as usize;
    let grid: Vec<f64> = (-half..=half).map(|k| k as f64 * h).collect();
    let weights = fd_weights(0.0, &grid, max_order);
    let l = povm.len();

    // probabilities on the grid; axes beyond d collapse to a single point
    let pts = |axis: usize| if axis < d { npts } else { 1 };
    let total = pts(0) * pts(1) * pts(2);
    let mut table = vec![vec![0.0f64; total]; l];
    let stride = [pts(1) * pts(2), pts(2), 1];
    let mut index = [0usize; 3];
    for flat in 0..total {
        let mut rem = flat;
        for a in 0..3 {
            index[a] = rem / stride[a];
            rem %= stride[a];
        }
        let mut phi = phi0.to_vec();
        for a in 0..d {
            phi[a] += grid[index[a]];
        }
        let psi_phi = sys.encode(psi_in, &phi)?;
        let probs = crate::info::probs_of_state(povm, &psi_phi);
        for mu in 0..l {
            table[mu][flat] = probs[mu];
        }
    }

    let mut out = Vec::with_capacity(l);
    for mu in 0..l {
        let mut t = DerivTensor::new(d, max_order);
        for alpha in multi_indices(d, max_order) {
            // contract the tensor-product stencil
            let mut acc = 0.0;
            let mut idx = [0usize; 3];
            for flat in 0..total {
                let mut rem = flat;
                for a in 0..3 {
                    idx[a] = rem / stride[a];
                    rem %= stride[a];
                }
                let mut w = 1.0;
                for a in 0..3 {
                    if a < d {
                        w *= weights[alpha[a]][idx[a]];
                    } else if alpha[a] != 0 {
                        w = 0.0;
                    }
                }
                if w != 0.0 {
                    acc += w * table[mu][flat];
                }
            }
            t.set(alpha, acc);
        }
        out.push(t);
    }
    Ok(out)
}

/// Derivative tensors at phi0: exact symmetrized products at the origin,
/// finite differences elsewhere.
pub fn prob_derivatives(
    sys: &SpinSystem,
    psi_in: &CVec,
    povm: &Povm,
    phi0: &[f64],
    max_order: usize,
) -> Result<Vec<DerivTensor>> {
    if phi0.iter().all(|x| x.abs() < 1e-14) {
        prob_derivatives_at_zero(sys, psi_in, povm, phi0.len(), max_order)
    } else {
        prob_derivatives_fd(sys, psi_in, povm, phi0, max_order, 1e-2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cr;
    use crate::povm::Povm;
    use crate::spin::make_spin_system;

    #[test]
    fn fornberg_matches_known_central_weights() {
        let grid: Vec<f64> = (-2..=2).map(|k| k as f64).collect();
        let w = fd_weights(0.0, &grid, 2);
        let first = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
        for (a, b) in w[1].iter().zip(first) {
            assert!((a - b).abs() < 1e-12);
        }
        let second = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];
        for (a, b) in w[2].iter().zip(second) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    fn ghz_sensor(theta: f64) -> (crate::spin::SpinSystem, CVec, Povm) {
        let sys = make_spin_system(4).unwrap();
        let dim = sys.dim();
        let mut psi = CVec::zeros(dim);
        psi[0] = cr(1.0 / 2.0f64.sqrt());
        psi[dim - 1] = cr(1.0 / 2.0f64.sqrt());
        let a = crate::linalg::c(0.0, theta / 2.0).exp() / 2.0f64.sqrt();
        let b = crate::linalg::c(0.0, -theta / 2.0).exp() * crate::linalg::c(0.0, 1.0)
            / 2.0f64.sqrt();
        let mut plus = CVec::zeros(dim);
        plus[dim - 1] = a;
        plus[0] = b;
        let mut minus = CVec::zeros(dim);
        minus[dim - 1] = a;
        minus[0] = -b;
        let povm = Povm::from_vectors_completed(vec![plus, minus]).unwrap();
        (sys, psi, povm)
    }

    /// Analytic oracle: p_+ = [1 - sin(N phi - theta)]/2, derivatives known.
    #[test]
    fn exact_tensors_match_ghz_closed_form() {
        let theta = 0.6;
        let (sys, psi, povm) = ghz_sensor(theta);
        let tensors = prob_derivatives_at_zero(&sys, &psi, &povm, 1, 5).unwrap();
        let n = 4.0f64;
        // derivatives of [1 - sin(n x - theta)]/2 at x = 0
        let want = |k: usize| -> f64 {
            let ph = -theta;
            match k {
                0 => (1.0 - ph.sin()) / 2.0,
                1 => -n * ph.cos() / 2.0,
                2 => n * n * ph.sin() / 2.0,
                3 => n.powi(3) * ph.cos() / 2.0,
                4 => -n.powi(4) * ph.sin() / 2.0,
                _ => -n.powi(5) * ph.cos() / 2.0,
            }
        };
        for k in 0..=5 {
            let got = tensors[0].get([k, 0, 0]);
            assert!(
                (got - want(k)).abs() < 1e-9 * want(k).abs().max(1.0),
                "k={k} got={got} want={}",
                want(k)
            );
        }
    }

    #[test]
    fn fd_tensors_match_exact_at_shifted_origin() {
        // compare exact tensors at 0 against FD evaluated at 0 (valid anywhere)
        let (sys, psi, povm) = ghz_sensor(0.3);
        let exact = prob_derivatives_at_zero(&sys, &psi, &povm, 1, 5).unwrap();
        let fd = prob_derivatives_fd(&sys, &psi, &povm, &[0.0], 5, 1e-2).unwrap();
        for mu in 0..povm.len() {
            for alpha in multi_indices(1, 5) {
                let a = exact[mu].get(alpha);
                let b = fd[mu].get(alpha);
                assert!(
                    (a - b).abs() < 2e-5 * a.abs().max(1.0),
                    "mu={mu} alpha={alpha:?} exact={a} fd={b}"
                );
            }
        }
        // and FD at a genuinely shifted point against the closed form
        let phi0 = 0.21;
        let theta = 0.3;
        let fd = prob_derivatives_fd(&sys, &psi, &povm, &[phi0], 5, 1e-2).unwrap();
        let n = 4.0f64;
        let ph = n * phi0 - theta;
        let want = [
            (1.0 - ph.sin()) / 2.0,
            -n * ph.cos() / 2.0,
            n * n * ph.sin() / 2.0,
            n.powi(3) * ph.cos() / 2.0,
            -n.powi(4) * ph.sin() / 2.0,
            -n.powi(5) * ph.cos() / 2.0,
        ];
        for (k, want_k) in want.iter().enumerate() {
            let got = fd[0].get([k, 0, 0]);
            assert!(
                (got - want_k).abs() < 2e-5 * want_k.abs().max(1.0),
                "k={k} got={got} want={want_k}"
            );
        }
    }

    #[test]
    fn mixed_partials_match_finite_differences_d2() {
        let sys = make_spin_system(4).unwrap();
        let psi = sys.jm_state(0).unwrap();
        let vecs: Vec<CVec> = (0..sys.dim()).map(|k| sys.basis_state(k)).collect();
        let povm = Povm::from_vectors(vecs).unwrap();
        let exact = prob_derivatives_at_zero(&sys, &psi, &povm, 2, 4).unwrap();
        let fd = prob_derivatives_fd(&sys, &psi, &povm, &[0.0, 0.0], 4, 1e-2).unwrap();
        for mu in 0..povm.len() {
            for alpha in multi_indices(2, 4) {
                let a = exact[mu].get(alpha);
                let b = fd[mu].get(alpha);
                assert!(
                    (a - b).abs() < 5e-5 * a.abs().max(1.0),
                    "mu={mu} alpha={alpha:?} exact={a} fd={b}"
                );
            }
        }
    }
}
