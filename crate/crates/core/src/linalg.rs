//! Dense complex linear algebra used throughout the crate.
//!
//! The matrices here are small (dimension 2J+1 <= a few hundred), so we use
//! straightforward dense algorithms: a cyclic Jacobi eigensolver for Hermitian
//! matrices and a shifted Hessenberg QR iteration for polynomial companion
//! matrices. Both are deterministic, which matters for the reproducibility
//! contract of the optimizers.

use ndarray::{Array1, Array2};
pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub type CVec = Array1<C64>;
pub type CMat = Array2<C64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Conjugate transpose.
pub fn dagger(a: &CMat) -> CMat {
    a.t().mapv(|z| z.conj())
}

pub fn inner(a: &CVec, b: &CVec) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn normalize(v: &CVec) -> CVec {
    let n = norm(v);
    v.mapv(|z| z / n)
}

/// Rank-1 outer product |a><b|.
pub fn outer(a: &CVec, b: &CVec) -> CMat {
    let n = a.len();
    let m = b.len();
    CMat::from_shape_fn((n, m), |(i, j)| a[i] * b[j].conj())
}

pub fn identity(n: usize) -> CMat {
    CMat::eye(n)
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a.dot(b) - b.dot(a)
}

/// <psi| A |psi>
pub fn expectation(a: &CMat, psi: &CVec) -> C64 {
    inner(psi, &a.dot(psi))
}

pub fn is_hermitian(a: &CMat, tol: f64) -> bool {
    max_abs(&(a - &dagger(a))) <= tol
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the matching eigenvectors as
/// columns of a unitary matrix. Deterministic for a given input.
pub fn eigh(a: &CMat) -> (Vec<f64>, CMat) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "eigh expects a square matrix");
    let mut m = a.clone();
    let mut v = identity(n);
    let scale = max_abs(&m).max(1e-300);
    let tol = 1e-15 * scale;

    for _sweep in 0..120 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(m[(p, q)].norm());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.norm() <= tol * 1e-2 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let abs_apq = apq.norm();
                let phase = apq / abs_apq; // e^{i phi}
                // Real Jacobi rotation on the phase-stripped 2x2 block.
                let tau = (aqq - app) / (2.0 * abs_apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cth = 1.0 / (1.0 + t * t).sqrt();
                let sth = t * cth;
                // J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] acting on (p,q).
                let jpp = cr(cth);
                let jpq = cr(sth);
                let jqp = -phase.conj() * sth;
                let jqq = phase.conj() * cth;
                // Right multiply: columns p, q.
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * jpp + mkq * jqp;
                    m[(k, q)] = mkp * jpq + mkq * jqq;
                }
                // Left multiply by J^dagger: rows p, q.
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = jpp.conj() * mpk + jqp.conj() * mqk;
                    m[(q, k)] = jpq.conj() * mpk + jqq.conj() * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * jpp + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * jqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let evals: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| evals[i].partial_cmp(&evals[j]).unwrap());
    let sorted_vals: Vec<f64> = order.iter().map(|&i| evals[i]).collect();
    let mut sorted_vecs = CMat::zeros((n, n));
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..n {
            sorted_vecs[(r, new_col)] = v[(r, old_col)];
        }
    }
    (sorted_vals, sorted_vecs)
}

/// Eigenvector of the smallest eigenvalue, with a deterministic phase:
/// the largest-magnitude amplitude is made real positive.
pub fn eigh_ground(a: &CMat) -> (f64, CVec) {
    let (vals, vecs) = eigh(a);
    let v = vecs.column(0).to_owned();
    (vals[0], fix_phase(&v))
}

/// Rotate the global phase so the largest-magnitude component is real positive.
pub fn fix_phase(v: &CVec) -> CVec {
    let mut best = 0usize;
    let mut mag = -1.0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > mag + 1e-15 {
            mag = z.norm();
            best = i;
        }
    }
    if mag <= 0.0 {
        return v.clone();
    }
    let phase = v[best] / v[best].norm();
    v.mapv(|z| z / phase)
}

/// V f(Lambda) V^dagger for a Hermitian matrix.
pub fn hermitian_fn(a: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, vecs) = eigh(a);
    let n = a.nrows();
    let mut scaled = vecs.clone();
    for (j, &lam) in vals.iter().enumerate() {
        let fl = f(lam);
        for i in 0..n {
            scaled[(i, j)] *= fl;
        }
    }
    scaled.dot(&dagger(&vecs))
}

/// Inverse square root of a positive definite Hermitian matrix. Eigenvalues
/// are floored at max(floor, 1e-14 * lambda_max) so near-null directions do
/// not blow up while well-scaled ones stay exact.
pub fn inv_sqrt_psd(a: &CMat, floor: f64) -> CMat {
    let (vals, _) = eigh(a);
    let lmax = vals.last().copied().unwrap_or(0.0).abs();
    let eff = floor.max(1e-14 * lmax);
    hermitian_fn(a, |lam| 1.0 / lam.max(eff).sqrt())
}

/// Project onto the PSD cone by zeroing negative eigenvalues.
/// Returns the projected matrix and the magnitude of the most negative
/// eigenvalue that was clipped.
pub fn project_psd(a: &CMat) -> (CMat, f64) {
    let (vals, _) = eigh(a);
    let min = vals.first().copied().unwrap_or(0.0);
    if min >= 0.0 {
        return (a.clone(), 0.0);
    }
    (hermitian_fn(a, |lam| lam.max(0.0)), -min)
}

/// Solve A x = b for a general complex matrix by partial-pivot LU.
pub fn solve(a: &CMat, b: &CVec) -> Result<CVec> {
    let n = a.nrows();
    let mut m = a.clone();
    let mut x = b.clone();
    for col in 0..n {
        let mut piv = col;
        let mut best = m[(col, col)].norm();
        for r in (col + 1)..n {
            if m[(r, col)].norm() > best {
                best = m[(r, col)].norm();
                piv = r;
            }
        }
        if best < 1e-300 {
            return Err(Error::Internal("singular linear system".into()));
        }
        if piv != col {
            for k in 0..n {
                let tmp = m[(col, k)];
                m[(col, k)] = m[(piv, k)];
                m[(piv, k)] = tmp;
            }
            x.swap(col, piv);
        }
        for r in (col + 1)..n {
            let factor = m[(r, col)] / m[(col, col)];
            if factor == ZERO {
                continue;
            }
            for k in col..n {
                let v = m[(col, k)];
                m[(r, k)] -= factor * v;
            }
            let v = x[col];
            x[r] -= factor * v;
        }
    }
    for r in (0..n).rev() {
        let mut acc = x[r];
        for k in (r + 1)..n {
            acc -= m[(r, k)] * x[k];
        }
        x[r] = acc / m[(r, r)];
    }
    Ok(x)
}

/// Solve A X = B column by column.
pub fn solve_mat(a: &CMat, b: &CMat) -> Result<CMat> {
    let n = b.nrows();
    let k = b.ncols();
    let mut out = CMat::zeros((n, k));
    for j in 0..k {
        let col = solve(a, &b.column(j).to_owned())?;
        for i in 0..n {
            out[(i, j)] = col[i];
        }
    }
    Ok(out)
}

/// Inverse of a small real matrix by Gauss elimination.
pub fn inv_real(a: &Array2<f64>) -> Result<Array2<f64>> {
    let n = a.nrows();
    let ac = a.mapv(|x| cr(x));
    let inv = solve_mat(&ac, &identity(n))?;
    Ok(inv.mapv(|z| z.re))
}

/// Roots of a complex polynomial sum_k coeffs[k] z^k (coeffs[deg] != 0),
/// computed as eigenvalues of the balanced companion matrix by shifted
/// Hessenberg QR iteration.
pub fn poly_roots(coeffs: &[C64]) -> Vec<C64> {
    // Trim numerically-zero leading coefficients.
    let scale = coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!(scale > 0.0, "zero polynomial has no roots");
    let mut hi = coeffs.len() - 1;
    while hi > 0 && coeffs[hi].norm() <= 1e-280 * scale {
        hi -= 1;
    }
    let mut roots = Vec::new();
    // Exact zero roots: trailing zero coefficients.
    let mut lo = 0usize;
    while lo < hi && coeffs[lo].norm() <= 1e-280 * scale {
        roots.push(ZERO);
        lo += 1;
    }
    let deg = hi - lo;
    if deg == 0 {
        return roots;
    }
    let monic: Vec<C64> = (lo..hi).map(|k| coeffs[k] / coeffs[hi]).collect();
    if deg == 1 {
        roots.push(-monic[0]);
        return roots;
    }
    // Companion matrix (upper Hessenberg).
    let mut h = CMat::zeros((deg, deg));
    for i in 1..deg {
        h[(i, i - 1)] = ONE;
    }
    for i in 0..deg {
        h[(i, deg - 1)] = -monic[i];
    }
    balance(&mut h);
    roots.extend(hessenberg_eigenvalues(h));
    roots
}

/// Diagonal power-of-two balancing (Parlett-Reinsch style).
fn balance(h: &mut CMat) {
    let n = h.nrows();
    for _ in 0..10 {
        let mut done = true;
        for i in 0..n {
            let mut row = 0.0;
            let mut col = 0.0;
            for j in 0..n {
                if j != i {
                    row += h[(i, j)].norm();
                    col += h[(j, i)].norm();
                }
            }
            if row == 0.0 || col == 0.0 {
                continue;
            }
            let mut f = 1.0f64;
            let s = row + col;
            let mut c2 = col;
            while c2 < row / 2.0 {
                c2 *= 4.0;
                f *= 2.0;
            }
            while c2 > row * 2.0 {
                c2 /= 4.0;
                f /= 2.0;
            }
            if (col * f + row / f) < 0.95 * s {
                done = false;
                for j in 0..n {
                    h[(i, j)] = h[(i, j)] / f;
                    h[(j, i)] = h[(j, i)] * f;
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Eigenvalues of an upper Hessenberg complex matrix by Wilkinson-shifted QR.
fn hessenberg_eigenvalues(mut h: CMat) -> Vec<C64> {
    let n = h.nrows();
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n; // active block is 0..hi
    let mut iters_since_deflation = 0usize;
    let mut total_guard = 0usize;
    while hi > 0 {
        total_guard += 1;
        if total_guard > 200 * n {
            // Give up on further refinement; report diagonal of what's left.
            for i in 0..hi {
                eigs.push(h[(i, i)]);
            }
            break;
        }
        // Deflate small subdiagonals.
        let mut lo = hi - 1;
        while lo > 0 {
            let s = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if h[(lo, lo - 1)].norm() <= 1e-16 * s.max(1e-300) {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            eigs.push(h[(hi - 1, hi - 1)]);
            hi -= 1;
            iters_since_deflation = 0;
            continue;
        }
        if lo > 0 && h[(lo, lo - 1)] == ZERO {
            // handled above
        }
        // Wilkinson shift from trailing 2x2 of the active block.
        let a = h[(hi - 2, hi - 2)];
        let b = h[(hi - 2, hi - 1)];
        let cc = h[(hi - 1, hi - 2)];
        let d = h[(hi - 1, hi - 1)];
        let tr = a + d;
        let det = a * d - b * cc;
        let disc = (tr * tr - 4.0 * det).sqrt();
        let l1 = (tr + disc) / 2.0;
        let l2 = (tr - disc) / 2.0;
        let mut shift = if (l1 - d).norm() < (l2 - d).norm() { l1 } else { l2 };
        iters_since_deflation += 1;
        if iters_since_deflation % 12 == 0 {
            // Exceptional shift to break cycles.
            shift = d + cr(1.5) * h[(hi - 1, hi - 2)];
        }
        // One explicit QR step on the active block lo..hi.
        let m = hi - lo;
        for i in 0..m {
            h[(lo + i, lo + i)] -= shift;
        }
        // QR by Givens rotations (store them), then RQ.
        let mut rots: Vec<(usize, C64, C64)> = Vec::with_capacity(m - 1);
        for i in 0..(m - 1) {
            let r0 = lo + i;
            let x = h[(r0, r0)];
            let y = h[(r0 + 1, r0)];
            let nrm = (x.norm_sqr() + y.norm_sqr()).sqrt();
            if nrm < 1e-300 {
                rots.push((r0, ONE, ZERO));
                continue;
            }
            let cg = x.conj() / nrm;
            let sg = y.conj() / nrm;
            // G = [[cg, sg], [-conj(sg), conj(cg)]] applied to rows r0, r0+1.
            for col in r0..hi {
                let u = h[(r0, col)];
                let v = h[(r0 + 1, col)];
                h[(r0, col)] = cg * u + sg * v;
                h[(r0 + 1, col)] = -sg.conj() * u + cg.conj() * v;
            }
            rots.push((r0, cg, sg));
        }
        for &(r0, cg, sg) in &rots {
            // Right-multiply columns r0, r0+1 by G^dagger.
            let top = if r0 + 2 < hi { r0 + 2 } else { hi };
            for row in lo..top {
                let u = h[(row, r0)];
                let v = h[(row, r0 + 1)];
                h[(row, r0)] = u * cg.conj() + v * sg.conj();
                h[(row, r0 + 1)] = -u * sg + v * cg;
            }
        }
        for i in 0..m {
            h[(lo + i, lo + i)] += shift;
        }
    }
    eigs
}

/// Gram-Schmidt orthonormalization of the given vectors (in order).
/// Returns Err if some vector is (numerically) dependent on the previous ones.
pub fn gram_schmidt(vectors: &[CVec], rel_tol: f64) -> Result<Vec<CVec>> {
    let mut basis: Vec<CVec> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let orig = norm(v);
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let ov = inner(b, &w);
                w = &w - &b.mapv(|z| z * ov);
            }
        }
        let n = norm(&w);
        if n <= rel_tol * orig.max(1e-300) {
            return Err(Error::DegenerateInput(
                "linearly dependent vector in Gram-Schmidt".into(),
            ));
        }
        basis.push(w.mapv(|z| z / n));
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, seed: u64) -> CMat {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = CMat::from_shape_fn((n, n), |_| {
            c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        (&a + &dagger(&a)).mapv(|z| z / 2.0)
    }

    #[test]
    fn eigh_reconstructs() {
        for n in [2usize, 5, 9, 17] {
            let a = random_hermitian(n, n as u64);
            let (vals, vecs) = eigh(&a);
            // V diag V^dag == A
            let mut vd = vecs.clone();
            for (j, &lam) in vals.iter().enumerate() {
                for i in 0..n {
                    vd[(i, j)] *= lam;
                }
            }
            let rec = vd.dot(&dagger(&vecs));
            assert!(max_abs(&(&rec - &a)) < 1e-12, "n={n}");
            let gram = dagger(&vecs).dot(&vecs);
            assert!(max_abs(&(&gram - &identity(n))) < 1e-12);
            for w in vals.windows(2) {
                assert!(w[0] <= w[1] + 1e-14);
            }
        }
    }

    #[test]
    fn poly_roots_known() {
        // (z-1)(z-2)(z-3) = z^3 - 6 z^2 + 11 z - 6
        let mut roots = poly_roots(&[cr(-6.0), cr(11.0), cr(-6.0), cr(1.0)]);
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (r, want) in roots.iter().zip([1.0, 2.0, 3.0]) {
            assert!((r - cr(want)).norm() < 1e-9, "{r} vs {want}");
        }
        // z^8 - 1: roots on the unit circle.
        let mut coeffs = vec![ZERO; 9];
        coeffs[0] = cr(-1.0);
        coeffs[8] = cr(1.0);
        let roots = poly_roots(&coeffs);
        assert_eq!(roots.len(), 8);
        for r in roots {
            assert!((r.norm() - 1.0).abs() < 1e-9);
            assert!((r.powu(8) - ONE).norm() < 1e-8);
        }
    }

    #[test]
    fn poly_roots_random_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for deg in [4usize, 9, 16, 24] {
            let coeffs: Vec<C64> = (0..=deg)
                .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect();
            let roots = poly_roots(&coeffs);
            assert_eq!(roots.len(), deg);
            for r in roots {
                let mut val = ZERO;
                let mut deriv = ZERO;
                for k in (0..=deg).rev() {
                    deriv = deriv * r + val;
                    val = val * r + coeffs[k];
                }
                // Relative backward-style check |p(r)| / |p'(r)| small.
                let err = val.norm() / deriv.norm().max(1e-6);
                assert!(err < 1e-7, "deg={deg} err={err:.3e}");
            }
        }
    }

    #[test]
    fn solve_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 7;
        let a = CMat::from_shape_fn((n, n), |_| {
            c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let x = CVec::from_shape_fn(n, |_| c(rng.random::<f64>(), rng.random::<f64>()));
        let b = a.dot(&x);
        let got = solve(&a, &b).unwrap();
        for i in 0..n {
            assert!((got[i] - x[i]).norm() < 1e-10);
        }
    }

    #[test]
    fn psd_projection_and_inv_sqrt() {
        let a = random_hermitian(6, 11);
        let (p, clip) = project_psd(&a);
        assert!(clip > 0.0);
        let (vals, _) = eigh(&p);
        assert!(vals[0] > -1e-12);
        let spd = p + identity(6).mapv(|z| z * 0.5);
        let t = inv_sqrt_psd(&spd, 1e-14);
        let should_be_id = t.dot(&spd).dot(&t);
        assert!(max_abs(&(&should_be_id - &identity(6))) < 1e-10);
    }
}
