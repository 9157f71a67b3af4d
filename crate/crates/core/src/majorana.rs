//! Majorana constellation and Husimi-Q exporters for symmetric spin states.
//!
//! A spin-J pure state maps to the 2J roots of the overlap polynomial
//! G(z) = sum_m binom(2J, J+m)^(1/2) Psi_m z^(J+m), with z the stereographic
//! image cot(theta/2) e^{i phi}; degree deficits become points at the North
//! Pole. The constellation is where the Husimi Q function vanishes.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{self, c, cr, CVec};
use crate::spin::SpinSystem;

#[derive(Debug, Clone)]
pub struct Constellation {
    /// Unit vectors, one per root (multiplicity repeats points).
    pub points: Vec<[f64; 3]>,
    /// (theta, phi) pairs matching `points`.
    pub angles: Vec<(f64, f64)>,
    /// Roots at infinity mapped to the North Pole.
    pub infinity_count: usize,
}

impl Constellation {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn binom_f(n: usize, k: usize) -> f64 {
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (k - i) as f64;
    }
    acc
}

/// Majorana polynomial coefficients, index k = J + m (ascending powers).
pub fn majorana_coefficients(sys: &SpinSystem, psi: &CVec) -> Vec<linalg::C64> {
    let dim = sys.dim();
    (0..dim)
        .map(|k| {
            // z^k pairs with m = k - J, which is basis index dim-1-k
            let amp = psi[dim - 1 - k];
            amp * binom_f(dim - 1, k).sqrt()
        })
        .collect()
}

/// Majorana constellation of a symmetric state: companion-matrix roots of
/// the overlap polynomial, inverse-stereographically mapped to the sphere.
pub fn constellation(sys: &SpinSystem, psi: &CVec) -> Result<Constellation> {
    let coeffs = majorana_coefficients(sys, psi);
    let scale = coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale <= 0.0 {
        return Err(Error::invalid("zero state has no constellation"));
    }
    let n_roots = sys.dim() - 1; // 2J
    let mut hi = coeffs.len() - 1;
    while hi > 0 && coeffs[hi].norm() <= 1e-12 * scale {
        hi -= 1;
    }
    let infinity_count = n_roots - hi;
    let mut angles: Vec<(f64, f64)> = Vec::with_capacity(n_roots);
    for _ in 0..infinity_count {
        angles.push((0.0, 0.0)); // North Pole
    }
    if hi > 0 {
        let roots = linalg::poly_roots(&coeffs[..=hi]);
        for z in roots {
            let r = z.norm();
            // z = cot(theta/2) e^{i phi}
            let theta = 2.0 * (1.0 / r).atan();
            let theta = if r == 0.0 { PI } else { theta };
            let phi = if r == 0.0 { 0.0 } else { z.im.atan2(z.re) };
            angles.push((theta, phi));
        }
    }
    let points = angles
        .iter()
        .map(|&(t, p)| [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()])
        .collect();
    Ok(Constellation {
        points,
        angles,
        infinity_count,
    })
}

/// Reconstruct the state from constellation angles (up to global scale and
/// phase); the round-trip oracle for the root finder.
pub fn state_from_constellation(sys: &SpinSystem, angles: &[(f64, f64)]) -> Result<CVec> {
    let n_roots = sys.dim() - 1;
    if angles.len() != n_roots {
        return Err(Error::invalid("constellation size must be 2J"));
    }
    // multiply out prod (z - z_k), roots at the North Pole drop the degree
    let mut poly = vec![cr(1.0)];
    for &(theta, phi) in angles {
        if theta < 1e-12 {
            continue; // infinity root: degree deficit
        }
        let z_k = cr((theta / 2.0).tan().recip()) * c(0.0, phi).exp();
        let mut next = vec![linalg::ZERO; poly.len() + 1];
        for (k, &a) in poly.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * z_k;
        }
        poly = next;
    }
    let dim = sys.dim();
    let mut psi = CVec::zeros(dim);
    for (k, &a) in poly.iter().enumerate() {
        psi[dim - 1 - k] = a / binom_f(dim - 1, k).sqrt();
    }
    Ok(linalg::normalize(&psi))
}

/// Husimi Q(theta, phi) = |<theta, phi|psi>|^2 on an equirectangular grid.
/// Rows run over theta in [0, pi], columns over phi in [0, 2 pi).
pub struct HusimiGrid {
    pub thetas: Vec<f64>,
    pub phis: Vec<f64>,
    /// Row-major Q values, thetas.len() x phis.len().
    pub values: Vec<Vec<f64>>,
}

pub fn husimi_grid(
    sys: &SpinSystem,
    psi: &CVec,
    n_theta: usize,
    n_phi: usize,
) -> Result<HusimiGrid> {
    if n_theta < 8 || n_phi < 8 {
        return Err(Error::invalid("husimi grid resolution must be >= 8x8"));
    }
    let thetas: Vec<f64> = (0..n_theta)
        .map(|i| PI * i as f64 / (n_theta - 1) as f64)
        .collect();
    let phis: Vec<f64> = (0..n_phi).map(|i| 2.0 * PI * i as f64 / n_phi as f64).collect();
    let values = thetas
        .iter()
        .map(|&t| phis.iter().map(|&p| husimi_q(sys, psi, t, p)).collect())
        .collect();
    Ok(HusimiGrid {
        thetas,
        phis,
        values,
    })
}

/// Q at a single point: the coherent state is e^{-i phi Jz} e^{-i theta Jy}
/// |J,J>, whose components in the Jz basis are closed-form.
pub fn husimi_q(sys: &SpinSystem, psi: &CVec, theta: f64, phi: f64) -> f64 {
    let dim = sys.dim();
    let j = sys.j();
    let ct = (theta / 2.0).cos();
    let st = (theta / 2.0).sin();
    let mut overlap = linalg::ZERO;
    for k in 0..dim {
        let m = sys.m_of(k);
        let jm = (j + m) as usize;
        let d_elem = binom_f(dim - 1, jm).sqrt() * ct.powi(jm as i32) * st.powi((dim - 1 - jm) as i32);
        let css_k = c(0.0, -m * phi).exp() * d_elem;
        overlap += css_k.conj() * psi[k];
    }
    overlap.norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::inner;
    use crate::spin::make_spin_system;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn coherent_state_all_points_at_south_pole() {
        let sys = make_spin_system(5).unwrap();
        let psi = sys.jm_state(5).unwrap(); // |J,J>
        let con = constellation(&sys, &psi).unwrap();
        assert_eq!(con.len(), 5);
        assert_eq!(con.infinity_count, 0);
        for p in &con.points {
            assert!((p[2] + 1.0).abs() < 1e-8, "point {p:?}");
        }
        // and the Husimi maximum is at the North pole
        let q_north = husimi_q(&sys, &psi, 0.0, 0.0);
        assert!((q_north - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tetrahedron_constellation() {
        let sys = make_spin_system(4).unwrap();
        let psi = catalog::qc_3d_n4_state();
        let con = constellation(&sys, &psi).unwrap();
        assert_eq!(con.len(), 4);
        // regular tetrahedron: all pairwise angles arccos(-1/3)
        for i in 0..4 {
            for j in (i + 1)..4 {
                let dot: f64 = (0..3).map(|k| con.points[i][k] * con.points[j][k]).sum();
                assert!(
                    (dot + 1.0 / 3.0).abs() < 1e-8,
                    "pair ({i},{j}) dot = {dot}"
                );
            }
        }
        // Husimi vanishes at the constellation
        for &(t, p) in &con.angles {
            assert!(husimi_q(&sys, &psi, t, p) < 1e-10);
        }
    }

    #[test]
    fn octahedron_and_cube_and_icosahedron() {
        let sys = make_spin_system(6).unwrap();
        let con = constellation(&sys, &catalog::qc_3d_n6_state()).unwrap();
        assert_eq!(con.len(), 6);
        // octahedron: pairwise dots in {0, -1}
        for i in 0..6 {
            for j in (i + 1)..6 {
                let dot: f64 = (0..3).map(|k| con.points[i][k] * con.points[j][k]).sum();
                assert!(dot.abs() < 1e-8 || (dot + 1.0).abs() < 1e-8, "dot {dot}");
            }
        }
        let sys8 = make_spin_system(8).unwrap();
        let con = constellation(&sys8, &catalog::qc_3d_n8_state()).unwrap();
        assert_eq!(con.len(), 8);
        // cube: dots in {1/3, -1/3, -1}
        for i in 0..8 {
            for j in (i + 1)..8 {
                let dot: f64 = (0..3).map(|k| con.points[i][k] * con.points[j][k]).sum();
                let ok = (dot - 1.0 / 3.0).abs() < 1e-8
                    || (dot + 1.0 / 3.0).abs() < 1e-8
                    || (dot + 1.0).abs() < 1e-8;
                assert!(ok, "dot {dot}");
            }
        }
        let sys12 = make_spin_system(12).unwrap();
        let con = constellation(&sys12, &catalog::qc_3d_n12_state()).unwrap();
        assert_eq!(con.len(), 12);
        // icosahedron: dots in {+-1/sqrt5, -1}
        let s5 = 1.0 / 5.0f64.sqrt();
        for i in 0..12 {
            for j in (i + 1)..12 {
                let dot: f64 = (0..3).map(|k| con.points[i][k] * con.points[j][k]).sum();
                let ok = (dot - s5).abs() < 1e-8
                    || (dot + s5).abs() < 1e-8
                    || (dot + 1.0).abs() < 1e-8;
                assert!(ok, "dot {dot}");
            }
        }
    }

    #[test]
    fn pentakis_dodecahedron_for_n32() {
        let sys = make_spin_system(32).unwrap();
        let psi = catalog::state_3d_n32();
        let con = constellation(&sys, &psi).unwrap();
        assert_eq!(con.len(), 32);
        // pentakis dodecahedron = 12 icosahedral + 20 dodecahedral directions;
        // check 5-fold z symmetry of the point multiset instead of the full
        // geometry: rotating by 2 pi/5 permutes points.
        let rot: Vec<[f64; 3]> = con
            .points
            .iter()
            .map(|p| {
                let a = 2.0 * PI / 5.0;
                [
                    p[0] * a.cos() - p[1] * a.sin(),
                    p[0] * a.sin() + p[1] * a.cos(),
                    p[2],
                ]
            })
            .collect();
        for r in &rot {
            let nearest = con
                .points
                .iter()
                .map(|p| {
                    ((p[0] - r[0]).powi(2) + (p[1] - r[1]).powi(2) + (p[2] - r[2]).powi(2)).sqrt()
                })
                .fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-6, "unmatched point under C5: {nearest:.2e}");
        }
    }

    #[test]
    fn rotation_equivariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let sys = make_spin_system(5).unwrap();
        for _ in 0..5 {
            let psi = {
                let v = CVec::from_shape_fn(sys.dim(), |_| {
                    c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                });
                linalg::normalize(&v)
            };
            let axis = [
                rng.random::<f64>() - 0.5,
                rng.random::<f64>() - 0.5,
                rng.random::<f64>() - 0.5,
            ];
            let angle = 2.0 * (rng.random::<f64>() - 0.5);
            let u = sys.rotation(&axis, angle).unwrap();
            let rotated = u.dot(&psi);
            let con_a = constellation(&sys, &psi).unwrap();
            let con_b = constellation(&sys, &rotated).unwrap();
            // rigid rotation matrix of the same axis-angle
            let n = {
                let nn = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
                [axis[0] / nn, axis[1] / nn, axis[2] / nn]
            };
            let rot = |p: &[f64; 3]| -> [f64; 3] {
                // Rodrigues
                let cosa = angle.cos();
                let sina = angle.sin();
                let dot = n[0] * p[0] + n[1] * p[1] + n[2] * p[2];
                let cross = [
                    n[1] * p[2] - n[2] * p[1],
                    n[2] * p[0] - n[0] * p[2],
                    n[0] * p[1] - n[1] * p[0],
                ];
                [
                    p[0] * cosa + cross[0] * sina + n[0] * dot * (1.0 - cosa),
                    p[1] * cosa + cross[1] * sina + n[1] * dot * (1.0 - cosa),
                    p[2] * cosa + cross[2] * sina + n[2] * dot * (1.0 - cosa),
                ]
            };
            let mut worst = 0.0f64;
            for p in &con_a.points {
                let rp = rot(p);
                let nearest = con_b
                    .points
                    .iter()
                    .map(|q| {
                        ((q[0] - rp[0]).powi(2) + (q[1] - rp[1]).powi(2) + (q[2] - rp[2]).powi(2))
                            .sqrt()
                    })
                    .fold(f64::INFINITY, f64::min);
                worst = worst.max(nearest);
            }
            assert!(worst < 1e-8, "equivariance mismatch {worst:.2e}");
        }
    }

    #[test]
    fn round_trip_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in [2u32, 4, 7] {
            let sys = make_spin_system(n).unwrap();
            for _ in 0..5 {
                let psi = {
                    let v = CVec::from_shape_fn(sys.dim(), |_| {
                        c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                    });
                    linalg::normalize(&v)
                };
                let con = constellation(&sys, &psi).unwrap();
                let back = state_from_constellation(&sys, &con.angles).unwrap();
                let fid = inner(&psi, &back).norm_sqr();
                assert!(fid > 1.0 - 1e-8, "n={n} fidelity {fid}");
            }
        }
    }

    #[test]
    fn m0_state_is_azimuth_independent() {
        let sys = make_spin_system(4).unwrap();
        let psi = sys.jm_state(0).unwrap();
        let q0 = husimi_q(&sys, &psi, 1.1, 0.0);
        for p in [0.5, 2.0, 4.4] {
            assert!((husimi_q(&sys, &psi, 1.1, p) - q0).abs() < 1e-12);
        }
    }
}
