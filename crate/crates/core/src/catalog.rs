//! Exact analytical sensor solutions used as oracles and benchmarks: the
//! GHZ interferometer, the two-parameter compass family for even/odd N, the
//! three-parameter compass gallery (N = 3, 4, 6, 8, 12 and the N = 32
//! state), and the bias-phase input-state families behind the Heisenberg
//! limits.
//!
//! All amplitudes are built from exact radical expressions evaluated at
//! load; transcription slips then surface as completeness-residual or FIM
//! failures in the test suite rather than silent drift.

use std::f64::consts::PI;

use crate::cost::{self, EstimatorSet};
use crate::error::{Error, Result};
use crate::linalg::{c, cr, inner, normalize, CVec};
use crate::povm::Povm;
use crate::prior::{GaussianPrior, DEFAULT_NODES};
use crate::sensor::{MeasurementClass, Provenance, SensorSolution};
use crate::spin::{make_spin_system, SpinSystem};

/// Width of the default isotropic prior used to attach estimators to the
/// catalog entries.
pub const CATALOG_DELTA: f64 = 0.03125; // 2^-5

fn default_prior(d: usize) -> GaussianPrior {
    GaussianPrior::isotropic(vec![0.0; d], CATALOG_DELTA, DEFAULT_NODES).unwrap()
}

fn assemble(
    sys: &SpinSystem,
    d: usize,
    psi: CVec,
    povm: Povm,
    class: MeasurementClass,
) -> Result<SensorSolution> {
    let prior = default_prior(d);
    let estimators: EstimatorSet = cost::optimal_estimators(sys, &psi, &povm, &prior)?;
    let sol = SensorSolution {
        n_atoms: sys.n_atoms(),
        d,
        psi_in: psi,
        povm,
        estimators,
        prior_used: prior,
        cost_report: None,
        class,
        provenance: Provenance::Catalog,
        seed: None,
        clip_magnitude: 0.0,
    };
    sol.validate()?;
    Ok(sol)
}

/// The GHZ state (|J,J> + |J,-J>)/sqrt(2) in descending-m ordering.
pub fn ghz_state(sys: &SpinSystem) -> CVec {
    let mut v = CVec::zeros(sys.dim());
    let a = cr(1.0 / 2.0f64.sqrt());
    v[0] = a;
    v[sys.dim() - 1] = a;
    v
}

/// Single-parameter GHZ interferometer with measurement basis phase theta.
/// Conditional probabilities are [1 -+ sin(N phi - theta)]/2.
pub fn ghz_1d(n_atoms: u32, theta: f64) -> Result<SensorSolution> {
    let sys = make_spin_system(n_atoms)?;
    let dim = sys.dim();
    let psi = ghz_state(&sys);
    let a = c(0.0, theta / 2.0).exp() / 2.0f64.sqrt();
    let b = c(0.0, -theta / 2.0).exp() * c(0.0, 1.0) / 2.0f64.sqrt();
    let mut plus = CVec::zeros(dim);
    plus[dim - 1] = a; // |J,-J>
    plus[0] = b; // |J,+J>
    let mut minus = CVec::zeros(dim);
    minus[dim - 1] = a;
    minus[0] = -b;
    let povm = Povm::from_vectors_completed(vec![plus, minus])?;
    assemble(&sys, 1, psi, povm, MeasurementClass::Povm)
}

/// Fiducial-state rotation basis |mu> = exp(-i (phi_mu - pi) Jz) |f> with
/// phi_mu = 2 pi mu / (2J+1); orthonormal because |f_m| is flat.
fn rotated_fiducial_basis(sys: &SpinSystem, fiducial: &CVec) -> Vec<CVec> {
    let dim = sys.dim();
    let j = sys.j();
    (0..dim)
        .map(|k| {
            let mu = j - k as f64;
            let angle = 2.0 * PI * mu / dim as f64 - PI;
            let mut v = fiducial.clone();
            for r in 0..dim {
                v[r] *= c(0.0, -angle * sys.m_of(r)).exp();
            }
            v
        })
        .collect()
}

/// Two-parameter compass for even N: input |J,0>, fiducial
/// f_m = e^{i pi |m|/2}/sqrt(2J+1).
pub fn qc_2d_even(n_atoms: u32) -> Result<SensorSolution> {
    if n_atoms % 2 != 0 || n_atoms == 0 {
        return Err(Error::invalid("even-N compass needs even N >= 2"));
    }
    let sys = make_spin_system(n_atoms)?;
    let dim = sys.dim();
    let norm = 1.0 / (dim as f64).sqrt();
    let fiducial = CVec::from_shape_fn(dim, |k| {
        let m = sys.m_of(k);
        c(0.0, PI * m.abs() / 2.0).exp() * norm
    });
    let basis = rotated_fiducial_basis(&sys, &fiducial);
    let basis = fix_antiunitary_phases(&sys, &sys.jm_state(0)?, 2, basis);
    let povm = Povm::from_vectors(basis)?;
    assemble(&sys, 2, sys.jm_state(0)?, povm, MeasurementClass::Projective)
}

/// Two-parameter compass for odd N: input |J,1/2>, fiducial
/// f_m = e^{i pi |m - 1/2|/2}/sqrt(2J+1).
pub fn qc_2d_odd(n_atoms: u32) -> Result<SensorSolution> {
    if n_atoms % 2 != 1 {
        return Err(Error::invalid("odd-N compass needs odd N"));
    }
    let sys = make_spin_system(n_atoms)?;
    let dim = sys.dim();
    let norm = 1.0 / (dim as f64).sqrt();
    let fiducial = CVec::from_shape_fn(dim, |k| {
        let m = sys.m_of(k);
        c(0.0, PI * (m - 0.5).abs() / 2.0).exp() * norm
    });
    let basis = rotated_fiducial_basis(&sys, &fiducial);
    let povm = Povm::from_vectors(basis)?;
    assemble(&sys, 2, sys.jm_state(1)?, povm, MeasurementClass::Projective)
}

/// CRB = HCRB of the odd-N two-parameter compass at phi = 0.
pub fn qc_2d_odd_crb(j: f64) -> f64 {
    let root = ((j - 0.5) * (j + 1.5)).sqrt();
    4.0 / (j + 0.5 + root).powi(2)
}

/// Interpolating input-state family behind the two-parameter Heisenberg
/// limit at bias phi_0 (N = 4): exp(i phi0 Jx / 2) [|2,0> - lambda(|2,-2> +
/// |2,2>)/sqrt(2)] / sqrt(1+lambda^2).
pub fn hl_state_2d(lambda: f64, phi0: f64) -> Result<CVec> {
    let sys = make_spin_system(4)?;
    let norm = 1.0 / (1.0 + lambda * lambda).sqrt();
    let mut v = CVec::zeros(5);
    v[2] = cr(norm); // |2,0>
    let w = -lambda / 2.0f64.sqrt() * norm;
    v[0] = cr(w); // |2,2>
    v[4] = cr(w); // |2,-2>
    let u = sys.rotation_axis(crate::spin::Axis::X, -phi0 / 2.0)?; // exp(+i phi0/2 Jx)
    Ok(u.dot(&v))
}

/// Input-state family behind the three-parameter Heisenberg limit at bias
/// |phi_0| along z (even N): (|J,-J> + |J,J> - i lambda |J,0>)/sqrt(2 +
/// lambda^2) with the optimal lambda(phi_0).
///
/// The m = 0 amplitude is a quarter turn out of phase with the extremal
/// ones; this kills the <J+^2> cross term so the transverse spin variances
/// are equal, which is what lets lambda trade J_z variance against the
/// sinc-suppressed transverse information and attain the closed-form bound.
pub fn hl_state_3d(n_atoms: u32, phi0_abs: f64) -> Result<CVec> {
    if n_atoms % 2 != 0 || n_atoms < 4 {
        return Err(Error::invalid("3D HL family needs even N >= 4"));
    }
    let sys = make_spin_system(n_atoms)?;
    let j = sys.j();
    let lambda = hl_lambda_3d(j, phi0_abs);
    let mut v = CVec::zeros(sys.dim());
    let norm = 1.0 / (2.0 + lambda * lambda).sqrt();
    v[0] = cr(norm);
    v[sys.dim() - 1] = cr(norm);
    v[sys.dim() / 2] = c(0.0, -lambda * norm);
    Ok(v)
}

pub fn hl_lambda_3d(j: f64, phi0_abs: f64) -> f64 {
    let s = crate::spin::sinc(phi0_abs / 2.0).abs();
    (2.0 / (j + 1.0) * (2.0 * j / s - 1.0)).sqrt()
}

/// Three-parameter compass gallery. N = 3 defaults to the projective
/// solution; see [`qc_3d_n3_povm`] for the POVM variant and
/// [`qc_3d_n8_mirror`] for the second N = 8 chirality.
pub fn qc_3d(n_atoms: u32) -> Result<SensorSolution> {
    match n_atoms {
        3 => qc_3d_n3_pm(),
        4 => qc_3d_n4(),
        6 => qc_3d_n6(),
        8 => qc_3d_n8(false),
        12 => qc_3d_n12(),
        _ => Err(Error::invalid(
            "three-parameter compass catalog covers N in {3, 4, 6, 8, 12}",
        )),
    }
}

/// Tetrahedron state sqrt(2/3)|2,1> + sqrt(1/3)|2,-2>.
pub fn qc_3d_n4_state() -> CVec {
    let mut v = CVec::zeros(5);
    v[1] = cr((2.0f64 / 3.0).sqrt()); // m = 1
    v[4] = cr((1.0f64 / 3.0).sqrt()); // m = -2
    v
}

fn qc_3d_n4() -> Result<SensorSolution> {
    let sys = make_spin_system(4)?;
    let s6 = 6.0f64.sqrt();
    // fiducial (1/sqrt6){1, -i, (sqrt2 + i)/sqrt3, i, 1}, descending m
    let eta = CVec::from_vec(vec![
        cr(1.0 / s6),
        c(0.0, -1.0 / s6),
        c(2.0f64.sqrt() / 3.0f64.sqrt() / s6, 1.0 / 3.0f64.sqrt() / s6),
        c(0.0, 1.0 / s6),
        cr(1.0 / s6),
    ]);
    let rz = |angle: f64| sys.rotation_axis(crate::spin::Axis::Z, angle).unwrap();
    let ry_pi = sys.rotation_axis(crate::spin::Axis::Y, PI)?;
    // exp(-i (pi/(2 sqrt3)) (sqrt2 Jx - Jz)): unit axis (sqrt2,0,-1)/sqrt3,
    // angle (pi/(2 sqrt3)) * sqrt3 = pi/2.
    let tilt = sys.rotation(&[2.0f64.sqrt(), 0.0, -1.0], PI / 2.0)?;
    let mu1 = eta.clone();
    let mu2 = rz(2.0 * PI / 3.0).dot(&mu1);
    let mu3 = rz(-2.0 * PI / 3.0).dot(&mu1);
    let mu4 = ry_pi.dot(&tilt.dot(&eta));
    let mu5 = rz(2.0 * PI / 3.0).dot(&mu4);
    let mu6 = rz(-2.0 * PI / 3.0).dot(&mu4);
    let povm = Povm::from_vectors(vec![mu1, mu2, mu3, mu4, mu5, mu6])?;
    assemble(&sys, 3, qc_3d_n4_state(), povm, MeasurementClass::Povm)
}

/// Octahedron state (|3,2> - |3,-2>)/sqrt(2).
pub fn qc_3d_n6_state() -> CVec {
    let mut v = CVec::zeros(7);
    let a = cr(1.0 / 2.0f64.sqrt());
    v[1] = a; // m = 2
    v[5] = -a; // m = -2
    v
}

fn qc_3d_n6() -> Result<SensorSolution> {
    let sys = make_spin_system(6)?;
    let s8 = 8.0f64.sqrt();
    let q = 2.0 * 2.0f64.sqrt(); // 2 sqrt2
    let s3 = 3.0f64.sqrt();
    let s5 = 5.0f64.sqrt();
    // i^{3/2} = e^{i 3 pi/4}, (-i)^{3/2} = e^{-i 3 pi/4}
    let i32 = c(-1.0 / 2.0f64.sqrt(), 1.0 / 2.0f64.sqrt());
    let mi32 = i32.conj();
    let eta = CVec::from_vec(vec![
        c(s5 / q / s8, s3 / q / s8),
        i32 / s8,
        c(s3 / q / s8, s5 / q / s8),
        cr(1.0 / s8),
        c(-s3 / q / s8, s5 / q / s8),
        mi32 / s8,
        c(-s5 / q / s8, s3 / q / s8),
    ]);
    let rz = |l: f64| sys.rotation_axis(crate::spin::Axis::Z, PI / 2.0 * l).unwrap();
    let ry_pi = sys.rotation_axis(crate::spin::Axis::Y, PI)?;
    let mut vecs = Vec::with_capacity(8);
    for l in 0..4 {
        vecs.push(rz(l as f64).dot(&eta));
    }
    let flipped = ry_pi.dot(&eta);
    for l in 0..4 {
        vecs.push(rz(l as f64).dot(&flipped));
    }
    let state = qc_3d_n6_state();
    let vecs = fix_antiunitary_phases(&sys, &state, 3, vecs);
    let povm = Povm::from_vectors(vecs)?;
    assemble(&sys, 3, state, povm, MeasurementClass::Povm)
}

/// Cube state sqrt(7/12)|4,0> - sqrt(5/24)(|4,4> + |4,-4>), oriented so the
/// cube faces line up with the measurement below (the all-positive sign
/// pattern is the same constellation rotated by pi/4 about z).
pub fn qc_3d_n8_state() -> CVec {
    let mut v = CVec::zeros(9);
    v[4] = cr((7.0f64 / 12.0).sqrt());
    let a = cr(-(5.0f64 / 24.0).sqrt());
    v[0] = a;
    v[8] = a;
    v
}

fn qc_3d_n8(mirror: bool) -> Result<SensorSolution> {
    let sys = make_spin_system(8)?;
    let s5 = 5.0f64.sqrt();
    let r775 = (77.0f64 / 5.0).sqrt();
    // first group: the pair of face estimators
    let e_re = (r775 - 2.0) / 12.0;
    let e_mid = (83.0 / 10.0 + 2.0 * r775).sqrt() / 6.0;
    let mut mu1 = CVec::zeros(9);
    mu1[0] = c(e_re, -1.0 / s5);
    mu1[4] = cr(e_mid);
    mu1[8] = c(e_re, 1.0 / s5);
    let ry_pi = sys.rotation_axis(crate::spin::Axis::Y, PI)?;
    let mu2 = ry_pi.dot(&mu1);

    // Second-group fiducial, antiunitary-invariant pattern. The sign layout
    // is the one that maximizes the second-order cost term together with
    // the state orientation above (C2 = -(4240 - 320 sqrt385 / 3), and all
    // scalar second-derivative terms vanish); its componentwise conjugate
    // is the opposite-chirality solution.
    let x2 = 1.0 / (4.0 * s5);
    let x5 = 0.25;
    let x6 = 0.25;
    let r75 = (7.0f64 / 5.0).sqrt();
    let s11 = 11.0f64.sqrt();
    let x7 = -0.125 * (4.0 + 2.0 * r75 - 3.0 / s5).sqrt();
    let x8 = 0.125 * (4.0 - 2.0 * r75 + 3.0 / s5).sqrt();
    let x3 = x8;
    let x4 = x7;
    let x1 = (r75 + s11 / 2.0) / 12.0;
    let x9 = -(97.0 / 10.0 - 2.0 * r775).sqrt() / 12.0;
    let eta = CVec::from_vec(vec![
        c(x1, x2),
        c(x3, x4),
        c(x5, x6),
        c(x7, x8),
        cr(x9),
        c(-x7, x8),
        c(x5, -x6),
        c(-x3, x4),
        c(x1, -x2),
    ]);
    let rz = |l: f64| sys.rotation_axis(crate::spin::Axis::Z, PI / 2.0 * l).unwrap();
    let mut vecs = vec![mu1, mu2];
    for l in 0..4 {
        vecs.push(rz(l as f64).dot(&eta));
    }
    let flipped = ry_pi.dot(&eta);
    for l in 0..4 {
        vecs.push(rz(l as f64).dot(&flipped));
    }
    if mirror {
        vecs = vecs
            .into_iter()
            .map(|v| v.mapv(|z| z.conj()))
            .collect();
    }
    let state = qc_3d_n8_state();
    let vecs = fix_antiunitary_phases(&sys, &state, 3, vecs);
    let povm = Povm::from_vectors(vecs)?;
    assemble(&sys, 3, state, povm, MeasurementClass::Povm)
}

/// Second printed chirality of the N = 8 solution.
pub fn qc_3d_n8_mirror() -> Result<SensorSolution> {
    qc_3d_n8(true)
}

/// Icosahedron state (sqrt(11)|6,0> - sqrt(7)(|6,5> - |6,-5>)) / 5, in the
/// vertex-up orientation whose y-rotation by arctan(3 - sqrt5) gives the
/// face-up form below.
pub fn qc_3d_n12_state() -> CVec {
    let mut v = CVec::zeros(13);
    v[6] = cr(11.0f64.sqrt() / 5.0);
    let a = 7.0f64.sqrt() / 5.0;
    v[1] = cr(-a); // m = 5
    v[11] = cr(a); // m = -5
    v
}

/// The same state rotated so a constellation face normal points along z:
/// (1/(9 sqrt3)){2 sqrt7, 0, 0, -sqrt77, 0, 0, -sqrt33, 0, 0, sqrt77, 0, 0,
/// 2 sqrt7}.
pub fn qc_3d_n12_state_face_up() -> CVec {
    let norm = 1.0 / (9.0 * 3.0f64.sqrt());
    let mut v = CVec::zeros(13);
    v[0] = cr(2.0 * 7.0f64.sqrt() * norm);
    v[3] = cr(-77.0f64.sqrt() * norm);
    v[6] = cr(-33.0f64.sqrt() * norm);
    v[9] = cr(77.0f64.sqrt() * norm);
    v[12] = cr(2.0 * 7.0f64.sqrt() * norm);
    v
}

fn qc_3d_n12() -> Result<SensorSolution> {
    let sys = make_spin_system(12)?;
    let s5 = 5.0f64.sqrt();
    let s770 = 770.0f64.sqrt();
    let x1 = (195.0 - 10.0 * s770 / 3.0).sqrt() / 45.0;
    let x2 = (93.0 / 10.0 + s770 / 3.0).sqrt() / 18.0;
    let x3 = (81.0 / 20.0 + (77.0f64 / 10.0).sqrt()).sqrt() / 9.0;
    let y1 = (33.0f64.sqrt() - 6.0) / (9.0 * 10.0f64.sqrt());
    let y2 = (4.0 * (2.0f64 / 15.0).sqrt() + (11.0f64 / 10.0).sqrt()) / 6.0;
    let mut eta = CVec::zeros(13);
    eta[0] = c(x1, y1);
    eta[3] = c(x2, y2);
    eta[6] = cr(x3);
    eta[9] = c(-x2, y2);
    eta[12] = c(x1, -y1);

    // Nine more elements from five-fold rotations about a vertex of the top
    // face followed by z rotations; the remaining ten are the y-flip of the
    // first ten. The vertex axis is the icosahedral C5 direction adjacent
    // to the top face: sin^2 = (2/3)(1 - 1/sqrt5), cos^2 = (1/3)(1 + 2/sqrt5).
    let h_axis = [
        (2.0 / 3.0 * (1.0 - 1.0 / s5)).sqrt(),
        0.0,
        (1.0 / 3.0 * (1.0 + 2.0 / s5)).sqrt(),
    ];
    let rz = |angle: f64| sys.rotation_axis(crate::spin::Axis::Z, angle).unwrap();
    let ry_pi = sys.rotation_axis(crate::spin::Axis::Y, PI)?;
    let mut vecs = vec![eta.clone()];
    for k in 1..=3 {
        for l in 1..=3 {
            let vert = sys.rotation(&h_axis, 2.0 * PI / 5.0 * l as f64)?;
            let v = rz(-2.0 * PI / 3.0 * (k as f64 - 1.0)).dot(&vert.dot(&eta));
            vecs.push(v);
        }
    }
    let first_ten: Vec<CVec> = vecs.clone();
    for v in &first_ten {
        vecs.push(ry_pi.dot(v));
    }
    let state = qc_3d_n12_state_face_up();
    let vecs = fix_antiunitary_phases(&sys, &state, 3, vecs);
    let povm = Povm::from_vectors(vecs)?;
    assemble(&sys, 3, state, povm, MeasurementClass::Povm)
}

/// GHZ state for N = 3 in the spin-3/2 space.
pub fn qc_3d_n3_state() -> CVec {
    let mut v = CVec::zeros(4);
    let a = cr(1.0 / 2.0f64.sqrt());
    v[0] = a;
    v[3] = a;
    v
}

/// N = 3 compass with projective measurement (isotropic-prior solution).
pub fn qc_3d_n3_pm() -> Result<SensorSolution> {
    let sys = make_spin_system(3)?;
    let half = cr(0.5);
    let ih = c(0.0, 0.5);
    let basis = vec![
        CVec::from_vec(vec![half, half, ih, -ih]),
        CVec::from_vec(vec![half, -half, -ih, -ih]),
        CVec::from_vec(vec![half, -half, ih, ih]),
        CVec::from_vec(vec![half, half, -ih, ih]),
    ];
    let povm = Povm::from_vectors(basis)?;
    assemble(&sys, 3, qc_3d_n3_state(), povm, MeasurementClass::Projective)
}

/// N = 3 compass with a 5-element POVM (anisotropic-prior solution).
pub fn qc_3d_n3_povm() -> Result<SensorSolution> {
    let sys = make_spin_system(3)?;
    let s3 = 3.0f64.sqrt();
    let x = -((6.0 - s3) / 33.0).sqrt();
    let y = -0.5 * ((2.0 * s3 - 1.0) / 11.0).sqrt();
    let mu1 = CVec::from_vec(vec![cr(x), cr(1.0 / s3), cr(-1.0 / s3), cr(x)]);
    let rz = |angle: f64| sys.rotation_axis(crate::spin::Axis::Z, angle).unwrap();
    let mu2 = rz(2.0 * PI / 3.0).dot(&mu1);
    let mu3 = rz(-2.0 * PI / 3.0).dot(&mu1);
    let mu4 = CVec::from_vec(vec![c(y, 0.5), cr(0.0), cr(0.0), c(y, -0.5)]);
    let rx_pi = sys.rotation_axis(crate::spin::Axis::X, PI)?;
    let mu5 = rx_pi.dot(&mu4);
    let povm = Povm::from_vectors(vec![mu1, mu2, mu3, mu4, mu5])?;
    assemble(&sys, 3, qc_3d_n3_state(), povm, MeasurementClass::Povm)
}

/// Conjectured N = 32 compass input state: pentakis dodecahedron
/// constellation (normalized here).
pub fn state_3d_n32() -> CVec {
    let mut v = CVec::zeros(33);
    let set = |v: &mut CVec, m: i32, x: f64| {
        let idx = (16 - m) as usize;
        v[idx] = cr(x);
    };
    let a15 = 1.0 / (4.0 * 2.0f64.sqrt());
    set(&mut v, 15, a15);
    set(&mut v, -15, -a15);
    let a10 = -(217.0f64 / 29.0).sqrt() / 12.0;
    set(&mut v, 10, a10);
    set(&mut v, -10, a10);
    let a5 = (2015.0f64 / 4002.0).sqrt() / 4.0;
    set(&mut v, 5, -a5);
    set(&mut v, -5, a5);
    set(&mut v, 0, (5890.0f64 / 11339.0).sqrt() / 3.0);
    normalize(&v)
}

/// Multiply each measurement vector by a phase so ray amplitudes
/// <mu|psi_(t n)> are real for antiunitary-symmetric sensors.
///
/// The phase is fixed from a generic probe point; the reality along full
/// rays is then a consequence of the symmetry (and is tested, not assumed).
fn fix_antiunitary_phases(sys: &SpinSystem, psi: &CVec, d: usize, vecs: Vec<CVec>) -> Vec<CVec> {
    let probes: [&[f64]; 3] = [&[0.37, 0.21, 0.1], &[0.11, -0.43, 0.27], &[0.05, 0.33, -0.51]];
    vecs.into_iter()
        .map(|v| {
            for probe in probes {
                let psi_phi = match sys.encode(psi, &probe[..d]) {
                    Ok(p) => p,
                    Err(_) => return v,
                };
                let a = inner(&v, &psi_phi);
                if a.norm() > 1e-6 {
                    let phase = a / a.norm();
                    return v.mapv(|z| z * phase);
                }
            }
            v
        })
        .collect()
}

/// Names understood by `by_name` / the CLI `catalog` commands.
pub fn catalog_names() -> Vec<&'static str> {
    vec![
        "ghz1d-n2",
        "ghz1d-n3",
        "ghz1d-n4",
        "ghz1d-n6",
        "ghz1d-n8",
        "qc2d-n2",
        "qc2d-n4",
        "qc2d-n5",
        "qc2d-n6",
        "qc2d-n8",
        "qc3d-n3-pm",
        "qc3d-n3-povm",
        "qc3d-n4",
        "qc3d-n6",
        "qc3d-n8",
        "qc3d-n8-mirror",
        "qc3d-n12",
        "sld2d-n4",
    ]
}

/// Construct a catalog sensor by name.
pub fn by_name(name: &str) -> Result<SensorSolution> {
    if let Some(rest) = name.strip_prefix("ghz1d-n") {
        let n: u32 = rest
            .parse()
            .map_err(|_| Error::invalid(format!("bad catalog name {name}")))?;
        return ghz_1d(n, 0.0);
    }
    if let Some(rest) = name.strip_prefix("qc2d-n") {
        let n: u32 = rest
            .parse()
            .map_err(|_| Error::invalid(format!("bad catalog name {name}")))?;
        return if n % 2 == 0 { qc_2d_even(n) } else { qc_2d_odd(n) };
    }
    match name {
        "qc3d-n3-pm" => qc_3d_n3_pm(),
        "qc3d-n3-povm" => qc_3d_n3_povm(),
        "qc3d-n4" => qc_3d(4),
        "qc3d-n6" => qc_3d(6),
        "qc3d-n8" => qc_3d(8),
        "qc3d-n8-mirror" => qc_3d_n8_mirror(),
        "qc3d-n12" => qc_3d(12),
        "sld2d-n4" => sld_sensor_2d_n4(),
        _ => Err(Error::invalid(format!("unknown catalog entry {name}"))),
    }
}

/// The SLD-based reference sensor: |2,0> with the measurement built from
/// the state-derivative span at phi = 0.
pub fn sld_sensor_2d_n4() -> Result<SensorSolution> {
    let sys = make_spin_system(4)?;
    let psi = sys.jm_state(0)?;
    let povm = crate::info::sld_povm(&sys, &psi, &[0.0, 0.0])?;
    assemble(&sys, 2, psi, povm, MeasurementClass::Povm)
}
