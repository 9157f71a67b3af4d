//! Collective spin-J algebra: operators, SU(2) phase encoding, exact
//! parametric derivatives, rotations and one-axis twisting.
//!
//! Basis convention: |J,m> with m descending, so index 0 is m = +J and the
//! last index is m = -J. All catalog state vectors in this crate follow this
//! ordering.

use ndarray::Array1;

use crate::error::{Error, Result};
use crate::linalg::{self, c, cr, dagger, CMat, CVec};

/// Phase vector, length d in {1, 2, 3}, radians.
pub type PhasePoint = Vec<f64>;

/// sinc(x) = sin(x)/x with sinc(0) = 1; series near zero to avoid cancellation.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Collective spin system of N spin-1/2 atoms living in the fully symmetric
/// subspace: a single spin J = N/2 with dimension 2J+1.
#[derive(Debug, Clone)]
pub struct SpinSystem {
    n_atoms: u32,
    dim: usize,
    jx: CMat,
    jy: CMat,
    jz: CMat,
    /// Eigenvectors of Jy as columns, eigenvalue m descending (m = J..-J),
    /// used to build rotations about arbitrary axes exactly.
    jy_vecs: CMat,
}

impl SpinSystem {
    pub fn n_atoms(&self) -> u32 {
        self.n_atoms
    }

    /// Total spin J = N/2.
    pub fn j(&self) -> f64 {
        self.n_atoms as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// m value of basis index k (descending: k=0 -> m=J).
    pub fn m_of(&self, k: usize) -> f64 {
        self.j() - k as f64
    }

    pub fn jx(&self) -> &CMat {
        &self.jx
    }
    pub fn jy(&self) -> &CMat {
        &self.jy
    }
    pub fn jz(&self) -> &CMat {
        &self.jz
    }

    pub fn generator(&self, axis: Axis) -> &CMat {
        match axis {
            Axis::X => &self.jx,
            Axis::Y => &self.jy,
            Axis::Z => &self.jz,
        }
    }

    /// Basis state |J,m> for the given index (0 -> m=J).
    pub fn basis_state(&self, index: usize) -> CVec {
        let mut v = CVec::zeros(self.dim);
        v[index] = cr(1.0);
        v
    }

    /// |J,m> by m value; m must be J, J-1, ..., -J.
    pub fn jm_state(&self, m2: i32) -> Result<CVec> {
        let j2 = self.n_atoms as i32;
        if (j2 - m2) % 2 != 0 || m2.abs() > j2 {
            return Err(Error::invalid(format!(
                "m = {}/2 is not a valid projection for J = {}/2",
                m2, j2
            )));
        }
        Ok(self.basis_state(((j2 - m2) / 2) as usize))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Build the collective spin operators for N atoms.
pub fn make_spin_system(n_atoms: u32) -> Result<SpinSystem> {
    if n_atoms == 0 {
        return Err(Error::invalid("atom count must be >= 1"));
    }
    let dim = n_atoms as usize + 1;
    let j = n_atoms as f64 / 2.0;
    let mut jz = CMat::zeros((dim, dim));
    let mut jp = CMat::zeros((dim, dim)); // raising operator J+
    for k in 0..dim {
        let m = j - k as f64;
        jz[(k, k)] = cr(m);
        // J+ |J,m> = sqrt(J(J+1) - m(m+1)) |J,m+1>; |J,m+1> is index k-1.
        if k > 0 {
            jp[(k - 1, k)] = cr((j * (j + 1.0) - m * (m + 1.0)).sqrt());
        }
    }
    let jm = dagger(&jp);
    let jx = (&jp + &jm).mapv(|z| z * 0.5);
    let jy = (&jp - &jm).mapv(|z| z * c(0.0, -0.5));

    // One-time diagonalization of Jy; eigenvalues are exactly J..-J, so we
    // only need the eigenvectors, reordered to descending m.
    let (vals, vecs) = linalg::eigh(&jy);
    let mut jy_vecs = CMat::zeros((dim, dim));
    for col in 0..dim {
        // eigh sorts ascending; descending m means reversed order.
        let src = dim - 1 - col;
        debug_assert!((vals[src] - (j - col as f64)).abs() < 1e-9);
        let v = linalg::fix_phase(&vecs.column(src).to_owned());
        for r in 0..dim {
            jy_vecs[(r, col)] = v[r];
        }
    }

    Ok(SpinSystem {
        n_atoms,
        dim,
        jx,
        jy,
        jz,
        jy_vecs,
    })
}

impl SpinSystem {
    /// exp(-i angle Jy) as a matrix, from the cached Jy eigenbasis.
    fn rot_y(&self, angle: f64) -> CMat {
        let mut scaled = self.jy_vecs.clone();
        for col in 0..self.dim {
            let m = self.j() - col as f64;
            let ph = c(0.0, -angle * m).exp();
            for r in 0..self.dim {
                scaled[(r, col)] *= ph;
            }
        }
        scaled.dot(&dagger(&self.jy_vecs))
    }

    /// exp(-i angle Jz): diagonal phases.
    fn rot_z_diag(&self, angle: f64) -> CVec {
        Array1::from_iter((0..self.dim).map(|k| c(0.0, -angle * self.m_of(k)).exp()))
    }

    fn apply_rot_z(&self, angle: f64, v: &mut CVec) {
        for k in 0..self.dim {
            v[k] *= c(0.0, -angle * self.m_of(k)).exp();
        }
    }

    fn apply_rot_y(&self, angle: f64, v: &CVec) -> CVec {
        // Vy e^{-i angle diag(m)} Vy^dag v
        let mut w = dagger(&self.jy_vecs).dot(v);
        for k in 0..self.dim {
            w[k] *= c(0.0, -angle * self.m_of(k)).exp();
        }
        self.jy_vecs.dot(&w)
    }

    /// Embed a phase point into a 3-vector of generator weights.
    /// d=1 encodes along Jz, d=2 along (Jx, Jy), d=3 along (Jx, Jy, Jz).
    pub fn phase_to_vec3(&self, phi: &[f64]) -> Result<[f64; 3]> {
        match phi.len() {
            1 => Ok([0.0, 0.0, phi[0]]),
            2 => Ok([phi[0], phi[1], 0.0]),
            3 => Ok([phi[0], phi[1], phi[2]]),
            d => Err(Error::invalid(format!("phase dimension {d} not in 1..=3"))),
        }
    }

    /// Apply the encoding unitary U(phi) = exp(-i phi . J) to a state.
    /// Exact via the axis-angle decomposition U = R e^{-i t Jz} R^dag.
    pub fn encode(&self, psi_in: &CVec, phi: &[f64]) -> Result<CVec> {
        if psi_in.len() != self.dim {
            return Err(Error::invalid("state dimension mismatch"));
        }
        let v3 = self.phase_to_vec3(phi)?;
        if !v3.iter().all(|x| x.is_finite()) {
            return Err(Error::invalid("non-finite phase"));
        }
        let t = (v3[0] * v3[0] + v3[1] * v3[1] + v3[2] * v3[2]).sqrt();
        if t == 0.0 {
            return Ok(psi_in.clone());
        }
        let (theta, azim) = axis_angles(&v3, t);
        // R^dag psi: e^{+i theta Jy} then e^{+i azim Jz} reversed order:
        // R = Rz(azim) Ry(theta) => R^dag = Ry(-theta) Rz(-azim).
        let mut w = psi_in.clone();
        self.apply_rot_z(-azim, &mut w);
        let mut w = self.apply_rot_y(-theta, &w);
        for k in 0..self.dim {
            w[k] *= c(0.0, -t * self.m_of(k)).exp();
        }
        let w2 = self.apply_rot_y(theta, &w);
        let mut out = w2;
        self.apply_rot_z(azim, &mut out);
        Ok(out)
    }

    /// The encoding unitary as an explicit matrix.
    pub fn encode_unitary(&self, phi: &[f64]) -> Result<CMat> {
        let v3 = self.phase_to_vec3(phi)?;
        let t = (v3[0] * v3[0] + v3[1] * v3[1] + v3[2] * v3[2]).sqrt();
        if t == 0.0 {
            return Ok(linalg::identity(self.dim));
        }
        let (theta, azim) = axis_angles(&v3, t);
        Ok(self.axis_rotation_matrix(theta, azim, t))
    }

    /// exp(-i t n.J) where n is given by polar/azimuthal angles.
    fn axis_rotation_matrix(&self, theta: f64, azim: f64, t: f64) -> CMat {
        // R = Rz(azim) Ry(theta); U = R e^{-i t Jz} R^dag
        let ry = self.rot_y(theta);
        let rz = self.rot_z_diag(azim);
        let dim = self.dim;
        let mut r = ry;
        for row in 0..dim {
            for col in 0..dim {
                r[(row, col)] *= rz[row];
            }
        }
        let mut rd = dagger(&r);
        for row in 0..dim {
            let ph = c(0.0, -t * self.m_of(row)).exp();
            for col in 0..dim {
                rd[(row, col)] *= ph;
            }
        }
        r.dot(&rd)
    }

    /// Rotation exp(-i angle n.J) about a named axis or arbitrary unit vector.
    pub fn rotation(&self, axis: &[f64; 3], angle: f64) -> Result<CMat> {
        if !angle.is_finite() {
            return Err(Error::invalid("non-finite rotation angle"));
        }
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if n < 1e-14 {
            return Err(Error::invalid("zero-length rotation axis"));
        }
        let v3 = [axis[0] / n, axis[1] / n, axis[2] / n];
        let (theta, azim) = axis_angles(&v3, 1.0);
        Ok(self.axis_rotation_matrix(theta, azim, angle))
    }

    pub fn rotation_axis(&self, axis: Axis, angle: f64) -> Result<CMat> {
        let n = match axis {
            Axis::X => [1.0, 0.0, 0.0],
            Axis::Y => [0.0, 1.0, 0.0],
            Axis::Z => [0.0, 0.0, 1.0],
        };
        self.rotation(&n, angle)
    }

    /// One-axis twisting exp(-i angle Jz^2): diagonal.
    pub fn oat(&self, angle: f64) -> Result<CMat> {
        if !angle.is_finite() {
            return Err(Error::invalid("non-finite twisting angle"));
        }
        let mut u = CMat::zeros((self.dim, self.dim));
        for k in 0..self.dim {
            let m = self.m_of(k);
            u[(k, k)] = c(0.0, -angle * m * m).exp();
        }
        Ok(u)
    }

    /// The operators A_i(phi) entering the exact parametric derivative
    /// |d_i psi> = -i U(phi) A_i(phi) |psi_in>. At phi = 0, A_i = J_i.
    pub fn derivative_generators(&self, phi: &[f64]) -> Result<Vec<CMat>> {
        let d = phi.len();
        let v3 = self.phase_to_vec3(phi)?;
        let t = (v3[0] * v3[0] + v3[1] * v3[1] + v3[2] * v3[2]).sqrt();
        let gens = [&self.jx, &self.jy, &self.jz];
        let axes: Vec<usize> = match d {
            1 => vec![2],
            2 => vec![0, 1],
            3 => vec![0, 1, 2],
            _ => unreachable!(),
        };
        if t < 1e-300 {
            return Ok(axes.iter().map(|&i| gens[i].clone()).collect());
        }
        let n = [v3[0] / t, v3[1] / t, v3[2] / t];
        let s1 = sinc(t);
        let s2 = sinc(t / 2.0);
        let half_t_s2sq = 0.5 * t * s2 * s2;
        let mut out = Vec::with_capacity(d);
        for &i in &axes {
            let j = (i + 1) % 3;
            let k = (i + 2) % 3;
            let ci = n[i] * n[i] + s1 * (1.0 - n[i] * n[i]);
            let cj = n[i] * n[j] * (1.0 - s1) - n[k] * half_t_s2sq;
            let ck = n[k] * n[i] * (1.0 - s1) + n[j] * half_t_s2sq;
            let a = gens[i].mapv(|z| z * ci) + gens[j].mapv(|z| z * cj) + gens[k].mapv(|z| z * ck);
            out.push(a);
        }
        Ok(out)
    }

    /// Exact derivatives |d_{phi_i} psi_phi> for i = 1..d. Not normalized.
    pub fn derivative_states(&self, psi_in: &CVec, phi: &[f64]) -> Result<Vec<CVec>> {
        let a_ops = self.derivative_generators(phi)?;
        let mut out = Vec::with_capacity(a_ops.len());
        for a in &a_ops {
            let v = a.dot(psi_in);
            let encoded = self.encode(&v, phi)?;
            out.push(encoded.mapv(|z| z * c(0.0, -1.0)));
        }
        Ok(out)
    }
}

fn axis_angles(v3: &[f64; 3], t: f64) -> (f64, f64) {
    let nz = (v3[2] / t).clamp(-1.0, 1.0);
    let theta = nz.acos();
    let azim = if v3[0] == 0.0 && v3[1] == 0.0 {
        0.0
    } else {
        v3[1].atan2(v3[0])
    };
    (theta, azim)
}
