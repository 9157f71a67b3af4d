//! Fisher and quantum Fisher information, SLD-based measurement
//! construction, the quasiclassicality check, and closed-form Heisenberg
//! limits for two- and three-parameter SU(2) sensing.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::linalg::{self, commutator, expectation, identity, inner, CMat, CVec};
use crate::povm::Povm;
use crate::spin::{sinc, SpinSystem};

/// Probability floor below which an outcome counts as unobserved.
pub const P_FLOOR: f64 = 1e-14;
/// Gradient threshold distinguishing a harmless zero from a singular outcome.
pub const GRAD_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfoKind {
    Classical,
    Quantum,
    HigherOrder(u8),
}

/// Real symmetric information matrix.
#[derive(Debug, Clone)]
pub struct InfoMatrix {
    pub entries: Array2<f64>,
    pub kind: InfoKind,
}

impl InfoMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.entries[(i, i)]).sum()
    }

    pub fn inverse(&self) -> Result<Array2<f64>> {
        linalg::inv_real(&self.entries)
    }

    /// Tr of the inverse; +infinity when singular.
    pub fn inverse_trace(&self) -> f64 {
        match self.inverse() {
            Ok(inv) => (0..self.dim()).map(|i| inv[(i, i)]).sum(),
            Err(_) => f64::INFINITY,
        }
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let complex = self.entries.mapv(|x| linalg::cr(x));
        linalg::eigh(&complex).0
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues().last().copied().unwrap_or(0.0)
    }
}

/// Conditional outcome probabilities p(mu | phi), clamped at zero and
/// summing to one.
pub fn cond_probs(sys: &SpinSystem, psi_in: &CVec, povm: &Povm, phi: &[f64]) -> Result<Vec<f64>> {
    povm.validate()?;
    let psi_phi = sys.encode(psi_in, phi)?;
    Ok(probs_of_state(povm, &psi_phi))
}

/// Probabilities for an already-encoded state. Assumes the POVM is valid.
pub fn probs_of_state(povm: &Povm, psi_phi: &CVec) -> Vec<f64> {
    if let Some(vectors) = povm.vectors() {
        return vectors
            .iter()
            .map(|v| inner(v, psi_phi).norm_sqr().max(0.0))
            .collect();
    }
    povm.effects()
        .iter()
        .map(|m| expectation(m, psi_phi).re.max(0.0))
        .collect()
}

/// Probabilities and their gradients with respect to phi.
pub fn probs_and_grads(
    sys: &SpinSystem,
    psi_in: &CVec,
    povm: &Povm,
    phi: &[f64],
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let d = phi.len();
    let psi_phi = sys.encode(psi_in, phi)?;
    let dpsi = sys.derivative_states(psi_in, phi)?;
    let probs = probs_of_state(povm, &psi_phi);
    let mut grads = vec![vec![0.0; d]; povm.len()];
    if let Some(vectors) = povm.vectors() {
        for (mu, v) in vectors.iter().enumerate() {
            let a = inner(v, &psi_phi);
            for i in 0..d {
                grads[mu][i] = 2.0 * (a.conj() * inner(v, &dpsi[i])).re;
            }
        }
    } else {
        for (mu, m) in povm.effects().iter().enumerate() {
            for i in 0..d {
                grads[mu][i] = 2.0 * inner(&psi_phi, &m.dot(&dpsi[i])).re;
            }
        }
    }
    Ok((probs, grads))
}

/// Classical Fisher information matrix of (state, POVM) at phi.
#[derive(Debug, Clone)]
pub struct FimReport {
    pub info: InfoMatrix,
    /// Outcomes with vanishing probability but non-vanishing gradient.
    pub singular_outcomes: Vec<usize>,
}

pub fn fim(sys: &SpinSystem, psi_in: &CVec, povm: &Povm, phi: &[f64]) -> Result<FimReport> {
    povm.validate()?;
    let d = phi.len();
    let psi_phi = sys.encode(psi_in, phi)?;
    let dpsi = sys.derivative_states(psi_in, phi)?;
    let mut f = Array2::<f64>::zeros((d, d));
    let mut singular = Vec::new();
    for (mu, m) in povm.effects().iter().enumerate() {
        let p = expectation(m, &psi_phi).re.max(0.0);
        if p >= P_FLOOR {
            let mut grad = vec![0.0; d];
            for i in 0..d {
                grad[i] = 2.0 * inner(&psi_phi, &m.dot(&dpsi[i])).re;
            }
            for i in 0..d {
                for j in 0..d {
                    f[(i, j)] += grad[i] * grad[j] / p;
                }
            }
            continue;
        }
        // Probability zero at phi. With M >= 0 this forces M|psi_phi> ~ 0,
        // so p grows quadratically and the F contribution has the finite
        // limit 4 B with B_ij = Re<d_i psi|M|d_j psi> -- provided B is
        // rank one (otherwise the limit is direction dependent and the
        // outcome is reported as singular). Compass measurements hit such
        // zeros at legitimate phases, so the limit matters.
        let mdp: Vec<CVec> = (0..d).map(|i| m.dot(&dpsi[i])).collect();
        let mut b = Array2::<f64>::zeros((d, d));
        for i in 0..d {
            for j in 0..d {
                b[(i, j)] = inner(&dpsi[i], &mdp[j]).re;
            }
        }
        let evs = InfoMatrix {
            entries: b.clone(),
            kind: InfoKind::Classical,
        }
        .eigenvalues();
        let lmax = evs.last().copied().unwrap_or(0.0);
        if lmax <= 1e-9 {
            continue; // flat outcome, contributes nothing
        }
        let second = if evs.len() >= 2 { evs[evs.len() - 2] } else { 0.0 };
        if second.abs() <= 1e-7 * lmax {
            for i in 0..d {
                for j in 0..d {
                    f[(i, j)] += 4.0 * b[(i, j)];
                }
            }
        } else {
            singular.push(mu);
        }
    }
    Ok(FimReport {
        info: InfoMatrix {
            entries: f,
            kind: InfoKind::Classical,
        },
        singular_outcomes: singular,
    })
}

/// Quantum Fisher information matrix for a pure state under unitary encoding.
pub fn qfim(sys: &SpinSystem, psi_in: &CVec, phi: &[f64]) -> Result<InfoMatrix> {
    let d = phi.len();
    let psi_phi = sys.encode(psi_in, phi)?;
    let dpsi = sys.derivative_states(psi_in, phi)?;
    let mut f = Array2::<f64>::zeros((d, d));
    for i in 0..d {
        for j in 0..d {
            let term = inner(&dpsi[i], &dpsi[j]) - inner(&dpsi[i], &psi_phi) * inner(&psi_phi, &dpsi[j]);
            f[(i, j)] = 4.0 * term.re;
        }
    }
    Ok(InfoMatrix {
        entries: f,
        kind: InfoKind::Quantum,
    })
}

/// Symmetric logarithmic derivatives L_i = 2(|d_i psi><psi| + |psi><d_i psi|).
pub fn sld(sys: &SpinSystem, psi_in: &CVec, phi: &[f64]) -> Result<Vec<CMat>> {
    let psi_phi = sys.encode(psi_in, phi)?;
    let dpsi = sys.derivative_states(psi_in, phi)?;
    Ok(dpsi
        .iter()
        .map(|dp| {
            let a = linalg::outer(dp, &psi_phi);
            let b = linalg::outer(&psi_phi, dp);
            (&a + &b).mapv(|z| z * 2.0)
        })
        .collect())
}

/// Largest |<[A_i, A_j]>| over generator pairs; zero means the QCRB is
/// saturable at phi (quasiclassical model).
pub fn quasiclassical_check(sys: &SpinSystem, psi_in: &CVec, phi: &[f64]) -> Result<f64> {
    let a_ops = sys.derivative_generators(phi)?;
    let mut worst = 0.0f64;
    for i in 0..a_ops.len() {
        for j in (i + 1)..a_ops.len() {
            let val = expectation(&commutator(&a_ops[i], &a_ops[j]), psi_in);
            worst = worst.max(val.norm());
        }
    }
    Ok(worst)
}

/// POVM with d+2 elements built from the span of the encoded state and its
/// derivatives {xi_0, xi_i} by Gram-Schmidt, plus a completeness remainder.
pub fn sld_povm(sys: &SpinSystem, psi_in: &CVec, phi: &[f64]) -> Result<Povm> {
    let psi_phi = sys.encode(psi_in, phi)?;
    let dpsi = sys.derivative_states(psi_in, phi)?;
    let mut span = vec![psi_phi];
    span.extend(dpsi);

    // Gram matrix condition guards against the |phi| = 2 n pi degeneracy.
    let k = span.len();
    let mut gram = CMat::zeros((k, k));
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = inner(&span[i], &span[j]);
        }
    }
    let (vals, _) = linalg::eigh(&gram);
    let lmax = vals.last().copied().unwrap_or(0.0);
    if vals[0] < 1e-12 * lmax.max(1e-300) {
        return Err(Error::DegenerateInput(format!(
            "state-derivative span is rank deficient (Gram eigenvalues {:.3e} .. {:.3e})",
            vals[0], lmax
        )));
    }
    let basis = linalg::gram_schmidt(&span, 1e-9)?;
    let dim = sys.dim();
    let mut effects: Vec<CMat> = basis.iter().map(|b| linalg::outer(b, b)).collect();
    let mut rest = identity(dim);
    for e in &effects {
        rest = rest - e;
    }
    effects.push(rest);
    let mut labels: Vec<String> = (0..k).map(|i| format!("sld{i}")).collect();
    labels.push("rest".into());
    Povm::with_labels(effects, labels)
}

/// Two-parameter Heisenberg limit for N = 4: the QCRB of the interpolating
/// input state family, minimized over the mixing parameter lambda by
/// golden-section search. Returns (bound, lambda*).
pub fn hl_2d(j: f64, phi0_abs: f64) -> Result<(f64, f64)> {
    if (j - 2.0).abs() > 1e-12 {
        return Err(Error::invalid("the 2D HL ansatz is specific to J = 2 (N = 4)"));
    }
    let f = |lambda: f64| hl_2d_qcrb(lambda, phi0_abs);
    let (lam, val) = golden_min(f, 0.0, 3.0f64.sqrt() - 1e-6, 1e-10);
    Ok((val, lam))
}

/// QCRB of the N = 4 two-parameter ansatz state at mixing lambda and bias
/// |phi_0|.
pub fn hl_2d_qcrb(lambda: f64, phi0_abs: f64) -> f64 {
    let s = sinc(phi0_abs / 2.0);
    let sq3 = 3.0f64.sqrt();
    let one_plus = 1.0 + lambda * lambda;
    let t1 = one_plus / ((sq3 + lambda) * s).powi(2);
    let t2 = one_plus / (sq3 - lambda).powi(2);
    0.25 * (t1 + t2)
}

/// Three-parameter phase-dependent Heisenberg limit (integer J > 1).
pub fn hl_3d(j: f64, phi0_abs: f64) -> Result<f64> {
    if j.fract() != 0.0 || j < 2.0 {
        return Err(Error::invalid("the 3D HL formula holds for integer J > 1"));
    }
    let s = sinc(phi0_abs / 2.0).abs();
    if s == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((1.0 + 2.0 / s).powi(2) / (4.0 * j * (j + 1.0)))
}

/// Phase-dependent QCRB curve of the even-N two-parameter compass state.
pub fn qc_2d_even_crb(j: f64, phi_abs: f64) -> f64 {
    let s = sinc(phi_abs);
    (1.0 + 1.0 / (s * s)) / (2.0 * j * (j + 1.0))
}

/// Phase-dependent QCRB curve of the N = 4 three-parameter compass state.
pub fn qc_3d_qcrb(j: f64, phi_abs: f64) -> f64 {
    let s = sinc(phi_abs / 2.0);
    3.0 * (1.0 + 2.0 / (s * s)) / (4.0 * j * (j + 1.0))
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = (a + b) / 2.0;
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cr;
    use crate::spin::make_spin_system;
    use ndarray::Array1;

    fn ghz(sys: &SpinSystem) -> CVec {
        let mut v = CVec::zeros(sys.dim());
        v[0] = cr(1.0 / 2.0f64.sqrt());
        v[sys.dim() - 1] = cr(1.0 / 2.0f64.sqrt());
        v
    }

    /// GHZ measurement pair |psi_+->_theta completed to a POVM.
    fn ghz_povm(sys: &SpinSystem, theta: f64) -> Povm {
        let dim = sys.dim();
        let a = linalg::c(0.0, theta / 2.0).exp() / 2.0f64.sqrt();
        let b = linalg::c(0.0, -theta / 2.0).exp() * linalg::c(0.0, 1.0) / 2.0f64.sqrt();
        let mut plus = Array1::zeros(dim);
        plus[dim - 1] = a; // |J,-J>
        plus[0] = b; // |J,+J>
        let mut minus = Array1::zeros(dim);
        minus[dim - 1] = a;
        minus[0] = -b;
        Povm::from_vectors_completed(vec![plus, minus]).unwrap()
    }

    #[test]
    fn ghz_probabilities_match_closed_form() {
        let sys = make_spin_system(4).unwrap();
        let psi = ghz(&sys);
        let povm = ghz_povm(&sys, 0.0);
        let p = cond_probs(&sys, &psi, &povm, &[0.0]).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-12);
        assert!((p[1] - 0.5).abs() < 1e-12);
        let p = cond_probs(&sys, &psi, &povm, &[std::f64::consts::PI / 8.0]).unwrap();
        assert!(p[0].abs() < 1e-12); // [1 - sin(pi/2)]/2 = 0
        // general phi, theta: p_+- = [1 -+ sin(N phi - theta)]/2
        let theta = 0.7;
        let povm = ghz_povm(&sys, theta);
        for phi in [0.1, -0.35, 1.2] {
            let p = cond_probs(&sys, &psi, &povm, &[phi]).unwrap();
            let want = (1.0 - (4.0 * phi - theta).sin()) / 2.0;
            assert!((p[0] - want).abs() < 1e-12, "phi={phi}");
        }
    }

    #[test]
    fn born_rule_for_z_projectors() {
        let sys = make_spin_system(3).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(9);
        let psi = {
            use rand::Rng;
            let v = CVec::from_shape_fn(sys.dim(), |_| {
                linalg::c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            linalg::normalize(&v)
        };
        let vecs: Vec<CVec> = (0..sys.dim()).map(|k| sys.basis_state(k)).collect();
        let povm = Povm::from_vectors(vecs).unwrap();
        let p = cond_probs(&sys, &psi, &povm, &[0.0]).unwrap();
        for k in 0..sys.dim() {
            assert!((p[k] - psi[k].norm_sqr()).abs() < 1e-12);
        }
    }

    #[test]
    fn ghz_fisher_information_is_n_squared() {
        for n in [2u32, 4, 6] {
            let sys = make_spin_system(n).unwrap();
            let psi = ghz(&sys);
            let povm = ghz_povm(&sys, 0.0);
            let rep = fim(&sys, &psi, &povm, &[0.0]).unwrap();
            assert!(rep.singular_outcomes.is_empty());
            let want = (n * n) as f64;
            assert!(
                (rep.info.entries[(0, 0)] - want).abs() < 1e-8 * want,
                "n={n}"
            );
            let q = qfim(&sys, &psi, &[0.0]).unwrap();
            assert!((q.entries[(0, 0)] - want).abs() < 1e-8 * want);
        }
    }

    #[test]
    fn qfim_reduces_to_variance_for_single_parameter() {
        let sys = make_spin_system(5).unwrap();
        let psi = ghz(&sys);
        let q = qfim(&sys, &psi, &[0.3]).unwrap();
        // 4 var(Jz) for GHZ: 4 J^2
        let j = sys.j();
        assert!((q.entries[(0, 0)] - 4.0 * j * j).abs() < 1e-10);
    }

    #[test]
    fn quasiclassicality_values() {
        let sys = make_spin_system(4).unwrap();
        let m0 = sys.jm_state(0).unwrap();
        for phi in [[0.0, 0.0], [0.4, -0.2], [1.5, 0.9]] {
            let v = quasiclassical_check(&sys, &m0, &phi).unwrap();
            assert!(v < 1e-12, "phi={phi:?} v={v:.2e}");
        }
        let sys3 = make_spin_system(3).unwrap();
        let m_half = sys3.jm_state(1).unwrap();
        let v = quasiclassical_check(&sys3, &m_half, &[0.0, 0.0]).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sld_povm_saturates_qfim_for_quasiclassical_state() {
        let sys = make_spin_system(4).unwrap();
        let m0 = sys.jm_state(0).unwrap();
        let povm = sld_povm(&sys, &m0, &[0.0, 0.0]).unwrap();
        povm.validate().unwrap();
        assert_eq!(povm.len(), 4); // d + 2
        let rep = fim(&sys, &m0, &povm, &[0.0, 0.0]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 12.0 } else { 0.0 };
                assert!((rep.info.entries[(i, j)] - want).abs() < 1e-8);
            }
        }
        // d=1 GHZ: 3-element POVM with F = N^2
        let psi = ghz(&sys);
        let povm = sld_povm(&sys, &psi, &[0.0]).unwrap();
        assert_eq!(povm.len(), 3);
        let rep = fim(&sys, &psi, &povm, &[0.0]).unwrap();
        assert!((rep.info.entries[(0, 0)] - 16.0).abs() < 1e-8);
        // degenerate at |phi| = 2 pi for d=3
        let t = 2.0 * std::f64::consts::PI;
        let err = sld_povm(&sys, &m0, &[t, 0.0, 0.0]);
        assert!(matches!(err, Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn heisenberg_limit_values() {
        let (hl, lam) = hl_2d(2.0, 0.0).unwrap();
        assert!((hl - 1.0 / 6.0).abs() < 1e-9);
        assert!(lam.abs() < 1e-4);
        let hl = hl_3d(2.0, 0.0).unwrap();
        assert!((hl - 3.0 / 8.0).abs() < 1e-12);
        assert!(hl_2d(3.0, 0.0).is_err());
        assert!(hl_3d(1.0, 0.0).is_err());
        assert!(hl_3d(2.5, 0.0).is_err());
        // Approaching |phi_0| = 2 pi the first (sinc) term blows up: the
        // minimizer drifts up towards the stationary point of that term at
        // lambda = 1/sqrt(3) and the bound diverges.
        let mut last_lam = 0.0;
        let mut last_val = 0.0;
        for eps in [0.5, 0.2, 0.05] {
            let (val, lam) = hl_2d(2.0, 2.0 * std::f64::consts::PI - eps).unwrap();
            assert!(lam > last_lam);
            assert!(val > last_val);
            last_lam = lam;
            last_val = val;
        }
        assert!((last_lam - 1.0 / 3.0f64.sqrt()).abs() < 0.02);
        assert!(last_val > 100.0);
    }

    #[test]
    fn fim_bounded_by_qfim_random_instances() {
        use rand::Rng;
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(77);
        for _ in 0..25 {
            let n = rng.random_range(1..=5);
            let sys = make_spin_system(n).unwrap();
            let d = rng.random_range(1..=3usize);
            let psi = {
                let v = CVec::from_shape_fn(sys.dim(), |_| {
                    linalg::c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                });
                linalg::normalize(&v)
            };
            let phi: Vec<f64> = (0..d).map(|_| rng.random::<f64>() - 0.5).collect();
            // random projective measurement from a Haar-ish unitary
            let g = CMat::from_shape_fn((sys.dim(), sys.dim()), |_| {
                linalg::c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            let cols: Vec<CVec> = (0..sys.dim()).map(|j| g.column(j).to_owned()).collect();
            let basis = linalg::gram_schmidt(&cols, 1e-9).unwrap();
            let povm = Povm::from_vectors(basis).unwrap();
            let f = fim(&sys, &psi, &povm, &phi).unwrap().info;
            let q = qfim(&sys, &psi, &phi).unwrap();
            let diff = &q.entries - &f.entries;
            let evs = InfoMatrix {
                entries: diff,
                kind: InfoKind::Classical,
            }
            .eigenvalues();
            assert!(evs[0] > -1e-8, "F not bounded by QFIM: {evs:?}");
        }
    }
}
