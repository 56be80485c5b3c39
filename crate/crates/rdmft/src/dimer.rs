//! Configuration-basis model of the N-boson Hubbard dimer.
//!
//! States live in the (N+1)-dimensional Fock basis |n, N-n> with n
//! bosons on the left site. The Hamiltonian
//!
//! ```text
//! H = -t (b_L^+ b_R + b_R^+ b_L) + v_L n_L + v_R n_R
//!     + U [n_L (n_L - 1) + n_R (n_R - 1)]
//! ```
//!
//! is symmetric tridiagonal in that basis: the hopping term couples
//! |n, N-n> and |n+1, N-n-1> with matrix element -t sqrt((n+1)(N-n)).

// The Float trait supplies sqrt/sin/... in pure no_std builds; when
// std enters the crate graph (tests, std-enabled dependents) the
// inherent f64 methods shadow it and the import goes unused.
#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::DimerError;
use crate::linalg::SymTridiagonal;

/// Relative gap threshold below which the ground state counts as
/// degenerate. Small enough to pass generic points, large enough to
/// flag the exact degeneracy potentials at double precision.
pub const DEGENERACY_THRESHOLD: f64 = 1e-10;

/// Radius below which the polar angle of a 1RDM is undefined.
pub const CENTER_TOLERANCE: f64 = 1e-14;

const NORM_TOLERANCE: f64 = 1e-12;
const DISC_TOLERANCE: f64 = 1e-12;

/// Hamiltonian specification of the N-boson Hubbard dimer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimerParams {
    pub n_particles: usize,
    pub hopping: f64,
    pub potential_left: f64,
    pub potential_right: f64,
    pub interaction: f64,
}

impl DimerParams {
    pub fn new(
        n_particles: usize,
        hopping: f64,
        potential_left: f64,
        potential_right: f64,
        interaction: f64,
    ) -> Result<Self, DimerError> {
        if n_particles < 1 {
            return Err(DimerError::InvalidParams("n_particles must be >= 1"));
        }
        if !(interaction >= 0.0) {
            return Err(DimerError::InvalidParams("interaction must be >= 0"));
        }
        if !hopping.is_finite() || !potential_left.is_finite() || !potential_right.is_finite() {
            return Err(DimerError::InvalidParams("parameters must be finite"));
        }
        Ok(Self {
            n_particles,
            hopping,
            potential_left,
            potential_right,
            interaction,
        })
    }

    /// Symmetric dimer with zero on-site potentials.
    pub fn symmetric(n_particles: usize, hopping: f64, interaction: f64) -> Result<Self, DimerError> {
        Self::new(n_particles, hopping, 0.0, 0.0, interaction)
    }
}

/// Real amplitudes over the configuration basis |n, N-n>.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigurationVector {
    coeffs: Vec<f64>,
}

impl ConfigurationVector {
    /// Accepts coefficients already normalized to within 1e-12.
    pub fn new(coeffs: Vec<f64>) -> Result<Self, DimerError> {
        let norm = crate::linalg::norm(&coeffs);
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(DimerError::NotNormalized { norm });
        }
        Ok(Self { coeffs })
    }

    /// Normalizes the coefficients.
    pub fn normalized(mut coeffs: Vec<f64>) -> Result<Self, DimerError> {
        let norm = crate::linalg::normalize(&mut coeffs);
        if norm == 0.0 {
            return Err(DimerError::NotNormalized { norm });
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn n_particles(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Condensate of N bosons in cos(phi/2)|L> + sin(phi/2)|R>.
    ///
    /// The amplitude of |n, N-n> is sqrt(C(N,n)) a^n b^(N-n) with
    /// a = cos(phi/2), b = sin(phi/2).
    pub fn condensate(n_particles: usize, phi: f64) -> Self {
        let a = (phi / 2.0).cos();
        let b = (phi / 2.0).sin();
        Self::normalized(mode_state_amplitudes(n_particles, n_particles, a, b))
            .expect("condensate amplitudes are nonzero")
    }

    /// Fock state with `m` bosons in the orbital a|L> + b|R> and N-m in
    /// the orthogonal orbital b|L> - a|R>, expressed in the site basis.
    pub fn rotated_fock_state(n_particles: usize, m: usize, phi: f64) -> Self {
        let a = (phi / 2.0).cos();
        let b = (phi / 2.0).sin();
        Self::normalized(mode_state_amplitudes(n_particles, m, a, b))
            .expect("rotated Fock state amplitudes are nonzero")
    }
}

/// Site-basis amplitudes of (b_phi^+)^m (b_perp^+)^(N-m)|0> up to
/// normalization, with b_phi^+ = a b_L^+ + b b_R^+ and
/// b_perp^+ = b b_L^+ - a b_R^+.
fn mode_state_amplitudes(n: usize, m: usize, a: f64, b: f64) -> Vec<f64> {
    // Polynomial (a x + b y)^m (b x - a y)^(N-m); the coefficient of
    // x^k y^(N-k) times sqrt(k! (N-k)!) is the (unnormalized) amplitude.
    let mut poly = vec![0.0; 1];
    poly[0] = 1.0;
    let mul = |poly: &mut Vec<f64>, cx: f64, cy: f64| {
        let mut next = vec![0.0; poly.len() + 1];
        for (k, &c) in poly.iter().enumerate() {
            next[k + 1] += c * cx;
            next[k] += c * cy;
        }
        *poly = next;
    };
    for _ in 0..m {
        mul(&mut poly, a, b);
    }
    for _ in 0..(n - m) {
        mul(&mut poly, b, -a);
    }
    let mut amps = vec![0.0; n + 1];
    let mut log_fact = vec![0.0; n + 1];
    for k in 1..=n {
        log_fact[k] = log_fact[k - 1] + (k as f64).ln();
    }
    for k in 0..=n {
        let w = 0.5 * (log_fact[k] + log_fact[n - k]);
        amps[k] = poly[k] * w.exp();
    }
    amps
}

/// Unit-trace real 2x2 1RDM on the disc
/// `gamma_LR^2 + (gamma_LL - 1/2)^2 <= 1/4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneParticleRdm {
    gamma_ll: f64,
    gamma_lr: f64,
}

impl OneParticleRdm {
    pub fn from_cartesian(gamma_ll: f64, gamma_lr: f64) -> Result<Self, DimerError> {
        let r2 = gamma_lr * gamma_lr + (gamma_ll - 0.5) * (gamma_ll - 0.5);
        if r2 > 0.25 + DISC_TOLERANCE {
            return Err(DimerError::OutsideDisc { gamma_ll, gamma_lr });
        }
        Ok(Self { gamma_ll, gamma_lr })
    }

    /// `gamma_LL = (1 + (1-2D) cos phi) / 2`,
    /// `gamma_LR = (1-2D) sin phi / 2`.
    pub fn from_polar(d: f64, phi: f64) -> Result<Self, DimerError> {
        if !(0.0..=0.5).contains(&d) {
            return Err(DimerError::OutsideDisc {
                gamma_ll: f64::NAN,
                gamma_lr: f64::NAN,
            });
        }
        let r = 0.5 * (1.0 - 2.0 * d);
        Ok(Self {
            gamma_ll: 0.5 + r * phi.cos(),
            gamma_lr: r * phi.sin(),
        })
    }

    pub fn gamma_ll(&self) -> f64 {
        self.gamma_ll
    }

    pub fn gamma_lr(&self) -> f64 {
        self.gamma_lr
    }

    /// Distance to the disc boundary, in [0, 1/2]. Also the smaller
    /// eigenvalue of the 1RDM (the depletion).
    pub fn depletion(&self) -> f64 {
        let r = (self.gamma_lr * self.gamma_lr
            + (self.gamma_ll - 0.5) * (self.gamma_ll - 0.5))
            .sqrt();
        (0.5 - r).max(0.0)
    }

    /// Polar view (D, phi) with phi in [0, 2 pi). Fails at the center,
    /// where the angle is undefined.
    pub fn polar(&self) -> Result<(f64, f64), DimerError> {
        let x = self.gamma_ll - 0.5;
        let r = (self.gamma_lr * self.gamma_lr + x * x).sqrt();
        if r < CENTER_TOLERANCE {
            return Err(DimerError::CenterSingular);
        }
        let mut phi = self.gamma_lr.atan2(x);
        if phi < 0.0 {
            phi += 2.0 * core::f64::consts::PI;
        }
        Ok(((0.5 - r).max(0.0), phi))
    }

    /// Eigenvalues (1-D, D) of the 1RDM, both in [0, 1].
    pub fn eigenvalues(&self) -> (f64, f64) {
        let d = self.depletion();
        (1.0 - d, d)
    }
}

/// Lowest eigenpair of the dimer Hamiltonian plus the gap for
/// degeneracy detection.
#[derive(Debug, Clone)]
pub struct GroundStateResult {
    pub energy: f64,
    pub state: ConfigurationVector,
    pub rdm: OneParticleRdm,
    /// E_1 - E_0 (zero for N = 0-dimensional edge cases).
    pub gap: f64,
}

impl GroundStateResult {
    /// True when the gap falls below `1e-10 * max(1, |E_0|)`; the
    /// ground-state 1RDM is then not unique and callers deciding on
    /// 1RDM uniqueness must discard the point.
    pub fn is_degenerate(&self) -> bool {
        self.gap < DEGENERACY_THRESHOLD * self.energy.abs().max(1.0)
    }
}

/// Dimer Hamiltonian in the configuration basis.
///
/// Row n carries the diagonal
/// `v_L n + v_R (N-n) + U [n(n-1) + (N-n)(N-n-1)]` and couples to row
/// n+1 with `-t sqrt((n+1)(N-n))`.
pub fn build_hamiltonian(params: &DimerParams) -> SymTridiagonal {
    let n = params.n_particles;
    let mut diag = Vec::with_capacity(n + 1);
    let mut off = Vec::with_capacity(n);
    for k in 0..=n {
        let nl = k as f64;
        let nr = (n - k) as f64;
        diag.push(
            params.potential_left * nl
                + params.potential_right * nr
                + params.interaction * (nl * (nl - 1.0) + nr * (nr - 1.0)),
        );
        if k < n {
            off.push(-params.hopping * ((nl + 1.0) * nr).sqrt());
        }
    }
    SymTridiagonal::new(diag, off)
}

/// Interaction weights `n(n-1) + (N-n)(N-n-1)` at U = 1; the diagonal
/// of W in the configuration basis.
pub fn interaction_weights(n_particles: usize) -> Vec<f64> {
    (0..=n_particles)
        .map(|k| {
            let nl = k as f64;
            let nr = (n_particles - k) as f64;
            nl * (nl - 1.0) + nr * (nr - 1.0)
        })
        .collect()
}

/// Exact ground state by diagonalization of the tridiagonal
/// Hamiltonian. The eigenvector sign is fixed so that the
/// largest-magnitude coefficient is positive.
pub fn ground_state(params: &DimerParams) -> GroundStateResult {
    let h = build_hamiltonian(params);
    let eig = h.eigh();
    let mut state = eig.vectors[0].clone();
    fix_sign(&mut state);
    let gap = if eig.values.len() > 1 {
        eig.values[1] - eig.values[0]
    } else {
        f64::INFINITY
    };
    let state = ConfigurationVector::normalized(state).expect("eigenvector is nonzero");
    let rdm = rdm_from_state(&state);
    GroundStateResult {
        energy: eig.values[0],
        state,
        rdm,
        gap,
    }
}

/// Like [`ground_state`] but fails when the gap is below the
/// degeneracy threshold, so the 1RDM is guaranteed unique.
pub fn unique_ground_state(params: &DimerParams) -> Result<GroundStateResult, DimerError> {
    let gs = ground_state(params);
    if gs.is_degenerate() {
        return Err(DimerError::Degenerate { gap: gs.gap });
    }
    Ok(gs)
}

fn fix_sign(state: &mut [f64]) {
    let mut idx = 0;
    let mut max = 0.0;
    for (i, v) in state.iter().enumerate() {
        if v.abs() > max {
            max = v.abs();
            idx = i;
        }
    }
    if state[idx] < 0.0 {
        for v in state.iter_mut() {
            *v = -*v;
        }
    }
}

/// Unit-trace 1RDM of a configuration-basis state:
/// `gamma_LR = (1/N) sum sqrt((N-n)(n+1)) a_n a_{n+1}`,
/// `gamma_LL = (1/N) sum n a_n^2`.
pub fn rdm_from_state(state: &ConfigurationVector) -> OneParticleRdm {
    let a = state.coeffs();
    let n = state.n_particles();
    let nf = n as f64;
    let mut gll = 0.0;
    let mut glr = 0.0;
    for k in 0..=n {
        gll += (k as f64) * a[k] * a[k];
        if k < n {
            glr += (((n - k) * (k + 1)) as f64).sqrt() * a[k] * a[k + 1];
        }
    }
    gll /= nf;
    glr /= nf;
    // Clamp roundoff just outside the disc.
    let r2 = glr * glr + (gll - 0.5) * (gll - 0.5);
    if r2 > 0.25 && r2 <= 0.25 + DISC_TOLERANCE {
        let scale = 0.5 / r2.sqrt();
        glr *= scale;
        gll = 0.5 + (gll - 0.5) * scale;
    }
    OneParticleRdm::from_cartesian(gll, glr).expect("1RDM of a normalized state is on the disc")
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;
    use std::vec::Vec;

    #[test]
    fn single_boson_symmetric_well() {
        let p = DimerParams::symmetric(1, 1.0, 0.0).unwrap();
        let h = build_hamiltonian(&p);
        assert_eq!(h.diag, vec![0.0, 0.0]);
        assert_eq!(h.off, vec![-1.0]);
        let gs = ground_state(&p);
        assert!((gs.energy + 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_hopping_diagonal_hamiltonian() {
        let p = DimerParams::symmetric(2, 0.0, 1.0).unwrap();
        let h = build_hamiltonian(&p);
        assert_eq!(h.diag, vec![2.0, 0.0, 2.0]);
        assert_eq!(h.off, vec![0.0, 0.0]);
        let gs = ground_state(&p);
        assert!(gs.energy.abs() < 1e-12);
        // Ground state |1,1>.
        assert!((gs.state.coeffs()[1].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn free_bosons_fill_bonding_orbital() {
        let p = DimerParams::symmetric(3, 1.0, 0.0).unwrap();
        let gs = ground_state(&p);
        assert!((gs.energy + 3.0).abs() < 1e-10);
    }

    #[test]
    fn degeneracy_potential_flags_degenerate() {
        // N=2, t=0, U=1: v_L - v_R = 2U makes |0,2> and |1,1> degenerate.
        let p = DimerParams::new(2, 0.0, 2.0, 0.0, 1.0).unwrap();
        let gs = ground_state(&p);
        assert!(gs.gap.abs() < 1e-12);
        assert!(gs.is_degenerate());
        assert!(matches!(
            unique_ground_state(&p),
            Err(DimerError::Degenerate { .. })
        ));
    }

    #[test]
    fn two_free_bosons() {
        let p = DimerParams::symmetric(2, 1.0, 0.0).unwrap();
        let gs = ground_state(&p);
        assert!((gs.energy + 2.0).abs() < 1e-12);
        assert!(!gs.is_degenerate());
    }

    #[test]
    fn ground_energy_matches_dense_oracle() {
        let p = DimerParams::symmetric(4, 1.0, 1.0).unwrap();
        let h = build_hamiltonian(&p);
        let n = h.dim();
        let mut dense = nalgebra::DMatrix::zeros(n, n);
        for i in 0..n {
            dense[(i, i)] = h.diag[i];
            if i + 1 < n {
                dense[(i, i + 1)] = h.off[i];
                dense[(i + 1, i)] = h.off[i];
            }
        }
        let mut vals: Vec<f64> = dense.symmetric_eigen().eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let gs = ground_state(&p);
        assert!((gs.energy - vals[0]).abs() < 1e-10);
    }

    #[test]
    fn rdm_all_left() {
        let n = 5;
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        let state = ConfigurationVector::new(coeffs).unwrap();
        let rdm = rdm_from_state(&state);
        assert!((rdm.gamma_ll() - 1.0).abs() < 1e-14);
        assert!(rdm.gamma_lr().abs() < 1e-14);
        let (d, phi) = rdm.polar().unwrap();
        assert!(d.abs() < 1e-14);
        assert!(phi.abs() < 1e-14);
    }

    #[test]
    fn rdm_two_boson_bonding_condensate() {
        let s2 = core::f64::consts::SQRT_2;
        let state = ConfigurationVector::new(vec![0.5, 1.0 / s2, 0.5]).unwrap();
        let rdm = rdm_from_state(&state);
        assert!((rdm.gamma_ll() - 0.5).abs() < 1e-14);
        assert!((rdm.gamma_lr() - 0.5).abs() < 1e-14);
        let (d, phi) = rdm.polar().unwrap();
        assert!(d.abs() < 1e-14);
        assert!((phi - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn rdm_two_configuration_superposition_family() {
        // x|n,N-n> +/- sqrt(1-x^2)|n+1,N-n-1> maps onto the ellipse
        // parametrization gamma_LL = (n+1-x^2)/N,
        // gamma_LR = +/- sqrt((N-n)(n+1)) x sqrt(1-x^2)/N.
        let n_particles = 2;
        let level = 0;
        for &sign in &[1.0, -1.0] {
            for i in 0..20 {
                let x = i as f64 / 19.0;
                let mut coeffs = vec![0.0; n_particles + 1];
                coeffs[level] = x;
                coeffs[level + 1] = sign * (1.0 - x * x).sqrt();
                let state = ConfigurationVector::new(coeffs).unwrap();
                let rdm = rdm_from_state(&state);
                let nf = n_particles as f64;
                let expect_ll = (level as f64 + 1.0 - x * x) / nf;
                let expect_lr = sign
                    * (((n_particles - level) * (level + 1)) as f64).sqrt()
                    * x
                    * (1.0 - x * x).sqrt()
                    / nf;
                assert!((rdm.gamma_ll() - expect_ll).abs() < 1e-13);
                assert!((rdm.gamma_lr() - expect_lr).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn polar_cartesian_examples() {
        let rdm = OneParticleRdm::from_cartesian(1.0, 0.0).unwrap();
        let (d, phi) = rdm.polar().unwrap();
        assert!(d.abs() < 1e-14 && phi.abs() < 1e-14);

        let rdm = OneParticleRdm::from_polar(0.1, PI / 2.0).unwrap();
        assert!((rdm.gamma_ll() - 0.5).abs() < 1e-14);
        assert!((rdm.gamma_lr() - 0.4).abs() < 1e-14);

        let center = OneParticleRdm::from_cartesian(0.5, 0.0).unwrap();
        assert_eq!(center.polar(), Err(DimerError::CenterSingular));
    }

    #[test]
    fn condensate_state_has_boundary_rdm() {
        for &phi in &[0.3, 1.1, PI / 2.0, 2.9, 4.5] {
            let state = ConfigurationVector::condensate(6, phi);
            let rdm = rdm_from_state(&state);
            let (d, phi_out) = rdm.polar().unwrap();
            assert!(d.abs() < 1e-12);
            let want = if phi < 0.0 { phi + 2.0 * PI } else { phi };
            assert!((phi_out - want).abs() < 1e-10, "{phi_out} vs {want}");
        }
    }

    #[test]
    fn rotated_fock_states_are_orthonormal() {
        let n = 5;
        let phi = 0.77;
        let states: Vec<_> = (0..=n)
            .map(|m| ConfigurationVector::rotated_fock_state(n, m, phi))
            .collect();
        for i in 0..=n {
            for j in 0..=n {
                let dot = crate::linalg::dot(states[i].coeffs(), states[j].coeffs());
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(DimerParams::new(0, 1.0, 0.0, 0.0, 1.0).is_err());
        assert!(DimerParams::new(2, 1.0, 0.0, 0.0, -1.0).is_err());
    }
}
