//! Perturbative expansion of the pure functional near the disc
//! boundary (condensate regime, D -> 0) and the diverging gradient
//! it exposes.
//!
//! Notation: the D-coefficient of the expansion is `dcoeff` and the
//! first-order perturbative energy is `first_order_energy` (W_0); the
//! two play different roles and must not be conflated. λ is taken as
//! sqrt(D/κ_N(φ)), the form consistent with the expansion assembly.


// The Float trait supplies sqrt/sin/... in pure no_std builds; when
// std enters the crate graph (tests, std-enabled dependents) the
// inherent f64 methods shadow it and the import goes unused.
#[allow(unused_imports)]
use num_traits::Float;
use crate::error::BoundaryError;

/// Matrix elements (W_0, W_1, W_2) of n̂_L² + n̂_R² between the
/// condensate |N> and the singly/doubly depleted states, in the
/// rotated orbital basis of angle φ. W_1 carries a 1/sqrt(N)
/// normalization: the raw element is ⟨N-1|n̂_L²+n̂_R²|N⟩ = sqrt(N)·W_1,
/// so the counter term that cancels it is exactly -W_1·(b†_⊥b_φ + h.c.).
pub fn matrix_elements_w(phi: f64, n_particles: usize) -> (f64, f64, f64) {
    let n = n_particles as f64;
    let a = (0.5 * phi).cos();
    let b = (0.5 * phi).sin();
    let a2 = a * a;
    let b2 = b * b;
    let w0 = (a2 * a2 + b2 * b2) * n * n + 2.0 * a2 * b2 * n;
    let w1 = 2.0 * a * b * (a2 - b2) * (n - 1.0);
    let w2 = 2.0 * core::f64::consts::SQRT_2 * a2 * b2 * (n * (n - 1.0)).sqrt();
    (w0, w1, w2)
}

/// κ_N(φ) = 4(N-1)α⁴β⁴ — the coefficient of λ² in the depletion of
/// the perturbed condensate.
pub fn kappa(phi: f64, n_particles: usize) -> f64 {
    let a = (0.5 * phi).cos();
    let b = (0.5 * phi).sin();
    4.0 * (n_particles as f64 - 1.0) * a.powi(4) * b.powi(4)
}

/// λ(D) = sqrt(D/κ_N(φ)).
pub fn lambda_of_d(d: f64, n_particles: usize, phi: f64) -> Result<f64, BoundaryError> {
    let k = kappa(phi, n_particles);
    // cos(pi/2) is ~1e-16 in floating point, so kappa at the poles
    // lands near 1e-65 rather than exactly 0.
    if k <= 1e-30 {
        return Err(BoundaryError::KappaZero);
    }
    Ok((d / k).sqrt())
}

/// Expansion of F_p along the ray of angle φ, valid for D << 1
/// (callers should stay below D = 0.05).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryExpansion {
    pub angle_phi: f64,
    pub n_particles: usize,
    pub interaction_u: f64,
    /// Boundary value: U N(N-1)(1 - sin²φ / 2).
    pub e0: f64,
    /// Coefficient of D: U N(N-2)(3 sin²φ - 2).
    pub dcoeff: f64,
    /// Coefficient of sqrt(D): -U N sqrt(N-1) sin²φ.
    pub sqrt_coefficient: f64,
    pub kappa: f64,
}

impl BoundaryExpansion {
    pub fn new(phi: f64, n_particles: usize, u: f64) -> Self {
        let n = n_particles as f64;
        let s2 = phi.sin() * phi.sin();
        Self {
            angle_phi: phi,
            n_particles,
            interaction_u: u,
            e0: u * n * (n - 1.0) * (1.0 - 0.5 * s2),
            dcoeff: u * n * (n - 2.0) * (3.0 * s2 - 2.0),
            sqrt_coefficient: -u * n * (n - 1.0).sqrt() * s2,
            kappa: kappa(phi, n_particles),
        }
    }

    pub fn eval(&self, d: f64) -> f64 {
        self.e0 + self.dcoeff * d + self.sqrt_coefficient * d.sqrt()
    }
}

pub fn functional_boundary(d: f64, phi: f64, n_particles: usize, u: f64) -> f64 {
    BoundaryExpansion::new(phi, n_particles, u).eval(d)
}

/// Leading term of ∂F_p/∂D: -(U/2) N sqrt(N-1) sin²φ / sqrt(D),
/// repulsively divergent toward the boundary.
pub fn bec_force(d: f64, phi: f64, n_particles: usize, u: f64) -> Result<f64, BoundaryError> {
    let s2 = phi.sin() * phi.sin();
    if s2 == 0.0 {
        return Ok(0.0);
    }
    if d < 1e-300 {
        return Err(BoundaryError::Divergent);
    }
    let n = n_particles as f64;
    Ok(-0.5 * u * n * (n - 1.0).sqrt() * s2 / d.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn w_elements_at_pole_and_half_pi() {
        for n in 1..=8usize {
            let (w0, w1, w2) = matrix_elements_w(0.0, n);
            assert!((w0 - (n * n) as f64).abs() < 1e-12);
            assert!(w1.abs() < 1e-12);
            assert!(w2.abs() < 1e-12);
        }
        let (w0, w1, w2) = matrix_elements_w(FRAC_PI_2, 2);
        assert!((w0 - 3.0).abs() < 1e-12);
        assert!(w1.abs() < 1e-12);
        assert!((w2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kappa_matches_w2_identity() {
        // kappa = W_2^2 / (2N)
        for n in 1..=10usize {
            for k in 0..=16 {
                let phi = PI * k as f64 / 16.0;
                let (_, _, w2) = matrix_elements_w(phi, n);
                assert!(
                    (kappa(phi, n) - w2 * w2 / (2.0 * n as f64)).abs() < 1e-12,
                    "N = {n}, phi = {phi}"
                );
            }
        }
    }

    #[test]
    fn sqrt_coefficient_identity() {
        // -2N sqrt(kappa) = -N sqrt(N-1) sin^2(phi)
        for n in 2..=10usize {
            for k in 0..=32 {
                let phi = PI * k as f64 / 32.0;
                let lhs = -2.0 * n as f64 * kappa(phi, n).sqrt();
                let rhs = -(n as f64) * ((n - 1) as f64).sqrt() * phi.sin() * phi.sin();
                assert!((lhs - rhs).abs() < 1e-12, "N = {n}, phi = {phi}");
            }
        }
    }

    #[test]
    fn expansion_examples() {
        // D = 0 reduces to the boundary identity.
        for n in 1..=6usize {
            for k in 0..=8 {
                let phi = PI * k as f64 / 8.0;
                let v = functional_boundary(0.0, phi, n, 1.0);
                let s2 = phi.sin() * phi.sin();
                let expect = n as f64 * (n as f64 - 1.0) * (1.0 - 0.5 * s2);
                assert!((v - expect).abs() < 1e-12);
            }
        }

        let v = functional_boundary(1e-4, FRAC_PI_2, 2, 1.0);
        assert!((v - 0.98).abs() < 1e-12);

        let v = functional_boundary(1e-4, FRAC_PI_2, 4, 1.0);
        let expect = 6.0 + 8e-4 - 4.0 * 3f64.sqrt() * 0.01;
        assert!((v - expect).abs() < 1e-12);
    }

    #[test]
    fn boundary_expansion_tracks_analytic_n2() {
        // F_2(D, pi/2) = 2 - 1 - sqrt(1 - (1-2D)^2): agreement to O(D).
        for &d in &[1e-6, 1e-5, 1e-4] {
            let exact = 1.0 - (1.0 - (1.0 - 2.0 * d) * (1.0 - 2.0 * d)).sqrt();
            let approx = functional_boundary(d, FRAC_PI_2, 2, 1.0);
            assert!((exact - approx).abs() < 10.0 * d, "D = {d}");
        }
    }

    #[test]
    fn force_examples() {
        assert_eq!(bec_force(1e-8, 0.0, 5, 1.0), Ok(0.0));
        // -(1/2) * 2 * 1 * 1 / 1e-2; cross-checked against the central
        // finite difference of the exact N=2 functional below.
        assert!((bec_force(1e-4, FRAC_PI_2, 2, 1.0).unwrap() + 100.0).abs() < 1e-9);
        let f = bec_force(1e-6, FRAC_PI_2, 4, 1.0).unwrap();
        assert!((f + 2.0 * 3f64.sqrt() * 1e3).abs() < 1e-6);
        assert_eq!(
            bec_force(0.0, FRAC_PI_2, 2, 1.0),
            Err(BoundaryError::Divergent)
        );
    }

    #[test]
    fn force_matches_finite_difference_of_exact_n2() {
        let exact = |d: f64| {
            2.0 - (1.0 + (1.0 - (1.0 - 2.0 * d) * (1.0 - 2.0 * d)).sqrt())
        };
        for &d in &[1e-6, 1e-5, 1e-4] {
            let h = d * 1e-3;
            let fd = (exact(d + h) - exact(d - h)) / (2.0 * h);
            let analytic = bec_force(d, FRAC_PI_2, 2, 1.0).unwrap();
            assert!(
                ((fd - analytic) / analytic).abs() < 10.0 * d.sqrt(),
                "D = {d}: fd {fd} vs {analytic}"
            );
        }
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_of_d(0.0, 3, FRAC_PI_2), Ok(0.0));
        let l = lambda_of_d(1e-4, 2, FRAC_PI_2).unwrap();
        assert!((l - 2.0 * 0.01).abs() < 1e-15);
        let l = lambda_of_d(1e-4, 5, FRAC_PI_2).unwrap();
        assert!((l - 0.01).abs() < 1e-15);
        assert_eq!(lambda_of_d(1e-4, 5, 0.0), Err(BoundaryError::KappaZero));
        assert_eq!(lambda_of_d(1e-4, 5, PI), Err(BoundaryError::KappaZero));
    }
}
