//! Per-mode functional of the homogeneous dilute Bose gas.
//!
//! Everything is parameterized by the single energy scale nW_0
//! (density times the zeroth Fourier coefficient of the pair
//! interaction); mode labels are opaque and the dispersion is an
//! input.

// The Float trait supplies sqrt/sin/... in pure no_std builds; when
// std enters the crate graph (tests, std-enabled dependents) the
// inherent f64 methods shadow it and the import goes unused.
#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;

use crate::error::BogoliubovError;
use crate::optim::{bisect_root, golden_section_min};

/// Homogeneous gas with a fixed set of depleted modes.
#[derive(Debug, Clone)]
pub struct GasParams {
    pub density: f64,
    pub w0: f64,
    /// Occupations n_p of the modes p != 0.
    pub occupations: Vec<f64>,
}

impl GasParams {
    pub fn new(density: f64, w0: f64, occupations: Vec<f64>) -> Result<Self, BogoliubovError> {
        if !(density > 0.0) || !(w0 > 0.0) {
            return Err(BogoliubovError::InvalidParams("need n > 0 and W_0 > 0"));
        }
        if occupations.iter().any(|&np| !(np >= 0.0)) {
            return Err(BogoliubovError::InvalidParams("occupations must be >= 0"));
        }
        Ok(Self {
            density,
            w0,
            occupations,
        })
    }

    pub fn nw0(&self) -> f64 {
        self.density * self.w0
    }
}

/// Mode ground energy E_ε = ½[sqrt(ε² + 2 nW_0 ε) - (ε + nW_0)];
/// always in [-nW_0/2, 0).
pub fn mode_energy(eps: f64, nw0: f64) -> f64 {
    0.5 * ((eps * eps + 2.0 * nw0 * eps).sqrt() - (eps + nw0))
}

/// Dispersion at which a mode holds occupation n_p:
/// ε(n_p) = (nW_0/2)[(2n_p + 1)/sqrt(n_p(n_p+1)) - 2]; strictly
/// decreasing, diverging as n_p -> 0+.
pub fn epsilon_of_occupation(np: f64, nw0: f64) -> Result<f64, BogoliubovError> {
    if np <= 0.0 {
        return Err(BogoliubovError::ZeroOccupation);
    }
    // Conjugate form of (nW_0/2)[(2np+1)/sqrt(np(np+1)) - 2]: avoids
    // catastrophic cancellation for large np.
    let root = (np * (np + 1.0)).sqrt();
    Ok(0.5 * nw0 / (root * (2.0 * np + 1.0 + 2.0 * root)))
}

/// Inverse of [`epsilon_of_occupation`] by monotone bracketed
/// bisection.
pub fn occupation_of_epsilon(eps: f64, nw0: f64) -> Result<f64, BogoliubovError> {
    if !(eps > 0.0) || !(nw0 > 0.0) {
        return Err(BogoliubovError::InvalidParams("need eps > 0 and nW_0 > 0"));
    }
    // eps(np) decreases from +inf at np -> 0+ to 0+ at np -> inf;
    // expand the bracket until it straddles eps.
    let mut lo = 1e-6;
    let mut hi = 1.0;
    while epsilon_of_occupation(hi, nw0).unwrap() > eps && hi < 1e150 {
        hi *= 10.0;
    }
    while epsilon_of_occupation(lo, nw0).unwrap() < eps && lo > 1e-290 {
        lo *= 0.1;
    }
    // eps(np) - eps is decreasing in np: positive at lo, negative at hi.
    let root = bisect_root(
        |np| epsilon_of_occupation(np, nw0).unwrap() - eps,
        lo,
        hi,
        200,
    );
    Ok(root)
}

/// Per-mode functional F(n_p) = -nW_0 [sqrt(n_p(n_p+1)) - n_p];
/// value in (-nW_0/2, 0].
pub fn functional_mode(np: f64, nw0: f64) -> f64 {
    -nw0 * ((np * (np + 1.0)).sqrt() - np)
}

/// Sum of per-mode functionals (the functional is separable).
pub fn functional_total(params: &GasParams) -> f64 {
    let nw0 = params.nw0();
    params
        .occupations
        .iter()
        .map(|&np| functional_mode(np, nw0))
        .sum()
}

/// Verify E_ε = min_{n_p >= 0} [ε n_p + F(n_p)] by bracketed 1D
/// minimization. Returns (lhs, rhs, gap).
pub fn legendre_fenchel_check(eps: f64, nw0: f64) -> (f64, f64, f64) {
    let lhs = mode_energy(eps, nw0);
    // The minimizer is occupation_of_epsilon(eps); bracket around it.
    let np_star = occupation_of_epsilon(eps, nw0).unwrap_or(1.0);
    let hi = (4.0 * np_star).max(1.0);
    let (_, rhs) = golden_section_min(|np| eps * np + functional_mode(np, nw0), 0.0, hi, 1e-13);
    (lhs, rhs, (lhs - rhs).abs())
}

/// dF/dD along the straight path n_p = N D w_p, for nonnegative
/// direction weights w_p summing to 1:
/// -nW_0 Σ_p w_p [N(2n_p + 1)/(2 sqrt(n_p(n_p+1))) - N].
pub fn homogeneous_bec_force(
    params: &GasParams,
    weights: &[f64],
    n_total: f64,
    d: f64,
) -> Result<f64, BogoliubovError> {
    if d <= 0.0 {
        return Err(BogoliubovError::Divergent);
    }
    if weights.iter().any(|&w| !(w >= 0.0)) {
        return Err(BogoliubovError::InvalidParams("weights must be >= 0"));
    }
    let nw0 = params.nw0();
    let mut force = 0.0;
    for &w in weights {
        if w == 0.0 {
            continue;
        }
        let np = n_total * d * w;
        force -= nw0 * w * (n_total * (2.0 * np + 1.0) / (2.0 * (np * (np + 1.0)).sqrt()) - n_total);
    }
    Ok(force)
}
