//! Universal interaction functionals on the 1RDM disc.
//!
//! * `functional_pure_numeric`: the pure functional by constrained
//!   search over configuration vectors (any N);
//! * `functional_pure_analytic_n2`: the closed form for N = 2;
//! * `functional_ensemble_large_n`: the rescaled large-N ensemble
//!   limit;
//! * `FunctionalGrid`: sampled functional surfaces over the disc, the
//!   substrate for convex envelopes and plot data.
//!
//! All functional values are computed and stored at U = 1; linear
//! rescaling by U is the caller's job.

// The Float trait supplies sqrt/sin/... in pure no_std builds; when
// std enters the crate graph (tests, std-enabled dependents) the
// inherent f64 methods shadow it and the import goes unused.
#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;

use crate::boundary;
use crate::dimer::{interaction_weights, ConfigurationVector, OneParticleRdm, CENTER_TOLERANCE};
use crate::error::FunctionalError;
use crate::search::{constrained_minimum, SearchOptions};

/// Value of a constrained-search functional at one point, with the
/// optimizer certificate.
#[derive(Debug, Clone)]
pub struct FunctionalValue {
    /// Functional value in units of U (computed at U = 1).
    pub value: f64,
    /// Residuals of the two 1RDM constraints at the minimizer.
    pub residual_ll: f64,
    pub residual_lr: f64,
    pub minimizer: ConfigurationVector,
}

/// Interaction expectation `<W>` of a configuration-basis state at
/// U = 1: `sum_n a_n^2 [n(n-1) + (N-n)(N-n-1)]`.
pub fn interaction_expectation(state: &ConfigurationVector) -> f64 {
    let w = interaction_weights(state.n_particles());
    state
        .coeffs()
        .iter()
        .zip(&w)
        .map(|(a, w)| a * a * w)
        .sum()
}

/// Pure functional by Levy constrained search over normalized
/// configuration vectors mapping to `target`.
pub fn functional_pure_numeric(
    target: &OneParticleRdm,
    n_particles: usize,
    opts: &SearchOptions,
) -> Result<FunctionalValue, FunctionalError> {
    functional_pure_numeric_hinted(target, n_particles, opts, None)
}

/// Same as [`functional_pure_numeric`] but with an optional warm-start
/// seed (typically the minimizer of a neighboring grid point).
pub fn functional_pure_numeric_hinted(
    target: &OneParticleRdm,
    n_particles: usize,
    opts: &SearchOptions,
    hint: Option<&[f64]>,
) -> Result<FunctionalValue, FunctionalError> {
    let weights = interaction_weights(n_particles);

    // Targets within floating-point resolution of the disc boundary
    // are treated as boundary points: the preimage there is the unique
    // condensate, while the sqrt(D) cusp makes values at D ~ 1e-16
    // (reachable purely through rounding of gamma) differ from the
    // boundary value by ~1e-8.
    if let Ok((d, phi)) = target.polar() {
        if d < BOUNDARY_SNAP {
            let state = ConfigurationVector::condensate(n_particles, phi);
            let rdm = crate::dimer::rdm_from_state(&state);
            return Ok(FunctionalValue {
                value: interaction_expectation(&state),
                residual_ll: (rdm.gamma_ll() - target.gamma_ll()).abs(),
                residual_lr: (rdm.gamma_lr() - target.gamma_lr()).abs(),
                minimizer: state,
            });
        }
    }

    let seeds = structured_seeds(target, n_particles, hint);
    let res = constrained_minimum(
        &weights,
        target.gamma_ll(),
        target.gamma_lr(),
        opts,
        &seeds,
    )?;
    Ok(FunctionalValue {
        value: res.value,
        residual_ll: res.residual_ll,
        residual_lr: res.residual_lr,
        minimizer: ConfigurationVector::normalized(res.minimizer)
            .expect("minimizer is nonzero"),
    })
}

fn structured_seeds(
    target: &OneParticleRdm,
    n_particles: usize,
    hint: Option<&[f64]>,
) -> Vec<Vec<f64>> {
    let mut seeds: Vec<Vec<f64>> = Vec::new();
    if let Some(h) = hint {
        seeds.push(h.to_vec());
    }
    if let Ok((d, phi)) = target.polar() {
        // The boundary condensate of matching angle; for D = 0 it is
        // the unique preimage.
        let condensate = ConfigurationVector::condensate(n_particles, phi);
        seeds.push(condensate.coeffs().to_vec());

        // Near the boundary, second-order perturbation theory predicts
        // the minimizer |N> - (W2 lambda / 2)|N-2> in the rotated
        // basis.
        let kappa = boundary::kappa(phi, n_particles);
        if kappa > 1e-12 && d < 0.2 && n_particles >= 2 {
            let lambda = (d / kappa).sqrt();
            let (_, _, w2) = boundary::matrix_elements_w(phi, n_particles);
            let lower = ConfigurationVector::rotated_fock_state(n_particles, n_particles - 2, phi);
            let mix: Vec<f64> = condensate
                .coeffs()
                .iter()
                .zip(lower.coeffs())
                .map(|(a, b)| a - 0.5 * w2 * lambda * b)
                .collect();
            seeds.push(mix);
        }

        // Rotated Fock shells |m>_phi: depletion steps of 1/N along
        // the target angle. These cover the interior basins (near the
        // disc center in particular) that the boundary seeds miss.
        // Each shell is paired with its gauge image a_n -> (-1)^n a_n
        // (angle -phi): for m < N the perturbed shell's off-diagonal
        // sign is not fixed by the shell itself.
        for m in 0..=n_particles {
            let shell = ConfigurationVector::rotated_fock_state(n_particles, m, phi);
            let flipped: Vec<f64> = shell
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, a)| if k % 2 == 0 { *a } else { -*a })
                .collect();
            seeds.push(shell.coeffs().to_vec());
            seeds.push(flipped);
        }
    }
    // Two-configuration superpositions matching gamma_LL; exact
    // preimages of points on the exclusion ellipses and good seeds on
    // the axis.
    let nf = n_particles as f64;
    for level in 0..n_particles {
        let x2 = level as f64 + 1.0 - nf * target.gamma_ll();
        if (0.0..=1.0).contains(&x2) {
            let x = x2.sqrt();
            let y = (1.0 - x2).max(0.0).sqrt();
            for &sign in &[1.0, -1.0] {
                let mut coeffs = alloc::vec![0.0; n_particles + 1];
                coeffs[level] = x;
                coeffs[level + 1] = sign * y;
                seeds.push(coeffs);
            }
        }
    }
    seeds
}

/// Closed-form pure functional for N = 2 at U = 1:
///
/// ```text
/// F = 2 - (1 + sqrt(1 - 4 r^2)) gamma_LR^2 / r^2,
/// r^2 = gamma_LR^2 + (gamma_LL - 1/2)^2
/// ```
///
/// equivalently `2 - (1 + sqrt(1 - (1-2D)^2)) sin^2(phi)`. The
/// directional limit at the disc center is ambiguous, so the exact
/// center is rejected.
pub fn functional_pure_analytic_n2(target: &OneParticleRdm) -> Result<f64, FunctionalError> {
    let glr = target.gamma_lr();
    let x = target.gamma_ll() - 0.5;
    let r2 = glr * glr + x * x;
    if r2.sqrt() < CENTER_TOLERANCE {
        return Err(FunctionalError::CenterSingular);
    }
    let root = (1.0 - 4.0 * r2).max(0.0).sqrt();
    Ok(2.0 - (1.0 + root) * glr * glr / r2)
}

/// Rescaled large-N ensemble functional: the limit of
/// `(2/N^2) F_e - 1`, which is `4 (gamma_LL - 1/2)^2` independently of
/// `gamma_LR`.
pub fn functional_ensemble_large_n(target: &OneParticleRdm) -> f64 {
    let x = target.gamma_ll() - 0.5;
    4.0 * x * x
}

/// Which functional a grid holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionalKind {
    Pure,
    Ensemble,
    AnalyticN2,
}

impl FunctionalKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FunctionalKind::Pure => "pure",
            FunctionalKind::Ensemble => "ensemble",
            FunctionalKind::AnalyticN2 => "analytic",
        }
    }
}

/// One grid cell.
#[derive(Debug, Clone, Copy)]
pub struct GridSample {
    pub gamma_ll: f64,
    pub gamma_lr: f64,
    pub d: f64,
    pub phi: f64,
    /// Functional value at U = 1; NaN when not converged.
    pub value: f64,
    pub converged: bool,
}

/// Sampled functional values over the disc on a polar grid.
#[derive(Debug, Clone)]
pub struct FunctionalGrid {
    pub n_particles: usize,
    pub kind: FunctionalKind,
    pub n_radial: usize,
    pub n_angular: usize,
    /// Row-major: radial index outer, angular index inner.
    pub samples: Vec<GridSample>,
}

/// Maximum D on polar grids; the exact center (D = 1/2) is avoided
/// because the angle is undefined there.
pub const GRID_D_CAP: f64 = 0.5 - 1e-6;

/// Depletions below this are indistinguishable from the boundary at
/// double precision (gamma determines D only to ~1e-16 near the
/// circle) and are evaluated as exact boundary points.
pub const BOUNDARY_SNAP: f64 = 1e-12;

/// Radial grid values, linearly spaced and capped below the center.
pub fn grid_d_values(n_radial: usize, d_min: f64, d_max: f64) -> Vec<f64> {
    let d_max = d_max.min(GRID_D_CAP);
    let d_min = d_min.max(0.0).min(d_max);
    if n_radial == 1 {
        return alloc::vec![d_min];
    }
    (0..n_radial)
        .map(|i| d_min + (d_max - d_min) * i as f64 / (n_radial - 1) as f64)
        .collect()
}

/// Angular grid values in [0, 2 pi), endpoint excluded.
pub fn grid_phi_values(n_angular: usize) -> Vec<f64> {
    (0..n_angular)
        .map(|j| 2.0 * core::f64::consts::PI * j as f64 / n_angular as f64)
        .collect()
}

/// Pure-functional samples along one fixed-angle ray, sweeping D from
/// the boundary inward and warm-starting each point from the previous
/// minimizer. Nonconverged cells carry NaN.
pub fn pure_ray(
    n_particles: usize,
    phi: f64,
    d_values: &[f64],
    opts: &SearchOptions,
) -> Vec<GridSample> {
    let mut order: Vec<usize> = (0..d_values.len()).collect();
    order.sort_by(|&a, &b| d_values[a].partial_cmp(&d_values[b]).unwrap());
    let mut out: Vec<Option<GridSample>> = alloc::vec![None; d_values.len()];
    let mut hint: Option<Vec<f64>> = None;
    for &idx in &order {
        let d = d_values[idx];
        let rdm = OneParticleRdm::from_polar(d, phi).expect("grid point is on the disc");
        let sample = match functional_pure_numeric_hinted(&rdm, n_particles, opts, hint.as_deref())
        {
            Ok(v) => {
                hint = Some(v.minimizer.coeffs().to_vec());
                GridSample {
                    gamma_ll: rdm.gamma_ll(),
                    gamma_lr: rdm.gamma_lr(),
                    d,
                    phi,
                    value: v.value,
                    converged: true,
                }
            }
            Err(_) => GridSample {
                gamma_ll: rdm.gamma_ll(),
                gamma_lr: rdm.gamma_lr(),
                d,
                phi,
                value: f64::NAN,
                converged: false,
            },
        };
        out[idx] = Some(sample);
    }
    out.into_iter().map(|s| s.unwrap()).collect()
}

impl FunctionalGrid {
    /// Serial pure-functional grid over the disc.
    pub fn compute_pure(
        n_particles: usize,
        n_radial: usize,
        n_angular: usize,
        d_min: f64,
        d_max: f64,
        opts: &SearchOptions,
    ) -> Self {
        let ds = grid_d_values(n_radial, d_min, d_max);
        let phis = grid_phi_values(n_angular);
        let mut samples = Vec::with_capacity(n_radial * n_angular);
        // Radial-major layout: all angles for the first D, then the
        // next D. Rays are computed per angle and transposed.
        let mut columns: Vec<Vec<GridSample>> = Vec::with_capacity(n_angular);
        for &phi in &phis {
            columns.push(pure_ray(n_particles, phi, &ds, opts));
        }
        for i in 0..n_radial {
            for column in &columns {
                samples.push(column[i]);
            }
        }
        Self {
            n_particles,
            kind: FunctionalKind::Pure,
            n_radial,
            n_angular,
            samples,
        }
    }

    /// Analytic N = 2 grid on the same layout.
    pub fn compute_analytic_n2(n_radial: usize, n_angular: usize, d_min: f64, d_max: f64) -> Self {
        let ds = grid_d_values(n_radial, d_min, d_max);
        let phis = grid_phi_values(n_angular);
        let mut samples = Vec::with_capacity(n_radial * n_angular);
        for &d in &ds {
            for &phi in &phis {
                let rdm = OneParticleRdm::from_polar(d, phi).expect("grid point is on the disc");
                let value = functional_pure_analytic_n2(&rdm);
                samples.push(GridSample {
                    gamma_ll: rdm.gamma_ll(),
                    gamma_lr: rdm.gamma_lr(),
                    d,
                    phi,
                    value: value.clone().unwrap_or(f64::NAN),
                    converged: value.is_ok(),
                });
            }
        }
        Self {
            n_particles: 2,
            kind: FunctionalKind::AnalyticN2,
            n_radial,
            n_angular,
            samples,
        }
    }

    /// Fraction of nonconverged cells.
    pub fn nonconverged_fraction(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        let bad = self.samples.iter().filter(|s| !s.converged).count();
        bad as f64 / self.samples.len() as f64
    }
}
