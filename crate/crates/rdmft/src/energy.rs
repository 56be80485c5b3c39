//! Total-energy minimization over the 1RDM disc.
//!
//! E_h[γ] = N (v_L γ_LL + v_R γ_RR - 2 t γ_LR) + U F[γ], with F
//! supplied by a pluggable backend. Minimization is derivative-free:
//! the functional's gradient diverges toward D = 0, so the radial
//! coordinate is s = sqrt(D) throughout.

// The Float trait supplies sqrt/sin/... in pure no_std builds; when
// std enters the crate graph (tests, std-enabled dependents) the
// inherent f64 methods shadow it and the import goes unused.
#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;

use crate::dimer::{self, DimerParams, OneParticleRdm};
use crate::envelope::LowerEnvelope;
use crate::error::{EnergyError, EnvelopeError, FunctionalError};
use crate::functional::{
    functional_pure_analytic_n2, functional_pure_numeric_hinted, FunctionalGrid, GRID_D_CAP,
};
use crate::optim::nelder_mead;
use crate::search::SearchOptions;

/// Interaction functional evaluated at U = 1; the total energy scales
/// it linearly by U.
pub trait FunctionalBackend {
    fn eval_u1(&self, target: &OneParticleRdm) -> Result<f64, FunctionalError>;

    /// Warm-started variant; backends with an internal minimizer may
    /// return it for chaining. Default: ignore the hint.
    fn eval_u1_hinted(
        &self,
        target: &OneParticleRdm,
        _hint: Option<&[f64]>,
    ) -> Result<(f64, Option<Vec<f64>>), FunctionalError> {
        self.eval_u1(target).map(|v| (v, None))
    }
}

/// Constrained-search functional for any N.
#[derive(Debug, Clone)]
pub struct PureNumericBackend {
    pub n_particles: usize,
    pub opts: SearchOptions,
}

impl PureNumericBackend {
    pub fn new(n_particles: usize) -> Self {
        Self {
            n_particles,
            opts: SearchOptions::default(),
        }
    }

    /// Reduced multistart count for inner loops (grid scans).
    pub fn fast(n_particles: usize, seed: u64) -> Self {
        Self {
            n_particles,
            opts: SearchOptions::fast(seed),
        }
    }
}

impl FunctionalBackend for PureNumericBackend {
    fn eval_u1(&self, target: &OneParticleRdm) -> Result<f64, FunctionalError> {
        functional_pure_numeric_hinted(target, self.n_particles, &self.opts, None).map(|v| v.value)
    }

    fn eval_u1_hinted(
        &self,
        target: &OneParticleRdm,
        hint: Option<&[f64]>,
    ) -> Result<(f64, Option<Vec<f64>>), FunctionalError> {
        let v = functional_pure_numeric_hinted(target, self.n_particles, &self.opts, hint)?;
        Ok((v.value, Some(v.minimizer.coeffs().to_vec())))
    }
}

/// Closed-form N = 2 functional.
#[derive(Debug, Clone, Copy, Default)]
pub struct AnalyticN2Backend;

impl FunctionalBackend for AnalyticN2Backend {
    fn eval_u1(&self, target: &OneParticleRdm) -> Result<f64, FunctionalError> {
        functional_pure_analytic_n2(target)
    }
}

/// Boundary expansion e0 + e1 D + c sqrt(D); accurate only for small
/// D (callers should keep D <= 0.05).
#[derive(Debug, Clone, Copy)]
pub struct BoundaryBackend {
    pub n_particles: usize,
}

impl FunctionalBackend for BoundaryBackend {
    fn eval_u1(&self, target: &OneParticleRdm) -> Result<f64, FunctionalError> {
        let (d, phi) = target
            .polar()
            .map_err(|_| FunctionalError::CenterSingular)?;
        Ok(crate::boundary::functional_boundary(
            d,
            phi,
            self.n_particles,
            1.0,
        ))
    }
}

/// Lower convex envelope of a sampled pure-functional grid (the
/// ensemble functional).
#[derive(Debug, Clone)]
pub struct EnsembleBackend {
    envelope: LowerEnvelope,
}

impl EnsembleBackend {
    pub fn from_grid(grid: &FunctionalGrid) -> Result<Self, EnvelopeError> {
        let cloud: Vec<[f64; 3]> = grid
            .samples
            .iter()
            .filter(|s| s.converged && s.value.is_finite())
            .map(|s| [s.gamma_ll, s.gamma_lr, s.value])
            .collect();
        Ok(Self {
            envelope: LowerEnvelope::build(cloud)?,
        })
    }
}

impl FunctionalBackend for EnsembleBackend {
    fn eval_u1(&self, target: &OneParticleRdm) -> Result<f64, FunctionalError> {
        Ok(self.envelope.eval(target.gamma_ll(), target.gamma_lr()))
    }
}

/// N (v_L γ_LL + v_R γ_RR - 2 t γ_LR) + U F[γ], unit-trace γ with the
/// explicit N factor.
pub fn total_energy<B: FunctionalBackend + ?Sized>(
    target: &OneParticleRdm,
    params: &DimerParams,
    backend: &B,
) -> Result<f64, EnergyError> {
    let n = params.n_particles as f64;
    let one_body = n
        * (params.potential_left * target.gamma_ll()
            + params.potential_right * (1.0 - target.gamma_ll())
            - 2.0 * params.hopping * target.gamma_lr());
    Ok(one_body + params.interaction * backend.eval_u1(target)?)
}

/// Exact-diagonalization reference attached to a minimization result.
#[derive(Debug, Clone)]
pub struct EdReference {
    pub energy: f64,
    pub d: f64,
    pub phi: f64,
    /// |E_functional - E_ed|.
    pub energy_error: f64,
    /// Frobenius distance between the unit-trace 1RDMs.
    pub rdm_distance: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone)]
pub struct EnergyMinimizationResult {
    pub energy: f64,
    pub minimizer: OneParticleRdm,
    pub d0: f64,
    pub phi0: f64,
    /// N (1 - D_0).
    pub n_bec: f64,
    /// Refined minimizer collapsed onto the boundary at U > 0 — a
    /// functional-backend error, since the exact gradient diverges
    /// there.
    pub boundary_pinned: bool,
    /// Best energy among scanned grid cells; always >= `energy`.
    pub scan_minimum: f64,
    pub reference: Option<EdReference>,
}

#[derive(Debug, Clone, Copy)]
pub struct MinimizeOptions {
    pub n_radial: usize,
    pub n_angular: usize,
    /// Attach an exact-diagonalization reference.
    pub compare_ed: bool,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            n_radial: 18,
            n_angular: 32,
            compare_ed: false,
        }
    }
}

const PINNED_DEPLETION: f64 = 1e-10;

/// Coarse (s = sqrt(D), φ) scan followed by Nelder-Mead refinement of
/// the best few separated basins.
pub fn minimize_energy<B: FunctionalBackend + ?Sized>(
    params: &DimerParams,
    backend: &B,
    opts: &MinimizeOptions,
) -> Result<EnergyMinimizationResult, EnergyError> {
    let s_max = GRID_D_CAP.sqrt();
    let nr = opts.n_radial.max(2);
    let na = opts.n_angular.max(4);
    let ds = s_max / (nr - 1) as f64;
    let dphi = 2.0 * core::f64::consts::PI / na as f64;

    // Scan; within each angle, sweep s outward and chain minimizer
    // hints.
    let mut cells: Vec<(f64, f64, f64)> = Vec::with_capacity(nr * na); // (E, s, phi)
    for j in 0..na {
        let phi = j as f64 * dphi;
        let mut hint: Option<Vec<f64>> = None;
        for i in 0..nr {
            let s = i as f64 * ds;
            let rdm = OneParticleRdm::from_polar(s * s, phi).expect("scan point is on the disc");
            let one_body = one_body_energy(&rdm, params);
            match backend.eval_u1_hinted(&rdm, hint.as_deref()) {
                Ok((f, m)) => {
                    if m.is_some() {
                        hint = m;
                    }
                    cells.push((one_body + params.interaction * f, s, phi));
                }
                Err(_) => {}
            }
        }
    }
    if cells.is_empty() {
        return Err(EnergyError::Backend(FunctionalError::NonConverged {
            best_residual: f64::INFINITY,
        }));
    }
    cells.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let scan_minimum = cells[0].0;

    // Up to 4 well-separated starting basins.
    let mut basins: Vec<(f64, f64)> = Vec::new();
    for &(_, s, phi) in &cells {
        let separated = basins.iter().all(|&(bs, bphi)| {
            let mut dp = (phi - bphi).abs() % (2.0 * core::f64::consts::PI);
            if dp > core::f64::consts::PI {
                dp = 2.0 * core::f64::consts::PI - dp;
            }
            (s - bs).abs() > 2.5 * ds || dp > 2.5 * dphi
        });
        if separated || basins.is_empty() {
            basins.push((s, phi));
        }
        if basins.len() == 4 {
            break;
        }
    }

    let objective = |v: &[f64]| -> f64 {
        let d = v[0] * v[0];
        if d > GRID_D_CAP {
            return 1e100 * (1.0 + d);
        }
        let rdm = OneParticleRdm::from_polar(d, v[1]).expect("point is on the disc");
        match total_energy(&rdm, params, backend) {
            Ok(e) => e,
            Err(_) => f64::INFINITY,
        }
    };

    let mut best_energy = f64::INFINITY;
    let mut best_point = [0.0f64, 0.0f64];
    for &(s, phi) in &basins {
        let (x, fx) = nelder_mead(objective, &[s, phi], &[0.6 * ds, 0.6 * dphi], 1e-14, 400);
        if fx < best_energy {
            best_energy = fx;
            best_point = [x[0], x[1]];
        }
    }
    if scan_minimum < best_energy {
        // Refinement never beats the scan only in pathological flat
        // landscapes; keep the certificate anyway.
        best_energy = scan_minimum;
        best_point = [cells[0].1, cells[0].2];
    }

    let d0 = (best_point[0] * best_point[0]).min(GRID_D_CAP);
    let tau = 2.0 * core::f64::consts::PI;
    let mut phi0 = best_point[1] % tau;
    if phi0 < 0.0 {
        phi0 += tau;
    }
    if !phi0.is_finite() {
        phi0 = 0.0;
    }
    let minimizer = OneParticleRdm::from_polar(d0, phi0).expect("minimizer is on the disc");
    let n = params.n_particles as f64;

    let reference = if opts.compare_ed {
        let gs = dimer::ground_state(params);
        let (ed_d, ed_phi) = gs.rdm.polar().unwrap_or((0.5, 0.0));
        let dll = minimizer.gamma_ll() - gs.rdm.gamma_ll();
        let dlr = minimizer.gamma_lr() - gs.rdm.gamma_lr();
        Some(EdReference {
            energy: gs.energy,
            d: ed_d,
            phi: ed_phi,
            energy_error: (best_energy - gs.energy).abs(),
            rdm_distance: (2.0 * (dll * dll + dlr * dlr)).sqrt(),
            degenerate: gs.is_degenerate(),
        })
    } else {
        None
    };

    Ok(EnergyMinimizationResult {
        energy: best_energy,
        minimizer,
        d0,
        phi0,
        n_bec: n * (1.0 - d0),
        boundary_pinned: params.interaction > 0.0 && params.hopping != 0.0 && d0 < PINNED_DEPLETION,
        scan_minimum,
        reference,
    })
}

fn one_body_energy(rdm: &OneParticleRdm, params: &DimerParams) -> f64 {
    params.n_particles as f64
        * (params.potential_left * rdm.gamma_ll()
            + params.potential_right * (1.0 - rdm.gamma_ll())
            - 2.0 * params.hopping * rdm.gamma_lr())
}

/// Condensate number N_BEC from the minimizer angle:
/// N [1 - (N-1) sin⁴φ₀ u² / (16 (sin φ₀ - Δv cos φ₀)²)] with
/// u = U/t, Δv = (v_L - v_R)/(2t). Valid for u sqrt(N-1) << 1.
pub fn n_bec_prediction(params: &DimerParams, phi0: f64) -> Result<f64, EnergyError> {
    if params.hopping == 0.0 {
        return Err(EnergyError::ZeroHopping);
    }
    let u = params.interaction / params.hopping;
    let dv = (params.potential_left - params.potential_right) / (2.0 * params.hopping);
    let den = phi0.sin() - dv * phi0.cos();
    if den.abs() < 1e-12 {
        return Err(EnergyError::ZeroDenominator);
    }
    let n = params.n_particles as f64;
    let s = phi0.sin();
    Ok(n * (1.0 - (n - 1.0) * s.powi(4) * u * u / (16.0 * den * den)))
}
