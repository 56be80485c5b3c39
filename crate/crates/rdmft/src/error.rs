//! Error types shared across the crate.

use core::fmt;

/// Errors from dimer model construction and diagonalization.
#[derive(Debug, Clone, PartialEq)]
pub enum DimerError {
    /// Parameter outside its allowed range.
    InvalidParams(&'static str),
    /// Configuration vector is not normalized to within 1e-12.
    NotNormalized { norm: f64 },
    /// The point violates the 1RDM disc constraint.
    OutsideDisc { gamma_ll: f64, gamma_lr: f64 },
    /// The polar angle is undefined at the maximally mixed point.
    CenterSingular,
    /// Ground state gap below the degeneracy threshold; the 1RDM is not
    /// unique.
    Degenerate { gap: f64 },
}

impl fmt::Display for DimerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimerError::InvalidParams(msg) => write!(f, "invalid dimer parameters: {msg}"),
            DimerError::NotNormalized { norm } => {
                write!(f, "configuration vector not normalized (norm = {norm})")
            }
            DimerError::OutsideDisc { gamma_ll, gamma_lr } => write!(
                f,
                "point ({gamma_ll}, {gamma_lr}) violates the 1RDM disc constraint"
            ),
            DimerError::CenterSingular => {
                write!(f, "polar angle undefined at the disc center")
            }
            DimerError::Degenerate { gap } => {
                write!(f, "degenerate ground state (gap = {gap})")
            }
        }
    }
}

/// Errors from functional evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionalError {
    /// No multistart run satisfied the 1RDM constraints to tolerance.
    NonConverged { best_residual: f64 },
    /// The closed-form N=2 functional has no directional limit at the
    /// disc center.
    CenterSingular,
    /// Target point violates the disc constraint.
    OutsideDisc { gamma_ll: f64, gamma_lr: f64 },
}

impl fmt::Display for FunctionalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionalError::NonConverged { best_residual } => {
                write!(f, "constrained search failed (best residual = {best_residual})")
            }
            FunctionalError::CenterSingular => {
                write!(f, "functional singular at the disc center")
            }
            FunctionalError::OutsideDisc { gamma_ll, gamma_lr } => write!(
                f,
                "target ({gamma_ll}, {gamma_lr}) violates the 1RDM disc constraint"
            ),
        }
    }
}

/// Errors from convex envelope construction.
#[derive(Debug, Clone, PartialEq)]
pub enum EnvelopeError {
    /// Base points are collinear; no two-dimensional domain exists.
    DegenerateHull,
    /// The grid has too few points to triangulate.
    TooFewPoints(usize),
}

impl fmt::Display for EnvelopeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnvelopeError::DegenerateHull => write!(f, "degenerate hull: collinear base points"),
            EnvelopeError::TooFewPoints(n) => write!(f, "too few points for an envelope: {n}"),
        }
    }
}

/// Errors from the boundary expansion.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryError {
    /// kappa vanishes at phi in {0, pi}; no perturbative curve leaves
    /// the pole toward the interior.
    KappaZero,
    /// D too small; the force expression overflows.
    Divergent,
}

impl fmt::Display for BoundaryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryError::KappaZero => write!(f, "kappa = 0 at phi in {{0, pi}}"),
            BoundaryError::Divergent => write!(f, "force diverges at D = 0"),
        }
    }
}

/// Errors from total-energy minimization.
#[derive(Debug, Clone, PartialEq)]
pub enum EnergyError {
    /// Functional backend failed at the requested point.
    Backend(FunctionalError),
    /// sin(phi0) = dv * cos(phi0): the condensate-number prediction has
    /// a vanishing denominator.
    ZeroDenominator,
    /// The prediction requires t != 0.
    ZeroHopping,
}

impl fmt::Display for EnergyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnergyError::Backend(e) => write!(f, "functional backend: {e}"),
            EnergyError::ZeroDenominator => {
                write!(f, "vanishing denominator in condensate-number prediction")
            }
            EnergyError::ZeroHopping => write!(f, "condensate-number prediction needs t != 0"),
        }
    }
}

impl From<FunctionalError> for EnergyError {
    fn from(e: FunctionalError) -> Self {
        EnergyError::Backend(e)
    }
}

/// Errors from the Bogoliubov per-mode functional.
#[derive(Debug, Clone, PartialEq)]
pub enum BogoliubovError {
    /// epsilon(n_p) diverges as n_p -> 0+.
    ZeroOccupation,
    /// The force diverges on the boundary D = 0.
    Divergent,
    /// Parameter outside its allowed range.
    InvalidParams(&'static str),
}

impl fmt::Display for BogoliubovError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BogoliubovError::ZeroOccupation => write!(f, "epsilon diverges at n_p = 0"),
            BogoliubovError::Divergent => write!(f, "force diverges at D = 0"),
            BogoliubovError::InvalidParams(msg) => write!(f, "invalid gas parameters: {msg}"),
        }
    }
}
