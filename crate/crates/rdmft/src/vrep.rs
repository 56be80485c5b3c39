//! v-representability geometry of the dimer's 1RDM disc.
//!
//! At t = 0 and the degeneracy potential of level n, the two
//! configurations (n, N-n) and (n+1, N-n-1) become degenerate ground
//! states; their superpositions trace an exclusion ellipse. Strict
//! ellipse interiors and the disc boundary (except the two poles) are
//! not v-representable.

// The Float trait supplies sqrt/sin/... in pure no_std builds; when
// std enters the crate graph (tests, std-enabled dependents) the
// inherent f64 methods shadow it and the import goes unused.
#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;

use crate::dimer::OneParticleRdm;

/// Level-n exclusion ellipse: center ((2n+1)/(2N), 0), semi-axis
/// 1/(2N) along gamma_LL and sqrt((N-n)(n+1))/(2N) along gamma_LR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExclusionEllipse {
    pub level: usize,
    pub n_particles: usize,
}

impl ExclusionEllipse {
    pub fn new(level: usize, n_particles: usize) -> Self {
        assert!(level < n_particles, "level must lie in 0..N");
        Self { level, n_particles }
    }

    pub fn center_gamma_ll(&self) -> f64 {
        (2 * self.level + 1) as f64 / (2 * self.n_particles) as f64
    }

    pub fn minor_radius(&self) -> f64 {
        0.5 / self.n_particles as f64
    }

    pub fn major_radius(&self) -> f64 {
        let n = self.n_particles as f64;
        let k = self.level as f64;
        ((n - k) * (k + 1.0)).sqrt() / (2.0 * n)
    }

    pub fn area(&self) -> f64 {
        let n = self.n_particles as f64;
        let k = self.level as f64;
        core::f64::consts::PI * ((n - k) * (k + 1.0)).sqrt() / (4.0 * n * n)
    }

    /// Left side of the ellipse equation; the curve is at 1/4, the
    /// interior below.
    pub fn quadratic_form(&self, gamma_ll: f64, gamma_lr: f64) -> f64 {
        let n = self.n_particles as f64;
        let k = self.level as f64;
        let x = n * gamma_ll - (k + 0.5);
        x * x + n * n * gamma_lr * gamma_lr / ((k + 1.0) * (n - k))
    }

    pub fn contains_strictly(&self, gamma_ll: f64, gamma_lr: f64) -> bool {
        self.quadratic_form(gamma_ll, gamma_lr) < 0.25 - 1e-12
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VRepClassification {
    VRepresentable,
    /// Strictly inside exclusion ellipse `level`.
    NonVrepEllipseInterior(usize),
    /// On the disc boundary away from the poles.
    NonVrepBoundary,
    /// |L><L| or |R><R|: the only v-representable boundary points.
    Pole,
}

impl VRepClassification {
    /// Stable numeric code for serialized class maps.
    pub fn code(&self) -> u8 {
        match self {
            VRepClassification::VRepresentable => 0,
            VRepClassification::NonVrepEllipseInterior(_) => 1,
            VRepClassification::NonVrepBoundary => 2,
            VRepClassification::Pole => 3,
        }
    }
}

/// Potential asymmetry v_L - v_R degenerating configurations
/// (n, N-n) and (n+1, N-n-1) at t = 0.
pub fn degeneracy_potential(level: usize, n_particles: usize, u: f64) -> f64 {
    assert!(level < n_particles);
    2.0 * u * (n_particles as f64 - 1.0 - 2.0 * level as f64)
}

pub fn classify(target: &OneParticleRdm, n_particles: usize) -> VRepClassification {
    let d = target.depletion();
    if d < 1e-12 {
        // gamma_LR = 0 and gamma_LL in {0, 1} are the poles.
        let at_pole = target.gamma_lr().abs() <= 1e-12
            && (target.gamma_ll().abs() <= 1e-12 || (target.gamma_ll() - 1.0).abs() <= 1e-12);
        return if at_pole {
            VRepClassification::Pole
        } else {
            VRepClassification::NonVrepBoundary
        };
    }
    for level in 0..n_particles {
        let e = ExclusionEllipse::new(level, n_particles);
        if e.contains_strictly(target.gamma_ll(), target.gamma_lr()) {
            return VRepClassification::NonVrepEllipseInterior(level);
        }
    }
    VRepClassification::VRepresentable
}

/// Fraction of the disc excluded by the ellipses:
/// p_N = sum_{n<N} sqrt((N-n)(n+1)) / N^2, converging to pi/8.
pub fn non_vrep_probability(n_particles: usize) -> f64 {
    let n = n_particles as f64;
    let mut sum = 0.0;
    for k in 0..n_particles {
        let k = k as f64;
        sum += ((n - k) * (k + 1.0)).sqrt();
    }
    sum / (n * n)
}

pub fn exclusion_ellipses(n_particles: usize) -> Vec<ExclusionEllipse> {
    (0..n_particles)
        .map(|level| ExclusionEllipse::new(level, n_particles))
        .collect()
}
