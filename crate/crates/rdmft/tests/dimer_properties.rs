//! Model-level properties: disc membership, symmetries, free-boson
//! limits, and agreement with an independent dense eigensolver.

use nalgebra::DMatrix;
use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};
use rdmft::dimer::{
    self, build_hamiltonian, rdm_from_state, ConfigurationVector, DimerParams,
};

fn random_state(rng: &mut SmallRng, n: usize) -> ConfigurationVector {
    let coeffs: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    match ConfigurationVector::normalized(coeffs) {
        Ok(s) => s,
        Err(_) => ConfigurationVector::normalized(vec![1.0; n + 1]).unwrap(),
    }
}

#[test]
fn random_states_map_into_the_disc() {
    let mut rng = SmallRng::seed_from_u64(11);
    for n in 2..=10usize {
        for _ in 0..1000 {
            let state = random_state(&mut rng, n);
            let rdm = rdm_from_state(&state);
            let x = rdm.gamma_ll() - 0.5;
            let r2 = rdm.gamma_lr() * rdm.gamma_lr() + x * x;
            assert!(r2 <= 0.25 + 1e-12, "N = {n}: r^2 = {r2}");
        }
    }
}

#[test]
fn free_bosons_fill_the_bonding_orbital() {
    // U = 0: E_0 = N * lowest eigenvalue of [[v_L, -t], [-t, v_R]].
    let mut rng = SmallRng::seed_from_u64(12);
    for n in 1..=50usize {
        let t: f64 = rng.gen_range(0.1..2.0);
        let vl: f64 = rng.gen_range(-1.0..1.0);
        let vr: f64 = rng.gen_range(-1.0..1.0);
        let params = DimerParams::new(n, t, vl, vr, 0.0).unwrap();
        let gs = dimer::ground_state(&params);
        let avg = 0.5 * (vl + vr);
        let single = avg - (t * t + 0.25 * (vl - vr) * (vl - vr)).sqrt();
        assert!(
            (gs.energy - n as f64 * single).abs() < 1e-10 * (n as f64).max(gs.energy.abs()),
            "N = {n}: {} vs {}",
            gs.energy,
            n as f64 * single
        );
    }
}

#[test]
fn left_right_relabeling_symmetry() {
    let mut rng = SmallRng::seed_from_u64(13);
    let mut checked = 0;
    while checked < 50 {
        let n = rng.gen_range(2..=8usize);
        let t: f64 = rng.gen_range(0.2..1.5);
        let vl: f64 = rng.gen_range(-1.0..1.0);
        let vr: f64 = rng.gen_range(-1.0..1.0);
        let u: f64 = rng.gen_range(0.05..1.0);
        let a = dimer::ground_state(&DimerParams::new(n, t, vl, vr, u).unwrap());
        let b = dimer::ground_state(&DimerParams::new(n, t, vr, vl, u).unwrap());
        if a.is_degenerate() || b.is_degenerate() {
            continue;
        }
        checked += 1;
        assert!((a.energy - b.energy).abs() < 1e-10 * a.energy.abs().max(1.0));
        assert!((a.rdm.gamma_ll() - (1.0 - b.rdm.gamma_ll())).abs() < 1e-10);
        assert!((a.rdm.gamma_lr() - b.rdm.gamma_lr()).abs() < 1e-10);
    }
}

#[test]
fn hopping_sign_gauge() {
    let mut rng = SmallRng::seed_from_u64(14);
    let mut checked = 0;
    while checked < 50 {
        let n = rng.gen_range(2..=8usize);
        let t: f64 = rng.gen_range(0.2..1.5);
        let vl: f64 = rng.gen_range(-1.0..1.0);
        let vr: f64 = rng.gen_range(-1.0..1.0);
        let u: f64 = rng.gen_range(0.05..1.0);
        let a = dimer::ground_state(&DimerParams::new(n, t, vl, vr, u).unwrap());
        let b = dimer::ground_state(&DimerParams::new(n, -t, vl, vr, u).unwrap());
        if a.is_degenerate() || b.is_degenerate() {
            continue;
        }
        checked += 1;
        assert!((a.energy - b.energy).abs() < 1e-10 * a.energy.abs().max(1.0));
        assert!((a.rdm.gamma_ll() - b.rdm.gamma_ll()).abs() < 1e-10);
        assert!((a.rdm.gamma_lr() + b.rdm.gamma_lr()).abs() < 1e-10);
    }
}

#[test]
fn polar_cartesian_round_trip() {
    let mut rng = SmallRng::seed_from_u64(15);
    for _ in 0..2000 {
        let d: f64 = rng.gen_range(0.0..0.499);
        let phi: f64 = rng.gen_range(0.0..core::f64::consts::TAU);
        let rdm = rdmft::OneParticleRdm::from_polar(d, phi).unwrap();
        let (d2, phi2) = rdm.polar().unwrap();
        assert!((d - d2).abs() < 1e-12);
        let mut dphi = (phi - phi2).abs();
        if dphi > core::f64::consts::PI {
            dphi = core::f64::consts::TAU - dphi;
        }
        assert!(dphi < 1e-10, "phi {phi} vs {phi2}");
    }
}

#[test]
fn tridiagonal_solver_matches_dense_oracle() {
    let mut rng = SmallRng::seed_from_u64(16);
    for _ in 0..200 {
        let n = rng.gen_range(1..=12usize);
        let params = DimerParams::new(
            n,
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(0.0..2.0),
        )
        .unwrap();
        let h = build_hamiltonian(&params);
        let m = n + 1;
        let mut dense = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            dense[(i, i)] = h.diag[i];
            if i + 1 < m {
                dense[(i, i + 1)] = h.off[i];
                dense[(i + 1, i)] = h.off[i];
            }
        }
        let eig = dense.symmetric_eigen();
        let e0_oracle = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        let gs = dimer::ground_state(&params);
        assert!(
            (gs.energy - e0_oracle).abs() < 1e-9 * e0_oracle.abs().max(1.0),
            "{} vs {}",
            gs.energy,
            e0_oracle
        );
        // Hamiltonian expectation of the returned state equals E_0.
        let hx = h.matvec(gs.state.coeffs());
        let exp: f64 = hx.iter().zip(gs.state.coeffs()).map(|(a, b)| a * b).sum();
        assert!((exp - gs.energy).abs() < 1e-8 * gs.energy.abs().max(1.0));
    }
}

#[test]
fn ground_state_rdm_matches_state() {
    let mut rng = SmallRng::seed_from_u64(17);
    for _ in 0..100 {
        let n = rng.gen_range(1..=10usize);
        let params = DimerParams::new(
            n,
            rng.gen_range(0.1..2.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(0.0..1.0),
        )
        .unwrap();
        let gs = dimer::ground_state(&params);
        let again = rdm_from_state(&gs.state);
        assert!((gs.rdm.gamma_ll() - again.gamma_ll()).abs() < 1e-12);
        assert!((gs.rdm.gamma_lr() - again.gamma_lr()).abs() < 1e-12);
    }
}
