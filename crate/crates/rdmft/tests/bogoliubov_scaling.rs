//! Scaling checks on the homogeneous-gas functional that complement
//! the pointwise unit tests.

use rdmft::bogoliubov::{
    epsilon_of_occupation, functional_mode, homogeneous_bec_force, legendre_fenchel_check,
    mode_energy, GasParams,
};

#[test]
fn force_diverges_with_exponent_one_half() {
    let gas = GasParams::new(1.0, 1.0, vec![0.0]).unwrap();
    let n_total = 100.0;
    let m = 9;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..m {
        // Keep N D << 1 so the saturating correction (relative size
        // ~ sqrt(N D)) stays below the fit tolerance.
        let d = 1e-12 * 10f64.powf(4.0 * i as f64 / (m - 1) as f64);
        let f = homogeneous_bec_force(&gas, &[1.0], n_total, d).unwrap();
        let (x, y) = (d.ln(), (-f).ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let mf = m as f64;
    let slope = (mf * sxy - sx * sy) / (mf * sxx - sx * sx);
    assert!((slope + 0.5).abs() < 0.01, "slope = {slope}");
}

#[test]
fn mode_energy_matches_conjugate_pair_identity() {
    // At the conjugate pair (eps, n_p) the tangency is exact:
    // E_eps = eps n_p + F(n_p).
    for &nw0 in &[0.3, 1.0, 4.0] {
        for k in 0..32 {
            let np = 1e-3 * 10f64.powf(6.0 * k as f64 / 31.0);
            let eps = epsilon_of_occupation(np, nw0).unwrap();
            let lhs = mode_energy(eps, nw0);
            let rhs = eps * np + functional_mode(np, nw0);
            assert!(
                (lhs - rhs).abs() < 1e-12 * nw0,
                "nw0 = {nw0}, np = {np}: {lhs} vs {rhs}"
            );
        }
    }
}

#[test]
fn legendre_fenchel_gap_is_uniformly_tight() {
    for &nw0 in &[0.5, 1.0, 5.0] {
        for k in 0..64 {
            let eps = 10f64.powf(-3.0 + 6.0 * k as f64 / 63.0);
            let (_, _, gap) = legendre_fenchel_check(eps, nw0);
            assert!(gap <= 1e-10, "nw0 = {nw0}, eps = {eps}: {gap}");
        }
    }
}
