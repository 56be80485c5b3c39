//! Constrained minimization of a diagonal quadratic form over
//! normalized configuration vectors subject to the two 1RDM
//! constraints.
//!
//! This is the engine behind the pure functional: minimize
//! `sum_n w_n a_n^2` over unit vectors `a` with prescribed
//! `gamma_LL(a)` and `gamma_LR(a)`. Every quantity involved is a
//! quadratic form in `a`, so each multistart run consists of a short
//! augmented-Lagrangian descent followed by a damped Newton polish of
//! the KKT system, which converges to machine precision near a
//! solution.

// The Float trait supplies sqrt/sin/... in pure no_std builds; when
// std enters the crate graph (tests, std-enabled dependents) the
// inherent f64 methods shadow it and the import goes unused.
#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;
use rand::SeedableRng;

use crate::error::FunctionalError;
use crate::linalg;
use crate::optim::random_unit_vector;

/// Multistart configuration.
#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Number of random sphere starts (structured seeds are added on
    /// top of these).
    pub random_starts: usize,
    /// RNG seed; identical options give identical results.
    pub seed: u64,
    /// Accepted residual on each 1RDM constraint.
    pub constraint_tol: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            random_starts: 16,
            seed: 0x5eed_cafe,
            constraint_tol: 1e-9,
        }
    }
}

impl SearchOptions {
    /// Cheaper profile for inner loops that supply good warm hints.
    pub fn fast(seed: u64) -> Self {
        Self {
            random_starts: 6,
            seed,
            constraint_tol: 1e-9,
        }
    }
}

/// Outcome of one constrained search.
#[derive(Debug, Clone)]
pub struct SearchResult {
    /// Minimal value of the quadratic form among feasible runs.
    pub value: f64,
    pub minimizer: Vec<f64>,
    pub residual_ll: f64,
    pub residual_lr: f64,
}

/// The three quadratic forms of the problem.
struct Forms {
    /// Objective diagonal.
    w: Vec<f64>,
    /// gamma_LL diagonal: k / N.
    a: Vec<f64>,
    /// gamma_LR couplings: sqrt((N-k)(k+1)) / N between k and k+1.
    c: Vec<f64>,
}

impl Forms {
    fn new(weights: &[f64]) -> Self {
        let m = weights.len();
        let n = m - 1;
        let nf = n as f64;
        let a = (0..m).map(|k| k as f64 / nf).collect();
        let c = (0..n)
            .map(|k| (((n - k) * (k + 1)) as f64).sqrt() / nf)
            .collect();
        Self {
            w: weights.to_vec(),
            a,
            c,
        }
    }

    fn dim(&self) -> usize {
        self.w.len()
    }

    fn q_w(&self, x: &[f64]) -> f64 {
        x.iter().zip(&self.w).map(|(v, w)| w * v * v).sum()
    }

    fn q_a(&self, x: &[f64]) -> f64 {
        x.iter().zip(&self.a).map(|(v, a)| a * v * v).sum()
    }

    fn q_c(&self, x: &[f64]) -> f64 {
        (0..self.c.len()).map(|k| self.c[k] * x[k] * x[k + 1]).sum()
    }

    /// (M x) for M = W - l1 A - l2 B - mu I, with B the symmetric
    /// matrix of the gamma_LR form.
    fn shifted_matvec(&self, x: &[f64], l1: f64, l2: f64, mu: f64, out: &mut [f64]) {
        let m = self.dim();
        for k in 0..m {
            let mut v = (self.w[k] - l1 * self.a[k] - mu) * x[k];
            if k > 0 {
                v -= l2 * 0.5 * self.c[k - 1] * x[k - 1];
            }
            if k + 1 < m {
                v -= l2 * 0.5 * self.c[k] * x[k + 1];
            }
            out[k] = v;
        }
    }

    /// Gradient of the ratio form x^T M x / x^T x at unit x, for the
    /// diagonal objective and the two constraint forms.
    fn gradients(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>, f64, f64, f64) {
        let m = self.dim();
        let qw = self.q_w(x);
        let qa = self.q_a(x);
        let qc = self.q_c(x);
        let mut gw = vec![0.0; m];
        let mut ga = vec![0.0; m];
        let mut gc = vec![0.0; m];
        for k in 0..m {
            gw[k] = 2.0 * (self.w[k] * x[k] - qw * x[k]);
            ga[k] = 2.0 * (self.a[k] * x[k] - qa * x[k]);
            let mut bx = 0.0;
            if k > 0 {
                bx += 0.5 * self.c[k - 1] * x[k - 1];
            }
            if k + 1 < m {
                bx += 0.5 * self.c[k] * x[k + 1];
            }
            gc[k] = 2.0 * (bx - qc * x[k]);
        }
        (gw, ga, gc, qw, qa, qc)
    }
}

/// Minimize `sum w_k a_k^2` over unit vectors with
/// `gamma_LL(a) = target_ll` and `gamma_LR(a) = target_lr`.
///
/// `extra_seeds` are structured starting points supplied by the caller
/// (boundary condensates, warm starts from neighboring grid cells).
/// The configuration basis vectors are always included as seeds.
pub fn constrained_minimum(
    weights: &[f64],
    target_ll: f64,
    target_lr: f64,
    opts: &SearchOptions,
    extra_seeds: &[Vec<f64>],
) -> Result<SearchResult, FunctionalError> {
    assert!(weights.len() >= 2, "need at least one particle");
    let forms = Forms::new(weights);
    let m = forms.dim();
    let scale = forms.w.iter().fold(1.0f64, |acc, w| acc.max(w.abs()));

    // Two candidate pools: "tight" points sit on the fiber to near
    // machine precision (exact seeds, fully converged KKT solves);
    // "loose" ones merely satisfy the requested tolerance. A loose
    // point can undercut the true minimum by O(|grad| * tol), so it
    // wins only by a decisive margin.
    let tight_tol = 1e-12 * scale.max(1.0);
    let mut best_tight: Option<SearchResult> = None;
    let mut best_tight_rank = f64::INFINITY;
    let mut best_loose: Option<SearchResult> = None;
    let mut best_residual = f64::INFINITY;

    let consider = |x: &[f64],
                    best_tight: &mut Option<SearchResult>,
                    best_tight_rank: &mut f64,
                    best_loose: &mut Option<SearchResult>,
                    best_residual: &mut f64| {
        let mut x = x.to_vec();
        if linalg::normalize(&mut x) == 0.0 {
            return;
        }
        let r1 = forms.q_a(&x) - target_ll;
        let r2 = forms.q_c(&x) - target_lr;
        let res = r1.abs().max(r2.abs());
        if res < *best_residual {
            *best_residual = res;
        }
        if res > opts.constraint_tol {
            return;
        }
        let value = forms.q_w(&x);
        let candidate = || SearchResult {
            value,
            minimizer: x.clone(),
            residual_ll: r1.abs(),
            residual_lr: r2.abs(),
        };
        // Rank tight candidates by value plus a conditioning penalty.
        // A candidate off the fiber by res can under-report the value
        // by up to N sqrt(N-1) sqrt(2 res) (the sqrt(D) cusp at the
        // disc boundary), and that coefficient is bounded by scale;
        // penalizing by the bound keeps quasi-feasible points from
        // beating exact seeds.
        let rank = value + scale * (2.0 * res).sqrt();
        if res <= tight_tol && rank < *best_tight_rank {
            *best_tight_rank = rank;
            *best_tight = Some(candidate());
        }
        if best_loose.as_ref().map_or(true, |b| value < b.value) {
            *best_loose = Some(candidate());
        }
    };

    let mut seeds: Vec<Vec<f64>> = Vec::new();
    for seed in extra_seeds {
        if seed.len() == m {
            seeds.push(seed.clone());
        }
    }
    for k in 0..m {
        let mut e = vec![0.0; m];
        e[k] = 1.0;
        seeds.push(e);
    }
    let mut rng = rand::rngs::SmallRng::seed_from_u64(opts.seed);
    for _ in 0..opts.random_starts {
        seeds.push(random_unit_vector(&mut rng, m));
    }

    for seed in &seeds {
        // Exact seeds (boundary condensates, configuration states on
        // axis targets) count as-is.
        consider(seed, &mut best_tight, &mut best_tight_rank, &mut best_loose, &mut best_residual);

        let mut x = seed.clone();
        if linalg::normalize(&mut x) == 0.0 {
            continue;
        }
        // Polish the raw seed first: structured seeds (perturbed
        // condensates, two-configuration states) are already in the
        // Newton basin near the boundary, where the descent phase can
        // drift away.
        if let Some(polished) = newton_polish(&forms, target_ll, target_lr, scale, &x) {
            consider(&polished, &mut best_tight, &mut best_tight_rank, &mut best_loose, &mut best_residual);
        }
        // Also project the seed onto the fiber without consulting the
        // objective: the nearest feasible point is a valid candidate
        // in its own right and keeps the seed's basin, which the full
        // KKT polish can abandon when the multiplier estimate is poor.
        {
            let mut p = x.clone();
            if project_onto_fiber(&forms, target_ll, target_lr, &mut p) {
                consider(&p, &mut best_tight, &mut best_tight_rank, &mut best_loose, &mut best_residual);
                if let Some(polished) = newton_polish(&forms, target_ll, target_lr, scale, &p) {
                    consider(&polished, &mut best_tight, &mut best_tight_rank, &mut best_loose, &mut best_residual);
                }
            }
        }
        augmented_lagrangian(&forms, target_ll, target_lr, scale, &mut x);
        consider(&x, &mut best_tight, &mut best_tight_rank, &mut best_loose, &mut best_residual);
        if let Some(polished) = newton_polish(&forms, target_ll, target_lr, scale, &x) {
            consider(&polished, &mut best_tight, &mut best_tight_rank, &mut best_loose, &mut best_residual);
        }
    }

    match (best_tight, best_loose) {
        (Some(tight), Some(loose)) => {
            if loose.value < tight.value - 1e-6 * scale {
                Ok(loose)
            } else {
                Ok(tight)
            }
        }
        (_, Some(loose)) => Ok(loose),
        _ => Err(FunctionalError::NonConverged { best_residual }),
    }
}

/// Gauss-Newton projection onto the fiber
/// `{q_a(x) = ta, q_c(x) = tc, |x| = 1}` by least-norm corrections;
/// the objective is never consulted. Returns false when the iteration
/// stalls (e.g. the target is outside the disc).
fn project_onto_fiber(forms: &Forms, ta: f64, tc: f64, x: &mut [f64]) -> bool {
    let m = forms.dim();
    // Iterate to the floating-point floor: a point left 1e-14 inside a
    // boundary target under-reports the value by O(sqrt(1e-14)).
    let mut res = f64::INFINITY;
    for _ in 0..200 {
        let g = [
            forms.q_a(x) - ta,
            forms.q_c(x) - tc,
            linalg::dot(x, x) - 1.0,
        ];
        let g_max = g[0].abs().max(g[1].abs()).max(g[2].abs());
        if g_max < 1e-15 {
            return true;
        }
        if g_max > 0.9 * res {
            // Stalled; accept only near-converged points.
            return g_max < 1e-13;
        }
        res = g_max;
        // Constraint gradients (unnormalized quadratic forms).
        let mut rows = [vec![0.0; m], vec![0.0; m], vec![0.0; m]];
        for k in 0..m {
            rows[0][k] = 2.0 * forms.a[k] * x[k];
            let mut bx = 0.0;
            if k > 0 {
                bx += 0.5 * forms.c[k - 1] * x[k - 1];
            }
            if k + 1 < m {
                bx += 0.5 * forms.c[k] * x[k + 1];
            }
            rows[1][k] = 2.0 * bx;
            rows[2][k] = 2.0 * x[k];
        }
        // Least-norm step: x += J^T mu, (J J^T) mu = -g.
        let mut jjt = vec![0.0; 9];
        let mut rhs = vec![-g[0], -g[1], -g[2]];
        for r in 0..3 {
            for c in 0..3 {
                jjt[r * 3 + c] = linalg::dot(&rows[r], &rows[c]);
            }
            jjt[r * 3 + r] += 1e-14;
        }
        if linalg::lu_solve(&mut jjt, &mut rhs, 3).is_none() {
            return false;
        }
        for k in 0..m {
            x[k] += rhs[0] * rows[0][k] + rhs[1] * rows[1][k] + rhs[2] * rows[2][k];
        }
    }
    false
}

/// Short augmented-Lagrangian descent on the unit sphere.
fn augmented_lagrangian(forms: &Forms, ta: f64, tc: f64, scale: f64, x: &mut Vec<f64>) {
    let mut mu1 = 0.0;
    let mut mu2 = 0.0;
    for &rho_rel in &[1e1, 1e2, 1e3, 1e4] {
        let rho = rho_rel * scale;
        bb_descent(forms, ta, tc, mu1, mu2, rho, x, 120);
        mu1 += rho * (forms.q_a(x) - ta);
        mu2 += rho * (forms.q_c(x) - tc);
    }
}

fn bb_descent(
    forms: &Forms,
    ta: f64,
    tc: f64,
    mu1: f64,
    mu2: f64,
    rho: f64,
    x: &mut Vec<f64>,
    iters: usize,
) {
    let m = forms.dim();
    let merit = |forms: &Forms, x: &[f64]| {
        let c1 = forms.q_a(x) - ta;
        let c2 = forms.q_c(x) - tc;
        forms.q_w(x) + mu1 * c1 + mu2 * c2 + 0.5 * rho * (c1 * c1 + c2 * c2)
    };
    let grad = |forms: &Forms, x: &[f64]| -> Vec<f64> {
        let (gw, ga, gc, _, qa, qc) = forms.gradients(x);
        let c1 = qa - ta;
        let c2 = qc - tc;
        let f1 = mu1 + rho * c1;
        let f2 = mu2 + rho * c2;
        (0..forms.dim())
            .map(|k| gw[k] + f1 * ga[k] + f2 * gc[k])
            .collect()
    };

    let mut g = grad(forms, x);
    let mut step = 1.0 / (2.0 * (scale_of(forms) + rho));
    let mut best_x = x.clone();
    let mut best_merit = merit(forms, x);
    for _ in 0..iters {
        let mut x_new: Vec<f64> = (0..m).map(|k| x[k] - step * g[k]).collect();
        if linalg::normalize(&mut x_new) == 0.0 {
            break;
        }
        let g_new = grad(forms, &x_new);
        let mut sty = 0.0;
        let mut sts = 0.0;
        for k in 0..m {
            let s = x_new[k] - x[k];
            let y = g_new[k] - g[k];
            sty += s * y;
            sts += s * s;
        }
        *x = x_new;
        g = g_new;
        if sty > 1e-300 {
            step = (sts / sty).min(1.0);
        } else {
            step *= 1.5;
        }
        let mv = merit(forms, x);
        if mv < best_merit {
            best_merit = mv;
            best_x.copy_from_slice(x);
        }
        if linalg::norm(&g) < 1e-13 * scale_of(forms).max(1.0) {
            break;
        }
    }
    *x = best_x;
}

fn scale_of(forms: &Forms) -> f64 {
    forms.w.iter().fold(1.0f64, |acc, w| acc.max(w.abs()))
}

/// Damped Newton iteration on the KKT system
///
/// ```text
/// (W - l1 A - l2 B - mu I) x = 0
/// x^T A x = target_ll,  x^T B x = target_lr,  x^T x = 1
/// ```
fn newton_polish(forms: &Forms, ta: f64, tc: f64, scale: f64, x0: &[f64]) -> Option<Vec<f64>> {
    let m = forms.dim();
    let dim = m + 3;
    let mut x = x0.to_vec();
    linalg::normalize(&mut x);

    // Least-squares multipliers from the stationarity condition.
    let (mut l1, mut l2, mut mu) = initial_multipliers(forms, &x)?;

    let residual = |x: &[f64], l1: f64, l2: f64, mu: f64| -> Vec<f64> {
        let mut r = vec![0.0; dim];
        forms.shifted_matvec(x, l1, l2, mu, &mut r[..m]);
        r[m] = forms.q_a(x) - ta;
        r[m + 1] = forms.q_c(x) - tc;
        r[m + 2] = linalg::dot(x, x) - 1.0;
        r
    };

    let mut r = residual(&x, l1, l2, mu);
    let mut rn = linalg::norm(&r);
    let tol = 1e-13 * scale.max(1.0);

    for _ in 0..60 {
        if rn < tol {
            break;
        }
        // Assemble the Jacobian.
        let mut jac = vec![0.0; dim * dim];
        for row in 0..m {
            jac[row * dim + row] = forms.w[row] - l1 * forms.a[row] - mu;
            if row > 0 {
                jac[row * dim + row - 1] = -l2 * 0.5 * forms.c[row - 1];
            }
            if row + 1 < m {
                jac[row * dim + row + 1] = -l2 * 0.5 * forms.c[row];
            }
            jac[row * dim + m] = -forms.a[row] * x[row];
            let mut bx = 0.0;
            if row > 0 {
                bx += 0.5 * forms.c[row - 1] * x[row - 1];
            }
            if row + 1 < m {
                bx += 0.5 * forms.c[row] * x[row + 1];
            }
            jac[row * dim + m + 1] = -bx;
            jac[row * dim + m + 2] = -x[row];
        }
        for col in 0..m {
            jac[m * dim + col] = 2.0 * forms.a[col] * x[col];
            let mut bx = 0.0;
            if col > 0 {
                bx += 0.5 * forms.c[col - 1] * x[col - 1];
            }
            if col + 1 < m {
                bx += 0.5 * forms.c[col] * x[col + 1];
            }
            jac[(m + 1) * dim + col] = 2.0 * bx;
            jac[(m + 2) * dim + col] = 2.0 * x[col];
        }

        let mut rhs: Vec<f64> = r.iter().map(|v| -v).collect();
        linalg::lu_solve(&mut jac, &mut rhs, dim)?;

        // Step halving if the residual does not decrease.
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..10 {
            let x_try: Vec<f64> = (0..m).map(|k| x[k] + t * rhs[k]).collect();
            let l1_try = l1 + t * rhs[m];
            let l2_try = l2 + t * rhs[m + 1];
            let mu_try = mu + t * rhs[m + 2];
            let r_try = residual(&x_try, l1_try, l2_try, mu_try);
            let rn_try = linalg::norm(&r_try);
            if rn_try < rn * (1.0 - 1e-4 * t) || rn_try < tol {
                x = x_try;
                l1 = l1_try;
                l2 = l2_try;
                mu = mu_try;
                r = r_try;
                rn = rn_try;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    // A partially converged point can be quasi-feasible yet undercut
    // the true minimum (the functional is sqrt-sensitive to constraint
    // violations near the boundary); only a full KKT solve counts.
    if rn >= tol {
        return None;
    }
    linalg::normalize(&mut x);
    Some(x)
}

fn initial_multipliers(forms: &Forms, x: &[f64]) -> Option<(f64, f64, f64)> {
    let m = forms.dim();
    let mut wa = vec![0.0; m];
    forms.shifted_matvec(x, 0.0, 0.0, 0.0, &mut wa); // W x
    let ax: Vec<f64> = (0..m).map(|k| forms.a[k] * x[k]).collect();
    let bx: Vec<f64> = (0..m)
        .map(|k| {
            let mut v = 0.0;
            if k > 0 {
                v += 0.5 * forms.c[k - 1] * x[k - 1];
            }
            if k + 1 < m {
                v += 0.5 * forms.c[k] * x[k + 1];
            }
            v
        })
        .collect();
    // Normal equations for [ax bx x] * (l1, l2, mu) ~ W x.
    let cols = [&ax[..], &bx[..], x];
    let mut g = [0.0; 9];
    let mut rhs = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            g[i * 3 + j] = linalg::dot(cols[i], cols[j]);
        }
        rhs[i] = linalg::dot(cols[i], &wa);
    }
    // Regularize: the columns can be nearly dependent at boundary
    // points.
    for i in 0..3 {
        g[i * 3 + i] += 1e-12;
    }
    let mut g = g.to_vec();
    let mut rhs = rhs.to_vec();
    linalg::lu_solve(&mut g, &mut rhs, 3)?;
    Some((rhs[0], rhs[1], rhs[2]))
}
