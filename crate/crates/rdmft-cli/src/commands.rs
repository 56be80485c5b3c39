//! Subcommand implementations. Every grid sweep fans cells out to a
//! rayon pool and merges them by index, so output bytes depend only
//! on the configuration and seed, never on scheduling.

use anyhow::Result;
use rayon::prelude::*;

use rdmft::bogoliubov::{
    functional_mode, legendre_fenchel_check, mode_energy, occupation_of_epsilon,
};
use rdmft::boundary;
use rdmft::dimer::{DimerParams, OneParticleRdm};
use rdmft::energy::{minimize_energy, n_bec_prediction, MinimizeOptions, PureNumericBackend};
use rdmft::envelope::functional_ensemble;
use rdmft::functional::{
    functional_pure_analytic_n2, functional_pure_numeric, grid_d_values, grid_phi_values,
    pure_ray, FunctionalGrid, FunctionalKind, GRID_D_CAP,
};
use rdmft::search::SearchOptions;
use rdmft::vrep::{classify, VRepClassification};

use crate::config::{parse_grid, FileConfig};
use crate::output::{num, write_json, Cell, Format, Table};
use crate::{BecForceArgs, BogoliubovArgs, EnergyMinArgs, GridArgs, VrepArgs};
use crate::{EXIT_NONCONVERGED, EXIT_USAGE};

/// Invalid flag/config values are usage errors (exit 2), not runtime
/// failures.
macro_rules! usage {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => {
                eprintln!("error: {err:#}");
                return Ok(EXIT_USAGE);
            }
        }
    };
}

/// The core crate's error enums are no_std and only implement Debug.
fn lib_err<E: core::fmt::Debug>(e: E) -> anyhow::Error {
    anyhow::anyhow!("{e:?}")
}

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()?)
}

/// Parallel pure-functional grid in the radial-major layout of
/// [`FunctionalGrid`]: rays are computed per angle and transposed.
fn compute_pure_parallel(
    n: usize,
    nr: usize,
    na: usize,
    d_min: f64,
    d_max: f64,
    opts: &SearchOptions,
    workers: Option<usize>,
) -> Result<FunctionalGrid> {
    let ds = grid_d_values(nr, d_min, d_max);
    let phis = grid_phi_values(na);
    let rays: Vec<Vec<rdmft::GridSample>> = pool(workers)?.install(|| {
        phis.par_iter()
            .map(|&phi| pure_ray(n, phi, &ds, opts))
            .collect()
    });
    let mut samples = Vec::with_capacity(nr * na);
    for i in 0..nr {
        for ray in &rays {
            samples.push(ray[i]);
        }
    }
    Ok(FunctionalGrid {
        n_particles: n,
        kind: FunctionalKind::Pure,
        n_radial: nr,
        n_angular: na,
        samples,
    })
}

pub fn functional_grid(args: &GridArgs, file: &FileConfig) -> Result<u8> {
    let n = args.n.or(file.n).unwrap_or(2);
    let spec = args.grid.clone().or_else(|| file.grid.clone());
    let (nr, na) = usage!(parse_grid(spec.as_deref().unwrap_or("50x50")));
    let d_min = args.d_min.or(file.d_min).unwrap_or(0.0);
    let d_max = args.d_max.or(file.d_max).unwrap_or(GRID_D_CAP);
    usage!(check_d_range(d_min, d_max));
    let format = usage!(Format::parse(
        args.format.as_deref().or(file.format.as_deref())
    ));
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let out = args.out.clone().or_else(|| file.out.clone());

    let opts = SearchOptions {
        seed,
        ..SearchOptions::default()
    };
    let pure = compute_pure_parallel(n, nr, na, d_min, d_max, &opts, args.workers.or(file.workers))?;
    let ensemble = functional_ensemble(&pure).map_err(lib_err)?;

    let mut table = Table::new(vec![
        "gamma_ll", "gamma_lr", "d", "phi", "pure", "ensemble", "analytic", "status",
    ]);
    let mut pure_min = f64::INFINITY;
    let mut pure_max = f64::NEG_INFINITY;
    for (p, e) in pure.samples.iter().zip(&ensemble.samples) {
        let analytic = if n == 2 {
            let rdm = OneParticleRdm::from_cartesian(p.gamma_ll, p.gamma_lr).map_err(lib_err)?;
            match functional_pure_analytic_n2(&rdm) {
                Ok(v) => num(v),
                Err(_) => Cell::Empty,
            }
        } else {
            Cell::Empty
        };
        if p.converged {
            pure_min = pure_min.min(p.value);
            pure_max = pure_max.max(p.value);
        }
        table.rows.push(vec![
            num(p.gamma_ll),
            num(p.gamma_lr),
            num(p.d),
            num(p.phi),
            if p.converged { num(p.value) } else { Cell::Empty },
            num(e.value),
            analytic,
            Cell::Text(if p.converged { "ok" } else { "nonconverged" }.into()),
        ]);
    }
    table.meta("command", serde_json::json!("functional-grid"));
    table.meta("n", serde_json::json!(n));
    table.meta("resolution", serde_json::json!([nr, na]));
    table.meta("d_range", serde_json::json!([d_min, d_max]));
    table.meta("seed", serde_json::json!(seed));
    // Constants for mapping values onto [0, 1] in plots.
    table.meta(
        "renormalization",
        serde_json::json!({ "pure_min": pure_min, "pure_max": pure_max }),
    );
    let bad = pure.nonconverged_fraction();
    table.meta("nonconverged_fraction", serde_json::json!(bad));
    table.write(format, out.as_deref())?;

    if bad > 0.01 {
        eprintln!(
            "error: {:.1}% of grid cells did not converge (limit 1%)",
            100.0 * bad
        );
        return Ok(EXIT_NONCONVERGED);
    }
    Ok(0)
}

pub fn vrep_map(args: &VrepArgs, file: &FileConfig) -> Result<u8> {
    let n = args.n.or(file.n).unwrap_or(2);
    let spec = args.grid.clone().or_else(|| file.grid.clone());
    let (nr, na) = usage!(parse_grid(spec.as_deref().unwrap_or("50x50")));
    let format = usage!(Format::parse(
        args.format.as_deref().or(file.format.as_deref())
    ));
    let out = args.out.clone().or_else(|| file.out.clone());

    let mut table = Table::new(vec![
        "gamma_ll", "gamma_lr", "d", "phi", "class_code", "ellipse_level",
    ]);
    for &d in &grid_d_values(nr, 0.0, GRID_D_CAP) {
        for &phi in &grid_phi_values(na) {
            let rdm = OneParticleRdm::from_polar(d, phi).map_err(lib_err)?;
            let class = classify(&rdm, n);
            let level = match class {
                VRepClassification::NonVrepEllipseInterior(l) => Cell::Int(l as i64),
                _ => Cell::Empty,
            };
            table.rows.push(vec![
                num(rdm.gamma_ll()),
                num(rdm.gamma_lr()),
                num(d),
                num(phi),
                Cell::Int(class.code() as i64),
                level,
            ]);
        }
    }
    table.meta("command", serde_json::json!("vrep-map"));
    table.meta("n", serde_json::json!(n));
    table.meta("resolution", serde_json::json!([nr, na]));
    table.write(format, out.as_deref())?;
    Ok(0)
}

pub fn bec_force(args: &BecForceArgs, file: &FileConfig) -> Result<u8> {
    let n = args.n.or(file.n).unwrap_or(2);
    let u = args.u.or(file.u).unwrap_or(1.0);
    let spec = args.grid.clone().or_else(|| file.grid.clone());
    let (nd, na) = usage!(parse_grid(spec.as_deref().unwrap_or("8x8")));
    let d_min = args.d_min.or(file.d_min).unwrap_or(1e-6);
    let d_max = args.d_max.or(file.d_max).unwrap_or(1e-4);
    usage!(check_d_range(d_min, d_max));
    usage!(if d_min > 0.0 {
        Ok(())
    } else {
        Err(anyhow::anyhow!("bec-force needs d_min > 0 (force diverges at the boundary)"))
    });
    let format = usage!(Format::parse(
        args.format.as_deref().or(file.format.as_deref())
    ));
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let out = args.out.clone().or_else(|| file.out.clone());

    let opts = SearchOptions {
        seed,
        ..SearchOptions::default()
    };
    // Log-spaced depletions: the force scales as 1/sqrt(D).
    let ds: Vec<f64> = (0..nd)
        .map(|i| d_min * (d_max / d_min).powf(i as f64 / (nd - 1) as f64))
        .collect();
    let phis = grid_phi_values(na);
    let cells: Vec<(f64, f64)> = ds
        .iter()
        .flat_map(|&d| phis.iter().map(move |&phi| (d, phi)))
        .collect();

    let rows: Vec<(f64, f64, f64, Option<f64>)> =
        pool(args.workers.or(file.workers))?.install(|| {
            cells
                .par_iter()
                .map(|&(d, phi)| {
                    let analytic = boundary::bec_force(d, phi, n, u).unwrap_or(f64::NAN);
                    let h = 0.1 * d;
                    let fd = || -> Option<f64> {
                        let lo = OneParticleRdm::from_polar(d - h, phi).ok()?;
                        let hi = OneParticleRdm::from_polar(d + h, phi).ok()?;
                        let flo = functional_pure_numeric(&lo, n, &opts).ok()?.value;
                        let fhi = functional_pure_numeric(&hi, n, &opts).ok()?.value;
                        Some(u * (fhi - flo) / (2.0 * h))
                    };
                    (d, phi, analytic, fd())
                })
                .collect()
        });

    let mut table = Table::new(vec!["d", "phi", "force_analytic", "force_numeric_fd"]);
    let mut nonconverged = 0usize;
    for (d, phi, analytic, fd) in rows {
        if fd.is_none() {
            nonconverged += 1;
        }
        table.rows.push(vec![
            num(d),
            num(phi),
            num(analytic),
            fd.map_or(Cell::Empty, num),
        ]);
    }
    table.meta("command", serde_json::json!("bec-force"));
    table.meta("n", serde_json::json!(n));
    table.meta("u", serde_json::json!(u));
    table.meta("seed", serde_json::json!(seed));
    table.write(format, out.as_deref())?;

    if nonconverged * 100 > table.rows.len() {
        eprintln!("error: {nonconverged} finite-difference cells did not converge");
        return Ok(EXIT_NONCONVERGED);
    }
    Ok(0)
}

pub fn energy_min(args: &EnergyMinArgs, file: &FileConfig) -> Result<u8> {
    let n = args.n.or(file.n).unwrap_or(2);
    let u = args.u.or(file.u).unwrap_or(1.0);
    let t = args.t.or(file.t).unwrap_or(1.0);
    let vl = args.vl.or(file.vl).unwrap_or(0.0);
    let vr = args.vr.or(file.vr).unwrap_or(0.0);
    let spec = args.grid.clone().or_else(|| file.grid.clone());
    let (nr, na) = usage!(parse_grid(spec.as_deref().unwrap_or("18x32")));
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let out = args.out.clone().or_else(|| file.out.clone());

    let params = usage!(DimerParams::new(n, t, vl, vr, u).map_err(|e| anyhow::anyhow!("{e:?}")));
    let mut backend = PureNumericBackend::new(n);
    backend.opts.seed = seed;
    let res = minimize_energy(
        &params,
        &backend,
        &MinimizeOptions {
            n_radial: nr,
            n_angular: na,
            compare_ed: true,
        },
    )
    .map_err(lib_err)?;
    let reference = res.reference.as_ref().expect("compare_ed was requested");

    let doc = serde_json::json!({
        "schema_version": 1,
        "command": "energy-min",
        "params": { "n": n, "t": t, "vl": vl, "vr": vr, "u": u },
        "seed": seed,
        "energy": res.energy,
        "d0": res.d0,
        "phi0": res.phi0,
        "n_bec": res.n_bec,
        "n_bec_prediction": n_bec_prediction(&params, res.phi0).ok(),
        "boundary_pinned": res.boundary_pinned,
        "ed_reference": {
            "energy": reference.energy,
            "d": reference.d,
            "phi": reference.phi,
            "degenerate": reference.degenerate,
        },
        "discrepancies": {
            "energy_error": reference.energy_error,
            "rdm_distance": reference.rdm_distance,
        },
    });
    write_json(&doc, out.as_deref())?;

    if res.boundary_pinned {
        eprintln!("error: minimizer collapsed onto the disc boundary at U > 0");
        return Ok(EXIT_NONCONVERGED);
    }
    Ok(0)
}

pub fn bogoliubov(args: &BogoliubovArgs, file: &FileConfig) -> Result<u8> {
    let nw0 = args.nw0.or(file.nw0).unwrap_or(1.0);
    let eps_min = args.eps_min.or(file.eps_min).unwrap_or(1e-3);
    let eps_max = args.eps_max.or(file.eps_max).unwrap_or(1e3);
    let points = args.points.or(file.points).unwrap_or(64);
    usage!(if nw0 > 0.0 && eps_min > 0.0 && eps_max > eps_min && points >= 2 {
        Ok(())
    } else {
        Err(anyhow::anyhow!(
            "need nw0 > 0, 0 < eps_min < eps_max and at least 2 points"
        ))
    });
    let format = usage!(Format::parse(
        args.format.as_deref().or(file.format.as_deref())
    ));
    let out = args.out.clone().or_else(|| file.out.clone());

    let mut table = Table::new(vec![
        "eps", "occupation", "functional", "mode_energy", "lf_gap",
    ]);
    let mut worst_gap = 0.0f64;
    for i in 0..points {
        let eps = eps_min * (eps_max / eps_min).powf(i as f64 / (points - 1) as f64);
        let np = occupation_of_epsilon(eps, nw0).map_err(|e| anyhow::anyhow!("{e:?}"))?;
        let (_, _, gap) = legendre_fenchel_check(eps, nw0);
        worst_gap = worst_gap.max(gap);
        table.rows.push(vec![
            num(eps),
            num(np),
            num(functional_mode(np, nw0)),
            num(mode_energy(eps, nw0)),
            num(gap),
        ]);
    }
    table.meta("command", serde_json::json!("bogoliubov"));
    table.meta("nw0", serde_json::json!(nw0));
    table.meta("worst_lf_gap", serde_json::json!(worst_gap));
    table.write(format, out.as_deref())?;

    if worst_gap > 1e-10 {
        eprintln!("error: Legendre-Fenchel gap {worst_gap:.2e} exceeds 1e-10");
        return Ok(EXIT_NONCONVERGED);
    }
    Ok(0)
}

fn check_d_range(d_min: f64, d_max: f64) -> Result<()> {
    anyhow::ensure!(
        (0.0..0.5).contains(&d_min) && d_min <= d_max && d_max < 0.5,
        "D range must satisfy 0 <= d_min <= d_max < 0.5"
    );
    Ok(())
}
