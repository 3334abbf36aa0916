//! One PASS/FAIL line per acceptance criterion. Exits nonzero on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use mi_spectra_core::hill::{build_matrix, eigenvalues, flat_eigenvalue, spectrum};
use mi_spectra_core::stokes::leading_order;
use mi_spectra_core::verify::{cloud_extent, compare};
use mi_spectra_core::{
    coefficients, critical_rho, eigencurves, expand, scaling_check, stability_report,
    symmetry_residual, wb_coefficient, CompareOptions, Complex64, DispersionSymbol, HillConfig,
    ScalingOptions, Verdict, WaveParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::{kdv, kdv_prime, quadratic_lambda_f, table, whitham, whitham_prime, Scalar};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn sym(s: &str) -> DispersionSymbol {
    DispersionSymbol::from_spec(s).expect("builtin symbol")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}

fn budget(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s, || {
        format!("runtime {:.2} s exceeds {limit_s} s", elapsed.as_secs_f64())
    })
}

fn stokes_tables() -> Outcome {
    let t0 = Instant::now();
    let mut worst: f64 = 0.0;
    let symbols: [(&str, Scalar); 2] = [("kdv", kdv), ("whitham", whitham)];
    for (name, j) in symbols {
        let s = sym(name);
        for rho in [1.0, 1.5] {
            for (n, alpha) in (2..=7u32).flat_map(|n| [(n, 1), (n, -1)]) {
                if n % 2 == 0 && alpha < 0 {
                    continue;
                }
                let p = WaveParams::new(n, alpha, rho).map_err(|e| e.to_string())?;
                let (modes, tau, c_tau) = table(n, alpha as f64, j, rho);
                let e = expand(&p, &s, tau + 1).map_err(|e| e.to_string())?;
                let eta_n = &e.eta_orders[n as usize - 1];
                for (mode, v) in modes {
                    worst = worst.max(rel(eta_n.coeff(mode), v));
                }
                worst = worst.max(rel(e.c_orders[tau], c_tau));
                let (_, lo_c, lo_tau) = leading_order(&p, &s).map_err(|e| e.to_string())?;
                ensure(lo_tau == tau, || {
                    format!("{name} N={n}: tau {lo_tau} != {tau}")
                })?;
                worst = worst.max(rel(lo_c, c_tau));
            }
        }
    }
    ensure(worst <= 1e-10, || format!("max relative error {worst:e}"))?;
    budget(t0.elapsed(), 5.0)?;
    Ok(format!("max relative error {worst:.1e}"))
}

fn mkdv_example() -> Outcome {
    let s = sym("kdv");
    let mut worst: f64 = 0.0;
    for rho in [0.5, 1.0, 1.5, 2.5] {
        for alpha in [1, -1] {
            let p = WaveParams::new(3, alpha, rho).map_err(|e| e.to_string())?;
            let e = expand(&p, &s, 3).map_err(|e| e.to_string())?;
            let a = alpha as f64;
            worst = worst.max((e.eta_orders[2].coeff(3) + a / (32.0 * rho * rho)).abs());
            worst = worst.max((e.c_orders[2] - 0.75 * a).abs());
        }
    }
    ensure(worst <= 1e-12, || format!("max error {worst:e}"))?;
    Ok(format!("max error {worst:.1e}"))
}

fn quadratic_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    let oracles: [(&str, Scalar, Scalar); 2] =
        [("kdv", kdv, kdv_prime), ("whitham", whitham, whitham_prime)];
    for _ in 0..20 {
        let rho: f64 = rng.random_range(0.5..3.0);
        let p = WaveParams::new(2, 1, rho).map_err(|e| e.to_string())?;
        for (name, j, dj) in oracles {
            let got = coefficients(&p, &sym(name), usize::MAX)
                .map_err(|e| e.to_string())?
                .lambda_f
                .ok_or("Lambda_f missing for even N")?;
            worst = worst.max(rel(got, quadratic_lambda_f(j, dj, rho)));
        }
    }
    ensure(worst <= 1e-12, || format!("max relative error {worst:e}"))?;
    Ok(format!(
        "20 rho x 2 symbols, max relative error {worst:.1e}"
    ))
}

fn whitham_critical() -> Outcome {
    let t0 = Instant::now();
    let p = WaveParams::new(2, 1, 1.0).map_err(|e| e.to_string())?;
    let rc = critical_rho(&sym("whitham"), &p, (0.5, 2.0)).map_err(|e| e.to_string())?;
    let dt = t0.elapsed();
    ensure((rc - 1.146).abs() <= 1e-3, || format!("rho_c = {rc}"))?;
    budget(dt, 1.0)?;
    Ok(format!(
        "rho_c = {rc:.6} in {:.1} ms",
        dt.as_secs_f64() * 1e3
    ))
}

fn mkdv_criterion() -> Outcome {
    let s = sym("kdv");
    let mut worst: f64 = 0.0;
    for rho in [0.3, 0.8, 1.0, 1.5, 2.2, 3.7] {
        let p = WaveParams::new(3, -1, rho).map_err(|e| e.to_string())?;
        let (d, v) = wb_coefficient(&p, &s).map_err(|e| e.to_string())?;
        worst = worst.max(rel(d, 3.0 * rho * rho));
        ensure(v == Verdict::Unstable, || {
            format!("rho={rho}: verdict {v:?}")
        })?;
    }
    ensure(worst <= 1e-12, || format!("max relative error {worst:e}"))?;
    Ok(format!(
        "6 rho, max relative error {worst:.1e}, all unstable"
    ))
}

fn flat_spectrum() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for (name, n, alpha) in [("kdv", 3, -1), ("whitham", 2, 1)] {
        let s = sym(name);
        let p = WaveParams::new(n, alpha, 1.5).map_err(|e| e.to_string())?;
        let e = expand(&p, &s, 9).map_err(|e| e.to_string())?;
        for _ in 0..10 {
            let mu: f64 = rng.random_range(-0.5..0.5);
            let mat = build_matrix(&e, &s, 0.0, mu, 5).map_err(|e| e.to_string())?;
            let mut got = eigenvalues(mat).ok_or("eigensolver failed")?;
            let mut want = (-5..=5)
                .map(|k| flat_eigenvalue(&s, 1.5, k, mu))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.to_string())?;
            got.sort_by(|x, y| x.im.total_cmp(&y.im));
            want.sort_by(|x, y| x.im.total_cmp(&y.im));
            for (g, w) in got.iter().zip(&want) {
                worst = worst.max((g - w).norm());
            }
        }
    }
    ensure(worst <= 1e-10, || format!("max error {worst:e}"))?;
    Ok(format!("max error {worst:.1e}"))
}

fn figure_one_config() -> HillConfig {
    HillConfig {
        fourier_modes: 5,
        mu_min: -0.01,
        mu_max: 0.01,
        mu_count: 201,
        stokes_order: 9,
        amplitude: 0.02,
    }
}

fn mkdv_focusing() -> WaveParams {
    WaveParams::new(3, -1, 1.5).expect("valid parameters")
}

fn exactly_symmetric(points: &[Complex64]) -> bool {
    points.iter().all(|l| points.contains(&-l.conj()))
}

fn symmetry_suite() -> Outcome {
    let s = sym("kdv");
    let cfg = figure_one_config();
    let e = expand(&mkdv_focusing(), &s, cfg.stokes_order).map_err(|e| e.to_string())?;
    let spec = spectrum(&e, &s, &cfg).map_err(|e| e.to_string())?;
    let res = symmetry_residual(&spec);
    ensure(res <= 1e-8, || format!("Hill symmetry residual {res:e}"))?;
    let grid = cfg.mu_grid();
    for (p, name, a) in [
        (mkdv_focusing(), "kdv", 0.02),
        (
            WaveParams::new(2, 1, 1.5).map_err(|e| e.to_string())?,
            "whitham",
            0.02,
        ),
        (
            WaveParams::new(3, 1, 1.5).map_err(|e| e.to_string())?,
            "kdv",
            0.02,
        ),
    ] {
        let curve = eigencurves(&p, &sym(name), a, &grid).map_err(|e| e.to_string())?;
        for smp in &curve.samples {
            let pts = [smp.lambda_plus, smp.lambda_minus, smp.lambda0];
            ensure(exactly_symmetric(&pts), || {
                format!(
                    "{name} N={}: asymmetric analytic triple at mu={}",
                    p.n, smp.mu
                )
            })?;
        }
    }
    Ok(format!(
        "Hill residual {res:.1e}; analytic triples exactly symmetric"
    ))
}

fn figure_one() -> Outcome {
    let t0 = Instant::now();
    let s = sym("kdv");
    let cfg = figure_one_config();
    let e = expand(&mkdv_focusing(), &s, cfg.stokes_order).map_err(|e| e.to_string())?;
    let spec = spectrum(&e, &s, &cfg).map_err(|e| e.to_string())?;
    let run = compare(&e, &spec, &CompareOptions::default()).map_err(|e| e.to_string())?;
    let dt = t0.elapsed();
    let r = &run.report;
    ensure(r.numeric_points > 0, || {
        "Hill unstable cloud is empty".into()
    })?;
    ensure(r.hausdorff_rel_to_qmax <= 0.05, || {
        format!("Hausdorff {:.3}% of q_max", 100.0 * r.hausdorff_rel_to_qmax)
    })?;
    ensure((r.q_max - 4.24e-2).abs() <= 5e-5, || {
        format!("q_max = {:e}", r.q_max)
    })?;
    ensure((r.p_max - 3.0e-4).abs() <= 5e-6, || {
        format!("p_max = {:e}", r.p_max)
    })?;
    budget(dt, 10.0)?;
    Ok(format!(
        "{} Hill points, Hausdorff {:.2e} = {:.3}% of q_max {:.4e}, p_max {:.3e}, {:.2} s",
        r.numeric_points,
        r.hausdorff_abs,
        100.0 * r.hausdorff_rel_to_qmax,
        r.q_max,
        r.p_max,
        dt.as_secs_f64()
    ))
}

fn whitham_family() -> Outcome {
    let t0 = Instant::now();
    let s = sym("whitham");
    let windows = [(2u32, 0.5), (3, 0.06), (4, 1e-4), (5, 0.002)];
    let mut sizes = Vec::new();
    let mut notes = Vec::new();
    for (n, w) in windows {
        let p = WaveParams::new(n, 1, 1.5).map_err(|e| e.to_string())?;
        let cfg = HillConfig {
            fourier_modes: 5,
            mu_min: -w,
            mu_max: w,
            mu_count: 210,
            stokes_order: 9,
            amplitude: 0.02,
        };
        let e = expand(&p, &s, cfg.stokes_order).map_err(|e| e.to_string())?;
        let spec = spectrum(&e, &s, &cfg).map_err(|e| e.to_string())?;
        let run = compare(&e, &spec, &CompareOptions::default()).map_err(|e| e.to_string())?;
        let r = &run.report;
        ensure(r.growth_rate_rel_err <= 0.10, || {
            format!(
                "N={n}: growth {:e} vs p_max {:e}",
                r.growth_rate_numeric, r.p_max
            )
        })?;
        let (h, wd) = cloud_extent(&run.numeric_cloud, r.re_threshold)
            .ok_or_else(|| format!("N={n}: empty Hill cloud"))?;
        sizes.push((n, h, wd));
        notes.push(format!("N={n} err {:.2}%", 100.0 * r.growth_rate_rel_err));
    }
    for (a, b) in [(0, 2), (1, 3)] {
        let (na, ha, wa) = sizes[a];
        let (nb, hb, wb) = sizes[b];
        ensure(ha > hb && wa > wb, || {
            format!("N={na} ({ha:e}, {wa:e}) not larger than N={nb} ({hb:e}, {wb:e})")
        })?;
    }
    let dt = t0.elapsed();
    budget(dt, 60.0)?;
    Ok(format!(
        "{}; sizes decrease within parity; {:.2} s",
        notes.join(", "),
        dt.as_secs_f64()
    ))
}

fn scaling_laws() -> Outcome {
    let opts = ScalingOptions::default();
    let mut notes = Vec::new();
    for (name, n, alpha) in [("kdv", 3, -1), ("whitham", 2, 1)] {
        let p = WaveParams::new(n, alpha, 1.5).map_err(|e| e.to_string())?;
        let r = scaling_check(&p, &sym(name), 0.02, 2.0, &opts).map_err(|e| e.to_string())?;
        let (eh, ew) = (r.height_rel_err(), r.width_rel_err());
        ensure(eh <= 0.05 && ew <= 0.05, || {
            format!(
                "{name} N={n}: height ratio {:.4} (want {}), width ratio {:.4} (want {})",
                r.height_ratio, r.expected_height_ratio, r.width_ratio, r.expected_width_ratio
            )
        })?;
        notes.push(format!(
            "N={n} height {:.4}/{} width {:.4}/{}",
            r.height_ratio, r.expected_height_ratio, r.width_ratio, r.expected_width_ratio
        ));
    }
    Ok(notes.join(", "))
}

fn sign_regression() -> Outcome {
    let s = sym("kdv");
    let p = mkdv_focusing();
    let cfg = figure_one_config();
    let a = cfg.amplitude;
    let rep = stability_report(&p, &s, a).map_err(|e| e.to_string())?;
    let ms = rep.mu_star.ok_or("no mu_star for focusing mKdV")?;
    let (q, pm) = (rep.q_max.unwrap_or(0.0), rep.p_max.unwrap_or(0.0));
    let e = expand(&p, &s, cfg.stokes_order).map_err(|e| e.to_string())?;
    let spec = spectrum(&e, &s, &cfg).map_err(|e| e.to_string())?;
    let inside: Vec<f64> = cfg
        .mu_grid()
        .into_iter()
        .filter(|&m| m > 0.0 && m < ms)
        .collect();
    let curve = eigencurves(&p, &s, a, &inside).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for smp in &curve.samples {
        let lp = smp.lambda_plus;
        ensure(lp.re > 0.0, || {
            format!("Re lambda+ = {:e} at mu={}", lp.re, smp.mu)
        })?;
        let slice = spec
            .per_mu
            .iter()
            .find(|sl| sl.mu == smp.mu)
            .ok_or("Floquet grids disagree")?;
        let nearest = slice
            .eigenvalues
            .iter()
            .min_by(|x, y| (*x - lp).norm().total_cmp(&(*y - lp).norm()))
            .ok_or("empty Hill slice")?;
        ensure(nearest.re > 1e-6 * pm, || {
            format!(
                "Hill partner of lambda+ at mu={} has Re {:e}",
                smp.mu, nearest.re
            )
        })?;
        worst = worst.max((nearest - lp).norm());
    }
    ensure(worst <= 0.05 * q, || {
        format!("Hill partner {:e} away from lambda+", worst)
    })?;
    Ok(format!(
        "{} mu in (0, {ms:.5}): Re lambda+ > 0, Hill partner within {:.2}% of q_max",
        curve.samples.len(),
        100.0 * worst / q
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("Stokes table oracle", stokes_tables),
        ("mKdV third-order example", mkdv_example),
        ("N=2 Lambda_f identity", quadratic_identity),
        ("Whitham critical wavenumber", whitham_critical),
        ("mKdV Whitham-Benjamin coefficient", mkdv_criterion),
        ("flat-spectrum oracle", flat_spectrum),
        ("symmetry suite", symmetry_suite),
        ("mKdV figure eight", figure_one),
        ("Whitham family N=2..5", whitham_family),
        ("scaling laws", scaling_laws),
        ("instability sign regression", sign_regression),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let out = run();
        let ms = t0.elapsed().as_secs_f64() * 1e3;
        match out {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{ms:.0} ms]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{ms:.0} ms]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
