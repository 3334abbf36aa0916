use std::f64::consts::PI;

use anyhow::{bail, Context};
use mi_spectra_core::analytic::{self, mu_star_from, SpectralCurve};
use mi_spectra_core::hill::{self, linspace};
use mi_spectra_core::stokes::RESONANCE_TOL;
use mi_spectra_core::verify::{self, CompareOptions};
use mi_spectra_core::{check_hypotheses, expand, Lemniscate, WaveParams};
use serde::Serialize;

use crate::config::{Emit, RunConfig};
use crate::output::{num, Sink};
use crate::svg::{self, Layer};

/// Samples of the wave profile over one period.
const PROFILE_POINTS: usize = 256;
/// Half the number of samples on each closed figure eight.
const LEMNISCATE_POINTS: usize = 400;
/// Floquet grid used when `spectrum` picks its own window.
const AUTO_MU_POINTS: usize = 401;
const AUTO_WINDOW: f64 = 1.05;

/// What a finished subcommand hands back to `main`.
pub struct Outcome {
    pub summary: String,
    /// False when the run completed but its checks did not hold.
    pub passed: bool,
}

impl Outcome {
    fn ok(summary: String) -> Self {
        Self {
            summary,
            passed: true,
        }
    }
}

pub fn check(cfg: &RunConfig, sink: &mut Sink) -> anyhow::Result<Outcome> {
    let symbol = cfg.symbol()?;
    let n_max = cfg.stokes_order.max(2) as u32;
    let r = check_hypotheses(&symbol, cfg.rho, n_max, RESONANCE_TOL);
    if cfg.emits(Emit::Json) {
        sink.json("hypotheses.json", &r)?;
    }
    let mut lines = vec![format!(
        "{} at rho={}: even {} normalized {} mean mode {} min gap {:.3e}",
        r.symbol,
        r.rho,
        yes(r.h1_even_ok),
        yes(r.h1_normalized_ok),
        yes(r.mean_mode_ok),
        r.min_gap
    )];
    for res in &r.h3_resonances {
        lines.push(format!("resonance at n={}: gap {:e}", res.n, res.gap));
    }
    for e in &r.errors {
        lines.push(format!("evaluation error: {e}"));
    }
    lines.push(format!(
        "hypotheses {}",
        if r.passed() { "hold" } else { "FAIL" }
    ));
    Ok(Outcome {
        summary: lines.join("\n"),
        passed: r.passed(),
    })
}

fn yes(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAIL"
    }
}

pub fn stokes(cfg: &RunConfig, sink: &mut Sink) -> anyhow::Result<Outcome> {
    let symbol = cfg.symbol()?;
    let e = expand(&cfg.params()?, &symbol, cfg.stokes_order)?;
    if cfg.emits(Emit::Json) {
        sink.json("stokes.json", &e.to_json())?;
    }
    if cfg.emits(Emit::Csv) {
        let z: Vec<f64> = (0..PROFILE_POINTS)
            .map(|i| 2.0 * PI * i as f64 / PROFILE_POINTS as f64)
            .collect();
        let eta = e.evaluate_wave(cfg.a, &z);
        sink.csv(
            "wave.csv",
            &["z", "eta"],
            z.iter().zip(&eta).map(|(z, y)| vec![num(*z), num(*y)]),
        )?;
    }
    Ok(Outcome::ok(format!(
        "order {} expansion at a={}: c(a)={:.12e}, truncation defect {:.3e}",
        e.order,
        cfg.a,
        e.speed(cfg.a),
        e.truncation_defect(cfg.a)?
    )))
}

pub fn wb(cfg: &RunConfig, sink: &mut Sink) -> anyhow::Result<Outcome> {
    let r = analytic::stability_report(&cfg.params()?, &cfg.symbol()?, cfg.a)?;
    if cfg.emits(Emit::Json) {
        sink.json("wb.json", &r)?;
    }
    let mut s = format!(
        "N={} alpha={} rho={}: delta={:.9e} -> {:?}",
        r.params.n, r.params.alpha, r.params.rho, r.delta, r.verdict
    );
    if let (Some(ms), Some(q), Some(p)) = (r.mu_star, r.q_max, r.p_max) {
        s.push_str(&format!(
            "\nat a={}: mu*={ms:.6e} q_max={q:.6e} p_max={p:.6e}",
            r.a
        ));
    }
    Ok(Outcome::ok(s))
}

#[derive(Serialize)]
struct SpectrumMember {
    #[serde(rename = "N")]
    n: u32,
    alpha: i32,
    delta: f64,
    curve: SpectralCurve,
    lemniscate: Option<Lemniscate>,
}

pub fn spectrum(cfg: &RunConfig, sink: &mut Sink) -> anyhow::Result<Outcome> {
    let symbol = cfg.symbol()?;
    let members = cfg.family.clone().unwrap_or_else(|| vec![cfg.n]);
    let mut out = Vec::new();
    for &n in &members {
        let p = WaveParams::new(n, cfg.alpha_for(n), cfg.rho)?;
        let c = analytic::coefficients(&p, &symbol, usize::MAX)?;
        let count = cfg.hill.as_ref().map_or(AUTO_MU_POINTS, |h| h.mu_count);
        let grid = match (&cfg.hill, &cfg.family, c.is_unstable()) {
            (Some(_), None, _) => cfg.hill_config()?.mu_grid(),
            (_, _, true) => {
                let ms = mu_star_from(&c, cfg.a)?;
                linspace(-AUTO_WINDOW * ms, AUTO_WINDOW * ms, count)
            }
            (_, _, false) => {
                bail!("N={n} is stable at this order and no Floquet window is configured")
            }
        };
        let curve = analytic::eigencurves_from(&c, cfg.a, &grid);
        let lem = if c.is_unstable() {
            Some(analytic::lemniscate_from(&c, cfg.a, LEMNISCATE_POINTS)?)
        } else {
            None
        };
        out.push(SpectrumMember {
            n,
            alpha: p.alpha,
            delta: c.delta,
            curve,
            lemniscate: lem,
        });
    }
    if cfg.emits(Emit::Csv) {
        let mut rows = Vec::new();
        for m in &out {
            for s in &m.curve.samples {
                for (branch, l) in [
                    ("plus", s.lambda_plus),
                    ("minus", s.lambda_minus),
                    ("zero", s.lambda0),
                ] {
                    rows.push(vec![
                        m.n.to_string(),
                        num(s.mu),
                        num(l.re),
                        num(l.im),
                        branch.to_string(),
                    ]);
                }
            }
        }
        sink.csv("spectrum.csv", &["N", "mu", "re", "im", "branch"], rows)?;
        let rows = out.iter().flat_map(|m| {
            m.lemniscate.iter().flat_map(move |l| {
                l.samples
                    .iter()
                    .map(move |&(p, q)| vec![m.n.to_string(), num(p), num(q)])
            })
        });
        sink.csv("lemniscate.csv", &["N", "p", "q"], rows)?;
    }
    if cfg.emits(Emit::Json) {
        sink.json("spectrum.json", &out)?;
    }
    if cfg.emits(Emit::Svg) {
        let layers: Vec<Layer> = out
            .iter()
            .filter_map(|m| {
                let l = m.lemniscate.as_ref()?;
                Some(Layer::Line {
                    points: l.samples.clone(),
                    color: if m.n % 2 == 0 { svg::RED } else { svg::BLUE },
                    label: format!("N = {}", m.n),
                })
            })
            .collect();
        sink.text(
            "overlay.svg",
            &svg::render(
                &format!(
                    "{} analytic spectrum, a = {}, rho = {}",
                    cfg.symbol, cfg.a, cfg.rho
                ),
                &layers,
            ),
        )?;
    }
    let lines: Vec<String> = out
        .iter()
        .map(|m| match &m.lemniscate {
            Some(l) => format!(
                "N={}: delta={:.6e} q_max={:.6e} p_max={:.6e}",
                m.n,
                m.delta,
                l.q_max,
                l.width / 2.0
            ),
            None => format!("N={}: delta={:.6e} stable at this order", m.n, m.delta),
        })
        .collect();
    Ok(Outcome::ok(lines.join("\n")))
}

pub fn hill(cfg: &RunConfig, sink: &mut Sink) -> anyhow::Result<Outcome> {
    let symbol = cfg.symbol()?;
    let hc = cfg.hill_config()?;
    let e = expand(&cfg.params()?, &symbol, cfg.stokes_order)?;
    let spec = hill::spectrum(&e, &symbol, &hc)?;
    if cfg.emits(Emit::Csv) {
        let rows = spec.per_mu.iter().flat_map(|s| {
            s.eigenvalues
                .iter()
                .map(move |l| vec![num(s.mu), num(l.re), num(l.im)])
        });
        sink.csv("hill.csv", &["mu", "re", "im"], rows)?;
    }
    if cfg.emits(Emit::Json) {
        sink.json("hill.json", &spec)?;
    }
    let max_re = spec
        .all_eigenvalues()
        .map(|l| l.re)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(Outcome::ok(format!(
        "{} Floquet exponents, {}x{} matrices: max Re lambda = {:.6e}, symmetry residual {:.3e}",
        spec.per_mu.len(),
        hc.dimension(),
        hc.dimension(),
        max_re,
        verify::symmetry_residual(&spec)
    )))
}

pub fn compare(cfg: &RunConfig, sink: &mut Sink) -> anyhow::Result<Outcome> {
    let symbol = cfg.symbol()?;
    let params = cfg.params()?;
    let run = verify::run_comparison(
        &params,
        &symbol,
        &cfg.hill_config()?,
        &CompareOptions::default(),
    )?;
    let r = &run.report;
    if cfg.emits(Emit::Json) {
        sink.text("compare.json", &(r.to_json() + "\n"))?;
    }
    if cfg.emits(Emit::Svg) {
        let near = |l: &mi_spectra_core::Complex64| l.norm() < r.radius;
        let analytic: Vec<(f64, f64)> = run
            .curve
            .all_points()
            .iter()
            .filter(|l| near(l))
            .map(|l| (l.re, l.im))
            .collect();
        let numeric: Vec<(f64, f64)> = run
            .spectrum
            .all_eigenvalues()
            .filter(near)
            .map(|l| (l.re, l.im))
            .collect();
        let layers = [
            Layer::Dots {
                points: analytic,
                color: svg::BLUE,
                label: "analytic".into(),
            },
            Layer::Dots {
                points: numeric,
                color: svg::RED,
                label: "Hill".into(),
            },
        ];
        let title = format!(
            "{} N = {}, a = {}, rho = {}",
            cfg.symbol, cfg.n, cfg.a, cfg.rho
        );
        sink.text("overlay.svg", &svg::render(&title, &layers))?;
    }
    Ok(Outcome {
        summary: r.summary(),
        passed: r.passed(),
    })
}

pub fn sweep(cfg: &RunConfig, sink: &mut Sink) -> anyhow::Result<Outcome> {
    let s = cfg
        .sweep
        .as_ref()
        .context("config has no \"sweep\" section")?;
    let r = analytic::sweep(&cfg.params()?, &cfg.symbol()?, s.lo, s.hi, s.count)?;
    if cfg.emits(Emit::Csv) {
        let rows = r.points.iter().map(|p| {
            vec![
                num(p.rho),
                p.delta.map(num).unwrap_or_default(),
                p.verdict.map(|v| format!("{v:?}")).unwrap_or_default(),
                p.error.clone().unwrap_or_default(),
            ]
        });
        sink.csv("sweep.csv", &["rho", "delta", "verdict", "error"], rows)?;
    }
    if cfg.emits(Emit::Json) {
        sink.json("sweep.json", &r)?;
    }
    let roots: Vec<String> = r.critical_rho.iter().map(|x| format!("{x:.6}")).collect();
    let failed = r.points.iter().filter(|p| p.error.is_some()).count();
    Ok(Outcome::ok(format!(
        "{} rho in [{}, {}]: sign changes at rho_c = [{}]{}",
        r.points.len(),
        s.lo,
        s.hi,
        roots.join(", "),
        if failed > 0 {
            format!(", {failed} points failed")
        } else {
            String::new()
        }
    )))
}
