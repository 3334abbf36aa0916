//! Comparison of the closed-form figure eight with Hill's-method spectra.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytic::{self, AnalyticCoefficients, AnalyticError, Geometry};
use crate::hill::{self, HillConfig, HillError, HillSpectrum};
use crate::stokes::{self, StokesError, StokesExpansion, WaveParams};
use crate::symbol::DispersionSymbol;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("cannot measure distance to an empty point cloud ({0})")]
    EmptyCloud(&'static str),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error(transparent)]
    Hill(#[from] HillError),
    #[error(transparent)]
    Stokes(#[from] StokesError),
    #[error("invalid input: {0}")]
    Input(String),
}

fn directed(from: &[Complex64], to: &[Complex64]) -> f64 {
    from.par_iter()
        .map(|x| {
            to.iter()
                .map(|y| (x - y).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| 0.0, f64::max)
}

/// Symmetric Hausdorff distance between two finite point sets.
pub fn hausdorff(a: &[Complex64], b: &[Complex64]) -> Result<f64, VerifyError> {
    if a.is_empty() {
        return Err(VerifyError::EmptyCloud("first"));
    }
    if b.is_empty() {
        return Err(VerifyError::EmptyCloud("second"));
    }
    Ok(directed(a, b).max(directed(b, a)))
}

/// Largest Hausdorff distance between a μ-slice and its image under
/// `λ ↦ −λ̄`.
pub fn symmetry_residual(spec: &HillSpectrum) -> f64 {
    spec.per_mu
        .iter()
        .filter(|s| !s.eigenvalues.is_empty())
        .map(|s| {
            let image: Vec<Complex64> = s.eigenvalues.iter().map(|l| -l.conj()).collect();
            directed(&s.eigenvalues, &image).max(directed(&image, &s.eigenvalues))
        })
        .fold(0.0, f64::max)
}

/// Height `max|Im λ|` and width `max Re λ − min Re λ` of the points with
/// `|Re λ| > re_threshold`.
pub fn cloud_extent(points: &[Complex64], re_threshold: f64) -> Option<(f64, f64)> {
    let mut it = points
        .iter()
        .filter(|l| l.re.abs() > re_threshold)
        .peekable();
    it.peek()?;
    let (mut h, mut lo, mut hi) = (0.0f64, f64::INFINITY, f64::NEG_INFINITY);
    for l in it {
        h = h.max(l.im.abs());
        lo = lo.min(l.re);
        hi = hi.max(l.re);
    }
    Some((h, hi - lo))
}

/// Eigenvalues off the imaginary axis within `radius` of the origin.
pub fn off_axis_points(spec: &HillSpectrum, re_threshold: f64, radius: f64) -> Vec<Complex64> {
    spec.all_eigenvalues()
        .filter(|l| l.re.abs() > re_threshold && l.norm() < radius)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareOptions {
    /// Real parts below this are treated as zero. Defaults to
    /// `max(1e-14, 1e-6·p_max)`.
    pub re_threshold: Option<f64>,
    /// Neighborhood of the origin. Defaults to `5·q_max`.
    pub radius: Option<f64>,
    pub hausdorff_tol_rel: f64,
    pub growth_tol_rel: f64,
    pub symmetry_tol: f64,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self {
            re_threshold: None,
            radius: None,
            hausdorff_tol_rel: 0.05,
            growth_tol_rel: 0.10,
            symmetry_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub symbol: String,
    pub params: WaveParams,
    pub a: f64,
    pub delta: f64,
    pub q_max: f64,
    pub p_max: f64,
    pub mu_star: f64,
    pub re_threshold: f64,
    pub radius: f64,
    pub analytic_points: usize,
    pub numeric_points: usize,
    pub hausdorff_abs: f64,
    pub hausdorff_rel_to_qmax: f64,
    pub growth_rate_analytic: f64,
    pub growth_rate_numeric: f64,
    pub growth_rate_rel_err: f64,
    pub numeric_height: f64,
    pub numeric_width: f64,
    pub symmetry_residual: f64,
    pub hausdorff_ok: bool,
    pub growth_ok: bool,
    pub symmetry_ok: bool,
}

impl ComparisonReport {
    pub fn passed(&self) -> bool {
        self.hausdorff_ok && self.growth_ok && self.symmetry_ok
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn summary(&self) -> String {
        format!(
            "N={} rho={} a={}: delta={:.6e} q_max={:.6e} p_max={:.6e}\n\
             hill points={} max Re={:.6e} (rel err {:.3e})\n\
             hausdorff={:.6e} ({:.3e} of q_max) symmetry residual={:.3e}\n\
             verdict: hausdorff {} growth {} symmetry {}",
            self.params.n,
            self.params.rho,
            self.a,
            self.delta,
            self.q_max,
            self.p_max,
            self.numeric_points,
            self.growth_rate_numeric,
            self.growth_rate_rel_err,
            self.hausdorff_abs,
            self.hausdorff_rel_to_qmax,
            self.symmetry_residual,
            ok(self.hausdorff_ok),
            ok(self.growth_ok),
            ok(self.symmetry_ok),
        )
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAIL"
    }
}

/// Everything produced by one analytic-versus-Hill run.
#[derive(Debug, Clone)]
pub struct ComparisonRun {
    pub report: ComparisonReport,
    pub coefficients: AnalyticCoefficients,
    pub curve: analytic::SpectralCurve,
    pub analytic_cloud: Vec<Complex64>,
    pub numeric_cloud: Vec<Complex64>,
    pub spectrum: HillSpectrum,
}

/// Compares an existing Hill spectrum with the analytic curves sampled on the
/// same Floquet grid.
pub fn compare(
    exp: &StokesExpansion,
    spec: &HillSpectrum,
    opts: &CompareOptions,
) -> Result<ComparisonRun, VerifyError> {
    let symbol = &exp.symbol;
    let a = spec.config.amplitude;
    let c = analytic::coefficients(&exp.params, symbol, usize::MAX)?;
    let g: Geometry = analytic::geometry(&c, a)?;
    let mu_star = analytic::mu_star_from(&c, a)?;
    let re_threshold = opts.re_threshold.unwrap_or((1e-6 * g.p_max).max(1e-14));
    let radius = opts.radius.unwrap_or(5.0 * g.q_max);
    let curve = analytic::eigencurves_from(&c, a, &spec.mu_values());
    let analytic_cloud: Vec<Complex64> = curve
        .unstable_cloud(re_threshold)
        .into_iter()
        .filter(|l| l.norm() < radius)
        .collect();
    let numeric_cloud = off_axis_points(spec, re_threshold, radius);
    let h = hausdorff(&analytic_cloud, &numeric_cloud)?;
    let growth_numeric = numeric_cloud
        .iter()
        .map(|l| l.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let growth_analytic = analytic_cloud
        .iter()
        .map(|l| l.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let rel = (growth_numeric - g.p_max).abs() / g.p_max;
    let (height, width) = cloud_extent(&numeric_cloud, re_threshold).unwrap_or((0.0, 0.0));
    let sym = symmetry_residual(spec);
    let report = ComparisonReport {
        symbol: symbol.to_string(),
        params: exp.params,
        a,
        delta: c.delta,
        q_max: g.q_max,
        p_max: g.p_max,
        mu_star,
        re_threshold,
        radius,
        analytic_points: analytic_cloud.len(),
        numeric_points: numeric_cloud.len(),
        hausdorff_abs: h,
        hausdorff_rel_to_qmax: if g.q_max > 0.0 { h / g.q_max } else { f64::NAN },
        growth_rate_analytic: growth_analytic,
        growth_rate_numeric: growth_numeric,
        growth_rate_rel_err: rel,
        numeric_height: height,
        numeric_width: width,
        symmetry_residual: sym,
        hausdorff_ok: h <= opts.hausdorff_tol_rel * g.q_max,
        growth_ok: rel <= opts.growth_tol_rel,
        symmetry_ok: sym <= opts.symmetry_tol,
    };
    Ok(ComparisonRun {
        report,
        coefficients: c,
        curve,
        analytic_cloud,
        numeric_cloud,
        spectrum: spec.clone(),
    })
}

/// Builds the Stokes wave, runs Hill's method and compares.
pub fn run_comparison(
    params: &WaveParams,
    symbol: &DispersionSymbol,
    config: &HillConfig,
    opts: &CompareOptions,
) -> Result<ComparisonRun, VerifyError> {
    let exp = stokes::expand(params, symbol, config.stokes_order)?;
    let spec = hill::spectrum(&exp, symbol, config)?;
    compare(&exp, &spec, opts)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingOptions {
    pub fourier_modes: usize,
    pub stokes_order: usize,
    /// Floquet exponents sampled on `[0, window·μ*]`.
    pub mu_points: usize,
    pub window: f64,
}

impl Default for ScalingOptions {
    fn default() -> Self {
        Self {
            fourier_modes: 5,
            stokes_order: 9,
            mu_points: 2001,
            window: 1.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingResult {
    pub factor: f64,
    pub heights: (f64, f64),
    pub widths: (f64, f64),
    pub height_ratio: f64,
    pub width_ratio: f64,
    pub expected_height_ratio: f64,
    pub expected_width_ratio: f64,
}

impl ScalingResult {
    pub fn height_rel_err(&self) -> f64 {
        (self.height_ratio / self.expected_height_ratio - 1.0).abs()
    }

    pub fn width_rel_err(&self) -> f64 {
        (self.width_ratio / self.expected_width_ratio - 1.0).abs()
    }
}

/// Measures the Hill figure eight at `a` and `a/factor` and returns the
/// height and width ratios next to the predicted powers of `factor`.
pub fn scaling_check(
    params: &WaveParams,
    symbol: &DispersionSymbol,
    a: f64,
    factor: f64,
    opts: &ScalingOptions,
) -> Result<ScalingResult, VerifyError> {
    if !(factor > 1.0) || !(a > 0.0) {
        return Err(VerifyError::Input(format!(
            "need a > 0 and factor > 1, got a={a}, factor={factor}"
        )));
    }
    let c = analytic::coefficients(params, symbol, usize::MAX)?;
    if !c.is_unstable() {
        return Err(AnalyticError::Stable { delta: c.delta }.into());
    }
    let exp = stokes::expand(params, symbol, opts.stokes_order)?;
    let measure = |amp: f64| -> Result<(f64, f64), VerifyError> {
        let g = analytic::geometry(&c, amp)?;
        let ms = analytic::mu_star_from(&c, amp)?;
        let cfg = HillConfig {
            fourier_modes: opts.fourier_modes,
            mu_min: 0.0,
            mu_max: opts.window * ms,
            mu_count: opts.mu_points,
            stokes_order: opts.stokes_order,
            amplitude: amp,
        };
        let spec = hill::spectrum(&exp, symbol, &cfg)?;
        let thr = (1e-6 * g.p_max).max(1e-14);
        let pts = off_axis_points(&spec, thr, 5.0 * g.q_max);
        cloud_extent(&pts, thr).ok_or(VerifyError::EmptyCloud("Hill unstable points"))
    };
    let (h1, w1) = measure(a)?;
    let (h2, w2) = measure(a / factor)?;
    let n = params.n as f64;
    let (eh, ew) = match c.parity {
        analytic::Parity::Even => (n - 1.0, 2.0 * n - 2.0),
        analytic::Parity::Odd => ((n - 1.0) / 2.0, n - 1.0),
    };
    Ok(ScalingResult {
        factor,
        heights: (h1, h2),
        widths: (w1, w2),
        height_ratio: h1 / h2,
        width_ratio: w1 / w2,
        expected_height_ratio: factor.powf(eh),
        expected_width_ratio: factor.powf(ew),
    })
}
