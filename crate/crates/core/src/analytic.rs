//! Closed-form spectrum near the origin: the Λ coefficient bundle, the
//! Whitham–Benjamin coefficient Δ, the eigenvalue curves λ±₁ and λ₀, the
//! edge μ* of the unstable Floquet window and the figure-eight geometry.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::{cosine_power, inner, CosineSeries};
use crate::stokes::{apply_d_inverse, StokesError, WaveParams};
use crate::symbol::{DispersionSymbol, SymbolError};
use crate::symbol::{Jet4, JET_ORDER};

/// Smallest |Λ̃_d| accepted before forming Λ_f.
pub const LAMBDA_D_TOL: f64 = 1e-10;
const PICARD_TOL: f64 = 1e-14;
const PICARD_MAX_ITER: usize = 100;
const BISECTION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error(transparent)]
    Stokes(#[from] StokesError),
    #[error("singular denominator: {0}")]
    Singular(String),
    #[error("wave is not modulationally unstable at this order (delta = {delta:e})")]
    Stable { delta: f64 },
    #[error("no sign change of delta on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("sign change of delta near rho = {rho} is a pole, not a root")]
    Pole { rho: f64 },
    #[error("Picard iteration for mu* did not converge in {0} iterations")]
    NoConvergence(usize),
    #[error("invalid input: {0}")]
    Input(String),
}

impl From<SymbolError> for AnalyticError {
    fn from(e: SymbolError) -> Self {
        AnalyticError::Stokes(StokesError::Symbol(e))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: u32) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// `p(μ) = Σ_j c_j μ^{2j}`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EvenPoly {
    pub coeffs: Vec<f64>,
}

impl EvenPoly {
    pub fn eval(&self, mu: f64) -> f64 {
        let m2 = mu * mu;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * m2 + c)
    }

    pub fn constant_term(&self) -> f64 {
        self.coeffs.first().copied().unwrap_or(0.0)
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn set(&mut self, j: usize, v: f64) {
        if j >= self.coeffs.len() {
            self.coeffs.resize(j + 1, 0.0);
        }
        self.coeffs[j] = v;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticCoefficients {
    pub params: WaveParams,
    pub parity: Parity,
    pub lambda11_a: f64,
    pub lambda11_mu: EvenPoly,
    pub lambda12: EvenPoly,
    pub lambda13: Option<f64>,
    pub lambda33_a: f64,
    pub lambda33_mu: EvenPoly,
    pub lambda_tilde_b: f64,
    pub lambda_tilde_d: f64,
    pub lambda_f: Option<f64>,
    /// Δ_even = Λ̃_bΛ_f or Δ_odd = αΛ̃_b.
    pub delta: f64,
    /// ȷ(ρ) and ρȷ′(ρ), reused by the curves.
    pub j_rho: f64,
    pub rho_j_prime: f64,
    /// Derivative orders that the Taylor sums asked for but the jets do not
    /// carry; those terms are omitted.
    pub dropped_terms: usize,
}

impl AnalyticCoefficients {
    /// Λ_b(μ) = −Λ₁₂(μ) − Λ₁₁^μ(μ).
    pub fn lambda_b(&self, mu: f64) -> f64 {
        -self.lambda12.eval(mu) - self.lambda11_mu.eval(mu)
    }

    /// `(D, κ)` with `Δ_BF = D a^κ − μ²Λ_b²`.
    pub fn radicand_scale(&self) -> (f64, i32) {
        let n = self.params.n as i32;
        match self.parity {
            Parity::Even => (self.delta, 2 * n - 2),
            Parity::Odd => (self.delta * self.lambda11_a, n - 1),
        }
    }

    /// Δ_BF(a, μ).
    pub fn delta_bf(&self, a: f64, mu: f64) -> f64 {
        let (d, kappa) = self.radicand_scale();
        let lb = self.lambda_b(mu);
        d * a.powi(kappa) - mu * mu * lb * lb
    }

    /// 𝓕₃ at leading order.
    pub fn f3(&self, a: f64) -> f64 {
        let n = self.params.n as i32;
        let kappa = match self.parity {
            Parity::Even => 2 * n - 2,
            Parity::Odd => n - 1,
        };
        a.powi(kappa) * self.lambda33_a
    }

    pub fn is_unstable(&self) -> bool {
        self.delta > 0.0
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Evaluates the coefficient bundle. `cap` is the largest power of `μ²`
/// kept beyond each polynomial's leading term; `usize::MAX` keeps every term
/// the derivative jets can supply.
pub fn coefficients(
    params: &WaveParams,
    symbol: &DispersionSymbol,
    cap: usize,
) -> Result<AnalyticCoefficients, AnalyticError> {
    params.validate()?;
    symbol.ensure_admissible()?;
    let n = params.n;
    let nf = n as f64;
    let rho = params.rho;
    let alpha = params.alpha_f64();
    let parity = Parity::of(n);
    let jr = symbol.jet(rho)?;
    let j_rho = jr.value();
    let (j1, j2) = (jr.derivative(1), jr.derivative(2));
    let rho_j_prime = rho * j1;
    let lambda_tilde_b = -(rho_j_prime + 0.5 * rho * rho * j2);
    let lambda_tilde_d = rho_j_prime + j_rho - 1.0;

    let mut dropped = 0usize;
    let (m_hi, j12_hi) = match parity {
        Parity::Even => (n as usize - 1, n as usize - 2),
        Parity::Odd => ((n as usize - 1) / 2, (n as usize).saturating_sub(3) / 2),
    };

    // Λ₁₁^μ: μ^{2m−2} ρ^{2m}/(2m)! ȷ^{(2m)}(ρ), m = 1..=m_hi
    let mut lambda11_mu = EvenPoly::default();
    for m in 1..=m_hi {
        let j = m - 1;
        if j > cap {
            break;
        }
        if 2 * m > JET_ORDER {
            dropped += 1;
            continue;
        }
        lambda11_mu.set(
            j,
            rho.powi(2 * m as i32) / factorial(2 * m) * jr.derivative(2 * m),
        );
    }

    // Λ₁₂: ρȷ′ + μ^{2j} ρ^{2j+1}/(2j+1)! ȷ^{(2j+1)}(ρ), j = 1..=j12_hi
    let mut lambda12 = EvenPoly::default();
    lambda12.set(0, rho_j_prime);
    for j in 1..=j12_hi {
        if j > cap {
            break;
        }
        if 2 * j + 1 > JET_ORDER {
            dropped += 1;
            continue;
        }
        lambda12.set(
            j,
            rho.powi(2 * j as i32 + 1) / factorial(2 * j + 1) * jr.derivative(2 * j + 1),
        );
    }

    // Λ₃₃^μ: −μ^{2m} ρ^{2m}/(2m)! ȷ^{(2m)}(0), m = 1..=m_hi
    let mut lambda33_mu = EvenPoly::default();
    match symbol.jet(0.0) {
        Ok(j0) => {
            for m in 1..=m_hi {
                if m - 1 > cap {
                    break;
                }
                if 2 * m > JET_ORDER {
                    dropped += 1;
                    continue;
                }
                lambda33_mu.set(
                    m,
                    -rho.powi(2 * m as i32) / factorial(2 * m) * j0.derivative(2 * m),
                );
            }
        }
        Err(e) => {
            log::warn!(
                "symbol not differentiable at k = 0 ({e}); omitting the mu terms of lambda33"
            );
        }
    }

    let cos_n = cosine_power(n);
    let cos1 = CosineSeries::mode(1, 1.0);
    let one = CosineSeries::constant(1.0);
    let (lambda11_a, lambda13, lambda33_a, lambda_f, delta) = match parity {
        Parity::Even => {
            let mean_gap = j_rho - 1.0;
            if mean_gap.abs() < crate::stokes::RESONANCE_TOL {
                return Err(AnalyticError::Singular("j(rho) - 1 vanishes".into()));
            }
            let d_cos_n = apply_d_inverse(&cos_n, symbol, rho)?;
            let cn_dcn = inner(&cos_n, &d_cos_n);
            let cn_one = inner(&cos_n, &one);
            let l11a =
                2.0 * nf * (1.0 - nf) * cn_dcn + nf * nf * cn_one * cn_one / (2.0 * mean_gap);
            let l13 = -nf * cn_one / std::f64::consts::SQRT_2;

            let cos_nm1 = cosine_power(n - 1);
            let mut proj = cos_nm1.clone();
            proj.set(1, 0.0);
            let d_proj = apply_d_inverse(&proj, symbol, rho)?;
            let l33a = nf * cn_dcn
                - 0.5 * nf * (nf - 1.0) * inner(&cosine_power(n - 2), &d_cos_n)
                - 0.5 * nf * nf * inner(&cos_nm1, &d_proj);

            if lambda_tilde_d.abs() < LAMBDA_D_TOL {
                return Err(AnalyticError::Singular(format!(
                    "lambda_tilde_d = {lambda_tilde_d:e}"
                )));
            }
            let lf = -l11a + l13 * l13 / lambda_tilde_d;
            (l11a, Some(l13), l33a, Some(lf), lambda_tilde_b * lf)
        }
        Parity::Odd => {
            let cn_c1 = inner(&cos_n, &cos1);
            let l11a = (nf - 1.0) * cn_c1;
            let l33a = alpha * cn_c1 - 0.5 * alpha * nf * inner(&cosine_power(n - 1), &one);
            (l11a, None, l33a, None, alpha * lambda_tilde_b)
        }
    };

    if dropped > 0 {
        log::debug!("{dropped} Taylor terms beyond fourth derivative omitted");
    }

    Ok(AnalyticCoefficients {
        params: *params,
        parity,
        lambda11_a,
        lambda11_mu,
        lambda12,
        lambda13,
        lambda33_a,
        lambda33_mu,
        lambda_tilde_b,
        lambda_tilde_d,
        lambda_f,
        delta,
        j_rho,
        rho_j_prime,
        dropped_terms: dropped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Unstable,
    StableAtThisOrder,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub symbol: String,
    pub params: WaveParams,
    pub a: f64,
    pub parity: Parity,
    pub delta: f64,
    pub verdict: Verdict,
    pub mu_star: Option<f64>,
    pub q_max: Option<f64>,
    pub width: Option<f64>,
    pub p_max: Option<f64>,
}

/// Δ and the verdict only.
pub fn wb_coefficient(
    params: &WaveParams,
    symbol: &DispersionSymbol,
) -> Result<(f64, Verdict), AnalyticError> {
    let c = coefficients(params, symbol, 0)?;
    Ok((c.delta, verdict_of(c.delta)))
}

fn verdict_of(delta: f64) -> Verdict {
    if delta > 0.0 {
        Verdict::Unstable
    } else {
        Verdict::StableAtThisOrder
    }
}

/// Full report at amplitude `a`; geometry is filled in only when unstable.
pub fn stability_report(
    params: &WaveParams,
    symbol: &DispersionSymbol,
    a: f64,
) -> Result<StabilityReport, AnalyticError> {
    let c = coefficients(params, symbol, usize::MAX)?;
    let verdict = verdict_of(c.delta);
    let (mut mu_star_v, mut q_max, mut width, mut p_max) = (None, None, None, None);
    if verdict == Verdict::Unstable {
        let g = geometry(&c, a)?;
        q_max = Some(g.q_max);
        width = Some(g.width);
        p_max = Some(g.p_max);
        mu_star_v = Some(mu_star_from(&c, a)?);
    }
    Ok(StabilityReport {
        symbol: symbol.to_string(),
        params: *params,
        a,
        parity: c.parity,
        delta: c.delta,
        verdict,
        mu_star: mu_star_v,
        q_max,
        width,
        p_max,
    })
}

/// Bisection root of Δ(ρ) on `bracket`.
pub fn critical_rho(
    symbol: &DispersionSymbol,
    params: &WaveParams,
    bracket: (f64, f64),
) -> Result<f64, AnalyticError> {
    let (mut lo, mut hi) = bracket;
    if !(lo > 0.0 && hi > lo) {
        return Err(AnalyticError::Input(format!("bad bracket ({lo}, {hi})")));
    }
    let delta_at = |rho: f64| -> Result<f64, AnalyticError> {
        Ok(coefficients(&params.with_rho(rho), symbol, 0)?.delta)
    };
    let (mut dlo, dhi) = (delta_at(lo)?, delta_at(hi)?);
    if dlo == 0.0 {
        return Ok(lo);
    }
    if dhi == 0.0 {
        return Ok(hi);
    }
    if dlo.signum() == dhi.signum() {
        return Err(AnalyticError::NoSignChange { lo, hi });
    }
    let scale = dlo.abs().min(dhi.abs());
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        let dm = delta_at(mid)?;
        if dm == 0.0 {
            return Ok(mid);
        }
        if dm.signum() == dlo.signum() {
            lo = mid;
            dlo = dm;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    if delta_at(root)?.abs() > scale {
        return Err(AnalyticError::Pole { rho: root });
    }
    Ok(root)
}

/// Edge μ* of the unstable window from `Δ_BF(a, μ*) = 0` by Picard iteration.
pub fn mu_star(
    params: &WaveParams,
    symbol: &DispersionSymbol,
    a: f64,
) -> Result<f64, AnalyticError> {
    let c = coefficients(params, symbol, usize::MAX)?;
    mu_star_from(&c, a)
}

pub fn mu_star_from(c: &AnalyticCoefficients, a: f64) -> Result<f64, AnalyticError> {
    if c.delta <= 0.0 {
        return Err(AnalyticError::Stable { delta: c.delta });
    }
    let (d, kappa) = c.radicand_scale();
    let num = (d * a.abs().powi(kappa)).sqrt();
    if num == 0.0 {
        return Ok(0.0);
    }
    if c.lambda_tilde_b == 0.0 {
        return Err(AnalyticError::Singular("lambda_tilde_b vanishes".into()));
    }
    let mut mu = num / c.lambda_tilde_b.abs();
    for _ in 0..PICARD_MAX_ITER {
        let lb = c.lambda_b(mu).abs();
        if lb == 0.0 {
            return Err(AnalyticError::Singular("lambda_b vanishes".into()));
        }
        let next = num / lb;
        if (next - mu).abs() < PICARD_TOL {
            return Ok(next);
        }
        mu = next;
    }
    Err(AnalyticError::NoConvergence(PICARD_MAX_ITER))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub mu: f64,
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
    pub lambda0: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralCurve {
    pub a: f64,
    pub samples: Vec<CurveSample>,
}

impl SpectralCurve {
    /// λ±₁ with real part above `re_threshold` in absolute value.
    pub fn unstable_cloud(&self, re_threshold: f64) -> Vec<Complex64> {
        self.samples
            .iter()
            .flat_map(|s| [s.lambda_plus, s.lambda_minus])
            .filter(|l| l.re.abs() > re_threshold)
            .collect()
    }

    /// Every λ in the curve, λ₀ included.
    pub fn all_points(&self) -> Vec<Complex64> {
        self.samples
            .iter()
            .flat_map(|s| [s.lambda_plus, s.lambda_minus, s.lambda0])
            .collect()
    }
}

/// λ±₁ and λ₀ on a grid of Floquet exponents.
pub fn eigencurves(
    params: &WaveParams,
    symbol: &DispersionSymbol,
    a: f64,
    mu_grid: &[f64],
) -> Result<SpectralCurve, AnalyticError> {
    let c = coefficients(params, symbol, usize::MAX)?;
    Ok(eigencurves_from(&c, a, mu_grid))
}

pub fn eigencurves_from(c: &AnalyticCoefficients, a: f64, mu_grid: &[f64]) -> SpectralCurve {
    let f3 = c.f3(a);
    let samples = mu_grid
        .iter()
        .map(|&mu| {
            let drift = -mu * c.lambda12.eval(mu);
            let r = c.delta_bf(a, mu);
            let (re, im) = if r >= 0.0 {
                (mu * r.sqrt(), 0.0)
            } else {
                (0.0, mu * (-r).sqrt())
            };
            let lambda_plus = Complex64::new(re, drift + im);
            let lambda_minus = Complex64::new(-re, drift - im);
            let lambda0 = Complex64::new(0.0, mu * (c.j_rho - 1.0 + f3 + c.lambda33_mu.eval(mu)));
            CurveSample {
                mu,
                lambda_plus,
                lambda_minus,
                lambda0,
            }
        })
        .collect();
    SpectralCurve { a, samples }
}

/// Height, width and maximal growth rate of the leading-order figure eight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub q_max: f64,
    pub width: f64,
    pub p_max: f64,
}

pub fn geometry(c: &AnalyticCoefficients, a: f64) -> Result<Geometry, AnalyticError> {
    if c.delta <= 0.0 {
        return Err(AnalyticError::Stable { delta: c.delta });
    }
    let tb = c.lambda_tilde_b.abs();
    if tb == 0.0 {
        return Err(AnalyticError::Singular("lambda_tilde_b vanishes".into()));
    }
    let (d, kappa) = c.radicand_scale();
    let da = d * a.abs().powi(kappa);
    let width = da / tb;
    Ok(Geometry {
        q_max: c.rho_j_prime.abs() * da.sqrt() / tb,
        width,
        p_max: 0.5 * width,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemniscate {
    pub q_max: f64,
    pub width: f64,
    /// `(p, q)` around the closed curve.
    pub samples: Vec<(f64, f64)>,
}

/// Closed-form figure eight `p² = q²/(ρȷ′)²·(D a^κ − q²Λ̃_b²/(ρȷ′)²)`,
/// traced with `2·points` samples.
pub fn lemniscate(
    params: &WaveParams,
    symbol: &DispersionSymbol,
    a: f64,
    points: usize,
) -> Result<Lemniscate, AnalyticError> {
    let c = coefficients(params, symbol, 0)?;
    lemniscate_from(&c, a, points)
}

pub fn lemniscate_from(
    c: &AnalyticCoefficients,
    a: f64,
    points: usize,
) -> Result<Lemniscate, AnalyticError> {
    let g = geometry(c, a)?;
    let points = points.max(2);
    let (d, kappa) = c.radicand_scale();
    let da = d * a.abs().powi(kappa);
    let s = c.rho_j_prime;
    let tb2 = c.lambda_tilde_b * c.lambda_tilde_b;
    let p_of = |q: f64| {
        let u = q / s;
        (u * u * (da - u * u * tb2)).max(0.0).sqrt()
    };
    let qs: Vec<f64> = (0..points)
        .map(|i| -g.q_max + 2.0 * g.q_max * i as f64 / (points - 1) as f64)
        .collect();
    let mut samples: Vec<(f64, f64)> = qs.iter().map(|&q| (p_of(q), q)).collect();
    samples.extend(qs.iter().rev().map(|&q| (-p_of(q), q)));
    // the endpoints close exactly
    let last = samples.len() - 1;
    for i in [0, points - 1, points, last] {
        samples[i].0 = 0.0;
    }
    Ok(Lemniscate {
        q_max: g.q_max,
        width: g.width,
        samples,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub rho: f64,
    pub delta: Option<f64>,
    pub verdict: Option<Verdict>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub symbol: String,
    pub n: u32,
    pub alpha: i32,
    pub points: Vec<SweepPoint>,
    /// Roots of Δ(ρ) refined by bisection between sign-changing neighbors.
    pub critical_rho: Vec<f64>,
}

/// Δ on `count` equally spaced ρ in `[lo, hi]` with refined sign changes.
pub fn sweep(
    params: &WaveParams,
    symbol: &DispersionSymbol,
    lo: f64,
    hi: f64,
    count: usize,
) -> Result<SweepReport, AnalyticError> {
    if !(lo > 0.0 && hi >= lo) || count == 0 {
        return Err(AnalyticError::Input(format!(
            "bad sweep range [{lo}, {hi}] with {count} points"
        )));
    }
    let rhos: Vec<f64> = if count == 1 {
        vec![lo]
    } else {
        (0..count)
            .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
            .collect()
    };
    use rayon::prelude::*;
    let points: Vec<SweepPoint> = rhos
        .par_iter()
        .map(|&rho| match wb_coefficient(&params.with_rho(rho), symbol) {
            Ok((delta, verdict)) => SweepPoint {
                rho,
                delta: Some(delta),
                verdict: Some(verdict),
                error: None,
            },
            Err(e) => SweepPoint {
                rho,
                delta: None,
                verdict: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let mut roots = Vec::new();
    for w in points.windows(2) {
        if let (Some(d0), Some(d1)) = (w[0].delta, w[1].delta) {
            if d0 == 0.0 {
                roots.push(w[0].rho);
            } else if d0.signum() != d1.signum() && d1 != 0.0 {
                match critical_rho(symbol, params, (w[0].rho, w[1].rho)) {
                    Ok(r) => roots.push(r),
                    Err(AnalyticError::Pole { rho }) => {
                        log::info!("delta changes sign through a pole near rho = {rho}")
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
    if let Some(last) = points.last() {
        if last.delta == Some(0.0) {
            roots.push(last.rho);
        }
    }
    Ok(SweepReport {
        symbol: symbol.to_string(),
        n: params.n,
        alpha: params.alpha,
        points,
        critical_rho: roots,
    })
}

/// Symbol jet at ρ, exposed for reporting.
pub fn symbol_jet(symbol: &DispersionSymbol, rho: f64) -> Result<Jet4, AnalyticError> {
    Ok(symbol.jet(rho)?)
}
