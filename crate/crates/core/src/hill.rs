//! Fourier–Floquet–Hill spectrum of the linearization about a Stokes wave.
//!
//! For each Floquet exponent μ the Bloch operator
//! `(∂_z + iμ)(c − 𝒥_ρ^μ − Nαη^{N−1})` is truncated to the modes
//! `e^{inz}`, `|n| ≤ M`, and the resulting `(2M+1)×(2M+1)` complex matrix is
//! diagonalized densely.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::CosineSeries;
use crate::stokes::{StokesExpansion, WaveParams};
use crate::symbol::{DispersionSymbol, SymbolError};

/// Relative tail energy of `η^{N−1}` above which truncation is reported.
pub const TAIL_WARN_REL: f64 = 1e-12;
const SCHUR_EPS: f64 = 1e-15;
const SCHUR_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HillError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error("invalid Hill configuration: {0}")]
    Config(String),
    #[error("eigensolver did not converge for mu = {0:?}")]
    Eigensolver(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HillConfig {
    pub fourier_modes: usize,
    pub mu_min: f64,
    pub mu_max: f64,
    pub mu_count: usize,
    pub stokes_order: usize,
    pub amplitude: f64,
}

impl HillConfig {
    pub fn validate(&self) -> Result<(), HillError> {
        if self.mu_count == 0 {
            return Err(HillError::Config("mu_count must be at least 1".into()));
        }
        if !(self.mu_min <= self.mu_max) || !self.mu_min.is_finite() || !self.mu_max.is_finite() {
            return Err(HillError::Config(format!(
                "need finite mu_min <= mu_max, got [{}, {}]",
                self.mu_min, self.mu_max
            )));
        }
        if !self.amplitude.is_finite() {
            return Err(HillError::Config("amplitude must be finite".into()));
        }
        if self.stokes_order == 0 {
            return Err(HillError::Config("stokes_order must be positive".into()));
        }
        Ok(())
    }

    /// Notes when `M` is below `(N−1)·order`, the highest mode of `η^{N−1}`.
    /// Modes past `2M` are dropped; [`PotentialCoefficients::from_cosine`]
    /// warns when they carry noticeable weight.
    pub fn check_resolution(&self, n: u32) {
        let highest = (n as usize - 1) * self.stokes_order;
        if self.fourier_modes < highest {
            log::info!(
                "fourier_modes = {} resolves the potential up to mode {} of {} (N = {}, Stokes order {})",
                self.fourier_modes,
                2 * self.fourier_modes,
                highest,
                n,
                self.stokes_order
            );
        }
    }

    /// Equally spaced Floquet exponents, endpoints included.
    pub fn mu_grid(&self) -> Vec<f64> {
        linspace(self.mu_min, self.mu_max, self.mu_count)
    }

    pub fn dimension(&self) -> usize {
        2 * self.fourier_modes + 1
    }
}

pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| {
                if i == count - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

/// Complex Fourier coefficients `w_p`, `|p| ≤ max_mode`, of a real even
/// function.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialCoefficients {
    max_mode: usize,
    coeffs: Vec<Complex64>,
    /// ℓ² energy of the cosine coefficients dropped above `max_mode`.
    pub discarded: f64,
}

impl PotentialCoefficients {
    pub fn from_cosine(series: &CosineSeries, max_mode: usize) -> Self {
        let mut s = series.clone();
        let total: f64 = s.coeffs().iter().map(|c| c * c).sum();
        let discarded = s.truncate(max_mode);
        if total > 0.0 && discarded > TAIL_WARN_REL * total {
            log::warn!(
                "potential truncated at mode {max_mode} discards {:.3e} of its energy",
                discarded / total
            );
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * max_mode + 1];
        for (n, &c) in s.coeffs().iter().enumerate() {
            let v = if n == 0 { c } else { 0.5 * c };
            coeffs[max_mode + n] = Complex64::new(v, 0.0);
            coeffs[max_mode - n] = Complex64::new(v, 0.0);
        }
        Self {
            max_mode,
            coeffs,
            discarded,
        }
    }

    pub fn max_mode(&self) -> usize {
        self.max_mode
    }

    /// `w_p`, zero outside the stored range.
    pub fn get(&self, p: i64) -> Complex64 {
        if p.unsigned_abs() as usize > self.max_mode {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(p + self.max_mode as i64) as usize]
        }
    }

    /// `(p, w_p)` for `p = −max_mode ..= max_mode`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let m = self.max_mode as i64;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &w)| (i as i64 - m, w))
    }
}

/// Fourier coefficients of `η(a)^{N−1}` up to mode `max_mode`, by exact
/// convolution of the summed Stokes series.
pub fn potential_coefficients(
    exp: &StokesExpansion,
    a: f64,
    max_mode: usize,
) -> PotentialCoefficients {
    let eta = exp.wave_series(a);
    let mut pow = CosineSeries::constant(1.0);
    for _ in 1..exp.params.n {
        pow = pow.mul(&eta);
    }
    PotentialCoefficients::from_cosine(&pow, max_mode)
}

/// Bloch matrix with rows and columns indexed `−M..=M`:
/// `i(m+μ)[(c(a) − ȷ(ρ(n+μ)))δ_mn − Nα w_{m−n}]`.
pub fn build_matrix(
    exp: &StokesExpansion,
    symbol: &DispersionSymbol,
    a: f64,
    mu: f64,
    fourier_modes: usize,
) -> Result<DMatrix<Complex64>, HillError> {
    let w = potential_coefficients(exp, a, 2 * fourier_modes);
    assemble(&exp.params, symbol, exp.speed(a), &w, mu, fourier_modes)
}

fn assemble(
    params: &WaveParams,
    symbol: &DispersionSymbol,
    speed: f64,
    w: &PotentialCoefficients,
    mu: f64,
    fourier_modes: usize,
) -> Result<DMatrix<Complex64>, HillError> {
    let m = fourier_modes as i64;
    let dim = 2 * fourier_modes + 1;
    let coupling = params.n as f64 * params.alpha_f64();
    let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
    for row in 0..dim {
        let mm = row as i64 - m;
        let prefactor = Complex64::new(0.0, mm as f64 + mu);
        for col in 0..dim {
            let nn = col as i64 - m;
            let mut entry = -w.get(mm - nn) * coupling;
            if row == col {
                entry += speed - symbol.value(params.rho * (nn as f64 + mu))?;
            }
            mat[(row, col)] = prefactor * entry;
        }
    }
    Ok(mat)
}

/// Eigenvalues of a dense complex matrix via complex Schur decomposition.
pub fn eigenvalues(mat: DMatrix<Complex64>) -> Option<Vec<Complex64>> {
    let schur = nalgebra::linalg::Schur::try_new(mat, SCHUR_EPS, SCHUR_MAX_ITER)?;
    schur.eigenvalues().map(|v| v.iter().copied().collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HillSlice {
    pub mu: f64,
    pub eigenvalues: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HillSpectrum {
    pub symbol: String,
    pub params: WaveParams,
    pub config: HillConfig,
    pub per_mu: Vec<HillSlice>,
}

impl HillSpectrum {
    pub fn all_eigenvalues(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.per_mu
            .iter()
            .flat_map(|s| s.eigenvalues.iter().copied())
    }

    pub fn mu_values(&self) -> Vec<f64> {
        self.per_mu.iter().map(|s| s.mu).collect()
    }
}

/// Eigenvalues of the truncated Bloch operator on every μ of the grid,
/// evaluated in parallel and returned in grid order.
pub fn spectrum(
    exp: &StokesExpansion,
    symbol: &DispersionSymbol,
    config: &HillConfig,
) -> Result<HillSpectrum, HillError> {
    config.validate()?;
    config.check_resolution(exp.params.n);
    let a = config.amplitude;
    let w = potential_coefficients(exp, a, 2 * config.fourier_modes);
    let speed = exp.speed(a);
    let results: Vec<Result<HillSlice, (f64, Option<HillError>)>> = config
        .mu_grid()
        .par_iter()
        .map(|&mu| {
            let mat = assemble(&exp.params, symbol, speed, &w, mu, config.fourier_modes)
                .map_err(|e| (mu, Some(e)))?;
            let eigenvalues = eigenvalues(mat).ok_or((mu, None))?;
            Ok(HillSlice { mu, eigenvalues })
        })
        .collect();
    let mut per_mu = Vec::with_capacity(results.len());
    let mut failed = Vec::new();
    for r in results {
        match r {
            Ok(s) => per_mu.push(s),
            Err((_, Some(e))) => return Err(e),
            Err((mu, None)) => failed.push(mu),
        }
    }
    if !failed.is_empty() {
        return Err(HillError::Eigensolver(failed));
    }
    Ok(HillSpectrum {
        symbol: symbol.to_string(),
        params: exp.params,
        config: config.clone(),
        per_mu,
    })
}

/// Eigenvalues with `Re λ > re_threshold` and `|λ| < radius`.
pub fn unstable_points(spec: &HillSpectrum, re_threshold: f64, radius: f64) -> Vec<Complex64> {
    spec.all_eigenvalues()
        .filter(|l| l.re > re_threshold && l.norm() < radius)
        .collect()
}

/// `iΩ_{n,μ}` with `Ω_{n,μ} = (n+μ)(ȷ(ρ) − ȷ(ρ(n+μ)))`.
pub fn flat_eigenvalue(
    symbol: &DispersionSymbol,
    rho: f64,
    n: i64,
    mu: f64,
) -> Result<Complex64, SymbolError> {
    let k = n as f64 + mu;
    Ok(Complex64::new(
        0.0,
        k * (symbol.value(rho)? - symbol.value(rho * k)?),
    ))
}
