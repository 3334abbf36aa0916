//! Small-amplitude periodic traveling waves of
//! `𝒥_ρ η − c η + α η^N = 0`, expanded in the first-harmonic amplitude `a`.
//!
//! The amplitude is gauged so that `η₁ = cos z` and every higher order has a
//! zero `cos z` coefficient. At each order `m` the speed correction
//! `c_{m−1}` is fixed by requiring the `cos z` component of the right-hand
//! side to vanish, and `η_m` follows from inverting `𝒟_ρ = ȷ(ρ) − 𝒥_ρ` on the
//! remaining modes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::{cosine_power, inner, CosineSeries};
use crate::symbol::{DispersionSymbol, SymbolError};

/// Smallest |ȷ(ρ) − ȷ(ρn)| accepted when dividing by it.
pub const RESONANCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StokesError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error("resonance at mode {mode}: j(rho) - j(rho*{mode}) = {gap:e}")]
    Resonance { mode: usize, gap: f64 },
    #[error("input has a cos z component {0:e}, which spans the kernel of D_rho")]
    KernelComponent(f64),
    #[error("invalid wave parameters: {0}")]
    Params(String),
    #[error("expansion order {order} is below the nonlinearity power {n}")]
    OrderTooLow { order: usize, n: u32 },
}

/// Nonlinearity power `N`, sign `α` and wavenumber scaling `ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveParams {
    #[serde(rename = "N")]
    pub n: u32,
    pub alpha: i32,
    pub rho: f64,
}

impl WaveParams {
    pub fn new(n: u32, alpha: i32, rho: f64) -> Result<Self, StokesError> {
        let p = Self { n, alpha, rho };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), StokesError> {
        if self.n < 2 {
            return Err(StokesError::Params(format!(
                "N must be >= 2, got {}",
                self.n
            )));
        }
        if self.alpha != 1 && self.alpha != -1 {
            return Err(StokesError::Params(format!(
                "alpha must be +1 or -1, got {}",
                self.alpha
            )));
        }
        if self.n.is_multiple_of(2) && self.alpha != 1 {
            return Err(StokesError::Params("alpha must be +1 for even N".into()));
        }
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(StokesError::Params(format!(
                "rho must be positive, got {}",
                self.rho
            )));
        }
        Ok(())
    }

    pub fn alpha_f64(&self) -> f64 {
        self.alpha as f64
    }

    pub fn is_even(&self) -> bool {
        self.n.is_multiple_of(2)
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = rho;
        self
    }
}

/// Mode n ↦ ȷ(ρn) · coefficient.
pub fn apply_multiplier(
    series: &CosineSeries,
    symbol: &DispersionSymbol,
    rho: f64,
) -> Result<CosineSeries, StokesError> {
    let mut out = CosineSeries::zero();
    for (n, &c) in series.coeffs().iter().enumerate() {
        if c != 0.0 {
            out.set(n, c * symbol.value(rho * n as f64)?);
        }
    }
    Ok(out)
}

/// Inverse of `𝒟_ρ` off its kernel `span{cos z}`.
pub fn apply_d_inverse(
    series: &CosineSeries,
    symbol: &DispersionSymbol,
    rho: f64,
) -> Result<CosineSeries, StokesError> {
    let k1 = series.coeff(1);
    if k1.abs() > 1e-12 {
        return Err(StokesError::KernelComponent(k1));
    }
    let j_rho = symbol.value(rho)?;
    let mut out = CosineSeries::zero();
    for (n, &c) in series.coeffs().iter().enumerate() {
        if n == 1 || c == 0.0 {
            continue;
        }
        let gap = j_rho - symbol.value(rho * n as f64)?;
        if gap.abs() < RESONANCE_TOL {
            return Err(StokesError::Resonance { mode: n, gap });
        }
        out.set(n, c / gap);
    }
    Ok(out)
}

/// Truncated power of a polynomial in `a` with cosine-series coefficients.
///
/// `orders[i]` is the coefficient of `a^(i+1)`. The result holds the
/// coefficients of `a^0 ..= a^target_order` of `(Σ a^m η_m)^exponent`.
pub fn series_power(
    orders: &[CosineSeries],
    exponent: u32,
    target_order: usize,
) -> Vec<CosineSeries> {
    let mut base = vec![CosineSeries::zero(); target_order + 1];
    for (i, s) in orders.iter().enumerate() {
        if i < target_order {
            base[i + 1] = s.clone();
        }
    }
    let mut acc = vec![CosineSeries::zero(); target_order + 1];
    acc[0] = CosineSeries::constant(1.0);
    for _ in 0..exponent {
        let mut next = vec![CosineSeries::zero(); target_order + 1];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in base.iter().enumerate().take(target_order + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                next[i + j].add_scaled(&a.mul(b), 1.0);
            }
        }
        acc = next;
    }
    acc
}

/// Closed-form leading correction `(η_N, c_τ, τ)`.
pub fn leading_order(
    params: &WaveParams,
    symbol: &DispersionSymbol,
) -> Result<(CosineSeries, f64, usize), StokesError> {
    params.validate()?;
    let n = params.n;
    let alpha = params.alpha_f64();
    let cos_n = cosine_power(n);
    let cos1 = CosineSeries::mode(1, 1.0);
    if params.is_even() {
        let eta_n = apply_d_inverse(&cos_n, symbol, params.rho)?;
        let c_tau = alpha * inner(&cosine_power(n - 1).mul(&eta_n).scaled(n as f64), &cos1);
        Ok((eta_n, c_tau, 2 * n as usize - 2))
    } else {
        let proj = inner(&cos_n, &cos1);
        let mut rhs = cos_n.clone();
        rhs.add_scaled(&cos1, -proj);
        rhs.set(1, 0.0);
        let eta_n = apply_d_inverse(&rhs, symbol, params.rho)?.scaled(alpha);
        Ok((eta_n, alpha * proj, n as usize - 1))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StokesExpansion {
    pub params: WaveParams,
    pub order: usize,
    /// η₁ ..= η_M.
    pub eta_orders: Vec<CosineSeries>,
    /// c₀ ..= c_{M−1}.
    pub c_orders: Vec<f64>,
    pub symbol: DispersionSymbol,
}

/// Builds the order-`order` Stokes expansion.
pub fn expand(
    params: &WaveParams,
    symbol: &DispersionSymbol,
    order: usize,
) -> Result<StokesExpansion, StokesError> {
    params.validate()?;
    symbol.ensure_admissible()?;
    if order < params.n as usize {
        return Err(StokesError::OrderTooLow { order, n: params.n });
    }
    let alpha = params.alpha_f64();
    let rho = params.rho;
    let mut eta: Vec<CosineSeries> = vec![CosineSeries::mode(1, 1.0)];
    let mut c: Vec<f64> = vec![symbol.value(rho)?];
    for m in 2..=order {
        let power = series_power(&eta, params.n, m);
        // D η_m = α[η^N]_m − Σ_{k=1}^{m−1} c_k η_{m−k}
        let mut rhs = power[m].scaled(alpha);
        for (k, ck) in c.iter().enumerate().skip(1) {
            if *ck != 0.0 {
                rhs.add_scaled(&eta[m - k - 1], -ck);
            }
        }
        // η_{m−k} for m−k ≥ 2 carries no cos z, so this is all of c_{m−1}.
        let c_next = rhs.coeff(1);
        rhs.set(1, 0.0);
        eta.push(apply_d_inverse(&rhs, symbol, rho)?);
        c.push(c_next);
    }
    Ok(StokesExpansion {
        params: *params,
        order,
        eta_orders: eta,
        c_orders: c,
        symbol: symbol.clone(),
    })
}

impl StokesExpansion {
    /// η(a) = Σ a^m η_m as a single cosine series.
    pub fn wave_series(&self, a: f64) -> CosineSeries {
        let mut out = CosineSeries::zero();
        let mut am = 1.0;
        for eta_m in &self.eta_orders {
            am *= a;
            out.add_scaled(eta_m, am);
        }
        out
    }

    pub fn evaluate_wave(&self, a: f64, grid: &[f64]) -> Vec<f64> {
        let s = self.wave_series(a);
        grid.iter().map(|&z| s.eval(z)).collect()
    }

    /// c(a) = Σ c_m a^m.
    pub fn speed(&self, a: f64) -> f64 {
        self.c_orders.iter().rev().fold(0.0, |acc, cm| acc * a + cm)
    }

    /// Coefficients of the profile-equation residual
    /// `𝒥_ρη − cη + αη^N` as a cosine series at amplitude `a`.
    pub fn residual(&self, a: f64) -> Result<CosineSeries, StokesError> {
        let eta = self.wave_series(a);
        let mut r = apply_multiplier(&eta, &self.symbol, self.params.rho)?;
        r.add_scaled(&eta, -self.speed(a));
        let mut pow = CosineSeries::constant(1.0);
        for _ in 0..self.params.n {
            pow = pow.mul(&eta);
        }
        r.add_scaled(&pow, self.params.alpha_f64());
        Ok(r)
    }

    /// Sup norm bound Σ|coeff| of [`Self::residual`].
    pub fn defect(&self, a: f64) -> Result<f64, StokesError> {
        Ok(self.residual(a)?.abs_sum())
    }

    /// Coefficients `R_m` of `a^m`, `m = 1 ..= N·M`, in the residual of the
    /// truncated expansion. `R_m` vanishes up to rounding for `m ≤ M`.
    #[allow(clippy::needless_range_loop)]
    pub fn residual_orders(&self) -> Result<Vec<CosineSeries>, StokesError> {
        let m_max = self.order;
        let top = self.params.n as usize * m_max;
        let power = series_power(&self.eta_orders, self.params.n, top);
        let mut out = Vec::with_capacity(top);
        for m in 1..=top {
            let mut r = power[m].scaled(self.params.alpha_f64());
            if m <= m_max {
                r.add_scaled(
                    &apply_multiplier(&self.eta_orders[m - 1], &self.symbol, self.params.rho)?,
                    1.0,
                );
            }
            for (k, ck) in self.c_orders.iter().enumerate() {
                if m > k && m - k <= m_max && *ck != 0.0 {
                    r.add_scaled(&self.eta_orders[m - k - 1], -ck);
                }
            }
            out.push(r);
        }
        Ok(out)
    }

    /// Σ|coeff| of `Σ_{m>M} a^m R_m`, the truncation part of the residual
    /// free of cancellation among the low orders.
    pub fn truncation_defect(&self, a: f64) -> Result<f64, StokesError> {
        let orders = self.residual_orders()?;
        let mut tail = CosineSeries::zero();
        for (i, r) in orders.iter().enumerate().skip(self.order) {
            tail.add_scaled(r, a.powi(i as i32 + 1));
        }
        Ok(tail.abs_sum())
    }

    pub fn to_json(&self) -> StokesJson {
        StokesJson {
            symbol: self.symbol.to_string(),
            params: self.params,
            order: self.order,
            c: self.c_orders.clone(),
            eta: self.eta_orders.clone(),
        }
    }
}

/// On-disk form of a [`StokesExpansion`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StokesJson {
    pub symbol: String,
    pub params: WaveParams,
    pub order: usize,
    pub c: Vec<f64>,
    pub eta: Vec<CosineSeries>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> DispersionSymbol {
        DispersionSymbol::from_spec(s).unwrap()
    }

    #[test]
    fn multiplier_scales_modes() {
        let kdv = sym("1 + k^2");
        let out = apply_multiplier(&CosineSeries::mode(1, 1.0), &kdv, 1.0).unwrap();
        assert_eq!(out.coeff(1), 2.0);
        let out = apply_multiplier(&CosineSeries::constant(1.0), &sym("whitham"), 1.3).unwrap();
        assert_eq!(out.coeff(0), 1.0);
        let out = apply_multiplier(&CosineSeries::mode(3, 1.0), &kdv, 1.5).unwrap();
        assert_eq!(out.coeff(3), 21.25);
    }

    #[test]
    fn d_inverse() {
        let kdv = sym("1 + k^2");
        let out = apply_d_inverse(&CosineSeries::mode(3, 1.0), &kdv, 1.0).unwrap();
        assert_eq!(out.coeff(3), -0.125);
        let w = sym("whitham");
        let out = apply_d_inverse(&CosineSeries::mode(2, 1.0), &w, 1.5).unwrap();
        let j = |k: f64| (k.tanh() / k).sqrt();
        assert!((out.coeff(2) - 1.0 / (j(1.5) - j(3.0))).abs() < 1e-14);
        let bad = CosineSeries::from_coeffs(vec![0.0, 0.1, 1.0]);
        assert!(matches!(
            apply_d_inverse(&bad, &kdv, 1.0),
            Err(StokesError::KernelComponent(_))
        ));
        let err = apply_d_inverse(&CosineSeries::mode(2, 1.0), &sym("1"), 1.0);
        assert!(matches!(err, Err(StokesError::Resonance { mode: 2, .. })));
    }

    #[test]
    fn d_inverse_undoes_d() {
        let w = sym("whitham");
        let rho = 1.2;
        let s = CosineSeries::from_coeffs(vec![0.4, 0.0, -1.3, 0.7, 2.1]);
        let back = apply_d_inverse(&s, &w, rho).unwrap();
        let jr = w.value(rho).unwrap();
        for n in [0usize, 2, 3, 4] {
            let d = jr - w.value(rho * n as f64).unwrap();
            assert!((back.coeff(n) * d - s.coeff(n)).abs() < 1e-14);
        }
    }

    #[test]
    fn powers_of_a_cos_z() {
        let eta = vec![CosineSeries::mode(1, 1.0)];
        let sq = series_power(&eta, 2, 3);
        assert_eq!(sq[2].coeffs(), &[0.5, 0.0, 0.5]);
        assert!(sq[3].is_zero());
        let cube = series_power(&eta, 3, 3);
        assert_eq!(cube[3].coeffs(), &[0.0, 0.75, 0.0, 0.25]);
        // (a cos z + a² ½cos 2z)², order 3 = cos z · cos 2z = ½cos z + ½cos 3z
        let eta = vec![CosineSeries::mode(1, 1.0), CosineSeries::mode(2, 0.5)];
        let sq = series_power(&eta, 2, 3);
        assert_eq!(sq[3].coeffs(), &[0.0, 0.5, 0.0, 0.5]);
    }

    #[test]
    fn mkdv_leading_order() {
        for rho in [1.0, 1.5, 2.0] {
            for alpha in [1, -1] {
                let p = WaveParams::new(3, alpha, rho).unwrap();
                let (eta3, c2, tau) = leading_order(&p, &sym("1 + k^2")).unwrap();
                assert_eq!(tau, 2);
                assert!((c2 - 0.75 * alpha as f64).abs() < 1e-15);
                let expect = -(alpha as f64) / (32.0 * rho * rho);
                assert!((eta3.coeff(3) - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn expansion_matches_mkdv_example() {
        let p = WaveParams::new(3, -1, 1.3).unwrap();
        let e = expand(&p, &sym("kdv"), 3).unwrap();
        assert!((e.c_orders[2] + 0.75).abs() < 1e-14);
        assert!((e.eta_orders[2].coeff(3) - 1.0 / (32.0 * 1.69)).abs() < 1e-14);
        assert_eq!(e.c_orders[1], 0.0);
    }

    #[test]
    fn speed_and_wave_evaluation() {
        let p = WaveParams::new(3, -1, 1.0).unwrap();
        let e = expand(&p, &sym("kdv"), 5).unwrap();
        assert_eq!(e.speed(0.0), 2.0);
        assert!(e.evaluate_wave(0.0, &[0.0, 1.0]).iter().all(|&v| v == 0.0));
        // c = 2 − 0.75 a² + O(a⁴)
        assert!((e.speed(0.1) - (2.0 - 0.0075)).abs() < 0.1f64.powi(4));
        let w = e.evaluate_wave(0.1, &[0.7, -0.7]);
        assert!((w[0] - w[1]).abs() < 1e-16);
    }

    #[test]
    fn parameter_validation() {
        assert!(WaveParams::new(1, 1, 1.0).is_err());
        assert!(WaveParams::new(2, -1, 1.0).is_err());
        assert!(WaveParams::new(3, 0, 1.0).is_err());
        assert!(WaveParams::new(3, 1, 0.0).is_err());
        let p = WaveParams::new(3, 1, 1.0).unwrap();
        assert!(matches!(
            expand(&p, &sym("kdv"), 2),
            Err(StokesError::OrderTooLow { .. })
        ));
        assert!(expand(&p, &sym("1 + k"), 3).is_err());
    }

    #[test]
    fn json_shape() {
        let p = WaveParams::new(2, 1, 1.5).unwrap();
        let e = expand(&p, &sym("whitham"), 2).unwrap();
        let v = serde_json::to_value(e.to_json()).unwrap();
        assert_eq!(v["order"], 2);
        assert_eq!(v["c"].as_array().unwrap().len(), 2);
        assert_eq!(v["eta"][0]["1"], 1.0);
        assert!(v["eta"][1].get("1").is_none());
    }
}
