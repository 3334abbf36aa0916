//! Even, real, 2π-periodic functions stored as cosine coefficients.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// `f(z) = Σ_{n≥0} c_n cos(nz)`; index 0 is the mean.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CosineSeries {
    coeffs: Vec<f64>,
}

impl CosineSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self { coeffs: vec![c] }
    }

    /// `amplitude · cos(nz)`.
    pub fn mode(n: usize, amplitude: f64) -> Self {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = amplitude;
        Self { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> f64 {
        self.coeffs.get(n).copied().unwrap_or(0.0)
    }

    pub fn set(&mut self, n: usize, v: f64) {
        if n >= self.coeffs.len() {
            self.coeffs.resize(n + 1, 0.0);
        }
        self.coeffs[n] = v;
    }

    /// Highest stored mode with a nonzero coefficient.
    pub fn max_mode(&self) -> usize {
        self.coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &Self, s: f64) {
        if other.coeffs.len() > self.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), 0.0);
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += s * b;
        }
    }

    /// Product via cos p · cos q = ½cos(p−q) + ½cos(p+q).
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (pa, pb) = (self.max_mode(), other.max_mode());
        let mut out = vec![0.0; pa + pb + 1];
        for (p, &a) in self.coeffs.iter().enumerate().take(pa + 1) {
            if a == 0.0 {
                continue;
            }
            for (q, &b) in other.coeffs.iter().enumerate().take(pb + 1) {
                if b == 0.0 {
                    continue;
                }
                let h = 0.5 * a * b;
                out[p.abs_diff(q)] += h;
                out[p + q] += h;
            }
        }
        Self { coeffs: out }
    }

    /// Drops modes above `max_mode`, returning the discarded ℓ² energy.
    pub fn truncate(&mut self, max_mode: usize) -> f64 {
        if self.coeffs.len() <= max_mode + 1 {
            return 0.0;
        }
        let tail: f64 = self.coeffs[max_mode + 1..].iter().map(|c| c * c).sum();
        self.coeffs.truncate(max_mode + 1);
        tail
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c * (n as f64 * z).cos())
            .sum()
    }

    /// Σ|c_n|, an upper bound on the sup norm.
    pub fn abs_sum(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }
}

/// ⟨f, g⟩ = (1/π)∫₀^{2π} f g dz = 2 f₀g₀ + Σ_{n≥1} f_n g_n.
pub fn inner(f: &CosineSeries, g: &CosineSeries) -> f64 {
    let head = 2.0 * f.coeff(0) * g.coeff(0);
    head + f
        .coeffs
        .iter()
        .zip(&g.coeffs)
        .skip(1)
        .map(|(a, b)| a * b)
        .sum::<f64>()
}

/// cos^N z = 2^{-N} Σ_k C(N,k) cos((N−2k)z), with exact integer numerators.
pub fn cosine_power(n: u32) -> CosineSeries {
    let n_us = n as usize;
    let mut coeffs = vec![0.0; n_us + 1];
    let denom = 2f64.powi(n as i32);
    let mut binom: u128 = 1;
    for k in 0..=n_us {
        let mode = n_us.abs_diff(2 * k);
        coeffs[mode] += binom as f64 / denom;
        binom = binom * (n_us - k) as u128 / (k as u128 + 1);
    }
    CosineSeries { coeffs }
}

impl Serialize for CosineSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let map: BTreeMap<usize, f64> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(n, c)| (n, *c))
            .collect();
        map.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CosineSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let map = BTreeMap::<usize, f64>::deserialize(d)?;
        let mut out = CosineSeries::zero();
        for (n, c) in map {
            out.set(n, c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cosine_powers() {
        assert_eq!(cosine_power(2).coeffs(), &[0.5, 0.0, 0.5]);
        assert_eq!(cosine_power(3).coeffs(), &[0.0, 0.75, 0.0, 0.25]);
        assert_eq!(cosine_power(5).coeff(1), 10.0 / 16.0);
        assert_eq!(cosine_power(4).coeffs(), &[3.0 / 8.0, 0.0, 0.5, 0.0, 0.125]);
    }

    #[test]
    fn inner_products() {
        let c3 = cosine_power(3);
        assert_eq!(inner(&c3, &CosineSeries::mode(1, 1.0)), 0.75);
        let one = CosineSeries::constant(1.0);
        assert_eq!(inner(&one, &one), 2.0);
        assert_eq!(inner(&cosine_power(4), &one), 0.75);
    }

    #[test]
    fn inner_matches_quadrature() {
        let f = CosineSeries::from_coeffs(vec![0.3, -1.0, 0.25, 2.0]);
        let g = CosineSeries::from_coeffs(vec![1.5, 0.5, 0.0, -0.75, 4.0]);
        let n = 64;
        let h = 2.0 * std::f64::consts::PI / n as f64;
        let quad: f64 = (0..n)
            .map(|i| f.eval(i as f64 * h) * g.eval(i as f64 * h))
            .sum::<f64>()
            * h
            / std::f64::consts::PI;
        assert!((quad - inner(&f, &g)).abs() < 1e-13);
    }

    #[test]
    fn serde_keeps_nonzero_modes() {
        let s = CosineSeries::from_coeffs(vec![0.5, 0.0, -0.25]);
        let js = serde_json::to_string(&s).unwrap();
        assert_eq!(js, r#"{"0":0.5,"2":-0.25}"#);
        let back: CosineSeries = serde_json::from_str(&js).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn truncation_reports_tail() {
        let mut s = CosineSeries::from_coeffs(vec![1.0, 0.0, 3.0, 4.0]);
        assert_eq!(s.truncate(1), 25.0);
        assert_eq!(s.coeffs(), &[1.0, 0.0]);
    }

    proptest! {
        #[test]
        fn product_matches_pointwise(
            a in proptest::collection::vec(-2.0f64..2.0, 1..6),
            b in proptest::collection::vec(-2.0f64..2.0, 1..6),
            z in 0.0f64..6.3,
        ) {
            let (fa, fb) = (CosineSeries::from_coeffs(a), CosineSeries::from_coeffs(b));
            let prod = fa.mul(&fb);
            prop_assert!((prod.eval(z) - fa.eval(z) * fb.eval(z)).abs() < 1e-12);
            prop_assert!((prod.eval(-z) - prod.eval(z)).abs() < 1e-12);
        }
    }
}
