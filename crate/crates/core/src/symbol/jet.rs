//! Truncated Taylor jets carrying a value and its first four derivatives.
//!
//! Internally a jet stores normalized Taylor coefficients `f^(k)(x0) / k!`,
//! which keeps products and quotients as plain Cauchy convolutions.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Highest derivative order carried by a [`Jet4`].
pub const JET_ORDER: usize = 4;

const FACTORIAL: [f64; JET_ORDER + 1] = [1.0, 1.0, 2.0, 6.0, 24.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet4 {
    taylor: [f64; JET_ORDER + 1],
}

impl Jet4 {
    pub fn constant(value: f64) -> Self {
        let mut taylor = [0.0; JET_ORDER + 1];
        taylor[0] = value;
        Self { taylor }
    }

    /// The identity function expanded at `x`.
    pub fn variable(x: f64) -> Self {
        let mut taylor = [0.0; JET_ORDER + 1];
        taylor[0] = x;
        taylor[1] = 1.0;
        Self { taylor }
    }

    /// Builds a jet from derivatives `[f, f', f'', f''', f'''']`.
    pub fn from_derivatives(d: [f64; JET_ORDER + 1]) -> Self {
        let mut taylor = [0.0; JET_ORDER + 1];
        for k in 0..=JET_ORDER {
            taylor[k] = d[k] / FACTORIAL[k];
        }
        Self { taylor }
    }

    pub fn from_taylor(taylor: [f64; JET_ORDER + 1]) -> Self {
        Self { taylor }
    }

    pub fn value(&self) -> f64 {
        self.taylor[0]
    }

    /// The `k`-th derivative at the expansion point; zero for `k > 4`.
    pub fn derivative(&self, k: usize) -> f64 {
        if k > JET_ORDER {
            0.0
        } else {
            self.taylor[k] * FACTORIAL[k]
        }
    }

    pub fn derivatives(&self) -> [f64; JET_ORDER + 1] {
        std::array::from_fn(|k| self.derivative(k))
    }

    pub fn taylor(&self) -> &[f64; JET_ORDER + 1] {
        &self.taylor
    }

    /// Zeroes every derivative above `order`.
    pub fn truncated(mut self, order: usize) -> Self {
        for k in (order + 1)..=JET_ORDER {
            self.taylor[k] = 0.0;
        }
        self
    }

    pub fn is_finite(&self) -> bool {
        self.taylor.iter().all(|c| c.is_finite())
    }

    pub fn scale(mut self, s: f64) -> Self {
        for c in &mut self.taylor {
            *c *= s;
        }
        self
    }

    /// Composes an outer function with this jet, given the outer function's
    /// derivatives `[g(x0), g'(x0), ..]` at `x0 = self.value()`.
    pub fn compose(&self, outer: [f64; JET_ORDER + 1]) -> Self {
        // h = self - x0 has no constant term, so h^k only touches orders >= k.
        let mut h = *self;
        h.taylor[0] = 0.0;
        let mut out = Self::constant(outer[0]);
        let mut h_pow = Self::constant(1.0);
        for (k, &d) in outer.iter().enumerate().skip(1) {
            h_pow = h_pow * h;
            let c = d / FACTORIAL[k];
            for j in k..=JET_ORDER {
                out.taylor[j] += c * h_pow.taylor[j];
            }
        }
        out
    }

    pub fn recip(&self) -> Self {
        Self::constant(1.0) / *self
    }

    /// Integer power by repeated multiplication, so polynomial jets stay exact.
    pub fn powi(&self, n: i32) -> Self {
        let mut base = if n < 0 { self.recip() } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::constant(1.0);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Real power; caller guarantees a positive base.
    pub fn powf(&self, p: f64) -> Self {
        let x = self.value();
        let mut d = [0.0; JET_ORDER + 1];
        let mut coef = 1.0;
        for (k, dk) in d.iter_mut().enumerate() {
            *dk = coef * x.powf(p - k as f64);
            coef *= p - k as f64;
        }
        self.compose(d)
    }

    pub fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        self.compose([e; JET_ORDER + 1])
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose([s, c, -s, -c, s])
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose([c, -s, -c, s, c])
    }

    pub fn tanh(&self) -> Self {
        self.compose(riccati_derivatives(self.value().tanh()))
    }

    /// Hyperbolic cotangent; caller guarantees a nonzero argument.
    pub fn coth(&self) -> Self {
        self.compose(riccati_derivatives(1.0 / self.value().tanh()))
    }
}

/// Derivatives of a solution of `y' = 1 - y^2` (tanh and coth) given its value.
fn riccati_derivatives(y: f64) -> [f64; JET_ORDER + 1] {
    let d1 = 1.0 - y * y;
    let d2 = -2.0 * y * d1;
    let d3 = -2.0 * (d1 * d1 + y * d2);
    let d4 = -2.0 * (3.0 * d1 * d2 + y * d3);
    [y, d1, d2, d3, d4]
}

impl Add for Jet4 {
    type Output = Jet4;
    fn add(mut self, rhs: Jet4) -> Jet4 {
        for k in 0..=JET_ORDER {
            self.taylor[k] += rhs.taylor[k];
        }
        self
    }
}

impl Sub for Jet4 {
    type Output = Jet4;
    fn sub(mut self, rhs: Jet4) -> Jet4 {
        for k in 0..=JET_ORDER {
            self.taylor[k] -= rhs.taylor[k];
        }
        self
    }
}

impl Neg for Jet4 {
    type Output = Jet4;
    fn neg(self) -> Jet4 {
        self.scale(-1.0)
    }
}

impl Mul for Jet4 {
    type Output = Jet4;
    fn mul(self, rhs: Jet4) -> Jet4 {
        let mut taylor = [0.0; JET_ORDER + 1];
        for (i, &a) in self.taylor.iter().enumerate() {
            for (j, &b) in rhs.taylor.iter().enumerate().take(JET_ORDER + 1 - i) {
                taylor[i + j] += a * b;
            }
        }
        Jet4 { taylor }
    }
}

impl Div for Jet4 {
    type Output = Jet4;
    fn div(self, rhs: Jet4) -> Jet4 {
        let mut q = [0.0; JET_ORDER + 1];
        let d0 = rhs.taylor[0];
        for k in 0..=JET_ORDER {
            let mut acc = self.taylor[k];
            for j in 1..=k {
                acc -= rhs.taylor[j] * q[k - j];
            }
            q[k] = acc / d0;
        }
        Jet4 { taylor: q }
    }
}
