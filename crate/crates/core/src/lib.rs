//! Modulational stability of small-amplitude periodic traveling waves of
//! generalized KdV equations `u_t + (𝒥u + αu^N)_x = 0`.
//!
//! * [`symbol`] parses dispersion symbols ȷ(k) and differentiates them with
//!   Taylor jets.
//! * [`stokes`] builds Stokes expansions of the traveling waves.
//! * [`analytic`] evaluates the closed-form spectrum near the origin.
//! * [`hill`] computes the same spectrum numerically with Hill's method.
//! * [`verify`] compares the two.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod analytic;
pub mod hill;
pub mod series;
pub mod stokes;
pub mod symbol;
pub mod verify;

pub use analytic::{
    coefficients, critical_rho, eigencurves, lemniscate, mu_star, stability_report, sweep,
    wb_coefficient, AnalyticCoefficients, AnalyticError, EvenPoly, Lemniscate, Parity,
    SpectralCurve, StabilityReport, SweepReport, Verdict,
};
pub use hill::{HillConfig, HillError, HillSlice, HillSpectrum};
pub use num_complex::Complex64;
pub use series::{cosine_power, inner, CosineSeries};
pub use stokes::{expand, StokesError, StokesExpansion, StokesJson, WaveParams};
pub use symbol::{
    check_hypotheses, eval_jet, parse_symbol, DispersionSymbol, HypothesisReport, Jet4, SymbolAst,
    SymbolError,
};
pub use verify::{
    compare, hausdorff, run_comparison, scaling_check, symmetry_residual, CompareOptions,
    ComparisonReport, ScalingOptions, ScalingResult, VerifyError,
};

/// Any error raised by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Stokes(#[from] StokesError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error(transparent)]
    Hill(#[from] HillError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

impl Error {
    /// Short machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Symbol(_) => "symbol",
            Error::Stokes(_) => "stokes",
            Error::Analytic(_) => "analytic",
            Error::Hill(_) => "hill",
            Error::Verify(_) => "verify",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
