//! Dispersion symbols ȷ(k): parsing, Taylor-jet evaluation, built-in
//! registry and hypothesis checks.

mod ast;
mod jet;
mod parser;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ast::{Expr, Func, SymbolAst, TANHC_SERIES_RADIUS};
pub use jet::{Jet4, JET_ORDER};
pub use parser::parse_symbol;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymbolError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown function '{name}' at byte {offset}")]
    UnknownFunction { name: String, offset: usize },
    #[error("unknown identifier '{name}' at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("function '{name}' at byte {offset} takes {expected} argument(s), got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
        offset: usize,
    },
    #[error("domain error at k = {k}: {what}")]
    Domain { what: String, k: f64 },
    #[error("non-finite symbol value at k = {k}")]
    NonFinite { k: f64 },
    #[error("unknown builtin symbol '{0}'")]
    UnknownBuiltin(String),
    #[error("bad parameter for builtin '{builtin}': {message}")]
    BadParameter { builtin: String, message: String },
    #[error("derivative order {0} exceeds the supported maximum of 4")]
    Order(usize),
    #[error("symbol is not admissible: {0}")]
    NotAdmissible(String),
}

/// Names accepted by [`DispersionSymbol::builtin`].
pub const BUILTIN_NAMES: [&str; 7] = [
    "kdv",
    "mkdv-dispersion",
    "whitham",
    "bo",
    "ilw",
    "fkdv",
    "kawahara",
];

/// A dispersion symbol ȷ(k). Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionSymbol {
    ast: SymbolAst,
    name: Option<String>,
    params: BTreeMap<String, f64>,
    growth_sigma: Option<f64>,
}

impl DispersionSymbol {
    pub fn from_expression(text: &str) -> Result<Self, SymbolError> {
        Ok(Self::from_ast(parse_symbol(text)?, None, BTreeMap::new()))
    }

    fn from_ast(ast: SymbolAst, name: Option<String>, params: BTreeMap<String, f64>) -> Self {
        let mut s = Self {
            ast,
            name,
            params,
            growth_sigma: None,
        };
        s.growth_sigma = s.estimate_growth();
        s
    }

    /// Looks up a built-in symbol. Parameters not supplied take defaults:
    /// `fkdv{beta=1.5}`, `kawahara{a=1, b=1}`.
    pub fn builtin(name: &str, params: &BTreeMap<String, f64>) -> Result<Self, SymbolError> {
        let mut used = BTreeMap::new();
        let mut take = |key: &str, default: f64| {
            let v = params.get(key).copied().unwrap_or(default);
            used.insert(key.to_string(), v);
            v
        };
        let text = match name {
            "kdv" | "mkdv-dispersion" => "1 + k^2".to_string(),
            "whitham" => "sqrt(tanhc(k))".to_string(),
            "bo" => "1 - abs(k)".to_string(),
            "ilw" => "1 / tanhc(k)".to_string(),
            "fkdv" => {
                let beta = take("beta", 1.5);
                if !(beta > 1.0) || !beta.is_finite() {
                    return Err(SymbolError::BadParameter {
                        builtin: name.into(),
                        message: format!("beta must exceed 1, got {beta}"),
                    });
                }
                format!("1 - abs(k)^({beta:?})")
            }
            "kawahara" => {
                let a = take("a", 1.0);
                let b = take("b", 1.0);
                if !(b > 0.0) || !a.is_finite() || !b.is_finite() {
                    return Err(SymbolError::BadParameter {
                        builtin: name.into(),
                        message: format!("need finite a and b > 0, got a={a}, b={b}"),
                    });
                }
                format!("1 + ({a:?})*k^2 + ({b:?})*k^4")
            }
            other => return Err(SymbolError::UnknownBuiltin(other.to_string())),
        };
        if let Some(extra) = params.keys().find(|k| !used.contains_key(*k)) {
            return Err(SymbolError::BadParameter {
                builtin: name.into(),
                message: format!("unknown parameter '{extra}'"),
            });
        }
        let ast = parse_symbol(&text)?;
        Ok(Self::from_ast(ast, Some(name.to_string()), used))
    }

    /// Accepts `name`, `name{key=value,...}` for builtins, or an expression.
    pub fn from_spec(spec: &str) -> Result<Self, SymbolError> {
        let spec = spec.trim();
        let (head, params) = match spec.find('{') {
            Some(open) if spec.ends_with('}') => {
                let head = spec[..open].trim();
                let mut params = BTreeMap::new();
                for item in spec[open + 1..spec.len() - 1].split(',') {
                    let item = item.trim();
                    if item.is_empty() {
                        continue;
                    }
                    let (k, v) = item
                        .split_once('=')
                        .ok_or_else(|| SymbolError::BadParameter {
                            builtin: head.into(),
                            message: format!("expected key=value, got '{item}'"),
                        })?;
                    let v: f64 = v.trim().parse().map_err(|_| SymbolError::BadParameter {
                        builtin: head.into(),
                        message: format!("'{}' is not a number", v.trim()),
                    })?;
                    params.insert(k.trim().to_string(), v);
                }
                (head, params)
            }
            _ => (spec, BTreeMap::new()),
        };
        if BUILTIN_NAMES.contains(&head) {
            Self::builtin(head, &params)
        } else if !params.is_empty() {
            Err(SymbolError::UnknownBuiltin(head.to_string()))
        } else {
            Self::from_expression(spec)
        }
    }

    pub fn ast(&self) -> &SymbolAst {
        &self.ast
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    /// Sampled growth exponent σ with ȷ(k) ~ k^σ for large k.
    pub fn growth_sigma(&self) -> Option<f64> {
        self.growth_sigma
    }

    /// ȷ(k).
    pub fn value(&self, k: f64) -> Result<f64, SymbolError> {
        self.ast.root.eval(k)
    }

    pub fn jet(&self, k: f64) -> Result<Jet4, SymbolError> {
        self.ast.root.eval_jet(k)
    }

    fn estimate_growth(&self) -> Option<f64> {
        let (k1, k2) = (1.0e3, 2.0e3);
        let (v1, v2) = (self.value(k1).ok()?, self.value(k2).ok()?);
        if v1 == 0.0 || v2 == 0.0 {
            return None;
        }
        let s = (v2.abs() / v1.abs()).ln() / std::f64::consts::LN_2;
        s.is_finite().then_some(s)
    }

    /// Rejects symbols violating evenness or ȷ(0) = 1.
    pub fn ensure_admissible(&self) -> Result<(), SymbolError> {
        if !self.is_normalized() {
            return Err(SymbolError::NotAdmissible(format!(
                "j(0) = {:?}, expected 1",
                self.value(0.0).ok()
            )));
        }
        if !self.is_even() {
            return Err(SymbolError::NotAdmissible("j is not even".into()));
        }
        Ok(())
    }

    fn is_normalized(&self) -> bool {
        matches!(self.value(0.0), Ok(v) if (v - 1.0).abs() <= 1e-10)
    }

    fn is_even(&self) -> bool {
        (1..=200).all(|i| {
            let k = 10.0 * i as f64 / 200.0;
            match (self.value(k), self.value(-k)) {
                (Ok(a), Ok(b)) => (a - b).abs() <= 1e-10 * a.abs().max(1.0),
                // a point outside the domain on both sides is still symmetric
                (Err(_), Err(_)) => true,
                _ => false,
            }
        })
    }
}

impl fmt::Display for DispersionSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(n) if self.params.is_empty() => write!(f, "{n}"),
            Some(n) => {
                write!(f, "{n}{{")?;
                for (i, (k, v)) in self.params.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{k}={v}")?;
                }
                write!(f, "}}")
            }
            None => write!(f, "{}", self.ast.source_text),
        }
    }
}

/// ȷ and its derivatives at `k` up to `order` (at most 4); higher entries are zero.
pub fn eval_jet(symbol: &DispersionSymbol, k: f64, order: usize) -> Result<Jet4, SymbolError> {
    if order > JET_ORDER {
        return Err(SymbolError::Order(order));
    }
    if order == 0 {
        return Ok(Jet4::constant(symbol.value(k)?));
    }
    Ok(symbol.jet(k)?.truncated(order))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Resonance {
    pub n: u32,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub symbol: String,
    pub rho: f64,
    pub n_max: u32,
    pub tol: f64,
    pub h1_even_ok: bool,
    pub h1_normalized_ok: bool,
    /// Harmonics n ≥ 2 with |ȷ(ρn) − ȷ(ρ)| ≤ tol.
    pub h3_resonances: Vec<Resonance>,
    /// ȷ(ρ) ≠ 1, needed by the mean-mode denominators.
    pub mean_mode_ok: bool,
    pub min_gap: f64,
    pub growth_sigma: Option<f64>,
    pub errors: Vec<String>,
}

impl HypothesisReport {
    pub fn passed(&self) -> bool {
        self.h1_even_ok
            && self.h1_normalized_ok
            && self.h3_resonances.is_empty()
            && self.mean_mode_ok
            && self.errors.is_empty()
    }
}

/// Checks evenness and normalization on |k| ≤ 10, the mean mode, and the
/// harmonics n = 2..=n_max at wavenumber `rho`.
pub fn check_hypotheses(
    symbol: &DispersionSymbol,
    rho: f64,
    n_max: u32,
    tol: f64,
) -> HypothesisReport {
    let mut errors = Vec::new();
    let base = match symbol.value(rho) {
        Ok(v) => Some(v),
        Err(e) => {
            errors.push(e.to_string());
            None
        }
    };
    let mut resonances = Vec::new();
    let mut min_gap = f64::INFINITY;
    let mut mean_mode_ok = false;
    if let Some(jr) = base {
        let mean_gap = jr - 1.0;
        mean_mode_ok = mean_gap.abs() > tol;
        for n in 2..=n_max.max(2) {
            match symbol.value(rho * n as f64) {
                Ok(v) => {
                    let gap = v - jr;
                    min_gap = min_gap.min(gap.abs());
                    if gap.abs() <= tol {
                        resonances.push(Resonance { n, gap });
                    }
                }
                Err(e) => errors.push(format!("n = {n}: {e}")),
            }
        }
    }
    HypothesisReport {
        symbol: symbol.to_string(),
        rho,
        n_max,
        tol,
        h1_even_ok: symbol.is_even(),
        h1_normalized_ok: symbol.is_normalized(),
        h3_resonances: resonances,
        mean_mode_ok,
        min_gap,
        growth_sigma: symbol.growth_sigma(),
        errors,
    }
}
