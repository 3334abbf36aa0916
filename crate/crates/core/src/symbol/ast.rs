use std::fmt;
use std::sync::OnceLock;

use super::jet::Jet4;
use super::SymbolError;

/// Below this |k| the removable singularity of `tanh(k)/k` is handled by its
/// Maclaurin series.
pub const TANHC_SERIES_RADIUS: f64 = 1e-3;
/// Between the series radius and this bound the tanhc jet comes from
/// quadrature of `∫₀¹ sech²(ks) ds`; beyond it plain jet division is
/// well conditioned.
const TANHC_QUADRATURE_RADIUS: f64 = 1.0;

/// Even Maclaurin coefficients of tanh(k)/k through degree 8.
const TANHC_SERIES: [f64; 5] = [1.0, -1.0 / 3.0, 2.0 / 15.0, -17.0 / 315.0, 62.0 / 2835.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Abs,
    Sqrt,
    Tanh,
    Coth,
    Exp,
    Cos,
    Sin,
    Tanhc,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "abs" => Func::Abs,
            "sqrt" => Func::Sqrt,
            "tanh" => Func::Tanh,
            "coth" => Func::Coth,
            "exp" => Func::Exp,
            "cos" => Func::Cos,
            "sin" => Func::Sin,
            "tanhc" => Func::Tanhc,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
            Func::Tanh => "tanh",
            Func::Coth => "coth",
            Func::Exp => "exp",
            Func::Cos => "cos",
            Func::Sin => "sin",
            Func::Tanhc => "tanhc",
        }
    }

    pub const fn arity(self) -> usize {
        1
    }
}

/// Expression tree over the single variable `k`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Power with a constant exponent, folded at parse time.
    Pow(Box<Expr>, f64),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn contains_var(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var => true,
            Expr::Neg(e) | Expr::Pow(e, _) | Expr::Call(_, e) => e.contains_var(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.contains_var() || b.contains_var()
            }
        }
    }

    pub fn eval(&self, k: f64) -> Result<f64, SymbolError> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var => k,
            Expr::Neg(e) => -e.eval(k)?,
            Expr::Add(a, b) => a.eval(k)? + b.eval(k)?,
            Expr::Sub(a, b) => a.eval(k)? - b.eval(k)?,
            Expr::Mul(a, b) => a.eval(k)? * b.eval(k)?,
            Expr::Div(a, b) => a.eval(k)? / b.eval(k)?,
            Expr::Pow(base, p) => {
                let x = base.eval(k)?;
                if is_integer(*p) {
                    x.powi(*p as i32)
                } else if x < 0.0 {
                    return Err(SymbolError::Domain {
                        what: format!("non-integer power {p} of negative value {x}"),
                        k,
                    });
                } else {
                    x.powf(*p)
                }
            }
            Expr::Call(f, arg) => {
                let x = arg.eval(k)?;
                match f {
                    Func::Abs => x.abs(),
                    Func::Sqrt => {
                        if x < 0.0 {
                            return Err(SymbolError::Domain {
                                what: format!("sqrt of negative value {x}"),
                                k,
                            });
                        }
                        x.sqrt()
                    }
                    Func::Tanh => x.tanh(),
                    Func::Coth => 1.0 / x.tanh(),
                    Func::Exp => x.exp(),
                    Func::Cos => x.cos(),
                    Func::Sin => x.sin(),
                    Func::Tanhc => tanhc_value(x),
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(SymbolError::NonFinite { k })
        }
    }

    /// Forward-mode Taylor evaluation of the expression and its first four
    /// derivatives with respect to `k`.
    pub fn eval_jet(&self, k: f64) -> Result<Jet4, SymbolError> {
        let j = self.jet_at(&Jet4::variable(k), k)?;
        if j.is_finite() {
            Ok(j)
        } else {
            Err(SymbolError::NonFinite { k })
        }
    }

    fn jet_at(&self, var: &Jet4, k: f64) -> Result<Jet4, SymbolError> {
        Ok(match self {
            Expr::Const(c) => Jet4::constant(*c),
            Expr::Var => *var,
            Expr::Neg(e) => -e.jet_at(var, k)?,
            Expr::Add(a, b) => a.jet_at(var, k)? + b.jet_at(var, k)?,
            Expr::Sub(a, b) => a.jet_at(var, k)? - b.jet_at(var, k)?,
            Expr::Mul(a, b) => a.jet_at(var, k)? * b.jet_at(var, k)?,
            Expr::Div(a, b) => {
                let d = b.jet_at(var, k)?;
                if d.value() == 0.0 {
                    return Err(SymbolError::NonFinite { k });
                }
                a.jet_at(var, k)? / d
            }
            Expr::Pow(base, p) => {
                let x = base.jet_at(var, k)?;
                if is_integer(*p) {
                    x.powi(*p as i32)
                } else if x.value() <= 0.0 {
                    return Err(SymbolError::Domain {
                        what: format!(
                            "non-integer power {p} differentiated at non-positive base {}",
                            x.value()
                        ),
                        k,
                    });
                } else {
                    x.powf(*p)
                }
            }
            Expr::Call(f, arg) => {
                let x = arg.jet_at(var, k)?;
                match f {
                    Func::Abs => {
                        if x.value() > 0.0 {
                            x
                        } else if x.value() < 0.0 {
                            -x
                        } else {
                            return Err(SymbolError::Domain {
                                what: "abs is not differentiable at 0".into(),
                                k,
                            });
                        }
                    }
                    Func::Sqrt => {
                        if x.value() <= 0.0 {
                            return Err(SymbolError::Domain {
                                what: format!("sqrt differentiated at {}", x.value()),
                                k,
                            });
                        }
                        x.sqrt()
                    }
                    Func::Tanh => x.tanh(),
                    Func::Coth => {
                        if x.value() == 0.0 {
                            return Err(SymbolError::NonFinite { k });
                        }
                        x.coth()
                    }
                    Func::Exp => x.exp(),
                    Func::Cos => x.cos(),
                    Func::Sin => x.sin(),
                    Func::Tanhc => tanhc_jet(&x),
                }
            }
        })
    }
}

fn is_integer(p: f64) -> bool {
    p.fract() == 0.0 && p.abs() <= i32::MAX as f64
}

fn tanhc_series(x: f64) -> f64 {
    let x2 = x * x;
    TANHC_SERIES.iter().rev().fold(0.0, |acc, &c| acc * x2 + c)
}

pub(crate) fn tanhc_value(x: f64) -> f64 {
    if x.abs() < TANHC_SERIES_RADIUS {
        tanhc_series(x)
    } else {
        x.tanh() / x
    }
}

/// Jet of tanh(u)/u composed with an inner jet `u`.
fn tanhc_jet(u: &Jet4) -> Jet4 {
    let x = u.value();
    let outer = if x.abs() < TANHC_SERIES_RADIUS {
        // Horner on the even series, carried as a jet in x.
        let v = Jet4::variable(x);
        let v2 = v * v;
        TANHC_SERIES
            .iter()
            .rev()
            .fold(Jet4::constant(0.0), |acc, &c| acc * v2 + Jet4::constant(c))
    } else if x.abs() < TANHC_QUADRATURE_RADIUS {
        // d^n/dx^n tanhc(x) = ∫₀¹ sⁿ (sech²)^(n)(xs) ds
        let mut acc = Jet4::constant(0.0);
        for &(s, w) in gauss_legendre_unit() {
            let t = Jet4::from_taylor([x * s, s, 0.0, 0.0, 0.0]).tanh();
            let sech2 = Jet4::constant(1.0) - t * t;
            acc = acc + sech2.scale(w);
        }
        acc
    } else {
        let v = Jet4::variable(x);
        v.tanh() / v
    };
    u.compose(outer.derivatives())
}

/// 24-point Gauss–Legendre rule mapped to [0, 1].
fn gauss_legendre_unit() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = 24;
        let mut rule = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for m in 2..=n {
                    let p2 = ((2 * m - 1) as f64 * x * p1 - (m - 1) as f64 * p0) / m as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            rule.push((0.5 * (x + 1.0), 0.5 * w));
        }
        rule
    })
}

fn fmt_number(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    if v < 0.0 || (v == 0.0 && v.is_sign_negative()) {
        write!(f, "({v:?})")
    } else {
        write!(f, "{v:?}")
    }
}

/// Fully parenthesized rendering that re-parses to an identical tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => fmt_number(f, *c),
            Expr::Var => write!(f, "k"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, p) => {
                write!(f, "({a}^")?;
                fmt_number(f, *p)?;
                write!(f, ")")
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

/// A parsed dispersion-symbol expression together with its source text.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolAst {
    pub root: Expr,
    pub source_text: String,
}

impl fmt::Display for SymbolAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}
