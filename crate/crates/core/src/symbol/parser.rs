//! Recursive-descent parser for dispersion-symbol expressions.
//!
//! ```text
//! expr    = term { ("+" | "-") term }
//! term    = unary { ("*" | "/") unary }
//! unary   = "-" unary | power
//! power   = primary [ "^" exponent ]
//! exponent= "-" exponent | primary          (must not depend on k)
//! primary = number | "k" | "pi" | ident "(" expr { "," expr } ")" | "(" expr ")"
//! ```
//!
//! `^` binds tighter than unary minus, so `-k^2` is `-(k^2)`.

use super::ast::{Expr, Func, SymbolAst};
use super::SymbolError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize)>, SymbolError> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let (t, at) = lx.next()?;
            let end = t == Tok::End;
            out.push((t, at));
            if end {
                return Ok(out);
            }
        }
    }

    fn next(&mut self) -> Result<(Tok, usize), SymbolError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = bytes.get(self.pos) else {
            return Ok((Tok::End, start));
        };
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(t) = single {
            self.pos += 1;
            return Ok((t, start));
        }
        if c.is_ascii_digit() || c == b'.' {
            while self.pos < bytes.len()
                && (bytes[self.pos].is_ascii_digit() || bytes[self.pos] == b'.')
            {
                self.pos += 1;
            }
            // exponent part: 1e-3, 2.5E+4
            if self.pos < bytes.len() && (bytes[self.pos] | 0x20) == b'e' {
                let mut p = self.pos + 1;
                if p < bytes.len() && (bytes[p] == b'+' || bytes[p] == b'-') {
                    p += 1;
                }
                if p < bytes.len() && bytes[p].is_ascii_digit() {
                    while p < bytes.len() && bytes[p].is_ascii_digit() {
                        p += 1;
                    }
                    self.pos = p;
                }
            }
            let text = &self.src[start..self.pos];
            let v: f64 = text.parse().map_err(|_| SymbolError::Syntax {
                offset: start,
                message: format!("malformed number '{text}'"),
            })?;
            return Ok((Tok::Num(v), start));
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while self.pos < bytes.len()
                && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_')
            {
                self.pos += 1;
            }
            return Ok((Tok::Ident(self.src[start..self.pos].to_string()), start));
        }
        let ch = self.src[start..].chars().next().unwrap_or('?');
        Err(SymbolError::Syntax {
            offset: start,
            message: format!("unexpected character '{ch}'"),
        })
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn offset(&self) -> usize {
        self.toks[self.i].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if t != Tok::End {
            self.i += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), SymbolError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.syntax(format!("expected {what}")))
        }
    }

    fn syntax(&self, message: String) -> SymbolError {
        SymbolError::Syntax {
            offset: self.offset(),
            message,
        }
    }

    fn expr(&mut self) -> Result<Expr, SymbolError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, SymbolError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, SymbolError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, SymbolError> {
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let exponent = self.exponent()?;
        if exponent.contains_var() {
            return Err(SymbolError::Syntax {
                offset: at,
                message: "exponent must not depend on k".into(),
            });
        }
        let p = exponent.eval(0.0).map_err(|_| SymbolError::Syntax {
            offset: at,
            message: "exponent does not evaluate to a finite number".into(),
        })?;
        Ok(Expr::Pow(Box::new(base), p))
    }

    fn exponent(&mut self) -> Result<Expr, SymbolError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.exponent()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, SymbolError> {
        let at = self.offset();
        match self.bump() {
            Tok::Num(v) => Ok(Expr::Const(v)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if *self.peek() != Tok::LParen {
                    return match name.as_str() {
                        "k" => Ok(Expr::Var),
                        "pi" => Ok(Expr::Const(std::f64::consts::PI)),
                        _ => Err(SymbolError::UnknownIdentifier { name, offset: at }),
                    };
                }
                let func = Func::from_name(&name).ok_or_else(|| SymbolError::UnknownFunction {
                    name: name.clone(),
                    offset: at,
                })?;
                self.bump();
                let mut args = Vec::new();
                if *self.peek() != Tok::RParen {
                    args.push(self.expr()?);
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(self.expr()?);
                    }
                }
                self.expect(Tok::RParen, "')' after function arguments")?;
                if args.len() != func.arity() {
                    return Err(SymbolError::Arity {
                        name,
                        expected: func.arity(),
                        found: args.len(),
                        offset: at,
                    });
                }
                Ok(Expr::Call(
                    func,
                    Box::new(args.pop().expect("arity checked")),
                ))
            }
            Tok::End => Err(SymbolError::Syntax {
                offset: at,
                message: "unexpected end of input".into(),
            }),
            t => Err(SymbolError::Syntax {
                offset: at,
                message: format!("unexpected token {t:?}"),
            }),
        }
    }
}

/// Parses a symbol expression in the variable `k`.
pub fn parse_symbol(text: &str) -> Result<SymbolAst, SymbolError> {
    if text.trim().is_empty() {
        return Err(SymbolError::Syntax {
            offset: 0,
            message: "empty expression".into(),
        });
    }
    let toks = Lexer::tokens(text)?;
    let mut p = Parser { toks, i: 0 };
    let root = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.syntax("trailing input".into()));
    }
    Ok(SymbolAst {
        root,
        source_text: text.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(e: Expr) -> Box<Expr> {
        Box::new(e)
    }

    #[test]
    fn parses_kdv_symbol() {
        let ast = parse_symbol("1 + k^2").unwrap();
        assert_eq!(
            ast.root,
            Expr::Add(b(Expr::Const(1.0)), b(Expr::Pow(b(Expr::Var), 2.0)))
        );
    }

    #[test]
    fn parses_whitham_symbol() {
        let ast = parse_symbol("sqrt(tanhc(k))").unwrap();
        assert_eq!(
            ast.root,
            Expr::Call(Func::Sqrt, b(Expr::Call(Func::Tanhc, b(Expr::Var))))
        );
    }

    #[test]
    fn parses_fractional_kdv() {
        let ast = parse_symbol("1 - abs(k)^1.5").unwrap();
        assert_eq!(
            ast.root,
            Expr::Sub(
                b(Expr::Const(1.0)),
                b(Expr::Pow(b(Expr::Call(Func::Abs, b(Expr::Var))), 1.5))
            )
        );
    }

    #[test]
    fn precedence_and_negative_exponents() {
        let ast = parse_symbol("-k^2").unwrap();
        assert_eq!(ast.root, Expr::Neg(b(Expr::Pow(b(Expr::Var), 2.0))));
        let ast = parse_symbol("k^-2").unwrap();
        assert_eq!(ast.root, Expr::Pow(b(Expr::Var), -2.0));
        let ast = parse_symbol("k^(1/2)").unwrap();
        assert_eq!(ast.root, Expr::Pow(b(Expr::Var), 0.5));
        let ast = parse_symbol("2e-1*k").unwrap();
        assert_eq!(ast.root, Expr::Mul(b(Expr::Const(0.2)), b(Expr::Var)));
    }

    #[test]
    fn errors_carry_offsets() {
        match parse_symbol("1 + * k") {
            Err(SymbolError::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        match parse_symbol("1 + foo(k)") {
            Err(SymbolError::UnknownFunction { name, offset }) => {
                assert_eq!(name, "foo");
                assert_eq!(offset, 4);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_symbol("tanh(k, 2)"),
            Err(SymbolError::Arity { found: 2, .. })
        ));
        assert!(matches!(
            parse_symbol("x + 1"),
            Err(SymbolError::UnknownIdentifier { .. })
        ));
        assert!(matches!(
            parse_symbol("k^k"),
            Err(SymbolError::Syntax { .. })
        ));
        assert!(matches!(
            parse_symbol("(1 + k"),
            Err(SymbolError::Syntax { .. })
        ));
        assert!(matches!(
            parse_symbol("   "),
            Err(SymbolError::Syntax { .. })
        ));
        assert!(matches!(
            parse_symbol("1 $ k"),
            Err(SymbolError::Syntax { offset: 2, .. })
        ));
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![(0.0f64..100.0).prop_map(Expr::Const), Just(Expr::Var),];
        leaf.prop_recursive(4, 32, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (inner.clone(), inner.clone()).prop_map(|(a, c)| Expr::Add(b(a), b(c))),
                (inner.clone(), inner.clone()).prop_map(|(a, c)| Expr::Sub(b(a), b(c))),
                (inner.clone(), inner.clone()).prop_map(|(a, c)| Expr::Mul(b(a), b(c))),
                (inner.clone(), inner.clone()).prop_map(|(a, c)| Expr::Div(b(a), b(c))),
                (inner.clone(), -4.0f64..4.0).prop_map(|(a, p)| Expr::Pow(b(a), p)),
                (inner, 0usize..8).prop_map(|(a, f)| {
                    let func = [
                        Func::Abs,
                        Func::Sqrt,
                        Func::Tanh,
                        Func::Coth,
                        Func::Exp,
                        Func::Cos,
                        Func::Sin,
                        Func::Tanhc,
                    ][f];
                    Expr::Call(func, b(a))
                }),
            ]
        })
    }

    proptest! {
        #[test]
        fn display_round_trips(e in arb_expr()) {
            let text = e.to_string();
            let back = parse_symbol(&text).unwrap();
            prop_assert_eq!(back.root, e);
        }
    }
}
