//! Recursive-descent parser for rational expressions in `z`.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := atom ('^' UINT)*
//! atom    := NUMBER | NUMBER 'i' | 'i' | 'z' | '(' expr ')'
//! NUMBER  := digits ['.' digits] [('e' | 'E') ['+' | '-'] digits]
//! ```
//!
//! `-z^2` parses as `-(z^2)`. Sphere points are complex constants or `inf`.

use thiserror::Error;

use crate::algebra::{AlgebraError, Complex, ComplexRational, SpherePoint};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("exponent at {pos} must be a constant nonnegative integer")]
    NonConstantExponent { pos: usize },
    #[error("division by zero at {pos}")]
    DivisionByZero { pos: usize },
    #[error("expected a constant, found an expression in z")]
    NotConstant,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Imag(f64),
    Z,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i];
        let start = i;
        match ch {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((Tok::Plus, start)),
            b'-' => out.push((Tok::Minus, start)),
            b'*' => out.push((Tok::Star, start)),
            b'/' => out.push((Tok::Slash, start)),
            b'^' => out.push((Tok::Caret, start)),
            b'(' => out.push((Tok::LParen, start)),
            b')' => out.push((Tok::RParen, start)),
            b'z' => out.push((Tok::Z, start)),
            b'i' => out.push((Tok::Imag(1.0), start)),
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| ParseError::Syntax {
                    pos: start,
                    msg: format!("malformed number `{text}`"),
                })?;
                if i < bytes.len() && bytes[i] == b'i' {
                    i += 1;
                    out.push((Tok::Imag(value), start));
                } else {
                    out.push((Tok::Num(value), start));
                }
                continue;
            }
            _ => {
                let c = src[start..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{c}`"),
                });
            }
        }
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<ComplexRational, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ComplexRational, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Slash => {
                    self.bump();
                    let at = self.offset();
                    let rhs = self.unary()?;
                    acc = acc.checked_div(&rhs).map_err(|e| match e {
                        AlgebraError::DivisionByZero => ParseError::DivisionByZero { pos: at },
                        other => ParseError::Syntax {
                            pos: at,
                            msg: other.to_string(),
                        },
                    })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<ComplexRational, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<ComplexRational, ParseError> {
        let mut base = self.atom()?;
        while *self.peek() == Tok::Caret {
            self.bump();
            let at = self.offset();
            match self.bump() {
                Tok::Num(v) if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 => {
                    base = base.powi(v as u32);
                }
                Tok::End => {
                    return Err(ParseError::Syntax {
                        pos: at,
                        msg: "missing exponent".into(),
                    })
                }
                _ => return Err(ParseError::NonConstantExponent { pos: at }),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ComplexRational, ParseError> {
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(ComplexRational::constant(Complex::new(v, 0.0)))
            }
            Tok::Imag(v) => {
                self.bump();
                Ok(ComplexRational::constant(Complex::new(0.0, v)))
            }
            Tok::Z => {
                self.bump();
                Ok(ComplexRational::z())
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.syntax("expected `)`");
                }
                self.bump();
                Ok(inner)
            }
            Tok::End => self.syntax("unexpected end of input"),
            other => self.syntax(format!("unexpected token {other:?}")),
        }
    }
}

/// Parses a rational expression in `z` into reduced form.
pub fn parse_rational(src: &str) -> Result<ComplexRational, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    let value = p.expr()?;
    if *p.peek() != Tok::End {
        return p.syntax("expected operator or end of input");
    }
    Ok(value)
}

/// Parses `inf` or a constant complex expression such as `1+2i`.
pub fn parse_point(src: &str) -> Result<SpherePoint, ParseError> {
    let trimmed = src.trim();
    if trimmed.eq_ignore_ascii_case("inf") || trimmed == "∞" {
        return Ok(SpherePoint::Infinity);
    }
    let r = parse_rational(trimmed)?;
    if r.is_zero() {
        return Ok(SpherePoint::Finite(Complex::new(0.0, 0.0)));
    }
    r.as_constant()
        .map(SpherePoint::Finite)
        .ok_or(ParseError::NotConstant)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Polynomial;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn poly(cs: &[(f64, f64)]) -> Polynomial {
        Polynomial::new(cs.iter().map(|&(a, b)| c(a, b)).collect())
    }

    #[test]
    fn polynomial_with_fraction() {
        let r = parse_rational("z^3/3 + z").unwrap();
        let expected = poly(&[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0), (1.0 / 3.0, 0.0)]);
        assert!(r.numerator().approx_eq(&expected, 1e-15));
        assert!(r.is_polynomial());
    }

    #[test]
    fn rational_forms() {
        let r = parse_rational("(z^2+1)/z").unwrap();
        assert!(r
            .numerator()
            .approx_eq(&poly(&[(1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]), 1e-15));
        assert!(r.denominator().approx_eq(&Polynomial::z(), 1e-15));

        let r = parse_rational("-1/z^2").unwrap();
        assert!(r.numerator().approx_eq(&poly(&[(-1.0, 0.0)]), 1e-15));
        assert!(r
            .denominator()
            .approx_eq(&poly(&[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]), 1e-15));
    }

    #[test]
    fn precedence() {
        let r = parse_rational("1+2*z^2").unwrap();
        assert!(r
            .numerator()
            .approx_eq(&poly(&[(1.0, 0.0), (0.0, 0.0), (2.0, 0.0)]), 1e-15));
        let r = parse_rational("-z^2").unwrap();
        assert_eq!(r.numerator().leading(), c(-1.0, 0.0));
        let r = parse_rational("8/2/2").unwrap();
        assert_eq!(r.as_constant(), Some(c(2.0, 0.0)));
        let r = parse_rational("2-3-4").unwrap();
        assert_eq!(r.as_constant(), Some(c(-5.0, 0.0)));
    }

    #[test]
    fn complex_literals() {
        assert_eq!(
            parse_rational("2i").unwrap().as_constant(),
            Some(c(0.0, 2.0))
        );
        assert_eq!(
            parse_rational("1.5-0.25i").unwrap().as_constant(),
            Some(c(1.5, -0.25))
        );
        assert_eq!(
            parse_rational("i*i").unwrap().as_constant(),
            Some(c(-1.0, 0.0))
        );
        assert_eq!(
            parse_rational("1e-3").unwrap().as_constant(),
            Some(c(1e-3, 0.0))
        );
    }

    #[test]
    fn points() {
        assert_eq!(parse_point("inf"), Ok(SpherePoint::Infinity));
        assert_eq!(parse_point("0"), Ok(SpherePoint::finite(0.0, 0.0)));
        assert_eq!(parse_point("1+2i"), Ok(SpherePoint::finite(1.0, 2.0)));
        assert_eq!(parse_point("-i"), Ok(SpherePoint::finite(0.0, -1.0)));
        assert_eq!(parse_point("z"), Err(ParseError::NotConstant));
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(
            parse_rational("z^z"),
            Err(ParseError::NonConstantExponent { pos: 2 })
        ));
        assert!(matches!(
            parse_rational("z^(2)"),
            Err(ParseError::NonConstantExponent { .. })
        ));
        assert!(matches!(
            parse_rational("z^-1"),
            Err(ParseError::NonConstantExponent { .. })
        ));
        assert!(matches!(
            parse_rational("z^1.5"),
            Err(ParseError::NonConstantExponent { .. })
        ));
        assert!(matches!(
            parse_rational("1/(z-z)"),
            Err(ParseError::DivisionByZero { pos: 2 })
        ));
        assert!(matches!(
            parse_rational("(z+1"),
            Err(ParseError::Syntax { pos: 4, .. })
        ));
        assert!(matches!(
            parse_rational("2z"),
            Err(ParseError::Syntax { pos: 1, .. })
        ));
        assert!(matches!(
            parse_rational("z $ 1"),
            Err(ParseError::Syntax { pos: 2, .. })
        ));
        assert!(matches!(
            parse_rational(""),
            Err(ParseError::Syntax { pos: 0, .. })
        ));
    }

    #[test]
    fn display_round_trip() {
        for src in [
            "(z^2+1)/z",
            "-1/z^2",
            "(1+2i)*z^3 - 0.125*z + 7",
            "(z-1.5i)^2/((z+2)*(z-i))",
        ] {
            let r = parse_rational(src).unwrap();
            let back = parse_rational(&r.to_string()).unwrap();
            assert!(back.approx_eq(&r, 1e-12), "{src} -> {r}");
        }
    }
}
