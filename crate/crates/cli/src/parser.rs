//! Rational expressions over declared variables.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := unary (("*" | "/") unary)*
//! unary   := "-" unary | power
//! power   := primary ("^" power)?          right-associative
//! primary := NUMBER | IDENT | "(" expr ")"
//! NUMBER  := DIGITS ("." DIGITS)?
//! IDENT   := [A-Za-z][A-Za-z0-9_]*
//! ```
//!
//! Exponents must evaluate to non-negative integer constants. Since `^` binds
//! tighter than unary minus, `-x^2` is `-(x^2)` and `x^-1` is rejected.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use ratdyn_core::exactalg::{RationalFunction, Scalar, Vars};

use crate::error::{CliError, CliResult, ErrorCode};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 4096;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Scalar),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> CliResult<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' | '−' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token {
                tok,
                line: l0,
                column: c0,
            });
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let int_part: String = chars[start..i].iter().collect();
            let mut value = Scalar::from_integer(int_part.parse::<BigInt>().expect("digits"));
            if i < chars.len() && chars[i] == '.' {
                let fstart = i + 1;
                let mut j = fstart;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == fstart {
                    return Err(CliError::at(
                        ErrorCode::Lex,
                        "expected digits after '.'",
                        line,
                        col + (i - start) + 1,
                    ));
                }
                let frac: String = chars[fstart..j].iter().collect();
                let scale = num_traits::pow(BigInt::from(10), j - fstart);
                value += Scalar::new(frac.parse::<BigInt>().expect("digits"), scale);
                i = j;
            }
            col += i - start;
            out.push(Token {
                tok: Tok::Num(value),
                line: l0,
                column: c0,
            });
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: l0,
                column: c0,
            });
            continue;
        }
        return Err(CliError::at(
            ErrorCode::Lex,
            format!("unexpected character '{c}'"),
            line,
            col,
        ));
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    vars: &'a Vars,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, t: &Token, code: ErrorCode, msg: impl Into<String>) -> CliResult<T> {
        Err(CliError::at(code, msg, t.line, t.column))
    }

    fn expr(&mut self) -> CliResult<RationalFunction> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> CliResult<RationalFunction> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    acc = acc.mul(&self.unary()?);
                }
                Tok::Slash => {
                    let op = self.bump();
                    let rhs = self.unary()?;
                    if rhs.is_zero() {
                        return self.err(&op, ErrorCode::DivisionByZero, "division by the zero polynomial");
                    }
                    acc = acc
                        .div(&rhs)
                        .map_err(|e| CliError::at(ErrorCode::DivisionByZero, e.to_string(), op.line, op.column))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> CliResult<RationalFunction> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> CliResult<RationalFunction> {
        let base = self.primary()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.peek().clone();
        let e = self.power()?;
        let k = e
            .constant_value()
            .filter(|c| c.is_integer() && !c.is_negative())
            .and_then(|c| c.to_integer().to_u32())
            .filter(|&k| k <= MAX_EXPONENT);
        match k {
            Some(k) => Ok(base.pow(k)),
            None => self.err(
                &at,
                ErrorCode::BadExponent,
                format!("exponent must be an integer constant between 0 and {MAX_EXPONENT}"),
            ),
        }
    }

    fn primary(&mut self) -> CliResult<RationalFunction> {
        let t = self.bump();
        match &t.tok {
            Tok::Num(v) => Ok(RationalFunction::constant(self.vars, v.clone())),
            Tok::Ident(name) => match self.vars.index_of(name) {
                Some(i) => Ok(RationalFunction::var(self.vars, i)),
                None => self.err(
                    &t,
                    ErrorCode::UndeclaredIdentifier,
                    format!("undeclared identifier '{name}'"),
                ),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                let close = self.bump();
                if close.tok != Tok::RParen {
                    return self.err(&close, ErrorCode::Syntax, "expected ')'");
                }
                Ok(inner)
            }
            Tok::End => self.err(&t, ErrorCode::Syntax, "unexpected end of expression"),
            other => self.err(&t, ErrorCode::Syntax, format!("unexpected {}", describe(other))),
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Num(_) => "number",
        Tok::Ident(_) => "identifier",
        Tok::Plus => "'+'",
        Tok::Minus => "'-'",
        Tok::Star => "'*'",
        Tok::Slash => "'/'",
        Tok::Caret => "'^'",
        Tok::LParen => "'('",
        Tok::RParen => "')'",
        Tok::End => "end of input",
    }
}

/// Parses `src` into a normalized rational function over `vars`.
pub fn parse_expression(src: &str, vars: &Vars) -> CliResult<RationalFunction> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, vars };
    let out = p.expr()?;
    let rest = p.peek().clone();
    if rest.tok != Tok::End {
        return p.err(
            &rest,
            ErrorCode::Syntax,
            format!("unexpected {} after expression", describe(&rest.tok)),
        );
    }
    Ok(out)
}

/// Whether `name` is a legal variable identifier.
pub fn is_identifier(name: &str) -> bool {
    let mut cs = name.chars();
    cs.next().is_some_and(|c| c.is_ascii_alphabetic()) && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Canonical text of a scalar, as accepted by [`parse_expression`].
pub fn scalar_text(c: &Scalar) -> String {
    if c.is_zero() || c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Vars {
        Vars::new(["x", "y"])
    }

    fn p(s: &str) -> CliResult<RationalFunction> {
        parse_expression(s, &xy())
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(p("-x^2").unwrap().to_string(), "-x^2");
        assert_eq!(p("2^3^2").unwrap().to_string(), "512");
        assert_eq!(p("x - y - x").unwrap().to_string(), "-y");
        assert_eq!(p("x/y/x").unwrap().to_string(), "1/y");
        assert_eq!(p("1 + 2*x^2").unwrap().to_string(), "2*x^2 + 1");
        assert_eq!(p("(2*x+3)/(x+1)").unwrap().to_string(), "(2*x + 3)/(x + 1)");
        assert_eq!(p("0.25*x").unwrap().to_string(), "1/4*x");
    }

    #[test]
    fn errors_carry_positions() {
        let e = p("x/(x - x)").unwrap_err();
        assert_eq!(
            (e.code, e.line, e.column),
            (ErrorCode::DivisionByZero, Some(1), Some(2))
        );
        let e = p("x +\n  z").unwrap_err();
        assert_eq!(
            (e.code, e.line, e.column),
            (ErrorCode::UndeclaredIdentifier, Some(2), Some(3))
        );
        let e = p("x^-1").unwrap_err();
        assert_eq!(e.code, ErrorCode::Syntax);
        let e = p("x^(1/2)").unwrap_err();
        assert_eq!((e.code, e.column), (ErrorCode::BadExponent, Some(3)));
        assert_eq!(p("x $ y").unwrap_err().code, ErrorCode::Lex);
        assert_eq!(p("(x + y").unwrap_err().code, ErrorCode::Syntax);
        assert_eq!(p("x y").unwrap_err().code, ErrorCode::Syntax);
        assert_eq!(p("").unwrap_err().code, ErrorCode::Syntax);
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("x_1") && is_identifier("Ab9"));
        assert!(!is_identifier("1x") && !is_identifier("_x") && !is_identifier(""));
    }
}
