//! A small expression language for boundary symbols.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := ['-'|'+'] factor (('*'|'/') factor)*
//! factor := atom ('^' ['-'] int)*
//! atom   := int | 'i' | 'h1' | 's' | 'pi' | 'Omega' | 'xin'
//!         | 'a(' j ',' k ')' | 'da(' j ',' k ')' | 'xi(' k ')'
//!         | 'g(' 'X'j ',' 'X'k ')' | 'c(' vec ')' | '|xi|' | 'tr_id'
//!         | fn '(' expr ')' | '(' expr ')'
//! fn     := 'pip' | 'pim' | 'dxin' | 'dxn' | 'tr' | 'res' | 'sph'
//! vec    := 'e'k | 'xi' | "xi'" | 'dxn' | 'X'j
//! ```
//!
//! `g(Xa,Xb)` is expanded into `a` atoms so that `dxn` applies to it, and
//! `|xi|` may only appear raised to an even power.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::clifford::{vector_field, Clifford};
use crate::error::{Error, Result};
use crate::poly::{inner_product, Atom, Poly};
use crate::scalar::GaussRat;
use crate::symbol::{xi_sq, BoundarySymbol};
use crate::symbols::{c_dxn, c_xi, c_xi_tangential};

pub type ExactSymbol = BoundarySymbol<GaussRat>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Bar,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(v) => write!(f, "{v}"),
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::Comma => write!(f, ","),
            Tok::Plus => write!(f, "+"),
            Tok::Minus => write!(f, "-"),
            Tok::Star => write!(f, "*"),
            Tok::Slash => write!(f, "/"),
            Tok::Caret => write!(f, "^"),
            Tok::Bar => write!(f, "|"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            k += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            k += 1;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '|' => Some(Tok::Bar),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, line: l0, col: c0 });
            k += 1;
            col += 1;
            continue;
        }
        let start = k;
        if c.is_ascii_digit() {
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let s: String = chars[start..k].iter().collect();
            let v: BigInt = s.parse().expect("digits parse");
            out.push(Spanned { tok: Tok::Int(v), line: l0, col: c0 });
        } else if c.is_ascii_alphabetic() || c == '_' {
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            if k < chars.len() && chars[k] == '\'' {
                k += 1;
            }
            let s: String = chars[start..k].iter().collect();
            out.push(Spanned { tok: Tok::Ident(s), line: l0, col: c0 });
        } else {
            return Err(Error::Syntax {
                line: l0,
                col: c0,
                msg: format!("unexpected character `{c}`"),
            });
        }
        col += k - start;
    }
    out.push(Spanned { tok: Tok::End, line, col });
    Ok(out)
}

/// Vector argument of `c(...)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VecRef {
    Basis(usize),
    Xi,
    XiTangential,
    Dxn,
    Field(u8),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    PiPlus,
    PiMinus,
    DXiN,
    DXn,
    Trace,
    Res,
    Sphere,
}

/// Parse tree.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Imag,
    Atom(Atom),
    Inner(u8, u8),
    Clifford(VecRef),
    /// `|xi|^(2k)`.
    XiNorm(u32),
    Call(Func, Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_at(&self, t: &Spanned, msg: impl Into<String>) -> Error {
        Error::Syntax {
            line: t.line,
            col: t.col,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        let t = self.next();
        if t.tok != want {
            return Err(self.err_at(&t, format!("expected `{want}`, found `{}`", t.tok)));
        }
        Ok(())
    }

    fn int(&mut self) -> Result<BigInt> {
        let t = self.next();
        match &t.tok {
            Tok::Int(v) => Ok(v.clone()),
            other => Err(self.err_at(&t, format!("expected an integer, found `{other}`"))),
        }
    }

    fn small(&mut self, lo: i64, hi: i64) -> Result<i64> {
        let here = self.toks[self.pos].clone();
        let v = self.int()?;
        match v.to_i64() {
            Some(x) if (lo..=hi).contains(&x) => Ok(x),
            _ => Err(self.err_at(&here, format!("index {v} out of range {lo}..={hi}"))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.next();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.next();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let negate = match self.peek() {
            Tok::Minus => {
                self.next();
                true
            }
            Tok::Plus => {
                self.next();
                false
            }
            _ => false,
        };
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.next();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Slash => {
                    self.next();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => break,
            }
        }
        Ok(if negate { Expr::Neg(Box::new(lhs)) } else { lhs })
    }

    fn factor(&mut self) -> Result<Expr> {
        let start = self.toks[self.pos].clone();
        let mut base = self.primary()?;
        while *self.peek() == Tok::Caret {
            self.next();
            let neg = if *self.peek() == Tok::Minus {
                self.next();
                true
            } else {
                false
            };
            let here = self.toks[self.pos].clone();
            let e = self
                .int()?
                .to_i64()
                .filter(|e| *e <= 64)
                .ok_or_else(|| self.err_at(&here, "exponent too large"))?;
            let e = if neg { -e } else { e };
            base = match base {
                Expr::XiNorm(0) => {
                    if e <= 0 || e % 2 == 1 {
                        return Err(self.err_at(&start, "`|xi|` needs a positive even exponent"));
                    }
                    Expr::XiNorm(e as u32 / 2)
                }
                other => Expr::Pow(Box::new(other), e),
            };
        }
        if base == Expr::XiNorm(0) {
            return Err(self.err_at(&start, "`|xi|` needs a positive even exponent"));
        }
        Ok(base)
    }

    fn vec_arg(&mut self) -> Result<VecRef> {
        let t = self.next();
        let Tok::Ident(name) = &t.tok else {
            return Err(self.err_at(&t, format!("expected a vector, found `{}`", t.tok)));
        };
        let indexed = |prefix: &str| -> Option<usize> {
            name.strip_prefix(prefix)
                .filter(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()))
                .and_then(|d| d.parse().ok())
        };
        match name.as_str() {
            "xi" => Ok(VecRef::Xi),
            "xi'" => Ok(VecRef::XiTangential),
            "dxn" => Ok(VecRef::Dxn),
            _ => {
                if let Some(k) = indexed("e").filter(|k| (1..=32).contains(k)) {
                    Ok(VecRef::Basis(k))
                } else if let Some(j) = indexed("X").filter(|j| (1..=255).contains(j)) {
                    Ok(VecRef::Field(j as u8))
                } else {
                    Err(Error::UnknownSymbol(name.clone()))
                }
            }
        }
    }

    fn field_index(&mut self) -> Result<u8> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => s
                .strip_prefix('X')
                .and_then(|d| d.parse::<u8>().ok())
                .filter(|j| *j >= 1)
                .ok_or_else(|| self.err_at(&t, format!("expected `X<j>`, found `{s}`"))),
            other => Err(self.err_at(&t, format!("expected `X<j>`, found `{other}`"))),
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        let t = self.next();
        match t.tok.clone() {
            Tok::Int(v) => Ok(Expr::Int(v)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Bar => {
                let id = self.next();
                if id.tok != Tok::Ident("xi".into()) {
                    return Err(self.err_at(&id, "only `|xi|` is supported"));
                }
                self.expect(Tok::Bar)?;
                // bare `|xi|`, only valid under an even power
                Ok(Expr::XiNorm(0))
            }
            Tok::Ident(name) => self.ident(&name),
            other => Err(self.err_at(&t, format!("unexpected `{other}`"))),
        }
    }

    fn ident(&mut self, name: &str) -> Result<Expr> {
        let simple = match name {
            "i" => Some(Expr::Imag),
            "h1" => Some(Expr::Atom(Atom::HPrime)),
            "s" => Some(Expr::Atom(Atom::SCurv)),
            "pi" => Some(Expr::Atom(Atom::Pi)),
            "Omega" => Some(Expr::Atom(Atom::Omega)),
            "xin" => Some(Expr::Atom(Atom::XiN)),
            "tr_id" => Some(Expr::Atom(Atom::TrId)),
            _ => None,
        };
        if let Some(e) = simple {
            return Ok(e);
        }
        let func = match name {
            "pip" => Some(Func::PiPlus),
            "pim" => Some(Func::PiMinus),
            "dxin" => Some(Func::DXiN),
            "dxn" => Some(Func::DXn),
            "tr" => Some(Func::Trace),
            "res" => Some(Func::Res),
            "sph" => Some(Func::Sphere),
            _ => None,
        };
        if let Some(f) = func {
            self.expect(Tok::LParen)?;
            let e = self.expr()?;
            self.expect(Tok::RParen)?;
            return Ok(Expr::Call(f, Box::new(e)));
        }
        match name {
            "a" | "da" => {
                self.expect(Tok::LParen)?;
                let j = self.small(1, 255)? as u8;
                self.expect(Tok::Comma)?;
                let k = self.small(1, 32)? as u8;
                self.expect(Tok::RParen)?;
                Ok(Expr::Atom(if name == "a" { Atom::A(j, k) } else { Atom::DA(j, k) }))
            }
            "xi" => {
                self.expect(Tok::LParen)?;
                let k = self.small(1, 32)? as u8;
                self.expect(Tok::RParen)?;
                Ok(Expr::Atom(Atom::Xi(k)))
            }
            "g" => {
                self.expect(Tok::LParen)?;
                let a = self.field_index()?;
                self.expect(Tok::Comma)?;
                let b = self.field_index()?;
                self.expect(Tok::RParen)?;
                Ok(Expr::Inner(a, b))
            }
            "c" => {
                self.expect(Tok::LParen)?;
                let v = self.vec_arg()?;
                self.expect(Tok::RParen)?;
                Ok(Expr::Clifford(v))
            }
            _ => Err(Error::UnknownSymbol(name.to_string())),
        }
    }
}

/// Parses `text` into a tree.
pub fn parse(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    let t = p.next();
    if t.tok != Tok::End {
        return Err(p.err_at(&t, format!("unexpected `{}`", t.tok)));
    }
    Ok(e)
}

fn constant(n: usize, c: GaussRat) -> ExactSymbol {
    BoundarySymbol::scalar(n, Poly::constant(c))
}

fn vector(n: usize, v: VecRef) -> Result<Clifford<Poly<GaussRat>>> {
    match v {
        VecRef::Basis(k) => {
            if k > n {
                return Err(Error::RankMismatch(k, n));
            }
            Ok(Clifford::generator(n, k))
        }
        VecRef::Xi => Ok(c_xi(n)),
        VecRef::XiTangential => Ok(c_xi_tangential(n)),
        VecRef::Dxn => Ok(c_dxn(n)),
        VecRef::Field(j) => Ok(vector_field(n, j)),
    }
}

/// Evaluates a tree in rank `n`.
pub fn eval(e: &Expr, n: usize) -> Result<ExactSymbol> {
    Ok(match e {
        Expr::Int(v) => constant(n, GaussRat::new(BigRational::from_integer(v.clone()), BigRational::zero())),
        Expr::Imag => constant(n, GaussRat::i()),
        Expr::Atom(a) => {
            if let Atom::Xi(k) = a {
                if *k as usize >= n {
                    return Err(Error::RankMismatch(*k as usize, n));
                }
            }
            if let Atom::A(_, k) | Atom::DA(_, k) = a {
                if *k as usize > n {
                    return Err(Error::RankMismatch(*k as usize, n));
                }
            }
            BoundarySymbol::scalar(n, Poly::atom(*a))
        }
        Expr::Inner(a, b) => BoundarySymbol::scalar(n, inner_product(*a, *b, n)),
        Expr::Clifford(v) => BoundarySymbol::polynomial(vector(n, *v)?),
        Expr::XiNorm(k) => BoundarySymbol::scalar(n, xi_sq(n).pow(*k)),
        Expr::Call(f, arg) => {
            let x = eval(arg, n)?;
            match f {
                Func::PiPlus => x.pi_plus()?,
                Func::PiMinus => x.pi_minus()?,
                Func::DXiN => x.d_xi_n(),
                Func::DXn => x.d_x_n()?,
                Func::Trace => x.trace(),
                Func::Res => BoundarySymbol::polynomial(x.integrate()?),
                Func::Sphere => x.sphere_average(),
            }
        }
        Expr::Neg(x) => eval(x, n)?.neg(),
        Expr::Add(a, b) => eval(a, n)?.checked_add(&eval(b, n)?)?,
        Expr::Sub(a, b) => eval(a, n)?.checked_sub(&eval(b, n)?)?,
        Expr::Mul(a, b) => eval(a, n)?.checked_mul(&eval(b, n)?)?,
        Expr::Div(a, b) => eval(a, n)?.checked_mul(&eval(b, n)?.try_inverse()?)?,
        Expr::Pow(b, e) => {
            let x = eval(b, n)?;
            let base = if *e < 0 { x.try_inverse()? } else { x };
            let mut out = BoundarySymbol::one(n);
            for _ in 0..e.unsigned_abs() {
                out = out.checked_mul(&base)?;
            }
            out
        }
    })
}

/// Parses and evaluates in rank `n`.
pub fn parse_symbol(text: &str, n: usize) -> Result<ExactSymbol> {
    eval(&parse(text)?, n)
}

/// Parses a scalar expression and returns its polynomial value; the
/// expression must not depend on `xi_n` through a denominator.
pub fn parse_poly(text: &str, n: usize) -> Result<Poly<GaussRat>> {
    let s = parse_symbol(text, n)?;
    if s.p() != 0 || s.q() != 0 {
        return Err(Error::InvalidArgument(format!("`{text}` is not a polynomial")));
    }
    if s.num().terms().any(|(m, _)| m != 0) {
        return Err(Error::InvalidArgument(format!("`{text}` is not scalar")));
    }
    Ok(s.num().coeff(0))
}

/// Vector fields of a word `c(X_a)*c(X_b)*...`, or `None` if `e` has another
/// shape.
pub fn field_word(e: &Expr) -> Option<Vec<u8>> {
    match e {
        Expr::Clifford(VecRef::Field(j)) => Some(vec![*j]),
        Expr::Mul(a, b) => {
            let mut w = field_word(a)?;
            w.extend(field_word(b)?);
            Some(w)
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{build_symbol, SymbolName};

    fn sym(s: &str) -> ExactSymbol {
        parse_symbol(s, 4).unwrap()
    }

    #[test]
    fn inverse_symbol() {
        let want: ExactSymbol = build_symbol(SymbolName::DInvM1, 4).unwrap();
        assert_eq!(sym("i*c(xi)/|xi|^2"), want);
    }

    #[test]
    fn generator_squares_to_minus_one() {
        assert!(sym("c(e1)*c(e1)+1").is_zero());
    }

    #[test]
    fn pi_plus_example() {
        let got = sym("pip(i*c(xi)/|xi|^2)");
        let want = sym("(c(xi')+i*c(dxn))/(2*(xin-i))");
        assert_eq!(got, want);
    }

    #[test]
    fn precedence_and_powers() {
        assert_eq!(sym("1+2*3^2"), sym("19"));
        assert_eq!(sym("-2^2"), sym("-4"));
        assert_eq!(sym("3/8*h1"), sym("h1*3/8"));
        assert_eq!(sym("(xin-i)^-1"), sym("1/(xin-i)"));
    }

    #[test]
    fn inner_products_expand() {
        assert_eq!(parse_poly("g(X1,X2)", 2).unwrap().to_string(), "a(1,1)*a(2,1) + a(1,2)*a(2,2)");
        let d = parse_poly("dxn(g(X1,X1))", 2).unwrap();
        assert_eq!(d.to_string(), "2*a(1,1)*da(1,1) + 2*a(1,2)*da(1,2)");
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse("1 +\n  * 2") {
            Err(Error::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("{other:?}"),
        }
        match parse("c(e1) $") {
            Err(Error::Syntax { line, col, .. }) => assert_eq!((line, col), (1, 7)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("|xi|"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("|xi|^3"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn unknown_and_rank_errors() {
        assert!(matches!(parse("foo"), Err(Error::UnknownSymbol(s)) if s == "foo"));
        assert!(matches!(parse_symbol("c(e5)", 4), Err(Error::RankMismatch(..))));
        assert!(matches!(parse_symbol("xi(4)", 4), Err(Error::RankMismatch(..))));
    }

    #[test]
    fn printer_round_trip() {
        for s in [
            "i*c(xi)/|xi|^2",
            "pip(i*c(xi)/|xi|^2)",
            "(3/8*h1 - i/2*xin)*c(e1)*c(e4)/(|xi|^2)^3",
            "dxin(pip(c(xi')*c(X1)*c(X2)/|xi|^2))",
            "(1/2+3/4*i)*xi(1)*xi(2)^2/((xin-i)^2*(xin+i))",
            "tr(c(X1)*c(X2)*c(xi)*c(xi))/|xi|^4",
            "0",
        ] {
            let a = sym(s);
            let b = sym(&a.to_string());
            assert_eq!(a, b, "{s} printed as {a}");
        }
    }

    #[test]
    fn field_words() {
        assert_eq!(field_word(&parse("c(X1)*c(X2)*c(X3)").unwrap()), Some(vec![1, 2, 3]));
        assert_eq!(field_word(&parse("c(X1)+c(X2)").unwrap()), None);
    }
}
