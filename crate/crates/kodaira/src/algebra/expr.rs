//! Expression grammar shared by every textual input.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/')? unary)*      juxtaposition multiplies
//! unary := '-' unary | power
//! power := atom ('^' '-'? integer)?
//! atom  := integer | letter | '(' expr ')'
//! ```
//!
//! Variables are single letters, so `ts` reads as `t*s`. Whitespace is ignored.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};

use super::field::Field;
use super::rational::Rf;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset of the offending token.
    pub offset: usize,
    pub token: String,
    pub message: String,
}

impl core::fmt::Display for ParseError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{} at offset {} (near '{}')", self.message, self.offset, self.token)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Int(u64),
    Var(char),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub node: Node,
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Var(char),
    Op(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    peeked: Option<(Tok, usize, usize)>,
}

impl<'a> Lexer<'a> {
    fn err(&self, start: usize, end: usize, msg: &str) -> ParseError {
        let end = end.max(start).min(self.src.len());
        let token = if start >= self.src.len() { String::from("<end>") } else { self.src[start..end.max(start + 1).min(self.src.len())].to_string() };
        ParseError { offset: start, token, message: msg.to_string() }
    }

    fn lex(&mut self) -> Result<(Tok, usize, usize), ParseError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && (bytes[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        if start >= bytes.len() {
            return Ok((Tok::End, start, start));
        }
        let c = bytes[start] as char;
        if c.is_ascii_digit() {
            let mut v: u64 = 0;
            while self.pos < bytes.len() && (bytes[self.pos] as char).is_ascii_digit() {
                v = v
                    .checked_mul(10)
                    .and_then(|v| v.checked_add((bytes[self.pos] - b'0') as u64))
                    .ok_or_else(|| self.err(start, self.pos + 1, "integer literal too large"))?;
                self.pos += 1;
            }
            return Ok((Tok::Int(v), start, self.pos));
        }
        if c.is_ascii_alphabetic() {
            self.pos += 1;
            return Ok((Tok::Var(c), start, self.pos));
        }
        if "+-*/^()".contains(c) {
            self.pos += 1;
            return Ok((Tok::Op(c), start, self.pos));
        }
        let len = self.src[start..].chars().next().map(|ch| ch.len_utf8()).unwrap_or(1);
        Err(self.err(start, start + len, "unexpected character"))
    }

    fn peek(&mut self) -> Result<(Tok, usize, usize), ParseError> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lex()?);
        }
        Ok(self.peeked.unwrap())
    }

    fn next(&mut self) -> Result<(Tok, usize, usize), ParseError> {
        let t = self.peek()?;
        self.peeked = None;
        Ok(t)
    }
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut lx = Lexer { src, pos: 0, peeked: None };
    let e = parse_expr(&mut lx)?;
    let (tok, s, e2) = lx.next()?;
    if tok != Tok::End {
        return Err(lx.err(s, e2, "unexpected token"));
    }
    Ok(e)
}

fn bin(node: fn(Box<Expr>, Box<Expr>) -> Node, a: Expr, b: Expr) -> Expr {
    let (start, end) = (a.start, b.end);
    Expr { node: node(Box::new(a), Box::new(b)), start, end }
}

fn parse_expr(lx: &mut Lexer) -> Result<Expr, ParseError> {
    let mut acc = parse_term(lx)?;
    loop {
        match lx.peek()?.0 {
            Tok::Op('+') => {
                lx.next()?;
                acc = bin(Node::Add, acc, parse_term(lx)?);
            }
            Tok::Op('-') => {
                lx.next()?;
                acc = bin(Node::Sub, acc, parse_term(lx)?);
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_term(lx: &mut Lexer) -> Result<Expr, ParseError> {
    let mut acc = parse_unary(lx)?;
    loop {
        match lx.peek()?.0 {
            Tok::Op('*') => {
                lx.next()?;
                acc = bin(Node::Mul, acc, parse_unary(lx)?);
            }
            Tok::Op('/') => {
                lx.next()?;
                acc = bin(Node::Div, acc, parse_unary(lx)?);
            }
            Tok::Int(_) | Tok::Var(_) | Tok::Op('(') => {
                acc = bin(Node::Mul, acc, parse_power(lx)?);
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_unary(lx: &mut Lexer) -> Result<Expr, ParseError> {
    if let (Tok::Op('-'), s, _) = lx.peek()? {
        lx.next()?;
        let inner = parse_unary(lx)?;
        let end = inner.end;
        return Ok(Expr { node: Node::Neg(Box::new(inner)), start: s, end });
    }
    parse_power(lx)
}

fn parse_power(lx: &mut Lexer) -> Result<Expr, ParseError> {
    let base = parse_atom(lx)?;
    if lx.peek()?.0 != Tok::Op('^') {
        return Ok(base);
    }
    lx.next()?;
    let mut neg = false;
    if lx.peek()?.0 == Tok::Op('-') {
        lx.next()?;
        neg = true;
    }
    match lx.next()? {
        (Tok::Int(n), _, e) => {
            let n = i64::try_from(n).map_err(|_| lx.err(base.start, e, "exponent too large"))?;
            let start = base.start;
            Ok(Expr { node: Node::Pow(Box::new(base), if neg { -n } else { n }), start, end: e })
        }
        (_, s, e) => Err(lx.err(s, e, "expected an integer exponent")),
    }
}

fn parse_atom(lx: &mut Lexer) -> Result<Expr, ParseError> {
    match lx.next()? {
        (Tok::Int(n), s, e) => Ok(Expr { node: Node::Int(n), start: s, end: e }),
        (Tok::Var(c), s, e) => Ok(Expr { node: Node::Var(c), start: s, end: e }),
        (Tok::Op('('), s, _) => {
            let mut inner = parse_expr(lx)?;
            match lx.next()? {
                (Tok::Op(')'), _, e) => {
                    inner.start = s;
                    inner.end = e;
                    Ok(inner)
                }
                (_, s2, e2) => Err(lx.err(s2, e2, "expected ')'")),
            }
        }
        (Tok::End, s, e) => Err(lx.err(s, e, "unexpected end of expression")),
        (_, s, e) => Err(lx.err(s, e, "unexpected token")),
    }
}

/// Interpretation of the grammar in some ring.
pub trait Evaluator {
    type Value: Clone;
    fn int(&self, n: u64) -> Result<Self::Value, String>;
    fn var(&self, c: char) -> Result<Self::Value, String>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value, String>;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value, String>;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value, String>;
    fn div(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value, String>;
    fn neg(&self, a: &Self::Value) -> Result<Self::Value, String>;
    fn pow(&self, a: &Self::Value, e: i64) -> Result<Self::Value, String>;
}

impl Expr {
    pub fn eval<E: Evaluator>(&self, ev: &E, src: &str) -> Result<E::Value, ParseError> {
        let wrap = |r: Result<E::Value, String>| {
            r.map_err(|m| ParseError {
                offset: self.start,
                token: src.get(self.start..self.end).unwrap_or("").to_string(),
                message: m,
            })
        };
        match &self.node {
            Node::Int(n) => wrap(ev.int(*n)),
            Node::Var(c) => wrap(ev.var(*c)),
            Node::Neg(a) => {
                let a = a.eval(ev, src)?;
                wrap(ev.neg(&a))
            }
            Node::Pow(a, e) => {
                let a = a.eval(ev, src)?;
                wrap(ev.pow(&a, *e))
            }
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                let x = a.eval(ev, src)?;
                let y = b.eval(ev, src)?;
                wrap(match &self.node {
                    Node::Add(..) => ev.add(&x, &y),
                    Node::Sub(..) => ev.sub(&x, &y),
                    Node::Mul(..) => ev.mul(&x, &y),
                    _ => ev.div(&x, &y),
                })
            }
        }
    }

    /// Every variable that occurs, in order of first appearance.
    pub fn variables(&self) -> alloc::vec::Vec<char> {
        let mut out = alloc::vec::Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut alloc::vec::Vec<char>) {
        match &self.node {
            Node::Int(_) => {}
            Node::Var(c) => {
                if !out.contains(c) {
                    out.push(*c)
                }
            }
            Node::Neg(a) | Node::Pow(a, _) => a.collect_vars(out),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

/// Rational functions in `t` with coefficients in a finite field; `g` denotes
/// the field generator.
pub struct RfEvaluator<'a> {
    pub field: &'a Field,
}

impl Evaluator for RfEvaluator<'_> {
    type Value = Rf;

    fn int(&self, n: u64) -> Result<Rf, String> {
        let p = self.field.characteristic();
        Ok(Rf::from_int(self.field, (n % p) as i64))
    }

    fn var(&self, c: char) -> Result<Rf, String> {
        match c {
            't' => Ok(Rf::t(self.field)),
            'g' if !self.field.is_prime_field() => Ok(Rf::constant(&self.field.generator())),
            _ => Err(format!("unknown variable '{}'", c)),
        }
    }

    fn add(&self, a: &Rf, b: &Rf) -> Result<Rf, String> {
        Ok(a + b)
    }

    fn sub(&self, a: &Rf, b: &Rf) -> Result<Rf, String> {
        Ok(a - b)
    }

    fn mul(&self, a: &Rf, b: &Rf) -> Result<Rf, String> {
        Ok(a * b)
    }

    fn div(&self, a: &Rf, b: &Rf) -> Result<Rf, String> {
        a.try_div(b).map_err(|_| String::from("division by zero"))
    }

    fn neg(&self, a: &Rf) -> Result<Rf, String> {
        Ok(-a)
    }

    fn pow(&self, a: &Rf, e: i64) -> Result<Rf, String> {
        if e.unsigned_abs() > 1 << 20 {
            return Err(String::from("exponent too large"));
        }
        a.pow(e).map_err(|_| String::from("division by zero"))
    }
}

/// Parses a rational function in `t` over `field`.
pub fn parse_rf(src: &str, field: &Field) -> Result<Rf, ParseError> {
    parse(src)?.eval(&RfEvaluator { field }, src)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar() {
        let f = Field::prime(3).unwrap();
        let a = parse_rf("t^9 + 2*t + 1", &f).unwrap();
        assert_eq!(a.to_string(), "t^9 + 2*t + 1");
        let b = parse_rf(" (t+1)/(t^2) ", &f).unwrap();
        assert_eq!(b.to_string(), "(t + 1)/(t^2)");
        assert_eq!(parse_rf("2t^2", &f).unwrap(), parse_rf("2*t^2", &f).unwrap());
        assert_eq!(parse_rf("-t^-1", &f).unwrap().to_string(), "2/t");
        assert_eq!(parse_rf("4", &f).unwrap(), Rf::one(&f));
    }

    #[test]
    fn errors_carry_positions() {
        let f = Field::prime(5).unwrap();
        let e = parse_rf("t + x", &f).unwrap_err();
        assert_eq!((e.offset, e.token.as_str()), (4, "x"));
        let e = parse_rf("t +", &f).unwrap_err();
        assert_eq!(e.offset, 3);
        let e = parse_rf("1/(t-t)", &f).unwrap_err();
        assert_eq!(e.message, "division by zero");
        assert!(parse_rf("t $ 1", &f).is_err());
    }

    #[test]
    fn generator_symbol() {
        let f = Field::extension(2, &[1, 1, 1]).unwrap();
        let a = parse_rf("(g+1)*t + g", &f).unwrap();
        assert_eq!(a.to_string(), "(g+1)*t + (g)");
        assert_eq!(parse_rf(&a.to_string(), &f).unwrap(), a);
    }
}
