use std::fmt;

use num_traits::{One, Zero};

use super::{Coeff, Expr};
use crate::error::{Error, Result};
use crate::linalg::{format_rat, Rat};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { pos, msg: msg.into() })
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> Result<String> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return err(start, "expected digits");
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn poly(&mut self) -> Result<Expr> {
        let mut terms = Vec::new();
        let mut sign = Rat::one();
        if self.peek() == Some(b'-') && !self.next_is_digit() {
            self.pos += 1;
            sign = -sign;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        terms.push(self.term(sign)?);
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    terms.push(self.term(Rat::one())?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    terms.push(self.term(-Rat::one())?);
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Sum(terms) })
    }

    fn next_is_digit(&self) -> bool {
        self.src.get(self.pos + 1).is_some_and(|c| c.is_ascii_digit())
    }

    fn rational(&mut self) -> Result<Rat> {
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let start = self.pos;
        let p: Rat = Rat::from_integer(
            self.digits()?.parse().map_err(|_| Error::Parse { pos: start, msg: "bad integer".into() })?,
        );
        let mut r = p;
        if self.src.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            let qpos = self.pos;
            let q: Rat = Rat::from_integer(
                self.digits()?.parse().map_err(|_| Error::Parse { pos: qpos, msg: "bad integer".into() })?,
            );
            if q.is_zero() {
                return err(qpos, "zero denominator");
            }
            r /= q;
        }
        Ok(if neg { -r } else { r })
    }

    fn term(&mut self, sign: Rat) -> Result<Expr> {
        let mut scalar = sign;
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'-' => {
                scalar *= self.rational()?;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                }
            }
            _ => {}
        }
        let mut factors = vec![self.factor()?];
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    factors.push(self.factor()?);
                }
                Some(b'x' | b'w' | b'e' | b'[' | b'(') => factors.push(self.factor()?),
                _ => break,
            }
        }
        let body = if factors.len() == 1 { factors.pop().unwrap() } else { Expr::Product(factors) };
        Ok(if scalar.is_one() { body } else { Expr::Scaled(scalar, Box::new(body)) })
    }

    fn factor(&mut self) -> Result<Expr> {
        let at = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let d = self.digits()?;
                let i: u32 = d.parse().map_err(|_| Error::Parse { pos: at, msg: "variable index too large".into() })?;
                if i == 0 {
                    return err(at, "variables are numbered from 1");
                }
                Ok(Expr::Var(i))
            }
            Some(b'w') => {
                self.pos += 1;
                let d = self.digits()?;
                Ok(Expr::Coeff(Coeff::W(
                    d.parse().map_err(|_| Error::Parse { pos: at, msg: "index too large".into() })?,
                )))
            }
            Some(b'e') => {
                self.pos += 1;
                let d = self.digits()?;
                Ok(Expr::Coeff(Coeff::Label(format!("e{d}"))))
            }
            Some(b'[') => {
                self.pos += 1;
                let mut items = vec![self.poly()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    items.push(self.poly()?);
                }
                if items.len() < 2 {
                    return err(self.pos, "commutator needs at least two entries");
                }
                if self.peek() != Some(b']') {
                    return err(self.pos, "expected ']'");
                }
                self.pos += 1;
                Ok(Expr::Commutator(items))
            }
            Some(b'(') => {
                self.pos += 1;
                let p = self.poly()?;
                if self.peek() != Some(b')') {
                    return err(self.pos, "expected ')'");
                }
                self.pos += 1;
                Ok(p)
            }
            Some(c) => err(at, format!("unexpected '{}'", c as char)),
            None => err(at, "unexpected end of input"),
        }
    }
}

/// Parses a generalized polynomial. Every monomial of the expansion must
/// contain a variable.
pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.poly()?;
    if p.peek().is_some() {
        return err(p.pos, "trailing input");
    }
    if let Some(w) = e.expand().words().find(|w| !w.iter().any(|l| l.is_var())) {
        let _ = w;
        return err(0, "monomial without a variable");
    }
    Ok(e)
}

fn fmt_atomic(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        Expr::Var(_) | Expr::Coeff(_) | Expr::Commutator(_) => write!(f, "{e}"),
        _ => write!(f, "({e})"),
    }
}

fn fmt_scaled(c: &Rat, e: &Expr, leading: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let neg = c < &Rat::zero();
    let abs = if neg { -c.clone() } else { c.clone() };
    match (leading, neg) {
        (true, true) => write!(f, "-")?,
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
        (true, false) => {}
    }
    if !abs.is_one() {
        write!(f, "{}*", format_rat(&abs))?;
    }
    match e {
        Expr::Product(fs) => fmt_product(fs, f),
        Expr::Sum(_) | Expr::Scaled(..) => write!(f, "({e})"),
        _ => write!(f, "{e}"),
    }
}

fn fmt_product(fs: &[Expr], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for (i, x) in fs.iter().enumerate() {
        if i > 0 {
            write!(f, "*")?;
        }
        fmt_atomic(x, f)?;
    }
    Ok(())
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::W(i) => write!(f, "w{i}"),
            Coeff::Label(s) => write!(f, "{s}"),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(i) => write!(f, "x{i}"),
            Expr::Coeff(c) => write!(f, "{c}"),
            Expr::Commutator(items) => {
                write!(f, "[")?;
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
            Expr::Product(fs) => fmt_product(fs, f),
            Expr::Scaled(c, e) => fmt_scaled(c, e, true, f),
            Expr::Sum(terms) => {
                for (i, t) in terms.iter().enumerate() {
                    match t {
                        Expr::Scaled(c, e) => fmt_scaled(c, e, i == 0, f)?,
                        Expr::Sum(_) => {
                            if i > 0 {
                                write!(f, " + ")?;
                            }
                            write!(f, "({t})")?
                        }
                        _ => {
                            if i > 0 {
                                write!(f, " + ")?;
                            }
                            write!(f, "{t}")?
                        }
                    }
                }
                Ok(())
            }
        }
    }
}
