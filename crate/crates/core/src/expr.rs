//! Form expressions: `-E*g - h`, `x[2]^q`, `g*h^3/(T^3-T)`, `Delta`, ...
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' exp)?
//! exp   := INT | 'q' | '-' INT | '(' expr ')'
//! atom  := INT | 'T' | 'w' | 'q' | 'E' | 'g' | 'h' | 'Delta'
//!        | NAME '[' expr ']' | '(' expr ')'
//! ```
//!
//! `T` is θ and `w` the generator of `F_q` over `F_p`. Division is allowed
//! by units (`K`-constants times powers of `h`).

use std::fmt;

use crate::algebra::{Fq, KElem, ThetaPoly};
use crate::error::{Error, Result};
use crate::forms::{Families, QMForm, SeqName};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gen {
    E,
    G,
    H,
    Delta,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(u64),
    Theta,
    W,
    Q,
    Gen(Gen),
    Family(SeqName, Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn perr<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            perr(self.pos, format!("expected `{}`", c as char))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let exp = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                e
            }
            Some(b'-') => {
                self.pos += 1;
                Expr::Neg(Box::new(self.int()?))
            }
            Some(b'q') => {
                self.pos += 1;
                Expr::Q
            }
            Some(c) if c.is_ascii_digit() => self.int()?,
            _ => return perr(self.pos, "expected an exponent"),
        };
        Ok(Expr::Pow(Box::new(base), Box::new(exp)))
    }

    fn int(&mut self) -> Result<Expr> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return perr(start, "expected an integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        s.parse().map(Expr::Int).or_else(|_| perr(start, "integer too large"))
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            None => perr(self.pos, "unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => self.int(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                if self.peek() == Some(b'[') {
                    let seq: SeqName = name.parse().map_err(|_| Error::Parse {
                        pos: start,
                        msg: format!("unknown family `{name}`"),
                    })?;
                    self.pos += 1;
                    let k = self.expr()?;
                    self.expect(b']')?;
                    return Ok(Expr::Family(seq, Box::new(k)));
                }
                match name {
                    "T" => Ok(Expr::Theta),
                    "w" => Ok(Expr::W),
                    "q" => Ok(Expr::Q),
                    "E" => Ok(Expr::Gen(Gen::E)),
                    "g" => Ok(Expr::Gen(Gen::G)),
                    "h" => Ok(Expr::Gen(Gen::H)),
                    "Delta" => Ok(Expr::Gen(Gen::Delta)),
                    _ => perr(start, format!("unknown identifier `{name}`")),
                }
            }
            Some(c) => perr(self.pos, format!("unexpected `{}`", c as char)),
        }
    }
}

/// Parses an expression.
pub fn parse(s: &str) -> Result<Expr> {
    let mut p = Parser { src: s.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return perr(p.pos, "trailing input");
    }
    Ok(e)
}

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn write(&self, out: &mut String, min: u8) {
        let paren = self.prec() < min;
        if paren {
            out.push('(');
        }
        match self {
            Expr::Int(n) => out.push_str(&n.to_string()),
            Expr::Theta => out.push('T'),
            Expr::W => out.push('w'),
            Expr::Q => out.push('q'),
            Expr::Gen(g) => out.push_str(match g {
                Gen::E => "E",
                Gen::G => "g",
                Gen::H => "h",
                Gen::Delta => "Delta",
            }),
            Expr::Family(s, k) => {
                out.push_str(s.as_str());
                out.push('[');
                k.write(out, 0);
                out.push(']');
            }
            Expr::Neg(x) => {
                out.push('-');
                x.write(out, 3);
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                let (op, p) = match self {
                    Expr::Add(..) => ('+', 1),
                    Expr::Sub(..) => ('-', 1),
                    Expr::Mul(..) => ('*', 2),
                    _ => ('/', 2),
                };
                a.write(out, p);
                out.push(op);
                b.write(out, p + 1);
            }
            Expr::Pow(b, e) => {
                b.write(out, 5);
                out.push('^');
                match &**e {
                    Expr::Int(_) | Expr::Q => e.write(out, 0),
                    Expr::Neg(x) if matches!(**x, Expr::Int(_)) => e.write(out, 0),
                    _ => {
                        out.push('(');
                        e.write(out, 0);
                        out.push(')');
                    }
                }
            }
        }
        if paren {
            out.push(')');
        }
    }

    /// Integer value, for expressions built from integers, `q` and `+ − * ^ /`.
    pub fn eval_int(&self, q: u32) -> Result<i64> {
        let bad = || Error::InvalidArgument(format!("`{self}` is not an integer expression"));
        let ov = || Error::InvalidArgument(format!("`{self}` overflows"));
        Ok(match self {
            Expr::Int(n) => i64::try_from(*n).map_err(|_| ov())?,
            Expr::Q => q as i64,
            Expr::Neg(x) => -x.eval_int(q)?,
            Expr::Add(a, b) => a.eval_int(q)?.checked_add(b.eval_int(q)?).ok_or_else(ov)?,
            Expr::Sub(a, b) => a.eval_int(q)?.checked_sub(b.eval_int(q)?).ok_or_else(ov)?,
            Expr::Mul(a, b) => a.eval_int(q)?.checked_mul(b.eval_int(q)?).ok_or_else(ov)?,
            Expr::Div(a, b) => {
                let (x, y) = (a.eval_int(q)?, b.eval_int(q)?);
                if y == 0 || x % y != 0 {
                    return Err(bad());
                }
                x / y
            }
            Expr::Pow(a, b) => {
                let (x, y) = (a.eval_int(q)?, b.eval_int(q)?);
                let y = u32::try_from(y).map_err(|_| bad())?;
                x.checked_pow(y).ok_or_else(ov)?
            }
            _ => return Err(bad()),
        })
    }

    /// Value as a form, resolving family references through `fam`.
    pub fn eval(&self, fam: &Families) -> Result<QMForm> {
        let f = fam.field();
        Ok(match self {
            Expr::Int(n) => QMForm::from_int(f, (*n % f.p() as u64) as i64),
            Expr::Q => QMForm::from_int(f, 0),
            Expr::Theta => QMForm::constant(KElem::theta(f)),
            Expr::W => {
                if f.e() == 1 {
                    return Err(Error::InvalidArgument("`w` is only defined when e > 1".into()));
                }
                QMForm::constant(KElem::from_fq(f, f.w()))
            }
            Expr::Gen(Gen::E) => QMForm::gen_e(f),
            Expr::Gen(Gen::G) => QMForm::gen_g(f),
            Expr::Gen(Gen::H) => QMForm::gen_h(f),
            Expr::Gen(Gen::Delta) => QMForm::delta(f),
            Expr::Family(s, k) => {
                let k = k.eval_int(f.q())?;
                let k = u32::try_from(k).map_err(|_| Error::InvalidArgument(format!("{s}[{k}]: negative index")))?;
                (*fam.get(*s, k)?).clone()
            }
            Expr::Neg(x) => x.eval(fam)?.neg(),
            Expr::Add(a, b) => a.eval(fam)?.add(&b.eval(fam)?),
            Expr::Sub(a, b) => a.eval(fam)?.sub(&b.eval(fam)?),
            Expr::Mul(a, b) => a.eval(fam)?.mul(&b.eval(fam)?),
            Expr::Div(a, b) => {
                let d = b.eval(fam)?;
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                let inv = d
                    .inverse_unit()
                    .map_err(|_| Error::InvalidArgument(format!("cannot divide by `{b}`: not a unit")))?;
                a.eval(fam)?.mul(&inv)
            }
            Expr::Pow(a, b) => {
                let k = b.eval_int(f.q())?;
                let base = a.eval(fam)?;
                if k >= 0 {
                    base.pow(k as u64)
                } else {
                    base.inverse_unit()?.pow(k.unsigned_abs())
                }
            }
        })
    }

    /// Value in `K`, for expressions without generators or families.
    pub fn eval_kelem(&self, f: Fq) -> Result<KElem> {
        let bad = || Error::InvalidArgument(format!("`{self}` is not a constant"));
        Ok(match self {
            Expr::Int(n) => KElem::from_int(f, (*n % f.p() as u64) as i64),
            Expr::Q => KElem::zero(f),
            Expr::Theta => KElem::theta(f),
            Expr::W if f.e() > 1 => KElem::from_fq(f, f.w()),
            Expr::Neg(x) => x.eval_kelem(f)?.neg(),
            Expr::Add(a, b) => a.eval_kelem(f)?.add(&b.eval_kelem(f)?),
            Expr::Sub(a, b) => a.eval_kelem(f)?.sub(&b.eval_kelem(f)?),
            Expr::Mul(a, b) => a.eval_kelem(f)?.mul(&b.eval_kelem(f)?),
            Expr::Div(a, b) => a.eval_kelem(f)?.div(&b.eval_kelem(f)?)?,
            Expr::Pow(a, b) => a.eval_kelem(f)?.pow(b.eval_int(f.q())?)?,
            _ => return Err(bad()),
        })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write(&mut s, 0);
        f.write_str(&s)
    }
}

/// Parses a constant of `K` such as `(T^3-T)/(T^2+1)`.
pub fn parse_kelem(f: Fq, s: &str) -> Result<KElem> {
    parse(s)?.eval_kelem(f)
}

/// Parses a θ-polynomial such as `T^2+1`.
pub fn parse_theta_poly(f: Fq, s: &str) -> Result<ThetaPoly> {
    let k = parse_kelem(f, s)?;
    if !k.is_integral() {
        return Err(Error::InvalidArgument(format!("`{s}` is not a polynomial in T")));
    }
    Ok(k.into_parts().0)
}

/// Parses and evaluates a form expression.
pub fn parse_form(fam: &Families, s: &str) -> Result<QMForm> {
    parse(s)?.eval(fam)
}

/// Parses an integer expression such as `q^2+1`.
pub fn parse_int(s: &str, q: u32) -> Result<i64> {
    parse(s)?.eval_int(q)
}
