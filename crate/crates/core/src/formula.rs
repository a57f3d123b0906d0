//! Arithmetic expressions in `x` and `y` for boundary data.
//!
//! Grammar: numbers, `x`, `y`, `pi`, `+ - * / ^`, unary minus, parentheses and
//! the functions `abs sin cos tan sinh cosh atan exp sqrt ln min max`.
//! `^` binds tighter than unary minus and associates to the right.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Debug, PartialEq)]
enum Ast {
    Num(f64),
    X,
    Y,
    Neg(Box<Ast>),
    Bin(char, Box<Ast>, Box<Ast>),
    Call(Func, Vec<Ast>),
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Func {
    Abs,
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Atan,
    Exp,
    Sqrt,
    Ln,
    Min,
    Max,
}

impl Func {
    fn lookup(name: &str) -> Option<(Func, usize)> {
        Some(match name {
            "abs" => (Func::Abs, 1),
            "sin" => (Func::Sin, 1),
            "cos" => (Func::Cos, 1),
            "tan" => (Func::Tan, 1),
            "sinh" => (Func::Sinh, 1),
            "cosh" => (Func::Cosh, 1),
            "atan" => (Func::Atan, 1),
            "exp" => (Func::Exp, 1),
            "sqrt" => (Func::Sqrt, 1),
            "ln" | "log" => (Func::Ln, 1),
            "min" => (Func::Min, 2),
            "max" => (Func::Max, 2),
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("{msg} at byte {pos} of `{src}`")]
pub struct FormulaError {
    pub src: String,
    pub pos: usize,
    pub msg: String,
}

/// A parsed boundary-data expression.
#[derive(Clone, Debug, PartialEq)]
pub struct Formula {
    src: String,
    ast: Ast,
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, FormulaError> {
        Err(FormulaError {
            src: self.src.to_string(),
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Ast, FormulaError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(c @ (b'+' | b'-')) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Ast::Bin(c as char, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Ast, FormulaError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(c @ (b'*' | b'/')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = Ast::Bin(c as char, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Ast, FormulaError> {
        if self.eat(b'-') {
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast, FormulaError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exp = self.unary()?;
            return Ok(Ast::Bin('^', Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast, FormulaError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                match name {
                    "x" => return Ok(Ast::X),
                    "y" => return Ok(Ast::Y),
                    "pi" => return Ok(Ast::Num(std::f64::consts::PI)),
                    _ => {}
                }
                let Some((f, arity)) = Func::lookup(name) else {
                    self.pos = start;
                    return self.err(format!("unknown name `{name}`"));
                };
                if !self.eat(b'(') {
                    return self.err(format!("expected `(` after `{name}`"));
                }
                let mut args = vec![self.expr()?];
                while self.eat(b',') {
                    args.push(self.expr()?);
                }
                if !self.eat(b')') {
                    return self.err("expected `)`");
                }
                if args.len() != arity {
                    return self.err(format!("`{name}` takes {arity} argument(s), got {}", args.len()));
                }
                Ok(Ast::Call(f, args))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }

    fn number(&mut self) -> Result<Ast, FormulaError> {
        let start = self.pos;
        let b = self.bytes;
        while self.pos < b.len() && (b[self.pos].is_ascii_digit() || b[self.pos] == b'.') {
            self.pos += 1;
        }
        if self.pos < b.len() && (b[self.pos] == b'e' || b[self.pos] == b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < b.len() && (b[self.pos] == b'+' || b[self.pos] == b'-') {
                self.pos += 1;
            }
            if self.pos < b.len() && b[self.pos].is_ascii_digit() {
                while self.pos < b.len() && b[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            } else {
                self.pos = save;
            }
        }
        match self.src[start..self.pos].parse::<f64>() {
            Ok(v) => Ok(Ast::Num(v)),
            Err(_) => {
                self.pos = start;
                self.err("malformed number")
            }
        }
    }
}

fn eval(ast: &Ast, x: f64, y: f64) -> f64 {
    match ast {
        Ast::Num(v) => *v,
        Ast::X => x,
        Ast::Y => y,
        Ast::Neg(a) => -eval(a, x, y),
        Ast::Bin(op, a, b) => {
            let (a, b) = (eval(a, x, y), eval(b, x, y));
            match op {
                '+' => a + b,
                '-' => a - b,
                '*' => a * b,
                '/' => a / b,
                _ => {
                    if b.fract() == 0.0 && b.abs() <= 64.0 {
                        a.powi(b as i32)
                    } else {
                        a.powf(b)
                    }
                }
            }
        }
        Ast::Call(f, args) => {
            let a = eval(&args[0], x, y);
            match f {
                Func::Abs => a.abs(),
                Func::Sin => a.sin(),
                Func::Cos => a.cos(),
                Func::Tan => a.tan(),
                Func::Sinh => a.sinh(),
                Func::Cosh => a.cosh(),
                Func::Atan => a.atan(),
                Func::Exp => a.exp(),
                Func::Sqrt => a.sqrt(),
                Func::Ln => a.ln(),
                Func::Min => a.min(eval(&args[1], x, y)),
                Func::Max => a.max(eval(&args[1], x, y)),
            }
        }
    }
}

impl Formula {
    pub fn parse(src: &str) -> Result<Formula, FormulaError> {
        let mut p = Parser {
            src,
            bytes: src.as_bytes(),
            pos: 0,
        };
        let ast = p.expr()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        Ok(Formula {
            src: src.to_string(),
            ast,
        })
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        eval(&self.ast, x, y)
    }

    /// The same expression with every value negated.
    pub fn negated(&self) -> Formula {
        Formula {
            src: format!("-({})", self.src),
            ast: Ast::Neg(Box::new(self.ast.clone())),
        }
    }

    pub fn source(&self) -> &str {
        &self.src
    }
}

impl FromStr for Formula {
    type Err = FormulaError;
    fn from_str(s: &str) -> Result<Formula, FormulaError> {
        Formula::parse(s)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.src)
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.src)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Formula, D::Error> {
        let s = String::deserialize(d)?;
        Formula::parse(&s).map_err(serde::de::Error::custom)
    }
}
