//! Complex-valued expressions in one free variable.
//!
//! Grammar (whitespace-insensitive, no implicit multiplication):
//!
//! ```text
//! expr    = term , { ("+" | "-") , term } ;
//! term    = unary , { ("*" | "/") , unary } ;
//! unary   = "-" , unary | power ;
//! power   = atom , [ "^" , unary ] ;
//! atom    = number | constant | variable | function , "(" , expr , ")" | "(" , expr , ")" ;
//! number  = digits , [ "." , [ digits ] ] , [ exponent ] | "." , digits , [ exponent ] ;
//! constant = "pi" | "e" | "i" ;
//! function = "sin" | "cos" | "exp" | "log" | "abs" | "sqrt" | "re" | "im" | "conj" ;
//! ```
//!
//! `^` binds tighter than unary minus and is right-associative, so `-2^2`
//! is `-(2^2)` and `2^3^2` is `2^(3^2)`. Error offsets are 1-based byte
//! positions; an error at end of input reports `len + 1`.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("`{0}` is reserved and cannot be used as the free variable")]
    ReservedVariable(String),
    #[error("domain error: {0}")]
    Domain(String),
}

impl ExprError {
    /// 1-based byte offset for parse errors.
    pub fn offset(&self) -> Option<usize> {
        match self {
            ExprError::Syntax { offset, .. } | ExprError::UnknownIdentifier { offset, .. } => {
                Some(*offset)
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constant {
    Pi,
    E,
    I,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
            BinaryOp::Pow => '^',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinaryOp::Add | BinaryOp::Sub => 1,
            BinaryOp::Mul | BinaryOp::Div => 2,
            BinaryOp::Pow => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Function {
    Sin,
    Cos,
    Exp,
    Log,
    Abs,
    Sqrt,
    Re,
    Im,
    Conj,
}

impl Function {
    pub const ALL: [Function; 9] = [
        Function::Sin,
        Function::Cos,
        Function::Exp,
        Function::Log,
        Function::Abs,
        Function::Sqrt,
        Function::Re,
        Function::Im,
        Function::Conj,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Function::Sin => "sin",
            Function::Cos => "cos",
            Function::Exp => "exp",
            Function::Log => "log",
            Function::Abs => "abs",
            Function::Sqrt => "sqrt",
            Function::Re => "re",
            Function::Im => "im",
            Function::Conj => "conj",
        }
    }

    fn from_name(name: &str) -> Option<Function> {
        Function::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Expression tree.
///
/// `Num` literals produced by the parser are always finite and non-negative;
/// a leading minus is a `Neg` node.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Const(Constant),
    Var(String),
    Neg(Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Call(Function, Box<Expr>),
}

const PREC_NEG: u8 = 3;
const PREC_ATOM: u8 = 5;

impl Expr {
    pub fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    /// Literal tree for a complex constant, using only non-negative `Num` leaves.
    pub fn complex_literal(z: Complex64) -> Expr {
        fn signed(x: f64) -> Expr {
            if x.is_sign_negative() && x != 0.0 {
                Expr::Neg(Box::new(Expr::Num(-x)))
            } else {
                Expr::Num(x.abs())
            }
        }
        let re = signed(z.re);
        if z.im == 0.0 {
            return re;
        }
        let im = Expr::binary(
            BinaryOp::Mul,
            Expr::Num(z.im.abs()),
            Expr::Const(Constant::I),
        );
        let op = if z.im < 0.0 {
            BinaryOp::Sub
        } else {
            BinaryOp::Add
        };
        Expr::binary(op, re, im)
    }

    /// `alpha * (self) + shift`.
    pub fn affine(&self, alpha: Complex64, shift: Complex64) -> Expr {
        let scaled = Expr::binary(BinaryOp::Mul, Expr::complex_literal(alpha), self.clone());
        Expr::binary(BinaryOp::Add, scaled, Expr::complex_literal(shift))
    }

    /// Name of the free variable, if one occurs.
    pub fn variable(&self) -> Option<&str> {
        match self {
            Expr::Var(name) => Some(name),
            Expr::Num(_) | Expr::Const(_) => None,
            Expr::Neg(inner) | Expr::Call(_, inner) => inner.variable(),
            Expr::Binary(_, lhs, rhs) => lhs.variable().or_else(|| rhs.variable()),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(op, ..) => op.precedence(),
            Expr::Neg(_) => PREC_NEG,
            _ => PREC_ATOM,
        }
    }

    /// Evaluates at `value`. Signed zeros are normalized to `+0`, so `-4`
    /// sits above the branch cut of `sqrt` and `log`.
    pub fn eval(&self, value: Complex64) -> Result<Complex64, ExprError> {
        Ok(unsigned(match self {
            Expr::Num(x) => Complex64::new(*x, 0.0),
            Expr::Const(Constant::Pi) => Complex64::new(std::f64::consts::PI, 0.0),
            Expr::Const(Constant::E) => Complex64::new(std::f64::consts::E, 0.0),
            Expr::Const(Constant::I) => Complex64::new(0.0, 1.0),
            Expr::Var(_) => value,
            Expr::Neg(inner) => -inner.eval(value)?,
            Expr::Binary(op, lhs, rhs) => {
                let a = lhs.eval(value)?;
                let b = rhs.eval(value)?;
                match op {
                    BinaryOp::Add => a + b,
                    BinaryOp::Sub => a - b,
                    BinaryOp::Mul => a * b,
                    BinaryOp::Div => cdiv(a, b)?,
                    BinaryOp::Pow => cpow(a, b)?,
                }
            }
            Expr::Call(f, arg) => {
                let z = arg.eval(value)?;
                match f {
                    Function::Sin => z.sin(),
                    Function::Cos => z.cos(),
                    Function::Exp => z.exp(),
                    Function::Log => {
                        if z == Complex64::new(0.0, 0.0) {
                            return Err(ExprError::Domain("log(0)".into()));
                        }
                        z.ln()
                    }
                    Function::Abs => Complex64::new(z.norm(), 0.0),
                    Function::Sqrt => z.sqrt(),
                    Function::Re => Complex64::new(z.re, 0.0),
                    Function::Im => Complex64::new(z.im, 0.0),
                    Function::Conj => z.conj(),
                }
            }
        }))
    }

    /// Evaluates at a real argument.
    pub fn eval_real(&self, x: f64) -> Result<Complex64, ExprError> {
        self.eval(Complex64::new(x, 0.0))
    }
}

fn is_zero(z: Complex64) -> bool {
    z.re == 0.0 && z.im == 0.0
}

fn unsigned(z: Complex64) -> Complex64 {
    Complex64::new(z.re + 0.0, z.im + 0.0)
}

fn cdiv(a: Complex64, b: Complex64) -> Result<Complex64, ExprError> {
    if is_zero(b) {
        return Err(ExprError::Domain("division by zero".into()));
    }
    // Real divisors divide componentwise so that e.g. 1/11 is the correctly rounded double.
    if b.im == 0.0 {
        Ok(Complex64::new(a.re / b.re, a.im / b.re))
    } else {
        Ok(a / b)
    }
}

const MAX_EXACT_EXPONENT: f64 = 9_007_199_254_740_992.0; // 2^53

fn cpow(base: Complex64, exp: Complex64) -> Result<Complex64, ExprError> {
    if exp.im == 0.0 && exp.re.fract() == 0.0 && exp.re.abs() <= MAX_EXACT_EXPONENT {
        let k = exp.re as i64;
        let magnitude = powi(base, k.unsigned_abs());
        return if k < 0 {
            if is_zero(base) {
                Err(ExprError::Domain("zero raised to a negative power".into()))
            } else {
                cdiv(Complex64::new(1.0, 0.0), magnitude)
            }
        } else {
            Ok(magnitude)
        };
    }
    if is_zero(base) {
        return if exp.re > 0.0 {
            Ok(Complex64::new(0.0, 0.0))
        } else {
            Err(ExprError::Domain(
                "zero raised to a power with non-positive real part".into(),
            ))
        };
    }
    Ok((base.ln() * exp).exp())
}

fn powi(mut base: Complex64, mut k: u64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    while k > 0 {
        if k & 1 == 1 {
            acc *= base;
        }
        k >>= 1;
        if k > 0 {
            base *= base;
        }
    }
    acc
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
            if parens {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Num(x) => write!(f, "{x}"),
            Expr::Const(Constant::Pi) => f.write_str("pi"),
            Expr::Const(Constant::E) => f.write_str("e"),
            Expr::Const(Constant::I) => f.write_str("i"),
            Expr::Var(name) => f.write_str(name),
            Expr::Neg(inner) => {
                f.write_str("-")?;
                child(f, inner, inner.precedence() < PREC_NEG)
            }
            Expr::Call(func, arg) => write!(f, "{}({arg})", func.name()),
            Expr::Binary(BinaryOp::Pow, lhs, rhs) => {
                child(f, lhs, lhs.precedence() <= BinaryOp::Pow.precedence())?;
                f.write_str("^")?;
                child(f, rhs, rhs.precedence() < PREC_NEG)
            }
            Expr::Binary(op, lhs, rhs) => {
                let p = op.precedence();
                child(f, lhs, lhs.precedence() < p)?;
                write!(f, " {} ", op.symbol())?;
                child(f, rhs, rhs.precedence() <= p)
            }
        }
    }
}

/// Parses `text` with `var_name` as the only admissible free variable.
pub fn parse(text: &str, var_name: &str) -> Result<Expr, ExprError> {
    if is_reserved(var_name) {
        return Err(ExprError::ReservedVariable(var_name.to_string()));
    }
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        var_name,
        end: text.len() + 1,
    };
    if parser.tokens.is_empty() {
        return Err(ExprError::Syntax {
            offset: 1,
            message: "empty expression".into(),
        });
    }
    let expr = parser.expr()?;
    if let Some(tok) = parser.peek() {
        let message = match tok.kind {
            TokenKind::Ident(_) | TokenKind::Number(_) | TokenKind::LParen => {
                format!(
                    "unexpected {}; implicit multiplication is not supported",
                    tok.kind
                )
            }
            _ => format!("unexpected {}", tok.kind),
        };
        return Err(ExprError::Syntax {
            offset: tok.offset,
            message,
        });
    }
    Ok(expr)
}

fn is_reserved(name: &str) -> bool {
    matches!(name, "pi" | "e" | "i") || Function::from_name(name).is_some()
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Number(x) => write!(f, "number `{x}`"),
            TokenKind::Ident(name) => write!(f, "identifier `{name}`"),
            TokenKind::Plus => f.write_str("`+`"),
            TokenKind::Minus => f.write_str("`-`"),
            TokenKind::Star => f.write_str("`*`"),
            TokenKind::Slash => f.write_str("`/`"),
            TokenKind::Caret => f.write_str("`^`"),
            TokenKind::LParen => f.write_str("`(`"),
            TokenKind::RParen => f.write_str("`)`"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    /// 1-based.
    offset: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ExprError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let offset = i + 1;
        let single = match c {
            b'+' => Some(TokenKind::Plus),
            b'-' => Some(TokenKind::Minus),
            b'*' => Some(TokenKind::Star),
            b'/' => Some(TokenKind::Slash),
            b'^' => Some(TokenKind::Caret),
            b'(' => Some(TokenKind::LParen),
            b')' => Some(TokenKind::RParen),
            _ => None,
        };
        if let Some(kind) = single {
            tokens.push(Token { kind, offset });
            i += 1;
        } else if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == b'.' {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
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
            let literal = &text[start..i];
            let value: f64 = literal.parse().map_err(|_| ExprError::Syntax {
                offset,
                message: format!("malformed number `{literal}`"),
            })?;
            if !value.is_finite() {
                return Err(ExprError::Syntax {
                    offset,
                    message: format!("number `{literal}` overflows"),
                });
            }
            tokens.push(Token {
                kind: TokenKind::Number(value),
                offset,
            });
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            tokens.push(Token {
                kind: TokenKind::Ident(text[start..i].to_string()),
                offset,
            });
        } else {
            let ch = text[i..].chars().next().unwrap_or('?');
            return Err(ExprError::Syntax {
                offset,
                message: format!("unexpected character `{ch}`"),
            });
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    var_name: &'a str,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<&TokenKind> {
        self.peek().map(|t| &t.kind)
    }

    fn next(&mut self) -> Option<Token> {
        let tok = self.tokens.get(self.pos).cloned();
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn error_here(&self, message: impl Into<String>) -> ExprError {
        ExprError::Syntax {
            offset: self.peek().map_or(self.end, |t| t.offset),
            message: message.into(),
        }
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<(), ExprError> {
        match self.peek_kind() {
            Some(k) if *k == kind => {
                self.pos += 1;
                Ok(())
            }
            Some(k) => Err(self.error_here(format!("expected {what}, found {k}"))),
            None => Err(self.error_here(format!("expected {what}, found end of input"))),
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek_kind() {
                Some(TokenKind::Plus) => BinaryOp::Add,
                Some(TokenKind::Minus) => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek_kind() {
                Some(TokenKind::Star) => BinaryOp::Mul,
                Some(TokenKind::Slash) => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.peek_kind() == Some(&TokenKind::Minus) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.peek_kind() == Some(&TokenKind::Caret) {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(Expr::binary(BinaryOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let Some(tok) = self.next() else {
            return Err(self.error_here("unexpected end of input"));
        };
        match tok.kind {
            TokenKind::Number(x) => Ok(Expr::Num(x)),
            TokenKind::LParen => {
                let inner = self.expr()?;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(inner)
            }
            TokenKind::Ident(name) => {
                if let Some(func) = Function::from_name(&name) {
                    self.expect(TokenKind::LParen, &format!("`(` after `{name}`"))?;
                    let arg = self.expr()?;
                    self.expect(TokenKind::RParen, "`)`")?;
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                match name.as_str() {
                    "pi" => Ok(Expr::Const(Constant::Pi)),
                    "e" => Ok(Expr::Const(Constant::E)),
                    "i" => Ok(Expr::Const(Constant::I)),
                    v if v == self.var_name => Ok(Expr::Var(name)),
                    _ => Err(ExprError::UnknownIdentifier {
                        name,
                        offset: tok.offset,
                    }),
                }
            }
            other => Err(ExprError::Syntax {
                offset: tok.offset,
                message: format!("unexpected {other}"),
            }),
        }
    }
}
