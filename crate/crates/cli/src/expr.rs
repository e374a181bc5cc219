//! Expression language.
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '.') unary)*        star / pointwise, left-assoc
//! unary   := ('-' | '~') unary | power
//! power   := atom ('^' INT)?
//! atom    := INT ('/' INT)? | 'i' | t | x1..x3 | eps | dt | dx1..dx3
//!          | D0..D3 '(' sum ')' | d '(' sum ')' | '(' sum ')'
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use nckit_core::{ci, CRat, DifferentialForm, Poly, StarContext, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprError {
    Syntax { line: usize, col: usize, msg: String },
    Grading(String),
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprError::Syntax { line, col, msg } => {
                write!(f, "syntax error at line {line}, column {col}: {msg}")
            }
            ExprError::Grading(msg) => write!(f, "grading error: {msg}"),
        }
    }
}

impl std::error::Error for ExprError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(CRat),
    Var(Var),
    /// `dt` (0) or `dx1..dx3`.
    Diff(usize),
    Neg(Box<Expr>),
    Conj(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Star(Box<Expr>, Box<Expr>),
    Dot(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Partial(usize, Box<Expr>),
    ExtD(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ExprError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let chars: Vec<char> = src.chars().collect();
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
        if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let s: String = chars[start..k].iter().collect();
            col += k - start;
            out.push(Token {
                tok: Tok::Int(s.parse().expect("digits")),
                line: l0,
                col: c0,
            });
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_alphanumeric() {
                k += 1;
            }
            let s: String = chars[start..k].iter().collect();
            col += k - start;
            out.push(Token {
                tok: Tok::Ident(s),
                line: l0,
                col: c0,
            });
            continue;
        }
        if "+-*.~^/()".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                line: l0,
                col: c0,
            });
            col += 1;
            k += 1;
            continue;
        }
        return Err(ExprError::Syntax {
            line: l0,
            col: c0,
            msg: format!("unexpected character '{c}'"),
        });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, tok: &Token, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax {
            line: tok.line,
            col: tok.col,
            msg: msg.into(),
        })
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ExprError> {
        if self.is_sym(c) {
            self.bump();
            Ok(())
        } else {
            let t = self.peek().clone();
            self.err(&t, format!("expected '{c}'"))
        }
    }

    fn sum(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.product()?;
        loop {
            if self.is_sym('+') {
                self.bump();
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.is_sym('-') {
                self.bump();
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.is_sym('*') {
                self.bump();
                lhs = Expr::Star(Box::new(lhs), Box::new(self.unary()?));
            } else if self.is_sym('.') {
                self.bump();
                lhs = Expr::Dot(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.is_sym('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.is_sym('~') {
            self.bump();
            return Ok(Expr::Conj(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.is_sym('^') {
            self.bump();
            let t = self.bump();
            let Tok::Int(n) = &t.tok else {
                return self.err(&t, "expected an integer exponent");
            };
            let Ok(n) = u32::try_from(n.clone()) else {
                return self.err(&t, "exponent too large");
            };
            if n > 256 {
                return self.err(&t, "exponent too large");
            }
            if self.is_sym('^') {
                let t = self.peek().clone();
                return self.err(&t, "chained exponents need parentheses");
            }
            return Ok(Expr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn call_arg(&mut self) -> Result<Expr, ExprError> {
        self.expect_sym('(')?;
        let e = self.sum()?;
        self.expect_sym(')')?;
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let t = self.bump();
        match &t.tok {
            Tok::Int(n) => {
                if self.is_sym('/') {
                    self.bump();
                    let d = self.bump();
                    let Tok::Int(den) = &d.tok else {
                        return self.err(&d, "expected a denominator");
                    };
                    if den.is_zero() {
                        return self.err(&d, "zero denominator");
                    }
                    let r = BigRational::new(n.clone(), den.clone());
                    return Ok(Expr::Num(Complex::new(r, BigRational::zero())));
                }
                Ok(Expr::Num(Complex::new(
                    BigRational::from_integer(n.clone()),
                    BigRational::zero(),
                )))
            }
            Tok::Ident(s) => match s.as_str() {
                "i" => Ok(Expr::Num(ci(1, 1))),
                "t" => Ok(Expr::Var(Var::T)),
                "x1" => Ok(Expr::Var(Var::X1)),
                "x2" => Ok(Expr::Var(Var::X2)),
                "x3" => Ok(Expr::Var(Var::X3)),
                "eps" => Ok(Expr::Var(Var::Eps)),
                "dt" => Ok(Expr::Diff(0)),
                "dx1" => Ok(Expr::Diff(1)),
                "dx2" => Ok(Expr::Diff(2)),
                "dx3" => Ok(Expr::Diff(3)),
                "D0" | "D1" | "D2" | "D3" => {
                    let mu = (s.as_bytes()[1] - b'0') as usize;
                    Ok(Expr::Partial(mu, Box::new(self.call_arg()?)))
                }
                "d" => Ok(Expr::ExtD(Box::new(self.call_arg()?))),
                _ => self.err(&t, format!("unknown symbol '{s}'")),
            },
            Tok::Sym('(') => {
                let e = self.sum()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Sym(c) => self.err(&t, format!("unexpected '{c}'")),
            Tok::End => self.err(&t, "expected an operand"),
        }
    }
}

/// Parse an expression.
pub fn parse(src: &str) -> Result<Expr, ExprError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    let e = p.sum()?;
    let t = p.peek().clone();
    if t.tok != Tok::End {
        return p.err(&t, "unexpected trailing input");
    }
    Ok(e)
}

fn function_of(v: &DifferentialForm, what: &str) -> Result<Poly, ExprError> {
    v.as_function()
        .ok_or_else(|| ExprError::Grading(format!("{what} needs a function, got the form {v}")))
}

/// Evaluate to a normal-ordered form (functions are 0-forms).
pub fn eval(e: &Expr, ctx: &StarContext) -> Result<DifferentialForm, ExprError> {
    Ok(match e {
        Expr::Num(c) => DifferentialForm::function(Poly::constant(c.clone())),
        Expr::Var(v) => DifferentialForm::function(Poly::var(*v)),
        Expr::Diff(mu) => DifferentialForm::basis(nckit_core::Wedge::d(*mu)),
        Expr::Neg(a) => -&eval(a, ctx)?,
        Expr::Conj(a) => ctx.conj_form(&eval(a, ctx)?),
        Expr::Add(a, b) => &eval(a, ctx)? + &eval(b, ctx)?,
        Expr::Sub(a, b) => &eval(a, ctx)? - &eval(b, ctx)?,
        Expr::Star(a, b) => {
            let (x, y) = (eval(a, ctx)?, eval(b, ctx)?);
            match (x.as_function(), y.as_function()) {
                (Some(f), Some(g)) => DifferentialForm::function(ctx.star(&f, &g)),
                _ => {
                    let p = ctx.form_mul(&x, &y);
                    match ctx.eps_cutoff() {
                        Some(_) => p.map_coeffs(|c| ctx.reduce(c.clone())),
                        None => p,
                    }
                }
            }
        }
        Expr::Dot(a, b) => {
            let f = function_of(&eval(a, ctx)?, "pointwise product")?;
            let g = function_of(&eval(b, ctx)?, "pointwise product")?;
            DifferentialForm::function(ctx.reduce(f.mul(&g)))
        }
        Expr::Pow(a, n) => {
            let f = function_of(&eval(a, ctx)?, "power")?;
            let mut acc = Poly::one();
            for _ in 0..*n {
                acc = ctx.reduce(acc.mul(&f));
            }
            DifferentialForm::function(acc)
        }
        Expr::Partial(mu, a) => {
            let f = function_of(&eval(a, ctx)?, "partial derivative")?;
            DifferentialForm::function(f.partial(*mu))
        }
        Expr::ExtD(a) => ctx.d(&eval(a, ctx)?),
    })
}

/// Canonical rendering of a value: the polynomial form for functions.
pub fn render(v: &DifferentialForm) -> String {
    match v.as_function() {
        Some(p) => p.to_string(),
        None => v.to_string(),
    }
}

/// Parse, evaluate and render.
pub fn reduce(src: &str, ctx: &StarContext) -> Result<String, ExprError> {
    Ok(render(&eval(&parse(src)?, ctx)?))
}

fn rational_text(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Fully parenthesised source text for an AST.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(c) => {
                let zero = BigRational::zero();
                let neg = |r: &BigRational| r < &zero;
                match (c.re.is_zero(), c.im.is_zero()) {
                    (_, true) if neg(&c.re) => write!(f, "(-{})", rational_text(&-c.re.clone())),
                    (_, true) => write!(f, "{}", rational_text(&c.re)),
                    (true, false) if neg(&c.im) => write!(f, "(-{}*i)", rational_text(&-c.im.clone())),
                    (true, false) => write!(f, "({}*i)", rational_text(&c.im)),
                    (false, false) => {
                        let re = Expr::Num(Complex::new(c.re.clone(), zero.clone()));
                        let im = Expr::Num(Complex::new(zero.clone(), c.im.clone()));
                        write!(f, "({re} + {im})")
                    }
                }
            }
            Expr::Var(v) => write!(f, "{}", v.name()),
            Expr::Diff(0) => write!(f, "dt"),
            Expr::Diff(m) => write!(f, "dx{m}"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Conj(a) => write!(f, "~{a}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Star(a, b) => write!(f, "({a}*{b})"),
            Expr::Dot(a, b) => write!(f, "({a}.{b})"),
            Expr::Pow(a, n) => write!(f, "{a}^{n}"),
            Expr::Partial(m, a) => write!(f, "D{m}({a})"),
            Expr::ExtD(a) => write!(f, "d({a})"),
        }
    }
}

/// Source text for a polynomial, wrapped in parentheses for substitution.
pub fn quote(p: &Poly) -> String {
    format!("({p})")
}

#[cfg(test)]
mod tests {
    use super::*;
    use nckit_core::ThetaProfile;

    fn ctx() -> StarContext {
        StarContext::new(ThetaProfile::new(Poly::t(), Poly::zero(), Poly::zero()).unwrap())
    }

    #[test]
    fn reduce_examples() {
        let c = ctx();
        assert_eq!(reduce("x1*x2 - x2*x1", &c).unwrap(), "i*t");
        assert_eq!(reduce("~ (x1*x2)", &c).unwrap(), "x1.x2 - 1/2*i*t");
        assert_eq!(reduce("d(x1)", &c).unwrap(), "dx1");
        assert_eq!(reduce("D0(x1*x2)", &c).unwrap(), "1/2*i");
        assert_eq!(reduce("dx1*x2", &c).unwrap(), "1/2*i*dt + x2*dx1");
        assert_eq!(reduce("-x1^2 + 2/4", &c).unwrap(), "-x1^2 + 1/2");
        assert_eq!(reduce("d(d(x1*x2.t))", &c).unwrap(), "0");
    }

    #[test]
    fn parse_shapes() {
        let e = parse("x1*x2 - x2*x1").unwrap();
        assert!(matches!(e, Expr::Sub(..)));
        let e = parse("D0(x1*x2)").unwrap();
        assert!(matches!(e, Expr::Partial(0, ref b) if matches!(**b, Expr::Star(..))));
        // equal precedence, left associative
        let e = parse("x1.x2*x3").unwrap();
        assert!(matches!(e, Expr::Star(ref a, _) if matches!(**a, Expr::Dot(..))));
        let e = parse("-x1^2").unwrap();
        assert!(matches!(e, Expr::Neg(ref a) if matches!(**a, Expr::Pow(..))));
    }

    #[test]
    fn syntax_errors() {
        assert_eq!(
            parse("x1*").unwrap_err(),
            ExprError::Syntax { line: 1, col: 4, msg: "expected an operand".into() }
        );
        assert!(matches!(parse("x1 +\n  y").unwrap_err(), ExprError::Syntax { line: 2, col: 3, .. }));
        assert!(matches!(parse("(x1").unwrap_err(), ExprError::Syntax { col: 4, .. }));
        assert!(matches!(parse("x1 x2").unwrap_err(), ExprError::Syntax { col: 4, .. }));
        assert!(matches!(parse("1/0").unwrap_err(), ExprError::Syntax { col: 3, .. }));
        assert!(matches!(parse("x1 $").unwrap_err(), ExprError::Syntax { col: 4, .. }));
    }

    #[test]
    fn grading_errors() {
        let c = ctx();
        assert!(matches!(reduce("dx1.x2", &c), Err(ExprError::Grading(_))));
        assert!(matches!(reduce("D1(dx1)", &c), Err(ExprError::Grading(_))));
        assert!(matches!(reduce("dt^2", &c), Err(ExprError::Grading(_))));
    }

    #[test]
    fn ast_display_reparses() {
        let c = ctx();
        for src in ["x1*x2 - x2*x1", "~(x1*x2).t + D3(x3^3)", "-1/2*i*d(x1.x2) + (2 - 3*i)*dx3"] {
            let e = parse(src).unwrap();
            let again = parse(&e.to_string()).unwrap();
            assert_eq!(eval(&e, &c).unwrap(), eval(&again, &c).unwrap());
        }
    }
}
