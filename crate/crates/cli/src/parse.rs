//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := '-'? factor
//! factor  := base ('^' nat)?
//! base    := '(' expr ')' | 'qb(' expr ';' nat ')' | 'qf(' expr ';' nat ')'
//!          | 'z' | 'q' | literal
//! literal := int | int '/' int, optionally followed by 'i'; or a bare 'i'
//! ```
//!
//! Evaluation keeps a factored form for as long as the expression stays a
//! product of constants, `z` and `qb(...)` blocks, so that chain data is
//! known without root extraction.

use num_bigint::BigInt;
use qmason::theorems::q_fermat_power_operand;
use qmason::qcore::q_pow_factor;
use qmason::{DensePoly, Error, FactoredPoly, GaussianRational, Operand, QContext, Rational, Result};

type Gr = GaussianRational;

/// Largest exponent accepted after `^` or `;`.
pub const MAX_EXPONENT: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyExpr {
    Const(Gr),
    Z,
    Q,
    Neg(Box<PolyExpr>),
    Add(Box<PolyExpr>, Box<PolyExpr>),
    Sub(Box<PolyExpr>, Box<PolyExpr>),
    Mul(Box<PolyExpr>, Box<PolyExpr>),
    Pow(Box<PolyExpr>, u32),
    /// `qb(a; n) = [z - a]_q^n`.
    QBlock(Box<PolyExpr>, u32),
    /// `qf(P; n) = [P]_q^n`.
    QFermat(Box<PolyExpr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
    End,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    tok: Tok,
    tok_pos: usize,
}

fn syntax(pos: usize, message: impl Into<String>) -> Error {
    Error::Syntax { pos, message: message.into() }
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Result<Self> {
        let mut p = Parser { src: text.as_bytes(), pos: 0, tok: Tok::End, tok_pos: 0 };
        p.advance()?;
        Ok(p)
    }

    fn advance(&mut self) -> Result<()> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.tok_pos = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            self.tok = Tok::End;
            return Ok(());
        };
        if c.is_ascii_digit() {
            let start = self.pos;
            while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                self.pos += 1;
            }
            let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
            self.tok = Tok::Num(digits.parse().expect("digits"));
        } else if c.is_ascii_alphabetic() {
            let start = self.pos;
            while self.src.get(self.pos).is_some_and(u8::is_ascii_alphanumeric) {
                self.pos += 1;
            }
            self.tok = Tok::Ident(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned());
        } else if b"+-*^/();".contains(&c) {
            self.pos += 1;
            self.tok = Tok::Sym(c as char);
        } else {
            let ch = String::from_utf8_lossy(&self.src[self.pos..]).chars().next().unwrap_or('?');
            return Err(syntax(self.pos, format!("unexpected character {ch:?}")));
        }
        Ok(())
    }

    fn eat(&mut self, c: char) -> Result<bool> {
        if self.tok == Tok::Sym(c) {
            self.advance()?;
            Ok(true)
        } else {
            Ok(false)
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if !self.eat(c)? {
            return Err(syntax(self.tok_pos, format!("expected '{c}'")));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<PolyExpr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+')? {
                lhs = PolyExpr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-')? {
                lhs = PolyExpr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<PolyExpr> {
        let mut lhs = self.unary()?;
        while self.eat('*')? {
            lhs = PolyExpr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<PolyExpr> {
        if self.eat('-')? {
            return Ok(PolyExpr::Neg(Box::new(self.factor()?)));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<PolyExpr> {
        let base = self.base()?;
        if self.eat('^')? {
            return Ok(PolyExpr::Pow(Box::new(base), self.nat()?));
        }
        Ok(base)
    }

    fn nat(&mut self) -> Result<u32> {
        let pos = self.tok_pos;
        let Tok::Num(n) = &self.tok else {
            return Err(syntax(pos, "expected a natural number"));
        };
        let n = u32::try_from(n).ok().filter(|&n| n <= MAX_EXPONENT);
        let n = n.ok_or_else(|| syntax(pos, format!("exponent exceeds {MAX_EXPONENT}")))?;
        self.advance()?;
        Ok(n)
    }

    fn base(&mut self) -> Result<PolyExpr> {
        let pos = self.tok_pos;
        match self.tok.clone() {
            Tok::Sym('(') => {
                self.advance()?;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Num(num) => {
                self.advance()?;
                let mut value = Rational::from_integer(num);
                if self.tok == Tok::Sym('/') {
                    self.advance()?;
                    let den_pos = self.tok_pos;
                    let Tok::Num(den) = self.tok.clone() else {
                        return Err(syntax(den_pos, "expected a denominator"));
                    };
                    if den == BigInt::from(0) {
                        return Err(syntax(den_pos, "zero denominator"));
                    }
                    self.advance()?;
                    value /= Rational::from_integer(den);
                }
                // a trailing `i` must touch the number
                if self.tok == Tok::Ident("i".into()) && self.tok_pos == self.prev_end() {
                    self.advance()?;
                    return Ok(PolyExpr::Const(Gr::new(Rational::from_integer(0.into()), value)));
                }
                Ok(PolyExpr::Const(Gr::real(value)))
            }
            Tok::Ident(name) => {
                self.advance()?;
                match name.as_str() {
                    "z" => Ok(PolyExpr::Z),
                    "q" => Ok(PolyExpr::Q),
                    "i" => Ok(PolyExpr::Const(Gr::i())),
                    "qb" | "qf" => {
                        self.expect('(')?;
                        let arg = self.expr()?;
                        self.expect(';')?;
                        let n = self.nat()?;
                        self.expect(')')?;
                        Ok(if name == "qb" {
                            PolyExpr::QBlock(Box::new(arg), n)
                        } else {
                            PolyExpr::QFermat(Box::new(arg), n)
                        })
                    }
                    _ => Err(syntax(pos, format!("unknown name {name:?}"))),
                }
            }
            Tok::Sym(c) => Err(syntax(pos, format!("unexpected '{c}'"))),
            Tok::End => Err(syntax(pos, "unexpected end of input")),
        }
    }

    /// End offset of the token just consumed, for adjacency checks.
    fn prev_end(&self) -> usize {
        let mut end = self.tok_pos;
        while end > 0 && self.src[end - 1].is_ascii_whitespace() {
            end -= 1;
        }
        end
    }
}

pub fn parse_expr(text: &str) -> Result<PolyExpr> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return Err(syntax(p.tok_pos, "unexpected trailing input"));
    }
    Ok(e)
}

fn from_poly(p: DensePoly) -> Operand {
    match p.degree() {
        Some(0) => Operand::Factored(FactoredPoly::constant(p.coeff(0)).expect("nonzero")),
        _ => Operand::Dense(p),
    }
}

fn mul(a: Operand, b: Operand) -> Operand {
    match (a, b) {
        (Operand::Factored(f), Operand::Factored(g)) => Operand::Factored(&f * &g),
        (a, b) => from_poly(&a.dense() * &b.dense()),
    }
}

fn need_q(ctx: Option<&QContext>) -> Result<&QContext> {
    ctx.ok_or_else(|| Error::InvalidArgument("the expression uses q; pass --q".into()))
}

impl PolyExpr {
    /// Evaluates under the bound value of `q`, if any.
    pub fn eval(&self, ctx: Option<&QContext>) -> Result<Operand> {
        Ok(match self {
            PolyExpr::Const(c) => from_poly(DensePoly::constant(c.clone())),
            PolyExpr::Z => Operand::Factored(FactoredPoly::monic_from_roots(vec![Gr::zero()])),
            PolyExpr::Q => from_poly(DensePoly::constant(need_q(ctx)?.q().clone())),
            PolyExpr::Neg(e) => match e.eval(ctx)? {
                Operand::Factored(f) => Operand::Factored(-&f),
                Operand::Dense(p) => Operand::Dense(-p),
            },
            PolyExpr::Add(a, b) => from_poly(&a.eval(ctx)?.dense() + &b.eval(ctx)?.dense()),
            PolyExpr::Sub(a, b) => from_poly(&a.eval(ctx)?.dense() - &b.eval(ctx)?.dense()),
            PolyExpr::Mul(a, b) => mul(a.eval(ctx)?, b.eval(ctx)?),
            PolyExpr::Pow(e, n) => {
                let base = e.eval(ctx)?;
                match &base {
                    Operand::Factored(f) => {
                        Operand::Factored((0..*n).fold(FactoredPoly::one(), |acc, _| &acc * f))
                    }
                    Operand::Dense(p) => from_poly(p.pow(*n)),
                }
            }
            PolyExpr::QBlock(a, n) => {
                let ctx = need_q(ctx)?;
                let a = a.eval(Some(ctx))?.dense();
                if !a.is_constant() {
                    return Err(Error::InvalidArgument(format!("qb needs a constant first argument, got {a}")));
                }
                Operand::Factored(q_pow_factor(&a.coeff(0), *n, ctx))
            }
            PolyExpr::QFermat(p, n) => {
                let ctx = need_q(ctx)?;
                if *n == 0 {
                    return Err(Error::InvalidArgument("qf needs n >= 1".into()));
                }
                match p.eval(Some(ctx))? {
                    Operand::Dense(d) if d.is_zero() => Operand::Dense(d),
                    op => q_fermat_power_operand(&op, *n, ctx)?,
                }
            }
        })
    }
}

/// Parses and evaluates `text`; products of known factors stay factored.
pub fn parse_poly(text: &str, ctx: Option<&QContext>) -> Result<Operand> {
    parse_expr(text)?.eval(ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> Gr {
        s.parse().unwrap()
    }

    fn two() -> QContext {
        QContext::new(g("2")).unwrap()
    }

    fn dense(text: &str) -> DensePoly {
        parse_poly(text, Some(&two())).unwrap().dense()
    }

    #[test]
    fn examples() {
        let op = parse_poly("qb(1;2)", Some(&two())).unwrap();
        assert_eq!(op.factored().unwrap().roots(), &[g("1"), g("2")]);
        assert_eq!(dense("(z-1)*(z+1)"), DensePoly::from_ints(&[-1, 0, 1]));
        assert_eq!(dense("qf(z-1;2)"), DensePoly::from_ints(&[1, -3, 2]));
    }

    #[test]
    fn precedence_and_literals() {
        assert_eq!(dense("2*z^2 - 3*z + 1"), DensePoly::from_ints(&[1, -3, 2]));
        assert_eq!(dense("-z^2"), DensePoly::from_ints(&[0, 0, -1]));
        assert_eq!(dense("(1+2i)*z - i"), DensePoly::new(vec![g("-i"), g("1+2i")]));
        assert_eq!(dense("1/2*z"), DensePoly::new(vec![g("0"), g("1/2")]));
        assert_eq!(dense("q^3*z"), DensePoly::from_ints(&[0, 8]));
        assert_eq!(dense("2 - - 3"), DensePoly::from_ints(&[5]));
        assert_eq!(dense("0"), DensePoly::zero());
    }

    #[test]
    fn factored_tracking() {
        let op = parse_poly("-6*z*qb(-1;2)^2", Some(&two())).unwrap();
        let f = op.factored().expect("factored");
        assert_eq!(f.lead(), &g("-6"));
        assert_eq!(f.degree(), 5);
        assert!(parse_poly("z + 1", None).unwrap().factored().is_none());
    }

    #[test]
    fn errors() {
        let err = |t: &str| parse_poly(t, Some(&two())).unwrap_err();
        assert!(matches!(err("z +"), Error::Syntax { pos: 3, .. }));
        assert!(matches!(err("2z"), Error::Syntax { pos: 1, .. }));
        assert!(matches!(err("(z"), Error::Syntax { pos: 2, .. }));
        assert!(matches!(err("1/0"), Error::Syntax { .. }));
        assert!(matches!(err("z^-1"), Error::Syntax { .. }));
        assert!(matches!(err("w"), Error::Syntax { pos: 0, .. }));
        assert!(matches!(err("2 i"), Error::Syntax { .. }));
        assert!(matches!(err("qb(z;2)"), Error::InvalidArgument(_)));
        assert!(parse_poly("q*z", None).is_err());
    }
}
