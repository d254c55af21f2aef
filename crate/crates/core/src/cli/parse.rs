//! Recursive-descent parser for vertex expressions.
//!
//! ```text
//! element  := ['+'|'-'] term { ('+'|'-') term } | '0'
//! term     := [ rational '*' ] monomial
//! rational := integer [ '/' posinteger ]
//! monomial := 'vac' | gen | gen '(' integer ')' monomial
//!           | '(' monomial '[' integer ']' monomial ')'
//! ```

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::freeva::{evaluate_expr, FreeElement, VertexExpr};
use crate::signature::{Scalar, Signature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown generator `{name}` at offset {offset}")]
    UnknownGenerator { offset: usize, name: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownGenerator { offset, .. } => *offset,
        }
    }
}

/// A linear combination of parsed monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedElement {
    pub terms: Vec<(Scalar, VertexExpr)>,
}

impl ParsedElement {
    pub fn evaluate(&self, sig: &Signature) -> FreeElement {
        let mut out = FreeElement::zero();
        for (c, e) in &self.terms {
            out.add_scaled(&evaluate_expr(sig, e), c);
        }
        out
    }
}

struct Parser<'a> {
    sig: &'a Signature,
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { offset: self.pos, message: message.into() })
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected `{c}`"))
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn digits(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..].bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return self.error("expected digits");
        }
        self.pos += len;
        Ok(self.src[start..self.pos].parse().expect("ascii digits"))
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let neg = match self.peek() {
            Some('-') => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let start = self.pos;
        let v = self.digits()?;
        let v = if neg { -v } else { v };
        i64::try_from(v).map_err(|_| ParseError::Syntax { offset: start, message: "integer out of range".into() })
    }

    fn identifier(&mut self) -> Option<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let mut len = 0;
        for (i, c) in rest.char_indices() {
            let ok = if i == 0 { c.is_alphabetic() || c == '_' } else { c.is_alphanumeric() || c == '_' || c == '\'' };
            if !ok {
                break;
            }
            len = i + c.len_utf8();
        }
        if len == 0 {
            return None;
        }
        self.pos += len;
        Some((start, &rest[..len]))
    }

    fn monomial(&mut self) -> Result<VertexExpr, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let l = self.monomial()?;
                self.expect('[')?;
                let m = self.integer()?;
                self.expect(']')?;
                let r = self.monomial()?;
                self.expect(')')?;
                Ok(VertexExpr::product(l, m, r))
            }
            _ => {
                let Some((start, name)) = self.identifier() else {
                    return self.error("expected a monomial");
                };
                if name == "vac" {
                    return Ok(VertexExpr::Vacuum);
                }
                let g = self
                    .sig
                    .gen(name)
                    .map_err(|_| ParseError::UnknownGenerator { offset: start, name: name.to_string() })?;
                if self.peek() != Some('(') {
                    return Ok(VertexExpr::Generator(g));
                }
                self.pos += 1;
                let n = self.integer()?;
                self.expect(')')?;
                let rest = self.monomial()?;
                Ok(VertexExpr::product(VertexExpr::Generator(g), n, rest))
            }
        }
    }

    /// A term after its sign has been consumed. `None` is a literal zero.
    fn term(&mut self) -> Result<Option<(Scalar, VertexExpr)>, ParseError> {
        if !matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            return Ok(Some((Scalar::one(), self.monomial()?)));
        }
        let num = self.digits()?;
        let mut den = BigInt::one();
        if self.peek() == Some('/') {
            self.pos += 1;
            den = self.digits()?;
            if den.is_zero() {
                return self.error("zero denominator");
            }
        }
        let c = Scalar::new(num, den);
        if self.peek() == Some('*') {
            self.pos += 1;
            return Ok(Some((c, self.monomial()?)));
        }
        if c.is_zero() {
            return Ok(None);
        }
        self.error("expected `*`")
    }

    fn element(&mut self) -> Result<ParsedElement, ParseError> {
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let neg = match self.peek() {
                Some('-') => {
                    self.pos += 1;
                    true
                }
                Some('+') => {
                    self.pos += 1;
                    false
                }
                None if !first => break,
                _ if first => false,
                _ => return self.error("expected `+` or `-`"),
            };
            first = false;
            if let Some((c, e)) = self.term()? {
                terms.push((if neg { -c } else { c }, e));
            }
        }
        Ok(ParsedElement { terms })
    }
}

/// Parse a single monomial.
pub fn parse_expr(sig: &Signature, text: &str) -> Result<VertexExpr, ParseError> {
    let mut p = Parser { sig, src: text, pos: 0 };
    let e = p.monomial()?;
    if !p.at_end() {
        return p.error("unexpected trailing input");
    }
    Ok(e)
}

/// Parse a linear combination of monomials with rational coefficients.
pub fn parse_element(sig: &Signature, text: &str) -> Result<ParsedElement, ParseError> {
    let mut p = Parser { sig, src: text, pos: 0 };
    if p.at_end() {
        return p.error("empty expression");
    }
    p.element()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freeva::{fmt_element, Letter, Word};
    use crate::signature::fixtures::*;
    use crate::signature::{ratio, Gen};
    use proptest::prelude::*;

    #[test]
    fn right_normed_words() {
        let f = ferm();
        let e = parse_expr(&f, "a(-2)a(-1)vac").unwrap();
        let w = Word(vec![Letter::new(Gen(0), -2), Letter::new(Gen(0), -1)]);
        assert_eq!(e, VertexExpr::from_word(&w));
        assert_eq!(parse_expr(&f, " a ( -2 ) a(-1) vac ").unwrap(), e);
    }

    #[test]
    fn products() {
        let s = neg();
        let e = parse_expr(&s, "(a [1] b)").unwrap();
        assert_eq!(e, VertexExpr::product(VertexExpr::Generator(Gen(0)), 1, VertexExpr::Generator(Gen(1))));
        let nested = parse_expr(&s, "((a [0] b) [-1] a(-3)vac)").unwrap();
        assert_eq!(nested.display(&s).to_string(), "(a(0)b [-1] a(-3)vac)");
        assert_eq!(parse_expr(&s, "(a(0)b [-1] a(-3)vac)").unwrap(), nested);
    }

    #[test]
    fn errors_carry_offsets() {
        let f = ferm();
        assert_eq!(parse_expr(&f, "a(-1").unwrap_err().offset(), 4);
        assert!(matches!(parse_expr(&f, "a(-1)").unwrap_err(), ParseError::Syntax { offset: 5, .. }));
        assert!(matches!(
            parse_expr(&f, "a(-1)z(-1)vac").unwrap_err(),
            ParseError::UnknownGenerator { offset: 5, .. }
        ));
        assert!(parse_expr(&f, "(a [1 a)").is_err());
        assert!(parse_element(&f, "").is_err());
        assert!(parse_element(&f, "2 a").is_err());
        assert!(parse_element(&f, "1/0 * vac").is_err());
    }

    #[test]
    fn linear_combinations() {
        let f = ferm();
        let p = parse_element(&f, "-1 * a(-2)a(-1)vac + 3/2 * vac - a").unwrap();
        assert_eq!(p.terms.len(), 3);
        assert_eq!(p.terms[0].0, ratio(-1, 1));
        assert_eq!(p.terms[1].0, ratio(3, 2));
        assert_eq!(p.terms[2].0, ratio(-1, 1));
        assert!(parse_element(&f, "0").unwrap().evaluate(&f).is_zero());
    }

    #[test]
    fn printed_elements_parse_back() {
        let s = neg();
        let x = parse_element(&s, "a(-3)b(-1)vac - 2/3 * b(-2)a(-1)vac + 5 * vac").unwrap().evaluate(&s);
        let printed = fmt_element(&s, &x);
        assert_eq!(parse_element(&s, &printed).unwrap().evaluate(&s), x);
    }

    fn arb_expr() -> impl Strategy<Value = VertexExpr> {
        let leaf = prop_oneof![Just(VertexExpr::Vacuum), (0u16..2).prop_map(|g| VertexExpr::Generator(Gen(g)))];
        leaf.prop_recursive(4, 16, 2, |inner| {
            (inner.clone(), -5i64..5, inner).prop_map(|(l, m, r)| VertexExpr::product(l, m, r))
        })
    }

    proptest! {
        #[test]
        fn display_round_trips(e in arb_expr()) {
            let s = neg();
            let text = e.display(&s).to_string();
            prop_assert_eq!(parse_expr(&s, &text).unwrap(), e);
        }
    }
}
