//! Text grammar for polynomials:
//!
//! ```text
//! poly    := ['-'] term (('+' | '-') term)*
//! term    := coeff ('*' var_pow)* | var_pow ('*' var_pow)*
//! var_pow := var ('^' uint)?
//! var     := 'X' index | 'T' index | 'C' index '_' index
//! coeff   := int | int '/' uint | '{' uint (',' uint)* '}'
//! ```
//!
//! Whitespace is ignored. The braced form denotes an extension-field element
//! by its coefficient vector and is what the printer emits for such values.

use num_bigint::BigInt;

use super::poly::{BlockPolynomial, Monomial, Var, VarDecl};
use super::scalar::{Ring, Scalar};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Ring,
    decl: &'a VarDecl,
}

pub fn parse_poly(text: &str, decl: &VarDecl, ring: &Ring) -> Result<BlockPolynomial> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        ring,
        decl,
    };
    let poly = parser.poly()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(poly)
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

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

    fn poly(&mut self) -> Result<BlockPolynomial> {
        let negate_first = self.eat(b'-');
        let first = self.term()?;
        let mut acc = if negate_first { -first } else { first };
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<BlockPolynomial> {
        let coeff = match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'{' => {
                let c = self.coeff()?;
                if !self.eat(b'*') {
                    return Ok(BlockPolynomial::constant(self.ring, c));
                }
                c
            }
            Some(b'X' | b'T' | b'C') => self.ring.one(),
            Some(_) => return Err(self.error("expected a coefficient or a variable")),
            None => return Err(self.error("unexpected end of input")),
        };
        let mut powers = vec![self.var_pow()?];
        while self.eat(b'*') {
            powers.push(self.var_pow()?);
        }
        Ok(BlockPolynomial::term(
            self.ring,
            coeff,
            Monomial::from_powers(powers),
        ))
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an unsigned integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digit string parses"))
    }

    fn small_uint(&mut self) -> Result<u32> {
        let start = self.pos;
        let v = self.uint()?;
        u32::try_from(v).map_err(|_| Error::Syntax {
            position: start,
            message: "integer too large".into(),
        })
    }

    fn coeff(&mut self) -> Result<Scalar> {
        if self.eat(b'{') {
            let start = self.pos;
            let mut digits = vec![self.small_uint()?];
            while self.eat(b',') {
                digits.push(self.small_uint()?);
            }
            if !self.eat(b'}') {
                return Err(self.error("expected '}'"));
            }
            let field = self.ring.field().ok_or_else(|| Error::Syntax {
                position: start,
                message: "braced coefficient outside a finite field".into(),
            })?;
            let v = field.from_coeffs(&digits).map_err(|e| Error::Syntax {
                position: start,
                message: e.to_string(),
            })?;
            return Ok(Scalar::Finite(v));
        }
        let start = self.pos;
        let num = self.uint()?;
        let den = if self.eat(b'/') {
            self.uint()?
        } else {
            BigInt::from(1)
        };
        self.ring
            .from_fraction(&num, &den)
            .map_err(|_| Error::Syntax {
                position: start,
                message: "zero denominator".into(),
            })
    }

    fn var_pow(&mut self) -> Result<(Var, u32)> {
        self.skip_ws();
        let var = match self.src.get(self.pos) {
            Some(b'X') => {
                self.pos += 1;
                Var::X(self.index()?)
            }
            Some(b'T') => {
                self.pos += 1;
                Var::T(self.index()?)
            }
            Some(b'C') => {
                self.pos += 1;
                let i = self.index()?;
                if self.src.get(self.pos) != Some(&b'_') {
                    return Err(self.error("expected '_' in center variable"));
                }
                self.pos += 1;
                Var::C(i, self.index()?)
            }
            _ => return Err(self.error("expected a variable")),
        };
        if !self.decl.declares(var) {
            return Err(Error::UndeclaredVariable(var.to_string()));
        }
        let exp = if self.eat(b'^') {
            self.small_uint()?
        } else {
            1
        };
        Ok((var, exp))
    }

    /// Variable indices follow the letter directly, without whitespace.
    fn index(&mut self) -> Result<u32> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a variable index"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::Syntax {
                position: start,
                message: "index too large".into(),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::poly::Block;
    use crate::polycore::poly::Degree;

    fn decl() -> VarDecl {
        VarDecl::new(2, 2, 2)
    }

    #[test]
    fn three_terms() {
        let p = parse_poly("2*X1^2*T0 - T2 + 1", &decl(), &Ring::Rational).unwrap();
        assert_eq!(p.num_terms(), 3);
        assert_eq!(p.block_degree(Block::X), Degree::Finite(2));
        assert_eq!(p.to_string(), "2*X1^2*T0 - T2 + 1");
    }

    #[test]
    fn face_sum_relation() {
        let p = parse_poly("T0 + T1 - 1", &decl(), &Ring::Rational).unwrap();
        let t0 = BlockPolynomial::var(&Ring::Rational, Var::T(0));
        let t1 = BlockPolynomial::var(&Ring::Rational, Var::T(1));
        assert_eq!(p, t0 + t1 - BlockPolynomial::one(&Ring::Rational));
    }

    #[test]
    fn fraction_reduces_in_f5() {
        let r = Ring::prime_field(5).unwrap();
        let p = parse_poly("3/2*X1", &decl(), &r).unwrap();
        assert_eq!(p.to_string(), "4*X1");
    }

    #[test]
    fn center_variables() {
        let p = parse_poly("1 - C2_0 - C2_1", &decl(), &Ring::Rational).unwrap();
        assert_eq!(p.to_string(), "-C2_0 - C2_1 + 1");
        assert!(matches!(
            parse_poly("C2_2", &decl(), &Ring::Rational),
            Err(Error::UndeclaredVariable(v)) if v == "C2_2"
        ));
    }

    #[test]
    fn errors_carry_position() {
        assert!(matches!(
            parse_poly("X1 + * T0", &decl(), &Ring::Rational),
            Err(Error::Syntax { position: 5, .. })
        ));
        assert!(matches!(
            parse_poly("X3", &decl(), &Ring::Rational),
            Err(Error::UndeclaredVariable(v)) if v == "X3"
        ));
        assert!(matches!(
            parse_poly("", &decl(), &Ring::Rational),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_poly("1/0", &decl(), &Ring::Rational),
            Err(Error::Syntax { .. })
        ));
    }
}
