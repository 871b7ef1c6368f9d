//! Text parser for bivariate polynomial expressions.
//!
//! Grammar:
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := ('-')? factor ('*' factor)*
//! factor   := base ('^' uint)?
//! base     := rational | 'u' | 's' | '(' expr ')'
//! rational := int ('/' uint)?
//! ```
//! Whitespace is insignificant. The canonical printer is
//! [`BiPoly`]'s `Display` implementation, and `parse(print(x)) == x`.

use num_bigint::BigInt;

use crate::bipoly::BiPoly;
use crate::error::ExactError;
use crate::scalar::ExactScalar;

/// Parses an expression in `u` and `s` into an expanded canonical [`BiPoly`].
pub fn parse_poly_expr(text: &str) -> Result<BiPoly, ExactError> {
    let mut p = Parser { bytes: text.as_bytes(), pos: 0 };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> ExactError {
        ExactError::SyntaxError { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<BiPoly, ExactError> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BiPoly, ExactError> {
        self.skip_ws();
        let negate = self.eat(b'-');
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.eat(b'*') {
                let f = self.factor()?;
                acc = &acc * &f;
            } else {
                break;
            }
        }
        if negate {
            acc = -&acc;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<BiPoly, ExactError> {
        let base = self.base()?;
        self.skip_ws();
        if self.eat(b'^') {
            self.skip_ws();
            let e = self.uint()?;
            let e: u32 = e
                .try_into()
                .map_err(|_| self.err("exponent too large"))?;
            let mut acc = BiPoly::one();
            for _ in 0..e {
                acc = &acc * &base;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<BiPoly, ExactError> {
        self.skip_ws();
        match self.peek() {
            Some(b'u') => {
                self.pos += 1;
                Ok(BiPoly::var_u())
            }
            Some(b's') => {
                self.pos += 1;
                Ok(BiPoly::var_s())
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(b) if b.is_ascii_digit() || b == b'-' => {
                let r = self.rational()?;
                Ok(BiPoly::constant(r))
            }
            _ => Err(self.err("expected a rational, 'u', 's' or '('")),
        }
    }

    fn rational(&mut self) -> Result<ExactScalar, ExactError> {
        let neg = self.eat(b'-');
        let mut num = self.digits()?;
        if neg {
            num = -num;
        }
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let den = self.digits()?;
            return ExactScalar::from_parts(num, den).map_err(|_| ExactError::SyntaxError {
                offset: self.pos,
                message: "zero denominator in rational literal".to_string(),
            });
        }
        Ok(ExactScalar::from_bigint(num))
    }

    fn uint(&mut self) -> Result<u64, ExactError> {
        let start = self.pos;
        let big = self.digits()?;
        u64::try_from(big).map_err(|_| ExactError::SyntaxError {
            offset: start,
            message: "integer out of range".to_string(),
        })
    }

    fn digits(&mut self) -> Result<BigInt, ExactError> {
        let start = self.pos;
        while self.peek().map_or(false, |b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(ExactError::SyntaxError {
                offset: start,
                message: "expected digits".to_string(),
            });
        }
        let mut acc = BigInt::from(0u32);
        let ten = BigInt::from(10);
        for &b in &self.bytes[start..self.pos] {
            acc = &acc * &ten + BigInt::from((b - b'0') as u32);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sc(n: i64, d: i64) -> ExactScalar {
        ExactScalar::ratio(n, d)
    }

    #[test]
    fn expansion_examples() {
        // (s-u)*(s+u+2) = s^2 + 2s - u^2 - 2u
        let p = parse_poly_expr("(s-u)*(s+u+2)").unwrap();
        let expect = BiPoly::from_terms([
            ((0, 2), sc(1, 1)),
            ((0, 1), sc(2, 1)),
            ((2, 0), sc(-1, 1)),
            ((1, 0), sc(-2, 1)),
        ]);
        assert_eq!(p, expect);

        // 3/2*s + u^2
        let p = parse_poly_expr("3/2*s + u^2").unwrap();
        let expect = BiPoly::from_terms([((0, 1), sc(3, 2)), ((2, 0), sc(1, 1))]);
        assert_eq!(p, expect);

        // (s+1)*(s+1/2) = s^2 + 3/2 s + 1/2
        let p = parse_poly_expr("(s+1)*(s+1/2)").unwrap();
        let expect = BiPoly::from_terms([
            ((0, 2), sc(1, 1)),
            ((0, 1), sc(3, 2)),
            ((0, 0), sc(1, 2)),
        ]);
        assert_eq!(p, expect);
    }

    #[test]
    fn syntax_error_carries_offset() {
        let err = parse_poly_expr("(s+1").unwrap_err();
        match err {
            ExactError::SyntaxError { offset, .. } => assert_eq!(offset, 4),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(parse_poly_expr("s + * u").is_err());
        assert!(parse_poly_expr("1/0").is_err());
        assert!(parse_poly_expr("x + 1").is_err());
    }

    #[test]
    fn printer_round_trip() {
        for text in [
            "(s-u)*(s+u+2)",
            "3/2*s + u^2",
            "(s+1)*(s+1/2)",
            "0",
            "-7",
            "u*s - 1/3",
            "(u+s+1)*(s-u-2) - 1/2*(u+s+3)*(s-u)",
        ] {
            let p = parse_poly_expr(text).unwrap();
            let q = parse_poly_expr(&p.to_string()).unwrap();
            assert_eq!(p, q, "round trip failed for {text}");
        }
    }

    #[test]
    fn big_literals_do_not_overflow() {
        let p = parse_poly_expr("123456789012345678901234567890*u").unwrap();
        assert_eq!(
            p.coeff((1, 0)).to_string(),
            "123456789012345678901234567890"
        );
    }
}
