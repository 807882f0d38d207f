//! Parser for rational-function expressions in `z`:
//! `+ - * / ^`, parentheses, integer literals, implicit multiplication
//! (`2z`, `z(z-1)`), and signed integer exponents (`z^-2`).

use num_bigint::BigInt;

use super::poly::{Poly, RatFunc};
use crate::error::{Error, Result};

use crate::linalg::Q;

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    /// Column of `chars[0]` in the source line (1-based).
    offset: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn column(&self) -> usize {
        self.offset + self.pos
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.column(), msg)
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some('/') => {
                    self.pos += 1;
                    let col = self.column();
                    let d = self.unary()?;
                    acc = acc.div(&d).map_err(|_| Error::parse(self.line, col, "division by zero"))?;
                }
                Some(c) if c == '(' || c == 'z' || c.is_ascii_digit() => acc = &acc * &self.power()?,
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
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
        let col = self.column();
        let digits = self.digits().ok_or_else(|| self.err("expected integer exponent"))?;
        let e: i64 = digits.parse().map_err(|_| Error::parse(self.line, col, "exponent too large"))?;
        base.pow(if neg { -e } else { e }).map_err(|_| Error::parse(self.line, col, "negative power of zero"))
    }

    fn digits(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some('z') => {
                self.pos += 1;
                Ok(RatFunc::from_poly(Poly::z()))
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits().expect("digit");
                let n: BigInt = d.parse().expect("digits");
                Ok(RatFunc::constant(Q::from_integer(n)))
            }
            Some(c) => Err(self.err(format!("unexpected '{c}'"))),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

/// Parses `text`, which starts at 1-based `column` of source line `line`.
pub fn parse_expr_at(text: &str, line: usize, column: usize) -> Result<RatFunc> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, line, offset: column };
    let e = p.expr()?;
    if let Some(c) = p.peek() {
        return Err(p.err(format!("unexpected '{c}'")));
    }
    Ok(e)
}

pub fn parse_expr(text: &str) -> Result<RatFunc> {
    parse_expr_at(text, 1, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dmod::poly::rat;
    use crate::linalg::q;

    #[test]
    fn parses_rational_functions() {
        let f = parse_expr("2/z^3 - 4/z^2").unwrap();
        assert_eq!(f.to_string(), "(-4*z + 2) / (z^3)");
        assert_eq!(parse_expr("z^-1").unwrap(), parse_expr("1/z").unwrap());
        assert_eq!(parse_expr("2z(z-1)").unwrap().to_string(), "2*z^2 - 2*z");
        assert_eq!(parse_expr("-1/2").unwrap(), RatFunc::constant(rat(-1, 2)));
        assert_eq!(parse_expr(" ( z + 1 ) ^ 2 ").unwrap().num().coeffs(), &[q(1), q(2), q(1)]);
    }

    #[test]
    fn reports_positions() {
        assert!(matches!(parse_expr("z + * 2"), Err(Error::Parse { column: 5, .. })));
        assert!(matches!(parse_expr_at("(z", 3, 7), Err(Error::Parse { line: 3, column: 9, .. })));
        assert!(matches!(parse_expr("1/(z-z)"), Err(Error::Parse { column: 3, .. })));
        assert!(matches!(parse_expr("z^x"), Err(Error::Parse { column: 3, .. })));
    }
}
