use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Monomial, Polynomial, Rational, Var};
use crate::error::{Error, Result};

/// Exponents above this are rejected so that untrusted text cannot request
/// enormous powers.
const MAX_EXPONENT: u32 = 1 << 16;

/// Parses `p`, `-p` or `p/q` with decimal integers and `q != 0`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = parse_int(num).ok_or_else(bad)?;
    let den = parse_int(den).ok_or_else(bad)?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s).ok()
}

/// Parses the canonical text form produced by `Display`:
/// `term (('+' | '-') term)*`, where a term is an optional rational
/// coefficient followed by `*`-separated factors `x[i,j]`, `t`, each with an
/// optional `^e`.
pub(crate) fn parse_polynomial(s: &str) -> Result<Polynomial> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
    };
    let out = p.polynomial()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at byte {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", b as char)))
        }
    }

    fn digits(&mut self) -> Result<&str> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits"))
    }

    fn small(&mut self) -> Result<u32> {
        let d = self.digits()?;
        d.parse::<u32>()
            .map_err(|_| Error::Parse(format!("number {d} out of range")))
    }

    fn polynomial(&mut self) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        let mut negative = self.eat(b'-');
        if !negative {
            self.eat(b'+');
        }
        loop {
            let (m, mut c) = self.term()?;
            if negative {
                c = -c;
            }
            out.add_term(m, c);
            if self.eat(b'+') {
                negative = false;
            } else if self.eat(b'-') {
                negative = true;
            } else {
                return Ok(out);
            }
        }
    }

    fn term(&mut self) -> Result<(Monomial, Rational)> {
        self.skip_ws();
        let mut coeff = Rational::one();
        let mut factors = Vec::new();
        if self.peek().is_some_and(|b| b.is_ascii_digit()) {
            let num = BigInt::from_str(self.digits()?).expect("digits");
            let mut c = Rational::from_integer(num);
            if self.eat(b'/') {
                let den = BigInt::from_str(self.digits()?).expect("digits");
                if den.is_zero() {
                    return Err(self.error("zero denominator"));
                }
                c /= Rational::from_integer(den);
            }
            coeff = c;
            if !self.eat(b'*') {
                return Ok((Monomial::one(), coeff));
            }
        }
        loop {
            factors.push(self.factor()?);
            if !self.eat(b'*') {
                break;
            }
        }
        let m = Monomial::from_factors(factors);
        if m.factors().iter().any(|&(_, e)| e > MAX_EXPONENT) {
            return Err(self.error("exponent out of range"));
        }
        Ok((m, coeff))
    }

    fn factor(&mut self) -> Result<(Var, u32)> {
        self.skip_ws();
        let var = match self.peek() {
            Some(b't') => {
                self.pos += 1;
                Var::Deform
            }
            Some(b'x') => {
                self.pos += 1;
                self.expect(b'[')?;
                let i = self.small()?;
                self.expect(b',')?;
                let j = self.small()?;
                self.expect(b']')?;
                if i == 0 || j == 0 || i > u16::MAX as u32 || j > u16::MAX as u32 {
                    return Err(self.error("matrix index out of range"));
                }
                Var::Entry(i as u16, j as u16)
            }
            _ => return Err(self.error("expected variable")),
        };
        let mut e = 1;
        if self.eat(b'^') {
            e = self.small()?;
            if e == 0 || e > MAX_EXPONENT {
                return Err(self.error("exponent out of range"));
            }
        }
        Ok((var, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;

    #[test]
    fn merged_exponents_are_bounded() {
        assert!(parse_polynomial("t^65536*t^65536").is_err());
        assert!(parse_polynomial("t^65536").is_ok());
    }

    #[test]
    fn rationals() {
        assert_eq!(
            parse_rational("-3/6").unwrap(),
            Rational::new((-1).into(), 2.into())
        );
        assert_eq!(parse_rational(" 7 ").unwrap(), rat(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("--1").is_err());
    }

    #[test]
    fn polynomial_text_roundtrip() {
        let s = "-3/2*x[1,3]^2*x[2,4] + x[2,3]*t - 5";
        let p: Polynomial = s.parse().unwrap();
        assert_eq!(p.to_string(), s);
        let q: Polynomial = p.to_string().parse().unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn polynomial_text_errors() {
        for bad in [
            "",
            "x[1]",
            "x[0,2]",
            "y",
            "x[1,2]^0",
            "2*",
            "x[1,2] x[2,3]",
            "1/0*t",
        ] {
            assert!(bad.parse::<Polynomial>().is_err(), "{bad:?} should fail");
        }
        assert!("0".parse::<Polynomial>().unwrap().is_zero());
    }
}
