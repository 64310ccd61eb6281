//! Reader for polynomial expressions in `q, z1..zn`, e.g. `-(1 - z1)*(z2*q - 1)^2 + 3*q^2*z3`.
//!
//! Grammar: sums of `*`-separated factors; a factor is an integer, `q`, `zK`, or a
//! parenthesized expression, optionally raised to `^k` with `k >= 0`.

use num_bigint::BigInt;

use super::{ZqMonomial, ZqPolynomial};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
}

impl Parser<'_> {
    fn fail<T>(&self, what: &str) -> Result<T> {
        Err(Error::InvalidInput(format!("{what} at offset {} in polynomial", self.pos)))
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
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

    fn digits(&mut self) -> Option<&str> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).expect("ascii"))
    }

    fn expr(&mut self) -> Result<ZqPolynomial> {
        let mut acc = ZqPolynomial::zero(self.n);
        let mut negate = self.eat(b'-');
        if !negate {
            self.eat(b'+');
        }
        loop {
            let t = self.term()?;
            acc = if negate { acc.sub(&t) } else { acc.add(&t) };
            negate = match self.peek() {
                Some(b'+') => false,
                Some(b'-') => true,
                _ => return Ok(acc),
            };
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<ZqPolynomial> {
        let mut acc = self.power()?;
        while self.eat(b'*') {
            acc = acc.mul(&self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<ZqPolynomial> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let Some(k) = self.digits().and_then(|d| d.parse::<u32>().ok()) else {
            return self.fail("expected a nonnegative exponent");
        };
        Ok((0..k).fold(ZqPolynomial::one(self.n), |acc, _| acc.mul(&base)))
    }

    fn atom(&mut self) -> Result<ZqPolynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return self.fail("expected ')'");
                }
                Ok(inner)
            }
            Some(b'q') => {
                self.pos += 1;
                Ok(ZqPolynomial::monomial(BigInt::from(1), ZqMonomial::new(1, vec![0; self.n])))
            }
            Some(b'z') => {
                self.pos += 1;
                let k = self.digits().and_then(|d| d.parse::<usize>().ok());
                match k {
                    Some(k) if (1..=self.n).contains(&k) => {
                        let mut z = vec![0; self.n];
                        z[k - 1] = 1;
                        Ok(ZqPolynomial::monomial(BigInt::from(1), ZqMonomial::new(0, z)))
                    }
                    _ => self.fail("expected a variable index"),
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits().expect("digit present");
                let c: BigInt = d.parse().expect("digits");
                Ok(ZqPolynomial::monomial(c, ZqMonomial::one(self.n)))
            }
            _ => self.fail("unexpected input"),
        }
    }
}

impl ZqPolynomial {
    /// Parses an expression in `q, z1..zn`.
    pub fn parse(n: usize, s: &str) -> Result<ZqPolynomial> {
        let mut p = Parser { src: s.as_bytes(), pos: 0, n };
        let out = p.expr()?;
        if p.peek().is_some() {
            return p.fail("trailing input");
        }
        Ok(out)
    }
}
