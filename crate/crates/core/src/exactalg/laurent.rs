use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use super::QPolynomial;
use crate::error::{Result, check_len};

/// Sparse Laurent polynomial in `x_1..x_n` with coefficients in `Z[q, 1/q]`.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i32>, QPolynomial>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(QPolynomial::one(), vec![0; nvars])
    }

    pub fn monomial(coeff: QPolynomial, exps: Vec<i32>) -> Self {
        let mut p = Self::zero(exps.len());
        if !coeff.is_zero() {
            p.terms.insert(exps, coeff);
        }
        p
    }

    /// Builds from `(exponent vector, coefficient)` pairs, summing repeats.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<i32>, QPolynomial)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            check_len(nvars, e.len())?;
            p.add_term(e, &c);
        }
        Ok(p)
    }

    fn add_term(&mut self, exps: Vec<i32>, c: &QPolynomial) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &QPolynomial)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        check_len(self.nvars, other.nvars)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        check_len(self.nvars, other.nvars)?;
        let mut out = LaurentPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, &(c1 * c2));
            }
        }
        Ok(out)
    }

    /// Multiplies by `1 - q^qexp * x^xexp` without building the binomial.
    pub fn mul_one_minus(&self, qexp: i64, xexp: &[i32]) -> Result<LaurentPoly> {
        check_len(self.nvars, xexp.len())?;
        let mut out = self.clone();
        let minus_one = -BigInt::one();
        for (e, c) in &self.terms {
            let shifted: Vec<i32> = e.iter().zip(xexp).map(|(a, b)| a + b).collect();
            out.add_term(shifted, &c.mul_q_pow(qexp).scale(&minus_one));
        }
        Ok(out)
    }

    /// Coefficient of `prod x_i^{kappa_i}`; zero if absent.
    pub fn coefficient(&self, kappa: &[i32]) -> Result<QPolynomial> {
        check_len(self.nvars, kappa.len())?;
        Ok(self.terms.get(kappa).cloned().unwrap_or_default())
    }

    /// True when every exponent of every term is nonnegative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x >= 0))
    }

    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|e| e.iter().map(|&x| x as i64).sum()).max()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (i, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{}", i + 1, x)?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly[{}]({self})", self.nvars)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    fn qp(terms: &[(i64, i64)]) -> QPolynomial {
        QPolynomial::from_terms(terms.iter().copied())
    }

    /// 1 + q - q x2/x1 - x1/x2
    fn worked() -> LaurentPoly {
        let a = LaurentPoly::one(2).mul_one_minus(0, &[1, -1]).unwrap();
        let b = LaurentPoly::one(2).mul_one_minus(1, &[-1, 1]).unwrap();
        a.mul(&b).unwrap()
    }

    #[test]
    fn hand_expansion_of_two_variable_product() {
        let p = worked();
        let expected = LaurentPoly::from_terms(
            2,
            [
                (vec![0, 0], qp(&[(0, 1), (1, 1)])),
                (vec![-1, 1], qp(&[(1, -1)])),
                (vec![1, -1], qp(&[(0, -1)])),
            ],
        )
        .unwrap();
        assert_eq!(p, expected);
        let a = LaurentPoly::one(2).mul_one_minus(0, &[1, -1]).unwrap();
        assert_eq!(a.mul(&LaurentPoly::one(2)).unwrap(), a);
        assert!(a.mul(&LaurentPoly::zero(2)).unwrap().is_zero());
    }

    #[test]
    fn coefficient_extraction() {
        let p = worked();
        assert_eq!(p.coefficient(&[1, -1]).unwrap(), qp(&[(0, -1)]));
        assert_eq!(p.coefficient(&[0, 0]).unwrap(), qp(&[(0, 1), (1, 1)]));
        assert!(p.coefficient(&[5, 5]).unwrap().is_zero());
    }

    #[test]
    fn dimension_mismatch() {
        let p = worked();
        assert_eq!(p.coefficient(&[0]), Err(Error::DimensionMismatch { expected: 2, got: 1 }));
        assert!(p.mul(&LaurentPoly::one(3)).is_err());
    }
}
