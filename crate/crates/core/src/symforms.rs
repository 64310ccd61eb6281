//! Affine, quadratic and parity forms in the symbolic parameters `a_1..a_n`.
//!
//! Signs are decided generically: each `a_i` is taken independently and
//! arbitrarily large (and at least 1).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::Rational;

/// Generic sign of an affine form as every `a_i` grows without bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignClass {
    Positive,
    Negative,
    Zero,
    Mixed,
}

/// `constant + sum coeffs[i] * a_{i+1}` with integer coefficients.
///
/// Orders by coefficient vector first, so forms sharing an `a`-part sort together
/// by constant.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineForm {
    coeffs: Vec<i64>,
    constant: i64,
}

impl AffineForm {
    pub fn new(constant: i64, coeffs: Vec<i64>) -> Self {
        AffineForm { coeffs, constant }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(0, vec![0; n])
    }

    pub fn constant(n: usize, c: i64) -> Self {
        Self::new(c, vec![0; n])
    }

    /// The parameter `a_{i+1}` (zero-based `i`).
    pub fn var(n: usize, i: usize) -> Self {
        let mut coeffs = vec![0; n];
        coeffs[i] = 1;
        Self::new(0, coeffs)
    }

    /// `sigma = a_1 + ... + a_n`
    pub fn sigma(n: usize) -> Self {
        Self::new(0, vec![1; n])
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn constant_term(&self) -> i64 {
        self.constant
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0 && self.is_constant()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn plus(&self, c: i64) -> Self {
        Self::new(self.constant + c, self.coeffs.clone())
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::new(self.constant * k, self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn generic_sign(&self) -> SignClass {
        let pos = self.coeffs.iter().any(|&c| c > 0);
        let neg = self.coeffs.iter().any(|&c| c < 0);
        match (pos, neg) {
            (true, true) => SignClass::Mixed,
            (true, false) => SignClass::Positive,
            (false, true) => SignClass::Negative,
            (false, false) => match self.constant.signum() {
                1 => SignClass::Positive,
                -1 => SignClass::Negative,
                _ => SignClass::Zero,
            },
        }
    }

    pub fn substitute(&self, a: &[i64]) -> i64 {
        debug_assert_eq!(a.len(), self.n());
        self.constant + self.coeffs.iter().zip(a).map(|(c, x)| c * x).sum::<i64>()
    }
}

impl Add<&AffineForm> for &AffineForm {
    type Output = AffineForm;
    fn add(self, rhs: &AffineForm) -> AffineForm {
        AffineForm::new(
            self.constant + rhs.constant,
            self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        )
    }
}

impl Sub<&AffineForm> for &AffineForm {
    type Output = AffineForm;
    fn sub(self, rhs: &AffineForm) -> AffineForm {
        self + &(-rhs)
    }
}

impl Neg for &AffineForm {
    type Output = AffineForm;
    fn neg(self) -> AffineForm {
        self.scale(-1)
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let var = format!("a{}", i + 1);
            let body = match c.abs() {
                1 => var,
                k => format!("{k}*{var}"),
            };
            match (out.is_empty(), c < 0) {
                (true, true) => out.push_str(&format!("-{body}")),
                (true, false) => out.push_str(&body),
                (false, true) => out.push_str(&format!(" - {body}")),
                (false, false) => out.push_str(&format!(" + {body}")),
            }
        }
        match (out.is_empty(), self.constant) {
            (true, c) => out.push_str(&c.to_string()),
            (false, 0) => {}
            (false, c) if c < 0 => out.push_str(&format!(" - {}", -c)),
            (false, c) => out.push_str(&format!(" + {c}")),
        }
        write!(f, "{out}")
    }
}

impl fmt::Debug for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AffineForm({self})")
    }
}

/// Quadratic form with exact rational coefficients:
/// `constant + sum linear[i] a_i + sum_{i <= j} quad[(i, j)] a_i a_j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadForm {
    constant: Rational,
    linear: Vec<Rational>,
    quad: BTreeMap<(usize, usize), Rational>,
}

fn rat(k: i64) -> Rational {
    Rational::from_integer(BigInt::from(k))
}

impl QuadForm {
    pub fn zero(n: usize) -> Self {
        QuadForm { constant: Rational::zero(), linear: vec![Rational::zero(); n], quad: BTreeMap::new() }
    }

    pub fn from_affine(l: &AffineForm) -> Self {
        QuadForm {
            constant: rat(l.constant),
            linear: l.coeffs.iter().map(|&c| rat(c)).collect(),
            quad: BTreeMap::new(),
        }
    }

    /// `l1 * l2`
    pub fn product(l1: &AffineForm, l2: &AffineForm) -> Self {
        let n = l1.n();
        let mut out = Self::zero(n);
        out.constant = rat(l1.constant * l2.constant);
        for i in 0..n {
            out.linear[i] = rat(l1.constant * l2.coeffs[i] + l2.constant * l1.coeffs[i]);
        }
        for i in 0..n {
            for j in 0..n {
                let c = l1.coeffs[i] * l2.coeffs[j];
                if c != 0 {
                    let key = (i.min(j), i.max(j));
                    *out.quad.entry(key).or_insert_with(Rational::zero) += rat(c);
                }
            }
        }
        out.prune();
        out
    }

    /// `l (l - 1) / 2`
    pub fn binom2(l: &AffineForm) -> Self {
        Self::product(l, &l.plus(-1)).scale(&Rational::new(BigInt::one(), BigInt::from(2)))
    }

    fn prune(&mut self) {
        self.quad.retain(|_, v| !v.is_zero());
    }

    pub fn n(&self) -> usize {
        self.linear.len()
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.linear.iter().all(Zero::is_zero) && self.quad.is_empty()
    }

    pub fn add(&self, other: &QuadForm) -> QuadForm {
        let mut out = self.clone();
        out.constant += &other.constant;
        for (a, b) in out.linear.iter_mut().zip(&other.linear) {
            *a += b;
        }
        for (k, v) in &other.quad {
            *out.quad.entry(*k).or_insert_with(Rational::zero) += v;
        }
        out.prune();
        out
    }

    pub fn neg(&self) -> QuadForm {
        self.scale(&rat(-1))
    }

    pub fn sub(&self, other: &QuadForm) -> QuadForm {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rational) -> QuadForm {
        let mut out = QuadForm {
            constant: &self.constant * k,
            linear: self.linear.iter().map(|c| c * k).collect(),
            quad: self.quad.iter().map(|(key, v)| (*key, v * k)).collect(),
        };
        out.prune();
        out
    }

    pub fn substitute(&self, a: &[i64]) -> Rational {
        let mut acc = self.constant.clone();
        for (c, &x) in self.linear.iter().zip(a) {
            acc += c * rat(x);
        }
        for (&(i, j), v) in &self.quad {
            acc += v * rat(a[i] * a[j]);
        }
        acc
    }

    /// The integral affine form this reduces to, if the quadratic part vanished.
    pub fn finalize(&self) -> Result<AffineForm> {
        if let Some(((i, j), v)) = self.quad.iter().next() {
            return Err(Error::inconsistency(format!(
                "quadratic exponent term {v}*a{}*a{} survived",
                i + 1,
                j + 1
            )));
        }
        let to_int = |r: &Rational| -> Result<i64> {
            if !r.is_integer() {
                return Err(Error::inconsistency(format!("non-integral exponent coefficient {r}")));
            }
            i64::try_from(r.to_integer()).map_err(|_| Error::inconsistency("exponent overflow"))
        };
        Ok(AffineForm::new(
            to_int(&self.constant)?,
            self.linear.iter().map(to_int).collect::<Result<_>>()?,
        ))
    }
}

/// `constant + sum coeffs[i] a_i (mod 2)`
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ParityForm {
    constant: bool,
    coeffs: Vec<bool>,
}

impl ParityForm {
    pub fn zero(n: usize) -> Self {
        ParityForm { constant: false, coeffs: vec![false; n] }
    }

    pub fn from_affine(l: &AffineForm) -> Self {
        ParityForm { constant: l.constant & 1 == 1, coeffs: l.coeffs.iter().map(|c| c & 1 == 1).collect() }
    }

    pub fn add(&self, other: &ParityForm) -> ParityForm {
        ParityForm {
            constant: self.constant ^ other.constant,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a ^ b).collect(),
        }
    }

    /// The constant bit, if no `a_i` survives mod 2.
    pub fn reduce(&self) -> Option<bool> {
        self.coeffs.iter().all(|c| !c).then_some(self.constant)
    }

    pub fn substitute(&self, a: &[i64]) -> bool {
        self.coeffs
            .iter()
            .zip(a)
            .fold(self.constant, |acc, (&c, &x)| acc ^ (c && x & 1 == 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn af(c: i64, coeffs: &[i64]) -> AffineForm {
        AffineForm::new(c, coeffs.to_vec())
    }

    #[test]
    fn generic_sign_examples() {
        assert_eq!(af(1, &[1, 0]).generic_sign(), SignClass::Positive);
        assert_eq!(af(0, &[0, -1]).generic_sign(), SignClass::Negative);
        assert_eq!(af(0, &[1, -1]).generic_sign(), SignClass::Mixed);
        assert_eq!(af(0, &[0, 0]).generic_sign(), SignClass::Zero);
        assert_eq!(af(-7, &[1, 0]).generic_sign(), SignClass::Positive);
    }

    #[test]
    fn substitute_examples() {
        assert_eq!(af(2, &[1, 0, -1]).substitute(&[1, 5, 2]), 1);
        assert_eq!(AffineForm::sigma(3).substitute(&[1, 1, 1]), 3);
        assert_eq!(AffineForm::zero(2).substitute(&[9, 4]), 0);
    }

    #[test]
    fn parity_reduce_examples() {
        assert_eq!(ParityForm::from_affine(&af(1, &[2])).reduce(), Some(true));
        assert_eq!(ParityForm::from_affine(&af(0, &[1])).reduce(), None);
        let a2 = ParityForm::from_affine(&af(0, &[0, 1]));
        assert_eq!(a2.add(&a2).reduce(), Some(false));
    }

    #[test]
    fn finalize_examples() {
        let a1a2 = QuadForm::product(&af(0, &[1, 0]), &af(0, &[0, 1]));
        let q = a1a2.sub(&a1a2).add(&QuadForm::from_affine(&af(0, &[2, 0])));
        assert_eq!(q.finalize().unwrap(), af(0, &[2, 0]));

        // a2(a2+1)/2 - a2(a2+1)/2 + 3
        let t = QuadForm::binom2(&af(1, &[0, 1]));
        let q = t.sub(&t).add(&QuadForm::from_affine(&af(3, &[0, 0])));
        assert_eq!(q.finalize().unwrap(), af(3, &[0, 0]));

        let half_sq = QuadForm::product(&af(0, &[1]), &af(0, &[1])).scale(&Rational::new(1.into(), 2.into()));
        assert!(matches!(half_sq.finalize(), Err(Error::InternalInconsistency(_))));
        let half = QuadForm::from_affine(&af(1, &[0])).scale(&Rational::new(1.into(), 2.into()));
        assert!(matches!(half.finalize(), Err(Error::InternalInconsistency(_))));
    }

    #[test]
    fn binom2_has_half_integer_coefficients_but_integer_values() {
        let b = QuadForm::binom2(&af(0, &[1]));
        for x in 0..10 {
            assert_eq!(b.substitute(&[x]), Rational::from_integer((x * (x - 1) / 2).into()));
        }
        assert!(b.finalize().is_err());
    }

    #[test]
    fn display() {
        assert_eq!(af(-1, &[1, 0, 2]).to_string(), "a1 + 2*a3 - 1");
        assert_eq!(af(0, &[0, -1]).to_string(), "-a2");
        assert_eq!(af(4, &[0, 0]).to_string(), "4");
    }

    fn affine(n: usize) -> impl Strategy<Value = AffineForm> {
        (-5i64..=5, prop::collection::vec(-3i64..=3, n)).prop_map(|(c, v)| AffineForm::new(c, v))
    }

    proptest! {
        #[test]
        fn generic_sign_matches_large_substitution(l in affine(3)) {
            let big = 1 + l.coeffs().iter().map(|c| c.abs()).sum::<i64>() + l.constant_term().abs();
            let v = l.substitute(&[big, big, big]);
            match l.generic_sign() {
                SignClass::Positive => prop_assert!(v > 0),
                SignClass::Negative => prop_assert!(v < 0),
                SignClass::Zero => prop_assert_eq!(v, 0),
                SignClass::Mixed => {}
            }
        }

        #[test]
        fn parity_agrees_with_substitution(l in affine(3), pts in prop::collection::vec(prop::collection::vec(1i64..50, 3), 10)) {
            let p = ParityForm::from_affine(&l);
            for a in &pts {
                prop_assert_eq!(p.substitute(a), l.substitute(a).rem_euclid(2) == 1);
                if let Some(bit) = p.reduce() {
                    prop_assert_eq!(bit, l.substitute(a).rem_euclid(2) == 1);
                }
            }
        }

        #[test]
        fn quad_arithmetic_laws(l1 in affine(2), l2 in affine(2), l3 in affine(2)) {
            let (x, y, z) = (QuadForm::product(&l1, &l2), QuadForm::binom2(&l3), QuadForm::from_affine(&l1));
            prop_assert_eq!(x.add(&y), y.add(&x));
            prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
            prop_assert_eq!(QuadForm::product(&l1, &l2), QuadForm::product(&l2, &l1));
            let lifted = x.scale(&Rational::zero()).add(&QuadForm::from_affine(&l2));
            prop_assert_eq!(lifted.finalize().unwrap(), l2);
        }
    }
}
