use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::collections::btree_map::Entry;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::QPolynomial;
use crate::error::{Result, check_len};

/// The monomial `q^q * prod z_i^{z_i}` (exponents may be negative).
///
/// Ordered graded-lexicographically on `(q, z_1, .., z_n)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ZqMonomial {
    pub q: i64,
    pub z: Vec<i64>,
}

impl ZqMonomial {
    pub fn one(n: usize) -> Self {
        ZqMonomial { q: 0, z: vec![0; n] }
    }

    pub fn new(q: i64, z: Vec<i64>) -> Self {
        ZqMonomial { q, z }
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn degree(&self) -> i64 {
        self.q + self.z.iter().sum::<i64>()
    }

    pub fn is_one(&self) -> bool {
        self.q == 0 && self.z.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &ZqMonomial) -> ZqMonomial {
        ZqMonomial {
            q: self.q + other.q,
            z: self.z.iter().zip(&other.z).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn div(&self, other: &ZqMonomial) -> ZqMonomial {
        ZqMonomial {
            q: self.q - other.q,
            z: self.z.iter().zip(&other.z).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> ZqMonomial {
        ZqMonomial { q: self.q * k, z: self.z.iter().map(|e| e * k).collect() }
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &ZqMonomial) -> ZqMonomial {
        ZqMonomial {
            q: self.q.min(other.q),
            z: self.z.iter().zip(&other.z).map(|(a, b)| *a.min(b)).collect(),
        }
    }

    /// Exponent of `q` after `z_i -> q^{a_i}`.
    pub fn substitute(&self, a: &[i64]) -> i64 {
        self.q + self.z.iter().zip(a).map(|(e, x)| e * x).sum::<i64>()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.q >= 0 && self.z.iter().all(|&e| e >= 0)
    }
}

impl Ord for ZqMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.q.cmp(&other.q))
            .then_with(|| self.z.cmp(&other.z))
    }
}

impl PartialOrd for ZqMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ZqMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.q {
            0 => {}
            1 => parts.push("q".to_string()),
            e => parts.push(format!("q^{e}")),
        }
        for (i, &e) in self.z.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("z{}", i + 1)),
                _ => parts.push(format!("z{}^{}", i + 1, e)),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Adds two term streams sorted by monomial, dropping zero sums.
fn merge_sorted(
    left: impl IntoIterator<Item = (ZqMonomial, BigInt)>,
    right: impl IntoIterator<Item = (ZqMonomial, BigInt)>,
) -> BTreeMap<ZqMonomial, BigInt> {
    let mut left = left.into_iter().peekable();
    let mut right = right.into_iter().peekable();
    let mut out = Vec::new();
    loop {
        let ord = match (left.peek(), right.peek()) {
            (None, None) => break,
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (Some((a, _)), Some((b, _))) => a.cmp(b),
        };
        match ord {
            Ordering::Less => out.extend(left.next()),
            Ordering::Greater => out.extend(right.next()),
            Ordering::Equal => {
                let (k, c) = left.next().expect("peeked");
                let (_, d) = right.next().expect("peeked");
                let sum = c + d;
                if !sum.is_zero() {
                    out.push((k, sum));
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Sparse polynomial in `q, z_1..z_n` with integer coefficients (Laurent exponents allowed).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZqPolynomial {
    n: usize,
    terms: BTreeMap<ZqMonomial, BigInt>,
}

impl ZqPolynomial {
    pub fn zero(n: usize) -> Self {
        ZqPolynomial { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(BigInt::one(), ZqMonomial::one(n))
    }

    pub fn monomial(c: BigInt, m: ZqMonomial) -> Self {
        let mut p = Self::zero(m.n());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// `1 - m`
    pub fn one_minus(m: &ZqMonomial) -> Self {
        let mut p = Self::one(m.n());
        p.add_term(m.clone(), &-BigInt::one());
        p
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (ZqMonomial, BigInt)>) -> Result<Self> {
        let mut p = Self::zero(n);
        for (m, c) in terms {
            check_len(n, m.n())?;
            p.add_term(m, &c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: ZqMonomial, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().next().is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&ZqMonomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn first_term(&self) -> Option<(&ZqMonomial, &BigInt)> {
        self.terms.iter().next()
    }

    pub fn add(&self, other: &ZqPolynomial) -> ZqPolynomial {
        let (mut big, small) = if self.len() >= other.len() { (self.clone(), other) } else { (other.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c);
        }
        big
    }

    pub fn add_assign(&mut self, other: &ZqPolynomial) {
        if other.len() * 8 < self.len() {
            for (m, c) in &other.terms {
                self.add_term(m.clone(), c);
            }
        } else {
            let mine = std::mem::take(&mut self.terms);
            self.terms = merge_sorted(mine, other.terms.iter().map(|(k, c)| (k.clone(), c.clone())));
        }
    }

    pub fn neg(&self) -> ZqPolynomial {
        ZqPolynomial { n: self.n, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &ZqPolynomial) -> ZqPolynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigInt) -> ZqPolynomial {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        ZqPolynomial { n: self.n, terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &ZqMonomial) -> ZqPolynomial {
        ZqPolynomial { n: self.n, terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    pub fn div_monomial(&self, m: &ZqMonomial) -> ZqPolynomial {
        ZqPolynomial { n: self.n, terms: self.terms.iter().map(|(k, c)| (k.div(m), c.clone())).collect() }
    }

    pub fn mul(&self, other: &ZqPolynomial) -> ZqPolynomial {
        let mut out = Self::zero(self.n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        out
    }

    /// Multiplies by `1 - m`.
    pub fn mul_one_minus(&self, m: &ZqMonomial) -> ZqPolynomial {
        // grlex is a monomial order, so the shifted terms are already sorted
        let shifted = self.terms.iter().map(|(k, c)| (k.mul(m), -c));
        let terms = merge_sorted(self.terms.iter().map(|(k, c)| (k.clone(), c.clone())), shifted);
        ZqPolynomial { n: self.n, terms }
    }

    /// Exact division by `1 - m`, where `m` has positive total degree.
    ///
    /// Monomials differing by a power of `m` form a chain; `1 - m` divides the
    /// polynomial iff every chain's coefficients sum to zero, and the quotient
    /// is the running sum along each chain. Returns `None` on a remainder.
    pub fn div_one_minus(&self, m: &ZqMonomial) -> Option<ZqPolynomial> {
        debug_assert!(m.degree() > 0);
        // pivot coordinate with a nonzero exponent in m (index 0 is q)
        let exps = |k: &ZqMonomial, i: usize| if i == 0 { k.q } else { k.z[i - 1] };
        let pivot = (0..=self.n).find(|&i| exps(m, i) != 0)?;
        let step = exps(m, pivot);
        let mut chains: BTreeMap<ZqMonomial, Vec<(i64, &BigInt)>> = BTreeMap::new();
        for (k, c) in &self.terms {
            let j = Integer::div_floor(&exps(k, pivot), &step);
            chains.entry(k.div(&m.pow(j))).or_default().push((j, c));
        }
        let mut quot = Self::zero(self.n);
        for (base, mut chain) in chains {
            chain.sort_unstable_by_key(|&(j, _)| j);
            if !chain.iter().fold(BigInt::zero(), |s, (_, c)| s + *c).is_zero() {
                return None;
            }
            let mut run = BigInt::zero();
            for w in chain.windows(2) {
                run += w[0].1;
                if !run.is_zero() {
                    for j in w[0].0..w[1].0 {
                        quot.terms.insert(base.mul(&m.pow(j)), run.clone());
                    }
                }
            }
        }
        Some(quot)
    }

    /// Componentwise minimum exponent over all terms (the monomial content).
    pub fn monomial_content(&self) -> Option<ZqMonomial> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |g, m| g.gcd(m)))
    }

    /// Nonnegative gcd of the coefficients.
    pub fn integer_content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Substitutes `z_i -> q^{a_i}`.
    pub fn substitute(&self, a: &[i64]) -> Result<QPolynomial> {
        check_len(self.n, a.len())?;
        let mut exps: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (m, c) in &self.terms {
            *exps.entry(m.substitute(a)).or_default() += c;
        }
        Ok(QPolynomial::from_terms(exps))
    }

    /// Evaluates at a rational point `(q, z_1..z_n)`; all coordinates nonzero.
    pub fn eval_rational(&self, q: &super::Rational, z: &[super::Rational]) -> super::Rational {
        let pw = |b: &super::Rational, e: i64| {
            let base = if e >= 0 { b.clone() } else { b.recip() };
            num_traits::pow(base, e.unsigned_abs() as usize)
        };
        let mut acc = super::Rational::zero();
        for (m, c) in &self.terms {
            let mut t = super::Rational::from_integer(c.clone()) * pw(q, m.q);
            for (zi, &e) in z.iter().zip(&m.z) {
                t *= pw(zi, e);
            }
            acc += t;
        }
        acc
    }
}

impl fmt::Display for ZqPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ZqPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZqPolynomial({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(q: i64, z: &[i64]) -> ZqMonomial {
        ZqMonomial::new(q, z.to_vec())
    }

    fn poly(n: usize, terms: &[(i64, &[i64], i64)]) -> ZqPolynomial {
        ZqPolynomial::from_terms(n, terms.iter().map(|(q, z, c)| (m(*q, z), BigInt::from(*c)))).unwrap()
    }

    #[test]
    fn graded_lex_order() {
        assert!(m(0, &[0]) < m(1, &[0]));
        assert!(m(0, &[1]) < m(1, &[0]));
        assert!(m(2, &[0]) < m(1, &[2]));
    }

    #[test]
    fn trial_division_by_binomial() {
        let qz = m(1, &[1]);
        let n = poly(1, &[(0, &[0], 1), (2, &[2], -1)]);
        assert_eq!(n.div_one_minus(&qz), Some(poly(1, &[(0, &[0], 1), (1, &[1], 1)])));
        assert_eq!(ZqPolynomial::one_minus(&qz).div_one_minus(&qz), Some(ZqPolynomial::one(1)));
        assert_eq!(poly(1, &[(0, &[0], 1), (1, &[1], 1)]).div_one_minus(&qz), None);
        assert_eq!(ZqPolynomial::zero(1).div_one_minus(&qz), Some(ZqPolynomial::zero(1)));
        // 1 - m^3 = (1 - m)(1 + m + m^2): the quotient fills the gap in the chain
        let cube = poly(1, &[(0, &[0], 1), (3, &[3], -1)]);
        let geometric = poly(1, &[(0, &[0], 1), (1, &[1], 1), (2, &[2], 1)]);
        assert_eq!(cube.div_one_minus(&qz), Some(geometric));
    }

    #[test]
    fn division_undoes_multiplication() {
        let m1 = m(1, &[0, 1]);
        let m2 = m(0, &[2, -1]);
        let p = poly(2, &[(0, &[0, 0], 3), (1, &[1, 0], -2), (0, &[-1, 2], 5), (2, &[0, 1], 7)]);
        for d in [&m1, &m2] {
            let prod = p.mul_one_minus(d);
            assert_eq!(prod, p.mul(&ZqPolynomial::one_minus(d)));
            assert_eq!(prod.div_one_minus(d), Some(p.clone()));
            assert_eq!(prod.add(&ZqPolynomial::one(2)).div_one_minus(d), None);
        }
        let mut acc = p.clone();
        acc.add_assign(&p.neg());
        assert!(acc.is_zero());
    }

    #[test]
    fn substitution_collects_by_q_exponent() {
        let p = poly(2, &[(0, &[0, 0], 1), (1, &[1, 0], -1), (0, &[0, 1], 1)]);
        // 1 - q^(1+a1) + q^(a2) at a = (1, 2)
        assert_eq!(p.substitute(&[1, 2]).unwrap(), QPolynomial::from_terms([(0, 1)]));
    }

    #[test]
    fn contents() {
        let p = poly(2, &[(1, &[2, 0], 4), (2, &[1, 1], -6)]);
        assert_eq!(p.monomial_content(), Some(m(1, &[1, 0])));
        assert_eq!(p.integer_content(), BigInt::from(2));
    }
}
