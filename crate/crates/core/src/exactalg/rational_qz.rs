use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::{QPolynomial, Rational, ZqMonomial, ZqPolynomial};
use crate::error::{Error, Result, check_len};

/// A denominator factor `1 - q^qexp * prod z_i^{zexp_i}` with nonnegative exponents,
/// never identically zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Atom(ZqMonomial);

impl Atom {
    pub fn new(qexp: i64, zexp: Vec<i64>) -> Option<Atom> {
        Self::from_monomial(ZqMonomial::new(qexp, zexp))
    }

    pub fn from_monomial(m: ZqMonomial) -> Option<Atom> {
        (m.is_nonnegative() && !m.is_one()).then_some(Atom(m))
    }

    pub fn qexp(&self) -> i64 {
        self.0.q
    }

    pub fn zexp(&self) -> &[i64] {
        &self.0.z
    }

    pub fn monomial(&self) -> &ZqMonomial {
        &self.0
    }

    /// Recognizes `1 - m` (sign `+1`) or `m - 1` (sign `-1`).
    pub fn from_poly(p: &ZqPolynomial) -> Option<(i8, Atom)> {
        if p.len() != 2 {
            return None;
        }
        let (m, _) = p.terms().find(|(m, _)| !m.is_one())?;
        let atom = Self::from_monomial(m.clone())?;
        let poly = atom.to_poly();
        if *p == poly {
            Some((1, atom))
        } else if *p == poly.neg() {
            Some((-1, atom))
        } else {
            None
        }
    }

    pub fn to_poly(&self) -> ZqPolynomial {
        ZqPolynomial::one_minus(&self.0)
    }

    /// `1 - q^{qexp + zexp . a}`
    pub fn substitute(&self, a: &[i64]) -> QPolynomial {
        QPolynomial::one_minus_q_pow(self.0.substitute(a))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(1 - {})", self.0)
    }
}

/// Multiset of atoms.
pub type AtomSet = BTreeMap<Atom, u32>;

/// Rational function `sign * unit * numer / prod(atoms)` in `q, z_1..z_n`.
///
/// Canonical form: `numer` is divisible by none of the denominator atoms, its
/// monomial content is `1` (moved into `unit`) and its lowest term is positive.
/// The zero function has `numer = 0`, `unit = 1`, `sign = +1` and no atoms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalQZ {
    sign: i8,
    unit: ZqMonomial,
    numer: ZqPolynomial,
    denom: AtomSet,
}

/// Multiplies `num` (over `own`) by the atoms of `target` beyond `own`.
fn lift(mut num: ZqPolynomial, own: &AtomSet, target: &AtomSet) -> ZqPolynomial {
    for (atom, &k) in target {
        let have = own.get(atom).copied().unwrap_or(0);
        debug_assert!(have <= k);
        for _ in have..k {
            num = num.mul_one_minus(atom.monomial());
        }
    }
    num
}

impl RationalQZ {
    pub fn zero(n: usize) -> Self {
        RationalQZ { sign: 1, unit: ZqMonomial::one(n), numer: ZqPolynomial::zero(n), denom: AtomSet::new() }
    }

    pub fn one(n: usize) -> Self {
        RationalQZ { sign: 1, unit: ZqMonomial::one(n), numer: ZqPolynomial::one(n), denom: AtomSet::new() }
    }

    /// Builds and canonicalizes `sign * unit * numer / prod(denom)`.
    pub fn from_parts(
        sign: i8,
        unit: ZqMonomial,
        numer: ZqPolynomial,
        denom: impl IntoIterator<Item = (Atom, u32)>,
    ) -> Result<Self> {
        let n = numer.n();
        check_len(n, unit.n())?;
        if numer.is_zero() {
            return Ok(Self::zero(n));
        }
        let mut atoms = AtomSet::new();
        for (a, k) in denom {
            check_len(n, a.zexp().len())?;
            if k > 0 {
                *atoms.entry(a).or_default() += k;
            }
        }
        let mut numer = numer;
        let mut kept = AtomSet::new();
        for (atom, mult) in atoms {
            let mut left = mult;
            while left > 0 {
                match numer.div_one_minus(atom.monomial()) {
                    Some(q) => {
                        numer = q;
                        left -= 1;
                    }
                    None => break,
                }
            }
            if left > 0 {
                kept.insert(atom, left);
            }
        }
        let content = numer.monomial_content().expect("nonzero numerator");
        let numer = numer.div_monomial(&content);
        let unit = unit.mul(&content);
        let (sign, numer) = match numer.first_term() {
            Some((_, c)) if c.is_negative() => (-sign.signum(), numer.neg()),
            _ => (sign.signum(), numer),
        };
        Ok(RationalQZ { sign, unit, numer, denom: kept })
    }

    /// `numer / prod(denominators)` from text; each denominator factor must read as `1 - m`
    /// or `m - 1` for a monomial `m` with nonnegative exponents.
    pub fn parse_factored(n: usize, numer: &str, denominators: &[&str]) -> Result<Self> {
        let mut sign = 1;
        let mut atoms = Vec::new();
        for d in denominators {
            let p = ZqPolynomial::parse(n, d)?;
            let (s, atom) = Atom::from_poly(&p)
                .ok_or_else(|| Error::InvalidInput(format!("denominator factor {d} is not 1 - monomial")))?;
            sign *= s;
            atoms.push((atom, 1));
        }
        Self::from_parts(sign, ZqMonomial::one(n), ZqPolynomial::parse(n, numer)?, atoms)
    }

    pub fn n(&self) -> usize {
        self.unit.n()
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn unit(&self) -> &ZqMonomial {
        &self.unit
    }

    pub fn numer(&self) -> &ZqPolynomial {
        &self.numer
    }

    pub fn denom(&self) -> &AtomSet {
        &self.denom
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.sign == 1 && self.unit.is_one() && self.numer.is_one() && self.denom.is_empty()
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        RationalQZ { sign: -self.sign, ..self.clone() }
    }

    pub fn mul(&self, other: &RationalQZ) -> Result<Self> {
        check_len(self.n(), other.n())?;
        let denom = self.denom.iter().chain(&other.denom).map(|(a, k)| (a.clone(), *k));
        Self::from_parts(
            self.sign * other.sign,
            self.unit.mul(&other.unit),
            self.numer.mul(&other.numer),
            denom,
        )
    }

    /// `sign * unit * numer` as a single Laurent polynomial.
    pub fn signed_numerator(&self) -> ZqPolynomial {
        self.numer.mul_monomial(&self.unit).scale(&BigInt::from(self.sign))
    }

    /// The signed numerator multiplied by the atoms of `target` missing from this denominator.
    ///
    /// `target` must contain this denominator as a sub-multiset.
    fn numerator_over(&self, target: &AtomSet) -> ZqPolynomial {
        lift(self.signed_numerator(), &self.denom, target)
    }

    /// Sum over a common denominator.
    ///
    /// Numerators sharing a denominator are added first; the groups are then
    /// merged pairwise over local least common multiples, and atoms are
    /// cancelled once at the end.
    pub fn sum<'a>(n: usize, terms: impl IntoIterator<Item = &'a RationalQZ>) -> Result<Self> {
        let mut groups: BTreeMap<Vec<(Atom, u32)>, ZqPolynomial> = BTreeMap::new();
        for t in terms {
            check_len(n, t.n())?;
            if t.is_zero() {
                continue;
            }
            let key = t.denom.iter().map(|(a, &k)| (a.clone(), k)).collect();
            groups.entry(key).or_insert_with(|| ZqPolynomial::zero(n)).add_assign(&t.signed_numerator());
        }
        let mut level: Vec<(ZqPolynomial, AtomSet)> =
            groups.into_iter().map(|(key, num)| (num, key.into_iter().collect())).collect();
        if level.is_empty() {
            return Ok(Self::zero(n));
        }
        while level.len() > 1 {
            let mut next = Vec::with_capacity(level.len().div_ceil(2));
            let mut it = level.into_iter();
            while let Some((num_a, den_a)) = it.next() {
                let Some((num_b, den_b)) = it.next() else {
                    next.push((num_a, den_a));
                    break;
                };
                let mut lcm = den_a.clone();
                for (a, &k) in &den_b {
                    let e = lcm.entry(a.clone()).or_default();
                    *e = (*e).max(k);
                }
                let mut num = lift(num_a, &den_a, &lcm);
                num.add_assign(&lift(num_b, &den_b, &lcm));
                next.push((num, lcm));
            }
            level = next;
        }
        let (num, den) = level.pop().expect("one group left");
        Self::from_parts(1, ZqMonomial::one(n), num, den)
    }

    /// Exact equality as rational functions.
    pub fn equivalent(&self, other: &RationalQZ) -> bool {
        if self.n() != other.n() {
            return false;
        }
        if self == other {
            return true;
        }
        let mut lcm = self.denom.clone();
        for (a, &k) in &other.denom {
            let e = lcm.entry(a.clone()).or_default();
            *e = (*e).max(k);
        }
        self.numerator_over(&lcm) == other.numerator_over(&lcm)
    }

    /// Substitutes `z_i -> q^{a_i}`, giving `(numerator, denominator)` in `Z[q, 1/q]`.
    pub fn substitute(&self, a: &[i64]) -> Result<(QPolynomial, QPolynomial)> {
        check_len(self.n(), a.len())?;
        if self.is_zero() {
            return Ok((QPolynomial::zero(), QPolynomial::one()));
        }
        let mut den = QPolynomial::one();
        for (atom, &k) in &self.denom {
            let f = atom.substitute(a);
            if f.is_zero() {
                return Err(Error::DenominatorVanishes);
            }
            den = den * f.pow(k);
        }
        let num = self
            .numer
            .substitute(a)?
            .mul_q_pow(self.unit.substitute(a))
            .scale(&BigInt::from(self.sign));
        Ok((num, den))
    }

    /// Exact value at a rational point; `None` if a denominator atom vanishes there.
    pub fn eval_rational(&self, q: &Rational, z: &[Rational]) -> Option<Rational> {
        let mut den = Rational::one();
        for (atom, &k) in &self.denom {
            let v = atom.to_poly().eval_rational(q, z);
            if num_traits::Zero::is_zero(&v) {
                return None;
            }
            den *= num_traits::pow(v, k as usize);
        }
        Some(self.signed_numerator().eval_rational(q, z) / den)
    }
}

impl fmt::Display for RationalQZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut head = String::new();
        if self.sign < 0 {
            head.push('-');
        }
        let numer_is_one = self.numer.is_one();
        match (self.unit.is_one(), numer_is_one) {
            (true, true) => head.push('1'),
            (true, false) if self.numer.len() == 1 => head.push_str(&self.numer.to_string()),
            (true, false) => head.push_str(&format!("({})", self.numer)),
            (false, true) => head.push_str(&self.unit.to_string()),
            (false, false) => head.push_str(&format!("{}*({})", self.unit, self.numer)),
        }
        write!(f, "{head}")?;
        if !self.denom.is_empty() {
            let parts: Vec<String> = self
                .denom
                .iter()
                .map(|(a, &k)| if k == 1 { a.to_string() } else { format!("{a}^{k}") })
                .collect();
            write!(f, " / ({})", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for RationalQZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalQZ({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(q: i64, z: &[i64]) -> ZqMonomial {
        ZqMonomial::new(q, z.to_vec())
    }

    /// -(1 - z1)/(1 - q z2)
    fn worked() -> RationalQZ {
        RationalQZ::from_parts(
            -1,
            ZqMonomial::one(2),
            ZqPolynomial::one_minus(&m(0, &[1, 0])),
            [(Atom::new(1, vec![0, 1]).unwrap(), 1)],
        )
        .unwrap()
    }

    #[test]
    fn parse_factored_reads_either_orientation() {
        let r = RationalQZ::parse_factored(2, "z1 - 1", &["1 - q*z2"]).unwrap();
        assert_eq!(r, worked());
        let r = RationalQZ::parse_factored(2, "1 - z1", &["z2*q - 1"]).unwrap();
        assert_eq!(r, worked());
        assert!(RationalQZ::parse_factored(2, "1", &["1 + q"]).is_err());
        assert!(RationalQZ::parse_factored(2, "1", &["1 - q*z2^2 - z1"]).is_err());
    }

    #[test]
    fn atoms_reject_identity_and_negative_exponents() {
        assert!(Atom::new(0, vec![0, 0]).is_none());
        assert!(Atom::new(-1, vec![1]).is_none());
        assert!(Atom::new(0, vec![1]).is_some());
    }

    #[test]
    fn substitute_examples() {
        let r = RationalQZ::from_parts(1, ZqMonomial::one(1), ZqPolynomial::one_minus(&m(1, &[1])), []).unwrap();
        let (num, den) = r.substitute(&[2]).unwrap();
        assert_eq!(num, QPolynomial::one_minus_q_pow(3));
        assert!(den.is_one());

        let (num, den) = worked().substitute(&[1, 1]).unwrap();
        assert_eq!(num, -QPolynomial::one_minus_q_pow(1));
        assert_eq!(den, QPolynomial::one_minus_q_pow(2));

        let (num, den) = RationalQZ::zero(3).substitute(&[1, 2, 3]).unwrap();
        assert!(num.is_zero() && den.is_one());
    }

    #[test]
    fn canonicalization_cancels_atoms_and_extracts_content() {
        // (1 - q z1) * q^2 z1 * (-3) / (1 - q z1)  ->  -3 q^2 z1
        let numer = ZqPolynomial::one_minus(&m(1, &[1])).mul_monomial(&m(2, &[1])).scale(&BigInt::from(-3));
        let r = RationalQZ::from_parts(1, ZqMonomial::one(1), numer, [(Atom::new(1, vec![1]).unwrap(), 1)]).unwrap();
        assert!(r.denom().is_empty());
        assert_eq!(r.sign(), -1);
        assert_eq!(r.unit(), &m(2, &[1]));
        assert_eq!(r.numer(), &ZqPolynomial::monomial(BigInt::from(3), ZqMonomial::one(1)));
    }

    #[test]
    fn equivalence() {
        let r = worked();
        assert!(r.equivalent(&r));
        let a = Atom::new(1, vec![1, 0]).unwrap();
        let trivial = RationalQZ {
            sign: 1,
            unit: ZqMonomial::one(2),
            numer: a.to_poly(),
            denom: [(a, 1)].into_iter().collect(),
        };
        assert!(RationalQZ::one(2).equivalent(&trivial));
        let plus_one = RationalQZ::sum(2, [&r, &RationalQZ::one(2)]).unwrap();
        assert!(!r.equivalent(&plus_one));
    }

    #[test]
    fn sum_of_empty_and_single() {
        assert!(RationalQZ::sum(2, []).unwrap().is_zero());
        assert_eq!(RationalQZ::sum(2, [&worked()]).unwrap(), worked());
        let s = RationalQZ::sum(2, [&worked(), &worked().neg()]).unwrap();
        assert!(s.is_zero());
    }
}
