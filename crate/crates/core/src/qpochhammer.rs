//! Symbolic q-Pochhammer algebra.
//!
//! Values of the cleared q-Dyson polynomial and of the interpolation weights at
//! symbolic grid points are products `(-1)^parity * q^exponent * prod (q)_L^{e_L}`
//! with affine indices `L`. [`normalize_to_rational`] divides such a product by the
//! q-multinomial coefficient and expands what is left into a [`RationalQZ`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result, check_len};
use crate::exactalg::{Atom, QPolynomial, RationalQZ, ZqMonomial, ZqPolynomial};
use crate::symforms::{AffineForm, ParityForm, QuadForm, SignClass};

/// `(q)_index ^ exponent`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PochFactor {
    pub index: AffineForm,
    pub exponent: i64,
}

/// `(-1)^parity * q^qexp * prod_L (q)_L^{e_L}`
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QExpression {
    parity: ParityForm,
    qexp: QuadForm,
    poch: BTreeMap<AffineForm, i64>,
}

/// A symbolic value that is either identically zero or a [`QExpression`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Evaluated {
    IsZero,
    Value(QExpression),
}

impl Evaluated {
    pub fn into_value(self) -> Option<QExpression> {
        match self {
            Evaluated::IsZero => None,
            Evaluated::Value(v) => Some(v),
        }
    }
}

impl QExpression {
    pub fn one(n: usize) -> Self {
        QExpression { parity: ParityForm::zero(n), qexp: QuadForm::zero(n), poch: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.qexp.n()
    }

    pub fn parity(&self) -> &ParityForm {
        &self.parity
    }

    pub fn qexp(&self) -> &QuadForm {
        &self.qexp
    }

    /// Pochhammer factors in canonical order.
    pub fn factors(&self) -> Vec<PochFactor> {
        self.poch.iter().map(|(l, &e)| PochFactor { index: l.clone(), exponent: e }).collect()
    }

    pub fn with_sign(mut self, parity: &ParityForm) -> Self {
        self.parity = self.parity.add(parity);
        self
    }

    pub fn with_q_power(mut self, exp: &QuadForm) -> Self {
        self.qexp = self.qexp.add(exp);
        self
    }

    /// Multiplies by `(q)_index ^ exponent`; `(q)_0` factors are dropped.
    pub fn with_poch(mut self, index: AffineForm, exponent: i64) -> Result<Self> {
        if index.is_zero() || exponent == 0 {
            return Ok(self);
        }
        match index.generic_sign() {
            SignClass::Positive => {}
            SignClass::Negative => {
                return Err(Error::inconsistency(format!("(q)_L with negative index L = {index}")));
            }
            SignClass::Mixed => return Err(Error::MixedSign(format!("Pochhammer index {index}"))),
            SignClass::Zero => unreachable!("zero index handled above"),
        }
        let e = self.poch.entry(index).or_insert(0);
        *e += exponent;
        if *e == 0 {
            self.poch.retain(|_, v| *v != 0);
        }
        Ok(self)
    }

    pub fn mul(&self, other: &QExpression) -> QExpression {
        let mut out = QExpression {
            parity: self.parity.add(&other.parity),
            qexp: self.qexp.add(&other.qexp),
            poch: self.poch.clone(),
        };
        for (l, &e) in &other.poch {
            *out.poch.entry(l.clone()).or_insert(0) += e;
        }
        out.poch.retain(|_, v| *v != 0);
        out
    }

    pub fn inv(&self) -> QExpression {
        QExpression {
            parity: self.parity.clone(),
            qexp: self.qexp.neg(),
            poch: self.poch.iter().map(|(l, &e)| (l.clone(), -e)).collect(),
        }
    }

    pub fn div(&self, other: &QExpression) -> QExpression {
        self.mul(&other.inv())
    }

    /// Numeric value at `a` as `(numerator, denominator)` in `Z[q, 1/q]`.
    pub fn evaluate_numeric(&self, a: &[i64]) -> Result<(QPolynomial, QPolynomial)> {
        check_len(self.n(), a.len())?;
        let exp = self.qexp.substitute(a);
        if !exp.is_integer() {
            return Err(Error::inconsistency(format!("non-integral q-exponent {exp} at {a:?}")));
        }
        let exp = i64::try_from(exp.to_integer()).map_err(|_| Error::inconsistency("exponent overflow"))?;
        let sign = if self.parity.substitute(a) { -1 } else { 1 };
        let mut num = QPolynomial::monomial(BigInt::from(sign), exp);
        let mut den = QPolynomial::one();
        for (l, &e) in &self.poch {
            let m = l.substitute(a);
            if m < 0 {
                return Err(Error::InvalidInput(format!("(q)_{m} at {a:?} from index {l}")));
            }
            let p = q_pochhammer_numeric(1, m as u64).pow(e.unsigned_abs() as u32);
            if e > 0 {
                num = num * p;
            } else {
                den = den * p;
            }
        }
        Ok((num, den))
    }
}

impl fmt::Display for QExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .poch
            .iter()
            .map(|(l, &e)| if e == 1 { format!("(q)_{{{l}}}") } else { format!("(q)_{{{l}}}^{e}") })
            .collect();
        write!(f, "{:?} * q^[{:?}] * {}", self.parity, self.qexp, parts.join(" "))
    }
}

/// Geometric interpolation grids: coordinate `i` uses nodes `q^{c_i}, ..., q^{c_i + d_i}`
/// with `d_i = sigma - a_i + delta_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub n: usize,
    pub shift: Vec<i64>,
    pub degree: Vec<AffineForm>,
}

impl GridSpec {
    pub fn new(delta: &[i64], shift: &[i64]) -> Result<Self> {
        let n = delta.len();
        check_len(n, shift.len())?;
        let sigma = AffineForm::sigma(n);
        let degree: Vec<AffineForm> = (0..n)
            .map(|i| (&sigma - &AffineForm::var(n, i)).plus(delta[i]))
            .collect();
        if n >= 2 {
            if let Some(d) = degree.iter().find(|d| d.generic_sign() != SignClass::Positive) {
                return Err(Error::inconsistency(format!("grid degree {d} is not generically positive")));
            }
        }
        Ok(GridSpec { n, shift: shift.to_vec(), degree })
    }
}

/// `(q^e; q)_f` rewritten as a ratio of `(q)_L` symbols, or zero.
pub fn rewrite_pochhammer(e: &AffineForm, f: &AffineForm) -> Result<Evaluated> {
    let n = e.n();
    match f.generic_sign() {
        SignClass::Zero => return Ok(Evaluated::Value(QExpression::one(n))),
        SignClass::Positive => {}
        _ => return Err(Error::MixedSign(format!("Pochhammer length {f}"))),
    }
    let last = &(e + f).plus(-1);
    let (se, sl) = (e.generic_sign(), last.generic_sign());
    if se == SignClass::Positive {
        // (q)_{e+f-1} / (q)_{e-1}
        let v = QExpression::one(n).with_poch(last.clone(), 1)?.with_poch(e.plus(-1), -1)?;
        return Ok(Evaluated::Value(v));
    }
    if sl == SignClass::Negative {
        // prod (1 - q^{-k}) = (-1)^f q^{f e + f(f-1)/2} (q)_{-e} / (q)_{-e-f}
        let qexp = QuadForm::product(f, e).add(&QuadForm::binom2(f));
        let v = QExpression::one(n)
            .with_sign(&ParityForm::from_affine(f))
            .with_q_power(&qexp)
            .with_poch(-e, 1)?
            .with_poch(&(-e) - f, -1)?;
        return Ok(Evaluated::Value(v));
    }
    let nonpos = |s| matches!(s, SignClass::Negative | SignClass::Zero);
    let nonneg = |s| matches!(s, SignClass::Positive | SignClass::Zero);
    if nonpos(se) && nonneg(sl) {
        return Ok(Evaluated::IsZero);
    }
    Err(Error::MixedSign(format!("window [{e}, {last}]")))
}

/// Value of the cleared polynomial
/// `F = prod_{i<j} (x_i/x_j)_{a_i} (q x_j/x_i)_{a_j} x_j^{a_i} x_i^{a_j}` at `x_i = q^{alpha_i}`.
pub fn evaluate_product_at_point(alpha: &[AffineForm]) -> Result<Evaluated> {
    let n = alpha.len();
    let mut acc = QExpression::one(n);
    for i in 0..n {
        for j in i + 1..n {
            let (ai, aj) = (AffineForm::var(n, i), AffineForm::var(n, j));
            let left = rewrite_pochhammer(&(&alpha[i] - &alpha[j]), &ai)?;
            let right = rewrite_pochhammer(&(&alpha[j] - &alpha[i]).plus(1), &aj)?;
            let (Evaluated::Value(l), Evaluated::Value(r)) = (left, right) else {
                return Ok(Evaluated::IsZero);
            };
            let mono = QuadForm::product(&alpha[j], &ai).add(&QuadForm::product(&alpha[i], &aj));
            acc = acc.mul(&l).mul(&r).with_q_power(&mono);
        }
    }
    Ok(Evaluated::Value(acc))
}

/// `phi_i'(q^{alpha_i})` for the grid `q^{c}, ..., q^{c + d}` of coordinate `i`:
/// `(-1)^j q^{c d + j(j-1)/2 + j(d-j)} (q)_j (q)_{d-j}` with `j = alpha_i - c`.
pub fn phi_prime_at_point(i: usize, alpha_i: &AffineForm, grid: &GridSpec) -> Result<QExpression> {
    let c = grid.shift[i];
    let d = &grid.degree[i];
    let j = alpha_i.plus(-c);
    let rest = d - &j;
    for l in [&j, &rest] {
        if matches!(l.generic_sign(), SignClass::Negative | SignClass::Mixed) {
            return Err(Error::MixedSign(format!("node index {l} outside grid of coordinate {}", i + 1)));
        }
    }
    let qexp = QuadForm::from_affine(&d.scale(c))
        .add(&QuadForm::binom2(&j))
        .add(&QuadForm::product(&j, &rest));
    QExpression::one(grid.n)
        .with_sign(&ParityForm::from_affine(&j))
        .with_q_power(&qexp)
        .with_poch(j, 1)?
        .with_poch(rest, 1)
}

/// `(q)_{a_1+..+a_n} / prod (q)_{a_i}` as a list of factors.
pub fn q_multinomial_symbols(n: usize) -> Vec<PochFactor> {
    std::iter::once(PochFactor { index: AffineForm::sigma(n), exponent: 1 })
        .chain((0..n).map(|i| PochFactor { index: AffineForm::var(n, i), exponent: -1 }))
        .collect()
}

/// Writes `expr` as `R * (q-multinomial)` with `R` a rational function of `q, z`.
pub fn normalize_to_rational(expr: &QExpression, n: usize) -> Result<RationalQZ> {
    check_len(n, expr.n())?;
    let mut rest = expr.clone();
    for PochFactor { index, exponent } in q_multinomial_symbols(n) {
        rest = rest.with_poch(index, -exponent)?;
    }

    // Group by a-coefficient vector; BTreeMap order already clusters them.
    let mut groups: BTreeMap<Vec<i64>, (Vec<i64>, Vec<i64>)> = BTreeMap::new();
    for (l, &e) in &rest.poch {
        let (num, den) = groups.entry(l.coeffs().to_vec()).or_default();
        let side = if e > 0 { num } else { den };
        side.extend(std::iter::repeat_n(l.constant_term(), e.unsigned_abs() as usize));
    }

    let mut numer = ZqPolynomial::one(n);
    let mut atoms: Vec<(Atom, u32)> = Vec::new();
    for (v, (mut num, mut den)) in groups {
        let constant_group = v.iter().all(|&c| c == 0);
        if num.len() != den.len() {
            if !constant_group {
                return Err(Error::inconsistency(format!(
                    "unpaired Pochhammer factors along {v:?}: {} up, {} down",
                    num.len(),
                    den.len()
                )));
            }
            // (q)_0 = 1 pads the shorter side.
            let len = num.len().max(den.len());
            num.resize(len, 0);
            den.resize(len, 0);
        }
        num.sort_unstable();
        den.sort_unstable();
        for (&cn, &cd) in num.iter().zip(&den) {
            // (q)_{L+cn} / (q)_{L+cd} with L = v.a
            if cn > cd {
                for t in cd + 1..=cn {
                    numer = numer.mul_one_minus(&ZqMonomial::new(t, v.clone()));
                }
            } else {
                for t in cn + 1..=cd {
                    let atom = Atom::new(t, v.clone()).ok_or_else(|| {
                        Error::inconsistency(format!("denominator factor 1 - q^{t} z^{v:?} is not an atom"))
                    })?;
                    atoms.push((atom, 1));
                }
            }
        }
    }

    let negative = rest
        .parity
        .reduce()
        .ok_or_else(|| Error::inconsistency("sign depends on the parameters a_i"))?;
    let unit = rest.qexp.finalize()?;
    let unit = ZqMonomial::new(unit.constant_term(), unit.coeffs().to_vec());
    RationalQZ::from_parts(if negative { -1 } else { 1 }, unit, numer, atoms)
}

/// `(q^e; q)_f = prod_{t=0}^{f-1} (1 - q^{e+t})`
pub fn q_pochhammer_numeric(e: i64, f: u64) -> QPolynomial {
    (0..f as i64).map(|t| QPolynomial::one_minus_q_pow(e + t)).product()
}

/// `(q)_{a_1+..+a_n} / prod (q)_{a_i}` as an exact polynomial.
pub fn q_multinomial_numeric(a: &[u64]) -> Result<QPolynomial> {
    let total: u64 = a.iter().sum();
    let den: QPolynomial = a.iter().map(|&x| q_pochhammer_numeric(1, x)).product();
    q_pochhammer_numeric(1, total)
        .div_exact(&den)
        .ok_or_else(|| Error::inconsistency(format!("q-multinomial division inexact for {a:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::equal_as_rational;

    fn af(c: i64, coeffs: &[i64]) -> AffineForm {
        AffineForm::new(c, coeffs.to_vec())
    }

    fn qp(terms: &[(i64, i64)]) -> QPolynomial {
        QPolynomial::from_terms(terms.iter().copied())
    }

    fn value(e: Evaluated) -> QExpression {
        e.into_value().expect("nonzero")
    }

    #[test]
    fn numeric_pochhammer_examples() {
        assert_eq!(q_pochhammer_numeric(1, 2), qp(&[(0, 1), (1, -1)]) * qp(&[(0, 1), (2, -1)]));
        assert_eq!(q_pochhammer_numeric(-1, 1), qp(&[(0, 1), (-1, -1)]));
        assert!(q_pochhammer_numeric(0, 3).is_zero());
        assert!(q_pochhammer_numeric(5, 0).is_one());
    }

    #[test]
    fn numeric_multinomial_examples() {
        assert_eq!(q_multinomial_numeric(&[1, 1]).unwrap(), qp(&[(0, 1), (1, 1)]));
        assert!(q_multinomial_numeric(&[0, 4]).unwrap().is_one());
        let expected = qp(&[(0, 1), (1, 1)]) * qp(&[(0, 1), (1, 1), (2, 1)]);
        assert_eq!(q_multinomial_numeric(&[1, 1, 1]).unwrap(), expected);
    }

    #[test]
    fn rewrite_positive_base() {
        // (q)_{a1}
        let v = value(rewrite_pochhammer(&af(1, &[0]), &af(0, &[1])).unwrap());
        assert_eq!(v.factors(), vec![PochFactor { index: af(0, &[1]), exponent: 1 }]);
        assert!(v.qexp().is_zero());
    }

    #[test]
    fn rewrite_negative_window() {
        let v = value(rewrite_pochhammer(&af(0, &[-1]), &af(0, &[1])).unwrap());
        assert_eq!(v.factors(), vec![PochFactor { index: af(0, &[1]), exponent: 1 }]);
        assert_eq!(v.parity().reduce(), None);
        // -(a1 (a1 + 1))/2 evaluated
        assert_eq!(v.qexp().substitute(&[3]), crate::Rational::from_integer((-6).into()));
        for a1 in 1..=2 {
            let (num, den) = v.evaluate_numeric(&[a1]).unwrap();
            let direct = q_pochhammer_numeric(-a1, a1 as u64);
            assert!(equal_as_rational((&num, &den), (&direct, &QPolynomial::one())));
        }
        let (num, den) = v.evaluate_numeric(&[1]).unwrap();
        assert_eq!(num.div_exact(&den).unwrap(), qp(&[(0, 1), (-1, -1)]));
    }

    #[test]
    fn rewrite_zero_window() {
        assert_eq!(rewrite_pochhammer(&af(0, &[0]), &af(3, &[0])).unwrap(), Evaluated::IsZero);
        assert_eq!(rewrite_pochhammer(&af(-2, &[0]), &af(0, &[1])).unwrap(), Evaluated::IsZero);
    }

    #[test]
    fn rewrite_mixed_is_error() {
        let r = rewrite_pochhammer(&af(0, &[-1, 0]), &af(0, &[0, 1]));
        assert!(matches!(r, Err(Error::MixedSign(_))));
    }

    #[test]
    fn product_at_worked_point() {
        // alpha = (a2 + 1, 0): (-1)^{a2} q^{a2(a2+1)/2} (q)_{a1+a2}
        let alpha = [af(1, &[0, 1]), af(0, &[0, 0])];
        let v = value(evaluate_product_at_point(&alpha).unwrap());
        assert_eq!(v.factors(), vec![PochFactor { index: af(0, &[1, 1]), exponent: 1 }]);
        let expected_q = QuadForm::binom2(&af(1, &[0, 1]));
        assert_eq!(v.qexp(), &expected_q);
        assert_eq!(v.parity(), &ParityForm::from_affine(&af(0, &[0, 1])));
    }

    #[test]
    fn product_trivial_and_vanishing() {
        assert_eq!(evaluate_product_at_point(&[af(0, &[0])]).unwrap(), Evaluated::Value(QExpression::one(1)));
        let alpha = [af(0, &[0, 0]), af(0, &[0, 0])];
        assert_eq!(evaluate_product_at_point(&alpha).unwrap(), Evaluated::IsZero);
    }

    #[test]
    fn phi_prime_examples() {
        // numeric grid d = 2, c = 0, j = 1: -q (1 - q)^2
        let grid = GridSpec { n: 1, shift: vec![0], degree: vec![af(2, &[0])] };
        let v = phi_prime_at_point(0, &af(1, &[0]), &grid).unwrap();
        let (num, den) = v.evaluate_numeric(&[7]).unwrap();
        let direct = qp(&[(1, 1), (0, -1)]) * qp(&[(1, 1), (2, -1)]);
        assert_eq!(num.div_exact(&den).unwrap(), direct);

        let v = phi_prime_at_point(0, &af(0, &[0]), &grid).unwrap();
        assert_eq!(v.factors(), vec![PochFactor { index: af(2, &[0]), exponent: 1 }]);

        // worked n = 2 point, coordinate 1: j = d_1 = a2 + 1
        let grid = GridSpec::new(&[1, -1], &[0, 0]).unwrap();
        let v = phi_prime_at_point(0, &af(1, &[0, 1]), &grid).unwrap();
        assert_eq!(v.factors(), vec![PochFactor { index: af(1, &[0, 1]), exponent: 1 }]);
        assert_eq!(v.parity(), &ParityForm::from_affine(&af(1, &[0, 1])));
        assert_eq!(v.qexp(), &QuadForm::binom2(&af(1, &[0, 1])));
    }

    #[test]
    fn multinomial_symbols() {
        assert_eq!(q_multinomial_symbols(2).len(), 3);
        assert_eq!(q_multinomial_symbols(3).len(), 4);
        let mut e = QExpression::one(1);
        for f in q_multinomial_symbols(1) {
            e = e.with_poch(f.index, f.exponent).unwrap();
        }
        assert!(e.factors().is_empty());
    }

    fn with_multinomial(n: usize, extra: &[(AffineForm, i64)]) -> QExpression {
        let mut e = QExpression::one(n);
        for f in q_multinomial_symbols(n) {
            e = e.with_poch(f.index, f.exponent).unwrap();
        }
        for (l, k) in extra {
            e = e.with_poch(l.clone(), *k).unwrap();
        }
        e
    }

    #[test]
    fn normalize_examples() {
        assert!(normalize_to_rational(&with_multinomial(3, &[]), 3).unwrap().is_one());

        let e = with_multinomial(1, &[(af(1, &[1]), 1), (af(0, &[1]), -1)]);
        let r = normalize_to_rational(&e, 1).unwrap();
        let expected = RationalQZ::from_parts(
            1,
            ZqMonomial::one(1),
            ZqPolynomial::one_minus(&ZqMonomial::new(1, vec![1])),
            [],
        )
        .unwrap();
        assert_eq!(r, expected);
    }

    #[test]
    fn normalize_worked_summand() {
        // F / (phi'_1 phi'_2) = -(q)_{a1+a2} / ((q)_{a2+1} (q)_{a1-1})
        let e = QExpression::one(2)
            .with_sign(&ParityForm::from_affine(&af(1, &[0, 0])))
            .with_poch(af(0, &[1, 1]), 1)
            .unwrap()
            .with_poch(af(1, &[0, 1]), -1)
            .unwrap()
            .with_poch(af(-1, &[1, 0]), -1)
            .unwrap();
        let r = normalize_to_rational(&e, 2).unwrap();
        let expected = RationalQZ::from_parts(
            -1,
            ZqMonomial::one(2),
            ZqPolynomial::one_minus(&ZqMonomial::new(0, vec![1, 0])),
            [(Atom::new(1, vec![0, 1]).unwrap(), 1)],
        )
        .unwrap();
        assert_eq!(r, expected);
    }

    #[test]
    fn normalize_rejects_unpaired_and_sign_dependent() {
        let e = with_multinomial(2, &[(af(0, &[1, 0]), 1)]);
        assert!(matches!(normalize_to_rational(&e, 2), Err(Error::InternalInconsistency(_))));
        let e = with_multinomial(2, &[]).with_sign(&ParityForm::from_affine(&af(0, &[1, 0])));
        assert!(matches!(normalize_to_rational(&e, 2), Err(Error::InternalInconsistency(_))));
        let e = with_multinomial(1, &[]).with_q_power(&QuadForm::binom2(&af(0, &[1])));
        assert!(matches!(normalize_to_rational(&e, 1), Err(Error::InternalInconsistency(_))));
    }
}
