//! End-to-end pipeline: sum the interpolation formula over the contributing grid
//! points and express each contribution, and their sum, as a rational function of
//! `q, z_1..z_n` times the q-multinomial coefficient.

use crate::error::{Error, Result};
use crate::exactalg::RationalQZ;
use crate::latticepoints::{self, EvaluationPoint, ShiftVector};
use crate::par::{self, Execution};
use crate::qpochhammer::{self, Evaluated, GridSpec};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum ShiftPolicy {
    Zero,
    Given(ShiftVector),
    /// Minimize the number of evaluation points within the default search radius.
    #[default]
    Best,
    BestWithin(i64),
}

/// Which coefficient `prod x_i^{delta_i}` to compute, and how to place the grids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientQuery {
    pub delta: Vec<i64>,
    pub shift: ShiftPolicy,
}

impl CoefficientQuery {
    pub fn new(delta: impl Into<Vec<i64>>) -> Self {
        CoefficientQuery { delta: delta.into(), shift: ShiftPolicy::default() }
    }

    pub fn with_shift(mut self, shift: ShiftPolicy) -> Self {
        self.shift = shift;
        self
    }

    pub fn n(&self) -> usize {
        self.delta.len()
    }

    /// The product is homogeneous of degree 0, so other coefficients vanish.
    pub fn is_homogeneous(&self) -> bool {
        self.delta.iter().sum::<i64>() == 0
    }

    fn validate(&self) -> Result<()> {
        if self.delta.is_empty() {
            return Err(Error::InvalidInput("exponent vector must be nonempty".into()));
        }
        if let ShiftPolicy::Given(s) = &self.shift {
            crate::error::check_len(self.n(), s.0.len())?;
        }
        Ok(())
    }

    pub fn resolve_shift(&self, exec: Execution) -> Result<ShiftVector> {
        self.validate()?;
        if !self.is_homogeneous() {
            return Ok(ShiftVector::zero(self.n()));
        }
        match &self.shift {
            ShiftPolicy::Zero => Ok(ShiftVector::zero(self.n())),
            ShiftPolicy::Given(s) => Ok(s.clone()),
            ShiftPolicy::Best => {
                let r = latticepoints::default_radius(&self.delta);
                Ok(latticepoints::best_shift_with(&self.delta, r, exec)?.0)
            }
            ShiftPolicy::BestWithin(r) => Ok(latticepoints::best_shift_with(&self.delta, *r, exec)?.0),
        }
    }
}

/// One rational summand per evaluation point.
#[derive(Clone, Debug)]
pub struct SplitResult {
    pub delta: Vec<i64>,
    pub terms: Vec<(EvaluationPoint, RationalQZ)>,
    pub shift_used: ShiftVector,
}

impl SplitResult {
    pub fn combine(&self) -> Result<RationalQZ> {
        combine_sum(self.delta.len(), self.terms.iter().map(|(_, r)| r))
    }
}

#[derive(Clone, Debug)]
pub struct CombinedResult {
    pub delta: Vec<i64>,
    pub r: RationalQZ,
    pub shift_used: ShiftVector,
    pub point_count: usize,
}

/// `F(q^alpha) / prod_i phi_i'(q^{alpha_i})`, divided by the q-multinomial.
pub fn point_summand(point: &EvaluationPoint, grid: &GridSpec) -> Result<RationalQZ> {
    let n = grid.n;
    let value = match qpochhammer::evaluate_product_at_point(&point.alpha)? {
        Evaluated::Value(v) => v,
        Evaluated::IsZero => {
            return Err(Error::inconsistency(format!("cleared product vanishes at enumerated point {}", point.perm)));
        }
    };
    let mut weight = qpochhammer::QExpression::one(n);
    for (i, alpha_i) in point.alpha.iter().enumerate() {
        weight = weight.mul(&qpochhammer::phi_prime_at_point(i, alpha_i, grid)?);
    }
    qpochhammer::normalize_to_rational(&value.div(&weight), n)
}

pub fn coefficient_split(query: &CoefficientQuery) -> Result<SplitResult> {
    coefficient_split_with(query, Execution::default())
}

pub fn coefficient_split_with(query: &CoefficientQuery, exec: Execution) -> Result<SplitResult> {
    let shift = query.resolve_shift(exec)?;
    if !query.is_homogeneous() {
        return Ok(SplitResult { delta: query.delta.clone(), terms: Vec::new(), shift_used: shift });
    }
    let set = latticepoints::enumerate_evaluation_set(&query.delta, &shift)?;
    let grid = &set.grid;
    let terms = par::try_map(exec, &set.points, |pt| Ok((pt.clone(), point_summand(pt, grid)?)))?;
    Ok(SplitResult { delta: query.delta.clone(), terms, shift_used: shift })
}

pub fn coefficient_combined(query: &CoefficientQuery) -> Result<CombinedResult> {
    coefficient_combined_with(query, Execution::default())
}

pub fn coefficient_combined_with(query: &CoefficientQuery, exec: Execution) -> Result<CombinedResult> {
    let split = coefficient_split_with(query, exec)?;
    Ok(CombinedResult {
        r: split.combine()?,
        point_count: split.terms.len(),
        delta: split.delta,
        shift_used: split.shift_used,
    })
}

/// Brings the summands over the least common atom denominator and cancels what divides.
pub fn combine_sum<'a>(n: usize, terms: impl IntoIterator<Item = &'a RationalQZ>) -> Result<RationalQZ> {
    RationalQZ::sum(n, terms)
}

/// The constant term: asserts `R = 1` with a single evaluation point.
pub fn constant_term_identity(n: usize) -> Result<CombinedResult> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one variable".into()));
    }
    let res = coefficient_combined(&CoefficientQuery::new(vec![0; n]).with_shift(ShiftPolicy::Zero))?;
    if !res.r.is_one() || res.point_count != 1 {
        return Err(Error::inconsistency(format!(
            "constant term gave R = {} over {} points",
            res.r, res.point_count
        )));
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{Atom, ZqMonomial, ZqPolynomial};

    fn worked() -> RationalQZ {
        RationalQZ::from_parts(
            -1,
            ZqMonomial::one(2),
            ZqPolynomial::one_minus(&ZqMonomial::new(0, vec![1, 0])),
            [(Atom::new(1, vec![0, 1]).unwrap(), 1)],
        )
        .unwrap()
    }

    #[test]
    fn constant_term_is_one() {
        for n in 1..=5 {
            let r = constant_term_identity(n).unwrap();
            assert!(r.r.is_one());
            assert_eq!(r.point_count, 1);
        }
    }

    #[test]
    fn two_variable_closed_form() {
        for policy in [ShiftPolicy::Zero, ShiftPolicy::Best] {
            let res = coefficient_combined(&CoefficientQuery::new(vec![1, -1]).with_shift(policy)).unwrap();
            assert!(res.r.equivalent(&worked()), "got {}", res.r);
        }
        let split = coefficient_split(&CoefficientQuery::new(vec![1, -1]).with_shift(ShiftPolicy::Zero)).unwrap();
        assert_eq!(split.terms.len(), 1);
        assert_eq!(split.terms[0].1, worked());
    }

    #[test]
    fn inhomogeneous_query_is_zero() {
        let res = coefficient_combined(&CoefficientQuery::new(vec![1, 0, 0])).unwrap();
        assert!(res.r.is_zero());
        assert_eq!(res.point_count, 0);
    }

    #[test]
    fn empty_query_is_rejected() {
        assert!(matches!(coefficient_combined(&CoefficientQuery::new(vec![])), Err(Error::InvalidInput(_))));
        let q = CoefficientQuery::new(vec![1, -1]).with_shift(ShiftPolicy::Given(ShiftVector(vec![0])));
        assert!(matches!(coefficient_combined(&q), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn execution_modes_agree() {
        let q = CoefficientQuery::new(vec![2, -1, 0, -1]).with_shift(ShiftPolicy::Zero);
        let a = coefficient_split_with(&q, Execution::Sequential).unwrap();
        let b = coefficient_split_with(&q, Execution::Parallel).unwrap();
        assert_eq!(a.terms, b.terms);
    }
}
