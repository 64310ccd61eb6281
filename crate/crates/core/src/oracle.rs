//! Independent checks. The q-Dyson product is expanded directly, coefficients are read
//! off, and the engine's answer is compared against them as exact polynomials in `q`.
//! Also numeric Lagrange interpolation and grid coefficient extraction over rationals.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::engine::{self, CoefficientQuery, ShiftPolicy};
use crate::error::{Error, Result, check_len};
use crate::exactalg::{LaurentPoly, QPolynomial, Rational, equal_as_rational};
use crate::latticepoints::ShiftVector;
use crate::par::{self, Execution};
use crate::qpochhammer::q_multinomial_numeric;

/// `prod_{i<j} (x_i/x_j)_{a_i} (q x_j/x_i)_{a_j}`, fully expanded.
pub fn expand_qdyson_product(a: &[u64]) -> LaurentPoly {
    let n = a.len();
    let mut p = LaurentPoly::one(n);
    for (i, j) in (0..n).tuple_combinations() {
        let mut ratio = vec![0i32; n];
        ratio[i] = 1;
        ratio[j] = -1;
        let inverse: Vec<i32> = ratio.iter().map(|e| -e).collect();
        for t in 0..a[i] as i64 {
            p = p.mul_one_minus(t, &ratio).expect("lengths agree");
        }
        for t in 0..a[j] as i64 {
            p = p.mul_one_minus(t + 1, &inverse).expect("lengths agree");
        }
    }
    p
}

/// Coefficient of `prod x_i^{delta_i}` in the expanded product.
pub fn dyson_coefficient(a: &[u64], delta: &[i64]) -> Result<QPolynomial> {
    check_len(a.len(), delta.len())?;
    coefficient_of(&expand_qdyson_product(a), delta)
}

fn coefficient_of(expansion: &LaurentPoly, delta: &[i64]) -> Result<QPolynomial> {
    let kappa: Option<Vec<i32>> = delta.iter().map(|&d| i32::try_from(d).ok()).collect();
    match kappa {
        Some(k) => expansion.coefficient(&k),
        None => Ok(QPolynomial::zero()),
    }
}

/// Outcome of comparing the engine against the direct expansion at one `a`.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub delta: Vec<i64>,
    pub a: Vec<u64>,
    pub policy: ShiftPolicy,
    pub shift: Option<ShiftVector>,
    pub matched: bool,
    /// `R(q, q^a) * multinomial` as (numerator, denominator).
    pub engine: Option<(QPolynomial, QPolynomial)>,
    pub oracle: QPolynomial,
    pub error: Option<String>,
    pub internal_error: bool,
    pub elapsed: Duration,
}

impl VerificationReport {
    fn sort_key(&self) -> (usize, &[i64], &[u64]) {
        (self.a.len(), &self.delta, &self.a)
    }
}

fn compare(
    delta: &[i64],
    a: &[u64],
    policy: &ShiftPolicy,
    combined: &Result<engine::CombinedResult>,
    oracle: QPolynomial,
    started: Instant,
) -> VerificationReport {
    let mut report = VerificationReport {
        delta: delta.to_vec(),
        a: a.to_vec(),
        policy: policy.clone(),
        shift: None,
        matched: false,
        engine: None,
        oracle,
        error: None,
        internal_error: false,
        elapsed: Duration::ZERO,
    };
    let cleared = combined.as_ref().map_err(Clone::clone).and_then(|res| {
        report.shift = Some(res.shift_used.clone());
        let ai: Vec<i64> = a.iter().map(|&x| x as i64).collect();
        let (num, den) = res.r.substitute(&ai)?;
        Ok((num * q_multinomial_numeric(a)?, den))
    });
    match cleared {
        Ok((num, den)) => {
            report.matched = equal_as_rational((&num, &den), (&report.oracle, &QPolynomial::one()));
            report.engine = Some((num, den));
        }
        Err(e) => {
            report.internal_error = e.is_internal();
            report.error = Some(e.to_string());
        }
    }
    report.elapsed = started.elapsed();
    report
}

fn check_positive(a: &[u64]) -> Result<()> {
    if a.contains(&0) {
        return Err(Error::InvalidInput("engine specializations need every a_i >= 1".into()));
    }
    Ok(())
}

/// Runs the engine on `delta` and checks it against the expansion at `a`.
pub fn verify_query(delta: &[i64], a: &[u64], policy: ShiftPolicy) -> Result<VerificationReport> {
    check_len(delta.len(), a.len())?;
    check_positive(a)?;
    let started = Instant::now();
    let combined = engine::coefficient_combined(&CoefficientQuery::new(delta).with_shift(policy.clone()));
    let oracle = dyson_coefficient(a, delta)?;
    Ok(compare(delta, a, &policy, &combined, oracle, started))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub a_max: u64,
    /// Largest `sum |delta_i|` visited.
    pub delta_budget: u64,
    pub policies: Vec<ShiftPolicy>,
    pub include_inhomogeneous: bool,
    /// Worker threads; 0 picks the rayon default.
    pub jobs: usize,
    pub execution: Execution,
    /// Lifts the desk-scale limits `n <= 4`, `a_max <= 3`.
    pub unbounded: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            n_min: 2,
            n_max: 3,
            a_max: 2,
            delta_budget: 2,
            policies: vec![ShiftPolicy::Best],
            include_inhomogeneous: false,
            jobs: 0,
            execution: Execution::default(),
            unbounded: false,
        }
    }
}

impl SweepConfig {
    fn validate(&self) -> Result<()> {
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(Error::InvalidInput(format!("bad n range {}..={}", self.n_min, self.n_max)));
        }
        if self.a_max == 0 {
            return Err(Error::InvalidInput("a_max must be at least 1".into()));
        }
        if self.policies.is_empty() {
            return Err(Error::InvalidInput("no shift policy given".into()));
        }
        if !self.unbounded && (self.n_max > 4 || self.a_max > 3) {
            return Err(Error::InvalidInput("sweep bounds exceed n <= 4, a_max <= 3".into()));
        }
        Ok(())
    }

    /// Every exponent vector visited for `n` variables, in lexicographic order.
    pub fn deltas(&self, n: usize) -> Vec<Vec<i64>> {
        let b = self.delta_budget as i64;
        (0..n)
            .map(|_| -b..=b)
            .multi_cartesian_product()
            .filter(|d| d.iter().map(|x| x.abs()).sum::<i64>() <= b)
            .filter(|d| self.include_inhomogeneous || d.iter().sum::<i64>() == 0)
            .collect()
    }
}

/// Totals over a sweep.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub total: usize,
    pub matched: usize,
    pub mismatches: usize,
    pub internal_errors: usize,
    pub other_errors: usize,
}

impl SweepSummary {
    pub fn of(reports: &[VerificationReport]) -> Self {
        let mut s = SweepSummary { total: reports.len(), ..Default::default() };
        for r in reports {
            match (&r.error, r.internal_error) {
                (None, _) if r.matched => s.matched += 1,
                (None, _) => s.mismatches += 1,
                (Some(_), true) => s.internal_errors += 1,
                (Some(_), false) => s.other_errors += 1,
            }
        }
        s
    }

    pub fn is_success(&self) -> bool {
        self.matched == self.total
    }
}

/// Checks every `(n, a, delta)` in range under each policy. `R` is computed once per
/// `(delta, policy)` and each `a` is expanded once. Reports come back sorted by
/// `(n, delta, a)` and then by policy order, whatever the execution mode.
pub fn sweep(config: &SweepConfig) -> Result<Vec<VerificationReport>> {
    config.validate()?;
    let exec = config.execution;
    par::with_jobs(exec, config.jobs, || {
        let mut reports = Vec::new();
        for n in config.n_min..=config.n_max {
            let avecs: Vec<Vec<u64>> = (0..n).map(|_| 1..=config.a_max).multi_cartesian_product().collect();
            let expansions = par::map(exec, &avecs, |a| expand_qdyson_product(a));
            let queries: Vec<(Vec<i64>, usize)> = config
                .deltas(n)
                .into_iter()
                .cartesian_product(0..config.policies.len())
                .collect();
            // Inner loops stay sequential so the two levels do not oversubscribe.
            let engine_runs = par::map(exec, &queries, |(delta, p)| {
                let started = Instant::now();
                let q = CoefficientQuery::new(delta.clone()).with_shift(config.policies[*p].clone());
                (engine::coefficient_combined_with(&q, Execution::Sequential), started.elapsed())
            });
            let jobs: Vec<(usize, usize)> = (0..queries.len()).cartesian_product(0..avecs.len()).collect();
            let mut batch = par::map(exec, &jobs, |&(qi, ai)| {
                let (delta, p) = &queries[qi];
                let (combined, engine_time) = &engine_runs[qi];
                let started = Instant::now();
                let oracle = coefficient_of(&expansions[ai], delta).unwrap_or_default();
                let mut r = compare(delta, &avecs[ai], &config.policies[*p], combined, oracle, started);
                r.elapsed += *engine_time;
                (*p, r)
            });
            batch.sort_by(|(p1, r1), (p2, r2)| r1.sort_key().cmp(&r2.sort_key()).then(p1.cmp(p2)));
            reports.extend(batch.into_iter().map(|(_, r)| r));
        }
        Ok(reports)
    })
}

fn check_nodes(var: usize, nodes: &[Rational]) -> Result<()> {
    if nodes.iter().duplicates().next().is_some() {
        return Err(Error::DuplicateNode(var));
    }
    Ok(())
}

/// `phi'(u) = prod_{b != u} (u - b)` for each node `u`.
fn phi_prime_values(nodes: &[Rational]) -> Vec<Rational> {
    nodes
        .iter()
        .enumerate()
        .map(|(k, u)| {
            nodes.iter().enumerate().filter(|&(l, _)| l != k).map(|(_, b)| u - b).product()
        })
        .collect()
}

/// Coefficients (lowest degree first) of the unique polynomial of degree `< |nodes|`
/// through the given values.
pub fn lagrange_interpolate(nodes: &[Rational], values: &[Rational]) -> Result<Vec<Rational>> {
    check_len(nodes.len(), values.len())?;
    check_nodes(0, nodes)?;
    let weights = phi_prime_values(nodes);
    let mut out = vec![Rational::zero(); nodes.len()];
    for (k, (yk, wk)) in values.iter().zip(&weights).enumerate() {
        // basis numerator prod_{l != k} (x - x_l), built up one linear factor at a time
        let mut basis = vec![Rational::one()];
        for (l, xl) in nodes.iter().enumerate() {
            if l == k {
                continue;
            }
            let mut next = vec![Rational::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * xl;
            }
            basis = next;
        }
        let scale = yk / wk;
        for (o, c) in out.iter_mut().zip(&basis) {
            *o += c * &scale;
        }
    }
    Ok(out)
}

fn rational_coefficients(f: &LaurentPoly) -> Result<BTreeMap<Vec<i32>, Rational>> {
    f.terms()
        .map(|(e, c)| {
            if e.iter().any(|&x| x < 0) {
                return Err(Error::InvalidInput("grid extraction needs nonnegative exponents".into()));
            }
            if c.terms().any(|(k, _)| k != 0) {
                return Err(Error::InvalidInput("grid extraction needs q-free coefficients".into()));
            }
            Ok((e.clone(), Rational::from_integer(c.coeff(0))))
        })
        .collect()
}

/// The coefficient of `prod x_i^{d_i}` in `F`, recovered from the values of `F` on the
/// grid `A_1 x .. x A_n` as `sum F(u) / prod phi_i'(u_i)`. Valid when `deg F <= sum d_i`.
pub fn grid_coefficient_oracle(f: &LaurentPoly, d: &[u64], grids: &[Vec<Rational>]) -> Result<Rational> {
    let n = f.nvars();
    check_len(n, d.len())?;
    check_len(n, grids.len())?;
    for (i, (nodes, &di)) in grids.iter().zip(d).enumerate() {
        if nodes.len() as u64 != di + 1 {
            return Err(Error::InvalidInput(format!("grid {} has {} nodes, need {}", i + 1, nodes.len(), di + 1)));
        }
        check_nodes(i, nodes)?;
    }
    let coeffs = rational_coefficients(f)?;
    let total: u64 = d.iter().sum();
    if f.total_degree().is_some_and(|deg| deg > total as i64) {
        return Err(Error::InvalidInput("total degree exceeds the grid size".into()));
    }
    let weights: Vec<Vec<Rational>> = grids.iter().map(|g| phi_prime_values(g)).collect();
    let mut sum = Rational::zero();
    for idx in grids.iter().map(|g| 0..g.len()).multi_cartesian_product() {
        let value: Rational = coeffs
            .iter()
            .map(|(e, c)| {
                e.iter().zip(&idx).enumerate().fold(c.clone(), |acc, (i, (&k, &j))| {
                    acc * num_traits::pow(grids[i][j].clone(), k as usize)
                })
            })
            .sum();
        let weight: Rational = idx.iter().enumerate().map(|(i, &j)| weights[i][j].clone()).product();
        sum += value / weight;
    }
    Ok(sum)
}
