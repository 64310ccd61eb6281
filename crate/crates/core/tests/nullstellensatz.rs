//! Interpolation and grid coefficient extraction over exact rationals.

use num_bigint::BigInt;
use proptest::prelude::*;
use qdyson_core::oracle::{grid_coefficient_oracle, lagrange_interpolate};
use qdyson_core::{Error, LaurentPoly, QPolynomial, Rational};

fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Distinct rationals `p/q` with small numerators and denominators.
fn nodes(len: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::btree_set((-40i64..=40, 1i64..=6), len * 3)
        .prop_map(move |set| {
            let mut seen = std::collections::BTreeSet::new();
            set.into_iter().map(|(p, q)| rat(p, q)).filter(|r| seen.insert(r.clone())).collect::<Vec<_>>()
        })
        .prop_filter("need enough distinct nodes", move |v| v.len() >= len)
        .prop_map(move |mut v| {
            v.truncate(len);
            v
        })
}

#[derive(Clone, Debug)]
struct Case {
    f: LaurentPoly,
    d: Vec<u64>,
    terms: Vec<(Vec<i32>, i64)>,
}

/// A polynomial of total degree at most `sum d` with per-variable degree at most 4.
fn case() -> impl Strategy<Value = Case> {
    (1usize..=3)
        .prop_flat_map(|n| {
            let term = (prop::collection::vec(0i32..=4, n), -9i64..=9);
            (prop::collection::vec(0u64..=4, n), prop::collection::vec(term, 0..8), -9i64..=9)
        })
        .prop_map(|(d, raw, lead)| {
            // keep the target monomial present most of the time
            let target = (d.iter().map(|&x| x as i32).collect::<Vec<_>>(), lead);
            let total: i32 = d.iter().sum::<u64>() as i32;
            let terms: Vec<(Vec<i32>, i64)> = raw
                .into_iter()
                .chain(std::iter::once(target))
                .filter(|(e, _)| e.iter().sum::<i32>() <= total)
                .collect();
            let f = LaurentPoly::from_terms(d.len(), terms.iter().map(|(e, c)| (e.clone(), QPolynomial::constant(*c))))
                .unwrap();
            Case { f, d, terms }
        })
}

fn grids_for(d: Vec<u64>) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    d.into_iter().map(|di| nodes(di as usize + 1)).collect::<Vec<_>>()
}

fn direct(f: &LaurentPoly, d: &[u64]) -> Rational {
    let kappa: Vec<i32> = d.iter().map(|&x| x as i32).collect();
    Rational::from_integer(f.coefficient(&kappa).unwrap().coeff(0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn grid_extraction_matches_coefficient(
        (c, g1, g2) in case().prop_flat_map(|c| {
            let d = c.d.clone();
            (Just(c), grids_for(d.clone()), grids_for(d))
        })
    ) {
        let want = direct(&c.f, &c.d);
        let got = grid_coefficient_oracle(&c.f, &c.d, &g1).unwrap();
        prop_assert_eq!(&got, &want, "terms {:?}", c.terms);
        prop_assert_eq!(grid_coefficient_oracle(&c.f, &c.d, &g2).unwrap(), want);
    }

    #[test]
    fn interpolation_reproduces_polynomial(
        (coeffs, xs) in prop::collection::vec(-20i64..=20, 1..=6)
            .prop_flat_map(|c| { let k = c.len(); (Just(c), nodes(k)) })
    ) {
        let values: Vec<Rational> = xs
            .iter()
            .map(|x| coeffs.iter().rev().fold(rat(0, 1), |acc, &c| acc * x + rat(c, 1)))
            .collect();
        let got = lagrange_interpolate(&xs, &values).unwrap();
        let want: Vec<Rational> = coeffs.iter().map(|&c| rat(c, 1)).collect();
        prop_assert_eq!(got, want);
    }
}

#[test]
fn degree_deficient_monomials_give_zero() {
    let grid: Vec<Rational> = [-3, 1, 4, 7].iter().map(|&x| rat(x, 2)).collect();
    for k in 0..3 {
        let f = LaurentPoly::monomial(QPolynomial::constant(5), vec![k]);
        assert_eq!(grid_coefficient_oracle(&f, &[3], std::slice::from_ref(&grid)).unwrap(), rat(0, 1));
    }
    let f = LaurentPoly::from_terms(2, [(vec![1, 0], QPolynomial::constant(1)), (vec![0, 1], QPolynomial::constant(1))])
        .unwrap();
    let g = vec![rat(0, 1), rat(1, 1)];
    assert_eq!(grid_coefficient_oracle(&f, &[1, 1], &[g.clone(), g]).unwrap(), rat(0, 1));
}

#[test]
fn grid_preconditions() {
    let f = LaurentPoly::monomial(QPolynomial::constant(1), vec![2]);
    let g = vec![rat(0, 1), rat(1, 1), rat(1, 1)];
    assert!(matches!(grid_coefficient_oracle(&f, &[2], &[g]), Err(Error::DuplicateNode(0))));
    let short = vec![rat(0, 1), rat(1, 1)];
    assert!(matches!(grid_coefficient_oracle(&f, &[2], std::slice::from_ref(&short)), Err(Error::InvalidInput(_))));
    assert!(matches!(grid_coefficient_oracle(&f, &[1], std::slice::from_ref(&short)), Err(Error::InvalidInput(_))));
    let with_q = LaurentPoly::monomial(QPolynomial::monomial(BigInt::from(1), 1), vec![1]);
    assert!(matches!(grid_coefficient_oracle(&with_q, &[1], &[short]), Err(Error::InvalidInput(_))));
    assert!(matches!(lagrange_interpolate(&[rat(1, 1), rat(1, 1)], &[rat(0, 1), rat(1, 1)]), Err(Error::DuplicateNode(_))));
}
