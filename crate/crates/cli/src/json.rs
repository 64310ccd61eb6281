//! JSON documents. Integers of unbounded size are written as plain JSON numbers.

use std::str::FromStr;

use num_bigint::BigInt;
use qdyson_core::{
    Atom, AffineForm, CombinedResult, EvaluationPoint, QPolynomial, RationalQZ, SplitResult, SweepSummary,
    VerificationReport, ZqMonomial, ZqPolynomial,
};
use serde::{Deserialize, Serialize};
use serde_json::Number;

use crate::CliError;

fn number(c: &BigInt) -> Number {
    Number::from_str(&c.to_string()).expect("integers are valid JSON numbers")
}

fn bigint(n: &Number) -> Result<BigInt, CliError> {
    BigInt::from_str(&n.to_string()).map_err(|_| CliError::Usage(format!("coefficient {n} is not an integer")))
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct MonomialJson {
    pub q: i64,
    pub z: Vec<i64>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct TermJson {
    pub q: i64,
    pub z: Vec<i64>,
    pub c: Number,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct AtomJson {
    pub q: i64,
    pub z: Vec<i64>,
    pub mult: u32,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct MetaJson {
    pub delta: Vec<i64>,
    pub shift: Vec<i64>,
    pub points: usize,
}

/// `sign * unit * numer / prod(1 - atom)^mult`
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct FormulaJson {
    pub unit: MonomialJson,
    pub sign: i8,
    pub numer: Vec<TermJson>,
    pub denom: Vec<AtomJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<MetaJson>,
}

impl FormulaJson {
    pub fn new(r: &RationalQZ, meta: Option<MetaJson>) -> Self {
        FormulaJson {
            unit: MonomialJson { q: r.unit().q, z: r.unit().z.clone() },
            sign: r.sign(),
            numer: r.numer().terms().map(|(m, c)| TermJson { q: m.q, z: m.z.clone(), c: number(c) }).collect(),
            denom: r
                .denom()
                .iter()
                .map(|(a, &k)| AtomJson { q: a.qexp(), z: a.zexp().to_vec(), mult: k })
                .collect(),
            meta,
        }
    }

    pub fn from_combined(res: &CombinedResult) -> Self {
        let meta = MetaJson { delta: res.delta.clone(), shift: res.shift_used.0.clone(), points: res.point_count };
        Self::new(&res.r, Some(meta))
    }

    pub fn to_rational(&self) -> Result<RationalQZ, CliError> {
        let n = self.unit.z.len();
        let bad = |what: &str| CliError::Usage(format!("malformed formula: {what}"));
        if self.sign != 1 && self.sign != -1 {
            return Err(bad("sign must be 1 or -1"));
        }
        let mut terms = Vec::with_capacity(self.numer.len());
        for t in &self.numer {
            terms.push((ZqMonomial::new(t.q, t.z.clone()), bigint(&t.c)?));
        }
        let numer = ZqPolynomial::from_terms(n, terms)?;
        let mut atoms = Vec::with_capacity(self.denom.len());
        for a in &self.denom {
            if a.z.len() != n || a.mult == 0 {
                return Err(bad("denominator factor"));
            }
            atoms.push((Atom::new(a.q, a.z.clone()).ok_or_else(|| bad("denominator factor"))?, a.mult));
        }
        let unit = ZqMonomial::new(self.unit.q, self.unit.z.clone());
        Ok(RationalQZ::from_parts(self.sign, unit, numer, atoms)?)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct AffineJson {
    pub c0: i64,
    pub a: Vec<i64>,
}

impl From<&AffineForm> for AffineJson {
    fn from(l: &AffineForm) -> Self {
        AffineJson { c0: l.constant_term(), a: l.coeffs().to_vec() }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct PointJson {
    /// One-based permutation.
    pub pi: Vec<usize>,
    pub m: Vec<u64>,
    pub alpha: Vec<AffineJson>,
}

impl From<&EvaluationPoint> for PointJson {
    fn from(p: &EvaluationPoint) -> Self {
        PointJson {
            pi: p.perm.image().iter().map(|i| i + 1).collect(),
            m: p.m.clone(),
            alpha: p.alpha.iter().map(AffineJson::from).collect(),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct SplitTermJson {
    pub point: PointJson,
    pub formula: FormulaJson,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct SplitJson {
    pub terms: Vec<SplitTermJson>,
    pub meta: MetaJson,
}

impl From<&SplitResult> for SplitJson {
    fn from(s: &SplitResult) -> Self {
        SplitJson {
            terms: s
                .terms
                .iter()
                .map(|(p, r)| SplitTermJson { point: p.into(), formula: FormulaJson::new(r, None) })
                .collect(),
            meta: MetaJson { delta: s.delta.clone(), shift: s.shift_used.0.clone(), points: s.terms.len() },
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct QTermJson {
    pub q: i64,
    pub c: Number,
}

pub fn qpoly(p: &QPolynomial) -> Vec<QTermJson> {
    p.terms().map(|(e, c)| QTermJson { q: e, c: number(c) }).collect()
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ClearedJson {
    pub numer: Vec<QTermJson>,
    pub denom: Vec<QTermJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ReportJson {
    pub delta: Vec<i64>,
    pub a: Vec<u64>,
    pub policy: String,
    pub shift: Option<Vec<i64>>,
    #[serde(rename = "match")]
    pub matched: bool,
    pub engine: Option<ClearedJson>,
    pub oracle: Vec<QTermJson>,
    pub error: Option<String>,
    pub elapsed_ms: f64,
}

impl From<&VerificationReport> for ReportJson {
    fn from(r: &VerificationReport) -> Self {
        ReportJson {
            delta: r.delta.clone(),
            a: r.a.clone(),
            policy: crate::policy_label(&r.policy),
            shift: r.shift.as_ref().map(|s| s.0.clone()),
            matched: r.matched,
            engine: r.engine.as_ref().map(|(n, d)| ClearedJson { numer: qpoly(n), denom: qpoly(d) }),
            oracle: qpoly(&r.oracle),
            error: r.error.clone(),
            elapsed_ms: r.elapsed.as_secs_f64() * 1e3,
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct SummaryJson {
    pub total: usize,
    pub matched: usize,
    pub mismatches: usize,
    pub internal_errors: usize,
    pub other_errors: usize,
}

impl From<&SweepSummary> for SummaryJson {
    fn from(s: &SweepSummary) -> Self {
        SummaryJson {
            total: s.total,
            matched: s.matched,
            mismatches: s.mismatches,
            internal_errors: s.internal_errors,
            other_errors: s.other_errors,
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct SweepJson {
    pub summary: SummaryJson,
    pub reports: Vec<ReportJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct BestShiftJson {
    pub delta: Vec<i64>,
    pub shift: Vec<i64>,
    pub size: u64,
    pub zero_size: u64,
}

pub fn to_string<T: Serialize>(doc: &T) -> String {
    serde_json::to_string(doc).expect("documents serialize")
}

/// Reads a formula document and writes it back out.
pub fn reemit_formula(text: &str) -> Result<String, CliError> {
    let doc: FormulaJson =
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid formula JSON: {e}")))?;
    Ok(to_string(&doc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked() -> RationalQZ {
        RationalQZ::parse_factored(2, "z1 - 1", &["1 - q*z2"]).unwrap()
    }

    #[test]
    fn one_matches_documented_shape() {
        let s = to_string(&FormulaJson::new(&RationalQZ::one(2), None));
        assert_eq!(s, r#"{"unit":{"q":0,"z":[0,0]},"sign":1,"numer":[{"q":0,"z":[0,0],"c":1}],"denom":[]}"#);
    }

    #[test]
    fn worked_denominator_and_zero() {
        let doc = FormulaJson::new(&worked(), None);
        assert_eq!(to_string(&doc.denom), r#"[{"q":1,"z":[0,1],"mult":1}]"#);
        assert_eq!(doc.sign, -1);
        assert!(FormulaJson::new(&RationalQZ::zero(3), None).numer.is_empty());
    }

    #[test]
    fn big_coefficients_stay_exact() {
        let c: BigInt = "-123456789012345678901234567890".parse().unwrap();
        let p = ZqPolynomial::from_terms(1, [(ZqMonomial::one(1), c.clone()), (ZqMonomial::new(1, vec![0]), 1.into())])
            .unwrap();
        let r = RationalQZ::from_parts(1, ZqMonomial::one(1), p, []).unwrap();
        let text = to_string(&FormulaJson::new(&r, None));
        assert!(text.contains("123456789012345678901234567890"));
        let back: FormulaJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_rational().unwrap(), r);
        assert_eq!(reemit_formula(&text).unwrap(), text);
    }

    #[test]
    fn rejects_malformed() {
        let mut doc = FormulaJson::new(&worked(), None);
        doc.sign = 2;
        assert!(doc.to_rational().is_err());
        let mut doc = FormulaJson::new(&worked(), None);
        doc.denom[0].z = vec![0, -1];
        assert!(doc.to_rational().is_err());
        assert!(reemit_formula("{\"unit\":1}").is_err());
    }
}
