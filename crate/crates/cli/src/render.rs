//! Plain-text and LaTeX rendering.

use num_bigint::{BigInt, Sign};
use qdyson_core::{AffineForm, QPolynomial, RationalQZ, ZqMonomial, ZqPolynomial};

/// `qMultinomial(a1,..,an)`
pub fn multinomial_text(n: usize) -> String {
    format!("qMultinomial({})", (1..=n).map(|i| format!("a{i}")).collect::<Vec<_>>().join(","))
}

/// The coefficient as `R · qMultinomial(..)`.
pub fn formula_text(r: &RationalQZ) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let head = if r.is_one() { "1".to_string() } else { format!("({r})") };
    format!("{head} · {}", multinomial_text(r.n()))
}

pub fn tuple<T: std::fmt::Display>(xs: &[T]) -> String {
    format!("({})", xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

/// `x1^2*x2^-2`, or `1` for the zero vector.
pub fn monomial_x_text(delta: &[i64]) -> String {
    let parts: Vec<String> = delta
        .iter()
        .enumerate()
        .filter(|(_, &d)| d != 0)
        .map(|(i, &d)| if d == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, d) })
        .collect();
    if parts.is_empty() { "1".into() } else { parts.join("*") }
}

fn latex_power(base: &str, e: i64) -> String {
    if e == 1 { base.to_string() } else { format!("{base}^{{{e}}}") }
}

pub fn monomial_latex(m: &ZqMonomial) -> String {
    let mut parts = Vec::new();
    if m.q != 0 {
        parts.push(latex_power("q", m.q));
    }
    for (i, &e) in m.z.iter().enumerate() {
        if e != 0 {
            parts.push(latex_power(&format!("z_{{{}}}", i + 1), e));
        }
    }
    parts.join(" ")
}

fn signed_terms_latex<'a>(terms: impl Iterator<Item = (String, &'a BigInt)>) -> String {
    let mut out = String::new();
    for (k, (m, c)) in terms.enumerate() {
        let neg = c.sign() == Sign::Minus;
        out.push_str(match (k, neg) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        let abs = if neg { -c } else { c.clone() };
        match (m.is_empty(), abs == BigInt::from(1)) {
            (true, _) => out.push_str(&abs.to_string()),
            (false, true) => out.push_str(&m),
            (false, false) => out.push_str(&format!("{abs} {m}")),
        }
    }
    if out.is_empty() { "0".into() } else { out }
}

pub fn zqpoly_latex(p: &ZqPolynomial) -> String {
    signed_terms_latex(p.terms().map(|(m, c)| (monomial_latex(m), c)))
}

pub fn qpoly_latex(p: &QPolynomial) -> String {
    signed_terms_latex(p.terms().map(|(e, c)| (if e == 0 { String::new() } else { latex_power("q", e) }, c)))
}

pub fn rational_latex(r: &RationalQZ) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let mut top = Vec::new();
    let constant = r.numer().len() == 1 && r.numer().terms().all(|(m, _)| m.is_one());
    if constant && !r.numer().is_one() {
        top.push(zqpoly_latex(r.numer()));
    }
    if !r.unit().is_one() {
        top.push(monomial_latex(r.unit()));
    }
    if !constant {
        let body = zqpoly_latex(r.numer());
        top.push(if r.numer().len() > 1 && (!top.is_empty() || !r.denom().is_empty() || r.sign() < 0) {
            format!("\\left({body}\\right)")
        } else {
            body
        });
    }
    let top = if top.is_empty() { "1".to_string() } else { top.join(" ") };
    let sign = if r.sign() < 0 { "-" } else { "" };
    if r.denom().is_empty() {
        return format!("{sign}{top}");
    }
    let bottom: Vec<String> = r
        .denom()
        .iter()
        .map(|(a, &k)| {
            let f = format!("\\left(1 - {}\\right)", monomial_latex(a.monomial()));
            if k == 1 { f } else { format!("{f}^{{{k}}}") }
        })
        .collect();
    format!("{sign}\\frac{{{top}}}{{{}}}", bottom.join(" "))
}

pub fn multinomial_latex(n: usize) -> String {
    let sum: Vec<String> = (1..=n).map(|i| format!("a_{{{i}}}")).collect();
    let den: String = (1..=n).map(|i| format!("(q)_{{a_{{{i}}}}}")).collect();
    format!("\\frac{{(q)_{{{}}}}}{{{den}}}", sum.join("+"))
}

pub fn monomial_x_latex(delta: &[i64]) -> String {
    let parts: Vec<String> = delta
        .iter()
        .enumerate()
        .filter(|(_, &d)| d != 0)
        .map(|(i, &d)| latex_power(&format!("x_{{{}}}", i + 1), d))
        .collect();
    if parts.is_empty() { "1".into() } else { parts.join(" ") }
}

pub fn product_latex(n: usize) -> String {
    format!(
        "\\prod_{{1 \\le i < j \\le {n}}} \\left(\\frac{{x_i}}{{x_j}}\\right)_{{a_i}} \\left(\\frac{{q x_j}}{{x_i}}\\right)_{{a_j}}"
    )
}

pub fn affine_latex(l: &AffineForm) -> String {
    let mut out = String::new();
    for (i, &c) in l.coeffs().iter().enumerate() {
        if c == 0 {
            continue;
        }
        let var = format!("a_{{{}}}", i + 1);
        let body = if c.abs() == 1 { var } else { format!("{}{var}", c.abs()) };
        out.push_str(match (out.is_empty(), c < 0) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        });
        out.push_str(&body);
    }
    let c = l.constant_term();
    match (out.is_empty(), c) {
        (true, _) => c.to_string(),
        (false, 0) => out,
        (false, c) if c < 0 => format!("{out} - {}", -c),
        (false, c) => format!("{out} + {c}"),
    }
}

/// `R_{(d)} = ...` followed by the coefficient identity, both in math mode.
pub fn coefficient_latex(delta: &[i64], r: &RationalQZ) -> String {
    let n = delta.len();
    format!(
        "R_{{{d}}}(q; z_1, \\dots, z_{{{n}}}) = {r}\n\\left[{x}\\right] {p} = R_{{{d}}}\\big|_{{z_i = q^{{a_i}}}} \\cdot {m}",
        d = tuple(delta),
        r = rational_latex(r),
        x = monomial_x_latex(delta),
        p = product_latex(n),
        m = multinomial_latex(n),
    )
}
