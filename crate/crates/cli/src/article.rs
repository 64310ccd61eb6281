//! Self-contained write-up of one coefficient: statement, computation trace and a
//! verification appendix.

use qdyson_core::engine::coefficient_split_with;
use qdyson_core::oracle::verify_query;
use qdyson_core::par::{self, Execution};
use qdyson_core::{AffineForm, CoefficientQuery, RationalQZ, SplitResult, VerificationReport};

use crate::args::{ArticleArgs, Format};
use crate::render::{self, tuple};
use crate::{CliError, Document};

fn default_samples(n: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![1; n], vec![2; n], (0..n).map(|i| 1 + (i % 2) as u64).collect()];
    out.dedup();
    out.sort();
    out.dedup();
    out
}

fn alpha_text(alpha: &[AffineForm]) -> String {
    format!("({})", alpha.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(", "))
}

fn verdict(r: &VerificationReport) -> &'static str {
    match (&r.error, r.matched) {
        (Some(_), _) => "error",
        (None, true) => "match",
        (None, false) => "MISMATCH",
    }
}

fn text(delta: &[i64], split: &SplitResult, r: &RationalQZ, checks: &[VerificationReport]) -> String {
    let n = delta.len();
    let x = render::monomial_x_text(delta);
    let mut out = String::new();
    out.push_str(&format!("Coefficient of {x} in the q-Dyson product (n = {n})\n\n"));
    out.push_str(&format!(
        "Theorem. For positive integers a1, ..., a{n} write z_i = q^a_i. The coefficient of {x} in\n\
         \x20   prod_{{1 <= i < j <= {n}}} (x_i/x_j; q)_{{a_i}} (q*x_j/x_i; q)_{{a_j}}\n\
         equals R(q; z1, ..., z{n}) times the q-multinomial coefficient\n\
         \x20   (q)_{{a1+...+a{n}}} / ((q)_{{a1}} ... (q)_{{a{n}}}),\n\
         where\n\
         \x20   R = {r}\n\n"
    ));
    out.push_str(&format!(
        "Computation. Coordinate i is interpolated on the nodes q^(c_i), ..., q^(c_i + d_i) with\n\
         d_i = a1 + ... + a{n} - a_i + delta_i and shift c = {}. {} contribute{}:\n\n",
        split.shift_used,
        match split.terms.len() {
            1 => "One grid point".to_string(),
            k => format!("{k} grid points"),
        },
        if split.terms.len() == 1 { "s" } else { "" }
    ));
    let rows: Vec<[String; 5]> = split
        .terms
        .iter()
        .enumerate()
        .map(|(k, (p, t))| [(k + 1).to_string(), p.perm.to_string(), tuple(&p.m), alpha_text(&p.alpha), t.to_string()])
        .collect();
    let header = ["#", "pi", "m", "alpha", "summand"].map(String::from);
    let widths: Vec<usize> =
        (0..4).map(|c| rows.iter().chain([&header]).map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
    for row in std::iter::once(&header).chain(&rows) {
        let cells: Vec<String> = (0..4).map(|c| format!("{:<w$}", row[c], w = widths[c])).collect();
        out.push_str(&format!("  {}  {}\n", cells.join("  "), row[4]));
    }
    out.push_str("\nThe summands add up to R.\n\n");
    out.push_str("Verification. Direct expansion of the product at sample exponents:\n");
    for c in checks {
        out.push_str(&format!("  a = {}: coefficient {}; {}\n", tuple(&c.a), c.oracle, verdict(c)));
    }
    out
}

fn latex(delta: &[i64], split: &SplitResult, r: &RationalQZ, checks: &[VerificationReport]) -> String {
    let n = delta.len();
    let mut out = String::from(
        "\\documentclass{article}\n\\usepackage{amsmath,amsthm}\n\\newtheorem{theorem}{Theorem}\n\\begin{document}\n\n",
    );
    out.push_str(&format!("\\section*{{The coefficient of ${}$}}\n\n", render::monomial_x_latex(delta)));
    out.push_str(&format!(
        "\\begin{{theorem}}\nFor positive integers $a_1, \\dots, a_{{{n}}}$ write $z_i = q^{{a_i}}$. Then\n\\[\n\\left[{}\\right] {} = R \\cdot {}\n\\]\nwhere\n\\[\nR = {}.\n\\]\n\\end{{theorem}}\n\n",
        render::monomial_x_latex(delta),
        render::product_latex(n),
        render::multinomial_latex(n),
        render::rational_latex(r)
    ));
    out.push_str(&format!(
        "\\section*{{Computation}}\nCoordinate $i$ is interpolated on the nodes $q^{{c_i}}, \\dots, q^{{c_i + d_i}}$ with \
         $d_i = a_1 + \\dots + a_{{{n}}} - a_i + \\delta_i$ and shift $c = {}$. The contributing grid points are \
         $x_i = q^{{\\alpha_i}}$ with\n\\begin{{enumerate}}\n",
        split.shift_used
    ));
    for (p, t) in &split.terms {
        let alpha: Vec<String> = p.alpha.iter().map(render::affine_latex).collect();
        out.push_str(&format!(
            "\\item $\\pi = {}$, $m = {}$, $\\alpha = ({})$:\n\\[\n{}\n\\]\n",
            p.perm,
            tuple(&p.m),
            alpha.join(", "),
            render::rational_latex(t)
        ));
    }
    out.push_str("\\end{enumerate}\nThe summands add up to $R$.\n\n\\section*{Verification}\n");
    out.push_str("Direct expansion of the product at sample exponents:\n\\begin{itemize}\n");
    for c in checks {
        out.push_str(&format!(
            "\\item $a = {}$: coefficient ${}$, {}.\n",
            tuple(&c.a),
            render::qpoly_latex(&c.oracle),
            verdict(c)
        ));
    }
    out.push_str("\\end{itemize}\n\n\\end{document}\n");
    out
}

pub fn run(a: &ArticleArgs) -> Result<Document, CliError> {
    let format = a.output.format;
    if format == Format::Json {
        return Err(CliError::Usage("article writes text or latex".into()));
    }
    let delta = a.delta.delta.0.clone();
    let policy = a.shift.policy();
    let query = CoefficientQuery::new(delta.clone()).with_shift(policy.clone());
    let exec = Execution::Parallel;
    let split = par::with_jobs(exec, a.jobs.jobs, || coefficient_split_with(&query, exec))?;
    let r = split.combine()?;
    let samples = if a.samples.is_empty() {
        default_samples(delta.len())
    } else {
        a.samples.iter().map(crate::nonnegative).collect::<Result<_, _>>()?
    };
    let checks = samples
        .iter()
        .map(|s| verify_query(&delta, s, policy.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    let body = match format {
        Format::Latex => latex(&delta, &split, &r, &checks),
        _ => text(&delta, &split, &r, &checks),
    };
    let mut doc = Document::new(body);
    crate::homogeneity_note(&delta, &mut doc);
    let worst = checks.iter().map(crate::report_code).max().unwrap_or(0);
    if worst != 0 {
        doc.code = worst;
    }
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_distinct() {
        assert_eq!(default_samples(1), vec![vec![1], vec![2]]);
        assert_eq!(default_samples(3).len(), 3);
    }
}
