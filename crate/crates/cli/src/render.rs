//! Output rendering: plain text, the polynomial JSON schema, LaTeX with the
//! factored ratio form, and CSV coefficient rows.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use capmoments::qpoly::{factor_integer_roots, QPoly, QRat};
use capmoments::MomentResult;

/// Coefficients low-degree-first as exact decimal string pairs.
pub fn coeff_pairs(p: &QPoly) -> Vec<[String; 2]> {
    p.coeffs()
        .iter()
        .map(|c| [c.numer().to_string(), c.denom().to_string()])
        .collect()
}

/// The polynomial JSON document for a moment result.
pub fn moment_json(res: &MomentResult) -> serde_json::Value {
    serde_json::json!({
        "p": res.p,
        "r": res.r,
        "m": res.m,
        "n": res.n,
        "variable": "q",
        "coeffs": coeff_pairs(&res.poly),
        "zeroth_coeffs": coeff_pairs(&res.zeroth),
        "ratio": {
            "numerator_coeffs": coeff_pairs(res.ratio().numerator()),
            "denominator_coeffs": coeff_pairs(res.ratio().denominator()),
        },
    })
}

pub fn moment_csv(res: &MomentResult) -> String {
    let mut out = String::from("degree,numerator,denominator\n");
    for (i, c) in res.poly.coeffs().iter().enumerate() {
        out.push_str(&format!("{i},{},{}\n", c.numer(), c.denom()));
    }
    out
}

fn scalar_text(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("({}/{})", c.numer(), c.denom())
    }
}

/// Factored rendering: content * (q - root)^mult ... * (irreducible rest).
pub fn factored_text(p: &QPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let (content, roots, rest) = factor_integer_roots(p);
    let mut pieces = String::new();
    let trivial_tail = roots.is_empty() && rest.is_one();
    if !content.is_one() || trivial_tail {
        pieces.push_str(&scalar_text(&content));
    }
    for (root, mult) in &roots {
        pieces.push_str(&linear_factor_text(root, *mult, false));
    }
    if !rest.is_one() {
        pieces.push_str(&format!("({rest})"));
    }
    pieces
}

fn linear_factor_text(root: &BigInt, mult: usize, latex: bool) -> String {
    let base = if root.is_negative() {
        format!("(q + {})", -root)
    } else if root.sign() == num_bigint::Sign::NoSign {
        "q".to_string()
    } else {
        format!("(q - {root})")
    };
    match (mult, latex) {
        (1, _) => base,
        (_, false) => format!("{base}^{mult}"),
        (_, true) => format!("{base}^{{{mult}}}"),
    }
}

pub fn ratio_text(r: &QRat) -> String {
    if r.is_polynomial() {
        factored_text(r.numerator())
    } else {
        format!(
            "{} / {}",
            factored_text(r.numerator()),
            parenthesize_products(&factored_text(r.denominator()))
        )
    }
}

fn parenthesize_products(s: &str) -> String {
    // Keep a single factor bare, wrap products for readability.
    if s.starts_with('(') && s.ends_with(')') && s.matches("((").count() == 0 {
        s.to_string()
    } else {
        format!("({s})")
    }
}

fn poly_latex(p: &QPoly) -> String {
    // Reuse the display form with ^ exponents; only the multiplication star
    // differs.
    format!("{p}").replace('*', " ")
}

pub fn factored_latex(p: &QPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let (content, roots, rest) = factor_integer_roots(p);
    let mut pieces = String::new();
    let trivial_tail = roots.is_empty() && rest.is_one();
    if !content.is_one() || trivial_tail {
        if content.is_integer() {
            pieces.push_str(&content.numer().to_string());
        } else {
            pieces.push_str(&format!(
                "\\tfrac{{{}}}{{{}}}",
                content.numer(),
                content.denom()
            ));
        }
    }
    for (root, mult) in &roots {
        pieces.push_str(&linear_factor_text(root, *mult, true));
    }
    if !rest.is_one() {
        pieces.push_str(&format!("({})", poly_latex(&rest)));
    }
    pieces
}

pub fn ratio_latex(r: &QRat) -> String {
    if r.is_polynomial() {
        factored_latex(r.numerator())
    } else {
        format!(
            "\\frac{{{}}}{{{}}}",
            factored_latex(r.numerator()),
            factored_latex(r.denominator())
        )
    }
}

pub fn moment_latex(res: &MomentResult) -> String {
    format!(
        "F({},{}) = {}\n\\frac{{F({},{})}}{{F(0,{})}} = {}\n",
        res.m,
        res.n,
        poly_latex(&res.poly),
        res.m,
        res.n,
        res.n,
        ratio_latex(&res.ratio())
    )
}
