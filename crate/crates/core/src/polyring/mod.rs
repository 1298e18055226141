//! Exact sparse multivariate polynomials over the rationals.
//!
//! Every object the pipeline touches lives here: root-space products of
//! squared differences, elementary-symmetric rewrites, coefficient-space
//! equations and symbolic group-action images.
//!
//! Two monomial orders are in play and both use the fixed [`VariableId`]
//! order. Graded lex orders terms for storage and serialization. Degree
//! reverse lex picks the term whose coefficient [`MultiPoly::primitive_normalize`]
//! makes positive, which gives `b^2 - 4*a*c` rather than `4*a*c - b^2`.

mod json;
mod monomial;
mod parse;
mod poly;
mod variable;

pub use monomial::Monomial;
pub use parse::{parse_poly, parse_rational};
pub use poly::{poly_divides, primitive_normalize, MultiPoly};
pub use variable::VariableId;

pub type Rational = num_rational::BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn latex_var(v: VariableId) -> String {
    match v {
        VariableId::Root(i) => format!("\\lambda_{{{i}}}"),
        VariableId::Elementary(i) => format!("\\sigma_{{{i}}}"),
        VariableId::Coeff(_) => v.to_string(),
        VariableId::Group(r, s) => format!("G_{{{r}{s}}}"),
    }
}

pub fn latex_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.to_string()
    } else {
        let sign = if c.numer() < &0.into() { "-" } else { "" };
        format!("{sign}\\frac{{{}}}{{{}}}", c.numer().magnitude(), c.denom())
    }
}

/// LaTeX body without `*`: `-27a^2d^2+18abcd-4ac^3`.
pub fn latex(p: &MultiPoly) -> String {
    p.render("+", "-", "", latex_rational, |m| {
        m.factors()
            .iter()
            .map(|&(v, e)| match e {
                1 => latex_var(v),
                2..=9 => format!("{}^{e}", latex_var(v)),
                _ => format!("{}^{{{e}}}", latex_var(v)),
            })
            .collect()
    })
}

#[cfg(test)]
pub(crate) mod strategies {
    use super::*;
    use proptest::prelude::*;

    pub fn small_rational() -> impl Strategy<Value = Rational> {
        (-6i64..=6, 1i64..=3).prop_map(|(n, d)| rational(n, d))
    }

    pub fn poly_over(vars: Vec<VariableId>, max_terms: usize, max_exp: u32) -> impl Strategy<Value = MultiPoly> {
        let n = vars.len();
        prop::collection::vec((prop::collection::vec(0..=max_exp, n), small_rational()), 0..=max_terms).prop_map(
            move |terms| {
                MultiPoly::from_terms(
                    terms
                        .into_iter()
                        .map(|(exps, c)| (Monomial::from_pairs(vars.iter().copied().zip(exps)), c)),
                )
            },
        )
    }

    pub fn small_poly() -> impl Strategy<Value = MultiPoly> {
        poly_over(
            vec![
                VariableId::Root(1),
                VariableId::Coeff(0),
                VariableId::Coeff(1),
                VariableId::Coeff(2),
            ],
            5,
            3,
        )
    }
}
