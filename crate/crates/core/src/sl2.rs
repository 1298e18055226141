//! The SL(2) action on binary forms and on polynomials in their coefficients.
//!
//! A matrix `G` acts on a form by `P(x, y) -> P(G11*x + G21*y, G12*x + G22*y)`,
//! that is by `(x, y) -> (x, y) G` on row vectors. With this convention
//! `act(G*H, f) = act(G, act(H, f))`.
//!
//! Symbolic matrices carry the entries `G11, G12, G21, G22` as polynomial
//! variables. Determinant reduction replaces `G22` by `(1 + G12*G21)/G11` and
//! clears the resulting powers of `G11`.
//!
//! The orbit of a coefficient polynomial spans a representation of the group;
//! that interpretation is not checked here.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use rand::Rng;

use crate::error::{Error, Result};
use crate::generator::CoefficientVector;
use crate::polyring::{Monomial, MultiPoly, Rational, VariableId};

const G11: VariableId = VariableId::Group(1, 1);
const G12: VariableId = VariableId::Group(1, 2);
const G21: VariableId = VariableId::Group(2, 1);
const G22: VariableId = VariableId::Group(2, 2);

/// A numeric 2x2 matrix with determinant exactly one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnimodularMatrix {
    m: [[Rational; 2]; 2],
}

impl UnimodularMatrix {
    pub fn new(g11: Rational, g12: Rational, g21: Rational, g22: Rational) -> Result<Self> {
        let det = &g11 * &g22 - &g12 * &g21;
        if !det.is_one() {
            return Err(Error::NotUnimodular(format!(
                "[[{g11}, {g12}], [{g21}, {g22}]] has determinant {det}"
            )));
        }
        Ok(UnimodularMatrix {
            m: [[g11, g12], [g21, g22]],
        })
    }

    pub fn from_integers(g11: i64, g12: i64, g21: i64, g22: i64) -> Result<Self> {
        let r = |n: i64| Rational::from_integer(n.into());
        Self::new(r(g11), r(g12), r(g21), r(g22))
    }

    pub fn identity() -> Self {
        Self::from_integers(1, 0, 0, 1).expect("unimodular")
    }

    /// `[[1, t], [0, 1]]`
    pub fn upper_shear(t: i64) -> Self {
        Self::from_integers(1, t, 0, 1).expect("unimodular")
    }

    /// `[[1, 0], [t, 1]]`
    pub fn lower_shear(t: i64) -> Self {
        Self::from_integers(1, 0, t, 1).expect("unimodular")
    }

    /// Product of `factors` alternating shears with nonzero `t` in `[-3, 3]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, factors: usize) -> Self {
        let mut g = Self::identity();
        let upper_first = rng.gen_bool(0.5);
        for n in 0..factors {
            let mut t = rng.gen_range(1..=3);
            if rng.gen_bool(0.5) {
                t = -t;
            }
            let s = if (n % 2 == 0) == upper_first {
                Self::upper_shear(t)
            } else {
                Self::lower_shear(t)
            };
            g = g.mul(&s);
        }
        g
    }

    /// Entry `(r, s)`, 1-based.
    pub fn entry(&self, r: usize, s: usize) -> &Rational {
        &self.m[r - 1][s - 1]
    }

    pub fn mul(&self, other: &UnimodularMatrix) -> UnimodularMatrix {
        let e = |r: usize, s: usize| &self.m[r][0] * &other.m[0][s] + &self.m[r][1] * &other.m[1][s];
        UnimodularMatrix {
            m: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
        }
    }

    pub fn inverse(&self) -> UnimodularMatrix {
        let [[a, b], [c, d]] = &self.m;
        UnimodularMatrix {
            m: [[d.clone(), -b.clone()], [-c.clone(), a.clone()]],
        }
    }

    pub fn to_symbolic(&self) -> SymbolicMatrix {
        let c = |r: usize, s: usize| MultiPoly::constant(self.m[r][s].clone());
        SymbolicMatrix {
            m: [[c(0, 0), c(0, 1)], [c(1, 0), c(1, 1)]],
        }
    }
}

impl fmt::Display for UnimodularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.m;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

/// A 2x2 matrix with polynomial entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicMatrix {
    m: [[MultiPoly; 2]; 2],
}

impl SymbolicMatrix {
    pub fn new(g11: MultiPoly, g12: MultiPoly, g21: MultiPoly, g22: MultiPoly) -> Self {
        SymbolicMatrix {
            m: [[g11, g12], [g21, g22]],
        }
    }

    /// Entries `G11, G12, G21, G22`.
    pub fn generic() -> Self {
        Self::new(G11.into(), G12.into(), G21.into(), G22.into())
    }

    /// `[[G11, G12], [0, G22]]`
    pub fn lower_row_zero() -> Self {
        Self::new(G11.into(), G12.into(), MultiPoly::zero(), G22.into())
    }

    pub fn entry(&self, r: usize, s: usize) -> &MultiPoly {
        &self.m[r - 1][s - 1]
    }
}

fn univariate_mul(p: &[MultiPoly], q: &[MultiPoly]) -> Vec<MultiPoly> {
    let mut out = vec![MultiPoly::zero(); p.len() + q.len() - 1];
    for (i, x) in p.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in q.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

fn univariate_pow(p: &[MultiPoly], n: usize) -> Vec<MultiPoly> {
    let mut out = vec![MultiPoly::one()];
    for _ in 0..n {
        out = univariate_mul(&out, p);
    }
    out
}

/// Image coefficients, leading first, of the form with coefficients `coeffs`.
fn act_on_coefficients(g: &SymbolicMatrix, coeffs: &[MultiPoly]) -> Vec<MultiPoly> {
    let k = coeffs.len() - 1;
    // dehomogenized at x = 1, with t standing for y
    let u = [g.m[0][0].clone(), g.m[1][0].clone()];
    let v = [g.m[0][1].clone(), g.m[1][1].clone()];
    let u_pows: Vec<Vec<MultiPoly>> = (0..=k).map(|n| univariate_pow(&u, n)).collect();
    let v_pows: Vec<Vec<MultiPoly>> = (0..=k).map(|n| univariate_pow(&v, n)).collect();
    let mut out = vec![MultiPoly::zero(); k + 1];
    for (p, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = univariate_mul(&u_pows[k - p], &v_pows[p]);
        for (j, t) in term.iter().enumerate() {
            if !t.is_zero() {
                out[j] = &out[j] + &(c * t);
            }
        }
    }
    out
}

/// Coefficients of `f` transformed by `g`.
pub fn act_on_form(g: &UnimodularMatrix, f: &CoefficientVector) -> CoefficientVector {
    let coeffs: Vec<MultiPoly> = f.coeffs().iter().cloned().map(MultiPoly::constant).collect();
    let image = act_on_coefficients(&g.to_symbolic(), &coeffs)
        .iter()
        .map(|c| c.constant_term())
        .collect();
    CoefficientVector::new(image).expect("nonempty")
}

/// Image of each coefficient variable of a degree-`k` form under `g`.
pub fn coefficient_images(g: &SymbolicMatrix, k: usize) -> BTreeMap<VariableId, MultiPoly> {
    let vars: Vec<MultiPoly> = (0..=k as u32).map(|p| VariableId::Coeff(p).into()).collect();
    act_on_coefficients(g, &vars)
        .into_iter()
        .enumerate()
        .map(|(p, img)| (VariableId::Coeff(p as u32), img))
        .collect()
}

fn check_coefficient_poly(q: &MultiPoly, k: usize) -> Result<()> {
    for v in q.variables() {
        match v {
            VariableId::Coeff(p) if (p as usize) <= k => {}
            VariableId::Coeff(p) => {
                return Err(Error::IndexOutOfRange {
                    index: p as usize,
                    degree: k,
                })
            }
            other => return Err(Error::NonCoefficientVariable(other.to_string())),
        }
    }
    if !q.is_homogeneous() {
        return Err(Error::MixedDegree);
    }
    Ok(())
}

/// Replaces `G22` by `(1 + G12*G21)/G11` and divides out the largest power of
/// `G11` up to the one introduced, so the result stays a polynomial.
fn reduce_determinant(p: &MultiPoly, g: &SymbolicMatrix) -> Result<MultiPoly> {
    if g.m[0][0] != MultiPoly::var(G11) || g.m[1][1] != MultiPoly::var(G22) {
        return Err(Error::NotUnimodular(
            "determinant reduction needs the diagonal entries G11 and G22".into(),
        ));
    }
    let top = p.degree_in(G22);
    let one_plus = &MultiPoly::one() + &(&g.m[0][1] * &g.m[1][0]);
    let by_g22 = p.collect_by(|v| v == G22);
    let mut lifted = MultiPoly::zero();
    for (mono, rest) in by_g22 {
        let e = mono.exponent(G22);
        let factor = one_plus
            .pow(e)
            .mul_monomial(&Monomial::var_pow(G11, top - e), &Rational::one());
        lifted = &lifted + &(&rest * &factor);
    }
    let shift = lifted.terms().map(|(m, _)| m.exponent(G11)).min().unwrap_or(0).min(top);
    let divisor = Monomial::var_pow(G11, shift);
    Ok(MultiPoly::from_terms(
        lifted
            .terms()
            .map(|(m, c)| (m.div(&divisor).expect("divisible"), c.clone())),
    ))
}

/// `q` with every coefficient variable replaced by its image under `g`.
pub fn transform_coefficient_poly(q: &MultiPoly, g: &SymbolicMatrix, k: usize, reduce: bool) -> Result<MultiPoly> {
    check_coefficient_poly(q, k)?;
    let raw = q.substitute(&coefficient_images(g, k));
    if reduce {
        reduce_determinant(&raw, g)
    } else {
        Ok(raw)
    }
}

/// One coefficient of the orbit polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitEquation {
    /// The monomial in the group entries this equation multiplies.
    pub group_monomial: Monomial,
    pub content: Rational,
    pub poly: MultiPoly,
}

/// Coefficient equations whose common zeros are the forms whose whole orbit
/// annihilates `source`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSystem {
    pub degree: usize,
    pub source: MultiPoly,
    pub orbit: MultiPoly,
    pub equations: Vec<OrbitEquation>,
}

impl OrbitSystem {
    pub fn polys(&self) -> Vec<&MultiPoly> {
        self.equations.iter().map(|e| &e.poly).collect()
    }
}

pub fn orbit_common_zero_system(q: &MultiPoly, k: usize) -> Result<OrbitSystem> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let orbit = transform_coefficient_poly(q, &SymbolicMatrix::generic(), k, true)?;
    let mut equations: Vec<OrbitEquation> = Vec::new();
    for (group_monomial, coeff) in orbit.collect_by(|v| v.is_group()).into_iter().rev() {
        let (content, poly) = coeff.primitive_parts()?;
        if equations.iter().any(|e| e.poly == poly) {
            continue;
        }
        equations.push(OrbitEquation {
            group_monomial,
            content,
            poly,
        });
    }
    Ok(OrbitSystem {
        degree: k,
        source: q.clone(),
        orbit,
        equations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::discriminant;
    use crate::polyring::int;
    use proptest::prelude::{any, prop, prop_assert_eq, proptest, Strategy};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    fn form(c: &[i64]) -> CoefficientVector {
        CoefficientVector::from_integers(c).unwrap()
    }

    #[test]
    fn construction_checks_determinant() {
        assert!(UnimodularMatrix::from_integers(2, 1, 1, 1).is_ok());
        let err = UnimodularMatrix::from_integers(2, 0, 0, 1).unwrap_err();
        assert!(matches!(err, Error::NotUnimodular(_)));
        let g = UnimodularMatrix::from_integers(2, 1, 1, 1).unwrap();
        assert_eq!(g.mul(&g.inverse()), UnimodularMatrix::identity());
    }

    #[test]
    fn act_examples() {
        let f = form(&[3, -1, 4, 1]);
        assert_eq!(act_on_form(&UnimodularMatrix::identity(), &f), f);
        // y -> x + y
        let shear = UnimodularMatrix::upper_shear(1);
        assert_eq!(act_on_form(&shear, &form(&[0, 0, 1])), form(&[1, 2, 1]));
        assert_eq!(act_on_form(&shear, &form(&[1, 0, 0])), form(&[1, 0, 0]));
        // x -> x + y
        let lower = UnimodularMatrix::lower_shear(1);
        assert_eq!(act_on_form(&lower, &form(&[1, 0, 0])), form(&[1, 2, 1]));
    }

    #[test]
    fn discriminant_invariant_under_random_matrices() {
        let d3 = discriminant(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let g = UnimodularMatrix::random(&mut rng, 4);
            let f = form(&[
                rng.gen_range(-9..=9),
                rng.gen_range(-9..=9),
                rng.gen_range(-9..=9),
                rng.gen_range(-9..=9),
            ]);
            let before = d3.evaluate(&f.point()).unwrap();
            let after = d3.evaluate(&act_on_form(&g, &f).point()).unwrap();
            assert_eq!(before, after, "{g}");
        }
    }

    #[test]
    fn orbit_of_cubic_hessian_coefficient() {
        let q = p("b^2 - 3*a*c");
        let z = transform_coefficient_poly(&q, &SymbolicMatrix::lower_row_zero(), 3, true).unwrap();
        assert_eq!(
            z,
            p("G11^2*(b^2 - 3*a*c) + G11*G12*(b*c - 9*a*d) + G12^2*(c^2 - 3*b*d)")
        );
        let generic = transform_coefficient_poly(&q, &SymbolicMatrix::generic(), 3, true).unwrap();
        assert_eq!(generic, z);

        let sys = orbit_common_zero_system(&q, 3).unwrap();
        let polys: Vec<MultiPoly> = sys.polys().into_iter().cloned().collect();
        assert_eq!(
            polys,
            vec![
                p("b^2 - 3*a*c").primitive_normalize().unwrap(),
                p("b*c - 9*a*d").primitive_normalize().unwrap(),
                p("c^2 - 3*b*d").primitive_normalize().unwrap(),
            ]
        );
        assert_eq!(sys.equations[0].group_monomial, Monomial::var_pow(G11, 2));
    }

    #[test]
    fn raw_expansion_keeps_g22() {
        let raw = transform_coefficient_poly(&p("a"), &SymbolicMatrix::generic(), 1, false).unwrap();
        assert_eq!(raw, p("G11*a + G12*b"));
        let raw = transform_coefficient_poly(&p("b"), &SymbolicMatrix::generic(), 1, false).unwrap();
        assert_eq!(raw, p("G21*a + G22*b"));
        // G22 b -> (1 + G12 G21)/G11 b cannot lose its denominator
        let red = transform_coefficient_poly(&p("b"), &SymbolicMatrix::generic(), 1, true).unwrap();
        assert_eq!(red, p("G11*G21*a + b + G12*G21*b"));
    }

    #[test]
    fn invariants_are_fixed_symbolically() {
        let apolara = p("c^2 - 3*b*d + 12*a*e");
        let g = SymbolicMatrix::generic();
        assert_eq!(transform_coefficient_poly(&apolara, &g, 4, true).unwrap(), apolara);
        let d3 = discriminant(3).unwrap();
        assert_eq!(transform_coefficient_poly(&d3, &g, 3, true).unwrap(), d3);
        let sys = orbit_common_zero_system(&d3, 3).unwrap();
        assert_eq!(sys.polys(), vec![&d3]);
    }

    #[test]
    fn rejects_bad_input() {
        let g = SymbolicMatrix::generic();
        assert_eq!(
            transform_coefficient_poly(&p("a^2 + b"), &g, 2, true),
            Err(Error::MixedDegree)
        );
        assert!(matches!(
            transform_coefficient_poly(&p("e"), &g, 3, true),
            Err(Error::IndexOutOfRange { index: 4, degree: 3 })
        ));
        assert!(matches!(
            transform_coefficient_poly(&p("l1"), &g, 3, true),
            Err(Error::NonCoefficientVariable(_))
        ));
        let bad = SymbolicMatrix::new(int(1).into(), G12.into(), G21.into(), G22.into());
        assert!(transform_coefficient_poly(&p("a"), &bad, 2, true).is_err());
    }

    fn matrix() -> impl Strategy<Value = UnimodularMatrix> {
        any::<u64>().prop_map(|s| UnimodularMatrix::random(&mut ChaCha8Rng::seed_from_u64(s), 3))
    }

    fn cubic() -> impl Strategy<Value = CoefficientVector> {
        prop::collection::vec(-9i64..=9, 4).prop_map(|c| form(&c))
    }

    proptest! {
        #[test]
        fn group_law(g in matrix(), h in matrix(), f in cubic()) {
            prop_assert_eq!(act_on_form(&g.mul(&h), &f), act_on_form(&g, &act_on_form(&h, &f)));
        }

        #[test]
        fn inverse_undoes(g in matrix(), f in cubic()) {
            prop_assert_eq!(act_on_form(&g.inverse(), &act_on_form(&g, &f)), f);
        }

        #[test]
        fn symbolic_matches_numeric(g in matrix(), f in cubic()) {
            let q = p("b*c - 9*a*d");
            let images = coefficient_images(&g.to_symbolic(), 3);
            let direct = q.evaluate(&act_on_form(&g, &f).point()).unwrap();
            let via = q.substitute(&images).evaluate(&f.point()).unwrap();
            prop_assert_eq!(direct, via);
        }
    }
}
