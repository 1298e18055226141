//! Root multiplicities of concrete forms, without finding roots.
//!
//! The affine part of a form is split by square-free decomposition (Yun's gcd
//! cascade over exact rationals). Leading zero coefficients count as a root at
//! infinity of that multiplicity.

use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coincidence::{integer_partitions, pattern_matches, CoincidencePattern, DegeneracyPartition};
use crate::error::{Error, Result};
use crate::generator::{CoefficientVector, EquationSystem};
use crate::polyring::{MultiPoly, Rational};

/// Dense univariate polynomial, constant term first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly(Vec<Rational>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn one() -> Self {
        UniPoly(vec![Rational::one()])
    }

    /// `z - r`
    pub fn linear(r: &Rational) -> Self {
        UniPoly(vec![-r.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        UniPoly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    pub fn derivative(&self) -> Self {
        UniPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn sub(&self, other: &UniPoly) -> Self {
        let n = self.0.len().max(other.0.len());
        let z = Rational::zero();
        UniPoly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) - other.0.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn mul(&self, other: &UniPoly) -> Self {
        if self.is_zero() || other.is_zero() {
            return UniPoly(Vec::new());
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, x) in self.0.iter().enumerate() {
            for (j, y) in other.0.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        UniPoly::new(out)
    }

    pub fn pow(&self, n: usize) -> Self {
        (0..n).fold(UniPoly::one(), |acc, _| acc.mul(self))
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, divisor: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        if divisor.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        let mut rem = self.0.clone();
        let dl = divisor.leading();
        let dd = divisor.degree();
        if self.0.len() < divisor.0.len() {
            return Ok((UniPoly(Vec::new()), self.clone()));
        }
        let mut quot = vec![Rational::zero(); self.0.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &dl;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.0.iter().enumerate() {
                rem[i + j] -= &c * d;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((UniPoly::new(quot), UniPoly::new(rem)))
    }

    fn div_exact(&self, divisor: &UniPoly) -> UniPoly {
        let (q, r) = self.div_rem(divisor).expect("nonzero divisor");
        debug_assert!(r.is_zero());
        q
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("nonzero").1;
            a = b;
            b = r;
        }
        a.monic()
    }
}

/// `f = leading * prod factors[m]^m` with monic, square-free, pairwise
/// coprime factors; `factors[m - 1]` belongs to multiplicity `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareFree {
    pub leading: Rational,
    pub factors: Vec<UniPoly>,
}

impl SquareFree {
    pub fn expand(&self) -> UniPoly {
        self.factors
            .iter()
            .enumerate()
            .fold(UniPoly::new(vec![self.leading.clone()]), |acc, (i, g)| {
                acc.mul(&g.pow(i + 1))
            })
    }
}

pub fn square_free_decomposition(f: &UniPoly) -> Result<SquareFree> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let leading = f.leading();
    let f = f.monic();
    let mut factors = Vec::new();
    if f.degree() > 0 {
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_exact(&a0);
        let mut c = df.div_exact(&a0);
        let mut d = c.sub(&b.derivative());
        while b.degree() > 0 {
            let a = b.gcd(&d);
            b = b.div_exact(&a);
            c = d.div_exact(&a);
            d = c.sub(&b.derivative());
            factors.push(a);
        }
    }
    while factors.last().is_some_and(|g: &UniPoly| g.degree() == 0) {
        factors.pop();
    }
    Ok(SquareFree { leading, factors })
}

/// Root multiplicities of a form, one of them possibly at infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiplicityPattern {
    multiplicities: Vec<usize>,
    infinity: usize,
}

impl MultiplicityPattern {
    /// A pattern with every root in the affine chart.
    pub fn affine(multiplicities: &[usize]) -> Result<Self> {
        Self::new(multiplicities, 0)
    }

    /// `infinity` is 0 or the multiplicity of the root at infinity, which must
    /// also appear in `multiplicities`.
    pub fn new(multiplicities: &[usize], infinity: usize) -> Result<Self> {
        if multiplicities.is_empty() || multiplicities.contains(&0) {
            return Err(Error::InvalidPartition(format!("{multiplicities:?}")));
        }
        if infinity > 0 && !multiplicities.contains(&infinity) {
            return Err(Error::InvalidPartition(format!(
                "infinity multiplicity {infinity} not among {multiplicities:?}"
            )));
        }
        let mut m = multiplicities.to_vec();
        m.sort_unstable_by(|a, b| b.cmp(a));
        Ok(MultiplicityPattern {
            multiplicities: m,
            infinity,
        })
    }

    pub fn degree(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// Non-increasing.
    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// Multiplicity of the root at infinity, 0 if there is none.
    pub fn infinity(&self) -> usize {
        self.infinity
    }

    pub fn is_affine(&self) -> bool {
        self.infinity == 0
    }

    pub fn to_partition(&self) -> DegeneracyPartition {
        DegeneracyPartition::new(self.degree(), &self.multiplicities).expect("valid")
    }

    pub fn to_coincidence_pattern(&self) -> CoincidencePattern {
        CoincidencePattern::from_sizes(&self.multiplicities)
    }

    /// Every stratum, named by a partition with a part above 1, containing
    /// forms with this pattern.
    pub fn strata(&self) -> Vec<DegeneracyPartition> {
        let pattern = self.to_coincidence_pattern();
        integer_partitions(self.degree())
            .into_iter()
            .filter(|p| !p.is_trivial() && pattern_matches(p, &pattern))
            .collect()
    }
}

impl fmt::Display for MultiplicityPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.multiplicities.iter().map(|m| m.to_string()).collect();
        f.write_str(&parts.join(","))?;
        if self.infinity > 0 {
            write!(f, " (infinity: {})", self.infinity)?;
        }
        Ok(())
    }
}

/// The affine part of `f` as a polynomial in `z = x/y`, with the number of
/// vanishing leading coefficients.
pub fn affine_part(f: &CoefficientVector) -> (UniPoly, usize) {
    let drop = f.coeffs().iter().take_while(|c| c.is_zero()).count();
    (UniPoly::new(f.coeffs().iter().rev().cloned().collect()), drop)
}

pub fn multiplicity_pattern(f: &CoefficientVector) -> Result<MultiplicityPattern> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let (aff, drop) = affine_part(f);
    let sf = square_free_decomposition(&aff)?;
    let mut m = Vec::new();
    if drop > 0 {
        m.push(drop);
    }
    for (i, g) in sf.factors.iter().enumerate() {
        m.extend(std::iter::repeat_n(i + 1, g.degree()));
    }
    MultiplicityPattern::new(&m, drop)
}

fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=4).into())
}

/// A form with exactly the root multiplicities of `pattern`, all affine.
/// Deterministic in `seed`.
pub fn random_form_with_pattern(pattern: &MultiplicityPattern, seed: u64) -> Result<CoefficientVector> {
    if !pattern.is_affine() {
        return Err(Error::InvalidPartition(format!(
            "{pattern}: random forms have no root at infinity"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut roots: Vec<Rational> = Vec::new();
    while roots.len() < pattern.multiplicities().len() {
        let r = random_rational(&mut rng);
        if !roots.contains(&r) {
            roots.push(r);
        }
    }
    let mut scalar = 0i64;
    while scalar == 0 {
        scalar = rng.gen_range(-5..=5);
    }
    let prod = roots
        .iter()
        .zip(pattern.multiplicities())
        .fold(UniPoly::one(), |acc, (r, &m)| acc.mul(&UniPoly::linear(r).pow(m)))
        .scale(&Rational::from_integer(scalar.into()));
    CoefficientVector::new(prod.coeffs().iter().rev().cloned().collect())
}

/// True when every polynomial vanishes at `f`.
pub fn satisfies_all<'a, I>(polys: I, f: &CoefficientVector) -> Result<bool>
where
    I: IntoIterator<Item = &'a MultiPoly>,
{
    let point = f.point();
    for p in polys {
        let v = p.evaluate(&point).ok_or_else(|| {
            let top = p.variables().into_iter().filter(|v| v.is_coeff()).count();
            Error::DegreeMismatch {
                expected: f.degree(),
                found: top,
            }
        })?;
        if !v.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn satisfies_system(sys: &EquationSystem, f: &CoefficientVector) -> Result<bool> {
    if sys.degree != f.degree() {
        return Err(Error::DegreeMismatch {
            expected: sys.degree,
            found: f.degree(),
        });
    }
    satisfies_all(sys.polys(), f)
}
