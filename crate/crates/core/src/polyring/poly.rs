use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Monomial, Rational, VariableId};
use crate::error::{Error, Result};

/// Exact sparse multivariate polynomial over the rationals.
///
/// Terms are kept in a map ordered by graded-lex monomial order with no zero
/// coefficients, so equal polynomials have identical term maps.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(Rational::from_integer(n.into()))
    }

    pub fn var(v: VariableId) -> Self {
        Self::monomial(Monomial::var(v), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    /// Collects terms, merging repeated monomials and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> Self {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in iter {
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Self::from_accumulator(acc)
    }

    fn from_accumulator(acc: HashMap<Monomial, Rational>) -> Self {
        MultiPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one())
    }

    /// Greatest term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, v: VariableId) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn variables(&self) -> BTreeSet<VariableId> {
        self.terms.keys().flat_map(|m| m.variables()).collect()
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, x)| (m.mul(mono), x * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut result = MultiPoly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Simultaneous substitution of variables by polynomials. Variables with no
    /// binding are left in place.
    pub fn substitute(&self, bindings: &BTreeMap<VariableId, MultiPoly>) -> MultiPoly {
        let mut powers: HashMap<(VariableId, u32), MultiPoly> = HashMap::new();
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut product = MultiPoly::one();
            for &(v, e) in m.factors() {
                match bindings.get(&v) {
                    Some(image) => {
                        let p = powers.entry((v, e)).or_insert_with(|| image.pow(e));
                        product = &product * p;
                    }
                    None => kept.push((v, e)),
                }
            }
            let kept = Monomial::from_pairs(kept);
            for (pm, pc) in product.terms {
                *acc.entry(pm.mul(&kept)).or_insert_with(Rational::zero) += pc * c;
            }
        }
        Self::from_accumulator(acc)
    }

    /// Evaluates at a point. Every variable of `self` must be bound.
    pub fn evaluate(&self, point: &BTreeMap<VariableId, Rational>) -> Option<Rational> {
        let mut sum = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.factors() {
                let x = point.get(&v)?;
                t *= num_traits::pow(x.clone(), e as usize);
            }
            sum += t;
        }
        Some(sum)
    }

    /// Splits `self` as `sum_m m * coeff_m` where `m` ranges over monomials in
    /// the variables accepted by `outer`, and each `coeff_m` is free of them.
    pub fn collect_by<F: Fn(VariableId) -> bool>(&self, outer: F) -> BTreeMap<Monomial, MultiPoly> {
        let mut groups: BTreeMap<Monomial, Vec<(Monomial, Rational)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (o, inner) = m.split(&outer);
            groups.entry(o).or_default().push((inner, c.clone()));
        }
        groups
            .into_iter()
            .map(|(o, ts)| (o, MultiPoly::from_terms(ts)))
            .collect()
    }

    /// Signed content `c` and primitive part `q` with `self = c * q`, `q`
    /// having coprime integer coefficients and a positive coefficient on its
    /// degree-reverse-lex greatest monomial. The sign is folded into the
    /// returned content.
    pub fn primitive_parts(&self) -> Result<(Rational, MultiPoly)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut content = Rational::new(num_gcd, den_lcm);
        let lead = self
            .terms
            .iter()
            .max_by(|a, b| a.0.cmp_grevlex(b.0))
            .map(|(_, c)| c)
            .expect("nonzero polynomial has terms");
        if lead.is_negative() {
            content = -content;
        }
        let inv = content.recip();
        Ok((content, self.scale(&inv)))
    }

    /// `c * self` for the unique positive rational `c` making the coefficients
    /// coprime integers with the grevlex-leading coefficient positive.
    pub fn primitive_normalize(&self) -> Result<MultiPoly> {
        self.primitive_parts().map(|(_, q)| q)
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Result<Option<MultiPoly>> {
        let (lead_m, lead_c) = divisor.leading_term().ok_or(Error::ZeroDivisor)?;
        let (lead_m, lead_c) = (lead_m.clone(), lead_c.clone());
        let mut rest = self.terms.clone();
        let mut quotient: Vec<(Monomial, Rational)> = Vec::new();
        while let Some((m, c)) = rest.iter().next_back() {
            let Some(qm) = m.div(&lead_m) else {
                // The leading term of the dividend is not reducible, so a
                // nonzero remainder is certain.
                return Ok(None);
            };
            let qc = c / &lead_c;
            for (dm, dc) in &divisor.terms {
                let key = dm.mul(&qm);
                let delta = dc * &qc;
                let entry = rest.entry(key).or_insert_with(Rational::zero);
                *entry -= delta;
                if entry.is_zero() {
                    let key = dm.mul(&qm);
                    rest.remove(&key);
                }
            }
            quotient.push((qm, qc));
        }
        Ok(Some(MultiPoly::from_terms(quotient)))
    }

    /// True iff `q = self * r` for some polynomial `r`.
    pub fn divides(&self, q: &MultiPoly) -> Result<bool> {
        poly_divides(self, q)
    }

    /// Text with custom coefficient and monomial renderers. `plus` and `minus`
    /// separate terms; `times` joins a non-unit coefficient to its monomial.
    pub fn render<C, W>(&self, plus: &str, minus: &str, times: &str, coeff: C, mono: W) -> String
    where
        C: Fn(&Rational) -> String,
        W: Fn(&Monomial) -> String,
    {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (n, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (n, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(minus),
                (_, false) => out.push_str(plus),
            }
            if m.is_one() {
                out.push_str(&coeff(&abs));
            } else if abs.is_one() {
                out.push_str(&mono(m));
            } else {
                out.push_str(&coeff(&abs));
                out.push_str(times);
                out.push_str(&mono(m));
            }
        }
        out
    }
}

/// Free-function form of [`MultiPoly::primitive_normalize`].
pub fn primitive_normalize(p: &MultiPoly) -> Result<MultiPoly> {
    p.primitive_normalize()
}

/// True iff `p` divides `q`; `p = 0` is an error.
pub fn poly_divides(p: &MultiPoly, q: &MultiPoly) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    Ok(q.div_exact(p)?.is_some())
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(" + ", " - ", "*", |c| c.to_string(), |m| m.to_string()))
    }
}

impl From<VariableId> for MultiPoly {
    fn from(v: VariableId) -> Self {
        MultiPoly::var(v)
    }
}

impl From<Rational> for MultiPoly {
    fn from(c: Rational) -> Self {
        MultiPoly::constant(c)
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let (big, small) = if self.len() >= rhs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut terms = big.terms.clone();
        for (m, c) in &small.terms {
            let entry = terms.entry(m.clone()).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(m);
            }
        }
        MultiPoly { terms }
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero();
        }
        // Integer coefficients are the common case; accumulate numerators
        // directly and skip the per-product rational reduction.
        let integral = self.terms.values().chain(rhs.terms.values()).all(|c| c.is_integer());
        if integral {
            let mut acc: HashMap<Monomial, BigInt> =
                HashMap::with_capacity(self.len().saturating_mul(rhs.len()).min(1 << 16));
            for (ma, ca) in &self.terms {
                for (mb, cb) in &rhs.terms {
                    let prod = ca.numer() * cb.numer();
                    match acc.get_mut(&ma.mul(mb)) {
                        Some(x) => *x += prod,
                        None => {
                            acc.insert(ma.mul(mb), prod);
                        }
                    }
                }
            }
            return MultiPoly {
                terms: acc
                    .into_iter()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(m, c)| (m, Rational::from_integer(c)))
                    .collect(),
            };
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        MultiPoly::from_accumulator(acc)
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$f(rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl std::iter::Sum for MultiPoly {
    fn sum<I: Iterator<Item = MultiPoly>>(iter: I) -> Self {
        iter.fold(MultiPoly::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for MultiPoly {
    fn product<I: Iterator<Item = MultiPoly>>(iter: I) -> Self {
        iter.fold(MultiPoly::one(), |a, b| a * b)
    }
}
