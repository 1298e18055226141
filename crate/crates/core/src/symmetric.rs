//! Symmetric polynomials in the roots `l1..lk` and their rewrite in the
//! elementary symmetric basis `e1..ek`.
//!
//! [`to_elementary`] is the classical leading-term elimination under pure lex
//! order `l1 > l2 > ... > lk`. A symmetric polynomial is determined by its
//! coefficients on sorted exponent vectors (`c1 >= c2 >= ... >= ck`), so the
//! elimination runs entirely on that compact form; products `e^alpha` are built
//! incrementally in the same form and cached.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::polyring::{Monomial, MultiPoly, Rational, VariableId};

/// A polynomial in `e1..ek` standing for a symmetric polynomial in `k` roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementaryBasisPoly {
    pub poly: MultiPoly,
    pub arity: usize,
}

impl ElementaryBasisPoly {
    /// Substitutes `e_i <- sigma_i(l1..lk)` and expands.
    pub fn to_roots(&self) -> MultiPoly {
        let bindings = (1..=self.arity)
            .map(|i| {
                let e = elementary_symmetric(i, self.arity).expect("i <= arity");
                (VariableId::Elementary(i as u32), e)
            })
            .collect();
        self.poly.substitute(&bindings)
    }

    /// Degree with `e_i` weighted `i`; equals the root degree of the input.
    pub fn weighted_degree(&self) -> Option<u32> {
        self.poly
            .terms()
            .map(|(m, _)| {
                m.factors()
                    .iter()
                    .map(|&(v, e)| match v {
                        VariableId::Elementary(i) => i * e,
                        _ => unreachable!("elementary basis polynomial has only e variables"),
                    })
                    .sum()
            })
            .max()
    }
}

/// The `i`-th elementary symmetric polynomial in `l1..lk`; `i = 0` gives 1.
pub fn elementary_symmetric(i: usize, k: usize) -> Result<MultiPoly> {
    if i > k {
        return Err(Error::IndexOutOfRange { index: i, degree: k });
    }
    let mut terms = Vec::new();
    for_each_subset(k, i, |subset| {
        let m = Monomial::from_pairs(subset.iter().map(|&j| (VariableId::Root(j as u32 + 1), 1)));
        terms.push((m, Rational::one()));
    });
    Ok(MultiPoly::from_terms(terms))
}

/// Calls `f` with every `size`-subset of `0..n`, in lexicographic order.
fn for_each_subset<F: FnMut(&[usize])>(n: usize, size: usize, mut f: F) {
    fn rec<F: FnMut(&[usize])>(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, f: &mut F) {
        if cur.len() == size {
            f(cur);
            return;
        }
        for j in start..n {
            if n - j < size - cur.len() {
                break;
            }
            cur.push(j);
            rec(j + 1, n, size, cur, f);
            cur.pop();
        }
    }
    rec(0, n, size, &mut Vec::with_capacity(size), &mut f);
}

fn check_root_variables(p: &MultiPoly, k: usize) -> Result<()> {
    for v in p.variables() {
        match v {
            VariableId::Root(i) if (1..=k as u32).contains(&i) => {}
            other => return Err(Error::NonRootVariable(other.to_string())),
        }
    }
    Ok(())
}

fn swap_roots(p: &MultiPoly, i: usize) -> MultiPoly {
    let (a, b) = (VariableId::Root(i as u32), VariableId::Root(i as u32 + 1));
    MultiPoly::from_terms(p.terms().map(|(m, c)| {
        let swapped = m.factors().iter().map(|&(v, e)| {
            if v == a {
                (b, e)
            } else if v == b {
                (a, e)
            } else {
                (v, e)
            }
        });
        (Monomial::from_pairs(swapped), c.clone())
    }))
}

/// First adjacent transposition `(i, i+1)` that moves `p`, if any.
pub fn symmetry_witness(p: &MultiPoly, k: usize) -> Result<Option<(usize, usize)>> {
    check_root_variables(p, k)?;
    Ok((1..k).find(|&i| swap_roots(p, i) != *p).map(|i| (i, i + 1)))
}

/// True iff `p` is fixed by every adjacent transposition of `l1..lk`.
pub fn is_symmetric(p: &MultiPoly, k: usize) -> Result<bool> {
    symmetry_witness(p, k).map(|w| w.is_none())
}

type Exponents = Vec<u32>;

/// Coefficients of a symmetric polynomial on sorted (non-increasing) exponent
/// vectors only.
type Compact = HashMap<Exponents, Rational>;

fn dense_exponents(m: &Monomial, k: usize) -> Exponents {
    let mut out = vec![0; k];
    for &(v, e) in m.factors() {
        if let VariableId::Root(i) = v {
            out[i as usize - 1] = e;
        }
    }
    out
}

fn is_sorted_desc(c: &[u32]) -> bool {
    c.windows(2).all(|w| w[0] >= w[1])
}

fn sorted_desc(mut c: Exponents) -> Exponents {
    c.sort_unstable_by(|a, b| b.cmp(a));
    c
}

/// `f * e_j` in compact form.
fn mul_elementary(f: &Compact, j: usize, k: usize) -> Compact {
    let mut subsets = Vec::new();
    for_each_subset(k, j, |s| subsets.push(s.to_vec()));

    let mut targets: Vec<Exponents> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for s in f.keys() {
        for subset in &subsets {
            let mut u = s.clone();
            for &i in subset {
                u[i] += 1;
            }
            let t = sorted_desc(u);
            if seen.insert(t.clone()) {
                targets.push(t);
            }
        }
    }

    let mut out = Compact::with_capacity(targets.len());
    for t in targets {
        let mut acc = Rational::zero();
        for subset in &subsets {
            if subset.iter().any(|&i| t[i] == 0) {
                continue;
            }
            let mut v = t.clone();
            for &i in subset {
                v[i] -= 1;
            }
            if let Some(c) = f.get(&sorted_desc(v)) {
                acc += c;
            }
        }
        if !acc.is_zero() {
            out.insert(t, acc);
        }
    }
    out
}

struct PowerCache {
    k: usize,
    cache: HashMap<Exponents, Rc<Compact>>,
}

impl PowerCache {
    fn new(k: usize) -> Self {
        let mut cache = HashMap::new();
        let mut one = Compact::new();
        one.insert(vec![0; k], Rational::one());
        cache.insert(vec![0; k], Rc::new(one));
        PowerCache { k, cache }
    }

    /// Compact form of `e1^alpha1 * ... * ek^alphak`.
    fn get(&mut self, alpha: &[u32]) -> Rc<Compact> {
        if let Some(c) = self.cache.get(alpha) {
            return c.clone();
        }
        let j = alpha.iter().position(|&a| a > 0).expect("zero exponent is cached");
        let mut lower = alpha.to_vec();
        lower[j] -= 1;
        let base = self.get(&lower);
        let product = Rc::new(mul_elementary(&base, j + 1, self.k));
        self.cache.insert(alpha.to_vec(), product.clone());
        product
    }
}

/// Rewrites a symmetric polynomial in `l1..lk` as a polynomial in `e1..ek`.
pub fn to_elementary(p: &MultiPoly, k: usize) -> Result<ElementaryBasisPoly> {
    if let Some((i, j)) = symmetry_witness(p, k)? {
        return Err(Error::NotSymmetric(i, j));
    }

    // Pure lex on exponent vectors is the derived Vec order.
    let mut rest: BTreeMap<Exponents, Rational> = p
        .terms()
        .map(|(m, c)| (dense_exponents(m, k), c.clone()))
        .filter(|(e, _)| is_sorted_desc(e))
        .collect();

    let mut cache = PowerCache::new(k);
    let mut out = Vec::new();
    let mut previous: Option<Exponents> = None;
    while let Some((lead, coeff)) = rest.iter().next_back() {
        let (lead, coeff) = (lead.clone(), coeff.clone());
        if let Some(prev) = &previous {
            assert!(lead < *prev, "elimination must strictly lower the leading exponent");
        }
        let alpha: Exponents = (0..k)
            .map(|i| lead[i] - lead.get(i + 1).copied().unwrap_or(0))
            .collect();
        let expansion = cache.get(&alpha);
        debug_assert_eq!(expansion.get(&lead), Some(&Rational::one()));
        for (e, c) in expansion.iter() {
            let entry = rest.entry(e.clone()).or_insert_with(Rational::zero);
            *entry -= c * &coeff;
            if entry.is_zero() {
                rest.remove(e);
            }
        }
        let mono = Monomial::from_pairs(
            alpha
                .iter()
                .enumerate()
                .map(|(i, &a)| (VariableId::Elementary(i as u32 + 1), a)),
        );
        out.push((mono, coeff));
        previous = Some(lead);
    }

    let result = ElementaryBasisPoly {
        poly: MultiPoly::from_terms(out),
        arity: k,
    };
    #[cfg(test)]
    assert_eq!(result.to_roots(), *p, "back-substitution must reproduce the input");
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::int;
    use proptest::prelude::*;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    fn all_pairs_product(k: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        for i in 1..=k {
            for j in i + 1..=k {
                acc = acc * p(&format!("(l{i} - l{j})^2"));
            }
        }
        acc
    }

    #[test]
    fn elementary_examples() {
        assert_eq!(elementary_symmetric(1, 2).unwrap(), p("l1 + l2"));
        assert_eq!(elementary_symmetric(2, 3).unwrap(), p("l1*l2 + l1*l3 + l2*l3"));
        assert_eq!(elementary_symmetric(0, 5).unwrap(), MultiPoly::one());
        assert_eq!(elementary_symmetric(4, 4).unwrap(), p("l1*l2*l3*l4"));
        assert!(matches!(
            elementary_symmetric(3, 2),
            Err(Error::IndexOutOfRange { index: 3, degree: 2 })
        ));
    }

    #[test]
    fn symmetry_examples() {
        assert!(is_symmetric(&p("(l1 - l2)^2"), 2).unwrap());
        assert!(!is_symmetric(&p("l1 - l2"), 2).unwrap());
        assert!(is_symmetric(&all_pairs_product(4), 4).unwrap());
        assert!(!is_symmetric(&p("l1^2*l2 + l2^2*l3 + l3^2*l1"), 3).unwrap());
        assert!(matches!(is_symmetric(&p("l1 + a"), 2), Err(Error::NonRootVariable(_))));
        assert!(matches!(is_symmetric(&p("l3"), 2), Err(Error::NonRootVariable(_))));
    }

    #[test]
    fn to_elementary_examples() {
        assert_eq!(to_elementary(&p("l1^2 + l2^2"), 2).unwrap().poly, p("e1^2 - 2*e2"));
        assert_eq!(to_elementary(&p("(l1 - l2)^2"), 2).unwrap().poly, p("e1^2 - 4*e2"));
        let s3 = p("(l1 - l2)^2 + (l1 - l3)^2 + (l2 - l3)^2");
        assert_eq!(to_elementary(&s3, 3).unwrap().poly, p("2*e1^2 - 6*e2"));
        assert_eq!(
            to_elementary(&MultiPoly::integer(7), 3).unwrap().poly,
            MultiPoly::integer(7)
        );
        assert_eq!(to_elementary(&MultiPoly::zero(), 3).unwrap().poly, MultiPoly::zero());
    }

    #[test]
    fn quadratic_and_cubic_discriminants() {
        let d3 = to_elementary(&all_pairs_product(3), 3).unwrap();
        assert_eq!(d3.poly, p("e1^2*e2^2 - 4*e2^3 - 4*e1^3*e3 + 18*e1*e2*e3 - 27*e3^2"));
        assert_eq!(d3.weighted_degree(), Some(6));
    }

    #[test]
    fn rejects_asymmetric_input_with_witness() {
        assert_eq!(
            to_elementary(&p("l1^2 + l2 + l3"), 3).unwrap_err(),
            Error::NotSymmetric(1, 2)
        );
        assert_eq!(
            to_elementary(&p("l1 + l2 + 2*l3"), 3).unwrap_err(),
            Error::NotSymmetric(2, 3)
        );
    }

    #[test]
    fn compact_product_matches_expansion() {
        // e1 * e2 in three roots
        let mut one = Compact::new();
        one.insert(vec![0, 0, 0], int(1));
        let e1 = mul_elementary(&one, 1, 3);
        let e1e2 = mul_elementary(&e1, 2, 3);
        let full = elementary_symmetric(1, 3).unwrap() * elementary_symmetric(2, 3).unwrap();
        for (m, c) in full.terms() {
            let e = dense_exponents(m, 3);
            if is_sorted_desc(&e) {
                assert_eq!(e1e2.get(&e), Some(c), "{m}");
            }
        }
        assert_eq!(e1e2.len(), 2); // l1^2 l2 and l1 l2 l3
    }

    /// Symmetric polynomials built by summing a random monomial over its orbit.
    fn symmetric_poly(k: usize) -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec((prop::collection::vec(0u32..=3, k), -5i64..=5), 1..4).prop_map(move |seeds| {
            let mut acc = MultiPoly::zero();
            for (exps, c) in seeds {
                let mut orbit = std::collections::BTreeSet::new();
                permutations(&exps, &mut orbit);
                for e in orbit {
                    let m =
                        Monomial::from_pairs(e.iter().enumerate().map(|(i, &x)| (VariableId::Root(i as u32 + 1), x)));
                    acc = acc + MultiPoly::monomial(m, int(c));
                }
            }
            acc
        })
    }

    fn permutations(v: &[u32], out: &mut std::collections::BTreeSet<Vec<u32>>) {
        fn rec(cur: &mut Vec<u32>, rest: &mut Vec<u32>, out: &mut std::collections::BTreeSet<Vec<u32>>) {
            if rest.is_empty() {
                out.insert(cur.clone());
                return;
            }
            for i in 0..rest.len() {
                let x = rest.remove(i);
                cur.push(x);
                rec(cur, rest, out);
                cur.pop();
                rest.insert(i, x);
            }
        }
        rec(&mut Vec::new(), &mut v.to_vec(), out);
    }

    proptest! {
        #[test]
        fn linear_and_degree_preserving(x in symmetric_poly(3), y in symmetric_poly(3)) {
            let ex = to_elementary(&x, 3).unwrap();
            let ey = to_elementary(&y, 3).unwrap();
            let sum = to_elementary(&(&x + &y), 3).unwrap();
            prop_assert_eq!(sum.poly, &ex.poly + &ey.poly);
            prop_assert_eq!(ex.weighted_degree(), x.degree());
            prop_assert_eq!(ex.to_roots(), x);
        }
    }
}
