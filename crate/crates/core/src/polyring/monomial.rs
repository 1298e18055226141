use std::cmp::Ordering;
use std::fmt;

use super::VariableId;

/// A power product of variables, stored sparsely and sorted by variable.
///
/// `Ord` is graded lexicographic: total degree first, then the exponent of the
/// smallest variable decides, with the larger exponent winning. This is the
/// order used for serialization (`a^2*d^2` precedes `a*b*c*d`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(VariableId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VariableId) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn var_pow(v: VariableId, e: u32) -> Self {
        if e == 0 {
            Self::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    /// Builds a monomial from arbitrary `(variable, exponent)` pairs, merging
    /// repeats and dropping zero exponents.
    pub fn from_pairs<I: IntoIterator<Item = (VariableId, u32)>>(pairs: I) -> Self {
        let mut v: Vec<_> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        v.sort_by_key(|&(var, _)| var);
        let mut out: Vec<(VariableId, u32)> = Vec::with_capacity(v.len());
        for (var, e) in v {
            match out.last_mut() {
                Some((last, acc)) if *last == var => *acc += e,
                _ => out.push((var, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: VariableId) -> u32 {
        self.0
            .binary_search_by_key(&v, |&(var, _)| var)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> &[(VariableId, u32)] {
        &self.0
    }

    pub fn variables(&self) -> impl Iterator<Item = VariableId> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let d = other.0[j].1;
                j += 1;
                match e.cmp(&d) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - d)),
                }
            } else {
                out.push((v, e));
            }
        }
        (j == other.0.len()).then_some(Monomial(out))
    }

    pub fn pow(&self, n: u32) -> Monomial {
        if n == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(v, e)| (v, e * n)).collect())
    }

    /// Splits into the part over variables accepted by `keep` and the rest.
    pub fn split<F: Fn(VariableId) -> bool>(&self, keep: F) -> (Monomial, Monomial) {
        let (a, b): (Vec<_>, Vec<_>) = self.0.iter().partition(|&&(v, _)| keep(v));
        (Monomial(a), Monomial(b))
    }

    /// Degree-reverse-lexicographic comparison: total degree first, then the
    /// greatest variable where the exponents differ decides, with the smaller
    /// exponent winning. Used to pick the sign-normalizing leading term.
    pub fn cmp_grevlex(&self, other: &Monomial) -> Ordering {
        let d = self.degree().cmp(&other.degree());
        if d != Ordering::Equal {
            return d;
        }
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (a.len(), b.len());
        while i > 0 && j > 0 {
            let (va, ea) = a[i - 1];
            let (vb, eb) = b[j - 1];
            match va.cmp(&vb) {
                // `a` carries a larger variable that `b` lacks.
                Ordering::Greater => return Ordering::Less,
                Ordering::Less => return Ordering::Greater,
                Ordering::Equal => {
                    if ea != eb {
                        return eb.cmp(&ea);
                    }
                    i -= 1;
                    j -= 1;
                }
            }
        }
        match (i, j) {
            (0, 0) => Ordering::Equal,
            (0, _) => Ordering::Greater,
            _ => Ordering::Less,
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.degree().cmp(&other.degree());
        if d != Ordering::Equal {
            return d;
        }
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let (va, ea) = a[i];
            let (vb, eb) = b[j];
            match va.cmp(&vb) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => {
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        (a.len() - i).cmp(&(b.len() - j))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (n, &(v, e)) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}
