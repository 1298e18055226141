//! From a coincidence type to polynomial equations in the coefficients.
//!
//! Stages: [`define`] → [`normalize`] → [`reduce_orbits`] → [`root_system`] →
//! [`symmetrize`] → [`vieta_substitute`] per equation → [`prune_redundant`].
//! [`run_pipeline`] keeps every intermediate so each can be printed.
//!
//! Denominators from Vieta substitution are cleared with powers of the leading
//! coefficient `a`. On the chart `a != 0` this changes nothing; forms with a
//! root at infinity are outside what the systems describe.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde_json::json;

use crate::coincidence::{
    define, normalize_with_cap, reduce_orbits_with_cap, Atom, CoincidenceExpr, DegeneracyPartition, Form,
    DEFAULT_CLAUSE_CAP, DEFAULT_ENUMERATION_CAP,
};
use crate::error::{Error, Result};
use crate::polyring::{parse_rational, Monomial, MultiPoly, Rational, VariableId};
use crate::symmetric::to_elementary;

/// Size limits for the combinatorial stages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Capacity {
    /// Largest degree accepted for every partition.
    pub max_degree: usize,
    /// One degree above `max_degree`, accepted when the reduced system has at
    /// most `extended_max_clauses` clauses and its symmetrized product, of
    /// root degree `2 * (total atoms)`, stays within `extended_max_root_degree`.
    pub extended_degree: usize,
    pub extended_max_clauses: usize,
    pub extended_max_root_degree: usize,
    /// Raw clause limit for one distribution step of normalization.
    pub clause_cap: usize,
    /// Largest degree for set-partition enumeration.
    pub enumeration_cap: usize,
    /// Largest degree for the Sylvester-determinant discriminant.
    pub resultant_max_degree: usize,
}

impl Default for Capacity {
    fn default() -> Self {
        Capacity {
            max_degree: 4,
            extended_degree: 5,
            extended_max_clauses: 12,
            extended_max_root_degree: 40,
            clause_cap: DEFAULT_CLAUSE_CAP,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            resultant_max_degree: 6,
        }
    }
}

impl Capacity {
    /// Overrides from a `key=value` comma list, e.g.
    /// `max_degree=5,extended_clauses=20`. Keys: `max_degree`,
    /// `extended_degree`, `extended_clauses`, `extended_root_degree`,
    /// `clause_cap`, `enumeration`, `resultant`.
    pub fn with_overrides(mut self, list: &str) -> Result<Self> {
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("capacity override {item:?} is not key=value")))?;
            let n: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("capacity value {value:?} is not a number")))?;
            match key.trim() {
                "max_degree" => self.max_degree = n,
                "extended_degree" => self.extended_degree = n,
                "extended_clauses" => self.extended_max_clauses = n,
                "extended_root_degree" => self.extended_max_root_degree = n,
                "clause_cap" => self.clause_cap = n,
                "enumeration" => self.enumeration_cap = n,
                "resultant" => self.resultant_max_degree = n,
                other => return Err(Error::Parse(format!("unknown capacity key {other:?}"))),
            }
        }
        Ok(self)
    }

    fn check_system(&self, degree: usize, clauses: &[Vec<Atom>]) -> Result<()> {
        if degree <= self.max_degree {
            return Ok(());
        }
        let m = clauses.len();
        let root_degree = 2 * clauses.iter().map(Vec::len).sum::<usize>();
        if degree <= self.extended_degree
            && m <= self.extended_max_clauses
            && root_degree <= self.extended_max_root_degree
        {
            return Ok(());
        }
        Err(Error::Capacity(format!(
            "degree {degree} with {m} clauses of root degree {root_degree} (limits: degree {} for any partition, degree {} with at most {} clauses and root degree {})",
            self.max_degree, self.extended_degree, self.extended_max_clauses, self.extended_max_root_degree
        )))
    }
}

/// Coefficients `(a_k, ..., a_0)` of a binary form, leading coefficient first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoefficientVector {
    coeffs: Vec<Rational>,
}

impl CoefficientVector {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::Parse("a binary form needs at least two coefficients".into()));
        }
        Ok(CoefficientVector { coeffs })
    }

    pub fn from_integers(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    /// Parses `1,-4,5/2,-2`; `degree`, when given, must match.
    pub fn parse(degree: Option<usize>, s: &str) -> Result<Self> {
        let coeffs = s.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
        let v = Self::new(coeffs)?;
        match degree {
            Some(k) if k != v.degree() => Err(Error::DegreeMismatch {
                expected: k,
                found: v.degree(),
            }),
            _ => Ok(v),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Leading-first coefficients.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading(&self) -> &Rational {
        &self.coeffs[0]
    }

    /// Coefficient of `x^power y^(k - power)`.
    pub fn of_power(&self, power: usize) -> &Rational {
        &self.coeffs[self.degree() - power]
    }

    /// Binding of the coefficient variables to this form's values.
    pub fn point(&self) -> BTreeMap<VariableId, Rational> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(p, c)| (VariableId::Coeff(p as u32), c.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for CoefficientVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// One polynomial per clause: the product of `(l_i - l_j)^2` over its atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    pub degree: usize,
    pub clauses: Vec<Vec<Atom>>,
    pub polys: Vec<MultiPoly>,
}

fn squared_difference(a: &Atom) -> MultiPoly {
    let d = &MultiPoly::var(VariableId::Root(a.i() as u32)) - &MultiPoly::var(VariableId::Root(a.j() as u32));
    &d * &d
}

pub fn root_system(cnf: &CoincidenceExpr) -> Result<RootSystem> {
    if cnf.form() != Form::ConjunctionOfDisjunctions {
        return Err(Error::Parse("root system needs a conjunctive normal form".into()));
    }
    let polys = cnf
        .groups()
        .iter()
        .map(|clause| clause.iter().map(squared_difference).product())
        .collect();
    Ok(RootSystem {
        degree: cnf.degree(),
        clauses: cnf.groups().to_vec(),
        polys,
    })
}

/// The elementary symmetric combinations `e_1(P), ..., e_m(P)` of the system's
/// polynomials, computed as the coefficients of `prod (1 + t P_i)`.
pub fn symmetrize(rs: &RootSystem) -> Vec<MultiPoly> {
    let m = rs.polys.len();
    let mut e = vec![MultiPoly::zero(); m + 1];
    e[0] = MultiPoly::one();
    for (n, p) in rs.polys.iter().enumerate() {
        for j in (1..=n + 1).rev() {
            let term = &e[j - 1] * p;
            e[j] = &e[j] + &term;
        }
    }
    e.remove(0);
    e
}

/// Result of rewriting a symmetric root polynomial in the coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VietaImage {
    /// Primitive, sign-normalized polynomial in the coefficients.
    pub poly: MultiPoly,
    /// `a^cleared_power * input = content * poly` under Vieta's formulas.
    pub content: Rational,
    pub cleared_power: u32,
}

/// Substitutes `e_i = (-1)^i a_(k-i) / a_k`, clears the smallest power of
/// `a_k` that makes the result a polynomial, then normalizes.
pub fn vieta_substitute(sym: &MultiPoly, k: usize) -> Result<VietaImage> {
    let basis = to_elementary(sym, k)?;
    let lead = VariableId::Coeff(0);
    let size = |m: &Monomial| m.degree();
    let cleared_power = basis
        .poly
        .terms()
        .map(|(m, _)| size(m))
        .max()
        .ok_or(Error::ZeroPolynomial)?;

    let mut terms = Vec::with_capacity(basis.poly.len());
    for (m, c) in basis.poly.terms() {
        let mut weight = 0u32;
        let mut pairs = vec![(lead, cleared_power - size(m))];
        for &(v, e) in m.factors() {
            let VariableId::Elementary(i) = v else {
                unreachable!("elementary basis holds e variables only")
            };
            weight += i * e;
            pairs.push((VariableId::Coeff(i), e));
        }
        let c = if weight % 2 == 1 { -c.clone() } else { c.clone() };
        terms.push((Monomial::from_pairs(pairs), c));
    }
    let cleared = MultiPoly::from_terms(terms);
    let (content, poly) = cleared.primitive_parts()?;
    Ok(VietaImage {
        poly,
        content,
        cleared_power,
    })
}

/// `prod_{i<j} (l_i - l_j)^2` in `k` roots.
pub fn root_discriminant(k: usize) -> MultiPoly {
    let mut acc = MultiPoly::one();
    for i in 1..=k {
        for j in i + 1..=k {
            acc = &acc * &squared_difference(&Atom::new(i, j));
        }
    }
    acc
}

/// The discriminant of the degree-`k` form, from the product of squared root
/// differences.
pub fn discriminant(k: usize) -> Result<MultiPoly> {
    if k < 2 {
        return Err(Error::IndexOutOfRange { index: k, degree: 2 });
    }
    Ok(vieta_substitute(&root_discriminant(k), k)?.poly)
}

pub fn resultant_discriminant(k: usize) -> Result<MultiPoly> {
    resultant_discriminant_with_cap(k, Capacity::default().resultant_max_degree)
}

/// The discriminant from the Sylvester resultant of the form and its
/// derivative, `Res(P, P') = ± a_k Disc(P)`, with symbolic coefficients.
pub fn resultant_discriminant_with_cap(k: usize, cap: usize) -> Result<MultiPoly> {
    if k < 2 {
        return Err(Error::IndexOutOfRange { index: k, degree: 2 });
    }
    if k > cap {
        return Err(Error::Capacity(format!(
            "resultant discriminant of degree {k} (cap {cap})"
        )));
    }
    let coeff = |p: usize| MultiPoly::var(VariableId::Coeff(p as u32));
    // Leading-first coefficients of P and P'.
    let p: Vec<MultiPoly> = (0..=k).map(coeff).collect();
    let dp: Vec<MultiPoly> = (0..k)
        .map(|pos| coeff(pos).scale(&Rational::from_integer(((k - pos) as i64).into())))
        .collect();
    let n = 2 * k - 1;
    let mut matrix = vec![vec![MultiPoly::zero(); n]; n];
    for r in 0..k - 1 {
        for (c, x) in p.iter().enumerate() {
            matrix[r][r + c] = x.clone();
        }
    }
    for r in 0..k {
        for (c, x) in dp.iter().enumerate() {
            matrix[k - 1 + r][r + c] = x.clone();
        }
    }
    let res = determinant(&matrix);
    let disc = res
        .div_exact(&coeff(0))?
        .ok_or_else(|| Error::Parse("resultant not divisible by the leading coefficient".into()))?;
    disc.primitive_normalize()
}

/// Determinant by Laplace expansion along rows, memoized on the set of
/// columns still available.
pub fn determinant(matrix: &[Vec<MultiPoly>]) -> MultiPoly {
    fn minor(matrix: &[Vec<MultiPoly>], row: usize, cols: u64, memo: &mut HashMap<u64, MultiPoly>) -> MultiPoly {
        if row == matrix.len() {
            return MultiPoly::one();
        }
        if let Some(m) = memo.get(&cols) {
            return m.clone();
        }
        let mut acc = MultiPoly::zero();
        let mut position = 0;
        for c in 0..matrix.len() {
            if cols >> c & 1 == 0 {
                continue;
            }
            let entry = &matrix[row][c];
            if !entry.is_zero() {
                let sub = minor(matrix, row + 1, cols & !(1 << c), memo);
                let term = entry * &sub;
                acc = if position % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            position += 1;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    let n = matrix.len();
    assert!(
        n < 64 && matrix.iter().all(|r| r.len() == n),
        "square matrix below 64 columns"
    );
    minor(matrix, 0, (1u64 << n) - 1, &mut HashMap::new())
}

/// One equation of a coefficient-space system with its provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub poly: MultiPoly,
    /// `j` in `e_j(P_1, ..., P_m)`, 1-based.
    pub symmetric_index: usize,
    pub content: Rational,
    pub cleared_power: u32,
}

/// An equation dropped because an earlier kept equation divides it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pruned {
    pub equation: Equation,
    /// Symmetric index of the kept divisor.
    pub divisor: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationSystem {
    pub degree: usize,
    pub partition: DegeneracyPartition,
    pub clause_count: usize,
    pub equations: Vec<Equation>,
    pub pruned: Vec<Pruned>,
}

impl EquationSystem {
    pub fn polys(&self) -> Vec<&MultiPoly> {
        self.equations.iter().map(|e| &e.poly).collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# {} (degree {}, partition {}), {} clause(s)\n",
            self.partition.stratum_name(),
            self.degree,
            self.partition,
            self.clause_count
        );
        for e in &self.equations {
            out.push_str(&format!(
                "{} = 0    # j={} content={} cleared=a^{}\n",
                e.poly, e.symmetric_index, e.content, e.cleared_power
            ));
        }
        for p in &self.pruned {
            out.push_str(&format!(
                "# pruned j={}: divisible by j={}\n",
                p.equation.symmetric_index, p.divisor
            ));
        }
        out
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let eq = |e: &Equation| {
            json!({
                "symmetric_index": e.symmetric_index,
                "content": e.content.to_string(),
                "cleared_power": e.cleared_power,
                "text": e.poly.to_string(),
                "poly": e.poly.to_json_value(),
            })
        };
        json!({
            "stratum": self.partition.stratum_name(),
            "degree": self.degree,
            "partition": self.partition.to_string(),
            "clause_count": self.clause_count,
            "equations": self.equations.iter().map(eq).collect::<Vec<_>>(),
            "pruned": self.pruned.iter().map(|p| {
                let mut v = eq(&p.equation);
                v["divisible_by"] = json!(p.divisor);
                v
            }).collect::<Vec<_>>(),
        })
    }

    /// `align*` block; with `with_constants` each line carries the content
    /// factor discarded by normalization, e.g. `2(b^2-3ac)=0`.
    pub fn to_latex(&self, with_constants: bool) -> String {
        let lines: Vec<String> = self
            .equations
            .iter()
            .map(|e| {
                let body = crate::polyring::latex(&e.poly);
                let lhs = if !with_constants || e.content.is_one() {
                    body
                } else if e.content == -Rational::one() {
                    format!("-({body})")
                } else {
                    format!("{}({body})", crate::polyring::latex_rational(&e.content))
                };
                format!("&{lhs}=0")
            })
            .collect();
        format!(
            "\\begin{{align*}}\n{}\n\\end{{align*}}\n",
            lines.join(",\n\\\\[3mm]\n") + "."
        )
    }
}

/// Drops every equation divisible by an earlier kept one.
pub fn prune_redundant(sys: &EquationSystem) -> Result<EquationSystem> {
    let mut kept: Vec<Equation> = Vec::new();
    let mut pruned = sys.pruned.clone();
    for e in &sys.equations {
        let mut divisor = None;
        for k in &kept {
            if k.poly.divides(&e.poly)? {
                divisor = Some(k.symmetric_index);
                break;
            }
        }
        match divisor {
            Some(d) => pruned.push(Pruned {
                equation: e.clone(),
                divisor: d,
            }),
            None => kept.push(e.clone()),
        }
    }
    Ok(EquationSystem {
        equations: kept,
        pruned,
        ..sys.clone()
    })
}

/// Every stage of the generation pipeline.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub partition: DegeneracyPartition,
    pub definition: CoincidenceExpr,
    pub cnf: CoincidenceExpr,
    pub reduced: CoincidenceExpr,
    pub root_system: RootSystem,
    pub symmetrized: Vec<MultiPoly>,
    pub unpruned: EquationSystem,
    pub system: EquationSystem,
}

pub fn run_pipeline(partition: &DegeneracyPartition, cap: &Capacity) -> Result<Pipeline> {
    let k = partition.degree();
    if k > cap.max_degree.max(cap.extended_degree) {
        return Err(Error::Capacity(format!("degree {k} exceeds every configured limit")));
    }
    let definition = define(partition)?;
    let cnf = normalize_with_cap(&definition, cap.clause_cap)?;
    let reduced = reduce_orbits_with_cap(&cnf, cap.enumeration_cap)?;
    cap.check_system(k, reduced.groups())?;
    let rs = root_system(&reduced)?;
    let symmetrized = symmetrize(&rs);

    let mut equations = Vec::with_capacity(symmetrized.len());
    for (j, s) in symmetrized.iter().enumerate() {
        let image = vieta_substitute(s, k)?;
        equations.push(Equation {
            poly: image.poly,
            symmetric_index: j + 1,
            content: image.content,
            cleared_power: image.cleared_power,
        });
    }
    let unpruned = EquationSystem {
        degree: k,
        partition: partition.clone(),
        clause_count: rs.polys.len(),
        equations,
        pruned: Vec::new(),
    };
    let system = prune_redundant(&unpruned)?;
    Ok(Pipeline {
        partition: partition.clone(),
        definition,
        cnf,
        reduced,
        root_system: rs,
        symmetrized,
        unpruned,
        system,
    })
}

/// The pruned coefficient-space system for a degeneracy type, default limits.
pub fn higher_discriminant_system(partition: &DegeneracyPartition) -> Result<EquationSystem> {
    higher_discriminant_system_with_capacity(partition, &Capacity::default())
}

pub fn higher_discriminant_system_with_capacity(
    partition: &DegeneracyPartition,
    cap: &Capacity,
) -> Result<EquationSystem> {
    run_pipeline(partition, cap).map(|p| p.system)
}
