//! Logical definitions of root-coincidence types.
//!
//! Atoms `E_ij` state that roots `i` and `j` are equal. A degeneracy type is
//! defined as a disjunction over ways of grouping the roots, each disjunct the
//! conjunction of the within-group atoms. [`normalize`] turns that into
//! conjunctive normal form, whose clauses become products of squared root
//! differences in the generator.
//!
//! Expressions store AND/OR semantics directly. The sum-product rendering,
//! where `+` is AND and `×` is OR, only exists in [`CoincidenceExpr::to_sum_product`].

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// Maximum degree for exhaustive enumeration of set partitions.
pub const DEFAULT_ENUMERATION_CAP: usize = 10;

/// Maximum number of clauses a single distribution step may produce before
/// absorption.
pub const DEFAULT_CLAUSE_CAP: usize = 1_000_000;

/// A partition `k = k1 + ... + kp` with `k1 >= ... >= kp >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegeneracyPartition {
    degree: usize,
    parts: Vec<usize>,
}

impl DegeneracyPartition {
    /// Sorts the parts and pads with ones up to `degree`.
    pub fn new(degree: usize, parts: &[usize]) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidPartition("degree must be positive".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition("parts must be positive".into()));
        }
        let sum: usize = parts.iter().sum();
        if sum > degree {
            return Err(Error::InvalidPartition(format!(
                "parts sum to {sum}, more than the degree {degree}"
            )));
        }
        let mut parts = parts.to_vec();
        parts.resize(parts.len() + degree - sum, 1);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(DegeneracyPartition { degree, parts })
    }

    /// Parses a comma list such as `3,1` or `2, 2`.
    pub fn parse(degree: usize, s: &str) -> Result<Self> {
        let mut parts = Vec::new();
        for token in s.split(',') {
            let t = token.trim();
            match t.parse::<usize>() {
                Ok(n) if n > 0 => parts.push(n),
                _ => {
                    return Err(Error::InvalidPartition(format!("bad part {t:?} in {s:?}")));
                }
            }
        }
        Self::new(degree, &parts)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Parts larger than one; the only ones that constrain roots.
    pub fn nontrivial_parts(&self) -> &[usize] {
        let n = self.parts.iter().take_while(|&&p| p > 1).count();
        &self.parts[..n]
    }

    pub fn is_trivial(&self) -> bool {
        self.nontrivial_parts().is_empty()
    }

    /// `S^4_{3}`, `S^4_{2,2}`; singleton parts omitted.
    pub fn stratum_name(&self) -> String {
        let parts: Vec<String> = self.nontrivial_parts().iter().map(|p| p.to_string()).collect();
        if parts.is_empty() {
            format!("S^{}", self.degree)
        } else {
            format!("S^{}_{{{}}}", self.degree, parts.join(","))
        }
    }
}

impl fmt::Display for DegeneracyPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// All partitions of `k`, in reverse lexicographic order (`k` first).
pub fn integer_partitions(k: usize) -> Vec<DegeneracyPartition> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    rec(k, k, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .map(|parts| DegeneracyPartition { degree: k, parts })
        .collect()
}

/// The statement `E_ij`: roots `i` and `j` coincide (1-based, `i < j`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    i: usize,
    j: usize,
}

impl Atom {
    pub fn new(a: usize, b: usize) -> Self {
        assert!(a != b && a > 0 && b > 0, "atom needs two distinct 1-based roots");
        Atom {
            i: a.min(b),
            j: a.max(b),
        }
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    fn permuted(&self, perm: &[usize]) -> Atom {
        Atom::new(perm[self.i - 1], perm[self.j - 1])
    }

    fn fmt_conventional(&self) -> String {
        if self.j >= 10 {
            format!("E{}_{}", self.i, self.j)
        } else {
            format!("E{}{}", self.i, self.j)
        }
    }

    fn fmt_sum_product(&self) -> String {
        if self.j >= 10 {
            format!("E_{{{},{}}}", self.i, self.j)
        } else {
            format!("E_{}{}", self.i, self.j)
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_conventional())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Form {
    /// OR of AND-groups.
    DisjunctionOfConjunctions,
    /// AND of OR-clauses.
    ConjunctionOfDisjunctions,
}

/// A two-level logical expression over atoms for roots `1..=degree`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoincidenceExpr {
    degree: usize,
    form: Form,
    groups: Vec<Vec<Atom>>,
}

impl CoincidenceExpr {
    /// Sorts and deduplicates atoms within groups and the groups themselves.
    pub fn new(degree: usize, form: Form, groups: Vec<Vec<Atom>>) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::InvalidPartition("expression needs at least one group".into()));
        }
        let mut canon = BTreeSet::new();
        for g in groups {
            if g.is_empty() {
                return Err(Error::InvalidPartition("empty atom group".into()));
            }
            if let Some(a) = g.iter().find(|a| a.j > degree) {
                return Err(Error::IndexOutOfRange { index: a.j, degree });
            }
            let set: BTreeSet<Atom> = g.into_iter().collect();
            canon.insert(set.into_iter().collect::<Vec<_>>());
        }
        Ok(CoincidenceExpr {
            degree,
            form,
            groups: canon.into_iter().collect(),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn groups(&self) -> &[Vec<Atom>] {
        &self.groups
    }

    /// `(E12 & E34) | (E13 & E24)` for disjunctive form, `(E12 | E13) & E23`
    /// for conjunctive form.
    pub fn to_conventional(&self) -> String {
        let (inner, outer) = match self.form {
            Form::DisjunctionOfConjunctions => (" & ", " | "),
            Form::ConjunctionOfDisjunctions => (" | ", " & "),
        };
        let many = self.groups.len() > 1;
        let parts: Vec<String> = self
            .groups
            .iter()
            .map(|g| {
                let body: Vec<String> = g.iter().map(Atom::fmt_conventional).collect();
                if g.len() > 1 && many {
                    format!("({})", body.join(inner))
                } else {
                    body.join(inner)
                }
            })
            .collect();
        parts.join(outer)
    }

    /// Sum-product notation: `+` is AND, `×` is OR, and `×` binds tighter.
    pub fn to_sum_product(&self) -> String {
        let parts: Vec<String> = self
            .groups
            .iter()
            .map(|g| {
                let atoms: Vec<String> = g.iter().map(Atom::fmt_sum_product).collect();
                match self.form {
                    Form::DisjunctionOfConjunctions if g.len() > 1 && self.groups.len() > 1 => {
                        format!("({})", atoms.join("+"))
                    }
                    Form::DisjunctionOfConjunctions => atoms.join("+"),
                    Form::ConjunctionOfDisjunctions => atoms.join("×"),
                }
            })
            .collect();
        match self.form {
            Form::DisjunctionOfConjunctions => parts.join("×"),
            Form::ConjunctionOfDisjunctions => parts.join("+"),
        }
    }
}

impl fmt::Display for CoincidenceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_conventional())
    }
}

/// Which roots of a concrete form are equal: a set partition of `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoincidencePattern {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl CoincidencePattern {
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let k: usize = blocks.iter().map(Vec::len).sum();
        let mut block_of = vec![usize::MAX; k];
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        if blocks.iter().any(Vec::is_empty) {
            return Err(Error::InvalidPartition("empty block".into()));
        }
        blocks.sort();
        for (n, b) in blocks.iter().enumerate() {
            for &i in b {
                if i == 0 || i > k || block_of[i - 1] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("blocks do not partition 1..={k}")));
                }
                block_of[i - 1] = n;
            }
        }
        Ok(CoincidencePattern { blocks, block_of })
    }

    /// Consecutive blocks of the given sizes: `[2, 1]` gives `{1,2}{3}`.
    pub fn from_sizes(sizes: &[usize]) -> Self {
        let mut next = 1;
        let blocks = sizes
            .iter()
            .map(|&s| {
                let b: Vec<usize> = (next..next + s).collect();
                next += s;
                b
            })
            .collect();
        Self::new(blocks).expect("consecutive blocks partition the range")
    }

    fn from_labels(labels: &[usize]) -> Self {
        let nblocks = labels.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); nblocks];
        for (i, &l) in labels.iter().enumerate() {
            blocks[l].push(i + 1);
        }
        CoincidencePattern {
            blocks,
            block_of: labels.to_vec(),
        }
    }

    pub fn degree(&self) -> usize {
        self.block_of.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Block sizes, non-increasing.
    pub fn sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.blocks.iter().map(Vec::len).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    pub fn same_block(&self, i: usize, j: usize) -> bool {
        self.block_of[i - 1] == self.block_of[j - 1]
    }

    /// The pattern with blocks `a` and `b` merged.
    pub fn merge(&self, a: usize, b: usize) -> Self {
        let mut blocks = self.blocks.clone();
        let (lo, hi) = (a.min(b), a.max(b));
        let moved = blocks.remove(hi);
        blocks[lo].extend(moved);
        Self::new(blocks).expect("merging keeps a partition")
    }
}

impl fmt::Display for CoincidencePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            let items: Vec<String> = b.iter().map(|i| i.to_string()).collect();
            write!(f, "{{{}}}", items.join(","))?;
        }
        Ok(())
    }
}

/// Every set partition of `1..=k` (Bell(k) of them), via restricted growth
/// strings.
pub fn set_partitions(k: usize) -> Vec<CoincidencePattern> {
    fn rec(labels: &mut Vec<usize>, max: usize, k: usize, out: &mut Vec<CoincidencePattern>) {
        if labels.len() == k {
            out.push(CoincidencePattern::from_labels(labels));
            return;
        }
        let bound = if labels.is_empty() { 0 } else { max + 1 };
        for l in 0..=bound {
            labels.push(l);
            rec(labels, max.max(l), k, out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        rec(&mut Vec::with_capacity(k), 0, k, &mut out);
    }
    out
}

/// The definition `L[S^k_pi]`: OR over every way to place the roots into
/// groups of the partition's sizes, each disjunct the AND of all within-group
/// atoms. Singleton parts contribute nothing.
pub fn define(partition: &DegeneracyPartition) -> Result<CoincidenceExpr> {
    if partition.is_trivial() {
        return Err(Error::TrivialPartition(partition.to_string()));
    }
    let k = partition.degree();
    let sizes = partition.nontrivial_parts();
    let mut conjuncts: BTreeSet<Vec<Atom>> = BTreeSet::new();

    // Groups of equal size are generated with increasing smallest element so
    // that swapping them is not enumerated twice.
    fn place(
        sizes: &[usize],
        used: &mut Vec<bool>,
        min_start: usize,
        atoms: &mut Vec<Atom>,
        out: &mut BTreeSet<Vec<Atom>>,
        prev_size: usize,
    ) {
        let Some((&size, rest)) = sizes.split_first() else {
            let mut a = atoms.clone();
            a.sort();
            out.insert(a);
            return;
        };
        let k = used.len();
        let start = if size == prev_size { min_start } else { 0 };
        for first in start..k {
            if used[first] {
                continue;
            }
            used[first] = true;
            let mut group = vec![first];
            choose_rest(first + 1, size - 1, &mut group, used, &mut |group, used| {
                let before = atoms.len();
                for (x, &a) in group.iter().enumerate() {
                    for &b in &group[x + 1..] {
                        atoms.push(Atom::new(a + 1, b + 1));
                    }
                }
                place(rest, used, first + 1, atoms, out, size);
                atoms.truncate(before);
            });
            used[first] = false;
        }
    }

    fn choose_rest(
        from: usize,
        need: usize,
        group: &mut Vec<usize>,
        used: &mut Vec<bool>,
        f: &mut dyn FnMut(&[usize], &mut Vec<bool>),
    ) {
        if need == 0 {
            let g = group.clone();
            f(&g, used);
            return;
        }
        for x in from..used.len() {
            if used[x] {
                continue;
            }
            used[x] = true;
            group.push(x);
            choose_rest(x + 1, need - 1, group, used, f);
            group.pop();
            used[x] = false;
        }
    }

    place(sizes, &mut vec![false; k], 0, &mut Vec::new(), &mut conjuncts, 0);
    CoincidenceExpr::new(k, Form::DisjunctionOfConjunctions, conjuncts.into_iter().collect())
}

/// Index of every atom of degree `k` in a bit mask.
struct AtomIndex {
    atoms: Vec<Atom>,
    k: usize,
}

impl AtomIndex {
    fn new(k: usize) -> Self {
        let mut atoms = Vec::new();
        for i in 1..=k {
            for j in i + 1..=k {
                atoms.push(Atom::new(i, j));
            }
        }
        AtomIndex { atoms, k }
    }

    fn bit(&self, a: &Atom) -> u128 {
        // Row-major position of (i, j) in the strict upper triangle.
        let (i, j, k) = (a.i - 1, a.j - 1, self.k);
        let pos = i * (2 * k - i - 1) / 2 + (j - i - 1);
        1u128 << pos
    }

    fn mask(&self, group: &[Atom]) -> u128 {
        group.iter().fold(0, |m, a| m | self.bit(a))
    }

    fn unmask(&self, mask: u128) -> Vec<Atom> {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(n, _)| mask >> n & 1 == 1)
            .map(|(_, a)| *a)
            .collect()
    }
}

/// Keeps only the inclusion-minimal masks.
fn absorb(mut clauses: Vec<u128>) -> Vec<u128> {
    clauses.sort_unstable_by_key(|m| (m.count_ones(), *m));
    clauses.dedup();
    let mut kept: Vec<u128> = Vec::with_capacity(clauses.len());
    for c in clauses {
        if !kept.iter().any(|&k| k & !c == 0) {
            kept.push(c);
        }
    }
    kept
}

/// Conjunctive normal form with duplicate atoms and absorbed clauses removed.
pub fn normalize(expr: &CoincidenceExpr) -> Result<CoincidenceExpr> {
    normalize_with_cap(expr, DEFAULT_CLAUSE_CAP)
}

pub fn normalize_with_cap(expr: &CoincidenceExpr, cap: usize) -> Result<CoincidenceExpr> {
    let k = expr.degree;
    if k > 16 {
        return Err(Error::Capacity(format!("degree {k} exceeds the atom mask width")));
    }
    let index = AtomIndex::new(k);
    let clauses = match expr.form {
        Form::ConjunctionOfDisjunctions => absorb(expr.groups.iter().map(|g| index.mask(g)).collect()),
        Form::DisjunctionOfConjunctions => {
            // Distribute one conjunct at a time, absorbing after every step.
            let mut acc: Vec<u128> = vec![0];
            for conj in &expr.groups {
                let raw = acc.len().saturating_mul(conj.len());
                if raw > cap {
                    return Err(Error::Capacity(format!(
                        "distribution would produce {raw} clauses (cap {cap})"
                    )));
                }
                let mut next = Vec::with_capacity(raw);
                for &c in &acc {
                    for a in conj {
                        next.push(c | index.bit(a));
                    }
                }
                acc = absorb(next);
            }
            acc
        }
    };
    CoincidenceExpr::new(
        k,
        Form::ConjunctionOfDisjunctions,
        clauses.into_iter().map(|m| index.unmask(m)).collect(),
    )
}

fn atom_holds(a: &Atom, pattern: &CoincidencePattern) -> bool {
    pattern.same_block(a.i, a.j)
}

/// Evaluates the expression with `E_ij` true iff `i` and `j` share a block.
pub fn holds(expr: &CoincidenceExpr, pattern: &CoincidencePattern) -> bool {
    debug_assert_eq!(expr.degree, pattern.degree());
    match expr.form {
        Form::DisjunctionOfConjunctions => expr.groups.iter().any(|g| g.iter().all(|a| atom_holds(a, pattern))),
        Form::ConjunctionOfDisjunctions => expr.groups.iter().all(|g| g.iter().any(|a| atom_holds(a, pattern))),
    }
}

/// True iff the partition's parts can be packed into the pattern's blocks,
/// each part wholly inside one block and no block over-filled.
pub fn pattern_matches(target: &DegeneracyPartition, pattern: &CoincidencePattern) -> bool {
    fn pack(parts: &[usize], room: &mut [usize]) -> bool {
        let Some((&p, rest)) = parts.split_first() else {
            return true;
        };
        for b in 0..room.len() {
            // Blocks with identical remaining room are interchangeable.
            if room[b] < p || room[..b].contains(&room[b]) {
                continue;
            }
            room[b] -= p;
            let ok = pack(rest, room);
            room[b] += p;
            if ok {
                return true;
            }
        }
        false
    }
    if target.degree() != pattern.degree() {
        return false;
    }
    let mut room = pattern.sizes();
    pack(target.nontrivial_parts(), &mut room)
}

/// Semantic equivalence by enumerating every set partition of `1..=k`.
pub fn equivalent(e1: &CoincidenceExpr, e2: &CoincidenceExpr, k: usize) -> Result<bool> {
    equivalent_with_cap(e1, e2, k, DEFAULT_ENUMERATION_CAP)
}

pub fn equivalent_with_cap(e1: &CoincidenceExpr, e2: &CoincidenceExpr, k: usize, cap: usize) -> Result<bool> {
    if k > cap {
        return Err(Error::Capacity(format!("enumeration of degree {k} exceeds cap {cap}")));
    }
    if e1.degree != k || e2.degree != k {
        return Err(Error::DegreeMismatch {
            expected: k,
            found: if e1.degree != k { e1.degree } else { e2.degree },
        });
    }
    Ok(set_partitions(k).iter().all(|p| holds(e1, p) == holds(e2, p)))
}

/// Partitions the clauses of a conjunctive expression into orbits under
/// permutations of the roots. Orbits are returned in canonical clause order.
fn clause_orbits(expr: &CoincidenceExpr) -> Vec<Vec<Vec<Atom>>> {
    let k = expr.degree;
    let mut generators: Vec<Vec<usize>> = Vec::new();
    for i in 1..k {
        let mut p: Vec<usize> = (1..=k).collect();
        p.swap(i - 1, i);
        generators.push(p);
    }
    let canon = |c: &[Atom], perm: &[usize]| -> Vec<Atom> {
        let s: BTreeSet<Atom> = c.iter().map(|a| a.permuted(perm)).collect();
        s.into_iter().collect()
    };

    let mut assigned: HashSet<Vec<Atom>> = HashSet::new();
    let mut orbits = Vec::new();
    for clause in &expr.groups {
        if assigned.contains(clause) {
            continue;
        }
        let mut orbit: BTreeSet<Vec<Atom>> = BTreeSet::new();
        let mut queue = VecDeque::from([clause.clone()]);
        orbit.insert(clause.clone());
        while let Some(c) = queue.pop_front() {
            for g in &generators {
                let img = canon(&c, g);
                if orbit.insert(img.clone()) {
                    queue.push_back(img);
                }
            }
        }
        assigned.extend(orbit.iter().cloned());
        orbits.push(orbit.into_iter().collect());
    }
    orbits
}

/// Drops whole root-permutation orbits of clauses that the remaining clauses
/// already imply, checked by enumerating set partitions. Larger clauses are
/// tried first. The result stays closed under permutations of the roots, so
/// its symmetrization is a symmetric polynomial system.
///
/// On `L[S^4_3]` this removes the four triangle clauses and leaves the three
/// perfect-matching clauses `(E12|E34) & (E13|E24) & (E14|E23)`.
pub fn reduce_orbits(cnf: &CoincidenceExpr) -> Result<CoincidenceExpr> {
    reduce_orbits_with_cap(cnf, DEFAULT_ENUMERATION_CAP)
}

pub fn reduce_orbits_with_cap(cnf: &CoincidenceExpr, cap: usize) -> Result<CoincidenceExpr> {
    if cnf.form != Form::ConjunctionOfDisjunctions {
        return Err(Error::InvalidPartition("orbit reduction needs conjunctive form".into()));
    }
    let k = cnf.degree;
    if k > cap {
        return Err(Error::Capacity(format!("enumeration of degree {k} exceeds cap {cap}")));
    }
    let patterns = set_partitions(k);
    let mut orbits = clause_orbits(cnf);
    orbits.sort_by(|a, b| b[0].len().cmp(&a[0].len()).then_with(|| b.cmp(a)));

    let clause_holds = |c: &[Atom], p: &CoincidencePattern| c.iter().any(|a| atom_holds(a, p));
    let mut alive = vec![true; orbits.len()];
    for n in 0..orbits.len() {
        let others: Vec<&Vec<Atom>> = orbits
            .iter()
            .enumerate()
            .filter(|&(m, _)| m != n && alive[m])
            .flat_map(|(_, o)| o.iter())
            .collect();
        if others.is_empty() {
            continue;
        }
        let implied = patterns
            .iter()
            .all(|p| !others.iter().all(|c| clause_holds(c, p)) || orbits[n].iter().all(|c| clause_holds(c, p)));
        if implied {
            alive[n] = false;
        }
    }
    let kept = orbits
        .into_iter()
        .zip(alive)
        .filter(|(_, a)| *a)
        .flat_map(|(o, _)| o)
        .collect();
    CoincidenceExpr::new(k, Form::ConjunctionOfDisjunctions, kept)
}
