//! Finite groups given by dense Cayley tables, with subgroup closure, left
//! coset decompositions and homomorphism checks.
//!
//! Elements are addressed by index. The order of the elements is part of a
//! group's identity: measures and matrices are index-aligned vectors, so two
//! tables that differ only by a relabeling are different [`FiniteGroup`]
//! values. Use [`FiniteGroup::relabel`] to move between orderings.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on group order (|S_7|).
pub const DEFAULT_MAX_ORDER: usize = 5040;

/// Largest `n` accepted for the symmetric family.
pub const MAX_SYMMETRIC_DEGREE: usize = 8;

pub type GroupRef = Arc<FiniteGroup>;

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    labels: Vec<String>,
    cayley: Vec<u32>,
    identity: usize,
    inverses: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order())
            .field("labels", &self.labels)
            .finish()
    }
}

/// A broken group axiom together with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    EmptyTable,
    LabelCount { labels: usize, order: usize },
    DuplicateLabel { index: usize },
    NotSquare { row: usize },
    EntryOutOfRange { row: usize, column: usize },
    LatinRow { row: usize, value: usize },
    LatinColumn { column: usize, value: usize },
    NoIdentity,
    NoInverse { index: usize },
    NonAssociative { i: usize, j: usize, k: usize, count: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyTable => write!(f, "table is empty"),
            Violation::LabelCount { labels, order } => {
                write!(f, "{labels} labels for a table of order {order}")
            }
            Violation::DuplicateLabel { index } => write!(f, "label {index} is not unique"),
            Violation::NotSquare { row } => write!(f, "row {row} has the wrong length"),
            Violation::EntryOutOfRange { row, column } => {
                write!(f, "entry [{row}][{column}] is out of range")
            }
            Violation::LatinRow { row, value } => {
                write!(f, "latin square: row {row} repeats element {value}")
            }
            Violation::LatinColumn { column, value } => {
                write!(f, "latin square: column {column} repeats element {value}")
            }
            Violation::NoIdentity => write!(f, "identity: no two-sided identity element"),
            Violation::NoInverse { index } => write!(f, "inverse: element {index} has no inverse"),
            Violation::NonAssociative { i, j, k, count } => write!(
                f,
                "associativity: ({i}*{j})*{k} != {i}*({j}*{k}) ({count} failing triples)"
            ),
        }
    }
}

/// Every axiom violation found in a table. Empty iff the table is a group.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks a raw labelled table against the group axioms.
pub fn validate_table(labels: &[String], cayley: &[Vec<usize>]) -> ValidationReport {
    let mut violations = Vec::new();
    let n = cayley.len();
    if n == 0 {
        violations.push(Violation::EmptyTable);
        return ValidationReport { violations };
    }
    if labels.len() != n {
        violations.push(Violation::LabelCount { labels: labels.len(), order: n });
    }
    let mut seen = HashSet::new();
    for (index, l) in labels.iter().enumerate() {
        if !seen.insert(l) {
            violations.push(Violation::DuplicateLabel { index });
        }
    }
    let mut shape_ok = true;
    for (row, r) in cayley.iter().enumerate() {
        if r.len() != n {
            violations.push(Violation::NotSquare { row });
            shape_ok = false;
            continue;
        }
        for (column, &v) in r.iter().enumerate() {
            if v >= n {
                violations.push(Violation::EntryOutOfRange { row, column });
                shape_ok = false;
            }
        }
    }
    if !shape_ok {
        return ValidationReport { violations };
    }

    let at = |i: usize, j: usize| cayley[i][j];
    for row in 0..n {
        let mut hit = vec![false; n];
        for j in 0..n {
            let v = at(row, j);
            if std::mem::replace(&mut hit[v], true) {
                violations.push(Violation::LatinRow { row, value: v });
                break;
            }
        }
    }
    for column in 0..n {
        let mut hit = vec![false; n];
        for i in 0..n {
            let v = at(i, column);
            if std::mem::replace(&mut hit[v], true) {
                violations.push(Violation::LatinColumn { column, value: v });
                break;
            }
        }
    }

    let identity = (0..n).find(|&e| (0..n).all(|j| at(e, j) == j && at(j, e) == j));
    match identity {
        None => violations.push(Violation::NoIdentity),
        Some(e) => {
            for index in 0..n {
                if !(0..n).any(|j| at(index, j) == e && at(j, index) == e) {
                    violations.push(Violation::NoInverse { index });
                }
            }
        }
    }

    let mut first = None;
    let mut count = 0;
    for i in 0..n {
        for j in 0..n {
            let ij = at(i, j);
            for k in 0..n {
                if at(ij, k) != at(i, at(j, k)) {
                    count += 1;
                    first.get_or_insert((i, j, k));
                }
            }
        }
    }
    if let Some((i, j, k)) = first {
        violations.push(Violation::NonAssociative { i, j, k, count });
    }
    ValidationReport { violations }
}

impl FiniteGroup {
    /// Builds a group from a table whose axioms already hold.
    fn from_trusted(labels: Vec<String>, table: Vec<u32>) -> Self {
        let n = labels.len();
        let identity = (0..n)
            .find(|&e| (0..n).all(|j| table[e * n + j] as usize == j))
            .expect("trusted table has an identity");
        let mut inverses = vec![0; n];
        for (i, inv) in inverses.iter_mut().enumerate() {
            *inv = (0..n)
                .find(|&j| table[i * n + j] as usize == identity)
                .expect("trusted table has inverses");
        }
        FiniteGroup { labels, cayley: table, identity, inverses }
    }

    /// Validates `cayley` exhaustively and builds the group.
    pub fn from_table(labels: Vec<String>, cayley: Vec<Vec<usize>>) -> Result<Self> {
        Self::from_table_with_limit(labels, cayley, DEFAULT_MAX_ORDER)
    }

    pub fn from_table_with_limit(
        labels: Vec<String>,
        cayley: Vec<Vec<usize>>,
        max_order: usize,
    ) -> Result<Self> {
        check_order(cayley.len(), max_order)?;
        let report = validate_table(&labels, &cayley);
        if let Some(v) = report.violations.into_iter().next() {
            return Err(Error::AxiomViolation(v));
        }
        let table = cayley.into_iter().flatten().map(|v| v as u32).collect();
        Ok(Self::from_trusted(labels, table))
    }

    /// Builds the table of `op` over `elements` (in the given order) and
    /// validates it.
    pub fn from_operation<T, F>(labels: Vec<String>, elements: &[T], op: F) -> Result<Self>
    where
        T: Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let index: HashMap<&T, usize> = elements.iter().enumerate().map(|(i, x)| (x, i)).collect();
        if index.len() != elements.len() {
            return Err(Error::InvalidParameter("elements are not distinct".into()));
        }
        let mut cayley = Vec::with_capacity(elements.len());
        for a in elements {
            let mut row = Vec::with_capacity(elements.len());
            for b in elements {
                let c = op(a, b);
                let &k = index
                    .get(&c)
                    .ok_or_else(|| Error::InvalidParameter("operation is not closed".into()))?;
                row.push(k);
            }
            cayley.push(row);
        }
        Self::from_table(labels, cayley)
    }

    /// Z_n with labels "0".."n-1".
    pub fn cyclic(n: usize) -> Result<Self> {
        Self::cyclic_with_limit(n, DEFAULT_MAX_ORDER)
    }

    pub fn cyclic_with_limit(n: usize, max_order: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("cyclic group needs n >= 1".into()));
        }
        check_order(n, max_order)?;
        let labels = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n).flat_map(|i| (0..n).map(move |j| ((i + j) % n) as u32)).collect();
        Ok(Self::from_trusted(labels, table))
    }

    /// Dihedral group of order 2n: `r{k}` is the rotation r^k and `s{k}` is r^k s.
    pub fn dihedral(n: usize) -> Result<Self> {
        Self::dihedral_with_limit(n, DEFAULT_MAX_ORDER)
    }

    pub fn dihedral_with_limit(n: usize, max_order: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("dihedral group needs n >= 1".into()));
        }
        check_order(2 * n, max_order)?;
        let elems: Vec<(usize, usize)> = (0..2).flat_map(|f| (0..n).map(move |k| (k, f))).collect();
        let labels = elems
            .iter()
            .map(|&(k, f)| if f == 0 { format!("r{k}") } else { format!("s{k}") })
            .collect();
        let idx = |(k, f): (usize, usize)| f * n + k;
        // r^a s^f r^b s^g = r^(a + (-1)^f b) s^(f+g)
        let mut table = Vec::with_capacity(4 * n * n);
        for &(a, f) in &elems {
            for &(b, g) in &elems {
                let k = if f == 0 { (a + b) % n } else { (a + n - b) % n };
                table.push(idx((k, f ^ g)) as u32);
            }
        }
        Ok(Self::from_trusted(labels, table))
    }

    /// S_n in lexicographic order of one-line notation (identity first).
    /// The product `s·t` applies `t` first.
    pub fn symmetric(n: usize) -> Result<Self> {
        Self::symmetric_with_limit(n, DEFAULT_MAX_ORDER)
    }

    pub fn symmetric_with_limit(n: usize, max_order: usize) -> Result<Self> {
        if n == 0 || n > MAX_SYMMETRIC_DEGREE {
            return Err(Error::InvalidParameter(format!(
                "symmetric group needs 1 <= n <= {MAX_SYMMETRIC_DEGREE}, got {n}"
            )));
        }
        let order: usize = (1..=n).product();
        check_order(order, max_order)?;
        let perms = permutations(n);
        let index: HashMap<&[u8], usize> =
            perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let labels = perms
            .iter()
            .map(|p| p.iter().map(|&x| char::from(b'1' + x)).collect())
            .collect();
        let mut table = Vec::with_capacity(order * order);
        let mut buf = vec![0u8; n];
        for s in &perms {
            for t in &perms {
                for (x, out) in buf.iter_mut().enumerate() {
                    *out = s[t[x] as usize];
                }
                table.push(index[buf.as_slice()] as u32);
            }
        }
        Ok(Self::from_trusted(labels, table))
    }

    /// Direct product with pair labels `(a,b)`; index of (i, j) is i*|right| + j.
    pub fn product(left: &FiniteGroup, right: &FiniteGroup) -> Result<Self> {
        Self::product_with_limit(left, right, DEFAULT_MAX_ORDER)
    }

    pub fn product_with_limit(
        left: &FiniteGroup,
        right: &FiniteGroup,
        max_order: usize,
    ) -> Result<Self> {
        let (m, k) = (left.order(), right.order());
        check_order(m * k, max_order)?;
        let labels = (0..m)
            .flat_map(|i| (0..k).map(move |j| (i, j)))
            .map(|(i, j)| format!("({},{})", left.label(i), right.label(j)))
            .collect();
        let mut table = Vec::with_capacity(m * m * k * k);
        for a in 0..m * k {
            for b in 0..m * k {
                let (a1, a2) = (a / k, a % k);
                let (b1, b2) = (b / k, b % k);
                table.push((left.mul(a1, b1) * k + right.mul(a2, b2)) as u32);
            }
        }
        Ok(Self::from_trusted(labels, table))
    }

    /// Reorders elements: new index `i` is old element `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.order();
        let inverse = invert_permutation(perm, n)?;
        let labels = perm.iter().map(|&p| self.labels[p].clone()).collect();
        let mut table = Vec::with_capacity(n * n);
        for &pi in perm {
            for &pj in perm {
                table.push(inverse[self.mul(pi, pj)] as u32);
            }
        }
        Ok(Self::from_trusted(labels, table))
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.cayley[i * self.order() + j] as usize
    }

    #[inline]
    pub fn inv(&self, i: usize) -> usize {
        self.inverses[i]
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inverses
    }

    pub fn cayley_rows(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        (0..n).map(|i| (0..n).map(|j| self.mul(i, j)).collect()).collect()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|i| (i + 1..n).all(|j| self.mul(i, j) == self.mul(j, i)))
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.order() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index, order: self.order() })
        }
    }

    /// Re-runs the exhaustive axiom check on this table.
    pub fn validate(&self) -> ValidationReport {
        validate_table(&self.labels, &self.cayley_rows())
    }

    /// The set product {a·b : a ∈ left, b ∈ right}, sorted.
    pub fn set_product(&self, left: &[usize], right: &[usize]) -> Vec<usize> {
        let mut hit = vec![false; self.order()];
        for &a in left {
            for &b in right {
                hit[self.mul(a, b)] = true;
            }
        }
        mask_to_indices(&hit)
    }
}

/// Pointer or structural equality of two groups.
pub fn same_group(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    std::ptr::eq(a, b) || a == b
}

fn check_order(order: usize, max_order: usize) -> Result<()> {
    if order > max_order {
        Err(Error::OrderTooLarge { order, limit: max_order })
    } else {
        Ok(())
    }
}

fn mask_to_indices(mask: &[bool]) -> Vec<usize> {
    mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
}

/// Returns the inverse permutation, validating that `perm` is one.
pub fn invert_permutation(perm: &[usize], n: usize) -> Result<Vec<usize>> {
    if perm.len() != n {
        return Err(Error::WrongLength { expected: n, got: perm.len() });
    }
    let mut inverse = vec![usize::MAX; n];
    for (i, &p) in perm.iter().enumerate() {
        if p >= n || inverse[p] != usize::MAX {
            return Err(Error::InvalidParameter("relabeling is not a permutation".into()));
        }
        inverse[p] = i;
    }
    Ok(inverse)
}

fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut cur: Vec<u8> = (0..n as u8).collect();
    let mut out = vec![cur.clone()];
    // next lexicographic permutation
    loop {
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}

/// Family tag plus parameters, as found in group files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic { n: usize },
    Dihedral { n: usize },
    Symmetric { n: usize },
    Product { factors: Box<[GroupSpec; 2]> },
    Table { labels: Vec<String>, cayley: Vec<Vec<usize>> },
}

/// Builds a group from its family description.
pub fn build_named(spec: &GroupSpec, max_order: usize) -> Result<FiniteGroup> {
    match spec {
        GroupSpec::Cyclic { n } => FiniteGroup::cyclic_with_limit(*n, max_order),
        GroupSpec::Dihedral { n } => FiniteGroup::dihedral_with_limit(*n, max_order),
        GroupSpec::Symmetric { n } => FiniteGroup::symmetric_with_limit(*n, max_order),
        GroupSpec::Product { factors } => {
            let left = build_named(&factors[0], max_order)?;
            let right = build_named(&factors[1], max_order)?;
            FiniteGroup::product_with_limit(&left, &right, max_order)
        }
        GroupSpec::Table { labels, cayley } => {
            FiniteGroup::from_table_with_limit(labels.clone(), cayley.clone(), max_order)
        }
    }
}

#[derive(Debug, Clone)]
pub struct Subgroup {
    group: GroupRef,
    members: Vec<usize>,
    generators: Vec<usize>,
    contains: Vec<bool>,
}

impl Subgroup {
    /// Wraps a member set after checking identity, closure and inverses.
    pub fn from_members(group: &GroupRef, members: &[usize]) -> Result<Self> {
        let n = group.order();
        let mut contains = vec![false; n];
        for &m in members {
            group.check_index(m)?;
            contains[m] = true;
        }
        if !contains[group.identity()] {
            return Err(Error::NotASubgroup("identity missing".into()));
        }
        for &a in members {
            if !contains[group.inv(a)] {
                return Err(Error::NotASubgroup(format!("inverse of {a} missing")));
            }
            for &b in members {
                if !contains[group.mul(a, b)] {
                    return Err(Error::NotASubgroup(format!("{a}*{b} not in set")));
                }
            }
        }
        let members = mask_to_indices(&contains);
        Ok(Subgroup { group: group.clone(), generators: members.clone(), members, contains })
    }

    pub fn whole(group: &GroupRef) -> Self {
        let n = group.order();
        Subgroup {
            group: group.clone(),
            members: (0..n).collect(),
            generators: (0..n).collect(),
            contains: vec![true; n],
        }
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.contains[i]
    }

    /// Index [G : H].
    pub fn index(&self) -> usize {
        self.group.order() / self.order()
    }
}

/// The subgroup generated by `gens`: breadth-first closure under right
/// multiplication by generators, starting from the identity.
pub fn generated_subgroup(group: &GroupRef, gens: &[usize]) -> Result<Subgroup> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    for &g in gens {
        group.check_index(g)?;
    }
    let mut contains = vec![false; group.order()];
    let e = group.identity();
    contains[e] = true;
    let mut queue = VecDeque::from([e]);
    while let Some(x) = queue.pop_front() {
        for &s in gens {
            let y = group.mul(x, s);
            if !contains[y] {
                contains[y] = true;
                queue.push_back(y);
            }
        }
    }
    let mut generators = gens.to_vec();
    generators.sort_unstable();
    generators.dedup();
    Ok(Subgroup { group: group.clone(), members: mask_to_indices(&contains), generators, contains })
}

/// Left cosets gH of a subgroup.
#[derive(Debug, Clone)]
pub struct CosetDecomposition {
    subgroup: Subgroup,
    representatives: Vec<usize>,
    blocks: Vec<Vec<usize>>,
    relabeling: Vec<usize>,
    block_of: Vec<usize>,
}

impl CosetDecomposition {
    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    /// Sorted member sets, `blocks[m] = representatives[m]·H`.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// G listed as H, g_1H, …; block m is ordered as `rep_m · h` over the
    /// sorted members h of H, so every diagonal block of a transition matrix
    /// lines up with the block on H itself.
    pub fn relabeling(&self) -> &[usize] {
        &self.relabeling
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.block_of[i]
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

pub fn coset_decomposition(group: &GroupRef, h: &Subgroup) -> Result<CosetDecomposition> {
    if !same_group(group, h.group()) {
        return Err(Error::NotASubgroup("subgroup belongs to a different group".into()));
    }
    let n = group.order();
    let mut block_of = vec![usize::MAX; n];
    let mut representatives = Vec::new();
    let mut blocks = Vec::new();
    let mut relabeling = Vec::with_capacity(n);
    for rep in 0..n {
        if block_of[rep] != usize::MAX {
            continue;
        }
        let m = blocks.len();
        let ordered: Vec<usize> = h.members().iter().map(|&x| group.mul(rep, x)).collect();
        for &x in &ordered {
            block_of[x] = m;
        }
        let mut block = ordered.clone();
        block.sort_unstable();
        relabeling.extend(ordered);
        representatives.push(rep);
        blocks.push(block);
    }
    Ok(CosetDecomposition { subgroup: h.clone(), representatives, blocks, relabeling, block_of })
}

#[derive(Debug, Clone)]
pub struct GroupHom {
    source: GroupRef,
    target: GroupRef,
    map: Vec<usize>,
}

impl GroupHom {
    pub fn source(&self) -> &GroupRef {
        &self.source
    }

    pub fn target(&self) -> &GroupRef {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }
}

/// Checks the homomorphism property at every pair; the first failing pair in
/// row-major order is reported.
pub fn check_homomorphism(source: &GroupRef, target: &GroupRef, map: &[usize]) -> Result<GroupHom> {
    let n = source.order();
    if map.len() != n {
        return Err(Error::WrongLength { expected: n, got: map.len() });
    }
    for &v in map {
        target.check_index(v)?;
    }
    for i in 0..n {
        for j in 0..n {
            if map[source.mul(i, j)] != target.mul(map[i], map[j]) {
                return Err(Error::NotAHomomorphism { i, j });
            }
        }
    }
    if map[source.identity()] != target.identity() {
        let e = source.identity();
        return Err(Error::NotAHomomorphism { i: e, j: e });
    }
    Ok(GroupHom { source: source.clone(), target: target.clone(), map: map.to_vec() })
}
