//! Compositions, number-partitions and set-partitions, together with the two
//! combinatorial models of a hyperbolic stratum: the semilattice `C_λ` and
//! the simplicial complex `δ_λ`.
//!
//! A composition `c = (a₁,…,a_t)` of `n` is encoded by its *merged set*
//! `A ⊆ [n−1]`: position `i` is merged when slots `i` and `i+1` of `[n]`
//! fall into the same part. Equivalently `A` is the complement of the
//! partial sums `a₁, a₁+a₂, …`. Coarsening (summing adjacent parts) is
//! exactly enlarging `A`. Merged sets are stored as `u64` masks, bit `i−1`
//! for position `i`, which caps the ambient degree at 64.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::homology::{HomologyResult, SimplicialComplex};
use crate::poset::{are_isomorphic, closure_image, Poset, PosetError};

/// Largest ambient degree representable by a merged-set mask.
pub const MAX_DEGREE: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompositionError {
    #[error("parts must be positive")]
    ZeroPart,
    #[error("cannot parse {0:?} as a list of positive integers")]
    Parse(String),
    #[error("position {pos} lies outside [1, {max}]")]
    PositionOutOfRange { pos: u32, max: u32 },
    #[error("degree {0} exceeds the supported maximum of 64")]
    TooLarge(u32),
    #[error("set partitions live on different ground sets ({0} and {1})")]
    GroundMismatch(u32, u32),
    #[error("blocks do not partition [1, {0}]")]
    NotAPartition(u32),
    #[error("{0} requires n ≥ {1}")]
    TooSmall(&'static str, u32),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

fn parse_parts(s: &str) -> Result<Vec<u32>, CompositionError> {
    let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    let mut parts = Vec::new();
    for tok in trimmed.split(',') {
        let tok = tok.trim();
        let (base, exp) = match tok.split_once('^') {
            Some((b, e)) => (b.trim(), e.trim()),
            None => (tok, "1"),
        };
        let bad = || CompositionError::Parse(s.to_string());
        let value: u32 = base.parse().map_err(|_| bad())?;
        let count: usize = exp.parse().map_err(|_| bad())?;
        if value == 0 {
            return Err(CompositionError::ZeroPart);
        }
        parts.extend(std::iter::repeat(value).take(count));
    }
    Ok(parts)
}

fn write_tuple(f: &mut fmt::Formatter<'_>, parts: &[u32]) -> fmt::Result {
    f.write_str("(")?;
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{p}")?;
    }
    f.write_str(")")
}

/// An ordered tuple of positive integers. The empty composition `()` is
/// allowed; it indexes the purely elliptic cell.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition {
    parts: Vec<u32>,
}

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self, CompositionError> {
        if parts.contains(&0) {
            return Err(CompositionError::ZeroPart);
        }
        Ok(Composition { parts })
    }

    pub fn empty() -> Self {
        Composition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of parts `t`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sum of the parts `m`.
    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Interior partial sums `a₁, a₁+a₂, …, a₁+⋯+a_{t−1}`.
    pub fn partial_sums(&self) -> Vec<u32> {
        let mut acc = 0;
        self.parts
            .iter()
            .take(self.parts.len().saturating_sub(1))
            .map(|p| {
                acc += p;
                acc
            })
            .collect()
    }

    pub fn merged_set(&self) -> Result<MergedSet, CompositionError> {
        let n = self.weight();
        if n > MAX_DEGREE {
            return Err(CompositionError::TooLarge(n));
        }
        let mut mask = full_mask(n);
        for p in self.partial_sums() {
            mask &= !(1u64 << (p - 1));
        }
        Ok(MergedSet { ambient: n, mask })
    }

    pub fn number_partition(&self) -> NumberPartition {
        NumberPartition::new(self.parts.clone()).expect("parts are positive")
    }

    /// Sums parts `i` and `i+1` (0-based).
    pub fn merge_at(&self, i: usize) -> Composition {
        let mut parts = self.parts.clone();
        let right = parts.remove(i + 1);
        parts[i] += right;
        Composition { parts }
    }

    /// Inserts a new part at `slot` (0 ≤ slot ≤ t).
    pub fn insert_at(&self, slot: usize, part: u32) -> Composition {
        let mut parts = self.parts.clone();
        parts.insert(slot, part);
        Composition { parts }
    }

    /// Whether `self` arises from `finer` by summing adjacent parts (every
    /// composition is a coarsening of itself).
    pub fn is_coarsening_of(&self, finer: &Composition) -> bool {
        if self.weight() != finer.weight() {
            return false;
        }
        let fine: HashSet<u32> = finer.partial_sums().into_iter().collect();
        self.partial_sums().iter().all(|p| fine.contains(p))
    }

    /// The interval set-partition of `[m]` whose blocks are the parts.
    pub fn to_set_partition(&self) -> SetPartition {
        let mut blocks = Vec::new();
        let mut next = 1;
        for &p in &self.parts {
            blocks.push((next..next + p).collect());
            next += p;
        }
        SetPartition {
            ground: self.weight(),
            blocks,
        }
    }
}

impl FromStr for Composition {
    type Err = CompositionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Composition::new(parse_parts(s)?)
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.parts)
    }
}

/// All compositions of `n`, in lexicographic order.
pub fn compositions_of(n: u32) -> Vec<Composition> {
    fn go(rest: u32, prefix: &mut Vec<u32>, out: &mut Vec<Composition>) {
        if rest == 0 {
            out.push(Composition {
                parts: prefix.clone(),
            });
            return;
        }
        for p in 1..=rest {
            prefix.push(p);
            go(rest - p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut out);
    out
}

fn full_mask(n: u32) -> u64 {
    match n {
        0 | 1 => 0,
        64.. => u64::MAX >> 1,
        _ => (1u64 << (n - 1)) - 1,
    }
}

/// A multiset of positive parts, stored in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NumberPartition {
    parts: Vec<u32>,
}

impl NumberPartition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self, CompositionError> {
        if parts.contains(&0) {
            return Err(CompositionError::ZeroPart);
        }
        parts.sort_unstable();
        Ok(NumberPartition { parts })
    }

    /// `(1^{n−k}, k)`.
    pub fn hook(n: u32, k: u32) -> Self {
        assert!(1 <= k && k <= n);
        let mut parts = vec![1; (n - k) as usize];
        parts.push(k);
        NumberPartition::new(parts).expect("positive parts")
    }

    /// From multiplicities `e₁, e₂, …` (`e_i` parts equal to `i`).
    pub fn from_multiplicities(e: &[usize]) -> Self {
        let parts = e
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat(i as u32 + 1).take(c))
            .collect();
        NumberPartition { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// `(part, multiplicity)` pairs in ascending part order.
    pub fn multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, c)) if *q == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn has_repeated_part(&self) -> bool {
        self.parts.windows(2).any(|w| w[0] == w[1])
    }

    /// The partition as the composition with ascending parts.
    pub fn sorted_composition(&self) -> Composition {
        Composition {
            parts: self.parts.clone(),
        }
    }

    /// Exponential notation, e.g. `(1^3,2^2)`.
    pub fn exponential(&self) -> String {
        let body: Vec<String> = self
            .multiplicities()
            .into_iter()
            .map(|(p, c)| if c == 1 { p.to_string() } else { format!("{p}^{c}") })
            .collect();
        format!("({})", body.join(","))
    }
}

impl FromStr for NumberPartition {
    type Err = CompositionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NumberPartition::new(parse_parts(s)?)
    }
}

impl fmt::Display for NumberPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.parts)
    }
}

/// All partitions of `n` in ascending-parts form, sorted.
pub fn partitions_of(n: u32) -> Vec<NumberPartition> {
    fn go(rest: u32, min: u32, prefix: &mut Vec<u32>, out: &mut Vec<NumberPartition>) {
        if rest == 0 {
            out.push(NumberPartition {
                parts: prefix.clone(),
            });
            return;
        }
        for p in min..=rest {
            prefix.push(p);
            go(rest - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, 1, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Distinct orderings of the parts of `λ`, in lexicographic order.
pub fn compositions_of_type(lambda: &NumberPartition) -> Vec<Composition> {
    let mut current = lambda.parts.clone();
    let mut out = vec![Composition {
        parts: current.clone(),
    }];
    // next lexicographic permutation of a multiset
    loop {
        let Some(i) = (1..current.len()).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let j = (i..current.len())
            .rev()
            .find(|&j| current[j] > current[i - 1])
            .expect("a larger element exists right of the pivot");
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(Composition {
            parts: current.clone(),
        });
    }
    out
}

/// A subset of `[n−1]` encoding a composition of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MergedSet {
    ambient: u32,
    mask: u64,
}

impl MergedSet {
    pub fn new(ambient: u32, positions: &[u32]) -> Result<Self, CompositionError> {
        if ambient > MAX_DEGREE {
            return Err(CompositionError::TooLarge(ambient));
        }
        let max = ambient.saturating_sub(1);
        let mut mask = 0;
        for &pos in positions {
            if pos == 0 || pos > max {
                return Err(CompositionError::PositionOutOfRange { pos, max });
            }
            mask |= 1u64 << (pos - 1);
        }
        Ok(MergedSet { ambient, mask })
    }

    pub fn from_mask(ambient: u32, mask: u64) -> Result<Self, CompositionError> {
        if ambient > MAX_DEGREE {
            return Err(CompositionError::TooLarge(ambient));
        }
        if mask & !full_mask(ambient) != 0 {
            return Err(CompositionError::PositionOutOfRange {
                pos: 64 - mask.leading_zeros(),
                max: ambient.saturating_sub(1),
            });
        }
        Ok(MergedSet { ambient, mask })
    }

    pub fn ambient(&self) -> u32 {
        self.ambient
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn positions(&self) -> Vec<u32> {
        (1..self.ambient).filter(|&i| self.contains(i)).collect()
    }

    pub fn contains(&self, pos: u32) -> bool {
        pos >= 1 && pos < self.ambient && self.mask & (1u64 << (pos - 1)) != 0
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_full(&self) -> bool {
        self.mask == full_mask(self.ambient)
    }

    pub fn is_subset(&self, other: &MergedSet) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn union(&self, other: &MergedSet) -> MergedSet {
        assert_eq!(self.ambient, other.ambient);
        MergedSet {
            ambient: self.ambient,
            mask: self.mask | other.mask,
        }
    }

    pub fn composition(&self) -> Composition {
        let mut parts = Vec::new();
        let mut run = 0;
        for pos in 1..=self.ambient {
            run += 1;
            if pos == self.ambient || !self.contains(pos) {
                parts.push(run);
                run = 0;
            }
        }
        Composition { parts }
    }
}

/// `merged_set` as a free function.
pub fn merged_set(c: &Composition) -> Result<MergedSet, CompositionError> {
    c.merged_set()
}

/// Inverse of [`merged_set`].
pub fn composition_from_merged_set(a: &MergedSet) -> Composition {
    a.composition()
}

/// A set partition of `[n]` with blocks sorted internally and ordered by
/// their least element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetPartition {
    ground: u32,
    blocks: Vec<Vec<u32>>,
}

impl SetPartition {
    pub fn new(ground: u32, blocks: Vec<Vec<u32>>) -> Result<Self, CompositionError> {
        let mut seen = vec![false; ground as usize + 1];
        let mut blocks: Vec<Vec<u32>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        for b in &blocks {
            if b.is_empty() {
                return Err(CompositionError::NotAPartition(ground));
            }
            for &x in b {
                if x == 0 || x > ground || seen[x as usize] {
                    return Err(CompositionError::NotAPartition(ground));
                }
                seen[x as usize] = true;
            }
        }
        if seen.iter().skip(1).any(|s| !s) {
            return Err(CompositionError::NotAPartition(ground));
        }
        blocks.sort();
        Ok(SetPartition { ground, blocks })
    }

    pub fn discrete(ground: u32) -> Self {
        SetPartition {
            ground,
            blocks: (1..=ground).map(|i| vec![i]).collect(),
        }
    }

    /// `|1|⋯|i i+1|⋯|n|`.
    pub fn adjacent_pair(ground: u32, i: u32) -> Self {
        assert!(1 <= i && i < ground);
        let mut blocks: Vec<Vec<u32>> = (1..=ground).filter(|&x| x != i + 1).map(|x| vec![x]).collect();
        blocks[(i - 1) as usize].push(i + 1);
        SetPartition { ground, blocks }
    }

    pub fn ground(&self) -> u32 {
        self.ground
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    /// Join in the partition lattice: components of the union of the two
    /// block relations.
    pub fn join(&self, other: &SetPartition) -> Result<SetPartition, CompositionError> {
        if self.ground != other.ground {
            return Err(CompositionError::GroundMismatch(self.ground, other.ground));
        }
        let mut parent: Vec<u32> = (0..=self.ground).collect();
        fn find(p: &mut [u32], x: u32) -> u32 {
            let mut r = x;
            while p[r as usize] != r {
                r = p[r as usize];
            }
            let mut y = x;
            while p[y as usize] != r {
                let next = p[y as usize];
                p[y as usize] = r;
                y = next;
            }
            r
        }
        for b in self.blocks.iter().chain(&other.blocks) {
            for w in b.windows(2) {
                let (a, c) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                if a != c {
                    parent[a.max(c) as usize] = a.min(c);
                }
            }
        }
        let mut groups: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for x in 1..=self.ground {
            let r = find(&mut parent, x);
            groups.entry(r).or_default().push(x);
        }
        SetPartition::new(self.ground, groups.into_values().collect())
    }

    /// True iff every block is an interval lying wholly below the next.
    pub fn is_interval_partition(&self) -> bool {
        let mut expected = 1;
        for b in &self.blocks {
            if b.first() != Some(&expected) || b.windows(2).any(|w| w[1] != w[0] + 1) {
                return false;
            }
            expected = b.last().unwrap() + 1;
        }
        true
    }

    pub fn to_composition(&self) -> Option<Composition> {
        self.is_interval_partition().then(|| Composition {
            parts: self.blocks.iter().map(|b| b.len() as u32).collect(),
        })
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("|")?;
        for b in &self.blocks {
            let items: Vec<String> = b.iter().map(u32::to_string).collect();
            write!(f, "{}|", items.join(" "))?;
        }
        Ok(())
    }
}

/// `partition_join` as a free function.
pub fn partition_join(p: &SetPartition, q: &SetPartition) -> Result<SetPartition, CompositionError> {
    p.join(q)
}

/// `C_λ` together with the merged set of every element.
#[derive(Debug, Clone)]
pub struct CLambda {
    pub lambda: NumberPartition,
    pub poset: Poset,
    /// Merged sets, one per poset element, sorted by size then mask.
    pub merged: Vec<MergedSet>,
}

impl CLambda {
    pub fn n(&self) -> u32 {
        self.lambda.weight()
    }

    pub fn composition(&self, i: usize) -> Composition {
        self.merged[i].composition()
    }

    pub fn index_of(&self, a: &MergedSet) -> Option<usize> {
        self.merged.iter().position(|m| m == a)
    }
}

/// Union-closure of the merged sets of the given compositions, sorted by
/// size then mask.
pub(crate) fn union_closure(generators: &[u64]) -> Vec<u64> {
    let mut seen: BTreeSet<u64> = generators.iter().copied().collect();
    let mut frontier: Vec<u64> = seen.iter().copied().collect();
    while let Some(x) = frontier.pop() {
        for &g in generators {
            let y = x | g;
            if seen.insert(y) {
                frontier.push(y);
            }
        }
    }
    let mut out: Vec<u64> = seen.into_iter().collect();
    out.sort_by_key(|&m| (m.count_ones(), m));
    out
}

/// The poset of unions of merged sets of type-`λ` compositions, without the
/// full set, ordered by inclusion.
pub fn c_lambda_poset(lambda: &NumberPartition) -> Result<CLambda, CompositionError> {
    let n = lambda.weight();
    if n > MAX_DEGREE {
        return Err(CompositionError::TooLarge(n));
    }
    let generators: Vec<u64> = compositions_of_type(lambda)
        .iter()
        .map(|c| c.merged_set().map(|m| m.mask))
        .collect::<Result<_, _>>()?;
    let full = full_mask(n);
    let masks: Vec<u64> = union_closure(&generators)
        .into_iter()
        .filter(|&m| m != full)
        .collect();
    let merged: Vec<MergedSet> = masks
        .iter()
        .map(|&mask| MergedSet { ambient: n, mask })
        .collect();
    let labels = merged.iter().map(|m| m.composition().to_string()).collect();
    let poset = Poset::from_relation(labels, |i, j| {
        masks[i] != masks[j] && masks[i] & !masks[j] == 0
    })
    .expect("inclusion is a partial order");
    Ok(CLambda {
        lambda: lambda.clone(),
        poset,
        merged,
    })
}

/// `δ_λ` with vertex `i` standing for the partial sum `i ∈ [n−1]`.
#[derive(Debug, Clone)]
pub struct DeltaLambda {
    pub lambda: NumberPartition,
    pub complex: SimplicialComplex,
}

impl DeltaLambda {
    pub fn n(&self) -> u32 {
        self.lambda.weight()
    }

    /// The composition whose partial sums are the vertices of `face`.
    /// Vertex indices are 0-based (`index = partial sum − 1`).
    pub fn face_composition(&self, face: &[u32]) -> Composition {
        let n = self.n();
        let mut mask = full_mask(n);
        for &v in face {
            mask &= !(1u64 << v);
        }
        MergedSet { ambient: n, mask }.composition()
    }

    /// Join of the labels of all codimension-one faces of the ambient
    /// simplex boundary that contain `face`. Each such facet omits a single
    /// partial sum `i` and carries the label `|1|⋯|i i+1|⋯|n|`.
    pub fn label_by_join(&self, face: &[u32]) -> SetPartition {
        let n = self.n();
        let mut acc = SetPartition::discrete(n);
        for i in 1..n {
            if !face.contains(&(i - 1)) {
                acc = acc
                    .join(&SetPartition::adjacent_pair(n, i))
                    .expect("same ground set");
            }
        }
        acc
    }
}

/// Downward closure of the partial-sum sets of the type-`λ` compositions
/// inside the simplex on `[n−1]`. The one-part composition contributes the
/// empty set, which is not a face.
pub fn delta_lambda_complex(lambda: &NumberPartition) -> Result<DeltaLambda, CompositionError> {
    let n = lambda.weight();
    if n < 2 {
        return Err(CompositionError::TooSmall("δ_λ", 2));
    }
    if n > MAX_DEGREE {
        return Err(CompositionError::TooLarge(n));
    }
    let labels = (1..n).map(|i| i.to_string()).collect();
    let facets = compositions_of_type(lambda)
        .into_iter()
        .map(|c| c.partial_sums().into_iter().map(|p| p - 1).collect::<Vec<u32>>())
        .filter(|f| !f.is_empty());
    let complex = SimplicialComplex::from_facets(labels, facets).expect("vertices in range");
    Ok(DeltaLambda {
        lambda: lambda.clone(),
        complex,
    })
}

/// Outcome of reducing the face poset of `δ_λ` onto `C_λ` by a closure
/// operator.
#[derive(Debug, Clone)]
pub struct ClosureReduction {
    pub lambda: NumberPartition,
    pub face_count: usize,
    pub image_size: usize,
    /// The image is isomorphic to the dual of `C_λ`.
    pub isomorphic_to_dual: bool,
    pub face_poset_homology: HomologyResult,
    pub c_lambda_homology: HomologyResult,
}

impl ClosureReduction {
    pub fn passed(&self) -> bool {
        self.isomorphic_to_dual && self.face_poset_homology == self.c_lambda_homology
    }
}

/// The face poset of a simplicial complex ordered by inclusion, with faces
/// in the complex's own order.
pub fn face_poset(complex: &SimplicialComplex) -> (Poset, Vec<Vec<u32>>) {
    let faces: Vec<Vec<u32>> = complex.faces().cloned().collect();
    let index: std::collections::HashMap<&[u32], usize> =
        faces.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
    let mut covers = Vec::new();
    for (i, f) in faces.iter().enumerate() {
        if f.len() < 2 {
            continue;
        }
        for k in 0..f.len() {
            let mut sub = f.clone();
            sub.remove(k);
            covers.push((index[sub.as_slice()], i));
        }
    }
    let labels = faces
        .iter()
        .map(|f| {
            let names: Vec<&str> = f
                .iter()
                .map(|&v| complex.vertex_labels()[v as usize].as_str())
                .collect();
            format!("{{{}}}", names.join(","))
        })
        .collect();
    let poset = Poset::from_covers(labels, covers).expect("face inclusion is graded");
    (poset, faces)
}

/// Maps every face of `δ_λ` to the intersection of the facets containing it,
/// checks that this is a closure operator on the face poset, and compares
/// its image with `C_λ` (order-reversed) both as posets and in homology.
pub fn verify_closure_reduction(
    lambda: &NumberPartition,
) -> Result<ClosureReduction, CompositionError> {
    let delta = delta_lambda_complex(lambda)?;
    let (poset, faces) = face_poset(&delta.complex);
    let facets = delta.complex.facets();
    let position: std::collections::HashMap<&[u32], usize> =
        faces.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
    let map: Vec<usize> = faces
        .iter()
        .map(|f| {
            let mut meet: Option<BTreeSet<u32>> = None;
            for g in facets.iter().filter(|g| f.iter().all(|v| g.contains(v))) {
                let gs: BTreeSet<u32> = g.iter().copied().collect();
                meet = Some(match meet {
                    None => gs,
                    Some(m) => m.intersection(&gs).copied().collect(),
                });
            }
            let meet: Vec<u32> = meet.expect("every face lies in a facet").into_iter().collect();
            position[meet.as_slice()]
        })
        .collect();
    let image = closure_image(&poset, &map)?;
    let c = c_lambda_poset(lambda)?;
    let isomorphic_to_dual = are_isomorphic(&image.poset, &c.poset.dual()).is_some();
    Ok(ClosureReduction {
        lambda: lambda.clone(),
        face_count: faces.len(),
        image_size: image.poset.len(),
        isomorphic_to_dual,
        face_poset_homology: poset.order_complex().homology(),
        c_lambda_homology: c.poset.order_complex().homology(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(s: &str) -> Composition {
        s.parse().unwrap()
    }

    fn part(s: &str) -> NumberPartition {
        s.parse().unwrap()
    }

    #[test]
    fn merged_set_examples() {
        assert!(comp("1,1,1,1").merged_set().unwrap().is_empty());
        assert!(comp("5").merged_set().unwrap().is_full());
        // the 3 occupies slots 3..5 of [6]
        let m = comp("1,1,3,1").merged_set().unwrap();
        assert_eq!(m.positions(), vec![3, 4]);
        assert_eq!(m.composition(), comp("1,1,3,1"));
        assert!(MergedSet::new(4, &[4]).is_err());
        assert!(MergedSet::new(4, &[0]).is_err());
    }

    #[test]
    fn compositions_of_type_examples() {
        let c: Vec<String> = compositions_of_type(&part("1,2")).iter().map(|c| c.to_string()).collect();
        assert_eq!(c, vec!["(1,2)", "(2,1)"]);
        assert_eq!(compositions_of_type(&part("2,2")).len(), 1);
        assert_eq!(compositions_of_type(&part("1,2,3,5")).len(), 24);
        assert_eq!(compositions_of_type(&part("1,1,1,2,2")).len(), 10);
    }

    #[test]
    fn counting_helpers() {
        assert_eq!(compositions_of(5).len(), 16);
        assert_eq!(partitions_of(7).len(), 15);
        assert_eq!(part("1^3,2").to_string(), "(1,1,1,2)");
        assert_eq!(part("2,1,1,2").exponential(), "(1^2,2^2)");
        assert_eq!(NumberPartition::hook(5, 3).to_string(), "(1,1,3)");
        assert_eq!(NumberPartition::from_multiplicities(&[2, 0, 1]).to_string(), "(1,1,3)");
        assert!("1,0".parse::<NumberPartition>().is_err());
        assert!("a".parse::<Composition>().is_err());
        assert_eq!(comp("()"), Composition::empty());
    }

    #[test]
    fn set_partition_examples() {
        let p = SetPartition::new(3, vec![vec![1, 2], vec![3]]).unwrap();
        let q = SetPartition::new(3, vec![vec![1], vec![2, 3]]).unwrap();
        assert_eq!(p.join(&q).unwrap().to_string(), "|1 2 3|");
        let r = SetPartition::new(3, vec![vec![1, 3], vec![2]]).unwrap();
        assert!(!r.is_interval_partition());
        let j = SetPartition::adjacent_pair(4, 1)
            .join(&SetPartition::adjacent_pair(4, 2))
            .unwrap();
        assert_eq!(j.to_string(), "|1 2 3|4|");
        assert_eq!(j.to_composition(), Some(comp("3,1")));
        assert!(p.join(&SetPartition::discrete(4)).is_err());
        assert!(SetPartition::new(3, vec![vec![1, 2]]).is_err());
    }

    #[test]
    fn c_lambda_examples() {
        assert!(c_lambda_poset(&part("5")).unwrap().poset.is_empty());
        let c = c_lambda_poset(&part("2,3")).unwrap();
        assert_eq!(c.poset.len(), 2);
        assert!(c.poset.covers().is_empty());
        let hook = c_lambda_poset(&part("1,1,1,2")).unwrap();
        assert_eq!(hook.poset.len(), 14);
        let single = c_lambda_poset(&part("1,1,1")).unwrap();
        assert_eq!(single.poset.len(), 1);
    }

    #[test]
    fn delta_examples() {
        let d = delta_lambda_complex(&part("2,3")).unwrap();
        assert_eq!(d.complex.face_count(), 2);
        assert_eq!(d.complex.faces_of_dim(0), &[vec![1], vec![2]]);
        assert_eq!(d.complex.homology().sphere_dimension(), Some(0));
        let hook = delta_lambda_complex(&part("1,1,1,2")).unwrap();
        assert_eq!(hook.complex.homology().sphere_dimension(), Some(2));
        assert_eq!(hook.complex.face_count(), 14);
        assert_eq!(delta_lambda_complex(&part("4")).unwrap().complex.face_count(), 0);
        assert!(delta_lambda_complex(&part("1")).is_err());
        assert_eq!(d.face_composition(&[1]), comp("2,3"));
    }

    #[test]
    fn closure_reduction_examples() {
        let r = verify_closure_reduction(&part("1,2")).unwrap();
        assert!(r.passed());
        assert_eq!(r.image_size, 2);
        assert_eq!(r.c_lambda_homology.sphere_dimension(), Some(0));
        let r = verify_closure_reduction(&part("1,1,1,2")).unwrap();
        assert!(r.passed());
        assert_eq!(r.c_lambda_homology.sphere_dimension(), Some(2));
        assert!(verify_closure_reduction(&part("1,2,3")).unwrap().passed());
    }
}
