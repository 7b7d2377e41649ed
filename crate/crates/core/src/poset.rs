//! Finite posets stored by their cover relation.
//!
//! A [`Poset`] owns a list of element labels and an irredundant cover
//! relation. The full strict order is derived lazily (one bitset of strict
//! upper bounds per element) and cached. Downstream code works on element
//! indices; labels only matter for export.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::homology::SimplicialComplex;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PosetError {
    #[error("cover ({0}, {1}) refers to an element outside 0..{2}")]
    OutOfRange(usize, usize, usize),
    #[error("cover ({0}, {0}) is reflexive")]
    Reflexive(usize),
    #[error("relation has a directed cycle through elements {0:?}")]
    Cycle(Vec<usize>),
    #[error("cover ({0}, {1}) is implied by a longer chain")]
    Redundant(usize, usize),
    #[error("generator {generator} is not an order automorphism (cover ({lower}, {upper}) is not mapped to a cover)")]
    NotAutomorphism {
        generator: usize,
        lower: usize,
        upper: usize,
    },
    #[error("generator {0} is not a permutation of the element set")]
    NotPermutation(usize),
    #[error("orbit relation fails antisymmetry: orbit cycle {0:?}")]
    OrbitCycle(Vec<usize>),
    #[error("map has length {0}, poset has {1} elements")]
    MapLength(usize, usize),
    #[error("closure map is not {law}: witness ({x}, {y})")]
    ClosureLaw {
        law: ClosureLaw,
        x: usize,
        y: usize,
    },
}

/// The three laws a closure operator has to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureLaw {
    OrderPreserving,
    Inflationary,
    Idempotent,
}

impl std::fmt::Display for ClosureLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ClosureLaw::OrderPreserving => "order preserving",
            ClosureLaw::Inflationary => "inflationary",
            ClosureLaw::Idempotent => "idempotent",
        })
    }
}

/// A finite partially ordered set.
#[derive(Debug, Clone)]
pub struct Poset {
    labels: Vec<String>,
    covers: Vec<(usize, usize)>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    above: OnceLock<Vec<FixedBitSet>>,
}

impl Poset {
    /// Builds a poset from a cover relation, rejecting cycles and covers that
    /// are implied by longer chains.
    pub fn from_covers(
        labels: Vec<String>,
        covers: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, PosetError> {
        let n = labels.len();
        let mut set = BTreeSet::new();
        for (a, b) in covers {
            if a >= n || b >= n {
                return Err(PosetError::OutOfRange(a, b, n));
            }
            if a == b {
                return Err(PosetError::Reflexive(a));
            }
            set.insert((a, b));
        }
        let poset = Self::assemble(labels, set.into_iter().collect());
        let above = strict_upper_sets(&poset.up).map_err(PosetError::Cycle)?;
        for &(a, b) in &poset.covers {
            if poset.up[a]
                .iter()
                .any(|&c| c != b && above[c].contains(b))
            {
                return Err(PosetError::Redundant(a, b));
            }
        }
        let _ = poset.above.set(above);
        Ok(poset)
    }

    /// Builds a poset from a strict-order predicate. The predicate is closed
    /// transitively, checked for antisymmetry, and reduced to covers.
    pub fn from_relation(
        labels: Vec<String>,
        less: impl Fn(usize, usize) -> bool,
    ) -> Result<Self, PosetError> {
        let n = labels.len();
        let mut lt: Vec<FixedBitSet> = (0..n)
            .map(|i| {
                let mut row = FixedBitSet::with_capacity(n);
                for j in 0..n {
                    if i != j && less(i, j) {
                        row.insert(j);
                    }
                }
                row
            })
            .collect();
        let covers = reduce_relation(&mut lt)?;
        let poset = Self::assemble(labels, covers);
        let _ = poset.above.set(lt);
        Ok(poset)
    }

    fn assemble(labels: Vec<String>, covers: Vec<(usize, usize)>) -> Self {
        let n = labels.len();
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for &(a, b) in &covers {
            up[a].push(b);
            down[b].push(a);
        }
        Poset {
            labels,
            covers,
            up,
            down,
            above: OnceLock::new(),
        }
    }

    /// The empty poset.
    pub fn empty() -> Self {
        Self::assemble(Vec::new(), Vec::new())
    }

    /// An antichain with the given labels.
    pub fn antichain(labels: Vec<String>) -> Self {
        Self::assemble(labels, Vec::new())
    }

    /// A chain `0 < 1 < … < m-1`.
    pub fn chain(m: usize) -> Self {
        let labels = (0..m).map(|i| i.to_string()).collect();
        Self::assemble(labels, (1..m).map(|i| (i - 1, i)).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// Cover pairs `(lower, upper)`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn upper_covers(&self, i: usize) -> &[usize] {
        &self.up[i]
    }

    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.down[i]
    }

    fn upper_sets(&self) -> &[FixedBitSet] {
        self.above.get_or_init(|| {
            strict_upper_sets(&self.up).expect("cover relation validated on construction")
        })
    }

    /// Elements strictly above `i`.
    pub fn strictly_above(&self, i: usize) -> &FixedBitSet {
        &self.upper_sets()[i]
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.upper_sets()[i].contains(j)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        i == j || self.lt(i, j)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) || self.lt(j, i)
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.down[i].is_empty()).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.up[i].is_empty()).collect()
    }

    /// Length of the longest chain ending at each element (minimal elements
    /// have rank 0).
    pub fn ranks(&self) -> Vec<usize> {
        let order = self.topological_order();
        let mut rank = vec![0usize; self.len()];
        for &x in &order {
            for &y in &self.up[x] {
                rank[y] = rank[y].max(rank[x] + 1);
            }
        }
        rank
    }

    /// Number of elements of each rank.
    pub fn rank_sizes(&self) -> Vec<usize> {
        let ranks = self.ranks();
        let top = ranks.iter().copied().max().map_or(0, |r| r + 1);
        let mut sizes = vec![0; top];
        for r in ranks {
            sizes[r] += 1;
        }
        sizes
    }

    /// A linear extension, smallest indices first among available elements.
    pub fn topological_order(&self) -> Vec<usize> {
        let mut indeg: Vec<usize> = self.down.iter().map(Vec::len).collect();
        let mut ready: BTreeSet<usize> = (0..self.len()).filter(|&i| indeg[i] == 0).collect();
        let mut out = Vec::with_capacity(self.len());
        while let Some(x) = ready.pop_first() {
            out.push(x);
            for &y in &self.up[x] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    ready.insert(y);
                }
            }
        }
        out
    }

    /// Number of nonempty chains, i.e. the number of faces of the order
    /// complex. Saturates at `u128::MAX`.
    pub fn chain_count(&self) -> u128 {
        let order = self.topological_order();
        // starting[x] = number of chains whose minimum is x
        let mut starting = vec![0u128; self.len()];
        for &x in order.iter().rev() {
            let mut c: u128 = 1;
            for y in self.strictly_above(x).ones() {
                c = c.saturating_add(starting[y]);
            }
            starting[x] = c;
        }
        starting.iter().fold(0u128, |a, &b| a.saturating_add(b))
    }

    /// The same elements with the order reversed.
    pub fn dual(&self) -> Poset {
        Self::assemble(
            self.labels.clone(),
            {
                let mut c: Vec<_> = self.covers.iter().map(|&(a, b)| (b, a)).collect();
                c.sort_unstable();
                c
            },
        )
    }

    /// The induced subposet on `elements` (in the given order).
    pub fn induced(&self, elements: &[usize]) -> Poset {
        let labels = elements.iter().map(|&e| self.labels[e].clone()).collect();
        Poset::from_relation(labels, |i, j| self.lt(elements[i], elements[j]))
            .expect("restriction of a partial order is a partial order")
    }

    /// Componentwise-ordered product of `k` chains with `m` elements each.
    pub fn product_of_chains(k: usize, m: usize) -> Poset {
        assert!(m >= 1, "chains must be nonempty");
        let total = m.pow(k as u32);
        let digits = |mut x: usize| {
            let mut d = vec![0usize; k];
            for slot in d.iter_mut().rev() {
                *slot = x % m;
                x /= m;
            }
            d
        };
        let mut labels = Vec::with_capacity(total);
        let mut covers = Vec::new();
        for x in 0..total {
            let d = digits(x);
            labels.push(format!(
                "({})",
                d.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
            ));
            let mut weight = 1;
            for pos in (0..k).rev() {
                if d[pos] + 1 < m {
                    covers.push((x, x + weight));
                }
                weight *= m;
            }
        }
        covers.sort_unstable();
        Self::assemble(labels, covers)
    }

    /// The order complex: every nonempty chain is a face. Vertex `i` of the
    /// complex is element `i` of the poset.
    pub fn order_complex(&self) -> SimplicialComplex {
        let mut faces: Vec<Vec<u32>> = Vec::new();
        let mut chain: Vec<usize> = Vec::new();
        for x in 0..self.len() {
            chain.push(x);
            self.extend_chains(&mut chain, &mut faces);
            chain.pop();
        }
        SimplicialComplex::from_closed_faces(self.labels.clone(), faces)
            .expect("chains of a poset are closed under subsets")
    }

    fn extend_chains(&self, chain: &mut Vec<usize>, faces: &mut Vec<Vec<u32>>) {
        let mut face: Vec<u32> = chain.iter().map(|&v| v as u32).collect();
        face.sort_unstable();
        faces.push(face);
        let last = *chain.last().expect("chain is nonempty");
        for y in self.strictly_above(last).ones() {
            chain.push(y);
            self.extend_chains(chain, faces);
            chain.pop();
        }
    }

    /// Checks whether `map` (indexed by elements of `self`) is an order
    /// isomorphism onto `other`: bijective, preserving and reflecting covers.
    pub fn is_isomorphism(&self, other: &Poset, map: &[usize]) -> bool {
        if self.len() != other.len() || map.len() != self.len() {
            return false;
        }
        let mut seen = vec![false; other.len()];
        for &m in map {
            if m >= other.len() || seen[m] {
                return false;
            }
            seen[m] = true;
        }
        if self.covers.len() != other.covers.len() {
            return false;
        }
        let target: BTreeSet<(usize, usize)> = other.covers.iter().copied().collect();
        self.covers
            .iter()
            .all(|&(a, b)| target.contains(&(map[a], map[b])))
    }

    /// DOT rendering of the Hasse diagram, bottom to top, one `rank=same`
    /// group per rank.
    pub fn to_dot(&self, name: &str) -> String {
        let ranks = self.ranks();
        let mut by_rank: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &r) in ranks.iter().enumerate() {
            by_rank.entry(r).or_default().push(i);
        }
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{}\" {{", escape(name));
        let _ = writeln!(out, "  rankdir=BT;");
        let _ = writeln!(out, "  node [shape=plaintext];");
        for (i, label) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "  n{} [label=\"{}\"];", i, escape(label));
        }
        for (r, members) in &by_rank {
            let names: Vec<String> = members.iter().map(|m| format!("n{m}")).collect();
            let _ = writeln!(out, "  {{ rank=same; {}; }} // rank {}", names.join("; "), r);
        }
        for &(a, b) in &self.covers {
            let _ = writeln!(out, "  n{a} -> n{b};");
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            elements: self.labels.clone(),
            covers: self.covers.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn from_json(json: &PosetJson) -> Result<Self, PosetError> {
        Self::from_covers(
            json.elements.clone(),
            json.covers.iter().map(|c| (c[0], c[1])),
        )
    }
}

/// JSON interchange shape: `{"elements": [...], "covers": [[i, j], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub covers: Vec<[usize; 2]>,
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Strict upper sets from a cover graph, or a witness cycle.
fn strict_upper_sets(up: &[Vec<usize>]) -> Result<Vec<FixedBitSet>, Vec<usize>> {
    let n = up.len();
    let mut indeg = vec![0usize; n];
    for ys in up {
        for &y in ys {
            indeg[y] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(x) = stack.pop() {
        order.push(x);
        for &y in &up[x] {
            indeg[y] -= 1;
            if indeg[y] == 0 {
                stack.push(y);
            }
        }
    }
    if order.len() < n {
        return Err(find_cycle(up, &indeg));
    }
    let mut above = vec![FixedBitSet::with_capacity(n); n];
    for &x in order.iter().rev() {
        let mut set = FixedBitSet::with_capacity(n);
        for &y in &up[x] {
            set.insert(y);
            set.union_with(&above[y]);
        }
        above[x] = set;
    }
    Ok(above)
}

/// Walks backwards inside the unsorted remainder until a vertex repeats.
fn find_cycle(up: &[Vec<usize>], indeg: &[usize]) -> Vec<usize> {
    let n = up.len();
    let stuck: Vec<bool> = indeg.iter().map(|&d| d > 0).collect();
    let start = (0..n).find(|&i| stuck[i]).expect("a cycle exists");
    let mut pos = vec![usize::MAX; n];
    let mut path = Vec::new();
    let mut x = start;
    loop {
        if pos[x] != usize::MAX {
            return path[pos[x]..].to_vec();
        }
        pos[x] = path.len();
        path.push(x);
        x = *up[x]
            .iter()
            .find(|&&y| stuck[y])
            .expect("every stuck vertex has a stuck successor");
    }
}

/// Transitively closes `lt` in place, rejects cycles, and returns the covers.
fn reduce_relation(lt: &mut [FixedBitSet]) -> Result<Vec<(usize, usize)>, PosetError> {
    let n = lt.len();
    for k in 0..n {
        let row_k = lt[k].clone();
        for row in lt.iter_mut() {
            if row.contains(k) {
                row.union_with(&row_k);
            }
        }
    }
    for i in 0..n {
        if lt[i].contains(i) {
            let j = lt[i]
                .ones()
                .find(|&j| j != i && lt[j].contains(i))
                .unwrap_or(i);
            return Err(PosetError::Cycle(if j == i { vec![i] } else { vec![i, j] }));
        }
    }
    let mut covers = Vec::new();
    for i in 0..n {
        let mut reachable_twice = FixedBitSet::with_capacity(n);
        for k in lt[i].ones() {
            reachable_twice.union_with(&lt[k]);
        }
        for j in lt[i].ones() {
            if !reachable_twice.contains(j) {
                covers.push((i, j));
            }
        }
    }
    Ok(covers)
}

/// A group acting on the element indices of a poset, given by generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    pub generators: Vec<Vec<usize>>,
}

impl GroupAction {
    pub fn trivial() -> Self {
        GroupAction {
            generators: Vec::new(),
        }
    }

    /// Checks that every generator is a permutation sending covers to covers.
    pub fn validate(&self, poset: &Poset) -> Result<(), PosetError> {
        let n = poset.len();
        let covers: BTreeSet<(usize, usize)> = poset.covers().iter().copied().collect();
        for (g, perm) in self.generators.iter().enumerate() {
            if perm.len() != n {
                return Err(PosetError::NotPermutation(g));
            }
            let mut seen = vec![false; n];
            for &p in perm {
                if p >= n || seen[p] {
                    return Err(PosetError::NotPermutation(g));
                }
                seen[p] = true;
            }
            for &(a, b) in &covers {
                if !covers.contains(&(perm[a], perm[b])) {
                    return Err(PosetError::NotAutomorphism {
                        generator: g,
                        lower: a,
                        upper: b,
                    });
                }
            }
        }
        Ok(())
    }

    /// Orbits, each sorted, ordered by their least element.
    pub fn orbits(&self, n: usize) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for perm in &self.generators {
            for (x, &y) in perm.iter().enumerate() {
                let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..n {
            let r = find(&mut parent, x);
            groups.entry(r).or_default().push(x);
        }
        groups.into_values().collect()
    }
}

/// The orbit poset together with the orbit bookkeeping.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub poset: Poset,
    /// Orbits, each sorted; orbit `k` is element `k` of `poset`.
    pub orbits: Vec<Vec<usize>>,
    /// Orbit index of each element of the original poset.
    pub orbit_of: Vec<usize>,
}

/// Orbit poset: `X ≤ Y` iff some member of `X` lies below some member of
/// `Y`. Antisymmetry is checked rather than assumed.
pub fn quotient_poset(poset: &Poset, action: &GroupAction) -> Result<Quotient, PosetError> {
    action.validate(poset)?;
    let n = poset.len();
    let orbits = action.orbits(n);
    let mut orbit_of = vec![0; n];
    for (k, orbit) in orbits.iter().enumerate() {
        for &x in orbit {
            orbit_of[x] = k;
        }
    }
    let m = orbits.len();
    let mut rel = vec![FixedBitSet::with_capacity(m); m];
    for x in 0..n {
        for y in poset.strictly_above(x).ones() {
            let (a, b) = (orbit_of[x], orbit_of[y]);
            if a == b {
                return Err(PosetError::OrbitCycle(vec![a]));
            }
            rel[a].insert(b);
        }
    }
    let covers = reduce_relation(&mut rel).map_err(|e| match e {
        PosetError::Cycle(c) => PosetError::OrbitCycle(c),
        other => other,
    })?;
    let labels = orbits.iter().map(|o| poset.label(o[0]).to_string()).collect();
    let quotient = Poset::assemble(labels, covers);
    let _ = quotient.above.set(rel);
    Ok(Quotient {
        poset: quotient,
        orbits,
        orbit_of,
    })
}

/// Image of a closure operator with the element bookkeeping.
#[derive(Debug, Clone)]
pub struct ClosureImage {
    pub poset: Poset,
    /// Original indices of the image elements, ascending.
    pub elements: Vec<usize>,
}

/// Checks the closure laws for `map` and returns the induced subposet on its
/// image.
pub fn closure_image(poset: &Poset, map: &[usize]) -> Result<ClosureImage, PosetError> {
    if map.len() != poset.len() {
        return Err(PosetError::MapLength(map.len(), poset.len()));
    }
    let fail = |law, x, y| Err(PosetError::ClosureLaw { law, x, y });
    for (x, &fx) in map.iter().enumerate() {
        if fx >= poset.len() {
            return Err(PosetError::MapLength(fx, poset.len()));
        }
        if !poset.leq(x, fx) {
            return fail(ClosureLaw::Inflationary, x, fx);
        }
    }
    for &(x, y) in poset.covers() {
        if !poset.leq(map[x], map[y]) {
            return fail(ClosureLaw::OrderPreserving, x, y);
        }
    }
    for (x, &fx) in map.iter().enumerate() {
        if map[fx] != fx {
            return fail(ClosureLaw::Idempotent, x, fx);
        }
    }
    let elements: Vec<usize> = map.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    Ok(ClosureImage {
        poset: poset.induced(&elements),
        elements,
    })
}

/// Searches for an order isomorphism `P → Q`.
///
/// Colors are refined jointly on both posets starting from (rank, up-degree,
/// down-degree); unresolved classes are split by individualizing the least
/// element of the smallest class and backtracking over its candidates in
/// index order, so the result is deterministic.
pub fn are_isomorphic(p: &Poset, q: &Poset) -> Option<Vec<usize>> {
    if p.len() != q.len() || p.covers().len() != q.covers().len() {
        return None;
    }
    let n = p.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let joint = Joint::new(p, q);
    let (rp, rq) = (p.ranks(), q.ranks());
    let initial: Vec<(usize, usize, usize)> = (0..2 * n)
        .map(|v| {
            let r = if v < n { rp[v] } else { rq[v - n] };
            (r, joint.up[v].len(), joint.down[v].len())
        })
        .collect();
    let colors = canonical_ids(&initial);
    let map = joint.search(colors)?;
    debug_assert!(p.is_isomorphism(q, &map));
    p.is_isomorphism(q, &map).then_some(map)
}

struct Joint {
    n: usize,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
}

impl Joint {
    fn new(p: &Poset, q: &Poset) -> Self {
        let n = p.len();
        let mut up = Vec::with_capacity(2 * n);
        let mut down = Vec::with_capacity(2 * n);
        for x in 0..n {
            up.push(p.upper_covers(x).to_vec());
            down.push(p.lower_covers(x).to_vec());
        }
        for x in 0..n {
            up.push(q.upper_covers(x).iter().map(|&y| y + n).collect());
            down.push(q.lower_covers(x).iter().map(|&y| y + n).collect());
        }
        Joint { n, up, down }
    }

    fn refine(&self, mut colors: Vec<usize>) -> Option<Vec<usize>> {
        let mut classes = count_classes(&colors);
        loop {
            let sigs: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..2 * self.n)
                .map(|v| {
                    let mut u: Vec<usize> = self.up[v].iter().map(|&w| colors[w]).collect();
                    let mut d: Vec<usize> = self.down[v].iter().map(|&w| colors[w]).collect();
                    u.sort_unstable();
                    d.sort_unstable();
                    (colors[v], u, d)
                })
                .collect();
            let next = canonical_ids(&sigs);
            let next_classes = count_classes(&next);
            colors = next;
            if next_classes == classes {
                break;
            }
            classes = next_classes;
        }
        // Every color must be equally frequent on both sides.
        let mut balance: BTreeMap<usize, isize> = BTreeMap::new();
        for (v, &c) in colors.iter().enumerate() {
            *balance.entry(c).or_default() += if v < self.n { 1 } else { -1 };
        }
        balance.values().all(|&b| b == 0).then_some(colors)
    }

    fn search(&self, colors: Vec<usize>) -> Option<Vec<usize>> {
        let colors = self.refine(colors)?;
        let mut members: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for (v, &c) in colors.iter().enumerate() {
            let entry = members.entry(c).or_default();
            if v < self.n {
                entry.0.push(v);
            } else {
                entry.1.push(v - self.n);
            }
        }
        let pick = members
            .iter()
            .filter(|(_, (ps, _))| ps.len() > 1)
            .min_by_key(|(c, (ps, _))| (ps.len(), **c));
        match pick {
            None => {
                let mut map = vec![0; self.n];
                for (ps, qs) in members.values() {
                    map[ps[0]] = qs[0];
                }
                Some(map)
            }
            Some((_, (ps, qs))) => {
                let fresh = colors.iter().copied().max().unwrap_or(0) + 1;
                let p0 = ps[0];
                for &q0 in qs {
                    let mut trial = colors.clone();
                    trial[p0] = fresh;
                    trial[q0 + self.n] = fresh;
                    if let Some(map) = self.search(trial) {
                        return Some(map);
                    }
                }
                None
            }
        }
    }
}

fn count_classes(colors: &[usize]) -> usize {
    colors.iter().collect::<BTreeSet<_>>().len()
}

fn canonical_ids<T: Ord + Clone>(keys: &[T]) -> Vec<usize> {
    let sorted: BTreeSet<&T> = keys.iter().collect();
    let index: BTreeMap<&T, usize> = sorted.into_iter().enumerate().map(|(i, k)| (k, i)).collect();
    keys.iter().map(|k| index[k]).collect()
}
