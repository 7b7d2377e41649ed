//! Iterated compositions: the cell decomposition of unordered
//! configurations of `n` points in `R^d`.
//!
//! Sort a configuration lexicographically. Level 1 groups points with equal
//! first coordinate, level 2 refines each group by the second coordinate,
//! and so on. Each level is a composition of `n`, stored as its merged set,
//! so an iterated composition of degree `d` is a chain
//!
//! ```text
//! A₁ ⊇ A₂ ⊇ ⋯ ⊇ A_d,   A_s ⊆ [n−1]
//! ```
//!
//! where `i ∈ A_s` means points `i` and `i+1` agree in coordinates `1..s`.
//! Recording for each position `i` its depth, the number of levels at which
//! it is merged, identifies the poset of iterated compositions (ordered
//! componentwise by inclusion) with a product of `n − 1` chains of length
//! `d + 1`. The cell of `π` has dimension `nd − Σ_s |A_s|`.

use std::fmt;

use num_rational::BigRational;
use serde_json::{json, Value};

use crate::compositions::{
    compositions_of_type, c_lambda_poset, Composition, CompositionError, MergedSet, NumberPartition,
    MAX_DEGREE,
};
use crate::poset::{are_isomorphic, Poset};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IteratedError {
    #[error("levels must be nested A1 ⊇ A2 ⊇ … ⊇ Ad; level {0} is not contained in level {1}")]
    NotNested(usize, usize),
    #[error("need n ≥ 1 and d ≥ 1, got n = {0}, d = {1}")]
    Degenerate(u32, usize),
    #[error("configuration has {points} points in dimension {dim}, expected {n} points in dimension {d}")]
    Shape {
        points: usize,
        dim: usize,
        n: u32,
        d: usize,
    },
    #[error(transparent)]
    Composition(#[from] CompositionError),
}

/// A nested chain of merged sets, coarsest first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IteratedComposition {
    n: u32,
    levels: Vec<MergedSet>,
}

impl IteratedComposition {
    pub fn new(n: u32, levels: Vec<MergedSet>) -> Result<Self, IteratedError> {
        if n == 0 || levels.is_empty() {
            return Err(IteratedError::Degenerate(n, levels.len()));
        }
        for s in 1..levels.len() {
            if !levels[s].is_subset(&levels[s - 1]) {
                return Err(IteratedError::NotNested(s + 1, s));
            }
        }
        Ok(IteratedComposition { n, levels })
    }

    /// From merged-position lists, one per level (1-based positions).
    pub fn from_positions(n: u32, levels: &[Vec<u32>]) -> Result<Self, IteratedError> {
        let levels = levels
            .iter()
            .map(|p| MergedSet::new(n, p))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, levels)
    }

    /// Position `i` (1-based) merged at levels `1..=depths[i−1]`.
    pub fn from_depths(n: u32, d: usize, depths: &[usize]) -> Result<Self, IteratedError> {
        assert_eq!(depths.len(), n.saturating_sub(1) as usize);
        let levels = (1..=d)
            .map(|s| {
                let pos: Vec<u32> = depths
                    .iter()
                    .enumerate()
                    .filter(|&(_, &k)| k >= s)
                    .map(|(i, _)| i as u32 + 1)
                    .collect();
                MergedSet::new(n, &pos)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, levels)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[MergedSet] {
        &self.levels
    }

    /// Level `s` (1-based) as a composition.
    pub fn composition(&self, s: usize) -> Composition {
        self.levels[s - 1].composition()
    }

    pub fn depths(&self) -> Vec<usize> {
        (1..self.n)
            .map(|i| self.levels.iter().filter(|a| a.contains(i)).count())
            .collect()
    }

    /// `nd − Σ_s (n − t_s)` with `t_s` the number of blocks at level `s`.
    pub fn cell_dimension(&self) -> u32 {
        // n − t_s = |A_s|
        let merged: u32 = self.levels.iter().map(|a| a.len() as u32).sum();
        self.n * self.levels.len() as u32 - merged
    }

    pub fn leq(&self, other: &IteratedComposition) -> bool {
        self.levels.len() == other.levels.len()
            && self.levels.iter().zip(&other.levels).all(|(a, b)| a.is_subset(b))
    }

    pub fn to_json(&self) -> Value {
        json!(self.levels.iter().map(MergedSet::positions).collect::<Vec<_>>())
    }

    /// Whether the ordered configuration `points` (point `i` has coordinates
    /// `points[i][0..d]`) lies in the cell: at every level `s`, points in one
    /// block agree in coordinate `s`, and consecutive blocks inside one
    /// block of level `s − 1` increase strictly in coordinate `s` (level 0 is
    /// a single block).
    pub fn contains(&self, points: &[Vec<BigRational>]) -> Result<bool, IteratedError> {
        let d = self.levels.len();
        if points.len() != self.n as usize || points.iter().any(|p| p.len() != d) {
            return Err(IteratedError::Shape {
                points: points.len(),
                dim: points.first().map_or(0, Vec::len),
                n: self.n,
                d,
            });
        }
        for (s, level) in self.levels.iter().enumerate() {
            for i in 1..self.n {
                let (a, b) = (&points[i as usize - 1][s], &points[i as usize][s]);
                let joined_before = s == 0 || self.levels[s - 1].contains(i);
                if level.contains(i) {
                    if a != b {
                        return Ok(false);
                    }
                } else if joined_before && a >= b {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

impl fmt::Display for IteratedComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let levels: Vec<String> = self.levels.iter().map(|a| a.composition().to_string()).collect();
        write!(f, "{}", levels.join("≽"))
    }
}

/// `cell_contains` as a free function.
pub fn cell_contains(
    pi: &IteratedComposition,
    points: &[Vec<BigRational>],
) -> Result<bool, IteratedError> {
    pi.contains(points)
}

/// The poset of all iterated compositions of `n` of degree `d`, ordered
/// componentwise. Element indices follow the mixed-radix encoding of the
/// depth vector (position 1 most significant), matching
/// [`Poset::product_of_chains`].
#[derive(Debug, Clone)]
pub struct IteratedPoset {
    pub n: u32,
    pub d: usize,
    pub elements: Vec<IteratedComposition>,
    pub poset: Poset,
}

impl IteratedPoset {
    /// The explicit map to `product_of_chains(n − 1, d + 1)` is the identity
    /// on indices; this checks it is an isomorphism.
    pub fn depth_map_is_isomorphism(&self) -> bool {
        let chains = Poset::product_of_chains(self.n as usize - 1, self.d + 1);
        let identity: Vec<usize> = (0..self.poset.len()).collect();
        self.poset.is_isomorphism(&chains, &identity)
    }

    /// Isomorphism to the product of chains found by search.
    pub fn isomorphic_to_product(&self) -> bool {
        let chains = Poset::product_of_chains(self.n as usize - 1, self.d + 1);
        are_isomorphic(&self.poset, &chains).is_some()
    }
}

pub fn iterated_poset(n: u32, d: usize) -> Result<IteratedPoset, IteratedError> {
    if n == 0 || d == 0 {
        return Err(IteratedError::Degenerate(n, d));
    }
    if n > MAX_DEGREE {
        return Err(CompositionError::TooLarge(n).into());
    }
    let k = n as usize - 1;
    let m = d + 1;
    let total = m.pow(k as u32);
    let mut elements = Vec::with_capacity(total);
    let mut covers = Vec::new();
    for x in 0..total {
        let mut depths = vec![0usize; k];
        let mut rest = x;
        for slot in depths.iter_mut().rev() {
            *slot = rest % m;
            rest /= m;
        }
        elements.push(IteratedComposition::from_depths(n, d, &depths)?);
        let mut weight = 1;
        for pos in (0..k).rev() {
            if depths[pos] + 1 < m {
                covers.push((x, x + weight));
            }
            weight *= m;
        }
    }
    let labels = elements.iter().map(|e| e.to_json().to_string()).collect();
    let poset = Poset::from_covers(labels, covers).expect("product order");
    Ok(IteratedPoset {
        n,
        d,
        elements,
        poset,
    })
}

/// The join-closure of constant tuples `(A, …, A)` over merged sets of
/// type-`λ` compositions. Joins of constant tuples are constant, so this is
/// `C_λ` with every element repeated at all `d` levels; `include_top` keeps
/// the generated maximum `[n−1]`.
#[derive(Debug, Clone)]
pub struct IteratedCLambda {
    pub elements: Vec<IteratedComposition>,
    pub poset: Poset,
}

pub fn c_lambda_d_poset(
    lambda: &NumberPartition,
    d: usize,
    include_top: bool,
) -> Result<IteratedCLambda, IteratedError> {
    let n = lambda.weight();
    if n == 0 || d == 0 {
        return Err(IteratedError::Degenerate(n, d));
    }
    let c = c_lambda_poset(lambda)?;
    let mut sets: Vec<MergedSet> = c.merged.clone();
    let top_generated = compositions_of_type(lambda)
        .iter()
        .map(|comp| comp.merged_set())
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .reduce(|a, b| a.union(&b))
        .filter(MergedSet::is_full);
    if include_top {
        if let Some(top) = top_generated {
            sets.push(top);
        }
    }
    let elements: Vec<IteratedComposition> = sets
        .iter()
        .map(|&a| IteratedComposition::new(n, vec![a; d]))
        .collect::<Result<_, _>>()?;
    let labels = elements.iter().map(|e| e.to_json().to_string()).collect();
    let poset = Poset::from_relation(labels, |i, j| i != j && elements[i].leq(&elements[j]))
        .expect("componentwise inclusion");
    Ok(IteratedCLambda { elements, poset })
}
