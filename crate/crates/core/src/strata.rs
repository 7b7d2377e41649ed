//! Cellular chain complexes for closures of strata of monic real
//! polynomials of degree `n`.
//!
//! A cell is a composition `(a₁,…,a_t)` of some `m ≤ n` with `n − m` even:
//! the polynomials with `t` distinct real roots of multiplicities `aᵢ` (in
//! increasing order) times an elliptic factor of degree `n − m`. Its
//! dimension is `t + (n − m)`. The closure of a stratum is reached by two
//! moves, each lowering the dimension by one:
//!
//! * merge two neighbouring roots, `(…, aᵢ, aᵢ₊₁, …) → (…, aᵢ + aᵢ₊₁, …)`;
//! * let a complex-conjugate pair land on the real line, inserting a part
//!   equal to 2 anywhere, allowed while the weight stays at most `n`.
//!
//! The boundary operator is
//!
//! ```text
//! ∂[a] = Σᵢ (−1)^i [merge at i] + Σ_b ε(a, b) [b]
//! ```
//!
//! where `b` runs over the distinct results of inserting one 2. If `b`
//! recovers `a` by deleting a 2 from the maximal run of 2's at positions
//! `j₁..j₂`, then `ε = 0` when the run has even length and
//! `ε = (−1)^{j₁−1}` when its length is odd.
//!
//! Homology of this complex is the reduced homology of the one-point
//! compactification of the closure. Degrees are intrinsic cell dimensions.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::compositions::{compositions_of_type, Composition, CompositionError, NumberPartition};
use crate::homology::{ChainComplex, HomologyError, HomologyResult, SparseMatrix};
use crate::poset::{Poset, PosetError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StrataError {
    #[error("weight {weight} and ambient degree {n} must satisfy weight ≤ n with n − weight even")]
    Ambient { weight: u32, n: u32 },
    #[error("inserting a 2 into {source_cell} gives {target} through two different runs of 2's")]
    AmbiguousRun { source_cell: String, target: String },
    #[error("the closure of the stratum {lambda} is all of degree-{n} polynomial space")]
    FullClosure { lambda: String, n: u32 },
    #[error("ambient range {0}..={1} is empty or has the wrong parity")]
    Range(u32, u32),
    #[error(transparent)]
    Composition(#[from] CompositionError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// How the insertion coefficient reads the length of a run of 2's.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParityRule {
    /// Vanishes on runs of even length.
    #[default]
    Corrected,
    /// Vanishes when `j₂ − j₁` is even, i.e. on runs of odd length. Kept
    /// only to exhibit that it fails `∂∘∂ = 0`.
    Literal,
}

/// A composition of `m` placed in ambient degree `n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StratumCell {
    composition: Composition,
    n: u32,
}

impl StratumCell {
    pub fn new(composition: Composition, n: u32) -> Result<Self, StrataError> {
        let weight = composition.weight();
        if weight > n || (n - weight) % 2 != 0 {
            return Err(StrataError::Ambient { weight, n });
        }
        Ok(StratumCell { composition, n })
    }

    pub fn composition(&self) -> &Composition {
        &self.composition
    }

    pub fn ambient(&self) -> u32 {
        self.n
    }

    /// `t + (n − m)`.
    pub fn dimension(&self) -> u32 {
        self.composition.len() as u32 + self.n - self.composition.weight()
    }

    /// Cells one dimension lower reached by a single merge or insertion.
    pub fn moves(&self) -> Vec<StratumCell> {
        let c = &self.composition;
        let mut out: Vec<StratumCell> = (0..c.len().saturating_sub(1))
            .map(|i| StratumCell {
                composition: c.merge_at(i),
                n: self.n,
            })
            .collect();
        if c.weight() + 2 <= self.n {
            for slot in 0..=c.len() {
                out.push(StratumCell {
                    composition: c.insert_at(slot, 2),
                    n: self.n,
                });
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

impl fmt::Display for StratumCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.composition)
    }
}

fn seeds(lambda: &NumberPartition, n: u32) -> Result<Vec<StratumCell>, StrataError> {
    let weight = lambda.weight();
    if weight > n || (n - weight) % 2 != 0 {
        return Err(StrataError::Ambient { weight, n });
    }
    Ok(compositions_of_type(lambda)
        .into_iter()
        .map(|composition| StratumCell { composition, n })
        .collect())
}

/// All cells in the closure of the stratum of type `λ` in degree `n`,
/// sorted by dimension and then composition.
pub fn closure_cells(lambda: &NumberPartition, n: u32) -> Result<Vec<StratumCell>, StrataError> {
    let mut seen: BTreeSet<StratumCell> = BTreeSet::new();
    let mut queue: VecDeque<StratumCell> = seeds(lambda, n)?.into();
    while let Some(cell) = queue.pop_front() {
        if !seen.insert(cell.clone()) {
            continue;
        }
        let d = cell.dimension();
        for next in cell.moves() {
            assert_eq!(next.dimension() + 1, d, "moves lower dimension by one");
            if !seen.contains(&next) {
                queue.push_back(next);
            }
        }
    }
    let mut cells: Vec<StratumCell> = seen.into_iter().collect();
    cells.sort_by(|a, b| a.dimension().cmp(&b.dimension()).then_with(|| a.cmp(b)));
    Ok(cells)
}

/// Maximal runs of 2's in `parts` as 1-based `(j₁, j₂)`.
fn runs_of_two(parts: &[u32]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < parts.len() {
        if parts[i] == 2 {
            let start = i;
            while i < parts.len() && parts[i] == 2 {
                i += 1;
            }
            out.push((start + 1, i));
        } else {
            i += 1;
        }
    }
    out
}

fn insertion_coefficient(
    source: &Composition,
    target: &Composition,
    rule: ParityRule,
) -> Result<i64, StrataError> {
    let recovering: Vec<(usize, usize)> = runs_of_two(target.parts())
        .into_iter()
        .filter(|&(j1, _)| {
            let mut parts = target.parts().to_vec();
            parts.remove(j1 - 1);
            parts == source.parts()
        })
        .collect();
    let [(j1, j2)] = recovering[..] else {
        return Err(StrataError::AmbiguousRun {
            source_cell: source.to_string(),
            target: target.to_string(),
        });
    };
    let vanishes = match rule {
        ParityRule::Corrected => (j2 - j1 + 1) % 2 == 0,
        ParityRule::Literal => (j2 - j1) % 2 == 0,
    };
    Ok(if vanishes {
        0
    } else if (j1 - 1) % 2 == 0 {
        1
    } else {
        -1
    })
}

/// Signed boundary of a cell, with zero terms dropped, sorted by cell.
pub fn boundary(cell: &StratumCell, rule: ParityRule) -> Result<Vec<(StratumCell, i64)>, StrataError> {
    let c = &cell.composition;
    let mut terms: BTreeMap<StratumCell, i64> = BTreeMap::new();
    for i in 1..c.len() {
        let target = StratumCell {
            composition: c.merge_at(i - 1),
            n: cell.n,
        };
        *terms.entry(target).or_insert(0) += if i % 2 == 0 { 1 } else { -1 };
    }
    if c.weight() + 2 <= cell.n {
        let targets: BTreeSet<Composition> = (0..=c.len()).map(|s| c.insert_at(s, 2)).collect();
        for target in targets {
            let eps = insertion_coefficient(c, &target, rule)?;
            *terms
                .entry(StratumCell {
                    composition: target,
                    n: cell.n,
                })
                .or_insert(0) += eps;
        }
    }
    Ok(terms.into_iter().filter(|&(_, v)| v != 0).collect())
}

/// `∂(∂ cell)` with zero terms dropped.
pub fn boundary_squared(
    cell: &StratumCell,
    rule: ParityRule,
) -> Result<Vec<(StratumCell, i64)>, StrataError> {
    let mut acc: BTreeMap<StratumCell, i64> = BTreeMap::new();
    for (face, a) in boundary(cell, rule)? {
        for (g, b) in boundary(&face, rule)? {
            *acc.entry(g).or_insert(0) += a * b;
        }
    }
    Ok(acc.into_iter().filter(|&(_, v)| v != 0).collect())
}

/// The cellular chain complex of the closure of the stratum of type `λ`,
/// graded by cell dimension.
#[derive(Debug, Clone)]
pub struct PolComplex {
    pub lambda: NumberPartition,
    pub n: u32,
    pub cells: Vec<StratumCell>,
    pub complex: ChainComplex,
}

pub fn pol_chain_complex(lambda: &NumberPartition, n: u32) -> Result<PolComplex, StrataError> {
    pol_chain_complex_with(lambda, n, ParityRule::Corrected)
}

pub fn pol_chain_complex_with(
    lambda: &NumberPartition,
    n: u32,
    rule: ParityRule,
) -> Result<PolComplex, StrataError> {
    let cells = closure_cells(lambda, n)?;
    let min = cells.first().map_or(0, StratumCell::dimension);
    let max = cells.last().map_or(0, StratumCell::dimension);
    let span = if cells.is_empty() { 0 } else { (max - min + 1) as usize };
    let mut by_degree: Vec<Vec<&StratumCell>> = vec![Vec::new(); span];
    for c in &cells {
        by_degree[(c.dimension() - min) as usize].push(c);
    }
    let index: HashMap<&StratumCell, usize> = by_degree
        .iter()
        .flat_map(|layer| layer.iter().enumerate().map(|(i, &c)| (c, i)))
        .collect();
    let mut boundaries = Vec::new();
    for k in 1..span {
        let mut triplets = Vec::new();
        for (col, cell) in by_degree[k].iter().enumerate() {
            for (face, v) in boundary(cell, rule)? {
                triplets.push((index[&face], col, v));
            }
        }
        boundaries.push(SparseMatrix::from_triplets(
            by_degree[k - 1].len(),
            by_degree[k].len(),
            triplets,
        ));
    }
    let ranks = by_degree.iter().map(Vec::len).collect();
    let labels = by_degree
        .iter()
        .map(|layer| layer.iter().map(|c| c.to_string()).collect())
        .collect();
    let complex = ChainComplex::new(min as i64, ranks, boundaries, Some(labels))?;
    Ok(PolComplex {
        lambda: lambda.clone(),
        n,
        cells,
        complex,
    })
}

/// Reduced homology of the one-point compactification of the closure.
pub fn pol_homology(lambda: &NumberPartition, n: u32) -> Result<HomologyResult, StrataError> {
    Ok(pol_chain_complex(lambda, n)?.complex.homology(true)?)
}

/// Reduced integral cohomology of the complement of a stratum closure in
/// degree-`n` polynomial space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementCohomology {
    pub lambda: NumberPartition,
    pub n: u32,
    /// Group in degree `q` is `H̃^q` of the complement.
    pub groups: HomologyResult,
}

/// Alexander duality in `Sⁿ`: `H̃^q(Sⁿ ∖ X) ≅ H̃_{n−q−1}(X)` for the
/// compactified closure `X`.
pub fn complement_cohomology(
    lambda: &NumberPartition,
    n: u32,
) -> Result<ComplementCohomology, StrataError> {
    let cells = closure_cells(lambda, n)?;
    let tops = (0..=n)
        .filter(|l| (n - l) % 2 == 0)
        .map(|l| StratumCell {
            composition: Composition::new(vec![1; l as usize]).expect("positive"),
            n,
        });
    let present: BTreeSet<&StratumCell> = cells.iter().collect();
    if tops.into_iter().all(|t| present.contains(&t)) {
        return Err(StrataError::FullClosure {
            lambda: lambda.to_string(),
            n,
        });
    }
    let h = pol_homology(lambda, n)?;
    let mut groups = HomologyResult::zero(true);
    for (p, g) in h.groups() {
        groups.set(n as i64 - p - 1, g.betti, g.torsion.clone());
    }
    Ok(ComplementCohomology {
        lambda: lambda.clone(),
        n,
        groups,
    })
}

/// `C_{λ,≤n}`: closure cells ordered by degeneration, one cover per move
/// from the result up to its source.
#[derive(Debug, Clone)]
pub struct ClosurePoset {
    pub cells: Vec<StratumCell>,
    pub poset: Poset,
}

pub fn closure_poset(lambda: &NumberPartition, n: u32) -> Result<ClosurePoset, StrataError> {
    let cells = closure_cells(lambda, n)?;
    let index: HashMap<&StratumCell, usize> = cells.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut covers = Vec::new();
    for (i, c) in cells.iter().enumerate() {
        for m in c.moves() {
            covers.push((index[&m], i));
        }
    }
    let labels = cells.iter().map(|c| c.to_string()).collect();
    let poset = Poset::from_covers(labels, covers)?;
    Ok(ClosurePoset { cells, poset })
}

/// Complement cohomology for `n_min, n_min + 2, …, n_max`, the lowest degree
/// at which consecutive columns differ, and the closure poset at `n_max`.
#[derive(Debug, Clone)]
pub struct StabilizationReport {
    pub lambda: NumberPartition,
    pub columns: Vec<ComplementCohomology>,
    /// `(n, n + 2, lowest differing degree)` for consecutive columns.
    pub differences: Vec<(u32, u32, Option<i64>)>,
    pub closure: ClosurePoset,
}

impl StabilizationReport {
    /// Whether columns `n` and `n + 2` agree in every degree `≤ bound`.
    pub fn agree_through(&self, n: u32, bound: i64) -> Option<bool> {
        self.differences
            .iter()
            .find(|d| d.0 == n)
            .map(|d| d.2.is_none_or(|q| q > bound))
    }

    /// Long-format CSV with columns `n,degree,betti,torsion`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,degree,betti,torsion\n");
        for col in &self.columns {
            for (q, g) in col.groups.groups() {
                let t: Vec<String> = g.torsion.iter().map(|d| d.to_string()).collect();
                out.push_str(&format!("{},{q},{},{}\n", col.n, g.betti, t.join(" ")));
            }
        }
        out
    }
}

fn lowest_difference(a: &HomologyResult, b: &HomologyResult) -> Option<i64> {
    let degrees: BTreeSet<i64> = a.groups().chain(b.groups()).map(|(q, _)| q).collect();
    degrees.into_iter().find(|&q| a.group(q) != b.group(q))
}

pub fn stabilization_report(
    lambda: &NumberPartition,
    n_min: u32,
    n_max: u32,
) -> Result<StabilizationReport, StrataError> {
    let l = lambda.weight();
    if n_min < l || n_max < n_min || (n_min - l) % 2 != 0 {
        return Err(StrataError::Range(n_min, n_max));
    }
    let columns: Vec<ComplementCohomology> = (n_min..=n_max)
        .step_by(2)
        .map(|n| complement_cohomology(lambda, n))
        .collect::<Result<_, _>>()?;
    let differences = columns
        .windows(2)
        .map(|w| (w[0].n, w[1].n, lowest_difference(&w[0].groups, &w[1].groups)))
        .collect();
    let top = columns.last().map_or(n_min, |c| c.n);
    Ok(StabilizationReport {
        lambda: lambda.clone(),
        columns,
        differences,
        closure: closure_poset(lambda, top)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(s: &str) -> NumberPartition {
        s.parse().unwrap()
    }

    fn cell(s: &str, n: u32) -> StratumCell {
        StratumCell::new(s.parse().unwrap(), n).unwrap()
    }

    fn render(terms: &[(StratumCell, i64)]) -> Vec<(String, i64)> {
        terms.iter().map(|(c, v)| (c.to_string(), *v)).collect()
    }

    #[test]
    fn cell_validation() {
        assert!(StratumCell::new("1,2".parse().unwrap(), 4).is_err());
        assert!(StratumCell::new("1,2".parse().unwrap(), 2).is_err());
        assert_eq!(cell("2,1", 5).dimension(), 4);
        assert_eq!(cell("", 4).dimension(), 4);
    }

    #[test]
    fn closure_examples() {
        let names = |l: &str, n| -> Vec<String> {
            closure_cells(&part(l), n).unwrap().iter().map(|c| c.to_string()).collect()
        };
        assert_eq!(names("1,1", 2), vec!["(2)", "(1,1)"]);
        assert_eq!(names("1", 3), vec!["(3)", "(1,2)", "(2,1)", "(1)"]);
        let c = names("1,1", 4);
        assert_eq!(c.len(), 9);
        assert!(!c.contains(&"(1,1,1,1)".to_string()));
    }

    #[test]
    fn boundary_examples() {
        let b = boundary(&cell("1,1", 4), ParityRule::Corrected).unwrap();
        let mut expect = vec![
            ("(1,1,2)".to_string(), 1),
            ("(1,2,1)".to_string(), -1),
            ("(2)".to_string(), -1),
            ("(2,1,1)".to_string(), 1),
        ];
        expect.sort();
        let mut got = render(&b);
        got.sort();
        assert_eq!(got, expect);
        assert!(boundary(&cell("2", 4), ParityRule::Corrected).unwrap().is_empty());
        assert_eq!(render(&boundary(&cell("", 2), ParityRule::Corrected).unwrap()), vec![("(2)".to_string(), 1)]);
    }

    #[test]
    fn literal_rule_fails_square_zero() {
        let sq = boundary_squared(&cell("1,1", 4), ParityRule::Literal).unwrap();
        assert_eq!(render(&sq), vec![("(2,2)".to_string(), -1)]);
        assert!(boundary_squared(&cell("1,1", 4), ParityRule::Corrected).unwrap().is_empty());
        let err = pol_chain_complex_with(&part("1,1"), 4, ParityRule::Literal).unwrap_err();
        assert!(matches!(err, StrataError::Homology(HomologyError::NonZeroSquare { .. })));
    }

    #[test]
    fn chain_complex_shapes() {
        let p = pol_chain_complex(&part("1,1"), 2).unwrap();
        assert_eq!(p.complex.rank(2), 1);
        assert_eq!(p.complex.rank(1), 1);
        assert_eq!(p.complex.boundary(2).unwrap().triplets(), vec![(0, 0, -1)]);
        let p = pol_chain_complex(&part("2"), 4).unwrap();
        assert_eq!(p.complex.generator_labels(3), &["(2)".to_string()]);
        assert_eq!(p.complex.generator_labels(2), &["(2,2)".to_string()]);
        assert_eq!(p.complex.generator_labels(1), &["(4)".to_string()]);
        assert_eq!(p.complex.boundary(2).unwrap().triplets(), vec![(0, 0, -1)]);
    }

    #[test]
    fn homology_examples() {
        assert!(pol_homology(&part(""), 2).unwrap().is_trivial());
        assert_eq!(pol_homology(&part("2"), 4).unwrap().sphere_dimension(), Some(3));
        assert_eq!(pol_homology(&part("3"), 3).unwrap().sphere_dimension(), Some(1));
    }

    #[test]
    fn complement_examples() {
        let c = complement_cohomology(&part("2"), 2).unwrap();
        assert_eq!(c.groups.sphere_dimension(), Some(0));
        let c = complement_cohomology(&part("2"), 4).unwrap();
        assert_eq!(c.groups.betti(0), 1);
        assert!(matches!(
            complement_cohomology(&part("1"), 1),
            Err(StrataError::FullClosure { .. })
        ));
    }

    #[test]
    fn stabilization_of_the_double_root() {
        let r = stabilization_report(&part("2"), 2, 6).unwrap();
        for col in &r.columns {
            assert_eq!(col.groups.betti(0), 1);
        }
        assert_eq!(r.agree_through(2, 0), Some(true));
        assert!(r.to_csv().starts_with("n,degree,betti,torsion\n2,0,1,"));
        assert!(stabilization_report(&part("2"), 3, 6).is_err());
    }

    #[test]
    fn closure_poset_is_graded_by_dimension() {
        let c = closure_poset(&part("2,3"), 9).unwrap();
        let ranks = c.poset.ranks();
        let min_dim = c.cells.iter().map(StratumCell::dimension).min().unwrap();
        for (i, cell) in c.cells.iter().enumerate() {
            if c.poset.lower_covers(i).is_empty() {
                continue;
            }
            assert_eq!(ranks[i] as u32, cell.dimension() - min_dim);
        }
    }
}
