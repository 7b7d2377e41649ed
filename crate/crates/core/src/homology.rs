//! Integral homology of simplicial and abstract chain complexes.
//!
//! Boundary matrices are kept sparse with machine-integer entries. Invariant
//! factors are computed in two phases: unit pivots are eliminated sparsely
//! (with checked arithmetic), and whatever survives is handed to a dense
//! Smith normal form over arbitrary-precision integers. If the sparse phase
//! ever overflows it is rerun on big integers.
//!
//! Homology is always reported in the reduced convention: simplicial
//! complexes are augmented by the empty face in degree −1, so the empty
//! complex has `H̃₋₁ = ℤ` and a point has no homology at all.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomologyError {
    #[error("boundary of degree {degree} has shape {found:?}, expected {expected:?}")]
    Shape {
        degree: i64,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("boundary squared is nonzero on generator {generator} of degree {degree}: image {image:?}")]
    NonZeroSquare {
        degree: i64,
        generator: String,
        image: Vec<(String, i64)>,
    },
    #[error("face {0:?} is missing its boundary face {1:?}")]
    NotClosed(Vec<u32>, Vec<u32>),
    #[error("face {0:?} uses a vertex outside the vertex set")]
    BadVertex(Vec<u32>),
    #[error("Euler characteristic mismatch: chains give {chains}, homology gives {homology}")]
    EulerMismatch { chains: i64, homology: i64 },
}

/// Column-major sparse integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    cols: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            cols: vec![Vec::new(); ncols],
        }
    }

    /// Builds from coordinate triplets `(row, col, value)`; repeated
    /// coordinates are summed and zeros dropped.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Self {
        let mut acc: Vec<BTreeMap<u32, i64>> = vec![BTreeMap::new(); ncols];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet ({r}, {c}) out of range");
            *acc[c].entry(r as u32).or_insert(0) += v;
        }
        SparseMatrix {
            nrows,
            cols: acc
                .into_iter()
                .map(|col| col.into_iter().filter(|&(_, v)| v != 0).collect())
                .collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, c: usize) -> &[(u32, i64)] {
        &self.cols[c]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn triplets(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::with_capacity(self.nnz());
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                out.push((r as usize, c, v));
            }
        }
        out.sort_unstable();
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.ncols()]; self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                d[r as usize][c] = BigInt::from(v);
            }
        }
        d
    }

    /// Image of column `c` of `other` under `self`, i.e. column `c` of
    /// `self · other`, with zeros dropped.
    pub fn apply_to_column(&self, other: &SparseMatrix, c: usize) -> Vec<(usize, i64)> {
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for &(mid, v) in &other.cols[c] {
            for &(r, w) in &self.cols[mid as usize] {
                *acc.entry(r as usize).or_insert(0) += v * w;
            }
        }
        acc.into_iter().filter(|&(_, v)| v != 0).collect()
    }

    /// Invariant factors `d₁ | d₂ | … | d_r`, `r` the rank.
    pub fn invariant_factors(&self) -> Vec<BigUint> {
        let rows = self.row_lists::<i64>();
        let factors = match eliminate_units(rows, self.ncols()) {
            Some(f) => f,
            None => eliminate_units(self.row_lists::<BigInt>(), self.ncols())
                .expect("big integer elimination cannot overflow"),
        };
        debug_assert!(is_divisibility_chain(&factors));
        factors
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    fn row_lists<T: Entry>(&self) -> Vec<Vec<(u32, T)>> {
        let mut rows: Vec<Vec<(u32, T)>> = vec![Vec::new(); self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                rows[r as usize].push((c as u32, T::from_i64(v)));
            }
        }
        rows
    }
}

/// Invariant factors of a dense arbitrary-precision matrix.
pub fn smith_normal_form(matrix: &[Vec<BigInt>]) -> Vec<BigUint> {
    let factors = dense_invariant_factors(matrix.to_vec());
    assert!(is_divisibility_chain(&factors));
    factors
}

fn is_divisibility_chain(factors: &[BigUint]) -> bool {
    factors.iter().all(|d| !d.is_zero())
        && factors.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
}

trait Entry: Clone + fmt::Debug {
    fn from_i64(v: i64) -> Self;
    fn vanishes(&self) -> bool;
    fn is_unit(&self) -> bool;
    /// `a - f·b`, `None` on overflow.
    fn sub_mul(a: &Self, f: &Self, b: &Self) -> Option<Self>;
    /// `-f·b`, `None` on overflow.
    fn neg_mul(f: &Self, b: &Self) -> Option<Self>;
    fn mul(a: &Self, b: &Self) -> Option<Self>;
    fn to_bigint(&self) -> BigInt;
}

impl Entry for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn vanishes(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn sub_mul(a: &Self, f: &Self, b: &Self) -> Option<Self> {
        a.checked_sub(f.checked_mul(*b)?)
    }
    fn neg_mul(f: &Self, b: &Self) -> Option<Self> {
        f.checked_mul(*b)?.checked_neg()
    }
    fn mul(a: &Self, b: &Self) -> Option<Self> {
        a.checked_mul(*b)
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Entry for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }
    fn sub_mul(a: &Self, f: &Self, b: &Self) -> Option<Self> {
        Some(a - f * b)
    }
    fn neg_mul(f: &Self, b: &Self) -> Option<Self> {
        Some(-(f * b))
    }
    fn mul(a: &Self, b: &Self) -> Option<Self> {
        Some(a * b)
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

/// `target -= factor · pivot` on sorted sparse rows. Newly created columns
/// are reported through `created`.
fn row_sub<T: Entry>(
    target: &[(u32, T)],
    factor: &T,
    pivot: &[(u32, T)],
    created: &mut Vec<u32>,
) -> Option<Vec<(u32, T)>> {
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < pivot.len() {
        let ti = target.get(i).map(|e| e.0);
        let pj = pivot.get(j).map(|e| e.0);
        match (ti, pj) {
            (Some(a), Some(b)) if a == b => {
                let v = T::sub_mul(&target[i].1, factor, &pivot[j].1)?;
                if !v.vanishes() {
                    out.push((a, v));
                }
                i += 1;
                j += 1;
            }
            (Some(a), Some(b)) if a < b => {
                out.push(target[i].clone());
                i += 1;
            }
            (Some(_), None) => {
                out.push(target[i].clone());
                i += 1;
            }
            (_, Some(b)) => {
                let v = T::neg_mul(factor, &pivot[j].1)?;
                if !v.vanishes() {
                    created.push(b);
                    out.push((b, v));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    Some(out)
}

fn entry_at<T: Entry>(row: &[(u32, T)], col: u32) -> Option<&T> {
    row.binary_search_by_key(&col, |e| e.0)
        .ok()
        .map(|k| &row[k].1)
}

/// Sparse elimination on unit pivots followed by dense Smith normal form of
/// the remainder. `None` means the machine-integer phase overflowed.
fn eliminate_units<T: Entry>(mut rows: Vec<Vec<(u32, T)>>, ncols: usize) -> Option<Vec<BigUint>> {
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    for (r, row) in rows.iter().enumerate() {
        for (c, _) in row {
            col_rows[*c as usize].push(r as u32);
        }
    }
    let mut row_alive = vec![true; rows.len()];
    let mut col_alive = vec![true; ncols];
    let mut units = 0usize;
    let mut created = Vec::new();
    loop {
        let mut progress = false;
        for c in 0..ncols {
            if !col_alive[c] {
                continue;
            }
            let c32 = c as u32;
            let mut members = std::mem::take(&mut col_rows[c]);
            members.sort_unstable();
            members.dedup();
            members.retain(|&r| row_alive[r as usize] && entry_at(&rows[r as usize], c32).is_some());
            if members.is_empty() {
                col_alive[c] = false;
                continue;
            }
            let pivot_row = members
                .iter()
                .copied()
                .filter(|&r| entry_at(&rows[r as usize], c32).is_some_and(Entry::is_unit))
                .min_by_key(|&r| (rows[r as usize].len(), r));
            let Some(pr) = pivot_row else {
                col_rows[c] = members;
                continue;
            };
            let pivot = std::mem::take(&mut rows[pr as usize]);
            let p = entry_at(&pivot, c32).expect("pivot present").clone();
            for &r in &members {
                if r == pr {
                    continue;
                }
                let a = entry_at(&rows[r as usize], c32).expect("member has entry");
                // p = ±1, so a / p = a · p
                let factor = T::mul(a, &p)?;
                created.clear();
                let updated = row_sub(&rows[r as usize], &factor, &pivot, &mut created)?;
                rows[r as usize] = updated;
                for &nc in &created {
                    col_rows[nc as usize].push(r);
                }
            }
            row_alive[pr as usize] = false;
            col_alive[c] = false;
            units += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let live_rows: Vec<usize> = (0..rows.len())
        .filter(|&r| row_alive[r] && !rows[r].is_empty())
        .collect();
    let mut factors = vec![BigUint::one(); units];
    if !live_rows.is_empty() {
        let live_cols: Vec<u32> = (0..ncols as u32).filter(|&c| col_alive[c as usize]).collect();
        let col_index: HashMap<u32, usize> =
            live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut dense = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
        for (i, &r) in live_rows.iter().enumerate() {
            for (c, v) in &rows[r] {
                dense[i][col_index[c]] = v.to_bigint();
            }
        }
        factors.extend(dense_invariant_factors(dense));
    }
    Some(factors)
}

fn dense_invariant_factors(mut a: Vec<Vec<BigInt>>) -> Vec<BigUint> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_nonzero(&a, t..rows, t..cols) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    for j in t..cols {
                        let v = &a[t][j] * &q;
                        a[i][j] -= v;
                    }
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for row in a.iter_mut().skip(t) {
                        let v = &row[t] * &q;
                        row[j] -= v;
                    }
                    clean &= a[t][j].is_zero();
                }
            }
            if !clean {
                // a remainder smaller than the pivot survived; move it in
                let (mut bi, mut bj) = (t, t);
                let mut best: Option<BigInt> = None;
                for i in t + 1..rows {
                    if !a[i][t].is_zero() && best.as_ref().is_none_or(|b| a[i][t].abs() < *b) {
                        best = Some(a[i][t].abs());
                        (bi, bj) = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !a[t][j].is_zero() && best.as_ref().is_none_or(|b| a[t][j].abs() < *b) {
                        best = Some(a[t][j].abs());
                        (bi, bj) = (t, j);
                    }
                }
                a.swap(t, bi);
                for row in a.iter_mut() {
                    row.swap(t, bj);
                }
                continue;
            }
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match offender {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        out.push(a[t][t].magnitude().clone());
    }
    out
}

fn min_nonzero(
    a: &[Vec<BigInt>],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if a[i][j].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| a[i][j].magnitude() < a[bi][bj].magnitude()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// A free chain complex with integer boundary matrices.
///
/// Degrees run from `min_degree` upward; `boundaries[k]` maps degree
/// `min_degree + k + 1` to degree `min_degree + k`.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    min_degree: i64,
    ranks: Vec<usize>,
    boundaries: Vec<SparseMatrix>,
    labels: Vec<Vec<String>>,
}

impl ChainComplex {
    /// Validates shapes and `∂∘∂ = 0`.
    pub fn new(
        min_degree: i64,
        ranks: Vec<usize>,
        boundaries: Vec<SparseMatrix>,
        labels: Option<Vec<Vec<String>>>,
    ) -> Result<Self, HomologyError> {
        let labels = labels.unwrap_or_else(|| {
            ranks
                .iter()
                .map(|&r| (0..r).map(|i| format!("e{i}")).collect())
                .collect()
        });
        assert_eq!(labels.len(), ranks.len(), "one label list per degree");
        assert_eq!(
            boundaries.len(),
            ranks.len().saturating_sub(1),
            "one boundary per consecutive degree pair"
        );
        for (k, m) in boundaries.iter().enumerate() {
            let expected = (ranks[k], ranks[k + 1]);
            if (m.nrows(), m.ncols()) != expected {
                return Err(HomologyError::Shape {
                    degree: min_degree + k as i64 + 1,
                    expected,
                    found: (m.nrows(), m.ncols()),
                });
            }
        }
        let complex = ChainComplex {
            min_degree,
            ranks,
            boundaries,
            labels,
        };
        complex.check_square_zero()?;
        Ok(complex)
    }

    fn check_square_zero(&self) -> Result<(), HomologyError> {
        for k in 1..self.boundaries.len() {
            let (lower, upper) = (&self.boundaries[k - 1], &self.boundaries[k]);
            for c in 0..upper.ncols() {
                let image = lower.apply_to_column(upper, c);
                if !image.is_empty() {
                    let degree = self.min_degree + k as i64 + 1;
                    return Err(HomologyError::NonZeroSquare {
                        degree,
                        generator: self.labels[k + 1][c].clone(),
                        image: image
                            .into_iter()
                            .map(|(r, v)| (self.labels[k - 1][r].clone(), v))
                            .collect(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    pub fn degrees(&self) -> std::ops::Range<i64> {
        self.min_degree..self.min_degree + self.ranks.len() as i64
    }

    /// Number of generators in degree `q` (0 outside the support).
    pub fn rank(&self, q: i64) -> usize {
        self.index(q).map_or(0, |k| self.ranks[k])
    }

    pub fn generator_labels(&self, q: i64) -> &[String] {
        self.index(q).map_or(&[], |k| &self.labels[k])
    }

    /// The boundary out of degree `q`.
    pub fn boundary(&self, q: i64) -> Option<&SparseMatrix> {
        let k = self.index(q)?;
        k.checked_sub(1).map(|k| &self.boundaries[k])
    }

    fn index(&self, q: i64) -> Option<usize> {
        let k = q - self.min_degree;
        (k >= 0 && (k as usize) < self.ranks.len()).then_some(k as usize)
    }

    /// `Σ (−1)^q · rank C_q`.
    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|q| sign(q) * self.rank(q) as i64).sum()
    }

    /// Homology `ker ∂_q / im ∂_{q+1}` in every degree.
    pub fn homology(&self, reduced: bool) -> Result<HomologyResult, HomologyError> {
        let factors: Vec<Vec<BigUint>> = self
            .boundaries
            .par_iter()
            .map(SparseMatrix::invariant_factors)
            .collect();
        let mut result = HomologyResult::zero(reduced);
        for (k, &n) in self.ranks.iter().enumerate() {
            let out_rank = if k > 0 { factors[k - 1].len() } else { 0 };
            let (in_rank, torsion) = match factors.get(k) {
                Some(f) => (
                    f.len(),
                    f.iter().filter(|d| !d.is_one()).cloned().collect(),
                ),
                None => (0, Vec::new()),
            };
            let betti = n - out_rank - in_rank;
            result.set(self.min_degree + k as i64, betti, torsion);
        }
        let homology_euler = result.euler_characteristic();
        let chains = self.euler_characteristic();
        if homology_euler != chains {
            return Err(HomologyError::EulerMismatch {
                chains,
                homology: homology_euler,
            });
        }
        Ok(result)
    }
}

/// `chain_homology` under its operation name.
pub fn chain_homology(
    complex: &ChainComplex,
    reduced: bool,
) -> Result<HomologyResult, HomologyError> {
    complex.homology(reduced)
}

fn sign(q: i64) -> i64 {
    if q.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// One homology group `ℤ^betti ⊕ ⊕ ℤ/dᵢ`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Group {
    pub betti: usize,
    pub torsion: Vec<BigUint>,
}

impl Group {
    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Homology by degree. Only nonzero groups are stored; every other degree
/// is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyResult {
    pub reduced: bool,
    groups: BTreeMap<i64, Group>,
}

impl HomologyResult {
    pub fn zero(reduced: bool) -> Self {
        HomologyResult {
            reduced,
            groups: BTreeMap::new(),
        }
    }

    /// Sets the group in degree `q`; torsion is sorted into a divisibility
    /// chain order and ones are dropped.
    pub fn set(&mut self, q: i64, betti: usize, mut torsion: Vec<BigUint>) {
        torsion.retain(|d| !d.is_one());
        torsion.sort();
        let g = Group { betti, torsion };
        if g.is_zero() {
            self.groups.remove(&q);
        } else {
            self.groups.insert(q, g);
        }
    }

    pub fn betti(&self, q: i64) -> usize {
        self.groups.get(&q).map_or(0, |g| g.betti)
    }

    pub fn torsion(&self, q: i64) -> &[BigUint] {
        self.groups.get(&q).map_or(&[], |g| g.torsion.as_slice())
    }

    pub fn group(&self, q: i64) -> Group {
        self.groups.get(&q).cloned().unwrap_or_default()
    }

    /// Nonzero groups in increasing degree.
    pub fn groups(&self) -> impl Iterator<Item = (i64, &Group)> {
        self.groups.iter().map(|(&q, g)| (q, g))
    }

    pub fn is_trivial(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.groups.values().all(|g| g.torsion.is_empty())
    }

    /// `Some(d)` when the homology is exactly that of the sphere `S^d`
    /// (reduced convention: a single `ℤ` in degree `d`).
    pub fn sphere_dimension(&self) -> Option<i64> {
        let mut it = self.groups.iter();
        match (it.next(), it.next()) {
            (Some((&q, g)), None) if g.betti == 1 && g.torsion.is_empty() => Some(q),
            _ => None,
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.groups
            .iter()
            .map(|(&q, g)| sign(q) * g.betti as i64)
            .sum()
    }

    /// Moves every group up by `k` degrees.
    pub fn shifted(&self, k: i64) -> Self {
        HomologyResult {
            reduced: self.reduced,
            groups: self.groups.iter().map(|(&q, g)| (q + k, g.clone())).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        let groups: Vec<Value> = self
            .groups
            .iter()
            .map(|(q, g)| {
                json!({
                    "degree": q,
                    "betti": g.betti,
                    "torsion": g.torsion.iter().map(biguint_json).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "reduced": self.reduced, "groups": groups })
    }

    pub fn from_json(value: &Value) -> Option<Self> {
        let reduced = value.get("reduced")?.as_bool()?;
        let mut out = HomologyResult::zero(reduced);
        for g in value.get("groups")?.as_array()? {
            let q = g.get("degree")?.as_i64()?;
            let betti = g.get("betti")?.as_u64()? as usize;
            let torsion = g
                .get("torsion")?
                .as_array()?
                .iter()
                .map(|t| match t {
                    Value::Number(n) => n.as_u64().map(BigUint::from),
                    Value::String(s) => s.parse().ok(),
                    _ => None,
                })
                .collect::<Option<Vec<_>>>()?;
            out.set(q, betti, torsion);
        }
        Some(out)
    }

    /// CSV lines `degree,betti,torsion` with torsion factors separated by
    /// spaces; only nonzero degrees are listed.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,betti,torsion\n");
        for (q, g) in &self.groups {
            let t: Vec<String> = g.torsion.iter().map(|d| d.to_string()).collect();
            out.push_str(&format!("{q},{},{}\n", g.betti, t.join(" ")));
        }
        out
    }
}

fn biguint_json(d: &BigUint) -> Value {
    match d.to_u64() {
        Some(v) => json!(v),
        None => json!(d.to_string()),
    }
}

impl fmt::Display for HomologyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = if self.reduced { "H~" } else { "H" };
        if self.groups.is_empty() {
            return write!(f, "all {} homology vanishes", if self.reduced { "reduced" } else { "" });
        }
        let lines: Vec<String> = self
            .groups
            .iter()
            .map(|(q, g)| format!("{h}_{q} = {g}"))
            .collect();
        f.write_str(&lines.join("\n"))
    }
}

/// Shifts reduced homology up by `k`: the effect of a `k`-fold suspension.
pub fn suspension_shift(h: &HomologyResult, k: i64) -> HomologyResult {
    h.shifted(k)
}

/// A finite abstract simplicial complex. Faces are sorted vertex lists,
/// grouped by dimension and sorted lexicographically inside each group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    faces: Vec<Vec<Vec<u32>>>,
}

impl SimplicialComplex {
    pub fn empty(labels: Vec<String>) -> Self {
        SimplicialComplex {
            labels,
            faces: Vec::new(),
        }
    }

    /// Downward closure of the given facets. Empty facets are ignored.
    pub fn from_facets(
        labels: Vec<String>,
        facets: impl IntoIterator<Item = Vec<u32>>,
    ) -> Result<Self, HomologyError> {
        let mut all: HashSet<Vec<u32>> = HashSet::new();
        for mut facet in facets {
            facet.sort_unstable();
            facet.dedup();
            if facet.iter().any(|&v| v as usize >= labels.len()) {
                return Err(HomologyError::BadVertex(facet));
            }
            if facet.is_empty() || all.contains(&facet) {
                continue;
            }
            let k = facet.len();
            assert!(k < 32, "facet too large to enumerate");
            for mask in 1u32..(1u32 << k) {
                let face: Vec<u32> = (0..k)
                    .filter(|&i| mask & (1 << i) != 0)
                    .map(|i| facet[i])
                    .collect();
                all.insert(face);
            }
        }
        Ok(Self::group(labels, all.into_iter().collect()))
    }

    /// Faces already closed under nonempty subsets; closure is verified.
    pub fn from_closed_faces(
        labels: Vec<String>,
        faces: Vec<Vec<u32>>,
    ) -> Result<Self, HomologyError> {
        let mut faces = faces;
        for f in &mut faces {
            f.sort_unstable();
            f.dedup();
            if f.iter().any(|&v| v as usize >= labels.len()) {
                return Err(HomologyError::BadVertex(f.clone()));
            }
        }
        faces.retain(|f| !f.is_empty());
        faces.sort_unstable();
        faces.dedup();
        let complex = Self::group(labels, faces);
        complex.check_closed()?;
        Ok(complex)
    }

    fn group(labels: Vec<String>, faces: Vec<Vec<u32>>) -> Self {
        let mut by_dim: Vec<Vec<Vec<u32>>> = Vec::new();
        for f in faces {
            let d = f.len() - 1;
            if by_dim.len() <= d {
                by_dim.resize(d + 1, Vec::new());
            }
            by_dim[d].push(f);
        }
        for layer in &mut by_dim {
            layer.sort_unstable();
        }
        SimplicialComplex {
            labels,
            faces: by_dim,
        }
    }

    fn check_closed(&self) -> Result<(), HomologyError> {
        for d in 1..self.faces.len() {
            for f in &self.faces[d] {
                for i in 0..f.len() {
                    let mut sub = f.clone();
                    sub.remove(i);
                    if self.faces[d - 1].binary_search(&sub).is_err() {
                        return Err(HomologyError::NotClosed(f.clone(), sub));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.labels
    }

    /// Dimension of the largest face; `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.faces.len().checked_sub(1)
    }

    pub fn faces_of_dim(&self, d: usize) -> &[Vec<u32>] {
        self.faces.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn faces(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.faces.iter().flatten()
    }

    pub fn face_count(&self) -> usize {
        self.faces.iter().map(Vec::len).sum()
    }

    pub fn contains(&self, face: &[u32]) -> bool {
        face.len()
            .checked_sub(1)
            .and_then(|d| self.faces.get(d))
            .is_some_and(|layer| layer.binary_search_by(|f| f.as_slice().cmp(face)).is_ok())
    }

    /// Maximal faces, ordered by dimension then lexicographically.
    pub fn facets(&self) -> Vec<Vec<u32>> {
        let mut facets: Vec<Vec<u32>> = self
            .faces()
            .filter(|f| {
                !self
                    .faces
                    .get(f.len())
                    .is_some_and(|layer| layer.iter().any(|g| is_subset(f, g)))
            })
            .cloned()
            .collect();
        facets.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        facets
    }

    /// Unreduced Euler characteristic `Σ (−1)^d f_d`.
    pub fn euler_characteristic(&self) -> i64 {
        self.faces
            .iter()
            .enumerate()
            .map(|(d, layer)| sign(d as i64) * layer.len() as i64)
            .sum()
    }

    /// The augmented simplicial chain complex: the empty face sits in degree
    /// −1 and every vertex maps to it with coefficient 1. Boundary signs come
    /// from the sorted vertex order.
    pub fn chain_complex(&self) -> ChainComplex {
        let mut ranks = vec![1usize];
        let mut labels = vec![vec!["{}".to_string()]];
        let mut boundaries = Vec::new();
        if let Some(vertices) = self.faces.first() {
            boundaries.push(SparseMatrix::from_triplets(
                1,
                vertices.len(),
                (0..vertices.len()).map(|c| (0, c, 1)),
            ));
        }
        for (d, layer) in self.faces.iter().enumerate() {
            ranks.push(layer.len());
            labels.push(layer.iter().map(|f| self.face_label(f)).collect());
            if d == 0 {
                continue;
            }
            let below: HashMap<&[u32], usize> = self.faces[d - 1]
                .iter()
                .enumerate()
                .map(|(i, f)| (f.as_slice(), i))
                .collect();
            let mut triplets = Vec::with_capacity(layer.len() * (d + 1));
            let mut sub = Vec::with_capacity(d);
            for (c, f) in layer.iter().enumerate() {
                for i in 0..f.len() {
                    sub.clear();
                    sub.extend(f.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v));
                    let r = below[sub.as_slice()];
                    triplets.push((r, c, if i % 2 == 0 { 1 } else { -1 }));
                }
            }
            boundaries.push(SparseMatrix::from_triplets(
                self.faces[d - 1].len(),
                layer.len(),
                triplets,
            ));
        }
        ChainComplex::new(-1, ranks, boundaries, Some(labels))
            .expect("simplicial boundaries square to zero")
    }

    fn face_label(&self, f: &[u32]) -> String {
        let names: Vec<&str> = f.iter().map(|&v| self.labels[v as usize].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Reduced integral homology.
    pub fn homology(&self) -> HomologyResult {
        self.chain_complex()
            .homology(true)
            .expect("simplicial complexes satisfy Euler-Poincaré")
    }
}

fn is_subset(small: &[u32], big: &[u32]) -> bool {
    let mut j = 0;
    for &x in small {
        while j < big.len() && big[j] < x {
            j += 1;
        }
        if j == big.len() || big[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// `simplicial_homology` under its operation name.
pub fn simplicial_homology(complex: &SimplicialComplex) -> HomologyResult {
    complex.homology()
}

/// Convenience for tests and callers that only need magnitudes as `u64`.
pub fn factors_u64(factors: &[BigUint]) -> Vec<u64> {
    factors
        .iter()
        .map(|d| d.to_u64().expect("factor fits in u64"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn smith_examples() {
        assert_eq!(factors_u64(&smith_normal_form(&big(&[&[1, 0], &[0, 2]]))), vec![1, 2]);
        assert_eq!(factors_u64(&smith_normal_form(&big(&[&[2, 4], &[6, 8]]))), vec![2, 4]);
        assert!(smith_normal_form(&big(&[&[0, 0], &[0, 0]])).is_empty());
    }

    #[test]
    fn sparse_and_dense_agree() {
        let m = SparseMatrix::from_triplets(3, 3, [(0, 0, 2), (0, 1, 4), (1, 0, 6), (1, 1, 8), (2, 2, 1)]);
        assert_eq!(factors_u64(&m.invariant_factors()), vec![1, 2, 4]);
        assert_eq!(m.invariant_factors(), smith_normal_form(&m.to_dense()));
    }

    #[test]
    fn sparse_overflow_falls_back_to_big_integers() {
        let huge = i64::MAX / 2;
        let m = SparseMatrix::from_triplets(
            2,
            2,
            [(0, 0, 1), (0, 1, huge), (1, 0, -huge), (1, 1, 3)],
        );
        let expect = smith_normal_form(&m.to_dense());
        assert_eq!(m.invariant_factors(), expect);
    }

    #[test]
    fn triangle_boundary_is_a_circle() {
        let k = SimplicialComplex::from_facets(labels(3), [vec![0, 1], vec![0, 2], vec![1, 2]])
            .unwrap();
        let h = k.homology();
        assert_eq!(h.betti(1), 1);
        assert_eq!(h.betti(0), 0);
        assert_eq!(h.sphere_dimension(), Some(1));
    }

    #[test]
    fn single_generator_without_boundary() {
        let c = ChainComplex::new(1, vec![1], vec![], None).unwrap();
        let h = c.homology(true).unwrap();
        assert_eq!(h.betti(1), 1);
        assert_eq!(h.groups().count(), 1);
    }

    #[test]
    fn multiplication_by_two_gives_torsion() {
        let d = SparseMatrix::from_triplets(1, 1, [(0, 0, 2)]);
        let c = ChainComplex::new(0, vec![1, 1], vec![d], None).unwrap();
        let h = c.homology(true).unwrap();
        assert_eq!(h.betti(0), 0);
        assert_eq!(factors_u64(h.torsion(0)), vec![2]);
        assert_eq!(h.betti(1), 0);
    }

    #[test]
    fn nonzero_square_is_rejected() {
        let d1 = SparseMatrix::from_triplets(1, 1, [(0, 0, 1)]);
        let d2 = SparseMatrix::from_triplets(1, 1, [(0, 0, 1)]);
        let err = ChainComplex::new(0, vec![1, 1, 1], vec![d1, d2], None).unwrap_err();
        assert!(matches!(err, HomologyError::NonZeroSquare { degree: 2, .. }));
    }

    #[test]
    fn empty_point_and_two_points() {
        let empty = SimplicialComplex::empty(vec![]);
        let h = empty.homology();
        assert_eq!(h.betti(-1), 1);
        assert_eq!(h.groups().count(), 1);
        let point = SimplicialComplex::from_facets(labels(1), [vec![0]]).unwrap();
        assert!(point.homology().is_trivial());
        let s0 = SimplicialComplex::from_facets(labels(2), [vec![0], vec![1]]).unwrap();
        assert_eq!(s0.homology().sphere_dimension(), Some(0));
    }

    #[test]
    fn octahedron_is_a_two_sphere() {
        // vertices ±e1 = 0,1; ±e2 = 2,3; ±e3 = 4,5
        let mut facets = Vec::new();
        for a in [0, 1] {
            for b in [2, 3] {
                for c in [4, 5] {
                    facets.push(vec![a, b, c]);
                }
            }
        }
        let k = SimplicialComplex::from_facets(labels(6), facets).unwrap();
        assert_eq!(k.faces_of_dim(2).len(), 8);
        assert_eq!(k.faces_of_dim(1).len(), 12);
        assert_eq!(k.homology().sphere_dimension(), Some(2));
    }

    #[test]
    fn simplex_boundaries_are_spheres() {
        for k in 1..=6u32 {
            let verts = k + 1;
            let facets = (0..verts).map(|skip| (0..verts).filter(|&v| v != skip).collect());
            let c = SimplicialComplex::from_facets(labels(verts as usize), facets).unwrap();
            assert_eq!(c.homology().sphere_dimension(), Some(k as i64 - 1), "k = {k}");
        }
    }

    #[test]
    fn suspension_shift_examples() {
        let empty = SimplicialComplex::empty(vec![]).homology();
        assert_eq!(suspension_shift(&empty, 2).sphere_dimension(), Some(1));
        let s0 = SimplicialComplex::from_facets(labels(2), [vec![0], vec![1]]).unwrap();
        assert_eq!(suspension_shift(&s0.homology(), 2).sphere_dimension(), Some(2));
        let mut t = HomologyResult::zero(true);
        t.set(1, 0, vec![BigUint::from(2u32)]);
        let s = suspension_shift(&t, 2);
        assert_eq!(factors_u64(s.torsion(3)), vec![2]);
        assert!(s.torsion(1).is_empty());
    }

    #[test]
    fn closed_faces_are_verified() {
        let err = SimplicialComplex::from_closed_faces(labels(2), vec![vec![0, 1], vec![0]])
            .unwrap_err();
        assert!(matches!(err, HomologyError::NotClosed(..)));
    }

    #[test]
    fn homology_json_round_trip() {
        let mut h = HomologyResult::zero(true);
        h.set(3, 1, vec![]);
        h.set(4, 2, vec![BigUint::from(6u32), BigUint::from(2u32)]);
        let v = h.to_json();
        assert_eq!(v["groups"][0], json!({"degree": 3, "betti": 1, "torsion": []}));
        assert_eq!(HomologyResult::from_json(&v), Some(h));
    }

    #[test]
    fn facets_of_a_triangle_with_tail() {
        let k = SimplicialComplex::from_facets(labels(4), [vec![0, 1, 2], vec![2, 3]]).unwrap();
        assert_eq!(k.facets(), vec![vec![2, 3], vec![0, 1, 2]]);
    }
}
