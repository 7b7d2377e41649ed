//! The face poset `L_t` of the permutahedron and its quotients by Young
//! subgroups.
//!
//! Proper faces of the permutahedron `P_t` are ordered set partitions
//! `B₁|…|B_s` of `[t]` with `s ≥ 2`; vertices are the `t!` linear orders and
//! a face lies below another when the latter is obtained by merging
//! neighbouring blocks. Fix a number-partition `λ` with parts `a₁ ≤ ⋯ ≤ a_t`
//! placed at positions `1..t`. The Young subgroup `H` permutes positions
//! carrying equal values, and the block-sum map
//!
//! ```text
//! B₁|…|B_s  ↦  (Σ_{i∈B₁} aᵢ, …, Σ_{i∈B_s} aᵢ)
//! ```
//!
//! is constant on `H`-orbits. When `λ` is free of resonances it identifies
//! `L_t/H` with `C_λ`.

use std::collections::HashMap;
use std::fmt;

use crate::compositions::{c_lambda_poset, Composition, CompositionError, NumberPartition};
use crate::homology::HomologyResult;
use crate::poset::{quotient_poset, GroupAction, Poset, PosetError, Quotient};
use crate::resonance::{primitive_identities, Identity};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PermutahedronError {
    #[error("the permutahedron face poset needs t ≥ 2, got {0}")]
    TooSmall(usize),
    #[error("reference composition {0} is not of type {1}")]
    WrongType(String, String),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Composition(#[from] CompositionError),
}

/// An ordered sequence of disjoint nonempty blocks covering `[t]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderedSetPartition {
    blocks: Vec<Vec<u32>>,
}

impl OrderedSetPartition {
    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Relabels ground elements by `perm` (`perm[i−1]` is the image of `i`).
    pub fn relabel(&self, perm: &[u32]) -> OrderedSetPartition {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let mut nb: Vec<u32> = b.iter().map(|&x| perm[(x - 1) as usize]).collect();
                nb.sort_unstable();
                nb
            })
            .collect();
        OrderedSetPartition { blocks }
    }

    /// Merges blocks `i` and `i+1` (0-based).
    pub fn merge_at(&self, i: usize) -> OrderedSetPartition {
        let mut blocks = self.blocks.clone();
        let right = blocks.remove(i + 1);
        blocks[i].extend(right);
        blocks[i].sort_unstable();
        OrderedSetPartition { blocks }
    }

    /// Block sums against the values `parts[0..t]`.
    pub fn block_sums(&self, parts: &[u32]) -> Composition {
        Composition::new(
            self.blocks
                .iter()
                .map(|b| b.iter().map(|&i| parts[(i - 1) as usize]).sum())
                .collect(),
        )
        .expect("block sums are positive")
    }
}

impl fmt::Display for OrderedSetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let v: Vec<String> = b.iter().map(u32::to_string).collect();
                format!("{{{}}}", v.join(","))
            })
            .collect();
        f.write_str(&blocks.join("|"))
    }
}

/// `L_t` with its elements.
#[derive(Debug, Clone)]
pub struct FacePoset {
    pub t: usize,
    pub faces: Vec<OrderedSetPartition>,
    pub poset: Poset,
    index: HashMap<OrderedSetPartition, usize>,
}

impl FacePoset {
    pub fn index_of(&self, face: &OrderedSetPartition) -> Option<usize> {
        self.index.get(face).copied()
    }

    /// Induced action of a permutation of `[t]` on face indices.
    pub fn induced_permutation(&self, perm: &[u32]) -> Vec<usize> {
        self.faces
            .iter()
            .map(|f| self.index[&f.relabel(perm)])
            .collect()
    }
}

fn ordered_set_partitions(t: usize) -> Vec<OrderedSetPartition> {
    // surjections [t] → [s] for s = t down to 2
    let mut out = Vec::new();
    for s in (2..=t).rev() {
        let mut assign = vec![0usize; t];
        loop {
            let mut blocks = vec![Vec::new(); s];
            for (i, &b) in assign.iter().enumerate() {
                blocks[b].push(i as u32 + 1);
            }
            if blocks.iter().all(|b| !b.is_empty()) {
                out.push(OrderedSetPartition { blocks });
            }
            let mut k = 0;
            while k < t {
                assign[k] += 1;
                if assign[k] < s {
                    break;
                }
                assign[k] = 0;
                k += 1;
            }
            if k == t {
                break;
            }
        }
    }
    out.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    out
}

/// Proper faces of `P_t` ordered by merging neighbouring blocks; vertices
/// come first.
pub fn permutahedron_face_poset(t: usize) -> Result<FacePoset, PermutahedronError> {
    if t < 2 {
        return Err(PermutahedronError::TooSmall(t));
    }
    let faces = ordered_set_partitions(t);
    let index: HashMap<OrderedSetPartition, usize> =
        faces.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
    let mut covers = Vec::new();
    for (i, f) in faces.iter().enumerate() {
        if f.len() > 2 {
            for k in 0..f.len() - 1 {
                covers.push((i, index[&f.merge_at(k)]));
            }
        }
    }
    let labels = faces.iter().map(|f| f.to_string()).collect();
    let poset = Poset::from_covers(labels, covers)?;
    Ok(FacePoset {
        t,
        faces,
        poset,
        index,
    })
}

/// Transpositions of adjacent positions carrying equal values in
/// `reference`, as permutations of `[t]`.
pub fn young_subgroup_generators(reference: &[u32]) -> Vec<Vec<u32>> {
    let t = reference.len();
    let mut gens = Vec::new();
    for i in 0..t {
        for j in i + 1..t {
            if reference[i] == reference[j] && reference[i + 1..j].iter().all(|&v| v != reference[i]) {
                let mut perm: Vec<u32> = (1..=t as u32).collect();
                perm.swap(i, j);
                gens.push(perm);
            }
        }
    }
    gens
}

/// The Young subgroup of `λ` acting on `L_t`, positions carrying the sorted
/// parts.
pub fn young_subgroup_action(
    lambda: &NumberPartition,
    faces: &FacePoset,
) -> GroupAction {
    action_for(lambda.parts(), faces)
}

fn action_for(reference: &[u32], faces: &FacePoset) -> GroupAction {
    GroupAction {
        generators: young_subgroup_generators(reference)
            .iter()
            .map(|p| faces.induced_permutation(p))
            .collect(),
    }
}

/// Result of comparing `L_t/H` with `C_λ` through the block-sum map.
#[derive(Debug, Clone)]
pub struct QuotientReport {
    pub lambda: NumberPartition,
    pub reference: Composition,
    pub identities: Vec<Identity>,
    pub orbit_count: usize,
    pub c_lambda_size: usize,
    /// The block-sum map is an order isomorphism `L_t/H → C_λ`.
    pub isomorphism: bool,
    /// Two distinct orbits with the same block sums, if any.
    pub collision: Option<(String, String, Composition)>,
    /// Reduced homology of the order complex of `L_t/H`.
    pub homology: HomologyResult,
}

impl QuotientReport {
    pub fn free(&self) -> bool {
        self.identities.is_empty()
    }

    /// Predicted homology of the quotient when `λ` is free: a `(t−2)`-sphere
    /// for distinct parts, zero otherwise.
    pub fn homology_as_predicted(&self) -> bool {
        let t = self.reference.len() as i64;
        if self.lambda.has_repeated_part() {
            self.homology.is_trivial()
        } else {
            self.homology.sphere_dimension() == Some(t - 2)
        }
    }

    /// Free: isomorphism and predicted homology. Not free: an explicit
    /// collision witness.
    pub fn passed(&self) -> bool {
        if self.free() {
            self.isomorphism && self.homology_as_predicted()
        } else {
            self.collision.is_some()
        }
    }
}

/// Quotient of `L_t` by the Young subgroup of `λ`, with parts placed in
/// ascending order.
pub fn verify_permutahedron_quotient(
    lambda: &NumberPartition,
) -> Result<QuotientReport, PermutahedronError> {
    verify_permutahedron_quotient_with(&lambda.sorted_composition())
}

/// As [`verify_permutahedron_quotient`] with an arbitrary placement of the
/// parts at positions `1..t`.
pub fn verify_permutahedron_quotient_with(
    reference: &Composition,
) -> Result<QuotientReport, PermutahedronError> {
    let lambda = reference.number_partition();
    let parts = reference.parts();
    let faces = permutahedron_face_poset(parts.len())?;
    let action = action_for(parts, &faces);
    let Quotient { poset, orbits, .. } = quotient_poset(&faces.poset, &action)?;
    let c = c_lambda_poset(&lambda)?;
    let mut image: Vec<Option<usize>> = Vec::with_capacity(orbits.len());
    let mut first_with: HashMap<Composition, usize> = HashMap::new();
    let mut collision = None;
    for (k, orbit) in orbits.iter().enumerate() {
        let comp = faces.faces[orbit[0]].block_sums(parts);
        if collision.is_none() {
            if let Some(&other) = first_with.get(&comp) {
                collision = Some((
                    faces.faces[orbits[other][0]].to_string(),
                    faces.faces[orbit[0]].to_string(),
                    comp.clone(),
                ));
            } else {
                first_with.insert(comp.clone(), k);
            }
        }
        image.push(c.index_of(&comp.merged_set()?));
    }
    let isomorphism = collision.is_none()
        && orbits.len() == c.poset.len()
        && image.iter().all(Option::is_some)
        && {
            let map: Vec<usize> = image.iter().map(|m| m.unwrap()).collect();
            poset.is_isomorphism(&c.poset, &map)
        };
    Ok(QuotientReport {
        identities: primitive_identities(parts),
        lambda,
        reference: reference.clone(),
        orbit_count: orbits.len(),
        c_lambda_size: c.poset.len(),
        isomorphism,
        collision,
        homology: poset.order_complex().homology(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::are_isomorphic;

    fn part(s: &str) -> NumberPartition {
        s.parse().unwrap()
    }

    #[test]
    fn face_counts() {
        let l2 = permutahedron_face_poset(2).unwrap();
        assert_eq!(l2.poset.len(), 2);
        assert!(l2.poset.covers().is_empty());
        let l3 = permutahedron_face_poset(3).unwrap();
        assert_eq!(l3.poset.rank_sizes(), vec![6, 6]);
        assert_eq!(l3.poset.order_complex().homology().sphere_dimension(), Some(1));
        assert_eq!(permutahedron_face_poset(4).unwrap().poset.len(), 74);
        assert!(permutahedron_face_poset(1).is_err());
    }

    #[test]
    fn young_generators() {
        assert!(young_subgroup_generators(&[1, 2, 4]).is_empty());
        assert_eq!(young_subgroup_generators(&[2, 2]), vec![vec![2, 1]]);
        assert_eq!(young_subgroup_generators(&[1, 1, 3]), vec![vec![2, 1, 3]]);
    }

    #[test]
    fn distinct_parts_give_the_hexagon() {
        let r = verify_permutahedron_quotient(&part("1,2,4")).unwrap();
        assert!(r.passed());
        assert_eq!(r.orbit_count, 12);
        assert_eq!(r.homology.sphere_dimension(), Some(1));
        let l3 = permutahedron_face_poset(3).unwrap();
        let c = c_lambda_poset(&part("1,2,4")).unwrap();
        assert!(are_isomorphic(&l3.poset, &c.poset).is_some());
    }

    #[test]
    fn equal_parts_collapse_to_a_point() {
        let r = verify_permutahedron_quotient(&part("2,2")).unwrap();
        assert!(r.passed());
        assert_eq!(r.orbit_count, 1);
        assert!(r.homology.is_trivial());
    }

    #[test]
    fn resonance_gives_a_collision() {
        let r = verify_permutahedron_quotient(&part("1,2,3")).unwrap();
        assert!(!r.free());
        assert!(!r.isomorphism);
        let (_, _, comp) = r.collision.clone().unwrap();
        assert_eq!(comp.to_string(), "(3,3)");
        assert!(r.passed());
    }

    #[test]
    fn placement_of_parts_is_immaterial() {
        let a = verify_permutahedron_quotient_with(&"4,1,2".parse().unwrap()).unwrap();
        let b = verify_permutahedron_quotient(&part("1,2,4")).unwrap();
        assert!(a.isomorphism && b.isomorphism);
        assert_eq!(a.homology, b.homology);
    }
}
