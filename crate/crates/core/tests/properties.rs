use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use polystrata::compositions::{
    c_lambda_poset, composition_from_merged_set, delta_lambda_complex, merged_set, partitions_of,
    Composition, MergedSet, NumberPartition,
};
use polystrata::homology::smith_normal_form;
use polystrata::iterated::iterated_poset;
use polystrata::permutahedron::{permutahedron_face_poset, young_subgroup_action};
use polystrata::poset::{quotient_poset, Poset};
use polystrata::polyspace::{affine_normalize, cell_of, stabilize, FactoredPolynomial, MonicPolynomial};
use polystrata::resonance::is_free_of_resonances;
use polystrata::strata::StratumCell;

fn composition_strategy(max_n: u32) -> impl Strategy<Value = Composition> {
    (1..=max_n).prop_flat_map(|n| {
        (Just(n), 0u64..(1u64 << (n - 1)))
            .prop_map(|(n, mask)| MergedSet::from_mask(n, mask).unwrap().composition())
    })
}

fn partition_strategy(max_n: u32) -> impl Strategy<Value = NumberPartition> {
    (1..=max_n).prop_flat_map(|n| {
        let all = partitions_of(n);
        (0..all.len()).prop_map(move |i| all[i].clone())
    })
}

fn det(m: &[Vec<i64>]) -> i128 {
    let k = m.len();
    if k == 0 {
        return 1;
    }
    (0..k)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] as i128 * det(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Determinantal divisors: gcd of all `k × k` minors.
fn determinantal_divisors(m: &[Vec<i64>]) -> Vec<i128> {
    let (r, c) = (m.len(), m[0].len());
    let mut out = Vec::new();
    for k in 1..=r.min(c) {
        let mut g: i128 = 0;
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let minor: Vec<Vec<i64>> =
                    rows.iter().map(|&i| cols.iter().map(|&j| m[i][j]).collect()).collect();
                g = g.gcd(&det(&minor));
            }
        }
        if g == 0 {
            break;
        }
        out.push(g);
    }
    out
}

/// Disjoint index sets of equal sum sharing no value.
fn brute_free(parts: &[u32]) -> bool {
    let t = parts.len();
    let sum = |m: u32| -> u32 { (0..t).filter(|i| m >> i & 1 == 1).map(|i| parts[i]).sum() };
    for a in 1..(1u32 << t) {
        for b in (a + 1)..(1u32 << t) {
            if a & b != 0 || sum(a) != sum(b) {
                continue;
            }
            let shared = (0..t).any(|i| {
                a >> i & 1 == 1 && (0..t).any(|j| b >> j & 1 == 1 && parts[i] == parts[j])
            });
            if !shared {
                return false;
            }
        }
    }
    true
}

/// `μ(0̂, 1̂)` of the poset with a bottom and a top adjoined.
fn mobius_bottom_to_top(p: &Poset) -> i64 {
    let order = p.topological_order();
    let mut mu = vec![0i64; p.len()];
    for &x in &order {
        // μ(0̂, x) = −(1 + Σ_{y < x} μ(0̂, y))
        mu[x] = -1 - (0..p.len()).filter(|&y| p.lt(y, x)).map(|y| mu[y]).sum::<i64>();
    }
    -1 - mu.iter().sum::<i64>()
}

fn stirling2(n: usize, k: usize) -> u64 {
    let mut s = vec![vec![0u64; k + 1]; n + 1];
    s[0][0] = 1;
    for i in 1..=n {
        for j in 1..=k.min(i) {
            s[i][j] = j as u64 * s[i - 1][j] + s[i - 1][j - 1];
        }
    }
    s[n][k]
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn invariant_factors_match_determinantal_divisors(
        m in (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-6i64..=6, c), r)
        })
    ) {
        let big: Vec<Vec<BigInt>> = m.iter().map(|row| row.iter().map(|&v| BigInt::from(v)).collect()).collect();
        let factors = smith_normal_form(&big);
        let divisors = determinantal_divisors(&m);
        prop_assert_eq!(factors.len(), divisors.len());
        let mut product = BigUint::from(1u32);
        for (f, d) in factors.iter().zip(&divisors) {
            product *= f;
            prop_assert_eq!(product.clone(), BigUint::from(d.unsigned_abs()));
        }
        for w in factors.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn merged_set_round_trip(c in composition_strategy(12)) {
        let a = merged_set(&c).unwrap();
        prop_assert_eq!(composition_from_merged_set(&a), c.clone());
        let sums: BTreeSet<u32> = c.partial_sums().into_iter().collect();
        for i in 1..c.weight() {
            prop_assert_eq!(a.contains(i), !sums.contains(&i));
        }
    }

    #[test]
    fn coarsening_is_merged_set_inclusion(
        (a, b) in (1u32..=8).prop_flat_map(|n| {
            let m = 1u64 << (n - 1);
            (0..m, 0..m).prop_map(move |(x, y)| {
                (MergedSet::from_mask(n, x).unwrap(), MergedSet::from_mask(n, y).unwrap())
            })
        })
    ) {
        let (ca, cb) = (a.composition(), b.composition());
        let sums_a: BTreeSet<u32> = ca.partial_sums().into_iter().collect();
        let sums_b: BTreeSet<u32> = cb.partial_sums().into_iter().collect();
        prop_assert_eq!(ca.is_coarsening_of(&cb), sums_a.is_subset(&sums_b));
        prop_assert_eq!(ca.is_coarsening_of(&cb), b.is_subset(&a));
    }

    #[test]
    fn label_by_join_recovers_the_face_composition(lambda in partition_strategy(7)) {
        prop_assume!(lambda.weight() >= 2);
        let delta = delta_lambda_complex(&lambda).unwrap();
        for face in delta.complex.faces() {
            let c = delta.face_composition(face);
            let sums: Vec<u32> = face.iter().map(|v| v + 1).collect();
            prop_assert_eq!(c.partial_sums(), sums);
            prop_assert_eq!(delta.label_by_join(face).to_composition(), Some(c));
        }
    }

    #[test]
    fn every_element_of_c_lambda_is_the_join_of_atoms_below(lambda in partition_strategy(9)) {
        let c = c_lambda_poset(&lambda).unwrap();
        let atoms: Vec<u64> = polystrata::compositions::compositions_of_type(&lambda)
            .iter()
            .map(|x| merged_set(x).unwrap().mask())
            .collect();
        for m in &c.merged {
            let below = atoms.iter().filter(|&&a| a & !m.mask() == 0).fold(0, |acc, a| acc | a);
            prop_assert_eq!(below, m.mask());
        }
    }

    #[test]
    fn resonance_freedom_matches_subset_search(
        parts in proptest::collection::vec(1u32..=12, 1..=6),
        scale in 1u32..=5,
    ) {
        let mut parts = parts;
        parts.sort_unstable();
        prop_assert_eq!(is_free_of_resonances(&parts), brute_free(&parts));
        let scaled: Vec<u32> = parts.iter().map(|p| p * scale).collect();
        prop_assert_eq!(is_free_of_resonances(&scaled), is_free_of_resonances(&parts));
    }

    #[test]
    fn order_complex_euler_characteristic_is_the_mobius_value(lambda in partition_strategy(7)) {
        let c = c_lambda_poset(&lambda).unwrap();
        let h = c.poset.order_complex().homology();
        prop_assert_eq!(h.euler_characteristic(), mobius_bottom_to_top(&c.poset));
    }

    #[test]
    fn iterated_cells_partition_sorted_configurations(
        (n, d, pts) in (2u32..=5, 1usize..=3).prop_flat_map(|(n, d)| {
            (Just(n), Just(d), proptest::collection::vec(proptest::collection::vec(-2i64..=2, d), n as usize))
        })
    ) {
        let mut pts = pts;
        pts.sort();
        let points: Vec<Vec<BigRational>> = pts
            .iter()
            .map(|p| p.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
            .collect();
        let poset = iterated_poset(n, d).unwrap();
        let hits = poset.elements.iter().filter(|e| e.contains(&points).unwrap()).count();
        prop_assert_eq!(hits, 1);
    }

    #[test]
    fn normalization_is_idempotent_and_orbit_invariant(
        coeffs in proptest::collection::vec(-3.0f64..3.0, 2..=5),
        rho in 0.5f64..2.0,
        gamma in -2.0f64..2.0,
    ) {
        let f = MonicPolynomial::new(coeffs).unwrap();
        let Ok(nf) = affine_normalize(&f) else { return Ok(()) };
        let again = affine_normalize(&nf.g).unwrap();
        prop_assert!(again.g.distance(&nf.g) < 1e-8, "{} vs {}", again.g, nf.g);
        prop_assert!((again.rho - 1.0).abs() < 1e-8 && again.gamma.abs() < 1e-8);
        let moved = affine_normalize(&f.act(rho, gamma)).unwrap();
        prop_assert!(moved.g.distance(&nf.g) < 1e-7, "{} vs {}", moved.g, nf.g);
    }

    #[test]
    fn stabilizing_keeps_the_root_composition(
        roots in proptest::collection::btree_map(-5i64..=5, 1u32..=3, 1..=4),
        extra in 0u32..=3,
    ) {
        let roots: Vec<(BigRational, u32)> = roots
            .into_iter()
            .map(|(r, m)| (BigRational::from_integer(BigInt::from(r)), m))
            .collect();
        let f = FactoredPolynomial::new(roots, vec![]).unwrap();
        let cell = cell_of(&f).unwrap();
        let m = f.degree() + 2 * extra;
        let g = stabilize(&f, m).unwrap();
        prop_assert_eq!(cell_of(&g).unwrap(), StratumCell::new(cell.composition().clone(), m).unwrap());
    }
}

#[test]
fn c_lambda_of_the_near_hook_is_the_proper_part_of_the_boolean_lattice() {
    for n in 3..=8u32 {
        let mut parts = vec![1; n as usize - 2];
        parts.push(2);
        let c = c_lambda_poset(&NumberPartition::new(parts).unwrap()).unwrap();
        let full = (1u64 << (n - 1)) - 1;
        let masks: BTreeSet<u64> = c.merged.iter().map(|m| m.mask()).collect();
        let expected: BTreeSet<u64> = (1..full).collect();
        assert_eq!(masks, expected, "n = {n}");
        for i in 0..c.poset.len() {
            for j in 0..c.poset.len() {
                let inclusion = i != j && c.merged[i].is_subset(&c.merged[j]);
                assert_eq!(c.poset.lt(i, j), inclusion);
            }
        }
    }
}

#[test]
fn permutahedron_ranks_count_ordered_set_partitions() {
    for t in 2..=6usize {
        let l = permutahedron_face_poset(t).unwrap();
        let mut by_blocks = vec![0u64; t + 1];
        for f in &l.faces {
            by_blocks[f.len()] += 1;
        }
        for s in 2..=t {
            assert_eq!(by_blocks[s], factorial(s as u64) * stirling2(t, s), "t = {t}, s = {s}");
        }
        let ones = NumberPartition::new(vec![1; t]).unwrap();
        let q = quotient_poset(&l.poset, &young_subgroup_action(&ones, &l)).unwrap();
        let mut orbit_sizes = vec![0u64; t + 1];
        for orbit in &q.orbits {
            orbit_sizes[l.faces[orbit[0]].len()] += 1;
        }
        for s in 2..=t {
            assert_eq!(orbit_sizes[s], binomial(t as u64 - 1, s as u64 - 1), "t = {t}, s = {s}");
        }
    }
}

#[test]
fn iterated_covers_drop_dimension_by_one() {
    for n in 2..=6u32 {
        for d in 1..=3usize {
            let p = iterated_poset(n, d).unwrap();
            for e in &p.elements {
                let blocks: u32 = e.levels().iter().map(|a| n - a.len() as u32).sum();
                assert_eq!(e.cell_dimension(), blocks);
            }
            for &(lo, hi) in p.poset.covers() {
                assert_eq!(p.elements[lo].cell_dimension(), p.elements[hi].cell_dimension() + 1);
            }
        }
    }
}
