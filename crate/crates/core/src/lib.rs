//! Exact computations on the stratification of real monic polynomials by
//! the multiplicities of their real roots.
//!
//! - [`compositions`]: compositions, merged sets, `C_λ` and `δ_λ`.
//! - [`poset`]: finite posets, order complexes, quotients and isomorphism.
//! - [`homology`]: sparse chain complexes and integral homology.
//! - [`strata`]: stratum cells, boundaries, closures and complements.
//! - [`hyperbolic`]: three backends for hyperbolic strata.
//! - [`permutahedron`] and [`resonance`]: face posets of `P_t` and their
//!   quotients.
//! - [`iterated`]: iterated compositions and configurations in `R^d`.
//! - [`polyspace`]: polynomials, affine normalization and cells.
//! - [`verify`]: the verification suites behind `polystrata verify`.
//!
//! ```
//! use polystrata::compositions::NumberPartition;
//! use polystrata::hyperbolic::cross_check;
//!
//! let lambda = NumberPartition::new(vec![1, 1, 2]).unwrap();
//! let h = cross_check(&lambda, None).unwrap();
//! assert_eq!(h.homology().sphere_dimension(), Some(3));
//! ```

pub mod compositions;
pub mod homology;
pub mod poset;
pub mod strata;
pub mod permutahedron;
pub mod resonance;
pub mod hyperbolic;
pub mod iterated;
pub mod polyspace;
pub mod verify;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/compositions.md")]
    mod compositions {}
    #[doc = include_str!("../../../book/src/posets.md")]
    mod posets {}
    #[doc = include_str!("../../../book/src/homology.md")]
    mod homology {}
    #[doc = include_str!("../../../book/src/strata.md")]
    mod strata {}
    #[doc = include_str!("../../../book/src/hyperbolic.md")]
    mod hyperbolic {}
    #[doc = include_str!("../../../book/src/permutahedra.md")]
    mod permutahedra {}
    #[doc = include_str!("../../../book/src/iterated.md")]
    mod iterated {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
