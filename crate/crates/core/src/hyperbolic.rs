//! Homology of compactified hyperbolic strata, three ways.
//!
//! For `λ ⊢ n` the one-point compactification of the closure of the stratum
//! of hyperbolic polynomials of type `λ` can be computed
//!
//! * from its cells ([`Backend::Cells`]),
//! * as the double suspension of the order complex `Δ(C_λ)`
//!   ([`Backend::OrderComplex`]),
//! * as the double suspension of `δ_λ` ([`Backend::Delta`]).
//!
//! The three must agree. Closed-form answers are known for hook partitions
//! and for partitions free of resonances; both are exposed as predictions
//! to test against.

use std::fmt;
use std::str::FromStr;

use crate::compositions::{c_lambda_poset, delta_lambda_complex, CompositionError, NumberPartition};
use crate::homology::{suspension_shift, HomologyResult, SimplicialComplex};
use crate::resonance::{primitive_identities, Identity};
use crate::strata::{pol_homology, StrataError};

/// Order complexes with more chains than this are skipped by
/// [`cross_check`].
pub const DEFAULT_CHAIN_BUDGET: u128 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HyperbolicError {
    #[error("backends disagree for {lambda}:\n{tables}")]
    Disagreement { lambda: String, tables: String },
    #[error("hook (1^(n-k),k) needs 2 ≤ k ≤ n, got n = {n}, k = {k}")]
    Hook { n: u32, k: u32 },
    #[error("the empty partition has no hyperbolic stratum")]
    Empty,
    #[error("unknown backend {0:?} (expected cells, order-complex or delta)")]
    UnknownBackend(String),
    #[error(transparent)]
    Strata(#[from] StrataError),
    #[error(transparent)]
    Composition(#[from] CompositionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Backend {
    Cells,
    OrderComplex,
    Delta,
}

impl Backend {
    pub const ALL: [Backend; 3] = [Backend::Cells, Backend::OrderComplex, Backend::Delta];

    pub fn name(self) -> &'static str {
        match self {
            Backend::Cells => "cells",
            Backend::OrderComplex => "order-complex",
            Backend::Delta => "delta",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = HyperbolicError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Backend::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| HyperbolicError::UnknownBackend(s.to_string()))
    }
}

/// Reduced homology of the compactified closure of the stratum of type `λ`
/// in degree `n = Σλ`, computed by one backend.
pub fn hyp_homology(lambda: &NumberPartition, backend: Backend) -> Result<HomologyResult, HyperbolicError> {
    if lambda.is_empty() {
        return Err(HyperbolicError::Empty);
    }
    Ok(match backend {
        Backend::Cells => pol_homology(lambda, lambda.weight())?,
        Backend::OrderComplex => {
            let c = c_lambda_poset(lambda)?;
            suspension_shift(&c.poset.order_complex().homology(), 2)
        }
        // n = 1 has no partial sums at all, so δ is empty
        Backend::Delta if lambda.weight() == 1 => {
            suspension_shift(&SimplicialComplex::empty(Vec::new()).homology(), 2)
        }
        Backend::Delta => {
            let d = delta_lambda_complex(lambda)?;
            suspension_shift(&d.complex.homology(), 2)
        }
    })
}

/// Size of `Δ(C_λ)` measured in chains (faces of the order complex).
pub fn order_complex_size(lambda: &NumberPartition) -> Result<u128, HyperbolicError> {
    Ok(c_lambda_poset(lambda)?.poset.chain_count())
}

/// Results of several backends on one partition.
#[derive(Debug, Clone)]
pub struct CrossCheck {
    pub lambda: NumberPartition,
    pub results: Vec<(Backend, HomologyResult)>,
    /// Backends skipped because the input was over budget.
    pub skipped: Vec<Backend>,
}

impl CrossCheck {
    pub fn homology(&self) -> &HomologyResult {
        &self.results[0].1
    }
}

fn tables(results: &[(Backend, HomologyResult)]) -> String {
    results
        .iter()
        .map(|(b, h)| format!("[{b}]\n{h}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Runs every backend (the order complex only when it has at most
/// `chain_budget` chains) and fails unless all results coincide.
pub fn cross_check(lambda: &NumberPartition, chain_budget: Option<u128>) -> Result<CrossCheck, HyperbolicError> {
    let mut results = Vec::new();
    let mut skipped = Vec::new();
    for backend in Backend::ALL {
        if backend == Backend::OrderComplex {
            if let Some(budget) = chain_budget {
                if order_complex_size(lambda)? > budget {
                    skipped.push(backend);
                    continue;
                }
            }
        }
        results.push((backend, hyp_homology(lambda, backend)?));
    }
    if results.windows(2).any(|w| w[0].1 != w[1].1) {
        return Err(HyperbolicError::Disagreement {
            lambda: lambda.to_string(),
            tables: tables(&results),
        });
    }
    Ok(CrossCheck {
        lambda: lambda.clone(),
        results,
        skipped,
    })
}

/// A predicted reduced-homology type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Sphere(i64),
    /// All reduced homology vanishes.
    Point,
}

impl Shape {
    pub fn matches(&self, h: &HomologyResult) -> bool {
        match *self {
            Shape::Sphere(d) => h.sphere_dimension() == Some(d),
            Shape::Point => h.is_trivial(),
        }
    }

    pub fn shifted(self, k: i64) -> Shape {
        match self {
            Shape::Sphere(d) => Shape::Sphere(d + k),
            Shape::Point => Shape::Point,
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Sphere(d) => write!(f, "S^{d}"),
            Shape::Point => f.write_str("point"),
        }
    }
}

/// Predicted homology for the hook `(1^{n−k}, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HookPrediction {
    pub n: u32,
    pub k: u32,
    /// For the compactified stratum.
    pub stratum: Shape,
    /// For `Δ(C_λ)`, two degrees lower.
    pub order_complex: Shape,
    pub case: &'static str,
}

pub fn hook_prediction(n: u32, k: u32) -> Result<HookPrediction, HyperbolicError> {
    if k < 2 || k > n {
        return Err(HyperbolicError::Hook { n, k });
    }
    let (stratum, case) = if n % k == 1 {
        (Shape::Sphere(2 * (n as i64 - 1) / k as i64), "n ≡ 1 (mod k)")
    } else if n % k == 0 {
        (Shape::Sphere(2 * n as i64 / k as i64 - 1), "n ≡ 0 (mod k)")
    } else {
        (Shape::Point, "otherwise")
    };
    Ok(HookPrediction {
        n,
        k,
        stratum,
        order_complex: stratum.shifted(-2),
        case,
    })
}

/// Prediction for partitions free of resonances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FreePrediction {
    /// Distinct parts: a sphere of dimension `t`.
    Sphere(i64),
    /// Some part repeats.
    Point,
    /// Not free of resonances; the first primitive identity is attached.
    NoPrediction(Identity),
}

impl FreePrediction {
    pub fn shape(&self) -> Option<Shape> {
        match self {
            FreePrediction::Sphere(d) => Some(Shape::Sphere(*d)),
            FreePrediction::Point => Some(Shape::Point),
            FreePrediction::NoPrediction(_) => None,
        }
    }
}

pub fn resonance_free_prediction(lambda: &NumberPartition) -> FreePrediction {
    if let Some(id) = primitive_identities(lambda.parts()).into_iter().next() {
        return FreePrediction::NoPrediction(id);
    }
    if lambda.has_repeated_part() {
        FreePrediction::Point
    } else {
        FreePrediction::Sphere(lambda.len() as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(s: &str) -> NumberPartition {
        s.parse().unwrap()
    }

    #[test]
    fn one_part_gives_a_circle() {
        for n in 1..=6 {
            let c = cross_check(&NumberPartition::hook(n, n), None).unwrap();
            assert_eq!(c.homology().sphere_dimension(), Some(1), "n = {n}");
        }
    }

    #[test]
    fn all_ones_is_contractible() {
        for n in 2..=6 {
            let lambda = NumberPartition::new(vec![1; n]).unwrap();
            assert!(cross_check(&lambda, None).unwrap().homology().is_trivial());
        }
    }

    #[test]
    fn rank_three_example() {
        let c = cross_check(&part("1,2,3,5"), None).unwrap();
        let h = c.homology();
        assert_eq!(h.betti(4), 3);
        assert_eq!(h.groups().count(), 1);
        assert!(h.is_free());
    }

    #[test]
    fn hook_predictions() {
        assert_eq!(hook_prediction(4, 2).unwrap().stratum, Shape::Sphere(3));
        assert_eq!(hook_prediction(5, 2).unwrap().stratum, Shape::Sphere(4));
        assert_eq!(hook_prediction(7, 3).unwrap().stratum, Shape::Sphere(4));
        assert_eq!(hook_prediction(8, 3).unwrap().stratum, Shape::Point);
        assert_eq!(hook_prediction(7, 3).unwrap().order_complex, Shape::Sphere(2));
        assert!(hook_prediction(3, 1).is_err());
        assert!(hook_prediction(3, 4).is_err());
    }

    #[test]
    fn free_predictions() {
        assert_eq!(resonance_free_prediction(&part("1,2,4")), FreePrediction::Sphere(3));
        assert_eq!(resonance_free_prediction(&part("2,2")), FreePrediction::Point);
        assert!(matches!(
            resonance_free_prediction(&part("1,2,3")),
            FreePrediction::NoPrediction(_)
        ));
    }

    #[test]
    fn backend_names_round_trip() {
        for b in Backend::ALL {
            assert_eq!(b.name().parse::<Backend>().unwrap(), b);
        }
        assert!("simplicial".parse::<Backend>().is_err());
    }
}
