//! Verification suites: closed-form predictions against computed answers.
//!
//! Each suite enumerates its cases, runs them in parallel and reports them in
//! canonical order. A suite fails on a mismatch; malformed ranges and broken
//! internal invariants are errors instead.

use std::fmt;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::compositions::{
    c_lambda_poset, partitions_of, verify_closure_reduction, CompositionError, NumberPartition,
};
use crate::homology::HomologyResult;
use crate::hyperbolic::{
    cross_check, hook_prediction, resonance_free_prediction, Backend, FreePrediction, HyperbolicError,
};
use crate::iterated::{iterated_poset, IteratedError};
use crate::permutahedron::{verify_permutahedron_quotient, PermutahedronError};
use crate::resonance::{is_free_of_resonances, primitive_identities};
use crate::strata::{
    boundary_squared, closure_cells, complement_cohomology, pol_homology, stabilization_report,
    ParityRule, StrataError, StratumCell,
};

/// Order-complex budget used by suites that also run the cell and δ
/// backends.
pub const SUITE_CHAIN_BUDGET: u128 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("{0}")]
    Range(String),
    #[error("{0}")]
    Internal(String),
}

impl From<HyperbolicError> for VerifyError {
    fn from(e: HyperbolicError) -> Self {
        VerifyError::Internal(e.to_string())
    }
}

impl From<StrataError> for VerifyError {
    fn from(e: StrataError) -> Self {
        VerifyError::Internal(e.to_string())
    }
}

impl From<CompositionError> for VerifyError {
    fn from(e: CompositionError) -> Self {
        VerifyError::Internal(e.to_string())
    }
}

impl From<PermutahedronError> for VerifyError {
    fn from(e: PermutahedronError) -> Self {
        VerifyError::Internal(e.to_string())
    }
}

impl From<IteratedError> for VerifyError {
    fn from(e: IteratedError) -> Self {
        VerifyError::Internal(e.to_string())
    }
}

/// One input with its expected and computed answers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Case {
    pub input: String,
    pub expected: String,
    pub computed: String,
    pub matches: bool,
}

impl Case {
    fn new(input: impl Into<String>, expected: impl Into<String>, computed: impl Into<String>, matches: bool) -> Self {
        Case {
            input: input.into(),
            expected: expected.into(),
            computed: computed.into(),
            matches,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub suite: String,
    pub cases: Vec<Case>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.matches)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.matches)
    }

    pub fn summary(&self) -> String {
        let bad = self.failures().count();
        format!(
            "{}: {} of {} cases match{}",
            self.suite,
            self.cases.len() - bad,
            self.cases.len(),
            if bad == 0 { "" } else { " (FAIL)" }
        )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "passed": self.passed(),
            "cases": self.cases.iter().map(|c| json!({
                "input": c.input,
                "expected": c.expected,
                "computed": c.computed,
                "match": c.matches,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("input,expected,computed,match\n");
        for c in &self.cases {
            out.push_str(&format!(
                "{},{},{},{}\n",
                csv_field(&c.input),
                csv_field(&c.expected),
                csv_field(&c.computed),
                c.matches
            ));
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cases {
            if c.matches {
                writeln!(f, "ok    {}: {}", c.input, c.computed)?;
            } else {
                writeln!(f, "FAIL  {}: expected {}, computed {}", c.input, c.expected, c.computed)?;
            }
        }
        write!(f, "{}", self.summary())
    }
}

/// Homology on one line, e.g. `H3 = Z, H4 = Z^2 + Z/2`, or `0`.
pub fn compact(h: &HomologyResult) -> String {
    if h.is_trivial() {
        return "0".to_string();
    }
    h.groups()
        .map(|(q, g)| format!("H{q} = {g}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn check_range(name: &str, r: &RangeInclusive<u32>, lo: u32, hi: u32) -> Result<(), VerifyError> {
    if r.is_empty() || *r.start() < lo || *r.end() > hi {
        return Err(VerifyError::Range(format!(
            "--{name} {}..{} must be a nonempty range inside {lo}..{hi}",
            r.start(),
            r.end()
        )));
    }
    Ok(())
}

fn run<T: Sync>(
    suite: &str,
    inputs: &[T],
    case: impl Fn(&T) -> Result<Case, VerifyError> + Sync + Send,
) -> Result<VerificationReport, VerifyError> {
    let cases = inputs.par_iter().map(case).collect::<Result<Vec<_>, _>>()?;
    Ok(VerificationReport {
        suite: suite.to_string(),
        cases,
    })
}

fn backends_used(c: &crate::hyperbolic::CrossCheck) -> String {
    c.results.iter().map(|(b, _)| b.name()).collect::<Vec<_>>().join("+")
}

/// Hook partitions `(1^{n−k}, k)`: a single sphere or nothing.
pub fn hook_suite(
    n: RangeInclusive<u32>,
    k: RangeInclusive<u32>,
    budget: u128,
) -> Result<VerificationReport, VerifyError> {
    check_range("n", &n, 2, 16)?;
    check_range("k", &k, 2, 16)?;
    let inputs: Vec<(u32, u32)> = n
        .flat_map(|n| k.clone().filter(move |&k| k <= n).map(move |k| (n, k)))
        .collect();
    run("hook", &inputs, |&(n, k)| {
        let prediction = hook_prediction(n, k)?;
        let lambda = NumberPartition::hook(n, k);
        let c = cross_check(&lambda, Some(budget))?;
        Ok(Case::new(
            format!("{} [{}]", lambda.exponential(), backends_used(&c)),
            format!("{} ({})", prediction.stratum, prediction.case),
            compact(c.homology()),
            prediction.stratum.matches(c.homology()),
        ))
    })
}

/// Every free-of-resonances `λ` with `Σλ ≤ max_weight`.
pub fn resonance_free_suite(max_weight: u32, budget: u128) -> Result<VerificationReport, VerifyError> {
    check_range("max-weight", &(1..=max_weight), 1, 16)?;
    let inputs: Vec<NumberPartition> = (1..=max_weight)
        .flat_map(partitions_of)
        .filter(|l| is_free_of_resonances(l.parts()))
        .collect();
    run("resonance-free", &inputs, |lambda| {
        let shape = match resonance_free_prediction(lambda) {
            FreePrediction::NoPrediction(id) => {
                return Err(VerifyError::Internal(format!("{lambda} has identity {}", id.describe())))
            }
            p => p.shape().expect("free"),
        };
        let c = cross_check(lambda, Some(budget))?;
        Ok(Case::new(
            format!("{} [{}]", lambda.exponential(), backends_used(&c)),
            shape.to_string(),
            compact(c.homology()),
            shape.matches(c.homology()),
        ))
    })
}

/// Free `λ` with `2 ≤ t ≤ t_max` parts and `Σλ ≤ max_weight`: the block-sum
/// map identifies `L_t/H` with `C_λ`, and distinct parts give a
/// `(t−2)`-sphere.
pub fn permutahedron_quotient_suite(t_max: u32, max_weight: u32) -> Result<VerificationReport, VerifyError> {
    check_range("t-max", &(2..=t_max), 2, 5)?;
    check_range("max-weight", &(2..=max_weight), 2, 40)?;
    let inputs: Vec<NumberPartition> = (2..=max_weight)
        .flat_map(partitions_of)
        .filter(|l| (2..=t_max as usize).contains(&l.len()) && is_free_of_resonances(l.parts()))
        .collect();
    run("permutahedron-quotient", &inputs, |lambda| {
        let r = verify_permutahedron_quotient(lambda)?;
        let t = lambda.len() as i64;
        let shape = if lambda.has_repeated_part() {
            "0".to_string()
        } else {
            format!("H{} = Z", t - 2)
        };
        Ok(Case::new(
            lambda.exponential(),
            format!("isomorphic, {shape}"),
            format!(
                "{} orbits vs |C| = {}, {}, {}",
                r.orbit_count,
                r.c_lambda_size,
                if r.isomorphism { "isomorphic" } else { "not isomorphic" },
                compact(&r.homology)
            ),
            r.passed(),
        ))
    })
}

/// `C_n^d ≅ [d+1]^{n−1}` with `(d+1)^{n−1}` elements.
pub fn iterated_suite(n: RangeInclusive<u32>, d: RangeInclusive<u32>) -> Result<VerificationReport, VerifyError> {
    check_range("n", &n, 1, 8)?;
    check_range("d", &d, 1, 4)?;
    let inputs: Vec<(u32, u32)> = n.flat_map(|n| d.clone().map(move |d| (n, d))).collect();
    run("iterated", &inputs, |&(n, d)| {
        let p = iterated_poset(n, d as usize)?;
        let count = (d as usize + 1).pow(n - 1);
        let iso = p.isomorphic_to_product();
        Ok(Case::new(
            format!("n = {n}, d = {d}"),
            format!("{count} elements, product of chains"),
            format!(
                "{} elements, {}",
                p.poset.len(),
                if iso { "product of chains" } else { "not a product" }
            ),
            iso && p.poset.len() == count,
        ))
    })
}

/// The reported machine computations for `Δ(C_λ)` with their identities
/// certified.
pub fn machine_table_suite() -> Result<VerificationReport, VerifyError> {
    let mut inputs: Vec<(NumberPartition, &str, Option<Vec<&str>>)> = Vec::new();
    for n in 5..=9 {
        let mut parts = vec![1; n - 4];
        parts.extend([2, 2]);
        inputs.push((NumberPartition::new(parts)?, "0", None));
    }
    for n in 7..=11 {
        let mut parts = vec![1; n - 6];
        parts.extend([3, 3]);
        inputs.push((NumberPartition::new(parts)?, "0", None));
    }
    inputs.push((
        NumberPartition::new(vec![1, 2, 3, 5])?,
        "H2 = Z^3",
        Some(vec!["1+2 = 3", "2+3 = 5"]),
    ));
    inputs.push((
        NumberPartition::new(vec![1, 2, 4, 7])?,
        "H1 = Z, H2 = Z",
        Some(vec!["1+2+4 = 7"]),
    ));
    run("machine-table", &inputs, |(lambda, expected, ids)| {
        let h = c_lambda_poset(lambda)?.poset.order_complex().homology();
        let mut computed = compact(&h);
        let mut ok = computed == *expected;
        let mut expected = expected.to_string();
        if let Some(ids) = ids {
            let found: Vec<String> = primitive_identities(lambda.parts())
                .iter()
                .map(|i| i.in_values(lambda.parts()))
                .collect();
            ok &= found == *ids;
            expected = format!("{expected}; identities {}", ids.join(", "));
            computed = format!("{computed}; identities {}", found.join(", "));
        }
        Ok(Case::new(format!("Δ(C_{})", lambda.exponential()), expected, computed, ok))
    })
}

fn chain_to_string(terms: &[(StratumCell, i64)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    terms
        .iter()
        .map(|(c, k)| match k {
            1 => format!("+[{}]", c.composition()),
            -1 => format!("-[{}]", c.composition()),
            _ => format!("{k:+}[{}]", c.composition()),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// `∂² = 0` on every closure cell for every `λ ⊢ l` and valid `n ≤ n_max`,
/// plus the regression showing that the literal parity rule fails.
pub fn d_squared_suite(l: RangeInclusive<u32>, n_max: u32) -> Result<VerificationReport, VerifyError> {
    check_range("l", &l, 0, 8)?;
    check_range("n-max", &(*l.start()..=n_max), 0, 12)?;
    let inputs: Vec<(Option<NumberPartition>, u32)> = l
        .flat_map(partitions_of)
        .flat_map(|lambda| {
            (lambda.weight()..=n_max)
                .step_by(2)
                .map(move |n| (Some(lambda.clone()), n))
        })
        .chain(std::iter::once((None, 4)))
        .collect();
    run("d-squared", &inputs, |(lambda, n)| match lambda {
        Some(lambda) => {
            let mut bad = Vec::new();
            let cells = closure_cells(lambda, *n)?;
            for cell in &cells {
                let sq = boundary_squared(cell, ParityRule::Corrected)?;
                if !sq.is_empty() {
                    bad.push(format!("∂²[{}] = {}", cell.composition(), chain_to_string(&sq)));
                }
            }
            Ok(Case::new(
                format!("{} in degree {n}", lambda.exponential()),
                "0",
                if bad.is_empty() {
                    format!("0 on {} cells", cells.len())
                } else {
                    bad.join("; ")
                },
                bad.is_empty(),
            ))
        }
        None => {
            let cell = StratumCell::new("1,1".parse()?, 4)?;
            let sq = chain_to_string(&boundary_squared(&cell, ParityRule::Literal)?);
            Ok(Case::new("literal parity, ∂²[(1,1)] in degree 4", "-[(2,2)]", sq.clone(), sq == "-[(2,2)]"))
        }
    })
}

/// The three backends agree for every `λ ⊢ n ≤ n_max`.
pub fn backends_suite(n_max: u32) -> Result<VerificationReport, VerifyError> {
    check_range("n-max", &(1..=n_max), 1, 8)?;
    let inputs: Vec<NumberPartition> = (1..=n_max).flat_map(partitions_of).collect();
    run("backends", &inputs, |lambda| {
        let input = lambda.exponential();
        let expected = Backend::ALL.map(Backend::name).join(" = ");
        match cross_check(lambda, None) {
            Ok(c) => Ok(Case::new(input, expected, compact(c.homology()), true)),
            Err(HyperbolicError::Disagreement { tables, .. }) => {
                Ok(Case::new(input, expected, tables.replace('\n', " "), false))
            }
            Err(e) => Err(e.into()),
        }
    })
}

/// The closure image of the face poset of `δ_λ` is `C_λ` reversed, with the
/// same homology, for every `λ ⊢ n ≤ n_max`.
pub fn closure_reduction_suite(n_max: u32) -> Result<VerificationReport, VerifyError> {
    check_range("n-max", &(2..=n_max), 2, 8)?;
    let inputs: Vec<NumberPartition> = (2..=n_max).flat_map(partitions_of).collect();
    run("closure-reduction", &inputs, |lambda| {
        let r = verify_closure_reduction(lambda)?;
        Ok(Case::new(
            lambda.exponential(),
            "image ≅ dual of C_λ, equal homology",
            format!(
                "{} faces onto {} closed, {}, {} vs {}",
                r.face_count,
                r.image_size,
                if r.isomorphic_to_dual { "≅ dual" } else { "not ≅ dual" },
                compact(&r.face_poset_homology),
                compact(&r.c_lambda_homology)
            ),
            r.passed(),
        ))
    })
}

/// Small cases whose topology is known geometrically.
pub fn oracles_suite() -> Result<VerificationReport, VerifyError> {
    let mut cases = Vec::new();
    let h = pol_homology(&NumberPartition::new(vec![])?, 2)?;
    cases.push(Case::new("closure of () in degree 2", "0", compact(&h), h.is_trivial()));
    let h = pol_homology(&NumberPartition::new(vec![2])?, 4)?;
    cases.push(Case::new(
        "closure of (2) in degree 4",
        "H3 = Z",
        compact(&h),
        compact(&h) == "H3 = Z",
    ));
    let c = complement_cohomology(&NumberPartition::new(vec![2])?, 2)?;
    cases.push(Case::new(
        "complement of the degree-2 discriminant",
        "H0 = Z",
        compact(&c.groups),
        compact(&c.groups) == "H0 = Z",
    ));
    Ok(VerificationReport {
        suite: "oracles".to_string(),
        cases,
    })
}

/// Complement cohomology in degrees `n` and `n + 2` agrees through degree
/// `n − 2`, for each `λ` and every `n ≤ n_max − 2`.
pub fn stabilization_suite(lambdas: &[NumberPartition], n_max: u32) -> Result<VerificationReport, VerifyError> {
    check_range("n-max", &(2..=n_max), 2, 12)?;
    let mut inputs = Vec::new();
    for lambda in lambdas {
        let l = lambda.weight();
        if l == 0 || l + 2 > n_max {
            return Err(VerifyError::Range(format!("{lambda} needs 1 ≤ Σλ ≤ n-max − 2")));
        }
        inputs.push(lambda.clone());
    }
    let reports = run("stabilization", &inputs, |lambda| {
        let l = lambda.weight();
        let top = n_max - (n_max - l) % 2;
        let r = stabilization_report(lambda, l, top)?;
        let lines: Vec<String> = r
            .differences
            .iter()
            .map(|&(a, b, q)| match q {
                Some(q) => format!("{a}→{b} first differs in H^{q}"),
                None => format!("{a}→{b} equal"),
            })
            .collect();
        let ok = r.differences.iter().all(|&(a, _, q)| q.is_none_or(|q| q > a as i64 - 2));
        Ok(Case::new(
            format!("{} up to degree {top}", lambda.exponential()),
            "agreement through degree n − 2",
            lines.join("; "),
            ok,
        ))
    })?;
    Ok(reports)
}

/// Suite names with their aliases.
pub const SUITES: [(&str, &[&str]); 10] = [
    ("hook", &["hooks"]),
    ("resonance-free", &["free"]),
    ("permutahedron-quotient", &["quotient"]),
    ("iterated", &["product-of-chains"]),
    ("machine-table", &["table"]),
    ("d-squared", &["boundary"]),
    ("backends", &["cross-pipeline"]),
    ("closure-reduction", &["closure"]),
    ("oracles", &["geometric"]),
    ("stabilization", &["stable"]),
];

/// Canonical name of a suite or alias.
pub fn suite_name(s: &str) -> Option<&'static str> {
    SUITES
        .iter()
        .find(|(name, aliases)| *name == s || aliases.contains(&s))
        .map(|(name, _)| *name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        assert!(hook_suite(2..=6, 2..=6, SUITE_CHAIN_BUDGET).unwrap().passed());
        assert!(iterated_suite(2..=4, 1..=2).unwrap().passed());
        assert!(oracles_suite().unwrap().passed());
        let d = d_squared_suite(1..=4, 6).unwrap();
        assert!(d.passed(), "{d}");
        assert_eq!(d.cases.last().unwrap().computed, "-[(2,2)]");
    }

    #[test]
    fn ranges_are_checked() {
        assert!(matches!(hook_suite(2..=40, 2..=3, 1), Err(VerifyError::Range(_))));
        #[allow(clippy::reversed_empty_ranges)]
        let empty = 5..=3;
        assert!(matches!(iterated_suite(empty, 1..=2), Err(VerifyError::Range(_))));
    }

    #[test]
    fn report_rendering() {
        let r = VerificationReport {
            suite: "demo".into(),
            cases: vec![Case::new("a", "1", "1", true), Case::new("b, c", "1", "2", false)],
        };
        assert!(!r.passed());
        assert_eq!(r.summary(), "demo: 1 of 2 cases match (FAIL)");
        assert!(r.to_csv().contains("\"b, c\",1,2,false"));
        assert_eq!(r.to_json()["cases"][1]["match"], json!(false));
    }

    #[test]
    fn aliases() {
        assert_eq!(suite_name("quotient"), Some("permutahedron-quotient"));
        assert_eq!(suite_name("hook"), Some("hook"));
        assert_eq!(suite_name("nope"), None);
    }
}
