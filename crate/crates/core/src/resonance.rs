//! Partition identities among the parts of a composition.
//!
//! An identity is a pair of disjoint nonempty index sets `I, J ⊆ [t]` with
//! `Σ_{i∈I} aᵢ = Σ_{j∈J} aⱼ`. It is *primitive* when no value occurs on
//! both sides. A composition without primitive identities is free of
//! resonances. The set of all identities, primitive or not, lists the
//! resonance hyperplanes `Σ_J xᵢ = Σ_K xᵢ` passing through `(a₁,…,a_t)`.
//!
//! Everything is brute force over the `3^t` ways of sending each index to
//! `I`, `J` or neither.

use serde_json::{json, Value};

/// Disjoint index sets (1-based, ascending) with equal sums, `left < right`
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Identity {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl Identity {
    fn to_json(&self) -> Value {
        json!([self.left, self.right])
    }

    /// E.g. `{1,2} vs {3}`.
    pub fn describe(&self) -> String {
        let side = |s: &[usize]| {
            let v: Vec<String> = s.iter().map(usize::to_string).collect();
            format!("{{{}}}", v.join(","))
        };
        format!("{} vs {}", side(&self.left), side(&self.right))
    }

    /// The identity as values, e.g. `1+2 = 3`.
    pub fn in_values(&self, parts: &[u32]) -> String {
        let side = |s: &[usize]| {
            let v: Vec<String> = s.iter().map(|&i| parts[i - 1].to_string()).collect();
            v.join("+")
        };
        format!("{} = {}", side(&self.left), side(&self.right))
    }
}

fn all_identities(parts: &[u32], primitive_only: bool) -> Vec<Identity> {
    let t = parts.len();
    assert!(t <= 20, "brute force over 3^t assignments needs t ≤ 20");
    let total = 3usize.pow(t as u32);
    let mut out = Vec::new();
    let (mut left, mut right) = (Vec::with_capacity(t), Vec::with_capacity(t));
    for code in 0..total {
        left.clear();
        right.clear();
        let (mut sl, mut sr) = (0u64, 0u64);
        let mut c = code;
        for i in 0..t {
            match c % 3 {
                1 => {
                    left.push(i + 1);
                    sl += parts[i] as u64;
                }
                2 => {
                    right.push(i + 1);
                    sr += parts[i] as u64;
                }
                _ => {}
            }
            c /= 3;
        }
        if left.is_empty() || right.is_empty() || sl != sr || left >= right {
            continue;
        }
        if primitive_only
            && left
                .iter()
                .any(|&i| right.iter().any(|&j| parts[i - 1] == parts[j - 1]))
        {
            continue;
        }
        out.push(Identity {
            left: left.clone(),
            right: right.clone(),
        });
    }
    out.sort();
    out
}

/// Identities with no part value shared between the two sides.
pub fn primitive_identities(parts: &[u32]) -> Vec<Identity> {
    all_identities(parts, true)
}

/// All identities, i.e. the resonance hyperplanes through the point.
pub fn resonance_hyperplanes(parts: &[u32]) -> Vec<Identity> {
    all_identities(parts, false)
}

pub fn is_free_of_resonances(parts: &[u32]) -> bool {
    primitive_identities(parts).is_empty()
}

/// Both identity lists for one composition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResonanceReport {
    pub parts: Vec<u32>,
    pub primitive: Vec<Identity>,
    pub hyperplanes: Vec<Identity>,
}

impl ResonanceReport {
    pub fn new(parts: &[u32]) -> Self {
        ResonanceReport {
            parts: parts.to_vec(),
            primitive: primitive_identities(parts),
            hyperplanes: resonance_hyperplanes(parts),
        }
    }

    pub fn is_free(&self) -> bool {
        self.primitive.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "parts": self.parts,
            "primitive": self.primitive.iter().map(Identity::to_json).collect::<Vec<_>>(),
            "hyperplanes": self.hyperplanes.iter().map(Identity::to_json).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn described(ids: &[Identity]) -> Vec<String> {
        ids.iter().map(Identity::describe).collect()
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(described(&primitive_identities(&[2, 1, 1])), vec!["{1} vs {2,3}"]);
        assert!(primitive_identities(&[2, 2]).is_empty());
        assert_eq!(
            described(&primitive_identities(&[1, 2, 3, 5])),
            vec!["{1,2} vs {3}", "{2,3} vs {4}"]
        );
    }

    #[test]
    fn freeness_examples() {
        assert!(is_free_of_resonances(&[1, 2, 4]));
        assert!(!is_free_of_resonances(&[1, 2, 3]));
        let ids = primitive_identities(&[1, 2, 4, 7]);
        assert_eq!(described(&ids), vec!["{1,2,3} vs {4}"]);
        assert_eq!(ids[0].in_values(&[1, 2, 4, 7]), "1+2+4 = 7");
    }

    #[test]
    fn hyperplane_examples() {
        assert!(resonance_hyperplanes(&[1, 2, 4]).is_empty());
        assert_eq!(described(&resonance_hyperplanes(&[2, 2])), vec!["{1} vs {2}"]);
        assert_eq!(
            described(&resonance_hyperplanes(&[2, 1, 1])),
            vec!["{1} vs {2,3}", "{2} vs {3}"]
        );
    }

    #[test]
    fn report_json_shape() {
        let r = ResonanceReport::new(&[1, 2, 3]);
        assert_eq!(
            r.to_json(),
            json!({"parts": [1, 2, 3], "primitive": [[[1, 2], [3]]], "hyperplanes": [[[1, 2], [3]]]})
        );
    }
}
