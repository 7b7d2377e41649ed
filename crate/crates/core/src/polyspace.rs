//! Monic real polynomials at desk scale.
//!
//! The affine group `X ↦ ρX + γ` (`ρ > 0`) acts on monic polynomials of
//! degree `n` by `f ↦ f(ρX + γ)/ρⁿ`. Outside the orbit of `Xⁿ` every orbit
//! has a unique normal form: centre so that the `X^{n−1}` coefficient
//! vanishes, then scale so that the remaining coefficients have unit norm.
//! The scale solves `h(ρ) = Σ_{i≤n−2} (dᵢ/ρ^{n−i})² = 1` with `h` strictly
//! decreasing. Floating point lives only here.
//!
//! Stratum membership is read off factored input, never found numerically:
//! real roots with multiplicities plus irreducible quadratics.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::compositions::Composition;
use crate::strata::{StrataError, StratumCell};

/// Relative tolerance on `ρ`.
pub const RHO_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolyError {
    #[error("polynomial lies in the orbit of X^n (all centred coefficients vanish)")]
    PowerOrbit,
    #[error("scale search did not converge")]
    NoConvergence,
    #[error("h is not decreasing on [{0}, {1}]")]
    NotMonotone(f64, f64),
    #[error("leading coefficient is {0}, expected 1")]
    NotMonic(String),
    #[error("degree must be at least 1")]
    Constant,
    #[error("roots must be strictly increasing: {0} then {1}")]
    RootOrder(String, String),
    #[error("x^2 + ({p})x + ({q}) has real roots")]
    NotElliptic { p: String, q: String },
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("target degree {m} must be at least {n} with the same parity")]
    Stabilize { n: u32, m: u32 },
    #[error("multiplicities must be positive")]
    ZeroMultiplicity,
    #[error(transparent)]
    Strata(#[from] StrataError),
}

/// `Xⁿ + c_{n−1}X^{n−1} + ⋯ + c₀`, stored as `c₀, …, c_{n−1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonicPolynomial {
    coeffs: Vec<f64>,
}

impl MonicPolynomial {
    /// From the lower coefficients `c₀, …, c_{n−1}`.
    pub fn new(coeffs: Vec<f64>) -> Result<Self, PolyError> {
        if coeffs.is_empty() {
            return Err(PolyError::Constant);
        }
        Ok(MonicPolynomial { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `c₀, …, c_{n−1}`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(1.0, |acc, &c| acc * x + c)
    }

    /// `f(ρX + γ)/ρⁿ`.
    pub fn act(&self, rho: f64, gamma: f64) -> MonicPolynomial {
        let n = self.degree();
        let shifted = taylor_shift(&self.full(), gamma);
        let coeffs = (0..n).map(|i| shifted[i] * rho.powi(i as i32 - n as i32)).collect();
        MonicPolynomial { coeffs }
    }

    fn full(&self) -> Vec<f64> {
        let mut all = self.coeffs.clone();
        all.push(1.0);
        all
    }

    /// Largest coefficient distance to another polynomial of the same degree.
    pub fn distance(&self, other: &MonicPolynomial) -> f64 {
        assert_eq!(self.degree(), other.degree());
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Coefficients of `p(X + γ)` for ascending coefficients `p`.
fn taylor_shift(p: &[f64], gamma: f64) -> Vec<f64> {
    let mut a = p.to_vec();
    let n = a.len();
    for k in 0..n {
        for j in (k..n - 1).rev() {
            let carry = gamma * a[j + 1];
            a[j] += carry;
        }
    }
    a
}

/// Parses the full ascending coefficient list `c₀,…,c_{n−1},1`; the last
/// entry is the leading coefficient and must be 1.
impl FromStr for MonicPolynomial {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let values: Vec<f64> = s
            .split(',')
            .map(|t| parse_number(t.trim()).ok_or_else(|| PolyError::Parse(s.to_string())))
            .collect::<Result<_, _>>()?;
        let (&lead, rest) = values.split_last().ok_or_else(|| PolyError::Parse(s.to_string()))?;
        if lead != 1.0 {
            return Err(PolyError::NotMonic(lead.to_string()));
        }
        MonicPolynomial::new(rest.to_vec())
    }
}

fn parse_number(t: &str) -> Option<f64> {
    match t.split_once('/') {
        Some((a, b)) => Some(a.trim().parse::<f64>().ok()? / b.trim().parse::<f64>().ok()?),
        None => t.parse().ok(),
    }
}

impl fmt::Display for MonicPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        write!(f, "X^{n}")?;
        for i in (0..n).rev() {
            let c = self.coeffs[i];
            if c == 0.0 {
                continue;
            }
            let sign = if c < 0.0 { '-' } else { '+' };
            match i {
                0 => write!(f, " {sign} {}", c.abs())?,
                1 => write!(f, " {sign} {}X", c.abs())?,
                _ => write!(f, " {sign} {}X^{i}", c.abs())?,
            }
        }
        Ok(())
    }
}

/// Normal form `g = f(ρX + γ)/ρⁿ` with the parameters used.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalized {
    pub g: MonicPolynomial,
    pub rho: f64,
    pub gamma: f64,
}

pub fn affine_normalize(f: &MonicPolynomial) -> Result<Normalized, PolyError> {
    let n = f.degree();
    let gamma = -f.coeffs[n - 1] / n as f64;
    let centred = taylor_shift(&f.full(), gamma);
    let d: Vec<f64> = centred[..n].to_vec();
    if d.iter().all(|&c| c == 0.0) {
        return Err(PolyError::PowerOrbit);
    }
    let h = |rho: f64| -> f64 {
        (0..n.saturating_sub(1))
            .map(|i| (d[i] / rho.powi((n - i) as i32)).powi(2))
            .sum()
    };
    let rho = solve_unit_norm(&h)?;
    let mut coeffs: Vec<f64> = (0..n).map(|i| d[i] / rho.powi((n - i) as i32)).collect();
    coeffs[n - 1] = 0.0;
    Ok(Normalized {
        g: MonicPolynomial { coeffs },
        rho,
        gamma,
    })
}

fn solve_unit_norm(h: &dyn Fn(f64) -> f64) -> Result<f64, PolyError> {
    let at_one = h(1.0);
    if at_one == 1.0 {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (1.0f64, 1.0f64);
    // h decreases: too large at ρ means ρ is too small
    for _ in 0..2100 {
        if at_one > 1.0 {
            if h(hi) <= 1.0 {
                break;
            }
            lo = hi;
            hi *= 2.0;
        } else {
            if h(lo) >= 1.0 {
                break;
            }
            hi = lo;
            lo /= 2.0;
        }
        if !lo.is_finite() || !hi.is_finite() || lo == 0.0 {
            return Err(PolyError::NoConvergence);
        }
    }
    if !(h(lo) >= 1.0 && h(hi) <= 1.0) {
        return Err(PolyError::NoConvergence);
    }
    for _ in 0..400 {
        if hi - lo <= RHO_TOLERANCE * hi {
            return Ok(0.5 * (lo + hi));
        }
        let mid = 0.5 * (lo + hi);
        let (hl, hm, hh) = (h(lo), h(mid), h(hi));
        if !(hl >= hm && hm >= hh) {
            return Err(PolyError::NotMonotone(lo, hi));
        }
        if hm > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(PolyError::NoConvergence)
}

/// Real roots with multiplicities and irreducible monic quadratics, all
/// with exact rational data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredPolynomial {
    roots: Vec<(BigRational, u32)>,
    quadratics: Vec<(BigRational, BigRational)>,
}

impl FactoredPolynomial {
    /// Roots must be strictly increasing; each quadratic `X² + pX + q` must
    /// have `p² < 4q`.
    pub fn new(
        roots: Vec<(BigRational, u32)>,
        quadratics: Vec<(BigRational, BigRational)>,
    ) -> Result<Self, PolyError> {
        for w in roots.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(PolyError::RootOrder(w[0].0.to_string(), w[1].0.to_string()));
            }
        }
        if roots.iter().any(|r| r.1 == 0) {
            return Err(PolyError::ZeroMultiplicity);
        }
        let four = BigRational::from_integer(BigInt::from(4));
        for (p, q) in &quadratics {
            if p * p >= &four * q {
                return Err(PolyError::NotElliptic {
                    p: p.to_string(),
                    q: q.to_string(),
                });
            }
        }
        Ok(FactoredPolynomial { roots, quadratics })
    }

    pub fn roots(&self) -> &[(BigRational, u32)] {
        &self.roots
    }

    pub fn quadratics(&self) -> &[(BigRational, BigRational)] {
        &self.quadratics
    }

    pub fn degree(&self) -> u32 {
        self.roots.iter().map(|r| r.1).sum::<u32>() + 2 * self.quadratics.len() as u32
    }

    /// Ascending exact coefficients, leading 1 included.
    pub fn expand(&self) -> Vec<BigRational> {
        let mut acc = vec![BigRational::one()];
        let mul = |acc: &[BigRational], factor: &[BigRational]| {
            let mut out = vec![BigRational::zero(); acc.len() + factor.len() - 1];
            for (i, a) in acc.iter().enumerate() {
                for (j, b) in factor.iter().enumerate() {
                    out[i + j] += a * b;
                }
            }
            out
        };
        for (x, m) in &self.roots {
            for _ in 0..*m {
                acc = mul(&acc, &[-x.clone(), BigRational::one()]);
            }
        }
        for (p, q) in &self.quadratics {
            acc = mul(&acc, &[q.clone(), p.clone(), BigRational::one()]);
        }
        acc
    }

    /// Floating monic form, for normalization.
    pub fn to_monic(&self) -> Result<MonicPolynomial, PolyError> {
        let all = self.expand();
        let lower = all[..all.len() - 1]
            .iter()
            .map(|c| rational_to_f64(c))
            .collect();
        MonicPolynomial::new(lower)
    }
}

fn rational_to_f64(c: &BigRational) -> f64 {
    let num: f64 = c.numer().to_string().parse().unwrap_or(f64::NAN);
    let den: f64 = c.denom().to_string().parse().unwrap_or(f64::NAN);
    num / den
}

impl fmt::Display for FactoredPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors = Vec::new();
        for (x, m) in &self.roots {
            let lin = if x.is_zero() {
                "(x)".to_string()
            } else if x.is_negative() {
                format!("(x+{})", -x)
            } else {
                format!("(x-{x})")
            };
            factors.push(if *m == 1 { lin } else { format!("{lin}^{m}") });
        }
        for (p, q) in &self.quadratics {
            let mut s = String::from("(x^2");
            if !p.is_zero() {
                s.push_str(&if p.is_negative() { format!("-{}x", -p) } else { format!("+{p}x") });
            }
            if !q.is_zero() {
                s.push_str(&if q.is_negative() { format!("-{}", -q) } else { format!("+{q}") });
            }
            s.push(')');
            factors.push(s);
        }
        f.write_str(&factors.join(" "))
    }
}

/// Parses products like `(x-1)^2 (x-3) (x^2+1)`. Equal linear factors are
/// merged; roots are sorted.
impl FromStr for FactoredPolynomial {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PolyError::Parse(s.to_string());
        let text: String = s.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
        let mut roots: Vec<(BigRational, u32)> = Vec::new();
        let mut quadratics = Vec::new();
        let mut rest = text.as_str();
        while !rest.is_empty() {
            let inner_end = rest.find(')').ok_or_else(bad)?;
            if !rest.starts_with('(') {
                return Err(bad());
            }
            let inner = &rest[1..inner_end];
            rest = &rest[inner_end + 1..];
            let mut power = 1u32;
            if let Some(after) = rest.strip_prefix('^') {
                let digits: String = after.chars().take_while(char::is_ascii_digit).collect();
                power = digits.parse().map_err(|_| bad())?;
                rest = &after[digits.len()..];
            }
            if power == 0 {
                return Err(PolyError::ZeroMultiplicity);
            }
            let coeffs = parse_poly_in_x(inner).ok_or_else(bad)?;
            match coeffs.len() {
                2 if coeffs[1].is_one() => {
                    let root = -coeffs[0].clone();
                    match roots.iter_mut().find(|r| r.0 == root) {
                        Some(r) => r.1 += power,
                        None => roots.push((root, power)),
                    }
                }
                3 if coeffs[2].is_one() => {
                    for _ in 0..power {
                        quadratics.push((coeffs[1].clone(), coeffs[0].clone()));
                    }
                }
                _ => return Err(bad()),
            }
        }
        if roots.is_empty() && quadratics.is_empty() {
            return Err(bad());
        }
        roots.sort();
        FactoredPolynomial::new(roots, quadratics)
    }
}

/// Ascending coefficients of a polynomial in `x` such as `x^2-3/2x+1`.
fn parse_poly_in_x(s: &str) -> Option<Vec<BigRational>> {
    let mut coeffs: Vec<BigRational> = Vec::new();
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        if (ch == '+' || ch == '-') && i > start {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    for term in terms {
        let (sign, body) = match term.as_bytes().first()? {
            b'-' => (-BigRational::one(), &term[1..]),
            b'+' => (BigRational::one(), &term[1..]),
            _ => (BigRational::one(), term),
        };
        let (coef_text, power) = match body.find('x') {
            None => (body, 0usize),
            Some(k) => {
                let exp = &body[k + 1..];
                let p = if exp.is_empty() { 1 } else { exp.strip_prefix('^')?.parse().ok()? };
                (&body[..k], p)
            }
        };
        let coef = if coef_text.is_empty() {
            BigRational::one()
        } else {
            parse_rational(coef_text)?
        };
        if coeffs.len() <= power {
            coeffs.resize(power + 1, BigRational::zero());
        }
        coeffs[power] += sign * coef;
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    Some(coeffs)
}

fn parse_rational(t: &str) -> Option<BigRational> {
    if let Some((a, b)) = t.split_once('/') {
        let den: BigInt = b.parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(a.parse().ok()?, den));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let digits = format!("{int}{frac}");
        let den = BigInt::from(10).pow(frac.len() as u32);
        return Some(BigRational::new(digits.parse().ok()?, den));
    }
    Some(BigRational::from_integer(t.parse().ok()?))
}

/// The cell containing `f`: multiplicities of the real roots in increasing
/// order, in ambient degree `deg f`.
pub fn cell_of(f: &FactoredPolynomial) -> Result<StratumCell, PolyError> {
    let comp = Composition::new(f.roots.iter().map(|r| r.1).collect()).expect("positive multiplicities");
    Ok(StratumCell::new(comp, f.degree())?)
}

/// Multiplies by `(X² + 1)^{(m−n)/2}`.
pub fn stabilize(f: &FactoredPolynomial, m: u32) -> Result<FactoredPolynomial, PolyError> {
    let n = f.degree();
    if m < n || (m - n) % 2 != 0 {
        return Err(PolyError::Stabilize { n, m });
    }
    let mut g = f.clone();
    for _ in 0..(m - n) / 2 {
        g.quadratics
            .push((BigRational::zero(), BigRational::one()));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &MonicPolynomial, b: &MonicPolynomial, tol: f64) -> bool {
        a.distance(b) <= tol
    }

    #[test]
    fn normalize_examples() {
        let f: MonicPolynomial = "-1,0,1".parse().unwrap();
        let r = affine_normalize(&f).unwrap();
        assert_eq!((r.rho, r.gamma), (1.0, 0.0));
        assert!(close(&r.g, &f, 0.0));
        let f: MonicPolynomial = "0,2,1".parse().unwrap();
        let r = affine_normalize(&f).unwrap();
        assert_eq!(r.gamma, -1.0);
        assert!((r.rho - 1.0).abs() < 1e-12);
        assert!(close(&r.g, &"-1,0,1".parse().unwrap(), 1e-12));
        let f: MonicPolynomial = "1,-2,1".parse().unwrap();
        assert_eq!(affine_normalize(&f), Err(PolyError::PowerOrbit));
    }

    #[test]
    fn scaling_finds_the_unit_norm() {
        let f: MonicPolynomial = "-16,0,0,1".parse().unwrap();
        let r = affine_normalize(&f).unwrap();
        // h(ρ) = (16/ρ³)² = 1
        assert!((r.rho - 16f64.cbrt()).abs() < 1e-10);
        assert!((r.g.coeffs()[0] + 1.0).abs() < 1e-10);
    }

    #[test]
    fn coefficient_syntax() {
        assert!(matches!("1,2".parse::<MonicPolynomial>(), Err(PolyError::NotMonic(_))));
        assert!("1".parse::<MonicPolynomial>().is_err());
        assert!("a,1".parse::<MonicPolynomial>().is_err());
        let f: MonicPolynomial = "1/2,1".parse().unwrap();
        assert_eq!(f.coeffs(), &[0.5]);
    }

    #[test]
    fn cells_of_factored_polynomials() {
        let f: FactoredPolynomial = "(x-1)^2 (x-3) (x^2+1)".parse().unwrap();
        let c = cell_of(&f).unwrap();
        assert_eq!((c.composition().to_string(), c.ambient(), c.dimension()), ("(2,1)".into(), 5, 4));
        let f: FactoredPolynomial = "(x^2+1)(x^2+2)".parse().unwrap();
        let c = cell_of(&f).unwrap();
        assert_eq!((c.composition().to_string(), c.ambient(), c.dimension()), ("()".into(), 4, 4));
        let f: FactoredPolynomial = "(x-2)^4".parse().unwrap();
        assert_eq!(cell_of(&f).unwrap().dimension(), 1);
        assert!("(x^2-1)".parse::<FactoredPolynomial>().is_err());
        assert!("(x-1)^0".parse::<FactoredPolynomial>().is_err());
        let merged: FactoredPolynomial = "(x-3)(x+1/2)(x-3)".parse().unwrap();
        assert_eq!(merged.to_string(), "(x+1/2) (x-3)^2");
    }

    #[test]
    fn expansion() {
        let f: FactoredPolynomial = "(x-1)^2 (x^2+1)".parse().unwrap();
        let c: Vec<String> = f.expand().iter().map(|c| c.to_string()).collect();
        assert_eq!(c, vec!["1", "-2", "2", "-2", "1"]);
    }

    #[test]
    fn stabilization() {
        let f: FactoredPolynomial = "(x-1)^2 (x-3) (x^2+1)".parse().unwrap();
        let g = stabilize(&f, 7).unwrap();
        let c = cell_of(&g).unwrap();
        assert_eq!((c.composition().to_string(), c.ambient()), ("(2,1)".into(), 7));
        assert_eq!(stabilize(&f, 5).unwrap(), f);
        assert!(stabilize(&f, 6).is_err());
        let e: FactoredPolynomial = "(x^2+1)".parse().unwrap();
        assert_eq!(cell_of(&stabilize(&e, 6).unwrap()).unwrap().ambient(), 6);
    }

    #[test]
    fn root_order_is_checked() {
        let one = BigRational::one();
        assert!(FactoredPolynomial::new(vec![(one.clone(), 1), (one, 2)], vec![]).is_err());
    }
}
