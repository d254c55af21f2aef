//! Algebra configuration: ordered generators, the locality bound `N`, and
//! everything derived from it (Gram form, parities, doubled degrees).
//!
//! Degrees live in ½Z, so they are carried doubled (`deg2 = 2·deg`) as plain
//! integers throughout the crate.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact rational scalar. Always normalized with a positive denominator.
pub type Scalar = BigRational;

pub fn scalar(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Generalized binomial coefficient `n(n-1)…(n-k+1)/k!`, zero for `k < 0`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if n >= 0 && k > n {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

pub fn sign(exp: i64) -> i64 {
    if exp.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Render a scalar as `p` or `p/q`.
pub fn fmt_scalar(c: &Scalar) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Index of a generator in its signature's order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Gen(pub u16);

impl Gen {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SignatureError {
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("locality matrix has {rows} rows but there are {gens} generators")]
    SizeMismatch { rows: usize, gens: usize },
    #[error("locality matrix row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("locality matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("locality entry at ({0}, {1}) does not fit in a 64-bit integer")]
    EntryOutOfRange(usize, usize),
    #[error("no generators")]
    Empty,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed weight `{0}`")]
    MalformedWeight(String),
    #[error("malformed configuration: {0}")]
    Malformed(String),
}

/// On-disk form of a signature.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignatureConfig {
    pub generators: Vec<String>,
    pub locality: Vec<Vec<serde_json::Number>>,
}

/// Ordered generator set `B` together with a symmetric integer locality
/// bound `N(a, b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    names: Vec<String>,
    locality: Vec<i64>,
}

impl Signature {
    pub fn new<S: Into<String>>(names: Vec<S>, locality: Vec<Vec<i64>>) -> Result<Self, SignatureError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(SignatureError::Empty);
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(SignatureError::DuplicateGenerator(n.clone()));
            }
        }
        let k = names.len();
        if locality.len() != k {
            return Err(SignatureError::SizeMismatch { rows: locality.len(), gens: k });
        }
        for (row, r) in locality.iter().enumerate() {
            if r.len() != k {
                return Err(SignatureError::NotSquare { row, len: r.len(), expected: k });
            }
        }
        for i in 0..k {
            for j in 0..i {
                if locality[i][j] != locality[j][i] {
                    return Err(SignatureError::NotSymmetric(i, j));
                }
            }
        }
        let flat = locality.into_iter().flatten().collect();
        Ok(Signature { names, locality: flat })
    }

    /// Signature whose Gram form is the given matrix, i.e. `N = -gram`.
    pub fn from_gram<S: Into<String>>(names: Vec<S>, gram: Vec<Vec<i64>>) -> Result<Self, SignatureError> {
        let loc = gram.into_iter().map(|r| r.into_iter().map(|x| -x).collect()).collect();
        Signature::new(names, loc)
    }

    pub fn from_config(cfg: &SignatureConfig) -> Result<Self, SignatureError> {
        let mut rows = Vec::with_capacity(cfg.locality.len());
        for (i, r) in cfg.locality.iter().enumerate() {
            let mut row = Vec::with_capacity(r.len());
            for (j, x) in r.iter().enumerate() {
                row.push(parse_int(x).ok_or(SignatureError::EntryOutOfRange(i, j))?);
            }
            rows.push(row);
        }
        Signature::new(cfg.generators.clone(), rows)
    }

    /// Parse the JSON configuration document
    /// `{"generators": [...], "locality": [[...], ...]}`.
    pub fn load(text: &str) -> Result<Self, SignatureError> {
        let cfg: SignatureConfig =
            serde_json::from_str(text).map_err(|e| SignatureError::Malformed(e.to_string()))?;
        Signature::from_config(&cfg)
    }

    pub fn to_config(&self) -> SignatureConfig {
        SignatureConfig {
            generators: self.names.clone(),
            locality: (0..self.len())
                .map(|i| (0..self.len()).map(|j| self.locality[i * self.len() + j].into()).collect())
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn gens(&self) -> impl Iterator<Item = Gen> + '_ {
        (0..self.len()).map(|i| Gen(i as u16))
    }

    pub fn name(&self, g: Gen) -> &str {
        &self.names[g.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn gen(&self, name: &str) -> Result<Gen, SignatureError> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| Gen(i as u16))
            .ok_or_else(|| SignatureError::UnknownGenerator(name.to_string()))
    }

    #[inline]
    pub fn locality(&self, a: Gen, b: Gen) -> i64 {
        self.locality[a.index() * self.len() + b.index()]
    }

    /// Gram form `(a|b) = -N(a, b)`.
    #[inline]
    pub fn gram(&self, a: Gen, b: Gen) -> i64 {
        -self.locality(a, b)
    }

    pub fn parity(&self, a: Gen) -> u8 {
        self.locality(a, a).rem_euclid(2) as u8
    }

    /// Doubled degree `-N(a, a)`.
    pub fn deg2(&self, a: Gen) -> i64 {
        -self.locality(a, a)
    }

    pub fn max_locality(&self) -> i64 {
        self.locality.iter().copied().max().unwrap_or(0)
    }

    pub fn min_locality(&self) -> i64 {
        self.locality.iter().copied().min().unwrap_or(0)
    }

    /// `(λ|μ)` extended bilinearly from the Gram form.
    pub fn pairing(&self, l: &Weight, m: &Weight) -> i64 {
        debug_assert_eq!(l.0.len(), self.len());
        debug_assert_eq!(m.0.len(), self.len());
        let k = self.len();
        let mut acc = 0;
        for i in 0..k {
            if l.0[i] == 0 {
                continue;
            }
            for j in 0..k {
                if m.0[j] != 0 {
                    acc -= l.0[i] * m.0[j] * self.locality[i * k + j];
                }
            }
        }
        acc
    }

    /// `(a|λ)` for a single generator.
    pub fn pairing_gen(&self, a: Gen, m: &Weight) -> i64 {
        let k = self.len();
        let row = &self.locality[a.index() * k..(a.index() + 1) * k];
        -row.iter().zip(&m.0).map(|(n, c)| n * c).sum::<i64>()
    }

    /// Doubled minimal degree of the weight-`λ` component, `(λ|λ)`.
    pub fn d2_min(&self, l: &Weight) -> i64 {
        self.pairing(l, l)
    }

    pub fn weight_parity(&self, l: &Weight) -> u8 {
        let s: i64 = self.gens().map(|a| l.0[a.index()] * self.locality(a, a)).sum();
        s.rem_euclid(2) as u8
    }

    pub fn zero_weight(&self) -> Weight {
        Weight(vec![0; self.len()])
    }

    pub fn unit_weight(&self, a: Gen) -> Weight {
        let mut w = self.zero_weight();
        w.0[a.index()] = 1;
        w
    }

    /// Parse a weight such as `2a`, `a+b`, `2a-b` or `0`.
    pub fn parse_weight(&self, text: &str) -> Result<Weight, SignatureError> {
        let bad = || SignatureError::MalformedWeight(text.to_string());
        let mut w = self.zero_weight();
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "0" {
            return Ok(w);
        }
        if s.is_empty() {
            return Err(bad());
        }
        let bytes = s.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut sgn = 1;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sgn = -1;
                }
                i += 1;
            } else if i > 0 {
                return Err(bad());
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let coef: i64 = if i > start { s[start..i].parse().map_err(|_| bad())? } else { 1 };
            let nstart = i;
            while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
                i += 1;
            }
            if nstart == i {
                return Err(bad());
            }
            let g = self.gen(&s[nstart..i])?;
            w.0[g.index()] += sgn * coef;
        }
        Ok(w)
    }

    pub fn fmt_weight(&self, w: &Weight) -> String {
        let mut out = String::new();
        for a in self.gens() {
            let c = w.0[a.index()];
            if c == 0 {
                continue;
            }
            if c < 0 {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            if c.abs() != 1 {
                out.push_str(&c.abs().to_string());
            }
            out.push_str(self.name(a));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn parse_int(n: &serde_json::Number) -> Option<i64> {
    if let Some(v) = n.as_i64() {
        return Some(v);
    }
    // Integral values written with an exponent or as huge literals.
    let s = n.to_string();
    let v: BigInt = s.parse().ok()?;
    v.to_i64()
}

/// Element of `Z[B]`, stored densely in generator order. Used both for the
/// nonnegative weights of the free algebra and for lattice charges.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn add_gen(&mut self, a: Gen, times: i64) {
        self.0[a.index()] += times;
    }

    pub fn count(&self, a: Gen) -> i64 {
        self.0[a.index()]
    }
}

impl std::ops::Add<&Weight> for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl std::ops::Sub<&Weight> for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl std::ops::Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Small signatures used by the suites and tests.
pub mod fixtures {
    use super::Signature;

    /// One fermion: `N(a,a) = -1`.

    pub fn ferm() -> Signature {
        Signature::new(vec!["a"], vec![vec![-1]]).unwrap()
    }

    /// Two generators with `N ≡ 2`.
    pub fn free2() -> Signature {
        Signature::new(vec!["a", "b"], vec![vec![2, 2], vec![2, 2]]).unwrap()
    }

    /// `N(a,a) = -2`, `N(b,b) = 0`, `N(a,b) = 1`.
    pub fn neg() -> Signature {
        Signature::new(vec!["a", "b"], vec![vec![-2, 1], vec![1, 0]]).unwrap()
    }

    /// Two generators with `N ≡ 1`.
    pub fn ones2() -> Signature {
        Signature::new(vec!["a", "b"], vec![vec![1, 1], vec![1, 1]]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn load_fermion() {
        let sig = Signature::load(r#"{"generators":["a"],"locality":[[-1]]}"#).unwrap();
        let a = sig.gen("a").unwrap();
        assert_eq!(sig.parity(a), 1);
        assert_eq!(sig.deg2(a), 1);
    }

    #[test]
    fn load_free2_even() {
        let sig = Signature::load(r#"{"generators":["a","b"],"locality":[[2,2],[2,2]]}"#).unwrap();
        assert!(sig.gens().all(|g| sig.parity(g) == 0));
    }

    #[test]
    fn odd_diagonal_accepted_asymmetric_rejected() {
        let sig = Signature::load(r#"{"generators":["a","b"],"locality":[[2,1],[1,3]]}"#).unwrap();
        assert_eq!(sig.parity(sig.gen("b").unwrap()), 1);
        let err = Signature::load(r#"{"generators":["a","b"],"locality":[[2,1],[3,2]]}"#).unwrap_err();
        assert_eq!(err, SignatureError::NotSymmetric(1, 0));
    }

    #[test]
    fn validation_errors() {
        assert_eq!(
            Signature::new(vec!["a", "a"], vec![vec![0, 0], vec![0, 0]]).unwrap_err(),
            SignatureError::DuplicateGenerator("a".into())
        );
        assert!(matches!(
            Signature::new(vec!["a", "b"], vec![vec![0, 0]]).unwrap_err(),
            SignatureError::SizeMismatch { .. }
        ));
        assert!(matches!(
            Signature::new(vec!["a", "b"], vec![vec![0, 0], vec![0]]).unwrap_err(),
            SignatureError::NotSquare { .. }
        ));
        let huge = r#"{"generators":["a"],"locality":[[123456789012345678901234567890]]}"#;
        assert!(Signature::load(huge).is_err());
    }

    #[test]
    fn pairing_examples() {
        let f = ferm();
        let a = f.parse_weight("a").unwrap();
        let a2 = f.parse_weight("2a").unwrap();
        assert_eq!(f.pairing(&a, &a), 1);
        assert_eq!(f.pairing(&a2, &a2), 4);
        let s = free2();
        let ab = s.parse_weight("a+b").unwrap();
        assert_eq!(s.pairing(&ab, &ab), -8);
        assert_eq!(s.d2_min(&ab), -8);
        assert_eq!(f.d2_min(&a2), 4);
        assert_eq!(f.d2_min(&f.zero_weight()), 0);
    }

    #[test]
    fn weight_text_round_trip() {
        let s = neg();
        for t in ["0", "a", "2a+b", "-a+3b", "b"] {
            let w = s.parse_weight(t).unwrap();
            assert_eq!(s.fmt_weight(&w), t);
        }
        assert!(matches!(s.parse_weight("c"), Err(SignatureError::UnknownGenerator(_))));
        assert!(s.parse_weight("2").is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(-1, 3), BigInt::from(-1));
        assert_eq!(binomial(-2, 2), BigInt::from(3));
        assert_eq!(binomial(2, 3), BigInt::from(0));
        assert_eq!(binomial(3, -1), BigInt::from(0));
    }

    fn arb_weight() -> impl Strategy<Value = Weight> {
        proptest::collection::vec(-4i64..5, 2).prop_map(Weight)
    }

    proptest! {
        #[test]
        fn pairing_symmetric_bilinear(l in arb_weight(), l2 in arb_weight(), m in arb_weight()) {
            let s = neg();
            prop_assert_eq!(s.pairing(&l, &m), s.pairing(&m, &l));
            prop_assert_eq!(s.pairing(&(&l + &l2), &m), s.pairing(&l, &m) + s.pairing(&l2, &m));
        }

        #[test]
        fn parity_additive(l in arb_weight(), m in arb_weight()) {
            let s = Signature::new(vec!["a", "b"], vec![vec![-1, 2], vec![2, 3]]).unwrap();
            prop_assert_eq!(s.weight_parity(&(&l + &m)), (s.weight_parity(&l) + s.weight_parity(&m)) % 2);
        }

        #[test]
        fn d2_min_of_distinct_slots(gs in proptest::collection::vec(0u16..2, 1..5)) {
            let s = neg();
            let mut l = s.zero_weight();
            let mut expect = 0;
            for (i, &g) in gs.iter().enumerate() {
                l.add_gen(Gen(g), 1);
                expect += s.deg2(Gen(g));
                for &h in &gs[..i] {
                    expect -= 2 * s.locality(Gen(h), Gen(g));
                }
            }
            prop_assert_eq!(s.d2_min(&l), expect);
        }
    }
}
