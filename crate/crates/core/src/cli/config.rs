//! Configuration files: either a signature
//! `{"generators": [...], "locality": [[...]]}` or an integer lattice
//! `{"basis": [...], "gram": [[...]]}`.

use serde::Deserialize;
use thiserror::Error;

use crate::signature::{Signature, SignatureConfig, SignatureError};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot parse configuration: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Invalid(#[from] SignatureError),
}

/// An integer lattice with a named `Z`-basis and its Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    pub basis: Vec<String>,
    pub gram: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct LatticeConfig {
    basis: Vec<String>,
    gram: Vec<Vec<serde_json::Number>>,
}

impl Lattice {
    pub fn new<S: Into<String>>(basis: Vec<S>, gram: Vec<Vec<i64>>) -> Result<Self, SignatureError> {
        let lat = Lattice { basis: basis.into_iter().map(Into::into).collect(), gram };
        lat.signature()?;
        Ok(lat)
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Signature on the basis with `N = −gram`.
    pub fn signature(&self) -> Result<Signature, SignatureError> {
        Signature::from_gram(self.basis.clone(), self.gram.clone())
    }

    /// Signature on `a₁, ā₁, a₂, ā₂, …` with `(a|b̄) = −(a|b)` and
    /// `(ā|b̄) = (a|b)`, so that `ā` plays the role of `−a`.
    pub fn doubled(&self) -> Signature {
        let r = self.rank();
        let mut names = Vec::with_capacity(2 * r);
        for n in &self.basis {
            names.push(n.clone());
            names.push(format!("{n}bar"));
        }
        let sgn = |i: usize| if i % 2 == 0 { 1 } else { -1 };
        let gram = (0..2 * r)
            .map(|i| (0..2 * r).map(|j| sgn(i) * sgn(j) * self.gram[i / 2][j / 2]).collect())
            .collect();
        Signature::from_gram(names, gram).expect("doubled Gram matrix is symmetric")
    }

    pub fn from_signature(sig: &Signature) -> Self {
        let gram = sig.gens().map(|a| sig.gens().map(|b| sig.gram(a, b)).collect()).collect();
        Lattice { basis: sig.names().to_vec(), gram }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Config {
    Signature(Signature),
    Lattice(Lattice),
}

impl Config {
    /// The signature used by the free-algebra commands; a lattice is read
    /// as the signature with `N = −gram`.
    pub fn signature(&self) -> Result<Signature, ConfigError> {
        match self {
            Config::Signature(s) => Ok(s.clone()),
            Config::Lattice(l) => Ok(l.signature()?),
        }
    }

    pub fn lattice(&self) -> Lattice {
        match self {
            Config::Signature(s) => Lattice::from_signature(s),
            Config::Lattice(l) => l.clone(),
        }
    }
}

pub fn load_config(text: &str) -> Result<Config, ConfigError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    if value.get("gram").is_some() {
        let cfg: LatticeConfig = serde_json::from_value(value).map_err(|e| ConfigError::Parse(e.to_string()))?;
        let mut gram = Vec::with_capacity(cfg.gram.len());
        for (i, row) in cfg.gram.iter().enumerate() {
            let mut r = Vec::with_capacity(row.len());
            for (j, x) in row.iter().enumerate() {
                r.push(x.as_i64().ok_or(SignatureError::EntryOutOfRange(i, j))?);
            }
            gram.push(r);
        }
        return Ok(Config::Lattice(Lattice::new(cfg.basis, gram)?));
    }
    let cfg: SignatureConfig = serde_json::from_value(value).map_err(|e| ConfigError::Parse(e.to_string()))?;
    Ok(Config::Signature(Signature::from_config(&cfg)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_both_forms() {
        let s = load_config(r#"{"generators": ["a"], "locality": [[-1]]}"#).unwrap();
        assert_eq!(s.signature().unwrap().locality(crate::signature::Gen(0), crate::signature::Gen(0)), -1);
        let l = load_config(r#"{"basis": ["a", "b"], "gram": [[2, -1], [-1, 2]]}"#).unwrap();
        let sig = l.signature().unwrap();
        assert_eq!(sig.gram(crate::signature::Gen(0), crate::signature::Gen(1)), -1);
        assert_eq!(l.lattice().gram, vec![vec![2, -1], vec![-1, 2]]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(load_config("{"), Err(ConfigError::Parse(_))));
        assert!(matches!(load_config(r#"{"generators": ["a"]}"#), Err(ConfigError::Parse(_))));
        assert!(matches!(
            load_config(r#"{"basis": ["a", "b"], "gram": [[2, 1], [0, 2]]}"#),
            Err(ConfigError::Invalid(_))
        ));
        assert!(matches!(
            load_config(r#"{"generators": ["a"], "locality": [[1e30]]}"#),
            Err(ConfigError::Invalid(_))
        ));
    }

    #[test]
    fn doubled_lattice() {
        let l = Lattice::new(vec!["a"], vec![vec![1]]).unwrap();
        let d = l.doubled();
        assert_eq!(d.names(), &["a".to_string(), "abar".to_string()]);
        let g = |i, j| d.gram(crate::signature::Gen(i), crate::signature::Gen(j));
        assert_eq!((g(0, 0), g(0, 1), g(1, 1)), (1, -1, 1));
    }
}
