//! Basic words via colored partitions.
//!
//! A basic word of weight `λ` corresponds to a partition of
//! `(deg2 − (λ|λ)) / 2` whose parts are colored by generators, with at
//! most `s_a` parts of color `a` where `s_a` is the multiplicity of `a`
//! in `λ`.

use std::fmt;

use crate::freeva::{Letter, Word};
use crate::rewrite::is_basic;
use crate::signature::{Gen, Signature, Weight};

/// Parts in nonincreasing order; equal parts in nondecreasing color order.
/// Only positive parts are stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColoredPartition(pub Vec<(u64, Gen)>);

impl ColoredPartition {
    pub fn total(&self) -> u64 {
        self.0.iter().map(|p| p.0).sum()
    }

    pub fn count(&self, g: Gen) -> usize {
        self.0.iter().filter(|p| p.1 == g).count()
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> impl fmt::Display + 'a {
        PartitionDisplay { sig, p: self }
    }
}

struct PartitionDisplay<'a> {
    sig: &'a Signature,
    p: &'a ColoredPartition,
}

impl fmt::Display for PartitionDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (part, g)) in self.p.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}_{}", part, self.sig.name(*g))?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BasisError {
    #[error("word is not basic")]
    NotBasic,
    #[error("weight has a negative coefficient")]
    NegativeWeight,
    #[error("color {0} is used more often than the weight allows")]
    TooManyParts(String),
}

fn sorted_letters(sig: &Signature, lambda: &Weight) -> Vec<Gen> {
    let mut v = Vec::new();
    for g in sig.gens() {
        for _ in 0..lambda.count(g) {
            v.push(g);
        }
    }
    v
}

/// Modes from the right: `m_i = Σ_{j>i} N(a_i,a_j) − 1 − parts_i`.
fn modes_from_parts(sig: &Signature, gens: &[Gen], parts: &[i64]) -> Word {
    let k = gens.len();
    let mut letters = Vec::with_capacity(k);
    for i in 0..k {
        let cross: i64 = gens[i + 1..].iter().map(|&b| sig.locality(gens[i], b)).sum();
        letters.push(Letter::new(gens[i], cross - 1 - parts[i]));
    }
    Word(letters)
}

/// The unique basic word of weight `λ` with minimal degree.
pub fn w_min(sig: &Signature, lambda: &Weight) -> Result<Word, BasisError> {
    if !lambda.is_nonnegative() {
        return Err(BasisError::NegativeWeight);
    }
    let gens = sorted_letters(sig, lambda);
    Ok(modes_from_parts(sig, &gens, &vec![0; gens.len()]))
}

/// Excess of each letter over the minimal word, as a colored partition.
pub fn eta(sig: &Signature, w: &Word) -> Result<ColoredPartition, BasisError> {
    if !is_basic(sig, w) {
        return Err(BasisError::NotBasic);
    }
    let letters = &w.0;
    let mut parts = Vec::new();
    for (i, l) in letters.iter().enumerate() {
        let cross: i64 = letters[i + 1..].iter().map(|r| sig.locality(l.gen, r.gen)).sum();
        let n = cross - 1 - l.mode;
        debug_assert!(n >= 0);
        if n > 0 {
            parts.push((n as u64, l.gen));
        }
    }
    Ok(ColoredPartition(parts))
}

/// Basic word of weight `λ` whose partition is `π`.
pub fn eta_inverse(sig: &Signature, lambda: &Weight, pi: &ColoredPartition) -> Result<Word, BasisError> {
    if !lambda.is_nonnegative() {
        return Err(BasisError::NegativeWeight);
    }
    let mut seq: Vec<(u64, Gen)> = pi.0.iter().copied().filter(|p| p.0 > 0).collect();
    for g in sig.gens() {
        let used = seq.iter().filter(|p| p.1 == g).count() as i64;
        let avail = lambda.count(g);
        if used > avail {
            return Err(BasisError::TooManyParts(sig.name(g).to_string()));
        }
        for _ in used..avail {
            seq.push((0, g));
        }
    }
    seq.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
    let gens: Vec<Gen> = seq.iter().map(|p| p.1).collect();
    let parts: Vec<i64> = seq.iter().map(|p| p.0 as i64).collect();
    Ok(modes_from_parts(sig, &gens, &parts))
}

/// Colored partitions of `total` with at most `caps[a]` parts of color `a`.
pub fn colored_partitions(caps: &[i64], total: u64) -> Vec<ColoredPartition> {
    let mut out = Vec::new();
    let mut counts = vec![0i64; caps.len()];
    let mut cur = Vec::new();
    walk(caps, total, u64::MAX, 0, &mut counts, &mut cur, &mut |p| out.push(ColoredPartition(p.to_vec())));
    out
}

fn walk(
    caps: &[i64],
    remaining: u64,
    prev_part: u64,
    prev_color: usize,
    counts: &mut [i64],
    cur: &mut Vec<(u64, Gen)>,
    visit: &mut dyn FnMut(&[(u64, Gen)]),
) {
    if remaining == 0 {
        visit(cur);
        return;
    }
    let top = remaining.min(prev_part);
    for part in (1..=top).rev() {
        let first_color = if part == prev_part { prev_color } else { 0 };
        for color in first_color..caps.len() {
            if counts[color] >= caps[color] {
                continue;
            }
            counts[color] += 1;
            cur.push((part, Gen(color as u16)));
            walk(caps, remaining - part, part, color, counts, cur, visit);
            cur.pop();
            counts[color] -= 1;
        }
    }
}

fn partition_total(sig: &Signature, lambda: &Weight, deg2: i64) -> Option<u64> {
    if !lambda.is_nonnegative() {
        return None;
    }
    let diff = deg2 - sig.d2_min(lambda);
    if diff < 0 || diff % 2 != 0 {
        return None;
    }
    Some((diff / 2) as u64)
}

/// All basic words of weight `λ` and doubled degree `deg2`.
pub fn enumerate_basis(sig: &Signature, lambda: &Weight, deg2: i64) -> Vec<Word> {
    let Some(total) = partition_total(sig, lambda, deg2) else {
        return Vec::new();
    };
    colored_partitions(&lambda.0, total)
        .iter()
        .map(|p| eta_inverse(sig, lambda, p).expect("partition respects the color caps"))
        .collect()
}

/// Number of basic words of weight `λ` and doubled degree `deg2`.
pub fn dim_component(sig: &Signature, lambda: &Weight, deg2: i64) -> u64 {
    let Some(total) = partition_total(sig, lambda, deg2) else {
        return 0;
    };
    let mut n = 0u64;
    let mut counts = vec![0i64; lambda.0.len()];
    walk(&lambda.0, total, u64::MAX, 0, &mut counts, &mut Vec::new(), &mut |_| n += 1);
    n
}
