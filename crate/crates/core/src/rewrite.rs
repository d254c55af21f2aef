//! Rewriting words to combinations of basic words.
//!
//! Two kinds of rules act on a word `a₁(n₁)…a_k(n_k)`:
//! a word dies outright when some tail sits below its degree floor, and
//! an adjacent pair whose mode gap is too large is replaced by the
//! locality expansion solved for its leading term. Processing words in
//! decreasing order of the termination measure expands each word once.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::freeva::{deg2_of, has_dead_tail, weight_of, FreeElement, Letter, Word};
use crate::signature::{binomial, sign, Scalar, Signature};

pub fn q_vanishes(sig: &Signature, w: &Word) -> bool {
    has_dead_tail(sig, &w.0)
}

/// `Σ_{i>j} N(a_j,a_i) − Σ_{i>j+1} N(a_{j+1},a_i)`, the largest gap
/// `n_j − n_{j+1}` a reduced pair may have.
pub fn gap_bound(sig: &Signature, letters: &[Letter], j: usize) -> i64 {
    let a = letters[j].gen;
    let b = letters[j + 1].gen;
    let first: i64 = letters[j + 1..].iter().map(|l| sig.locality(a, l.gen)).sum();
    let second: i64 = letters[j + 2..].iter().map(|l| sig.locality(b, l.gen)).sum();
    first - second
}

fn is_redex_at(sig: &Signature, letters: &[Letter], j: usize) -> bool {
    let gap = letters[j].mode - letters[j + 1].mode;
    let m = gap_bound(sig, letters, j);
    gap > m || (gap == m && letters[j].gen > letters[j + 1].gen)
}

/// Leftmost position `j` (0-based) where the pair `j, j+1` can be rewritten.
pub fn find_r_redex(sig: &Signature, w: &Word) -> Option<usize> {
    (0..w.len().saturating_sub(1)).find(|&j| is_redex_at(sig, &w.0, j))
}

pub fn find_r_redex_rightmost(sig: &Signature, w: &Word) -> Option<usize> {
    (0..w.len().saturating_sub(1)).rev().find(|&j| is_redex_at(sig, &w.0, j))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RewriteError {
    #[error("position {0} is not a rewritable pair")]
    NotARedex(usize),
    #[error("rewriting exceeded the budget of {0} steps")]
    BudgetExceeded(u64),
    #[error("word is not basic")]
    NotBasic,
}

/// Replace the pair at `j`, `j+1` by its locality expansion. Words that
/// die by the degree floor are never produced.
pub fn apply_r(sig: &Signature, w: &Word, j: usize) -> Result<FreeElement, RewriteError> {
    if j + 1 >= w.len() || !is_redex_at(sig, &w.0, j) {
        return Err(RewriteError::NotARedex(j));
    }
    Ok(expand_pair(sig, w, j).0)
}

/// Expansion of the pair at `j` plus the number of candidate words the
/// floor check discarded.
fn expand_pair(sig: &Signature, w: &Word, j: usize) -> (FreeElement, u64) {
    let letters = &w.0;
    let Letter { gen: a, mode: na } = letters[j];
    let Letter { gen: b, mode: nb } = letters[j + 1];
    let rest = &letters[j + 2..];
    let n = sig.locality(a, b);
    let koszul = sign(sig.parity(a) as i64 * sig.parity(b) as i64);

    let rest_w = weight_of(sig, rest);
    let rest_d2 = deg2_of(sig, rest);
    let mut out = FreeElement::zero();
    let mut kills = 0u64;
    let mut emit = |first: Letter, second: Letter, c: BigInt| {
        if c.is_zero() {
            return;
        }
        let mut v = Vec::with_capacity(letters.len());
        v.extend_from_slice(&letters[..j]);
        v.push(first);
        v.push(second);
        v.extend_from_slice(rest);
        if has_dead_tail(sig, &v) {
            kills += 1;
            return;
        }
        out.add_term(Word(v), Scalar::from_integer(c));
    };

    // −Σ_{s≥1} (−1)^s C(N,s) a(n_a − s) b(n_b + s)
    // The tail b(n_b + s)·rest must stay at or above its floor.
    let b_tail_w = &sig.unit_weight(b) + &rest_w;
    let b_tail_d2 = sig.deg2(b) - 2 * nb - 2 + rest_d2;
    let mut s_hi = (b_tail_d2 - sig.d2_min(&b_tail_w)).div_euclid(2);
    if n >= 0 {
        s_hi = s_hi.min(n);
    }
    for s in 1..=s_hi {
        let c = -binomial(n, s) * BigInt::from(sign(s));
        emit(Letter::new(a, na - s), Letter::new(b, nb + s), c);
    }

    // (−1)^{p(a)p(b)} Σ_{s≤N} (−1)^s C(N,N−s) b(n_b + s) a(n_a − s)
    // The tail a(n_a − s)·rest must stay at or above its floor.
    let a_tail_w = &sig.unit_weight(a) + &rest_w;
    let a_tail_d2 = sig.deg2(a) - 2 * na - 2 + rest_d2;
    let gap = sig.d2_min(&a_tail_w) - a_tail_d2;
    let mut s_lo = -((-gap).div_euclid(2));
    if n >= 0 {
        s_lo = s_lo.max(0);
    }
    for s in s_lo..=n {
        let c = binomial(n, n - s) * BigInt::from(koszul * sign(s));
        emit(Letter::new(b, nb + s), Letter::new(a, na - s), c);
    }
    (out, kills)
}

/// Tail values `d(w_i) = −Σ_{l≥i} n_l + Σ_{i≤l<l'} N(a_l,a_l')` together
/// with the letters, the data the rewriting order is built from.
pub fn measure(sig: &Signature, w: &Word) -> (Vec<i64>, Vec<crate::signature::Gen>) {
    let letters = &w.0;
    let k = letters.len();
    let mut d = vec![0i64; k];
    let mut acc = 0i64;
    for i in (0..k).rev() {
        let cross: i64 = letters[i + 1..].iter().map(|l| sig.locality(letters[i].gen, l.gen)).sum();
        acc += -letters[i].mode + cross;
        d[i] = acc;
    }
    (d, w.gens())
}

/// Whether a word belongs to the basis: nonpositive-mode tail ending and
/// every gap within its bound.
pub fn is_basic(sig: &Signature, w: &Word) -> bool {
    let letters = &w.0;
    if letters.last().is_some_and(|l| l.mode >= 0) {
        return false;
    }
    (0..letters.len().saturating_sub(1)).all(|i| {
        let gap = letters[i].mode - letters[i + 1].mode;
        let mut bound = gap_bound(sig, letters, i);
        if letters[i].gen > letters[i + 1].gen {
            bound -= 1;
        }
        gap <= bound
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteOutcome {
    pub result: FreeElement,
    pub steps: u64,
    pub q_kills: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RedexStrategy {
    #[default]
    Leftmost,
    Rightmost,
}

#[derive(Debug, Clone, Copy)]
pub struct Rewriter {
    pub strategy: RedexStrategy,
    pub step_budget: u64,
}

impl Default for Rewriter {
    fn default() -> Self {
        Rewriter { strategy: RedexStrategy::Leftmost, step_budget: 50_000_000 }
    }
}

type OrderKey = (i64, Vec<crate::signature::Gen>, Word);

fn order_key(sig: &Signature, w: Word) -> OrderKey {
    let (d, gens) = measure(sig, &w);
    (d.iter().sum(), gens, w)
}

impl Rewriter {
    pub fn with_strategy(strategy: RedexStrategy) -> Self {
        Rewriter { strategy, ..Rewriter::default() }
    }

    /// Every rule application strictly lowers `(Σ d(w_i), letters)`, so
    /// words are expanded from the top of that order down and each word
    /// is visited once.
    pub fn normal_form(&self, sig: &Signature, x: &FreeElement) -> Result<RewriteOutcome, RewriteError> {
        let mut pending: BTreeMap<OrderKey, Scalar> = BTreeMap::new();
        let mut q_kills = 0u64;
        let mut steps = 0u64;
        for (w, c) in x.iter() {
            if q_vanishes(sig, w) {
                q_kills += 1;
                continue;
            }
            accumulate(&mut pending, order_key(sig, w.clone()), c.clone());
        }
        let mut result = FreeElement::zero();
        while let Some(((_, _, w), c)) = pending.pop_last() {
            let redex = match self.strategy {
                RedexStrategy::Leftmost => find_r_redex(sig, &w),
                RedexStrategy::Rightmost => find_r_redex_rightmost(sig, &w),
            };
            let Some(j) = redex else {
                result.add_term(w, c);
                continue;
            };
            steps += 1;
            if steps > self.step_budget {
                return Err(RewriteError::BudgetExceeded(self.step_budget));
            }
            let (expansion, kills) = expand_pair(sig, &w, j);
            q_kills += kills;
            for (u, d) in expansion.into_terms() {
                accumulate(&mut pending, order_key(sig, u), d * &c);
            }
        }
        Ok(RewriteOutcome { result, steps, q_kills })
    }
}

fn accumulate(pending: &mut BTreeMap<OrderKey, Scalar>, key: OrderKey, c: Scalar) {
    use std::collections::btree_map::Entry;
    match pending.entry(key) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Normal form with the default leftmost strategy.
pub fn normal_form(sig: &Signature, x: &FreeElement) -> RewriteOutcome {
    Rewriter::default()
        .normal_form(sig, x)
        .expect("rewriting terminates within the default budget")
}

/// Shorthand for the reduced element.
pub fn reduce(sig: &Signature, x: &FreeElement) -> FreeElement {
    normal_form(sig, x).result
}
