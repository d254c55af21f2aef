//! The lattice vertex algebra on the lattice spanned by the generators,
//! realized on states `h₁(−k₁)…h_r(−k_r) v_λ`.
//!
//! Products are computed from the vacuum-vector formula
//! `v_α ⊛_{−(α|β)−k−1} v_β = ε(α,β) (D − β(−1))^{(k)} v_{α+β}` and the
//! commutation of Heisenberg modes with products; no vertex operator
//! exponentials are built.

mod product;
mod rank;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::freeva::fmt_linear;
use crate::signature::{scalar, Gen, Scalar, Signature, Weight};

pub use product::FockSpace;
pub use rank::rank_of;

/// A PBW monomial: creation letters `(level, generator)` sorted ascending
/// and a charge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PBWState {
    pub heis: Vec<(i64, Gen)>,
    pub charge: Weight,
}

impl PBWState {
    pub fn vacuum_of(charge: Weight) -> Self {
        PBWState { heis: Vec::new(), charge }
    }

    pub fn level_sum(&self) -> i64 {
        self.heis.iter().map(|h| h.0).sum()
    }

    pub fn deg2(&self, sig: &Signature) -> i64 {
        sig.d2_min(&self.charge) + 2 * self.level_sum()
    }

    pub fn with_letter(&self, level: i64, g: Gen) -> PBWState {
        let mut heis = self.heis.clone();
        let pos = heis.partition_point(|&h| h < (level, g));
        heis.insert(pos, (level, g));
        PBWState { heis, charge: self.charge.clone() }
    }

    pub fn without(&self, idx: usize) -> PBWState {
        let mut heis = self.heis.clone();
        heis.remove(idx);
        PBWState { heis, charge: self.charge.clone() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FockElement {
    terms: BTreeMap<PBWState, Scalar>,
}

impl FockElement {
    pub fn zero() -> Self {
        FockElement::default()
    }

    pub fn from_state(s: PBWState) -> Self {
        let mut x = FockElement::zero();
        x.add_term(s, Scalar::one());
        x
    }

    /// `v_λ`.
    pub fn vacuum_vector(charge: Weight) -> Self {
        FockElement::from_state(PBWState::vacuum_of(charge))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PBWState, &Scalar)> {
        self.terms.iter()
    }

    pub fn states(&self) -> impl Iterator<Item = &PBWState> {
        self.terms.keys()
    }

    pub fn coeff(&self, s: &PBWState) -> Scalar {
        self.terms.get(s).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, s: PBWState, c: Scalar) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(s) {
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

    pub fn add_scaled(&mut self, other: &FockElement, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (s, d) in &other.terms {
            self.add_term(s.clone(), d * c);
        }
    }

    /// Add `coef · g(−level) x` for every term of `x`.
    pub fn add_created(&mut self, x: &FockElement, level: i64, g: Gen, coef: &Scalar) {
        if coef.is_zero() {
            return;
        }
        for (s, d) in &x.terms {
            self.add_term(s.with_letter(level, g), d * coef);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> FockElement {
        let mut out = FockElement::zero();
        out.add_scaled(self, c);
        out
    }

    /// Homogeneous pieces keyed by (charge, deg2).
    pub fn components(&self, sig: &Signature) -> Vec<(Weight, i64, FockElement)> {
        let mut map: BTreeMap<(Weight, i64), FockElement> = BTreeMap::new();
        for (s, c) in &self.terms {
            map.entry((s.charge.clone(), s.deg2(sig))).or_default().add_term(s.clone(), c.clone());
        }
        map.into_iter().map(|((w, d), x)| (w, d, x)).collect()
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> impl fmt::Display + 'a {
        FockDisplay { sig, x: self }
    }
}

impl std::ops::Add<&FockElement> for &FockElement {
    type Output = FockElement;
    fn add(self, rhs: &FockElement) -> FockElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::one());
        out
    }
}

impl std::ops::Sub<&FockElement> for &FockElement {
    type Output = FockElement;
    fn sub(self, rhs: &FockElement) -> FockElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Scalar::one());
        out
    }
}

pub fn fmt_state(sig: &Signature, s: &PBWState) -> String {
    let mut out = String::new();
    for &(level, g) in s.heis.iter().rev() {
        out.push_str(&format!("{}({})", sig.name(g), -level));
    }
    if !out.is_empty() {
        out.push(' ');
    }
    out.push_str(&format!("v[{}]", sig.fmt_weight(&s.charge)));
    out
}

struct FockDisplay<'a> {
    sig: &'a Signature,
    x: &'a FockElement,
}

impl fmt::Display for FockDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<_> = self.x.iter().collect();
        terms.sort_by_cached_key(|(s, _)| (s.charge.total(), s.charge.clone(), s.level_sum(), (*s).clone()));
        f.write_str(&fmt_linear(terms, |s| fmt_state(self.sig, s)))
    }
}

/// Cocycle value `ε(λ,μ)`: bimultiplicative, trivial on pairs `a ≤ b` of
/// generators, and `ε(b,a) = (−1)^{(a|a)(b|b)+(a|b)}` for `a < b`.
pub fn epsilon(sig: &Signature, lambda: &Weight, mu: &Weight) -> i64 {
    let mut exp = 0i64;
    for b in sig.gens() {
        let lb = lambda.count(b);
        if lb == 0 {
            continue;
        }
        for a in sig.gens().take(b.index()) {
            let ma = mu.count(a);
            if ma == 0 {
                continue;
            }
            let e = sig.gram(a, a) * sig.gram(b, b) + sig.gram(a, b);
            exp += (e.rem_euclid(2)) * (lb.rem_euclid(2)) * (ma.rem_euclid(2));
        }
    }
    if exp % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Mode `n` of the Heisenberg field of `Σ_b coeffs[b]·b`.
pub fn heis_act_vec(sig: &Signature, coeffs: &[Scalar], n: i64, x: &FockElement) -> FockElement {
    let mut out = FockElement::zero();
    for (s, c) in x.iter() {
        if n < 0 {
            for (b, f) in coeffs.iter().enumerate() {
                if !f.is_zero() {
                    out.add_term(s.with_letter(-n, Gen(b as u16)), c * f);
                }
            }
        } else if n == 0 {
            let mut val = Scalar::zero();
            for (b, f) in coeffs.iter().enumerate() {
                val += f * scalar(sig.pairing_gen(Gen(b as u16), &s.charge));
            }
            out.add_term(s.clone(), c * val);
        } else {
            for (idx, &(level, g)) in s.heis.iter().enumerate() {
                if level != n {
                    continue;
                }
                let mut val = Scalar::zero();
                for (b, f) in coeffs.iter().enumerate() {
                    val += f * scalar(sig.gram(Gen(b as u16), g));
                }
                out.add_term(s.without(idx), c * val * scalar(n));
            }
        }
    }
    out
}

/// Mode `n` of the Heisenberg field of a generator.
pub fn heis_act(sig: &Signature, b: Gen, n: i64, x: &FockElement) -> FockElement {
    let mut coeffs = vec![Scalar::zero(); sig.len()];
    coeffs[b.index()] = Scalar::one();
    heis_act_vec(sig, &coeffs, n, x)
}

/// `β(−1)` for a lattice vector `β`.
pub fn weight_creation(beta: &Weight, x: &FockElement) -> FockElement {
    let mut out = FockElement::zero();
    for (s, c) in x.iter() {
        for (b, &f) in beta.0.iter().enumerate() {
            if f != 0 {
                out.add_term(s.with_letter(1, Gen(b as u16)), c * scalar(f));
            }
        }
    }
    out
}

/// Translation operator: `D v_λ = λ(−1) v_λ`, `[D, h(−k)] = k h(−k−1)`.
pub fn d_act(sig: &Signature, x: &FockElement) -> FockElement {
    let mut out = FockElement::zero();
    for (s, c) in x.iter() {
        for (idx, &(level, g)) in s.heis.iter().enumerate() {
            let raised = s.without(idx).with_letter(level + 1, g);
            out.add_term(raised, c * scalar(level));
        }
        for b in sig.gens() {
            let lb = s.charge.count(b);
            if lb != 0 {
                out.add_term(s.with_letter(1, b), c * scalar(lb));
            }
        }
    }
    out
}
