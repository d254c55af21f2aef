//! Words `a₁(n₁)…a_k(n_k)·1` and rational combinations of them, modelling
//! the free vertex algebra generated by a [`Signature`].
//!
//! A word stands for the right-normed monomial
//! `a₁ ⊛_{n₁} (a₂ ⊛_{n₂} ( … (a_k ⊛_{n_k} 1)))`. Products of arbitrary
//! elements are expanded back into words with the associativity identity;
//! every infinite sum it produces is cut off by the degree floor: a
//! homogeneous component of weight `μ` and doubled degree below `(μ|μ)`
//! vanishes.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::signature::{binomial, fmt_scalar, scalar, sign, Gen, Scalar, Signature, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: Gen,
    pub mode: i64,
}

impl Letter {
    pub fn new(gen: Gen, mode: i64) -> Self {
        Letter { gen, mode }
    }
}

/// A right-normed monomial; the empty word is the vacuum.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn vacuum() -> Self {
        Word(Vec::new())
    }

    pub fn from_pairs(pairs: &[(Gen, i64)]) -> Self {
        Word(pairs.iter().map(|&(g, n)| Letter::new(g, n)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn gens(&self) -> Vec<Gen> {
        self.0.iter().map(|l| l.gen).collect()
    }

    pub fn mode_sum(&self) -> i64 {
        self.0.iter().map(|l| l.mode).sum()
    }

    pub fn tail(&self, j: usize) -> Word {
        Word(self.0[j..].to_vec())
    }

    pub fn prepend(&self, l: Letter) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(l);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    /// A word whose last mode is nonnegative represents zero.
    pub fn is_candidate_nonzero(&self) -> bool {
        self.0.last().is_none_or(|l| l.mode < 0)
    }
}

pub fn weight_of(sig: &Signature, letters: &[Letter]) -> Weight {
    let mut w = sig.zero_weight();
    for l in letters {
        w.add_gen(l.gen, 1);
    }
    w
}

pub fn deg2_of(sig: &Signature, letters: &[Letter]) -> i64 {
    letters.iter().map(|l| sig.deg2(l.gen) - 2 * l.mode - 2).sum()
}

/// Weight, doubled degree and parity of a word.
pub fn word_grade(sig: &Signature, w: &Word) -> (Weight, i64, u8) {
    let wt = weight_of(sig, &w.0);
    let p = sig.weight_parity(&wt);
    (wt, deg2_of(sig, &w.0), p)
}

/// True iff some tail `a_j(n_j)…a_k(n_k)` sits strictly below the degree
/// floor of its weight, which forces the word to vanish.
pub fn has_dead_tail(sig: &Signature, letters: &[Letter]) -> bool {
    if letters.last().is_some_and(|l| l.mode >= 0) {
        return true;
    }
    // Walk tails from the right, tracking (λ|λ) incrementally.
    let mut tail_deg2 = 0i64;
    let mut tail_norm = 0i64;
    for (idx, l) in letters.iter().enumerate().rev() {
        let cross: i64 = letters[idx + 1..].iter().map(|r| sig.gram(l.gen, r.gen)).sum();
        tail_norm += sig.gram(l.gen, l.gen) + 2 * cross;
        tail_deg2 += sig.deg2(l.gen) - 2 * l.mode - 2;
        if tail_deg2 < tail_norm {
            return true;
        }
    }
    false
}

/// Finite rational combination of words.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FreeElement {
    terms: BTreeMap<Word, Scalar>,
}

impl FreeElement {
    pub fn zero() -> Self {
        FreeElement::default()
    }

    pub fn vacuum() -> Self {
        FreeElement::from_word(Word::vacuum())
    }

    pub fn from_word(w: Word) -> Self {
        let mut x = FreeElement::zero();
        x.add_term(w, Scalar::one());
        x
    }

    pub fn generator(g: Gen) -> Self {
        FreeElement::from_word(Word(vec![Letter::new(g, -1)]))
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

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FreeElement, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (w, d) in &other.terms {
            self.add_term(w.clone(), d * c);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> FreeElement {
        let mut out = FreeElement::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn into_terms(self) -> BTreeMap<Word, Scalar> {
        self.terms
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, Scalar)>) -> Self {
        let mut x = FreeElement::zero();
        for (w, c) in terms {
            x.add_term(w, c);
        }
        x
    }

    /// Split into homogeneous components keyed by (weight, deg2).
    pub fn components(&self, sig: &Signature) -> Vec<Component> {
        let mut map: BTreeMap<(Weight, i64), FreeElement> = BTreeMap::new();
        for (w, c) in &self.terms {
            let key = (weight_of(sig, &w.0), deg2_of(sig, &w.0));
            map.entry(key).or_default().add_term(w.clone(), c.clone());
        }
        map.into_iter()
            .map(|((weight, deg2), elem)| Component { weight, deg2, elem })
            .collect()
    }

    /// Terms in the canonical printing order: weight, then doubled degree,
    /// then the letters.
    pub fn canonical_terms(&self, sig: &Signature) -> Vec<(&Word, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_cached_key(|(w, _)| canonical_key(sig, w));
        v
    }
}

fn canonical_key(sig: &Signature, w: &Word) -> (i64, Weight, i64, Word) {
    let wt = weight_of(sig, &w.0);
    (wt.total(), wt, deg2_of(sig, &w.0), w.clone())
}

impl std::ops::Add<&FreeElement> for &FreeElement {
    type Output = FreeElement;
    fn add(self, rhs: &FreeElement) -> FreeElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::one());
        out
    }
}

impl std::ops::Sub<&FreeElement> for &FreeElement {
    type Output = FreeElement;
    fn sub(self, rhs: &FreeElement) -> FreeElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Scalar::one());
        out
    }
}

/// Homogeneous piece of an element together with its grading.
#[derive(Debug, Clone)]
pub struct Component {
    pub weight: Weight,
    pub deg2: i64,
    pub elem: FreeElement,
}

/// `D` applied once: every letter contributes `-n · (n ↦ n-1)`.
pub fn d_once(x: &FreeElement) -> FreeElement {
    let mut out = FreeElement::zero();
    for (w, c) in x.iter() {
        for i in 0..w.len() {
            let n = w.0[i].mode;
            if n == 0 {
                continue;
            }
            let mut v = w.0.clone();
            v[i].mode -= 1;
            if v.last().is_some_and(|l| l.mode >= 0) {
                continue;
            }
            out.add_term(Word(v), c * scalar(-n));
        }
    }
    out
}

/// Divided power `D^{(k)} x = Dᵏx / k!`.
pub fn d_divided(x: &FreeElement, k: u32) -> FreeElement {
    let mut y = x.clone();
    let mut fact = BigInt::one();
    for i in 1..=k {
        y = d_once(&y);
        fact *= BigInt::from(i);
    }
    y.scaled(&Scalar::new(BigInt::one(), fact))
}

/// `a ⊛_n x` for a generator `a`: prefix every word with `a(n)`, dropping
/// words that become zero by the degree floor.
pub fn prepend_gen(sig: &Signature, a: Gen, n: i64, x: &FreeElement) -> FreeElement {
    let mut out = FreeElement::zero();
    for (w, c) in x.iter() {
        let nw = w.prepend(Letter::new(a, n));
        if has_dead_tail(sig, &nw.0) {
            continue;
        }
        out.add_term(nw, c.clone());
    }
    out
}

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// General product `u ⊛_m v` of two elements of the free algebra. The
/// result is a combination of words, not necessarily reduced.
pub fn product_free(sig: &Signature, u: &FreeElement, m: i64, v: &FreeElement) -> FreeElement {
    let comps = v.components(sig);
    let mut out = FreeElement::zero();
    for (w, c) in u.iter() {
        for comp in &comps {
            let r = word_times(sig, &w.0, m, comp);
            out.add_scaled(&r, c);
        }
    }
    out
}

fn component_of(sig: &Signature, weight: Weight, deg2: i64, elem: FreeElement) -> Component {
    debug_assert!(elem.words().all(|w| deg2_of(sig, &w.0) == deg2));
    Component { weight, deg2, elem }
}

/// `ρ(letters) ⊛_m v` for a homogeneous `v`.
fn word_times(sig: &Signature, letters: &[Letter], m: i64, v: &Component) -> FreeElement {
    if v.elem.is_zero() {
        return FreeElement::zero();
    }
    let Some((&head, rest)) = letters.split_first() else {
        return if m == -1 { v.elem.clone() } else { FreeElement::zero() };
    };
    let lw = weight_of(sig, letters);
    let ld2 = deg2_of(sig, letters);
    let total_w = &lw + &v.weight;
    let total_d2 = ld2 + v.deg2 - 2 * m - 2;
    if total_d2 < sig.d2_min(&total_w) {
        return FreeElement::zero();
    }
    let (a, n1) = (head.gen, head.mode);

    if rest.is_empty() {
        // a(n)·1 = D^{(j)} a with j = -n-1, and (D^{(j)}a) ⊛_m = (-1)^j C(m,j) a ⊛_{m-j}.
        if n1 >= 0 {
            return FreeElement::zero();
        }
        let j = -n1 - 1;
        let c = binomial(m, j) * BigInt::from(sign(j));
        if c.is_zero() {
            return FreeElement::zero();
        }
        return prepend_gen(sig, a, m - j, &v.elem).scaled(&Scalar::from_integer(c));
    }

    let rw = weight_of(sig, rest);
    let rd2 = deg2_of(sig, rest);
    let koszul = sign(sig.parity(a) as i64 * sig.weight_parity(&rw) as i64);
    let mut out = FreeElement::zero();

    // Σ_{s≥0} (-1)^s C(n1,s) a ⊛_{n1-s} (rest ⊛_{m+s} v)
    let inner_w = &rw + &v.weight;
    let inner_floor = sig.d2_min(&inner_w);
    let mut s_hi = floor_div(rd2 + v.deg2 - 2 * m - 2 - inner_floor, 2);
    if n1 >= 0 {
        s_hi = s_hi.min(n1);
    }
    for s in 0..=s_hi {
        let c = binomial(n1, s) * BigInt::from(sign(s));
        if c.is_zero() {
            continue;
        }
        let inner = word_times(sig, rest, m + s, v);
        if inner.is_zero() {
            continue;
        }
        let r = prepend_gen(sig, a, n1 - s, &inner);
        out.add_scaled(&r, &Scalar::from_integer(c));
    }

    // -(-1)^{p(a)p(rest)} Σ_{s≤n1} (-1)^s C(n1,n1-s) rest ⊛_{m+s} (a ⊛_{n1-s} v)
    let av_w = &sig.unit_weight(a) + &v.weight;
    let av_floor = sig.d2_min(&av_w);
    // deg2(a ⊛_{n1-s} v) = deg2(a) + deg2(v) - 2(n1-s) - 2 ≥ floor
    let s_lo = ceil_div(av_floor - sig.deg2(a) - v.deg2 + 2 * n1 + 2, 2);
    for s in s_lo..=n1 {
        let c = binomial(n1, n1 - s) * BigInt::from(-koszul * sign(s));
        if c.is_zero() {
            continue;
        }
        let av = prepend_gen(sig, a, n1 - s, &v.elem);
        if av.is_zero() {
            continue;
        }
        let av_d2 = sig.deg2(a) + v.deg2 - 2 * (n1 - s) - 2;
        let comp = component_of(sig, av_w.clone(), av_d2, av);
        let r = word_times(sig, rest, m + s, &comp);
        out.add_scaled(&r, &Scalar::from_integer(c));
    }
    out
}

/// Vertex monomial with arbitrary parenthesization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum VertexExpr {
    Vacuum,
    Generator(Gen),
    Product(Box<VertexExpr>, i64, Box<VertexExpr>),
}

impl VertexExpr {
    pub fn product(l: VertexExpr, m: i64, r: VertexExpr) -> Self {
        VertexExpr::Product(Box::new(l), m, Box::new(r))
    }

    /// Right-normed tree of a word: `a₁ ⊛_{n₁} ( … (a_k ⊛_{n_k} vac))`.
    pub fn from_word(w: &Word) -> Self {
        w.0.iter().rev().fold(VertexExpr::Vacuum, |acc, l| {
            VertexExpr::product(VertexExpr::Generator(l.gen), l.mode, acc)
        })
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> impl fmt::Display + 'a {
        ExprDisplay { sig, expr: self }
    }
}

struct ExprDisplay<'a> {
    sig: &'a Signature,
    expr: &'a VertexExpr,
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.expr {
            VertexExpr::Vacuum => write!(f, "vac"),
            VertexExpr::Generator(g) => write!(f, "{}", self.sig.name(*g)),
            VertexExpr::Product(l, m, r) => match l.as_ref() {
                VertexExpr::Generator(g) => {
                    write!(f, "{}({}){}", self.sig.name(*g), m, ExprDisplay { sig: self.sig, expr: r })
                }
                _ => write!(
                    f,
                    "({} [{}] {})",
                    ExprDisplay { sig: self.sig, expr: l },
                    m,
                    ExprDisplay { sig: self.sig, expr: r }
                ),
            },
        }
    }
}

/// Fold a tree with [`product_free`]. Generators become `a(-1)·1`.
pub fn evaluate_expr(sig: &Signature, e: &VertexExpr) -> FreeElement {
    match e {
        VertexExpr::Vacuum => FreeElement::vacuum(),
        VertexExpr::Generator(g) => FreeElement::generator(*g),
        VertexExpr::Product(l, m, r) => {
            let r = evaluate_expr(sig, r);
            if let VertexExpr::Generator(g) = l.as_ref() {
                return prepend_gen(sig, *g, *m, &r);
            }
            let l = evaluate_expr(sig, l);
            product_free(sig, &l, *m, &r)
        }
    }
}

pub fn fmt_word(sig: &Signature, w: &Word) -> String {
    let mut s = String::new();
    for l in &w.0 {
        s.push_str(sig.name(l.gen));
        s.push('(');
        s.push_str(&l.mode.to_string());
        s.push(')');
    }
    s.push_str("vac");
    s
}

/// Render `c₁ * w₁ + c₂ * w₂ - …`; a coefficient of exactly 1 is omitted.
pub(crate) fn fmt_linear<'a, T: 'a>(
    terms: impl IntoIterator<Item = (&'a T, &'a Scalar)>,
    mut item: impl FnMut(&T) -> String,
) -> String {
    let mut out = String::new();
    for (i, (t, c)) in terms.into_iter().enumerate() {
        let body = item(t);
        if i == 0 {
            if c.is_one() {
                out.push_str(&body);
            } else {
                out.push_str(&format!("{} * {}", fmt_scalar(c), body));
            }
            continue;
        }
        let mag = c.abs();
        out.push_str(if c.is_negative() { " - " } else { " + " });
        if mag.is_one() {
            out.push_str(&body);
        } else {
            out.push_str(&format!("{} * {}", fmt_scalar(&mag), body));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn fmt_element(sig: &Signature, x: &FreeElement) -> String {
    fmt_linear(x.canonical_terms(sig), |w| fmt_word(sig, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::fixtures::*;
    use crate::signature::ratio;

    fn w(pairs: &[(u16, i64)]) -> Word {
        Word(pairs.iter().map(|&(g, n)| Letter::new(Gen(g), n)).collect())
    }

    fn el(pairs: &[(u16, i64)]) -> FreeElement {
        FreeElement::from_word(w(pairs))
    }

    #[test]
    fn grades() {
        let f = ferm();
        let (wt, d2, p) = word_grade(&f, &w(&[(0, -1)]));
        assert_eq!((wt.0, d2, p), (vec![1], 1, 1));
        let (wt, d2, p) = word_grade(&f, &w(&[(0, -2), (0, -1)]));
        assert_eq!((wt.0, d2, p), (vec![2], 4, 0));
        let (wt, d2, p) = word_grade(&f, &Word::vacuum());
        assert_eq!((wt.0, d2, p), (vec![0], 0, 0));
    }

    #[test]
    fn divided_powers() {
        let x = el(&[(0, -1)]);
        assert_eq!(d_divided(&x, 1), el(&[(0, -2)]));
        assert_eq!(d_divided(&x, 0), x);
        assert_eq!(d_divided(&x, 2), el(&[(0, -3)]));
        assert!(d_divided(&FreeElement::vacuum(), 3).is_zero());
    }

    #[test]
    fn vacuum_right_products() {
        let f = ferm();
        let a = FreeElement::generator(Gen(0));
        let vac = FreeElement::vacuum();
        assert_eq!(product_free(&f, &a, -1, &vac), el(&[(0, -1)]));
        for n in 0..4 {
            assert!(product_free(&f, &a, n, &vac).is_zero());
        }
        // a ⊛_{-3} 1 = D^{(2)} a
        assert_eq!(product_free(&f, &a, -3, &vac), el(&[(0, -3)]));
    }

    #[test]
    fn left_unit() {
        let s = neg();
        let x = el(&[(1, -2), (0, -1)]);
        for n in -3..3 {
            let r = product_free(&s, &FreeElement::vacuum(), n, &x);
            if n == -1 {
                assert_eq!(r, x);
            } else {
                assert!(r.is_zero());
            }
        }
    }

    #[test]
    fn expression_evaluation() {
        let f = ferm();
        let a = VertexExpr::Generator(Gen(0));
        let e = VertexExpr::product(a.clone(), -1, VertexExpr::Vacuum);
        assert_eq!(evaluate_expr(&f, &e), el(&[(0, -1)]));
        let word = w(&[(0, -2), (0, -1)]);
        assert_eq!(evaluate_expr(&f, &VertexExpr::from_word(&word)), FreeElement::from_word(word));
        let nested = VertexExpr::product(VertexExpr::product(a.clone(), -2, a.clone()), -1, VertexExpr::Vacuum);
        let direct = product_free(&f, &FreeElement::generator(Gen(0)), -2, &FreeElement::generator(Gen(0)));
        assert_eq!(evaluate_expr(&f, &nested), direct);
    }

    #[test]
    fn grading_of_products() {
        let s = neg();
        let u = el(&[(0, -2), (1, -1)]);
        let v = el(&[(1, -3), (0, -1)]);
        let (uw, ud, _) = word_grade(&s, &w(&[(0, -2), (1, -1)]));
        let (vw, vd, _) = word_grade(&s, &w(&[(1, -3), (0, -1)]));
        for m in -3..3 {
            let r = product_free(&s, &u, m, &v);
            for word in r.words() {
                let (rw, rd, _) = word_grade(&s, word);
                assert_eq!(rw, &uw + &vw);
                assert_eq!(rd, ud + vd - 2 * m - 2);
            }
        }
    }

    #[test]
    fn printing() {
        let f = ferm();
        let mut x = el(&[(0, -2), (0, -1)]).scaled(&scalar(-1));
        assert_eq!(fmt_element(&f, &x), "-1 * a(-2)a(-1)vac");
        x.add_term(w(&[(0, -4), (0, -2)]), ratio(1, 2));
        x.add_term(w(&[(0, -1)]), scalar(1));
        assert_eq!(fmt_element(&f, &x), "a(-1)vac - a(-2)a(-1)vac + 1/2 * a(-4)a(-2)vac");
        assert_eq!(fmt_element(&f, &FreeElement::zero()), "0");
    }

    #[test]
    fn dead_tails() {
        let f = ferm();
        assert!(has_dead_tail(&f, &w(&[(0, -1), (0, -1)]).0));
        assert!(!has_dead_tail(&f, &w(&[(0, -2), (0, -1)]).0));
        assert!(has_dead_tail(&f, &w(&[(0, -5), (0, 0)]).0));
        assert!(!has_dead_tail(&f, &[]));
    }
}
