//! Conformal derivations of the free algebra, given by their values on
//! generators and extended through
//! `α(m)(a ⊛_n b) = a ⊛_n α(m)b + Σ_s C(m,s) (α(s)a) ⊛_{m+n−s} b`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::freeva::{has_dead_tail, prepend_gen, product_free, FreeElement, Letter, Word};
use crate::signature::{binomial, sign, Gen, Scalar, Signature};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationSpec {
    /// For each generator `b`, the nonzero values `α(s)b`.
    pub values: Vec<Vec<(i64, FreeElement)>>,
    /// Set when the derivation is `α_f`, which shifts every letter's mode.
    pub scaling: Option<Vec<Scalar>>,
}

impl DerivationSpec {
    pub fn zero(sig: &Signature) -> Self {
        DerivationSpec { values: vec![Vec::new(); sig.len()], scaling: None }
    }

    /// One more than the largest mode with a nonzero value.
    pub fn locality_bound(&self) -> i64 {
        self.values.iter().flatten().map(|(s, _)| s + 1).max().unwrap_or(0)
    }

    pub fn value(&self, b: Gen, s: i64) -> Option<&FreeElement> {
        self.values[b.index()].iter().find(|(m, _)| *m == s).map(|(_, v)| v)
    }

    /// The same derivation without the mode-shift shortcut.
    pub fn generic(&self) -> Self {
        DerivationSpec { values: self.values.clone(), scaling: None }
    }
}

/// `α_f`: `α(0)b = f(b) b` and nothing else.
pub fn alpha_f(sig: &Signature, f: &[Scalar]) -> DerivationSpec {
    let values = sig
        .gens()
        .map(|b| {
            let c = &f[b.index()];
            if c.is_zero() {
                Vec::new()
            } else {
                vec![(0, FreeElement::generator(b).scaled(c))]
            }
        })
        .collect();
    DerivationSpec { values, scaling: Some(f.to_vec()) }
}

/// `ω_f`: `ω(0)b = Db`, `ω(1)b = f(b) b`.
pub fn omega_f(sig: &Signature, f: &[Scalar]) -> DerivationSpec {
    let values = sig
        .gens()
        .map(|b| {
            let mut v = vec![(0, FreeElement::from_word(Word(vec![Letter::new(b, -2)])))];
            let c = &f[b.index()];
            if !c.is_zero() {
                v.push((1, FreeElement::generator(b).scaled(c)));
            }
            v
        })
        .collect();
    DerivationSpec { values, scaling: None }
}

/// `α(m) x` for `m ≥ 0`.
pub fn apply_derivation(sig: &Signature, spec: &DerivationSpec, m: i64, x: &FreeElement) -> FreeElement {
    assert!(m >= 0, "conformal derivations have nonnegative modes");
    let mut out = FreeElement::zero();
    for (w, c) in x.iter() {
        let r = match &spec.scaling {
            Some(f) => shift_word(sig, f, m, w),
            None => apply_word(sig, spec, m, &w.0),
        };
        out.add_scaled(&r, c);
    }
    out
}

/// `α_f(m)` on a word: `Σ_i f(a_i) · (n_i ↦ n_i + m)`.
fn shift_word(sig: &Signature, f: &[Scalar], m: i64, w: &Word) -> FreeElement {
    let mut out = FreeElement::zero();
    for i in 0..w.len() {
        let c = &f[w.0[i].gen.index()];
        if c.is_zero() {
            continue;
        }
        let mut v = w.0.clone();
        v[i].mode += m;
        if has_dead_tail(sig, &v) {
            continue;
        }
        out.add_term(Word(v), c.clone());
    }
    out
}

fn apply_word(sig: &Signature, spec: &DerivationSpec, m: i64, letters: &[Letter]) -> FreeElement {
    let Some((&head, rest)) = letters.split_first() else {
        return FreeElement::zero();
    };
    let (a, n) = (head.gen, head.mode);
    let mut out = prepend_gen(sig, a, n, &apply_word(sig, spec, m, rest));
    let tail = FreeElement::from_word(Word(rest.to_vec()));
    for (s, value) in &spec.values[a.index()] {
        if *s > m {
            continue;
        }
        let coef = binomial(m, *s);
        if coef.is_zero() {
            continue;
        }
        let r = product_free(sig, value, m + n - s, &tail);
        out.add_scaled(&r, &Scalar::from_integer(coef));
    }
    out
}

/// Mode `n` of the product `α ⊛_j β` of two conformal derivations, applied
/// to `x`: `Σ_{s=0}^{j} (−1)^s C(j,s) [α(j−s), β(n+s)] x`.
pub fn product_mode(
    sig: &Signature,
    alpha: &DerivationSpec,
    j: i64,
    beta: &DerivationSpec,
    n: i64,
    x: &FreeElement,
) -> FreeElement {
    let mut out = FreeElement::zero();
    for s in 0..=j {
        let coef = Scalar::from_integer(binomial(j, s) * BigInt::from(sign(s)));
        let ab = apply_derivation(sig, alpha, j - s, &apply_derivation(sig, beta, n + s, x));
        let ba = apply_derivation(sig, beta, n + s, &apply_derivation(sig, alpha, j - s, x));
        out.add_scaled(&ab, &coef);
        out.add_scaled(&ba, &-coef);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{heis_act_vec, FockSpace};
    use crate::freeva::{d_divided, d_once};
    use crate::rewrite::reduce;
    use crate::signature::fixtures::*;
    use crate::signature::scalar;
    use proptest::prelude::*;

    fn w(pairs: &[(u16, i64)]) -> Word {
        Word(pairs.iter().map(|&(g, n)| Letter::new(Gen(g), n)).collect())
    }

    fn el(pairs: &[(u16, i64)]) -> FreeElement {
        FreeElement::from_word(w(pairs))
    }

    #[test]
    fn alpha_examples() {
        let f = ferm();
        let zero = alpha_f(&f, &[scalar(0)]);
        assert!(apply_derivation(&f, &zero, 0, &el(&[(0, -2), (0, -1)])).is_zero());
        let check = alpha_f(&f, &[scalar(1)]);
        let x = el(&[(0, -2), (0, -1)]);
        assert!(reduce(&f, &apply_derivation(&f, &check, 1, &x)).is_zero());
        assert!(reduce(&f, &apply_derivation(&f, &check.generic(), 1, &x)).is_zero());
        assert_eq!(apply_derivation(&f, &check, 0, &x), x.scaled(&scalar(2)));
        let s = neg();
        let g = alpha_f(&s, &[scalar(3), scalar(-1)]);
        let y = el(&[(0, -3), (1, -1), (0, -1)]);
        assert_eq!(apply_derivation(&s, &g, 0, &y), y.scaled(&scalar(5)));
        for m in 0..3 {
            assert!(apply_derivation(&s, &g, m, &FreeElement::vacuum()).is_zero());
        }
    }

    #[test]
    fn omega_examples() {
        let s = neg();
        let om = omega_f(&s, &[scalar(2), scalar(-1)]);
        assert_eq!(apply_derivation(&s, &om, 0, &el(&[(1, -1)])), el(&[(1, -2)]));
        assert_eq!(apply_derivation(&s, &om, 1, &el(&[(1, -1)])), el(&[(1, -1)]).scaled(&scalar(-1)));
        assert!(apply_derivation(&s, &om, 2, &el(&[(0, -1)])).is_zero());
        assert_eq!(om.locality_bound(), 2);
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        prop::collection::vec((0u16..2, -3i64..1), 0..=3)
            .prop_map(|v| Word(v.into_iter().map(|(g, n)| Letter::new(Gen(g), n)).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn alpha_fast_path_matches_expansion(word in arb_word(), f0 in -3i64..4, f1 in -3i64..4, m in 0i64..4) {
            let s = neg();
            let spec = alpha_f(&s, &[scalar(f0), scalar(f1)]);
            let x = FreeElement::from_word(word);
            prop_assert_eq!(
                reduce(&s, &apply_derivation(&s, &spec, m, &x)),
                reduce(&s, &apply_derivation(&s, &spec.generic(), m, &x))
            );
        }

        #[test]
        fn alpha_matches_heisenberg_modes(word in arb_word(), h0 in -2i64..3, h1 in -2i64..3, n in 0i64..4) {
            let s = neg();
            let h = [scalar(h0), scalar(h1)];
            let f: Vec<Scalar> = s.gens().map(|b| scalar(h0 * s.gram(Gen(0), b) + h1 * s.gram(Gen(1), b))).collect();
            let fs = FockSpace::new(&s);
            let x = FreeElement::from_word(word);
            let lhs = fs.phi(&apply_derivation(&s, &alpha_f(&s, &f), n, &x));
            prop_assert_eq!(lhs, heis_act_vec(&s, &h, n, &fs.phi(&x)));
        }

        #[test]
        fn translation_commutator(word in arb_word(), n in 0i64..4, f0 in -2i64..3) {
            let s = neg();
            let x = FreeElement::from_word(word);
            for spec in [alpha_f(&s, &[scalar(f0), scalar(1)]), omega_f(&s, &[scalar(f0), scalar(1)])] {
                let lhs = &apply_derivation(&s, &spec, n, &d_once(&x)) - &d_once(&apply_derivation(&s, &spec, n, &x));
                let rhs = if n == 0 { FreeElement::zero() } else { apply_derivation(&s, &spec, n - 1, &x).scaled(&scalar(n)) };
                prop_assert_eq!(reduce(&s, &lhs), reduce(&s, &rhs));
            }
        }

        #[test]
        fn omega_zero_is_translation(word in arb_word(), f0 in -2i64..3) {
            let s = neg();
            let x = FreeElement::from_word(word);
            let om = omega_f(&s, &[scalar(f0), scalar(2)]);
            prop_assert_eq!(reduce(&s, &apply_derivation(&s, &om, 0, &x)), reduce(&s, &d_divided(&x, 1)));
        }

        #[test]
        fn alphas_commute(word in arb_word(), m in 0i64..3, n in 0i64..3) {
            let s = neg();
            let x = FreeElement::from_word(word);
            let f = alpha_f(&s, &[scalar(1), scalar(-2)]);
            let g = alpha_f(&s, &[scalar(3), scalar(1)]);
            let fg = apply_derivation(&s, &f, m, &apply_derivation(&s, &g, n, &x));
            let gf = apply_derivation(&s, &g, n, &apply_derivation(&s, &f, m, &x));
            prop_assert_eq!(reduce(&s, &fg), reduce(&s, &gf));
        }

        #[test]
        fn virasoro_relations(word in arb_word(), n in 0i64..3) {
            let s = neg();
            let x = FreeElement::from_word(word);
            let om_f = omega_f(&s, &[scalar(1), scalar(-1)]);
            let om_g = omega_f(&s, &[scalar(2), scalar(1)]);
            let al = alpha_f(&s, &[scalar(1), scalar(2)]);
            let nf = |y: &FreeElement| reduce(&s, y);
            let deriv = |spec: &DerivationSpec| if n == 0 { FreeElement::zero() } else { apply_derivation(&s, spec, n - 1, &x).scaled(&scalar(-n)) };
            prop_assert_eq!(nf(&product_mode(&s, &om_f, 0, &al, n, &x)), nf(&deriv(&al)));
            prop_assert_eq!(nf(&product_mode(&s, &om_f, 1, &al, n, &x)), nf(&apply_derivation(&s, &al, n, &x)));
            prop_assert_eq!(nf(&product_mode(&s, &om_f, 0, &om_g, n, &x)), nf(&deriv(&om_g)));
            prop_assert_eq!(nf(&product_mode(&s, &om_f, 1, &om_g, n, &x)), nf(&apply_derivation(&s, &om_g, n, &x).scaled(&scalar(2))));
            // ω_f ⊛_2 ω_g = 2 α_{f−g}, which vanishes only for f = g.
            let diff = alpha_f(&s, &[scalar(-1), scalar(-2)]);
            prop_assert_eq!(nf(&product_mode(&s, &om_f, 2, &om_g, n, &x)), nf(&apply_derivation(&s, &diff, n, &x).scaled(&scalar(2))));
            prop_assert!(nf(&product_mode(&s, &om_f, 2, &om_f, n, &x)).is_zero());
            prop_assert!(nf(&product_mode(&s, &om_f, 3, &om_g, n, &x)).is_zero());
            for j in 2..4 {
                prop_assert!(nf(&product_mode(&s, &om_f, j, &al, n, &x)).is_zero());
            }
        }
    }
}
