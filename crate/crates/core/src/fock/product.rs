use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{d_act, epsilon, heis_act, weight_creation, FockElement, PBWState};
use crate::freeva::{deg2_of, weight_of, FreeElement, Letter, Word};
use crate::signature::{binomial, scalar, sign, Gen, Scalar, Signature, Weight};

type VaKey = (Weight, i64, PBWState);

/// Products in the lattice vertex algebra of a signature, with caches for
/// the vacuum-vector recursion and for images of words. The caches are
/// per instance; create one per thread.
pub struct FockSpace<'s> {
    sig: &'s Signature,
    va_cache: RefCell<HashMap<VaKey, Rc<FockElement>>>,
    product_cache: RefCell<HashMap<(PBWState, i64, PBWState), Rc<FockElement>>>,
    phi_cache: RefCell<HashMap<Word, FockElement>>,
}

impl<'s> FockSpace<'s> {
    pub fn new(sig: &'s Signature) -> Self {
        FockSpace {
            sig,
            va_cache: RefCell::default(),
            product_cache: RefCell::default(),
            phi_cache: RefCell::default(),
        }
    }

    pub fn signature(&self) -> &'s Signature {
        self.sig
    }

    fn below_floor(&self, charge: &Weight, deg2: i64) -> bool {
        deg2 < self.sig.d2_min(charge)
    }

    /// `v_α ⊛_n v_β`.
    pub fn vacuum_product(&self, alpha: &Weight, n: i64, beta: &Weight) -> FockElement {
        let k = -self.sig.pairing(alpha, beta) - n - 1;
        if k < 0 {
            return FockElement::zero();
        }
        let mut x = FockElement::vacuum_vector(alpha + beta);
        let mut fact = BigInt::one();
        for i in 1..=k {
            let shifted = weight_creation(beta, &x);
            x = &d_act(self.sig, &x) - &shifted;
            fact *= BigInt::from(i);
        }
        let c = Scalar::new(BigInt::from(epsilon(self.sig, alpha, beta)), fact);
        x.scaled(&c)
    }

    /// `v_α ⊛_n x`.
    pub fn va_product(&self, alpha: &Weight, n: i64, x: &FockElement) -> FockElement {
        let mut out = FockElement::zero();
        for (s, c) in x.iter() {
            let r = self.va_state(alpha, n, s);
            out.add_scaled(&r, c);
        }
        out
    }

    /// `v_α ⊛_n (c(−k) y) = c(−k)(v_α ⊛_n y) − (α|c) v_α ⊛_{n−k} y`.
    fn va_state(&self, alpha: &Weight, n: i64, s: &PBWState) -> Rc<FockElement> {
        let total = alpha + &s.charge;
        if self.below_floor(&total, self.sig.d2_min(alpha) + s.deg2(self.sig) - 2 * n - 2) {
            return Rc::default();
        }
        let key = (alpha.clone(), n, s.clone());
        if let Some(hit) = self.va_cache.borrow().get(&key) {
            return Rc::clone(hit);
        }
        let out = match s.heis.last() {
            None => self.vacuum_product(alpha, n, &s.charge),
            Some(&(k, c)) => {
                let y = s.without(s.heis.len() - 1);
                let mut out = FockElement::zero();
                out.add_created(&self.va_state(alpha, n, &y), k, c, &Scalar::one());
                let pair = self.sig.pairing_gen(c, alpha);
                if pair != 0 {
                    out.add_scaled(&self.va_state(alpha, n - k, &y), &scalar(-pair));
                }
                out
            }
        };
        let out = Rc::new(out);
        self.va_cache.borrow_mut().insert(key, Rc::clone(&out));
        out
    }

    /// General product `x ⊛_m y` of two Fock elements.
    pub fn product(&self, x: &FockElement, m: i64, y: &FockElement) -> FockElement {
        let mut out = FockElement::zero();
        for (s, c) in x.iter() {
            for (t, d) in y.iter() {
                let r = self.state_product(s, m, t);
                out.add_scaled(&r, &(c * d));
            }
        }
        out
    }

    /// Peel the top creation letter `c(−k)` off the left state, viewing
    /// `c(−k) s'` as `c ⊛_{−k} s'` for the Heisenberg vector `c`, and expand
    /// by associativity. The Heisenberg vector is even, so no sign enters.
    fn state_product(&self, s: &PBWState, m: i64, y: &PBWState) -> Rc<FockElement> {
        let total = &s.charge + &y.charge;
        let floor = self.sig.d2_min(&total);
        let d2 = y.deg2(self.sig);
        if s.deg2(self.sig) + d2 - 2 * m - 2 < floor {
            return Rc::default();
        }
        let Some(&(k, c)) = s.heis.last() else {
            return self.va_state(&s.charge, m, y);
        };
        let key = (s.clone(), m, y.clone());
        if let Some(hit) = self.product_cache.borrow().get(&key) {
            return Rc::clone(hit);
        }
        let rest = s.without(s.heis.len() - 1);
        let rest_d2 = rest.deg2(self.sig);
        let n = -k;
        let mut out = FockElement::zero();

        // Σ_{i≥0} (−1)^i C(n,i) c(n−i) (s' ⊛_{m+i} y)
        let i_hi = (rest_d2 + d2 - 2 * m - 2 - floor).div_euclid(2);
        for i in 0..=i_hi {
            let inner = self.state_product(&rest, m + i, y);
            if inner.is_zero() {
                continue;
            }
            let coef = binomial(n, i) * BigInt::from(sign(i));
            out.add_created(&inner, i - n, c, &Scalar::from_integer(coef));
        }

        // −Σ_{t≥0} (−1)^{n+t} C(n,t) s' ⊛_{m+n−t} (c(t) y)
        let top = y.heis.last().map_or(0, |h| h.0);
        let single = FockElement::from_state(y.clone());
        for t in 0..=top {
            let cy = heis_act(self.sig, c, t, &single);
            if cy.is_zero() {
                continue;
            }
            let coef = Scalar::from_integer(-binomial(n, t) * BigInt::from(sign(n + t)));
            for (st, d) in cy.iter() {
                let r = self.state_product(&rest, m + n - t, st);
                out.add_scaled(&r, &(&coef * d));
            }
        }
        let out = Rc::new(out);
        self.product_cache.borrow_mut().insert(key, Rc::clone(&out));
        out
    }

    /// `ρ(u) ⊛_m x` for a word `u`, expanded letter by letter with the
    /// associativity identity.
    pub fn monomial_product(&self, u: &Word, m: i64, x: &FockElement) -> FockElement {
        let mut out = FockElement::zero();
        for (charge, d2, elem) in x.components(self.sig) {
            let r = self.letters_product(&u.0, m, &charge, d2, &elem);
            out.add_scaled(&r, &Scalar::one());
        }
        out
    }

    fn letters_product(&self, letters: &[Letter], m: i64, charge: &Weight, d2: i64, x: &FockElement) -> FockElement {
        if x.is_zero() {
            return FockElement::zero();
        }
        let Some((&head, rest)) = letters.split_first() else {
            return if m == -1 { x.clone() } else { FockElement::zero() };
        };
        let sig = self.sig;
        let lw = weight_of(sig, letters);
        if self.below_floor(&(&lw + charge), deg2_of(sig, letters) + d2 - 2 * m - 2) {
            return FockElement::zero();
        }
        let (a, n1) = (head.gen, head.mode);
        let unit = sig.unit_weight(a);
        if rest.is_empty() {
            if n1 >= 0 {
                return FockElement::zero();
            }
            let j = -n1 - 1;
            let coef = binomial(m, j) * BigInt::from(sign(j));
            if coef.is_zero() {
                return FockElement::zero();
            }
            return self.va_product(&unit, m - j, x).scaled(&Scalar::from_integer(coef));
        }
        let rw = weight_of(sig, rest);
        let rd2 = deg2_of(sig, rest);
        let koszul = sign(sig.parity(a) as i64 * sig.weight_parity(&rw) as i64);
        let mut out = FockElement::zero();

        let inner_floor = sig.d2_min(&(&rw + charge));
        let mut s_hi = (rd2 + d2 - 2 * m - 2 - inner_floor).div_euclid(2);
        if n1 >= 0 {
            s_hi = s_hi.min(n1);
        }
        for s in 0..=s_hi {
            let coef = binomial(n1, s) * BigInt::from(sign(s));
            if coef.is_zero() {
                continue;
            }
            let inner = self.letters_product(rest, m + s, charge, d2, x);
            if inner.is_zero() {
                continue;
            }
            let r = self.va_product(&unit, n1 - s, &inner);
            out.add_scaled(&r, &Scalar::from_integer(coef));
        }

        let av_w = &unit + charge;
        let s_lo = -((-(sig.d2_min(&av_w) - sig.deg2(a) - d2 + 2 * n1 + 2)).div_euclid(2));
        for s in s_lo..=n1 {
            let coef = binomial(n1, n1 - s) * BigInt::from(-koszul * sign(s));
            if coef.is_zero() {
                continue;
            }
            let av = self.va_product(&unit, n1 - s, x);
            if av.is_zero() {
                continue;
            }
            let av_d2 = sig.deg2(a) + d2 - 2 * (n1 - s) - 2;
            let r = self.letters_product(rest, m + s, &av_w, av_d2, &av);
            out.add_scaled(&r, &Scalar::from_integer(coef));
        }
        out
    }

    /// Image of a word: fold right to left from `v_0` with `v_a ⊛_n`.
    pub fn phi_word(&self, w: &Word) -> FockElement {
        if w.is_empty() {
            return FockElement::vacuum_vector(self.sig.zero_weight());
        }
        if let Some(hit) = self.phi_cache.borrow().get(w) {
            return hit.clone();
        }
        let tail = self.phi_word(&w.tail(1));
        let head = w.0[0];
        let out = self.va_product(&self.sig.unit_weight(head.gen), head.mode, &tail);
        self.phi_cache.borrow_mut().insert(w.clone(), out.clone());
        out
    }

    /// The homomorphism from the free algebra sending `a` to `v_a`.
    pub fn phi(&self, x: &FreeElement) -> FockElement {
        let mut out = FockElement::zero();
        for (w, c) in x.iter() {
            out.add_scaled(&self.phi_word(w), c);
        }
        out
    }

    /// `v_a` for a generator.
    pub fn generator(&self, a: Gen) -> FockElement {
        FockElement::vacuum_vector(self.sig.unit_weight(a))
    }

    pub fn clear_caches(&self) {
        self.va_cache.borrow_mut().clear();
        self.product_cache.borrow_mut().clear();
        self.phi_cache.borrow_mut().clear();
    }

}
