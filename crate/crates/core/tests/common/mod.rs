#![allow(dead_code)]

use std::collections::BTreeMap;

use goldman_core::group::{GroupRingElement, GroupWord, Letter};
use goldman_core::tensor::Word;
use goldman_core::{Homology, Rational, TruncatedTensor};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Plain noncommutative polynomial: letters → coefficient, truncated by length.
pub type Poly = BTreeMap<Vec<u8>, Rational>;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn poly_of(t: &TruncatedTensor) -> Poly {
    t.terms().map(|(w, c)| (w.letters().to_vec(), c.clone())).collect()
}

pub fn tensor_of(p: &Poly, h: Homology, n: usize) -> TruncatedTensor {
    TruncatedTensor::from_terms(h, n, p.iter().map(|(w, c)| (Word::from_slice(w), c.clone())))
}

fn clean(mut p: Poly) -> Poly {
    p.retain(|_, c| !c.is_zero());
    p
}

pub fn poly_add(a: &Poly, b: &Poly, scale: &Rational) -> Poly {
    let mut out = a.clone();
    for (w, c) in b {
        *out.entry(w.clone()).or_insert_with(Rational::zero) += c * scale;
    }
    clean(out)
}

pub fn poly_mul(a: &Poly, b: &Poly, n: usize) -> Poly {
    let mut out = Poly::new();
    for (u, c) in a {
        for (v, d) in b {
            if u.len() + v.len() > n {
                continue;
            }
            let mut w = u.clone();
            w.extend_from_slice(v);
            *out.entry(w).or_insert_with(Rational::zero) += c * d;
        }
    }
    clean(out)
}

pub fn poly_one() -> Poly {
    let mut p = Poly::new();
    p.insert(Vec::new(), Rational::one());
    p
}

/// `Σ_k a^k / k!` for `a` without constant term.
pub fn poly_exp(a: &Poly, n: usize) -> Poly {
    let mut out = poly_one();
    let mut term = poly_one();
    let mut fact = Rational::one();
    for k in 1..=n {
        fact *= Rational::from_integer(BigInt::from(k));
        term = poly_mul(&term, a, n);
        out = poly_add(&out, &term, &(Rational::one() / &fact));
    }
    out
}

/// `Σ_k (−1)^{k+1} (a − 1)^k / k` for `a` with constant term 1.
pub fn poly_log(a: &Poly, n: usize) -> Poly {
    let x = poly_add(a, &poly_one(), &q(-1, 1));
    let mut out = Poly::new();
    let mut term = poly_one();
    for k in 1..=n as i64 {
        term = poly_mul(&term, &x, n);
        let s = if k % 2 == 1 { 1 } else { -1 };
        out = poly_add(&out, &term, &q(s, k));
    }
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(r: &mut ChaCha8Rng) -> Rational {
    let num = r.gen_range(-3i64..=3);
    let den = r.gen_range(1i64..=3);
    q(num, den)
}

/// Random tensor with terms in degrees `min_deg..=n`.
pub fn random_tensor(r: &mut ChaCha8Rng, h: Homology, n: usize, min_deg: usize, max_terms: usize) -> TruncatedTensor {
    let k = r.gen_range(1..=max_terms);
    let mut terms = Vec::new();
    for _ in 0..k {
        let d = r.gen_range(min_deg..=n);
        let w: Vec<u8> = (0..d).map(|_| r.gen_range(0..h.rank()) as u8).collect();
        terms.push((Word::from_slice(&w), small_rational(r)));
    }
    TruncatedTensor::from_terms(h, n, terms)
}

/// Random combination of iterated commutators of letters (a Lie element).
pub fn random_lie(r: &mut ChaCha8Rng, h: Homology, n: usize, min_deg: usize, max_terms: usize) -> TruncatedTensor {
    let k = r.gen_range(1..=max_terms);
    let mut out = TruncatedTensor::zero(h, n);
    for _ in 0..k {
        let d = r.gen_range(min_deg.max(1)..=n);
        let mut t = TruncatedTensor::letter(h, n, r.gen_range(0..h.rank()) as u8);
        for _ in 1..d {
            let x = TruncatedTensor::letter(h, n, r.gen_range(0..h.rank()) as u8);
            t = x.commutator(&t);
        }
        out = out.add_scaled(&t, &small_rational(r));
    }
    out
}

pub fn random_word(r: &mut ChaCha8Rng, gens: usize, max_len: usize) -> GroupWord {
    let len = r.gen_range(0..=max_len);
    GroupWord::reduce((0..len).map(|_| Letter::new(r.gen_range(0..gens) as u16, r.gen_bool(0.5))))
}

pub fn random_nontrivial_word(r: &mut ChaCha8Rng, gens: usize, max_len: usize) -> GroupWord {
    loop {
        let w = random_word(r, gens, max_len);
        if !w.is_identity() {
            return w;
        }
    }
}

/// A product `(w_1 − 1)⋯(w_n − 1)` of random nontrivial words, an element of `Iⁿ`.
pub fn random_power_of_augmentation(r: &mut ChaCha8Rng, gens: usize, n: usize) -> GroupRingElement {
    let mut out = GroupRingElement::one();
    for _ in 0..n {
        out = out.mul(&GroupRingElement::minus_one(random_nontrivial_word(r, gens, 3)));
    }
    out
}
