//! Free Lie algebra helpers: Dynkin operator, Lyndon (Hall) basis, Witt dimensions.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{int, Rational};
use crate::tensor::{accumulate, Homology, TruncatedTensor, Word};

fn dynkin_word_terms(w: &Word) -> HashMap<Word, Rational> {
    let letters = w.letters();
    let mut cur: HashMap<Word, Rational> = HashMap::new();
    let Some((&last, rest)) = letters.split_last() else {
        return cur;
    };
    cur.insert(Word::letter(last), int(1));
    for &x in rest.iter().rev() {
        let xw = Word::letter(x);
        let mut next = HashMap::with_capacity(cur.len() * 2);
        for (v, c) in cur {
            accumulate(&mut next, xw.concat(&v), c.clone());
            accumulate(&mut next, v.pushed(x), -c);
        }
        cur = next;
    }
    cur
}

/// Right-normed bracketing `r(X_1⋯X_m) = [X_1,[X_2,…,X_m]]`, extended linearly
/// (the degree-0 part is sent to 0).
pub fn dynkin(u: &TruncatedTensor) -> TruncatedTensor {
    let mut acc: HashMap<Word, Rational> = HashMap::new();
    for (w, c) in u.terms() {
        for (v, d) in dynkin_word_terms(w) {
            accumulate(&mut acc, v, d * c);
        }
    }
    TruncatedTensor::from_terms(u.homology(), u.trunc(), acc)
}

/// Projection onto the Lie elements: `Σ_m r(u_m)/m`.
pub fn lie_projection(u: &TruncatedTensor) -> TruncatedTensor {
    let mut out = TruncatedTensor::zero(u.homology(), u.trunc());
    for m in 1..=u.trunc() {
        let part = u.degree_part(m);
        if !part.is_zero() {
            out = out.add_scaled(&dynkin(&part), &Rational::new(1.into(), (m as i64).into()));
        }
    }
    out
}

/// Whether `u` lies in the free Lie algebra (Dynkin–Specht–Wever criterion).
pub fn is_lie_element(u: &TruncatedTensor) -> bool {
    lie_projection(u) == *u
}

/// Lyndon words of length `1..=max_len` over `rank` letters, in lexicographic order.
pub fn lyndon_words(rank: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if rank == 0 || max_len == 0 {
        return out;
    }
    let k = rank as i32;
    let mut w: Vec<i32> = vec![-1];
    while let Some(last) = w.last_mut() {
        *last += 1;
        out.push(Word::from_slice(&w.iter().map(|&x| x as u8).collect::<Vec<_>>()));
        let m = w.len();
        while w.len() < max_len {
            let x = w[w.len() - m];
            w.push(x);
        }
        while w.last() == Some(&(k - 1)) {
            w.pop();
        }
    }
    out
}

pub fn is_lyndon(w: &[u8]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// Standard bracketing `P(w) = [P(u), P(v)]`, `v` the longest proper Lyndon suffix.
pub fn lyndon_bracket(homology: Homology, trunc: usize, w: &Word) -> TruncatedTensor {
    let letters = w.letters();
    assert!(is_lyndon(letters), "not a Lyndon word");
    if letters.len() == 1 {
        return TruncatedTensor::letter(homology, trunc, letters[0]);
    }
    let split = (1..letters.len()).find(|&i| is_lyndon(&letters[i..])).expect("suffix");
    let left = lyndon_bracket(homology, trunc, &Word::from_slice(&letters[..split]));
    let right = lyndon_bracket(homology, trunc, &Word::from_slice(&letters[split..]));
    left.commutator(&right)
}

/// Coordinates of a Lie element in the Lyndon basis, in lexicographic word order.
///
/// Uses triangularity: `P(w) = w + (lexicographically larger words)`.
pub fn lyndon_coordinates(u: &TruncatedTensor) -> Result<Vec<(Word, Rational)>> {
    let mut rest = u.clone();
    let mut coords = Vec::new();
    if !rest.constant_term().is_zero() {
        return Err(Error::Domain("Lie elements have no degree-0 part".into()));
    }
    loop {
        let first = rest.terms().next().map(|(w, c)| (w.clone(), c.clone()));
        let Some((w, c)) = first else { break };
        if !is_lyndon(w.letters()) {
            return Err(Error::Domain("not a Lie element".into()));
        }
        let p = lyndon_bracket(u.homology(), u.trunc(), &w);
        rest = rest.add_scaled(&p, &-c.clone());
        coords.push((w, c));
    }
    Ok(coords)
}

fn mobius(n: usize) -> i64 {
    let mut n = n;
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// `dim L_m = (1/m) Σ_{d | m} μ(d) rank^{m/d}`.
pub fn witt_dimension(rank: usize, m: usize) -> usize {
    if m == 0 {
        return 0;
    }
    let total: i64 = (1..=m)
        .filter(|d| m % d == 0)
        .map(|d| mobius(d) * (rank as i64).pow((m / d) as u32))
        .sum();
    (total / m as i64) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h() -> Homology {
        Homology::new(0, 4).unwrap()
    }

    #[test]
    fn lyndon_counts_match_witt() {
        for rank in 1..=3 {
            let ws = lyndon_words(rank, 6);
            for m in 1..=6 {
                let count = ws.iter().filter(|w| w.len() == m).count();
                assert_eq!(count, witt_dimension(rank, m), "rank {rank} m {m}");
            }
        }
        assert_eq!(witt_dimension(2, 3), 2);
        assert_eq!(witt_dimension(4, 2), 6);
    }

    #[test]
    fn dynkin_on_lie_elements_scales_by_degree() {
        let hh = h();
        for w in lyndon_words(3, 4) {
            let p = lyndon_bracket(hh, 4, &w);
            assert_eq!(dynkin(&p), p.scale(&int(w.len() as i64)));
            assert!(is_lie_element(&p));
        }
        let xy = TruncatedTensor::monomial(hh, 3, &[0, 1], int(1));
        assert!(!is_lie_element(&xy));
    }

    #[test]
    fn lyndon_coordinates_recover_combination() {
        let hh = h();
        let ws = lyndon_words(3, 3);
        let mut u = TruncatedTensor::zero(hh, 3);
        for (i, w) in ws.iter().enumerate() {
            u = u.add_scaled(&lyndon_bracket(hh, 3, w), &int(i as i64 - 3));
        }
        let coords = lyndon_coordinates(&u).unwrap();
        for (w, c) in coords {
            let i = ws.iter().position(|v| *v == w).unwrap();
            assert_eq!(c, int(i as i64 - 3));
        }
        let xy = TruncatedTensor::monomial(hh, 3, &[0, 1], int(1));
        assert!(lyndon_coordinates(&xy).is_err());
    }
}
