//! Truncated completed tensor algebra `T̂/T̂_{N+1}` over `H`.

mod double;
mod homology;
pub mod json;
mod word;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, SparseVec};
use crate::scalar::{int, Rational};

pub use double::DoubleTensor;
pub use homology::{Homology, SurfaceSignature};
pub use json::TensorJson;
pub use word::{all_words, Word};

/// An element of `⊕_{m ≤ N} H^{⊗m}` with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TruncatedTensor {
    homology: Homology,
    trunc: usize,
    terms: BTreeMap<Word, Rational>,
}

pub(crate) fn accumulate(acc: &mut HashMap<Word, Rational>, w: Word, c: Rational) {
    match acc.entry(w) {
        std::collections::hash_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
        }
        std::collections::hash_map::Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

impl TruncatedTensor {
    pub fn zero(homology: Homology, trunc: usize) -> Self {
        TruncatedTensor {
            homology,
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(homology: Homology, trunc: usize) -> Self {
        Self::scalar(homology, trunc, int(1))
    }

    pub fn scalar(homology: Homology, trunc: usize, c: Rational) -> Self {
        Self::from_terms(homology, trunc, [(Word::empty(), c)])
    }

    pub fn letter(homology: Homology, trunc: usize, x: u8) -> Self {
        Self::monomial(homology, trunc, &[x], int(1))
    }

    pub fn monomial(homology: Homology, trunc: usize, letters: &[u8], c: Rational) -> Self {
        Self::from_terms(homology, trunc, [(Word::from_slice(letters), c)])
    }

    /// Sums the given terms, dropping words longer than `trunc` and zero coefficients.
    pub fn from_terms<I>(homology: Homology, trunc: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Word, Rational)>,
    {
        let mut map: BTreeMap<Word, Rational> = BTreeMap::new();
        for (w, c) in terms {
            assert!(
                w.letters().iter().all(|&x| (x as usize) < homology.rank()),
                "letter out of range"
            );
            if w.len() > trunc {
                continue;
            }
            *map.entry(w).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        TruncatedTensor {
            homology,
            trunc,
            terms: map,
        }
    }

    fn from_map(homology: Homology, trunc: usize, acc: HashMap<Word, Rational>) -> Self {
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        TruncatedTensor { homology, trunc, terms }
    }

    pub fn homology(&self) -> Homology {
        self.homology
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coef(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coef_of(&self, letters: &[u8]) -> Rational {
        self.coef(&Word::from_slice(letters))
    }

    pub fn constant_term(&self) -> Rational {
        self.coef(&Word::empty())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest degree carrying a nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.terms.keys().next().map(Word::len)
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Word::len)
    }

    pub fn is_homogeneous(&self, d: usize) -> bool {
        self.terms.keys().all(|w| w.len() == d)
    }

    pub fn same_space(&self, other: &Self) -> Result<()> {
        if self.homology != other.homology {
            return Err(Error::Config(format!(
                "homology mismatch: rank {} vs rank {}",
                self.homology.rank(),
                other.homology.rank()
            )));
        }
        if self.trunc != other.trunc {
            return Err(Error::Config(format!(
                "truncation mismatch: {} vs {}",
                self.trunc, other.trunc
            )));
        }
        Ok(())
    }

    /// Homogeneous component of degree `m`.
    pub fn degree_part(&self, m: usize) -> Self {
        self.filter_degrees(|d| d == m)
    }

    /// Components of degree `≥ m`.
    pub fn degrees_from(&self, m: usize) -> Self {
        self.filter_degrees(|d| d >= m)
    }

    pub fn filter_degrees(&self, keep: impl Fn(usize) -> bool) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(w, _)| keep(w.len()))
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        TruncatedTensor {
            homology: self.homology,
            trunc: self.trunc,
            terms,
        }
    }

    /// Image under `T̂/T̂_{N+1} → T̂/T̂_{M+1}` for `M ≤ N`.
    pub fn truncate(&self, m: usize) -> Self {
        assert!(m <= self.trunc, "truncate can only lower the truncation");
        let mut t = self.filter_degrees(|d| d <= m);
        t.trunc = m;
        t
    }

    /// Same coefficients viewed at a higher truncation (a polynomial representative).
    pub fn lift(&self, m: usize) -> Self {
        assert!(m >= self.trunc, "lift can only raise the truncation");
        TruncatedTensor {
            homology: self.homology,
            trunc: m,
            terms: self.terms.clone(),
        }
    }

    /// `truncate` or `lift` as needed.
    pub fn with_trunc(&self, m: usize) -> Self {
        if m <= self.trunc {
            self.truncate(m)
        } else {
            self.lift(m)
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.homology, self.trunc);
        }
        let terms = self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect();
        TruncatedTensor {
            homology: self.homology,
            trunc: self.trunc,
            terms,
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        Ok(self.add_raw(other, &Rational::one()))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        Ok(self.add_raw(other, &-Rational::one()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        Ok(self.mul_raw(other))
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, other: &Self, c: &Rational) -> Self {
        self.same_space(other).expect("tensor spaces differ");
        self.add_raw(other, c)
    }

    fn add_raw(&self, other: &Self, c: &Rational) -> Self {
        let mut terms = self.terms.clone();
        for (w, x) in &other.terms {
            let e = terms.entry(w.clone()).or_insert_with(Rational::zero);
            *e += x * c;
            if e.is_zero() {
                terms.remove(w);
            }
        }
        TruncatedTensor {
            homology: self.homology,
            trunc: self.trunc,
            terms,
        }
    }

    fn mul_raw(&self, other: &Self) -> Self {
        self.mul_capped(other, self.trunc)
    }

    /// Product keeping only degrees `≤ cap` (`cap ≤ trunc`).
    pub(crate) fn mul_capped(&self, other: &Self, cap: usize) -> Self {
        let n = cap.min(self.trunc);
        let mut acc: HashMap<Word, Rational> = HashMap::new();
        for (w1, c1) in &self.terms {
            if w1.len() > n {
                break;
            }
            let budget = n - w1.len();
            for (w2, c2) in &other.terms {
                if w2.len() > budget {
                    break;
                }
                accumulate(&mut acc, w1.concat(w2), c1 * c2);
            }
        }
        Self::from_map(self.homology, self.trunc, acc)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::one(self.homology, self.trunc);
        for _ in 0..k {
            out = out.mul_raw(self);
        }
        out
    }

    /// `[u, v] = uv − vu`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.same_space(other).expect("tensor spaces differ");
        self.mul_raw(other).add_raw(&other.mul_raw(self), &-Rational::one())
    }

    /// `exp(u) = Σ u^k / k!`, defined when the degree-0 part vanishes.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::Domain("exp requires zero degree-0 component".into()));
        }
        let mut out = Self::one(self.homology, self.trunc);
        let mut term = out.clone();
        for k in 1..=self.trunc {
            term = term.mul_raw(self).scale(&Rational::new(1.into(), k.into()));
            if term.is_zero() {
                break;
            }
            out = out.add_raw(&term, &Rational::one());
        }
        Ok(out)
    }

    /// `log(u) = Σ (−1)^{k−1} (u−1)^k / k`, defined when the degree-0 part is 1.
    pub fn log(&self) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(Error::Domain("log requires degree-0 component 1".into()));
        }
        let x = self.add_raw(&Self::one(self.homology, self.trunc), &-Rational::one());
        let mut out = Self::zero(self.homology, self.trunc);
        let mut power = x.clone();
        for k in 1..=self.trunc {
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out = out.add_raw(&power, &Rational::new(sign.into(), (k as i64).into()));
            power = power.mul_raw(&x);
        }
        Ok(out)
    }

    /// Multiplicative inverse; requires an invertible degree-0 part.
    pub fn inverse(&self) -> Result<Self> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::Domain("tensor with zero degree-0 part is not invertible".into()));
        }
        let ci = c.recip();
        let one = Self::one(self.homology, self.trunc);
        let x = one.add_raw(&self.scale(&ci), &-Rational::one());
        let mut out = one.clone();
        let mut power = one;
        for _ in 1..=self.trunc {
            power = power.mul_raw(&x);
            if power.is_zero() {
                break;
            }
            out = out.add_raw(&power, &Rational::one());
        }
        Ok(out.scale(&ci))
    }

    /// Hausdorff series `log(exp(u)·exp(v))`.
    pub fn bch(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        self.exp()?.mul_raw(&other.exp()?).log()
    }

    /// The cyclicization map `N(X_1⋯X_n) = Σ_i X_i⋯X_n X_1⋯X_{i−1}`.
    pub fn cyclicize(&self) -> Self {
        let mut acc: HashMap<Word, Rational> = HashMap::new();
        for (w, c) in &self.terms {
            for i in 0..w.len() {
                accumulate(&mut acc, w.rotate(i), c.clone());
            }
        }
        Self::from_map(self.homology, self.trunc, acc)
    }

    /// Whether `u` is fixed by the cyclic projector `N/m` in each degree `m ≥ 1`
    /// and has no degree-0 part.
    pub fn is_cyclic(&self) -> bool {
        if !self.constant_term().is_zero() {
            return false;
        }
        let mut acc: HashMap<Word, Rational> = HashMap::new();
        for (w, c) in &self.terms {
            let m = w.len() as i64;
            for i in 0..w.len() {
                accumulate(&mut acc, w.rotate(i), c / int(m));
            }
        }
        Self::from_map(self.homology, self.trunc, acc) == *self
    }

    /// The part of `u` consisting of words starting with `x`, with `x` removed: `u = Σ_x x·u_x + u_0`.
    pub fn left_factor(&self, x: u8) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(w, _)| w.first() == Some(x))
            .map(|(w, c)| (w.tail(), c.clone()))
            .collect();
        TruncatedTensor {
            homology: self.homology,
            trunc: self.trunc,
            terms,
        }
    }

    /// Hopf coproduct with every letter primitive.
    pub fn coproduct(&self) -> DoubleTensor {
        let mut acc: HashMap<(Word, Word), Rational> = HashMap::new();
        for (w, c) in &self.terms {
            let m = w.len();
            let letters = w.letters();
            for mask in 0u32..(1u32 << m) {
                let mut left = Vec::with_capacity(m);
                let mut right = Vec::with_capacity(m);
                for (i, &x) in letters.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        left.push(x);
                    } else {
                        right.push(x);
                    }
                }
                let key = (Word::from_slice(&left), Word::from_slice(&right));
                *acc.entry(key).or_insert_with(Rational::zero) += c;
            }
        }
        DoubleTensor::from_pairs(self.homology, self.trunc, acc)
    }

    /// `Δu = u⊗1 + 1⊗u`.
    pub fn is_lie_like(&self) -> bool {
        let one = Self::one(self.homology, self.trunc);
        let expect = DoubleTensor::tensor(self, &one).add(&DoubleTensor::tensor(&one, self));
        self.coproduct() == expect
    }

    /// Degree-0 part 1 and `Δu = u⊗u`.
    pub fn is_group_like(&self) -> bool {
        self.constant_term().is_one() && self.coproduct() == DoubleTensor::tensor(self, self)
    }

    /// Basis of `{u : deg u ≤ max_deg, vu = uv}` for homogeneous `v`, one kernel per degree.
    ///
    /// Each basis vector is scaled so that its first word has coefficient 1.
    pub fn commutant_basis(&self, max_deg: usize) -> Result<Vec<Self>> {
        let d = match self.low_degree() {
            Some(d) if d >= 1 && self.is_homogeneous(d) => d,
            _ => {
                return Err(Error::Domain(
                    "commutant_basis needs a nonzero homogeneous element of degree ≥ 1".into(),
                ))
            }
        };
        if max_deg + d > self.trunc {
            return Err(Error::Domain(format!(
                "truncation {} too small for max_deg {} and degree {}",
                self.trunc, max_deg, d
            )));
        }
        let rank = self.homology.rank();
        let mut basis = Vec::new();
        for m in 0..=max_deg {
            let cols = all_words(rank, m);
            let mut rows: BTreeMap<Word, SparseVec> = BTreeMap::new();
            for (j, w) in cols.iter().enumerate() {
                for (vw, c) in &self.terms {
                    let e = rows.entry(vw.concat(w)).or_default();
                    linalg::add_entry(e, j, c.clone());
                    let e = rows.entry(w.concat(vw)).or_default();
                    linalg::add_entry(e, j, -c.clone());
                }
            }
            let kernel = linalg::kernel(rows.into_values().collect(), cols.len());
            for vec in kernel {
                let lead = vec.values().next().cloned().expect("nonzero kernel vector");
                let lead = lead.recip();
                let terms = vec.into_iter().map(|(j, c)| (cols[j].clone(), c * &lead));
                basis.push(Self::from_terms(self.homology, self.trunc, terms));
            }
        }
        Ok(basis)
    }

    pub fn format_with(&self, label: &dyn Fn(u8) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let word: Vec<String> = w.letters().iter().map(|&x| label(x)).collect();
            if w.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&word.join("*"));
            } else {
                out.push_str(&format!("{}*{}", mag, word.join("*")));
            }
        }
        out
    }
}

impl fmt::Display for TruncatedTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = self.homology;
        f.write_str(&self.format_with(&|x| h.label(x)))
    }
}

impl Add for &TruncatedTensor {
    type Output = TruncatedTensor;
    fn add(self, rhs: Self) -> TruncatedTensor {
        self.checked_add(rhs).expect("tensor spaces differ")
    }
}

impl Sub for &TruncatedTensor {
    type Output = TruncatedTensor;
    fn sub(self, rhs: Self) -> TruncatedTensor {
        self.checked_sub(rhs).expect("tensor spaces differ")
    }
}

impl Mul for &TruncatedTensor {
    type Output = TruncatedTensor;
    fn mul(self, rhs: Self) -> TruncatedTensor {
        self.checked_mul(rhs).expect("tensor spaces differ")
    }
}

impl Neg for &TruncatedTensor {
    type Output = TruncatedTensor;
    fn neg(self) -> TruncatedTensor {
        self.scale(&-Rational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn h2() -> Homology {
        Homology::new(1, 1).unwrap()
    }

    #[test]
    fn product_basics() {
        let h = h2();
        let one = TruncatedTensor::one(h, 3);
        let x = TruncatedTensor::letter(h, 3, 0);
        let y = TruncatedTensor::letter(h, 3, 1);
        let p = &(&one + &x) * &(&one + &y);
        let expect = TruncatedTensor::from_terms(
            h,
            3,
            [
                (Word::empty(), int(1)),
                (Word::letter(0), int(1)),
                (Word::letter(1), int(1)),
                (Word::from_slice(&[0, 1]), int(1)),
            ],
        );
        assert_eq!(p, expect);
        assert_ne!(&x * &y, &y * &x);
        assert_eq!(&(&x * &y) * &x, &x * &(&y * &x));
    }

    #[test]
    fn mismatch_is_config_error() {
        let a = TruncatedTensor::one(h2(), 3);
        let b = TruncatedTensor::one(h2(), 4);
        assert!(matches!(a.checked_mul(&b), Err(Error::Config(_))));
        let c = TruncatedTensor::one(Homology::new(2, 1).unwrap(), 3);
        assert!(matches!(a.checked_add(&c), Err(Error::Config(_))));
    }

    #[test]
    fn exp_and_log_of_letter() {
        let h = h2();
        let x = TruncatedTensor::letter(h, 5, 0);
        let e = x.exp().unwrap();
        for k in 0..=5usize {
            assert_eq!(e.coef_of(&vec![0u8; k]), crate::scalar::inv_factorial(k));
        }
        let l = (&TruncatedTensor::one(h, 5) + &x).log().unwrap();
        for k in 1..=5i64 {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            assert_eq!(l.coef_of(&vec![0u8; k as usize]), ratio(sign, k));
        }
        assert_eq!(e.log().unwrap(), x);
        assert!(TruncatedTensor::one(h, 5).exp().is_err());
        assert!(x.log().is_err());
        assert_eq!((&e * &e).log().unwrap(), x.scale(&int(2)));
    }

    #[test]
    fn inverse_of_group_like() {
        let h = h2();
        let x = TruncatedTensor::letter(h, 4, 0);
        let y = TruncatedTensor::letter(h, 4, 1);
        let u = &x.exp().unwrap() * &y.exp().unwrap();
        let ui = u.inverse().unwrap();
        assert_eq!(&u * &ui, TruncatedTensor::one(h, 4));
        assert_eq!(&ui * &u, TruncatedTensor::one(h, 4));
    }

    #[test]
    fn bch_degree_three() {
        let h = h2();
        let x = TruncatedTensor::letter(h, 3, 0);
        let y = TruncatedTensor::letter(h, 3, 1);
        let xy = x.commutator(&y);
        let expect = &(&(&x + &y) + &xy.scale(&ratio(1, 2)))
            + &(&x.commutator(&xy).scale(&ratio(1, 12)) + &y.commutator(&y.commutator(&x)).scale(&ratio(1, 12)));
        assert_eq!(x.bch(&y).unwrap(), expect);
        assert!(x.bch(&-&x).unwrap().is_zero());
    }

    #[test]
    fn coproduct_of_two_letter_word() {
        let h = h2();
        let w = TruncatedTensor::monomial(h, 2, &[0, 1], int(1));
        let d = w.coproduct();
        let one = TruncatedTensor::one(h, 2);
        let x = TruncatedTensor::letter(h, 2, 0);
        let y = TruncatedTensor::letter(h, 2, 1);
        let expect = DoubleTensor::tensor(&w, &one)
            .add(&DoubleTensor::tensor(&x, &y))
            .add(&DoubleTensor::tensor(&y, &x))
            .add(&DoubleTensor::tensor(&one, &w));
        assert_eq!(d, expect);
        assert_eq!(one.coproduct(), DoubleTensor::tensor(&one, &one));
    }

    #[test]
    fn lie_and_group_like_predicates() {
        let h = h2();
        let x = TruncatedTensor::letter(h, 4, 0);
        let y = TruncatedTensor::letter(h, 4, 1);
        assert!(x.commutator(&y).is_lie_like());
        assert!(!(&x * &y).is_lie_like());
        assert!(!(&TruncatedTensor::one(h, 4) + &x).is_group_like());
        assert!(h.omega(4).exp().unwrap().is_group_like());
        assert!(x.exp().unwrap().is_group_like());
    }

    #[test]
    fn cyclicize_examples() {
        let h = h2();
        let one = TruncatedTensor::one(h, 3);
        assert!(one.cyclicize().is_zero());
        let xy = TruncatedTensor::monomial(h, 3, &[0, 1], int(1));
        let yx = TruncatedTensor::monomial(h, 3, &[1, 0], int(1));
        assert_eq!(xy.cyclicize(), &xy + &yx);
        assert!((&xy - &yx).cyclicize().is_zero());
        assert!(xy.cyclicize().is_cyclic());
        assert!(!xy.is_cyclic());
    }

    #[test]
    fn commutant_examples() {
        let h = h2();
        let x = TruncatedTensor::letter(h, 4, 0);
        let b = x.commutant_basis(3).unwrap();
        assert_eq!(b.len(), 4);
        for (k, u) in b.iter().enumerate() {
            assert_eq!(*u, TruncatedTensor::monomial(h, 4, &vec![0; k], int(1)));
        }
        let v = x.commutator(&TruncatedTensor::letter(h, 4, 1)).truncate(4);
        let h5 = TruncatedTensor::from_terms(h, 5, v.terms().map(|(w, c)| (w.clone(), c.clone())));
        let b = h5.commutant_basis(3).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b[1], h5);
        assert_eq!(x.commutant_basis(0).unwrap().len(), 1);
        assert!(x.commutant_basis(4).is_err());
    }

    #[test]
    fn display_format() {
        let h = h2();
        let t = TruncatedTensor::from_terms(
            h,
            2,
            [
                (Word::empty(), int(1)),
                (Word::from_slice(&[0, 1]), ratio(-1, 2)),
                (Word::letter(1), int(1)),
            ],
        );
        assert_eq!(t.to_string(), "1 + B1 - 1/2*A1*B1");
    }
}
