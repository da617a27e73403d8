//! Free groups of surfaces with boundary and their rational group rings.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rational;
use crate::tensor::Homology;

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: u16,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: u16, inv: bool) -> Self {
        Letter { gen, inv }
    }

    pub fn inverse(self) -> Self {
        Letter {
            gen: self.gen,
            inv: !self.inv,
        }
    }
}

/// A freely reduced word; the empty word is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GroupWord(Vec<Letter>);

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord(Vec::new())
    }

    pub fn generator(gen: u16) -> Self {
        GroupWord(vec![Letter::new(gen, false)])
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        GroupWord(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        GroupWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::reduce(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Self::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `a b a⁻¹ b⁻¹`.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.mul(b).mul(&a.inverse()).mul(&b.inverse())
    }

    /// `c⁻¹ self c`.
    pub fn conjugate_by(&self, c: &Self) -> Self {
        c.inverse().mul(self).mul(c)
    }

    /// Splits `w = c · core · c⁻¹` with `core` cyclically reduced.
    pub fn cyclic_reduction(&self) -> (GroupWord, GroupWord) {
        let l = &self.0;
        let mut i = 0;
        while i < l.len() / 2 && l[i] == l[l.len() - 1 - i].inverse() {
            i += 1;
        }
        (GroupWord(l[..i].to_vec()), GroupWord(l[i..l.len() - i].to_vec()))
    }

    /// Largest generator index plus one (0 for the identity).
    pub fn generator_bound(&self) -> usize {
        self.0.iter().map(|l| l.gen as usize + 1).max().unwrap_or(0)
    }

    /// Substitutes a word for every generator.
    pub fn substitute(&self, images: &[GroupWord]) -> GroupWord {
        let mut out = GroupWord::identity();
        for l in &self.0 {
            let img = &images[l.gen as usize];
            out = if l.inv { out.mul(&img.inverse()) } else { out.mul(img) };
        }
        out
    }
}

/// Names of free generators, with the text syntax `a1 b1 a1^-1 b1^-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new(names: Vec<String>) -> Self {
        Alphabet { names }
    }

    /// `a1, b1, …, ag, bg, g2, …, gr`, indexed like the homology letters.
    pub fn surface(h: Homology) -> Self {
        let mut names = Vec::new();
        for i in 1..=h.genus() {
            names.push(format!("a{i}"));
            names.push(format!("b{i}"));
        }
        for j in 2..=h.boundary() {
            names.push(format!("g{j}"));
        }
        Alphabet { names }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index(&self, name: &str) -> Result<u16> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| i as u16)
            .ok_or_else(|| Error::Parse(format!("unknown generator `{name}`")))
    }

    /// Parses whitespace-separated tokens `x`, `x^k` (integer `k`); `1` denotes the identity.
    pub fn parse(&self, text: &str) -> Result<GroupWord> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let k: i64 = e
                        .parse()
                        .map_err(|_| Error::Parse(format!("invalid exponent in `{tok}`")))?;
                    (n, k)
                }
                None => (tok, 1),
            };
            let gen = self.index(name)?;
            for _ in 0..exp.unsigned_abs() {
                letters.push(Letter::new(gen, exp < 0));
            }
        }
        Ok(GroupWord::reduce(letters))
    }

    pub fn format(&self, w: &GroupWord) -> String {
        if w.is_identity() {
            return "1".into();
        }
        w.letters()
            .iter()
            .map(|l| {
                let n = &self.names[l.gen as usize];
                if l.inv {
                    format!("{n}^-1")
                } else {
                    n.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// `α_i`, with the same index as the homology letter `A_i`.
pub fn alpha(h: Homology, i: usize) -> GroupWord {
    GroupWord::generator(h.a(i) as u16)
}

pub fn beta(h: Homology, i: usize) -> GroupWord {
    GroupWord::generator(h.b(i) as u16)
}

/// `γ_j` for `2 ≤ j ≤ r`.
pub fn gamma(h: Homology, j: usize) -> GroupWord {
    GroupWord::generator(h.c(j) as u16)
}

/// `[α_1,β_1]⋯[α_k,β_k]`.
pub fn handle_product(h: Homology, k: usize) -> GroupWord {
    let mut w = GroupWord::identity();
    for i in 1..=k {
        w = w.mul(&GroupWord::commutator(&alpha(h, i), &beta(h, i)));
    }
    w
}

/// The boundary loop `ζ = [α_1,β_1]⋯[α_g,β_g]` of `Σ_{g,1}`.
pub fn zeta(h: Homology) -> GroupWord {
    handle_product(h, h.genus())
}

/// Boundary loop `j`: `ζ` when `r = 1`, `γ_j` for `j ≥ 2`, and for `j = 1`
/// the solution `γ_1 = (γ_2⋯γ_r · Π_i[α_i,β_i])⁻¹` of the surface relation.
pub fn boundary_word(h: Homology, j: usize) -> Result<GroupWord> {
    let r = h.boundary();
    if j == 0 || j > r {
        return Err(Error::Domain(format!("boundary index {j} outside 1..={r}")));
    }
    if r == 1 {
        return Ok(zeta(h));
    }
    if j >= 2 {
        return Ok(gamma(h, j));
    }
    let mut tail = GroupWord::identity();
    for k in 2..=r {
        tail = tail.mul(&gamma(h, k));
    }
    Ok(tail.mul(&zeta(h)).inverse())
}

/// Finite rational combination of group elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GroupRingElement {
    terms: BTreeMap<GroupWord, Rational>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_word(GroupWord::identity())
    }

    pub fn from_word(w: GroupWord) -> Self {
        Self::from_terms([(w, Rational::one())])
    }

    pub fn from_terms<I: IntoIterator<Item = (GroupWord, Rational)>>(terms: I) -> Self {
        let mut map: BTreeMap<GroupWord, Rational> = BTreeMap::new();
        for (w, c) in terms {
            *map.entry(w).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        GroupRingElement { terms: map }
    }

    /// `w − 1`.
    pub fn minus_one(w: GroupWord) -> Self {
        Self::from_terms([(w, Rational::one()), (GroupWord::identity(), -Rational::one())])
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupWord, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(w, c)| (w.clone(), c.clone())),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, x)| (w.clone(), x * c)))
    }

    /// Convolution product with free reduction.
    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                terms.push((a.mul(b), x * y));
            }
        }
        Self::from_terms(terms)
    }

    /// Augmentation: sum of coefficients.
    pub fn aug(&self) -> Rational {
        self.terms.values().cloned().sum()
    }

    pub fn format(&self, alphabet: &Alphabet) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(w, c)| format!("{}*({})", c, alphabet.format(w)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| {
                if l.inv {
                    format!("x{}^-1", l.gen)
                } else {
                    format!("x{}", l.gen)
                }
            })
            .collect();
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn h11() -> Homology {
        Homology::new(1, 1).unwrap()
    }

    #[test]
    fn reduction_examples() {
        let a = Letter::new(0, false);
        let b = Letter::new(1, false);
        assert!(GroupWord::reduce([a, a.inverse()]).is_identity());
        let w = GroupWord::reduce([a, b, b.inverse(), a]);
        assert_eq!(w.letters(), &[a, a]);
        let c = GroupWord::commutator(&GroupWord::generator(0), &GroupWord::generator(1));
        assert_eq!(c.len(), 4);
        assert!(c.mul(&c.inverse()).is_identity());
    }

    #[test]
    fn parse_round_trip() {
        let al = Alphabet::surface(Homology::new(1, 2).unwrap());
        let w = al.parse("a1 b1 a1^-1 b1^-1 g2").unwrap();
        assert_eq!(al.format(&w), "a1 b1 a1^-1 b1^-1 g2");
        assert_eq!(al.parse(&al.format(&w)).unwrap(), w);
        assert_eq!(al.parse("a1^3 a1^-2").unwrap(), al.parse("a1").unwrap());
        assert!(al.parse("c1").is_err());
        assert!(al.parse("a1^x").is_err());
        assert!(al.parse("1").unwrap().is_identity());
    }

    #[test]
    fn ring_operations() {
        let a = GroupRingElement::minus_one(GroupWord::generator(0));
        let sq = a.mul(&a);
        let a2 = GroupWord::generator(0).pow(2);
        let expect = GroupRingElement::from_terms([
            (a2, int(1)),
            (GroupWord::generator(0), int(-2)),
            (GroupWord::identity(), int(1)),
        ]);
        assert_eq!(sq, expect);
        assert_eq!(a.aug(), int(0));
        let u = GroupRingElement::from_terms([(GroupWord::generator(0), int(3)), (GroupWord::generator(1), int(2))]);
        assert_eq!(u.aug(), int(5));
        assert_eq!(u.mul(&u).aug(), int(25));
    }

    #[test]
    fn boundary_words() {
        let z = boundary_word(h11(), 1).unwrap();
        assert_eq!(z.len(), 4);
        let h03 = Homology::new(0, 3).unwrap();
        assert_eq!(boundary_word(h03, 2).unwrap(), gamma(h03, 2));
        let h12 = Homology::new(1, 2).unwrap();
        let g1 = boundary_word(h12, 1).unwrap();
        // relation Π[α,β] γ_1 γ_2 = 1
        assert!(zeta(h12).mul(&g1).mul(&gamma(h12, 2)).is_identity());
        assert!(boundary_word(h12, 3).is_err());
    }

    #[test]
    fn cyclic_reduction_splits_conjugator() {
        let al = Alphabet::surface(Homology::new(2, 1).unwrap());
        let w = al.parse("b2 a1 b1 b2^-1").unwrap();
        let (c, core) = w.cyclic_reduction();
        assert_eq!(al.format(&c), "b2");
        assert_eq!(al.format(&core), "a1 b1");
        assert_eq!(c.mul(&core).mul(&c.inverse()), w);
    }
}
