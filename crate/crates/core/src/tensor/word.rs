use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// A basis word of `H^{⊗m}`: a sequence of homology basis indices.
///
/// Words are ordered by length first, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(SmallVec<[u8; 8]>);

impl Word {
    pub fn empty() -> Self {
        Word(SmallVec::new())
    }

    pub fn letter(x: u8) -> Self {
        let mut v = SmallVec::new();
        v.push(x);
        Word(v)
    }

    pub fn from_slice(letters: &[u8]) -> Self {
        Word(SmallVec::from_slice(letters))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = SmallVec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Rotation `x_{i+1} ... x_m x_1 ... x_i`.
    pub fn rotate(&self, i: usize) -> Word {
        let mut v = SmallVec::with_capacity(self.len());
        v.extend_from_slice(&self.0[i..]);
        v.extend_from_slice(&self.0[..i]);
        Word(v)
    }

    pub fn tail(&self) -> Word {
        Word::from_slice(&self.0[1..])
    }

    pub fn first(&self) -> Option<u8> {
        self.0.first().copied()
    }

    pub fn pushed(&self, x: u8) -> Word {
        let mut w = self.clone();
        w.0.push(x);
        w
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.0.as_slice())
    }
}

/// All words of length `m` over `rank` letters, in canonical order.
pub fn all_words(rank: usize, m: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..m {
        let mut next = Vec::with_capacity(out.len() * rank);
        for w in &out {
            for x in 0..rank {
                next.push(w.pushed(x as u8));
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_length_then_lex() {
        let a = Word::from_slice(&[1]);
        let b = Word::from_slice(&[0, 0]);
        let c = Word::from_slice(&[0, 1]);
        assert!(a < b && b < c);
        assert!(Word::empty() < a);
    }

    #[test]
    fn rotation_and_enumeration() {
        let w = Word::from_slice(&[0, 1, 2]);
        assert_eq!(w.rotate(1), Word::from_slice(&[1, 2, 0]));
        assert_eq!(w.rotate(0), w);
        let ws = all_words(3, 2);
        assert_eq!(ws.len(), 9);
        assert!(ws.windows(2).all(|p| p[0] < p[1]));
    }
}
