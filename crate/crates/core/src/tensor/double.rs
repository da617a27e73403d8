use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::scalar::Rational;

use super::{Homology, TruncatedTensor, Word};

/// Element of `(T̂ ⊗ T̂)` truncated by total degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DoubleTensor {
    homology: Homology,
    trunc: usize,
    terms: BTreeMap<(Word, Word), Rational>,
}

impl DoubleTensor {
    pub fn zero(homology: Homology, trunc: usize) -> Self {
        DoubleTensor {
            homology,
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub(crate) fn from_pairs(homology: Homology, trunc: usize, acc: HashMap<(Word, Word), Rational>) -> Self {
        let terms = acc
            .into_iter()
            .filter(|((a, b), c)| !c.is_zero() && a.len() + b.len() <= trunc)
            .collect();
        DoubleTensor { homology, trunc, terms }
    }

    /// `u ⊗ v`, dropping pairs of total degree above the truncation.
    pub fn tensor(u: &TruncatedTensor, v: &TruncatedTensor) -> Self {
        u.same_space(v).expect("tensor spaces differ");
        let n = u.trunc();
        let mut acc = HashMap::new();
        for (a, x) in u.terms() {
            for (b, y) in v.terms() {
                if a.len() + b.len() > n {
                    break;
                }
                acc.insert((a.clone(), b.clone()), x * y);
            }
        }
        Self::from_pairs(u.homology(), n, acc)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.homology, self.trunc), (other.homology, other.trunc));
        let mut acc: HashMap<(Word, Word), Rational> = self.terms.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        for (k, v) in &other.terms {
            *acc.entry(k.clone()).or_insert_with(Rational::zero) += v;
        }
        Self::from_pairs(self.homology, self.trunc, acc)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let acc = self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        Self::from_pairs(self.homology, self.trunc, acc)
    }

    /// Componentwise product `(a⊗b)(c⊗d) = ac ⊗ bd`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!((self.homology, self.trunc), (other.homology, other.trunc));
        let mut acc: HashMap<(Word, Word), Rational> = HashMap::new();
        for ((a, b), x) in &self.terms {
            for ((c, d), y) in &other.terms {
                if a.len() + b.len() + c.len() + d.len() > self.trunc {
                    continue;
                }
                *acc.entry((a.concat(c), b.concat(d))).or_insert_with(Rational::zero) += x * y;
            }
        }
        Self::from_pairs(self.homology, self.trunc, acc)
    }
}
