//! Continuous derivations and automorphisms of the truncated tensor algebra, both
//! recorded by their values on the letters of `H`.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rational;
use crate::tensor::{accumulate, Homology, TruncatedTensor, Word};

/// A derivation `D` with `D(X)` known modulo `T̂_{N+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    homology: Homology,
    trunc: usize,
    values: Vec<TruncatedTensor>,
}

impl Derivation {
    pub fn new(homology: Homology, trunc: usize, values: Vec<TruncatedTensor>) -> Result<Self> {
        if values.len() != homology.rank() {
            return Err(Error::Config(format!(
                "derivation needs {} values, got {}",
                homology.rank(),
                values.len()
            )));
        }
        for v in &values {
            if v.homology() != homology || v.trunc() != trunc {
                return Err(Error::Config("derivation value in the wrong space".into()));
            }
        }
        Ok(Derivation {
            homology,
            trunc,
            values,
        })
    }

    pub fn zero(homology: Homology, trunc: usize) -> Self {
        let values = (0..homology.rank())
            .map(|_| TruncatedTensor::zero(homology, trunc))
            .collect();
        Derivation {
            homology,
            trunc,
            values,
        }
    }

    pub fn homology(&self) -> Homology {
        self.homology
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn value(&self, x: u8) -> &TruncatedTensor {
        &self.values[x as usize]
    }

    pub fn values(&self) -> &[TruncatedTensor] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(TruncatedTensor::is_zero)
    }

    /// Whether some `D(X)` has a degree-0 part, so that `D` lowers degree by one.
    pub fn lowers_degree(&self) -> bool {
        self.values.iter().any(|v| !v.constant_term().is_zero())
    }

    /// Truncation of `D(u)` for `u` at this truncation.
    pub fn output_trunc(&self) -> usize {
        if self.lowers_degree() {
            self.trunc.saturating_sub(1)
        } else {
            self.trunc
        }
    }

    pub fn truncate(&self, trunc: usize) -> Self {
        let values = self.values.iter().map(|v| v.truncate(trunc)).collect();
        Derivation {
            homology: self.homology,
            trunc,
            values,
        }
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.homology != other.homology || self.trunc != other.trunc {
            return Err(Error::Config("derivations live in different spaces".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Derivation {
            homology: self.homology,
            trunc: self.trunc,
            values,
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let values = self.values.iter().map(|v| v.scale(c)).collect();
        Derivation {
            homology: self.homology,
            trunc: self.trunc,
            values,
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    /// Leibniz extension.
    ///
    /// `u` may carry a higher truncation; it is first cut down to this derivation's
    /// truncation. The result lives at [`Derivation::output_trunc`].
    pub fn apply(&self, u: &TruncatedTensor) -> Result<TruncatedTensor> {
        if u.homology() != self.homology {
            return Err(Error::Config(
                "derivation applied to a tensor of another homology".into(),
            ));
        }
        if u.trunc() < self.trunc {
            return Err(Error::Config(format!(
                "tensor truncation {} below derivation truncation {}",
                u.trunc(),
                self.trunc
            )));
        }
        let out_n = self.output_trunc();
        let mut acc: HashMap<Word, Rational> = HashMap::new();
        for (w, c) in u.terms() {
            if w.len() > self.trunc {
                break;
            }
            let letters = w.letters();
            for i in 0..letters.len() {
                let budget = out_n + 1 - letters.len().min(out_n + 1);
                let prefix = &letters[..i];
                let suffix = &letters[i + 1..];
                for (v, d) in self.values[letters[i] as usize].terms() {
                    if v.len() > budget {
                        break;
                    }
                    let mut word = Vec::with_capacity(letters.len() - 1 + v.len());
                    word.extend_from_slice(prefix);
                    word.extend_from_slice(v.letters());
                    word.extend_from_slice(suffix);
                    accumulate(&mut acc, Word::from_slice(&word), c * d);
                }
            }
        }
        Ok(TruncatedTensor::from_terms(self.homology, out_n, acc))
    }

    /// `[D, D'](X) = D(D'(X)) − D'(D(X))`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let mut values = Vec::with_capacity(self.values.len());
        for x in 0..self.values.len() {
            let a = self.apply(&other.values[x])?;
            let b = other.apply(&self.values[x])?;
            let n = a.trunc().min(b.trunc());
            values.push(&a.truncate(n) - &b.truncate(n));
        }
        let n = values.first().map(TruncatedTensor::trunc).unwrap_or(self.trunc);
        Ok(Derivation {
            homology: self.homology,
            trunc: n,
            values,
        })
    }

    /// Matrix of the degree-1 part: entry `[y][x]` is the coefficient of `Y` in `D(X)`.
    pub fn linear_part(&self) -> Vec<Vec<Rational>> {
        let n = self.homology.rank();
        let mut m = vec![vec![Rational::zero(); n]; n];
        for (x, v) in self.values.iter().enumerate() {
            for (w, c) in v.terms() {
                if w.len() == 1 {
                    m[w.letters()[0] as usize][x] = c.clone();
                }
            }
        }
        m
    }

    /// Checks that `D` preserves the filtration and is nilpotent on `H`.
    pub fn check_convergence(&self) -> Result<()> {
        if self.lowers_degree() {
            return Err(Error::Convergence("derivation does not preserve the filtration".into()));
        }
        let m = self.linear_part();
        let n = m.len();
        let mut p = m.clone();
        for _ in 1..n.max(1) {
            p = mat_mul(&p, &m);
        }
        if n > 0 && p.iter().flatten().any(|c| !c.is_zero()) {
            return Err(Error::Convergence(
                "degree-1 part of the derivation is not nilpotent".into(),
            ));
        }
        Ok(())
    }

    /// `exp(D) = Σ D^k / k!` as an automorphism.
    pub fn exp(&self) -> Result<Automorphism> {
        self.check_convergence()?;
        let cap = series_cap(self.homology.rank(), self.trunc);
        let mut images = Vec::with_capacity(self.values.len());
        for x in 0..self.values.len() {
            let mut term = TruncatedTensor::letter(self.homology, self.trunc, x as u8);
            let mut sum = term.clone();
            let mut k = 1usize;
            loop {
                term = self.apply(&term)?.scale(&Rational::new(1.into(), (k as i64).into()));
                if term.is_zero() {
                    break;
                }
                sum = &sum + &term;
                k += 1;
                if k > cap {
                    return Err(Error::Convergence("exponential series did not terminate".into()));
                }
            }
            images.push(sum);
        }
        Ok(Automorphism {
            homology: self.homology,
            trunc: self.trunc,
            images,
        })
    }

    /// `exp(D)(u) = Σ D^k(u)/k!`, computed by iterating the derivation on `u`.
    pub fn exp_apply(&self, u: &TruncatedTensor) -> Result<TruncatedTensor> {
        self.check_convergence()?;
        if u.homology() != self.homology || u.trunc() != self.trunc {
            return Err(Error::Config("tensor and derivation live in different spaces".into()));
        }
        let cap = series_cap(self.homology.rank(), self.trunc);
        let mut term = u.clone();
        let mut sum = u.clone();
        for k in 1..=cap + 1 {
            term = self.apply(&term)?.scale(&Rational::new(1.into(), (k as i64).into()));
            if term.is_zero() {
                return Ok(sum);
            }
            sum = &sum + &term;
        }
        Err(Error::Convergence("exponential series did not terminate".into()))
    }

    /// `D(u) = 0`.
    pub fn annihilates(&self, u: &TruncatedTensor) -> Result<bool> {
        Ok(self.apply(u)?.is_zero())
    }

    /// Every `D(X)` is Lie-like, so that `D` preserves the coproduct.
    pub fn stabilizes_coproduct(&self) -> bool {
        self.values.iter().all(TruncatedTensor::is_lie_like)
    }
}

fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    let mut out = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

/// Bound on the number of nonzero powers `D^k(X)`, from `ν = rank` and the filtration length.
fn series_cap(rank: usize, trunc: usize) -> usize {
    let nu = rank.max(1);
    let n = trunc + 1;
    n + n * (n - 1) / 2 * (nu - 1) + 1
}

/// An algebra endomorphism given by the images of the letters (without degree-0 parts).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    homology: Homology,
    trunc: usize,
    images: Vec<TruncatedTensor>,
}

impl Automorphism {
    pub fn new(homology: Homology, trunc: usize, images: Vec<TruncatedTensor>) -> Result<Self> {
        if images.len() != homology.rank() {
            return Err(Error::Config("one image per letter is required".into()));
        }
        for v in &images {
            if v.homology() != homology || v.trunc() != trunc {
                return Err(Error::Config("automorphism image in the wrong space".into()));
            }
            if !v.constant_term().is_zero() {
                return Err(Error::Domain("letter images must have no degree-0 part".into()));
            }
        }
        Ok(Automorphism {
            homology,
            trunc,
            images,
        })
    }

    pub fn identity(homology: Homology, trunc: usize) -> Self {
        let images = (0..homology.rank())
            .map(|x| TruncatedTensor::letter(homology, trunc, x as u8))
            .collect();
        Automorphism {
            homology,
            trunc,
            images,
        }
    }

    pub fn homology(&self) -> Homology {
        self.homology
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn image(&self, x: u8) -> &TruncatedTensor {
        &self.images[x as usize]
    }

    pub fn images(&self) -> &[TruncatedTensor] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.homology, self.trunc)
    }

    /// Substitutes the letter images into `u`.
    pub fn apply(&self, u: &TruncatedTensor) -> Result<TruncatedTensor> {
        if u.homology() != self.homology || u.trunc() != self.trunc {
            return Err(Error::Config(
                "automorphism applied to a tensor of another space".into(),
            ));
        }
        Ok(self.substitute(u))
    }

    fn substitute(&self, u: &TruncatedTensor) -> TruncatedTensor {
        self.substitute_capped(u, self.trunc)
    }

    /// Substitution keeping degrees `≤ cap`; each trie level spends one degree.
    fn substitute_capped(&self, u: &TruncatedTensor, cap: usize) -> TruncatedTensor {
        let mut out = TruncatedTensor::scalar(self.homology, self.trunc, u.constant_term());
        if cap == 0 || u.max_degree().unwrap_or(0) == 0 {
            return out;
        }
        for x in 0..self.images.len() {
            let ux = u.left_factor(x as u8);
            if ux.is_zero() {
                continue;
            }
            let inner = self.substitute_capped(&ux.filter_degrees(|d| d < cap), cap - 1);
            out = &out + &self.images[x].mul_capped(&inner, cap);
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.homology != other.homology || self.trunc != other.trunc {
            return Err(Error::Config("automorphisms live in different spaces".into()));
        }
        let images = other.images.iter().map(|v| self.substitute(v)).collect();
        Ok(Automorphism {
            homology: self.homology,
            trunc: self.trunc,
            images,
        })
    }

    /// Whether `U(X) − X` lies in degree `≥ 2` for every letter.
    pub fn is_unipotent(&self) -> bool {
        self.images.iter().enumerate().all(|(x, v)| {
            let lin = TruncatedTensor::letter(self.homology, self.trunc, x as u8);
            (v - &lin).low_degree().map_or(true, |d| d >= 2)
        })
    }

    /// Inverse of an automorphism whose degree-1 part is the identity.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unipotent() {
            return Err(Error::Unsupported(
                "inverse is implemented for automorphisms tangent to the identity".into(),
            ));
        }
        let id = Self::identity(self.homology, self.trunc);
        let mut c = id.clone();
        for _ in 0..self.trunc {
            let err: Vec<TruncatedTensor> = c
                .images
                .iter()
                .zip(&id.images)
                .map(|(v, x)| &self.substitute(v) - x)
                .collect();
            if err.iter().all(TruncatedTensor::is_zero) {
                break;
            }
            c.images = c.images.iter().zip(&err).map(|(v, e)| v - e).collect();
        }
        Ok(c)
    }

    /// `log U = Σ (−1)^{n−1}/n (U − 1)^n`, for `U` tangent to the identity.
    pub fn log(&self) -> Result<Derivation> {
        if !self.is_unipotent() {
            return Err(Error::Convergence("U − id does not raise degree on generators".into()));
        }
        let mut values = Vec::with_capacity(self.images.len());
        for x in 0..self.images.len() {
            let mut v = TruncatedTensor::letter(self.homology, self.trunc, x as u8);
            let mut sum = TruncatedTensor::zero(self.homology, self.trunc);
            for n in 1..=self.trunc {
                v = &self.substitute(&v) - &v;
                if v.is_zero() {
                    break;
                }
                let sign = if n % 2 == 1 { 1 } else { -1 };
                sum = sum.add_scaled(&v, &Rational::new(sign.into(), (n as i64).into()));
            }
            values.push(sum);
        }
        Ok(Derivation {
            homology: self.homology,
            trunc: self.trunc,
            values,
        })
    }
}

/// `log` of an automorphism table, as a derivation table.
pub fn log_automorphism(u: &Automorphism) -> Result<Derivation> {
    u.log()
}

/// The derivation with the listed values on some letters and 0 on the others.
pub fn derivation_from_pairs(homology: Homology, trunc: usize, pairs: &[(u8, TruncatedTensor)]) -> Result<Derivation> {
    let mut d = Derivation::zero(homology, trunc);
    for (x, v) in pairs {
        if v.homology() != homology || v.trunc() != trunc {
            return Err(Error::Config("derivation value in the wrong space".into()));
        }
        d.values[*x as usize] = v.clone();
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn h() -> Homology {
        Homology::new(1, 1).unwrap()
    }

    #[test]
    fn leibniz_examples() {
        let h = h();
        let b = TruncatedTensor::letter(h, 3, 1);
        let d = derivation_from_pairs(h, 3, &[(0, b)]).unwrap();
        let aa = TruncatedTensor::monomial(h, 3, &[0, 0], int(1));
        let expect =
            &TruncatedTensor::monomial(h, 3, &[1, 0], int(1)) + &TruncatedTensor::monomial(h, 3, &[0, 1], int(1));
        assert_eq!(d.apply(&aa).unwrap(), expect);
        assert!(d.apply(&TruncatedTensor::one(h, 3)).unwrap().is_zero());
    }

    #[test]
    fn bracket_antisymmetry() {
        let h = h();
        let a = TruncatedTensor::letter(h, 4, 0);
        let b = TruncatedTensor::letter(h, 4, 1);
        let d1 = derivation_from_pairs(h, 4, &[(1, &a * &a)]).unwrap();
        let d2 = derivation_from_pairs(h, 4, &[(0, &b * &a)]).unwrap();
        let x = d1.bracket(&d2).unwrap();
        let y = d2.bracket(&d1).unwrap();
        assert_eq!(x, y.neg());
        assert!(d1.bracket(&d1).unwrap().is_zero());
    }

    #[test]
    fn exp_log_round_trip() {
        let h = h();
        let a = TruncatedTensor::letter(h, 5, 0);
        let b = TruncatedTensor::letter(h, 5, 1);
        let d = derivation_from_pairs(h, 5, &[(1, &(&a * &b) - &(&b * &a)), (0, &a * &a)]).unwrap();
        let u = d.exp().unwrap();
        assert_eq!(u.log().unwrap(), d);
        let ui = d.neg().exp().unwrap();
        assert!(u.compose(&ui).unwrap().is_identity());
        assert_eq!(u.inverse().unwrap(), ui);
    }

    #[test]
    fn convergence_checks() {
        let h = h();
        let one = TruncatedTensor::one(h, 3);
        let d = derivation_from_pairs(h, 3, &[(0, one)]).unwrap();
        assert!(matches!(d.exp(), Err(Error::Convergence(_))));
        let a = TruncatedTensor::letter(h, 3, 0);
        let d = derivation_from_pairs(h, 3, &[(0, a)]).unwrap();
        assert!(matches!(d.exp(), Err(Error::Convergence(_))));
        let b = TruncatedTensor::letter(h, 3, 1);
        let d = derivation_from_pairs(h, 3, &[(0, b)]).unwrap();
        let u = d.exp().unwrap();
        assert!(matches!(u.log(), Err(Error::Convergence(_))));
    }

    #[test]
    fn substitution_is_multiplicative() {
        let h = h();
        let a = TruncatedTensor::letter(h, 4, 0);
        let b = TruncatedTensor::letter(h, 4, 1);
        let u = Automorphism::new(h, 4, vec![&a + &(&a * &b), &b - &(&a * &a)]).unwrap();
        let p = &(&a + &b) * &(&a * &b);
        let lhs = u.apply(&p).unwrap();
        let rhs = &u.apply(&(&a + &b)).unwrap() * &u.apply(&(&a * &b)).unwrap();
        assert_eq!(lhs, rhs);
    }
}
