//! The completed Goldman Lie algebra in cyclic-tensor coordinates.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::expansion::Expansion;
use crate::group::{Alphabet, GroupRingElement, GroupWord};
use crate::scalar::{int, Rational};
use crate::tensor::{Homology, TruncatedTensor, Word};

/// A free homotopy class: cyclically reduced, stored as its least rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeLoop(GroupWord);

impl FreeLoop {
    pub fn new(w: &GroupWord) -> Self {
        let (_, core) = w.cyclic_reduction();
        let letters = core.letters();
        let best = (0..letters.len().max(1))
            .map(|i| {
                let mut v = letters[i.min(letters.len())..].to_vec();
                v.extend_from_slice(&letters[..i.min(letters.len())]);
                v
            })
            .min()
            .unwrap_or_default();
        FreeLoop(GroupWord::reduce(best))
    }

    pub fn word(&self) -> &GroupWord {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_identity()
    }

    pub fn inverse(&self) -> Self {
        FreeLoop::new(&self.0.inverse())
    }
}

/// Finite rational combination of free loops.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GoldmanElement {
    terms: BTreeMap<FreeLoop, Rational>,
}

impl GoldmanElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_loop(w: &GroupWord) -> Self {
        Self::from_terms([(FreeLoop::new(w), Rational::one())])
    }

    pub fn from_terms<I: IntoIterator<Item = (FreeLoop, Rational)>>(terms: I) -> Self {
        let mut map: BTreeMap<FreeLoop, Rational> = BTreeMap::new();
        for (l, c) in terms {
            *map.entry(l).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        GoldmanElement { terms: map }
    }

    /// `|u|` for a group ring element `u`.
    pub fn from_ring(u: &GroupRingElement) -> Self {
        Self::from_terms(u.terms().map(|(w, c)| (FreeLoop::new(w), c.clone())))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FreeLoop, &Rational)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .chain(&other.terms)
                .map(|(l, c)| (l.clone(), c.clone())),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(l, x)| (l.clone(), x * c)))
    }

    pub fn format(&self, alphabet: &Alphabet) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(l, c)| format!("{}*|{}|", c, alphabet.format(l.word())))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `λ_θ(|x|) = N θ(x)`, extended linearly.
pub fn lambda_theta(u: &GoldmanElement, theta: &Expansion) -> Result<TruncatedTensor> {
    let mut out = TruncatedTensor::zero(theta.homology(), theta.trunc());
    for (l, c) in u.terms() {
        out = out.add_scaled(&theta.evaluate(l.word())?.cyclicize(), c);
    }
    Ok(out)
}

/// `λ_θ(|w|)` for a single word.
pub fn lambda_word(w: &GroupWord, theta: &Expansion) -> Result<TruncatedTensor> {
    lambda_theta(&GoldmanElement::from_loop(w), theta)
}

fn require_one_boundary(h: Homology) -> Result<()> {
    if h.boundary() != 1 {
        return Err(Error::Unsupported(format!(
            "derivation model needs one boundary component, got {}",
            h.boundary()
        )));
    }
    Ok(())
}

/// The derivation of `t ∈ T̂_1`: a summand `h·w` sends `X ↦ (X·h) w`.
///
/// For `t` at truncation `N` the values are exact modulo degree `N`, so the
/// derivation is returned at truncation `N − 1`.
pub fn tensor_to_derivation(t: &TruncatedTensor) -> Result<Derivation> {
    let h = t.homology();
    require_one_boundary(h)?;
    if !t.constant_term().is_zero() {
        return Err(Error::Domain("tensor must have no degree-0 part".into()));
    }
    let n = t.trunc().saturating_sub(1);
    let rank = h.rank();
    let mut values: Vec<Vec<(Word, Rational)>> = vec![Vec::new(); rank];
    for (w, c) in t.terms() {
        let first = w.letters()[0];
        let rest = w.tail();
        for (x, vals) in values.iter_mut().enumerate() {
            let p = h.pairing(x as u8, first);
            if p != 0 {
                vals.push((rest.clone(), c * int(p)));
            }
        }
    }
    let values = values
        .into_iter()
        .map(|v| TruncatedTensor::from_terms(h, n, v))
        .collect();
    Derivation::new(h, n, values)
}

/// Inverse of [`tensor_to_derivation`]: `t = Σ_X h_X · D(X)` with `Y·h_X = δ_{XY}`,
/// returned at truncation one above the derivation's.
pub fn derivation_to_tensor(d: &Derivation) -> Result<TruncatedTensor> {
    let h = d.homology();
    require_one_boundary(h)?;
    let n = d.trunc() + 1;
    let mut out = TruncatedTensor::zero(h, n);
    for x in 0..h.rank() as u8 {
        let (hx, sign) = h.dual_vector(x)?;
        let lifted = d.value(x).lift(n);
        let term = &TruncatedTensor::letter(h, n, hx) * &lifted;
        out = out.add_scaled(&term, &int(sign));
    }
    Ok(out)
}

/// Bracket of cyclic tensors transported from derivations:
/// `[a, b] = −tensor([D_a, D_b])`, so that `a ↦ −D_a` is a Lie homomorphism.
///
/// For inputs at truncation `M` the result is exact at truncation `M − 1`.
pub fn bracket_tensors(a: &TruncatedTensor, b: &TruncatedTensor) -> Result<TruncatedTensor> {
    a.same_space(b)?;
    let m = a.trunc();
    let da = tensor_to_derivation(a)?;
    let db = tensor_to_derivation(b)?;
    let br = da.bracket(&db)?;
    let t = derivation_to_tensor(&br)?;
    let n = m.saturating_sub(1).min(t.trunc());
    Ok(-&t.truncate(n))
}

/// `λ_θ([u, v])` computed through derivations, at the truncation of `θ`.
pub fn goldman_bracket(u: &GoldmanElement, v: &GoldmanElement, theta: &Expansion) -> Result<TruncatedTensor> {
    require_one_boundary(theta.homology())?;
    let n = theta.trunc();
    goldman_bracket_raised(u, v, &theta.with_truncation(n + 1)?, n)
}

/// [`goldman_bracket`] at truncation `n` from an expansion already raised to `n + 1`.
pub fn goldman_bracket_raised(
    u: &GoldmanElement,
    v: &GoldmanElement,
    raised: &Expansion,
    n: usize,
) -> Result<TruncatedTensor> {
    require_one_boundary(raised.homology())?;
    if raised.trunc() < n + 1 {
        return Err(Error::Config(
            "expansion must be raised one degree above the output".into(),
        ));
    }
    let a = lambda_theta(u, raised)?;
    let b = lambda_theta(v, raised)?;
    Ok(bracket_tensors(&a, &b)?.truncate(n))
}

/// The operator `−D_{λ_θ(u)}` at truncation `M` for the λ-image (derivation at `M − 1`).
fn sigma_derivation(u: &GoldmanElement, theta_m: &Expansion) -> Result<Derivation> {
    Ok(tensor_to_derivation(&lambda_theta(u, theta_m)?)?.neg())
}

/// `θ(σ(u) v) = −D_{λ_θ(u)} θ(v)` for a group ring element `v`, at the truncation of `θ`.
pub fn sigma_action(u: &GoldmanElement, v: &GroupRingElement, theta: &Expansion) -> Result<TruncatedTensor> {
    require_one_boundary(theta.homology())?;
    let n = theta.trunc();
    sigma_action_raised(u, v, &theta.with_truncation(n + 2)?, n)
}

/// [`sigma_action`] at truncation `n` from an expansion already raised to `n + 2`.
pub fn sigma_action_raised(
    u: &GoldmanElement,
    v: &GroupRingElement,
    raised: &Expansion,
    n: usize,
) -> Result<TruncatedTensor> {
    require_one_boundary(raised.homology())?;
    if raised.trunc() < n + 2 {
        return Err(Error::Config(
            "expansion must be raised two degrees above the output".into(),
        ));
    }
    let d = sigma_derivation(u, raised)?;
    let tv = raised.evaluate_ring(v)?;
    Ok(d.apply(&tv)?.truncate(n))
}

/// `−D_{λ_θ(u)}` applied to a tensor `t`; exact only up to the truncation of the
/// returned tensor (one less than `t` when the derivation lowers degree).
pub fn sigma_action_tensor(u: &GoldmanElement, t: &TruncatedTensor, theta: &Expansion) -> Result<TruncatedTensor> {
    require_one_boundary(theta.homology())?;
    t.same_space(&TruncatedTensor::zero(theta.homology(), theta.trunc()))?;
    let n = theta.trunc();
    let up = theta.with_truncation(n + 1)?;
    let d = sigma_derivation(u, &up)?;
    d.apply(t)
}

/// Membership flags for the Lie algebras of symplectic derivations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LieMembership {
    /// Cyclic tensor (symplectic derivation).
    pub a_minus: bool,
    /// Cyclic and of degree at least 2.
    pub a: bool,
    /// Cyclic with Lie-like derivation values.
    pub l: bool,
    /// In `l` and of degree at least 3.
    pub l_plus: bool,
}

pub fn lie_membership(t: &TruncatedTensor) -> Result<LieMembership> {
    require_one_boundary(t.homology())?;
    let low = t.low_degree().unwrap_or(usize::MAX);
    let a_minus = t.is_cyclic();
    let a = a_minus && low >= 2;
    let l = a_minus && tensor_to_derivation(t)?.stabilizes_coproduct();
    let l_plus = l && low >= 3;
    Ok(LieMembership { a_minus, a, l, l_plus })
}

/// Group law on cyclic tensors of degree `≥ 3`, transported from composition of
/// `exp(−D_a)`: the result `c` satisfies `exp(−D_c) = exp(−D_a) ∘ exp(−D_b)`.
pub fn goldman_bch(a: &TruncatedTensor, b: &TruncatedTensor) -> Result<TruncatedTensor> {
    a.same_space(b)?;
    for t in [a, b] {
        if t.low_degree().is_some_and(|d| d < 3) {
            return Err(Error::Domain("group law needs tensors of degree at least 3".into()));
        }
    }
    let ua = tensor_to_derivation(a)?.neg().exp()?;
    let ub = tensor_to_derivation(b)?.neg().exp()?;
    let d = ua.compose(&ub)?.log()?;
    Ok(-&derivation_to_tensor(&d)?.truncate(a.trunc()))
}
