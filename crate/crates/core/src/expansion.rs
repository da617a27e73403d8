//! Group-like expansions `θ: π → T̂`.

use std::fmt;

use serde_json::json;

use crate::error::{Error, Result};
use crate::group::{alpha, gamma, handle_product, zeta, Alphabet, GroupRingElement, GroupWord};
use crate::lie;
use crate::scalar::Rational;
use crate::tensor::{Homology, SurfaceSignature, TruncatedTensor};

/// Standard-form curves `η` for which a curve-adapted expansion is built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurveCase {
    /// `η = α_1`.
    NonSeparating,
    /// `η = γ_{k+1}⋯γ_r [α_1,β_1]⋯[α_h,β_h]`.
    SeparatingHomologous { k: usize, h: usize },
    /// `η = [α_1,β_1]⋯[α_h,β_h]`.
    SeparatingNullHomologous { h: usize },
}

impl CurveCase {
    pub fn validate(&self, hom: Homology) -> Result<()> {
        let ok = match *self {
            CurveCase::NonSeparating => hom.genus() >= 1,
            CurveCase::SeparatingHomologous { k, h } => {
                hom.boundary() >= 2 && k >= 1 && k < hom.boundary() && h <= hom.genus()
            }
            CurveCase::SeparatingNullHomologous { h } => h >= 1 && h <= hom.genus(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "curve descriptor {self:?} inconsistent with genus {} and {} boundary components",
                hom.genus(),
                hom.boundary()
            )))
        }
    }

    pub fn eta(&self, hom: Homology) -> Result<GroupWord> {
        self.validate(hom)?;
        Ok(match *self {
            CurveCase::NonSeparating => alpha(hom, 1),
            CurveCase::SeparatingHomologous { k, h } => {
                let mut w = GroupWord::identity();
                for j in k + 1..=hom.boundary() {
                    w = w.mul(&gamma(hom, j));
                }
                w.mul(&handle_product(hom, h))
            }
            CurveCase::SeparatingNullHomologous { h } => handle_product(hom, h),
        })
    }

    /// The prescribed value of `log θ(η)`.
    pub fn target_log(&self, hom: Homology, trunc: usize) -> Result<TruncatedTensor> {
        self.validate(hom)?;
        Ok(match *self {
            CurveCase::NonSeparating => TruncatedTensor::letter(hom, trunc, hom.a(1)),
            CurveCase::SeparatingHomologous { k, .. } => {
                let mut t = TruncatedTensor::zero(hom, trunc);
                for j in k + 1..=hom.boundary() {
                    t = &t + &TruncatedTensor::letter(hom, trunc, hom.c(j));
                }
                t
            }
            CurveCase::SeparatingNullHomologous { h } => hom.omega_partial(h, trunc),
        })
    }

    /// Degree-2 class `η'_0 = Σ_{i≤h} [A_i,B_i]` for the null-homologous case.
    pub fn eta_prime_zero(&self, hom: Homology) -> Option<TruncatedTensor> {
        match *self {
            CurveCase::SeparatingNullHomologous { h } => Some(hom.omega_partial(h, 2)),
            _ => None,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid curve descriptor `{text}`"));
        let t = text.trim();
        if t == "nonsep" {
            return Ok(CurveCase::NonSeparating);
        }
        if let Some(rest) = t.strip_prefix("sep-null:") {
            return Ok(CurveCase::SeparatingNullHomologous {
                h: rest.parse().map_err(|_| bad())?,
            });
        }
        if let Some(rest) = t.strip_prefix("sep-hom:") {
            let (k, h) = rest.split_once(',').ok_or_else(bad)?;
            return Ok(CurveCase::SeparatingHomologous {
                k: k.trim().parse().map_err(|_| bad())?,
                h: h.trim().parse().map_err(|_| bad())?,
            });
        }
        Err(bad())
    }
}

impl fmt::Display for CurveCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveCase::NonSeparating => write!(f, "nonsep"),
            CurveCase::SeparatingHomologous { k, h } => write!(f, "sep-hom:{k},{h}"),
            CurveCase::SeparatingNullHomologous { h } => write!(f, "sep-null:{h}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpansionKind {
    Exponential,
    Symplectic,
    CurveAdapted(CurveCase),
    /// Built from user-supplied generator logarithms.
    Custom,
}

/// Lowest nonzero degree, or "at least `N+1`" when nothing survives truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Filtration {
    Degree(usize),
    AtLeast(usize),
}

impl Filtration {
    pub fn of(t: &TruncatedTensor) -> Self {
        match t.low_degree() {
            Some(d) => Filtration::Degree(d),
            None => Filtration::AtLeast(t.trunc() + 1),
        }
    }

    /// Lower bound on the degree.
    pub fn bound(&self) -> usize {
        match *self {
            Filtration::Degree(d) | Filtration::AtLeast(d) => d,
        }
    }
}

impl fmt::Display for Filtration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Filtration::Degree(d) => write!(f, "{d}"),
            Filtration::AtLeast(d) => write!(f, ">={d}"),
        }
    }
}

/// A group-like expansion, stored through the logarithms of the generator images.
#[derive(Clone, Debug)]
pub struct Expansion {
    sig: SurfaceSignature,
    kind: ExpansionKind,
    logs: Vec<TruncatedTensor>,
    images: Vec<TruncatedTensor>,
    inverses: Vec<TruncatedTensor>,
}

fn exponential_logs(sig: &SurfaceSignature) -> Vec<TruncatedTensor> {
    let h = sig.homology();
    (0..h.rank())
        .map(|x| TruncatedTensor::letter(h, sig.trunc, x as u8))
        .collect()
}

impl Expansion {
    fn from_logs_unchecked(sig: SurfaceSignature, kind: ExpansionKind, logs: Vec<TruncatedTensor>) -> Self {
        let images = logs
            .iter()
            .map(|l| l.exp().expect("log has no constant term"))
            .collect();
        let inverses = logs
            .iter()
            .map(|l| (-l).exp().expect("log has no constant term"))
            .collect();
        Expansion {
            sig,
            kind,
            logs,
            images,
            inverses,
        }
    }

    /// `θ(x) = exp([x])` on every free generator.
    pub fn exponential(sig: SurfaceSignature) -> Self {
        Self::from_logs_unchecked(sig, ExpansionKind::Exponential, exponential_logs(&sig))
    }

    /// An expansion with `θ(ζ) = exp ω`; requires one boundary component.
    pub fn symplectic(sig: SurfaceSignature) -> Result<Self> {
        if sig.boundary != 1 {
            return Err(Error::Unsupported(
                "symplectic expansions are defined for one boundary component".into(),
            ));
        }
        let mut logs = exponential_logs(&sig);
        correct_handles(&sig, &mut logs, sig.genus)?;
        Ok(Self::from_logs_unchecked(sig, ExpansionKind::Symplectic, logs))
    }

    /// An expansion adapted to a standard-form curve `η`.
    pub fn curve_adapted(sig: SurfaceSignature, case: CurveCase) -> Result<Self> {
        let hom = sig.homology();
        case.validate(hom)?;
        let mut logs = exponential_logs(&sig);
        match case {
            CurveCase::NonSeparating => {}
            CurveCase::SeparatingNullHomologous { h } => correct_handles(&sig, &mut logs, h)?,
            CurveCase::SeparatingHomologous { .. } => {
                let eta = case.eta(hom)?;
                let last = hom.c(hom.boundary()) as usize;
                for p in 2..=sig.trunc {
                    let partial = Self::from_logs_unchecked(sig, ExpansionKind::Custom, logs.clone());
                    let l = partial.evaluate_word(&eta).log()?.degree_part(p);
                    logs[last] = &logs[last] - &l;
                }
            }
        }
        Ok(Self::from_logs_unchecked(sig, ExpansionKind::CurveAdapted(case), logs))
    }

    /// Builds an expansion from generator logarithms, which must be Lie-like with
    /// degree-1 part equal to the generator's class.
    pub fn from_logs(sig: SurfaceSignature, logs: Vec<TruncatedTensor>) -> Result<Self> {
        let hom = sig.homology();
        if logs.len() != hom.rank() {
            return Err(Error::Config(format!("expected {} generator logs", hom.rank())));
        }
        for (x, l) in logs.iter().enumerate() {
            if l.homology() != hom || l.trunc() != sig.trunc {
                return Err(Error::Config("generator log in the wrong space".into()));
            }
            let lin = TruncatedTensor::letter(hom, sig.trunc, x as u8);
            if l.filter_degrees(|d| d <= 1) != lin {
                return Err(Error::Domain(format!(
                    "generator {} log must be {} plus higher terms",
                    x,
                    hom.label(x as u8)
                )));
            }
            if !l.is_lie_like() {
                return Err(Error::Domain("generator logs must be Lie-like".into()));
            }
        }
        Ok(Self::from_logs_unchecked(sig, ExpansionKind::Custom, logs))
    }

    pub fn signature(&self) -> SurfaceSignature {
        self.sig
    }

    pub fn homology(&self) -> Homology {
        self.sig.homology()
    }

    pub fn trunc(&self) -> usize {
        self.sig.trunc
    }

    pub fn kind(&self) -> &ExpansionKind {
        &self.kind
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::surface(self.homology())
    }

    pub fn generator_log(&self, gen: usize) -> &TruncatedTensor {
        &self.logs[gen]
    }

    pub fn generator_image(&self, gen: usize) -> &TruncatedTensor {
        &self.images[gen]
    }

    /// The same construction at another truncation.
    pub fn with_truncation(&self, trunc: usize) -> Result<Self> {
        let sig = self.sig.with_trunc(trunc);
        match &self.kind {
            ExpansionKind::Exponential => Ok(Self::exponential(sig)),
            ExpansionKind::Symplectic => Self::symplectic(sig),
            ExpansionKind::CurveAdapted(c) => Self::curve_adapted(sig, *c),
            ExpansionKind::Custom => {
                if trunc > self.sig.trunc {
                    return Err(Error::Unsupported(
                        "a custom expansion cannot be extended past its truncation".into(),
                    ));
                }
                let logs = self.logs.iter().map(|l| l.truncate(trunc)).collect();
                Ok(Self::from_logs_unchecked(sig, ExpansionKind::Custom, logs))
            }
        }
    }

    fn check_word(&self, w: &GroupWord) -> Result<()> {
        if w.generator_bound() > self.homology().rank() {
            return Err(Error::Config("word uses generators outside the signature".into()));
        }
        Ok(())
    }

    /// `θ(w)`; panics if `w` uses generators outside the signature.
    pub fn evaluate_word(&self, w: &GroupWord) -> TruncatedTensor {
        self.check_word(w).expect("word outside signature");
        let mut out = TruncatedTensor::one(self.homology(), self.trunc());
        for l in w.letters() {
            let f = if l.inv {
                &self.inverses[l.gen as usize]
            } else {
                &self.images[l.gen as usize]
            };
            out = &out * f;
        }
        out
    }

    pub fn evaluate(&self, w: &GroupWord) -> Result<TruncatedTensor> {
        self.check_word(w)?;
        Ok(self.evaluate_word(w))
    }

    pub fn evaluate_ring(&self, u: &GroupRingElement) -> Result<TruncatedTensor> {
        let mut out = TruncatedTensor::zero(self.homology(), self.trunc());
        for (w, c) in u.terms() {
            out = out.add_scaled(&self.evaluate(w)?, c);
        }
        Ok(out)
    }

    /// `log θ(w)`.
    pub fn evaluate_log(&self, w: &GroupWord) -> Result<TruncatedTensor> {
        self.evaluate(w)?.log()
    }

    /// I-adic degree of `u`, read off from `θ(u)`.
    pub fn filtration_degree(&self, u: &GroupRingElement) -> Result<Filtration> {
        Ok(Filtration::of(&self.evaluate_ring(u)?))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let al = self.alphabet();
        let kind = match &self.kind {
            ExpansionKind::Exponential => "exponential".to_string(),
            ExpansionKind::Symplectic => "symplectic".to_string(),
            ExpansionKind::CurveAdapted(c) => format!("curve:{c}"),
            ExpansionKind::Custom => "custom".to_string(),
        };
        let gens: Vec<serde_json::Value> = self
            .images
            .iter()
            .enumerate()
            .map(|(i, t)| json!({"generator": al.names()[i], "image": t.to_json_value()}))
            .collect();
        json!({
            "genus": self.sig.genus,
            "boundary": self.sig.boundary,
            "trunc": self.sig.trunc,
            "kind": kind,
            "generators": gens,
        })
    }
}

/// Adjusts the logs of `α_i, β_i` (`i ≤ h`) so that `log θ([α_1,β_1]⋯[α_h,β_h]) = Σ_{i≤h}[A_i,B_i]`.
///
/// In degree `p` the discrepancy `δ` is a Lie element, so `−δ = Σ_X [X, r((−δ)_X)/p]`
/// with `r` the Dynkin operator and `(−δ)_X` the left factor at `X`; the terms for
/// `X = A_i` and `X = B_i` are absorbed into `β_i` and `α_i` in degree `p − 1`.
///
/// The degree-`N` part of the logs is fixed by the step `p = N + 1`, so the work is
/// done one degree higher and then truncated; this keeps the result prefix-stable.
fn correct_handles(sig: &SurfaceSignature, logs: &mut [TruncatedTensor], h: usize) -> Result<()> {
    let n = sig.trunc;
    let sig = &sig.with_trunc(n + 1);
    let mut work: Vec<TruncatedTensor> = logs.iter().map(|l| l.lift(n + 1)).collect();
    correct_handles_raw(sig, &mut work, h)?;
    for (l, w) in logs.iter_mut().zip(work) {
        *l = w.truncate(n);
    }
    Ok(())
}

fn correct_handles_raw(sig: &SurfaceSignature, logs: &mut [TruncatedTensor], h: usize) -> Result<()> {
    let hom = sig.homology();
    let target = hom.omega_partial(h, sig.trunc);
    let word = handle_product(hom, h);
    for p in 3..=sig.trunc {
        let short: Vec<TruncatedTensor> = logs.iter().map(|l| l.truncate(p)).collect();
        let current = Expansion::from_logs_unchecked(sig.with_trunc(p), ExpansionKind::Custom, short);
        let delta = (&current.evaluate_word(&word).log()? - &target.truncate(p))
            .degree_part(p)
            .lift(sig.trunc);
        if delta.is_zero() {
            continue;
        }
        let minus = -&delta;
        let scale = Rational::new(1.into(), (p as i64).into());
        for i in 1..=h {
            let (a, b) = (hom.a(i), hom.b(i));
            let la = lie::dynkin(&minus.left_factor(a)).scale(&scale);
            let lb = lie::dynkin(&minus.left_factor(b)).scale(&scale);
            logs[b as usize] = &logs[b as usize] + &la;
            logs[a as usize] = &logs[a as usize] - &lb;
        }
    }
    Ok(())
}

/// `θ(ζ)` for a one-boundary surface.
pub fn zeta_image(theta: &Expansion) -> TruncatedTensor {
    theta.evaluate_word(&zeta(theta.homology()))
}
