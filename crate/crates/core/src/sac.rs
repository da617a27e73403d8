//! Filtered algebras of finitely generated free groupoids.
//!
//! Objects `p_0, …, p_{k−1}`, tree arcs `δ_j: p_0 → p_j`, and free loop generators at
//! `p_0`. A morphism `p_i → p_j` is stored as `δ_i⁻¹ · P · δ_j` with `P` in the completed
//! group algebra of the loops, written in Magnus coordinates `x ↦ 1 + X` and truncated.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::derivation::{Automorphism, Derivation};
use crate::error::{Error, Result};
use crate::expansion::Filtration;
use crate::group::{Alphabet, GroupWord};
use crate::scalar::{parse_rational, Rational};
use crate::tensor::{DoubleTensor, Homology, TruncatedTensor, Word};

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ArcJson {
    pub name: String,
    pub target: String,
}

/// On-disk form of a groupoid specification.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct GroupoidJson {
    pub objects: Vec<String>,
    pub arcs: Vec<ArcJson>,
    pub loops: Vec<String>,
    pub trunc: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeGroupoidSpec {
    objects: Vec<String>,
    arc_names: Vec<Option<String>>,
    loops: Vec<String>,
    trunc: usize,
    homology: Homology,
}

impl FreeGroupoidSpec {
    /// `arcs` lists `(arc name, target object)`; arcs always start at the first object.
    pub fn new(objects: Vec<String>, arcs: Vec<(String, String)>, loops: Vec<String>, trunc: usize) -> Result<Self> {
        if objects.is_empty() {
            return Err(Error::Config("a groupoid needs at least one object".into()));
        }
        if trunc == 0 {
            return Err(Error::Config("truncation must be at least 1".into()));
        }
        let mut names: Vec<&String> = objects
            .iter()
            .chain(loops.iter())
            .chain(arcs.iter().map(|a| &a.0))
            .collect();
        names.sort();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("object, arc and loop names must be distinct".into()));
        }
        let mut arc_names = vec![None; objects.len()];
        for (name, target) in arcs {
            let j = objects
                .iter()
                .position(|o| *o == target)
                .ok_or_else(|| Error::Config(format!("arc `{name}` targets unknown object `{target}`")))?;
            if j == 0 {
                return Err(Error::Config(
                    "tree arcs start at the base object and cannot end there".into(),
                ));
            }
            if arc_names[j].is_some() {
                return Err(Error::Config(format!("object `{target}` has two tree arcs")));
            }
            arc_names[j] = Some(name);
        }
        let homology = Homology::new(0, loops.len() + 1)?;
        Ok(FreeGroupoidSpec {
            objects,
            arc_names,
            loops,
            trunc,
            homology,
        })
    }

    pub fn from_json_struct(data: &GroupoidJson) -> Result<Self> {
        Self::new(
            data.objects.clone(),
            data.arcs.iter().map(|a| (a.name.clone(), a.target.clone())).collect(),
            data.loops.clone(),
            data.trunc,
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let data: GroupoidJson = serde_json::from_str(text).map_err(|e| Error::Parse(format!("groupoid JSON: {e}")))?;
        Self::from_json_struct(&data)
    }

    pub fn to_json_struct(&self) -> GroupoidJson {
        GroupoidJson {
            objects: self.objects.clone(),
            arcs: self
                .arc_names
                .iter()
                .enumerate()
                .filter_map(|(j, a)| {
                    a.as_ref().map(|n| ArcJson {
                        name: n.clone(),
                        target: self.objects[j].clone(),
                    })
                })
                .collect(),
            loops: self.loops.clone(),
            trunc: self.trunc,
        }
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    /// Payload space: one letter per loop generator.
    pub fn homology(&self) -> Homology {
        self.homology
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn loops(&self) -> &[String] {
        &self.loops
    }

    pub fn loop_alphabet(&self) -> Alphabet {
        Alphabet::new(self.loops.clone())
    }

    pub fn object_index(&self, name: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::Parse(format!("unknown object `{name}`")))
    }

    pub fn loop_index(&self, name: &str) -> Result<usize> {
        self.loops
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::Parse(format!("unknown loop `{name}`")))
    }

    /// Object reached by the named arc.
    pub fn arc_index(&self, name: &str) -> Result<usize> {
        self.arc_names
            .iter()
            .position(|a| a.as_deref() == Some(name))
            .ok_or_else(|| Error::Parse(format!("unknown arc `{name}`")))
    }

    pub fn arc_name(&self, j: usize) -> Option<&str> {
        self.arc_names[j].as_deref()
    }

    /// Connected component: 0 for objects joined to the base by a tree arc.
    pub fn component(&self, p: usize) -> usize {
        if p == 0 || self.arc_names[p].is_some() {
            0
        } else {
            p
        }
    }

    fn payload_label(&self, x: u8) -> String {
        format!("[{}]", self.loops[x as usize])
    }

    /// Same groupoid at another truncation.
    pub fn with_trunc(&self, trunc: usize) -> Self {
        FreeGroupoidSpec { trunc, ..self.clone() }
    }

    /// The quotient by `F_2`.
    pub fn abelianize(&self) -> Self {
        self.with_trunc(1)
    }

    fn one(&self) -> TruncatedTensor {
        TruncatedTensor::one(self.homology, self.trunc)
    }

    /// Magnus image `μ(w)` of a loop word.
    pub fn magnus(&self, w: &GroupWord) -> TruncatedTensor {
        let mut out = self.one();
        for l in w.letters() {
            let x = &self.one() + &TruncatedTensor::letter(self.homology, self.trunc, l.gen as u8);
            let f = if l.inv { x.inverse().expect("unit") } else { x };
            out = &out * &f;
        }
        out
    }

    pub fn identity(&self, p: usize) -> SacElement {
        SacElement {
            source: p,
            target: p,
            payload: self.one(),
        }
    }

    /// The loop generator `x` as a morphism `p_0 → p_0`.
    pub fn loop_element(&self, name: &str) -> Result<SacElement> {
        let w = GroupWord::generator(self.loop_index(name)? as u16);
        Ok(SacElement {
            source: 0,
            target: 0,
            payload: self.magnus(&w),
        })
    }

    /// The tree arc `δ_j: p_0 → p_j`.
    pub fn arc(&self, name: &str) -> Result<SacElement> {
        let j = self.arc_index(name)?;
        Ok(SacElement {
            source: 0,
            target: j,
            payload: self.one(),
        })
    }

    /// `δ_s⁻¹ · w · δ_t` for a loop word `w`.
    pub fn morphism(&self, source: usize, target: usize, w: &GroupWord) -> Result<SacElement> {
        self.check_objects(source, target)?;
        if (self.component(source) != 0 || self.component(target) != 0) && !w.is_identity() {
            return Err(Error::Domain("isolated objects carry no loops".into()));
        }
        Ok(SacElement {
            source,
            target,
            payload: self.magnus(w),
        })
    }

    /// Element with an explicit payload.
    pub fn element(&self, source: usize, target: usize, payload: TruncatedTensor) -> Result<SacElement> {
        self.check_objects(source, target)?;
        if payload.homology() != self.homology {
            return Err(Error::Config("payload in the wrong space".into()));
        }
        Ok(SacElement {
            source,
            target,
            payload,
        })
    }

    fn check_objects(&self, source: usize, target: usize) -> Result<()> {
        if source >= self.objects.len() || target >= self.objects.len() {
            return Err(Error::Config("object index out of range".into()));
        }
        if self.component(source) != self.component(target) {
            return Err(Error::Composition("objects lie in different components".into()));
        }
        Ok(())
    }

    /// Parses a path such as `gamma0^-1 x gamma0` (arcs and loops, left to right).
    pub fn parse_path(&self, text: &str) -> Result<SacElement> {
        let mut acc: Option<SacElement> = None;
        for tok in text.split_whitespace() {
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<i64>()
                        .map_err(|_| Error::Parse(format!("invalid exponent in `{tok}`")))?,
                ),
                None => (tok, 1),
            };
            let base = if self.loops.iter().any(|l| l == name) {
                self.loop_element(name)?
            } else if self.arc_names.iter().any(|a| a.as_deref() == Some(name)) {
                self.arc(name)?
            } else {
                return Err(Error::Parse(format!("unknown generator `{name}`")));
            };
            let step = if exp < 0 { base.inverse_group_element()? } else { base };
            for _ in 0..exp.unsigned_abs() {
                acc = Some(match acc {
                    None => step.clone(),
                    Some(a) => a.compose(&step)?,
                });
            }
        }
        acc.ok_or_else(|| Error::Parse("empty path".into()))
    }

    pub fn format_payload(&self, t: &TruncatedTensor) -> String {
        t.format_with(&|x| self.payload_label(x))
    }

    /// `Δ(X) = X⊗1 + 1⊗X + X⊗X` on Magnus letters, extended multiplicatively.
    pub fn coproduct(&self, payload: &TruncatedTensor) -> DoubleTensor {
        let h = self.homology;
        let n = payload.trunc();
        let one = TruncatedTensor::one(h, n);
        let letters: Vec<DoubleTensor> = (0..h.rank())
            .map(|x| {
                let t = TruncatedTensor::letter(h, n, x as u8);
                DoubleTensor::tensor(&t, &one)
                    .add(&DoubleTensor::tensor(&one, &t))
                    .add(&DoubleTensor::tensor(&t, &t))
            })
            .collect();
        let mut cache: HashMap<Word, DoubleTensor> = HashMap::new();
        let mut out = DoubleTensor::zero(h, n);
        for (w, c) in payload.terms() {
            let d = word_coproduct(w, &letters, &one, &mut cache);
            out = out.add(&d.scale(c));
        }
        out
    }

    /// Whether `payload` is group-like for the Magnus coproduct.
    pub fn is_group_like(&self, payload: &TruncatedTensor) -> bool {
        payload.constant_term().is_one() && self.coproduct(payload) == DoubleTensor::tensor(payload, payload)
    }
}

fn word_coproduct(
    w: &Word,
    letters: &[DoubleTensor],
    one: &TruncatedTensor,
    cache: &mut HashMap<Word, DoubleTensor>,
) -> DoubleTensor {
    if let Some(d) = cache.get(w) {
        return d.clone();
    }
    let d = match w.letters().split_first() {
        None => DoubleTensor::tensor(one, one),
        Some((&x, _)) => letters[x as usize].mul(&word_coproduct(&w.tail(), letters, one, cache)),
    };
    cache.insert(w.clone(), d.clone());
    d
}

/// A morphism-space element `δ_s⁻¹ · P · δ_t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SacElement {
    pub source: usize,
    pub target: usize,
    pub payload: TruncatedTensor,
}

impl SacElement {
    fn same_hom(&self, other: &Self) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Composition("elements lie in different morphism spaces".into()));
        }
        self.payload.same_space(&other.payload)
    }

    /// Path composition `u · v` (first `u`, then `v`).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.target != other.source {
            return Err(Error::Composition(format!(
                "cannot compose: target {} differs from source {}",
                self.target, other.source
            )));
        }
        Ok(SacElement {
            source: self.source,
            target: other.target,
            payload: self.payload.checked_mul(&other.payload)?,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_hom(other)?;
        Ok(SacElement {
            payload: &self.payload + &other.payload,
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_hom(other)?;
        Ok(SacElement {
            payload: &self.payload - &other.payload,
            ..self.clone()
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        SacElement {
            payload: self.payload.scale(c),
            ..self.clone()
        }
    }

    /// Inverse of an element with invertible payload (e.g. a groupoid element).
    pub fn inverse_group_element(&self) -> Result<Self> {
        Ok(SacElement {
            source: self.target,
            target: self.source,
            payload: self.payload.inverse()?,
        })
    }

    /// Position in the filtration `F_n = δ_s⁻¹ Iⁿ δ_t`.
    pub fn filtration_degree(&self) -> Filtration {
        Filtration::of(&self.payload)
    }

    /// Image in the abelianized algebra (quotient by `F_2`).
    pub fn abelianize(&self) -> Self {
        SacElement {
            payload: self.payload.truncate(1),
            ..self.clone()
        }
    }

    pub fn truncate(&self, n: usize) -> Self {
        SacElement {
            payload: self.payload.truncate(n),
            ..self.clone()
        }
    }

    /// `u − δ_s⁻¹δ_t`, e.g. `x − 1` for a loop `x`.
    pub fn minus_identity(&self) -> Self {
        let one = TruncatedTensor::one(self.payload.homology(), self.payload.trunc());
        SacElement {
            payload: &self.payload - &one,
            ..self.clone()
        }
    }
}

/// A derivation given on generators: `D(δ_j) = a_j · δ_j`, `D(x) = d_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SacDerivation {
    spec: FreeGroupoidSpec,
    arc_values: Vec<TruncatedTensor>,
    loop_values: Derivation,
}

impl SacDerivation {
    pub fn zero(spec: &FreeGroupoidSpec) -> Self {
        let h = spec.homology();
        let n = spec.trunc();
        SacDerivation {
            spec: spec.clone(),
            arc_values: vec![TruncatedTensor::zero(h, n); spec.objects.len()],
            loop_values: Derivation::zero(h, n),
        }
    }

    /// `arc_values[j]` is the payload `a_j` (ignored for objects without an arc);
    /// `loop_values[x]` is the payload of `D(x)`.
    pub fn new(
        spec: &FreeGroupoidSpec,
        arc_values: Vec<TruncatedTensor>,
        loop_values: Vec<TruncatedTensor>,
    ) -> Result<Self> {
        if arc_values.len() != spec.objects.len() {
            return Err(Error::Config("one arc value per object is required".into()));
        }
        let h = spec.homology();
        let n = spec.trunc();
        let mut arcs = Vec::with_capacity(arc_values.len());
        for (j, a) in arc_values.into_iter().enumerate() {
            if a.homology() != h || a.trunc() != n {
                return Err(Error::Config("arc value in the wrong space".into()));
            }
            arcs.push(if j == 0 || spec.arc_names[j].is_none() {
                TruncatedTensor::zero(h, n)
            } else {
                a
            });
        }
        let loop_values = Derivation::new(h, n, loop_values)?;
        Ok(SacDerivation {
            spec: spec.clone(),
            arc_values: arcs,
            loop_values,
        })
    }

    pub fn spec(&self) -> &FreeGroupoidSpec {
        &self.spec
    }

    pub fn arc_value(&self, j: usize) -> &TruncatedTensor {
        &self.arc_values[j]
    }

    pub fn loop_value(&self, x: usize) -> &TruncatedTensor {
        self.loop_values.value(x as u8)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let arcs = self
            .arc_values
            .iter()
            .zip(&other.arc_values)
            .map(|(a, b)| a.checked_add(b))
            .collect::<Result<_>>()?;
        Ok(SacDerivation {
            spec: self.spec.clone(),
            arc_values: arcs,
            loop_values: self.loop_values.add(&other.loop_values)?,
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        SacDerivation {
            spec: self.spec.clone(),
            arc_values: self.arc_values.iter().map(|a| a.scale(c)).collect(),
            loop_values: self.loop_values.scale(c),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    /// Leibniz extension: payload `−a_s P + D(P) + P a_t`.
    pub fn apply(&self, u: &SacElement) -> Result<SacElement> {
        let n = self.spec.trunc();
        if u.payload.trunc() != n || u.payload.homology() != self.spec.homology() {
            return Err(Error::Config(
                "element and derivation live in different algebras".into(),
            ));
        }
        let inner = self.loop_values.apply(&u.payload)?;
        let m = inner.trunc();
        let left = self.arc_values[u.source]
            .truncate(m)
            .checked_mul(&u.payload.truncate(m))?;
        let right = u
            .payload
            .truncate(m)
            .checked_mul(&self.arc_values[u.target].truncate(m))?;
        Ok(SacElement {
            source: u.source,
            target: u.target,
            payload: &(&inner - &left) + &right,
        })
    }

    /// `[D, D']` on generators.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        let spec = &self.spec;
        let mut arcs = Vec::with_capacity(self.arc_values.len());
        for j in 0..spec.objects.len() {
            let gen = SacElement {
                source: 0,
                target: j,
                payload: spec.one(),
            };
            let a = self.apply(&other.apply(&gen)?)?;
            let b = other.apply(&self.apply(&gen)?)?;
            arcs.push(a.payload.checked_sub(&b.payload)?);
        }
        let loops = self.loop_values.bracket(&other.loop_values)?;
        let n = loops.trunc();
        if n != spec.trunc() {
            return Err(Error::Convergence("bracket of filtration-lowering derivations".into()));
        }
        SacDerivation::new(spec, arcs, loops.values().to_vec())
    }

    /// Convergence conditions, checked at truncation: arc values in `F_1`, loop values filtration-preserving with nilpotent linear part.
    pub fn check_convergence(&self) -> Result<()> {
        if self.arc_values.iter().any(|a| !a.constant_term().is_zero()) {
            return Err(Error::Convergence("arc values must lie in F_1".into()));
        }
        self.loop_values.check_convergence()
    }

    fn generators(&self) -> Vec<SacElement> {
        let spec = &self.spec;
        let mut out: Vec<SacElement> = (0..spec.objects.len())
            .map(|j| SacElement {
                source: 0,
                target: j,
                payload: spec.one(),
            })
            .collect();
        for x in 0..spec.loops.len() {
            out.push(SacElement {
                source: 0,
                target: 0,
                payload: spec.magnus(&GroupWord::generator(x as u16)),
            });
        }
        out
    }

    /// `exp(D) = Σ D^k / k!` on generators.
    pub fn exp(&self) -> Result<SacAutomorphism> {
        self.check_convergence()?;
        let cap = 4 * (self.spec.trunc() + 1) * (self.spec.trunc() + 1) * (self.spec.loops.len() + 1);
        let mut images = Vec::new();
        for g in self.generators() {
            let mut term = g.clone();
            let mut sum = g.payload.clone();
            let mut k = 1usize;
            loop {
                term = self.apply(&term)?.scale(&Rational::new(1.into(), (k as i64).into()));
                if term.payload.is_zero() {
                    break;
                }
                sum = &sum + &term.payload;
                k += 1;
                if k > cap {
                    return Err(Error::Convergence("exponential series did not terminate".into()));
                }
            }
            images.push(sum);
        }
        SacAutomorphism::from_generator_images(&self.spec, images)
    }

    /// Whether `D` preserves the coproduct: each generator image of `exp(tD)` stays
    /// group-like to first order, i.e. `Δ(D g) = D g ⊗ g + g ⊗ D g`.
    pub fn stabilizes_coproduct(&self) -> Result<bool> {
        for g in self.generators() {
            let d = self.apply(&g)?;
            let lhs = self.spec.coproduct(&d.payload);
            let rhs = DoubleTensor::tensor(&d.payload, &g.payload).add(&DoubleTensor::tensor(&g.payload, &d.payload));
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// An automorphism given on generators: `U(δ_j) = b_j · δ_j`, `U(x) = u_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SacAutomorphism {
    spec: FreeGroupoidSpec,
    arc_images: Vec<TruncatedTensor>,
    loop_images: Vec<TruncatedTensor>,
    substitution: Automorphism,
}

impl SacAutomorphism {
    /// `images` lists the arc payloads (one per object) followed by the loop payloads.
    pub fn from_generator_images(spec: &FreeGroupoidSpec, images: Vec<TruncatedTensor>) -> Result<Self> {
        let k = spec.objects.len();
        if images.len() != k + spec.loops.len() {
            return Err(Error::Config("one image per generator is required".into()));
        }
        let mut arc_images = images[..k].to_vec();
        arc_images[0] = spec.one();
        for (j, b) in arc_images.iter().enumerate() {
            if !b.constant_term().is_one() && (j == 0 || spec.arc_names[j].is_some()) {
                return Err(Error::Domain("arc images must have augmentation 1".into()));
            }
        }
        let loop_images = images[k..].to_vec();
        let one = spec.one();
        let subst = loop_images.iter().map(|u| u - &one).collect();
        let substitution = Automorphism::new(spec.homology(), spec.trunc(), subst)?;
        Ok(SacAutomorphism {
            spec: spec.clone(),
            arc_images,
            loop_images,
            substitution,
        })
    }

    pub fn identity(spec: &FreeGroupoidSpec) -> Self {
        SacDerivation::zero(spec).exp().expect("zero derivation")
    }

    pub fn arc_image(&self, j: usize) -> &TruncatedTensor {
        &self.arc_images[j]
    }

    pub fn loop_image(&self, x: usize) -> &TruncatedTensor {
        &self.loop_images[x]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.spec)
    }

    /// Payload `b_s⁻¹ · P(X ↦ u_x − 1) · b_t`.
    pub fn apply(&self, u: &SacElement) -> Result<SacElement> {
        let p = self.substitution.apply(&u.payload)?;
        let bs = self.arc_images[u.source].inverse()?;
        let payload = &(&bs * &p) * &self.arc_images[u.target];
        Ok(SacElement {
            source: u.source,
            target: u.target,
            payload,
        })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let spec = &self.spec;
        let mut images = Vec::new();
        for j in 0..spec.objects.len() {
            let v = SacElement {
                source: 0,
                target: j,
                payload: other.arc_images[j].clone(),
            };
            images.push(self.apply(&v)?.payload);
        }
        for u in &other.loop_images {
            let v = SacElement {
                source: 0,
                target: 0,
                payload: u.clone(),
            };
            images.push(self.apply(&v)?.payload);
        }
        Self::from_generator_images(spec, images)
    }

    /// `log U = Σ (−1)^{n−1}/n (U − 1)^n` on generators.
    pub fn log(&self) -> Result<SacDerivation> {
        let spec = &self.spec;
        let gens = SacDerivation::zero(spec).generators();
        let cap = 4 * (spec.trunc() + 1) * (spec.trunc() + 1) * (spec.loops.len() + 1);
        let mut values = Vec::with_capacity(gens.len());
        for g in gens {
            let mut v = g.clone();
            let mut sum = TruncatedTensor::zero(spec.homology(), spec.trunc());
            let mut n = 1usize;
            loop {
                v = self.apply(&v)?.sub(&v)?;
                if v.payload.is_zero() {
                    break;
                }
                let sign = if n % 2 == 1 { 1 } else { -1 };
                sum = sum.add_scaled(&v.payload, &Rational::new(sign.into(), (n as i64).into()));
                n += 1;
                if n > cap {
                    return Err(Error::Convergence("logarithm series did not terminate".into()));
                }
            }
            values.push(sum);
        }
        let k = spec.objects.len();
        let loops = values.split_off(k);
        SacDerivation::new(spec, values, loops)
    }

    /// Conditions of an automorphism of the filtered algebra fixing the objects:
    /// filtration-preserving, augmentation-preserving; with `check_coproduct`, also
    /// group-like images of the generators.
    pub fn check_conditions(&self, check_coproduct: bool) -> bool {
        let one = self.spec.one();
        let aug_ok = self.arc_images.iter().all(|b| b.constant_term().is_one())
            && self.loop_images.iter().all(|u| u.constant_term().is_one());
        let filt_ok = self
            .loop_images
            .iter()
            .all(|u| (u - &one).low_degree().map_or(false, |d| d >= 1));
        let cop_ok = !check_coproduct
            || (self.arc_images.iter().all(|b| self.spec.is_group_like(b))
                && self.loop_images.iter().all(|u| self.spec.is_group_like(u)));
        aug_ok && filt_ok && cop_ok
    }
}

/// Values of a derivation on a generator, as read from a spec file.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum PayloadJson {
    /// `log μ(w)` for a loop word `w`.
    Log(String),
    /// `μ(w) − 1`.
    MinusOne(String),
    /// Explicit terms `{"word": [loop names], "coef": "p/q"}`.
    Terms(Vec<crate::tensor::json::TermJson>),
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq, Default)]
pub struct DerivationJson {
    #[serde(default)]
    pub arcs: BTreeMap<String, PayloadJson>,
    #[serde(default)]
    pub loops: BTreeMap<String, PayloadJson>,
}

/// Groupoid plus an optional derivation, as stored in fixture files.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct SacFixture {
    #[serde(flatten)]
    pub groupoid: GroupoidJson,
    #[serde(default)]
    pub derivation: DerivationJson,
}

impl FreeGroupoidSpec {
    pub fn payload_from_json(&self, p: &PayloadJson) -> Result<TruncatedTensor> {
        let al = self.loop_alphabet();
        match p {
            PayloadJson::Log(w) => self.magnus(&al.parse(w)?).log(),
            PayloadJson::MinusOne(w) => Ok(&self.magnus(&al.parse(w)?) - &self.one()),
            PayloadJson::Terms(terms) => {
                let mut out = Vec::new();
                for t in terms {
                    let letters = t
                        .word
                        .iter()
                        .map(|s| self.loop_index(s).map(|i| i as u8))
                        .collect::<Result<Vec<u8>>>()?;
                    out.push((Word::from_slice(&letters), parse_rational(&t.coef)?));
                }
                Ok(TruncatedTensor::from_terms(self.homology, self.trunc, out))
            }
        }
    }

    pub fn derivation_from_json(&self, d: &DerivationJson) -> Result<SacDerivation> {
        let h = self.homology;
        let n = self.trunc;
        let mut arcs = vec![TruncatedTensor::zero(h, n); self.objects.len()];
        for (name, p) in &d.arcs {
            arcs[self.arc_index(name)?] = self.payload_from_json(p)?;
        }
        let mut loops = vec![TruncatedTensor::zero(h, n); self.loops.len()];
        for (name, p) in &d.loops {
            loops[self.loop_index(name)?] = self.payload_from_json(p)?;
        }
        SacDerivation::new(self, arcs, loops)
    }
}

/// Loads a fixture (groupoid plus derivation) from JSON text.
pub fn load_fixture(text: &str) -> Result<(FreeGroupoidSpec, SacDerivation)> {
    let fx: SacFixture = serde_json::from_str(text).map_err(|e| Error::Parse(format!("fixture JSON: {e}")))?;
    let spec = FreeGroupoidSpec::from_json_struct(&fx.groupoid)?;
    let d = spec.derivation_from_json(&fx.derivation)?;
    Ok((spec, d))
}

/// The annulus fixture: objects `p0, p1`, arc `gamma0: p0 → p1`, loop `x` at `p0`
/// (the core loop transported along `gamma0`), `D(gamma0) = log(x)·gamma0`, `D(x) = 0`.
pub const ANNULUS_FIXTURE: &str = include_str!("../fixtures/annulus.json");

pub fn annulus(trunc: usize) -> Result<(FreeGroupoidSpec, SacDerivation)> {
    let (spec, _) = load_fixture(ANNULUS_FIXTURE)?;
    let spec = spec.with_trunc(trunc);
    let fx: SacFixture = serde_json::from_str(ANNULUS_FIXTURE).map_err(|e| Error::Parse(e.to_string()))?;
    let d = spec.derivation_from_json(&fx.derivation)?;
    Ok((spec, d))
}

/// The endomorphism of the abelianized algebra induced by `(x − 1)²`:
/// a generator `γ` goes to `2 (x·γ) γ (x − 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaBarSquare {
    spec: FreeGroupoidSpec,
    class: TruncatedTensor,
    arc_pairings: Vec<Rational>,
    loop_pairings: Vec<Rational>,
}

impl SigmaBarSquare {
    /// `x` is a loop word; `pairings` maps generator names (arcs and loops) to `(x·γ)`,
    /// missing names counting as 0. Requires `(x·x) = 0`.
    pub fn new(spec: &FreeGroupoidSpec, x: &GroupWord, pairings: &BTreeMap<String, Rational>) -> Result<Self> {
        let ab = spec.abelianize();
        for name in pairings.keys() {
            if spec.loop_index(name).is_err() && spec.arc_index(name).is_err() {
                return Err(Error::Parse(format!("unknown generator `{name}`")));
            }
        }
        let arc_pairings = (0..spec.objects.len())
            .map(|j| {
                spec.arc_name(j)
                    .and_then(|n| pairings.get(n))
                    .cloned()
                    .unwrap_or_else(Rational::zero)
            })
            .collect();
        let loop_pairings: Vec<Rational> = spec
            .loops
            .iter()
            .map(|n| pairings.get(n).cloned().unwrap_or_else(Rational::zero))
            .collect();
        let class = (&ab.magnus(x) - &ab.one()).degree_part(1);
        let e = SigmaBarSquare {
            spec: ab,
            class,
            arc_pairings,
            loop_pairings,
        };
        if !e.functional(&e.class).is_zero() {
            return Err(Error::Domain("self-intersection (x·x) must vanish".into()));
        }
        Ok(e)
    }

    fn functional(&self, h: &TruncatedTensor) -> Rational {
        h.degree_part(1)
            .terms()
            .map(|(w, c)| c * &self.loop_pairings[w.letters()[0] as usize])
            .sum()
    }

    pub fn spec(&self) -> &FreeGroupoidSpec {
        &self.spec
    }

    /// Payload `c + h` at `p_s → p_t` goes to `2 (c (s_t − s_s) + φ(h)) [x]`.
    pub fn apply(&self, u: &SacElement) -> Result<SacElement> {
        let p = u.payload.truncate(1).with_trunc(1);
        if p.homology() != self.spec.homology() {
            return Err(Error::Config("element from another groupoid".into()));
        }
        let c = p.constant_term();
        let s = &self.arc_pairings[u.target] - &self.arc_pairings[u.source];
        let k = (c * s + self.functional(&p)) * Rational::from_integer(2.into());
        Ok(SacElement {
            source: u.source,
            target: u.target,
            payload: self.class.scale(&k),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn two_loop_spec(n: usize) -> FreeGroupoidSpec {
        FreeGroupoidSpec::new(
            vec!["p0".into(), "p1".into()],
            vec![("d1".into(), "p1".into())],
            vec!["x".into(), "y".into()],
            n,
        )
        .unwrap()
    }

    #[test]
    fn composition_rules() {
        let s = two_loop_spec(3);
        let d = s.arc("d1").unwrap();
        let di = d.inverse_group_element().unwrap();
        assert_eq!(d.compose(&di).unwrap(), s.identity(0));
        let x = s.loop_element("x").unwrap();
        let y = s.loop_element("y").unwrap();
        let xd = x.compose(&d).unwrap();
        let dyd = di.compose(&y).unwrap().compose(&d).unwrap();
        let lhs = xd.compose(&dyd).unwrap();
        let rhs = x.compose(&y).unwrap().compose(&d).unwrap();
        assert_eq!(lhs, rhs);
        assert!(matches!(d.compose(&d), Err(Error::Composition(_))));
        assert_eq!(
            x.scale(&int(2)).compose(&y).unwrap(),
            x.compose(&y).unwrap().scale(&int(2))
        );
        assert_eq!(s.parse_path("x d1").unwrap(), xd);
    }

    #[test]
    fn filtration_examples() {
        let s = two_loop_spec(4);
        let d = s.arc("d1").unwrap();
        assert_eq!(d.filtration_degree(), Filtration::Degree(0));
        let xm = s.loop_element("x").unwrap().minus_identity();
        assert_eq!(
            d.inverse_group_element()
                .unwrap()
                .compose(&xm)
                .unwrap()
                .filtration_degree(),
            Filtration::Degree(1)
        );
        let ym = s.loop_element("y").unwrap().minus_identity();
        let u = xm.compose(&ym).unwrap().compose(&d).unwrap();
        assert_eq!(u.filtration_degree(), Filtration::Degree(2));
    }

    #[test]
    fn annulus_exp() {
        let (spec, d) = annulus(5).unwrap();
        let g = spec.arc("gamma0").unwrap();
        let x = spec.loop_element("x").unwrap();
        let u = d.exp().unwrap();
        assert_eq!(u.apply(&g).unwrap(), x.compose(&g).unwrap());
        let dg = d.apply(&g).unwrap();
        assert_eq!(dg.payload, x.payload.log().unwrap());
        assert!(d.apply(&spec.identity(1)).unwrap().payload.is_zero());
    }

    #[test]
    fn exp_log_inverse() {
        let s = two_loop_spec(4);
        let h = s.homology();
        let x = TruncatedTensor::letter(h, 4, 0);
        let y = TruncatedTensor::letter(h, 4, 1);
        let d = SacDerivation::new(
            &s,
            vec![TruncatedTensor::zero(h, 4), x.commutator(&y)],
            vec![&y * &y, x.commutator(&y)],
        )
        .unwrap();
        let u = d.exp().unwrap();
        let ui = d.neg().exp().unwrap();
        assert!(u.compose(&ui).unwrap().is_identity());
        assert_eq!(u.log().unwrap(), d);
    }

    #[test]
    fn sigma_bar_square_values() {
        let s = two_loop_spec(3);
        let x = s.loop_alphabet().parse("x").unwrap();
        let mut pairings = BTreeMap::new();
        pairings.insert("y".to_string(), int(1));
        let e = SigmaBarSquare::new(&s, &x, &pairings).unwrap();
        let ab = s.abelianize();
        let y = ab.loop_element("y").unwrap();
        let img = e.apply(&y).unwrap();
        assert_eq!(img.payload, TruncatedTensor::letter(ab.homology(), 1, 0).scale(&int(2)));
        assert!(e.apply(&img).unwrap().payload.is_zero());
        let d = ab.arc("d1").unwrap();
        assert!(e.apply(&d).unwrap().payload.is_zero());
        pairings.insert("x".to_string(), int(1));
        assert!(SigmaBarSquare::new(&s, &x, &pairings).is_err());
    }

    #[test]
    fn spec_validation() {
        let objs = vec!["p0".to_string(), "p1".to_string()];
        assert!(FreeGroupoidSpec::new(objs.clone(), vec![("d".into(), "p2".into())], vec![], 3).is_err());
        assert!(FreeGroupoidSpec::new(objs.clone(), vec![("d".into(), "p0".into())], vec![], 3).is_err());
        assert!(FreeGroupoidSpec::new(objs.clone(), vec![("p1".into(), "p1".into())], vec![], 3).is_err());
        let s = FreeGroupoidSpec::new(objs, vec![], vec!["x".into()], 3).unwrap();
        assert!(matches!(
            s.morphism(0, 1, &GroupWord::identity()),
            Err(Error::Composition(_))
        ));
        let j = serde_json::to_string(&s.to_json_struct()).unwrap();
        assert_eq!(FreeGroupoidSpec::from_json(&j).unwrap(), s);
    }
}
