//! Logarithms of Dehn twists, generalized twists, the figure-eight obstruction and a
//! truncated Johnson homomorphism.

use std::fmt;

use num_traits::{One, Zero};

use crate::derivation::{Automorphism, Derivation};
use crate::error::{Error, Result};
use crate::expansion::{Expansion, Filtration};
use crate::goldman::{bracket_tensors, derivation_to_tensor, goldman_bch, tensor_to_derivation};
use crate::group::{alpha, beta, handle_product, zeta, GroupWord};
use crate::linalg::solve_dense;
use crate::scalar::{format_rational, int, ratio, Rational};
use crate::tensor::{Homology, TruncatedTensor, Word};

/// A power series `f(t) = Σ a_k (t − 1)^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TSeries {
    coeffs: Vec<Rational>,
}

impl TSeries {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        TSeries { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `L(t) = ½ (log t)²` through degree `n` in `t − 1`.
    pub fn half_log_squared(n: usize) -> Self {
        let mut log = vec![Rational::zero(); n + 1];
        for (k, c) in log.iter_mut().enumerate().skip(1) {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            *c = ratio(sign, k as i64);
        }
        let mut sq = vec![Rational::zero(); n + 1];
        for i in 1..=n {
            for j in 1..=n - i {
                sq[i + j] += &log[i] * &log[j];
            }
        }
        TSeries {
            coeffs: sq.into_iter().map(|c| c * ratio(1, 2)).collect(),
        }
    }

    /// Checks `f(1) = f'(1) = 0`.
    pub fn validate(&self) -> Result<()> {
        let a0 = self.coeffs.first().cloned().unwrap_or_default();
        let a1 = self.coeffs.get(1).cloned().unwrap_or_default();
        if !a0.is_zero() || !a1.is_zero() {
            return Err(Error::Domain("series must satisfy f(1) = 0 and f'(1) = 0".into()));
        }
        Ok(())
    }

    /// `f(u)` for `u` with degree-0 part 1.
    pub fn eval(&self, u: &TruncatedTensor) -> Result<TruncatedTensor> {
        if !u.constant_term().is_one() {
            return Err(Error::Domain("series argument must have degree-0 part 1".into()));
        }
        let x = u - &TruncatedTensor::one(u.homology(), u.trunc());
        let mut out = TruncatedTensor::zero(u.homology(), u.trunc());
        let mut power = TruncatedTensor::one(u.homology(), u.trunc());
        for c in &self.coeffs {
            if power.is_zero() {
                break;
            }
            out = out.add_scaled(&power, c);
            power = &power * &x;
        }
        Ok(out)
    }
}

/// `λ_θ(|f(x)|) = N f(θ(x))`.
pub fn l_of(f: &TSeries, loop_word: &GroupWord, theta: &Expansion) -> Result<TruncatedTensor> {
    f.validate()?;
    Ok(f.eval(&theta.evaluate(loop_word)?)?.cyclicize())
}

/// `λ_θ(L(|x|))` with `L(t) = ½(log t)²`.
pub fn l_default(loop_word: &GroupWord, theta: &Expansion) -> Result<TruncatedTensor> {
    Ok(theta.evaluate_log(loop_word)?.pow(2).scale(&ratio(1, 2)).cyclicize())
}

fn require_one_boundary(h: Homology) -> Result<()> {
    if h.boundary() != 1 {
        return Err(Error::Unsupported("twist operators need one boundary component".into()));
    }
    Ok(())
}

/// `exp(σ(z L(C)))` acting on `T̂` through `θ`.
#[derive(Clone, Debug)]
pub struct TwistOperator {
    lambda: TruncatedTensor,
    derivation: Derivation,
    automorphism: Automorphism,
}

impl TwistOperator {
    pub fn new(loop_word: &GroupWord, theta: &Expansion, z: &Rational) -> Result<Self> {
        require_one_boundary(theta.homology())?;
        let n = theta.trunc();
        let up = theta.with_truncation(n + 1)?;
        let lambda = l_default(loop_word, &up)?.scale(z);
        let derivation = tensor_to_derivation(&lambda)?.neg();
        let automorphism = derivation.exp()?;
        Ok(TwistOperator {
            lambda: lambda.truncate(n),
            derivation,
            automorphism,
        })
    }

    /// `z·λ_θ(L(C))` at the truncation of `θ`.
    pub fn lambda(&self) -> &TruncatedTensor {
        &self.lambda
    }

    /// The derivation `σ(z L(C))` on `T̂`.
    pub fn derivation(&self) -> &Derivation {
        &self.derivation
    }

    pub fn automorphism(&self) -> &Automorphism {
        &self.automorphism
    }

    pub fn apply(&self, u: &TruncatedTensor) -> Result<TruncatedTensor> {
        self.derivation.exp_apply(u)
    }
}

pub fn twist_operator(loop_word: &GroupWord, theta: &Expansion, z: &Rational) -> Result<TwistOperator> {
    TwistOperator::new(loop_word, theta, z)
}

/// Simple closed curves on `Σ_{g,1}` with known twist formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StandardCurve {
    Alpha1,
    Beta1,
    /// The boundary curve `ζ`.
    Boundary,
    /// The curve `[α_1,β_1]⋯[α_h,β_h]` cutting off the first `h` handles.
    Separating(usize),
}

impl StandardCurve {
    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "a1" => Ok(StandardCurve::Alpha1),
            "b1" => Ok(StandardCurve::Beta1),
            "zeta" | "boundary" => Ok(StandardCurve::Boundary),
            t => match t.strip_prefix("sep:") {
                Some(h) => h
                    .parse()
                    .map(StandardCurve::Separating)
                    .map_err(|_| Error::Parse(format!("invalid curve tag `{text}`"))),
                None => Err(Error::Parse(format!("unknown curve tag `{text}`"))),
            },
        }
    }

    pub fn validate(&self, h: Homology) -> Result<()> {
        require_one_boundary(h)?;
        let ok = match *self {
            StandardCurve::Alpha1 | StandardCurve::Beta1 => h.genus() >= 1,
            StandardCurve::Boundary => true,
            StandardCurve::Separating(k) => k >= 1 && k <= h.genus(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "curve {self} does not exist in genus {}",
                h.genus()
            )))
        }
    }

    /// A based loop representing the curve.
    pub fn loop_word(&self, h: Homology) -> Result<GroupWord> {
        self.validate(h)?;
        Ok(match *self {
            StandardCurve::Alpha1 => alpha(h, 1),
            StandardCurve::Beta1 => beta(h, 1),
            StandardCurve::Boundary => zeta(h),
            StandardCurve::Separating(k) => handle_product(h, k),
        })
    }

    /// Images of the free generators under the right-handed twist.
    pub fn generator_images(&self, h: Homology) -> Result<Vec<GroupWord>> {
        self.validate(h)?;
        let mut images: Vec<GroupWord> = (0..h.rank()).map(|x| GroupWord::generator(x as u16)).collect();
        match *self {
            StandardCurve::Alpha1 => {
                images[h.b(1) as usize] = beta(h, 1).mul(&alpha(h, 1));
            }
            StandardCurve::Beta1 => {
                images[h.a(1) as usize] = alpha(h, 1).mul(&beta(h, 1).inverse());
            }
            StandardCurve::Boundary => {
                let z = zeta(h);
                for img in images.iter_mut() {
                    *img = img.conjugate_by(&z);
                }
            }
            StandardCurve::Separating(k) => {
                let d = handle_product(h, k);
                for i in 1..=k {
                    for x in [h.a(i), h.b(i)] {
                        images[x as usize] = images[x as usize].conjugate_by(&d);
                    }
                }
            }
        }
        Ok(images)
    }
}

impl fmt::Display for StandardCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StandardCurve::Alpha1 => write!(f, "a1"),
            StandardCurve::Beta1 => write!(f, "b1"),
            StandardCurve::Boundary => write!(f, "zeta"),
            StandardCurve::Separating(k) => write!(f, "sep:{k}"),
        }
    }
}

/// The right-handed Dehn twist along `c`, applied to `w`.
pub fn classical_twist(c: StandardCurve, w: &GroupWord, h: Homology) -> Result<GroupWord> {
    Ok(w.substitute(&c.generator_images(h)?))
}

/// A mapping class recorded by its action on the free generators of `π`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingClassAction {
    homology: Homology,
    images: Vec<GroupWord>,
}

impl MappingClassAction {
    pub fn new(homology: Homology, images: Vec<GroupWord>) -> Result<Self> {
        if images.len() != homology.rank() || images.iter().any(|w| w.generator_bound() > homology.rank()) {
            return Err(Error::Config("one image word per generator is required".into()));
        }
        Ok(MappingClassAction { homology, images })
    }

    pub fn identity(homology: Homology) -> Self {
        let images = (0..homology.rank()).map(|x| GroupWord::generator(x as u16)).collect();
        MappingClassAction { homology, images }
    }

    pub fn twist(c: StandardCurve, homology: Homology) -> Result<Self> {
        Ok(MappingClassAction {
            homology,
            images: c.generator_images(homology)?,
        })
    }

    pub fn homology(&self) -> Homology {
        self.homology
    }

    pub fn images(&self) -> &[GroupWord] {
        &self.images
    }

    pub fn apply(&self, w: &GroupWord) -> GroupWord {
        w.substitute(&self.images)
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.homology != other.homology {
            return Err(Error::Config("mapping classes on different surfaces".into()));
        }
        let images = other.images.iter().map(|w| self.apply(w)).collect();
        Ok(MappingClassAction {
            homology: self.homology,
            images,
        })
    }

    /// Acts trivially on `H`.
    pub fn is_torelli(&self) -> bool {
        self.images.iter().enumerate().all(|(x, w)| {
            let mut counts = vec![0i64; self.homology.rank()];
            for l in w.letters() {
                counts[l.gen as usize] += if l.inv { -1 } else { 1 };
            }
            counts.iter().enumerate().all(|(y, &c)| c == i64::from(x == y))
        })
    }

    /// Extends to a surface with more handles by fixing the new generators.
    pub fn include(&self, target: Homology) -> Result<Self> {
        if target.boundary() != 1 || self.homology.boundary() != 1 || target.genus() < self.homology.genus() {
            return Err(Error::Config("inclusion needs one boundary and a larger genus".into()));
        }
        let mut images: Vec<GroupWord> = (0..target.rank()).map(|x| GroupWord::generator(x as u16)).collect();
        images[..self.images.len()].clone_from_slice(&self.images);
        Ok(MappingClassAction {
            homology: target,
            images,
        })
    }
}

/// Result of the figure-eight computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FigureEight {
    pub z: Rational,
    pub b: Rational,
    pub c: Rational,
    pub residual2: TruncatedTensor,
    pub residual3: TruncatedTensor,
    /// `k` with `residual3 = k [Y,[Y,X]]`, when it has that shape.
    pub residual3_coefficient: Option<Rational>,
}

impl FigureEight {
    /// `residual3` as `k*[Y,[Y,X]]` when it has that shape.
    pub fn residual3_text(&self) -> String {
        match &self.residual3_coefficient {
            Some(k) if k.is_zero() => "0".into(),
            Some(k) if k.is_one() => "[Y,[Y,X]]".into(),
            Some(k) if (-k).is_one() => "-[Y,[Y,X]]".into(),
            Some(k) => format!("{}*[Y,[Y,X]]", format_rational(k)),
            None => self.residual3.format_with(&xy_label),
        }
    }
}

/// Rank-2 homology used for the free algebra `K⟨⟨X, Y⟩⟩` (`X = C2`, `Y = C3`).
pub fn xy_homology() -> Homology {
    Homology::new(0, 3).expect("rank-2 homology")
}

pub fn xy_label(x: u8) -> String {
    if x == 0 {
        "X".into()
    } else {
        "Y".into()
    }
}

/// `[Y,[Y,X]]` at truncation `n`.
pub fn y_y_x(n: usize) -> TruncatedTensor {
    let h = xy_homology();
    let x = TruncatedTensor::letter(h, n, 0);
    let y = TruncatedTensor::letter(h, n, 1);
    y.commutator(&y.commutator(&x))
}

/// Solves the degree-1 part of `z X∗(−Y) + bX + c X∗Y = 0` and reports the
/// residuals in degrees 2 and 3 (`∗` is the Hausdorff series).
pub fn figure_eight_obstruction(z: &Rational) -> Result<FigureEight> {
    let n = 3;
    let h = xy_homology();
    let x = TruncatedTensor::letter(h, n, 0);
    let y = TruncatedTensor::letter(h, n, 1);
    let first = x.bch(&-&y)?.scale(z);
    let second = x.bch(&y)?;
    let rows = [0u8, 1u8];
    let a: Vec<Vec<Rational>> = rows
        .iter()
        .map(|&l| vec![x.coef(&Word::letter(l)), second.coef(&Word::letter(l))])
        .collect();
    let rhs: Vec<Rational> = rows.iter().map(|&l| -first.coef(&Word::letter(l))).collect();
    let sol = solve_dense(&a, &rhs).ok_or_else(|| Error::Convergence("degree-1 system is singular".into()))?;
    let (b, c) = (sol[0].clone(), sol[1].clone());
    let total = &(&first + &x.scale(&b)) + &second.scale(&c);
    let residual2 = total.degree_part(2);
    let residual3 = total.degree_part(3);
    let yyx = y_y_x(n);
    let k = residual3.coef_of(&[1, 1, 0]);
    let residual3_coefficient = (residual3 == yyx.scale(&k)).then_some(k);
    Ok(FigureEight {
        z: z.clone(),
        b,
        c,
        residual2,
        residual3,
        residual3_coefficient,
    })
}

/// Kinds of curve pairs whose logarithms are combined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairKind {
    Separating,
    BoundingPair,
    Commutator,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairLogReport {
    pub tensor: TruncatedTensor,
    pub filtration: Filtration,
}

fn homology_class(w: &GroupWord, h: Homology) -> Vec<i64> {
    let mut counts = vec![0i64; h.rank()];
    for l in w.letters() {
        counts[l.gen as usize] += if l.inv { -1 } else { 1 };
    }
    counts
}

/// λ-images of `L(C)` (separating), `L(C₂) − L(C₁)` (bounding pair), or
/// `P = L(C₁)∗L(C₂)∗(−L(C₁))∗(−L(C₂))` (commutator), after checking the
/// homological or bracket hypotheses.
pub fn pair_logs(kind: PairKind, loops: &[GroupWord], theta: &Expansion) -> Result<PairLogReport> {
    let h = theta.homology();
    let need = if kind == PairKind::Separating { 1 } else { 2 };
    if loops.len() != need {
        return Err(Error::Config(format!("{kind:?} needs {need} loops")));
    }
    let tensor = match kind {
        PairKind::Separating => {
            if homology_class(&loops[0], h).iter().any(|&c| c != 0) {
                return Err(Error::Hypothesis("separating curve must be null-homologous".into()));
            }
            l_default(&loops[0], theta)?
        }
        PairKind::BoundingPair => {
            let c1 = homology_class(&loops[0], h);
            let c2 = homology_class(&loops[1], h);
            let neg: Vec<i64> = c2.iter().map(|c| -c).collect();
            if c1 != c2 && c1 != neg {
                return Err(Error::Hypothesis("bounding pair curves must be homologous".into()));
            }
            &l_default(&loops[1], theta)? - &l_default(&loops[0], theta)?
        }
        PairKind::Commutator => {
            require_one_boundary(h)?;
            let n = theta.trunc();
            let up = theta.with_truncation(n + 1)?;
            let a = l_default(&loops[0], &up)?;
            let b = l_default(&loops[1], &up)?;
            let br = bracket_tensors(&a, &b)?;
            if br.low_degree().is_some_and(|d| d < 3) {
                return Err(Error::Hypothesis(
                    "bracket of the two logarithms is not of degree at least 3".into(),
                ));
            }
            let ua = tensor_to_derivation(&a)?.neg().exp()?;
            let ub = tensor_to_derivation(&b)?.neg().exp()?;
            let ua_inv = tensor_to_derivation(&a)?.exp()?;
            let ub_inv = tensor_to_derivation(&b)?.exp()?;
            let p = ua.compose(&ub)?.compose(&ua_inv)?.compose(&ub_inv)?;
            let d = p.log()?;
            (-&derivation_to_tensor(&d)?).truncate(n)
        }
    };
    let filtration = Filtration::of(&tensor);
    Ok(PairLogReport { tensor, filtration })
}

/// `X ↦ log θ(φ(x))` and `X ↦ log θ(x)` as automorphism tables.
fn dehn_nielsen(phi: &MappingClassAction, theta: &Expansion) -> Result<Automorphism> {
    let h = theta.homology();
    let n = theta.trunc();
    let w: Vec<TruncatedTensor> = phi
        .images()
        .iter()
        .map(|img| theta.evaluate_log(img))
        .collect::<Result<_>>()?;
    let big_w = Automorphism::new(h, n, w)?;
    let logs: Vec<TruncatedTensor> = (0..h.rank()).map(|x| theta.generator_log(x).clone()).collect();
    let big_theta = Automorphism::new(h, n, logs)?;
    big_w.compose(&big_theta.inverse()?)
}

/// `τ(φ)`: the tensor `t` with `θ ∘ φ ∘ θ⁻¹ = exp(−D_t)` at truncation.
pub fn johnson_tau(phi: &MappingClassAction, theta: &Expansion) -> Result<TruncatedTensor> {
    let h = theta.homology();
    require_one_boundary(h)?;
    if phi.homology() != h {
        return Err(Error::Config(
            "mapping class and expansion on different surfaces".into(),
        ));
    }
    if !phi.is_torelli() {
        return Err(Error::Domain("mapping class does not act trivially on homology".into()));
    }
    let u = dehn_nielsen(phi, theta)?;
    if !u.is_unipotent() {
        return Err(Error::Domain("θ∘φ∘θ⁻¹ − id does not raise degree".into()));
    }
    let d = u.log()?;
    Ok((-&derivation_to_tensor(&d)?).truncate(theta.trunc()))
}

/// The group law on `τ`-values.
pub fn tau_bch(a: &TruncatedTensor, b: &TruncatedTensor) -> Result<TruncatedTensor> {
    goldman_bch(a, b)
}

/// Degreewise section of `λ_θ` on cyclic tensors, followed by inclusion of
/// generators into a surface of larger genus and `λ` there.
///
/// A cyclic `c_m` of degree `m` has preimage `Σ (coef/m) |(x_{w_1}−1)⋯(x_{w_m}−1)|`
/// up to higher-order terms, which are removed degree by degree.
pub fn transport_cyclic(t: &TruncatedTensor, from: &Expansion, to: &Expansion) -> Result<TruncatedTensor> {
    let hf = from.homology();
    let ht = to.homology();
    if from.trunc() != to.trunc() || hf.boundary() != 1 || ht.boundary() != 1 || ht.genus() < hf.genus() {
        return Err(Error::Config(
            "transport needs matching truncation and a larger genus target".into(),
        ));
    }
    let n = from.trunc();
    let mut rest = t.clone();
    let mut out = TruncatedTensor::zero(ht, n);
    for m in 1..=n {
        let part = rest.degree_part(m);
        for (w, c) in part.terms() {
            let coef = c / int(m as i64);
            let mut src = TruncatedTensor::one(hf, n);
            let mut dst = TruncatedTensor::one(ht, n);
            for &x in w.letters() {
                src = &src * &(from.generator_image(x as usize) - &TruncatedTensor::one(hf, n));
                dst = &dst * &(to.generator_image(x as usize) - &TruncatedTensor::one(ht, n));
            }
            rest = rest.add_scaled(&src.cyclicize(), &-coef.clone());
            out = out.add_scaled(&dst.cyclicize(), &coef);
        }
    }
    if !rest.is_zero() {
        return Err(Error::Domain("input is not a cyclic tensor".into()));
    }
    Ok(out)
}
