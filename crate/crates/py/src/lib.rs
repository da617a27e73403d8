use goldman_core::goldman::{goldman_bracket, lambda_word, lie_membership};
use goldman_core::group::Alphabet;
use goldman_core::scalar::{format_rational, parse_rational};
use goldman_core::twists::{figure_eight_obstruction, johnson_tau, l_default, twist_operator, xy_label};
use goldman_core::{
    Error, Expansion, GoldmanElement, Homology, MappingClassAction, StandardCurve, SurfaceSignature, TruncatedTensor,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(format!("{}: {e}", e.category()))
}

/// Truncated tensor over the homology of a surface.
#[pyclass(name = "Tensor", module = "goldman", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyTensor(TruncatedTensor);

#[pymethods]
impl PyTensor {
    #[staticmethod]
    #[pyo3(signature = (genus, boundary, trunc, label))]
    fn letter(genus: usize, boundary: usize, trunc: usize, label: &str) -> PyResult<Self> {
        let h = Homology::new(genus, boundary).map_err(err)?;
        let x = h.parse_label(label).map_err(err)?;
        Ok(PyTensor(TruncatedTensor::letter(h, trunc, x)))
    }

    #[staticmethod]
    fn one(genus: usize, boundary: usize, trunc: usize) -> PyResult<Self> {
        let h = Homology::new(genus, boundary).map_err(err)?;
        Ok(PyTensor(TruncatedTensor::one(h, trunc)))
    }

    #[staticmethod]
    fn from_json(text: &str, genus: usize, boundary: usize) -> PyResult<Self> {
        let h = Homology::new(genus, boundary).map_err(err)?;
        TruncatedTensor::from_json(text, h).map(PyTensor).map_err(err)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn trunc(&self) -> usize {
        self.0.trunc()
    }

    /// Coefficient of a word given by letter labels, as a `p/q` string.
    fn coef(&self, labels: Vec<String>) -> PyResult<String> {
        let h = self.0.homology();
        let letters = labels
            .iter()
            .map(|l| h.parse_label(l))
            .collect::<Result<Vec<u8>, _>>()
            .map_err(err)?;
        Ok(format_rational(&self.0.coef_of(&letters)))
    }

    fn low_degree(&self) -> Option<usize> {
        self.0.low_degree()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn exp(&self) -> PyResult<Self> {
        self.0.exp().map(PyTensor).map_err(err)
    }

    fn log(&self) -> PyResult<Self> {
        self.0.log().map(PyTensor).map_err(err)
    }

    fn bch(&self, other: &PyTensor) -> PyResult<Self> {
        self.0.bch(&other.0).map(PyTensor).map_err(err)
    }

    fn cyclicize(&self) -> Self {
        PyTensor(self.0.cyclicize())
    }

    fn is_group_like(&self) -> bool {
        self.0.is_group_like()
    }

    fn scale(&self, c: &str) -> PyResult<Self> {
        Ok(PyTensor(self.0.scale(&parse_rational(c).map_err(err)?)))
    }

    fn __add__(&self, other: &PyTensor) -> PyResult<Self> {
        self.0.checked_add(&other.0).map(PyTensor).map_err(err)
    }

    fn __sub__(&self, other: &PyTensor) -> PyResult<Self> {
        self.0.checked_sub(&other.0).map(PyTensor).map_err(err)
    }

    fn __mul__(&self, other: &PyTensor) -> PyResult<Self> {
        self.0.checked_mul(&other.0).map(PyTensor).map_err(err)
    }

    fn __eq__(&self, other: &PyTensor) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Tensor({})", self.0)
    }
}

/// A group-like expansion of a surface group.
#[pyclass(name = "Expansion", module = "goldman", frozen)]
struct PyExpansion(Expansion);

impl PyExpansion {
    fn word(&self, text: &str) -> PyResult<goldman_core::GroupWord> {
        Alphabet::surface(self.0.homology()).parse(text).map_err(err)
    }
}

#[pymethods]
impl PyExpansion {
    #[staticmethod]
    fn symplectic(genus: usize, trunc: usize) -> PyResult<Self> {
        let sig = SurfaceSignature::new(genus, 1, trunc).map_err(err)?;
        Expansion::symplectic(sig).map(PyExpansion).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (genus, trunc, boundary = 1))]
    fn exponential(genus: usize, trunc: usize, boundary: usize) -> PyResult<Self> {
        let sig = SurfaceSignature::new(genus, boundary, trunc).map_err(err)?;
        Ok(PyExpansion(Expansion::exponential(sig)))
    }

    #[getter]
    fn trunc(&self) -> usize {
        self.0.trunc()
    }

    fn generators(&self) -> Vec<String> {
        Alphabet::surface(self.0.homology()).names().to_vec()
    }

    /// `θ(w)` for a word such as `"a1 b1^-1"`.
    fn evaluate(&self, word: &str) -> PyResult<PyTensor> {
        self.0.evaluate(&self.word(word)?).map(PyTensor).map_err(err)
    }

    /// `λ_θ(|w|)`.
    fn lambda_word(&self, word: &str) -> PyResult<PyTensor> {
        lambda_word(&self.word(word)?, &self.0).map(PyTensor).map_err(err)
    }

    /// `λ_θ` of the Goldman bracket of two loops.
    fn bracket(&self, u: &str, v: &str) -> PyResult<PyTensor> {
        let u = GoldmanElement::from_loop(&self.word(u)?);
        let v = GoldmanElement::from_loop(&self.word(v)?);
        goldman_bracket(&u, &v, &self.0).map(PyTensor).map_err(err)
    }

    /// `λ_θ(L(|w|))`.
    fn half_log_squared(&self, word: &str) -> PyResult<PyTensor> {
        l_default(&self.word(word)?, &self.0).map(PyTensor).map_err(err)
    }

    /// Twist along a loop (word or standard tag `a1`, `b1`, `zeta`, `sep:h`) applied to `θ(word)`.
    #[pyo3(signature = (curve, word, z = "1"))]
    fn twist(&self, curve: &str, word: &str, z: &str) -> PyResult<PyTensor> {
        let h = self.0.homology();
        let loop_word = match StandardCurve::parse(curve) {
            Ok(c) => c.loop_word(h).map_err(err)?,
            Err(_) => self.word(curve)?,
        };
        let z = parse_rational(z).map_err(err)?;
        let op = twist_operator(&loop_word, &self.0, &z).map_err(err)?;
        let t = self.0.evaluate(&self.word(word)?).map_err(err)?;
        op.apply(&t).map(PyTensor).map_err(err)
    }

    /// Johnson image of a product of standard twists, applied right to left.
    fn johnson(&self, curves: Vec<String>) -> PyResult<PyTensor> {
        let h = self.0.homology();
        let mut phi = MappingClassAction::identity(h);
        for c in &curves {
            let t = MappingClassAction::twist(StandardCurve::parse(c).map_err(err)?, h).map_err(err)?;
            phi = phi.compose(&t).map_err(err)?;
        }
        johnson_tau(&phi, &self.0).map(PyTensor).map_err(err)
    }
}

/// Figure-eight report as a dict of strings.
#[pyfunction]
#[pyo3(signature = (z = "1"))]
fn figure_eight<'py>(py: Python<'py>, z: &str) -> PyResult<Bound<'py, PyDict>> {
    let r = figure_eight_obstruction(&parse_rational(z).map_err(err)?).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("z", format_rational(&r.z))?;
    d.set_item("b", format_rational(&r.b))?;
    d.set_item("c", format_rational(&r.c))?;
    d.set_item("residual2", r.residual2.format_with(&xy_label))?;
    d.set_item("residual3", r.residual3_text())?;
    Ok(d)
}

/// Membership flags `(a_minus, a, l, l_plus)` of a cyclic tensor.
#[pyfunction]
fn membership(t: &PyTensor) -> PyResult<(bool, bool, bool, bool)> {
    let m = lie_membership(&t.0).map_err(err)?;
    Ok((m.a_minus, m.a, m.l, m.l_plus))
}

/// Checks `exp(D)(γ0) = γ0 x` on the annulus groupoid.
#[pyfunction]
fn annulus_check(trunc: usize) -> PyResult<bool> {
    let (spec, d) = goldman_core::sac::annulus(trunc).map_err(err)?;
    let g = spec.arc("gamma0").map_err(err)?;
    let x = spec.loop_element("x").map_err(err)?;
    let lhs = d.exp().map_err(err)?.apply(&g).map_err(err)?;
    Ok(lhs == x.compose(&g).map_err(err)?)
}

#[pymodule]
fn goldman(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTensor>()?;
    m.add_class::<PyExpansion>()?;
    m.add_function(wrap_pyfunction!(figure_eight, m)?)?;
    m.add_function(wrap_pyfunction!(membership, m)?)?;
    m.add_function(wrap_pyfunction!(annulus_check, m)?)?;
    Ok(())
}
