//! Python bindings: parameters, boundary data, both extension routes, Hardy means,
//! bound checks and the membership table.

use std::collections::BTreeMap;

use engine::boundary::{self, BoundaryFunction, TrigPolynomial, DEFAULT_SAMPLES};
use engine::extension::{self, DiskEval, KernelIntegral};
use engine::hardy;
use engine::kernels::{self, DiskPoint};
use engine::special_fn::{self, HypParams};
use engine::{Complex64, Error};
use pyo3::exceptions::{PyArithmeticError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

/// Power -> coefficient map of one graded part.
type Graded = BTreeMap<u32, Complex64>;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Domain(_) | Error::Parse(_) | Error::InvalidHypParams(_) | Error::StepTooLarge(_) | Error::PreconditionFailed(_) => {
            PyValueError::new_err(e.to_string())
        }
        Error::Pole(_) | Error::NoConvergence { .. } | Error::DegenerateCoefficient { .. } | Error::DegenerateFit(_) => {
            PyArithmeticError::new_err(e.to_string())
        }
        Error::Io(_) => PyRuntimeError::new_err(e.to_string()),
    }
}

trait Py<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> Py<T> for engine::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn point(z: Complex64) -> PyResult<DiskPoint> {
    DiskPoint::new(z).py()
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

/// The parameter pair `(alpha, beta)`.
#[pyclass(name = "Params", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyParams {
    inner: kernels::Params,
}

#[pymethods]
impl PyParams {
    #[new]
    fn new(alpha: f64, beta: f64) -> PyResult<Self> {
        Ok(PyParams { inner: kernels::Params::new(alpha, beta).py()? })
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta
    }

    fn sum(&self) -> f64 {
        self.inner.sum()
    }

    fn swapped(&self) -> Self {
        PyParams { inner: self.inner.swapped() }
    }

    fn __repr__(&self) -> String {
        format!("Params({}, {})", self.inner.alpha, self.inner.beta)
    }
}

/// Boundary data on the circle, from a coefficient map or from uniform samples.
#[pyclass(name = "Boundary", frozen, from_py_object)]
#[derive(Clone)]
struct PyBoundary {
    inner: BoundaryFunction,
}

#[pymethods]
impl PyBoundary {
    #[new]
    #[pyo3(signature = (coeffs=None, samples=None, n=DEFAULT_SAMPLES))]
    fn new(coeffs: Option<BTreeMap<i64, Complex64>>, samples: Option<Vec<Complex64>>, n: usize) -> PyResult<Self> {
        let inner = match (coeffs, samples) {
            (Some(c), None) => BoundaryFunction::from_trig(TrigPolynomial::new(c), n).py()?,
            (None, Some(s)) => BoundaryFunction::from_samples(s).py()?,
            _ => return Err(PyValueError::new_err("pass exactly one of coeffs or samples")),
        };
        Ok(PyBoundary { inner })
    }

    /// Reads a `.json` coefficient map or a `.csv` sample file.
    #[staticmethod]
    #[pyo3(signature = (path, n=DEFAULT_SAMPLES))]
    fn read(path: std::path::PathBuf, n: usize) -> PyResult<Self> {
        Ok(PyBoundary { inner: boundary::read_boundary(&path, n).py()? })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn samples(&self) -> Vec<Complex64> {
        self.inner.samples().to_vec()
    }

    fn coefficients(&self) -> BTreeMap<i64, Complex64> {
        self.inner.coefficients().coeffs().clone()
    }

    fn derivative(&self) -> Self {
        PyBoundary { inner: boundary::derivative(&self.inner) }
    }

    fn times_eit(&self) -> Self {
        PyBoundary { inner: boundary::times_eit(&self.inner) }
    }

    fn hilbert(&self) -> Self {
        PyBoundary { inner: boundary::hilbert_transform(&self.inner) }
    }

    fn riesz(&self) -> BTreeMap<i64, Complex64> {
        boundary::riesz_project(&self.inner).coeffs().clone()
    }

    fn lp_norm(&self, p: f64) -> PyResult<f64> {
        boundary::lp_norm(&self.inner, p).py()
    }
}

/// Series representation of an extension.
#[pyclass(name = "Expansion", frozen, from_py_object)]
#[derive(Clone)]
struct PyExpansion {
    inner: extension::Expansion,
}

#[pymethods]
impl PyExpansion {
    #[new]
    fn new(params: PyParams, coeffs: BTreeMap<i64, Complex64>) -> Self {
        PyExpansion { inner: extension::Expansion::new(params.inner, TrigPolynomial::new(coeffs)) }
    }

    #[staticmethod]
    fn from_boundary(params: PyParams, f: &PyBoundary) -> PyResult<Self> {
        Ok(PyExpansion { inner: extension::Expansion::from_boundary(&params.inner, &f.inner).py()? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyExpansion { inner })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("serialisable")
    }

    fn coefficients(&self) -> BTreeMap<i64, Complex64> {
        self.inner.coeffs.coeffs().clone()
    }

    fn eval(&self, z: Complex64) -> PyResult<Complex64> {
        extension::eval_series(&self.inner, point(z)?).py()
    }

    fn dz(&self, z: Complex64) -> PyResult<Complex64> {
        extension::dz_series(&self.inner, point(z)?).py()
    }

    fn dzbar(&self, z: Complex64) -> PyResult<Complex64> {
        extension::dzbar_series(&self.inner, point(z)?).py()
    }

    fn circle_mean(&self, n: i64, r: f64) -> PyResult<Complex64> {
        self.inner.circle_mean_closed(n, r).py()
    }

    /// Graded parts `[(analytic, conjugate), ...]` for integer `alpha >= 1`.
    fn polyharmonic_parts(&self) -> PyResult<Vec<(Graded, Graded)>> {
        let d = extension::polyharmonic_decompose(&self.inner).py()?;
        Ok(d.parts.into_iter().map(|p| (p.analytic, p.conjugate)).collect())
    }
}

/// A quadrature-backed function on the disc.
#[pyclass(name = "Extension", frozen)]
struct PyExtension {
    inner: KernelIntegral,
}

#[pymethods]
impl PyExtension {
    /// `kind` is one of `u`, `dz`, `dzbar`, `dtheta`, `zdz`, `zbar_dzbar`.
    #[new]
    #[pyo3(signature = (params, f, kind="u"))]
    fn new(params: PyParams, f: &PyBoundary, kind: &str) -> PyResult<Self> {
        let (p, f) = (&params.inner, &f.inner);
        let inner = match kind {
            "u" => extension::poisson_extension(p, f),
            "dz" => extension::dz_extension(p, f),
            "dzbar" => extension::dzbar_extension(p, f),
            "dtheta" => extension::dtheta_extension(p, f),
            "zdz" => extension::zdz_extension(p, f),
            "zbar_dzbar" => extension::zbar_dzbar_extension(p, f),
            other => return Err(PyValueError::new_err(format!("unknown kind {other:?}"))),
        }
        .py()?;
        Ok(PyExtension { inner })
    }

    fn eval(&self, z: Complex64) -> PyResult<Complex64> {
        self.inner.eval(point(z)?).py()
    }

    fn ring(&self, r: f64, n: usize) -> PyResult<Vec<Complex64>> {
        self.inner.eval_ring(r, n).py()
    }

    #[pyo3(signature = (p, r, n=DEFAULT_SAMPLES))]
    fn hardy_mean(&self, p: f64, r: f64, n: usize) -> PyResult<f64> {
        hardy::hardy_mean(&self.inner, p, r, n).py()
    }

    #[pyo3(signature = (p, radii, n=DEFAULT_SAMPLES))]
    fn growth_exponent(&self, p: f64, radii: Vec<f64>, n: usize) -> PyResult<(f64, f64)> {
        let fit = hardy::growth_exponent(&self.inner, p, &radii, n).py()?;
        Ok((fit.gamma, fit.residual))
    }

    #[pyo3(signature = (n, r, samples=DEFAULT_SAMPLES))]
    fn circle_mean(&self, n: i64, r: f64, samples: usize) -> PyResult<Complex64> {
        extension::circle_mean(&self.inner, n, r, samples).py()
    }

    #[pyo3(signature = (params, z, h=extension::FD_STEP))]
    fn operator_residual(&self, params: PyParams, z: Complex64, h: f64) -> PyResult<Complex64> {
        extension::operator_residual(&params.inner, &self.inner, point(z)?, h).py()
    }
}

#[pyfunction]
fn gamma(x: f64) -> PyResult<f64> {
    special_fn::gamma(x).py()
}

#[pyfunction]
fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> PyResult<f64> {
    special_fn::hyp2f1(&HypParams::new(a, b, c).py()?, x).py()
}

#[pyfunction]
fn hyp2f1_at_one(a: f64, b: f64, c: f64) -> PyResult<f64> {
    special_fn::hyp2f1_at_one(&HypParams::new(a, b, c).py()?).py()
}

#[pyfunction]
fn c_alpha_beta(params: PyParams) -> PyResult<f64> {
    kernels::c_alpha_beta(&params.inner).py()
}

#[pyfunction]
fn c_lambda(lam: f64) -> PyResult<f64> {
    kernels::c_lambda(lam).py()
}

#[pyfunction]
fn i_lambda(lam: f64, r: f64) -> PyResult<f64> {
    kernels::i_lambda(lam, r).py()
}

#[pyfunction]
fn kernel_k(params: PyParams, z: Complex64) -> PyResult<Complex64> {
    Ok(kernels::kernel_k(&params.inner, point(z)?))
}

#[pyfunction]
fn m_radial(params: PyParams, r: f64) -> PyResult<f64> {
    kernels::m_radial(&params.inner, r).py()
}

#[pyfunction]
fn m_k(params: PyParams, k: u32, z: Complex64) -> PyResult<Complex64> {
    kernels::m_k(&params.inner, k, point(z)?).py()
}

#[pyfunction]
fn poisson_extend(params: PyParams, f: &PyBoundary, z: Complex64) -> PyResult<Complex64> {
    extension::poisson_extend(&params.inner, &f.inner, point(z)?).py()
}

/// Verdict as a dict with `classification`, `area` and `provenance`.
#[pyfunction]
fn classify<'py>(py: Python<'py>, alpha: f64, beta: f64, p: f64) -> PyResult<Bound<'py, PyAny>> {
    let v = hardy::classify(alpha, beta, p);
    json_to_py(py, &serde_json::to_string(&v).expect("serialisable"))
}

/// Report dict for the angular-derivative bound.
#[pyfunction]
fn verify_dtheta_bound<'py>(py: Python<'py>, params: PyParams, f: &PyBoundary, p: f64, radii: Vec<f64>) -> PyResult<Bound<'py, PyAny>> {
    let rep = hardy::verify_dtheta_bound(&params.inner, &f.inner, p, &radii).py()?;
    json_to_py(py, &serde_json::to_string(&rep).expect("serialisable"))
}

/// Report dicts for the radial-derivative bounds.
#[pyfunction]
fn verify_dz_bounds<'py>(py: Python<'py>, params: PyParams, f: &PyBoundary, p: f64, radii: Vec<f64>) -> PyResult<Bound<'py, PyAny>> {
    let reps = hardy::verify_dz_bounds(&params.inner, &f.inner, p, &radii).py()?;
    json_to_py(py, &serde_json::to_string(&reps).expect("serialisable"))
}

/// `(k, mirrored, gamma, residual)` for the blow-up witness of `params`.
#[pyfunction]
fn witness_growth(params: PyParams) -> PyResult<(u32, bool, f64, f64)> {
    let w = hardy::rigidity_witness(&params.inner).py()?;
    let fit = hardy::growth_exponent(&w, 1.0, &hardy::WITNESS_RADII, hardy::WITNESS_SAMPLES).py()?;
    Ok((w.k, w.mirrored, fit.gamma, fit.residual))
}

#[pymodule]
fn abharmonic(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams>()?;
    m.add_class::<PyBoundary>()?;
    m.add_class::<PyExpansion>()?;
    m.add_class::<PyExtension>()?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(hyp2f1, m)?)?;
    m.add_function(wrap_pyfunction!(hyp2f1_at_one, m)?)?;
    m.add_function(wrap_pyfunction!(c_alpha_beta, m)?)?;
    m.add_function(wrap_pyfunction!(c_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(i_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_k, m)?)?;
    m.add_function(wrap_pyfunction!(m_radial, m)?)?;
    m.add_function(wrap_pyfunction!(m_k, m)?)?;
    m.add_function(wrap_pyfunction!(poisson_extend, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(verify_dtheta_bound, m)?)?;
    m.add_function(wrap_pyfunction!(verify_dz_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(witness_growth, m)?)?;
    Ok(())
}
