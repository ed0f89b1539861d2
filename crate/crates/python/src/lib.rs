//! Python bindings: `import roughharm_py`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use roughharm::{
    classify_sobolev, dirichlet_energy_2d, dyadic_scales, estimate_sup_norm, holder_modulus_with,
    random_unit_harmonic, standard_bumps, verify_instance, ClassifierSettings, DegreeEnergies, EnergyMode,
    LacunaryCosineSeries, SeriesValue, SeriesVariant, TransmissionVariant, VerifyTolerances,
};

fn err(e: roughharm::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Serialise through JSON into plain Python dicts and lists.
fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn value_dict<'py>(py: Python<'py>, v: &SeriesValue) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("value", v.value)?;
    d.set_item("tail_bound", v.tail_bound)?;
    d.set_item("certified", v.certified)?;
    d.set_item("warning", v.warning)?;
    Ok(d)
}

/// Dimension of the degree-k spherical harmonics on S^{n-1}.
#[pyfunction]
fn harmonic_dimension(n: usize, k: usize) -> PyResult<u128> {
    roughharm::harmonic_dimension(n, k).map_err(err)
}

/// Eigenvalue k(k + n - 2) of the Laplace-Beltrami operator.
#[pyfunction]
fn laplace_beltrami_eigenvalue(n: usize, k: usize) -> f64 {
    roughharm::laplace_beltrami_eigenvalue(n, k)
}

/// Re (x1 + i x2)^k at a point of the sphere.
#[pyfunction]
fn highest_weight_eval(k: u64, theta: Vec<f64>) -> f64 {
    roughharm::highest_weight_eval(k, &theta)
}

#[pyfunction]
fn psi(t: f64) -> f64 {
    roughharm::psi(t)
}

/// Solve t + psi(t) = z.
#[pyfunction]
#[pyo3(signature = (z, tol=1e-14))]
fn invert_id_plus_psi(z: f64, tol: f64) -> PyResult<f64> {
    roughharm::invert_id_plus_psi(z, tol).map_err(err)
}

#[pyfunction]
fn holder_bound_constant(b: u32, alpha: f64) -> PyResult<f64> {
    roughharm::holder_bound_constant(b, alpha).map_err(err)
}

/// Dirichlet energy of a disk series by its coefficient formula or by
/// quadrature.
#[pyfunction]
#[pyo3(signature = (variant, k_max, quadrature=false, alpha=None))]
fn dirichlet_energy(variant: &str, k_max: u64, quadrature: bool, alpha: Option<f64>) -> PyResult<f64> {
    let v = SeriesVariant::parse(variant, None, alpha).map_err(err)?;
    let u = roughharm::build_series(v, 2, k_max, 1.0).map_err(err)?;
    let mode = if quadrature { EnergyMode::Quadrature } else { EnergyMode::Formula };
    dirichlet_energy_2d(&u, k_max, mode).map_err(err)
}

/// Sobolev partial-sum scans of a named series, one dict per sigma.
#[pyfunction]
#[pyo3(signature = (variant, n, k_max, sigmas, seed=None, alpha=None, scale=1.0))]
#[allow(clippy::too_many_arguments)]
fn sobolev_scan<'py>(
    py: Python<'py>,
    variant: &str,
    n: usize,
    k_max: u64,
    sigmas: Vec<f64>,
    seed: Option<u64>,
    alpha: Option<f64>,
    scale: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let v = SeriesVariant::parse(variant, seed, alpha).map_err(err)?;
    let energies = DegreeEnergies::from_variant(v, n, k_max, scale).map_err(err)?;
    let scans = classify_sobolev(&energies, &sigmas, k_max, &ClassifierSettings::default()).map_err(err)?;
    to_py(py, &scans)
}

fn lacunary(function: &str, b: u32, alpha: f64, terms: u32) -> PyResult<LacunaryCosineSeries> {
    match function {
        "weierstrass" => LacunaryCosineSeries::weierstrass(b, alpha, terms).map_err(err),
        "hardy" => LacunaryCosineSeries::hardy(b, terms).map_err(err),
        other => Err(PyValueError::new_err(format!("unknown function '{other}'"))),
    }
}

/// Value of a lacunary cosine series ("weierstrass" or "hardy") with its
/// tail bound.
#[pyfunction]
#[pyo3(signature = (t, function="weierstrass", b=2, alpha=0.5, terms=60, tol=1e-8))]
fn lacunary_eval<'py>(
    py: Python<'py>,
    t: f64,
    function: &str,
    b: u32,
    alpha: f64,
    terms: u32,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    value_dict(py, &lacunary(function, b, alpha, terms)?.eval(t, tol))
}

/// Empirical modulus of continuity at scales 2^-finest .. 2^-coarsest.
#[pyfunction]
#[pyo3(signature = (function="weierstrass", b=2, alpha=0.5, terms=60, finest=16, coarsest=4, samples=100_000, seed=0))]
#[allow(clippy::too_many_arguments)]
fn holder_modulus<'py>(
    py: Python<'py>,
    function: &str,
    b: u32,
    alpha: f64,
    terms: u32,
    finest: i32,
    coarsest: i32,
    samples: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let f = lacunary(function, b, alpha, terms)?;
    let table = holder_modulus_with(
        |t, d| f.increment(t, d),
        (0.0, 2.0 * std::f64::consts::PI),
        &dyadic_scales(finest, coarsest),
        samples,
        seed,
    )
    .map_err(err)?;
    to_py(py, &table)
}

/// Grid estimate of sup |Y| for a seeded random unit harmonic.
#[pyfunction]
fn random_harmonic_sup(n: usize, k: usize, seed: u64) -> PyResult<f64> {
    let y = random_unit_harmonic(n, k, seed).map_err(err)?;
    Ok(estimate_sup_norm(&y).map_err(err)?.value)
}

/// A truncated lacunary harmonic series on the unit ball.
#[pyclass(name = "BallSeries", frozen)]
struct PyBallSeries {
    inner: roughharm::BallSeries,
}

#[pymethods]
impl PyBallSeries {
    #[new]
    #[pyo3(signature = (variant, n, k_max, scale=1.0, seed=None, alpha=None))]
    fn new(variant: &str, n: usize, k_max: u64, scale: f64, seed: Option<u64>, alpha: Option<f64>) -> PyResult<Self> {
        let v = SeriesVariant::parse(variant, seed, alpha).map_err(err)?;
        let inner = roughharm::build_series(v, n, k_max, scale).map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: roughharm::BallSeries::from_json(text).map_err(err)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn k_max(&self) -> u64 {
        self.inner.k_max()
    }

    #[getter]
    fn variant(&self) -> &'static str {
        self.inner.variant().name()
    }

    /// Truncated value at x with tail bound.
    #[pyo3(signature = (x, tol=1e-8))]
    fn eval<'py>(&self, py: Python<'py>, x: Vec<f64>, tol: f64) -> PyResult<Bound<'py, PyDict>> {
        value_dict(py, &self.inner.eval(&x, tol).map_err(err)?)
    }

    /// Truncated value only; x must lie in the series' domain.
    fn __call__(&self, x: Vec<f64>) -> PyResult<f64> {
        if x.len() != self.inner.dim() {
            return Err(PyValueError::new_err("point has the wrong dimension"));
        }
        Ok(self.inner.value_unchecked(&x))
    }

    fn kelvin_transform(&self) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.kelvin_transform().map_err(err)?,
        })
    }

    fn scaled(&self, factor: f64) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.scaled(factor).map_err(err)?,
        })
    }

    /// (k, e_k) pairs of the exact per-degree boundary energies.
    fn degree_energies(&self) -> Vec<(u64, f64)> {
        DegreeEnergies::from_series(&self.inner).entries
    }

    fn __repr__(&self) -> String {
        format!("BallSeries('{}', n={}, k_max={})", self.inner.variant().name(), self.inner.dim(), self.inner.k_max())
    }
}

/// An explicit transmission problem instance.
#[pyclass(name = "TransmissionInstance", frozen)]
struct PyTransmissionInstance {
    inner: roughharm::TransmissionInstance,
}

#[pymethods]
impl PyTransmissionInstance {
    #[new]
    #[pyo3(signature = (variant, n, k_max, rho=None, seed=None, alpha=None))]
    fn new(variant: &str, n: usize, k_max: u64, rho: Option<f64>, seed: Option<u64>, alpha: Option<f64>) -> PyResult<Self> {
        let v = TransmissionVariant::parse(variant, seed, alpha).map_err(err)?;
        let inner = roughharm::TransmissionInstance::new(v, n, k_max, rho).map_err(err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn rho(&self) -> f64 {
        self.inner.rho()
    }

    #[getter]
    fn sup_bound(&self) -> f64 {
        self.inner.sup_bound().bound
    }

    /// Boundary datum at a point of the unit sphere.
    fn phi(&self, theta: Vec<f64>) -> f64 {
        self.inner.phi(&theta)
    }

    fn f(&self, theta: Vec<f64>, t: f64) -> f64 {
        self.inner.f_eval(&theta, t)
    }

    fn g(&self, theta: Vec<f64>, t: f64) -> f64 {
        self.inner.g_eval(&theta, t)
    }

    fn inner_series(&self) -> PyBallSeries {
        PyBallSeries {
            inner: self.inner.inner().clone(),
        }
    }

    fn outer_series(&self) -> PyBallSeries {
        PyBallSeries {
            inner: self.inner.outer().clone(),
        }
    }

    /// Full verification report as a dict; `report["pass"]` is the verdict.
    #[pyo3(signature = (bumps=5, directions=256))]
    fn verify<'py>(&self, py: Python<'py>, bumps: usize, directions: usize) -> PyResult<Bound<'py, PyAny>> {
        let bumps = standard_bumps(self.inner.dim(), bumps).map_err(err)?;
        let tol = VerifyTolerances {
            directions,
            ..VerifyTolerances::default()
        };
        // The verification is pure Rust; let other Python threads run.
        let report = py.detach(|| verify_instance(&self.inner, &bumps, &tol)).map_err(err)?;
        to_py(py, &report)
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(err)
    }
}

#[pymodule]
pub fn roughharm_py(_py: Python, m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(harmonic_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(laplace_beltrami_eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(highest_weight_eval, m)?)?;
    m.add_function(wrap_pyfunction!(psi, m)?)?;
    m.add_function(wrap_pyfunction!(invert_id_plus_psi, m)?)?;
    m.add_function(wrap_pyfunction!(holder_bound_constant, m)?)?;
    m.add_function(wrap_pyfunction!(dirichlet_energy, m)?)?;
    m.add_function(wrap_pyfunction!(sobolev_scan, m)?)?;
    m.add_function(wrap_pyfunction!(lacunary_eval, m)?)?;
    m.add_function(wrap_pyfunction!(holder_modulus, m)?)?;
    m.add_function(wrap_pyfunction!(random_harmonic_sup, m)?)?;
    m.add_class::<PyBallSeries>()?;
    m.add_class::<PyTransmissionInstance>()?;
    Ok(())
}
