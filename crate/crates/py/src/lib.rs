//! Python bindings: the main types and operations of the solver pipeline.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use liouville_core::bubble::{self, BubbleParams, ProjectedBubble};
use liouville_core::geometry::{self, DomainModel, GreensFunction};
use liouville_core::potential::{PotentialModel, PotentialSpec};
use liouville_core::quadrature::{canonical_identities, IdentityReport};
use liouville_core::reduction;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn c64(pair: (f64, f64)) -> Complex64 {
    Complex64::new(pair.0, pair.1)
}

/// A planar domain (unit disk, scaled disk, or star-shaped Fourier curve)
/// with its Dirichlet Green's function.
#[pyclass]
struct Domain {
    gf: GreensFunction,
}

#[pymethods]
impl Domain {
    /// Build from a JSON domain spec, e.g. `{"kind":"unit_disk"}` or
    /// `{"kind":"curve","fourier_cos":[1.0,0,0,0.1]}`.
    #[new]
    fn new(spec_json: &str) -> PyResult<Self> {
        let dom: DomainModel =
            serde_json::from_str(spec_json).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Domain {
            gf: GreensFunction::new(dom).map_err(err)?,
        })
    }

    #[staticmethod]
    fn unit_disk() -> PyResult<Self> {
        Ok(Domain {
            gf: GreensFunction::new(DomainModel::unit_disk()).map_err(err)?,
        })
    }

    #[staticmethod]
    fn flower(ell: u32, eps: f64) -> PyResult<Self> {
        Ok(Domain {
            gf: GreensFunction::new(DomainModel::flower(ell, eps)).map_err(err)?,
        })
    }

    /// Green's function G(x, p).
    fn green(&self, x: (f64, f64), p: (f64, f64)) -> PyResult<f64> {
        self.gf.green(c64(x), c64(p)).map_err(err)
    }

    /// Regular part H(x, p) = G + (1/2π) log|x-p|.
    fn regular_part(&self, x: (f64, f64), p: (f64, f64)) -> PyResult<f64> {
        self.gf.regular_part(c64(x), c64(p)).map_err(err)
    }

    /// Robin function H(x, x).
    fn robin(&self, x: (f64, f64)) -> PyResult<f64> {
        self.gf.robin(c64(x)).map_err(err)
    }

    fn symmetry_check(&self, ell: u32) -> bool {
        self.gf.domain.symmetry_check(ell)
    }

    fn radius_at(&self, theta: f64) -> f64 {
        self.gf.domain.radius_at(theta)
    }
}

/// The bubble ansatz `(α, δ, b)` with its kernels and zero-trace projections
/// on a domain.
#[pyclass]
struct Bubble {
    proj: ProjectedBubble,
}

#[pymethods]
impl Bubble {
    #[new]
    fn new(domain: &Domain, alpha: u32, delta: f64, b: (f64, f64)) -> PyResult<Self> {
        let params = BubbleParams::new(alpha, delta, c64(b)).map_err(err)?;
        let proj = ProjectedBubble::new(&domain.gf, params).map_err(err)?;
        Ok(Bubble { proj })
    }

    /// W(x).
    fn w(&self, x: (f64, f64)) -> f64 {
        self.proj.params.w(c64(x))
    }

    /// The concentrating weight |x|^{2(α-1)} e^{W}.
    fn weight(&self, x: (f64, f64)) -> f64 {
        self.proj.params.weight(c64(x))
    }

    /// Kernel Z^j(x), j in {0,1,2}.
    fn z(&self, j: usize, x: (f64, f64)) -> PyResult<f64> {
        if j > 2 {
            return Err(PyValueError::new_err("kernel index must be 0, 1 or 2"));
        }
        Ok(self.proj.params.z(j, c64(x)))
    }

    /// Projection PW(x) (zero boundary trace).
    fn pw(&self, x: (f64, f64)) -> f64 {
        self.proj.pw(c64(x))
    }

    /// Projection PZ^j(x).
    fn pz(&self, j: usize, x: (f64, f64)) -> PyResult<f64> {
        if j > 2 {
            return Err(PyValueError::new_err("kernel index must be 0, 1 or 2"));
        }
        Ok(self.proj.pz(j, c64(x)))
    }

    /// The α-roots of b (peak locations of the weight).
    fn roots(&self) -> Vec<(f64, f64)> {
        self.proj.params.roots.iter().map(|r| (r.re, r.im)).collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Bubble(alpha={}, delta={}, b=({}, {}))",
            self.proj.params.alpha,
            self.proj.params.delta,
            self.proj.params.b.re,
            self.proj.params.b.im
        )
    }
}

/// Evaluate the closed-form identity suite at (alpha, xi); returns a dict
/// with id1, id2, id3, quantization and their expected values.
#[pyfunction]
#[pyo3(signature = (alpha, xi=(0.0, 0.0), tol=1e-10))]
fn identities(py: Python<'_>, alpha: u32, xi: (f64, f64), tol: f64) -> PyResult<Py<PyAny>> {
    let r = canonical_identities(alpha, c64(xi), tol).map_err(err)?;
    let d = pyo3::types::PyDict::new(py);
    d.set_item("id1", r.id1)?;
    d.set_item("id2", r.id2)?;
    d.set_item("id3", r.id3)?;
    d.set_item("quantization", r.quantization)?;
    d.set_item("id1_expected", IdentityReport::id1_expected(alpha))?;
    d.set_item("id3_expected", IdentityReport::id3_expected(alpha))?;
    d.set_item(
        "quantization_expected",
        IdentityReport::quantization_expected(alpha),
    )?;
    Ok(d.into_any().unbind())
}

/// The reduced map F(B) (and optionally its Jacobian) for integer alpha ≥ 2.
#[pyfunction]
#[pyo3(signature = (b, alpha, tol=1e-9, jacobian=false))]
fn reduced_map(
    py: Python<'_>,
    b: (f64, f64),
    alpha: u32,
    tol: f64,
    jacobian: bool,
) -> PyResult<Py<PyAny>> {
    let v = reduction::reduced_map_f(c64(b), alpha, tol, jacobian).map_err(err)?;
    let d = pyo3::types::PyDict::new(py);
    d.set_item("F", (v.f[0], v.f[1]))?;
    if let Some(j) = v.jacobian {
        d.set_item("J", ((j[0][0], j[0][1]), (j[1][0], j[1][1])))?;
    }
    Ok(d.into_any().unbind())
}

/// The common diagonal entry of DF(0): (1/α)∫|y|^{2/α}(2|y|²-1)/(1+|y|²)⁴ dy.
#[pyfunction]
#[pyo3(signature = (alpha, tol=1e-10))]
fn jacobian_at_zero(alpha: u32, tol: f64) -> PyResult<f64> {
    reduction::jacobian_at_zero(alpha, tol).map_err(err)
}

/// The α complex roots of b.
#[pyfunction]
fn roots_of_b(b: (f64, f64), alpha: u32) -> Vec<(f64, f64)> {
    geometry::roots_of_b(c64(b), alpha)
        .iter()
        .map(|r| (r.re, r.im))
        .collect()
}

/// The scale rule δ(λ, b) on a domain with potential data
/// (a0, grad, a11, a22).
#[pyfunction]
fn delta_from_lambda(
    domain: &Domain,
    lambda: f64,
    b: (f64, f64),
    alpha: u32,
    a0: f64,
    grad: (f64, f64),
    a11: f64,
    a22: f64,
) -> PyResult<f64> {
    let pot = PotentialModel::new(
        PotentialSpec {
            a0,
            grad: [grad.0, grad.1],
            a11,
            a22,
            profile: liouville_core::potential::PotentialProfile::Quadratic,
        },
        &domain.gf.domain,
    )
    .map_err(err)?;
    bubble::delta_from_lambda(lambda, c64(b), &pot, &domain.gf, alpha).map_err(err)
}

/// Run a full experiment from a JSON config string; returns the report JSON.
#[pyfunction]
fn run_experiment(config_json: &str) -> PyResult<String> {
    let cfg = liouville_core::experiments::RunConfig::from_json(config_json)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    let outcome = liouville_core::experiments::run(&cfg).map_err(err)?;
    serde_json::to_string_pretty(&outcome.report).map_err(err)
}

#[pymodule]
fn liouville_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Domain>()?;
    m.add_class::<Bubble>()?;
    m.add_function(wrap_pyfunction!(identities, m)?)?;
    m.add_function(wrap_pyfunction!(reduced_map, m)?)?;
    m.add_function(wrap_pyfunction!(jacobian_at_zero, m)?)?;
    m.add_function(wrap_pyfunction!(roots_of_b, m)?)?;
    m.add_function(wrap_pyfunction!(delta_from_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
