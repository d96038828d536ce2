//! Python bindings. Verdicts come back as plain dicts; states as `XState`.

use num_complex::Complex64 as C64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use xsep_core::orbit::{classify_by_block_spectra, classify_orbit, diagonalize as core_diagonalize, OrderedSpectrum};
use xsep_core::sampler::{sample_xstate, Measure, SamplerConfig};
use xsep_core::separability::{absolutely_separable as core_abs_sep, ppt_elementwise, ppt_oracle, Binding};
use xsep_core::{su4, Tolerances as CoreTolerances, XState as CoreXState};

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Numerical thresholds. Defaults match the Rust crate.
#[pyclass(module = "xsep", name = "Tolerances", from_py_object)]
#[derive(Clone, Copy)]
struct Tolerances {
    inner: CoreTolerances,
}

#[pymethods]
impl Tolerances {
    #[new]
    #[pyo3(signature = (structural=None, spectral=None, band=None))]
    fn new(structural: Option<f64>, spectral: Option<f64>, band: Option<f64>) -> PyResult<Self> {
        let inner = build_tolerances(structural, spectral, band).map_err(value_error)?;
        Ok(Self { inner })
    }

    #[getter]
    fn structural(&self) -> f64 {
        self.inner.structural
    }

    #[getter]
    fn spectral(&self) -> f64 {
        self.inner.spectral
    }

    #[getter]
    fn band(&self) -> f64 {
        self.inner.band
    }

    fn __repr__(&self) -> String {
        let t = self.inner;
        format!("Tolerances(structural={:e}, spectral={:e}, band={:e})", t.structural, t.spectral, t.band)
    }
}

fn build_tolerances(structural: Option<f64>, spectral: Option<f64>, band: Option<f64>) -> xsep_core::Result<CoreTolerances> {
    let d = CoreTolerances::default();
    let t = CoreTolerances {
        structural: structural.unwrap_or(d.structural),
        spectral: spectral.unwrap_or(d.spectral),
        band: band.unwrap_or(d.band),
    };
    t.validate()?;
    Ok(t)
}

fn tol_or_default(tol: Option<Tolerances>) -> CoreTolerances {
    tol.map(|t| t.inner).unwrap_or_default()
}

/// Two-qubit X-state: populations `d` and the coherences ρ₁₄, ρ₂₃.
#[pyclass(module = "xsep", name = "XState", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct XState {
    inner: CoreXState,
}

#[pymethods]
impl XState {
    #[new]
    #[pyo3(signature = (d, c14, c23, tol=None))]
    fn new(d: [f64; 4], c14: C64, c23: C64, tol: Option<Tolerances>) -> PyResult<Self> {
        let inner = CoreXState::with_tolerances(d, c14, c23, &tol_or_default(tol)).map_err(value_error)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn maximally_mixed() -> Self {
        Self { inner: CoreXState::maximally_mixed() }
    }

    #[staticmethod]
    fn bell_phi_plus() -> Self {
        Self { inner: CoreXState::bell_phi_plus() }
    }

    #[staticmethod]
    fn werner(p: f64) -> PyResult<Self> {
        Ok(Self { inner: CoreXState::werner(p).map_err(value_error)? })
    }

    #[staticmethod]
    #[pyo3(signature = (line, tol=None))]
    fn from_csv_row(line: &str, tol: Option<Tolerances>) -> PyResult<Self> {
        let inner = CoreXState::from_csv_row(line, &tol_or_default(tol)).map_err(value_error)?;
        Ok(Self { inner })
    }

    #[getter]
    fn populations(&self) -> [f64; 4] {
        self.inner.populations()
    }

    #[getter]
    fn c14(&self) -> C64 {
        self.inner.c14()
    }

    #[getter]
    fn c23(&self) -> C64 {
        self.inner.c23()
    }

    /// Dense 4×4 density matrix as nested lists, rows first.
    fn to_dense(&self) -> Vec<Vec<C64>> {
        let m = self.inner.to_dense();
        (0..4).map(|i| (0..4).map(|j| m[(i, j)]).collect()).collect()
    }

    /// Coefficients (h3, h6, h7, h8, h10, h11, h15).
    fn h_coefficients(&self) -> [f64; 7] {
        self.inner.h_coefficients().to_array()
    }

    fn to_csv_row(&self) -> String {
        self.inner.to_csv_row()
    }

    fn __repr__(&self) -> String {
        let d = self.inner.populations();
        let (a, b) = (self.inner.c14(), self.inner.c23());
        format!("XState(d={d:?}, c14={}{:+}j, c23={}{:+}j)", a.re, a.im, b.re, b.im)
    }
}

fn binding_name(b: Binding) -> &'static str {
    match b {
        Binding::First => "first",
        Binding::Second => "second",
        Binding::Both => "both",
        Binding::None => "none",
    }
}

/// Orbit type under the X-subgroup.
#[pyfunction]
#[pyo3(signature = (x, tol=None))]
fn classify<'py>(py: Python<'py>, x: &XState, tol: Option<Tolerances>) -> PyResult<Bound<'py, PyDict>> {
    let c = classify_orbit(&x.inner, &tol_or_default(tol));
    let d = PyDict::new(py);
    d.set_item("kind", c.kind.to_string())?;
    d.set_item("isotropy_dim", c.isotropy_dim)?;
    d.set_item("orbit_dim", c.kind.orbit_dim())?;
    d.set_item("mu1", c.mu1)?;
    d.set_item("mu2", c.mu2)?;
    d.set_item("marginal", c.marginal)?;
    Ok(d)
}

/// PPT verdict from the closed-form inequalities plus the dense oracle.
#[pyfunction]
#[pyo3(signature = (x, tol=None))]
fn check_sep<'py>(py: Python<'py>, x: &XState, tol: Option<Tolerances>) -> PyResult<Bound<'py, PyDict>> {
    let t = tol_or_default(tol);
    let v = ppt_elementwise(&x.inner, &t);
    let o = ppt_oracle(&x.inner, &t).map_err(value_error)?;
    let d = PyDict::new(py);
    d.set_item("separable", v.separable)?;
    d.set_item("margin", v.margin)?;
    d.set_item("slack1", v.slack1)?;
    d.set_item("slack2", v.slack2)?;
    d.set_item("binding", binding_name(v.binding))?;
    d.set_item("marginal", v.marginal)?;
    d.set_item("oracle_separable", o.separable)?;
    d.set_item("oracle_min_eigenvalue", o.min_eigenvalue)?;
    Ok(d)
}

/// Ordered spectrum (r1, r2, r3, r4) and frame angles.
#[pyfunction]
#[pyo3(signature = (x, tol=None))]
fn diagonalize<'py>(py: Python<'py>, x: &XState, tol: Option<Tolerances>) -> PyResult<Bound<'py, PyDict>> {
    let (r, f) = core_diagonalize(&x.inner, &tol_or_default(tol)).map_err(value_error)?;
    let d = PyDict::new(py);
    d.set_item("spectrum", r.to_array())?;
    d.set_item("phi1", f.phi1)?;
    d.set_item("psi1", f.psi1)?;
    d.set_item("phi2", f.phi2)?;
    d.set_item("psi2", f.psi2)?;
    d.set_item("omega", f.omega)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (r, tol=None))]
fn absolutely_separable<'py>(py: Python<'py>, r: [f64; 4], tol: Option<Tolerances>) -> PyResult<Bound<'py, PyDict>> {
    let t = tol_or_default(tol);
    let r = OrderedSpectrum::with_tolerances(r, &t).map_err(value_error)?;
    let v = core_abs_sep(&r, &t);
    let d = PyDict::new(py);
    d.set_item("abs_separable", v.abs_separable)?;
    d.set_item("slack1", v.slack1)?;
    d.set_item("slack2", v.slack2)?;
    Ok(d)
}

fn parse_measure(name: &str) -> Result<Measure, String> {
    match name {
        "spectrum" => Ok(Measure::SpectrumUniform),
        "param" => Ok(Measure::ParamUniformRejection),
        other => Err(format!("unknown measure {other:?}, expected \"spectrum\" or \"param\"")),
    }
}

/// Seeded draw of `count` X-states.
#[pyfunction]
#[pyo3(signature = (count, seed=0, measure="spectrum", tol=None))]
fn sample(count: usize, seed: u64, measure: &str, tol: Option<Tolerances>) -> PyResult<Vec<XState>> {
    let t = tol_or_default(tol);
    let cfg = SamplerConfig::new(parse_measure(measure).map_err(value_error)?, seed, count).map_err(value_error)?;
    Ok(sample_xstate(&cfg, &t).map(|inner| XState { inner }).collect())
}

/// Named checks as `(name, passed, detail)` tuples.
fn run_checks(seed: u64, count: usize, t: &CoreTolerances) -> xsep_core::Result<Vec<(&'static str, bool, String)>> {
    let mut checks = Vec::new();
    let table = su4::verify_commutator_table(t.structural);
    checks.push(("commutator table", table.passed(), format!("max deviation {:e}", table.max_deviation)));
    let cartan = su4::verify_cartan_split(t.structural);
    checks.push(("cartan split", cartan.passed(), format!("max residual {:e}", cartan.max_residual)));
    let closure = su4::alpha_closure_residual();
    checks.push(("X-subalgebra closure", closure <= t.structural, format!("residual {closure:e}")));
    let cfg = SamplerConfig::new(Measure::ParamUniformRejection, seed, count)?;
    let mut oracle_bad = 0;
    let mut orbit_bad = 0;
    for x in sample_xstate(&cfg, t) {
        let e = ppt_elementwise(&x, t);
        let o = ppt_oracle(&x, t)?;
        oracle_bad += (!e.marginal && o.separable != e.separable) as usize;
        let (a, b) = (classify_orbit(&x, t), classify_by_block_spectra(&x, t));
        orbit_bad += (!a.marginal && !b.marginal && a.kind != b.kind) as usize;
    }
    checks.push(("oracle concordance", oracle_bad == 0, format!("{count} states, {oracle_bad} disagreements")));
    checks.push(("orbit concordance", orbit_bad == 0, format!("{count} states, {orbit_bad} disagreements")));
    Ok(checks)
}

/// Algebra self-checks and oracle concordance on sampled states.
#[pyfunction]
#[pyo3(signature = (count=1000, seed=0, tol=None))]
fn verify(count: usize, seed: u64, tol: Option<Tolerances>) -> PyResult<Vec<(&'static str, bool, String)>> {
    run_checks(seed, count, &tol_or_default(tol)).map_err(value_error)
}

#[pymodule]
fn xsep(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Tolerances>()?;
    m.add_class::<XState>()?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(check_sep, m)?)?;
    m.add_function(wrap_pyfunction!(diagonalize, m)?)?;
    m.add_function(wrap_pyfunction!(absolutely_separable, m)?)?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
