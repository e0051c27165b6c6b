//! Python bindings for `trapreact`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use trapreact::aqw::{self, WellSpec};
use trapreact::contact::{self, Coupling};
use trapreact::decay::{self, EvolutionState};
use trapreact::physunits::{self, SpeciesRegistry, TrapContext};
use trapreact::{specfun, trapwell, Error};

create_exception!(trapreact_py, NumericalError, PyRuntimeError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidInput(_) | Error::Config(_) => PyValueError::new_err(e.to_string()),
        other => NumericalError::new_err(other.to_string()),
    }
}

trait IntoPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for trapreact::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

/// a = alpha - i beta in oscillator lengths, beta >= 0.
#[pyclass(name = "ComplexScatteringLength", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyScatteringLength {
    inner: contact::ComplexScatteringLength,
}

#[pymethods]
impl PyScatteringLength {
    #[new]
    fn new(alpha: f64, beta: f64) -> PyResult<Self> {
        Ok(Self {
            inner: contact::ComplexScatteringLength::new(alpha, beta).py_err()?,
        })
    }

    #[staticmethod]
    fn universal(abar: f64) -> PyResult<Self> {
        Ok(Self {
            inner: contact::ComplexScatteringLength::universal(abar).py_err()?,
        })
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta
    }

    fn value(&self) -> Complex64 {
        self.inner.value()
    }

    fn __repr__(&self) -> String {
        format!("ComplexScatteringLength(alpha={}, beta={})", self.inner.alpha, self.inner.beta)
    }
}

#[pyclass(name = "TrapLevel", frozen, get_all)]
struct PyTrapLevel {
    branch: usize,
    energy: Complex64,
    residual: f64,
    method: String,
}

impl From<contact::TrapLevel> for PyTrapLevel {
    fn from(l: contact::TrapLevel) -> Self {
        Self {
            branch: l.branch,
            energy: l.energy,
            residual: l.residual,
            method: l.method.as_str().to_owned(),
        }
    }
}

#[pymethods]
impl PyTrapLevel {
    fn __repr__(&self) -> String {
        format!("TrapLevel(branch={}, energy={}, residual={:e})", self.branch, self.energy, self.residual)
    }
}

#[pyclass(name = "BranchTrack", frozen, get_all)]
struct PyBranchTrack {
    branch: usize,
    parameters: Vec<f64>,
    energies: Vec<Complex64>,
    residuals: Vec<f64>,
}

#[pyclass(name = "MethodComparison", frozen, get_all)]
struct PyMethodComparison {
    u_value: f64,
    branch: usize,
    exact: Complex64,
    edep: Complex64,
    eindep: Complex64,
    shallow_warning: bool,
}

#[pyclass(name = "Well", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyWell {
    inner: WellSpec,
}

#[pymethods]
impl PyWell {
    #[new]
    fn new(depth: f64, range: f64, eta: Complex64) -> PyResult<Self> {
        Ok(Self {
            inner: WellSpec::new(depth, range, eta).py_err()?,
        })
    }

    #[staticmethod]
    fn from_alpha(alpha: f64, range: f64, eta: Complex64) -> PyResult<Self> {
        Ok(Self {
            inner: WellSpec::from_alpha(alpha, range, eta).py_err()?,
        })
    }

    #[getter]
    fn depth(&self) -> f64 {
        self.inner.depth
    }

    #[getter]
    fn range(&self) -> f64 {
        self.inner.range
    }

    #[getter]
    fn eta(&self) -> Complex64 {
        self.inner.eta
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }

    /// Zero-energy scattering length.
    fn zero_energy_a(&self) -> PyResult<Complex64> {
        aqw::zero_energy_a(&self.inner).py_err()
    }

    fn energy_dependent_a(&self, kappa: Complex64) -> PyResult<Complex64> {
        aqw::energy_dependent_a(kappa, &self.inner).py_err()
    }

    /// `(A, B, C)` relative to the incoming amplitude at energy `E > 0`.
    fn coefficients(&self, energy: f64) -> PyResult<(Complex64, Complex64, Complex64)> {
        let c = aqw::coefficients(energy, &self.inner).py_err()?;
        Ok((c.a_tilde, c.b_tilde, c.c_tilde))
    }

    fn __repr__(&self) -> String {
        format!("Well(depth={}, range={}, eta={})", self.inner.depth, self.inner.range, self.inner.eta)
    }
}

#[pyclass(name = "Species", frozen, get_all)]
struct PySpecies {
    name: String,
    mass_amu: f64,
    abar_nm: f64,
    g: u8,
    provenance: String,
}

impl From<&physunits::Species> for PySpecies {
    fn from(s: &physunits::Species) -> Self {
        Self {
            name: s.name.clone(),
            mass_amu: s.mass_amu,
            abar_nm: s.abar_nm,
            g: s.g,
            provenance: s.provenance.clone(),
        }
    }
}

#[pyclass(name = "LifetimeRow", frozen, get_all)]
struct PyLifetimeRow {
    species: String,
    frequency: f64,
    level: usize,
    energy: Complex64,
    tau: f64,
    tau_overlap: Option<f64>,
}

fn coupling_from(a: Option<Complex64>, inverse_a: Option<Complex64>) -> PyResult<Coupling> {
    match (a, inverse_a) {
        (Some(a), None) => Ok(Coupling::from_scattering_length(a)),
        (None, Some(c)) if c == Complex64::new(0.0, 0.0) => Ok(Coupling::unitarity()),
        (None, Some(c)) => Ok(Coupling::Inverse(c)),
        _ => Err(PyValueError::new_err("give exactly one of a or inverse_a")),
    }
}

/// The `n_levels` lowest levels for `a = alpha - i beta`.
#[pyfunction]
fn spectrum(py: Python<'_>, a: PyScatteringLength, n_levels: usize) -> PyResult<Vec<PyTrapLevel>> {
    let levels = py.detach(|| contact::spectrum(a.inner, n_levels)).py_err()?;
    Ok(levels.into_iter().map(Into::into).collect())
}

/// Levels for a complex scattering length or inverse scattering length (0 is unitarity).
#[pyfunction]
#[pyo3(signature = (n_levels, *, a = None, inverse_a = None))]
fn spectrum_for(n_levels: usize, a: Option<Complex64>, inverse_a: Option<Complex64>) -> PyResult<Vec<PyTrapLevel>> {
    let levels = contact::spectrum_for_coupling(coupling_from(a, inverse_a)?, n_levels).py_err()?;
    Ok(levels.into_iter().map(Into::into).collect())
}

#[pyfunction]
fn busch_lhs(energy: Complex64) -> PyResult<Complex64> {
    contact::busch_lhs(energy).py_err()
}

#[pyfunction]
fn sweep_re_a(py: Python<'_>, beta: f64, re_a: Vec<f64>, n_levels: usize) -> PyResult<Vec<PyBranchTrack>> {
    let tracks = py.detach(|| contact::sweep_re_a(beta, &re_a, n_levels)).py_err()?;
    Ok(tracks
        .into_iter()
        .map(|t| PyBranchTrack {
            branch: t.branch_index,
            parameters: t.parameter_grid,
            energies: t.roots,
            residuals: t.residuals,
        })
        .collect())
}

#[pyfunction]
#[pyo3(signature = (branch_lo = 0, branch_hi = 1, beta_min = 0.2, beta_max = 0.7))]
fn find_avoided_crossing(py: Python<'_>, branch_lo: usize, branch_hi: usize, beta_min: f64, beta_max: f64) -> PyResult<f64> {
    py.detach(|| contact::find_avoided_crossing(branch_lo, branch_hi, (beta_min, beta_max)))
        .py_err()
}

/// `(E, a)` of the double root nearest `seed`.
#[pyfunction]
fn exceptional_point(seed: Complex64) -> PyResult<(Complex64, Complex64)> {
    contact::exceptional_point(seed).py_err()
}

/// c-normalized relative wavefunction on `r`.
#[pyfunction]
#[pyo3(signature = (energy, r, *, a = None, inverse_a = None))]
fn wavefunction(energy: Complex64, r: Vec<f64>, a: Option<Complex64>, inverse_a: Option<Complex64>) -> PyResult<Vec<Complex64>> {
    contact::wavefunction(coupling_from(a, inverse_a)?, energy, &r).py_err()
}

/// Exact, edep and eindep levels over depths with alpha evenly spaced on (0, alpha_max].
#[pyfunction]
#[pyo3(signature = (range, eta, n_levels = 3, points = 2000, alpha_max = 4.0 * std::f64::consts::PI))]
fn compare_methods(
    py: Python<'_>,
    range: f64,
    eta: Complex64,
    n_levels: usize,
    points: usize,
    alpha_max: f64,
) -> PyResult<Vec<PyMethodComparison>> {
    let rows = py
        .detach(|| {
            let problem = trapwell::FiniteRangeProblem::alpha_grid(range, eta, n_levels, points, alpha_max)?;
            trapwell::compare_methods(&problem)
        })
        .py_err()?;
    Ok(rows
        .into_iter()
        .map(|r| PyMethodComparison {
            u_value: r.u_value,
            branch: r.branch,
            exact: r.exact,
            edep: r.edep,
            eindep: r.eindep,
            shallow_warning: r.shallow_warning,
        })
        .collect())
}

/// Lifetime in seconds of a level with energy `E` (units of hbar omega).
#[pyfunction]
fn lifetime(energy: Complex64, omega: f64) -> PyResult<f64> {
    decay::lifetime_from_energy(energy, omega).py_err()
}

/// Coefficient matrix `c_ij(t)` from `c_ij(0)`.
#[pyfunction]
fn evolve(eigenvalues: Vec<Complex64>, coefficients: Vec<Vec<Complex64>>, t: f64) -> PyResult<Vec<Vec<Complex64>>> {
    let n = coefficients.len();
    if coefficients.iter().any(|row| row.len() != n) {
        return Err(PyValueError::new_err("coefficient matrix must be square"));
    }
    let c = DMatrix::from_fn(n, n, |i, j| coefficients[i][j]);
    let state = EvolutionState::new(eigenvalues, c).py_err()?;
    let s = decay::evolve(&state, t).py_err()?;
    Ok((0..n).map(|i| (0..n).map(|j| s.coefficients[(i, j)]).collect()).collect())
}

#[pyfunction]
fn fit_decay_rate(times: Vec<f64>, populations: Vec<f64>) -> PyResult<f64> {
    decay::fit_decay_rate(&times, &populations).py_err()
}

fn registry(species_file: Option<&str>) -> PyResult<SpeciesRegistry> {
    match species_file {
        Some(path) => SpeciesRegistry::load(path).py_err(),
        None => Ok(SpeciesRegistry::builtin()),
    }
}

#[pyfunction]
#[pyo3(signature = (species_file = None))]
fn species(species_file: Option<&str>) -> PyResult<Vec<PySpecies>> {
    Ok(registry(species_file)?.species.iter().map(Into::into).collect())
}

/// Universal-limit lifetimes; levels start at 1 (0 is the molecular branch).
#[pyfunction]
#[pyo3(signature = (name, frequencies, levels, species_file = None))]
fn lifetime_sweep(
    py: Python<'_>,
    name: &str,
    frequencies: Vec<f64>,
    levels: Vec<usize>,
    species_file: Option<&str>,
) -> PyResult<Vec<PyLifetimeRow>> {
    let reg = registry(species_file)?;
    let s = reg.get(name).py_err()?.clone();
    let rows = py.detach(|| physunits::lifetime_sweep(&s, &frequencies, &levels)).py_err()?;
    Ok(rows
        .into_iter()
        .map(|r| PyLifetimeRow {
            species: r.species,
            frequency: r.frequency,
            level: r.level,
            energy: Complex64::new(r.re_e, r.im_e),
            tau: r.tau,
            tau_overlap: r.tau_overlap,
        })
        .collect())
}

/// `tau = 1 / (K |psi_n(0)|^2)` in seconds.
#[pyfunction]
#[pyo3(signature = (name, frequency, level = 0, species_file = None))]
fn density_overlap_lifetime(name: &str, frequency: f64, level: usize, species_file: Option<&str>) -> PyResult<f64> {
    let reg = registry(species_file)?;
    let s = reg.get(name).py_err()?;
    let ctx = TrapContext::for_species(s, frequency).py_err()?;
    Ok(physunits::density_overlap_lifetime(s, &ctx, level))
}

/// Universal rate constant in cm^3/s.
#[pyfunction]
#[pyo3(signature = (name, species_file = None))]
fn k_reactive_universal(name: &str, species_file: Option<&str>) -> PyResult<f64> {
    Ok(physunits::k_reactive_universal(registry(species_file)?.get(name).py_err()?))
}

#[pyfunction]
fn cgamma(z: Complex64) -> PyResult<Complex64> {
    specfun::cgamma(z).py_err()
}

#[pyfunction]
fn clgamma(z: Complex64) -> PyResult<Complex64> {
    specfun::clgamma(z).py_err()
}

#[pyfunction]
fn cdigamma(z: Complex64) -> PyResult<Complex64> {
    specfun::cdigamma(z).py_err()
}

#[pyfunction]
fn kummer_m(a: Complex64, b: Complex64, z: Complex64) -> PyResult<Complex64> {
    specfun::kummer_m(a, b, z).py_err()
}

#[pyfunction]
fn tricomi_u(a: Complex64, b: Complex64, z: Complex64) -> PyResult<Complex64> {
    specfun::tricomi_u(a, b, z).py_err()
}

#[pymodule]
fn trapreact_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    m.add_class::<PyScatteringLength>()?;
    m.add_class::<PyTrapLevel>()?;
    m.add_class::<PyBranchTrack>()?;
    m.add_class::<PyMethodComparison>()?;
    m.add_class::<PyWell>()?;
    m.add_class::<PySpecies>()?;
    m.add_class::<PyLifetimeRow>()?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum_for, m)?)?;
    m.add_function(wrap_pyfunction!(busch_lhs, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_re_a, m)?)?;
    m.add_function(wrap_pyfunction!(find_avoided_crossing, m)?)?;
    m.add_function(wrap_pyfunction!(exceptional_point, m)?)?;
    m.add_function(wrap_pyfunction!(wavefunction, m)?)?;
    m.add_function(wrap_pyfunction!(compare_methods, m)?)?;
    m.add_function(wrap_pyfunction!(lifetime, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(fit_decay_rate, m)?)?;
    m.add_function(wrap_pyfunction!(species, m)?)?;
    m.add_function(wrap_pyfunction!(lifetime_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(density_overlap_lifetime, m)?)?;
    m.add_function(wrap_pyfunction!(k_reactive_universal, m)?)?;
    m.add_function(wrap_pyfunction!(cgamma, m)?)?;
    m.add_function(wrap_pyfunction!(clgamma, m)?)?;
    m.add_function(wrap_pyfunction!(cdigamma, m)?)?;
    m.add_function(wrap_pyfunction!(kummer_m, m)?)?;
    m.add_function(wrap_pyfunction!(tricomi_u, m)?)?;
    Ok(())
}
