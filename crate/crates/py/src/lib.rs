//! Python bindings. Integers cross the boundary as Python ints, rationals as
//! `fractions.Fraction`; structured results also offer `to_json()`.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use quasibetti::asymptotics::{self, RegionDescription, RegionOptions};
use quasibetti::betti::{self, BettiTable};
use quasibetti::exactlinalg::{self, IntegerMatrix};
use quasibetti::genfun::{self, IntBox};
use quasibetti::monomial::{self, FiltrationKind};
use quasibetti::partition::{self, Window};
use quasibetti::polyhedra;

create_exception!(quasibetti, QuasibettiError, PyValueError);

fn err(e: quasibetti::Error) -> PyErr {
    QuasibettiError::new_err((e.code(), e.to_string(), e.witness()))
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for quasibetti::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(err)
    }
}

fn json<T: serde::Serialize>(v: &T) -> PyResult<String> {
    serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn matrix(rows: Vec<Vec<BigInt>>) -> PyResult<IntegerMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    IntegerMatrix::new(r, c, rows.into_iter().flatten().collect()).py()
}

fn window(w: (i64, i64)) -> PyResult<RangeInclusive<i64>> {
    if w.0 < 0 || w.1 < w.0 {
        return Err(PyValueError::new_err(format!("invalid window {w:?}")));
    }
    Ok(w.0..=w.1)
}

fn fraction<'py>(py: Python<'py>, q: &num_rational::BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((q.numer().clone(), q.denom().clone()))
}

/// Column Hermite normal form: returns (H, U, pivots) with A U = H.
#[pyfunction]
fn hnf(a: Vec<Vec<BigInt>>) -> PyResult<(Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, Vec<(usize, usize)>)> {
    let r = exactlinalg::hnf(&matrix(a)?);
    Ok((r.h.to_rows(), r.u.to_rows(), r.pivots))
}

/// Number of x >= 0 in Z^n with A x = b.
#[pyfunction]
fn count_fiber(a: Vec<Vec<BigInt>>, b: Vec<BigInt>) -> PyResult<BigInt> {
    polyhedra::count_lattice_points(&polyhedra::fiber_polytope(&matrix(a)?, &b).py()?).py()
}

/// Lattice points of a simple lattice polygon by Pick's formula.
#[pyfunction]
fn pick_count(vertices: Vec<(i64, i64)>) -> PyResult<BigInt> {
    polyhedra::pick_count(&vertices).py()
}

/// Whether the vertex-cone generating functions sum to the polytope's
/// indicator on the box [lo, hi]^d.
#[pyfunction]
fn brion_check(vertices: Vec<Vec<BigInt>>, lo: i64, hi: i64) -> PyResult<bool> {
    let d = vertices.first().map_or(0, Vec::len);
    let rep = genfun::brion_check(&vertices, &IntBox::new(vec![lo; d], vec![hi; d])).py()?;
    Ok(rep.holds)
}

/// Compares beta_0 of powers of (x_1^d_1, ..., x_r^d_r) with the partition function.
#[pyfunction]
fn certify_ci(degrees: Vec<u32>, t_max: u32) -> PyResult<bool> {
    Ok(asymptotics::certify_ci_bridge(&degrees, t_max).py()?.holds)
}

#[pyclass(name = "Chamber", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyChamber {
    inner: partition::Chamber,
}

#[pymethods]
impl PyChamber {
    #[getter]
    fn rays(&self) -> ([i64; 2], [i64; 2]) {
        (self.inner.low_ray, self.inner.high_ray)
    }

    #[getter]
    fn lattice_determinant(&self) -> BigInt {
        self.inner.lattice.determinant().clone()
    }

    fn contains(&self, mu: i64, t: i64) -> bool {
        self.inner.contains(mu, t)
    }

    fn to_json(&self) -> PyResult<String> {
        json(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Chamber({:?}, {:?})", self.inner.low_ray, self.inner.high_ray)
    }
}

#[pyclass(name = "QuasiPolynomial", frozen)]
struct PyQuasiPolynomial {
    inner: partition::QuasiPolynomial,
}

#[pymethods]
impl PyQuasiPolynomial {
    fn __call__<'py>(&self, py: Python<'py>, mu: i64, t: i64) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.evaluate(mu, t))
    }

    #[getter]
    fn period(&self) -> BigInt {
        self.inner.lattice.determinant().clone()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.max_degree()
    }

    fn to_json(&self) -> PyResult<String> {
        json(&self.inner)
    }
}

/// Weight matrix [[d_1 .. d_r], [1 .. 1]].
#[pyclass(name = "WeightSystem", frozen)]
struct PyWeightSystem {
    inner: partition::WeightSystem,
}

#[pymethods]
impl PyWeightSystem {
    #[new]
    fn new(degrees: Vec<i64>) -> PyResult<Self> {
        Ok(PyWeightSystem {
            inner: partition::WeightSystem::new(degrees).py()?,
        })
    }

    #[getter]
    fn degrees(&self) -> Vec<i64> {
        self.inner.degrees().to_vec()
    }

    /// Number of x >= 0 with sum x_i = t and sum d_i x_i = mu.
    fn __call__(&self, mu: i64, t: i64) -> BigInt {
        self.inner.evaluate(mu, t)
    }

    fn chambers(&self) -> Vec<PyChamber> {
        partition::chamber_complex(&self.inner)
            .into_iter()
            .map(|inner| PyChamber { inner })
            .collect()
    }

    /// Fit the quasi-polynomial of a chamber and certify it on `validate`.
    #[pyo3(signature = (chamber, fit = None, validate = None))]
    fn fit(
        &self,
        chamber: &PyChamber,
        fit: Option<(i64, i64)>,
        validate: Option<(i64, i64)>,
    ) -> PyResult<PyQuasiPolynomial> {
        let fit_w = match fit {
            Some(w) => Window::new(window(w)?),
            None => partition::default_fit_window(&self.inner),
        };
        let val_w = match validate {
            Some(w) => Window::new(window(w)?),
            None => partition::default_validate_window(&fit_w),
        };
        let inner = partition::fit_quasi_polynomial(&self.inner, &chamber.inner, &fit_w, &val_w).py()?;
        Ok(PyQuasiPolynomial { inner })
    }
}

#[pyclass(name = "MonomialIdeal", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyMonomialIdeal {
    inner: monomial::MonomialIdeal,
}

#[pymethods]
impl PyMonomialIdeal {
    #[new]
    fn new(nvars: usize, generators: Vec<Vec<u32>>) -> PyResult<Self> {
        Ok(PyMonomialIdeal {
            inner: monomial::MonomialIdeal::new(nvars, generators).py()?,
        })
    }

    #[getter]
    fn nvars(&self) -> usize {
        self.inner.nvars()
    }

    #[getter]
    fn generators(&self) -> Vec<Vec<u32>> {
        self.inner.generators().to_vec()
    }

    fn contains(&self, exponent: Vec<u32>) -> bool {
        self.inner.contains_monomial(&exponent)
    }

    fn __mul__(&self, other: &PyMonomialIdeal) -> PyResult<Self> {
        Ok(PyMonomialIdeal {
            inner: self.inner.multiply(&other.inner).py()?,
        })
    }

    fn __pow__(&self, t: u32, _modulo: Option<u32>) -> Self {
        PyMonomialIdeal { inner: self.inner.power(t) }
    }

    fn colon(&self, other: &PyMonomialIdeal) -> PyResult<Self> {
        Ok(PyMonomialIdeal {
            inner: self.inner.colon(&other.inner).py()?,
        })
    }

    /// Integral closure of the t-th power.
    #[pyo3(signature = (t = 1))]
    fn integral_closure(&self, t: u32) -> Self {
        PyMonomialIdeal {
            inner: monomial::integral_closure_power(&self.inner, t),
        }
    }

    /// Ratliff-Rush closure; returns (ideal, stabilized).
    #[pyo3(signature = (horizon = monomial::RATLIFF_RUSH_HORIZON))]
    fn ratliff_rush(&self, horizon: u32) -> (Self, bool) {
        let r = monomial::ratliff_rush(&self.inner, horizon);
        (PyMonomialIdeal { inner: r.ideal }, r.stabilized)
    }

    /// Smallest r with self * other^r = other^(r+1), if self reduces other.
    #[pyo3(signature = (other, max_r = 10))]
    fn reduction_number(&self, other: &PyMonomialIdeal, max_r: u32) -> PyResult<Option<u32>> {
        monomial::is_reduction(&self.inner, &other.inner, max_r).py()
    }

    fn betti_table(&self) -> PyResult<PyBettiTable> {
        Ok(PyBettiTable {
            inner: betti::graded_betti(&self.inner).py()?,
        })
    }

    /// Multigraded Betti numbers as {(i, alpha): beta}.
    fn multigraded_betti(&self) -> PyResult<Vec<((usize, Vec<u32>), u64)>> {
        Ok(betti::multigraded_betti(&self.inner).py()?.into_iter().collect())
    }

    fn to_json(&self) -> PyResult<String> {
        json(&self.inner)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("MonomialIdeal{}", self.inner)
    }
}

#[pyclass(name = "BettiTable", frozen)]
struct PyBettiTable {
    inner: BettiTable,
}

#[pymethods]
impl PyBettiTable {
    fn __getitem__(&self, key: (usize, u32)) -> u64 {
        self.inner.get(key.0, key.1)
    }

    fn entries<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for (k, v) in &self.inner.entries {
            d.set_item(*k, *v)?;
        }
        Ok(d)
    }

    fn hilbert_function(&self, nu: u32) -> BigInt {
        self.inner.hilbert_function(nu)
    }

    fn to_json(&self) -> PyResult<String> {
        json(&self.inner)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

#[pyclass(name = "Filtration", frozen)]
struct PyFiltration {
    inner: monomial::Filtration,
}

#[pymethods]
impl PyFiltration {
    /// `kind` is one of powers, integral-closure, ratliff-rush.
    #[new]
    fn new(kind: &str, base: &PyMonomialIdeal, horizon: u32) -> PyResult<Self> {
        let kind: FiltrationKind = kind.parse().py()?;
        Ok(PyFiltration {
            inner: monomial::Filtration::new(kind, base.inner.clone(), horizon).py()?,
        })
    }

    fn term(&self, t: u32) -> Option<PyMonomialIdeal> {
        self.inner.term(t).map(|i| PyMonomialIdeal { inner: i.clone() })
    }

    #[getter]
    fn horizon(&self) -> u32 {
        self.inner.horizon
    }

    /// Returns (good, n0) where J_(n+1) = I J_n for n0 <= n < horizon.
    fn good_check(&self, base: &PyMonomialIdeal) -> PyResult<(bool, Option<u32>)> {
        let r = monomial::good_filtration_check(&self.inner, &base.inner).py()?;
        Ok((r.good, r.n0))
    }

    fn betti_tables(&self) -> PyResult<Vec<(u32, PyBettiTable)>> {
        Ok(betti::betti_family(&self.inner)
            .py()?
            .tables
            .into_iter()
            .map(|(t, inner)| (t, PyBettiTable { inner }))
            .collect())
    }

    /// Detect the region description of beta_i over the filtration.
    #[pyo3(signature = (i, fit, validate, degree_cap = None))]
    fn regions(
        &self,
        i: usize,
        fit: (i64, i64),
        validate: (i64, i64),
        degree_cap: Option<u32>,
    ) -> PyResult<PyRegionDescription> {
        let fam = betti::betti_family(&self.inner).py()?;
        let w = asymptotics::weight_system_of(&self.inner.base).py()?;
        let opts = RegionOptions {
            degree_cap,
            ..RegionOptions::default()
        };
        let inner = asymptotics::detect_regions(&fam, i, &w, window(fit)?, window(validate)?, &opts).py()?;
        Ok(PyRegionDescription { inner })
    }
}

#[pyclass(name = "RegionDescription", frozen)]
struct PyRegionDescription {
    inner: RegionDescription,
}

#[pymethods]
impl PyRegionDescription {
    /// Predicted beta_i in degree mu of the t-th term.
    fn predict(&self, mu: i64, t: i64) -> PyResult<BigInt> {
        asymptotics::predict(&self.inner, mu, t).py()
    }

    #[getter]
    fn t0(&self) -> i64 {
        self.inner.t0
    }

    #[getter]
    fn period(&self) -> u64 {
        self.inner.d
    }

    #[getter]
    fn lines(&self) -> Vec<(i64, i64)> {
        self.inner.lines.iter().map(|l| (l.a, l.b)).collect()
    }

    fn region_count(&self) -> usize {
        self.inner.region_count()
    }

    fn to_json(&self) -> PyResult<String> {
        json(&self.inner)
    }
}

#[pymodule(name = "quasibetti")]
fn quasibetti_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("QuasibettiError", m.py().get_type::<QuasibettiError>())?;
    m.add_function(wrap_pyfunction!(hnf, m)?)?;
    m.add_function(wrap_pyfunction!(count_fiber, m)?)?;
    m.add_function(wrap_pyfunction!(pick_count, m)?)?;
    m.add_function(wrap_pyfunction!(brion_check, m)?)?;
    m.add_function(wrap_pyfunction!(certify_ci, m)?)?;
    m.add_class::<PyWeightSystem>()?;
    m.add_class::<PyChamber>()?;
    m.add_class::<PyQuasiPolynomial>()?;
    m.add_class::<PyMonomialIdeal>()?;
    m.add_class::<PyBettiTable>()?;
    m.add_class::<PyFiltration>()?;
    m.add_class::<PyRegionDescription>()?;
    Ok(())
}
