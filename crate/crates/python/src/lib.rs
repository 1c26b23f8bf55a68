use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use dillonlab::catalog::{self, FamilySpec};
use dillonlab::dproperty::{self, CheckOptions, Method};
use dillonlab::gf2n::{FieldCtx, SubspaceBasis};
use dillonlab::reproduce::{run_experiment, RunOptions, EXPERIMENTS};
use dillonlab::spectra;
use dillonlab::vbf::Vbf;

fn err(e: dillonlab::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn loads<'py>(py: Python<'py>, text: String) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

/// GF(2^n) with a fixed modulus; elements are ints below 2^n.
#[pyclass(name = "Field", frozen)]
struct PyField {
    inner: FieldCtx,
}

#[pymethods]
impl PyField {
    #[new]
    #[pyo3(signature = (n, modulus=None))]
    fn new(n: u32, modulus: Option<u64>) -> PyResult<Self> {
        Ok(PyField { inner: FieldCtx::new(n, modulus).map_err(err)? })
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn modulus(&self) -> u64 {
        self.inner.modulus()
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        self.inner.mul(a, b)
    }

    fn pow(&self, a: u32, e: u64) -> u32 {
        self.inner.pow(a, e)
    }

    fn inv(&self, a: u32) -> PyResult<u32> {
        if a == 0 {
            return Err(PyValueError::new_err("0 has no inverse"));
        }
        Ok(self.inner.inv(a))
    }

    fn trace(&self, a: u32) -> u32 {
        self.inner.abs_trace(a)
    }

    fn trace_zero_basis(&self) -> Vec<u32> {
        self.inner.trace_zero_basis().vectors().to_vec()
    }

    fn hyperplane_basis(&self, alpha: u32) -> PyResult<Vec<u32>> {
        Ok(self.inner.hyperplane_basis(alpha).map_err(err)?.vectors().to_vec())
    }

    fn __repr__(&self) -> String {
        format!("Field(n={}, modulus={})", self.inner.n(), self.inner.modulus_hex())
    }
}

/// Vectorial Boolean function F_2^n -> F_2^m stored as a truth table.
#[pyclass(name = "Vbf", frozen)]
struct PyVbf {
    inner: Vbf,
}

#[pymethods]
impl PyVbf {
    #[new]
    fn new(n: u32, m: u32, table: Vec<u32>) -> PyResult<Self> {
        Ok(PyVbf { inner: Vbf::from_truth_table(n, m, table).map_err(err)? })
    }

    /// Builds a function from a family spec such as "gold:n=7,i=1,restrict=t0".
    #[staticmethod]
    #[pyo3(signature = (spec, modulus=None))]
    fn from_spec(spec: &str, modulus: Option<u64>) -> PyResult<Self> {
        let spec: FamilySpec = spec.parse().map_err(err)?;
        Ok(PyVbf { inner: spec.build(modulus).map_err(err)? })
    }

    #[staticmethod]
    fn gold(n: u32, i: u32) -> PyResult<Self> {
        Ok(PyVbf { inner: catalog::gold(n, i).map_err(err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (n, m, seed, density=None))]
    fn random_quadratic(n: u32, m: u32, seed: u64, density: Option<f64>) -> PyResult<Self> {
        let anf = catalog::random_quadratic(n, m, seed, density).map_err(err)?;
        Ok(PyVbf { inner: Vbf::from_anf(&anf) })
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> u32 {
        self.inner.m()
    }

    #[getter]
    fn table(&self) -> Vec<u32> {
        self.inner.table().to_vec()
    }

    fn __call__(&self, x: u32) -> PyResult<u32> {
        if x as usize >= self.inner.domain_size() {
            return Err(PyValueError::new_err(format!("input {x:#x} outside F_2^{}", self.inner.n())));
        }
        Ok(self.inner.eval(x))
    }

    fn __len__(&self) -> usize {
        self.inner.domain_size()
    }

    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    fn is_quadratic(&self) -> bool {
        self.inner.is_quadratic()
    }

    fn is_apn(&self) -> bool {
        spectra::is_apn(&self.inner)
    }

    fn differential_uniformity(&self) -> u32 {
        spectra::differential_uniformity(&self.inner)
    }

    fn nonlinearity(&self) -> PyResult<u64> {
        spectra::nonlinearity(&self.inner).map_err(err)
    }

    fn walsh_row(&self, v: u32) -> PyResult<Vec<i64>> {
        Ok(spectra::walsh_row_checked(&self.inner, v).map_err(err)?.values)
    }

    fn ddt_row(&self, a: u32) -> PyResult<Vec<u32>> {
        Ok(spectra::ddt_row(&self.inner, a).map_err(err)?.counts)
    }

    fn second_derivative(&self, a: u32, b: u32, x: u32) -> u32 {
        self.inner.second_derivative(a, b, x)
    }

    fn normalize(&self) -> Self {
        PyVbf { inner: self.inner.normalize() }
    }

    /// Restriction to the span of `basis`, indexed by coordinates in that basis.
    fn restrict(&self, basis: Vec<u32>) -> PyResult<Self> {
        let basis = SubspaceBasis::new(self.inner.n(), basis).map_err(err)?;
        Ok(PyVbf { inner: self.inner.restrict(&basis).map_err(err)? })
    }

    fn __repr__(&self) -> String {
        format!("Vbf(n={}, m={}, {})", self.inner.n(), self.inner.m(), self.inner.provenance().description)
    }
}

/// D-property check; returns the report as a dict (schema "dreport/1").
#[pyfunction]
#[pyo3(signature = (f, method=None, witnesses=false, threads=1))]
fn d_check<'py>(
    py: Python<'py>,
    f: &PyVbf,
    method: Option<&str>,
    witnesses: bool,
    threads: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let opts = CheckOptions { witnesses, threads, ..Default::default() };
    let report = match method {
        None => dproperty::check_d(&f.inner, &opts),
        Some(name) => {
            let method =
                Method::parse(name).ok_or_else(|| PyValueError::new_err(format!("unknown method {name:?}")))?;
            dproperty::d_check(&f.inner, method, &opts)
        }
    }
    .map_err(err)?;
    loads(py, report.to_json().to_string())
}

#[pyfunction]
fn methods() -> Vec<&'static str> {
    Method::ALL.iter().map(|m| m.name()).collect()
}

/// Runs a named experiment and returns its claims as a dict.
#[pyfunction]
#[pyo3(signature = (name, threads=0))]
fn reproduce<'py>(py: Python<'py>, name: &str, threads: usize) -> PyResult<Bound<'py, PyAny>> {
    let report = run_experiment(name, &RunOptions { threads, modulus: None }).map_err(err)?;
    let mut value = serde_json::to_value(&report).map_err(|e| PyValueError::new_err(e.to_string()))?;
    value["passed"] = report.passed().into();
    loads(py, value.to_string())
}

#[pymodule]
fn pydillonlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyVbf>()?;
    m.add_function(wrap_pyfunction!(d_check, m)?)?;
    m.add_function(wrap_pyfunction!(methods, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce, m)?)?;
    m.add("EXPERIMENTS", EXPERIMENTS.to_vec())?;
    Ok(())
}
