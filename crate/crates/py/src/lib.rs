//! Python bindings for the `cremona` crate.
//!
//! Maps, families and matrices are built from the same textual grammar as
//! the command-line tool; scalars and points cross the boundary as strings.

use cremona::{
    CremonaMap, Derivative, Evaluation, Family, Field, Matrix, ProjMatrix, ProjPoint, Scalar,
    DEFAULT_HEIGHT_BOUND,
};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(cremona_py, CremonaError, PyValueError);

fn err(e: cremona::CremonaError) -> PyErr {
    CremonaError::new_err(e.to_string())
}

fn field(s: &str) -> PyResult<Field> {
    s.parse().map_err(err)
}

fn scalar(f: Field, s: &str) -> PyResult<Scalar> {
    Scalar::parse(f, s).map_err(err)
}

fn strings<T: ToString>(items: &[T]) -> Vec<String> {
    items.iter().map(T::to_string).collect()
}

fn rows(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| strings(r)).collect()
}

/// A birational map of projective space, optionally carrying a verified inverse.
#[pyclass(name = "Map", module = "cremona_py")]
struct PyMap(CremonaMap);

#[pymethods]
impl PyMap {
    /// Parses `[p0 : ... : pn]`, optionally followed by `;; inverse=[...]`.
    #[staticmethod]
    #[pyo3(signature = (text, n, field = "q"))]
    fn parse(text: &str, n: usize, field: &str) -> PyResult<Self> {
        let f = CremonaMap::parse(self::field(field)?, n, text).map_err(err)?;
        match f.inverse_components() {
            Some(inv) => Ok(PyMap(CremonaMap::certified(f.components().to_vec(), inv.to_vec()).map_err(err)?)),
            None => Ok(PyMap(f)),
        }
    }

    #[staticmethod]
    #[pyo3(signature = (n, field = "q"))]
    fn identity(n: usize, field: &str) -> PyResult<Self> {
        Ok(PyMap(CremonaMap::identity(self::field(field)?, n)))
    }

    #[staticmethod]
    #[pyo3(signature = (n, field = "q"))]
    fn standard_involution(n: usize, field: &str) -> PyResult<Self> {
        CremonaMap::standard_involution(self::field(field)?, n).map(PyMap).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (n, field = "q"))]
    fn dejonquieres_h(n: usize, field: &str) -> PyResult<Self> {
        CremonaMap::dejonquieres_h(self::field(field)?, n).map(PyMap).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (a, n, field = "q"))]
    fn scaling(a: &str, n: usize, field: &str) -> PyResult<Self> {
        let f = self::field(field)?;
        CremonaMap::scaling_g_a(&scalar(f, a)?, n).map(PyMap).map_err(err)
    }

    /// The map with two fixed points whose derivatives differ by `lambda`.
    #[staticmethod]
    #[pyo3(signature = (lam, n, field = "q"))]
    fn gadget(lam: &str, n: usize, field: &str) -> PyResult<Self> {
        let f = self::field(field)?;
        CremonaMap::twoderivatives_gadget(&scalar(f, lam)?, n).map(PyMap).map_err(err)
    }

    /// `self ∘ other`.
    fn compose(&self, other: PyRef<'_, PyMap>) -> PyResult<Self> {
        self.0.compose(&other.0).map(PyMap).map_err(err)
    }

    fn inverse(&self) -> PyResult<Self> {
        self.0.inverse().map(PyMap).map_err(err)
    }

    fn verify_certificate(&self) -> PyResult<bool> {
        self.0.verify_certificate().map_err(err)
    }

    /// Image of a point such as `"1:2:3"`, or `None` where the map is indeterminate.
    fn evaluate(&self, point: &str) -> PyResult<Option<String>> {
        let p = ProjPoint::parse(self.0.field(), point).map_err(err)?;
        Ok(match self.0.evaluate(&p).map_err(err)? {
            Evaluation::Point(q) => Some(q.to_string()),
            Evaluation::Indeterminate => None,
        })
    }

    /// Derivative at a fixed point as a matrix of strings, `None` if singular.
    fn derivative_at_fixed_point(&self, point: &str) -> PyResult<Option<Vec<Vec<String>>>> {
        let p = ProjPoint::parse(self.0.field(), point).map_err(err)?;
        Ok(match self.0.derivative_at_fixed_point(&p).map_err(err)? {
            Derivative::Linear(m) => Some(rows(m.lift())),
            Derivative::Singular => None,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.0.degree()
    }

    #[getter]
    fn certified(&self) -> bool {
        self.0.is_certified()
    }

    #[getter]
    fn components(&self) -> Vec<String> {
        strings(self.0.components())
    }

    fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    fn __eq__(&self, other: PyRef<'_, PyMap>) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Map({})", self.0)
    }
}

/// A family of birational maps over the affine line in `t`.
#[pyclass(name = "Family", module = "cremona_py")]
struct PyFamily(Family);

#[pymethods]
impl PyFamily {
    /// Parses `[...] ;; inverse=[...]` where coefficients may involve `t`.
    #[staticmethod]
    #[pyo3(signature = (text, n, field = "q"))]
    fn parse(text: &str, n: usize, field: &str) -> PyResult<Self> {
        Family::parse(self::field(field)?, n, text).map(PyFamily).map_err(err)
    }

    #[staticmethod]
    fn constant(f: PyRef<'_, PyMap>) -> PyResult<Self> {
        Family::constant(&f.0).map(PyFamily).map_err(err)
    }

    fn specialize(&self, t: &str) -> PyResult<PyMap> {
        let t = scalar(self.0.field(), t)?;
        self.0.specialize(&t).map(PyMap).map_err(err)
    }

    /// Pointwise composition: `(self * other)(t) = self(t) ∘ other(t)`.
    fn product(&self, other: PyRef<'_, PyFamily>) -> PyResult<Self> {
        self.0.product(&other.0).map(PyFamily).map_err(err)
    }

    fn inverse(&self) -> Self {
        PyFamily(self.0.inverse())
    }

    /// Checks the specialization at each sample; returns one dict per sample.
    fn verify<'py>(&mut self, py: Python<'py>, samples: Vec<String>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let field = self.0.field();
        let ts = samples.iter().map(|s| scalar(field, s)).collect::<PyResult<Vec<_>>>()?;
        let report = self.0.verify(&ts);
        report
            .samples
            .iter()
            .map(|s| {
                let d = PyDict::new(py);
                d.set_item("t", s.t.to_string())?;
                d.set_item("passed", s.passed)?;
                d.set_item("degree", s.degree)?;
                d.set_item("error", s.error.clone())?;
                Ok(d)
            })
            .collect()
    }

    #[getter]
    fn x_degree(&self) -> u32 {
        self.0.x_degree()
    }

    #[getter]
    fn t_degree(&self) -> usize {
        self.0.t_degree()
    }

    #[getter]
    fn components(&self) -> Vec<String> {
        strings(self.0.components())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Family(x_degree={}, t_degree={})", self.0.x_degree(), self.0.t_degree())
    }
}

/// Conjugation-limit family of `g` at a fixed point.
#[pyfunction]
fn conj_limit(g: PyRef<'_, PyMap>, point: &str) -> PyResult<PyFamily> {
    let p = ProjPoint::parse(g.0.field(), point).map_err(err)?;
    cremona::conj_limit(&g.0, &p).map(PyFamily).map_err(err)
}

/// A family from `f` at `t = 0` to `g` at `t = 1`, with its construction steps.
#[pyfunction]
#[pyo3(signature = (f, g, height_bound = DEFAULT_HEIGHT_BOUND))]
fn connect(f: PyRef<'_, PyMap>, g: PyRef<'_, PyMap>, height_bound: u64) -> PyResult<(PyFamily, Vec<String>)> {
    let (family, plan) = cremona::connect(&f.0, &g.0, height_bound).map_err(err)?;
    Ok((PyFamily(family), plan.steps.iter().map(|s| s.to_string()).collect()))
}

/// Transvections `(i, j, lambda)` (0-based) whose product is the matrix `a,b;c,d`.
#[pyfunction]
#[pyo3(signature = (matrix, field = "q"))]
fn sl_decompose(matrix: &str, field: &str) -> PyResult<Vec<(usize, usize, String)>> {
    let m = Matrix::parse(self::field(field)?, matrix).map_err(err)?;
    let word = cremona::sl_decompose(&m).map_err(err)?;
    Ok(word.factors.iter().map(|t| (t.i, t.j, t.lambda.to_string())).collect())
}

#[pyfunction]
#[pyo3(signature = (a, b, field = "q"))]
fn psl_path(a: &str, b: &str, field: &str) -> PyResult<PyFamily> {
    let f = self::field(field)?;
    let a = Matrix::parse(f, a).map_err(err)?;
    let b = Matrix::parse(f, b).map_err(err)?;
    cremona::psl_path(&a, &b).map(PyFamily).map_err(err)
}

/// Determinant and whether the projective class lies in PSL.
#[pyfunction]
#[pyo3(signature = (matrix, field = "q"))]
fn det_class<'py>(py: Python<'py>, matrix: &str, field: &str) -> PyResult<Bound<'py, PyDict>> {
    let m = ProjMatrix::new(Matrix::parse(self::field(field)?, matrix).map_err(err)?).map_err(err)?;
    let c = cremona::det_class(&m).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("det", c.det.to_string())?;
    d.set_item("in_psl", c.in_psl)?;
    d.set_item("root", c.root.map(|r| r.to_string()))?;
    Ok(d)
}

/// Order of PGL2(F_q), order of PSL2(F_q) and simplicity of PGL2(F_q).
#[pyfunction]
fn pgl2_finite<'py>(py: Python<'py>, q: u32) -> PyResult<Bound<'py, PyDict>> {
    let table = cremona::pgl2_enumerate(q).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("order", table.order())?;
    d.set_item("psl_order", table.psl_elements().len())?;
    d.set_item("simple", table.is_simple())?;
    Ok(d)
}

#[pymodule]
fn cremona_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CremonaError", m.py().get_type::<CremonaError>())?;
    m.add_class::<PyMap>()?;
    m.add_class::<PyFamily>()?;
    m.add_function(wrap_pyfunction!(conj_limit, m)?)?;
    m.add_function(wrap_pyfunction!(connect, m)?)?;
    m.add_function(wrap_pyfunction!(sl_decompose, m)?)?;
    m.add_function(wrap_pyfunction!(psl_path, m)?)?;
    m.add_function(wrap_pyfunction!(det_class, m)?)?;
    m.add_function(wrap_pyfunction!(pgl2_finite, m)?)?;
    Ok(())
}
