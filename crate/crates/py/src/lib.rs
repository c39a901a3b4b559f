//! Python bindings: parse polynomials, linearize surface descriptors,
//! verify reports and evaluate thresholds.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyAny;

use cremona::field::{format_rational, parse_rational};
use cremona::parse::render_parse_error;
use cremona::pipeline::run_pipeline;
use cremona::poly::default_var_names;
use cremona::report::{
    classify_document, threshold_document, verify_document, OptionOverrides, ReportDocument, SurfaceDescriptor,
};
use cremona::threshold::{effective_threshold, parse_class, PicardModel};
use cremona::QPoly;

create_exception!(cremona_py, CremonaError, PyException);

fn err(e: cremona::Error) -> PyErr {
    CremonaError::new_err(e.to_string())
}

fn to_python(py: Python<'_>, json: &str) -> PyResult<Py<PyAny>> {
    Ok(py.import("json")?.call_method1("loads", (json,))?.unbind())
}

/// A polynomial with rational coefficients in named variables.
#[pyclass(name = "Polynomial", module = "cremona_py")]
struct PyPolynomial {
    poly: QPoly,
    variables: Vec<String>,
}

#[pymethods]
impl PyPolynomial {
    #[new]
    #[pyo3(signature = (source, variables = None))]
    fn new(source: &str, variables: Option<Vec<String>>) -> PyResult<Self> {
        let variables = variables.unwrap_or_else(|| default_var_names(4));
        let poly = cremona::parse_polynomial(source, &variables)
            .map_err(|e| CremonaError::new_err(render_parse_error(source, &e)))?;
        Ok(PyPolynomial { poly, variables })
    }

    #[getter]
    fn variables(&self) -> Vec<String> {
        self.variables.clone()
    }

    /// Total degree, or `None` for the zero polynomial.
    #[getter]
    fn degree(&self) -> Option<u32> {
        self.poly.degree()
    }

    fn is_homogeneous(&self) -> bool {
        self.poly.is_homogeneous()
    }

    /// Value at a point given as ints or rational strings such as `"3/2"`.
    fn evaluate(&self, point: Vec<Bound<'_, PyAny>>) -> PyResult<String> {
        let coords = point
            .iter()
            .map(|c| parse_rational(&c.str()?.to_string()).map_err(err))
            .collect::<PyResult<Vec<_>>>()?;
        let v = self.poly.eval(&coords).map_err(err)?;
        Ok(format_rational(&v))
    }

    fn partial(&self, variable: &str) -> PyResult<Self> {
        let i = self
            .variables
            .iter()
            .position(|v| v == variable)
            .ok_or_else(|| CremonaError::new_err(format!("unknown variable {variable}")))?;
        Ok(PyPolynomial {
            poly: self.poly.partial(i).map_err(err)?,
            variables: self.variables.clone(),
        })
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.same_ring(other)?;
        Ok(PyPolynomial {
            poly: &self.poly * &other.poly,
            variables: self.variables.clone(),
        })
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.same_ring(other)?;
        Ok(PyPolynomial {
            poly: &self.poly + &other.poly,
            variables: self.variables.clone(),
        })
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        self.same_ring(other)?;
        Ok(PyPolynomial {
            poly: &self.poly - &other.poly,
            variables: self.variables.clone(),
        })
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.variables == other.variables && self.poly == other.poly
    }

    fn __str__(&self) -> String {
        self.poly.to_string_with(&self.variables)
    }

    fn __repr__(&self) -> String {
        format!("Polynomial('{}')", self.__str__())
    }
}

impl PyPolynomial {
    fn same_ring(&self, other: &Self) -> PyResult<()> {
        if self.variables != other.variables {
            return Err(CremonaError::new_err("polynomials are in different variables"));
        }
        Ok(())
    }
}

/// A surface descriptor: equation, hints and run options.
#[pyclass(name = "Surface", module = "cremona_py")]
struct PySurface {
    descriptor: SurfaceDescriptor,
    overrides: OptionOverrides,
}

#[pymethods]
impl PySurface {
    /// Build from descriptor JSON text. Keyword options override the
    /// descriptor's own.
    #[staticmethod]
    #[pyo3(signature = (text, *, prime = None, seed = None, samples = None, mode = None))]
    fn from_json(
        text: &str,
        prime: Option<u64>,
        seed: Option<u64>,
        samples: Option<usize>,
        mode: Option<&str>,
    ) -> PyResult<Self> {
        let descriptor = SurfaceDescriptor::from_json(text).map_err(err)?;
        let mode = mode.map(cremona::report::parse_mode).transpose().map_err(err)?;
        let overrides = OptionOverrides { prime, seed, samples, mode };
        // validate now so errors surface at construction
        descriptor.to_input(&overrides).map_err(err)?;
        Ok(PySurface { descriptor, overrides })
    }

    /// A surface with no hints.
    #[staticmethod]
    #[pyo3(signature = (polynomial, variables = None))]
    fn from_polynomial(polynomial: &str, variables: Option<Vec<String>>) -> PyResult<Self> {
        let variables = variables.unwrap_or_else(|| default_var_names(4));
        let text = serde_json::json!({ "variables": variables, "polynomial": polynomial }).to_string();
        Self::from_json(&text, None, None, None, None)
    }

    #[getter]
    fn equation(&self) -> PyResult<PyPolynomial> {
        let input = self.descriptor.to_input(&self.overrides).map_err(err)?;
        Ok(PyPolynomial {
            poly: input.equation,
            variables: input.variables,
        })
    }

    /// The detected case as a dict.
    fn classify(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let input = self.descriptor.to_input(&self.overrides).map_err(err)?;
        let doc = classify_document(&input);
        to_python(py, &serde_json::to_string(&doc).expect("serializable"))
    }

    /// Run the pipeline. The GIL is released while it runs.
    fn linearize(&self, py: Python<'_>) -> PyResult<PyReport> {
        let input = self.descriptor.to_input(&self.overrides).map_err(err)?;
        let report = py.detach(|| run_pipeline(&input)).map_err(err)?;
        Ok(PyReport {
            doc: ReportDocument::from_report(&report),
        })
    }

    /// Re-check a report on fresh samples; returns the verification dict.
    #[pyo3(signature = (report, samples = None))]
    fn verify(&self, py: Python<'_>, report: &PyReport, samples: Option<usize>) -> PyResult<Py<PyAny>> {
        let input = self.descriptor.to_input(&self.overrides).map_err(err)?;
        let n = samples.unwrap_or(input.options.samples);
        let out = py.detach(|| verify_document(&input, &report.doc, n)).map_err(err)?;
        to_python(py, &serde_json::to_string(&out).expect("serializable"))
    }
}

/// The report of one pipeline run.
#[pyclass(name = "Report", module = "cremona_py")]
struct PyReport {
    doc: ReportDocument,
}

#[pymethods]
impl PyReport {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyReport {
            doc: ReportDocument::from_json(text).map_err(err)?,
        })
    }

    #[getter]
    fn case(&self) -> String {
        self.doc.case.clone()
    }

    #[getter]
    fn status(&self) -> String {
        self.doc.status.clone()
    }

    #[getter]
    fn field_mode(&self) -> String {
        self.doc.field_mode.clone()
    }

    #[getter]
    fn plane_form(&self) -> Option<String> {
        self.doc.final_.plane_form.clone()
    }

    #[getter]
    fn notes(&self) -> Vec<String> {
        self.doc.notes.clone()
    }

    /// Forms of each step, in the step's source variables.
    #[getter]
    fn step_forms(&self) -> Vec<Vec<String>> {
        self.doc.steps.iter().map(|s| s.forms.clone()).collect()
    }

    fn is_success(&self) -> bool {
        self.doc.is_success()
    }

    fn to_json(&self) -> String {
        self.doc.to_json()
    }

    fn to_dict(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_python(py, &self.doc.to_json())
    }

    fn __repr__(&self) -> String {
        format!("Report(case='{}', status='{}')", self.doc.case, self.doc.status)
    }
}

/// Effective threshold of a class (e.g. `"3,2"`) on a catalog model, as
/// a string: a rational, `+infinity` or `not effective`.
#[pyfunction]
fn effective_threshold_of(model: &str, class: &str) -> PyResult<String> {
    let m = PicardModel::by_name(model).map_err(err)?;
    let h = parse_class(class).map_err(err)?;
    Ok(effective_threshold(&m, &h).map_err(err)?.describe())
}

/// The threshold document (model, class, rho, corollary flag) as a dict.
#[pyfunction]
fn threshold(py: Python<'_>, model: &str, class: &str) -> PyResult<Py<PyAny>> {
    let doc = threshold_document(model, class).map_err(err)?;
    to_python(py, &serde_json::to_string(&doc).expect("serializable"))
}

#[pyfunction]
fn model_names() -> Vec<&'static str> {
    cremona::threshold::MODEL_NAMES.to_vec()
}

#[pymodule]
fn cremona_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CremonaError", m.py().get_type::<CremonaError>())?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyPolynomial>()?;
    m.add_class::<PySurface>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(effective_threshold_of, m)?)?;
    m.add_function(wrap_pyfunction!(threshold, m)?)?;
    m.add_function(wrap_pyfunction!(model_names, m)?)?;
    Ok(())
}
