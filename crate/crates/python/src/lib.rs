use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyTuple};

use hallcalc_core::coeff::{parse_rational, ExactRational};
use hallcalc_core::genfun::{self, DTSeries, LaurentPoly};
use hallcalc_core::grading::{SlopeInterval, TruncationWindow};
use hallcalc_core::hall::{element_json, model_window, HallAlgebra};
use hallcalc_core::lab::{self, Identity, LabConfig};
use hallcalc_core::model::{BuildOptions, ModelSpec};
use hallcalc_core::series::GradedRing;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, x: &ExactRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((x.to_string(),))
}

fn to_rational(v: &Bound<'_, PyAny>) -> PyResult<ExactRational> {
    parse_rational(&v.str()?.to_string()).map_err(err)
}

fn window_arg(model: &hallcalc_core::model::Model, w: Option<&str>) -> PyResult<TruncationWindow> {
    match w {
        None => Ok(model_window(model)),
        Some(s) => Ok(hallcalc_core::cli::parse_window(s, Some(model))
            .map_err(err)?
            .unwrap_or_else(|| model_window(model))),
    }
}

/// An enumerated finite model (Jordan or quiver).
#[pyclass(frozen, module = "hallcalc")]
struct Model {
    inner: hallcalc_core::model::Model,
}

#[pymethods]
impl Model {
    /// Builds a model from its JSON description.
    #[staticmethod]
    #[pyo3(signature = (spec, allow_large = false, max_dim = None))]
    fn from_json(spec: &str, allow_large: bool, max_dim: Option<usize>) -> PyResult<Self> {
        let opts = BuildOptions { allow_large, max_dim };
        let inner = hallcalc_core::model::Model::from_json(spec, &opts).map_err(err)?;
        Ok(Model { inner })
    }

    #[staticmethod]
    fn jordan(q: u64, bound: usize) -> PyResult<Self> {
        let inner = hallcalc_core::model::Model::build(&ModelSpec::jordan(q, bound), &BuildOptions::default())
            .map_err(err)?;
        Ok(Model { inner })
    }

    #[staticmethod]
    fn kronecker(q: u64, theta: [i64; 2], kappa: [i64; 2], dim_box: [usize; 2]) -> PyResult<Self> {
        let spec = ModelSpec::kronecker(q, theta, kappa, dim_box);
        let inner = hallcalc_core::model::Model::build(&spec, &BuildOptions::default()).map_err(err)?;
        Ok(Model { inner })
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q()
    }

    #[getter]
    fn fingerprint(&self) -> String {
        self.inner.fingerprint()
    }

    fn spec_json(&self) -> String {
        self.inner.spec().canonical_json()
    }

    /// `[(label, beta, n, aut_order)]` over every degree.
    fn classes(&self) -> PyResult<Vec<(String, Vec<i64>, i64, u128)>> {
        let mut out = Vec::new();
        for g in self.inner.degrees() {
            for c in self.inner.iso_classes(&g).map_err(err)? {
                out.push((c.label, c.degree.beta, c.degree.n, c.aut_order));
            }
        }
        Ok(out)
    }

    /// Product of two named elements (`one`, `delta:LABEL`, `ss`, `p`, `q`,
    /// `hilbert`, `pt`, `h0`, ...) as element JSON.
    #[pyo3(signature = (left, right, window = None))]
    fn mul(&self, left: &str, right: &str, window: Option<&str>) -> PyResult<String> {
        let alg = HallAlgebra::new(&self.inner).map_err(err)?;
        let w = window_arg(&self.inner, window)?;
        let a = named(&alg, &w, left)?;
        let b = named(&alg, &w, right)?;
        Ok(element_json(&self.inner, &alg.mul(&a, &b)).to_string())
    }

    /// Integration map of a named element: `{degree: Fraction}` keyed by
    /// `(beta, n)`.
    #[pyo3(signature = (element, window = None))]
    fn integrate<'py>(&self, py: Python<'py>, element: &str, window: Option<&str>) -> PyResult<Bound<'py, PyDict>> {
        let alg = HallAlgebra::new(&self.inner).map_err(err)?;
        let w = window_arg(&self.inner, window)?;
        let s = alg.integrate(&named(&alg, &w, element)?);
        let d = PyDict::new(py);
        for (g, piece) in &s.terms {
            d.set_item((PyTuple::new(py, &g.beta)?, g.n), fraction(py, &piece[0])?)?;
        }
        Ok(d)
    }
}

fn named(
    alg: &HallAlgebra,
    w: &TruncationWindow,
    name: &str,
) -> PyResult<hallcalc_core::hall::HallElement<ExactRational>> {
    let m = alg.model();
    let r = match name {
        "one" => Ok(alg.one(w)),
        "ss" => alg.semistable_element(w, &SlopeInterval::all()),
        "p" => alg.char_element(w, |c| alg.in_p(c)),
        "q" => alg.char_element(w, |c| alg.in_q(c)),
        "hilbert" => alg.hilbert_element(w),
        "pt" => alg.pt_element(w),
        "h0" => alg.h_zero(w),
        _ => match name.strip_prefix("delta:") {
            Some(label) => return Ok(alg.delta(w, m.class_by_label(label).map_err(err)?)),
            None => return Err(err(format!("unknown element {name:?}"))),
        },
    };
    r.map_err(err)
}

/// Result of one identity verifier.
#[pyclass(frozen, module = "hallcalc")]
struct VerificationReport {
    inner: lab::VerificationReport,
}

#[pymethods]
impl VerificationReport {
    #[getter]
    fn passed(&self) -> bool {
        self.inner.passed
    }

    #[getter]
    fn identity(&self) -> String {
        self.inner.identity.clone()
    }

    /// First failing degree as `(relation, beta, n)`.
    fn witness(&self) -> Option<(String, Vec<i64>, i64)> {
        self.inner
            .witness()
            .map(|(r, g)| (r.to_string(), g.beta.clone(), g.n))
    }

    fn summary(&self) -> String {
        self.inner.summary()
    }

    fn to_json(&self) -> String {
        self.inner.to_pretty()
    }

    fn __repr__(&self) -> String {
        format!("<VerificationReport {}>", self.inner.summary())
    }
}

/// Runs one identity verifier on a model spec (JSON).
#[pyfunction]
#[pyo3(signature = (identity, spec, window = None, interval = "all", seed = 0))]
fn verify(identity: &str, spec: &str, window: Option<&str>, interval: &str, seed: u64) -> PyResult<VerificationReport> {
    let id: Identity = identity.parse().map_err(err)?;
    let spec: ModelSpec = serde_json::from_str(spec).map_err(err)?;
    let w = match window {
        None => None,
        Some(s) => hallcalc_core::cli::parse_window(s, None).map_err(err)?,
    };
    let cfg = LabConfig {
        interval: SlopeInterval::parse(interval).map_err(err)?,
        seed,
        ..LabConfig::default()
    };
    let inner = lab::run(id, &spec, w.as_ref(), &cfg).map_err(err)?;
    Ok(VerificationReport { inner })
}

/// Names of every verifier.
#[pyfunction]
fn identities() -> Vec<&'static str> {
    Identity::ALL.iter().map(|i| i.name()).collect()
}

fn series_list<'py>(py: Python<'py>, s: &genfun::TruncSeries) -> PyResult<Vec<Bound<'py, PyAny>>> {
    (s.lower.min(0)..=s.upper)
        .map(|e| fraction(py, &s.coeffs.coeff(e)))
        .collect()
}

/// Coefficients of the MacMahon function through `q^order`.
#[pyfunction]
fn macmahon(py: Python<'_>, order: usize) -> PyResult<Vec<Bound<'_, PyAny>>> {
    series_list(py, &genfun::macmahon(order))
}

/// Coefficients of `M(-q)^chi` through `q^order`.
#[pyfunction]
fn dt_zero(py: Python<'_>, chi: i64, order: usize) -> PyResult<Vec<Bound<'_, PyAny>>> {
    series_list(py, &genfun::dt_zero(chi, order))
}

fn laurent(d: &Bound<'_, PyDict>) -> PyResult<LaurentPoly> {
    let mut terms = Vec::new();
    for (k, v) in d.iter() {
        terms.push((k.extract::<i64>()?, to_rational(&v)?));
    }
    Ok(LaurentPoly::from_terms(terms))
}

fn laurent_dict<'py>(py: Python<'py>, p: &LaurentPoly) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (e, c) in p.terms() {
        d.set_item(*e, fraction(py, c)?)?;
    }
    Ok(d)
}

/// Closed form of `sum n a_(n mod d) q^n`: dict with `numer`, `denom`
/// (exponent -> Fraction), `display`, `table_symmetric` and `invariant`.
#[pyfunction]
fn rational_from_periodic<'py>(py: Python<'py>, d: usize, table: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyDict>> {
    let a: Vec<ExactRational> = table.iter().map(to_rational).collect::<PyResult<_>>()?;
    let r = genfun::rational_from_periodic(d, &a).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("numer", laurent_dict(py, &r.function.numer())?)?;
    out.set_item("denom", laurent_dict(py, &r.function.denom())?)?;
    out.set_item("display", r.function.to_string())?;
    out.set_item("table_symmetric", r.table_symmetric)?;
    out.set_item("invariant", r.invariant)?;
    Ok(out)
}

/// `f(q) == f(1/q)` for `f = numer / denom`, both `{exponent: coefficient}`.
#[pyfunction]
fn symmetry_check(numer: &Bound<'_, PyDict>, denom: &Bound<'_, PyDict>) -> PyResult<bool> {
    let f = genfun::RatFunQ::new(&laurent(numer)?, &laurent(denom)?).map_err(err)?;
    Ok(genfun::symmetry_check(&f))
}

/// `L_beta` extraction; inputs and output are JSON in the CLI formats.
#[pyfunction]
fn toda_assemble(n_table: &str, h: Vec<i64>, pt: &str) -> PyResult<String> {
    let n = genfun::n_table_from_json(n_table).map_err(err)?;
    let pt = DTSeries::from_json(pt).map_err(err)?;
    let cols = genfun::toda_assemble(&n, &h, &pt).map_err(err)?;
    Ok(genfun::toda_json(&cols).to_string())
}

/// Runs the command-line interface in-process: `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let argv = std::iter::once("hallcalc".to_string()).chain(args);
    let o = hallcalc_core::cli::run(argv);
    (o.code, o.stdout, o.stderr)
}

#[pymodule]
pub fn hallcalc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Model>()?;
    m.add_class::<VerificationReport>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(identities, m)?)?;
    m.add_function(wrap_pyfunction!(macmahon, m)?)?;
    m.add_function(wrap_pyfunction!(dt_zero, m)?)?;
    m.add_function(wrap_pyfunction!(rational_from_periodic, m)?)?;
    m.add_function(wrap_pyfunction!(symmetry_check, m)?)?;
    m.add_function(wrap_pyfunction!(toda_assemble, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    m.add("SCHEMA", lab::SCHEMA)?;
    Ok(())
}
