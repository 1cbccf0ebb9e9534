use std::sync::Arc;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use dgtor::constructions::{koszul_complex, trivial_extension, KoszulExtension, TrivialExtension};
use dgtor::detect::{auto_axw, certify_kxw, SearchConfig};
use dgtor::dga::DGAlgebra;
use dgtor::graded::{homology, ChainComplex, GradedSpace};
use dgtor::module::DGModule;
use dgtor::resolution::{certify_perfect, tor, tor_against_k};
use dgtor::ring::ArtinianLocalRing;
use dgtor::session::{run_session as run, RunConfig};
use dgtor::verify::TheoremId;
use dgtor::{Error, Field};

fn err(e: Error) -> PyErr {
    match e {
        Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn field(spec: &str) -> PyResult<Field> {
    Field::parse_spec(spec).map_err(err)
}

/// A finite graded-commutative DG algebra.
#[pyclass(name = "Algebra", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyAlgebra {
    inner: Arc<DGAlgebra>,
}

#[pymethods]
impl PyAlgebra {
    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.space().all_labels().cloned().collect()
    }

    fn degrees(&self) -> Vec<i32> {
        (0..self.inner.dim()).map(|g| self.inner.degree(g)).collect()
    }

    /// Dimensions of the homology, starting at the lowest degree.
    fn homology_dims(&self) -> PyResult<Vec<usize>> {
        Ok(homology(self.inner.complex(), None).map_err(err)?.dims())
    }

    fn is_local(&self) -> bool {
        self.inner.is_local()
    }

    fn residue_field(&self) -> PyResult<PyModule_> {
        DGModule::residue_field(self.inner.clone())
            .map(|m| PyModule_ { inner: m })
            .map_err(err)
    }

    fn regular(&self) -> PyModule_ {
        PyModule_ {
            inner: DGModule::regular(self.inner.clone()),
        }
    }

    /// Structure detection: k⋉W search on a DG algebra, split search when ∂ = 0.
    #[pyo3(signature = (seed = 0, max_iters = 16))]
    fn detect(&self, seed: u64, max_iters: usize) -> PyResult<(String, String)> {
        let cert = if self.inner.has_zero_differential() {
            auto_axw(&self.inner)
        } else {
            certify_kxw(&self.inner, SearchConfig { max_iters, seed })
        }
        .map_err(err)?;
        Ok((cert.verdict.to_string(), cert.detail))
    }

    fn __repr__(&self) -> String {
        format!("Algebra(dim={}, field={})", self.inner.dim(), self.inner.field().spec())
    }
}

/// A DG module over an [`Algebra`].
#[pyclass(name = "Module", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyModule_ {
    inner: DGModule,
}

#[pymethods]
impl PyModule_ {
    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.space().all_labels().cloned().collect()
    }

    /// Poincaré series coefficients from `min(0, inf)` through `n`.
    fn poincare(&self, n: i32) -> PyResult<Vec<usize>> {
        Ok(tor_against_k(&self.inner, n).map_err(err)?.coefficients)
    }

    /// Dimensions of Tor(self, other) in degrees lo..=hi.
    fn tor(&self, other: &PyModule_, lo: i32, hi: i32) -> PyResult<Vec<usize>> {
        Ok(tor(&self.inner, &other.inner, (lo, hi)).map_err(err)?.dims)
    }

    /// `PERFECT`, `NOT-PERFECT` or `UNDETERMINED` on the window `[inf, n]`.
    fn certify_perfect(&self, n: i32) -> PyResult<String> {
        Ok(certify_perfect(&self.inner, n).map_err(err)?.name().to_string())
    }

    fn __repr__(&self) -> String {
        format!("Module(dim={})", self.inner.dim())
    }
}

/// `k[vars]/(monomials)`, Artinian local.
#[pyclass(name = "Ring", frozen)]
struct PyRing {
    inner: ArtinianLocalRing,
}

#[pymethods]
impl PyRing {
    #[new]
    #[pyo3(signature = (vars, relations, field = "fp:101"))]
    fn new(vars: Vec<String>, relations: Vec<String>, field: &str) -> PyResult<Self> {
        let v: Vec<&str> = vars.iter().map(String::as_str).collect();
        let r: Vec<&str> = relations.iter().map(String::as_str).collect();
        let inner = ArtinianLocalRing::from_monomial_ideal(self::field(field)?, &v, &r).map_err(err)?;
        Ok(PyRing { inner })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    #[getter]
    fn algebra(&self) -> PyAlgebra {
        PyAlgebra {
            inner: self.inner.as_dg_algebra(),
        }
    }

    fn koszul(&self) -> PyResult<PyKoszul> {
        koszul_complex(&self.inner).map(|k| PyKoszul { inner: k }).map_err(err)
    }

    /// `R/I` for the ideal generated by the given monomials.
    fn cyclic(&self, ideal: Vec<String>) -> PyResult<PyModule_> {
        let vars = self.inner.vars();
        let mut gens = Vec::new();
        for m in &ideal {
            let e = dgtor::ring::parse_monomial(m, vars).map_err(err)?;
            let label = dgtor::ring::monomial_label(&e, vars);
            if let Some(i) = self.inner.labels().iter().position(|l| *l == label) {
                gens.push(dgtor::linalg::SparseVec::unit(i, self.inner.field()));
            }
        }
        Ok(PyModule_ {
            inner: self.inner.cyclic_quotient(&gens).map_err(err)?.dg,
        })
    }

    fn __repr__(&self) -> String {
        format!("Ring(vars={:?}, dim={})", self.inner.vars(), self.inner.dim())
    }
}

/// The Koszul complex `B⟨X⟩` with its inclusion.
#[pyclass(name = "Koszul", frozen)]
struct PyKoszul {
    inner: KoszulExtension,
}

#[pymethods]
impl PyKoszul {
    #[getter]
    fn algebra(&self) -> PyAlgebra {
        PyAlgebra {
            inner: self.inner.algebra.clone(),
        }
    }

    #[getter]
    fn variables(&self) -> Vec<(String, i32)> {
        self.inner.variables.clone()
    }

    fn homology_dims(&self) -> PyResult<Vec<usize>> {
        Ok(self.inner.algebra.homology_algebra().map_err(err)?.dims())
    }
}

/// `A ⋉ W` for `W` with zero differential and basis in the given degrees.
#[pyclass(name = "TrivialExtension", frozen)]
struct PyTrivialExtension {
    inner: TrivialExtension,
}

#[pymethods]
impl PyTrivialExtension {
    #[new]
    fn new(base: &PyAlgebra, w_degrees: Vec<i32>) -> PyResult<Self> {
        let f = base.inner.field();
        let cells: Vec<(String, i32)> = w_degrees
            .iter()
            .enumerate()
            .map(|(i, d)| (format!("w{}", i + 1), *d))
            .collect();
        let w = ChainComplex::trivial(GradedSpace::from_pairs(f, &cells).map_err(err)?);
        let eps = base.inner.augmentation().map_err(err)?.clone();
        let inner = trivial_extension(&base.inner, &eps, &w).map_err(err)?;
        Ok(PyTrivialExtension { inner })
    }

    #[getter]
    fn algebra(&self) -> PyAlgebra {
        PyAlgebra {
            inner: self.inner.algebra.clone(),
        }
    }

    /// A module over the base regarded over the extension through β.
    fn restrict(&self, m: &PyModule_) -> PyResult<PyModule_> {
        Ok(PyModule_ {
            inner: m.inner.restrict(&self.inner.beta).map_err(err)?,
        })
    }
}

/// Runs a JSON session and returns the JSON report.
#[pyfunction]
#[pyo3(signature = (text, max_degree = 10, seed = 0, threads = 1))]
fn run_session(text: &str, max_degree: i32, seed: u64, threads: usize) -> PyResult<String> {
    let config = RunConfig {
        max_degree,
        seed,
        threads,
        ..RunConfig::default()
    };
    Ok(run(text, &config).map_err(err)?.to_json())
}

/// The identity checked by a verification id.
#[pyfunction]
fn explain(id: &str) -> PyResult<String> {
    Ok(TheoremId::parse(id).map_err(err)?.explain().to_string())
}

#[pymodule]
fn dgtor_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAlgebra>()?;
    m.add_class::<PyModule_>()?;
    m.add_class::<PyRing>()?;
    m.add_class::<PyKoszul>()?;
    m.add_class::<PyTrivialExtension>()?;
    m.add_function(wrap_pyfunction!(run_session, m)?)?;
    m.add_function(wrap_pyfunction!(explain, m)?)?;
    Ok(())
}
