//! Python bindings. Words and paths cross the boundary as strings in the
//! same syntax the command line uses.

use polyrewrite::abelian::PiSystem;
use polyrewrite::completion::{CompletionEvent, Provenance, DEFAULT_COMPLETION_FUEL};
use polyrewrite::critical::{generating_confluence, ConvergenceCertificate};
use polyrewrite::syntax::{format_footprint, format_path, format_pi, parse_closed_path, parse_path};
use polyrewrite::transport::Transport;
use polyrewrite::{critical_branchings, footprint, is_convergent, knuth_bendix, normalize, Convergent, Error};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

/// `(id, lhs, rhs, origin)` for each rule added by completion.
type Added = Vec<(String, String, String, String)>;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A monoid presentation: generators, oriented rules and a reduction order.
#[pyclass(name = "Presentation", module = "polyrewrite_py", frozen)]
struct PyPresentation {
    inner: polyrewrite::Presentation,
}

impl PyPresentation {
    fn convergent(&self) -> PyResult<Convergent<'_>> {
        Convergent::certify(&self.inner).map_err(|e| match e {
            Error::NotConvergent => PyValueError::new_err("presentation is not convergent; call complete() first"),
            other => err(other),
        })
    }

    fn word(&self, text: &str) -> PyResult<polyrewrite::Word> {
        self.inner.parse_word(text).map_err(err)
    }

    fn show(&self, w: &[polyrewrite::GenId]) -> String {
        self.inner.display_word(w).to_string()
    }
}

#[pymethods]
impl PyPresentation {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyPresentation {
            inner: polyrewrite::Presentation::parse(text).map_err(err)?,
        })
    }

    #[getter]
    fn generators(&self) -> Vec<String> {
        self.inner.generators().to_vec()
    }

    /// `(id, lhs, rhs)` triples.
    #[getter]
    fn rules(&self) -> Vec<(String, String, String)> {
        self.inner
            .rules()
            .iter()
            .map(|r| (r.id.clone(), self.show(&r.lhs), self.show(&r.rhs)))
            .collect()
    }

    fn __str__(&self) -> String {
        self.inner.to_text()
    }

    fn __repr__(&self) -> String {
        format!(
            "Presentation({} generators, {} rules)",
            self.inner.generators().len(),
            self.inner.rules().len()
        )
    }

    fn is_convergent(&self) -> bool {
        is_convergent(&self.inner).is_convergent()
    }

    /// Termination, local confluence and convergence as a dict.
    fn check<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let cert: ConvergenceCertificate = is_convergent(&self.inner);
        let d = PyDict::new(py);
        d.set_item("terminating", cert.is_terminating())?;
        d.set_item(
            "locally_confluent",
            cert.local_confluence.as_ref().map(|r| r.is_confluent()),
        )?;
        d.set_item("convergent", cert.is_convergent())?;
        Ok(d)
    }

    /// Normal form of `word` and the leftmost reduction reaching it.
    fn normalize(&self, word: &str) -> PyResult<(String, String)> {
        let w = self.word(word)?;
        let (nf, path) = normalize(&w, &self.inner).map_err(err)?;
        Ok((self.show(&nf), format_path(&path, &self.inner)))
    }

    fn equal(&self, u: &str, v: &str) -> PyResult<bool> {
        let conv = self.convergent()?;
        conv.equal(&self.word(u)?, &self.word(v)?).map_err(err)
    }

    fn critical_pairs<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let p = &self.inner;
        let mut out = Vec::new();
        for b in critical_branchings(p) {
            let d = PyDict::new(py);
            d.set_item("overlap", self.show(&b.overlap))?;
            d.set_item("rule1", &p.rule(b.rule1).id)?;
            d.set_item("rule2", &p.rule(b.rule2).id)?;
            d.set_item("offset", b.offset)?;
            d.set_item("kind", b.kind.to_string())?;
            match generating_confluence(&b, p) {
                Ok(gc) => {
                    d.set_item("joinable", true)?;
                    d.set_item("loop", format_path(&gc.basis_loop, p))?;
                }
                Err(Error::NotConfluent { .. }) => {
                    d.set_item("joinable", false)?;
                    d.set_item("loop", py.None())?;
                }
                Err(e) => return Err(err(e)),
            }
            out.push(d);
        }
        Ok(out)
    }

    /// Knuth-Bendix completion. Returns the completed presentation and the
    /// added rules as `(id, lhs, rhs, origin)`.
    #[pyo3(signature = (fuel = DEFAULT_COMPLETION_FUEL))]
    fn complete(&self, fuel: usize) -> PyResult<(PyPresentation, Added)> {
        let (q, trace) = knuth_bendix(&self.inner, fuel).map_err(err)?;
        let added = trace
            .events
            .iter()
            .filter_map(|e| match e {
                CompletionEvent::Added {
                    rule,
                    lhs,
                    rhs,
                    provenance,
                } => {
                    let origin = match provenance {
                        Provenance::Overlap { overlap, .. } => format!("overlap {}", self.show(overlap)),
                        Provenance::Collapsed { rule } => format!("rule {rule}"),
                    };
                    Some((
                        rule.clone(),
                        q.display_word(lhs).to_string(),
                        q.display_word(rhs).to_string(),
                        origin,
                    ))
                }
                _ => None,
            })
            .collect();
        Ok((PyPresentation { inner: q }, added))
    }

    /// Basis loops as `(id, path)` pairs.
    fn pi_basis(&self) -> PyResult<Vec<(String, String)>> {
        let sys = PiSystem::new(self.convergent()?).map_err(err)?;
        Ok(sys
            .basis()
            .iter()
            .map(|b| (b.id.to_string(), format_path(b.closed_path(), &self.inner)))
            .collect())
    }

    /// Decomposes a closed path, e.g. `"aaa: +r@0 -r@1"`.
    fn decompose<'py>(&self, py: Python<'py>, path: &str) -> PyResult<Bound<'py, PyDict>> {
        let p = &self.inner;
        let f = parse_closed_path(path, p).map_err(err)?;
        let mut sys = PiSystem::new(self.convergent()?).map_err(err)?;
        let cert = sys.decompose(&f).map_err(err)?;
        let report = sys.verify(&f, &cert).map_err(err)?;
        let entries: Vec<(String, String, String, String, String)> = cert
            .entries
            .iter()
            .map(|e| {
                (
                    e.sign.to_string(),
                    self.show(&e.left),
                    self.show(&e.right),
                    e.basis.to_string(),
                    format_path(&e.conjugator, p),
                )
            })
            .collect();
        let d = PyDict::new(py);
        d.set_item("entries", entries)?;
        d.set_item("pi", format_pi(&cert.pi, p))?;
        d.set_item("footprint", format_footprint(&report.footprint, p))?;
        d.set_item("verified", report.is_ok())?;
        Ok(d)
    }

    fn footprint(&self, path: &str) -> PyResult<String> {
        let f = parse_path(path, &self.inner).map_err(err)?;
        let fp = footprint(&f, &self.convergent()?).map_err(err)?;
        Ok(format_footprint(&fp, &self.inner))
    }
}

/// Generating loops for `sigma` transported from `upsilon` along `map`
/// (text with `forward:` and `backward:` lines), as `(label, path)` pairs.
#[pyfunction]
fn transport(sigma: &PyPresentation, upsilon: &PyPresentation, map: &str) -> PyResult<Vec<(String, String)>> {
    let m = polyrewrite::TranslationMap::parse(map, &sigma.inner, &upsilon.inner).map_err(err)?;
    let (cs, cu) = (sigma.convergent()?, upsilon.convergent()?);
    let t = Transport::new(cs, cu, &m).map_err(err)?;
    let basis: Vec<_> = PiSystem::new(cu)
        .map_err(err)?
        .basis()
        .iter()
        .map(|b| b.closed_path().clone())
        .collect();
    Ok(t.transported_generators(&basis)
        .map_err(err)?
        .iter()
        .map(|(label, l)| (label.clone(), format_path(l, &sigma.inner)))
        .collect())
}

#[pymodule]
fn polyrewrite_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPresentation>()?;
    m.add_function(wrap_pyfunction!(transport, m)?)?;
    Ok(())
}
