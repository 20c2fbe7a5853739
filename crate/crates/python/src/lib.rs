//! Python bindings: presentations, model construction, holonomy actions,
//! and polynomial forms, with rationals passed as strings (`"-1/2"`) so
//! nothing is ever rounded.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyList, PyString};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::str::FromStr;

use sullivan_core::apl::{self, FiniteSimplicialSet, FormFamily, PolyForm};
use sullivan_core::cdga::CdgaPresentation;
use sullivan_core::cohomology::{cohomology, cohomology_dims, xi_cocycle, CohomologySpace};
use sullivan_core::graded::Poly;
use sullivan_core::holonomy::{lemma31_check, FiberClass, RelativeSullivan};
use sullivan_core::lie::{abelianization_dim, fundamental_lie, homotopy_dims, lcs_quotients};
use sullivan_core::linalg::Rational;
use sullivan_core::model::{degree1_stages, minimal_model_sc, Construction};
use sullivan_core::target::Target;

fn err(e: sullivan_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_rational(s: &str) -> PyResult<Rational> {
    Rational::from_str(s).map_err(|_| PyValueError::new_err(format!("malformed rational `{s}`")))
}

fn value_to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => PyBool::new(py, *b).to_owned().into_any(),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.into_any()
            } else if let Some(u) = n.as_u64() {
                u.into_pyobject(py)?.into_any()
            } else {
                n.as_f64()
                    .unwrap_or_default()
                    .into_pyobject(py)?
                    .into_any()
            }
        }
        Value::String(s) => PyString::new(py, s).into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(value_to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, value_to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

/// A free graded algebra with differential, in the `.cdga` grammar.
#[pyclass]
struct Presentation {
    inner: CdgaPresentation,
}

#[pymethods]
impl Presentation {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Presentation {
            inner: CdgaPresentation::parse(text).map_err(err)?,
        })
    }

    fn render(&self) -> String {
        self.inner.render()
    }

    fn is_minimal(&self) -> bool {
        self.inner.is_minimal()
    }

    fn max_degree(&self) -> usize {
        self.inner.max_degree()
    }

    fn set_max_degree(&mut self, cap: usize) {
        self.inner.set_max_degree(cap);
    }

    fn generators(&self) -> Vec<(String, usize, Option<usize>)> {
        self.inner
            .gens()
            .iter()
            .map(|(_, g)| (g.name.clone(), g.degree, g.stage))
            .collect()
    }

    fn validate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let report = self.inner.validate();
        value_to_py(py, &serde_json::to_value(&report).expect("serializes"))
    }

    fn apply_d(&self, poly: &str) -> PyResult<String> {
        let p = Poly::parse(self.inner.gens().clone(), poly).map_err(err)?;
        Ok(self.inner.apply_d(&p).map_err(err)?.render())
    }

    fn cohomology_dims(&self, max_degree: usize) -> PyResult<Vec<usize>> {
        let mut p = self.inner.clone();
        if p.max_degree() < max_degree + 1 {
            p.set_max_degree(max_degree + 1);
        }
        cohomology_dims(&p, max_degree).map_err(err)
    }

    fn cohomology<'py>(&self, py: Python<'py>, degree: usize) -> PyResult<Bound<'py, PyAny>> {
        let h = cohomology(&self.inner, degree).map_err(err)?;
        let reps: Vec<String> = h.representatives.iter().map(|r| r.render()).collect();
        value_to_py(
            py,
            &json!({
                "degree": h.degree,
                "dim": h.dim,
                "representatives": reps,
                "coboundary_dim": h.coboundary_dim,
            }),
        )
    }

    /// Word-length-1 projection of a cocycle of a minimal presentation.
    fn xi(&self, cocycle: &str) -> PyResult<String> {
        let z = Poly::parse(self.inner.gens().clone(), cocycle).map_err(err)?;
        Ok(xi_cocycle(&self.inner, &z).map_err(err)?.render())
    }

    fn homotopy<'py>(&self, py: Python<'py>, max_degree: usize) -> PyResult<Bound<'py, PyAny>> {
        let dims = homotopy_dims(&self.inner, max_degree).map_err(err)?;
        value_to_py(py, &serde_json::to_value(&dims).expect("serializes"))
    }

    fn fundamental_lie<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let lie = fundamental_lie(&self.inner).map_err(err)?;
        let mut brackets = Vec::new();
        for i in 0..lie.dim() {
            for j in (i + 1)..lie.dim() {
                let b = lie.basis_bracket(i, j);
                if b.iter().any(|c| !num_traits::Zero::is_zero(c)) {
                    let coeffs: Vec<String> = b.iter().map(|c| c.to_string()).collect();
                    brackets.push(json!([i, j, coeffs]));
                }
            }
        }
        value_to_py(
            py,
            &json!({
                "basis": lie.basis_names,
                "brackets": brackets,
                "abelianization_dim": abelianization_dim(&lie),
            }),
        )
    }

    fn lcs<'py>(&self, py: Python<'py>, depth: usize) -> PyResult<Bound<'py, PyAny>> {
        let lie = fundamental_lie(&self.inner).map_err(err)?;
        let table = lcs_quotients(&lie, depth).map_err(err)?;
        value_to_py(py, &serde_json::to_value(&table).expect("serializes"))
    }
}

/// A relative presentation (base plus `fiber` generators).
#[pyclass]
struct RelativePresentation {
    inner: RelativeSullivan,
}

#[pymethods]
impl RelativePresentation {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(RelativePresentation {
            inner: RelativeSullivan::parse(text).map_err(err)?,
        })
    }

    fn filtration<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let f = self.inner.fiber_filtration().map_err(err)?;
        value_to_py(py, &serde_json::to_value(&f).expect("serializes"))
    }

    /// Action of a dual element (rational coordinates over the degree-1
    /// base generators) on a fiber cocycle, as class coordinates.
    fn l0_action(&self, sx: Vec<String>, phi: &str) -> PyResult<Vec<String>> {
        let sx: Vec<Rational> = sx
            .iter()
            .map(|s| parse_rational(s))
            .collect::<PyResult<_>>()?;
        let fiber = self.inner.fiber_presentation().map_err(err)?;
        let p = Poly::parse(fiber.gens().clone(), phi).map_err(err)?;
        let class = self.inner.l0_action(&sx, &p).map_err(err)?;
        Ok(class.coords.iter().map(|c| c.to_string()).collect())
    }

    fn exp_action(
        &self,
        sx: Vec<String>,
        degree: usize,
        class: Vec<String>,
    ) -> PyResult<Vec<String>> {
        let sx: Vec<Rational> = sx
            .iter()
            .map(|s| parse_rational(s))
            .collect::<PyResult<_>>()?;
        let coords: Vec<Rational> = class
            .iter()
            .map(|s| parse_rational(s))
            .collect::<PyResult<_>>()?;
        let moved = self
            .inner
            .exp_action(&sx, &FiberClass { degree, coords })
            .map_err(err)?;
        Ok(moved.coords.iter().map(|c| c.to_string()).collect())
    }

    fn holonomy<'py>(&self, py: Python<'py>, degree: usize) -> PyResult<Bound<'py, PyAny>> {
        let hm = self.inner.holonomy_matrices(degree).map_err(err)?;
        let mut matrices = serde_json::Map::new();
        let mut nilpotency = serde_json::Map::new();
        for (name, m) in &hm.matrices {
            let rows: Vec<Vec<String>> = (0..m.rows())
                .map(|r| (0..m.cols()).map(|c| m.get(r, c).to_string()).collect())
                .collect();
            matrices.insert(name.clone(), json!(rows));
            nilpotency.insert(name.clone(), json!(hm.nilpotency[name]));
        }
        value_to_py(
            py,
            &json!({
                "degree": hm.degree,
                "class_labels": hm.class_labels,
                "matrices": matrices,
                "nilpotency": nilpotency,
                "nilpotent": hm.nilpotent,
            }),
        )
    }

    #[pyo3(signature = (trials=1000, seed=0))]
    fn lemma31<'py>(
        &self,
        py: Python<'py>,
        trials: usize,
        seed: u64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let report = lemma31_check(&self.inner, trials, seed).map_err(err)?;
        value_to_py(py, &serde_json::to_value(&report).expect("serializes"))
    }
}

/// Build a minimal model of a target given in the `.target` grammar
/// (`formal=True`) or the `.cdga` grammar. Routes to the
/// simply-connected construction when `H^1 = 0`, the degree-1 tower
/// otherwise.
#[pyfunction]
#[pyo3(signature = (text, formal=true, max_degree=6, max_stage=4))]
fn build_model<'py>(
    py: Python<'py>,
    text: &str,
    formal: bool,
    max_degree: usize,
    max_stage: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let mut target = Target::parse(if formal { "input.target" } else { "input.cdga" }, text)
        .map_err(err)?;
    if let Target::Cdga(p) = &mut target {
        if p.max_degree() < max_degree + 2 {
            p.set_max_degree(max_degree + 2);
        }
    }
    let h1 = CohomologySpace::compute(&target, 1).map_err(err)?;
    let build = if h1.dim == 0 {
        minimal_model_sc(&target, max_degree).map_err(err)?
    } else {
        degree1_stages(&target, max_stage).map_err(err)?
    };
    let construction = match build.construction {
        Construction::SimplyConnected => "simply_connected",
        Construction::Degree1Stages => "degree1_stages",
    };
    value_to_py(
        py,
        &json!({
            "construction": construction,
            "stage_log": serde_json::to_value(&build.stage_log).expect("serializes"),
            "finite_type": serde_json::to_value(&build.finite_type_report()).expect("serializes"),
            "stabilized": build.stabilized,
            "model": build.model.render(),
            "images": build.rendered_images().map_err(err)?,
        }),
    )
}

/// Exterior derivative of a form literal on the `n`-simplex.
#[pyfunction]
fn form_d(n: usize, form: &str) -> PyResult<String> {
    Ok(PolyForm::parse(n, form).map_err(err)?.d().render())
}

#[pyfunction]
fn face(n: usize, form: &str, i: usize) -> PyResult<String> {
    Ok(PolyForm::parse(n, form)
        .map_err(err)?
        .face(i)
        .map_err(err)?
        .render())
}

#[pyfunction]
fn degeneracy(n: usize, form: &str, j: usize) -> PyResult<String> {
    Ok(PolyForm::parse(n, form)
        .map_err(err)?
        .degeneracy(j)
        .map_err(err)?
        .render())
}

/// Exact integral of a top-degree form over the standard simplex.
#[pyfunction]
fn integrate(n: usize, form: &str) -> PyResult<String> {
    Ok(PolyForm::parse(n, form)
        .map_err(err)?
        .integrate()
        .map_err(err)?
        .to_string())
}

/// Validate a family of forms on a finite simplicial set; same input
/// shape as the CLI `apl-check` command.
#[pyfunction]
fn apl_check<'py>(py: Python<'py>, input_json: &str) -> PyResult<Bound<'py, PyAny>> {
    #[derive(serde::Deserialize)]
    struct Input {
        complex: Value,
        degree: usize,
        family: BTreeMap<String, String>,
    }
    let raw: Input = serde_json::from_str(input_json)
        .map_err(|e| PyValueError::new_err(format!("bad input: {e}")))?;
    let k = FiniteSimplicialSet::from_json(&raw.complex.to_string()).map_err(err)?;
    let mut forms = BTreeMap::new();
    for (name, text) in &raw.family {
        let dim = k
            .dim_of(name)
            .ok_or_else(|| PyValueError::new_err(format!("unknown simplex `{name}`")))?;
        forms.insert(name.clone(), PolyForm::parse(dim, text).map_err(err)?);
    }
    let family = FormFamily {
        degree: raw.degree,
        forms,
    };
    let report = apl::apl_cochain_compare(&k, &family, raw.degree).map_err(err)?;
    value_to_py(py, &serde_json::to_value(&report).expect("serializes"))
}

#[pymodule]
fn sullivan_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Presentation>()?;
    m.add_class::<RelativePresentation>()?;
    m.add_function(wrap_pyfunction!(build_model, m)?)?;
    m.add_function(wrap_pyfunction!(form_d, m)?)?;
    m.add_function(wrap_pyfunction!(face, m)?)?;
    m.add_function(wrap_pyfunction!(degeneracy, m)?)?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    m.add_function(wrap_pyfunction!(apl_check, m)?)?;
    Ok(())
}
