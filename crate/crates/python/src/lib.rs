//! Python bindings for the blochwork core. The surface mirrors the CLI:
//! abelian-group arithmetic, bar-resolution homology, the E² entries of
//! the torus spectral sequence, the finite-field Bloch reports, and the
//! chain-level witness identities.

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use blochwork::abgroup::{self, CanonicalForm, FgAbelianGroup};
use blochwork::bar::{bar_complex_with_budget, BarError, DEFAULT_BAR_BUDGET};
use blochwork::bloch::{self, FiniteField};
use blochwork::complex::CycleClass;
use blochwork::cyclichom::{self, KunnethH3};
use blochwork::groups::FiniteGroup;
use blochwork::witness::{self, CyclotomicContext, IdentityCheck, WitnessError};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn bar_err(e: BarError) -> PyErr {
    match e {
        BarError::BudgetExceeded { .. } => PyRuntimeError::new_err(e.to_string()),
        other => value_err(other),
    }
}

fn witness_err(e: WitnessError) -> PyErr {
    match e {
        WitnessError::BudgetExceeded { .. } | WitnessError::Bar(BarError::BudgetExceeded { .. }) => {
            PyRuntimeError::new_err(e.to_string())
        }
        other => value_err(other),
    }
}

/// A finitely generated abelian group in invariant-factor form.
#[pyclass(frozen, name = "AbelianGroup", module = "pyblochwork")]
struct PyAbelianGroup {
    inner: FgAbelianGroup,
}

fn wrap(inner: FgAbelianGroup) -> PyAbelianGroup {
    PyAbelianGroup { inner }
}

fn from_form(form: &CanonicalForm) -> PyAbelianGroup {
    let mut factors = form.invariant_factors.clone();
    factors.extend(std::iter::repeat(0).take(form.free_rank));
    wrap(FgAbelianGroup::direct_sum_of_cyclics(&factors))
}

fn pretty(g: &FgAbelianGroup) -> String {
    let form = g.canonical_form();
    let mut parts: Vec<String> = form.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
    match form.free_rank {
        0 => {}
        1 => parts.push("Z".to_string()),
        r => parts.push(format!("Z^{r}")),
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

#[pymethods]
impl PyAbelianGroup {
    /// Z/n, with n = 0 meaning Z.
    #[staticmethod]
    fn cyclic(n: u64) -> PyAbelianGroup {
        wrap(FgAbelianGroup::cyclic(n))
    }

    #[staticmethod]
    fn free(rank: usize) -> PyAbelianGroup {
        wrap(FgAbelianGroup::free(rank))
    }

    /// Direct sum of cyclic groups; a 0 entry contributes a Z summand.
    #[staticmethod]
    fn of_cyclics(factors: Vec<u64>) -> PyAbelianGroup {
        wrap(FgAbelianGroup::direct_sum_of_cyclics(&factors))
    }

    fn invariant_factors(&self) -> Vec<u64> {
        self.inner.canonical_form().invariant_factors
    }

    fn free_rank(&self) -> usize {
        self.inner.canonical_form().free_rank
    }

    fn is_trivial(&self) -> bool {
        self.inner.is_trivial()
    }

    /// None for infinite groups.
    fn order(&self) -> Option<BigInt> {
        self.inner.order()
    }

    fn direct_sum(&self, other: &PyAbelianGroup) -> PyAbelianGroup {
        wrap(self.inner.direct_sum(&other.inner))
    }

    fn is_isomorphic_to(&self, other: &PyAbelianGroup) -> bool {
        self.inner.is_isomorphic_to(&other.inner)
    }

    fn pretty(&self) -> String {
        pretty(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("AbelianGroup({})", pretty(&self.inner))
    }
}

/// Ext(a, b) over Z.
#[pyfunction]
fn ext(a: &PyAbelianGroup, b: &PyAbelianGroup) -> PyAbelianGroup {
    wrap(abgroup::ext(&a.inner, &b.inner))
}

/// Closed form for H_i(Z/n).
#[pyfunction]
fn cyclic_homology(n: u64, i: usize) -> PyAbelianGroup {
    wrap(cyclichom::cyclic_homology_closed(n, i))
}

/// H_degree of a direct product of cyclic groups, computed from the bar
/// resolution. `orders` lists the cyclic factors; a budget caps the bar
/// basis size (default 10^7 tuples).
#[pyfunction]
#[pyo3(signature = (orders, degree, budget = DEFAULT_BAR_BUDGET))]
fn bar_homology(orders: Vec<usize>, degree: usize, budget: u128) -> PyResult<PyAbelianGroup> {
    let mut iter = orders.iter();
    let first = *iter.next().ok_or_else(|| value_err("orders must be non-empty"))?;
    let mut group = FiniteGroup::cyclic(first).map_err(value_err)?;
    for &n in iter {
        group = FiniteGroup::product(&group, &FiniteGroup::cyclic(n).map_err(value_err)?)
            .map_err(value_err)?;
    }
    let bar = bar_complex_with_budget(&group, degree + 1, budget).map_err(bar_err)?;
    bar.complex.homology(degree as isize).map(wrap).map_err(value_err)
}

/// One entry of the E² page for GM₂(n); q ≤ 2.
#[pyfunction]
fn e2_page(n: u64, p: usize, q: usize) -> PyResult<PyAbelianGroup> {
    cyclichom::e2_page_gm2(n, p, q).map(wrap).map_err(value_err)
}

fn kunneth_dict<'py>(py: Python<'py>, k: &KunnethH3) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("tensor_3_0", wrap(k.tensor_3_0.clone()))?;
    d.set_item("tensor_0_3", wrap(k.tensor_0_3.clone()))?;
    d.set_item("tensor_1_2", wrap(k.tensor_1_2.clone()))?;
    d.set_item("tensor_2_1", wrap(k.tensor_2_1.clone()))?;
    d.set_item("tor_1_1", wrap(k.tor_1_1.clone()))?;
    d.set_item("m_part", wrap(k.m_part()))?;
    d.set_item("total", wrap(k.total()))?;
    Ok(d)
}

/// The Künneth pieces of H₃(μ_n × μ_n).
#[pyfunction]
fn kunneth_h3(py: Python<'_>, n: u64) -> PyResult<Bound<'_, PyDict>> {
    kunneth_dict(py, &cyclichom::kunneth_h3_t2(n))
}

/// The H₁ comparison (both sides and whether they agree).
#[pyfunction]
fn lemma_h1_check(a: &PyAbelianGroup) -> (PyAbelianGroup, PyAbelianGroup, bool) {
    let (lhs, rhs, equal) = cyclichom::lemma_h1_check(&a.inner);
    (wrap(lhs), wrap(rhs), equal)
}

/// Bloch-group report for the field with q elements: the pre-Bloch group P,
/// the Bloch group B, Milnor K₂, the twisted torsion group, and the four
/// exactness checks of the defining sequence.
#[pyfunction]
fn bloch_report(py: Python<'_>, q: u64) -> PyResult<Bound<'_, PyDict>> {
    let f = FiniteField::new(q).map_err(value_err)?;
    let r = bloch::bloch_report(&f).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("q", r.q)?;
    d.set_item("P", from_form(&r.p))?;
    d.set_item("B", from_form(&r.b))?;
    d.set_item("K2M", from_form(&r.k2m))?;
    d.set_item("tor_tilde", from_form(&r.tor_tilde))?;
    d.set_item("exact", r.exact.to_vec())?;
    Ok(d)
}

fn check_dict<'py>(py: Python<'py>, c: &IdentityCheck) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("holds", c.holds)?;
    d.set_item("residual_terms", c.residual_terms)?;
    d.set_item("residual", c.residual.clone())?;
    Ok(d)
}

/// Verify the four chain identities at level n (n even). Returns one dict
/// per identity plus the combined verdict.
#[pyfunction]
fn verify_witness_identities(py: Python<'_>, n: usize) -> PyResult<Bound<'_, PyDict>> {
    let ctx = CyclotomicContext::new(n).map_err(witness_err)?;
    let r = witness::verify_identities(&ctx).map_err(witness_err)?;
    let d = PyDict::new(py);
    d.set_item("n", r.n)?;
    d.set_item("boundary_b", check_dict(py, &r.boundary_b)?)?;
    d.set_item("boundary_eta", check_dict(py, &r.boundary_eta)?)?;
    d.set_item("boundary_upsilon", check_dict(py, &r.boundary_upsilon)?)?;
    d.set_item("omega_doubling", check_dict(py, &r.omega_doubling)?)?;
    d.set_item("chi_decomposition", check_dict(py, &r.chi_decomposition)?)?;
    d.set_item("all_hold", r.all_hold())?;
    Ok(d)
}

fn class_dict<'py>(py: Python<'py>, c: &CycleClass) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("degree", c.degree)?;
    d.set_item("coordinates", c.coordinates.clone())?;
    d.set_item("order", c.order.clone())?;
    d.set_item("is_zero", c.is_zero())?;
    Ok(d)
}

/// Resolve [ω] and [χ] in H₃ at level n (budgeted for n = 2) and check
/// 2[ω] = [χ].
#[pyfunction]
fn witness_classes(py: Python<'_>, n: usize) -> PyResult<Bound<'_, PyDict>> {
    let ctx = CyclotomicContext::new(n).map_err(witness_err)?;
    let r = witness::resolve_classes(&ctx).map_err(witness_err)?;
    let d = PyDict::new(py);
    d.set_item("n", r.n)?;
    d.set_item("omega_gm2", class_dict(py, &r.omega_gm2)?)?;
    d.set_item("chi_gm2", class_dict(py, &r.chi_gm2)?)?;
    d.set_item("relation_2omega_eq_chi", r.relation_holds)?;
    d.set_item("chi_gm2_nonzero", r.chi_gm2_nonzero)?;
    d.set_item("chi_t2", class_dict(py, &r.chi_t2)?)?;
    Ok(d)
}

#[pymodule]
fn pyblochwork(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAbelianGroup>()?;
    m.add_function(wrap_pyfunction!(ext, m)?)?;
    m.add_function(wrap_pyfunction!(cyclic_homology, m)?)?;
    m.add_function(wrap_pyfunction!(bar_homology, m)?)?;
    m.add_function(wrap_pyfunction!(e2_page, m)?)?;
    m.add_function(wrap_pyfunction!(kunneth_h3, m)?)?;
    m.add_function(wrap_pyfunction!(lemma_h1_check, m)?)?;
    m.add_function(wrap_pyfunction!(bloch_report, m)?)?;
    m.add_function(wrap_pyfunction!(verify_witness_identities, m)?)?;
    m.add_function(wrap_pyfunction!(witness_classes, m)?)?;
    Ok(())
}
