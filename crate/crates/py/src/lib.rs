//! Python bindings. Systems are `Ecs` objects; classes, cosets and trace
//! steps cross the boundary as plain tuples.

use covsys_core as cs;
use cs::{CycVector, Ecs, MergeCandidate, ReductionTrace, ResidueClass, SplitStep};
use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(covsys, CovsysError, PyValueError);

fn err(e: cs::Error) -> PyErr {
    CovsysError::new_err(e.to_string())
}

type Step = (u64, u64, u64);

fn steps_out(t: &ReductionTrace) -> Vec<Step> {
    t.steps
        .iter()
        .map(|s| (s.parent.residue(), s.parent.modulus(), s.prime))
        .collect()
}

fn steps_in(steps: Vec<Step>) -> PyResult<ReductionTrace> {
    let steps = steps
        .into_iter()
        .map(|(r, n, p)| {
            if n == 0 || r >= n || !cs::arith::is_prime(p) {
                return Err(CovsysError::new_err(format!(
                    "invalid step ({r}, {n}, {p})"
                )));
            }
            Ok(SplitStep {
                parent: ResidueClass::new(r, n),
                prime: p,
            })
        })
        .collect::<PyResult<_>>()?;
    Ok(ReductionTrace { steps })
}

/// A finite multiset of residue classes `a (mod n)`, kept in canonical order.
#[pyclass(name = "Ecs", module = "covsys", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyEcs {
    inner: Ecs,
}

impl From<Ecs> for PyEcs {
    fn from(inner: Ecs) -> Self {
        PyEcs { inner }
    }
}

#[pymethods]
impl PyEcs {
    /// Build from `(residue, modulus)` pairs; residues are reduced.
    #[new]
    fn new(classes: Vec<(i64, i64)>) -> PyResult<Self> {
        Ecs::from_pairs(&classes).map(Into::into).map_err(err)
    }

    #[staticmethod]
    fn trivial() -> Self {
        Ecs::trivial().into()
    }

    #[staticmethod]
    fn basic(n: u64) -> PyResult<Self> {
        Ecs::basic(n).map(Into::into).map_err(err)
    }

    #[staticmethod]
    fn irreducible_example() -> Self {
        cs::irreducible_example().into()
    }

    /// Parse the text or JSON format.
    #[staticmethod]
    fn parse(src: &str) -> PyResult<Self> {
        cs::format::parse_auto(src).map(Into::into).map_err(err)
    }

    fn to_text(&self) -> String {
        cs::format::to_text(&self.inner)
    }

    fn to_json(&self) -> String {
        cs::format::to_json(&self.inner)
    }

    fn classes(&self) -> Vec<(u64, u64)> {
        self.inner.classes().iter().map(|&c| c.into()).collect()
    }

    #[getter]
    fn lcm(&self) -> u64 {
        self.inner.lcm()
    }

    fn moduli(&self) -> Vec<u64> {
        self.inner.moduli()
    }

    fn maximal_moduli(&self) -> Vec<u64> {
        self.inner.maximal_moduli().into_iter().collect()
    }

    fn greatest_modulus_count(&self) -> usize {
        self.inner.greatest_modulus_count()
    }

    fn is_trivial(&self) -> bool {
        self.inner.is_trivial()
    }

    /// `sum 1/n` as a `fractions.Fraction`.
    fn density<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let d = self.inner.density();
        let (num, den): (BigInt, BigInt) = (d.numer().clone(), d.denom().clone());
        py.import("fractions")?
            .getattr("Fraction")?
            .call1((num, den))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Ecs({})", self.inner)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

#[pyfunction]
fn verify_scan(ecs: &PyEcs) -> PyResult<bool> {
    let r = cs::verify_scan(&ecs.inner).map_err(err)?;
    Ok(r.is_exact == Some(true))
}

#[pyfunction]
fn verify_crt(ecs: &PyEcs) -> bool {
    cs::verify_crt(&ecs.inner)
}

#[pyfunction]
fn verify_genfun(ecs: &PyEcs) -> PyResult<bool> {
    cs::verify_genfun(&ecs.inner).map_err(err)
}

/// Replace `residue (mod modulus)` with its `n` refinements mod `n * modulus`.
#[pyfunction]
fn split(ecs: &PyEcs, residue: i64, modulus: i64, n: u64) -> PyResult<PyEcs> {
    let target = cs::normalize(residue, modulus).map_err(err)?;
    cs::split(&ecs.inner, target, n)
        .map(Into::into)
        .map_err(err)
}

#[pyfunction]
fn merge(ecs: &PyEcs, modulus: u64, prime: u64, shift: u64) -> PyResult<PyEcs> {
    let c = MergeCandidate {
        modulus,
        prime,
        shift,
    };
    cs::merge(&ecs.inner, c).map(Into::into).map_err(err)
}

/// Mergeable cosets as `(modulus, prime, shift)`.
#[pyfunction]
fn merge_candidates(ecs: &PyEcs) -> Vec<(u64, u64, u64)> {
    cs::merge_candidates(&ecs.inner)
        .into_iter()
        .map(|c| (c.modulus, c.prime, c.shift))
        .collect()
}

#[pyfunction]
fn is_prime_split(a: &PyEcs, b: &PyEcs) -> bool {
    cs::is_prime_split(&a.inner, &b.inner)
}

/// One consolidation; returns the coarser system and the `(residue, modulus, prime)` split undone.
#[pyfunction]
fn reduce_step(ecs: &PyEcs) -> PyResult<(PyEcs, Step)> {
    let (b, s) = cs::reduce_step(&ecs.inner).map_err(err)?;
    Ok((b.into(), (s.parent.residue(), s.parent.modulus(), s.prime)))
}

/// Coarse-to-fine split steps rebuilding the system from `{0(1)}`.
#[pyfunction]
fn reduce_to_trivial(ecs: &PyEcs) -> PyResult<Vec<Step>> {
    cs::reduce_to_trivial(&ecs.inner)
        .map(|t| steps_out(&t))
        .map_err(err)
}

#[pyfunction]
fn replay(steps: Vec<Step>) -> PyResult<PyEcs> {
    steps_in(steps)?.replay().map(Into::into).map_err(err)
}

/// A trace if some merge sequence reaches `{0(1)}`, else `None`.
#[pyfunction]
fn is_natural(ecs: &PyEcs) -> PyResult<Option<Vec<Step>>> {
    cs::is_natural(&ecs.inner)
        .map(|t| t.as_ref().map(steps_out))
        .map_err(err)
}

#[pyfunction]
fn is_irreducible(ecs: &PyEcs) -> PyResult<bool> {
    cs::is_irreducible(&ecs.inner).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (seed, steps, primes, max_lcm = None, max_prime_factors = None))]
fn generate_natural(
    seed: u64,
    steps: usize,
    primes: Vec<u64>,
    max_lcm: Option<u64>,
    max_prime_factors: Option<usize>,
) -> PyResult<(PyEcs, Vec<Step>)> {
    let opts = cs::GenOptions {
        max_lcm,
        max_prime_factors,
    };
    let (a, t) = cs::generate_natural_with(seed, steps, &primes, opts).map_err(err)?;
    Ok((a.into(), steps_out(&t)))
}

#[pyfunction]
fn enumerate_ecs(py: Python<'_>, n: u64) -> PyResult<Vec<PyEcs>> {
    let all = py.detach(|| cs::enumerate_ecs(n)).map_err(err)?;
    Ok(all.into_iter().map(Into::into).collect())
}

fn cyc(m: u64, coeffs: Vec<i64>) -> PyResult<CycVector> {
    if m == 0 || coeffs.len() as u64 != m {
        return Err(CovsysError::new_err(format!(
            "expected {m} coefficients, got {}",
            coeffs.len()
        )));
    }
    Ok(CycVector::new(m, coeffs))
}

/// Whether `sum coeffs[i] * zeta_m^i == 0`.
#[pyfunction]
fn vanishes(m: u64, coeffs: Vec<i64>) -> PyResult<bool> {
    Ok(cs::vanishes(&cyc(m, coeffs)?))
}

/// Greedy coset decomposition as `(prime, shift)` pairs.
#[pyfunction]
fn decompose(m: u64, coeffs: Vec<i64>) -> PyResult<Vec<(u64, u64)>> {
    let terms = cs::decompose(&cyc(m, coeffs)?).map_err(err)?;
    Ok(terms.into_iter().map(|c| (c.prime(), c.shift())).collect())
}

#[pyfunction]
fn find_coset(m: u64, coeffs: Vec<i64>) -> PyResult<(u64, u64)> {
    let c = cs::find_coset(&cyc(m, coeffs)?).map_err(err)?;
    Ok((c.prime(), c.shift()))
}

#[pyfunction]
fn cyclotomic_polynomial(m: u64) -> PyResult<Vec<i64>> {
    cs::cyclotomic_polynomial(m).map_err(err)
}

#[pyfunction]
fn lemma1_quotient(n: u64, t: u64, n_r: u64) -> PyResult<u64> {
    cs::lemma1_quotient(n, t, n_r).map_err(err)
}

/// `(prime, exponent)` pairs in ascending order.
#[pyfunction]
fn factorize(n: u64) -> Vec<(u64, u32)> {
    cs::factorize(n).factors().to_vec()
}

#[pymodule]
fn covsys(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CovsysError", m.py().get_type::<CovsysError>())?;
    m.add_class::<PyEcs>()?;
    m.add_function(wrap_pyfunction!(verify_scan, m)?)?;
    m.add_function(wrap_pyfunction!(verify_crt, m)?)?;
    m.add_function(wrap_pyfunction!(verify_genfun, m)?)?;
    m.add_function(wrap_pyfunction!(split, m)?)?;
    m.add_function(wrap_pyfunction!(merge, m)?)?;
    m.add_function(wrap_pyfunction!(merge_candidates, m)?)?;
    m.add_function(wrap_pyfunction!(is_prime_split, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_step, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_to_trivial, m)?)?;
    m.add_function(wrap_pyfunction!(replay, m)?)?;
    m.add_function(wrap_pyfunction!(is_natural, m)?)?;
    m.add_function(wrap_pyfunction!(is_irreducible, m)?)?;
    m.add_function(wrap_pyfunction!(generate_natural, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_ecs, m)?)?;
    m.add_function(wrap_pyfunction!(vanishes, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(find_coset, m)?)?;
    m.add_function(wrap_pyfunction!(cyclotomic_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(lemma1_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(factorize, m)?)?;
    Ok(())
}
