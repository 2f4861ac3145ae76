//! Python bindings. Artifacts cross the boundary as JSON strings in the same
//! schema the CLI reads and writes.

use gapforge::amplify::compose_amplify;
use gapforge::bridges::{force_unit_coefficients, mld_to_ncp as mld_to_ncp_core, ncp_to_mld as ncp_to_mld_core};
use gapforge::codes::{build_random_code, build_rs_code, collision_number_exact};
use gapforge::gap::{colored_to_uncolored, gap_reduce as gap_reduce_core, CodeShape, GapConfig};
use gapforge::instances::{gen_certified_no, gen_planted_yes, verify_witness};
use gapforge::oracles::{certify_gap, DEFAULT_BUDGET};
use gapforge::{Artifact, ColoredMldInstance, Code, MldInstance, NcpInstance, Witness};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

create_exception!(pygapforge, GapforgeError, PyException);
create_exception!(pygapforge, BudgetExceeded, GapforgeError);

fn err(e: gapforge::Error) -> PyErr {
    match e {
        gapforge::Error::Budget { .. } | gapforge::Error::AmplifyBudget { .. } => BudgetExceeded::new_err(e.to_string()),
        _ => GapforgeError::new_err(e.to_string()),
    }
}

fn parse(doc: &str) -> PyResult<Artifact> {
    Artifact::parse_str(doc).map_err(err)
}

fn dump(a: impl Into<Artifact>) -> String {
    a.into().to_string_pretty()
}

fn wrong(doc: &Artifact, want: &str) -> PyErr {
    GapforgeError::new_err(format!("expected a {want} document, got {}", doc.type_name()))
}

fn colored(doc: &str) -> PyResult<ColoredMldInstance> {
    match parse(doc)? {
        Artifact::ColoredMld(c) => Ok(c),
        other => Err(wrong(&other, "colored_mld")),
    }
}

fn flat(doc: &str) -> PyResult<MldInstance> {
    match parse(doc)? {
        Artifact::Mld(m) => Ok(m),
        Artifact::ColoredMld(c) => Ok(colored_to_uncolored(&c)),
        other => Err(wrong(&other, "mld")),
    }
}

fn ncp(doc: &str) -> PyResult<NcpInstance> {
    match parse(doc)? {
        Artifact::Ncp(n) => Ok(n),
        other => Err(wrong(&other, "ncp")),
    }
}

fn code(doc: &str) -> PyResult<Code> {
    match parse(doc)? {
        Artifact::Code(c) => Ok(c),
        other => Err(wrong(&other, "code")),
    }
}

fn witness(doc: &str) -> PyResult<Witness> {
    match parse(doc)? {
        Artifact::Witness(w) => Ok(w),
        other => Err(wrong(&other, "witness")),
    }
}

/// Returns `(instance_json, witness_json)`.
#[pyfunction]
#[pyo3(signature = (p, k, d, n, seed=0))]
fn planted_yes(p: u64, k: usize, d: usize, n: usize, seed: u64) -> PyResult<(String, String)> {
    let (inst, w) = gen_planted_yes(p, k, d, n, seed).map_err(err)?;
    Ok((dump(inst), dump(w)))
}

#[pyfunction]
#[pyo3(signature = (p, k, d, n, seed=0, max_attempts=1000))]
fn certified_no(p: u64, k: usize, d: usize, n: usize, seed: u64, max_attempts: usize) -> PyResult<String> {
    gen_certified_no(p, k, d, n, seed, max_attempts).map(dump).map_err(err)
}

/// Returns `(valid, weight)`.
#[pyfunction]
fn verify(inst: &str, wit: &str) -> PyResult<(bool, usize)> {
    let w = witness(wit)?;
    let check = match parse(inst)? {
        Artifact::ColoredMld(c) => verify_witness(&c, &w),
        Artifact::Mld(m) => verify_witness(&m, &w),
        other => return Err(wrong(&other, "mld")),
    }
    .map_err(err)?;
    Ok((check.valid, check.weight))
}

/// Returns `(output_json, gap_report_json)`. Passing both `sigma` and `m`
/// fixes the code shape instead of using the formula parameters.
#[pyfunction]
#[pyo3(signature = (inst, c=2, eps=0.25, seed=0, sigma=None, m=None, certify_code=true))]
#[allow(clippy::too_many_arguments)]
fn gap_reduce(
    py: Python<'_>,
    inst: &str,
    c: u64,
    eps: f64,
    seed: u64,
    sigma: Option<u64>,
    m: Option<usize>,
    certify_code: bool,
) -> PyResult<(String, String)> {
    let inst = colored(inst)?;
    let shape = match (sigma, m) {
        (Some(sigma), Some(m)) => Some(CodeShape { sigma, m }),
        (None, None) => None,
        _ => return Err(GapforgeError::new_err("sigma and m must be given together")),
    };
    let cfg = GapConfig {
        shape,
        certify_code,
        ..GapConfig::new(c, eps, seed)
    };
    let (out, rep) = py.detach(|| gap_reduce_core(&inst, &cfg)).map_err(err)?;
    Ok((dump(out), dump(rep)))
}

#[pyfunction]
#[pyo3(signature = (inst, k, gamma, budget=DEFAULT_BUDGET))]
fn certify(py: Python<'_>, inst: &str, k: usize, gamma: f64, budget: u128) -> PyResult<String> {
    let inst = flat(inst)?;
    py.detach(|| certify_gap(&inst, k, gamma, budget)).map(dump).map_err(err)
}

#[pyfunction]
fn random_code(n: usize, sigma: u64, m: usize, seed: u64) -> PyResult<String> {
    build_random_code(n, sigma, m, seed).map(dump).map_err(err)
}

#[pyfunction]
fn rs_code(q: u64, r: usize, m: usize, n: usize) -> PyResult<String> {
    build_rs_code(q, r, m, n).map(dump).map_err(err)
}

/// Smallest colliding subset size up to `s_max`, or `None`.
#[pyfunction]
fn collision_number(py: Python<'_>, code_doc: &str, eps: f64, s_max: usize) -> PyResult<Option<usize>> {
    let c = code(code_doc)?;
    py.detach(|| collision_number_exact(&c, eps, s_max)).map_err(err)
}

#[pyfunction]
fn mld_to_ncp(inst: &str, gamma: f64) -> PyResult<String> {
    let (out, _) = mld_to_ncp_core(&flat(inst)?, gamma).map_err(err)?;
    Ok(dump(out))
}

#[pyfunction]
fn ncp_to_mld(inst: &str) -> PyResult<String> {
    let (out, _) = ncp_to_mld_core(&ncp(inst)?).map_err(err)?;
    Ok(dump(out))
}

#[pyfunction]
fn force_unit(inst: &str) -> PyResult<String> {
    Ok(dump(force_unit_coefficients(&colored(inst)?)))
}

/// Composes two flat instances; returns the composed instance.
#[pyfunction]
fn amplify(outer: &str, outer_gamma: f64, inner: &str, inner_gamma: f64) -> PyResult<String> {
    let (out, _) = compose_amplify(&flat(outer)?, outer_gamma, &flat(inner)?, inner_gamma).map_err(err)?;
    Ok(dump(out))
}

/// Parses any artifact and re-serializes it canonically.
#[pyfunction]
fn canonical(doc: &str) -> PyResult<String> {
    Ok(parse(doc)?.to_string_pretty())
}

#[pymodule]
fn pygapforge(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("GapforgeError", m.py().get_type::<GapforgeError>())?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    m.add_function(wrap_pyfunction!(planted_yes, m)?)?;
    m.add_function(wrap_pyfunction!(certified_no, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(gap_reduce, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(random_code, m)?)?;
    m.add_function(wrap_pyfunction!(rs_code, m)?)?;
    m.add_function(wrap_pyfunction!(collision_number, m)?)?;
    m.add_function(wrap_pyfunction!(mld_to_ncp, m)?)?;
    m.add_function(wrap_pyfunction!(ncp_to_mld, m)?)?;
    m.add_function(wrap_pyfunction!(force_unit, m)?)?;
    m.add_function(wrap_pyfunction!(amplify, m)?)?;
    m.add_function(wrap_pyfunction!(canonical, m)?)?;
    Ok(())
}
