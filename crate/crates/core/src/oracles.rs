//! Exhaustive solvers used as ground truth for every reduction.
//!
//! All searches are size-major, then lexicographic over index tuples, then
//! lexicographic over coefficient tuples, so the returned witness is the
//! lexicographically smallest among minimum-weight ones. Work is bounded by an
//! explicit budget checked before the search starts.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{independent_rows, FpMatrix, FpVector, PrimeField};
use crate::instances::{ColoredMldInstance, MldInstance, NcpInstance, Pick, Witness};

/// Default number of elementary combinations an oracle may enumerate.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

pub(crate) fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact: acc * (n - i) is divisible by (i + 1)
        acc = match acc.checked_mul(n - i) {
            Some(x) => x / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// `Σ_{s=1..cap} C(n, s) (p-1)^s`, saturating.
pub fn mld_search_cost(n: usize, p: u32, cap: usize) -> u128 {
    let mut total: u128 = 0;
    let q = p as u128 - 1;
    let mut qs: u128 = 1;
    for s in 1..=cap.min(n) {
        qs = qs.saturating_mul(q);
        total = total.saturating_add(binomial(n as u128, s as u128).saturating_mul(qs));
    }
    total
}

/// Which one-per-class selections the colored oracle accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColoredMode {
    /// Coefficients fixed to 1 (the YES shape).
    Unit,
    /// Any nonzero coefficients (the condition a NO input must refute).
    AnyNonzero,
}

/// First one-per-class selection summing to the target, if any.
pub fn colored_solution(
    inst: &ColoredMldInstance,
    mode: ColoredMode,
    budget: u128,
) -> Result<Option<Witness>> {
    let f = inst.field();
    let k = inst.k();
    let coeff_range: Vec<u32> = match mode {
        ColoredMode::Unit => vec![1],
        ColoredMode::AnyNonzero => f.nonzero().collect(),
    };
    let mut work: u128 = 1;
    for class in inst.classes() {
        work = work.saturating_mul(class.len() as u128);
    }
    work = work.saturating_mul((coeff_range.len() as u128).saturating_pow(k as u32));
    if work > budget {
        return Err(Error::budget("colored oracle", work, budget));
    }
    let d = inst.d();
    let target = inst.target().entries();
    let mut idx = vec![0usize; k];
    loop {
        let vecs: Vec<&[u32]> = (0..k).map(|c| inst.classes()[c][idx[c]].entries()).collect();
        if let Some(coeffs) = first_coeffs(f, &vecs, target, d, &coeff_range) {
            let picks = (0..k)
                .map(|c| Pick {
                    class: Some(c),
                    index: idx[c],
                    coeff: coeffs[c],
                })
                .collect();
            return Ok(Some(Witness::new(picks)));
        }
        // odometer, last class fastest
        let mut c = k;
        loop {
            if c == 0 {
                return Ok(None);
            }
            c -= 1;
            idx[c] += 1;
            if idx[c] < inst.classes()[c].len() {
                break;
            }
            idx[c] = 0;
        }
    }
}

/// Lexicographically first coefficient tuple from `range` making
/// `Σ c_i v_i = target`.
fn first_coeffs(
    f: PrimeField,
    vecs: &[&[u32]],
    target: &[u32],
    d: usize,
    range: &[u32],
) -> Option<Vec<u32>> {
    let s = vecs.len();
    let mut partial = vec![vec![0u32; d]; s + 1];
    let mut choice = vec![0usize; s];
    coeff_dfs(f, vecs, target, range, 0, &mut partial, &mut choice)
        .then(|| choice.iter().map(|&c| range[c]).collect())
}

fn coeff_dfs(
    f: PrimeField,
    vecs: &[&[u32]],
    target: &[u32],
    range: &[u32],
    depth: usize,
    partial: &mut [Vec<u32>],
    choice: &mut [usize],
) -> bool {
    if depth == vecs.len() {
        return partial[depth] == target;
    }
    for (ci, &c) in range.iter().enumerate() {
        let (lo, hi) = partial.split_at_mut(depth + 1);
        for ((out, &a), &v) in hi[0].iter_mut().zip(&lo[depth]).zip(vecs[depth]) {
            *out = f.add(a, f.mul(c, v));
        }
        choice[depth] = ci;
        if coeff_dfs(f, vecs, target, range, depth + 1, partial, choice) {
            return true;
        }
    }
    false
}

/// Outcome of [`exact_mld_min`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MldSearch {
    Found { weight: usize, witness: Witness },
    /// Nothing of size `<= cap`; larger solutions are known to exist or were
    /// not ruled out.
    NoneUpTo { cap: usize },
    /// Proven: no selection of any size sums to the target.
    NoneAtAnySize,
}

impl MldSearch {
    pub fn weight(&self) -> Option<usize> {
        match self {
            MldSearch::Found { weight, .. } => Some(*weight),
            _ => None,
        }
    }
}

/// Minimum number of distinct vectors with nonzero coefficients summing to
/// the target, searched up to `size_cap`.
pub fn exact_mld_min(inst: &MldInstance, size_cap: usize, budget: u128) -> Result<MldSearch> {
    let f = inst.field();
    let n = inst.vectors().len();
    let cap = size_cap.min(n);
    let cost = mld_search_cost(n, f.p(), cap);
    if cost > budget {
        return Err(Error::budget("exact MLD search", cost, budget));
    }
    let vecs: Vec<&[u32]> = inst.vectors().iter().map(|v| v.entries()).collect();
    let coeffs: Vec<u32> = f.nonzero().collect();
    let target = inst.target().entries();
    for s in 1..=cap {
        let hit = (0..n).into_par_iter().find_map_first(|first| {
            let mut idx = Vec::with_capacity(s);
            idx.push(first);
            search_subsets(f, &vecs, target, &coeffs, s, &mut idx)
        });
        if let Some((idx, cs)) = hit {
            let picks = idx
                .iter()
                .zip(&cs)
                .map(|(&index, &coeff)| Pick {
                    class: None,
                    index,
                    coeff,
                })
                .collect();
            return Ok(MldSearch::Found {
                weight: s,
                witness: Witness::new(picks),
            });
        }
    }
    if cap == n || !solvable_at_some_size(inst) {
        return Ok(MldSearch::NoneAtAnySize);
    }
    Ok(MldSearch::NoneUpTo { cap })
}

fn search_subsets(
    f: PrimeField,
    vecs: &[&[u32]],
    target: &[u32],
    coeffs: &[u32],
    size: usize,
    idx: &mut Vec<usize>,
) -> Option<(Vec<usize>, Vec<u32>)> {
    if idx.len() == size {
        let chosen: Vec<&[u32]> = idx.iter().map(|&i| vecs[i]).collect();
        return first_coeffs(f, &chosen, target, target.len(), coeffs).map(|c| (idx.clone(), c));
    }
    let start = idx.last().map_or(0, |&l| l + 1);
    let remaining = size - idx.len();
    for i in start..=vecs.len().saturating_sub(remaining) {
        idx.push(i);
        if let Some(hit) = search_subsets(f, vecs, target, coeffs, size, idx) {
            return Some(hit);
        }
        idx.pop();
    }
    None
}

/// Whether some nonempty selection with nonzero coefficients reaches the
/// target, decided by linear algebra.
fn solvable_at_some_size(inst: &MldInstance) -> bool {
    let f = inst.field();
    let mat = FpMatrix::new(f, inst.d(), inst.vectors().to_vec()).expect("validated instance");
    let rank = mat.rank();
    if inst.target().is_zero() {
        // needs a nontrivial dependency among the (multiset) vectors
        return rank < inst.vectors().len();
    }
    let mut rows = inst.vectors().to_vec();
    rows.push(inst.target().clone());
    let ext = FpMatrix::new(f, inst.d(), rows).expect("validated instance");
    ext.rank() == rank
}

/// Call `visit(indices, coeffs)` for every selection of at most `max_size`
/// distinct vectors with nonzero coefficients that sums to `target`.
pub fn for_each_solution(
    field: PrimeField,
    vectors: &[FpVector],
    target: &FpVector,
    max_size: usize,
    budget: u128,
    mut visit: impl FnMut(&[usize], &[u32]),
) -> Result<()> {
    let n = vectors.len();
    // every subset/coefficient assignment is a leaf; (p)^n bounds the full tree
    let cost = mld_search_cost(n, field.p(), max_size);
    if cost > budget {
        return Err(Error::budget("solution enumeration", cost, budget));
    }
    let d = target.dim();
    let vecs: Vec<&[u32]> = vectors.iter().map(|v| v.entries()).collect();
    let mut acc = vec![vec![0u32; d]; max_size.min(n) + 1];
    let mut idx = Vec::new();
    let mut cs = Vec::new();
    enumerate_all(field, &vecs, target.entries(), max_size, 0, &mut acc, &mut idx, &mut cs, &mut visit);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn enumerate_all(
    f: PrimeField,
    vecs: &[&[u32]],
    target: &[u32],
    max_size: usize,
    start: usize,
    acc: &mut [Vec<u32>],
    idx: &mut Vec<usize>,
    cs: &mut Vec<u32>,
    visit: &mut impl FnMut(&[usize], &[u32]),
) {
    let depth = idx.len();
    if depth > 0 && acc[depth] == target {
        visit(idx, cs);
    }
    if depth == max_size {
        return;
    }
    for i in start..vecs.len() {
        for c in f.nonzero() {
            let (lo, hi) = acc.split_at_mut(depth + 1);
            for ((out, &a), &v) in hi[0].iter_mut().zip(&lo[depth]).zip(vecs[i]) {
                *out = f.add(a, f.mul(c, v));
            }
            idx.push(i);
            cs.push(c);
            enumerate_all(f, vecs, target, max_size, i + 1, acc, idx, cs, visit);
            idx.pop();
            cs.pop();
        }
    }
}

/// Nearest codeword: minimum Hamming distance from the target to the code and
/// a coefficient vector attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcpSolution {
    pub distance: usize,
    pub coeffs: Vec<u32>,
}

pub fn exact_ncp_min(inst: &NcpInstance, budget: u128) -> Result<NcpSolution> {
    let f = inst.field();
    let gens = inst.generators();
    let full = (f.p() as u128).checked_pow(gens.len() as u32).unwrap_or(u128::MAX);
    // Enumerate over a basis when the raw generator set is too large.
    let basis: Vec<usize> = if full <= budget {
        (0..gens.len()).collect()
    } else {
        let mat = FpMatrix::new(f, inst.m(), gens.to_vec())?;
        let b = independent_rows(&mat);
        let cost = (f.p() as u128).checked_pow(b.len() as u32).unwrap_or(u128::MAX);
        if cost > budget {
            return Err(Error::budget("exact NCP search", cost, budget));
        }
        b
    };
    let vecs: Vec<&[u32]> = basis.iter().map(|&i| gens[i].entries()).collect();
    let m = inst.m();
    let mut partial = vec![vec![0u32; m]; vecs.len() + 1];
    let mut cur = vec![0u32; vecs.len()];
    let mut best = (usize::MAX, vec![0u32; vecs.len()]);
    ncp_dfs(f, &vecs, inst.target().entries(), 0, &mut partial, &mut cur, &mut best);
    let mut coeffs = vec![0u32; gens.len()];
    for (&i, &c) in basis.iter().zip(&best.1) {
        coeffs[i] = c;
    }
    Ok(NcpSolution {
        distance: best.0,
        coeffs,
    })
}

fn ncp_dfs(
    f: PrimeField,
    vecs: &[&[u32]],
    target: &[u32],
    depth: usize,
    partial: &mut [Vec<u32>],
    cur: &mut [u32],
    best: &mut (usize, Vec<u32>),
) {
    if best.0 == 0 {
        return;
    }
    if depth == vecs.len() {
        let dist = partial[depth].iter().zip(target).filter(|(a, b)| a != b).count();
        if dist < best.0 {
            *best = (dist, cur.to_vec());
        }
        return;
    }
    for c in 0..f.p() {
        let (lo, hi) = partial.split_at_mut(depth + 1);
        for ((out, &a), &v) in hi[0].iter_mut().zip(&lo[depth]).zip(vecs[depth]) {
            *out = f.add(a, f.mul(c, v));
        }
        cur[depth] = c;
        ncp_dfs(f, vecs, target, depth + 1, partial, cur, best);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapClass {
    Yes,
    NoAtGamma,
    Neither,
    BudgetExceeded,
}

impl GapClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            GapClass::Yes => "YES",
            GapClass::NoAtGamma => "NO_AT_GAMMA",
            GapClass::Neither => "NEITHER",
            GapClass::BudgetExceeded => "BUDGET_EXCEEDED",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "YES" => GapClass::Yes,
            "NO_AT_GAMMA" => GapClass::NoAtGamma,
            "NEITHER" => GapClass::Neither,
            "BUDGET_EXCEEDED" => GapClass::BudgetExceeded,
            _ => return None,
        })
    }
}

/// Oracle-backed classification of an instance against a claimed `(k, γ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapReportCard {
    pub instance_id: Option<String>,
    pub k: usize,
    pub gamma: f64,
    pub exact_min: Option<usize>,
    pub class: GapClass,
    pub witness: Option<Witness>,
    /// Largest solution size searched.
    pub size_cap: usize,
    pub no_solution_at_any_size: bool,
}

/// `⌊γk⌋`, robust to the float error in products like `1.1 * 10`.
pub fn floor_gamma_k(gamma: f64, k: usize) -> usize {
    (gamma * k as f64 + 1e-9).floor() as usize
}

pub fn certify_gap(inst: &MldInstance, k: usize, gamma: f64, budget: u128) -> Result<GapReportCard> {
    if !gamma.is_finite() || gamma < 1.0 {
        return Err(Error::input(format!("gamma must be a finite value >= 1 (got {gamma})")));
    }
    let limit = floor_gamma_k(gamma, k);
    let mut card = GapReportCard {
        instance_id: None,
        k,
        gamma,
        exact_min: None,
        class: GapClass::BudgetExceeded,
        witness: None,
        size_cap: 0,
        no_solution_at_any_size: false,
    };
    // ⌊γk⌋ + 1 also reports the first size past the gap; ⌊γk⌋ alone decides.
    let mut outcome = None;
    for cap in [limit + 1, limit] {
        match exact_mld_min(inst, cap, budget) {
            Ok(r) => {
                card.size_cap = cap.min(inst.vectors().len());
                outcome = Some(r);
                break;
            }
            Err(Error::Budget { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    let Some(outcome) = outcome else {
        return Ok(card);
    };
    match outcome {
        MldSearch::Found { weight, witness } => {
            card.exact_min = Some(weight);
            card.witness = Some(witness);
            card.class = if weight <= k {
                GapClass::Yes
            } else if weight > limit {
                GapClass::NoAtGamma
            } else {
                GapClass::Neither
            };
        }
        MldSearch::NoneUpTo { .. } => card.class = GapClass::NoAtGamma,
        MldSearch::NoneAtAnySize => {
            card.class = GapClass::NoAtGamma;
            card.no_solution_at_any_size = true;
        }
    }
    Ok(card)
}
