//! Codes with large ε-collision number: construction and exact analysis.
//!
//! A subset `S` of codewords *collides* on coordinate `i` when two distinct
//! members share the symbol at `i`. `Col_ε(C)` is the least `|S|` colliding on
//! more than `εm` coordinates.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{is_prime, PrimeField};
use crate::oracles::binomial;
use crate::rng::CounterRng;

/// `n` pairwise distinct words of length `m` over the alphabet `0..sigma`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    sigma: u64,
    m: usize,
    words: Vec<Vec<u32>>,
}

/// Symbols are stored as `u32`, so alphabets are capped at `2^32`.
pub const MAX_SIGMA: u64 = 1 << 32;

impl Code {
    pub fn new(sigma: u64, m: usize, words: Vec<Vec<u32>>) -> Result<Self> {
        if !(2..=MAX_SIGMA).contains(&sigma) {
            return Err(Error::input(format!("alphabet size {sigma} must lie in [2, 2^32]")));
        }
        if m == 0 {
            return Err(Error::input("code length must be positive"));
        }
        if words.is_empty() {
            return Err(Error::input("a code needs at least one word"));
        }
        let mut seen = HashSet::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            if w.len() != m {
                return Err(Error::input(format!("word {i} has length {} not {m}", w.len())));
            }
            if let Some(s) = w.iter().find(|&&s| s as u64 >= sigma) {
                return Err(Error::input(format!("word {i}: symbol {s} outside alphabet {sigma}")));
            }
            if !seen.insert(w.as_slice()) {
                return Err(Error::input(format!("word {i} duplicates an earlier word")));
            }
        }
        Ok(Code { sigma, m, words })
    }

    pub fn sigma(&self) -> u64 {
        self.sigma
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[Vec<u32>] {
        &self.words
    }

    /// Number of coordinates on which words `a` and `b` agree.
    pub fn agreement(&self, a: usize, b: usize) -> usize {
        self.words[a]
            .iter()
            .zip(&self.words[b])
            .filter(|(x, y)| x == y)
            .count()
    }

    /// Minimum pairwise Hamming distance divided by `m`; `None` for a single
    /// word.
    pub fn relative_distance(&self) -> Option<f64> {
        let n = self.n();
        let mut max_agree = None;
        for a in 0..n {
            for b in a + 1..n {
                let g = self.agreement(a, b);
                max_agree = Some(max_agree.map_or(g, |x: usize| x.max(g)));
            }
        }
        max_agree.map(|g| (self.m - g) as f64 / self.m as f64)
    }
}

/// Number of collisions a subset must exceed: `⌊εm⌋`, robust to float error.
pub fn collision_threshold(epsilon: f64, m: usize) -> usize {
    (epsilon * m as f64 + 1e-9).floor() as usize
}

/// Budget on enumerated subsets for [`collision_number_exact`].
pub const COLLISION_BUDGET: u128 = 10_000_000;

/// Collision-search cost `Σ_{s=2..s_max} C(n, s)`.
pub fn collision_search_cost(n: usize, s_max: usize) -> u128 {
    (2..=s_max.min(n)).fold(0u128, |acc, s| {
        acc.saturating_add(binomial(n as u128, s as u128))
    })
}

/// Largest agreement table (in 64-bit words) the collision search builds.
const TABLE_LIMIT: u128 = 50_000_000;

/// Bitset of coordinates where each pair `a < b` of words agrees.
struct AgreementTable {
    n: usize,
    blocks: usize,
    bits: Vec<u64>,
}

impl AgreementTable {
    fn size(n: usize, m: usize) -> u128 {
        (n as u128 * n.saturating_sub(1) as u128 / 2) * m.div_ceil(64) as u128
    }

    fn new(code: &Code) -> Self {
        let n = code.n();
        let blocks = code.m.div_ceil(64);
        let mut table = AgreementTable {
            n,
            blocks,
            bits: vec![0u64; Self::size(n, code.m) as usize],
        };
        for a in 0..n {
            for b in a + 1..n {
                let off = table.offset(a, b);
                for (i, (x, y)) in code.words[a].iter().zip(&code.words[b]).enumerate() {
                    if x == y {
                        table.bits[off + i / 64] |= 1 << (i % 64);
                    }
                }
            }
        }
        table
    }

    fn offset(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < b);
        (a * (2 * self.n - a - 1) / 2 + (b - a - 1)) * self.blocks
    }

    fn pair(&self, a: usize, b: usize) -> &[u64] {
        let off = self.offset(a, b);
        &self.bits[off..off + self.blocks]
    }
}

/// Lexicographically first subset of the smallest size `s <= s_max` that
/// collides on more than `εm` coordinates.
pub fn find_colliding_subset(
    code: &Code,
    epsilon: f64,
    s_max: usize,
    budget: u128,
) -> Result<Option<Vec<usize>>> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::input(format!("epsilon must lie in (0, 1) (got {epsilon})")));
    }
    // Subsets larger than the code do not exist; clamp.
    let s_max = s_max.min(code.n());
    let cost = collision_search_cost(code.n(), s_max);
    if cost > budget {
        return Err(Error::budget("collision number search", cost, budget));
    }
    if s_max < 2 {
        return Ok(None);
    }
    let table_size = AgreementTable::size(code.n(), code.m);
    if table_size > TABLE_LIMIT {
        return Err(Error::budget("collision agreement table", table_size, TABLE_LIMIT));
    }
    let table = AgreementTable::new(code);
    let threshold = collision_threshold(epsilon, code.m);
    for s in 2..=s_max {
        let hit = (0..code.n()).into_par_iter().find_map_first(|first| {
            let mut members = vec![first];
            let mask = vec![0u64; table.blocks];
            subset_dfs(&table, s, threshold, &mut members, &mask)
        });
        if hit.is_some() {
            return Ok(hit);
        }
    }
    Ok(None)
}

fn subset_dfs(
    table: &AgreementTable,
    size: usize,
    threshold: usize,
    members: &mut Vec<usize>,
    mask: &[u64],
) -> Option<Vec<usize>> {
    if members.len() == size {
        let count: usize = mask.iter().map(|w| w.count_ones() as usize).sum();
        return (count > threshold).then(|| members.clone());
    }
    let start = members.last().unwrap() + 1;
    let remaining = size - members.len();
    for next in start..=table.n.saturating_sub(remaining) {
        let mut m2 = mask.to_vec();
        for &a in members.iter() {
            for (x, &y) in m2.iter_mut().zip(table.pair(a, next)) {
                *x |= y;
            }
        }
        members.push(next);
        if let Some(hit) = subset_dfs(table, size, threshold, members, &m2) {
            return Some(hit);
        }
        members.pop();
    }
    None
}

/// Smallest `s <= s_max` with a subset of size `s` colliding on more than
/// `εm` coordinates. `None` certifies `Col_ε(code) > s_max`.
pub fn collision_number_exact(code: &Code, epsilon: f64, s_max: usize) -> Result<Option<usize>> {
    Ok(find_colliding_subset(code, epsilon, s_max, COLLISION_BUDGET)?.map(|s| s.len()))
}

/// `n` distinct words with i.i.d. uniform symbols; a word equal to an earlier
/// one is redrawn.
pub fn build_random_code(n: usize, sigma: u64, m: usize, seed: u64) -> Result<Code> {
    if !(2..=MAX_SIGMA).contains(&sigma) {
        return Err(Error::input(format!("alphabet size {sigma} must lie in [2, 2^32]")));
    }
    if n == 0 || m == 0 {
        return Err(Error::input("random code needs n >= 1 and m >= 1"));
    }
    let capacity = (sigma as u128).checked_pow(m.min(128) as u32).unwrap_or(u128::MAX);
    if capacity < n as u128 {
        return Err(Error::input(format!(
            "cannot draw {n} distinct words: only {capacity} exist"
        )));
    }
    let mut rng = CounterRng::new(seed);
    let mut seen = HashSet::with_capacity(n);
    let mut words = Vec::with_capacity(n);
    while words.len() < n {
        let w: Vec<u32> = (0..m).map(|_| rng.below(sigma) as u32).collect();
        if seen.insert(w.clone()) {
            words.push(w);
        }
    }
    Code::new(sigma, m, words)
}

/// Parameters of the random-code construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodeParams {
    pub sigma: u64,
    pub r: u32,
    pub m: usize,
    pub epsilon: f64,
    pub c: u64,
}

/// Smallest `r >= 1` with `sigma^r >= n`.
pub fn message_length(n: usize, sigma: u64) -> u32 {
    let mut r = 1u32;
    let mut cap = sigma as u128;
    while cap < n as u128 {
        r += 1;
        cap = cap.saturating_mul(sigma as u128);
    }
    r
}

/// `|Σ| = (ck)^3`, `r = ⌈log n / log |Σ|⌉`,
/// `m = ⌈16 ε⁻² |Σ|^{1/3} ln|Σ| r⌉` rounded up to a multiple of `k`.
pub fn random_code_params(n: usize, k: usize, c: u64, epsilon: f64) -> Result<CodeParams> {
    if n < 2 || k < 1 || c < 1 {
        return Err(Error::input("random_code_params needs n >= 2, k >= 1, c >= 1"));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::input(format!("epsilon must lie in (0, 1) (got {epsilon})")));
    }
    let ck = c
        .checked_mul(k as u64)
        .ok_or_else(|| Error::input("c*k overflows"))?;
    let sigma = ck
        .checked_pow(3)
        .filter(|&s| s <= MAX_SIGMA)
        .ok_or_else(|| Error::input(format!("alphabet (ck)^3 with ck = {ck} is too large")))?;
    if sigma < 2 {
        return Err(Error::input("ck must be at least 2 so that |Σ| >= 2"));
    }
    let r = message_length(n, sigma);
    let raw = (16.0 / (epsilon * epsilon) * ck as f64 * (sigma as f64).ln() * r as f64).ceil() as usize;
    let m = raw.div_ceil(k) * k;
    Ok(CodeParams {
        sigma,
        r,
        m,
        epsilon,
        c,
    })
}

/// Group every `g` consecutive coordinates into one symbol over `sigma^g`
/// (base-`sigma`, first coordinate most significant).
pub fn merge_code(code: &Code, g: usize) -> Result<Code> {
    if g == 0 || !code.m.is_multiple_of(g) {
        return Err(Error::input(format!("merge arity {g} does not divide length {}", code.m)));
    }
    let sigma = code
        .sigma
        .checked_pow(g as u32)
        .filter(|&s| s <= MAX_SIGMA)
        .ok_or_else(|| Error::input(format!("merged alphabet {}^{g} exceeds 2^32", code.sigma)))?;
    let words = code
        .words
        .iter()
        .map(|w| {
            w.chunks(g)
                .map(|chunk| chunk.iter().fold(0u64, |acc, &s| acc * code.sigma + s as u64) as u32)
                .collect()
        })
        .collect();
    Code::new(sigma, code.m / g, words)
}

/// Evaluations of the first `n` polynomials of degree `< r` over `F_q` at
/// the points `0..m`. Message `i` has coefficients given by the base-`q`
/// digits of `i`, constant term most significant.
pub fn build_rs_code(q: u64, r: usize, m: usize, n: usize) -> Result<Code> {
    if !is_prime(q) {
        return Err(Error::input(format!("RS field size {q} must be prime")));
    }
    let field = PrimeField::new(q)?;
    if !(r >= 1 && r < m && m as u64 <= q) {
        return Err(Error::input(format!("RS needs 1 <= r < m <= q (r={r}, m={m}, q={q})")));
    }
    let messages = (q as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
    if n == 0 || n as u128 > messages {
        return Err(Error::input(format!("RS code has {messages} messages, {n} requested")));
    }
    let words = (0..n as u64)
        .map(|idx| {
            let mut coeffs = vec![0u32; r];
            let mut x = idx;
            for slot in coeffs.iter_mut().rev() {
                *slot = (x % q) as u32;
                x /= q;
            }
            (0..m as u32)
                .map(|pt| {
                    // Horner from the highest degree
                    coeffs
                        .iter()
                        .rev()
                        .fold(0u32, |acc, &a| field.add(field.mul(acc, pt), a))
                })
                .collect()
        })
        .collect();
    Code::new(q, m, words)
}

/// Collision lower bound for RS codes, `√(2εm/r)`.
pub fn rs_collision_bound(epsilon: f64, m: usize, r: usize) -> f64 {
    (2.0 * epsilon * m as f64 / r as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceBounds {
    /// `√(2ε/(1-δ))`.
    pub col_lower_bound: f64,
    /// Whether `r <= m - δm + 1` holds.
    pub singleton_feasible: bool,
}

pub fn distance_based_bounds(delta: f64, epsilon: f64, m: usize, r: usize) -> Result<DistanceBounds> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::input(format!("delta must lie in (0, 1) (got {delta})")));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::input(format!("epsilon must lie in (0, 1] (got {epsilon})")));
    }
    let mf = m as f64;
    Ok(DistanceBounds {
        col_lower_bound: (2.0 * epsilon / (1.0 - delta)).sqrt(),
        singleton_feasible: r as f64 <= mf - delta * mf + 1.0 + 1e-9,
    })
}
