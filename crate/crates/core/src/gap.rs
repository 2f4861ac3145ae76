//! The gap-creating reduction for colored MLD.
//!
//! [`build_gap_bipartite`] turns a colored instance and a code into an A-side
//! (one family per color class, carrying one-hot codeword symbols) and a
//! B-side (one family per code coordinate, carrying negated one-hot `k`-tuples).
//! [`duplicate_stretch`] replicates the A-side over `w = m/k` disjoint copies so
//! that a YES solution costs exactly `k' = 2m`, and [`gap_reduce`] wires the
//! code construction and both steps together.

use crate::codes::{
    build_random_code, collision_search_cost, find_colliding_subset, merge_code, message_length,
    random_code_params, Code, COLLISION_BUDGET,
};
use crate::error::{Error, Result};
use crate::field::{FpVector, PrimeField};
use crate::instances::{ColoredMldInstance, MldInstance, Pick, Witness};
use crate::rng::derive;

/// Largest number of B-side tuples `sigma^k` materialized per coordinate.
pub const TUPLE_BUDGET: u128 = 1_000_000;

/// Largest number of field entries (vectors × dimension) a construction may
/// emit.
pub const OUTPUT_BUDGET: u128 = 200_000_000;

/// Coordinates of the four blocks of the bipartite output:
/// `[ v (d) | one-hot symbols (m·k·sigma) | class indicator (k) | coordinate indicator (m) ]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub d: usize,
    pub k: usize,
    pub m: usize,
    pub sigma: usize,
    pub dim: usize,
}

impl Layout {
    pub fn new(d: usize, k: usize, m: usize, sigma: usize) -> Self {
        Layout {
            d,
            k,
            m,
            sigma,
            dim: d + m * k * sigma + k + m,
        }
    }

    /// Start of the mini-block for code coordinate `j` and class `i`
    /// (both 0-based).
    pub fn symbol_block(&self, j: usize, i: usize) -> usize {
        self.d + j * self.k * self.sigma + i * self.sigma
    }

    pub fn class_block(&self) -> usize {
        self.d + self.m * self.k * self.sigma
    }

    pub fn coordinate_block(&self) -> usize {
        self.class_block() + self.k
    }
}

/// The A/B vector families before duplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGapOutput {
    pub field: PrimeField,
    pub layout: Layout,
    /// `a_classes[i][v]` is the A vector of the `v`-th vector of class `i`.
    pub a_classes: Vec<Vec<FpVector>>,
    /// `b_classes[j][t]` is the B vector of coordinate `j` for tuple index `t`.
    pub b_classes: Vec<Vec<FpVector>>,
    pub target: FpVector,
    /// Vector `v` of every class is assigned codeword `v`.
    pub code: Code,
}

/// Symbols of the `idx`-th tuple in `Σ^k`, first symbol most significant.
pub fn tuple_symbols(idx: usize, sigma: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    let mut x = idx;
    for slot in out.iter_mut().rev() {
        *slot = x % sigma;
        x /= sigma;
    }
    out
}

/// Inverse of [`tuple_symbols`].
pub fn tuple_index(symbols: &[usize], sigma: usize) -> usize {
    symbols.iter().fold(0, |acc, &s| acc * sigma + s)
}

fn tuple_count(sigma: u64, k: usize) -> Result<usize> {
    let count = (sigma as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if count > TUPLE_BUDGET {
        return Err(Error::budget("B-side tuples sigma^k", count, TUPLE_BUDGET));
    }
    Ok(count as usize)
}

pub fn build_gap_bipartite(inst: &ColoredMldInstance, code: &Code) -> Result<BipartiteGapOutput> {
    let k = inst.k();
    let d = inst.d();
    let field = inst.field();
    let sigma = code.sigma() as usize;
    let m = code.m();
    if code.n() < inst.max_class_size() {
        return Err(Error::input(format!(
            "code has {} words but a class has {} vectors",
            code.n(),
            inst.max_class_size()
        )));
    }
    let tuples = tuple_count(code.sigma(), k)?;
    let layout = Layout::new(d, k, m, sigma);
    let count = inst.total_vectors() as u128 + (m as u128) * tuples as u128;
    let entries = count.saturating_mul(layout.dim as u128);
    if entries > OUTPUT_BUDGET {
        return Err(Error::budget("bipartite output entries", entries, OUTPUT_BUDGET));
    }
    let minus_one = field.neg(1);

    let a_classes = inst
        .classes()
        .iter()
        .enumerate()
        .map(|(i, class)| {
            class
                .iter()
                .enumerate()
                .map(|(v, vec)| {
                    let word = &code.words()[v];
                    let mut e = vec![0u32; layout.dim];
                    e[..d].copy_from_slice(vec.entries());
                    for (j, &sym) in word.iter().enumerate() {
                        e[layout.symbol_block(j, i) + sym as usize] = 1;
                    }
                    e[layout.class_block() + i] = 1;
                    FpVector::from_raw(field, e)
                })
                .collect()
        })
        .collect();

    let b_classes = (0..m)
        .map(|j| {
            (0..tuples)
                .map(|t| {
                    let mut e = vec![0u32; layout.dim];
                    for (i, s) in tuple_symbols(t, sigma, k).into_iter().enumerate() {
                        e[layout.symbol_block(j, i) + s] = minus_one;
                    }
                    e[layout.coordinate_block() + j] = 1;
                    FpVector::from_raw(field, e)
                })
                .collect()
        })
        .collect();

    let mut t = vec![0u32; layout.dim];
    t[..d].copy_from_slice(inst.target().entries());
    for x in &mut t[layout.class_block()..] {
        *x = 1;
    }
    Ok(BipartiteGapOutput {
        field,
        layout,
        a_classes,
        b_classes,
        target: FpVector::from_raw(field, t),
        code: code.clone(),
    })
}

impl BipartiteGapOutput {
    /// The families as one colored instance: classes `A_1..A_k, B_1..B_m`.
    pub fn as_colored(&self) -> ColoredMldInstance {
        let classes = self
            .a_classes
            .iter()
            .chain(&self.b_classes)
            .cloned()
            .collect();
        ColoredMldInstance::new(self.field, self.layout.dim, classes, self.target.clone())
            .expect("bipartite output is well formed")
    }

    /// Weight `k + m` witness built from a one-per-class solution of the
    /// input: the chosen A vectors plus, for each coordinate `j`, the B vector
    /// whose tuple lists the chosen codewords' symbols at `j`.
    pub fn canonical_witness(&self, input: &Witness) -> Result<Witness> {
        let chosen = one_per_class(input, self.layout.k)?;
        let mut picks: Vec<Pick> = chosen
            .iter()
            .enumerate()
            .map(|(i, &v)| Pick {
                class: Some(i),
                index: v,
                coeff: 1,
            })
            .collect();
        for j in 0..self.layout.m {
            picks.push(Pick {
                class: Some(self.layout.k + j),
                index: self.tuple_for(&chosen, j),
                coeff: 1,
            });
        }
        Ok(Witness::new(picks))
    }

    fn tuple_for(&self, chosen: &[usize], j: usize) -> usize {
        let symbols: Vec<usize> = chosen
            .iter()
            .map(|&v| self.code.words()[v][j] as usize)
            .collect();
        tuple_index(&symbols, self.layout.sigma)
    }
}

/// Indices chosen per class from a one-per-class witness.
fn one_per_class(w: &Witness, k: usize) -> Result<Vec<usize>> {
    let mut chosen = vec![None; k];
    for p in &w.picks {
        let c = p
            .class
            .filter(|&c| c < k)
            .ok_or_else(|| Error::input("witness pick has no valid class"))?;
        if p.coeff != 1 || chosen[c].replace(p.index).is_some() {
            return Err(Error::input("witness is not one-per-class with unit coefficients"));
        }
    }
    chosen
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| Error::input(format!("witness misses class {i}"))))
        .collect()
}

/// Replicate the A-side over `w = m/k` disjoint copies of the layout. Output
/// classes: `A'_{l,i}` in `(l, i)` order, then `B'_1..B'_m`, so `k' = 2m`.
pub fn duplicate_stretch(bip: &BipartiteGapOutput) -> Result<ColoredMldInstance> {
    let Layout { k, m, dim, .. } = bip.layout;
    if m % k != 0 {
        return Err(Error::input(format!("k = {k} does not divide m = {m}")));
    }
    let w = m / k;
    let big = w * dim;
    let count = (w * bip.a_classes.iter().map(Vec::len).sum::<usize>()
        + bip.b_classes.iter().map(Vec::len).sum::<usize>()) as u128;
    let entries = count.saturating_mul(big as u128);
    if entries > OUTPUT_BUDGET {
        return Err(Error::budget("stretched output entries", entries, OUTPUT_BUDGET));
    }
    let f = bip.field;
    let mut classes = Vec::with_capacity(w * k + m);
    for l in 0..w {
        for a_class in &bip.a_classes {
            classes.push(
                a_class
                    .iter()
                    .map(|a| {
                        let mut e = vec![0u32; big];
                        e[l * dim..(l + 1) * dim].copy_from_slice(a.entries());
                        FpVector::from_raw(f, e)
                    })
                    .collect(),
            );
        }
    }
    for b_class in &bip.b_classes {
        classes.push(b_class.iter().map(|b| b.repeat(w)).collect());
    }
    ColoredMldInstance::new(f, big, classes, bip.target.repeat(w))
}

/// Map a bipartite witness (one pick per `A_i` and per `B_j`) onto the
/// stretched instance: every copy of the A picks plus the same B picks.
pub fn stretch_witness(layout: &Layout, bip_witness: &Witness) -> Result<Witness> {
    let Layout { k, m, .. } = *layout;
    if m % k != 0 {
        return Err(Error::input(format!("k = {k} does not divide m = {m}")));
    }
    let w = m / k;
    let chosen = one_per_class(bip_witness, k + m)?;
    let mut picks = Vec::with_capacity(w * k + m);
    for l in 0..w {
        for (i, &index) in chosen[..k].iter().enumerate() {
            picks.push(Pick {
                class: Some(l * k + i),
                index,
                coeff: 1,
            });
        }
    }
    for (j, &index) in chosen[k..].iter().enumerate() {
        picks.push(Pick {
            class: Some(w * k + j),
            index,
            coeff: 1,
        });
    }
    Ok(Witness::new(picks))
}

/// Forget the coloring: concatenate the classes in order. `k` is kept.
pub fn colored_to_uncolored(inst: &ColoredMldInstance) -> MldInstance {
    let vectors = inst.classes().iter().flatten().cloned().collect();
    MldInstance::new(inst.field(), inst.d(), inst.k(), vectors, inst.target().clone())
        .expect("colored instance is well formed")
}

/// Position of `(class, index)` in [`colored_to_uncolored`]'s flat list.
pub fn flatten_witness(inst: &ColoredMldInstance, w: &Witness) -> Result<Witness> {
    let offsets: Vec<usize> = inst
        .classes()
        .iter()
        .scan(0, |acc, c| {
            let o = *acc;
            *acc += c.len();
            Some(o)
        })
        .collect();
    let picks = w
        .picks
        .iter()
        .map(|p| {
            let c = p
                .class
                .filter(|&c| c < inst.k())
                .ok_or_else(|| Error::input("pick has no valid class"))?;
            Ok(Pick {
                class: None,
                index: offsets[c] + p.index,
                coeff: p.coeff,
            })
        })
        .collect::<Result<_>>()?;
    Ok(Witness::new(picks))
}

/// Code alphabet and length supplied directly instead of the asymptotic
/// parameter formula (desk-scale runs).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeShape {
    pub sigma: u64,
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapConfig {
    pub c: u64,
    pub epsilon: f64,
    pub seed: u64,
    pub shape: Option<CodeShape>,
    /// Redraw the code until `Col_ε > ck` is certified exactly (when the
    /// collision search fits its budget).
    pub certify_code: bool,
    pub max_code_attempts: usize,
}

impl GapConfig {
    pub fn new(c: u64, epsilon: f64, seed: u64) -> Self {
        GapConfig {
            c,
            epsilon,
            seed,
            shape: None,
            certify_code: true,
            max_code_attempts: 1000,
        }
    }
}

/// Parameters of one [`gap_reduce`] run, plus the code it used.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionReport {
    pub p: u32,
    pub k: usize,
    pub k_prime: usize,
    pub d: usize,
    pub d_prime: usize,
    pub sigma: u64,
    pub m: usize,
    pub w: usize,
    pub epsilon: f64,
    pub c: u64,
    pub seed: u64,
    pub r: u32,
    /// Coordinates merged per output symbol.
    pub g: usize,
    /// `Some(true)` when `Col_ε(code) > ck` was verified exactly; `None` when
    /// the check did not fit its budget.
    pub code_certified: Option<bool>,
    pub code_attempts: usize,
    pub code: Code,
}

impl ReductionReport {
    pub fn layout(&self) -> Layout {
        Layout::new(self.d, self.k, self.m, self.sigma as usize)
    }

    /// Weight-`k'` witness of the output for a one-per-class, unit-coefficient
    /// witness of the input.
    pub fn lift_yes_witness(&self, input: &Witness) -> Result<Witness> {
        let layout = self.layout();
        let chosen = one_per_class(input, self.k)?;
        let mut bip_picks: Vec<Pick> = chosen
            .iter()
            .enumerate()
            .map(|(i, &index)| Pick {
                class: Some(i),
                index,
                coeff: 1,
            })
            .collect();
        for j in 0..self.m {
            let symbols: Vec<usize> = chosen
                .iter()
                .map(|&v| {
                    self.code
                        .words()
                        .get(v)
                        .map(|w| w[j] as usize)
                        .ok_or_else(|| Error::input(format!("index {v} has no codeword")))
                })
                .collect::<Result<_>>()?;
            bip_picks.push(Pick {
                class: Some(self.k + j),
                index: tuple_index(&symbols, layout.sigma),
                coeff: 1,
            });
        }
        stretch_witness(&layout, &Witness::new(bip_picks))
    }
}

/// Largest divisor of `q` not exceeding `limit` (at least 1).
fn largest_divisor_at_most(q: usize, limit: usize) -> usize {
    (1..=limit.min(q).max(1)).rev().find(|g| q.is_multiple_of(*g)).unwrap_or(1)
}

/// Parameters [`gap_reduce`] would use, computed without building anything.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionPlan {
    /// Code size: the largest class (at least 2).
    pub n: usize,
    pub base_sigma: u64,
    pub base_m: usize,
    pub g: usize,
    pub sigma: u64,
    pub m: usize,
    pub w: usize,
    pub r: u32,
    pub k_prime: usize,
    pub d_prime: usize,
    /// Field entries the output instance would hold.
    pub output_entries: u128,
}

pub fn plan_reduction(inst: &ColoredMldInstance, cfg: &GapConfig) -> Result<ReductionPlan> {
    let k = inst.k();
    let n = inst.max_class_size().max(2);
    let (base_sigma, base_m, g) = match cfg.shape {
        Some(CodeShape { sigma, m }) => {
            if m == 0 || m % k != 0 {
                return Err(Error::input(format!("code length {m} must be a positive multiple of k = {k}")));
            }
            if !(cfg.epsilon > 0.0 && cfg.epsilon < 1.0) {
                return Err(Error::input("epsilon must lie in (0, 1)"));
            }
            (sigma, m, 1)
        }
        None => {
            let params = random_code_params(n, k, cfg.c, cfg.epsilon)?;
            // merge arity log n / (k log |Σ'|), restricted to divisors of m'/k
            let target_g = ((n as f64).ln() / (k as f64 * (params.sigma as f64).ln())).floor() as usize;
            let g = largest_divisor_at_most(params.m / k, target_g.max(1));
            (params.sigma, params.m, g)
        }
    };
    let sigma = (base_sigma as u128).checked_pow(g as u32).unwrap_or(u128::MAX);
    if sigma > crate::codes::MAX_SIGMA as u128 {
        return Err(Error::input("merged alphabet exceeds 2^32"));
    }
    let sigma = sigma as u64;
    let m = base_m / g;
    let w = m / k;
    let layout = Layout::new(inst.d(), k, m, sigma as usize);
    let tuples = (sigma as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    let out_vectors = ((w * inst.total_vectors()) as u128).saturating_add((m as u128).saturating_mul(tuples));
    Ok(ReductionPlan {
        n,
        base_sigma,
        base_m,
        g,
        sigma,
        m,
        w,
        r: message_length(n, sigma),
        k_prime: 2 * m,
        d_prime: w * layout.dim,
        output_entries: out_vectors.saturating_mul((w * layout.dim) as u128),
    })
}

/// Code construction → bipartite gap construction → duplication.
pub fn gap_reduce(
    inst: &ColoredMldInstance,
    cfg: &GapConfig,
) -> Result<(ColoredMldInstance, ReductionReport)> {
    let plan = plan_reduction(inst, cfg)?;
    let ReductionPlan { n, base_sigma, base_m, g, sigma, m, w, .. } = plan;
    let k = inst.k();
    tuple_count(sigma, k)?;
    if plan.output_entries > OUTPUT_BUDGET {
        return Err(Error::budget("reduction output entries", plan.output_entries, OUTPUT_BUDGET));
    }

    let ck = (cfg.c as usize).saturating_mul(k);
    let certifiable = cfg.certify_code && collision_search_cost(n, ck) <= COLLISION_BUDGET;
    let mut attempts = 0;
    let (code, certified) = loop {
        if attempts >= cfg.max_code_attempts.max(1) {
            return Err(Error::NoCertifiedCode { attempts });
        }
        let seed = derive(cfg.seed, attempts as u64);
        attempts += 1;
        let raw = build_random_code(n, base_sigma, base_m, seed)?;
        let code = merge_code(&raw, g)?;
        if !certifiable {
            break (code, None);
        }
        match find_colliding_subset(&code, cfg.epsilon, ck, COLLISION_BUDGET) {
            Ok(None) => break (code, Some(true)),
            Ok(Some(_)) => continue,
            // agreement table too large: report uncertified
            Err(Error::Budget { .. }) => break (code, None),
            Err(e) => return Err(e),
        }
    };

    let bip = build_gap_bipartite(inst, &code)?;
    let out = duplicate_stretch(&bip)?;
    let report = ReductionReport {
        p: inst.field().p(),
        k,
        k_prime: 2 * m,
        d: inst.d(),
        d_prime: plan.d_prime,
        sigma,
        m,
        w,
        epsilon: cfg.epsilon,
        c: cfg.c,
        seed: cfg.seed,
        r: plan.r,
        g,
        code_certified: certified,
        code_attempts: attempts,
        code,
    };
    Ok((out, report))
}
