//! MLD / NCP instances, witnesses and seeded instance generators.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::field::{linear_combine, FpVector, PrimeField};
use crate::oracles::{colored_solution, ColoredMode};
use crate::rng::CounterRng;

fn check_vec(field: PrimeField, d: usize, v: &FpVector, what: &str) -> Result<()> {
    if v.field() != field {
        return Err(Error::input(format!("{what}: field {} differs from {field}", v.field())));
    }
    if v.dim() != d {
        return Err(Error::input(format!("{what}: dimension {} differs from {d}", v.dim())));
    }
    Ok(())
}

/// `k` color classes of vectors in `F_p^d` and a target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredMldInstance {
    field: PrimeField,
    d: usize,
    classes: Vec<Vec<FpVector>>,
    target: FpVector,
}

impl ColoredMldInstance {
    pub fn new(
        field: PrimeField,
        d: usize,
        classes: Vec<Vec<FpVector>>,
        target: FpVector,
    ) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::input("a colored instance needs k >= 1 classes"));
        }
        for (i, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(Error::input(format!("class {i} is empty")));
            }
            for (j, v) in class.iter().enumerate() {
                check_vec(field, d, v, &format!("class {i} vector {j}"))?;
            }
        }
        check_vec(field, d, &target, "target")?;
        Ok(ColoredMldInstance {
            field,
            d,
            classes,
            target,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<FpVector>] {
        &self.classes
    }

    pub fn target(&self) -> &FpVector {
        &self.target
    }

    /// Largest class size.
    pub fn max_class_size(&self) -> usize {
        self.classes.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn total_vectors(&self) -> usize {
        self.classes.iter().map(Vec::len).sum()
    }
}

/// One multiset of vectors, a target and the solution-size parameter `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MldInstance {
    field: PrimeField,
    d: usize,
    k: usize,
    vectors: Vec<FpVector>,
    target: FpVector,
}

impl MldInstance {
    pub fn new(
        field: PrimeField,
        d: usize,
        k: usize,
        vectors: Vec<FpVector>,
        target: FpVector,
    ) -> Result<Self> {
        for (j, v) in vectors.iter().enumerate() {
            check_vec(field, d, v, &format!("vector {j}"))?;
        }
        check_vec(field, d, &target, "target")?;
        Ok(MldInstance {
            field,
            d,
            k,
            vectors,
            target,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vectors(&self) -> &[FpVector] {
        &self.vectors
    }

    pub fn target(&self) -> &FpVector {
        &self.target
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k;
        self
    }
}

/// Nearest codeword instance: generators of a code in `F_p^m`, a target and a
/// distance parameter `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcpInstance {
    field: PrimeField,
    m: usize,
    k: usize,
    generators: Vec<FpVector>,
    target: FpVector,
}

impl NcpInstance {
    pub fn new(
        field: PrimeField,
        m: usize,
        k: usize,
        generators: Vec<FpVector>,
        target: FpVector,
    ) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::input("an NCP instance needs at least one generator"));
        }
        for (j, v) in generators.iter().enumerate() {
            check_vec(field, m, v, &format!("generator {j}"))?;
        }
        check_vec(field, m, &target, "target")?;
        Ok(NcpInstance {
            field,
            m,
            k,
            generators,
            target,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn generators(&self) -> &[FpVector] {
        &self.generators
    }

    pub fn target(&self) -> &FpVector {
        &self.target
    }
}

/// A selected vector with its nonzero coefficient. `class` is `None` for
/// flat (uncolored) instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pick {
    pub class: Option<usize>,
    pub index: usize,
    pub coeff: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Witness {
    pub picks: Vec<Pick>,
}

impl Witness {
    pub fn new(picks: Vec<Pick>) -> Self {
        Witness { picks }
    }

    pub fn weight(&self) -> usize {
        self.picks.len()
    }

    /// Flat witness with all coefficients 1.
    pub fn unit_flat(indices: &[usize]) -> Self {
        Witness::new(
            indices
                .iter()
                .map(|&index| Pick {
                    class: None,
                    index,
                    coeff: 1,
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessCheck {
    pub valid: bool,
    pub weight: usize,
    /// Colored instances only: one pick per class, every coefficient 1, and
    /// the picks sum to the target.
    pub one_per_class_unit: Option<bool>,
}

/// Either kind of MLD instance, for operations that accept both.
#[derive(Debug, Clone, Copy)]
pub enum MldRef<'a> {
    Colored(&'a ColoredMldInstance),
    Flat(&'a MldInstance),
}

impl<'a> From<&'a ColoredMldInstance> for MldRef<'a> {
    fn from(i: &'a ColoredMldInstance) -> Self {
        MldRef::Colored(i)
    }
}

impl<'a> From<&'a MldInstance> for MldRef<'a> {
    fn from(i: &'a MldInstance) -> Self {
        MldRef::Flat(i)
    }
}

pub fn verify_witness<'a>(inst: impl Into<MldRef<'a>>, w: &Witness) -> Result<WitnessCheck> {
    let inst = inst.into();
    let (field, d, target) = match inst {
        MldRef::Colored(c) => (c.field, c.d, &c.target),
        MldRef::Flat(f) => (f.field, f.d, &f.target),
    };
    let mut seen = HashSet::new();
    let mut vecs = Vec::with_capacity(w.picks.len());
    let mut coeffs = Vec::with_capacity(w.picks.len());
    for (n, pick) in w.picks.iter().enumerate() {
        if pick.coeff == 0 || pick.coeff >= field.p() {
            return Err(Error::input(format!(
                "pick {n}: coefficient {} is not a nonzero field element",
                pick.coeff
            )));
        }
        let v = match (inst, pick.class) {
            (MldRef::Colored(c), Some(cls)) => c
                .classes
                .get(cls)
                .and_then(|class| class.get(pick.index))
                .ok_or_else(|| {
                    Error::input(format!("pick {n}: (class {cls}, index {}) out of range", pick.index))
                })?,
            (MldRef::Flat(f), None) => f.vectors.get(pick.index).ok_or_else(|| {
                Error::input(format!("pick {n}: index {} out of range", pick.index))
            })?,
            (MldRef::Colored(_), None) => {
                return Err(Error::input(format!("pick {n}: colored instance needs a class")))
            }
            (MldRef::Flat(_), Some(_)) => {
                return Err(Error::input(format!("pick {n}: flat instance takes no class")))
            }
        };
        if !seen.insert((pick.class, pick.index)) {
            return Err(Error::input(format!("pick {n}: vector selected twice")));
        }
        vecs.push(v);
        coeffs.push(pick.coeff);
    }
    let sum = linear_combine(field, d, &vecs, &coeffs)?;
    let valid = &sum == target;
    let one_per_class_unit = match inst {
        MldRef::Colored(c) => {
            let mut classes: Vec<usize> = w.picks.iter().filter_map(|p| p.class).collect();
            classes.sort_unstable();
            let shape = classes == (0..c.k()).collect::<Vec<_>>()
                && w.picks.iter().all(|p| p.coeff == 1);
            Some(valid && shape)
        }
        MldRef::Flat(_) => None,
    };
    Ok(WitnessCheck {
        valid,
        weight: w.picks.len(),
        one_per_class_unit,
    })
}

fn random_vector(rng: &mut CounterRng, field: PrimeField, d: usize) -> FpVector {
    let p = field.p() as u64;
    FpVector::from_raw(field, (0..d).map(|_| rng.below(p) as u32).collect())
}

fn random_classes(
    rng: &mut CounterRng,
    field: PrimeField,
    k: usize,
    d: usize,
    n: usize,
) -> Vec<Vec<FpVector>> {
    (0..k)
        .map(|_| (0..n).map(|_| random_vector(rng, field, d)).collect())
        .collect()
}

/// Random colored instance with a planted one-per-class, coefficient-1
/// solution. Returns the instance and the planted witness.
pub fn gen_planted_yes(
    p: u64,
    k: usize,
    d: usize,
    n: usize,
    seed: u64,
) -> Result<(ColoredMldInstance, Witness)> {
    let field = PrimeField::new(p)?;
    if k == 0 || d == 0 || n == 0 {
        return Err(Error::input("gen_planted_yes needs k, d, n >= 1"));
    }
    let mut rng = CounterRng::new(seed);
    let classes = random_classes(&mut rng, field, k, d, n);
    let chosen: Vec<usize> = (0..k).map(|_| rng.below(n as u64) as usize).collect();
    let mut target = FpVector::zero(field, d);
    for (class, &idx) in classes.iter().zip(&chosen) {
        target.add_scaled(1, &class[idx]);
    }
    let witness = Witness::new(
        chosen
            .iter()
            .enumerate()
            .map(|(class, &index)| Pick {
                class: Some(class),
                index,
                coeff: 1,
            })
            .collect(),
    );
    let inst = ColoredMldInstance::new(field, d, classes, target)?;
    Ok((inst, witness))
}

/// Largest oracle workload `n^k (p-1)^k` accepted by [`gen_certified_no`].
pub const CERTIFIED_NO_BUDGET: u128 = 10_000_000;

/// Rejection-sample colored instances until the exact oracle certifies that
/// no one-per-class selection with nonzero coefficients hits the target.
pub fn gen_certified_no(
    p: u64,
    k: usize,
    d: usize,
    n: usize,
    seed: u64,
    max_attempts: usize,
) -> Result<ColoredMldInstance> {
    let field = PrimeField::new(p)?;
    if k == 0 || d == 0 || n == 0 {
        return Err(Error::input("gen_certified_no needs k, d, n >= 1"));
    }
    let work = (n as u128)
        .checked_pow(k as u32)
        .and_then(|x| x.checked_mul((p as u128 - 1).checked_pow(k as u32)?))
        .unwrap_or(u128::MAX);
    if work > CERTIFIED_NO_BUDGET {
        return Err(Error::budget("certified NO generation", work, CERTIFIED_NO_BUDGET));
    }
    for attempt in 0..max_attempts {
        let mut rng = CounterRng::new(crate::rng::derive(seed, attempt as u64));
        let classes = random_classes(&mut rng, field, k, d, n);
        let target = random_vector(&mut rng, field, d);
        let inst = ColoredMldInstance::new(field, d, classes, target)?;
        if colored_solution(&inst, ColoredMode::AnyNonzero, CERTIFIED_NO_BUDGET)?.is_none() {
            return Ok(inst);
        }
    }
    Err(Error::NoInstanceFound {
        attempts: max_attempts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{exact_mld_min, MldSearch};

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn pick(class: usize, index: usize, coeff: u32) -> Pick {
        Pick {
            class: Some(class),
            index,
            coeff,
        }
    }

    fn two_class() -> ColoredMldInstance {
        let f2 = f(2);
        ColoredMldInstance::new(
            f2,
            2,
            vec![
                vec![FpVector::from_i64(f2, &[1, 0])],
                vec![FpVector::from_i64(f2, &[0, 1])],
            ],
            FpVector::from_i64(f2, &[1, 1]),
        )
        .unwrap()
    }

    #[test]
    fn verify_colored_examples() {
        let inst = two_class();
        let w = Witness::new(vec![pick(0, 0, 1), pick(1, 0, 1)]);
        let c = verify_witness(&inst, &w).unwrap();
        assert!(c.valid);
        assert_eq!(c.weight, 2);
        assert_eq!(c.one_per_class_unit, Some(true));

        let w = Witness::new(vec![pick(0, 0, 1)]);
        let c = verify_witness(&inst, &w).unwrap();
        assert!(!c.valid);
        assert_eq!(c.one_per_class_unit, Some(false));
    }

    #[test]
    fn verify_flat_example() {
        let f3 = f(3);
        let inst = MldInstance::new(
            f3,
            2,
            2,
            vec![FpVector::from_i64(f3, &[1, 1]), FpVector::from_i64(f3, &[2, 2])],
            FpVector::zero(f3, 2),
        )
        .unwrap();
        let c = verify_witness(&inst, &Witness::unit_flat(&[0, 1])).unwrap();
        assert!(c.valid);
        assert_eq!(c.weight, 2);
        assert_eq!(c.one_per_class_unit, None);
    }

    #[test]
    fn verify_rejects_bad_picks() {
        let inst = two_class();
        assert!(verify_witness(&inst, &Witness::new(vec![pick(2, 0, 1)])).is_err());
        assert!(verify_witness(&inst, &Witness::new(vec![pick(0, 1, 1)])).is_err());
        assert!(verify_witness(&inst, &Witness::new(vec![pick(0, 0, 0)])).is_err());
        assert!(verify_witness(&inst, &Witness::new(vec![pick(0, 0, 1), pick(0, 0, 1)])).is_err());
        assert!(verify_witness(&inst, &Witness::unit_flat(&[0])).is_err());
    }

    #[test]
    fn verify_is_order_invariant() {
        let inst = two_class();
        let a = verify_witness(&inst, &Witness::new(vec![pick(0, 0, 1), pick(1, 0, 1)])).unwrap();
        let b = verify_witness(&inst, &Witness::new(vec![pick(1, 0, 1), pick(0, 0, 1)])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn invariants_are_enforced() {
        let f2 = f(2);
        let t = FpVector::zero(f2, 2);
        assert!(ColoredMldInstance::new(f2, 2, vec![], t.clone()).is_err());
        assert!(ColoredMldInstance::new(f2, 2, vec![vec![]], t.clone()).is_err());
        let short = FpVector::zero(f2, 1);
        assert!(ColoredMldInstance::new(f2, 2, vec![vec![short.clone()]], t.clone()).is_err());
        assert!(NcpInstance::new(f2, 2, 1, vec![], t.clone()).is_err());
        let other = FpVector::zero(f(3), 2);
        assert!(MldInstance::new(f2, 2, 1, vec![other], t).is_err());
    }

    #[test]
    fn planted_yes_verifies() {
        for seed in 0..50 {
            for p in [2, 3, 5] {
                let (inst, w) = gen_planted_yes(p, 3, 4, 5, seed).unwrap();
                let c = verify_witness(&inst, &w).unwrap();
                assert!(c.valid && c.one_per_class_unit == Some(true));
            }
        }
        let (inst, w) = gen_planted_yes(2, 2, 2, 1, 11).unwrap();
        let sum = FpVector::from_raw(
            inst.field(),
            inst.classes()[0][0]
                .entries()
                .iter()
                .zip(inst.classes()[1][0].entries())
                .map(|(a, b)| (a + b) % 2)
                .collect(),
        );
        assert_eq!(&sum, inst.target());
        assert_eq!(w.weight(), 2);
    }

    #[test]
    fn planted_yes_is_deterministic() {
        assert_eq!(gen_planted_yes(3, 2, 4, 3, 5).unwrap(), gen_planted_yes(3, 2, 4, 3, 5).unwrap());
    }

    #[test]
    fn planted_yes_oracle_minimum() {
        let (inst, _) = gen_planted_yes(2, 2, 4, 4, 7).unwrap();
        let flat = crate::gap::colored_to_uncolored(&inst);
        match exact_mld_min(&flat, 2, 10_000_000).unwrap() {
            MldSearch::Found { weight, .. } => assert!(weight <= 2),
            other => panic!("expected a solution, got {other:?}"),
        }
    }

    #[test]
    fn certified_no_has_no_colored_solution() {
        for seed in 0..20 {
            let inst = gen_certified_no(2, 2, 4, 2, seed, 1000).unwrap();
            // independent check: all 2x2 one-per-class picks with coefficient 1
            for a in &inst.classes()[0] {
                for b in &inst.classes()[1] {
                    let s: Vec<u32> = a.entries().iter().zip(b.entries()).map(|(x, y)| (x + y) % 2).collect();
                    assert_ne!(s.as_slice(), inst.target().entries());
                }
            }
        }
        let inst = gen_certified_no(3, 2, 3, 2, 1, 1000).unwrap();
        assert!(colored_solution(&inst, ColoredMode::AnyNonzero, 1000).unwrap().is_none());
    }

    #[test]
    fn certified_no_single_vector_shape() {
        let inst = gen_certified_no(2, 1, 2, 1, 0, 100).unwrap();
        assert_ne!(&inst.classes()[0][0], inst.target());
    }

    #[test]
    fn certified_no_budget_and_exhaustion() {
        assert!(matches!(
            gen_certified_no(3, 8, 2, 10, 0, 10),
            Err(Error::Budget { .. })
        ));
        // d = 1 over F_2 with a nonzero vector per class is almost always solvable.
        assert!(matches!(
            gen_certified_no(2, 1, 1, 4, 0, 0),
            Err(Error::NoInstanceFound { attempts: 0 })
        ));
    }
}
