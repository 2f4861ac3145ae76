//! Gap amplification by composing an outer and an inner MLD instance.
//!
//! Every outer vector `v_i` gets its own diagonal block holding `-t` (the
//! inner target), and a full copy of the inner vectors lives in that block.
//! Picking `v_i` therefore forces an inner solution inside block `i`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FpVector;
use crate::gap::OUTPUT_BUDGET;
use crate::instances::{MldInstance, Pick, Witness};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplifyReport {
    pub k1: usize,
    pub k2: usize,
    pub k_prime: usize,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma_prime: f64,
    /// Inner dimension.
    pub m1: usize,
    /// Outer dimension.
    pub m2: usize,
    pub out_dim: usize,
    pub n_outer: usize,
    pub n_inner: usize,
}

/// `γ1·γ2·(1 − 1/k1)`.
pub fn composed_gamma(k1: usize, gamma1: f64, gamma2: f64) -> f64 {
    gamma1 * gamma2 * (1.0 - 1.0 / k1 as f64)
}

/// Compose `outer = (V, s, k2)` with `inner = (U, t, k1)`.
///
/// Output vectors: the `|V|` outer vectors `(v_i | -t in block i)`, then for
/// each block `i` in order the inner vectors `(0 | u in block i)`. Target
/// `(s | 0)`, parameter `k' = k2 + k1·k2`.
pub fn compose_amplify(
    outer: &MldInstance,
    outer_gamma: f64,
    inner: &MldInstance,
    inner_gamma: f64,
) -> Result<(MldInstance, AmplifyReport)> {
    let f = outer.field();
    if inner.field() != f {
        return Err(Error::input(format!(
            "field mismatch: outer p = {}, inner p = {}",
            f.p(),
            inner.field().p()
        )));
    }
    let (n_v, n_u) = (outer.vectors().len(), inner.vectors().len());
    if n_v == 0 || n_u == 0 {
        return Err(Error::input("composition needs nonempty vector sets"));
    }
    let (m1, m2) = (inner.d(), outer.d());
    let out_dim = m2 + n_v * m1;
    let count = (n_v + n_v * n_u) as u128;
    let entries = count.saturating_mul(out_dim as u128);
    if entries > OUTPUT_BUDGET {
        return Err(Error::budget("composed instance entries", entries, OUTPUT_BUDGET));
    }
    let minus_t: Vec<u32> = inner.target().entries().iter().map(|&x| f.neg(x)).collect();

    let mut vectors = Vec::with_capacity(count as usize);
    for (i, v) in outer.vectors().iter().enumerate() {
        let mut e = vec![0u32; out_dim];
        e[..m2].copy_from_slice(v.entries());
        let off = m2 + i * m1;
        e[off..off + m1].copy_from_slice(&minus_t);
        vectors.push(FpVector::from_raw(f, e));
    }
    for i in 0..n_v {
        let off = m2 + i * m1;
        for u in inner.vectors() {
            let mut e = vec![0u32; out_dim];
            e[off..off + m1].copy_from_slice(u.entries());
            vectors.push(FpVector::from_raw(f, e));
        }
    }
    let mut t = outer.target().entries().to_vec();
    t.resize(out_dim, 0);
    let (k1, k2) = (inner.k(), outer.k());
    let k_prime = k2 + k1 * k2;
    let out = MldInstance::new(f, out_dim, k_prime, vectors, FpVector::from_raw(f, t))?;
    let report = AmplifyReport {
        k1,
        k2,
        k_prime,
        gamma1: inner_gamma,
        gamma2: outer_gamma,
        gamma_prime: composed_gamma(k1, inner_gamma, outer_gamma),
        m1,
        m2,
        out_dim,
        n_outer: n_v,
        n_inner: n_u,
    };
    Ok((out, report))
}

/// Witness of the composition from an outer witness and an inner witness
/// (both flat). Each outer pick `(i, α)` contributes `α·v_i` and the inner
/// picks scaled by `α` inside block `i`.
pub fn compose_witness(
    report: &AmplifyReport,
    field: crate::field::PrimeField,
    outer: &Witness,
    inner: &Witness,
) -> Result<Witness> {
    let mut picks = Vec::with_capacity(outer.weight() * (1 + inner.weight()));
    for o in &outer.picks {
        if o.index >= report.n_outer {
            return Err(Error::input(format!("outer index {} out of range", o.index)));
        }
        picks.push(Pick {
            class: None,
            index: o.index,
            coeff: o.coeff,
        });
        for u in &inner.picks {
            if u.index >= report.n_inner {
                return Err(Error::input(format!("inner index {} out of range", u.index)));
            }
            picks.push(Pick {
                class: None,
                index: report.n_outer + o.index * report.n_inner + u.index,
                coeff: field.mul(o.coeff, u.coeff),
            });
        }
    }
    Ok(Witness::new(picks))
}

/// Self-compose `inst` (claimed gap `gamma` at parameter `k`) until the
/// reported gap reaches `target_gamma`.
pub fn amplify_to_gamma(
    inst: &MldInstance,
    k: usize,
    gamma: f64,
    target_gamma: f64,
) -> Result<(MldInstance, Vec<AmplifyReport>)> {
    if !gamma.is_finite() || gamma <= 1.0 {
        return Err(Error::input(format!("base gamma must exceed 1 (got {gamma})")));
    }
    if k < 2 {
        return Err(Error::input("amplification needs k >= 2"));
    }
    if !target_gamma.is_finite() {
        return Err(Error::input("target gamma must be finite"));
    }
    let mut cur = inst.clone().with_k(k);
    let (mut k, mut gamma) = (k, gamma);
    let mut chain = Vec::new();
    while gamma < target_gamma {
        let next = composed_gamma(k, gamma, gamma);
        if next <= gamma {
            return Err(Error::NonAmplifying {
                k,
                gamma,
                gamma_prime: next,
            });
        }
        match compose_amplify(&cur, gamma, &cur, gamma) {
            Ok((out, rep)) => {
                k = rep.k_prime;
                gamma = rep.gamma_prime;
                cur = out;
                chain.push(rep);
            }
            Err(Error::Budget { what, needed, budget }) => {
                return Err(Error::AmplifyBudget {
                    what,
                    needed,
                    budget,
                    chain,
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok((cur, chain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::instances::verify_witness;
    use crate::oracles::{exact_mld_min, MldSearch};

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    fn inst(p: u64, k: usize, vecs: &[&[i64]], t: &[i64]) -> MldInstance {
        let f = PrimeField::new(p).unwrap();
        MldInstance::new(
            f,
            t.len(),
            k,
            vecs.iter().map(|v| FpVector::from_i64(f, v)).collect(),
            FpVector::from_i64(f, t),
        )
        .unwrap()
    }

    #[test]
    fn smallest_composition() {
        let outer = inst(2, 1, &[&[1]], &[1]);
        let inner = inst(2, 1, &[&[1]], &[1]);
        let (out, rep) = compose_amplify(&outer, 1.0, &inner, 1.0).unwrap();
        assert_eq!(out.vectors().len(), 2);
        assert_eq!(out.d(), 2);
        assert_eq!(rep.k_prime, 2);
        assert_eq!(out.vectors()[0].entries(), &[1, 1]);
        assert_eq!(out.vectors()[1].entries(), &[0, 1]);
        assert_eq!(out.target().entries(), &[1, 0]);
    }

    #[test]
    fn dimension_accounting() {
        let outer = inst(3, 2, &[&[1, 0], &[0, 1], &[1, 1]], &[1, 1]);
        let inner = inst(3, 1, &[&[1, 2, 0], &[2, 2, 1]], &[1, 0, 0]);
        let (out, rep) = compose_amplify(&outer, 1.5, &inner, 1.2).unwrap();
        assert_eq!(rep.out_dim, 2 + 3 * 3);
        assert_eq!(out.d(), rep.out_dim);
        assert_eq!(out.vectors().len(), 3 + 3 * 2);
        assert_eq!(rep.k_prime, 2 + 2);
        assert!((rep.gamma_prime - 1.5 * 1.2 * 0.0).abs() < 1e-12);
        // -t sits in block 1 of the second outer vector
        assert_eq!(&out.vectors()[1].entries()[5..8], &[2, 0, 0]);
    }

    #[test]
    fn field_mismatch_rejected() {
        let a = inst(2, 1, &[&[1]], &[1]);
        let b = inst(3, 1, &[&[1]], &[1]);
        assert!(compose_amplify(&a, 1.0, &b, 1.0).is_err());
    }

    #[test]
    fn yes_yes_desk_pair() {
        let outer = inst(2, 1, &[&[1, 0], &[1, 1]], &[1, 1]);
        let inner = inst(2, 1, &[&[0, 1], &[1, 0]], &[1, 0]);
        let (out, rep) = compose_amplify(&outer, 1.0, &inner, 1.0).unwrap();
        match exact_mld_min(&out, 2, 1_000_000).unwrap() {
            MldSearch::Found { weight, .. } => assert!(weight <= rep.k_prime),
            other => panic!("{other:?}"),
        }
        let w = compose_witness(&rep, f2(), &Witness::unit_flat(&[1]), &Witness::unit_flat(&[1])).unwrap();
        assert!(verify_witness(&out, &w).unwrap().valid);
    }

    #[test]
    fn amplify_identity_and_non_amplifying() {
        let base = inst(2, 2, &[&[1, 0], &[0, 1]], &[1, 1]);
        let (out, chain) = amplify_to_gamma(&base, 2, 1.4, 1.3).unwrap();
        assert!(chain.is_empty());
        assert_eq!(out.vectors(), base.vectors());
        match amplify_to_gamma(&base, 2, 1.4, 2.0) {
            Err(Error::NonAmplifying { gamma_prime, .. }) => assert!((gamma_prime - 0.98).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        match amplify_to_gamma(&base, 3, 1.45, 2.0) {
            Err(Error::NonAmplifying { gamma_prime, .. }) => {
                assert!((gamma_prime - 1.45 * 1.45 * 2.0 / 3.0).abs() < 1e-12)
            }
            other => panic!("{other:?}"),
        }
        assert!(amplify_to_gamma(&base, 1, 1.4, 2.0).is_err());
        assert!(amplify_to_gamma(&base, 2, 1.0, 2.0).is_err());
    }

    #[test]
    fn amplify_chain_recurrence() {
        let base = inst(2, 3, &[&[1, 0], &[0, 1]], &[1, 1]);
        let (out, chain) = amplify_to_gamma(&base, 3, 1.6, 2.5).unwrap();
        assert_eq!(chain.len(), 2);
        assert_eq!(chain[0].k_prime, 3 + 9);
        assert_eq!(chain[1].k1, 12);
        assert_eq!(chain[1].k_prime, 12 + 144);
        assert!(chain[1].gamma_prime >= 2.5);
        assert_eq!(out.k(), 156);
        assert_eq!(out.vectors().len(), 6 + 36);
    }

    #[test]
    fn amplify_budget_keeps_partial_chain() {
        let vecs: Vec<Vec<i64>> = (0..20).map(|i| vec![(i % 2) as i64, 1]).collect();
        let refs: Vec<&[i64]> = vecs.iter().map(Vec::as_slice).collect();
        let base = inst(2, 4, &refs, &[1, 1]);
        match amplify_to_gamma(&base, 4, 1.9, 1e9) {
            Err(Error::AmplifyBudget { chain, .. }) => assert!(!chain.is_empty()),
            other => panic!("{:?}", other.map(|x| x.1)),
        }
    }
}
