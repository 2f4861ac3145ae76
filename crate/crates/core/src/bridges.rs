//! Reductions between MLD and NCP, and the unit-coefficient gadget for
//! colored instances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{row_echelon, independent_rows, solve_linear, FpMatrix, FpVector};
use crate::instances::{ColoredMldInstance, MldInstance, NcpInstance, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    MldToNcp,
    NcpToMld,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BridgeReport {
    pub direction: Direction,
    /// Input vector (or generator) count.
    pub input_n: usize,
    /// Input dimension `l` (MLD) or ambient length `m` (NCP).
    pub input_dim: usize,
    pub k: usize,
    pub gamma: Option<f64>,
    pub output_n: usize,
    pub output_dim: usize,
    /// Replication count `⌈γk⌉` (MLD to NCP only).
    pub replication: Option<usize>,
    /// Generators kept as a basis (NCP to MLD only).
    pub basis: Vec<usize>,
    /// Linearly dependent generators dropped before projecting.
    pub dropped: Vec<usize>,
    /// `column_order[j]` is the input column placed at position `j`: pivot
    /// columns first, then the rest in increasing order.
    pub column_order: Vec<usize>,
}

/// `⌈γk⌉`, robust to float noise just above an integer.
pub fn replication_count(gamma: f64, k: usize) -> usize {
    (gamma * k as f64 - 1e-9).ceil().max(0.0) as usize
}

/// `v'_i = v_i^L ∘ e_i`, `t' = t^L ∘ 0^n` with `L = ⌈γk⌉`.
pub fn mld_to_ncp(inst: &MldInstance, gamma: f64) -> Result<(NcpInstance, BridgeReport)> {
    if !gamma.is_finite() || gamma < 1.0 {
        return Err(Error::input(format!("gamma must be a finite value >= 1 (got {gamma})")));
    }
    let f = inst.field();
    let n = inst.vectors().len();
    if n == 0 {
        return Err(Error::input("MLD instance has no vectors"));
    }
    let l = inst.d();
    let reps = replication_count(gamma, inst.k());
    let m = reps * l + n;
    let generators = inst
        .vectors()
        .iter()
        .enumerate()
        .map(|(i, v)| v.repeat(reps).concat(&FpVector::unit(f, n, i)))
        .collect();
    let target = inst.target().repeat(reps).concat(&FpVector::zero(f, n));
    let out = NcpInstance::new(f, m, inst.k(), generators, target)?;
    let report = BridgeReport {
        direction: Direction::MldToNcp,
        input_n: n,
        input_dim: l,
        k: inst.k(),
        gamma: Some(gamma),
        output_n: n,
        output_dim: m,
        replication: Some(reps),
        basis: Vec::new(),
        dropped: Vec::new(),
        column_order: Vec::new(),
    };
    Ok((out, report))
}

/// NCP coefficients for the image of an MLD witness: `c_i = α_i` on the
/// picked indices and 0 elsewhere.
pub fn mld_witness_to_ncp(report: &BridgeReport, w: &Witness) -> Result<Vec<u32>> {
    let mut c = vec![0u32; report.input_n];
    for p in &w.picks {
        let slot = c
            .get_mut(p.index)
            .ok_or_else(|| Error::input(format!("pick index {} out of range", p.index)))?;
        *slot = p.coeff;
    }
    Ok(c)
}

/// Project an NCP instance onto its parity side: reduce the generators to a
/// basis, bring it to systematic form `e_i ∘ v_i` by permuting columns, and
/// emit `{v_i} ∪ {e_j}` in `F_p^{m-n}` with target `t_tail − Σ t_head,i · v_i`.
///
/// A zero output target means the NCP target is a codeword (distance 0).
pub fn ncp_to_mld(inst: &NcpInstance) -> Result<(MldInstance, BridgeReport)> {
    let f = inst.field();
    let m = inst.m();
    let gens = FpMatrix::new(f, m, inst.generators().to_vec())?;
    let basis = independent_rows(&gens);
    let n = basis.len();
    if n >= m {
        return Err(Error::CodimensionZero { rank: n, m });
    }
    let dropped: Vec<usize> = (0..inst.generators().len()).filter(|i| !basis.contains(i)).collect();
    let basis_rows: Vec<FpVector> = basis.iter().map(|&i| inst.generators()[i].clone()).collect();
    let ech = row_echelon(&FpMatrix::new(f, m, basis_rows)?);
    if ech.pivots.len() != n {
        return Err(Error::Internal("basis lost rank during elimination".into()));
    }
    let column_order: Vec<usize> = ech
        .pivots
        .iter()
        .copied()
        .chain((0..m).filter(|c| !ech.pivots.contains(c)))
        .collect();
    let tail_cols = &column_order[n..];
    let v: Vec<FpVector> = ech.rows[..n]
        .iter()
        .map(|r| FpVector::from_raw(f, tail_cols.iter().map(|&c| r[c]).collect()))
        .collect();

    let t = inst.target().entries();
    let mut t_prime = FpVector::from_raw(f, tail_cols.iter().map(|&c| t[c]).collect());
    for (i, vi) in v.iter().enumerate() {
        t_prime.add_scaled(f.neg(t[column_order[i]]), vi);
    }

    // (0^n ∘ t') − t must be a codeword, checked in input coordinates.
    let mut lifted = vec![0u32; m];
    for (j, &c) in tail_cols.iter().enumerate() {
        lifted[c] = t_prime.entries()[j];
    }
    let diff = FpVector::from_raw(f, lifted).sub(inst.target());
    if solve_linear(&gens, &diff)?.is_none() {
        return Err(Error::Internal("projected target left the code's coset".into()));
    }

    let vectors: Vec<FpVector> = v
        .into_iter()
        .chain((0..m - n).map(|j| FpVector::unit(f, m - n, j)))
        .collect();
    let out = MldInstance::new(f, m - n, inst.k(), vectors, t_prime)?;
    let report = BridgeReport {
        direction: Direction::NcpToMld,
        input_n: inst.generators().len(),
        input_dim: m,
        k: inst.k(),
        gamma: None,
        output_n: m,
        output_dim: m - n,
        replication: None,
        basis,
        dropped,
        column_order,
    };
    Ok((out, report))
}

/// Map a witness of the [`ncp_to_mld`] output back to NCP coefficients over
/// the original generators. The error vector `w` has head `−α_i` for each
/// picked `v_i` and tail `β_j` for each picked `e_j`; the returned
/// coefficients express `t − w` and reach distance equal to the witness weight.
pub fn mld_witness_to_ncp_coeffs(
    inst: &NcpInstance,
    report: &BridgeReport,
    w: &Witness,
) -> Result<Vec<u32>> {
    let f = inst.field();
    let n = report.basis.len();
    let m = report.input_dim;
    let mut err = vec![0u32; m];
    for p in &w.picks {
        if p.index >= m {
            return Err(Error::input(format!("pick index {} out of range", p.index)));
        }
        let col = report.column_order[p.index];
        err[col] = if p.index < n { f.neg(p.coeff) } else { p.coeff };
    }
    let codeword = inst.target().sub(&FpVector::from_raw(f, err));
    let gens = FpMatrix::new(f, m, inst.generators().to_vec())?;
    solve_linear(&gens, &codeword)?
        .ok_or_else(|| Error::input("witness does not map to a codeword"))
}

/// Hamming distance between `t` and `Σ c_i · g_i`.
pub fn ncp_distance(inst: &NcpInstance, coeffs: &[u32]) -> Result<usize> {
    let refs: Vec<&FpVector> = inst.generators().iter().collect();
    let cw = crate::field::linear_combine(inst.field(), inst.m(), &refs, coeffs)?;
    Ok(inst.target().sub(&cw).weight())
}

/// Append `e_i ∈ F_p^k` to every vector of class `i` and `1_k` to the target.
pub fn force_unit_coefficients(inst: &ColoredMldInstance) -> ColoredMldInstance {
    let f = inst.field();
    let k = inst.k();
    let classes = inst
        .classes()
        .iter()
        .enumerate()
        .map(|(i, class)| {
            let tag = FpVector::unit(f, k, i);
            class.iter().map(|v| v.concat(&tag)).collect()
        })
        .collect();
    let ones = FpVector::from_raw(f, vec![1; k]);
    ColoredMldInstance::new(f, inst.d() + k, classes, inst.target().concat(&ones))
        .expect("gadget output is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::instances::verify_witness;
    use crate::oracles::{colored_solution, exact_mld_min, exact_ncp_min, ColoredMode, MldSearch};
    use proptest::prelude::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn mld(p: u64, k: usize, vecs: &[Vec<i64>], t: &[i64]) -> MldInstance {
        let f = fp(p);
        MldInstance::new(f, t.len(), k, vecs.iter().map(|v| FpVector::from_i64(f, v)).collect(), FpVector::from_i64(f, t))
            .unwrap()
    }

    fn ncp(p: u64, k: usize, gens: &[Vec<i64>], t: &[i64]) -> NcpInstance {
        let f = fp(p);
        NcpInstance::new(f, t.len(), k, gens.iter().map(|v| FpVector::from_i64(f, v)).collect(), FpVector::from_i64(f, t))
            .unwrap()
    }

    #[test]
    fn mld_to_ncp_layout() {
        let inst = mld(2, 2, &[vec![1, 0], vec![0, 1]], &[1, 1]);
        let (out, rep) = mld_to_ncp(&inst, 1.4).unwrap();
        assert_eq!(rep.replication, Some(3));
        assert_eq!(out.m(), 8);
        assert_eq!(out.generators()[0].entries(), &[1, 0, 1, 0, 1, 0, 1, 0]);
        assert_eq!(out.target().entries(), &[1, 1, 1, 1, 1, 1, 0, 0]);
        assert_eq!(out.k(), 2);
    }

    #[test]
    fn replication_without_slack() {
        assert_eq!(replication_count(1.5, 2), 3);
        assert_eq!(replication_count(1.1, 10), 11);
        assert_eq!(replication_count(1.4, 2), 3);
        assert!(mld_to_ncp(&mld(2, 1, &[vec![1]], &[1]), 0.5).is_err());
    }

    #[test]
    fn integral_gamma_k_boundary() {
        // No MLD solution, yet the zero codeword sits at distance exactly γk.
        let inst = mld(2, 1, &[vec![0]], &[1]);
        assert_eq!(exact_mld_min(&inst, 1, 100).unwrap(), MldSearch::NoneAtAnySize);
        let (out, _) = mld_to_ncp(&inst, 1.0).unwrap();
        assert_eq!(exact_ncp_min(&out, 100).unwrap().distance, 1);
    }

    #[test]
    fn ncp_to_mld_small_example() {
        let inst = ncp(2, 1, &[vec![1, 0]], &[1, 1]);
        let (out, rep) = ncp_to_mld(&inst).unwrap();
        assert_eq!(out.d(), 1);
        assert_eq!(out.vectors()[0].entries(), &[0]);
        assert_eq!(out.vectors()[1].entries(), &[1]);
        assert_eq!(out.target().entries(), &[1]);
        assert_eq!(rep.output_n, 2);
        assert_eq!(exact_ncp_min(&inst, 100).unwrap().distance, 1);
        assert_eq!(exact_mld_min(&out, 2, 100).unwrap().weight(), Some(1));
    }

    #[test]
    fn systematic_generators_read_off() {
        let inst = ncp(3, 1, &[vec![1, 0, 2, 1], vec![0, 1, 1, 1]], &[0, 0, 1, 2]);
        let (out, rep) = ncp_to_mld(&inst).unwrap();
        assert_eq!(rep.column_order, vec![0, 1, 2, 3]);
        assert_eq!(out.vectors()[0].entries(), &[2, 1]);
        assert_eq!(out.vectors()[1].entries(), &[1, 1]);
        assert_eq!(out.target().entries(), &[1, 2]);
    }

    #[test]
    fn dependent_generators_and_codimension_zero() {
        let inst = ncp(2, 1, &[vec![1, 1, 0], vec![1, 1, 0], vec![0, 0, 1]], &[1, 0, 0]);
        let (out, rep) = ncp_to_mld(&inst).unwrap();
        assert_eq!(rep.basis, vec![0, 2]);
        assert_eq!(rep.dropped, vec![1]);
        assert_eq!(out.d(), 1);
        let full = ncp(2, 1, &[vec![1, 0], vec![0, 1]], &[1, 0]);
        assert_eq!(ncp_to_mld(&full).unwrap_err(), Error::CodimensionZero { rank: 2, m: 2 });
    }

    #[test]
    fn ncp_to_mld_witness_back_map() {
        let inst = ncp(3, 2, &[vec![0, 1, 2, 0, 1], vec![0, 2, 1, 1, 1]], &[1, 2, 0, 2, 2]);
        let (out, rep) = ncp_to_mld(&inst).unwrap();
        let best = exact_ncp_min(&inst, 1000).unwrap().distance;
        let MldSearch::Found { weight, witness } = exact_mld_min(&out, 5, 1_000_000).unwrap() else {
            panic!("expected a solution");
        };
        assert_eq!(weight, best);
        let c = mld_witness_to_ncp_coeffs(&inst, &rep, &witness).unwrap();
        assert_eq!(ncp_distance(&inst, &c).unwrap(), weight);
    }

    #[test]
    fn gadget_shapes() {
        let f = fp(2);
        let inst = ColoredMldInstance::new(f, 1, vec![vec![FpVector::from_i64(f, &[1])]], FpVector::from_i64(f, &[1])).unwrap();
        let out = force_unit_coefficients(&inst);
        assert_eq!(out.classes()[0][0].entries(), &[1, 1]);
        assert_eq!(out.target().entries(), &[1, 1]);
    }

    #[test]
    fn gadget_kills_scaled_solutions() {
        // 2·v1 + 2·v2 = t but v1 + v2 ≠ t over F_3
        let f = fp(3);
        let v1 = FpVector::from_i64(f, &[1, 0]);
        let v2 = FpVector::from_i64(f, &[0, 1]);
        let inst = ColoredMldInstance::new(f, 2, vec![vec![v1], vec![v2]], FpVector::from_i64(f, &[2, 2])).unwrap();
        assert!(colored_solution(&inst, ColoredMode::AnyNonzero, 1000).unwrap().is_some());
        let out = force_unit_coefficients(&inst);
        assert!(colored_solution(&out, ColoredMode::AnyNonzero, 1000).unwrap().is_none());
    }

    #[test]
    fn gadget_keeps_unit_solutions() {
        for seed in 0..10 {
            let (inst, w) = crate::instances::gen_planted_yes(3, 3, 2, 3, seed).unwrap();
            let out = force_unit_coefficients(&inst);
            assert!(verify_witness(&out, &w).unwrap().valid);
        }
    }

    fn small_ncp() -> impl Strategy<Value = NcpInstance> {
        (prop_oneof![Just(2u64), Just(3u64)], 2usize..=5, 1usize..=3).prop_flat_map(|(p, m, n)| {
            let cell = 0..p as i64;
            (
                prop::collection::vec(prop::collection::vec(cell.clone(), m), n),
                prop::collection::vec(cell, m),
            )
                .prop_map(move |(g, t)| ncp(p, 2, &g, &t))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ncp_to_mld_preserves_value(inst in small_ncp()) {
            let ncp_min = exact_ncp_min(&inst, 1_000_000).unwrap();
            match ncp_to_mld(&inst) {
                Err(Error::CodimensionZero { .. }) => prop_assert_eq!(ncp_min.distance, 0),
                Err(e) => panic!("{e}"),
                Ok((out, rep)) => {
                    if ncp_min.distance == 0 {
                        prop_assert!(out.target().is_zero());
                    } else {
                        let r = exact_mld_min(&out, out.vectors().len(), 10_000_000).unwrap();
                        prop_assert_eq!(r.weight(), Some(ncp_min.distance));
                        if let MldSearch::Found { witness, .. } = r {
                            let c = mld_witness_to_ncp_coeffs(&inst, &rep, &witness).unwrap();
                            prop_assert_eq!(ncp_distance(&inst, &c).unwrap(), ncp_min.distance);
                        }
                    }
                }
            }
        }

        #[test]
        fn gadget_forces_unit(seed in 0u64..1000) {
            let (inst, _) = crate::instances::gen_planted_yes(3, 2, 2, 2, seed).unwrap();
            let out = force_unit_coefficients(&inst);
            let mut sols = 0;
            let flat = crate::gap::colored_to_uncolored(&out);
            crate::oracles::for_each_solution(out.field(), flat.vectors(), flat.target(), 2, 1_000_000, |idx, cs| {
                if idx.len() == 2 && idx[0] < 2 && idx[1] >= 2 {
                    sols += 1;
                    assert!(cs.iter().all(|&c| c == 1));
                }
            }).unwrap();
            prop_assert!(sols >= 1);
        }
    }
}
