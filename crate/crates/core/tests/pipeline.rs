use gapforge::gap::{colored_to_uncolored, flatten_witness, gap_reduce, CodeShape, GapConfig};
use gapforge::instances::{gen_certified_no, gen_planted_yes, verify_witness};
use gapforge::io::{read_artifact, write_artifact, Artifact};
use gapforge::oracles::{certify_gap, GapClass};
use proptest::prelude::*;

fn desk_cfg(seed: u64) -> GapConfig {
    GapConfig {
        shape: Some(CodeShape { sigma: 2, m: 2 }),
        ..GapConfig::new(2, 0.25, seed)
    }
}

#[test]
fn reduce_write_read_certify() {
    let dir = std::env::temp_dir().join(format!("gapforge-pipeline-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();

    let no = gen_certified_no(3, 2, 2, 2, 4, 1000).unwrap();
    let (out, rep) = gap_reduce(&no, &desk_cfg(4)).unwrap();
    let path = dir.join("out.json");
    write_artifact(&path, &out.clone().into()).unwrap();
    write_artifact(dir.join("rep.json"), &rep.clone().into()).unwrap();
    let Artifact::ColoredMld(back) = read_artifact(&path).unwrap() else {
        panic!("wrong artifact type");
    };
    assert_eq!(back, out);
    let Artifact::GapReport(rep_back) = read_artifact(dir.join("rep.json")).unwrap() else {
        panic!("wrong artifact type");
    };
    assert_eq!(rep_back, rep);
    let card = certify_gap(&colored_to_uncolored(&back), rep.k_prime, 1.25, 10_000_000).unwrap();
    assert_eq!(card.class, GapClass::NoAtGamma);

    let (yes, w) = gen_planted_yes(3, 2, 2, 2, 4).unwrap();
    let (out, rep) = gap_reduce(&yes, &desk_cfg(4)).unwrap();
    let card = certify_gap(&colored_to_uncolored(&out), rep.k_prime, 1.25, 10_000_000).unwrap();
    assert_eq!(card.class, GapClass::Yes);
    let lifted = flatten_witness(&out, &rep.lift_yes_witness(&w).unwrap()).unwrap();
    assert!(verify_witness(&colored_to_uncolored(&out), &lifted).unwrap().valid);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn missing_file_is_an_io_error() {
    let e = read_artifact("/nonexistent/gapforge.json").unwrap_err();
    assert!(matches!(e, gapforge::Error::Io { .. }));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn witness_check_ignores_pick_order(seed: u64, p in prop_oneof![Just(2u64), Just(5)], k in 1usize..5, rot in 0usize..5) {
        let (inst, mut w) = gen_planted_yes(p, k, 3, 3, seed).unwrap();
        let before = verify_witness(&inst, &w).unwrap();
        let len = w.picks.len();
        w.picks.rotate_left(rot % len);
        let after = verify_witness(&inst, &w).unwrap();
        prop_assert_eq!(before, after);
        prop_assert_eq!(after.weight, k);
        prop_assert!(after.valid);
    }
}
