use schreier_core::indices::{cb_rank_finite, ExplicitFamily};
use schreier_core::num::q;
use schreier_core::tensor::{injective_norm, square_block_projection, TensorOp};
use schreier_core::{Capacity, FinSet, NormEngine, Ordinal, RatVec, Schreier, SpaceSpec};

fn set(text: &str) -> FinSet {
    FinSet::parse(text).unwrap()
}

#[test]
fn low_schreier_families() {
    let s = Schreier::new(22);
    let one = Ordinal::from_nat(1);
    assert!(s.member(&set("2,3"), &one));
    assert!(!s.member(&set("2,3,4"), &one));
    let two = Ordinal::from_nat(2);
    // {2,3} then {4..7}: two S_1 blocks with 2 <= min
    assert!(s.member(&set("2,3,4,5,6,7"), &two));
    assert!(!s.member(&set("2,3,4,5,6,7,8"), &two));
    let w: Ordinal = "w".parse().unwrap();
    assert!(s.member(&set("3,4,5"), &w));
}

#[test]
fn schreier_norms_are_exact() {
    let engine = NormEngine::new(Capacity::default());
    let x1 = SpaceSpec::schreier(Ordinal::from_nat(1));
    let x = RatVec::from_pairs([(1, q(1, 1)), (2, q(1, 2)), (3, q(1, 2)), (4, q(-1, 3))]).unwrap();
    // {2,3} carries mass 1, singletons carry at most 1
    assert_eq!(engine.norm(&x1, &x).unwrap(), q(1, 1));
    let flat = RatVec::from_pairs((3..=8).map(|i| (i, q(1, 1)))).unwrap();
    // {5,6,7,8} is admissible, any five of 3..=8 are not
    assert_eq!(engine.norm(&x1, &flat).unwrap(), q(4, 1));
}

#[test]
fn finite_family_rank() {
    let empty_only = ExplicitFamily::new(vec![FinSet::empty()]).unwrap();
    assert_eq!(cb_rank_finite(&empty_only), 1);
    let chain = ExplicitFamily::closure(vec![set("1,2,3")]);
    assert_eq!(cb_rank_finite(&chain), 4);
}

#[test]
fn tensor_square_blocks_sum_back() {
    let c0: SpaceSpec = "c0".parse().unwrap();
    let x1 = SpaceSpec::schreier(Ordinal::from_nat(1));
    let u = TensorOp::from_entries(c0.clone(), x1.clone(), [((1, 3), q(1, 1)), ((4, 2), q(-2, 3)), ((2, 2), q(1, 2))]).unwrap();
    let mut total = TensorOp::zero(c0, x1);
    for n in 1..=4 {
        total.add_scaled(&square_block_projection(&u, n), &q(1, 1));
    }
    assert_eq!(total, u);
    let engine = NormEngine::new(Capacity::default());
    assert_eq!(injective_norm(&engine, &u).unwrap(), injective_norm(&engine, &u.transpose()).unwrap());
}
