use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use premset::engine::{
    detect_collapse, generator_balance_check, Bounds, ClosedTheory, EngineError, NId, Preset, TheoryConfig,
};
use premset::frontend::parse_arrow;
use premset::gen::{cartesian_term, random_formula, symmetric_term, Shape};
use premset::semantics::{decide_equal_cartesian, decide_equal_symmetric};
use premset::term::{ArrowTerm, Signature};

const LETTERS: [&str; 2] = ["p", "q"];

fn plain(preset: Preset) -> TheoryConfig {
    TheoryConfig::new(preset, Signature::with_letters(LETTERS)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cartesian_closure_is_sound(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = Shape::Cartesian { top: false };
        let s = random_formula(&mut rng, &LETTERS, 2, shape);
        let t = random_formula(&mut rng, &LETTERS, 1, shape);
        let (Some(a), Some(b)) = (cartesian_term(&mut rng, &s, &t, 1), cartesian_term(&mut rng, &s, &t, 1)) else {
            return Ok(());
        };
        let closed = ClosedTheory::build(&plain(Preset::Cartesian), Bounds::new(5, 1), &[a.clone(), b.clone()]).unwrap();
        if closed.equal(&a, &b).unwrap() {
            prop_assert!(decide_equal_cartesian(&a, &b).unwrap(), "{} = {}", a, b);
        }
    }

    #[test]
    fn symmetric_closure_is_sound(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_formula(&mut rng, &LETTERS, 2, Shape::Tensor);
        let a = symmetric_term(&mut rng, &s, 2);
        let b = symmetric_term(&mut rng, &s, 2);
        prop_assume!(a.endpoints().unwrap() == b.endpoints().unwrap());
        let closed = ClosedTheory::build(&plain(Preset::SymmetricAssociative), Bounds::new(5, 1), &[a.clone(), b.clone()]).unwrap();
        if closed.equal(&a, &b).unwrap() {
            prop_assert!(decide_equal_symmetric(&a, &b).unwrap(), "{} = {}", a, b);
        }
    }
}

#[test]
fn assumptions_only_merge_classes() {
    let bounds = Bounds::new(5, 1);
    let base = ClosedTheory::build(&plain(Preset::Cartesian), bounds, &[]).unwrap();
    let mut cfg = plain(Preset::Cartesian);
    cfg.assume("p1{p,p} = p2{p,p}").unwrap();
    let more = ClosedTheory::build(&cfg, bounds, &[]).unwrap();
    let u = &base.universe;
    let ids: Vec<NId> = (0..u.len() as NId).collect();
    for &i in &ids {
        for &j in &ids {
            if i < j && base.partition.same(i, j) {
                assert!(more.equal(&u.term(i), &u.term(j)).unwrap(), "{} = {}", u.term(i), u.term(j));
            }
        }
    }
    assert!(more.partition.class_count() < base.partition.class_count());
}

#[test]
fn reports_are_deterministic() {
    let mut cfg = plain(Preset::Cartesian);
    cfg.assume("iso w{p}").unwrap();
    let run = || serde_json::to_string(&detect_collapse(&cfg, Bounds::new(5, 2)).unwrap()).unwrap();
    assert_eq!(run(), run());
}

#[test]
fn the_cap_is_enforced() {
    let bounds = Bounds { cap: 10, ..Bounds::new(7, 2) };
    let err = ClosedTheory::build(&plain(Preset::Cartesian), bounds, &[]).err().unwrap();
    assert!(matches!(err, EngineError::ResourceLimit { cap: 10, .. }), "{err}");
}

#[test]
fn ill_typed_assumptions_are_rejected() {
    let mut cfg = plain(Preset::Cartesian);
    assert!(matches!(cfg.assume("p1{p,p} = id{p}"), Err(EngineError::EquationTypes { .. })));
    assert!(cfg.assume("c{p,p} = id{p*p}").is_err());
}

#[test]
fn balance_flags_lopsided_generators() {
    let t = |s: &str| parse_arrow(s).unwrap();
    let ok = generator_balance_check(&[(t("f{p->p} . g{p->p}"), t("g{p->p} . f{p->p}"))]);
    assert!(ok.holds);
    let bad: Vec<(ArrowTerm, ArrowTerm)> = vec![(t("f{p->p}"), t("g{p->p}"))];
    assert!(!generator_balance_check(&bad).holds);
}
