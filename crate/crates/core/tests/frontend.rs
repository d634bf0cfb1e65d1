use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use premset::frontend::{
    apply_contraction, apply_policy, apply_thinning, parse_arrow, parse_formula, parse_sequent,
    substitute_letter, PremisePolicy, Sequent,
};
use premset::gen::{cartesian_term, random_formula, symmetric_term, Shape};
use premset::term::{Formula, Signature};

const LETTERS: [&str; 3] = ["p", "q", "r"];

fn formula(seed: u64, shape: Shape) -> Formula {
    random_formula(&mut ChaCha8Rng::seed_from_u64(seed), &LETTERS, 3, shape)
}

fn sequent(seed: u64, premises: usize) -> Sequent {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = Shape::Cartesian { top: true };
    let ps = (0..premises).map(|_| random_formula(&mut rng, &LETTERS, 2, shape)).collect();
    Sequent::new(ps, random_formula(&mut rng, &LETTERS, 2, shape))
}

fn policy() -> impl Strategy<Value = PremisePolicy> {
    prop::sample::select(PremisePolicy::ALL.to_vec())
}

proptest! {
    #[test]
    fn formulae_round_trip(seed: u64, top: bool, tensor: bool) {
        let shape = if tensor { Shape::Tensor } else { Shape::Cartesian { top } };
        let a = formula(seed, shape);
        prop_assert_eq!(parse_formula(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn cartesian_terms_round_trip(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = Shape::Cartesian { top: true };
        let s = random_formula(&mut rng, &LETTERS, 3, shape);
        let t = random_formula(&mut rng, &LETTERS, 2, shape);
        if let Some(f) = cartesian_term(&mut rng, &s, &t, 2) {
            prop_assert_eq!(parse_arrow(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn symmetric_terms_round_trip(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_formula(&mut rng, &LETTERS, 3, Shape::Tensor);
        let f = symmetric_term(&mut rng, &s, 3);
        prop_assert_eq!(parse_arrow(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn sequents_round_trip(seed: u64, n in 0usize..5) {
        let s = sequent(seed, n);
        prop_assert_eq!(parse_sequent(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn policies_are_idempotent(seed: u64, n in 0usize..6, pol in policy()) {
        let once = apply_policy(&sequent(seed, n), pol);
        prop_assert_eq!(apply_policy(&once, pol), once.clone());
    }

    #[test]
    fn sequences_never_hide_thinning_or_contraction(seed: u64, n in 0usize..5, extra: u64) {
        let s = sequent(seed, n);
        let c = formula(extra, Shape::Cartesian { top: false });
        prop_assert!(!apply_thinning(&s, &c, PremisePolicy::Sequence).1);
        if let Some((_, invisible)) = apply_contraction(&s, PremisePolicy::Sequence) {
            prop_assert!(!invisible);
        }
    }

    #[test]
    fn substitution_preserves_sequence_length(seed: u64, n in 0usize..5) {
        let s = sequent(seed, n);
        let sig = Signature::with_letters(LETTERS);
        let t = substitute_letter(&s, "q", "p", &sig).unwrap();
        prop_assert_eq!(apply_policy(&t, PremisePolicy::Sequence).premises.len(), n);
        prop_assert!(apply_policy(&t, PremisePolicy::Set).premises.len()
            <= apply_policy(&s, PremisePolicy::Set).premises.len());
    }

    #[test]
    fn multisets_never_hide_thinning_or_contraction(seed: u64, n in 0usize..5, extra: u64) {
        let s = sequent(seed, n);
        let c = formula(extra, Shape::Cartesian { top: false });
        prop_assert!(!apply_thinning(&s, &c, PremisePolicy::Multiset).1);
        if let Some((_, invisible)) = apply_contraction(&s, PremisePolicy::Multiset) {
            prop_assert!(!invisible);
        }
    }
}

#[test]
fn set_policy_hides_thinning_after_substitution() {
    let s = parse_sequent("p, q |- p").unwrap();
    let sig = Signature::with_letters(["p", "q"]);
    let t = substitute_letter(&s, "q", "p", &sig).unwrap();
    assert_eq!(apply_policy(&s, PremisePolicy::Set).premises.len(), 2);
    let n = apply_policy(&t, PremisePolicy::Set);
    assert_eq!(n.to_string(), "p |- p");
    let (_, invisible) = apply_thinning(&parse_sequent("p |- p").unwrap(), &Formula::letter("p"), PremisePolicy::Set);
    assert!(invisible);
}
