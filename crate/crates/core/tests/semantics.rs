use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use premset::frontend::parse_arrow;
use premset::gen::{cartesian_term, random_formula, symmetric_term, Shape};
use premset::semantics::{
    decide_equal_cartesian, decide_equal_symmetric, eval_finite_model, interpret_cartesian,
    interpret_symmetric, FiniteModel,
};
use premset::term::{ArrowTerm, Formula};

const LETTERS: [&str; 2] = ["p", "q"];

/// Two structural terms with shared endpoints.
fn cartesian_pair(seed: u64) -> Option<(ArrowTerm, ArrowTerm)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = Shape::Cartesian { top: true };
    let s = random_formula(&mut rng, &LETTERS, 2, shape);
    let t = random_formula(&mut rng, &LETTERS, 2, shape);
    Some((cartesian_term(&mut rng, &s, &t, 2)?, cartesian_term(&mut rng, &s, &t, 2)?))
}

fn model() -> FiniteModel {
    FiniteModel::uniform(LETTERS, 2)
}

fn model_equal(a: &ArrowTerm, b: &ArrowTerm) -> bool {
    eval_finite_model(a, &model()).unwrap() == eval_finite_model(b, &model()).unwrap()
}

proptest! {
    #[test]
    fn occurrence_maps_agree_with_the_model(seed: u64) {
        if let Some((a, b)) = cartesian_pair(seed) {
            prop_assert_eq!(decide_equal_cartesian(&a, &b).unwrap(), model_equal(&a, &b), "{} vs {}", a, b);
        }
    }

    #[test]
    fn composition_composes_occurrence_maps(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = Shape::Cartesian { top: false };
        let a = random_formula(&mut rng, &LETTERS, 2, shape);
        let b = random_formula(&mut rng, &LETTERS, 2, shape);
        let c = random_formula(&mut rng, &LETTERS, 2, shape);
        let (Some(f), Some(g)) = (cartesian_term(&mut rng, &a, &b, 1), cartesian_term(&mut rng, &b, &c, 1)) else {
            return Ok(());
        };
        let (mf, mg) = (interpret_cartesian(&f).unwrap(), interpret_cartesian(&g).unwrap());
        let composite = interpret_cartesian(&ArrowTerm::comp(g, f)).unwrap();
        let expected: Vec<usize> = mg.map.iter().map(|&j| mf.map[j]).collect();
        prop_assert_eq!(composite.map, expected);
    }

    #[test]
    fn symmetric_terms_denote_bijections(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_formula(&mut rng, &LETTERS, 3, Shape::Tensor);
        let f = symmetric_term(&mut rng, &s, 3);
        let mut image = interpret_symmetric(&f).unwrap().map;
        image.sort_unstable();
        prop_assert_eq!(image, (0..s.leaf_count()).collect::<Vec<_>>());
    }

    #[test]
    fn symmetric_semantics_agrees_with_the_model(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_formula(&mut rng, &LETTERS, 3, Shape::Tensor);
        let f = symmetric_term(&mut rng, &s, 3);
        let g = symmetric_term(&mut rng, &s, 3);
        if f.endpoints().unwrap() == g.endpoints().unwrap() {
            prop_assert_eq!(decide_equal_symmetric(&f, &g).unwrap(), model_equal(&f, &g), "{} vs {}", f, g);
        }
    }
}

#[test]
fn swapping_equal_letters_is_still_not_the_identity() {
    let c = parse_arrow("c{p,p}").unwrap();
    let id = ArrowTerm::Id(Formula::tensor(Formula::letter("p"), Formula::letter("p")));
    assert!(!decide_equal_symmetric(&c, &id).unwrap());
    assert!(!model_equal(&c, &id));
    let cc = ArrowTerm::comp(c.clone(), c);
    assert!(decide_equal_symmetric(&cc, &id).unwrap());
}
