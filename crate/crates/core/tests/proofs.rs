use premset::engine::{Bounds, ClosedTheory, Preset, TheoryConfig};
use premset::proofs::{bundled_scripts, cartesian_instance, check_script, mutations, parse_scripts, Hyp};

#[test]
fn every_single_mutation_is_rejected_at_its_line() {
    let mut total = 0;
    let mut survivors = Vec::new();
    for script in bundled_scripts() {
        for (line, mutant) in mutations(&script) {
            total += 1;
            let v = check_script(&mutant);
            if v.failure.as_ref().and_then(|f| f.step) != Some(line) {
                survivors.push(format!(
                    "{} line {line} `{}`: {:?}",
                    script.name,
                    mutant.steps[line - 1].justification,
                    v.failure
                ));
            }
        }
    }
    assert!(survivors.is_empty(), "{}", survivors.join("\n"));
    assert!(total > 1000, "{total}");
}

#[test]
fn unit_monic_needs_faithfulness() {
    let mut s = bundled_scripts().into_iter().find(|s| s.name == "unit-monic.ltr").unwrap();
    s.hyps.retain(|h| *h != Hyp::Faithful(premset::proofs::Functor::F));
    let v = check_script(&s);
    assert!(!v.accepted);
    assert_eq!(v.failure.unwrap().step, Some(4));
}

#[test]
fn printed_scripts_reparse() {
    for s in bundled_scripts() {
        let again = parse_scripts(&s.to_string()).unwrap();
        assert_eq!(again.len(), 1);
        assert_eq!(check_script(&again[0]), check_script(&s));
    }
}

#[test]
fn type_errors_are_reported() {
    let text = "script: bad\ntheory: cartesian\nvar: f : A -> B\ngoal: f = f . id{A}\n1. f = id{B} ; axiom eta\n";
    let v = check_script(&parse_scripts(text).unwrap()[0]);
    let f = v.failure.unwrap();
    assert_eq!(f.step, Some(1));
    assert!(matches!(f.error, premset::proofs::ProofError::TypeMismatch(_)));
}

#[test]
fn cartesian_scripts_agree_with_the_engine() {
    let mut checked = 0;
    for script in bundled_scripts() {
        let Some(inst) = cartesian_instance(&script, "p") else { continue };
        let mut cfg = TheoryConfig::new(Preset::Cartesian, inst.sig.clone()).unwrap();
        for (l, r) in &inst.assumptions {
            cfg.add_equation(l.clone(), r.clone(), "hyp").unwrap();
        }
        let mut extra = vec![inst.goal.0.clone(), inst.goal.1.clone()];
        for (l, r) in &inst.lines {
            extra.push(l.clone());
            extra.push(r.clone());
        }
        let closed = ClosedTheory::build(&cfg, Bounds::new(7, 2), &extra).unwrap();
        for (l, r) in inst.lines.iter().chain([&inst.goal]) {
            assert!(closed.equal(l, r).unwrap(), "{}: {l} = {r}", script.name);
        }
        checked += 1;
    }
    assert_eq!(checked, 4);
}
