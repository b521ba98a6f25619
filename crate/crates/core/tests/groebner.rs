use quiver_findim::corpus;
use quiver_findim::format;
use quiver_findim::groebner::{complete, complete_within, DEFAULT_CAP};
use quiver_findim::{Algebra, Error};

fn algebra(text: &str) -> Algebra {
    format::parse(text).unwrap().algebra().unwrap()
}

fn nf(alg: &Algebra, text: &str) -> String {
    let z = format::parse_element(alg.quiver(), alg.field(), text).unwrap();
    alg.render(&alg.normal_form(&z))
}

const TRUNCATED: &str = "field Q\nquiver\n  vertex 1\n  arrow x 1 1\nend\norder lenlex\nrelations\n  x*x*x\nend\n";

const COMMUTATIVE: &str = "field GF 3\nquiver\n  vertex 1\n  arrow x 1 1\n  arrow y 1 1\nend\norder lenlex x < y\nrelations\n  x*y - y*x\n  x*x\n  y*y\nend\n";

#[test]
fn truncated_polynomial_ring() {
    let alg = algebra(TRUNCATED);
    assert_eq!(alg.dim(), 3);
    assert_eq!(alg.groebner().len(), 1);
    assert_eq!(nf(&alg, "x*x*x*x + 2*x"), "2*x");
    assert_eq!(alg.loewy_length(), 3);
}

#[test]
fn exterior_algebra_on_two_generators() {
    let alg = algebra(COMMUTATIVE);
    assert_eq!(alg.dim(), 4);
    assert_eq!(nf(&alg, "y*x"), nf(&alg, "x*y"));
    assert_eq!(nf(&alg, "x*y*x"), "0");
    assert!(alg.groebner().diamond_violation().is_none());
    assert!(alg.completed().diamond_violation().is_none());
}

#[test]
fn completion_is_idempotent_on_a_groebner_basis() {
    let alg = corpus::spec("magicexam").unwrap().algebra().unwrap();
    let again = complete(alg.groebner().elements(), alg.order(), DEFAULT_CAP).unwrap();
    assert_eq!(again.rounds(), 0);
    assert_eq!(again.elements(), alg.groebner().elements());
}

#[test]
fn generators_reduce_to_zero() {
    for (name, _) in corpus::FIXTURES {
        let spec = corpus::spec(name).unwrap();
        let alg = spec.algebra().unwrap();
        for g in &spec.relations {
            assert!(alg.contains(g), "{name}: {}", alg.render(g));
        }
        for g in alg.completed().elements() {
            assert!(alg.normal_form(g).is_zero());
        }
    }
}

#[test]
fn round_cap_is_enforced() {
    let spec = corpus::spec("exam1_opp").unwrap();
    let alg = spec.algebra().unwrap();
    assert!(alg.completed().rounds() >= 1);
    assert!(matches!(
        complete(&spec.relations, alg.order(), 0),
        Err(Error::CompletionCap(0))
    ));
}

#[test]
fn element_budget_is_enforced() {
    let spec = corpus::spec("exam1_opp").unwrap();
    let alg = spec.algebra().unwrap();
    let n = alg.completed().len();
    assert!(matches!(
        complete_within(&spec.relations, alg.order(), DEFAULT_CAP, n - 1),
        Err(Error::CompletionSize(_))
    ));
    let within = complete_within(&spec.relations, alg.order(), DEFAULT_CAP, n).unwrap();
    assert_eq!(within.elements(), alg.completed().elements());
}

#[test]
fn division_reconstructs_and_leaves_no_tips() {
    let alg = corpus::spec("exam2").unwrap().algebra().unwrap();
    let gb = alg.groebner();
    let z = format::parse_element(
        alg.quiver(),
        alg.field(),
        "gamma2*delta2*epsilon - 3*lambda3*lambda3 + beta",
    )
    .unwrap();
    let d = gb.divide(&z);
    assert_eq!(d.reconstruct(gb.elements(), gb.order()), z);
    assert!(d.remainder.paths().all(|p| !gb.is_tip_divisible(p)));
    assert_eq!(alg.render(&d.remainder), nf(&alg, "gamma1*delta1*epsilon + beta"));
}

#[test]
fn non_admissible_presentations_are_rejected() {
    let loop_free = "field Q\nquiver\n  vertex 1\n  arrow x 1 1\nend\norder lenlex\nrelations\nend\n";
    let e = format::parse(loop_free).unwrap().algebra().unwrap_err();
    assert_eq!(e.exit_code(), 3);
    let linear = "field Q\nquiver\n  vertex 1\n  vertex 2\n  arrow a 1 2\nend\norder lenlex\nrelations\n  a\nend\n";
    assert_eq!(format::parse(linear).unwrap_err().exit_code(), 2);
}
