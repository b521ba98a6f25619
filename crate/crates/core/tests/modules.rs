use quiver_findim::format;
use quiver_findim::modules::{self, IsoCertificate, ProjDim};
use quiver_findim::Algebra;

fn algebra(text: &str) -> Algebra {
    format::parse(text).unwrap().algebra().unwrap()
}

fn linear_a3(relation: &str) -> Algebra {
    algebra(&format!(
        "field Q\nquiver\n  vertex 1\n  vertex 2\n  vertex 3\n  arrow a 1 2\n  arrow b 2 3\nend\norder lenlex\nrelations\n{relation}\nend\n"
    ))
}

fn pd(alg: &Algebra, spec: &str) -> ProjDim {
    modules::pd(alg, &modules::named(alg, spec).unwrap(), 6).unwrap()
}

#[test]
fn hereditary_a3() {
    let alg = linear_a3("");
    assert_eq!(alg.dim(), 6);
    assert_eq!(pd(&alg, "S1"), ProjDim::Exact(1));
    assert_eq!(pd(&alg, "S2"), ProjDim::Exact(1));
    assert_eq!(pd(&alg, "S3"), ProjDim::Exact(0));
    assert_eq!(modules::named(&alg, "P1").unwrap().dims(), &[1, 1, 1]);
    let op = alg.opposite().unwrap();
    let injdim = |v: &str| modules::injdim(&op, &modules::named(&alg, v).unwrap(), 6).unwrap();
    assert_eq!(injdim("S1"), ProjDim::Exact(0));
    assert_eq!(injdim("S3"), ProjDim::Exact(1));
    assert_eq!(alg.loewy_length(), 3);
}

#[test]
fn a3_with_zero_relation_has_global_dimension_two() {
    let alg = linear_a3("  a*b");
    assert_eq!(alg.dim(), 5);
    assert_eq!(pd(&alg, "S1"), ProjDim::Exact(2));
    assert_eq!(pd(&alg, "S2"), ProjDim::Exact(1));
    assert_eq!(alg.loewy_length(), 2);
    let res = modules::resolve(&alg, &modules::named(&alg, "S1").unwrap(), 6).unwrap();
    assert_eq!(res.multiplicities, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    res.check_exactness().unwrap();
    assert!(res.minimal && res.check_minimality());
}

#[test]
fn selfinjective_local_algebra_has_infinite_pd() {
    let alg = algebra("field GF 2\nquiver\n  vertex 1\n  arrow x 1 1\nend\norder lenlex\nrelations\n  x*x\nend\n");
    assert_eq!(pd(&alg, "S1"), ProjDim::AtLeast(6));
    assert_eq!(pd(&alg, "P1"), ProjDim::Exact(0));
}

#[test]
fn modules_satisfy_relations_and_duality() {
    let alg = linear_a3("  a*b");
    let reg = modules::regular(&alg).unwrap();
    assert_eq!(reg.dim(), alg.dim());
    for spec in ["S1", "S2", "P1", "P2", "ideal:a", "ideal:b"] {
        let m = modules::named(&alg, spec).unwrap();
        assert!(m.satisfies_relations(&alg), "{spec}");
        assert_eq!(m.dual().dual().dims(), m.dims());
    }
    assert_eq!(modules::named(&alg, "ideal:a").unwrap().dims(), &[0, 1, 0]);
}

#[test]
fn iso_certificates() {
    let alg = linear_a3("");
    let s1 = modules::named(&alg, "S1").unwrap();
    let s2 = modules::named(&alg, "S2").unwrap();
    let p1 = modules::named(&alg, "P1").unwrap();
    let sum = s1.direct_sum(&s2);
    let swapped = s2.direct_sum(&s1);
    assert!(modules::iso_certificate(&sum, &swapped, 8, 0).is_iso());
    assert!(matches!(
        modules::iso_certificate(&s1, &s2, 8, 0),
        IsoCertificate::NotIso { .. }
    ));
    // Same dimension vector as P1 but split.
    let split = s1.direct_sum(&s2).direct_sum(&modules::named(&alg, "S3").unwrap());
    assert_eq!(split.dims(), p1.dims());
    assert!(!modules::iso_certificate(&split, &p1, 8, 0).is_iso());
}

#[test]
fn hom_spaces_of_projectives() {
    let alg = linear_a3("");
    let p1 = modules::named(&alg, "P1").unwrap();
    let p3 = modules::named(&alg, "P3").unwrap();
    // Hom(e_i Λ, e_j Λ) = e_j Λ e_i.
    assert_eq!(modules::hom_space(&p3, &p1).len(), 1);
    assert_eq!(modules::hom_space(&p1, &p3).len(), 0);
    assert_eq!(modules::hom_space(&p1, &p1).len(), 1);
}

#[test]
fn unknown_module_names_are_invalid_arguments() {
    let alg = linear_a3("");
    for spec in ["S9", "Pz", "ideal:c", "T1"] {
        assert_eq!(modules::named(&alg, spec).unwrap_err().exit_code(), 1, "{spec}");
    }
}
