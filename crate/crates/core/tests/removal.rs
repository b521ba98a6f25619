use quiver_findim::corpus;
use quiver_findim::findim::inflate;
use quiver_findim::format;
use quiver_findim::linalg::SparseVec;
use quiver_findim::modules;
use quiver_findim::removal::{classify_generating_set, remove_arrow, strict_groebner_witness, Level};
use quiver_findim::Algebra;

fn fixture(name: &str) -> Algebra {
    corpus::spec(name).unwrap().algebra().unwrap()
}

/// `π(ν(x)) = x` on Γ's basis.
fn assert_section(alg: &Algebra, nu: &[SparseVec], pi: &[SparseVec], gamma_dim: usize) {
    assert_eq!(nu.len(), gamma_dim);
    assert_eq!(pi.len(), alg.dim());
    for (i, x) in nu.iter().enumerate() {
        let mut back = SparseVec::new();
        for (j, c) in x.entries() {
            back = back.axpy(c, &pi[*j]);
        }
        assert_eq!(back, SparseVec::unit(i, alg.field().one()), "basis element {i}");
    }
}

#[test]
fn removal_dimensions_add_up() {
    for name in ["exam2", "exam3", "magicexam", "exam4"] {
        let alg = fixture(name);
        let alpha = alg.quiver().arrow("alpha").unwrap();
        let r = remove_arrow(&alg, alpha).unwrap();
        let ideal = modules::ideal(&alg, alpha).unwrap();
        assert_eq!(r.gamma.dim() + r.ideal_basis.len(), alg.dim(), "{name}");
        assert_eq!(r.ideal_basis.len(), ideal.dim(), "{name}");
        assert_eq!(r.gamma.quiver().arrow_count() + 1, alg.quiver().arrow_count());
        assert!(r.gamma.quiver().arrow("alpha").is_none());
        assert_section(&alg, &r.nu, &r.pi, r.gamma.dim());
    }
}

#[test]
fn inflated_modules_satisfy_the_relations() {
    let alg = fixture("magicexam");
    let alpha = alg.quiver().arrow("alpha").unwrap();
    let r = remove_arrow(&alg, alpha).unwrap();
    for v in r.gamma.quiver().vertices() {
        let p = modules::projective(&r.gamma, v).unwrap();
        let x = inflate(&alg, &r, &p).unwrap();
        assert!(x.satisfies_relations(&alg));
        assert_eq!(x.dims(), p.dims());
    }
}

#[test]
fn removing_a_zero_relation_arrow() {
    let text = "field Q\nquiver\n  vertex 1\n  vertex 2\n  vertex 3\n  arrow a 1 2\n  arrow b 2 3\nend\norder lenlex\nrelations\n  a*b\nend\n";
    let alg = format::parse(text).unwrap().algebra().unwrap();
    let r = remove_arrow(&alg, alg.quiver().arrow("a").unwrap()).unwrap();
    assert_eq!(alg.dim(), 5);
    assert_eq!(r.gamma.dim(), 4);
    assert_eq!(r.ideal_basis.len(), 1);
}

#[test]
fn classification_levels() {
    let spec = corpus::spec("magicexam").unwrap();
    let alg = spec.algebra().unwrap();
    let alpha = alg.quiver().arrow("alpha").unwrap();
    let t = classify_generating_set(&alg, &spec.relations, alpha).unwrap();
    assert!(t.is_strict());
    assert_eq!(t.level, Level::StrictGenset);
    let (p, q) = t.pq.clone().unwrap();
    assert_eq!(alg.quiver().path_name(&p), "theta1");
    assert_eq!(alg.quiver().path_name(&q), "epsilon1");

    let alg = fixture("exam4");
    let w = strict_groebner_witness(&alg, alg.quiver().arrow("alpha").unwrap());
    assert!(!w.is_strict());
    assert!(w.pq.is_none());
}

#[test]
fn certificates_serialize() {
    let alg = fixture("exam2");
    let w = strict_groebner_witness(&alg, alg.quiver().arrow("alpha").unwrap());
    let json = w.to_json(&alg);
    assert!(json.is_object());
    assert!(serde_json::to_string(&json).unwrap().contains("alpha"));
}
