//! Acceptance harness: one line per criterion, nonzero exit only on an
//! unexpected failure. Expected values live here; the library is only asked
//! to compute.

use std::collections::BTreeSet;
use std::process::ExitCode;

use proptest::test_runner::{Config, TestCaseError, TestRunner};
use quiver_findim::corpus;
use quiver_findim::element::FreeElement;
use quiver_findim::findim::{self, DEFAULT_CUTOFF};
use quiver_findim::format::{self, AlgebraSpec};
use quiver_findim::groebner::{complete, DEFAULT_CAP};
use quiver_findim::modules::{self, Cleft, IsoCertificate, ProjDim, Resolution};
use quiver_findim::order::{tip, PathOrder};
use quiver_findim::quiver::{Path, Quiver, VertexId};
use quiver_findim::removal::{self, BasisKind, Counterexample, Level, Property};
use quiver_findim::selftest::{KNOWN_EXAM3_STRICTNESS, KNOWN_EXAM4_KERNEL, PROPERTIES};
use quiver_findim::Algebra;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PROPERTY_CASES: u32 = 1000;

struct Sub {
    name: String,
    outcome: Result<(), String>,
    known: Option<&'static str>,
}

#[derive(Default)]
struct Criterion {
    subs: Vec<Sub>,
}

impl Criterion {
    fn check(&mut self, name: &str, ok: bool, detail: impl std::fmt::Display) {
        let outcome = if ok { Ok(()) } else { Err(detail.to_string()) };
        self.subs.push(Sub {
            name: name.into(),
            outcome,
            known: None,
        });
    }

    fn known(&mut self, name: &str, ok: bool, detail: impl std::fmt::Display, why: &'static str) {
        self.check(name, ok, detail);
        self.subs.last_mut().expect("just pushed").known = Some(why);
    }
}

fn load(name: &str) -> (AlgebraSpec, Algebra) {
    let spec = corpus::spec(name).expect("fixture parses");
    let alg = spec.algebra().expect("fixture is admissible");
    (spec, alg)
}

fn arrow(alg: &Algebra, name: &str) -> quiver_findim::quiver::ArrowId {
    alg.quiver().arrow(name).expect("arrow")
}

fn vertex(q: &Quiver, name: &str) -> VertexId {
    q.vertex(name).expect("vertex")
}

fn path(alg: &Algebra, text: &str) -> Path {
    alg.quiver().parse_path(text).expect("path")
}

fn element(alg: &Algebra, text: &str) -> FreeElement {
    format::parse_element(alg.quiver(), alg.field(), text).expect("element")
}

/// Each element scaled so its tip has coefficient one, rendered.
fn monic(alg: &Algebra, elements: &[FreeElement]) -> BTreeSet<String> {
    elements
        .iter()
        .map(|z| {
            let (_, c) = tip(z, alg.order() as &dyn PathOrder).expect("nonzero");
            alg.render(&z.scale(&c.inverse().unwrap()))
        })
        .collect()
}

/// Smallest `n` such that every path of length `n` lies in the ideal, found
/// by extending only the paths that survive.
fn loewy_length_by_paths(alg: &Algebra) -> usize {
    let q = alg.quiver();
    let mut layer: Vec<Path> = q.vertices().map(Path::trivial).collect();
    let mut n = 0;
    while !layer.is_empty() {
        n += 1;
        layer = layer
            .iter()
            .flat_map(|p| {
                q.arrows_from(p.target())
                    .map(move |a| p.compose(&Path::from_arrow(a)).unwrap())
            })
            .filter(|p| {
                !alg.normal_form(&FreeElement::monomial(p.clone(), alg.field().one()))
                    .is_zero()
            })
            .collect();
    }
    n
}

/// `dim e_v Λ` is the number of basis paths starting at `v`.
fn projective_dims(alg: &Algebra) -> Vec<usize> {
    let mut dims = vec![0; alg.quiver().vertex_count()];
    for p in alg.basis().paths() {
        dims[p.source().index()] += 1;
    }
    dims
}

/// For a finite resolution the alternating sum of the terms' dimensions is
/// the dimension of the module.
fn euler_characteristic_holds(alg: &Algebra, res: &Resolution) -> bool {
    let proj = projective_dims(alg);
    let mut sum: i64 = 0;
    for (i, mult) in res.multiplicities.iter().enumerate() {
        let d: usize = mult.iter().zip(&proj).map(|(m, p)| m * p).sum();
        sum += if i % 2 == 0 { d as i64 } else { -(d as i64) };
    }
    sum == res.module.dim() as i64
}

/// Peels all sources or all sinks, whichever set is larger, until no arrow
/// joins two distinct live vertices. Loops are ignored.
fn peel_steps(q: &Quiver) -> Option<usize> {
    let mut alive: BTreeSet<usize> = q.vertices().map(|v| v.index()).collect();
    let mut steps = 0;
    loop {
        let edges: Vec<(usize, usize)> = q
            .arrows()
            .iter()
            .map(|a| (a.source().index(), a.target().index()))
            .filter(|(s, t)| s != t && alive.contains(s) && alive.contains(t))
            .collect();
        if edges.is_empty() {
            return Some(steps);
        }
        let sources: BTreeSet<usize> = alive
            .iter()
            .copied()
            .filter(|v| !edges.iter().any(|e| e.1 == *v))
            .collect();
        let sinks: BTreeSet<usize> = alive
            .iter()
            .copied()
            .filter(|v| !edges.iter().any(|e| e.0 == *v))
            .collect();
        let pick = if sources.len() >= sinks.len() { sources } else { sinks };
        if pick.is_empty() {
            return None;
        }
        alive.retain(|v| !pick.contains(v));
        steps += 1;
    }
}

fn criterion1() -> Criterion {
    let mut c = Criterion::default();
    let (spec, alg) = load("exam1");
    let t = monic(&alg, &spec.relations);
    let done = complete(&spec.relations, alg.order(), DEFAULT_CAP).unwrap();
    c.check(
        "first order: completion returns T",
        monic(&alg, done.elements()) == t,
        format!("{} elements against {}", done.len(), t.len()),
    );
    c.check("first order: T is reduced", done.is_reduced(), "not reduced");

    let (spec, alg) = load("exam1_opp");
    let t = monic(&alg, &spec.relations);
    let done = complete(&spec.relations, alg.order(), DEFAULT_CAP).unwrap();
    let added = element(&alg, "theta*alpha*beta*gamma2*delta2");
    let mut expected = t.clone();
    expected.extend(monic(&alg, &[added]));
    let got = monic(&alg, done.elements());
    c.check(
        "opposite order: completion adds theta*alpha*beta*gamma2*delta2",
        got == expected,
        format!("new elements {:?}", got.difference(&t).collect::<Vec<_>>()),
    );
    let dropped = monic(&alg, &[element(&alg, "theta*alpha*beta*gamma1*delta1")]);
    let reduced_expected: BTreeSet<String> = expected.difference(&dropped).cloned().collect();
    c.check(
        "opposite order: reduced basis drops theta*alpha*beta*gamma1*delta1",
        monic(&alg, alg.groebner().elements()) == reduced_expected,
        format!("{:?}", monic(&alg, alg.groebner().elements())),
    );
    c
}

fn criterion2() -> Criterion {
    let mut c = Criterion::default();
    let (spec, alg) = load("exam1");
    let alpha = arrow(&alg, "alpha");
    let cls = removal::classify_generating_set(&alg, &spec.relations, alpha).unwrap();
    let pq = (path(&alg, "theta"), path(&alg, "beta*gamma1*delta1"));
    c.check(
        "T is single and not strict, split (theta, beta*gamma1*delta1)",
        cls.level == Level::Single && cls.pq == Some(pq),
        format!("{:?}", cls.level),
    );
    for (name, q) in [("exam1", "beta*gamma1*delta1"), ("exam1_opp", "beta*gamma2*delta2")] {
        let (_, alg) = load(name);
        let alpha = arrow(&alg, "alpha");
        let w = removal::strict_groebner_witness(&alg, alpha);
        let splits: Vec<_> = w
            .candidates
            .iter()
            .filter(|x| x.basis == BasisKind::ReducedGroebner)
            .filter(|x| x.all_hold() && !(x.p.is_trivial() && x.q.is_trivial()))
            .map(|x| (x.p.clone(), x.q.clone()))
            .collect();
        let expected = (path(&alg, "theta"), path(&alg, q));
        c.check(
            &format!("{name}: reduced basis strict with the unique split (theta, {q})"),
            w.level == Level::StrictGroebner && splits == vec![expected.clone()] && w.pq == Some(expected),
            format!("{:?} with {} strict splits", w.level, splits.len()),
        );
    }
    c
}

fn criterion3() -> Criterion {
    let mut c = Criterion::default();
    let (spec, alg) = load("magicexam");
    let alpha = arrow(&alg, "alpha");
    let pq = (path(&alg, "theta1"), path(&alg, "epsilon1"));
    let cls = removal::classify_generating_set(&alg, &spec.relations, alpha).unwrap();
    c.check(
        "T is strict with (theta1, epsilon1)",
        cls.level == Level::StrictGenset && cls.pq.as_ref() == Some(&pq),
        format!("{:?} {:?}", cls.level, cls.pq),
    );
    let w = removal::strict_groebner_witness(&alg, alpha);
    c.check(
        "completed basis certified strict under the same order",
        w.level == Level::StrictGroebner && w.pq == Some(pq),
        format!("{:?}", w.level),
    );
    c
}

fn criterion4() -> Criterion {
    let mut c = Criterion::default();
    let (_, alg) = load("magicexam");
    let q = alg.quiver();
    let expected = [
        ("1", ProjDim::AtLeast(12)),
        ("2", ProjDim::Exact(4)),
        ("3", ProjDim::AtLeast(12)),
        ("4", ProjDim::AtLeast(12)),
        ("5", ProjDim::AtLeast(12)),
        ("6", ProjDim::Exact(2)),
    ];
    for (v, want) in expected {
        let s = modules::simple(&alg, vertex(q, v)).unwrap();
        let res = modules::resolve(&alg, &s, DEFAULT_CUTOFF).unwrap();
        let got = res.projective_dimension();
        c.check(&format!("pd S{v} = {want}"), got == want, got);
        if let ProjDim::Exact(_) = want {
            c.check(
                &format!("resolution of S{v} has Euler characteristic 1"),
                euler_characteristic_holds(&alg, &res) && res.check_exactness().is_ok(),
                format!("{:?}", res.multiplicities),
            );
        }
    }
    let s1 = modules::simple(&alg, vertex(q, "1")).unwrap();
    let s4 = modules::simple(&alg, vertex(q, "4")).unwrap();
    let res = modules::resolve(&alg, &s1, 4).unwrap();
    let omega4 = &res.syzygies[3];
    let target = res.syzygies[1].direct_sum(&s4);
    c.check(
        "Omega^4(S1) and Omega^2(S1) + S4 have equal dimension vectors",
        omega4.dims() == target.dims(),
        format!("{:?} and {:?}", omega4.dims(), target.dims()),
    );
    let iso = modules::iso_certificate(omega4, &target, modules::default_trials(alg.field()), 0);
    c.check(
        "Omega^4(S1) = Omega^2(S1) + S4 certified",
        matches!(iso, IsoCertificate::Iso { .. }),
        "no isomorphism certificate",
    );
    let ll = alg.loewy_length();
    c.check("Loewy length 8", ll == 8, ll);
    let by_paths = loewy_length_by_paths(&alg);
    c.check("Loewy length agrees with path enumeration", by_paths == ll, by_paths);
    c
}

fn criterion5() -> Criterion {
    let mut c = Criterion::default();
    let (_, alg) = load("magicexam");
    let alpha = arrow(&alg, "alpha");
    let (p, q) = removal::strict_groebner_witness(&alg, alpha).pq.expect("strict");
    let rem = removal::remove_arrow(&alg, alpha).unwrap();
    let cleft = Cleft::new(&alg, &rem).unwrap();
    let report = modules::verify_bimodule_resolutions(&cleft, &p, &q).unwrap();
    let failing: Vec<&str> = report
        .identities
        .iter()
        .filter(|i| !i.holds)
        .map(|i| i.name.as_str())
        .collect();
    c.check(
        "every bimodule dimension identity holds",
        !report.identities.is_empty() && failing.is_empty(),
        format!("failing {failing:?}"),
    );
    let ideal = modules::ideal(&alg, alpha).unwrap();
    let over_lambda = modules::pd(&alg, &ideal, DEFAULT_CUTOFF).unwrap();
    let over_gamma = modules::pd(cleft.gamma(), &cleft.restrict(&ideal).unwrap(), DEFAULT_CUTOFF).unwrap();
    let at_most_one = |d: ProjDim| matches!(d, ProjDim::Exact(0 | 1));
    c.check(
        "pd of the ideal over Lambda <= 1",
        at_most_one(over_lambda),
        over_lambda,
    );
    c.check("pd of the ideal over Gamma <= 1", at_most_one(over_gamma), over_gamma);
    c
}

fn criterion6() -> Criterion {
    let mut c = Criterion::default();
    for name in ["exam4", "exam4_opp"] {
        let (spec, alg) = load(name);
        let alpha = arrow(&alg, "alpha");
        let w = removal::strict_groebner_witness(&alg, alpha);
        c.check(
            &format!("{name}: not strict_groebner"),
            w.level < Level::StrictGroebner,
            format!("{:?}", w.level),
        );
        let cls = removal::classify_generating_set(&alg, &spec.relations, alpha).unwrap();
        let d1e1 = path(&alg, "delta1*epsilon1");
        let divides = cls.candidates.iter().any(|x| {
            x.witnesses.iter().any(|wit| {
                wit.property == Property::P3
                    && matches!(&wit.counterexample,
                        Some(Counterexample::Divides { path, target, .. }) if *path == d1e1 && *target == x.q)
            })
        });
        c.check(
            &format!("{name}: delta1*epsilon1 divides q"),
            divides,
            "no such counterexample",
        );
    }
    let (_, alg) = load("exam4");
    let q = alg.quiver();
    let alpha = arrow(&alg, "alpha");
    let res = modules::resolve(&alg, &modules::ideal(&alg, alpha).unwrap(), DEFAULT_CUTOFF).unwrap();
    let unit = |v: &str, k: usize| {
        let mut d = vec![0; q.vertex_count()];
        d[vertex(q, v).index()] = k;
        d
    };
    c.check(
        "P0 = e3Λ^2 and P1 = e8Λ",
        res.multiplicities.len() >= 2 && res.multiplicities[0] == unit("3", 2) && res.multiplicities[1] == unit("8", 1),
        format!("{:?}", res.multiplicities),
    );
    c.check("resolution is exact", res.check_exactness().is_ok(), "not exact");
    let kernel = res.syzygies.get(1).map(|s| s.dims().to_vec());
    c.known(
        "kernel of e8Λ -> e3Λ^2 is S9",
        kernel == Some(unit("9", 1)),
        format!("dimension vector {kernel:?}"),
        KNOWN_EXAM4_KERNEL,
    );
    let report = findim::main_bound(&alg, alpha, DEFAULT_CUTOFF).unwrap();
    c.check(
        "no bound is emitted",
        report.fpd_upper.is_none() && report.failed_stage.is_some(),
        format!("{:?}", report.fpd_upper),
    );
    c
}

fn criterion7() -> Criterion {
    let mut c = Criterion::default();
    for name in ["exam2", "exam3"] {
        let (_, alg) = load(name);
        let alpha = arrow(&alg, "alpha");
        let op = alg.opposite().unwrap();
        let witness = findim::fpd_nonzero_witness(&alg, &op).unwrap().map(|w| w.vertex);
        c.check(
            &format!("{name}: witness vertex 2"),
            witness.as_deref() == Some("2"),
            format!("{witness:?}"),
        );
        let gamma = removal::remove_arrow(&alg, alpha).unwrap().gamma;
        let t = findim::triangular_reduction_bound(gamma.quiver()).bound;
        c.check(
            &format!("{name}: triangular reduction of Gamma is 7"),
            t == Some(7),
            format!("{t:?}"),
        );
        let peeled = peel_steps(gamma.quiver());
        c.check(&format!("{name}: peeling agrees"), peeled == t, format!("{peeled:?}"));
        let report = findim::main_bound(&alg, alpha, DEFAULT_CUTOFF).unwrap();
        let ok = report.fpd_lower >= 1 && report.fpd_upper == Some(9);
        let detail = format!(
            "{} <= fpd <= {:?}, stopped at {:?}",
            report.fpd_lower, report.fpd_upper, report.failed_stage
        );
        let label = format!("{name}: 0 < fpd <= 9");
        if name == "exam3" {
            c.known(&label, ok, detail, KNOWN_EXAM3_STRICTNESS);
        } else {
            c.check(&label, ok, detail);
        }
    }
    c
}

fn criterion8() -> Criterion {
    let mut c = Criterion::default();
    for (name, property) in PROPERTIES {
        let mut runner = TestRunner::new(Config {
            cases: PROPERTY_CASES,
            failure_persistence: None,
            ..Config::default()
        });
        let outcome = runner.run(&proptest::num::u64::ANY, |seed| {
            property(&mut ChaCha8Rng::seed_from_u64(seed)).map_err(TestCaseError::fail)
        });
        c.check(
            &format!("{name} ({PROPERTY_CASES} cases)"),
            outcome.is_ok(),
            outcome.err().map(|e| e.to_string()).unwrap_or_default(),
        );
    }
    c
}

type CriterionFn = fn() -> Criterion;

fn main() -> ExitCode {
    let criteria: [(u8, &str, CriterionFn); 8] = [
        (1, "Gröbner reproduction", criterion1),
        (2, "classification", criterion2),
        (3, "strictness by generating set", criterion3),
        (4, "homological values over GF(2)", criterion4),
        (5, "bimodule identities", criterion5),
        (6, "negative control", criterion6),
        (7, "bound reproduction", criterion7),
        (8, "property suites", criterion8),
    ];
    let mut unexpected = 0;
    let mut passed = 0;
    for (n, title, f) in criteria {
        let result = std::panic::catch_unwind(f);
        let line = match result {
            Err(_) => {
                unexpected += 1;
                "FAIL (panicked)".to_string()
            }
            Ok(c) => {
                let failed: Vec<&Sub> = c.subs.iter().filter(|s| s.outcome.is_err()).collect();
                let surprising: Vec<&&Sub> = failed.iter().filter(|s| s.known.is_none()).collect();
                if failed.is_empty() {
                    format!("PASS ({} checks)", c.subs.len())
                } else if surprising.is_empty() {
                    let why: Vec<&str> = failed.iter().filter_map(|s| s.known).collect();
                    format!("FAIL (known discrepancy: {})", why.join("; "))
                } else {
                    unexpected += 1;
                    let what: Vec<String> = surprising
                        .iter()
                        .map(|s| format!("{}: {}", s.name, s.outcome.as_ref().unwrap_err()))
                        .collect();
                    format!("FAIL {}", what.join("; "))
                }
            }
        };
        if line.starts_with("PASS") {
            passed += 1;
        }
        println!("criterion {n} ({title}): {line}");
    }
    println!(
        "{passed} of {} criteria pass, {unexpected} unexpected failures",
        criteria.len()
    );
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
