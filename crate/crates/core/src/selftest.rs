//! Runs the bundled corpus against stored expectations, plus randomized
//! property checks.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::Algebra;
use crate::corpus;
use crate::element::FreeElement;
use crate::error::Result;
use crate::findim::{fpd_nonzero_witness, main_bound, triangular_reduction_bound, DEFAULT_CUTOFF};
use crate::groebner::{complete, DEFAULT_CAP};
use crate::modules::{
    default_trials, ideal, iso_certificate, pd, resolve, right_ideal, simple, verify_bimodule_resolutions, Cleft,
    IsoCertificate, ProjDim,
};
use crate::order::{tip, PathOrder};
use crate::quiver::Path;
use crate::removal::{classify_generating_set, remove_arrow, strict_groebner_witness, Counterexample, Level, Property};
use crate::sample;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// Set when the failure is a documented discrepancy with the stored
    /// expectation rather than a defect.
    pub known_discrepancy: Option<&'static str>,
}

impl Check {
    fn new(criterion: u8, name: &str, passed: bool, detail: impl Into<String>) -> Check {
        Check {
            criterion,
            name: name.into(),
            passed,
            detail: detail.into(),
            known_discrepancy: None,
        }
    }

    fn known(mut self, why: &'static str) -> Check {
        if !self.passed {
            self.known_discrepancy = Some(why);
        }
        self
    }

    /// Failed without a documented reason.
    pub fn unexpected(&self) -> bool {
        !self.passed && self.known_discrepancy.is_none()
    }
}

pub const KNOWN_EXAM4_KERNEL: &str = "the kernel of e8Λ -> e3Λ² is e9Λ of dimension 2, not the simple S9";
pub const KNOWN_EXAM3_STRICTNESS: &str =
    "beta*lambda3 overlaps q = beta from the left, so (P2)^op fails and no bound is certified";

fn load(name: &str) -> Result<(crate::format::AlgebraSpec, Algebra)> {
    let spec = corpus::spec(name)?;
    let alg = spec.algebra()?;
    Ok((spec, alg))
}

/// Elements rendered after scaling to a monic tip, as a set.
pub fn monic_set(elements: &[FreeElement], alg: &Algebra) -> BTreeSet<String> {
    elements
        .iter()
        .filter(|z| !z.is_zero())
        .map(|z| {
            let (_, c) = tip(z, alg.order() as &dyn PathOrder).expect("nonzero");
            alg.render(&z.scale(&c.inverse().expect("nonzero tip")))
        })
        .collect()
}

fn path(alg: &Algebra, text: &str) -> Path {
    alg.quiver().parse_path(text).expect("fixture path")
}

fn element(alg: &Algebra, text: &str) -> FreeElement {
    crate::format::parse_element(alg.quiver(), alg.field(), text).expect("fixture element")
}

fn criterion1() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let (spec, alg) = load("exam1")?;
    let t = monic_set(&spec.relations, &alg);
    let done = complete(&spec.relations, alg.order(), DEFAULT_CAP)?;
    out.push(Check::new(
        1,
        "completion fixes T under the first order",
        monic_set(done.elements(), &alg) == t && done.is_reduced(),
        format!("{} elements", done.len()),
    ));
    let (spec, alg) = load("exam1_opp")?;
    let t = monic_set(&spec.relations, &alg);
    let done = complete(&spec.relations, alg.order(), DEFAULT_CAP)?;
    let new = element(&alg, "theta*alpha*beta*gamma2*delta2");
    let old = element(&alg, "theta*alpha*beta*gamma1*delta1");
    let mut expected = t.clone();
    expected.extend(monic_set(&[new], &alg));
    let got = monic_set(done.elements(), &alg);
    out.push(Check::new(
        1,
        "completion adds one monomial under the opposite order",
        got == expected,
        format!("added {:?}", got.difference(&t).collect::<Vec<_>>()),
    ));
    let mut reduced_expected = expected;
    for s in monic_set(&[old], &alg) {
        reduced_expected.remove(&s);
    }
    out.push(Check::new(
        1,
        "reduction drops the longer alpha monomial",
        monic_set(alg.groebner().elements(), &alg) == reduced_expected,
        format!("{} elements", alg.groebner().len()),
    ));
    Ok(out)
}

fn criterion2() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let (spec, alg) = load("exam1")?;
    let alpha = alg.quiver().arrow("alpha").expect("alpha");
    let c = classify_generating_set(&alg, &spec.relations, alpha)?;
    let expected = (path(&alg, "theta"), path(&alg, "beta*gamma1*delta1"));
    out.push(Check::new(
        2,
        "the generating set is single but not strict",
        c.level == Level::Single && c.pq.as_ref() == Some(&expected),
        format!("{:?}", c.level),
    ));
    for (name, q) in [("exam1", "beta*gamma1*delta1"), ("exam1_opp", "beta*gamma2*delta2")] {
        let (_, alg) = load(name)?;
        let alpha = alg.quiver().arrow("alpha").expect("alpha");
        let w = strict_groebner_witness(&alg, alpha);
        let expected = (path(&alg, "theta"), path(&alg, q));
        let strict_candidates: BTreeSet<(String, String)> = w
            .candidates
            .iter()
            .filter(|c| c.all_hold() && !(c.p.is_trivial() && c.q.is_trivial()))
            .map(|c| (alg.quiver().path_name(&c.p), alg.quiver().path_name(&c.q)))
            .collect();
        out.push(Check::new(
            2,
            &format!("reduced basis of {name} is strict with a unique split"),
            w.level == Level::StrictGroebner && w.pq.as_ref() == Some(&expected) && strict_candidates.len() == 1,
            format!("{:?} {:?}", w.level, strict_candidates),
        ));
    }
    Ok(out)
}

fn criterion3() -> Result<Vec<Check>> {
    let (spec, alg) = load("magicexam")?;
    let alpha = alg.quiver().arrow("alpha").expect("alpha");
    let expected = (path(&alg, "theta1"), path(&alg, "epsilon1"));
    let c = classify_generating_set(&alg, &spec.relations, alpha)?;
    let w = strict_groebner_witness(&alg, alpha);
    Ok(vec![
        Check::new(
            3,
            "the generating set is strict",
            c.level == Level::StrictGenset && c.pq.as_ref() == Some(&expected),
            format!("{:?}", c.level),
        ),
        Check::new(
            3,
            "the completed basis certifies strictness",
            w.level == Level::StrictGroebner && w.pq.as_ref() == Some(&expected),
            format!("{:?}", w.level),
        ),
    ])
}

fn criterion4() -> Result<Vec<Check>> {
    let (_, alg) = load("magicexam")?;
    let q = alg.quiver();
    let mut dims = Vec::new();
    for v in q.vertices() {
        dims.push(pd(&alg, &simple(&alg, v)?, DEFAULT_CUTOFF)?);
    }
    let expected = [
        ProjDim::AtLeast(12),
        ProjDim::Exact(4),
        ProjDim::AtLeast(12),
        ProjDim::AtLeast(12),
        ProjDim::AtLeast(12),
        ProjDim::Exact(2),
    ];
    let shown: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
    let s1 = simple(&alg, q.vertex("1").expect("vertex"))?;
    let s4 = simple(&alg, q.vertex("4").expect("vertex"))?;
    let res = resolve(&alg, &s1, 4)?;
    let iso = iso_certificate(
        &res.syzygies[3],
        &res.syzygies[1].direct_sum(&s4),
        default_trials(alg.field()),
        0,
    );
    Ok(vec![
        Check::new(
            4,
            "projective dimensions of the simples",
            dims == expected,
            shown.join(", "),
        ),
        Check::new(
            4,
            "fourth syzygy of S1 is the second plus S4",
            iso.is_iso(),
            match &iso {
                IsoCertificate::Iso { .. } => "isomorphism found".to_string(),
                IsoCertificate::NotIso { invariant } => format!("told apart by {invariant}"),
                IsoCertificate::Unknown { trials } => format!("undecided after {trials} trials"),
            },
        ),
        Check::new(
            4,
            "Loewy length",
            alg.loewy_length() == 8,
            alg.loewy_length().to_string(),
        ),
    ])
}

fn criterion5() -> Result<Vec<Check>> {
    let (_, alg) = load("magicexam")?;
    let alpha = alg.quiver().arrow("alpha").expect("alpha");
    let w = strict_groebner_witness(&alg, alpha);
    let (p, q) = w.pq.clone().expect("strict");
    let removal = remove_arrow(&alg, alpha)?;
    let cleft = Cleft::new(&alg, &removal)?;
    let report = verify_bimodule_resolutions(&cleft, &p, &q)?;
    let failed: Vec<&str> = report
        .identities
        .iter()
        .filter(|i| !i.holds)
        .map(|i| i.name.as_str())
        .collect();
    let i_l = ideal(&alg, alpha)?;
    let i_g = cleft.restrict(&i_l)?;
    let pl = pd(&alg, &i_l, DEFAULT_CUTOFF)?;
    let pg = pd(cleft.gamma(), &i_g, DEFAULT_CUTOFF)?;
    let small = |d: ProjDim| d.exact().is_some_and(|n| n <= 1);
    Ok(vec![
        Check::new(
            5,
            "bimodule dimension identities",
            report.all_hold(),
            format!("{} identities, failing {failed:?}", report.identities.len()),
        ),
        Check::new(
            5,
            "ideal has projective dimension at most 1 on both sides",
            small(pl) && small(pg),
            format!("{pl} and {pg}"),
        ),
    ])
}

fn criterion6() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for name in ["exam4", "exam4_opp"] {
        let (spec, alg) = load(name)?;
        let alpha = alg.quiver().arrow("alpha").expect("alpha");
        let w = strict_groebner_witness(&alg, alpha);
        let c = classify_generating_set(&alg, &spec.relations, alpha)?;
        let d1e1 = path(&alg, "delta1*epsilon1");
        let divides_q = c.candidates.iter().any(|cand| {
            cand.witnesses.iter().any(|x| {
                x.property == Property::P3
                    && matches!(&x.counterexample, Some(Counterexample::Divides { path, target, .. })
                        if *path == d1e1 && *target == cand.q)
            })
        });
        out.push(Check::new(
            6,
            &format!("{name} is not strict, delta1*epsilon1 divides q"),
            w.level < Level::StrictGroebner && divides_q,
            format!("{:?}", w.level),
        ));
    }
    let (_, alg) = load("exam4")?;
    let q = alg.quiver();
    let alpha = q.arrow("alpha").expect("alpha");
    let res = resolve(&alg, &ideal(&alg, alpha)?, DEFAULT_CUTOFF)?;
    let at = |name: &str| q.vertex(name).expect("vertex").index();
    let unit = |v: usize, k: usize| {
        let mut d = vec![0; q.vertex_count()];
        d[v] = k;
        d
    };
    let terms = res.multiplicities.len() >= 2
        && res.multiplicities[0] == unit(at("3"), 2)
        && res.multiplicities[1] == unit(at("8"), 1)
        && res.check_exactness().is_ok();
    out.push(Check::new(
        6,
        "ideal is covered by e3Λ² with next term e8Λ",
        terms,
        format!("{:?}", res.multiplicities),
    ));
    let kernel = res.syzygies.get(1).map(|s| s.dims().to_vec());
    out.push(
        Check::new(
            6,
            "kernel of e8Λ -> e3Λ² is S9",
            kernel == Some(unit(at("9"), 1)),
            format!("second syzygy {kernel:?}"),
        )
        .known(KNOWN_EXAM4_KERNEL),
    );
    let report = main_bound(&alg, alpha, DEFAULT_CUTOFF)?;
    out.push(Check::new(
        6,
        "no bound is emitted",
        report.lambda_bound.is_none() && report.failed_stage.is_some(),
        format!("failed at {:?}", report.failed_stage),
    ));
    Ok(out)
}

fn criterion7() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for name in ["exam2", "exam3"] {
        let (_, alg) = load(name)?;
        let alpha = alg.quiver().arrow("alpha").expect("alpha");
        let op = alg.opposite()?;
        let witness = fpd_nonzero_witness(&alg, &op)?.map(|w| w.vertex);
        out.push(Check::new(
            7,
            &format!("{name} fpd witness"),
            witness.as_deref() == Some("2"),
            format!("{witness:?}"),
        ));
        let removal = remove_arrow(&alg, alpha)?;
        let t = triangular_reduction_bound(removal.gamma.quiver());
        out.push(Check::new(
            7,
            &format!("{name} triangular reduction of the quotient"),
            t.bound == Some(7),
            format!("{:?}", t.bound),
        ));
        let report = main_bound(&alg, alpha, DEFAULT_CUTOFF)?;
        let check = Check::new(
            7,
            &format!("{name} bound 0 < fpd <= 9"),
            report.fpd_lower == 1 && report.fpd_upper == Some(9),
            format!(
                "lower {} upper {:?} failed at {:?}",
                report.fpd_lower, report.fpd_upper, report.failed_stage
            ),
        );
        out.push(if name == "exam3" {
            check.known(KNOWN_EXAM3_STRICTNESS)
        } else {
            check
        });
    }
    Ok(out)
}

/// Division by the basis leaves a remainder free of tips and reconstructs the input.
pub fn property_division<R: Rng + ?Sized>(rng: &mut R) -> std::result::Result<(), String> {
    let alg = sample::random_algebra(rng).map_err(|e| e.to_string())?;
    let z = sample::random_mixed_element(alg.quiver(), alg.field(), rng, 4);
    let gb = alg.groebner();
    let d = gb.divide(&z);
    if let Some(p) = d.remainder.paths().find(|p| gb.is_tip_divisible(p)) {
        return Err(format!("remainder term {} is reducible", alg.quiver().path_name(p)));
    }
    if d.reconstruct(gb.elements(), gb.order()) != z {
        return Err("division does not reconstruct its input".into());
    }
    Ok(())
}

/// Every overlap relation of the completed and reduced bases reduces to zero.
pub fn property_diamond<R: Rng + ?Sized>(rng: &mut R) -> std::result::Result<(), String> {
    let alg = sample::random_algebra(rng).map_err(|e| e.to_string())?;
    for gb in [alg.completed(), alg.groebner()] {
        if let Some((_, r)) = gb.diamond_violation() {
            return Err(format!("overlap leaves {}", alg.render(&r)));
        }
    }
    Ok(())
}

/// Subpaths of non-tip paths are non-tip paths.
pub fn property_subpath_closure<R: Rng + ?Sized>(rng: &mut R) -> std::result::Result<(), String> {
    let alg = sample::random_algebra(rng).map_err(|e| e.to_string())?;
    let basis = alg.basis();
    for p in basis.paths() {
        for i in 0..=p.len() {
            for j in i..=p.len() {
                let s = p.subpath(i, j);
                if basis.index_of(&s).is_none() {
                    return Err(format!(
                        "{} lost its subpath {}",
                        alg.quiver().path_name(p),
                        alg.quiver().path_name(&s)
                    ));
                }
            }
        }
    }
    Ok(())
}

/// `N(N(x)) = N(x)` and `N(N(x) N(y)) = N(xy)`.
pub fn property_normal_form<R: Rng + ?Sized>(rng: &mut R) -> std::result::Result<(), String> {
    let alg = sample::random_algebra(rng).map_err(|e| e.to_string())?;
    let (q, f) = (alg.quiver(), alg.field());
    let x = sample::random_mixed_element(q, f, rng, 4);
    let y = sample::random_mixed_element(q, f, rng, 4);
    let (nx, ny) = (alg.normal_form(&x), alg.normal_form(&y));
    if alg.normal_form(&nx) != nx {
        return Err(format!("normal form of {} is not idempotent", alg.render(&x)));
    }
    if alg.normal_form(&nx.mul(&ny)) != alg.normal_form(&x.mul(&y)) {
        return Err(format!(
            "normal form is not multiplicative on {} and {}",
            alg.render(&x),
            alg.render(&y)
        ));
    }
    Ok(())
}

/// Resolutions of random right ideals are exact and minimal.
pub fn property_resolution<R: Rng + ?Sized>(rng: &mut R) -> std::result::Result<(), String> {
    let alg = sample::random_algebra(rng).map_err(|e| e.to_string())?;
    let gens: Vec<_> = (0..rng.gen_range(1..=2))
        .map(|_| sample::random_vector(&alg, rng))
        .collect();
    let m = right_ideal(&alg, &gens).map_err(|e| e.to_string())?;
    // Syzygies of wild algebras grow geometrically; stop once they are large.
    let mut res = resolve(&alg, &m, 1).map_err(|e| e.to_string())?;
    for steps in 2..=4 {
        if res.syzygies.last().is_none_or(|s| s.dim() > 30) {
            break;
        }
        res = resolve(&alg, &m, steps).map_err(|e| e.to_string())?;
    }
    res.check_exactness()?;
    if !(res.minimal && res.check_minimality()) {
        return Err("resolution is not minimal".into());
    }
    Ok(())
}

/// Two generating sets of one ideal give the same reduced basis.
pub fn property_reduced_invariance<R: Rng + ?Sized>(rng: &mut R) -> std::result::Result<(), String> {
    let alg = sample::random_algebra(rng).map_err(|e| e.to_string())?;
    let gens = sample::regenerate(&alg, rng);
    let other = Algebra::new(
        alg.quiver().clone(),
        alg.field(),
        alg.order().clone(),
        gens,
        DEFAULT_CAP,
    )
    .map_err(|e| e.to_string())?;
    if alg.groebner().elements() != other.groebner().elements() {
        return Err(format!(
            "reduced bases differ: {:?} and {:?}",
            monic_set(alg.groebner().elements(), &alg),
            monic_set(other.groebner().elements(), &other)
        ));
    }
    Ok(())
}

pub type Property8 = fn(&mut ChaCha8Rng) -> std::result::Result<(), String>;

pub const PROPERTIES: &[(&str, Property8)] = &[
    ("division remainder is irreducible", property_division),
    ("overlaps reduce to zero after completion", property_diamond),
    ("non-tip paths are closed under subpaths", property_subpath_closure),
    ("normal form is idempotent and multiplicative", property_normal_form),
    ("resolutions are exact and minimal", property_resolution),
    (
        "reduced basis is independent of the generating set",
        property_reduced_invariance,
    ),
];

fn criterion8(samples: usize, seed: u64) -> Vec<Check> {
    PROPERTIES
        .iter()
        .map(|(name, f)| {
            let mut failure = None;
            for i in 0..samples {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
                if let Err(e) = f(&mut rng) {
                    failure = Some(format!("sample {i}: {e}"));
                    break;
                }
            }
            Check::new(
                8,
                name,
                failure.is_none(),
                failure.unwrap_or_else(|| format!("{samples} samples")),
            )
        })
        .collect()
}

type CorpusCriterion = fn() -> Result<Vec<Check>>;

/// All checks. An error inside one criterion is reported as its failure.
pub fn run(samples: usize, seed: u64) -> Vec<Check> {
    let corpus_criteria: [(u8, CorpusCriterion); 7] = [
        (1, criterion1),
        (2, criterion2),
        (3, criterion3),
        (4, criterion4),
        (5, criterion5),
        (6, criterion6),
        (7, criterion7),
    ];
    let mut out = Vec::new();
    for (n, f) in corpus_criteria {
        match f() {
            Ok(checks) => out.extend(checks),
            Err(e) => out.push(Check::new(n, "evaluation", false, e.to_string())),
        }
    }
    out.extend(criterion8(samples, seed));
    out
}
