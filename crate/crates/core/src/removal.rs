//! Monomial arrow removal: the properties (P1)-(P3), classification of
//! generating sets and Gröbner bases, and the quotient by an arrow.

use serde::Serialize;

use crate::algebra::Algebra;
use crate::element::FreeElement;
use crate::error::{Error, Result};
use crate::linalg::SparseVec;
use crate::order::tip;
use crate::quiver::{divides, overlaps_right, ArrowId, Path, Quiver};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Property {
    P1,
    P2,
    P2op,
    P3,
}

/// A machine-checkable reason why a property fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Counterexample {
    /// An element other than `p*alpha*q` that involves `alpha`.
    InvolvesArrow { element: FreeElement },
    /// `x * v = u * p` (P2) or `q * v = u * x` (P2op).
    Overlap { path: Path, u: Path, v: Path },
    /// `target = left * path * right`, where `target` is `p` or `q`.
    Divides {
        path: Path,
        target: Path,
        left: Path,
        right: Path,
    },
}

impl Counterexample {
    /// Re-derives the failure from the path primitives.
    pub fn recheck(&self, alpha: ArrowId, p: &Path, q: &Path) -> bool {
        match self {
            Counterexample::InvolvesArrow { element } => !element.avoids(alpha),
            Counterexample::Overlap { path, u, v } => {
                overlaps_right(p, path).contains(&(u.clone(), v.clone()))
                    || overlaps_right(path, q).contains(&(u.clone(), v.clone()))
            }
            Counterexample::Divides {
                path,
                target,
                left,
                right,
            } => (target == p || target == q) && divides(path, target).contains(&(left.clone(), right.clone())),
        }
    }

    fn describe(&self, quiver: &Quiver, render: &dyn Fn(&FreeElement) -> String) -> String {
        let n = |p: &Path| quiver.path_name(p);
        match self {
            Counterexample::InvolvesArrow { element } => {
                format!("{} involves the arrow", render(element))
            }
            Counterexample::Overlap { path, u, v } => {
                format!("{} overlaps (u = {}, v = {})", n(path), n(u), n(v))
            }
            Counterexample::Divides {
                path,
                target,
                left,
                right,
            } => format!(
                "{} divides {} = {} * {} * {}",
                n(path),
                n(target),
                n(left),
                n(path),
                n(right)
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyWitness {
    pub property: Property,
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
}

/// Evaluates (P1) on `elements` and (P2), (P2)^op, (P3) on `paths`.
///
/// For a generating set `paths` are all paths occurring in it; for a Gröbner
/// basis they are its tips.
pub fn check_properties(
    elements: &[FreeElement],
    paths: &[Path],
    alpha: ArrowId,
    p: &Path,
    q: &Path,
) -> Result<Vec<PropertyWitness>> {
    if p.target() != alpha.source() || q.source() != alpha.target() {
        return Err(Error::InvalidArgument(
            "p must end where alpha starts and q must start where alpha ends".into(),
        ));
    }
    if p.contains_arrow(alpha) || q.contains_arrow(alpha) {
        return Err(Error::InvalidArgument("p and q must avoid alpha".into()));
    }
    let paq = p
        .compose(&Path::from_arrow(alpha))
        .and_then(|pa| pa.compose(q))
        .expect("endpoints checked");
    let mut out = Vec::with_capacity(4);

    let p1 = elements
        .iter()
        .find(|z| !z.avoids(alpha) && z.as_monomial().map(|(m, _)| m) != Some(&paq))
        .map(|z| Counterexample::InvolvesArrow { element: z.clone() });
    out.push(PropertyWitness {
        property: Property::P1,
        holds: p1.is_none(),
        counterexample: p1,
    });

    let p2 = paths.iter().find_map(|x| {
        overlaps_right(p, x)
            .into_iter()
            .next()
            .map(|(u, v)| Counterexample::Overlap { path: x.clone(), u, v })
    });
    out.push(PropertyWitness {
        property: Property::P2,
        holds: p2.is_none(),
        counterexample: p2,
    });

    let p2op = paths.iter().find_map(|x| {
        overlaps_right(x, q)
            .into_iter()
            .next()
            .map(|(u, v)| Counterexample::Overlap { path: x.clone(), u, v })
    });
    out.push(PropertyWitness {
        property: Property::P2op,
        holds: p2op.is_none(),
        counterexample: p2op,
    });

    let p3 = paths.iter().find_map(|x| {
        [p, q].into_iter().find_map(|target| {
            divides(x, target)
                .into_iter()
                .next()
                .map(|(left, right)| Counterexample::Divides {
                    path: x.clone(),
                    target: target.clone(),
                    left,
                    right,
                })
        })
    });
    out.push(PropertyWitness {
        property: Property::P3,
        holds: p3.is_none(),
        counterexample: p3,
    });
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    None,
    AlphaMonomial,
    Single,
    StrictGenset,
    StrictGroebner,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    GeneratingSet,
    CompletedGroebner,
    ReducedGroebner,
}

/// One `(p, q)` split of an element `p*alpha*q` and how it fares.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub basis: BasisKind,
    pub p: Path,
    pub q: Path,
    /// `false` when a proper subpath of `p*alpha*q` lies in the ideal.
    pub subpaths_outside_ideal: bool,
    pub witnesses: Vec<PropertyWitness>,
}

impl Candidate {
    pub fn holds(&self, property: Property) -> bool {
        self.witnesses.iter().any(|w| w.property == property && w.holds)
    }

    pub fn all_hold(&self) -> bool {
        self.witnesses.iter().all(|w| w.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyWitness> {
        self.witnesses.iter().filter(|w| !w.holds)
    }
}

#[derive(Clone, Debug)]
pub struct RemovalCertificate {
    pub arrow: ArrowId,
    pub level: Level,
    /// The pair `(p, q)` when the level is single or stronger.
    pub pq: Option<(Path, Path)>,
    pub basis: BasisKind,
    pub basis_used: Vec<FreeElement>,
    pub candidates: Vec<Candidate>,
    pub notes: Vec<String>,
}

impl RemovalCertificate {
    pub fn is_strict(&self) -> bool {
        self.level >= Level::StrictGenset
    }

    /// JSON view with paths and elements rendered by name.
    pub fn to_json(&self, alg: &Algebra) -> serde_json::Value {
        let q = alg.quiver();
        let render = |z: &FreeElement| alg.render(z);
        let candidates: Vec<serde_json::Value> = self
            .candidates
            .iter()
            .map(|c| {
                serde_json::json!({
                    "basis": c.basis,
                    "p": q.path_name(&c.p),
                    "q": q.path_name(&c.q),
                    "subpaths_outside_ideal": c.subpaths_outside_ideal,
                    "properties": c.witnesses.iter().map(|w| serde_json::json!({
                        "property": w.property,
                        "holds": w.holds,
                        "counterexample": w.counterexample.as_ref().map(|x| x.describe(q, &render)),
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({
            "arrow": q.arrow_name(self.arrow),
            "level": self.level,
            "p": self.pq.as_ref().map(|(p, _)| q.path_name(p)),
            "q": self.pq.as_ref().map(|(_, x)| q.path_name(x)),
            "basis": self.basis,
            "basis_used": self.basis_used.iter().map(render).collect::<Vec<_>>(),
            "candidates": candidates,
            "notes": self.notes,
        })
    }
}

/// Every path occurring in `elements`, without repetition, in first-seen order.
pub fn occurring_paths(elements: &[FreeElement]) -> Vec<Path> {
    let mut out: Vec<Path> = Vec::new();
    for z in elements {
        for p in z.paths() {
            if !out.contains(p) {
                out.push(p.clone());
            }
        }
    }
    out
}

/// Splits of monomials `p*alpha*q` in `elements` with `alpha` occurring once.
pub fn splits(elements: &[FreeElement], alpha: ArrowId) -> Vec<(Path, Path)> {
    let mut out = Vec::new();
    for z in elements {
        let Some((m, _)) = z.as_monomial() else { continue };
        let pos: Vec<usize> = (0..m.len()).filter(|i| m.arrows()[*i] == alpha).collect();
        if let [i] = pos[..] {
            let split = (m.subpath(0, i), m.subpath(i + 1, m.len()));
            if !out.contains(&split) {
                out.push(split);
            }
        }
    }
    out
}

/// Every element that is not a scalar multiple of a path avoids `alpha`.
pub fn is_alpha_monomial(elements: &[FreeElement], alpha: ArrowId) -> bool {
    elements.iter().all(|z| z.as_monomial().is_some() || z.avoids(alpha))
}

fn proper_subpaths_outside(alg: &Algebra, paq: &Path) -> bool {
    let one = alg.field().one();
    for start in 0..paq.len() {
        for end in start + 1..=paq.len() {
            if end - start == paq.len() {
                continue;
            }
            let sub = FreeElement::monomial(paq.subpath(start, end), one.clone());
            if alg.contains(&sub) {
                return false;
            }
        }
    }
    true
}

fn compose3(p: &Path, alpha: ArrowId, q: &Path) -> Path {
    p.compose(&Path::from_arrow(alpha))
        .and_then(|x| x.compose(q))
        .expect("split of a path")
}

fn evaluate(
    alg: &Algebra,
    elements: &[FreeElement],
    paths: &[Path],
    alpha: ArrowId,
    basis: BasisKind,
) -> Vec<Candidate> {
    splits(elements, alpha)
        .into_iter()
        .map(|(p, q)| {
            let witnesses = check_properties(elements, paths, alpha, &p, &q).expect("valid split");
            Candidate {
                basis,
                subpaths_outside_ideal: proper_subpaths_outside(alg, &compose3(&p, alpha, &q)),
                p,
                q,
                witnesses,
            }
        })
        .collect()
}

/// Level of a generating set by the definition: α-monomial, then single
/// (with the subpath condition), then strict (no overlaps, no divisions).
pub fn classify_generating_set(alg: &Algebra, t: &[FreeElement], alpha: ArrowId) -> Result<RemovalCertificate> {
    for g in t {
        if !alg.contains(g) {
            return Err(Error::InvalidArgument(format!("{} is not in the ideal", alg.render(g))));
        }
    }
    let own = crate::groebner::complete(t, alg.order(), crate::groebner::DEFAULT_CAP)?;
    if alg.groebner().elements().iter().any(|g| !own.normal_form(g).is_zero()) {
        return Err(Error::InvalidArgument("the set does not generate the ideal".into()));
    }
    let paths = occurring_paths(t);
    let candidates = evaluate(alg, t, &paths, alpha, BasisKind::GeneratingSet);
    let mut level = if is_alpha_monomial(t, alpha) {
        Level::AlphaMonomial
    } else {
        Level::None
    };
    let mut pq = None;
    if level == Level::AlphaMonomial {
        // Single needs P1 non-trivially, the subpath condition and a non-trivial side.
        let single = candidates
            .iter()
            .find(|c| c.holds(Property::P1) && c.subpaths_outside_ideal && !(c.p.is_trivial() && c.q.is_trivial()));
        if let Some(c) = single {
            level = Level::Single;
            pq = Some((c.p.clone(), c.q.clone()));
            if let Some(s) = candidates
                .iter()
                .find(|c| c.all_hold() && c.subpaths_outside_ideal && !(c.p.is_trivial() && c.q.is_trivial()))
            {
                level = Level::StrictGenset;
                pq = Some((s.p.clone(), s.q.clone()));
            }
        }
    }
    let mut notes = Vec::new();
    if alpha.is_loop() {
        notes.push("alpha is a loop".into());
    }
    Ok(RemovalCertificate {
        arrow: alpha,
        level,
        pq,
        basis: BasisKind::GeneratingSet,
        basis_used: t.to_vec(),
        candidates,
        notes,
    })
}

/// Strictness of a generating set decided through the properties alone:
/// (P1) non-trivially, (P2), (P2)^op and (P3). Agrees with
/// [`classify_generating_set`] reaching [`Level::StrictGenset`].
pub fn strict_by_properties(t: &[FreeElement], alpha: ArrowId) -> Option<(Path, Path)> {
    let paths = occurring_paths(t);
    splits(t, alpha).into_iter().find(|(p, q)| {
        check_properties(t, &paths, alpha, p, q)
            .expect("valid split")
            .iter()
            .all(|w| w.holds)
    })
}

/// Whether the reduced Gröbner basis of the algebra is strict α-monomial.
///
/// The decision uses the reduced basis: exactly one element involves α, it is
/// a path `p*alpha*q`, and the tips satisfy (P2), (P2)^op and (P3). Candidates
/// from the completed (unreduced) basis are evaluated as extra diagnostics.
pub fn strict_groebner_witness(alg: &Algebra, alpha: ArrowId) -> RemovalCertificate {
    let red = alg.groebner();
    let red_tips: Vec<Path> = red.tip_paths().cloned().collect();
    let mut candidates = evaluate(alg, red.elements(), &red_tips, alpha, BasisKind::ReducedGroebner);
    let decisive = candidates
        .iter()
        .find(|c| c.all_hold() && !(c.p.is_trivial() && c.q.is_trivial()))
        .map(|c| (c.p.clone(), c.q.clone()));
    let done = alg.completed();
    if done.len() != red.len() || done.elements() != red.elements() {
        let tips: Vec<Path> = done.tip_paths().cloned().collect();
        candidates.extend(evaluate(
            alg,
            done.elements(),
            &tips,
            alpha,
            BasisKind::CompletedGroebner,
        ));
    }
    let mut notes = Vec::new();
    let involving: Vec<&FreeElement> = red.elements().iter().filter(|z| !z.avoids(alpha)).collect();
    if involving.is_empty() {
        notes.push("no element of the reduced basis involves alpha".into());
    }
    let level = match &decisive {
        Some(_) => {
            assert!(!alpha.is_loop(), "a strict certificate forces a non-loop arrow");
            Level::StrictGroebner
        }
        None if is_alpha_monomial(red.elements(), alpha) => Level::AlphaMonomial,
        None => Level::None,
    };
    RemovalCertificate {
        arrow: alpha,
        level,
        pq: decisive,
        basis: BasisKind::ReducedGroebner,
        basis_used: red.elements().to_vec(),
        candidates,
        notes,
    }
}

/// `Γ = Λ/<α>` presented as `kQ*/I*`, with the cleft maps.
#[derive(Clone, Debug)]
pub struct Removal {
    pub arrow: ArrowId,
    pub gamma: Algebra,
    /// Old-to-new arrow map `Q -> Q*`.
    pub arrow_map: Vec<Option<ArrowId>>,
    /// Which generating set supplied `I*`.
    pub source: BasisKind,
    /// Images of Γ's basis in Λ's coordinates.
    pub nu: Vec<SparseVec>,
    /// Images of Λ's basis in Γ's coordinates.
    pub pi: Vec<SparseVec>,
    /// Λ-basis indices spanning the ideal generated by α.
    pub ideal_basis: Vec<usize>,
    pub notes: Vec<String>,
}

/// Removes `alpha` using the first α-monomial set among the generators,
/// the completed basis and the reduced basis. Checks `π ν = id`, that `ν` is
/// multiplicative and that `dim Λ = dim Γ + dim <α>`.
pub fn remove_arrow(alg: &Algebra, alpha: ArrowId) -> Result<Removal> {
    let choices = [
        (BasisKind::GeneratingSet, alg.generators().to_vec()),
        (BasisKind::CompletedGroebner, alg.completed().elements().to_vec()),
        (BasisKind::ReducedGroebner, alg.groebner().elements().to_vec()),
    ];
    let (source, set) = choices
        .into_iter()
        .find(|(_, s)| is_alpha_monomial(s, alpha))
        .ok_or_else(|| Error::Certificate("not alpha-monomial".into()))?;
    let q = alg.quiver();
    let (qs, map) = q.without_arrow(alpha);
    let order = alg.order().restricted(&map);
    let mapped = |p: &Path| -> Option<Path> {
        if p.is_trivial() {
            return Some(p.clone());
        }
        let arrows: Option<Vec<ArrowId>> = p.arrows().iter().map(|a| map[a.index()]).collect();
        Path::from_arrows(arrows?)
    };
    let avoiding: Vec<FreeElement> = set
        .iter()
        .filter(|z| z.avoids(alpha))
        .map(|z| z.map_paths(|p| mapped(p)))
        .collect();
    let gamma = Algebra::new(qs.clone(), alg.field(), order, avoiding, crate::groebner::DEFAULT_CAP)?;

    let lb = alg.basis();
    let gb = gamma.basis();
    let inverse_map: Vec<ArrowId> = {
        let mut inv = vec![None; qs.arrow_count()];
        for (old, new) in map.iter().enumerate() {
            if let Some(n) = new {
                inv[n.index()] = Some(q.arrow_at(old));
            }
        }
        inv.into_iter().map(|a| a.expect("bijective")).collect()
    };
    let lift = |p: &Path| -> Path {
        if p.is_trivial() {
            return p.clone();
        }
        Path::from_arrows(p.arrows().iter().map(|a| inverse_map[a.index()]).collect()).expect("path")
    };
    let nu: Vec<SparseVec> = gb.paths().iter().map(|p| lb.path_vector(&lift(p))).collect();
    let pi: Vec<SparseVec> = lb
        .paths()
        .iter()
        .map(|p| match mapped(p) {
            Some(m) => gb.path_vector(&m),
            None => SparseVec::new(),
        })
        .collect();
    let ideal_basis: Vec<usize> = (0..lb.dim()).filter(|i| lb.path(*i).contains_arrow(alpha)).collect();

    let apply = |images: &[SparseVec], x: &SparseVec| -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in x.entries() {
            out = out.axpy(c, &images[*i]);
        }
        out
    };
    let one = alg.field().one();
    for i in 0..gb.dim() {
        let e = SparseVec::unit(i, one.clone());
        if apply(&pi, &apply(&nu, &e)) != e {
            return Err(Error::Invariant(format!(
                "pi(nu({})) differs from itself",
                qs.path_name(gb.path(i))
            )));
        }
    }
    for i in 0..gb.dim() {
        for j in 0..gb.dim() {
            if gb.path(i).target() != gb.path(j).source() {
                continue;
            }
            let x = SparseVec::unit(i, one.clone());
            let y = SparseVec::unit(j, one.clone());
            let lhs = apply(&nu, &gb.mul(&x, &y));
            let rhs = lb.mul(&nu[i], &nu[j]);
            if lhs != rhs {
                return Err(Error::Invariant("nu is not multiplicative".into()));
            }
        }
    }
    if lb.dim() != gb.dim() + ideal_basis.len() {
        return Err(Error::Invariant(format!(
            "dim Lambda = {} but dim Gamma + dim <alpha> = {} + {}",
            lb.dim(),
            gb.dim(),
            ideal_basis.len()
        )));
    }
    // The alpha-paths must span a two-sided ideal.
    let in_ideal = |v: &SparseVec| v.entries().iter().all(|(k, _)| lb.path(*k).contains_arrow(alpha));
    for &i in &ideal_basis {
        for &a in q.arrows() {
            if !in_ideal(lb.right_arrow(a, i)) || !in_ideal(lb.left_arrow(a, i)) {
                return Err(Error::Invariant("the alpha-paths do not span an ideal".into()));
            }
        }
    }

    let mut notes = Vec::new();
    if source != BasisKind::GeneratingSet {
        notes.push(format!("I* generated from the {source:?} basis"));
    }
    notes.extend(parallel_substitution_notes(&gamma));
    Ok(Removal {
        arrow: alpha,
        gamma,
        arrow_map: map,
        source,
        nu,
        pi,
        ideal_basis,
        notes,
    })
}

/// Binomials `u*a - u*b` (or `a*u - b*u`) with parallel arrows `a`, `b` become
/// monomial after the change of arrows `a' = a - b`. Reported, not applied.
pub fn parallel_substitution_notes(alg: &Algebra) -> Vec<String> {
    let q = alg.quiver();
    let mut out = Vec::new();
    for z in alg.groebner().elements() {
        let terms: Vec<(&Path, &crate::scalar::Scalar)> = z.terms().collect();
        if terms.len() != 2 || !(terms[0].1 + terms[1].1).is_zero() {
            continue;
        }
        let (x, y) = (terms[0].0, terms[1].0);
        if x.len() != y.len() || x.is_trivial() {
            continue;
        }
        let diff: Vec<usize> = (0..x.len()).filter(|i| x.arrows()[*i] != y.arrows()[*i]).collect();
        if let [i] = diff[..] {
            if i == 0 || i == x.len() - 1 {
                let (a, b) = (x.arrows()[i], y.arrows()[i]);
                let (tz, _) = tip(z, alg.order()).expect("nonzero");
                let (big, small) = if tz == *x { (a, b) } else { (b, a) };
                out.push(format!(
                    "the change of arrows {0}' = {0} - {1} turns {2} into a monomial relation",
                    q.arrow_name(small),
                    q.arrow_name(big),
                    alg.render(z)
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;

    fn q() -> Quiver {
        let arrows = [("x", "1", "2"), ("a", "2", "3"), ("y", "3", "4"), ("z", "4", "5")]
            .map(|(a, s, t)| (a.to_string(), s.to_string(), t.to_string()));
        Quiver::new(["1", "2", "3", "4", "5"], arrows).unwrap()
    }

    #[test]
    fn endpoint_mismatch_is_an_error() {
        let q = q();
        let a = q.arrow("a").unwrap();
        let bad = q.parse_path("y").unwrap();
        assert!(check_properties(&[], &[], a, &bad, &bad).is_err());
    }

    #[test]
    fn no_alpha_paths_means_p1_holds() {
        let q = q();
        let a = q.arrow("a").unwrap();
        let f = crate::scalar::Field::Rationals;
        let t = vec![FreeElement::monomial(q.parse_path("y*z").unwrap(), f.one())];
        let p = q.parse_path("x").unwrap();
        let qq = q.parse_path("y").unwrap();
        let w = check_properties(&t, &occurring_paths(&t), a, &p, &qq).unwrap();
        assert!(w[0].holds);
        // y*z starts with q = y, so q overlaps with it from the right.
        assert!(!w[2].holds);
        let c = w[2].counterexample.as_ref().unwrap();
        assert!(c.recheck(a, &p, &qq));
    }
}
