//! Admissible orders on paths, tips and tip coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;

use crate::element::FreeElement;
use crate::error::{Error, Result};
use crate::quiver::{ArrowId, Path, Quiver, VertexId};
use crate::scalar::Scalar;

/// A total order on the paths of one quiver.
pub trait PathOrder {
    fn compare(&self, u: &Path, v: &Path) -> Ordering;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderKind {
    LengthLex,
}

/// Length-lexicographic order: shorter paths first, then arrow by arrow
/// according to a precedence on arrows. Trivial paths compare by vertex id.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdmissibleOrder {
    kind: OrderKind,
    rank: Vec<u32>,
}

impl AdmissibleOrder {
    /// Arrow precedence follows declaration order.
    pub fn length_lex(q: &Quiver) -> AdmissibleOrder {
        AdmissibleOrder {
            kind: OrderKind::LengthLex,
            rank: (0..q.arrow_count() as u32).collect(),
        }
    }

    /// Listed arrows come first in the given order; the rest keep declaration order.
    pub fn with_precedence(q: &Quiver, listed: &[ArrowId]) -> Result<AdmissibleOrder> {
        let mut seen = vec![false; q.arrow_count()];
        let mut sequence = Vec::with_capacity(q.arrow_count());
        for a in listed {
            if a.index() >= q.arrow_count() || q.arrow_at(a.index()) != *a {
                return Err(Error::InvalidArgument(format!(
                    "arrow #{} is not in this quiver",
                    a.index()
                )));
            }
            if std::mem::replace(&mut seen[a.index()], true) {
                return Err(Error::Semantic {
                    token: q.arrow_name(*a).to_string(),
                    message: "arrow listed twice in order".into(),
                });
            }
            sequence.push(a.index());
        }
        sequence.extend((0..q.arrow_count()).filter(|i| !seen[*i]));
        let mut rank = vec![0; q.arrow_count()];
        for (r, i) in sequence.into_iter().enumerate() {
            rank[i] = r as u32;
        }
        Ok(AdmissibleOrder {
            kind: OrderKind::LengthLex,
            rank,
        })
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    /// Arrow indices from smallest to largest.
    pub fn precedence(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.rank.len()).collect();
        idx.sort_by_key(|i| self.rank[*i]);
        idx
    }

    /// Whether the order uses plain declaration order.
    pub fn is_default(&self) -> bool {
        self.rank.iter().enumerate().all(|(i, r)| *r as usize == i)
    }

    pub fn compare_checked(&self, u: &Path, v: &Path) -> Result<Ordering> {
        let n = self.rank.len();
        if u.arrows().iter().chain(v.arrows()).any(|a| a.index() >= n) {
            return Err(Error::InvalidArgument(
                "paths do not belong to the quiver of this order".into(),
            ));
        }
        Ok(self.compare(u, v))
    }

    /// The induced order on a subquiver, given the old-to-new arrow map.
    pub fn restricted(&self, map: &[Option<ArrowId>]) -> AdmissibleOrder {
        let mut kept: Vec<(u32, usize)> = map
            .iter()
            .enumerate()
            .filter_map(|(old, new)| new.map(|n| (self.rank[old], n.index())))
            .collect();
        kept.sort();
        let mut rank = vec![0; kept.len()];
        for (r, (_, new)) in kept.into_iter().enumerate() {
            rank[new] = r as u32;
        }
        AdmissibleOrder { kind: self.kind, rank }
    }

    fn arrow_rank(&self, a: ArrowId) -> u32 {
        self.rank[a.index()]
    }
}

impl PathOrder for AdmissibleOrder {
    fn compare(&self, u: &Path, v: &Path) -> Ordering {
        u.len()
            .cmp(&v.len())
            .then_with(|| {
                for (a, b) in u.arrows().iter().zip(v.arrows()) {
                    match self.arrow_rank(*a).cmp(&self.arrow_rank(*b)) {
                        Ordering::Equal => {}
                        other => return other,
                    }
                }
                Ordering::Equal
            })
            .then_with(|| u.source().cmp(&v.source()))
    }
}

impl<O: PathOrder + ?Sized> PathOrder for &O {
    fn compare(&self, u: &Path, v: &Path) -> Ordering {
        (**self).compare(u, v)
    }
}

/// The largest path in the support of `z` together with its coefficient.
pub fn tip(z: &FreeElement, order: &dyn PathOrder) -> Result<(Path, Scalar)> {
    z.terms()
        .max_by(|a, b| order.compare(a.0, b.0))
        .map(|(p, c)| (p.clone(), c.clone()))
        .ok_or(Error::TipOfZero)
}

pub fn tip_path<'a>(z: &'a FreeElement, order: &dyn PathOrder) -> Option<&'a Path> {
    z.paths().max_by(|a, b| order.compare(a, b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Totality,
    RightCompatible,
    LeftCompatible,
    Subpath,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    /// The offending paths: `(p, q, r)` for compatibility, `(r, p)` for subpaths.
    pub paths: Vec<Path>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub max_len: usize,
    pub paths_checked: usize,
    pub violation: Option<AxiomViolation>,
}

impl AdmissibilityReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Exhaustive check of the compatibility and subpath axioms on all paths of
/// length at most `max_len`. Well-foundedness is structural for length-lex.
pub fn check_admissibility<O: PathOrder>(order: &O, q: &Quiver, max_len: usize) -> Result<AdmissibilityReport> {
    if max_len < 2 {
        return Err(Error::InvalidArgument("max_len must be at least 2".into()));
    }
    let paths = q.paths_up_to(max_len);
    let report = |violation| AdmissibilityReport {
        max_len,
        paths_checked: paths.len(),
        violation,
    };
    for p in &paths {
        for start in 0..=p.len() {
            for end in start..=p.len() {
                let r = p.subpath(start, end);
                if order.compare(&r, p) == Ordering::Greater {
                    return Ok(report(Some(AxiomViolation {
                        axiom: Axiom::Subpath,
                        paths: vec![r, p.clone()],
                    })));
                }
            }
        }
    }
    let mut by_target: BTreeMap<VertexId, Vec<&Path>> = BTreeMap::new();
    let mut by_source: BTreeMap<VertexId, Vec<&Path>> = BTreeMap::new();
    for p in &paths {
        by_target.entry(p.target()).or_default().push(p);
        by_source.entry(p.source()).or_default().push(p);
    }
    for group in by_target.values() {
        for (i, p) in group.iter().enumerate() {
            for u in &group[i..] {
                let pu = order.compare(p, u);
                if pu != order.compare(u, p).reverse() || (pu == Ordering::Equal) != (p == u) {
                    return Ok(report(Some(AxiomViolation {
                        axiom: Axiom::Totality,
                        paths: vec![(*p).clone(), (*u).clone()],
                    })));
                }
                let (lo, hi) = if pu == Ordering::Greater { (u, p) } else { (p, u) };
                for a in q.arrows_from(p.target()) {
                    let r = Path::from_arrow(a);
                    let (x, y) = (lo.compose(&r).unwrap(), hi.compose(&r).unwrap());
                    if order.compare(&x, &y) == Ordering::Greater {
                        return Ok(report(Some(AxiomViolation {
                            axiom: Axiom::RightCompatible,
                            paths: vec![(*lo).clone(), (*hi).clone(), r],
                        })));
                    }
                }
            }
        }
    }
    for group in by_source.values() {
        for (i, p) in group.iter().enumerate() {
            for u in &group[i + 1..] {
                let (lo, hi) = if order.compare(p, u) == Ordering::Greater {
                    (u, p)
                } else {
                    (p, u)
                };
                for a in q.arrows_into(p.source()) {
                    let r = Path::from_arrow(a);
                    let (x, y) = (r.compose(lo).unwrap(), r.compose(hi).unwrap());
                    if order.compare(&x, &y) == Ordering::Greater {
                        return Ok(report(Some(AxiomViolation {
                            axiom: Axiom::LeftCompatible,
                            paths: vec![(*lo).clone(), (*hi).clone(), r],
                        })));
                    }
                }
            }
        }
    }
    Ok(report(None))
}
