//! Division algorithm, overlap completion and reduced Gröbner bases in kQ.

use serde::Serialize;

use crate::element::FreeElement;
use crate::error::{Error, Result};
use crate::order::{tip, AdmissibleOrder, PathOrder};
use crate::quiver::{overlaps_right, Path};
use crate::scalar::Scalar;

/// Default bound on the number of completion rounds.
pub const DEFAULT_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// The current tip is divisible by a divisor tip; subtract a multiple.
    Divide,
    /// No divisor tip divides the current tip; move it to the remainder.
    Remainder,
}

/// One rule application of the division algorithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionStep {
    pub rule: Rule,
    pub path: Path,
    pub coefficient: Scalar,
    /// `(divisor index, left, right)` for [`Rule::Divide`].
    pub division: Option<(usize, Path, Path)>,
}

#[derive(Clone, Debug)]
pub struct Division {
    pub remainder: FreeElement,
    pub trace: Vec<DivisionStep>,
}

impl Division {
    /// Rebuilds `sum c * l * x_i * r + remainder` from the trace.
    pub fn reconstruct(&self, divisors: &[FreeElement], order: &dyn PathOrder) -> FreeElement {
        let mut acc = self.remainder.clone();
        for step in &self.trace {
            if let Some((i, l, r)) = &step.division {
                let (_, ctip) = tip(&divisors[*i], order).expect("nonzero divisor");
                let c = &step.coefficient * &ctip.inverse().expect("nonzero");
                acc = acc.add(&divisors[*i].sandwich(l, r).scale(&c));
            }
        }
        acc
    }
}

/// Divides `y` by the ordered list `divisors`, choosing the divisor of minimal
/// index and its leftmost occurrence at every step.
pub fn divide(y: &FreeElement, divisors: &[FreeElement], order: &dyn PathOrder) -> Division {
    let tips: Vec<(Path, Scalar)> = divisors
        .iter()
        .map(|x| tip(x, order).expect("divisors must be nonzero"))
        .collect();
    divide_with_tips(y, divisors, &tips, order)
}

pub(crate) fn divide_with_tips(
    y: &FreeElement,
    divisors: &[FreeElement],
    tips: &[(Path, Scalar)],
    order: &dyn PathOrder,
) -> Division {
    let mut current = y.clone();
    let mut remainder = FreeElement::zero();
    let mut trace = Vec::new();
    while let Ok((t, c)) = tip(&current, order) {
        let found = tips
            .iter()
            .enumerate()
            .find_map(|(i, (x, _))| x.leftmost_division(&t).map(|(l, r)| (i, l, r)));
        match found {
            Some((i, l, r)) => {
                let factor = &c * &tips[i].1.inverse().expect("nonzero");
                current = current.sub(&divisors[i].sandwich(&l, &r).scale(&factor));
                trace.push(DivisionStep {
                    rule: Rule::Divide,
                    path: t,
                    coefficient: c,
                    division: Some((i, l, r)),
                });
            }
            None => {
                let term = FreeElement::monomial(t.clone(), c.clone());
                current = current.sub(&term);
                remainder = remainder.add(&term);
                trace.push(DivisionStep {
                    rule: Rule::Remainder,
                    path: t,
                    coefficient: c,
                    division: None,
                });
            }
        }
    }
    Division { remainder, trace }
}

/// `ctip(z)^-1 * z * v - ctip(w)^-1 * u * w`, requiring `tip(z) * v = u * tip(w)`.
pub fn overlap_relation(
    z: &FreeElement,
    w: &FreeElement,
    u: &Path,
    v: &Path,
    order: &dyn PathOrder,
) -> Result<FreeElement> {
    let (tz, cz) = tip(z, order)?;
    let (tw, cw) = tip(w, order)?;
    let left = tz.compose(v);
    if left.is_none() || left != u.compose(&tw) {
        return Err(Error::InvalidArgument(format!(
            "tip(z) * v and u * tip(w) differ for z tip {tz}, w tip {tw}, u {u}, v {v}"
        )));
    }
    let inv = |c: &Scalar| c.inverse().expect("nonzero");
    Ok(z.right_mul_path(v)
        .scale(&inv(&cz))
        .sub(&w.left_mul_path(u).scale(&inv(&cw))))
}

/// Where a critical pair comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    /// `tip(z) * v = u * tip(w)` with a proper overlap (or a prefix/suffix inclusion).
    Overlap,
    /// `tip(z) = u * tip(w) * v` with `u`, `v` both non-trivial, or equal tips.
    Inclusion,
}

/// A critical pair `(z, w)` of a list together with its S-element.
#[derive(Clone, Debug)]
pub struct CriticalPair {
    pub z: usize,
    pub w: usize,
    pub kind: PairKind,
    pub u: Path,
    pub v: Path,
    pub relation: FreeElement,
}

/// Every critical pair of `xs`, ordered by `(z, w)` and then overlap position.
pub fn critical_pairs(xs: &[FreeElement], order: &dyn PathOrder) -> Vec<CriticalPair> {
    let tips: Vec<(Path, Scalar)> = xs.iter().map(|x| tip(x, order).expect("nonzero")).collect();
    let mut out = Vec::new();
    for (i, z) in xs.iter().enumerate() {
        for (j, w) in xs.iter().enumerate() {
            let (tz, cz) = &tips[i];
            let (tw, cw) = &tips[j];
            for (u, v) in overlaps_right(tw, tz) {
                let relation = z
                    .right_mul_path(&v)
                    .scale(&cz.inverse().expect("nonzero"))
                    .sub(&w.left_mul_path(&u).scale(&cw.inverse().expect("nonzero")));
                out.push(CriticalPair {
                    z: i,
                    w: j,
                    kind: PairKind::Overlap,
                    u,
                    v,
                    relation,
                });
            }
            if i == j {
                continue;
            }
            for (l, r) in crate::quiver::divides(tw, tz) {
                let both_trivial = l.is_trivial() && r.is_trivial();
                let interior = !l.is_trivial() && !r.is_trivial();
                if !(interior || (both_trivial && i < j)) {
                    continue;
                }
                let relation = z
                    .scale(&cz.inverse().expect("nonzero"))
                    .sub(&w.sandwich(&l, &r).scale(&cw.inverse().expect("nonzero")));
                out.push(CriticalPair {
                    z: i,
                    w: j,
                    kind: PairKind::Inclusion,
                    u: l,
                    v: r,
                    relation,
                });
            }
        }
    }
    out
}

fn monic(z: &FreeElement, order: &dyn PathOrder) -> FreeElement {
    let (_, c) = tip(z, order).expect("nonzero");
    z.scale(&c.inverse().expect("nonzero"))
}

/// One round of completion: `xs` followed by the new nonzero remainders of
/// all critical pairs, in pair order. Duplicates up to scalars are skipped.
pub fn extend(xs: &[FreeElement], order: &dyn PathOrder) -> Vec<FreeElement> {
    extend_within(xs, order, usize::MAX).expect("unbounded")
}

/// As [`extend`], giving up with `None` once the result would exceed
/// `max_elements`.
fn extend_within(xs: &[FreeElement], order: &dyn PathOrder, max_elements: usize) -> Option<Vec<FreeElement>> {
    let mut out: Vec<FreeElement> = xs.to_vec();
    let mut seen: Vec<FreeElement> = xs.iter().map(|x| monic(x, order)).collect();
    for pair in critical_pairs(xs, order) {
        let r = divide(&pair.relation, xs, order).remainder;
        if r.is_zero() {
            continue;
        }
        let m = monic(&r, order);
        if !seen.contains(&m) {
            if out.len() >= max_elements {
                return None;
            }
            seen.push(m);
            out.push(r);
        }
    }
    Some(out)
}

/// A Gröbner basis together with its order and cached tips.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    elements: Vec<FreeElement>,
    order: AdmissibleOrder,
    tips: Vec<(Path, Scalar)>,
    rounds: usize,
}

impl GroebnerBasis {
    /// Wraps a list that is already known to be a Gröbner basis.
    pub fn from_elements(elements: Vec<FreeElement>, order: AdmissibleOrder) -> Result<GroebnerBasis> {
        let tips = elements.iter().map(|x| tip(x, &order)).collect::<Result<Vec<_>>>()?;
        Ok(GroebnerBasis {
            elements,
            order,
            tips,
            rounds: 0,
        })
    }

    pub fn elements(&self) -> &[FreeElement] {
        &self.elements
    }

    pub fn order(&self) -> &AdmissibleOrder {
        &self.order
    }

    pub fn tips(&self) -> &[(Path, Scalar)] {
        &self.tips
    }

    pub fn tip_paths(&self) -> impl Iterator<Item = &Path> {
        self.tips.iter().map(|(p, _)| p)
    }

    /// Completion rounds that produced new elements.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn divide(&self, y: &FreeElement) -> Division {
        divide_with_tips(y, &self.elements, &self.tips, &self.order)
    }

    pub fn normal_form(&self, z: &FreeElement) -> FreeElement {
        self.divide(z).remainder
    }

    pub fn is_tip_divisible(&self, p: &Path) -> bool {
        self.tips.iter().any(|(t, _)| t.divides(p))
    }

    /// A critical pair whose remainder is nonzero, if any.
    pub fn diamond_violation(&self) -> Option<(CriticalPair, FreeElement)> {
        critical_pairs(&self.elements, &self.order)
            .into_iter()
            .find_map(|pair| {
                let r = self.normal_form(&pair.relation);
                (!r.is_zero()).then_some((pair, r))
            })
    }

    /// The reduced basis `{ t - N(t) }` over the minimal tips, sorted by tip.
    pub fn reduced(&self) -> GroebnerBasis {
        let mut minimal: Vec<Path> = Vec::new();
        for (t, _) in &self.tips {
            let redundant = self.tips.iter().any(|(s, _)| s != t && s.divides(t));
            if !redundant && !minimal.contains(t) {
                minimal.push(t.clone());
            }
        }
        minimal.sort_by(|a, b| self.order.compare(a, b));
        let one = self.tips.first().map(|(_, c)| c.field().one());
        let elements: Vec<FreeElement> = minimal
            .iter()
            .map(|t| {
                let m = FreeElement::monomial(t.clone(), one.clone().expect("nonempty"));
                m.sub(&self.normal_form(&m))
            })
            .collect();
        GroebnerBasis::from_elements(elements, self.order.clone()).expect("nonzero elements")
    }

    pub fn is_reduced(&self) -> bool {
        let r = self.reduced();
        r.elements.len() == self.elements.len()
            && self
                .elements
                .iter()
                .all(|x| r.elements.contains(&monic(x, &self.order)))
    }
}

/// Runs `extend` until nothing new appears. Fails once more than `cap` rounds
/// would be needed.
pub fn complete(generators: &[FreeElement], order: &AdmissibleOrder, cap: usize) -> Result<GroebnerBasis> {
    complete_within(generators, order, cap, usize::MAX)
}

/// As [`complete`], but also fails once the working set would grow past
/// `max_elements`. A successful result is the same as that of [`complete`].
pub fn complete_within(
    generators: &[FreeElement],
    order: &AdmissibleOrder,
    cap: usize,
    max_elements: usize,
) -> Result<GroebnerBasis> {
    let mut current: Vec<FreeElement> = Vec::new();
    for g in generators {
        if g.is_zero() {
            continue;
        }
        let m = monic(g, order);
        if !current.iter().any(|x| monic(x, order) == m) {
            current.push(g.clone());
        }
    }
    if current.len() > max_elements {
        return Err(Error::CompletionSize(max_elements));
    }
    let mut rounds = 0;
    loop {
        let next = extend_within(&current, order, max_elements).ok_or(Error::CompletionSize(max_elements))?;
        if next.len() == current.len() {
            let mut gb = GroebnerBasis::from_elements(current, order.clone())?;
            gb.rounds = rounds;
            return Ok(gb);
        }
        rounds += 1;
        if rounds > cap {
            return Err(Error::CompletionCap(cap));
        }
        current = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;
    use crate::scalar::Field;

    fn loop_quiver() -> Quiver {
        Quiver::new(["1"], [("x".to_string(), "1".to_string(), "1".to_string())]).unwrap()
    }

    fn two_loops() -> Quiver {
        let arrows = [("x", "1", "1"), ("y", "1", "1")].map(|(a, s, t)| (a.to_string(), s.to_string(), t.to_string()));
        Quiver::new(["1"], arrows).unwrap()
    }

    fn el(q: &Quiver, terms: &[(i64, &str)]) -> FreeElement {
        let f = Field::Rationals;
        FreeElement::from_terms(terms.iter().map(|(c, p)| (q.parse_path(p).unwrap(), f.from_i64(*c))))
    }

    #[test]
    fn division_of_zero_and_self() {
        let q = loop_quiver();
        let o = AdmissibleOrder::length_lex(&q);
        let x = el(&q, &[(1, "x*x*x")]);
        assert!(divide(&FreeElement::zero(), std::slice::from_ref(&x), &o)
            .remainder
            .is_zero());
        assert!(divide(&x, std::slice::from_ref(&x), &o).remainder.is_zero());
    }

    #[test]
    fn division_trace_reconstructs() {
        let q = two_loops();
        let o = AdmissibleOrder::length_lex(&q);
        let xs = vec![el(&q, &[(1, "y*x"), (-1, "x*y")]), el(&q, &[(1, "x*x")])];
        let y = el(&q, &[(3, "y*y*x"), (2, "y*x*x"), (1, "x")]);
        let d = divide(&y, &xs, &o);
        assert_eq!(d.reconstruct(&xs, &o), y);
        for p in d.remainder.paths() {
            assert!(xs.iter().all(|x| !tip(x, &o).unwrap().0.divides(p)));
        }
    }

    #[test]
    fn self_overlap_of_a_path_vanishes() {
        let q = loop_quiver();
        let o = AdmissibleOrder::length_lex(&q);
        let z = el(&q, &[(1, "x*x")]);
        let x = q.parse_path("x").unwrap();
        assert!(overlap_relation(&z, &z, &x, &x, &o).unwrap().is_zero());
        assert!(overlap_relation(&z, &z, &x, &q.parse_path("x*x").unwrap(), &o).is_err());
    }

    #[test]
    fn commutator_completion() {
        // k<x,y>/(yx - xy, x^2, y^2) is the exterior algebra on two generators.
        let q = two_loops();
        let o = AdmissibleOrder::length_lex(&q);
        let t = vec![
            el(&q, &[(1, "y*x"), (-1, "x*y")]),
            el(&q, &[(1, "x*x")]),
            el(&q, &[(1, "y*y")]),
        ];
        let g = complete(&t, &o, DEFAULT_CAP).unwrap();
        assert!(g.diamond_violation().is_none());
        let xyx = el(&q, &[(1, "x*y*x")]);
        assert!(g.normal_form(&xyx).is_zero());
        let r = g.reduced();
        assert!(r.is_reduced());
        assert_eq!(r.reduced().elements(), r.elements());
    }

    #[test]
    fn monomial_sets_are_fixed_points() {
        let q = two_loops();
        let o = AdmissibleOrder::length_lex(&q);
        let t = vec![el(&q, &[(1, "x*y*x")]), el(&q, &[(1, "y*y")]), el(&q, &[(1, "x*x*x")])];
        assert_eq!(extend(&t, &o), t);
        assert_eq!(complete(&t, &o, 4).unwrap().elements(), &t[..]);
    }

    #[test]
    fn cap_is_enforced() {
        // The overlap of xy - xx with yx produces x^3, so one round is needed.
        let q = two_loops();
        let o = AdmissibleOrder::length_lex(&q);
        let t = vec![el(&q, &[(1, "y*x")]), el(&q, &[(1, "x*y"), (-1, "x*x")])];
        assert!(matches!(complete(&t, &o, 0), Err(Error::CompletionCap(0))));
        let g = complete(&t, &o, 1).unwrap();
        assert_eq!(g.rounds(), 1);
        assert!(g.elements().contains(&el(&q, &[(-1, "x*x*x")])));
    }
}
