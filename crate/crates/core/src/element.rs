//! Elements of the path algebra kQ as finite linear combinations of paths.

use std::collections::BTreeMap;

use crate::order::PathOrder;
use crate::quiver::{ArrowId, Path, Quiver, VertexId};
use crate::scalar::Scalar;

/// A linear combination of paths with nonzero exact coefficients.
///
/// Terms are kept in the structural path order (length, then arrow ids), which
/// makes equality and hashing canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FreeElement {
    terms: BTreeMap<Path, Scalar>,
}

impl FreeElement {
    pub fn zero() -> FreeElement {
        FreeElement::default()
    }

    pub fn monomial(path: Path, coeff: Scalar) -> FreeElement {
        let mut z = FreeElement::zero();
        z.add_term(path, coeff);
        z
    }

    pub fn from_terms<I: IntoIterator<Item = (Path, Scalar)>>(terms: I) -> FreeElement {
        let mut z = FreeElement::zero();
        for (p, c) in terms {
            z.add_term(p, c);
        }
        z
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &Scalar)> {
        self.terms.iter()
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.terms.keys()
    }

    pub fn coefficient(&self, p: &Path) -> Option<&Scalar> {
        self.terms.get(p)
    }

    /// Adds `coeff * path`, dropping the term if it cancels.
    pub fn add_term(&mut self, path: Path, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(path) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &FreeElement) -> FreeElement {
        let mut z = self.clone();
        for (p, c) in &other.terms {
            z.add_term(p.clone(), c.clone());
        }
        z
    }

    pub fn sub(&self, other: &FreeElement) -> FreeElement {
        let mut z = self.clone();
        for (p, c) in &other.terms {
            z.add_term(p.clone(), -c);
        }
        z
    }

    pub fn scale(&self, c: &Scalar) -> FreeElement {
        if c.is_zero() {
            return FreeElement::zero();
        }
        FreeElement {
            terms: self.terms.iter().map(|(p, x)| (p.clone(), x * c)).collect(),
        }
    }

    /// Product in kQ; compositions that do not match vanish.
    pub fn mul(&self, other: &FreeElement) -> FreeElement {
        let mut z = FreeElement::zero();
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                if let Some(pq) = p.compose(q) {
                    z.add_term(pq, a * b);
                }
            }
        }
        z
    }

    pub fn left_mul_path(&self, u: &Path) -> FreeElement {
        FreeElement {
            terms: self
                .terms
                .iter()
                .filter_map(|(p, c)| u.compose(p).map(|up| (up, c.clone())))
                .collect(),
        }
    }

    pub fn right_mul_path(&self, v: &Path) -> FreeElement {
        FreeElement {
            terms: self
                .terms
                .iter()
                .filter_map(|(p, c)| p.compose(v).map(|pv| (pv, c.clone())))
                .collect(),
        }
    }

    /// `u * self * v` for paths `u`, `v`.
    pub fn sandwich(&self, u: &Path, v: &Path) -> FreeElement {
        self.left_mul_path(u).right_mul_path(v)
    }

    /// The single path of a nonzero scalar multiple of a path.
    pub fn as_monomial(&self) -> Option<(&Path, &Scalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Common source and target of all terms, if they agree.
    pub fn endpoints(&self) -> Option<(VertexId, VertexId)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let st = (first.source(), first.target());
        it.all(|p| (p.source(), p.target()) == st).then_some(st)
    }

    /// Nonzero, every path of length at least two, uniform endpoints.
    pub fn is_relation(&self) -> bool {
        !self.is_zero() && self.terms.keys().all(|p| p.len() >= 2) && self.endpoints().is_some()
    }

    pub fn avoids(&self, a: ArrowId) -> bool {
        self.terms.keys().all(|p| !p.contains_arrow(a))
    }

    /// Reverses every path, giving the same element read in the opposite quiver.
    pub fn reversed(&self) -> FreeElement {
        FreeElement {
            terms: self.terms.iter().map(|(p, c)| (p.reversed(), c.clone())).collect(),
        }
    }

    /// Keeps the terms whose paths satisfy `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Path) -> bool) -> FreeElement {
        FreeElement {
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| keep(p))
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    /// Rewrites arrow handles through `map`; terms mapping to `None` are dropped.
    pub fn map_paths(&self, mut map: impl FnMut(&Path) -> Option<Path>) -> FreeElement {
        FreeElement::from_terms(self.terms.iter().filter_map(|(p, c)| map(p).map(|q| (q, c.clone()))))
    }

    /// Human-readable form with terms listed from largest to smallest.
    pub fn render(&self, q: &Quiver, order: &dyn PathOrder) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Path, &Scalar)> = self.terms.iter().collect();
        terms.sort_by(|a, b| order.compare(b.0, a.0));
        let mut out = String::new();
        for (i, (p, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                out.push_str(&mag.to_string());
                out.push('*');
            }
            out.push_str(&q.path_name(p));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;

    fn quiver() -> Quiver {
        let arrows = [
            ("lambda3", "3", "3"),
            ("gamma1", "3", "4"),
            ("gamma2", "3", "5"),
            ("delta1", "4", "6"),
            ("delta2", "5", "6"),
        ]
        .map(|(a, s, t)| (a.to_string(), s.to_string(), t.to_string()));
        Quiver::new(["3", "4", "5", "6"], arrows).unwrap()
    }

    fn el(q: &Quiver, f: Field, terms: &[(i64, &str)]) -> FreeElement {
        FreeElement::from_terms(terms.iter().map(|(c, p)| (q.parse_path(p).unwrap(), f.from_i64(*c))))
    }

    #[test]
    fn cancellation_and_left_multiplication() {
        let q = quiver();
        let f = Field::Rationals;
        let b = el(&q, f, &[(1, "gamma2*delta2"), (-1, "gamma1*delta1")]);
        let sum = b.add(&el(&q, f, &[(1, "gamma1*delta1")]));
        assert_eq!(sum, el(&q, f, &[(1, "gamma2*delta2")]));
        let l = el(&q, f, &[(1, "lambda3")]);
        assert_eq!(
            l.mul(&b),
            el(&q, f, &[(1, "lambda3*gamma2*delta2"), (-1, "lambda3*gamma1*delta1")])
        );
    }

    #[test]
    fn idempotent_projects_onto_source() {
        let q = quiver();
        let f = Field::Rationals;
        let z = el(&q, f, &[(2, "gamma1"), (3, "delta1"), (1, "lambda3*gamma2")]);
        let e3 = el(&q, f, &[(1, "e_3")]);
        let direct = z.filter(|p| q.vertex_name(p.source()) == "3");
        assert_eq!(e3.mul(&z), direct);
    }

    #[test]
    fn relation_shape() {
        let q = quiver();
        let f = Field::Rationals;
        assert!(el(&q, f, &[(1, "gamma2*delta2"), (-1, "gamma1*delta1")]).is_relation());
        assert!(!el(&q, f, &[(1, "gamma2")]).is_relation());
        assert!(!el(&q, f, &[(1, "gamma2*delta2"), (1, "lambda3*gamma1")]).is_relation());
        assert!(!FreeElement::zero().is_relation());
    }
}
