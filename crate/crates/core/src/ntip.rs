//! Paths that are not tips: the normal-word automaton and the resulting basis of kQ/I.

use std::collections::{BTreeMap, HashMap};

use crate::element::FreeElement;
use crate::groebner::GroebnerBasis;
use crate::linalg::{Echelon, SparseVec};
use crate::order::PathOrder;
use crate::quiver::{Path, Quiver, VertexId};
use crate::scalar::{Field, Scalar};

/// Recognizes paths avoiding every tip. A state is the last `window` arrows
/// read so far (fewer at the start), where `window` is one less than the
/// longest tip.
#[derive(Clone, Debug)]
pub struct NtipAutomaton {
    window: usize,
    tips: Vec<Path>,
    states: Vec<Path>,
    index: HashMap<Path, usize>,
    transitions: Vec<Vec<(crate::quiver::ArrowId, usize)>>,
}

impl NtipAutomaton {
    pub fn new(q: &Quiver, tips: &[Path]) -> NtipAutomaton {
        let window = tips.iter().map(Path::len).max().unwrap_or(1).max(1) - 1;
        let mut auto = NtipAutomaton {
            window,
            tips: tips.to_vec(),
            states: Vec::new(),
            index: HashMap::new(),
            transitions: Vec::new(),
        };
        let mut queue: Vec<usize> = Vec::new();
        for v in q.vertices() {
            let p = Path::trivial(v);
            if auto.tips.iter().all(|t| !t.divides(&p)) {
                queue.push(auto.intern(p));
            }
        }
        while let Some(s) = queue.pop() {
            let state = auto.states[s].clone();
            let mut out = Vec::new();
            for a in q.arrows_from(state.target()) {
                let extended = state.compose(&Path::from_arrow(a)).expect("composable");
                if auto.tips.iter().any(|t| ends_with(&extended, t)) {
                    continue;
                }
                let next = if extended.len() > window {
                    extended.subpath(extended.len() - window, extended.len())
                } else {
                    extended
                };
                let known = auto.index.contains_key(&next);
                let idx = auto.intern(next);
                if !known {
                    queue.push(idx);
                }
                out.push((a, idx));
            }
            auto.transitions[s] = out;
        }
        auto
    }

    fn intern(&mut self, p: Path) -> usize {
        if let Some(i) = self.index.get(&p) {
            return *i;
        }
        let i = self.states.len();
        self.index.insert(p.clone(), i);
        self.states.push(p);
        self.transitions.push(Vec::new());
        i
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    /// Whether no tip divides `p`.
    pub fn accepts(&self, p: &Path) -> bool {
        self.tips.iter().all(|t| !t.divides(p))
    }

    /// A closed path readable forever without meeting a tip, if one exists.
    /// Its existence is equivalent to the language being infinite.
    pub fn find_cycle(&self) -> Option<Path> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let n = self.states.len();
        let mut color = vec![0u8; n];
        let mut parent: Vec<Option<(usize, crate::quiver::ArrowId)>> = vec![None; n];
        for root in 0..n {
            if color[root] != 0 {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
            color[root] = 1;
            while let Some((s, k)) = stack.pop() {
                if k < self.transitions[s].len() {
                    stack.push((s, k + 1));
                    let (a, t) = self.transitions[s][k];
                    match color[t] {
                        0 => {
                            color[t] = 1;
                            parent[t] = Some((s, a));
                            stack.push((t, 0));
                        }
                        1 => {
                            let mut arrows = vec![a];
                            let mut cur = s;
                            while cur != t {
                                let (p, b) = parent[cur].expect("on stack");
                                arrows.push(b);
                                cur = p;
                            }
                            arrows.reverse();
                            return Path::from_arrows(arrows);
                        }
                        _ => {}
                    }
                } else {
                    color[s] = 2;
                }
            }
        }
        None
    }
}

fn ends_with(p: &Path, t: &Path) -> bool {
    t.len() <= p.len() && p.arrows()[p.len() - t.len()..] == t.arrows()[..] && !t.is_trivial()
}

/// Basis of a finite-dimensional `kQ/I` by non-tip paths, with the action of
/// every arrow from both sides.
#[derive(Clone, Debug)]
pub struct AlgebraBasis {
    field: Field,
    vertex_count: usize,
    paths: Vec<Path>,
    index: HashMap<Path, usize>,
    right: Vec<Vec<SparseVec>>,
    left: Vec<Vec<SparseVec>>,
}

impl AlgebraBasis {
    /// Enumerates non-tip paths. The caller must know the set is finite.
    pub fn new(q: &Quiver, field: Field, gb: &GroebnerBasis) -> AlgebraBasis {
        let tips: Vec<Path> = gb.tip_paths().cloned().collect();
        let mut paths: Vec<Path> = Vec::new();
        let mut frontier: Vec<Path> = q
            .vertices()
            .map(Path::trivial)
            .filter(|p| tips.iter().all(|t| !t.divides(p)))
            .collect();
        while let Some(p) = frontier.pop() {
            for a in q.arrows_from(p.target()) {
                let ext = p.compose(&Path::from_arrow(a)).expect("composable");
                if tips.iter().all(|t| !ends_with(&ext, t)) {
                    frontier.push(ext);
                }
            }
            paths.push(p);
        }
        let order = gb.order();
        paths.sort_by(|a, b| {
            a.source()
                .cmp(&b.source())
                .then(a.target().cmp(&b.target()))
                .then_with(|| order.compare(a, b))
        });
        let index: HashMap<Path, usize> = paths.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let mut basis = AlgebraBasis {
            field,
            vertex_count: q.vertex_count(),
            paths,
            index,
            right: Vec::new(),
            left: Vec::new(),
        };
        let one = field.one();
        for &a in q.arrows() {
            let arrow = Path::from_arrow(a);
            let mut right = Vec::with_capacity(basis.paths.len());
            let mut left = Vec::with_capacity(basis.paths.len());
            for p in &basis.paths {
                right.push(match p.compose(&arrow) {
                    Some(pa) => basis.reduce_path(pa, gb, &one),
                    None => SparseVec::new(),
                });
                left.push(match arrow.compose(p) {
                    Some(ap) => basis.reduce_path(ap, gb, &one),
                    None => SparseVec::new(),
                });
            }
            basis.right.push(right);
            basis.left.push(left);
        }
        basis
    }

    fn reduce_path(&self, p: Path, gb: &GroebnerBasis, one: &Scalar) -> SparseVec {
        if let Some(i) = self.index.get(&p) {
            return SparseVec::unit(*i, one.clone());
        }
        let nf = gb.normal_form(&FreeElement::monomial(p, one.clone()));
        self.coordinates(&nf).expect("normal forms are supported on non-tips")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.paths.len()
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn path(&self, i: usize) -> &Path {
        &self.paths[i]
    }

    pub fn index_of(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Index of the idempotent `e_v`.
    pub fn idempotent(&self, v: VertexId) -> usize {
        self.index[&Path::trivial(v)]
    }

    /// Indices of basis paths starting at `v`, spanning `e_v Λ`.
    pub fn starting_at(&self, v: VertexId) -> Vec<usize> {
        (0..self.dim()).filter(|i| self.paths[*i].source() == v).collect()
    }

    /// Indices of basis paths ending at `v`, spanning `Λ e_v`.
    pub fn ending_at(&self, v: VertexId) -> Vec<usize> {
        (0..self.dim()).filter(|i| self.paths[*i].target() == v).collect()
    }

    pub fn between(&self, i: VertexId, j: VertexId) -> Vec<usize> {
        (0..self.dim())
            .filter(|k| self.paths[*k].source() == i && self.paths[*k].target() == j)
            .collect()
    }

    /// Coordinates of an element already supported on basis paths.
    pub fn coordinates(&self, z: &FreeElement) -> Option<SparseVec> {
        let mut acc = BTreeMap::new();
        for (p, c) in z.terms() {
            acc.insert(*self.index.get(p)?, c.clone());
        }
        Some(SparseVec::from_map(acc))
    }

    pub fn to_element(&self, x: &SparseVec) -> FreeElement {
        FreeElement::from_terms(x.entries().iter().map(|(i, c)| (self.paths[*i].clone(), c.clone())))
    }

    /// `b_i * a` in coordinates.
    pub fn right_arrow(&self, a: crate::quiver::ArrowId, i: usize) -> &SparseVec {
        &self.right[a.index()][i]
    }

    /// `a * b_i` in coordinates.
    pub fn left_arrow(&self, a: crate::quiver::ArrowId, i: usize) -> &SparseVec {
        &self.left[a.index()][i]
    }

    pub fn act_right_arrow(&self, x: &SparseVec, a: crate::quiver::ArrowId) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in x.entries() {
            out = out.axpy(c, &self.right[a.index()][*i]);
        }
        out
    }

    pub fn act_left_arrow(&self, a: crate::quiver::ArrowId, x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in x.entries() {
            out = out.axpy(c, &self.left[a.index()][*i]);
        }
        out
    }

    /// `x * p` for a path `p`.
    pub fn act_right_path(&self, x: &SparseVec, p: &Path) -> SparseVec {
        if p.is_trivial() {
            return SparseVec::from_map(
                x.entries()
                    .iter()
                    .filter(|(i, _)| self.paths[*i].target() == p.source())
                    .cloned()
                    .collect(),
            );
        }
        p.arrows()
            .iter()
            .fold(x.clone(), |acc, a| self.act_right_arrow(&acc, *a))
    }

    /// `p * x` for a path `p`.
    pub fn act_left_path(&self, p: &Path, x: &SparseVec) -> SparseVec {
        if p.is_trivial() {
            return SparseVec::from_map(
                x.entries()
                    .iter()
                    .filter(|(i, _)| self.paths[*i].source() == p.target())
                    .cloned()
                    .collect(),
            );
        }
        p.arrows()
            .iter()
            .rev()
            .fold(x.clone(), |acc, a| self.act_left_arrow(*a, &acc))
    }

    /// Coordinates of the class of a path.
    pub fn path_vector(&self, p: &Path) -> SparseVec {
        let e = SparseVec::unit(self.idempotent(p.source()), self.field.one());
        self.act_right_path(&e, p)
    }

    /// Coordinates of the class of an arbitrary element of kQ.
    pub fn element_vector(&self, z: &FreeElement) -> SparseVec {
        let mut out = SparseVec::new();
        for (p, c) in z.terms() {
            out = out.axpy(c, &self.path_vector(p));
        }
        out
    }

    pub fn mul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, c) in y.entries() {
            out = out.axpy(c, &self.act_right_path(x, &self.paths[*j]));
        }
        out
    }

    /// Smallest `m` with `J^m = 0`.
    pub fn loewy_length(&self, q: &Quiver) -> usize {
        let mut layer: Vec<SparseVec> = (0..self.dim())
            .filter(|i| !self.paths[*i].is_trivial())
            .map(|i| SparseVec::unit(i, self.field.one()))
            .collect();
        if self.dim() == 0 {
            return 0;
        }
        let mut m = 1;
        while !layer.is_empty() {
            let mut next = Echelon::new(self.field);
            for x in &layer {
                for &a in q.arrows() {
                    next.insert(&self.act_right_arrow(x, a));
                }
            }
            layer = next.rows().to_vec();
            m += 1;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::complete;
    use crate::order::AdmissibleOrder;

    fn loop_algebra(n: usize) -> (Quiver, GroebnerBasis) {
        let q = Quiver::new(["1"], [("x".to_string(), "1".to_string(), "1".to_string())]).unwrap();
        let x = q.parse_path("x").unwrap();
        let xn = Path::from_arrows(vec![x.arrows()[0]; n]).unwrap();
        let f = Field::Rationals;
        let g = complete(
            &[FreeElement::monomial(xn, f.one())],
            &AdmissibleOrder::length_lex(&q),
            4,
        )
        .unwrap();
        (q, g)
    }

    #[test]
    fn truncated_polynomial_ring() {
        for n in 2..6 {
            let (q, g) = loop_algebra(n);
            let auto = NtipAutomaton::new(&q, &g.tip_paths().cloned().collect::<Vec<_>>());
            assert!(auto.find_cycle().is_none());
            let b = AlgebraBasis::new(&q, Field::Rationals, &g);
            assert_eq!(b.dim(), n);
            assert_eq!(b.loewy_length(&q), n);
        }
    }

    #[test]
    fn free_loop_has_cycle() {
        let q = Quiver::new(["1"], [("x".to_string(), "1".to_string(), "1".to_string())]).unwrap();
        let auto = NtipAutomaton::new(&q, &[]);
        let c = auto.find_cycle().unwrap();
        assert_eq!(q.path_name(&c), "x");
    }

    #[test]
    fn radical_square_zero() {
        let arrows = [("a", "1", "2"), ("b", "2", "1")].map(|(a, s, t)| (a.to_string(), s.to_string(), t.to_string()));
        let q = Quiver::new(["1", "2"], arrows).unwrap();
        let f = Field::Rationals;
        let rels: Vec<FreeElement> = ["a*b", "b*a"]
            .iter()
            .map(|p| FreeElement::monomial(q.parse_path(p).unwrap(), f.one()))
            .collect();
        let g = complete(&rels, &AdmissibleOrder::length_lex(&q), 4).unwrap();
        let b = AlgebraBasis::new(&q, f, &g);
        assert_eq!(b.dim(), 4);
        assert_eq!(b.loewy_length(&q), 2);
        let a = q.parse_path("a").unwrap();
        let ab = b.mul(&b.path_vector(&a), &b.path_vector(&q.parse_path("b").unwrap()));
        assert!(ab.is_zero());
    }
}
