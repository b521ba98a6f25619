//! Finite-dimensional right modules stored as quiver representations.
//!
//! An arrow `a: i -> j` acts by a `dim M_i x dim M_j` matrix and elements are
//! row vectors, so a path acts by the product of its arrow matrices in order.

mod bimodule;
mod hom;
mod resolution;

pub use bimodule::{
    tensor_dims_by_presentation, verify_bimodule_resolutions, Bimodule, BimoduleReport, Cleft, Identity,
};
pub use hom::{default_trials, hom_space, iso_certificate, Homomorphism, IsoCertificate};
pub use resolution::{injdim, pd, projective_cover, resolve, syzygy, Cover, ProjDim, Resolution};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::linalg::{Echelon, Matrix, SparseVec};
use crate::quiver::{ArrowId, Path, Quiver, VertexId};
use crate::scalar::{Field, Scalar};

/// A subspace of `k^n` kept as a reduced echelon basis.
#[derive(Clone, Debug)]
pub(crate) struct Subspace {
    rows: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub(crate) fn spanned_by(m: &Matrix) -> Subspace {
        let (r, pivots) = m.rref();
        let rows = r.select_rows(&(0..pivots.len()).collect::<Vec<_>>());
        Subspace { rows, pivots }
    }

    pub(crate) fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub(crate) fn rows(&self) -> &Matrix {
        &self.rows
    }

    /// Coordinates of `x` in the echelon basis, or `None` when `x` is outside.
    pub(crate) fn coords(&self, x: &[Scalar]) -> Option<Vec<Scalar>> {
        let c: Vec<Scalar> = self.pivots.iter().map(|p| x[*p].clone()).collect();
        if self.dim() == 0 {
            return x.iter().all(Scalar::is_zero).then_some(c);
        }
        (self.rows.apply(&c) == x).then_some(c)
    }

    pub(crate) fn contains(&self, x: &[Scalar]) -> bool {
        self.coords(x).is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    field: Field,
    dims: Vec<usize>,
    arrows: Vec<(usize, usize)>,
    maps: Vec<Matrix>,
}

impl Representation {
    pub fn new(q: &Quiver, field: Field, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Representation> {
        let arrows: Vec<(usize, usize)> = q
            .arrows()
            .iter()
            .map(|a| (a.source().index(), a.target().index()))
            .collect();
        Representation::from_parts(field, dims, arrows, maps)
    }

    fn from_parts(
        field: Field,
        dims: Vec<usize>,
        arrows: Vec<(usize, usize)>,
        maps: Vec<Matrix>,
    ) -> Result<Representation> {
        if maps.len() != arrows.len() {
            return Err(Error::InvalidArgument(format!(
                "{} matrices for {} arrows",
                maps.len(),
                arrows.len()
            )));
        }
        for (k, (m, (s, t))) in maps.iter().zip(&arrows).enumerate() {
            if *s >= dims.len() || *t >= dims.len() {
                return Err(Error::InvalidArgument(format!("arrow {k} leaves the quiver")));
            }
            if m.rows() != dims[*s] || m.cols() != dims[*t] || m.field() != field {
                return Err(Error::InvalidArgument(format!(
                    "matrix of arrow {k} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    dims[*s],
                    dims[*t]
                )));
            }
        }
        Ok(Representation {
            field,
            dims,
            arrows,
            maps,
        })
    }

    pub fn zero(q: &Quiver, field: Field) -> Representation {
        let dims = vec![0; q.vertex_count()];
        let maps = q.arrows().iter().map(|_| Matrix::zeros(field, 0, 0)).collect();
        Representation::new(q, field, dims, maps).expect("shapes agree")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn dim_at(&self, v: usize) -> usize {
        self.dims[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.dims.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    /// `(source, target)` of arrow `k`.
    pub fn endpoints(&self, k: usize) -> (usize, usize) {
        self.arrows[k]
    }

    pub fn map(&self, k: usize) -> &Matrix {
        &self.maps[k]
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn path_matrix(&self, p: &Path) -> Matrix {
        let v = p.source().index();
        let mut m = Matrix::identity(self.field, self.dims[v]);
        for a in p.arrows() {
            m = m.mul(&self.maps[a.index()]);
        }
        m
    }

    /// `x * p` for `x` in `M_{s(p)}`.
    pub fn act_path(&self, x: &[Scalar], p: &Path) -> Vec<Scalar> {
        p.arrows()
            .iter()
            .fold(x.to_vec(), |acc, a| self.maps[a.index()].apply(&acc))
    }

    /// Index of the first reduced Gröbner element not annihilating the module.
    pub fn violated_relation(&self, alg: &Algebra) -> Option<usize> {
        alg.groebner().elements().iter().position(|g| {
            let (s, t) = g.endpoints().expect("relations are uniform");
            let mut acc = Matrix::zeros(self.field, self.dims[s.index()], self.dims[t.index()]);
            for (p, c) in g.terms() {
                acc = acc.add(&self.path_matrix(p).scale(c));
            }
            !acc.is_zero()
        })
    }

    pub fn satisfies_relations(&self, alg: &Algebra) -> bool {
        self.violated_relation(alg).is_none()
    }

    fn images_into(&self, v: usize) -> Matrix {
        let mut m = Matrix::zeros(self.field, 0, self.dims[v]);
        for (k, (_, t)) in self.arrows.iter().enumerate() {
            if *t == v {
                m = m.vstack(&self.maps[k]);
            }
        }
        m
    }

    /// `(M J) e_v`.
    pub(crate) fn radical_at(&self, v: usize) -> Subspace {
        Subspace::spanned_by(&self.images_into(v))
    }

    /// Dimension vector of `M / M J`.
    pub fn top_dims(&self) -> Vec<usize> {
        (0..self.dims.len())
            .map(|v| self.dims[v] - self.radical_at(v).dim())
            .collect()
    }

    /// Elements of `M_v` killed by every arrow out of `v`.
    pub(crate) fn socle_at(&self, v: usize) -> Subspace {
        let mut m = Matrix::zeros(self.field, self.dims[v], 0);
        for (k, (s, _)) in self.arrows.iter().enumerate() {
            if *s == v {
                m = m.hstack(&self.maps[k]);
            }
        }
        Subspace::spanned_by(&m.left_kernel())
    }

    pub fn socle_dims(&self) -> Vec<usize> {
        (0..self.dims.len()).map(|v| self.socle_at(v).dim()).collect()
    }

    /// Dimension vectors of `M J^k / M J^{k+1}` for `k = 0, 1, ...` until zero.
    pub fn radical_layers(&self) -> Vec<Vec<usize>> {
        let n = self.dims.len();
        let mut current: Vec<Subspace> = (0..n)
            .map(|v| Subspace::spanned_by(&Matrix::identity(self.field, self.dims[v])))
            .collect();
        let mut layers = Vec::new();
        while current.iter().any(|s| s.dim() > 0) {
            let next: Vec<Subspace> = (0..n)
                .map(|v| {
                    let mut m = Matrix::zeros(self.field, 0, self.dims[v]);
                    for (k, (s, t)) in self.arrows.iter().enumerate() {
                        if *t == v {
                            m = m.vstack(&current[*s].rows().mul(&self.maps[k]));
                        }
                    }
                    Subspace::spanned_by(&m)
                })
                .collect();
            layers.push((0..n).map(|v| current[v].dim() - next[v].dim()).collect());
            current = next;
        }
        layers
    }

    pub fn direct_sum(&self, other: &Representation) -> Representation {
        assert_eq!(self.arrows, other.arrows, "modules over different quivers");
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| block_diagonal(a, b))
            .collect();
        Representation {
            field: self.field,
            dims,
            arrows: self.arrows.clone(),
            maps,
        }
    }

    /// `D M = Hom_k(M, k)` as a right module over the opposite algebra.
    pub fn dual(&self) -> Representation {
        Representation {
            field: self.field,
            dims: self.dims.clone(),
            arrows: self.arrows.iter().map(|(s, t)| (*t, *s)).collect(),
            maps: self.maps.iter().map(Matrix::transpose).collect(),
        }
    }

    /// Restriction along an algebra map sending arrows to arrows; `arrow_map[k]`
    /// is the image of old arrow `k`, if it survives.
    pub fn restrict(&self, target: &Quiver, arrow_map: &[Option<ArrowId>]) -> Result<Representation> {
        let mut maps: Vec<Option<Matrix>> = vec![None; target.arrow_count()];
        for (k, image) in arrow_map.iter().enumerate() {
            if let Some(b) = image {
                maps[b.index()] = Some(self.maps[k].clone());
            }
        }
        let maps = maps
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidArgument("arrow map is not onto".into()))?;
        Representation::new(target, self.field, self.dims.clone(), maps)
    }

    /// The submodule with `M'_v` spanned by the rows of `spans[v]`, together with
    /// the inclusion matrices `M'_v -> M_v`.
    pub fn submodule(&self, spans: &[Matrix]) -> Result<(Representation, Vec<Matrix>)> {
        let subs: Vec<Subspace> = spans.iter().map(Subspace::spanned_by).collect();
        let mut maps = Vec::with_capacity(self.maps.len());
        for (k, (s, t)) in self.arrows.iter().enumerate() {
            let src = &subs[*s];
            let mut rows = Vec::with_capacity(src.dim());
            for i in 0..src.dim() {
                let image = self.maps[k].apply(src.rows().row(i));
                let c = subs[*t]
                    .coords(&image)
                    .ok_or_else(|| Error::Invariant(format!("subspace not closed under arrow {k}")))?;
                rows.push(c);
            }
            maps.push(Matrix::from_rows(self.field, subs[*t].dim(), rows));
        }
        let dims = subs.iter().map(Subspace::dim).collect();
        let inclusions = subs.iter().map(|s| s.rows().clone()).collect();
        let sub = Representation::from_parts(self.field, dims, self.arrows.clone(), maps)?;
        Ok((sub, inclusions))
    }
}

fn block_diagonal(a: &Matrix, b: &Matrix) -> Matrix {
    let f = a.field();
    let top = a.hstack(&Matrix::zeros(f, a.rows(), b.cols()));
    let bottom = Matrix::zeros(f, b.rows(), a.cols()).hstack(b);
    top.vstack(&bottom)
}

fn check_vertex(alg: &Algebra, v: VertexId) -> Result<()> {
    if v.index() >= alg.quiver().vertex_count() {
        return Err(Error::InvalidArgument(format!("no vertex with index {}", v.index())));
    }
    Ok(())
}

/// The simple module at `v`.
pub fn simple(alg: &Algebra, v: VertexId) -> Result<Representation> {
    check_vertex(alg, v)?;
    let q = alg.quiver();
    let mut dims = vec![0; q.vertex_count()];
    dims[v.index()] = 1;
    let maps = q
        .arrows()
        .iter()
        .map(|a| Matrix::zeros(alg.field(), dims[a.source().index()], dims[a.target().index()]))
        .collect();
    Representation::new(q, alg.field(), dims, maps)
}

/// `e_v Λ` on the basis of non-tip paths starting at `v`, grouped by target.
pub fn projective(alg: &Algebra, v: VertexId) -> Result<Representation> {
    check_vertex(alg, v)?;
    let q = alg.quiver();
    let basis = alg.basis();
    let local: Vec<Vec<usize>> = q.vertices().map(|w| basis.between(v, w)).collect();
    let dims = local.iter().map(Vec::len).collect();
    let mut maps = Vec::with_capacity(q.arrow_count());
    for &a in q.arrows() {
        let (s, t) = (a.source().index(), a.target().index());
        let rows = local[s]
            .iter()
            .map(|&i| {
                let img = basis.right_arrow(a, i);
                let mut row = vec![alg.field().zero(); local[t].len()];
                for (j, c) in img.entries() {
                    let pos = local[t].binary_search(j).expect("right action stays in e_v Λ");
                    row[pos] = c.clone();
                }
                row
            })
            .collect();
        maps.push(Matrix::from_rows(alg.field(), local[t].len(), rows));
    }
    Representation::new(q, alg.field(), dims, maps)
}

/// `Λ_Λ` as the direct sum of all indecomposable projectives.
pub fn regular(alg: &Algebra) -> Result<Representation> {
    let q = alg.quiver();
    let mut acc = Representation::zero(q, alg.field());
    for v in q.vertices() {
        acc = acc.direct_sum(&projective(alg, v)?);
    }
    Ok(acc)
}

/// The right ideal of `Λ` generated by `gens`, each given in basis coordinates.
pub fn right_ideal(alg: &Algebra, gens: &[SparseVec]) -> Result<Representation> {
    let q = alg.quiver();
    let basis = alg.basis();
    let field = alg.field();
    let n = q.vertex_count();
    let mut spans: Vec<Echelon> = (0..n).map(|_| Echelon::new(field)).collect();
    let target = |i: usize| basis.path(i).target().index();
    let mut work: Vec<SparseVec> = Vec::new();
    for g in gens {
        for v in 0..n {
            let part = SparseVec::from_map(g.entries().iter().filter(|(i, _)| target(*i) == v).cloned().collect());
            if !part.is_zero() {
                work.push(part);
            }
        }
    }
    while let Some(x) = work.pop() {
        let v = target(x.leading().expect("nonzero"));
        if spans[v].insert(&x).is_some() {
            for a in q.arrows_from(VertexId(v as u32)) {
                let y = basis.act_right_arrow(&x, a);
                if !y.is_zero() {
                    work.push(y);
                }
            }
        }
    }
    let local: Vec<Vec<usize>> = q.vertices().map(|w| basis.ending_at(w)).collect();
    let ambient = regular_by_target(alg)?;
    let spans: Vec<Matrix> = (0..n)
        .map(|v| {
            let rows: Vec<SparseVec> = spans[v]
                .rows()
                .iter()
                .map(|r| r.remap(|i| local[v].binary_search(&i).expect("target v")))
                .collect();
            Matrix::from_sparse_rows(field, local[v].len(), &rows)
        })
        .collect();
    Ok(ambient.submodule(&spans)?.0)
}

/// `Λ_Λ` with `Λ e_v` carried on the basis paths ending at `v`, in index order.
fn regular_by_target(alg: &Algebra) -> Result<Representation> {
    let q = alg.quiver();
    let basis = alg.basis();
    let local: Vec<Vec<usize>> = q.vertices().map(|w| basis.ending_at(w)).collect();
    let dims = local.iter().map(Vec::len).collect();
    let mut maps = Vec::with_capacity(q.arrow_count());
    for &a in q.arrows() {
        let (s, t) = (a.source().index(), a.target().index());
        let rows = local[s]
            .iter()
            .map(|&i| {
                let mut row = vec![alg.field().zero(); local[t].len()];
                for (j, c) in basis.right_arrow(a, i).entries() {
                    row[local[t].binary_search(j).expect("ends at t(a)")] = c.clone();
                }
                row
            })
            .collect();
        maps.push(Matrix::from_rows(alg.field(), local[t].len(), rows));
    }
    Representation::new(q, alg.field(), dims, maps)
}

/// The two-sided ideal generated by `alpha`, as a right module.
pub fn ideal(alg: &Algebra, alpha: ArrowId) -> Result<Representation> {
    let basis = alg.basis();
    let gens: Vec<SparseVec> = basis
        .ending_at(alpha.source())
        .into_iter()
        .map(|i| basis.act_right_arrow(&SparseVec::unit(i, alg.field().one()), alpha))
        .filter(|x| !x.is_zero())
        .collect();
    right_ideal(alg, &gens)
}

/// Parses `S<v>` (simple), `P<v>` (indecomposable projective) or
/// `ideal:<arrow>` into a module.
pub fn named(alg: &Algebra, spec: &str) -> Result<Representation> {
    let q = alg.quiver();
    let vertex = |name: &str| {
        q.vertex(name)
            .ok_or_else(|| Error::InvalidArgument(format!("no vertex named {name}")))
    };
    if let Some(a) = spec.strip_prefix("ideal:") {
        let alpha = q
            .arrow(a)
            .ok_or_else(|| Error::InvalidArgument(format!("no arrow named {a}")))?;
        ideal(alg, alpha)
    } else if let Some(v) = spec.strip_prefix('S') {
        simple(alg, vertex(v)?)
    } else if let Some(v) = spec.strip_prefix('P') {
        projective(alg, vertex(v)?)
    } else {
        Err(Error::InvalidArgument(format!(
            "module must be S<vertex>, P<vertex> or ideal:<arrow>, not {spec}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn magic() -> Algebra {
        corpus::spec("magicexam").unwrap().algebra().unwrap()
    }

    #[test]
    fn constructed_modules_satisfy_relations() {
        let alg = magic();
        let q = alg.quiver();
        for v in q.vertices() {
            assert!(simple(&alg, v).unwrap().satisfies_relations(&alg));
            assert!(projective(&alg, v).unwrap().satisfies_relations(&alg));
        }
        let reg = regular(&alg).unwrap();
        assert_eq!(reg.dim(), alg.dim());
        assert!(reg.satisfies_relations(&alg));
        let i = ideal(&alg, q.arrow("alpha").unwrap()).unwrap();
        assert!(i.satisfies_relations(&alg));
    }

    #[test]
    fn simple_has_unit_dimension_vector() {
        let alg = magic();
        let s = simple(&alg, alg.quiver().vertex("2").unwrap()).unwrap();
        assert_eq!(s.dims(), &[0, 1, 0, 0, 0, 0]);
        assert_eq!(s.top_dims(), s.dims());
        assert_eq!(s.socle_dims(), s.dims());
    }

    #[test]
    fn layers_of_a_projective_sum_to_its_dimension() {
        let alg = magic();
        let p = projective(&alg, VertexId(0)).unwrap();
        let layers = p.radical_layers();
        let total: usize = layers.iter().flatten().sum();
        assert_eq!(total, p.dim());
        assert_eq!(layers[0].iter().sum::<usize>(), 1);
    }

    #[test]
    fn dual_is_an_involution_on_the_nose() {
        let alg = magic();
        let p = projective(&alg, VertexId(2)).unwrap();
        assert_eq!(p.dual().dual(), p);
        let op = alg.opposite().unwrap();
        assert!(p.dual().satisfies_relations(&op));
    }
}
