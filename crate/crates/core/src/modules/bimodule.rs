use std::collections::BTreeMap;

use serde::Serialize;

use super::{resolve, Representation};
use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::linalg::{kernel_of, Echelon, Matrix, SparseVec};
use crate::quiver::{ArrowId, Path, VertexId};
use crate::removal::Removal;
use crate::scalar::Field;

/// A finite-dimensional bimodule over two bound quiver algebras, on a basis of
/// elements each lying in one `e_i B e_j`.
#[derive(Clone, Debug)]
pub struct Bimodule {
    field: Field,
    left_vertices: usize,
    right_vertices: usize,
    left_vertex: Vec<usize>,
    right_vertex: Vec<usize>,
    left_arrows: Vec<(usize, usize)>,
    right_arrows: Vec<(usize, usize)>,
    /// `left[a][i] = a * b_i`.
    left: Vec<Vec<SparseVec>>,
    /// `right[c][i] = b_i * c`.
    right: Vec<Vec<SparseVec>>,
    /// Coordinates in the ambient algebra when this is a sub-bimodule of it.
    embedding: Option<Vec<SparseVec>>,
}

fn endpoints(arrows: &[ArrowId]) -> Vec<(usize, usize)> {
    arrows
        .iter()
        .map(|a| (a.source().index(), a.target().index()))
        .collect()
}

fn combine(x: &SparseVec, images: &[SparseVec]) -> SparseVec {
    let mut out = SparseVec::new();
    for (i, c) in x.entries() {
        out = out.axpy(c, &images[*i]);
    }
    out
}

impl Bimodule {
    /// `alg` acted on from the left by the arrows `left` and from the right by
    /// the arrows `right`, listed in the order of the acting algebras' arrows.
    pub fn regular(alg: &Algebra, left: &[ArrowId], right: &[ArrowId]) -> Bimodule {
        let basis = alg.basis();
        let one = alg.field().one();
        let n = alg.quiver().vertex_count();
        Bimodule {
            field: alg.field(),
            left_vertices: n,
            right_vertices: n,
            left_vertex: basis.paths().iter().map(|p| p.source().index()).collect(),
            right_vertex: basis.paths().iter().map(|p| p.target().index()).collect(),
            left_arrows: endpoints(left),
            right_arrows: endpoints(right),
            left: left
                .iter()
                .map(|a| (0..basis.dim()).map(|i| basis.left_arrow(*a, i).clone()).collect())
                .collect(),
            right: right
                .iter()
                .map(|a| (0..basis.dim()).map(|i| basis.right_arrow(*a, i).clone()).collect())
                .collect(),
            embedding: Some((0..basis.dim()).map(|i| SparseVec::unit(i, one.clone())).collect()),
        }
    }

    /// A right module, viewed as a bimodule over the field on the left.
    pub fn from_right_module(m: &Representation) -> Bimodule {
        let field = m.field();
        let mut offset = vec![0];
        for v in 0..m.vertex_count() {
            offset.push(offset[v] + m.dim_at(v));
        }
        let right_vertex = (0..m.vertex_count())
            .flat_map(|v| std::iter::repeat_n(v, m.dim_at(v)))
            .collect();
        let right = (0..m.arrow_count())
            .map(|k| {
                let (s, t) = m.endpoints(k);
                (0..m.dim())
                    .map(|i| {
                        if (offset[s]..offset[s + 1]).contains(&i) {
                            let row = m.map(k).row(i - offset[s]);
                            SparseVec::from_dense(row).remap(|j| j + offset[t])
                        } else {
                            SparseVec::new()
                        }
                    })
                    .collect()
            })
            .collect();
        Bimodule {
            field,
            left_vertices: 1,
            right_vertices: m.vertex_count(),
            left_vertex: vec![0; m.dim()],
            right_vertex,
            left_arrows: Vec::new(),
            right_arrows: (0..m.arrow_count()).map(|k| m.endpoints(k)).collect(),
            left: Vec::new(),
            right,
            embedding: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.left_vertex.len()
    }

    /// `dim e_i B e_j`.
    pub fn block_dim(&self, i: usize, j: usize) -> usize {
        (0..self.dim())
            .filter(|k| self.left_vertex[*k] == i && self.right_vertex[*k] == j)
            .count()
    }

    pub fn embedding(&self) -> Option<&[SparseVec]> {
        self.embedding.as_deref()
    }

    fn block_of(&self, x: &SparseVec) -> Option<(usize, usize)> {
        let i = x.leading()?;
        Some((self.left_vertex[i], self.right_vertex[i]))
    }

    /// Splits `x` into its components in the blocks `e_i B e_j`.
    fn components(&self, x: &SparseVec) -> Vec<SparseVec> {
        let mut parts: BTreeMap<(usize, usize), BTreeMap<usize, _>> = BTreeMap::new();
        for (i, c) in x.entries() {
            parts
                .entry((self.left_vertex[*i], self.right_vertex[*i]))
                .or_default()
                .insert(*i, c.clone());
        }
        parts.into_values().map(SparseVec::from_map).collect()
    }

    /// The sub-bimodule generated by `gens`.
    pub fn sub(&self, gens: &[SparseVec]) -> Result<Bimodule> {
        let mut spans: BTreeMap<(usize, usize), Echelon> = BTreeMap::new();
        let mut work: Vec<SparseVec> = gens.iter().flat_map(|g| self.components(g)).collect();
        while let Some(x) = work.pop() {
            let (i, j) = self.block_of(&x).expect("nonzero");
            let span = spans.entry((i, j)).or_insert_with(|| Echelon::new(self.field));
            if span.insert(&x).is_none() {
                continue;
            }
            for (a, (_, t)) in self.left_arrows.iter().enumerate() {
                if *t == i {
                    let y = combine(&x, &self.left[a]);
                    if !y.is_zero() {
                        work.push(y);
                    }
                }
            }
            for (c, (s, _)) in self.right_arrows.iter().enumerate() {
                if *s == j {
                    let y = combine(&x, &self.right[c]);
                    if !y.is_zero() {
                        work.push(y);
                    }
                }
            }
        }
        let mut rows: Vec<SparseVec> = Vec::new();
        let mut left_vertex = Vec::new();
        let mut right_vertex = Vec::new();
        let mut pivot_to_row: BTreeMap<usize, usize> = BTreeMap::new();
        for ((i, j), span) in &spans {
            for r in span.reduced_rows() {
                pivot_to_row.insert(r.leading().expect("nonzero"), rows.len());
                rows.push(r);
                left_vertex.push(*i);
                right_vertex.push(*j);
            }
        }
        let coords = |y: &SparseVec| -> Result<SparseVec> {
            let Some(block) = self.block_of(y) else {
                return Ok(SparseVec::new());
            };
            if !spans.get(&block).is_some_and(|s| s.contains(y)) {
                return Err(Error::Invariant("sub-bimodule not closed".into()));
            }
            let mut acc = BTreeMap::new();
            for (i, c) in y.entries() {
                if let Some(r) = pivot_to_row.get(i) {
                    acc.insert(*r, c.clone());
                }
            }
            Ok(SparseVec::from_map(acc))
        };
        let act = |images: &[Vec<SparseVec>]| -> Result<Vec<Vec<SparseVec>>> {
            images
                .iter()
                .map(|img| rows.iter().map(|r| coords(&combine(r, img))).collect())
                .collect()
        };
        let left = act(&self.left)?;
        let right = act(&self.right)?;
        let embedding = self
            .embedding
            .as_ref()
            .map(|emb| rows.iter().map(|r| combine(r, emb)).collect());
        Ok(Bimodule {
            field: self.field,
            left_vertices: self.left_vertices,
            right_vertices: self.right_vertices,
            left_vertex,
            right_vertex,
            left_arrows: self.left_arrows.clone(),
            right_arrows: self.right_arrows.clone(),
            left,
            right,
            embedding,
        })
    }

    /// Forgets the left action.
    pub fn to_right_module(&self) -> Representation {
        let vertices = self.right_vertices;
        let mut local = vec![0; self.dim()];
        let mut dims = vec![0; vertices];
        for (k, v) in self.right_vertex.iter().enumerate() {
            local[k] = dims[*v];
            dims[*v] += 1;
        }
        let maps = self
            .right_arrows
            .iter()
            .enumerate()
            .map(|(c, (s, t))| {
                let mut m = Matrix::zeros(self.field, dims[*s], dims[*t]);
                for k in (0..self.dim()).filter(|k| self.right_vertex[*k] == *s) {
                    for (l, x) in self.right[c][k].entries() {
                        m.set(local[k], local[*l], x.clone());
                    }
                }
                m
            })
            .collect();
        Representation::from_parts(self.field, dims, self.right_arrows.clone(), maps).expect("shapes agree")
    }

    /// `x ⊗_A b` as the quotient of `⊕_v x e_v ⊗_k e_v b` by the balancing
    /// relations of the arrows of `A`.
    pub fn tensor(x: &Bimodule, b: &Bimodule) -> Result<Bimodule> {
        Ok(Bimodule::tensor_with_pairs(x, b)?.0)
    }

    /// The tensor product and, for each of its basis elements, the pair of
    /// basis elements whose tensor it is.
    fn tensor_with_pairs(x: &Bimodule, b: &Bimodule) -> Result<(Bimodule, Vec<(usize, usize)>)> {
        if x.right_arrows != b.left_arrows || x.right_vertices != b.left_vertices {
            return Err(Error::InvalidArgument("tensor over mismatched algebras".into()));
        }
        let field = x.field;
        let middle = b.left_vertices;
        let mut by_left: Vec<Vec<usize>> = vec![Vec::new(); middle];
        let mut pos = vec![0; b.dim()];
        for (k, v) in b.left_vertex.iter().enumerate() {
            pos[k] = by_left[*v].len();
            by_left[*v].push(k);
        }
        let mut offset = Vec::with_capacity(x.dim() + 1);
        offset.push(0);
        for v in &x.right_vertex {
            offset.push(offset.last().unwrap() + by_left[*v].len());
        }
        let pair = |i: usize, k: usize| offset[i] + pos[k];
        let total = offset[x.dim()];
        let mut relations = Echelon::new(field);
        for (a, (u, w)) in x.right_arrows.iter().enumerate() {
            for i in (0..x.dim()).filter(|i| x.right_vertex[*i] == *u) {
                for &k in &by_left[*w] {
                    let mut acc: BTreeMap<usize, _> = BTreeMap::new();
                    for (i2, c) in x.right[a][i].entries() {
                        *acc.entry(pair(*i2, k)).or_insert_with(|| field.zero()) += c;
                    }
                    for (k2, c) in b.left[a][k].entries() {
                        *acc.entry(pair(i, *k2)).or_insert_with(|| field.zero()) -= c;
                    }
                    relations.insert(&SparseVec::from_map(acc));
                }
            }
        }
        let mut free_index = vec![usize::MAX; total];
        let mut free_pairs = Vec::new();
        for i in 0..x.dim() {
            for (p, &k) in by_left[x.right_vertex[i]].iter().enumerate() {
                let idx = offset[i] + p;
                if !relations.is_pivot(idx) {
                    free_index[idx] = free_pairs.len();
                    free_pairs.push((i, k));
                }
            }
        }
        let project = |v: SparseVec| relations.reduce(&v).1.remap(|j| free_index[j]);
        let left = (0..x.left_arrows.len())
            .map(|a| {
                free_pairs
                    .iter()
                    .map(|(i, k)| {
                        let v = x.left[a][*i].remap(|i2| pair(i2, *k));
                        project(v)
                    })
                    .collect()
            })
            .collect();
        let right = (0..b.right_arrows.len())
            .map(|c| {
                free_pairs
                    .iter()
                    .map(|(i, k)| {
                        let v = b.right[c][*k].remap(|k2| pair(*i, k2));
                        project(v)
                    })
                    .collect()
            })
            .collect();
        let t = Bimodule {
            field,
            left_vertices: x.left_vertices,
            right_vertices: b.right_vertices,
            left_vertex: free_pairs.iter().map(|(i, _)| x.left_vertex[*i]).collect(),
            right_vertex: free_pairs.iter().map(|(_, k)| b.right_vertex[*k]).collect(),
            left_arrows: x.left_arrows.clone(),
            right_arrows: b.right_arrows.clone(),
            left,
            right,
            embedding: None,
        };
        Ok((t, free_pairs))
    }

    /// `p * y` for a path `p` of the left algebra, given by its arrow indices.
    fn act_left_path(&self, arrows: &[ArrowId], y: &SparseVec) -> SparseVec {
        arrows
            .iter()
            .rev()
            .fold(y.clone(), |acc, a| combine(&acc, &self.left[a.index()]))
    }
}

/// Dimension vector of `m ⊗_A b` computed as the cokernel of `P_1 ⊗ b -> P_0 ⊗ b`
/// for a minimal presentation of `m` over `alg`, using `e_v A ⊗_A b = e_v b`.
pub fn tensor_dims_by_presentation(alg: &Algebra, m: &Representation, b: &Bimodule) -> Result<Vec<usize>> {
    let n_right = b.right_vertices;
    let res = resolve(alg, m, 2)?;
    let basis = alg.basis();
    let generators = |mult: &[usize]| -> Vec<usize> {
        mult.iter()
            .enumerate()
            .flat_map(|(v, k)| std::iter::repeat_n(v, *k))
            .collect()
    };
    let Some(p0) = res.multiplicities.first() else {
        return Ok(vec![0; n_right]);
    };
    let g0 = generators(p0);
    let mut by_left: Vec<Vec<usize>> = vec![Vec::new(); m.vertex_count()];
    for (k, v) in b.left_vertex.iter().enumerate() {
        by_left[*v].push(k);
    }
    // Index of `g ⊗ b_k` in P_0 ⊗ b.
    let mut offset = vec![0];
    for v in &g0 {
        offset.push(offset.last().unwrap() + by_left[*v].len());
    }
    let mut totals = vec![0; n_right];
    for v in &g0 {
        for k in &by_left[*v] {
            totals[b.right_vertex[*k]] += 1;
        }
    }
    let Some(d1) = res.differentials.get(1) else {
        return Ok(totals);
    };
    let g1 = generators(&res.multiplicities[1]);
    // Row of g1 (at vertex u) in P_1 at u, and the P_0 layout at each vertex.
    let layout = |gens: &[usize], u: usize| -> Vec<(usize, usize)> {
        gens.iter()
            .enumerate()
            .flat_map(|(g, v)| {
                basis
                    .between(VertexId(*v as u32), VertexId(u as u32))
                    .into_iter()
                    .map(move |i| (g, i))
            })
            .collect()
    };
    let mut spans: Vec<Echelon> = (0..n_right).map(|_| Echelon::new(b.field)).collect();
    for (g, u) in g1.iter().enumerate() {
        let row_index = layout(&g1, *u)
            .iter()
            .position(|(h, i)| *h == g && basis.path(*i).is_trivial())
            .expect("generator present");
        let image = d1[*u].row(row_index);
        let p0_layout = layout(&g0, *u);
        for &k in &by_left[*u] {
            let mut acc = SparseVec::new();
            for ((g0_idx, path_idx), c) in p0_layout.iter().zip(image) {
                if c.is_zero() {
                    continue;
                }
                let path = basis.path(*path_idx);
                let moved = b.act_left_path(path.arrows(), &SparseVec::unit(k, b.field.one()));
                let local =
                    moved.remap(|k2| offset[*g0_idx] + by_left[g0[*g0_idx]].binary_search(&k2).expect("left vertex"));
                acc = acc.axpy(c, &local);
            }
            spans[b.right_vertex[k]].insert(&acc);
        }
    }
    Ok(totals.iter().zip(&spans).map(|(t, s)| t - s.rank()).collect())
}

/// The cleft extension `Γ -> Λ -> Γ` of a monomial arrow removal, with the
/// bimodules realizing the functors between module categories.
#[derive(Clone, Debug)]
pub struct Cleft<'a> {
    pub lambda: &'a Algebra,
    pub removal: &'a Removal,
    /// Λ-arrows in the order of Γ's arrows.
    gamma_arrows: Vec<ArrowId>,
    /// `<α>` as a Γ-Λ bimodule.
    pub k_lambda: Bimodule,
    /// `<α>` as a Γ-Γ bimodule.
    pub k_gamma: Bimodule,
    /// `Λ ⊗_Γ Λ` as a Λ-bimodule.
    pub tensor_square: Bimodule,
    /// Kernel of multiplication `Λ ⊗_Γ Λ -> Λ`.
    pub l: Bimodule,
}

impl<'a> Cleft<'a> {
    pub fn new(lambda: &'a Algebra, removal: &'a Removal) -> Result<Cleft<'a>> {
        let q = lambda.quiver();
        let gamma = &removal.gamma;
        let mut gamma_arrows = vec![None; gamma.quiver().arrow_count()];
        for (k, image) in removal.arrow_map.iter().enumerate() {
            if let Some(b) = image {
                gamma_arrows[b.index()] = Some(q.arrow_at(k));
            }
        }
        let gamma_arrows: Vec<ArrowId> = gamma_arrows
            .into_iter()
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Invariant("arrow map is not onto".into()))?;
        let all: Vec<ArrowId> = q.arrows().to_vec();
        let alpha_vec = lambda.basis().path_vector(&Path::from_arrow(removal.arrow));
        let ideal = Bimodule::regular(lambda, &all, &all).sub(&[alpha_vec])?;
        let ideal_vectors = ideal.embedding().expect("inside Λ").to_vec();
        let k_lambda = Bimodule::regular(lambda, &gamma_arrows, &all).sub(&ideal_vectors)?;
        let k_gamma = Bimodule::regular(lambda, &gamma_arrows, &gamma_arrows).sub(&ideal_vectors)?;
        let left = Bimodule::regular(lambda, &all, &gamma_arrows);
        let right = Bimodule::regular(lambda, &gamma_arrows, &all);
        let (tensor_square, pairs) = Bimodule::tensor_with_pairs(&left, &right)?;
        let basis = lambda.basis();
        let images: Vec<SparseVec> = pairs
            .iter()
            .map(|(i, k)| basis.mul(&basis_vector(&left, *i), &basis_vector(&right, *k)))
            .collect();
        let l = tensor_square.sub(&kernel_of(lambda.field(), &images, basis.dim()))?;
        Ok(Cleft {
            lambda,
            removal,
            gamma_arrows,
            k_lambda,
            k_gamma,
            tensor_square,
            l,
        })
    }

    pub fn gamma(&self) -> &Algebra {
        &self.removal.gamma
    }

    /// Λ-arrows in the order of Γ's arrows.
    pub fn gamma_arrows(&self) -> &[ArrowId] {
        &self.gamma_arrows
    }

    /// Restriction of scalars along the section `Γ -> Λ`.
    pub fn restrict(&self, m: &Representation) -> Result<Representation> {
        m.restrict(self.gamma().quiver(), &self.removal.arrow_map)
    }

    /// `H(X) = X ⊗_Γ <α>_Λ`.
    pub fn h(&self, x: &Representation) -> Result<Representation> {
        let t = Bimodule::tensor(&Bimodule::from_right_module(x), &self.k_lambda)?;
        Ok(t.to_right_module())
    }

    /// `F(X) = X ⊗_Γ <α>_Γ`.
    pub fn f(&self, x: &Representation) -> Result<Representation> {
        let t = Bimodule::tensor(&Bimodule::from_right_module(x), &self.k_gamma)?;
        Ok(t.to_right_module())
    }

    /// `G(Y) = Y ⊗_Λ L`.
    pub fn g(&self, y: &Representation) -> Result<Representation> {
        let t = Bimodule::tensor(&Bimodule::from_right_module(y), &self.l)?;
        Ok(t.to_right_module())
    }
}

fn basis_vector(b: &Bimodule, i: usize) -> SparseVec {
    b.embedding().expect("sub-bimodule of the algebra")[i].clone()
}

/// One dimension identity with both sides evaluated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Identity {
    pub name: String,
    pub lhs: usize,
    pub rhs: i64,
    pub holds: bool,
}

impl Identity {
    fn new(name: &str, lhs: usize, rhs: i64) -> Identity {
        Identity {
            name: name.into(),
            lhs,
            rhs,
            holds: lhs as i64 == rhs,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BimoduleReport {
    pub identities: Vec<Identity>,
}

impl BimoduleReport {
    pub fn all_hold(&self) -> bool {
        self.identities.iter().all(|i| i.holds)
    }

    pub fn get(&self, name: &str) -> Option<&Identity> {
        self.identities.iter().find(|i| i.name == name)
    }
}

/// Checks the dimension counts behind the two-term bimodule resolutions of the
/// ideal `<α>` and of `L`, for the split `p α q`.
pub fn verify_bimodule_resolutions(cleft: &Cleft, p: &Path, q: &Path) -> Result<BimoduleReport> {
    let lambda = cleft.lambda;
    let gamma = cleft.gamma();
    let alpha = cleft.removal.arrow;
    let lb = lambda.basis();
    let gb = gamma.basis();
    let into = |b: &crate::ntip::AlgebraBasis, v: VertexId| b.ending_at(v).len() as i64;
    let out_of = |b: &crate::ntip::AlgebraBasis, v: VertexId| b.starting_at(v).len() as i64;
    let (sa, ta) = (alpha.source(), alpha.target());
    let (sp, tq) = (p.source(), q.target());
    let ideal_dim = cleft.k_lambda.dim();
    let mut ids = vec![
        Identity::new(
            "ideal as Λ-Γ bimodule",
            ideal_dim,
            into(lb, sa) * out_of(gb, ta) - into(lb, sp) * out_of(gb, tq),
        ),
        Identity::new(
            "ideal as Γ-Λ bimodule",
            ideal_dim,
            into(gb, sa) * out_of(lb, ta) - into(gb, sp) * out_of(lb, tq),
        ),
    ];
    let l_dim = cleft.tensor_square.dim() as i64 - lambda.dim() as i64;
    ids.push(Identity::new(
        "L as Λ-bimodule",
        cleft.l.dim(),
        into(lb, sa) * out_of(lb, ta) - into(lb, sp) * out_of(lb, tq),
    ));
    ids.push(Identity::new("L is the kernel of multiplication", cleft.l.dim(), l_dim));

    let span_rank = |vectors: Vec<SparseVec>| {
        let mut e = Echelon::new(lambda.field());
        for v in &vectors {
            e.insert(v);
        }
        e.rank()
    };
    let unit = |i: usize| SparseVec::unit(i, lambda.field().one());
    let lp = span_rank(
        lb.ending_at(sp)
            .into_iter()
            .map(|i| lb.act_right_path(&unit(i), p))
            .collect(),
    );
    let ql = span_rank(
        lb.starting_at(tq)
            .into_iter()
            .map(|i| lb.act_left_path(q, &unit(i)))
            .collect(),
    );
    ids.push(Identity::new("Λp = Λs(p)", lp, into(lb, sp)));
    ids.push(Identity::new("qΛ = t(q)Λ", ql, out_of(lb, tq)));
    let map = &cleft.removal.arrow_map;
    let to_gamma = |path: &Path| -> Option<Path> {
        if path.is_trivial() {
            return Some(path.clone());
        }
        Path::from_arrows(
            path.arrows()
                .iter()
                .map(|a| map[a.index()])
                .collect::<Option<Vec<_>>>()?,
        )
    };
    if let (Some(pg), Some(qg)) = (to_gamma(p), to_gamma(q)) {
        let gunit = |i: usize| SparseVec::unit(i, gamma.field().one());
        let gp = span_rank(
            gb.ending_at(sp)
                .into_iter()
                .map(|i| gb.act_right_path(&gunit(i), &pg))
                .collect(),
        );
        let qg_dim = span_rank(
            gb.starting_at(tq)
                .into_iter()
                .map(|i| gb.act_left_path(&qg, &gunit(i)))
                .collect(),
        );
        ids.push(Identity::new("Γp = Γs(p)", gp, into(gb, sp)));
        ids.push(Identity::new("qΓ = t(q)Γ", qg_dim, out_of(gb, tq)));
    }
    let lambda_gamma = cleft.restrict(&super::regular(lambda)?)?;
    let h = cleft.h(&lambda_gamma)?;
    ids.push(Identity::new(
        "H(Λ_Γ)",
        h.dim(),
        into(lb, sa) * out_of(lb, ta) - lp as i64 * out_of(lb, tq),
    ));
    Ok(BimoduleReport { identities: ids })
}
