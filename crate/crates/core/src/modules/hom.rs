use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Representation;
use crate::linalg::{Echelon, Matrix, SparseVec};
use crate::scalar::{Field, Scalar};

/// A module map given by one matrix per vertex, `dim M_v x dim N_v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism(pub Vec<Matrix>);

impl Homomorphism {
    pub fn identity(m: &Representation) -> Homomorphism {
        Homomorphism(m.dims().iter().map(|d| Matrix::identity(m.field(), *d)).collect())
    }

    pub fn is_iso(&self) -> bool {
        self.0.iter().all(Matrix::is_invertible)
    }

    /// `M_a f_t = f_s N_a` for every arrow.
    pub fn intertwines(&self, m: &Representation, n: &Representation) -> bool {
        (0..m.arrow_count()).all(|k| {
            let (s, t) = m.endpoints(k);
            m.map(k).mul(&self.0[t]) == self.0[s].mul(n.map(k))
        })
    }

    fn combination(basis: &[Homomorphism], coeffs: &[Scalar]) -> Homomorphism {
        let mut acc: Vec<Matrix> = basis[0].0.iter().map(|f| f.scale(&coeffs[0])).collect();
        for (h, c) in basis.iter().zip(coeffs).skip(1) {
            for (a, f) in acc.iter_mut().zip(&h.0) {
                *a = a.add(&f.scale(c));
            }
        }
        Homomorphism(acc)
    }
}

/// Basis of `Hom_Λ(M, N)` from the intertwining equations.
pub fn hom_space(m: &Representation, n: &Representation) -> Vec<Homomorphism> {
    let field = m.field();
    let verts = m.vertex_count();
    let mut offset = vec![0; verts + 1];
    for v in 0..verts {
        offset[v + 1] = offset[v] + m.dim_at(v) * n.dim_at(v);
    }
    let var = |v: usize, i: usize, j: usize| offset[v] + i * n.dim_at(v) + j;
    let mut eqs = Echelon::new(field);
    for k in 0..m.arrow_count() {
        let (s, t) = m.endpoints(k);
        let (ma, na) = (m.map(k), n.map(k));
        for i in 0..m.dim_at(s) {
            for j in 0..n.dim_at(t) {
                let mut row: BTreeMap<usize, Scalar> = BTreeMap::new();
                for l in 0..m.dim_at(t) {
                    let c = ma.get(i, l);
                    if !c.is_zero() {
                        *row.entry(var(t, l, j)).or_insert_with(|| field.zero()) += c;
                    }
                }
                for l in 0..n.dim_at(s) {
                    let c = na.get(l, j);
                    if !c.is_zero() {
                        *row.entry(var(s, i, l)).or_insert_with(|| field.zero()) -= c;
                    }
                }
                let row = SparseVec::from_map(row);
                if !row.is_zero() {
                    eqs.insert(&row);
                }
            }
        }
    }
    eqs.nullspace(offset[verts])
        .into_iter()
        .map(|x| {
            Homomorphism(
                (0..verts)
                    .map(|v| {
                        let mut f = Matrix::zeros(field, m.dim_at(v), n.dim_at(v));
                        for (idx, c) in x.entries() {
                            if (offset[v]..offset[v + 1]).contains(idx) {
                                let r = idx - offset[v];
                                f.set(r / n.dim_at(v), r % n.dim_at(v), c.clone());
                            }
                        }
                        f
                    })
                    .collect(),
            )
        })
        .collect()
}

#[derive(Clone, Debug)]
pub enum IsoCertificate {
    /// An explicit invertible module map.
    Iso { witness: Homomorphism },
    /// An invariant telling the modules apart.
    NotIso { invariant: String },
    /// No invertible map found among the sampled ones.
    Unknown { trials: usize },
}

impl IsoCertificate {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoCertificate::Iso { .. })
    }
}

pub fn default_trials(field: Field) -> usize {
    match field {
        Field::Rationals => 20,
        Field::Prime(_) => 50,
    }
}

/// Largest Hom space searched exhaustively over a finite field.
const EXHAUSTIVE_LIMIT: u64 = 1 << 12;

type Invariant = Box<dyn Fn(&Representation) -> Vec<Vec<usize>>>;

/// Decides `M ≅ N` where possible. Positive answers carry a checked map;
/// negative answers come from invariants or from an exhaustive search of a
/// small Hom space over a finite field.
pub fn iso_certificate(m: &Representation, n: &Representation, trials: usize, seed: u64) -> IsoCertificate {
    if m.dims() != n.dims() {
        return IsoCertificate::NotIso {
            invariant: format!("dimension vectors {:?} and {:?}", m.dims(), n.dims()),
        };
    }
    let invariants: [(&str, Invariant); 3] = [
        ("top", Box::new(|x| vec![x.top_dims()])),
        ("socle", Box::new(|x| vec![x.socle_dims()])),
        ("radical layers", Box::new(|x| x.radical_layers())),
    ];
    for (name, f) in &invariants {
        let (a, b) = (f(m), f(n));
        if a != b {
            return IsoCertificate::NotIso {
                invariant: format!("{name} {a:?} and {b:?}"),
            };
        }
    }
    if m.is_zero() {
        return IsoCertificate::Iso {
            witness: Homomorphism::identity(m),
        };
    }
    let basis = hom_space(m, n);
    if basis.is_empty() {
        return IsoCertificate::NotIso {
            invariant: "Hom(M, N) = 0".into(),
        };
    }
    let field = m.field();
    let accept = |h: Homomorphism| {
        debug_assert!(h.intertwines(m, n));
        h.is_iso().then_some(IsoCertificate::Iso { witness: h })
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let coeffs: Vec<Scalar> = basis.iter().map(|_| field.random(&mut rng)).collect();
        if let Some(c) = accept(Homomorphism::combination(&basis, &coeffs)) {
            return c;
        }
    }
    if let Some(q) = field.order() {
        let size = u32::try_from(basis.len()).ok().and_then(|h| q.checked_pow(h));
        if size.is_some_and(|s| s <= EXHAUSTIVE_LIMIT) {
            let mut digits = vec![0u64; basis.len()];
            loop {
                let coeffs: Vec<Scalar> = digits.iter().map(|d| field.from_i64(*d as i64)).collect();
                if let Some(c) = accept(Homomorphism::combination(&basis, &coeffs)) {
                    return c;
                }
                let Some(pos) = digits.iter().position(|d| d + 1 < q) else {
                    break;
                };
                digits[pos] += 1;
                digits[..pos].iter_mut().for_each(|d| *d = 0);
            }
            return IsoCertificate::NotIso {
                invariant: "no invertible map in Hom(M, N)".into(),
            };
        }
    }
    IsoCertificate::Unknown { trials }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::modules::{projective, simple};
    use crate::quiver::VertexId;

    #[test]
    fn self_iso_and_hom_dimensions() {
        let alg = corpus::spec("magicexam").unwrap().algebra().unwrap();
        let p = projective(&alg, VertexId(0)).unwrap();
        assert!(iso_certificate(&p, &p, 50, 1).is_iso());
        // Hom(e_v Λ, M) = M e_v.
        let reg = crate::modules::regular(&alg).unwrap();
        for v in alg.quiver().vertices() {
            let pv = projective(&alg, v).unwrap();
            assert_eq!(hom_space(&pv, &reg).len(), reg.dim_at(v.index()));
        }
        for h in hom_space(&p, &reg) {
            assert!(h.intertwines(&p, &reg));
        }
    }

    #[test]
    fn distinct_simples_are_told_apart() {
        let alg = corpus::spec("magicexam").unwrap().algebra().unwrap();
        let a = simple(&alg, VertexId(0)).unwrap();
        let b = simple(&alg, VertexId(1)).unwrap();
        assert!(matches!(iso_certificate(&a, &b, 5, 0), IsoCertificate::NotIso { .. }));
    }
}
