use std::fmt;

use serde::Serialize;

use super::{projective, Representation};
use crate::algebra::Algebra;
use crate::error::Result;
use crate::linalg::{Echelon, Matrix, SparseVec};
use crate::quiver::VertexId;
use crate::scalar::Scalar;

/// A minimal projective cover `P -> M`.
#[derive(Clone, Debug)]
pub struct Cover {
    pub projective: Representation,
    /// Number of copies of `e_v Λ` in `P`, per vertex.
    pub multiplicities: Vec<usize>,
    /// Lifts of a basis of the top, as `(vertex, element of M_v)`.
    pub generators: Vec<(usize, Vec<Scalar>)>,
    /// The epimorphism at each vertex, a `dim P_w x dim M_w` matrix.
    pub epi: Vec<Matrix>,
}

pub fn projective_cover(alg: &Algebra, m: &Representation) -> Result<Cover> {
    let field = m.field();
    let n = m.vertex_count();
    let mut generators = Vec::new();
    let mut multiplicities = vec![0; n];
    for (v, mult) in multiplicities.iter_mut().enumerate() {
        let rad = m.radical_at(v);
        let mut span = Echelon::new(field);
        for i in 0..rad.dim() {
            span.insert(&SparseVec::from_dense(rad.rows().row(i)));
        }
        for k in 0..m.dim_at(v) {
            let unit = SparseVec::unit(k, field.one());
            if span.insert(&unit).is_some() {
                generators.push((v, unit.to_dense(field, m.dim_at(v))));
                *mult += 1;
            }
        }
    }
    let basis = alg.basis();
    let mut indecomposables: Vec<Option<Representation>> = vec![None; n];
    let mut p = Representation::zero(alg.quiver(), field);
    let mut epi_rows: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); n];
    for (v, x) in &generators {
        let pv = match &indecomposables[*v] {
            Some(pv) => pv.clone(),
            None => {
                let pv = projective(alg, VertexId(*v as u32))?;
                indecomposables[*v] = Some(pv.clone());
                pv
            }
        };
        p = p.direct_sum(&pv);
        for (w, rows) in epi_rows.iter_mut().enumerate() {
            for i in basis.between(VertexId(*v as u32), VertexId(w as u32)) {
                rows.push(m.act_path(x, basis.path(i)));
            }
        }
    }
    let epi = epi_rows
        .into_iter()
        .enumerate()
        .map(|(w, rows)| Matrix::from_rows(field, m.dim_at(w), rows))
        .collect();
    Ok(Cover {
        projective: p,
        multiplicities,
        generators,
        epi,
    })
}

/// First syzygy with its inclusion into the cover, per vertex.
pub fn syzygy(alg: &Algebra, m: &Representation) -> Result<(Representation, Vec<Matrix>, Cover)> {
    let cover = projective_cover(alg, m)?;
    let spans: Vec<Matrix> = cover.epi.iter().map(Matrix::left_kernel).collect();
    let (omega, incl) = cover.projective.submodule(&spans)?;
    Ok((omega, incl, cover))
}

/// Projective dimension, or a lower bound when the cutoff was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjDim {
    Exact(usize),
    AtLeast(usize),
}

impl ProjDim {
    pub fn exact(self) -> Option<usize> {
        match self {
            ProjDim::Exact(n) => Some(n),
            ProjDim::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for ProjDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjDim::Exact(n) => write!(f, "{n}"),
            ProjDim::AtLeast(n) => write!(f, "≥ {n}"),
        }
    }
}

/// `... -> P_1 -> P_0 -> M -> 0`, computed by iterated minimal covers.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub module: Representation,
    pub projectives: Vec<Representation>,
    pub multiplicities: Vec<Vec<usize>>,
    /// `differentials[0]` is `P_0 -> M`, `differentials[n]` is `P_n -> P_{n-1}`,
    /// each given per vertex.
    pub differentials: Vec<Vec<Matrix>>,
    /// `Ω^1 M, Ω^2 M, ...`; the last entry is nonzero exactly when truncated.
    pub syzygies: Vec<Representation>,
    pub minimal: bool,
    pub truncated: bool,
}

pub fn resolve(alg: &Algebra, m: &Representation, max_steps: usize) -> Result<Resolution> {
    let mut res = Resolution {
        module: m.clone(),
        projectives: Vec::new(),
        multiplicities: Vec::new(),
        differentials: Vec::new(),
        syzygies: Vec::new(),
        minimal: true,
        truncated: false,
    };
    let mut current = m.clone();
    let mut prev_incl: Option<Vec<Matrix>> = None;
    for _ in 0..max_steps {
        if current.is_zero() {
            break;
        }
        let (omega, incl, cover) = syzygy(alg, &current)?;
        for (w, k) in incl.iter().enumerate() {
            let rad = cover.projective.radical_at(w);
            if (0..k.rows()).any(|i| !rad.contains(k.row(i))) {
                res.minimal = false;
            }
        }
        let d: Vec<Matrix> = match &prev_incl {
            None => cover.epi.clone(),
            Some(prev) => cover.epi.iter().zip(prev).map(|(e, i)| e.mul(i)).collect(),
        };
        res.projectives.push(cover.projective);
        res.multiplicities.push(cover.multiplicities);
        res.differentials.push(d);
        res.syzygies.push(omega.clone());
        current = omega;
        prev_incl = Some(incl);
    }
    res.truncated = !current.is_zero();
    Ok(res)
}

impl Resolution {
    /// Length of the resolution when it terminated.
    pub fn length(&self) -> Option<usize> {
        if self.truncated {
            None
        } else {
            Some(self.projectives.len().saturating_sub(1))
        }
    }

    pub fn projective_dimension(&self) -> ProjDim {
        match self.length() {
            Some(n) => ProjDim::Exact(n),
            None => ProjDim::AtLeast(self.projectives.len()),
        }
    }

    /// Checks `d_{n} d_{n-1} = 0` and the rank conditions at every vertex, and
    /// that `P_0 -> M` is onto. Returns a description of the first failure.
    pub fn check_exactness(&self) -> std::result::Result<(), String> {
        let n = self.module.vertex_count();
        for w in 0..n {
            let ranks: Vec<usize> = self.differentials.iter().map(|d| d[w].rank()).collect();
            if let Some(r) = ranks.first() {
                if *r != self.module.dim_at(w) {
                    return Err(format!("P_0 -> M is not onto at vertex {w}"));
                }
            }
            for k in 1..self.differentials.len() {
                if !self.differentials[k][w].mul(&self.differentials[k - 1][w]).is_zero() {
                    return Err(format!("d_{k} d_{} is nonzero at vertex {w}", k - 1));
                }
            }
            for (k, p) in self.projectives.iter().enumerate() {
                let next = match ranks.get(k + 1) {
                    Some(r) => *r,
                    None if self.truncated => continue,
                    None => 0,
                };
                if ranks[k] + next != p.dim_at(w) {
                    return Err(format!("homology at P_{k}, vertex {w}"));
                }
            }
        }
        Ok(())
    }

    /// Image of every `d_n`, `n >= 1`, lies in the radical of `P_{n-1}`.
    pub fn check_minimality(&self) -> bool {
        (1..self.differentials.len()).all(|k| {
            let target = &self.projectives[k - 1];
            self.differentials[k].iter().enumerate().all(|(w, d)| {
                let rad = target.radical_at(w);
                (0..d.rows()).all(|i| rad.contains(d.row(i)))
            })
        })
    }

    /// `sum (-1)^n dim P_n`, meaningful when the resolution terminated.
    pub fn euler_characteristic(&self) -> i64 {
        self.projectives
            .iter()
            .enumerate()
            .map(|(k, p)| if k % 2 == 0 { p.dim() as i64 } else { -(p.dim() as i64) })
            .sum()
    }
}

/// Projective dimension up to `cutoff`. The zero module is reported as 0.
pub fn pd(alg: &Algebra, m: &Representation, cutoff: usize) -> Result<ProjDim> {
    Ok(resolve(alg, m, cutoff)?.projective_dimension())
}

/// Injective dimension of `m` as the projective dimension of `D m` over
/// `opposite`, which must be the opposite algebra of the one `m` lives over.
pub fn injdim(opposite: &Algebra, m: &Representation, cutoff: usize) -> Result<ProjDim> {
    pd(opposite, &m.dual(), cutoff)
}
