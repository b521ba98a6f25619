//! Finitistic-dimension bounds through monomial arrow removal and triangular
//! reduction, with the auxiliary checks used to read them.

use petgraph::algo::kosaraju_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::modules::{
    ideal, injdim, pd, regular, resolve, simple, verify_bimodule_resolutions, BimoduleReport, Cleft, ProjDim,
    Representation,
};
use crate::quiver::{ArrowId, Quiver, VertexId};
use crate::removal::{remove_arrow, strict_groebner_witness, Level, Removal};

pub const REPORT_SCHEMA: &str = "quiver-findim/findim-report/1";
pub const DEFAULT_CUTOFF: usize = 12;

/// `X_Γ` viewed as a Λ-module through `Λ -> Γ`, so that `α` acts by zero.
pub fn inflate(lambda: &Algebra, removal: &Removal, x: &Representation) -> Result<Representation> {
    let q = lambda.quiver();
    let maps = q
        .arrows()
        .iter()
        .map(|a| match removal.arrow_map[a.index()] {
            Some(b) => x.map(b.index()).clone(),
            None => Matrix::zeros(
                lambda.field(),
                x.dim_at(a.source().index()),
                x.dim_at(a.target().index()),
            ),
        })
        .collect();
    Representation::new(q, lambda.field(), x.dims().to_vec(), maps)
}

/// Projective dimensions behind the cleft-extension conditions.
#[derive(Clone, Debug, Serialize)]
pub struct CleftQuantities {
    /// `pd <α>_Γ`, equal to `p_{mod Λ} = pd Λ_Γ`.
    pub pd_ideal_gamma: ProjDim,
    pub pd_ideal_lambda: ProjDim,
    /// `pd Γ_Λ = p_{mod Γ}`.
    pub pd_gamma_lambda: ProjDim,
    /// Largest `pd H(X)_Λ` over the simple Γ-modules and `Γ_Γ`.
    pub n_h_sampled: ProjDim,
    /// Largest `pd G(Y)_Λ` over the simple Λ-modules and `Λ_Λ`.
    pub n_g_sampled: ProjDim,
    /// All quantities within the bounds `1, 1, 2, 1, 1`.
    pub certified: bool,
}

/// Computes the quantities directly. With `strict` set, exceeding a bound is
/// reported as an invariant violation.
pub fn cleft_quantities(cleft: &Cleft, strict: bool, cutoff: usize) -> Result<CleftQuantities> {
    let lambda = cleft.lambda;
    let gamma = cleft.gamma();
    let alpha = cleft.removal.arrow;
    let ideal_l = ideal(lambda, alpha)?;
    let ideal_g = cleft.restrict(&ideal_l)?;
    let pd_ideal_lambda = pd(lambda, &ideal_l, cutoff)?;
    let pd_ideal_gamma = pd(gamma, &ideal_g, cutoff)?;
    let gamma_reg = regular(gamma)?;
    let pd_gamma_lambda = pd(lambda, &inflate(lambda, cleft.removal, &gamma_reg)?, cutoff)?;
    let mut n_h = ProjDim::Exact(0);
    let mut xs = vec![gamma_reg];
    for v in gamma.quiver().vertices() {
        xs.push(simple(gamma, v)?);
    }
    for x in &xs {
        n_h = n_h.max(pd(lambda, &cleft.h(x)?, cutoff)?);
    }
    let mut n_g = ProjDim::Exact(0);
    let mut ys = vec![regular(lambda)?];
    for v in lambda.quiver().vertices() {
        ys.push(simple(lambda, v)?);
    }
    for y in &ys {
        n_g = n_g.max(pd(lambda, &cleft.g(y)?, cutoff)?);
    }
    let within = |d: ProjDim, bound: usize| d.exact().is_some_and(|n| n <= bound);
    let certified = within(pd_ideal_gamma, 1)
        && within(pd_ideal_lambda, 1)
        && within(pd_gamma_lambda, 2)
        && within(n_h, 1)
        && within(n_g, 1);
    if strict {
        if !certified {
            return Err(Error::Invariant(format!(
                "strict removal with pd <α>_Γ = {pd_ideal_gamma}, pd <α>_Λ = {pd_ideal_lambda}, \
                 pd Γ_Λ = {pd_gamma_lambda}, sampled n_H = {n_h}, n_G = {n_g}"
            )));
        }
        if let (Some(a), Some(b)) = (pd_gamma_lambda.exact(), pd_ideal_lambda.exact()) {
            if a != b + 1 {
                return Err(Error::Invariant(format!("pd Γ_Λ = {a} but pd <α>_Λ = {b}")));
            }
        }
    }
    Ok(CleftQuantities {
        pd_ideal_gamma,
        pd_ideal_lambda,
        pd_gamma_lambda,
        n_h_sampled: n_h,
        n_g_sampled: n_g,
        certified,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Sources,
    Sinks,
}

/// Which side to extract when both sources and sinks exist.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// The larger of the two sets, sources on ties.
    #[default]
    Larger,
    SourcesFirst,
    SinksFirst,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extraction {
    pub side: Side,
    pub vertices: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangularReduction {
    pub steps: usize,
    /// `None` when a block that is neither local nor reducible remains.
    pub bound: Option<usize>,
    pub extractions: Vec<Extraction>,
    /// Vertices left when the procedure stopped.
    pub remaining: Vec<String>,
}

/// Triangular reduction with the default strategy.
pub fn triangular_reduction_bound(q: &Quiver) -> TriangularReduction {
    triangular_reduction_with(q, Strategy::default())
}

/// Greedy triangular reduction: each step removes every source or every sink
/// of the remaining quiver (loops ignored), the side chosen by `strategy`.
/// Each step adds one to the bound; once no arrows between distinct vertices
/// remain, the rest is a product of local algebras.
pub fn triangular_reduction_with(q: &Quiver, strategy: Strategy) -> TriangularReduction {
    let mut alive: Vec<bool> = vec![true; q.vertex_count()];
    let mut extractions = Vec::new();
    let proper = |alive: &[bool]| -> Vec<ArrowId> {
        q.arrows()
            .iter()
            .copied()
            .filter(|a| !a.is_loop() && alive[a.source().index()] && alive[a.target().index()])
            .collect()
    };
    loop {
        let arrows = proper(&alive);
        if arrows.is_empty() {
            break;
        }
        let live: Vec<usize> = (0..alive.len()).filter(|v| alive[*v]).collect();
        let sources: Vec<usize> = live
            .iter()
            .copied()
            .filter(|v| arrows.iter().all(|a| a.target().index() != *v))
            .collect();
        let sinks: Vec<usize> = live
            .iter()
            .copied()
            .filter(|v| arrows.iter().all(|a| a.source().index() != *v))
            .collect();
        let (side, set) = if sources.is_empty() && sinks.is_empty() {
            let remaining = live
                .iter()
                .map(|v| q.vertex_name(VertexId(*v as u32)).to_string())
                .collect();
            return TriangularReduction {
                steps: extractions.len(),
                bound: None,
                extractions,
                remaining,
            };
        } else {
            let take_sources = match strategy {
                Strategy::Larger => sources.len() >= sinks.len(),
                Strategy::SourcesFirst => !sources.is_empty(),
                Strategy::SinksFirst => sinks.is_empty(),
            };
            if take_sources {
                (Side::Sources, sources)
            } else {
                (Side::Sinks, sinks)
            }
        };
        for v in &set {
            alive[*v] = false;
        }
        extractions.push(Extraction {
            side,
            vertices: set
                .iter()
                .map(|v| q.vertex_name(VertexId(*v as u32)).to_string())
                .collect(),
        });
    }
    let remaining = (0..alive.len())
        .filter(|v| alive[*v])
        .map(|v| q.vertex_name(VertexId(v as u32)).to_string())
        .collect();
    TriangularReduction {
        steps: extractions.len(),
        bound: Some(extractions.len()),
        extractions,
        remaining,
    }
}

/// Vertices whose simple left module is missing from the socle of `ΛΛ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FpdWitness {
    pub vertex: String,
    pub missing: Vec<String>,
}

/// Dimension vector of the socle of the left regular module, read directly
/// from the left arrow action.
pub fn left_socle_dims(alg: &Algebra) -> Vec<usize> {
    let q = alg.quiver();
    let basis = alg.basis();
    q.vertices()
        .map(|v| {
            let start = basis.starting_at(v);
            let mut images: Vec<crate::linalg::SparseVec> =
                start.iter().map(|_| crate::linalg::SparseVec::new()).collect();
            // Stack the images under every arrow into v, offset per arrow.
            for (k, a) in q.arrows_into(v).enumerate() {
                for (row, &i) in start.iter().enumerate() {
                    let img = basis.left_arrow(a, i).remap(|j| j + k * basis.dim());
                    images[row] = images[row].axpy(&alg.field().one(), &img);
                }
            }
            let width = basis.dim() * q.arrows_into(v).count();
            crate::linalg::kernel_of(alg.field(), &images, width).len()
        })
        .collect()
}

/// A vertex certifying `fpd Λ > 0`: its simple left module does not embed in
/// `ΛΛ`. The socle is computed twice, directly and as the right socle of the
/// regular module over `opposite`; a disagreement is an invariant violation.
pub fn fpd_nonzero_witness(alg: &Algebra, opposite: &Algebra) -> Result<Option<FpdWitness>> {
    let direct = left_socle_dims(alg);
    let via_op = regular(opposite)?.socle_dims();
    if direct != via_op {
        return Err(Error::Invariant(format!(
            "left socle {direct:?} disagrees with the opposite algebra's {via_op:?}"
        )));
    }
    let q = alg.quiver();
    let missing: Vec<String> = q
        .vertices()
        .filter(|v| direct[v.index()] == 0)
        .map(|v| q.vertex_name(v).to_string())
        .collect();
    Ok(missing.first().cloned().map(|vertex| FpdWitness { vertex, missing }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Strictness,
    Removal,
    BimoduleResolutions,
    CleftQuantities,
    TriangularReduction,
}

/// Dimension data of the start of a minimal resolution.
#[derive(Clone, Debug, Serialize)]
pub struct ResolutionSummary {
    pub multiplicities: Vec<Vec<usize>>,
    pub syzygy_dims: Vec<Vec<usize>>,
    pub projective_dimension: ProjDim,
    /// Whether the last nonzero syzygy is simple, for terminating resolutions.
    pub last_syzygy_simple: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FindimReport {
    pub schema: &'static str,
    /// Caller-supplied name of the algebra, such as a file stem.
    pub algebra: Option<String>,
    pub vertices: Vec<String>,
    pub arrow: String,
    pub certificate: serde_json::Value,
    /// First stage that did not certify, if any.
    pub failed_stage: Option<Stage>,
    pub failure: Option<String>,
    pub ideal_resolution: Option<ResolutionSummary>,
    pub bimodule: Option<BimoduleReport>,
    pub quantities: Option<CleftQuantities>,
    pub triangular: Option<TriangularReduction>,
    pub gamma_bound: Option<usize>,
    pub lambda_bound: Option<usize>,
    pub fpd_lower: usize,
    pub fpd_upper: Option<usize>,
    pub fpd_positive: Option<FpdWitness>,
    pub notes: Vec<String>,
}

/// Runs the whole pipeline for removing `alpha` and reports the bound
/// `fpd Λ <= fpd Γ + 2` when every stage certifies.
pub fn main_bound(alg: &Algebra, alpha: ArrowId, cutoff: usize) -> Result<FindimReport> {
    let q = alg.quiver();
    let cert = strict_groebner_witness(alg, alpha);
    let opposite = alg.opposite()?;
    let fpd_positive = fpd_nonzero_witness(alg, &opposite)?;
    let mut report = FindimReport {
        schema: REPORT_SCHEMA,
        algebra: None,
        vertices: q.vertices().map(|v| q.vertex_name(v).to_string()).collect(),
        arrow: q.arrow_name(alpha).to_string(),
        certificate: cert.to_json(alg),
        failed_stage: None,
        failure: None,
        ideal_resolution: None,
        bimodule: None,
        quantities: None,
        triangular: None,
        gamma_bound: None,
        lambda_bound: None,
        fpd_lower: usize::from(fpd_positive.is_some()),
        fpd_upper: None,
        fpd_positive,
        notes: Vec::new(),
    };
    report.notes.push(if is_strongly_connected(q) {
        "the quiver is strongly connected".into()
    } else {
        "the quiver is not strongly connected".into()
    });
    let loops: Vec<String> = q
        .vertices()
        .map(|v| {
            format!(
                "{}:{}",
                q.vertex_name(v),
                q.arrows_from(v).filter(|a| a.is_loop()).count()
            )
        })
        .collect();
    report.notes.push(format!("loops per vertex {}", loops.join(" ")));
    report.notes.push(format!("Loewy length {}", alg.loewy_length()));
    if alpha.index() < q.arrow_count() {
        let res = resolve(alg, &ideal(alg, alpha)?, cutoff)?;
        report.ideal_resolution = Some(ResolutionSummary {
            multiplicities: res.multiplicities.clone(),
            syzygy_dims: res.syzygies.iter().map(|s| s.dims().to_vec()).collect(),
            projective_dimension: res.projective_dimension(),
            last_syzygy_simple: res
                .length()
                .and_then(|n| n.checked_sub(1))
                .map(|k| res.syzygies[k].dim() == 1),
        });
    }
    let strict = cert.level == Level::StrictGroebner;
    if !strict {
        report.failed_stage = Some(Stage::Strictness);
        report.failure = Some("the reduced Gröbner basis is not strict alpha-monomial".into());
    }
    let removal = match remove_arrow(alg, alpha) {
        Ok(r) => r,
        Err(e) => {
            report.failed_stage.get_or_insert(Stage::Removal);
            report.failure.get_or_insert(e.to_string());
            return Ok(report);
        }
    };
    if removal
        .gamma
        .groebner()
        .elements()
        .iter()
        .all(|g| g.as_monomial().is_some())
    {
        report
            .notes
            .push("Γ is a monomial algebra, so fpd Γ is finite by the known result for monomial algebras".into());
    }
    let triangular = triangular_reduction_bound(removal.gamma.quiver());
    report.gamma_bound = triangular.bound;
    report.triangular = Some(triangular);
    if !strict {
        return Ok(report);
    }
    let (p, pq) = cert.pq.clone().expect("strict certificates carry (p, q)");
    let cleft = Cleft::new(alg, &removal)?;
    let identities = verify_bimodule_resolutions(&cleft, &p, &pq)?;
    let ok = identities.all_hold();
    report.bimodule = Some(identities);
    if !ok {
        report.failed_stage = Some(Stage::BimoduleResolutions);
        report.failure = Some("a dimension identity failed".into());
        return Ok(report);
    }
    report.quantities = Some(cleft_quantities(&cleft, true, cutoff)?);
    match report.gamma_bound {
        Some(b) => {
            report.lambda_bound = Some(b + 2);
            report.fpd_upper = Some(b + 2);
        }
        None => {
            report.failed_stage = Some(Stage::TriangularReduction);
            report.failure = Some("no triangular reduction of Γ reaches local blocks".into());
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct SimpleData {
    pub vertex: String,
    pub loops: usize,
    pub pd: ProjDim,
    pub injdim: ProjDim,
    /// `dim e_v (I / (IJ + JI)) e_w` for every `w`, from the minimal
    /// resolution of the simple module.
    pub minimal_relations: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReducednessReport {
    pub strongly_connected: bool,
    pub loewy_length: usize,
    pub simples: Vec<SimpleData>,
    pub notes: Vec<String>,
}

pub fn is_strongly_connected(q: &Quiver) -> bool {
    let mut g: DiGraph<(), ()> = DiGraph::new();
    let nodes: Vec<_> = q.vertices().map(|_| g.add_node(())).collect();
    for a in q.arrows() {
        g.add_edge(nodes[a.source().index()], nodes[a.target().index()], ());
    }
    kosaraju_scc(&g).len() == 1
}

pub fn reducedness_report(alg: &Algebra, cutoff: usize) -> Result<ReducednessReport> {
    let q = alg.quiver();
    let opposite = alg.opposite()?;
    let mut simples = Vec::new();
    for v in q.vertices() {
        let s = simple(alg, v)?;
        let res = resolve(alg, &s, cutoff)?;
        simples.push(SimpleData {
            vertex: q.vertex_name(v).to_string(),
            loops: q.arrows_from(v).filter(|a| a.is_loop()).count(),
            pd: res.projective_dimension(),
            injdim: injdim(&opposite, &s, cutoff)?,
            minimal_relations: res
                .multiplicities
                .get(2)
                .cloned()
                .unwrap_or_else(|| vec![0; q.vertex_count()]),
        });
    }
    let strongly_connected = is_strongly_connected(q);
    let mut notes = Vec::new();
    if strongly_connected && q.vertex_count() > 1 {
        notes.push("the quiver is strongly connected, so no triangular reduction applies".into());
    }
    if let Some(s) = simples.iter().find(|s| s.pd.exact().is_some()) {
        notes.push(format!(
            "the simple at {} has finite projective dimension {}",
            s.vertex, s.pd
        ));
    }
    Ok(ReducednessReport {
        strongly_connected,
        loewy_length: alg.loewy_length(),
        simples,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse;

    #[test]
    fn local_algebra_reduces_in_zero_steps() {
        let alg = parse("field Q\nquiver\nvertex 1\narrow x 1 1\nend\nrelations\nx*x\nend\n")
            .unwrap()
            .algebra()
            .unwrap();
        let t = triangular_reduction_bound(alg.quiver());
        assert_eq!((t.steps, t.bound), (0, Some(0)));
        let op = alg.opposite().unwrap();
        assert_eq!(fpd_nonzero_witness(&alg, &op).unwrap(), None);
    }

    #[test]
    fn oriented_cycle_has_no_reduction() {
        let spec =
            parse("field Q\nquiver\nvertex 1\nvertex 2\narrow a 1 2\narrow b 2 1\nend\nrelations\na*b\nb*a\nend\n")
                .unwrap();
        let t = triangular_reduction_bound(&spec.quiver);
        assert_eq!((t.steps, t.bound), (0, None));
        assert!(is_strongly_connected(&spec.quiver));
    }

    #[test]
    fn path_algebra_of_a2_is_not_reduced() {
        let alg = parse("field Q\nquiver\nvertex 1\nvertex 2\narrow a 1 2\nend\nrelations\nend\n")
            .unwrap()
            .algebra()
            .unwrap();
        let r = reducedness_report(&alg, 4).unwrap();
        assert!(!r.strongly_connected);
        assert!(r.simples.iter().all(|s| s.pd.exact().is_some()));
        assert_eq!(triangular_reduction_bound(alg.quiver()).bound, Some(1));
    }
}
