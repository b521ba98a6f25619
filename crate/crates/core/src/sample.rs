//! Random presentations and elements for property checks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::Algebra;
use crate::element::FreeElement;
use crate::error::{Error, Result};
use crate::groebner::DEFAULT_CAP;
use crate::linalg::SparseVec;
use crate::order::AdmissibleOrder;
use crate::quiver::{Path, Quiver};
use crate::scalar::{Field, Scalar};

pub fn nonzero_scalar<R: Rng + ?Sized>(field: Field, rng: &mut R) -> Scalar {
    loop {
        let c = field.random(rng);
        if !c.is_zero() {
            return c;
        }
    }
}

/// A quiver on 1 to 3 vertices with 1 to 4 arrows, loops allowed.
pub fn random_quiver<R: Rng + ?Sized>(rng: &mut R) -> Quiver {
    let n = rng.gen_range(1..=3);
    let m = rng.gen_range(1..=4);
    let arrows: Vec<(String, String, String)> = (0..m)
        .map(|i| {
            (
                format!("a{i}"),
                rng.gen_range(0..n).to_string(),
                rng.gen_range(0..n).to_string(),
            )
        })
        .collect();
    Quiver::new((0..n).map(|v| v.to_string()), arrows).expect("valid quiver")
}

pub fn random_field<R: Rng + ?Sized>(rng: &mut R) -> Field {
    match rng.gen_range(0..3) {
        0 => Field::Rationals,
        1 => Field::Prime(2),
        _ => Field::Prime(3),
    }
}

/// A random linear combination of up to `terms` paths of length
/// `min_len..=max_len`, all with the same endpoints as the first one drawn.
pub fn random_element<R: Rng + ?Sized>(
    q: &Quiver,
    field: Field,
    rng: &mut R,
    min_len: usize,
    max_len: usize,
    terms: usize,
) -> FreeElement {
    let paths: Vec<Path> = q
        .paths_up_to(max_len)
        .into_iter()
        .filter(|p| p.len() >= min_len)
        .collect();
    let Some(first) = paths.choose(rng) else {
        return FreeElement::zero();
    };
    let parallel: Vec<&Path> = paths
        .iter()
        .filter(|p| p.source() == first.source() && p.target() == first.target())
        .collect();
    let mut z = FreeElement::monomial(first.clone(), nonzero_scalar(field, rng));
    for _ in 1..terms.max(1) {
        let p = parallel.choose(rng).expect("contains first");
        z.add_term((*p).clone(), field.random(rng));
    }
    z
}

/// A random element of the free algebra, not necessarily homogeneous in its
/// endpoints.
pub fn random_mixed_element<R: Rng + ?Sized>(q: &Quiver, field: Field, rng: &mut R, max_len: usize) -> FreeElement {
    let paths = q.paths_up_to(max_len);
    let mut z = FreeElement::zero();
    for _ in 0..rng.gen_range(1..=5) {
        z.add_term(paths.choose(rng).expect("nonempty").clone(), field.random(rng));
    }
    z
}

/// Every path of length `len` as a monomial relation.
pub fn all_paths_of_length(q: &Quiver, field: Field, len: usize) -> Vec<FreeElement> {
    q.paths_up_to(len)
        .into_iter()
        .filter(|p| p.len() == len)
        .map(|p| FreeElement::monomial(p, field.one()))
        .collect()
}

/// Generators of a random admissible ideal: up to three random relations of
/// length 2 or 3 together with every path of length 3 or 4.
pub fn random_generators<R: Rng + ?Sized>(q: &Quiver, field: Field, rng: &mut R) -> Vec<FreeElement> {
    let mut gens = Vec::new();
    for _ in 0..rng.gen_range(0..=3) {
        let z = random_element(q, field, rng, 2, 3, 3);
        if z.is_relation() {
            gens.push(z);
        }
    }
    let len = if q.arrow_count() > 2 { 3 } else { rng.gen_range(3..=4) };
    gens.extend(all_paths_of_length(q, field, len));
    gens
}

pub fn random_order<R: Rng + ?Sized>(q: &Quiver, rng: &mut R) -> AdmissibleOrder {
    let mut arrows = q.arrows().to_vec();
    arrows.shuffle(rng);
    AdmissibleOrder::with_precedence(q, &arrows).expect("a permutation of the arrows")
}

/// Largest working set a sampled completion may reach before the draw is
/// discarded. Completion does not inter-reduce, so rare draws over `Q` grow
/// into the hundreds and take seconds.
pub const SAMPLE_COMPLETION_LIMIT: usize = 120;

pub fn random_algebra<R: Rng + ?Sized>(rng: &mut R) -> Result<Algebra> {
    loop {
        let q = random_quiver(rng);
        let field = random_field(rng);
        let gens = random_generators(&q, field, rng);
        let order = random_order(&q, rng);
        match Algebra::with_limits(q, field, order, gens, DEFAULT_CAP, SAMPLE_COMPLETION_LIMIT) {
            Err(Error::CompletionSize(_)) => continue,
            other => return other,
        }
    }
}

/// Another generating set of the same ideal: generators rescaled, a few
/// combined with parallel ones, shuffled, and padded with multiples `u*g*v`.
pub fn regenerate<R: Rng + ?Sized>(alg: &Algebra, rng: &mut R) -> Vec<FreeElement> {
    let q = alg.quiver();
    let field = alg.field();
    let mut gens: Vec<FreeElement> = alg
        .generators()
        .iter()
        .map(|g| g.scale(&nonzero_scalar(field, rng)))
        .collect();
    if gens.is_empty() {
        return gens;
    }
    // Completion does not inter-reduce, so dense sets blow up; keep the
    // changes few.
    for _ in 0..rng.gen_range(0..=2) {
        let (i, j) = (rng.gen_range(0..gens.len()), rng.gen_range(0..gens.len()));
        if i != j && gens[i].endpoints() == gens[j].endpoints() {
            let c = field.random(rng);
            let extra = gens[j].scale(&c);
            gens[i] = gens[i].add(&extra);
        }
    }
    gens.retain(|g| !g.is_zero());
    let short = q.paths_up_to(1);
    for _ in 0..rng.gen_range(0..=3) {
        let g = alg.generators().choose(rng).expect("nonempty").clone();
        let Some((s, t)) = g.endpoints() else { continue };
        let left: Vec<&Path> = short.iter().filter(|p| p.target() == s).collect();
        let right: Vec<&Path> = short.iter().filter(|p| p.source() == t).collect();
        let (u, v) = (
            left.choose(rng).expect("idempotent"),
            right.choose(rng).expect("idempotent"),
        );
        let z = g.sandwich(u, v);
        if !z.is_zero() {
            gens.push(z);
        }
    }
    gens.shuffle(rng);
    gens
}

/// A random element of `Λ` in basis coordinates.
pub fn random_vector<R: Rng + ?Sized>(alg: &Algebra, rng: &mut R) -> SparseVec {
    let dim = alg.dim();
    let mut x = SparseVec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let i = rng.gen_range(0..dim);
        x = x.axpy(
            &nonzero_scalar(alg.field(), rng),
            &SparseVec::unit(i, alg.field().one()),
        );
    }
    x
}
