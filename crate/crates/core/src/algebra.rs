//! Bound quiver algebras `kQ/I` given by generators and an admissible order.

use serde::Serialize;

use crate::element::FreeElement;
use crate::error::{Error, Result};
use crate::groebner::{complete_within, GroebnerBasis};
use crate::ntip::{AlgebraBasis, NtipAutomaton};
use crate::order::AdmissibleOrder;
use crate::quiver::{Path, Quiver};
use crate::scalar::Field;

/// Why a presentation fails to define a bound quiver algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum AdmissibilityFailure {
    /// A generator is not a relation (short path or mixed endpoints).
    NotRelation { generator: usize },
    /// Arbitrarily long paths survive; `cycle` can be repeated forever.
    InfiniteDimensional { cycle: String },
}

/// Admissibility of a presentation. Completion must succeed first.
pub fn check_admissible(
    q: &Quiver,
    generators: &[FreeElement],
    gb: &GroebnerBasis,
) -> std::result::Result<(), AdmissibilityFailure> {
    if let Some(i) = generators.iter().position(|g| !g.is_relation()) {
        return Err(AdmissibilityFailure::NotRelation { generator: i });
    }
    let tips: Vec<Path> = gb.tip_paths().cloned().collect();
    match NtipAutomaton::new(q, &tips).find_cycle() {
        Some(c) => Err(AdmissibilityFailure::InfiniteDimensional { cycle: q.path_name(&c) }),
        None => Ok(()),
    }
}

/// `Λ = kQ/I` with a reduced Gröbner basis and a basis of non-tip paths.
#[derive(Clone, Debug)]
pub struct Algebra {
    quiver: Quiver,
    field: Field,
    order: AdmissibleOrder,
    generators: Vec<FreeElement>,
    completed: GroebnerBasis,
    reduced: GroebnerBasis,
    basis: AlgebraBasis,
}

impl Algebra {
    pub fn new(
        quiver: Quiver,
        field: Field,
        order: AdmissibleOrder,
        generators: Vec<FreeElement>,
        cap: usize,
    ) -> Result<Algebra> {
        Algebra::with_limits(quiver, field, order, generators, cap, usize::MAX)
    }

    /// As [`Algebra::new`], failing with [`Error::CompletionSize`] once the
    /// completion would hold more than `max_elements` elements.
    pub fn with_limits(
        quiver: Quiver,
        field: Field,
        order: AdmissibleOrder,
        generators: Vec<FreeElement>,
        cap: usize,
        max_elements: usize,
    ) -> Result<Algebra> {
        if let Some(g) = generators.iter().find(|g| !g.is_relation()) {
            return Err(Error::NotAdmissible(format!(
                "{} is not a relation",
                g.render(&quiver, &order)
            )));
        }
        let completed = complete_within(&generators, &order, cap, max_elements)?;
        if let Err(f) = check_admissible(&quiver, &generators, &completed) {
            return Err(Error::NotAdmissible(match f {
                AdmissibilityFailure::NotRelation { generator } => {
                    format!("generator {generator} is not a relation")
                }
                AdmissibilityFailure::InfiniteDimensional { cycle } => {
                    format!("the cycle {cycle} survives in every power")
                }
            }));
        }
        let reduced = completed.reduced();
        let basis = AlgebraBasis::new(&quiver, field, &reduced);
        Ok(Algebra {
            quiver,
            field,
            order,
            generators,
            completed,
            reduced,
            basis,
        })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn order(&self) -> &AdmissibleOrder {
        &self.order
    }

    pub fn generators(&self) -> &[FreeElement] {
        &self.generators
    }

    /// The basis produced by completion, before reduction.
    pub fn completed(&self) -> &GroebnerBasis {
        &self.completed
    }

    pub fn groebner(&self) -> &GroebnerBasis {
        &self.reduced
    }

    pub fn basis(&self) -> &AlgebraBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn normal_form(&self, z: &FreeElement) -> FreeElement {
        self.reduced.normal_form(z)
    }

    pub fn contains(&self, z: &FreeElement) -> bool {
        self.normal_form(z).is_zero()
    }

    pub fn loewy_length(&self) -> usize {
        self.basis.loewy_length(&self.quiver)
    }

    pub fn render(&self, z: &FreeElement) -> String {
        z.render(&self.quiver, &self.order)
    }

    /// `Λ^op`: reversed arrows and relations, the same arrow precedence, completed again.
    pub fn opposite(&self) -> Result<Algebra> {
        let q = self.quiver.opposite();
        let reversed: Vec<_> = self.order.precedence().into_iter().map(|i| q.arrow_at(i)).collect();
        let order = AdmissibleOrder::with_precedence(&q, &reversed)?;
        let gens = self.reduced.elements().iter().map(FreeElement::reversed).collect();
        Algebra::new(q, self.field, order, gens, crate::groebner::DEFAULT_CAP)
    }
}
