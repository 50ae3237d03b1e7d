//! Finite-dimensional linear categories given by quivers with relations, and
//! the constructions on them: opposite, tensor and enveloping categories,
//! two-sided ideals and quotients.

mod build;
mod category;
mod constructions;
mod functor;
mod ideal;

pub use build::{build_category, check_admissible, AdmissibilityCertificate, PathCategory, MAX_PATHS};
pub use category::{HomBasisElem, PresentedCategory};
pub use constructions::{enveloping, opposite, pair_index, tensor, tensor_vector};
pub use functor::LinearFunctor;
pub use ideal::{ideal_from_generators, quotient_category, IdealData, Quotient};

use crate::error::Result;
use crate::quiver::IdealSpec;

impl PathCategory {
    /// The ideal generated by the combinations of an ideal declaration.
    pub fn ideal(&self, spec: &IdealSpec) -> Result<IdealData> {
        let mut gens = Vec::with_capacity(spec.generators.len());
        for g in &spec.generators {
            gens.push(self.element(g)?);
        }
        Ok(ideal_from_generators(self.category(), &gens))
    }
}
