//! Seeded generators for the five benchmark families. Each returns the
//! natural formulation; extended formulations come from `exocone::extend`.

mod expdesign;
mod matcompletion;
mod matregression;
mod polymin;
mod portfolio;

pub use expdesign::gen_expdesign;
pub use matcompletion::{gen_matcompletion, MatCompletionPattern, KNOWN_PROBABILITY, REFERENCE_SEEDS};
pub use matregression::{gen_matregression, REGULARIZATION};
pub use polymin::{gen_polymin, polymin_problem, PolyMinInstance};
pub use portfolio::gen_portfolio;

use exocone::{make_cone, ConeKind, ConicProblem};
use nalgebra::{DMatrix, DVector};

use crate::BenchError;

/// Assembles a problem from raw blocks, building each cone.
pub(crate) fn assemble(
    c: DVector<f64>,
    a: DMatrix<f64>,
    b: DVector<f64>,
    g: DMatrix<f64>,
    h: DVector<f64>,
    kinds: Vec<ConeKind>,
) -> Result<ConicProblem, BenchError> {
    let cones = kinds.into_iter().map(make_cone).collect::<Result<Vec<_>, _>>()?;
    Ok(ConicProblem::new(c, a, b, g, h, cones)?)
}
