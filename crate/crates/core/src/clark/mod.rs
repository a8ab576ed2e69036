//! Clark measures of rational inner functions, sampled fiber by fiber or
//! traced along the level set.

mod checks;
mod coarea;
mod fiber;
mod measure;
mod rif;

pub use checks::{
    boundary_integral, cross_method_check, disintegration_check, poisson_check, poisson_kernel, Comparison,
    MAX_INTERIOR_RADIUS,
};
pub use coarea::{integrate_coarea, trace_level_set, LevelSetPoint, LevelSetSample, TORUS_MEASURE_2};
pub(crate) use fiber::check_alpha;
pub use fiber::{fiber_clark_measure, Atom, FiberMeasure, FiberOptions};
pub use measure::{
    assemble, assemble_matrix_ball, assemble_polydisc, MeasureMetadata, SampledClarkMeasure, WeightedFiber,
    MAX_SKIPPED_FRACTION, MIN_HAAR_SAMPLES, MIN_POLYDISC_GRID,
};
pub use rif::{DomainKind, InnernessCertificate, RationalInnerFn};
