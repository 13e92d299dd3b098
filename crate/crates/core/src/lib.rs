//! Embedding `r`-factorizations of complete 4-uniform multigraphs into
//! `s`-factorizations of larger ones.

pub mod bounds;
pub mod certificate;
pub mod conditions;
pub mod detach;
pub mod error;
pub mod exact;
pub mod factorization;
pub mod interval;
pub mod params;
pub mod planner;
pub mod sporadic;
pub mod sweep;

pub use bounds::{
    case_classify, global_bounds, per_color_bounds, BoundSet, CaseTag, PerColorBounds,
};
pub use certificate::{amalgamate, verify_certificate, EmbeddingCertificate};
pub use conditions::{check_conditions, theorem_case, ConditionId, ConditionReport, TheoremCase};
pub use detach::{detach, embed, generate_base, DetachConfig, Embedding};
pub use error::{Error, Result};
pub use exact::{ExactInt, ExactRat};
pub use factorization::{Factorization, Quad};
pub use interval::{IntervalRun, IntervalSolution, IntervalSystem};
pub use params::{EmbeddingParams, Tier};
pub use planner::{plan, plan_unguided, verify_plan, AmalgamPlan, ColorBlock, PlanSource, Subcase};
pub use sweep::{run_sweep, SweepRow, SweepSpec};
