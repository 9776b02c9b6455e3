//! Turning a curve, a target algebra and a table of inner bounds into an
//! explicit bilinear algorithm.

pub mod genus0;
pub mod genus1;
pub mod interp;
pub mod plan;
pub mod text;

pub use genus0::{genus0_decomposition, genus0_plan};
pub use genus1::{
    exhaustive_class_search, genus1_best, genus1_decomposition, genus1_plan, genus1_select, iterative_search_asym,
    iterative_search_sym, Case, SearchTrace, Selection,
};
pub use interp::{assemble, check_conditions, ConditionReport, InterpolationPlan, Status};
pub use plan::{plan_g, priced_cells, select_points, CellCount, GDecomposition, InnerProvider};
pub use text::{read_plan, write_plan, TextCurve};
