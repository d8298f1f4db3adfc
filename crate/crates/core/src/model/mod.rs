//! Problem instance, per-list preference views and mutable allocation state.

mod ids;
mod instance;
pub mod raw;
mod state;
mod validate;
mod view;

pub use ids::*;
pub use instance::{Candidate, Course, Instance, MeritList, SeatPool};
pub use raw::{
    CandidateRow, CategoryParentRow, CourseRow, MeritRow, Origin, PrefRow, QuotaRow, RawInstance,
    SourceFile,
};
pub use state::{AllocationState, QueueEntry};
pub use validate::{validate_instance, InstanceOptions, ValidationError, ValidationErrors};
pub use view::{build_per_list_views, Csr, PerListView, ViewEntry};
