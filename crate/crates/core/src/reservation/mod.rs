//! Category reservations and female supernumerary seats, expressed as extra
//! seat pools and expanded preference lists.

mod policy;
mod supernumerary;

pub use policy::{
    expand_female_pools, expand_preferences, Category, CategoryPolicy, ReservationError,
    SupernumeraryConfig,
};
pub use supernumerary::{supernumerary_on_fill, supernumerary_on_vacate};
