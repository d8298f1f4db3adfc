//! Joint seat allocation across several merit lists.
//!
//! Candidates submit one joint preference list over courses governed by
//! different merit lists. The engine allocates on the first list, then
//! improves allotments list by list; candidates only ever move up their
//! preference list, and every freed seat is offered down a FIFO waiting
//! list. Each elementary step is recorded as an audit event that can be
//! replayed.
//!
//! The [`oracle`] module holds an independent deferred-acceptance
//! implementation and a brute-force stability checker used for verification.

pub mod allocator;
pub mod io;
pub mod model;
pub mod oracle;
pub mod reservation;

#[cfg(test)]
mod testutil;
