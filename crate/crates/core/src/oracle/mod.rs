//! Independent verification: the seat pools as a many-to-one market,
//! deferred acceptance over it, a brute-force stability checker, and a
//! comparator against the engine.

pub mod brute;
mod compare;
mod da;
mod market;
mod stability;
mod verify;

pub use compare::{compare_with_oracle, Diff, Divergence, OracleError};
pub use da::{deferred_acceptance, deferred_acceptance_pool_proposing, Matching};
pub use market::{to_virtual_market, to_virtual_market_frozen, MarketError, VirtualMarket};
pub use stability::{check_stability, Envy, StabilityError, StabilityReport};
pub use verify::{verify_run, VerifyReport};
