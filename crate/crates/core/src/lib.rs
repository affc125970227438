//! Shock propagation and stability analysis for interbank lending networks.
//!
//! A network is a directed graph of banks where an edge `(u, v)` records a
//! loan from `u` to `v`. Shocking a set of banks erodes their external
//! assets; banks whose equity turns negative fail and pass losses to their
//! creditors. The crate computes balance sheets, simulates cascades, and
//! solves for the smallest shock set that kills a network (the stability
//! index) and the most damaging shock set of a given size (the dual index).
//!
//! ```
//! use contagion::{fixtures, Horizon, ShockSet, propagate};
//!
//! let spec = fixtures::non_monotone();
//! let shock = ShockSet::from_ids(&spec, ["a", "b"]).unwrap();
//! let trace = propagate(&spec, &shock, Horizon::Unbounded).unwrap();
//! assert!(trace.dead);
//! assert_eq!(trace.last_step(), Some(3));
//! ```

pub mod amount;
pub mod arborescence;
pub mod cascade;
pub mod cli;
pub mod cover;
pub mod dual;
pub mod fixtures;
pub mod generate;
pub mod io;
pub mod network;
pub mod stability;

pub use amount::{parse_rational, Amount, Backend};
pub use cascade::{horizon_bound, infl, is_dead, propagate, CascadeTrace, Horizon, ShockSet, Simulator};
pub use network::{derive_balance_sheets, BalanceSheets, Mode, NetworkSpec, Violation};
pub use stability::{StabilityIndex, StabilityResult};
