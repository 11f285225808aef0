//! Payoff mechanisms and property audits for max-flow games where each edge
//! is owned by a player who privately reports its capacity.
//!
//! All arithmetic is exact ([`rational::Rational`]); nothing in the library
//! touches floating point.

pub mod audits;
pub mod complementarity;
pub mod cuts;
pub mod error;
pub mod exec;
pub mod fixtures;
pub mod flow;
pub mod game;
pub mod limits;
pub mod mechanisms;
pub mod network;
pub mod random;
pub mod rational;
pub mod simplex;

pub use error::{FlowError, Result};
pub use exec::Execution;
pub use network::{parse_network, FlowNetwork};
pub use rational::Rational;
