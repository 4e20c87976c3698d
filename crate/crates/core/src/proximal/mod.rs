//! Ping-pong data: the scaled elements `f(L)` and `u(L)`, their attracting
//! points and repelling hyperplanes, and seeded basis selection.

pub mod conditions;
pub mod probe;
pub mod scheme;

pub use conditions::{
    check_free_conditions, check_hnn_conditions, choose_basis_free, choose_basis_hnn, ConditionReport, ConditionResult,
};
pub use probe::{proximality_probe, Direction};
pub use scheme::{build_hnn_scaled, build_scaled, PingPongScheme};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ProximalError {
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),
    #[error("no admissible basis after {draws} draws (last failures: {last})")]
    SearchFailure { draws: usize, last: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
}
