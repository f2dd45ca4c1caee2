//! Decide whether two meromorphic functions share a third function on a
//! bounded rectangle, under the vanishing and value readings of IM, CM and
//! weighted sharing.

pub mod constants;
pub mod expr;
pub mod laurent;
pub mod local;
pub mod region;
pub mod verdict;
