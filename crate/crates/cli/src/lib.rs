//! Command-line front end: sharing analyses of a single triple and the
//! corpus of worked examples.

pub mod corpus;
pub mod run;
