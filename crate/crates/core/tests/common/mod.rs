//! Test-only oracles and generators shared by the integration tests.
#![allow(dead_code)]

pub mod checks;
pub mod gen;
pub mod oracle;
pub mod poly;

use meroshare::expr::{parse, Expr};

pub fn p(s: &str) -> Expr {
    parse(s).unwrap_or_else(|e| panic!("`{s}`: {e}"))
}
