//! Exact tools for ordered topology on subsets of the real line.

pub mod exactnum;
pub mod setdsl;
pub mod gaps;
pub mod backforth;
pub mod dedekind;
pub mod cantor;
pub mod embed;
pub mod cli;
