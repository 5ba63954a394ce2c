//! Figure reproduction and parameter sweeps on top of `optomech-core`.
//!
//! Each experiment is a pure function of a [`config::Config`] returning tables;
//! the binary writes them as CSV alongside a JSON manifest.

pub mod check;
pub mod config;
pub mod grid;
pub mod manifest;
pub mod runs;
pub mod sweep;
pub mod table;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
