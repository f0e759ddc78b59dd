//! Compiles the guide's chapters as rustdoc so that `cargo test` runs every
//! snippet in `book/src`. mdbook itself cannot link against workspace crates.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}
#[doc = include_str!("../../../book/src/rules.md")]
pub mod rules {}
#[doc = include_str!("../../../book/src/strategies.md")]
pub mod strategies {}
#[doc = include_str!("../../../book/src/cubes.md")]
pub mod cubes {}
#[doc = include_str!("../../../book/src/solver.md")]
pub mod solver {}
#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}
#[doc = include_str!("../../../book/src/play.md")]
pub mod play {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
