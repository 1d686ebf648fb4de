//! The guide's chapters, compiled so their code listings run as doctests.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}
#[doc = include_str!("../../../book/src/surjections.md")]
pub mod surjections {}
#[doc = include_str!("../../../book/src/frames.md")]
pub mod frames {}
#[doc = include_str!("../../../book/src/duality.md")]
pub mod duality {}
#[doc = include_str!("../../../book/src/actions.md")]
pub mod actions {}
#[doc = include_str!("../../../book/src/liftings.md")]
pub mod liftings {}
#[doc = include_str!("../../../book/src/theories.md")]
pub mod theories {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
