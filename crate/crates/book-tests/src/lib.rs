//! Compiles and runs the code snippets of the guide in `book/` as doctests,
//! one module per chapter so failures point at their chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/fields.md")]
pub mod fields {}
#[doc = include_str!("../../../book/src/curves.md")]
pub mod curves {}
#[doc = include_str!("../../../book/src/jacobian.md")]
pub mod jacobian {}
#[doc = include_str!("../../../book/src/riemann-roch.md")]
pub mod riemann_roch {}
#[doc = include_str!("../../../book/src/cartier.md")]
pub mod cartier {}
#[doc = include_str!("../../../book/src/extensions.md")]
pub mod extensions {}
#[doc = include_str!("../../../book/src/higgs.md")]
pub mod higgs {}
#[doc = include_str!("../../../book/src/scans.md")]
pub mod scans {}
