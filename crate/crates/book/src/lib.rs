//! The guide under `book/src`, compiled as documentation so that
//! `cargo test` runs every snippet. One module per chapter keeps failures
//! traceable to their chapter.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}
#[doc = include_str!("../../../book/src/conventions.md")]
pub mod conventions {}
#[doc = include_str!("../../../book/src/root-data.md")]
pub mod root_data {}
#[doc = include_str!("../../../book/src/complexes.md")]
pub mod complexes {}
#[doc = include_str!("../../../book/src/forms.md")]
pub mod forms {}
#[doc = include_str!("../../../book/src/columns.md")]
pub mod columns {}
#[doc = include_str!("../../../book/src/tori.md")]
pub mod tori {}
#[doc = include_str!("../../../book/src/classifying-spaces.md")]
pub mod classifying_spaces {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
