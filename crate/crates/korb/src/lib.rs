//! File formats, the group catalog, bundled examples, the lemma
//! harness and the `korb` command line.

pub mod catalog;
pub mod data;
pub mod format;
pub mod lab;
pub mod cli;
