//! Document formats of the `matgauss` command-line tool.

pub mod doc;
