//! Manifest ingestion, the analysis pipeline and report rendering behind the
//! `srgeom` command.

pub mod analyze;
pub mod expr;
pub mod manifest;
