//! Command-to-action dataset generation.
//!
//! A small non-recursive phrase grammar generates a finite command
//! language over four motion primitives and four directions. Each command
//! translates to a sequence of action tokens, and the translation commutes
//! with vocabulary swaps (jump/walk, left/right, up/down) — a property
//! [`verify_semantic_equivariance`] checks exhaustively over the whole
//! corpus and the product group the swaps generate. Commands are bucketed
//! into a train split plus four compositional test splits, and each split
//! can be written as a plain-text `IN: ... OUT: ...` file.

pub mod dataset;
pub mod grammar;
pub mod semantics;
pub mod splits;
pub mod swap;

pub use dataset::{
    read_dataset, write_dataset, write_splits, DatasetError, ManifestEntry, SplitManifest,
};
pub use grammar::{
    enumerate_commands, enumerate_commands_restricted, Command, Directed, Direction, Phrase,
    Primitive, Repeat, Verb,
};
pub use semantics::{interpret, ActionSeq, ActionToken};
pub use splits::{make_splits, SplitName, Splits};
pub use swap::{
    apply_swap, apply_swap_actions, standard_swaps, verify_semantic_equivariance,
    verify_semantic_equivariance_over, EquivarianceReport, VocabSwap, WordPair,
};
