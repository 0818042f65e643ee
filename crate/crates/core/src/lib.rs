//! Finite-group equivariance toolkit.
//!
//! The crate is organized around small finite groups given by explicit
//! Cayley tables ([`group`]) and their permutation actions on coordinate
//! spaces ([`perm`]). On top of those sit:
//!
//! - [`linear`]: exact integer dimension counts for equivariant and
//!   invariant-symmetric linear spaces, a vectorized null-space route that
//!   recomputes the same dimensions numerically, and group-averaging
//!   projectors onto those spaces.
//! - [`symmetrize`]: model-agnostic wrappers that turn an arbitrary
//!   black-box vector function into an equivariant or invariant-symmetric
//!   one by averaging over group orbits, including a sum-cost construction
//!   for product groups that needs `|G_1| + ... + |G_N|` inner evaluations
//!   instead of the product.
//! - [`models`]: small seeded MLPs used as deterministic nonlinear test
//!   subjects for the wrappers.
//! - [`scan`]: a grammar-driven command-to-action dataset generator whose
//!   semantics commute with vocabulary swaps, plus split construction and
//!   plain-text dataset output.

pub mod group;
pub mod linear;
pub mod models;
pub mod perm;
pub mod scan;
pub mod symmetrize;

pub use group::{cyclic_group, product_group, FiniteGroup, GroupError};
pub use linear::{
    build_multi_linear, equi_dim, equi_space_report, is_dim, is_space_report, multi_equi_dim,
    multi_space_report, nullspace_oracle, project_equivariant, project_equivariant_between,
    project_invariant_symmetric, EquiSpaceReport, LinearError, LinearMap,
};
pub use models::{mlp, Activation, SeededMlp};
pub use perm::{
    actions_commute, grid_action, perm_matrix, product_cyclic_actions, regular_action,
    word_swap_action, ActionError, GridKind, Perm, PermAction, ProductAction, ProductMode,
};
pub use symmetrize::{
    alt_is_wrapper, canonicalize, equitune, is_wrapper, multi_input_wrapper, product_equi_wrapper,
    product_equi_wrapper_n, symmetrize_output, BlackBoxModel, CallBudget, Canonicalizer,
    ChannelActions, MultiInputModel, WrapError, WrapMode,
};
