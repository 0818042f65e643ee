//! Shared setup for the criterion benches.

use equikit::{mlp, product_cyclic_actions, Activation, BlackBoxModel, PermAction};

/// Deterministic probe vector.
pub fn probe(dim: usize) -> Vec<f64> {
    (0..dim).map(|i| (i as f64 * 0.7).sin()).collect()
}

/// Commuting factor actions of the given sizes plus one toy model per factor.
pub fn factors(sizes: &[usize]) -> (Vec<PermAction>, Vec<BlackBoxModel>) {
    let dim: usize = sizes.iter().product();
    let actions = product_cyclic_actions(sizes);
    let models = (0..sizes.len())
        .map(|i| mlp(i as u64, &[dim, dim + 2, dim], Activation::Tanh))
        .collect();
    (actions, models)
}
