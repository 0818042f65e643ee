//! Seeded toy models: small MLPs with pointwise nonlinearities, used to
//! exercise the wrappers beyond the linear regime.

use crate::linear::LinearMap;
use crate::symmetrize::BlackBoxModel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Tanh,
    Relu,
    Square,
}

fn activate(a: Activation, v: f64) -> f64 {
    match a {
        Activation::Tanh => v.tanh(),
        Activation::Relu => v.max(0.0),
        Activation::Square => v * v,
    }
}

/// A deterministic MLP whose parameters are a pure function of the seed.
///
/// Weights and biases are drawn uniformly from `[-1, 1]` using the ChaCha8
/// counter-based generator keyed by the seed, with layer `l` reading stream
/// `l`. The activation is applied after every affine layer. `dims` lists
/// the layer widths; a single entry means the identity function.
#[derive(Debug, Clone)]
pub struct SeededMlp {
    dims: Vec<usize>,
    weights: Vec<LinearMap>,
    biases: Vec<Vec<f64>>,
    activation: Activation,
}

impl SeededMlp {
    pub fn new(seed: u64, dims: &[usize], activation: Activation) -> Self {
        assert!(!dims.is_empty(), "dims must list at least one layer width");
        assert!(dims.iter().all(|&d| d >= 1));
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for l in 0..dims.len().saturating_sub(1) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(l as u64);
            let (rows, cols) = (dims[l + 1], dims[l]);
            weights.push(LinearMap::from_fn(rows, cols, |_, _| {
                rng.gen_range(-1.0..=1.0)
            }));
            biases.push((0..rows).map(|_| rng.gen_range(-1.0..=1.0)).collect());
        }
        Self {
            dims: dims.to_vec(),
            weights,
            biases,
            activation,
        }
    }

    /// Builds an MLP from explicit parameters; shapes must chain.
    pub fn from_parts(
        dims: &[usize],
        weights: Vec<LinearMap>,
        biases: Vec<Vec<f64>>,
        activation: Activation,
    ) -> Self {
        assert!(!dims.is_empty());
        assert_eq!(weights.len(), dims.len() - 1);
        assert_eq!(biases.len(), dims.len() - 1);
        for l in 0..weights.len() {
            assert_eq!(weights[l].rows(), dims[l + 1]);
            assert_eq!(weights[l].cols(), dims[l]);
            assert_eq!(biases[l].len(), dims[l + 1]);
        }
        Self {
            dims: dims.to_vec(),
            weights,
            biases,
            activation,
        }
    }

    pub fn in_dim(&self) -> usize {
        self.dims[0]
    }

    pub fn out_dim(&self) -> usize {
        *self.dims.last().unwrap()
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.in_dim());
        let mut h = x.to_vec();
        for (w, b) in self.weights.iter().zip(self.biases.iter()) {
            let mut next = w.apply(&h);
            for (v, bias) in next.iter_mut().zip(b.iter()) {
                *v = activate(self.activation, *v + bias);
            }
            h = next;
        }
        h
    }

    pub fn to_model(&self) -> BlackBoxModel {
        let mlp = self.clone();
        BlackBoxModel::from_fn(self.in_dim(), self.out_dim(), move |x| mlp.eval(x))
    }
}

/// A seeded MLP packaged as a counted black-box model.
pub fn mlp(seed: u64, dims: &[usize], activation: Activation) -> BlackBoxModel {
    SeededMlp::new(seed, dims, activation).to_model()
}
