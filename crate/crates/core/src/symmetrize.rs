//! Model-agnostic symmetrization wrappers.
//!
//! Every wrapper takes an opaque [`BlackBoxModel`] and returns a new one
//! whose outputs satisfy a group property by construction:
//!
//! - [`equitune`]: averages `g^-1 M(g x)` over the group, yielding an
//!   equivariant model at `|G|` inner evaluations.
//! - [`is_wrapper`]: averages the output-side group over the input-side
//!   orbit sum, yielding a model that is invariant to the input group and
//!   fixed by the output group, at `|G_in|` inner evaluations.
//! - [`multi_input_wrapper`]: one output channel per input, each the sum of
//!   an equituned diagonal model and invariant-symmetric cross channels.
//! - [`product_equi_wrapper`] / [`product_equi_wrapper_n`]: handles a
//!   product group acting on a single input with `|G_1| + ... + |G_N|`
//!   inner evaluations instead of the product, by canonicalizing away all
//!   but one factor per branch and symmetrizing the branch output.
//!
//! Inner evaluations are counted on the wrapped model's own counter, so
//! call budgets can be checked by reading the counter around an evaluation.

use crate::linear::LinearMap;
use crate::perm::{actions_commute, PermAction};
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WrapError {
    #[error("model expects {model} inputs but the input action acts on {action} coordinates")]
    InputDimMismatch { model: usize, action: usize },
    #[error("model produces {model} outputs but the output action acts on {action} coordinates")]
    OutputDimMismatch { model: usize, action: usize },
    #[error("input and output actions must share one group")]
    GroupMismatch,
    #[error("equivariant composition requires commuting actions, but factors {left} and {right} do not commute")]
    NonCommutativeActions { left: usize, right: usize },
    #[error("missing cross model from channel {from} to channel {to}")]
    MissingCrossModel { from: usize, to: usize },
    #[error("expected one model and one action entry per channel")]
    ChannelMismatch,
    #[error("all actions must share one space, got dimensions {0:?}")]
    MixedSpaces(Vec<usize>),
    #[error("models must agree on the output dimension, got {0:?}")]
    MixedOutputs(Vec<usize>),
}

type EvalFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

/// An opaque vector-to-vector function with an invocation counter.
///
/// Clones share the counter, so a wrapper holding a clone still charges
/// evaluations to the handle the caller kept. The counter is atomic;
/// concurrent evaluations stay correctly counted.
#[derive(Clone)]
pub struct BlackBoxModel {
    in_dim: usize,
    out_dim: usize,
    calls: Arc<AtomicU64>,
    func: Arc<EvalFn>,
}

impl fmt::Debug for BlackBoxModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BlackBoxModel")
            .field("in_dim", &self.in_dim)
            .field("out_dim", &self.out_dim)
            .field("calls", &self.calls())
            .finish()
    }
}

impl BlackBoxModel {
    pub fn from_fn(
        in_dim: usize,
        out_dim: usize,
        func: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            in_dim,
            out_dim,
            calls: Arc::new(AtomicU64::new(0)),
            func: Arc::new(func),
        }
    }

    /// Wraps a matrix as a model.
    pub fn linear(map: &LinearMap) -> Self {
        let map = map.clone();
        Self::from_fn(map.cols(), map.rows(), move |x| map.apply(x))
    }

    /// A model that ignores its input and returns `value`.
    pub fn constant(in_dim: usize, value: Vec<f64>) -> Self {
        let out_dim = value.len();
        Self::from_fn(in_dim, out_dim, move |_| value.clone())
    }

    /// Evaluates the model, charging exactly one call to the counter.
    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.in_dim, "input length must match in_dim");
        self.calls.fetch_add(1, AtomicOrdering::Relaxed);
        let y = (self.func)(x);
        assert_eq!(y.len(), self.out_dim, "model returned the wrong output length");
        y
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(AtomicOrdering::Relaxed)
    }

    pub fn reset_calls(&self) {
        self.calls.store(0, AtomicOrdering::Relaxed);
    }
}

/// Observed inner-call count next to its contract bound.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CallBudget {
    pub observed: u64,
    pub bound: u64,
}

impl CallBudget {
    pub fn within(&self) -> bool {
        self.observed <= self.bound
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

fn add_assign(acc: &mut [f64], v: &[f64]) {
    for (a, b) in acc.iter_mut().zip(v.iter()) {
        *a += b;
    }
}

fn scale(v: &mut [f64], s: f64) {
    for a in v.iter_mut() {
        *a *= s;
    }
}

/// Group-averages a model into an equivariant one: the wrapped model
/// returns the mean of `g^-1 M(g x)` over the group, taking exactly `|G|`
/// inner evaluations. The input and output actions must belong to one
/// group; the dimensions may differ.
pub fn equitune(
    m: &BlackBoxModel,
    a_in: &PermAction,
    a_out: &PermAction,
) -> Result<BlackBoxModel, WrapError> {
    if m.in_dim() != a_in.dim() {
        return Err(WrapError::InputDimMismatch {
            model: m.in_dim(),
            action: a_in.dim(),
        });
    }
    if m.out_dim() != a_out.dim() {
        return Err(WrapError::OutputDimMismatch {
            model: m.out_dim(),
            action: a_out.dim(),
        });
    }
    if a_in.group() != a_out.group() {
        return Err(WrapError::GroupMismatch);
    }
    let (m, a_in, a_out) = (m.clone(), a_in.clone(), a_out.clone());
    let out_dim = a_out.dim();
    Ok(BlackBoxModel::from_fn(a_in.dim(), out_dim, move |x| {
        let order = a_in.order();
        let mut acc = vec![0.0; out_dim];
        for g in 0..order {
            let y = m.eval(&a_in.apply(g, x));
            add_assign(&mut acc, &a_out.apply_inverse(g, &y));
        }
        scale(&mut acc, 1.0 / order as f64);
        acc
    }))
}

/// Wraps a model so the output ignores the input group and is fixed by the
/// output group: the input orbit is summed first (`|G_in|` inner
/// evaluations), then the output group is averaged over that sum (no
/// further model calls).
///
/// The orbit terms are accumulated in a canonical order keyed by the
/// transformed input, so two inputs on the same orbit produce bit-identical
/// sums and the input-invariance holds exactly, not merely to tolerance.
pub fn is_wrapper(
    m: &BlackBoxModel,
    a_in: &PermAction,
    a_out: &PermAction,
) -> Result<BlackBoxModel, WrapError> {
    if m.in_dim() != a_in.dim() {
        return Err(WrapError::InputDimMismatch {
            model: m.in_dim(),
            action: a_in.dim(),
        });
    }
    if m.out_dim() != a_out.dim() {
        return Err(WrapError::OutputDimMismatch {
            model: m.out_dim(),
            action: a_out.dim(),
        });
    }
    let (m, a_in, a_out) = (m.clone(), a_in.clone(), a_out.clone());
    let out_dim = a_out.dim();
    Ok(BlackBoxModel::from_fn(a_in.dim(), out_dim, move |x| {
        let mut terms: Vec<(Vec<f64>, Vec<f64>)> = (0..a_in.order())
            .map(|g| {
                let xt = a_in.apply(g, x);
                let y = m.eval(&xt);
                (xt, y)
            })
            .collect();
        terms.sort_unstable_by(|p, q| lex_cmp(&p.0, &q.0));
        let mut inner = vec![0.0; out_dim];
        for (_, y) in &terms {
            add_assign(&mut inner, y);
        }
        let mut acc = vec![0.0; out_dim];
        for h in 0..a_out.order() {
            add_assign(&mut acc, &a_out.apply(h, &inner));
        }
        scale(&mut acc, 1.0 / (a_in.order() * a_out.order()) as f64);
        acc
    }))
}

/// Comparison baseline for [`is_wrapper`] that sums the input orbit
/// *before* the model: `avg_{g_out} g_out M(sum_{g_in} g_in x)`, one inner
/// evaluation. Agrees with [`is_wrapper`] on linear models and diverges on
/// nonlinear ones.
pub fn alt_is_wrapper(
    m: &BlackBoxModel,
    a_in: &PermAction,
    a_out: &PermAction,
) -> Result<BlackBoxModel, WrapError> {
    if m.in_dim() != a_in.dim() {
        return Err(WrapError::InputDimMismatch {
            model: m.in_dim(),
            action: a_in.dim(),
        });
    }
    if m.out_dim() != a_out.dim() {
        return Err(WrapError::OutputDimMismatch {
            model: m.out_dim(),
            action: a_out.dim(),
        });
    }
    let (m, a_in, a_out) = (m.clone(), a_in.clone(), a_out.clone());
    let out_dim = a_out.dim();
    Ok(BlackBoxModel::from_fn(a_in.dim(), out_dim, move |x| {
        let mut summed = vec![0.0; a_in.dim()];
        for g in 0..a_in.order() {
            add_assign(&mut summed, &a_in.apply(g, x));
        }
        let y = m.eval(&summed);
        let mut acc = vec![0.0; out_dim];
        for h in 0..a_out.order() {
            add_assign(&mut acc, &a_out.apply(h, &y));
        }
        scale(&mut acc, 1.0 / (a_in.order() * a_out.order()) as f64);
        acc
    }))
}

/// Projects a vector onto the subspace fixed by the action: the group mean.
pub fn symmetrize_output(y: &[f64], a: &PermAction) -> Vec<f64> {
    assert_eq!(y.len(), a.dim(), "vector length must match the action dimension");
    let mut acc = vec![0.0; y.len()];
    for g in 0..a.order() {
        add_assign(&mut acc, &a.apply(g, y));
    }
    scale(&mut acc, 1.0 / a.order() as f64);
    acc
}

/// Maps each vector to the lexicographically smallest point of its orbit.
///
/// The representative depends only on the orbit, so `canon(g x) == canon(x)`
/// holds exactly for every element.
#[derive(Debug, Clone)]
pub struct Canonicalizer {
    action: PermAction,
}

impl Canonicalizer {
    pub fn new(action: PermAction) -> Self {
        Self { action }
    }

    pub fn action(&self) -> &PermAction {
        &self.action
    }

    pub fn canonicalize(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.action.dim());
        let mut best = x.to_vec();
        for g in 1..self.action.order() {
            let candidate = self.action.apply(g, x);
            if lex_cmp(&candidate, &best) == Ordering::Less {
                best = candidate;
            }
        }
        best
    }
}

/// Free-function form of [`Canonicalizer::canonicalize`].
pub fn canonicalize(c: &Canonicalizer, x: &[f64]) -> Vec<f64> {
    c.canonicalize(x)
}

/// Input and output actions for one channel of a multi-input model; both
/// must carry the same group.
#[derive(Debug, Clone)]
pub struct ChannelActions {
    pub input: PermAction,
    pub output: PermAction,
}

/// A model with `N` inputs and `N` outputs where channel `i` transforms
/// equivariantly under its own group while every other input may move
/// arbitrarily.
#[derive(Debug)]
pub struct MultiInputModel {
    in_dims: Vec<usize>,
    out_dims: Vec<usize>,
    diagonal: Vec<BlackBoxModel>,
    cross: BTreeMap<(usize, usize), BlackBoxModel>,
}

impl MultiInputModel {
    pub fn channels(&self) -> usize {
        self.diagonal.len()
    }

    pub fn in_dims(&self) -> &[usize] {
        &self.in_dims
    }

    pub fn out_dims(&self) -> &[usize] {
        &self.out_dims
    }

    pub fn eval(&self, inputs: &[Vec<f64>]) -> Vec<Vec<f64>> {
        assert_eq!(inputs.len(), self.channels(), "one input vector per channel");
        for (x, &d) in inputs.iter().zip(self.in_dims.iter()) {
            assert_eq!(x.len(), d, "channel input length mismatch");
        }
        (0..self.channels())
            .map(|j| {
                let mut acc = self.diagonal[j].eval(&inputs[j]);
                for (i, input) in inputs.iter().enumerate() {
                    if i != j {
                        add_assign(&mut acc, &self.cross[&(i, j)].eval(input));
                    }
                }
                acc
            })
            .collect()
    }
}

/// Builds the multi-input equivariant model from `N` diagonal models and
/// `N(N-1)` cross models. `cross[(i, j)]` maps channel `i`'s input space to
/// channel `j`'s output space; it is wrapped invariant to group `i` and
/// symmetric to group `j`, so channel `j` stays equivariant to its own
/// group no matter what the other inputs do.
pub fn multi_input_wrapper(
    diagonal: &[BlackBoxModel],
    cross: &BTreeMap<(usize, usize), BlackBoxModel>,
    actions: &[ChannelActions],
) -> Result<MultiInputModel, WrapError> {
    if diagonal.is_empty() || diagonal.len() != actions.len() {
        return Err(WrapError::ChannelMismatch);
    }
    let n = diagonal.len();
    let mut wrapped_diag = Vec::with_capacity(n);
    for (m, acts) in diagonal.iter().zip(actions.iter()) {
        wrapped_diag.push(equitune(m, &acts.input, &acts.output)?);
    }
    let mut wrapped_cross = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let m = cross
                .get(&(i, j))
                .ok_or(WrapError::MissingCrossModel { from: i, to: j })?;
            wrapped_cross.insert((i, j), is_wrapper(m, &actions[i].input, &actions[j].output)?);
        }
    }
    Ok(MultiInputModel {
        in_dims: actions.iter().map(|a| a.input.dim()).collect(),
        out_dims: actions.iter().map(|a| a.output.dim()).collect(),
        diagonal: wrapped_diag,
        cross: wrapped_cross,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WrapMode {
    /// Output transforms like the input under the whole product group.
    /// Requires pairwise commuting actions.
    Equivariant,
    /// Output is unchanged by the whole product group. No commutativity
    /// requirement.
    Invariant,
}

const ORBIT_CLOSURE_CAP: usize = 1 << 16;

/// Lexicographically smallest point reachable from `x` by any word in the
/// given actions' permutations. Closing the orbit under composition makes
/// the representative exactly invariant even when the factor actions do
/// not commute, as long as their compositions close into a finite group.
fn canonical_point(actions: &[PermAction], x: &[f64]) -> Vec<f64> {
    let key = |v: &[f64]| v.iter().map(|f| f.to_bits()).collect::<Vec<u64>>();
    let mut best = x.to_vec();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    seen.insert(key(x));
    let mut frontier = vec![x.to_vec()];
    while let Some(current) = frontier.pop() {
        for action in actions {
            for g in 1..action.order() {
                let next = action.apply(g, &current);
                if seen.insert(key(&next)) {
                    assert!(
                        seen.len() <= ORBIT_CLOSURE_CAP,
                        "orbit closure exceeded {ORBIT_CLOSURE_CAP} points; the generator set does not close into a small group"
                    );
                    if lex_cmp(&next, &best) == Ordering::Less {
                        best = next.clone();
                    }
                    frontier.push(next);
                }
            }
        }
    }
    best
}

/// Finds the unique factor tuple `(b_1, .., b_N)` with
/// `P_1(b_1) .. P_N(b_N) x0 == x`, searching tuples in ascending order with
/// the last factor fastest. Exists whenever the actions commute, because
/// the closure orbit of `x0` is then exactly the set of such products.
fn factorize(actions: &[PermAction], x0: &[f64], x: &[f64]) -> Vec<usize> {
    let orders: Vec<usize> = actions.iter().map(|a| a.order()).collect();
    let total: usize = orders.iter().product();
    let n = actions.len();
    for t in 0..total {
        let mut rem = t;
        let mut tuple = vec![0usize; n];
        for k in (0..n).rev() {
            tuple[k] = rem % orders[k];
            rem /= orders[k];
        }
        let mut current = x0.to_vec();
        for k in (0..n).rev() {
            current = actions[k].apply(tuple[k], &current);
        }
        if current == x {
            return tuple;
        }
    }
    panic!("no product factorization reproduces the input; commuting actions guarantee one exists");
}

/// Averages `y` over the product of every group except `actions[skip]`.
fn symmetrize_over_others(actions: &[PermAction], skip: usize, y: &[f64]) -> Vec<f64> {
    let others: Vec<usize> = (0..actions.len()).filter(|&j| j != skip).collect();
    let orders: Vec<usize> = others.iter().map(|&j| actions[j].order()).collect();
    let total: usize = orders.iter().product();
    let mut acc = vec![0.0; y.len()];
    for t in 0..total {
        let mut rem = t;
        let mut tuple = vec![0usize; others.len()];
        for k in (0..others.len()).rev() {
            tuple[k] = rem % orders[k];
            rem /= orders[k];
        }
        let mut current = y.to_vec();
        for k in (0..others.len()).rev() {
            current = actions[others[k]].apply(tuple[k], &current);
        }
        add_assign(&mut acc, &current);
    }
    scale(&mut acc, 1.0 / total as f64);
    acc
}

/// Two-factor form of [`product_equi_wrapper_n`]: branch `i` is `m_i`
/// equituned over its own group, fed the canonical point with the other
/// factor restored, and its output symmetrized over the other group. Inner
/// evaluations per call: `|G_1| + |G_2|`.
pub fn product_equi_wrapper(
    m1: &BlackBoxModel,
    m2: &BlackBoxModel,
    a1: &PermAction,
    a2: &PermAction,
    mode: WrapMode,
) -> Result<BlackBoxModel, WrapError> {
    product_equi_wrapper_n(
        &[m1.clone(), m2.clone()],
        &[a1.clone(), a2.clone()],
        mode,
    )
}

/// Wraps `N` models into one model handling the product of `N` groups
/// acting on a shared space, at `sum_i |G_i|` inner evaluations.
///
/// Every evaluation first reduces the input to the lexicographically
/// smallest point of its closure orbit. In `Equivariant` mode (commuting
/// actions only) the input is factored as `P_1(b_1)..P_N(b_N) x0`; branch
/// `i` keeps its own factor `b_i`, evaluates the equituned model there, and
/// averages the result over all other groups. In `Invariant` mode each
/// branch pools its model over its own group's orbit of the canonical
/// point, so the output depends on the orbit alone and is exactly
/// invariant; this mode works for non-commuting factors too.
pub fn product_equi_wrapper_n(
    models: &[BlackBoxModel],
    actions: &[PermAction],
    mode: WrapMode,
) -> Result<BlackBoxModel, WrapError> {
    if models.is_empty() || models.len() != actions.len() {
        return Err(WrapError::ChannelMismatch);
    }
    let dim = actions[0].dim();
    if actions.iter().any(|a| a.dim() != dim) {
        return Err(WrapError::MixedSpaces(actions.iter().map(|a| a.dim()).collect()));
    }
    for m in models {
        if m.in_dim() != dim {
            return Err(WrapError::InputDimMismatch {
                model: m.in_dim(),
                action: dim,
            });
        }
    }

    let out_dim = match mode {
        WrapMode::Equivariant => {
            for m in models {
                if m.out_dim() != dim {
                    return Err(WrapError::OutputDimMismatch {
                        model: m.out_dim(),
                        action: dim,
                    });
                }
            }
            for i in 0..actions.len() {
                for j in (i + 1)..actions.len() {
                    if !actions_commute(&actions[i], &actions[j]).expect("dims already checked") {
                        return Err(WrapError::NonCommutativeActions { left: i, right: j });
                    }
                }
            }
            dim
        }
        WrapMode::Invariant => {
            let out = models[0].out_dim();
            if models.iter().any(|m| m.out_dim() != out) {
                return Err(WrapError::MixedOutputs(
                    models.iter().map(|m| m.out_dim()).collect(),
                ));
            }
            out
        }
    };

    let branches: Vec<BlackBoxModel> = match mode {
        WrapMode::Equivariant => models
            .iter()
            .zip(actions.iter())
            .map(|(m, a)| equitune(m, a, a))
            .collect::<Result<_, _>>()?,
        WrapMode::Invariant => models.to_vec(),
    };
    let actions = actions.to_vec();

    Ok(BlackBoxModel::from_fn(dim, out_dim, move |x| {
        let x0 = canonical_point(&actions, x);
        let mut total = vec![0.0; out_dim];
        match mode {
            WrapMode::Equivariant => {
                let factors = factorize(&actions, &x0, x);
                for (i, branch) in branches.iter().enumerate() {
                    let restored = actions[i].apply(factors[i], &x0);
                    let y = branch.eval(&restored);
                    let symmetrized = symmetrize_over_others(&actions, i, &y);
                    add_assign(&mut total, &symmetrized);
                }
            }
            WrapMode::Invariant => {
                for (i, branch) in branches.iter().enumerate() {
                    let mut pooled = vec![0.0; out_dim];
                    for g in 0..actions[i].order() {
                        add_assign(&mut pooled, &branch.eval(&actions[i].apply(g, &x0)));
                    }
                    scale(&mut pooled, 1.0 / actions[i].order() as f64);
                    add_assign(&mut total, &pooled);
                }
            }
        }
        total
    }))
}
