//! Permutation actions of finite groups on coordinate spaces.
//!
//! A [`Perm`] is stored as a gather map: `apply(x)[i] = x[map[i]]`. Under
//! this convention the permutation matrix of a composition is the product
//! of the permutation matrices, so a [`PermAction`] is validated as a
//! genuine homomorphism `perm(g * h) == perm(g).compose(perm(h))` over all
//! element pairs at construction time. Vectors transform as column vectors.

use crate::group::{cyclic_group, FiniteGroup};
use crate::linear::LinearMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ActionError {
    #[error("map of length {len} is not a permutation of 0..{len}")]
    NotAPermutation { len: usize },
    #[error("action dimension must be at least 1")]
    ZeroDimension,
    #[error("expected one permutation per group element ({expected}), got {got}")]
    WrongPermCount { expected: usize, got: usize },
    #[error("permutations act on mixed dimensions")]
    MixedDims,
    #[error("the identity element must act as the identity permutation")]
    IdentityNotFixed,
    #[error("not a homomorphism: perm({g} * {h}) differs from perm({g}) after perm({h})")]
    NotAHomomorphism { g: usize, h: usize },
    #[error("actions act on different dimensions: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("same-space composition requires the factor actions to commute")]
    NonCommutingFactors,
}

/// A permutation of `0..len()`, stored as the gather map `out[i] = in[map[i]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perm {
    map: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
        }
    }

    /// Validates that `map` is a bijection of `0..map.len()`.
    pub fn from_map(map: Vec<usize>) -> Result<Self, ActionError> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &v in &map {
            if v >= n || seen[v] {
                return Err(ActionError::NotAPermutation { len: n });
            }
            seen[v] = true;
        }
        Ok(Self { map })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// The raw gather indices: output slot `i` reads input slot `map()[i]`.
    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply<T: Clone>(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.map.len(), "vector length must match the permutation");
        self.map.iter().map(|&i| x[i].clone()).collect()
    }

    /// The permutation acting as `self` after `other` on vectors.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.len(), other.len());
        Perm {
            map: self.map.iter().map(|&i| other.map[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut map = vec![0usize; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            map[v] = i;
        }
        Perm { map }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Number of fixed coordinates, i.e. the trace of the permutation matrix.
    pub fn fixed_points(&self) -> usize {
        self.map.iter().enumerate().filter(|&(i, &v)| i == v).count()
    }
}

/// A finite group acting on `0..dim` by permutations, one per element.
#[derive(Debug, Clone, PartialEq)]
pub struct PermAction {
    group: FiniteGroup,
    dim: usize,
    perms: Vec<Perm>,
}

impl PermAction {
    /// Validates the action laws exhaustively: the identity element must act
    /// as the identity permutation and `perm(g * h)` must equal
    /// `perm(g).compose(perm(h))` for all pairs.
    pub fn new(group: FiniteGroup, perms: Vec<Perm>) -> Result<Self, ActionError> {
        if perms.len() != group.order() {
            return Err(ActionError::WrongPermCount {
                expected: group.order(),
                got: perms.len(),
            });
        }
        let dim = perms[0].len();
        if dim == 0 {
            return Err(ActionError::ZeroDimension);
        }
        if perms.iter().any(|p| p.len() != dim) {
            return Err(ActionError::MixedDims);
        }
        if !perms[group.identity()].is_identity() {
            return Err(ActionError::IdentityNotFixed);
        }
        for g in group.elements() {
            for h in group.elements() {
                if perms[group.mul(g, h)] != perms[g].compose(&perms[h]) {
                    return Err(ActionError::NotAHomomorphism { g, h });
                }
            }
        }
        Ok(Self { group, dim, perms })
    }

    /// The trivial group fixing every coordinate of a `dim`-vector.
    pub fn trivial(dim: usize) -> Self {
        assert!(dim >= 1);
        Self {
            group: FiniteGroup::trivial(),
            dim,
            perms: vec![Perm::identity(dim)],
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Group order shorthand.
    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn perm(&self, g: usize) -> &Perm {
        &self.perms[g]
    }

    pub fn apply(&self, g: usize, x: &[f64]) -> Vec<f64> {
        self.perms[g].apply(x)
    }

    /// Applies the inverse element; exact because `perm(g)^-1 == perm(g^-1)`.
    pub fn apply_inverse(&self, g: usize, x: &[f64]) -> Vec<f64> {
        self.perms[self.group.inverse(g)].apply(x)
    }
}

/// A group acting on itself by left multiplication: `dim == order` and the
/// basis vector of `h` is carried to the basis vector of `g * h`.
pub fn regular_action(group: &FiniteGroup) -> PermAction {
    let perms = group
        .elements()
        .map(|g| {
            let g_inv = group.inverse(g);
            Perm {
                map: group.elements().map(|i| group.mul(g_inv, i)).collect(),
            }
        })
        .collect();
    PermAction::new(group.clone(), perms).expect("left multiplication satisfies the action laws")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    /// Quarter-turn rotations, a cyclic group of order 4.
    Rot90,
    /// Horizontal mirror, a group of order 2.
    Flip,
}

/// Actions on a `side x side` grid flattened row-major.
///
/// `Rot90`'s generator rotates counterclockwise; on a 2x2 grid its gather
/// map is `[1, 3, 0, 2]`. `Flip` mirrors left-right.
pub fn grid_action(kind: GridKind, side: usize) -> PermAction {
    assert!(side >= 1, "grid side must be at least 1");
    let n = side;
    let flat = |r: usize, c: usize| r * n + c;
    let generator = match kind {
        GridKind::Rot90 => {
            let mut map = vec![0usize; n * n];
            for r in 0..n {
                for c in 0..n {
                    // Counterclockwise: new (r, c) reads old (c, n-1-r).
                    map[flat(r, c)] = flat(c, n - 1 - r);
                }
            }
            Perm { map }
        }
        GridKind::Flip => {
            let mut map = vec![0usize; n * n];
            for r in 0..n {
                for c in 0..n {
                    map[flat(r, c)] = flat(r, n - 1 - c);
                }
            }
            Perm { map }
        }
    };
    let order = match kind {
        GridKind::Rot90 => 4,
        GridKind::Flip => 2,
    };
    let mut perms = vec![Perm::identity(n * n)];
    for k in 1..order {
        let prev = perms[k - 1].clone();
        perms.push(generator.compose(&prev));
    }
    PermAction::new(cyclic_group(order), perms).expect("grid symmetries satisfy the action laws")
}

/// An order-2 action on `dim` coordinates that swaps slots `a` and `b`.
pub fn word_swap_action(dim: usize, a: usize, b: usize) -> PermAction {
    assert!(a < dim && b < dim && a != b, "swap slots must be distinct and in range");
    let mut map: Vec<usize> = (0..dim).collect();
    map.swap(a, b);
    PermAction::new(cyclic_group(2), vec![Perm::identity(dim), Perm { map }])
        .expect("a transposition satisfies the action laws")
}

/// Commuting cyclic actions on a shared space of dimension `sizes.iter().product()`.
///
/// Coordinates are indexed by mixed-radix tuples (row-major, first factor
/// slowest); the `k`-th returned action is `Z_{sizes[k]}` cyclically
/// shifting the `k`-th digit and fixing the others. Factors act on disjoint
/// digits, so all pairs commute.
pub fn product_cyclic_actions(sizes: &[usize]) -> Vec<PermAction> {
    assert!(!sizes.is_empty() && sizes.iter().all(|&n| n >= 1));
    let dim: usize = sizes.iter().product();
    let mut strides = vec![1usize; sizes.len()];
    for k in (0..sizes.len() - 1).rev() {
        strides[k] = strides[k + 1] * sizes[k + 1];
    }
    sizes
        .iter()
        .enumerate()
        .map(|(k, &nk)| {
            let perms = (0..nk)
                .map(|a| {
                    let map = (0..dim)
                        .map(|flat| {
                            let digit = (flat / strides[k]) % nk;
                            let shifted = (digit + nk - a) % nk;
                            flat - digit * strides[k] + shifted * strides[k]
                        })
                        .collect::<Vec<_>>();
                    Perm { map }
                })
                .collect();
            PermAction::new(cyclic_group(nk), perms)
                .expect("digit shifts satisfy the action laws")
        })
        .collect()
}

/// True iff every permutation of `a` commutes with every permutation of `b`.
///
/// Errors when the actions do not share a space.
pub fn actions_commute(a: &PermAction, b: &PermAction) -> Result<bool, ActionError> {
    if a.dim() != b.dim() {
        return Err(ActionError::DimMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    for g in a.group().elements() {
        for h in b.group().elements() {
            if a.perm(g).compose(b.perm(h)) != b.perm(h).compose(a.perm(g)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The 0/1 matrix applying `perm(g)` to column vectors.
pub fn perm_matrix(a: &PermAction, g: usize) -> LinearMap {
    let p = a.perm(g);
    LinearMap::from_fn(a.dim(), a.dim(), |i, j| {
        if p.map()[i] == j {
            1.0
        } else {
            0.0
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductMode {
    /// Both factors act on one shared space; `(g1, g2)` acts as
    /// `perm1(g1)` after `perm2(g2)`. Requires commuting factors.
    SameSpace,
    /// Factors act on independent blocks of a concatenated space.
    BlockDiagonal,
}

/// The action of a direct product group assembled from two factor actions.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductAction {
    left: PermAction,
    right: PermAction,
    mode: ProductMode,
    combined: PermAction,
}

impl ProductAction {
    pub fn new(
        left: PermAction,
        right: PermAction,
        mode: ProductMode,
    ) -> Result<Self, ActionError> {
        let combined = match mode {
            ProductMode::SameSpace => {
                if left.dim() != right.dim() {
                    return Err(ActionError::DimMismatch {
                        left: left.dim(),
                        right: right.dim(),
                    });
                }
                if !actions_commute(&left, &right)? {
                    return Err(ActionError::NonCommutingFactors);
                }
                let group = crate::group::product_group(left.group(), right.group());
                let perms = left
                    .group()
                    .elements()
                    .flat_map(|g1| {
                        let left = &left;
                        let right = &right;
                        right
                            .group()
                            .elements()
                            .map(move |g2| left.perm(g1).compose(right.perm(g2)))
                    })
                    .collect();
                PermAction::new(group, perms)?
            }
            ProductMode::BlockDiagonal => {
                let (d1, d2) = (left.dim(), right.dim());
                let group = crate::group::product_group(left.group(), right.group());
                let perms = left
                    .group()
                    .elements()
                    .flat_map(|g1| {
                        let left = &left;
                        let right = &right;
                        right.group().elements().map(move |g2| {
                            let mut map = Vec::with_capacity(d1 + d2);
                            map.extend_from_slice(left.perm(g1).map());
                            map.extend(right.perm(g2).map().iter().map(|&i| d1 + i));
                            Perm { map }
                        })
                    })
                    .collect();
                PermAction::new(group, perms)?
            }
        };
        Ok(Self {
            left,
            right,
            mode,
            combined,
        })
    }

    pub fn left(&self) -> &PermAction {
        &self.left
    }

    pub fn right(&self) -> &PermAction {
        &self.right
    }

    pub fn mode(&self) -> ProductMode {
        self.mode
    }

    /// The validated action of the product group.
    pub fn action(&self) -> &PermAction {
        &self.combined
    }

    pub fn into_action(self) -> PermAction {
        self.combined
    }
}
