//! Finite groups as dense Cayley tables.
//!
//! Elements are plain indices `0..order`. Every constructor validates the
//! four group axioms exhaustively over the table before handing out a
//! [`FiniteGroup`], so downstream code can rely on closure, an identity,
//! associativity, and a total inverse map without re-checking.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("cayley table must be a non-empty square, got {rows} rows and a row of length {row_len}")]
    BadShape { rows: usize, row_len: usize },
    #[error("cayley entry {value} at ({row}, {col}) is out of range for order {order}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("no two-sided identity element exists")]
    MissingIdentity,
    #[error("associativity fails on the triple ({a}, {b}, {c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("element {element} has no two-sided inverse")]
    MissingInverse { element: usize },
}

/// A finite group with elements `0..order` and an explicit composition table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    cayley: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Builds a group from a composition table, `cayley[a][b] = a * b`.
    ///
    /// Rejects tables that are not square, not closed, lack a two-sided
    /// identity or inverses, or fail associativity anywhere.
    pub fn from_cayley(cayley: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let order = cayley.len();
        if order == 0 {
            return Err(GroupError::BadShape {
                rows: 0,
                row_len: 0,
            });
        }
        for row in &cayley {
            if row.len() != order {
                return Err(GroupError::BadShape {
                    rows: order,
                    row_len: row.len(),
                });
            }
        }
        for (a, row) in cayley.iter().enumerate() {
            for (b, &value) in row.iter().enumerate() {
                if value >= order {
                    return Err(GroupError::EntryOutOfRange {
                        row: a,
                        col: b,
                        value,
                        order,
                    });
                }
            }
        }

        let identity = (0..order)
            .find(|&e| (0..order).all(|x| cayley[e][x] == x && cayley[x][e] == x))
            .ok_or(GroupError::MissingIdentity)?;

        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if cayley[cayley[a][b]][c] != cayley[a][cayley[b][c]] {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }

        let mut inverse = Vec::with_capacity(order);
        for (g, row) in cayley.iter().enumerate() {
            let inv = (0..order)
                .find(|&h| row[h] == identity && cayley[h][g] == identity)
                .ok_or(GroupError::MissingInverse { element: g })?;
            inverse.push(inv);
        }

        Ok(Self {
            order,
            cayley,
            identity,
            inverse,
        })
    }

    /// The one-element group.
    pub fn trivial() -> Self {
        cyclic_group(1)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Iterator over all element indices.
    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Composition `a * b` looked up in the table.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cayley[a][b]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }
}

/// The cyclic group of order `n`, with `a * b = (a + b) mod n`.
///
/// Panics if `n == 0`.
pub fn cyclic_group(n: usize) -> FiniteGroup {
    assert!(n >= 1, "cyclic group order must be at least 1");
    let cayley = (0..n)
        .map(|a| (0..n).map(|b| (a + b) % n).collect())
        .collect();
    FiniteGroup::from_cayley(cayley).expect("modular addition satisfies the group axioms")
}

/// The direct product of two groups, composing componentwise.
///
/// The pair `(a, b)` with `a` in the left and `b` in the right group is
/// encoded as the element index `a * right.order() + b`.
pub fn product_group(left: &FiniteGroup, right: &FiniteGroup) -> FiniteGroup {
    let (n1, n2) = (left.order(), right.order());
    let order = n1 * n2;
    let idx = |a: usize, b: usize| a * n2 + b;
    let mut cayley = vec![vec![0usize; order]; order];
    for a1 in 0..n1 {
        for a2 in 0..n2 {
            for b1 in 0..n1 {
                for b2 in 0..n2 {
                    cayley[idx(a1, a2)][idx(b1, b2)] = idx(left.mul(a1, b1), right.mul(a2, b2));
                }
            }
        }
    }
    FiniteGroup::from_cayley(cayley).expect("componentwise composition satisfies the group axioms")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_group_has_order_one() {
        let g = cyclic_group(1);
        assert_eq!(g.order(), 1);
        assert_eq!(g.identity(), 0);
        assert_eq!(g.inverse(0), 0);
    }

    #[test]
    fn order_two_elements_are_self_inverse() {
        let g = cyclic_group(2);
        assert_eq!(g.order(), 2);
        for x in g.elements() {
            assert_eq!(g.inverse(x), x);
        }
    }

    #[test]
    fn cyclic_four_inverse_of_one_is_three() {
        let g = cyclic_group(4);
        assert_eq!(g.inverse(1), 3);
        assert_eq!(g.mul(1, 3), g.identity());
    }

    #[test]
    fn klein_four_is_all_self_inverse() {
        let g = product_group(&cyclic_group(2), &cyclic_group(2));
        assert_eq!(g.order(), 4);
        for x in g.elements() {
            assert_eq!(g.inverse(x), x);
        }
    }

    #[test]
    fn product_of_four_and_two_has_order_eight() {
        let g = product_group(&cyclic_group(4), &cyclic_group(2));
        assert_eq!(g.order(), 8);
    }

    #[test]
    fn product_with_trivial_matches_factor() {
        let z3 = cyclic_group(3);
        let p = product_group(&FiniteGroup::trivial(), &z3);
        assert_eq!(p.order(), 3);
        // With the trivial left factor the pair encoding is the identity map.
        for a in z3.elements() {
            for b in z3.elements() {
                assert_eq!(p.mul(a, b), z3.mul(a, b));
            }
        }
    }

    #[test]
    fn axioms_hold_over_the_full_table() {
        for g in [cyclic_group(4), product_group(&cyclic_group(2), &cyclic_group(3))] {
            let e = g.identity();
            for a in g.elements() {
                assert_eq!(g.mul(a, e), a);
                assert_eq!(g.mul(e, a), a);
                assert_eq!(g.mul(a, g.inverse(a)), e);
                assert_eq!(g.mul(g.inverse(a), a), e);
                for b in g.elements() {
                    assert!(g.mul(a, b) < g.order());
                    for c in g.elements() {
                        assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_table_without_identity() {
        // A constant table: closed but no identity.
        let err = FiniteGroup::from_cayley(vec![vec![0, 0], vec![0, 0]]).unwrap_err();
        assert_eq!(err, GroupError::MissingIdentity);
    }

    #[test]
    fn rejects_non_associative_table() {
        // A "subtraction mod 3" table: has right identity quirks and fails
        // associativity.
        let cayley = (0..3usize)
            .map(|a| (0..3usize).map(|b| (3 + a - b) % 3).collect())
            .collect();
        let err = FiniteGroup::from_cayley(cayley).unwrap_err();
        assert!(matches!(
            err,
            GroupError::NotAssociative { .. } | GroupError::MissingIdentity
        ));
    }

    #[test]
    fn rejects_out_of_range_entries() {
        let err = FiniteGroup::from_cayley(vec![vec![0, 1], vec![1, 7]]).unwrap_err();
        assert!(matches!(err, GroupError::EntryOutOfRange { value: 7, .. }));
    }
}
