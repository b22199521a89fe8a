//! Finite rooted Cayley trees, spin configurations, and field assignments.
//!
//! The rooted half-tree is used throughout: every vertex, including the
//! root, has exactly k children, matching the child-sum form of the
//! boundary-law recursion. Vertices are stored in breadth-first order, so
//! the first `1 + k + ... + k^(n-1)` indices of a depth-n tree are exactly
//! the depth-(n-1) tree. The enumeration oracle relies on that layout.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::BoundaryField;

/// Default cap on vertex count; keeps `(m+1)^|V|` enumerable.
pub const DEFAULT_VERTEX_CAP: usize = 20;

/// Depth parity of a vertex, which is the index-two sublattice it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Rooted k-ary tree of depth n in breadth-first vertex order.
#[derive(Debug, Clone)]
pub struct FiniteTree {
    k: usize,
    depth: usize,
    parent: Vec<Option<usize>>,
    level: Vec<usize>,
    children: Vec<Vec<usize>>,
    cap: usize,
}

impl FiniteTree {
    /// Builds the depth-`n` tree with `k` children per vertex under the
    /// default vertex cap.
    pub fn build(k: usize, n: usize) -> Result<Self> {
        Self::build_with_cap(k, n, DEFAULT_VERTEX_CAP)
    }

    /// Same as [`FiniteTree::build`] with an explicit vertex cap.
    pub fn build_with_cap(k: usize, n: usize, cap: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter(format!("k must be >= 1, got {k}")));
        }
        // |V| = 1 + k + ... + k^n, computed with overflow checks since
        // k^n explodes quickly
        let mut count: usize = 1;
        let mut layer: usize = 1;
        for _ in 0..n {
            layer = layer.checked_mul(k).ok_or(Error::TreeTooLarge {
                vertices: usize::MAX,
                cap,
            })?;
            count = count.checked_add(layer).ok_or(Error::TreeTooLarge {
                vertices: usize::MAX,
                cap,
            })?;
        }
        if count > cap {
            return Err(Error::TreeTooLarge {
                vertices: count,
                cap,
            });
        }

        let mut parent = vec![None];
        let mut level = vec![0];
        let mut children: Vec<Vec<usize>> = vec![Vec::new()];
        let mut frontier = vec![0usize];
        for d in 1..=n {
            let mut next = Vec::with_capacity(frontier.len() * k);
            for &p in &frontier {
                for _ in 0..k {
                    let v = parent.len();
                    parent.push(Some(p));
                    level.push(d);
                    children.push(Vec::new());
                    children[p].push(v);
                    next.push(v);
                }
            }
            frontier = next;
        }
        Ok(FiniteTree {
            k,
            depth: n,
            parent,
            level,
            children,
            cap,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    /// Vertex cap this tree was built under.
    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Number of edges (every vertex but the root has one parent edge).
    pub fn edge_count(&self) -> usize {
        self.vertex_count() - 1
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn level(&self, v: usize) -> usize {
        self.level[v]
    }

    /// Direct descendants S(v).
    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.level[v] == self.depth
    }

    /// Vertices of the boundary set W_n.
    pub fn boundary(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_count()).filter(|&v| self.is_boundary(v))
    }

    /// Vertices strictly inside the volume (depth < n). In BFS order these
    /// are exactly `0..inner_count()`.
    pub fn inner_count(&self) -> usize {
        (0..self.vertex_count())
            .filter(|&v| !self.is_boundary(v))
            .count()
    }

    /// Sublattice parity of a vertex: even iff its depth is even.
    pub fn parity(&self, v: usize) -> Parity {
        if self.level[v].is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Assignment of one spin in `{0, ..., m}` to every vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinConfiguration {
    spins: Vec<u8>,
}

impl SpinConfiguration {
    /// Validates coverage (one spin per vertex) and spin range.
    pub fn new(spins: Vec<u8>, tree: &FiniteTree, m: usize) -> Result<Self> {
        if spins.len() != tree.vertex_count() {
            return Err(Error::InvalidParameter(format!(
                "configuration covers {} vertices, tree has {}",
                spins.len(),
                tree.vertex_count()
            )));
        }
        if let Some(&bad) = spins.iter().find(|&&s| s as usize > m) {
            return Err(Error::SpinOutOfRange {
                spin: bad as usize,
                m,
            });
        }
        Ok(SpinConfiguration { spins })
    }

    pub fn spin(&self, v: usize) -> u8 {
        self.spins[v]
    }

    pub fn spins(&self) -> &[u8] {
        &self.spins
    }
}

/// Rule assigning a boundary field to every vertex.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldAssignment {
    /// Translation-invariant candidate: the same field everywhere.
    Constant(BoundaryField),
    /// Sublattice-alternating candidate: one field per depth parity.
    ParityAlternating {
        even: BoundaryField,
        odd: BoundaryField,
    },
}

impl FieldAssignment {
    pub fn constant(h: BoundaryField) -> Self {
        FieldAssignment::Constant(h)
    }

    pub fn parity_alternating(even: BoundaryField, odd: BoundaryField) -> Self {
        assert_eq!(even.dim(), odd.dim(), "sublattice fields must share m");
        FieldAssignment::ParityAlternating { even, odd }
    }

    pub fn dim(&self) -> usize {
        match self {
            FieldAssignment::Constant(h) => h.dim(),
            FieldAssignment::ParityAlternating { even, .. } => even.dim(),
        }
    }

    /// Field used at tree depth `level`.
    pub fn at_level(&self, level: usize) -> &BoundaryField {
        match self {
            FieldAssignment::Constant(h) => h,
            FieldAssignment::ParityAlternating { even, odd } => {
                if level.is_multiple_of(2) {
                    even
                } else {
                    odd
                }
            }
        }
    }

    /// Field at a specific vertex.
    pub fn field(&self, tree: &FiniteTree, v: usize) -> &BoundaryField {
        self.at_level(tree.level(v))
    }

    /// Explicit vertex -> field map, as consumed by the compatibility check.
    pub fn materialize(&self, tree: &FiniteTree) -> HashMap<usize, BoundaryField> {
        (0..tree.vertex_count())
            .map(|v| (v, self.field(tree, v).clone()))
            .collect()
    }
}
