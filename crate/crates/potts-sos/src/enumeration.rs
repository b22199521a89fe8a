//! Exact enumeration oracle: finite-volume measures built from boundary
//! fields, their marginals, and the telescoping consistency check.
//!
//! The finite-volume weight of a configuration is the product of the pair
//! weights over all edges times one boundary factor `exp(h_{s(x),x})` per
//! boundary vertex. Summing out the deepest generation reproduces the
//! next-shallower measure exactly when the fields satisfy the boundary-law
//! recursion at the new boundary, so comparing successive volumes is an
//! implementation-independent test of any claimed solution.
//!
//! All sums run over a fixed pairwise reduction tree, so results do not
//! depend on how the work is split across threads.

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::transfer::weight_table;
use crate::tree::{FieldAssignment, FiniteTree, SpinConfiguration, DEFAULT_VERTEX_CAP};

/// Splits once work exceeds this many configurations per branch.
const PAIRWISE_LEAF: usize = 4096;

/// Deterministic pairwise sum of `f(start..start+len)`.
///
/// The reduction tree depends only on `(start, len)`; halves may be
/// evaluated concurrently without changing a single bit of the result.
fn pairwise_sum<F>(start: usize, len: usize, f: &F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    if len <= PAIRWISE_LEAF {
        (start..start + len).map(f).sum()
    } else {
        let half = len / 2;
        let (a, b) = rayon::join(
            || pairwise_sum(start, half, f),
            || pairwise_sum(start + half, len - half, f),
        );
        a + b
    }
}

/// Per-vertex, per-spin multiplicative factors of the finite-volume weight.
struct WeightTables {
    /// `pair[i][j]`: weight of an edge with spins (i, j).
    pair: Vec<Vec<f64>>,
    /// `vertex[v][s]`: boundary factor exp(h_s) at v, or 1 inside.
    vertex: Vec<Vec<f64>>,
    states: usize,
}

impl WeightTables {
    fn new(tree: &FiniteTree, fields: &FieldAssignment, params: &ModelParams) -> Self {
        let states = params.m() + 1;
        let vertex = (0..tree.vertex_count())
            .map(|v| {
                (0..states)
                    .map(|s| {
                        if tree.is_boundary(v) {
                            fields.field(tree, v).component(s).exp()
                        } else {
                            1.0
                        }
                    })
                    .collect()
            })
            .collect();
        WeightTables {
            pair: weight_table(params),
            vertex,
            states,
        }
    }

    fn weight(&self, tree: &FiniteTree, spins: &[u8]) -> f64 {
        let mut w = 1.0;
        for v in 1..tree.vertex_count() {
            let p = tree.parent(v).expect("non-root vertex has a parent");
            w *= self.pair[spins[v] as usize][spins[p] as usize];
        }
        for (v, &s) in spins.iter().enumerate() {
            w *= self.vertex[v][s as usize];
        }
        w
    }
}

/// Decodes a mixed-radix index into spins, most significant digit first.
fn decode(mut idx: usize, states: usize, out: &mut [u8]) {
    for slot in out.iter_mut().rev() {
        *slot = (idx % states) as u8;
        idx /= states;
    }
}

fn check_enumerable(tree: &FiniteTree, params: &ModelParams) -> Result<()> {
    let vertices = tree.vertex_count();
    let states = params.m() + 1;
    // enforced here independently of the tree's own build cap: a tree can
    // legitimately be larger for structural work, but (m+1)^|V| cannot
    let cap = DEFAULT_VERTEX_CAP.min(tree.cap());
    if vertices > cap {
        return Err(Error::EnumerationTooLarge {
            vertices,
            states,
            configurations: (states as f64).powi(vertices as i32),
            cap,
        });
    }
    Ok(())
}

/// Unnormalized weight of one configuration under the given fields.
pub fn splitting_weight(
    config: &SpinConfiguration,
    fields: &FieldAssignment,
    tree: &FiniteTree,
    params: &ModelParams,
) -> f64 {
    assert_eq!(fields.dim(), params.m(), "field dimension must match m");
    assert_eq!(
        config.spins().len(),
        tree.vertex_count(),
        "configuration must cover the tree"
    );
    WeightTables::new(tree, fields, params).weight(tree, config.spins())
}

/// Exact marginal distribution of the spin at vertex `v`.
pub fn exact_marginal(
    tree: &FiniteTree,
    fields: &FieldAssignment,
    params: &ModelParams,
    v: usize,
) -> Result<Vec<f64>> {
    check_enumerable(tree, params)?;
    if v >= tree.vertex_count() {
        return Err(Error::InvalidParameter(format!(
            "vertex {v} outside tree with {} vertices",
            tree.vertex_count()
        )));
    }
    assert_eq!(fields.dim(), params.m(), "field dimension must match m");

    let tables = WeightTables::new(tree, fields, params);
    let states = tables.states;
    let vertices = tree.vertex_count();
    let rest = states.pow((vertices - 1) as u32);

    let sums: Vec<f64> = (0..states)
        .map(|s| {
            pairwise_sum(0, rest, &|idx| {
                let mut spins = vec![0u8; vertices - 1];
                decode(idx, states, &mut spins);
                let mut full = Vec::with_capacity(vertices);
                full.extend_from_slice(&spins[..v]);
                full.push(s as u8);
                full.extend_from_slice(&spins[v..]);
                tables.weight(tree, &full)
            })
        })
        .collect();
    let total: f64 = sums.iter().sum();
    Ok(sums.into_iter().map(|x| x / total).collect())
}

/// Worst pointwise disagreement between the depth-n measure marginalized
/// onto the depth-(n-1) volume and the depth-(n-1) measure built directly
/// from the same field rule.
///
/// Zero (to rounding) exactly when the rule satisfies the boundary-law
/// recursion at the depth-(n-1) vertices; any violation shows up as a
/// finite gap on the joint distribution of the inner volume.
pub fn consistency_gap(
    k: usize,
    n: usize,
    rule: &FieldAssignment,
    params: &ModelParams,
) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidParameter(
            "consistency gap needs depth n >= 1 to compare successive volumes".into(),
        ));
    }
    let deep = FiniteTree::build(k, n)?;
    let shallow = FiniteTree::build(k, n - 1)?;
    check_enumerable(&deep, params)?;
    assert_eq!(rule.dim(), params.m(), "field dimension must match m");

    let states = params.m() + 1;
    // BFS order makes the shallow tree's vertices the first indices of the
    // deep tree, so a configuration key for one indexes the other
    let inner = shallow.vertex_count();
    let tail = deep.vertex_count() - inner;
    let keys = states.pow(inner as u32);
    let tail_count = states.pow(tail as u32);

    let deep_tables = WeightTables::new(&deep, rule, params);
    let shallow_tables = WeightTables::new(&shallow, rule, params);

    let mut marginalized = Vec::with_capacity(keys);
    let mut direct = Vec::with_capacity(keys);
    let mut key_spins = vec![0u8; inner];
    for key in 0..keys {
        decode(key, states, &mut key_spins);
        let prefix = key_spins.clone();
        marginalized.push(pairwise_sum(0, tail_count, &|idx| {
            let mut spins = vec![0u8; inner + tail];
            spins[..inner].copy_from_slice(&prefix);
            decode(idx, states, &mut spins[inner..]);
            deep_tables.weight(&deep, &spins)
        }));
        direct.push(shallow_tables.weight(&shallow, &key_spins));
    }

    let deep_total: f64 = marginalized.iter().sum();
    let shallow_total: f64 = direct.iter().sum();
    let gap = marginalized
        .iter()
        .zip(&direct)
        .map(|(a, b)| (a / deep_total - b / shallow_total).abs())
        .fold(0.0, f64::max);
    Ok(gap)
}
