//! The Hamiltonian, pair weights, and the boundary-law transfer map.
//!
//! The transfer map sends a child's boundary field to its contribution to
//! the parent's field. Component i of the image is
//!
//! ```text
//! F_i(h) = ln( N_i(h) / N_m(h) ),
//! N_i(h) = sum_{j=0}^{m} theta^{|i-j|} r^{delta_ij} exp(h_j),   h_m = 0,
//! ```
//!
//! i.e. the i-th row sum of the pair-weight matrix against exp(h), with the
//! last row fixing the normalization. A field assignment is a boundary law
//! exactly when every vertex's field equals the sum of the transfer images
//! of its children's fields.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::BoundaryField;
use crate::numeric::sum_sorted;
use crate::params::ModelParams;
use crate::tree::{FiniteTree, SpinConfiguration};

/// Pair weight `theta^|i-j| * r^delta_ij` of an edge with spins (i, j).
pub fn edge_weight(i: usize, j: usize, params: &ModelParams) -> Result<f64> {
    let m = params.m();
    if i > m {
        return Err(Error::SpinOutOfRange { spin: i, m });
    }
    if j > m {
        return Err(Error::SpinOutOfRange { spin: j, m });
    }
    Ok(weight_unchecked(i, j, params))
}

#[inline]
pub(crate) fn weight_unchecked(i: usize, j: usize, params: &ModelParams) -> f64 {
    let diff = i.abs_diff(j) as i32;
    let kronecker = if i == j { params.r() } else { 1.0 };
    params.theta().powi(diff) * kronecker
}

/// Full (m+1) x (m+1) pair-weight table, indexed `[i][j]`.
pub(crate) fn weight_table(params: &ModelParams) -> Vec<Vec<f64>> {
    let n = params.m() + 1;
    (0..n)
        .map(|i| (0..n).map(|j| weight_unchecked(i, j, params)).collect())
        .collect()
}

/// Energy of a finite configuration:
/// `H = -J sum |s(x)-s(y)| - Jp sum delta_{s(x)s(y)}` over tree edges.
///
/// Requires parameters built from couplings; activity-only parameters have
/// no energy scale.
pub fn hamiltonian(
    config: &SpinConfiguration,
    tree: &FiniteTree,
    params: &ModelParams,
) -> Result<f64> {
    let (j, jp, _beta) = params.couplings().ok_or(Error::CouplingsUnavailable)?;
    if config.spins().len() != tree.vertex_count() {
        return Err(Error::InvalidParameter(format!(
            "configuration covers {} vertices, tree has {}",
            config.spins().len(),
            tree.vertex_count()
        )));
    }
    let mut sos_sum = 0.0;
    let mut potts_sum = 0.0;
    for v in 1..tree.vertex_count() {
        let p = tree.parent(v).expect("non-root vertex has a parent");
        let a = config.spin(v);
        let b = config.spin(p);
        sos_sum += a.abs_diff(b) as f64;
        if a == b {
            potts_sum += 1.0;
        }
    }
    Ok(-j * sos_sum - jp * potts_sum)
}

/// Applies the transfer map to a boundary field.
///
/// Evaluated in shifted log-domain: the largest exponent is subtracted from
/// all of them before exponentiating, so the result stays finite for any
/// finite input. Row sums are accumulated in sorted order, which makes the
/// exact identities (component 0 vanishing at the symmetric point, the
/// unit branch of the sublattice system) hold bit for bit.
pub fn transfer_map(h: &BoundaryField, params: &ModelParams) -> BoundaryField {
    let m = params.m();
    assert_eq!(h.dim(), m, "field dimension must match params.m()");

    let shift = (0..=m).map(|j| h.component(j)).fold(0.0f64, f64::max);
    let exps: Vec<f64> = (0..=m).map(|j| (h.component(j) - shift).exp()).collect();

    let mut terms = vec![0.0; m + 1];
    let mut log_rows = Vec::with_capacity(m + 1);
    for i in 0..=m {
        for j in 0..=m {
            terms[j] = weight_unchecked(i, j, params) * exps[j];
        }
        log_rows.push(sum_sorted(&mut terms).ln());
    }
    let log_norm = log_rows[m];
    BoundaryField::new((0..m).map(|i| log_rows[i] - log_norm).collect())
}

/// Worst violation of the boundary-law recursion on a finite tree.
///
/// Returns the maximum over internal vertices x of the max-norm of
/// `h_x - sum_{y in S(x)} F(h_y)`; zero exactly when the fields satisfy the
/// recursion everywhere inside the volume.
pub fn compatibility_residual(
    fields: &HashMap<usize, BoundaryField>,
    tree: &FiniteTree,
    params: &ModelParams,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for x in 0..tree.vertex_count() {
        if tree.is_boundary(x) {
            continue;
        }
        let h_x = fields.get(&x).ok_or(Error::MissingField { vertex: x })?;
        let mut sum = BoundaryField::zero(params.m());
        for &y in tree.children(x) {
            let h_y = fields.get(&y).ok_or(Error::MissingField { vertex: y })?;
            sum = sum.add(&transfer_map(h_y, params));
        }
        worst = worst.max(h_x.max_abs_diff(&sum));
    }
    Ok(worst)
}
