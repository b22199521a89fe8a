//! Boundary fields: the m free components of a boundary-law vector.

use serde::Serialize;

/// Boundary field `h = (h_0, ..., h_{m-1})`.
///
/// The full boundary-law vector has m + 1 components indexed by spin; the
/// last one is the normalization `h_m = 0` and is never stored.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryField {
    h: Vec<f64>,
}

impl BoundaryField {
    /// Wraps the free components. Panics on NaN/infinite entries or an
    /// empty vector; those are programming errors, not model states.
    pub fn new(h: Vec<f64>) -> Self {
        assert!(!h.is_empty(), "boundary field needs at least one component");
        assert!(
            h.iter().all(|x| x.is_finite()),
            "boundary field components must be finite"
        );
        BoundaryField { h }
    }

    /// The all-zero field of dimension `m` (the symmetric point).
    pub fn zero(m: usize) -> Self {
        BoundaryField::new(vec![0.0; m])
    }

    /// Field dimension m.
    pub fn dim(&self) -> usize {
        self.h.len()
    }

    /// Free components `h_0..h_{m-1}`.
    pub fn components(&self) -> &[f64] {
        &self.h
    }

    /// Full component for spin `s`, including the implicit `h_m = 0`.
    pub fn component(&self, s: usize) -> f64 {
        if s == self.h.len() {
            0.0
        } else {
            self.h[s]
        }
    }

    /// Spin-reversal image: `flip(h)_i = h_{m-i} - h_0` with `h_m = 0`.
    ///
    /// This is the field of the configuration with every spin s replaced by
    /// m - s, re-normalized so the last component is zero again.
    pub fn flip(&self) -> Self {
        let m = self.dim();
        let h0 = self.h[0];
        BoundaryField::new((0..m).map(|i| self.component(m - i) - h0).collect())
    }

    /// Componentwise sum; both fields must share a dimension.
    pub fn add(&self, other: &BoundaryField) -> Self {
        assert_eq!(self.dim(), other.dim(), "field dimension mismatch");
        BoundaryField::new(self.h.iter().zip(&other.h).map(|(a, b)| a + b).collect())
    }

    /// Max-norm of the componentwise difference.
    pub fn max_abs_diff(&self, other: &BoundaryField) -> f64 {
        assert_eq!(self.dim(), other.dim(), "field dimension mismatch");
        self.h
            .iter()
            .zip(&other.h)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}
