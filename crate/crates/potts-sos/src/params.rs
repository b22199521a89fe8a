//! Model parameters: couplings, activities, field dimension, branching order.

use serde::Serialize;

use crate::error::{Error, Result};

/// Couplings and activities of the Potts-SOS model.
///
/// The spin set is `{0, ..., m}` (m + 1 states); boundary fields have m free
/// components with the last state normalized away. Activities are
/// `theta = exp(J * beta)` for the SOS coupling and `r = exp(Jp * beta)` for
/// the Potts coupling. Parameters may be built directly from `(theta, r)`, in
/// which case the couplings are absent and the Hamiltonian is unavailable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelParams {
    #[serde(rename = "J", skip_serializing_if = "Option::is_none")]
    j: Option<f64>,
    #[serde(rename = "Jp", skip_serializing_if = "Option::is_none")]
    jp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    theta: f64,
    r: f64,
    m: usize,
    k: usize,
}

impl ModelParams {
    /// Builds parameters from couplings `(J, Jp)` and inverse temperature.
    pub fn from_couplings(j: f64, jp: f64, beta: f64, m: usize, k: usize) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "beta must be positive and finite, got {beta}"
            )));
        }
        check_dims(m, k)?;
        let theta = activity("J*beta", j * beta)?;
        let r = activity("Jp*beta", jp * beta)?;
        Ok(ModelParams {
            j: Some(j),
            jp: Some(jp),
            beta: Some(beta),
            theta,
            r,
            m,
            k,
        })
    }

    /// Builds parameters from the activities directly; couplings stay unset.
    pub fn from_activities(theta: f64, r: f64, m: usize, k: usize) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "theta must be positive and finite, got {theta}"
            )));
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "r must be positive and finite, got {r}"
            )));
        }
        check_dims(m, k)?;
        Ok(ModelParams {
            j: None,
            jp: None,
            beta: None,
            theta,
            r,
            m,
            k,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Field dimension; the spin set is `{0, ..., m}`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Branching order (children per vertex on the rooted tree).
    pub fn k(&self) -> usize {
        self.k
    }

    /// `(J, Jp, beta)` when constructed from couplings.
    pub fn couplings(&self) -> Option<(f64, f64, f64)> {
        match (self.j, self.jp, self.beta) {
            (Some(j), Some(jp), Some(beta)) => Some((j, jp, beta)),
            _ => None,
        }
    }
}

fn check_dims(m: usize, k: usize) -> Result<()> {
    if m < 1 {
        return Err(Error::InvalidParameter(format!("m must be >= 1, got {m}")));
    }
    if k < 1 {
        return Err(Error::InvalidParameter(format!("k must be >= 1, got {k}")));
    }
    Ok(())
}

fn activity(name: &str, exponent: f64) -> Result<f64> {
    let value = exponent.exp();
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::ActivityOverflow {
            product: name.to_string(),
            value: exponent,
        })
    }
}
