//! Classification of the (theta, r) plane by the two-cycle existence
//! criterion, the special line r = theta^2, and grid scans.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::bisect;
use crate::params::ModelParams;
use crate::periodic::{
    degeneracy_band, discriminant, quadratic_coeffs, solve_fixed_points, solve_two_cycles_numeric,
    unordered_cycle_count,
};

/// Existence guarantee at a parameter point. The criterion is sufficient,
/// not known to be necessary, so the labels read as lower bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PhaseLabel {
    /// `D > 0, b < 0`: at least two alternating (non-translation-invariant)
    /// measures.
    #[serde(rename = "TWO_PLUS")]
    TwoPlus,
    /// `D = 0 (within the band), b < 0`: at least one, at a tangency.
    #[serde(rename = "ONE_PLUS_DEGENERATE")]
    OnePlusDegenerate,
    /// The criterion guarantees nothing here.
    #[serde(rename = "NONE_GUARANTEED")]
    NoneGuaranteed,
}

impl PhaseLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            PhaseLabel::TwoPlus => "TWO_PLUS",
            PhaseLabel::OnePlusDegenerate => "ONE_PLUS_DEGENERATE",
            PhaseLabel::NoneGuaranteed => "NONE_GUARANTEED",
        }
    }
}

impl fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One classified parameter point (k = 2).
///
/// `n_fixed_points` and `n_two_cycles` are observed counts from the solvers
/// (unordered cycles), reported next to the criterion so the sufficiency
/// gap can be probed empirically.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhasePoint {
    pub theta: f64,
    pub r: f64,
    #[serde(rename = "D_std")]
    pub d_std: f64,
    pub b: f64,
    pub n_fixed_points: usize,
    pub n_two_cycles: usize,
    pub label: PhaseLabel,
}

/// Classifies one point of the (theta, r) plane at k = 2.
pub fn classify(theta: f64, r: f64) -> Result<PhasePoint> {
    let params = ModelParams::from_activities(theta, r, 2, 2)?;
    let coeffs = quadratic_coeffs(theta, r);
    let report = discriminant(theta, r);
    let band = degeneracy_band(&coeffs);
    let label = if report.b < 0.0 && report.d_std > band {
        PhaseLabel::TwoPlus
    } else if report.b < 0.0 && report.d_std.abs() <= band {
        PhaseLabel::OnePlusDegenerate
    } else {
        PhaseLabel::NoneGuaranteed
    };
    let n_fixed_points = solve_fixed_points(&params)?.len();
    let n_two_cycles = unordered_cycle_count(&solve_two_cycles_numeric(&params)?);
    Ok(PhasePoint {
        theta,
        r,
        d_std: report.d_std,
        b: report.b,
        n_fixed_points,
        n_two_cycles,
        label,
    })
}

/// `(D, b)` on the line r = theta^2 in factored form:
///
/// ```text
/// D = -16 theta^8 (theta^2 - 1)^2 (3 theta^4 + 10 theta^3 + 6 theta^2 - 1)
/// b =   4 theta^4 (theta^4 + 5 theta^3 + 4 theta^2 - 1)
/// ```
///
/// These factorizations are exact identities for `b^2 - 4ac` and `b` of the
/// deflated quadratic restricted to the line; the general-point evaluation
/// must reproduce them, which is the standing cross-check on both routes.
pub fn special_line(theta: f64) -> (f64, f64) {
    let t2 = theta * theta;
    let t3 = t2 * theta;
    let t4 = t2 * t2;
    let d = -16.0 * t4 * t4 * (t2 - 1.0) * (t2 - 1.0) * (3.0 * t4 + 10.0 * t3 + 6.0 * t2 - 1.0);
    let b = 4.0 * t4 * (t4 + 5.0 * t3 + 4.0 * t2 - 1.0);
    (d, b)
}

/// Threshold on the special line where D changes sign: the unique root of
/// `3 theta^4 + 10 theta^3 + 6 theta^2 - 1` in (0, 1), by bisection.
///
/// The quartic is -1 at 0 and +18 at 1, so the bracket always holds; at the
/// root, `b < 0`, so crossing the threshold switches the label between
/// `TWO_PLUS` and `NONE_GUARANTEED`.
pub fn find_theta_d(tol: f64) -> Result<f64> {
    if tol.is_nan() || tol < 1e-14 {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be >= 1e-14, got {tol}"
        )));
    }
    let quartic = |t: f64| 3.0 * t.powi(4) + 10.0 * t.powi(3) + 6.0 * t * t - 1.0;
    let root = bisect(0.0, 1.0, quartic, |_, _| tol);
    debug_assert!(special_line(root).1 < 0.0, "b must be negative at theta_D");
    Ok(root)
}

/// Rectangular or special-line grid over the parameter plane.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    theta_min: f64,
    theta_max: f64,
    theta_steps: usize,
    r_min: f64,
    r_max: f64,
    r_steps: usize,
    on_special_line: bool,
}

impl GridSpec {
    /// Full rectangle `[theta_min, theta_max] x [r_min, r_max]`.
    pub fn rectangle(
        theta_min: f64,
        theta_max: f64,
        theta_steps: usize,
        r_min: f64,
        r_max: f64,
        r_steps: usize,
    ) -> Result<Self> {
        check_axis("theta", theta_min, theta_max, theta_steps)?;
        check_axis("r", r_min, r_max, r_steps)?;
        Ok(GridSpec {
            theta_min,
            theta_max,
            theta_steps,
            r_min,
            r_max,
            r_steps,
            on_special_line: false,
        })
    }

    /// One-dimensional grid along r = theta^2.
    pub fn special_line(theta_min: f64, theta_max: f64, theta_steps: usize) -> Result<Self> {
        check_axis("theta", theta_min, theta_max, theta_steps)?;
        Ok(GridSpec {
            theta_min,
            theta_max,
            theta_steps,
            r_min: theta_min * theta_min,
            r_max: theta_max * theta_max,
            r_steps: 1,
            on_special_line: true,
        })
    }

    pub fn node_count(&self) -> usize {
        if self.on_special_line {
            self.theta_steps
        } else {
            self.theta_steps * self.r_steps
        }
    }

    /// Grid nodes in row-major order, theta as the slow index.
    pub fn nodes(&self) -> Vec<(f64, f64)> {
        let thetas = linspace(self.theta_min, self.theta_max, self.theta_steps);
        if self.on_special_line {
            return thetas.into_iter().map(|t| (t, t * t)).collect();
        }
        let rs = linspace(self.r_min, self.r_max, self.r_steps);
        let mut out = Vec::with_capacity(self.node_count());
        for &t in &thetas {
            for &r in &rs {
                out.push((t, r));
            }
        }
        out
    }
}

fn check_axis(name: &str, min: f64, max: f64, steps: usize) -> Result<()> {
    if !(min > 0.0 && min.is_finite() && max.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "{name} range must be positive finite, got [{min}, {max}]"
        )));
    }
    if max < min {
        return Err(Error::InvalidParameter(format!(
            "{name} range is empty: max {max} < min {min}"
        )));
    }
    if steps < 1 {
        return Err(Error::InvalidParameter(format!(
            "{name} steps must be >= 1"
        )));
    }
    Ok(())
}

fn linspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![min];
    }
    let h = (max - min) / (steps - 1) as f64;
    (0..steps)
        .map(|i| {
            if i == steps - 1 {
                max
            } else {
                min + i as f64 * h
            }
        })
        .collect()
}

/// Classifies every node of a grid.
///
/// Nodes are independent and evaluated in parallel; results are merged back
/// in grid order, so the output is identical to a sequential scan.
pub fn scan_grid(grid: &GridSpec) -> Result<Vec<PhasePoint>> {
    grid.nodes()
        .into_par_iter()
        .map(|(theta, r)| classify(theta, r))
        .collect()
}

/// Checks the pure Potts line theta = 1 for two-cycles at k = 2.
///
/// Returns the r values where the numeric solver found a non-degenerate
/// cycle. Expected empty: at theta = 1 no alternating measure exists.
pub fn potts_line_audit(r_values: &[f64]) -> Result<Vec<f64>> {
    let mut violations = Vec::new();
    for &r in r_values {
        let params = ModelParams::from_activities(1.0, r, 2, 2)?;
        let cycles = solve_two_cycles_numeric(&params)?;
        if cycles.iter().any(|c| !c.degenerate) {
            violations.push(r);
        }
    }
    Ok(violations)
}

/// Default audit grid: r = 0.05, 0.10, ..., 5.00.
pub fn default_potts_audit_grid() -> Vec<f64> {
    (1..=100).map(|i| i as f64 * 0.05).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_theorem_instance() {
        let p = classify(0.3, 0.09).unwrap();
        assert_eq!(p.label, PhaseLabel::TwoPlus);
        assert_eq!(p.n_two_cycles, 1);
        assert_eq!(p.n_fixed_points, 1);
    }

    #[test]
    fn classify_symmetric_point() {
        let p = classify(1.0, 1.0).unwrap();
        assert_eq!(p.label, PhaseLabel::NoneGuaranteed);
        assert_eq!(p.n_two_cycles, 0);
        assert!(p.b > 0.0);
    }

    #[test]
    fn classify_threshold_is_degenerate() {
        let theta_d = find_theta_d(1e-14).unwrap();
        let p = classify(theta_d, theta_d * theta_d).unwrap();
        assert_eq!(
            p.label,
            PhaseLabel::OnePlusDegenerate,
            "D_std = {:e}",
            p.d_std
        );
        assert!(p.b < 0.0);
    }

    #[test]
    fn special_line_frozen_values() {
        let (d, b) = special_line(1.0);
        assert_eq!(d, 0.0);
        assert_eq!(b, 36.0);
        let (d, b) = special_line(0.3);
        assert!((d - 1.440440466192e-4).abs() < 1e-12 * d.abs());
        assert!((b + 0.01609956).abs() < 1e-12 * b.abs());
        let (d, b) = special_line(0.5);
        assert!((d + 0.0681152343750).abs() < 1e-12 * d.abs());
        assert!((b - 0.171875).abs() < 1e-15);
    }

    #[test]
    fn theta_d_location() {
        let root = find_theta_d(1e-6).unwrap();
        assert!((root - 0.32359).abs() < 5e-5, "root = {root}");
        let quartic = 3.0 * root.powi(4) + 10.0 * root.powi(3) + 6.0 * root * root - 1.0;
        assert!(quartic.abs() < 1e-5);
        assert!(special_line(root).1 < 0.0);
    }

    #[test]
    fn theta_d_tightens_with_tolerance() {
        let a = find_theta_d(1e-12).unwrap();
        let b = find_theta_d(1e-13).unwrap();
        assert!((a - b).abs() < 1e-11);
        assert_eq!(
            find_theta_d(1e-12).unwrap().to_bits(),
            a.to_bits(),
            "bisection must be deterministic"
        );
    }

    #[test]
    fn theta_d_rejects_zero_tolerance() {
        assert!(find_theta_d(0.0).is_err());
        assert!(find_theta_d(-1.0).is_err());
        assert!(find_theta_d(f64::NAN).is_err());
    }

    #[test]
    fn grid_shapes() {
        let g = GridSpec::rectangle(0.1, 1.0, 10, 0.1, 1.0, 10).unwrap();
        assert_eq!(g.node_count(), 100);
        assert_eq!(g.nodes().len(), 100);
        // theta-major: first r runs, then theta
        let nodes = g.nodes();
        assert_eq!(nodes[0], (0.1, 0.1));
        assert!((nodes[1].0 - 0.1).abs() < 1e-15 && nodes[1].1 > nodes[0].1);

        let line = GridSpec::special_line(0.1, 0.5, 5).unwrap();
        let nodes = line.nodes();
        assert_eq!(nodes.len(), 5);
        for (t, r) in nodes {
            assert_eq!(r, t * t);
        }
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::rectangle(0.0, 1.0, 2, 0.1, 1.0, 2).is_err());
        assert!(GridSpec::rectangle(1.0, 0.5, 2, 0.1, 1.0, 2).is_err());
        assert!(GridSpec::rectangle(0.1, 1.0, 0, 0.1, 1.0, 2).is_err());
        assert!(GridSpec::rectangle(0.1, 1.0, 2, -0.1, 1.0, 2).is_err());
        // single-node grid is allowed
        assert!(GridSpec::rectangle(0.3, 0.3, 1, 0.09, 0.09, 1).is_ok());
    }

    #[test]
    fn scan_labels_known_nodes() {
        let g = GridSpec::rectangle(0.3, 0.3, 1, 0.09, 0.09, 1).unwrap();
        let rows = scan_grid(&g).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].label, PhaseLabel::TwoPlus);

        let potts = GridSpec::rectangle(1.0, 1.0, 1, 0.1, 5.0, 8).unwrap();
        for row in scan_grid(&potts).unwrap() {
            assert_eq!(row.label, PhaseLabel::NoneGuaranteed);
            assert_eq!(row.n_two_cycles, 0);
        }
    }

    #[test]
    fn scan_is_deterministic() {
        let g = GridSpec::rectangle(0.2, 0.6, 4, 0.05, 0.4, 4).unwrap();
        let a = scan_grid(&g).unwrap();
        let b = scan_grid(&g).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.d_std.to_bits(), y.d_std.to_bits());
            assert_eq!(x.b.to_bits(), y.b.to_bits());
            assert_eq!(x.label, y.label);
        }
    }

    #[test]
    fn audit_small_grids() {
        assert!(potts_line_audit(&[1.0]).unwrap().is_empty());
        assert!(potts_line_audit(&[0.1]).unwrap().is_empty());
        assert_eq!(default_potts_audit_grid().len(), 100);
        assert!((default_potts_audit_grid()[99] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn label_serializes_to_fixed_strings() {
        assert_eq!(
            serde_json::to_string(&PhaseLabel::TwoPlus).unwrap(),
            "\"TWO_PLUS\""
        );
        assert_eq!(
            PhaseLabel::OnePlusDegenerate.as_str(),
            "ONE_PLUS_DEGENERATE"
        );
    }
}
