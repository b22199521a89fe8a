//! Acceptance suite: one test per exit criterion, each printing a verdict
//! line. Run with `cargo test -p potts-sos --test acceptance -- --nocapture`
//! to see the lines.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use potts_sos::enumeration::consistency_gap;
use potts_sos::periodic::{
    discriminant, period2_residual, quadratic_coeffs, quadratic_coeffs_oracle, reduced_map,
    solve_fixed_points, solve_two_cycles_k2, solve_two_cycles_numeric, unordered_cycle_count,
    Period2Point,
};
use potts_sos::phase::{find_theta_d, potts_line_audit, special_line};
use potts_sos::transfer::transfer_map;
use potts_sos::{BoundaryField, FieldAssignment, ModelParams};

fn verdict(n: usize, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {n} ({name}): {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

fn rel_diff(x: f64, y: f64) -> f64 {
    let scale = x.abs().max(y.abs());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).abs() / scale
    }
}

#[test]
fn criterion_1_theta_d_reproduction() {
    let start = Instant::now();
    let root = find_theta_d(1e-8).unwrap();
    let elapsed = start.elapsed();
    let close = (root - 0.32359).abs() <= 5e-5;
    let fast = elapsed.as_secs_f64() < 0.010;
    let pass = close && fast;
    verdict(
        1,
        "theta_D reproduction",
        pass,
        &format!(
            "theta_D = {root:.8}, |delta| = {:.2e}, {elapsed:?}",
            (root - 0.32359).abs()
        ),
    );
    assert!(pass, "theta_D = {root}, elapsed = {elapsed:?}");
}

#[test]
fn criterion_2_special_line_identity() {
    let mut worst_d = 0.0f64;
    let mut worst_b = 0.0f64;
    for i in 1..=1000 {
        let theta = 0.01 + i as f64 * (3.0 - 0.01) / 1000.0;
        let (d_expected, b_expected) = special_line(theta);
        let report = discriminant(theta, theta * theta);
        worst_d = worst_d.max(rel_diff(report.d_std, d_expected));
        worst_b = worst_b.max(rel_diff(report.b, b_expected));
    }
    let pass = worst_d <= 1e-9 && worst_b <= 1e-9;
    verdict(
        2,
        "special-line identity",
        pass,
        &format!("worst rel err: D {worst_d:.2e}, b {worst_b:.2e} over 1000 points"),
    );
    assert!(pass, "D err {worst_d:e}, b err {worst_b:e}");
}

#[test]
fn criterion_3_theorem_instance() {
    let start = Instant::now();

    let cycles = solve_two_cycles_k2(0.3, 0.09).unwrap();
    let params = ModelParams::from_activities(0.3, 0.09, 2, 2).unwrap();
    let one_cycle = unordered_cycle_count(&cycles) == 1 && cycles.len() == 2;
    let mut worst_residual = 0.0f64;
    for c in &cycles {
        let res = period2_residual(&Period2Point::on_unit_branch(c.z1, c.t1), &params).unwrap();
        worst_residual = worst_residual.max(res.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    }
    let none_at_half = solve_two_cycles_k2(0.5, 0.25).unwrap().is_empty();
    let none_at_unit = solve_two_cycles_k2(1.0, 1.0).unwrap().is_empty();

    let elapsed = start.elapsed();
    let pass = one_cycle
        && worst_residual < 1e-9
        && none_at_half
        && none_at_unit
        && elapsed.as_secs_f64() < 1.0;
    verdict(
        3,
        "theorem instance",
        pass,
        &format!(
            "(0.3,0.09): {} ordered measures, residual {worst_residual:.2e}; \
             (0.5,0.25) empty: {none_at_half}; (1,1) empty: {none_at_unit}; {elapsed:?}",
            cycles.len()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_4_quadratic_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let theta = rng.random_range(0.05..3.0);
        let r = rng.random_range(0.05..3.0);
        let direct = quadratic_coeffs(theta, r);
        // remainder above 1e-9 relative is an error inside the oracle
        let oracle = quadratic_coeffs_oracle(theta, r).unwrap();
        let scale = direct.a.abs().max(direct.b.abs()).max(direct.c.abs());
        let diff = (oracle.a - direct.a)
            .abs()
            .max((oracle.b - direct.b).abs())
            .max((oracle.c - direct.c).abs());
        worst = worst.max(diff / scale);
    }
    let pass = worst <= 1e-9;
    verdict(
        4,
        "quadratic oracle equivalence",
        pass,
        &format!("worst coefficient rel err {worst:.2e} over 100 random points"),
    );
    assert!(pass, "worst rel err {worst:e}");
}

#[test]
fn criterion_5_pure_potts_audit() {
    let start = Instant::now();
    let grid: Vec<f64> = (1..=100).map(|i| i as f64 * 0.05).collect();
    let violations = potts_line_audit(&grid).unwrap();
    let elapsed = start.elapsed();
    let pass = violations.is_empty() && elapsed.as_secs_f64() < 5.0;
    verdict(
        5,
        "pure-Potts audit",
        pass,
        &format!(
            "{} violations over r in [0.05, 5.00]; {elapsed:?}",
            violations.len()
        ),
    );
    assert!(pass, "violations: {violations:?}, elapsed {elapsed:?}");
}

#[test]
fn criterion_6_oracle_consistency() {
    let start = Instant::now();

    let unit = ModelParams::from_activities(1.0, 1.0, 2, 2).unwrap();
    let gap_zero = consistency_gap(
        2,
        2,
        &FieldAssignment::constant(BoundaryField::zero(2)),
        &unit,
    )
    .unwrap();

    let p23 = ModelParams::from_activities(2.0, 3.0, 2, 2).unwrap();
    let z = solve_fixed_points(&p23).unwrap()[0];
    let gap_fixed = consistency_gap(
        2,
        2,
        &FieldAssignment::constant(BoundaryField::new(vec![0.0, z.ln()])),
        &p23,
    )
    .unwrap();

    let p39 = ModelParams::from_activities(0.3, 0.09, 2, 2).unwrap();
    let cycle = solve_two_cycles_k2(0.3, 0.09).unwrap()[0];
    let even = BoundaryField::new(vec![0.0, cycle.z1.ln()]);
    let odd = BoundaryField::new(vec![0.0, cycle.t1.ln()]);
    let gap_cycle = consistency_gap(
        2,
        2,
        &FieldAssignment::parity_alternating(even.clone(), odd.clone()),
        &p39,
    )
    .unwrap();

    let perturbed = BoundaryField::new(vec![0.0, cycle.t1.ln() + 0.5]);
    let gap_perturbed = consistency_gap(
        2,
        2,
        &FieldAssignment::parity_alternating(even, perturbed),
        &p39,
    )
    .unwrap();

    let elapsed = start.elapsed();
    let pass = gap_zero < 1e-10
        && gap_fixed < 1e-10
        && gap_cycle < 1e-10
        && gap_perturbed > 1e-3
        && elapsed.as_secs_f64() < 10.0;
    verdict(
        6,
        "oracle consistency",
        pass,
        &format!(
            "gaps: zero {gap_zero:.2e}, fixed {gap_fixed:.2e}, cycle {gap_cycle:.2e}, \
             perturbed {gap_perturbed:.2e}; {elapsed:?}"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_7_property_suites() {
    // unit branch: first and third residual components vanish for any
    // positive off-branch values
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_branch = 0.0f64;
    for _ in 0..1000 {
        let theta = rng.random_range(0.05..3.0);
        let r = rng.random_range(0.05..3.0);
        let z1 = (rng.random_range(-4.6f64..4.6)).exp();
        let t1 = (rng.random_range(-4.6f64..4.6)).exp();
        let params = ModelParams::from_activities(theta, r, 2, 2).unwrap();
        let res = period2_residual(&Period2Point::on_unit_branch(z1, t1), &params).unwrap();
        worst_branch = worst_branch.max(res[0].abs()).max(res[2].abs());
    }

    // transfer-map flip symmetry across field dimensions
    let mut worst_flip = 0.0f64;
    for _ in 0..1000 {
        let m = rng.random_range(1..=4usize);
        let theta = rng.random_range(0.05..3.0);
        let r = rng.random_range(0.05..3.0);
        let h = BoundaryField::new((0..m).map(|_| rng.random_range(-5.0..5.0)).collect());
        let params = ModelParams::from_activities(theta, r, m, 2).unwrap();
        let lhs = transfer_map(&h.flip(), &params);
        let rhs = transfer_map(&h, &params).flip();
        worst_flip = worst_flip.max(lhs.max_abs_diff(&rhs));
    }

    // monotonicity: finite-difference slope sign equals the closed-form
    // slope constant
    let mut sign_mismatches = 0usize;
    for _ in 0..100 {
        let theta = rng.random_range(0.05..3.0);
        let r = rng.random_range(0.05..3.0);
        let z = (rng.random_range(-2.3f64..2.3)).exp();
        let params = ModelParams::from_activities(theta, r, 2, 2).unwrap();
        let h = 1e-5 * z;
        let fd = reduced_map(z + h, &params) - reduced_map(z - h, &params);
        let slope = r * theta * theta + r * r - 2.0 * theta * theta;
        if fd.signum() != slope.signum() {
            sign_mismatches += 1;
        }
    }

    let pass = worst_branch <= 1e-14 && worst_flip <= 1e-12 && sign_mismatches == 0;
    verdict(
        7,
        "property suites",
        pass,
        &format!(
            "unit branch worst {worst_branch:.2e} (1000 samples), \
             flip worst {worst_flip:.2e} (1000 samples), \
             monotonicity mismatches {sign_mismatches}/100"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_8_general_k_sanity() {
    // half the points in the full square, half in the low-theta corner
    // where the two-cycle region lives
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut points = Vec::with_capacity(50);
    for _ in 0..25 {
        points.push((rng.random_range(0.05..3.0), rng.random_range(0.05..3.0)));
    }
    for _ in 0..25 {
        points.push((rng.random_range(0.05..0.45), rng.random_range(0.05..0.45)));
    }

    let mut with_cycles = 0usize;
    let mut worst = 0.0f64;
    let mut mismatched = 0usize;
    for &(theta, r) in &points {
        let params = ModelParams::from_activities(theta, r, 2, 2).unwrap();
        let numeric = solve_two_cycles_numeric(&params).unwrap();
        let quadratic = solve_two_cycles_k2(theta, r).unwrap();
        let quadratic: Vec<_> = quadratic.into_iter().filter(|c| !c.degenerate).collect();
        if numeric.len() != quadratic.len() {
            mismatched += 1;
            continue;
        }
        if !numeric.is_empty() {
            with_cycles += 1;
        }
        for (n, q) in numeric.iter().zip(&quadratic) {
            worst = worst.max(rel_diff(n.z1, q.z1)).max(rel_diff(n.t1, q.t1));
        }
    }
    let pass = mismatched == 0 && worst <= 1e-8;
    verdict(
        8,
        "general-k sanity",
        pass,
        &format!(
            "{with_cycles}/50 points carry cycles, {mismatched} set mismatches, \
             worst root rel diff {worst:.2e}"
        ),
    );
    assert!(pass, "mismatched {mismatched}, worst {worst:e}");
}
