//! Command-line surface for the Potts-SOS Cayley tree solvers.
//!
//! Exit codes: 0 on success, 1 when a verification or audit fails (or a
//! file cannot be written), 2 for usage and domain errors.

use std::fs::File;
use std::io::Write;
use std::process::ExitCode;

use anyhow::Context;
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};
use serde::Serialize;

use potts_sos::enumeration::consistency_gap;
use potts_sos::periodic::{
    discriminant, fields_from_cycle, period2_residual, reduced_map, solve_fixed_points,
    solve_two_cycles_k2, solve_two_cycles_numeric, unordered_cycle_count, Period2Point, TwoCycle,
};
use potts_sos::phase::{find_theta_d, potts_line_audit, scan_grid, GridSpec};
use potts_sos::{
    BoundaryField, DiscriminantReport, Error, FieldAssignment, FiniteTree, ModelParams,
};

/// Gap threshold below which a verified solution counts as consistent.
const VERIFY_GAP_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "potts-sos",
    version,
    about = "Boundary-law solvers and exact checks for the Potts-SOS model on the Cayley tree"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve fixed points and two-cycles at one parameter point
    Solve(SolveArgs),
    /// Locate the discriminant threshold theta_D on the line r = theta^2
    ThetaD {
        /// Bisection interval width (>= 1e-14)
        #[arg(long, default_value_t = 1e-8, allow_hyphen_values = true)]
        tol: f64,
    },
    /// Classify a parameter grid and write it as CSV
    Scan(ScanArgs),
    /// Check that the pure Potts line theta = 1 carries no two-cycles
    AuditPotts(AuditArgs),
    /// Verify a solution against the exact enumeration oracle
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// SOS activity theta = exp(J*beta)
    #[arg(
        long,
        required_unless_present = "from_couplings",
        conflicts_with = "from_couplings",
        allow_hyphen_values = true
    )]
    theta: Option<f64>,
    /// Potts activity r = exp(Jp*beta)
    #[arg(
        long,
        required_unless_present = "from_couplings",
        conflicts_with = "from_couplings",
        allow_hyphen_values = true
    )]
    r: Option<f64>,
    /// Branching order of the tree
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Field dimension (the solvers support m = 2)
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Derive the activities from couplings instead
    #[arg(long)]
    from_couplings: bool,
    /// SOS coupling (with --from-couplings)
    #[arg(long = "J", allow_hyphen_values = true)]
    j: Option<f64>,
    /// Potts coupling (with --from-couplings)
    #[arg(long = "Jp", allow_hyphen_values = true)]
    jp: Option<f64>,
    /// Inverse temperature (with --from-couplings)
    #[arg(long)]
    beta: Option<f64>,
    /// Emit the report as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    theta_min: f64,
    #[arg(long)]
    theta_max: f64,
    #[arg(long)]
    theta_steps: usize,
    #[arg(long, required_unless_present = "line", conflicts_with = "line")]
    r_min: Option<f64>,
    #[arg(long, required_unless_present = "line", conflicts_with = "line")]
    r_max: Option<f64>,
    #[arg(long, required_unless_present = "line", conflicts_with = "line")]
    r_steps: Option<usize>,
    /// Constrain the grid to a line; the only supported value is r=theta^2
    #[arg(long)]
    line: Option<String>,
    /// Output CSV path
    #[arg(long)]
    out: String,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long, default_value_t = 0.05, allow_hyphen_values = true)]
    r_min: f64,
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    r_max: f64,
    #[arg(long, default_value_t = 100)]
    steps: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long, allow_hyphen_values = true)]
    r: f64,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Tree depth n; the oracle compares depths n and n-1
    #[arg(long)]
    depth: usize,
    /// Verify the sublattice-alternating cycle fields
    #[arg(long, conflicts_with = "fixed_point")]
    cycle: bool,
    /// Verify the translation-invariant fixed-point fields (default)
    #[arg(long)]
    fixed_point: bool,
}

fn usage_error(msg: &str) -> ! {
    Cli::command().error(ErrorKind::ValueValidation, msg).exit()
}

/// 17 significant digits: enough to round-trip any f64, and bit-stable.
fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::ThetaD { tol } => cmd_theta_d(tol),
        Command::Scan(args) => cmd_scan(args),
        Command::AuditPotts(args) => cmd_audit_potts(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

#[derive(Serialize)]
struct FixedPointEntry {
    z: f64,
    residual: f64,
}

#[derive(Serialize)]
struct TwoCycleEntry {
    z1: f64,
    t1: f64,
    degenerate: bool,
    residual: f64,
    even_field: BoundaryField,
    odd_field: BoundaryField,
}

#[derive(Serialize)]
struct SolveReport {
    params: ModelParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    discriminant: Option<DiscriminantReport>,
    fixed_points: Vec<FixedPointEntry>,
    two_cycles: Vec<TwoCycleEntry>,
}

fn check_activity(name: &str, value: f64) -> f64 {
    if !(value > 0.0 && value.is_finite()) {
        usage_error(&format!("{name} must be positive and finite, got {value}"));
    }
    value
}

fn cmd_solve(args: SolveArgs) -> anyhow::Result<ExitCode> {
    if args.m != 2 {
        usage_error("the solvers support m = 2 only");
    }
    if args.k < 1 {
        usage_error("k must be >= 1");
    }
    let params = if args.from_couplings {
        let (Some(j), Some(jp), Some(beta)) = (args.j, args.jp, args.beta) else {
            usage_error("--from-couplings requires --J, --Jp and --beta");
        };
        match ModelParams::from_couplings(j, jp, beta, args.m, args.k) {
            Ok(p) => p,
            Err(e) => usage_error(&e.to_string()),
        }
    } else {
        let theta = check_activity("theta", args.theta.expect("required by clap"));
        let r = check_activity("r", args.r.expect("required by clap"));
        ModelParams::from_activities(theta, r, args.m, args.k)
            .unwrap_or_else(|e| usage_error(&e.to_string()))
    };

    let fixed_points: Vec<FixedPointEntry> = solve_fixed_points(&params)?
        .into_iter()
        .map(|z| FixedPointEntry {
            z,
            residual: (reduced_map(z, &params) - z).abs(),
        })
        .collect();

    let cycles: Vec<TwoCycle> = if params.k() == 2 {
        solve_two_cycles_k2(params.theta(), params.r())?
    } else {
        solve_two_cycles_numeric(&params)?
    };
    let two_cycles: Vec<TwoCycleEntry> = cycles
        .iter()
        .map(|c| {
            let res = period2_residual(&Period2Point::on_unit_branch(c.z1, c.t1), &params)?;
            let (even_field, odd_field) = fields_from_cycle(c);
            Ok(TwoCycleEntry {
                z1: c.z1,
                t1: c.t1,
                degenerate: c.degenerate,
                residual: res.iter().fold(0.0f64, |m, v| m.max(v.abs())),
                even_field,
                odd_field,
            })
        })
        .collect::<Result<_, Error>>()?;

    let report = SolveReport {
        discriminant: (params.k() == 2).then(|| discriminant(params.theta(), params.r())),
        params,
        fixed_points,
        two_cycles,
    };

    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
        return Ok(ExitCode::SUCCESS);
    }

    let p = &report.params;
    println!(
        "parameters: theta = {}, r = {}, m = {}, k = {}",
        fmt17(p.theta()),
        fmt17(p.r()),
        p.m(),
        p.k()
    );
    if let Some(d) = &report.discriminant {
        println!(
            "discriminant: D_std = {}, b = {}, D_paper = {}",
            fmt17(d.d_std),
            fmt17(d.b),
            fmt17(d.d_paper)
        );
        println!(
            "criterion (D_std > 0, b < 0): {}",
            if d.two_real_positive {
                "met -- at least two alternating measures"
            } else {
                "not met"
            }
        );
    }
    println!(
        "fixed points of f, translation-invariant measures ({}):",
        report.fixed_points.len()
    );
    for fp in &report.fixed_points {
        println!("  z = {}   |f(z) - z| = {:.3e}", fmt17(fp.z), fp.residual);
    }
    if report.two_cycles.is_empty() {
        println!("two-cycles: none");
    } else {
        println!(
            "two-cycles: {} unordered cycle(s), {} ordered measure(s)",
            unordered_cycle_count(&cycles),
            report.two_cycles.len()
        );
        for c in &report.two_cycles {
            println!(
                "  z1 = {}   t1 = {}   max system residual = {:.3e}{}",
                fmt17(c.z1),
                fmt17(c.t1),
                c.residual,
                if c.degenerate { "   [degenerate]" } else { "" }
            );
            println!(
                "    even field h = (0, {})   odd field l = (0, {})",
                fmt17(c.even_field.components()[1]),
                fmt17(c.odd_field.components()[1])
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_theta_d(tol: f64) -> anyhow::Result<ExitCode> {
    if tol.is_nan() || tol < 1e-14 {
        usage_error(&format!("--tol must be >= 1e-14, got {tol}"));
    }
    let root = find_theta_d(tol)?;
    println!("theta_D = {} (bisection interval < {:e})", fmt17(root), tol);
    Ok(ExitCode::SUCCESS)
}

fn cmd_scan(args: ScanArgs) -> anyhow::Result<ExitCode> {
    let grid = if let Some(line) = &args.line {
        if line != "r=theta^2" {
            usage_error(&format!("unsupported --line value '{line}'; use r=theta^2"));
        }
        GridSpec::special_line(args.theta_min, args.theta_max, args.theta_steps)
    } else {
        GridSpec::rectangle(
            args.theta_min,
            args.theta_max,
            args.theta_steps,
            args.r_min.expect("required by clap"),
            args.r_max.expect("required by clap"),
            args.r_steps.expect("required by clap"),
        )
    }
    .unwrap_or_else(|e| usage_error(&e.to_string()));

    let rows = scan_grid(&grid)?;
    let mut file = File::create(&args.out).with_context(|| format!("cannot write {}", args.out))?;
    writeln!(file, "theta,r,D_std,b,n_fixed_points,n_two_cycles,label")?;
    for row in &rows {
        writeln!(
            file,
            "{},{},{},{},{},{},{}",
            fmt17(row.theta),
            fmt17(row.r),
            fmt17(row.d_std),
            fmt17(row.b),
            row.n_fixed_points,
            row.n_two_cycles,
            row.label
        )?;
    }
    println!("wrote {} rows to {}", rows.len(), args.out);
    Ok(ExitCode::SUCCESS)
}

fn cmd_audit_potts(args: AuditArgs) -> anyhow::Result<ExitCode> {
    if !(args.r_min > 0.0 && args.r_min.is_finite() && args.r_max.is_finite()) {
        usage_error("r range must be positive and finite");
    }
    if args.r_max < args.r_min || args.steps < 1 {
        usage_error("need r-max >= r-min and steps >= 1");
    }
    let values: Vec<f64> = if args.steps == 1 {
        vec![args.r_min]
    } else {
        let h = (args.r_max - args.r_min) / (args.steps - 1) as f64;
        (0..args.steps)
            .map(|i| {
                if i == args.steps - 1 {
                    args.r_max
                } else {
                    args.r_min + i as f64 * h
                }
            })
            .collect()
    };
    let violations = potts_line_audit(&values)?;
    if violations.is_empty() {
        println!(
            "OK: no two-cycles on the pure Potts line (theta = 1) across {} values of r in [{}, {}]",
            values.len(),
            args.r_min,
            args.r_max
        );
        Ok(ExitCode::SUCCESS)
    } else {
        println!("violations: two-cycles found at theta = 1 for r in {violations:?}");
        Ok(ExitCode::from(1))
    }
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    let theta = check_activity("theta", args.theta);
    let r = check_activity("r", args.r);
    if args.k < 1 {
        usage_error("k must be >= 1");
    }
    if args.depth < 1 {
        usage_error("depth must be >= 1 (the oracle compares depths n and n-1)");
    }
    let params = ModelParams::from_activities(theta, r, 2, args.k)
        .unwrap_or_else(|e| usage_error(&e.to_string()));
    // fail early, with the configuration count, if the tree is too big
    if let Err(Error::TreeTooLarge { vertices, cap }) = FiniteTree::build(args.k, args.depth) {
        let configurations = 3f64.powi(vertices as i32);
        usage_error(&format!(
            "depth {} gives {vertices} vertices, over the enumeration cap of {cap} \
             (3^{vertices} = {configurations:.3e} configurations)",
            args.depth
        ));
    }

    let rules: Vec<(String, FieldAssignment)> = if args.cycle {
        let cycles = if args.k == 2 {
            solve_two_cycles_k2(theta, r)?
        } else {
            solve_two_cycles_numeric(&params)?
        };
        let picked: Vec<&TwoCycle> = cycles
            .iter()
            .filter(|c| !c.degenerate && c.z1 < c.t1)
            .collect();
        if picked.is_empty() {
            usage_error(&format!(
                "no two-cycle exists at theta = {theta}, r = {r}, k = {}; \
                 nothing to verify",
                args.k
            ));
        }
        picked
            .into_iter()
            .map(|c| {
                let (even, odd) = fields_from_cycle(c);
                (
                    format!("cycle z1 = {}, t1 = {}", fmt17(c.z1), fmt17(c.t1)),
                    FieldAssignment::parity_alternating(even, odd),
                )
            })
            .collect()
    } else {
        solve_fixed_points(&params)?
            .into_iter()
            .map(|z| {
                (
                    format!("fixed point z = {}", fmt17(z)),
                    FieldAssignment::constant(BoundaryField::new(vec![0.0, z.ln()])),
                )
            })
            .collect()
    };

    let mut all_ok = true;
    for (label, rule) in &rules {
        let gap = consistency_gap(args.k, args.depth, rule, &params)?;
        let ok = gap < VERIFY_GAP_TOL;
        all_ok &= ok;
        println!(
            "{label}: consistency gap (depth {} vs {}) = {gap:.3e}  -> {}",
            args.depth,
            args.depth - 1,
            if ok { "OK" } else { "FAIL" }
        );
    }
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
