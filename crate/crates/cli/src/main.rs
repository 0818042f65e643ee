//! Command-line front end: dimension reports, equivariance check suites,
//! call-count benchmarks, and dataset generation.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails or a
//! requested composition is infeasible, 2 on usage or spec errors.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use equikit::scan::{
    enumerate_commands_restricted, make_splits, standard_swaps, verify_semantic_equivariance,
    write_splits, Direction,
};
use equikit::{
    cyclic_group, equi_space_report, equitune, grid_action, is_space_report, is_wrapper, mlp,
    multi_space_report, product_cyclic_actions, product_equi_wrapper_n, regular_action,
    word_swap_action, Activation, CallBudget, EquiSpaceReport, GridKind, PermAction,
    ProductAction, ProductMode, WrapError, WrapMode,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::path::PathBuf;
use std::time::Instant;

const CHECK_TOLERANCE: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "equikit", version, about = "Finite-group equivariance toolkit")]
struct Cli {
    /// Output format; defaults to the EQUIKIT_FORMAT environment variable.
    #[arg(long, global = true, env = "EQUIKIT_FORMAT", default_value = "text")]
    format: Format,
    /// Seed for all randomness (probe vectors and toy-model parameters).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Equivariant,
    Invariant,
}

#[derive(Subcommand)]
enum Command {
    /// Report formula and null-space dimensions for a constrained space.
    Dims(DimsArgs),
    /// Run wrapper equivariance checks on seeded toy models.
    Check(CheckArgs),
    /// Compare sum-cost and product-cost call counts on identical inputs.
    Bench(BenchArgs),
    /// Generate the command dataset splits after verifying equivariance.
    ScanGen(ScanGenArgs),
}

#[derive(Args)]
struct DimsArgs {
    /// Group family, e.g. `cyclic:4` (used with --action).
    #[arg(long)]
    group: Option<String>,
    /// Action of the group, currently `regular`.
    #[arg(long)]
    action: Option<String>,
    /// Two comma-separated action specs for the invariant-symmetric space.
    #[arg(long = "is", conflicts_with_all = ["group", "action", "multi"])]
    is_pair: Option<String>,
    /// Two comma-separated action specs for the two-channel space.
    #[arg(long, conflicts_with_all = ["group", "action", "is_pair"])]
    multi: Option<String>,
}

#[derive(Args)]
struct CheckArgs {
    /// Comma-separated action specs, e.g. `rot90:4,flip:4`.
    #[arg(long)]
    actions: String,
    /// Product-wrapper mode to exercise when two or more actions share a space.
    #[arg(long, value_enum, default_value = "equivariant")]
    mode: Mode,
    /// Number of random probe vectors per check.
    #[arg(long, default_value_t = 8)]
    trials: usize,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated cyclic factor sizes, e.g. `4,2` or `2,2,2`.
    #[arg(long)]
    groups: String,
    /// Wrapper evaluations to time.
    #[arg(long, default_value_t = 3)]
    evals: usize,
}

#[derive(Args)]
struct ScanGenArgs {
    /// Output directory for the split files and manifest.
    #[arg(long)]
    outdir: PathBuf,
}

/// Action specs: `trivial:D`, `cyclic:N` (regular action), `rot90:SIDE`,
/// `flip:SIDE`, `swap:DIM:I:J`.
fn parse_action_spec(spec: &str) -> Result<PermAction> {
    let parts: Vec<&str> = spec.split(':').collect();
    let usage = || {
        anyhow!(
            "invalid action spec {spec:?}; expected trivial:D, cyclic:N, rot90:SIDE, flip:SIDE, or swap:DIM:I:J"
        )
    };
    let num = |s: &str| s.parse::<usize>().map_err(|_| usage());
    match parts.as_slice() {
        ["trivial", d] => {
            let d = num(d)?;
            if d == 0 {
                return Err(usage());
            }
            Ok(PermAction::trivial(d))
        }
        ["cyclic", n] => {
            let n = num(n)?;
            if n == 0 {
                return Err(usage());
            }
            Ok(regular_action(&cyclic_group(n)))
        }
        ["rot90", side] => {
            let side = num(side)?;
            if side == 0 {
                return Err(usage());
            }
            Ok(grid_action(GridKind::Rot90, side))
        }
        ["flip", side] => {
            let side = num(side)?;
            if side == 0 {
                return Err(usage());
            }
            Ok(grid_action(GridKind::Flip, side))
        }
        ["swap", dim, i, j] => {
            let (dim, i, j) = (num(dim)?, num(i)?, num(j)?);
            if i >= dim || j >= dim || i == j {
                return Err(usage());
            }
            Ok(word_swap_action(dim, i, j))
        }
        _ => Err(usage()),
    }
}

fn parse_action_list(specs: &str) -> Result<Vec<PermAction>> {
    specs.split(',').map(|s| parse_action_spec(s.trim())).collect()
}

fn parse_pair(specs: &str) -> Result<(PermAction, PermAction)> {
    let actions = parse_action_list(specs)?;
    if actions.len() != 2 {
        bail!("expected exactly two comma-separated action specs, got {specs:?}");
    }
    let mut it = actions.into_iter();
    Ok((it.next().unwrap(), it.next().unwrap()))
}

fn probes(seed: u64, dim: usize, count: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect())
        .collect()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            2
        }
    };
    std::process::exit(code);
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Dims(args) => cmd_dims(args, cli.format),
        Command::Check(args) => cmd_check(args, cli.format, cli.seed),
        Command::Bench(args) => cmd_bench(args, cli.format, cli.seed),
        Command::ScanGen(args) => cmd_scan_gen(args, cli.format),
    }
}

fn print_dims_report(
    kind: &str,
    spec: &str,
    report: &EquiSpaceReport,
    format: Format,
) -> i32 {
    let matched = report.is_match();
    match format {
        Format::Text => {
            println!("kind     spec                      formula  oracle  match");
            println!(
                "{kind:<8} {spec:<25} {:<8} {:<7} {}",
                report.formula_dim,
                report.nullspace_dim,
                if matched { "MATCH" } else { "MISMATCH" }
            );
        }
        Format::Json => {
            let body = json!({
                "schema": 1,
                "command": "dims",
                "kind": kind,
                "spec": spec,
                "formula_dim": report.formula_dim,
                "nullspace_dim": report.nullspace_dim,
                "match": matched,
                "singular_values": report.singular_values,
            });
            println!("{}", serde_json::to_string_pretty(&body).unwrap());
        }
    }
    i32::from(!matched)
}

fn cmd_dims(args: &DimsArgs, format: Format) -> Result<i32> {
    if let Some(pair) = &args.is_pair {
        let (a_in, a_out) = parse_pair(pair)?;
        let report = is_space_report(&a_in, &a_out).map_err(|e| anyhow!(e.to_string()))?;
        return Ok(print_dims_report("is", pair, &report, format));
    }
    if let Some(pair) = &args.multi {
        let (a1, a2) = parse_pair(pair)?;
        let report = multi_space_report(&a1, &a2).map_err(|e| anyhow!(e.to_string()))?;
        return Ok(print_dims_report("multi", pair, &report, format));
    }
    let group = args
        .group
        .as_deref()
        .ok_or_else(|| anyhow!("dims requires --group with --action, or --is, or --multi"))?;
    let action_name = args.action.as_deref().unwrap_or("regular");
    if action_name != "regular" {
        bail!("unknown action {action_name:?} for --group; only `regular` is supported");
    }
    let action = parse_action_spec(group)?;
    let spec = format!("{group} {action_name}");
    let report = equi_space_report(&action).map_err(|e| anyhow!(e.to_string()))?;
    Ok(print_dims_report("equi", &spec, &report, format))
}

struct CheckOutcome {
    name: String,
    violation: f64,
    pass: bool,
}

fn emit_check_report(outcomes: &[CheckOutcome], format: Format) -> i32 {
    let pass = outcomes.iter().all(|o| o.pass);
    let worst = outcomes.iter().map(|o| o.violation).fold(0.0, f64::max);
    match format {
        Format::Text => {
            println!("check                                    violation    status");
            for o in outcomes {
                println!(
                    "{:<40} {:<12.3e} {}",
                    o.name,
                    o.violation,
                    if o.pass { "PASS" } else { "FAIL" }
                );
            }
            println!(
                "max violation {worst:.3e} (tolerance {CHECK_TOLERANCE:.0e}): {}",
                if pass { "PASS" } else { "FAIL" }
            );
        }
        Format::Json => {
            let body = json!({
                "schema": 1,
                "command": "check",
                "tolerance": CHECK_TOLERANCE,
                "checks": outcomes.iter().map(|o| json!({
                    "name": o.name,
                    "max_violation": o.violation,
                    "pass": o.pass,
                })).collect::<Vec<_>>(),
                "max_violation": worst,
                "pass": pass,
            });
            println!("{}", serde_json::to_string_pretty(&body).unwrap());
        }
    }
    i32::from(!pass)
}

fn emit_check_error(error: &WrapError, format: Format) -> i32 {
    match format {
        Format::Text => {
            eprintln!("NonCommutativeActions: {error}");
            eprintln!(
                "hint: the requested factors do not commute on the shared space; \
                 invariant mode (--mode invariant) does not require commutativity"
            );
        }
        Format::Json => {
            let body = json!({
                "schema": 1,
                "command": "check",
                "error": "NonCommutativeActions",
                "detail": error.to_string(),
                "pass": false,
            });
            println!("{}", serde_json::to_string_pretty(&body).unwrap());
        }
    }
    1
}

fn cmd_check(args: &CheckArgs, format: Format, seed: u64) -> Result<i32> {
    let actions = parse_action_list(&args.actions)?;
    let trials = args.trials.max(1);
    let mut outcomes = Vec::new();

    for (i, action) in actions.iter().enumerate() {
        let d = action.dim();
        let model = mlp(seed.wrapping_add(i as u64), &[d, d + 3, d], Activation::Tanh);
        let wrapped = equitune(&model, action, action).map_err(|e| anyhow!(e.to_string()))?;
        let mut worst: f64 = 0.0;
        for x in probes(seed.wrapping_add(1000 + i as u64), d, trials) {
            let base = wrapped.eval(&x);
            for g in 0..action.order() {
                worst = worst.max(max_diff(
                    &wrapped.eval(&action.apply(g, &x)),
                    &action.apply(g, &base),
                ));
            }
        }
        outcomes.push(CheckOutcome {
            name: format!("equitune[{i}] |G|={}", action.order()),
            violation: worst,
            pass: worst < CHECK_TOLERANCE,
        });
    }

    if actions.len() >= 2 {
        let (a_in, a_out) = (&actions[0], &actions[1]);
        let model = mlp(
            seed.wrapping_add(500),
            &[a_in.dim(), a_in.dim() + 3, a_out.dim()],
            Activation::Tanh,
        );
        let wrapped = is_wrapper(&model, a_in, a_out).map_err(|e| anyhow!(e.to_string()))?;
        let mut worst_in: f64 = 0.0;
        let mut worst_out: f64 = 0.0;
        for x in probes(seed.wrapping_add(1500), a_in.dim(), trials) {
            let base = wrapped.eval(&x);
            for g in 0..a_in.order() {
                worst_in = worst_in.max(max_diff(&wrapped.eval(&a_in.apply(g, &x)), &base));
            }
            for h in 0..a_out.order() {
                worst_out = worst_out.max(max_diff(&a_out.apply(h, &base), &base));
            }
        }
        outcomes.push(CheckOutcome {
            name: "is-wrapper input invariance".into(),
            violation: worst_in,
            pass: worst_in == 0.0,
        });
        outcomes.push(CheckOutcome {
            name: "is-wrapper output symmetry".into(),
            violation: worst_out,
            pass: worst_out < 1e-12,
        });
    }

    let shared_space = actions.iter().all(|a| a.dim() == actions[0].dim());
    if actions.len() >= 2 && shared_space {
        let d = actions[0].dim();
        let mode = match args.mode {
            Mode::Equivariant => WrapMode::Equivariant,
            Mode::Invariant => WrapMode::Invariant,
        };
        let models: Vec<_> = (0..actions.len())
            .map(|i| mlp(seed.wrapping_add(2000 + i as u64), &[d, d + 3, d], Activation::Tanh))
            .collect();
        let wrapped = match product_equi_wrapper_n(&models, &actions, mode) {
            Ok(w) => w,
            Err(err @ WrapError::NonCommutativeActions { .. }) => {
                return Ok(emit_check_error(&err, format));
            }
            Err(e) => return Err(anyhow!(e.to_string())),
        };
        let orders: Vec<usize> = actions.iter().map(|a| a.order()).collect();
        let combos: usize = orders.iter().product();
        let mut worst: f64 = 0.0;
        for x in probes(seed.wrapping_add(3000), d, trials) {
            let base = wrapped.eval(&x);
            for t in 0..combos {
                let mut rem = t;
                let mut tuple = vec![0usize; actions.len()];
                for k in (0..actions.len()).rev() {
                    tuple[k] = rem % orders[k];
                    rem /= orders[k];
                }
                let mut moved = x.clone();
                for k in (0..actions.len()).rev() {
                    moved = actions[k].apply(tuple[k], &moved);
                }
                let got = wrapped.eval(&moved);
                let want = match mode {
                    WrapMode::Equivariant => {
                        let mut y = base.clone();
                        for k in (0..actions.len()).rev() {
                            y = actions[k].apply(tuple[k], &y);
                        }
                        y
                    }
                    WrapMode::Invariant => base.clone(),
                };
                worst = worst.max(max_diff(&got, &want));
            }
        }
        outcomes.push(CheckOutcome {
            name: format!(
                "product wrapper ({}) over {combos} transforms",
                match mode {
                    WrapMode::Equivariant => "equivariant",
                    WrapMode::Invariant => "invariant",
                }
            ),
            violation: worst,
            pass: worst < CHECK_TOLERANCE,
        });
    }

    Ok(emit_check_report(&outcomes, format))
}

fn cmd_bench(args: &BenchArgs, format: Format, seed: u64) -> Result<i32> {
    let sizes: Vec<usize> = args
        .groups
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| anyhow!("invalid group size {s:?}; expected positive integers"))
        })
        .collect::<Result<_>>()?;
    if sizes.is_empty() {
        bail!("--groups needs at least one factor size");
    }

    let dim: usize = sizes.iter().product();
    let actions = product_cyclic_actions(&sizes);
    let models: Vec<_> = (0..sizes.len())
        .map(|i| mlp(seed.wrapping_add(i as u64), &[dim, dim + 2, dim], Activation::Tanh))
        .collect();
    let wrapped = product_equi_wrapper_n(&models, &actions, WrapMode::Equivariant)
        .map_err(|e| anyhow!(e.to_string()))?;
    let x = &probes(seed.wrapping_add(9000), dim, 1)[0];

    for m in &models {
        m.reset_calls();
    }
    wrapped.eval(x);
    let sum_observed: u64 = models.iter().map(|m| m.calls()).sum();
    let evals = args.evals.max(1);
    let started = Instant::now();
    for _ in 0..evals {
        wrapped.eval(x);
    }
    let wrapper_nanos = started.elapsed().as_nanos() as u64 / evals as u64;

    let reference = mlp(seed.wrapping_add(9100), &[dim, dim + 2, dim], Activation::Tanh);
    let mut combined = actions[0].clone();
    for a in &actions[1..] {
        combined = ProductAction::new(combined, a.clone(), ProductMode::SameSpace)
            .map_err(|e| anyhow!(e.to_string()))?
            .into_action();
    }
    let reference_wrapped =
        equitune(&reference, &combined, &combined).map_err(|e| anyhow!(e.to_string()))?;
    reference_wrapped.eval(x);
    let product_observed = reference.calls();
    let started = Instant::now();
    for _ in 0..evals {
        reference_wrapped.eval(x);
    }
    let reference_nanos = started.elapsed().as_nanos() as u64 / evals as u64;

    let sum_bound: u64 = sizes.iter().map(|&n| n as u64).sum();
    let product_bound: u64 = sizes.iter().map(|&n| n as u64).product();
    let sum_budget = CallBudget { observed: sum_observed, bound: sum_bound };
    let product_budget = CallBudget { observed: product_observed, bound: product_bound };

    let counts_exact = sum_observed == sum_bound && product_observed == product_bound;
    // Strict saving applies once some factor exceeds 2 or there are more
    // than two factors, with every factor at least 2.
    let strict_applies = sizes.len() >= 2
        && sizes.iter().all(|&n| n >= 2)
        && (sizes.iter().any(|&n| n > 2) || sizes.len() > 2);
    let strict_ok = !strict_applies || sum_observed < product_observed;
    let pass = counts_exact && strict_ok && sum_budget.within() && product_budget.within();

    match format {
        Format::Text => {
            println!("factor sizes    {sizes:?} acting on dimension {dim}");
            println!("sum wrapper     {sum_observed} inner calls (bound {sum_bound}), {wrapper_nanos} ns/eval");
            println!("group averaging {product_observed} inner calls (bound {product_bound}), {reference_nanos} ns/eval");
            println!(
                "strict saving   {}",
                if strict_applies {
                    if strict_ok { "yes" } else { "VIOLATED" }
                } else {
                    "relaxed (degenerate sizes)"
                }
            );
            println!("result          {}", if pass { "PASS" } else { "FAIL" });
        }
        Format::Json => {
            let body = json!({
                "schema": 1,
                "command": "bench",
                "group_sizes": sizes,
                "dim": dim,
                "sum_calls": sum_budget,
                "product_calls": product_budget,
                "strict_saving_applies": strict_applies,
                "strict_saving_ok": strict_ok,
                "wrapper_nanos_per_eval": wrapper_nanos,
                "reference_nanos_per_eval": reference_nanos,
                "pass": pass,
            });
            println!("{}", serde_json::to_string_pretty(&body).unwrap());
        }
    }
    Ok(i32::from(!pass))
}

fn cmd_scan_gen(args: &ScanGenArgs, format: Format) -> Result<i32> {
    std::fs::create_dir_all(&args.outdir)
        .with_context(|| format!("creating {}", args.outdir.display()))?;

    let report = verify_semantic_equivariance(&standard_swaps());
    if !report.ok() {
        eprintln!(
            "refusing to write: {} equivariance violations, e.g. {:?}",
            report.violations, report.examples
        );
        return Ok(1);
    }

    let fragment = enumerate_commands_restricted(&[Direction::Left, Direction::Right]).len();
    if fragment != 20_910 {
        eprintln!("left/right fragment enumerates {fragment} commands, expected 20910");
        return Ok(1);
    }

    let splits = make_splits();
    let manifest = write_splits(&splits, &args.outdir)
        .map_err(|e| anyhow!(e.to_string()))?;

    match format {
        Format::Text => {
            println!("split                         pairs");
            for entry in &manifest.files {
                println!("{:<29} {}", entry.split, entry.pairs);
            }
            println!("total                         {}", manifest.total_pairs);
            println!(
                "equivariance: {} checks, 0 violations; left/right fragment: {fragment}",
                report.checks
            );
            println!("wrote {} files + manifest.json to {}", manifest.files.len(), args.outdir.display());
        }
        Format::Json => {
            let body = json!({
                "schema": 1,
                "command": "scan-gen",
                "outdir": args.outdir.display().to_string(),
                "manifest": manifest,
                "equivariance_checks": report.checks,
                "equivariance_violations": report.violations,
                "fragment_left_right": fragment,
                "pass": true,
            });
            println!("{}", serde_json::to_string_pretty(&body).unwrap());
        }
    }
    Ok(0)
}
