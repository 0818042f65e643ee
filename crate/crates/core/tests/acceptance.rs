//! Acceptance suite: one test per criterion, each printing a PASS line
//! (visible with `cargo test --test acceptance -- --nocapture`).

use equikit::scan::{
    enumerate_commands, enumerate_commands_restricted, interpret, make_splits, standard_swaps,
    verify_semantic_equivariance, write_splits, Direction,
};
use equikit::{
    alt_is_wrapper, cyclic_group, equi_space_report, equitune, grid_action, is_space_report,
    is_wrapper, mlp, multi_equi_dim, multi_input_wrapper, multi_space_report,
    product_cyclic_actions, product_equi_wrapper, product_equi_wrapper_n, project_equivariant,
    project_invariant_symmetric, regular_action, word_swap_action, Activation, BlackBoxModel,
    CallBudget, ChannelActions, GridKind, LinearMap, PermAction, ProductAction, ProductMode,
    WrapError, WrapMode,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::time::Instant;

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn probes(seed: u64, dim: usize, count: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect())
        .collect()
}

fn battery() -> Vec<(&'static str, PermAction)> {
    let tensor = product_cyclic_actions(&[4, 2]);
    let same_space =
        ProductAction::new(tensor[0].clone(), tensor[1].clone(), ProductMode::SameSpace)
            .unwrap()
            .into_action();
    let block = ProductAction::new(
        regular_action(&cyclic_group(2)),
        regular_action(&cyclic_group(2)),
        ProductMode::BlockDiagonal,
    )
    .unwrap()
    .into_action();
    vec![
        ("trivial-1", PermAction::trivial(1)),
        ("trivial-3", PermAction::trivial(3)),
        ("cyclic-2-regular", regular_action(&cyclic_group(2))),
        ("cyclic-3-regular", regular_action(&cyclic_group(3))),
        ("cyclic-4-regular", regular_action(&cyclic_group(4))),
        ("rot90-2x2", grid_action(GridKind::Rot90, 2)),
        ("rot90-3x3", grid_action(GridKind::Rot90, 3)),
        ("flip-2x2", grid_action(GridKind::Flip, 2)),
        ("flip-3x3", grid_action(GridKind::Flip, 3)),
        ("word-swap-4", word_swap_action(4, 0, 2)),
        ("product-4x2-same-space", same_space),
        ("product-2x2-block", block),
    ]
}

#[test]
fn criterion_1_dimension_formulas_match_the_oracle() {
    let start = Instant::now();
    let configs = battery();
    assert!(configs.len() >= 12);

    for (name, action) in &configs {
        let report = equi_space_report(action).unwrap();
        assert!(
            report.is_match(),
            "commutant dimension mismatch for {name}: formula {} vs oracle {}",
            report.formula_dim,
            report.nullspace_dim
        );
    }

    let mut is_pairs: Vec<(String, &PermAction, &PermAction)> = configs
        .iter()
        .map(|(name, a)| (format!("{name}/self"), a, a))
        .collect();
    let by_name = |wanted: &str| &configs.iter().find(|(n, _)| *n == wanted).unwrap().1;
    is_pairs.push((
        "cyclic-2-in/cyclic-4-out".into(),
        by_name("cyclic-2-regular"),
        by_name("cyclic-4-regular"),
    ));
    is_pairs.push((
        "trivial-3-in/cyclic-2-out".into(),
        by_name("trivial-3"),
        by_name("cyclic-2-regular"),
    ));
    is_pairs.push((
        "rot90-3x3-in/flip-3x3-out".into(),
        by_name("rot90-3x3"),
        by_name("flip-3x3"),
    ));
    for (label, a_in, a_out) in &is_pairs {
        let report = is_space_report(a_in, a_out).unwrap();
        assert!(
            report.is_match(),
            "invariant-symmetric dimension mismatch for {label}: formula {} vs oracle {}",
            report.formula_dim,
            report.nullspace_dim
        );
    }

    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "criterion 1 battery took {elapsed:?}, budget is 10 s"
    );
    println!(
        "ACCEPTANCE 1 dimension-formulas-vs-oracle: PASS ({} commutant + {} cross configs in {elapsed:?})",
        configs.len(),
        is_pairs.len()
    );
}

#[test]
fn criterion_2_two_channel_dimension_matches_the_block_oracle() {
    let z2 = regular_action(&cyclic_group(2));
    let z3 = regular_action(&cyclic_group(3));
    let z4 = regular_action(&cyclic_group(4));
    let t2 = PermAction::trivial(2);
    let rot2 = grid_action(GridKind::Rot90, 2);
    let flip2 = grid_action(GridKind::Flip, 2);

    // Hand-derived anchor.
    assert_eq!(multi_equi_dim(&z2, &z2).unwrap(), 6);

    let pairs: Vec<(&str, &PermAction, &PermAction)> = vec![
        ("z2/z2", &z2, &z2),
        ("z2/z3", &z2, &z3),
        ("z2/z4", &z2, &z4),
        ("z3/z4", &z3, &z4),
        ("trivial2/z2", &t2, &z2),
        ("rot90-2x2/flip-2x2", &rot2, &flip2),
    ];
    assert!(pairs.len() >= 6);
    for (label, a1, a2) in &pairs {
        let report = multi_space_report(a1, a2).unwrap();
        assert!(
            report.is_match(),
            "two-channel dimension mismatch for {label}: formula {} vs oracle {}",
            report.formula_dim,
            report.nullspace_dim
        );
    }
    println!(
        "ACCEPTANCE 2 two-channel-dimension-vs-block-oracle: PASS ({} pairs, z2/z2 = 6)",
        pairs.len()
    );
}

#[test]
fn criterion_3_wrapper_equivariance_sweeps() {
    const TOL: f64 = 1e-9;

    // Group-averaged single models over several actions.
    let mut worst: f64 = 0.0;
    for (seed, action) in [
        (1u64, regular_action(&cyclic_group(4))),
        (2, grid_action(GridKind::Rot90, 2)),
        (3, grid_action(GridKind::Flip, 3)),
        (4, word_swap_action(5, 1, 4)),
    ]
    .into_iter()
    {
        let d = action.dim();
        let wrapped = equitune(&mlp(seed, &[d, d + 3, d], Activation::Tanh), &action, &action)
            .unwrap();
        for x in probes(seed, d, 5) {
            let base = wrapped.eval(&x);
            for g in 0..action.order() {
                let violation = max_diff(
                    &wrapped.eval(&action.apply(g, &x)),
                    &action.apply(g, &base),
                );
                worst = worst.max(violation);
            }
        }
    }
    assert!(worst < TOL, "equituned violation {worst}");

    // Two-input model: every output channel follows its own group while the
    // other input moves arbitrarily.
    let z2 = regular_action(&cyclic_group(2));
    let z4 = regular_action(&cyclic_group(4));
    let diagonal = [
        mlp(10, &[2, 5, 2], Activation::Tanh),
        mlp(11, &[4, 5, 4], Activation::Tanh),
    ];
    let mut cross = BTreeMap::new();
    cross.insert((0usize, 1usize), mlp(12, &[2, 7, 4], Activation::Tanh));
    cross.insert((1usize, 0usize), mlp(13, &[4, 7, 2], Activation::Tanh));
    let actions = vec![
        ChannelActions { input: z2.clone(), output: z2.clone() },
        ChannelActions { input: z4.clone(), output: z4.clone() },
    ];
    let model = multi_input_wrapper(&diagonal, &cross, &actions).unwrap();
    let mut worst_multi: f64 = 0.0;
    for (x1, x2) in probes(20, 2, 3).into_iter().zip(probes(21, 4, 3)) {
        let base = model.eval(&[x1.clone(), x2.clone()]);
        for g1 in 0..2 {
            for g2 in 0..4 {
                let moved = model.eval(&[z2.apply(g1, &x1), z4.apply(g2, &x2)]);
                worst_multi = worst_multi.max(max_diff(&moved[0], &z2.apply(g1, &base[0])));
                worst_multi = worst_multi.max(max_diff(&moved[1], &z4.apply(g2, &base[1])));
            }
        }
    }
    assert!(worst_multi < TOL, "multi-input violation {worst_multi}");

    // Product-group wrapper over commuting factors.
    let tensor = product_cyclic_actions(&[4, 2]);
    let m1 = mlp(30, &[8, 10, 8], Activation::Tanh);
    let m2 = mlp(31, &[8, 10, 8], Activation::Tanh);
    let wrapped =
        product_equi_wrapper(&m1, &m2, &tensor[0], &tensor[1], WrapMode::Equivariant).unwrap();
    let mut worst_product: f64 = 0.0;
    for x in probes(32, 8, 3) {
        let base = wrapped.eval(&x);
        for g1 in 0..4 {
            for g2 in 0..2 {
                let moved_in = tensor[0].apply(g1, &tensor[1].apply(g2, &x));
                let moved_out = tensor[0].apply(g1, &tensor[1].apply(g2, &base));
                worst_product = worst_product.max(max_diff(&wrapped.eval(&moved_in), &moved_out));
            }
        }
    }
    assert!(worst_product < TOL, "product-wrapper violation {worst_product}");

    // Invariant-symmetric wrapper: input side exact, output side 1e-12.
    let rot = grid_action(GridKind::Rot90, 2);
    let wrapped = is_wrapper(&mlp(40, &[4, 6, 2], Activation::Tanh), &rot, &z2).unwrap();
    let mut worst_sym: f64 = 0.0;
    for x in probes(41, 4, 5) {
        let base = wrapped.eval(&x);
        for g in 0..4 {
            assert_eq!(
                wrapped.eval(&rot.apply(g, &x)),
                base,
                "input invariance must be exact"
            );
        }
        for h in 0..2 {
            worst_sym = worst_sym.max(max_diff(&z2.apply(h, &base), &base));
        }
    }
    assert!(worst_sym < 1e-12, "output symmetry violation {worst_sym}");

    // Test of the test: the raw model must fail the same sweep.
    let raw = mlp(1, &[4, 7, 4], Activation::Tanh);
    let action = regular_action(&cyclic_group(4));
    let mut raw_worst: f64 = 0.0;
    for x in probes(1, 4, 5) {
        let base = raw.eval(&x);
        for g in 0..4 {
            raw_worst = raw_worst.max(max_diff(&raw.eval(&action.apply(g, &x)), &action.apply(g, &base)));
        }
    }
    assert!(
        raw_worst > TOL,
        "an unwrapped model should violate equivariance, worst {raw_worst}"
    );

    println!(
        "ACCEPTANCE 3 wrapper-equivariance: PASS (equituned {worst:.2e}, multi {worst_multi:.2e}, product {worst_product:.2e}, symmetry {worst_sym:.2e}; raw model fails at {raw_worst:.2e})"
    );
}

#[test]
fn criterion_4_linear_regime_equivalences() {
    let z4 = regular_action(&cyclic_group(4));
    let z2 = regular_action(&cyclic_group(2));
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let l = LinearMap::from_fn(2, 4, |_, _| rng.gen_range(-2.0..=2.0));

    // Averaging a linear model equals projecting its matrix.
    let wrapped = is_wrapper(&BlackBoxModel::linear(&l), &z4, &z2).unwrap();
    let projected = project_invariant_symmetric(&l, &z4, &z2).unwrap();
    let mut worst_proj: f64 = 0.0;
    for x in probes(51, 4, 5) {
        worst_proj = worst_proj.max(max_diff(&wrapped.eval(&x), &projected.apply(&x)));
    }
    assert!(worst_proj < 1e-12, "projector equivalence violation {worst_proj}");

    let lsq = LinearMap::from_fn(4, 4, |_, _| rng.gen_range(-2.0..=2.0));
    let eq_wrapped = equitune(&BlackBoxModel::linear(&lsq), &z4, &z4).unwrap();
    let eq_projected = project_equivariant(&lsq, &z4).unwrap();
    let mut worst_eq: f64 = 0.0;
    for x in probes(52, 4, 5) {
        worst_eq = worst_eq.max(max_diff(&eq_wrapped.eval(&x), &eq_projected.apply(&x)));
    }
    assert!(worst_eq < 1e-12, "equivariant projector equivalence violation {worst_eq}");

    // Both symmetrization orders agree on linear models...
    let lin = BlackBoxModel::linear(&l);
    let order_after = is_wrapper(&lin, &z4, &z2).unwrap();
    let order_before = alt_is_wrapper(&lin, &z4, &z2).unwrap();
    let mut worst_orders: f64 = 0.0;
    for x in probes(53, 4, 5) {
        worst_orders = worst_orders.max(max_diff(&order_after.eval(&x), &order_before.eval(&x)));
    }
    assert!(worst_orders < 1e-9, "linear order equivalence violation {worst_orders}");

    // ...and split apart on an elementwise square.
    let square = BlackBoxModel::from_fn(2, 2, |x| x.iter().map(|v| v * v).collect());
    let w1 = is_wrapper(&square, &z2, &z2).unwrap();
    let w2 = alt_is_wrapper(&square, &z2, &z2).unwrap();
    let probe = [1.0, 2.0];
    assert_eq!(w1.eval(&probe), vec![2.5, 2.5]);
    assert_eq!(w2.eval(&probe), vec![4.5, 4.5]);
    let gap = max_diff(&w1.eval(&probe), &w2.eval(&probe));
    assert!(gap > 1e-3, "nonlinear gap {gap} too small");

    println!(
        "ACCEPTANCE 4 linear-regime-equivalences: PASS (projector {worst_proj:.2e}, orders {worst_orders:.2e}, nonlinear gap {gap})"
    );
}

#[test]
fn criterion_5_call_count_accounting() {
    // Two factors of sizes 4 and 2 on one 8-dimensional space.
    let tensor = product_cyclic_actions(&[4, 2]);
    let m1 = mlp(60, &[8, 9, 8], Activation::Tanh);
    let m2 = mlp(61, &[8, 9, 8], Activation::Tanh);
    let wrapped =
        product_equi_wrapper(&m1, &m2, &tensor[0], &tensor[1], WrapMode::Equivariant).unwrap();
    let x = &probes(62, 8, 1)[0];
    wrapped.eval(x);
    let sum_calls = m1.calls() + m2.calls();
    let sum_budget = CallBudget { observed: sum_calls, bound: 4 + 2 };
    assert_eq!(sum_calls, 6, "sum-cost wrapper must make |G1|+|G2| calls");
    assert!(sum_budget.within());

    let reference = mlp(63, &[8, 9, 8], Activation::Tanh);
    let product_action =
        ProductAction::new(tensor[0].clone(), tensor[1].clone(), ProductMode::SameSpace)
            .unwrap()
            .into_action();
    let reference_wrapped = equitune(&reference, &product_action, &product_action).unwrap();
    reference_wrapped.eval(x);
    assert_eq!(reference.calls(), 8, "group averaging must make |G1|*|G2| calls");
    assert!(sum_calls < reference.calls(), "strict saving expected for (4, 2)");

    // Three order-2 factors swapping disjoint slot pairs of a 6-vector.
    let swaps = [
        word_swap_action(6, 0, 1),
        word_swap_action(6, 2, 3),
        word_swap_action(6, 4, 5),
    ];
    let models = [
        mlp(70, &[6, 7, 6], Activation::Tanh),
        mlp(71, &[6, 7, 6], Activation::Tanh),
        mlp(72, &[6, 7, 6], Activation::Tanh),
    ];
    let wrapped =
        product_equi_wrapper_n(&models, &swaps, WrapMode::Equivariant).unwrap();
    let y = &probes(73, 6, 1)[0];
    wrapped.eval(y);
    let triple_sum: u64 = models.iter().map(|m| m.calls()).sum();
    assert_eq!(triple_sum, 6);

    let reference3 = mlp(74, &[6, 7, 6], Activation::Tanh);
    let pair = ProductAction::new(swaps[0].clone(), swaps[1].clone(), ProductMode::SameSpace)
        .unwrap()
        .into_action();
    let triple = ProductAction::new(pair, swaps[2].clone(), ProductMode::SameSpace)
        .unwrap()
        .into_action();
    assert_eq!(triple.order(), 8);
    let reference3_wrapped = equitune(&reference3, &triple, &triple).unwrap();
    reference3_wrapped.eval(y);
    assert_eq!(reference3.calls(), 8);
    assert!(triple_sum < reference3.calls(), "strict saving expected for (2, 2, 2)");

    // The orbit-summing wrapper stays within its own bound too.
    let m = mlp(80, &[4, 2], Activation::Tanh);
    let rot = grid_action(GridKind::Rot90, 2);
    let z2 = regular_action(&cyclic_group(2));
    let sym = is_wrapper(&m, &rot, &z2).unwrap();
    sym.eval(&probes(81, 4, 1)[0]);
    let budget = CallBudget { observed: m.calls(), bound: rot.order() as u64 };
    assert!(budget.within());
    assert_eq!(m.calls(), 4);

    println!(
        "ACCEPTANCE 5 call-count-accounting: PASS ((4,2): 6 vs 8; (2,2,2): 6 vs 8; orbit sum within |G|)"
    );
}

#[test]
fn criterion_6_command_dataset_semantics() {
    let start = Instant::now();

    // Pinned translations.
    let commands = enumerate_commands();
    let by_text: std::collections::HashMap<String, String> = commands
        .iter()
        .map(|c| (c.to_string(), interpret(c).to_string()))
        .collect();
    assert_eq!(by_text["jump"], "JUMP");
    assert_eq!(by_text["turn around left"], "LTURN LTURN LTURN LTURN");
    assert_eq!(by_text["jump left twice"], "LTURN JUMP LTURN JUMP");
    assert_eq!(by_text["walk after run"], "RUN WALK");
    assert_eq!(by_text["turn opposite up"], "UTURN UTURN");

    // Exhaustive equivariance over the product group of the three swaps.
    let report = verify_semantic_equivariance(&standard_swaps());
    assert_eq!(report.group_elements, 8);
    assert_eq!(report.checks, commands.len() * 8);
    assert_eq!(report.violations, 0, "violations: {:?}", report.examples);

    // External cross-check: the two-direction fragment has the original size.
    let fragment = enumerate_commands_restricted(&[Direction::Left, Direction::Right]);
    assert_eq!(fragment.len(), 20_910);
    assert_eq!(commands.len(), 73_920);

    // Byte-reproducible split files.
    let splits = make_splits();
    assert_eq!(splits.total_pairs(), commands.len());
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let manifest_a = write_splits(&splits, dir_a.path()).unwrap();
    let manifest_b = write_splits(&splits, dir_b.path()).unwrap();
    assert_eq!(manifest_a.files.len(), 5);
    for entry in &manifest_a.files {
        let a = std::fs::read(dir_a.path().join(&entry.file)).unwrap();
        let b = std::fs::read(dir_b.path().join(&entry.file)).unwrap();
        assert_eq!(a, b, "split {} differs between runs", entry.split);
        assert!(!a.is_empty() || entry.pairs == 0);
    }
    assert_eq!(
        std::fs::read(dir_a.path().join("manifest.json")).unwrap(),
        std::fs::read(dir_b.path().join("manifest.json")).unwrap()
    );
    assert_eq!(manifest_a.total_pairs, manifest_b.total_pairs);

    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "criterion 6 took {elapsed:?}, budget is 60 s"
    );
    println!(
        "ACCEPTANCE 6 command-dataset-semantics: PASS ({} commands, {} checks, fragment 20910, bytes stable, {elapsed:?})",
        commands.len(),
        report.checks
    );
}

#[test]
fn criterion_7_noncommutative_guard() {
    let rot = grid_action(GridKind::Rot90, 4);
    let flip = grid_action(GridKind::Flip, 4);
    let m1 = mlp(90, &[16, 12, 16], Activation::Tanh);
    let m2 = mlp(91, &[16, 12, 16], Activation::Tanh);

    let err = product_equi_wrapper(&m1, &m2, &rot, &flip, WrapMode::Equivariant).unwrap_err();
    assert_eq!(err, WrapError::NonCommutativeActions { left: 0, right: 1 });

    // Invariance does not need commutativity: the same pair passes, and the
    // output ignores all eight combined transforms.
    let c1 = mlp(92, &[16, 12, 5], Activation::Tanh);
    let c2 = mlp(93, &[16, 12, 5], Activation::Tanh);
    let wrapped = product_equi_wrapper(&c1, &c2, &rot, &flip, WrapMode::Invariant).unwrap();
    for x in probes(94, 16, 3) {
        let base = wrapped.eval(&x);
        for g1 in 0..4 {
            for g2 in 0..2 {
                let moved = rot.apply(g1, &flip.apply(g2, &x));
                assert_eq!(wrapped.eval(&moved), base, "g1={g1} g2={g2}");
            }
        }
    }
    c1.reset_calls();
    c2.reset_calls();
    wrapped.eval(&probes(95, 16, 1)[0]);
    assert_eq!(c1.calls() + c2.calls(), 6);

    println!(
        "ACCEPTANCE 7 noncommutative-guard: PASS (equivariant request refused, invariant mode exact under all 8 transforms)"
    );
}
