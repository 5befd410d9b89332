//! Acceptance gate: every criterion runs, prints one PASS/FAIL line, and the
//! test fails if any criterion does. Run with `--nocapture` to see the table.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use diffpump::diffopt::{apply_jacobian_transpose, JacobianMode};
use diffpump::engine::{
    make_preset, run_differentiable_pump, run_original_fp, IterationRecord, PumpConfig, PumpResult,
    PumpStatus, PumpTrace, RestartEvent,
};
use diffpump::generate::random_binary_instance;
use diffpump::losses::{
    feasibility_loss, hard_round, integrality_loss, soft_round, soft_round_grad, std_normal_pdf,
};
use diffpump::simplex::{enumerate_vertices_oracle, solve_relaxation, CostVector, LpStatus};
use diffpump::{MilpInstance, Point};
use diffpump_cli::report::{Aggregates, ReportRow, SuiteReport};
use diffpump_cli::suite::{list_instances, run_suite};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn bundled() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/bundled")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn traced(name: &str, seed: u64) -> PumpConfig {
    PumpConfig {
        seed,
        record_trace: true,
        ..make_preset(name).unwrap()
    }
}

fn records(r: &PumpResult) -> &[IterationRecord] {
    &r.trace.as_ref().expect("trace requested").records
}

fn fp_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut iterations, mut restarts) = (0, 0);
    for case in 0..50 {
        let n = rng.random_range(4..=12);
        let m = rng.random_range(2..=10);
        let inst = random_binary_instance(&mut rng, n, m);
        let seed: u64 = rng.random();
        let original = run_original_fp(&inst, 1000, seed, 1e-6).map_err(|e| e.to_string())?;
        let dp = run_differentiable_pump(&inst, &traced("FP", seed)).map_err(|e| e.to_string())?;
        ensure(
            (&original.status, original.iterations, original.restarts)
                == (&dp.status, dp.iterations, dp.restarts),
            || format!("case {case}: summaries differ"),
        )?;
        for (a, b) in records(&original).iter().zip(records(&dp)) {
            ensure(
                a.x_hat == b.x_hat && a.x_round == b.x_round && a.restart == b.restart,
                || format!("case {case}: iterates differ at k={}", a.k),
            )?;
        }
        iterations += dp.iterations;
        restarts += dp.restarts;
    }
    Ok(format!(
        "50 instances identical ({iterations} iterations, {restarts} restarts)"
    ))
}

fn soft_round_gradient() -> Outcome {
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for eps in [0.05, 0.15, 0.5] {
        for k in 0..1000 {
            let x = -0.5 + 2.0 * k as f64 / 999.0;
            let fd = (soft_round(x + h, eps) - soft_round(x - h, eps)) / (2.0 * h);
            worst = worst.max((fd - soft_round_grad(x, eps)).abs());
        }
    }
    ensure(worst <= 1e-7, || format!("max abs error {worst:e}"))?;
    Ok(format!("max abs error {worst:.2e}"))
}

fn perturbed_rounding() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (eps, draws) = (0.15, 100_000);
    let mut worst: f64 = 0.0;
    for x in [0.1, 0.4, 0.5, 0.9] {
        let hits: f64 = (0..draws)
            .map(|_| hard_round(x + eps * rng.sample::<f64, _>(StandardNormal)))
            .sum();
        let mean = hits / draws as f64;
        let expected = soft_round(x, eps);
        let se = (expected * (1.0 - expected) / draws as f64)
            .sqrt()
            .max(1e-12);
        let z = (mean - expected).abs() / se;
        ensure(z <= 4.0, || {
            format!("x={x}: mean {mean} vs {expected} ({z:.2} SE)")
        })?;
        worst = worst.max(z);
    }
    Ok(format!("worst deviation {worst:.2} standard errors"))
}

fn lp_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for case in 0..200 {
        let n = rng.random_range(1..=6);
        let m = rng.random_range(1..=6);
        let inst = random_binary_instance(&mut rng, n, m);
        let theta: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        let sol = solve_relaxation(&inst, &CostVector::new(theta.clone()).unwrap(), None)
            .map_err(|e| format!("case {case}: {e}"))?;
        ensure(sol.status == LpStatus::Optimal, || {
            format!("case {case}: {:?}", sol.status)
        })?;
        let best = enumerate_vertices_oracle(&inst)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|v| {
                theta
                    .iter()
                    .zip(v.values())
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min);
        let gap = (sol.objective - best).abs();
        ensure(gap <= 1e-8, || {
            format!("case {case}: {} vs {best}", sol.objective)
        })?;
        worst = worst.max(gap);
    }
    Ok(format!("200 instances, max gap {worst:.1e}"))
}

fn feasibility_loss_zero_set() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut points = 0usize;
    for case in 0..20 {
        let n = rng.random_range(2..=10);
        let m = rng.random_range(1..=10);
        let inst = random_binary_instance(&mut rng, n, m);
        for mask in 0u32..(1 << n) {
            let x: Vec<f64> = (0..n).map(|i| f64::from((mask >> i) & 1)).collect();
            let g = feasibility_loss(&inst, &x, 1e-6).map_err(|e| e.to_string())?;
            let feasible = inst.is_feasible(&x, 1e-6).map_err(|e| e.to_string())?;
            ensure((g == 0.0) == feasible, || {
                format!("case {case}, x={x:?}: g={g}, feasible={feasible}")
            })?;
            points += 1;
        }
    }
    Ok(format!("{points} binary points checked"))
}

fn curvature() -> Outcome {
    let inst = MilpInstance::binary("unit", vec![0.0], &[], vec![]).unwrap();
    let f = |x: f64, p: f64| integrality_loss(&inst, &[x], p).unwrap();
    let h = 0.01;
    let mut cells = 0;
    for k in 1..100 {
        let x = k as f64 * h;
        // The kink at 0.5 separates the two cells.
        if (x - 0.5).abs() < h / 2.0 {
            continue;
        }
        let second = |p: f64| f(x + h, p) - 2.0 * f(x, p) + f(x - h, p);
        ensure(second(0.5) <= 1e-15, || format!("p=0.5 convex at x={x}"))?;
        ensure(second(2.0) >= -1e-15, || format!("p=2 concave at x={x}"))?;
        cells += 1;
    }
    Ok(format!("{cells} grid points, both signs hold"))
}

fn perturbation_jacobian() -> Outcome {
    let inst = MilpInstance::binary("unit", vec![0.0], &[], vec![]).unwrap();
    let mode = JacobianMode::Perturbation {
        eps: 1.0,
        samples: 10_000,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let jt = apply_jacobian_transpose(
        mode,
        &inst,
        &CostVector::new(vec![0.0]).unwrap(),
        &[1.0],
        &mut rng,
    )
    .map_err(|e| e.to_string())?;
    let expected = -std_normal_pdf(0.0);
    let rel = (jt[0] - expected).abs() / expected.abs();
    ensure(rel <= 0.05, || {
        format!("{} vs {expected} ({:.1}%)", jt[0], 100.0 * rel)
    })?;
    Ok(format!(
        "{:.5} vs {expected:.5} ({:.2}% off)",
        jt[0],
        100.0 * rel
    ))
}

fn presets() -> Outcome {
    let table = [
        ("FP", 1.0, 1.0, 0.0, 1.0, 1.0),
        ("DP1", 1.0, 1.0, 0.0, 0.95, 1.0),
        ("DP2", 0.8, 1.0, 0.0, 0.1, 2.0),
        ("DP3", 0.3, 0.0, 1.0, 1.0, 1.0),
        ("DP4", 0.6, 10.0, 1e-3, 0.1, 2.0),
    ];
    for (name, eta, beta, lambda, gamma, p) in table {
        let cfg = make_preset(name).map_err(|e| e.to_string())?;
        let w = &cfg.weights;
        let got = (cfg.eta, w.beta, w.lambda, w.gamma);
        ensure(got == (eta, beta, lambda, gamma), || {
            format!("{name}: {got:?}")
        })?;
        // DP3 carries no integrality term, so its p is not part of the table.
        ensure(name == "DP3" || w.p == p, || format!("{name}: p={}", w.p))?;
        ensure(w.alpha == 0.0, || format!("{name}: alpha={}", w.alpha))?;
    }
    Ok("5 presets match".into())
}

fn metrics() -> Outcome {
    let records = (0..10)
        .map(|k| IterationRecord {
            k,
            theta: vec![0.0],
            x_hat: Point::zeros(1),
            x_round: Point::zeros(1),
            loss: None,
            restart: if [1, 3, 5, 7].contains(&k) {
                RestartEvent::Perturb
            } else {
                RestartEvent::None
            },
        })
        .collect();
    let trace = PumpTrace { records };
    let result = PumpResult {
        status: PumpStatus::IterationLimit,
        iterations: 10,
        restarts: trace.restarts(),
        wall_time: Duration::ZERO,
        trace: Some(trace),
    };
    let row = ReportRow::from_result("synthetic", &PumpConfig::default(), &result, false);
    ensure(row.restart_ratio == 0.4, || {
        format!("row ratio {}", row.restart_ratio)
    })?;
    let single = SuiteReport::new(vec![row]);
    ensure(single.aggregates.restart_ratio_overall == 0.4, || {
        format!("overall ratio {}", single.aggregates.restart_ratio_overall)
    })?;

    let files = list_instances(&bundled()).map_err(|e| e.to_string())?;
    let report =
        run_suite(&files, &make_preset("FP").unwrap(), 1, false).map_err(|e| e.to_string())?;
    let parsed = SuiteReport::parse_csv(&report.to_csv_string()).map_err(|e| e.to_string())?;
    ensure(parsed == report, || {
        "CSV round trip changed the report".into()
    })?;
    ensure(
        Aggregates::from_rows(&parsed.rows) == parsed.aggregates,
        || "aggregates do not recompute from rows".into(),
    )?;
    Ok("40% on the synthetic trace; bundled aggregates recompute".into())
}

fn bundled_smoke() -> Outcome {
    let files = list_instances(&bundled()).map_err(|e| e.to_string())?;
    ensure(files.len() == 20, || {
        format!("{} bundled instances", files.len())
    })?;
    let mut summary = Vec::new();
    for name in ["FP", "DP2", "DP3"] {
        let report =
            run_suite(&files, &make_preset(name).unwrap(), 1, false).map_err(|e| e.to_string())?;
        let found = report.rows.iter().filter(|r| r.status == "Found").count();
        ensure(found >= 18, || format!("{name} found {found}/20"))?;
        summary.push(format!("{name} {found}/20"));
    }
    Ok(summary.join(", "))
}

/// Prints fails, iterations and restart ratio per preset on the bundled suite; nothing is asserted.
fn comparison_report() {
    let files = list_instances(&bundled()).unwrap();
    println!("comparison on the bundled suite (informational):");
    println!(
        "  {:<4} {:>6} {:>11} {:>14}",
        "", "fails", "iterations", "restart ratio"
    );
    for name in ["FP", "DP2", "DP3"] {
        let a = run_suite(&files, &make_preset(name).unwrap(), 1, false)
            .unwrap()
            .aggregates;
        println!(
            "  {name:<4} {:>6} {:>11} {:>13.1}%",
            a.fails,
            a.total_iterations,
            100.0 * a.restart_ratio_overall
        );
    }
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("FP preset reproduces the original pump", fp_equivalence),
        ("soft rounding gradient", soft_round_gradient),
        ("perturbed rounding consistency", perturbed_rounding),
        ("LP matches vertex enumeration", lp_oracle),
        (
            "feasibility loss vanishes exactly on feasible points",
            feasibility_loss_zero_set,
        ),
        ("integrality loss curvature", curvature),
        (
            "perturbation Jacobian on the unit box",
            perturbation_jacobian,
        ),
        ("preset values", presets),
        ("metric definitions", metrics),
        ("bundled suite smoke", bundled_smoke),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2}s]", i + 1),
            Err(why) => {
                println!("FAIL {:>2} {name}: {why} [{secs:.2}s]", i + 1);
                failed.push(i + 1);
            }
        }
    }
    comparison_report();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
