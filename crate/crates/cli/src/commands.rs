//! The computations behind each subcommand, producing a table and a summary.

use purify_core::analytics::{
    classical_entropy, feedback_entropy, speedup_factor, tail_speedup_factor, verify_optimality,
    OptimalityConfig,
};
use purify_core::discrete::{optimal_entropy_after, run_discrete};
use purify_core::ensemble::{derive_stream, run_ensemble, EnsembleConfig};
use purify_core::measurement::strength_from_rate;
use purify_core::sde::{recorded_steps, SdeConfig};
use purify_core::BlochState;
use serde_json::{json, Map, Value};

use crate::config::{ClassicalConfig, DiscreteConfig, OptimalityRunConfig, SdeRunConfig, SpeedupConfig};
use crate::error::CliError;
use crate::output::{col, Cell, Table};

pub struct CommandOutput {
    pub table: Table,
    pub summary: Map<String, Value>,
}

fn summary(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

pub fn discrete(cfg: &DiscreteConfig) -> Result<CommandOutput, CliError> {
    let mut rng = derive_stream(cfg.seed, 0);
    let records = run_discrete(cfg.p0, cfg.b, cfg.steps, &cfg.strategy, &mut rng)?;
    let mut table = Table::new(vec![
        col("step", "count"),
        col("P", "1"),
        col("P_optimal_reference", "1"),
        col("alpha_applied", "rad"),
        col("alpha_schedule", "rad"),
        col("outcome", "sign"),
        col("outcome_independent", "bool"),
    ]);
    for r in &records {
        table.push(vec![
            Cell::Int(r.step as i64),
            r.entropy.into(),
            optimal_entropy_after(cfg.p0, cfg.b, r.step).into(),
            r.alpha.into(),
            r.alpha_schedule.into(),
            Cell::Int(i64::from(r.outcome)),
            Cell::Bool(r.outcome_independent),
        ]);
    }
    let last = records.last().expect("row 0 always present");
    let reference = optimal_entropy_after(cfg.p0, cfg.b, cfg.steps);
    Ok(CommandOutput {
        table,
        summary: summary(vec![
            ("final_P", json!(last.entropy)),
            ("optimal_reference_final_P", json!(reference)),
            ("max_abs_deviation_from_reference", json!(records
                .iter()
                .map(|r| (r.entropy - optimal_entropy_after(cfg.p0, cfg.b, r.step)).abs())
                .fold(0.0, f64::max))),
            ("all_outcome_independent", json!(records.iter().all(|r| r.outcome_independent))),
        ]),
    })
}

pub fn sde(cfg: &SdeRunConfig) -> Result<CommandOutput, CliError> {
    let sde = SdeConfig::new(cfg.gamma, cfg.dt, cfg.time)?
        .with_noise(cfg.noise)
        .with_scheme(cfg.scheme);
    let ens = EnsembleConfig {
        n_trajectories: cfg.trajectories,
        master_seed: cfg.seed,
        sde,
        strategy: cfg.strategy.clone(),
        record_every: cfg.record_every,
        initial: BlochState::equatorial_with_entropy(cfg.p0)?,
    };
    let stats = run_ensemble(&ens)?;

    let factor = {
        let m = strength_from_rate(cfg.gamma, cfg.dt)?;
        1.0 - m.b() * m.b()
    };
    let from_mixed = cfg.p0 == 0.5;
    let steps = recorded_steps(sde.n_steps(), cfg.record_every);
    let curve = &stats.mean_curve;
    let stderr = stats.stderr_curve();

    let mut table = Table::new(vec![
        col("t", "time"),
        col("P_mean", "1"),
        col("P_stderr", "1"),
        col("P_feedback_recursion", "1"),
        col("P_feedback_continuum", "1"),
        col("P_classical", "1"),
    ]);
    for (i, (&t, &p)) in curve.times().iter().zip(curve.values()).enumerate() {
        let classical = if from_mixed {
            Some(classical_entropy(cfg.gamma, t, cfg.rel_tol)?)
        } else {
            None
        };
        table.push(vec![
            t.into(),
            p.into(),
            stderr[i].into(),
            (cfg.p0 * factor.powi(steps[i] as i32)).into(),
            feedback_entropy(cfg.p0, cfg.gamma, t).into(),
            classical.into(),
        ]);
    }
    Ok(CommandOutput {
        table,
        summary: summary(vec![
            ("trajectories", json!(cfg.trajectories)),
            ("final_P_mean", json!(curve.last_value())),
            ("final_P_stderr", json!(stderr.last())),
            ("final_P_std", json!(stats.final_std())),
            ("clamp_events", json!(stats.clamp_events)),
            ("total_steps", json!(stats.total_steps)),
        ]),
    })
}

pub fn classical(cfg: &ClassicalConfig) -> Result<CommandOutput, CliError> {
    if cfg.points < 2 {
        return Err(CliError::Config("points must be at least 2".into()));
    }
    if !(cfg.time > 0.0 && cfg.time.is_finite()) {
        return Err(CliError::Config(format!("time must be positive, got {}", cfg.time)));
    }
    let half_tol = cfg.rel_tol / 2.0;
    let mut table = Table::new(vec![col("t", "time"), col("P_classical", "1"), col("P_feedback", "1")]);
    let mut max_diff: f64 = 0.0;
    for i in 0..cfg.points {
        let t = cfg.time * i as f64 / (cfg.points - 1) as f64;
        let p = classical_entropy(cfg.gamma, t, cfg.rel_tol)?;
        if half_tol >= 1e-14 {
            let q = classical_entropy(cfg.gamma, t, half_tol)?;
            max_diff = max_diff.max((p - q).abs() / q.max(f64::MIN_POSITIVE));
        }
        table.push(vec![t.into(), p.into(), feedback_entropy(0.5, cfg.gamma, t).into()]);
    }
    Ok(CommandOutput {
        table,
        summary: summary(vec![("max_rel_change_at_half_tolerance", json!(max_diff))]),
    })
}

/// Returns the table plus `(purity, speed-up)` pairs for plotting.
pub fn speedup(cfg: &SpeedupConfig) -> Result<(CommandOutput, Vec<(f64, f64)>), CliError> {
    if cfg.targets.is_empty() {
        return Err(CliError::Config("no target entropies given".into()));
    }
    let mut table = Table::new(vec![
        col("final_P", "1"),
        col("purity", "1"),
        col("t_feedback", "time"),
        col("t_classical", "time"),
        col("speedup", "1"),
        col("speedup_tail_model", "1"),
    ]);
    let mut points = Vec::with_capacity(cfg.targets.len());
    for &p in &cfg.targets {
        let s = speedup_factor(p, cfg.gamma, cfg.rel_tol)?;
        let tail = tail_speedup_factor(p, cfg.gamma)?;
        table.push(vec![
            s.final_entropy.into(),
            s.purity.into(),
            s.t_feedback.into(),
            s.t_classical.into(),
            s.factor.into(),
            tail.factor.into(),
        ]);
        points.push((s.purity, s.factor));
    }
    let max = points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let min = points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    Ok((
        CommandOutput {
            table,
            summary: summary(vec![("max_speedup", json!(max)), ("min_speedup", json!(min))]),
        },
        points,
    ))
}

pub fn verify(cfg: &OptimalityRunConfig) -> Result<CommandOutput, CliError> {
    let report = verify_optimality(&OptimalityConfig {
        n_steps: cfg.steps,
        b: cfg.b,
        grid_points: cfg.grid,
        p0: cfg.p0,
        initial_polar_angle: cfg.theta0,
        node_budget: u128::from(cfg.budget),
    })?;
    let mut table = Table::new(vec![
        col("theta", "rad"),
        col("best_mean_final_P", "1"),
        col("equatorial", "bool"),
    ]);
    let half = report.root_choices.len() / 2;
    for (k, c) in report.root_choices.iter().enumerate() {
        table.push(vec![c.theta.into(), c.value.into(), Cell::Bool(k == half)]);
    }
    Ok(CommandOutput {
        table,
        summary: summary(vec![
            ("min_value", json!(report.min_value)),
            ("closed_form", json!(report.closed_form)),
            ("gap", json!(report.gap)),
            ("min_subtree_slack", json!(report.min_subtree_slack)),
            ("decision_nodes", json!(report.decision_nodes)),
            ("degenerate_nodes", json!(report.degenerate_nodes)),
            ("non_equatorial_minimizers", json!(report.non_equatorial_minimizers)),
            ("minimizer_always_equatorial", json!(report.minimizer_always_equatorial())),
            ("edges_visited", json!(u64::try_from(report.edges_visited).unwrap_or(u64::MAX))),
            ("optimal_leaf_spread", json!(report.optimal_leaf_spread)),
        ]),
    })
}
