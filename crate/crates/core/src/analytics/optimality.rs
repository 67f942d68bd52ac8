//! Exhaustive check that tipping the state onto the equator before every
//! measurement minimizes the mean entropy after `n` steps.
//!
//! The game tree alternates decision nodes (pick a polar angle from the grid)
//! and chance nodes (the two measurement outcomes). Backward induction over
//! the fully expanded tree gives the minimum over every adaptive strategy,
//! and along the way every subtree value is compared with `(1 − b²)^d·P`.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::{linear_entropy, rotate, BlochState};
use crate::error::{Error, Result};
use crate::feedback::tilt_to_polar_angle;
use crate::measurement::{branches, MeasurementStrength};

/// Entropies within this distance of 0 or 1/2 make every angle equivalent.
const DEGENERATE_EPS: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalityConfig {
    pub n_steps: usize,
    pub b: f64,
    /// Number of polar angles `kπ/(grid_points − 1)`; must be odd so `π/2` is on it.
    pub grid_points: usize,
    pub p0: f64,
    /// Polar angle of the initial Bloch vector.
    pub initial_polar_angle: f64,
    /// Largest number of (angle, outcome) edges the enumeration may visit.
    pub node_budget: u128,
}

impl Default for OptimalityConfig {
    fn default() -> Self {
        Self {
            n_steps: 3,
            b: 0.2,
            grid_points: 37,
            p0: 0.25,
            initial_polar_angle: 0.0,
            node_budget: 100_000_000,
        }
    }
}

/// Best achievable mean final entropy once the first angle is fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootChoice {
    pub theta: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalityReport {
    pub n_steps: usize,
    pub b: f64,
    pub p0: f64,
    pub grid_points: usize,
    /// Minimum over all strategies of the mean final entropy.
    pub min_value: f64,
    /// `(1 − b²)^n·P0`.
    pub closed_form: f64,
    pub gap: f64,
    /// Smallest `value − (1 − b²)^d·P` over every decision node and angle.
    pub min_subtree_slack: f64,
    pub decision_nodes: u64,
    pub degenerate_nodes: u64,
    /// Non-degenerate nodes where `π/2` was not the unique minimizer.
    pub non_equatorial_minimizers: u64,
    pub edges_visited: u128,
    /// Spread of the final entropies over all branches under always-`π/2` play.
    pub optimal_leaf_spread: f64,
    pub root_choices: Vec<RootChoice>,
}

impl OptimalityReport {
    pub fn minimizer_always_equatorial(&self) -> bool {
        self.non_equatorial_minimizers == 0
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    decision_nodes: u64,
    degenerate_nodes: u64,
    non_equatorial: u64,
    edges: u128,
    min_slack: f64,
}

impl Tally {
    fn new() -> Self {
        Self {
            min_slack: f64::INFINITY,
            ..Self::default()
        }
    }

    fn merge(&mut self, other: &Tally) {
        self.decision_nodes += other.decision_nodes;
        self.degenerate_nodes += other.degenerate_nodes;
        self.non_equatorial += other.non_equatorial;
        self.edges += other.edges;
        self.min_slack = self.min_slack.min(other.min_slack);
    }
}

struct Tree<'a> {
    m: MeasurementStrength,
    grid: &'a [f64],
    half: usize,
    factor: f64,
}

impl Tree<'_> {
    fn bound(&self, entropy: f64, depth: usize) -> f64 {
        self.factor.powi(depth as i32) * entropy
    }

    /// Mean final entropy when the state is tipped to `theta` and the
    /// remaining `depth − 1` steps are played optimally.
    fn choice_value(&self, state: &BlochState, theta: f64, depth: usize, tally: &mut Tally) -> f64 {
        let cmd = tilt_to_polar_angle(state, theta);
        let tipped = rotate(state, &cmd.rotation);
        let mut value = 0.0;
        for (p, post) in branches(&tipped, &self.m) {
            tally.edges += 1;
            if p > 0.0 {
                value += p * self.solve(&post, depth - 1, tally);
            }
        }
        value
    }

    fn solve(&self, state: &BlochState, depth: usize, tally: &mut Tally) -> f64 {
        let entropy = linear_entropy(state);
        if depth == 0 {
            return entropy;
        }
        tally.decision_nodes += 1;
        let values: Vec<f64> = self
            .grid
            .iter()
            .map(|&theta| self.choice_value(state, theta, depth, tally))
            .collect();
        self.score_node(entropy, depth, &values, tally)
    }

    fn score_node(&self, entropy: f64, depth: usize, values: &[f64], tally: &mut Tally) -> f64 {
        let bound = self.bound(entropy, depth);
        let best = values.iter().copied().fold(f64::INFINITY, f64::min);
        tally.min_slack = tally.min_slack.min(best - bound);

        if entropy <= DEGENERATE_EPS || entropy >= 0.5 - DEGENERATE_EPS {
            tally.degenerate_nodes += 1;
        } else {
            let at_half = values[self.half];
            let unique = values
                .iter()
                .enumerate()
                .all(|(k, &v)| k == self.half || v > at_half);
            if !unique {
                tally.non_equatorial += 1;
            }
        }
        best
    }

    fn leaf_entropies(&self, state: &BlochState, depth: usize, out: &mut Vec<f64>) {
        if depth == 0 {
            out.push(linear_entropy(state));
            return;
        }
        let cmd = tilt_to_polar_angle(state, FRAC_PI_2);
        let tipped = rotate(state, &cmd.rotation);
        for (p, post) in branches(&tipped, &self.m) {
            if p > 0.0 {
                self.leaf_entropies(&post, depth - 1, out);
            }
        }
    }
}

fn required_edges(n_steps: usize, grid_points: usize) -> Option<u128> {
    let width = 2u128.checked_mul(grid_points as u128)?;
    let mut level = 1u128;
    let mut total = 0u128;
    for _ in 0..n_steps {
        level = level.checked_mul(width)?;
        total = total.checked_add(level)?;
    }
    Some(total)
}

pub fn verify_optimality(cfg: &OptimalityConfig) -> Result<OptimalityReport> {
    if cfg.n_steps == 0 {
        return Err(Error::invalid("steps", "need at least one step"));
    }
    if !(cfg.b > 0.0 && cfg.b < 1.0) {
        return Err(Error::invalid("b", format!("{} is outside (0, 1)", cfg.b)));
    }
    if cfg.grid_points < 3 || cfg.grid_points.is_multiple_of(2) {
        return Err(Error::invalid(
            "grid",
            format!("{} points; need an odd count of at least 3", cfg.grid_points),
        ));
    }
    if !(0.0..=PI).contains(&cfg.initial_polar_angle) {
        return Err(Error::invalid("theta0", "initial polar angle outside [0, pi]"));
    }
    let required = required_edges(cfg.n_steps, cfg.grid_points).unwrap_or(u128::MAX);
    if required > cfg.node_budget {
        return Err(Error::BudgetExceeded {
            required,
            budget: cfg.node_budget,
        });
    }

    let m = MeasurementStrength::from_b(cfg.b)?;
    let equatorial = BlochState::equatorial_with_entropy(cfg.p0)?;
    let root = rotate(&equatorial, &tilt_to_polar_angle(&equatorial, cfg.initial_polar_angle).rotation);

    let last = cfg.grid_points - 1;
    let half = last / 2;
    let grid: Vec<f64> = (0..cfg.grid_points)
        .map(|k| if k == half { FRAC_PI_2 } else { k as f64 * PI / last as f64 })
        .collect();
    let tree = Tree {
        m,
        grid: &grid,
        half,
        factor: 1.0 - cfg.b * cfg.b,
    };

    // Root expanded in parallel; results come back in grid order.
    let per_choice: Vec<(f64, Tally)> = grid
        .par_iter()
        .map(|&theta| {
            let mut tally = Tally::new();
            let value = tree.choice_value(&root, theta, cfg.n_steps, &mut tally);
            (value, tally)
        })
        .collect();

    let mut tally = Tally::new();
    tally.decision_nodes += 1;
    for (_, t) in &per_choice {
        tally.merge(t);
    }
    let values: Vec<f64> = per_choice.iter().map(|(v, _)| *v).collect();
    let min_value = tree.score_node(linear_entropy(&root), cfg.n_steps, &values, &mut tally);

    let mut leaves = Vec::new();
    tree.leaf_entropies(&root, cfg.n_steps, &mut leaves);
    let (lo, hi) = leaves
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| (lo.min(p), hi.max(p)));

    let closed_form = tree.bound(cfg.p0, cfg.n_steps);
    Ok(OptimalityReport {
        n_steps: cfg.n_steps,
        b: cfg.b,
        p0: cfg.p0,
        grid_points: cfg.grid_points,
        min_value,
        closed_form,
        gap: min_value - closed_form,
        min_subtree_slack: tally.min_slack,
        decision_nodes: tally.decision_nodes,
        degenerate_nodes: tally.degenerate_nodes,
        non_equatorial_minimizers: tally.non_equatorial,
        edges_visited: tally.edges,
        optimal_leaf_spread: hi - lo,
        root_choices: grid
            .iter()
            .zip(values)
            .map(|(&theta, value)| RootChoice { theta, value })
            .collect(),
    })
}
