//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use purify_core::analytics::{
    classical_entropy, speedup_factor, tail_speedup_factor, verify_optimality, OptimalityConfig,
};
use purify_core::discrete::run_discrete;
use purify_core::ensemble::{derive_stream, run_ensemble, EnsembleConfig};
use purify_core::feedback::optimal_correction;
use purify_core::measurement::{average_purification, MeasurementStrength};
use purify_core::sde::{sde_step, simulate_trajectory, SdeConfig, WienerIncrement};
use purify_core::{rotate, BlochState, Rotation, Strategy};

type Check = Result<String, String>;
type Criterion = (&'static str, Option<f64>, fn() -> Check);

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(elapsed: Duration, limit_s: f64, res: Check) -> Check {
    let t = elapsed.as_secs_f64();
    match res {
        Ok(d) if t < limit_s => Ok(format!("{d}; {t:.2} s < {limit_s} s")),
        Ok(d) => Err(format!("{d}; too slow: {t:.2} s >= {limit_s} s")),
        Err(d) => Err(format!("{d}; {t:.2} s")),
    }
}

// 1. Discrete optimal recursion.
fn discrete_recursion() -> Check {
    let mut worst: f64 = 0.0;
    let seeds = 500;
    for seed in 0..seeds {
        let mut rng = derive_stream(seed, 0);
        let rows = run_discrete(0.5, 0.2, 200, &Strategy::Optimal, &mut rng).map_err(|e| e.to_string())?;
        for r in &rows {
            worst = worst.max((r.entropy - 0.5 * 0.96f64.powi(r.step as i32)).abs());
        }
    }
    ensure(worst <= 1e-12, format!("{seeds} outcome sequences, max |P_n - 0.5*0.96^n| = {worst:.2e} <= 1e-12"))
}

fn feedback_trajectory_error(dt: f64, seed: u64) -> Result<f64, String> {
    let cfg = SdeConfig::new(1.0, dt, 1.0).map_err(|e| e.to_string())?;
    let mut rng = derive_stream(seed, 0);
    let tr = simulate_trajectory(&BlochState::mixed(), &cfg, &Strategy::Optimal, &mut rng, 1)
        .map_err(|e| e.to_string())?;
    Ok(tr
        .curve
        .times()
        .iter()
        .zip(tr.curve.values())
        .map(|(&t, &p)| {
            let exact = 0.5 * (-8.0 * t).exp();
            (p - exact).abs() / exact
        })
        .fold(0.0, f64::max))
}

// 2. Continuum feedback law on single trajectories.
fn continuum_feedback_law() -> Check {
    let mut coarse: f64 = 0.0;
    let mut fine: f64 = 0.0;
    for seed in 0..3 {
        coarse = coarse.max(feedback_trajectory_error(1e-4, seed)?);
        fine = fine.max(feedback_trajectory_error(5e-5, seed)?);
    }
    let ratio = coarse / fine;
    ensure(
        coarse <= 5e-3 && (1.8..=2.2).contains(&ratio),
        format!("max rel err {coarse:.3e} at dt=1e-4 (<= 5e-3), {fine:.3e} at dt=5e-5, ratio {ratio:.3} in [1.8, 2.2]"),
    )
}

// 3. Entropy becomes deterministic under feedback.
fn deterministic_entropy() -> Check {
    let dt = 1e-4;
    let stats = run_ensemble(&EnsembleConfig {
        n_trajectories: 1000,
        master_seed: 3,
        sde: SdeConfig::new(1.0, dt, 1.0).map_err(|e| e.to_string())?,
        strategy: Strategy::Optimal,
        record_every: 10_000,
        initial: BlochState::mixed(),
    })
    .map_err(|e| e.to_string())?;
    let std = stats.final_std();
    ensure(std < 10.0 * dt, format!("std of P(T) over 1000 trajectories = {std:.3e} < {:.0e}", 10.0 * dt))
}

// 4. No-feedback ensemble against the quadrature.
fn classical_baseline() -> Check {
    let stats = run_ensemble(&EnsembleConfig {
        n_trajectories: 10_000,
        master_seed: 4,
        sde: SdeConfig::new(1.0, 1e-4, 1.0).map_err(|e| e.to_string())?,
        strategy: Strategy::None,
        record_every: 1000,
        initial: BlochState::mixed(),
    })
    .map_err(|e| e.to_string())?;
    let curve = &stats.mean_curve;
    let se = stats.stderr_curve();
    let mut worst_z: f64 = 0.0;
    let mut worst_tol: f64 = 0.0;
    let mut points = 0;
    for (i, &t) in curve.times().iter().enumerate().skip(1) {
        let q = classical_entropy(1.0, t, 1e-10).map_err(|e| e.to_string())?;
        let q_half = classical_entropy(1.0, t, 5e-11).map_err(|e| e.to_string())?;
        worst_tol = worst_tol.max((q - q_half).abs() / q_half);
        worst_z = worst_z.max((curve.values()[i] - q).abs() / se[i]);
        points += 1;
    }
    ensure(
        points == 10 && worst_z <= 3.0 && worst_tol <= 1e-10,
        format!(
            "{points} points, worst |mean - quadrature| = {worst_z:.2} SE (<= 3); rel change at halved tolerance {worst_tol:.1e} (<= 1e-10)"
        ),
    )
}

// 5. Speed-up curve.
fn speedup_curve() -> Check {
    let n = 30;
    let targets: Vec<f64> = (0..n)
        .map(|i| (0.45f64.ln() + (1e-8f64.ln() - 0.45f64.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect();
    let mut prev = 1.0;
    let mut increasing = true;
    let mut bounded = true;
    let mut gamma_gap: f64 = 0.0;
    let mut last = 0.0;
    for &p in &targets {
        let s1 = speedup_factor(p, 1.0, 1e-10).map_err(|e| e.to_string())?;
        let s3 = speedup_factor(p, 3.0, 1e-10).map_err(|e| e.to_string())?;
        increasing &= s1.factor > prev;
        bounded &= s1.factor > 1.0 && s1.factor < 2.0;
        gamma_gap = gamma_gap.max((s1.factor - s3.factor).abs());
        prev = s1.factor;
        last = s1.factor;
    }
    let quad = speedup_factor(1e-4, 1.0, 1e-10).map_err(|e| e.to_string())?.factor;
    let tail = tail_speedup_factor(1e-4, 1.0).map_err(|e| e.to_string())?.factor;
    let rel = (quad - tail).abs() / quad;
    ensure(
        increasing && bounded && gamma_gap <= 1e-6 && rel <= 0.02,
        format!(
            "{n} targets 0.45..1e-8: in (1, 2) {bounded}, strictly increasing {increasing} (reaches {last:.4}); \
             |gamma=1 - gamma=3| = {gamma_gap:.1e} (<= 1e-6); at P=1e-4 quadrature {quad:.4} vs tail {tail:.4}, rel {rel:.2e} (<= 2e-2)"
        ),
    )
}

// 6. Exhaustive optimality.
fn optimality() -> Check {
    let mut details = Vec::new();
    let mut ok = true;
    for (p0, theta0) in [(0.25, 0.0), (0.1, 0.7), (0.4, 2.5)] {
        for n in 1..=3 {
            let r = verify_optimality(&OptimalityConfig {
                n_steps: n,
                b: 0.2,
                grid_points: 37,
                p0,
                initial_polar_angle: theta0,
                node_budget: 100_000_000,
            })
            .map_err(|e| e.to_string())?;
            let pass = r.min_value >= r.closed_form - 1e-12
                && r.min_subtree_slack >= -1e-12
                && r.minimizer_always_equatorial();
            ok &= pass;
            if !pass || n == 3 {
                details.push(format!(
                    "P0={p0} n={n}: min-bound {:.1e}, worst node slack {:.1e}, off-equator minimizers {}",
                    r.gap, r.min_subtree_slack, r.non_equatorial_minimizers
                ));
            }
        }
    }
    ensure(ok, details.join("; "))
}

type Mat = [[Complex64; 2]; 2];

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn mul(a: &Mat, b: &Mat) -> Mat {
    let mut out = [[c(0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn dagger(a: &Mat) -> Mat {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

fn trace(a: &Mat) -> Complex64 {
    a[0][0] + a[1][1]
}

fn density(a: [f64; 3]) -> Mat {
    [
        [c((1.0 + a[2]) / 2.0), Complex64::new(a[0], -a[1]) / 2.0],
        [Complex64::new(a[0], a[1]) / 2.0, c((1.0 - a[2]) / 2.0)],
    ]
}

fn purity_loss(rho: &Mat) -> f64 {
    1.0 - trace(&mul(rho, rho)).re
}

fn pauli() -> [Mat; 3] {
    let (z, o, i) = (c(0.0), c(1.0), Complex64::new(0.0, 1.0));
    [[[z, o], [o, z]], [[z, -i], [i, z]], [[o, z], [z, -o]]]
}

// 7a. Brute-force measurement enumeration against the squared-contrast formula.
fn purification_oracle() -> Check {
    let mut worst_impl: f64 = 0.0;
    let mut worst_formula: f64 = 0.0;
    let mut worst_unsquared: f64 = 0.0;
    for i in 0..20 {
        let p = 0.5 * (i as f64 + 0.5) / 20.0;
        for j in 0..20 {
            let theta = PI * j as f64 / 19.0;
            for k in 0..20 {
                let b = (k as f64 + 0.5) / 20.0;
                let kappa = (1.0 + b) / 2.0;
                let r = (1.0 - 2.0 * p).sqrt();
                let rho = density([r * theta.sin(), 0.0, r * theta.cos()]);
                let (sk, sl) = (c(kappa.sqrt()), c((1.0 - kappa).sqrt()));
                let plus: Mat = [[sk, c(0.0)], [c(0.0), sl]];
                let minus: Mat = [[sl, c(0.0)], [c(0.0), sk]];
                let mut after = 0.0;
                for om in [plus, minus] {
                    let unnorm = mul(&mul(&om, &rho), &dagger(&om));
                    let prob = trace(&unnorm).re;
                    let post = unnorm.map(|row| row.map(|x| x / prob));
                    after += prob * purity_loss(&post);
                }
                let brute = p - after;

                let m = MeasurementStrength::from_b(b).map_err(|e| e.to_string())?;
                worst_impl = worst_impl.max((average_purification(p, theta, &m) - brute).abs());

                let cos2 = theta.cos().powi(2);
                let shape = |num: f64| num * p * (1.0 - (1.0 - 2.0 * p) * cos2) / (1.0 - (1.0 - 2.0 * p) * b * b * cos2);
                let contrast = 2.0 * kappa - 1.0;
                worst_formula = worst_formula.max((shape(contrast * contrast) - brute).abs());
                worst_unsquared = worst_unsquared.max((shape(contrast) - brute).abs());
            }
        }
    }
    ensure(
        worst_impl <= 1e-12 && worst_formula <= 1e-12 && worst_unsquared > 1e-3,
        format!(
            "8000 (P, theta, b) points: implementation {worst_impl:.1e}, (2k-1)^2 numerator {worst_formula:.1e} (both <= 1e-12); \
             unsquared numerator off by up to {worst_unsquared:.2e}"
        ),
    )
}

// 7b. Trace preservation of the stochastic term, and agreement with the Bloch update.
fn stochastic_term_trace() -> Check {
    let gamma: f64 = 1.3;
    let root = c((2.0 * gamma).sqrt());
    let s = pauli();
    let mut rng = StdRng::seed_from_u64(77);
    let mut worst_trace: f64 = 0.0;
    let mut worst_bloch: f64 = 0.0;
    let mut min_untraced_trace = f64::INFINITY;
    for _ in 0..1000 {
        let a = loop {
            let v = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let n2: f64 = v.iter().map(|x: &f64| x * x).sum();
            if n2 < 0.95 && v[2].abs() > 0.05 {
                break v;
            }
        };
        let rho = density(a);
        let zr = mul(&s[2], &rho);
        let rz = mul(&rho, &s[2]);
        let ez = trace(&zr);
        let mut corrected = [[c(0.0); 2]; 2];
        let mut untraced = [[c(0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let id = if i == j { c(1.0) } else { c(0.0) };
                corrected[i][j] = root * (zr[i][j] + rz[i][j] - c(2.0) * ez * rho[i][j]);
                untraced[i][j] = root * (zr[i][j] + rz[i][j] - c(2.0) * ez * id);
            }
        }
        worst_trace = worst_trace.max(trace(&corrected).norm());
        min_untraced_trace = min_untraced_trace.min(trace(&untraced).norm());

        // Diffusion coefficients of the Bloch update, which is linear in dW.
        let state = BlochState::new(a[0], a[1], a[2]).map_err(|e| e.to_string())?;
        let h = 1e-3;
        let base = sde_step(&state, gamma, 1e-6, WienerIncrement(0.0)).state.components();
        let kicked = sde_step(&state, gamma, 1e-6, WienerIncrement(h)).state.components();
        for i in 0..3 {
            let expected = trace(&mul(&s[i], &corrected)).re;
            worst_bloch = worst_bloch.max(((kicked[i] - base[i]) / h - expected).abs());
        }
    }
    ensure(
        worst_trace <= 1e-14 && worst_bloch <= 1e-10 && min_untraced_trace > 1e-2,
        format!(
            "1000 states: |Tr| of corrected term {worst_trace:.1e} (<= 1e-14), Bloch diffusion mismatch {worst_bloch:.1e} (<= 1e-10); \
             form with identity in place of rho, |Tr| >= {min_untraced_trace:.3}"
        ),
    )
}

// 7c. The axis (-cos phi, sin phi, 0) against the implemented one at phi = pi/2.
fn rotation_axis() -> Check {
    let mut worst_impl: f64 = 0.0;
    let mut best_alt = f64::INFINITY;
    let phi = FRAC_PI_2;
    for k in 1..20 {
        let theta = PI * k as f64 / 20.0;
        if (theta - FRAC_PI_2).abs() < 1e-9 {
            continue;
        }
        let r = 0.8;
        let state = BlochState::new(r * theta.sin() * phi.cos(), r * theta.sin() * phi.sin(), r * theta.cos())
            .map_err(|e| e.to_string())?;
        let cmd = optimal_correction(&state);
        worst_impl = worst_impl.max(rotate(&state, &cmd.rotation).az().abs());
        let alt_axis = [-phi.cos(), phi.sin(), 0.0];
        for angle in [cmd.alpha, -cmd.alpha] {
            let rot = Rotation::new(alt_axis, angle).map_err(|e| e.to_string())?;
            best_alt = best_alt.min(rotate(&state, &rot).az().abs());
        }
    }
    ensure(
        worst_impl <= 1e-12 && best_alt > 1e-2,
        format!("implemented axis leaves |az| <= {worst_impl:.1e}; axis (-cos phi, sin phi, 0) leaves |az| >= {best_alt:.3}"),
    )
}

fn purify(dir: &Path, args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_purify"))
        .current_dir(dir)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!("purify {}: {}", args.join(" "), String::from_utf8_lossy(&out.stderr)))
    }
}

// 8. Manifest replay under different worker counts.
fn manifest_replay() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs: [(&str, &[&str]); 6] = [
        ("discrete", &["discrete", "--steps", "50", "--strategy", "fixed-theta=1.2", "--seed", "9"]),
        ("sde-none", &["sde", "--strategy", "none", "--trajectories", "300", "--dt", "1e-3", "--noise", "gaussian", "--seed", "11"]),
        ("sde-optimal", &["sde", "--trajectories", "200", "--dt", "1e-3", "--time", "0.5", "--record-every", "10"]),
        ("classical", &["classical", "--points", "11"]),
        ("speedup", &["speedup", "--targets", "0.3,0.01,1e-5"]),
        ("optimality", &["verify-optimality", "--steps", "2", "--format", "csv"]),
    ];
    for (name, args) in runs {
        let first = format!("{name}-1.csv");
        let replay = format!("{name}-n.csv");
        let manifest = format!("{first}.manifest.json");
        let mut a: Vec<&str> = args.to_vec();
        a.extend(["--workers", "1", "--out", &first]);
        purify(dir.path(), &a)?;
        purify(
            dir.path(),
            &[args[0], "--config", &manifest, "--workers", "8", "--out", &replay],
        )?;
        let x = std::fs::read(dir.path().join(&first)).map_err(|e| e.to_string())?;
        let y = std::fs::read(dir.path().join(&replay)).map_err(|e| e.to_string())?;
        if x != y {
            return Err(format!("{name}: replay differs"));
        }
        let m1 = std::fs::read_to_string(dir.path().join(&manifest)).map_err(|e| e.to_string())?;
        let m2 = std::fs::read_to_string(dir.path().join(format!("{replay}.manifest.json"))).map_err(|e| e.to_string())?;
        let sum = |m: &str| -> Result<String, String> {
            let v: serde_json::Value = serde_json::from_str(m).map_err(|e| e.to_string())?;
            Ok(v["outputs"][0]["sha256"].as_str().unwrap_or_default().to_string())
        };
        if sum(&m1)? != sum(&m2)? {
            return Err(format!("{name}: manifest checksums differ"));
        }
    }
    Ok("6 runs (all five commands) replayed from their manifests with 8 workers; CSV byte-identical to the 1-worker run".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1  discrete optimal recursion", Some(1.0), discrete_recursion),
        ("2  continuum feedback law", Some(10.0), continuum_feedback_law),
        ("3  deterministic entropy under feedback", None, deterministic_entropy),
        ("4  no-feedback baseline", Some(60.0), classical_baseline),
        ("5  speed-up curve", None, speedup_curve),
        ("6  exhaustive optimality", Some(30.0), optimality),
        ("7a purification formula oracle", None, purification_oracle),
        ("7b stochastic term trace", None, stochastic_term_trace),
        ("7c rotation axis", None, rotation_axis),
        ("8  manifest replay", None, manifest_replay),
    ];
    let mut failures = 0;
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let res = check();
        let res = match limit {
            Some(l) => within(start.elapsed(), l, res),
            None => res.map(|d| format!("{d}; {:.2} s", start.elapsed().as_secs_f64())),
        };
        match res {
            Ok(d) => println!("criterion {name}: PASS ({d})"),
            Err(d) => {
                failures += 1;
                println!("criterion {name}: FAIL ({d})");
            }
        }
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
