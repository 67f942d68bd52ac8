//! Bloch-vector updates checked against explicit 2×2 density-matrix algebra.

use num_complex::Complex64;
use purify_core::measurement::{conditional_state, outcome_probabilities, MeasurementStrength};
use purify_core::sde::{sde_step, WienerIncrement};
use purify_core::{rotate, BlochState, Rotation};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Mat = [[Complex64; 2]; 2];

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
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

fn add(a: &Mat, b: &Mat, s: Complex64) -> Mat {
    let mut out = *a;
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] += s * b[i][j];
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

fn pauli() -> [Mat; 3] {
    let (z, o, i) = (c(0.0), c(1.0), Complex64::new(0.0, 1.0));
    [[[z, o], [o, z]], [[z, -i], [i, z]], [[o, z], [z, -o]]]
}

fn identity() -> Mat {
    [[c(1.0), c(0.0)], [c(0.0), c(1.0)]]
}

fn density(a: [f64; 3]) -> Mat {
    let s = pauli();
    let mut rho = identity();
    for k in 0..3 {
        rho = add(&rho, &s[k], c(a[k]));
    }
    rho.map(|row| row.map(|x| x / 2.0))
}

fn bloch(rho: &Mat) -> [f64; 3] {
    let s = pauli();
    [0, 1, 2].map(|k| trace(&mul(&s[k], rho)).re)
}

fn random_vector(rng: &mut StdRng) -> [f64; 3] {
    loop {
        let v = [0; 3].map(|_| rng.random_range(-1.0..1.0));
        if v.iter().map(|x: &f64| x * x).sum::<f64>() <= 1.0 {
            return v;
        }
    }
}

fn close(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
    a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= tol)
}

#[test]
fn rotation_matches_unitary_conjugation() {
    let mut rng = StdRng::seed_from_u64(1);
    let s = pauli();
    for _ in 0..1000 {
        let a = random_vector(&mut rng);
        let axis = loop {
            let v = random_vector(&mut rng);
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 0.1 {
                break v.map(|x| x / n);
            }
        };
        let angle = rng.random_range(-2.0 * std::f64::consts::PI..2.0 * std::f64::consts::PI);
        // U = cos(α/2)·I − i·sin(α/2)·(n·σ)
        let mut u = identity().map(|row| row.map(|x| x * (angle / 2.0).cos()));
        for k in 0..3 {
            u = add(&u, &s[k], Complex64::new(0.0, -(angle / 2.0).sin() * axis[k]));
        }
        let expected = bloch(&mul(&mul(&u, &density(a)), &dagger(&u)));

        let state = BlochState::new(a[0], a[1], a[2]).unwrap();
        let got = rotate(&state, &Rotation::new(axis, angle).unwrap()).components();
        assert!(close(got, expected, 1e-13), "{got:?} vs {expected:?}");
    }
}

#[test]
fn measurement_matches_kraus_update() {
    let mut rng = StdRng::seed_from_u64(2);
    for _ in 0..1000 {
        let a = random_vector(&mut rng);
        let kappa: f64 = rng.random_range(0.01..0.99);
        let m = MeasurementStrength::from_kappa(kappa).unwrap();
        let (sk, sl) = (c(kappa.sqrt()), c((1.0 - kappa).sqrt()));
        let plus: Mat = [[sk, c(0.0)], [c(0.0), sl]];
        let minus: Mat = [[sl, c(0.0)], [c(0.0), sk]];
        let rho = density(a);
        let state = BlochState::new(a[0], a[1], a[2]).unwrap();
        let (p_plus, p_minus) = outcome_probabilities(&state, &m);

        for (sign, om, p) in [(1i8, plus, p_plus), (-1, minus, p_minus)] {
            let unnorm = mul(&mul(&om, &rho), &dagger(&om));
            let prob = trace(&unnorm).re;
            assert!((prob - p).abs() < 1e-14);
            let expected = bloch(&unnorm.map(|row| row.map(|x| x / prob)));
            let got = conditional_state(&state, &m, sign).components();
            assert!(close(got, expected, 1e-12), "{got:?} vs {expected:?}");
        }
    }
}

#[test]
fn bloch_euler_step_matches_matrix_equation() {
    let mut rng = StdRng::seed_from_u64(3);
    let s = pauli();
    let sz = s[2];
    let gamma: f64 = 0.7;
    let dt: f64 = 1e-5;
    for _ in 0..1000 {
        let a = random_vector(&mut rng).map(|x| 0.9 * x);
        let dw = rng.random_range(-3.0..3.0) * dt.sqrt();
        let rho = density(a);
        // dρ = −γ[σz,[σz,ρ]]dt + √(2γ)(σzρ + ρσz − 2⟨σz⟩ρ)dW
        let comm = |x: &Mat| add(&mul(&sz, x), &mul(x, &sz), c(-1.0));
        let double = comm(&comm(&rho));
        let zr = mul(&sz, &rho);
        let rz = mul(&rho, &sz);
        let ez = trace(&zr);
        let mut next = add(&rho, &double, c(-gamma * dt));
        let noise = add(&add(&zr, &rz, c(1.0)), &rho, -c(2.0) * ez);
        next = add(&next, &noise, c((2.0 * gamma).sqrt() * dw));
        assert!((trace(&next).re - 1.0).abs() < 1e-14);

        let state = BlochState::new(a[0], a[1], a[2]).unwrap();
        let out = sde_step(&state, gamma, dt, WienerIncrement(dw));
        assert!(!out.clamped);
        let expected = bloch(&next);
        assert!(close(out.state.components(), expected, 1e-14));
    }
}
