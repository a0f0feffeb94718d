//! Floating-point reference routines shared by the integration tests. They
//! share no code with the library, so agreement is independent evidence.

#![allow(dead_code)]

use num_complex::Complex64;

use mahler_forge::qpoly::rational::to_f64;
use mahler_forge::qpoly::{GPoly, QPoly};

pub fn qpoly_f64(p: &QPoly) -> Vec<Complex64> {
    p.coeffs().iter().map(|c| Complex64::new(to_f64(c), 0.0)).collect()
}

pub fn gpoly_f64(p: &GPoly) -> Vec<Complex64> {
    p.coeffs()
        .iter()
        .map(|c| {
            let (re, im) = c.to_f64();
            Complex64::new(re, im)
        })
        .collect()
}

/// `Σ c_k z^k`.
pub fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

fn horner_with_derivative(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    c.iter().rev().fold((zero, zero), |(p, dp), &a| (p * z + a, dp * z + p))
}

/// All roots of `Σ c_k z^k` by Aberth–Ehrlich iteration, with multiplicity.
pub fn roots(c: &[Complex64]) -> Vec<Complex64> {
    let mut c = c.to_vec();
    while c.len() > 1 && c.last().unwrap().norm() == 0.0 {
        c.pop();
    }
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let c: Vec<Complex64> = c.iter().map(|a| a / lead).collect();
    // Fujiwara-type bound for the starting circle
    let cap = (0..n)
        .map(|k| c[k].norm().powf(1.0 / (n - k) as f64))
        .fold(0.0f64, f64::max)
        * 2.0
        + 1e-3;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(cap, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (p, dp) = horner_with_derivative(&c, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let w = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| Complex64::new(1.0, 0.0) / (z[k] - z[j]))
                .sum();
            let step = w / (Complex64::new(1.0, 0.0) - w * s);
            if step.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Groups nearby values into clusters `(representative, count)`.
pub fn cluster(points: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    for &p in points {
        match out.iter_mut().find(|(q, _)| (p - *q).norm() <= tol * (1.0 + q.norm())) {
            Some(entry) => entry.1 += 1,
            None => out.push((p, 1)),
        }
    }
    out
}
