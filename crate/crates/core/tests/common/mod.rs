//! Brute-force reference computations shared by the integration suites.
//! Everything here works from the raw weights `λ_{i,w}` / `μ_{i,w}` and
//! plain word vectors, never from the library's path products.

#![allow(dead_code)]

use fockshift::weights::MuSystem;
use fockshift::{Complex64, WeightSystem, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn word(letters: &[u8], n: usize) -> Word {
    Word::from_letters(letters.to_vec(), n).unwrap()
}

/// All words of length `<= max_len`, shortest first, each level in lexicographic order.
pub fn all_words(n: usize, max_len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut level = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &level {
            for i in 1..=n as u8 {
                let mut x = w.clone();
                x.push(i);
                next.push(x);
            }
        }
        next.sort();
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

pub fn lam(ws: &WeightSystem, i: u8, w: &[u8]) -> f64 {
    ws.lambda_of(i, &word(w, ws.n())).unwrap()
}

/// `W(u, w)`: weight of the path `ξ_u → ξ_{wu}`, adding the letters of `w`
/// from the right.
pub fn oracle_w(ws: &WeightSystem, u: &[u8], w: &[u8]) -> f64 {
    let mut base = u.to_vec();
    let mut prod = 1.0;
    for &c in w.iter().rev() {
        prod *= lam(ws, c, &base);
        base.insert(0, c);
    }
    prod
}

/// `μ_{i,w} = W(i,w) / W(e,w)`.
pub fn oracle_mu(ws: &WeightSystem, i: u8, w: &[u8]) -> f64 {
    oracle_w(ws, &[i], w) / oracle_w(ws, &[], w)
}

/// `W_μ(v, w)`: weight of `ξ_v → ξ_{vw}`, appending the letters of `w` left to right.
pub fn oracle_right_w(mu: impl Fn(u8, &[u8]) -> f64, v: &[u8], w: &[u8]) -> f64 {
    let mut base = v.to_vec();
    let mut prod = 1.0;
    for &c in w {
        prod *= mu(c, &base);
        base.push(c);
    }
    prod
}

pub fn explicit_mu(mu: &MuSystem) -> impl Fn(u8, &[u8]) -> f64 + '_ {
    move |i, w| mu.mu_of(i, &word(w, mu.n())).unwrap()
}

/// `w(λ) = λ_{w_1} ⋯ λ_{w_k}`.
pub fn eval(w: &[u8], lambda: &[Complex64]) -> Complex64 {
    w.iter().fold(Complex64::new(1.0, 0.0), |acc, &c| acc * lambda[c as usize - 1])
}

pub fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}

pub fn periodic_example() -> WeightSystem {
    WeightSystem::periodic2(1.0, 1.0, 2.0, 2.0, 2.0, 2.0).unwrap()
}

/// Random finite perturbation of two letters with cutoff 2.
pub fn random_finite_perturbation(rng: &mut ChaCha8Rng) -> WeightSystem {
    let entries: Vec<_> = all_words(2, 2)
        .into_iter()
        .flat_map(|w| [1u8, 2].map(|i| ((i, word(&w, 2)), 0.0)))
        .map(|(k, _)| (k, rng.gen_range(0.5..2.0)))
        .collect();
    let tail = vec![rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0)];
    WeightSystem::finite_perturbation(2, entries, tail).unwrap()
}

/// The five families used throughout the acceptance suite.
pub fn standard_families(seed: u64) -> Vec<(&'static str, WeightSystem)> {
    vec![
        ("unweighted", WeightSystem::unweighted(2).unwrap()),
        ("scaled(2,3)", WeightSystem::scaled(vec![2.0, 3.0]).unwrap()),
        ("periodic(1,1,2,2,2,2)", periodic_example()),
        ("finite_perturbation", random_finite_perturbation(&mut rng(seed))),
        ("two_letter_m(0.81,0.9)", WeightSystem::two_letter_m(0.81, 0.9).unwrap()),
    ]
}

/// A unit vector in `ℂ^n` with random phases and direction.
pub fn random_direction(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn random_phase(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
}
