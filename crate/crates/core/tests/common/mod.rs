//! Reference computations that do not go through the crate's engines.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_complex::Complex64 as C;

/// Probability per endpoint from summing complex amplitudes over all `2^n`
/// chirality paths of the half-wave-plate coin at `axis` radians, input
/// `cos(theta)|H> + e^{i phi} sin(theta)|V>` at the origin.
pub fn path_sum(n: usize, theta: f64, phi: f64, axis: f64) -> BTreeMap<i64, f64> {
    assert!(n <= 20, "path enumeration is exponential");
    let (c2, s2) = ((2.0 * axis).cos(), (2.0 * axis).sin());
    let coin = [
        [C::new(c2, 0.0), C::new(s2, 0.0)],
        [C::new(s2, 0.0), C::new(-c2, 0.0)],
    ];
    let psi = [
        C::new(theta.cos(), 0.0),
        C::from_polar(1.0, phi) * theta.sin(),
    ];

    let mut out = BTreeMap::new();
    if n == 0 {
        out.insert(0, psi[0].norm_sqr() + psi[1].norm_sqr());
        return out;
    }
    // amplitude per (endpoint, final chirality); chirality 0 = H (right), 1 = V (left)
    let mut amps: BTreeMap<(i64, usize), C> = BTreeMap::new();
    for path in 0u32..(1 << n) {
        let bit = |i: usize| ((path >> i) & 1) as usize;
        let first = bit(0);
        let mut amp = coin[first][0] * psi[0] + coin[first][1] * psi[1];
        for i in 1..n {
            amp *= coin[bit(i)][bit(i - 1)];
        }
        let x: i64 = (0..n).map(|i| if bit(i) == 0 { 1 } else { -1 }).sum();
        *amps.entry((x, bit(n - 1))).or_insert(C::new(0.0, 0.0)) += amp;
    }
    for ((x, _), a) in amps {
        *out.entry(x).or_insert(0.0) += a.norm_sqr();
    }
    out
}

/// `C(n, k) / 2^n` from exact integer arithmetic, keyed by position `2k - n`.
pub fn binomial(n: usize) -> BTreeMap<i64, f64> {
    assert!(n <= 120);
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![1u128; row.len() + 1];
        for k in 1..row.len() {
            next[k] = row[k - 1] + row[k];
        }
        row = next;
    }
    let denom = 2f64.powi(n as i32);
    row.iter()
        .enumerate()
        .map(|(k, &c)| (2 * k as i64 - n as i64, c as f64 / denom))
        .collect()
}

/// Deterministic pseudo-random initial angles `(theta, phi)` in radians.
pub fn random_specs(count: usize, seed: u64) -> Vec<(f64, f64)> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (
                rng.random_range(0.0..std::f64::consts::PI),
                rng.random_range(0.0..std::f64::consts::TAU),
            )
        })
        .collect()
}
