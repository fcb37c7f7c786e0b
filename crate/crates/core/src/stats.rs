//! Position distributions and the analytics used to compare them.

use serde::Serialize;

use crate::{Error, Result};

/// Probability over lattice positions after `step_count` steps from `origin`.
///
/// Stored densely from `min_position`. Positions outside the stored range have
/// probability zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    origin: i64,
    min_position: i64,
    probabilities: Vec<f64>,
    step_count: usize,
}

impl Distribution {
    pub fn from_dense(
        origin: i64,
        min_position: i64,
        probabilities: Vec<f64>,
        step_count: usize,
    ) -> Self {
        Distribution {
            origin,
            min_position,
            probabilities,
            step_count,
        }
    }

    pub fn point_mass(origin: i64) -> Self {
        Distribution::from_dense(origin, origin, vec![1.0], 0)
    }

    /// Builds a distribution from sparse `(position, probability)` pairs. The
    /// dense range always covers `origin - step_count ..= origin + step_count`.
    /// Later duplicates overwrite earlier ones.
    pub fn from_pairs(
        origin: i64,
        step_count: usize,
        pairs: impl IntoIterator<Item = (i64, f64)>,
    ) -> Self {
        let pairs: Vec<(i64, f64)> = pairs.into_iter().collect();
        let n = step_count as i64;
        let lo = pairs.iter().map(|p| p.0).fold(origin - n, i64::min);
        let hi = pairs.iter().map(|p| p.0).fold(origin + n, i64::max);
        let mut probabilities = vec![0.0; (hi - lo + 1) as usize];
        for (x, p) in pairs {
            probabilities[(x - lo) as usize] = p;
        }
        Distribution::from_dense(origin, lo, probabilities, step_count)
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn step_count(&self) -> usize {
        self.step_count
    }

    pub fn min_position(&self) -> i64 {
        self.min_position
    }

    pub fn max_position(&self) -> i64 {
        self.min_position + self.probabilities.len() as i64 - 1
    }

    /// Dense probabilities starting at [`Distribution::min_position`].
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn get(&self, position: i64) -> f64 {
        let i = position - self.min_position;
        if i < 0 {
            return 0.0;
        }
        self.probabilities.get(i as usize).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let min = self.min_position;
        self.probabilities
            .iter()
            .enumerate()
            .map(move |(i, &p)| (min + i as i64, p))
    }

    /// Whether `position` has the parity reachable after `step_count` steps.
    pub fn has_step_parity(&self, position: i64) -> bool {
        (position - self.origin + self.step_count as i64).rem_euclid(2) == 0
    }

    /// Positions `origin - n, origin - n + 2, ..., origin + n`, the sites a
    /// walk of `n` steps can reach.
    pub fn reachable_positions(&self) -> impl Iterator<Item = i64> {
        let n = self.step_count as i64;
        (self.origin - n..=self.origin + n).step_by(2)
    }

    pub fn total(&self) -> f64 {
        pairwise_sum(&self.probabilities)
    }

    pub fn mean(&self) -> f64 {
        let terms: Vec<f64> = self.iter().map(|(x, p)| x as f64 * p).collect();
        pairwise_sum(&terms)
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        let terms: Vec<f64> = self
            .iter()
            .map(|(x, p)| {
                let d = x as f64 - mean;
                d * d * p
            })
            .collect();
        pairwise_sum(&terms)
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().max(0.0).sqrt()
    }

    /// Same distribution with every position, including the origin, moved by `by`.
    pub fn translated(&self, by: i64) -> Self {
        Distribution {
            origin: self.origin + by,
            min_position: self.min_position + by,
            probabilities: self.probabilities.clone(),
            step_count: self.step_count,
        }
    }

    /// Checks the sum-to-one and non-negativity invariants.
    pub fn validate(&self, tolerance: f64) -> Result<()> {
        if let Some((x, p)) = self
            .iter()
            .find(|&(_, p)| p.is_nan() || p < 0.0 || !p.is_finite())
        {
            return Err(Error::InvalidArgument(format!(
                "probability at position {x} is {p}"
            )));
        }
        let total = self.total();
        if (total - 1.0).abs() > tolerance {
            return Err(Error::InvalidArgument(format!(
                "probabilities sum to {total}, expected 1 within {tolerance:e}"
            )));
        }
        Ok(())
    }
}

/// Sum with pairwise (cascade) reduction; error grows as O(log n) instead of O(n).
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 16;
    if values.len() <= BLOCK {
        return values.iter().sum();
    }
    let (a, b) = values.split_at(values.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

pub fn std_dev(d: &Distribution) -> f64 {
    d.std_dev()
}

/// `1/2 * sum |p1(x) - p2(x)|` over the union of both supports.
pub fn tv_distance(a: &Distribution, b: &Distribution) -> f64 {
    let lo = a.min_position().min(b.min_position());
    let hi = a.max_position().max(b.max_position());
    let diffs: Vec<f64> = (lo..=hi).map(|x| (a.get(x) - b.get(x)).abs()).collect();
    0.5 * pairwise_sum(&diffs)
}

/// True iff every position with nonzero probability has the parity of the step count.
pub fn parity_ok(d: &Distribution) -> bool {
    d.iter().all(|(x, p)| p == 0.0 || d.has_step_parity(x))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub position: i64,
    pub quantum: f64,
    pub classical: f64,
}

/// Quantum vs classical summary at equal step count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub steps: usize,
    pub sigma_quantum: f64,
    pub sigma_classical: f64,
    /// `sigma_quantum / sigma_classical`; NaN when the classical spread is zero.
    pub ratio: f64,
    pub tv_distance: f64,
    pub table: Vec<CompareRow>,
}

pub fn compare_report(quantum: &Distribution, classical: &Distribution) -> Result<CompareReport> {
    if quantum.step_count() != classical.step_count() {
        return Err(Error::StepMismatch {
            left: quantum.step_count(),
            right: classical.step_count(),
        });
    }
    let sigma_quantum = quantum.std_dev();
    let sigma_classical = classical.std_dev();
    let lo = quantum.min_position().min(classical.min_position());
    let hi = quantum.max_position().max(classical.max_position());
    let table = (lo..=hi)
        .filter(|&x| quantum.has_step_parity(x) || quantum.get(x) != 0.0 || classical.get(x) != 0.0)
        .map(|x| CompareRow {
            position: x,
            quantum: quantum.get(x),
            classical: classical.get(x),
        })
        .collect();
    Ok(CompareReport {
        steps: quantum.step_count(),
        sigma_quantum,
        sigma_classical,
        ratio: sigma_quantum / sigma_classical,
        tv_distance: tv_distance(quantum, classical),
        table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn three_step_quantum() -> Distribution {
        Distribution::from_pairs(0, 3, [(-3, 0.125), (-1, 0.125), (1, 0.625), (3, 0.125)])
    }

    fn three_step_classical() -> Distribution {
        Distribution::from_pairs(0, 3, [(-3, 0.125), (-1, 0.375), (1, 0.375), (3, 0.125)])
    }

    #[test]
    fn std_dev_of_point_mass_is_zero() {
        assert_eq!(Distribution::point_mass(0).std_dev(), 0.0);
        assert_eq!(Distribution::point_mass(-12).std_dev(), 0.0);
    }

    #[test]
    fn tv_basics() {
        let d = three_step_quantum();
        assert_eq!(tv_distance(&d, &d), 0.0);
        let a = Distribution::point_mass(0);
        let b = Distribution::point_mass(5);
        assert_eq!(tv_distance(&a, &b), 1.0);
        assert!((tv_distance(&three_step_quantum(), &three_step_classical()) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn parity_checks() {
        assert!(parity_ok(&three_step_quantum()));
        assert!(!parity_ok(&Distribution::from_pairs(0, 3, [(0, 1.0)])));
        assert!(parity_ok(&Distribution::point_mass(0)));
        // parity is relative to the origin
        assert!(parity_ok(&three_step_quantum().translated(1)));
    }

    #[test]
    fn compare_rejects_step_mismatch() {
        let err = compare_report(&three_step_quantum(), &Distribution::point_mass(0)).unwrap_err();
        assert_eq!(err, Error::StepMismatch { left: 3, right: 0 });
    }

    #[test]
    fn compare_three_steps() {
        let r = compare_report(&three_step_quantum(), &three_step_classical()).unwrap();
        assert_eq!(r.steps, 3);
        assert!((r.tv_distance - 0.25).abs() < 1e-15);
        assert_eq!(
            r.table.iter().map(|row| row.position).collect::<Vec<_>>(),
            vec![-3, -1, 1, 3]
        );
        assert!((r.sigma_classical - 3f64.sqrt()).abs() < 1e-15);
        // quantum mean 0.5, E[x^2] = 3
        assert!((r.sigma_quantum - 2.75f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn validate_flags_bad_entries() {
        assert!(three_step_quantum().validate(1e-12).is_ok());
        assert!(Distribution::from_pairs(0, 1, [(1, 0.7)])
            .validate(1e-10)
            .is_err());
        assert!(Distribution::from_pairs(0, 1, [(1, 1.2), (-1, -0.2)])
            .validate(1e-10)
            .is_err());
    }

    #[test]
    fn pairwise_sum_matches_exact_small_cases() {
        assert_eq!(pairwise_sum(&[]), 0.0);
        let v: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&v), 500500.0);
    }

    fn arb_distribution() -> impl Strategy<Value = Distribution> {
        (prop::collection::vec(0.0f64..1.0, 1..40), -20i64..20).prop_filter_map(
            "nonzero mass",
            |(w, lo)| {
                let total: f64 = w.iter().sum();
                (total > 1e-6).then(|| {
                    let p = w.iter().map(|x| x / total).collect();
                    Distribution::from_dense(0, lo, p, 0)
                })
            },
        )
    }

    proptest! {
        #[test]
        fn tv_is_a_metric(a in arb_distribution(), b in arb_distribution(), c in arb_distribution()) {
            let ab = tv_distance(&a, &b);
            prop_assert!((ab - tv_distance(&b, &a)).abs() <= 1e-12);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
            prop_assert!(ab <= tv_distance(&a, &c) + tv_distance(&c, &b) + 1e-12);
        }

        #[test]
        fn std_dev_is_translation_covariant(d in arb_distribution(), k in -1000i64..1000) {
            let t = d.translated(k);
            prop_assert!((t.mean() - d.mean() - k as f64).abs() <= 1e-12);
            prop_assert!((t.std_dev() - d.std_dev()).abs() <= 1e-12);
        }
    }
}
