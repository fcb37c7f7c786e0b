mod common;

use qwalk::decoherence::{classical_walk, run_ensemble, run_trajectory, DephasingConfig};
use qwalk::stats::{parity_ok, tv_distance};
use qwalk::walk::{run_walk, CoinOperator, InitialSpec};

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn classical_walk_is_binomial() {
    for n in 0..=30 {
        let c = classical_walk(n, 0);
        for (x, p) in common::binomial(n) {
            assert!((c.get(x) - p).abs() <= 1e-14, "n={n} x={x}");
        }
        assert!(parity_ok(&c));
    }
    assert_eq!(classical_walk(4, 10).get(10), 0.375);
}

#[test]
fn zero_gamma_reproduces_coherent_walk_exactly() {
    let spec = InitialSpec::new(0.7, 2.1).at(3);
    let coin = CoinOperator::hadamard();
    let coherent = run_walk(&spec, &coin, 15).unwrap();
    for m in [1, 127, 128, 129, 1000] {
        let r = run_ensemble(&spec, &coin, 15, &DephasingConfig::new(0.0, m, 5).unwrap()).unwrap();
        assert_eq!(r.mean, coherent, "M={m}");
        assert!(r.std_error.iter().all(|&s| s == 0.0));
    }
}

#[test]
fn full_dephasing_approaches_binomial() {
    let cfg = DephasingConfig::new(1.0, 20_000, 11).unwrap();
    let r = run_ensemble(
        &InitialSpec::symmetric(),
        &CoinOperator::hadamard(),
        10,
        &cfg,
    )
    .unwrap();
    let tv = tv_distance(&r.mean, &classical_walk(10, 0));
    assert!(tv < 0.02, "{tv}");
}

#[test]
fn trajectories_conserve_norm() {
    for i in 0..20 {
        let t = run_trajectory(
            &InitialSpec::horizontal(),
            &CoinOperator::hadamard(),
            50,
            0.6,
            1,
            i,
        )
        .unwrap();
        assert!((t.distribution.total() - 1.0).abs() < 1e-12);
        assert!(parity_ok(&t.distribution));
    }
}

#[test]
fn ensemble_is_independent_of_thread_count() {
    let spec = InitialSpec::symmetric();
    let coin = CoinOperator::hadamard();
    let cfg = DephasingConfig::new(0.4, 1000, 2024).unwrap();
    let reference = in_pool(1, || run_ensemble(&spec, &coin, 12, &cfg).unwrap());
    for threads in [2, 3, 8] {
        let r = in_pool(threads, || run_ensemble(&spec, &coin, 12, &cfg).unwrap());
        for (a, b) in r
            .mean
            .probabilities()
            .iter()
            .zip(reference.mean.probabilities())
        {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        for (a, b) in r.std_error.iter().zip(&reference.std_error) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}

#[test]
fn ensemble_mean_is_mean_of_trajectories() {
    let spec = InitialSpec::horizontal();
    let coin = CoinOperator::hadamard();
    let m = 300;
    let r = run_ensemble(&spec, &coin, 6, &DephasingConfig::new(0.8, m, 3).unwrap()).unwrap();
    let mut sum = [0.0f64; 13];
    let mut sq = [0.0f64; 13];
    for i in 0..m as u64 {
        let t = run_trajectory(&spec, &coin, 6, 0.8, 3, i).unwrap();
        for (k, p) in t.distribution.probabilities().iter().enumerate() {
            sum[k] += p;
            sq[k] += p * p;
        }
    }
    let mf = m as f64;
    for k in 0..13 {
        let mean = sum[k] / mf;
        let var = (sq[k] - mf * mean * mean) / (mf - 1.0);
        assert!((r.mean.probabilities()[k] - mean).abs() < 1e-13);
        assert!((r.std_error[k] - (var.max(0.0) / mf).sqrt()).abs() < 1e-9);
    }
}

#[test]
fn different_seeds_differ() {
    let spec = InitialSpec::horizontal();
    let coin = CoinOperator::hadamard();
    let a = run_ensemble(&spec, &coin, 8, &DephasingConfig::new(1.0, 50, 1).unwrap()).unwrap();
    let b = run_ensemble(&spec, &coin, 8, &DephasingConfig::new(1.0, 50, 2).unwrap()).unwrap();
    assert_ne!(a.mean, b.mean);
}
