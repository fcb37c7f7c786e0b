//! JSON and CSV documents written by the CLI, and the reader for distribution
//! documents.
//!
//! The distribution JSON document has these top-level keys, in order:
//! `steps`, `coin_axis_deg`, `initial` (`theta_deg`, `phi_deg`), `gamma`,
//! `trajectories`, `seed` (all three `null` for exact runs), `distribution`
//! (`{position, probability}` ascending by position, one entry per reachable
//! site), `std_dev`, and for ensembles `std_error`, aligned with
//! `distribution`. The matching JSON Schema is `schemas/distribution.schema.json`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::decoherence::EnsembleResult;
use crate::optics::EquivalenceReport;
use crate::stats::CompareReport;
use crate::Distribution;

use super::config::RunConfig;

/// Round-off below this magnitude is clamped to zero when written.
pub const CLAMP_BELOW: f64 = 1e-15;

/// Sum-to-one tolerance applied when reading a distribution back.
pub const READ_TOLERANCE: f64 = 1e-10;

fn clamp(p: f64) -> f64 {
    if p < 0.0 && p > -CLAMP_BELOW {
        0.0
    } else {
        p
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialDoc {
    pub theta_deg: f64,
    pub phi_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub position: i64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionDocument {
    pub steps: usize,
    pub coin_axis_deg: f64,
    pub initial: InitialDoc,
    pub gamma: Option<f64>,
    pub trajectories: Option<usize>,
    pub seed: Option<u64>,
    pub distribution: Vec<Entry>,
    pub std_dev: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub std_error: Option<Vec<f64>>,
}

impl DistributionDocument {
    /// Document for an exact (coherent or network) run.
    pub fn exact(cfg: &RunConfig, d: &Distribution) -> Self {
        DistributionDocument {
            steps: d.step_count(),
            coin_axis_deg: cfg.coin_axis_deg,
            initial: initial_doc(cfg),
            gamma: None,
            trajectories: None,
            seed: None,
            distribution: d
                .reachable_positions()
                .map(|x| Entry {
                    position: x,
                    probability: clamp(d.get(x)),
                })
                .collect(),
            std_dev: d.std_dev(),
            std_error: None,
        }
    }

    pub fn ensemble(cfg: &RunConfig, r: &EnsembleResult) -> Self {
        let mut doc = DistributionDocument::exact(cfg, &r.mean);
        doc.gamma = Some(cfg.gamma);
        doc.trajectories = Some(r.trajectories);
        doc.seed = Some(cfg.seed);
        doc.std_error = Some(
            doc.distribution
                .iter()
                .map(|e| r.std_error_at(e.position))
                .collect(),
        );
        doc
    }

    /// Structural checks mirroring the bundled schema plus the invariants a
    /// schema cannot express.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.steps as i64;
        let expected: Vec<i64> = (-n..=n).step_by(2).collect();
        let got: Vec<i64> = self.distribution.iter().map(|e| e.position).collect();
        if got != expected {
            return Err(format!(
                "distribution positions {got:?} do not match the {} reachable sites",
                expected.len()
            ));
        }
        if let Some(e) = self
            .distribution
            .iter()
            .find(|e| !(0.0..=1.0).contains(&e.probability))
        {
            return Err(format!(
                "probability {} at position {} is outside [0, 1]",
                e.probability, e.position
            ));
        }
        let d = self.to_distribution();
        if (d.total() - 1.0).abs() > READ_TOLERANCE {
            return Err(format!("probabilities sum to {}", d.total()));
        }
        let ensemble = [
            self.gamma.is_some(),
            self.trajectories.is_some(),
            self.seed.is_some(),
        ];
        if ensemble.iter().any(|&b| b != ensemble[0]) {
            return Err("gamma, trajectories and seed must be all null or all set".into());
        }
        match (&self.std_error, ensemble[0]) {
            (Some(se), true) if se.len() == self.distribution.len() => {}
            (Some(_), true) => return Err("std_error is not aligned with distribution".into()),
            (None, false) => {}
            (Some(_), false) => return Err("std_error is only written for ensembles".into()),
            (None, true) => return Err("ensemble document lacks std_error".into()),
        }
        Ok(())
    }

    pub fn to_distribution(&self) -> Distribution {
        Distribution::from_pairs(
            0,
            self.steps,
            self.distribution
                .iter()
                .map(|e| (e.position, e.probability)),
        )
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        match &self.std_error {
            Some(se) => {
                s.push_str("position,probability,std_error\n");
                for (e, err) in self.distribution.iter().zip(se) {
                    let _ = writeln!(s, "{},{},{}", e.position, e.probability, err);
                }
            }
            None => {
                s.push_str("position,probability\n");
                for e in &self.distribution {
                    let _ = writeln!(s, "{},{}", e.position, e.probability);
                }
            }
        }
        s
    }
}

/// Parses and validates a distribution JSON document.
pub fn read_distribution_json(text: &str) -> Result<DistributionDocument, String> {
    let doc: DistributionDocument = serde_json::from_str(text).map_err(|e| e.to_string())?;
    doc.validate()?;
    Ok(doc)
}

fn initial_doc(cfg: &RunConfig) -> InitialDoc {
    InitialDoc {
        theta_deg: cfg.initial_theta_deg,
        phi_deg: cfg.initial_phi_deg,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareDocument<'a> {
    pub coin_axis_deg: f64,
    pub initial: InitialDoc,
    #[serde(flatten)]
    pub report: &'a CompareReport,
}

impl<'a> CompareDocument<'a> {
    pub fn new(cfg: &RunConfig, report: &'a CompareReport) -> Self {
        CompareDocument {
            coin_axis_deg: cfg.coin_axis_deg,
            initial: initial_doc(cfg),
            report,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("position,quantum,classical\n");
        for row in &self.report.table {
            let _ = writeln!(
                s,
                "{},{},{}",
                row.position,
                clamp(row.quantum),
                clamp(row.classical)
            );
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceDocument<'a> {
    pub coin_axis_deg: f64,
    pub initial: InitialDoc,
    #[serde(flatten)]
    pub report: &'a EquivalenceReport,
}

impl<'a> EquivalenceDocument<'a> {
    pub fn new(cfg: &RunConfig, report: &'a EquivalenceReport) -> Self {
        EquivalenceDocument {
            coin_axis_deg: cfg.coin_axis_deg,
            initial: initial_doc(cfg),
            report,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("position,walk,network,abs_diff\n");
        for row in &self.report.table {
            let _ = writeln!(
                s,
                "{},{},{},{}",
                row.position, row.walk, row.network, row.abs_diff
            );
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoherence::{run_ensemble, DephasingConfig};
    use crate::walk::{run_walk, CoinOperator, InitialSpec};

    #[test]
    fn clamps_only_tiny_negatives() {
        assert_eq!(clamp(-1e-17), 0.0);
        assert_eq!(clamp(-1e-3), -1e-3);
        assert_eq!(clamp(1e-300), 1e-300);
    }

    #[test]
    fn exact_json_round_trip() {
        let cfg = RunConfig {
            steps: 40,
            initial_theta_deg: 45.0,
            initial_phi_deg: 90.0,
            ..RunConfig::default()
        };
        let d = run_walk(&cfg.initial(), &CoinOperator::hadamard(), 40).unwrap();
        let doc = DistributionDocument::exact(&cfg, &d);
        let back = read_distribution_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_distribution(), d);
    }

    #[test]
    fn ensemble_json_round_trip() {
        let cfg = RunConfig {
            mode: super::super::Mode::Decohere,
            steps: 6,
            gamma: 0.5,
            trajectories: 50,
            seed: u64::MAX,
            ..RunConfig::default()
        };
        let r = run_ensemble(
            &cfg.initial(),
            &CoinOperator::hadamard(),
            6,
            &cfg.dephasing(),
        )
        .unwrap();
        let doc = DistributionDocument::ensemble(&cfg, &r);
        let json = doc.to_json();
        assert!(json.contains("\"std_error\""));
        let back = read_distribution_json(&json).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.seed, Some(u64::MAX));
        assert_eq!(back.to_distribution(), r.mean);
    }

    #[test]
    fn reader_rejects_broken_documents() {
        let cfg = RunConfig::default();
        let d = run_walk(&InitialSpec::horizontal(), &CoinOperator::hadamard(), 3).unwrap();
        let good = DistributionDocument::exact(&cfg, &d);

        let mut bad = good.clone();
        bad.distribution.swap(0, 1);
        assert!(bad.validate().is_err());

        let mut bad = good.clone();
        bad.distribution[0].probability = 0.5;
        assert!(bad.validate().is_err());

        let mut bad = good.clone();
        bad.gamma = Some(1.0);
        assert!(bad.validate().is_err());

        let mut bad = good.clone();
        bad.std_error = Some(vec![0.0; 4]);
        assert!(bad.validate().is_err());

        let extra = good.to_json().replacen("{", "{\n  \"extra\": 1,", 1);
        assert!(read_distribution_json(&extra).is_err());
    }

    #[test]
    fn csv_layout() {
        let cfg = RunConfig::default();
        let r = run_ensemble(
            &InitialSpec::horizontal(),
            &CoinOperator::hadamard(),
            2,
            &DephasingConfig::new(0.0, 3, 0).unwrap(),
        )
        .unwrap();
        let csv = DistributionDocument::ensemble(&cfg, &r).to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("position,probability,std_error"));
        assert_eq!(lines.count(), 3);
    }
}
