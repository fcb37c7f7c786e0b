//! Front end for the `qwalk` binary.
//!
//! Exit codes: 0 success (or equivalence pass), 1 equivalence fail, 2 usage
//! error, 3 internal error.

mod config;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::process::ExitCode;

pub use config::{
    parse_config, parse_config_with_file, ConfigError, Mode, OutputFormat, RunConfig,
};
pub use output::{
    read_distribution_json, CompareDocument, DistributionDocument, Entry, EquivalenceDocument,
    InitialDoc, CLAMP_BELOW, READ_TOLERANCE,
};

use crate::decoherence::{classical_walk, run_ensemble};
use crate::optics::{build_network, equivalence_report};
use crate::stats::compare_report;
use crate::walk::{hwp_coin, run_walk};

pub const EXIT_OK: u8 = 0;
pub const EXIT_EQUIVALENCE_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

/// Output of one run, not yet written anywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub text: String,
    pub exit_code: u8,
    /// Network layout dump, when one was requested.
    pub layout_dump: Option<String>,
}

/// Computes the artifact for `cfg` without touching the filesystem.
pub fn execute(cfg: &RunConfig) -> crate::Result<RunOutput> {
    let initial = cfg.initial();
    let coin = hwp_coin(cfg.coin_axis());
    let json = cfg.output_format == OutputFormat::Json;
    let mut exit_code = EXIT_OK;
    let mut layout_dump = None;

    let text = match cfg.mode {
        Mode::Walk => {
            let d = run_walk(&initial, &coin, cfg.steps)?;
            render(json, DistributionDocument::exact(cfg, &d))
        }
        Mode::Network => {
            let layout = build_network(cfg.steps, cfg.coin_axis())?;
            let d = layout.propagate(initial.coin_vector())?;
            if cfg.layout_dump.is_some() {
                layout_dump = Some(layout.dump());
            }
            render(json, DistributionDocument::exact(cfg, &d))
        }
        Mode::Decohere => {
            let r = run_ensemble(&initial, &coin, cfg.steps, &cfg.dephasing())?;
            render(json, DistributionDocument::ensemble(cfg, &r))
        }
        Mode::Compare => {
            let q = run_walk(&initial, &coin, cfg.steps)?;
            let c = classical_walk(cfg.steps, initial.start_position);
            let report = compare_report(&q, &c)?;
            let doc = CompareDocument::new(cfg, &report);
            if json {
                doc.to_json()
            } else {
                doc.to_csv()
            }
        }
        Mode::Equivalence => {
            let report = equivalence_report(cfg.steps, &initial, cfg.coin_axis())?;
            if !report.pass {
                exit_code = EXIT_EQUIVALENCE_FAIL;
            }
            let doc = EquivalenceDocument::new(cfg, &report);
            if json {
                doc.to_json()
            } else {
                doc.to_csv()
            }
        }
    };
    Ok(RunOutput {
        text,
        exit_code,
        layout_dump,
    })
}

fn render(json: bool, doc: DistributionDocument) -> String {
    if json {
        doc.to_json()
    } else {
        doc.to_csv()
    }
}

/// Runs `cfg` and writes its output; returns the process exit code.
pub fn run(cfg: &RunConfig) -> u8 {
    let out = match execute(cfg) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INTERNAL;
        }
    };
    if let (Some(path), Some(dump)) = (&cfg.layout_dump, &out.layout_dump) {
        if let Err(e) = std::fs::write(path, dump) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return EXIT_INTERNAL;
        }
    }
    let written = match &cfg.output_path {
        Some(path) => std::fs::write(path, &out.text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(out.text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| format!("cannot write to stdout: {e}"))
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_INTERNAL;
    }
    out.exit_code
}

/// Entry point used by the binary.
pub fn main_with_args<I, T>(argv: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_config(argv) {
        Ok(cfg) => ExitCode::from(run(&cfg)),
        Err(ConfigError::Info(text)) => {
            print!("{text}");
            ExitCode::from(EXIT_OK)
        }
        Err(e @ ConfigError::Usage { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
