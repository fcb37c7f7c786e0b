//! Linear-optics model of the walk: polarizing beam splitters route the
//! chirality, half-wave plates act as the coin, and a moving ("dynamic") line
//! of primed elements keeps every component travelling forward.
//!
//! [`build_network`] compiles an `n`-step walk into a [`NetworkLayout`],
//! [`NetworkLayout::propagate`] pushes one photon through it, and
//! [`equivalence_report`] checks the result against the state-vector engine.
//!
//! # Layout dump format
//!
//! [`NetworkLayout::dump`] writes a header followed by one line per element
//! in layer order, elements within a layer by site label descending:
//!
//! ```text
//! # qwalk optical network v1
//! steps <n>
//! coin_axis_rad <angle>
//! pbsbar <direct|composite>
//! input <port>
//! <layer> <role> <KIND> <param> site=<label> in=<ports> out=<wiring>
//! ```
//!
//! * `role` is one of `coin`, `split`, `merge`, `phase`, `detect`.
//! * `KIND` is one of `HWP`, `PBS`, `PBSBAR`, `PHASE`, `DET`.
//! * `param` is `axis=<rad>` for `HWP`, `phase=<rad>` for `PHASE`, `-` otherwise.
//! * `label` is the integer site, with a trailing `'` for primed elements.
//! * `in` lists input ports (`p<id>`) comma-separated; for two-port elements
//!   the order is `a,b`.
//! * `out` lists `p<id>>p<id>` (wired) or `p<id>>dark` (terminated) for each
//!   output in `t,r` order, or `-` for detectors.
//!
//! Numbers use Rust's shortest round-trip formatting.

mod element;
mod network;

pub use element::{
    pbs_scatter, pbsbar_composite_scatter, pbsbar_scatter, ElementKind, PbsBarVariant, SiteLabel,
};
pub use network::{
    build_network, build_network_with, Element, Layer, LayerRole, ModeField, NetworkLayout, PortId,
    PropagationTrace, Sink, DARK_TOLERANCE,
};

use serde::Serialize;

use crate::walk::{hwp_coin, run_walk, InitialSpec};
use crate::Result;

/// Largest per-position discrepancy for the two back-ends to count as equal.
pub const EQUIVALENCE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceRow {
    pub position: i64,
    pub walk: f64,
    pub network: f64,
    pub abs_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub steps: usize,
    pub max_discrepancy: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub table: Vec<EquivalenceRow>,
}

/// Runs the state-vector walk and the optical network on the same input and
/// compares detector probabilities position by position.
pub fn equivalence_report(
    n_steps: usize,
    initial: &InitialSpec,
    coin_axis: f64,
) -> Result<EquivalenceReport> {
    let walk = run_walk(initial, &hwp_coin(coin_axis), n_steps)?;
    let network = build_network(n_steps, coin_axis)?
        .propagate(initial.coin_vector())?
        .translated(initial.start_position);

    let lo = walk.min_position().min(network.min_position());
    let hi = walk.max_position().max(network.max_position());
    let max_discrepancy = (lo..=hi)
        .map(|x| (walk.get(x) - network.get(x)).abs())
        .fold(0.0, f64::max);
    let table = walk
        .reachable_positions()
        .map(|x| {
            let (w, n) = (walk.get(x), network.get(x));
            EquivalenceRow {
                position: x,
                walk: w,
                network: n,
                abs_diff: (w - n).abs(),
            }
        })
        .collect();
    Ok(EquivalenceReport {
        steps: n_steps,
        max_discrepancy,
        tolerance: EQUIVALENCE_TOLERANCE,
        pass: max_discrepancy < EQUIVALENCE_TOLERANCE,
        table,
    })
}
