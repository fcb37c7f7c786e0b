//! Optical elements and their single-photon scattering rules.
//!
//! All elements are ideal and use the zero-phase gauge: transmission and
//! reflection multiply amplitudes by +1, and all paths have equal length.
//!
//! A two-port element has inputs `[a, b]` and outputs `[t, r]`. Input `a`
//! continues straight through into `t` when transmitted and is deflected into
//! `r` when reflected; input `b` is the mirror image.

use std::fmt;

use crate::walk::{CoinOperator, CoinVector};
use crate::Complex;

/// `PBS`: transmits `H`, reflects `V`.
///
/// `t = (a_H, b_V)`, `r = (b_H, a_V)`.
#[inline]
pub fn pbs_scatter(in_a: CoinVector, in_b: CoinVector) -> (CoinVector, CoinVector) {
    let out_t = CoinVector::new(in_a.h, in_b.v);
    let out_r = CoinVector::new(in_b.h, in_a.v);
    (out_t, out_r)
}

/// Modified beam splitter (`PBS-bar`): transmits `V`, reflects `H`. Amplitude
/// polarization labels are unchanged.
///
/// `t = (b_H, a_V)`, `r = (a_H, b_V)`.
#[inline]
pub fn pbsbar_scatter(in_a: CoinVector, in_b: CoinVector) -> (CoinVector, CoinVector) {
    let out_t = CoinVector::new(in_b.h, in_a.v);
    let out_r = CoinVector::new(in_a.h, in_b.v);
    (out_t, out_r)
}

/// `PBS-bar` built from stock parts: a 45 degree half-wave plate on each
/// input, an ordinary `PBS`, and a 45 degree half-wave plate on each output.
pub fn pbsbar_composite_scatter(in_a: CoinVector, in_b: CoinVector) -> (CoinVector, CoinVector) {
    let r90 = CoinOperator::half_wave_plate(std::f64::consts::FRAC_PI_4);
    let (t, r) = pbs_scatter(r90.apply(&in_a), r90.apply(&in_b));
    (r90.apply(&t), r90.apply(&r))
}

/// How `PBS-bar` elements are realized when a network is propagated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PbsBarVariant {
    /// Ideal element with swapped routing.
    #[default]
    Direct,
    /// Half-wave plate sandwich around an ordinary `PBS`.
    Composite,
}

impl fmt::Display for PbsBarVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PbsBarVariant::Direct => "direct",
            PbsBarVariant::Composite => "composite",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ElementKind {
    Pbs,
    PbsBar(PbsBarVariant),
    /// Half-wave plate, axis angle in radians from horizontal.
    Hwp {
        axis_angle: f64,
    },
    /// Uniform phase delay on both polarizations, radians.
    PhaseShift {
        phase: f64,
    },
    Detector,
}

impl ElementKind {
    pub fn input_arity(&self) -> usize {
        match self {
            ElementKind::Pbs | ElementKind::PbsBar(_) => 2,
            _ => 1,
        }
    }

    pub fn output_arity(&self) -> usize {
        match self {
            ElementKind::Pbs | ElementKind::PbsBar(_) => 2,
            ElementKind::Hwp { .. } | ElementKind::PhaseShift { .. } => 1,
            ElementKind::Detector => 0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ElementKind::Pbs => "PBS",
            ElementKind::PbsBar(_) => "PBSBAR",
            ElementKind::Hwp { .. } => "HWP",
            ElementKind::PhaseShift { .. } => "PHASE",
            ElementKind::Detector => "DET",
        }
    }

    /// Maps input amplitudes to output amplitudes. `inputs.len()` must equal
    /// [`ElementKind::input_arity`]. Detectors have no outputs.
    pub fn scatter(&self, inputs: &[CoinVector], outputs: &mut Vec<CoinVector>) {
        outputs.clear();
        match *self {
            ElementKind::Pbs => {
                let (t, r) = pbs_scatter(inputs[0], inputs[1]);
                outputs.extend([t, r]);
            }
            ElementKind::PbsBar(variant) => {
                let (t, r) = match variant {
                    PbsBarVariant::Direct => pbsbar_scatter(inputs[0], inputs[1]),
                    PbsBarVariant::Composite => pbsbar_composite_scatter(inputs[0], inputs[1]),
                };
                outputs.extend([t, r]);
            }
            ElementKind::Hwp { axis_angle } => {
                outputs.push(CoinOperator::half_wave_plate(axis_angle).apply(&inputs[0]));
            }
            ElementKind::PhaseShift { phase } => {
                outputs.push(inputs[0].scale(Complex::from_polar(1.0, phase)));
            }
            ElementKind::Detector => {}
        }
    }
}

/// Lattice site an element belongs to. Primed sites are the replacement
/// elements of the moving line; they carry the same integer as the site they
/// replace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SiteLabel {
    pub position: i64,
    pub primed: bool,
}

impl SiteLabel {
    pub fn new(position: i64, primed: bool) -> Self {
        SiteLabel { position, primed }
    }
}

impl fmt::Display for SiteLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.position, if self.primed { "'" } else { "" })
    }
}
