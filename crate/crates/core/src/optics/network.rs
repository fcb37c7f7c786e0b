//! Layered mode graph of the dynamic-line network and single-photon propagation.
//!
//! Step `k` of the walk occupies up to three layers:
//!
//! 1. **coin**: one half-wave plate per beam at the positions reached after
//!    `k - 1` steps.
//! 2. **split**: one beam splitter per beam. `H` leaves towards `x + 1`, `V`
//!    towards `x - 1`. Outer elements extend the line: `PBS` on the positive
//!    flank, `PBS-bar` on the negative flank. Interior beams go through primed
//!    `PBS` elements that stand in for the element previously at that site.
//! 3. **merge** (from step 2 on): at every interior site the `H` arm coming
//!    from the left and the `V` arm coming from the right overlap on a primed
//!    `PBS`. One output carries the recombined beam; the other output is
//!    provably empty and is terminated as `dark`. Flank arms have nothing to
//!    merge with and are wired straight to the next layer that consumes them.
//!
//! A final layer holds one detector per reachable position, labeled with the
//! unprimed position.
//!
//! Wires always run from a lower layer to a strictly higher one, so the graph
//! is acyclic and propagation in layer order is exact.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use super::element::{ElementKind, PbsBarVariant, SiteLabel};
use crate::walk::CoinVector;
use crate::{Distribution, Error, Result};

/// Probability allowed to leak into terminated ports before propagation fails.
pub const DARK_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PortId(pub u32);

impl fmt::Display for PortId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

/// Where an output port sends its light.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sink {
    Port(PortId),
    /// Terminated port that must receive no light.
    Dark,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerRole {
    Coin,
    Split,
    Merge,
    Phase,
    Detect,
}

impl LayerRole {
    pub fn name(&self) -> &'static str {
        match self {
            LayerRole::Coin => "coin",
            LayerRole::Split => "split",
            LayerRole::Merge => "merge",
            LayerRole::Phase => "phase",
            LayerRole::Detect => "detect",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub kind: ElementKind,
    pub site: SiteLabel,
    pub inputs: Vec<PortId>,
    pub outputs: Vec<PortId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub role: LayerRole,
    pub elements: Vec<Element>,
}

/// Immutable network for an `n_steps` walk.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkLayout {
    layers: Vec<Layer>,
    wires: BTreeMap<PortId, Sink>,
    input_port: PortId,
    n_steps: usize,
    coin_axis: f64,
    pbsbar_variant: PbsBarVariant,
}

struct Builder {
    layers: Vec<Layer>,
    wires: BTreeMap<PortId, Sink>,
    next_port: u32,
}

impl Builder {
    fn push_layer(&mut self, role: LayerRole) -> usize {
        self.layers.push(Layer {
            role,
            elements: Vec::new(),
        });
        self.layers.len() - 1
    }

    fn port(&mut self) -> PortId {
        let p = PortId(self.next_port);
        self.next_port += 1;
        p
    }

    fn add(
        &mut self,
        layer: usize,
        kind: ElementKind,
        site: SiteLabel,
    ) -> (Vec<PortId>, Vec<PortId>) {
        let inputs: Vec<PortId> = (0..kind.input_arity()).map(|_| self.port()).collect();
        let outputs: Vec<PortId> = (0..kind.output_arity()).map(|_| self.port()).collect();
        self.layers[layer].elements.push(Element {
            kind,
            site,
            inputs: inputs.clone(),
            outputs: outputs.clone(),
        });
        (inputs, outputs)
    }

    fn wire(&mut self, from: PortId, to: Sink) {
        self.wires.insert(from, to);
    }
}

/// Positions reachable after `k` steps, descending: `k, k - 2, ..., -k`.
fn line(k: usize) -> impl Iterator<Item = i64> {
    let k = k as i64;
    (0..=k).map(move |j| k - 2 * j)
}

/// Network for `n_steps` Hadamard-family steps with the coin plate axis at
/// `coin_axis` radians and ideal `PBS-bar` elements.
pub fn build_network(n_steps: usize, coin_axis: f64) -> Result<NetworkLayout> {
    build_network_with(n_steps, coin_axis, PbsBarVariant::Direct)
}

pub fn build_network_with(
    n_steps: usize,
    coin_axis: f64,
    pbsbar_variant: PbsBarVariant,
) -> Result<NetworkLayout> {
    if n_steps < 1 {
        return Err(Error::InvalidArgument(
            "a network needs at least one step".into(),
        ));
    }
    if !coin_axis.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "coin axis angle must be finite, got {coin_axis}"
        )));
    }
    let mut b = Builder {
        layers: Vec::new(),
        wires: BTreeMap::new(),
        next_port: 0,
    };
    let mut input_port = None;
    // Output port currently carrying the whole beam at each position;
    // `None` is the network input.
    let mut beams: BTreeMap<i64, Option<PortId>> = BTreeMap::from([(0, None)]);

    for k in 1..=n_steps {
        let prev = (k - 1) as i64;

        let coin_layer = b.push_layer(LayerRole::Coin);
        let mut coined = Vec::with_capacity(beams.len());
        for (&x, &src) in beams.iter().rev() {
            let site = SiteLabel::new(x, x.abs() < prev);
            let (ins, outs) = b.add(
                coin_layer,
                ElementKind::Hwp {
                    axis_angle: coin_axis,
                },
                site,
            );
            match src {
                Some(p) => b.wire(p, Sink::Port(ins[0])),
                None => input_port = Some(ins[0]),
            }
            coined.push((x, outs[0]));
        }

        let split_layer = b.push_layer(LayerRole::Split);
        let mut right_arms = BTreeMap::new();
        let mut left_arms = BTreeMap::new();
        for (x, beam) in coined {
            let interior = x.abs() < prev;
            let kind = if !interior && x < 0 {
                ElementKind::PbsBar(pbsbar_variant)
            } else {
                ElementKind::Pbs
            };
            let (ins, outs) = b.add(split_layer, kind, SiteLabel::new(x, interior));
            b.wire(beam, Sink::Port(ins[0]));
            // PBS transmits H; PBS-bar reflects it.
            let (h_out, v_out) = match kind {
                ElementKind::Pbs => (outs[0], outs[1]),
                _ => (outs[1], outs[0]),
            };
            right_arms.insert(x + 1, h_out);
            left_arms.insert(x - 1, v_out);
        }

        beams.clear();
        let k_i = k as i64;
        if k >= 2 {
            let merge_layer = b.push_layer(LayerRole::Merge);
            for y in line(k).filter(|y| y.abs() < k_i) {
                let (ins, outs) = b.add(merge_layer, ElementKind::Pbs, SiteLabel::new(y, true));
                b.wire(left_arms[&y], Sink::Port(ins[0]));
                b.wire(right_arms[&y], Sink::Port(ins[1]));
                b.wire(outs[0], Sink::Dark);
                beams.insert(y, Some(outs[1]));
            }
        }
        beams.insert(k_i, Some(right_arms[&k_i]));
        beams.insert(-k_i, Some(left_arms[&-k_i]));
    }

    let detect_layer = b.push_layer(LayerRole::Detect);
    for (&y, &src) in beams.iter().rev() {
        let (ins, _) = b.add(
            detect_layer,
            ElementKind::Detector,
            SiteLabel::new(y, false),
        );
        b.wire(
            src.expect("beams after step 1 have a source"),
            Sink::Port(ins[0]),
        );
    }

    let layout = NetworkLayout {
        layers: b.layers,
        wires: b.wires,
        input_port: input_port.expect("first coin layer sets the input"),
        n_steps,
        coin_axis,
        pbsbar_variant,
    };
    layout.validate()?;
    Ok(layout)
}

/// Photon amplitudes on the ports currently holding light.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ModeField {
    amplitudes: BTreeMap<PortId, CoinVector>,
}

impl ModeField {
    pub fn get(&self, port: PortId) -> CoinVector {
        self.amplitudes
            .get(&port)
            .copied()
            .unwrap_or(CoinVector::ZERO)
    }

    pub fn ports(&self) -> impl Iterator<Item = (PortId, CoinVector)> + '_ {
        self.amplitudes.iter().map(|(&p, &a)| (p, a))
    }

    pub fn norm_sqr(&self) -> f64 {
        let terms: Vec<f64> = self.amplitudes.values().map(CoinVector::norm_sqr).collect();
        crate::stats::pairwise_sum(&terms)
    }

    fn insert(&mut self, port: PortId, amp: CoinVector) {
        self.amplitudes.insert(port, amp);
    }

    fn take(&mut self, port: PortId) -> CoinVector {
        self.amplitudes.remove(&port).unwrap_or(CoinVector::ZERO)
    }

    fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }
}

/// Per-layer bookkeeping from [`NetworkLayout::propagate_traced`].
#[derive(Debug, Clone, PartialEq)]
pub struct PropagationTrace {
    /// Live-port norm plus detected plus dark probability after each layer.
    pub layer_totals: Vec<f64>,
    /// Probability absorbed by terminated ports.
    pub dark: f64,
    /// Mode field on the wires leaving each layer (inputs of later layers).
    pub fields: Vec<ModeField>,
}

impl NetworkLayout {
    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn coin_axis(&self) -> f64 {
        self.coin_axis
    }

    pub fn pbsbar_variant(&self) -> PbsBarVariant {
        self.pbsbar_variant
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn wires(&self) -> &BTreeMap<PortId, Sink> {
        &self.wires
    }

    pub fn input_port(&self) -> PortId {
        self.input_port
    }

    pub fn elements(&self) -> impl Iterator<Item = (usize, &Element)> {
        self.layers
            .iter()
            .enumerate()
            .flat_map(|(i, l)| l.elements.iter().map(move |e| (i, e)))
    }

    pub fn coin_layer_count(&self) -> usize {
        self.layers
            .iter()
            .filter(|l| l.role == LayerRole::Coin)
            .count()
    }

    /// Detector labels mapped to lattice positions, descending.
    pub fn detector_positions(&self) -> Vec<i64> {
        self.elements()
            .filter(|(_, e)| e.kind == ElementKind::Detector)
            .map(|(_, e)| e.site.position)
            .collect()
    }

    /// Checks the structural invariants: port arities, unique ports, every
    /// non-detector output wired or terminated, wires pointing to strictly
    /// later layers, at most one wire per input, one detector per reachable
    /// position and one coin layer per step.
    pub fn validate(&self) -> Result<()> {
        let mut in_layer: BTreeMap<PortId, usize> = BTreeMap::new();
        let mut out_layer: BTreeMap<PortId, usize> = BTreeMap::new();
        for (li, e) in self.elements() {
            if e.inputs.len() != e.kind.input_arity() || e.outputs.len() != e.kind.output_arity() {
                return Err(Error::Layout(format!(
                    "{} at site {} in layer {li} has {} inputs and {} outputs",
                    e.kind.name(),
                    e.site,
                    e.inputs.len(),
                    e.outputs.len()
                )));
            }
            for &p in &e.inputs {
                if in_layer.insert(p, li).is_some() || out_layer.contains_key(&p) {
                    return Err(Error::Layout(format!("port {p} is used twice")));
                }
            }
            for &p in &e.outputs {
                if out_layer.insert(p, li).is_some() || in_layer.contains_key(&p) {
                    return Err(Error::Layout(format!("port {p} is used twice")));
                }
            }
        }

        let mut fed: BTreeSet<PortId> = BTreeSet::new();
        for (&from, &sink) in &self.wires {
            let Some(&src_layer) = out_layer.get(&from) else {
                return Err(Error::Layout(format!(
                    "wire starts at {from}, which is not an output port"
                )));
            };
            if let Sink::Port(to) = sink {
                let Some(&dst_layer) = in_layer.get(&to) else {
                    return Err(Error::Layout(format!(
                        "wire {from} -> {to} ends on a non-input port"
                    )));
                };
                if dst_layer <= src_layer {
                    return Err(Error::Layout(format!(
                        "wire {from} -> {to} runs from layer {src_layer} to layer {dst_layer}"
                    )));
                }
                if !fed.insert(to) {
                    return Err(Error::Layout(format!(
                        "input {to} is fed by more than one wire"
                    )));
                }
            }
        }
        for (li, e) in self.elements() {
            for &p in &e.outputs {
                if !self.wires.contains_key(&p) {
                    return Err(Error::Layout(format!(
                        "output {p} of {} at site {} in layer {li} is not wired",
                        e.kind.name(),
                        e.site
                    )));
                }
            }
            if e.kind.input_arity() == 1
                && !fed.contains(&e.inputs[0])
                && e.inputs[0] != self.input_port
            {
                return Err(Error::Layout(format!(
                    "{} at site {} in layer {li} receives no light",
                    e.kind.name(),
                    e.site
                )));
            }
        }
        if in_layer.get(&self.input_port) != Some(&0) || fed.contains(&self.input_port) {
            return Err(Error::Layout(format!(
                "network input {} must be an unfed input of the first layer",
                self.input_port
            )));
        }

        let detectors = self.detector_positions();
        let expected: Vec<i64> = line(self.n_steps).collect();
        if detectors != expected {
            return Err(Error::Layout(format!(
                "detectors at {detectors:?}, expected one at each of {expected:?}"
            )));
        }
        let coins = self.coin_layer_count();
        if coins != self.n_steps {
            return Err(Error::Layout(format!(
                "{coins} coin layers for a {}-step network",
                self.n_steps
            )));
        }
        Ok(())
    }

    /// Detector probabilities for a photon entering with polarization `input`.
    pub fn propagate(&self, input: CoinVector) -> Result<Distribution> {
        self.run(input, false).map(|(d, _)| d)
    }

    /// Like [`NetworkLayout::propagate`], also returning per-layer bookkeeping.
    pub fn propagate_traced(&self, input: CoinVector) -> Result<(Distribution, PropagationTrace)> {
        self.run(input, true)
    }

    fn run(&self, input: CoinVector, trace: bool) -> Result<(Distribution, PropagationTrace)> {
        let mut field = ModeField::default();
        field.insert(self.input_port, input);
        let mut detected: Vec<(i64, f64)> = Vec::with_capacity(self.n_steps + 1);
        let mut detected_total = 0.0;
        let mut dark = 0.0;
        let mut record = PropagationTrace {
            layer_totals: Vec::new(),
            dark: 0.0,
            fields: Vec::new(),
        };
        let mut ins = Vec::with_capacity(2);
        let mut outs = Vec::with_capacity(2);

        for (li, layer) in self.layers.iter().enumerate() {
            for e in &layer.elements {
                ins.clear();
                ins.extend(e.inputs.iter().map(|&p| field.take(p)));
                if e.kind == ElementKind::Detector {
                    let p = ins[0].norm_sqr();
                    detected.push((e.site.position, p));
                    detected_total += p;
                    continue;
                }
                e.kind.scatter(&ins, &mut outs);
                for (&port, &amp) in e.outputs.iter().zip(&outs) {
                    match self.wires.get(&port) {
                        Some(Sink::Port(to)) => field.insert(*to, amp),
                        Some(Sink::Dark) => dark += amp.norm_sqr(),
                        None => {
                            return Err(Error::Layout(format!(
                                "output {port} of {} at site {} in layer {li} is not wired",
                                e.kind.name(),
                                e.site
                            )))
                        }
                    }
                }
            }
            if dark > DARK_TOLERANCE {
                return Err(Error::Layout(format!(
                    "probability {dark:e} reached terminated ports by layer {li}"
                )));
            }
            if trace {
                record
                    .layer_totals
                    .push(field.norm_sqr() + detected_total + dark);
                record.fields.push(field.clone());
            }
        }
        if !field.is_empty() {
            let stray: Vec<String> = field.ports().map(|(p, _)| p.to_string()).collect();
            return Err(Error::Layout(format!(
                "light left on ports with no consuming element: {}",
                stray.join(", ")
            )));
        }
        record.dark = dark;
        Ok((Distribution::from_pairs(0, self.n_steps, detected), record))
    }

    /// Copy of the network with a `PhaseShift` on every wire crossing the cut
    /// between layer `after_layer` and the layers above it. `phase` is called
    /// once per crossing wire, in ascending order of the source port, with the
    /// site of the element the wire leaves.
    pub fn with_phase_layer(
        &self,
        after_layer: usize,
        mut phase: impl FnMut(SiteLabel) -> f64,
    ) -> Result<NetworkLayout> {
        if after_layer + 1 >= self.layers.len() {
            return Err(Error::InvalidArgument(format!(
                "phase layer must sit between existing layers; got cut after layer {after_layer} of {}",
                self.layers.len()
            )));
        }
        let mut src: BTreeMap<PortId, (usize, SiteLabel)> = BTreeMap::new();
        let mut dst: BTreeMap<PortId, usize> = BTreeMap::new();
        let mut max_port = 0;
        for (li, e) in self.elements() {
            for &p in &e.outputs {
                src.insert(p, (li, e.site));
            }
            for &p in &e.inputs {
                dst.insert(p, li);
            }
            max_port = e
                .inputs
                .iter()
                .chain(&e.outputs)
                .fold(max_port, |m, p| m.max(p.0));
        }

        let mut out = self.clone();
        let mut next = max_port + 1;
        let mut elements = Vec::new();
        for (&from, &sink) in &self.wires {
            let Sink::Port(to) = sink else { continue };
            let (src_layer, site) = src[&from];
            if src_layer <= after_layer && dst[&to] > after_layer {
                let (pin, pout) = (PortId(next), PortId(next + 1));
                next += 2;
                elements.push(Element {
                    kind: ElementKind::PhaseShift { phase: phase(site) },
                    site,
                    inputs: vec![pin],
                    outputs: vec![pout],
                });
                out.wires.insert(from, Sink::Port(pin));
                out.wires.insert(pout, Sink::Port(to));
            }
        }
        elements.sort_by_key(|e| std::cmp::Reverse(e.site));
        out.layers.insert(
            after_layer + 1,
            Layer {
                role: LayerRole::Phase,
                elements,
            },
        );
        out.validate()?;
        Ok(out)
    }

    /// Deterministic text dump, one element per line. See the module docs of
    /// [`crate::optics`] for the format.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# qwalk optical network v1");
        let _ = writeln!(s, "steps {}", self.n_steps);
        let _ = writeln!(s, "coin_axis_rad {}", self.coin_axis);
        let _ = writeln!(s, "pbsbar {}", self.pbsbar_variant);
        let _ = writeln!(s, "input {}", self.input_port);
        for (li, e) in self.elements() {
            let angle = match e.kind {
                ElementKind::Hwp { axis_angle } => format!("axis={axis_angle}"),
                ElementKind::PhaseShift { phase } => format!("phase={phase}"),
                _ => "-".to_string(),
            };
            let ins: Vec<String> = e.inputs.iter().map(PortId::to_string).collect();
            let outs: Vec<String> = e
                .outputs
                .iter()
                .map(|p| match self.wires.get(p) {
                    Some(Sink::Port(to)) => format!("{p}>{to}"),
                    Some(Sink::Dark) => format!("{p}>dark"),
                    None => format!("{p}>?"),
                })
                .collect();
            let _ = writeln!(
                s,
                "{li} {} {} {angle} site={} in={} out={}",
                self.layers[li].role.name(),
                e.kind.name(),
                e.site,
                ins.join(","),
                if outs.is_empty() {
                    "-".to_string()
                } else {
                    outs.join(",")
                }
            );
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::CoinOperator;
    use std::f64::consts::FRAC_PI_8;

    fn sites(layout: &NetworkLayout, role: LayerRole) -> Vec<Vec<String>> {
        layout
            .layers()
            .iter()
            .filter(|l| l.role == role)
            .map(|l| l.elements.iter().map(|e| e.site.to_string()).collect())
            .collect()
    }

    #[test]
    fn rejects_zero_steps() {
        assert!(matches!(
            build_network(0, FRAC_PI_8),
            Err(Error::InvalidArgument(_))
        ));
        assert!(build_network(2, f64::NAN).is_err());
    }

    #[test]
    fn single_step_network() {
        let net = build_network(1, FRAC_PI_8).unwrap();
        let kinds: Vec<&str> = net.elements().map(|(_, e)| e.kind.name()).collect();
        assert_eq!(kinds, ["HWP", "PBS", "DET", "DET"]);
        assert_eq!(net.detector_positions(), [1, -1]);
    }

    #[test]
    fn three_step_layout_matches_the_dynamic_line() {
        let net = build_network(3, FRAC_PI_8).unwrap();
        assert_eq!(
            sites(&net, LayerRole::Split),
            [vec!["0"], vec!["1", "-1"], vec!["2", "0'", "-2"]]
        );
        assert_eq!(
            sites(&net, LayerRole::Merge),
            [vec!["0'"], vec!["1'", "-1'"]]
        );
        assert_eq!(sites(&net, LayerRole::Detect), [vec!["3", "1", "-1", "-3"]]);
        assert_eq!(net.detector_positions().len(), 4);
        assert_eq!(net.coin_layer_count(), 3);

        let last_split = net
            .layers()
            .iter()
            .rfind(|l| l.role == LayerRole::Split)
            .unwrap();
        let split: Vec<&str> = last_split.elements.iter().map(|e| e.kind.name()).collect();
        assert_eq!(split, ["PBS", "PBS", "PBSBAR"]);
    }

    #[test]
    fn one_step_propagation() {
        let net = build_network(1, FRAC_PI_8).unwrap();
        let d = net.propagate(CoinVector::horizontal()).unwrap();
        assert!((d.get(1) - 0.5).abs() < 1e-15);
        assert!((d.get(-1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn three_step_propagation() {
        let net = build_network(3, FRAC_PI_8).unwrap();
        let d = net.propagate(CoinVector::horizontal()).unwrap();
        for (x, p) in [(-3, 0.125), (-1, 0.125), (1, 0.625), (3, 0.125)] {
            assert!((d.get(x) - p).abs() < 1e-12, "P({x}) = {}", d.get(x));
        }
        assert_eq!(d.step_count(), 3);
    }

    #[test]
    fn layer_totals_are_conserved() {
        let net = build_network(9, 0.3).unwrap();
        let input = crate::InitialSpec::new(0.4, 2.0).coin_vector();
        let (_, trace) = net.propagate_traced(input).unwrap();
        assert_eq!(trace.layer_totals.len(), net.layers().len());
        for t in trace.layer_totals {
            assert!((t - 1.0).abs() < 1e-12);
        }
        assert_eq!(trace.dark, 0.0);
    }

    #[test]
    fn unwired_output_is_a_layout_error() {
        let mut net = build_network(2, FRAC_PI_8).unwrap();
        let first_split_out = net.layers()[1].elements[0].outputs[0];
        net.wires.remove(&first_split_out);
        assert!(matches!(net.validate(), Err(Error::Layout(_))));
        assert!(matches!(
            net.propagate(CoinVector::horizontal()),
            Err(Error::Layout(_))
        ));
    }

    #[test]
    fn backward_wire_is_rejected() {
        let mut net = build_network(2, FRAC_PI_8).unwrap();
        let out = net.layers()[1].elements[0].outputs[0];
        let back = net.layers()[0].elements[0].inputs[0];
        net.wires.insert(out, Sink::Port(back));
        assert!(net.validate().is_err());
    }

    #[test]
    fn light_on_a_dark_port_is_an_error() {
        let mut net = build_network(2, FRAC_PI_8).unwrap();
        // send a live split output into the dark sink
        let out = net.layers()[1].elements[0].outputs[0];
        net.wires.insert(out, Sink::Dark);
        let err = net.propagate(CoinVector::horizontal());
        assert!(err.is_err());
    }

    #[test]
    fn equal_phases_are_a_gauge() {
        let net = build_network(6, FRAC_PI_8).unwrap();
        let input = crate::InitialSpec::symmetric().coin_vector();
        let base = net.propagate(input).unwrap();
        for cut in [0, 1, 4, 9] {
            let shifted = net.with_phase_layer(cut, |_| 1.234).unwrap();
            assert_eq!(shifted.coin_layer_count(), 6);
            let d = shifted.propagate(input).unwrap();
            assert!(crate::stats::tv_distance(&base, &d) < 1e-13);
        }
    }

    #[test]
    fn unequal_phases_change_the_pattern() {
        let net = build_network(6, FRAC_PI_8).unwrap();
        let input = CoinVector::horizontal();
        let base = net.propagate(input).unwrap();
        // cut after the second split layer: three arms go to the first merge
        let mut k = 0.0;
        let shifted = net
            .with_phase_layer(4, |_| {
                k += 1.0;
                k
            })
            .unwrap();
        let d = shifted.propagate(input).unwrap();
        assert!(crate::stats::tv_distance(&base, &d) > 1e-3);
        assert!((d.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dump_is_deterministic_and_complete() {
        let a = build_network(4, FRAC_PI_8).unwrap().dump();
        let b = build_network(4, FRAC_PI_8).unwrap().dump();
        assert_eq!(a, b);
        let net = build_network(4, FRAC_PI_8).unwrap();
        let element_lines = a.lines().filter(|l| !l.starts_with('#')).count() - 4;
        assert_eq!(element_lines, net.elements().count());
        assert!(a.contains(">dark"));
    }

    #[test]
    fn coin_axis_reaches_every_plate() {
        let net = build_network(5, 0.123).unwrap();
        for (_, e) in net.elements() {
            if let ElementKind::Hwp { axis_angle } = e.kind {
                assert_eq!(axis_angle, 0.123);
            }
        }
        let _ = CoinOperator::half_wave_plate(0.123);
    }
}
