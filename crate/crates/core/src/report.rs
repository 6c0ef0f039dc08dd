//! Per-component resource breakdowns of built circuits.
//!
//! Builders tag every gate they emit with the [`Component`] it belongs to by
//! recording a [`Segment`] (a gate range) per application. [`breakdown`]
//! then groups the segments, so the per-component rows always add up to the
//! circuit's top-level counts.

use crate::circuit::{Circuit, Gate, GateKind};
use serde::Serialize;
use std::ops::Range;

/// Operation kinds used in the per-operation cost tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Component {
    /// Key initialization: NOT gates on the 1-bits of the key.
    #[serde(rename = "IK")]
    KeyInit,
    /// Plaintext toggle: NOT gates on the 1-bits of the plaintext.
    #[serde(rename = "P")]
    Plaintext,
    /// One S-box in a round (forward or uncompute).
    #[serde(rename = "SB")]
    SubBytes,
    /// One XOR-into S-box in the key schedule.
    #[serde(rename = "SB*")]
    SubBytesXor,
    /// One MixColumns column (forward or inverse).
    #[serde(rename = "MC")]
    MixColumns,
    /// One AddRoundKey over a whole state.
    #[serde(rename = "ARK")]
    AddRoundKey,
    /// Round-constant NOT gates of one key-schedule step.
    #[serde(rename = "RC")]
    RoundConstant,
    /// The XOR cascade of one key-schedule step.
    #[serde(rename = "Others")]
    Others,
    /// Basis restoration of an S-box input nibble (S-AES).
    #[serde(rename = "Restore")]
    BasisRestore,
    /// Change of the linear frame of a key nibble before an XOR-into S-box (S-AES).
    #[serde(rename = "Frame")]
    FrameChange,
}

impl Component {
    pub fn label(&self) -> &'static str {
        match self {
            Component::KeyInit => "IK",
            Component::Plaintext => "P",
            Component::SubBytes => "SB",
            Component::SubBytesXor => "SB*",
            Component::MixColumns => "MC",
            Component::AddRoundKey => "ARK",
            Component::RoundConstant => "RC",
            Component::Others => "Others",
            Component::BasisRestore => "Restore",
            Component::FrameChange => "Frame",
        }
    }
}

/// A contiguous range of gates belonging to one application of a component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub component: Component,
    pub gates: Range<usize>,
    /// The segment finishes an application started by an earlier segment
    /// (an operation split around other gates); it adds gates but does not
    /// count as a new application.
    pub continued: bool,
}

/// Totals of one component over a circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComponentCount {
    pub component: Component,
    /// Number of applications (segments).
    pub applications: u64,
    pub toffoli: u64,
    pub cnot: u64,
    pub not: u64,
}

/// Records segments while a builder appends gates to a circuit.
#[derive(Debug, Clone)]
pub struct SegmentedCircuit {
    pub circuit: Circuit,
    pub segments: Vec<Segment>,
}

impl SegmentedCircuit {
    pub fn new(circuit: Circuit) -> Self {
        SegmentedCircuit {
            circuit,
            segments: Vec::new(),
        }
    }

    /// Append gates as one application of `component`.
    pub fn emit(&mut self, component: Component, gates: impl IntoIterator<Item = Gate>) {
        self.push_segment(component, gates, false);
    }

    /// Append gates that finish an application begun by an earlier [`emit`](Self::emit).
    pub fn emit_continued(&mut self, component: Component, gates: impl IntoIterator<Item = Gate>) {
        self.push_segment(component, gates, true);
    }

    fn push_segment(&mut self, component: Component, gates: impl IntoIterator<Item = Gate>, continued: bool) {
        let start = self.circuit.len();
        for g in gates {
            self.circuit.push(g).expect("builders emit in-range gates");
        }
        self.segments.push(Segment {
            component,
            gates: start..self.circuit.len(),
            continued,
        });
    }

    /// Append `c` with its wire `i` sent to `map[i]`, as one application.
    pub fn emit_mapped(&mut self, component: Component, c: &Circuit, map: &[usize]) {
        self.emit(component, c.gates().iter().map(|g| g.map_wires(|w| map[w])));
    }
}

/// Group the segments by component. Gates outside every segment are not
/// counted; [`uncovered_gates`] reports them.
pub fn breakdown(circuit: &Circuit, segments: &[Segment]) -> Vec<ComponentCount> {
    let mut rows: Vec<ComponentCount> = Vec::new();
    for s in segments {
        let idx = match rows.iter().position(|r| r.component == s.component) {
            Some(i) => i,
            None => {
                rows.push(ComponentCount {
                    component: s.component,
                    applications: 0,
                    toffoli: 0,
                    cnot: 0,
                    not: 0,
                });
                rows.len() - 1
            }
        };
        let row = &mut rows[idx];
        if !s.continued {
            row.applications += 1;
        }
        for g in &circuit.gates()[s.gates.clone()] {
            match g.kind() {
                GateKind::Toffoli => row.toffoli += 1,
                GateKind::Cnot => row.cnot += 1,
                GateKind::Not => row.not += 1,
            }
        }
    }
    rows.sort_by_key(|r| r.component);
    rows
}

/// Number of gates not covered by exactly one segment.
pub fn uncovered_gates(circuit: &Circuit, segments: &[Segment]) -> usize {
    let mut cover = vec![0u8; circuit.len()];
    for s in segments {
        for c in &mut cover[s.gates.clone()] {
            *c = c.saturating_add(1);
        }
    }
    cover.iter().filter(|&&c| c != 1).count()
}
