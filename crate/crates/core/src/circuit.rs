//! Reversible-gate intermediate representation.
//!
//! A [`Circuit`] is an ordered list of [`Gate`]s over a fixed number of
//! wires, plus a set of named, disjoint [`Register`]s that give the wires
//! their meaning (key, state block, ancilla, output). Gates are stored in
//! insertion order and never rewritten, so every count reported by
//! [`Circuit::resources`] is exactly the count of the construction that
//! produced the circuit.

use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Errors raised while building or combining circuits.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("wire {wire} is out of range for a {wire_count}-wire circuit")]
    WireOutOfRange { wire: usize, wire_count: usize },
    #[error("gate uses wire {0} more than once")]
    DuplicateWire(usize),
    #[error("wire map is not injective: wire {0} is the image of two wires")]
    NonInjectiveMap(usize),
    #[error("wire map has {got} entries but the circuit has {expected} wires")]
    MapLength { expected: usize, got: usize },
    #[error("register `{name}` overlaps an existing register at wire {wire}")]
    RegisterOverlap { name: String, wire: usize },
    #[error("register name `{0}` is already in use")]
    DuplicateRegister(String),
}

/// The three gate kinds of a classical reversible circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    Not,
    Cnot,
    Toffoli,
}

/// One reversible primitive. Each kind is its own inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    /// Flip `target`.
    Not { target: usize },
    /// Flip `target` when `control` is 1.
    Cnot { control: usize, target: usize },
    /// Flip `target` when both controls are 1.
    Toffoli { c1: usize, c2: usize, target: usize },
}

impl Gate {
    /// Shorthand for [`Gate::Not`].
    pub fn not(target: usize) -> Self {
        Gate::Not { target }
    }

    /// Shorthand for [`Gate::Cnot`].
    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Cnot { control, target }
    }

    /// Shorthand for [`Gate::Toffoli`].
    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Self {
        Gate::Toffoli { c1, c2, target }
    }

    pub fn kind(&self) -> GateKind {
        match self {
            Gate::Not { .. } => GateKind::Not,
            Gate::Cnot { .. } => GateKind::Cnot,
            Gate::Toffoli { .. } => GateKind::Toffoli,
        }
    }

    pub fn target(&self) -> usize {
        match *self {
            Gate::Not { target } | Gate::Cnot { target, .. } | Gate::Toffoli { target, .. } => target,
        }
    }

    /// Control wires, in order (empty for NOT).
    pub fn controls(&self) -> Vec<usize> {
        match *self {
            Gate::Not { .. } => vec![],
            Gate::Cnot { control, .. } => vec![control],
            Gate::Toffoli { c1, c2, .. } => vec![c1, c2],
        }
    }

    /// All wires touched by the gate: controls first, target last.
    pub fn wires(&self) -> Vec<usize> {
        let mut w = self.controls();
        w.push(self.target());
        w
    }

    /// The same gate with every wire `w` replaced by `f(w)`.
    pub fn map_wires(&self, f: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::Not { target } => Gate::Not { target: f(target) },
            Gate::Cnot { control, target } => Gate::Cnot {
                control: f(control),
                target: f(target),
            },
            Gate::Toffoli { c1, c2, target } => Gate::Toffoli {
                c1: f(c1),
                c2: f(c2),
                target: f(target),
            },
        }
    }

    /// Check range and distinctness against a circuit of `wire_count` wires.
    pub fn validate(&self, wire_count: usize) -> Result<(), CircuitError> {
        let wires = self.wires();
        for (i, &w) in wires.iter().enumerate() {
            if w >= wire_count {
                return Err(CircuitError::WireOutOfRange { wire: w, wire_count });
            }
            if wires[..i].contains(&w) {
                return Err(CircuitError::DuplicateWire(w));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::Not { target } => write!(f, "x {target}"),
            Gate::Cnot { control, target } => write!(f, "cx {control} {target}"),
            Gate::Toffoli { c1, c2, target } => write!(f, "ccx {c1} {c2} {target}"),
        }
    }
}

/// What a register is used for; ancilla accounting is by role.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Role {
    Key,
    StateBlock,
    Ancilla,
    Output,
}

impl Role {
    pub fn as_str(&self) -> &'static str {
        match self {
            Role::Key => "key",
            Role::StateBlock => "state-block",
            Role::Ancilla => "ancilla",
            Role::Output => "output",
        }
    }

    pub fn parse(s: &str) -> Option<Role> {
        match s {
            "key" => Some(Role::Key),
            "state-block" => Some(Role::StateBlock),
            "ancilla" => Some(Role::Ancilla),
            "output" => Some(Role::Output),
            _ => None,
        }
    }
}

/// A named, contiguous run of wires `first .. first + count`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Register {
    pub name: String,
    pub role: Role,
    pub first: usize,
    pub count: usize,
}

impl Register {
    pub fn new(name: impl Into<String>, role: Role, first: usize, count: usize) -> Self {
        Register {
            name: name.into(),
            role,
            first,
            count,
        }
    }

    /// Wire `i` of the register.
    pub fn wire(&self, i: usize) -> usize {
        assert!(i < self.count, "register `{}` has no wire {i}", self.name);
        self.first + i
    }

    pub fn wires(&self) -> std::ops::Range<usize> {
        self.first..self.first + self.count
    }

    fn contains(&self, w: usize) -> bool {
        self.wires().contains(&w)
    }
}

/// Exact resource counts of a circuit.
///
/// `depth` is the number of layers of an as-soon-as-possible schedule in
/// which gates on disjoint wire sets share a layer.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ResourceReport {
    pub toffoli: u64,
    pub cnot: u64,
    pub not: u64,
    pub wires: u64,
    pub ancilla_wires: u64,
    pub depth: u64,
}

impl ResourceReport {
    pub fn gate_count(&self) -> u64 {
        self.toffoli + self.cnot + self.not
    }
}

/// An ordered gate sequence over `wire_count` wires with named registers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Circuit {
    wire_count: usize,
    gates: Vec<Gate>,
    registers: Vec<Register>,
}

impl Circuit {
    /// An empty circuit on `wire_count` wires.
    pub fn new(wire_count: usize) -> Self {
        Circuit {
            wire_count,
            gates: Vec::new(),
            registers: Vec::new(),
        }
    }

    /// Build a circuit from a gate list, validating every gate.
    pub fn from_gates(wire_count: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self, CircuitError> {
        let mut c = Circuit::new(wire_count);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn wire_count(&self) -> usize {
        self.wire_count
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn register(&self, name: &str) -> Option<&Register> {
        self.registers.iter().find(|r| r.name == name)
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Append a gate in place.
    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        gate.validate(self.wire_count)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Append a gate, returning the extended circuit.
    pub fn append_gate(mut self, gate: Gate) -> Result<Self, CircuitError> {
        self.push(gate)?;
        Ok(self)
    }

    /// Declare a register; registers must be in range and pairwise disjoint.
    pub fn add_register(&mut self, reg: Register) -> Result<(), CircuitError> {
        if reg.first + reg.count > self.wire_count {
            return Err(CircuitError::WireOutOfRange {
                wire: reg.first + reg.count - 1,
                wire_count: self.wire_count,
            });
        }
        if self.register(&reg.name).is_some() {
            return Err(CircuitError::DuplicateRegister(reg.name));
        }
        for other in &self.registers {
            if let Some(w) = reg.wires().find(|&w| other.contains(w)) {
                return Err(CircuitError::RegisterOverlap {
                    name: reg.name,
                    wire: w,
                });
            }
        }
        self.registers.push(reg);
        Ok(())
    }

    /// Append all of `b`'s gates with wire `i` of `b` sent to `wire_map[i]`.
    pub fn extend_mapped(&mut self, b: &Circuit, wire_map: &[usize]) -> Result<(), CircuitError> {
        check_wire_map(wire_map, b.wire_count, self.wire_count)?;
        self.gates.extend(b.gates.iter().map(|g| g.map_wires(|w| wire_map[w])));
        Ok(())
    }

    /// Append all of `b`'s gates on the same wire indices.
    pub fn extend(&mut self, b: &Circuit) -> Result<(), CircuitError> {
        let id: Vec<usize> = (0..b.wire_count).collect();
        self.extend_mapped(b, &id)
    }

    /// `a` followed by `b`, with `b`'s wires relabelled through `wire_map`.
    /// Registers of `a` are kept; `b`'s registers are dropped.
    pub fn compose(&self, b: &Circuit, wire_map: &[usize]) -> Result<Circuit, CircuitError> {
        let mut out = self.clone();
        out.extend_mapped(b, wire_map)?;
        Ok(out)
    }

    /// The inverse circuit: the gate sequence reversed.
    pub fn invert(&self) -> Circuit {
        Circuit {
            wire_count: self.wire_count,
            gates: self.gates.iter().rev().copied().collect(),
            registers: self.registers.clone(),
        }
    }

    /// The same gates with every wire relabelled by the permutation `perm`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Circuit, CircuitError> {
        check_wire_map(perm, self.wire_count, self.wire_count)?;
        Ok(Circuit {
            wire_count: self.wire_count,
            gates: self.gates.iter().map(|g| g.map_wires(|w| perm[w])).collect(),
            registers: Vec::new(),
        })
    }

    /// Exact gate counts, wire counts and ASAP depth.
    pub fn resources(&self) -> ResourceReport {
        let mut r = ResourceReport {
            wires: self.wire_count as u64,
            ancilla_wires: self
                .registers
                .iter()
                .filter(|reg| reg.role == Role::Ancilla)
                .map(|reg| reg.count as u64)
                .sum(),
            ..ResourceReport::default()
        };
        for g in &self.gates {
            match g.kind() {
                GateKind::Not => r.not += 1,
                GateKind::Cnot => r.cnot += 1,
                GateKind::Toffoli => r.toffoli += 1,
            }
        }
        r.depth = self.depth();
        r
    }

    /// Number of layers in the as-soon-as-possible schedule.
    pub fn depth(&self) -> u64 {
        let mut level = vec![0u64; self.wire_count];
        let mut depth = 0;
        for g in &self.gates {
            let wires = g.wires();
            let l = wires.iter().map(|&w| level[w]).max().unwrap_or(0) + 1;
            for w in wires {
                level[w] = l;
            }
            depth = depth.max(l);
        }
        depth
    }
}

fn check_wire_map(map: &[usize], source: usize, dest: usize) -> Result<(), CircuitError> {
    if map.len() != source {
        return Err(CircuitError::MapLength {
            expected: source,
            got: map.len(),
        });
    }
    let mut seen = vec![false; dest];
    for &w in map {
        if w >= dest {
            return Err(CircuitError::WireOutOfRange {
                wire: w,
                wire_count: dest,
            });
        }
        if std::mem::replace(&mut seen[w], true) {
            return Err(CircuitError::NonInjectiveMap(w));
        }
    }
    Ok(())
}
