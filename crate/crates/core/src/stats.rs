//! Resource reports of the built ciphers, ready for printing or serializing.

use crate::aes::{self, build_aes128, SboxMode};
use crate::circuit::ResourceReport;
use crate::estimate::{
    aes128_cnot_discrepancy, estimate, model_from_breakdown, new_zigzag_model, published_saes_model,
    published_zigzag_model, CnotDiscrepancy, CostModel, Estimate,
};
use crate::report::{breakdown, Component, ComponentCount};
use crate::saes::{self, build_saes, SaesSboxOptions};
use serde::Serialize;
use std::fmt::Write;

/// Version tag of the [`StatsDocument`] field layout.
pub const STATS_SCHEMA: &str = "revcirc-stats/1";

/// Which cipher a report covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Cipher {
    Saes,
    Aes128,
}

/// Which schedule produced the numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Schedule {
    /// Built gate by gate and counted.
    Zigzag,
    /// Multiplied out from the published per-operation table; no circuit.
    NewZigzagEstimate,
}

/// A measured number next to the published one it is compared with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub quantity: String,
    pub measured: u64,
    pub published: u64,
}

/// Everything `stats` reports about one circuit or model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsDocument {
    pub schema: &'static str,
    pub cipher: Cipher,
    pub schedule: Schedule,
    /// Counts of the built circuit (absent for estimates).
    pub resources: Option<ResourceReport>,
    /// Per-component rows; they add up to `resources`.
    pub breakdown: Vec<ComponentCount>,
    /// The published per-operation table multiplied out.
    pub published_model: Estimate,
    pub comparisons: Vec<Comparison>,
    /// Set for AES-128: the published per-operation and printed CNOT totals disagree.
    pub cnot_discrepancy: Option<CnotDiscrepancy>,
    pub notes: Vec<String>,
}

impl StatsDocument {
    /// Human-readable table.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let w = &mut s;
        let cipher = match self.cipher {
            Cipher::Saes => "S-AES",
            Cipher::Aes128 => "AES-128",
        };
        let schedule = match self.schedule {
            Schedule::Zigzag => "zigzag (built)",
            Schedule::NewZigzagEstimate => "new zigzag (analytic estimate)",
        };
        writeln!(w, "{cipher} — {schedule}").ok();
        if let Some(r) = &self.resources {
            writeln!(
                w,
                "toffoli {}  cnot {}  not {}  wires {}  ancilla {}  depth {}",
                r.toffoli, r.cnot, r.not, r.wires, r.ancilla_wires, r.depth
            )
            .ok();
        }
        if !self.breakdown.is_empty() {
            writeln!(
                w,
                "\n{:<8} {:>6} {:>8} {:>8} {:>6}",
                "op", "times", "toffoli", "cnot", "not"
            )
            .ok();
            for r in &self.breakdown {
                writeln!(
                    w,
                    "{:<8} {:>6} {:>8} {:>8} {:>6}",
                    r.component.label(),
                    r.applications,
                    r.toffoli,
                    r.cnot,
                    r.not
                )
                .ok();
            }
        }
        let m = &self.published_model;
        writeln!(
            w,
            "\npublished table: toffoli {}  cnot {}  not {}  qubits {} + {} ancilla",
            m.toffoli, m.cnot, m.not, m.data_qubits, m.ancilla_qubits
        )
        .ok();
        if !self.comparisons.is_empty() {
            writeln!(w, "\n{:<28} {:>10} {:>10}", "quantity", "measured", "published").ok();
            for c in &self.comparisons {
                let mark = if c.measured == c.published { "" } else { "  (differs)" };
                writeln!(w, "{:<28} {:>10} {:>10}{mark}", c.quantity, c.measured, c.published).ok();
            }
        }
        if let Some(d) = &self.cnot_discrepancy {
            writeln!(
                w,
                "\nCNOT discrepancy: per-operation table gives {}, printed total is {}",
                d.per_op_derived, d.printed
            )
            .ok();
        }
        for n in &self.notes {
            writeln!(w, "note: {n}").ok();
        }
        s
    }
}

fn cmp(quantity: &str, measured: u64, published: u64) -> Comparison {
    Comparison {
        quantity: quantity.into(),
        measured,
        published,
    }
}

fn row(rows: &[ComponentCount], c: Component) -> Option<&ComponentCount> {
    rows.iter().find(|r| r.component == c)
}

/// Stats of the built AES-128 circuit for a key and plaintext.
pub fn aes128_stats(key: &[u8; 16], plaintext: &[u8; 16]) -> StatsDocument {
    let b = build_aes128(key, plaintext);
    let r = b.circuit.resources();
    let rows = breakdown(&b.circuit, &b.segments);
    let fresh = aes::aes_subbytes(SboxMode::Fresh).resources();
    let xor = aes::aes_subbytes(SboxMode::Xor).resources();
    let mc = aes::aes_mixcolumn().len() as u64;
    let published = estimate(&published_zigzag_model());
    let count = |c| row(&rows, c).map_or(0, |r| r.applications);
    StatsDocument {
        schema: STATS_SCHEMA,
        cipher: Cipher::Aes128,
        schedule: Schedule::Zigzag,
        resources: Some(r),
        breakdown: rows.clone(),
        published_model: published,
        comparisons: vec![
            cmp("total toffoli", r.toffoli, published.toffoli),
            cmp("total cnot", r.cnot, crate::estimate::AES128_PRINTED_CNOT),
            cmp("total not", r.not, published.not),
            cmp("wires", r.wires, published.qubits()),
            cmp("SB toffoli", fresh.toffoli, 55),
            cmp("SB cnot", fresh.cnot, 314),
            cmp("SB not", fresh.not, 4),
            cmp("SB* cnot", xor.cnot, 322),
            cmp("SB ancilla", fresh.ancilla_wires, 16),
            cmp("MC cnot per column", mc, 277),
            cmp("SB applications", count(Component::SubBytes), 256),
            cmp("SB* applications", count(Component::SubBytesXor), 72),
            cmp("ARK applications", count(Component::AddRoundKey), 16),
            cmp("MC applications", count(Component::MixColumns), 60),
            cmp("Others applications", count(Component::Others), 18),
            cmp("P applications", count(Component::Plaintext), 4),
            cmp("RC not", row(&rows, Component::RoundConstant).map_or(0, |r| r.not), 24),
        ],
        cnot_discrepancy: Some(aes128_cnot_discrepancy()),
        notes: vec![
            format!(
                "the S-box is compiled from the 113-gate Boyar–Peralta program: {} Toffoli instead of 55",
                fresh.toffoli
            ),
            format!(
                "SB* is the 8-CNOT output fix followed by the S-box core; depth SB* {}, SB {}",
                xor.depth, fresh.depth
            ),
        ],
    }
}

/// Stats of the built S-AES circuit for a key and plaintext.
pub fn saes_stats(key: u16, plaintext: u16) -> StatsDocument {
    let b = build_saes(key, plaintext);
    let r = b.circuit.resources();
    let rows = breakdown(&b.circuit, &b.segments);
    let published = estimate(&published_saes_model());
    let sb = saes::saes_subbytes(SaesSboxOptions::BARE).resources();
    let inv = saes::gf16_inversion().resources();
    let mc = saes::saes_mixcolumn().len() as u64;
    let get = |c| row(&rows, c).map_or(0, |r| r.cnot);
    StatsDocument {
        schema: STATS_SCHEMA,
        cipher: Cipher::Saes,
        schedule: Schedule::Zigzag,
        resources: Some(r),
        breakdown: rows.clone(),
        published_model: published,
        comparisons: vec![
            cmp("total toffoli", r.toffoli, 168),
            cmp("total cnot", r.cnot, 364),
            cmp("total not", r.not, 75),
            cmp("wires", r.wires, 48),
            cmp("SB cnot", sb.cnot, 23),
            cmp("inversion cnot", inv.cnot, 11),
            cmp("MC cnot per column", mc, 20),
        ],
        cnot_discrepancy: None,
        notes: vec![
            format!(
                "CNOT delta over 364: inversion +{}, MixColumns +{}, basis restores +{}, frame changes +{}",
                12 * (inv.cnot - 11),
                2 * (mc - 20),
                get(Component::BasisRestore),
                get(Component::FrameChange)
            ),
            "NOT gates depend on the key and plaintext; 75 is the all-ones value".into(),
        ],
    }
}

/// Stats of the new zig-zag variant, from its published table only.
pub fn new_zigzag_stats() -> StatsDocument {
    let model: CostModel = new_zigzag_model();
    StatsDocument {
        schema: STATS_SCHEMA,
        cipher: Cipher::Aes128,
        schedule: Schedule::NewZigzagEstimate,
        resources: None,
        breakdown: Vec::new(),
        published_model: estimate(&model),
        comparisons: Vec::new(),
        cnot_discrepancy: None,
        notes: vec!["analytic estimate; no circuit is built for this variant".into()],
    }
}

/// The built circuit's breakdown as a cost model, for cross-checking
/// [`estimate`] against the circuit's own counts.
pub fn aes128_measured_model(key: &[u8; 16], plaintext: &[u8; 16]) -> (CostModel, ResourceReport) {
    let b = build_aes128(key, plaintext);
    let rows = breakdown(&b.circuit, &b.segments);
    let r = b.circuit.resources();
    (model_from_breakdown("zigzag (built)", &rows, 640, 16), r)
}
