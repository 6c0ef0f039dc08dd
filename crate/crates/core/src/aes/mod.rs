//! AES-128 as a 656-wire reversible circuit.
//!
//! # Layout
//!
//! | wires      | register              | contents                          |
//! |------------|-----------------------|-----------------------------------|
//! | `0..512`   | `r{k}c{j}` (16 × 32)  | four 128-wire state blocks R0..R3 |
//! | `512..640` | `key`                 | the key, expanded in place        |
//! | `640..656` | `anc`                 | S-box ancillas, always back at 0  |
//!
//! Every 128-wire register stores sixteen bytes in the standard column-major
//! order, byte `i` on wires `8i..8i+8` of the register, most significant bit
//! first. A 32-wire register `r{k}c{j}` is column `j` of block `Rk`.
//!
//! # Schedule
//!
//! The plaintext is XORed into the key register before round 1, so the first
//! round reads the initial AddRoundKey output straight from the key wires.
//! Four state blocks are enough for ten rounds because finished states are
//! uncomputed in a zig-zag: after round 4 the circuit runs rounds 3, 2 and 1
//! backwards, which frees R0..R2, and it repeats the pattern later. The key
//! register has to hold the matching round key whenever a round reads it, so
//! the schedule walks the key backwards and forwards with [`key_expand_round`]
//! and its inverse. [`zigzag_schedule`] lists the steps.

pub mod sbox;

use crate::circuit::{Circuit, Gate, Register, Role};
use crate::gf2::synth_inplace_linear_search;
use crate::reference::{aes_mixcolumn_matrix, aes_rcon};
use crate::report::{Component, Segment, SegmentedCircuit};
use crate::sim::BitState;
pub use sbox::{aes_subbytes, output_affine_fix, sbox_phases, SboxMode, SBOX_ANCILLAS, SBOX_WIRES};
use std::fmt;
use std::ops::Range;
use std::sync::OnceLock;

/// Total wires of the AES-128 circuit.
pub const AES_WIRES: usize = 656;
/// Wires of one 128-bit state block or of the key register.
pub const BLOCK_WIRES: usize = 128;
/// Restarts of the seeded linear-layer search used for MixColumns.
pub const MIXCOLUMN_SEARCH_RESTARTS: usize = 48;

/// Wire assignment of the AES-128 circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AesLayout {
    /// First wire of each state block R0..R3.
    pub state: [usize; 4],
    /// First wire of the key register.
    pub key: usize,
    /// First wire of the ancilla register.
    pub ancilla: usize,
    /// The state block that holds the ciphertext at the end.
    pub output: usize,
}

impl Default for AesLayout {
    fn default() -> Self {
        AesLayout {
            state: [0, 128, 256, 384],
            key: 512,
            ancilla: 640,
            output: 0,
        }
    }
}

impl AesLayout {
    /// Wires of a 128-wire block.
    pub fn block(&self, b: Block) -> Range<usize> {
        let first = match b {
            Block::Key => self.key,
            Block::State(k) => self.state[k],
        };
        first..first + BLOCK_WIRES
    }

    /// Wires of byte `i` (column-major index) of a block.
    pub fn byte(&self, b: Block, i: usize) -> Range<usize> {
        let first = self.block(b).start + 8 * i;
        first..first + 8
    }

    pub fn ancillas(&self) -> Range<usize> {
        self.ancilla..self.ancilla + SBOX_ANCILLAS
    }

    /// A fresh circuit with every register of the layout declared.
    pub fn empty_circuit(&self) -> Circuit {
        let mut c = Circuit::new(AES_WIRES);
        for (k, &first) in self.state.iter().enumerate() {
            for j in 0..4 {
                c.add_register(Register::new(format!("r{k}c{j}"), Role::StateBlock, first + 32 * j, 32))
                    .expect("disjoint layout");
            }
        }
        c.add_register(Register::new("key", Role::Key, self.key, BLOCK_WIRES))
            .expect("disjoint layout");
        c.add_register(Register::new("anc", Role::Ancilla, self.ancilla, SBOX_ANCILLAS))
            .expect("disjoint layout");
        c
    }

    /// Read the sixteen bytes of a block from a simulated state.
    pub fn read_block(&self, s: &BitState, b: Block) -> [u8; 16] {
        std::array::from_fn(|i| s.read_uint(self.byte(b, i)) as u8)
    }
}

/// A 128-wire register: the key register or one of the state blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Block {
    Key,
    State(usize),
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Block::Key => write!(f, "K"),
            Block::State(k) => write!(f, "R{k}"),
        }
    }
}

/// ShiftRows as a byte relabelling: output byte `i` is input byte `perm[i]`.
///
/// Row `r` rotates left by `r`, so output `(r, c)` reads input `(r, c + r mod 4)`.
pub fn shiftrows_permutation() -> [usize; 16] {
    std::array::from_fn(|i| {
        let (r, c) = (i % 4, i / 4);
        4 * ((c + r) % 4) + r
    })
}

/// One MixColumns column as an in-place CNOT circuit on 32 wires.
///
/// The circuit is the shortest found by the seeded weight-reduction search
/// of [`synth_inplace_linear_search`], which never exceeds Gauss–Jordan.
pub fn aes_mixcolumn() -> Circuit {
    static CELL: OnceLock<Circuit> = OnceLock::new();
    CELL.get_or_init(|| {
        synth_inplace_linear_search(&aes_mixcolumn_matrix(), MIXCOLUMN_SEARCH_RESTARTS, 0x4d43)
            .expect("MixColumns is invertible")
    })
    .clone()
}

/// AddRoundKey: 128 CNOTs, key wire `i` controlling state wire `i`.
pub fn add_round_key(layout: &AesLayout, state: usize) -> Vec<Gate> {
    layout
        .block(Block::Key)
        .zip(layout.block(Block::State(state)))
        .map(|(k, s)| Gate::cnot(k, s))
        .collect()
}

/// Wire map sending an S-box's local wires onto `input` byte, `output` byte and the ancillas.
fn sbox_map(layout: &AesLayout, input: Range<usize>, output: Range<usize>) -> Vec<usize> {
    input.chain(output).chain(layout.ancillas()).collect()
}

/// Key-schedule round `i` (1..=10) in place on the key register.
///
/// With the round-`i−1` key in words `w0..w3`, four XOR-into S-boxes add
/// `SubWord(RotWord(w3))` into `w0` (the rotation is only a choice of
/// control bytes), NOT gates add `Rcon_i`, and a 96-CNOT cascade forms
/// `w1 ^= w0`, `w2 ^= w1`, `w3 ^= w2`.
fn key_expand_segments(sc: &mut SegmentedCircuit, layout: &AesLayout, i: usize) {
    let sbox = aes_subbytes(SboxMode::Xor);
    for r in 0..4 {
        let map = sbox_map(
            layout,
            layout.byte(Block::Key, 12 + (r + 1) % 4),
            layout.byte(Block::Key, r),
        );
        sc.emit_mapped(Component::SubBytesXor, &sbox, &map);
    }
    let rc = aes_rcon(i);
    let byte0 = layout.byte(Block::Key, 0);
    sc.emit(
        Component::RoundConstant,
        byte0
            .enumerate()
            .filter(|&(b, _)| (rc >> (7 - b)) & 1 == 1)
            .map(|(_, w)| Gate::not(w)),
    );
    let key = layout.block(Block::Key);
    sc.emit(
        Component::Others,
        (1..4).flat_map(|word| {
            (0..32).map(move |b| Gate::cnot(key.start + 32 * (word - 1) + b, key.start + 32 * word + b))
        }),
    );
}

/// Key-schedule round `i` as a standalone circuit on the AES layout.
pub fn key_expand_round(i: usize) -> Circuit {
    let layout = AesLayout::default();
    let mut sc = SegmentedCircuit::new(layout.empty_circuit());
    key_expand_segments(&mut sc, &layout, i);
    sc.circuit
}

/// One step of the zig-zag schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScheduleStep {
    /// NOT gates on the key's 1-bits.
    KeyInit,
    /// NOT gates on the plaintext's 1-bits, applied to the key register.
    PlaintextToggle,
    /// SubBytes + ShiftRows from `src` into the zero block `dst`, then MixColumns (not in round 10).
    Round { round: usize, src: Block, dst: usize },
    /// The inverse of `Round`: `dst` returns to zero.
    InverseRound { round: usize, src: Block, dst: usize },
    /// Round key `i−1` → round key `i` in the key register.
    KeyExpand(usize),
    /// Round key `i` → round key `i−1`.
    KeyUnexpand(usize),
    /// XOR round key `round` (currently in the key register) into a state block.
    AddRoundKey { round: usize, block: usize },
}

impl fmt::Display for ScheduleStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScheduleStep::KeyInit => write!(f, "IK"),
            ScheduleStep::PlaintextToggle => write!(f, "P"),
            ScheduleStep::Round { round, src, dst } => write!(f, "Round {round} ({src} -> R{dst})"),
            ScheduleStep::InverseRound { round, src, dst } => write!(f, "Inverse {round} ({src} -> R{dst})"),
            ScheduleStep::KeyExpand(i) => write!(f, "KE{i}"),
            ScheduleStep::KeyUnexpand(i) => write!(f, "KU{i}"),
            ScheduleStep::AddRoundKey { round, block } => write!(f, "ARK{round} -> R{block}"),
        }
    }
}

/// The full step list: ten forward rounds, six inverse rounds.
pub fn zigzag_schedule() -> Vec<ScheduleStep> {
    use Block::{Key, State};
    use ScheduleStep::*;
    let round = |round, src, dst| Round { round, src, dst };
    let inverse = |round, src, dst| InverseRound { round, src, dst };
    let ark = |round, block| AddRoundKey { round, block };
    vec![
        KeyInit,
        PlaintextToggle,
        round(1, Key, 0),
        PlaintextToggle,
        KeyExpand(1),
        ark(1, 0),
        round(2, State(0), 1),
        KeyExpand(2),
        ark(2, 1),
        round(3, State(1), 2),
        KeyExpand(3),
        ark(3, 2),
        round(4, State(2), 3),
        // unwind rounds 3, 2, 1 to free R2, R1, R0
        ark(3, 2),
        inverse(3, State(1), 2),
        KeyUnexpand(3),
        ark(2, 1),
        inverse(2, State(0), 1),
        KeyUnexpand(2),
        ark(1, 0),
        KeyUnexpand(1),
        PlaintextToggle,
        inverse(1, Key, 0),
        PlaintextToggle,
        KeyExpand(1),
        KeyExpand(2),
        KeyExpand(3),
        KeyExpand(4),
        ark(4, 3),
        round(5, State(3), 0),
        KeyExpand(5),
        ark(5, 0),
        round(6, State(0), 1),
        KeyExpand(6),
        ark(6, 1),
        round(7, State(1), 2),
        // unwind rounds 6, 5 to free R1, R0
        ark(6, 1),
        inverse(6, State(0), 1),
        KeyUnexpand(6),
        ark(5, 0),
        inverse(5, State(3), 0),
        KeyExpand(6),
        KeyExpand(7),
        ark(7, 2),
        round(8, State(2), 0),
        KeyExpand(8),
        ark(8, 0),
        round(9, State(0), 1),
        // unwind round 8 to free R0
        ark(8, 0),
        inverse(8, State(2), 0),
        KeyExpand(9),
        ark(9, 1),
        round(10, State(1), 0),
        KeyExpand(10),
        ark(10, 0),
    ]
}

/// Aggregate operation counts of a schedule.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct Multiplicities {
    /// S-boxes in rounds and inverse rounds.
    pub sb: u64,
    /// XOR-into S-boxes in the key schedule.
    pub sb_star: u64,
    pub ark: u64,
    /// MixColumns columns, forward and inverse.
    pub mc: u64,
    /// Key-schedule XOR cascades.
    pub others: u64,
    pub plaintext_toggles: u64,
    pub key_inits: u64,
    /// Round-constant NOT gates in total.
    pub rc_not: u64,
}

/// Count operations of a step list.
pub fn multiplicities(steps: &[ScheduleStep]) -> Multiplicities {
    let mut m = Multiplicities::default();
    for s in steps {
        match *s {
            ScheduleStep::KeyInit => m.key_inits += 1,
            ScheduleStep::PlaintextToggle => m.plaintext_toggles += 1,
            ScheduleStep::Round { round, .. } | ScheduleStep::InverseRound { round, .. } => {
                m.sb += 16;
                if round < 10 {
                    m.mc += 4;
                }
            }
            ScheduleStep::KeyExpand(i) | ScheduleStep::KeyUnexpand(i) => {
                m.sb_star += 4;
                m.others += 1;
                m.rc_not += aes_rcon(i).count_ones() as u64;
            }
            ScheduleStep::AddRoundKey { .. } => m.ark += 1,
        }
    }
    m
}

/// A built AES-128 circuit with its schedule bookkeeping.
#[derive(Debug, Clone)]
pub struct AesBuild {
    pub circuit: Circuit,
    pub layout: AesLayout,
    /// Every gate belongs to exactly one segment.
    pub segments: Vec<Segment>,
    /// Gate range of every schedule step, in order.
    pub steps: Vec<(ScheduleStep, Range<usize>)>,
}

fn round_segments(sc: &mut SegmentedCircuit, layout: &AesLayout, round: usize, src: Block, dst: usize) {
    let sbox = aes_subbytes(SboxMode::Fresh);
    let perm = shiftrows_permutation();
    for (out, &inp) in perm.iter().enumerate() {
        let map = sbox_map(layout, layout.byte(src, inp), layout.byte(Block::State(dst), out));
        sc.emit_mapped(Component::SubBytes, &sbox, &map);
    }
    if round < 10 {
        let mc = aes_mixcolumn();
        for col in 0..4 {
            let first = layout.block(Block::State(dst)).start + 32 * col;
            let map: Vec<usize> = (first..first + 32).collect();
            sc.emit_mapped(Component::MixColumns, &mc, &map);
        }
    }
}

fn toggle_bits(layout: &AesLayout, bytes: &[u8; 16]) -> Vec<Gate> {
    (0..16)
        .flat_map(|i| {
            layout
                .byte(Block::Key, i)
                .enumerate()
                .filter(move |&(b, _)| (bytes[i] >> (7 - b)) & 1 == 1)
                .map(|(_, w)| Gate::not(w))
        })
        .collect()
}

/// Build the full circuit for a concrete key and plaintext.
pub fn build_aes128(key: &[u8; 16], plaintext: &[u8; 16]) -> AesBuild {
    build_aes128_with(&zigzag_schedule(), key, plaintext)
}

/// Build a circuit for an arbitrary step list on the default layout.
pub fn build_aes128_with(steps: &[ScheduleStep], key: &[u8; 16], plaintext: &[u8; 16]) -> AesBuild {
    let layout = AesLayout::default();
    let mut sc = SegmentedCircuit::new(layout.empty_circuit());
    let mut ranges = Vec::with_capacity(steps.len());
    for &step in steps {
        let start = sc.circuit.len();
        match step {
            ScheduleStep::KeyInit => sc.emit(Component::KeyInit, toggle_bits(&layout, key)),
            ScheduleStep::PlaintextToggle => sc.emit(Component::Plaintext, toggle_bits(&layout, plaintext)),
            ScheduleStep::Round { round, src, dst } => round_segments(&mut sc, &layout, round, src, dst),
            ScheduleStep::InverseRound { round, src, dst } => {
                let mut fwd = SegmentedCircuit::new(Circuit::new(AES_WIRES));
                round_segments(&mut fwd, &layout, round, src, dst);
                append_inverse(&mut sc, &fwd);
            }
            ScheduleStep::KeyExpand(i) => key_expand_segments(&mut sc, &layout, i),
            ScheduleStep::KeyUnexpand(i) => {
                let mut fwd = SegmentedCircuit::new(Circuit::new(AES_WIRES));
                key_expand_segments(&mut fwd, &layout, i);
                append_inverse(&mut sc, &fwd);
            }
            ScheduleStep::AddRoundKey { block, .. } => sc.emit(Component::AddRoundKey, add_round_key(&layout, block)),
        }
        ranges.push((step, start..sc.circuit.len()));
    }
    AesBuild {
        circuit: sc.circuit,
        layout,
        segments: sc.segments,
        steps: ranges,
    }
}

/// Append the inverse of `fwd`, keeping one segment per inverted segment.
fn append_inverse(sc: &mut SegmentedCircuit, fwd: &SegmentedCircuit) {
    for seg in fwd.segments.iter().rev() {
        let gates = fwd.circuit.gates()[seg.gates.clone()].iter().rev().copied();
        if seg.continued {
            sc.emit_continued(seg.component, gates);
        } else {
            sc.emit(seg.component, gates);
        }
    }
}

/// A block that was supposed to be zero after an inverse round was not.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("after step {step_index} ({step}) block R{block} reads {value:02x?} instead of zero")]
pub struct ZeroCheckFailure {
    pub step_index: usize,
    pub step: String,
    pub block: usize,
    pub value: [u8; 16],
}

/// Outcome of a checked simulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AesRun {
    pub ciphertext: [u8; 16],
    /// Number of inverse rounds whose block was checked to be zero.
    pub zero_checks: usize,
    /// Ancillas were zero at the end.
    pub ancillas_clean: bool,
}

/// Simulate from the all-zero state, checking after every inverse round that
/// its block is zero again.
pub fn simulate_checked(build: &AesBuild) -> Result<AesRun, ZeroCheckFailure> {
    let mut s = BitState::zeros(build.circuit.wire_count());
    let gates = build.circuit.gates();
    let mut zero_checks = 0;
    for (idx, (step, range)) in build.steps.iter().enumerate() {
        s.apply_all(&gates[range.clone()]);
        if let ScheduleStep::InverseRound { dst, .. } = *step {
            let value = build.layout.read_block(&s, Block::State(dst));
            if value != [0; 16] {
                return Err(ZeroCheckFailure {
                    step_index: idx,
                    step: step.to_string(),
                    block: dst,
                    value,
                });
            }
            zero_checks += 1;
        }
    }
    Ok(AesRun {
        ciphertext: build.layout.read_block(&s, Block::State(build.layout.output)),
        zero_checks,
        ancillas_clean: s.is_zero_on(build.layout.ancillas()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::circuit_to_matrix;
    use crate::reference::{aes128_encrypt, aes128_round_keys, aes_shift_rows};
    use crate::report::uncovered_gates;

    fn hex16(s: &str) -> [u8; 16] {
        std::array::from_fn(|i| u8::from_str_radix(&s[2 * i..2 * i + 2], 16).unwrap())
    }

    #[test]
    fn shiftrows_matches_reference_and_has_order_four() {
        let perm = shiftrows_permutation();
        let state: [u8; 16] = std::array::from_fn(|i| (i as u8).wrapping_mul(17).wrapping_add(3));
        let moved: [u8; 16] = std::array::from_fn(|i| state[perm[i]]);
        assert_eq!(moved, aes_shift_rows(&state));
        let mut p = std::array::from_fn::<usize, 16, _>(|i| i);
        for _ in 0..4 {
            p = std::array::from_fn(|i| p[perm[i]]);
        }
        assert_eq!(p, std::array::from_fn(|i| i));
        for c in 0..4 {
            assert_eq!(perm[4 * c], 4 * c, "row 0 stays put");
        }
    }

    #[test]
    fn mixcolumn_matrix_matches_reference() {
        let c = aes_mixcolumn();
        assert_eq!(circuit_to_matrix(&c).unwrap(), aes_mixcolumn_matrix());
        assert!(c.len() <= 350, "{} CNOTs", c.len());
    }

    #[test]
    fn key_expansion_reproduces_reference_schedule() {
        let key = hex16("000102030405060708090a0b0c0d0e0f");
        let expected = aes128_round_keys(&key);
        let layout = AesLayout::default();
        let mut s = BitState::zeros(AES_WIRES);
        let key_wires: Vec<usize> = layout.block(Block::Key).collect();
        for (i, &b) in key.iter().enumerate() {
            s.write_uint(&key_wires[8 * i..8 * i + 8], b as u128);
        }
        for (i, rk) in expected.iter().enumerate().skip(1) {
            s.apply_all(key_expand_round(i).gates());
            assert_eq!(&layout.read_block(&s, Block::Key), rk, "round {i}");
            assert!(s.is_zero_on(layout.ancillas()));
        }
        for i in (1..=10).rev() {
            s.apply_all(key_expand_round(i).invert().gates());
        }
        assert_eq!(layout.read_block(&s, Block::Key), key);
    }

    #[test]
    fn schedule_multiplicities() {
        let m = multiplicities(&zigzag_schedule());
        assert_eq!((m.sb, m.sb_star, m.ark, m.mc), (256, 72, 16, 60));
        assert_eq!((m.others, m.plaintext_toggles, m.rc_not, m.key_inits), (18, 4, 24, 1));
    }

    #[test]
    fn standard_vector_with_zero_checks() {
        let key = hex16("000102030405060708090a0b0c0d0e0f");
        let pt = hex16("00112233445566778899aabbccddeeff");
        let b = build_aes128(&key, &pt);
        assert_eq!(uncovered_gates(&b.circuit, &b.segments), 0);
        let run = simulate_checked(&b).unwrap();
        assert_eq!(run.ciphertext, hex16("69c4e0d86a7b0430d8cdb78070b4c55a"));
        assert_eq!(run.ciphertext, aes128_encrypt(&key, &pt));
        assert_eq!(run.zero_checks, 6);
        assert!(run.ancillas_clean);
    }
}
