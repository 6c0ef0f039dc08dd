//! Classical basis-state simulation.
//!
//! NOT, CNOT and Toffoli gates permute computational basis states, so a
//! circuit built from them can be simulated exactly with one bit per wire.
//! [`BitState`] packs those bits into machine words. For exhaustive tables,
//! [`run_lanes`] simulates 64 independent basis states at once by giving each
//! wire a 64-bit word whose bit `k` belongs to state `k`.
//!
//! Multi-wire values are read and written most-significant bit first: the
//! first wire of a list holds the top bit.

use crate::circuit::{Circuit, Gate};
use thiserror::Error;

/// Largest input set accepted by [`truth_table`].
pub const MAX_TABLE_INPUTS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("state has {state} wires but the circuit has {circuit}")]
    LengthMismatch { state: usize, circuit: usize },
    #[error("{0} input wires requested; the limit is {MAX_TABLE_INPUTS}")]
    TooManyInputs(usize),
    #[error("wire {0} appears in more than one role or twice in a list")]
    Overlap(usize),
    #[error("wire {wire} is out of range for a {wire_count}-wire circuit")]
    WireOutOfRange { wire: usize, wire_count: usize },
}

/// One classical bit per wire, packed 64 to a word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitState {
    len: usize,
    words: Vec<u64>,
}

impl BitState {
    /// All-zero state on `len` wires.
    pub fn zeros(len: usize) -> Self {
        BitState {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut s = BitState::zeros(bits.len());
        for (w, &b) in bits.iter().enumerate() {
            s.set(w, b);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, w: usize) -> bool {
        debug_assert!(w < self.len);
        (self.words[w >> 6] >> (w & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, w: usize, b: bool) {
        debug_assert!(w < self.len);
        let mask = 1u64 << (w & 63);
        if b {
            self.words[w >> 6] |= mask;
        } else {
            self.words[w >> 6] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, w: usize) {
        self.words[w >> 6] ^= 1u64 << (w & 63);
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len).map(|w| self.get(w)).collect()
    }

    /// True when every wire in `wires` is 0.
    pub fn is_zero_on(&self, wires: impl IntoIterator<Item = usize>) -> bool {
        wires.into_iter().all(|w| !self.get(w))
    }

    /// Read up to 128 wires as an unsigned integer, first wire most significant.
    pub fn read_uint(&self, wires: impl IntoIterator<Item = usize>) -> u128 {
        wires.into_iter().fold(0u128, |acc, w| (acc << 1) | self.get(w) as u128)
    }

    /// Write `value` onto `wires`, first wire receiving the most significant bit.
    pub fn write_uint(&mut self, wires: &[usize], value: u128) {
        let n = wires.len();
        for (i, &w) in wires.iter().enumerate() {
            self.set(w, (value >> (n - 1 - i)) & 1 == 1);
        }
    }

    /// Apply one gate. The gate must be in range for this state.
    #[inline]
    pub fn apply(&mut self, g: &Gate) {
        match *g {
            Gate::Not { target } => self.flip(target),
            Gate::Cnot { control, target } => {
                if self.get(control) {
                    self.flip(target)
                }
            }
            Gate::Toffoli { c1, c2, target } => {
                if self.get(c1) && self.get(c2) {
                    self.flip(target)
                }
            }
        }
    }

    /// Apply a gate slice in order.
    pub fn apply_all(&mut self, gates: &[Gate]) {
        for g in gates {
            self.apply(g);
        }
    }
}

/// Simulate `c` on `s` in place.
pub fn run_in_place(c: &Circuit, s: &mut BitState) -> Result<(), SimError> {
    if s.len() != c.wire_count() {
        return Err(SimError::LengthMismatch {
            state: s.len(),
            circuit: c.wire_count(),
        });
    }
    s.apply_all(c.gates());
    Ok(())
}

/// Simulate `c` on a copy of `s`.
pub fn run(c: &Circuit, s: &BitState) -> Result<BitState, SimError> {
    let mut out = s.clone();
    run_in_place(c, &mut out)?;
    Ok(out)
}

/// Simulate 64 basis states at once; `lanes[w]` bit `k` is wire `w` of state `k`.
pub fn run_lanes(c: &Circuit, lanes: &mut [u64]) -> Result<(), SimError> {
    if lanes.len() != c.wire_count() {
        return Err(SimError::LengthMismatch {
            state: lanes.len(),
            circuit: c.wire_count(),
        });
    }
    for g in c.gates() {
        match *g {
            Gate::Not { target } => lanes[target] = !lanes[target],
            Gate::Cnot { control, target } => lanes[target] ^= lanes[control],
            Gate::Toffoli { c1, c2, target } => lanes[target] ^= lanes[c1] & lanes[c2],
        }
    }
    Ok(())
}

/// Exhaustive input/output table of a circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    /// `outputs[x]` is the output pattern (first output wire most significant)
    /// for input pattern `x` (first input wire most significant).
    pub outputs: Vec<u64>,
    /// Every input wire that is not also an output wire kept its value, for every row.
    pub inputs_preserved: bool,
    /// Every wire outside the input and output lists returned to its fixed value.
    pub others_restored: bool,
}

/// Enumerate all `2^|input_wires|` inputs of `c`.
///
/// Wires that are neither inputs nor fixed start at 0. Input and output
/// lists may overlap (in-place layers); neither may overlap the fixed
/// assignment.
pub fn truth_table(
    c: &Circuit,
    input_wires: &[usize],
    output_wires: &[usize],
    fixed: &[(usize, bool)],
) -> Result<TruthTable, SimError> {
    let n = c.wire_count();
    if input_wires.len() > MAX_TABLE_INPUTS {
        return Err(SimError::TooManyInputs(input_wires.len()));
    }
    if output_wires.len() > 64 {
        return Err(SimError::TooManyInputs(output_wires.len()));
    }
    let mut is_input = vec![false; n];
    let mut is_output = vec![false; n];
    let mut is_fixed = vec![false; n];
    for (list, flags) in [(input_wires, &mut is_input), (output_wires, &mut is_output)] {
        for &w in list {
            if w >= n {
                return Err(SimError::WireOutOfRange { wire: w, wire_count: n });
            }
            if std::mem::replace(&mut flags[w], true) {
                return Err(SimError::Overlap(w));
            }
        }
    }
    let mut base = vec![0u64; n];
    for &(w, b) in fixed {
        if w >= n {
            return Err(SimError::WireOutOfRange { wire: w, wire_count: n });
        }
        if is_input[w] || is_output[w] || std::mem::replace(&mut is_fixed[w], true) {
            return Err(SimError::Overlap(w));
        }
        base[w] = if b { !0 } else { 0 };
    }

    let rows = 1usize << input_wires.len();
    let k = input_wires.len();
    let mut outputs = vec![0u64; rows];
    let mut inputs_preserved = true;
    let mut others_restored = true;
    let mut lanes = base.clone();
    for chunk in (0..rows).step_by(64) {
        let width = (rows - chunk).min(64);
        let live = if width == 64 { !0u64 } else { (1u64 << width) - 1 };
        lanes.copy_from_slice(&base);
        let mut patterns = vec![0u64; k];
        for lane in 0..width {
            let x = chunk + lane;
            for (i, p) in patterns.iter_mut().enumerate() {
                if (x >> (k - 1 - i)) & 1 == 1 {
                    *p |= 1 << lane;
                }
            }
        }
        for (i, &w) in input_wires.iter().enumerate() {
            lanes[w] = patterns[i];
        }
        run_lanes(c, &mut lanes)?;
        for (i, &w) in input_wires.iter().enumerate() {
            if !is_output[w] && (lanes[w] ^ patterns[i]) & live != 0 {
                inputs_preserved = false;
            }
        }
        for w in 0..n {
            if !is_input[w] && !is_output[w] && (lanes[w] ^ base[w]) & live != 0 {
                others_restored = false;
            }
        }
        for lane in 0..width {
            let mut v = 0u64;
            for &w in output_wires {
                v = (v << 1) | ((lanes[w] >> lane) & 1);
            }
            outputs[chunk + lane] = v;
        }
    }
    Ok(TruthTable {
        outputs,
        inputs_preserved,
        others_restored,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cnot_on_10_gives_11() {
        let c = Circuit::from_gates(2, [Gate::cnot(0, 1)]).unwrap();
        let s = run(&c, &BitState::from_bits(&[true, false])).unwrap();
        assert_eq!(s.to_bits(), vec![true, true]);
    }

    #[test]
    fn toffoli_needs_both_controls() {
        let c = Circuit::from_gates(3, [Gate::toffoli(0, 1, 2)]).unwrap();
        let s = run(&c, &BitState::from_bits(&[true, true, false])).unwrap();
        assert_eq!(s.to_bits(), vec![true, true, true]);
        let s = run(&c, &BitState::from_bits(&[true, false, false])).unwrap();
        assert_eq!(s.to_bits(), vec![true, false, false]);
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let c = Circuit::new(3);
        assert!(run(&c, &BitState::zeros(2)).is_err());
    }

    #[test]
    fn empty_circuit_table_is_identity() {
        let c = Circuit::new(5);
        let t = truth_table(&c, &[0, 1, 2, 3, 4], &[0, 1, 2, 3, 4], &[]).unwrap();
        assert!(t.outputs.iter().enumerate().all(|(x, &y)| x as u64 == y));
        assert!(t.inputs_preserved && t.others_restored);
    }

    #[test]
    fn table_limits_and_overlaps() {
        let c = Circuit::new(30);
        let many: Vec<usize> = (0..21).collect();
        assert_eq!(truth_table(&c, &many, &[], &[]), Err(SimError::TooManyInputs(21)));
        assert_eq!(truth_table(&c, &[0, 1], &[2], &[(1, true)]), Err(SimError::Overlap(1)));
        assert_eq!(truth_table(&c, &[0, 0], &[2], &[]), Err(SimError::Overlap(0)));
    }

    #[test]
    fn uint_round_trip_is_msb_first() {
        let mut s = BitState::zeros(70);
        let wires: Vec<usize> = (60..68).collect();
        s.write_uint(&wires, 0x81);
        assert!(s.get(60) && s.get(67) && !s.get(61));
        assert_eq!(s.read_uint(wires.iter().copied()), 0x81);
    }

    #[test]
    fn lanes_agree_with_scalar_simulation() {
        let c = Circuit::from_gates(3, [Gate::not(0), Gate::toffoli(0, 1, 2), Gate::cnot(2, 0)]).unwrap();
        let t = truth_table(&c, &[0, 1, 2], &[0, 1, 2], &[]).unwrap();
        for x in 0..8u64 {
            let s = BitState::from_bits(&[x & 4 != 0, x & 2 != 0, x & 1 != 0]);
            let o = run(&c, &s).unwrap();
            assert_eq!(o.read_uint(0..3) as u64, t.outputs[x as usize]);
        }
    }
}
