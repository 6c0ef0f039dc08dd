//! The AES S-box as a reversible circuit.
//!
//! The Boolean function comes from the 113-gate straight-line program of
//! Boyar and Peralta: 32 ANDs and 81 XOR/XNORs around a tower-field
//! inversion. [`crate::slp::compile`] turns it into Toffoli/CNOT/NOT gates.
//!
//! Local wire layout of every circuit here: input byte on wires `0..8`,
//! output byte on `8..16` and sixteen ancillas on `16..32`. Both bytes are
//! most-significant bit first.

use crate::circuit::{Circuit, Gate};
use crate::gf2::{circuit_to_matrix, BinaryMatrix};
use crate::slp::{compile, CompileOptions, PhaseCounts, Program};
use std::sync::OnceLock;

/// Wires in one S-box circuit: input, output and ancillas.
pub const SBOX_WIRES: usize = 32;
/// Ancilla wires reserved for one S-box.
pub const SBOX_ANCILLAS: usize = 16;

/// Input bit names, most significant first.
const INPUTS: [&str; 8] = ["U0", "U1", "U2", "U3", "U4", "U5", "U6", "U7"];
/// Output bit names, most significant first.
const OUTPUTS: [&str; 8] = ["S0", "S1", "S2", "S3", "S4", "S5", "S6", "S7"];

/// The 113-gate straight-line program (`^ 1` marks an XNOR).
pub const SBOX_PROGRAM: &str = "
// top linear layer
y14 = U3 ^ U5
y13 = U0 ^ U6
y9 = U0 ^ U3
y8 = U0 ^ U5
t0 = U1 ^ U2
y1 = t0 ^ U7
y4 = y1 ^ U3
y12 = y13 ^ y14
y2 = y1 ^ U0
y5 = y1 ^ U6
y3 = y5 ^ y8
t1 = U4 ^ y12
y15 = t1 ^ U5
y20 = t1 ^ U1
y6 = y15 ^ U7
y10 = y15 ^ t0
y11 = y20 ^ y9
y7 = U7 ^ y11
y17 = y10 ^ y11
y19 = y10 ^ y8
y16 = t0 ^ y11
y21 = y13 ^ y16
y18 = U0 ^ y16
// inversion in the tower field
t2 = y12 & y15
t3 = y3 & y6
t4 = t3 ^ t2
t5 = y4 & U7
t6 = t5 ^ t2
t7 = y13 & y16
t8 = y5 & y1
t9 = t8 ^ t7
t10 = y2 & y7
t11 = t10 ^ t7
t12 = y9 & y11
t13 = y14 & y17
t14 = t13 ^ t12
t15 = y8 & y10
t16 = t15 ^ t12
t17 = t4 ^ t14
t18 = t6 ^ t16
t19 = t9 ^ t14
t20 = t11 ^ t16
t21 = t17 ^ y20
t22 = t18 ^ y19
t23 = t19 ^ y21
t24 = t20 ^ y18
t25 = t21 ^ t22
t26 = t21 & t23
t27 = t24 ^ t26
t28 = t25 & t27
t29 = t28 ^ t22
t30 = t23 ^ t24
t31 = t22 ^ t26
t32 = t31 & t30
t33 = t32 ^ t24
t34 = t23 ^ t33
t35 = t27 ^ t33
t36 = t24 & t35
t37 = t36 ^ t34
t38 = t27 ^ t36
t39 = t29 & t38
t40 = t25 ^ t39
t41 = t40 ^ t37
t42 = t29 ^ t33
t43 = t29 ^ t40
t44 = t33 ^ t37
t45 = t42 ^ t41
z0 = t44 & y15
z1 = t37 & y6
z2 = t33 & U7
z3 = t43 & y16
z4 = t40 & y1
z5 = t29 & y7
z6 = t42 & y11
z7 = t45 & y17
z8 = t41 & y10
z9 = t44 & y12
z10 = t37 & y3
z11 = t33 & y4
z12 = t43 & y13
z13 = t40 & y5
z14 = t29 & y2
z15 = t42 & y9
z16 = t45 & y14
z17 = t41 & y8
// bottom linear layer
tc1 = z15 ^ z16
tc2 = z10 ^ tc1
tc3 = z9 ^ tc2
tc4 = z0 ^ z2
tc5 = z1 ^ z0
tc6 = z3 ^ z4
tc7 = z12 ^ tc4
tc8 = z7 ^ tc6
tc9 = z8 ^ tc7
tc10 = tc8 ^ tc9
tc11 = tc6 ^ tc5
tc12 = z3 ^ z5
tc13 = z13 ^ tc1
tc14 = tc4 ^ tc12
S3 = tc3 ^ tc11
tc16 = z6 ^ tc8
tc17 = z14 ^ tc10
tc18 = tc13 ^ tc14
S7 = z12 ^ tc18 ^ 1
tc20 = z15 ^ tc16
tc21 = tc2 ^ z11
S0 = tc3 ^ tc16
S6 = tc10 ^ tc18 ^ 1
S4 = tc14 ^ S3
S1 = S3 ^ tc16 ^ 1
tc26 = tc17 ^ tc20
S2 = tc26 ^ z17 ^ 1
S5 = tc21 ^ tc17
";

/// The S-box program, parsed.
pub fn sbox_program() -> Program {
    Program::parse(&INPUTS, &OUTPUTS, SBOX_PROGRAM).expect("the built-in program parses")
}

/// How an S-box circuit treats its output byte.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SboxMode {
    /// The output byte must start at zero; it ends holding `S(x)`.
    Fresh,
    /// Any output byte `y` becomes `y ⊕ S(x)`.
    Xor,
}

/// Eight-CNOT output fix on the output byte (local wires `0..8`).
///
/// The fresh core leaves a nonzero output byte in a linearly transformed
/// frame; running this fix on the byte first cancels that transform, so
/// fix-then-core is an XOR-into S-box.
pub fn output_affine_fix() -> Circuit {
    // (control, target) with a_k on wire k − 1.
    let pairs = [(3, 6), (8, 3), (2, 4), (7, 8), (1, 7), (8, 2), (2, 5), (1, 2)];
    Circuit::from_gates(8, pairs.iter().map(|&(c, t)| Gate::cnot(c - 1, t - 1))).expect("in range")
}

struct Compiled {
    core: Circuit,
    phases: PhaseCounts,
}

fn compiled() -> &'static Compiled {
    static CELL: OnceLock<Compiled> = OnceLock::new();
    CELL.get_or_init(|| {
        let frame: BinaryMatrix = circuit_to_matrix(&output_affine_fix()).expect("CNOT only");
        let opts = CompileOptions {
            ancillas: SBOX_ANCILLAS,
            initial_frame: frame,
            lookahead: 24,
            search_restarts: 64,
        };
        let out = compile(&sbox_program(), &opts).expect("the built-in program compiles");
        Compiled {
            core: out.circuit,
            phases: out.phases,
        }
    })
}

/// CNOT counts per compilation phase of the S-box core.
pub fn sbox_phases() -> PhaseCounts {
    compiled().phases
}

/// One AES S-box on [`SBOX_WIRES`] local wires.
pub fn aes_subbytes(mode: SboxMode) -> Circuit {
    let core = compiled().core.clone();
    match mode {
        SboxMode::Fresh => core,
        SboxMode::Xor => {
            let out: Vec<usize> = (8..16).collect();
            let mut c = Circuit::new(SBOX_WIRES);
            for r in core.registers() {
                c.add_register(r.clone()).expect("same layout");
            }
            c.extend_mapped(&output_affine_fix(), &out).expect("in range");
            c.extend(&core).expect("same width");
            c
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::aes_sbox;
    use crate::sim::truth_table;

    #[test]
    fn program_computes_the_sbox() {
        let p = sbox_program();
        assert_eq!(p.gate_counts(), (32, 81));
        for x in 0..=255u8 {
            // program input i is U_i, the (7 − i)-th bit of the byte
            let bits = (0..8).fold(0u64, |acc, i| acc | ((((x >> (7 - i)) & 1) as u64) << i));
            let y = p.eval(bits).unwrap();
            let byte = (0..8).fold(0u8, |acc, i| acc | ((((y >> i) & 1) as u8) << (7 - i)));
            assert_eq!(byte, aes_sbox()[x as usize], "x={x:#04x}");
        }
    }

    #[test]
    fn fresh_circuit_is_exhaustively_correct() {
        let c = aes_subbytes(SboxMode::Fresh);
        let t = truth_table(&c, &(0..8).collect::<Vec<_>>(), &(8..16).collect::<Vec<_>>(), &[]).unwrap();
        assert!(t.inputs_preserved && t.others_restored);
        for x in 0..256 {
            assert_eq!(t.outputs[x], aes_sbox()[x] as u64);
        }
    }

    #[test]
    fn xor_circuit_is_exhaustively_correct() {
        let c = aes_subbytes(SboxMode::Xor);
        let t = truth_table(&c, &(0..16).collect::<Vec<_>>(), &(0..16).collect::<Vec<_>>(), &[]).unwrap();
        assert!(t.others_restored);
        let s = aes_sbox();
        for x in 0..256usize {
            for y in 0..256usize {
                let v = t.outputs[(x << 8) | y];
                assert_eq!(v, ((x << 8) | (y ^ s[x] as usize)) as u64);
            }
        }
    }
}
