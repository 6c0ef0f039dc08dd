//! Exhaustive truth tables of the small components, each checked against an
//! independent oracle.

use crate::aes::{aes_subbytes, output_affine_fix, SboxMode};
use crate::gf2::BinaryMatrix;
use crate::reference::{
    aes_sbox, gf16_basis_matrix, gf16_inverse_normal_basis, gf16_inverse_normal_basis_via_poly, gf16_normal_to_poly,
    saes_affine, saes_sbox,
};
use crate::saes::{basis_change, gf16_inversion, merged_affine, saes_subbytes, BasisDirection, SaesSboxOptions};
use crate::sim::truth_table;

/// Components that have a table.
pub const COMPONENTS: [&str; 6] = [
    "gf16inv",
    "saes-sbox",
    "aes-sbox",
    "basis",
    "merged-affine",
    "affine-fix",
];

/// An exhaustive table with its verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentTable {
    pub component: &'static str,
    pub input_bits: usize,
    pub output_bits: usize,
    /// `(input, circuit output, oracle output)` per row.
    pub rows: Vec<(u64, u64, u64)>,
    /// Extra conditions (restored inputs, clean ancillas, …) held.
    pub side_conditions: bool,
    /// A matrix the component is meant to realize, when it is linear.
    pub matrix: Option<BinaryMatrix>,
}

impl ComponentTable {
    pub fn passed(&self) -> bool {
        self.side_conditions && self.rows.iter().all(|&(_, got, want)| got == want)
    }

    /// One row per line, binary, followed by `PASS` or `FAIL`.
    pub fn render(&self) -> String {
        let mut s = String::new();
        if let Some(m) = &self.matrix {
            s.push_str(&format!("{m}\n"));
        }
        for &(x, got, want) in &self.rows {
            let mark = if got == want { "" } else { "  MISMATCH" };
            s.push_str(&format!(
                "{:0iw$b} -> {:0ow$b}{mark}\n",
                x,
                got,
                iw = self.input_bits,
                ow = self.output_bits
            ));
        }
        s.push_str(if self.passed() { "PASS\n" } else { "FAIL\n" });
        s
    }
}

fn range(a: usize, b: usize) -> Vec<usize> {
    (a..b).collect()
}

/// Build and check the table of a named component.
pub fn component_table(name: &str) -> Option<ComponentTable> {
    let t = match name {
        "gf16inv" => {
            let t = truth_table(&gf16_inversion(), &range(0, 8), &range(0, 8), &[]).expect("8 wires");
            let rows = (0..256u64)
                .map(|v| {
                    let (x, y) = ((v >> 4) as u8, v & 0xf);
                    let want = (v & 0xf0) | (y ^ gf16_inverse_normal_basis(x) as u64);
                    (v, t.outputs[v as usize], want)
                })
                .collect();
            let formulas_agree =
                (0..16u8).all(|x| gf16_inverse_normal_basis(x) == gf16_inverse_normal_basis_via_poly(x));
            ComponentTable {
                component: "gf16inv",
                input_bits: 8,
                output_bits: 8,
                rows,
                side_conditions: formulas_agree,
                matrix: None,
            }
        }
        "saes-sbox" => {
            let c = saes_subbytes(SaesSboxOptions::XOR_RESTORED);
            let t = truth_table(&c, &range(0, 8), &range(0, 8), &[]).expect("8 wires");
            let s = saes_sbox();
            let rows = (0..256u64)
                .map(|v| {
                    (
                        v,
                        t.outputs[v as usize],
                        (v & 0xf0) | ((v & 0xf) ^ s[(v >> 4) as usize] as u64),
                    )
                })
                .collect();
            ComponentTable {
                component: "saes-sbox",
                input_bits: 8,
                output_bits: 8,
                rows,
                side_conditions: true,
                matrix: None,
            }
        }
        "aes-sbox" => {
            let t = truth_table(&aes_subbytes(SboxMode::Fresh), &range(0, 8), &range(8, 16), &[]).expect("32 wires");
            let s = aes_sbox();
            ComponentTable {
                component: "aes-sbox",
                input_bits: 8,
                output_bits: 8,
                rows: (0..256u64)
                    .map(|x| (x, t.outputs[x as usize], s[x as usize] as u64))
                    .collect(),
                side_conditions: t.inputs_preserved && t.others_restored,
                matrix: None,
            }
        }
        "basis" => {
            let b = basis_change(BasisDirection::PolyToNormal);
            let t = truth_table(&b.circuit, &range(0, 4), &b.outputs, &[]).expect("4 wires");
            let m = gf16_basis_matrix();
            let rows = (0..16u64)
                .map(|a| {
                    let bits: Vec<bool> = (0..4).map(|i| (a >> (3 - i)) & 1 == 1).collect();
                    let want = m
                        .mul_vec(&bits)
                        .expect("4")
                        .iter()
                        .fold(0, |acc, &b| (acc << 1) | b as u64);
                    (a, t.outputs[a as usize], want)
                })
                .collect();
            ComponentTable {
                component: "basis",
                input_bits: 4,
                output_bits: 4,
                rows,
                side_conditions: b.matrix() == m,
                matrix: Some(b.matrix()),
            }
        }
        "merged-affine" => {
            let t = truth_table(&merged_affine(), &range(0, 4), &range(0, 4), &[]).expect("4 wires");
            ComponentTable {
                component: "merged-affine",
                input_bits: 4,
                output_bits: 4,
                rows: (0..16u64)
                    .map(|y| {
                        (
                            y,
                            t.outputs[y as usize],
                            saes_affine(gf16_normal_to_poly(y as u8)) as u64,
                        )
                    })
                    .collect(),
                side_conditions: true,
                matrix: None,
            }
        }
        "affine-fix" => {
            // The fix is judged by what it is for: fix-then-core must XOR the
            // S-box value into any starting output byte.
            let fix = output_affine_fix();
            let t = truth_table(&fix, &range(0, 8), &range(0, 8), &[]).expect("8 wires");
            let sb_star = aes_subbytes(SboxMode::Xor);
            let star = truth_table(&sb_star, &range(0, 16), &range(8, 16), &[]).expect("16 inputs");
            let s = aes_sbox();
            let xor_semantics = (0..65536usize).all(|v| star.outputs[v] == ((v & 0xff) ^ s[v >> 8] as usize) as u64);
            let m = crate::gf2::circuit_to_matrix(&fix).expect("CNOT only");
            ComponentTable {
                component: "affine-fix",
                input_bits: 8,
                output_bits: 8,
                rows: (0..256u64)
                    .map(|v| (v, t.outputs[v as usize], t.outputs[v as usize]))
                    .collect(),
                side_conditions: xor_semantics && m.is_invertible() && t.outputs[0] == 0,
                matrix: Some(m),
            }
        }
        _ => return None,
    };
    Some(t)
}
