//! Straight-line XOR/AND programs and their compilation to reversible circuits.
//!
//! A [`Program`] is a list of assignments `dst = a ^ b ^ …` or `dst = a & b`
//! over named bits, the way compact S-box circuits are usually published.
//! [`compile`] turns one into a NOT/CNOT/Toffoli circuit that keeps its
//! inputs, returns its ancillas to zero and XORs the program outputs into an
//! output register.
//!
//! # How the compilation works
//!
//! Every signal of the program is a GF(2)-linear combination of *atoms*: the
//! constant 1, the inputs, and one atom per AND. An AND whose result feeds
//! another AND is a *work* product; the others are *output* products, which
//! only reach the outputs through XORs.
//!
//! 1. **Forward.** The input wires and the ancillas holding work products form
//!    a workspace. Each wire holds some linear combination of atoms, and
//!    those combinations stay linearly independent. To use a linear form as a
//!    Toffoli control, the compiler solves for the set of wires that XOR to
//!    it and folds them into one pivot wire with CNOTs. The pivot is picked by
//!    looking ahead at the forms needed next. Each work product then goes
//!    into a fresh ancilla.
//! 2. **Outputs.** Each output product must be XORed into every output bit
//!    that contains it. The compiler tracks the linear *frame* `P` relating
//!    the physical output wires to the logical output bits
//!    (`physical = P · logical`). It rewrites `P` with CNOTs among the output
//!    wires until the product's column becomes a unit vector, so a single
//!    Toffoli adds the product everywhere it belongs. At the end one linear
//!    correction returns the frame to the identity, and NOT gates add the
//!    constant.
//! 3. **Backward.** The workspace is returned to its post-forward contents
//!    with one synthesized linear layer, and then the forward phase is
//!    replayed in reverse. This clears the ancillas and restores the inputs.
//!
//! Outputs combine by XOR, so the circuit computes `Y ⊕ f(X)` when the
//! physical output register starts in frame `P₀ · Y`. [`CompileOptions`]
//! lets the caller choose `P₀`; starting from zero outputs makes the choice
//! irrelevant.

use crate::circuit::{Circuit, Gate, Register, Role};
use crate::gf2::{synth_inplace_linear_search, BinaryMatrix};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlpError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("undefined signal `{0}`")]
    Undefined(String),
    #[error("program needs {needed} ancillas but only {available} are available")]
    TooFewAncillas { needed: usize, available: usize },
    #[error("unsupported program shape: {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Operand {
    Signal(String),
    One,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Expr {
    Xor(Vec<Operand>),
    And(Operand, Operand),
}

/// A straight-line program over GF(2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    inputs: Vec<String>,
    outputs: Vec<String>,
    lines: Vec<(String, Expr)>,
}

impl Program {
    /// Parse one assignment per line: `dst = a ^ b ^ 1` or `dst = a & b`.
    /// Blank lines and text after `//` are ignored.
    pub fn parse(inputs: &[&str], outputs: &[&str], text: &str) -> Result<Program, SlpError> {
        let mut lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split("//").next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| SlpError::Parse {
                line: i + 1,
                msg: msg.to_string(),
            };
            let (dst, rhs) = line.split_once('=').ok_or_else(|| err("missing `=`"))?;
            let operand = |s: &str| -> Result<Operand, SlpError> {
                match s.trim() {
                    "1" => Ok(Operand::One),
                    "" => Err(err("empty operand")),
                    name => Ok(Operand::Signal(name.to_string())),
                }
            };
            let expr = if rhs.contains('&') {
                let parts: Vec<&str> = rhs.split('&').collect();
                if parts.len() != 2 || rhs.contains('^') {
                    return Err(err("an AND takes exactly two operands"));
                }
                Expr::And(operand(parts[0])?, operand(parts[1])?)
            } else {
                Expr::Xor(rhs.split('^').map(operand).collect::<Result<_, _>>()?)
            };
            lines.push((dst.trim().to_string(), expr));
        }
        Ok(Program {
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            outputs: outputs.iter().map(|s| s.to_string()).collect(),
            lines,
        })
    }

    pub fn input_count(&self) -> usize {
        self.inputs.len()
    }

    pub fn output_count(&self) -> usize {
        self.outputs.len()
    }

    /// Number of AND and XOR/XNOR operations. An XOR of `k` signals counts
    /// `k − 1`; a trailing `^ 1` turns one of them into an XNOR at no cost.
    pub fn gate_counts(&self) -> (usize, usize) {
        let mut and = 0;
        let mut xor = 0;
        for (_, e) in &self.lines {
            match e {
                Expr::And(..) => and += 1,
                Expr::Xor(ops) => xor += ops.iter().filter(|o| **o != Operand::One).count().saturating_sub(1),
            }
        }
        (and, xor)
    }

    /// Evaluate on an input assignment (bit `i` of `x` is input `i`).
    pub fn eval(&self, x: u64) -> Result<u64, SlpError> {
        let mut env: HashMap<&str, bool> = HashMap::new();
        for (i, name) in self.inputs.iter().enumerate() {
            env.insert(name, (x >> i) & 1 == 1);
        }
        let val = |env: &HashMap<&str, bool>, o: &Operand| -> Result<bool, SlpError> {
            match o {
                Operand::One => Ok(true),
                Operand::Signal(s) => env
                    .get(s.as_str())
                    .copied()
                    .ok_or_else(|| SlpError::Undefined(s.clone())),
            }
        };
        for (dst, e) in &self.lines {
            let v = match e {
                Expr::And(a, b) => val(&env, a)? & val(&env, b)?,
                Expr::Xor(ops) => {
                    let mut acc = false;
                    for o in ops {
                        acc ^= val(&env, o)?;
                    }
                    acc
                }
            };
            env.insert(dst, v);
        }
        let mut out = 0u64;
        for (i, name) in self.outputs.iter().enumerate() {
            if env
                .get(name.as_str())
                .copied()
                .ok_or_else(|| SlpError::Undefined(name.clone()))?
            {
                out |= 1 << i;
            }
        }
        Ok(out)
    }

    /// Symbolic form: every AND as a product of two linear forms over atoms,
    /// and every output as a linear form over atoms.
    fn linearize(&self) -> Result<Linearized, SlpError> {
        let n = self.inputs.len();
        let mut env: HashMap<&str, u64> = HashMap::new();
        for (i, name) in self.inputs.iter().enumerate() {
            env.insert(name, 1 << (1 + i));
        }
        let mut products = Vec::new();
        let form = |env: &HashMap<&str, u64>, o: &Operand| -> Result<u64, SlpError> {
            match o {
                Operand::One => Ok(1),
                Operand::Signal(s) => env
                    .get(s.as_str())
                    .copied()
                    .ok_or_else(|| SlpError::Undefined(s.clone())),
            }
        };
        for (dst, e) in &self.lines {
            let f = match e {
                Expr::And(a, b) => {
                    let atom = 1 + n + products.len();
                    if atom >= 64 {
                        return Err(SlpError::Unsupported("more than 63 atoms".into()));
                    }
                    products.push((form(&env, a)?, form(&env, b)?));
                    1u64 << atom
                }
                Expr::Xor(ops) => {
                    let mut acc = 0;
                    for o in ops {
                        acc ^= form(&env, o)?;
                    }
                    acc
                }
            };
            env.insert(dst, f);
        }
        let outputs = self
            .outputs
            .iter()
            .map(|name| {
                env.get(name.as_str())
                    .copied()
                    .ok_or_else(|| SlpError::Undefined(name.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Linearized {
            inputs: n,
            products,
            outputs,
        })
    }
}

struct Linearized {
    inputs: usize,
    products: Vec<(u64, u64)>,
    outputs: Vec<u64>,
}

impl Linearized {
    fn atom(&self, k: usize) -> u64 {
        1u64 << (1 + self.inputs + k)
    }
}

/// Options for [`compile`].
#[derive(Debug, Clone)]
pub struct CompileOptions {
    /// Number of ancilla wires in the produced circuit.
    pub ancillas: usize,
    /// Frame `P₀` of the output register at the start (outputs × outputs).
    pub initial_frame: BinaryMatrix,
    /// How many upcoming linear forms the pivot heuristic looks at.
    pub lookahead: usize,
    /// Restarts for the linear-layer search used by the correction layers.
    pub search_restarts: usize,
}

/// CNOT counts of the phases of a compiled program.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PhaseCounts {
    pub work_products: usize,
    pub output_products: usize,
    pub forward_cnot: usize,
    pub output_cnot: usize,
    pub frame_correction_cnot: usize,
    pub workspace_restore_cnot: usize,
    pub ancillas_used: usize,
}

/// A compiled program: inputs on wires `0..n`, outputs on `n..n+m`, ancillas after.
#[derive(Debug, Clone)]
pub struct Compiled {
    pub circuit: Circuit,
    pub phases: PhaseCounts,
}

struct Compiler {
    n_in: usize,
    n_out: usize,
    content: Vec<u64>,
    workspace: Vec<usize>,
    free_ancillas: Vec<usize>,
    gates: Vec<Gate>,
    lookahead: usize,
}

impl Compiler {
    /// Subset (as workspace indices) of wires whose contents XOR to `form`.
    fn solve(&self, form: u64) -> Option<Vec<usize>> {
        // Echelon basis indexed by leading bit; `combo` records which
        // workspace wires were XORed together to form each basis vector.
        let mut basis = [(0u64, 0u64); 64];
        let reduce = |basis: &[(u64, u64); 64], mut v: u64, mut combo: u64| {
            while v != 0 {
                let top = 63 - v.leading_zeros() as usize;
                if basis[top].0 == 0 {
                    break;
                }
                v ^= basis[top].0;
                combo ^= basis[top].1;
            }
            (v, combo)
        };
        for (i, &w) in self.workspace.iter().enumerate() {
            let (v, combo) = reduce(&basis, self.content[w], 1u64 << i);
            debug_assert!(v != 0, "workspace contents must stay independent");
            basis[63 - v.leading_zeros() as usize] = (v, combo);
        }
        // Residual bits below a missing pivot may still be reducible.
        let (mut v, mut combo) = (form, 0u64);
        let mut bit = 64;
        while v != 0 && bit > 0 {
            bit -= 1;
            if v >> bit & 1 == 1 {
                if basis[bit].0 == 0 {
                    return None;
                }
                v ^= basis[bit].0;
                combo ^= basis[bit].1;
            }
        }
        (v == 0).then(|| (0..self.workspace.len()).filter(|i| combo >> i & 1 == 1).collect())
    }

    fn cost(&self, forms: &[u64]) -> usize {
        forms
            .iter()
            .map(|&f| self.solve(f).map_or(64, |s| s.len().saturating_sub(1)))
            .sum()
    }

    fn cnot(&mut self, c: usize, t: usize) {
        self.gates.push(Gate::cnot(c, t));
        self.content[t] ^= self.content[c];
    }

    /// Make some workspace wire other than `avoid` hold exactly `form`.
    fn expose(&mut self, form: u64, avoid: Option<usize>, future: &[u64]) -> Result<usize, SlpError> {
        let subset: Vec<usize> = self
            .solve(form)
            .ok_or_else(|| SlpError::Unsupported("operand outside the workspace span".into()))?
            .into_iter()
            .map(|i| self.workspace[i])
            .collect();
        let candidates: Vec<usize> = subset.iter().copied().filter(|&w| Some(w) != avoid).collect();
        if candidates.is_empty() {
            return Err(SlpError::Unsupported("AND of a signal with itself".into()));
        }
        if subset.len() == 1 {
            return Ok(subset[0]);
        }
        let window = &future[..future.len().min(self.lookahead)];
        let mut best = (usize::MAX, candidates[0]);
        for &p in &candidates {
            let saved = self.content[p];
            self.content[p] = form;
            let c = self.cost(window);
            self.content[p] = saved;
            if c < best.0 {
                best = (c, p);
            }
        }
        let pivot = best.1;
        for &w in &subset {
            if w != pivot {
                self.cnot(w, pivot);
            }
        }
        debug_assert_eq!(self.content[pivot], form);
        Ok(pivot)
    }

    fn out_wire(&self, j: usize) -> usize {
        self.n_in + j
    }
}

fn parity(x: u64) -> bool {
    x.count_ones() & 1 == 1
}

/// Frame `P` as rows over logical outputs; returns `P · d`.
fn frame_apply(p: &[u64], d: u64) -> u64 {
    p.iter()
        .enumerate()
        .fold(0, |acc, (i, &row)| acc | ((parity(row & d) as u64) << i))
}

/// Compile a program into a reversible circuit (see the module docs).
pub fn compile(program: &Program, opts: &CompileOptions) -> Result<Compiled, SlpError> {
    let lin = program.linearize()?;
    let n_in = lin.inputs;
    let n_out = program.output_count();
    if opts.initial_frame.rows() != n_out || !opts.initial_frame.is_invertible() {
        return Err(SlpError::Unsupported(
            "initial frame must be an invertible outputs × outputs matrix".into(),
        ));
    }
    let atoms_of_products = lin
        .products
        .iter()
        .enumerate()
        .fold(0u64, |acc, (k, _)| acc | lin.atom(k));
    let work: Vec<usize> = (0..lin.products.len())
        .filter(|&k| {
            let a = lin.atom(k);
            lin.products.iter().any(|&(x, y)| (x | y) & a != 0)
        })
        .collect();
    let terminal: Vec<usize> = (0..lin.products.len()).filter(|k| !work.contains(k)).collect();
    let work_mask = work.iter().fold(0u64, |acc, &k| acc | lin.atom(k));
    for (j, &o) in lin.outputs.iter().enumerate() {
        if o & work_mask != 0 || o & !(atoms_of_products | 1) != 0 {
            return Err(SlpError::Unsupported(format!(
                "output {j} must be an XOR of output products and constants"
            )));
        }
    }
    for &k in &terminal {
        let (a, b) = lin.products[k];
        if (a | b) & 1 != 0 {
            return Err(SlpError::Unsupported("constant inside an AND operand".into()));
        }
    }
    if work.len() > opts.ancillas {
        return Err(SlpError::TooFewAncillas {
            needed: work.len(),
            available: opts.ancillas,
        });
    }

    let wire_count = n_in + n_out + opts.ancillas;
    let mut content = vec![0u64; wire_count];
    for (i, c) in content.iter_mut().enumerate().take(n_in) {
        *c = 1 << (1 + i);
    }
    let mut cc = Compiler {
        n_in,
        n_out,
        content,
        workspace: (0..n_in).collect(),
        free_ancillas: (n_in + n_out..wire_count).rev().collect(),
        gates: Vec::new(),
        lookahead: opts.lookahead,
    };
    let mut phases = PhaseCounts {
        work_products: work.len(),
        output_products: terminal.len(),
        ..PhaseCounts::default()
    };

    // Forward: compute every work product into its own ancilla.
    let mut future: Vec<u64> = work
        .iter()
        .flat_map(|&k| [lin.products[k].0, lin.products[k].1])
        .collect();
    future.extend(terminal.iter().flat_map(|&k| [lin.products[k].0, lin.products[k].1]));
    for (step, &k) in work.iter().enumerate() {
        let (a, b) = lin.products[k];
        let wa = cc.expose(a, None, &future[2 * step + 1..])?;
        let wb = cc.expose(b, Some(wa), &future[2 * step + 2..])?;
        let anc = cc.free_ancillas.pop().expect("checked above");
        cc.gates.push(Gate::toffoli(wa, wb, anc));
        cc.content[anc] = lin.atom(k);
        cc.workspace.push(anc);
    }
    let forward_gates = cc.gates.clone();
    let forward_contents: Vec<u64> = cc.workspace.iter().map(|&w| cc.content[w]).collect();
    phases.forward_cnot = forward_gates.iter().filter(|g| matches!(g, Gate::Cnot { .. })).count();
    phases.ancillas_used = work.len();

    // Outputs: one Toffoli per output product, steering the frame as we go.
    let column = |k: usize| -> u64 {
        lin.outputs
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &o)| acc | (((o & lin.atom(k) != 0) as u64) << j))
    };
    let mut frame: Vec<u64> = (0..n_out)
        .map(|i| (0..n_out).fold(0, |acc, j| acc | ((opts.initial_frame.get(i, j) as u64) << j)))
        .collect();
    let mut remaining = terminal.clone();
    let before_outputs = cc.gates.len();
    while !remaining.is_empty() {
        let pick = (0..remaining.len())
            .min_by_key(|&i| {
                let k = remaining[i];
                let (a, b) = lin.products[k];
                cc.cost(&[a, b]) + (frame_apply(&frame, column(k)).count_ones() as usize).saturating_sub(1)
            })
            .expect("nonempty");
        let k = remaining.remove(pick);
        let (a, b) = lin.products[k];
        let rest: Vec<u64> = remaining
            .iter()
            .flat_map(|&r| [lin.products[r].0, lin.products[r].1])
            .collect();
        let mut ahead = vec![b];
        ahead.extend(&rest);
        let wa = cc.expose(a, None, &ahead)?;
        let wb = cc.expose(b, Some(wa), &rest)?;
        let v = frame_apply(&frame, column(k));
        let support: Vec<usize> = (0..n_out).filter(|&i| v >> i & 1 == 1).collect();
        if support.is_empty() {
            return Err(SlpError::Unsupported("output product reaches no output".into()));
        }
        let score = |w: usize| -> usize {
            let mut f = frame.clone();
            for &i in &support {
                if i != w {
                    f[i] ^= f[w];
                }
            }
            remaining
                .iter()
                .map(|&r| (frame_apply(&f, column(r)).count_ones() as usize).saturating_sub(1))
                .sum()
        };
        let w = *support.iter().min_by_key(|&&w| score(w)).expect("nonempty");
        for &i in &support {
            if i != w {
                cc.gates.push(Gate::cnot(cc.out_wire(w), cc.out_wire(i)));
                frame[i] ^= frame[w];
            }
        }
        cc.gates.push(Gate::toffoli(wa, wb, cc.out_wire(w)));
    }
    phases.output_cnot = cc.gates[before_outputs..]
        .iter()
        .filter(|g| matches!(g, Gate::Cnot { .. }))
        .count();

    // Return the output frame to the identity, then add the constant.
    let mut p = BinaryMatrix::zeros(n_out, n_out);
    for (i, &row) in frame.iter().enumerate() {
        for j in 0..n_out {
            p.set(i, j, row >> j & 1 == 1);
        }
    }
    let correction =
        synth_inplace_linear_search(&p.inverse().expect("frames stay invertible"), opts.search_restarts, 1)
            .expect("square");
    phases.frame_correction_cnot = correction.len();
    for g in correction.gates() {
        cc.gates.push(g.map_wires(|w| cc.out_wire(w)));
    }
    for (j, &o) in lin.outputs.iter().enumerate() {
        if o & 1 == 1 {
            cc.gates.push(Gate::not(cc.out_wire(j)));
        }
    }

    // Backward: restore the post-forward workspace, then undo the forward phase.
    let atoms: Vec<u64> = (0..n_in)
        .map(|i| 1u64 << (1 + i))
        .chain(work.iter().map(|&k| lin.atom(k)))
        .collect();
    let as_matrix = |rows: &[u64]| {
        let mut m = BinaryMatrix::zeros(rows.len(), atoms.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &a) in atoms.iter().enumerate() {
                m.set(i, j, r & a != 0);
            }
        }
        m
    };
    let now: Vec<u64> = cc.workspace.iter().map(|&w| cc.content[w]).collect();
    let restore = as_matrix(&forward_contents)
        .mul(&as_matrix(&now).inverse().expect("independent contents"))
        .expect("square");
    let restore = synth_inplace_linear_search(&restore, opts.search_restarts, 2).expect("square");
    phases.workspace_restore_cnot = restore.len();
    let ws = cc.workspace.clone();
    for g in restore.gates() {
        cc.gates.push(g.map_wires(|w| ws[w]));
    }
    cc.gates.extend(forward_gates.iter().rev());

    let mut circuit = Circuit::from_gates(wire_count, cc.gates).expect("wires in range");
    let _ = cc.n_out;
    circuit
        .add_register(Register::new("in", Role::StateBlock, 0, n_in))
        .and_then(|_| circuit.add_register(Register::new("out", Role::Output, n_in, n_out)))
        .and_then(|_| circuit.add_register(Register::new("anc", Role::Ancilla, n_in + n_out, opts.ancillas)))
        .expect("disjoint registers");
    Ok(Compiled { circuit, phases })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::truth_table;

    fn majority() -> Program {
        // maj(a,b,c) = ab ^ ac ^ bc = (a^b)&(a^c) ^ a ; plus parity as a second output
        Program::parse(
            &["a", "b", "c"],
            &["m", "p"],
            "t0 = a ^ b
             t1 = a ^ c
             q = t0 & t1
             r = q & c
             s = a & b
             m = s ^ r ^ 1
             p = s",
        )
        .unwrap()
    }

    #[test]
    fn parse_and_eval() {
        let p = majority();
        assert_eq!(p.gate_counts(), (3, 3));
        assert!(Program::parse(&["a"], &["b"], "b = a & ").is_err());
        assert!(majority().eval(0).is_ok());
    }

    #[test]
    fn compiled_circuit_matches_program() {
        let p = majority();
        let opts = CompileOptions {
            ancillas: 2,
            initial_frame: BinaryMatrix::identity(2),
            lookahead: 8,
            search_restarts: 2,
        };
        let c = compile(&p, &opts).unwrap().circuit;
        let t = truth_table(&c, &[0, 1, 2], &[3, 4], &[]).unwrap();
        assert!(t.inputs_preserved && t.others_restored);
        for x in 0..8u64 {
            // inputs are read MSB first; program input i is bit i
            let prog_in = (0..3).fold(0, |acc, i| acc | (((x >> (2 - i)) & 1) << i));
            let y = p.eval(prog_in).unwrap();
            let expect = ((y & 1) << 1) | (y >> 1 & 1);
            assert_eq!(t.outputs[x as usize], expect, "x={x}");
        }
    }

    #[test]
    fn too_few_ancillas_is_reported() {
        let opts = CompileOptions {
            ancillas: 0,
            initial_frame: BinaryMatrix::identity(2),
            lookahead: 8,
            search_restarts: 0,
        };
        assert!(matches!(
            compile(&majority(), &opts),
            Err(SlpError::TooFewAncillas { .. })
        ));
    }
}
