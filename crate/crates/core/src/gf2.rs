//! Linear algebra over GF(2) and in-place CNOT synthesis.
//!
//! A CNOT with control `c` and target `t` replaces wire `t` by `t ⊕ c`, so a
//! CNOT-only circuit on `n` wires computes `v ↦ M·v` for an invertible
//! `n × n` matrix `M`. [`synth_inplace_linear`] goes the other way, emitting
//! one CNOT per elementary operation of a Gauss–Jordan elimination, and
//! [`circuit_to_matrix`] recovers `M` from a circuit by simulating it on the
//! unit vectors.

use crate::circuit::{Circuit, Gate};
use crate::sim::{run, BitState};
use rand::{seq::IndexedRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::collections::VecDeque;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("matrix is {rows}×{cols}; a square matrix is required")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular over GF(2)")]
    Singular,
    #[error("circuit contains a {0} gate; only CNOT gates are linear")]
    NonLinearGate(&'static str),
    #[error("circuit contains a Toffoli gate; only NOT and CNOT gates are affine")]
    NonAffineGate,
    #[error("exhaustive search supports at most 4 wires, got {0}")]
    TooLarge(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// A dense matrix over GF(2), stored row-major with 64 bits per word.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64).max(1);
        BinaryMatrix {
            rows,
            cols,
            words_per_row,
            bits: vec![0; rows * words_per_row],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BinaryMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Build from rows of `0`/`1` characters; other characters are ignored.
    ///
    /// ```
    /// use revcirc::gf2::BinaryMatrix;
    /// let m = BinaryMatrix::from_rows(&["01", "10"]);
    /// assert!(m.get(0, 1) && !m.get(0, 0));
    /// ```
    pub fn from_rows(rows: &[&str]) -> Self {
        let parsed: Vec<Vec<bool>> = rows
            .iter()
            .map(|r| r.chars().filter(|c| *c == '0' || *c == '1').map(|c| c == '1').collect())
            .collect();
        let cols = parsed.first().map_or(0, Vec::len);
        let mut m = BinaryMatrix::zeros(parsed.len(), cols);
        for (i, row) in parsed.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {i}");
            for (j, &b) in row.iter().enumerate() {
                m.set(i, j, b);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.bits[r * self.words_per_row + (c >> 6)] >> (c & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, b: bool) {
        let i = r * self.words_per_row + (c >> 6);
        let mask = 1u64 << (c & 63);
        if b {
            self.bits[i] |= mask
        } else {
            self.bits[i] &= !mask
        }
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.bits[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    /// Row `target` ^= row `source`.
    pub fn add_row(&mut self, target: usize, source: usize) {
        let w = self.words_per_row;
        for k in 0..w {
            let v = self.bits[source * w + k];
            self.bits[target * w + k] ^= v;
        }
    }

    /// Number of ones in row `r`.
    pub fn row_weight(&self, r: usize) -> u32 {
        self.row_words(r).iter().map(|w| w.count_ones()).sum()
    }

    /// Number of ones in the whole matrix.
    pub fn weight(&self) -> u32 {
        self.bits.iter().map(|w| w.count_ones()).sum()
    }

    pub fn row(&self, r: usize) -> Vec<bool> {
        (0..self.cols).map(|c| self.get(r, c)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == BinaryMatrix::identity(self.rows)
    }

    pub fn transpose(&self) -> BinaryMatrix {
        let mut t = BinaryMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, other: &BinaryMatrix) -> Result<BinaryMatrix, Gf2Error> {
        if self.cols != other.rows {
            return Err(Gf2Error::Dimension(format!(
                "{}×{} times {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BinaryMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    let w = out.words_per_row;
                    for j in 0..w {
                        out.bits[r * w + j] ^= other.bits[k * w + j];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix–vector product over GF(2).
    pub fn mul_vec(&self, v: &[bool]) -> Result<Vec<bool>, Gf2Error> {
        if v.len() != self.cols {
            return Err(Gf2Error::Dimension(format!(
                "{}×{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| (0..self.cols).fold(false, |acc, c| acc ^ (self.get(r, c) & v[c])))
            .collect())
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            if let Some(p) = (rank..self.rows).find(|&r| m.get(r, c)) {
                m.swap_rows(rank, p);
                for r in 0..self.rows {
                    if r != rank && m.get(r, c) {
                        m.add_row(r, rank);
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            let w = self.words_per_row;
            for k in 0..w {
                self.bits.swap(a * w + k, b * w + k);
            }
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Inverse over GF(2).
    pub fn inverse(&self) -> Result<BinaryMatrix, Gf2Error> {
        if !self.is_square() {
            return Err(Gf2Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = BinaryMatrix::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| a.get(r, c)).ok_or(Gf2Error::Singular)?;
            a.swap_rows(c, p);
            inv.swap_rows(c, p);
            for r in 0..n {
                if r != c && a.get(r, c) {
                    a.add_row(r, c);
                    inv.add_row(r, c);
                }
            }
        }
        Ok(inv)
    }

    /// A uniformly random invertible `n × n` matrix (rejection sampling).
    pub fn random_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BinaryMatrix {
        loop {
            let mut m = BinaryMatrix::zeros(n, n);
            for r in 0..n {
                for c in 0..n {
                    m.set(r, c, rng.random());
                }
            }
            if m.is_invertible() {
                return m;
            }
        }
    }

    /// Rows rearranged so that new row `i` is old row `order[i]`.
    pub fn select_rows(&self, order: &[usize]) -> BinaryMatrix {
        let mut out = BinaryMatrix::zeros(order.len(), self.cols);
        for (i, &r) in order.iter().enumerate() {
            for c in 0..self.cols {
                out.set(i, c, self.get(r, c));
            }
        }
        out
    }

    /// Columns rearranged so that new column `j` is old column `order[j]`.
    pub fn select_cols(&self, order: &[usize]) -> BinaryMatrix {
        self.transpose().select_rows(order).transpose()
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}×{}", self.rows, self.cols)?;
        write!(f, "{self}")
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let s: String = (0..self.cols).map(|c| if self.get(r, c) { '1' } else { '0' }).collect();
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

/// An affine map `v ↦ M·v ⊕ constant` with invertible `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineLayer {
    pub matrix: BinaryMatrix,
    pub constant: Vec<bool>,
}

fn require_square(m: &BinaryMatrix) -> Result<(), Gf2Error> {
    if !m.is_square() {
        return Err(Gf2Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(())
}

/// In-place CNOT circuit for an invertible matrix, by Gauss–Jordan elimination.
///
/// The elimination runs on the columns of `m` (equivalently, the rows of its
/// transpose); each column operation is one CNOT, emitted in elimination order.
/// Pivots are the first nonzero entry in column order, so the output is fully
/// deterministic.
///
/// ```
/// use revcirc::circuit::Gate;
/// use revcirc::gf2::{synth_inplace_linear, BinaryMatrix};
/// let swap = BinaryMatrix::from_rows(&["01", "10"]);
/// let c = synth_inplace_linear(&swap).unwrap();
/// assert_eq!(c.gates(), &[Gate::cnot(0, 1), Gate::cnot(1, 0), Gate::cnot(0, 1)]);
/// ```
pub fn synth_inplace_linear(m: &BinaryMatrix) -> Result<Circuit, Gf2Error> {
    require_square(m)?;
    let n = m.rows();
    let mut t = m.transpose();
    let mut circuit = Circuit::new(n);
    let emit = |row_target: usize, row_source: usize, c: &mut Circuit| {
        // Row `row_target` of the transpose absorbs row `row_source`: on the
        // original matrix that is a column addition, realised by a CNOT whose
        // control is `row_target` and whose target is `row_source`.
        c.push(Gate::cnot(row_target, row_source)).expect("in range");
    };
    for col in 0..n {
        if !t.get(col, col) {
            let p = (col + 1..n).find(|&r| t.get(r, col)).ok_or(Gf2Error::Singular)?;
            t.add_row(col, p);
            emit(col, p, &mut circuit);
        }
        for r in 0..n {
            if r != col && t.get(r, col) {
                t.add_row(r, col);
                emit(r, col, &mut circuit);
            }
        }
    }
    Ok(circuit)
}

/// Row operations `(target, source)` reducing `b` to the identity, found by
/// greedily picking the operation that lowers the matrix weight the most and
/// finishing with Gauss–Jordan once no operation helps.
fn greedy_reduction(b: &BinaryMatrix, rng: Option<&mut ChaCha8Rng>) -> Result<Vec<(usize, usize)>, Gf2Error> {
    let n = b.rows();
    let mut a = b.clone();
    let mut ops = Vec::new();
    let mut rng = rng;
    loop {
        let mut best = 0i64;
        let mut candidates: Vec<(usize, usize)> = Vec::new();
        for t in 0..n {
            let wt = a.row_weight(t) as i64;
            for s in 0..n {
                if s == t {
                    continue;
                }
                let new: i64 = a
                    .row_words(t)
                    .iter()
                    .zip(a.row_words(s))
                    .map(|(x, y)| (x ^ y).count_ones() as i64)
                    .sum();
                let delta = new - wt;
                if delta < best {
                    best = delta;
                    candidates.clear();
                }
                if delta == best && delta < 0 {
                    candidates.push((t, s));
                }
            }
        }
        let Some(&(t, s)) = (match rng.as_deref_mut() {
            Some(r) => candidates.choose(r),
            None => candidates.first(),
        }) else {
            break;
        };
        a.add_row(t, s);
        ops.push((t, s));
    }
    for col in 0..n {
        if !a.get(col, col) {
            let p = (col + 1..n).find(|&r| a.get(r, col)).ok_or(Gf2Error::Singular)?;
            a.add_row(col, p);
            ops.push((col, p));
        }
        for r in 0..n {
            if r != col && a.get(r, col) {
                a.add_row(r, col);
                ops.push((r, col));
            }
        }
    }
    Ok(ops)
}

/// In-place CNOT circuit for `m` found by a seeded weight-reduction search.
///
/// Candidates are the Gauss–Jordan circuit of [`synth_inplace_linear`] and,
/// for each of `restarts` seeded runs, greedy reductions of both `m` and
/// `m⁻¹`. The shortest candidate wins (earliest on ties), so the result is
/// deterministic for a given seed and never longer than Gauss–Jordan.
pub fn synth_inplace_linear_search(m: &BinaryMatrix, restarts: usize, seed: u64) -> Result<Circuit, Gf2Error> {
    require_square(m)?;
    let n = m.rows();
    let inv = m.inverse()?;
    let mut best = synth_inplace_linear(m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for round in 0..=restarts {
        for (source, reverse) in [(&inv, false), (m, true)] {
            let ops = if round == 0 {
                greedy_reduction(source, None)?
            } else {
                greedy_reduction(source, Some(&mut rng))?
            };
            if ops.len() >= best.len() {
                continue;
            }
            // Reducing `source` to I by row operations E_k⋯E_1 means
            // E_k⋯E_1 = source⁻¹. Applied as CNOTs in order these realise
            // source⁻¹ = m when source = m⁻¹; for source = m the reversed
            // sequence realises m.
            let gates: Vec<Gate> = if reverse {
                ops.iter().rev().map(|&(t, s)| Gate::cnot(s, t)).collect()
            } else {
                ops.iter().map(|&(t, s)| Gate::cnot(s, t)).collect()
            };
            best = Circuit::from_gates(n, gates).expect("in range");
        }
    }
    Ok(best)
}

/// A CNOT circuit with the fewest possible gates for a matrix on at most four
/// wires, by breadth-first search over the whole linear group.
pub fn synth_min_cnot(m: &BinaryMatrix) -> Result<Circuit, Gf2Error> {
    require_square(m)?;
    let n = m.rows();
    if n > 4 {
        return Err(Gf2Error::TooLarge(n));
    }
    if !m.is_invertible() {
        return Err(Gf2Error::Singular);
    }
    let encode = |a: &BinaryMatrix| -> u16 {
        let mut k = 0u16;
        for r in 0..n {
            for c in 0..n {
                if a.get(r, c) {
                    k |= 1 << (r * n + c);
                }
            }
        }
        k
    };
    let row_mask = (1u16 << n) - 1;
    // Apply CNOT(c → t) after the matrix `k`: row t ^= row c.
    let step = |k: u16, c: usize, t: usize| -> u16 {
        let rc = (k >> (c * n)) & row_mask;
        k ^ (rc << (t * n))
    };
    let start = encode(&BinaryMatrix::identity(n));
    let goal = encode(m);
    let mut parent: HashMap<u16, (u16, usize, usize)> = HashMap::new();
    let mut queue = VecDeque::from([start]);
    parent.insert(start, (start, 0, 0));
    while let Some(k) = queue.pop_front() {
        if k == goal {
            break;
        }
        for c in 0..n {
            for t in 0..n {
                if c == t {
                    continue;
                }
                let nk = step(k, c, t);
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(nk) {
                    e.insert((k, c, t));
                    queue.push_back(nk);
                }
            }
        }
    }
    let mut gates = Vec::new();
    let mut k = goal;
    while k != start {
        let (p, c, t) = parent[&k];
        gates.push(Gate::cnot(c, t));
        k = p;
    }
    gates.reverse();
    Ok(Circuit::from_gates(n, gates).expect("in range"))
}

/// The matrix realised by a CNOT-only circuit.
pub fn circuit_to_matrix(c: &Circuit) -> Result<BinaryMatrix, Gf2Error> {
    for g in c.gates() {
        match g {
            Gate::Cnot { .. } => {}
            Gate::Not { .. } => return Err(Gf2Error::NonLinearGate("NOT")),
            Gate::Toffoli { .. } => return Err(Gf2Error::NonLinearGate("Toffoli")),
        }
    }
    Ok(circuit_to_affine(c)?.matrix)
}

/// The affine map realised by a circuit of NOT and CNOT gates.
pub fn circuit_to_affine(c: &Circuit) -> Result<AffineLayer, Gf2Error> {
    if c.gates().iter().any(|g| matches!(g, Gate::Toffoli { .. })) {
        return Err(Gf2Error::NonAffineGate);
    }
    let n = c.wire_count();
    let constant = run(c, &BitState::zeros(n)).expect("sized").to_bits();
    let mut matrix = BinaryMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = BitState::zeros(n);
        e.set(j, true);
        let out = run(c, &e).expect("sized");
        for (i, &k) in constant.iter().enumerate() {
            matrix.set(i, j, out.get(i) ^ k);
        }
    }
    Ok(AffineLayer { matrix, constant })
}

/// CNOTs for the matrix, then a NOT on every wire whose constant bit is 1.
pub fn synth_affine(layer: &AffineLayer) -> Result<Circuit, Gf2Error> {
    if layer.constant.len() != layer.matrix.rows() {
        return Err(Gf2Error::Dimension(format!(
            "constant of length {} for a {}-row matrix",
            layer.constant.len(),
            layer.matrix.rows()
        )));
    }
    let mut c = synth_inplace_linear(&layer.matrix)?;
    for (w, &b) in layer.constant.iter().enumerate() {
        if b {
            c.push(Gate::not(w)).expect("in range");
        }
    }
    Ok(c)
}
