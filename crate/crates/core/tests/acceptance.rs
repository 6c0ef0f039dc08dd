//! Acceptance criteria, one test each. Every test writes a single
//! `criterion N: PASS|FAIL — …` line straight to standard output (so it shows
//! even when libtest captures output) and then asserts the same condition.
//!
//! Oracles are written out here, independently of the library's reference
//! module, wherever that is practical.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use revcirc::aes::{
    add_round_key, aes_mixcolumn, aes_subbytes, build_aes128, multiplicities, output_affine_fix, simulate_checked,
    zigzag_schedule, AesLayout, SboxMode, ScheduleStep, AES_WIRES,
};
use revcirc::circuit::{Circuit, Gate};
use revcirc::estimate::{aes128_cnot_discrepancy, estimate, new_zigzag_model};
use revcirc::format::{parse_rqc, write_rqc};
use revcirc::gf2::{circuit_to_matrix, synth_inplace_linear, BinaryMatrix};
use revcirc::reference::{aes128_encrypt, aes_mixcolumn_matrix};
use revcirc::report::Component;
use revcirc::saes::{basis_change, basis_restore, build_saes, gf16_inversion, simulate, BasisDirection, SAES_WIRES};
use revcirc::sim::{run, truth_table, BitState};
use revcirc::stats::{aes128_stats, saes_stats};
use std::io::Write;
use std::time::{Duration, Instant};

// Pinned thresholds.
const SAES_RANDOM_PAIRS: usize = 200;
const SAES_BUDGET: Duration = Duration::from_secs(1);
const AES_RANDOM_PAIRS: usize = 20;
const AES_BUDGET: Duration = Duration::from_secs(10);
const TABLES_BUDGET: Duration = Duration::from_secs(5);
const SEED: u64 = 0x5eed;

const SAES_WIRES_TARGET: u64 = 48;
const SAES_TOFFOLI_TARGET: u64 = 168;
const SAES_NOT_TARGET: u64 = 75;
const SAES_CNOT_TARGET: u64 = 364;
const SAES_CNOT_CEILING_WITH_RESTORES: u64 = 380;

const AES_WIRES_TARGET: u64 = 656;
const AES_TOFFOLI_TARGET: u64 = 18_040;
const AES_NOT_TARGET: u64 = 1_976;

const SB_TARGET: (u64, u64, u64, u64) = (55, 314, 4, 16);
const SB_STAR_CNOT_TARGET: u64 = 322;
const ARK_CNOT: u64 = 128;
const FIX_CNOT: u64 = 8;
const MC_CNOT_TARGET: u64 = 277;
const MC_CNOT_CEILING: u64 = 350;

const PRINTED_CNOT: u64 = 101_174;

fn report(n: u32, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "criterion {n}: {verdict} — {detail}").expect("stdout");
}

// ---- independent oracles ----------------------------------------------------

/// S-AES written out from its textbook description.
fn saes_oracle(key: u16, pt: u16) -> u16 {
    const S: [u16; 16] = [
        0x9, 0x4, 0xA, 0xB, 0xD, 0x1, 0x8, 0x5, 0x6, 0x2, 0x0, 0x3, 0xC, 0xE, 0xF, 0x7,
    ];
    fn mul(a: u16, b: u16) -> u16 {
        let mut r = 0;
        for i in 0..4 {
            if (b >> i) & 1 == 1 {
                r ^= a << i;
            }
        }
        for i in (4..8).rev() {
            if (r >> i) & 1 == 1 {
                r ^= 0b10011 << (i - 4);
            }
        }
        r
    }
    let sub_word = |b: u16| (S[(b >> 4) as usize] << 4) | S[(b & 0xf) as usize];
    let rot = |b: u16| (b << 4 | b >> 4) & 0xff;
    let (w0, w1) = (key >> 8, key & 0xff);
    let w2 = w0 ^ 0x80 ^ sub_word(rot(w1));
    let w3 = w2 ^ w1;
    let w4 = w2 ^ 0x30 ^ sub_word(rot(w3));
    let w5 = w4 ^ w3;
    let keys = [key, w2 << 8 | w3, w4 << 8 | w5];
    let nib = |s: u16, i: u32| (s >> (12 - 4 * i)) & 0xf;
    let pack = |n: [u16; 4]| n[0] << 12 | n[1] << 8 | n[2] << 4 | n[3];
    let sub = |s: u16| pack([0, 1, 2, 3].map(|i| S[nib(s, i) as usize]));
    let shift = |s: u16| pack([nib(s, 0), nib(s, 3), nib(s, 2), nib(s, 1)]);
    let mix = |s: u16| {
        let n = [0, 1, 2, 3].map(|i| nib(s, i));
        pack([
            n[0] ^ mul(4, n[1]),
            mul(4, n[0]) ^ n[1],
            n[2] ^ mul(4, n[3]),
            mul(4, n[2]) ^ n[3],
        ])
    };
    let mut s = pt ^ keys[0];
    s = mix(shift(sub(s))) ^ keys[1];
    shift(sub(s)) ^ keys[2]
}

fn gf256_mul(a: u8, b: u8) -> u8 {
    let (mut a, mut b, mut r) = (a, b, 0u8);
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        a = (a << 1) ^ if a & 0x80 != 0 { 0x1b } else { 0 };
        b >>= 1;
    }
    r
}

/// AES S-box from field inversion by search plus the affine map.
fn aes_sbox_oracle(x: u8) -> u8 {
    let inv = (0..=255u8).find(|&y| gf256_mul(x, y) == 1).unwrap_or(0);
    let mut out = 0x63;
    for i in 0..5 {
        out ^= inv.rotate_left(i);
    }
    out
}

/// The published polynomial-to-normal matrix.
fn basis_matrix() -> BinaryMatrix {
    BinaryMatrix::from_rows(&["0111", "0101", "1001", "0011"])
}

fn bit(v: u8, i: usize) -> u8 {
    (v >> (3 - i)) & 1
}

/// Normal-basis inversion from its Boolean formulas; `x₁` is the high bit.
fn gf16_inverse_formula(x: u8) -> u8 {
    let [x1, x2, x3, x4] = [0, 1, 2, 3].map(|i| bit(x, i));
    let y1 = (x2 & x3 & x4) ^ (x1 & x3) ^ (x2 & x3) ^ x3 ^ x4;
    let y2 = (x1 & x3 & x4) ^ (x1 & x3) ^ (x2 & x3) ^ (x2 & x4) ^ x4;
    let y3 = (x1 & x2 & x4) ^ (x1 & x3) ^ (x1 & x4) ^ x1 ^ x2;
    let y4 = (x1 & x2 & x3) ^ (x1 & x3) ^ (x1 & x4) ^ (x2 & x4) ^ x2;
    y1 << 3 | y2 << 2 | y3 << 1 | y4
}

fn apply4(m: &BinaryMatrix, v: u8) -> u8 {
    (0..4).fold(0, |acc, r| {
        acc << 1 | (0..4).fold(0, |s, c| s ^ (m.get(r, c) as u8 & bit(v, c)))
    })
}

/// Normal-basis inversion through the polynomial basis (x⁴ + x + 1).
fn gf16_inverse_conjugated(x: u8) -> u8 {
    let m = basis_matrix();
    let to_poly = |x: u8| (0..16u8).find(|&a| apply4(&m, a) == x).expect("invertible");
    let mul = |a: u8, b: u8| {
        let mut r = 0u8;
        for i in 0..4 {
            if (b >> i) & 1 == 1 {
                r ^= a << i;
            }
        }
        for i in (4..8).rev() {
            if (r >> i) & 1 == 1 {
                r ^= 0b10011 << (i - 4);
            }
        }
        r
    };
    let a = to_poly(x);
    let inv = (0..16u8).find(|&b| mul(a, b) == 1).unwrap_or(0);
    apply4(&m, inv)
}

fn random_circuit(rng: &mut ChaCha8Rng) -> Circuit {
    let n = rng.random_range(3..=12);
    let len = rng.random_range(0..80);
    let gates = (0..len).map(|_| {
        let mut w: Vec<usize> = (0..n).collect();
        for i in 0..3 {
            let j = rng.random_range(i..n);
            w.swap(i, j);
        }
        match rng.random_range(0..3) {
            0 => Gate::not(w[0]),
            1 => Gate::cnot(w[0], w[1]),
            _ => Gate::toffoli(w[0], w[1], w[2]),
        }
    });
    Circuit::from_gates(n, gates.collect::<Vec<_>>()).expect("valid gates")
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> BitState {
    BitState::from_bits(&(0..n).map(|_| rng.random()).collect::<Vec<bool>>())
}

/// An invertible matrix as a product of random row additions and swaps.
fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> BinaryMatrix {
    let mut m = BinaryMatrix::identity(n);
    for _ in 0..4 * n * n {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        if a != b {
            m.add_row(a, b);
        }
    }
    m
}

// ---- criteria ----------------------------------------------------------------

#[test]
fn criterion_01_saes_functional_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut mismatches = 0;
    for _ in 0..SAES_RANDOM_PAIRS {
        let (k, p): (u16, u16) = (rng.random(), rng.random());
        if simulate(&build_saes(k, p)) != saes_oracle(k, p) {
            mismatches += 1;
        }
    }
    let vector = simulate(&build_saes(0xA73B, 0x6F6B));
    let elapsed = start.elapsed();
    let ok = mismatches == 0 && vector == 0x0738 && saes_oracle(0xA73B, 0x6F6B) == 0x0738 && elapsed < SAES_BUDGET;
    report(
        1,
        ok,
        &format!(
            "S-AES {}/{SAES_RANDOM_PAIRS} random pairs match; a73b/6f6b -> {vector:04x} (want 0738); {:.3} s (< {} s)",
            SAES_RANDOM_PAIRS - mismatches,
            elapsed.as_secs_f64(),
            SAES_BUDGET.as_secs()
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_02_saes_resources() {
    let b = build_saes(0xffff, 0xffff);
    let r = b.circuit.resources();
    let doc = saes_stats(0xffff, 0xffff);
    let delta_itemized = doc.notes.iter().any(|n| n.starts_with("CNOT delta over 364"));
    let cnot_ok = r.cnot == SAES_CNOT_TARGET || (r.cnot <= SAES_CNOT_CEILING_WITH_RESTORES && delta_itemized);
    let ok = r.wires == SAES_WIRES_TARGET && r.toffoli == SAES_TOFFOLI_TARGET && r.not == SAES_NOT_TARGET && cnot_ok;
    report(
        2,
        ok,
        &format!(
            "S-AES all-ones: wires {} (want {SAES_WIRES_TARGET}), toffoli {} (want {SAES_TOFFOLI_TARGET}), not {} (want {SAES_NOT_TARGET}), cnot {} (want {SAES_CNOT_TARGET}, or <= {SAES_CNOT_CEILING_WITH_RESTORES} with itemized delta: {})",
            r.wires, r.toffoli, r.not, r.cnot, doc.notes[0]
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_03_aes128_functional_equivalence() {
    let start = Instant::now();
    let key: [u8; 16] = std::array::from_fn(|i| i as u8);
    let pt: [u8; 16] = std::array::from_fn(|i| (i as u8) * 0x11);
    let fips_ct = [
        0x69, 0xc4, 0xe0, 0xd8, 0x6a, 0x7b, 0x04, 0x30, 0xd8, 0xcd, 0xb7, 0x80, 0x70, 0xb4, 0xc5, 0x5a,
    ];
    let inverse_rounds = zigzag_schedule()
        .iter()
        .filter(|s| matches!(s, ScheduleStep::InverseRound { .. }))
        .count();
    let mut failures = Vec::new();
    let mut check = |k: &[u8; 16], p: &[u8; 16], want: [u8; 16]| match simulate_checked(&build_aes128(k, p)) {
        Ok(run) if run.ciphertext == want && run.ancillas_clean && run.zero_checks == inverse_rounds => {}
        Ok(run) => failures.push(format!("ct {:02x?} zero checks {}", run.ciphertext, run.zero_checks)),
        Err(e) => failures.push(e.to_string()),
    };
    check(&key, &pt, fips_ct);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..AES_RANDOM_PAIRS {
        let (k, p): ([u8; 16], [u8; 16]) = (rng.random(), rng.random());
        check(&k, &p, aes128_encrypt(&k, &p));
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && aes128_encrypt(&key, &pt) == fips_ct && elapsed < AES_BUDGET;
    report(
        3,
        ok,
        &format!(
            "AES-128 FIPS vector + {AES_RANDOM_PAIRS} random pairs, {inverse_rounds} zero-block checks each: {} failures; {:.2} s (< {} s)",
            failures.len(),
            elapsed.as_secs_f64(),
            AES_BUDGET.as_secs()
        ),
    );
    assert!(ok, "{failures:?}");
}

#[test]
fn criterion_04_aes128_resources() {
    let r = build_aes128(&[0xff; 16], &[0xff; 16]).circuit.resources();
    let ok = r.wires == AES_WIRES_TARGET && r.toffoli == AES_TOFFOLI_TARGET && r.not == AES_NOT_TARGET;
    report(
        4,
        ok,
        &format!(
            "AES-128 all-ones: wires {} (want {AES_WIRES_TARGET}), toffoli {} (want {AES_TOFFOLI_TARGET}), not {} (want {AES_NOT_TARGET}); cnot {} not asserted",
            r.wires, r.toffoli, r.not, r.cnot
        ),
    );
    assert_eq!(r.wires as usize, AES_WIRES);
    assert!(ok);
}

#[test]
fn criterion_05_component_counts() {
    let sb = aes_subbytes(SboxMode::Fresh).resources();
    let sb_star = aes_subbytes(SboxMode::Xor).resources();
    let ark = add_round_key(&AesLayout::default(), 0).len() as u64;
    let fix = output_affine_fix().resources();
    let mc = aes_mixcolumn();
    let mc_matrix_ok = circuit_to_matrix(&mc)
        .map(|m| m == aes_mixcolumn_matrix())
        .unwrap_or(false);
    let m = multiplicities(&zigzag_schedule());
    let built = build_aes128(&[0xff; 16], &[0xff; 16]);
    let rows = revcirc::report::breakdown(&built.circuit, &built.segments);
    let rc_not = rows
        .iter()
        .find(|r| r.component == Component::RoundConstant)
        .map_or(0, |r| r.not);

    let mut parts: Vec<(String, bool)> = Vec::new();
    let mut part = |name: &str, got: u64, want: u64, ok: bool| parts.push((format!("{name} {got}/{want}"), ok));
    part("SB toffoli", sb.toffoli, SB_TARGET.0, sb.toffoli == SB_TARGET.0);
    part("SB cnot", sb.cnot, SB_TARGET.1, sb.cnot == SB_TARGET.1);
    part("SB not", sb.not, SB_TARGET.2, sb.not == SB_TARGET.2);
    part(
        "SB ancilla",
        sb.ancilla_wires,
        SB_TARGET.3,
        sb.ancilla_wires == SB_TARGET.3,
    );
    part(
        "SB* cnot",
        sb_star.cnot,
        SB_STAR_CNOT_TARGET,
        sb_star.cnot == SB_STAR_CNOT_TARGET,
    );
    part("ARK cnot", ark, ARK_CNOT, ark == ARK_CNOT);
    part(
        "fix cnot",
        fix.cnot,
        FIX_CNOT,
        fix.cnot == FIX_CNOT && fix.toffoli == 0 && fix.not == 0,
    );
    part("SB", m.sb, 256, m.sb == 256);
    part("SB*", m.sb_star, 72, m.sb_star == 72);
    part("ARK", m.ark, 16, m.ark == 16);
    part("MC", m.mc, 60, m.mc == 60);
    part("Others", m.others, 18, m.others == 18);
    part("P", m.plaintext_toggles, 4, m.plaintext_toggles == 4);
    part("RC not", rc_not, 24, rc_not == 24);
    let mc_len = mc.len() as u64;
    part(
        "MC cnot (<= ceiling, matrix equal)",
        mc_len,
        MC_CNOT_TARGET,
        mc_matrix_ok && mc_len <= MC_CNOT_CEILING,
    );
    let failed: Vec<&str> = parts.iter().filter(|p| !p.1).map(|p| p.0.as_str()).collect();
    let ok = failed.is_empty();
    let detail = if ok {
        format!(
            "all {} component counts match (MC {mc_len} <= {MC_CNOT_CEILING})",
            parts.len()
        )
    } else {
        format!(
            "{} of {} parts off (got/want): {}",
            failed.len(),
            parts.len(),
            failed.join(", ")
        )
    };
    report(5, ok, &detail);
    assert!(ok);
}

#[test]
fn criterion_06_discrepancy_reporting() {
    // The per-operation table multiplied out by hand: ARK, SB, SB*, MC, Others.
    let per_op = 16 * 128 + 256 * 314 + 72 * 322 + 60 * 277 + 18 * 96;
    let d = aes128_cnot_discrepancy();
    let doc = aes128_stats(&[0xff; 16], &[0xff; 16]);
    let text = doc.render();
    let reported = doc.cnot_discrepancy == Some(d)
        && text.contains(&per_op.to_string())
        && text.contains(&PRINTED_CNOT.to_string());
    let ok = per_op == 123_964 && d.per_op_derived == per_op && d.printed == PRINTED_CNOT && d.discrepancy && reported;
    report(
        6,
        ok,
        &format!(
            "per-op CNOT {} (hand sum {per_op}), printed {}, flag {}",
            d.per_op_derived, d.printed, d.discrepancy
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_07_estimator_reproduction() {
    let e = estimate(&new_zigzag_model());
    let hand_toffoli = 160 * 55 + 40 * 55 + 128 * 63;
    let got = (e.toffoli, e.cnot, e.not, e.data_qubits, e.ancilla_qubits);
    let ok = got == (19_064, 118_980, 4_528, 384, 16) && hand_toffoli == e.toffoli;
    report(
        7,
        ok,
        &format!(
            "new zig-zag: toffoli {} cnot {} not {} qubits {} + {} (want 19064 118980 4528 384 + 16)",
            got.0, got.1, got.2, got.3, got.4
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_08_exhaustive_truth_tables() {
    let start = Instant::now();
    let all: Vec<usize> = (0..8).collect();
    let inv = truth_table(&gf16_inversion(), &all, &all, &[]).unwrap();
    let inv_ok = (0..256usize).all(|v| {
        let (x, y) = ((v >> 4) as u8, (v & 0xf) as u8);
        let formula = gf16_inverse_formula(x);
        let out = inv.outputs[v] as u8;
        formula == gf16_inverse_conjugated(x) && out == (x << 4 | (y ^ formula))
    });

    let sb = truth_table(&aes_subbytes(SboxMode::Fresh), &all, &(8..16).collect::<Vec<_>>(), &[]).unwrap();
    let sb_ok = sb.inputs_preserved
        && sb.others_restored
        && (0..256usize).all(|x| sb.outputs[x] as u8 == aes_sbox_oracle(x as u8));

    let star = aes_subbytes(SboxMode::Xor);
    let xy: Vec<usize> = (0..16).collect();
    let y_out = truth_table(&star, &xy, &(8..16).collect::<Vec<_>>(), &[]).unwrap();
    let x_out = truth_table(&star, &xy, &all, &[]).unwrap();
    let star_ok = y_out.others_restored
        && (0..65536usize).all(|v| {
            let (x, y) = ((v >> 8) as u8, v as u8);
            y_out.outputs[v] as u8 == y ^ aes_sbox_oracle(x) && x_out.outputs[v] as u8 == x
        });
    let elapsed = start.elapsed();
    let ok = inv_ok && sb_ok && star_ok && elapsed < TABLES_BUDGET;
    report(
        8,
        ok,
        &format!(
            "GF(16) inversion 256 pairs vs formula and conjugated oracle: {inv_ok}; S-box 256 inputs, ancillas restored: {sb_ok}; SB* 65536 pairs: {star_ok}; {:.2} s (< {} s)",
            elapsed.as_secs_f64(),
            TABLES_BUDGET.as_secs()
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_09_property_suites() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut round_trip = 0;
    let mut additive = 0;
    let mut rqc = 0;
    for _ in 0..1000 {
        let c = random_circuit(&mut rng);
        let s = random_state(&mut rng, c.wire_count());
        let back = run(&c.invert(), &run(&c, &s).unwrap()).unwrap();
        round_trip += (back == s) as usize;

        let mut d = random_circuit(&mut rng);
        while d.wire_count() > c.wire_count() {
            d = random_circuit(&mut rng);
        }
        let map: Vec<usize> = (0..d.wire_count()).collect();
        let (rc, rd, rcd) = (c.resources(), d.resources(), c.compose(&d, &map).unwrap().resources());
        additive += (rcd.toffoli == rc.toffoli + rd.toffoli
            && rcd.cnot == rc.cnot + rd.cnot
            && rcd.not == rc.not + rd.not
            && rcd.depth <= rc.depth + rd.depth) as usize;

        rqc += (parse_rqc(&write_rqc(&c)).as_ref() == Ok(&c)) as usize;
    }
    let mut synth = 0;
    for n in [8, 32] {
        for _ in 0..100 {
            let m = random_invertible(&mut rng, n);
            let c = synth_inplace_linear(&m).unwrap();
            synth += (circuit_to_matrix(&c).unwrap() == m) as usize;
        }
    }
    let ok = round_trip == 1000 && additive == 1000 && rqc == 1000 && synth == 200;
    report(
        9,
        ok,
        &format!(
            "invert∘run {round_trip}/1000, compose additivity {additive}/1000, .rqc round trip {rqc}/1000, linear synthesis {synth}/200 (n = 8, 32)"
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_10_basis_change() {
    let p2n = basis_change(BasisDirection::PolyToNormal);
    let n2p = basis_change(BasisDirection::NormalToPoly);
    let matrix_ok = p2n.matrix() == basis_matrix();
    let coords_ok = n2p.matrix().mul(&p2n.matrix()).unwrap().is_identity()
        && p2n.matrix().mul(&n2p.matrix()).unwrap().is_identity();
    let mut both = p2n.circuit.clone();
    both.extend(&basis_restore()).unwrap();
    let wires_ok = circuit_to_matrix(&both).unwrap().is_identity();
    let cnots = (p2n.circuit.len(), n2p.circuit.len());
    let ok = matrix_ok && coords_ok && wires_ok && cnots == (4, 4);
    report(
        10,
        ok,
        &format!(
            "poly->normal matrix equals the published one: {matrix_ok}; directions compose to identity: {coords_ok} (as wires: {wires_ok}); {} + {} CNOTs",
            cnots.0, cnots.1
        ),
    );
    assert!(ok);
}

#[test]
fn saes_circuit_has_the_declared_wire_count() {
    assert_eq!(build_saes(0, 0).circuit.wire_count(), SAES_WIRES);
}
