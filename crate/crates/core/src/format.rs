//! The `.rqc` text format and OpenQASM 2.0 export.
//!
//! `.rqc` is line oriented:
//!
//! ```text
//! rqc 1
//! wires 3
//! reg data state-block 0 2
//! # comments start with '#'
//! x 0
//! cx 0 1
//! ccx 0 1 2
//! ```
//!
//! Line 1 is the version, line 2 the wire count. Register lines
//! (`reg <name> <role> <first> <count>`) come before the gates, and every
//! line ends with a newline. Roles are `key`, `state-block`, `ancilla` and
//! `output`.
//!
//! ```
//! use revcirc::circuit::{Circuit, Gate};
//! use revcirc::format::{parse_rqc, write_rqc};
//! let c = Circuit::from_gates(2, [Gate::cnot(0, 1)]).unwrap();
//! let text = write_rqc(&c);
//! assert_eq!(text, "rqc 1\nwires 2\ncx 0 1\n");
//! assert_eq!(parse_rqc(&text).unwrap(), c);
//! ```

use crate::circuit::{Circuit, CircuitError, Gate, Register, Role};
use std::fmt::Write;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Circuit { line: usize, source: CircuitError },
}

/// Serialize a circuit as `.rqc` text.
pub fn write_rqc(c: &Circuit) -> String {
    let mut out = String::with_capacity(12 * c.len() + 32);
    out.push_str("rqc 1\n");
    writeln!(out, "wires {}", c.wire_count()).expect("string write");
    for r in c.registers() {
        writeln!(out, "reg {} {} {} {}", r.name, r.role.as_str(), r.first, r.count).expect("string write");
    }
    for g in c.gates() {
        writeln!(out, "{g}").expect("string write");
    }
    out
}

/// Parse `.rqc` text.
pub fn parse_rqc(text: &str) -> Result<Circuit, FormatError> {
    let syntax = |line: usize, msg: &str| FormatError::Syntax {
        line,
        msg: msg.to_string(),
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, "rqc 1")) => {}
        Some((n, _)) => return Err(syntax(n, "expected header `rqc 1`")),
        None => return Err(syntax(1, "empty input")),
    }
    let (n, wires_line) = lines.next().ok_or_else(|| syntax(2, "missing `wires N`"))?;
    let wires = wires_line
        .strip_prefix("wires ")
        .and_then(|w| w.trim().parse::<usize>().ok())
        .ok_or_else(|| syntax(n, "expected `wires N`"))?;
    let mut c = Circuit::new(wires);
    let mut gates_started = false;
    for (n, line) in lines {
        let line = line.split('#').next().unwrap_or("").trim();
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| syntax(n, &format!("bad wire index `{s}`")))
        };
        let gate = match tokens.as_slice() {
            ["reg", name, role, first, count] => {
                if gates_started {
                    return Err(syntax(n, "register declared after gates"));
                }
                let role = Role::parse(role).ok_or_else(|| syntax(n, &format!("unknown role `{role}`")))?;
                c.add_register(Register::new(*name, role, num(first)?, num(count)?))
                    .map_err(|source| FormatError::Circuit { line: n, source })?;
                continue;
            }
            ["x", t] => Gate::not(num(t)?),
            ["cx", a, t] => Gate::cnot(num(a)?, num(t)?),
            ["ccx", a, b, t] => Gate::toffoli(num(a)?, num(b)?, num(t)?),
            _ => return Err(syntax(n, &format!("unrecognized line `{line}`"))),
        };
        gates_started = true;
        c.push(gate)
            .map_err(|source| FormatError::Circuit { line: n, source })?;
    }
    Ok(c)
}

/// Number of header lines [`write_qasm`] emits before the gates.
pub const QASM_HEADER_LINES: usize = 3;

/// OpenQASM 2.0 text with one register `q` and gates `x`, `cx`, `ccx`.
pub fn write_qasm(c: &Circuit) -> String {
    let mut out = String::with_capacity(20 * c.len() + 64);
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    writeln!(out, "qreg q[{}];", c.wire_count()).expect("string write");
    for g in c.gates() {
        match *g {
            Gate::Not { target } => writeln!(out, "x q[{target}];"),
            Gate::Cnot { control, target } => writeln!(out, "cx q[{control}], q[{target}];"),
            Gate::Toffoli { c1, c2, target } => writeln!(out, "ccx q[{c1}], q[{c2}], q[{target}];"),
        }
        .expect("string write");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_with_registers() {
        let mut c = Circuit::from_gates(4, [Gate::not(3), Gate::toffoli(0, 1, 2), Gate::cnot(2, 3)]).unwrap();
        c.add_register(Register::new("k", Role::Key, 0, 2)).unwrap();
        c.add_register(Register::new("a", Role::Ancilla, 2, 2)).unwrap();
        let text = write_rqc(&c);
        assert!(text.starts_with("rqc 1\nwires 4\nreg k key 0 2\n"));
        assert_eq!(parse_rqc(&text).unwrap(), c);
    }

    #[test]
    fn comments_and_errors() {
        let c = parse_rqc("# hi\nrqc 1\nwires 2\n# gate below\ncx 0 1 # trailing\n").unwrap();
        assert_eq!(c.gates(), &[Gate::cnot(0, 1)]);
        assert!(parse_rqc("rqc 2\nwires 1\n").is_err());
        assert!(parse_rqc("rqc 1\nwires 2\ncx 0 2\n").is_err());
        assert!(parse_rqc("rqc 1\nwires 2\ncx 0 0\n").is_err());
        assert!(parse_rqc("rqc 1\nwires 2\nswap 0 1\n").is_err());
        assert!(parse_rqc("rqc 1\nwires 2\nx 0\nreg a key 0 1\n").is_err());
    }

    #[test]
    fn qasm_lines() {
        let c = Circuit::from_gates(2, [Gate::cnot(0, 1), Gate::not(1)]).unwrap();
        let q = write_qasm(&c);
        assert!(q.contains("\ncx q[0], q[1];\n"));
        assert_eq!(q.lines().count(), QASM_HEADER_LINES + 2);
    }
}
