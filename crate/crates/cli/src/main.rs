//! `revcirc`: build, inspect, simulate, verify and export the cipher circuits.
//!
//! Exit status is 0 on success, 1 when a verification or truth-table check
//! fails, and 2 for usage and parse errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use revcirc::aes::{build_aes128, AesLayout, Block, AES_WIRES};
use revcirc::circuit::Circuit;
use revcirc::format::{parse_rqc, write_qasm, write_rqc};
use revcirc::reference::{aes128_encrypt, saes_encrypt};
use revcirc::saes::{build_saes, SaesLayout, SAES_WIRES};
use revcirc::sim::BitState;
use revcirc::stats::{aes128_stats, new_zigzag_stats, saes_stats};
use revcirc::tables::{component_table, COMPONENTS};
use revcirc::verify::{verify_aes128, verify_saes, VerifyReport};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "revcirc", version, about = "Reversible circuits for AES-128 and S-AES")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a cipher circuit and write it as `.rqc`.
    Build {
        #[command(flatten)]
        input: CipherInput,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Resource report of a built cipher, an estimate, or an `.rqc` file.
    Stats {
        /// An `.rqc` file to count instead of building a cipher.
        file: Option<PathBuf>,
        #[command(flatten)]
        input: CipherInput,
        #[arg(long, value_enum, default_value_t = ScheduleArg::Zigzag)]
        schedule: ScheduleArg,
        /// Print the machine-readable JSON document instead of the table.
        #[arg(long)]
        json: bool,
    },
    /// Run an `.rqc` cipher circuit from all-zero wires and print its output register.
    Simulate {
        file: PathBuf,
        /// With --plaintext: also compare against the reference cipher.
        #[arg(long)]
        key: Option<String>,
        #[arg(long)]
        plaintext: Option<String>,
    },
    /// Seeded random trials of circuit against reference.
    Verify {
        #[arg(long, value_enum)]
        cipher: CipherArg,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a circuit as `.rqc` or OpenQASM 2.0.
    Export {
        /// An `.rqc` file; a cipher circuit is built when absent.
        file: Option<PathBuf>,
        #[command(flatten)]
        input: CipherInput,
        #[arg(long, value_enum, default_value_t = FormatArg::Qasm)]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive truth table of a component, checked against its oracle.
    TruthTable {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(COMPONENTS))]
        component: String,
    },
}

#[derive(Args)]
struct CipherInput {
    #[arg(long, value_enum, default_value_t = CipherArg::Saes)]
    cipher: CipherArg,
    /// Hex key: 4 digits for S-AES, 32 for AES-128. Default all ones.
    #[arg(long)]
    key: Option<String>,
    /// Hex plaintext, same length as the key. Default all ones.
    #[arg(long)]
    plaintext: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CipherArg {
    Saes,
    Aes128,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScheduleArg {
    Zigzag,
    NewZigzagEstimate,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Rqc,
    Qasm,
}

/// A failure that maps to an exit status.
enum Failure {
    Usage(String),
    Check(String),
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn parse_saes_hex(s: Option<&str>, what: &str) -> Result<u16, Failure> {
    let Some(s) = s else { return Ok(0xffff) };
    let bytes: [u8; 2] =
        hex::FromHex::from_hex(s).map_err(|e| usage(format!("{what} `{s}`: {e}; S-AES takes 4 hex digits")))?;
    Ok(u16::from_be_bytes(bytes))
}

fn parse_aes_hex(s: Option<&str>, what: &str) -> Result<[u8; 16], Failure> {
    let Some(s) = s else { return Ok([0xff; 16]) };
    hex::FromHex::from_hex(s).map_err(|e| usage(format!("{what} `{s}`: {e}; AES-128 takes 32 hex digits")))
}

/// The circuit a [`CipherInput`] describes.
fn build_circuit(input: &CipherInput) -> Result<Circuit, Failure> {
    Ok(match input.cipher {
        CipherArg::Saes => {
            let key = parse_saes_hex(input.key.as_deref(), "key")?;
            let pt = parse_saes_hex(input.plaintext.as_deref(), "plaintext")?;
            build_saes(key, pt).circuit
        }
        CipherArg::Aes128 => {
            let key = parse_aes_hex(input.key.as_deref(), "key")?;
            let pt = parse_aes_hex(input.plaintext.as_deref(), "plaintext")?;
            build_aes128(&key, &pt).circuit
        }
    })
}

fn read_circuit(path: &PathBuf) -> Result<Circuit, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    parse_rqc(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&PathBuf>) -> Outcome {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_stats(file: Option<PathBuf>, input: &CipherInput, schedule: ScheduleArg, json: bool) -> Outcome {
    if let Some(path) = file {
        let r = read_circuit(&path)?.resources();
        if json {
            println!("{}", serde_json::to_string_pretty(&r).expect("serializable"));
        } else {
            println!(
                "toffoli {}  cnot {}  not {}  wires {}  ancilla {}  depth {}",
                r.toffoli, r.cnot, r.not, r.wires, r.ancilla_wires, r.depth
            );
        }
        return Ok(());
    }
    let doc = match (input.cipher, schedule) {
        (CipherArg::Saes, ScheduleArg::Zigzag) => saes_stats(
            parse_saes_hex(input.key.as_deref(), "key")?,
            parse_saes_hex(input.plaintext.as_deref(), "plaintext")?,
        ),
        (CipherArg::Aes128, ScheduleArg::Zigzag) => aes128_stats(
            &parse_aes_hex(input.key.as_deref(), "key")?,
            &parse_aes_hex(input.plaintext.as_deref(), "plaintext")?,
        ),
        (CipherArg::Aes128, ScheduleArg::NewZigzagEstimate) => new_zigzag_stats(),
        (CipherArg::Saes, ScheduleArg::NewZigzagEstimate) => {
            return Err(usage("the new zig-zag estimate exists for AES-128 only"))
        }
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    } else {
        print!("{}", doc.render());
    }
    Ok(())
}

/// The output register is chosen by wire count: the cipher register of a
/// 48-wire S-AES circuit, or state block R0 of a 656-wire AES-128 circuit.
fn cmd_simulate(file: PathBuf, key: Option<String>, plaintext: Option<String>) -> Outcome {
    let c = read_circuit(&file)?;
    let mut s = BitState::zeros(c.wire_count());
    s.apply_all(c.gates());
    let check = key.is_some() || plaintext.is_some();
    if check && (key.is_none() || plaintext.is_none()) {
        return Err(usage("--key and --plaintext go together"));
    }
    let (got, expected) = match c.wire_count() {
        SAES_WIRES => {
            let got = format!("{:04x}", SaesLayout::default().read_cipher(&s));
            let expected = if check {
                let k = parse_saes_hex(key.as_deref(), "key")?;
                let p = parse_saes_hex(plaintext.as_deref(), "plaintext")?;
                Some(format!("{:04x}", saes_encrypt(k, p)))
            } else {
                None
            };
            (got, expected)
        }
        AES_WIRES => {
            let got = hex::encode(AesLayout::default().read_block(&s, Block::State(0)));
            let expected = if check {
                let k = parse_aes_hex(key.as_deref(), "key")?;
                let p = parse_aes_hex(plaintext.as_deref(), "plaintext")?;
                Some(hex::encode(aes128_encrypt(&k, &p)))
            } else {
                None
            };
            (got, expected)
        }
        n => {
            return Err(usage(format!(
                "{} has {n} wires; expected {SAES_WIRES} (S-AES) or {AES_WIRES} (AES-128)",
                file.display()
            )))
        }
    };
    println!("{got}");
    match expected {
        Some(e) if e != got => Err(Failure::Check(format!("reference ciphertext is {e}"))),
        _ => Ok(()),
    }
}

fn cmd_verify(cipher: CipherArg, trials: u64, seed: u64) -> Outcome {
    let report: VerifyReport = match cipher {
        CipherArg::Saes => verify_saes(trials as usize, seed),
        CipherArg::Aes128 => verify_aes128(trials as usize, seed),
    };
    let passed = report.trials.iter().filter(|t| t.passed()).count();
    println!("{passed}/{} trials passed (seed {seed})", report.trials.len());
    match report.first_failure() {
        None => {
            println!("PASS");
            Ok(())
        }
        Some(t) => {
            println!("first failure: trial {}", t.index);
            println!("  key        {}", t.key);
            println!("  plaintext  {}", t.plaintext);
            println!("  expected   {}", t.expected);
            println!("  got        {}", t.got);
            println!("  reason     {}", t.failure.as_deref().unwrap_or(""));
            Err(Failure::Check("FAIL".into()))
        }
    }
}

fn cmd_truth_table(component: &str) -> Outcome {
    let t = component_table(component).ok_or_else(|| usage(format!("unknown component `{component}`")))?;
    print!("{}", t.render());
    if t.passed() {
        Ok(())
    } else {
        Err(Failure::Check(format!("{component}: table does not match its oracle")))
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Build { input, out } => emit(&write_rqc(&build_circuit(&input)?), out.as_ref()),
        Command::Stats {
            file,
            input,
            schedule,
            json,
        } => cmd_stats(file, &input, schedule, json),
        Command::Simulate { file, key, plaintext } => cmd_simulate(file, key, plaintext),
        Command::Verify { cipher, trials, seed } => cmd_verify(cipher, trials, seed),
        Command::Export {
            file,
            input,
            format,
            out,
        } => {
            let c = match file {
                Some(p) => read_circuit(&p)?,
                None => build_circuit(&input)?,
            };
            let text = match format {
                FormatArg::Rqc => write_rqc(&c),
                FormatArg::Qasm => write_qasm(&c),
            };
            emit(&text, out.as_ref())
        }
        Command::TruthTable { component } => cmd_truth_table(&component),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
