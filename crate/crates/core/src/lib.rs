//! Reversible-circuit compiler for qubit-lean AES-128 and S-AES circuits.
//!
//! Circuits are NOT/CNOT/Toffoli gate lists ([`circuit`]) with exact resource
//! counts, run on classical bit vectors ([`sim`]). Linear layers are
//! synthesized in place ([`gf2`]), S-boxes are compiled from straight-line
//! programs ([`slp`]), and [`saes`] and [`aes`] assemble the 48- and
//! 656-wire cipher circuits. [`reference`] holds plain software ciphers to
//! check them against. [`report`], [`estimate`] and [`stats`] do the
//! accounting, and [`format`] reads and writes circuits as text.
//!
//! ```
//! use revcirc::saes::{build_saes, simulate};
//! assert_eq!(simulate(&build_saes(0xA73B, 0x6F6B)), 0x0738);
//! ```

pub mod aes;
pub mod circuit;
pub mod estimate;
pub mod format;
pub mod gf2;
pub mod reference;
pub mod report;
pub mod saes;
pub mod sim;
pub mod slp;
pub mod stats;
pub mod tables;
pub mod verify;

// The guide in `book/` is compiled and run as doc-tests, one module per
// chapter, so its snippets cannot drift from the code.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/circuits.md")]
    mod circuits {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/linear-layers.md")]
    mod linear_layers {}
    #[doc = include_str!("../../../book/src/slp.md")]
    mod slp {}
    #[doc = include_str!("../../../book/src/saes.md")]
    mod saes {}
    #[doc = include_str!("../../../book/src/aes128.md")]
    mod aes128 {}
    #[doc = include_str!("../../../book/src/accounting.md")]
    mod accounting {}
    #[doc = include_str!("../../../book/src/formats.md")]
    mod formats {}
}
