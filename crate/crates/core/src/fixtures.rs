//! The proofs shipped in `fixtures/`, compiled in.

use crate::compact::CompactProof;
use crate::proof_file::parse_proof;

pub const FIG2C: &str = include_str!("../../../fixtures/fig2c.cdp");
pub const MER: &str = include_str!("../../../fixtures/mer.cdp");
pub const FIG6: &str = include_str!("../../../fixtures/fig6.cdp");
pub const FIG7: &str = include_str!("../../../fixtures/fig7.cdp");

/// Łukasiewicz's single axiom for the implicational fragment.
pub const LUKASIEWICZ: &str = "CCCpqrCCrpCsp";
pub const SYLL: &str = "CCpqCCqrCpr";
pub const PEIRCE: &str = "CCCpqpp";
pub const SIMP: &str = "CpCqp";

fn load(text: &str, name: &str) -> CompactProof {
    parse_proof(text, name).expect("shipped fixture parses")
}

pub fn fig2c() -> CompactProof {
    load(FIG2C, "fig2c.cdp")
}

pub fn mer() -> CompactProof {
    load(MER, "mer.cdp")
}

pub fn fig6() -> CompactProof {
    load(FIG6, "fig6.cdp")
}

pub fn fig7() -> CompactProof {
    load(FIG7, "fig7.cdp")
}

/// All shipped fixtures with their file names.
pub fn all() -> Vec<(&'static str, CompactProof)> {
    vec![("fig2c.cdp", fig2c()), ("mer.cdp", mer()), ("fig6.cdp", fig6()), ("fig7.cdp", fig7())]
}
