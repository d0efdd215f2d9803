//! The text format for compact proofs.
//!
//! One step per line: `[*] <index>. <formula> [= <dterm>]`. A leading `*`
//! marks a goal, a missing D-term marks an axiom. Text after `#` is a comment;
//! on a step line it is kept as the step's note.

use std::fmt::Write as _;
use std::path::Path;

use crate::compact::{Body, CompactProof, Step};
use crate::dterm::parse_dterm;
use crate::error::{Error, ParseError, Result};
use crate::formula::parse_formula;

fn parse_line(line: &str) -> Result<Option<Step>, ParseError> {
    let (content, note) = match line.find('#') {
        Some(i) => (&line[..i], Some(line[i + 1..].trim().to_string()).filter(|s| !s.is_empty())),
        None => (line, None),
    };
    let trimmed = content.trim_start();
    if trimmed.trim().is_empty() {
        return Ok(None);
    }
    let mut offset = content.len() - trimmed.len();
    let mut rest = trimmed;
    let goal = rest.starts_with('*');
    if goal {
        rest = &rest[1..];
        let t = rest.trim_start();
        offset += 1 + rest.len() - t.len();
        rest = t;
    }
    let digits = rest.bytes().take_while(u8::is_ascii_digit).count();
    if digits == 0 {
        return Err(ParseError::new(offset, "expected a step number"));
    }
    let index: u32 = rest[..digits].parse().map_err(|_| ParseError::new(offset, "step number out of range"))?;
    offset += digits;
    rest = &rest[digits..];
    if !rest.starts_with('.') {
        return Err(ParseError::new(offset, "expected '.' after the step number"));
    }
    offset += 1;
    rest = &rest[1..];
    let (formula_text, dterm_text) = match rest.find('=') {
        Some(i) => (&rest[..i], Some((offset + i + 1, &rest[i + 1..]))),
        None => (rest, None),
    };
    let formula = parse_formula(formula_text.trim())
        .map_err(|e| ParseError::new(offset + e.offset + (formula_text.len() - formula_text.trim_start().len()), e.message))?;
    let body = match dterm_text {
        None => Body::Axiom,
        Some((off, text)) => {
            let lead = text.len() - text.trim_start().len();
            Body::Derived(parse_dterm(text.trim()).map_err(|e| ParseError::new(off + lead + e.offset, e.message))?)
        }
    };
    Ok(Some(Step { index, formula: Some(formula), body, goal, note }))
}

/// Parses a proof file. `path` is only used in error messages.
pub fn parse_proof(text: &str, path: &str) -> Result<CompactProof> {
    let mut steps = Vec::new();
    for (i, line) in text.lines().enumerate() {
        match parse_line(line) {
            Ok(Some(step)) => steps.push(step),
            Ok(None) => {}
            Err(source) => return Err(Error::ProofFile { path: path.to_string(), line: i + 1, source }),
        }
    }
    CompactProof::new(steps)
}

pub fn read_proof(path: &Path) -> Result<CompactProof> {
    let text = std::fs::read_to_string(path)?;
    parse_proof(&text, &path.display().to_string())
}

/// Prints a compact proof in the file format. Steps without a formula (proof
/// skeletons) print `?` in its place, which does not parse back.
pub fn print_proof(p: &CompactProof) -> String {
    let mut out = String::new();
    for s in p.steps() {
        if s.goal {
            out.push_str("* ");
        }
        let _ = write!(out, "{}. ", s.index);
        match &s.formula {
            Some(f) => {
                let _ = write!(out, "{f}");
            }
            None => out.push('?'),
        }
        if let Body::Derived(d) = &s.body {
            let _ = write!(out, " = {d}");
        }
        if let Some(n) = &s.note {
            let _ = write!(out, "  # {n}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG2C: &str = "1. CCCpqrCqr\n2. CpCqp = D11\n3. CpCqCrp = D12\n* 4. CpCqCrCsCtCus = D2D33\n";

    #[test]
    fn round_trip() {
        let p = parse_proof(FIG2C, "fig2c").unwrap();
        assert_eq!(p.steps().len(), 4);
        assert!(p.steps()[3].goal);
        assert_eq!(print_proof(&p), FIG2C);
    }

    #[test]
    fn notes_and_comments() {
        let p = parse_proof("# header\n1. CpCqp  # M1\n\n2. CpCqCrq = D11 # x\n", "t").unwrap();
        assert_eq!(p.steps()[0].note.as_deref(), Some("M1"));
        assert_eq!(p.steps()[1].note.as_deref(), Some("x"));
    }

    #[test]
    fn errors_have_lines() {
        let err = parse_proof("1. CpCqp\n2. CpCq = D11\n", "bad.cdp").unwrap_err();
        match err {
            Error::ProofFile { line, path, source } => {
                assert_eq!(line, 2);
                assert_eq!(path, "bad.cdp");
                assert_eq!(source.offset, 7);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_proof("1 CpCqp\n", "t").is_err());
        assert!(parse_proof("1. CpCqp\n2. Cpp = D1X\n", "t").is_err());
    }
}
