//! Object-level formulas of the implicational fragment.
//!
//! Formulas are binary trees over the implication constructor `C` and
//! variables, written in Łukasiewicz's Polish notation (`CpCqp`). Besides
//! plain named variables there are two families of position-indexed
//! variables, `y_p` and `x^i_p`, used for the per-position copies that the
//! proof semantics of [`crate::calc`] works with. Constants only arise as the
//! fresh witnesses substituted for the `n` primitive.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::ParseError;
use crate::position::Position;

/// Variable identifiers. The three kinds never collide with each other.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarId {
    /// A named variable. Codes `0..26` are the letters `a..z`; a code `26 + k`
    /// is the indexed name `v<k>`.
    Plain(u32),
    /// `y_p`: the conclusion variable of the detachment at position `p`.
    Y(Position),
    /// `x^i_p`: the `i`-th variable of the axiom copy at leaf position `p`.
    X(u32, Position),
}

const LETTERS: u32 = 26;

impl VarId {
    pub fn letter(c: char) -> VarId {
        assert!(c.is_ascii_lowercase());
        VarId::Plain(c as u32 - 'a' as u32)
    }

    pub fn indexed(k: u32) -> VarId {
        VarId::Plain(LETTERS + k)
    }

    /// The `k`-th name of the canonical sequence `p, q, r, s, t, u, v7, v8, ...`.
    pub fn canonical(k: usize) -> VarId {
        if k < 6 {
            VarId::Plain(('p' as u32 - 'a' as u32) + k as u32)
        } else {
            VarId::indexed(k as u32 + 1)
        }
    }

    pub fn is_positional(&self) -> bool {
        !matches!(self, VarId::Plain(_))
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::Plain(c) if *c < LETTERS => {
                write!(f, "{}", char::from_u32('a' as u32 + c).unwrap())
            }
            VarId::Plain(c) => write!(f, "v{}", c - LETTERS),
            VarId::Y(p) => write!(f, "y[{p}]"),
            VarId::X(i, p) => write!(f, "x{i}[{p}]"),
        }
    }
}

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A formula: a variable, a (fresh) constant, or an implication.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(VarId),
    Const(u32),
    Imp(Arc<Formula>, Arc<Formula>),
}

/// Sizes of a formula, as reported in the TT/TC/TH/TV columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TermStats {
    pub tree_size: usize,
    pub c_size: usize,
    pub height: usize,
    pub var_count: usize,
}

impl Formula {
    pub fn var(v: VarId) -> Formula {
        Formula::Var(v)
    }

    pub fn letter(c: char) -> Formula {
        Formula::Var(VarId::letter(c))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Arc::new(a), Arc::new(b))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Formula::Var(_))
    }

    pub fn as_imp(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Imp(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Number of implication symbols.
    pub fn tree_size(&self) -> usize {
        match self {
            Formula::Imp(a, b) => 1 + a.tree_size() + b.tree_size(),
            _ => 0,
        }
    }

    /// Edges on the longest root-to-leaf path.
    pub fn height(&self) -> usize {
        match self {
            Formula::Imp(a, b) => 1 + a.height().max(b.height()),
            _ => 0,
        }
    }

    /// Number of distinct compound subterms.
    pub fn c_size(&self) -> usize {
        fn walk<'a>(f: &'a Formula, seen: &mut HashSet<&'a Formula>) {
            if let Formula::Imp(a, b) = f {
                if seen.insert(f) {
                    walk(a, seen);
                    walk(b, seen);
                }
            }
        }
        let mut seen = HashSet::new();
        walk(self, &mut seen);
        seen.len()
    }

    /// Distinct variables in first-occurrence (preorder) order.
    pub fn vars(&self) -> Vec<VarId> {
        fn walk(f: &Formula, seen: &mut HashSet<VarId>, out: &mut Vec<VarId>) {
            match f {
                Formula::Var(v) => {
                    if seen.insert(v.clone()) {
                        out.push(v.clone());
                    }
                }
                Formula::Const(_) => {}
                Formula::Imp(a, b) => {
                    walk(a, seen, out);
                    walk(b, seen, out);
                }
            }
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        walk(self, &mut seen, &mut out);
        out
    }

    pub fn var_count(&self) -> usize {
        self.vars().len()
    }

    pub fn contains_var(&self, v: &VarId) -> bool {
        match self {
            Formula::Var(w) => w == v,
            Formula::Const(_) => false,
            Formula::Imp(a, b) => a.contains_var(v) || b.contains_var(v),
        }
    }

    pub fn has_consts(&self) -> bool {
        match self {
            Formula::Var(_) => false,
            Formula::Const(_) => true,
            Formula::Imp(a, b) => a.has_consts() || b.has_consts(),
        }
    }

    pub fn stats(&self) -> TermStats {
        TermStats {
            tree_size: self.tree_size(),
            c_size: self.c_size(),
            height: self.height(),
            var_count: self.var_count(),
        }
    }

    /// All subterms in preorder, including `self`.
    pub fn subterms(&self) -> Vec<&Formula> {
        fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            out.push(f);
            if let Formula::Imp(a, b) = f {
                walk(a, out);
                walk(b, out);
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Renames variables to `p, q, r, s, t, u, v7, ...` and constants to
    /// `0, 1, ...`, both in first-occurrence order. Two formulas are variants
    /// of each other iff their canonical forms are equal.
    pub fn canonical(&self) -> Formula {
        fn walk(f: &Formula, vars: &mut HashMap<VarId, usize>, consts: &mut HashMap<u32, u32>) -> Formula {
            match f {
                Formula::Var(v) => {
                    let n = vars.len();
                    let k = *vars.entry(v.clone()).or_insert(n);
                    Formula::Var(VarId::canonical(k))
                }
                Formula::Const(c) => {
                    let n = consts.len() as u32;
                    Formula::Const(*consts.entry(*c).or_insert(n))
                }
                Formula::Imp(a, b) => {
                    let a = walk(a, vars, consts);
                    let b = walk(b, vars, consts);
                    Formula::imp(a, b)
                }
            }
        }
        walk(self, &mut HashMap::new(), &mut HashMap::new())
    }

    /// Polish notation, optionally with canonical variable names.
    pub fn to_polish(&self, canonical: bool) -> String {
        if canonical {
            self.canonical().to_string()
        } else {
            self.to_string()
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(v) => write!(f, "{v}"),
            Formula::Const(c) => write!(f, "#{c}"),
            Formula::Imp(a, b) => write!(f, "C{a}{b}"),
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses Polish C-notation: `C` followed by two formulas, or a variable
/// (a lowercase letter, or `v` followed by digits). Whitespace between tokens
/// is ignored.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let f = parse_at(bytes, &mut pos)?;
    skip_ws(bytes, &mut pos);
    if pos != bytes.len() {
        return Err(ParseError::new(pos, "unexpected trailing input"));
    }
    Ok(f)
}

fn skip_ws(bytes: &[u8], pos: &mut usize) {
    while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn parse_at(bytes: &[u8], pos: &mut usize) -> Result<Formula, ParseError> {
    // Iterative to cope with deeply nested input.
    enum Frame {
        NeedAntecedent,
        NeedConsequent(Formula),
    }
    let mut stack: Vec<Frame> = Vec::new();
    loop {
        skip_ws(bytes, pos);
        let Some(&c) = bytes.get(*pos) else {
            return Err(ParseError::new(*pos, "unexpected end of formula"));
        };
        let mut done = match c {
            b'C' => {
                *pos += 1;
                stack.push(Frame::NeedAntecedent);
                continue;
            }
            b'v' if bytes.get(*pos + 1).is_some_and(u8::is_ascii_digit) => {
                let start = *pos + 1;
                let mut end = start;
                while end < bytes.len() && bytes[end].is_ascii_digit() {
                    end += 1;
                }
                let digits = std::str::from_utf8(&bytes[start..end]).unwrap();
                let k: u32 = digits
                    .parse()
                    .map_err(|_| ParseError::new(start, "variable index out of range"))?;
                *pos = end;
                Formula::Var(VarId::indexed(k))
            }
            b'a'..=b'z' => {
                *pos += 1;
                Formula::letter(c as char)
            }
            _ => return Err(ParseError::new(*pos, format!("unexpected character {:?}", c as char))),
        };
        loop {
            match stack.pop() {
                None => return Ok(done),
                Some(Frame::NeedAntecedent) => {
                    stack.push(Frame::NeedConsequent(done));
                    break;
                }
                Some(Frame::NeedConsequent(a)) => {
                    done = Formula::imp(a, done);
                }
            }
        }
    }
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

/// Canonical Polish printing (`p, q, r, ...` naming).
pub fn print_formula(f: &Formula) -> String {
    f.to_polish(true)
}

/// Truth-table tautology check over the classical reading of implication.
/// Constants are treated like variables (they stand for arbitrary formulas).
pub fn is_tautology(f: &Formula, limit: usize) -> Result<bool, crate::error::Error> {
    let mut atoms: Vec<Formula> = Vec::new();
    fn collect(f: &Formula, atoms: &mut Vec<Formula>) {
        match f {
            Formula::Imp(a, b) => {
                collect(a, atoms);
                collect(b, atoms);
            }
            atom => {
                if !atoms.contains(atom) {
                    atoms.push(atom.clone());
                }
            }
        }
    }
    collect(f, &mut atoms);
    let n = atoms.len();
    if n > limit {
        return Err(crate::error::Error::TautologyLimit { vars: n, limit });
    }
    // One bit per assignment, packed into u64 words.
    let rows = 1usize << n;
    let words = rows.div_ceil(64);
    let columns: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut col = vec![0u64; words];
            for r in 0..rows {
                if (r >> i) & 1 == 1 {
                    col[r / 64] |= 1 << (r % 64);
                }
            }
            col
        })
        .collect();
    fn eval(f: &Formula, atoms: &[Formula], columns: &[Vec<u64>]) -> Vec<u64> {
        match f {
            Formula::Imp(a, b) => {
                let a = eval(a, atoms, columns);
                let b = eval(b, atoms, columns);
                a.iter().zip(&b).map(|(x, y)| !x | y).collect()
            }
            atom => columns[atoms.iter().position(|x| x == atom).unwrap()].clone(),
        }
    }
    let value = eval(f, &atoms, &columns);
    let tail = rows % 64;
    Ok(value.iter().enumerate().all(|(i, w)| {
        if i == words - 1 && tail != 0 {
            let mask = (1u64 << tail) - 1;
            w & mask == mask
        } else {
            *w == u64::MAX
        }
    }))
}

pub const DEFAULT_TAUTOLOGY_LIMIT: usize = 16;

/// Tautology check by a signed tableau that searches for a falsifying
/// assignment. No variable limit; exponential only in the branching on
/// true implications.
pub fn is_tautology_tableau(f: &Formula) -> bool {
    // Signed formulas still to be satisfied: `true` means "must be true".
    fn falsifiable<'a>(mut todo: Vec<(&'a Formula, bool)>, assign: &mut Vec<(&'a Formula, bool)>) -> bool {
        let mark = assign.len();
        while let Some((g, sign)) = todo.pop() {
            match (g, sign) {
                (Formula::Imp(a, b), false) => {
                    todo.push((a, true));
                    todo.push((b, false));
                }
                (Formula::Imp(a, b), true) => {
                    // Either the antecedent is false or the consequent true.
                    for branch in [(a.as_ref(), false), (b.as_ref(), true)] {
                        let mut next = todo.clone();
                        next.push(branch);
                        if falsifiable(next, assign) {
                            return true;
                        }
                    }
                    assign.truncate(mark);
                    return false;
                }
                (atom, sign) => match assign.iter().find(|(x, _)| *x == atom) {
                    Some((_, v)) if *v != sign => {
                        assign.truncate(mark);
                        return false;
                    }
                    Some(_) => {}
                    None => assign.push((atom, sign)),
                },
            }
        }
        true
    }
    !falsifiable(vec![(f, false)], &mut Vec::new())
}
