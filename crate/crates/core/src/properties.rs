//! Feature vectors for all subproofs of a compact proof.
//!
//! Rows are the distinct subterms of the expanded goals other than `n`, in
//! first-visit postorder, so every row refers only to earlier rows. Columns
//! cover the D-term itself, its MGT, regularity, minimal proof sizes of the
//! MGT and the in-place theorems of all occurrences.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::calc::{AxiomAssignment, Ipts, MgtEngine};
use crate::compact::CompactProof;
use crate::dterm::{gt_c, subterms_of, DTerm, Kind, PrimSym};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::organic::{organicity, Organicity};
use crate::reduction::is_c_regular;

/// A minimal size that is either known or narrowed down to an interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SizeBound {
    Exact(u64),
    Range { lo: u64, hi: u64 },
}

impl SizeBound {
    /// `lo` is a proven lower bound and `hi` the size of a known proof.
    pub fn between(lo: u64, hi: u64) -> SizeBound {
        if lo >= hi {
            SizeBound::Exact(hi)
        } else {
            SizeBound::Range { lo, hi }
        }
    }

    pub fn lo(&self) -> u64 {
        match *self {
            SizeBound::Exact(v) => v,
            SizeBound::Range { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> u64 {
        match *self {
            SizeBound::Exact(v) => v,
            SizeBound::Range { hi, .. } => hi,
        }
    }

    /// Whether both bounds can describe the same value.
    pub fn overlaps(&self, other: &SizeBound) -> bool {
        self.lo() <= other.hi() && other.lo() <= self.hi()
    }
}

impl fmt::Display for SizeBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SizeBound::Exact(v) => write!(f, "{v}"),
            SizeBound::Range { lo, hi } => write!(f, "{lo}–{hi}"),
        }
    }
}

/// How the major and minor premise subproofs of a row relate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Equal,
    /// The major premise is a strict subterm of the minor premise.
    Sub,
    /// The minor premise is a strict subterm of the major premise (or `n`).
    Super,
    Greater,
    Less,
    Incomparable,
}

/// The DS column: the relation, annotated with primitive premises.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ds {
    pub major: Option<String>,
    pub relation: Relation,
    pub minor: Option<String>,
}

impl Ds {
    fn of(a: &DTerm, b: &DTerm) -> Ds {
        let relation = if a == b {
            Relation::Equal
        } else if b.prim_sym() == Some(PrimSym::N) || a.contains(b) {
            Relation::Super
        } else if b.contains(a) {
            Relation::Sub
        } else if gt_c(a, b) {
            Relation::Greater
        } else if gt_c(b, a) {
            Relation::Less
        } else {
            Relation::Incomparable
        };
        let name = |x: &DTerm| x.prim_sym().map(|s| s.to_string());
        Ds { major: name(a), relation, minor: name(b) }
    }
}

impl fmt::Display for Ds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.relation {
            Relation::Equal => "=",
            Relation::Sub => "⊲",
            Relation::Super => "⊳",
            Relation::Greater => ">c",
            Relation::Less => "<c",
            Relation::Incomparable => "~",
        };
        write!(f, "{}{rel}{}", self.major.as_deref().unwrap_or(""), self.minor.as_deref().unwrap_or(""))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyRow {
    pub row: usize,
    /// The subproof with premises written as row numbers.
    pub label: String,
    /// The expanded subproof.
    pub dterm: String,
    /// The step of the proof whose expansion is this subproof.
    pub m: Option<u32>,
    pub mgt: String,
    pub dt: u64,
    pub dc: usize,
    pub dh: u32,
    pub dk_l: u32,
    pub dk_r: u32,
    pub dp: bool,
    pub ds: Option<Ds>,
    pub dd: u64,
    pub dr: u64,
    pub tt: usize,
    pub tc: usize,
    pub th: usize,
    pub tv: usize,
    pub to: Organicity,
    pub rc: bool,
    pub mt: SizeBound,
    pub mc: SizeBound,
    pub it_u: u64,
    pub it_m: u64,
    pub ih_u: u64,
    pub ih_m: u64,
}

/// How a median of an even number of values is rounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MedianRule {
    /// Mean of the two middle values, halves rounded up.
    #[default]
    HalfUp,
    /// The lower of the two middle values.
    Lower,
}

pub fn median(values: &mut [u64], rule: MedianRule) -> u64 {
    if values.is_empty() {
        return 0;
    }
    values.sort_unstable();
    let n = values.len();
    if n % 2 == 1 {
        return values[n / 2];
    }
    let (a, b) = (values[n / 2 - 1], values[n / 2]);
    match rule {
        MedianRule::HalfUp => (a + b).div_ceil(2),
        MedianRule::Lower => a,
    }
}

/// Minimal tree and compacted sizes of proofs of theorems, determined by
/// exhaustive enumeration over a single axiom up to fixed bounds.
pub struct MinSizeOracle {
    axiom: Formula,
    tree_bound: u64,
    compacted_bound: usize,
    tree: HashMap<Formula, u64>,
    compacted: HashMap<Formula, usize>,
}

impl MinSizeOracle {
    /// Upper limits keeping the enumeration at desk scale.
    pub const MAX_TREE_BOUND: u64 = 16;
    pub const MAX_COMPACTED_BOUND: usize = 8;

    pub fn build(axiom: &Formula, tree_bound: u64, compacted_bound: usize) -> Result<Self> {
        if tree_bound > Self::MAX_TREE_BOUND || compacted_bound > Self::MAX_COMPACTED_BOUND {
            return Err(Error::ResourceLimit(format!(
                "minimal size bounds {tree_bound}/{compacted_bound} exceed {}/{}",
                Self::MAX_TREE_BOUND,
                Self::MAX_COMPACTED_BOUND
            )));
        }
        let axiom = axiom.canonical();
        Ok(MinSizeOracle {
            tree: min_tree_sizes(&axiom, tree_bound),
            compacted: min_compacted_sizes(&axiom, compacted_bound),
            axiom,
            tree_bound,
            compacted_bound,
        })
    }

    pub fn axiom(&self) -> &Formula {
        &self.axiom
    }

    pub fn tree_bound(&self) -> u64 {
        self.tree_bound
    }

    pub fn compacted_bound(&self) -> usize {
        self.compacted_bound
    }

    /// Minimal tree size of a D-term whose MGT is a variant of `f`, if
    /// within the bound.
    pub fn min_tree(&self, f: &Formula) -> Option<u64> {
        self.tree.get(&f.canonical()).copied()
    }

    pub fn min_compacted(&self, f: &Formula) -> Option<usize> {
        self.compacted.get(&f.canonical()).copied()
    }
}

/// Minimal tree sizes by dynamic programming over MGT classes: a minimal
/// proof can always use minimal proofs of its premises' theorems.
fn min_tree_sizes(axiom: &Formula, bound: u64) -> HashMap<Formula, u64> {
    let mut first: HashMap<Formula, u64> = HashMap::new();
    let mut levels: Vec<Vec<Formula>> = vec![vec![axiom.clone()]];
    first.insert(axiom.clone(), 0);
    for k in 1..=bound as usize {
        let mut level = Vec::new();
        for i in 0..k {
            for a in &levels[i] {
                for b in &levels[k - 1 - i] {
                    if let Some(g) = crate::calc::detach(a, b) {
                        if !first.contains_key(&g) {
                            first.insert(g.clone(), k as u64);
                            level.push(g);
                        }
                    }
                }
            }
        }
        level.sort();
        levels.push(level);
    }
    first
}

/// Minimal compacted sizes by enumerating DAGs over `1` whose subterms all
/// have defined MGTs.
fn min_compacted_sizes(axiom: &Formula, bound: usize) -> HashMap<Formula, usize> {
    let one = DTerm::num(1);
    let mut first: HashMap<Formula, usize> = HashMap::new();
    first.insert(axiom.clone(), 0);
    // Terms with their MGT and sorted compound subterm ids.
    let mut all: Vec<(DTerm, Formula, Vec<u64>)> = vec![(one, axiom.clone(), Vec::new())];
    for k in 1..=bound {
        let mut level = Vec::new();
        for (a, fa, sa) in &all {
            for (b, fb, sb) in &all {
                if union_len(sa, sb) != k - 1 {
                    continue;
                }
                let Some(g) = crate::calc::detach(fa, fb) else { continue };
                let d = DTerm::d(a, b);
                let mut s: Vec<u64> = sa.iter().chain(sb).copied().chain([d.id()]).collect();
                s.sort_unstable();
                s.dedup();
                first.entry(g.clone()).or_insert(k);
                level.push((d, g, s));
            }
        }
        all.extend(level);
    }
    first
}

fn union_len(a: &[u64], b: &[u64]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        n += 1;
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    n + (a.len() - i) + (b.len() - j)
}

#[derive(Clone, Copy, Debug)]
pub struct PropertyConfig {
    pub median: MedianRule,
    /// Whether to compute the RC column, the most expensive one.
    pub regularity: bool,
}

impl Default for PropertyConfig {
    fn default() -> Self {
        PropertyConfig { median: MedianRule::HalfUp, regularity: true }
    }
}

/// The property rows of all subproofs of the goals of `p`. MT and MC use
/// `oracle` when given (it must be for the proof's single axiom); otherwise
/// they are bounded only by the sizes of proofs occurring in the table.
pub fn property_table(
    p: &CompactProof,
    oracle: Option<&MinSizeOracle>,
    cfg: &PropertyConfig,
) -> Result<Vec<PropertyRow>> {
    let alpha = AxiomAssignment::from_proof(p)?;
    if let Some(o) = oracle {
        let axioms: Vec<_> = alpha.iter().collect();
        if axioms.len() != 1 || axioms[0].1.canonical() != *o.axiom() {
            return Err(Error::TableMismatch { table: o.axiom().to_string(), used: alpha.fingerprint() });
        }
    }
    let expansions = p.expand_all()?;
    let roots: Vec<DTerm> = p
        .goals()
        .iter()
        .map(|g| expansions.iter().find(|(i, _)| *i == g.index).map(|(_, d)| d.clone()).ok_or(Error::UnknownStep(g.index)))
        .collect::<Result<_>>()?;
    let subs: Vec<DTerm> = subterms_of(&roots).into_iter().filter(|d| d.prim_sym() != Some(PrimSym::N)).collect();
    let row_of: HashMap<u64, usize> = subs.iter().enumerate().map(|(i, d)| (d.id(), i + 1)).collect();
    let step_of: HashMap<u64, u32> = {
        let mut m = HashMap::new();
        for (i, d) in &expansions {
            m.entry(d.id()).or_insert(*i);
        }
        m
    };

    // Direct sharings and repeats.
    let mut dd: HashMap<u64, u64> = HashMap::new();
    let mut dr: HashMap<u64, u64> = HashMap::new();
    for r in &roots {
        *dr.entry(r.id()).or_default() += 1;
    }
    for d in subs.iter().rev() {
        if let Kind::D(a, b) = d.kind() {
            let c = dr.get(&d.id()).copied().unwrap_or(0);
            for x in [a, b] {
                *dd.entry(x.id()).or_default() += 1;
                *dr.entry(x.id()).or_default() += c;
            }
        }
    }

    // In-place theorem sizes of all occurrences.
    let mut it: HashMap<u64, Vec<u64>> = HashMap::new();
    let mut ih: HashMap<u64, Vec<u64>> = HashMap::new();
    for r in &roots {
        let ipts = Ipts::compute(r, &alpha)?.ok_or(Error::UndefinedMgt)?;
        for (_, sub, size, height) in ipts.measures() {
            it.entry(sub.id()).or_default().push(size);
            ih.entry(sub.id()).or_default().push(height);
        }
    }

    let mut engine = MgtEngine::new(&alpha);
    let mut mgts = Vec::with_capacity(subs.len());
    for d in &subs {
        mgts.push(engine.mgt(d)?.ok_or(Error::UndefinedMgt)?);
    }
    // Smallest known proofs of each theorem among the subproofs.
    let mut known: HashMap<&Formula, (u64, u64)> = HashMap::new();
    for (d, m) in subs.iter().zip(&mgts) {
        let e = known.entry(m).or_insert((u64::MAX, u64::MAX));
        e.0 = e.0.min(d.t_size());
        e.1 = e.1.min(d.c_size() as u64);
    }

    let mut rows = Vec::with_capacity(subs.len());
    for (i, (d, m)) in subs.iter().zip(&mgts).enumerate() {
        let label = match d.kind() {
            Kind::Prim(_) => d.to_polish(),
            Kind::D(a, b) => {
                let r = |x: &DTerm| match x.prim_sym() {
                    Some(PrimSym::N) => DTerm::n(),
                    _ => DTerm::num(row_of[&x.id()] as u32),
                };
                DTerm::d(&r(a), &r(b)).to_polish()
            }
        };
        let stats = m.stats();
        let (known_t, known_c) = known[m];
        let (mt, mc) = match oracle {
            Some(o) => (
                match o.min_tree(m) {
                    Some(v) => SizeBound::Exact(v),
                    None => SizeBound::between(o.tree_bound() + 1, known_t),
                },
                match o.min_compacted(m) {
                    Some(v) => SizeBound::Exact(v as u64),
                    None => SizeBound::between(o.compacted_bound() as u64 + 1, known_c),
                },
            ),
            None => (SizeBound::between(0, known_t), SizeBound::between(0, known_c)),
        };
        let mut its = it.remove(&d.id()).unwrap_or_default();
        let mut ihs = ih.remove(&d.id()).unwrap_or_default();
        rows.push(PropertyRow {
            row: i + 1,
            label,
            dterm: d.to_polish(),
            m: step_of.get(&d.id()).copied(),
            mgt: m.to_string(),
            dt: d.t_size(),
            dc: d.c_size(),
            dh: d.height(),
            dk_l: d.dk_left(),
            dk_r: d.dk_right(),
            dp: d.is_prime(),
            ds: d.args().map(|(a, b)| Ds::of(a, b)),
            dd: dd.get(&d.id()).copied().unwrap_or(0),
            dr: dr.get(&d.id()).copied().unwrap_or(0),
            tt: stats.tree_size,
            tc: stats.c_size,
            th: stats.height,
            tv: stats.var_count,
            to: organicity(m)?,
            rc: if cfg.regularity { is_c_regular(d, &alpha)? } else { true },
            mt,
            mc,
            it_u: its.iter().copied().max().unwrap_or(0),
            it_m: median(&mut its, cfg.median),
            ih_u: ihs.iter().copied().max().unwrap_or(0),
            ih_m: median(&mut ihs, cfg.median),
        });
    }
    Ok(rows)
}

/// Column headers in table order.
pub const COLUMNS: [&str; 24] = [
    "#", "D-term", "M", "DT", "DC", "DH", "DKL", "DKR", "DP", "DS", "DD", "DR", "TT", "TC", "TH", "TV", "TO", "RC",
    "MT", "MC", "ITU", "ITM", "IHU", "IHM",
];

fn bullet(b: bool) -> String {
    if b { "•" } else { "--" }.to_string()
}

impl PropertyRow {
    /// The cells in [`COLUMNS`] order. Weakly organic theorems show `∘`.
    pub fn cells(&self) -> Vec<String> {
        let to = if self.to.organic {
            "•"
        } else if self.to.weakly_organic {
            "∘"
        } else {
            "--"
        };
        vec![
            format!("{}.", self.row),
            self.label.clone(),
            self.m.map(|m| format!("M{m}")).unwrap_or_default(),
            self.dt.to_string(),
            self.dc.to_string(),
            self.dh.to_string(),
            self.dk_l.to_string(),
            self.dk_r.to_string(),
            bullet(self.dp),
            self.ds.as_ref().map(|d| d.to_string()).unwrap_or_else(|| "--".into()),
            self.dd.to_string(),
            self.dr.to_string(),
            self.tt.to_string(),
            self.tc.to_string(),
            self.th.to_string(),
            self.tv.to_string(),
            to.to_string(),
            bullet(self.rc),
            self.mt.to_string(),
            self.mc.to_string(),
            self.it_u.to_string(),
            self.it_m.to_string(),
            self.ih_u.to_string(),
            self.ih_m.to_string(),
        ]
    }
}

/// Right-aligned text table with a header line.
pub fn format_table(rows: &[PropertyRow]) -> String {
    let mut cells: Vec<Vec<String>> = vec![COLUMNS.iter().map(|s| s.to_string()).collect()];
    cells.extend(rows.iter().map(PropertyRow::cells));
    let widths: Vec<usize> =
        (0..COLUMNS.len()).map(|c| cells.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in &cells {
        let line: Vec<String> =
            r.iter().zip(&widths).map(|(s, w)| format!("{}{s}", " ".repeat(w - s.chars().count()))).collect();
        out.push_str(line.join(" ").trim_end());
        out.push('\n');
    }
    out
}

/// Theorems with a proof of every tree size up to `bound`, used by tests to
/// cross-check the dynamic program against brute force.
pub fn brute_force_min_tree(axiom: &Formula, f: &Formula, bound: u64) -> Option<u64> {
    let alpha = AxiomAssignment::single(axiom);
    let target = f.canonical();
    let mut engine = MgtEngine::new(&alpha);
    for k in 0..=bound {
        for d in crate::dterm::enumerate_tree_size(k) {
            if engine.mgt(&d).ok().flatten().as_ref() == Some(&target) {
                return Some(k);
            }
        }
    }
    None
}

/// Distinct MGTs of D-terms over `1` up to compacted size `bound`, by
/// brute force over all DAGs; a test oracle for the pruned enumeration.
pub fn brute_force_min_compacted(axiom: &Formula, bound: usize) -> HashMap<Formula, usize> {
    let alpha = AxiomAssignment::single(axiom);
    let mut engine = MgtEngine::new(&alpha);
    let mut out = HashMap::new();
    let mut seen = HashSet::new();
    for k in 0..=bound {
        for d in crate::dterm::enumerate_c_size(k) {
            if let Ok(Some(m)) = engine.mgt(&d) {
                if seen.insert(m.clone()) {
                    out.insert(m, k);
                }
            }
        }
    }
    out
}

/// A row of a reference table in the whitespace-separated format of
/// `fixtures/mer_properties.txt`: cells in [`COLUMNS`] order, `.` for an empty
/// M cell, `*` for a bullet, `o` for a weakly organic bullet, `--` for none,
/// `<|`/`|>` for the subterm relations and `a-b` for intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceRow {
    pub cells: Vec<String>,
}

pub fn parse_reference(text: &str) -> Result<Vec<ReferenceRow>> {
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let cells: Vec<String> = l.split_whitespace().map(str::to_string).collect();
            if cells.len() == COLUMNS.len() {
                Ok(ReferenceRow { cells })
            } else {
                Err(Error::InvalidProof(format!("reference row has {} cells: {l:?}", cells.len())))
            }
        })
        .collect()
}

fn normalize(cell: &str) -> String {
    match cell {
        "." => String::new(),
        "*" => "•".into(),
        "o" => "∘".into(),
        _ => cell.replace("<|", "⊲").replace("|>", "⊳").replace('-', "–").replace("––", "--"),
    }
}

fn parse_bound(cell: &str) -> Option<SizeBound> {
    match cell.split_once('–') {
        Some((a, b)) => Some(SizeBound::between(a.parse().ok()?, b.parse().ok()?)),
        None => cell.parse().ok().map(SizeBound::Exact),
    }
}

/// One disagreement between computed rows and a reference table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub row: usize,
    pub column: &'static str,
    pub expected: String,
    pub actual: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "row {} column {}: expected {}, got {}", self.row, self.column, self.expected, self.actual)
    }
}

/// Compares computed rows with a reference. Cells must match exactly except
/// MT and MC: there, intervals on either side only need to overlap.
pub fn compare_with_reference(rows: &[PropertyRow], reference: &[ReferenceRow]) -> Vec<Mismatch> {
    let mut out = Vec::new();
    if rows.len() != reference.len() {
        out.push(Mismatch {
            row: 0,
            column: "rows",
            expected: reference.len().to_string(),
            actual: rows.len().to_string(),
        });
    }
    for (r, e) in rows.iter().zip(reference) {
        for ((col, actual), expected) in COLUMNS.iter().zip(r.cells()).zip(&e.cells) {
            let expected = normalize(expected);
            let ok = match *col {
                "MT" | "MC" => match (parse_bound(&actual), parse_bound(&expected)) {
                    (Some(a @ SizeBound::Exact(_)), Some(b @ SizeBound::Exact(_))) => a == b,
                    (Some(a), Some(b)) => a.overlaps(&b),
                    _ => false,
                },
                _ => actual == expected,
            };
            if !ok {
                out.push(Mismatch { row: r.row, column: col, expected, actual });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn luk() -> Formula {
        "CCCpqrCCrpCsp".parse().unwrap()
    }

    #[test]
    fn medians() {
        assert_eq!(median(&mut [3, 1, 2], MedianRule::HalfUp), 2);
        assert_eq!(median(&mut [1, 2], MedianRule::HalfUp), 2);
        assert_eq!(median(&mut [1, 2], MedianRule::Lower), 1);
        assert_eq!(median(&mut [], MedianRule::Lower), 0);
    }

    #[test]
    fn size_bounds() {
        assert_eq!(SizeBound::between(12, 13).to_string(), "12–13");
        assert_eq!(SizeBound::between(7, 7), SizeBound::Exact(7));
        assert!(SizeBound::Exact(7).overlaps(&SizeBound::between(5, 9)));
        assert!(!SizeBound::Exact(4).overlaps(&SizeBound::between(5, 9)));
    }

    #[test]
    fn oracle_agrees_with_brute_force() {
        let ax = luk();
        let o = MinSizeOracle::build(&ax, 6, 4).unwrap();
        let alpha = AxiomAssignment::single(&ax);
        let mut engine = MgtEngine::new(&alpha);
        for k in 0..=6 {
            for d in crate::dterm::enumerate_tree_size(k) {
                if let Some(m) = engine.mgt(&d).unwrap() {
                    assert_eq!(o.min_tree(&m), brute_force_min_tree(&ax, &m, 6));
                }
            }
        }
        assert_eq!(brute_force_min_compacted(&ax, 4), o.compacted);
    }

    #[test]
    fn ds_tags() {
        let d = |s: &str| -> DTerm { s.parse().unwrap() };
        assert_eq!(Ds::of(&d("1"), &d("1")).to_string(), "1=1");
        assert_eq!(Ds::of(&d("1"), &d("D11")).to_string(), "1⊲");
        assert_eq!(Ds::of(&d("D1D11"), &d("1")).to_string(), "⊳1");
        assert_eq!(Ds::of(&d("DD1D111"), &d("n")).to_string(), "⊳n");
    }
}
