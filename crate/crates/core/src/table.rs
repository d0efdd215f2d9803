//! Tables of small prime proofs for a single axiom.
//!
//! Prime D-terms over one primitive are chains: `D(1, e)` or `D(e, 1)` for a
//! prime `e`. The MGT of such a term depends only on the MGT of `e`, so the
//! enumeration can run over variant classes of theorems, with multiplicities,
//! instead of over the 2^(n−1) individual D-terms of size `n`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use crate::calc::{detach, AxiomAssignment};
use crate::dterm::{parse_dterm, DTerm, PrimSym};
use crate::error::{Error, Result};
use crate::formula::{parse_formula, Formula};
use crate::subst::subsumed_by;

/// Largest size bound accepted by [`SmallProofTable::build`].
pub const MAX_TABLE_BOUND: u64 = 24;

/// Variant classes of MGTs of the prime D-terms of one size.
#[derive(Clone, Debug)]
pub struct PrimeLevel {
    pub size: u64,
    /// Canonical MGT → (number of D-terms, first D-term in enumeration order
    /// and its rank in that order).
    pub classes: HashMap<Formula, (u64, u64, DTerm)>,
}

impl PrimeLevel {
    /// Number of prime D-terms of this size with a defined MGT.
    pub fn defined(&self) -> u64 {
        self.classes.values().map(|c| c.0).sum()
    }
}

/// Iterates the levels of prime D-terms over axiom `1`, starting at size 0.
pub struct PrimeLevels {
    axiom: Formula,
    current: Option<PrimeLevel>,
}

impl PrimeLevels {
    pub fn new(axiom: &Formula) -> Self {
        PrimeLevels { axiom: axiom.canonical(), current: None }
    }
}

impl Iterator for PrimeLevels {
    type Item = PrimeLevel;

    fn next(&mut self) -> Option<PrimeLevel> {
        let one = DTerm::num(1);
        let next = match &self.current {
            None => {
                let mut classes = HashMap::new();
                classes.insert(self.axiom.clone(), (1, 0, one));
                PrimeLevel { size: 0, classes }
            }
            Some(prev) => {
                let size = prev.size + 1;
                let mut classes: HashMap<Formula, (u64, u64, DTerm)> = HashMap::new();
                let mut add = |f: Formula, count: u64, rank: u64, d: DTerm| {
                    let entry = classes.entry(f).or_insert((0, u64::MAX, d.clone()));
                    entry.0 += count;
                    if rank < entry.1 {
                        entry.1 = rank;
                        entry.2 = d;
                    }
                };
                // Level sizes are 1 for size ≤ 1 and 2^(size−2) before that.
                let half = if size >= 2 { 1u64 << (size - 2) } else { 0 };
                let mut keys: Vec<&Formula> = prev.classes.keys().collect();
                keys.sort();
                for f in keys {
                    let (count, rank, w) = &prev.classes[f];
                    if let Some(g) = detach(&self.axiom, f) {
                        add(g, *count, *rank, DTerm::d(&one, w));
                    }
                    if size >= 2 {
                        if let Some(g) = detach(f, &self.axiom) {
                            add(g, *count, half + rank, DTerm::d(w, &one));
                        }
                    }
                }
                PrimeLevel { size, classes }
            }
        };
        self.current = Some(next.clone());
        Some(next)
    }
}

/// A map from canonical MGTs to a prime witness of minimal size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallProofTable {
    axiom: Formula,
    bound: u64,
    entries: BTreeMap<Formula, DTerm>,
}

impl SmallProofTable {
    /// Enumerates prime D-terms up to size `bound`; the first witness per
    /// variant class of MGTs, by size and then enumeration order, wins.
    pub fn build(axiom: &Formula, bound: u64) -> Result<Self> {
        if bound > MAX_TABLE_BOUND {
            return Err(Error::ResourceLimit(format!("table bound {bound} exceeds {MAX_TABLE_BOUND}")));
        }
        let mut entries = BTreeMap::new();
        for level in PrimeLevels::new(axiom).take(bound as usize + 1) {
            for (f, (_, _, w)) in level.classes {
                entries.entry(f).or_insert(w);
            }
        }
        Ok(SmallProofTable { axiom: axiom.canonical(), bound, entries })
    }

    pub fn axiom(&self) -> &Formula {
        &self.axiom
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Formula, &DTerm)> {
        self.entries.iter()
    }

    /// The witness for a theorem, looked up up to variants.
    pub fn get(&self, f: &Formula) -> Option<&DTerm> {
        self.entries.get(&f.canonical())
    }

    pub fn is_for(&self, alpha: &AxiomAssignment) -> bool {
        let numbered: Vec<_> = alpha.iter().filter(|(s, _)| matches!(s, PrimSym::Num(_))).collect();
        numbered.len() == 1 && *numbered[0].0 == PrimSym::Num(1) && numbered[0].1.canonical() == self.axiom
    }

    /// The smallest witness (by tree size, then structure) whose theorem
    /// subsumes `f`.
    pub fn smallest_subsuming(&self, f: &Formula) -> Option<DTerm> {
        self.entries.iter().filter(|(k, _)| subsumed_by(f, k)).map(|(_, w)| w.clone()).min()
    }

    /// Sorted text lines `<formula>\t<dterm>` after a header line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# axiom {} bound {}", self.axiom, self.bound);
        for (f, w) in &self.entries {
            let _ = writeln!(out, "{f}\t{w}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::InvalidProof("empty table file".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        let (axiom, bound) = match parts.as_slice() {
            ["#", "axiom", a, "bound", b] => {
                let bound = b.parse().map_err(|_| Error::InvalidProof(format!("bad bound {b:?}")))?;
                (parse_formula(a)?, bound)
            }
            _ => return Err(Error::InvalidProof("bad table header".into())),
        };
        let mut entries = BTreeMap::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let (f, w) = line.split_once('\t').ok_or_else(|| Error::InvalidProof(format!("bad table line {line:?}")))?;
            entries.insert(parse_formula(f)?.canonical(), parse_dterm(w)?);
        }
        Ok(SmallProofTable { axiom: axiom.canonical(), bound, entries })
    }

    /// Loads `<dir>/table-<bound>-<axiom>.txt` or builds and stores it.
    pub fn cached(dir: &Path, axiom: &Formula, bound: u64) -> Result<Self> {
        let path = dir.join(format!("table-{bound}-{}.txt", axiom.canonical()));
        if let Ok(text) = std::fs::read_to_string(&path) {
            if let Ok(t) = SmallProofTable::from_text(&text) {
                if t.axiom == axiom.canonical() && t.bound == bound {
                    return Ok(t);
                }
            }
        }
        let t = SmallProofTable::build(axiom, bound)?;
        std::fs::create_dir_all(dir)?;
        std::fs::write(&path, t.to_text())?;
        Ok(t)
    }
}
