//! Lemma generation from proof structure: the prime core of a given size and
//! the given-D-term loop that combines a D-term with its own subterms.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::calc::{AxiomAssignment, MgtEngine};
use crate::dterm::{enumerate_prime, parse_dterm, DTerm, PrimSym};
use crate::error::{Error, Result};
use crate::formula::{parse_formula, Formula};
use crate::organic::organicity;
use crate::reduction::is_c_regular_in;
use crate::table::PrimeLevels;

/// A theorem together with a D-term over axiom `1` proving it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma {
    pub formula: Formula,
    pub witness: DTerm,
}

impl Lemma {
    pub fn t_size(&self) -> u64 {
        self.witness.t_size()
    }

    pub fn c_size(&self) -> usize {
        self.witness.c_size()
    }
}

/// Largest size accepted by [`prime_core`].
pub const MAX_PRIME_CORE_SIZE: u64 = 22;

#[derive(Clone, Debug)]
pub struct PrimeCore {
    /// Primes of the requested size passing both filters, in enumeration
    /// order.
    pub candidates: Vec<DTerm>,
    /// Primes of the requested size with a defined MGT, before filtering.
    pub defined: u64,
    /// MGTs of the first candidate and of all its compound subterms.
    pub lemmas: Vec<Lemma>,
}

/// Prime D-terms of exactly `size` whose MGT has `var_count` variables and
/// has no prime proof of smaller size, that is, is not subsumed by the MGT of
/// a smaller prime D-term.
pub fn prime_core(axiom: &Formula, size: u64, var_count: usize) -> Result<PrimeCore> {
    if size > MAX_PRIME_CORE_SIZE {
        return Err(Error::ResourceLimit(format!("prime core size {size} exceeds {MAX_PRIME_CORE_SIZE}")));
    }
    let mut smaller: HashSet<Formula> = HashSet::new();
    for level in PrimeLevels::new(axiom).take(size as usize) {
        smaller.extend(level.classes.into_keys());
    }
    let alpha = AxiomAssignment::single(axiom);
    let mut engine = MgtEngine::new(&alpha);
    let mut candidates = Vec::new();
    let mut defined = 0;
    for d in enumerate_prime(size) {
        if let Some(m) = engine.mgt(&d)? {
            defined += 1;
            if m.var_count() == var_count && !smaller.iter().any(|k| crate::subst::subsumed_by(&m, k)) {
                candidates.push(d);
            }
        }
    }
    let mut lemmas = Vec::new();
    if let Some(core) = candidates.first() {
        for e in core.compound_subterms() {
            let formula = engine.mgt(&e)?.ok_or(Error::UndefinedMgt)?;
            lemmas.push(Lemma { formula, witness: e });
        }
    }
    Ok(PrimeCore { candidates, defined, lemmas })
}

/// Order in which kept D-terms become given.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum KeepOrder {
    #[default]
    Fifo,
    /// Most recently kept first.
    Lifo,
    ByTreeSize,
    /// Smallest theorem (implication count) first.
    ByTheoremSize,
}

/// Redundancy test between a new lemma and the kept ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Prune {
    /// Drop MGTs that are variants of a kept MGT.
    #[default]
    Variant,
    /// Drop MGTs subsumed by a kept MGT.
    Subsume,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopConfig {
    pub iterations: usize,
    pub dkl_limit: u32,
    pub require_c_regular: bool,
    pub require_weakly_organic: bool,
    pub keep_order: KeepOrder,
    pub prune: Prune,
    /// Also infer `D(d, n)` for given `d`.
    pub n_minors: bool,
    /// Bounds on the kept theorems: implication count, height, number of
    /// variables and compacted size.
    pub max_theorem_size: Option<usize>,
    pub max_theorem_height: Option<usize>,
    pub max_theorem_vars: Option<usize>,
    pub max_theorem_c_size: Option<usize>,
}

impl Default for LoopConfig {
    fn default() -> Self {
        LoopConfig {
            iterations: 93,
            dkl_limit: 7,
            require_c_regular: true,
            require_weakly_organic: true,
            keep_order: KeepOrder::Fifo,
            prune: Prune::Variant,
            n_minors: true,
            max_theorem_size: None,
            max_theorem_height: None,
            max_theorem_vars: None,
            max_theorem_c_size: None,
        }
    }
}

/// The given-D-term loop. Starting from the axiom, each iteration takes the
/// next kept D-term `d` and infers `D(d, e)` and `D(e, d)` for every subterm
/// `e` of `d` (and `D(d, n)` if enabled); inferred D-terms passing the
/// filters are kept. Returns the kept lemmas other than the axiom.
pub fn proof_subproof(axiom: &Formula, cfg: &LoopConfig) -> Result<Vec<Lemma>> {
    if cfg.dkl_limit == 0 {
        return Err(Error::InvalidProof("dkl limit must be at least 1".into()));
    }
    let alpha = AxiomAssignment::single(axiom);
    let mut engine = MgtEngine::new(&alpha);
    let one = DTerm::num(1);
    let mut kept: Vec<Lemma> = vec![Lemma { formula: axiom.canonical(), witness: one }];
    let mut seen: HashSet<Formula> = HashSet::from([axiom.canonical()]);
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    let mut tried: HashSet<u64> = HashSet::new();
    let n = DTerm::n();
    for _ in 0..cfg.iterations {
        let Some(g) = (match cfg.keep_order {
            KeepOrder::Fifo => queue.pop_front(),
            KeepOrder::Lifo => queue.pop_back(),
            KeepOrder::ByTheoremSize => {
                let best = queue.iter().enumerate().min_by_key(|(_, &i)| (kept[i].formula.tree_size(), i)).map(|(j, _)| j);
                best.and_then(|j| queue.remove(j))
            }
            KeepOrder::ByTreeSize => {
                let best = queue.iter().enumerate().min_by_key(|(_, &i)| (kept[i].t_size(), i)).map(|(j, _)| j);
                best.and_then(|j| queue.remove(j))
            }
        }) else {
            break;
        };
        let d = kept[g].witness.clone();
        let mut inferred = Vec::new();
        for e in d.subterms() {
            inferred.push(DTerm::d(&d, &e));
            if e != d {
                inferred.push(DTerm::d(&e, &d));
            }
        }
        if cfg.n_minors {
            inferred.push(DTerm::d(&d, &n));
        }
        for c in inferred {
            if !tried.insert(c.id()) || c.dk_left() > cfg.dkl_limit {
                continue;
            }
            let Some(m) = engine.mgt(&c)? else { continue };
            if m.has_consts() || seen.contains(&m) {
                continue;
            }
            if cfg.max_theorem_size.is_some_and(|k| m.tree_size() > k)
                || cfg.max_theorem_height.is_some_and(|k| m.height() > k)
                || cfg.max_theorem_vars.is_some_and(|k| m.var_count() > k)
                || cfg.max_theorem_c_size.is_some_and(|k| m.c_size() > k)
            {
                continue;
            }
            if cfg.prune == Prune::Subsume && kept.iter().any(|l| crate::subst::subsumed_by(&m, &l.formula)) {
                continue;
            }
            if cfg.require_weakly_organic && !organicity(&m)?.at_least_weakly() {
                continue;
            }
            if cfg.require_c_regular && !is_c_regular_in(&c, &mut engine)? {
                continue;
            }
            seen.insert(m.clone());
            queue.push_back(kept.len());
            kept.push(Lemma { formula: m, witness: c });
        }
    }
    kept.remove(0);
    Ok(kept)
}

/// Lemmas sorted by witness tree size, then formula text.
pub fn sorted(lemmas: &[Lemma]) -> Vec<Lemma> {
    let mut out = lemmas.to_vec();
    out.sort_by_cached_key(|l| (l.t_size(), l.formula.to_string(), l.witness.to_polish()));
    out
}

/// One line `formula = dterm` per lemma, in [`sorted`] order.
pub fn export_text(lemmas: &[Lemma]) -> String {
    let mut out = String::new();
    for l in sorted(lemmas) {
        let _ = writeln!(out, "{} = {}", l.formula, l.witness);
    }
    out
}

pub fn parse_text(text: &str) -> Result<Vec<Lemma>> {
    let mut out = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let (f, d) = line.split_once('=').ok_or_else(|| Error::InvalidProof(format!("bad lemma line {line:?}")))?;
        out.push(Lemma { formula: parse_formula(f.trim())?, witness: parse_dterm(d.trim())? });
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct LemmaJson {
    formula: String,
    dterm: String,
    t_size: u64,
    c_size: usize,
    height: u32,
    dk_left: u32,
}

pub fn export_json(lemmas: &[Lemma]) -> serde_json::Value {
    let items: Vec<LemmaJson> = sorted(lemmas)
        .iter()
        .map(|l| LemmaJson {
            formula: l.formula.to_string(),
            dterm: l.witness.to_string(),
            t_size: l.t_size(),
            c_size: l.c_size(),
            height: l.witness.height(),
            dk_left: l.witness.dk_left(),
        })
        .collect();
    serde_json::json!({ "schema": "cdt.lemmas/1", "lemmas": items })
}

/// Rechecks that every witness proves its formula up to variants.
pub fn verify(axiom: &Formula, lemmas: &[Lemma]) -> Result<bool> {
    let alpha = AxiomAssignment::single(axiom);
    let mut engine = MgtEngine::new(&alpha);
    for l in lemmas {
        match engine.mgt(&l.witness)? {
            Some(m) if m == l.formula.canonical() => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Assigns primitive numbers `2, 3, ...` to lemmas, for search.
pub fn lemma_assignment(axiom: &Formula, lemmas: &[Lemma]) -> (AxiomAssignment, HashMap<PrimSym, DTerm>) {
    let mut alpha = AxiomAssignment::single(axiom);
    let mut witnesses = HashMap::new();
    for (i, l) in lemmas.iter().enumerate() {
        let sym = PrimSym::Num(i as u32 + 2);
        alpha.insert(sym, &l.formula);
        witnesses.insert(sym, l.witness.clone());
    }
    (alpha, witnesses)
}
