//! Semantically admissible replacement of subproofs: C-reduction,
//! C-regularity, and rewriting single occurrences against a table of small
//! proofs.

use std::collections::HashMap;

use crate::calc::{AxiomAssignment, Ipts, MgtEngine};
use crate::dterm::{gt_c, DTerm, PrimSym};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::position::Position;
use crate::subst::subsumed_by;
use crate::table::SmallProofTable;

/// One C-reduction step: all occurrences of `e` in the input were replaced by
/// `e2`, giving `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub d: DTerm,
    pub e: DTerm,
    pub e2: DTerm,
}

/// Primitive symbols available to replacement candidates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CandidatePrims {
    /// The numbered primitives of the whole D-term being reduced.
    #[default]
    OfTerm,
    /// The numbered primitives of the replaced subterm only.
    OfSubterm,
}

/// Replacement candidates `e'` with `e >c e'`, built from the strict subterms
/// of `e` and the given primitives, ordered by compacted size.
///
/// Every candidate is a base term (strict subterm of `e` or primitive) or
/// `D(a, b)` over base terms, so its strict compound subterms lie among those
/// of `e` and `e >c e'` reduces to comparing their counts. The counts are
/// taken from bitsets over the compound subterms of `e`.
fn candidates(e: &DTerm, prims: &[PrimSym]) -> Vec<DTerm> {
    let Some(_) = e.args() else { return Vec::new() };
    let comp = e.compound_subterms();
    let index: HashMap<u64, usize> = comp.iter().enumerate().map(|(i, x)| (x.id(), i)).collect();
    let words = comp.len().div_ceil(64);
    let mut base: Vec<(DTerm, Vec<u64>)> = Vec::new();
    // Postorder: children precede parents, so their masks are ready.
    let mut masks: HashMap<u64, Vec<u64>> = HashMap::new();
    for x in e.subterms() {
        let mut m = vec![0u64; words];
        if let Some((a, b)) = x.args() {
            for (w, (ma, mb)) in m.iter_mut().zip(masks[&a.id()].iter().zip(&masks[&b.id()])) {
                *w = ma | mb;
            }
            let i = index[&x.id()];
            m[i / 64] |= 1 << (i % 64);
        }
        masks.insert(x.id(), m.clone());
        if x != *e {
            base.push((x, m));
        }
    }
    for p in prims {
        let leaf = DTerm::prim(*p);
        if let std::collections::hash_map::Entry::Vacant(v) = masks.entry(leaf.id()) {
            v.insert(vec![0; words]);
            base.push((leaf, vec![0; words]));
        }
    }
    let bound = comp.len() - 1;
    let count = |m: &[u64]| m.iter().map(|w| w.count_ones() as usize).sum::<usize>();
    let mut out: Vec<(usize, DTerm)> = Vec::new();
    for (x, _) in &base {
        if x.is_prim() && bound > 0 {
            out.push((0, x.clone()));
        }
    }
    let mut union = vec![0u64; words];
    for (a, ma) in &base {
        for (b, mb) in &base {
            for (u, (x, y)) in union.iter_mut().zip(ma.iter().zip(mb)) {
                *u = x | y;
            }
            // Strict compound subterms of D(a, b) are those of a and b.
            let strict = count(&union);
            if strict < bound {
                out.push((strict + 1, DTerm::d(a, b)));
            }
        }
    }
    out.sort();
    out.dedup();
    debug_assert!(out.iter().all(|(c, x)| gt_c(e, x) && *c == x.c_size()));
    out.into_iter().map(|(_, x)| x).collect()
}

/// Finds a C-reduction step, trying subterms by decreasing sc-size and
/// candidates by increasing compacted size. `None` iff `d` is C-regular.
pub fn c_reduction_step(d: &DTerm, alpha: &AxiomAssignment) -> Result<Option<Reduction>> {
    c_reduction_step_with(d, alpha, CandidatePrims::default())
}

pub fn c_reduction_step_with(d: &DTerm, alpha: &AxiomAssignment, prims: CandidatePrims) -> Result<Option<Reduction>> {
    c_reduction_step_in(d, &mut MgtEngine::new(alpha), prims)
}

/// As [`c_reduction_step_with`], reusing the MGT memo of `engine` across
/// calls.
pub fn c_reduction_step_in(d: &DTerm, engine: &mut MgtEngine, prims: CandidatePrims) -> Result<Option<Reduction>> {
    let Some(ipts) = Ipts::compute(d, engine.alpha())? else {
        return Ok(None);
    };
    // IPTs grouped by the subterm at their position.
    let mut by_sub: HashMap<u64, Vec<Formula>> = HashMap::new();
    for (_, sub, f) in ipts.all() {
        by_sub.entry(sub.id()).or_default().push(f);
    }
    let mut subs: Vec<(u64, DTerm)> = d
        .compound_subterms()
        .into_iter()
        .map(|e| (e.sc_size(), e))
        .collect();
    subs.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    let term_prims: Vec<PrimSym> = d.prims().into_iter().filter(|p| *p != PrimSym::N).collect();
    for (_, e) in subs {
        let extra: &[PrimSym] = match prims {
            CandidatePrims::OfTerm => &term_prims,
            CandidatePrims::OfSubterm => &[],
        };
        let mut occ = by_sub[&e.id()].clone();
        occ.sort();
        occ.dedup();
        let has_n = e.prims().contains(&PrimSym::N);
        for e2 in candidates(&e, extra) {
            if has_n && e2.prims().contains(&PrimSym::N) {
                continue;
            }
            let Some(m) = engine.mgt(&e2)? else { continue };
            if occ.iter().all(|ipt| subsumed_by(ipt, &m)) {
                return Ok(Some(Reduction { d: d.replace_all(&e, &e2), e, e2 }));
            }
        }
    }
    Ok(None)
}

pub fn is_c_regular(d: &DTerm, alpha: &AxiomAssignment) -> Result<bool> {
    Ok(c_reduction_step(d, alpha)?.is_none())
}

pub fn is_c_regular_in(d: &DTerm, engine: &mut MgtEngine) -> Result<bool> {
    Ok(c_reduction_step_in(d, engine, CandidatePrims::default())?.is_none())
}

/// Applies C-reduction steps until the D-term is C-regular. Each step strictly
/// decreases the sc-size, so this terminates.
pub fn reduce_to_regular(d: &DTerm, alpha: &AxiomAssignment) -> Result<DTerm> {
    Ok(reduction_trace(d, alpha)?.last().map(|r| r.d.clone()).unwrap_or_else(|| d.clone()))
}

/// All steps taken by [`reduce_to_regular`].
pub fn reduction_trace(d: &DTerm, alpha: &AxiomAssignment) -> Result<Vec<Reduction>> {
    let mut trace = Vec::new();
    let mut cur = d.clone();
    while let Some(r) = c_reduction_step(&cur, alpha)? {
        cur = r.d.clone();
        trace.push(r);
    }
    Ok(trace)
}

/// What a table rewrite tries to shrink.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    Tree,
    Compacted,
}

/// One replacement made by [`rewrite_with_table`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rewrite {
    pub pos: Position,
    pub old: DTerm,
    pub new: DTerm,
}

/// Replaces single occurrences `d|p` by table witnesses `e` whenever
/// `mgt(d|p) ⊑ mgt(e)` and this shrinks the objective, sweeping positions
/// deepest first and left to right, until nothing changes.
pub fn rewrite_with_table(
    d: &DTerm,
    alpha: &AxiomAssignment,
    table: &SmallProofTable,
    objective: Objective,
) -> Result<(DTerm, Vec<Rewrite>)> {
    if !table.is_for(alpha) {
        return Err(Error::TableMismatch { table: table.axiom().to_string(), used: alpha.fingerprint() });
    }
    let mut engine = MgtEngine::new(alpha);
    let mut cur = d.clone();
    let mut log = Vec::new();
    let mut best: HashMap<u64, Option<DTerm>> = HashMap::new();
    loop {
        let mut positions = cur.positions();
        positions.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        let mut changed = false;
        for p in positions {
            let Ok(sub) = cur.at(&p) else { continue };
            if sub.is_prim() {
                continue;
            }
            let repl = match best.get(&sub.id()) {
                Some(r) => r.clone(),
                None => {
                    let r = match engine.mgt(&sub)? {
                        Some(m) => table.smallest_subsuming(&m),
                        None => None,
                    };
                    best.insert(sub.id(), r.clone());
                    r
                }
            };
            let Some(e) = repl else { continue };
            if e == sub {
                continue;
            }
            let next = cur.replace_at(&p, &e)?;
            let better = match objective {
                Objective::Tree => next.t_size() < cur.t_size(),
                Objective::Compacted => next.c_size() < cur.c_size(),
            };
            if better {
                log.push(Rewrite { pos: p, old: sub, new: e });
                cur = next;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok((cur, log))
}
