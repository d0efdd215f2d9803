//! Goal-directed proof search by iterative deepening on tree size.
//!
//! The search builds D-terms top down. An open subgoal is closed by an axiom
//! or lemma whose theorem unifies with it, or expanded into a major premise
//! `C a g` and a minor premise `a` for a fresh `a`. Variables of the goal are
//! frozen to constants, so every solution's MGT subsumes the goal. Subgoals
//! are taken major first, so the choices of a branch spell the solution in
//! Polish notation.

use std::collections::HashMap;

use crate::bank::{Bank, TermId};
use crate::calc::{simp_n, AxiomAssignment, MgtEngine};
use crate::dterm::{DTerm, PrimSym};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::lemmas::Lemma;
use crate::reduction::is_c_regular;
use crate::subst::subsumed_by;

/// Which solution is returned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Objective {
    /// The first solution of minimal tree size.
    #[default]
    First,
    /// Among up to `max_solutions` solutions of minimal tree size, the one
    /// whose expansion over the axioms has the smallest compacted size.
    MinCompacted { max_solutions: usize },
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub max_tree_size: u64,
    pub max_height: Option<u32>,
    pub max_dkl: Option<u32>,
    pub lemmas: Vec<Lemma>,
    pub regularity_pruning: bool,
    pub objective: Objective,
    /// Bound on closing and expansion attempts; exceeding it is an error.
    pub max_inferences: Option<u64>,
}

impl SearchConfig {
    pub fn new(max_tree_size: u64) -> Self {
        SearchConfig {
            max_tree_size,
            max_height: None,
            max_dkl: None,
            lemmas: Vec::new(),
            regularity_pruning: false,
            objective: Objective::First,
            max_inferences: None,
        }
    }
}

/// A found proof: over axioms and lemma primitives, and expanded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Found {
    pub dterm: DTerm,
    /// `dterm` with lemma witnesses substituted.
    pub expanded: DTerm,
    pub inferences: u64,
}

enum Item {
    Goal(TermId),
    Combine,
}

struct Searcher<'a> {
    bank: Bank,
    prims: Vec<(PrimSym, Formula)>,
    cfg: &'a SearchConfig,
    alpha: &'a AxiomAssignment,
    witnesses: &'a HashMap<PrimSym, DTerm>,
    regular: HashMap<u64, bool>,
    inferences: u64,
    solutions: Vec<DTerm>,
    limit_hit: bool,
}

impl Searcher<'_> {
    /// Returns `true` to stop the search.
    fn run(&mut self, stack: &mut Vec<Item>, out: &mut Vec<DTerm>, remaining: u64) -> Result<bool> {
        let Some(item) = stack.pop() else {
            if remaining == 0 {
                self.solutions.push(out[0].clone());
                return Ok(match self.cfg.objective {
                    Objective::First => true,
                    Objective::MinCompacted { max_solutions } => self.solutions.len() >= max_solutions,
                });
            }
            return Ok(false);
        };
        let stop = match item {
            Item::Combine => {
                let minor = out.pop().unwrap();
                let major = out.pop().unwrap();
                let d = DTerm::d(&major, &minor);
                let stop = if self.admissible(&d)? {
                    out.push(d);
                    let stop = self.run(stack, out, remaining)?;
                    out.pop();
                    stop
                } else {
                    false
                };
                out.push(major);
                out.push(minor);
                stack.push(Item::Combine);
                return Ok(stop);
            }
            Item::Goal(g) => {
                let mut stop = false;
                for i in 0..self.prims.len() {
                    if !self.tick() {
                        return Ok(true);
                    }
                    let cp = self.bank.checkpoint();
                    let t = self.bank.load_fresh(&self.prims[i].1);
                    if self.bank.unify(g, t).is_ok() {
                        out.push(DTerm::prim(self.prims[i].0));
                        stop = self.run(stack, out, remaining)?;
                        out.pop();
                    }
                    self.bank.rollback(cp);
                    if stop {
                        break;
                    }
                }
                if !stop && remaining > 0 && self.tick() {
                    let cp = self.bank.checkpoint();
                    let a = self.bank.fresh_var();
                    let major = self.bank.imp(a, g);
                    let depth = stack.len();
                    stack.push(Item::Combine);
                    stack.push(Item::Goal(a));
                    stack.push(Item::Goal(major));
                    stop = self.run(stack, out, remaining - 1)?;
                    stack.truncate(depth);
                    self.bank.rollback(cp);
                }
                stack.push(Item::Goal(g));
                stop
            }
        };
        Ok(stop)
    }

    fn tick(&mut self) -> bool {
        self.inferences += 1;
        match self.cfg.max_inferences {
            Some(max) if self.inferences > max => {
                self.limit_hit = true;
                false
            }
            _ => true,
        }
    }

    fn admissible(&mut self, d: &DTerm) -> Result<bool> {
        if self.cfg.max_height.is_some_and(|h| d.height() > h) || self.cfg.max_dkl.is_some_and(|k| d.dk_left() > k) {
            return Ok(false);
        }
        if self.cfg.regularity_pruning {
            if let Some(&r) = self.regular.get(&d.id()) {
                return Ok(r);
            }
            let r = is_c_regular(d, self.alpha)?;
            self.regular.insert(d.id(), r);
            return Ok(r);
        }
        Ok(true)
    }
}

/// Replaces lemma primitives by their witnesses.
pub fn expand_lemmas(d: &DTerm, witnesses: &HashMap<PrimSym, DTerm>, alpha: &AxiomAssignment) -> Result<DTerm> {
    for p in d.prims() {
        if p != PrimSym::N && alpha.get(p).is_none() && !witnesses.contains_key(&p) {
            return Err(Error::MissingAxiom(p));
        }
    }
    Ok(d.map_prims(&|s| witnesses.get(&s).cloned()))
}

/// Searches for a D-term whose MGT subsumes `goal`, over the primitives of
/// `alpha` and the configured lemmas.
pub fn prove(goal: &Formula, alpha: &AxiomAssignment, cfg: &SearchConfig) -> Result<Option<DTerm>> {
    Ok(prove_with_lemmas(goal, alpha, cfg)?.map(|f| f.expanded))
}

pub fn prove_with_lemmas(goal: &Formula, alpha: &AxiomAssignment, cfg: &SearchConfig) -> Result<Option<Found>> {
    if cfg.max_tree_size == 0 && alpha.iter().next().is_none() {
        return Ok(None);
    }
    let mut full = alpha.clone();
    let mut witnesses = HashMap::new();
    let base = alpha
        .iter()
        .filter_map(|(s, _)| match s {
            PrimSym::Num(k) => Some(*k),
            PrimSym::N => None,
        })
        .max()
        .unwrap_or(0);
    let mut prims: Vec<(PrimSym, Formula)> = alpha.iter().map(|(s, f)| (*s, f.clone())).collect();
    for (i, l) in cfg.lemmas.iter().enumerate() {
        let sym = PrimSym::Num(base + 1 + i as u32);
        full.insert(sym, &l.formula);
        witnesses.insert(sym, l.witness.clone());
        prims.push((sym, l.formula.clone()));
    }
    let mut searcher = Searcher {
        bank: Bank::new(),
        prims,
        cfg,
        alpha: &full,
        witnesses: &witnesses,
        regular: HashMap::new(),
        inferences: 0,
        solutions: Vec::new(),
        limit_hit: false,
    };
    // Goal variables become constants.
    let mut consts = HashMap::new();
    for (i, v) in goal.vars().into_iter().enumerate() {
        consts.insert(v, Formula::Const(i as u32));
    }
    let frozen = freeze(goal, &consts);
    let mut vars = HashMap::new();
    let g = searcher.bank.load(&frozen, &mut vars);
    for size in 0..=cfg.max_tree_size {
        let mut stack = vec![Item::Goal(g)];
        let mut out = Vec::new();
        searcher.run(&mut stack, &mut out, size)?;
        if searcher.limit_hit {
            return Err(Error::ResourceLimit(format!("search exceeded {} inferences", searcher.inferences)));
        }
        if !searcher.solutions.is_empty() {
            break;
        }
    }
    let mut best: Option<Found> = None;
    for d in std::mem::take(&mut searcher.solutions) {
        let expanded = expand_lemmas(&d, searcher.witnesses, alpha)?;
        if best.as_ref().is_none_or(|b| expanded.c_size() < b.expanded.c_size()) {
            best = Some(Found { dterm: d, expanded, inferences: searcher.inferences });
        }
    }
    if let Some(b) = &best {
        // Soundness: the MGT of the expansion subsumes the goal.
        let m = MgtEngine::new(alpha).mgt(&b.expanded)?.ok_or(Error::UndefinedMgt)?;
        if !subsumed_by(goal, &m) {
            return Err(Error::InvalidProof(format!("search result {} does not prove the goal", b.dterm)));
        }
    }
    Ok(best)
}

fn freeze(f: &Formula, consts: &HashMap<crate::formula::VarId, Formula>) -> Formula {
    match f {
        Formula::Var(v) => consts[v].clone(),
        Formula::Const(_) => f.clone(),
        Formula::Imp(a, b) => Formula::imp(freeze(a, consts), freeze(b, consts)),
    }
}

/// Expands a found proof and applies n-simplification.
pub fn finish(found: &Found, alpha: &AxiomAssignment) -> Result<DTerm> {
    simp_n(&found.expanded, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        s.parse().unwrap()
    }

    #[test]
    fn axiom_is_found_at_size_zero() {
        let ax = f("CCCpqrCqr");
        let alpha = AxiomAssignment::single(&ax);
        let d = prove(&ax, &alpha, &SearchConfig::new(1)).unwrap().unwrap();
        assert_eq!(d, DTerm::num(1));
    }

    #[test]
    fn running_example() {
        let alpha = AxiomAssignment::single(&f("CCCpqrCqr"));
        let mut cfg = SearchConfig::new(7);
        cfg.objective = Objective::MinCompacted { max_solutions: 1000 };
        let goal = f("CpCqCrCsCtCus");
        let d = prove(&goal, &alpha, &cfg).unwrap().unwrap();
        // Tree size 6 is minimal; the familiar proof D2D33 over D11, D12 has 7.
        assert_eq!(d.to_string(), "DD1D1D11D1D11");
        assert_eq!((d.t_size(), d.c_size()), (6, 4));
        let classic: DTerm = "DD11DD1D11D1D11".parse().unwrap();
        let m = crate::calc::mgt(&classic, &alpha).unwrap().unwrap();
        assert!(subsumed_by(&goal, &m));
        assert_eq!(classic.c_size(), 4);
    }

    #[test]
    fn not_found_within_bound() {
        let alpha = AxiomAssignment::single(&f("CCCpqrCqr"));
        assert_eq!(prove(&f("CpCqCrCsCtCus"), &alpha, &SearchConfig::new(5)).unwrap(), None);
    }
}
