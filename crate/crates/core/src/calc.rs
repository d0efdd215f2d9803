//! Semantics of D-terms: axiom assignments, pairings, in-place theorems and
//! most general theorems, proof checking and n-simplification.
//!
//! Two routes compute the most general theorem. The definitional one unifies
//! the pairings of every position of the expanded tree at once. The fast one
//! performs condensed detachment bottom-up over the DAG, renaming the theorems
//! of the premises apart, with a memo per node. Tests check that both agree up
//! to variants.

use std::collections::{BTreeMap, HashMap};

use crate::bank::{Bank, TermId};
use crate::compact::{Body, CompactProof};
use crate::dterm::{DTerm, Kind, PrimSym};
use crate::error::{Error, Result};
use crate::formula::{Formula, VarId};
use crate::position::Position;
use crate::subst::{is_variant, shift, unify};

/// How the special primitive `n` is interpreted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NPolicy {
    /// Every occurrence of `n` stands for its own fresh constant.
    FreshConstant,
    /// `n` is read as the given primitive.
    AsPrim(PrimSym),
}

/// Maps primitive D-terms to axioms in canonical `x^i_ε` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomAssignment {
    map: BTreeMap<PrimSym, Formula>,
    n_policy: NPolicy,
}

/// Replaces the variables of `f` by `x^1_ε, x^2_ε, ...` in first-occurrence
/// order.
pub fn canonical_axiom(f: &Formula) -> Formula {
    let vars = f.vars();
    let index: HashMap<VarId, u32> = vars.into_iter().enumerate().map(|(i, v)| (v, i as u32 + 1)).collect();
    fn go(f: &Formula, index: &HashMap<VarId, u32>) -> Formula {
        match f {
            Formula::Var(v) => Formula::Var(VarId::X(index[v], Position::root())),
            Formula::Const(_) => f.clone(),
            Formula::Imp(a, b) => Formula::imp(go(a, index), go(b, index)),
        }
    }
    go(f, &index)
}

impl Default for AxiomAssignment {
    fn default() -> Self {
        AxiomAssignment { map: BTreeMap::new(), n_policy: NPolicy::FreshConstant }
    }
}

impl AxiomAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// `{1 ↦ axiom}`.
    pub fn single(axiom: &Formula) -> Self {
        let mut a = AxiomAssignment::new();
        a.insert(PrimSym::Num(1), axiom);
        a
    }

    pub fn insert(&mut self, sym: PrimSym, axiom: &Formula) {
        self.map.insert(sym, canonical_axiom(axiom));
    }

    pub fn with_n_policy(mut self, policy: NPolicy) -> Self {
        self.n_policy = policy;
        self
    }

    pub fn n_policy(&self) -> NPolicy {
        self.n_policy
    }

    pub fn get(&self, sym: PrimSym) -> Option<&Formula> {
        self.map.get(&sym)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PrimSym, &Formula)> {
        self.map.iter()
    }

    /// The axiom steps of a compact proof, keyed by their indices.
    pub fn from_proof(p: &CompactProof) -> Result<Self> {
        let mut a = AxiomAssignment::new();
        for s in p.axioms() {
            let f = s.formula.as_ref().ok_or(Error::MissingAxiom(PrimSym::Num(s.index)))?;
            a.insert(PrimSym::Num(s.index), f);
        }
        Ok(a)
    }

    /// The axiom a primitive stands for, resolving `n` through the policy.
    /// `Ok(None)` means `n` under the fresh-constant policy.
    fn resolve(&self, sym: PrimSym) -> Result<Option<&Formula>> {
        match (sym, self.n_policy) {
            (PrimSym::N, NPolicy::FreshConstant) => Ok(None),
            (PrimSym::N, NPolicy::AsPrim(s)) => self.map.get(&s).map(Some).ok_or(Error::MissingAxiom(s)),
            (s, _) => self.map.get(&s).map(Some).ok_or(Error::MissingAxiom(s)),
        }
    }

    /// A short fingerprint of the assignment, used to tag caches.
    pub fn fingerprint(&self) -> String {
        self.map.iter().map(|(s, f)| format!("{s}={}", f.canonical())).collect::<Vec<_>>().join(",")
    }
}

/// The pair of terms attached to a position by the definitional semantics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    pub pos: Position,
    pub left: Formula,
    pub right: Formula,
}

fn y(p: &Position) -> Formula {
    Formula::Var(VarId::Y(p.clone()))
}

/// One pairing per position of the expanded tree, in preorder. A leaf `p`
/// pairs `y_p` with the axiom shifted to `p`; an inner position pairs
/// `y_{p.1}` with `C y_{p.2} y_p`. Under the fresh-constant policy an `n`
/// leaf pairs `y_p` with a constant of its own.
pub fn pairings(d: &DTerm, alpha: &AxiomAssignment) -> Result<Vec<Pairing>> {
    let mut out = Vec::new();
    let mut next_const = 0;
    for p in d.positions() {
        let sub = d.at(&p)?;
        let pairing = match sub.kind() {
            Kind::Prim(s) => {
                let right = match alpha.resolve(*s)? {
                    Some(ax) => shift(&p, ax)?,
                    None => {
                        next_const += 1;
                        Formula::Const(next_const - 1)
                    }
                };
                Pairing { left: y(&p), right, pos: p }
            }
            Kind::D(..) => Pairing { left: y(&p.child(1)), right: Formula::imp(y(&p.child(2)), y(&p)), pos: p },
        };
        out.push(pairing);
    }
    Ok(out)
}

/// The most general theorem through a single unifier of all pairings.
/// Intended for small D-terms and as a reference for [`MgtEngine`].
pub fn mgt_by_pairings(d: &DTerm, alpha: &AxiomAssignment) -> Result<Option<Formula>> {
    let pairs: Vec<(Formula, Formula)> = pairings(d, alpha)?.into_iter().map(|p| (p.left, p.right)).collect();
    Ok(unify(&pairs).ok().map(|sigma| sigma.apply(&y(&Position::root()))))
}

/// Bottom-up condensed detachment with a memo per D-term node. Results are
/// canonical (variables `p, q, ...`, constants `0, 1, ...`).
pub struct MgtEngine<'a> {
    alpha: &'a AxiomAssignment,
    memo: HashMap<u64, Option<Formula>>,
}

impl<'a> MgtEngine<'a> {
    pub fn new(alpha: &'a AxiomAssignment) -> Self {
        MgtEngine { alpha, memo: HashMap::new() }
    }

    pub fn alpha(&self) -> &AxiomAssignment {
        self.alpha
    }

    /// `Ok(None)` when the MGT is undefined.
    pub fn mgt(&mut self, d: &DTerm) -> Result<Option<Formula>> {
        if let Some(f) = self.memo.get(&d.id()) {
            return Ok(f.clone());
        }
        let f = match d.kind() {
            Kind::Prim(s) => Some(match self.alpha.resolve(*s)? {
                Some(ax) => ax.canonical(),
                None => Formula::Const(0),
            }),
            Kind::D(a, b) => {
                let (a, b) = (a.clone(), b.clone());
                match (self.mgt(&a)?, self.mgt(&b)?) {
                    (Some(major), Some(minor)) => detach(&major, &minor),
                    _ => None,
                }
            }
        };
        self.memo.insert(d.id(), f.clone());
        Ok(f)
    }
}

/// Condensed detachment: the most general conclusion of `major` and `minor`
/// renamed apart, or `None` if the minor does not unify with the antecedent.
pub fn detach(major: &Formula, minor: &Formula) -> Option<Formula> {
    let mut bank = Bank::new();
    let a = bank.load_fresh(major);
    let b = bank.load_fresh(minor);
    let ante = bank.fresh_var();
    let concl = bank.fresh_var();
    let imp = bank.imp(ante, concl);
    bank.unify(a, imp).ok()?;
    bank.unify(ante, b).ok()?;
    Some(bank.resolve_one(concl).canonical())
}

/// `Ok(None)` when the MGT is undefined.
pub fn mgt(d: &DTerm, alpha: &AxiomAssignment) -> Result<Option<Formula>> {
    MgtEngine::new(alpha).mgt(d)
}

/// The in-place theorems of all positions of a D-term under one global
/// unifier, kept in a term bank so that large theorems stay shared.
pub struct Ipts {
    bank: Bank,
    // Preorder positions with their subterm and the bank term of `y_p`.
    entries: Vec<(Position, DTerm, TermId)>,
}

impl Ipts {
    /// `Ok(None)` when the pairings are not unifiable.
    pub fn compute(d: &DTerm, alpha: &AxiomAssignment) -> Result<Option<Ipts>> {
        let mut bank = Bank::new();
        let mut entries: Vec<(Position, DTerm, TermId)> = Vec::new();
        // Preorder with explicit stack; y_p is created when p is visited and
        // linked to its children once they have their own variables.
        struct Frame {
            d: DTerm,
            pos: Position,
            y: TermId,
        }
        let root_y = bank.fresh_var();
        let mut stack = vec![Frame { d: d.clone(), pos: Position::root(), y: root_y }];
        while let Some(Frame { d, pos, y }) = stack.pop() {
            entries.push((pos.clone(), d.clone(), y));
            match d.kind() {
                Kind::Prim(s) => {
                    let t = match alpha.resolve(*s)? {
                        Some(ax) => bank.load_fresh(ax),
                        None => bank.fresh_const(),
                    };
                    if bank.unify(y, t).is_err() {
                        return Ok(None);
                    }
                }
                Kind::D(a, b) => {
                    let y1 = bank.fresh_var();
                    let y2 = bank.fresh_var();
                    let imp = bank.imp(y2, y);
                    if bank.unify(y1, imp).is_err() {
                        return Ok(None);
                    }
                    stack.push(Frame { d: b.clone(), pos: pos.child(2), y: y2 });
                    stack.push(Frame { d: a.clone(), pos: pos.child(1), y: y1 });
                }
            }
        }
        Ok(Some(Ipts { bank, entries }))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn positions(&self) -> impl Iterator<Item = (&Position, &DTerm)> {
        self.entries.iter().map(|(p, d, _)| (p, d))
    }

    pub fn ipt(&self, p: &Position) -> Result<Formula> {
        let (_, _, t) = self
            .entries
            .iter()
            .find(|(q, _, _)| q == p)
            .ok_or_else(|| Error::BadPosition(p.to_string()))?;
        Ok(self.bank.resolve_one(*t))
    }

    /// Resolved IPTs of all positions in preorder, sharing structure.
    pub fn all(&self) -> Vec<(Position, DTerm, Formula)> {
        let mut memo = HashMap::new();
        self.entries.iter().map(|(p, d, t)| (p.clone(), d.clone(), self.bank.resolve(*t, &mut memo))).collect()
    }

    /// Tree size and height of the IPT at every position, in preorder.
    pub fn measures(&self) -> Vec<(Position, DTerm, u64, u64)> {
        let mut sizes = HashMap::new();
        let mut heights = HashMap::new();
        self.entries
            .iter()
            .map(|(p, d, t)| (p.clone(), d.clone(), self.bank.tree_size(*t, &mut sizes), self.bank.height(*t, &mut heights)))
            .collect()
    }
}

/// The IPT of `d` at `p`; `Ok(None)` when the MGT of `d` is undefined.
pub fn ipt(d: &DTerm, p: &Position, alpha: &AxiomAssignment) -> Result<Option<Formula>> {
    d.at(p)?;
    match Ipts::compute(d, alpha)? {
        Some(ipts) => ipts.ipt(p).map(Some),
        None => Ok(None),
    }
}

/// Outcome of checking one step of a compact proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepReport {
    pub index: u32,
    pub goal: bool,
    pub axiom: bool,
    pub stated: Option<Formula>,
    pub mgt: Option<Formula>,
    pub verified: bool,
    pub t_size: u64,
    pub c_size: usize,
    pub height: u32,
    pub dterm: DTerm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub steps: Vec<StepReport>,
    /// Compacted size of the set of expanded goals.
    pub goals_c_size: usize,
    pub verified: bool,
}

impl CheckReport {
    pub fn step(&self, index: u32) -> Option<&StepReport> {
        self.steps.iter().find(|s| s.index == index)
    }

    pub fn failures(&self) -> impl Iterator<Item = &StepReport> {
        self.steps.iter().filter(|s| !s.verified)
    }
}

/// Computes the MGT of every derived step and compares it with the stated
/// formula up to variants.
pub fn check_proof(p: &CompactProof, alpha: &AxiomAssignment) -> Result<CheckReport> {
    let mut engine = MgtEngine::new(alpha);
    let expansions = p.expand_all()?;
    let mut steps = Vec::new();
    for (step, (_, d)) in p.steps().iter().zip(&expansions) {
        let (mgt, verified) = match &step.body {
            Body::Axiom => (step.formula.clone(), step.formula.is_some()),
            Body::Derived(_) => {
                let m = engine.mgt(d)?;
                let ok = match (&m, &step.formula) {
                    (Some(m), Some(s)) => is_variant(m, s),
                    (Some(_), None) => true,
                    (None, _) => false,
                };
                (m, ok)
            }
        };
        steps.push(StepReport {
            index: step.index,
            goal: step.goal,
            axiom: step.is_axiom(),
            stated: step.formula.clone(),
            mgt,
            verified,
            t_size: d.t_size(),
            c_size: d.c_size(),
            height: d.height(),
            dterm: d.clone(),
        });
    }
    let goal_terms: Vec<DTerm> = p
        .goals()
        .iter()
        .map(|g| expansions.iter().find(|(i, _)| *i == g.index).map(|(_, d)| d.clone()).unwrap())
        .collect();
    let verified = steps.iter().all(|s| s.verified);
    Ok(CheckReport { steps, goals_c_size: crate::dterm::c_size_set(&goal_terms), verified })
}

/// Replaces minor premises by `n` wherever the theorem does not depend on
/// them, recursively from the root.
pub fn simp_n(d: &DTerm, alpha: &AxiomAssignment) -> Result<DTerm> {
    let alpha_n = alpha.clone().with_n_policy(NPolicy::FreshConstant);
    let mut engine = MgtEngine::new(alpha);
    let mut engine_n = MgtEngine::new(&alpha_n);
    if engine.mgt(d)?.is_none() {
        return Err(Error::UndefinedMgt);
    }
    let n = DTerm::n();
    let mut memo: HashMap<u64, DTerm> = HashMap::new();
    fn go(
        d: &DTerm,
        n: &DTerm,
        engine: &mut MgtEngine,
        engine_n: &mut MgtEngine,
        memo: &mut HashMap<u64, DTerm>,
    ) -> Result<DTerm> {
        if let Some(r) = memo.get(&d.id()) {
            return Ok(r.clone());
        }
        let r = match d.kind() {
            Kind::Prim(_) => d.clone(),
            Kind::D(a, b) => {
                let target = engine.mgt(d)?;
                let with_n = engine_n.mgt(&DTerm::d(a, n))?;
                let a2 = go(a, n, engine, engine_n, memo)?;
                let keep_minor = b == n
                    || !matches!((&target, &with_n), (Some(t), Some(w)) if t == w);
                if keep_minor {
                    let b2 = go(b, n, engine, engine_n, memo)?;
                    DTerm::d(&a2, &b2)
                } else {
                    DTerm::d(&a2, n)
                }
            }
        };
        memo.insert(d.id(), r.clone());
        Ok(r)
    }
    go(d, &n, &mut engine, &mut engine_n, &mut memo)
}
