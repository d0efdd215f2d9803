//! Compact proofs: Meredith's tabular presentation of a proof DAG.
//!
//! Every step has an index and is either an axiom or a derived step whose body
//! is a D-term over the indices of earlier steps (and possibly `n`).

use std::collections::{BTreeMap, HashMap};

use crate::dterm::{DTerm, Kind, PrimSym};
use crate::error::{Error, Result};
use crate::formula::Formula;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Body {
    Axiom,
    Derived(DTerm),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub index: u32,
    /// The formula stated for this step; `None` for skeletons produced by
    /// [`compact`].
    pub formula: Option<Formula>,
    pub body: Body,
    pub goal: bool,
    /// Free-form annotation carried through from proof files.
    pub note: Option<String>,
}

impl Step {
    pub fn is_axiom(&self) -> bool {
        matches!(self.body, Body::Axiom)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompactProof {
    steps: Vec<Step>,
}

impl CompactProof {
    /// Validates ordering and references.
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        let mut seen: BTreeMap<u32, bool> = BTreeMap::new();
        for s in &steps {
            if let Some((&last, _)) = seen.last_key_value() {
                if s.index <= last {
                    return Err(Error::InvalidProof(format!("step {} is not after step {last}", s.index)));
                }
            }
            if let Body::Derived(d) = &s.body {
                for p in d.prims() {
                    if let PrimSym::Num(k) = p {
                        if !seen.contains_key(&k) {
                            return Err(Error::InvalidProof(format!(
                                "step {} refers to {k}, which is not an earlier step",
                                s.index
                            )));
                        }
                    }
                }
            }
            seen.insert(s.index, s.is_axiom());
        }
        if !steps.iter().any(Step::is_axiom) {
            return Err(Error::InvalidProof("no axiom step".into()));
        }
        Ok(CompactProof { steps })
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn step(&self, index: u32) -> Option<&Step> {
        self.steps.iter().find(|s| s.index == index)
    }

    pub fn axioms(&self) -> impl Iterator<Item = &Step> {
        self.steps.iter().filter(|s| s.is_axiom())
    }

    pub fn derived(&self) -> impl Iterator<Item = &Step> {
        self.steps.iter().filter(|s| !s.is_axiom())
    }

    /// Goal steps; if none is marked, the last step.
    pub fn goals(&self) -> Vec<&Step> {
        let marked: Vec<&Step> = self.steps.iter().filter(|s| s.goal).collect();
        if marked.is_empty() {
            self.steps.last().into_iter().collect()
        } else {
            marked
        }
    }

    /// The D-term of step `index` over axiom step indices, with references to
    /// derived steps unfolded.
    pub fn expand(&self, index: u32) -> Result<DTerm> {
        let mut memo = HashMap::new();
        self.expand_memo(index, &mut memo)
    }

    /// Expansions of all steps, in step order.
    pub fn expand_all(&self) -> Result<Vec<(u32, DTerm)>> {
        let mut memo = HashMap::new();
        self.steps.iter().map(|s| Ok((s.index, self.expand_memo(s.index, &mut memo)?))).collect()
    }

    fn expand_memo(&self, index: u32, memo: &mut HashMap<u32, DTerm>) -> Result<DTerm> {
        if let Some(d) = memo.get(&index) {
            return Ok(d.clone());
        }
        let step = self.step(index).ok_or(Error::UnknownStep(index))?;
        let d = match &step.body {
            Body::Axiom => DTerm::num(index),
            Body::Derived(body) => {
                let mut refs = HashMap::new();
                for p in body.prims() {
                    if let PrimSym::Num(k) = p {
                        refs.insert(k, self.expand_memo(k, memo)?);
                    }
                }
                body.map_prims(&|s| match s {
                    PrimSym::Num(k) => refs.get(&k).cloned(),
                    PrimSym::N => None,
                })
            }
        };
        memo.insert(index, d.clone());
        Ok(d)
    }
}

/// The minimal DAG of `roots` as a proof skeleton: one axiom step per
/// primitive number, then one derived step per distinct compound subterm in
/// first-visit postorder. Derived steps are numbered after the largest
/// primitive. Roots are marked as goals.
pub fn compact(roots: &[DTerm]) -> CompactProof {
    let subs = crate::dterm::subterms_of(roots);
    let mut prims: Vec<u32> = subs
        .iter()
        .filter_map(|d| match d.prim_sym() {
            Some(PrimSym::Num(k)) => Some(k),
            _ => None,
        })
        .collect();
    prims.sort();
    let mut steps: Vec<Step> = prims
        .iter()
        .map(|&k| Step {
            index: k,
            formula: None,
            body: Body::Axiom,
            goal: roots.iter().any(|r| r.prim_sym() == Some(PrimSym::Num(k))),
            note: None,
        })
        .collect();
    let mut next = prims.last().copied().unwrap_or(0) + 1;
    let mut refs: HashMap<u64, DTerm> = HashMap::new();
    for d in &subs {
        if let Kind::D(a, b) = d.kind() {
            let r = |x: &DTerm| refs.get(&x.id()).cloned().unwrap_or_else(|| x.clone());
            let body = DTerm::d(&r(a), &r(b));
            refs.insert(d.id(), DTerm::num(next));
            steps.push(Step { index: next, formula: None, body: Body::Derived(body), goal: roots.contains(d), note: None });
            next += 1;
        }
    }
    CompactProof { steps }
}
