//! Substitutions, clean most general unifiers, shifting and matching.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::bank::Bank;
use crate::error::{Error, NotUnifiable};
use crate::formula::{Formula, VarId};
use crate::position::Position;

/// A finite map from variables to formulas without identity bindings.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<VarId, Formula>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarId, Formula)>) -> Self {
        let mut s = Substitution::new();
        for (v, f) in pairs {
            s.insert(v, f);
        }
        s
    }

    /// Adds `v ↦ f`, dropping it if it is the identity.
    pub fn insert(&mut self, v: VarId, f: Formula) {
        if f == Formula::Var(v.clone()) {
            self.map.remove(&v);
        } else {
            self.map.insert(v, f);
        }
    }

    pub fn get(&self, v: &VarId) -> Option<&Formula> {
        self.map.get(v)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarId, &Formula)> {
        self.map.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &VarId> {
        self.map.keys()
    }

    /// Variables occurring in the range.
    pub fn range_vars(&self) -> Vec<VarId> {
        let mut out: Vec<VarId> = self.map.values().flat_map(|f| f.vars()).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Domain and range share no variable.
    pub fn is_idempotent(&self) -> bool {
        self.range_vars().iter().all(|v| !self.map.contains_key(v))
    }

    /// Simultaneous replacement of the bound variables of `f`.
    pub fn apply(&self, f: &Formula) -> Formula {
        if self.map.is_empty() {
            return f.clone();
        }
        match f {
            Formula::Var(v) => self.map.get(v).cloned().unwrap_or_else(|| f.clone()),
            Formula::Const(_) => f.clone(),
            Formula::Imp(a, b) => Formula::imp(self.apply(a), self.apply(b)),
        }
    }

    /// The composition `self` then `other`: `f (self ∘ other) = (f self) other`.
    pub fn then(&self, other: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (v, f) in &self.map {
            out.insert(v.clone(), other.apply(f));
        }
        for (v, f) in &other.map {
            if !self.map.contains_key(v) {
                out.insert(v.clone(), f.clone());
            }
        }
        out
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v} ↦ {t}")?;
        }
        f.write_str("}")
    }
}

/// A clean most general unifier of all `pairs`.
pub fn unify(pairs: &[(Formula, Formula)]) -> Result<Substitution, NotUnifiable> {
    let mut bank = Bank::new();
    let mut vars = HashMap::new();
    for (s, t) in pairs {
        let a = bank.load(s, &mut vars);
        let b = bank.load(t, &mut vars);
        bank.unify(a, b)?;
    }
    let mut memo = HashMap::new();
    let mut sigma = Substitution::new();
    for (v, id) in vars {
        sigma.insert(v, bank.resolve(id, &mut memo));
    }
    Ok(sigma)
}

/// Re-roots every position-indexed variable below `p`.
pub fn shift(p: &Position, f: &Formula) -> Result<Formula, Error> {
    match f {
        Formula::Var(VarId::Y(q)) => Ok(Formula::Var(VarId::Y(p.concat(q)))),
        Formula::Var(VarId::X(i, q)) => Ok(Formula::Var(VarId::X(*i, p.concat(q)))),
        Formula::Var(v @ VarId::Plain(_)) => Err(Error::PlainVariable(v.to_string())),
        Formula::Const(_) => Ok(f.clone()),
        Formula::Imp(a, b) => Ok(Formula::imp(shift(p, a)?, shift(p, b)?)),
    }
}

/// A matcher `σ` with `t σ = s`, if one exists.
pub fn match_formula(s: &Formula, t: &Formula) -> Option<Substitution> {
    let mut map: HashMap<&VarId, &Formula> = HashMap::new();
    let mut stack = vec![(s, t)];
    while let Some((s, t)) = stack.pop() {
        match (s, t) {
            (_, Formula::Var(v)) => match map.get(v) {
                Some(bound) => {
                    if *bound != s {
                        return None;
                    }
                }
                None => {
                    map.insert(v, s);
                }
            },
            (Formula::Const(a), Formula::Const(b)) if a == b => {}
            (Formula::Imp(s1, s2), Formula::Imp(t1, t2)) => {
                stack.push((s2, t2));
                stack.push((s1, t1));
            }
            _ => return None,
        }
    }
    Some(Substitution::from_pairs(map.into_iter().map(|(v, f)| (v.clone(), f.clone()))))
}

/// `s ⊑ t`: `t` subsumes `s`, i.e. `s` is an instance of `t`.
pub fn subsumed_by(s: &Formula, t: &Formula) -> bool {
    match_formula(s, t).is_some()
}

/// `s ≗ t`: equal up to renaming of variables.
pub fn is_variant(s: &Formula, t: &Formula) -> bool {
    s.canonical() == t.canonical()
}
