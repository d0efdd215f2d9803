//! A mutable term store for unification.
//!
//! Terms live in a flat arena of cells. Variables are bound destructively and
//! every binding is recorded on a trail so that a search can undo back to a
//! mark. Terms are shared freely; the resolved form of a term is a DAG, which
//! keeps the in-place theorems of large proofs (tree sizes in the thousands)
//! cheap to build and to measure.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::NotUnifiable;
use crate::formula::{Formula, VarId};

pub type TermId = u32;

#[derive(Clone, Copy, Debug)]
enum Cell {
    Var(Option<TermId>),
    Const(u32),
    Imp(TermId, TermId),
}

/// A view of a dereferenced term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Node {
    Var(TermId),
    Const(u32),
    Imp(TermId, TermId),
}

/// Marker for [`Bank::rollback`].
#[derive(Clone, Copy, Debug)]
pub struct Checkpoint {
    cells: usize,
    trail: usize,
    next_const: u32,
}

/// Variables without a name resolve to plain variables from this code on, so
/// they never clash with parsed names in practice.
const ANON_BASE: u32 = 1 << 30;

#[derive(Default)]
pub struct Bank {
    cells: Vec<Cell>,
    trail: Vec<TermId>,
    names: HashMap<TermId, VarId>,
    next_const: u32,
    stamps: Vec<u32>,
    stamp: u32,
}

impl Bank {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    fn push(&mut self, c: Cell) -> TermId {
        let id = self.cells.len() as TermId;
        self.cells.push(c);
        id
    }

    pub fn fresh_var(&mut self) -> TermId {
        self.push(Cell::Var(None))
    }

    pub fn named_var(&mut self, name: VarId) -> TermId {
        let id = self.fresh_var();
        self.names.insert(id, name);
        id
    }

    pub fn constant(&mut self, c: u32) -> TermId {
        self.next_const = self.next_const.max(c + 1);
        self.push(Cell::Const(c))
    }

    /// A constant distinct from every constant created so far.
    pub fn fresh_const(&mut self) -> TermId {
        let c = self.next_const;
        self.next_const += 1;
        self.push(Cell::Const(c))
    }

    pub fn imp(&mut self, a: TermId, b: TermId) -> TermId {
        self.push(Cell::Imp(a, b))
    }

    /// Loads `f`, sharing variables through `vars`. Constants keep their
    /// numbers.
    pub fn load(&mut self, f: &Formula, vars: &mut HashMap<VarId, TermId>) -> TermId {
        match f {
            Formula::Var(v) => {
                if let Some(&id) = vars.get(v) {
                    id
                } else {
                    let id = self.named_var(v.clone());
                    vars.insert(v.clone(), id);
                    id
                }
            }
            Formula::Const(c) => self.constant(*c),
            Formula::Imp(a, b) => {
                let a = self.load(a, vars);
                let b = self.load(b, vars);
                self.imp(a, b)
            }
        }
    }

    /// Loads a renamed-apart copy of `f`: fresh anonymous variables, and a
    /// fresh constant for every distinct constant.
    pub fn load_fresh(&mut self, f: &Formula) -> TermId {
        let mut vars = HashMap::new();
        let mut consts = HashMap::new();
        self.load_fresh_with(f, &mut vars, &mut consts)
    }

    pub fn load_fresh_with(
        &mut self,
        f: &Formula,
        vars: &mut HashMap<VarId, TermId>,
        consts: &mut HashMap<u32, TermId>,
    ) -> TermId {
        match f {
            Formula::Var(v) => {
                if let Some(&id) = vars.get(v) {
                    id
                } else {
                    let id = self.fresh_var();
                    vars.insert(v.clone(), id);
                    id
                }
            }
            Formula::Const(c) => {
                if let Some(&id) = consts.get(c) {
                    id
                } else {
                    let id = self.fresh_const();
                    consts.insert(*c, id);
                    id
                }
            }
            Formula::Imp(a, b) => {
                let a = self.load_fresh_with(a, vars, consts);
                let b = self.load_fresh_with(b, vars, consts);
                self.imp(a, b)
            }
        }
    }

    pub fn deref(&self, mut id: TermId) -> TermId {
        while let Cell::Var(Some(next)) = self.cells[id as usize] {
            id = next;
        }
        id
    }

    pub fn node(&self, id: TermId) -> Node {
        let id = self.deref(id);
        match self.cells[id as usize] {
            Cell::Var(_) => Node::Var(id),
            Cell::Const(c) => Node::Const(c),
            Cell::Imp(a, b) => Node::Imp(a, b),
        }
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint { cells: self.cells.len(), trail: self.trail.len(), next_const: self.next_const }
    }

    /// Undoes all bindings and drops all cells created since `cp`.
    pub fn rollback(&mut self, cp: Checkpoint) {
        for id in self.trail.drain(cp.trail..).rev() {
            if (id as usize) < cp.cells {
                self.cells[id as usize] = Cell::Var(None);
            }
        }
        if self.cells.len() > cp.cells {
            for id in cp.cells..self.cells.len() {
                self.names.remove(&(id as TermId));
            }
            self.cells.truncate(cp.cells);
        }
        self.next_const = cp.next_const;
    }

    fn bind(&mut self, v: TermId, t: TermId) {
        self.cells[v as usize] = Cell::Var(Some(t));
        self.trail.push(v);
    }

    fn next_stamp(&mut self) -> u32 {
        if self.stamps.len() < self.cells.len() {
            self.stamps.resize(self.cells.len(), 0);
        }
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.stamps.iter_mut().for_each(|s| *s = 0);
            self.stamp = 1;
        }
        self.stamp
    }

    /// Does variable `v` (unbound) occur in `t`?
    fn occurs(&mut self, v: TermId, t: TermId) -> bool {
        let stamp = self.next_stamp();
        let mut stack = vec![t];
        while let Some(t) = stack.pop() {
            let t = self.deref(t);
            if t == v {
                return true;
            }
            if self.stamps[t as usize] == stamp {
                continue;
            }
            self.stamps[t as usize] = stamp;
            if let Cell::Imp(a, b) = self.cells[t as usize] {
                stack.push(b);
                stack.push(a);
            }
        }
        false
    }

    /// Unifies `a` and `b` with occurs check. On failure, bindings made so far
    /// stay in place; callers roll back to a checkpoint.
    pub fn unify(&mut self, a: TermId, b: TermId) -> Result<(), NotUnifiable> {
        let mut stack = vec![(a, b)];
        while let Some((a, b)) = stack.pop() {
            let a = self.deref(a);
            let b = self.deref(b);
            if a == b {
                continue;
            }
            match (self.cells[a as usize], self.cells[b as usize]) {
                (Cell::Var(_), Cell::Var(_)) => self.bind(a, b),
                (Cell::Var(_), _) => {
                    if self.occurs(a, b) {
                        return Err(NotUnifiable);
                    }
                    self.bind(a, b);
                }
                (_, Cell::Var(_)) => {
                    if self.occurs(b, a) {
                        return Err(NotUnifiable);
                    }
                    self.bind(b, a);
                }
                (Cell::Const(x), Cell::Const(y)) => {
                    if x != y {
                        return Err(NotUnifiable);
                    }
                }
                (Cell::Imp(a1, a2), Cell::Imp(b1, b2)) => {
                    stack.push((a2, b2));
                    stack.push((a1, b1));
                }
                _ => return Err(NotUnifiable),
            }
        }
        Ok(())
    }

    /// Unifies, rolling back all effects on failure.
    pub fn try_unify(&mut self, a: TermId, b: TermId) -> Result<(), NotUnifiable> {
        let cp = self.checkpoint();
        let r = self.unify(a, b);
        if r.is_err() {
            self.rollback(cp);
        }
        r
    }

    /// The name an unbound variable cell resolves to.
    pub fn var_name(&self, id: TermId) -> VarId {
        self.names.get(&id).cloned().unwrap_or(VarId::Plain(ANON_BASE + id))
    }

    /// The fully dereferenced formula of `id`. `memo` may be reused between
    /// calls as long as no bindings change in between.
    pub fn resolve(&self, id: TermId, memo: &mut HashMap<TermId, Formula>) -> Formula {
        let id = self.deref(id);
        if let Some(f) = memo.get(&id) {
            return f.clone();
        }
        // Explicit stack: resolved terms can be deep.
        let mut stack = vec![(id, false)];
        while let Some((t, expanded)) = stack.pop() {
            if memo.contains_key(&t) {
                continue;
            }
            match self.cells[t as usize] {
                Cell::Var(_) => {
                    memo.insert(t, Formula::Var(self.var_name(t)));
                }
                Cell::Const(c) => {
                    memo.insert(t, Formula::Const(c));
                }
                Cell::Imp(a, b) => {
                    let (a, b) = (self.deref(a), self.deref(b));
                    if expanded {
                        let f = Formula::Imp(Arc::new(memo[&a].clone()), Arc::new(memo[&b].clone()));
                        memo.insert(t, f);
                    } else {
                        stack.push((t, true));
                        stack.push((b, false));
                        stack.push((a, false));
                    }
                }
            }
        }
        memo[&id].clone()
    }

    pub fn resolve_one(&self, id: TermId) -> Formula {
        self.resolve(id, &mut HashMap::new())
    }

    /// Tree size (number of implications) of the resolved term.
    pub fn tree_size(&self, id: TermId, memo: &mut HashMap<TermId, u64>) -> u64 {
        self.measure(id, memo, |a, b| 1 + a + b)
    }

    /// Height of the resolved term.
    pub fn height(&self, id: TermId, memo: &mut HashMap<TermId, u64>) -> u64 {
        self.measure(id, memo, |a, b| 1 + a.max(b))
    }

    fn measure(&self, id: TermId, memo: &mut HashMap<TermId, u64>, combine: impl Fn(u64, u64) -> u64) -> u64 {
        let id = self.deref(id);
        let mut stack = vec![(id, false)];
        while let Some((t, expanded)) = stack.pop() {
            if memo.contains_key(&t) {
                continue;
            }
            match self.cells[t as usize] {
                Cell::Imp(a, b) => {
                    let (a, b) = (self.deref(a), self.deref(b));
                    if expanded {
                        let v = combine(memo[&a], memo[&b]);
                        memo.insert(t, v);
                    } else {
                        stack.push((t, true));
                        stack.push((b, false));
                        stack.push((a, false));
                    }
                }
                _ => {
                    memo.insert(t, 0);
                }
            }
        }
        memo[&id]
    }

    /// A copy of the resolved term `id` in which unbound variables are replaced
    /// by fresh ones (consistently through `vars`). Constants are shared.
    pub fn copy(&mut self, id: TermId, vars: &mut HashMap<TermId, TermId>) -> TermId {
        let id = self.deref(id);
        match self.cells[id as usize] {
            Cell::Var(_) => {
                if let Some(&v) = vars.get(&id) {
                    v
                } else {
                    let v = self.fresh_var();
                    vars.insert(id, v);
                    v
                }
            }
            Cell::Const(_) => id,
            Cell::Imp(a, b) => {
                let a = self.copy(a, vars);
                let b = self.copy(b, vars);
                self.imp(a, b)
            }
        }
    }
}
