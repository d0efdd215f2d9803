//! D-terms: proofs as full binary trees over primitive symbols.
//!
//! Nodes are hash-consed through a global interner, so structurally equal
//! D-terms are the same node. Equality and hashing are by node identity, which
//! makes the compacted-size family of measures set operations over node ids.
//! The [`Ord`] instance is structural: by tree size, then major, then minor.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::{Arc, LazyLock, Mutex};

use crate::error::{Error, ParseError};
use crate::position::Position;

/// A primitive D-term: an axiom label or the special symbol `n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimSym {
    Num(u32),
    N,
}

impl fmt::Display for PrimSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimSym::Num(k) => write!(f, "{k}"),
            PrimSym::N => f.write_str("n"),
        }
    }
}

impl fmt::Debug for PrimSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub enum Kind {
    Prim(PrimSym),
    D(DTerm, DTerm),
}

pub struct DNode {
    id: u64,
    kind: Kind,
    t_size: u64,
    height: u32,
    // Length of the chain of major (resp. minor) edges starting at this node.
    lrun: u32,
    rrun: u32,
    dk_left: u32,
    dk_right: u32,
}

#[derive(Clone)]
pub struct DTerm(Arc<DNode>);

#[derive(PartialEq, Eq, Hash)]
enum Key {
    Prim(PrimSym),
    D(u64, u64),
}

struct Interner {
    nodes: HashMap<Key, DTerm>,
    next: u64,
}

static INTERNER: LazyLock<Mutex<Interner>> =
    LazyLock::new(|| Mutex::new(Interner { nodes: HashMap::new(), next: 0 }));

impl DTerm {
    fn intern(key: Key, make: impl FnOnce(u64) -> DNode) -> DTerm {
        let mut table = INTERNER.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(d) = table.nodes.get(&key) {
            return d.clone();
        }
        let id = table.next;
        table.next += 1;
        let d = DTerm(Arc::new(make(id)));
        table.nodes.insert(key, d.clone());
        d
    }

    pub fn prim(sym: PrimSym) -> DTerm {
        DTerm::intern(Key::Prim(sym), |id| DNode {
            id,
            kind: Kind::Prim(sym),
            t_size: 0,
            height: 0,
            lrun: 0,
            rrun: 0,
            dk_left: 0,
            dk_right: 0,
        })
    }

    pub fn num(k: u32) -> DTerm {
        DTerm::prim(PrimSym::Num(k))
    }

    pub fn n() -> DTerm {
        DTerm::prim(PrimSym::N)
    }

    /// `D(major, minor)`.
    pub fn d(major: &DTerm, minor: &DTerm) -> DTerm {
        DTerm::intern(Key::D(major.id(), minor.id()), |id| {
            let (a, b) = (&major.0, &minor.0);
            let lrun = a.lrun + 1;
            let rrun = b.rrun + 1;
            DNode {
                id,
                kind: Kind::D(major.clone(), minor.clone()),
                t_size: 1 + a.t_size + b.t_size,
                height: 1 + a.height.max(b.height),
                lrun,
                rrun,
                dk_left: lrun.max(a.dk_left).max(b.dk_left),
                dk_right: rrun.max(a.dk_right).max(b.dk_right),
            }
        })
    }

    /// A process-unique identifier of the node.
    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn is_prim(&self) -> bool {
        matches!(self.0.kind, Kind::Prim(_))
    }

    pub fn is_compound(&self) -> bool {
        !self.is_prim()
    }

    pub fn prim_sym(&self) -> Option<PrimSym> {
        match self.0.kind {
            Kind::Prim(s) => Some(s),
            Kind::D(..) => None,
        }
    }

    pub fn args(&self) -> Option<(&DTerm, &DTerm)> {
        match &self.0.kind {
            Kind::D(a, b) => Some((a, b)),
            Kind::Prim(_) => None,
        }
    }

    /// Number of `D` occurrences in the expanded tree.
    pub fn t_size(&self) -> u64 {
        self.0.t_size
    }

    pub fn height(&self) -> u32 {
        self.0.height
    }

    /// Longest run of successive major edges on a root-leaf path.
    pub fn dk_left(&self) -> u32 {
        self.0.dk_left
    }

    /// Longest run of successive minor edges on a root-leaf path.
    pub fn dk_right(&self) -> u32 {
        self.0.dk_right
    }

    /// Distinct subterms (including primitives and `self`) in first-visit
    /// postorder, major before minor.
    pub fn subterms(&self) -> Vec<DTerm> {
        subterms_of(std::slice::from_ref(self))
    }

    pub fn compound_subterms(&self) -> Vec<DTerm> {
        self.subterms().into_iter().filter(DTerm::is_compound).collect()
    }

    /// Compound subterms `e` with `self ▷ e` (strict).
    pub fn strict_compound_subterms(&self) -> Vec<DTerm> {
        self.compound_subterms().into_iter().filter(|e| e != self).collect()
    }

    /// Number of distinct compound subterms.
    pub fn c_size(&self) -> usize {
        c_size_set(std::slice::from_ref(self))
    }

    /// Sum of the compacted sizes of all distinct subterms.
    pub fn sc_size(&self) -> u64 {
        // c-size of a node is its own compound subterm count; computed per node
        // with a shared visitation stamp.
        let subs = self.compound_subterms();
        let mut total = 0u64;
        let mut seen: HashSet<u64> = HashSet::new();
        for e in &subs {
            seen.clear();
            let mut stack = vec![e];
            while let Some(x) = stack.pop() {
                if let Some((a, b)) = x.args() {
                    if seen.insert(x.id()) {
                        stack.push(a);
                        stack.push(b);
                    }
                }
            }
            total += seen.len() as u64;
        }
        total
    }

    /// `c_size == t_size`: every compound subterm occurs exactly once.
    pub fn is_prime(&self) -> bool {
        self.c_size() as u64 == self.t_size()
    }

    /// Primitive symbols occurring in `self`, sorted.
    pub fn prims(&self) -> Vec<PrimSym> {
        let mut out: Vec<PrimSym> = self.subterms().iter().filter_map(DTerm::prim_sym).collect();
        out.sort();
        out
    }

    pub fn contains(&self, e: &DTerm) -> bool {
        if self == e {
            return true;
        }
        if self.t_size() <= e.t_size() {
            return false;
        }
        self.subterms().contains(e)
    }

    /// The subterm at position `p`.
    pub fn at(&self, p: &Position) -> Result<DTerm, Error> {
        let mut d = self.clone();
        for &s in p.steps() {
            let (a, b) = d.args().ok_or_else(|| Error::BadPosition(p.to_string()))?;
            d = if s == 1 { a.clone() } else { b.clone() };
        }
        Ok(d)
    }

    /// All positions of the expanded tree in preorder.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        let mut stack = vec![(self.clone(), Position::root())];
        while let Some((d, p)) = stack.pop() {
            if let Some((a, b)) = d.args() {
                stack.push((b.clone(), p.child(2)));
                stack.push((a.clone(), p.child(1)));
            }
            out.push(p);
        }
        out
    }

    /// Positions at which `e` occurs, in preorder.
    pub fn occurrences(&self, e: &DTerm) -> Vec<Position> {
        let mut out = Vec::new();
        let mut stack = vec![(self.clone(), Position::root())];
        while let Some((d, p)) = stack.pop() {
            if &d == e {
                out.push(p);
                continue;
            }
            if d.t_size() <= e.t_size() {
                continue;
            }
            if let Some((a, b)) = d.args() {
                stack.push((b.clone(), p.child(2)));
                stack.push((a.clone(), p.child(1)));
            }
        }
        out
    }

    /// Simultaneously replaces every occurrence of `e` by `e2`.
    pub fn replace_all(&self, e: &DTerm, e2: &DTerm) -> DTerm {
        fn go(d: &DTerm, e: &DTerm, e2: &DTerm, memo: &mut HashMap<u64, DTerm>) -> DTerm {
            if d == e {
                return e2.clone();
            }
            if let Some(r) = memo.get(&d.id()) {
                return r.clone();
            }
            let r = match d.args() {
                Some((a, b)) if d.t_size() > e.t_size() => DTerm::d(&go(a, e, e2, memo), &go(b, e, e2, memo)),
                _ => d.clone(),
            };
            memo.insert(d.id(), r.clone());
            r
        }
        go(self, e, e2, &mut HashMap::new())
    }

    /// Replaces the subterm at position `p` by `e2`.
    pub fn replace_at(&self, p: &Position, e2: &DTerm) -> Result<DTerm, Error> {
        fn go(d: &DTerm, steps: &[u8], e2: &DTerm, p: &Position) -> Result<DTerm, Error> {
            match steps.split_first() {
                None => Ok(e2.clone()),
                Some((&s, rest)) => {
                    let (a, b) = d.args().ok_or_else(|| Error::BadPosition(p.to_string()))?;
                    Ok(if s == 1 { DTerm::d(&go(a, rest, e2, p)?, b) } else { DTerm::d(a, &go(b, rest, e2, p)?) })
                }
            }
        }
        go(self, p.steps(), e2, p)
    }

    /// Replaces every primitive via `f` (identity where `f` returns `None`).
    pub fn map_prims(&self, f: &impl Fn(PrimSym) -> Option<DTerm>) -> DTerm {
        fn go(d: &DTerm, f: &impl Fn(PrimSym) -> Option<DTerm>, memo: &mut HashMap<u64, DTerm>) -> DTerm {
            if let Some(r) = memo.get(&d.id()) {
                return r.clone();
            }
            let r = match d.kind() {
                Kind::Prim(s) => f(*s).unwrap_or_else(|| d.clone()),
                Kind::D(a, b) => DTerm::d(&go(a, f, memo), &go(b, f, memo)),
            };
            memo.insert(d.id(), r.clone());
            r
        }
        go(self, f, &mut HashMap::new())
    }

    /// Polish notation with dots where digits would otherwise run together.
    pub fn to_polish(&self) -> String {
        let multi = self.subterms().iter().any(|s| matches!(s.prim_sym(), Some(PrimSym::Num(k)) if k >= 10));
        let mut out = String::new();
        // Whether the last emitted token was a leaf, and whether it was a
        // multi-digit number.
        let mut last: Option<bool> = None;
        let mut stack = vec![self.clone()];
        while let Some(d) = stack.pop() {
            match d.kind() {
                Kind::D(a, b) => {
                    if last == Some(true) {
                        out.push('.');
                    }
                    out.push('D');
                    last = None;
                    stack.push(b.clone());
                    stack.push(a.clone());
                }
                Kind::Prim(s) => {
                    if multi && last.is_some() {
                        out.push('.');
                    }
                    out.push_str(&s.to_string());
                    last = Some(matches!(s, PrimSym::Num(k) if *k >= 10));
                }
            }
        }
        out
    }
}

/// Distinct subterms of a set of roots, in first-visit postorder over the
/// roots in the given order (major before minor).
pub fn subterms_of(roots: &[DTerm]) -> Vec<DTerm> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for r in roots {
        let mut stack = vec![(r.clone(), false)];
        while let Some((d, expanded)) = stack.pop() {
            if expanded {
                out.push(d);
                continue;
            }
            if !seen.insert(d.id()) {
                continue;
            }
            stack.push((d.clone(), true));
            if let Some((a, b)) = d.args() {
                stack.push((b.clone(), false));
                stack.push((a.clone(), false));
            }
        }
    }
    out
}

/// Compacted size of a set of D-terms.
pub fn c_size_set(roots: &[DTerm]) -> usize {
    subterms_of(roots).iter().filter(|d| d.is_compound()).count()
}

/// `d ≥c e`: the strict compound subterms of `d` include those of `e`.
pub fn geq_c(d: &DTerm, e: &DTerm) -> bool {
    let sd: HashSet<u64> = d.strict_compound_subterms().iter().map(DTerm::id).collect();
    e.strict_compound_subterms().iter().all(|x| sd.contains(&x.id()))
}

/// `d >c e`: strict inclusion of strict compound subterm sets.
pub fn gt_c(d: &DTerm, e: &DTerm) -> bool {
    let sd = d.strict_compound_subterms();
    let se = e.strict_compound_subterms();
    se.len() < sd.len() && geq_c(d, e)
}

/// All `e` with `d ≥c e` over the primitives of `d`: the primitives of `d`
/// together with every `D(a, b)` where `a` and `b` are strict subterms of `d`
/// or primitives of `d`. Sorted by the structural order.
///
/// For compound `d` there are `(c_size(d) - 1 + |prims(d)|)² + |prims(d)|`
/// of them; a primitive `p` has two, `p` and `D(p, p)`.
pub fn enumerate_c_smaller(d: &DTerm) -> Vec<DTerm> {
    let base: Vec<DTerm> = if d.is_prim() {
        vec![d.clone()]
    } else {
        d.subterms().into_iter().filter(|e| e != d).collect()
    };
    let mut prims: Vec<DTerm> = d.prims().into_iter().map(DTerm::prim).collect();
    // Every primitive of a compound d is a strict subterm, hence in base.
    let mut out: Vec<DTerm> = Vec::with_capacity(base.len() * base.len() + prims.len());
    out.append(&mut prims);
    for a in &base {
        for b in &base {
            out.push(DTerm::d(a, b));
        }
    }
    out.sort();
    out.dedup();
    out
}

impl PartialEq for DTerm {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for DTerm {}

impl Hash for DTerm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state);
    }
}

impl Ord for DTerm {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        match self.t_size().cmp(&other.t_size()) {
            Ordering::Equal => {}
            o => return o,
        }
        match (self.kind(), other.kind()) {
            (Kind::Prim(a), Kind::Prim(b)) => a.cmp(b),
            (Kind::D(a1, b1), Kind::D(a2, b2)) => a1.cmp(a2).then_with(|| b1.cmp(b2)),
            (Kind::Prim(_), Kind::D(..)) => Ordering::Less,
            (Kind::D(..), Kind::Prim(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for DTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_polish())
    }
}

impl fmt::Debug for DTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_polish())
    }
}

/// Parses Polish D-term notation: `D` takes two arguments, `n` is the special
/// primitive, and numbers are decimal. A digit run that touches a dot on
/// either side is one number; otherwise every digit is a number of its own.
pub fn parse_dterm(text: &str) -> Result<DTerm, ParseError> {
    #[derive(Debug)]
    enum Tok {
        D,
        Leaf(PrimSym),
    }
    let bytes = text.as_bytes();
    let mut toks: Vec<(usize, Tok)> = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b'D' => {
                toks.push((i, Tok::D));
                i += 1;
            }
            b'n' => {
                toks.push((i, Tok::Leaf(PrimSym::N)));
                i += 1;
            }
            b'.' => {
                let prev_ok = i > 0 && (bytes[i - 1].is_ascii_digit() || bytes[i - 1] == b'n');
                if !prev_ok {
                    return Err(ParseError::new(i, "dot must follow a number"));
                }
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let dot_before = start > 0 && bytes[start - 1] == b'.';
                let dot_after = i < bytes.len() && bytes[i] == b'.';
                let run = &text[start..i];
                let whole = text.trim() == run;
                if dot_before || dot_after || whole || run.len() == 1 {
                    let k: u32 = run.parse().map_err(|_| ParseError::new(start, "number out of range"))?;
                    if k == 0 {
                        return Err(ParseError::new(start, "primitive 0 is not allowed"));
                    }
                    toks.push((start, Tok::Leaf(PrimSym::Num(k))));
                } else {
                    for (j, ch) in run.bytes().enumerate() {
                        if ch == b'0' {
                            return Err(ParseError::new(start + j, "primitive 0 is not allowed"));
                        }
                        toks.push((start + j, Tok::Leaf(PrimSym::Num((ch - b'0') as u32))));
                    }
                }
            }
            c if c.is_ascii_whitespace() => i += 1,
            _ => return Err(ParseError::new(i, format!("unexpected character {:?}", c as char))),
        }
    }
    enum Frame {
        NeedMajor,
        NeedMinor(DTerm),
    }
    let mut stack: Vec<Frame> = Vec::new();
    let mut result: Option<DTerm> = None;
    for (off, tok) in toks {
        if result.is_some() {
            return Err(ParseError::new(off, "unexpected trailing input"));
        }
        let mut done = match tok {
            Tok::D => {
                stack.push(Frame::NeedMajor);
                continue;
            }
            Tok::Leaf(s) => DTerm::prim(s),
        };
        loop {
            match stack.pop() {
                None => {
                    result = Some(done);
                    break;
                }
                Some(Frame::NeedMajor) => {
                    stack.push(Frame::NeedMinor(done));
                    break;
                }
                Some(Frame::NeedMinor(a)) => done = DTerm::d(&a, &done),
            }
        }
    }
    result.ok_or_else(|| ParseError::new(text.len(), "unexpected end of D-term"))
}

impl FromStr for DTerm {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_dterm(s)
    }
}

/// Measure used by [`enumerate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    Tree,
    Compacted,
}

/// All D-terms over the single primitive `1` with tree size exactly `n`, in
/// structural order.
pub fn enumerate_tree_size(n: u64) -> Vec<DTerm> {
    let mut levels: Vec<Vec<DTerm>> = vec![vec![DTerm::num(1)]];
    for k in 1..=n as usize {
        let mut level = Vec::new();
        for i in 0..k {
            for a in &levels[i] {
                for b in &levels[k - 1 - i] {
                    level.push(DTerm::d(a, b));
                }
            }
        }
        levels.push(level);
    }
    levels.swap_remove(n as usize)
}

/// All D-terms over `1` with compacted size exactly `n`, in structural order.
pub fn enumerate_c_size(n: usize) -> Vec<DTerm> {
    // by_size[k] holds the terms of compacted size k together with their
    // compound subterm id sets.
    let one = DTerm::num(1);
    let mut by_size: Vec<Vec<(DTerm, HashSet<u64>)>> = vec![vec![(one, HashSet::new())]];
    for k in 1..=n {
        let mut level = Vec::new();
        let all: Vec<&(DTerm, HashSet<u64>)> = by_size.iter().flatten().collect();
        for (a, sa) in &all {
            if sa.len() > k - 1 {
                continue;
            }
            for (b, sb) in &all {
                if sb.len() > k - 1 {
                    continue;
                }
                let union = sa.len() + sb.iter().filter(|x| !sa.contains(x)).count();
                if union == k - 1 {
                    let d = DTerm::d(a, b);
                    let mut s: HashSet<u64> = sa.union(sb).copied().collect();
                    s.insert(d.id());
                    level.push((d, s));
                }
            }
        }
        level.sort_by(|x, y| x.0.cmp(&y.0));
        by_size.push(level);
    }
    by_size.swap_remove(n).into_iter().map(|(d, _)| d).collect()
}

/// All prime D-terms over `1` of size exactly `n`: `D(1, e)` for each prime
/// `e` of size `n − 1`, followed by `D(e, 1)`.
pub fn enumerate_prime(n: u64) -> Vec<DTerm> {
    let one = DTerm::num(1);
    let mut level = vec![one.clone()];
    for k in 1..=n {
        if k == 1 {
            level = vec![DTerm::d(&one, &one)];
            continue;
        }
        let mut next = Vec::with_capacity(level.len() * 2);
        next.extend(level.iter().map(|e| DTerm::d(&one, e)));
        next.extend(level.iter().map(|e| DTerm::d(e, &one)));
        level = next;
    }
    level
}

/// Number of prime D-terms over one primitive with size `n`.
pub fn prime_count(n: u64) -> u64 {
    if n == 0 {
        1
    } else {
        1u64 << (n - 1)
    }
}
