//! Property bodies and generators shared by the proptest suite and the
//! acceptance harness.

use std::collections::{HashMap, HashSet};

use cdterm::calc::{mgt, mgt_by_pairings, simp_n, AxiomAssignment, Ipts, MgtEngine};
use cdterm::dterm::{enumerate_c_smaller, geq_c, gt_c};
use cdterm::formula::{is_tautology, is_tautology_tableau};
use cdterm::reduction::{c_reduction_step, is_c_regular, reduce_to_regular};
use cdterm::subst::{is_variant, subsumed_by, unify};
use cdterm::{DTerm, Formula, Position, PrimSym, VarId};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub const CASES: u32 = 1000;

fn f(s: &str) -> Formula {
    s.parse().unwrap()
}

/// Axiom assignments exercised by the D-term properties.
pub fn alpha(i: usize) -> AxiomAssignment {
    match i {
        0 => AxiomAssignment::single(&f("CpCqp")),
        1 => AxiomAssignment::single(&f("CCCpqrCqr")),
        2 => AxiomAssignment::single(&f("CCCpqrCCrpCsp")),
        _ => {
            let mut a = AxiomAssignment::single(&f("CpCqp"));
            a.insert(PrimSym::Num(2), &f("CCpCqrCCpqCpr"));
            a
        }
    }
}

pub fn prims_of(i: usize) -> Vec<u32> {
    if i == 3 {
        vec![1, 2]
    } else {
        vec![1]
    }
}

pub fn dterm(prims: Vec<u32>, max_t: u64) -> impl Strategy<Value = DTerm> {
    let leaf = prop::sample::select(prims).prop_map(DTerm::num);
    leaf.prop_recursive(7, 24, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| DTerm::d(&a, &b)))
        .prop_filter("tree size", move |d| d.t_size() <= max_t)
}

/// An axiom assignment index and a D-term with defined MGT under it.
pub fn proof(max_t: u64) -> impl Strategy<Value = (usize, DTerm)> {
    (0..4usize)
        .prop_flat_map(move |i| (Just(i), dterm(prims_of(i), max_t)))
        .prop_filter("defined MGT", |(i, d)| mgt(d, &alpha(*i)).unwrap().is_some())
}

pub fn formula(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop::sample::select(vec!['p', 'q', 'r', 's']).prop_map(Formula::letter);
    leaf.prop_recursive(depth, 16, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| Formula::imp(a, b)))
}

// Textbook Robinson unification over a triangular substitution.

fn walk(t: &Formula, s: &HashMap<VarId, Formula>) -> Formula {
    let mut t = t.clone();
    while let Formula::Var(v) = &t {
        match s.get(v) {
            Some(u) => t = u.clone(),
            None => break,
        }
    }
    t
}

fn occurs(v: &VarId, t: &Formula, s: &HashMap<VarId, Formula>) -> bool {
    match walk(t, s) {
        Formula::Var(w) => w == *v,
        Formula::Const(_) => false,
        Formula::Imp(a, b) => occurs(v, &a, s) || occurs(v, &b, s),
    }
}

fn robinson(pairs: &[(Formula, Formula)]) -> Option<HashMap<VarId, Formula>> {
    let mut s = HashMap::new();
    let mut todo: Vec<(Formula, Formula)> = pairs.to_vec();
    while let Some((a, b)) = todo.pop() {
        match (walk(&a, &s), walk(&b, &s)) {
            (Formula::Var(x), Formula::Var(y)) if x == y => {}
            (Formula::Var(x), t) | (t, Formula::Var(x)) => {
                if occurs(&x, &t, &s) {
                    return None;
                }
                s.insert(x, t);
            }
            (Formula::Const(c), Formula::Const(k)) if c == k => {}
            (Formula::Imp(a1, b1), Formula::Imp(a2, b2)) => {
                todo.push(((*a1).clone(), (*a2).clone()));
                todo.push(((*b1).clone(), (*b2).clone()));
            }
            _ => return None,
        }
    }
    Some(s)
}

fn resolve(t: &Formula, s: &HashMap<VarId, Formula>) -> Formula {
    match walk(t, s) {
        Formula::Imp(a, b) => Formula::imp(resolve(&a, s), resolve(&b, s)),
        other => other,
    }
}

fn tuple(items: impl IntoIterator<Item = Formula>) -> Formula {
    let v: Vec<Formula> = items.into_iter().collect();
    v.into_iter().rev().reduce(|acc, t| Formula::imp(t, acc)).unwrap()
}

/// D-terms over `prims` with at most `max_t` inner nodes.
fn small_terms(prims: &[u32], max_t: u64) -> Vec<DTerm> {
    let mut by_size: Vec<Vec<DTerm>> = vec![prims.iter().map(|&k| DTerm::num(k)).collect()];
    for n in 1..=max_t as usize {
        let mut level = Vec::new();
        for i in 0..n {
            for a in &by_size[i] {
                for b in &by_size[n - 1 - i] {
                    level.push(DTerm::d(a, b));
                }
            }
        }
        by_size.push(level);
    }
    by_size.concat()
}

/// Keeps positions from `ps` such that none is a prefix of another.
fn antichain(mut ps: Vec<Position>) -> Vec<Position> {
    ps.sort_by_key(|p| p.len());
    let mut out: Vec<Position> = Vec::new();
    for p in ps {
        if !out.iter().any(|q| q.is_prefix_of(&p)) {
            out.push(p);
        }
    }
    out
}

fn replace_many(d: &DTerm, ps: &[Position], e: &DTerm) -> DTerm {
    ps.iter().fold(d.clone(), |acc, p| acc.replace_at(p, e).unwrap())
}

pub fn clean_mgu_contract(pairs: Vec<(Formula, Formula)>) -> Result<(), TestCaseError> {
    let vars: HashSet<VarId> = pairs.iter().flat_map(|(a, b)| a.vars().into_iter().chain(b.vars())).collect();
    let sides = || pairs.iter().flat_map(|(a, b)| [a.clone(), b.clone()]);
    match (unify(&pairs), robinson(&pairs)) {
        (Ok(sigma), Some(oracle)) => {
            for (a, b) in &pairs {
                prop_assert_eq!(sigma.apply(a), sigma.apply(b));
            }
            prop_assert!(sigma.is_idempotent());
            prop_assert!(sigma.domain().all(|v| vars.contains(v)));
            prop_assert!(sigma.range_vars().iter().all(|v| vars.contains(v)));
            let mine = tuple(sides().map(|t| sigma.apply(&t)));
            let theirs = tuple(sides().map(|t| resolve(&t, &oracle)));
            prop_assert!(is_variant(&mine, &theirs), "{} vs {}", mine, theirs);
        }
        (Err(_), None) => {}
        (mine, theirs) => prop_assert!(false, "unify {:?} but oracle {:?}", mine.is_ok(), theirs.is_some()),
    }
    Ok(())
}

pub fn engine_agrees_with_pairings((i, d): (usize, DTerm)) -> Result<(), TestCaseError> {
    let a = alpha(i);
    let fast = MgtEngine::new(&a).mgt(&d).unwrap();
    let slow = mgt_by_pairings(&d, &a).unwrap();
    match (fast, slow) {
        (Some(x), Some(y)) => prop_assert!(is_variant(&x, &y)),
        (None, None) => {}
        (x, y) => prop_assert!(false, "{:?} vs {:?}", x, y),
    }
    Ok(())
}

pub fn ipt_subsumed_by_subterm_mgt((i, d): (usize, DTerm)) -> Result<(), TestCaseError> {
    let a = alpha(i);
    let ipts = Ipts::compute(&d, &a).unwrap().unwrap();
    for (p, sub, ipt) in ipts.all() {
        let m = mgt(&sub, &a).unwrap().unwrap();
        prop_assert!(subsumed_by(&ipt, &m), "at {}: {} not below {}", p, ipt, m);
    }
    prop_assert!(is_variant(&ipts.ipt(&Position::root()).unwrap(), &mgt(&d, &a).unwrap().unwrap()));
    Ok(())
}

pub fn replacement_size_monotonicity(d: DTerm) -> Result<(), TestCaseError> {
    for e in d.compound_subterms() {
        for e2 in enumerate_c_smaller(&e) {
            prop_assert!(geq_c(&e, &e2));
            let d2 = d.replace_all(&e, &e2);
            prop_assert!(d2.c_size() <= d.c_size(), "{} [{} -> {}]", d, e, e2);
            if gt_c(&e, &e2) {
                prop_assert!(d2.sc_size() < d.sc_size(), "{} [{} -> {}]", d, e, e2);
            }
        }
    }
    Ok(())
}

pub fn simultaneous_replacement_preserves_mgt((i, d): (usize, DTerm)) -> Result<(), TestCaseError> {
    let a = alpha(i);
    let m = mgt(&d, &a).unwrap().unwrap();
    let ipts = Ipts::compute(&d, &a).unwrap().unwrap().all();
    for e in small_terms(&prims_of(i), 2) {
        let Some(me) = mgt(&e, &a).unwrap() else { continue };
        let ps = antichain(ipts.iter().filter(|(_, _, t)| subsumed_by(t, &me)).map(|(p, _, _)| p.clone()).collect());
        let d2 = replace_many(&d, &ps, &e);
        let m2 = mgt(&d2, &a).unwrap();
        prop_assert!(m2.as_ref().is_some_and(|m2| subsumed_by(&m, m2)), "{} at {:?} by {}", d, ps, e);
    }
    Ok(())
}

pub fn single_replacement_preserves_mgt((i, d): (usize, DTerm)) -> Result<(), TestCaseError> {
    let a = alpha(i);
    let m = mgt(&d, &a).unwrap().unwrap();
    let table: Vec<(DTerm, Formula)> = small_terms(&prims_of(i), 2)
        .into_iter()
        .filter_map(|e| mgt(&e, &a).unwrap().map(|m| (e, m)))
        .collect();
    for p in d.positions() {
        let ms = mgt(&d.at(&p).unwrap(), &a).unwrap().unwrap();
        for (e, me) in &table {
            if subsumed_by(&ms, me) {
                let d2 = d.replace_at(&p, e).unwrap();
                let m2 = mgt(&d2, &a).unwrap();
                prop_assert!(m2.as_ref().is_some_and(|m2| subsumed_by(&m, m2)), "{} at {} by {}", d, p, e);
            }
        }
    }
    Ok(())
}

pub fn c_smaller_cardinality(d: DTerm) -> Result<(), TestCaseError> {
    let p = d.prims().len();
    // A primitive p is ≥c both p and D(p, p).
    let expected = if d.is_prim() { 2 } else { (d.c_size() - 1 + p).pow(2) + p };
    prop_assert_eq!(enumerate_c_smaller(&d).len(), expected);

    // Brute force: grow D-terms over the primitives of d by tree size,
    // extending only terms all of whose compound subterms are strict
    // subterms of d, and count the ones below d.
    let strict: HashSet<u64> = d.strict_compound_subterms().iter().map(DTerm::id).collect();
    let leaves: Vec<DTerm> = d.prims().into_iter().map(DTerm::prim).collect();
    let mut inner: Vec<Vec<DTerm>> = vec![leaves.clone()];
    let mut below: HashSet<u64> = leaves.iter().filter(|e| geq_c(&d, e)).map(DTerm::id).collect();
    for n in 1..=2 * d.t_size() as usize + 1 {
        let mut level = Vec::new();
        for i in 0..n {
            for a in &inner[i] {
                for b in &inner[n - 1 - i] {
                    let e = DTerm::d(a, b);
                    if geq_c(&d, &e) {
                        below.insert(e.id());
                    }
                    if strict.contains(&e.id()) {
                        level.push(e);
                    }
                }
            }
        }
        inner.push(level);
    }
    prop_assert_eq!(below.len(), expected);
    Ok(())
}

pub fn simp_n_preserves_mgt_and_is_idempotent((i, d): (usize, DTerm)) -> Result<(), TestCaseError> {
    let a = alpha(i);
    let m = mgt(&d, &a).unwrap().unwrap();
    let s = simp_n(&d, &a).unwrap();
    prop_assert!(s.t_size() <= d.t_size());
    let ms = mgt(&s, &a).unwrap().unwrap();
    prop_assert!(is_variant(&m, &ms), "{}: {} vs {}", d, m, ms);
    prop_assert_eq!(simp_n(&s, &a).unwrap(), s);
    Ok(())
}

pub fn c_reduction_step_decreases_sc_size((i, d): (usize, DTerm)) -> Result<(), TestCaseError> {
    let a = alpha(i);
    let m = mgt(&d, &a).unwrap().unwrap();
    match c_reduction_step(&d, &a).unwrap() {
        Some(r) => {
            prop_assert!(gt_c(&r.e, &r.e2));
            prop_assert_eq!(&r.d, &d.replace_all(&r.e, &r.e2));
            prop_assert!(r.d.sc_size() < d.sc_size());
            prop_assert!(r.d.c_size() <= d.c_size());
            let m2 = mgt(&r.d, &a).unwrap().unwrap();
            prop_assert!(subsumed_by(&m, &m2));
        }
        None => prop_assert!(is_c_regular(&d, &a).unwrap()),
    }
    Ok(())
}

pub fn reduction_reaches_regular_form((i, d): (usize, DTerm)) -> Result<(), TestCaseError> {
    let a = alpha(i);
    let m = mgt(&d, &a).unwrap().unwrap();
    let r = reduce_to_regular(&d, &a).unwrap();
    prop_assert!(is_c_regular(&r, &a).unwrap());
    prop_assert!(r.c_size() <= d.c_size());
    prop_assert!(subsumed_by(&m, &mgt(&r, &a).unwrap().unwrap()));
    Ok(())
}

pub fn tableau_agrees_with_truth_table(g: Formula) -> Result<(), TestCaseError> {
    prop_assert_eq!(is_tautology_tableau(&g), is_tautology(&g, 16).unwrap());
    Ok(())
}

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

pub fn small_dterm() -> impl Strategy<Value = (usize, DTerm)> {
    (0..4usize).prop_flat_map(|i| (Just(i), dterm(prims_of(i), 8)))
}

/// Every property with `cases` random cases each.
pub fn run_all(cases: u32) -> Vec<(&'static str, Result<(), String>)> {
    vec![
        ("clean_mgu_contract", run(cases, prop::collection::vec((formula(3), formula(3)), 1..4), clean_mgu_contract)),
        ("engine_agrees_with_pairings", run(cases, small_dterm(), engine_agrees_with_pairings)),
        ("ipt_subsumed_by_subterm_mgt", run(cases, proof(10), ipt_subsumed_by_subterm_mgt)),
        ("replacement_size_monotonicity", run(cases, dterm(vec![1, 2], 8), replacement_size_monotonicity)),
        ("simultaneous_replacement_preserves_mgt", run(cases, proof(8), simultaneous_replacement_preserves_mgt)),
        ("single_replacement_preserves_mgt", run(cases, proof(8), single_replacement_preserves_mgt)),
        ("c_smaller_cardinality", run(cases, dterm(vec![1, 2, 3], 8), c_smaller_cardinality)),
        ("simp_n_preserves_mgt_and_is_idempotent", run(cases, proof(10), simp_n_preserves_mgt_and_is_idempotent)),
        ("c_reduction_step_decreases_sc_size", run(cases, proof(10), c_reduction_step_decreases_sc_size)),
        ("reduction_reaches_regular_form", run(cases, proof(10), reduction_reaches_regular_form)),
        ("tableau_agrees_with_truth_table", run(cases, formula(5), tableau_agrees_with_truth_table)),
    ]
}
