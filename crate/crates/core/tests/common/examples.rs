//! Worked examples: pairings and unifiers of a small D-term, sc-size,
//! compaction orderings and subproof replacement. Shared by the worked-example
//! tests and the acceptance harness.

use cdterm::calc::{ipt, mgt, pairings, AxiomAssignment};
use cdterm::dterm::{geq_c, gt_c};
use cdterm::subst::{is_variant, subsumed_by, unify, Substitution};
use cdterm::{DTerm, Formula, Position, VarId};

fn f(s: &str) -> Formula {
    s.parse().unwrap()
}

fn dt(s: &str) -> DTerm {
    s.parse().unwrap()
}

fn pos(s: &str) -> Position {
    s.parse().unwrap()
}

fn y(p: &str) -> Formula {
    Formula::Var(VarId::Y(pos(p)))
}

fn x(i: u32, p: &str) -> Formula {
    Formula::Var(VarId::X(i, pos(p)))
}

fn imp(a: Formula, b: Formula) -> Formula {
    Formula::imp(a, b)
}

/// `C a C b a` with the axiom variables of leaf `p`.
fn simp_at(p: &str) -> Formula {
    imp(x(1, p), imp(x(2, p), x(1, p)))
}

/// Packs formulas into one right-nested implication, so that a list of
/// images can be compared up to a single renaming.
fn tuple(items: &[Formula]) -> Formula {
    items.iter().rev().cloned().reduce(|acc, t| imp(t, acc)).unwrap()
}

fn images(sigma: &Substitution, vars: &[Formula]) -> Formula {
    tuple(&vars.iter().map(|v| sigma.apply(v)).collect::<Vec<_>>())
}

fn compound_set(d: &DTerm) -> Vec<String> {
    let mut v: Vec<String> = d.strict_compound_subterms().iter().map(|e| e.to_string()).collect();
    v.sort();
    v
}

fn strs(items: &[&str]) -> Vec<String> {
    let mut v: Vec<String> = items.iter().map(|s| s.to_string()).collect();
    v.sort();
    v
}

pub fn pairings_unifiers_ipt_and_mgt() {
    let alpha = AxiomAssignment::single(&f("CpCqp"));
    let d = dt("DD111");
    let ps = pairings(&d, &alpha).unwrap();
    let positions: Vec<String> = ps.iter().map(|p| p.pos.to_string()).collect();
    assert_eq!(positions.len(), 5);
    assert_eq!(ps[0].left, y("1"));
    assert_eq!(ps[0].right, imp(y("2"), y("")));
    let leaf = ps.iter().find(|p| p.pos == pos("1.1")).unwrap();
    assert_eq!(leaf.right, simp_at("1.1"));

    let pairs: Vec<(Formula, Formula)> = ps.iter().map(|p| (p.left.clone(), p.right.clone())).collect();
    let sigma = unify(&pairs).unwrap();
    let vars = [
        y(""),
        y("1"),
        y("1.1"),
        y("1.2"),
        y("2"),
        x(1, "1.1"),
        x(2, "1.1"),
        x(1, "1.2"),
        x(2, "1.2"),
        x(1, "2"),
        x(2, "2"),
    ];
    let s12 = simp_at("1.2");
    let s2 = simp_at("2");
    let expected = Substitution::from_pairs([
        (VarId::Y(pos("")), s12.clone()),
        (VarId::Y(pos("1")), imp(s2.clone(), s12.clone())),
        (VarId::Y(pos("1.1")), imp(s12.clone(), imp(s2.clone(), s12.clone()))),
        (VarId::Y(pos("1.2")), s12.clone()),
        (VarId::Y(pos("2")), s2.clone()),
        (VarId::X(1, pos("1.1")), s12.clone()),
        (VarId::X(2, pos("1.1")), s2.clone()),
    ]);
    assert!(is_variant(&images(&sigma, &vars), &images(&expected, &vars)));
    assert!(sigma.is_idempotent());

    let d1 = dt("D11");
    let ps1 = pairings(&d1, &alpha).unwrap();
    let pairs1: Vec<(Formula, Formula)> = ps1.iter().map(|p| (p.left.clone(), p.right.clone())).collect();
    let sigma1 = unify(&pairs1).unwrap();
    let vars1 = [y(""), y("1"), y("2"), x(1, "1"), x(2, "1"), x(1, "2"), x(2, "2")];
    let s2 = simp_at("2");
    let expected1 = Substitution::from_pairs([
        (VarId::Y(pos("")), imp(x(2, "1"), s2.clone())),
        (VarId::Y(pos("1")), imp(s2.clone(), imp(x(2, "1"), s2.clone()))),
        (VarId::Y(pos("2")), s2.clone()),
        (VarId::X(1, pos("1")), s2.clone()),
    ]);
    assert!(is_variant(&images(&sigma1, &vars1), &images(&expected1, &vars1)));

    let ipt1 = ipt(&d, &pos("1"), &alpha).unwrap().unwrap();
    assert!(is_variant(&ipt1, &f("CCpCqpCrCsr")));
    let m1 = mgt(&d1, &alpha).unwrap().unwrap();
    assert!(is_variant(&m1, &f("CpCqCrq")));
    assert!(subsumed_by(&ipt1, &m1) && !subsumed_by(&m1, &ipt1));
    assert!(is_variant(&mgt(&d, &alpha).unwrap().unwrap(), &f("CpCqp")));
}

pub fn sc_size_examples() {
    let d = dt("DDD11D11DD111");
    let mut subs: Vec<String> = d.subterms().iter().map(|e| e.to_string()).collect();
    subs.sort();
    assert_eq!(subs, strs(&["1", "D11", "DD111", "DD11D11", "DDD11D11DD111"]));
    assert_eq!(d.sc_size(), 9);

    let d = dt("DDDDD11111D1D1D1D11");
    let e = dt("DDDDDDD11111111");
    assert_eq!((d.c_size(), d.sc_size()), (8, 27));
    assert_eq!((e.c_size(), e.sc_size()), (7, 28));
}

pub fn compaction_ordering_examples() {
    // (d, e, strict: d >c e)
    let holds = [
        ("1", "D11", false),
        ("D1D1D11", "DD1D111", false),
        ("D1D1D11", "DD111", true),
        ("D1D1D1D11", "DD1D11D1D11", true),
        ("D1D2D33", "D4D33", true),
    ];
    for (d, e, strict) in holds {
        let (d, e) = (dt(d), dt(e));
        assert!(geq_c(&d, &e), "{d} ≥c {e}");
        assert_eq!(gt_c(&d, &e), strict, "{d} >c {e}");
        assert!(!d.contains(&e));
    }
    let sets = [
        ("1", vec![], vec![]),
        ("D1D1D11", vec!["D11", "D1D11"], vec!["D11", "D1D11"]),
        ("D1D1D1D11", vec!["D11", "D1D11", "D1D1D11"], vec!["D11", "D1D11"]),
        ("D1D2D33", vec!["D33", "D2D33"], vec!["D33"]),
    ];
    assert_eq!(compound_set(&dt(sets[0].0)), strs(&sets[0].1));
    assert_eq!(compound_set(&dt("DD1D111")), strs(&sets[1].2));
    assert_eq!(compound_set(&dt(sets[1].0)), strs(&sets[1].1));
    assert_eq!(compound_set(&dt(sets[2].0)), strs(&sets[2].1));
    assert_eq!(compound_set(&dt("DD1D11D1D11")), strs(&sets[2].2));
    assert_eq!(compound_set(&dt(sets[3].0)), strs(&sets[3].1));
    assert_eq!(compound_set(&dt("D4D33")), strs(&sets[3].2));

    // Subterm without compaction ordering.
    assert!(dt("D11").contains(&dt("1")) && !gt_c(&dt("D11"), &dt("1")));

    // Larger compacted size without ≥c.
    for (d, e, sd, se) in [
        ("D1D1D1D11", "D1DD111", vec!["D11", "D1D11", "D1D1D11"], vec!["D11", "DD111"]),
        ("D1D2D33", "D4D55", vec!["D33", "D2D33"], vec!["D55"]),
    ] {
        let (d, e) = (dt(d), dt(e));
        assert!(d.c_size() > e.c_size());
        assert!(!geq_c(&d, &e));
        assert_eq!(compound_set(&d), strs(&sd));
        assert_eq!(compound_set(&e), strs(&se));
    }
}

pub fn replacement_examples() {
    let d = dt("DD1D11D1D1D11");
    let e = dt("D1D1D11");
    let e2 = dt("DD111");
    assert!(gt_c(&e, &e2));
    let d2 = d.replace_all(&e, &e2);
    assert_eq!(d2, dt("DD1D11DD111"));
    assert_eq!((d.c_size(), d2.c_size()), (4, 4));
    assert_eq!((d.sc_size(), d2.sc_size()), (10, 9));

    let d = dt("DDD1D1D111DD1D1D111");
    let e = dt("D1D11");
    let e2 = dt("D11");
    assert!(gt_c(&e, &e2));
    let d2 = d.replace_all(&e, &e2);
    assert_eq!(d2, dt("DDD1D111DD1D111"));
    assert_eq!((d.c_size(), d2.c_size()), (5, 4));
    assert_eq!(d2.occurrences(&e).len(), 2);
    // Replacing a single occurrence does not shrink.
    let first = d.occurrences(&e)[0].clone();
    let d3 = d.replace_at(&first, &e2).unwrap();
    assert_eq!(d3, dt("DDD1D111DD1D1D111"));
    assert_eq!(d3.c_size(), 6);
    let mut subs = compound_set(&d3);
    subs.push(d3.to_string());
    subs.sort();
    assert_eq!(subs, strs(&["D11", "D1D11", "D1D1D11", "DD1D111", "DD1D1D111", "DDD1D111DD1D1D111"]));
}

pub fn all() -> Vec<(&'static str, fn())> {
    vec![
        ("pairings_unifiers_ipt_and_mgt", pairings_unifiers_ipt_and_mgt),
        ("sc_size_examples", sc_size_examples),
        ("compaction_ordering_examples", compaction_ordering_examples),
        ("replacement_examples", replacement_examples),
    ]
}
