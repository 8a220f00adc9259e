mod common;

use std::time::Duration;

use common::*;
use gwpo::algebra::{Algebra, AlgebraKind, Interp};
use gwpo::encode::{encode_orientation, Cmp, Encoding, Formula, LinExpr, OrderClass, Registry, SearchSpace};
use gwpo::orders::{gwpo_gt, orients, wpo_gt};
use gwpo::smt::{decode_model, emit_encoding, emit_smtlib, model_values, solve, Model, SolverVerdict};
use gwpo::{parse_trs, Symbol, Trs};

fn space(order: OrderClass, interp: AlgebraKind) -> SearchSpace {
    SearchSpace::new(order, interp).unwrap()
}

fn solve_encoding(enc: &Encoding) -> SolverVerdict {
    solve(&emit_encoding(enc), &solver())
}

fn sat_model(enc: &Encoding) -> Model {
    match solve_encoding(enc) {
        SolverVerdict::Sat(m) => m,
        other => panic!("expected sat, got {other:?}"),
    }
}

fn div_system() -> Trs {
    parse_trs(&corpus_text("div.trs")).unwrap()
}

#[test]
fn fgh_system_is_satisfiable_and_the_model_orients_both_rules() {
    let trs = parse_trs(&corpus_text("ex1_fgh.trs")).unwrap();
    let enc = encode_orientation(&trs, space(OrderClass::Wpo, AlgebraKind::Linear)).unwrap();
    let (alg, prec) = decode_model(&sat_model(&enc), &enc).unwrap();
    assert!(alg.is_simple());
    assert!(orients(|s, t| wpo_gt(&alg, &prec, s, t), &trs).unwrap().all_oriented());
}

#[test]
fn div_has_no_simple_orientation() {
    let trs = div_system();
    for interp in [AlgebraKind::Linear, AlgebraKind::MaxPlus] {
        let enc = encode_orientation(&trs, space(OrderClass::Wpo, interp)).unwrap();
        assert!(enc.space.force_simple);
        assert_eq!(solve_encoding(&enc), SolverVerdict::Unsat, "{interp}");
    }
}

#[test]
fn div_gwpo_model_is_verified() {
    let trs = div_system();
    let enc = encode_orientation(&trs, space(OrderClass::Gwpo, AlgebraKind::Linear)).unwrap();
    let (alg, prec) = decode_model(&sat_model(&enc), &enc).unwrap();
    assert!(orients(|s, t| gwpo_gt(&alg, &prec, s, t), &trs).unwrap().all_oriented());
}

fn div_reference_algebra() -> Algebra<i64> {
    let mut a = Algebra::new(AlgebraKind::Linear);
    let sym = Symbol::new;
    a.linear(sym("0", 0), 0, vec![]).unwrap();
    a.linear(sym("s", 1), 1, vec![1]).unwrap();
    a.linear(sym("p", 1), 0, vec![1]).unwrap();
    a.linear(sym("minus", 2), 0, vec![1, 0]).unwrap();
    a.linear(sym("div", 2), 0, vec![1, 0]).unwrap();
    a.linear(sym("0", 0).marked(), 0, vec![]).unwrap();
    a.linear(sym("s", 1).marked(), 0, vec![0]).unwrap();
    a.linear(sym("p", 1).marked(), 0, vec![0]).unwrap();
    a.linear(sym("minus", 2).marked(), 0, vec![0, 1]).unwrap();
    a.linear(sym("div", 2).marked(), 0, vec![1, 1]).unwrap();
    a
}

#[test]
fn reference_interpretations_decode_exactly() {
    let trs = div_system();
    let enc = encode_orientation(&trs, space(OrderClass::Gwpo, AlgebraKind::Linear)).unwrap();
    let ones = ["c0_s", "c1_s", "c1_p", "c1_minus", "c1_div", "c2_minus_sharp", "c1_div_sharp", "c2_div_sharp"];
    let model: Model =
        enc.registry.iter().map(|(_, v)| (v.name.clone(), ones.contains(&v.name.as_str()) as i64)).collect();
    let (alg, prec) = decode_model(&model, &enc).unwrap();
    assert_eq!(alg, div_reference_algebra());
    assert!(prec.iter().all(|(_, l)| l == 0));
    let values = model_values(&model, &enc.registry).unwrap();
    assert!(enc.satisfied_by(&values));
}

#[test]
fn zero_model_decodes_to_the_trivial_algebra() {
    let trs = div_system();
    let enc = encode_orientation(&trs, space(OrderClass::Gwpo, AlgebraKind::MaxPlus)).unwrap();
    let model: Model = enc.registry.iter().map(|(_, v)| (v.name.clone(), 0)).collect();
    let (alg, prec) = decode_model(&model, &enc).unwrap();
    for f in &trs.signature {
        for sym in [f.clone(), f.marked()] {
            let mut trivial = Algebra::new(AlgebraKind::MaxPlus);
            trivial.max_plus(sym.clone(), 0, vec![(0, 0); f.arity]).unwrap();
            assert_eq!(alg.get(&sym), trivial.get(&sym));
        }
        assert_eq!(prec.level(&f.name), 0);
    }
}

#[test]
fn fixed_model_round_trip_is_satisfiable() {
    for (file, order, interp) in [
        ("div.trs", OrderClass::Gwpo, AlgebraKind::Linear),
        ("bits.trs", OrderClass::Gwpo, AlgebraKind::MaxPlus),
        ("ackermann.trs", OrderClass::Wpo, AlgebraKind::MaxPlus),
    ] {
        let trs = parse_trs(&corpus_text(file)).unwrap();
        let enc = encode_orientation(&trs, space(order, interp)).unwrap();
        let values = model_values(&sat_model(&enc), &enc.registry).unwrap();
        assert!(enc.satisfied_by(&values), "{file}");
        let fixed: Vec<Formula> = enc
            .registry
            .iter()
            .map(|(id, _)| Formula::atom(LinExpr::var(id).sub(&LinExpr::constant(values[id])), Cmp::Eq, &enc.registry))
            .collect();
        let script = emit_smtlib(&enc.registry, &enc.defs, &enc.constraint, &fixed);
        assert!(matches!(solve(&script, &solver()), SolverVerdict::Sat(_)), "{file}");
    }
}

#[test]
fn wpo_models_are_gwpo_models() {
    let mut checked = 0;
    for name in ["ex1_fgh.trs", "plus.trs", "assoc.trs", "group.trs", "rev.trs", "log.trs", "double_half.trs"] {
        let trs = parse_trs(&corpus_text(name)).unwrap();
        for interp in [AlgebraKind::Linear, AlgebraKind::MaxPlus] {
            let enc = encode_orientation(&trs, space(OrderClass::Wpo, interp)).unwrap();
            let SolverVerdict::Sat(m) = solve_encoding(&enc) else { continue };
            let (alg, prec) = decode_model(&m, &enc).unwrap();
            assert!(alg.marks_shared() && alg.is_simple());
            assert!(orients(|s, t| gwpo_gt(&alg, &prec, s, t), &trs).unwrap().all_oriented(), "{name} {interp}");
            checked += 1;
        }
    }
    assert!(checked >= 7);
}

#[test]
fn emission_is_deterministic() {
    let trs = parse_trs(&corpus_text("bits.trs")).unwrap();
    let a = emit_encoding(&encode_orientation(&trs, space(OrderClass::Gwpo, AlgebraKind::MaxPlus)).unwrap());
    let b = emit_encoding(&encode_orientation(&trs, space(OrderClass::Gwpo, AlgebraKind::MaxPlus)).unwrap());
    assert_eq!(a, b);
}

#[test]
fn empty_system_is_vacuously_satisfiable() {
    let trs = parse_trs("(VAR x) (RULES)").unwrap();
    let enc = encode_orientation(&trs, space(OrderClass::Gwpo, AlgebraKind::Linear)).unwrap();
    let script = emit_encoding(&enc);
    assert!(script.contains("(assert true)"));
    assert_eq!(solve(&script, &solver()), SolverVerdict::Sat(Model::new()));
}

#[test]
fn contradiction_is_unsat() {
    let script = "(set-logic QF_LIA)\n(declare-fun x () Int)\n(assert (and (> x 0) (< x 0)))\n(check-sat)\n";
    assert_eq!(solve(script, &solver()), SolverVerdict::Unsat);
}

#[test]
fn single_atom_model_is_in_range() {
    let mut reg = Registry::new();
    let c0 = reg.add(gwpo::encode::Role::Constant, &Symbol::new("a", 0), 0, 4);
    let script = emit_smtlib(&reg, &[], &Formula::atom(LinExpr::var(c0), Cmp::Gt, &reg), &[]);
    let SolverVerdict::Sat(m) = solve(&script, &solver()) else { panic!() };
    assert!((1..=4).contains(&m["c0_a"]));
}

#[test]
fn stdin_mode() {
    let mut cfg = solver();
    if cfg.program.ends_with("z3") {
        cfg = gwpo::smt::SolverConfig::from_command(&format!("{} -in", cfg.program)).unwrap();
    }
    assert_eq!(solve("(declare-fun x () Int)(assert (> x x))(check-sat)", &cfg), SolverVerdict::Unsat);
}

fn pigeonhole(n: usize) -> String {
    let mut s = String::from("(set-logic QF_LIA)\n");
    for i in 0..=n {
        for j in 0..n {
            s += &format!("(declare-fun p_{i}_{j} () Bool)\n");
        }
        let any: Vec<_> = (0..n).map(|j| format!("p_{i}_{j}")).collect();
        s += &format!("(assert (or {}))\n", any.join(" "));
    }
    for j in 0..n {
        for a in 0..=n {
            for b in a + 1..=n {
                s += &format!("(assert (not (and p_{a}_{j} p_{b}_{j})))\n");
            }
        }
    }
    s + "(check-sat)\n"
}

#[test]
fn hard_script_times_out() {
    let cfg = solver().with_timeout(Duration::from_secs(1));
    let start = std::time::Instant::now();
    assert_eq!(solve(&pigeonhole(12), &cfg), SolverVerdict::Timeout);
    assert!(start.elapsed() < Duration::from_secs(5));
}

#[test]
fn formula_size_is_bounded_by_subterm_pairs() {
    for entry in std::fs::read_dir(corpus_dir()).unwrap() {
        let trs = parse_trs(&std::fs::read_to_string(entry.unwrap().path()).unwrap()).unwrap();
        if !trs.is_well_formed() {
            continue;
        }
        let pairs: usize = trs.rules.iter().map(|r| r.lhs.size() * r.rhs.size()).sum();
        let width: usize = trs.rules.iter().map(|r| r.lhs.size() + r.rhs.size()).max().unwrap_or(0);
        for interp in [AlgebraKind::Linear, AlgebraKind::MaxPlus] {
            let enc = encode_orientation(&trs, space(OrderClass::Gwpo, interp)).unwrap();
            // each pair contributes a bounded number of comparisons, each linear or quadratic in width
            let per_pair = 8 * (width + 1) * if interp == AlgebraKind::MaxPlus { width + 1 } else { 1 };
            assert!(enc.total_atoms() <= pairs * per_pair + trs.signature.len(), "{} atoms", enc.total_atoms());
        }
    }
}

#[test]
fn kbo_admissibility_excludes_light_unary_symbols_below_the_top() {
    // orientable only with h of weight zero below g
    let trs = parse_trs(&corpus_text("ex1_fgh.trs")).unwrap();
    assert_eq!(
        solve_encoding(&encode_orientation(&trs, space(OrderClass::Kbo, AlgebraKind::Linear)).unwrap()),
        SolverVerdict::Unsat
    );
    assert!(matches!(
        solve_encoding(&encode_orientation(&trs, space(OrderClass::Wpo, AlgebraKind::Linear)).unwrap()),
        SolverVerdict::Sat(_)
    ));
    let trs = parse_trs(&corpus_text("log.trs")).unwrap();
    let enc = encode_orientation(&trs, space(OrderClass::Kbo, AlgebraKind::Linear)).unwrap();
    let (alg, prec) = decode_model(&sat_model(&enc), &enc).unwrap();
    for f in trs.signature.iter().filter(|f| f.arity == 1) {
        let Some(Interp::Linear(l)) = alg.get(f) else { panic!() };
        if *l.constant() == 0 {
            assert!(trs.signature.iter().all(|g| prec.ge(&f.name, &g.name)), "{f}");
        }
    }
}
