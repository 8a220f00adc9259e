mod common;

use common::*;
use gwpo::algebra::{Algebra, AlgebraKind, Interp};
use gwpo::orders::{gwpo_gt, wpo_gt};
use gwpo::{parse_trs, Precedence, Scalar, Symbol};
use num_bigint::BigInt;

/// Converts an `i64` algebra to another scalar type.
fn convert<W: Scalar + From<i64>>(alg: &Algebra<i64>) -> Algebra<W> {
    let mut out = Algebra::new(alg.kind());
    for (sym, interp) in alg.iter() {
        match interp {
            Interp::Linear(l) => out
                .linear(sym.clone(), W::from(*l.constant()), l.coeffs().iter().map(|c| W::from(*c)).collect())
                .unwrap(),
            Interp::MaxPlus(m) => out
                .max_plus(
                    sym.clone(),
                    W::from(*m.constant()),
                    m.args().iter().map(|(c, d)| (W::from(*c), W::from(*d))).collect(),
                )
                .unwrap(),
        }
    }
    out
}

#[test]
fn fgh_system_over_big_integers() {
    let mut a: Algebra<BigInt> = Algebra::new(AlgebraKind::Linear);
    a.linear(Symbol::new("f", 1), 0.into(), vec![1.into()]).unwrap();
    a.linear(Symbol::new("g", 1), 1.into(), vec![1.into()]).unwrap();
    a.linear(Symbol::new("h", 1), 0.into(), vec![1.into()]).unwrap();
    let prec = Precedence::from_chain(&["f", "g", "h"]);
    let trs = parse_trs(&corpus_text("ex1_fgh.trs")).unwrap();
    for r in &trs.rules {
        assert!(wpo_gt(&a, &prec, &r.lhs, &r.rhs).unwrap());
    }
}

#[test]
fn wide_weights_do_not_overflow() {
    let huge = BigInt::from(i64::MAX) * BigInt::from(i64::MAX);
    let mut a: Algebra<BigInt> = Algebra::new(AlgebraKind::MaxPlus);
    a.max_plus(Symbol::new("s", 1), huge.clone(), vec![(huge.clone(), 1.into())]).unwrap();
    a.max_plus(Symbol::new("z", 0), 0.into(), vec![]).unwrap();
    let a = a.share_marks();
    let t = parse_trs("(VAR x) (RULES s(s(x)) -> s(x))").unwrap();
    let r = &t.rules[0];
    let prec = Precedence::new();
    assert!(gwpo_gt(&a, &prec, &r.lhs, &r.rhs).unwrap());
    let nf = a.eval(&r.lhs).unwrap();
    assert!(nf.to_string().contains(&(huge.clone() * BigInt::from(2)).to_string()));
}

#[test]
fn scalar_types_agree_on_random_samples() {
    let mut rng = rng(31);
    for _ in 0..500 {
        let alg = any_algebra(&mut rng, false);
        let prec = precedence(&mut rng);
        let (s, t) = term_pair(&mut rng, 6);
        let small = gwpo_gt(&alg, &prec, &s, &t).unwrap();
        assert_eq!(gwpo_gt(&convert::<i128>(&alg), &prec, &s, &t).unwrap(), small);
        assert_eq!(gwpo_gt(&convert::<BigInt>(&alg), &prec, &s, &t).unwrap(), small);
        assert_eq!(wpo_gt(&convert::<BigInt>(&alg), &prec, &s, &t).unwrap(), wpo_gt(&alg, &prec, &s, &t).unwrap());
    }
}
