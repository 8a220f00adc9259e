#![allow(dead_code)]

use std::path::PathBuf;

use gwpo::algebra::{cmp_ge, cmp_gt, Algebra, AlgebraKind};
use gwpo::smt::SolverConfig;
use gwpo::{Precedence, Symbol, Term};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Solver from `PROVER_SOLVER`, else `z3` on the path.
pub fn solver() -> SolverConfig {
    match std::env::var("PROVER_SOLVER") {
        Ok(cmd) if !cmd.trim().is_empty() => SolverConfig::from_command(&cmd).expect("solver command"),
        _ => SolverConfig::z3(),
    }
}

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus_text(name: &str) -> String {
    std::fs::read_to_string(corpus_dir().join(name)).unwrap()
}

pub fn signature() -> Vec<Symbol> {
    vec![Symbol::new("f", 2), Symbol::new("g", 1), Symbol::new("h", 1), Symbol::new("a", 0), Symbol::new("b", 0)]
}

pub const VARS: [&str; 2] = ["x", "y"];

/// Random term with at most `size` symbol and variable occurrences.
pub fn term(rng: &mut impl Rng, size: usize) -> Term {
    let sig = signature();
    let fits: Vec<_> = sig.iter().filter(|f| f.arity < size).collect();
    if size <= 1 || rng.gen_bool(0.2) {
        return if rng.gen_bool(0.5) {
            Term::var(*VARS.choose(rng).unwrap())
        } else {
            Term::constant(if rng.gen_bool(0.5) { "a" } else { "b" })
        };
    }
    let f = fits.choose(rng).unwrap();
    let mut budget = size - 1;
    let mut args = Vec::new();
    for i in 0..f.arity {
        let left = f.arity - i - 1;
        let take = if left == 0 { budget } else { rng.gen_range(1..=budget - left) };
        budget -= take;
        args.push(term(rng, take));
    }
    Term::app(f.name.clone(), args)
}

/// Pair where `t` is often related to `s`: a subterm, a shrunk copy, or a random term.
pub fn term_pair(rng: &mut impl Rng, size: usize) -> (Term, Term) {
    let s = term(rng, size);
    let t = match rng.gen_range(0..4) {
        0 => {
            let subs = s.subterms();
            (*subs.choose(rng).unwrap()).clone()
        }
        1 => {
            let inner = term(rng, size.saturating_sub(2).max(1));
            let g = ["g", "h"].choose(rng).unwrap();
            Term::app(*g, vec![inner])
        }
        _ => term(rng, size),
    };
    (s, t)
}

/// Random algebra on the test signature. `simple` forces simple interpretations with
/// `f# = f`; otherwise marked interpretations are drawn independently from the search class.
pub fn algebra(rng: &mut impl Rng, kind: AlgebraKind, simple: bool) -> Algebra<i64> {
    let mut alg = Algebra::new(kind);
    for f in signature() {
        let syms = if simple { vec![f.clone()] } else { vec![f.clone(), f.marked()] };
        for sym in syms {
            let c0 = rng.gen_range(0..=3);
            match kind {
                AlgebraKind::Linear => {
                    let cs = (0..f.arity)
                        .map(|_| if simple { rng.gen_range(1..=2) } else { rng.gen_range(0..=1) })
                        .collect();
                    alg.linear(sym, c0, cs).unwrap();
                }
                AlgebraKind::MaxPlus => {
                    let cs = (0..f.arity)
                        .map(|_| {
                            if simple {
                                (rng.gen_range(0..=3), 1)
                            } else {
                                (rng.gen_range(-2..=2), rng.gen_range(0..=1))
                            }
                        })
                        .collect();
                    alg.max_plus(sym, c0, cs).unwrap();
                }
            }
        }
    }
    if simple {
        alg.share_marks()
    } else {
        alg
    }
}

pub fn precedence(rng: &mut impl Rng) -> Precedence {
    Precedence::from_levels(signature().into_iter().map(|f| (f.name, rng.gen_range(0..3u32))))
}

pub fn kind(rng: &mut impl Rng) -> AlgebraKind {
    if rng.gen_bool(0.5) {
        AlgebraKind::Linear
    } else {
        AlgebraKind::MaxPlus
    }
}

pub fn a_gt(alg: &Algebra<i64>, s: &Term, t: &Term) -> bool {
    cmp_gt(&alg.eval(s).unwrap(), &alg.eval(t).unwrap()).unwrap()
}

pub fn a_ge(alg: &Algebra<i64>, s: &Term, t: &Term) -> bool {
    cmp_ge(&alg.eval(s).unwrap(), &alg.eval(t).unwrap()).unwrap()
}

/// Marked-root comparisons used by the GWPO order pair.
pub fn a_gt_marked(alg: &Algebra<i64>, s: &Term, t: &Term) -> bool {
    cmp_gt(&alg.eval_marked(s).unwrap(), &alg.eval_marked(t).unwrap()).unwrap()
}

pub fn a_ge_marked(alg: &Algebra<i64>, s: &Term, t: &Term) -> bool {
    cmp_ge(&alg.eval_marked(s).unwrap(), &alg.eval_marked(t).unwrap()).unwrap()
}

/// Lexicographic extension on syntactic equality, written recursively.
pub fn naive_lex(ss: &[Term], ts: &[Term], gt: &dyn Fn(&Term, &Term) -> bool) -> bool {
    match (ss, ts) {
        ([], _) => false,
        (_, []) => true,
        ([s, sr @ ..], [t, tr @ ..]) => {
            if s == t {
                naive_lex(sr, tr, gt)
            } else {
                gt(s, t)
            }
        }
    }
}

/// The WPO definition, transcribed without memoization.
pub fn naive_wpo(alg: &Algebra<i64>, prec: &Precedence, s: &Term, t: &Term) -> bool {
    if a_gt(alg, s, t) {
        return true;
    }
    let Term::App(f, ss) = s else { return false };
    if !a_ge(alg, s, t) {
        return false;
    }
    if ss.iter().any(|si| si == t || naive_wpo(alg, prec, si, t)) {
        return true;
    }
    let Term::App(g, ts) = t else { return false };
    ts.iter().all(|tj| naive_wpo(alg, prec, s, tj))
        && (prec.gt(&f.name, &g.name)
            || (prec.ge(&f.name, &g.name) && naive_lex(ss, ts, &|a, b| naive_wpo(alg, prec, a, b))))
}

/// SPO over the pair given by `qge` / `sgt` on non-variable terms.
pub fn naive_spo(qge: &dyn Fn(&Term, &Term) -> bool, sgt: &dyn Fn(&Term, &Term) -> bool, s: &Term, t: &Term) -> bool {
    let Term::App(_, ss) = s else { return false };
    if ss.iter().any(|si| si == t || naive_spo(qge, sgt, si, t)) {
        return true;
    }
    let Term::App(_, ts) = t else { return false };
    ts.iter().all(|tj| naive_spo(qge, sgt, s, tj))
        && (sgt(s, t) || (qge(s, t) && naive_lex(ss, ts, &|a, b| naive_spo(qge, sgt, a, b))))
}

pub fn naive_pair_qge(alg: &Algebra<i64>, prec: &Precedence, s: &Term, t: &Term) -> bool {
    let (Some(f), Some(g)) = (s.root(), t.root()) else { return false };
    a_gt_marked(alg, s, t) || (a_ge_marked(alg, s, t) && prec.ge(&f.name, &g.name))
}

pub fn naive_pair_sgt(alg: &Algebra<i64>, prec: &Precedence, s: &Term, t: &Term) -> bool {
    let (Some(f), Some(g)) = (s.root(), t.root()) else { return false };
    a_gt_marked(alg, s, t) || (a_ge_marked(alg, s, t) && prec.gt(&f.name, &g.name))
}

/// GWPO: unmarked weak decrease together with SPO over the marked pair.
pub fn naive_gwpo(alg: &Algebra<i64>, prec: &Precedence, s: &Term, t: &Term) -> bool {
    a_ge(alg, s, t) && naive_spo(&|a, b| naive_pair_qge(alg, prec, a, b), &|a, b| naive_pair_sgt(alg, prec, a, b), s, t)
}

/// Algebra of a random kind.
pub fn any_algebra(rng: &mut impl Rng, simple: bool) -> Algebra<i64> {
    let k = kind(rng);
    algebra(rng, k, simple)
}
