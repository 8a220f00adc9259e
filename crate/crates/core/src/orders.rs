//! Decision procedures for the weighted path order (WPO), the lexicographic semantic path
//! order over an order pair (SPO), its monotonic restriction (MSPO) and the generalized
//! weighted path order (GWPO), for a fixed algebra and precedence.
//!
//! Every procedure memoizes on pairs of subterm addresses for the duration of one call, so
//! repeated sub-comparisons are decided once.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::algebra::{cmp_ge, cmp_gt, Algebra, AlgebraError, NormalForm, Scalar};
use crate::trs::{lex_ext, Rule, Term, Trs};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("order pair compared a variable: {0}")]
    VariableArgument(String),
    #[error("rule {0} is not well-formed")]
    IllFormedRule(String),
    #[error("cannot parse precedence line `{0}`")]
    Parse(String),
}

/// Total quasi-order on symbol names given by natural levels. Unlisted symbols sit at level 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Precedence {
    levels: BTreeMap<String, u32>,
}

impl Precedence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_levels<S: Into<String>>(levels: impl IntoIterator<Item = (S, u32)>) -> Self {
        Precedence { levels: levels.into_iter().map(|(f, l)| (f.into(), l)).collect() }
    }

    /// Builds levels from a chain of symbols, greatest first.
    pub fn from_chain(chain: &[&str]) -> Self {
        let n = chain.len() as u32;
        Self::from_levels(chain.iter().enumerate().map(|(i, f)| (*f, n - 1 - i as u32)))
    }

    pub fn set(&mut self, f: impl Into<String>, level: u32) {
        self.levels.insert(f.into(), level);
    }

    pub fn level(&self, f: &str) -> u32 {
        self.levels.get(f).copied().unwrap_or(0)
    }

    pub fn gt(&self, f: &str, g: &str) -> bool {
        self.level(f) > self.level(g)
    }

    pub fn ge(&self, f: &str, g: &str) -> bool {
        self.level(f) >= self.level(g)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> {
        self.levels.iter().map(|(f, l)| (f.as_str(), *l))
    }

    /// Parses `name = level` lines.
    pub fn parse(text: &str) -> Result<Self, OrderError> {
        let mut p = Precedence::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (f, l) = line.rsplit_once(" = ").ok_or_else(|| OrderError::Parse(line.into()))?;
            let l = l.trim().parse().map_err(|_| OrderError::Parse(line.into()))?;
            p.set(f.trim(), l);
        }
        Ok(p)
    }
}

impl fmt::Display for Precedence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (g, l) in &self.levels {
            writeln!(f, "{g} = {l}")?;
        }
        Ok(())
    }
}

/// A quasi-order `qge` and a compatible strict order `sgt`, both on non-variable terms.
pub trait OrderPair {
    fn qge(&self, s: &Term, t: &Term) -> Result<bool, OrderError>;
    fn sgt(&self, s: &Term, t: &Term) -> Result<bool, OrderError>;
}

/// The pair induced by an algebra and a precedence: `s >_A t`, or `s >=_A t` with the root
/// symbols related by the precedence. With `marked`, roots are evaluated through their `f#`
/// interpretations.
#[derive(Clone, Copy, Debug)]
pub struct AlgebraPair<'a, W> {
    pub algebra: &'a Algebra<W>,
    pub precedence: &'a Precedence,
    pub marked: bool,
}

impl<W: Scalar> AlgebraPair<'_, W> {
    fn compare(&self, s: &Term, t: &Term, strict_prec: bool) -> Result<bool, OrderError> {
        let (Term::App(f, _), Term::App(g, _)) = (s, t) else {
            return Err(OrderError::VariableArgument(format!("{s} vs {t}")));
        };
        let (a, b) = if self.marked {
            (self.algebra.eval_marked(s)?, self.algebra.eval_marked(t)?)
        } else {
            (self.algebra.eval(s)?, self.algebra.eval(t)?)
        };
        if cmp_gt(&a, &b)? {
            return Ok(true);
        }
        let prec =
            if strict_prec { self.precedence.gt(&f.name, &g.name) } else { self.precedence.ge(&f.name, &g.name) };
        Ok(prec && cmp_ge(&a, &b)?)
    }
}

impl<W: Scalar> OrderPair for AlgebraPair<'_, W> {
    fn qge(&self, s: &Term, t: &Term) -> Result<bool, OrderError> {
        self.compare(s, t, false)
    }

    fn sgt(&self, s: &Term, t: &Term) -> Result<bool, OrderError> {
        self.compare(s, t, true)
    }
}

/// Pair built from unmarked evaluation, as used to simulate WPO.
pub fn build_wpo_pair<'a, W: Scalar>(alg: &'a Algebra<W>, prec: &'a Precedence) -> AlgebraPair<'a, W> {
    AlgebraPair { algebra: alg, precedence: prec, marked: false }
}

/// Pair built from marked root evaluation, as used by GWPO.
pub fn build_gwpo_pair<'a, W: Scalar>(alg: &'a Algebra<W>, prec: &'a Precedence) -> AlgebraPair<'a, W> {
    AlgebraPair { algebra: alg, precedence: prec, marked: true }
}

/// Which clause of the WPO definition established `s > t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WpoCase {
    /// `s >_A t`
    Weight,
    /// `s_i >= t` for an argument of `s`
    Subterm(usize),
    /// root of `s` strictly above root of `t`
    Precedence,
    /// equivalent roots, arguments lexicographically greater
    Lex,
}

impl WpoCase {
    pub fn label(self) -> &'static str {
        match self {
            WpoCase::Weight => "WPO 1",
            WpoCase::Subterm(_) => "WPO 2a",
            WpoCase::Precedence => "WPO 2b(i)",
            WpoCase::Lex => "WPO 2b(ii)",
        }
    }
}

/// Which clause of the SPO definition established `s > t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpoCase {
    Subterm(usize),
    Strict,
    Lex,
}

impl SpoCase {
    pub fn label(self) -> &'static str {
        match self {
            SpoCase::Subterm(_) => "SPO 1",
            SpoCase::Strict => "SPO 2a",
            SpoCase::Lex => "SPO 2b",
        }
    }
}

type Key = (*const Term, *const Term);

fn key(s: &Term, t: &Term) -> Key {
    (s as *const Term, t as *const Term)
}

struct WpoEngine<'a, W> {
    alg: &'a Algebra<W>,
    prec: &'a Precedence,
    nf: HashMap<*const Term, NormalForm<W>>,
    memo: HashMap<Key, Option<WpoCase>>,
}

impl<'a, W: Scalar> WpoEngine<'a, W> {
    fn new(alg: &'a Algebra<W>, prec: &'a Precedence) -> Self {
        WpoEngine { alg, prec, nf: HashMap::new(), memo: HashMap::new() }
    }

    fn eval(&mut self, t: &Term) -> Result<NormalForm<W>, OrderError> {
        if let Some(nf) = self.nf.get(&(t as *const Term)) {
            return Ok(nf.clone());
        }
        let nf = match t {
            Term::Var(_) => self.alg.eval(t)?,
            Term::App(f, args) => {
                let args = args.iter().map(|a| self.eval(a)).collect::<Result<Vec<_>, _>>()?;
                self.alg.eval_app(f, &args)?
            }
        };
        self.nf.insert(t, nf.clone());
        Ok(nf)
    }

    fn a_gt(&mut self, s: &Term, t: &Term) -> Result<bool, OrderError> {
        Ok(cmp_gt(&self.eval(s)?, &self.eval(t)?)?)
    }

    fn a_ge(&mut self, s: &Term, t: &Term) -> Result<bool, OrderError> {
        Ok(cmp_ge(&self.eval(s)?, &self.eval(t)?)?)
    }

    fn gt(&mut self, s: &Term, t: &Term) -> Result<bool, OrderError> {
        Ok(self.case(s, t)?.is_some())
    }

    fn case(&mut self, s: &Term, t: &Term) -> Result<Option<WpoCase>, OrderError> {
        if let Some(c) = self.memo.get(&key(s, t)) {
            return Ok(*c);
        }
        let c = self.decide(s, t)?;
        self.memo.insert(key(s, t), c);
        Ok(c)
    }

    fn decide(&mut self, s: &Term, t: &Term) -> Result<Option<WpoCase>, OrderError> {
        if self.a_gt(s, t)? {
            return Ok(Some(WpoCase::Weight));
        }
        let Term::App(f, ss) = s else { return Ok(None) };
        if !self.a_ge(s, t)? {
            return Ok(None);
        }
        for (i, si) in ss.iter().enumerate() {
            if si == t || self.gt(si, t)? {
                return Ok(Some(WpoCase::Subterm(i)));
            }
        }
        let Term::App(g, ts) = t else { return Ok(None) };
        for tj in ts {
            if !self.gt(s, tj)? {
                return Ok(None);
            }
        }
        if self.prec.gt(&f.name, &g.name) {
            return Ok(Some(WpoCase::Precedence));
        }
        if self.prec.ge(&f.name, &g.name) && lex_ext(|a, b| self.gt(a, b), ss, ts)? {
            return Ok(Some(WpoCase::Lex));
        }
        Ok(None)
    }

    fn explain(&mut self, s: &Term, t: &Term) -> Result<Option<Derivation>, OrderError> {
        let Some(case) = self.case(s, t)? else { return Ok(None) };
        let claim = format!("{s} >wpo {t}");
        let mut premises = Vec::new();
        match case {
            WpoCase::Weight => premises.push(Derivation::leaf(format!("{s} >A {t}"))),
            WpoCase::Subterm(i) => {
                premises.push(Derivation::leaf(format!("{s} >=A {t}")));
                premises.push(self.explain_ge(&s.args()[i], t)?);
            }
            WpoCase::Precedence | WpoCase::Lex => {
                let (f, g) = (s.root().expect("app"), t.root().expect("app"));
                premises.push(Derivation::leaf(format!("{s} >=A {t}")));
                if case == WpoCase::Precedence {
                    premises.push(Derivation::leaf(format!("{f} > {g}")));
                } else {
                    premises.push(Derivation::leaf(format!("{f} ~ {g}")));
                }
                for tj in t.args() {
                    premises.push(self.explain(s, tj)?.expect("decided"));
                }
                if case == WpoCase::Lex {
                    premises.push(self.explain_lex(s.args(), t.args())?);
                }
            }
        }
        Ok(Some(Derivation { claim, label: Some(case.label()), premises }))
    }

    fn explain_ge(&mut self, s: &Term, t: &Term) -> Result<Derivation, OrderError> {
        if s == t {
            Ok(Derivation::leaf(format!("{s} = {t}")))
        } else {
            Ok(self.explain(s, t)?.expect("decided"))
        }
    }

    fn explain_lex(&mut self, ss: &[Term], ts: &[Term]) -> Result<Derivation, OrderError> {
        match ss.iter().zip(ts).position(|(a, b)| a != b) {
            Some(k) => self.explain(&ss[k], &ts[k]).map(|d| d.expect("decided")),
            None => Ok(Derivation::leaf(format!("{} arguments extend {}", ss.len(), ts.len()))),
        }
    }
}

struct SpoEngine<'a, P: ?Sized> {
    pair: &'a P,
    memo: HashMap<Key, Option<SpoCase>>,
}

impl<'a, P: OrderPair + ?Sized> SpoEngine<'a, P> {
    fn new(pair: &'a P) -> Self {
        SpoEngine { pair, memo: HashMap::new() }
    }

    fn gt(&mut self, s: &Term, t: &Term) -> Result<bool, OrderError> {
        Ok(self.case(s, t)?.is_some())
    }

    fn case(&mut self, s: &Term, t: &Term) -> Result<Option<SpoCase>, OrderError> {
        if let Some(c) = self.memo.get(&key(s, t)) {
            return Ok(*c);
        }
        let c = self.decide(s, t)?;
        self.memo.insert(key(s, t), c);
        Ok(c)
    }

    fn decide(&mut self, s: &Term, t: &Term) -> Result<Option<SpoCase>, OrderError> {
        let Term::App(_, ss) = s else { return Ok(None) };
        for (i, si) in ss.iter().enumerate() {
            if si == t || self.gt(si, t)? {
                return Ok(Some(SpoCase::Subterm(i)));
            }
        }
        let Term::App(_, ts) = t else { return Ok(None) };
        for tj in ts {
            if !self.gt(s, tj)? {
                return Ok(None);
            }
        }
        if self.pair.sgt(s, t)? {
            return Ok(Some(SpoCase::Strict));
        }
        if self.pair.qge(s, t)? && lex_ext(|a, b| self.gt(a, b), ss, ts)? {
            return Ok(Some(SpoCase::Lex));
        }
        Ok(None)
    }

    fn explain(&mut self, s: &Term, t: &Term) -> Result<Option<Derivation>, OrderError> {
        let Some(case) = self.case(s, t)? else { return Ok(None) };
        let mut premises = Vec::new();
        match case {
            SpoCase::Subterm(i) => {
                let si = &s.args()[i];
                if si == t {
                    premises.push(Derivation::leaf(format!("{si} = {t}")));
                } else {
                    premises.push(self.explain(si, t)?.expect("decided"));
                }
            }
            SpoCase::Strict | SpoCase::Lex => {
                if case == SpoCase::Strict {
                    premises.push(Derivation::leaf(format!("{s} sqsupset {t}")));
                } else {
                    premises.push(Derivation::leaf(format!("{s} sqsupseteq {t}")));
                }
                for tj in t.args() {
                    premises.push(self.explain(s, tj)?.expect("decided"));
                }
                if case == SpoCase::Lex {
                    let k = s.args().iter().zip(t.args()).position(|(a, b)| a != b);
                    premises.push(match k {
                        Some(k) => self.explain(&s.args()[k], &t.args()[k])?.expect("decided"),
                        None => Derivation::leaf("longer argument list".to_string()),
                    });
                }
            }
        }
        Ok(Some(Derivation { claim: format!("{s} >spo {t}"), label: Some(case.label()), premises }))
    }
}

/// Proof tree for an order statement. Leaves without a label are side conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub claim: String,
    pub label: Option<&'static str>,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    fn leaf(claim: String) -> Self {
        Derivation { claim, label: None, premises: Vec::new() }
    }

    /// Labels in pre-order.
    pub fn labels(&self) -> Vec<&'static str> {
        let mut out: Vec<_> = self.label.into_iter().collect();
        for p in &self.premises {
            out.extend(p.labels());
        }
        out
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, indent: usize) -> fmt::Result {
        write!(f, "{:indent$}{}", "", self.claim)?;
        if let Some(l) = self.label {
            write!(f, "   [{l}]")?;
        }
        writeln!(f)?;
        self.premises.iter().try_for_each(|p| p.write(f, indent + 2))
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

pub fn wpo_gt<W: Scalar>(alg: &Algebra<W>, prec: &Precedence, s: &Term, t: &Term) -> Result<bool, OrderError> {
    WpoEngine::new(alg, prec).gt(s, t)
}

pub fn wpo_case<W: Scalar>(
    alg: &Algebra<W>,
    prec: &Precedence,
    s: &Term,
    t: &Term,
) -> Result<Option<WpoCase>, OrderError> {
    WpoEngine::new(alg, prec).case(s, t)
}

pub fn explain_wpo<W: Scalar>(
    alg: &Algebra<W>,
    prec: &Precedence,
    s: &Term,
    t: &Term,
) -> Result<Option<Derivation>, OrderError> {
    WpoEngine::new(alg, prec).explain(s, t)
}

pub fn spo_gt<P: OrderPair + ?Sized>(pair: &P, s: &Term, t: &Term) -> Result<bool, OrderError> {
    SpoEngine::new(pair).gt(s, t)
}

pub fn explain_spo<P: OrderPair + ?Sized>(pair: &P, s: &Term, t: &Term) -> Result<Option<Derivation>, OrderError> {
    SpoEngine::new(pair).explain(s, t)
}

/// `quasi(s, t)` and `s >spo t`.
pub fn mspo_gt<P: OrderPair + ?Sized>(
    quasi: impl FnOnce(&Term, &Term) -> Result<bool, OrderError>,
    pair: &P,
    s: &Term,
    t: &Term,
) -> Result<bool, OrderError> {
    Ok(quasi(s, t)? && spo_gt(pair, s, t)?)
}

/// `s >=_A t` on unmarked evaluation.
pub fn algebra_ge<W: Scalar>(alg: &Algebra<W>, s: &Term, t: &Term) -> Result<bool, OrderError> {
    Ok(cmp_ge(&alg.eval(s)?, &alg.eval(t)?)?)
}

pub fn gwpo_gt<W: Scalar>(alg: &Algebra<W>, prec: &Precedence, s: &Term, t: &Term) -> Result<bool, OrderError> {
    mspo_gt(|s, t| algebra_ge(alg, s, t), &build_gwpo_pair(alg, prec), s, t)
}

pub fn explain_gwpo<W: Scalar>(
    alg: &Algebra<W>,
    prec: &Precedence,
    s: &Term,
    t: &Term,
) -> Result<Option<Derivation>, OrderError> {
    if !algebra_ge(alg, s, t)? {
        return Ok(None);
    }
    let Some(spo) = explain_spo(&build_gwpo_pair(alg, prec), s, t)? else { return Ok(None) };
    Ok(Some(Derivation {
        claim: format!("{s} >gwpo {t}"),
        label: Some("MSPO"),
        premises: vec![Derivation::leaf(format!("{s} >=A {t}")), spo],
    }))
}

/// Which rules an order fails to orient.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrientReport {
    pub failing: Vec<usize>,
}

impl OrientReport {
    pub fn all_oriented(&self) -> bool {
        self.failing.is_empty()
    }
}

pub fn orients(
    mut order: impl FnMut(&Term, &Term) -> Result<bool, OrderError>,
    trs: &Trs,
) -> Result<OrientReport, OrderError> {
    let mut report = OrientReport::default();
    for (i, Rule { lhs, rhs }) in trs.rules.iter().enumerate() {
        if !trs.rules[i].is_well_formed() {
            return Err(OrderError::IllFormedRule(trs.rules[i].to_string()));
        }
        if !order(lhs, rhs)? {
            report.failing.push(i);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraKind;
    use crate::trs::{parse_term, parse_trs, Symbol};

    fn t(s: &str) -> Term {
        parse_term(s, &["x", "y"]).unwrap()
    }

    fn fgh() -> (Algebra<i64>, Precedence) {
        let mut a = Algebra::new(AlgebraKind::Linear);
        a.linear(Symbol::new("f", 1), 0, vec![1]).unwrap();
        a.linear(Symbol::new("h", 1), 0, vec![1]).unwrap();
        a.linear(Symbol::new("g", 1), 1, vec![1]).unwrap();
        (a.share_marks(), Precedence::from_chain(&["f", "g", "h"]))
    }

    fn doubling() -> Algebra<i64> {
        let mut a = Algebra::new(AlgebraKind::Linear);
        a.linear(Symbol::new("f", 1), 0, vec![2]).unwrap();
        a
    }

    #[test]
    fn fgh_rules() {
        let (a, p) = fgh();
        assert!(wpo_gt(&a, &p, &t("f(g(x))"), &t("g(f(f(x)))")).unwrap());
        assert!(wpo_gt(&a, &p, &t("f(h(x))"), &t("h(h(f(x)))")).unwrap());
        assert!(!wpo_gt(&a, &p, &t("x"), &t("x")).unwrap());
        let d = explain_wpo(&a, &p, &t("f(g(x))"), &t("g(f(f(x)))")).unwrap().unwrap();
        assert_eq!(d.labels(), vec!["WPO 2b(i)", "WPO 1"]);
    }

    #[test]
    fn fgh_spo_and_mspo() {
        let (a, p) = fgh();
        let pair = build_wpo_pair(&a, &p);
        let (s, r) = (t("f(g(x))"), t("g(f(f(x)))"));
        assert!(pair.sgt(&s, &r).unwrap());
        assert!(spo_gt(&pair, &s, &r).unwrap());
        let d = explain_spo(&pair, &s, &r).unwrap().unwrap();
        // the subterm clause is tried first, so g(x) >spo f(f(x)) closes the middle premise
        assert_eq!(d.labels(), vec!["SPO 2a", "SPO 1", "SPO 2a", "SPO 2a", "SPO 1"]);
        assert!(mspo_gt(|s, t| algebra_ge(&a, s, t), &pair, &s, &r).unwrap());
        assert!(!mspo_gt(|s, t| algebra_ge(&a, s, t), &pair, &s, &s).unwrap());
        assert!(!mspo_gt(|_, _| Ok(false), &pair, &s, &r).unwrap());
    }

    #[test]
    fn spo_on_variables() {
        let (a, p) = fgh();
        let pair = build_wpo_pair(&a, &p);
        assert!(!spo_gt(&pair, &t("x"), &t("f(x)")).unwrap());
        assert!(!spo_gt(&pair, &t("x"), &t("x")).unwrap());
        assert!(spo_gt(&pair, &t("f(x)"), &t("x")).unwrap());
    }

    #[test]
    fn strict_part_is_not_sgt() {
        let a = doubling();
        let p = Precedence::new();
        let pair = build_wpo_pair(&a, &p);
        assert!(pair.qge(&t("f(f(x))"), &t("f(x)")).unwrap());
        assert!(!pair.qge(&t("f(x)"), &t("f(f(x))")).unwrap());
        assert!(!pair.sgt(&t("f(f(x))"), &t("f(x)")).unwrap());
        assert!(matches!(pair.qge(&t("x"), &t("f(x)")), Err(OrderError::VariableArgument(_))));
    }

    #[test]
    fn duplicating_rule_with_gwpo() {
        let mut a = Algebra::new(AlgebraKind::Linear);
        a.linear(Symbol::new("f", 1), 0, vec![0]).unwrap();
        a.linear(Symbol::new("g", 2), 0, vec![0, 0]).unwrap();
        a.linear(Symbol::new("f", 1).marked(), 1, vec![0]).unwrap();
        a.linear(Symbol::new("g", 2).marked(), 0, vec![0, 0]).unwrap();
        for p in [Precedence::new(), Precedence::from_chain(&["g", "f"])] {
            assert!(gwpo_gt(&a, &p, &t("f(x)"), &t("g(x, x)")).unwrap());
        }
    }

    #[test]
    fn orients_reports_failures() {
        let (a, p) = fgh();
        let trs = parse_trs("(VAR x) (RULES f(g(x)) -> g(f(f(x))) f(h(x)) -> h(h(f(x))))").unwrap();
        assert!(orients(|s, t| wpo_gt(&a, &p, s, t), &trs).unwrap().all_oriented());
        assert!(orients(|s, t| wpo_gt(&a, &p, s, t), &Trs::default()).unwrap().all_oriented());
        let rev = parse_trs("(VAR x) (RULES f(x) -> f(f(x)) g(x) -> x)").unwrap();
        assert_eq!(orients(|s, t| wpo_gt(&a, &p, s, t), &rev).unwrap().failing, vec![0]);
        let bad = parse_trs("(VAR x y) (RULES f(x) -> y)").unwrap();
        assert!(matches!(orients(|s, t| wpo_gt(&a, &p, s, t), &bad), Err(OrderError::IllFormedRule(_))));
    }

    #[test]
    fn precedence_text_round_trip() {
        let p = Precedence::from_levels([("half", 1), ("bits", 1), ("s", 0)]);
        assert_eq!(Precedence::parse(&p.to_string()).unwrap(), p);
        assert!(p.gt("half", "s") && p.ge("half", "bits") && !p.gt("half", "bits"));
    }
}
