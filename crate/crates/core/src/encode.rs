//! Orientation constraints over unknown interpretations and precedence levels.
//!
//! Both sides of every rule are evaluated into *parametric* normal forms whose coefficients
//! are integer expressions over the unknowns. The order definition is then unfolded on pairs
//! of subterms, producing a [`Formula`] in quantifier-free linear integer arithmetic. Products
//! of unknowns only ever multiply 0/1 slopes with other expressions, so every monomial is a
//! conjunction of 0/1 guards times at most one bounded integer unknown, which the SMT backend
//! prints as an `ite`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::algebra::AlgebraKind;
use crate::trs::{Rule, Symbol, Term, Trs};

/// Terms nested deeper than this are rejected by the encoder.
pub const MAX_DEPTH: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error("rule {0} is not well-formed")]
    IllFormedRule(String),
    #[error("term nesting depth {0} exceeds the limit of {MAX_DEPTH}")]
    DepthLimit(usize),
    #[error("{order} cannot be combined with {interp} interpretations")]
    UnsupportedSpace { order: OrderClass, interp: AlgebraKind },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrderClass {
    Kbo,
    Lpo,
    Wpo,
    Gwpo,
}

impl OrderClass {
    /// Orders checked with the WPO definition over a simple algebra.
    pub fn is_wpo_family(self) -> bool {
        !matches!(self, OrderClass::Gwpo)
    }
}

impl fmt::Display for OrderClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderClass::Kbo => "kbo",
            OrderClass::Lpo => "lpo",
            OrderClass::Wpo => "wpo",
            OrderClass::Gwpo => "gwpo",
        })
    }
}

impl FromStr for OrderClass {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "kbo" => Ok(OrderClass::Kbo),
            "lpo" => Ok(OrderClass::Lpo),
            "wpo" => Ok(OrderClass::Wpo),
            "gwpo" => Ok(OrderClass::Gwpo),
            _ => Err(format!("unknown order `{s}`")),
        }
    }
}

/// Which algebras and precedences the search ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SearchSpace {
    pub order: OrderClass,
    pub interp: AlgebraKind,
    /// Bound on `c0` and on `|ci|` for max/plus offsets.
    pub const_bound: i64,
    /// Force `f# = f`.
    pub share_marked: bool,
    /// Force simple interpretations.
    pub force_simple: bool,
}

pub const DEFAULT_CONST_BOUND: i64 = 4;

impl SearchSpace {
    /// The standard space for an order class. KBO is linear-only and LPO max/plus-only.
    pub fn new(order: OrderClass, interp: AlgebraKind) -> Result<Self, EncodeError> {
        match (order, interp) {
            (OrderClass::Kbo, AlgebraKind::MaxPlus) | (OrderClass::Lpo, AlgebraKind::Linear) => {
                return Err(EncodeError::UnsupportedSpace { order, interp })
            }
            _ => {}
        }
        let wpo = order.is_wpo_family();
        Ok(SearchSpace { order, interp, const_bound: DEFAULT_CONST_BOUND, share_marked: wpo, force_simple: wpo })
    }

    pub fn with_bound(mut self, bound: i64) -> Self {
        self.const_bound = bound;
        self
    }
}

pub type VarId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    /// `c0`
    Constant,
    /// `ci` for argument `i` (0-based): a 0/1 coefficient (linear) or an integer offset (max/plus)
    Coeff(usize),
    /// `di` for argument `i` (0-based), max/plus only
    Slope(usize),
    /// precedence level
    Level,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownVar {
    pub name: String,
    pub role: Role,
    pub symbol: Symbol,
    pub lo: i64,
    pub hi: i64,
}

impl UnknownVar {
    pub fn is_bit(&self) -> bool {
        self.lo >= 0 && self.hi <= 1
    }
}

/// All unknowns of one encoding, indexed by [`VarId`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Registry {
    vars: Vec<UnknownVar>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers an unknown with a sanitized name derived from its role and symbol.
    pub fn add(&mut self, role: Role, symbol: &Symbol, lo: i64, hi: i64) -> VarId {
        let name = smt_name(role, symbol);
        debug_assert!(self.vars.iter().all(|v| v.name != name), "duplicate unknown {name}");
        self.vars.push(UnknownVar { name, role, symbol: symbol.clone(), lo, hi });
        self.vars.len() - 1
    }

    pub fn get(&self, id: VarId) -> &UnknownVar {
        &self.vars[id]
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, &UnknownVar)> {
        self.vars.iter().enumerate()
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }
}

/// Deterministic, injective SMT identifier: `c0_f`, `c1_plus`, `d1_half_sharp`, `lvl_g`.
fn smt_name(role: Role, symbol: &Symbol) -> String {
    let mut base = String::new();
    for c in symbol.name.chars() {
        if c.is_ascii_alphanumeric() {
            base.push(c);
        } else {
            base.push_str(&format!("_{:x}_", c as u32));
        }
    }
    if symbol.marked {
        base.push_str("_sharp");
    }
    match role {
        Role::Constant => format!("c0_{base}"),
        Role::Coeff(i) => format!("c{}_{base}", i + 1),
        Role::Slope(i) => format!("d{}_{base}", i + 1),
        Role::Level => format!("lvl_{base}"),
    }
}

/// A coefficient that is either fixed by the search space or an unknown.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Param {
    Fixed(i64),
    Var(VarId),
}

/// Parameters of one interpretation. For linear interpretations `args[i].1` is unused.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolParams {
    pub constant: Param,
    pub args: Vec<(Param, Param)>,
}

/// Conjunction of 0/1 guards times an optional integer unknown.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub guards: BTreeSet<VarId>,
    pub factor: Option<VarId>,
}

/// `constant + sum k * monomial`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LinExpr {
    pub constant: i64,
    pub terms: BTreeMap<Monomial, i64>,
}

impl LinExpr {
    pub fn constant(c: i64) -> Self {
        LinExpr { constant: c, terms: BTreeMap::new() }
    }

    pub fn var(id: VarId) -> Self {
        LinExpr { constant: 0, terms: BTreeMap::from([(Monomial { guards: BTreeSet::new(), factor: Some(id) }, 1)]) }
    }

    pub fn param(p: Param) -> Self {
        match p {
            Param::Fixed(c) => LinExpr::constant(c),
            Param::Var(id) => LinExpr::var(id),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial, k: i64) {
        if k == 0 {
            return;
        }
        let e = self.terms.entry(m).or_insert(0);
        *e += k;
        if *e == 0 {
            self.terms.retain(|_, k| *k != 0);
        }
    }

    pub fn add(&self, other: &LinExpr) -> LinExpr {
        let mut out = self.clone();
        out.constant += other.constant;
        for (m, k) in &other.terms {
            out.add_term(m.clone(), *k);
        }
        out
    }

    pub fn sub(&self, other: &LinExpr) -> LinExpr {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> LinExpr {
        if k == 0 {
            return LinExpr::default();
        }
        LinExpr { constant: self.constant * k, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    /// Multiplies by a 0/1 parameter.
    pub fn guard(&self, bit: Param) -> LinExpr {
        match bit {
            Param::Fixed(k) => self.scale(k),
            Param::Var(b) => {
                let mut out = LinExpr::default();
                if self.constant != 0 {
                    out.add_term(Monomial { guards: BTreeSet::from([b]), factor: None }, self.constant);
                }
                for (m, k) in &self.terms {
                    let mut m = m.clone();
                    m.guards.insert(b);
                    out.add_term(m, *k);
                }
                out
            }
        }
    }

    /// Value under a full assignment of the unknowns.
    pub fn eval(&self, values: &[i64]) -> i64 {
        self.terms.iter().fold(self.constant, |acc, (m, k)| {
            let on = m.guards.iter().all(|&g| values[g] != 0);
            let f = m.factor.map_or(1, |v| values[v]);
            acc + if on { k * f } else { 0 }
        })
    }

    /// Interval of possible values given the registry bounds.
    pub fn bounds(&self, reg: &Registry) -> (i64, i64) {
        let mut lo = self.constant;
        let mut hi = self.constant;
        for (m, k) in &self.terms {
            let (flo, fhi) = match m.factor {
                Some(v) => (reg.get(v).lo, reg.get(v).hi),
                None => (1, 1),
            };
            // guards contribute a factor in {0, 1}
            let (mlo, mhi) = if m.guards.is_empty() { (flo, fhi) } else { (flo.min(0), fhi.max(0)) };
            let (a, b) = (k * mlo, k * mhi);
            lo += a.min(b);
            hi += a.max(b);
        }
        (lo, hi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cmp {
    Ge,
    Gt,
    Eq,
}

/// Boolean combination of linear atoms `expr ⋈ 0`; `Def(i)` refers to a shared subformula.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
    Atom(LinExpr, Cmp),
    Def(usize),
}

impl Formula {
    pub fn and(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(inner) => out.extend(inner),
                p => out.push(p),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    pub fn or(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(inner) => out.extend(inner),
                p => out.push(p),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    pub fn negate(f: Formula) -> Formula {
        match f {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(inner) => *inner,
            f => Formula::Not(Box::new(f)),
        }
    }

    /// `expr ⋈ 0`, folded to a constant when the bounds decide it.
    pub fn atom(expr: LinExpr, cmp: Cmp, reg: &Registry) -> Formula {
        let (lo, hi) = expr.bounds(reg);
        let decided = match cmp {
            Cmp::Ge => (lo >= 0).then_some(true).or((hi < 0).then_some(false)),
            Cmp::Gt => (lo > 0).then_some(true).or((hi <= 0).then_some(false)),
            Cmp::Eq => (lo == 0 && hi == 0).then_some(true).or((lo > 0 || hi < 0).then_some(false)),
        };
        match decided {
            Some(true) => Formula::True,
            Some(false) => Formula::False,
            None => Formula::Atom(expr, cmp),
        }
    }

    pub fn eval(&self, defs: &[Formula], values: &[i64]) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::And(ps) => ps.iter().all(|p| p.eval(defs, values)),
            Formula::Or(ps) => ps.iter().any(|p| p.eval(defs, values)),
            Formula::Not(p) => !p.eval(defs, values),
            Formula::Atom(e, cmp) => {
                let v = e.eval(values);
                match cmp {
                    Cmp::Ge => v >= 0,
                    Cmp::Gt => v > 0,
                    Cmp::Eq => v == 0,
                }
            }
            Formula::Def(i) => defs[*i].eval(defs, values),
        }
    }

    /// Number of atoms, counting each shared definition once at its use sites.
    pub fn atom_count(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Def(_) => 0,
            Formula::Atom(..) => 1,
            Formula::Not(p) => p.atom_count(),
            Formula::And(ps) | Formula::Or(ps) => ps.iter().map(Formula::atom_count).sum(),
        }
    }
}

/// Result of encoding a rewrite system under a search space.
#[derive(Clone, Debug)]
pub struct Encoding {
    pub space: SearchSpace,
    pub registry: Registry,
    /// Parameters for every unmarked symbol and its marked companion.
    pub params: BTreeMap<Symbol, SymbolParams>,
    /// Precedence level per unmarked symbol name.
    pub levels: BTreeMap<String, Param>,
    /// Shared subformulas, each referring only to earlier ones.
    pub defs: Vec<Formula>,
    pub constraint: Formula,
}

impl Encoding {
    /// Whether `values` (indexed by [`VarId`]) satisfies ranges and constraints.
    pub fn satisfied_by(&self, values: &[i64]) -> bool {
        values.len() == self.registry.len()
            && self.registry.iter().all(|(i, v)| (v.lo..=v.hi).contains(&values[i]))
            && self.constraint.eval(&self.defs, values)
    }

    pub fn total_atoms(&self) -> usize {
        self.constraint.atom_count() + self.defs.iter().map(Formula::atom_count).sum::<usize>()
    }
}

/// Outcome of the syntactic variable condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VariableCondition {
    Proceed,
    /// Rule index whose lhs is a variable or whose rhs has a fresh variable.
    NonTerminating(usize),
}

pub fn encode_variable_condition(trs: &Trs) -> VariableCondition {
    match trs.rules.iter().position(|r| !r.is_well_formed()) {
        Some(i) => VariableCondition::NonTerminating(i),
        None => VariableCondition::Proceed,
    }
}

/// Parametric normal form of a term.
#[derive(Clone, Debug)]
enum SymNf {
    Linear { constant: LinExpr, coeffs: BTreeMap<String, LinExpr> },
    MaxPlus(Vec<SymBranch>),
}

#[derive(Clone, Debug)]
struct SymBranch {
    constant: LinExpr,
    var: Option<String>,
    slope: LinExpr,
}

type Key = (*const Term, *const Term);

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum PairKind {
    Gt,
    Ge,
    MarkedGt,
    MarkedGe,
    Wpo,
    Spo,
}

struct Encoder<'t> {
    space: SearchSpace,
    registry: Registry,
    params: BTreeMap<Symbol, SymbolParams>,
    levels: BTreeMap<String, Param>,
    defs: Vec<Formula>,
    nf: HashMap<(*const Term, bool), SymNf>,
    memo: HashMap<(Key, PairKind), Formula>,
    _terms: std::marker::PhantomData<&'t Term>,
}

pub fn encode_orientation(trs: &Trs, space: SearchSpace) -> Result<Encoding, EncodeError> {
    for rule in &trs.rules {
        if !rule.is_well_formed() {
            return Err(EncodeError::IllFormedRule(rule.to_string()));
        }
        let depth = rule.lhs.depth().max(rule.rhs.depth());
        if depth > MAX_DEPTH {
            return Err(EncodeError::DepthLimit(depth));
        }
    }
    let mut enc = Encoder::new(trs, space);
    let mut parts = Vec::new();
    for Rule { lhs, rhs } in &trs.rules {
        parts.push(match space.order {
            OrderClass::Gwpo => {
                let ge = enc.a_ge(lhs, rhs, false);
                Formula::and([ge, enc.spo(lhs, rhs)])
            }
            _ => enc.wpo(lhs, rhs),
        });
        if parts.last() == Some(&Formula::False) {
            break;
        }
    }
    if space.order == OrderClass::Kbo {
        parts.push(enc.kbo_admissibility(trs));
    }
    let constraint = Formula::and(parts);
    Ok(Encoding { space, registry: enc.registry, params: enc.params, levels: enc.levels, defs: enc.defs, constraint })
}

impl<'t> Encoder<'t> {
    fn new(trs: &Trs, space: SearchSpace) -> Self {
        let mut enc = Encoder {
            space,
            registry: Registry::new(),
            params: BTreeMap::new(),
            levels: BTreeMap::new(),
            defs: Vec::new(),
            nf: HashMap::new(),
            memo: HashMap::new(),
            _terms: std::marker::PhantomData,
        };
        let n = trs.signature.len() as i64;
        for f in &trs.signature {
            let p = enc.symbol_params(f);
            let marked = if space.share_marked { p.clone() } else { enc.symbol_params(&f.marked()) };
            enc.params.insert(f.clone(), p);
            enc.params.insert(f.marked(), marked);
            let lvl = match space.order {
                // a single symbol needs no level
                _ if n <= 1 => Param::Fixed(0),
                _ => Param::Var(enc.registry.add(Role::Level, f, 0, n - 1)),
            };
            enc.levels.insert(f.name.clone(), lvl);
        }
        enc
    }

    fn symbol_params(&mut self, f: &Symbol) -> SymbolParams {
        let b = self.space.const_bound;
        let reg = &mut self.registry;
        let simple = self.space.force_simple;
        match (self.space.order, self.space.interp) {
            (OrderClass::Lpo, _) => {
                SymbolParams { constant: Param::Fixed(0), args: vec![(Param::Fixed(0), Param::Fixed(1)); f.arity] }
            }
            (_, AlgebraKind::Linear) => SymbolParams {
                constant: Param::Var(reg.add(Role::Constant, f, 0, b)),
                args: (0..f.arity)
                    .map(|i| {
                        let c = if simple { Param::Fixed(1) } else { Param::Var(reg.add(Role::Coeff(i), f, 0, 1)) };
                        (c, Param::Fixed(1))
                    })
                    .collect(),
            },
            (_, AlgebraKind::MaxPlus) => SymbolParams {
                constant: Param::Var(reg.add(Role::Constant, f, 0, b)),
                args: (0..f.arity)
                    .map(|i| {
                        let lo = if simple { 0 } else { -b };
                        let c = Param::Var(reg.add(Role::Coeff(i), f, lo, b));
                        let d = if simple { Param::Fixed(1) } else { Param::Var(reg.add(Role::Slope(i), f, 0, 1)) };
                        (c, d)
                    })
                    .collect(),
            },
        }
    }

    fn atom(&self, e: LinExpr, cmp: Cmp) -> Formula {
        Formula::atom(e, cmp, &self.registry)
    }

    /// Stores a non-constant formula as a shared definition.
    fn share(&mut self, f: Formula) -> Formula {
        match f {
            Formula::True | Formula::False | Formula::Def(_) | Formula::Atom(..) => f,
            f => {
                self.defs.push(f);
                Formula::Def(self.defs.len() - 1)
            }
        }
    }

    fn memoized(&mut self, s: &Term, t: &Term, kind: PairKind, build: impl FnOnce(&mut Self) -> Formula) -> Formula {
        let k = ((s as *const Term, t as *const Term), kind);
        if let Some(f) = self.memo.get(&k) {
            return f.clone();
        }
        let f = build(self);
        let f = self.share(f);
        self.memo.insert(k, f.clone());
        f
    }

    fn eval(&mut self, t: &Term, marked: bool) -> SymNf {
        let key = (t as *const Term, marked);
        if let Some(nf) = self.nf.get(&key) {
            return nf.clone();
        }
        let nf = match t {
            Term::Var(x) => match self.space.interp {
                AlgebraKind::Linear => SymNf::Linear {
                    constant: LinExpr::constant(0),
                    coeffs: BTreeMap::from([(x.clone(), LinExpr::constant(1))]),
                },
                AlgebraKind::MaxPlus => SymNf::MaxPlus(vec![SymBranch {
                    constant: LinExpr::constant(0),
                    var: Some(x.clone()),
                    slope: LinExpr::constant(1),
                }]),
            },
            Term::App(f, args) => {
                let args: Vec<_> = args.iter().map(|a| self.eval(a, false)).collect();
                let sym = if marked { f.marked() } else { f.unmarked() };
                let p = self.params[&sym].clone();
                match self.space.interp {
                    AlgebraKind::Linear => {
                        let mut constant = LinExpr::param(p.constant);
                        let mut coeffs: BTreeMap<String, LinExpr> = BTreeMap::new();
                        for ((c, _), a) in p.args.iter().zip(&args) {
                            let SymNf::Linear { constant: ac, coeffs: acs } = a else { unreachable!() };
                            constant = constant.add(&ac.guard(*c));
                            for (x, e) in acs {
                                let slot = coeffs.entry(x.clone()).or_default();
                                *slot = slot.add(&e.guard(*c));
                            }
                        }
                        SymNf::Linear { constant, coeffs }
                    }
                    AlgebraKind::MaxPlus => {
                        let mut branches = vec![SymBranch {
                            constant: LinExpr::param(p.constant),
                            var: None,
                            slope: LinExpr::default(),
                        }];
                        for ((c, d), a) in p.args.iter().zip(&args) {
                            let SymNf::MaxPlus(bs) = a else { unreachable!() };
                            for b in bs {
                                branches.push(SymBranch {
                                    constant: LinExpr::param(*c).add(&b.constant.guard(*d)),
                                    var: b.var.clone(),
                                    slope: b.slope.guard(*d),
                                });
                            }
                        }
                        SymNf::MaxPlus(branches)
                    }
                }
            }
        };
        self.nf.insert(key, nf.clone());
        nf
    }

    fn compare(&mut self, s: &Term, t: &Term, marked: bool, strict: bool) -> Formula {
        let (l, r) = (self.eval(s, marked), self.eval(t, marked));
        let cst = if strict { Cmp::Gt } else { Cmp::Ge };
        match (l, r) {
            (SymNf::Linear { constant: lc, coeffs: lcs }, SymNf::Linear { constant: rc, coeffs: rcs }) => {
                let mut parts = vec![self.atom(lc.sub(&rc), cst)];
                for (x, re) in &rcs {
                    let le = lcs.get(x).cloned().unwrap_or_default();
                    parts.push(self.atom(le.sub(re), Cmp::Ge));
                }
                Formula::and(parts)
            }
            (SymNf::MaxPlus(lbs), SymNf::MaxPlus(rbs)) => {
                let mut all = Vec::new();
                for rb in &rbs {
                    let mut any = Vec::new();
                    for lb in &lbs {
                        let c = self.atom(lb.constant.sub(&rb.constant), cst);
                        let slope = match (&rb.var, &lb.var) {
                            (None, _) => Formula::True,
                            (Some(x), Some(y)) if x == y => self.atom(lb.slope.sub(&rb.slope), Cmp::Ge),
                            (Some(_), _) => self.atom(rb.slope.scale(-1), Cmp::Ge),
                        };
                        any.push(Formula::and([c, slope]));
                        if any.last() == Some(&Formula::True) {
                            break;
                        }
                    }
                    all.push(Formula::or(any));
                    if all.last() == Some(&Formula::False) {
                        break;
                    }
                }
                Formula::and(all)
            }
            _ => unreachable!("one algebra kind per encoding"),
        }
    }

    fn a_gt(&mut self, s: &Term, t: &Term, marked: bool) -> Formula {
        let kind = if marked { PairKind::MarkedGt } else { PairKind::Gt };
        self.memoized(s, t, kind, |e| e.compare(s, t, marked, true))
    }

    fn a_ge(&mut self, s: &Term, t: &Term, marked: bool) -> Formula {
        let kind = if marked { PairKind::MarkedGe } else { PairKind::Ge };
        self.memoized(s, t, kind, |e| e.compare(s, t, marked, false))
    }

    fn level_cmp(&self, f: &Symbol, g: &Symbol, strict: bool) -> Formula {
        if f.name == g.name {
            return if strict { Formula::False } else { Formula::True };
        }
        let diff = LinExpr::param(self.levels[&f.name]).sub(&LinExpr::param(self.levels[&g.name]));
        self.atom(diff, if strict { Cmp::Gt } else { Cmp::Ge })
    }

    /// First differing argument position decides; equal prefixes favour the longer list.
    fn lex(&mut self, ss: &'t [Term], ts: &'t [Term], gt: fn(&mut Self, &'t Term, &'t Term) -> Formula) -> Formula {
        match ss.iter().zip(ts).position(|(a, b)| a != b) {
            Some(k) => gt(self, &ss[k], &ts[k]),
            None if ss.len() > ts.len() => Formula::True,
            None => Formula::False,
        }
    }

    fn wpo(&mut self, s: &'t Term, t: &'t Term) -> Formula {
        self.memoized(s, t, PairKind::Wpo, |e| {
            let case1 = e.a_gt(s, t, false);
            let Term::App(f, ss) = s else { return case1 };
            if case1 == Formula::True {
                return case1;
            }
            let ge = e.a_ge(s, t, false);
            if ge == Formula::False {
                return case1;
            }
            let mut alts = Vec::new();
            for si in ss {
                alts.push(if si == t { Formula::True } else { e.wpo(si, t) });
                if alts.last() == Some(&Formula::True) {
                    break;
                }
            }
            if let Term::App(g, ts) = t {
                let mut guards = Vec::new();
                for tj in ts {
                    guards.push(e.wpo(s, tj));
                    if guards.last() == Some(&Formula::False) {
                        break;
                    }
                }
                let guard = Formula::and(guards);
                if guard != Formula::False {
                    let strict = e.level_cmp(f, g, true);
                    let lex = Formula::and([e.level_cmp(f, g, false), e.lex(ss, ts, Self::wpo)]);
                    alts.push(Formula::and([guard, Formula::or([strict, lex])]));
                }
            }
            Formula::or([case1, Formula::and([ge, Formula::or(alts)])])
        })
    }

    fn spo(&mut self, s: &'t Term, t: &'t Term) -> Formula {
        self.memoized(s, t, PairKind::Spo, |e| {
            let Term::App(f, ss) = s else { return Formula::False };
            let mut alts = Vec::new();
            for si in ss {
                alts.push(if si == t { Formula::True } else { e.spo(si, t) });
                if alts.last() == Some(&Formula::True) {
                    return Formula::True;
                }
            }
            if let Term::App(g, ts) = t {
                let mut guards = Vec::new();
                for tj in ts {
                    guards.push(e.spo(s, tj));
                    if guards.last() == Some(&Formula::False) {
                        break;
                    }
                }
                let guard = Formula::and(guards);
                if guard != Formula::False {
                    let gt = e.a_gt(s, t, true);
                    let ge = e.a_ge(s, t, true);
                    let sgt = Formula::or([gt.clone(), Formula::and([ge.clone(), e.level_cmp(f, g, true)])]);
                    let qge = Formula::or([gt, Formula::and([ge, e.level_cmp(f, g, false)])]);
                    let lex = e.lex(ss, ts, Self::spo);
                    alts.push(Formula::and([guard, Formula::or([sgt, Formula::and([qge, lex])])]));
                }
            }
            Formula::or(alts)
        })
    }

    /// A unary symbol of weight zero must be maximal in the precedence.
    fn kbo_admissibility(&mut self, trs: &Trs) -> Formula {
        let mut parts = Vec::new();
        for f in trs.signature.iter().filter(|f| f.arity == 1) {
            let weight = LinExpr::param(self.params[f].constant);
            let positive = self.atom(weight.add(&LinExpr::constant(-1)), Cmp::Ge);
            let top = Formula::and(trs.signature.iter().map(|g| self.level_cmp(f, g, false)).collect::<Vec<_>>());
            parts.push(Formula::or([positive, top]));
        }
        Formula::and(parts)
    }
}
