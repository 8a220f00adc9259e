//! Linear and max/plus interpretations over the naturals.
//!
//! Terms are evaluated symbolically into normal forms ([`LinearPoly`] or [`MaxPlusNf`]) and
//! compared with sufficient criteria: a `true` answer from [`cmp_ge`] or [`cmp_gt`] means the
//! inequality holds under every assignment of naturals to variables. The criteria are
//! incomplete, so `false` only means "not shown".
//!
//! All arithmetic is generic over a [`Scalar`]; `i64` is the working type of the prover.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_traits::Signed;
use thiserror::Error;

use crate::trs::{Symbol, Term};

/// Signed integer type usable as coefficient and carrier type.
pub trait Scalar: Signed + Ord + Clone + Debug + Display + FromStr + Hash + Send + Sync + 'static {}

impl<T> Scalar for T where T: Signed + Ord + Clone + Debug + Display + FromStr + Hash + Send + Sync + 'static {}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("no interpretation for symbol `{0}`")]
    MissingInterpretation(String),
    #[error("constant part of `{symbol}` is {value}, but the carrier is the naturals")]
    NegativeConstant { symbol: String, value: String },
    #[error("negative slope {value} in interpretation of `{symbol}`")]
    NegativeSlope { symbol: String, value: String },
    #[error("interpretation of `{symbol}` has {got} argument slots, symbol has arity {arity}")]
    ArityMismatch { symbol: String, arity: usize, got: usize },
    #[error("cannot mix linear and max/plus interpretations")]
    KindMismatch,
    #[error("variable `{0}` has no value in the assignment")]
    Unassigned(String),
    #[error("value of variable `{0}` is negative")]
    NegativeAssignment(String),
    #[error("cannot parse interpretation line `{0}`")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgebraKind {
    Linear,
    MaxPlus,
}

impl Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgebraKind::Linear => "linear",
            AlgebraKind::MaxPlus => "maxplus",
        })
    }
}

impl FromStr for AlgebraKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "linear" => Ok(AlgebraKind::Linear),
            "maxplus" | "max/plus" => Ok(AlgebraKind::MaxPlus),
            _ => Err(format!("unknown interpretation kind `{s}`")),
        }
    }
}

/// `c0 + c1*x1 + ... + cn*xn` with all coefficients natural.
///
/// The searchable class restricts `ci` to {0, 1}; larger slopes are accepted here so that
/// hand-built algebras such as `f(x) = 2x` can be represented.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearInterp<W> {
    constant: W,
    coeffs: Vec<W>,
}

impl<W: Scalar> LinearInterp<W> {
    pub fn new(constant: W, coeffs: Vec<W>) -> Result<Self, AlgebraError> {
        if constant.is_negative() {
            return Err(AlgebraError::NegativeConstant { symbol: String::new(), value: constant.to_string() });
        }
        if let Some(c) = coeffs.iter().find(|c| c.is_negative()) {
            return Err(AlgebraError::NegativeSlope { symbol: String::new(), value: c.to_string() });
        }
        Ok(LinearInterp { constant, coeffs })
    }

    pub fn constant(&self) -> &W {
        &self.constant
    }

    pub fn coeffs(&self) -> &[W] {
        &self.coeffs
    }
}

/// `max{c0, c1 + d1*x1, ..., cn + dn*xn}` with `c0` natural, `ci` integer, `di` natural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MaxPlusInterp<W> {
    constant: W,
    /// `(ci, di)` per argument.
    args: Vec<(W, W)>,
}

impl<W: Scalar> MaxPlusInterp<W> {
    pub fn new(constant: W, args: Vec<(W, W)>) -> Result<Self, AlgebraError> {
        if constant.is_negative() {
            return Err(AlgebraError::NegativeConstant { symbol: String::new(), value: constant.to_string() });
        }
        if let Some((_, d)) = args.iter().find(|(_, d)| d.is_negative()) {
            return Err(AlgebraError::NegativeSlope { symbol: String::new(), value: d.to_string() });
        }
        Ok(MaxPlusInterp { constant, args })
    }

    pub fn constant(&self) -> &W {
        &self.constant
    }

    pub fn args(&self) -> &[(W, W)] {
        &self.args
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Interp<W> {
    Linear(LinearInterp<W>),
    MaxPlus(MaxPlusInterp<W>),
}

impl<W: Scalar> Interp<W> {
    pub fn kind(&self) -> AlgebraKind {
        match self {
            Interp::Linear(_) => AlgebraKind::Linear,
            Interp::MaxPlus(_) => AlgebraKind::MaxPlus,
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Interp::Linear(l) => l.coeffs.len(),
            Interp::MaxPlus(m) => m.args.len(),
        }
    }

    /// `f(a) >= a_i` for every argument.
    pub fn is_simple(&self) -> bool {
        match self {
            Interp::Linear(l) => l.coeffs.iter().all(|c| *c >= W::one()),
            Interp::MaxPlus(m) => m.args.iter().all(|(c, d)| !c.is_negative() && *d >= W::one()),
        }
    }

    pub fn is_weakly_monotone(&self) -> bool {
        match self {
            Interp::Linear(l) => l.coeffs.iter().all(|c| !c.is_negative()),
            Interp::MaxPlus(m) => m.args.iter().all(|(_, d)| !d.is_negative()),
        }
    }

    /// Slopes in {0, 1}, the shape the parameter search produces.
    pub fn in_search_class(&self) -> bool {
        let bit = |w: &W| w.is_zero() || w.is_one();
        match self {
            Interp::Linear(l) => l.coeffs.iter().all(bit),
            Interp::MaxPlus(m) => m.args.iter().all(|(_, d)| bit(d)),
        }
    }

    fn apply(&self, args: &[W]) -> W {
        match self {
            Interp::Linear(l) => {
                l.coeffs.iter().zip(args).fold(l.constant.clone(), |acc, (c, a)| acc + c.clone() * a.clone())
            }
            Interp::MaxPlus(m) => m
                .args
                .iter()
                .zip(args)
                .map(|((c, d), a)| c.clone() + d.clone() * a.clone())
                .fold(m.constant.clone(), |acc, v| acc.max(v)),
        }
    }
}

/// Per-symbol interpretations for unmarked symbols and their marked companions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra<W> {
    kind: AlgebraKind,
    interps: BTreeMap<Symbol, Interp<W>>,
}

impl<W: Scalar> Algebra<W> {
    pub fn new(kind: AlgebraKind) -> Self {
        Algebra { kind, interps: BTreeMap::new() }
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn insert(&mut self, sym: Symbol, interp: Interp<W>) -> Result<(), AlgebraError> {
        if interp.kind() != self.kind {
            return Err(AlgebraError::KindMismatch);
        }
        if interp.arity() != sym.arity {
            return Err(AlgebraError::ArityMismatch { symbol: sym.to_string(), arity: sym.arity, got: interp.arity() });
        }
        self.interps.insert(sym, interp);
        Ok(())
    }

    /// Adds a linear interpretation, checking the carrier invariants.
    pub fn linear(&mut self, sym: Symbol, constant: W, coeffs: Vec<W>) -> Result<(), AlgebraError> {
        let interp = LinearInterp::new(constant, coeffs).map_err(|e| e.for_symbol(&sym))?;
        self.insert(sym, Interp::Linear(interp))
    }

    /// Adds a max/plus interpretation, checking the carrier invariants.
    pub fn max_plus(&mut self, sym: Symbol, constant: W, args: Vec<(W, W)>) -> Result<(), AlgebraError> {
        let interp = MaxPlusInterp::new(constant, args).map_err(|e| e.for_symbol(&sym))?;
        self.insert(sym, Interp::MaxPlus(interp))
    }

    pub fn get(&self, sym: &Symbol) -> Option<&Interp<W>> {
        self.interps.get(sym)
    }

    pub fn interp(&self, sym: &Symbol) -> Result<&Interp<W>, AlgebraError> {
        self.interps.get(sym).ok_or_else(|| AlgebraError::MissingInterpretation(sym.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &Interp<W>)> {
        self.interps.iter()
    }

    /// Gives every unmarked symbol without a marked interpretation `f# = f`.
    pub fn share_marks(mut self) -> Self {
        let missing: Vec<_> = self
            .interps
            .iter()
            .filter(|(f, _)| !f.marked && !self.interps.contains_key(&f.marked()))
            .map(|(f, i)| (f.marked(), i.clone()))
            .collect();
        self.interps.extend(missing);
        self
    }

    /// `f# = f` for every unmarked symbol that has a marked companion.
    pub fn marks_shared(&self) -> bool {
        self.interps.iter().filter(|(f, _)| f.marked).all(|(f, i)| self.interps.get(&f.unmarked()) == Some(i))
    }

    /// Simplicity of the unmarked interpretations.
    pub fn is_simple(&self) -> bool {
        self.interps.iter().filter(|(f, _)| !f.marked).all(|(_, i)| i.is_simple())
    }

    pub fn is_weakly_monotone(&self) -> bool {
        self.interps.values().all(Interp::is_weakly_monotone)
    }

    pub fn in_search_class(&self) -> bool {
        self.interps.values().all(Interp::in_search_class)
    }

    /// Symbolic value of `t`. A marked root symbol uses its marked interpretation.
    pub fn eval(&self, t: &Term) -> Result<NormalForm<W>, AlgebraError> {
        match t {
            Term::Var(x) => Ok(NormalForm::var(self.kind, x)),
            Term::App(f, args) => {
                let args = args.iter().map(|a| self.eval(a)).collect::<Result<Vec<_>, _>>()?;
                self.eval_app(f, &args)
            }
        }
    }

    /// Symbolic value of `t` with its root marked.
    pub fn eval_marked(&self, t: &Term) -> Result<NormalForm<W>, AlgebraError> {
        match t {
            Term::Var(_) => self.eval(t),
            Term::App(f, args) => {
                let args = args.iter().map(|a| self.eval(a)).collect::<Result<Vec<_>, _>>()?;
                self.eval_app(&f.marked(), &args)
            }
        }
    }

    /// Interprets `f` applied to already evaluated arguments.
    pub fn eval_app(&self, f: &Symbol, args: &[NormalForm<W>]) -> Result<NormalForm<W>, AlgebraError> {
        match self.interp(f)? {
            Interp::Linear(l) => {
                let mut out = LinearPoly::constant(l.constant.clone());
                for (c, a) in l.coeffs.iter().zip(args) {
                    let NormalForm::Linear(p) = a else { return Err(AlgebraError::KindMismatch) };
                    out.add_scaled(p, c);
                }
                Ok(NormalForm::Linear(out))
            }
            Interp::MaxPlus(m) => {
                let mut branches = vec![Branch::constant(m.constant.clone())];
                for ((c, d), a) in m.args.iter().zip(args) {
                    let NormalForm::MaxPlus(nf) = a else { return Err(AlgebraError::KindMismatch) };
                    branches.extend(nf.branches.iter().map(|b| b.scale_shift(d, c)));
                }
                Ok(NormalForm::MaxPlus(MaxPlusNf::new(branches)))
            }
        }
    }

    /// Direct recursive evaluation under `alpha`.
    pub fn eval_concrete(&self, t: &Term, alpha: &HashMap<String, W>) -> Result<W, AlgebraError> {
        match t {
            Term::Var(x) => {
                let v = alpha.get(x).ok_or_else(|| AlgebraError::Unassigned(x.clone()))?;
                if v.is_negative() {
                    return Err(AlgebraError::NegativeAssignment(x.clone()));
                }
                Ok(v.clone())
            }
            Term::App(f, args) => {
                let vals = args.iter().map(|a| self.eval_concrete(a, alpha)).collect::<Result<Vec<_>, _>>()?;
                Ok(self.interp(f)?.apply(&vals))
            }
        }
    }

    /// Parses the certificate block written by the `Display` impl.
    pub fn parse(kind: AlgebraKind, text: &str) -> Result<Self, AlgebraError> {
        let mut alg = Algebra::new(kind);
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (sym, interp) = parse_interp_line::<W>(kind, line)?;
            let interp = match interp {
                Interp::Linear(l) => {
                    Interp::Linear(LinearInterp::new(l.constant, l.coeffs).map_err(|e| e.for_symbol(&sym))?)
                }
                Interp::MaxPlus(m) => {
                    Interp::MaxPlus(MaxPlusInterp::new(m.constant, m.args).map_err(|e| e.for_symbol(&sym))?)
                }
            };
            alg.insert(sym, interp)?;
        }
        Ok(alg)
    }
}

impl AlgebraError {
    fn for_symbol(self, sym: &Symbol) -> Self {
        match self {
            AlgebraError::NegativeConstant { value, .. } => {
                AlgebraError::NegativeConstant { symbol: sym.to_string(), value }
            }
            AlgebraError::NegativeSlope { value, .. } => AlgebraError::NegativeSlope { symbol: sym.to_string(), value },
            e => e,
        }
    }
}

impl<W: Scalar> Display for Algebra<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (sym, interp) in &self.interps {
            write!(f, "{sym}")?;
            if sym.arity > 0 {
                let xs: Vec<_> = (0..sym.arity).map(|i| format!("x{i}")).collect();
                write!(f, "({})", xs.join(", "))?;
            }
            f.write_str(" = ")?;
            match interp {
                Interp::Linear(l) => {
                    write!(f, "{}", l.constant)?;
                    for (i, c) in l.coeffs.iter().enumerate() {
                        write!(f, " + {}", slope_term(c, i))?;
                    }
                }
                Interp::MaxPlus(m) => {
                    write!(f, "max{{{}", m.constant)?;
                    for (i, (c, d)) in m.args.iter().enumerate() {
                        write!(f, ", {c} + {}", slope_term(d, i))?;
                    }
                    f.write_str("}")?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn slope_term<W: Scalar>(w: &W, i: usize) -> String {
    if w.is_one() {
        format!("x{i}")
    } else {
        format!("{w}*x{i}")
    }
}

fn parse_interp_line<W: Scalar>(kind: AlgebraKind, line: &str) -> Result<(Symbol, Interp<W>), AlgebraError> {
    let bad = || AlgebraError::Parse(line.to_string());
    let (lhs, rhs) = line.split_once(" = ").ok_or_else(bad)?;
    let lhs = lhs.trim();
    let (name, arity) = match lhs.strip_suffix(')') {
        Some(head) => {
            let (name, params) = head.split_once('(').ok_or_else(bad)?;
            (name, params.split(',').filter(|p| !p.trim().is_empty()).count())
        }
        None => (lhs, 0),
    };
    let (name, marked) = match name.strip_suffix('#') {
        Some(n) => (n, true),
        None => (name, false),
    };
    if name.is_empty() {
        return Err(bad());
    }
    let sym = Symbol { name: name.to_string(), arity, marked };
    let interp = match kind {
        AlgebraKind::Linear => {
            let (constant, slopes, _) = parse_affine::<W>(rhs, arity).ok_or_else(bad)?;
            Interp::Linear(LinearInterp { constant, coeffs: slopes })
        }
        AlgebraKind::MaxPlus => {
            let rhs = rhs.trim();
            // a bare constant stands for `max{c}`
            let body = match rhs.strip_prefix("max{") {
                Some(r) => r.strip_suffix('}').ok_or_else(bad)?,
                None => rhs,
            };
            let mut parts = body.split(',');
            let constant = parts.next().and_then(|c| c.trim().parse::<W>().ok()).ok_or_else(bad)?;
            let mut args = vec![(W::zero(), W::zero()); arity];
            let mut seen = vec![false; arity];
            for part in parts {
                let (c, slopes, mentioned) = parse_affine::<W>(part, arity).ok_or_else(bad)?;
                let [i] = mentioned[..] else { return Err(bad()) };
                if std::mem::replace(&mut seen[i], true) {
                    return Err(bad());
                }
                args[i] = (c, slopes[i].clone());
            }
            Interp::MaxPlus(MaxPlusInterp { constant, args })
        }
    };
    Ok((sym, interp))
}

/// Parses `c + d*x0 + x1 ...` into a constant, per-position slopes and the positions named.
fn parse_affine<W: Scalar>(text: &str, arity: usize) -> Option<(W, Vec<W>, Vec<usize>)> {
    let mut constant = W::zero();
    let mut slopes = vec![W::zero(); arity];
    let mut mentioned = Vec::new();
    for part in text.split('+').map(str::trim) {
        let (coef, var) = match part.split_once('*') {
            Some((c, v)) => (c.trim().parse::<W>().ok()?, Some(v.trim())),
            None if part.starts_with('x') => (W::one(), Some(part)),
            None => (part.parse::<W>().ok()?, None),
        };
        match var {
            Some(v) => {
                let i: usize = v.strip_prefix('x')?.parse().ok()?;
                let slot = slopes.get_mut(i)?;
                *slot = slot.clone() + coef;
                if !mentioned.contains(&i) {
                    mentioned.push(i);
                }
            }
            None => constant = constant + coef,
        }
    }
    Some((constant, slopes, mentioned))
}

/// `constant + sum coeff(x) * x`, canonical: no zero coefficients stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearPoly<W> {
    constant: W,
    coeffs: BTreeMap<String, W>,
}

impl<W: Scalar> LinearPoly<W> {
    pub fn constant(c: W) -> Self {
        LinearPoly { constant: c, coeffs: BTreeMap::new() }
    }

    pub fn var(x: &str) -> Self {
        LinearPoly { constant: W::zero(), coeffs: BTreeMap::from([(x.to_string(), W::one())]) }
    }

    pub fn from_parts(constant: W, coeffs: impl IntoIterator<Item = (String, W)>) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        LinearPoly { constant, coeffs }
    }

    pub fn constant_part(&self) -> &W {
        &self.constant
    }

    pub fn coeff(&self, x: &str) -> W {
        self.coeffs.get(x).cloned().unwrap_or_else(W::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<String, W> {
        &self.coeffs
    }

    fn add_scaled(&mut self, other: &LinearPoly<W>, k: &W) {
        if k.is_zero() {
            return;
        }
        self.constant = self.constant.clone() + k.clone() * other.constant.clone();
        for (x, c) in &other.coeffs {
            let e = self.coeffs.entry(x.clone()).or_insert_with(W::zero);
            *e = e.clone() + k.clone() * c.clone();
        }
        self.coeffs.retain(|_, c| !c.is_zero());
    }

    pub fn value(&self, alpha: &HashMap<String, W>) -> W {
        self.coeffs
            .iter()
            .fold(self.constant.clone(), |acc, (x, c)| acc + c.clone() * alpha.get(x).cloned().unwrap_or_else(W::zero))
    }

    fn dominates(&self, other: &Self) -> bool {
        other.coeffs.iter().all(|(x, c)| self.coeff(x) >= *c)
    }

    pub fn ge(&self, other: &Self) -> bool {
        self.constant >= other.constant && self.dominates(other)
    }

    pub fn gt(&self, other: &Self) -> bool {
        self.constant > other.constant && self.dominates(other)
    }
}

/// One affine piece `constant + slope * var` of a max/plus normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Branch<W> {
    pub constant: W,
    /// Variable with a positive slope, if any.
    pub var: Option<(String, W)>,
}

impl<W: Scalar> Branch<W> {
    pub fn constant(c: W) -> Self {
        Branch { constant: c, var: None }
    }

    pub fn linear(c: W, x: &str, slope: W) -> Self {
        if slope.is_zero() {
            Branch::constant(c)
        } else {
            Branch { constant: c, var: Some((x.to_string(), slope)) }
        }
    }

    /// `shift + scale * self`.
    fn scale_shift(&self, scale: &W, shift: &W) -> Self {
        let constant = shift.clone() + scale.clone() * self.constant.clone();
        match &self.var {
            Some((x, v)) => Branch::linear(constant, x, scale.clone() * v.clone()),
            None => Branch::constant(constant),
        }
    }

    pub fn value(&self, alpha: &HashMap<String, W>) -> W {
        match &self.var {
            Some((x, v)) => self.constant.clone() + v.clone() * alpha.get(x).cloned().unwrap_or_else(W::zero),
            None => self.constant.clone(),
        }
    }

    /// `self <= other` at every natural assignment, by slope/constant comparison.
    pub fn dominated_by(&self, other: &Branch<W>) -> bool {
        other.constant >= self.constant && self.slope_dominated_by(other)
    }

    pub fn strictly_dominated_by(&self, other: &Branch<W>) -> bool {
        other.constant > self.constant && self.slope_dominated_by(other)
    }

    fn slope_dominated_by(&self, other: &Branch<W>) -> bool {
        match (&self.var, &other.var) {
            (None, _) => true,
            (Some((x, v)), Some((y, w))) => x == y && w >= v,
            (Some(_), None) => false,
        }
    }
}

/// Maximum over a nonempty set of affine branches.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MaxPlusNf<W> {
    branches: Vec<Branch<W>>,
}

impl<W: Scalar> MaxPlusNf<W> {
    /// Builds a normal form with dominated branches pruned.
    ///
    /// # Panics
    /// If `branches` is empty.
    pub fn new(branches: Vec<Branch<W>>) -> Self {
        let mut nf = Self::unpruned(branches);
        nf.prune();
        nf
    }

    pub fn unpruned(mut branches: Vec<Branch<W>>) -> Self {
        assert!(!branches.is_empty(), "max/plus normal form needs a branch");
        branches.sort();
        branches.dedup();
        MaxPlusNf { branches }
    }

    pub fn var(x: &str) -> Self {
        MaxPlusNf { branches: vec![Branch::linear(W::zero(), x, W::one())] }
    }

    pub fn branches(&self) -> &[Branch<W>] {
        &self.branches
    }

    fn prune(&mut self) {
        let all = std::mem::take(&mut self.branches);
        for (i, b) in all.iter().enumerate() {
            // keep b unless another branch dominates it; ties keep the first copy
            let redundant =
                all.iter().enumerate().any(|(j, o)| j != i && b.dominated_by(o) && (!o.dominated_by(b) || j < i));
            if !redundant {
                self.branches.push(b.clone());
            }
        }
    }

    pub fn value(&self, alpha: &HashMap<String, W>) -> W {
        self.branches.iter().map(|b| b.value(alpha)).max().expect("nonempty")
    }

    pub fn ge(&self, other: &Self) -> bool {
        other.branches.iter().all(|b| self.branches.iter().any(|o| b.dominated_by(o)))
    }

    pub fn gt(&self, other: &Self) -> bool {
        other.branches.iter().all(|b| self.branches.iter().any(|o| b.strictly_dominated_by(o)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NormalForm<W> {
    Linear(LinearPoly<W>),
    MaxPlus(MaxPlusNf<W>),
}

impl<W: Scalar> NormalForm<W> {
    pub fn var(kind: AlgebraKind, x: &str) -> Self {
        match kind {
            AlgebraKind::Linear => NormalForm::Linear(LinearPoly::var(x)),
            AlgebraKind::MaxPlus => NormalForm::MaxPlus(MaxPlusNf::var(x)),
        }
    }

    pub fn value(&self, alpha: &HashMap<String, W>) -> W {
        match self {
            NormalForm::Linear(p) => p.value(alpha),
            NormalForm::MaxPlus(m) => m.value(alpha),
        }
    }
}

impl<W: Scalar> Display for NormalForm<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let piece = |c: &W, x: &str| if c.is_one() { x.to_string() } else { format!("{c}*{x}") };
        match self {
            NormalForm::Linear(p) => {
                write!(f, "{}", p.constant)?;
                for (x, c) in &p.coeffs {
                    write!(f, " + {}", piece(c, x))?;
                }
                Ok(())
            }
            NormalForm::MaxPlus(m) => {
                let parts: Vec<_> = m
                    .branches
                    .iter()
                    .map(|b| match &b.var {
                        None => b.constant.to_string(),
                        Some((x, v)) => format!("{} + {}", b.constant, piece(v, x)),
                    })
                    .collect();
                write!(f, "max{{{}}}", parts.join(", "))
            }
        }
    }
}

/// Sufficient criterion for `lhs >= rhs` under every assignment.
pub fn cmp_ge<W: Scalar>(lhs: &NormalForm<W>, rhs: &NormalForm<W>) -> Result<bool, AlgebraError> {
    match (lhs, rhs) {
        (NormalForm::Linear(a), NormalForm::Linear(b)) => Ok(a.ge(b)),
        (NormalForm::MaxPlus(a), NormalForm::MaxPlus(b)) => Ok(a.ge(b)),
        _ => Err(AlgebraError::KindMismatch),
    }
}

/// Sufficient criterion for `lhs > rhs` under every assignment.
pub fn cmp_gt<W: Scalar>(lhs: &NormalForm<W>, rhs: &NormalForm<W>) -> Result<bool, AlgebraError> {
    match (lhs, rhs) {
        (NormalForm::Linear(a), NormalForm::Linear(b)) => Ok(a.gt(b)),
        (NormalForm::MaxPlus(a), NormalForm::MaxPlus(b)) => Ok(a.gt(b)),
        _ => Err(AlgebraError::KindMismatch),
    }
}

pub fn eval_symbolic<W: Scalar>(alg: &Algebra<W>, t: &Term) -> Result<NormalForm<W>, AlgebraError> {
    alg.eval(t)
}

pub fn eval_concrete<W: Scalar>(alg: &Algebra<W>, t: &Term, alpha: &HashMap<String, W>) -> Result<W, AlgebraError> {
    alg.eval_concrete(t, alpha)
}

pub fn is_simple<W: Scalar>(alg: &Algebra<W>) -> bool {
    alg.is_simple()
}

pub fn is_weakly_monotone<W: Scalar>(alg: &Algebra<W>) -> bool {
    alg.is_weakly_monotone()
}
