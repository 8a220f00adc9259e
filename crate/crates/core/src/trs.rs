//! First-order terms, substitutions, rewrite rules and the TPDB `.trs` text format.
//!
//! Only the old-style TPDB grammar is understood:
//!
//! ```text
//! (VAR x y)
//! (RULES
//!   plus(0, y) -> y
//!   plus(s(x), y) -> s(plus(x, y))
//! )
//! (COMMENT anything with balanced parentheses)
//! ```

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// A function symbol. Marked symbols are the `f#` companions used for root comparisons.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
    pub marked: bool,
}

impl Symbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Symbol { name: name.into(), arity, marked: false }
    }

    pub fn marked(&self) -> Symbol {
        Symbol { marked: true, ..self.clone() }
    }

    pub fn unmarked(&self) -> Symbol {
        Symbol { marked: false, ..self.clone() }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.marked {
            write!(f, "{}#", self.name)
        } else {
            f.write_str(&self.name)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    App(Symbol, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    /// Builds `name(args..)` with the arity taken from `args`.
    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(Symbol::new(name, args.len()), args)
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::app(name, Vec::new())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn root(&self) -> Option<&Symbol> {
        match self {
            Term::Var(_) => None,
            Term::App(f, _) => Some(f),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App(_, args) => args,
        }
    }

    /// Number of symbol and variable occurrences.
    pub fn size(&self) -> usize {
        1 + self.args().iter().map(Term::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.args().iter().map(Term::depth).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// All subterms in pre-order, including the term itself.
    pub fn subterms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.push(t);
            stack.extend(t.args().iter().rev());
        }
        out
    }

    pub fn proper_subterms(&self) -> Vec<&Term> {
        let mut all = self.subterms();
        all.remove(0);
        all
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.subterms().into_iter().filter_map(|t| t.root().cloned()).collect()
    }

    /// Same term with the root symbol marked. Variables are returned unchanged.
    pub fn mark_root(&self) -> Term {
        match self {
            Term::Var(_) => self.clone(),
            Term::App(f, args) => Term::App(f.marked(), args.clone()),
        }
    }

    pub fn apply(&self, sigma: &Substitution) -> Term {
        match self {
            Term::Var(x) => sigma.get(x).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.apply(sigma)).collect()),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => f.write_str(x),
            Term::App(sym, args) if args.is_empty() => write!(f, "{sym}"),
            Term::App(sym, args) => {
                write!(f, "{sym}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Finite mapping from variable names to terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution(HashMap<String, Term>);

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, var: impl Into<String>, t: Term) -> Option<Term> {
        self.0.insert(var.into(), t)
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.0.get(var)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The substitution that applies `self` first and then `then`.
    pub fn compose(&self, then: &Substitution) -> Substitution {
        let mut out: HashMap<String, Term> = self.0.iter().map(|(x, t)| (x.clone(), t.apply(then))).collect();
        for (x, t) in &then.0 {
            out.entry(x.clone()).or_insert_with(|| t.clone());
        }
        Substitution(out)
    }
}

impl FromIterator<(String, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (String, Term)>>(iter: I) -> Self {
        Substitution(iter.into_iter().collect())
    }
}

pub fn apply_substitution(t: &Term, sigma: &Substitution) -> Term {
    t.apply(sigma)
}

/// Lexicographic extension of `gt` with syntactic equality as the equivalence.
///
/// A prefix-equal longer sequence is greater; a prefix-equal shorter or equal one is not.
pub fn lex_ext<E>(mut gt: impl FnMut(&Term, &Term) -> Result<bool, E>, ss: &[Term], ts: &[Term]) -> Result<bool, E> {
    match ss.iter().zip(ts).position(|(s, t)| s != t) {
        Some(k) => gt(&ss[k], &ts[k]),
        None => Ok(ss.len() > ts.len()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Term,
    pub rhs: Term,
}

impl Rule {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Rule { lhs, rhs }
    }

    /// Non-variable left-hand side and no fresh variables on the right.
    pub fn is_well_formed(&self) -> bool {
        !self.lhs.is_var() && self.rhs.vars().is_subset(&self.lhs.vars())
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trs {
    /// Unmarked symbols in order of first occurrence.
    pub signature: Vec<Symbol>,
    pub rules: Vec<Rule>,
    pub declared_vars: BTreeSet<String>,
}

impl Trs {
    /// Builds a system from rules, inferring the signature.
    pub fn from_rules(rules: Vec<Rule>) -> Result<Trs, TrsError> {
        let mut trs = Trs::default();
        for rule in &rules {
            for side in [&rule.lhs, &rule.rhs] {
                for t in side.subterms() {
                    match t {
                        Term::Var(x) => {
                            trs.declared_vars.insert(x.clone());
                        }
                        Term::App(f, _) => trs.add_symbol(f, 0, 0)?,
                    }
                }
            }
        }
        trs.rules = rules;
        Ok(trs)
    }

    fn add_symbol(&mut self, f: &Symbol, line: usize, col: usize) -> Result<(), TrsError> {
        match self.signature.iter().find(|g| g.name == f.name) {
            Some(g) if g.arity != f.arity => {
                Err(TrsError::Arity { symbol: f.name.clone(), first: g.arity, second: f.arity, line, col })
            }
            Some(_) => Ok(()),
            None => {
                self.signature.push(f.unmarked());
                Ok(())
            }
        }
    }

    pub fn is_well_formed(&self) -> bool {
        self.rules.iter().all(Rule::is_well_formed)
    }

    pub fn symbol(&self, name: &str) -> Option<&Symbol> {
        self.signature.iter().find(|f| f.name == name)
    }
}

impl fmt::Display for Trs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(VAR")?;
        for x in &self.declared_vars {
            write!(f, " {x}")?;
        }
        f.write_str(")\n(RULES\n")?;
        for rule in &self.rules {
            writeln!(f, "  {rule}")?;
        }
        f.write_str(")\n")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrsError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("symbol `{symbol}` used with arity {first} and {second} (at {line}:{col})")]
    Arity { symbol: String, first: usize, second: usize, line: usize, col: usize },
    #[error("unsupported section ({section} ...) at {line}:{col}")]
    Unsupported { section: String, line: usize, col: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Comma,
    Arrow,
    Ident(String),
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || "_'+*/!#$%.-".contains(c)
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    src: &'a str,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { chars: src.char_indices().peekable(), src, line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn rest_starts_with(&mut self, pat: &str) -> bool {
        match self.chars.peek() {
            Some(&(i, _)) => self.src[i..].starts_with(pat),
            None => false,
        }
    }

    fn err(&self, msg: impl Into<String>) -> TrsError {
        TrsError::Syntax { line: self.line, col: self.col, msg: msg.into() }
    }

    /// Next token with its starting position.
    fn next_token(&mut self) -> Result<Option<(Tok, usize, usize)>, TrsError> {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
        let (line, col) = (self.line, self.col);
        let Some(c) = self.peek() else { return Ok(None) };
        let tok = match c {
            '(' => {
                self.bump();
                Tok::Open
            }
            ')' => {
                self.bump();
                Tok::Close
            }
            ',' => {
                self.bump();
                Tok::Comma
            }
            _ if self.rest_starts_with("->") => {
                self.bump();
                self.bump();
                Tok::Arrow
            }
            c if is_ident_char(c) => {
                let mut name = String::new();
                while let Some(c) = self.peek() {
                    if !is_ident_char(c) || self.rest_starts_with("->") {
                        break;
                    }
                    name.push(c);
                    self.bump();
                }
                Tok::Ident(name)
            }
            c => return Err(self.err(format!("unexpected character `{c}`"))),
        };
        Ok(Some((tok, line, col)))
    }

    /// Skips the body of a section up to and including its closing parenthesis.
    fn skip_balanced(&mut self) -> Result<(), TrsError> {
        let mut depth = 1usize;
        while let Some(c) = self.bump() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(());
                    }
                }
                _ => {}
            }
        }
        Err(self.err("unterminated section"))
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    peeked: Option<(Tok, usize, usize)>,
    vars: BTreeSet<String>,
    trs: Trs,
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Result<Option<&(Tok, usize, usize)>, TrsError> {
        if self.peeked.is_none() {
            self.peeked = self.lex.next_token()?;
        }
        Ok(self.peeked.as_ref())
    }

    fn next(&mut self) -> Result<Option<(Tok, usize, usize)>, TrsError> {
        self.peek()?;
        Ok(self.peeked.take())
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(usize, usize), TrsError> {
        match self.next()? {
            Some((tok, line, col)) if tok == want => Ok((line, col)),
            Some((tok, line, col)) => {
                Err(TrsError::Syntax { line, col, msg: format!("expected {what}, found {tok:?}") })
            }
            None => Err(self.lex.err(format!("expected {what}, found end of input"))),
        }
    }

    fn parse(mut self) -> Result<Trs, TrsError> {
        while let Some((tok, line, col)) = self.next()? {
            if tok != Tok::Open {
                return Err(TrsError::Syntax { line, col, msg: "expected `(`".into() });
            }
            let section = match self.next()? {
                Some((Tok::Ident(name), ..)) => name,
                _ => return Err(TrsError::Syntax { line, col, msg: "expected section name".into() }),
            };
            match section.as_str() {
                "VAR" => self.parse_vars()?,
                "RULES" => self.parse_rules()?,
                "COMMENT" => {
                    // the comment body may contain arbitrary text, so skip it raw
                    debug_assert!(self.peeked.is_none());
                    self.lex.skip_balanced()?
                }
                "STRATEGY" | "THEORY" => return Err(TrsError::Unsupported { section, line, col }),
                _ => return Err(TrsError::Syntax { line, col, msg: format!("unknown section `{section}`") }),
            }
        }
        // list symbols in order of first (pre-order) occurrence
        let mut ordered: Vec<Symbol> = Vec::new();
        for rule in &self.trs.rules {
            for t in rule.lhs.subterms().into_iter().chain(rule.rhs.subterms()) {
                if let Some(f) = t.root() {
                    if !ordered.contains(f) {
                        ordered.push(f.clone());
                    }
                }
            }
        }
        self.trs.signature = ordered;
        self.trs.declared_vars = self.vars;
        Ok(self.trs)
    }

    fn parse_vars(&mut self) -> Result<(), TrsError> {
        loop {
            match self.next()? {
                Some((Tok::Ident(x), ..)) => {
                    self.vars.insert(x);
                }
                Some((Tok::Close, ..)) => return Ok(()),
                Some((tok, line, col)) => {
                    return Err(TrsError::Syntax { line, col, msg: format!("unexpected {tok:?} in VAR") })
                }
                None => return Err(self.lex.err("unterminated VAR section")),
            }
        }
    }

    fn parse_rules(&mut self) -> Result<(), TrsError> {
        loop {
            if let Some((Tok::Close, ..)) = self.peek()? {
                self.next()?;
                return Ok(());
            }
            let lhs = self.parse_term()?;
            self.expect(Tok::Arrow, "`->`")?;
            let rhs = self.parse_term()?;
            self.trs.rules.push(Rule::new(lhs, rhs));
        }
    }

    fn parse_term(&mut self) -> Result<Term, TrsError> {
        let (name, line, col) = match self.next()? {
            Some((Tok::Ident(name), line, col)) => (name, line, col),
            Some((tok, line, col)) => {
                return Err(TrsError::Syntax { line, col, msg: format!("expected term, found {tok:?}") })
            }
            None => return Err(self.lex.err("expected term, found end of input")),
        };
        let mut args = Vec::new();
        if let Some((Tok::Open, ..)) = self.peek()? {
            self.next()?;
            if let Some((Tok::Close, ..)) = self.peek()? {
                self.next()?;
            } else {
                loop {
                    args.push(self.parse_term()?);
                    match self.next()? {
                        Some((Tok::Comma, ..)) => continue,
                        Some((Tok::Close, ..)) => break,
                        Some((tok, line, col)) => {
                            return Err(TrsError::Syntax {
                                line,
                                col,
                                msg: format!("expected `,` or `)`, found {tok:?}"),
                            })
                        }
                        None => return Err(self.lex.err("unterminated argument list")),
                    }
                }
            }
        }
        if self.vars.contains(&name) {
            if !args.is_empty() {
                return Err(TrsError::Syntax { line, col, msg: format!("variable `{name}` applied to arguments") });
            }
            return Ok(Term::Var(name));
        }
        let sym = Symbol::new(name, args.len());
        self.trs.add_symbol(&sym, line, col)?;
        Ok(Term::App(sym, args))
    }
}

/// Parses a TPDB old-style `.trs` file.
pub fn parse_trs(text: &str) -> Result<Trs, TrsError> {
    Parser { lex: Lexer::new(text), peeked: None, vars: BTreeSet::new(), trs: Trs::default() }.parse()
}

/// Parses a single term; identifiers in `vars` are variables.
pub fn parse_term(text: &str, vars: &[&str]) -> Result<Term, TrsError> {
    let mut p = Parser {
        lex: Lexer::new(text),
        peeked: None,
        vars: vars.iter().map(|v| v.to_string()).collect(),
        trs: Trs::default(),
    };
    let t = p.parse_term()?;
    if let Some((tok, line, col)) = p.next()? {
        return Err(TrsError::Syntax { line, col, msg: format!("trailing input {tok:?}") });
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        parse_term(s, &["x", "y", "z"]).unwrap()
    }

    #[test]
    fn parses_example_system() {
        let trs = parse_trs("(VAR x) (RULES f(g(x)) -> g(f(f(x))) f(h(x)) -> h(h(f(x))))").unwrap();
        assert_eq!(trs.rules.len(), 2);
        let names: Vec<_> = trs.signature.iter().map(|f| (f.name.as_str(), f.arity)).collect();
        assert_eq!(names, vec![("f", 1), ("g", 1), ("h", 1)]);
        assert_eq!(trs.rules[0].to_string(), "f(g(x)) -> g(f(f(x)))");
        assert!(trs.is_well_formed());
    }

    #[test]
    fn empty_rules() {
        let trs = parse_trs("(VAR x) (RULES )").unwrap();
        assert!(trs.rules.is_empty());
        assert!(trs.signature.is_empty());
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let err = parse_trs("(VAR x) (RULES f(x) -> f(x,x))").unwrap_err();
        assert!(matches!(err, TrsError::Arity { ref symbol, first: 1, second: 2, .. } if symbol == "f"));
    }

    #[test]
    fn strategy_and_theory_rejected() {
        for s in ["(VAR x) (STRATEGY INNERMOST) (RULES f(x) -> x)", "(THEORY (AC plus))"] {
            assert!(matches!(parse_trs(s), Err(TrsError::Unsupported { .. })));
        }
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = parse_trs("(VAR x)\n(RULES\n  f(x) -> \n)").unwrap_err();
        assert!(matches!(err, TrsError::Syntax { line: 4, col: 1, .. }), "{err}");
        let err = parse_trs("(VAR x)\n(RULES f(x) => x)").unwrap_err();
        assert!(matches!(err, TrsError::Syntax { line: 2, .. }), "{err}");
    }

    #[test]
    fn comments_and_constants() {
        let src = "(COMMENT taken from (somewhere) -> else)\n(VAR x)\n(RULES plus(0, x) -> x plus(s(x), 0()) -> s(x))";
        let trs = parse_trs(src).unwrap();
        assert_eq!(trs.rules.len(), 2);
        assert_eq!(trs.symbol("0").unwrap().arity, 0);
        assert_eq!(trs.rules[1].lhs, t("plus(s(x), 0)"));
    }

    #[test]
    fn identifiers_with_dashes_stop_at_arrow() {
        let trs = parse_trs("(VAR x) (RULES a-b(x)->x)").unwrap();
        assert_eq!(trs.signature[0].name, "a-b");
        assert_eq!(trs.rules[0].rhs, Term::var("x"));
    }

    #[test]
    fn ill_formed_rules_are_flagged() {
        let trs = parse_trs("(VAR x y) (RULES x -> f(x) f(x) -> f(y))").unwrap();
        assert!(!trs.rules[0].is_well_formed());
        assert!(!trs.rules[1].is_well_formed());
        assert!(!trs.is_well_formed());
    }

    #[test]
    fn substitution_examples() {
        let mut sigma = Substitution::new();
        sigma.insert("x", t("g(y)"));
        assert_eq!(t("f(x)").apply(&sigma), t("f(g(y))"));
        assert_eq!(t("x").apply(&Substitution::new()), t("x"));
        let mut sigma = Substitution::new();
        sigma.insert("x", t("h(z)"));
        assert_eq!(apply_substitution(&t("g(x, x)"), &sigma), t("g(h(z), h(z))"));
    }

    fn strict_by_table<'a>(table: &'a [(&'a str, &'a str)]) -> impl FnMut(&Term, &Term) -> Result<bool, ()> + 'a {
        move |s, t| Ok(table.iter().any(|(a, b)| s.to_string() == *a && t.to_string() == *b))
    }

    #[test]
    fn lex_ext_examples() {
        let gt = [("g(x)", "f(x)")];
        assert!(lex_ext(strict_by_table(&gt), &[t("g(x)")], &[t("f(x)")]).unwrap());
        assert!(!lex_ext(strict_by_table(&gt), &[t("x")], &[t("x")]).unwrap());
        assert!(lex_ext(strict_by_table(&gt), &[t("a"), t("b")], &[t("a")]).unwrap());
        assert!(!lex_ext(strict_by_table(&gt), &[t("a")], &[t("a"), t("b")]).unwrap());
    }

    #[test]
    fn subterm_listing() {
        let s = t("f(g(x), y)");
        assert_eq!(s.size(), 4);
        assert_eq!(s.depth(), 3);
        assert_eq!(s.proper_subterms().len(), 3);
        assert_eq!(s.mark_root().to_string(), "f#(g(x), y)");
    }
}
