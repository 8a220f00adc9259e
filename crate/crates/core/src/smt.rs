//! SMT-LIB emission, external solver invocation and model decoding.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraKind, Interp, LinearInterp, MaxPlusInterp};
use crate::encode::{Cmp, Encoding, Formula, LinExpr, Param, Registry};
use crate::orders::Precedence;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverInput {
    /// Script is written to a temporary file passed as the last argument.
    File,
    /// Script is piped to stdin.
    Stdin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub program: String,
    pub args: Vec<String>,
    pub input: SolverInput,
    pub timeout: Duration,
    pub logic: String,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig::z3()
    }
}

impl SolverConfig {
    pub fn z3() -> Self {
        SolverConfig {
            program: "z3".into(),
            args: vec!["-smt2".into()],
            input: SolverInput::File,
            timeout: Duration::from_secs(60),
            logic: "QF_LIA".into(),
        }
    }

    /// Parses a command line such as `z3 -in` or `cvc5 --lang smt2`; `-in` selects stdin input.
    pub fn from_command(cmd: &str) -> Option<Self> {
        let mut parts = cmd.split_whitespace().map(String::from);
        let program = parts.next()?;
        let mut args: Vec<String> = parts.collect();
        let input = if args.iter().any(|a| a == "-in" || a == "--in" || a == "-") {
            SolverInput::Stdin
        } else {
            SolverInput::File
        };
        if args.is_empty() && program.ends_with("z3") {
            args.push("-smt2".into());
        }
        Some(SolverConfig { program, args, input, ..SolverConfig::z3() })
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }
}

pub type Model = BTreeMap<String, i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolverVerdict {
    Sat(Model),
    Unsat,
    Unknown,
    Timeout,
    Error(String),
}

fn int(v: i64) -> String {
    if v < 0 {
        format!("(- {})", v.unsigned_abs())
    } else {
        v.to_string()
    }
}

fn emit_expr(e: &LinExpr, reg: &Registry) -> String {
    let mut parts = Vec::new();
    for (m, k) in &e.terms {
        let factor = m.factor.map_or_else(|| "1".to_string(), |v| reg.get(v).name.clone());
        let base = if m.guards.is_empty() {
            factor
        } else {
            let conds: Vec<_> = m.guards.iter().map(|g| format!("(= {} 1)", reg.get(*g).name)).collect();
            let cond = if conds.len() == 1 { conds[0].clone() } else { format!("(and {})", conds.join(" ")) };
            format!("(ite {cond} {factor} 0)")
        };
        parts.push(if *k == 1 { base } else { format!("(* {} {base})", int(*k)) });
    }
    if e.constant != 0 || parts.is_empty() {
        parts.push(int(e.constant));
    }
    if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        format!("(+ {})", parts.join(" "))
    }
}

fn emit_formula(f: &Formula, reg: &Registry, out: &mut String) {
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Def(i) => {
            let _ = write!(out, "def_{i}");
        }
        Formula::Not(p) => {
            out.push_str("(not ");
            emit_formula(p, reg, out);
            out.push(')');
        }
        Formula::And(ps) | Formula::Or(ps) => {
            out.push_str(if matches!(f, Formula::And(_)) { "(and" } else { "(or" });
            for p in ps {
                out.push(' ');
                emit_formula(p, reg, out);
            }
            out.push(')');
        }
        Formula::Atom(e, cmp) => {
            let op = match cmp {
                Cmp::Ge => ">=",
                Cmp::Gt => ">",
                Cmp::Eq => "=",
            };
            let _ = write!(out, "({op} {} 0)", emit_expr(e, reg));
        }
    }
}

/// Deterministic QF_LIA script: declarations with ranges, shared definitions, the constraint,
/// any extra assertions, `check-sat` and `get-value`.
pub fn emit_smtlib(reg: &Registry, defs: &[Formula], constraint: &Formula, extra: &[Formula]) -> String {
    let mut out = String::from("(set-logic QF_LIA)\n");
    for (_, v) in reg.iter() {
        let _ = writeln!(out, "(declare-fun {} () Int)", v.name);
        let _ = writeln!(out, "(assert (and (<= {} {}) (<= {} {})))", int(v.lo), v.name, v.name, int(v.hi));
    }
    for (i, d) in defs.iter().enumerate() {
        let _ = writeln!(out, "(declare-fun def_{i} () Bool)");
        out.push_str(&format!("(assert (= def_{i} "));
        emit_formula(d, reg, &mut out);
        out.push_str("))\n");
    }
    for f in std::iter::once(constraint).chain(extra) {
        out.push_str("(assert ");
        emit_formula(f, reg, &mut out);
        out.push_str(")\n");
    }
    out.push_str("(check-sat)\n");
    if !reg.is_empty() {
        let names: Vec<_> = reg.iter().map(|(_, v)| v.name.as_str()).collect();
        let _ = writeln!(out, "(get-value ({}))", names.join(" "));
    }
    out
}

pub fn emit_encoding(enc: &Encoding) -> String {
    emit_smtlib(&enc.registry, &enc.defs, &enc.constraint, &[])
}

/// Runs the solver on a script, killing it once the timeout elapses.
pub fn solve(script: &str, cfg: &SolverConfig) -> SolverVerdict {
    if cfg.timeout.is_zero() {
        return SolverVerdict::Error("solver timeout must be positive".into());
    }
    let script = match script.strip_prefix("(set-logic QF_LIA)") {
        Some(rest) if cfg.logic != "QF_LIA" => format!("(set-logic {}){rest}", cfg.logic),
        _ => script.to_string(),
    };
    let script = script.as_str();
    let mut cmd = Command::new(&cfg.program);
    cmd.args(&cfg.args).stdout(Stdio::piped()).stderr(Stdio::piped());
    let _file;
    match cfg.input {
        SolverInput::File => {
            let mut f = match tempfile::Builder::new().suffix(".smt2").tempfile() {
                Ok(f) => f,
                Err(e) => return SolverVerdict::Error(format!("cannot create script file: {e}")),
            };
            if let Err(e) = f.write_all(script.as_bytes()).and_then(|_| f.flush()) {
                return SolverVerdict::Error(format!("cannot write script file: {e}"));
            }
            cmd.arg(f.path()).stdin(Stdio::null());
            _file = f;
        }
        SolverInput::Stdin => {
            cmd.stdin(Stdio::piped());
        }
    }
    let mut child = match cmd.spawn() {
        Ok(c) => c,
        Err(e) => return SolverVerdict::Error(format!("cannot start `{}`: {e}", cfg.program)),
    };
    if let Some(mut stdin) = child.stdin.take() {
        let script = script.to_string();
        std::thread::spawn(move || {
            let _ = stdin.write_all(script.as_bytes());
        });
    }
    let mut stdout = child.stdout.take().expect("piped stdout");
    let reader = std::thread::spawn(move || {
        let mut s = String::new();
        let _ = stdout.read_to_string(&mut s);
        s
    });
    let mut stderr = child.stderr.take().expect("piped stderr");
    let err_reader = std::thread::spawn(move || {
        let mut s = String::new();
        let _ = stderr.read_to_string(&mut s);
        s
    });
    let deadline = Instant::now() + cfg.timeout;
    loop {
        match child.try_wait() {
            Ok(Some(_)) => break,
            Ok(None) if Instant::now() >= deadline => {
                let _ = child.kill();
                let _ = child.wait();
                return SolverVerdict::Timeout;
            }
            Ok(None) => std::thread::sleep(Duration::from_millis(2)),
            Err(e) => return SolverVerdict::Error(e.to_string()),
        }
    }
    let out = reader.join().unwrap_or_default();
    let err = err_reader.join().unwrap_or_default();
    parse_output(&out, &err)
}

fn parse_output(out: &str, err: &str) -> SolverVerdict {
    let mut sexps = match parse_sexps(out) {
        Ok(s) => s.into_iter(),
        Err(e) => return SolverVerdict::Error(format!("unreadable solver output: {e}")),
    };
    match sexps.next() {
        Some(Sexp::Atom(a)) if a == "sat" => {}
        Some(Sexp::Atom(a)) if a == "unsat" => return SolverVerdict::Unsat,
        Some(Sexp::Atom(a)) if a == "unknown" || a == "timeout" => return SolverVerdict::Unknown,
        other => {
            let msg = match other {
                Some(s) => s.to_string(),
                None => err.trim().to_string(),
            };
            return SolverVerdict::Error(if msg.is_empty() { "no solver output".into() } else { msg });
        }
    }
    let mut model = Model::new();
    if let Some(Sexp::List(pairs)) = sexps.next() {
        for p in pairs {
            let Sexp::List(kv) = p else { return SolverVerdict::Error(format!("bad model entry {p}")) };
            match kv.as_slice() {
                [Sexp::Atom(k), v] => match sexp_int(v) {
                    Some(n) => {
                        model.insert(k.clone(), n);
                    }
                    None => return SolverVerdict::Error(format!("non-integer value for {k}: {v}")),
                },
                _ => return SolverVerdict::Error("bad model entry".into()),
            }
        }
    }
    SolverVerdict::Sat(model)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

impl std::fmt::Display for Sexp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sexp::Atom(a) => f.write_str(a),
            Sexp::List(xs) => {
                f.write_str("(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
        }
    }
}

fn parse_sexps(text: &str) -> Result<Vec<Sexp>, String> {
    let mut stack: Vec<Vec<Sexp>> = vec![Vec::new()];
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '(' => {
                chars.next();
                stack.push(Vec::new());
            }
            ')' => {
                chars.next();
                let done = stack.pop().ok_or("unbalanced `)`")?;
                stack.last_mut().ok_or("unbalanced `)`")?.push(Sexp::List(done));
            }
            '"' => {
                chars.next();
                let mut s = String::from("\"");
                for c in chars.by_ref() {
                    s.push(c);
                    if c == '"' {
                        break;
                    }
                }
                stack.last_mut().unwrap().push(Sexp::Atom(s));
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' {
                        break;
                    }
                    s.push(c);
                    chars.next();
                }
                stack.last_mut().unwrap().push(Sexp::Atom(s));
            }
        }
        if stack.is_empty() {
            return Err("unbalanced `)`".into());
        }
    }
    if stack.len() != 1 {
        return Err("unbalanced `(`".into());
    }
    Ok(stack.pop().unwrap())
}

fn sexp_int(s: &Sexp) -> Option<i64> {
    match s {
        Sexp::Atom(a) => a.parse().ok(),
        Sexp::List(xs) => match xs.as_slice() {
            [Sexp::Atom(m), v] if m == "-" => sexp_int(v).map(|n| -n),
            _ => None,
        },
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum DecodeError {
    #[error("model has no value for `{0}`")]
    Missing(String),
    #[error("model value {value} for `{name}` is outside [{lo}, {hi}]")]
    OutOfRange { name: String, value: i64, lo: i64, hi: i64 },
    #[error("decoded interpretation is invalid: {0}")]
    Invalid(String),
}

/// Model values indexed by unknown, after range checks.
pub fn model_values(model: &Model, reg: &Registry) -> Result<Vec<i64>, DecodeError> {
    reg.iter()
        .map(|(_, v)| {
            let value = *model.get(&v.name).ok_or_else(|| DecodeError::Missing(v.name.clone()))?;
            if !(v.lo..=v.hi).contains(&value) {
                return Err(DecodeError::OutOfRange { name: v.name.clone(), value, lo: v.lo, hi: v.hi });
            }
            Ok(value)
        })
        .collect()
}

/// Reads an algebra and precedence out of a model.
pub fn decode_model(model: &Model, enc: &Encoding) -> Result<(Algebra<i64>, Precedence), DecodeError> {
    let values = model_values(model, &enc.registry)?;
    decode_values(&values, enc)
}

pub fn decode_values(values: &[i64], enc: &Encoding) -> Result<(Algebra<i64>, Precedence), DecodeError> {
    let get = |p: &Param| match p {
        Param::Fixed(v) => *v,
        Param::Var(id) => values[*id],
    };
    let invalid = |e: crate::algebra::AlgebraError| DecodeError::Invalid(e.to_string());
    let mut algebra = Algebra::new(enc.space.interp);
    for (sym, p) in &enc.params {
        let c0 = get(&p.constant);
        let interp = match enc.space.interp {
            AlgebraKind::Linear => {
                Interp::Linear(LinearInterp::new(c0, p.args.iter().map(|(c, _)| get(c)).collect()).map_err(invalid)?)
            }
            AlgebraKind::MaxPlus => Interp::MaxPlus(
                MaxPlusInterp::new(c0, p.args.iter().map(|(c, d)| (get(c), get(d))).collect()).map_err(invalid)?,
            ),
        };
        algebra.insert(sym.clone(), interp).map_err(invalid)?;
    }
    let mut prec = Precedence::new();
    for (name, p) in &enc.levels {
        prec.set(name, get(p) as u32);
    }
    Ok((algebra, prec))
}
