//! Proof search pipeline, certificates and the corpus harness.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraKind};
use crate::encode::{
    encode_orientation, encode_variable_condition, EncodeError, OrderClass, SearchSpace, VariableCondition,
};
use crate::orders::{explain_gwpo, explain_wpo, Derivation, OrderError, Precedence};
use crate::smt::{decode_model, emit_encoding, solve, SolverConfig, SolverVerdict};
use crate::trs::{parse_trs, Trs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Answer {
    Yes,
    No,
    Maybe,
    Timeout,
}

impl Answer {
    /// Whether the answer settles termination either way.
    pub fn is_decided(self) -> bool {
        matches!(self, Answer::Yes | Answer::No)
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "YES",
            Answer::No => "NO",
            Answer::Maybe => "MAYBE",
            Answer::Timeout => "TIMEOUT",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProverConfig {
    pub space: SearchSpace,
    pub solver: SolverConfig,
    /// Write the SMT-LIB script here before solving.
    pub dump_smt: Option<PathBuf>,
}

impl ProverConfig {
    pub fn new(order: OrderClass, interp: AlgebraKind) -> Result<Self, EncodeError> {
        Ok(ProverConfig { space: SearchSpace::new(order, interp)?, solver: SolverConfig::z3(), dump_smt: None })
    }

    pub fn with_solver(mut self, solver: SolverConfig) -> Self {
        self.solver = solver;
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Timings {
    pub parse: Duration,
    pub encode: Duration,
    pub solve: Duration,
    pub verify: Duration,
}

/// An algebra and precedence claimed to orient a rewrite system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub order: OrderClass,
    pub algebra: Algebra<i64>,
    pub precedence: Precedence,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "order: {}", self.order)?;
        writeln!(f, "interpretation: {}", self.algebra.kind())?;
        writeln!(f, "algebra:")?;
        for line in self.algebra.to_string().lines() {
            writeln!(f, "  {line}")?;
        }
        writeln!(f, "precedence:")?;
        for line in self.precedence.to_string().lines() {
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("certificate line {line}: {msg}")]
pub struct CertificateError {
    pub line: usize,
    pub msg: String,
}

impl Certificate {
    pub fn parse(text: &str) -> Result<Self, CertificateError> {
        let err = |line: usize, msg: String| CertificateError { line, msg };
        let mut order = None;
        let mut kind = None;
        let mut algebra = String::new();
        let mut precedence = String::new();
        let mut section = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with(';') {
                continue;
            }
            if let Some(v) = line.strip_prefix("order:") {
                order = Some(v.trim().parse::<OrderClass>().map_err(|e| err(i + 1, e))?);
            } else if let Some(v) = line.strip_prefix("interpretation:") {
                kind = Some(v.trim().parse::<AlgebraKind>().map_err(|e| err(i + 1, e.to_string()))?);
            } else if line == "algebra:" || line == "precedence:" {
                section = Some(line);
            } else {
                let buf = match section {
                    Some("algebra:") => &mut algebra,
                    Some(_) => &mut precedence,
                    None => return Err(err(i + 1, format!("unexpected `{line}`"))),
                };
                buf.push_str(line);
                buf.push('\n');
            }
        }
        let order = order.ok_or_else(|| err(0, "missing `order:`".into()))?;
        let kind = kind.ok_or_else(|| err(0, "missing `interpretation:`".into()))?;
        let algebra = Algebra::parse(kind, &algebra).map_err(|e| err(0, e.to_string()))?;
        let precedence = Precedence::parse(&precedence).map_err(|e| err(0, e.to_string()))?;
        Ok(Certificate { order, algebra, precedence })
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("algebra is not weakly monotone")]
    NotMonotone,
    #[error("algebra is not simple, as {0} requires")]
    NotSimple(OrderClass),
    #[error("rule {} ({rule}) is not oriented", index + 1)]
    NotOriented { index: usize, rule: String },
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// Re-checks a certificate with the concrete order implementation, returning one derivation
/// per rule.
pub fn verify(trs: &Trs, cert: &Certificate) -> Result<Vec<Derivation>, VerifyError> {
    let alg = &cert.algebra;
    if !alg.is_weakly_monotone() {
        return Err(VerifyError::NotMonotone);
    }
    if cert.order.is_wpo_family() && !alg.is_simple() {
        return Err(VerifyError::NotSimple(cert.order));
    }
    let mut out = Vec::new();
    for (index, rule) in trs.rules.iter().enumerate() {
        if !rule.is_well_formed() {
            return Err(OrderError::IllFormedRule(rule.to_string()).into());
        }
        let d = match cert.order {
            OrderClass::Gwpo => explain_gwpo(alg, &cert.precedence, &rule.lhs, &rule.rhs)?,
            _ => explain_wpo(alg, &cert.precedence, &rule.lhs, &rule.rhs)?,
        };
        out.push(d.ok_or_else(|| VerifyError::NotOriented { index, rule: rule.to_string() })?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofResult {
    pub answer: Answer,
    pub certificate: Option<Certificate>,
    /// One derivation per rule, present exactly when the answer is YES.
    pub derivations: Vec<Derivation>,
    pub diagnostic: Option<String>,
    pub parse_error: bool,
    pub timings: Timings,
}

impl ProofResult {
    fn undecided(answer: Answer, diagnostic: impl Into<String>, timings: Timings) -> Self {
        ProofResult {
            answer,
            certificate: None,
            derivations: Vec::new(),
            diagnostic: Some(diagnostic.into()),
            parse_error: false,
            timings,
        }
    }

    /// Human-readable proof block.
    pub fn proof_text(&self, trs: Option<&Trs>) -> String {
        let mut out = String::new();
        if let Some(d) = &self.diagnostic {
            out.push_str(&format!("{d}\n"));
        }
        if let Some(c) = &self.certificate {
            out.push_str(&c.to_string());
        }
        if !self.derivations.is_empty() {
            out.push_str("derivations:\n");
            for (i, d) in self.derivations.iter().enumerate() {
                if let Some(r) = trs.and_then(|t| t.rules.get(i)) {
                    out.push_str(&format!("  rule {}: {r}\n", i + 1));
                }
                for line in d.to_string().lines() {
                    out.push_str(&format!("    {line}\n"));
                }
            }
        }
        out
    }
}

/// Outcome of the search phase, before any verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Certificate),
    Failed(ProofResult),
}

static SAT_VERDICTS: AtomicUsize = AtomicUsize::new(0);
static SAT_VERIFIED: AtomicUsize = AtomicUsize::new(0);

/// Process-wide count of satisfiable searches and of those whose certificate passed
/// verification.
pub fn soundness_counters() -> (usize, usize) {
    (SAT_VERDICTS.load(Ordering::SeqCst), SAT_VERIFIED.load(Ordering::SeqCst))
}

/// Encodes, solves and decodes. Timings are recorded in the returned result or `timings`.
pub fn search(trs: &Trs, cfg: &ProverConfig, timings: &mut Timings) -> SearchOutcome {
    let t0 = Instant::now();
    let enc = match encode_orientation(trs, cfg.space) {
        Ok(e) => e,
        Err(e) => return SearchOutcome::Failed(ProofResult::undecided(Answer::Maybe, e.to_string(), *timings)),
    };
    let script = emit_encoding(&enc);
    timings.encode = t0.elapsed();
    if let Some(path) = &cfg.dump_smt {
        if let Err(e) = std::fs::write(path, &script) {
            let msg = format!("cannot write {}: {e}", path.display());
            return SearchOutcome::Failed(ProofResult::undecided(Answer::Maybe, msg, *timings));
        }
    }
    let t1 = Instant::now();
    let verdict = solve(&script, &cfg.solver);
    timings.solve = t1.elapsed();
    let fail = |a, msg: &str| SearchOutcome::Failed(ProofResult::undecided(a, msg, *timings));
    match verdict {
        SolverVerdict::Sat(model) => {
            SAT_VERDICTS.fetch_add(1, Ordering::SeqCst);
            match decode_model(&model, &enc) {
                Ok((algebra, precedence)) => {
                    SearchOutcome::Found(Certificate { order: cfg.space.order, algebra, precedence })
                }
                Err(e) => fail(Answer::Maybe, &e.to_string()),
            }
        }
        SolverVerdict::Unsat => fail(Answer::Maybe, "no orientation exists in the search space"),
        SolverVerdict::Unknown => fail(Answer::Maybe, "solver returned unknown"),
        SolverVerdict::Timeout => fail(Answer::Timeout, "solver timed out"),
        SolverVerdict::Error(e) => fail(Answer::Maybe, &format!("solver error: {e}")),
    }
}

/// Verifies a certificate and answers YES only if every rule is oriented.
pub fn conclude(trs: &Trs, cert: Certificate, mut timings: Timings) -> ProofResult {
    let t = Instant::now();
    let checked = verify(trs, &cert);
    timings.verify = t.elapsed();
    match checked {
        Ok(derivations) => {
            SAT_VERIFIED.fetch_add(1, Ordering::SeqCst);
            ProofResult {
                answer: Answer::Yes,
                certificate: Some(cert),
                derivations,
                diagnostic: None,
                parse_error: false,
                timings,
            }
        }
        Err(e) => ProofResult {
            certificate: Some(cert),
            ..ProofResult::undecided(Answer::Maybe, format!("verification failed: {e}"), timings)
        },
    }
}

pub fn prove(trs: &Trs, cfg: &ProverConfig) -> ProofResult {
    let mut timings = Timings::default();
    if let VariableCondition::NonTerminating(i) = encode_variable_condition(trs) {
        let msg = format!("rule {} ({}) violates the variable condition", i + 1, trs.rules[i]);
        return ProofResult::undecided(Answer::No, msg, timings);
    }
    match search(trs, cfg, &mut timings) {
        SearchOutcome::Found(cert) => conclude(trs, cert, timings),
        SearchOutcome::Failed(r) => r,
    }
}

/// Parses and proves. Parse errors give MAYBE with `parse_error` set.
pub fn prove_text(text: &str, cfg: &ProverConfig) -> (Option<Trs>, ProofResult) {
    let t = Instant::now();
    let trs = parse_trs(text);
    let parse = t.elapsed();
    match trs {
        Ok(trs) => {
            let mut r = prove(&trs, cfg);
            r.timings.parse = parse;
            (Some(trs), r)
        }
        Err(e) => {
            let timings = Timings { parse, ..Timings::default() };
            let mut r = ProofResult::undecided(Answer::Maybe, format!("parse error: {e}"), timings);
            r.parse_error = true;
            (None, r)
        }
    }
}

/// One column of the corpus table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BenchConfig {
    pub name: &'static str,
    pub order: OrderClass,
    pub interp: AlgebraKind,
}

pub const BENCH_CONFIGS: [BenchConfig; 6] = [
    BenchConfig { name: "kbo", order: OrderClass::Kbo, interp: AlgebraKind::Linear },
    BenchConfig { name: "wpo-linear", order: OrderClass::Wpo, interp: AlgebraKind::Linear },
    BenchConfig { name: "gwpo-linear", order: OrderClass::Gwpo, interp: AlgebraKind::Linear },
    BenchConfig { name: "lpo", order: OrderClass::Lpo, interp: AlgebraKind::MaxPlus },
    BenchConfig { name: "wpo-maxplus", order: OrderClass::Wpo, interp: AlgebraKind::MaxPlus },
    BenchConfig { name: "gwpo-maxplus", order: OrderClass::Gwpo, interp: AlgebraKind::MaxPlus },
];

pub fn bench_config(name: &str) -> Option<BenchConfig> {
    BENCH_CONFIGS.iter().copied().find(|c| c.name == name)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub file: String,
    pub config: &'static str,
    pub answer: Answer,
    pub timings: Timings,
    pub diagnostic: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorpusReport {
    pub configs: Vec<&'static str>,
    pub files: Vec<String>,
    /// Sorted by file, then by configuration order.
    pub entries: Vec<CorpusEntry>,
    pub wall: Duration,
}

impl CorpusReport {
    pub fn answer(&self, file: &str, config: &str) -> Option<Answer> {
        self.entries.iter().find(|e| e.file == file && e.config == config).map(|e| e.answer)
    }

    pub fn count(&self, config: &str, answer: Answer) -> usize {
        self.entries.iter().filter(|e| e.config == config && e.answer == answer).count()
    }

    pub fn proved(&self, config: &str) -> Vec<&str> {
        self.entries.iter().filter(|e| e.config == config && e.answer == Answer::Yes).map(|e| e.file.as_str()).collect()
    }

    /// Per-file answers followed by totals per configuration.
    pub fn table(&self) -> String {
        let fw = self.files.iter().map(String::len).chain(["timeouts".len()]).max().unwrap_or(0);
        let widths: Vec<_> = self.configs.iter().map(|c| c.len().max(7)).collect();
        let row = |label: &str, cells: Vec<String>| {
            let mut s = format!("{label:<fw$}");
            for (c, w) in cells.iter().zip(&widths) {
                s.push_str(&format!("  {c:>w$}"));
            }
            s.trim_end().to_string() + "\n"
        };
        let mut out = row("", self.configs.iter().map(|c| c.to_string()).collect());
        for f in &self.files {
            let cells = self.configs.iter().map(|c| self.answer(f, c).map_or("-".into(), |a| a.to_string())).collect();
            out.push_str(&row(f, cells));
        }
        for (label, a) in
            [("proved", Answer::Yes), ("no", Answer::No), ("maybe", Answer::Maybe), ("timeouts", Answer::Timeout)]
        {
            out.push_str(&row(label, self.configs.iter().map(|c| self.count(c, a).to_string()).collect()));
        }
        out.push_str(&format!("wall {:.2}s\n", self.wall.as_secs_f64()));
        out
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("file,config,answer,encode_ms,solve_ms,verify_ms\n");
        let ms = |d: Duration| format!("{:.3}", d.as_secs_f64() * 1000.0);
        for e in &self.entries {
            let file = if e.file.contains([',', '"']) {
                format!("\"{}\"", e.file.replace('"', "\"\""))
            } else {
                e.file.clone()
            };
            out.push_str(&format!(
                "{file},{},{},{},{},{}\n",
                e.config,
                e.answer,
                ms(e.timings.encode),
                ms(e.timings.solve),
                ms(e.timings.verify)
            ));
        }
        out
    }
}

/// Runs every `.trs` file in `dir` under every configuration on up to `jobs` threads.
pub fn run_corpus(
    dir: &Path,
    configs: &[BenchConfig],
    solver: &SolverConfig,
    const_bound: i64,
    jobs: usize,
) -> std::io::Result<CorpusReport> {
    let start = Instant::now();
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "trs"))
        .collect();
    files.sort();
    let tasks: Vec<(usize, BenchConfig)> =
        (0..files.len()).flat_map(|i| configs.iter().map(move |c| (i, *c))).collect();
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::with_capacity(tasks.len()));
    std::thread::scope(|s| {
        for _ in 0..jobs.max(1) {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::SeqCst);
                let Some((i, c)) = tasks.get(k) else { break };
                let entry = run_one(&files[*i], c, solver, const_bound);
                results.lock().unwrap().push((k, entry));
            });
        }
    });
    let mut results = results.into_inner().unwrap();
    results.sort_by_key(|(k, _)| *k);
    Ok(CorpusReport {
        configs: configs.iter().map(|c| c.name).collect(),
        files: files.iter().map(|f| file_label(f)).collect(),
        entries: results.into_iter().map(|(_, e)| e).collect(),
        wall: start.elapsed(),
    })
}

fn file_label(p: &Path) -> String {
    p.file_name().map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into_owned())
}

fn run_one(path: &Path, c: &BenchConfig, solver: &SolverConfig, const_bound: i64) -> CorpusEntry {
    let file = file_label(path);
    let mut entry =
        CorpusEntry { file, config: c.name, answer: Answer::Maybe, timings: Timings::default(), diagnostic: None };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            entry.diagnostic = Some(format!("cannot read: {e}"));
            return entry;
        }
    };
    let cfg = match ProverConfig::new(c.order, c.interp) {
        Ok(mut cfg) => {
            cfg.space = cfg.space.with_bound(const_bound);
            cfg.with_solver(solver.clone())
        }
        Err(e) => {
            entry.diagnostic = Some(e.to_string());
            return entry;
        }
    };
    let (_, r) = prove_text(&text, &cfg);
    entry.answer = r.answer;
    entry.timings = r.timings;
    entry.diagnostic = r.diagnostic;
    entry
}
