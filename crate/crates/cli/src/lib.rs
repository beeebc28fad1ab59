//! Query layer behind the `artin-tcp` binary.

pub mod bench;
pub mod selftest;

use std::collections::BTreeMap;
use std::time::Instant;

use artin_tcp::conjugacy::{orbit_decide, verify_psi_witness, AutomorphismError};
use artin_tcp::normal_form::{central_form, classify, garside_normal_form, geodesic, word_equals};
use artin_tcp::twisted::{tcp_phi_report, verify_witness};
use artin_tcp::words::{parse_with_alphabet, ParamError, ParseError};
use artin_tcp::{concat, conjugate, free_reduce, invert, tcp, AutomorphismSpec, GroupParams, Word};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("invalid automorphism: {0}")]
    Automorphism(AutomorphismError),
    #[error("witness {witness:?} failed re-verification for {command}")]
    Witness { command: String, witness: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_)
            | CliError::Automorphism(AutomorphismError::Parse(_) | AutomorphismError::MissingSeparator) => 2,
            CliError::Params(_) | CliError::Automorphism(_) => 3,
            CliError::Witness { .. } => 4,
        }
    }
}

impl From<AutomorphismError> for CliError {
    fn from(e: AutomorphismError) -> Self {
        CliError::Automorphism(e)
    }
}

/// `a ↦ y^-k x`, `b ↦ x^-1 y^(k+1)`.
pub fn generator_images(p: GroupParams) -> (Word, Word) {
    let k = p.k();
    let a = Word::from_syllables([artin_tcp::Syllable::y(-k), artin_tcp::Syllable::x(1)]);
    let b = Word::from_syllables([artin_tcp::Syllable::x(-1), artin_tcp::Syllable::y(k + 1)]);
    (a, b)
}

/// Rewrites a word over `a, b, A, B` into x and y.
pub fn translate_presentation(text: &str, p: GroupParams) -> Result<Word, ParseError> {
    let (a, b) = generator_images(p);
    let mut out = Word::empty();
    for (g, e) in parse_with_alphabet(text, ['a', 'b', 'A', 'B'])? {
        let image = if g == 0 { &a } else { &b };
        let base = if e < 0 { invert(image) } else { image.clone() };
        out.extend(&base.pow(e.unsigned_abs()));
    }
    Ok(free_reduce(&out))
}

/// The alternating word `ghgh…` of length `m` starting with `first`.
pub fn alternating(m: i64, first: char) -> String {
    let second = if first == 'a' { 'b' } else { 'a' };
    (0..m).map(|i| if i % 2 == 0 { first } else { second }).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GarsideReport {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub c: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralReport {
    pub q: String,
    pub c: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalFormReport {
    pub input: String,
    pub geodesic: String,
    #[serde(rename = "type")]
    pub kind: String,
    pub garside: GarsideReport,
    pub central: CentralReport,
    pub length: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub stage: String,
    pub micros: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryResult {
    pub command: String,
    pub m: i64,
    /// Absent for `nf` and `translate`, whose answers are forms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<bool>,
    #[serde(default)]
    pub witness: Option<String>,
    /// Command-specific keys, flattened into the top-level object.
    #[serde(flatten)]
    pub details: BTreeMap<String, Value>,
    pub timings: Vec<Timing>,
}

impl QueryResult {
    fn new(command: &str, p: GroupParams, verdict: Option<bool>) -> Self {
        Self {
            command: command.to_string(),
            m: p.m(),
            verdict,
            witness: None,
            details: BTreeMap::new(),
            timings: Vec::new(),
        }
    }

    fn detail(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    /// Human-readable rendering.
    pub fn to_text(&self) -> String {
        let mut lines = Vec::new();
        if let Some(v) = self.verdict {
            lines.push(v.to_string());
        }
        if let Some(w) = &self.witness {
            lines.push(format!("witness: {}", show(w)));
        }
        for (k, v) in self.details.iter().filter(|(k, _)| k.as_str() != "twisted_conjugate") {
            let v = match v {
                Value::String(s) => show(s).to_string(),
                other => other.to_string(),
            };
            lines.push(format!("{k}: {v}"));
        }
        lines.join("\n")
    }
}

fn show(w: &str) -> &str {
    if w.is_empty() {
        "ε"
    } else {
        w
    }
}

struct Stopwatch {
    start: Instant,
    timings: Vec<Timing>,
}

impl Stopwatch {
    fn new() -> Self {
        Self { start: Instant::now(), timings: Vec::new() }
    }

    fn lap(&mut self, stage: &str) {
        let micros = self.start.elapsed().as_micros() as u64;
        self.timings.push(Timing { stage: stage.to_string(), micros });
        self.start = Instant::now();
    }
}

pub fn parse(text: &str) -> Result<Word, CliError> {
    Ok(artin_tcp::parse_word(text)?)
}

fn witness_failure(command: &str, w: &Word) -> CliError {
    CliError::Witness { command: command.to_string(), witness: w.to_string() }
}

pub fn nf_query(input: &str, p: GroupParams) -> Result<QueryResult, CliError> {
    let mut sw = Stopwatch::new();
    let w = parse(input)?;
    sw.lap("parse");
    let g = geodesic(&w, p);
    sw.lap("geodesic");
    let kind = match classify(&g, p) {
        Ok(t) => t.to_string(),
        Err(e) => format!("unclassified ({e})"),
    };
    let gf = garside_normal_form(&w, p);
    let cf = central_form(&w, p);
    sw.lap("forms");
    let report = NormalFormReport {
        input: w.to_string(),
        geodesic: g.to_string(),
        kind,
        garside: GarsideReport { a: gf.a.clone(), b: gf.b.clone(), c: gf.c },
        central: CentralReport { q: cf.to_word().to_string(), c: cf.c },
        length: g.len(),
    };
    let mut r = QueryResult::new("nf", p, None);
    if let Value::Object(fields) = serde_json::to_value(&report).expect("reports serialize") {
        r.details.extend(fields);
    }
    r.timings = sw.timings;
    Ok(r)
}

pub fn eq_query(u: &str, v: &str, p: GroupParams) -> Result<QueryResult, CliError> {
    let mut sw = Stopwatch::new();
    let (u, v) = (parse(u)?, parse(v)?);
    sw.lap("parse");
    let verdict = word_equals(&u, &v, p);
    sw.lap("decide");
    let mut r = QueryResult::new("eq", p, Some(verdict));
    r.timings = sw.timings;
    Ok(r)
}

pub fn cp_query(u: &str, v: &str, p: GroupParams, with_witness: bool) -> Result<QueryResult, CliError> {
    let mut sw = Stopwatch::new();
    let (u, v) = (parse(u)?, parse(v)?);
    sw.lap("parse");
    let d = conjugate(&u, &v, p);
    sw.lap("decide");
    let mut r = QueryResult::new("cp", p, Some(d.verdict));
    if with_witness {
        if let Some(g) = d.witness {
            if !word_equals(&concat(&concat(&invert(&g), &u), &g), &v, p) {
                return Err(witness_failure("cp", &g));
            }
            sw.lap("verify");
            r.witness = Some(g.to_string());
        }
    }
    r.timings = sw.timings;
    Ok(r)
}

pub fn tcp_phi_query(u: &str, v: &str, p: GroupParams, with_witness: bool) -> Result<QueryResult, CliError> {
    let mut sw = Stopwatch::new();
    let (u, v) = (parse(u)?, parse(v)?);
    sw.lap("parse");
    let report = tcp_phi_report(&u, &v, p);
    sw.lap("decide");
    let mut r = QueryResult::new("tcp-phi", p, Some(report.decision.verdict))
        .detail("twisted_conjugate", report.decision.verdict)
        .detail("u_min", report.u_min.to_string())
        .detail("v_min", report.v_min.to_string());
    if with_witness {
        if let Some(w) = report.decision.witness {
            if !verify_witness(&u, &v, &w, p) {
                return Err(witness_failure("tcp-phi", &w));
            }
            sw.lap("verify");
            r.witness = Some(w.to_string());
        }
    }
    r.timings = sw.timings;
    Ok(r)
}

pub fn tcp_query(u: &str, v: &str, auto: &str, p: GroupParams, with_witness: bool) -> Result<QueryResult, CliError> {
    let mut sw = Stopwatch::new();
    let (u, v) = (parse(u)?, parse(v)?);
    let psi = AutomorphismSpec::parse(auto, p)?;
    sw.lap("parse");
    let answer = tcp(&u, &v, &psi, p)?;
    sw.lap("decide");
    let mut r = QueryResult::new("tcp", p, Some(answer.decision.verdict))
        .detail("inner_part", answer.inner_part.g.to_string())
        .detail("outer", answer.inner_part.outer);
    if with_witness {
        if let Some(w) = answer.decision.witness {
            if !verify_psi_witness(&u, &v, &w, &psi, p) {
                return Err(witness_failure("tcp", &w));
            }
            sw.lap("verify");
            r.witness = Some(w.to_string());
        }
    }
    r.timings = sw.timings;
    Ok(r)
}

pub fn orbit_query(
    u: &str,
    v: &str,
    autos: &[String],
    p: GroupParams,
    with_witness: bool,
) -> Result<QueryResult, CliError> {
    let mut sw = Stopwatch::new();
    let (u, v) = (parse(u)?, parse(v)?);
    let gens = autos.iter().map(|a| AutomorphismSpec::parse(a, p)).collect::<Result<Vec<_>, _>>()?;
    sw.lap("parse");
    let answer = orbit_decide(&u, &v, &gens, p)?;
    sw.lap("decide");
    let mut r = QueryResult::new("orbit", p, Some(answer.decision.verdict))
        .detail("applied_phi", answer.applied_phi)
        .detail("all_inner", answer.all_inner);
    if with_witness {
        if let Some(g) = answer.decision.witness {
            let h = if answer.applied_phi { artin_tcp::apply_phi(&u) } else { u.clone() };
            if !word_equals(&concat(&concat(&invert(&g), &h), &g), &v, p) {
                return Err(witness_failure("orbit", &g));
            }
            sw.lap("verify");
            r.witness = Some(g.to_string());
        }
    }
    r.timings = sw.timings;
    Ok(r)
}

pub fn translate_query(input: &str, p: GroupParams) -> Result<QueryResult, CliError> {
    let mut sw = Stopwatch::new();
    let w = translate_presentation(input, p)?;
    sw.lap("translate");
    let mut r = QueryResult::new("translate", p, None).detail("image", w.to_string());
    r.timings = sw.timings;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(m: i64) -> GroupParams {
        GroupParams::new(m).unwrap()
    }

    #[test]
    fn translation_examples() {
        assert_eq!(translate_presentation("b", p(3)).unwrap(), parse("x^-1 y^2").unwrap());
        assert_eq!(translate_presentation("ab", p(5)).unwrap(), parse("y").unwrap());
        let x = translate_presentation(&alternating(3, 'a'), p(3)).unwrap();
        assert!(word_equals(&x, &Word::x(1), p(3)));
        assert!(translate_presentation("abc", p(3)).is_err());
    }

    #[test]
    fn artin_relation_holds() {
        for m in [3, 5, 7, 9] {
            let lhs = translate_presentation(&alternating(m, 'a'), p(m)).unwrap();
            let rhs = translate_presentation(&alternating(m, 'b'), p(m)).unwrap();
            assert!(word_equals(&lhs, &rhs, p(m)));
        }
    }

    #[test]
    fn inverse_letters() {
        let w = translate_presentation("a A b^-2 B^-2", p(5)).unwrap();
        assert!(w.is_empty());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::from(ParseError::DanglingExponent { offset: 0 }).exit_code(), 2);
        assert_eq!(CliError::from(ParamError::InvalidM(4)).exit_code(), 3);
        assert_eq!(CliError::from(AutomorphismError::NotAutomorphism).exit_code(), 3);
        assert_eq!(witness_failure("cp", &Word::x(1)).exit_code(), 4);
    }

    #[test]
    fn json_round_trip() {
        let results = [
            nf_query("x^3 y^-1 x", p(3)).unwrap(),
            tcp_phi_query("x^-1 y x^-1 y", "y x^-1 y^-1 x^-1", p(3), true).unwrap(),
            translate_query("ab", p(5)).unwrap(),
            eq_query("x^2", "y^3", p(3)).unwrap(),
        ];
        for r in results {
            let text = serde_json::to_string(&r).unwrap();
            let back: QueryResult = serde_json::from_str(&text).unwrap();
            assert_eq!(back, r);
        }
    }

    #[test]
    fn queries_answer() {
        assert_eq!(eq_query("x^2", "y^3", p(3)).unwrap().verdict, Some(true));
        let r = cp_query("x y", "y x", p(3), true).unwrap();
        assert_eq!(r.verdict, Some(true));
        assert!(r.witness.is_some());
        let r = tcp_query("x y", "y x", "x;y", p(3), true).unwrap();
        assert_eq!(r.verdict, Some(true));
        let r = tcp_query("x", "y", "X;Y", p(3), true).unwrap();
        assert_eq!(r.verdict, Some(false));
        assert_eq!(r.details["outer"], Value::Bool(true));
        let r = orbit_query("x y", "X Y", &["X;Y".into()], p(3), true).unwrap();
        assert_eq!(r.verdict, Some(true));
    }
}
