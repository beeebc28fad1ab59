//! Agreement checks between the decision procedures and the brute-force oracle.

use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use artin_tcp::normal_form::{extract_delta, fujii_conditions};
use artin_tcp::oracle::{reduced_words, Oracle, OracleConfig};
use artin_tcp::twisted::verify_witness;
use artin_tcp::{
    central_form, classify, concat, conjugate, geodesic, geodesic_length, invert, tcp_phi, word_equals,
    AutomorphismSpec, CentralForm, GroupParams, Word,
};
use serde::{Deserialize, Serialize};

const MAX_EXAMPLES: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub checked: usize,
    pub failures: usize,
    pub examples: Vec<String>,
}

impl Check {
    fn new(name: &str) -> Self {
        Self { name: name.to_string(), checked: 0, failures: 0, examples: Vec::new() }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.examples.len() < MAX_EXAMPLES {
                self.examples.push(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: {} checked, {} failed", self.name, self.checked, self.failures)?;
        for e in &self.examples {
            write!(f, "\n    {e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub m: i64,
    pub checks: Vec<Check>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "selftest m={}", self.m)?;
        for c in &self.checks {
            write!(f, "\n{c}")?;
        }
        Ok(())
    }
}

fn oracle_for(p: GroupParams, radius: u32) -> Oracle {
    Oracle::new(p, OracleConfig { ball_cap: radius.max(10), witness_cap: radius.max(8) })
}

/// Geodesic length against BFS distance, plus row uniqueness and the Fujii bounds, for every word of length `<= radius`.
pub fn check_geodesics(p: GroupParams, radius: u32) -> Check {
    let mut check = Check::new("geodesics");
    let mut oracle = oracle_for(p, radius);
    let ball = oracle.ball(radius).expect("radius within cap");
    for w in reduced_words(radius) {
        let dist = ball.distance(&w).expect("words of length <= radius lie in the ball") as u64;
        let g = geodesic(&w, p);
        let row = classify(&g, p);
        let fujii = fujii_conditions(&extract_delta(&g, p).body, p);
        let ok = geodesic_length(&w, p) == dist
            && g.len() == dist
            && word_equals(&g, &w, p)
            && row.is_ok()
            && fujii == [true; 4];
        check.record(ok, || format!("{w}: geodesic {g} (bfs {dist}), row {row:?}, fujii {fujii:?}"));
    }
    check
}

fn minimal_of(orbit: &HashMap<CentralForm, Word>, oracle: &mut Oracle, reach: u32) -> BTreeSet<CentralForm> {
    let ball = oracle.ball(reach).expect("reach within cap");
    let dists: Vec<(u32, &CentralForm)> = orbit.keys().filter_map(|cf| ball.get(cf).map(|e| (e.dist, cf))).collect();
    let best = dists.iter().map(|(d, _)| *d).min().unwrap_or(reach);
    dists.into_iter().filter(|(d, _)| *d == best).map(|(_, cf)| cf.clone()).collect()
}

/// Pairs of words of length `<= pair_len` under `ψ`: true verdicts must carry verifying witnesses, false verdicts must
/// have no oracle witness of length `<= witness_len`. For φ, false verdicts also need disjoint minimal classes.
fn check_pairs(
    name: &str,
    p: GroupParams,
    pair_len: u32,
    witness_len: u32,
    psi: &AutomorphismSpec,
    decide: impl Fn(&Word, &Word) -> (bool, Option<Word>),
    verifies: impl Fn(&Word, &Word, &Word) -> bool,
) -> Check {
    let mut check = Check::new(name);
    let mut oracle = oracle_for(p, witness_len.max(pair_len));
    let is_phi = *psi == AutomorphismSpec::phi();
    let words = reduced_words(pair_len);
    let mut minimal: HashMap<CentralForm, BTreeSet<CentralForm>> = HashMap::new();
    if is_phi {
        for w in &words {
            if let Entry::Vacant(slot) = minimal.entry(central_form(w, p)) {
                let orbit = oracle.twisted_orbit(w, psi, witness_len).expect("witness length within cap");
                slot.insert(minimal_of(&orbit, &mut oracle, pair_len));
            }
        }
    }
    for u in &words {
        let orbit = oracle.twisted_orbit(u, psi, witness_len).expect("witness length within cap");
        for v in &words {
            let (verdict, witness) = decide(u, v);
            let oracle_true = orbit.contains_key(&central_form(v, p));
            let ok = if verdict {
                witness.as_ref().is_some_and(|w| verifies(u, v, w))
            } else {
                !oracle_true && (!is_phi || minimal[&central_form(u, p)].is_disjoint(&minimal[&central_form(v, p)]))
            };
            check.record(ok, || {
                let shown = witness.as_ref().map_or("none".to_string(), |w| w.to_string());
                format!("({u}, {v}): verdict {verdict}, witness {shown}, oracle {oracle_true}")
            });
        }
    }
    check
}

pub fn check_tcp_phi(p: GroupParams, pair_len: u32, witness_len: u32) -> Check {
    check_pairs(
        "tcp-phi",
        p,
        pair_len,
        witness_len,
        &AutomorphismSpec::phi(),
        |u, v| {
            let d = tcp_phi(u, v, p);
            (d.verdict, d.witness)
        },
        |u, v, w| verify_witness(u, v, w, p),
    )
}

pub fn check_conjugacy(p: GroupParams, pair_len: u32, witness_len: u32) -> Check {
    check_pairs(
        "conjugacy",
        p,
        pair_len,
        witness_len,
        &AutomorphismSpec::identity(),
        |u, v| {
            let d = conjugate(u, v, p);
            (d.verdict, d.witness)
        },
        |u, v, g| word_equals(&concat(&concat(&invert(g), u), g), v, p),
    )
}

pub fn selftest(p: GroupParams, ball: u32, witness: u32, pairs: u32) -> SelftestReport {
    let checks = vec![check_geodesics(p, ball), check_tcp_phi(p, pairs, witness), check_conjugacy(p, pairs, witness)];
    SelftestReport { m: p.m(), checks }
}
