//! Twisted conjugacy for φ: x ↦ x⁻¹, y ↦ y⁻¹.
//!
//! Every witness `w` certifies `v = rev(w)·u·w` in G(m).

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclic::cyclic_occurrences;
use crate::normal_form::{
    central_form, extract_delta, geodesic, geodesic_length, is_bar3, table_form, word_equals, CentralForm, DeltaWord,
};
use crate::words::{apply_phi, chi, concat, invert, rev, Gen, GroupParams, Letter, Syllable, Word};
use crate::Decision;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistedError {
    #[error("split {split} out of range for a word of length {len}")]
    SplitOutOfRange { split: u64, len: u64 },
    #[error("{rule} does not apply: {reason}")]
    PatternMismatch { rule: Rule, reason: &'static str },
    #[error("not a pure power")]
    NotPurePower,
    #[error("not a Garside-free geodesic with opposite end letters")]
    NotBar3,
    #[error("not a twisted cyclic geodesic")]
    NotCycGeo,
}

/// `rev(w)·u·w`, which equals `φ(w)⁻¹·u·w`.
pub fn twist(u: &Word, w: &Word) -> Word {
    concat(&concat(&rev(w), u), w)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwistedWitness {
    pub w: Word,
}

impl TwistedWitness {
    pub fn new(w: Word) -> Self {
        Self { w }
    }

    /// Composes with a later increment.
    pub fn then(&mut self, increment: &Word) {
        self.w.extend(increment);
    }

    pub fn verifies(&self, u: &Word, v: &Word, p: GroupParams) -> bool {
        verify_witness(u, v, &self.w, p)
    }
}

pub fn verify_witness(u: &Word, v: &Word, w: &Word, p: GroupParams) -> bool {
    word_equals(v, &twist(u, w), p)
}

/// `u₁u₂ ↦ u₂φ(u₁)` with `l(u₁) = split`; the increment is `φ(u₁)`.
pub fn phi_cyclic_prefix(u: &Word, split: u64) -> Result<(Word, Word), TwistedError> {
    let (u1, u2) = u.split_at(split).ok_or(TwistedError::SplitOutOfRange { split, len: u.len() })?;
    let inc = apply_phi(&u1);
    Ok((concat(&u2, &inc), inc))
}

/// `u₁u₂ ↦ φ(u₂)u₁` with `l(u₁) = split`; the increment is `u₂⁻¹`.
pub fn phi_cyclic_suffix(u: &Word, split: u64) -> Result<(Word, Word), TwistedError> {
    let (u1, u2) = u.split_at(split).ok_or(TwistedError::SplitOutOfRange { split, len: u.len() })?;
    Ok((concat(&apply_phi(&u2), &u1), invert(&u2)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    R1,
    R2,
    R3,
    R4,
    R5,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleStep {
    pub result: DeltaWord,
    pub increment: Word,
}

/// Working state for the rewrite loop: `body · Δ^delta`.
struct Work {
    body: VecDeque<Syllable>,
    delta: i64,
}

impl Work {
    fn from_delta_word(dw: &DeltaWord) -> Self {
        Self { body: dw.body.syllables().iter().copied().collect(), delta: dw.delta }
    }

    fn to_delta_word(&self) -> DeltaWord {
        DeltaWord::new(Word::from_syllables(self.body.iter().copied()), self.delta)
    }

    fn ends_match(&self) -> bool {
        self.body.len() >= 3 && self.body.front().map(|s| s.gen) == self.body.back().map(|s| s.gen)
    }

    fn check(&self, rule: Rule) -> Result<(), TwistedError> {
        let mismatch = |reason| Err(TwistedError::PatternMismatch { rule, reason });
        let front = self.body.front();
        let back = self.body.back();
        let unit_x = |s: Option<&Syllable>| matches!(s, Some(s) if s.gen == Gen::X && s.exp.abs() == 1);
        let is_y = |s: Option<&Syllable>| matches!(s, Some(s) if s.gen == Gen::Y);
        match rule {
            Rule::R1 if self.delta.abs() < 2 => mismatch("needs |c| >= 2"),
            Rule::R2 | Rule::R3 if self.delta.abs() > 1 => mismatch("needs |c| <= 1"),
            Rule::R2 | Rule::R3 if self.body.len() < 3 => mismatch("needs at least three syllables"),
            Rule::R2 if !(unit_x(front) && unit_x(back)) => mismatch("needs x^±1 at both ends"),
            Rule::R3 if !(is_y(front) && is_y(back)) => mismatch("needs y-syllables at both ends"),
            Rule::R4 | Rule::R5 if self.delta.abs() != 1 => mismatch("needs c = ±1"),
            Rule::R4 if !(unit_x(front) && is_y(back)) => mismatch("needs x^±1 first and y last"),
            Rule::R5 if !(is_y(front) && unit_x(back)) => mismatch("needs y first and x^±1 last"),
            _ => Ok(()),
        }
    }

    /// Halves the Δ-power towards zero; increment `Δ^(-d)`.
    fn r1(&mut self) -> Syllable {
        let d = self.delta / 2;
        self.delta -= 2 * d;
        Syllable::x(-2 * d)
    }

    /// Strips the matching end syllables; increment is the inverse of the last one.
    fn strip(&mut self, p: GroupParams) -> Syllable {
        let last = self.body.pop_back().unwrap();
        let first = self.body.pop_front().unwrap();
        let diff = first.exp - last.exp;
        match first.gen {
            Gen::X => self.delta += diff / 2,
            Gen::Y => {
                let m = p.m();
                self.delta += diff / m;
                let rest = diff % m;
                if rest != 0 {
                    self.body.push_front(Syllable::y(rest));
                }
            }
        }
        Syllable::new(last.gen, -last.exp)
    }

    /// Flips the x at the end and drops Δ^±1; increment `x^(-2ε)` or empty.
    fn r45(&mut self) -> Syllable {
        let x_at_front = self.body.front().unwrap().gen == Gen::X;
        let x = if x_at_front { self.body.front_mut() } else { self.body.back_mut() }.unwrap();
        let eps = x.exp;
        x.exp = -eps;
        let same = eps == self.delta;
        self.delta = 0;
        if same {
            Syllable::x(-2 * eps)
        } else {
            Syllable::x(0)
        }
    }
}

/// Applies one rewrite rule to `body·Δ^c`.
pub fn apply_rule(rule: Rule, u: &DeltaWord, p: GroupParams) -> Result<RuleStep, TwistedError> {
    let mut work = Work::from_delta_word(u);
    work.check(rule)?;
    let inc = match rule {
        Rule::R1 => work.r1(),
        Rule::R2 | Rule::R3 => work.strip(p),
        Rule::R4 | Rule::R5 => work.r45(),
    };
    Ok(RuleStep { result: work.to_delta_word(), increment: Word::from_syllables([inc]) })
}

/// A power of a single generator: `x^a` or `y^n`; Δ^c counts as `x^(2c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PurePower {
    X(i64),
    Y(i64),
}

impl PurePower {
    pub fn of(w: &Word, p: GroupParams) -> Option<Self> {
        let cf = central_form(w, p);
        match cf.q.syllables() {
            [] => Some(PurePower::X(2 * cf.c)),
            [s] if s.gen == Gen::X => Some(PurePower::X(1 + 2 * cf.c)),
            [s] => Some(PurePower::Y(s.exp + p.m() * cf.c)),
            _ => None,
        }
    }

    /// The representative `ε` or `x` of the twisted class, with a witness.
    fn canonical(self, p: GroupParams) -> (SimpleClass, Word) {
        match self {
            PurePower::X(a) => {
                let d = a.div_euclid(2);
                let class = if a.rem_euclid(2) == 0 { SimpleClass::Trivial } else { SimpleClass::X };
                (class, Word::x(-d))
            }
            PurePower::Y(n) => {
                let d = n.div_euclid(2);
                if n.rem_euclid(2) == 0 {
                    (SimpleClass::Trivial, Word::y(-d))
                } else {
                    let mut w = Word::y(p.k() - d);
                    w.push(Syllable::x(-1));
                    (SimpleClass::Trivial, w)
                }
            }
        }
    }

    pub fn to_word(self) -> Word {
        match self {
            PurePower::X(a) => Word::x(a),
            PurePower::Y(n) => Word::y(n),
        }
    }
}

/// The two twisted classes met by pure powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SimpleClass {
    Trivial,
    X,
}

impl SimpleClass {
    pub fn representative(self) -> Word {
        match self {
            SimpleClass::Trivial => Word::empty(),
            SimpleClass::X => Word::x(1),
        }
    }
}

/// Decides twisted conjugacy between pure powers.
pub fn simple_case_decide(u: &Word, v: &Word, p: GroupParams) -> Result<Decision, TwistedError> {
    let pu = PurePower::of(u, p).ok_or(TwistedError::NotPurePower)?;
    let pv = PurePower::of(v, p).ok_or(TwistedError::NotPurePower)?;
    let (cu, wu) = pu.canonical(p);
    let (cv, wv) = pv.canonical(p);
    if cu != cv {
        return Ok(Decision::no());
    }
    Ok(Decision::yes(concat(&wu, &invert(&wv))))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bar3Reduction {
    pub word: Word,
    pub witness: TwistedWitness,
    pub rounds: usize,
}

/// Rewrites a geodesic into a Garside-free geodesic with opposite end letters, or a pure power.
pub fn reduce_to_bar3(u: &Word, p: GroupParams) -> (Word, TwistedWitness) {
    let r = reduce_to_bar3_traced(u, p);
    (r.word, r.witness)
}

pub fn reduce_to_bar3_traced(u: &Word, p: GroupParams) -> Bar3Reduction {
    if is_bar3(u, p) {
        return Bar3Reduction { word: u.clone(), witness: TwistedWitness::default(), rounds: 0 };
    }
    let mut witness = TwistedWitness::default();
    let mut dw = table_form(u, p);
    let mut rounds = 0;
    loop {
        rounds += 1;
        let mut work = Work::from_delta_word(&dw);
        let push = |s: Syllable, witness: &mut TwistedWitness| witness.w.push(s);
        if work.delta.abs() >= 2 {
            push(work.r1(), &mut witness);
        }
        while work.ends_match() {
            push(work.strip(p), &mut witness);
            if work.delta.abs() >= 2 {
                push(work.r1(), &mut witness);
            }
        }
        if work.body.len() <= 1 {
            return Bar3Reduction { word: geodesic(&collapse(&work, p).to_word(), p), witness, rounds };
        }
        if work.delta != 0 {
            push(work.r45(), &mut witness);
        }
        dw = table_form(&work.to_delta_word().to_word(), p);
        if dw.body.syllable_count() <= 1 {
            return Bar3Reduction { word: dw.to_word(), witness, rounds };
        }
        let ends_differ = dw.body.first().map(|s| s.gen) != dw.body.last().map(|s| s.gen);
        if dw.delta == 0 && ends_differ {
            return Bar3Reduction { word: dw.body, witness, rounds };
        }
    }
}

fn collapse(work: &Work, p: GroupParams) -> PurePower {
    match work.body.front() {
        None => PurePower::X(2 * work.delta),
        Some(s) if s.gen == Gen::X => PurePower::X(s.exp + 2 * work.delta),
        Some(s) => PurePower::Y(s.exp + p.m() * work.delta),
    }
}

/// Attainable counts of positive x-terms: `{q mod 2, q mod 2 + 2, …} ∩ [0, τ]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityProfile {
    pub tau: usize,
    pub q: usize,
    pub attainable: Vec<usize>,
}

impl ParityProfile {
    pub fn new(tau: usize, q: usize) -> Self {
        Self { tau, q, attainable: (q % 2..=tau).step_by(2).collect() }
    }
}

/// A twisted cyclic geodesic in block form `x^s₁ y^b₁ … x^s_τ y^b_τ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycGeoWord {
    word: Word,
    signs: Vec<i64>,
    ys: Vec<i64>,
}

impl CycGeoWord {
    fn from_blocks(signs: Vec<i64>, ys: Vec<i64>) -> Self {
        let word = Word::from_syllables(signs.iter().zip(&ys).flat_map(|(&s, &b)| [Syllable::x(s), Syllable::y(b)]));
        Self { word, signs, ys }
    }

    /// Block form of a CycGeo word, starting with x; the increment moves a leading y-syllable to the back.
    pub fn normalize(u: &Word, p: GroupParams) -> Result<(Self, Word), TwistedError> {
        if !is_cycgeo(u, p) {
            return Err(TwistedError::NotCycGeo);
        }
        let (word, inc) = match u.first() {
            Some(s) if s.gen == Gen::Y => {
                let (moved, inc) = phi_cyclic_prefix(u, s.len()).expect("split inside word");
                (moved, inc)
            }
            _ => (u.clone(), Word::empty()),
        };
        let signs = word.syllables().iter().filter(|s| s.gen == Gen::X).map(|s| s.exp).collect();
        let ys = word.syllables().iter().filter(|s| s.gen == Gen::Y).map(|s| s.exp).collect();
        Ok((Self { word, signs, ys }, inc))
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn tau(&self) -> usize {
        self.signs.len()
    }

    pub fn ys(&self) -> &[i64] {
        &self.ys
    }

    pub fn signs(&self) -> &[i64] {
        &self.signs
    }

    pub fn q(&self) -> usize {
        self.signs.iter().filter(|&&s| s > 0).count()
    }

    pub fn len(&self) -> u64 {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn profile(&self) -> ParityProfile {
        ParityProfile::new(self.tau(), self.q())
    }
}

/// Geodesic with both generators, opposite end letters, `x^±1` terms and `|b| <= k`.
pub fn is_cycgeo(u: &Word, p: GroupParams) -> bool {
    let syl = u.syllables();
    if syl.len() < 2 || syl[0].gen == syl[syl.len() - 1].gen {
        return false;
    }
    let shape_ok = syl.iter().all(|s| match s.gen {
        Gen::X => s.exp.abs() == 1,
        Gen::Y => s.exp.abs() <= p.k(),
    });
    shape_ok && geodesic_length(u, p) == u.len()
}

/// Equality of block-form CycGeo words by y-tuples and x-sign multisets.
pub fn cycgeo_equal(u: &CycGeoWord, v: &CycGeoWord) -> bool {
    u.ys == v.ys && u.q() == v.q()
}

/// Moves a Garside-free geodesic with opposite ends into CycGeo block form.
pub fn to_cycgeo(u: &Word, p: GroupParams) -> Result<(CycGeoWord, TwistedWitness), TwistedError> {
    let dw = extract_delta(u, p);
    let syl = dw.body.syllables();
    if dw.delta != 0 || syl.len() < 2 || syl[0].gen == syl[syl.len() - 1].gen {
        return Err(TwistedError::NotBar3);
    }
    let mut witness = TwistedWitness::default();
    let mut blocks: Vec<Syllable> = syl.to_vec();
    if blocks[0].gen == Gen::Y {
        let lead = blocks.remove(0);
        blocks.push(Syllable::y(-lead.exp));
        witness.then(&Word::y(-lead.exp));
    }
    let (m, k) = (p.m(), p.k());
    let mut signs = Vec::with_capacity(blocks.len() / 2);
    let mut ys = Vec::with_capacity(blocks.len() / 2);
    let mut delta = 0;
    for pair in blocks.chunks(2) {
        signs.push(pair[0].exp);
        let b = pair[1].exp;
        let centred = (b + k).rem_euclid(m) - k;
        delta += (b - centred) / m;
        ys.push(centred);
    }
    if delta != 0 {
        let from = -delta.signum();
        for s in signs.iter_mut() {
            if delta == 0 {
                break;
            }
            if *s == from {
                *s = -from;
                delta += from;
            }
        }
    }
    if delta != 0 {
        let t = if delta % 2 == 0 { delta / 2 } else { (delta + delta.signum()) / 2 };
        witness.then(&Word::x(-2 * t));
        delta -= 2 * t;
        if delta != 0 {
            let s = signs.iter_mut().find(|s| **s == -delta).expect("uniform signs");
            *s = delta;
        }
    }
    Ok((CycGeoWord::from_blocks(signs, ys), witness))
}

struct Rotation {
    index: usize,
    increment: Word,
}

fn block_word(signs: &[i64], ys: &[i64]) -> Word {
    Word::from_syllables(signs.iter().zip(ys).flat_map(|(&s, &b)| [Syllable::x(s), Syllable::y(b)]))
}

/// Finds a rotation of `u` matching `v`, with the witness increment taking `u` to `v`.
fn find_rotation(u: &CycGeoWord, v: &CycGeoWord) -> Option<Rotation> {
    let tau = u.tau();
    if tau != v.tau() || u.len() != v.len() || tau == 0 {
        return None;
    }
    let doubled: Vec<i64> = u.ys.iter().copied().chain(u.ys.iter().map(|b| -b)).collect();
    let (qu, qv) = (u.q(), v.q());
    let index = cyclic_occurrences(&doubled, &v.ys)
        .into_iter()
        .map(|start| (2 * tau - start) % (2 * tau))
        .filter(|i| (qu + i + qv) % 2 == 0)
        .min()?;
    let mut increment = Word::empty();
    let (base_signs, base_ys, moves) = if index <= tau {
        (u.signs.clone(), u.ys.clone(), index)
    } else {
        increment.extend(&apply_phi(&u.word));
        let flip = |v: &[i64]| v.iter().map(|x| -x).collect::<Vec<_>>();
        (flip(&u.signs), flip(&u.ys), index - tau)
    };
    let cut = tau - moves;
    increment.extend(&invert(&block_word(&base_signs[cut..], &base_ys[cut..])));
    let rotated_q =
        base_signs[cut..].iter().filter(|&&s| s < 0).count() + base_signs[..cut].iter().filter(|&&s| s > 0).count();
    let e = (qv as i64 - rotated_q as i64) / 2;
    increment.push(Syllable::x(2 * e));
    Some(Rotation { index, increment })
}

/// Whether two block-form CycGeo words are twisted conjugate.
pub fn minimal_class_match(u: &CycGeoWord, v: &CycGeoWord, _p: GroupParams) -> bool {
    find_rotation(u, v).is_some()
}

/// Block rotation index `i` (number of single-block suffix moves) realising a match.
pub fn match_rotation(u: &CycGeoWord, v: &CycGeoWord) -> Option<usize> {
    find_rotation(u, v).map(|r| r.index)
}

/// A minimal-length twisted class representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Minimal {
    Simple(SimpleClass),
    Mixed(CycGeoWord),
}

impl Minimal {
    pub fn word(&self) -> Word {
        match self {
            Minimal::Simple(c) => c.representative(),
            Minimal::Mixed(cg) => cg.word.clone(),
        }
    }
}

/// Minimal representative of the twisted class of `u` with witness `rev(w)·u·w = rep`.
pub fn minimize(u: &Word, p: GroupParams) -> (Minimal, TwistedWitness) {
    if let Some(pp) = PurePower::of(u, p) {
        let (class, w) = pp.canonical(p);
        return (Minimal::Simple(class), TwistedWitness::new(w));
    }
    let g = geodesic(u, p);
    let (bar3, mut witness) = reduce_to_bar3(&g, p);
    if let Some(pp) = PurePower::of(&bar3, p) {
        let (class, w) = pp.canonical(p);
        witness.then(&w);
        return (Minimal::Simple(class), witness);
    }
    let (cg, w2) = to_cycgeo(&bar3, p).expect("reduction ends in a Garside-free word with opposite ends");
    witness.then(&w2.w);
    (Minimal::Mixed(cg), witness)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistedReport {
    pub decision: Decision,
    pub u_min: Word,
    pub v_min: Word,
}

pub fn tcp_phi(u: &Word, v: &Word, p: GroupParams) -> Decision {
    tcp_phi_report(u, v, p).decision
}

pub fn tcp_phi_report(u: &Word, v: &Word, p: GroupParams) -> TwistedReport {
    let (mu, wu) = minimize(u, p);
    let (mv, wv) = minimize(v, p);
    let report = |decision| TwistedReport { decision, u_min: mu.word(), v_min: mv.word() };
    if (chi(u, p) - chi(v, p)) % 2 != 0 {
        return report(Decision::no());
    }
    let middle = match (&mu, &mv) {
        (Minimal::Simple(a), Minimal::Simple(b)) if a == b => Word::empty(),
        (Minimal::Mixed(a), Minimal::Mixed(b)) => match find_rotation(a, b) {
            Some(r) => r.increment,
            None => return report(Decision::no()),
        },
        _ => return report(Decision::no()),
    };
    let mut w = wu.w;
    w.extend(&middle);
    w.extend(&invert(&wv.w));
    assert!(verify_witness(u, v, &w, p), "internal error: twisted witness fails verification");
    report(Decision::yes(w))
}

/// All minimal-length elements of the twisted class of `u`.
pub fn enumerate_minimal_class(u: &Word, p: GroupParams) -> BTreeSet<CentralForm> {
    let cg = match minimize(u, p).0 {
        Minimal::Simple(SimpleClass::Trivial) => return [central_form(&Word::empty(), p)].into(),
        Minimal::Simple(SimpleClass::X) => {
            return [central_form(&Word::x(1), p), central_form(&Word::x(-1), p)].into();
        }
        Minimal::Mixed(cg) => cg,
    };
    let letters: Vec<Letter> = cg.word.letters().collect();
    let n = letters.len();
    let tau = cg.tau();
    let cycle: Vec<Letter> = letters.iter().copied().chain(letters.iter().map(|l| l.inverse())).collect();
    let mut out = BTreeSet::new();
    for start in 0..2 * n {
        let window: Vec<Letter> = (0..n).map(|t| cycle[(start + t) % (2 * n)]).collect();
        let q0 = window.iter().filter(|l| l.gen == Gen::X && l.positive).count();
        for q in (q0 % 2..=tau).step_by(2) {
            let mut seen = 0;
            let word = Word::from_letters(window.iter().map(|&l| {
                if l.gen == Gen::X {
                    seen += 1;
                    Letter { gen: Gen::X, positive: seen <= q }
                } else {
                    l
                }
            }));
            out.insert(central_form(&word, p));
        }
    }
    out
}
