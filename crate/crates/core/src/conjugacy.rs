//! Conjugacy, simultaneous conjugacy, automorphism decomposition, uniform twisted
//! conjugacy and orbit decidability.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclic::{primitive_period, rotation_offset};
use crate::normal_form::{canonical_syllables, word_equals};
use crate::twisted::tcp_phi;
use crate::words::{apply_phi, concat, invert, parse_word, Gen, GroupParams, ParseError, Syllable, Word};
use crate::Decision;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomorphismError {
    #[error("images do not satisfy x^2 = y^m")]
    NotHomomorphism,
    #[error("not an automorphism")]
    NotAutomorphism,
    #[error("expected \"IMX;IMY\"")]
    MissingSeparator,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// An endomorphism given by the images of `x` and `y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismSpec {
    pub image_x: Word,
    pub image_y: Word,
}

impl AutomorphismSpec {
    pub fn new(image_x: Word, image_y: Word, p: GroupParams) -> Result<Self, AutomorphismError> {
        let spec = Self { image_x, image_y };
        spec.validate(p)?;
        Ok(spec)
    }

    pub fn identity() -> Self {
        Self { image_x: Word::x(1), image_y: Word::y(1) }
    }

    pub fn phi() -> Self {
        Self { image_x: Word::x(-1), image_y: Word::y(-1) }
    }

    /// h ↦ g⁻¹hg.
    pub fn inner(g: &Word) -> Self {
        Self::identity().then_conjugate(g)
    }

    /// h ↦ g⁻¹φ(h)g.
    pub fn inner_phi(g: &Word) -> Self {
        Self::phi().then_conjugate(g)
    }

    fn then_conjugate(self, g: &Word) -> Self {
        let conj = |w: &Word| concat(&concat(&invert(g), w), g);
        Self { image_x: conj(&self.image_x), image_y: conj(&self.image_y) }
    }

    /// Parses `"IMX;IMY"`.
    pub fn parse(text: &str, p: GroupParams) -> Result<Self, AutomorphismError> {
        let (ix, iy) = text.split_once(';').ok_or(AutomorphismError::MissingSeparator)?;
        Self::new(parse_word(ix)?, parse_word(iy)?, p)
    }

    pub fn validate(&self, p: GroupParams) -> Result<(), AutomorphismError> {
        let lhs = self.image_x.pow(2);
        let rhs = self.image_y.pow(p.m() as u64);
        if word_equals(&lhs, &rhs, p) {
            Ok(())
        } else {
            Err(AutomorphismError::NotHomomorphism)
        }
    }

    pub fn apply(&self, w: &Word) -> Word {
        let inv_x = invert(&self.image_x);
        let inv_y = invert(&self.image_y);
        let mut out = Word::empty();
        for s in w.syllables() {
            let piece = match (s.gen, s.exp > 0) {
                (Gen::X, true) => &self.image_x,
                (Gen::X, false) => &inv_x,
                (Gen::Y, true) => &self.image_y,
                (Gen::Y, false) => &inv_y,
            };
            for _ in 0..s.len() {
                out.extend(piece);
            }
        }
        out
    }
}

impl fmt::Display for AutomorphismSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", self.image_x, self.image_y)
    }
}

/// ψ = ι_g (outer = false) or ψ = ι_g∘φ (outer = true), where ι_g(h) = g⁻¹hg.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InnerDecomposition {
    pub g: Word,
    pub outer: bool,
}

impl InnerDecomposition {
    pub fn to_spec(&self) -> AutomorphismSpec {
        if self.outer {
            AutomorphismSpec::inner_phi(&self.g)
        } else {
            AutomorphismSpec::inner(&self.g)
        }
    }
}

/// `w = prefix · lift(core) Δ^c · prefix⁻¹` with `core` cyclically reduced in C2 * Cm.
#[derive(Debug, Clone)]
struct CyclicReduction {
    core: Vec<Syllable>,
    c: i64,
    prefix: Word,
}

fn cyclic_reduce(w: &Word, p: GroupParams) -> CyclicReduction {
    let m = p.m();
    let (syl, mut c) = canonical_syllables(w, p);
    let mut core: VecDeque<Syllable> = syl.into();
    let mut prefix = Word::empty();
    while core.len() >= 3 && core.front().map(|s| s.gen) == core.back().map(|s| s.gen) {
        let t = core.pop_back().unwrap();
        prefix.push(Syllable::new(t.gen, -t.exp));
        let front = core.front_mut().unwrap();
        let mut merged = front.exp + t.exp;
        if t.gen == Gen::X {
            merged = 0;
            c += 1;
        } else if merged >= m {
            merged -= m;
            c += 1;
        }
        if merged == 0 {
            core.pop_front();
        } else {
            front.exp = merged;
        }
    }
    CyclicReduction { core: core.into(), c, prefix }
}

fn lift(syl: &[Syllable]) -> Word {
    Word::from_syllables(syl.iter().copied())
}

fn conjugated(u: &Word, g: &Word) -> Word {
    concat(&concat(&invert(g), u), g)
}

/// Decides whether `g⁻¹ u g = v` for some `g`; the witness is such a `g`.
pub fn conjugate(u: &Word, v: &Word, p: GroupParams) -> Decision {
    let ru = cyclic_reduce(u, p);
    let rv = cyclic_reduce(v, p);
    if ru.c != rv.c {
        return Decision::no();
    }
    let Some(r) = rotation_offset(&ru.core, &rv.core) else {
        return Decision::no();
    };
    let g = concat(&concat(&ru.prefix, &lift(&ru.core[..r])), &invert(&rv.prefix));
    debug_assert!(word_equals(&conjugated(u, &g), v, p));
    Decision::yes(g)
}

fn is_central(w: &Word, p: GroupParams) -> bool {
    canonical_syllables(w, p).0.is_empty()
}

/// Finds `g` with `g⁻¹ y_i g = z_i` for every pair.
pub fn scp(pairs: &[(Word, Word)], p: GroupParams) -> Option<Word> {
    let mut anchor = None;
    for (y, z) in pairs {
        if is_central(y, p) {
            if !word_equals(y, z, p) {
                return None;
            }
        } else if anchor.is_none() {
            anchor = Some((y, z));
        }
    }
    let Some((y1, z1)) = anchor else {
        return Some(Word::empty());
    };
    let g0 = conjugate(y1, z1, p).witness?;
    let satisfies = |g: &Word| pairs.iter().all(|(y, z)| word_equals(&conjugated(y, g), z, p));

    let red = cyclic_reduce(y1, p);
    let around = |f: &Word| concat(&concat(&red.prefix, f), &invert(&red.prefix));
    let mut factors: Vec<Word> = Vec::new();
    if red.core.len() == 1 {
        let order = if red.core[0].gen == Gen::X { 2 } else { p.m() };
        for j in 0..order {
            factors.push(Word::from_syllables([Syllable::new(red.core[0].gen, j)]));
        }
    } else {
        let root = lift(&red.core[..primitive_period(&red.core)]);
        let bound: u64 = pairs.iter().map(|(y, z)| (y.syllable_count() + z.syllable_count()) as u64).sum::<u64>()
            + 2 * (red.prefix.syllable_count() + g0.syllable_count()) as u64
            + 4;
        let root_inv = invert(&root);
        factors.push(Word::empty());
        for j in 1..=bound {
            factors.push(root.pow(j));
            factors.push(root_inv.pow(j));
        }
    }
    factors.iter().map(|f| concat(&around(f), &g0)).find(|g| satisfies(g))
}

pub fn find_inner_part(psi: &AutomorphismSpec, p: GroupParams) -> Result<InnerDecomposition, AutomorphismError> {
    psi.validate(p)?;
    let x = Word::x(1);
    let y = Word::y(1);
    let inner = [(x.clone(), psi.image_x.clone()), (y.clone(), psi.image_y.clone())];
    if let Some(g) = scp(&inner, p) {
        return Ok(InnerDecomposition { g, outer: false });
    }
    let outer = [(invert(&x), psi.image_x.clone()), (invert(&y), psi.image_y.clone())];
    if let Some(g) = scp(&outer, p) {
        return Ok(InnerDecomposition { g, outer: true });
    }
    Err(AutomorphismError::NotAutomorphism)
}

/// Whether `v = ψ(w)⁻¹ u w` holds.
pub fn verify_psi_witness(u: &Word, v: &Word, w: &Word, psi: &AutomorphismSpec, p: GroupParams) -> bool {
    let lhs = concat(&concat(&invert(&psi.apply(w)), u), w);
    word_equals(v, &lhs, p)
}

/// Result of a uniform twisted conjugacy query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistedAnswer {
    pub decision: Decision,
    pub inner_part: InnerDecomposition,
}

/// Decides `v = ψ(w)⁻¹ u w` for some `w`.
pub fn tcp(u: &Word, v: &Word, psi: &AutomorphismSpec, p: GroupParams) -> Result<TwistedAnswer, AutomorphismError> {
    let part = find_inner_part(psi, p)?;
    let gu = concat(&part.g, u);
    let gv = concat(&part.g, v);
    let decision = if part.outer { tcp_phi(&gu, &gv, p) } else { conjugate(&gu, &gv, p) };
    if let Some(w) = &decision.witness {
        assert!(verify_psi_witness(u, v, w, psi, p), "internal error: relayed witness fails verification");
    }
    Ok(TwistedAnswer { decision, inner_part: part })
}

/// Orbit answer: `v = g⁻¹ h g` with `h = u` or `h = φ(u)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitAnswer {
    pub decision: Decision,
    pub applied_phi: bool,
    pub all_inner: bool,
}

/// Decides whether some automorphism in the subgroup generated by `gens` maps `u` into the conjugacy class of `v`.
pub fn orbit_decide(
    u: &Word,
    v: &Word,
    gens: &[AutomorphismSpec],
    p: GroupParams,
) -> Result<OrbitAnswer, AutomorphismError> {
    let mut all_inner = true;
    for psi in gens {
        all_inner &= !find_inner_part(psi, p)?.outer;
    }
    let direct = conjugate(u, v, p);
    if direct.verdict || all_inner {
        return Ok(OrbitAnswer { decision: direct, applied_phi: false, all_inner });
    }
    let flipped = conjugate(&apply_phi(u), v, p);
    Ok(OrbitAnswer { decision: flipped, applied_phi: true, all_inner })
}

pub fn orbit_decidable(
    u: &Word,
    v: &Word,
    gens: &[AutomorphismSpec],
    p: GroupParams,
) -> Result<bool, AutomorphismError> {
    Ok(orbit_decide(u, v, gens, p)?.decision.verdict)
}
