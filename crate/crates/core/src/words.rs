//! Words over {x, y}^± stored as run-length syllables.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest accepted exponent magnitude in parsed input.
///
/// Exponent sums stay far below `i64::MAX` for any word that fits in memory.
pub const MAX_EXPONENT: i64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("m must be odd and at least 3, got {0}")]
    InvalidM(i64),
}

/// The parameter m = 2k + 1 of G(m) = <x, y | x^2 = y^m>.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct GroupParams {
    m: i64,
}

impl GroupParams {
    pub fn new(m: i64) -> Result<Self, ParamError> {
        if m < 3 || m % 2 == 0 {
            return Err(ParamError::InvalidM(m));
        }
        Ok(Self { m })
    }

    pub fn m(self) -> i64 {
        self.m
    }

    pub fn k(self) -> i64 {
        (self.m - 1) / 2
    }
}

impl TryFrom<i64> for GroupParams {
    type Error = ParamError;
    fn try_from(m: i64) -> Result<Self, ParamError> {
        Self::new(m)
    }
}

impl From<GroupParams> for i64 {
    fn from(p: GroupParams) -> i64 {
        p.m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gen {
    X,
    Y,
}

impl Gen {
    pub fn other(self) -> Gen {
        match self {
            Gen::X => Gen::Y,
            Gen::Y => Gen::X,
        }
    }

    fn symbol(self) -> char {
        match self {
            Gen::X => 'x',
            Gen::Y => 'y',
        }
    }
}

/// A single generator letter with sign ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: Gen,
    pub positive: bool,
}

impl Letter {
    pub const ALL: [Letter; 4] = [
        Letter { gen: Gen::X, positive: true },
        Letter { gen: Gen::X, positive: false },
        Letter { gen: Gen::Y, positive: true },
        Letter { gen: Gen::Y, positive: false },
    ];

    pub fn exp(self) -> i64 {
        if self.positive {
            1
        } else {
            -1
        }
    }

    pub fn inverse(self) -> Letter {
        Letter { gen: self.gen, positive: !self.positive }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Syllable {
    pub gen: Gen,
    pub exp: i64,
}

impl Syllable {
    pub fn new(gen: Gen, exp: i64) -> Self {
        Self { gen, exp }
    }

    pub fn x(exp: i64) -> Self {
        Self { gen: Gen::X, exp }
    }

    pub fn y(exp: i64) -> Self {
        Self { gen: Gen::Y, exp }
    }

    pub fn len(self) -> u64 {
        self.exp.unsigned_abs()
    }

    pub fn is_empty(self) -> bool {
        self.exp == 0
    }
}

/// A freely reduced word: adjacent syllables have distinct generators and nonzero exponents.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_syllables<I: IntoIterator<Item = Syllable>>(iter: I) -> Self {
        let mut w = Word::empty();
        for s in iter {
            w.push(s);
        }
        w
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Self::from_syllables(iter.into_iter().map(|l| Syllable::new(l.gen, l.exp())))
    }

    pub fn x(exp: i64) -> Self {
        Self::from_syllables([Syllable::x(exp)])
    }

    pub fn y(exp: i64) -> Self {
        Self::from_syllables([Syllable::y(exp)])
    }

    /// Appends a syllable, merging and cancelling at the seam.
    pub fn push(&mut self, s: Syllable) {
        if s.exp == 0 {
            return;
        }
        match self.syllables.last_mut() {
            Some(last) if last.gen == s.gen => {
                last.exp += s.exp;
                if last.exp == 0 {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push(s),
        }
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn into_syllables(self) -> Vec<Syllable> {
        self.syllables
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn syllable_count(&self) -> usize {
        self.syllables.len()
    }

    /// Letter length l(w).
    pub fn len(&self) -> u64 {
        self.syllables.iter().map(|s| s.len()).sum()
    }

    pub fn first(&self) -> Option<Syllable> {
        self.syllables.first().copied()
    }

    pub fn last(&self) -> Option<Syllable> {
        self.syllables.last().copied()
    }

    pub fn contains_gen(&self, gen: Gen) -> bool {
        self.syllables.iter().any(|s| s.gen == gen)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.syllables.iter().flat_map(|s| {
            let l = Letter { gen: s.gen, positive: s.exp > 0 };
            std::iter::repeat_n(l, s.len() as usize)
        })
    }

    pub fn exponent_sum(&self, gen: Gen) -> i64 {
        self.syllables.iter().filter(|s| s.gen == gen).map(|s| s.exp).sum()
    }

    /// Splits after the first `at` letters.
    pub fn split_at(&self, at: u64) -> Option<(Word, Word)> {
        if at > self.len() {
            return None;
        }
        let mut left = Word::empty();
        let mut right = Word::empty();
        let mut remaining = at;
        for &s in &self.syllables {
            if remaining >= s.len() {
                remaining -= s.len();
                left.syllables.push(s);
            } else if remaining > 0 {
                let head = remaining as i64 * s.exp.signum();
                left.syllables.push(Syllable::new(s.gen, head));
                right.syllables.push(Syllable::new(s.gen, s.exp - head));
                remaining = 0;
            } else {
                right.syllables.push(s);
            }
        }
        Some((left, right))
    }

    pub fn pow(&self, n: u64) -> Word {
        let mut out = Word::empty();
        for _ in 0..n {
            out.extend(self);
        }
        out
    }

    pub fn extend(&mut self, other: &Word) {
        for &s in &other.syllables {
            self.push(s);
        }
    }
}

pub fn free_reduce(w: &Word) -> Word {
    Word::from_syllables(w.syllables.iter().copied())
}

pub fn invert(w: &Word) -> Word {
    Word { syllables: w.syllables.iter().rev().map(|s| Syllable::new(s.gen, -s.exp)).collect() }
}

/// Letter reversal; equals φ(w)^-1.
pub fn rev(w: &Word) -> Word {
    Word { syllables: w.syllables.iter().rev().copied().collect() }
}

pub fn concat(u: &Word, v: &Word) -> Word {
    let mut out = u.clone();
    out.extend(v);
    out
}

/// The automorphism inverting both generators.
pub fn apply_phi(w: &Word) -> Word {
    Word { syllables: w.syllables.iter().map(|s| Syllable::new(s.gen, -s.exp)).collect() }
}

/// Abelianization character m·σ_x + 2·σ_y.
pub fn chi(w: &Word, p: GroupParams) -> i64 {
    p.m() * w.exponent_sum(Gen::X) + 2 * w.exponent_sum(Gen::Y)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unknown symbol {symbol:?} at offset {offset}")]
    UnknownSymbol { symbol: char, offset: usize },
    #[error("malformed exponent at offset {offset}")]
    MalformedExponent { offset: usize },
    #[error("exponent at offset {offset} exceeds 2^40 in magnitude")]
    ExponentTooLarge { offset: usize },
    #[error("exponent at offset {offset} has no generator")]
    DanglingExponent { offset: usize },
}

/// Parses a word over an arbitrary four-letter alphabet `[g, h, G, H]` with caret exponents.
pub fn parse_with_alphabet(text: &str, alphabet: [char; 4]) -> Result<Vec<(usize, i64)>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (offset, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '^' {
            return Err(ParseError::DanglingExponent { offset });
        }
        let Some(idx) = alphabet.iter().position(|&a| a == c) else {
            return Err(ParseError::UnknownSymbol { symbol: c, offset });
        };
        i += 1;
        let mut exp: i64 = 1;
        if i < chars.len() && chars[i].1 == '^' {
            let caret = chars[i].0;
            i += 1;
            let mut negative = false;
            if i < chars.len() && (chars[i].1 == '-' || chars[i].1 == '+') {
                negative = chars[i].1 == '-';
                i += 1;
            }
            let start = i;
            let mut value: i64 = 0;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                value = value * 10 + chars[i].1.to_digit(10).unwrap() as i64;
                if value > MAX_EXPONENT {
                    return Err(ParseError::ExponentTooLarge { offset: caret });
                }
                i += 1;
            }
            if i == start {
                return Err(ParseError::MalformedExponent { offset: caret });
            }
            exp = if negative { -value } else { value };
        }
        let (gen_idx, sign) = if idx < 2 { (idx, 1) } else { (idx - 2, -1) };
        out.push((gen_idx, sign * exp));
    }
    Ok(out)
}

pub fn parse_word(text: &str) -> Result<Word, ParseError> {
    let tokens = parse_with_alphabet(text, ['x', 'y', 'X', 'Y'])?;
    Ok(Word::from_syllables(tokens.into_iter().map(|(g, e)| Syllable::new(if g == 0 { Gen::X } else { Gen::Y }, e))))
}

pub fn format_word(w: &Word) -> String {
    w.to_string()
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if s.exp == 1 {
                write!(f, "{}", s.gen.symbol())?;
            } else {
                write!(f, "{}^{}", s.gen.symbol(), s.exp)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_word(s)
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for Word {
    type Error = ParseError;
    fn try_from(s: String) -> Result<Self, ParseError> {
        parse_word(&s)
    }
}
