//! Central forms, Garside forms, geodesics and the geodesic type table.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{Gen, GroupParams, Syllable, Word};

/// Free-product normal form of the image in C2 * Cm together with the power of Δ.
///
/// `q` alternates `x` and `y^j` with `1 <= j <= m - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CentralForm {
    pub q: Word,
    pub c: i64,
}

impl CentralForm {
    /// A word for the element: the lift of `q` followed by `x^(2c)`.
    pub fn to_word(&self) -> Word {
        let mut w = self.q.clone();
        w.push(Syllable::x(2 * self.c));
        w
    }
}

/// A word body followed by a power of Δ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeltaWord {
    pub body: Word,
    pub delta: i64,
}

impl DeltaWord {
    pub fn new(body: Word, delta: i64) -> Self {
        Self { body, delta }
    }

    /// Renders Δ^c as `x^(2c)` merged onto the end of the body.
    pub fn to_word(&self) -> Word {
        let mut w = self.body.clone();
        w.push(Syllable::x(2 * self.delta));
        w
    }

    pub fn len(&self) -> u64 {
        self.to_word().len()
    }

    pub fn is_empty(&self) -> bool {
        self.body.is_empty() && self.delta == 0
    }
}

impl fmt::Display for DeltaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) D^{}", self.body, self.delta)
    }
}

/// `x^a1 y^b1 ... x^aτ y^bτ Δ^c`; `a1` or `bτ` may be zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GarsideForm {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub c: i64,
    pub params: GroupParams,
}

impl GarsideForm {
    pub fn from_delta_word(dw: &DeltaWord, params: GroupParams) -> Self {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for s in dw.body.syllables() {
            match s.gen {
                Gen::X => a.push(s.exp),
                Gen::Y => {
                    if a.len() == b.len() {
                        a.push(0);
                    }
                    b.push(s.exp);
                }
            }
        }
        if a.len() > b.len() {
            b.push(0);
        }
        Self { a, b, c: dw.delta, params }
    }

    pub fn tau(&self) -> usize {
        self.a.len()
    }

    pub fn body(&self) -> Word {
        Word::from_syllables(self.a.iter().zip(&self.b).flat_map(|(&a, &b)| [Syllable::x(a), Syllable::y(b)]))
    }

    pub fn to_delta_word(&self) -> DeltaWord {
        DeltaWord::new(self.body(), self.c)
    }

    pub fn to_word(&self) -> Word {
        self.to_delta_word().to_word()
    }
}

/// Left-to-right canonical pass: alternating `x` and `y^j` (`0 < j < m`) plus Δ-exponent.
pub(crate) fn canonical_syllables(w: &Word, p: GroupParams) -> (Vec<Syllable>, i64) {
    let m = p.m();
    let mut stack: Vec<Syllable> = Vec::with_capacity(w.syllable_count());
    let mut c: i64 = 0;
    for s in w.syllables() {
        match s.gen {
            Gen::X => {
                c += s.exp.div_euclid(2);
                if s.exp.rem_euclid(2) == 0 {
                    continue;
                }
                if matches!(stack.last(), Some(t) if t.gen == Gen::X) {
                    stack.pop();
                    c += 1;
                } else {
                    stack.push(Syllable::x(1));
                }
            }
            Gen::Y => {
                c += s.exp.div_euclid(m);
                let r = s.exp.rem_euclid(m);
                if r == 0 {
                    continue;
                }
                match stack.last_mut() {
                    Some(t) if t.gen == Gen::Y => {
                        let mut j = t.exp + r;
                        if j >= m {
                            j -= m;
                            c += 1;
                        }
                        if j == 0 {
                            stack.pop();
                        } else {
                            t.exp = j;
                        }
                    }
                    _ => stack.push(Syllable::y(r)),
                }
            }
        }
    }
    (stack, c)
}

pub fn central_form(w: &Word, p: GroupParams) -> CentralForm {
    let (syl, c) = canonical_syllables(w, p);
    CentralForm { q: Word::from_syllables(syl), c }
}

pub fn word_equals(u: &Word, v: &Word, p: GroupParams) -> bool {
    central_form(u, p) == central_form(v, p)
}

/// Modified Garside form: `0 <= a_i <= 1` and `-(k-1) <= b_i <= k+1`.
fn modified_garside(w: &Word, p: GroupParams) -> (Vec<Syllable>, i64) {
    let (mut syl, mut c) = canonical_syllables(w, p);
    for s in syl.iter_mut() {
        if s.gen == Gen::Y && s.exp >= p.k() + 2 {
            s.exp -= p.m();
            c += 1;
        }
    }
    (syl, c)
}

pub fn garside_normal_form(w: &Word, p: GroupParams) -> GarsideForm {
    let (syl, c) = modified_garside(w, p);
    GarsideForm::from_delta_word(&DeltaWord::new(Word::from_syllables(syl), c), p)
}

/// Geodesic in table shape: Garside-free body with the Δ-power kept separate.
pub fn table_form(w: &Word, p: GroupParams) -> DeltaWord {
    let (mut syl, mut c) = modified_garside(w, p);
    let (k, m) = (p.k(), p.m());
    if c < 0 {
        let ra: Vec<usize> = (0..syl.len()).filter(|&i| syl[i].gen == Gen::X).collect();
        let rb: Vec<usize> =
            (0..syl.len()).filter(|&i| syl[i].gen == Gen::Y && (syl[i].exp == k || syl[i].exp == k + 1)).collect();
        let budget = (-c) as usize;
        let mut used = 0;
        for &i in ra.iter().chain(&rb) {
            if used == budget {
                break;
            }
            match syl[i].gen {
                Gen::X => syl[i].exp = -1,
                Gen::Y => syl[i].exp -= m,
            }
            used += 1;
        }
        c += used as i64;
        if c == 0 {
            pair_rewrites(&mut syl, k);
        }
    }
    DeltaWord::new(Word::from_syllables(syl), c)
}

/// Removes `y^(k+1)`/`y^-(k+1)` conflicts in a Garside-free word.
fn pair_rewrites(syl: &mut [Syllable], k: i64) {
    let plus: Vec<usize> = (0..syl.len()).filter(|&i| syl[i] == Syllable::y(k + 1)).collect();
    let minus: Vec<usize> = (0..syl.len()).filter(|&i| syl[i] == Syllable::y(-(k + 1))).collect();
    let paired = plus.len().min(minus.len());
    for i in 0..paired {
        syl[plus[i]].exp = -k;
        syl[minus[i]].exp = k;
    }
    let (rest, eps) = if minus.len() > paired { (&minus[paired..], 1) } else { (&plus[paired..], -1) };
    let xs: Vec<usize> = (0..syl.len()).filter(|&i| syl[i] == Syllable::x(eps)).collect();
    for (&xi, &yi) in xs.iter().zip(rest) {
        syl[xi].exp = -eps;
        syl[yi].exp = eps * k;
    }
}

pub fn geodesic(w: &Word, p: GroupParams) -> Word {
    table_form(w, p).to_word()
}

pub fn geodesic_length(w: &Word, p: GroupParams) -> u64 {
    geodesic(w, p).len()
}

/// Splits a word into a body with x-exponents in {-1, 1} and a Δ-power.
pub fn extract_delta(w: &Word, p: GroupParams) -> DeltaWord {
    let m = p.m();
    let mut body: Vec<Syllable> = Vec::with_capacity(w.syllable_count());
    let mut delta = 0;
    let mut pending: Vec<Syllable> = w.syllables().iter().rev().copied().collect();
    while let Some(s) = pending.pop() {
        if s.exp == 0 {
            continue;
        }
        if s.gen == Gen::X && s.exp % 2 == 0 {
            delta += s.exp / 2;
            continue;
        }
        if s.gen == Gen::X && s.exp.abs() > 1 {
            let sign = s.exp.signum();
            delta += (s.exp - sign) / 2;
            pending.push(Syllable::x(sign));
            continue;
        }
        if s.gen == Gen::Y && s.exp % m == 0 {
            delta += s.exp / m;
            continue;
        }
        match body.last() {
            Some(t) if t.gen == s.gen => {
                let t = body.pop().unwrap();
                pending.push(Syllable::new(s.gen, t.exp + s.exp));
            }
            _ => body.push(s),
        }
    }
    DeltaWord::new(Word::from_syllables(body), delta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeodesicType {
    T1,
    T2,
    T3Plus,
    T3Minus,
    T3PlusCapMinus,
    T30PlusU,
    T30MinusU,
    T30PlusN,
    T30MinusN,
    T30Star,
    XPower,
    YPower,
    Central,
    Trivial,
}

impl GeodesicType {
    /// Whether the table marks the row as having a unique normal form.
    pub fn table_unique(self) -> bool {
        !matches!(self, GeodesicType::T30PlusN | GeodesicType::T30MinusN | GeodesicType::T30Star)
    }

    pub fn is_type3(self) -> bool {
        !matches!(
            self,
            GeodesicType::T1 | GeodesicType::T2 | GeodesicType::XPower | GeodesicType::Central | GeodesicType::Trivial
        )
    }
}

impl fmt::Display for GeodesicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GeodesicType::T1 => "1",
            GeodesicType::T2 => "2",
            GeodesicType::T3Plus => "3+",
            GeodesicType::T3Minus => "3-",
            GeodesicType::T3PlusCapMinus => "3+cap3-",
            GeodesicType::T30PlusU => "3^0+U",
            GeodesicType::T30MinusU => "3^0-U",
            GeodesicType::T30PlusN => "3^0+N",
            GeodesicType::T30MinusN => "3^0-N",
            GeodesicType::T30Star => "3^0*",
            GeodesicType::XPower => "x-power",
            GeodesicType::YPower => "y-power",
            GeodesicType::Central => "central",
            GeodesicType::Trivial => "trivial",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("word of length {length} is not geodesic (geodesic length {geodesic})")]
    NotGeodesic { length: u64, geodesic: u64 },
    #[error("no table row matches the geodesic")]
    NoRow,
    #[error("{0} table rows match the geodesic")]
    Ambiguous(usize),
}

/// Row predicates on a Garside-free body and Δ-power.
pub fn matching_rows(dw: &DeltaWord, p: GroupParams) -> Vec<GeodesicType> {
    let k = p.k();
    let syl = dw.body.syllables();
    let xs = || syl.iter().filter(|s| s.gen == Gen::X).map(|s| s.exp);
    let ys = || syl.iter().filter(|s| s.gen == Gen::Y).map(|s| s.exp);
    let x_in = |lo: i64, hi: i64| xs().all(|a| (lo..=hi).contains(&a));
    let y_in = |lo: i64, hi: i64| ys().all(|b| (lo..=hi).contains(&b));
    let has_y = |b: i64| ys().any(|e| e == b);
    let has_x = |a: i64| xs().any(|e| e == a);
    let c = dw.delta;

    let mut rows = Vec::new();
    if c > 0 && x_in(0, 1) && y_in(-(k - 1), k + 1) {
        rows.push(GeodesicType::T1);
    }
    if c < 0 && x_in(-1, 0) && y_in(-(k + 1), k - 1) {
        rows.push(GeodesicType::T2);
    }
    if c == 0 {
        if x_in(0, 1) && y_in(-(k - 1), k + 1) {
            rows.push(GeodesicType::T3Plus);
        }
        if x_in(-1, 0) && y_in(-(k + 1), k - 1) {
            rows.push(GeodesicType::T3Minus);
        }
        if x_in(0, 1) && y_in(-k, k) && has_y(-k) {
            rows.push(GeodesicType::T30PlusU);
        }
        if x_in(-1, 0) && y_in(-k, k) && has_y(k) {
            rows.push(GeodesicType::T30MinusU);
        }
        if x_in(0, 1) && y_in(-k, k + 1) && has_y(-k) && has_y(k + 1) {
            rows.push(GeodesicType::T30PlusN);
        }
        if x_in(-1, 0) && y_in(-(k + 1), k) && has_y(k) && has_y(-(k + 1)) {
            rows.push(GeodesicType::T30MinusN);
        }
        if x_in(-1, 1) && y_in(-k, k) && has_x(1) && has_x(-1) {
            rows.push(GeodesicType::T30Star);
        }
    }
    rows
}

/// Classifies a geodesic word by its table row, or by a degenerate tag for pure powers.
pub fn classify(g: &Word, p: GroupParams) -> Result<GeodesicType, ClassifyError> {
    let geo = geodesic_length(g, p);
    if geo != g.len() {
        return Err(ClassifyError::NotGeodesic { length: g.len(), geodesic: geo });
    }
    match g.syllables() {
        [] => return Ok(GeodesicType::Trivial),
        [s] if s.gen == Gen::X && s.exp % 2 == 0 => return Ok(GeodesicType::Central),
        [s] if s.gen == Gen::X => return Ok(GeodesicType::XPower),
        [s] if s.gen == Gen::Y => return Ok(GeodesicType::YPower),
        _ => {}
    }
    let rows = matching_rows(&extract_delta(g, p), p);
    match rows.len() {
        0 => Err(ClassifyError::NoRow),
        1 => Ok(rows[0]),
        n => Err(ClassifyError::Ambiguous(n)),
    }
}

/// Whether a pure y-power also meets the (3+ ∩ 3-) bound `|b| <= k - 1`.
pub fn in_plus_cap_minus(g: &Word, p: GroupParams) -> bool {
    matches!(g.syllables(), [s] if s.gen == Gen::Y && s.exp.abs() < p.k())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Extremes {
    pub pos_x: i64,
    pub neg_x: i64,
    pub pos_y: i64,
    pub neg_y: i64,
}

pub fn extremes(body: &Word) -> Extremes {
    let mut e = Extremes::default();
    for s in body.syllables() {
        let (pos, neg) = match s.gen {
            Gen::X => (&mut e.pos_x, &mut e.neg_x),
            Gen::Y => (&mut e.pos_y, &mut e.neg_y),
        };
        if s.exp > 0 {
            *pos = (*pos).max(s.exp);
        } else {
            *neg = (*neg).max(-s.exp);
        }
    }
    e
}

/// The four necessary conditions for a Garside-free geodesic body.
pub fn fujii_conditions(body: &Word, p: GroupParams) -> [bool; 4] {
    let e = extremes(body);
    let k = p.k();
    [e.pos_x + e.neg_x <= 2, e.pos_y + e.neg_y <= 2 * k + 1, e.pos_x + e.neg_y <= k + 1, e.pos_y + e.neg_x <= k + 1]
}

/// Sufficient conditions for a Garside-free geodesic to have another geodesic spelling.
pub fn predicts_non_unique(body: &Word, p: GroupParams) -> bool {
    let e = extremes(body);
    (e.pos_x > 0 && e.neg_x > 0) || e.pos_y + e.neg_y == p.m()
}

/// Garside-free geodesic containing both generators whose first and last letters differ.
pub fn is_bar3(g: &Word, p: GroupParams) -> bool {
    let (Some(first), Some(last)) = (g.first(), g.last()) else {
        return false;
    };
    if first.gen == last.gen || g.len() != geodesic_length(g, p) {
        return false;
    }
    matches!(classify(g, p), Ok(t) if t.is_type3() && t != GeodesicType::YPower)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    fn p(m: i64) -> GroupParams {
        GroupParams::new(m).unwrap()
    }

    #[test]
    fn central_form_examples() {
        assert_eq!(central_form(&w("x^4"), p(3)), CentralForm { q: Word::empty(), c: 2 });
        assert_eq!(central_form(&w("x^-1"), p(3)), CentralForm { q: w("x"), c: -1 });
        assert_eq!(central_form(&w("x y^-1 x^-1 y"), p(3)), central_form(&w("x^-1 y^-1 x y"), p(3)));
        assert_eq!(central_form(&w("y^3"), p(3)), central_form(&w("x^2"), p(3)));
        assert_eq!(central_form(&w("y^2 y^2"), p(3)), CentralForm { q: w("y"), c: 1 });
    }

    #[test]
    fn garside_examples() {
        let g = garside_normal_form(&w("x^2"), p(3));
        assert_eq!((g.tau(), g.c), (0, 1));
        let g = garside_normal_form(&w("y^4"), p(3));
        assert_eq!((g.a.clone(), g.b.clone(), g.c), (vec![0], vec![1], 1));
        let g = garside_normal_form(&w("x y^4 x"), p(5));
        assert_eq!((g.a.clone(), g.b.clone(), g.c), (vec![1, 1], vec![-1, 0], 1));
        assert!(word_equals(&g.to_word(), &w("x y^4 x"), p(5)));
    }

    #[test]
    fn geodesic_examples() {
        assert_eq!(geodesic(&w("x y^-3"), p(5)), w("x^-1 y^2"));
        assert_eq!(geodesic_length(&w("x y^-3"), p(5)), 3);
        assert_eq!(geodesic(&w("y^-3 x^-1"), p(5)), w("y^-3 x^-1"));
        assert_eq!(geodesic(&Word::empty(), p(3)), Word::empty());
        assert_eq!(geodesic_length(&w("y^3"), p(3)), 2);
        assert_eq!(geodesic(&w("x^-3"), p(5)), w("x^-3"));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&w("x^-1 y x^-1 y"), p(3)), Ok(GeodesicType::T30MinusU));
        assert_eq!(classify(&w("x y^-1 x^-1 y"), p(3)), Ok(GeodesicType::T30Star));
        assert_eq!(classify(&w("y^2"), p(5)), Ok(GeodesicType::YPower));
        assert!(in_plus_cap_minus(&w("y^2"), p(7)));
        assert!(in_plus_cap_minus(&w("y"), p(5)));
        assert!(!in_plus_cap_minus(&w("y^2"), p(5)));
        assert_eq!(classify(&Word::empty(), p(3)), Ok(GeodesicType::Trivial));
        assert_eq!(classify(&w("x^4"), p(3)), Ok(GeodesicType::Central));
        assert_eq!(classify(&w("x^-3"), p(3)), Ok(GeodesicType::XPower));
        assert_eq!(classify(&w("x y x^2"), p(3)), Ok(GeodesicType::T1));
        assert!(matches!(classify(&w("x y^-3"), p(5)), Err(ClassifyError::NotGeodesic { .. })));
    }

    #[test]
    fn extract_delta_merges() {
        let dw = extract_delta(&w("x y x^2 y"), p(5));
        assert_eq!(dw, DeltaWord::new(w("x y^2"), 1));
        let dw = extract_delta(&w("x^-3 y^5 x"), p(5));
        assert_eq!(dw, DeltaWord::new(Word::empty(), 0));
    }

    #[test]
    fn garside_form_views() {
        let dw = DeltaWord::new(w("y^2 x y^-1 x"), -2);
        let g = GarsideForm::from_delta_word(&dw, p(5));
        assert_eq!(g.a, vec![0, 1, 1]);
        assert_eq!(g.b, vec![2, -1, 0]);
        assert_eq!(g.to_delta_word(), dw);
    }

    #[test]
    fn fujii_examples() {
        assert_eq!(fujii_conditions(&w("x y^2 x^-1"), p(3)), [true, true, true, false]);
        assert!(predicts_non_unique(&w("x y x^-1 y"), p(3)));
        assert!(predicts_non_unique(&w("x y^-2 x y^3"), p(5)));
        assert!(!predicts_non_unique(&w("x y^2"), p(5)));
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        prop::collection::vec((any::<bool>(), -9i64..=9), 0..14).prop_map(|v| {
            Word::from_syllables(v.into_iter().map(|(g, e)| Syllable::new(if g { Gen::X } else { Gen::Y }, e)))
        })
    }

    fn arb_params() -> impl Strategy<Value = GroupParams> {
        (1i64..=4).prop_map(|k| GroupParams::new(2 * k + 1).unwrap())
    }

    proptest! {
        #[test]
        fn geodesic_is_sound(u in arb_word(), p in arb_params()) {
            let g = geodesic(&u, p);
            prop_assert!(word_equals(&u, &g, p));
            prop_assert!(g.len() <= u.len());
        }

        #[test]
        fn geodesic_is_idempotent(u in arb_word(), p in arb_params()) {
            let g = geodesic(&u, p);
            prop_assert_eq!(geodesic(&g, p), g);
        }

        #[test]
        fn geodesic_has_one_row(u in arb_word(), p in arb_params()) {
            let g = geodesic(&u, p);
            prop_assert!(classify(&g, p).is_ok());
            let body = extract_delta(&g, p).body;
            prop_assert_eq!(fujii_conditions(&body, p), [true; 4]);
        }

        #[test]
        fn garside_form_is_sound(u in arb_word(), p in arb_params()) {
            let g = garside_normal_form(&u, p);
            prop_assert!(word_equals(&g.to_word(), &u, p));
            let k = p.k();
            prop_assert!(g.a.iter().all(|&a| (0..=1).contains(&a)));
            prop_assert!(g.b.iter().all(|&b| (-(k - 1)..=k + 1).contains(&b)));
        }

        #[test]
        fn central_form_respects_relator(u in arb_word(), v in arb_word(), p in arb_params()) {
            let mut lhs = u.clone();
            lhs.push(Syllable::x(2));
            lhs.extend(&v);
            let mut rhs = u.clone();
            rhs.push(Syllable::y(p.m()));
            rhs.extend(&v);
            prop_assert!(word_equals(&lhs, &rhs, p));
            prop_assert_eq!(crate::words::chi(&lhs, p), crate::words::chi(&rhs, p));
        }

        #[test]
        fn central_form_is_multiplicative(u in arb_word(), v in arb_word(), p in arb_params()) {
            let uv = crate::words::concat(&u, &v);
            let lifted = crate::words::concat(&central_form(&u, p).to_word(), &central_form(&v, p).to_word());
            prop_assert_eq!(central_form(&uv, p), central_form(&lifted, p));
        }

        #[test]
        fn chi_is_class_invariant(u in arb_word(), p in arb_params()) {
            let g = geodesic(&u, p);
            prop_assert_eq!(crate::words::chi(&u, p), crate::words::chi(&g, p));
        }
    }
}
