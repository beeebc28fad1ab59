//! Brute-force ground truth over Cayley balls.
//!
//! Only word arithmetic and central forms are used here.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::conjugacy::AutomorphismSpec;
use crate::normal_form::{central_form, CentralForm};
use crate::words::{concat, invert, rev, GroupParams, Letter, Syllable, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub ball_cap: u32,
    pub witness_cap: u32,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { ball_cap: 10, witness_cap: 8 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("radius {requested} exceeds the configured cap {cap}")]
    CapExceeded { requested: u32, cap: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallEntry {
    pub dist: u32,
    /// First shortest word found.
    pub word: Word,
    /// Number of geodesic words spelling the element.
    pub geodesics: u64,
}

/// All elements within a given distance of the identity.
#[derive(Debug, Clone)]
pub struct Ball {
    radius: u32,
    params: GroupParams,
    elements: HashMap<CentralForm, BallEntry>,
    spheres: Vec<Vec<CentralForm>>,
}

impl Ball {
    fn new(params: GroupParams) -> Self {
        let id = central_form(&Word::empty(), params);
        let entry = BallEntry { dist: 0, word: Word::empty(), geodesics: 1 };
        Self { radius: 0, params, elements: [(id.clone(), entry)].into(), spheres: vec![vec![id]] }
    }

    fn grow(&mut self) {
        let d = self.radius;
        let mut next: Vec<CentralForm> = Vec::new();
        for cf in &self.spheres[d as usize] {
            let (word, count) = {
                let e = &self.elements[cf];
                (e.word.clone(), e.geodesics)
            };
            for l in Letter::ALL {
                let mut w = word.clone();
                w.push(Syllable::new(l.gen, l.exp()));
                let key = central_form(&w, self.params);
                match self.elements.get_mut(&key) {
                    Some(e) if e.dist == d + 1 => e.geodesics += count,
                    Some(_) => {}
                    None => {
                        self.elements.insert(key.clone(), BallEntry { dist: d + 1, word: w, geodesics: count });
                        next.push(key);
                    }
                }
            }
        }
        self.spheres.push(next);
        self.radius += 1;
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, cf: &CentralForm) -> Option<&BallEntry> {
        self.elements.get(cf)
    }

    pub fn distance(&self, w: &Word) -> Option<u32> {
        self.get(&central_form(w, self.params)).map(|e| e.dist)
    }

    pub fn sphere(&self, d: u32) -> &[CentralForm] {
        self.spheres.get(d as usize).map_or(&[], |s| s.as_slice())
    }

    /// Elements in order of distance.
    pub fn iter(&self) -> impl Iterator<Item = (&CentralForm, &BallEntry)> {
        self.spheres.iter().flatten().map(move |cf| (cf, &self.elements[cf]))
    }

    /// Elements up to distance `r`, in order of distance.
    pub fn within(&self, r: u32) -> impl Iterator<Item = (&CentralForm, &BallEntry)> {
        self.spheres.iter().take(r as usize + 1).flatten().map(move |cf| (cf, &self.elements[cf]))
    }
}

pub fn bfs_ball(radius: u32, p: GroupParams) -> Result<Ball, OracleError> {
    bfs_ball_capped(radius, OracleConfig::default().ball_cap, p)
}

pub fn bfs_ball_capped(radius: u32, cap: u32, p: GroupParams) -> Result<Ball, OracleError> {
    if radius > cap {
        return Err(OracleError::CapExceeded { requested: radius, cap });
    }
    let mut ball = Ball::new(p);
    while ball.radius < radius {
        ball.grow();
    }
    Ok(ball)
}

/// Caches one growing ball for repeated searches.
#[derive(Debug, Clone)]
pub struct Oracle {
    config: OracleConfig,
    ball: Ball,
}

impl Oracle {
    pub fn new(p: GroupParams, config: OracleConfig) -> Self {
        Self { config, ball: Ball::new(p) }
    }

    pub fn params(&self) -> GroupParams {
        self.ball.params
    }

    pub fn ball(&mut self, radius: u32) -> Result<&Ball, OracleError> {
        if radius > self.config.ball_cap {
            return Err(OracleError::CapExceeded { requested: radius, cap: self.config.ball_cap });
        }
        while self.ball.radius < radius {
            self.ball.grow();
        }
        Ok(&self.ball)
    }

    fn witness_ball(&mut self, maxlen: u32) -> Result<&Ball, OracleError> {
        if maxlen > self.config.witness_cap {
            return Err(OracleError::CapExceeded { requested: maxlen, cap: self.config.witness_cap });
        }
        self.ball(maxlen)
    }

    /// Oracle distance of `w` from the identity, if within the cap.
    pub fn distance(&mut self, w: &Word) -> Option<u32> {
        let key = central_form(w, self.params());
        for r in 0..=self.config.ball_cap {
            let ball = self.ball(r).ok()?;
            if let Some(e) = ball.get(&key) {
                return Some(e.dist);
            }
        }
        None
    }

    /// `ψ(w)⁻¹·u·w` for every `w` with `l(w) <= maxlen`, keeping the shortest `w` per element.
    pub fn twisted_orbit(
        &mut self,
        u: &Word,
        psi: &AutomorphismSpec,
        maxlen: u32,
    ) -> Result<HashMap<CentralForm, Word>, OracleError> {
        let p = self.params();
        let ball = self.witness_ball(maxlen)?;
        let is_phi = *psi == AutomorphismSpec::phi();
        let mut orbit = HashMap::new();
        for (_, e) in ball.within(maxlen) {
            let left = if is_phi { rev(&e.word) } else { invert(&psi.apply(&e.word)) };
            let image = concat(&concat(&left, u), &e.word);
            orbit.entry(central_form(&image, p)).or_insert_with(|| e.word.clone());
        }
        Ok(orbit)
    }

    /// Shortest `w` with `v = ψ(w)⁻¹·u·w` and `l(w) <= maxlen`.
    pub fn brute_twisted_witness(
        &mut self,
        u: &Word,
        v: &Word,
        psi: &AutomorphismSpec,
        maxlen: u32,
    ) -> Result<Option<Word>, OracleError> {
        let p = self.params();
        let target = central_form(v, p);
        let ball = self.witness_ball(maxlen)?;
        let is_phi = *psi == AutomorphismSpec::phi();
        for (_, e) in ball.within(maxlen) {
            let left = if is_phi { rev(&e.word) } else { invert(&psi.apply(&e.word)) };
            if central_form(&concat(&concat(&left, u), &e.word), p) == target {
                return Ok(Some(e.word.clone()));
            }
        }
        Ok(None)
    }

    /// Shortest `g` with `g⁻¹·u·g = v` and `l(g) <= maxlen`.
    pub fn brute_conjugator(&mut self, u: &Word, v: &Word, maxlen: u32) -> Result<Option<Word>, OracleError> {
        self.brute_twisted_witness(u, v, &AutomorphismSpec::identity(), maxlen)
    }

    /// Minimal-length elements of the φ-twisted class of `u` reachable with witnesses of length `<= maxlen`.
    pub fn brute_minimal_class(&mut self, u: &Word, maxlen: u32) -> Result<BTreeSet<CentralForm>, OracleError> {
        let orbit = self.twisted_orbit(u, &AutomorphismSpec::phi(), maxlen)?;
        let reach = self
            .distance(u)
            .ok_or(OracleError::CapExceeded { requested: self.config.ball_cap + 1, cap: self.config.ball_cap })?;
        let ball = self.ball(reach)?;
        let dists: Vec<(u32, &CentralForm)> =
            orbit.keys().filter_map(|cf| ball.get(cf).map(|e| (e.dist, cf))).collect();
        let best = dists.iter().map(|(d, _)| *d).min().unwrap_or(reach);
        Ok(dists.into_iter().filter(|(d, _)| *d == best).map(|(_, cf)| cf.clone()).collect())
    }
}

/// Every freely reduced word of letter length at most `maxlen`, shortest first.
pub fn reduced_words(maxlen: u32) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..maxlen {
        let mut next = Vec::new();
        for w in &layer {
            for l in Letter::ALL {
                if w.last() == Some(&l.inverse()) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                out.push(Word::from_letters(v.iter().copied()));
                next.push(v);
            }
        }
        layer = next;
    }
    out
}

pub fn brute_twisted_witness(
    u: &Word,
    v: &Word,
    psi: &AutomorphismSpec,
    maxlen: u32,
    p: GroupParams,
) -> Result<Option<Word>, OracleError> {
    Oracle::new(p, OracleConfig::default()).brute_twisted_witness(u, v, psi, maxlen)
}

pub fn brute_minimal_class(u: &Word, p: GroupParams, maxlen: u32) -> Result<BTreeSet<CentralForm>, OracleError> {
    Oracle::new(p, OracleConfig::default()).brute_minimal_class(u, maxlen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    fn p(m: i64) -> GroupParams {
        GroupParams::new(m).unwrap()
    }

    #[test]
    fn small_balls() {
        assert_eq!(bfs_ball(0, p(3)).unwrap().len(), 1);
        assert_eq!(bfs_ball(1, p(3)).unwrap().len(), 5);
        assert_eq!(bfs_ball(2, p(3)).unwrap().len(), 17);
        assert_eq!(bfs_ball(11, p(3)).unwrap_err(), OracleError::CapExceeded { requested: 11, cap: 10 });
    }

    #[test]
    fn sphere_two_by_hand() {
        // The twelve reduced words of length two are pairwise distinct for m = 3.
        let ball = bfs_ball(2, p(3)).unwrap();
        assert_eq!(ball.sphere(2).len(), 12);
        assert_eq!(ball.distance(&w("y^3")), Some(2));
        assert_eq!(ball.get(&central_form(&w("y^-2"), p(3))).unwrap().geodesics, 1);
    }

    #[test]
    fn reduced_word_counts() {
        assert_eq!(reduced_words(0).len(), 1);
        assert_eq!(reduced_words(3).len(), 1 + 4 + 12 + 36);
        assert!(reduced_words(4).iter().all(|w| w.len() == crate::words::free_reduce(w).len()));
    }

    #[test]
    fn witness_examples() {
        let phi = AutomorphismSpec::phi();
        assert_eq!(brute_twisted_witness(&w("x^2"), &Word::empty(), &phi, 8, p(3)).unwrap(), Some(w("x^-1")));
        assert_eq!(brute_twisted_witness(&w("x y"), &w("x y"), &phi, 8, p(3)).unwrap(), Some(Word::empty()));
        assert_eq!(brute_twisted_witness(&w("x"), &w("y"), &phi, 8, p(3)).unwrap(), None);
        assert!(brute_twisted_witness(&w("x"), &w("y"), &phi, 9, p(3)).is_err());
    }

    #[test]
    fn minimal_class_examples() {
        assert_eq!(brute_minimal_class(&w("x^-1 y x^-1 y"), p(3), 8).unwrap().len(), 12);
        let id: BTreeSet<_> = [central_form(&Word::empty(), p(3))].into();
        assert_eq!(brute_minimal_class(&w("x^4"), p(3), 8).unwrap(), id);
        assert_eq!(brute_minimal_class(&w("y^3"), p(3), 8).unwrap(), id);
    }
}
