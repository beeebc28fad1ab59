//! Doubling-ratio timings on seeded random inputs.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use artin_tcp::twisted::{phi_cyclic_prefix, phi_cyclic_suffix};
use artin_tcp::{chi, concat, conjugate, geodesic, tcp_phi, GroupParams, Letter, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchOp {
    Nf,
    TcpPhi,
    Cp,
}

impl FromStr for BenchOp {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "nf" => Ok(BenchOp::Nf),
            "tcp-phi" => Ok(BenchOp::TcpPhi),
            "cp" => Ok(BenchOp::Cp),
            _ => Err(format!("unknown bench op {s:?}")),
        }
    }
}

impl fmt::Display for BenchOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenchOp::Nf => "nf",
            BenchOp::TcpPhi => "tcp-phi",
            BenchOp::Cp => "cp",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub micros: u64,
    /// `time(n) / time(previous n)`.
    pub ratio: Option<f64>,
    /// Every constructed pair got its expected verdict.
    pub verdicts_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub op: BenchOp,
    pub m: i64,
    pub seed: u64,
    pub rows: Vec<BenchRow>,
    pub mean_ratio: Option<f64>,
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "op={} m={} seed={}", self.op, self.m, self.seed)?;
        writeln!(f, "{:>9} {:>12} {:>7} verdicts", "n", "micros", "ratio")?;
        for r in &self.rows {
            let ratio = r.ratio.map_or("-".to_string(), |x| format!("{x:.2}"));
            writeln!(f, "{:>9} {:>12} {:>7} {}", r.n, r.micros, ratio, if r.verdicts_ok { "ok" } else { "WRONG" })?;
        }
        match self.mean_ratio {
            Some(x) => write!(f, "mean doubling ratio {x:.3}"),
            None => write!(f, "mean doubling ratio -"),
        }
    }
}

/// `10⁶ / 2^i` for `i = 6..=0`.
pub fn default_grid() -> Vec<usize> {
    (0..=6).rev().map(|i| 1_000_000 >> i).collect()
}

/// Uniform word of `n` letters with no adjacent cancellation.
pub fn random_word<R: Rng>(rng: &mut R, n: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(n);
    while letters.len() < n {
        let l = Letter::ALL[rng.gen_range(0..4)];
        if letters.last() != Some(&l.inverse()) {
            letters.push(l);
        }
    }
    Word::from_letters(letters)
}

/// A pair with the expected verdict.
fn make_pair<R: Rng>(op: BenchOp, rng: &mut R, n: usize, positive: bool, p: GroupParams) -> (Word, Word) {
    let u = random_word(rng, n);
    match op {
        BenchOp::Nf => (u, Word::empty()),
        BenchOp::TcpPhi if positive => {
            let mut v = u.clone();
            for _ in 0..3 {
                let split = rng.gen_range(0..=v.len());
                v = if rng.gen() { phi_cyclic_prefix(&v, split) } else { phi_cyclic_suffix(&v, split) }
                    .expect("split within range")
                    .0;
            }
            (u, v)
        }
        // An extra x flips the parity of chi.
        BenchOp::TcpPhi => {
            let mut v = random_word(rng, n);
            if (chi(&u, p) - chi(&v, p)) % 2 == 0 {
                v = concat(&v, &Word::x(1));
            }
            (u, v)
        }
        BenchOp::Cp => {
            let (a, b) = u.split_at(rng.gen_range(0..=u.len())).expect("split within range");
            (u.clone(), concat(&b, &a))
        }
    }
}

fn run(op: BenchOp, u: &Word, v: &Word, p: GroupParams) -> bool {
    match op {
        BenchOp::Nf => geodesic(u, p).len() <= u.len(),
        BenchOp::TcpPhi => tcp_phi(u, v, p).verdict,
        BenchOp::Cp => conjugate(u, v, p).verdict,
    }
}

pub fn bench(op: BenchOp, grid: &[usize], p: GroupParams, seed: u64, reps: usize) -> BenchReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reps = reps.max(1);
    let mut rows: Vec<BenchRow> = Vec::new();
    for &n in grid {
        let mut samples = Vec::with_capacity(reps);
        let mut verdicts_ok = true;
        for r in 0..reps {
            let positive = op != BenchOp::TcpPhi || r % 2 == 0;
            let (u, v) = make_pair(op, &mut rng, n, positive, p);
            let start = Instant::now();
            let verdict = run(op, &u, &v, p);
            samples.push(start.elapsed().as_micros() as u64);
            verdicts_ok &= verdict == positive;
        }
        samples.sort_unstable();
        let micros = samples[samples.len() / 2].max(1);
        let ratio = rows.last().map(|prev| micros as f64 / prev.micros as f64);
        rows.push(BenchRow { n, micros, ratio, verdicts_ok });
    }
    let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
    let mean_ratio = (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64);
    BenchReport { op, m: p.m(), seed, rows, mean_ratio }
}
