//! Acceptance criteria 1 to 9, one PASS/FAIL line each.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use artin_tcp::conjugacy::find_inner_part;
use artin_tcp::oracle::{brute_minimal_class, Oracle, OracleConfig};
use artin_tcp::twisted::{minimize, verify_witness, Minimal};
use artin_tcp::{
    central_form, enumerate_minimal_class, parse_word, tcp_phi, word_equals, AutomorphismSpec, Gen, GroupParams, Word,
};
use artin_tcp_cli::bench::{bench, default_grid, random_word, BenchOp};
use artin_tcp_cli::selftest::{check_conjugacy, check_geodesics, check_tcp_phi};
use artin_tcp_cli::{alternating, translate_presentation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn p(m: i64) -> GroupParams {
    GroupParams::new(m).unwrap()
}

fn w(s: &str) -> Word {
    parse_word(s).unwrap()
}

fn x_terms(u: &Word) -> usize {
    u.letters().filter(|l| l.gen == Gen::X && l.positive).count()
}

const TABLE: [(&str, bool); 12] = [
    ("x y^-1 x^-1 y", true),
    ("y^-1 x y^-1 x^-1", true),
    ("x y^-1 x y^-1", false),
    ("x^-1 y^-1 x^-1 y^-1", false),
    ("y x y^-1 x", false),
    ("y x^-1 y^-1 x^-1", false),
    ("x y x^-1 y^-1", true),
    ("y x y x^-1", true),
    ("x^-1 y x^-1 y", false),
    ("x y x y", false),
    ("y^-1 x^-1 y x^-1", false),
    ("y^-1 x y x", false),
];

fn minimal_class_example() -> Outcome {
    let p3 = p(3);
    let start = Instant::now();
    let u = w("x^-1 y x^-1 y");
    let table: BTreeSet<_> = TABLE.iter().map(|(s, _)| central_form(&w(s), p3)).collect();
    let parity_ok = TABLE.iter().all(|(s, odd)| (x_terms(&w(s)) % 2 == 1) == *odd);
    let odd = TABLE.iter().filter(|(_, odd)| *odd).count();
    let enumerated = enumerate_minimal_class(&u, p3);
    let brute = brute_minimal_class(&u, p3, 8).unwrap();
    let elapsed = start.elapsed();
    let passed = table.len() == 12
        && enumerated == table
        && brute == table
        && parity_ok
        && odd == 4
        && elapsed < Duration::from_secs(10);
    outcome(
        passed,
        format!(
            "enumerated {} / brute {} / table {} elements, parity split {odd} odd + {} even, {:.2?}",
            enumerated.len(),
            brute.len(),
            table.len(),
            12 - odd,
            elapsed
        ),
    )
}

fn example_verdicts() -> Outcome {
    let p3 = p(3);
    let start = Instant::now();
    let (u1, v1) = (w("x^-1 y x^-1 y"), w("y x^-1 y^-1 x^-1"));
    let (u2, v2) = (w("x y^-1 x^-1 y"), w("y x y^-1 x^-1"));
    let d1 = tcp_phi(&u1, &v1, p3);
    let d2 = tcp_phi(&u2, &v2, p3);
    let elapsed = start.elapsed();
    let verified = d1.witness.as_ref().is_some_and(|x| verify_witness(&u1, &v1, x, p3));
    let passed = d1.verdict && verified && !d2.verdict && elapsed < Duration::from_secs(1);
    let shown = d1.witness.map_or("none".to_string(), |x| x.to_string());
    outcome(passed, format!("first {} (witness {shown}), second {}, {:.2?}", d1.verdict, d2.verdict, elapsed))
}

fn oracle_agreement() -> Outcome {
    let check = check_tcp_phi(p(3), 5, 8);
    outcome(check.passed(), check.to_string())
}

fn geodesic_correctness() -> Outcome {
    let checks: Vec<_> = [3, 5, 7].into_iter().map(|m| (m, check_geodesics(p(m), 6))).collect();
    let passed = checks.iter().all(|(_, c)| c.passed());
    let detail: Vec<String> = checks.iter().map(|(m, c)| format!("m={m}: {c}")).collect();
    outcome(passed, detail.join("; "))
}

fn simple_cases() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for m in [3, 5] {
        let p = p(m);
        let mut oracle = Oracle::new(p, OracleConfig { ball_cap: 10, witness_cap: 10 });
        let phi = AutomorphismSpec::phi();
        let mut expect = |u: &Word, v: &Word, claim: bool| {
            checked += 1;
            let d = tcp_phi(u, v, p);
            let verified = d.witness.as_ref().is_some_and(|x| verify_witness(u, v, x, p));
            let g_u = artin_tcp::geodesic(u, p);
            let g_v = artin_tcp::geodesic(v, p);
            let found = oracle.brute_twisted_witness(&g_u, &g_v, &phi, 10).unwrap().is_some();
            let ok = d.verdict == claim && found == claim && (!claim || verified);
            if !ok {
                failures.push(format!("m={m} ({u}, {v}): verdict {} oracle {found}", d.verdict));
            }
        };
        for t in 0..=8i64 {
            let xt = Word::x(t);
            expect(&xt, &Word::empty(), t % 2 == 0);
            expect(&xt, &Word::x(1), t % 2 == 1);
            expect(&xt, &Word::x(-1), t % 2 == 1);
            for c in -4..=4i64 {
                let v = Word::y(t + m * c);
                if (c - t) % 2 == 0 {
                    expect(&v, &Word::empty(), true);
                } else {
                    expect(&v, &Word::y(1), true);
                    expect(&v, &Word::y(-1), true);
                }
            }
        }
    }
    let detail =
        format!("{checked} verdicts, {} failures {:?}", failures.len(), failures.iter().take(3).collect::<Vec<_>>());
    outcome(failures.is_empty(), detail)
}

fn class_sizes() -> Outcome {
    let mut failures = Vec::new();
    let mut brute_checked = 0;
    let mut brute_mismatches = 0;
    let mut sampled = 0;
    for m in [3, 5] {
        let p = p(m);
        let mut rng = ChaCha8Rng::seed_from_u64(2024 + m as u64);
        let mut seen = 0;
        while seen < 200 {
            let len = rng.gen_range(2..=12);
            let u = random_word(&mut rng, len);
            let Minimal::Mixed(cg) = minimize(&u, p).0 else { continue };
            seen += 1;
            let n = cg.len() as usize;
            let tau = cg.tau();
            let ysum: usize = cg.ys().iter().map(|b| b.unsigned_abs() as usize).sum();
            let class = enumerate_minimal_class(cg.word(), p);
            let predicted = (tau + 1) * (tau + ysum);
            let mut ok = class.len() == predicted && class.len() <= n * (n + 1);
            if n <= 6 {
                brute_checked += 1;
                if brute_minimal_class(cg.word(), p, 8).unwrap() != class {
                    brute_mismatches += 1;
                    ok = false;
                }
            }
            if !ok {
                failures.push(format!("m={m} {}: |class| {} predicted {predicted}", cg.word(), class.len()));
            }
        }
        sampled += seen;
    }
    let detail = format!(
        "{sampled} words, {brute_mismatches} of {brute_checked} disagree with brute force, {} violate the size law {:?}",
        failures.len(),
        failures.iter().take(3).collect::<Vec<_>>()
    );
    outcome(failures.is_empty(), detail)
}

fn conjugacy_and_scp() -> Outcome {
    let checks: Vec<_> = [3, 5].into_iter().map(|m| (m, check_conjugacy(p(m), 5, 8))).collect();
    let mut passed = checks.iter().all(|(_, c)| c.passed());
    let mut detail: Vec<String> = checks.iter().map(|(m, c)| format!("m={m}: {c}")).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut failures = 0;
    let mut total = 0;
    for m in [3, 5] {
        let p = p(m);
        let (x, y) = (Word::x(1), Word::y(1));
        for i in 0..200 {
            let len = rng.gen_range(0..=4);
            let g = random_word(&mut rng, len);
            let outer = i % 2 == 1;
            let psi = if outer { AutomorphismSpec::inner_phi(&g) } else { AutomorphismSpec::inner(&g) };
            total += 1;
            let ok = match find_inner_part(&psi, p) {
                Ok(d) => {
                    let spec = d.to_spec();
                    d.outer == outer
                        && word_equals(&spec.apply(&x), &psi.apply(&x), p)
                        && word_equals(&spec.apply(&y), &psi.apply(&y), p)
                }
                Err(_) => false,
            };
            if !ok {
                failures += 1;
            }
        }
    }
    passed &= failures == 0;
    detail.push(format!("find_inner_part {total} specs, {failures} failures"));
    outcome(passed, detail.join("; "))
}

fn linear_time() -> Outcome {
    let start = Instant::now();
    let grid = default_grid();
    let mut passed = true;
    let mut detail = Vec::new();
    for op in [BenchOp::Nf, BenchOp::TcpPhi] {
        let report = bench(op, &grid, p(3), 11, 5);
        let ratio = report.mean_ratio.unwrap_or(f64::INFINITY);
        passed &= ratio <= 2.5 && report.rows.iter().all(|r| r.verdicts_ok);
        detail.push(format!("{op} mean ratio {ratio:.3}"));
    }
    let elapsed = start.elapsed();
    passed &= elapsed < Duration::from_secs(300);
    outcome(passed, format!("{}, n {}..{}, {:.1?}", detail.join(", "), grid[0], grid[grid.len() - 1], elapsed))
}

fn translation() -> Outcome {
    let mut detail = Vec::new();
    let mut passed = true;
    for m in [3, 5, 7] {
        let p = p(m);
        let lhs = translate_presentation(&alternating(m, 'a'), p).unwrap();
        let rhs = translate_presentation(&alternating(m, 'b'), p).unwrap();
        let ok = word_equals(&lhs, &rhs, p);
        passed &= ok;
        detail.push(format!("m={m} {ok}"));
    }
    outcome(passed, detail.join(", "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("minimal class of x^-1 y x^-1 y", minimal_class_example),
        ("example verdicts", example_verdicts),
        ("oracle agreement for tcp-phi", oracle_agreement),
        ("geodesic correctness", geodesic_correctness),
        ("simple-case truth table", simple_cases),
        ("class-size law", class_sizes),
        ("conjugacy and SCP", conjugacy_and_scp),
        ("linear time", linear_time),
        ("translation soundness", translation),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let status = if o.passed { "PASS" } else { "FAIL" };
        failed += usize::from(!o.passed);
        println!("criterion {}: {status} {name} ({:.1?}): {}", i + 1, start.elapsed(), o.detail);
    }
    println!("acceptance: {} of 9 passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
