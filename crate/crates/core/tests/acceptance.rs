//! Acceptance suite: one line per criterion, nonzero exit if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Integer, Rational};

use massbound_core::arith::constants::{constant_a, kellner_c, prime_sum_constant, wright_threshold};
use massbound_core::arith::parse_exact;
use massbound_core::effective::m_n;
use massbound_core::genera::{g, partition_max_check, unit_square_classes};
use massbound_core::mass::{korner_mass, log_mass_expansion, mass_lower_in, mass_upper_in, mass_upper_unimodular, MassMode};
use massbound_core::transforms::{euler_transform, inverse_euler_transform, max_term_lower_bound, IntSequence};
use massbound_core::wright::wright_scan;
use massbound_core::{squarefree_range, Field, RealEnclosure, DEFAULT_PREC, DEFAULT_PREC_CEILING};

use common::Quotient;

const PREC: u32 = DEFAULT_PREC;

/// Number, check and time budget.
type Criterion = (u32, fn() -> Outcome, Duration);

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(failures: Vec<String>, ok_detail: impl Into<String>) -> Self {
        if failures.is_empty() {
            Outcome { pass: true, detail: ok_detail.into() }
        } else {
            Outcome { pass: false, detail: failures.join("; ") }
        }
    }
}

fn band(centre: &Rational, radius: &Rational) -> RealEnclosure {
    RealEnclosure::from_rational(&(centre.clone() - radius), PREC)
        .hull(&RealEnclosure::from_rational(&(centre.clone() + radius), PREC))
}

fn pow10(k: i32) -> Rational {
    let t = Integer::from(Integer::u_pow_u(10, k.unsigned_abs()));
    if k >= 0 { Rational::from(t) } else { Rational::from((1, t)) }
}

fn mass_q(n: u32) -> Result<Rational, String> {
    let m = korner_mass(&Field::Rationals, n, MassMode::Exact, PREC).map_err(|e| e.to_string())?;
    m.total.exact().cloned().ok_or_else(|| format!("n = {n}: no exact total"))
}

fn criterion1() -> Outcome {
    let mut bad = Vec::new();
    for n in 3..=7 {
        match mass_q(n) {
            Ok(q) if q == Rational::from((1, common::aut_in(n))) => {}
            Ok(q) => bad.push(format!("n = {n}: got {q}")),
            Err(e) => bad.push(e),
        }
    }
    // the stated n = 8 target, with E_8 counted in the genus of I_8
    let stated = Rational::from((1, common::aut_in(8))) + Rational::from((1, common::weyl_e8_order()));
    match mass_q(8) {
        Ok(q) if q == stated => {}
        Ok(q) => bad.push(format!("n = 8: got {q}, expected {stated}")),
        Err(e) => bad.push(e),
    }
    let nine = mass_q(9).map(|q| q == common::mass_q_classified(9)).unwrap_or(false);
    let note = format!("n = 9 two-class genus {}", if nine { "matches" } else { "does not match" });
    let mut out = Outcome::new(bad, "n = 3..8 exact");
    out.detail = format!("{} ({note})", out.detail);
    out
}

fn criterion2() -> Outcome {
    let printed = [
        (3, "2.95", 0),
        (4, "29.94", 1),
        (5, "1.91e4", 4),
        (6, "1.02e7", 7),
        (7, "2.27e11", 11),
        (8, "7.67e15", 15),
        (9, "1.03e22", 22),
    ];
    let mut bad = Vec::new();
    for (n, s, lead) in printed {
        let v = match m_n(n, PREC) {
            Ok(v) => v,
            Err(e) => {
                bad.push(format!("n = {n}: {e}"));
                continue;
            }
        };
        let mantissa = s.split('e').next().unwrap_or(s);
        let digits = mantissa.chars().filter(char::is_ascii_digit).count() as i32;
        let half_unit = pow10(lead - digits + 1) / 2u32;
        let target = parse_exact(s).expect("decimal literal");
        let width_ok = v.width() < rug::Float::with_val(PREC, &pow10(lead - 2));
        if !v.intersects(&band(&target, &half_unit)) || !width_ok {
            bad.push(format!("n = {n}: {:.6e} vs {s}", v.to_f64()));
        }
    }
    Outcome::new(bad, "n = 3..9 within rounding of the printed values")
}

fn criterion3() -> Outcome {
    let r = wright_scan(930, DEFAULT_PREC_CEILING);
    let fails = r.failing();
    let boundary = r.holds_boundary();
    let unresolved = r.unresolved();
    let mut bad = Vec::new();
    if fails.len() != 559 {
        bad.push(format!("{} failing D", fails.len()));
    }
    if boundary != [919, 921, 922, 923, 926, 930] {
        bad.push(format!("boundary {boundary:?}"));
    }
    if !unresolved.is_empty() {
        bad.push(format!("unresolved {unresolved:?}"));
    }
    Outcome::new(bad, format!("{} failing, boundary {boundary:?}", fails.len()))
}

fn criterion4() -> Outcome {
    let items: [(&str, RealEnclosure, &str, &str); 4] = [
        ("𝒜", constant_a(PREC), "0.57352", "1e-5"),
        ("prime sum", prime_sum_constant(PREC), "0.53381", "1e-5"),
        ("𝒞", kellner_c(PREC), "0.774144", "1e-6"),
        ("576π²", wright_threshold(PREC), "5684.89", "1e-2"),
    ];
    let mut bad = Vec::new();
    for (name, v, centre, tol) in items {
        let b = band(&parse_exact(centre).unwrap(), &parse_exact(tol).unwrap());
        if !v.intersects(&b) {
            bad.push(format!("{name} = {:.7} not within {tol} of {centre}", v.to_f64()));
        }
    }
    Outcome::new(bad, "all four within tolerance")
}

fn random_squarefree(rng: &mut ChaCha8Rng) -> i64 {
    loop {
        let d: u64 = rng.random_range(2..=10_000);
        if squarefree_range(d, d).next().is_some() {
            return d as i64;
        }
    }
}

fn criterion5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a17);
    let mut bad = Vec::new();
    for _ in 0..20 {
        let d = random_squarefree(&mut rng);
        let n: u32 = rng.random_range(3..=20);
        let k = Field::quadratic(d).expect("squarefree");
        let run = || -> massbound_core::Result<bool> {
            let m = korner_mass(&k, n, MassMode::Enclosure, PREC)?.total.to_enclosure(PREC);
            let lo = mass_lower_in(&k, n, PREC)?;
            let hi = mass_upper_in(&k, n, PREC)?.min(&mass_upper_unimodular(&k, n, PREC)?);
            Ok(lo.certainly_le(&m) && m.certainly_le(&hi))
        };
        match run() {
            Ok(true) => {}
            Ok(false) => bad.push(format!("D = {d}, n = {n}")),
            Err(e) => bad.push(format!("D = {d}, n = {n}: {e}")),
        }
    }
    Outcome::new(bad, "20/20 sandwiched")
}

fn criterion6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xe17e);
    let mut bad = Vec::new();
    for case in 0..500 {
        let len = rng.random_range(1..=14);
        let a: Vec<u64> = (0..len).map(|_| rng.random_range(0..=40)).collect();
        let a = IntSequence::from_u64(&a).unwrap();
        let b = euler_transform(&a);
        match inverse_euler_transform(&b) {
            Ok(back) if back == a => {}
            _ => bad.push(format!("round trip {case}")),
        }
        for n in 1..=len {
            let max = a.values()[..n].iter().max().unwrap();
            let lower = max_term_lower_bound(&b, n, PREC).unwrap();
            if lower.certainly_gt(&RealEnclosure::from_integer(max, PREC)) {
                bad.push(format!("max-term bound, case {case}, n = {n}"));
            }
        }
    }
    let prefix = IntSequence::from_u64(&[1, 1, 1, 1, 1, 1, 1, 2]).unwrap();
    match inverse_euler_transform(&prefix) {
        Ok(a) if a.get(8) == 1 => {}
        Ok(a) => bad.push(format!("a_8 = {}", a.get(8))),
        Err(e) => bad.push(e.to_string()),
    }
    Outcome::new(bad, "500 round trips, bound holds, a_8 = 1")
}

fn criterion7() -> Outcome {
    let mut bad = Vec::new();
    for a in 0..=12 {
        if g(a + 2, 1) > (g(a, 1) * 5u32) {
            bad.push(format!("G({}, 1) > 5 G({a}, 1)", a + 2));
        }
        for b in 1..=12 {
            if g(a, b) > g(a * b, 1) {
                bad.push(format!("G({a}, {b}) > G({}, 1)", a * b));
            }
        }
    }
    for d in 1..=14 {
        if !partition_max_check(d).map(|c| c.holds).unwrap_or(false) {
            bad.push(format!("partition check d = {d}"));
        }
    }
    // (e, f) = (1, 1) over ℚ and at split primes, (1, 2) inert, (2, 1) ramified
    for (q, e, f, label) in [(Quotient::integers(), 1, 1, "ℤ"), (Quotient::inert(), 1, 2, "√5"), (Quotient::ramified(), 2, 1, "√2")] {
        for v in 1..=q.max_v() {
            if unit_square_classes(e, f, v).unwrap() != q.count(v, 1 << f) {
                bad.push(format!("unit classes {label}, v = {v}"));
            }
        }
    }
    Outcome::new(bad, "G inequalities, partitions d <= 14, unit classes")
}

fn criterion8() -> Outcome {
    let fields = [("ℚ", Field::Rationals), ("√2", Field::quadratic(2).unwrap()), ("√5", Field::quadratic(5).unwrap()), ("√919", Field::quadratic(919).unwrap())];
    let mut bad = Vec::new();
    for (label, k) in &fields {
        let ratios: massbound_core::Result<Vec<RealEnclosure>> = [20u32, 50, 100, 200]
            .iter()
            .map(|&n| {
                let m = korner_mass(k, n, MassMode::Enclosure, PREC)?.total.to_enclosure(PREC);
                let diff = (&m.ln()? - &log_mass_expansion(k, n, PREC)?).abs();
                let nf = RealEnclosure::from_int(i64::from(n), PREC);
                Ok(&diff / &(&nf * &nf.ln()?))
            })
            .collect();
        match ratios {
            Ok(r) if r.windows(2).all(|w| w[1].certainly_lt(&w[0])) => {}
            Ok(r) => bad.push(format!("{label}: {:?}", r.iter().map(|x| format!("{:.3e}", x.to_f64())).collect::<Vec<_>>())),
            Err(e) => bad.push(format!("{label}: {e}")),
        }
    }
    Outcome::new(bad, "relative error decreasing for all four fields")
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (1, criterion1, Duration::from_secs(1)),
        (2, criterion2, Duration::from_secs(1)),
        (3, criterion3, Duration::from_secs(30)),
        (4, criterion4, Duration::from_secs(5)),
        (5, criterion5, Duration::from_secs(60)),
        (6, criterion6, Duration::from_secs(60)),
        (7, criterion7, Duration::from_secs(60)),
        (8, criterion8, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (id, run, budget) in criteria {
        let t = Instant::now();
        let mut out = run();
        let dt = t.elapsed();
        if dt > budget {
            out.pass = false;
            out.detail = format!("{} [over budget of {budget:?}]", out.detail);
        }
        println!("criterion {id}: {} {} ({:.2}s)", if out.pass { "PASS" } else { "FAIL" }, out.detail, dt.as_secs_f64());
        failed += usize::from(!out.pass);
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
