use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::Rational;

use super::enclosure::RealEnclosure;
use super::primes::primes_up_to;
use super::zeta::{euler_gamma, zeta_prime_2};

pub const DEFAULT_PRIME_BOUND: u64 = 1_000_000;

/// Σ_p log p / (p-1)² over all primes, memoized per precision.
pub fn prime_sum_constant(prec: u32) -> RealEnclosure {
    static CACHE: OnceLock<Mutex<HashMap<u32, RealEnclosure>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&prec) {
        return v.clone();
    }
    let v = prime_sum_with_bound(prec, DEFAULT_PRIME_BOUND);
    cache.lock().unwrap_or_else(|e| e.into_inner()).insert(prec, v.clone());
    v
}

/// The same sum with primes up to `bound` summed directly and the rest enclosed.
///
/// The tail is bounded above by the smaller of ∫_N^∞ log x/(x-1)² dx and the partial
/// summation estimate with θ(x) < 1.01624x (Rosser–Schoenfeld):
/// tail ≤ 1.01624 (2/(N-1) + 1/(N-1)²) - θ(N)/(N-1)².
pub fn prime_sum_with_bound(prec: u32, bound: u64) -> RealEnclosure {
    let wp = prec + 40;
    let primes = primes_up_to(bound);
    let mut sum = RealEnclosure::from_int(0, wp);
    let mut theta = RealEnclosure::from_int(0, wp);
    for &p in primes.iter() {
        let lp = RealEnclosure::from_int(p as i64, wp).ln().expect("positive");
        let d = (p - 1) as i64;
        sum = &sum + &lp.mul_rational(&Rational::from((1, d * d)));
        theta = &theta + &lp;
    }
    let n = bound.max(2) as i64;
    let nm1 = RealEnclosure::from_int(n - 1, wp);
    let ln_n = RealEnclosure::from_int(n, wp).ln().expect("positive");
    // ∫_N^∞ log x/(x-1)² dx = log N/(N-1) - log(1 - 1/N)
    let one_minus = RealEnclosure::from_rational(&Rational::from((n - 1, n)), wp).ln().expect("positive");
    let integral = &(&ln_n / &nm1) - &one_minus;
    let rs = RealEnclosure::from_decimal("1.01624", wp).expect("literal");
    let inv = nm1.recip();
    let partial = &(&rs * &(&inv.mul_int(2) + &inv.square())) - &(&theta * &inv.square());
    let tail_hi = integral.min(&partial);
    let tail = RealEnclosure::new(rug::Float::new(wp), tail_hi.hi().clone());
    (&sum + &tail).round_to(prec)
}

/// Σ over odd primes only.
pub fn odd_prime_sum(prec: u32) -> RealEnclosure {
    let wp = prec + 8;
    (&prime_sum_constant(wp) - &RealEnclosure::ln2(wp)).round_to(prec)
}

/// 𝒜 = log 2 / 2 - 1 + Σ_p log p/(p-1)².
pub fn constant_a(prec: u32) -> RealEnclosure {
    let wp = prec + 8;
    let base = &RealEnclosure::ln2(wp).div_int(2) - &RealEnclosure::from_int(1, wp);
    (&base + &prime_sum_constant(wp)).round_to(prec)
}

/// log(2π).
pub fn ln_two_pi(prec: u32) -> RealEnclosure {
    RealEnclosure::pi(prec + 4).mul_int(2).ln().expect("positive").round_to(prec)
}

/// log A for the Glaisher–Kinkelin constant, from
/// ζ'(2)/ζ(2) = γ + log 2π - 12 log A.
pub fn ln_glaisher(prec: u32) -> RealEnclosure {
    let wp = prec + 16;
    let pi2 = RealEnclosure::pi(wp).square();
    let t = &zeta_prime_2(wp).mul_int(6) / &pi2;
    let s = &(&euler_gamma(wp) + &ln_two_pi(wp)) - &t;
    s.div_int(12).round_to(prec)
}

/// ζ'(-1) = 1/12 - log A.
pub fn zeta_prime_minus_one(prec: u32) -> RealEnclosure {
    let wp = prec + 8;
    (&RealEnclosure::from_rational(&Rational::from((1, 12)), wp) - &ln_glaisher(wp)).round_to(prec)
}

/// 𝒞 = 2^{-1/4} e^{1/24} exp(1/12 - ζ'(-1))^{-1/2}.
pub fn kellner_c(prec: u32) -> RealEnclosure {
    let wp = prec + 16;
    let one_twelfth = RealEnclosure::from_rational(&Rational::from((1, 12)), wp);
    let ln_a = &one_twelfth - &zeta_prime_minus_one(wp);
    let expo = &(&RealEnclosure::from_rational(&Rational::from((1, 24)), wp) - &RealEnclosure::ln2(wp).div_int(4))
        - &ln_a.div_int(2);
    expo.exp().round_to(prec)
}

/// 576 π².
pub fn wright_threshold(prec: u32) -> RealEnclosure {
    RealEnclosure::pi(prec + 4).square().mul_int(576).round_to(prec)
}
