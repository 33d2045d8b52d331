//! Riemann zeta and companion constants by Euler–Maclaurin summation with explicit
//! remainder bounds.

use rug::ops::Pow;
use rug::{Complete, Integer, Rational};

use super::bernoulli::bernoulli_upto;
use super::enclosure::RealEnclosure;
use crate::error::{Error, Result};

fn factorial(n: u64) -> Integer {
    Integer::factorial(n as u32).complete()
}

/// Initial (terms, corrections) for a target of `bits` bits; each correction gains
/// roughly six bits when the two are equal.
fn initial_sizes(bits: u32) -> (u64, usize) {
    let m = (bits as usize) / 6 + 6;
    (m as u64 + 4, m)
}

fn power_of_two(e: i64, prec: u32) -> RealEnclosure {
    RealEnclosure::from_int(2, prec).powi(e as i32)
}

/// ζ(s) for rational s > 1.
pub fn zeta_enclosure(s: &Rational, prec: u32) -> Result<RealEnclosure> {
    if *s <= 1 {
        return Err(Error::DomainError(format!("zeta needs s > 1, got {s}")));
    }
    let wp = prec + 32;
    let target = power_of_two(-(prec as i64) - 4, wp);
    let integral_s = (s.denom() == &1u32).then(|| s.numer().to_i32()).flatten();
    let s_enc = RealEnclosure::from_rational(s, wp);
    let (mut n, mut m) = initial_sizes(prec);
    loop {
        let b = bernoulli_upto(2 * m);
        let n_enc = RealEnclosure::from_int(n as i64, wp);
        let n_pow_s = match integral_s {
            Some(k) => n_enc.powi(-k),
            None => n_enc.pow(&-&s_enc)?,
        };
        // 2|B_2M|/(2M)! (s)_{2M-1} N^{-s-2M+1}
        let mut poch = s_enc.clone();
        for i in 1..(2 * m - 1) {
            poch = &poch * &s_enc.add_rational(&Rational::from(i as u64));
        }
        let bound_coeff = b[2 * m].clone().abs() * 2u32 / factorial(2 * m as u64)
            / Integer::from(n).pow(2 * m as u32 - 1);
        let remainder = &n_pow_s * &poch.mul_rational(&bound_coeff);
        if !remainder.hi().is_finite() || remainder.hi() > target.lo() {
            n += n / 2 + 1;
            m += 2;
            continue;
        }
        let mut sum = RealEnclosure::from_int(0, wp);
        for k in 1..n {
            let ke = RealEnclosure::from_int(k as i64, wp);
            let t = match integral_s {
                Some(e) => ke.powi(-e),
                None => ke.pow(&-&s_enc)?,
            };
            sum = &sum + &t;
        }
        let one = RealEnclosure::from_int(1, wp);
        sum = &sum + &(&(&n_pow_s * &n_enc) / &(&s_enc - &one));
        sum = &sum + &n_pow_s.div_int(2);
        let mut poch = s_enc.clone();
        for j in 1..m {
            // B_2j/(2j)! (s)_{2j-1} N^{-s-2j+1}
            let c = b[2 * j].clone() / factorial(2 * j as u64) / Integer::from(n).pow(2 * j as u32 - 1);
            sum = &sum + &(&poch * &n_pow_s).mul_rational(&c);
            poch = &poch * &s_enc.add_rational(&Rational::from(2 * j as u64 - 1));
            poch = &poch * &s_enc.add_rational(&Rational::from(2 * j as u64));
        }
        return Ok(sum.widen(remainder.hi()).round_to(prec));
    }
}

/// Euler's constant γ.
pub fn euler_gamma(prec: u32) -> RealEnclosure {
    let wp = prec + 32;
    let (n, m) = initial_sizes(prec);
    let b = bernoulli_upto(2 * m);
    let mut h = Rational::new();
    for k in 1..=n {
        h += Rational::from((1, k));
    }
    h -= Rational::from((1, 2 * n));
    let nn = Integer::from(n);
    for s in 1..m {
        h += b[2 * s].clone() / (Integer::from(2 * s as u64) * nn.clone().pow(2 * s as u32));
    }
    let err = b[2 * m].clone().abs() * 2u32 / (Integer::from(2 * m as u64) * nn.clone().pow(2 * m as u32));
    let ln_n = RealEnclosure::from_int(n as i64, wp).ln().expect("positive");
    let g = &RealEnclosure::from_rational(&h, wp) - &ln_n;
    let r = RealEnclosure::from_rational(&err, wp);
    g.widen(r.hi()).round_to(prec)
}

/// ζ'(2) = -Σ log k / k².
pub fn zeta_prime_2(prec: u32) -> RealEnclosure {
    let wp = prec + 32;
    let (_, mut m) = initial_sizes(prec);
    loop {
        // the remainder argument needs g^{(2M)} of constant sign on [N, ∞); its zero
        // sits at exp(H_{2M+1} - 1) < 2M + 1
        let n = (2 * m + 2) as u64;
        let b = bernoulli_upto(2 * m);
        // g^{(j)}(x) = x^{-2-j} (alpha_j ln x + beta_j) for g = -ln x / x²
        let mut alpha = vec![Integer::from(-1)];
        let mut beta = vec![Integer::new()];
        for j in 0..2 * m {
            let q = Integer::from(2 + j as u64);
            let a = -(q.clone() * &alpha[j]);
            let bb = -(q * &beta[j]) + &alpha[j];
            alpha.push(a);
            beta.push(bb);
        }
        let n_enc = RealEnclosure::from_int(n as i64, wp);
        let ln_n = n_enc.ln().expect("positive");
        let root = Rational::from((-beta[2 * m].clone(), alpha[2 * m].clone()));
        if !ln_n.certainly_gt(&RealEnclosure::from_rational(&root, wp)) {
            m += 2;
            continue;
        }
        let g_deriv = |j: usize| -> RealEnclosure {
            let lin = &ln_n.mul_rational(&Rational::from(alpha[j].clone())) + &RealEnclosure::from_integer(&beta[j], wp);
            lin.mul_rational(&Rational::from((1, Integer::from(n).pow(2 + j as u32))))
        };
        let mut sum = RealEnclosure::from_int(0, wp);
        for k in 2..n {
            let ke = RealEnclosure::from_int(k as i64, wp);
            let t = ke.ln().expect("positive").mul_rational(&Rational::from((-1, Integer::from(k * k))));
            sum = &sum + &t;
        }
        // ∫_N^∞ g = -(ln N + 1)/N
        let one = RealEnclosure::from_int(1, wp);
        sum = &sum - &(&ln_n + &one).div_int(n as i64);
        sum = &sum + &g_deriv(0).div_int(2);
        for j in 1..m {
            let c = b[2 * j].clone() / factorial(2 * j as u64);
            sum = &sum - &g_deriv(2 * j - 1).mul_rational(&c);
        }
        let rc = b[2 * m].clone().abs() * 2u32 / factorial(2 * m as u64);
        let remainder = g_deriv(2 * m - 1).abs().mul_rational(&rc);
        return sum.widen(remainder.hi()).round_to(prec);
    }
}
