//! Bounds on the order of finite subgroups of GL_n(𝒪_K): the Collins–Friedland bound
//! and Schur's prime-by-prime bounds.

use rug::ops::Pow;
use rug::{Complete, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::arith::constants::constant_a;
use crate::arith::primes::{is_prime, primes_up_to};
use crate::arith::{ExactFactored, RealEnclosure};
use crate::error::{Error, Result};
use crate::fields::Field;

/// Schur's invariants at ℓ: t = [K(ζ) : K] and m = max{a : ζ_{ℓ^a} ∈ K(ζ)}, where ζ is
/// ζ_ℓ for odd ℓ and i for ℓ = 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SchurData {
    pub ell: u64,
    pub t: u64,
    pub m: u64,
}

/// Schur data for ℚ and real quadratic fields.
pub fn schur_data(field: &Field, ell: u64) -> Result<SchurData> {
    if !is_prime(ell) {
        return Err(Error::DomainError(format!("{ell} is not prime")));
    }
    let radicand = match field {
        Field::Rationals => None,
        Field::Quadratic(k) => Some(k.radicand()),
        Field::Descriptor { .. } => {
            return Err(Error::UnsupportedField("Schur data for degree >= 3 must be supplied".into()))
        }
    };
    if ell == 2 {
        let m = if radicand == Some(2) { 3 } else { 2 };
        return Ok(SchurData { ell, t: 2, m });
    }
    // K(ζ_ℓ) drops a degree only when K is the quadratic subfield ℚ(√ℓ*) of ℚ(ζ_ℓ),
    // which is real exactly when ℓ ≡ 1 mod 4
    let t = if ell % 4 == 1 && radicand == Some(ell) { (ell - 1) / 2 } else { ell - 1 };
    Ok(SchurData { ell, t, m: 1 })
}

/// Schur's exponent bound from explicit data.
pub fn schur_m_from(data: SchurData, n: u64) -> u64 {
    let mut total = data.m * (n / data.t);
    if data.ell == 2 {
        total += n;
    }
    let mut q = data.ell * data.t;
    while q <= n {
        total += n / q;
        q = q.saturating_mul(data.ell);
    }
    total
}

/// M_K(n, ℓ): the ℓ-adic valuation of a finite subgroup of GL_n(𝒪_K) is at most this.
pub fn schur_m(field: &Field, n: u64, ell: u64) -> Result<u64> {
    Ok(schur_m_from(schur_data(field, ell)?, n))
}

/// ∏_ℓ ℓ^{M_K(n, ℓ)}, over the primes with t_ℓ ≤ n (t_ℓ ≥ (ℓ-1)/2 in degree ≤ 2).
pub fn schur_product(field: &Field, n: u64) -> Result<Integer> {
    let mut acc = Integer::from(1);
    for &ell in primes_up_to(2 * n + 1).iter() {
        let e = schur_m(field, n, ell)?;
        if e > 0 {
            acc *= Integer::from(ell).pow(e as u32);
        }
    }
    Ok(acc)
}

/// 6^{dn/2} (n+1)!, a bound on |Aut(L)| proved for n > 71.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollinsFriedland {
    pub value: ExactFactored,
    /// False when n ≤ 71, where the bound is only advisory.
    pub proven: bool,
}

pub fn collins_friedland_bound(d: u32, n: u32) -> CollinsFriedland {
    let dn = i64::from(d) * i64::from(n);
    let fact = Integer::factorial(n + 1).complete();
    // 6^{dn/2} = 6^{2dn/4}
    let value = ExactFactored::quarter_power(&Integer::from(6), 2 * dn).mul_rational(&Rational::from(fact));
    CollinsFriedland { value, proven: n > 71 }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AutSource {
    CollinsFriedland,
    SchurGeneric,
    SchurSqrt2,
    SchurSqrtp,
}

/// The linear coefficient 𝒜_K in log M_n ≤ n log n + 𝒜_K n + o(n).
#[derive(Clone, Debug, PartialEq)]
pub struct AutBoundCoeff {
    pub a_k: RealEnclosure,
    pub source: AutSource,
    /// False when the two candidates could not be separated; `a_k` is then the
    /// pointwise minimum, which is still a valid coefficient.
    pub resolved: bool,
    pub bits: u32,
}

fn schur_branch(field: &Field, prec: u32) -> Result<(RealEnclosure, AutSource)> {
    let Field::Quadratic(k) = field else {
        return Err(Error::UnsupportedField("the coefficient is defined for real quadratic fields".into()));
    };
    let a = constant_a(prec);
    let d = k.radicand();
    if d == 2 {
        return Ok((&a + &RealEnclosure::ln2(prec).div_int(2), AutSource::SchurSqrt2));
    }
    if d % 4 == 1 && is_prime(d) {
        let p = d as i64;
        let lp = RealEnclosure::from_int(p, prec).ln()?;
        let extra = lp.mul_rational(&Rational::from((p, (p - 1) * (p - 1))));
        return Ok((&a + &extra, AutSource::SchurSqrtp));
    }
    Ok((a, AutSource::SchurGeneric))
}

/// log 6 - 1.
pub fn collins_friedland_coeff(prec: u32) -> RealEnclosure {
    &RealEnclosure::from_int(6, prec).ln().expect("positive") - &RealEnclosure::from_int(1, prec)
}

/// 𝒜_K = min(log 6 - 1, Schur branch), resolving the min by refinement up to `ceiling`.
pub fn coeff_a_k(field: &Field, prec: u32, ceiling: u32) -> Result<AutBoundCoeff> {
    let mut p = prec;
    loop {
        let cf = collins_friedland_coeff(p);
        let (schur, source) = schur_branch(field, p)?;
        if schur.certainly_lt(&cf) {
            return Ok(AutBoundCoeff { a_k: schur, source, resolved: true, bits: p });
        }
        if cf.certainly_lt(&schur) {
            return Ok(AutBoundCoeff { a_k: cf, source: AutSource::CollinsFriedland, resolved: true, bits: p });
        }
        if p >= ceiling {
            let source = if schur.hi() <= cf.hi() { source } else { AutSource::CollinsFriedland };
            return Ok(AutBoundCoeff { a_k: schur.min(&cf), source, resolved: false, bits: p });
        }
        p = (2 * p).min(ceiling);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(d: i64) -> Field {
        Field::quadratic(d).unwrap()
    }

    #[test]
    fn schur_examples() {
        assert_eq!(schur_m(&Field::Rationals, 1, 2).unwrap(), 1);
        assert_eq!(schur_m(&Field::Rationals, 2, 3).unwrap(), 1);
        assert_eq!(schur_data(&quad(5), 5).unwrap().t, 2);
        assert_eq!(schur_m(&quad(5), 2, 5).unwrap(), 1);
        assert_eq!(schur_data(&quad(2), 2).unwrap().m, 3);
        assert_eq!(schur_data(&quad(13), 5).unwrap().t, 4);
        assert!(schur_m(&Field::Rationals, 3, 4).is_err());
    }

    #[test]
    fn schur_monotone_in_n() {
        for field in [Field::Rationals, quad(2), quad(5), quad(13), quad(919)] {
            for &ell in primes_up_to(60).iter() {
                let mut prev = 0;
                for n in 1..=200 {
                    let m = schur_m(&field, n, ell).unwrap();
                    assert!(m >= prev);
                    prev = m;
                }
            }
        }
    }

    #[test]
    fn schur_product_covers_signed_permutations() {
        // GL_1(ℤ) = {±1} has order 2; the hyperoctahedral group has order 2^n n!
        let mut fact = Integer::from(1);
        for n in 1..=6u64 {
            fact *= n;
            let want = (Integer::from(1) << n as u32) * &fact;
            let got = schur_product(&Field::Rationals, n).unwrap();
            assert!(got >= want, "n = {n}");
        }
    }

    #[test]
    fn collins_friedland_examples() {
        let b = collins_friedland_bound(2, 72);
        let want = Integer::from(6).pow(72) * Integer::factorial(73).complete();
        assert_eq!(b.value.as_rational(), Some(&Rational::from(want)));
        assert!(b.proven);
        assert!(!collins_friedland_bound(1, 71).proven);
        assert_eq!(collins_friedland_bound(2, 3).value.as_rational(), Some(&Rational::from(216 * 24)));
        let odd = collins_friedland_bound(1, 3);
        assert_eq!(odd.value.disc_quarter_exp(), 2);
    }

    #[test]
    fn coefficient_examples() {
        let c = coeff_a_k(&quad(917), 96, 512).unwrap();
        assert_eq!(c.source, AutSource::SchurGeneric);
        assert!(c.a_k.contains_f64(0.5735419) || (c.a_k.to_f64() - 0.5735419).abs() < 1e-6);
        let c = coeff_a_k(&quad(5), 96, 512).unwrap();
        assert_eq!(c.source, AutSource::CollinsFriedland);
        assert!((c.a_k.to_f64() - 0.791759).abs() < 1e-5);
        let c = coeff_a_k(&quad(2), 96, 512).unwrap();
        assert_eq!(c.source, AutSource::CollinsFriedland);
        assert!(coeff_a_k(&Field::Rationals, 64, 64).is_err());
    }

    #[test]
    fn branch_classification() {
        let cf = collins_friedland_coeff(64).hi().to_f64() + 1e-12;
        for d in crate::fields::squarefree_range(2, 10_000) {
            let k = quad(d as i64);
            let (_, source) = schur_branch(&k, 64).unwrap();
            let want = if d == 2 {
                AutSource::SchurSqrt2
            } else if d % 4 == 1 && (2..d).take_while(|q| q * q <= d).all(|q| d % q != 0) {
                AutSource::SchurSqrtp
            } else {
                AutSource::SchurGeneric
            };
            assert_eq!(source, want, "D = {d}");
            if d % 97 == 0 || d < 40 {
                assert!(coeff_a_k(&k, 64, 128).unwrap().a_k.hi().to_f64() <= cf);
            }
        }
    }
}
