
use rug::{Float, Integer, Rational};

use super::psi::psi_values;
use super::{MassBreakdown, MassMode, MassTotal, MassValue};
use crate::arith::character::{kronecker, l_value_exact, zeta_even_exact, QuadraticCharacter};
use crate::arith::gamma::gamma_half_product;
use crate::arith::primes::first_primes;
use crate::arith::zeta::zeta_enclosure;
use crate::arith::{ExactFactored, RealEnclosure};
use crate::error::{Error, Result};
use crate::fields::{DyadicPrime, Field};

fn pow2(e: i64) -> Rational {
    let p = Rational::from(Integer::from(1) << e.unsigned_abs() as u32);
    if e >= 0 {
        p
    } else {
        p.recip()
    }
}

/// Körner's dyadic factor ξ(n, 𝔭).
pub fn xi_factor(n: u32, p: DyadicPrime) -> Rational {
    let (n, e, f) = (i64::from(n), i64::from(p.e), i64::from(p.f));
    let base = pow2(f * ((1 - n) * (e / 2) - e));
    if e % 2 == 0 {
        return base;
    }
    if n % 4 == 2 {
        return base / 2u32;
    }
    let sign = if (f * ((n + 1) / 4)) % 2 == 0 { 1 } else { -1 };
    let corr = Rational::from(1) + pow2(-f * ((n - 1) / 2)) * Rational::from(sign);
    base * corr / 2u32
}

/// ζ_K(k) for even k ≥ 2 when K is ℚ or real quadratic.
pub fn zeta_k_exact(field: &Field, k: i64) -> Result<Option<ExactFactored>> {
    let z = zeta_even_exact(k)?;
    Ok(match field {
        Field::Rationals => Some(z),
        Field::Quadratic(q) => {
            let chi = QuadraticCharacter::new(q.kronecker_conductor())?;
            Some(&z * &l_value_exact(k, chi)?)
        }
        Field::Descriptor { .. } => None,
    })
}

/// [1, ζ(k)^d]: the a priori range of ζ_K(k) for a field known only by its degree.
fn zeta_k_range(k: i64, d: u32, prec: u32) -> Result<RealEnclosure> {
    let z = zeta_enclosure(&Rational::from(k), prec)?.powi(d as i32);
    Ok(RealEnclosure::new(Float::with_val(prec, 1), z.hi().clone()))
}

fn exactness(field: &Field, mode: MassMode) -> Result<bool> {
    let exact_ok = field.degree() <= 2;
    if mode == MassMode::Exact && !exact_ok {
        return Err(Error::UnsupportedField(format!(
            "exact masses need degree <= 2, got {}",
            field.degree()
        )));
    }
    Ok(exact_ok)
}

/// L(k, ψ, K) = L(k, χ_{-4}) · L(k, χ_{-D*}), with -D* the fundamental discriminant
/// of ℚ(√-D); over ℚ only the first factor remains. Both characters are odd, so k
/// must be odd.
fn l_psi_exact(field: &Field, k: i64) -> Result<ExactFactored> {
    let internal = |e: Error| match e {
        Error::ParityError { k, conductor } => {
            Error::ParityInternal(format!("L({k}, chi) with conductor {conductor}"))
        }
        other => other,
    };
    let chi4 = QuadraticCharacter::new(-4)?;
    let l4 = l_value_exact(k, chi4).map_err(internal)?;
    match field {
        Field::Rationals => Ok(l4),
        Field::Quadratic(q) => {
            let twist = QuadraticCharacter::new(q.imaginary_twist_conductor())?;
            Ok(&l4 * &l_value_exact(k, twist).map_err(internal)?)
        }
        Field::Descriptor { .. } => Err(Error::UnsupportedField("no closed form for L(s, psi, K)".into())),
    }
}

const EULER_CHECK_PRIMES: usize = 10_000;

/// L(s, ψ, K) as a truncated Euler product over prime ideals above the first 10⁴
/// rational primes, for ℚ and real quadratic K and integral s ≥ 2.
///
/// Above an odd p the prime ideals have ψ(𝔭) = (-1/𝔭): split p gives two ideals of
/// norm p with value χ_{-4}(p), inert p one ideal of norm p² with value 1, ramified p
/// one of norm p. The tail over ideals of norm > P is at most 4P^{1-s}/(s-1) in log.
pub fn l_psi_euler_product(field: &Field, s: i64, prec: u32) -> Result<RealEnclosure> {
    if s < 2 {
        return Err(Error::DomainError("Euler product needs s >= 2".into()));
    }
    let disc = match field {
        Field::Rationals => None,
        Field::Quadratic(q) => Some(q.kronecker_conductor()),
        Field::Descriptor { .. } => return Err(Error::UnsupportedField("Euler product needs ℚ or quadratic".into())),
    };
    let wp = prec + 16;
    let one = RealEnclosure::from_int(1, wp);
    let mut prod = one.clone();
    let primes = first_primes(EULER_CHECK_PRIMES);
    let desc = field.descriptor();
    for (p, psi) in desc.dyadic.iter().zip(psi_values(field)?) {
        let v = psi.value();
        if v != 0 {
            let t = RealEnclosure::from_integer(&p.norm(), wp).powi(-(s as i32)).mul_int(i64::from(v));
            prod = &prod / &(&one - &t);
        }
    }
    for &p in primes.iter().skip(1) {
        let chi4 = if p % 4 == 1 { 1 } else { -1 };
        let ps = RealEnclosure::from_int(p as i64, wp).powi(-(s as i32));
        let split = disc.map_or(0, |m| kronecker(m, p as i64));
        match (disc, split) {
            (Some(_), -1) => prod = &prod / &(&one - &ps.square()),
            (Some(_), 1) => prod = &prod / &(&one - &ps.mul_int(chi4)).square(),
            _ => prod = &prod / &(&one - &ps.mul_int(chi4)),
        }
    }
    let big_p = *primes.last().expect("primes") as i64;
    let tail = RealEnclosure::from_int(big_p, wp).powi(1 - s as i32).mul_int(4).div_int(s - 1);
    let t = tail.hi().clone();
    let window = RealEnclosure::new(Float::with_val(wp, -&t), t).exp();
    Ok((&prod * &window).round_to(prec))
}

/// Debug builds compare the character factorization of L(s, ψ, K) with the Euler
/// product once per (field, s).
#[cfg(debug_assertions)]
fn cross_check(field: &Field, k: i64, exact: &ExactFactored) -> Result<()> {
    use std::collections::HashSet;
    use std::sync::{Mutex, OnceLock};
    static SEEN: OnceLock<Mutex<HashSet<(String, i64)>>> = OnceLock::new();
    let seen = SEEN.get_or_init(|| Mutex::new(HashSet::new()));
    let key = (field.label(), k);
    if seen.lock().unwrap_or_else(|e| e.into_inner()).contains(&key) {
        return Ok(());
    }
    let euler = l_psi_euler_product(field, k, 64)?;
    if !euler.intersects(&exact.to_enclosure(64)) {
        return Err(Error::ParityInternal(format!(
            "L({k}, psi) for {} disagrees with its Euler product",
            field.label()
        )));
    }
    seen.lock().unwrap_or_else(|e| e.into_inner()).insert(key);
    Ok(())
}

#[cfg(not(debug_assertions))]
fn cross_check(_: &Field, _: i64, _: &ExactFactored) -> Result<()> {
    Ok(())
}

/// The global factor σ_n.
pub fn sigma_n(field: &Field, n: u32, mode: MassMode, prec: u32) -> Result<MassValue> {
    if n == 2 {
        return Err(Error::ResidueRequired);
    }
    if n < 2 {
        return Err(Error::DomainError(format!("sigma_n needs n >= 2, got {n}")));
    }
    let exact_ok = exactness(field, mode)?;
    let wrap = |x: ExactFactored| match mode {
        MassMode::Exact => MassValue::Exact(x),
        MassMode::Enclosure => MassValue::Enclosure(x.to_enclosure(prec)),
    };
    if n % 2 == 1 {
        return Ok(wrap(ExactFactored::one()));
    }
    let k = i64::from(n / 2);
    let desc = field.descriptor();
    let d = desc.degree;
    if n.is_multiple_of(4) {
        let mut local = Rational::from(1);
        for p in &desc.dyadic {
            local *= Rational::from(1) - pow2(-i64::from(p.f) * k);
        }
        if exact_ok {
            let z = zeta_k_exact(field, k)?.expect("exact zeta for degree <= 2");
            return Ok(wrap(z.mul_rational(&local)));
        }
        let z = zeta_k_range(k, d, prec + 8)?;
        return Ok(MassValue::Enclosure(z.mul_rational(&local).round_to(prec)));
    }
    let psi = psi_values(field)?;
    let mut local = Rational::from(1);
    for (p, v) in desc.dyadic.iter().zip(&psi) {
        local *= Rational::from(1) - pow2(-i64::from(p.f) * k) * Rational::from(v.value());
    }
    if exact_ok {
        let l = l_psi_exact(field, k)?;
        cross_check(field, k, &l)?;
        return Ok(wrap(l.mul_rational(&local)));
    }
    // each Euler factor (1 - ψ N^{-s})^{-1} lies between (1 + N^{-s})^{-1} and
    // (1 - N^{-s})^{-1}, so L(s, ψ, K) ∈ [1/ζ_K(s), ζ_K(s)] ⊆ [ζ(s)^{-d}, ζ(s)^d]
    let z = zeta_k_range(k, d, prec + 8)?;
    let range = RealEnclosure::new(z.hi().clone(), z.hi().clone());
    let l = range.recip().hull(&range);
    Ok(MassValue::Enclosure(l.mul_rational(&local).round_to(prec)))
}

/// (2 Γ(1/2) ⋯ Γ(n/2) / π^{n(n+1)/4})^d.
fn gamma_factor(n: u32, d: u32) -> ExactFactored {
    let n = u64::from(n);
    let base = gamma_half_product(n).mul_rational(&Rational::from(2)) * ExactFactored::pi_half_power(-((n * (n + 1) / 2) as i64));
    base.powi(i64::from(d))
}

/// m_K(I_n) by Körner's formula.
pub fn korner_mass(field: &Field, n: u32, mode: MassMode, prec: u32) -> Result<MassBreakdown> {
    if n == 2 {
        return Err(Error::ResidueRequired);
    }
    if n < 2 {
        return Err(Error::DomainError(format!("the mass formula needs n >= 2, got {n}")));
    }
    let exact_ok = exactness(field, mode)?;
    let desc = field.descriptor();
    let d = desc.degree;
    let wp = prec + 32;
    let sigma = sigma_n(field, n, if exact_ok { MassMode::Exact } else { MassMode::Enclosure }, wp)?;
    let gamma = gamma_factor(n, d);
    let xi: Vec<Rational> = desc.dyadic.iter().map(|&p| xi_factor(n, p)).collect();
    let xi_prod = xi.iter().fold(Rational::from(1), |acc, x| acc * x);
    let ni = i64::from(n);
    let disc_power = Rational::from((ni * (ni - 1), 4));
    let top = (n as i64 - 1) / 2;
    let zeta_product = if exact_ok {
        let mut acc = ExactFactored::one();
        for i in 1..=top {
            acc = &acc * &zeta_k_exact(field, 2 * i)?.expect("exact zeta for degree <= 2");
        }
        MassValue::Exact(acc)
    } else {
        let mut acc = RealEnclosure::from_int(1, wp);
        for i in 1..=top {
            acc = &acc * &zeta_k_range(2 * i, d, wp)?;
        }
        MassValue::Enclosure(acc)
    };
    let disc = ExactFactored::quarter_power(&desc.discriminant, ni * (ni - 1));
    let total = match (&sigma, &zeta_product) {
        (MassValue::Exact(s), MassValue::Exact(z)) => {
            let t = (&(&(s * &gamma) * &disc) * z).mul_rational(&xi_prod);
            let q = t
                .as_rational()
                .cloned()
                .ok_or_else(|| Error::ParityInternal(format!("exact mass did not reduce to a rational: {t}")))?;
            assert!(q > 0, "mass must be positive");
            match mode {
                MassMode::Exact => MassTotal::Exact(q),
                MassMode::Enclosure => MassTotal::Enclosure(RealEnclosure::from_rational(&q, prec)),
            }
        }
        _ => {
            let parts = &(&sigma.to_enclosure(wp) * &(&gamma * &disc).to_enclosure(wp)) * &zeta_product.to_enclosure(wp);
            MassTotal::Enclosure(parts.mul_rational(&xi_prod).round_to(prec))
        }
    };
    let (sigma, zeta_product) = match mode {
        MassMode::Exact => (sigma, zeta_product),
        MassMode::Enclosure => (
            MassValue::Enclosure(sigma.to_enclosure(prec)),
            MassValue::Enclosure(zeta_product.to_enclosure(prec)),
        ),
    };
    Ok(MassBreakdown {
        field: field.label(),
        rank: n,
        prec,
        sigma,
        gamma_factor: gamma,
        disc_power,
        xi,
        zeta_product,
        total,
    })
}
