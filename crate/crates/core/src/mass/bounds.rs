use rug::{Float, Rational};

use super::korner::{sigma_n, zeta_k_exact};
use super::MassMode;
use crate::arith::character::zeta_even_exact;
use crate::arith::gamma::gamma_half_product;
use crate::arith::zeta::zeta_enclosure;
use crate::arith::{ExactFactored, RealEnclosure};
use crate::error::{Error, Result};
use crate::fields::Field;

/// F_n = 2 Γ(1/2) ⋯ Γ(n/2) / π^{n(n+1)/4}, exactly.
pub fn f_n(n: u32) -> ExactFactored {
    let n = u64::from(n);
    gamma_half_product(n).mul_rational(&Rational::from(2)) * ExactFactored::pi_half_power(-((n * (n + 1) / 2) as i64))
}

fn truncation(prec: u32) -> i64 {
    i64::from(prec / 2 + 2)
}

/// [1, exp(d·4^{-T})] bounds ∏_{i>T} ζ_K(2i), since ζ(2i) - 1 ≤ 3·4^{-i}.
fn tail_factor(t: i64, d: u32, prec: u32) -> RealEnclosure {
    let eps = RealEnclosure::from_int(4, prec).powi(-(t as i32)).mul_int(i64::from(d)).exp();
    RealEnclosure::new(Float::with_val(prec, 1), eps.hi().clone())
}

/// ∏_{i≥1} ζ(2i).
pub fn zeta_product_infinite(prec: u32) -> RealEnclosure {
    let wp = prec + 16;
    let t = truncation(prec);
    let mut acc = RealEnclosure::from_int(1, wp);
    for i in 1..=t {
        acc = &acc * &zeta_even_exact(2 * i).expect("even argument").to_enclosure(wp);
    }
    (&acc * &tail_factor(t, 1, wp)).round_to(prec)
}

/// ∏_{i≥1} ζ_K(2i); for descriptor fields only the range [1, (∏ ζ(2i))^d] is known.
pub fn zeta_k_product_infinite(field: &Field, prec: u32) -> Result<RealEnclosure> {
    let wp = prec + 16;
    let d = field.degree();
    if let Field::Descriptor { .. } = field {
        let hi = zeta_product_infinite(wp).powi(d as i32);
        return Ok(RealEnclosure::new(Float::with_val(prec, 1), hi.hi().clone()).round_to(prec));
    }
    let t = truncation(prec);
    let mut acc = RealEnclosure::from_int(1, wp);
    for i in 1..=t {
        let z = zeta_k_exact(field, 2 * i)?.expect("exact zeta for degree <= 2");
        acc = &acc * &z.to_enclosure(wp);
    }
    Ok((&acc * &tail_factor(t, d, wp)).round_to(prec))
}

fn check_rank(n: u32) -> Result<()> {
    if n < 3 {
        return Err(Error::DomainError(format!("mass bounds need n >= 3, got {n}")));
    }
    Ok(())
}

fn disc_power(field: &Field, n: u32, prec: u32) -> RealEnclosure {
    let n = i64::from(n);
    ExactFactored::quarter_power(&field.descriptor().discriminant, n * (n - 1)).to_enclosure(prec)
}

fn zeta_half(n: u32, prec: u32) -> RealEnclosure {
    zeta_enclosure(&Rational::from((n, 2)), prec).expect("n/2 > 1")
}

/// Δ^{n(n-1)/4} (F_n / (2^{(n+5)/2} (2ζ(n/2))^{δ}))^d with δ = 1 for even n.
pub fn mass_lower_in(field: &Field, n: u32, prec: u32) -> Result<RealEnclosure> {
    check_rank(n)?;
    let wp = prec + 32;
    let d = field.degree() as i32;
    let two = RealEnclosure::from_int(2, wp);
    let mut base = &f_n(n).to_enclosure(wp) / &two.pow_rational(&Rational::from((n + 5, 2)))?;
    if n.is_multiple_of(2) {
        base = &base / &zeta_half(n, wp).mul_int(2);
    }
    Ok((&disc_power(field, n, wp) * &base.powi(d)).round_to(prec))
}

/// Δ^{n(n-1)/4} ((3 F_n ζ(n/2)² / 2) ∏_{i≥1} ζ(2i))^d.
pub fn mass_upper_in(field: &Field, n: u32, prec: u32) -> Result<RealEnclosure> {
    check_rank(n)?;
    let wp = prec + 32;
    let d = field.degree() as i32;
    let base = &f_n(n).to_enclosure(wp).mul_rational(&Rational::from((3, 2))) * &zeta_half(n, wp).square();
    let base = &base * &zeta_product_infinite(wp);
    Ok((&disc_power(field, n, wp) * &base.powi(d)).round_to(prec))
}

/// Upper bound for the mass of any unimodular lattice of rank n:
/// σ_n (2^{30} ∏Γ(i/2) / π^{n(n+1)/4})^d Δ^{n(n-1)/4} ∏_{i ≤ (n-1)/2} ζ_K(2i).
///
/// σ_n and ζ_K are exact over ℚ and real quadratic fields. Otherwise σ_n is replaced
/// by its upper bound (3ζ(n/2)²/2)^d for even n and ζ_K(2i) by ζ(2i)^d.
pub fn mass_upper_unimodular(field: &Field, n: u32, prec: u32) -> Result<RealEnclosure> {
    check_rank(n)?;
    let wp = prec + 32;
    let d = field.degree() as i32;
    let top = (i64::from(n) - 1) / 2;
    let exact = field.degree() <= 2;
    let sigma = if exact {
        sigma_n(field, n, MassMode::Enclosure, wp)?.to_enclosure(wp)
    } else if n % 2 == 1 {
        RealEnclosure::from_int(1, wp)
    } else {
        zeta_half(n, wp).square().mul_rational(&Rational::from((3, 2))).powi(d)
    };
    let local = f_n(n).mul_rational(&Rational::from(1u32 << 29)).powi(i64::from(d));
    let mut z = RealEnclosure::from_int(1, wp);
    for i in 1..=top {
        let zi = match zeta_k_exact(field, 2 * i)? {
            Some(x) => x.to_enclosure(wp),
            None => zeta_even_exact(2 * i)?.to_enclosure(wp).powi(d),
        };
        z = &z * &zi;
    }
    let v = &(&sigma * &local.to_enclosure(wp)) * &(&disc_power(field, n, wp) * &z);
    Ok(v.round_to(prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mass::{korner_mass, MassMode};

    #[test]
    fn f_n_small() {
        // F_3 = 2 · (π/2) / π³ = π^{-2}
        let f = f_n(3);
        assert_eq!((f.coeff(), f.pi_half_exp()), (&Rational::from(1), -4));
    }

    #[test]
    fn infinite_product_value() {
        // ∏ ζ(2i) = 1.8210174514...
        let z = zeta_product_infinite(128);
        assert!(z.contains_f64(1.821_017_451_4) || (z.to_f64() - 1.821_017_451_4).abs() < 1e-9);
        assert!(z.width() < 1e-30);
        let zq = zeta_k_product_infinite(&Field::Rationals, 128).unwrap();
        assert!(zq.intersects(&z));
    }

    #[test]
    fn rational_rank_three_sandwich() {
        let lo = mass_lower_in(&Field::Rationals, 3, 96).unwrap();
        // π^{-2}/16
        assert!((lo.to_f64() - 1.0 / (16.0 * std::f64::consts::PI.powi(2))).abs() < 1e-15);
        let hi = mass_upper_in(&Field::Rationals, 3, 96).unwrap();
        let m = RealEnclosure::from_rational(&Rational::from((1, 48)), 96);
        assert!(lo.certainly_le(&m) && m.certainly_le(&hi));
    }

    #[test]
    fn quadratic_sandwich() {
        let k = Field::quadratic(5).unwrap();
        for n in 3..=12 {
            let m = korner_mass(&k, n, MassMode::Enclosure, 96).unwrap().total.to_enclosure(96);
            assert!(mass_lower_in(&k, n, 96).unwrap().certainly_le(&m), "n = {n}");
            assert!(m.certainly_le(&mass_upper_in(&k, n, 96).unwrap()), "n = {n}");
            assert!(m.certainly_le(&mass_upper_unimodular(&k, n, 96).unwrap()), "n = {n}");
        }
    }

    #[test]
    fn unimodular_ratio_identity() {
        // the unimodular bound over Körner's mass is 2^{29d} / ∏ ξ
        for (field, n) in [(Field::Rationals, 3u32), (Field::quadratic(7).unwrap(), 6), (Field::quadratic(17).unwrap(), 8)] {
            let m = korner_mass(&field, n, MassMode::Exact, 96).unwrap();
            let xi = m.xi.iter().fold(Rational::from(1), |a, x| a * x);
            let want = Rational::from(1u64 << (29 * field.degree())) / xi;
            let u = mass_upper_unimodular(&field, n, 128).unwrap();
            let ratio = &u / &m.total.to_enclosure(128);
            assert!(ratio.contains_rational(&want), "{} n={n}", field.label());
        }
    }

    #[test]
    fn rank_checks() {
        assert!(matches!(mass_lower_in(&Field::Rationals, 2, 64), Err(Error::DomainError(_))));
        assert!(mass_upper_unimodular(&Field::Rationals, 2, 64).is_err());
    }
}
