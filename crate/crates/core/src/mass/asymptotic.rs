use rug::Rational;

use super::bounds::zeta_k_product_infinite;
use crate::arith::constants::{ln_glaisher, ln_two_pi};
use crate::arith::RealEnclosure;
use crate::error::{Error, Result};
use crate::fields::{Field, FieldDescriptor};

/// ∏_{𝔭|2} N𝔭^{⌊e/2⌋-e} / 2^{[e odd]}.
pub fn ck_dyadic_factor(desc: &FieldDescriptor) -> Rational {
    let mut acc = Rational::from(1);
    for p in &desc.dyadic {
        let expo = i64::from(p.f) * (i64::from(p.e / 2) - i64::from(p.e)) - i64::from(p.e % 2);
        acc /= Rational::from(rug::Integer::from(1) << expo.unsigned_abs() as u32);
    }
    acc
}

/// The constant C_K = 2^{-5d/4} e^{d/24} A^{-d/2} · (dyadic factor) · ∏_{i≥1} ζ_K(2i),
/// with A = exp(1/12 - ζ'(-1)) the Glaisher–Kinkelin constant.
pub fn mass_asymptotic_ck(field: &Field, prec: u32) -> Result<RealEnclosure> {
    let wp = prec + 32;
    let desc = field.descriptor();
    let d = i64::from(desc.degree);
    let ln2 = RealEnclosure::ln2(wp);
    let expo = &(&RealEnclosure::from_rational(&Rational::from((d, 24)), wp) - &ln2.mul_rational(&Rational::from((5 * d, 4))))
        - &ln_glaisher(wp).mul_rational(&Rational::from((d, 2)));
    let c = expo.exp().mul_rational(&ck_dyadic_factor(desc));
    Ok((&c * &zeta_k_product_infinite(field, wp)?).round_to(prec))
}

/// The four leading terms of log m_K(I_n):
/// (d/4) n² log n + n²(2 log Δ - 2d log 2π - 3d)/8 - (d/4) n log n
/// + n((d log 8π + d - log Δ)/4 - Σ ⌊e/2⌋ log N𝔭).
pub fn log_mass_expansion(field: &Field, n: u32, prec: u32) -> Result<RealEnclosure> {
    if n < 3 {
        return Err(Error::DomainError(format!("the expansion is evaluated for n >= 3, got {n}")));
    }
    let wp = prec + 32;
    let desc = field.descriptor();
    let d = i64::from(desc.degree);
    let ni = i64::from(n);
    let ln_n = RealEnclosure::from_int(ni, wp).ln()?;
    let ln_disc = RealEnclosure::from_integer(&desc.discriminant, wp).ln()?;
    let l2pi = ln_two_pi(wp);
    let ln2 = RealEnclosure::ln2(wp);
    let ln8pi = &l2pi + &ln2.mul_int(2);
    let quad = &(&ln_disc.mul_int(2) - &l2pi.mul_int(2 * d)) - &RealEnclosure::from_int(3 * d, wp);
    let dyadic_log: i64 = desc.dyadic.iter().map(|p| i64::from(p.e / 2) * i64::from(p.f)).sum();
    let lin = &(&ln8pi.mul_int(d) + &RealEnclosure::from_int(d, wp)) - &ln_disc;
    let lin = &lin.div_int(4) - &ln2.mul_int(dyadic_log);
    let n2 = RealEnclosure::from_int(ni * ni, wp);
    let nn = RealEnclosure::from_int(ni, wp);
    let dq = Rational::from((d, 4));
    let terms = &(&(&(&n2 * &ln_n).mul_rational(&dq) + &(&n2 * &quad).div_int(8)) - &(&nn * &ln_n).mul_rational(&dq))
        + &(&nn * &lin);
    Ok(terms.round_to(prec))
}
