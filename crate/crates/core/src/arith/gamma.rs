use rug::{Complete, Integer, Rational};

use super::exact::ExactFactored;

/// Γ(m/2) for m >= 1 as an exact multiple of a power of √π.
pub fn gamma_half(m: u64) -> ExactFactored {
    assert!(m >= 1, "Γ(m/2) needs m >= 1");
    if m.is_multiple_of(2) {
        return ExactFactored::rational(Rational::from(Integer::factorial((m / 2 - 1) as u32).complete()));
    }
    // Γ(j + 1/2) = (2j)! / (4^j j!) √π
    let j = (m - 1) / 2;
    let num = Integer::factorial((2 * j) as u32).complete();
    let den = (Integer::from(1) << (2 * j) as u32) * Integer::factorial(j as u32).complete();
    ExactFactored::new(Rational::from((num, den)), 1, Integer::from(1), 0)
}

/// Γ(1/2) Γ(2/2) ... Γ(n/2).
pub fn gamma_half_product(n: u64) -> ExactFactored {
    let mut acc = ExactFactored::one();
    for m in 1..=n {
        acc = &acc * &gamma_half(m);
    }
    acc
}
