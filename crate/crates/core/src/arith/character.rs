use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::{Assign, Integer, Rational};

use super::bernoulli::bernoulli_upto;
use super::exact::ExactFactored;
use crate::error::{Error, Result};

/// Kronecker symbol (a/n).
pub fn kronecker(a: i64, n: i64) -> i8 {
    const TAB: [i8; 8] = [0, 1, 0, -1, 0, -1, 0, 1];
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut a = a;
    let mut b = n;
    let mut v = 0;
    while b % 2 == 0 {
        v += 1;
        b /= 2;
    }
    let mut k: i8 = if v % 2 == 0 { 1 } else { TAB[(a & 7) as usize] };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    loop {
        if a == 0 {
            return if b == 1 { k } else { 0 };
        }
        let mut v = 0;
        while a % 2 == 0 {
            v += 1;
            a /= 2;
        }
        if v % 2 == 1 {
            k *= TAB[(b & 7) as usize];
        }
        if a & b & 2 != 0 {
            k = -k;
        }
        let r = a.abs();
        a = b % r;
        b = r;
    }
}

fn squarefree_i64(n: i64) -> bool {
    crate::fields::is_squarefree(n.unsigned_abs())
}

pub fn is_fundamental_discriminant(m: i64) -> bool {
    if m == 1 {
        return true;
    }
    if m == 0 {
        return false;
    }
    match m.rem_euclid(4) {
        1 => squarefree_i64(m),
        0 => {
            let k = m / 4;
            matches!(k.rem_euclid(4), 2 | 3) && squarefree_i64(k)
        }
        _ => false,
    }
}

/// The primitive quadratic character attached to a fundamental discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticCharacter {
    conductor: i64,
}

impl QuadraticCharacter {
    pub fn new(conductor: i64) -> Result<Self> {
        if !is_fundamental_discriminant(conductor) {
            return Err(Error::DomainError(format!("{conductor} is not a fundamental discriminant")));
        }
        Ok(QuadraticCharacter { conductor })
    }

    pub fn trivial() -> Self {
        QuadraticCharacter { conductor: 1 }
    }

    pub fn conductor(&self) -> i64 {
        self.conductor
    }

    pub fn modulus(&self) -> u64 {
        self.conductor.unsigned_abs()
    }

    pub fn is_trivial(&self) -> bool {
        self.conductor == 1
    }

    /// 0 for even characters, 1 for odd ones.
    pub fn parity(&self) -> i64 {
        if self.conductor < 0 {
            1
        } else {
            0
        }
    }

    pub fn value(&self, a: i64) -> i8 {
        if a < 0 {
            let s: i8 = if self.conductor < 0 { -1 } else { 1 };
            return s * kronecker(self.conductor, -a);
        }
        if self.conductor == 1 {
            return 1;
        }
        kronecker(self.conductor, a)
    }
}

/// Power sums S_j = sum_{a=1}^{f} χ(a) a^j, shared across calls.
fn power_sums(chi: QuadraticCharacter, jmax: usize) -> Arc<Vec<Integer>> {
    static CACHE: OnceLock<Mutex<HashMap<i64, Arc<Vec<Integer>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&chi.conductor) {
        if v.len() > jmax {
            return v.clone();
        }
    }
    // grow geometrically so later calls at larger j are cached too
    let len = (jmax + 1).max(24).next_power_of_two();
    let f = chi.modulus() as i64;
    let mut sums = vec![Integer::new(); len];
    let mut pw = Integer::new();
    for a in 1..=f {
        let c = chi.value(a);
        if c == 0 {
            continue;
        }
        pw.assign(1u32);
        for s in sums.iter_mut() {
            if c > 0 {
                *s += &pw;
            } else {
                *s -= &pw;
            }
            pw *= a;
        }
    }
    let v = Arc::new(sums);
    cache.lock().unwrap_or_else(|e| e.into_inner()).insert(chi.conductor, v.clone());
    v
}

/// Generalized Bernoulli number B_{n,χ} = sum_k C(n,k) B_k f^{k-1} S_{n-k}.
pub fn gen_bernoulli(n: usize, chi: QuadraticCharacter) -> Rational {
    let b = bernoulli_upto(n);
    let s = power_sums(chi, n);
    let f = Integer::from(chi.modulus());
    let mut acc = Rational::new();
    let mut binom = Integer::from(1);
    let mut fpow = Rational::from((1, f.clone()));
    for (k, bk) in b.iter().enumerate() {
        if *bk != 0 {
            let term = Rational::from(bk * &fpow) * Rational::from(&binom * &s[n - k]);
            acc += term;
        }
        binom = binom * (n - k) as u64 / (k + 1) as u64;
        fpow *= &f;
    }
    acc
}

/// Exact L(k, χ) from the functional equation, for k of the same parity as χ.
pub fn l_value_exact(k: i64, chi: QuadraticCharacter) -> Result<ExactFactored> {
    let a = chi.parity();
    if k < 1 || (k - a) % 2 != 0 || (chi.is_trivial() && k < 2) {
        return Err(Error::ParityError { k, conductor: chi.conductor });
    }
    let b = gen_bernoulli(k as usize, chi);
    let mut fact = Integer::from(1);
    for i in 2..=k as u64 {
        fact *= i;
    }
    let sign = if ((k - a) / 2) % 2 == 0 { -1 } else { 1 };
    let coeff = Rational::from(Integer::from(1) << (k - 1) as u32) * b / Rational::from(fact) * Rational::from(sign);
    Ok(ExactFactored::new(coeff, 2 * k, Integer::from(chi.modulus()), 2 - 4 * k))
}

/// ζ(k) for even k >= 2.
pub fn zeta_even_exact(k: i64) -> Result<ExactFactored> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::ParityError { k, conductor: 1 });
    }
    l_value_exact(k, QuadraticCharacter::trivial())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn legendre_euler(a: i64, p: i64) -> i8 {
        let mut r = 1i64;
        let mut b = a.rem_euclid(p);
        let mut e = (p - 1) / 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        match r {
            0 => 0,
            1 => 1,
            _ => -1,
        }
    }

    #[test]
    fn kronecker_matches_euler_criterion() {
        for p in [3i64, 5, 7, 11, 13, 101, 997] {
            for a in -50..50 {
                assert_eq!(kronecker(a, p), legendre_euler(a, p), "({a}/{p})");
            }
        }
    }

    #[test]
    fn kronecker_at_two() {
        for a in -40i64..40 {
            let want = if a % 2 == 0 {
                0
            } else {
                match a.rem_euclid(8) {
                    1 | 7 => 1,
                    _ => -1,
                }
            };
            assert_eq!(kronecker(a, 2), want);
        }
    }

    #[test]
    fn characters_are_periodic_and_multiplicative() {
        for m in [-4i64, -3, -8, 5, 8, 12, 13, -7, 3676, -919] {
            let chi = QuadraticCharacter::new(m).unwrap();
            let f = chi.modulus() as i64;
            for a in -60..60 {
                assert_eq!(chi.value(a), chi.value(a + f));
                for b in 1..20 {
                    assert_eq!(chi.value(a * b), chi.value(a) * chi.value(b));
                }
            }
            assert_eq!(chi.value(-1), if m < 0 { -1 } else { 1 });
        }
    }

    #[test]
    fn fundamental_discriminants() {
        let good = [1, 5, 8, 12, -3, -4, -7, -8, 13, 3676, -919];
        let bad = [0, 2, 3, 4, 9, 16, 20, -1, -48, 18, -3676];
        assert!(good.iter().all(|&m| is_fundamental_discriminant(m)));
        assert!(bad.iter().all(|&m| !is_fundamental_discriminant(m)));
    }

    #[test]
    fn gen_bernoulli_examples() {
        assert_eq!(gen_bernoulli(1, QuadraticCharacter::trivial()), Rational::from((1, 2)));
        let chi4 = QuadraticCharacter::new(-4).unwrap();
        assert_eq!(gen_bernoulli(1, chi4), Rational::from((-1, 2)));
        for n in (2..12).step_by(2) {
            assert_eq!(gen_bernoulli(n, chi4), 0);
        }
        let chi5 = QuadraticCharacter::new(5).unwrap();
        for n in (1..12).step_by(2) {
            assert_eq!(gen_bernoulli(n, chi5), 0);
        }
        assert_eq!(gen_bernoulli(2, chi5), Rational::from((4, 5)));
    }

    #[test]
    fn l_value_examples() {
        let chi4 = QuadraticCharacter::new(-4).unwrap();
        let l1 = l_value_exact(1, chi4).unwrap();
        assert_eq!(l1.coeff(), &Rational::from((1, 4)));
        assert_eq!(l1.pi_half_exp(), 2);
        assert_eq!(l1.disc_quarter_exp(), 0);
        let l3 = l_value_exact(3, chi4).unwrap();
        assert_eq!(l3.coeff(), &Rational::from((1, 32)));
        assert_eq!(l3.pi_half_exp(), 6);
        assert!(matches!(l_value_exact(2, chi4), Err(Error::ParityError { .. })));
        assert_eq!(zeta_even_exact(2).unwrap().coeff(), &Rational::from((1, 6)));
        assert_eq!(zeta_even_exact(4).unwrap().coeff(), &Rational::from((1, 90)));
        assert!(zeta_even_exact(3).is_err());
        // L(2, χ_5) = 4π²/(25√5)
        let l = l_value_exact(2, QuadraticCharacter::new(5).unwrap()).unwrap();
        let want = 4.0 * std::f64::consts::PI.powi(2) / (25.0 * 5f64.sqrt());
        let e = l.to_enclosure(80);
        assert!((e.to_f64() - want).abs() < 1e-14);
    }
}
