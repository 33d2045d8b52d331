//! Independent oracles shared by the integration targets.

#![allow(dead_code)]

use rug::{Integer, Rational};

/// |Aut(I_n)| = 2ⁿ n!, the signed permutation matrices.
pub fn aut_in(n: u32) -> Integer {
    Integer::from(Integer::factorial(n)) << n
}

/// The 240 roots of E_8 in the coordinates of D_8 ∪ (D_8 + ½·1), scaled by 2.
pub fn e8_roots() -> Vec<[i32; 8]> {
    let mut roots = Vec::new();
    for i in 0..8 {
        for j in i + 1..8 {
            for (si, sj) in [(2, 2), (2, -2), (-2, 2), (-2, -2)] {
                let mut v = [0; 8];
                v[i] = si;
                v[j] = sj;
                roots.push(v);
            }
        }
    }
    for mask in 0u32..256 {
        if mask.count_ones() % 2 == 0 {
            let mut v = [1; 8];
            for (k, x) in v.iter_mut().enumerate() {
                if mask >> k & 1 == 1 {
                    *x = -1;
                }
            }
            roots.push(v);
        }
    }
    roots
}

/// |W(E_8)| from the enumerated root system: the Coxeter number is #roots / rank and
/// the group order is the product of the degrees 1 + mᵢ, with exponents mᵢ coprime to h.
pub fn weyl_e8_order() -> Integer {
    let roots = e8_roots();
    assert!(roots.iter().all(|r| r.iter().map(|x| x * x).sum::<i32>() == 8));
    let h = roots.len() as u32 / 8;
    let gcd = |mut a: u32, mut b: u32| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    (1..h).filter(|&m| gcd(m, h) == 1).map(|m| Integer::from(m + 1)).product()
}

/// Mass of gen(I_n) over ℚ from the classified genera for n ≤ 9.
pub fn mass_q_classified(n: u32) -> Rational {
    let single = Rational::from((1, aut_in(n)));
    match n {
        ..=8 => single,
        9 => single + Rational::from((1, weyl_e8_order() * 2u32)),
        _ => panic!("no classified oracle for n = {n}"),
    }
}

/// 𝒪/2^k𝒪 for 𝒪 = ℤ[ω] with ω² = c0 + c1·ω, or ℤ itself when `second` is false;
/// `val` is the 𝔭-adic valuation of a residue, capped by the modulus.
pub struct Quotient {
    pub k: u32,
    pub c0: i64,
    pub c1: i64,
    pub second: bool,
    pub val: fn(i64, i64, u32) -> u64,
}

pub fn v2(x: i64, cap: u32) -> u64 {
    u64::from(if x == 0 { cap } else { x.trailing_zeros().min(cap) })
}

impl Quotient {
    pub fn integers() -> Self {
        Quotient { k: 12, c0: 0, c1: 0, second: false, val: |a, _, k| v2(a, k) }
    }

    /// ℚ(√5), where 2 is inert.
    pub fn inert() -> Self {
        Quotient { k: 5, c0: 1, c1: 1, second: true, val: |a, b, k| v2(a, k).min(v2(b, k)) }
    }

    /// ℚ(√2), with uniformiser √2.
    pub fn ramified() -> Self {
        Quotient { k: 6, c0: 2, c1: 0, second: true, val: |a, b, k| (2 * v2(a, k)).min(2 * v2(b, k) + 1) }
    }

    fn elements(&self) -> Vec<(i64, i64)> {
        let m = 1i64 << self.k;
        let bs = if self.second { m } else { 1 };
        (0..m).flat_map(|a| (0..bs).map(move |b| (a, b))).collect()
    }

    fn square(&self, (a, b): (i64, i64)) -> (i64, i64) {
        let m = 1i64 << self.k;
        ((a * a + self.c0 * b * b).rem_euclid(m), (2 * a * b + self.c1 * b * b).rem_euclid(m))
    }

    fn valuation(&self, x: (i64, i64), y: (i64, i64)) -> u64 {
        let m = 1i64 << self.k;
        (self.val)((x.0 - y.0).rem_euclid(m), (x.1 - y.1).rem_euclid(m), self.k)
    }

    /// Largest v such that 𝔭^v is still visible in the quotient.
    pub fn max_v(&self) -> u64 {
        let e = if self.c0 == 2 { 2 } else { 1 };
        e * u64::from(self.k)
    }

    /// |(𝒪/𝔭^v)^× / squares| by listing the squares of units.
    pub fn count(&self, v: u64, norm: u64) -> u64 {
        let mut reps: Vec<(i64, i64)> = Vec::new();
        for x in self.elements() {
            if self.valuation(x, (0, 0)) != 0 {
                continue;
            }
            let s = self.square(x);
            if !reps.iter().any(|&r| self.valuation(s, r) >= v) {
                reps.push(s);
            }
        }
        let units = norm.pow(v as u32 - 1) * (norm - 1);
        assert_eq!(units % reps.len() as u64, 0);
        units / reps.len() as u64
    }
}
