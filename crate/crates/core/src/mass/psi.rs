//! The character of K(√-1)/K at dyadic primes, found by enumerating squares in a
//! finite quotient of the ring of integers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{DyadicClass, Field};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DyadicPsi {
    Minus,
    Zero,
    Plus,
}

impl DyadicPsi {
    pub fn value(self) -> i8 {
        match self {
            DyadicPsi::Minus => -1,
            DyadicPsi::Zero => 0,
            DyadicPsi::Plus => 1,
        }
    }

    pub fn from_value(v: i8) -> Result<Self> {
        match v {
            -1 => Ok(DyadicPsi::Minus),
            0 => Ok(DyadicPsi::Zero),
            1 => Ok(DyadicPsi::Plus),
            _ => Err(Error::Parse(format!("psi value {v} is not -1, 0 or 1"))),
        }
    }
}

/// Trichotomy on the largest 𝔭-adic valuation of x² + 1 seen over all x.
fn classify(best: u32, e: u32) -> DyadicPsi {
    if best > 2 * e {
        DyadicPsi::Plus
    } else if best >= 2 * e {
        DyadicPsi::Minus
    } else {
        DyadicPsi::Zero
    }
}

fn v2(x: i64, cap: u32) -> u32 {
    if x == 0 {
        cap
    } else {
        x.trailing_zeros().min(cap)
    }
}

/// Work in 𝒪/8𝒪 with 𝒪 = ℤ[ω]. Writing ω² = c0 + c1·ω, an element is a + bω with
/// a, b mod 8. The modulus 8 is enough: 2e + 1 ≤ 5 and 8𝒪 = 𝔭^6 when e = 2.
fn enumerate(valuation: impl Fn(i64, i64) -> u32, c0: i64, c1: i64) -> u32 {
    let mut best = 0;
    for a in 0..8i64 {
        for b in 0..8i64 {
            // (a + bω)² + 1
            let u = (a * a + c0 * b * b + 1).rem_euclid(8);
            let v = (2 * a * b + c1 * b * b).rem_euclid(8);
            best = best.max(valuation(u, v));
        }
    }
    best
}

/// ψ(𝔭) for the `index`-th dyadic prime of `field`.
pub fn psi_dyadic(field: &Field, index: usize) -> Result<DyadicPsi> {
    let desc = field.descriptor();
    let p = *desc
        .dyadic
        .get(index)
        .ok_or(Error::OutOfRange { what: "dyadic prime index", value: index as i64 })?;
    match field {
        Field::Rationals => {
            let best = (0..8i64).map(|x| v2((x * x + 1) % 8, 3)).max().unwrap_or(0);
            Ok(classify(best, p.e))
        }
        Field::Quadratic(k) => {
            let d = k.radicand() as i64;
            let best = match k.dyadic_class() {
                DyadicClass::Split => {
                    // ω = (1 + √D)/2 is a root of t² - t - (D-1)/4; map ω to the 2-adic
                    // root r of that polynomial, read mod 8
                    let c0 = (d - 1) / 4;
                    let r = (0..8i64).find(|t| (t * t - t - c0).rem_euclid(8) == 0 && t % 2 == 0);
                    let r = r.ok_or_else(|| Error::ParityInternal("no Hensel root mod 8".into()))?;
                    enumerate(|u, v| v2((u + v * r).rem_euclid(8), 3), c0, 1)
                }
                DyadicClass::Inert => {
                    let c0 = (d - 1) / 4;
                    enumerate(|u, v| v2(u, 3).min(v2(v, 3)), c0, 1)
                }
                DyadicClass::Ramified => {
                    // 𝔭² = (2) and 𝒪 = ℤ[√D]: peel off 2^j, then test the remaining
                    // element for membership in 𝔭 by the parity of its norm
                    enumerate(
                        |u, v| {
                            let j = v2(u, 3).min(v2(v, 3));
                            if j >= 3 {
                                return 6;
                            }
                            let (u1, v1) = (u >> j, v >> j);
                            2 * j + u32::from((u1 * u1 - d * v1 * v1) % 2 == 0)
                        },
                        d,
                        0,
                    )
                }
            };
            Ok(classify(best, p.e))
        }
        Field::Descriptor { psi, .. } => match psi {
            Some(vals) => DyadicPsi::from_value(vals[index]),
            None => Err(Error::UnsupportedField(
                "psi at dyadic primes must be supplied for fields of degree >= 3".into(),
            )),
        },
    }
}

/// ψ at every dyadic prime, in descriptor order.
pub fn psi_values(field: &Field) -> Result<Vec<DyadicPsi>> {
    (0..field.descriptor().dyadic.len()).map(|i| psi_dyadic(field, i)).collect()
}
