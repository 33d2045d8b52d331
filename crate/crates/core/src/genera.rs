//! Counting bounds for unimodular genera and dyadic norm groups.

use rug::Integer;
use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::fields::FieldDescriptor;

fn pow2(e: u64) -> Integer {
    Integer::from(1) << e as u32
}

/// G(a, b) = Σ_{x=0}^{a} Σ_{y=0}^{⌊x/2⌋} 2^{yb}.
pub fn g(a: u64, b: u64) -> Integer {
    let mut acc = Integer::new();
    for x in 0..=a {
        for y in 0..=x / 2 {
            acc += pow2(y * b);
        }
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneraBound {
    pub per_prime: Vec<Integer>,
    pub product: Integer,
    pub cap: Integer,
}

impl GeneraBound {
    pub fn to_json(&self) -> Json {
        json!({
            "per_prime": self.per_prime.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "product": self.product.to_string(),
            "cap": self.cap.to_string(),
        })
    }
}

/// 5^{d/2} for even d, 2·5^{(d-1)/2} for odd d.
pub fn genera_cap(d: u64) -> Integer {
    let five = Integer::from(Integer::u_pow_u(5, (d / 2) as u32));
    if d.is_multiple_of(2) {
        five
    } else {
        five * 2u32
    }
}

/// Upper bound for the number of unimodular genera over K.
pub fn genera_bound(desc: &FieldDescriptor) -> GeneraBound {
    let per_prime: Vec<Integer> = desc.dyadic.iter().map(|p| g(u64::from(p.e), u64::from(p.f))).collect();
    let product: Integer = per_prime.iter().product();
    let cap = genera_cap(u64::from(desc.degree));
    assert!(product <= cap, "genera product exceeds its cap for {desc}");
    GeneraBound { per_prime, product, cap }
}

/// Number of unit square classes modulo 𝔭^v at a dyadic prime with invariants (e, f).
pub fn unit_square_classes(e: u64, f: u64, v: u64) -> Result<Integer> {
    if v < 1 {
        return Err(Error::OutOfRange { what: "v must be >= 1", value: v as i64 });
    }
    Ok(if v <= 2 * e { pow2((v / 2) * f) } else { pow2(e * f + 1) })
}

/// Norm groups realised with u fixed, or over all 0 ≤ u ≤ e when `u` is None.
pub fn norm_group_count(e: u64, f: u64, u: Option<u64>) -> Result<Integer> {
    match u {
        Some(u) if u > e => Err(Error::OutOfRange { what: "u must satisfy 0 <= u <= e", value: u as i64 }),
        Some(u) => Ok((pow2(((e - u) / 2 + 1) * f) - 1u32) / (pow2(f) - 1u32)),
        None => Ok(g(e, f)),
    }
}

/// Outcome of the exhaustive check behind the genera cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionCheck {
    pub d: u64,
    /// max over partitions (a_i) of d of ∏ G(a_i, 1).
    pub max_unweighted: Integer,
    /// max over multisets of (a_i, b_i) with Σ a_i b_i = d of ∏ G(a_i, b_i).
    pub max_weighted: Integer,
    pub cap: Integer,
    pub holds: bool,
}

fn partitions(d: u64, largest: u64, cur: &mut Vec<u64>, out: &mut impl FnMut(&[u64])) {
    if d == 0 {
        out(cur);
        return;
    }
    for s in (1..=largest.min(d)).rev() {
        cur.push(s);
        partitions(d - s, s, cur, out);
        cur.pop();
    }
}

/// Every way of writing each part s as a·b, multiplied out.
fn weighted_products(parts: &[u64], acc: Integer, best: &mut Integer) {
    let Some((&s, rest)) = parts.split_first() else {
        if acc > *best {
            *best = acc;
        }
        return;
    };
    for b in 1..=s {
        if s % b == 0 {
            weighted_products(rest, Integer::from(&acc * &g(s / b, b)), best);
        }
    }
}

/// Verify over all partitions of d that the all-2s partition (with one 1 for odd d)
/// maximises ∏ G(a_i, 1), and that no ∏ G(a_i, b_i) with Σ a_i b_i = d exceeds the cap.
pub fn partition_max_check(d: u64) -> Result<PartitionCheck> {
    if !(1..=14).contains(&d) {
        return Err(Error::OutOfRange { what: "d must lie in 1..=14", value: d as i64 });
    }
    let mut max_unweighted = Integer::new();
    let mut max_weighted = Integer::new();
    partitions(d, d, &mut Vec::new(), &mut |parts| {
        let p: Integer = parts.iter().map(|&a| g(a, 1)).product();
        if p > max_unweighted {
            max_unweighted = p;
        }
        weighted_products(parts, Integer::from(1), &mut max_weighted);
    });
    let twos: Integer = std::iter::repeat_n(2u64, (d / 2) as usize)
        .chain((d % 2 == 1).then_some(1))
        .map(|a| g(a, 1))
        .product();
    let cap = genera_cap(d);
    let holds = twos == max_unweighted && max_weighted <= cap && twos == cap;
    Ok(PartitionCheck { d, max_unweighted, max_weighted, cap, holds })
}
