//! Euler transform of integer sequences and the bounds built on it.

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::arith::RealEnclosure;
use crate::error::{Error, Result};

/// A finite sequence a_1, …, a_N of nonnegative integers (stored 0-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntSequence {
    values: Vec<Integer>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceJson {
    pub values: Vec<String>,
}

impl IntSequence {
    pub fn new(values: Vec<Integer>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::OutOfRange { what: "sequence length must be >= 1", value: 0 });
        }
        if let Some(i) = values.iter().position(|v| *v < 0) {
            return Err(Error::OutOfRange { what: "sequence entries must be >= 0", value: i as i64 + 1 });
        }
        Ok(IntSequence { values })
    }

    pub fn from_u64(values: &[u64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Integer::from(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The 1-indexed entry a_k; zero past the end.
    pub fn get(&self, k: usize) -> Integer {
        if k == 0 {
            return Integer::new();
        }
        self.values.get(k - 1).cloned().unwrap_or_default()
    }

    pub fn values(&self) -> &[Integer] {
        &self.values
    }

    pub fn to_json(&self) -> SequenceJson {
        SequenceJson { values: self.values.iter().map(|v| v.to_string()).collect() }
    }

    pub fn from_json(js: &SequenceJson) -> Result<Self> {
        let vals = js
            .values
            .iter()
            .map(|s| s.trim().parse::<Integer>().map_err(|_| Error::Parse(format!("bad integer {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vals)
    }
}

/// b with 1 + Σ b_n Xⁿ = ∏ (1 - X^k)^{-a_k}, via c_n = Σ_{d|n} d a_d and
/// n b_n = c_n + Σ_{k<n} c_k b_{n-k}.
pub fn euler_transform(a: &IntSequence) -> IntSequence {
    let n = a.len();
    let mut c = vec![Integer::new(); n + 1];
    for d in 1..=n {
        let term = Integer::from(&a.values[d - 1] * d as u64);
        let mut m = d;
        while m <= n {
            c[m] += &term;
            m += d;
        }
    }
    let mut b = vec![Integer::new(); n + 1];
    for m in 1..=n {
        let mut s = c[m].clone();
        for k in 1..m {
            s += Integer::from(&c[k] * &b[m - k]);
        }
        b[m] = s / m as u64;
    }
    b.remove(0);
    IntSequence { values: b }
}

/// The unique a with `euler_transform(a) == b`, if it is a nonnegative integer sequence.
pub fn inverse_euler_transform(b: &IntSequence) -> Result<IntSequence> {
    let n = b.len();
    let bb = |k: usize| &b.values[k - 1];
    let mut c = vec![Integer::new(); n + 1];
    let mut a = vec![Integer::new(); n + 1];
    for m in 1..=n {
        let mut s = Integer::from(bb(m) * m as u64);
        for k in 1..m {
            s -= Integer::from(&c[k] * bb(m - k));
        }
        c[m] = s;
        let mut r = c[m].clone();
        for d in 1..m {
            if m % d == 0 {
                r -= Integer::from(&a[d] * d as u64);
            }
        }
        if !r.is_divisible_u(m as u32) || r < 0 {
            return Err(Error::NotRealizable { index: m });
        }
        a[m] = r / m as u64;
    }
    a.remove(0);
    Ok(IntSequence { values: a })
}

fn factorial(n: usize) -> Integer {
    Integer::from(Integer::factorial(n as u32))
}

/// (b_n / (n!)²)^{1/n}, a lower bound for max{a_1, …, a_n} when b is the Euler
/// transform of a.
pub fn max_term_lower_bound(b: &IntSequence, n: usize, prec: u32) -> Result<RealEnclosure> {
    if n == 0 || n > b.len() {
        return Err(Error::OutOfRange { what: "index must lie in 1..=len", value: n as i64 });
    }
    let f = factorial(n);
    let q = Rational::from((b.get(n), Integer::from(&f * &f)));
    RealEnclosure::from_rational(&q, prec + 16).root(n as u32).map(|e| e.round_to(prec))
}

/// A(n) = Σ_{r≤n} ⌊n/r⌋ r i_r and the relaxed B(n) = Σ_{r≤n+3} ⌊(n+3)/r⌋ r i_r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankBounds {
    pub a: Integer,
    pub b: Integer,
    /// Set when the sequence was shorter than n + 3 and was padded with zeros.
    pub padded: bool,
}

pub fn rank_bounds_ab(i: &IntSequence, n: usize) -> RankBounds {
    let sum = |m: usize| {
        let mut acc = Integer::new();
        for r in 1..=m {
            acc += i.get(r) * Integer::from((m / r) * r);
        }
        acc
    };
    RankBounds { a: sum(n), b: sum(n + 3), padded: i.len() < n + 3 }
}

/// i_1 + ⋯ + i_n: distinct indecomposables each give a distinct criterion element.
pub fn criterion_lower_bound(i: &IntSequence, n: usize) -> Result<Integer> {
    if n > i.len() {
        return Err(Error::OutOfRange { what: "n exceeds the sequence length", value: n as i64 });
    }
    Ok(i.values[..n].iter().sum())
}
