//! Field descriptors and real quadratic fields.

use std::fmt;
use std::sync::OnceLock;

use rug::float::Round;
use rug::{Float, Integer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A prime ideal above 2, recorded by its ramification index and inertial degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DyadicPrime {
    pub e: u32,
    pub f: u32,
}

impl DyadicPrime {
    pub fn new(e: u32, f: u32) -> Result<Self> {
        if e == 0 {
            return Err(Error::OutOfRange { what: "ramification index e must be >= 1", value: 0 });
        }
        if f == 0 {
            return Err(Error::OutOfRange { what: "inertial degree f must be >= 1", value: 0 });
        }
        Ok(DyadicPrime { e, f })
    }

    /// Absolute norm 2^f.
    pub fn norm(&self) -> Integer {
        Integer::from(1) << self.f
    }
}

/// The invariants of a totally real field that the formulas consume.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldDescriptor {
    pub degree: u32,
    pub discriminant: Integer,
    pub dyadic: Vec<DyadicPrime>,
}

pub fn make_descriptor(d: i64, disc: &Integer, dyadic: &[(i64, i64)]) -> Result<FieldDescriptor> {
    if d < 1 {
        return Err(Error::OutOfRange { what: "degree must be >= 1", value: d });
    }
    if *disc < 1 {
        return Err(Error::OutOfRange {
            what: "discriminant must be >= 1",
            value: disc.to_i64().unwrap_or(i64::MIN),
        });
    }
    let mut primes = Vec::with_capacity(dyadic.len());
    for &(e, f) in dyadic {
        let e = u32::try_from(e).map_err(|_| Error::OutOfRange { what: "e", value: e })?;
        let f = u32::try_from(f).map_err(|_| Error::OutOfRange { what: "f", value: f })?;
        primes.push(DyadicPrime::new(e, f)?);
    }
    let sum: u64 = primes.iter().map(|p| u64::from(p.e) * u64::from(p.f)).sum();
    if sum != d as u64 {
        return Err(Error::DyadicMismatch { sum, degree: d as u64 });
    }
    Ok(FieldDescriptor { degree: d as u32, discriminant: disc.clone(), dyadic: primes })
}

impl FieldDescriptor {
    pub fn rationals() -> &'static FieldDescriptor {
        static Q: OnceLock<FieldDescriptor> = OnceLock::new();
        Q.get_or_init(|| FieldDescriptor {
            degree: 1,
            discriminant: Integer::from(1),
            dyadic: vec![DyadicPrime { e: 1, f: 1 }],
        })
    }

    /// True when the discriminant sits below the Odlyzko floor 60.1^d e^{-254}.
    /// Such a descriptor cannot belong to an actual field.
    pub fn below_odlyzko_floor(&self) -> bool {
        if self.degree < 2 {
            return false;
        }
        let prec = 64;
        let mut floor = Float::with_val(prec, 601) / 10u32;
        floor.ln_round(Round::Up);
        floor *= self.degree;
        floor -= 254u32;
        let mut log_disc = Float::with_val_round(prec, &self.discriminant, Round::Up).0;
        log_disc.ln_round(Round::Up);
        // ceil of a floor below 1 is 1, which every discriminant meets
        floor > 0 && log_disc < floor
    }

    pub fn is_rationals(&self) -> bool {
        self.degree == 1
    }

    pub fn to_json(&self) -> DescriptorJson {
        DescriptorJson {
            d: self.degree as i64,
            disc: self.discriminant.to_string(),
            dyadic: self.dyadic.iter().map(|p| [p.e as i64, p.f as i64]).collect(),
            psi: None,
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={} disc={} dyadic=[", self.degree, self.discriminant)?;
        for (i, p) in self.dyadic.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({},{})", p.e, p.f)?;
        }
        write!(f, "]")
    }
}

/// Serialized descriptor `{"d":int,"disc":"<decimal>","dyadic":[[e,f],...]}` with optional
/// per-prime ψ values for fields of degree at least 3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescriptorJson {
    pub d: i64,
    pub disc: String,
    pub dyadic: Vec<[i64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<Vec<i8>>,
}

impl DescriptorJson {
    pub fn to_field(&self) -> Result<Field> {
        let disc: Integer = self
            .disc
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad discriminant {:?}", self.disc)))?;
        let pairs: Vec<(i64, i64)> = self.dyadic.iter().map(|p| (p[0], p[1])).collect();
        let descriptor = make_descriptor(self.d, &disc, &pairs)?;
        if let Some(psi) = &self.psi {
            if psi.len() != descriptor.dyadic.len() {
                return Err(Error::Parse(format!(
                    "{} psi values for {} dyadic primes",
                    psi.len(),
                    descriptor.dyadic.len()
                )));
            }
            if psi.iter().any(|v| !(-1..=1).contains(v)) {
                return Err(Error::Parse("psi values must be -1, 0 or 1".into()));
            }
        }
        Field::from_descriptor(descriptor, self.psi.clone())
    }
}

/// How 2 decomposes in a real quadratic field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DyadicClass {
    Split,
    Inert,
    Ramified,
}

impl fmt::Display for DyadicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DyadicClass::Split => "split",
            DyadicClass::Inert => "inert",
            DyadicClass::Ramified => "ramified",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RealQuadraticField {
    d: u64,
    descriptor: FieldDescriptor,
    kronecker_conductor: i64,
}

impl RealQuadraticField {
    /// The squarefree radicand D with K = ℚ(√D).
    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.descriptor
    }

    /// Fundamental discriminant of K, which is also the conductor of its character.
    pub fn kronecker_conductor(&self) -> i64 {
        self.kronecker_conductor
    }

    pub fn dyadic_class(&self) -> DyadicClass {
        match self.d % 8 {
            1 => DyadicClass::Split,
            5 => DyadicClass::Inert,
            _ => DyadicClass::Ramified,
        }
    }

    /// Fundamental discriminant of the imaginary field ℚ(√-D).
    pub fn imaginary_twist_conductor(&self) -> i64 {
        let d = self.d as i64;
        if d % 4 == 3 {
            -d
        } else {
            -4 * d
        }
    }
}

pub fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return false;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    true
}

pub fn make_quadratic(d: i64) -> Result<RealQuadraticField> {
    if d < 2 {
        return Err(Error::OutOfRange { what: "D must be >= 2", value: d });
    }
    let du = d as u64;
    if !is_squarefree(du) {
        return Err(Error::NotSquarefree(d));
    }
    let (disc, dyadic) = match du % 8 {
        1 => (du, vec![(1, 1), (1, 1)]),
        5 => (du, vec![(1, 2)]),
        _ => (4 * du, vec![(2, 1)]),
    };
    let descriptor = make_descriptor(2, &Integer::from(disc), &dyadic)?;
    Ok(RealQuadraticField { d: du, descriptor, kronecker_conductor: disc as i64 })
}

/// A totally real field as seen by the mass formulas.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Quadratic(RealQuadraticField),
    /// Degree at least 3, data supplied by the caller.
    Descriptor { descriptor: FieldDescriptor, psi: Option<Vec<i8>> },
}

impl Field {
    pub fn quadratic(d: i64) -> Result<Field> {
        make_quadratic(d).map(Field::Quadratic)
    }

    /// Wrap a descriptor, recognizing ℚ and rejecting degree 2 (use `quadratic`).
    pub fn from_descriptor(descriptor: FieldDescriptor, psi: Option<Vec<i8>>) -> Result<Field> {
        match descriptor.degree {
            1 => {
                if descriptor.discriminant != 1 {
                    return Err(Error::UnsupportedField("degree 1 requires discriminant 1".into()));
                }
                Ok(Field::Rationals)
            }
            2 => {
                let disc = descriptor
                    .discriminant
                    .to_i64()
                    .ok_or_else(|| Error::UnsupportedField("quadratic discriminant too large".into()))?;
                let d = if disc % 4 == 0 { disc / 4 } else { disc };
                let k = make_quadratic(d)
                    .map_err(|_| Error::UnsupportedField(format!("{disc} is not a real quadratic discriminant")))?;
                if k.descriptor != descriptor {
                    return Err(Error::UnsupportedField(format!(
                        "descriptor {descriptor} does not match ℚ(√{d})"
                    )));
                }
                Ok(Field::Quadratic(k))
            }
            _ => Ok(Field::Descriptor { descriptor, psi }),
        }
    }

    /// Parse `Q`, `quad:<D>` (or a bare integer D).
    pub fn parse_spec(s: &str) -> Result<Field> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") || s == "ℚ" {
            return Ok(Field::Rationals);
        }
        let body = s.strip_prefix("quad:").unwrap_or(s);
        let d: i64 = body.parse().map_err(|_| Error::Parse(format!("unrecognized field {s:?}")))?;
        Field::quadratic(d)
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        match self {
            Field::Rationals => FieldDescriptor::rationals(),
            Field::Quadratic(k) => k.descriptor(),
            Field::Descriptor { descriptor, .. } => descriptor,
        }
    }

    pub fn degree(&self) -> u32 {
        self.descriptor().degree
    }

    pub fn label(&self) -> String {
        match self {
            Field::Rationals => "Q".into(),
            Field::Quadratic(k) => format!("quad:{}", k.radicand()),
            Field::Descriptor { descriptor, .. } => format!("{descriptor}"),
        }
    }
}

const SEGMENT: u64 = 1 << 16;

/// Ascending iterator over the squarefree integers of `[lo, hi]`, by a segmented sieve.
pub struct SquarefreeRange {
    next_segment: u64,
    hi: u64,
    primes: Vec<u64>,
    buffer: Vec<u64>,
    pos: usize,
}

pub fn squarefree_range(lo: u64, hi: u64) -> SquarefreeRange {
    let lo = lo.max(1);
    let root = isqrt(hi);
    SquarefreeRange { next_segment: lo, hi, primes: small_primes(root), buffer: Vec::new(), pos: 0 }
}

impl SquarefreeRange {
    fn fill(&mut self) -> bool {
        self.buffer.clear();
        self.pos = 0;
        while self.buffer.is_empty() {
            if self.next_segment > self.hi {
                return false;
            }
            let a = self.next_segment;
            let b = (a + SEGMENT - 1).min(self.hi);
            let mut keep = vec![true; (b - a + 1) as usize];
            for &p in &self.primes {
                let q = p * p;
                if q > b {
                    break;
                }
                let mut m = a.div_ceil(q) * q;
                while m <= b {
                    keep[(m - a) as usize] = false;
                    m += q;
                }
            }
            self.buffer.extend(keep.iter().enumerate().filter(|(_, &k)| k).map(|(i, _)| a + i as u64));
            self.next_segment = b + 1;
        }
        true
    }
}

impl Iterator for SquarefreeRange {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.pos >= self.buffer.len() && !self.fill() {
            return None;
        }
        let v = self.buffer[self.pos];
        self.pos += 1;
        Some(v)
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn small_primes(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut is = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if is[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                is[j] = false;
                j += i;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_examples() {
        let k = make_quadratic(5).unwrap();
        assert_eq!(k.descriptor().discriminant, 5);
        assert_eq!(k.descriptor().dyadic, vec![DyadicPrime { e: 1, f: 2 }]);
        let k = make_quadratic(919).unwrap();
        assert_eq!(k.descriptor().discriminant, 3676);
        assert_eq!(k.descriptor().dyadic, vec![DyadicPrime { e: 2, f: 1 }]);
        assert_eq!(k.dyadic_class(), DyadicClass::Ramified);
        assert_eq!(make_quadratic(12), Err(Error::NotSquarefree(12)));
        assert!(matches!(make_quadratic(1), Err(Error::OutOfRange { .. })));
        assert_eq!(make_quadratic(17).unwrap().dyadic_class(), DyadicClass::Split);
    }

    #[test]
    fn descriptor_examples() {
        let q = make_descriptor(1, &Integer::from(1), &[(1, 1)]).unwrap();
        assert_eq!(&q, FieldDescriptor::rationals());
        let k = make_descriptor(2, &Integer::from(3676), &[(2, 1)]).unwrap();
        assert_eq!(&k, make_quadratic(919).unwrap().descriptor());
        assert_eq!(
            make_descriptor(2, &Integer::from(5), &[(1, 1)]),
            Err(Error::DyadicMismatch { sum: 1, degree: 2 })
        );
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_range(2, 10).collect::<Vec<_>>(), vec![2, 3, 5, 6, 7, 10]);
        assert_eq!(
            squarefree_range(919, 930).collect::<Vec<_>>(),
            vec![919, 921, 922, 923, 926, 929, 930]
        );
        assert_eq!(squarefree_range(4, 4).count(), 0);
    }

    #[test]
    fn sieve_crosses_segments() {
        let lo = SEGMENT - 50;
        let hi = 3 * SEGMENT + 17;
        let got: Vec<u64> = squarefree_range(lo, hi).collect();
        let want: Vec<u64> = (lo..=hi).filter(|&n| is_squarefree(n)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn descriptor_json_round_trip() {
        let k = make_quadratic(921).unwrap();
        let js = serde_json::to_string(&k.descriptor().to_json()).unwrap();
        assert_eq!(js, r#"{"d":2,"disc":"921","dyadic":[[1,1],[1,1]]}"#);
        let back: DescriptorJson = serde_json::from_str(&js).unwrap();
        assert_eq!(back.to_field().unwrap(), Field::Quadratic(k));
        let cubic: DescriptorJson = serde_json::from_str(r#"{"d":3,"disc":"49","dyadic":[[1,3]]}"#).unwrap();
        assert!(matches!(cubic.to_field().unwrap(), Field::Descriptor { .. }));
    }

    #[test]
    fn odlyzko_flag() {
        let tiny = make_descriptor(80, &Integer::from(2), &[(1, 80)]).unwrap();
        assert!(tiny.below_odlyzko_floor());
        assert!(!make_quadratic(5).unwrap().descriptor().below_odlyzko_floor());
    }

    #[test]
    fn parse_specs() {
        assert_eq!(Field::parse_spec("Q").unwrap(), Field::Rationals);
        assert_eq!(Field::parse_spec("quad:5").unwrap().descriptor().discriminant, 5);
        assert!(Field::parse_spec("quad:8").is_err());
    }
}
