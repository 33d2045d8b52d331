use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::{Constant, Round, Special};
use rug::ops::{AssignRound, Pow};
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_PREC: u32 = 16;

fn rd<T>(prec: u32, v: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, v, Round::Down).0
}

fn ru<T>(prec: u32, v: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, v, Round::Up).0
}

/// A closed interval `[lo, hi]` with outward-rounded endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct RealEnclosure {
    lo: Float,
    hi: Float,
}

impl RealEnclosure {
    pub fn new(lo: Float, hi: Float) -> Self {
        assert!(!(lo > hi), "enclosure endpoints out of order");
        RealEnclosure { lo, hi }
    }

    pub fn whole(prec: u32) -> Self {
        RealEnclosure {
            lo: Float::with_val(prec, Special::NegInfinity),
            hi: Float::with_val(prec, Special::Infinity),
        }
    }

    pub fn point(x: &Float) -> Self {
        RealEnclosure { lo: x.clone(), hi: x.clone() }
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        RealEnclosure { lo: rd(prec, n), hi: ru(prec, n) }
    }

    pub fn from_integer(n: &Integer, prec: u32) -> Self {
        RealEnclosure { lo: rd(prec, n), hi: ru(prec, n) }
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        RealEnclosure { lo: rd(prec, q), hi: ru(prec, q) }
    }

    /// Parse a decimal or fraction literal such as `"60.1"` or `"601/10"` exactly.
    pub fn from_decimal(s: &str, prec: u32) -> Result<Self> {
        parse_exact(s).map(|q| Self::from_rational(&q, prec))
    }

    pub fn pi(prec: u32) -> Self {
        RealEnclosure { lo: rd(prec, Constant::Pi), hi: ru(prec, Constant::Pi) }
    }

    pub fn ln2(prec: u32) -> Self {
        RealEnclosure { lo: rd(prec, Constant::Log2), hi: ru(prec, Constant::Log2) }
    }

    /// Euler's number e.
    pub fn e(prec: u32) -> Self {
        Self::from_int(1, prec).exp()
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Re-round outward to `prec` bits.
    pub fn round_to(&self, prec: u32) -> Self {
        RealEnclosure { lo: rd(prec, &self.lo), hi: ru(prec, &self.hi) }
    }

    pub fn width(&self) -> Float {
        ru(self.prec(), &self.hi - &self.lo)
    }

    /// Width divided by the magnitude of the smaller endpoint (infinite if that is zero).
    pub fn rel_width(&self) -> Float {
        let p = self.prec();
        let w = self.width();
        let m = Float::with_val(p, self.lo.abs_ref()).min(&Float::with_val(p, self.hi.abs_ref()));
        if self.contains_zero() || m.is_zero() {
            return Float::with_val(p, Special::Infinity);
        }
        ru(p, &w / &m)
    }

    pub fn mid(&self) -> Float {
        let p = self.prec() + 1;
        Float::with_val(p, &self.lo + &self.hi) / 2u32
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    pub fn contains(&self, x: &Float) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        self.lo <= *q && self.hi >= *q
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        self.lo <= x && self.hi >= x
    }

    /// True when `other` lies inside `self`.
    pub fn contains_enclosure(&self, other: &RealEnclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &RealEnclosure) -> bool {
        !(self.hi < other.lo || other.hi < self.lo)
    }

    pub fn intersect(&self, other: &RealEnclosure) -> Option<RealEnclosure> {
        if !self.intersects(other) {
            return None;
        }
        let lo = if self.lo > other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi < other.hi { self.hi.clone() } else { other.hi.clone() };
        Some(RealEnclosure { lo, hi })
    }

    pub fn hull(&self, other: &RealEnclosure) -> RealEnclosure {
        let lo = if self.lo < other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi > other.hi { self.hi.clone() } else { other.hi.clone() };
        RealEnclosure { lo, hi }
    }

    /// Every point of `self` is strictly below every point of `other`.
    pub fn certainly_lt(&self, other: &RealEnclosure) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_le(&self, other: &RealEnclosure) -> bool {
        self.hi <= other.lo
    }

    pub fn certainly_gt(&self, other: &RealEnclosure) -> bool {
        other.certainly_lt(self)
    }

    pub fn certainly_positive(&self) -> bool {
        self.lo > 0
    }

    /// Widen by `radius` in both directions.
    pub fn widen(&self, radius: &Float) -> RealEnclosure {
        let p = self.prec();
        RealEnclosure { lo: rd(p, &self.lo - radius), hi: ru(p, &self.hi + radius) }
    }

    pub fn min(&self, other: &RealEnclosure) -> RealEnclosure {
        let lo = if self.lo < other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi < other.hi { self.hi.clone() } else { other.hi.clone() };
        RealEnclosure { lo, hi }
    }

    pub fn max(&self, other: &RealEnclosure) -> RealEnclosure {
        let lo = if self.lo > other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi > other.hi { self.hi.clone() } else { other.hi.clone() };
        RealEnclosure { lo, hi }
    }

    pub fn abs(&self) -> RealEnclosure {
        if self.lo >= 0 {
            self.clone()
        } else if self.hi <= 0 {
            -self
        } else {
            let p = self.prec();
            let m = Float::with_val(p, self.lo.abs_ref()).max(&self.hi);
            RealEnclosure { lo: Float::new(p), hi: m }
        }
    }

    pub fn recip(&self) -> RealEnclosure {
        Self::from_int(1, self.prec()) / self
    }

    pub fn square(&self) -> RealEnclosure {
        self.powi(2)
    }

    pub fn powi(&self, n: i32) -> RealEnclosure {
        let p = self.prec();
        if n == 0 {
            return Self::from_int(1, p);
        }
        if n < 0 {
            return self.powi(-n).recip();
        }
        if n % 2 == 1 || self.lo >= 0 {
            return RealEnclosure { lo: rd(p, (&self.lo).pow(n)), hi: ru(p, (&self.hi).pow(n)) };
        }
        if self.hi <= 0 {
            return RealEnclosure { lo: rd(p, (&self.hi).pow(n)), hi: ru(p, (&self.lo).pow(n)) };
        }
        let a = ru(p, (&self.lo).pow(n));
        let b = ru(p, (&self.hi).pow(n));
        RealEnclosure { lo: Float::new(p), hi: a.max(&b) }
    }

    /// Power with an integer exponent of arbitrary size, for positive enclosures.
    pub fn pow_integer(&self, n: &Integer) -> RealEnclosure {
        if let Some(k) = n.to_i32() {
            return self.powi(k);
        }
        let p = self.prec();
        self.pow(&Self::from_integer(n, p)).expect("integer power of a nonpositive enclosure")
    }

    pub fn exp(&self) -> RealEnclosure {
        let p = self.prec();
        RealEnclosure { lo: rd(p, self.lo.exp_ref()), hi: ru(p, self.hi.exp_ref()) }
    }

    pub fn ln(&self) -> Result<RealEnclosure> {
        if !(self.lo > 0) {
            return Err(Error::DomainError("logarithm of a nonpositive enclosure".into()));
        }
        let p = self.prec();
        Ok(RealEnclosure { lo: rd(p, self.lo.ln_ref()), hi: ru(p, self.hi.ln_ref()) })
    }

    pub fn sqrt(&self) -> Result<RealEnclosure> {
        if self.hi < 0 {
            return Err(Error::DomainError("square root of a negative enclosure".into()));
        }
        let p = self.prec();
        let lo = if self.lo < 0 { Float::new(p) } else { rd(p, self.lo.sqrt_ref()) };
        Ok(RealEnclosure { lo, hi: ru(p, self.hi.sqrt_ref()) })
    }

    /// Positive real k-th root.
    pub fn root(&self, k: u32) -> Result<RealEnclosure> {
        if !(self.lo >= 0) {
            return Err(Error::DomainError("root of a negative enclosure".into()));
        }
        let p = self.prec();
        Ok(RealEnclosure { lo: rd(p, self.lo.root_ref(k)), hi: ru(p, self.hi.root_ref(k)) })
    }

    /// `self^exponent = exp(exponent * ln self)` for positive `self`.
    pub fn pow(&self, exponent: &RealEnclosure) -> Result<RealEnclosure> {
        Ok((exponent * &self.ln()?).exp())
    }

    pub fn pow_rational(&self, q: &Rational) -> Result<RealEnclosure> {
        if q.denom() == &1u32 {
            if let Some(k) = q.numer().to_i32() {
                return Ok(self.powi(k));
            }
        }
        self.pow(&Self::from_rational(q, self.prec()))
    }

    pub fn mul_int(&self, n: i64) -> RealEnclosure {
        self * &Self::from_int(n, self.prec())
    }

    pub fn div_int(&self, n: i64) -> RealEnclosure {
        self / &Self::from_int(n, self.prec())
    }

    pub fn add_rational(&self, q: &Rational) -> RealEnclosure {
        self + &Self::from_rational(q, self.prec())
    }

    pub fn mul_rational(&self, q: &Rational) -> RealEnclosure {
        self * &Self::from_rational(q, self.prec())
    }

    /// Largest integer not exceeding the upper endpoint.
    pub fn floor_hi(&self) -> Option<Integer> {
        if !self.hi.is_finite() {
            return None;
        }
        self.hi.to_integer_round(Round::Down).map(|(i, _)| i)
    }

    pub fn to_json(&self) -> EnclosureJson {
        EnclosureJson {
            lo: decimal(&self.lo, Round::Down),
            hi: decimal(&self.hi, Round::Up),
            bits: self.prec(),
        }
    }
}

/// Decimal digits that faithfully represent a `prec`-bit float.
fn digits_for(prec: u32) -> usize {
    (f64::from(prec) * std::f64::consts::LOG10_2).ceil() as usize + 2
}

fn decimal(x: &Float, round: Round) -> String {
    if x.is_zero() {
        return "0".into();
    }
    if x.is_infinite() {
        return if x.is_sign_negative() { "-inf".into() } else { "inf".into() };
    }
    x.to_string_radix_round(10, Some(digits_for(x.prec())), round)
}

/// Parse an exact decimal (`"-12.5e3"`) or fraction (`"7/3"`) as a rational.
pub fn parse_exact(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not an exact number: {s:?}"));
    if t.contains('/') {
        return t.parse::<Rational>().map_err(|_| bad());
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    if !all.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let numer: Integer = all.parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = Integer::from(10);
    let mut q = Rational::from(numer);
    if scale >= 0 {
        q *= Rational::from(ten.pow(scale as u32));
    } else {
        q /= Rational::from(ten.pow((-scale) as u32));
    }
    if neg {
        q = -q;
    }
    Ok(q)
}

impl fmt::Display for RealEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(12);
        write!(
            f,
            "[{}, {}]",
            self.lo.to_string_radix_round(10, Some(digits), Round::Down),
            self.hi.to_string_radix_round(10, Some(digits), Round::Up)
        )
    }
}

/// Serialized form `{"lo":"<dec>","hi":"<dec>","bits":p}`, endpoints rounded outward.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnclosureJson {
    pub lo: String,
    pub hi: String,
    pub bits: u32,
}

impl Neg for &RealEnclosure {
    type Output = RealEnclosure;
    fn neg(self) -> RealEnclosure {
        RealEnclosure { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }
}

impl Neg for RealEnclosure {
    type Output = RealEnclosure;
    fn neg(self) -> RealEnclosure {
        -&self
    }
}

impl Add for &RealEnclosure {
    type Output = RealEnclosure;
    fn add(self, o: &RealEnclosure) -> RealEnclosure {
        let p = self.prec().max(o.prec());
        RealEnclosure { lo: rd(p, &self.lo + &o.lo), hi: ru(p, &self.hi + &o.hi) }
    }
}

impl Sub for &RealEnclosure {
    type Output = RealEnclosure;
    fn sub(self, o: &RealEnclosure) -> RealEnclosure {
        let p = self.prec().max(o.prec());
        RealEnclosure { lo: rd(p, &self.lo - &o.hi), hi: ru(p, &self.hi - &o.lo) }
    }
}

impl Mul for &RealEnclosure {
    type Output = RealEnclosure;
    fn mul(self, o: &RealEnclosure) -> RealEnclosure {
        let p = self.prec().max(o.prec());
        if self.lo >= 0 && o.lo >= 0 {
            return RealEnclosure { lo: rd(p, &self.lo * &o.lo), hi: ru(p, &self.hi * &o.hi) };
        }
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            if (a.is_zero() && b.is_infinite()) || (a.is_infinite() && b.is_zero()) {
                continue;
            }
            let l = rd(p, a * b);
            let h = ru(p, a * b);
            lo = Some(match lo {
                Some(x) if x < l => x,
                _ => l,
            });
            hi = Some(match hi {
                Some(x) if x > h => x,
                _ => h,
            });
        }
        match (lo, hi) {
            (Some(lo), Some(hi)) => RealEnclosure { lo, hi },
            _ => RealEnclosure::whole(p),
        }
    }
}

impl Div for &RealEnclosure {
    type Output = RealEnclosure;
    fn div(self, o: &RealEnclosure) -> RealEnclosure {
        let p = self.prec().max(o.prec());
        if o.contains_zero() {
            return RealEnclosure::whole(p);
        }
        if self.lo >= 0 && o.lo > 0 {
            return RealEnclosure { lo: rd(p, &self.lo / &o.hi), hi: ru(p, &self.hi / &o.lo) };
        }
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let mut lo = Float::with_val(p, Special::Infinity);
        let mut hi = Float::with_val(p, Special::NegInfinity);
        for (a, b) in pairs {
            let l = rd(p, a / b);
            let h = ru(p, a / b);
            if l < lo {
                lo = l;
            }
            if h > hi {
                hi = h;
            }
        }
        RealEnclosure { lo, hi }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RealEnclosure {
            type Output = RealEnclosure;
            fn $m(self, o: RealEnclosure) -> RealEnclosure { (&self).$m(&o) }
        }
        impl $tr<&RealEnclosure> for RealEnclosure {
            type Output = RealEnclosure;
            fn $m(self, o: &RealEnclosure) -> RealEnclosure { (&self).$m(o) }
        }
        impl $tr<RealEnclosure> for &RealEnclosure {
            type Output = RealEnclosure;
            fn $m(self, o: RealEnclosure) -> RealEnclosure { self.$m(&o) }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul, Div div);

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn rational_inputs_are_enclosed() {
        let a = q("1/3");
        let b = q("-7/11");
        let ea = RealEnclosure::from_rational(&a, 40);
        let eb = RealEnclosure::from_rational(&b, 40);
        assert!((&ea + &eb).contains_rational(&(a.clone() + &b)));
        assert!((&ea - &eb).contains_rational(&(a.clone() - &b)));
        assert!((&ea * &eb).contains_rational(&(a.clone() * &b)));
        assert!((&ea / &eb).contains_rational(&(a.clone() / &b)));
        assert!(eb.square().contains_rational(&(b.clone() * &b)));
        assert!(eb.powi(3).contains_rational(&(b.clone() * &b * &b)));
        assert!(eb.powi(-2).contains_rational(&(Rational::from(1) / (b.clone() * &b))));
    }

    #[test]
    fn division_by_interval_with_zero_is_unbounded() {
        let x = RealEnclosure::from_int(1, 32);
        let z = RealEnclosure::new(Float::with_val(32, -1), Float::with_val(32, 1));
        assert!(!(&x / &z).is_finite());
    }

    #[test]
    fn transcendental_functions() {
        let two = RealEnclosure::from_int(2, 128);
        let l = two.ln().unwrap();
        assert!(l.contains_enclosure(&RealEnclosure::ln2(128)) || l.intersects(&RealEnclosure::ln2(128)));
        let s = two.sqrt().unwrap();
        assert!(s.square().contains_rational(&q("2")));
        let r = RealEnclosure::from_int(16, 64).root(4).unwrap();
        assert!(r.contains_rational(&q("2")));
        assert!(RealEnclosure::from_int(0, 64).exp().contains_rational(&q("1")));
        assert!(RealEnclosure::from_int(-1, 64).ln().is_err());
        let e = RealEnclosure::e(64);
        assert!(e.contains_f64(std::f64::consts::E) || e.width() < 1e-15);
    }

    #[test]
    fn straddling_square_is_nonnegative() {
        let x = RealEnclosure::new(Float::with_val(32, -2), Float::with_val(32, 1));
        let s = x.square();
        assert_eq!(*s.lo(), 0);
        assert_eq!(*s.hi(), 4);
    }

    #[test]
    fn refinement_nests() {
        let a = RealEnclosure::pi(64);
        let b = RealEnclosure::pi(256);
        assert!(a.contains_enclosure(&b));
        assert!(b.width() < a.width());
    }

    #[test]
    fn json_endpoints_round_outward() {
        let t = RealEnclosure::from_rational(&q("1/3"), 64);
        let js = t.to_json();
        assert_eq!(js.bits, 64);
        let lo = parse_exact(&js.lo).unwrap();
        let hi = parse_exact(&js.hi).unwrap();
        assert!(lo < q("1/3") && q("1/3") < hi);
    }

    #[test]
    fn parse_exact_forms() {
        assert_eq!(parse_exact("60.1").unwrap(), q("601/10"));
        assert_eq!(parse_exact("-1.5e2").unwrap(), q("-150"));
        assert_eq!(parse_exact("2.5e-1").unwrap(), q("1/4"));
        assert_eq!(parse_exact("22/7").unwrap(), q("22/7"));
        assert!(parse_exact("1.2.3").is_err());
        assert!(parse_exact("").is_err());
    }

    #[test]
    fn min_max_semantics() {
        let a = RealEnclosure::from_rational(&q("1/2"), 32);
        let b = RealEnclosure::from_rational(&q("3/2"), 32);
        assert!(a.min(&b).contains_rational(&q("1/2")));
        assert!(a.max(&b).contains_rational(&q("3/2")));
        assert!(a.certainly_lt(&b));
        assert!(!b.certainly_lt(&a));
    }
}
