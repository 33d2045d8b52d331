use std::fmt;
use std::ops::Mul;

use rug::ops::Pow;
use rug::{Complete, Integer, Rational};

use super::enclosure::RealEnclosure;

/// An exact real of the form `coeff · π^(pi_half_exp/2) · base^(disc_quarter_exp/4)`.
///
/// Values are kept normalized: `0 <= disc_quarter_exp < 4`, the base is not a perfect
/// square when the exponent is nonzero, and `base == 1` iff the exponent is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactFactored {
    coeff: Rational,
    pi_half_exp: i64,
    base: Integer,
    disc_quarter_exp: i64,
}

impl ExactFactored {
    pub fn new(coeff: Rational, pi_half_exp: i64, base: Integer, disc_quarter_exp: i64) -> Self {
        assert!(base > 0, "radical base must be positive");
        let mut v = ExactFactored { coeff, pi_half_exp, base, disc_quarter_exp };
        v.normalize();
        v
    }

    pub fn rational(q: Rational) -> Self {
        ExactFactored { coeff: q, pi_half_exp: 0, base: Integer::from(1), disc_quarter_exp: 0 }
    }

    pub fn one() -> Self {
        Self::rational(Rational::from(1))
    }

    /// `π^(k/2)`.
    pub fn pi_half_power(k: i64) -> Self {
        ExactFactored { coeff: Rational::from(1), pi_half_exp: k, base: Integer::from(1), disc_quarter_exp: 0 }
    }

    /// `base^(m/4)`.
    pub fn quarter_power(base: &Integer, m: i64) -> Self {
        Self::new(Rational::from(1), 0, base.clone(), m)
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn pi_half_exp(&self) -> i64 {
        self.pi_half_exp
    }

    pub fn base(&self) -> &Integer {
        &self.base
    }

    pub fn disc_quarter_exp(&self) -> i64 {
        self.disc_quarter_exp
    }

    pub fn is_zero(&self) -> bool {
        self.coeff == 0
    }

    /// The value as a rational, if it is one.
    pub fn as_rational(&self) -> Option<&Rational> {
        (self.pi_half_exp == 0 && self.disc_quarter_exp == 0).then_some(&self.coeff)
    }

    fn normalize(&mut self) {
        if self.coeff == 0 {
            self.pi_half_exp = 0;
            self.base = Integer::from(1);
            self.disc_quarter_exp = 0;
            return;
        }
        loop {
            let q = self.disc_quarter_exp.div_euclid(4);
            let r = self.disc_quarter_exp.rem_euclid(4);
            if q != 0 {
                let p = (&self.base).pow(q.unsigned_abs() as u32).complete();
                if q > 0 {
                    self.coeff *= Rational::from(p);
                } else {
                    self.coeff /= Rational::from(p);
                }
            }
            self.disc_quarter_exp = r;
            if r == 0 || self.base == 1 {
                self.base = Integer::from(1);
                self.disc_quarter_exp = 0;
                return;
            }
            if self.base.is_perfect_square() {
                self.base = self.base.clone().sqrt();
                self.disc_quarter_exp *= 2;
                continue;
            }
            return;
        }
    }

    pub fn powi(&self, k: i64) -> Self {
        let mut coeff = Rational::from(1);
        let c = if k >= 0 { self.coeff.clone() } else { self.coeff.clone().recip() };
        for _ in 0..k.unsigned_abs() {
            coeff *= &c;
        }
        ExactFactored::new(coeff, self.pi_half_exp * k, self.base.clone(), self.disc_quarter_exp * k)
    }

    pub fn recip(&self) -> Self {
        self.powi(-1)
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        let mut v = self.clone();
        v.coeff *= q;
        v.normalize();
        v
    }

    /// Enclosure of the exact value at `prec` bits.
    pub fn to_enclosure(&self, prec: u32) -> RealEnclosure {
        let wp = prec + 16;
        let mut v = RealEnclosure::from_rational(&self.coeff, wp);
        if self.pi_half_exp != 0 {
            let sqrt_pi = RealEnclosure::pi(wp).sqrt().expect("pi is positive");
            v = v * sqrt_pi.powi(self.pi_half_exp as i32);
        }
        if self.disc_quarter_exp != 0 {
            let root = RealEnclosure::from_integer(&self.base, wp).root(4).expect("positive base");
            v = v * root.powi(self.disc_quarter_exp as i32);
        }
        v.round_to(prec)
    }
}

impl Mul for &ExactFactored {
    type Output = ExactFactored;

    fn mul(self, o: &ExactFactored) -> ExactFactored {
        let coeff = Rational::from(&self.coeff * &o.coeff);
        let pi = self.pi_half_exp + o.pi_half_exp;
        if self.base == o.base {
            return ExactFactored::new(coeff, pi, self.base.clone(), self.disc_quarter_exp + o.disc_quarter_exp);
        }
        if o.disc_quarter_exp == 0 {
            return ExactFactored::new(coeff, pi, self.base.clone(), self.disc_quarter_exp);
        }
        if self.disc_quarter_exp == 0 {
            return ExactFactored::new(coeff, pi, o.base.clone(), o.disc_quarter_exp);
        }
        // a^(r/4) b^(s/4) = (a^r b^s)^(1/4)
        let radicand = (&self.base).pow(self.disc_quarter_exp as u32).complete()
            * (&o.base).pow(o.disc_quarter_exp as u32).complete();
        ExactFactored::new(coeff, pi, radicand, 1)
    }
}

impl Mul for ExactFactored {
    type Output = ExactFactored;
    fn mul(self, o: ExactFactored) -> ExactFactored {
        &self * &o
    }
}

impl fmt::Display for ExactFactored {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coeff)?;
        if self.pi_half_exp != 0 {
            write!(f, " * pi^({}/2)", self.pi_half_exp)?;
        }
        if self.disc_quarter_exp != 0 {
            write!(f, " * {}^({}/4)", self.base, self.disc_quarter_exp)?;
        }
        Ok(())
    }
}
