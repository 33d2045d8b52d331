//! Effective degree and discriminant bounds, and the class-number and lattice-count
//! estimates that feed them.

use rug::ops::Pow;
use rug::{Complete, Integer, Rational};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};

use crate::arith::zeta::zeta_enclosure;
use crate::arith::{ExactFactored, RealEnclosure};
use crate::error::{Error, Result};
use crate::fields::{Field, FieldDescriptor};
use crate::genera::genera_bound;
use crate::groupbounds::{collins_friedland_bound, schur_product};
use crate::mass::{f_n, korner_mass, mass_lower_in, mass_upper_unimodular, MassMode};
use crate::transforms::{rank_bounds_ab, IntSequence};

/// Longest list of per-degree discriminant bounds a report carries.
pub const MAX_DEGREES_LISTED: u64 = 10_000;

fn sixty_point_one() -> Rational {
    Rational::from((601, 10))
}

fn ln_factorial(n: u32, prec: u32) -> RealEnclosure {
    RealEnclosure::from_integer(&Integer::factorial(n).complete(), prec).ln().expect("n! >= 1")
}

fn check_rank(n: u32) -> Result<()> {
    if n < 3 {
        return Err(Error::DomainError(format!("n must be >= 3, got {n}")));
    }
    Ok(())
}

fn check_positive(c: &Rational) -> Result<()> {
    if *c <= 0 {
        return Err(Error::DomainError(format!("C must be positive, got {c}")));
    }
    Ok(())
}

/// 60.1^d · e^{-254}.
pub fn odlyzko_floor(d: u32, prec: u32) -> Result<RealEnclosure> {
    if d < 1 {
        return Err(Error::DomainError("degree must be >= 1".into()));
    }
    let wp = prec + 16;
    let base = RealEnclosure::from_rational(&sixty_point_one(), wp).powi(d as i32);
    Ok((&base * &RealEnclosure::from_int(-254, wp).exp()).round_to(prec))
}

/// F_n / (2^{(n+5)/2} (2ζ(n/2))^δ), δ = [n even]: the per-degree factor in the lower bound
/// m_K(I_n) ≥ Δ^{n(n-1)/4} B_n^d.
pub fn mass_base(n: u32, prec: u32) -> Result<RealEnclosure> {
    check_rank(n)?;
    let wp = prec + 16;
    let two = RealEnclosure::from_int(2, wp);
    let mut b = &f_n(n).to_enclosure(wp) / &two.pow_rational(&Rational::from((n + 5, 2)))?;
    if n.is_multiple_of(2) {
        b = &b / &zeta_enclosure(&Rational::from((n, 2)), wp)?.mul_int(2);
    }
    Ok(b.round_to(prec))
}

/// 𝓜_n = B_n · 60.1^{n(n-1)/4}.
pub fn m_n(n: u32, prec: u32) -> Result<RealEnclosure> {
    let wp = prec + 16;
    let q = Rational::from((n * (n - 1).max(1), 4));
    let lift = RealEnclosure::from_rational(&sixty_point_one(), wp).pow_rational(&q)?;
    Ok((&mass_base(n, wp)? * &lift).round_to(prec))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormulaId {
    Maindbound,
    Maindiscbound,
    Maindiscbound2,
    Dboundmass,
    Discboundmass,
    Discbound2,
}

impl FormulaId {
    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_value(Json::String(s.to_ascii_lowercase()))
            .map_err(|_| Error::Parse(format!("unknown formula {s:?}")))
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FormulaId::Maindbound => "maindbound",
            FormulaId::Maindiscbound => "maindiscbound",
            FormulaId::Maindiscbound2 => "maindiscbound2",
            FormulaId::Dboundmass => "dboundmass",
            FormulaId::Discboundmass => "discboundmass",
            FormulaId::Discbound2 => "discbound2",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EffectiveBoundReport {
    pub n: u32,
    pub c: Rational,
    pub degree_formula: Option<FormulaId>,
    pub disc_formula: FormulaId,
    /// The real-valued right-hand side of the degree inequality.
    pub degree_bound: Option<RealEnclosure>,
    /// The right-hand side exactly as printed in the literature, where it differs.
    pub degree_bound_printed: Option<RealEnclosure>,
    /// ⌊upper endpoint⌋ of `degree_bound`.
    pub max_degree: Option<Integer>,
    /// Set when `max_degree` < 1: no totally real field satisfies the hypothesis.
    pub no_field: bool,
    /// (d, upper bound on Δ_K for fields of degree d).
    pub disc_bounds: Vec<(u32, RealEnclosure)>,
    /// Set when the degree range was longer than `MAX_DEGREES_LISTED`.
    pub truncated: bool,
}

impl EffectiveBoundReport {
    pub fn to_json(&self) -> Json {
        json!({
            "schema": 1,
            "n": self.n,
            "C": self.c.to_string(),
            "degree_formula": self.degree_formula.map(FormulaId::as_str),
            "disc_formula": self.disc_formula.as_str(),
            "degree_bound": self.degree_bound.as_ref().map(RealEnclosure::to_json),
            "degree_bound_printed": self.degree_bound_printed.as_ref().map(RealEnclosure::to_json),
            "max_degree": self.max_degree.as_ref().map(|d| d.to_string()),
            "no_field": self.no_field,
            "disc_bounds": self.disc_bounds.iter().map(|(d, b)| json!({"d": d, "bound": b.to_json()})).collect::<Vec<_>>(),
            "truncated": self.truncated,
        })
    }
}

fn ln_rational(q: &Rational, prec: u32) -> Result<RealEnclosure> {
    RealEnclosure::from_rational(q, prec).ln()
}

/// Bounds on d and Δ_K for fields with m_K(I_n) < C:
/// d ≤ (log C + 127 n(n-1)/2) / log 𝓜_n and Δ ≤ (C / B_n^d)^{4/(n(n-1))}.
pub fn mass_bounds_to_field_bounds(c: &Rational, n: u32, prec: u32) -> Result<EffectiveBoundReport> {
    field_bounds(c, n, prec, FormulaId::Dboundmass, FormulaId::Discboundmass)
}

fn field_bounds(c: &Rational, n: u32, prec: u32, dform: FormulaId, discform: FormulaId) -> Result<EffectiveBoundReport> {
    check_rank(n)?;
    check_positive(c)?;
    let wp = prec + 32;
    let ln_m = m_n(n, wp)?.ln()?;
    if !ln_m.certainly_positive() {
        return Err(Error::DenominatorNonpositive);
    }
    let ln_c = ln_rational(c, wp)?;
    let nn = i64::from(n) * (i64::from(n) - 1);
    let num = &ln_c + &RealEnclosure::from_rational(&Rational::from((127 * nn, 2)), wp);
    let ratio = &num / &ln_m;
    let max_degree = ratio.floor_hi();
    let top = max_degree.as_ref().and_then(|d| d.to_u64()).unwrap_or(0);
    let listed = top.min(MAX_DEGREES_LISTED) as u32;
    let ln_b = mass_base(n, wp)?.ln()?;
    let expo = Rational::from((4, nn));
    let disc_bounds = (1..=listed)
        .map(|d| {
            let l = &ln_c - &ln_b.mul_int(i64::from(d));
            (d, l.mul_rational(&expo).exp().round_to(prec))
        })
        .collect();
    Ok(EffectiveBoundReport {
        n,
        c: c.clone(),
        degree_formula: Some(dform),
        disc_formula: discform,
        no_field: max_degree.as_ref().is_none_or(|d| *d < 1),
        degree_bound: Some(ratio.round_to(prec)),
        degree_bound_printed: None,
        max_degree,
        disc_bounds,
        truncated: top > MAX_DEGREES_LISTED,
    })
}

/// Bounds on d and Δ_K for fields with U_K(n) < C (or with an n-universal criterion
/// set of fewer than C elements). Both hypotheses give m_K(I_n) ≤ C^n (n!)²/2.
pub fn finite_bounds(n: u32, c: &Rational, prec: u32) -> Result<EffectiveBoundReport> {
    check_rank(n)?;
    check_positive(c)?;
    let fact = Integer::factorial(n).complete();
    let mass_cap = c.clone().pow(n as i32) * Rational::from(fact.square()) / 2u32;
    let mut r = field_bounds(&mass_cap, n, prec, FormulaId::Maindbound, FormulaId::Maindiscbound)?;
    r.c = c.clone();
    // (4n log C + 8 log n! + 254 n(n-1) - 4 log 2) / log 𝓜_n
    let wp = prec + 32;
    let nn = i64::from(n) * (i64::from(n) - 1);
    let num = &(&(&ln_rational(c, wp)?.mul_int(4 * i64::from(n)) + &ln_factorial(n, wp).mul_int(8))
        + &RealEnclosure::from_int(254 * nn, wp))
        - &RealEnclosure::ln2(wp).mul_int(4);
    r.degree_bound_printed = Some((&num / &m_n(n, wp)?.ln()?).round_to(prec));
    Ok(r)
}

/// Stark's lower and Louboutin's upper bound for Res_{s=1} ζ_K(s):
/// 0.0014480/(d·d!·Δ^{1/d}) and (e log Δ / (2(d-1)))^{d-1}.
pub fn stark_louboutin(d: u32, disc: &Integer, prec: u32) -> Result<(RealEnclosure, RealEnclosure)> {
    if d < 2 {
        return Err(Error::DomainError(format!("degree must be >= 2, got {d}")));
    }
    if *disc < 3 {
        return Err(Error::DomainError(format!("discriminant must be >= 3, got {disc}")));
    }
    let wp = prec + 16;
    let delta = RealEnclosure::from_integer(disc, wp);
    let den = &RealEnclosure::from_integer(&(Integer::factorial(d).complete() * d), wp) * &delta.root(d)?;
    let lower = &RealEnclosure::from_rational(&Rational::from((14480, 10_000_000)), wp) / &den;
    let upper = (&RealEnclosure::e(wp) * &delta.ln()?).div_int(2 * i64::from(d - 1)).powi(d as i32 - 1);
    Ok((lower.round_to(prec), upper.round_to(prec)))
}

fn log_power_factor(d: u32, ln_delta: &RealEnclosure, wp: u32) -> RealEnclosure {
    // ((d-1)/(e log Δ))^{d-1}
    let t = &RealEnclosure::from_int(i64::from(d) - 1, wp) / &(&RealEnclosure::e(wp) * ln_delta);
    t.powi(d as i32 - 1)
}

fn stark_tail(d: u32, delta: &RealEnclosure, wp: u32) -> Result<RealEnclosure> {
    // 0.000181 / (d (2d)! Δ^{1/d})
    let den = &RealEnclosure::from_integer(&(Integer::factorial(2 * d).complete() * d), wp) * &delta.root(d)?;
    Ok(&RealEnclosure::from_rational(&Rational::from((181, 1_000_000)), wp) / &den)
}

/// Lower bound for m_K(I_2):
/// Δ^{1/2} (1/(π 2^{5/2}))^d ((d-1)/(e log Δ))^{d-1} · 0.000181/(d (2d)! Δ^{1/d}).
pub fn mass2_lower(desc: &FieldDescriptor, prec: u32) -> Result<RealEnclosure> {
    let d = desc.degree;
    if d < 2 {
        return Err(Error::DomainError("the rank-2 mass bound needs degree >= 2".into()));
    }
    let wp = prec + 32;
    let delta = RealEnclosure::from_integer(&desc.discriminant, wp);
    // 2Γ(1/2)Γ(1)/(π^{3/2} 2^{7/2}) = 1/(π 2^{5/2})
    let local = (&RealEnclosure::pi(wp) * &RealEnclosure::from_int(2, wp).pow_rational(&Rational::from((5, 2)))?).recip();
    let v = &(&delta.sqrt()? * &local.powi(d as i32)) * &log_power_factor(d, &delta.ln()?, wp);
    Ok((&v * &stark_tail(d, &delta, wp)?).round_to(prec))
}

/// Discriminant bound for degree-d fields with m_K(I_2) < `mass_cap`:
/// max(exp((12(d-1))²), (mass_cap (π 2^{5/2})^d d (2d)! / (0.000181 ((d-1)/e)^{d-1}))^{12d/(5d-12)}).
pub fn disc_bound_from_mass2(mass_cap: &Rational, d: u32, prec: u32) -> Result<RealEnclosure> {
    if d < 3 {
        return Err(Error::DomainError(format!("the rank-2 discriminant bound needs d >= 3, got {d}")));
    }
    check_positive(mass_cap)?;
    let wp = prec + 32;
    let di = i64::from(d);
    let first = RealEnclosure::from_int((12 * (di - 1)).pow(2), wp).exp();
    let pi_part = (&RealEnclosure::pi(wp) * &RealEnclosure::from_int(2, wp).pow_rational(&Rational::from((5, 2)))?)
        .powi(d as i32);
    let num = &(&RealEnclosure::from_rational(mass_cap, wp) * &pi_part)
        * &RealEnclosure::from_integer(&(Integer::factorial(2 * d).complete() * d), wp);
    let den_base = &RealEnclosure::from_int(di - 1, wp) / &RealEnclosure::e(wp);
    let den = &RealEnclosure::from_rational(&Rational::from((181, 1_000_000)), wp) * &den_base.powi(d as i32 - 1);
    let second = (&num / &den).pow_rational(&Rational::from((12 * di, 5 * di - 12)))?;
    Ok(first.max(&second).round_to(prec))
}

/// The same bound under U_K(2) < C, where m_K(I_2) ≤ 2C².
pub fn disc_bound_n2(c: &Rational, d: u32, prec: u32) -> Result<RealEnclosure> {
    check_positive(c)?;
    disc_bound_from_mass2(&(c.clone().square() * 2u32), d, prec)
}

/// Report form of the two rank-2 discriminant bounds.
pub fn rank2_report(c: &Rational, d: u32, formula: FormulaId, prec: u32) -> Result<EffectiveBoundReport> {
    let bound = match formula {
        FormulaId::Maindiscbound2 => disc_bound_n2(c, d, prec)?,
        FormulaId::Discbound2 => disc_bound_from_mass2(c, d, prec)?,
        other => return Err(Error::DomainError(format!("{} is not a rank-2 formula", other.as_str()))),
    };
    Ok(EffectiveBoundReport {
        n: 2,
        c: c.clone(),
        degree_formula: None,
        disc_formula: formula,
        degree_bound: None,
        degree_bound_printed: None,
        max_degree: None,
        no_field: false,
        disc_bounds: vec![(d, bound)],
        truncated: false,
    })
}

/// f(3) = 4·8^{1/26}, f(4) = 9·2^{1/13}, f(n) = 2^{n-1} for n ≥ 5.
pub fn pfeuffer_f(n: u32, prec: u32) -> Result<RealEnclosure> {
    check_rank(n)?;
    let two = RealEnclosure::from_int(2, prec);
    Ok(match n {
        3 => two.pow_rational(&Rational::from((3, 26)))?.mul_int(4),
        4 => two.pow_rational(&Rational::from((1, 13)))?.mul_int(9),
        _ => two.powi(n as i32 - 1),
    })
}

/// Pfeuffer's lower bound for the mass of a rank-n lattice L with N(𝔡L) = `norm_dl` and
/// N(𝔰L) = `norm_sl`: (Γ(1/2)⋯Γ(n/2)/π^{n(n+1)/4})^d Δ^{n(n-1)/4} (N𝔡L/N𝔰L^n)^{1/26} / f(n)^d.
pub fn pfeuffer_general_lower(
    d: u32,
    disc: &Integer,
    n: u32,
    norm_dl: &Integer,
    norm_sl: &Integer,
    prec: u32,
) -> Result<RealEnclosure> {
    check_rank(n)?;
    if *norm_dl < 1 || *norm_sl < 1 {
        return Err(Error::DomainError("ideal norms must be positive".into()));
    }
    let wp = prec + 32;
    let d_i = i32::try_from(d).map_err(|_| Error::DomainError("degree too large".into()))?;
    let gamma_part = f_n(n).mul_rational(&Rational::from((1, 2))).to_enclosure(wp).powi(d_i);
    let nn = i64::from(n) * (i64::from(n) - 1);
    let disc_part = ExactFactored::quarter_power(disc, nn).to_enclosure(wp);
    let q = Rational::from((norm_dl.clone(), norm_sl.clone().pow(n)));
    let ideal_part = RealEnclosure::from_rational(&q, wp).pow_rational(&Rational::from((1, 26)))?;
    let f = pfeuffer_f(n, wp)?.powi(d_i);
    Ok((&(&(&gamma_part * &disc_part) * &ideal_part) / &f).round_to(prec))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapBranch {
    /// n even: the gap is at least (m_K(I_2)/2)^{1/2}.
    NEven,
    /// n ≡ 2 mod 6: the gap is at least (m_K(I_3)/18)^{1/3}.
    N2Mod6,
}

/// Lower bound for U_K(n+4) - U_K(n) on the given residue class of n.
pub fn shortgap_lower(field: &Field, which: GapBranch, prec: u32) -> Result<RealEnclosure> {
    let wp = prec + 16;
    match which {
        GapBranch::NEven => mass2_lower(field.descriptor(), wp)?.div_int(2).sqrt().map(|v| v.round_to(prec)),
        GapBranch::N2Mod6 => {
            let m = if field.degree() <= 2 {
                korner_mass(field, 3, MassMode::Exact, wp)?.total.to_enclosure(wp)
            } else {
                mass_lower_in(field, 3, wp)?
            };
            m.div_int(18).root(3).map(|v| v.round_to(prec))
        }
    }
}

/// max{i(K,1), …, i(K,n)} ≥ Δ^{(n-1)/4} (n!)^{-2/n} B_n^{d/n} for n ≥ 3, and the
/// rank-2 analogue (m-lower/2)^{1/2} built from the m_K(I_2) bound.
pub fn max_iul_lower(desc: &FieldDescriptor, n: u32, prec: u32) -> Result<RealEnclosure> {
    let wp = prec + 32;
    if n == 2 {
        return mass2_lower(desc, wp)?.div_int(2).sqrt().map(|v| v.round_to(prec));
    }
    check_rank(n)?;
    let d = i64::from(desc.degree);
    let ni = i64::from(n);
    let ln_delta = RealEnclosure::from_integer(&desc.discriminant, wp).ln()?;
    let l = &(&ln_delta.mul_rational(&Rational::from((ni - 1, 4))) - &ln_factorial(n, wp).mul_rational(&Rational::from((2, ni))))
        + &mass_base(n, wp)?.ln()?.mul_rational(&Rational::from((d, ni)));
    Ok(l.exp().round_to(prec))
}

/// Which automorphism bound entered the count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AutBoundUsed {
    CollinsFriedland,
    Schur,
}

/// A lower bound, exact where the field allows it.
#[derive(Clone, Debug, PartialEq)]
pub enum LowerValue {
    Exact(Rational),
    Enclosure(RealEnclosure),
}

impl LowerValue {
    pub fn to_enclosure(&self, prec: u32) -> RealEnclosure {
        match self {
            LowerValue::Exact(q) => RealEnclosure::from_rational(q, prec),
            LowerValue::Enclosure(e) => e.clone(),
        }
    }

    /// The smallest integer not below the value (using the lower endpoint).
    pub fn ceil(&self) -> Integer {
        match self {
            LowerValue::Exact(q) => q.clone().ceil().numer().clone(),
            LowerValue::Enclosure(e) => {
                let (i, _) = e.lo().to_integer_round(rug::float::Round::Up).expect("finite");
                i
            }
        }
    }

    fn to_json(&self) -> Json {
        match self {
            LowerValue::Exact(q) => json!({ "exact": q.to_string() }),
            LowerValue::Enclosure(e) => json!({ "enclosure": e.to_json() }),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UpperCount {
    pub value: RealEnclosure,
    pub genera: Integer,
    pub aut: AutBoundUsed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassReport {
    pub field: String,
    pub n: u32,
    /// cl_K(I_n) ≥ 2 m_K(I_n); also a lower bound for u(K, n).
    pub cl_lower: LowerValue,
    /// u(K, n) ≤ #genera · max m_K(L) · max |Aut L|.
    pub u_upper: UpperCount,
    /// U_K(n) ≤ (n+3)² u_upper(n+3), or B(n) when the indecomposable counts are given.
    pub big_u_upper: RealEnclosure,
    pub big_u_formula: &'static str,
}

impl ClassReport {
    pub fn to_json(&self) -> Json {
        json!({
            "schema": 1,
            "field": self.field,
            "n": self.n,
            "cl_lower": self.cl_lower.to_json(),
            "cl_lower_ceil": self.cl_lower.ceil().to_string(),
            "u_lower": self.cl_lower.to_json(),
            "u_upper": {
                "enclosure": self.u_upper.value.to_json(),
                "genera": self.u_upper.genera.to_string(),
                "aut_bound": self.u_upper.aut,
            },
            "U_upper": { "enclosure": self.big_u_upper.to_json(), "formula": self.big_u_formula },
        })
    }
}

/// Upper bound for the number of rank-n unimodular lattices over K.
pub fn u_upper(field: &Field, n: u32, prec: u32) -> Result<UpperCount> {
    let wp = prec + 32;
    let genera = genera_bound(field.descriptor()).product;
    let mass = mass_upper_unimodular(field, n, wp)?;
    let cf = collins_friedland_bound(field.degree(), n);
    // the Collins–Friedland bound is only established past rank 71
    let (aut, used) = match schur_product(field, u64::from(n)) {
        Ok(s) => {
            let s = RealEnclosure::from_integer(&s, wp);
            let c = cf.value.to_enclosure(wp);
            if cf.proven && c.certainly_lt(&s) {
                (c, AutBoundUsed::CollinsFriedland)
            } else {
                (s, AutBoundUsed::Schur)
            }
        }
        Err(Error::UnsupportedField(_)) if cf.proven => (cf.value.to_enclosure(wp), AutBoundUsed::CollinsFriedland),
        Err(e) => return Err(e),
    };
    let value = &(&RealEnclosure::from_integer(&genera, wp) * &mass) * &aut;
    Ok(UpperCount { value: value.round_to(prec), genera, aut: used })
}

/// Class-number and lattice-count bounds for rank n. `indecomposables`, if given, holds
/// i(K,1), …, i(K,n+3) and replaces the generic U_K(n) bound by the relaxed B(n).
pub fn class_and_u_report(field: &Field, n: u32, indecomposables: Option<&IntSequence>, prec: u32) -> Result<ClassReport> {
    check_rank(n)?;
    let wp = prec + 32;
    let cl_lower = if field.degree() <= 2 {
        let m = korner_mass(field, n, MassMode::Exact, wp)?;
        let q = m.total.exact().ok_or_else(|| Error::ParityInternal("exact mass expected".into()))?.clone();
        LowerValue::Exact(q * 2u32)
    } else {
        LowerValue::Enclosure(mass_lower_in(field, n, prec)?.mul_int(2))
    };
    let u = u_upper(field, n, prec)?;
    let (big_u_upper, big_u_formula) = match indecomposables {
        Some(i) => (RealEnclosure::from_integer(&rank_bounds_ab(i, n as usize).b, prec), "relaxed_b"),
        None => {
            let up = u_upper(field, n + 3, wp)?;
            let k = i64::from(n + 3);
            (up.value.mul_int(k * k).round_to(prec), "square_times_u_upper")
        }
    };
    Ok(ClassReport { field: field.label(), n, cl_lower, u_upper: u, big_u_upper, big_u_formula })
}

/// 𝓜_n for each n in the range.
pub fn table_mn(from: u32, to: u32, prec: u32) -> Result<Vec<(u32, RealEnclosure)>> {
    (from..=to).map(|n| Ok((n, m_n(n, prec)?))).collect()
}
