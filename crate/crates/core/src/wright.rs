//! The degree-2 Wright condition
//! (log Δ - 2 log 2π - 2)/2 > 𝒜_K + Σ_{𝔭|2} ⌊e/2⌋ log N𝔭
//! and the scan over real quadratic fields.

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use rug::Integer;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};

use crate::arith::constants::{ln_two_pi, wright_threshold};
use crate::arith::RealEnclosure;
use crate::fields::{squarefree_range, DyadicClass, Field, RealQuadraticField};
use crate::groupbounds::{coeff_a_k, AutSource};

const START_BITS: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    /// Δ > 576π², where the condition holds for every field.
    HoldsByThreshold,
    Fails,
    Unresolved,
}

impl Verdict {
    pub fn holds(self) -> bool {
        matches!(self, Verdict::Holds | Verdict::HoldsByThreshold)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::HoldsByThreshold => "holds_by_threshold",
            Verdict::Fails => "fails",
            Verdict::Unresolved => "unresolved",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WrightVerdict {
    pub d: u64,
    pub disc: Integer,
    pub class: DyadicClass,
    pub lhs: RealEnclosure,
    pub rhs: RealEnclosure,
    pub verdict: Verdict,
    /// Precision at which the comparison was decided, or the ceiling if it was not.
    pub resolved_at_bits: u32,
    pub source: AutSource,
}

impl WrightVerdict {
    pub fn to_json(&self) -> Json {
        json!({
            "D": self.d.to_string(),
            "disc": self.disc.to_string(),
            "class": self.class.to_string(),
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "verdict": self.verdict.as_str(),
            "bits": self.resolved_at_bits,
            "a_k_source": self.source,
        })
    }

    fn csv_row(&self, out: &mut String) {
        let (l, r) = (self.lhs.to_json(), self.rhs.to_json());
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            self.d,
            self.disc,
            self.class,
            l.lo,
            l.hi,
            r.lo,
            r.hi,
            self.verdict.as_str(),
            self.resolved_at_bits
        );
    }
}

fn lhs(k: &RealQuadraticField, prec: u32) -> RealEnclosure {
    let wp = prec + 8;
    let ld = RealEnclosure::from_integer(&k.descriptor().discriminant, wp).ln().expect("Δ > 1");
    let v = &(&ld - &ln_two_pi(wp).mul_int(2)) - &RealEnclosure::from_int(2, wp);
    v.div_int(2).round_to(prec)
}

fn rhs(field: &Field, k: &RealQuadraticField, prec: u32, ceiling: u32) -> (RealEnclosure, AutSource) {
    let c = coeff_a_k(field, prec, ceiling.max(prec)).expect("real quadratic field");
    let mut v = c.a_k;
    // Σ ⌊e/2⌋ log N𝔭 is log 2 for a ramified dyadic prime and 0 otherwise
    if k.dyadic_class() == DyadicClass::Ramified {
        v = &v + &RealEnclosure::ln2(prec);
    }
    (v.round_to(prec), c.source)
}

fn verdict(k: &RealQuadraticField, prec_ceiling: u32, by_threshold: bool) -> WrightVerdict {
    let field = Field::Quadratic(k.clone());
    let base = WrightVerdict {
        d: k.radicand(),
        disc: k.descriptor().discriminant.clone(),
        class: k.dyadic_class(),
        lhs: RealEnclosure::from_int(0, START_BITS),
        rhs: RealEnclosure::from_int(0, START_BITS),
        verdict: Verdict::Unresolved,
        resolved_at_bits: prec_ceiling,
        source: AutSource::CollinsFriedland,
    };
    let mut p = START_BITS.min(prec_ceiling);
    loop {
        let l = lhs(k, p);
        let (r, source) = rhs(&field, k, p, p);
        let decided = if by_threshold {
            Some(Verdict::HoldsByThreshold)
        } else if r.certainly_lt(&l) {
            Some(Verdict::Holds)
        } else if l.certainly_lt(&r) {
            Some(Verdict::Fails)
        } else {
            None
        };
        if let Some(v) = decided {
            return WrightVerdict { lhs: l, rhs: r, verdict: v, resolved_at_bits: p, source, ..base };
        }
        if p >= prec_ceiling {
            return WrightVerdict { lhs: l, rhs: r, source, ..base };
        }
        p = (2 * p).min(prec_ceiling);
    }
}

/// Decide the strict inequality by interval comparison, refining up to `prec_ceiling`.
pub fn wright_condition(k: &RealQuadraticField, prec_ceiling: u32) -> WrightVerdict {
    verdict(k, prec_ceiling, false)
}

fn above_threshold(k: &RealQuadraticField) -> bool {
    let t = wright_threshold(START_BITS);
    RealEnclosure::from_integer(&k.descriptor().discriminant, START_BITS).certainly_gt(&t)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanReport {
    pub dmax: u64,
    pub prec_ceiling: u32,
    pub verdicts: Vec<WrightVerdict>,
}

impl ScanReport {
    pub fn failing(&self) -> Vec<u64> {
        self.with(|v| v == Verdict::Fails)
    }

    pub fn unresolved(&self) -> Vec<u64> {
        self.with(|v| v == Verdict::Unresolved)
    }

    fn with(&self, pred: impl Fn(Verdict) -> bool) -> Vec<u64> {
        self.verdicts.iter().filter(|v| pred(v.verdict)).map(|v| v.d).collect()
    }

    /// Holding D below the last failure, then the first holding D after it.
    pub fn holds_boundary(&self) -> Vec<u64> {
        let Some(last) = self.failing().last().copied() else {
            return self.verdicts.first().map(|v| vec![v.d]).unwrap_or_default();
        };
        let mut out: Vec<u64> = self.verdicts.iter().filter(|v| v.verdict.holds() && v.d < last).map(|v| v.d).collect();
        out.extend(self.verdicts.iter().find(|v| v.verdict.holds() && v.d > last).map(|v| v.d));
        out
    }

    /// D whose verdict breaks "holds stays holding" within its (dyadic class, 𝒜_K source).
    /// The ℚ(√p) class is skipped because its right-hand side depends on p.
    pub fn monotonicity_violations(&self) -> Vec<u64> {
        let mut seen: HashMap<(DyadicClass, AutSource), u64> = HashMap::new();
        let mut bad = Vec::new();
        for v in &self.verdicts {
            if v.source == AutSource::SchurSqrtp {
                continue;
            }
            let key = (v.class, v.source);
            if v.verdict == Verdict::Fails && seen.contains_key(&key) {
                bad.push(v.d);
            }
            if v.verdict.holds() {
                seen.entry(key).or_insert(v.d);
            }
        }
        bad
    }

    pub fn to_json(&self) -> Json {
        let strs = |v: Vec<u64>| v.into_iter().map(|d| d.to_string()).collect::<Vec<_>>();
        json!({
            "schema": 1,
            "dmax": self.dmax.to_string(),
            "prec_ceiling": self.prec_ceiling,
            "fail_count": self.failing().len().to_string(),
            "fails": strs(self.failing()),
            "unresolved": strs(self.unresolved()),
            "holds_boundary": strs(self.holds_boundary()),
            "verdicts": self.verdicts.iter().map(WrightVerdict::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("D,disc,class,lhs_lo,lhs_hi,rhs_lo,rhs_hi,verdict,bits\n");
        for v in &self.verdicts {
            v.csv_row(&mut out);
        }
        out
    }
}

/// Verdicts for every squarefree 2 ≤ D ≤ dmax, in order of D. Fields with Δ > 576π²
/// are recorded as holding without evaluating the comparison.
pub fn wright_scan(dmax: u64, prec_ceiling: u32) -> ScanReport {
    let ds: Vec<u64> = squarefree_range(2, dmax).collect();
    let verdicts = ds
        .par_iter()
        .map(|&d| {
            let k = crate::fields::make_quadratic(d as i64).expect("squarefree");
            let t = above_threshold(&k);
            verdict(&k, prec_ceiling, t)
        })
        .collect();
    ScanReport { dmax, prec_ceiling, verdicts }
}

/// Evaluate the comparison directly for up to `k` threshold-marked fields spread
/// evenly over the report, returning the D where direct evaluation does not hold.
pub fn audit_threshold(report: &ScanReport, k: usize) -> (usize, Vec<u64>) {
    let marked: Vec<u64> =
        report.verdicts.iter().filter(|v| v.verdict == Verdict::HoldsByThreshold).map(|v| v.d).collect();
    if marked.is_empty() || k == 0 {
        return (0, Vec::new());
    }
    let step = marked.len().div_ceil(k).max(1);
    let sample: Vec<u64> = marked.iter().step_by(step).copied().collect();
    let bad = sample
        .par_iter()
        .filter(|&&d| {
            let q = crate::fields::make_quadratic(d as i64).expect("squarefree");
            wright_condition(&q, report.prec_ceiling).verdict != Verdict::Holds
        })
        .copied()
        .collect();
    (sample.len(), bad)
}
