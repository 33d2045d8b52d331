//! Reproduction targets: each bundled golden file is recomputed and compared.
//!
//! Printed decimals are matched by interval overlap with their rounding band (or the
//! stated tolerance); exact values must agree as strings.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Deserialize;
use serde_json::{json, Value as Json};

use massbound_core::arith::constants::{constant_a, kellner_c, prime_sum_constant, wright_threshold};
use massbound_core::arith::enclosure::parse_exact;
use massbound_core::effective::m_n;
use massbound_core::mass::{korner_mass, MassMode};
use massbound_core::wright::wright_scan;
use massbound_core::{Field, RealEnclosure};

use crate::RunConfig;

pub const TABLE1: &str = include_str!("../golden/table1.json");
pub const MASS_Q: &str = include_str!("../golden/massQ.json");
pub const CONSTANTS: &str = include_str!("../golden/constants.json");
pub const SCAN559: &str = include_str!("../golden/scan559.json");

#[derive(Deserialize)]
struct Table1 {
    entries: Vec<TableEntry>,
}

#[derive(Deserialize)]
struct TableEntry {
    n: u32,
    value: String,
}

#[derive(Deserialize)]
struct MassQ {
    entries: Vec<MassEntry>,
}

#[derive(Deserialize)]
struct MassEntry {
    n: u32,
    exact: String,
}

#[derive(Deserialize)]
struct Constants {
    entries: Vec<ConstEntry>,
}

#[derive(Deserialize)]
struct ConstEntry {
    name: String,
    value: String,
    tol: String,
}

#[derive(Deserialize)]
struct Scan {
    dmax: u64,
    fail_count: usize,
    holds_boundary: Vec<u64>,
    fails: Vec<u64>,
}

/// Significant digits of a printed decimal and its exponent of ten.
fn printed_shape(s: &str) -> (usize, i32) {
    let (mant, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().unwrap_or(0)),
        None => (s, 0),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    let int = int.trim_start_matches(['-', '0']);
    let digits = int.len() + frac.len();
    // exponent of the leading digit
    let lead = if int.is_empty() { -1 - frac.chars().take_while(|&c| c == '0').count() as i32 } else { int.len() as i32 - 1 };
    let digits = if int.is_empty() { frac.trim_start_matches('0').len() } else { digits };
    (digits, exp + lead)
}

fn pow10(k: i32) -> Rational {
    let t = Integer::from(10).pow(k.unsigned_abs());
    if k >= 0 {
        Rational::from(t)
    } else {
        Rational::from((Integer::from(1), t))
    }
}

fn band(centre: &Rational, radius: &Rational, prec: u32) -> RealEnclosure {
    let lo = RealEnclosure::from_rational(&(centre.clone() - radius), prec);
    let hi = RealEnclosure::from_rational(&(centre.clone() + radius), prec);
    lo.hull(&hi)
}

fn width_below(v: &RealEnclosure, bound: &Rational) -> bool {
    let w = v.width();
    let b = Float::with_val(w.prec(), bound);
    w < b
}

fn check_table1(cfg: RunConfig) -> Result<Vec<Json>, String> {
    let t: Table1 = serde_json::from_str(TABLE1).map_err(|e| e.to_string())?;
    t.entries
        .iter()
        .map(|e| {
            let v = m_n(e.n, cfg.prec).map_err(|x| x.to_string())?;
            let target = parse_exact(&e.value).map_err(|x| x.to_string())?;
            let (digits, lead) = printed_shape(&e.value);
            let half_unit = pow10(lead - digits as i32 + 1) / 2u32;
            let third_digit = pow10(lead - 2);
            let ok = v.intersects(&band(&target, &half_unit, cfg.prec)) && width_below(&v, &third_digit);
            Ok(json!({ "n": e.n, "golden": e.value, "enclosure": v.to_json(), "pass": ok }))
        })
        .collect()
}

fn check_mass_q(cfg: RunConfig) -> Result<Vec<Json>, String> {
    let t: MassQ = serde_json::from_str(MASS_Q).map_err(|e| e.to_string())?;
    t.entries
        .iter()
        .map(|e| {
            let m = korner_mass(&Field::Rationals, e.n, MassMode::Exact, cfg.prec).map_err(|x| x.to_string())?;
            let got = m.total.exact().map(|q| q.to_string()).unwrap_or_default();
            Ok(json!({ "n": e.n, "golden": e.exact, "computed": got, "pass": got == e.exact }))
        })
        .collect()
}

fn named_constant(name: &str, prec: u32) -> Result<RealEnclosure, String> {
    Ok(match name {
        "constant_a" => constant_a(prec),
        "prime_sum" => prime_sum_constant(prec),
        "kellner_c" => kellner_c(prec),
        "wright_threshold" => wright_threshold(prec),
        other => return Err(format!("unknown constant {other}")),
    })
}

fn check_constants(cfg: RunConfig) -> Result<Vec<Json>, String> {
    let t: Constants = serde_json::from_str(CONSTANTS).map_err(|e| e.to_string())?;
    t.entries
        .iter()
        .map(|e| {
            let v = named_constant(&e.name, cfg.prec)?;
            let centre = parse_exact(&e.value).map_err(|x| x.to_string())?;
            let tol = parse_exact(&e.tol).map_err(|x| x.to_string())?;
            let ok = v.intersects(&band(&centre, &tol, cfg.prec));
            Ok(json!({ "name": e.name, "golden": e.value, "tol": e.tol, "enclosure": v.to_json(), "pass": ok }))
        })
        .collect()
}

fn check_scan(cfg: RunConfig) -> Result<Vec<Json>, String> {
    let g: Scan = serde_json::from_str(SCAN559).map_err(|e| e.to_string())?;
    let r = wright_scan(g.dmax, cfg.ceiling);
    let fails = r.failing();
    let boundary = r.holds_boundary();
    let unresolved = r.unresolved();
    Ok(vec![
        json!({ "item": "fail_count", "golden": g.fail_count, "computed": fails.len(), "pass": fails.len() == g.fail_count }),
        json!({ "item": "holds_boundary", "golden": g.holds_boundary, "computed": boundary, "pass": boundary == g.holds_boundary }),
        json!({ "item": "fails", "pass": fails == g.fails,
                "missing": g.fails.iter().filter(|d| !fails.contains(d)).collect::<Vec<_>>(),
                "extra": fails.iter().filter(|d| !g.fails.contains(d)).collect::<Vec<_>>() }),
        json!({ "item": "unresolved", "computed": unresolved, "pass": unresolved.is_empty() }),
    ])
}

/// Run one golden comparison (or all of them), print the per-item report, and fail
/// with the names of the mismatching items.
pub fn run(cfg: RunConfig, name: &str) -> Result<(), String> {
    let names: Vec<&str> = if name == "all" { vec!["table1", "massQ", "constants", "scan559"] } else { vec![name] };
    let mut report = serde_json::Map::new();
    let mut failed = Vec::new();
    for n in names {
        let items = match n {
            "table1" => check_table1(cfg)?,
            "massQ" => check_mass_q(cfg)?,
            "constants" => check_constants(cfg)?,
            "scan559" => check_scan(cfg)?,
            other => return Err(format!("unknown golden file {other}")),
        };
        for it in &items {
            if it["pass"] != json!(true) {
                let label = it.get("name").or(it.get("item")).or(it.get("n")).cloned().unwrap_or(Json::Null);
                failed.push(format!("{n}:{}", label.as_str().map_or_else(|| label.to_string(), str::to_string)));
            }
        }
        report.insert(n.to_string(), Json::Array(items));
    }
    report.insert("schema".into(), json!(1));
    report.insert("pass".into(), json!(failed.is_empty()));
    crate::write_out(&(serde_json::to_string_pretty(&Json::Object(report)).expect("serializable") + "\n"));
    if failed.is_empty() {
        Ok(())
    } else {
        Err(format!("golden mismatch: {}", failed.join(", ")))
    }
}
