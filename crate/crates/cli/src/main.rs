mod golden;

use std::fmt::Write as _;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Rational;
use serde_json::{json, Value as Json};

use massbound_core::arith::enclosure::parse_exact;
use massbound_core::effective::{self, FormulaId, GapBranch};
use massbound_core::fields::DescriptorJson;
use massbound_core::genera::{genera_bound, partition_max_check};
use massbound_core::groupbounds::{coeff_a_k, collins_friedland_bound, schur_product};
use massbound_core::mass::{korner_mass, MassMode};
use massbound_core::transforms::{euler_transform, inverse_euler_transform, IntSequence, SequenceJson};
use massbound_core::wright::{audit_threshold, wright_scan};
use massbound_core::{Error, Field, RealEnclosure, DEFAULT_PREC, DEFAULT_PREC_CEILING};

#[derive(Parser, Debug)]
#[command(name = "massbound", version, about = "Siegel masses of I_n and effective bounds over totally real fields")]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct ConfigArgs {
    /// Working precision in bits.
    #[arg(long, global = true, env = "MASSBOUND_PREC_BITS", default_value_t = DEFAULT_PREC)]
    prec_bits: u32,
    /// Ceiling for adaptive refinement, in bits.
    #[arg(long, global = true, default_value_t = DEFAULT_PREC_CEILING)]
    prec_ceiling: u32,
    /// Worker threads for parallel kernels (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    out: Option<OutFormat>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum OutFormat {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mass of I_n via Körner's formula.
    Mass {
        #[arg(long)]
        field: String,
        #[arg(long)]
        rank: u32,
        #[arg(long, conflicts_with = "enclosure")]
        exact: bool,
        #[arg(long)]
        enclosure: bool,
        #[arg(long)]
        breakdown: bool,
    },
    /// Automorphism-order bounds and the coefficient 𝒜_K.
    Autbound {
        #[arg(long)]
        field: String,
        #[arg(long)]
        rank: u32,
        #[arg(long, conflicts_with = "cf")]
        schur: bool,
        #[arg(long)]
        cf: bool,
    },
    /// Euler transform of a sequence file, or its inverse.
    Euler {
        #[arg(long)]
        invert: bool,
        /// Path to a sequence JSON file, or `-` for stdin.
        #[arg(long = "in")]
        input: String,
    },
    /// Genera count bound, or the exhaustive partition check.
    Genera {
        #[arg(long, required_unless_present = "check_partitions")]
        field: Option<String>,
        #[arg(long)]
        check_partitions: bool,
        #[arg(long, default_value_t = 14)]
        dmax: u64,
    },
    /// Wright condition over all squarefree D ≤ dmax.
    WrightScan {
        #[arg(long)]
        dmax: u64,
        /// Re-evaluate this many threshold-marked fields directly.
        #[arg(long)]
        audit: Option<usize>,
        /// Exit with status 3 if any verdict is unresolved.
        #[arg(long)]
        strict: bool,
    },
    /// Degree and discriminant bounds.
    Effective {
        #[arg(long)]
        n: u32,
        #[arg(long = "C")]
        c: String,
        #[arg(long, default_value = "maindbound")]
        formula: String,
        /// Degree, for the rank-2 discriminant bounds.
        #[arg(long)]
        d: Option<u32>,
    },
    /// 𝓜_n over a range of n.
    TableMn {
        #[arg(long, default_value_t = 3)]
        from: u32,
        #[arg(long, default_value_t = 9)]
        to: u32,
    },
    /// Class-number, lattice-count and gap bounds for one field and rank.
    Report {
        #[arg(long)]
        field: String,
        #[arg(long)]
        rank: u32,
        /// Optional sequence JSON with i(K,1), …, i(K,n+3).
        #[arg(long)]
        indecomposables: Option<String>,
    },
    /// Compare fresh computations with the bundled golden files.
    Golden {
        #[arg(value_parser = ["table1", "scan559", "massQ", "constants", "all"])]
        name: String,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Unresolved(usize),
    Input(String),
    Mismatch(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Unresolved(_) => 3,
            CliError::Input(_) => 4,
            CliError::Mismatch(_) | CliError::Internal(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::Mismatch(m) | CliError::Internal(m) => f.write_str(m),
            CliError::Unresolved(k) => write!(f, "{k} verdicts unresolved at the precision ceiling"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::ParityInternal(_) | Error::DenominatorNonpositive | Error::IncompatibleRadicals(..) => {
                CliError::Internal(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Validated run configuration.
#[derive(Clone, Copy, Debug)]
pub struct RunConfig {
    pub prec: u32,
    pub ceiling: u32,
    pub jobs: usize,
}

impl RunConfig {
    fn from_args(a: &ConfigArgs) -> CliResult<Self> {
        if a.prec_bits < 16 {
            return Err(CliError::Usage(format!("--prec-bits must be >= 16, got {}", a.prec_bits)));
        }
        if a.prec_ceiling < a.prec_bits {
            return Err(CliError::Usage("--prec-ceiling must be >= --prec-bits".into()));
        }
        let jobs = a.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be >= 1".into()));
        }
        Ok(RunConfig { prec: a.prec_bits, ceiling: a.prec_ceiling, jobs })
    }
}

fn read_input(path: &str) -> CliResult<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))
}

fn parse_field(spec: &str) -> CliResult<Field> {
    if let Some(path) = spec.strip_prefix("file:") {
        let text = read_input(path)?;
        let js: DescriptorJson = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
        return Ok(js.to_field()?);
    }
    Ok(Field::parse_spec(spec)?)
}

fn read_sequence(path: &str) -> CliResult<IntSequence> {
    let text = read_input(path)?;
    let js: SequenceJson = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
    Ok(IntSequence::from_json(&js)?)
}

/// Write to stdout, treating a closed pipe as a normal end of output.
pub(crate) fn write_out(s: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(s.as_bytes()).and_then(|_| out.flush());
}

fn emit(v: &Json) {
    write_out(&(serde_json::to_string_pretty(v).expect("serializable") + "\n"));
}

fn cmd_mass(cfg: RunConfig, field: &str, rank: u32, exact: bool, enclosure: bool, breakdown: bool) -> CliResult<()> {
    let k = parse_field(field)?;
    let mode = if enclosure || (!exact && k.degree() > 2) { MassMode::Enclosure } else { MassMode::Exact };
    let m = korner_mass(&k, rank, mode, cfg.prec)?;
    emit(&m.to_json(breakdown));
    Ok(())
}

fn cmd_autbound(cfg: RunConfig, field: &str, rank: u32, schur: bool, cf: bool) -> CliResult<()> {
    let k = parse_field(field)?;
    let mut out = json!({ "schema": 1, "field": k.label(), "rank": rank });
    let c = collins_friedland_bound(k.degree(), rank);
    let cf_enc = c.value.to_enclosure(cfg.prec);
    if !schur {
        out["collins_friedland"] = json!({ "enclosure": cf_enc.to_json(), "proven": c.proven });
    }
    let s = if cf { None } else { Some(schur_product(&k, u64::from(rank))?) };
    if let Some(s) = &s {
        out["schur"] = json!({ "exact": s.to_string() });
    }
    if let (false, false, Some(s)) = (schur, cf, &s) {
        let se = RealEnclosure::from_integer(s, cfg.prec);
        let which = if c.proven && cf_enc.certainly_lt(&se) { "collins_friedland" } else { "schur" };
        out["min_source"] = json!(which);
    }
    if let Field::Quadratic(_) = k {
        let a = coeff_a_k(&k, cfg.prec, cfg.ceiling)?;
        out["a_k"] = json!({ "enclosure": a.a_k.to_json(), "source": a.source, "resolved": a.resolved, "bits": a.bits });
    }
    emit(&out);
    Ok(())
}

fn sequence_out(s: &IntSequence) -> Json {
    json!({ "schema": 1, "values": s.to_json().values })
}

fn cmd_euler(invert: bool, input: &str) -> CliResult<()> {
    let s = read_sequence(input)?;
    let out = if invert { inverse_euler_transform(&s)? } else { euler_transform(&s) };
    emit(&sequence_out(&out));
    Ok(())
}

fn cmd_genera(field: Option<&str>, check: bool, dmax: u64) -> CliResult<()> {
    if check {
        let rows = (1..=dmax)
            .map(|d| {
                let c = partition_max_check(d)?;
                Ok(json!({
                    "d": d,
                    "holds": c.holds,
                    "max_unweighted": c.max_unweighted.to_string(),
                    "max_weighted": c.max_weighted.to_string(),
                    "cap": c.cap.to_string(),
                }))
            })
            .collect::<CliResult<Vec<_>>>()?;
        let ok = rows.iter().all(|r| r["holds"] == json!(true));
        emit(&json!({ "schema": 1, "all_hold": ok, "checks": rows }));
        return if ok { Ok(()) } else { Err(CliError::Mismatch("partition check failed".into())) };
    }
    let k = parse_field(field.expect("required by clap"))?;
    let mut out = genera_bound(k.descriptor()).to_json();
    out["schema"] = json!(1);
    out["field"] = json!(k.label());
    emit(&out);
    Ok(())
}

fn cmd_wright(cfg: RunConfig, out: OutFormat, dmax: u64, audit: Option<usize>, strict: bool) -> CliResult<()> {
    if dmax < 2 {
        return Err(CliError::Input("--dmax must be >= 2".into()));
    }
    let r = wright_scan(dmax, cfg.ceiling);
    let unresolved = r.unresolved();
    eprintln!(
        "scanned {} fields, {} fail, {} unresolved, boundary {:?}",
        r.verdicts.len(),
        r.failing().len(),
        unresolved.len(),
        r.holds_boundary()
    );
    let mono = r.monotonicity_violations();
    if !mono.is_empty() {
        eprintln!("monotonicity violations within dyadic classes: {mono:?}");
    }
    let mut audit_json = Json::Null;
    if let Some(k) = audit {
        let (n, bad) = audit_threshold(&r, k);
        eprintln!("threshold audit: {n} sampled, {} disagree", bad.len());
        audit_json = json!({ "sampled": n, "disagree": bad.iter().map(u64::to_string).collect::<Vec<_>>() });
    }
    match out {
        OutFormat::Csv => write_out(&r.to_csv()),
        _ => {
            let mut js = r.to_json();
            js["monotonicity_violations"] = json!(mono.iter().map(u64::to_string).collect::<Vec<_>>());
            if !audit_json.is_null() {
                js["audit"] = audit_json;
            }
            emit(&js);
        }
    }
    if strict && !unresolved.is_empty() {
        return Err(CliError::Unresolved(unresolved.len()));
    }
    Ok(())
}

fn parse_c(s: &str) -> CliResult<Rational> {
    parse_exact(s).map_err(|e| CliError::Input(e.to_string()))
}

fn cmd_effective(cfg: RunConfig, out: OutFormat, n: u32, c: &str, formula: &str, d: Option<u32>) -> CliResult<()> {
    let c = parse_c(c)?;
    let f = FormulaId::parse(formula)?;
    let r = match f {
        FormulaId::Maindbound | FormulaId::Maindiscbound => effective::finite_bounds(n, &c, cfg.prec)?,
        FormulaId::Dboundmass | FormulaId::Discboundmass => effective::mass_bounds_to_field_bounds(&c, n, cfg.prec)?,
        FormulaId::Maindiscbound2 | FormulaId::Discbound2 => {
            let d = d.ok_or_else(|| CliError::Usage(format!("--formula {formula} needs --d")))?;
            effective::rank2_report(&c, d, f, cfg.prec)?
        }
    };
    if out == OutFormat::Text {
        let mut t = String::new();
        if let Some(b) = &r.degree_bound {
            let j = b.to_json();
            let _ = writeln!(t, "degree bound  [{}, {}]", j.lo, j.hi);
        }
        if let Some(m) = &r.max_degree {
            let _ = writeln!(t, "max degree    {m}{}", if r.no_field { " (no field)" } else { "" });
        }
        let _ = writeln!(t, "{:>6}  {:>28}", "d", "disc bound (upper)");
        for (d, b) in &r.disc_bounds {
            let _ = writeln!(t, "{d:>6}  {:>28}", b.to_json().hi);
        }
        write_out(&t);
        return Ok(());
    }
    emit(&r.to_json());
    Ok(())
}

fn cmd_table(cfg: RunConfig, out: OutFormat, from: u32, to: u32) -> CliResult<()> {
    if from > to {
        return Err(CliError::Usage("--from must not exceed --to".into()));
    }
    let rows = effective::table_mn(from, to, cfg.prec)?;
    match out {
        OutFormat::Json => {
            let rows: Vec<Json> = rows
                .iter()
                .map(|(n, v)| json!({ "n": n, "enclosure": v.to_json(), "width": rug_width(v) }))
                .collect();
            emit(&json!({ "schema": 1, "rows": rows }));
        }
        _ => {
            let mut t = format!("{:>4}  {:>12}  {:>44}  {:>44}  {:>10}\n", "n", "approx", "lo", "hi", "width");
            for (n, v) in &rows {
                let j = v.to_json();
                let _ = writeln!(t, "{n:>4}  {:>12.4e}  {:>44}  {:>44}  {:>10}", v.to_f64(), short(&j.lo), short(&j.hi), rug_width(v));
            }
            write_out(&t);
        }
    }
    Ok(())
}

fn short(s: &str) -> String {
    // fixed-length mantissa display for the text table; JSON keeps every digit
    match s.split_once('e') {
        Some((m, e)) => format!("{}e{e}", &m[..m.len().min(36)]),
        None => s[..s.len().min(40)].to_string(),
    }
}

fn rug_width(v: &RealEnclosure) -> String {
    v.width().to_string_radix(10, Some(3))
}

fn cmd_report(cfg: RunConfig, field: &str, rank: u32, indecomposables: Option<&str>) -> CliResult<()> {
    let k = parse_field(field)?;
    let seq = indecomposables.map(read_sequence).transpose()?;
    let mut out = effective::class_and_u_report(&k, rank, seq.as_ref(), cfg.prec)?.to_json();
    let gaps: Vec<Json> = [GapBranch::NEven, GapBranch::N2Mod6]
        .into_iter()
        .filter_map(|b| effective::shortgap_lower(&k, b, cfg.prec).ok().map(|v| json!({ "branch": b, "lower": v.to_json() })))
        .collect();
    out["shortgap"] = json!(gaps);
    if let Ok(v) = effective::max_iul_lower(k.descriptor(), rank, cfg.prec) {
        out["max_indecomposable_lower"] = json!(v.to_json());
    }
    emit(&out);
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    let cfg = RunConfig::from_args(&cli.config)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build_global()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let out = cli.config.out;
    match cli.command {
        Command::Mass { field, rank, exact, enclosure, breakdown } => cmd_mass(cfg, &field, rank, exact, enclosure, breakdown),
        Command::Autbound { field, rank, schur, cf } => cmd_autbound(cfg, &field, rank, schur, cf),
        Command::Euler { invert, input } => cmd_euler(invert, &input),
        Command::Genera { field, check_partitions, dmax } => cmd_genera(field.as_deref(), check_partitions, dmax),
        Command::WrightScan { dmax, audit, strict } => cmd_wright(cfg, out.unwrap_or(OutFormat::Json), dmax, audit, strict),
        Command::Effective { n, c, formula, d } => cmd_effective(cfg, out.unwrap_or(OutFormat::Json), n, &c, &formula, d),
        Command::TableMn { from, to } => cmd_table(cfg, out.unwrap_or(OutFormat::Text), from, to),
        Command::Report { field, rank, indecomposables } => cmd_report(cfg, &field, rank, indecomposables.as_deref()),
        Command::Golden { name } => golden::run(cfg, &name).map_err(CliError::Mismatch),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
