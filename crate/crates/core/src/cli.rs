//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage error, 3 verification mismatch, 4 I/O error.

use std::ffi::OsString;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::arith::{factor, is_probable_prime, Effort, SquarefreeVerdict};
use crate::dedekind::{classify_prime, generic_verdict, DedekindError, PrimeVerdict};
use crate::family::{build, disc_closed_form, FamilyParams};
use crate::index::{analyze_many, analyze_with, grid_pairs, fp_table_with, AnalysisOptions, IndexReport};
use crate::poly_int::discriminant_via_resultant;
use crate::poly_mod::{factor_mod_with_rng, reduce, DEFAULT_SEED};
use crate::record::{self, CacheKey, CacheWriter, OutputRecord, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "monogen", version, about = "Discriminants and index divisors of (x^2 + 1)^n - a x^n")]
struct Cli {
    /// Emit one JSON record per line instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Factorization budget: quick, default or deep.
    #[arg(long, global = true, env = "MONOGEN_EFFORT", default_value = "default", value_parser = parse_effort)]
    effort: Effort,

    /// Seed for the randomized factorizer over prime fields.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Family {
    #[arg(long)]
    n: u32,
    #[arg(long, allow_hyphen_values = true)]
    a: BigInt,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full analysis: discriminant, prime verdicts, index, monogenity.
    Analyze {
        #[command(flatten)]
        family: Family,
        /// Re-decide every prime with the generic Dedekind criterion.
        #[arg(long)]
        cross_check: bool,
    },
    /// Closed-form discriminant.
    Disc {
        #[command(flatten)]
        family: Family,
        /// Recompute through the Sylvester resultant and compare.
        #[arg(long)]
        verify: bool,
    },
    /// Decide whether one prime divides the index.
    Classify {
        #[command(flatten)]
        family: Family,
        #[arg(long)]
        p: BigUint,
        #[arg(long)]
        cross_check: bool,
    },
    /// Table of ind(f_p) for f_p = (x^2 + 1)^p - p x^p over odd primes p.
    FpTable {
        #[arg(long)]
        max: u32,
    },
    /// Analyze a grid of (n, a), optionally resuming from a cache file.
    Scan {
        /// Inclusive range LO:HI.
        #[arg(long, value_parser = parse_u32_range)]
        n_range: RangeInclusive<u32>,
        /// Inclusive range LO:HI.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_i64_range)]
        a_range: RangeInclusive<i64>,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Factor f modulo a prime.
    FactorMod {
        #[command(flatten)]
        family: Family,
        #[arg(long)]
        p: u64,
    },
}

fn parse_effort(s: &str) -> Result<Effort, String> {
    s.parse()
}

fn parse_range<T: std::str::FromStr + PartialOrd>(s: &str) -> Result<RangeInclusive<T>, String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected LO:HI, got `{s}`"))?;
    let lo: T = lo.trim().parse().map_err(|_| format!("bad lower bound `{lo}`"))?;
    let hi: T = hi.trim().parse().map_err(|_| format!("bad upper bound `{hi}`"))?;
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok(lo..=hi)
}

fn parse_u32_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    parse_range(s)
}

fn parse_i64_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    parse_range(s)
}

struct Ctx<'a> {
    json: bool,
    effort: Effort,
    seed: u64,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn options(&self, cross_check: bool) -> AnalysisOptions {
        AnalysisOptions {
            effort: self.effort,
            seed: self.seed,
            cross_check,
        }
    }

    fn emit(&mut self, rec: &OutputRecord) -> std::io::Result<()> {
        writeln!(self.out, "{}", rec.to_line())
    }

    fn inputs(&self, family: &Family) -> Value {
        json!({
            "n": family.n,
            "a": family.a.to_string(),
            "effort": self.effort.as_str(),
            "seed": self.seed.to_string(),
        })
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    let mut ctx = Ctx {
        json: cli.json,
        effort: cli.effort,
        seed: cli.seed,
        out,
        err,
    };
    let result = match cli.command {
        Command::Analyze { family, cross_check } => cmd_analyze(&mut ctx, &family, cross_check),
        Command::Disc { family, verify } => cmd_disc(&mut ctx, &family, verify),
        Command::Classify { family, p, cross_check } => cmd_classify(&mut ctx, &family, &p, cross_check),
        Command::FpTable { max } => cmd_fp_table(&mut ctx, max),
        Command::Scan { n_range, a_range, cache } => cmd_scan(&mut ctx, n_range, a_range, cache),
        Command::FactorMod { family, p } => cmd_factor_mod(&mut ctx, &family, p),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            EXIT_IO
        }
    }
}

type CmdResult = std::io::Result<i32>;

fn params_or_usage(ctx: &mut Ctx, family: &Family) -> std::io::Result<Option<FamilyParams>> {
    match FamilyParams::new(family.n, family.a.clone()) {
        Ok(p) => Ok(Some(p)),
        Err(e) => {
            writeln!(ctx.err, "error: {e}")?;
            Ok(None)
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn write_verdict_table(out: &mut dyn Write, verdicts: &[PrimeVerdict]) -> std::io::Result<()> {
    if verdicts.is_empty() {
        return Ok(());
    }
    writeln!(out, "  {:<12} {:>8}  {:<38} divides index", "prime", "v(disc)", "case")?;
    for v in verdicts {
        writeln!(
            out,
            "  {:<12} {:>8}  {:<38} {}",
            v.prime.to_string(),
            v.evidence.disc_valuation,
            v.case_tag.label(),
            yes_no(v.divides_index)
        )?;
    }
    Ok(())
}

fn write_report(out: &mut dyn Write, r: &IndexReport) -> std::io::Result<()> {
    writeln!(out, "f(x) = {}", r.params)?;
    write!(out, "irreducibility: {}", r.irreducibility.as_str())?;
    match &r.irreducibility {
        crate::family::IrreducibilityVerdict::Irreducible(c) => writeln!(out, " ({c})")?,
        crate::family::IrreducibilityVerdict::Reducible(g) => writeln!(out, " (divisible by {g})")?,
        crate::family::IrreducibilityVerdict::Unknown => writeln!(out)?,
    }
    writeln!(out, "disc = {}", r.disc)?;
    if let Some(fr) = &r.disc_factors {
        writeln!(out, "     = {fr}")?;
    }
    write_verdict_table(out, &r.verdicts)?;
    writeln!(out, "index: {}", r.index)?;
    writeln!(out, "monogenic: {}", r.monogenic)?;
    if let Some(cc) = &r.cross_check {
        writeln!(
            out,
            "cross-check: {} primes checked, {} mismatches, {} skipped",
            cc.checked.len(),
            cc.mismatches.len(),
            cc.skipped.len()
        )?;
    }
    for d in &r.diagnostics {
        writeln!(out, "note: {d}")?;
    }
    Ok(())
}

fn cmd_analyze(ctx: &mut Ctx, family: &Family, cross_check: bool) -> CmdResult {
    let Some(params) = params_or_usage(ctx, family)? else {
        return Ok(EXIT_USAGE);
    };
    let report = analyze_with(&params, &ctx.options(cross_check));
    if ctx.json {
        let mut inputs = ctx.inputs(family);
        inputs["cross_check"] = json!(cross_check);
        let rec = OutputRecord::new("analyze", inputs, record::report_json(&report), report.diagnostics.clone());
        ctx.emit(&rec)?;
    } else {
        write_report(ctx.out, &report)?;
    }
    let mismatch = report.cross_check.as_ref().is_some_and(|cc| !cc.mismatches.is_empty());
    Ok(if mismatch { EXIT_MISMATCH } else { EXIT_OK })
}

fn cmd_disc(ctx: &mut Ctx, family: &Family, verify: bool) -> CmdResult {
    let Some(params) = params_or_usage(ctx, family)? else {
        return Ok(EXIT_USAGE);
    };
    let disc = disc_closed_form(&params);
    let mut diagnostics = Vec::new();
    let factored = if disc.is_zero() {
        diagnostics.push("discriminant is zero: f has repeated factor".to_string());
        None
    } else {
        let fr = factor(&disc, ctx.effort);
        if !fr.complete {
            diagnostics.push(format!("factorization incomplete at effort {}", ctx.effort));
        }
        Some(fr)
    };
    let resultant = verify.then(|| discriminant_via_resultant(&build(&params)).expect("f is monic of degree 2n"));
    let verified = resultant.as_ref().map(|r| r == &disc);
    if verified == Some(false) {
        diagnostics.push("closed form and resultant disagree".to_string());
    }
    if ctx.json {
        let mut inputs = ctx.inputs(family);
        inputs["verify"] = json!(verify);
        let result = json!({
            "disc": disc.to_string(),
            "disc_factors": factored.as_ref().map(record::factors_json),
            "resultant": resultant.as_ref().map(|r| r.to_string()),
            "verified": verified,
        });
        ctx.emit(&OutputRecord::new("disc", inputs, result, diagnostics))?;
    } else {
        writeln!(ctx.out, "f(x) = {params}")?;
        writeln!(ctx.out, "disc = {disc}")?;
        if let Some(fr) = &factored {
            writeln!(ctx.out, "     = {fr}")?;
        }
        if let Some(r) = &resultant {
            writeln!(ctx.out, "resultant = {r}")?;
            writeln!(ctx.out, "verified: {}", yes_no(verified == Some(true)))?;
        }
        for d in &diagnostics {
            writeln!(ctx.out, "note: {d}")?;
        }
    }
    Ok(if verified == Some(false) { EXIT_MISMATCH } else { EXIT_OK })
}

fn cmd_classify(ctx: &mut Ctx, family: &Family, p: &BigUint, cross_check: bool) -> CmdResult {
    let Some(params) = params_or_usage(ctx, family)? else {
        return Ok(EXIT_USAGE);
    };
    if !is_probable_prime(p) {
        writeln!(ctx.err, "error: {p} is not prime")?;
        return Ok(EXIT_USAGE);
    }
    let mut inputs = ctx.inputs(family);
    inputs["p"] = json!(p.to_string());
    inputs["cross_check"] = json!(cross_check);
    let verdict = match classify_prime(&params, p) {
        Ok(v) => v,
        Err(e @ (DedekindError::NotDiscriminantDivisor(_) | DedekindError::DiscriminantZero)) => {
            let message = match e {
                DedekindError::DiscriminantZero => "discriminant is zero: f has repeated factor".to_string(),
                _ => format!("{p} ∤ Δ ⇒ {p} ∤ ind"),
            };
            if ctx.json {
                let result = json!({"prime": p.to_string(), "divides_disc": false});
                ctx.emit(&OutputRecord::new("classify", inputs, result, vec![message]))?;
            } else {
                writeln!(ctx.out, "{message}")?;
            }
            return Ok(EXIT_OK);
        }
        Err(e) => {
            writeln!(ctx.err, "error: {e}")?;
            return Ok(EXIT_USAGE);
        }
    };
    let mut diagnostics = Vec::new();
    let generic = if cross_check {
        match generic_verdict(&params, p, ctx.seed) {
            Ok(g) => Some(g),
            Err(e) => {
                diagnostics.push(format!("generic criterion skipped: {e}"));
                None
            }
        }
    } else {
        None
    };
    let agree = generic.as_ref().map(|g| g.divides_index == verdict.divides_index);
    if agree == Some(false) {
        diagnostics.push("generic Dedekind criterion disagrees with the classifier".to_string());
    }
    if ctx.json {
        let mut result = record::verdict_json(&verdict);
        result["generic"] = generic.as_ref().map_or(Value::Null, record::verdict_json);
        result["agree"] = json!(agree);
        ctx.emit(&OutputRecord::new("classify", inputs, result, diagnostics))?;
    } else {
        writeln!(ctx.out, "f(x) = {params}, p = {p}")?;
        writeln!(ctx.out, "case: {}", verdict.case_tag)?;
        let e = &verdict.evidence;
        writeln!(
            ctx.out,
            "evidence: v_p(a) = {}, v_p(n) = {}, v_p(disc) = {}, v_p(2^n - a) = {}",
            e.a_valuation, e.n_valuation, e.disc_valuation, e.tail_valuation
        )?;
        if let (Some(pw), Some(am)) = (&e.a_pow_mod_p2, &e.a_mod_p2) {
            writeln!(ctx.out, "          a^(p^j) mod p^2 = {pw}, a mod p^2 = {am}")?;
        }
        writeln!(ctx.out, "divides index: {}", yes_no(verdict.divides_index))?;
        if let Some(g) = &generic {
            writeln!(ctx.out, "generic Dedekind criterion: {}", yes_no(g.divides_index))?;
        }
        for d in &diagnostics {
            writeln!(ctx.out, "note: {d}")?;
        }
    }
    Ok(if agree == Some(false) { EXIT_MISMATCH } else { EXIT_OK })
}

fn cmd_fp_table(ctx: &mut Ctx, max: u32) -> CmdResult {
    if max < 3 {
        writeln!(ctx.err, "error: --max must be at least 3")?;
        return Ok(EXIT_USAGE);
    }
    let rows = fp_table_with(max, &ctx.options(false));
    let squarefree: Vec<u32> = rows
        .iter()
        .filter(|r| r.h_squarefree == SquarefreeVerdict::Squarefree)
        .map(|r| r.p)
        .collect();
    let inputs = json!({"max": max, "effort": ctx.effort.as_str(), "seed": ctx.seed.to_string()});
    if ctx.json {
        for row in &rows {
            let mut inputs = inputs.clone();
            inputs["p"] = json!(row.p);
            ctx.emit(&OutputRecord::new("fp-table", inputs, record::scan_row_json(row), row.notes.clone()))?;
        }
        let result = json!({"summary": true, "squarefree_h": squarefree});
        ctx.emit(&OutputRecord::new("fp-table", inputs, result, Vec::new()))?;
    } else {
        writeln!(ctx.out, "{:>5}  {:<10}  {:<14}  ind(f_p)", "p", "H(p)", "squarefree")?;
        for row in &rows {
            let status = if row.h_factors.complete { "factored" } else { "incomplete" };
            writeln!(ctx.out, "{:>5}  {:<10}  {:<14}  {}", row.p, status, row.h_squarefree.as_str(), row.index)?;
            for n in &row.notes {
                writeln!(ctx.out, "       note: {n}")?;
            }
        }
        let list: Vec<String> = squarefree.iter().map(u32::to_string).collect();
        writeln!(ctx.out, "squarefree H(p): {}", list.join(", "))?;
    }
    Ok(EXIT_OK)
}

fn cmd_scan(
    ctx: &mut Ctx,
    n_range: RangeInclusive<u32>,
    a_range: RangeInclusive<i64>,
    cache: Option<PathBuf>,
) -> CmdResult {
    if *n_range.start() < 2 {
        writeln!(ctx.err, "error: n must be at least 2")?;
        return Ok(EXIT_USAGE);
    }
    let (cached, mut writer) = match &cache {
        Some(path) => {
            let (map, bad) = match record::read_cache(path) {
                Ok(x) => x,
                Err(e) => {
                    writeln!(ctx.err, "error: cannot read cache {}: {e}", path.display())?;
                    return Ok(EXIT_IO);
                }
            };
            if bad > 0 {
                writeln!(ctx.err, "warning: ignored {bad} malformed cache lines")?;
            }
            match CacheWriter::open(path) {
                Ok(w) => (map, Some(w)),
                Err(e) => {
                    writeln!(ctx.err, "error: cannot write cache {}: {e}", path.display())?;
                    return Ok(EXIT_IO);
                }
            }
        }
        None => (Default::default(), None),
    };

    let grid: Vec<(u32, i64)> = n_range.clone().flat_map(|n| a_range.clone().map(move |a| (n, a))).collect();
    let effort = ctx.effort.as_str();
    let key = |n: u32, a: i64| CacheKey {
        n,
        a: a.to_string(),
        schema_version: SCHEMA_VERSION.to_string(),
        effort: effort.to_string(),
    };
    let todo: Vec<(u32, i64)> = grid_pairs(n_range, a_range)
        .into_iter()
        .filter(|&(n, a)| !cached.contains_key(&key(n, a)))
        .collect();
    let mut fresh = analyze_many(&todo, &ctx.options(false)).into_iter();

    let (mut records, mut hits, mut computed) = (0usize, 0usize, 0usize);
    for (n, a) in grid {
        records += 1;
        let rec = if let Some(rec) = cached.get(&key(n, a)) {
            hits += 1;
            rec.clone()
        } else {
            let inputs = json!({"n": n, "a": a.to_string(), "effort": ctx.effort.as_str()});
            let rec = if a == 0 {
                OutputRecord::new("scan", inputs, json!({"skipped": true}), vec!["a = 0 is outside the family; skipped".into()])
            } else {
                computed += 1;
                let report = fresh.next().expect("one report per nonzero a");
                OutputRecord::new("scan", inputs, record::report_json(&report), report.diagnostics.clone())
            };
            if let Some(w) = writer.as_mut() {
                if let Err(e) = w.append(&rec) {
                    writeln!(ctx.err, "error: cannot append to cache: {e}")?;
                    return Ok(EXIT_IO);
                }
            }
            rec
        };
        if ctx.json {
            ctx.emit(&rec)?;
        } else {
            write_scan_line(ctx.out, &rec)?;
        }
    }
    writeln!(ctx.err, "scan: {records} records, {computed} computed, {hits} cache hits")?;
    Ok(EXIT_OK)
}

fn write_scan_line(out: &mut dyn Write, rec: &OutputRecord) -> std::io::Result<()> {
    let n = &rec.inputs["n"];
    let a = rec.inputs["a"].as_str().unwrap_or("?");
    if rec.result.get("skipped").is_some() {
        return writeln!(out, "n={n:<3} a={a:<6} skipped (a = 0)");
    }
    let r = &rec.result;
    let index = match r["index"]["kind"].as_str() {
        Some("exact") => r["index"]["value"].as_str().unwrap_or("?").to_string(),
        Some("at_least") => format!(">= {}", r["index"]["value"].as_str().unwrap_or("?")),
        _ => "undefined".to_string(),
    };
    writeln!(
        out,
        "n={n:<3} a={a:<6} irreducibility={:<11} index={:<10} monogenic={}",
        r["irreducibility"]["verdict"].as_str().unwrap_or("?"),
        index,
        r["monogenic"]["verdict"].as_str().unwrap_or("?"),
    )
}

fn cmd_factor_mod(ctx: &mut Ctx, family: &Family, p: u64) -> CmdResult {
    let Some(params) = params_or_usage(ctx, family)? else {
        return Ok(EXIT_USAGE);
    };
    if !is_probable_prime(&BigUint::from(p)) {
        writeln!(ctx.err, "error: {p} is not prime")?;
        return Ok(EXIT_USAGE);
    }
    let f_bar = reduce(&build(&params), p).expect("p is prime");
    let fac = factor_mod_with_rng(&f_bar, &mut ChaCha8Rng::seed_from_u64(ctx.seed)).expect("f mod p is nonzero");
    if ctx.json {
        let mut inputs = ctx.inputs(family);
        inputs["p"] = json!(p.to_string());
        ctx.emit(&OutputRecord::new("factor-mod", inputs, record::mod_factorization_json(&fac), Vec::new()))?;
    } else {
        writeln!(ctx.out, "f(x) = {params}")?;
        writeln!(ctx.out, "f mod {p} = {fac}")?;
        let degrees: Vec<String> = fac.degree_multiset().iter().map(|d| d.to_string()).collect();
        writeln!(ctx.out, "factor degrees: {}", degrees.join(", "))?;
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["monogen"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_i64_range("-5:5"), Ok(-5..=5));
        assert_eq!(parse_u32_range("2:4"), Ok(2..=4));
        assert!(parse_u32_range("4:2").is_err());
        assert!(parse_u32_range("4").is_err());
    }

    #[test]
    fn analyze_text() {
        let (code, out, _) = run_args(&["analyze", "--n", "5", "--a", "5"]);
        assert_eq!(code, 0);
        assert!(out.contains("= -3^3 * 5^18 * 37"), "{out}");
        assert!(out.contains("index: 3"));
        assert!(out.contains("monogenic: no"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["analyze", "--n", "2", "--a", "0"]).0, 2);
        assert_eq!(run_args(&["analyze", "--n", "1", "--a", "3"]).0, 2);
        assert_eq!(run_args(&["analyze", "--n", "2"]).0, 2);
        assert_eq!(run_args(&["bogus"]).0, 2);
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn negative_a_parses() {
        let (code, out, _) = run_args(&["disc", "--n", "2", "--a", "-3", "--verify"]);
        assert_eq!(code, 0);
        assert!(out.contains("verified: yes"));
    }
}
