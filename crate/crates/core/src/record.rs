//! Line-delimited JSON records and the append-only scan cache.
//!
//! Every integer that can outgrow 53 bits is written as a decimal string.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::{FactorResult, SquarefreeVerdict};
use crate::dedekind::PrimeVerdict;
use crate::family::IrreducibilityVerdict;
use crate::index::{CrossCheck, FamilyScanRow, IndexReport, IndexValue, Monogenic};
use crate::poly_mod::ModFactorization;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub schema_version: String,
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub diagnostics: Vec<String>,
}

impl OutputRecord {
    pub fn new(command: &str, inputs: Value, result: Value, diagnostics: Vec<String>) -> Self {
        OutputRecord {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            inputs,
            result,
            diagnostics,
        }
    }

    /// One line of JSON, without the trailing newline.
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }

    pub fn from_line(line: &str) -> serde_json::Result<Self> {
        serde_json::from_str(line)
    }

    /// `(n, a, schema_version, effort)` for scan records.
    pub fn cache_key(&self) -> Option<CacheKey> {
        Some(CacheKey {
            n: self.inputs.get("n")?.as_u64()? as u32,
            a: self.inputs.get("a")?.as_str()?.to_string(),
            schema_version: self.schema_version.clone(),
            effort: self.inputs.get("effort")?.as_str()?.to_string(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CacheKey {
    pub n: u32,
    pub a: String,
    pub schema_version: String,
    pub effort: String,
}

pub fn factors_json(fr: &FactorResult) -> Value {
    json!({
        "sign": fr.sign,
        "factors": fr.factors.iter().map(|pp| json!({
            "prime": pp.prime.to_string(),
            "exponent": pp.exponent,
        })).collect::<Vec<_>>(),
        "cofactor": fr.cofactor.to_string(),
        "complete": fr.complete,
        "display": fr.to_string(),
    })
}

pub fn squarefree_json(v: &SquarefreeVerdict) -> Value {
    match v {
        SquarefreeVerdict::NotSquarefree(pp) => json!({
            "verdict": v.as_str(),
            "witness": {"prime": pp.prime.to_string(), "exponent": pp.exponent},
        }),
        _ => json!({"verdict": v.as_str()}),
    }
}

pub fn irreducibility_json(v: &IrreducibilityVerdict) -> Value {
    match v {
        IrreducibilityVerdict::Irreducible(cert) => json!({"verdict": v.as_str(), "certificate": cert.to_string()}),
        IrreducibilityVerdict::Reducible(g) => json!({
            "verdict": v.as_str(),
            "factor": g.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "factor_display": g.to_string(),
        }),
        IrreducibilityVerdict::Unknown => json!({"verdict": v.as_str()}),
    }
}

pub fn verdict_json(v: &PrimeVerdict) -> Value {
    let opt = |x: &Option<num_bigint::BigUint>| x.as_ref().map(|b| b.to_string());
    json!({
        "prime": v.prime.to_string(),
        "divides_index": v.divides_index,
        "case_tag": v.case_tag,
        "case": v.case_tag.label(),
        "condition": v.case_tag.condition(),
        "evidence": {
            "a_valuation": v.evidence.a_valuation,
            "n_valuation": v.evidence.n_valuation,
            "a_pow_mod_p2": opt(&v.evidence.a_pow_mod_p2),
            "a_mod_p2": opt(&v.evidence.a_mod_p2),
            "disc_valuation": v.evidence.disc_valuation,
            "tail_valuation": v.evidence.tail_valuation,
        },
    })
}

pub fn index_json(v: &IndexValue) -> Value {
    match v {
        IndexValue::Exact(x) => json!({"kind": "exact", "value": x.to_string()}),
        IndexValue::AtLeast { value, undetermined } => json!({
            "kind": "at_least",
            "value": value.to_string(),
            "undetermined": undetermined.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
        }),
        IndexValue::Undefined => json!({"kind": "undefined"}),
    }
}

pub fn monogenic_json(m: &Monogenic) -> Value {
    json!({"verdict": m.as_str(), "reason": m.reason()})
}

fn cross_check_json(cc: &CrossCheck) -> Value {
    let strs = |v: &[num_bigint::BigUint]| v.iter().map(|q| q.to_string()).collect::<Vec<_>>();
    json!({
        "checked": strs(&cc.checked),
        "mismatches": strs(&cc.mismatches),
        "skipped": strs(&cc.skipped),
    })
}

pub fn report_json(r: &IndexReport) -> Value {
    json!({
        "polynomial": r.params.to_string(),
        "irreducibility": irreducibility_json(&r.irreducibility),
        "disc": r.disc.to_string(),
        "disc_sign": r.disc_sign,
        "disc_factors": r.disc_factors.as_ref().map(factors_json),
        "verdicts": r.verdicts.iter().map(verdict_json).collect::<Vec<_>>(),
        "index": index_json(&r.index),
        "monogenic": monogenic_json(&r.monogenic),
        "cross_check": r.cross_check.as_ref().map(cross_check_json),
    })
}

pub fn scan_row_json(row: &FamilyScanRow) -> Value {
    json!({
        "p": row.p,
        "h": row.h.to_string(),
        "h_factors": factors_json(&row.h_factors),
        "h_squarefree": squarefree_json(&row.h_squarefree),
        "index": index_json(&row.index),
        "monogenic": monogenic_json(&row.monogenic),
    })
}

pub fn mod_factorization_json(f: &ModFactorization) -> Value {
    json!({
        "modulus": f.modulus.to_string(),
        "unit": f.unit.to_string(),
        "factors": f.factors.iter().map(|(g, e)| json!({
            "coeffs": g.coeffs().iter().map(u64::to_string).collect::<Vec<_>>(),
            "display": g.to_string(),
            "multiplicity": e,
        })).collect::<Vec<_>>(),
        "display": f.to_string(),
    })
}

/// Reads every well-formed record of a cache file. A missing file is an
/// empty cache; unparsable lines are skipped and counted.
pub fn read_cache(path: &Path) -> io::Result<(HashMap<CacheKey, OutputRecord>, usize)> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok((HashMap::new(), 0)),
        Err(e) => return Err(e),
    };
    let mut map = HashMap::new();
    let mut bad = 0;
    for line in BufReader::new(file).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match OutputRecord::from_line(&line).ok().and_then(|r| Some((r.cache_key()?, r))) {
            Some((key, rec)) => {
                map.insert(key, rec);
            }
            None => bad += 1,
        }
    }
    Ok((map, bad))
}

/// Single appender for a cache file.
pub struct CacheWriter {
    file: File,
}

impl CacheWriter {
    pub fn open(path: &Path) -> io::Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(CacheWriter { file })
    }

    pub fn append(&mut self, record: &OutputRecord) -> io::Result<()> {
        writeln!(self.file, "{}", record.to_line())?;
        self.file.flush()
    }
}
