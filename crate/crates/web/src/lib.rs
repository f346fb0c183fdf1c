//! Browser entry points. Every function takes and returns plain strings;
//! results are JSON objects, failures are `{"error": "..."}`.

use agclone_core::clone::{fingerprint as probe_fingerprint, PostClass};
use agclone_core::domains::DomainSet;
use agclone_core::rules::{classify_coalition as classify, CayleyRule, DecisiveCoalition, Rule, SpecialRule};
use agclone_core::{BooleanFunction, ChoiceFunction, Error, Result};
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

fn respond(r: Result<Value>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e.to_string() })).to_string()
}

/// Post class of a decisive coalition, e.g.
/// `{"n":3,"members":[[1,2],[2,3],[1,3],[1,2,3]]}`.
#[wasm_bindgen]
pub fn classify_coalition(coalition_json: &str) -> String {
    respond((|| {
        let k: DecisiveCoalition =
            serde_json::from_str(coalition_json).map_err(|e| Error::Parse(e.to_string()))?;
        let class = classify(&k)?;
        Ok(json!({
            "class": class,
            "equivalent_rule": SpecialRule::from_class(class),
            "monotone": k.is_monotone(),
            "dictator": k.dictator(),
            "parity_support": k.parity_support(),
            "members": k.members(),
        }))
    })())
}

/// Probe fingerprint of the clone generated by one Boolean function,
/// given as its truth table, row `0…0` first (`"00010111"` is the median).
#[wasm_bindgen]
pub fn fingerprint(truth_table: &str) -> String {
    respond((|| {
        let bits = truth_table.trim();
        let arity = bits.len().trailing_zeros() as usize;
        if bits.is_empty() || 1 << arity != bits.len() {
            return Err(Error::Parse(format!("truth table length {} is not a power of two", bits.len())));
        }
        let mut tt = 0u64;
        for (row, ch) in bits.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => tt |= 1 << row,
                _ => return Err(Error::Parse(format!("bad character {ch:?}"))),
            }
        }
        let h = BooleanFunction::new(arity, tt)?;
        let fp = probe_fingerprint(&[h])?;
        Ok(json!({
            "arity": arity,
            "fingerprint": fp.to_string(),
            "class": PostClass::from_fingerprint(fp),
            "self_dual": h.is_self_dual(),
            "monotone": h.is_monotone(),
            "linear": h.is_linear(),
        }))
    })())
}

fn named_rule(name: &str, m: usize) -> Result<Rule> {
    if let Ok(r) = name.parse::<SpecialRule>() {
        return r.rule(m);
    }
    let c: CayleyRule = name.parse()?;
    if c.m() != m {
        return Err(Error::SizeMismatch(format!("{name} is defined over {} alternatives", c.m())));
    }
    Ok(c.rule())
}

/// Whether a named rule (`delta`, `nu`, `lambda`, `mu`, `a3`, `a4`) keeps
/// a set of choice functions, given as whitespace- or comma-separated
/// bitstrings over the pairs in lexicographic order.
#[wasm_bindgen]
pub fn check_domain(rule: &str, m: u32, members: &str) -> String {
    respond((|| {
        let m = m as usize;
        let rule = named_rule(rule, m)?;
        let members = members
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| ChoiceFunction::from_bitstring(m, s))
            .collect::<Result<Vec<_>>>()?;
        let d = DomainSet::new(m, members)?;
        if d.is_empty() {
            return Err(Error::InvalidInput("no choice functions given".into()));
        }
        let violation = d.invariance_violation(&rule)?;
        Ok(json!({
            "size": d.len(),
            "invariant": violation.is_none(),
            "violation": violation.map(|(args, out)| json!({
                "inputs": args.iter().map(ChoiceFunction::to_bitstring).collect::<Vec<_>>(),
                "output": out.to_bitstring(),
            })),
            "symmetric": d.is_symmetric()?,
            "trivial": d.is_trivial()?,
            "rational": d.members().iter().all(ChoiceFunction::is_rational),
        }))
    })())
}
