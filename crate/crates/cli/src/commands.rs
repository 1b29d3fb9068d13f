//! Thin adapters from parsed arguments to library calls. Each returns the
//! `result` payload of the report and whether the verdict was negative.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use kbraid_core::biquandle::{constructed_library, FlatBiquandle};
use kbraid_core::coloring::propagate;
use kbraid_core::enumerate::{enumerate_with, EnumerationOptions};
use kbraid_core::vssb::{self, check_phi_well_defined, check_rho_respects, PhiCheckOptions};
use kbraid_core::*;
use serde_json::{json, Value};

pub struct Outcome {
    pub result: Value,
    pub negative: bool,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Outcome {
            result,
            negative: false,
        }
    }
}

/// A word given inline (with `n`, `k`) or as a file with an `n=.. k=..`
/// header.
pub fn load_word(n: Option<usize>, k: Option<usize>, text: Option<&str>, file: Option<&Path>) -> Result<FreeKBraidWord> {
    match (text, file) {
        (Some(_), Some(_)) => bail!("give either a word or --file, not both"),
        (None, Some(path)) => {
            let body = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Ok(parse_word_file(&body)?)
        }
        (Some(t), None) => {
            let (Some(n), Some(k)) = (n, k) else {
                bail!("--n and --k are required for an inline word");
            };
            Ok(FreeKBraidWord::parse(n, k, t)?)
        }
        (None, None) => bail!("no word given"),
    }
}

pub fn load_biquandle_file(path: &Path, skip_axioms: bool) -> Result<FiniteKBiquandle> {
    let body = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(load_biquandle(&body, skip_axioms)?)
}

/// Comma-separated nonnegative integers.
pub fn parse_list(s: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    let mut pos = 0;
    for part in s.split(',') {
        let t = part.trim();
        match t.parse::<usize>() {
            Ok(v) => out.push(v),
            Err(_) => bail!("bad entry `{t}` at byte {pos} of `{s}`"),
        }
        pos += part.len() + 1;
    }
    Ok(out)
}

fn words(path: &[FreeKBraidWord]) -> Vec<String> {
    path.iter().map(|w| w.to_string()).collect()
}

// --- gnk -------------------------------------------------------------------

pub fn gnk_reduce(w: &FreeKBraidWord) -> Outcome {
    let r = w.free_reduce();
    Outcome::ok(json!({
        "word": w.to_string(),
        "reduced": r.to_string(),
        "length": w.len(),
        "reduced_length": r.len(),
    }))
}

pub fn gnk_parity(w: &FreeKBraidWord) -> Outcome {
    let p = w.parity_vector();
    let bits: String = p.bits().iter().map(|&b| if b { '1' } else { '0' }).collect();
    Outcome::ok(json!({
        "word": w.to_string(),
        "dimension": p.dimension(),
        "bits": bits,
        "support": p.support().iter().map(|s| s.to_string()).collect::<Vec<_>>(),
    }))
}

pub fn gnk_eq(w1: &FreeKBraidWord, w2: &FreeKBraidWord, budget: SearchBudget, expect: Option<&str>) -> Result<Outcome> {
    let v = equal_bounded(w1, w2, budget)?;
    let mut result = json!({
        "left": w1.to_string(),
        "right": w2.to_string(),
        "verdict": v.label(),
    });
    match &v {
        Verdict::Equal { path } => {
            result["moves"] = json!(path.len() - 1);
            result["path"] = json!(words(path));
        }
        Verdict::Distinct { witness } => {
            result["witness"] = match witness {
                Witness::Parity { subset } => json!({"kind": "parity", "generator": subset.to_string()}),
                Witness::Coloring {
                    biquandle,
                    chi,
                    left,
                    right,
                } => json!({
                    "kind": "coloring",
                    "biquandle": biquandle,
                    "chi": chi,
                    "left_out": left,
                    "right_out": right,
                }),
            };
        }
        Verdict::Unknown { explored } => {
            result["explored"] = json!(explored);
        }
    }
    let negative = expect.is_some_and(|e| e != v.label());
    Ok(Outcome { result, negative })
}

// --- biq -------------------------------------------------------------------

pub fn biq_check(b: &FiniteKBiquandle) -> Outcome {
    let report = check_axioms(b);
    Outcome {
        negative: !report.passed(),
        result: json!({
            "k": b.k(),
            "m": b.m(),
            "passed": report.passed(),
            "checks": report.checks,
        }),
    }
}

fn file_value(b: &FiniteKBiquandle) -> Value {
    serde_json::to_value(b.to_file()).expect("serializable")
}

pub fn biq_make(b: &FiniteKBiquandle, name: &str) -> Outcome {
    Outcome::ok(json!({
        "name": name,
        "biquandle": file_value(b),
        "axioms_passed": check_axioms(b).passed(),
        "classification": classify(b),
    }))
}

pub fn parse_involution(m: usize, text: &str) -> Result<Involution> {
    let mut pairs = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let Some((a, b)) = part.split_once('-') else {
            bail!("bad transposition `{part}`; expected p-q");
        };
        pairs.push((a.trim().parse()?, b.trim().parse()?));
    }
    Ok(Involution::new(m, &pairs)?)
}

pub fn parse_mu(k: usize, tau: &Involution, text: &str) -> Result<MultiplicitySet> {
    let members = text
        .split(';')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(parse_list)
        .collect::<Result<Vec<_>>>()?;
    Ok(MultiplicitySet::new(k, tau.t(), members)?)
}

pub fn parse_flat(m: usize, star: &str, circ: Option<&str>) -> Result<FlatBiquandle> {
    let s = parse_list(star)?;
    let c = match circ {
        Some(c) => parse_list(c)?,
        None => s.clone(),
    };
    Ok(FlatBiquandle::new(m, s, c)?)
}

pub fn biq_iso(a: &FiniteKBiquandle, b: &FiniteKBiquandle, expect: Option<bool>) -> Outcome {
    let iso = is_isomorphic(a, b);
    Outcome {
        negative: expect.is_some_and(|e| e != iso),
        result: json!({
            "isomorphic": iso,
            "left_canonical": file_value(&a.canonical_form()),
            "right_canonical": file_value(&b.canonical_form()),
        }),
    }
}

pub fn biq_enum(m: usize, k: usize, nontrivial: bool, budget: u64) -> Result<Outcome> {
    let r = enumerate_with(
        m,
        k,
        EnumerationOptions {
            nontrivial_only: nontrivial,
            budget,
        },
    )?;
    let classes: Vec<Value> = r
        .classes
        .iter()
        .map(|c| {
            json!({
                "biquandle": file_value(&c.biquandle),
                "tag": c.classification.tag,
                "families": c.classification.families,
                "conditional": c.classification.conditional,
            })
        })
        .collect();
    Ok(Outcome::ok(json!({
        "m": r.m,
        "k": r.k,
        "nontrivial_only": r.nontrivial_only,
        "count": classes.len(),
        "classes": classes,
        "stats": r.stats,
    })))
}

pub fn biq_library(k: usize) -> Outcome {
    let entries: Vec<Value> = constructed_library(k)
        .iter()
        .map(|(name, b)| json!({"name": name, "m": b.m(), "passed": check_axioms(b).passed()}))
        .collect();
    Outcome::ok(json!({"k": k, "count": entries.len(), "entries": entries}))
}

// --- color -----------------------------------------------------------------

pub fn color_bind(w: &FreeKBraidWord, b: &FiniteKBiquandle, chi1: &[usize], chi2: &[usize], full: bool) -> Result<Outcome> {
    let value = binding_number(w, b, chi1, chi2)?;
    let (coloring, out) = propagate(w, b, chi1)?;
    let mut result = json!({
        "word": w.to_string(),
        "chi1": chi1,
        "chi2": chi2,
        "chi_out": out,
        "binding_number": value,
    });
    if full {
        result["coloring"] = json!({
            "edges": coloring.colors,
            "strands": coloring.graph.strand_edges,
        });
    }
    Ok(Outcome::ok(result))
}

pub fn color_count(w: &FreeKBraidWord, b: &FiniteKBiquandle) -> Result<Outcome> {
    let count = count_colorings(w, b)?;
    let expected = (b.m() as u64).checked_pow(w.n() as u32);
    Ok(Outcome {
        negative: Some(count) != expected,
        result: json!({"word": w.to_string(), "count": count, "m_pow_n": expected}),
    })
}

pub fn color_homs(w: &FreeKBraidWord, b: &FiniteKBiquandle) -> Result<Outcome> {
    let p = fundamental_presentation(w);
    let homs = hom_count(&p, b)?;
    let count = count_colorings(w, b)?;
    Ok(Outcome {
        negative: homs != count,
        result: json!({
            "word": w.to_string(),
            "generators": p.generators,
            "relations": p.relations.len(),
            "hom_count": homs,
            "count_colorings": count,
            "equal": homs == count,
        }),
    })
}

// --- vssb ------------------------------------------------------------------

pub fn vssb_phi(w: &VssbWord) -> Outcome {
    let g = phi(w);
    Outcome::ok(json!({
        "word": w.to_string(),
        "phi": g.to_string(),
        "phi_reduced": g.free_reduce().to_string(),
        "rho": rho(w).to_string(),
    }))
}

pub fn vssb_rho(w: &VssbWord) -> Outcome {
    let p = rho(w);
    Outcome::ok(json!({
        "word": w.to_string(),
        "rho": p.to_string(),
        "images": p.images(),
        "pure": p.is_identity(),
    }))
}

pub fn vssb_invariant(w: &VssbWord, b: &FiniteKBiquandle, chi1: &[usize], chi2: &[usize]) -> Result<Outcome> {
    let value = vssb::vssb_invariant(w, b, chi1, chi2)?;
    let g = phi(w);
    let (_, out) = propagate(&g, b, chi1)?;
    Ok(Outcome::ok(json!({
        "word": w.to_string(),
        "phi": g.to_string(),
        "chi1": chi1,
        "chi2": chi2,
        "chi_out": out,
        "binding_number": value,
    })))
}

pub fn vssb_verify(n: usize, family: vssb::Family, opts: PhiCheckOptions) -> Result<Outcome> {
    let rho_report = check_rho_respects(n, family)?;
    let phi_report = check_phi_well_defined(n, family, opts)?;
    let failures = phi_report.failures().len();
    let unknown: Vec<Value> = phi_report
        .unknowns()
        .iter()
        .map(|r| json!({"label": r.label, "params": r.params, "max_g_len": r.max_g_len}))
        .collect();
    let negative = failures > 0 || !phi_report.multiplicativity.failures.is_empty() || !rho_report.failures.is_empty();
    Ok(Outcome {
        negative,
        result: json!({
            "n": n,
            "family": family,
            "instances": phi_report.instances.len(),
            "failures": failures,
            "unknown": unknown,
            "rho": rho_report,
            "phi": phi_report,
        }),
    })
}
