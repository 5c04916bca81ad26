//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes plain strings and numbers and returns a JSON string, so
//! the page needs no generated TypeScript types. The `*_json` functions hold
//! the logic and are what the native tests exercise.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use permcodec::coloring::{canonical_coloring, green_mask, ColoringParams};
use permcodec::perm::Extremal;
use permcodec::wordcount::{closed_form, RecurrenceCounter};
use permcodec::{decode_m, encode_m, CodePair, Parity, Permutation, Word, WordFamily};

/// Largest word length the count plot will ask for.
pub const MAX_WORD_LENGTH: usize = 60;

#[derive(Serialize)]
struct Encoded {
    w: String,
    wp: String,
    /// Top-level color of each entry: "red"/"blue" for even k, "green"/"yellow"
    /// for odd k >= 5, "max"/"other" (right-to-left maxima) for k = 3.
    colors: Vec<&'static str>,
    values: Vec<u32>,
}

#[derive(Serialize)]
struct Decoded {
    permutation: String,
    values: Vec<u32>,
}

#[derive(Serialize)]
struct CountRow {
    n: usize,
    count: String,
    log10: f64,
    closed_form: f64,
}

fn top_level_colors(p: &Permutation, k: usize) -> Result<Vec<&'static str>, String> {
    let paint = |marked: &'static str, unmarked: &'static str, mask: Vec<bool>| {
        mask.into_iter().map(|b| if b { marked } else { unmarked }).collect()
    };
    Ok(match k {
        3 => paint("max", "other", p.extremal_mask(Extremal::RightToLeftMax).0),
        _ if k.is_multiple_of(2) => {
            let params = ColoringParams::for_even_pattern(k).map_err(|e| e.to_string())?;
            paint("red", "blue", canonical_coloring(p, &params).0)
        }
        _ => paint("green", "yellow", green_mask(p, (k - 1) / 2).map_err(|e| e.to_string())?.0),
    })
}

pub fn encode_json(perm: &str, k: usize) -> Result<String, String> {
    let p: Permutation = perm.trim().parse().map_err(|e: permcodec::Error| e.to_string())?;
    let pair = encode_m(&p, k).map_err(|e| e.to_string())?;
    let out = Encoded {
        w: pair.w.to_string(),
        wp: pair.wp.to_string(),
        colors: top_level_colors(&p, k)?,
        values: p.into_values(),
    };
    Ok(serde_json::to_string(&out).expect("serializes"))
}

pub fn decode_json(w: &str, wp: &str, k: usize) -> Result<String, String> {
    let word = |s: &str| s.trim().parse::<Word>().map_err(|e| e.to_string());
    let pair = CodePair::new(word(w)?, word(wp)?).map_err(|e| e.to_string())?;
    let p = decode_m(&pair, k).map_err(|e| e.to_string())?;
    let out = Decoded {
        permutation: p.to_string(),
        values: p.into_values(),
    };
    Ok(serde_json::to_string(&out).expect("serializes"))
}

pub fn word_counts_json(m: usize, parity: &str, n_max: usize) -> Result<String, String> {
    if n_max > MAX_WORD_LENGTH {
        return Err(format!("n_max is limited to {MAX_WORD_LENGTH}"));
    }
    let parity: Parity = parity.parse().map_err(|e: permcodec::Error| e.to_string())?;
    let family = WordFamily::new(m, parity).map_err(|e| e.to_string())?;
    let form = closed_form(family);
    let mut counter = RecurrenceCounter::new(family);
    let rows: Vec<CountRow> = (0..=n_max)
        .map(|n| {
            let count = counter.count(n);
            let text = count.to_string();
            CountRow {
                n,
                log10: log10_decimal(&text),
                count: text,
                closed_form: form.evaluate(n),
            }
        })
        .collect();
    Ok(serde_json::to_string(&rows).expect("serializes"))
}

/// log10 of a decimal string, accurate enough for plotting huge counts.
fn log10_decimal(text: &str) -> f64 {
    let head: f64 = text[..text.len().min(15)].parse().unwrap_or(0.0);
    head.log10() + text.len().saturating_sub(15) as f64
}

#[wasm_bindgen]
pub fn encode(perm: &str, k: usize) -> Result<String, JsValue> {
    encode_json(perm, k).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn decode(w: &str, wp: &str, k: usize) -> Result<String, JsValue> {
    decode_json(w, wp, k).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn word_counts(m: usize, parity: &str, n_max: usize) -> Result<String, JsValue> {
    word_counts_json(m, parity, n_max).map_err(|e| JsValue::from_str(&e))
}
