//! Browser bindings: each export takes plain arguments and returns a JSON
//! string for the demo page in `www/`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use circmax::conjectures;
use circmax::engine::{self, SearchConfig};
use circmax::modfield::exact_determinant;
use circmax::reference;
use circmax::spectral::{self, Alphabet, CirculantSpec, PolynomialClass};
use circmax::words::{self, Word};

/// Largest order the page will search; keeps the tab responsive.
pub const MAX_SEARCH_ORDER: u32 = 24;

fn alphabet(flag: &str) -> Result<Alphabet, String> {
    flag.parse().map_err(|e: circmax::Error| e.to_string())
}

fn s<T: ToString>(v: T) -> Value {
    Value::String(v.to_string())
}

/// Maximal `|det|` over circulants of order `n`, with the table row if any.
pub fn search_max_json(n: u32, flag: &str) -> Result<Value, String> {
    if !(1..=MAX_SEARCH_ORDER).contains(&n) {
        return Err(format!("order must be in 1..={MAX_SEARCH_ORDER}"));
    }
    let a = alphabet(flag)?;
    let r = engine::search(n as usize, a, &SearchConfig::default()).map_err(|e| e.to_string())?;
    let decimal = words::word_to_decimal(&r.lex_least_word);
    let table = reference::table_lookup(n as usize, a);
    let scaled = r.scaled();
    let matches = table.map(|row| {
        row.value == scaled.clone().unwrap_or_else(|| r.max_abs_det.clone())
            && row.decimal == decimal
    });
    Ok(json!({
        "n": n,
        "alphabet": a.flag(),
        "max_abs_det": s(&r.max_abs_det),
        "scaled_det": scaled.map(s),
        "upper_bound": s(&r.upper_bound),
        "ratio": r.ratio,
        "lex_least_word": a.render(&r.lex_least_word),
        "lex_least_decimal": s(decimal),
        "candidates": s(r.candidates_examined),
        "matches_table": matches,
    }))
}

/// `det A_n(x)` on `samples + 1` evenly spaced points of `[0, 1]`, plus the
/// interior maximum and the order's maximum over `{0,1}` circulants.
pub fn ura_curve_json(n: u32, samples: u32) -> Result<Value, String> {
    let n = u64::from(n);
    let k = conjectures::ura_k(n).map_err(|e| e.to_string())?;
    let samples = samples.clamp(2, 2000);
    let poly = conjectures::ura_polynomial(n).map_err(|e| e.to_string())?;
    let points: Vec<[f64; 2]> = (0..=samples)
        .map(|i| {
            let x = BigRational::new(BigInt::from(i), BigInt::from(samples));
            let y = poly.eval(&x).to_f64().unwrap_or(f64::NAN);
            [f64::from(i) / f64::from(samples), y]
        })
        .collect();
    let m = conjectures::ura_local_max(k).map_err(|e| e.to_string())?;
    let table_max = reference::table_lookup(n as usize, Alphabet::Binary01).map(|r| s(&r.value));
    Ok(json!({
        "n": n,
        "k": k,
        "points": points,
        "x_k": m.x_k,
        "det_at_x_k": m.det_at_x_k,
        "det_at_half": m.det_at_half,
        "bound": s(circmax::bounds::u01_bound(n as usize)),
        "table_max": table_max,
    }))
}

fn parse_word(text: &str, n: u32) -> Result<Word, String> {
    let t = text.trim();
    if !t.is_empty() && t.chars().all(|c| matches!(c, '-' | '+')) {
        return Word::from_pm_str(t).map_err(|e| e.to_string());
    }
    if n > 0 {
        let v: u64 = t
            .parse()
            .map_err(|_| format!("{t:?} is neither a word nor a decimal"))?;
        return words::decimal_to_word(v, n as usize).map_err(|e| e.to_string());
    }
    t.parse().map_err(|e: circmax::Error| e.to_string())
}

/// Determinant, Gram first row and necklace data for one first row. `text`
/// is a `0/1` or `-/+` word, or a decimal when `n > 0`.
pub fn inspect_word_json(text: &str, n: u32, flag: &str) -> Result<Value, String> {
    let a = alphabet(flag)?;
    let w = parse_word(text, n)?;
    let spec = CirculantSpec::new(a, w);
    let det = exact_determinant(&spec).map_err(|e| e.to_string())?;
    let gram = spectral::gram_first_row(&spec);
    let signed = spectral::signed_gram_first_row(&w);
    let necklace = (0..w.len()).map(|r| w.rotate_left(r)).min().unwrap_or(w);
    let class = match spectral::classify_polynomial(&spectral::associated_polynomial(&spec)) {
        PolynomialClass::Littlewood => "Littlewood",
        PolynomialClass::Newman => "Newman",
        PolynomialClass::Other => "other",
    };
    Ok(json!({
        "n": w.len(),
        "alphabet": a.flag(),
        "word": a.render(&w),
        "decimal": s(words::word_to_decimal(&w)),
        "is_necklace": words::is_necklace(&w),
        "necklace": a.render(&necklace),
        "det": s(&det),
        "upper_bound": s(engine::upper_bound(w.len(), a)),
        "gram_row": gram,
        "flat_signed_gram": spectral::is_flat_correlation(&signed),
        "polynomial_class": class,
    }))
}

fn to_js(r: Result<Value, String>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn search_max(n: u32, alphabet: &str) -> Result<String, JsError> {
    to_js(search_max_json(n, alphabet))
}

#[wasm_bindgen]
pub fn ura_curve(n: u32, samples: u32) -> Result<String, JsError> {
    to_js(ura_curve_json(n, samples))
}

#[wasm_bindgen]
pub fn inspect_word(text: &str, n: u32, alphabet: &str) -> Result<String, JsError> {
    to_js(inspect_word_json(text, n, alphabet))
}
