//! WebAssembly bindings for the browser demo. Every export takes expression
//! strings and returns a JSON document; failures come back as
//! `{"error": "..."}`.

use gln_branching as gb;
use gln_branching::{GenericRep, MultiplicityAnswer, ParseError, PrincipalSeries};
use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

#[derive(Serialize)]
struct ErrorJson {
    error: String,
}

fn parse_msg(e: ParseError) -> String {
    format!("{}:{}: {}", e.line, e.column, e.message)
}

fn to_json<T: Serialize>(r: Result<T, String>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v),
        Err(error) => serde_json::to_string(&ErrorJson { error }),
    }
    .expect("serialisable")
}

/// `st` names the Steinberg of the right size; otherwise `Q(...)`, `Q[...]`
/// or a bare segment.
fn parse_target(ps: &PrincipalSeries, src: &str) -> Result<GenericRep, String> {
    let t = src.trim();
    if t.eq_ignore_ascii_case("st") {
        return GenericRep::steinberg(ps.total_size().saturating_sub(1)).map_err(|e| e.to_string());
    }
    if t.starts_with('Q') {
        return gb::parse_generic(t).map_err(parse_msg);
    }
    gb::parse_segment(t)
        .map(GenericRep::single)
        .map_err(parse_msg)
}

#[derive(Serialize)]
struct MultiplicityJson {
    series: String,
    target: String,
    answer: MultiplicityAnswer,
    good_pair: Option<gb::GoodPairVerdict>,
    euler_poincare: Option<bool>,
}

pub fn multiplicity_json(series: &str, target: &str) -> String {
    to_json((|| {
        let ps = gb::parse_series(series).map_err(parse_msg)?;
        let pi = parse_target(&ps, target)?;
        let answer = gb::multiplicity(&ps, &pi).map_err(|e| e.to_string())?;
        Ok(MultiplicityJson {
            series: ps.to_string(),
            target: pi.to_string(),
            good_pair: gb::is_good_pair(&ps, &pi).ok(),
            euler_poincare: gb::euler_poincare_check(&ps, &pi, &answer),
            answer,
        })
    })())
}

#[derive(Serialize)]
struct BadnessJson {
    letters: Vec<String>,
    pattern: Vec<String>,
    bad: bool,
    /// Positions of the first matching subsequence.
    matched: Option<Vec<usize>>,
}

pub fn badness_json(series: &str, segment: &str) -> String {
    to_json((|| {
        let ps = gb::parse_series(series).map_err(parse_msg)?;
        let d = gb::parse_segment(segment).map_err(parse_msg)?;
        let matched = gb::bad_subsequence(&ps, &d).map_err(|e| e.to_string())?;
        Ok(BadnessJson {
            letters: ps.factors().iter().map(|f| f.to_string()).collect(),
            pattern: gb::bad_pattern(&d).iter().map(|c| c.to_string()).collect(),
            bad: matched.is_some(),
            matched,
        })
    })())
}

#[derive(Serialize)]
struct SubquotientJson {
    index: u32,
    multisegment: String,
    embedding_params: Option<gb::EmbeddingParams>,
    langlands_note: Option<(String, String)>,
}

pub fn subquotients_json(n: u32) -> String {
    to_json(
        gb::steinberg_subquotients(n)
            .map(|list| {
                list.into_iter()
                    .map(|d| SubquotientJson {
                        index: d.index,
                        multisegment: d.multisegment.to_string(),
                        embedding_params: d.embedding_params,
                        langlands_note: d.langlands_note,
                    })
                    .collect::<Vec<_>>()
            })
            .map_err(|e| e.to_string()),
    )
}

#[wasm_bindgen]
pub fn multiplicity(series: &str, target: &str) -> String {
    multiplicity_json(series, target)
}

#[wasm_bindgen]
pub fn badness(series: &str, segment: &str) -> String {
    badness_json(series, segment)
}

#[wasm_bindgen]
pub fn subquotients(n: u32) -> String {
    subquotients_json(n)
}
