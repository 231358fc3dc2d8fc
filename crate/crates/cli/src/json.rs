//! JSON encodings: coproduct elements, matrices and presentations, and the
//! report objects the commands emit. Maps serialize with sorted keys, so
//! identical invocations produce byte-identical output.

use crate::expr::{parse_element, parse_series, render_element, render_series};
use crate::ringspec::{parse_ring_spec, render_ring_spec};
use amalg_core::coproduct::{AlternatingType, CoproductElement, SubringSpec};
use amalg_core::freegroup::SweepReport;
use amalg_core::modlab::{MatrixOverRing, Presentation};
use amalg_core::witnesses::WitnessReport;
use amalg_core::{Alphabet, BaseRingElement, NcSeries, RingSpec};
use serde_json::{json, Map, Value};

fn field<'v>(value: &'v Value, name: &str) -> Result<&'v Value, String> {
    value.get(name).ok_or_else(|| format!("missing field `{name}`"))
}

fn string_field<'v>(value: &'v Value, name: &str) -> Result<&'v str, String> {
    field(value, name)?.as_str().ok_or_else(|| format!("field `{name}` must be a string"))
}

fn usize_field(value: &Value, name: &str) -> Result<usize, String> {
    field(value, name)?
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| format!("field `{name}` must be a nonnegative integer"))
}

// ---------------------------------------------------------------------------
// coproduct elements

/// `{"ring": "z", "degree": 4, "scalar": "1", "components":
///   [{"type": "ab", "tensors": [["a - a^2", "b"], …]}, …]}`
///
/// Tensor slots are series expressions over the single letter named by their
/// position in the type pattern. The CLI works with the full-series factor
/// pair over letters `a` and `b`.
pub fn coproduct_from_json(value: &Value) -> Result<CoproductElement, String> {
    let ring = parse_ring_spec(string_field(value, "ring")?)?;
    let degree = usize_field(value, "degree")?;
    let scalar = parse_element(string_field(value, "scalar")?, &ring).map_err(|e| e.to_string())?;
    let left = SubringSpec::full(b'a');
    let right = SubringSpec::full(b'b');
    let mut out = CoproductElement::scalar_element(&ring, degree, left, right, scalar)
        .map_err(|e| e.to_string())?;
    let components = field(value, "components")?
        .as_array()
        .ok_or("field `components` must be an array")?;
    for component in components {
        let pattern = string_field(component, "type")?;
        if pattern.is_empty() {
            return Err("the empty type is carried by the `scalar` field".to_string());
        }
        if !pattern.bytes().all(|b| b == b'a' || b == b'b') {
            return Err(format!("type `{pattern}` must use letters a and b"));
        }
        let tensors = field(component, "tensors")?
            .as_array()
            .ok_or("field `tensors` must be an array")?;
        for tensor in tensors {
            let slots_json = tensor.as_array().ok_or("each tensor must be an array of series")?;
            if slots_json.len() != pattern.len() {
                return Err(format!(
                    "type `{pattern}` needs {} slots, found {}",
                    pattern.len(),
                    slots_json.len()
                ));
            }
            let mut slots: Vec<NcSeries> = Vec::with_capacity(slots_json.len());
            for (slot, letter) in slots_json.iter().zip(pattern.bytes()) {
                let text = slot.as_str().ok_or("tensor slots must be series strings")?;
                let alphabet = Alphabet::single(letter);
                let series =
                    parse_series(text, &ring, &alphabet, degree).map_err(|e| e.to_string())?;
                slots.push(series);
            }
            out = out.with_tensor(slots).map_err(|e| e.to_string())?;
        }
    }
    Ok(out)
}

pub fn coproduct_to_json(element: &CoproductElement) -> Value {
    let components: Vec<Value> = element
        .components()
        .iter()
        .map(|(t, tensors)| {
            let tensors: Vec<Value> = tensors
                .iter()
                .map(|slots| {
                    Value::Array(
                        slots.iter().map(|s| Value::String(render_series(s))).collect(),
                    )
                })
                .collect();
            json!({"type": render_type(t), "tensors": tensors})
        })
        .collect();
    json!({
        "ring": render_ring_spec(element.ring()),
        "degree": element.degree(),
        "scalar": render_element(element.scalar()),
        "components": components,
    })
}

pub fn render_type(t: &AlternatingType) -> String {
    t.to_string()
}

// ---------------------------------------------------------------------------
// matrices and presentations

/// A matrix is a nested array of ring-element strings: `[["2", "0"], …]`.
pub fn matrix_from_json(value: &Value, ring: &RingSpec) -> Result<MatrixOverRing, String> {
    let rows = value.as_array().ok_or("a matrix must be an array of rows")?;
    let mut parsed: Vec<Vec<BaseRingElement>> = Vec::with_capacity(rows.len());
    for row in rows {
        let entries = row.as_array().ok_or("each matrix row must be an array")?;
        let mut out_row = Vec::with_capacity(entries.len());
        for entry in entries {
            let text = entry.as_str().ok_or("matrix entries must be ring-element strings")?;
            out_row.push(parse_element(text, ring).map_err(|e| e.to_string())?);
        }
        parsed.push(out_row);
    }
    MatrixOverRing::from_rows(ring, parsed).map_err(|e| e.to_string())
}

pub fn matrix_to_json(matrix: &MatrixOverRing) -> Value {
    Value::Array(
        matrix
            .row_vectors()
            .map(|row| {
                Value::Array(row.iter().map(|e| Value::String(render_element(e))).collect())
            })
            .collect(),
    )
}

/// `{"n": 1, "gens": [["2"]]}`: the rows of `gens` generate a submodule of
/// `R^n`.
pub fn presentation_from_json(value: &Value, ring: &RingSpec) -> Result<Presentation, String> {
    let n = usize_field(value, "n")?;
    let gens = matrix_from_json(field(value, "gens")?, ring)?;
    if gens.cols() != n {
        return Err(format!("gens rows have {} columns, expected n = {n}", gens.cols()));
    }
    Ok(Presentation::new(gens))
}

// ---------------------------------------------------------------------------
// reports

pub fn witness_report_to_json(report: &WitnessReport) -> Value {
    json!({
        "name": report.name,
        "zero_image_verified": report.zero_image_verified,
        "nonzero_verified": report.nonzero_verified,
        "nonzero_certificate": report.nonzero_certificate,
        "windows": report.windows,
        "passed": report.passed(),
    })
}

pub fn sweep_report_to_json(
    ring: &RingSpec,
    max_len: usize,
    degree: usize,
    report: &SweepReport,
) -> Value {
    let collisions: Vec<Value> = report
        .collisions
        .iter()
        .map(|(a, b)| {
            json!([crate::words::render_word(a), crate::words::render_word(b)])
        })
        .collect();
    json!({
        "ring": render_ring_spec(ring),
        "max_len": max_len,
        "degree": degree,
        "words": report.words,
        "distinct": report.distinct,
        "collisions": collisions,
        "all_distinct": report.all_distinct(),
    })
}

/// Sorted-key object from label/value pairs.
pub fn object(pairs: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (k, v) in pairs {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coproduct_round_trip() {
        let input = json!({
            "ring": "z",
            "degree": 3,
            "scalar": "2",
            "components": [
                {"type": "ab", "tensors": [["a - a^2", "b"]]},
                {"type": "a", "tensors": [["a^3"]]},
            ],
        });
        let element = coproduct_from_json(&input).unwrap();
        let encoded = coproduct_to_json(&element);
        let decoded = coproduct_from_json(&encoded).unwrap();
        assert_eq!(element, decoded);
        assert_eq!(encoded, coproduct_to_json(&decoded));
    }

    #[test]
    fn rejects_malformed_components() {
        let bad_arity = json!({
            "ring": "z", "degree": 2, "scalar": "0",
            "components": [{"type": "ab", "tensors": [["a"]]}],
        });
        assert!(coproduct_from_json(&bad_arity).is_err());
        let constant_slot = json!({
            "ring": "z", "degree": 2, "scalar": "0",
            "components": [{"type": "a", "tensors": [["1 + a"]]}],
        });
        assert!(coproduct_from_json(&constant_slot).is_err());
    }

    #[test]
    fn presentation_parsing() {
        let ring = parse_ring_spec("zmod:4").unwrap();
        let p = presentation_from_json(&json!({"n": 1, "gens": [["2"]]}), &ring).unwrap();
        assert_eq!(p.rank(), 1);
        assert!(presentation_from_json(&json!({"n": 2, "gens": [["2"]]}), &ring).is_err());
    }
}
