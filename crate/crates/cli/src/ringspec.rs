//! Ring spec strings: `z`, `zmod:<n>`, `q`, `prod:q^<k>`, `idem:<n>`,
//! `sqzero:<n>`, `monsub`, parsed case-insensitively.

use amalg_core::RingSpec;

pub fn parse_ring_spec(input: &str) -> Result<RingSpec, String> {
    let lower = input.trim().to_ascii_lowercase();
    match lower.as_str() {
        "z" => return Ok(RingSpec::Integers),
        "q" => return Ok(RingSpec::Rationals),
        "monsub" => return Ok(RingSpec::monomial_subring()),
        _ => {}
    }
    if let Some(n) = lower.strip_prefix("zmod:") {
        let n: u64 = n.parse().map_err(|_| format!("bad modulus in ring spec `{input}`"))?;
        return RingSpec::integers_mod(n).map_err(|e| e.to_string());
    }
    if let Some(k) = lower.strip_prefix("prod:q^") {
        let k: usize = k.parse().map_err(|_| format!("bad copy count in ring spec `{input}`"))?;
        return RingSpec::product(RingSpec::Rationals, k).map_err(|e| e.to_string());
    }
    if let Some(n) = lower.strip_prefix("idem:") {
        let n: usize = n.parse().map_err(|_| format!("bad rank in ring spec `{input}`"))?;
        return Ok(RingSpec::idempotent(n));
    }
    if let Some(n) = lower.strip_prefix("sqzero:") {
        let n: usize = n.parse().map_err(|_| format!("bad rank in ring spec `{input}`"))?;
        return Ok(RingSpec::square_zero(n));
    }
    Err(format!(
        "unknown ring spec `{input}` (expected z, zmod:<n>, q, prod:q^<k>, idem:<n>, sqzero:<n>, monsub)"
    ))
}

pub fn render_ring_spec(spec: &RingSpec) -> String {
    spec.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_and_case_insensitivity() {
        for s in ["z", "zmod:6", "q", "prod:q^8", "idem:4", "sqzero:2", "monsub"] {
            let spec = parse_ring_spec(s).unwrap();
            assert_eq!(render_ring_spec(&spec), s);
        }
        assert_eq!(parse_ring_spec("ZMod:4"), parse_ring_spec("zmod:4"));
        assert!(parse_ring_spec("zmod:1").is_err());
        assert!(parse_ring_spec("gf:9").is_err());
    }
}
