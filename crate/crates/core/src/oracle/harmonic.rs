use super::OracleError;

/// `H_m = 1 + 1/2 + … + 1/m`, and `0` for `m <= 0`.
pub fn harmonic(m: i64) -> f64 {
    // summed smallest-first to keep rounding low for large m
    (1..=m.max(0)).rev().fold(0.0, |acc, k| acc + 1.0 / k as f64)
}

/// `H_q + H_(q-1) + … + H_(q-δ+1)`: the expected-move envelope for
/// randomized greedy on a uniform space with `q` servers and `δ` requests
/// that have no server at their point.
pub fn uniform_bound(q: i64, delta: i64) -> Result<f64, OracleError> {
    if delta < 0 {
        return Err(OracleError::NegativeDelta(delta));
    }
    if delta > q {
        return Err(OracleError::DeltaTooLarge { q, delta });
    }
    Ok((0..delta).fold(0.0, |acc, j| acc + harmonic(q - j)))
}
