//! Canonical number rendering shared by the catalog format and CSV output.

/// Shortest decimal rendering of a finite f64 that parses back to the
/// same bits (Rust's `{:?}` float formatting).
pub fn render_f64(x: f64) -> String {
    format!("{x:?}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_exactly() {
        for v in [0.762, 1.25e-9, 64_000.0, 13.6, 2.7809, 1.42e12, 0.0, 3381.0] {
            let s = render_f64(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
    }

    #[test]
    fn is_deterministic_and_short() {
        assert_eq!(render_f64(13.6), "13.6");
        assert_eq!(render_f64(1.25e-9), "1.25e-9");
        assert_eq!(render_f64(245.0), "245.0");
    }
}
