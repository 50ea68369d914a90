//! Number formatting shared by the CSV writers.

/// Shortest decimal that parses back to the same `f64`; non-finite values
/// are written as `nan`, `inf`, `-inf`.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        // `Debug` switches to exponent notation for very large and small
        // magnitudes and always round-trips.
        format!("{x:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::num;
    use proptest::prelude::*;

    #[test]
    fn specials() {
        assert_eq!(num(f64::NAN), "nan");
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!(num(f64::NEG_INFINITY), "-inf");
        assert_eq!(num(0.5), "0.5");
    }

    proptest! {
        #[test]
        fn round_trips(bits in any::<u64>()) {
            let x = f64::from_bits(bits);
            prop_assume!(x.is_finite());
            prop_assert_eq!(num(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }
}
