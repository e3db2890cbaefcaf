use crate::error::{Error, Result};
use crate::estimation::{linear_spaced, log_spaced};

/// Parses `start:stop:count` into `count` values, evenly or logarithmically
/// spaced, endpoints included.
pub fn parse_range(text: &str, log: bool) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, count] = parts.as_slice() else {
        return Err(Error::invalid(
            "range",
            format!("expected start:stop:count, got {text:?}"),
        ));
    };
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::invalid("range", format!("not a number: {s:?}")))
    };
    let (start, stop) = (num(start)?, num(stop)?);
    let count: usize = count
        .trim()
        .parse()
        .map_err(|_| Error::invalid("range", format!("bad count: {count:?}")))?;
    if count == 0 {
        return Err(Error::invalid("range", "count must be at least 1"));
    }
    if log {
        if !(start > 0.0 && stop > 0.0) {
            return Err(Error::invalid(
                "range",
                "logarithmic spacing needs positive endpoints",
            ));
        }
        Ok(log_spaced(start, stop, count))
    } else {
        Ok(linear_spaced(start, stop, count))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_and_log() {
        assert_eq!(
            parse_range("0:1:5", false).unwrap(),
            vec![0.0, 0.25, 0.5, 0.75, 1.0]
        );
        let l = parse_range("0.001:0.1:3", true).unwrap();
        assert_eq!(l[0], 0.001);
        assert!((l[1] - 0.01).abs() < 1e-15);
        assert_eq!(l[2], 0.1);
    }

    #[test]
    fn malformed() {
        for bad in ["1:2", "a:1:3", "0:1:0", "0:1:x", "1:2:3:4"] {
            assert!(parse_range(bad, false).is_err(), "{bad}");
        }
        assert!(parse_range("0:1:4", true).is_err());
    }
}
