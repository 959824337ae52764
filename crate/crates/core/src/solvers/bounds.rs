use crate::error::{Error, Result};

/// Additive approximation guarantee of ℓ-swap local search on binary
/// natural instances with `num_attributes` attributes and committee size
/// `k`.
///
/// `ℓ = 1` gives `|X|`; `ℓ = 2` gives
/// `ln(k/2) / (2·ln(k/2) − 1) · (|X| + 6|X|/k)`, defined for `k ≥ 4`.
pub fn approximation_bound(radius: usize, num_attributes: usize, k: usize) -> Result<f64> {
    let x = num_attributes as f64;
    match radius {
        1 => Ok(x),
        2 if num_attributes == 0 => Ok(0.0),
        2 => {
            if k == 0 {
                return Err(Error::Domain("committee size must be positive".into()));
            }
            let log = (k as f64 / 2.0).ln();
            let denominator = 2.0 * log - 1.0;
            if denominator <= 0.0 {
                return Err(Error::Domain(format!(
                    "the ℓ = 2 bound needs 2·ln(k/2) > 1, got k = {k}"
                )));
            }
            Ok(log / denominator * (x + 6.0 * x / k as f64))
        }
        other => Err(Error::UnsupportedParameter(format!(
            "no approximation bound is known for swap radius {other}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_one_is_attribute_count() {
        assert_eq!(approximation_bound(1, 7, 3).unwrap(), 7.0);
        assert_eq!(approximation_bound(1, 7, 100).unwrap(), 7.0);
    }

    #[test]
    fn radius_two_formula() {
        let b = approximation_bound(2, 7, 8).unwrap();
        let ln4 = 4f64.ln();
        assert!((b - ln4 / (2.0 * ln4 - 1.0) * (7.0 + 42.0 / 8.0)).abs() < 1e-12);
        assert!((b - 9.58).abs() < 1e-3);
        assert_eq!(approximation_bound(2, 0, 8).unwrap(), 0.0);
    }

    #[test]
    fn domain_and_radius_errors() {
        assert!(matches!(approximation_bound(2, 7, 3), Err(Error::Domain(_))));
        assert!(matches!(approximation_bound(2, 7, 2), Err(Error::Domain(_))));
        assert!(approximation_bound(2, 7, 4).is_ok());
        assert!(matches!(
            approximation_bound(3, 7, 8),
            Err(Error::UnsupportedParameter(_))
        ));
        assert!(matches!(
            approximation_bound(0, 7, 8),
            Err(Error::UnsupportedParameter(_))
        ));
    }
}
