use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `(L, performance)` points with the normalized trapezoid area.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerformanceCurve {
    pub points: Vec<(usize, f64)>,
    pub area: f64,
}

/// Trapezoid area under the curve divided by `L_max - L_min`.
pub fn curve_and_area(points: &[(usize, f64)]) -> Result<PerformanceCurve> {
    if points.len() < 2 {
        return Err(Error::InvalidParam("a performance curve needs at least two points".into()));
    }
    if points.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::InvalidParam("curve L values must be strictly increasing".into()));
    }
    let area: f64 = points
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) as f64 * (w[0].1 + w[1].1) / 2.0)
        .sum();
    let span = (points[points.len() - 1].0 - points[0].0) as f64;
    Ok(PerformanceCurve {
        points: points.to_vec(),
        area: area / span,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_and_linear() {
        assert_eq!(curve_and_area(&[(50, 0.3), (100, 0.3), (500, 0.3)]).unwrap().area, 0.3);
        assert_eq!(curve_and_area(&[(50, 0.0), (500, 1.0)]).unwrap().area, 0.5);
    }

    #[test]
    fn axis_rescaling_invariance() {
        let a = curve_and_area(&[(50, 0.1), (100, 0.7), (200, 0.4)]).unwrap().area;
        let b = curve_and_area(&[(500, 0.1), (1000, 0.7), (2000, 0.4)]).unwrap().area;
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(curve_and_area(&[(50, 0.0)]).is_err());
        assert!(curve_and_area(&[(50, 0.0), (50, 1.0)]).is_err());
    }
}
