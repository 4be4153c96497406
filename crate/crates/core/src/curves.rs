//! Piecewise-linear performance tables (COP and cooling-capacity curves).

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A piecewise-linear table y(x) over strictly increasing anchors, clamped
/// at both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear<S: Scalar = f64> {
    points: Vec<(S, S)>,
}

impl<S: Scalar> PiecewiseLinear<S> {
    pub fn new(points: Vec<(S, S)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::OutOfRange {
                what: "piecewise-linear anchor count",
                value: points.len() as f64,
            });
        }
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::OutOfRange {
                    what: "piecewise-linear anchor abscissa (must strictly increase)",
                    value: w[1].0.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        if points.iter().any(|&(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::OutOfRange {
                what: "piecewise-linear anchor",
                value: f64::NAN,
            });
        }
        Ok(PiecewiseLinear { points })
    }

    pub fn value(&self, x: S) -> S {
        let pts = &self.points;
        if x <= pts[0].0 {
            return pts[0].1;
        }
        if x >= pts[pts.len() - 1].0 {
            return pts[pts.len() - 1].1;
        }
        for w in pts.windows(2) {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            if x <= x1 {
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
            }
        }
        unreachable!("clamped lookup covers the whole axis")
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.points.windows(2).all(|w| w[1].1 >= w[0].1)
    }

    pub fn min_value(&self) -> S {
        self.points
            .iter()
            .map(|&(_, y)| y)
            .fold(S::infinity(), |a, b| a.min(b))
    }

    pub fn points(&self) -> &[(S, S)] {
        &self.points
    }

    /// Scales all ordinates by a factor (used for capacity what-if cases).
    pub fn scaled(&self, factor: S) -> Self {
        PiecewiseLinear {
            points: self.points.iter().map(|&(x, y)| (x, y * factor)).collect(),
        }
    }
}
