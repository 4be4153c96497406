//! Rack manifold hydraulics: flow split across parallel node branches with
//! quadratic pressure-drop laws dp = R * q^2.
//!
//! Units follow the plumbing data sheets: flows in l/min, pressures in bar,
//! resistances in bar/(l/min)^2. The `Tichelmann` (reverse-return) topology
//! equalizes path lengths so equal branches self-balance; the `Naive`
//! (direct-return) topology accumulates header resistance per position and
//! starves the far branches.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ManifoldTopology {
    Tichelmann,
    Naive,
}

#[derive(Debug, Clone)]
pub struct ManifoldModel<S: Scalar = f64> {
    /// Per-branch hydraulic resistance, bar/(l/min)^2. All positive.
    pub branch_resistances: Vec<S>,
    /// Header resistance per position step, bar/(l/min)^2.
    pub header_resistance: S,
    pub topology: ManifoldTopology,
}

impl<S: Scalar> ManifoldModel<S> {
    /// Pressure drop of each supply-to-return path for a candidate flow
    /// vector. All paths share the same terminals, so at the solution these
    /// are equal.
    ///
    /// Reverse return gives every path the same header length, so in the
    /// `Tichelmann` case the header drop is common-mode and only the branch
    /// law decides the split. The `Naive` direct return traverses the
    /// header segments 1..=i out and back, starving the far positions.
    fn path_drops(&self, q: &[S]) -> Vec<S> {
        let n = q.len();
        let r = self.header_resistance;
        // Supply segment j carries the branches at position >= j.
        let mut supply = vec![S::zero(); n + 1];
        for j in (0..n).rev() {
            supply[j] = supply[j + 1] + q[j];
        }

        let mut drops = Vec::with_capacity(n);
        for (i, (&qi, &ri)) in q.iter().zip(&self.branch_resistances).enumerate() {
            let mut d = ri * qi * qi;
            if self.topology == ManifoldTopology::Naive {
                for &s in &supply[..=i] {
                    d = d + S::of(2.0) * r * s * s;
                }
            }
            drops.push(d);
        }
        drops
    }
}

/// Solves the parallel hydraulic network for the branch flows, l/min.
///
/// Damped rebalancing iteration on equal path pressure drops, to a relative
/// pressure residual of 1e-8.
pub fn manifold_flows<S: Scalar>(model: &ManifoldModel<S>, total_flow: S) -> Result<Vec<S>> {
    let n = model.branch_resistances.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if !(total_flow >= S::zero()) {
        return Err(Error::OutOfRange {
            what: "total manifold flow",
            value: total_flow.to_f64().unwrap_or(f64::NAN),
        });
    }
    if total_flow == S::zero() {
        return Ok(vec![S::zero(); n]);
    }

    // 1e-8 relative on pressure, floored at what the scalar can resolve.
    let tol = S::of(1e-8).max(S::epsilon() * S::of(8.0));
    let damping = S::of(0.5);
    let mut q: Vec<S> = vec![total_flow / S::of(n as f64); n];
    for _ in 0..20_000 {
        let drops = model.path_drops(&q);
        let mean = drops.iter().cloned().sum::<S>() / S::of(n as f64);
        let worst = drops
            .iter()
            .map(|d| (*d - mean).abs())
            .fold(S::zero(), |a, b| a.max(b));
        if worst <= tol * mean.max(S::of(1e-30)) {
            return Ok(q);
        }
        // Push flow from high-drop paths toward low-drop paths.
        let mut next: Vec<S> = q
            .iter()
            .zip(&drops)
            .map(|(&qi, &di)| qi * (mean / di.max(S::of(1e-30))).sqrt())
            .collect();
        let sum: S = next.iter().cloned().sum();
        let scale = total_flow / sum;
        for (qi, ni) in q.iter_mut().zip(next.iter_mut()) {
            *ni = *ni * scale;
            *qi = *qi + damping * (*ni - *qi);
        }
    }
    Err(Error::NoConvergence {
        what: "manifold flow balance",
        iterations: 20_000,
    })
}
