//! Sensor-accuracy emulation: seeded Gaussian noise per signal, absolute
//! for temperatures and relative for flow meters.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::timeseries::TimeSeries;

/// One-sigma accuracies of the plant instrumentation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorSpec {
    /// Chip-internal node temperature sensors, K.
    pub node_temp_sigma_k: f64,
    /// Cluster-level water temperature sensors, K.
    pub water_temp_sigma_k: f64,
    /// Ultrasonic rack-circuit flow meter, relative.
    pub rack_flow_rel: f64,
    /// Simple flow meters in the other circuits, relative.
    pub other_flow_rel: f64,
}

impl Default for SensorSpec {
    fn default() -> Self {
        SensorSpec {
            node_temp_sigma_k: 1.0,
            water_temp_sigma_k: 0.2,
            rack_flow_rel: 0.01,
            other_flow_rel: 0.10,
        }
    }
}

/// How a column is perturbed: `(absolute sigma, relative sigma)`.
/// Derived quantities (powers, fractions, states) pass through unchanged.
fn column_noise(spec: &SensorSpec, name: &str) -> (f64, f64) {
    if name.ends_with("_C") || name.ends_with("_K") {
        if name.contains("core") || name.contains("node") {
            return (spec.node_temp_sigma_k, 0.0);
        }
        return (spec.water_temp_sigma_k, 0.0);
    }
    if name.starts_with("mass_flow") || name.contains("flow_kg_s") || name.contains("flow_lpm") {
        if name.contains("rack") {
            return (0.0, spec.rack_flow_rel);
        }
        return (0.0, spec.other_flow_rel);
    }
    (0.0, 0.0)
}

/// Adds independent seeded Gaussian noise per signal per sample. The input
/// series is untouched; run both through persistence to keep the paired
/// true/noisy variants.
pub fn apply_sensor_noise(series: &TimeSeries, spec: &SensorSpec, seed: u64) -> TimeSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let plans: Vec<(f64, f64)> = series
        .columns
        .iter()
        .map(|c| column_noise(spec, c))
        .collect();
    let mut noisy = series.clone();
    // Column-major draw order, fixed by the schema.
    for (col, &(abs_sigma, rel_sigma)) in plans.iter().enumerate() {
        if abs_sigma == 0.0 && rel_sigma == 0.0 {
            continue;
        }
        for row in noisy.rows.iter_mut() {
            let draw: f64 = normal.sample(&mut rng);
            let sigma = abs_sigma + rel_sigma * row[col].abs();
            row[col] += sigma * draw;
        }
    }
    noisy
}
