//! The compute cluster as a heat source.
//!
//! Per-node core temperatures sit a load-dependent offset above the rack
//! outlet water temperature; node power grows linearly with core
//! temperature; a fixed fraction of the electric power plus an
//! insulation-loss term escapes to the room air instead of the water.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::thermo::{FluidStream, Power, Temperature};

/// Static description of the cluster. Per-node offsets model manufacturing
/// spread; they are sampled once from the run seed and stay fixed.
#[derive(Debug, Clone)]
pub struct ClusterModel<S: Scalar = f64> {
    pub n_nodes: usize,
    /// Nominal node power at the reference core temperature, W.
    pub p0_w: S,
    /// Reference core temperature for the power law, degC.
    pub core_ref_c: S,
    /// Power-temperature coefficient, 1/K.
    pub alpha_per_k: S,
    /// Core-above-water offset at the low/high reference outlet
    /// temperatures, K; linearly interpolated and clamped outside.
    pub dt_core_low_k: S,
    pub dt_core_high_k: S,
    pub t_ref_low_c: S,
    pub t_ref_high_c: S,
    /// Share of electric power lost to air in PSUs and switches.
    pub psu_air_fraction: S,
    /// Rack envelope conductance to room air, W/K.
    pub ua_rack_w_per_k: S,
    /// Cores clamp their power above this temperature, degC.
    pub throttle_temp_c: S,
    /// Utilization scale on node power, 0..=1.
    pub load_fraction: S,
    /// Per-node core temperature offsets, K.
    pub core_offsets_k: Vec<S>,
    /// Per-node power offsets, W.
    pub power_offsets_w: Vec<S>,
}

/// Result of one quasi-static cluster evaluation.
#[derive(Debug, Clone)]
pub struct ClusterStep<S: Scalar = f64> {
    pub outlet: FluidStream<S>,
    pub p_electric: Power<S>,
    pub p_to_water: Power<S>,
    pub p_to_air: Power<S>,
    /// Indices of nodes at or above the throttle temperature.
    pub throttling: Vec<usize>,
}

impl<S: Scalar> ClusterModel<S> {
    fn check_node(&self, node_index: usize) -> Result<()> {
        if node_index >= self.n_nodes {
            return Err(Error::IndexOutOfRange {
                index: node_index,
                n_nodes: self.n_nodes,
            });
        }
        Ok(())
    }

    /// Core-above-water offset at a given outlet temperature, K.
    pub fn core_water_offset(&self, t_out_water: Temperature<S>) -> S {
        let span = self.t_ref_high_c - self.t_ref_low_c;
        let x = ((t_out_water.celsius() - self.t_ref_low_c) / span)
            .max(S::zero())
            .min(S::one());
        self.dt_core_low_k + (self.dt_core_high_k - self.dt_core_low_k) * x
    }

    /// Core temperature of one node at a given rack outlet temperature.
    pub fn core_temperature(
        &self,
        t_out_water: Temperature<S>,
        node_index: usize,
    ) -> Result<Temperature<S>> {
        self.check_node(node_index)?;
        Ok(t_out_water + self.core_water_offset(t_out_water) + self.core_offsets_k[node_index])
    }

    /// Electric power drawn by one node at a given core temperature.
    /// Above `throttle_temp_c` the power clamps at its throttle-point value.
    pub fn node_power(&self, t_core: Temperature<S>, node_index: usize) -> Result<Power<S>> {
        self.check_node(node_index)?;
        let t_eff = t_core.celsius().min(self.throttle_temp_c);
        let base = (self.p0_w + self.power_offsets_w[node_index]) * self.load_fraction;
        Ok(Power::new(
            base * (S::one() + self.alpha_per_k * (t_eff - self.core_ref_c)),
        ))
    }

    /// Total electric power at a given outlet temperature, with the list of
    /// throttling nodes.
    pub fn total_power(&self, t_out_water: Temperature<S>) -> (Power<S>, Vec<usize>) {
        let offset = self.core_water_offset(t_out_water);
        let mut total = S::zero();
        let mut throttling = Vec::new();
        for i in 0..self.n_nodes {
            let t_core = t_out_water.celsius() + offset + self.core_offsets_k[i];
            if t_core >= self.throttle_temp_c {
                throttling.push(i);
            }
            let t_eff = t_core.min(self.throttle_temp_c);
            total = total
                + (self.p0_w + self.power_offsets_w[i])
                    * self.load_fraction
                    * (S::one() + self.alpha_per_k * (t_eff - self.core_ref_c));
        }
        (Power::new(total), throttling)
    }

    /// Mean node power at a given outlet temperature, W.
    pub fn mean_node_power(&self, t_out_water: Temperature<S>) -> S {
        let (total, _) = self.total_power(t_out_water);
        total.watts() / S::of(self.n_nodes as f64)
    }

    /// One quasi-static pass: solves the outlet-temperature fixed point
    /// (power depends on core temperature, core temperature on outlet,
    /// outlet on dissipated power) by iteration to |dT| < 1e-4 K.
    pub fn cluster_step(
        &self,
        inlet: FluidStream<S>,
        air_temp: Temperature<S>,
    ) -> Result<ClusterStep<S>> {
        let c = inlet.capacity_rate();
        if c <= S::zero() {
            return Err(Error::ZeroFlow("cluster rack circuit"));
        }
        let tol = S::of(1e-4);
        let t_in = inlet.temperature.celsius();
        let mut t_out = t_in;
        for _ in 0..100 {
            let (p_el, _) = self.total_power(Temperature::new(t_out));
            let t_mean = (t_in + t_out) / S::of(2.0);
            let p_air = self.psu_air_fraction * p_el.watts()
                + self.ua_rack_w_per_k * (t_mean - air_temp.celsius());
            let p_water = p_el.watts() - p_air;
            let t_next = t_in + p_water / c;
            let delta = (t_next - t_out).abs();
            t_out = t_next;
            if delta < tol {
                let (p_el, throttling) = self.total_power(Temperature::new(t_out));
                let t_mean = (t_in + t_out) / S::of(2.0);
                let p_air = self.psu_air_fraction * p_el.watts()
                    + self.ua_rack_w_per_k * (t_mean - air_temp.celsius());
                let p_water = p_el.watts() - p_air;
                // Outlet temperature restated from the energy balance so
                // p_to_water and the stream stay exactly consistent.
                let outlet = inlet.with_temperature(Temperature::new(t_in + p_water / c));
                return Ok(ClusterStep {
                    outlet,
                    p_electric: p_el,
                    p_to_water: Power::new(p_water),
                    p_to_air: Power::new(p_air),
                    throttling,
                });
            }
        }
        Err(Error::NoConvergence {
            what: "cluster outlet fixed point",
            iterations: 100,
        })
    }
}

/// Power-temperature coefficient that makes the mean-node power ratio
/// between the high and low reference outlet temperatures equal `ratio`:
/// solves 1 + a*dh = ratio * (1 + a*dl) for a, where dh/dl are the core
/// temperature excursions from the reference point at the two anchors.
pub fn alpha_from_power_ratio(
    ratio: f64,
    core_at_high_c: f64,
    core_at_low_c: f64,
    core_ref_c: f64,
) -> f64 {
    let dh = core_at_high_c - core_ref_c;
    let dl = core_at_low_c - core_ref_c;
    (ratio - 1.0) / (dh - ratio * dl)
}
