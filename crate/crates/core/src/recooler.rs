//! Fan-driven dry recooler outside the computing center.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::thermo::{FluidStream, Power};

#[derive(Debug, Clone, Copy)]
pub struct RecoolerModel<S: Scalar = f64> {
    /// UA at full fan speed, W/K.
    pub ua_max_w_per_k: S,
    /// UA scales with speed^fan_exponent.
    pub fan_exponent: S,
    /// Parasitic fan power at full speed, W; scales with speed cubed.
    pub fan_power_max_w: S,
    /// Outdoor air temperature, degC.
    pub ambient_c: S,
}

impl<S: Scalar> RecoolerModel<S> {
    /// One quasi-static pass. Rejection is capped by the full-cooldown
    /// limit and the coolant never drops below ambient.
    pub fn recooler_step(
        &self,
        inlet: FluidStream<S>,
        fan_speed: S,
        _dt: S,
    ) -> Result<(FluidStream<S>, Power<S>, Power<S>)> {
        if !(fan_speed >= S::zero() && fan_speed <= S::one()) {
            return Err(Error::OutOfRange {
                what: "fan speed",
                value: fan_speed.to_f64().unwrap_or(f64::NAN),
            });
        }
        let fan_power = Power::new(self.fan_power_max_w * fan_speed.powi(3));
        let dt_air = inlet.temperature.celsius() - self.ambient_c;
        let c = inlet.capacity_rate();
        if dt_air <= S::zero() || c <= S::zero() || fan_speed <= S::zero() {
            return Ok((inlet, Power::zero(), fan_power));
        }
        let ua = self.ua_max_w_per_k * fan_speed.powf(self.fan_exponent);
        let q = (ua * dt_air).min(c * dt_air);
        let outlet = inlet.with_temperature(inlet.temperature - q / c);
        Ok((outlet, Power::new(q), fan_power))
    }
}
