//! Discrete PID controller for the 3-way valve, plus the recooler fan
//! policy.

use crate::recooler::RecoolerModel;
use crate::scalar::Scalar;
use crate::thermo::{Power, Temperature};

/// Positional PID on `error = measured - setpoint` with derivative on
/// measurement and conditional-integration anti-windup. The output is the
/// share of rack-return flow diverted to the additional cooler, clamped to
/// [0, 1].
#[derive(Debug, Clone, Copy)]
pub struct PidController<S: Scalar = f64> {
    pub kp: S,
    pub ki: S,
    pub kd: S,
    /// Rack inlet setpoint, degC.
    pub setpoint_c: S,
    pub integral: S,
    pub last_measurement: Option<S>,
}

impl<S: Scalar> PidController<S> {
    pub fn new(kp: S, ki: S, kd: S, setpoint_c: S) -> Self {
        PidController {
            kp,
            ki,
            kd,
            setpoint_c,
            integral: S::zero(),
            last_measurement: None,
        }
    }

    /// One update; returns the clamped valve fraction and the advanced
    /// controller.
    pub fn pid_update(mut self, measured: Temperature<S>, dt: S) -> (S, Self) {
        debug_assert!(dt > S::zero());
        let m = measured.celsius();
        let error = m - self.setpoint_c;
        let derivative = match self.last_measurement {
            Some(prev) => (m - prev) / dt,
            None => S::zero(),
        };
        let candidate_integral = self.integral + error * dt;
        let unclamped = self.kp * error + self.ki * candidate_integral + self.kd * derivative;
        let output = unclamped.max(S::zero()).min(S::one());

        // Conditional integration: only accumulate while the output is
        // unsaturated or the error drives it out of saturation.
        let saturated_high = unclamped > S::one() && error > S::zero();
        let saturated_low = unclamped < S::zero() && error < S::zero();
        if !(saturated_high || saturated_low) {
            self.integral = candidate_integral;
        }
        if self.ki > S::zero() {
            let bound = S::one() / self.ki;
            self.integral = self.integral.max(-bound).min(bound);
        }
        self.last_measurement = Some(m);
        (output, self)
    }
}

/// Fan-speed policy for the dry recooler; the chiller controls the fans.
pub trait FanPolicy<S: Scalar> {
    fn speed(&self, p_reject: Power<S>, t_in: Temperature<S>, model: &RecoolerModel<S>) -> S;
}

/// Default policy: run the fans just fast enough that the recooler UA can
/// reject the chiller's current heat at the present approach temperature.
#[derive(Debug, Clone, Copy, Default)]
pub struct TrackRejectPolicy;

impl<S: Scalar> FanPolicy<S> for TrackRejectPolicy {
    fn speed(&self, p_reject: Power<S>, t_in: Temperature<S>, model: &RecoolerModel<S>) -> S {
        if p_reject.watts() <= S::zero() {
            return S::zero();
        }
        let approach = (t_in.celsius() - model.ambient_c).max(S::of(0.5));
        let ua_needed = p_reject.watts() / approach;
        let ratio = (ua_needed / model.ua_max_w_per_k).max(S::zero());
        ratio
            .powf(S::one() / model.fan_exponent)
            .max(S::zero())
            .min(S::one())
    }
}
