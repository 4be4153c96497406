//! Physical quantity types and the lumped thermal-transport primitives the
//! plant components are built from.
//!
//! Everything here is a pure function of its inputs; values are immutable
//! and freely shareable across threads.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Temperature in degrees Celsius.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Temperature<S: Scalar = f64>(S);

impl<S: Scalar> Temperature<S> {
    pub fn new(celsius: S) -> Self {
        Temperature(celsius)
    }

    pub fn celsius(self) -> S {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// Bound check for validation layers: plant temperatures live in
    /// (-30 C, 120 C).
    pub fn is_plant_realistic(self) -> bool {
        self.0.is_finite() && self.0 > S::of(-30.0) && self.0 < S::of(120.0)
    }
}

impl<S: Scalar> core::ops::Add<S> for Temperature<S> {
    type Output = Temperature<S>;
    fn add(self, dk: S) -> Temperature<S> {
        Temperature(self.0 + dk)
    }
}

impl<S: Scalar> core::ops::Sub<S> for Temperature<S> {
    type Output = Temperature<S>;
    fn sub(self, dk: S) -> Temperature<S> {
        Temperature(self.0 - dk)
    }
}

/// Difference of two temperatures is a plain kelvin value.
impl<S: Scalar> core::ops::Sub for Temperature<S> {
    type Output = S;
    fn sub(self, other: Temperature<S>) -> S {
        self.0 - other.0
    }
}

/// Power in watts. Heat flows are signed (positive in the stated direction);
/// electric consumptions are non-negative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Power<S: Scalar = f64>(S);

impl<S: Scalar> Power<S> {
    pub fn new(watts: S) -> Self {
        Power(watts)
    }

    pub fn zero() -> Self {
        Power(S::zero())
    }

    pub fn watts(self) -> S {
        self.0
    }
}

impl<S: Scalar> core::ops::Add for Power<S> {
    type Output = Power<S>;
    fn add(self, other: Power<S>) -> Power<S> {
        Power(self.0 + other.0)
    }
}

impl<S: Scalar> core::ops::Sub for Power<S> {
    type Output = Power<S>;
    fn sub(self, other: Power<S>) -> Power<S> {
        Power(self.0 - other.0)
    }
}

impl<S: Scalar> core::ops::Neg for Power<S> {
    type Output = Power<S>;
    fn neg(self) -> Power<S> {
        Power(-self.0)
    }
}

impl<S: Scalar> core::ops::Mul<S> for Power<S> {
    type Output = Power<S>;
    fn mul(self, k: S) -> Power<S> {
        Power(self.0 * k)
    }
}

/// A directed flow of coolant: the universal connector between components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidStream<S: Scalar = f64> {
    /// Mass flow, kg/s. Non-negative.
    pub mass_flow: S,
    pub temperature: Temperature<S>,
    /// Specific heat, J/(kg*K). Positive.
    pub specific_heat: S,
}

impl<S: Scalar> FluidStream<S> {
    pub fn new(mass_flow: S, temperature: Temperature<S>, specific_heat: S) -> Self {
        debug_assert!(mass_flow >= S::zero());
        debug_assert!(specific_heat > S::zero());
        FluidStream {
            mass_flow,
            temperature,
            specific_heat,
        }
    }

    /// Heat capacity rate mdot*cp, W/K.
    pub fn capacity_rate(&self) -> S {
        self.mass_flow * self.specific_heat
    }

    pub fn with_temperature(self, temperature: Temperature<S>) -> Self {
        FluidStream {
            temperature,
            ..self
        }
    }
}

/// A well-mixed lumped water mass (buffer tank, circuit water volume).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalMass<S: Scalar = f64> {
    /// Mass, kg. Positive.
    pub mass: S,
    pub temperature: Temperature<S>,
    /// Specific heat, J/(kg*K). Positive.
    pub specific_heat: S,
}

impl<S: Scalar> ThermalMass<S> {
    pub fn new(mass: S, temperature: Temperature<S>, specific_heat: S) -> Self {
        debug_assert!(mass > S::zero());
        debug_assert!(specific_heat > S::zero());
        ThermalMass {
            mass,
            temperature,
            specific_heat,
        }
    }
}

fn compatible_cp<S: Scalar>(a: S, b: S) -> Result<()> {
    let scale = a.abs().max(b.abs());
    if (a - b).abs() > S::of(1e-9) * scale {
        return Err(Error::IncompatibleFluid(
            a.to_f64().unwrap_or(f64::NAN),
            b.to_f64().unwrap_or(f64::NAN),
        ));
    }
    Ok(())
}

/// Joins two streams of the same fluid. Mass flows add; the temperature is
/// the mass-flow-weighted mean. Two zero flows join to zero flow at the
/// plain mean temperature.
pub fn mix_streams<S: Scalar>(a: FluidStream<S>, b: FluidStream<S>) -> Result<FluidStream<S>> {
    compatible_cp(a.specific_heat, b.specific_heat)?;
    let total = a.mass_flow + b.mass_flow;
    let temperature = if total > S::zero() {
        Temperature::new(
            (a.mass_flow * a.temperature.celsius() + b.mass_flow * b.temperature.celsius())
                / total,
        )
    } else {
        Temperature::new(
            (a.temperature.celsius() + b.temperature.celsius()) / S::of(2.0),
        )
    };
    Ok(FluidStream::new(total, temperature, a.specific_heat))
}

/// Splits a stream at a 3-way valve. The first output carries
/// `fraction * mass_flow`, the second the remainder, both at the inlet
/// temperature.
pub fn split_stream<S: Scalar>(
    s: FluidStream<S>,
    fraction: S,
) -> Result<(FluidStream<S>, FluidStream<S>)> {
    if !(fraction >= S::zero() && fraction <= S::one()) {
        return Err(Error::OutOfRange {
            what: "split fraction",
            value: fraction.to_f64().unwrap_or(f64::NAN),
        });
    }
    let first = FluidStream::new(s.mass_flow * fraction, s.temperature, s.specific_heat);
    let second = FluidStream::new(
        s.mass_flow - first.mass_flow,
        s.temperature,
        s.specific_heat,
    );
    Ok((first, second))
}

/// Passive counterflow heat exchanger in the effectiveness model:
/// q = eps * C_min * (T_hot,in - T_cold,in), outlets follow from the
/// per-side energy balance. No reverse transfer when the hot side is colder.
pub fn hx_transfer<S: Scalar>(
    hot_in: FluidStream<S>,
    cold_in: FluidStream<S>,
    effectiveness: S,
) -> Result<(FluidStream<S>, FluidStream<S>, Power<S>)> {
    if !(effectiveness >= S::zero() && effectiveness <= S::one()) {
        return Err(Error::OutOfRange {
            what: "heat exchanger effectiveness",
            value: effectiveness.to_f64().unwrap_or(f64::NAN),
        });
    }
    let dt = hot_in.temperature - cold_in.temperature;
    let c_hot = hot_in.capacity_rate();
    let c_cold = cold_in.capacity_rate();
    let c_min = c_hot.min(c_cold);
    if dt <= S::zero() || c_min <= S::zero() {
        return Ok((hot_in, cold_in, Power::zero()));
    }
    let q = effectiveness * c_min * dt;
    let hot_out = hot_in.with_temperature(hot_in.temperature - q / c_hot);
    let cold_out = cold_in.with_temperature(cold_in.temperature + q / c_cold);
    Ok((hot_out, cold_out, Power::new(q)))
}

/// Heat exchange of a pipe run with the surrounding air:
/// q_loss = ua * (T - T_ambient), signed (negative means pickup from warmer
/// air). A zero-flow stream carries no heat, so its q_loss is zero.
pub fn pipe_loss<S: Scalar>(
    s: FluidStream<S>,
    ua: S,
    ambient: Temperature<S>,
) -> (FluidStream<S>, Power<S>) {
    debug_assert!(ua >= S::zero());
    let c = s.capacity_rate();
    if c <= S::zero() || ua <= S::zero() {
        return (s, Power::zero());
    }
    let q = ua * (s.temperature - ambient);
    let out = s.with_temperature(s.temperature - q / c);
    (out, Power::new(q))
}

/// Advances a well-mixed thermal mass one step under a constant inflow.
///
/// Uses the exact exponential update of dT/dt = mdot*(T_in - T)/M, so the
/// stability guard dt*mdot/M <= 1 can never trip; it is kept for drop-in
/// replacements of the update rule. The outflow leaves at the updated
/// temperature with the inflow's mass flow.
pub fn advance_thermal_mass<S: Scalar>(
    tm: ThermalMass<S>,
    inflow: FluidStream<S>,
    dt: S,
) -> Result<(ThermalMass<S>, FluidStream<S>)> {
    if !(dt > S::zero()) {
        return Err(Error::OutOfRange {
            what: "time step",
            value: dt.to_f64().unwrap_or(f64::NAN),
        });
    }
    compatible_cp(tm.specific_heat, inflow.specific_heat)?;
    let k = inflow.mass_flow * dt / tm.mass;
    let t_new = if inflow.mass_flow > S::zero() {
        let t_in = inflow.temperature.celsius();
        Temperature::new(t_in + (tm.temperature.celsius() - t_in) * (-k).exp())
    } else {
        tm.temperature
    };
    let updated = ThermalMass {
        temperature: t_new,
        ..tm
    };
    let outflow = FluidStream::new(inflow.mass_flow, t_new, inflow.specific_heat);
    Ok((updated, outflow))
}
