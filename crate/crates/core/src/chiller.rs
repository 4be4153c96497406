//! Adsorption chiller: standby threshold with hysteresis, COP and
//! cooling-capacity tables over the driving temperature, and the derived
//! drive-power limit.
//!
//! The sorption cycle itself is abstracted away; the buffer tank in the
//! driving circuit stands in for its internal fluctuations. Per step the
//! chiller absorbs `p_d` from the driving circuit, removes `p_c` from the
//! chilled circuit and rejects exactly `p_d + p_c` to the recooling circuit.

use crate::curves::PiecewiseLinear;
use crate::error::Result;
use crate::scalar::Scalar;
use crate::thermo::{FluidStream, Power, Temperature};

#[derive(Debug, Clone)]
pub struct ChillerModel<S: Scalar = f64> {
    /// Below this driving temperature the chiller idles, degC.
    pub standby_temp_c: S,
    /// Deactivation happens `hysteresis_k` below the standby threshold.
    pub hysteresis_k: S,
    /// Target chilled-water temperature, degC.
    pub chilled_setpoint_c: S,
    /// COP over driving temperature; non-decreasing on the active range.
    pub cop_curve: PiecewiseLinear<S>,
    /// Maximum cooling capacity over driving temperature, W.
    pub pc_max_curve: PiecewiseLinear<S>,
}

/// Activation latch; carried between steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ChillerState {
    pub active: bool,
}

/// Stream outlets and heat flows of one chiller step.
#[derive(Debug, Clone)]
pub struct ChillerStep<S: Scalar = f64> {
    pub drive_out: FluidStream<S>,
    pub chilled_out: FluidStream<S>,
    pub recool_out: FluidStream<S>,
    /// Heat absorbed from the driving circuit, W.
    pub p_d: Power<S>,
    /// Heat removed from the chilled circuit, W.
    pub p_c: Power<S>,
    /// Heat rejected to the recooling circuit; always `p_d + p_c`.
    pub p_reject: Power<S>,
    pub state: ChillerState,
}

impl<S: Scalar> ChillerModel<S> {
    /// COP at a driving temperature; `None` while in standby.
    pub fn cop(&self, t_drive: Temperature<S>, active: bool) -> Option<S> {
        if !active {
            return None;
        }
        Some(self.cop_curve.value(t_drive.celsius()))
    }

    /// Maximum power removable from the driving circuit,
    /// P_d_max(T) = P_c_max(T) / COP(T). Zero in standby.
    pub fn pd_max(&self, t_drive: Temperature<S>, active: bool) -> Power<S> {
        if !active {
            return Power::zero();
        }
        let t = t_drive.celsius();
        Power::new(self.pc_max_curve.value(t) / self.cop_curve.value(t))
    }

    /// Applies the activation hysteresis: on at `standby_temp_c`, off again
    /// only below `standby_temp_c - hysteresis_k`.
    pub fn next_state(&self, state: ChillerState, t_drive: Temperature<S>) -> ChillerState {
        let t = t_drive.celsius();
        let active = if state.active {
            t >= self.standby_temp_c - self.hysteresis_k
        } else {
            t >= self.standby_temp_c
        };
        ChillerState { active }
    }

    /// One chiller step. When active,
    /// `p_d = min(drive heat available above the standby temperature,
    /// P_d_max(T))` and
    /// `p_c = min(COP(T) * p_d, chilled_demand, capacity to cool the chilled
    /// return to the setpoint)`.
    #[allow(clippy::too_many_arguments)]
    pub fn chiller_step(
        &self,
        state: ChillerState,
        drive_in: FluidStream<S>,
        chilled_return: FluidStream<S>,
        recool_supply: FluidStream<S>,
        chilled_demand: Power<S>,
        _dt: S,
    ) -> Result<ChillerStep<S>> {
        let state = self.next_state(state, drive_in.temperature);
        if !state.active {
            return Ok(ChillerStep {
                drive_out: drive_in,
                chilled_out: chilled_return,
                recool_out: recool_supply,
                p_d: Power::zero(),
                p_c: Power::zero(),
                p_reject: Power::zero(),
                state,
            });
        }

        let t_drive = drive_in.temperature;
        let available = (drive_in.capacity_rate()
            * (t_drive.celsius() - self.standby_temp_c))
            .max(S::zero());
        let p_d = available.min(self.pd_max(t_drive, true).watts());
        let cop = self.cop_curve.value(t_drive.celsius());

        let chilled_capacity = (chilled_return.capacity_rate()
            * (chilled_return.temperature.celsius() - self.chilled_setpoint_c))
            .max(S::zero());
        let p_c = (cop * p_d)
            .min(chilled_demand.watts().max(S::zero()))
            .min(chilled_capacity);
        let p_reject = p_d + p_c;

        let drive_out = if drive_in.capacity_rate() > S::zero() {
            drive_in.with_temperature(drive_in.temperature - p_d / drive_in.capacity_rate())
        } else {
            drive_in
        };
        let chilled_out = if chilled_return.capacity_rate() > S::zero() {
            chilled_return
                .with_temperature(chilled_return.temperature - p_c / chilled_return.capacity_rate())
        } else {
            chilled_return
        };
        let recool_out = if recool_supply.capacity_rate() > S::zero() {
            recool_supply
                .with_temperature(recool_supply.temperature + p_reject / recool_supply.capacity_rate())
        } else {
            recool_supply
        };

        Ok(ChillerStep {
            drive_out,
            chilled_out,
            recool_out,
            p_d: Power::new(p_d),
            p_c: Power::new(p_c),
            p_reject: Power::new(p_reject),
            state,
        })
    }
}
