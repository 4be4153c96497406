//! The five-circuit plant graph and its quasi-static time step.
//!
//! Streams are quasi-static; the dynamic states are the buffer tank in the
//! driving circuit and one lumped water mass per circuit. Component update
//! order within a step is fixed:
//!
//! 1. PID update on the measured rack inlet (the rack-circuit lumped mass,
//!    which sits between the valve junction and the cluster inlet).
//! 2. Cluster pass at that inlet.
//! 3. Rack plumbing loss, then the 3-way valve split.
//! 4. Primary circuit: GPU pickup, additional-cooler exchanger against the
//!    diverted rack flow, central-circuit support clamp.
//! 5. Chiller (driving, chilled and recooling legs in one pass).
//! 6. Recooler with the fan policy tracking the rejected heat.
//! 7. Rack-to-driving exchanger, buffer tank update.
//! 8. Valve-path remix and remaining mass updates.

use crate::chiller::{ChillerModel, ChillerState};
use crate::cluster::ClusterModel;
use crate::control::{FanPolicy, PidController, TrackRejectPolicy};
use crate::error::{Error, Result};
use crate::manifold::ManifoldModel;
use crate::recooler::RecoolerModel;
use crate::sensors::SensorSpec;
use crate::thermo::{
    advance_thermal_mass, hx_transfer, mix_streams, pipe_loss, split_stream, FluidStream, Power,
    Temperature, ThermalMass,
};

/// Fixed pump rates per circuit, kg/s.
#[derive(Debug, Clone, Copy)]
pub struct CircuitFlows {
    pub rack: f64,
    pub drive: f64,
    pub primary: f64,
    pub recool: f64,
    pub central: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct HxEffectiveness {
    pub rack_drive: f64,
    pub additional: f64,
    pub central: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct CircuitMasses {
    pub rack_kg: f64,
    pub primary_kg: f64,
    pub recool_kg: f64,
    pub tank_kg: f64,
}

/// Plumbing loss conductances to the surrounding air, W/K.
#[derive(Debug, Clone, Copy)]
pub struct PipeUa {
    pub rack: f64,
    pub drive: f64,
    pub primary: f64,
    pub recool: f64,
}

/// Immutable wiring of circuits (1)-(5): central cooling, primary cooling,
/// rack cooling, chiller driving, and recooling.
#[derive(Debug, Clone)]
pub struct PlantGraph {
    pub cluster: ClusterModel,
    pub chiller: ChillerModel,
    pub recooler: RecoolerModel,
    pub pid: PidController,
    pub manifold: ManifoldModel,
    pub flows: CircuitFlows,
    pub cp_water: f64,
    pub cp_glycol: f64,
    pub hx: HxEffectiveness,
    pub masses: CircuitMasses,
    pub pipe_ua: PipeUa,
    pub room_c: f64,
    pub outdoor_c: f64,
    pub central_supply_c: f64,
    pub support_threshold_c: f64,
    pub gpu_load_w: f64,
    pub pump_power_w: f64,
    pub initial_temp_c: f64,
    pub seed: u64,
    pub sensors: SensorSpec,
}

/// Scenario-adjustable operating controls, carried in the state.
#[derive(Debug, Clone, Copy)]
pub struct Controls {
    pub load_fraction: f64,
    pub chiller_enabled: bool,
    /// `Some` pins the valve, bypassing the PID.
    pub valve_lock: Option<f64>,
    pub room_c: f64,
    pub outdoor_c: f64,
}

/// Full dynamic state of the plant between steps.
#[derive(Debug, Clone)]
pub struct SimState {
    pub time_s: f64,
    /// Rack-circuit lumped mass; its temperature is the measured rack inlet.
    pub rack_mass_c: f64,
    pub tank_c: f64,
    pub primary_mass_c: f64,
    pub recool_mass_c: f64,
    pub chiller: ChillerState,
    pub pid: PidController,
    pub controls: Controls,
    pub fan_speed: f64,
}

impl PlantGraph {
    /// Cold state with every circuit at the configured initial temperature.
    pub fn initial_state(&self) -> SimState {
        SimState {
            time_s: 0.0,
            rack_mass_c: self.initial_temp_c,
            tank_c: self.initial_temp_c,
            primary_mass_c: self.initial_temp_c,
            recool_mass_c: self.initial_temp_c,
            chiller: ChillerState::default(),
            pid: self.pid,
            controls: Controls {
                load_fraction: self.cluster.load_fraction,
                chiller_enabled: true,
                valve_lock: None,
                room_c: self.room_c,
                outdoor_c: self.outdoor_c,
            },
            fan_speed: 0.0,
        }
    }
}

/// Everything observable about one step: the advanced state plus every
/// temperature, flow and power of the plant.
///
/// The rack-circuit energy balance holds exactly each step:
/// `p_r = p_d + p_add + p_loss + p_storage_rack + p_storage_tank +
/// p_loss_drive`; at steady state the storage terms vanish. Storage terms
/// are the stream-implied fluxes into each lumped mass, so the global audit
/// closes to round-off.
#[derive(Debug, Clone)]
pub struct StepResult {
    pub state: SimState,
    pub time_s: f64,
    pub t_rack_in_c: f64,
    pub t_rack_out_c: f64,
    pub t_rack_return_c: f64,
    pub t_tank_c: f64,
    pub t_drive_supply_c: f64,
    pub t_drive_return_c: f64,
    pub t_primary_supply_c: f64,
    pub t_primary_hot_c: f64,
    pub t_primary_chilled_c: f64,
    pub t_recool_supply_c: f64,
    pub t_recool_hot_c: f64,
    pub t_recool_out_c: f64,
    pub valve_fraction: f64,
    pub fan_speed: f64,
    pub chiller_active: bool,
    pub mass_flow_rack_kg_s: f64,
    pub mass_flow_drive_kg_s: f64,
    pub mass_flow_primary_kg_s: f64,
    pub mass_flow_recool_kg_s: f64,
    pub p_electric_w: f64,
    pub p_gpu_w: f64,
    /// Heat into the rack cooling water.
    pub p_r_w: f64,
    pub p_to_air_w: f64,
    /// Rack-circuit plumbing loss to the room.
    pub p_loss_w: f64,
    /// Heat removed via the valve's primary-circuit path.
    pub p_add_w: f64,
    pub p_d_w: f64,
    pub p_c_w: f64,
    pub p_reject_w: f64,
    /// Transfer through the rack-to-driving exchanger.
    pub q_hx_drive_w: f64,
    pub q_central_w: f64,
    pub q_recooler_w: f64,
    pub fan_power_w: f64,
    pub pump_power_w: f64,
    pub p_storage_rack_w: f64,
    pub p_storage_tank_w: f64,
    pub p_storage_primary_w: f64,
    pub p_storage_recool_w: f64,
    pub p_loss_drive_w: f64,
    pub p_loss_primary_w: f64,
    pub p_loss_recool_w: f64,
    /// COP table value at the driving supply temperature; NaN in standby.
    pub cop: f64,
    /// p_r / p_electric; NaN when the cluster is off.
    pub heat_in_water: f64,
    pub n_throttled: usize,
    pub audit_residual: f64,
}

/// Advances the plant one quasi-static step of `dt` seconds.
pub fn step(plant: &PlantGraph, state: &SimState, dt: f64) -> Result<StepResult> {
    if !(dt > 0.0 && dt <= 10.0) {
        return Err(Error::OutOfRange {
            what: "plant step dt",
            value: dt,
        });
    }
    let c = state.controls;
    let room = Temperature::new(c.room_c);

    // 1. Valve command from the measured rack inlet.
    let measured = Temperature::new(state.rack_mass_c);
    let (mut beta, pid_next) = match c.valve_lock {
        Some(locked) => (locked.clamp(0.0, 1.0), state.pid),
        None => state.pid.pid_update(measured, dt),
    };
    if c.valve_lock.is_some() {
        beta = beta.clamp(0.0, 1.0);
    }

    // 2. Cluster pass.
    let cluster;
    let cluster_ref: &ClusterModel = if c.load_fraction == plant.cluster.load_fraction {
        &plant.cluster
    } else {
        cluster = ClusterModel {
            load_fraction: c.load_fraction,
            ..plant.cluster.clone()
        };
        &cluster
    };
    let inlet = FluidStream::new(plant.flows.rack, measured, plant.cp_water);
    let cl = cluster_ref.cluster_step(inlet, room)?;

    // 3. Rack plumbing loss and valve split.
    let (rack_return, p_loss) = pipe_loss(cl.outlet, plant.pipe_ua.rack, room);
    let (to_primary, to_drive) = split_stream(rack_return, beta)?;

    // 4. Primary circuit up to the chiller return.
    let c_primary = plant.flows.primary * plant.cp_water;
    let primary_supply = FluidStream::new(
        plant.flows.primary,
        Temperature::new(state.primary_mass_c),
        plant.cp_water,
    );
    let after_gpu =
        primary_supply.with_temperature(primary_supply.temperature + plant.gpu_load_w / c_primary);
    let (divert_out, after_add, p_add) = hx_transfer(to_primary, after_gpu, plant.hx.additional)?;

    // Central support: the autonomous exchanger holds its outlet at the
    // support threshold whenever the incoming primary water is hotter,
    // within its transfer capacity.
    let gate = after_add.temperature.celsius();
    let q_central = if gate > plant.support_threshold_c {
        let required = c_primary * (gate - plant.support_threshold_c);
        let c_min = c_primary.min(plant.flows.central * plant.cp_water);
        let capacity = (plant.hx.central * c_min * (gate - plant.central_supply_c)).max(0.0);
        required.min(capacity)
    } else {
        0.0
    };
    let chilled_return =
        after_add.with_temperature(after_add.temperature - q_central / c_primary);

    // 5. Chiller across driving, chilled and recooling legs.
    let drive_in = FluidStream::new(
        plant.flows.drive,
        Temperature::new(state.tank_c),
        plant.cp_glycol,
    );
    let recool_supply = FluidStream::new(
        plant.flows.recool,
        Temperature::new(state.recool_mass_c),
        plant.cp_glycol,
    );
    let chiller_state = if c.chiller_enabled {
        state.chiller
    } else {
        ChillerState { active: false }
    };
    let ch = if c.chiller_enabled {
        plant.chiller.chiller_step(
            chiller_state,
            drive_in,
            chilled_return,
            recool_supply,
            Power::new(f64::INFINITY),
            dt,
        )?
    } else {
        crate::chiller::ChillerStep {
            drive_out: drive_in,
            chilled_out: chilled_return,
            recool_out: recool_supply,
            p_d: Power::zero(),
            p_c: Power::zero(),
            p_reject: Power::zero(),
            state: chiller_state,
        }
    };

    // 6. Recooler.
    let outdoor = Temperature::new(c.outdoor_c);
    let recooler = RecoolerModel {
        ambient_c: c.outdoor_c,
        ..plant.recooler
    };
    let fan_speed = TrackRejectPolicy.speed(ch.p_reject, ch.recool_out.temperature, &recooler);
    let (recool_cooled, q_recooler, fan_power) = recooler.recooler_step(ch.recool_out, fan_speed, dt)?;
    let (recool_to_mass, p_loss_recool) = pipe_loss(recool_cooled, plant.pipe_ua.recool, outdoor);

    // 7. Rack-to-driving exchanger and buffer tank.
    let (drive_path_out, drive_warm, q_hx_drive) =
        hx_transfer(to_drive, ch.drive_out, plant.hx.rack_drive)?;
    let (tank_inflow, p_loss_drive) = pipe_loss(drive_warm, plant.pipe_ua.drive, room);
    let tank = ThermalMass::new(
        plant.masses.tank_kg,
        Temperature::new(state.tank_c),
        plant.cp_glycol,
    );
    let (tank_next, _) = advance_thermal_mass(tank, tank_inflow, dt)?;

    // 8. Remix the valve paths, update the remaining masses.
    let mixed = mix_streams(divert_out, drive_path_out)?;
    let rack_mass = ThermalMass::new(
        plant.masses.rack_kg,
        Temperature::new(state.rack_mass_c),
        plant.cp_water,
    );
    let (rack_mass_next, _) = advance_thermal_mass(rack_mass, mixed, dt)?;

    let (primary_to_mass, p_loss_primary) =
        pipe_loss(ch.chilled_out, plant.pipe_ua.primary, room);
    let primary_mass = ThermalMass::new(
        plant.masses.primary_kg,
        Temperature::new(state.primary_mass_c),
        plant.cp_water,
    );
    let (primary_mass_next, _) = advance_thermal_mass(primary_mass, primary_to_mass, dt)?;

    let recool_mass = ThermalMass::new(
        plant.masses.recool_kg,
        Temperature::new(state.recool_mass_c),
        plant.cp_glycol,
    );
    let (recool_mass_next, _) = advance_thermal_mass(recool_mass, recool_to_mass, dt)?;

    // Stream-implied storage fluxes; these make the audit exact.
    let c_rack = plant.flows.rack * plant.cp_water;
    let c_drive = plant.flows.drive * plant.cp_glycol;
    let c_recool = plant.flows.recool * plant.cp_glycol;
    let p_storage_rack = c_rack * (mixed.temperature.celsius() - state.rack_mass_c);
    let p_storage_tank = c_drive * (tank_inflow.temperature.celsius() - state.tank_c);
    let p_storage_primary =
        c_primary * (primary_to_mass.temperature.celsius() - state.primary_mass_c);
    let p_storage_recool =
        c_recool * (recool_to_mass.temperature.celsius() - state.recool_mass_c);

    let next_state = SimState {
        time_s: state.time_s + dt,
        rack_mass_c: rack_mass_next.temperature.celsius(),
        tank_c: tank_next.temperature.celsius(),
        primary_mass_c: primary_mass_next.temperature.celsius(),
        recool_mass_c: recool_mass_next.temperature.celsius(),
        chiller: ch.state,
        pid: pid_next,
        controls: c,
        fan_speed,
    };

    let p_electric = cl.p_electric.watts();
    let cop = plant
        .chiller
        .cop(drive_in.temperature, ch.state.active)
        .unwrap_or(f64::NAN);
    let mut result = StepResult {
        time_s: next_state.time_s,
        t_rack_in_c: measured.celsius(),
        t_rack_out_c: cl.outlet.temperature.celsius(),
        t_rack_return_c: rack_return.temperature.celsius(),
        t_tank_c: next_state.tank_c,
        t_drive_supply_c: state.tank_c,
        t_drive_return_c: ch.drive_out.temperature.celsius(),
        t_primary_supply_c: state.primary_mass_c,
        t_primary_hot_c: gate,
        t_primary_chilled_c: ch.chilled_out.temperature.celsius(),
        t_recool_supply_c: state.recool_mass_c,
        t_recool_hot_c: ch.recool_out.temperature.celsius(),
        t_recool_out_c: recool_to_mass.temperature.celsius(),
        valve_fraction: beta,
        fan_speed,
        chiller_active: ch.state.active,
        mass_flow_rack_kg_s: plant.flows.rack,
        mass_flow_drive_kg_s: plant.flows.drive,
        mass_flow_primary_kg_s: plant.flows.primary,
        mass_flow_recool_kg_s: plant.flows.recool,
        p_electric_w: p_electric,
        p_gpu_w: plant.gpu_load_w,
        p_r_w: cl.p_to_water.watts(),
        p_to_air_w: cl.p_to_air.watts(),
        p_loss_w: p_loss.watts(),
        p_add_w: p_add.watts(),
        p_d_w: ch.p_d.watts(),
        p_c_w: ch.p_c.watts(),
        p_reject_w: ch.p_reject.watts(),
        q_hx_drive_w: q_hx_drive.watts(),
        q_central_w: q_central,
        q_recooler_w: q_recooler.watts(),
        fan_power_w: fan_power.watts(),
        pump_power_w: plant.pump_power_w,
        p_storage_rack_w: p_storage_rack,
        p_storage_tank_w: p_storage_tank,
        p_storage_primary_w: p_storage_primary,
        p_storage_recool_w: p_storage_recool,
        p_loss_drive_w: p_loss_drive.watts(),
        p_loss_primary_w: p_loss_primary.watts(),
        p_loss_recool_w: p_loss_recool.watts(),
        cop,
        heat_in_water: if p_electric > 0.0 {
            cl.p_to_water.watts() / p_electric
        } else {
            f64::NAN
        },
        n_throttled: cl.throttling.len(),
        audit_residual: 0.0,
        state: next_state,
    };
    result.audit_residual = crate::sim::energy_audit(&result);
    Ok(result)
}
