//! Lumped-parameter model of a hot-water-cooled compute cluster whose waste
//! heat drives an adsorption chiller.
//!
//! The plant is wired as five pumped water circuits: a central cooling
//! circuit fed by the building, a primary circuit serving a GPU cabinet, the
//! rack circuit cooling the cluster, the chiller driving circuit with its
//! buffer tank, and the outdoor recooling circuit. A 3-way valve under PID
//! control splits the rack return between the chiller path and an additional
//! cooler on the primary circuit.
//!
//! The physics layer ([`thermo`], [`cluster`], [`chiller`], [`control`],
//! [`recooler`], [`manifold`]) is generic over the scalar type via
//! [`Scalar`]; `f64` is the default everywhere. The simulator, configuration
//! and telemetry layers are `f64` only.

// Guards are written as negated comparisons so that NaN inputs fail them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chiller;
pub mod cluster;
pub mod config;
pub mod control;
pub mod curves;
pub mod error;
pub mod figures;
pub mod manifold;
pub mod plant;
pub mod recooler;
pub mod scalar;
pub mod scenario;
pub mod sensors;
pub mod sim;
pub mod thermo;
pub mod timeseries;

pub use chiller::{ChillerModel, ChillerState, ChillerStep};
pub use cluster::{ClusterModel, ClusterStep};
pub use config::{build_plant, load_config, save_config, PlantConfig};
pub use control::PidController;
pub use curves::PiecewiseLinear;
pub use error::Error;
pub use figures::{fit_gaussian, reproduce_figures, FigureBundle};
pub use manifold::{manifold_flows, ManifoldModel, ManifoldTopology};
pub use plant::{step, PlantGraph, SimState, StepResult};
pub use recooler::RecoolerModel;
pub use scalar::Scalar;
pub use scenario::{AmbientTarget, Schedule, ScenarioAction, ScenarioEvent};
pub use sensors::{apply_sensor_noise, SensorSpec};
pub use sim::{
    energy_audit, run, solve_equilibrium, sweep_temperature, Diagnosis, EquilibriumReport,
    SweepRow, SweepTable,
};
pub use thermo::{
    advance_thermal_mass, hx_transfer, mix_streams, pipe_loss, split_stream, FluidStream, Power,
    Temperature, ThermalMass,
};

/// Specific heat of water, J/(kg·K).
pub const CP_WATER: f64 = 4186.0;

/// Default specific heat of the water/glycol mix in the outdoor-facing
/// circuits, J/(kg·K).
pub const CP_GLYCOL: f64 = 3600.0;
