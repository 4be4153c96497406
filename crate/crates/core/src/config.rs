//! Declarative plant configuration: TOML serialization, validation with
//! field-path diagnostics, and construction of the runtime plant.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::chiller::ChillerModel;
use crate::cluster::{alpha_from_power_ratio, ClusterModel};
use crate::control::PidController;
use crate::curves::PiecewiseLinear;
use crate::error::{Error, Result};
use crate::manifold::{ManifoldModel, ManifoldTopology};
use crate::plant::{CircuitFlows, CircuitMasses, HxEffectiveness, PipeUa, PlantGraph};
use crate::recooler::RecoolerModel;
use crate::sensors::SensorSpec;

const SUPPORTED_SCHEMA_VERSION: u32 = 1;

/// Complete declarative description of the plant. An empty document yields
/// the calibrated default installation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PlantConfig {
    pub schema_version: u32,
    pub cluster: ClusterConfig,
    pub chiller: ChillerConfig,
    pub recooler: RecoolerConfig,
    pub pid: PidConfig,
    pub manifold: ManifoldConfig,
    pub flows_kg_s: FlowsConfig,
    pub fluids: FluidsConfig,
    pub hx: HxConfig,
    pub masses_kg: MassesConfig,
    pub pipes: PipesConfig,
    pub ambient: AmbientConfig,
    pub loads: LoadsConfig,
    pub sim: SimConfig,
    pub sensors: SensorsConfig,
}

impl Default for PlantConfig {
    fn default() -> Self {
        PlantConfig {
            schema_version: SUPPORTED_SCHEMA_VERSION,
            cluster: ClusterConfig::default(),
            chiller: ChillerConfig::default(),
            recooler: RecoolerConfig::default(),
            pid: PidConfig::default(),
            manifold: ManifoldConfig::default(),
            flows_kg_s: FlowsConfig::default(),
            fluids: FluidsConfig::default(),
            hx: HxConfig::default(),
            masses_kg: MassesConfig::default(),
            pipes: PipesConfig::default(),
            ambient: AmbientConfig::default(),
            loads: LoadsConfig::default(),
            sim: SimConfig::default(),
            sensors: SensorsConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClusterConfig {
    pub n_nodes: usize,
    /// Nominal node power at the reference core temperature, W.
    pub p0_w: f64,
    pub sigma_power_w: f64,
    pub core_ref_c: f64,
    pub dt_core_low_k: f64,
    pub dt_core_high_k: f64,
    pub t_ref_low_c: f64,
    pub t_ref_high_c: f64,
    pub sigma_core_k: f64,
    /// Power-temperature coefficient, 1/K. The default is derived from the
    /// 7% mean-node power rise between the reference operating points.
    pub alpha_per_k: f64,
    pub psu_air_fraction: f64,
    pub ua_rack_w_per_k: f64,
    pub throttle_temp_c: f64,
    pub load_fraction: f64,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        ClusterConfig {
            n_nodes: 216,
            p0_w: 206.0,
            sigma_power_w: 5.4,
            core_ref_c: 80.0,
            dt_core_low_k: 15.0,
            dt_core_high_k: 17.5,
            t_ref_low_c: 49.0,
            t_ref_high_c: 70.0,
            sigma_core_k: 2.8,
            // Anchors: cores at 64 C / 87.5 C for outlets 49 C / 70 C, with
            // a 1.07 mean power ratio between those operating points.
            alpha_per_k: alpha_from_power_ratio(1.07, 87.5, 64.0, 80.0),
            psu_air_fraction: 0.12,
            ua_rack_w_per_k: 385.0,
            throttle_temp_c: 100.0,
            load_fraction: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChillerConfig {
    pub standby_temp_c: f64,
    pub hysteresis_k: f64,
    pub chilled_setpoint_c: f64,
    /// (driving temperature degC, COP) anchors.
    pub cop_curve: Vec<(f64, f64)>,
    /// (driving temperature degC, cooling capacity W) anchors.
    pub pc_max_curve: Vec<(f64, f64)>,
}

impl Default for ChillerConfig {
    fn default() -> Self {
        // COP anchored at the published ratio COP(70)/COP(57) = 1.9 with
        // COP(70) = 0.50; concave rise out of standby as sorption chillers
        // show. Capacity is a 400 W/K line through 6 kW @ 57 C and
        // 12 kW @ 72 C, extended over the modeled 55..80 C range.
        let cop57 = 0.50 / 1.9;
        ChillerConfig {
            standby_temp_c: 55.0,
            hysteresis_k: 2.0,
            chilled_setpoint_c: 15.0,
            cop_curve: vec![
                (55.0, 0.24),
                (57.0, cop57),
                (60.0, 0.393),
                (70.0, 0.50),
                (80.0, 0.607),
            ],
            pc_max_curve: vec![(55.0, 5200.0), (57.0, 6000.0), (72.0, 12_000.0), (80.0, 15_200.0)],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RecoolerConfig {
    pub ua_max_w_per_k: f64,
    pub fan_exponent: f64,
    pub fan_power_max_w: f64,
}

impl Default for RecoolerConfig {
    fn default() -> Self {
        RecoolerConfig {
            ua_max_w_per_k: 2000.0,
            fan_exponent: 0.8,
            fan_power_max_w: 500.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PidConfig {
    pub kp_per_k: f64,
    pub ki_per_k_s: f64,
    pub kd_s_per_k: f64,
    /// Rack inlet setpoint, degC.
    pub setpoint_c: f64,
}

impl Default for PidConfig {
    fn default() -> Self {
        PidConfig {
            kp_per_k: 0.08,
            ki_per_k_s: 0.002,
            kd_s_per_k: 0.0,
            setpoint_c: 62.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ManifoldConfig {
    pub n_branches: usize,
    pub branch_resistance_bar_lpm2: f64,
    pub header_resistance_bar_lpm2: f64,
    /// "tichelmann" or "naive".
    pub topology: String,
}

impl Default for ManifoldConfig {
    fn default() -> Self {
        ManifoldConfig {
            n_branches: 72,
            branch_resistance_bar_lpm2: 0.15,
            header_resistance_bar_lpm2: 0.002,
            topology: "tichelmann".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FlowsConfig {
    pub rack: f64,
    pub drive: f64,
    pub primary: f64,
    pub recool: f64,
    pub central: f64,
}

impl Default for FlowsConfig {
    fn default() -> Self {
        FlowsConfig {
            rack: 1.15,
            drive: 1.2,
            primary: 1.2,
            recool: 1.5,
            central: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FluidsConfig {
    pub cp_water_j_kg_k: f64,
    /// Driving and recooling circuits run a glycol admixture.
    pub cp_glycol_j_kg_k: f64,
}

impl Default for FluidsConfig {
    fn default() -> Self {
        FluidsConfig {
            cp_water_j_kg_k: crate::CP_WATER,
            cp_glycol_j_kg_k: crate::CP_GLYCOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HxConfig {
    /// Rack-to-driving interface; nearly lossless by design.
    pub rack_drive_effectiveness: f64,
    /// Additional cooler between the valve path and the primary circuit.
    pub additional_effectiveness: f64,
    /// Primary-to-central support exchanger.
    pub central_effectiveness: f64,
}

impl Default for HxConfig {
    fn default() -> Self {
        HxConfig {
            rack_drive_effectiveness: 0.98,
            additional_effectiveness: 0.9,
            central_effectiveness: 0.9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MassesConfig {
    pub rack: f64,
    pub primary: f64,
    pub recool: f64,
    /// Buffer tank in the driving circuit.
    pub tank: f64,
}

impl Default for MassesConfig {
    fn default() -> Self {
        MassesConfig {
            rack: 20.0,
            primary: 20.0,
            recool: 20.0,
            tank: 800.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipesConfig {
    /// Plumbing loss of the rack circuit to the room, W/K.
    pub rack_ua_w_per_k: f64,
    pub drive_ua_w_per_k: f64,
    pub primary_ua_w_per_k: f64,
    pub recool_ua_w_per_k: f64,
}

impl Default for PipesConfig {
    fn default() -> Self {
        PipesConfig {
            rack_ua_w_per_k: 115.0,
            drive_ua_w_per_k: 0.0,
            primary_ua_w_per_k: 0.0,
            recool_ua_w_per_k: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AmbientConfig {
    pub room_c: f64,
    pub outdoor_c: f64,
    /// Central cooling circuit supply temperature.
    pub central_supply_c: f64,
    /// Above this primary-circuit temperature the central circuit assists.
    pub support_threshold_c: f64,
}

impl Default for AmbientConfig {
    fn default() -> Self {
        AmbientConfig {
            room_c: 25.0,
            outdoor_c: 12.0,
            central_supply_c: 8.0,
            support_threshold_c: 20.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LoadsConfig {
    /// GPU cabinet heat picked up by the primary circuit, W.
    pub gpu_w: f64,
    /// Total pump electric power, dissipated to the room, W.
    pub pump_power_w: f64,
}

impl Default for LoadsConfig {
    fn default() -> Self {
        LoadsConfig {
            gpu_w: 12_000.0,
            pump_power_w: 600.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    pub dt_s: f64,
    pub duration_s: f64,
    pub initial_temp_c: f64,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            dt_s: 1.0,
            duration_s: 21_600.0,
            initial_temp_c: 20.0,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SensorsConfig {
    pub node_temp_sigma_k: f64,
    pub water_temp_sigma_k: f64,
    pub rack_flow_rel: f64,
    pub other_flow_rel: f64,
}

impl Default for SensorsConfig {
    fn default() -> Self {
        SensorsConfig {
            node_temp_sigma_k: 1.0,
            water_temp_sigma_k: 0.2,
            rack_flow_rel: 0.01,
            other_flow_rel: 0.10,
        }
    }
}

fn invalid(field: &str, reason: impl Into<String>) -> Error {
    Error::InvalidConfig {
        field: field.to_string(),
        reason: reason.into(),
    }
}

fn check(ok: bool, field: &str, reason: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(invalid(field, reason))
    }
}

impl PlantConfig {
    /// Validates every physical parameter; error messages carry the dotted
    /// path to the offending field.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SUPPORTED_SCHEMA_VERSION {
            return Err(Error::Version {
                found: self.schema_version,
                supported: SUPPORTED_SCHEMA_VERSION,
            });
        }
        let c = &self.cluster;
        check(c.n_nodes >= 1, "cluster.n_nodes", "must be at least 1")?;
        check(c.p0_w > 0.0, "cluster.p0_w", "must be positive")?;
        check(c.sigma_power_w >= 0.0, "cluster.sigma_power_w", "must be non-negative")?;
        check(c.sigma_core_k >= 0.0, "cluster.sigma_core_k", "must be non-negative")?;
        check(
            c.t_ref_low_c < c.t_ref_high_c,
            "cluster.t_ref_low_c",
            "must be below t_ref_high_c",
        )?;
        check(c.alpha_per_k >= 0.0, "cluster.alpha_per_k", "must be non-negative")?;
        check(
            (0.0..1.0).contains(&c.psu_air_fraction),
            "cluster.psu_air_fraction",
            "must be in [0, 1)",
        )?;
        check(c.ua_rack_w_per_k >= 0.0, "cluster.ua_rack_w_per_k", "must be non-negative")?;
        check(
            (0.0..=1.0).contains(&c.load_fraction),
            "cluster.load_fraction",
            "must be in [0, 1]",
        )?;
        check(
            c.throttle_temp_c > c.core_ref_c,
            "cluster.throttle_temp_c",
            "must exceed core_ref_c",
        )?;

        let ch = &self.chiller;
        check(ch.hysteresis_k >= 0.0, "chiller.hysteresis_k", "must be non-negative")?;
        check(
            (0.0..100.0).contains(&ch.standby_temp_c),
            "chiller.standby_temp_c",
            "must be in [0, 100)",
        )?;
        check(
            ch.chilled_setpoint_c < ch.standby_temp_c,
            "chiller.chilled_setpoint_c",
            "must be below standby_temp_c",
        )?;
        let cop = PiecewiseLinear::new(ch.cop_curve.clone())
            .map_err(|e| invalid("chiller.cop_curve", e.to_string()))?;
        check(cop.min_value() > 0.0, "chiller.cop_curve", "COP must be positive")?;
        check(
            cop.is_non_decreasing(),
            "chiller.cop_curve",
            "COP must be non-decreasing in temperature",
        )?;
        let pc = PiecewiseLinear::new(ch.pc_max_curve.clone())
            .map_err(|e| invalid("chiller.pc_max_curve", e.to_string()))?;
        check(pc.min_value() >= 0.0, "chiller.pc_max_curve", "capacity must be non-negative")?;

        let r = &self.recooler;
        check(r.ua_max_w_per_k > 0.0, "recooler.ua_max_w_per_k", "must be positive")?;
        check(
            r.fan_exponent > 0.0 && r.fan_exponent <= 3.0,
            "recooler.fan_exponent",
            "must be in (0, 3]",
        )?;
        check(r.fan_power_max_w >= 0.0, "recooler.fan_power_max_w", "must be non-negative")?;

        let p = &self.pid;
        check(p.kp_per_k >= 0.0, "pid.kp_per_k", "must be non-negative")?;
        check(p.ki_per_k_s >= 0.0, "pid.ki_per_k_s", "must be non-negative")?;
        check(p.kd_s_per_k >= 0.0, "pid.kd_s_per_k", "must be non-negative")?;
        check(
            (-30.0..120.0).contains(&p.setpoint_c),
            "pid.setpoint_c",
            "must be plant-realistic (-30..120 C)",
        )?;

        let m = &self.manifold;
        check(m.n_branches >= 1, "manifold.n_branches", "must be at least 1")?;
        check(
            m.branch_resistance_bar_lpm2 > 0.0,
            "manifold.branch_resistance_bar_lpm2",
            "must be positive",
        )?;
        check(
            m.header_resistance_bar_lpm2 >= 0.0,
            "manifold.header_resistance_bar_lpm2",
            "must be non-negative",
        )?;
        check(
            m.topology == "tichelmann" || m.topology == "naive",
            "manifold.topology",
            "must be \"tichelmann\" or \"naive\"",
        )?;

        for (value, field) in [
            (self.flows_kg_s.rack, "flows_kg_s.rack"),
            (self.flows_kg_s.drive, "flows_kg_s.drive"),
            (self.flows_kg_s.primary, "flows_kg_s.primary"),
            (self.flows_kg_s.recool, "flows_kg_s.recool"),
            (self.flows_kg_s.central, "flows_kg_s.central"),
        ] {
            check(value > 0.0 && value.is_finite(), field, "must be positive")?;
        }
        check(self.fluids.cp_water_j_kg_k > 0.0, "fluids.cp_water_j_kg_k", "must be positive")?;
        check(self.fluids.cp_glycol_j_kg_k > 0.0, "fluids.cp_glycol_j_kg_k", "must be positive")?;
        for (value, field) in [
            (self.hx.rack_drive_effectiveness, "hx.rack_drive_effectiveness"),
            (self.hx.additional_effectiveness, "hx.additional_effectiveness"),
            (self.hx.central_effectiveness, "hx.central_effectiveness"),
        ] {
            check((0.0..=1.0).contains(&value), field, "must be in [0, 1]")?;
        }
        for (value, field) in [
            (self.masses_kg.rack, "masses_kg.rack"),
            (self.masses_kg.primary, "masses_kg.primary"),
            (self.masses_kg.recool, "masses_kg.recool"),
            (self.masses_kg.tank, "masses_kg.tank"),
        ] {
            check(value > 0.0 && value.is_finite(), field, "must be positive")?;
        }
        for (value, field) in [
            (self.pipes.rack_ua_w_per_k, "pipes.rack_ua_w_per_k"),
            (self.pipes.drive_ua_w_per_k, "pipes.drive_ua_w_per_k"),
            (self.pipes.primary_ua_w_per_k, "pipes.primary_ua_w_per_k"),
            (self.pipes.recool_ua_w_per_k, "pipes.recool_ua_w_per_k"),
        ] {
            check(value >= 0.0, field, "must be non-negative")?;
        }

        let a = &self.ambient;
        for (value, field) in [
            (a.room_c, "ambient.room_c"),
            (a.outdoor_c, "ambient.outdoor_c"),
            (a.central_supply_c, "ambient.central_supply_c"),
            (self.sim.initial_temp_c, "sim.initial_temp_c"),
        ] {
            check(
                (-30.0..120.0).contains(&value),
                field,
                "must be plant-realistic (-30..120 C)",
            )?;
        }
        check(
            a.support_threshold_c > a.central_supply_c,
            "ambient.support_threshold_c",
            "must exceed central_supply_c",
        )?;

        check(self.loads.gpu_w >= 0.0, "loads.gpu_w", "must be non-negative")?;
        check(self.loads.pump_power_w >= 0.0, "loads.pump_power_w", "must be non-negative")?;

        let s = &self.sim;
        check(
            s.dt_s > 0.0 && s.dt_s <= 10.0,
            "sim.dt_s",
            "must be in (0, 10] seconds",
        )?;
        check(s.duration_s >= s.dt_s, "sim.duration_s", "must be at least dt_s")?;

        let n = &self.sensors;
        for (value, field) in [
            (n.node_temp_sigma_k, "sensors.node_temp_sigma_k"),
            (n.water_temp_sigma_k, "sensors.water_temp_sigma_k"),
            (n.rack_flow_rel, "sensors.rack_flow_rel"),
            (n.other_flow_rel, "sensors.other_flow_rel"),
        ] {
            check(value >= 0.0, field, "must be non-negative")?;
        }
        Ok(())
    }
}

/// Parses and fully validates a config document. An empty document yields
/// the default plant.
pub fn load_config(text: &str) -> Result<PlantConfig> {
    let config: PlantConfig = toml::from_str(text).map_err(|e| {
        let msg = e.to_string();
        // An unsupported schema_version should surface as a version error
        // even though serde sees it first.
        if let Ok(value) = text.parse::<toml::Table>() {
            if let Some(v) = value.get("schema_version").and_then(|v| v.as_integer()) {
                if v as u32 != SUPPORTED_SCHEMA_VERSION {
                    return Error::Version {
                        found: v as u32,
                        supported: SUPPORTED_SCHEMA_VERSION,
                    };
                }
            }
        }
        Error::Parse(msg)
    })?;
    config.validate()?;
    Ok(config)
}

/// Serializes a config back to canonical TOML.
pub fn save_config(config: &PlantConfig) -> String {
    toml::to_string_pretty(config).expect("config serializes")
}

/// SHA-256 over the canonical serialization; stamped into output manifests.
pub fn config_hash(config: &PlantConfig) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(save_config(config).as_bytes()))
}

/// Samples the per-node spread and assembles the cluster model. Draw order
/// is fixed (core offsets for nodes 0..n, then power offsets) so a seed
/// pins the plant exactly.
pub fn build_cluster(cfg: &ClusterConfig, seed: u64) -> ClusterModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let core = Normal::new(0.0, cfg.sigma_core_k.max(0.0)).unwrap();
    let power = Normal::new(0.0, cfg.sigma_power_w.max(0.0)).unwrap();
    let core_offsets_k: Vec<f64> = (0..cfg.n_nodes).map(|_| core.sample(&mut rng)).collect();
    let power_offsets_w: Vec<f64> = (0..cfg.n_nodes).map(|_| power.sample(&mut rng)).collect();
    ClusterModel {
        n_nodes: cfg.n_nodes,
        p0_w: cfg.p0_w,
        core_ref_c: cfg.core_ref_c,
        alpha_per_k: cfg.alpha_per_k,
        dt_core_low_k: cfg.dt_core_low_k,
        dt_core_high_k: cfg.dt_core_high_k,
        t_ref_low_c: cfg.t_ref_low_c,
        t_ref_high_c: cfg.t_ref_high_c,
        psu_air_fraction: cfg.psu_air_fraction,
        ua_rack_w_per_k: cfg.ua_rack_w_per_k,
        throttle_temp_c: cfg.throttle_temp_c,
        load_fraction: cfg.load_fraction,
        core_offsets_k,
        power_offsets_w,
    }
}

pub fn build_chiller(cfg: &ChillerConfig) -> Result<ChillerModel> {
    Ok(ChillerModel {
        standby_temp_c: cfg.standby_temp_c,
        hysteresis_k: cfg.hysteresis_k,
        chilled_setpoint_c: cfg.chilled_setpoint_c,
        cop_curve: PiecewiseLinear::new(cfg.cop_curve.clone())?,
        pc_max_curve: PiecewiseLinear::new(cfg.pc_max_curve.clone())?,
    })
}

/// Builds the validated runtime plant from a config.
pub fn build_plant(config: &PlantConfig) -> Result<PlantGraph> {
    config.validate()?;
    let topology = match config.manifold.topology.as_str() {
        "naive" => ManifoldTopology::Naive,
        _ => ManifoldTopology::Tichelmann,
    };
    Ok(PlantGraph {
        cluster: build_cluster(&config.cluster, config.sim.seed),
        chiller: build_chiller(&config.chiller)?,
        recooler: RecoolerModel {
            ua_max_w_per_k: config.recooler.ua_max_w_per_k,
            fan_exponent: config.recooler.fan_exponent,
            fan_power_max_w: config.recooler.fan_power_max_w,
            ambient_c: config.ambient.outdoor_c,
        },
        pid: PidController::new(
            config.pid.kp_per_k,
            config.pid.ki_per_k_s,
            config.pid.kd_s_per_k,
            config.pid.setpoint_c,
        ),
        manifold: ManifoldModel {
            branch_resistances: vec![
                config.manifold.branch_resistance_bar_lpm2;
                config.manifold.n_branches
            ],
            header_resistance: config.manifold.header_resistance_bar_lpm2,
            topology,
        },
        flows: CircuitFlows {
            rack: config.flows_kg_s.rack,
            drive: config.flows_kg_s.drive,
            primary: config.flows_kg_s.primary,
            recool: config.flows_kg_s.recool,
            central: config.flows_kg_s.central,
        },
        cp_water: config.fluids.cp_water_j_kg_k,
        cp_glycol: config.fluids.cp_glycol_j_kg_k,
        hx: HxEffectiveness {
            rack_drive: config.hx.rack_drive_effectiveness,
            additional: config.hx.additional_effectiveness,
            central: config.hx.central_effectiveness,
        },
        masses: CircuitMasses {
            rack_kg: config.masses_kg.rack,
            primary_kg: config.masses_kg.primary,
            recool_kg: config.masses_kg.recool,
            tank_kg: config.masses_kg.tank,
        },
        pipe_ua: PipeUa {
            rack: config.pipes.rack_ua_w_per_k,
            drive: config.pipes.drive_ua_w_per_k,
            primary: config.pipes.primary_ua_w_per_k,
            recool: config.pipes.recool_ua_w_per_k,
        },
        room_c: config.ambient.room_c,
        outdoor_c: config.ambient.outdoor_c,
        central_supply_c: config.ambient.central_supply_c,
        support_threshold_c: config.ambient.support_threshold_c,
        gpu_load_w: config.loads.gpu_w,
        pump_power_w: config.loads.pump_power_w,
        initial_temp_c: config.sim.initial_temp_c,
        seed: config.sim.seed,
        sensors: SensorSpec {
            node_temp_sigma_k: config.sensors.node_temp_sigma_k,
            water_temp_sigma_k: config.sensors.water_temp_sigma_k,
            rack_flow_rel: config.sensors.rack_flow_rel,
            other_flow_rel: config.sensors.other_flow_rel,
        },
    })
}
