//! Time integration, the whole-plant energy audit, direct equilibrium
//! analysis, and steady-state setpoint sweeps.

use crate::error::{Error, Result};
use crate::plant::{step, PlantGraph, SimState, StepResult};
use crate::scenario::Schedule;
use crate::timeseries::TimeSeries;

/// Whole-plant first-law audit of one step, as a residual relative to the
/// cluster electric power:
/// electric input + parasitics = central-circuit heat + recooler rejection
/// + all ambient losses + storage rates.
pub fn energy_audit(result: &StepResult) -> f64 {
    let sources =
        result.p_electric_w + result.p_gpu_w + result.pump_power_w + result.fan_power_w;
    let sinks = result.p_to_air_w
        + result.p_loss_w
        + result.p_loss_drive_w
        + result.p_loss_primary_w
        + result.p_loss_recool_w
        + result.q_central_w
        + result.q_recooler_w
        + result.pump_power_w
        + result.fan_power_w
        + result.p_storage_rack_w
        + result.p_storage_tank_w
        + result.p_storage_primary_w
        + result.p_storage_recool_w;
    (sources - sinks).abs() / result.p_electric_w.max(1.0)
}

/// Repeated stepping with optional scenario events; one record per step.
/// Deterministic for a fixed config and seed.
pub fn run(
    plant: &PlantGraph,
    state0: &SimState,
    duration_s: f64,
    dt_s: f64,
    schedule: Option<&Schedule>,
) -> Result<TimeSeries> {
    if !(duration_s >= dt_s) {
        return Err(Error::OutOfRange {
            what: "run duration (must be at least dt)",
            value: duration_s,
        });
    }
    let n_steps = (duration_s / dt_s).round().max(1.0) as usize;
    let mut series = TimeSeries::new_step_schema();
    let mut state = state0.clone();
    let mut next_event = 0usize;
    for _ in 0..n_steps {
        if let Some(schedule) = schedule {
            schedule.apply_due(&mut state, &mut next_event);
        }
        let result = step(plant, &state, dt_s)?;
        state = result.state.clone();
        series.push_step(&result);
    }
    Ok(series)
}

/// Quasi-static rack-circuit balance at a pinned outlet temperature.
#[derive(Debug, Clone, Copy)]
pub struct RackSteady {
    pub t_out_c: f64,
    pub t_in_c: f64,
    pub p_electric_w: f64,
    pub p_to_water_w: f64,
    pub p_to_air_w: f64,
    pub p_loss_pipe_w: f64,
    /// Heat offered to the driving circuit at this operating point.
    pub delivered_w: f64,
    pub mean_core_c: f64,
    pub mean_node_power_w: f64,
    pub heat_in_water: f64,
    pub n_throttled: usize,
    pub converged: bool,
}

/// Solves the rack side for a held outlet temperature. Electric power is a
/// direct function of the outlet; the small feedback of the water rise on
/// the mean rack temperature is iterated out.
pub fn rack_steady_at(plant: &PlantGraph, t_out_c: f64) -> RackSteady {
    use crate::thermo::Temperature;
    let c_rack = plant.flows.rack * plant.cp_water;
    let t_out = Temperature::new(t_out_c);
    let (p_el, throttling) = plant.cluster.total_power(t_out);
    let p_el = p_el.watts();
    let not_air = 1.0 - plant.cluster.psu_air_fraction;

    let mut p_tw = not_air * p_el;
    let mut converged = false;
    for _ in 0..200 {
        let t_mean = t_out_c - p_tw / (2.0 * c_rack);
        let next = not_air * p_el - plant.cluster.ua_rack_w_per_k * (t_mean - plant.room_c);
        if (next - p_tw).abs() < 1e-9 * p_tw.abs().max(1.0) {
            p_tw = next;
            converged = true;
            break;
        }
        p_tw = next;
    }
    let p_loss_pipe = plant.pipe_ua.rack * (t_out_c - plant.room_c);
    let dt = p_tw / c_rack;
    let mean_core_offset: f64 = plant.cluster.core_offsets_k.iter().sum::<f64>()
        / plant.cluster.n_nodes as f64;
    RackSteady {
        t_out_c,
        t_in_c: t_out_c - dt,
        p_electric_w: p_el,
        p_to_water_w: p_tw,
        p_to_air_w: p_el - p_tw,
        p_loss_pipe_w: p_loss_pipe,
        delivered_w: p_tw - p_loss_pipe,
        mean_core_c: t_out_c + plant.cluster.core_water_offset(t_out) + mean_core_offset,
        mean_node_power_w: plant.cluster.mean_node_power(t_out),
        heat_in_water: if p_el > 0.0 { p_tw / p_el } else { f64::NAN },
        n_throttled: throttling.len(),
        converged,
    }
}

/// Maximum heat per unit time the driving circuit can hand to the chiller
/// at a driving temperature: the table limit P_c_max/COP capped by the
/// drive flow's heat content above the standby temperature.
pub fn drive_uptake_limit(plant: &PlantGraph, t_drive_c: f64) -> f64 {
    use crate::thermo::Temperature;
    if t_drive_c < plant.chiller.standby_temp_c {
        return 0.0;
    }
    let c_drive = plant.flows.drive * plant.cp_glycol;
    let available = c_drive * (t_drive_c - plant.chiller.standby_temp_c);
    let table = plant
        .chiller
        .pd_max(Temperature::new(t_drive_c), true)
        .watts();
    available.min(table)
}

/// Uptake limit seen from a held rack outlet temperature. The driving
/// temperature sits below the outlet by the rack plumbing drop and the
/// small exchanger approach, both of which scale with the transferred
/// power; the tiny fixed point is iterated out.
pub fn drive_uptake_at_outlet(plant: &PlantGraph, t_out_c: f64, delivered_w: f64, beta: f64) -> f64 {
    let c_rack = plant.flows.rack * plant.cp_water;
    let c_drive = plant.flows.drive * plant.cp_glycol;
    let c_hot = (1.0 - beta) * c_rack;
    let eps = plant.hx.rack_drive;
    if c_hot <= 0.0 || eps <= 0.0 {
        return 0.0;
    }
    let c_min = c_drive.min(c_hot);
    let t_return = t_out_c - plant.pipe_ua.rack * (t_out_c - plant.room_c) / c_rack;
    let gap_per_w = (1.0 / (eps * c_min) - 1.0 / c_drive).max(0.0);
    let mut q = delivered_w.max(0.0);
    let mut t_drive = t_return;
    for _ in 0..4 {
        t_drive = t_return - gap_per_w * q;
        q = drive_uptake_limit(plant, t_drive).min(delivered_w.max(0.0));
    }
    drive_uptake_limit(plant, t_drive)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diagnosis {
    /// The curves intersect; the plant settles at `t_eq`.
    Converged,
    /// The chiller can never absorb the delivered heat: the temperature
    /// keeps going up without additional cooling.
    Runaway,
    /// The plant never reaches the chiller's standby threshold.
    Subcritical,
}

impl std::fmt::Display for Diagnosis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Diagnosis::Converged => write!(f, "converged"),
            Diagnosis::Runaway => write!(f, "runaway"),
            Diagnosis::Subcritical => write!(f, "subcritical"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EquilibriumReport {
    pub t_eq_c: Option<f64>,
    pub diagnosis: Diagnosis,
    /// (T, delivered P_d(T), absorbable P_d_max(T)) on a 1 K grid, for
    /// printing.
    pub table: Vec<(f64, f64, f64)>,
}

/// Finds the steady-state temperature where the heat delivered from the
/// rack circuit meets the chiller's absorbable power, by bracketing
/// bisection to 0.01 K on [standby, 80 C].
///
/// `valve_locked` pins the 3-way valve; `None` analyses the pure chiller
/// path (valve shut). With a locked open valve the diverted heat is
/// estimated against the primary circuit held at its support threshold.
pub fn solve_equilibrium(plant: &PlantGraph, valve_locked: Option<f64>) -> EquilibriumReport {
    let beta = valve_locked.unwrap_or(0.0).clamp(0.0, 1.0);
    let c_rack = plant.flows.rack * plant.cp_water;
    let c_primary = plant.flows.primary * plant.cp_water;

    let delivered = |t: f64| -> f64 {
        let steady = rack_steady_at(plant, t);
        let mut d = steady.delivered_w;
        if beta > 0.0 {
            let c_min = (beta * c_rack).min(c_primary);
            let t_return = t - steady.p_loss_pipe_w / c_rack;
            let p_add =
                (plant.hx.additional * c_min * (t_return - plant.support_threshold_c)).max(0.0);
            d -= p_add;
        }
        d
    };

    // Free temperature of the chiller-less plant; delivered() decreases
    // strictly with temperature, so bisection brackets it.
    let (mut lo, mut hi) = (-29.0, 139.0);
    let t_free = if delivered(lo) <= 0.0 {
        lo
    } else if delivered(hi) >= 0.0 {
        hi
    } else {
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if delivered(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };

    let standby = plant.chiller.standby_temp_c;
    let uptake = |t: f64| drive_uptake_at_outlet(plant, t, delivered(t), beta);
    let mut table = Vec::new();
    let mut t = standby;
    while t <= 80.0 + 1e-9 {
        table.push((t, delivered(t), uptake(t)));
        t += 1.0;
    }

    if t_free < standby {
        return EquilibriumReport {
            t_eq_c: None,
            diagnosis: Diagnosis::Subcritical,
            table,
        };
    }

    // Net imbalance h(T) = absorbable - delivered: negative below the
    // equilibrium, positive above.
    let h = |t: f64| uptake(t) - delivered(t);
    let mut bracket = None;
    let scan_step = 0.25;
    let mut t0 = standby;
    let mut h0 = h(t0);
    while t0 + scan_step <= 80.0 + 1e-9 {
        let t1 = t0 + scan_step;
        let h1 = h(t1);
        if h0 <= 0.0 && h1 > 0.0 {
            bracket = Some((t0, t1));
            break;
        }
        t0 = t1;
        h0 = h1;
    }

    match bracket {
        Some((mut lo, mut hi)) => {
            while hi - lo > 0.01 {
                let mid = 0.5 * (lo + hi);
                if h(mid) <= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            EquilibriumReport {
                t_eq_c: Some(0.5 * (lo + hi)),
                diagnosis: Diagnosis::Converged,
                table,
            }
        }
        None => EquilibriumReport {
            t_eq_c: None,
            diagnosis: Diagnosis::Runaway,
            table,
        },
    }
}

/// One steady-state operating point of the setpoint sweep, keyed by the
/// rack outlet temperature as in the measurement campaign.
#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub t_out_c: f64,
    pub t_in_c: f64,
    pub mean_core_c: f64,
    pub mean_node_power_w: f64,
    /// Mean node power relative to the first (coldest) sweep row.
    pub rel_node_power: f64,
    /// Chiller COP at this driving temperature; NaN below standby.
    pub cop: f64,
    pub heat_in_water: f64,
    /// Transferred-power fraction p_d / p_electric.
    pub transferred: f64,
    /// Energy-reuse fraction COP x heat-in-water.
    pub reuse_fraction: f64,
    pub p_electric_w: f64,
    pub p_d_w: f64,
    pub p_add_w: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Default)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub const COLUMNS: [&'static str; 13] = [
        "t_out_C",
        "t_in_C",
        "mean_core_C",
        "mean_node_power_W",
        "rel_node_power",
        "cop",
        "heat_in_water",
        "transferred",
        "reuse_fraction",
        "p_electric_W",
        "p_d_W",
        "p_add_W",
        "converged",
    ];

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.t_out_c,
                    r.t_in_c,
                    r.mean_core_c,
                    r.mean_node_power_w,
                    r.rel_node_power,
                    r.cop,
                    r.heat_in_water,
                    r.transferred,
                    r.reuse_fraction,
                    r.p_electric_w,
                    r.p_d_w,
                    r.p_add_w,
                    if r.converged { 1.0 } else { 0.0 },
                ]
            })
            .collect()
    }
}

/// Steady-state characterization of the plant over a list of rack outlet
/// temperatures.
///
/// Rows are evaluated quasi-statically with the controller holding the
/// matching inlet: below the equilibrium temperature the valve removes the
/// surplus (`p_add > 0`), above it the chiller runs under-fed with the
/// valve shut.
pub fn sweep_temperature(plant: &PlantGraph, setpoints: &[f64]) -> Result<SweepTable> {
    let mut rows = Vec::with_capacity(setpoints.len());
    let mut first_power = None;
    for &t_out in setpoints {
        if !(30.0..=75.0).contains(&t_out) {
            return Err(Error::OutOfRange {
                what: "sweep setpoint (valid range 30..75 C)",
                value: t_out,
            });
        }
        let steady = rack_steady_at(plant, t_out);
        let active = t_out >= plant.chiller.standby_temp_c;
        let uptake = drive_uptake_at_outlet(plant, t_out, steady.delivered_w, 0.0);
        let p_d = steady.delivered_w.min(uptake).max(0.0);
        let p_add = (steady.delivered_w - p_d).max(0.0);
        let cop = if active {
            plant
                .chiller
                .cop_curve
                .value(t_out)
        } else {
            f64::NAN
        };
        let first = *first_power.get_or_insert(steady.mean_node_power_w);
        rows.push(SweepRow {
            t_out_c: t_out,
            t_in_c: steady.t_in_c,
            mean_core_c: steady.mean_core_c,
            mean_node_power_w: steady.mean_node_power_w,
            rel_node_power: steady.mean_node_power_w / first,
            cop,
            heat_in_water: steady.heat_in_water,
            transferred: p_d / steady.p_electric_w.max(1e-12),
            reuse_fraction: cop * steady.heat_in_water,
            p_electric_w: steady.p_electric_w,
            p_d_w: p_d,
            p_add_w: p_add,
            converged: steady.converged,
        });
    }
    Ok(SweepTable { rows })
}
