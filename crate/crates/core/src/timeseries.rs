//! Column-oriented step records and their delimited-text format.
//!
//! The on-disk format is comma-separated text: one header row with exact
//! column names (units suffixed, e.g. `t_rack_out_C`, `p_d_W`), one row per
//! sample, decimal point, six significant digits, LF line endings.

use std::io::Write;

use crate::error::{Error, Result};
use crate::plant::StepResult;

/// Fixed column order of the step schema; `time_s` first.
pub const STEP_COLUMNS: [&str; 42] = [
    "time_s",
    "t_rack_in_C",
    "t_rack_out_C",
    "t_rack_return_C",
    "t_tank_C",
    "t_drive_supply_C",
    "t_drive_return_C",
    "t_primary_supply_C",
    "t_primary_hot_C",
    "t_primary_chilled_C",
    "t_recool_supply_C",
    "t_recool_hot_C",
    "t_recool_out_C",
    "valve_fraction",
    "fan_speed",
    "chiller_active",
    "mass_flow_rack_kg_s",
    "mass_flow_drive_kg_s",
    "mass_flow_primary_kg_s",
    "mass_flow_recool_kg_s",
    "p_electric_W",
    "p_gpu_W",
    "p_r_W",
    "p_to_air_W",
    "p_loss_W",
    "p_add_W",
    "p_d_W",
    "p_c_W",
    "p_reject_W",
    "q_hx_drive_W",
    "q_central_W",
    "q_recooler_W",
    "fan_power_W",
    "pump_power_W",
    "p_storage_rack_W",
    "p_storage_tank_W",
    "p_storage_primary_W",
    "p_storage_recool_W",
    "p_loss_drive_W",
    "p_loss_primary_W",
    "p_loss_recool_W",
    "cop",
];

/// A rectangular table of samples with a fixed column set.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl TimeSeries {
    pub fn new(columns: Vec<String>) -> Self {
        TimeSeries {
            columns,
            rows: Vec::new(),
        }
    }

    /// Empty series with the canonical step schema.
    pub fn new_step_schema() -> Self {
        TimeSeries::new(STEP_COLUMNS.iter().map(|s| s.to_string()).collect())
    }

    pub fn push_step(&mut self, r: &StepResult) {
        self.rows.push(vec![
            r.time_s,
            r.t_rack_in_c,
            r.t_rack_out_c,
            r.t_rack_return_c,
            r.t_tank_c,
            r.t_drive_supply_c,
            r.t_drive_return_c,
            r.t_primary_supply_c,
            r.t_primary_hot_c,
            r.t_primary_chilled_c,
            r.t_recool_supply_c,
            r.t_recool_hot_c,
            r.t_recool_out_c,
            r.valve_fraction,
            r.fan_speed,
            if r.chiller_active { 1.0 } else { 0.0 },
            r.mass_flow_rack_kg_s,
            r.mass_flow_drive_kg_s,
            r.mass_flow_primary_kg_s,
            r.mass_flow_recool_kg_s,
            r.p_electric_w,
            r.p_gpu_w,
            r.p_r_w,
            r.p_to_air_w,
            r.p_loss_w,
            r.p_add_w,
            r.p_d_w,
            r.p_c_w,
            r.p_reject_w,
            r.q_hx_drive_w,
            r.q_central_w,
            r.q_recooler_w,
            r.fan_power_w,
            r.pump_power_w,
            r.p_storage_rack_w,
            r.p_storage_tank_w,
            r.p_storage_primary_w,
            r.p_storage_recool_w,
            r.p_loss_drive_w,
            r.p_loss_primary_w,
            r.p_loss_recool_w,
            r.cop,
        ]);
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::SchemaMismatch(format!("missing column `{name}`")))
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let idx = self.column_index(name)?;
        Ok(self.rows.iter().map(|r| r[idx]).collect())
    }
}

/// Formats a value with six significant digits, plain notation in the
/// human range and scientific outside it. Deterministic.
pub fn fmt_sig6(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if v.is_nan() {
        return "nan".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let magnitude = v.abs();
    if (1e-4..1e7).contains(&magnitude) {
        let decimals = (5 - magnitude.log10().floor() as i32).max(0) as usize;
        let s = format!("{v:.decimals$}");
        // Trim trailing zeros but keep at least one digit after the point.
        if s.contains('.') {
            let trimmed = s.trim_end_matches('0');
            let trimmed = trimmed.strip_suffix('.').unwrap_or(trimmed);
            trimmed.to_string()
        } else {
            s
        }
    } else {
        format!("{v:.5e}")
    }
}

fn parse_value(text: &str) -> Result<f64> {
    match text {
        "nan" => Ok(f64::NAN),
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => text
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad numeric field `{text}`"))),
    }
}

/// Writes a series in the delimited-text format; returns the byte count.
pub fn write_timeseries(series: &TimeSeries, mut destination: impl Write) -> Result<u64> {
    let mut written = 0u64;
    let header = series.columns.join(",");
    destination.write_all(header.as_bytes())?;
    destination.write_all(b"\n")?;
    written += header.len() as u64 + 1;
    let mut line = String::new();
    for row in &series.rows {
        line.clear();
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&fmt_sig6(*v));
        }
        line.push('\n');
        destination.write_all(line.as_bytes())?;
        written += line.len() as u64;
    }
    Ok(written)
}

/// Reads a series back. When `expected_columns` is given, every listed
/// column must be present and no unknown columns are allowed.
pub fn read_timeseries(text: &str, expected_columns: Option<&[&str]>) -> Result<TimeSeries> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::SchemaMismatch("empty document".into()))?;
    let columns: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    if let Some(expected) = expected_columns {
        for name in expected {
            if !columns.iter().any(|c| c == name) {
                return Err(Error::SchemaMismatch(format!("missing column `{name}`")));
            }
        }
        for c in &columns {
            if !expected.contains(&c.as_str()) {
                return Err(Error::SchemaMismatch(format!("unknown column `{c}`")));
            }
        }
    }
    let mut rows = Vec::new();
    for (line_no, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != columns.len() {
            return Err(Error::SchemaMismatch(format!(
                "row {} has {} fields, header has {} columns",
                line_no + 2,
                fields.len(),
                columns.len()
            )));
        }
        let row: Result<Vec<f64>> = fields.iter().map(|f| parse_value(f.trim())).collect();
        rows.push(row?);
    }
    Ok(TimeSeries { columns, rows })
}

/// Writes an ad-hoc table of named columns (figure datasets) in the same
/// delimited format.
pub fn write_table(columns: &[(&str, &[f64])], destination: impl Write) -> Result<u64> {
    let n = columns.first().map(|(_, v)| v.len()).unwrap_or(0);
    debug_assert!(columns.iter().all(|(_, v)| v.len() == n));
    let mut series = TimeSeries::new(columns.iter().map(|(name, _)| name.to_string()).collect());
    for i in 0..n {
        series.rows.push(columns.iter().map(|(_, v)| v[i]).collect());
    }
    write_timeseries(&series, destination)
}
