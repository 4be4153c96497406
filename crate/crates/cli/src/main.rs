//! Command-line front end: validate configs, run transients, analyze the
//! equilibrium, sweep setpoints, and emit the figure-reproduction bundle.
//!
//! Exit codes: 0 success, 2 config error, 3 audit failure, 4 no
//! equilibrium, 5 output conflict.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use heatloop_core::{
    apply_sensor_noise, build_plant, load_config, reproduce_figures, run, save_config,
    solve_equilibrium, sweep_temperature, PlantConfig, Schedule,
};

const EXIT_CONFIG: u8 = 2;
const EXIT_AUDIT: u8 = 3;
const EXIT_NO_EQUILIBRIUM: u8 = 4;
const EXIT_OUTPUT_CONFLICT: u8 = 5;

#[derive(Parser)]
#[command(name = "heatloop", version, about = "Hot-water-cooled cluster plant simulator")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Plant configuration file (TOML); defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (env HEATLOOP_OUT, default ./out).
    #[arg(long, global = true, env = "HEATLOOP_OUT", default_value = "out")]
    out: PathBuf,

    /// Override of the run seed (config key sim.seed).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Override of the step size in seconds (config key sim.dt_s).
    #[arg(long, global = true)]
    dt: Option<f64>,

    /// Override of the run duration in seconds (config key sim.duration_s).
    #[arg(long, global = true)]
    duration: Option<f64>,

    /// Set any config key by its dotted path, e.g. --set pid.setpoint_c=60.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    sets: Vec<String>,

    /// Overwrite existing output files.
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check a config and print the resolved effective configuration.
    Validate,
    /// Integrate the plant in time and write true + noisy telemetry.
    Run {
        /// Scenario event file (TOML).
        #[arg(long)]
        scenario: Option<PathBuf>,
    },
    /// Solve for the steady-state temperature of the chiller path.
    Equilibrate,
    /// Steady-state characterization over a list of outlet setpoints.
    Sweep {
        /// Comma-separated outlet temperatures in degC, e.g. 50,55,60.
        #[arg(long, value_delimiter = ',', required = true)]
        setpoints: Vec<f64>,
    },
    /// Emit the figure-reproduction dataset bundle with its manifest.
    Reproduce,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify(&err))
        }
    }
}

fn classify(err: &anyhow::Error) -> u8 {
    if let Some(core) = err.downcast_ref::<heatloop_core::Error>() {
        use heatloop_core::Error as E;
        return match core {
            E::InvalidConfig { .. } | E::Parse(_) | E::Version { .. } | E::OutOfRange { .. } => {
                EXIT_CONFIG
            }
            _ => 1,
        };
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return EXIT_CONFIG;
    }
    1
}

fn dispatch(cli: &Cli) -> anyhow::Result<ExitCode> {
    let config = effective_config(&cli.common)?;
    match &cli.command {
        Command::Validate => cmd_validate(&config),
        Command::Run { scenario } => cmd_run(&cli.common, &config, scenario.as_deref()),
        Command::Equilibrate => cmd_equilibrate(&config),
        Command::Sweep { setpoints } => cmd_sweep(&cli.common, &config, setpoints),
        Command::Reproduce => cmd_reproduce(&cli.common, &config),
    }
}

/// Loads the config file and applies the command-line overrides; `--set`
/// edits go through the same parser and validation as the file itself.
fn effective_config(common: &CommonArgs) -> anyhow::Result<PlantConfig> {
    let text = match &common.config {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| anyhow::anyhow!("cannot read config {}: {e}", path.display()))?,
        None => String::new(),
    };
    let mut config = load_config(&text)?;
    if !common.sets.is_empty() {
        let mut value: toml::Value = toml::Value::try_from(&config)?;
        for entry in &common.sets {
            apply_set(&mut value, entry).map_err(|e| heatloop_core::Error::InvalidConfig {
                field: entry.clone(),
                reason: e.to_string(),
            })?;
        }
        let text = toml::to_string(&value)?;
        config = load_config(&text)?;
    }
    if let Some(seed) = common.seed {
        config.sim.seed = seed;
    }
    if let Some(dt) = common.dt {
        config.sim.dt_s = dt;
    }
    if let Some(duration) = common.duration {
        config.sim.duration_s = duration;
    }
    config.validate()?;
    Ok(config)
}

fn apply_set(value: &mut toml::Value, entry: &str) -> anyhow::Result<()> {
    let (path, raw) = entry
        .split_once('=')
        .ok_or_else(|| anyhow::anyhow!("--set expects KEY=VALUE, got `{entry}`"))?;
    let parsed: toml::Value = if let Ok(i) = raw.parse::<i64>() {
        toml::Value::Integer(i)
    } else if let Ok(f) = raw.parse::<f64>() {
        toml::Value::Float(f)
    } else if let Ok(b) = raw.parse::<bool>() {
        toml::Value::Boolean(b)
    } else if raw.trim_start().starts_with('[') {
        raw.parse::<toml::Value>()
            .map_err(|e| anyhow::anyhow!("bad --set value `{raw}`: {e}"))?
    } else {
        toml::Value::String(raw.to_string())
    };

    let mut cursor = value;
    let segments: Vec<&str> = path.split('.').collect();
    for (i, segment) in segments.iter().enumerate() {
        let table = cursor
            .as_table_mut()
            .ok_or_else(|| anyhow::anyhow!("`{path}` does not address a config table"))?;
        if i + 1 == segments.len() {
            if !table.contains_key(*segment) {
                anyhow::bail!("unknown config key `{path}`");
            }
            table.insert(segment.to_string(), parsed);
            return Ok(());
        }
        cursor = table
            .get_mut(*segment)
            .ok_or_else(|| anyhow::anyhow!("unknown config key `{path}`"))?;
    }
    unreachable!("split('.') yields at least one segment")
}

/// Refuses to overwrite existing artifacts unless `--force` is given.
fn ensure_writable(paths: &[PathBuf], force: bool) -> Result<(), ExitCode> {
    if force {
        return Ok(());
    }
    for path in paths {
        if path.exists() {
            eprintln!(
                "error: {} already exists; pass --force to overwrite",
                path.display()
            );
            return Err(ExitCode::from(EXIT_OUTPUT_CONFLICT));
        }
    }
    Ok(())
}

fn cmd_validate(config: &PlantConfig) -> anyhow::Result<ExitCode> {
    // Reaching this point means the config already validated.
    print!("{}", save_config(config));
    Ok(ExitCode::SUCCESS)
}

fn cmd_run(
    common: &CommonArgs,
    config: &PlantConfig,
    scenario: Option<&Path>,
) -> anyhow::Result<ExitCode> {
    let schedule = match scenario {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| anyhow::anyhow!("cannot read scenario {}: {e}", path.display()))?;
            Some(Schedule::from_toml(&text)?)
        }
        None => None,
    };
    let plant = build_plant(config)?;

    let true_path = common.out.join("timeseries_true.csv");
    let noisy_path = common.out.join("timeseries_noisy.csv");
    if let Err(code) = ensure_writable(&[true_path.clone(), noisy_path.clone()], common.force) {
        return Ok(code);
    }
    std::fs::create_dir_all(&common.out)?;

    let state = plant.initial_state();
    let series = run(
        &plant,
        &state,
        config.sim.duration_s,
        config.sim.dt_s,
        schedule.as_ref(),
    )?;
    let noisy = apply_sensor_noise(&series, &plant.sensors, plant.seed);

    heatloop_core::timeseries::write_timeseries(
        &series,
        std::io::BufWriter::new(std::fs::File::create(&true_path)?),
    )?;
    heatloop_core::timeseries::write_timeseries(
        &noisy,
        std::io::BufWriter::new(std::fs::File::create(&noisy_path)?),
    )?;

    // Audit summary over the whole run.
    let mut max_residual = 0.0f64;
    for a in &audit_all(&series)? {
        max_residual = max_residual.max(*a);
    }
    let last = series.rows.last().expect("run produced samples");
    let t_out_idx = series.column_index("t_rack_out_C")?;
    println!("samples: {}", series.rows.len());
    println!("final rack outlet: {:.2} C", last[t_out_idx]);
    println!("max audit residual: {max_residual:.3e}");
    println!("wrote {} and {}", true_path.display(), noisy_path.display());

    if max_residual > 1e-6 {
        eprintln!("error: energy audit residual {max_residual:.3e} exceeds 1e-6");
        return Ok(ExitCode::from(EXIT_AUDIT));
    }
    Ok(ExitCode::SUCCESS)
}

/// Recomputes the audit from the recorded columns, so the written artifact
/// is what gets judged.
fn audit_all(series: &heatloop_core::timeseries::TimeSeries) -> anyhow::Result<Vec<f64>> {
    let col = |name: &str| -> anyhow::Result<usize> { Ok(series.column_index(name)?) };
    let sources = [col("p_electric_W")?, col("p_gpu_W")?, col("pump_power_W")?, col("fan_power_W")?];
    let sinks = [
        col("p_to_air_W")?,
        col("p_loss_W")?,
        col("p_loss_drive_W")?,
        col("p_loss_primary_W")?,
        col("p_loss_recool_W")?,
        col("q_central_W")?,
        col("q_recooler_W")?,
        col("pump_power_W")?,
        col("fan_power_W")?,
        col("p_storage_rack_W")?,
        col("p_storage_tank_W")?,
        col("p_storage_primary_W")?,
        col("p_storage_recool_W")?,
    ];
    Ok(series
        .rows
        .iter()
        .map(|row| {
            let in_: f64 = sources.iter().map(|&i| row[i]).sum();
            let out: f64 = sinks.iter().map(|&i| row[i]).sum();
            (in_ - out).abs() / row[sources[0]].max(1.0)
        })
        .collect())
}

fn cmd_equilibrate(config: &PlantConfig) -> anyhow::Result<ExitCode> {
    let plant = build_plant(config)?;
    let report = solve_equilibrium(&plant, None);
    println!("{:>6} {:>12} {:>12}", "T_C", "P_d_W", "P_d_max_W");
    for (t, delivered, uptake) in &report.table {
        println!("{t:>6.1} {delivered:>12.1} {uptake:>12.1}");
    }
    match (report.t_eq_c, report.diagnosis) {
        (Some(t_eq), _) => {
            println!("T_eq = {t_eq:.2} C");
            Ok(ExitCode::SUCCESS)
        }
        (None, diagnosis) => {
            println!("no equilibrium: {diagnosis}");
            Ok(ExitCode::from(EXIT_NO_EQUILIBRIUM))
        }
    }
}

fn cmd_sweep(
    common: &CommonArgs,
    config: &PlantConfig,
    setpoints: &[f64],
) -> anyhow::Result<ExitCode> {
    let plant = build_plant(config)?;
    let table = sweep_temperature(&plant, setpoints)?;

    let path = common.out.join("sweep.csv");
    if let Err(code) = ensure_writable(std::slice::from_ref(&path), common.force) {
        return Ok(code);
    }
    std::fs::create_dir_all(&common.out)?;

    let mut series = heatloop_core::timeseries::TimeSeries::new(
        heatloop_core::SweepTable::COLUMNS
            .iter()
            .map(|s| s.to_string())
            .collect(),
    );
    series.rows = table.to_rows();
    heatloop_core::timeseries::write_timeseries(
        &series,
        std::io::BufWriter::new(std::fs::File::create(&path)?),
    )?;

    for row in &table.rows {
        println!(
            "t_out {:5.1} C  inlet {:5.1} C  cop {:5.3}  heat-in-water {:5.3}  reuse {:5.3}",
            row.t_out_c, row.t_in_c, row.cop, row.heat_in_water, row.reuse_fraction
        );
    }
    println!("wrote {}", path.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_reproduce(common: &CommonArgs, config: &PlantConfig) -> anyhow::Result<ExitCode> {
    let plant = build_plant(config)?;
    let bundle = reproduce_figures(&plant, config)?;

    let mut paths: Vec<PathBuf> = bundle
        .datasets
        .iter()
        .map(|d| common.out.join(format!("{}.csv", d.name)))
        .collect();
    paths.push(common.out.join("manifest.toml"));
    if let Err(code) = ensure_writable(&paths, common.force) {
        return Ok(code);
    }
    std::fs::create_dir_all(&common.out)?;
    let written = bundle.write_to_dir(&common.out)?;
    for path in &written {
        println!("wrote {}", path.display());
    }
    println!(
        "core temperature fit: mu {:.2} C sigma {:.2} K",
        bundle.core_temp_fit.0, bundle.core_temp_fit.1
    );
    println!(
        "node power fit: mu {:.2} W sigma {:.2} W",
        bundle.node_power_fit.0, bundle.node_power_fit.1
    );
    Ok(ExitCode::SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_overrides_parse() {
        let config = PlantConfig::default();
        let mut value = toml::Value::try_from(&config).unwrap();
        apply_set(&mut value, "pid.setpoint_c=60.5").unwrap();
        apply_set(&mut value, "sim.seed=7").unwrap();
        assert!(apply_set(&mut value, "pid.bogus=1").is_err());
        assert!(apply_set(&mut value, "no_equals").is_err());
        let text = toml::to_string(&value).unwrap();
        let back = load_config(&text).unwrap();
        assert_eq!(back.pid.setpoint_c, 60.5);
        assert_eq!(back.sim.seed, 7);
    }
}
