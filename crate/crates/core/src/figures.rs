//! Reproduction datasets for the measurement-figure analogs: per-node
//! scatter curves, histograms with Gaussian fits, and the published
//! ratio curves, all driven by the steady-state sweep machinery.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{config_hash, PlantConfig};
use crate::error::{Error, Result};
use crate::plant::PlantGraph;
use crate::sim::rack_steady_at;
use crate::thermo::Temperature;
use crate::timeseries::{fmt_sig6, write_table};

/// Maximum-likelihood Gaussian fit: sample mean and population sigma.
/// This is the fit used for every histogram reproduction.
pub fn fit_gaussian(samples: &[f64]) -> Result<(f64, f64)> {
    if samples.len() < 3 {
        return Err(Error::TooFewSamples {
            got: samples.len(),
            need: 3,
        });
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / n;
    Ok((mean, var.sqrt()))
}

/// One figure-analog dataset: a named table of equal-length columns.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: &'static str,
    pub columns: Vec<(&'static str, Vec<f64>)>,
}

/// The full reproduction bundle; a pure function of (config, seed).
#[derive(Debug, Clone)]
pub struct FigureBundle {
    pub datasets: Vec<Dataset>,
    /// Gaussian fit of the core-temperature histogram (mu degC, sigma K).
    pub core_temp_fit: (f64, f64),
    /// Gaussian fit of the node-power histogram (mu W, sigma W).
    pub node_power_fit: (f64, f64),
    /// Indices of the seeded 13-node measurement subset.
    pub subset: Vec<usize>,
    pub seed: u64,
    pub config_hash: String,
}

/// Outlet temperature of the core-temperature histogram analog.
const HISTOGRAM_T_OUT_C: f64 = 67.0;
/// Span of the per-node scatter figures.
const SCATTER_T_OUT_RANGE: (f64, f64) = (49.0, 70.0);
/// Nodes in the scatter subset, mirroring the measurement campaign.
const SUBSET_SIZE: usize = 13;

/// Builds every figure-analog dataset from the plant's steady-state
/// behavior. Deterministic: the node subset derives from the plant seed.
pub fn reproduce_figures(plant: &PlantGraph, config: &PlantConfig) -> Result<FigureBundle> {
    let n_nodes = plant.cluster.n_nodes;
    let mut rng = ChaCha8Rng::seed_from_u64(plant.seed ^ 0x5u64.rotate_left(32));
    let mut subset: Vec<usize> = if n_nodes <= SUBSET_SIZE {
        (0..n_nodes).collect()
    } else {
        sample(&mut rng, n_nodes, SUBSET_SIZE).into_vec()
    };
    subset.sort_unstable();

    let grid: Vec<f64> = {
        let (lo, hi) = SCATTER_T_OUT_RANGE;
        let mut t = lo;
        let mut g = Vec::new();
        while t <= hi + 1e-9 {
            g.push(t);
            t += 1.0;
        }
        g
    };

    // Core temperature of the subset vs outlet temperature: mean and
    // node-to-node spread.
    let mut core_mean = Vec::new();
    let mut core_std = Vec::new();
    for &t in &grid {
        let temps: Vec<f64> = subset
            .iter()
            .map(|&i| {
                plant
                    .cluster
                    .core_temperature(Temperature::new(t), i)
                    .expect("subset index valid")
                    .celsius()
            })
            .collect();
        let (mu, sigma) = fit_gaussian(&temps)?;
        core_mean.push(mu);
        core_std.push(sigma);
    }
    let fig4a = Dataset {
        name: "fig4a_core_temp_vs_t_out",
        columns: vec![
            ("t_out_C", grid.clone()),
            ("core_mean_C", core_mean),
            ("core_std_K", core_std),
        ],
    };

    // Core-temperature histogram of the whole cluster at the reference
    // operating point. The configured spread already reflects measured
    // values, so no sensor noise is layered on top.
    let core_samples: Vec<f64> = (0..n_nodes)
        .map(|i| {
            plant
                .cluster
                .core_temperature(Temperature::new(HISTOGRAM_T_OUT_C), i)
                .expect("index valid")
                .celsius()
        })
        .collect();
    let core_temp_fit = fit_gaussian(&core_samples)?;
    let fig4b = Dataset {
        name: "fig4b_core_temp_histogram",
        columns: vec![
            ("node_index", (0..n_nodes).map(|i| i as f64).collect()),
            ("core_temp_C", core_samples),
        ],
    };

    // Node power interpolated to the reference core temperature, as the
    // measurement procedure prescribes, then fitted.
    let power_samples: Vec<f64> = (0..n_nodes)
        .map(|i| {
            plant
                .cluster
                .node_power(Temperature::new(plant.cluster.core_ref_c), i)
                .expect("index valid")
                .watts()
        })
        .collect();
    let node_power_fit = fit_gaussian(&power_samples)?;
    let fig5b = Dataset {
        name: "fig5b_node_power_histogram",
        columns: vec![
            ("node_index", (0..n_nodes).map(|i| i as f64).collect()),
            ("power_at_ref_core_W", power_samples),
        ],
    };

    // Relative node power increase of the subset vs outlet temperature,
    // normalized at the coldest grid point.
    let subset_mean_power = |t: f64| -> f64 {
        let offset = plant.cluster.core_water_offset(Temperature::new(t));
        subset
            .iter()
            .map(|&i| {
                let core = t + offset + plant.cluster.core_offsets_k[i];
                plant
                    .cluster
                    .node_power(Temperature::new(core), i)
                    .expect("index valid")
                    .watts()
            })
            .sum::<f64>()
            / subset.len() as f64
    };
    let base_power = subset_mean_power(grid[0]);
    let rel_power: Vec<f64> = grid.iter().map(|&t| subset_mean_power(t) / base_power).collect();
    let fig6a = Dataset {
        name: "fig6a_relative_node_power",
        columns: vec![("t_out_C", grid.clone()), ("rel_node_power", rel_power)],
    };

    // COP over the active driving-temperature range.
    let cop_grid: Vec<f64> = {
        let mut t = plant.chiller.standby_temp_c.max(57.0);
        let mut g = Vec::new();
        while t <= 70.0 + 1e-9 {
            g.push(t);
            t += 0.5;
        }
        g
    };
    let cop_values: Vec<f64> = cop_grid
        .iter()
        .map(|&t| plant.chiller.cop_curve.value(t))
        .collect();
    let fig6b = Dataset {
        name: "fig6b_cop",
        columns: vec![("t_out_C", cop_grid), ("cop", cop_values)],
    };

    // Heat-in-water and transferred-power fractions over a wide span.
    let wide: Vec<f64> = {
        let mut t = 40.0;
        let mut g = Vec::new();
        while t <= 74.0 + 1e-9 {
            g.push(t);
            t += 1.0;
        }
        g
    };
    let mut heat_in_water = Vec::new();
    let mut transferred = Vec::new();
    for &t in &wide {
        let steady = rack_steady_at(plant, t);
        heat_in_water.push(steady.heat_in_water);
        let uptake = crate::sim::drive_uptake_at_outlet(plant, t, steady.delivered_w, 0.0);
        let p_d = steady.delivered_w.min(uptake).max(0.0);
        transferred.push(p_d / steady.p_electric_w.max(1e-12));
    }
    let fig7a = Dataset {
        name: "fig7a_heat_in_water",
        columns: vec![("t_out_C", wide.clone()), ("heat_in_water", heat_in_water)],
    };
    let fig7b = Dataset {
        name: "fig7b_transferred_power",
        columns: vec![("t_out_C", wide), ("transferred", transferred)],
    };

    Ok(FigureBundle {
        datasets: vec![fig4a, fig4b, fig5b, fig6a, fig6b, fig7a, fig7b],
        core_temp_fit,
        node_power_fit,
        subset,
        seed: plant.seed,
        config_hash: config_hash(config),
    })
}

impl FigureBundle {
    /// Writes one delimited file per dataset plus `manifest.toml` into an
    /// existing directory. Repeated invocations produce identical bytes.
    pub fn write_to_dir(&self, dir: &std::path::Path) -> Result<Vec<std::path::PathBuf>> {
        let mut written = Vec::new();
        for ds in &self.datasets {
            let path = dir.join(format!("{}.csv", ds.name));
            let file = std::fs::File::create(&path)?;
            let cols: Vec<(&str, &[f64])> = ds
                .columns
                .iter()
                .map(|(name, values)| (*name, values.as_slice()))
                .collect();
            write_table(&cols, std::io::BufWriter::new(file))?;
            written.push(path);
        }
        let manifest_path = dir.join("manifest.toml");
        std::fs::write(&manifest_path, self.manifest())?;
        written.push(manifest_path);
        Ok(written)
    }

    /// Manifest text: figure list, config hash, seed, fit results.
    pub fn manifest(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("seed = {}\n", self.seed));
        out.push_str(&format!("config_hash = \"{}\"\n", self.config_hash));
        let subset: Vec<String> = self.subset.iter().map(|i| i.to_string()).collect();
        out.push_str(&format!("node_subset = [{}]\n", subset.join(", ")));
        out.push_str("\n[figures]\n");
        for ds in &self.datasets {
            out.push_str(&format!("{} = \"{}.csv\"\n", ds.name, ds.name));
        }
        out.push_str("\n[fits.core_temperature]\n");
        out.push_str(&format!("mu_C = {}\n", fmt_sig6(self.core_temp_fit.0)));
        out.push_str(&format!("sigma_K = {}\n", fmt_sig6(self.core_temp_fit.1)));
        out.push_str("\n[fits.node_power]\n");
        out.push_str(&format!("mu_W = {}\n", fmt_sig6(self.node_power_fit.0)));
        out.push_str(&format!("sigma_W = {}\n", fmt_sig6(self.node_power_fit.1)));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::build_plant;

    #[test]
    fn fit_gaussian_basics() {
        assert_eq!(fit_gaussian(&[1.0, 1.0, 1.0]).unwrap(), (1.0, 0.0));
        assert!(matches!(
            fit_gaussian(&[0.0, 2.0]),
            Err(Error::TooFewSamples { got: 2, need: 3 })
        ));
    }

    #[test]
    fn fit_gaussian_is_consistent() {
        use rand::SeedableRng;
        use rand_distr::{Distribution, Normal};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let normal = Normal::new(84.0, 2.8).unwrap();
        let samples: Vec<f64> = (0..10_000).map(|_| normal.sample(&mut rng)).collect();
        let (mu, sigma) = fit_gaussian(&samples).unwrap();
        assert!((mu - 84.0).abs() < 0.1, "mu {mu}");
        assert!((sigma - 2.8).abs() < 0.1, "sigma {sigma}");
    }

    #[test]
    fn bundle_has_seven_datasets_and_sane_fits() {
        let cfg = PlantConfig::default();
        let plant = build_plant(&cfg).unwrap();
        let bundle = reproduce_figures(&plant, &cfg).unwrap();
        assert_eq!(bundle.datasets.len(), 7);
        assert_eq!(bundle.subset.len(), 13);
        let (mu, sigma) = bundle.core_temp_fit;
        assert!((mu - 84.0).abs() < 0.5, "core fit mu {mu}");
        assert!((sigma - 2.8).abs() < 0.3, "core fit sigma {sigma}");
        let (mu, sigma) = bundle.node_power_fit;
        assert!((mu - 206.0).abs() < 1.0, "power fit mu {mu}");
        assert!((sigma - 5.4).abs() < 0.6, "power fit sigma {sigma}");
    }

    #[test]
    fn bundle_is_a_pure_function_of_config_and_seed() {
        let cfg = PlantConfig::default();
        let plant = build_plant(&cfg).unwrap();
        let a = reproduce_figures(&plant, &cfg).unwrap();
        let b = reproduce_figures(&plant, &cfg).unwrap();
        assert_eq!(a.manifest(), b.manifest());
        assert_eq!(a.subset, b.subset);
        for (da, db) in a.datasets.iter().zip(&b.datasets) {
            assert_eq!(da.columns, db.columns);
        }
    }
}
