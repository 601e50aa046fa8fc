//! The four experiment commands: tables, sweep, kappa, probe.

use anyhow::{anyhow, Context};
use dmetric_core::rng::derive_seed;
use dmetric_core::{
    continuity_probe, disagreement_from_indices, euclidean_distance, exact_disagreement,
    halfplane_of, region_indices, ContinuityProbeResult, DistanceEstimate, HalfPlane,
    InputMeasure, NetworkParams, SampleSet,
};
use rayon::prelude::*;
use serde::Serialize;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::config::{ExperimentConfig, Resolved};
use crate::{config_err, runtime_err, CliResult};

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn file_slug(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

/// Per-measure sample set, seeded from the config seed and the measure
/// label so every command sees the same points for the same config.
fn measure_samples(config: &ExperimentConfig, label: &str, mu: &InputMeasure) -> SampleSet {
    mu.sample(config.n_samples, derive_seed(config.seed, &format!("samples/{label}")))
}

// ======================================================================
// tables
// ======================================================================

#[derive(Serialize)]
struct TablesReport<'a> {
    config: &'a ExperimentConfig,
    networks: Vec<String>,
    euclidean: MatrixBlock,
    measures: Vec<MeasureBlock>,
    notes: Vec<String>,
}

#[derive(Serialize)]
struct MatrixBlock {
    values: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    published: Option<Vec<Vec<f64>>>,
}

#[derive(Serialize)]
struct MeasureBlock {
    label: String,
    kappa: f64,
    n_samples: usize,
    d_mu: Vec<Vec<f64>>,
    ci95: Vec<Vec<f64>>,
    /// Closed-form values where both networks have a proper half-plane;
    /// absent entirely for architectures the oracle does not cover.
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<Vec<Vec<Option<f64>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    published: Option<Vec<Vec<f64>>>,
}

pub fn cmd_tables(res: &Resolved, out: &Path) -> CliResult<()> {
    let n = res.networks.len();
    if n < 2 {
        return Err(config_err(anyhow!("tables needs at least 2 networks, config has {n}")));
    }
    fs::create_dir_all(out)
        .with_context(|| format!("creating output directory {}", out.display()))
        .map_err(runtime_err)?;

    let names: Vec<String> = res.networks.iter().map(|(name, _)| name.clone()).collect();
    let flats: Vec<Vec<f64>> = res.networks.iter().map(|(_, w)| w.flatten()).collect();
    let mut euclid = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            euclid[i][j] = euclidean_distance(&flats[i], &flats[j]).map_err(runtime_err)?;
        }
    }

    // Half-plane oracle, for single-layer two-class networks on 2-D input.
    let halfplanes: Option<Vec<Option<HalfPlane>>> = if res.config.layer_dims == [2, 2] {
        Some(
            res.networks
                .iter()
                .map(|(_, w)| halfplane_of(w).ok().filter(|h| !h.degenerate))
                .collect(),
        )
    } else {
        None
    };

    let published_for = |key: &str| -> Option<Vec<Vec<f64>>> {
        res.config.published_values.as_ref()?.get(key).cloned()
    };

    let mut notes = Vec::new();
    if res.config.published_values.is_some() {
        notes.push(
            "published values come from an external write-up whose sampling setup is not \
             fully specified; side-by-side entries are indicative, not a strict check"
                .to_string(),
        );
    }
    if let Some(hs) = &halfplanes {
        let degenerate: Vec<&str> = hs
            .iter()
            .zip(&names)
            .filter(|(h, _)| h.is_none())
            .map(|(_, name)| name.as_str())
            .collect();
        if !degenerate.is_empty() {
            notes.push(format!(
                "no half-plane oracle for networks with a constant decision: {}",
                degenerate.join(", ")
            ));
        }
    } else {
        notes.push(
            "closed-form oracle covers only single-layer two-class networks on 2-D input"
                .to_string(),
        );
    }

    let mut blocks = Vec::new();
    for (label, mu) in &res.measures {
        let samples = measure_samples(&res.config, label, mu);
        let idx: Vec<_> = res
            .networks
            .iter()
            .map(|(_, w)| region_indices(w, &samples, res.config.tie_tol))
            .collect::<Result<_, _>>()
            .map_err(runtime_err)?;
        let mut d_mu = vec![vec![0.0; n]; n];
        let mut ci95 = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let est = disagreement_from_indices(&idx[i], &idx[j]).map_err(runtime_err)?;
                d_mu[i][j] = est.value;
                ci95[i][j] = est.ci_half_width;
            }
        }
        let oracle = match &halfplanes {
            Some(hs) => {
                let mut m = vec![vec![None; n]; n];
                for i in 0..n {
                    for j in 0..n {
                        if let (Some(a), Some(b)) = (&hs[i], &hs[j]) {
                            m[i][j] = Some(exact_disagreement(a, b, mu).map_err(runtime_err)?);
                        }
                    }
                }
                Some(m)
            }
            None => None,
        };
        blocks.push(MeasureBlock {
            label: label.clone(),
            kappa: mu.kappa(),
            n_samples: res.config.n_samples,
            d_mu,
            ci95,
            oracle,
            published: published_for(label),
        });
    }

    let report = TablesReport {
        config: &res.config,
        networks: names.clone(),
        euclidean: MatrixBlock { values: euclid.clone(), published: published_for("euclidean") },
        measures: blocks,
        notes,
    };

    write_json(&out.join("report.json"), &report)?;
    write_euclidean_csv(&out.join("euclidean.csv"), &names, &report.euclidean)?;
    for block in &report.measures {
        let path = out.join(format!("dmu_{}.csv", file_slug(&block.label)));
        write_dmu_csv(&path, &names, block)?;
    }

    print_tables(&res.config, &report, out);
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let file = File::create(path)
        .with_context(|| format!("creating {}", path.display()))
        .map_err(runtime_err)?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(runtime_err)?;
    w.write_all(b"\n").and_then(|()| w.flush()).map_err(|e| runtime_err(anyhow!(e)))
}

fn write_euclidean_csv(path: &Path, names: &[String], block: &MatrixBlock) -> CliResult<()> {
    let mut rows = String::from("net_a,net_b,euclidean,published\n");
    for (i, a) in names.iter().enumerate() {
        for (j, b) in names.iter().enumerate() {
            let published = block
                .published
                .as_ref()
                .map(|p| fmt17(p[i][j]))
                .unwrap_or_default();
            rows.push_str(&format!(
                "{},{},{},{}\n",
                csv_field(a),
                csv_field(b),
                fmt17(block.values[i][j]),
                published
            ));
        }
    }
    fs::write(path, rows)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(runtime_err)
}

fn write_dmu_csv(path: &Path, names: &[String], block: &MeasureBlock) -> CliResult<()> {
    let mut rows = String::from("net_a,net_b,d_mu,ci95,oracle,published\n");
    for (i, a) in names.iter().enumerate() {
        for (j, b) in names.iter().enumerate() {
            let oracle = block
                .oracle
                .as_ref()
                .and_then(|m| m[i][j])
                .map(fmt17)
                .unwrap_or_default();
            let published = block
                .published
                .as_ref()
                .map(|p| fmt17(p[i][j]))
                .unwrap_or_default();
            rows.push_str(&format!(
                "{},{},{},{},{},{}\n",
                csv_field(a),
                csv_field(b),
                fmt17(block.d_mu[i][j]),
                fmt17(block.ci95[i][j]),
                oracle,
                published
            ));
        }
    }
    fs::write(path, rows)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(runtime_err)
}

fn print_tables(config: &ExperimentConfig, report: &TablesReport, out: &Path) {
    let names = &report.networks;
    println!(
        "tables: {} networks, {} samples per measure, seed {}",
        names.len(),
        config.n_samples,
        config.seed
    );
    println!("output: {}", out.display());
    println!();
    println!("euclidean distances");
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            let mut line = format!(
                "  {} - {}: {:.6}",
                names[i], names[j], report.euclidean.values[i][j]
            );
            if let Some(p) = &report.euclidean.published {
                line.push_str(&format!("   published {:.6}", p[i][j]));
            }
            println!("{line}");
        }
    }
    for block in &report.measures {
        println!();
        println!("measure {} (kappa {:.6})", block.label, block.kappa);
        for i in 0..names.len() {
            for j in i + 1..names.len() {
                let mut line = format!(
                    "  {} - {}: d_mu {:.6} \u{00b1} {:.6}",
                    names[i], names[j], block.d_mu[i][j], block.ci95[i][j]
                );
                if let Some(v) = block.oracle.as_ref().and_then(|m| m[i][j]) {
                    line.push_str(&format!("   oracle {v:.6}"));
                }
                if let Some(p) = &block.published {
                    line.push_str(&format!("   published {:.6}", p[i][j]));
                }
                println!("{line}");
            }
        }
    }
    for note in &report.notes {
        println!();
        println!("note: {note}");
    }
}

// ======================================================================
// sweep
// ======================================================================

pub fn cmd_sweep(res: &Resolved, out: &Path) -> CliResult<()> {
    let Some(sweep) = &res.config.sweep else {
        return Err(config_err(anyhow!("config has no sweep section")));
    };
    let (label, mu) = &res.measures[0];
    let samples = measure_samples(&res.config, label, mu);
    let reference = &res
        .networks
        .iter()
        .find(|(name, _)| *name == sweep.reference)
        .expect("validated at resolve time")
        .1;
    let ref_idx = region_indices(reference, &samples, res.config.tie_tol).map_err(runtime_err)?;

    let k = sweep.resolution;
    let [i0, i1] = sweep.free_param_indices;
    let lin = |[lo, hi]: [f64; 2], i: usize| lo + (hi - lo) * i as f64 / (k - 1) as f64;
    let rows: Vec<(f64, f64, DistanceEstimate)> = (0..k * k)
        .into_par_iter()
        .map(|node| {
            let p1 = lin(sweep.ranges[0], node / k);
            let p2 = lin(sweep.ranges[1], node % k);
            let mut flat = sweep.fixed_params.clone();
            flat[i0] = p1;
            flat[i1] = p2;
            let net = NetworkParams::from_flat(
                &res.config.layer_dims,
                res.config.activation.clone(),
                &flat,
            )?;
            let idx = region_indices(&net, &samples, res.config.tie_tol)?;
            let est = disagreement_from_indices(&idx, &ref_idx)?;
            Ok((p1, p2, est))
        })
        .collect::<Result<_, dmetric_core::Error>>()
        .map_err(runtime_err)?;

    let file = File::create(out)
        .with_context(|| format!("creating {}", out.display()))
        .map_err(runtime_err)?;
    let mut w = BufWriter::new(file);
    let io = |e: std::io::Error| runtime_err(anyhow!(e).context(format!("writing {}", out.display())));
    writeln!(w, "p1,p2,d_mu,ci95").map_err(io)?;
    for (p1, p2, est) in &rows {
        if !(est.value.is_finite() && est.ci_half_width.is_finite()) {
            return Err(runtime_err(anyhow!(
                "non-finite sweep value at ({p1}, {p2})"
            )));
        }
        writeln!(w, "{},{},{},{}", fmt17(*p1), fmt17(*p2), fmt17(est.value), fmt17(est.ci_half_width))
            .map_err(io)?;
    }
    w.flush().map_err(io)?;

    println!(
        "sweep: {} nodes, params ({}, {}) over [{}, {}] x [{}, {}], reference '{}', measure {}",
        k * k,
        i0,
        i1,
        sweep.ranges[0][0],
        sweep.ranges[0][1],
        sweep.ranges[1][0],
        sweep.ranges[1][1],
        sweep.reference,
        label,
    );
    println!("wrote {}", out.display());
    Ok(())
}

// ======================================================================
// kappa
// ======================================================================

const KAPPA_GRID: usize = 512;

pub fn cmd_kappa(res: &Resolved) -> CliResult<()> {
    for (label, mu) in &res.measures {
        let (max_density, violations, probe) = if mu.dim() == 2 {
            let (m, v) = grid_density_max(mu);
            (m, v, format!("{KAPPA_GRID}x{KAPPA_GRID} grid"))
        } else {
            // No plotting grid in higher dimensions; probe at sampled
            // points instead.
            let samples = mu.sample(200_000, derive_seed(res.config.seed, "kappa-probe"));
            let kappa = mu.kappa();
            let (m, v) = samples
                .iter()
                .map(|p| mu.density(p).expect("sampled point has valid dimension"))
                .fold((0.0f64, 0usize), |(m, v), d| {
                    (m.max(d), v + usize::from(d > kappa))
                });
            (m, v, "200000 sampled points".to_string())
        };
        println!(
            "measure {label}: kappa = {}, max density over {probe} = {}, margin = {:.3e}, violations = {violations}",
            fmt17(mu.kappa()),
            fmt17(max_density),
            mu.kappa() - max_density,
        );
    }
    Ok(())
}

/// Max density and bound violations over cell midpoints of the domain's
/// bounding box. Exact max and integer sum, so thread count is irrelevant.
fn grid_density_max(mu: &InputMeasure) -> (f64, usize) {
    let bb = mu.domain().bounding_box();
    let hx = (bb[0][1] - bb[0][0]) / KAPPA_GRID as f64;
    let hy = (bb[1][1] - bb[1][0]) / KAPPA_GRID as f64;
    let kappa = mu.kappa();
    (0..KAPPA_GRID)
        .into_par_iter()
        .map(|iy| {
            let y = bb[1][0] + (iy as f64 + 0.5) * hy;
            let mut max = 0.0f64;
            let mut violations = 0usize;
            for ix in 0..KAPPA_GRID {
                let x = bb[0][0] + (ix as f64 + 0.5) * hx;
                let d = mu.density(&[x, y]).expect("probe point has valid dimension");
                max = max.max(d);
                violations += usize::from(d > kappa);
            }
            (max, violations)
        })
        .reduce(|| (0.0, 0), |a, b| (a.0.max(b.0), a.1 + b.1))
}

// ======================================================================
// probe
// ======================================================================

#[derive(Serialize)]
struct ProbeReport<'a> {
    config: &'a ExperimentConfig,
    center_name: &'a str,
    n_neighbors: usize,
    measure_label: &'a str,
    result: ContinuityProbeResult,
}

pub fn cmd_probe(res: &Resolved, center: &str, radius: f64, neighbors: usize) -> CliResult<()> {
    let Some((_, net)) = res.networks.iter().find(|(name, _)| name == center) else {
        return Err(config_err(anyhow!("unknown network '{center}'")));
    };
    if !(radius.is_finite() && radius > 0.0) {
        return Err(config_err(anyhow!("radius must be positive, got {radius}")));
    }
    if neighbors == 0 {
        return Err(config_err(anyhow!("need at least one neighbor")));
    }
    let (label, mu) = &res.measures[0];
    let samples = measure_samples(&res.config, label, mu);
    let result = continuity_probe(net, radius, neighbors, &samples, res.config.seed)
        .map_err(runtime_err)?;
    let report = ProbeReport {
        config: &res.config,
        center_name: center,
        n_neighbors: neighbors,
        measure_label: label,
        result,
    };
    let json = serde_json::to_string_pretty(&report)
        .context("serializing probe report")
        .map_err(runtime_err)?;
    println!("{json}");
    Ok(())
}
