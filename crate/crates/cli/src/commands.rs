//! The five subcommands. Each writes machine-readable artifacts into the
//! output directory and prints a one-line summary to stdout.

use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use warpflow::{
    cut_and_reflect, equalizing_axis, evolve, integrate_characteristic, perturbation_coefficient,
    rs_profile_residual, theta_grid, Axis, CircleModel, CircleSpec, RadialCurve, Termination,
    WarpPotential,
};

use crate::config::{config_err, numerical_err, CliError, RunConfig};

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Config(format!("serialization: {e}")))?;
    text.push('\n');
    write(path, &text)
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct FlowSummary {
    A0: f64,
    A_final: f64,
    L0: f64,
    L_final: f64,
    final_radius: f64,
    predicted_radius: Option<f64>,
    max_area_drift: f64,
    L_monotone: bool,
    termination: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    steps: u64,
    config: RunConfig,
}

pub fn cmd_flow(config: &RunConfig, out: &Path) -> Result<(), CliError> {
    let warp = config.warp.build()?;
    let curve = config.initial()?.build(&warp, config.n)?;
    let trace = evolve(&curve, &config.flow.to_core()).map_err(numerical_err)?;

    let first = &trace.rows[0];
    let last = trace.rows.last().unwrap();
    let max_area_drift = trace
        .rows
        .iter()
        .map(|r| (r.area - first.area).abs())
        .fold(0.0, f64::max)
        / first.area.abs().max(f64::MIN_POSITIVE);
    let l_monotone = trace
        .rows
        .windows(2)
        .all(|w| w[1].length <= w[0].length + 1e-9 * first.length);
    let error = match &trace.termination {
        Termination::Error(msg) => Some(msg.clone()),
        _ => None,
    };
    let summary = FlowSummary {
        A0: first.area,
        A_final: last.area,
        L0: first.length,
        L_final: last.length,
        final_radius: trace.final_curve.mean_rho(),
        predicted_radius: trace.predicted_radius,
        max_area_drift,
        L_monotone: l_monotone,
        termination: trace.termination.as_str().to_string(),
        error: error.clone(),
        steps: trace.steps,
        config: config.clone(),
    };
    write(&out.join("trace.csv"), &trace.to_csv())?;
    write(&out.join("final_curve.csv"), &trace.final_curve.to_csv())?;
    write_json(&out.join("summary.json"), &summary)?;
    println!(
        "flow: {} after {} steps; final radius {:.12}",
        summary.termination, summary.steps, summary.final_radius
    );
    if let Some(msg) = error {
        eprintln!("numerical failure: {msg}");
        return Err(CliError::Numerical(msg));
    }
    Ok(())
}

/// Random radial graph with harmonics k <= 8 and an amplitude budget that
/// keeps rho inside the central half of the warp domain.
fn random_graph(warp: &Arc<WarpPotential>, n: usize, rng: &mut ChaCha8Rng) -> RadialCurve {
    let (lo, hi) = warp.domain();
    let center = 0.5 * (lo + hi);
    let budget = 0.25 * (hi - lo);
    let mut coeffs = [(0.0f64, 0.0f64); 8];
    let mut total = 0.0;
    for c in &mut coeffs {
        *c = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        total += c.0.abs() + c.1.abs();
    }
    let scale = budget * rng.gen_range(0.1..0.9) / total;
    let rho = theta_grid(n)
        .into_iter()
        .map(|t| {
            let mut r = center;
            for (k, (a, b)) in coeffs.iter().enumerate() {
                let kk = (k + 1) as f64;
                r += scale * (a * (kk * t).cos() + b * (kk * t).sin());
            }
            r
        })
        .collect();
    RadialCurve::from_samples(warp.clone(), rho).expect("curve within amplitude budget")
}

pub fn cmd_isocheck(config: &RunConfig, out: &Path, seed: u64) -> Result<(), CliError> {
    let warp = config.warp.build()?;
    let (lo, hi) = warp.domain();
    let mut beta_min = f64::INFINITY;
    let mut beta_max = f64::NEG_INFINITY;
    for i in 0..256 {
        let r = lo + (hi - lo) * (i as f64 + 0.5) / 256.0;
        let beta = warp.eval(r).map_err(numerical_err)?.beta;
        beta_min = beta_min.min(beta);
        beta_max = beta_max.max(beta);
    }
    let beta_in_unit_interval = beta_min >= -1e-10 && beta_max <= 1.0 + 1e-10;
    if !beta_in_unit_interval {
        eprintln!(
            "warning: beta ranges over [{beta_min:.6}, {beta_max:.6}]; \
             the isoperimetric inequality is not guaranteed"
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(config.samples);
    let mut min_deficit: Option<f64> = None;
    let mut flagged = Vec::new();
    for index in 0..config.samples {
        let curve = random_graph(&warp, config.n, &mut rng);
        let f = curve.functionals().map_err(numerical_err)?;
        let deficit = curve.iso_difference().map_err(numerical_err)?;
        if deficit < -1e-8 * f.length * f.length {
            flagged.push(index);
        }
        min_deficit = Some(min_deficit.map_or(deficit, |m: f64| m.min(deficit)));
        rows.push(json!({
            "index": index,
            "length": f.length,
            "area": f.area,
            "deficit": deficit,
        }));
    }
    let report = json!({
        "seed": seed,
        "samples": config.samples,
        "beta_range": [beta_min, beta_max],
        "beta_in_unit_interval": beta_in_unit_interval,
        "min_deficit": min_deficit,
        "flagged": flagged,
        "deficits": rows,
    });
    write_json(&out.join("isocheck.json"), &report)?;
    println!(
        "isocheck: {} samples, min deficit {:?}, {} flagged",
        config.samples,
        min_deficit,
        report["flagged"].as_array().unwrap().len()
    );
    Ok(())
}

pub struct CircleRun {
    pub model: CircleModel,
    pub a: f64,
    pub alpha: f64,
    pub radius: f64,
    pub ds: f64,
    pub n: usize,
}

pub fn cmd_circles(run: &CircleRun, out: &Path) -> Result<(), CliError> {
    let spec = CircleSpec {
        model: run.model,
        a: run.a,
        alpha: run.alpha,
        radius: run.radius,
    };
    let circle = spec.build(run.n).map_err(config_err)?;
    // the spherical family is axis-normalized: its profile is
    // a*cos(theta - pi/2) = a*sin(theta)
    let (alpha, start) = match run.model {
        CircleModel::Euclidean => (
            run.alpha,
            ((1.0 + run.a) * run.radius, PI / 2.0 - run.alpha),
        ),
        CircleModel::Sphere => {
            let f = (run.a * run.radius.sin()).asin();
            let theta0 = if run.a >= 0.0 { PI } else { 0.0 };
            (-PI / 2.0, (run.radius + f.abs(), theta0))
        }
    };
    let fit = rs_profile_residual(&circle, Some((run.a, alpha))).map_err(numerical_err)?;
    let path = integrate_characteristic(circle.warp(), run.a, alpha, start, run.ds)
        .map_err(numerical_err)?;
    let residual_ok = fit.residual < 1e-7;
    let closure_ok = path.closure_defect < 1e-8;
    let report = json!({
        "model": match run.model { CircleModel::Euclidean => "euclidean", CircleModel::Sphere => "sphere" },
        "a": run.a,
        "alpha": run.alpha,
        "radius": run.radius,
        "ds": run.ds,
        "n": run.n,
        "profile_residual": fit.residual,
        "closure_defect": path.closure_defect,
        "beta_deviation": path.beta_deviation,
        "residual_ok": residual_ok,
        "closure_ok": closure_ok,
    });
    write(&out.join("circle.csv"), &circle.to_csv())?;
    write(&out.join("path.csv"), &path.to_csv())?;
    write_json(&out.join("circles.json"), &report)?;
    println!(
        "circles: residual {:.3e}, closure defect {:.3e}",
        fit.residual, path.closure_defect
    );
    if residual_ok && closure_ok {
        Ok(())
    } else {
        Err(CliError::Numerical(format!(
            "thresholds not met: residual {:.3e}, closure defect {:.3e}",
            fit.residual, path.closure_defect
        )))
    }
}

pub fn cmd_symmetrize(config: &RunConfig, out: &Path) -> Result<(), CliError> {
    let warp = config.warp.build()?;
    let curve = config.initial()?.build(&warp, config.n)?;
    let f0 = curve.functionals().map_err(numerical_err)?;
    let axis = equalizing_axis(&curve).map_err(numerical_err)?;
    let rotated = curve.rotated(axis.alpha).map_err(numerical_err)?;
    let (c1, c2) = cut_and_reflect(&rotated, Axis::new(0.0)).map_err(numerical_err)?;
    let f1 = c1.functionals().map_err(numerical_err)?;
    let f2 = c2.functionals().map_err(numerical_err)?;
    let report = json!({
        "alpha": axis.alpha,
        "L0": f0.length,
        "A0": f0.area,
        "L1": f1.length,
        "A1": f1.area,
        "L2": f2.length,
        "A2": f2.area,
        "length_conservation_error": (f1.length + f2.length - 2.0 * f0.length).abs(),
        "area_conservation_error": (f1.area + f2.area - 2.0 * f0.area).abs(),
        "area_equalization_error": (f1.area - f2.area).abs(),
    });
    write(&out.join("half1.csv"), &c1.to_csv())?;
    write(&out.join("half2.csv"), &c2.to_csv())?;
    write_json(&out.join("symmetrize.json"), &report)?;
    println!(
        "symmetrize: axis {:.12}, |A1-A2| = {:.3e}",
        axis.alpha,
        (f1.area - f2.area).abs()
    );
    Ok(())
}

pub fn cmd_perturb(config: &RunConfig, out: &Path) -> Result<(), CliError> {
    let warp = config.warp.build()?;
    let section = config
        .perturb
        .as_ref()
        .ok_or_else(|| config_err("config is missing the \"perturb\" section"))?;
    let sum = crate::config::HarmonicSum {
        r0: 0.0,
        cos: section.cos.clone(),
        sin: section.sin.clone(),
    };
    let g = theta_grid(config.n)
        .into_iter()
        .map(|t| sum.eval(t))
        .collect::<Result<Vec<f64>, CliError>>()?;
    let check = perturbation_coefficient(&warp, section.r0, &g, &section.eps)
        .map_err(numerical_err)?;
    let report = json!({
        "r0": section.r0,
        "eps": section.eps,
        "predicted": check.predicted,
        "measured": check.measured,
    });
    write_json(&out.join("perturb.json"), &report)?;
    println!(
        "perturb: predicted {:.12}, measured {:?}",
        check.predicted, check.measured
    );
    Ok(())
}
