//! Time integration of the radial-graph flow
//! rho_t = (phi^3 rho_tt + phi' rho_t^4) / (phi (phi^2 + rho_t^2)^{3/2})
//! by classical RK4 on the pseudospectral method-of-lines system, with the
//! monitored functionals recorded along the run.

use std::f64::consts::TAU;
use std::sync::Arc;

use crate::curve::RadialCurve;
use crate::error::{Error, Result};
use crate::spectral;
use crate::warp::WarpPotential;

#[derive(Debug, Clone)]
pub struct FlowConfig {
    /// CFL factor in (0, 1]
    pub safety: f64,
    pub t_max: f64,
    /// stop once max rho - min rho falls below this
    pub osc_tol: f64,
    /// diagnostic sampling stride in steps
    pub sample_every: usize,
    /// turn maximum-principle violations into hard errors
    pub enforce_bounds: bool,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            safety: 0.5,
            t_max: 10.0,
            osc_tol: 1e-8,
            sample_every: 100,
            enforce_bounds: true,
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.safety > 0.0 && self.safety <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "safety {} must lie in (0, 1]",
                self.safety
            )));
        }
        if !(self.osc_tol > 0.0) {
            return Err(Error::InvalidConfig("osc_tol must be positive".into()));
        }
        if self.sample_every == 0 {
            return Err(Error::InvalidConfig("sample_every must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    Converged,
    Horizon,
    Error(String),
}

impl Termination {
    pub fn as_str(&self) -> &str {
        match self {
            Termination::Converged => "converged",
            Termination::Horizon => "horizon",
            Termination::Error(_) => "error",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TraceRow {
    pub t: f64,
    pub length: f64,
    pub area: f64,
    pub osc: f64,
    pub max_omega: f64,
    pub dldt_formula: f64,
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct FlowTrace {
    pub rows: Vec<TraceRow>,
    pub final_curve: RadialCurve,
    pub termination: Termination,
    pub steps: u64,
    /// slice radius predicted from the conserved initial area
    pub predicted_radius: Option<f64>,
}

impl FlowTrace {
    /// Trace CSV with header `t,L,A,osc,max_omega,dLdt_formula,lambda`.
    /// The lambda column is left empty outside the plane.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,L,A,osc,max_omega,dLdt_formula,lambda\n");
        for r in &self.rows {
            let lambda = r.lambda.map(|l| format!("{l:.17e}")).unwrap_or_default();
            out.push_str(&format!(
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{}\n",
                r.t, r.length, r.area, r.osc, r.max_omega, r.dldt_formula, lambda
            ));
        }
        out
    }
}

/// Both forms of Eq.-style length derivative: the theta integral of
/// beta*b^2 - b_theta^2 and the arc integral of kappa*Phi_ss.
#[derive(Debug, Clone, Copy)]
pub struct LengthDerivative {
    pub theta_integral: f64,
    pub arc_integral: f64,
}

fn rhs(warp: &WarpPotential, rho: &[f64]) -> Result<Vec<f64>> {
    let n = rho.len();
    let (d1, d2) = spectral::derivatives(rho);
    let mut out = vec![0.0; n];
    for j in 0..n {
        let e = warp.eval(rho[j])?;
        let w = e.phi * e.phi + d1[j] * d1[j];
        out[j] = (e.phi.powi(3) * d2[j] + e.dphi * d1[j].powi(4)) / (e.phi * w.powf(1.5));
    }
    Ok(out)
}

fn rk4(warp: &WarpPotential, rho: &[f64], dt: f64) -> Result<Vec<f64>> {
    let n = rho.len();
    let k1 = rhs(warp, rho)?;
    let mut tmp: Vec<f64> = (0..n).map(|j| rho[j] + 0.5 * dt * k1[j]).collect();
    let k2 = rhs(warp, &tmp)?;
    for j in 0..n {
        tmp[j] = rho[j] + 0.5 * dt * k2[j];
    }
    let k3 = rhs(warp, &tmp)?;
    for j in 0..n {
        tmp[j] = rho[j] + dt * k3[j];
    }
    let k4 = rhs(warp, &tmp)?;
    Ok((0..n)
        .map(|j| rho[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]))
        .collect())
}

/// Parabolic stability bound dt = safety / (D_max * (n/2)^2) where D is the
/// diffusion coefficient phi^2 / (phi^2 + rho_theta^2)^{3/2}.
pub fn stable_dt(curve: &RadialCurve, safety: f64) -> Result<f64> {
    let d1 = spectral::derivative(curve.rho());
    let mut d_max: f64 = 0.0;
    for (j, &r) in curve.rho().iter().enumerate() {
        let e = curve.warp().eval(r)?;
        let w = e.phi * e.phi + d1[j] * d1[j];
        d_max = d_max.max(e.phi * e.phi / w.powf(1.5));
    }
    let half_n = curve.n() as f64 / 2.0;
    Ok(safety / (d_max * half_n * half_n))
}

/// One classical RK4 step. Slices are exact fixed points. With default
/// tolerances a step that leaves the input curve's radial range by more
/// than 10*osc_tol is reported as a BoundsViolation.
pub fn step(curve: &RadialCurve, dt: f64) -> Result<RadialCurve> {
    let rho = rk4(curve.warp(), curve.rho(), dt)?;
    let slack = 10.0 * 1e-8;
    let (lo, hi) = (curve.min_rho() - slack, curve.max_rho() + slack);
    for &r in &rho {
        if r < lo || r > hi {
            return Err(Error::BoundsViolation { rho: r, lo, hi });
        }
    }
    RadialCurve::from_samples(curve.warp().clone(), rho)
}

fn max_omega(rho: &[f64]) -> f64 {
    spectral::derivative(rho)
        .iter()
        .map(|d| d * d)
        .fold(0.0, f64::max)
}

fn trace_row(curve: &RadialCurve, t: f64) -> Result<TraceRow> {
    let f = curve.functionals()?;
    Ok(TraceRow {
        t,
        length: f.length,
        area: f.area,
        osc: f.osc,
        max_omega: max_omega(curve.rho()),
        dldt_formula: dldt_formula(curve)?.theta_integral,
        lambda: f.lambda,
    })
}

/// Evolve until the oscillation drops below osc_tol or t reaches t_max,
/// recording diagnostics every `sample_every` steps. Numerical failures
/// mid-run terminate the trace with `Termination::Error`; errors on the
/// initial data propagate.
pub fn evolve(curve: &RadialCurve, config: &FlowConfig) -> Result<FlowTrace> {
    config.validate()?;
    let warp = curve.warp().clone();
    let slack = 10.0 * config.osc_tol;
    let (lo, hi) = (curve.min_rho() - slack, curve.max_rho() + slack);
    let (dom_lo, dom_hi) = warp.domain();

    let mut rows = vec![trace_row(curve, 0.0)?];
    let area0 = rows[0].area;
    let predicted_radius = warp.radius_of_area(area0).ok();

    let mut rho = curve.rho().to_vec();
    let mut t = 0.0;
    let mut steps: u64 = 0;
    let mut current = curve.clone();

    let finish = |rows: &mut Vec<TraceRow>,
                  current: RadialCurve,
                  termination: Termination,
                  steps: u64,
                  t: f64|
     -> Result<FlowTrace> {
        if rows.last().map(|r| r.t) != Some(t) {
            rows.push(trace_row(&current, t)?);
        }
        Ok(FlowTrace {
            rows: rows.clone(),
            final_curve: current,
            termination,
            steps,
            predicted_radius,
        })
    };

    loop {
        let osc = current.osc();
        if osc < config.osc_tol {
            return finish(&mut rows, current, Termination::Converged, steps, t);
        }
        if t >= config.t_max {
            return finish(&mut rows, current, Termination::Horizon, steps, t);
        }
        // dt is recomputed every step: the diffusion coefficient moves with
        // the curve
        let dt = match stable_dt(&current, config.safety) {
            Ok(dt) => dt.min(config.t_max - t),
            Err(e) => return finish(&mut rows, current, Termination::Error(e.to_string()), steps, t),
        };
        rho = match rk4(&warp, &rho, dt) {
            Ok(next) => next,
            Err(e) => return finish(&mut rows, current, Termination::Error(e.to_string()), steps, t),
        };
        if config.enforce_bounds {
            if let Some(&bad) = rho.iter().find(|&&r| r < lo || r > hi) {
                let e = Error::BoundsViolation { rho: bad, lo, hi };
                return finish(&mut rows, current, Termination::Error(e.to_string()), steps, t);
            }
        }
        if let Some(&bad) = rho.iter().find(|&&r| r <= dom_lo || r >= dom_hi) {
            let e = Error::OutOfDomain {
                r: bad,
                lo: dom_lo,
                hi: dom_hi,
            };
            return finish(&mut rows, current, Termination::Error(e.to_string()), steps, t);
        }
        current = RadialCurve::from_samples(warp.clone(), rho.clone())?;
        steps += 1;
        t += dt;
        if steps % config.sample_every as u64 == 0 {
            rows.push(trace_row(&current, t)?);
        }
    }
}

/// The length derivative along the flow, in both integral forms; they agree
/// to spectral accuracy on smooth curves.
pub fn dldt_formula(curve: &RadialCurve) -> Result<LengthDerivative> {
    let g = curve.geometry()?;
    let n = curve.n();
    let dtheta = TAU / n as f64;
    let b_theta = spectral::derivative(&g.b);
    let mut theta_integral = 0.0;
    let mut arc_integral = 0.0;
    for j in 0..n {
        theta_integral += g.beta[j] * g.b[j] * g.b[j] - b_theta[j] * b_theta[j];
        arc_integral += g.kappa[j] * g.phi_ss[j] * g.s_theta[j];
    }
    Ok(LengthDerivative {
        theta_integral: theta_integral * dtheta,
        arc_integral: arc_integral * dtheta,
    })
}

/// The comparison barrier v' = -c1 v^3 - c2 v^4, integrated with the same
/// RK4 scheme on substeps of at most 1e-3. Returns v at each grid time.
pub fn gradient_barrier(v0: f64, c1: f64, c2: f64, t_grid: &[f64]) -> Vec<f64> {
    let f = |v: f64| -c1 * v.powi(3) - c2 * v.powi(4);
    let mut out = Vec::with_capacity(t_grid.len());
    let mut v = v0;
    let mut t = 0.0;
    for &target in t_grid {
        let span = target - t;
        if span > 0.0 {
            let steps = (span / 1e-3).ceil().max(1.0) as usize;
            let h = span / steps as f64;
            for _ in 0..steps {
                let k1 = f(v);
                let k2 = f(v + 0.5 * h * k1);
                let k3 = f(v + 0.5 * h * k2);
                let k4 = f(v + h * k3);
                v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            t = target;
        }
        out.push(v);
    }
    out
}

/// Convenience builder used by tests and the CLI.
pub fn evolve_from(
    warp: Arc<WarpPotential>,
    n: usize,
    f: impl Fn(f64) -> f64,
    config: &FlowConfig,
) -> Result<FlowTrace> {
    let curve = RadialCurve::from_function(warp, n, f)?;
    evolve(&curve, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::warp::WarpPotential;
    use std::f64::consts::PI;

    fn euclid() -> Arc<WarpPotential> {
        Arc::new(WarpPotential::euclidean((1e-3, 10.0)).unwrap())
    }

    #[test]
    fn stable_dt_examples() {
        let c = RadialCurve::slice(euclid(), 64, 1.0).unwrap();
        let dt = stable_dt(&c, 0.5).unwrap();
        assert!((dt - 0.5 / 1024.0).abs() < 1e-12);

        let c2 = RadialCurve::slice(euclid(), 128, 1.0).unwrap();
        let dt2 = stable_dt(&c2, 0.5).unwrap();
        assert!((dt2 - dt / 4.0).abs() < 1e-12);

        let cyl = Arc::new(WarpPotential::cylinder(2.0, (1e-3, 10.0)).unwrap());
        let c3 = RadialCurve::slice(cyl, 64, 1.0).unwrap();
        let dt3 = stable_dt(&c3, 0.5).unwrap();
        assert!((dt3 - 0.5 / (0.5 * 1024.0)).abs() < 1e-12);
    }

    #[test]
    fn slices_are_fixed_points() {
        let c = RadialCurve::slice(euclid(), 64, 1.3).unwrap();
        let dt = stable_dt(&c, 0.5).unwrap();
        let next = step(&c, dt).unwrap();
        for j in 0..c.n() {
            assert!((next.rho()[j] - 1.3).abs() < 1e-15);
        }
    }

    #[test]
    fn step_smooths_oscillation() {
        let c = RadialCurve::from_function(euclid(), 64, |t| 1.0 + 0.3 * (2.0 * t).cos()).unwrap();
        let dt = stable_dt(&c, 0.5).unwrap();
        let next = step(&c, dt).unwrap();
        assert!(next.osc() < c.osc());
    }

    #[test]
    fn step_is_fourth_order() {
        let c = RadialCurve::from_function(euclid(), 64, |t| 1.0 + 0.3 * (2.0 * t).cos()).unwrap();
        let dt = stable_dt(&c, 0.9).unwrap();
        let advance = |m: usize| {
            let mut cur = c.clone();
            for _ in 0..m {
                cur = step(&cur, dt / m as f64).unwrap();
            }
            cur
        };
        let reference = advance(8);
        let err = |curve: &RadialCurve| {
            curve
                .rho()
                .iter()
                .zip(reference.rho())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max)
        };
        let e1 = err(&advance(1));
        let e2 = err(&advance(2));
        let ratio = e1 / e2;
        assert!(
            (10.0..26.0).contains(&ratio),
            "Richardson ratio {ratio} (e1 = {e1}, e2 = {e2})"
        );
    }

    #[test]
    fn evolve_slice_terminates_immediately() {
        let c = RadialCurve::slice(euclid(), 64, 1.0).unwrap();
        let trace = evolve(&c, &FlowConfig::default()).unwrap();
        assert_eq!(trace.termination, Termination::Converged);
        assert_eq!(trace.steps, 0);
        assert_eq!(trace.rows.len(), 1);
    }

    #[test]
    fn evolve_converges_to_predicted_slice() {
        let cfg = FlowConfig {
            osc_tol: 1e-7,
            t_max: 20.0,
            ..Default::default()
        };
        let trace = evolve_from(euclid(), 64, |t| 1.0 + 0.1 * (2.0 * t).cos(), &cfg).unwrap();
        assert_eq!(trace.termination, Termination::Converged);
        // area pi*(1 + 0.01/2) is conserved; the limit slice solves pi r^2 = A0
        let want = 1.005f64.sqrt();
        assert!((trace.final_curve.mean_rho() - want).abs() < 1e-4);
        assert!((trace.predicted_radius.unwrap() - want).abs() < 1e-6);
        // area drift along the run
        let a0 = trace.rows[0].area;
        for r in &trace.rows {
            assert!((r.area - a0).abs() < 1e-7 * a0);
            assert!(r.t >= 0.0);
        }
    }

    #[test]
    fn dldt_slice_and_translated_circle() {
        let c = RadialCurve::slice(euclid(), 128, 1.0).unwrap();
        let d = dldt_formula(&c).unwrap();
        assert!(d.theta_integral.abs() < 1e-12);

        // translated circle radius 1, centre offset 0.3: r_s = 0.3 cos(theta)
        let c = RadialCurve::from_function(euclid(), 256, |t| {
            0.3 * t.sin() + (1.0 - 0.09 * t.cos() * t.cos()).sqrt()
        })
        .unwrap();
        let d = dldt_formula(&c).unwrap();
        assert!(d.theta_integral.abs() < 1e-8, "{}", d.theta_integral);
        assert!((d.theta_integral - d.arc_integral).abs() < 1e-8);
    }

    #[test]
    fn dldt_scaled_sinh_bound() {
        let w = Arc::new(WarpPotential::scaled_sinh(2f64.sqrt(), 1.0, (0.05, 4.0)).unwrap());
        let c = RadialCurve::from_function(w, 256, |t| {
            1.0 + 0.1 * t.cos() + 0.05 * (3.0 * t).cos()
        })
        .unwrap();
        let g = c.geometry().unwrap();
        let b_theta = crate::spectral::derivative(&g.b);
        let dtheta = TAU / 256.0;
        let bound: f64 = (0..256)
            .map(|j| (2.0 * g.b[j] * g.b[j] - b_theta[j] * b_theta[j]) * dtheta)
            .sum();
        let d = dldt_formula(&c).unwrap();
        assert!(d.theta_integral <= bound + 1e-9);
    }

    #[test]
    fn barrier_matches_closed_form() {
        let vals = gradient_barrier(1.0, 1.0, 0.0, &[1.0, 10.0]);
        for (v, t) in vals.iter().zip([1.0, 10.0]) {
            let exact = (1.0 + 2.0 * t as f64).powf(-0.5);
            assert!((v - exact).abs() < 1e-8);
        }
    }

    #[test]
    fn barrier_trivial_and_decreasing() {
        let zero = gradient_barrier(0.0, 1.0, 2.0, &[0.5, 1.0]);
        assert!(zero.iter().all(|&v| v == 0.0));
        let grid: Vec<f64> = (1..=20).map(|i| 0.25 * i as f64).collect();
        let vals = gradient_barrier(0.8, 0.7, 1.3, &grid);
        for w in vals.windows(2) {
            assert!(w[1] < w[0] && w[1] > 0.0);
        }
        // v * sqrt(t) stays bounded
        for (v, t) in vals.iter().zip(&grid) {
            assert!(v * t.sqrt() < 2.0);
        }
    }

    #[test]
    fn spherical_convergence() {
        let w = Arc::new(WarpPotential::sphere(1.0, 0.0).unwrap());
        let cfg = FlowConfig {
            osc_tol: 1e-7,
            t_max: 20.0,
            ..Default::default()
        };
        let trace = evolve_from(w.clone(), 64, |t| PI / 2.0 + 0.2 * (3.0 * t).cos(), &cfg).unwrap();
        assert_eq!(trace.termination, Termination::Converged);
        // Phi(r) = 1 - cos r on the unit sphere; the limit slice solves
        // 2 pi (1 - cos r) = A0
        let a0 = trace.rows[0].area;
        let want = (1.0 - a0 / TAU).acos();
        assert!((trace.final_curve.mean_rho() - want).abs() < 1e-4);
    }
}
