//! Explicit translated circles in the flat plane and on the round sphere,
//! the first-harmonic profile test r_s = a*cos(theta + alpha), and the
//! characteristic ODE whose closed orbits are exactly those circles.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use crate::curve::{theta_grid, RadialCurve};
use crate::error::{Error, Result};
use crate::warp::{WarpFamily, WarpPotential};

/// Model geometry for an explicit translated circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircleModel {
    Euclidean,
    Sphere,
}

/// A translated circle: offset ratio `a` in (-1, 1), axis angle `alpha`,
/// and radius `R` (geodesic radius on the sphere, where R must lie in
/// (0, pi) and `alpha` is ignored -- the spherical family is rotationally
/// normalized with its axis along theta = pi/2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleSpec {
    pub model: CircleModel,
    pub a: f64,
    pub alpha: f64,
    pub radius: f64,
}

impl CircleSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.a.abs() < 1.0 && self.a.is_finite()) {
            return Err(Error::InvalidOffset { a: self.a });
        }
        match self.model {
            CircleModel::Euclidean => {
                if !(self.radius > 0.0) {
                    return Err(Error::InvalidConfig(format!(
                        "circle radius {} must be positive",
                        self.radius
                    )));
                }
            }
            CircleModel::Sphere => {
                if !(self.radius > 0.0 && self.radius < PI) {
                    return Err(Error::InvalidConfig(format!(
                        "spherical radius {} must lie in (0, pi)",
                        self.radius
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn build(&self, n: usize) -> Result<RadialCurve> {
        self.validate()?;
        match self.model {
            CircleModel::Euclidean => euclidean_circle(self.a, self.alpha, self.radius, n),
            CircleModel::Sphere => spherical_circle(self.a, self.radius, n),
        }
    }
}

/// The circle of radius R centered at distance a*R from the origin along
/// the direction theta = pi/2 - alpha, sampled as a radial graph rho(theta).
///
/// Its support profile satisfies r_s = a*cos(theta + alpha) exactly. The
/// polar angle of the parametric point beta is inverted in closed form:
/// the point of the circle seen in direction theta has parameter
/// beta = theta - asin(a*cos(theta + alpha)).
pub fn euclidean_circle(a: f64, alpha: f64, radius: f64, n: usize) -> Result<RadialCurve> {
    CircleSpec {
        model: CircleModel::Euclidean,
        a,
        alpha,
        radius,
    }
    .validate()?;
    let lo = 0.5 * radius * (1.0 - a.abs());
    let hi = 2.0 * radius * (1.0 + a.abs());
    let warp = Arc::new(WarpPotential::euclidean((lo, hi))?);
    let (cx, cy) = (a * radius * alpha.sin(), a * radius * alpha.cos());
    let rho: Vec<f64> = theta_grid(n)
        .into_iter()
        .map(|theta| {
            let beta = theta - (a * (theta + alpha).cos()).asin();
            let x = cx + radius * beta.cos();
            let y = cy + radius * beta.sin();
            x.hypot(y)
        })
        .collect();
    RadialCurve::from_samples(warp, rho)
}

/// The geodesic circle of radius R on the unit sphere about the displaced
/// pole p = (-sin f, 0, cos f) with sin f = b*sin R, sampled as a radial
/// graph about the north pole. Its support profile is r_s = b*sin(theta).
pub fn spherical_circle(b: f64, radius: f64, n: usize) -> Result<RadialCurve> {
    CircleSpec {
        model: CircleModel::Sphere,
        a: b,
        alpha: 0.0,
        radius,
    }
    .validate()?;
    let f = (b * radius.sin()).asin();
    let r_min = (f.abs() - radius).abs();
    let r_max = f.abs() + radius;
    if r_max > PI - 1e-6 || r_min < 1e-6 {
        return Err(Error::PoleCrossing {
            min_r: r_min,
            max_r: r_max,
        });
    }
    let warp = Arc::new(WarpPotential::new(
        WarpFamily::Sphere { k: 1.0, r0: 0.0 },
        (0.5 * r_min, 0.5 * (r_max + PI)),
    )?);
    let (sf, cf) = f.sin_cos();
    let (sr, cr) = radius.sin_cos();
    let point = |beta: f64| -> (f64, f64, f64) {
        (
            -cr * sf + sr * beta.cos() * cf,
            sr * beta.sin(),
            cr * cf + sr * beta.cos() * sf,
        )
    };
    let rho: Vec<f64> = theta_grid(n)
        .into_iter()
        .map(|theta| {
            // the circle point in direction theta solves
            // q_x sin(theta) - q_y cos(theta) = 0, a linear equation in
            // (cos beta, sin beta) with two roots; keep the root on the
            // near side (q_x cos(theta) + q_y sin(theta) > 0)
            let big_a = sr * cf * theta.sin();
            let big_b = -sr * theta.cos();
            let big_c = cr * sf * theta.sin();
            let m = big_a.hypot(big_b);
            let psi = big_b.atan2(big_a);
            let delta = (big_c / m).clamp(-1.0, 1.0).acos();
            let mut best = None;
            for beta in [psi + delta, psi - delta] {
                let (x, y, z) = point(beta);
                if x * theta.cos() + y * theta.sin() > 0.0 {
                    best = Some(z.clamp(-1.0, 1.0).acos());
                }
            }
            best.expect("one root of the direction equation lies on the near side")
        })
        .collect();
    RadialCurve::from_samples(warp, rho)
}

/// Fit of the support profile r_s against a first harmonic
/// a*cos(theta + alpha).
#[derive(Debug, Clone, Copy)]
pub struct ProfileFit {
    pub a: f64,
    pub alpha: f64,
    /// max_j |r_s(theta_j) - a*cos(theta_j + alpha)|
    pub residual: f64,
}

/// Sup-norm residual of r_s against the first harmonic a*cos(theta+alpha).
/// With `target = None` the best-fit (a, alpha) is obtained by projecting
/// r_s onto the cos/sin modes first.
pub fn rs_profile_residual(curve: &RadialCurve, target: Option<(f64, f64)>) -> Result<ProfileFit> {
    let geo = curve.geometry()?;
    let n = curve.n() as f64;
    let (a, alpha) = match target {
        Some(t) => t,
        None => {
            // r_s = p cos(theta) - q sin(theta) with p = a cos(alpha),
            // q = a sin(alpha)
            let mut p = 0.0;
            let mut q = 0.0;
            for (j, &b) in geo.b.iter().enumerate() {
                p += 2.0 / n * b * geo.theta[j].cos();
                q -= 2.0 / n * b * geo.theta[j].sin();
            }
            (p.hypot(q), q.atan2(p))
        }
    };
    let residual = geo
        .b
        .iter()
        .zip(&geo.theta)
        .map(|(&b, &t)| (b - a * (t + alpha).cos()).abs())
        .fold(0.0, f64::max);
    Ok(ProfileFit { a, alpha, residual })
}

/// Solution of the characteristic system r' = a*cos(theta + alpha),
/// theta' = sqrt(1 - a^2 cos^2(theta + alpha)) / phi(r), integrated until
/// theta has advanced by 2*pi.
#[derive(Debug, Clone)]
pub struct CharacteristicPath {
    /// rows of (arc length, r, theta)
    pub samples: Vec<[f64; 3]>,
    /// |r(s_end) - r(0)| plus the residual angular wrap error at s_end
    pub closure_defect: f64,
    /// max |beta - 1| of the warp over the traversed r range; zero only
    /// for space forms, where closed orbits are guaranteed
    pub beta_deviation: f64,
}

impl CharacteristicPath {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,r,theta\n");
        for row in &self.samples {
            out.push_str(&format!("{:.17e},{:.17e},{:.17e}\n", row[0], row[1], row[2]));
        }
        out
    }

    pub fn arc_length(&self) -> f64 {
        self.samples.last().map_or(0.0, |r| r[0])
    }
}

fn characteristic_rhs(
    warp: &WarpPotential,
    a: f64,
    alpha: f64,
    r: f64,
    theta: f64,
) -> Result<(f64, f64)> {
    let c = (theta + alpha).cos();
    let phi = warp.eval(r)?.phi;
    Ok((a * c, (1.0 - a * a * c * c).max(0.0).sqrt() / phi))
}

fn hermite(t: f64, y0: f64, d0: f64, y1: f64, d1: f64, h: f64) -> f64 {
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + t) * h * d0
        + (-2.0 * t3 + 3.0 * t2) * y1
        + (t3 - t2) * h * d1
}

/// d/dt of `hermite`.
fn hermite_deriv(t: f64, y0: f64, d0: f64, y1: f64, d1: f64, h: f64) -> f64 {
    let t2 = t * t;
    (6.0 * t2 - 6.0 * t) * y0
        + (3.0 * t2 - 4.0 * t + 1.0) * h * d0
        + (-6.0 * t2 + 6.0 * t) * y1
        + (3.0 * t2 - 2.0 * t) * h * d1
}

/// Integrate the characteristic system from p0 = (r, theta) with fixed
/// Runge-Kutta steps of size ds, stopping by cubic-Hermite event location
/// when theta has advanced exactly 2*pi.
pub fn integrate_characteristic(
    warp: &Arc<WarpPotential>,
    a: f64,
    alpha: f64,
    p0: (f64, f64),
    ds: f64,
) -> Result<CharacteristicPath> {
    if !(a.abs() < 1.0 && a.is_finite()) {
        return Err(Error::InvalidOffset { a });
    }
    if !(ds > 0.0 && ds.is_finite()) {
        return Err(Error::InvalidConfig(format!("step size {ds} must be positive")));
    }
    let (r0, theta0) = p0;
    let target = theta0 + TAU;
    let mut r = r0;
    let mut theta = theta0;
    let mut s = 0.0;
    let mut r_lo = r0;
    let mut r_hi = r0;
    let mut samples = vec![[0.0, r0, theta0]];
    let max_steps = ((1e4 * TAU / ds).ceil() as usize).max(16);
    let mut closed = None;
    for _ in 0..max_steps {
        let (kr1, kt1) = characteristic_rhs(warp, a, alpha, r, theta)?;
        if kt1 < 1e-12 {
            return Err(Error::StalledTheta {
                theta_prime: kt1,
                s,
            });
        }
        let (kr2, kt2) =
            characteristic_rhs(warp, a, alpha, r + 0.5 * ds * kr1, theta + 0.5 * ds * kt1)?;
        let (kr3, kt3) =
            characteristic_rhs(warp, a, alpha, r + 0.5 * ds * kr2, theta + 0.5 * ds * kt2)?;
        let (kr4, kt4) = characteristic_rhs(warp, a, alpha, r + ds * kr3, theta + ds * kt3)?;
        let r_new = r + ds / 6.0 * (kr1 + 2.0 * kr2 + 2.0 * kr3 + kr4);
        let theta_new = theta + ds / 6.0 * (kt1 + 2.0 * kt2 + 2.0 * kt3 + kt4);
        if theta_new >= target {
            // event location: cubic Hermite for theta(s) on the last step,
            // safeguarded Newton for theta = target, then Hermite for r
            let (kr_new, kt_new) = characteristic_rhs(warp, a, alpha, r_new, theta_new)?;
            let g = |t: f64| hermite(t, theta, kt1, theta_new, kt_new, ds) - target;
            let (mut lo, mut hi) = (0.0f64, 1.0f64);
            let mut t = (target - theta) / (theta_new - theta);
            for _ in 0..60 {
                let gv = g(t);
                if gv > 0.0 {
                    hi = t;
                } else {
                    lo = t;
                }
                let slope = hermite_deriv(t, theta, kt1, theta_new, kt_new, ds).max(1e-30);
                let mut next = t - gv / slope;
                if !(next > lo && next < hi) {
                    next = 0.5 * (lo + hi);
                }
                if (next - t).abs() < 1e-16 {
                    t = next;
                    break;
                }
                t = next;
            }
            let r_end = hermite(t, r, kr1, r_new, kr_new, ds);
            let s_end = s + t * ds;
            samples.push([s_end, r_end, target]);
            closed = Some((r_end - r0).abs() + g(t).abs());
            break;
        }
        r = r_new;
        theta = theta_new;
        s += ds;
        r_lo = r_lo.min(r);
        r_hi = r_hi.max(r);
        samples.push([s, r, theta]);
    }
    let closure_defect = closed.ok_or_else(|| {
        Error::InvalidConfig(format!(
            "characteristic did not close within arc length {:.3e}",
            max_steps as f64 * ds
        ))
    })?;
    let mut beta_deviation = 0.0f64;
    for i in 0..=256 {
        let rr = r_lo + (r_hi - r_lo) * i as f64 / 256.0;
        beta_deviation = beta_deviation.max((warp.eval(rr)?.beta - 1.0).abs());
    }
    Ok(CharacteristicPath {
        samples,
        closure_defect,
        beta_deviation,
    })
}
