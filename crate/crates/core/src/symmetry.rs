//! The reflection isometry (r, theta) -> (r, 2*alpha - theta), bilateral
//! symmetry testing, the cut-and-reflect construction with its
//! area-equalizing axis search, and periodic mollification.

use std::f64::consts::{PI, TAU};

use crate::curve::RadialCurve;
use crate::error::{Error, Result};
use crate::spectral;

/// Reflection axis angle, normalized to [0, 2*pi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub alpha: f64,
}

impl Axis {
    pub fn new(alpha: f64) -> Self {
        Self {
            alpha: alpha.rem_euclid(TAU),
        }
    }

    /// m with 2*alpha = m * dtheta. When m is an integer (axis on the grid
    /// or half-grid) the reflection maps node j to node (m - j) mod n.
    fn steps(&self, n: usize) -> Result<usize> {
        let exact = self.alpha * n as f64 / PI;
        let m = exact.round();
        if (exact - m).abs() > 1e-9 {
            return Err(Error::OffGridAxis {
                alpha: self.alpha,
                n,
            });
        }
        Ok((m as i64).rem_euclid(2 * n as i64) as usize)
    }
}

fn mirror(m: usize, j: usize, n: usize) -> usize {
    (m as i64 - j as i64).rem_euclid(n as i64) as usize
}

/// Image of the curve under the reflection through alpha. An isometry, so
/// length and area are preserved.
pub fn reflect(curve: &RadialCurve, axis: Axis) -> Result<RadialCurve> {
    let n = curve.n();
    let m = axis.steps(n)?;
    let rho: Vec<f64> = (0..n).map(|j| curve.rho()[mirror(m, j, n)]).collect();
    match curve.stored_derivative() {
        Some(d) => {
            let d: Vec<f64> = (0..n).map(|j| -d[mirror(m, j, n)]).collect();
            RadialCurve::with_derivative(curve.warp().clone(), rho, d)
        }
        None => RadialCurve::from_samples(curve.warp().clone(), rho),
    }
}

/// max_j |rho(theta_j) - rho(2*alpha - theta_j)|; zero iff the curve is
/// grid-exactly symmetric about alpha.
pub fn symmetry_defect(curve: &RadialCurve, axis: Axis) -> Result<f64> {
    let n = curve.n();
    let m = axis.steps(n)?;
    Ok((0..n)
        .map(|j| (curve.rho()[j] - curve.rho()[mirror(m, j, n)]).abs())
        .fold(0.0, f64::max))
}

/// The two bilaterally symmetric curves of the cut-and-reflect
/// construction: the first keeps rho on theta in [alpha - pi, alpha] and
/// mirrors it, the second keeps the complementary half.
///
/// Nodes exactly on the cut (theta = alpha and alpha - pi, which exist when
/// m is even) belong to the kept half of both outputs; this sharing is what
/// makes L1 + L2 = 2 L0 and A1 + A2 = 2 A0 exact at quadrature precision.
/// The outputs carry their piecewise nodal derivative taken from the
/// parent, since the cut generically creates corners.
pub fn cut_and_reflect(curve: &RadialCurve, axis: Axis) -> Result<(RadialCurve, RadialCurve)> {
    let n = curve.n();
    let m = axis.steps(n)?;
    let d1 = curve.differentiate().0;
    let rho = curve.rho();
    let mut rho1 = vec![0.0; n];
    let mut rho2 = vec![0.0; n];
    let mut d1_1 = vec![0.0; n];
    let mut d1_2 = vec![0.0; n];
    for j in 0..n {
        // q/2 half-steps measure (alpha - theta_j) mod 2*pi; the kept half
        // of curve 1 is q in [0, n] (theta in [alpha - pi, alpha])
        let q = (m as i64 - 2 * j as i64).rem_euclid(2 * n as i64) as usize;
        let jm = mirror(m, j, n);
        if q <= n {
            rho1[j] = rho[j];
            d1_1[j] = d1[j];
        } else {
            rho1[j] = rho[jm];
            d1_1[j] = -d1[jm];
        }
        if q == 0 || q >= n {
            rho2[j] = rho[j];
            d1_2[j] = d1[j];
        } else {
            rho2[j] = rho[jm];
            d1_2[j] = -d1[jm];
        }
    }
    Ok((
        RadialCurve::with_derivative(curve.warp().clone(), rho1, d1_1)?,
        RadialCurve::with_derivative(curve.warp().clone(), rho2, d1_2)?,
    ))
}

/// Discrete area difference A1 - A2 of the halves cut at the given angle,
/// evaluated by rotating the curve so the axis lands on the grid. Smooth in
/// alpha and odd under alpha -> alpha + pi.
fn half_area_diff(curve: &RadialCurve, alpha: f64) -> Result<f64> {
    let n = curve.n();
    let rot = spectral::rotate(curve.rho(), alpha);
    let warp = curve.warp();
    let mut kept = 0.0;
    let mut comp = 0.0;
    // after rotation the axis sits at node 0; curve 1 keeps theta' in
    // [-pi, 0], i.e. j = 0 and j >= n/2
    for (j, &r) in rot.iter().enumerate() {
        let v = warp.big_phi(r)?;
        if j == 0 || j >= n / 2 {
            kept += v;
        }
        if j <= n / 2 {
            comp += v;
        }
    }
    Ok(2.0 * (TAU / n as f64) * (kept - comp))
}

/// An axis for which the two cut-and-reflect halves enclose equal area.
///
/// Since the area difference flips sign under alpha -> alpha + pi, a root
/// always exists; it is located by bisection on [0, pi]. A curve with
/// identically zero difference (e.g. a slice) deterministically returns
/// alpha = 0.
pub fn equalizing_axis(curve: &RadialCurve) -> Result<Axis> {
    let area0 = curve.functionals()?.area;
    let tol = 1e-12 * area0.abs().max(1e-300);
    let h0 = half_area_diff(curve, 0.0)?;
    if h0.abs() <= tol {
        return Ok(Axis::new(0.0));
    }
    let (mut a, mut b) = (0.0f64, PI);
    let mut ha = h0;
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let hm = half_area_diff(curve, mid)?;
        if hm.abs() <= tol || (b - a) < 1e-15 {
            return Ok(Axis::new(mid));
        }
        if (hm > 0.0) == (ha > 0.0) {
            a = mid;
            ha = hm;
        } else {
            b = mid;
        }
    }
    Ok(Axis::new(0.5 * (a + b)))
}

/// Periodic convolution with an even, nonnegative, unit-mass bump of
/// support width 2h (the standard exp(1/(x^2 - 1)) profile, normalized by
/// grid quadrature). Preserves the mean, any on-grid bilateral symmetry,
/// and the pointwise range of rho.
pub fn mollify(curve: &RadialCurve, h: f64) -> Result<RadialCurve> {
    if !(h > 0.0 && h < PI) {
        return Err(Error::InvalidConfig(format!(
            "mollifier width {h} must lie in (0, pi)"
        )));
    }
    let n = curve.n();
    let dtheta = TAU / n as f64;
    let half = ((h / dtheta).ceil() as usize).min(n / 2 - 1);
    let mut weights = Vec::with_capacity(2 * half + 1);
    let mut total = 0.0;
    for d in -(half as i64)..=(half as i64) {
        let x = d as f64 * dtheta / h;
        let w = if x.abs() < 1.0 {
            (1.0 / (x * x - 1.0)).exp()
        } else {
            0.0
        };
        weights.push(w);
        total += w;
    }
    for w in &mut weights {
        *w /= total;
    }
    let rho = curve.rho();
    let out: Vec<f64> = (0..n)
        .map(|j| {
            weights
                .iter()
                .enumerate()
                .map(|(i, w)| {
                    let d = i as i64 - half as i64;
                    w * rho[(j as i64 - d).rem_euclid(n as i64) as usize]
                })
                .sum()
        })
        .collect();
    RadialCurve::from_samples(curve.warp().clone(), out)
}
