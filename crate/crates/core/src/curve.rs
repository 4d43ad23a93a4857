//! Radial-graph curves rho(theta) over the uniform periodic grid, their
//! pointwise geometry (a, b, u, kappa, Phi_s, Phi_ss) and the global
//! functionals L, A, osc and the isoperimetric deficits.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spectral;
use crate::warp::WarpPotential;

/// Closed radial graph sampled at theta_j = 2*pi*j/n.
///
/// Curves produced by cut-and-reflect are only piecewise C^1; they carry
/// their true nodal first derivative, which `functionals` uses in place of
/// the spectral one (spectral differentiation across the cut corners would
/// ring and break the conservation identities).
#[derive(Debug, Clone)]
pub struct RadialCurve {
    warp: Arc<WarpPotential>,
    rho: Vec<f64>,
    rho_theta: Option<Vec<f64>>,
}

/// Per-node geometric fields of a curve.
#[derive(Debug, Clone)]
pub struct GeometrySample {
    pub theta: Vec<f64>,
    /// arc-length density sqrt(phi^2 + rho_theta^2)
    pub s_theta: Vec<f64>,
    /// a = phi / s_theta = g(d_r, nu)
    pub a: Vec<f64>,
    /// b = rho_theta / s_theta = r_s
    pub b: Vec<f64>,
    /// support function u = phi^2 / s_theta
    pub u: Vec<f64>,
    pub kappa: Vec<f64>,
    pub phi: Vec<f64>,
    pub dphi: Vec<f64>,
    pub beta: Vec<f64>,
    /// Phi_s = phi * b
    pub phi_s: Vec<f64>,
    /// Phi_ss by the rational radial-graph formula
    pub phi_ss: Vec<f64>,
    /// normal speed phi' - u*kappa
    pub speed: Vec<f64>,
}

/// Global functionals of a curve.
#[derive(Debug, Clone, Copy)]
pub struct Functionals {
    pub length: f64,
    pub area: f64,
    pub osc: f64,
    /// L^2 - 4*pi*A; only meaningful (and only present) in the plane
    pub lambda: Option<f64>,
}

/// Predicted vs measured second-order isoperimetric deficit coefficient.
#[derive(Debug, Clone)]
pub struct PerturbationCheck {
    pub predicted: f64,
    pub measured: Vec<f64>,
}

pub fn theta_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| TAU * j as f64 / n as f64).collect()
}

fn check_n(n: usize) -> Result<()> {
    if n < 32 || !n.is_power_of_two() {
        return Err(Error::InvalidConfig(format!(
            "grid size {n} must be a power of two >= 32"
        )));
    }
    Ok(())
}

impl RadialCurve {
    pub fn from_samples(warp: Arc<WarpPotential>, rho: Vec<f64>) -> Result<Self> {
        check_n(rho.len())?;
        let (lo, hi) = warp.domain();
        for &r in &rho {
            if !(r > lo && r < hi) {
                return Err(Error::OutOfDomain { r, lo, hi });
            }
        }
        Ok(Self {
            warp,
            rho,
            rho_theta: None,
        })
    }

    pub fn from_function<F: Fn(f64) -> f64>(
        warp: Arc<WarpPotential>,
        n: usize,
        f: F,
    ) -> Result<Self> {
        check_n(n)?;
        let rho = theta_grid(n).into_iter().map(f).collect();
        Self::from_samples(warp, rho)
    }

    pub fn slice(warp: Arc<WarpPotential>, n: usize, r0: f64) -> Result<Self> {
        Self::from_function(warp, n, |_| r0)
    }

    pub(crate) fn with_derivative(
        warp: Arc<WarpPotential>,
        rho: Vec<f64>,
        rho_theta: Vec<f64>,
    ) -> Result<Self> {
        let mut c = Self::from_samples(warp, rho)?;
        c.rho_theta = Some(rho_theta);
        Ok(c)
    }

    pub fn warp(&self) -> &Arc<WarpPotential> {
        &self.warp
    }

    pub fn n(&self) -> usize {
        self.rho.len()
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn stored_derivative(&self) -> Option<&[f64]> {
        self.rho_theta.as_deref()
    }

    pub fn min_rho(&self) -> f64 {
        self.rho.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_rho(&self) -> f64 {
        self.rho.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean_rho(&self) -> f64 {
        self.rho.iter().sum::<f64>() / self.n() as f64
    }

    pub fn osc(&self) -> f64 {
        self.max_rho() - self.min_rho()
    }

    /// Periodic spectral derivatives (rho_theta, rho_thetatheta). A stored
    /// piecewise-C^1 derivative takes precedence for the first derivative.
    pub fn differentiate(&self) -> (Vec<f64>, Vec<f64>) {
        let (d1, d2) = spectral::derivatives(&self.rho);
        match &self.rho_theta {
            Some(stored) => (stored.clone(), d2),
            None => (d1, d2),
        }
    }

    /// Samples of the trigonometric interpolant at theta_j + delta.
    /// Any stored piecewise derivative is dropped: rotation assumes a
    /// smooth (band-limited) curve.
    pub fn rotated(&self, delta: f64) -> Result<Self> {
        Self::from_samples(self.warp.clone(), spectral::rotate(&self.rho, delta))
    }

    /// All pointwise geometric fields.
    pub fn geometry(&self) -> Result<GeometrySample> {
        let n = self.n();
        let (d1, d2) = self.differentiate();
        let mut phi = vec![0.0; n];
        let mut dphi = vec![0.0; n];
        let mut beta = vec![0.0; n];
        let mut s_theta = vec![0.0; n];
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        let mut u = vec![0.0; n];
        let mut phi_s = vec![0.0; n];
        let mut phi_ss = vec![0.0; n];
        for j in 0..n {
            let e = self.warp.eval(self.rho[j])?;
            phi[j] = e.phi;
            dphi[j] = e.dphi;
            beta[j] = e.beta;
            let w = e.phi * e.phi + d1[j] * d1[j];
            s_theta[j] = w.sqrt();
            a[j] = e.phi / s_theta[j];
            b[j] = d1[j] / s_theta[j];
            u[j] = e.phi * e.phi / s_theta[j];
            phi_s[j] = e.phi * b[j];
            phi_ss[j] = (e.phi.powi(3) * d2[j] + e.dphi * d1[j].powi(4)) / (w * w);
        }
        // kappa = phi' a / phi - b_s / a, with b_s = (a/phi) b_theta
        let b_theta = spectral::derivative(&b);
        let mut kappa = vec![0.0; n];
        let mut speed = vec![0.0; n];
        for j in 0..n {
            kappa[j] = dphi[j] * a[j] / phi[j] - b_theta[j] / phi[j];
            speed[j] = dphi[j] - u[j] * kappa[j];
        }
        Ok(GeometrySample {
            theta: theta_grid(n),
            s_theta,
            a,
            b,
            u,
            kappa,
            phi,
            dphi,
            beta,
            phi_s,
            phi_ss,
            speed,
        })
    }

    /// Length, enclosed area, oscillation and (in the plane) Lambda.
    /// Trapezoid sums on the uniform grid, spectrally accurate for smooth
    /// curves.
    pub fn functionals(&self) -> Result<Functionals> {
        let n = self.n();
        let dtheta = TAU / n as f64;
        let d1 = match &self.rho_theta {
            Some(stored) => stored.clone(),
            None => spectral::derivative(&self.rho),
        };
        let mut length = 0.0;
        let mut area = 0.0;
        for j in 0..n {
            let e = self.warp.eval(self.rho[j])?;
            length += (e.phi * e.phi + d1[j] * d1[j]).sqrt();
            area += self.warp.big_phi(self.rho[j])?;
        }
        length *= dtheta;
        area *= dtheta;
        let lambda = self
            .warp
            .is_euclidean()
            .then(|| length * length - 4.0 * PI * area);
        Ok(Functionals {
            length,
            area,
            osc: self.osc(),
            lambda,
        })
    }

    /// Isoperimetric deficit L^2 - F(A).
    pub fn iso_difference(&self) -> Result<f64> {
        let f = self.functionals()?;
        Ok(f.length * f.length - self.warp.iso_profile(f.area)?)
    }

    /// Curve CSV with header `theta,rho`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,rho\n");
        for (t, r) in theta_grid(self.n()).iter().zip(&self.rho) {
            out.push_str(&format!("{t:.17e},{r:.17e}\n"));
        }
        out
    }

    pub fn from_csv(warp: Arc<WarpPotential>, text: &str) -> Result<Self> {
        let mut rho = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (i == 0 && line.starts_with("theta")) {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 2 {
                return Err(Error::InvalidConfig(format!("bad CSV line {}", i + 1)));
            }
            let r: f64 = cols[1]
                .trim()
                .parse()
                .map_err(|e| Error::InvalidConfig(format!("bad rho on line {}: {e}", i + 1)))?;
            rho.push(r);
        }
        Self::from_samples(warp, rho)
    }
}

/// Second-order expansion of the normalized deficit
/// (L^2 - F(A)) / (4 pi^2 eps^2) for the perturbed slice rho = r0 + eps*g,
/// together with directly measured quotients for each requested eps. In
/// this normalization the predicted coefficient is
/// gbar^2 + (1/2pi) int (g_theta^2 - g^2)
///   + (beta - 1) (gbar^2 - (1/2pi) int g^2),
/// which is -1/2 for g = cos(theta) when beta = 2.
pub fn perturbation_coefficient(
    warp: &Arc<WarpPotential>,
    r0: f64,
    g: &[f64],
    eps_list: &[f64],
) -> Result<PerturbationCheck> {
    check_n(g.len())?;
    let n = g.len() as f64;
    let beta = warp.eval(r0)?.beta;
    let g_theta = spectral::derivative(g);
    let mean = g.iter().sum::<f64>() / n;
    let int_g2 = g.iter().map(|x| x * x).sum::<f64>() * TAU / n;
    let int_gt2 = g_theta.iter().map(|x| x * x).sum::<f64>() * TAU / n;
    let predicted = mean * mean + (int_gt2 - int_g2) / TAU
        + (beta - 1.0) * (mean * mean - int_g2 / TAU);

    let norm = 4.0 * PI * PI;
    let mut measured = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let rho: Vec<f64> = g.iter().map(|&x| r0 + eps * x).collect();
        let curve = RadialCurve::from_samples(warp.clone(), rho)?;
        measured.push(curve.iso_difference()? / (norm * eps * eps));
    }
    Ok(PerturbationCheck {
        predicted,
        measured,
    })
}
