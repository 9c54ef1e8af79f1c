//! Independent evaluation of the exciton damping rate by quadrature of the
//! Fermi golden rule.
//!
//! The exciton with wave number k emits only photons q = (q′cosφ, q′sinφ, k).
//! With the normal-plane sum written as (S/4π²)∫dφ∫q′dq′, the density of
//! states N/V·S = 1/a, and q′dq′ = q dq, the energy delta fixes
//! q = q₀ = E_ex/ħc. What is left is an azimuthal integral of the
//! polarization-summed dipole overlap,
//!
//! ```text
//! Γ = (e²/4πε₀) q₀² / (a ħ) · ∫ dφ [ |μ|² − (q·μ)²/q₀² ]
//! ```
//!
//! which is done numerically here. Nothing in this module uses the closed
//! form from [`crate::decay`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{check_ka, exciton_energy, LatticeParams};
use crate::quadrature::integrate;
use crate::units::CODATA_2018;

/// Tolerances for the azimuthal integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    /// Absolute tolerance in s⁻¹.
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_subdivisions: 200,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::domain("rel_tol", self.rel_tol, "must be positive"));
        }
        if !(self.abs_tol >= 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::domain(
                "abs_tol",
                self.abs_tol,
                "must be non-negative",
            ));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::domain("max_subdivisions", 0.0, "must be at least 1"));
        }
        Ok(())
    }
}

/// Golden-rule damping rate in s⁻¹, integrating φ over [−π, π].
pub fn gamma_golden_rule(params: &LatticeParams, ka: f64, spec: &QuadratureSpec) -> Result<f64> {
    gamma_golden_rule_from(params, ka, spec, -PI)
}

/// As [`gamma_golden_rule`] with the azimuth running over
/// `[phi_start, phi_start + 2π]`.
pub fn gamma_golden_rule_from(
    params: &LatticeParams,
    ka: f64,
    spec: &QuadratureSpec,
    phi_start: f64,
) -> Result<f64> {
    check_ka(ka)?;
    spec.validate()?;
    let c = &CODATA_2018;
    let energy = exciton_energy(params, ka);
    let q0 = energy / c.hbar_c;
    let k = ka / params.a();
    if !(q0 > 0.0) || q0 < k.abs() {
        // no photon with this k_z carries the exciton energy
        return Ok(0.0);
    }
    let q_perp = (q0 * q0 - k * k).sqrt();

    // unit dipole (sinθ, 0, cosθ); μ² is applied outside the integral
    let theta = params.theta();
    let dipole = [theta.sin(), 0.0, theta.cos()];
    let overlap = |phi: f64| {
        let q = [q_perp * phi.cos(), q_perp * phi.sin(), k];
        let q_dot_mu = q[0] * dipole[0] + q[1] * dipole[1] + q[2] * dipole[2];
        let mu_sq = dipole.iter().map(|d| d * d).sum::<f64>();
        mu_sq - q_dot_mu * q_dot_mu / (q0 * q0)
    };

    let scale =
        c.e_sq_over_4pi_eps0 * params.mu() * params.mu() * q0 * q0 / (params.a() * c.hbar_ev_s());
    if scale == 0.0 {
        return Ok(0.0);
    }
    let abs_tol = spec.abs_tol / scale;
    let integral = integrate(
        overlap,
        phi_start,
        phi_start + 2.0 * PI,
        spec.rel_tol,
        abs_tol,
        spec.max_subdivisions,
    )
    .map_err(|e| match e {
        Error::Quadrature {
            value,
            error_estimate,
            subdivisions,
        } => Error::Quadrature {
            value: value * scale,
            error_estimate: error_estimate * scale,
            subdivisions,
        },
        other => other,
    })?;
    Ok(scale * integral.value)
}

/// Points with r above this are left out of the pass/fail decision.
pub const LIGHT_CONE_EDGE: f64 = 0.999;

/// Maximum relative discrepancy allowed between quadrature and closed form.
pub const AGREEMENT_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationPoint {
    pub ka: f64,
    pub theta_deg: f64,
    /// ħc|k|/E_ex at this point.
    pub r: f64,
    pub gamma_quad: Option<f64>,
    pub gamma_formula: f64,
    pub rel_err: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationSummary {
    pub max_rel_err: f64,
    pub mean_rel_err: f64,
    /// Number of points that entered the pass decision.
    pub compared: usize,
    pub failures: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub points: Vec<ValidationPoint>,
    pub summary: ValidationSummary,
}

impl ValidationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// The 20×20 grid ka ∈ [0.01, 0.45], θ ∈ [0°, 90°] used by `validate`.
pub fn default_validation_grid() -> (Vec<f64>, Vec<f64>) {
    (
        linspace(0.01, 0.45, 20),
        linspace(0.0, 90.0, 20)
            .into_iter()
            .map(f64::to_radians)
            .collect(),
    )
}

pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { hi } else { lo + i as f64 * step })
                .collect()
        }
    }
}

/// Compares quadrature against the lightcone-mode closed form on the
/// Cartesian product of `ka_samples` × `theta_samples` (radians).
pub fn validate_grid(
    params: &LatticeParams,
    ka_samples: &[f64],
    theta_samples: &[f64],
    spec: &QuadratureSpec,
) -> Result<ValidationReport> {
    use crate::decay::{gamma_exciton, EvalMode};

    let mut points = Vec::with_capacity(ka_samples.len() * theta_samples.len());
    for &ka in ka_samples {
        check_ka(ka)?;
        for &theta in theta_samples {
            let p = params.with_theta(theta)?;
            let formula = gamma_exciton(&p, ka, EvalMode::Lightcone)?;
            let (gamma_quad, error) = match gamma_golden_rule(&p, ka, spec) {
                Ok(g) => (Some(g), None),
                Err(e) => (None, Some(e.to_string())),
            };
            let rel_err = gamma_quad.map(|g| relative_error(g, formula.gamma));
            points.push(ValidationPoint {
                ka,
                theta_deg: theta.to_degrees(),
                r: formula.r,
                gamma_quad,
                gamma_formula: formula.gamma,
                rel_err,
                error,
            });
        }
    }
    let summary = summarize(&points);
    Ok(ValidationReport { points, summary })
}

fn relative_error(value: f64, reference: f64) -> f64 {
    if value == reference {
        0.0
    } else if reference == 0.0 {
        f64::INFINITY
    } else {
        ((value - reference) / reference).abs()
    }
}

fn summarize(points: &[ValidationPoint]) -> ValidationSummary {
    let mut max_rel_err: f64 = 0.0;
    let mut sum = 0.0;
    let mut compared = 0;
    let mut failures = 0;
    for p in points.iter().filter(|p| p.r <= LIGHT_CONE_EDGE) {
        match p.rel_err {
            Some(e) => {
                compared += 1;
                sum += e;
                max_rel_err = max_rel_err.max(e);
            }
            None => failures += 1,
        }
    }
    ValidationSummary {
        max_rel_err,
        mean_rel_err: if compared > 0 {
            sum / compared as f64
        } else {
            0.0
        },
        compared,
        failures,
        pass: failures == 0 && max_rel_err <= AGREEMENT_TOLERANCE,
    }
}
