//! Radiative damping of lattice excitons.
//!
//! Only photons whose wave-vector component along the chain equals the
//! exciton wave number can be emitted. Integrating the golden-rule rate over
//! the remaining transverse momenta gives the closed form
//!
//! ```text
//! Γ_k = μ² E_ex² / (4 ε₀ a ħ³ c²) · { 1 + cos²θ − r² (2cos²θ − sin²θ) },   r = ħck / E_ex
//! ```
//!
//! The braces (the "bracket") go negative for θ below the magic angle once
//! r is large enough. The rate is clamped to zero there. In
//! [`EvalMode::Lightcone`] the rate is also zero whenever r > 1, since no real
//! transverse photon momentum exists outside the light cone.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{check_ka, exciton_energy, LatticeParams};
use crate::roots::bisect;
use crate::units::CODATA_2018;

/// Absolute tolerance of the critical-point solvers (ka, and θ in radians).
pub const SOLVER_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum EvalMode {
    /// Evaluate the closed form at every ka, as the published curves do.
    #[default]
    Formula,
    /// Additionally zero the rate outside the light cone (r > 1).
    Lightcone,
}

impl fmt::Display for EvalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvalMode::Formula => "formula",
            EvalMode::Lightcone => "lightcone",
        })
    }
}

impl FromStr for EvalMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "formula" => Ok(EvalMode::Formula),
            "lightcone" => Ok(EvalMode::Lightcone),
            other => Err(format!(
                "unknown mode `{other}` (expected formula or lightcone)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// Faster than a free atom.
    Superradiant,
    /// Non-zero but not faster than a free atom.
    Subradiant,
    /// Zero radiative rate.
    Dark,
}

impl Regime {
    pub fn classify(gamma: f64, ratio: f64) -> Regime {
        if gamma == 0.0 {
            Regime::Dark
        } else if ratio > 1.0 {
            Regime::Superradiant
        } else {
            Regime::Subradiant
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Superradiant => "superradiant",
            Regime::Subradiant => "subradiant",
            Regime::Dark => "dark",
        })
    }
}

impl FromStr for Regime {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "superradiant" => Ok(Regime::Superradiant),
            "subradiant" => Ok(Regime::Subradiant),
            "dark" => Ok(Regime::Dark),
            other => Err(format!("unknown regime `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayResult {
    /// Exciton damping rate Γ_k in s⁻¹, never negative.
    pub gamma: f64,
    /// Free-atom rate Γ_at in s⁻¹.
    pub gamma_atom: f64,
    /// Γ_k / Γ_at, taken as 0 when μ = 0.
    pub ratio: f64,
    pub regime: Regime,
    pub mode: EvalMode,
    /// Value of the angular bracket before clamping.
    pub bracket: f64,
    /// ħc|k| / E_ex(k).
    pub r: f64,
}

/// Free-atom spontaneous emission rate μ²E_a³/(3πε₀ħ⁴c³) in s⁻¹.
pub fn gamma_atom(params: &LatticeParams) -> f64 {
    let c = &CODATA_2018;
    // μ²/ε₀ = 4π·(e²/4πε₀)·μ² in eV·Å³
    let hbar_c = c.hbar_c;
    let e = params.e_a();
    let energy = 4.0 / 3.0 * c.e_sq_over_4pi_eps0 * params.mu() * params.mu() * e * e * e
        / (hbar_c * hbar_c * hbar_c);
    energy / c.hbar_ev_s()
}

/// The angular bracket 1 + cos²θ − r²(2cos²θ − sin²θ).
pub fn bracket(cos_sq: f64, sin_sq: f64, r: f64) -> f64 {
    1.0 + cos_sq - r * r * (2.0 * cos_sq - sin_sq)
}

/// (ħc|k|/E_ex, E_ex) at wave number `ka`.
fn light_cone_ratio(params: &LatticeParams, ka: f64) -> (f64, f64) {
    let energy = exciton_energy(params, ka);
    let k = ka.abs() / params.a();
    (CODATA_2018.hbar_c * k / energy, energy)
}

fn bracket_at(params: &LatticeParams, ka: f64) -> f64 {
    let (r, _) = light_cone_ratio(params, ka);
    bracket(params.cos_sq(), params.sin_sq(), r)
}

/// Collective damping rate of the exciton with wave number `ka`.
pub fn gamma_exciton(params: &LatticeParams, ka: f64, mode: EvalMode) -> Result<DecayResult> {
    check_ka(ka)?;
    let (r, energy) = light_cone_ratio(params, ka);
    if !(energy > 0.0) {
        return Err(Error::domain(
            "exciton energy",
            energy,
            "exciton energy must be positive",
        ));
    }
    let c = &CODATA_2018;
    let x = bracket(params.cos_sq(), params.sin_sq(), r);
    // μ²E²/(4ε₀aħ³c²) = π·(e²/4πε₀)·μ²·E² / (a·(ħc)²·ħ)
    let prefactor = PI * c.e_sq_over_4pi_eps0 * params.mu() * params.mu() * energy * energy
        / (params.a() * c.hbar_c * c.hbar_c)
        / c.hbar_ev_s();
    let outside_cone = mode == EvalMode::Lightcone && r > 1.0;
    let gamma = if outside_cone || x <= 0.0 {
        0.0
    } else {
        prefactor * x
    };
    let gamma_atom = gamma_atom(params);
    let ratio = if gamma_atom > 0.0 {
        gamma / gamma_atom
    } else {
        0.0
    };
    Ok(DecayResult {
        gamma,
        gamma_atom,
        ratio,
        regime: Regime::classify(gamma, ratio),
        mode,
        bracket: x,
        r,
    })
}

/// Why no critical wave number exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoCriticalPoint {
    /// 2cos²θ − sin²θ ≤ 0: the rate grows with k, it never reaches zero.
    BeyondMagicAngle,
    /// The zero of the bracket would sit at ka > π.
    BeyondZoneEdge,
}

impl fmt::Display for NoCriticalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoCriticalPoint::BeyondMagicAngle => "theta beyond magic angle",
            NoCriticalPoint::BeyondZoneEdge => "critical point beyond zone edge",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalK {
    /// Wave number beyond which the rate vanishes.
    pub ka_c: std::result::Result<f64, NoCriticalPoint>,
    pub theta: f64,
}

impl CriticalK {
    pub fn value(&self) -> Option<f64> {
        self.ka_c.ok()
    }
}

/// Wave number in (0, π] where the damping rate drops to zero.
pub fn critical_ka(params: &LatticeParams) -> CriticalK {
    let (c2, s2) = (params.cos_sq(), params.sin_sq());
    let ka_c = if 2.0 * c2 - s2 <= 0.0 {
        Err(NoCriticalPoint::BeyondMagicAngle)
    } else if bracket_at(params, PI) > 0.0 {
        Err(NoCriticalPoint::BeyondZoneEdge)
    } else {
        // bracket(0) = 1 + cos²θ > 0 and bracket(π) ≤ 0
        bisect(|ka| bracket_at(params, ka), 0.0, PI, SOLVER_TOLERANCE)
            .ok_or(NoCriticalPoint::BeyondZoneEdge)
    };
    CriticalK {
        ka_c,
        theta: params.theta(),
    }
}

/// Angular range with zero damping at a fixed wave number.
///
/// The exciton is dark for θ in [0, `lower_edge`) and (`upper_edge`, π].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DarkWindow {
    pub lower_edge: f64,
    pub upper_edge: f64,
}

/// Boundary angles of the dark region at wave number `ka` (formula mode).
///
/// Returns `Ok(None)` when the rate is positive at every angle.
pub fn dark_window(params: &LatticeParams, ka: f64) -> Result<Option<DarkWindow>> {
    check_ka(ka)?;
    if ka == 0.0 {
        return Err(Error::domain(
            "ka",
            ka,
            "dark windows need a non-zero wave number",
        ));
    }
    let at = |theta: f64| {
        // the exciton energy, and with it r, depends on θ through J(θ)
        params
            .with_theta(theta)
            .map(|p| bracket_at(&p, ka))
            .unwrap_or(f64::NAN)
    };
    if at(0.0) >= 0.0 {
        return Ok(None);
    }
    Ok(
        bisect(at, 0.0, FRAC_PI_2, SOLVER_TOLERANCE).map(|edge| DarkWindow {
            lower_edge: edge,
            upper_edge: PI - edge,
        }),
    )
}
