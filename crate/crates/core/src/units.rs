//! Physical constants and unit conventions.
//!
//! Everything inside the crate works in (eV, Å, s). Transition dipoles are in
//! e·Å. SI only shows up at the output boundary: rates in s⁻¹ and far fields in
//! V/m.

use serde::{Deserialize, Serialize};

/// CODATA-2018 constants used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// ħc in eV·Å.
    pub hbar_c: f64,
    /// e²/(4πε₀) in eV·Å.
    pub e_sq_over_4pi_eps0: f64,
    /// ħ in J·s.
    pub hbar_si: f64,
    /// Speed of light in m/s.
    pub c_si: f64,
    /// Vacuum permittivity in F/m.
    pub eps0_si: f64,
    /// Joules per electron-volt (numerically the elementary charge in C).
    pub ev_to_j: f64,
    /// C·m per e·Å.
    pub e_angstrom_to_cm: f64,
}

const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
const INV_FINE_STRUCTURE: f64 = 137.035_999_084;
const HBAR_C_EV_ANGSTROM: f64 = 1_973.269_804;

pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    hbar_c: HBAR_C_EV_ANGSTROM,
    e_sq_over_4pi_eps0: HBAR_C_EV_ANGSTROM / INV_FINE_STRUCTURE,
    hbar_si: 1.054_571_817e-34,
    c_si: 299_792_458.0,
    eps0_si: 8.854_187_812_8e-12,
    ev_to_j: ELEMENTARY_CHARGE,
    e_angstrom_to_cm: ELEMENTARY_CHARGE * ANGSTROM_TO_M,
};

/// Metres per ångström.
pub const ANGSTROM_TO_M: f64 = 1e-10;

impl PhysicalConstants {
    /// ħ in eV·s.
    pub fn hbar_ev_s(&self) -> f64 {
        self.hbar_si / self.ev_to_j
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        CODATA_2018
    }
}

/// Angular frequency ω = E/ħ in rad/s for an energy in eV.
pub fn energy_to_rate(energy_ev: f64) -> f64 {
    energy_ev * CODATA_2018.ev_to_j / CODATA_2018.hbar_si
}

pub fn ev_to_joule(energy_ev: f64) -> f64 {
    energy_ev * CODATA_2018.ev_to_j
}

pub fn joule_to_ev(energy_j: f64) -> f64 {
    energy_j / CODATA_2018.ev_to_j
}

pub fn angstrom_to_m(length: f64) -> f64 {
    length * ANGSTROM_TO_M
}

pub fn dipole_to_si(mu_e_angstrom: f64) -> f64 {
    mu_e_angstrom * CODATA_2018.e_angstrom_to_cm
}
