//! Retarded far field and emitted intensity of a decaying exciton.
//!
//! Only the axial (z) component of the field is available, and only in the
//! small-ka regime where the Weisskopf–Wigner treatment holds. Amplitudes
//! evolve as ⟨B_k(τ)⟩ = ⟨B_k(0)⟩ e^{−iω_e τ} e^{−Γ_k τ/2} at retarded time
//! τ = t − ρ/c, with Γ_k from the closed form in formula mode. Nothing is
//! emitted before the signal arrives (τ < 0).
//!
//! Units: ρ and z in Å, t in s, field in V/m, intensity ⟨Ê⁻Ê⁺⟩ in (V/m)².

use std::f64::consts::PI;
use std::fmt::Write as _;

use log::warn;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::decay::{gamma_exciton, EvalMode};
use crate::error::{Error, Result};
use crate::lattice::{check_ka, exciton_energy, LatticeParams};
use crate::units::{angstrom_to_m, dipole_to_si, energy_to_rate, CODATA_2018};

/// Largest |ka| for which the small-wave-number field is trusted.
pub const SMALL_KA_LIMIT: f64 = 0.1;

/// Minimum distance, in emission wavelengths, for the far-field form.
pub const FAR_FIELD_WAVELENGTHS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExcitonState {
    /// ⟨B_k(0)⟩.
    pub amplitude0: Complex64,
    /// ⟨B_k†(0) B_k(0)⟩.
    pub population0: f64,
    pub ka: f64,
    /// Number of lattice sites N.
    pub sites: u64,
}

impl ExcitonState {
    pub fn new(amplitude0: Complex64, population0: f64, ka: f64, sites: u64) -> Result<Self> {
        let state = ExcitonState {
            amplitude0,
            population0,
            ka,
            sites,
        };
        state.validate()?;
        Ok(state)
    }

    /// A state with ⟨B_k(0)⟩ = √n and ⟨B_k†B_k⟩ = n.
    pub fn coherent(population0: f64, ka: f64, sites: u64) -> Result<Self> {
        ExcitonState::new(
            Complex64::new(population0.max(0.0).sqrt(), 0.0),
            population0,
            ka,
            sites,
        )
    }

    fn validate(&self) -> Result<()> {
        if !(self.population0 >= 0.0 && self.population0.is_finite()) {
            return Err(Error::domain(
                "population0",
                self.population0,
                "population must be non-negative",
            ));
        }
        if !(self.amplitude0.re.is_finite() && self.amplitude0.im.is_finite()) {
            return Err(Error::domain(
                "amplitude0",
                f64::NAN,
                "amplitude must be finite",
            ));
        }
        if self.sites == 0 {
            return Err(Error::domain("sites", 0.0, "at least one site is required"));
        }
        check_ka(self.ka)
    }
}

/// Observation point (ρ, 0, z) at time t.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldPoint {
    /// Distance from the chain in Å.
    pub rho: f64,
    /// Axial coordinate in Å.
    pub z: f64,
    /// Time in s.
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ValidityWarning {
    /// |ka| above [`SMALL_KA_LIMIT`].
    LargeWaveNumber,
    /// ρ closer than [`FAR_FIELD_WAVELENGTHS`] wavelengths.
    NearField,
}

/// Conditions under which the far-field expressions are being stretched.
pub fn validity_warnings(
    params: &LatticeParams,
    state: &ExcitonState,
    rho: f64,
) -> Vec<ValidityWarning> {
    let mut out = Vec::new();
    if state.ka.abs() > SMALL_KA_LIMIT {
        out.push(ValidityWarning::LargeWaveNumber);
    }
    let wavelength = 2.0 * PI * CODATA_2018.hbar_c / exciton_energy(params, state.ka);
    if rho < FAR_FIELD_WAVELENGTHS * wavelength {
        out.push(ValidityWarning::NearField);
    }
    out
}

fn log_warnings(params: &LatticeParams, state: &ExcitonState, rho: f64) {
    for w in validity_warnings(params, state, rho) {
        match w {
            ValidityWarning::LargeWaveNumber => warn!(
                "ka = {} exceeds {SMALL_KA_LIMIT}; the far-field form assumes ka << 1",
                state.ka
            ),
            ValidityWarning::NearField => {
                warn!("rho = {rho} Å is within {FAR_FIELD_WAVELENGTHS} wavelengths of the chain")
            }
        }
    }
}

/// Quantities shared by the field and intensity at one (params, state).
struct Emitter {
    omega: f64,
    gamma: f64,
    k: f64,
    cos_theta: f64,
    mu_si: f64,
    a_si: f64,
    sites: f64,
}

impl Emitter {
    fn new(params: &LatticeParams, state: &ExcitonState) -> Result<Self> {
        state.validate()?;
        let energy = exciton_energy(params, state.ka);
        let decay = gamma_exciton(params, state.ka, EvalMode::Formula)?;
        Ok(Emitter {
            omega: energy_to_rate(energy),
            gamma: decay.gamma,
            k: state.ka / params.a(),
            cos_theta: params.theta().cos(),
            mu_si: dipole_to_si(params.mu()),
            a_si: angstrom_to_m(params.a()),
            sites: state.sites as f64,
        })
    }

    /// Retarded time t − ρ/c, or `None` before arrival.
    fn retarded_time(&self, pt: &FieldPoint) -> Result<Option<f64>> {
        if !(pt.rho > 0.0 && pt.rho.is_finite()) {
            return Err(Error::domain(
                "rho",
                pt.rho,
                "observation distance must be positive",
            ));
        }
        if !(pt.t.is_finite() && pt.z.is_finite()) {
            return Err(Error::domain("t", pt.t, "time and position must be finite"));
        }
        let tau = pt.t - angstrom_to_m(pt.rho) / CODATA_2018.c_si;
        Ok((tau >= 0.0).then_some(tau))
    }
}

/// Positive-frequency axial field ⟨Ê_z⁺(ρ, z, t)⟩ in V/m.
pub fn field_amplitude(
    params: &LatticeParams,
    state: &ExcitonState,
    pt: &FieldPoint,
) -> Result<Complex64> {
    let em = Emitter::new(params, state)?;
    let Some(tau) = em.retarded_time(pt)? else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    log_warnings(params, state, pt.rho);
    let c = &CODATA_2018;
    let rho_si = angstrom_to_m(pt.rho);
    let magnitude = em.mu_si * em.omega.powf(1.5) * em.cos_theta
        / (4.0 * PI * c.eps0_si * em.a_si * c.c_si.powf(1.5))
        * (PI / (em.sites * rho_si)).sqrt();
    let b =
        state.amplitude0 * Complex64::from_polar((-0.5 * em.gamma * tau).exp(), -em.omega * tau);
    let phase = Complex64::from_polar(1.0, em.k * pt.z);
    Ok(Complex64::new(1.0, 1.0) * magnitude * b * phase)
}

/// Intensity ⟨Ê_z⁻Ê_z⁺⟩ in (V/m)².
pub fn intensity(params: &LatticeParams, state: &ExcitonState, pt: &FieldPoint) -> Result<f64> {
    let em = Emitter::new(params, state)?;
    let Some(tau) = em.retarded_time(pt)? else {
        return Ok(0.0);
    };
    log_warnings(params, state, pt.rho);
    Ok(intensity_at(&em, state, angstrom_to_m(pt.rho), tau))
}

fn intensity_at(em: &Emitter, state: &ExcitonState, rho_si: f64, tau: f64) -> f64 {
    let c = &CODATA_2018;
    let amp = em.mu_si * em.cos_theta / (4.0 * c.eps0_si * em.a_si);
    amp * amp * 2.0 * em.omega.powi(3) / (em.sites * PI * rho_si * c.c_si.powi(3))
        * state.population0
        * (-em.gamma * tau).exp()
}

/// Cycle-averaged irradiance in W/m² for a field with ⟨Ê⁻Ê⁺⟩ = `intensity`.
///
/// The real field is Ê⁺ + Ê⁻, whose cycle-averaged square is 2⟨Ê⁻Ê⁺⟩, so
/// the irradiance ε₀c⟨E²⟩ is 2ε₀c⟨Ê⁻Ê⁺⟩.
pub fn irradiance(intensity: f64) -> f64 {
    2.0 * CODATA_2018.eps0_si * CODATA_2018.c_si * intensity
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntensityTrace {
    pub rho: f64,
    pub z: f64,
    /// Damping rate used for the trace, s⁻¹.
    pub gamma: f64,
    /// (t in s, intensity in (V/m)²).
    pub samples: Vec<(f64, f64)>,
}

impl IntensityTrace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t_s,intensity_V2_per_m2\n");
        for (t, i) in &self.samples {
            let _ = writeln!(out, "{t:.8e},{i:.8e}");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }
}

/// Samples the intensity at fixed (ρ, z) over an ascending time grid.
pub fn intensity_trace(
    params: &LatticeParams,
    state: &ExcitonState,
    rho: f64,
    z: f64,
    t_grid: &[f64],
) -> Result<IntensityTrace> {
    if let Some(w) = t_grid.windows(2).find(|w| !(w[0] <= w[1])) {
        return Err(Error::domain(
            "t_grid",
            w[1],
            "time grid must be sorted ascending",
        ));
    }
    let em = Emitter::new(params, state)?;
    let mut samples = Vec::with_capacity(t_grid.len());
    let mut warned = false;
    for &t in t_grid {
        let pt = FieldPoint { rho, z, t };
        let value = match em.retarded_time(&pt)? {
            Some(tau) => {
                if !warned {
                    log_warnings(params, state, rho);
                    warned = true;
                }
                intensity_at(&em, state, angstrom_to_m(rho), tau)
            }
            None => 0.0,
        };
        samples.push((t, value));
    }
    Ok(IntensityTrace {
        rho,
        z,
        gamma: em.gamma,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const RHO: f64 = 1e7; // 1 mm
    const SITES: u64 = 1000;

    fn arrival(rho: f64) -> f64 {
        angstrom_to_m(rho) / CODATA_2018.c_si
    }

    fn small_k() -> (LatticeParams, ExcitonState) {
        let p = LatticeParams::default().with_theta_deg(20.0).unwrap();
        let s = ExcitonState::new(Complex64::new(0.6, 0.3), 0.45, 0.01, SITES).unwrap();
        (p, s)
    }

    #[test]
    fn perpendicular_dipole_radiates_no_axial_field() {
        let p = LatticeParams::default().with_theta_deg(90.0).unwrap();
        let s = ExcitonState::coherent(1.0, 0.01, SITES).unwrap();
        for t in [0.0, 1e-8, 1e-6] {
            let pt = FieldPoint {
                rho: RHO,
                z: 3.0,
                t: arrival(RHO) + t,
            };
            assert!(field_amplitude(&p, &s, &pt).unwrap().norm() < 1e-10);
            assert!(intensity(&p, &s, &pt).unwrap() < 1e-20);
        }
    }

    #[test]
    fn nothing_before_arrival() {
        let (p, s) = small_k();
        let pt = FieldPoint {
            rho: RHO,
            z: 0.0,
            t: 0.5 * arrival(RHO),
        };
        assert_eq!(
            field_amplitude(&p, &s, &pt).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert_eq!(intensity(&p, &s, &pt).unwrap(), 0.0);
    }

    #[test]
    fn field_falls_as_inverse_sqrt_rho() {
        let (p, s) = small_k();
        let tau = 2e-8;
        let near = FieldPoint {
            rho: RHO,
            z: 0.0,
            t: arrival(RHO) + tau,
        };
        let far = FieldPoint {
            rho: 4.0 * RHO,
            z: 0.0,
            t: arrival(4.0 * RHO) + tau,
        };
        let ratio = field_amplitude(&p, &s, &near).unwrap().norm()
            / field_amplitude(&p, &s, &far).unwrap().norm();
        assert_relative_eq!(ratio, 2.0, max_relative = 1e-9);
    }

    #[test]
    fn intensity_matches_field_for_coherent_state() {
        let p = LatticeParams::default().with_theta_deg(35.0).unwrap();
        let s = ExcitonState::new(Complex64::new(0.3, -0.4), 0.25, 0.02, SITES).unwrap();
        for tau in [0.0, 1e-9, 3e-8] {
            let pt = FieldPoint {
                rho: RHO,
                z: 17.0,
                t: arrival(RHO) + tau,
            };
            let field = field_amplitude(&p, &s, &pt).unwrap();
            let i = intensity(&p, &s, &pt).unwrap();
            assert_relative_eq!(i, field.norm_sqr(), max_relative = 1e-12);
        }
    }

    #[test]
    fn intensity_scalings() {
        let (p, s) = small_k();
        let pt = FieldPoint {
            rho: RHO,
            z: 0.0,
            t: arrival(RHO) + 1e-8,
        };
        let base = intensity(&p, &s, &pt).unwrap();

        let far = FieldPoint {
            rho: 2.0 * RHO,
            z: 0.0,
            t: arrival(2.0 * RHO) + 1e-8,
        };
        assert_relative_eq!(
            intensity(&p, &s, &far).unwrap(),
            0.5 * base,
            max_relative = 1e-12
        );

        let more = ExcitonState {
            sites: 4 * SITES,
            ..s
        };
        assert_relative_eq!(
            intensity(&p, &more, &pt).unwrap(),
            0.25 * base,
            max_relative = 1e-12
        );

        let empty = ExcitonState {
            population0: 0.0,
            ..s
        };
        assert_eq!(intensity(&p, &empty, &pt).unwrap(), 0.0);
    }

    #[test]
    fn intensity_goes_as_cos_squared() {
        // the exciton energy and Γ depend on θ too; compare at the moment of arrival
        // with the ω³ factor divided out
        let s = ExcitonState::coherent(1.0, 0.01, SITES).unwrap();
        let pt = FieldPoint {
            rho: RHO,
            z: 0.0,
            t: arrival(RHO),
        };
        let scaled = |deg: f64| {
            let p = LatticeParams::default().with_theta_deg(deg).unwrap();
            let omega = energy_to_rate(exciton_energy(&p, 0.01));
            intensity(&p, &s, &pt).unwrap() / omega.powi(3) / deg.to_radians().cos().powi(2)
        };
        assert_relative_eq!(scaled(0.0), scaled(40.0), max_relative = 1e-12);
        assert_relative_eq!(scaled(0.0), scaled(70.0), max_relative = 1e-12);
    }

    #[test]
    fn phase_advances_with_z() {
        let (p, s) = small_k();
        let t = arrival(RHO) + 1e-9;
        let dz = 250.0;
        let f0 = field_amplitude(
            &p,
            &s,
            &FieldPoint {
                rho: RHO,
                z: 0.0,
                t,
            },
        )
        .unwrap();
        let f1 = field_amplitude(&p, &s, &FieldPoint { rho: RHO, z: dz, t }).unwrap();
        let advance = (f1 / f0).arg();
        assert!((advance - s.ka * dz / p.a()).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let (p, s) = small_k();
        let bad = FieldPoint {
            rho: 0.0,
            z: 0.0,
            t: 1.0,
        };
        assert!(field_amplitude(&p, &s, &bad).is_err());
        assert!(intensity(&p, &s, &FieldPoint { rho: -1.0, ..bad }).is_err());
        assert!(ExcitonState::new(Complex64::new(0.0, 0.0), -1.0, 0.0, 10).is_err());
        assert!(ExcitonState::new(Complex64::new(0.0, 0.0), 1.0, 0.0, 0).is_err());
        assert!(intensity_trace(&p, &s, RHO, 0.0, &[2.0, 1.0]).is_err());
    }

    #[test]
    fn warnings() {
        let p = LatticeParams::default();
        let s = ExcitonState::coherent(1.0, 0.5, SITES).unwrap();
        let w = validity_warnings(&p, &s, 100.0);
        assert!(w.contains(&ValidityWarning::LargeWaveNumber));
        assert!(w.contains(&ValidityWarning::NearField));
        let s = ExcitonState::coherent(1.0, 0.01, SITES).unwrap();
        assert!(validity_warnings(&p, &s, RHO).is_empty());
    }

    #[test]
    fn trace_before_onset_is_zero() {
        let (p, s) = small_k();
        let onset = arrival(RHO);
        let grid: Vec<f64> = (0..10).map(|i| onset * i as f64 / 20.0).collect();
        let trace = intensity_trace(&p, &s, RHO, 0.0, &grid).unwrap();
        assert!(trace.samples.iter().all(|&(_, i)| i == 0.0));
    }

    #[test]
    fn dark_exciton_plateau() {
        let p = LatticeParams::default();
        let s = ExcitonState::coherent(1.0, 0.8, SITES).unwrap();
        let onset = arrival(RHO);
        let grid: Vec<f64> = (0..50).map(|i| onset + i as f64 * 1e-7).collect();
        let trace = intensity_trace(&p, &s, RHO, 0.0, &grid).unwrap();
        assert_eq!(trace.gamma, 0.0);
        let first = trace.samples[0].1;
        assert!(first > 0.0);
        assert!(trace.samples.iter().all(|&(_, i)| i == first));
    }

    #[test]
    fn trace_decays_at_gamma() {
        let p = LatticeParams::default();
        let s = ExcitonState::coherent(1.0, 0.01, SITES).unwrap();
        let onset = arrival(RHO);
        let grid: Vec<f64> = (0..200).map(|i| onset + i as f64 * 1e-9).collect();
        let trace = intensity_trace(&p, &s, RHO, 0.0, &grid).unwrap();
        assert_relative_eq!(trace.gamma, 3.5287734e7, max_relative = 1e-6);
        let half_life = std::f64::consts::LN_2 / trace.gamma;
        assert_relative_eq!(half_life, 1.96427e-8, max_relative = 1e-5);

        assert!(trace.samples.windows(2).all(|w| w[1].1 <= w[0].1));
        let (t0, i0) = trace.samples[10];
        let (t1, i1) = trace.samples[150];
        let slope = (i1.ln() - i0.ln()) / (t1 - t0);
        assert_relative_eq!(slope, -trace.gamma, max_relative = 1e-10);
    }

    #[test]
    fn trace_csv_header() {
        let (p, s) = small_k();
        let trace = intensity_trace(&p, &s, RHO, 0.0, &[0.0, arrival(RHO)]).unwrap();
        let csv = trace.to_csv();
        assert!(csv.starts_with("t_s,intensity_V2_per_m2\n"));
        assert_eq!(csv.lines().count(), 3);
        let back: IntensityTrace = serde_json::from_str(&trace.to_json()).unwrap();
        assert_eq!(back, trace);
    }

    #[test]
    fn irradiance_conversion() {
        assert_relative_eq!(
            irradiance(1.0),
            2.0 * 8.8541878128e-12 * 299792458.0,
            max_relative = 1e-15
        );
    }
}
