//! Lattice parameters, resonant dipole-dipole coupling and the exciton band.
//!
//! Wave numbers are carried as the dimensionless product `ka` everywhere; the
//! physical k in Å⁻¹ is `ka / a`.
//!
//! Coupling to shells beyond the nearest neighbour reuses the quasi-static
//! 1/L³ form of the nearest-neighbour coupling. That extension is an
//! assumption of this crate and only matters when `neighbor_cutoff > 1`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::CODATA_2018;

/// Physical inputs for an infinite chain with one two-level atom per site.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct LatticeParams {
    e_a: f64,
    a: f64,
    mu: f64,
    theta: f64,
    neighbor_cutoff: u32,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    e_a_ev: f64,
    a_angstrom: f64,
    mu_e_angstrom: f64,
    theta_rad: f64,
    neighbor_cutoff: u32,
}

impl TryFrom<RawParams> for LatticeParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        LatticeParams::new(raw.e_a_ev, raw.a_angstrom, raw.mu_e_angstrom, raw.theta_rad)?
            .with_neighbor_cutoff(raw.neighbor_cutoff)
    }
}

impl From<LatticeParams> for RawParams {
    fn from(p: LatticeParams) -> Self {
        RawParams {
            e_a_ev: p.e_a,
            a_angstrom: p.a,
            mu_e_angstrom: p.mu,
            theta_rad: p.theta,
            neighbor_cutoff: p.neighbor_cutoff,
        }
    }
}

/// Folds any finite angle onto [0, π] using cos(θ) = cos(−θ) = cos(2π − θ).
fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        2.0 * PI - t
    } else {
        t
    }
}

impl LatticeParams {
    /// `e_a` in eV, `a` in Å, `mu` in e·Å, `theta` in radians.
    pub fn new(e_a: f64, a: f64, mu: f64, theta: f64) -> Result<Self> {
        if !(e_a.is_finite() && e_a > 0.0) {
            return Err(Error::domain(
                "e_a",
                e_a,
                "transition energy must be positive",
            ));
        }
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::domain("a", a, "lattice constant must be positive"));
        }
        if !(mu.is_finite() && mu >= 0.0) {
            return Err(Error::domain(
                "mu",
                mu,
                "transition dipole must be non-negative",
            ));
        }
        if !theta.is_finite() {
            return Err(Error::domain("theta", theta, "angle must be finite"));
        }
        Ok(LatticeParams {
            e_a,
            a,
            mu,
            theta: normalize_angle(theta),
            neighbor_cutoff: 1,
        })
    }

    pub fn with_theta(self, theta: f64) -> Result<Self> {
        LatticeParams::new(self.e_a, self.a, self.mu, theta)?
            .with_neighbor_cutoff(self.neighbor_cutoff)
    }

    pub fn with_theta_deg(self, theta_deg: f64) -> Result<Self> {
        self.with_theta(theta_deg.to_radians())
    }

    pub fn with_mu(self, mu: f64) -> Result<Self> {
        LatticeParams::new(self.e_a, self.a, mu, self.theta)?
            .with_neighbor_cutoff(self.neighbor_cutoff)
    }

    pub fn with_neighbor_cutoff(mut self, cutoff: u32) -> Result<Self> {
        if cutoff == 0 {
            return Err(Error::domain(
                "neighbor_cutoff",
                0.0,
                "at least one neighbour shell is required",
            ));
        }
        self.neighbor_cutoff = cutoff;
        Ok(self)
    }

    /// Transition energy in eV.
    pub fn e_a(&self) -> f64 {
        self.e_a
    }

    /// Lattice constant in Å.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Transition dipole in e·Å.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Dipole angle to the lattice axis, in [0, π].
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn theta_deg(&self) -> f64 {
        self.theta.to_degrees()
    }

    pub fn neighbor_cutoff(&self) -> u32 {
        self.neighbor_cutoff
    }

    /// The representative of {θ, π − θ} in [0, π/2].
    ///
    /// All angular dependence goes through this, so mirror-image angles give
    /// bit-identical results whenever π − θ is exact in floating point.
    pub fn folded_theta(&self) -> f64 {
        if self.theta > FRAC_PI_2 {
            PI - self.theta
        } else {
            self.theta
        }
    }

    pub fn cos_sq(&self) -> f64 {
        let c = self.folded_theta().cos();
        c * c
    }

    pub fn sin_sq(&self) -> f64 {
        let s = self.folded_theta().sin();
        s * s
    }
}

impl Default for LatticeParams {
    /// E_a = 1 eV, a = 1000 Å, μ = 1 e·Å, θ = 0, nearest neighbours only.
    fn default() -> Self {
        LatticeParams {
            e_a: 1.0,
            a: 1000.0,
            mu: 1.0,
            theta: 0.0,
            neighbor_cutoff: 1,
        }
    }
}

/// A point on the exciton band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExcitonMode {
    pub ka: f64,
    /// Exciton energy in eV.
    pub energy: f64,
    pub theta: f64,
}

/// Magic angle arccos(1/√3), where 1 − 3cos²θ vanishes.
pub fn magic_angle() -> f64 {
    (1.0 / 3f64.sqrt()).acos()
}

/// Resonant dipole-dipole transfer energy ħJ in eV between two sites a
/// distance `separation` (Å) apart.
pub fn dipole_coupling(params: &LatticeParams, separation: f64) -> Result<f64> {
    if !(separation.is_finite() && separation > 0.0) {
        return Err(Error::domain(
            "separation",
            separation,
            "site separation must be positive",
        ));
    }
    Ok(coupling_unchecked(params, separation))
}

fn coupling_unchecked(params: &LatticeParams, separation: f64) -> f64 {
    let strength = CODATA_2018.e_sq_over_4pi_eps0 * params.mu * params.mu / separation.powi(3);
    strength * (1.0 - 3.0 * params.cos_sq())
}

pub(crate) fn check_ka(ka: f64) -> Result<()> {
    if ka.is_nan() || ka.abs() > PI {
        return Err(Error::domain(
            "ka",
            ka,
            "wave number must lie in the first Brillouin zone [-pi, pi]",
        ));
    }
    Ok(())
}

/// Exciton energy E_ex(k, θ) = E_a + 2 Σₙ ħJ(n·a) cos(n·ka).
pub fn dispersion(params: &LatticeParams, ka: f64) -> Result<ExcitonMode> {
    check_ka(ka)?;
    Ok(ExcitonMode {
        ka,
        energy: exciton_energy(params, ka),
        theta: params.theta,
    })
}

/// Dispersion without the Brillouin-zone check. Even in `ka` by construction.
pub(crate) fn exciton_energy(params: &LatticeParams, ka: f64) -> f64 {
    let ka = ka.abs();
    let shift: f64 = (1..=params.neighbor_cutoff)
        .map(|n| {
            let n = f64::from(n);
            coupling_unchecked(params, n * params.a) * (n * ka).cos()
        })
        .sum();
    params.e_a + 2.0 * shift
}

/// Lowest and highest exciton energy over the Brillouin zone, in eV.
pub fn band_edges(params: &LatticeParams) -> (f64, f64) {
    if params.neighbor_cutoff == 1 {
        let j = coupling_unchecked(params, params.a).abs();
        return (params.e_a - 2.0 * j, params.e_a + 2.0 * j);
    }

    // the band is even in ka, so [0, π] suffices
    const SAMPLES: usize = 4096;
    let step = PI / SAMPLES as f64;
    let energy = |ka: f64| exciton_energy(params, ka);
    let mut i_min = 0;
    let mut i_max = 0;
    let mut e_min = f64::INFINITY;
    let mut e_max = f64::NEG_INFINITY;
    for i in 0..=SAMPLES {
        let e = energy(i as f64 * step);
        if e < e_min {
            e_min = e;
            i_min = i;
        }
        if e > e_max {
            e_max = e;
            i_max = i;
        }
    }
    let window = |i: usize| {
        let lo = (i.saturating_sub(1)) as f64 * step;
        let hi = ((i + 1).min(SAMPLES)) as f64 * step;
        (lo, hi)
    };
    let (lo, hi) = window(i_min);
    let e_min = e_min.min(energy(golden_section(lo, hi, energy)));
    let (lo, hi) = window(i_max);
    let e_max = e_max.max(energy(golden_section(lo, hi, |x| -energy(x))));
    (e_min, e_max)
}

/// Minimiser of a unimodal function on [lo, hi].
fn golden_section(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..100 {
        if hi - lo < 1e-14 {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Allowed wave numbers ka = 2πp/N, p = 0, ±1, …, ±N/2, for N sites with
/// periodic boundary conditions. Sorted ascending, both zone edges included.
pub fn allowed_k(sites: usize) -> Result<Vec<f64>> {
    if sites < 2 || !sites.is_multiple_of(2) {
        return Err(Error::SiteCount(sites));
    }
    let half = (sites / 2) as i64;
    Ok((-half..=half)
        .map(|p| p as f64 / half as f64 * PI)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn defaults() -> LatticeParams {
        LatticeParams::default()
    }

    #[test]
    fn coupling_vanishes_at_magic_angle() {
        let p = defaults().with_theta(magic_angle()).unwrap();
        for l in [1.0, 1000.0, 1e5] {
            let j = dipole_coupling(&p, l).unwrap();
            let scale = CODATA_2018.e_sq_over_4pi_eps0 / l.powi(3);
            assert!(j.abs() < 1e-15 * scale, "J = {j}");
        }
    }

    #[test]
    fn coupling_examples() {
        // 14.399645 / 1e9 · (1 − 3) and · (1 − 0)
        let j0 = dipole_coupling(&defaults(), 1000.0).unwrap();
        assert_relative_eq!(j0, -2.87993e-8, max_relative = 1e-5);
        let p90 = defaults().with_theta_deg(90.0).unwrap();
        assert_relative_eq!(
            dipole_coupling(&p90, 1000.0).unwrap(),
            1.43996e-8,
            max_relative = 1e-5
        );
    }

    #[test]
    fn coupling_rejects_non_positive_separation() {
        assert!(matches!(
            dipole_coupling(&defaults(), 0.0),
            Err(Error::Domain { .. })
        ));
        assert!(dipole_coupling(&defaults(), -3.0).is_err());
        assert!(dipole_coupling(&defaults(), f64::NAN).is_err());
    }

    #[test]
    fn dispersion_examples() {
        let m = dispersion(&defaults(), 0.0).unwrap();
        assert_relative_eq!(m.energy - 1.0, -5.75985e-8, max_relative = 1e-5);

        let dark = defaults().with_mu(0.0).unwrap();
        for ka in [-3.0, 0.0, 1.3] {
            assert_eq!(dispersion(&dark, ka).unwrap().energy, 1.0);
        }

        for deg in [0.0, 33.0, 90.0, 150.0] {
            let p = defaults().with_theta_deg(deg).unwrap();
            let e = dispersion(&p, std::f64::consts::FRAC_PI_2).unwrap().energy;
            assert!((e - 1.0).abs() < 1e-22, "θ = {deg}: {e}");
        }
    }

    #[test]
    fn dispersion_outside_zone_is_an_error() {
        assert!(dispersion(&defaults(), 3.2).is_err());
        assert!(dispersion(&defaults(), -3.2).is_err());
        assert!(dispersion(&defaults(), f64::NAN).is_err());
        assert!(dispersion(&defaults(), PI).is_ok());
        assert!(dispersion(&defaults(), -PI).is_ok());
    }

    #[test]
    fn band_edge_examples() {
        let (lo, hi) = band_edges(&defaults());
        assert_relative_eq!(hi - lo, 4.0 * 2.87993e-8, max_relative = 1e-5);

        let (lo, hi) = band_edges(&defaults().with_mu(0.0).unwrap());
        assert_eq!(hi - lo, 0.0);

        let (lo, hi) = band_edges(&defaults().with_theta(magic_angle()).unwrap());
        assert!((hi - lo).abs() < 1e-22);
    }

    #[test]
    fn band_edges_extended_sum_matches_sampling() {
        let p = defaults().with_neighbor_cutoff(6).unwrap();
        let (lo, hi) = band_edges(&p);
        // dense brute-force scan
        let n = 200_000;
        let (mut bl, mut bh) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..=n {
            let e = exciton_energy(&p, PI * i as f64 / n as f64);
            bl = bl.min(e);
            bh = bh.max(e);
        }
        assert!(lo <= bl + 1e-20 && hi >= bh - 1e-20);
        assert!((bh - bl - (hi - lo)).abs() < 1e-6 * (hi - lo));
    }

    #[test]
    fn k_grid() {
        assert_eq!(allowed_k(2).unwrap(), vec![-PI, 0.0, PI]);
        let g = allowed_k(4).unwrap();
        assert_eq!(g, vec![-PI, -PI / 2.0, 0.0, PI / 2.0, PI]);
        assert!(matches!(allowed_k(1), Err(Error::SiteCount(1))));
        assert!(allowed_k(0).is_err());
        assert!(allowed_k(7).is_err());
        let g = allowed_k(1000).unwrap();
        assert_eq!(g.len(), 1001);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn params_validation() {
        assert!(LatticeParams::new(0.0, 1.0, 1.0, 0.0).is_err());
        assert!(LatticeParams::new(1.0, -1.0, 1.0, 0.0).is_err());
        assert!(LatticeParams::new(1.0, 1.0, -1.0, 0.0).is_err());
        assert!(LatticeParams::new(1.0, 1.0, 1.0, f64::INFINITY).is_err());
        assert!(defaults().with_neighbor_cutoff(0).is_err());
        let p = LatticeParams::new(1.0, 1.0, 1.0, -0.5).unwrap();
        assert_relative_eq!(p.theta(), 0.5, max_relative = 1e-15);
        let p = LatticeParams::new(1.0, 1.0, 1.0, 1.5 * PI).unwrap();
        assert_relative_eq!(p.theta(), 0.5 * PI, max_relative = 1e-15);
    }

    #[test]
    fn serde_round_trip_and_validation() {
        let p = defaults()
            .with_theta(0.3)
            .unwrap()
            .with_neighbor_cutoff(3)
            .unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<LatticeParams>(&s).unwrap(), p);
        let bad = s.replace("\"neighbor_cutoff\":3", "\"neighbor_cutoff\":0");
        assert!(serde_json::from_str::<LatticeParams>(&bad).is_err());
    }

    proptest! {
        #[test]
        fn dispersion_is_even(ka in -PI..=PI, deg in 0.0f64..180.0, cutoff in 1u32..8) {
            let p = defaults().with_theta_deg(deg).unwrap().with_neighbor_cutoff(cutoff).unwrap();
            prop_assert_eq!(dispersion(&p, ka).unwrap().energy, dispersion(&p, -ka).unwrap().energy);
        }

        #[test]
        fn mirror_angle_leaves_band_unchanged(ka in -PI..=PI, theta in FRAC_PI_2..=PI) {
            // π − θ is exact for θ ≥ π/2
            let p = defaults().with_theta(theta).unwrap();
            let q = defaults().with_theta(PI - theta).unwrap();
            prop_assert_eq!(dipole_coupling(&p, 1000.0).unwrap(), dipole_coupling(&q, 1000.0).unwrap());
            prop_assert_eq!(dispersion(&p, ka).unwrap().energy, dispersion(&q, ka).unwrap().energy);
        }

        #[test]
        fn mirror_angle_any_theta(ka in -PI..=PI, theta in 0.0..PI) {
            let p = defaults().with_theta(theta).unwrap();
            let q = defaults().with_theta(PI - theta).unwrap();
            let (e1, e2) = (dispersion(&p, ka).unwrap().energy, dispersion(&q, ka).unwrap().energy);
            prop_assert!((e1 - e2).abs() <= 1e-15 * e1.abs());
        }

        #[test]
        fn band_is_quasi_flat(ka in -PI..=PI, deg in 0.0f64..180.0) {
            let p = defaults().with_theta_deg(deg).unwrap();
            let e = dispersion(&p, ka).unwrap().energy;
            prop_assert!((e - 1.0).abs() < 1e-7);
            let j = dipole_coupling(&p, p.a()).unwrap().abs();
            // rounding of e near 1 is ~1e-16 absolute
            prop_assert!((e - 1.0).abs() <= 2.0 * j + 4e-16);
        }

        #[test]
        fn extra_shells_stay_within_tail_bound(ka in -PI..=PI, deg in 0.0f64..180.0, cutoff in 2u32..40) {
            let p = defaults().with_theta_deg(deg).unwrap();
            let j = dipole_coupling(&p, p.a()).unwrap().abs();
            let e1 = dispersion(&p, ka).unwrap().energy;
            let en = dispersion(&p.with_neighbor_cutoff(cutoff).unwrap(), ka).unwrap().energy;
            let tail: f64 = (2..=cutoff).map(|n| 2.0 * j / f64::from(n).powi(3)).sum();
            prop_assert!((en - e1).abs() <= tail + 4e-16);
        }
    }
}
