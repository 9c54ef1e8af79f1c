//! Browser bindings for the exciton decay library.
//!
//! Every export returns a JSON string: the requested data on success, or
//! `{"error": "..."}` when the inputs are out of range. Keeping the boundary
//! to plain strings means the same functions run and test natively.

use std::f64::consts::PI;

use exciton_decay::{
    band_edges, critical_ka, dark_window, dispersion, gamma_atom, gamma_exciton, intensity_trace,
    EvalMode, ExcitonState, LatticeParams, CODATA_2018,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const MAX_STEPS: usize = 5000;

#[derive(Serialize)]
struct Curve {
    x: Vec<f64>,
    y: Vec<f64>,
}

#[derive(Serialize)]
struct DispersionPlot {
    curve: Curve,
    band_min_ev: f64,
    band_max_ev: f64,
    /// Photon line E = ħc|k| over the same ka grid, in eV.
    light_line: Vec<f64>,
}

#[derive(Serialize)]
struct KaPlot {
    ratio: Curve,
    gamma_atom: f64,
    ka_c: Option<f64>,
    no_critical_point: Option<String>,
}

#[derive(Serialize)]
struct ThetaPlot {
    ratio: Curve,
    gamma_atom: f64,
    dark_lo_deg: Option<f64>,
    dark_hi_deg: Option<f64>,
}

#[derive(Serialize)]
struct TracePlot {
    /// Time after arrival, in ns.
    curve: Curve,
    gamma: f64,
}

fn params(
    ea_ev: f64,
    a_angstrom: f64,
    mu_e_angstrom: f64,
    theta_deg: f64,
) -> Result<LatticeParams, String> {
    LatticeParams::new(ea_ev, a_angstrom, mu_e_angstrom, theta_deg.to_radians())
        .map_err(|e| e.to_string())
}

fn parse_mode(mode: &str) -> Result<EvalMode, String> {
    mode.parse()
}

fn grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>, String> {
    if !(2..=MAX_STEPS).contains(&steps) {
        return Err(format!("steps must lie in 2..={MAX_STEPS}"));
    }
    let dx = (hi - lo) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            if i == steps - 1 {
                hi
            } else {
                lo + i as f64 * dx
            }
        })
        .collect())
}

fn respond<T: Serialize>(result: Result<T, String>) -> String {
    match result {
        Ok(v) => serde_json::to_string(&v).unwrap_or_else(|e| error_json(&e.to_string())),
        Err(e) => error_json(&e),
    }
}

fn error_json(msg: &str) -> String {
    serde_json::json!({ "error": msg }).to_string()
}

/// Band energy over the Brillouin zone, with the photon line for reference.
#[wasm_bindgen]
pub fn dispersion_curve(
    ea_ev: f64,
    a_angstrom: f64,
    mu_e_angstrom: f64,
    theta_deg: f64,
    steps: usize,
) -> String {
    respond((|| {
        let p = params(ea_ev, a_angstrom, mu_e_angstrom, theta_deg)?;
        let x = grid(-PI, PI, steps)?;
        let y = x
            .iter()
            .map(|&ka| {
                dispersion(&p, ka)
                    .map(|m| m.energy)
                    .map_err(|e| e.to_string())
            })
            .collect::<Result<Vec<_>, _>>()?;
        let light_line = x
            .iter()
            .map(|ka| CODATA_2018.hbar_c * ka.abs() / p.a())
            .collect();
        let (band_min_ev, band_max_ev) = band_edges(&p);
        Ok(DispersionPlot {
            curve: Curve { x, y },
            band_min_ev,
            band_max_ev,
            light_line,
        })
    })())
}

/// Γ_k/Γ_at against ka ∈ (0, π] at fixed θ.
#[wasm_bindgen]
pub fn rate_vs_ka(
    ea_ev: f64,
    a_angstrom: f64,
    mu_e_angstrom: f64,
    theta_deg: f64,
    mode: &str,
    steps: usize,
) -> String {
    respond((|| {
        let p = params(ea_ev, a_angstrom, mu_e_angstrom, theta_deg)?;
        let mode = parse_mode(mode)?;
        let x = grid(0.001, PI, steps)?;
        let y = x
            .iter()
            .map(|&ka| {
                gamma_exciton(&p, ka, mode)
                    .map(|d| d.ratio)
                    .map_err(|e| e.to_string())
            })
            .collect::<Result<Vec<_>, _>>()?;
        let c = critical_ka(&p);
        Ok(KaPlot {
            ratio: Curve { x, y },
            gamma_atom: gamma_atom(&p),
            ka_c: c.ka_c.ok(),
            no_critical_point: c.ka_c.err().map(|r| r.to_string()),
        })
    })())
}

/// Γ_k/Γ_at against θ ∈ [0°, 180°] at fixed ka, with the dark window.
#[wasm_bindgen]
pub fn rate_vs_theta(
    ea_ev: f64,
    a_angstrom: f64,
    mu_e_angstrom: f64,
    ka: f64,
    mode: &str,
    steps: usize,
) -> String {
    respond((|| {
        let p = params(ea_ev, a_angstrom, mu_e_angstrom, 0.0)?;
        let mode = parse_mode(mode)?;
        let x = grid(0.0, 180.0, steps)?;
        let mut y = Vec::with_capacity(x.len());
        for &deg in &x {
            let q = p.with_theta_deg(deg).map_err(|e| e.to_string())?;
            y.push(
                gamma_exciton(&q, ka, mode)
                    .map_err(|e| e.to_string())?
                    .ratio,
            );
        }
        let window = if ka == 0.0 {
            None
        } else {
            dark_window(&p, ka).map_err(|e| e.to_string())?
        };
        Ok(ThetaPlot {
            ratio: Curve { x, y },
            gamma_atom: gamma_atom(&p),
            dark_lo_deg: window.map(|w| w.lower_edge.to_degrees()),
            dark_hi_deg: window.map(|w| w.upper_edge.to_degrees()),
        })
    })())
}

/// Far-field intensity, normalised to its value at arrival, for `span_ns`
/// after the signal reaches distance ρ.
#[wasm_bindgen]
pub fn intensity_decay(
    ea_ev: f64,
    a_angstrom: f64,
    mu_e_angstrom: f64,
    theta_deg: f64,
    ka: f64,
    span_ns: f64,
    steps: usize,
) -> String {
    respond((|| {
        let p = params(ea_ev, a_angstrom, mu_e_angstrom, theta_deg)?;
        if !(span_ns > 0.0 && span_ns.is_finite()) {
            return Err("span must be positive".to_string());
        }
        let state = ExcitonState::coherent(1.0, ka, 1000).map_err(|e| e.to_string())?;
        let rho = 1e7;
        let arrival = rho * 1e-10 / CODATA_2018.c_si;
        let x = grid(0.0, span_ns, steps)?;
        let t: Vec<f64> = x.iter().map(|ns| arrival + ns * 1e-9).collect();
        let trace = intensity_trace(&p, &state, rho, 0.0, &t).map_err(|e| e.to_string())?;
        let first = trace.samples[0].1;
        let y = trace
            .samples
            .iter()
            .map(|(_, v)| if first > 0.0 { v / first } else { 0.0 })
            .collect();
        Ok(TracePlot {
            curve: Curve { x, y },
            gamma: trace.gamma,
        })
    })())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn dispersion_has_band_and_light_line() {
        let v = parse(&dispersion_curve(1.0, 1000.0, 1.0, 0.0, 101));
        assert_eq!(v["curve"]["x"].as_array().unwrap().len(), 101);
        let min = v["band_min_ev"].as_f64().unwrap();
        assert!((min - (1.0 - 5.75985819e-8)).abs() < 1e-15);
        assert!(v["light_line"][50].as_f64().unwrap() < 1e-12);
    }

    #[test]
    fn ka_plot_carries_critical_point() {
        let v = parse(&rate_vs_ka(1.0, 1000.0, 1.0, 0.0, "formula", 50));
        assert!((v["ka_c"].as_f64().unwrap() - 0.506773046405).abs() < 1e-9);
        assert!(v["no_critical_point"].is_null());
        let v = parse(&rate_vs_ka(1.0, 1000.0, 1.0, 70.0, "formula", 50));
        assert_eq!(v["no_critical_point"], "theta beyond magic angle");
    }

    #[test]
    fn theta_plot_carries_dark_window() {
        let v = parse(&rate_vs_theta(1.0, 1000.0, 1.0, 1.0, "formula", 181));
        assert!((v["dark_lo_deg"].as_f64().unwrap() - 47.3999968).abs() < 1e-5);
        assert_eq!(v["ratio"]["y"][0].as_f64().unwrap(), 0.0);
        let v = parse(&rate_vs_theta(1.0, 1000.0, 1.0, 0.0, "lightcone", 181));
        assert!(v["dark_lo_deg"].is_null());
    }

    #[test]
    fn intensity_decays_at_gamma() {
        let v = parse(&intensity_decay(1.0, 1000.0, 1.0, 0.0, 0.01, 100.0, 11));
        let gamma = v["gamma"].as_f64().unwrap();
        let last = v["curve"]["y"][10].as_f64().unwrap();
        assert!((last - (-gamma * 100e-9).exp()).abs() < 1e-12);
    }

    #[test]
    fn bad_inputs_report_errors() {
        assert!(parse(&dispersion_curve(1.0, -1.0, 1.0, 0.0, 10))["error"].is_string());
        assert!(parse(&rate_vs_ka(1.0, 1000.0, 1.0, 0.0, "exact", 10))["error"].is_string());
        assert!(parse(&rate_vs_theta(1.0, 1000.0, 1.0, 0.5, "formula", 1))["error"].is_string());
        assert!(parse(&intensity_decay(1.0, 1000.0, 1.0, 0.0, 0.01, 0.0, 10))["error"].is_string());
    }
}
