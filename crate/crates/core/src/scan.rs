//! Parameter sweeps over ka or θ and their CSV / JSON tables.
//!
//! Angles in a [`ScanSpec`] are in degrees. Rows carry both the absolute
//! rate and the ratio to the free-atom rate.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::decay::{gamma_atom, gamma_exciton, EvalMode, Regime};
use crate::error::{Error, Result};
use crate::golden_rule::linspace;
use crate::lattice::LatticeParams;

pub const SCHEMA: &str = "scan/1";

/// Version string written into every table.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Points per curve in [`figure_bundle`].
pub const FIGURE_STEPS: usize = 500;

/// First ka of the wave-number sweeps in [`figure_bundle`].
pub const KA_SCAN_START: f64 = 0.001;

const CSV_HEADER: &str = "swept_axis,swept_value,gamma_per_s,gamma_ratio,regime";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanAxis {
    /// Sweep the dimensionless wave number; the fixed value is θ in degrees.
    Ka,
    /// Sweep θ in degrees; the fixed value is ka.
    Theta,
}

impl fmt::Display for ScanAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScanAxis::Ka => "ka",
            ScanAxis::Theta => "theta",
        })
    }
}

impl FromStr for ScanAxis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "ka" => Ok(ScanAxis::Ka),
            "theta" => Ok(ScanAxis::Theta),
            other => Err(format!("unknown axis `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub axis: ScanAxis,
    pub fixed_value: f64,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    pub mode: EvalMode,
    pub include_atom_reference: bool,
}

impl ScanSpec {
    /// θ-sweep in degrees at fixed `ka`.
    pub fn theta(ka: f64, lo_deg: f64, hi_deg: f64, steps: usize) -> Self {
        ScanSpec {
            axis: ScanAxis::Theta,
            fixed_value: ka,
            lo: lo_deg,
            hi: hi_deg,
            steps,
            mode: EvalMode::Formula,
            include_atom_reference: true,
        }
    }

    /// ka-sweep at fixed θ in degrees.
    pub fn ka(theta_deg: f64, lo: f64, hi: f64, steps: usize) -> Self {
        ScanSpec {
            axis: ScanAxis::Ka,
            fixed_value: theta_deg,
            lo,
            hi,
            steps,
            mode: EvalMode::Formula,
            include_atom_reference: true,
        }
    }

    pub fn with_mode(mut self, mode: EvalMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::domain(
                "steps",
                self.steps as f64,
                "a scan needs at least 2 steps",
            ));
        }
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(Error::domain("lo", self.lo, "range must satisfy lo < hi"));
        }
        if !self.fixed_value.is_finite() {
            return Err(Error::domain(
                "fixed_value",
                self.fixed_value,
                "must be finite",
            ));
        }
        let (name, limit_lo, limit_hi) = match self.axis {
            ScanAxis::Ka => ("ka range", -PI, PI),
            ScanAxis::Theta => ("theta range (deg)", 0.0, 180.0),
        };
        if self.lo < limit_lo {
            return Err(Error::domain(
                name,
                self.lo,
                "range leaves the allowed interval",
            ));
        }
        if self.hi > limit_hi {
            return Err(Error::domain(
                name,
                self.hi,
                "range leaves the allowed interval",
            ));
        }
        if self.axis == ScanAxis::Theta && self.fixed_value.abs() > PI {
            return Err(Error::domain(
                "ka",
                self.fixed_value,
                "wave number must lie in the first Brillouin zone [-pi, pi]",
            ));
        }
        Ok(())
    }

    /// The swept coordinate values, uniformly spaced with both ends included.
    pub fn grid(&self) -> Vec<f64> {
        linspace(self.lo, self.hi, self.steps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub swept_value: f64,
    /// s⁻¹.
    pub gamma: f64,
    pub ratio: f64,
    pub regime: Regime,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanMetadata {
    pub params: LatticeParams,
    pub spec: ScanSpec,
    pub version: String,
    /// Free-atom rate in s⁻¹, present when the spec asks for it.
    pub gamma_atom: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub metadata: ScanMetadata,
    pub rows: Vec<ScanRow>,
}

/// Evaluates the damping rate on the uniform grid of `spec`.
pub fn scan(params: &LatticeParams, spec: &ScanSpec) -> Result<ScanTable> {
    spec.validate()?;
    let rows = spec
        .grid()
        .into_iter()
        .enumerate()
        .map(|(i, x)| {
            evaluate(params, spec, x).map_err(|e| Error::ScanRow {
                row: i,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanTable {
        metadata: ScanMetadata {
            params: *params,
            spec: *spec,
            version: VERSION.to_string(),
            gamma_atom: spec.include_atom_reference.then(|| gamma_atom(params)),
        },
        rows,
    })
}

fn evaluate(params: &LatticeParams, spec: &ScanSpec, x: f64) -> Result<ScanRow> {
    let d = match spec.axis {
        ScanAxis::Ka => gamma_exciton(&params.with_theta_deg(spec.fixed_value)?, x, spec.mode)?,
        ScanAxis::Theta => gamma_exciton(&params.with_theta_deg(x)?, spec.fixed_value, spec.mode)?,
    };
    Ok(ScanRow {
        swept_value: x,
        gamma: d.gamma,
        ratio: d.ratio,
        regime: d.regime,
    })
}

/// Names of the tables produced by [`figure_bundle`], in output order.
pub const FIGURE_NAMES: [&str; 6] = ["fig3a", "fig3b", "fig4", "fig5a", "fig5b", "ka_pi"];

/// The six standard curves: rate vs ka at θ = 0° and 90°, and rate vs θ at
/// ka = 0.01, 0.5, 1 and π.
pub fn figure_bundle(params: &LatticeParams) -> Result<Vec<(&'static str, ScanTable)>> {
    let specs = [
        ScanSpec::ka(0.0, KA_SCAN_START, PI, FIGURE_STEPS),
        ScanSpec::ka(90.0, KA_SCAN_START, PI, FIGURE_STEPS),
        ScanSpec::theta(0.01, 0.0, 180.0, FIGURE_STEPS),
        ScanSpec::theta(0.5, 0.0, 180.0, FIGURE_STEPS),
        ScanSpec::theta(1.0, 0.0, 180.0, FIGURE_STEPS),
        ScanSpec::theta(PI, 0.0, 180.0, FIGURE_STEPS),
    ];
    FIGURE_NAMES
        .iter()
        .zip(specs.iter())
        .map(|(name, spec)| Ok((*name, scan(params, spec)?)))
        .collect()
}

fn fmt_value(x: f64) -> String {
    format!("{x:.8e}")
}

impl ScanTable {
    fn metadata_pairs(&self) -> Vec<(&'static str, String)> {
        let m = &self.metadata;
        let p = &m.params;
        let s = &m.spec;
        let mut pairs = vec![
            ("schema", SCHEMA.to_string()),
            ("version", m.version.clone()),
            ("e_a_ev", format!("{:?}", p.e_a())),
            ("a_angstrom", format!("{:?}", p.a())),
            ("mu_e_angstrom", format!("{:?}", p.mu())),
            ("theta_rad", format!("{:?}", p.theta())),
            ("neighbor_cutoff", p.neighbor_cutoff().to_string()),
            ("axis", s.axis.to_string()),
            ("fixed_value", format!("{:?}", s.fixed_value)),
            ("lo", format!("{:?}", s.lo)),
            ("hi", format!("{:?}", s.hi)),
            ("steps", s.steps.to_string()),
            ("mode", s.mode.to_string()),
            (
                "include_atom_reference",
                s.include_atom_reference.to_string(),
            ),
        ];
        if let Some(g) = m.gamma_atom {
            pairs.push(("gamma_atom_per_s", format!("{g:?}")));
        }
        pairs
    }

    /// CSV with a `# key=value` metadata block. Output is a pure function of
    /// the table.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.metadata_pairs() {
            let _ = writeln!(out, "# {k}={v}");
        }
        out.push_str(CSV_HEADER);
        out.push('\n');
        let axis = self.metadata.spec.axis;
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{axis},{},{},{},{}",
                fmt_value(r.swept_value),
                fmt_value(r.gamma),
                fmt_value(r.ratio),
                r.regime
            );
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<ScanTable> {
        let mut meta = BTreeMap::new();
        let mut lines = text.lines().peekable();
        while let Some(line) = lines.next_if(|l| l.starts_with('#')) {
            let body = line.trim_start_matches('#').trim();
            let (k, v) = body
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad metadata line `{line}`")))?;
            meta.insert(k.trim().to_string(), v.trim().to_string());
        }
        match lines.next() {
            Some(h) if h.trim() == CSV_HEADER => {}
            other => return Err(Error::Parse(format!("unexpected header {other:?}"))),
        }

        let get = |key: &str| {
            meta.get(key)
                .map(String::as_str)
                .ok_or_else(|| Error::Parse(format!("missing metadata `{key}`")))
        };
        let num = |key: &str| -> Result<f64> {
            get(key)?
                .parse()
                .map_err(|_| Error::Parse(format!("metadata `{key}` is not a number")))
        };
        if get("schema")? != SCHEMA {
            return Err(Error::Parse(format!(
                "unsupported schema `{}`",
                get("schema")?
            )));
        }
        let params = LatticeParams::new(
            num("e_a_ev")?,
            num("a_angstrom")?,
            num("mu_e_angstrom")?,
            num("theta_rad")?,
        )?
        .with_neighbor_cutoff(parse_field(get("neighbor_cutoff")?, "neighbor_cutoff")?)?;
        let spec = ScanSpec {
            axis: parse_field(get("axis")?, "axis")?,
            fixed_value: num("fixed_value")?,
            lo: num("lo")?,
            hi: num("hi")?,
            steps: parse_field(get("steps")?, "steps")?,
            mode: parse_field(get("mode")?, "mode")?,
            include_atom_reference: parse_field(
                get("include_atom_reference")?,
                "include_atom_reference",
            )?,
        };
        let gamma_atom = match meta.get("gamma_atom_per_s") {
            Some(_) => Some(num("gamma_atom_per_s")?),
            None => None,
        };

        let rows = lines
            .filter(|l| !l.trim().is_empty())
            .map(|line| {
                let cols: Vec<&str> = line.split(',').collect();
                if cols.len() != 5 {
                    return Err(Error::Parse(format!(
                        "row `{line}` has {} columns",
                        cols.len()
                    )));
                }
                Ok(ScanRow {
                    swept_value: parse_field(cols[1], "swept_value")?,
                    gamma: parse_field(cols[2], "gamma_per_s")?,
                    ratio: parse_field(cols[3], "gamma_ratio")?,
                    regime: parse_field(cols[4], "regime")?,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(ScanTable {
            metadata: ScanMetadata {
                params,
                spec,
                version: get("version")?.to_string(),
                gamma_atom,
            },
            rows,
        })
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            schema: &'static str,
            #[serde(flatten)]
            table: &'a ScanTable,
        }
        serde_json::to_string_pretty(&Doc {
            schema: SCHEMA,
            table: self,
        })
        .expect("scan table serializes")
    }

    pub fn from_json(text: &str) -> Result<ScanTable> {
        #[derive(Deserialize)]
        struct Doc {
            schema: String,
            #[serde(flatten)]
            table: ScanTable,
        }
        let doc: Doc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.schema != SCHEMA {
            return Err(Error::Parse(format!("unsupported schema `{}`", doc.schema)));
        }
        Ok(doc.table)
    }
}

fn parse_field<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("cannot parse {what} from `{s}`")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decay::{critical_ka, dark_window};

    fn defaults() -> LatticeParams {
        LatticeParams::default()
    }

    fn argmax(rows: &[ScanRow]) -> usize {
        (0..rows.len())
            .max_by(|&i, &j| rows[i].gamma.total_cmp(&rows[j].gamma))
            .unwrap()
    }

    fn argmin(rows: &[ScanRow]) -> usize {
        (0..rows.len())
            .min_by(|&i, &j| rows[i].gamma.total_cmp(&rows[j].gamma))
            .unwrap()
    }

    #[test]
    fn grid_is_uniform_and_increasing() {
        let spec = ScanSpec::ka(0.0, 0.001, PI, 500);
        let g = spec.grid();
        assert_eq!(g.len(), 500);
        assert_eq!(g[0], 0.001);
        assert_eq!(g[499], PI);
        let h = (PI - 0.001) / 499.0;
        for w in g.windows(2) {
            assert!(w[1] > w[0]);
            assert!((w[1] - w[0] - h).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_specs() {
        let bad = [
            ScanSpec::ka(0.0, 0.0, PI, 1),
            ScanSpec::ka(0.0, 1.0, 1.0, 10),
            ScanSpec::ka(0.0, -4.0, 1.0, 10),
            ScanSpec::ka(0.0, 0.0, 3.5, 10),
            ScanSpec::theta(0.1, -1.0, 90.0, 10),
            ScanSpec::theta(0.1, 0.0, 181.0, 10),
            ScanSpec::theta(4.0, 0.0, 180.0, 10),
            ScanSpec::ka(f64::NAN, 0.0, 1.0, 10),
        ];
        for spec in bad {
            assert!(scan(&defaults(), &spec).is_err(), "{spec:?}");
        }
    }

    #[test]
    fn rows_match_pointwise_evaluation() {
        let spec = ScanSpec::theta(0.7, 0.0, 180.0, 37).with_mode(EvalMode::Lightcone);
        let t = scan(&defaults(), &spec).unwrap();
        for r in &t.rows {
            let p = defaults().with_theta_deg(r.swept_value).unwrap();
            let d = gamma_exciton(&p, 0.7, EvalMode::Lightcone).unwrap();
            assert_eq!(r.gamma.to_bits(), d.gamma.to_bits());
            assert_eq!(r.ratio.to_bits(), d.ratio.to_bits());
        }
    }

    #[test]
    fn fig3a_shape() {
        let t = scan(&defaults(), &ScanSpec::ka(0.0, KA_SCAN_START, PI, 500)).unwrap();
        let ka_c = critical_ka(&defaults()).value().unwrap();
        for w in t.rows.windows(2) {
            if w[1].swept_value < ka_c {
                assert!(w[1].gamma < w[0].gamma);
            }
        }
        for r in t.rows.iter().filter(|r| r.swept_value >= 0.5068) {
            assert_eq!(r.gamma, 0.0);
            assert_eq!(r.regime, Regime::Dark);
        }
    }

    #[test]
    fn fig4_shape() {
        let t = scan(&defaults(), &ScanSpec::theta(0.01, 0.0, 180.0, 500)).unwrap();
        assert!(t.rows.iter().all(|r| r.ratio > 1.0));
        let min = &t.rows[argmin(&t.rows)];
        assert!((min.swept_value - 90.0).abs() <= 180.0 / 499.0);
    }

    #[test]
    fn fig5a_and_5b_shapes() {
        let t = scan(&defaults(), &ScanSpec::theta(0.5, 0.0, 180.0, 500)).unwrap();
        assert!(t.rows[0].ratio < 1.0);
        assert!((t.rows[argmax(&t.rows)].swept_value - 90.0).abs() <= 180.0 / 499.0);

        let t = scan(&defaults(), &ScanSpec::theta(1.0, 0.0, 180.0, 500)).unwrap();
        let edge = dark_window(&defaults(), 1.0)
            .unwrap()
            .unwrap()
            .lower_edge
            .to_degrees();
        for r in t.rows.iter().filter(|r| r.swept_value < edge) {
            assert_eq!(r.gamma, 0.0);
        }
        assert!((t.rows[argmax(&t.rows)].swept_value - 90.0).abs() <= 180.0 / 499.0);
    }

    #[test]
    fn degenerate_flat_scan() {
        let p = defaults().with_mu(0.0).unwrap();
        let t = scan(&p, &ScanSpec::ka(30.0, 0.1, 0.2, 2)).unwrap();
        assert_eq!(t.rows.len(), 2);
        assert_eq!(t.rows[0].gamma, 0.0);
        assert_eq!(t.rows[0].gamma, t.rows[1].gamma);
        assert_eq!(t.rows[0].ratio, t.rows[1].ratio);
        assert_eq!(t.rows[0].regime, Regime::Dark);
    }

    #[test]
    fn theta_scans_are_mirror_symmetric() {
        for ka in [0.01, 0.5, 1.0, PI] {
            let t = scan(&defaults(), &ScanSpec::theta(ka, 0.0, 180.0, 500)).unwrap();
            let n = t.rows.len();
            let scale = t.rows.iter().map(|r| r.gamma).fold(0.0, f64::max);
            for i in 0..n / 2 {
                let (a, b) = (t.rows[i].gamma, t.rows[n - 1 - i].gamma);
                // mirrored grid points differ by rounding of 180 − θ
                assert!(
                    (a - b).abs() <= 1e-13 * scale,
                    "ka {ka} row {i}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn bundle_contract() {
        let bundle = figure_bundle(&defaults()).unwrap();
        let names: Vec<_> = bundle.iter().map(|(n, _)| *n).collect();
        assert_eq!(names, FIGURE_NAMES);
        for (_, t) in &bundle {
            assert_eq!(t.rows.len(), FIGURE_STEPS);
            assert_eq!(t.metadata.spec.mode, EvalMode::Formula);
        }
        assert_eq!(bundle[5].1.metadata.spec.fixed_value, PI);
    }

    #[test]
    fn csv_layout() {
        let t = scan(&defaults(), &ScanSpec::ka(0.0, 0.1, 0.2, 3)).unwrap();
        let csv = t.to_csv();
        let data: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data[0], CSV_HEADER);
        assert_eq!(data.len(), 4);
        assert!(data[1].starts_with("ka,1.00000000e-1,"));
        assert!(data[1].ends_with(",superradiant"));
        assert!(csv.starts_with("# schema=scan/1\n"));
    }

    #[test]
    fn metadata_round_trips() {
        let p = LatticeParams::new(1.7, 812.5, 0.3, 0.123456789)
            .unwrap()
            .with_neighbor_cutoff(4)
            .unwrap();
        let spec = ScanSpec::theta(PI / 7.0, 12.5, 170.0, 11).with_mode(EvalMode::Lightcone);
        let t = scan(&p, &spec).unwrap();
        let back = ScanTable::from_csv(&t.to_csv()).unwrap();
        assert_eq!(back.metadata, t.metadata);
        assert_eq!(back.rows.len(), t.rows.len());
        for (a, b) in back.rows.iter().zip(&t.rows) {
            assert_eq!(a.regime, b.regime);
            assert!((a.gamma - b.gamma).abs() <= 1e-8 * b.gamma.abs());
        }
        let json = t.to_json();
        assert!(json.contains("\"schema\": \"scan/1\""));
        assert_eq!(ScanTable::from_json(&json).unwrap(), t);
    }

    #[test]
    fn malformed_tables_are_rejected() {
        assert!(ScanTable::from_csv("").is_err());
        assert!(ScanTable::from_csv(
            "# schema=scan/2\nswept_axis,swept_value,gamma_per_s,gamma_ratio,regime\n"
        )
        .is_err());
        let t = scan(&defaults(), &ScanSpec::ka(0.0, 0.1, 0.2, 2)).unwrap();
        let broken = t.to_csv().replace(",superradiant", ",glowing");
        assert!(ScanTable::from_csv(&broken).is_err());
        assert!(ScanTable::from_json("{\"schema\":\"scan/9\"}").is_err());
    }

    #[test]
    fn row_errors_carry_index() {
        // E_ex ≤ 0 with a tiny transition energy and a strong coupling
        let p = LatticeParams::new(1e-9, 1.0, 1.0, 0.0).unwrap();
        let err = scan(&p, &ScanSpec::ka(0.0, 0.0, 1.0, 3)).unwrap_err();
        assert!(matches!(err, Error::ScanRow { row: 0, .. }), "{err}");
    }
}
