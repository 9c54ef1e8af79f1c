//! Collective radiative decay of Frenkel-like excitons in a one-dimensional
//! lattice of two-level atoms.
//!
//! A local excitation hops between sites through resonant dipole-dipole
//! coupling and forms band states labelled by a wave number k. Translational
//! symmetry pins the axial momentum of any emitted photon to k, so the decay
//! rate depends strongly on k and on the dipole angle θ: some excitons are
//! superradiant, others cannot radiate at all.
//!
//! Modules:
//! - [`units`]: constants and unit conversions (eV, Å, s internally)
//! - [`lattice`]: coupling, dispersion, band edges, k-grid
//! - [`decay`]: closed-form damping rate, critical wave number, dark windows
//! - [`golden_rule`]: quadrature cross-check of the closed form
//! - [`far_field`]: retarded far field and emitted intensity
//! - [`scan`]: sweeps and CSV/JSON tables

// Negated comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod decay;
pub mod error;
pub mod far_field;
pub mod golden_rule;
pub mod lattice;
pub mod quadrature;
pub mod roots;
pub mod scan;
pub mod units;

pub use decay::{
    critical_ka, dark_window, gamma_atom, gamma_exciton, CriticalK, DarkWindow, DecayResult,
    EvalMode, NoCriticalPoint, Regime,
};
pub use error::{Error, Result};
pub use far_field::{
    field_amplitude, intensity, intensity_trace, ExcitonState, FieldPoint, IntensityTrace,
};
pub use golden_rule::{
    default_validation_grid, gamma_golden_rule, validate_grid, QuadratureSpec, ValidationReport,
};
pub use lattice::{allowed_k, band_edges, dipole_coupling, dispersion, ExcitonMode, LatticeParams};
pub use scan::{figure_bundle, scan, ScanAxis, ScanSpec, ScanTable};
pub use units::{PhysicalConstants, CODATA_2018};
