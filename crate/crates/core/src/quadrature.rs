//! Globally adaptive 7/15-point Gauss–Kronrod quadrature.
//!
//! The panel with the largest error estimate is bisected until the summed
//! estimate meets `max(abs_tol, rel_tol·|I|)` or the subdivision budget runs
//! out.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// Kronrod abscissae on [0, 1]; odd indices are the 7-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_3,
    0.949_107_912_342_758_524_526_189_684_047_9,
    0.864_864_423_359_769_072_789_712_788_641_0,
    0.741_531_185_599_394_439_863_864_773_280_8,
    0.586_087_235_467_691_130_294_144_845_693_0,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_2,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_5,
    0.140_653_259_715_525_918_745_189_590_510_2,
    0.169_004_726_639_267_902_826_583_426_598_6,
    0.190_350_578_064_785_409_913_256_402_421_0,
    0.204_432_940_075_298_892_414_161_999_234_6,
    0.209_482_141_084_727_828_012_999_174_891_7,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_1,
    0.279_705_391_489_276_667_901_467_771_423_8,
    0.381_830_050_505_118_944_950_369_775_489_0,
    0.417_959_183_673_469_387_755_102_040_816_3,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod_panel(f: &impl Fn(f64) -> f64, lo: f64, hi: f64) -> Panel {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let f_center = f(center);
    let mut kronrod = WGK[7] * f_center;
    let mut gauss = WG[3] * f_center;
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Panel {
        lo,
        hi,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrates `f` over `[lo, hi]`.
///
/// `max_subdivisions` counts bisections; on exhaustion the best estimate is
/// returned inside [`Error::Quadrature`].
pub fn integrate(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_subdivisions: usize,
) -> Result<Integral> {
    let first = kronrod_panel(&f, lo, hi);
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::from([first]);
    let mut subdivisions = 0;
    let converged = |value: f64, error: f64| error <= abs_tol.max(rel_tol * value.abs());

    while !converged(value, error) {
        if subdivisions >= max_subdivisions || !error.is_finite() {
            return Err(Error::Quadrature {
                value,
                error_estimate: error,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.lo + worst.hi);
        let left = kronrod_panel(&f, worst.lo, mid);
        let right = kronrod_panel(&f, mid, worst.hi);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
        // the running sums drift; resum once the estimate looks converged
        if converged(value, error) {
            value = heap.iter().map(|p| p.value).sum();
            error = heap.iter().map(|p| p.error).sum();
        }
    }
    Ok(Integral {
        value,
        error_estimate: error,
        subdivisions,
    })
}
