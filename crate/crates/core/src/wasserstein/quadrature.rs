//! Globally adaptive Gauss-Kronrod (7/15) quadrature on a finite interval.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// Kronrod abscissae on [-1, 1] (non-negative half); odd positions are the
// Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrates `f` over `[breaks[0], breaks[last]]`, starting from the
/// segments delimited by `breaks` (sorted, at least two entries) and
/// bisecting the worst segment until the summed error estimate is at most
/// `tol` or `max_segments` is reached.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    tol: f64,
    max_segments: usize,
) -> Result<f64> {
    debug_assert!(breaks.len() >= 2);
    let mut heap: BinaryHeap<Segment> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| gauss_kronrod(&f, w[0], w[1]))
        .collect();
    let budget = max_segments.max(heap.len());
    loop {
        let (value, error) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
        if error <= tol {
            return Ok(value);
        }
        let worst = match heap.pop() {
            Some(s) => s,
            None => return Ok(0.0),
        };
        let mid = 0.5 * (worst.a + worst.b);
        if heap.len() + 2 > budget || mid <= worst.a || mid >= worst.b {
            return Err(Error::Quadrature {
                value,
                estimated_error: error,
                tol,
                intervals: heap.len() + 1,
            });
        }
        heap.push(gauss_kronrod(&f, worst.a, mid));
        heap.push(gauss_kronrod(&f, mid, worst.b));
    }
}
