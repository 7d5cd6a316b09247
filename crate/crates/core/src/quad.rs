//! Globally adaptive Gauss-Kronrod (10/21 point) quadrature on finite
//! intervals, with QUADPACK-style error estimates.
//!
//! Semi-infinite integrals are reduced to finite ones by the callers through
//! [`exp_tail_cutoff`], which places the upper limit where an analytic bound on
//! an exponentially decaying integrand leaves less than the requested tail.

// nodes and weights are tabulated to more digits than f64 holds
#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_223_048,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub abs_err: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
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
        self.err.total_cmp(&other.err)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut e = err.abs();
    if res_asc != 0.0 && e != 0.0 {
        let scale = (200.0 * e / res_asc).powf(1.5);
        e = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > e {
            e = min_err;
        }
    }
    e
}

/// Single 21-point Kronrod rule with embedded 10-point Gauss error estimate.
fn qk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let mut eval = |x: f64| -> Result<f64> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { at: x })
        }
    };

    let f_center = eval(center)?;
    let mut res_k = f_center * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = (f_center * WGK[10]).abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let scale = half.abs();
    let err = rescale_error((res_k - res_g) * half, res_abs * scale, res_asc * scale);
    Ok(Segment {
        a,
        b,
        value: res_k * half,
        err,
    })
}

/// Integrate `f` over `[a, b]` to absolute tolerance `abs_tol`.
///
/// `breakpoints` inside `(a, b)` seed the initial partition; points outside
/// the open interval are ignored. Endpoints are never evaluated, so
/// integrable endpoint singularities are allowed.
pub fn integrate<F>(
    mut f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    abs_tol: f64,
    max_subdivisions: usize,
) -> Result<Estimate>
where
    F: FnMut(f64) -> f64,
{
    if !(abs_tol > 0.0) {
        return Err(Error::invalid("abs_tol", "must be positive"));
    }
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            abs_err: 0.0,
            evaluations: 0,
            subdivisions: 0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };

    let mut edges = vec![lo];
    let mut inner: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&p| p > lo && p < hi)
        .collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    edges.extend(inner);
    edges.push(hi);

    let mut heap = BinaryHeap::new();
    // segments that can no longer be split (width at machine resolution)
    let mut frozen_value = 0.0;
    let mut frozen_err = 0.0;
    let mut evaluations = 0;
    for w in edges.windows(2) {
        heap.push(qk21(&mut f, w[0], w[1])?);
        evaluations += 21;
    }

    let mut subdivisions = heap.len();
    loop {
        let total_err: f64 = frozen_err + heap.iter().map(|s| s.err).sum::<f64>();
        if total_err <= abs_tol {
            break;
        }
        let Some(worst) = heap.pop() else {
            return Err(Error::NonConvergence {
                achieved: total_err,
                requested: abs_tol,
                subdivisions,
            });
        };
        let mid = 0.5 * (worst.a + worst.b);
        let resolvable = (worst.b - worst.a) > 1e3 * f64::EPSILON * worst.a.abs().max(worst.b.abs())
            && mid > worst.a
            && mid < worst.b;
        if !resolvable {
            frozen_value += worst.value;
            frozen_err += worst.err;
            continue;
        }
        if subdivisions >= max_subdivisions {
            return Err(Error::NonConvergence {
                achieved: total_err,
                requested: abs_tol,
                subdivisions,
            });
        }
        heap.push(qk21(&mut f, worst.a, mid)?);
        heap.push(qk21(&mut f, mid, worst.b)?);
        evaluations += 42;
        subdivisions += 1;
    }

    let value = frozen_value + heap.iter().map(|s| s.value).sum::<f64>();
    let abs_err = frozen_err + heap.iter().map(|s| s.err).sum::<f64>();
    Ok(Estimate {
        value: sign * value,
        abs_err,
        evaluations,
        subdivisions,
    })
}

/// Upper limit `L` such that `scale * (L + 1 + shift) * exp(-L) <= target`.
///
/// This bounds the tail `∫_L^∞ scale * (y + shift) e^{-y} dy`. The returned
/// value is at least `floor`.
pub fn exp_tail_cutoff(scale: f64, shift: f64, target: f64, floor: f64) -> f64 {
    let mut l = floor.max(1.0);
    for _ in 0..64 {
        let next = (scale * (l + 1.0 + shift) / target).ln().max(floor);
        if (next - l).abs() < 1e-9 {
            return next;
        }
        l = next;
    }
    l
}
