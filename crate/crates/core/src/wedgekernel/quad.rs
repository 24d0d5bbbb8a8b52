//! Adaptive Gauss–Kronrod (7/15) and tanh-sinh quadrature for real and
//! complex integrands.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

/// Values that can be integrated: real or complex.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Accuracy targets: converged when `error <= max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs: f64,
    pub rel: f64,
    /// Subinterval budget (Gauss–Kronrod) or level budget (tanh-sinh).
    pub max_intervals: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs: 1e-10,
            rel: 1e-9,
            max_intervals: 4000,
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self {
            abs,
            rel,
            ..Self::default()
        }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

/// Integral estimate with its error estimate and evaluation count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
}

/// Kronrod nodes on `[0, 1]`; odd indices are the Gauss nodes.
#[allow(clippy::excessive_precision)]
pub(crate) const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
/// Kronrod weights matching `XGK`.
#[allow(clippy::excessive_precision)]
pub(crate) const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
/// Gauss weights for `XGK[1], XGK[3], XGK[5], XGK[7]`.
#[allow(clippy::excessive_precision)]
pub(crate) const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One 15-point Kronrod panel with its embedded 7-point Gauss estimate.
pub fn gauss_kronrod_panel<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kron = kron + s * WGK[i];
        if i % 2 == 1 {
            gauss = gauss + s * WG[i / 2];
        }
    }
    let kron = kron * h;
    let gauss = gauss * h;
    let err = (kron - gauss).magnitude();
    (kron, err)
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive Gauss–Kronrod quadrature on a finite interval: the
/// panel with the largest error is bisected until the total error meets
/// the target or the panel budget is spent.
pub fn integrate<T: QuadValue, F: Fn(f64) -> T>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult<T>> {
    if a == b {
        return Ok(QuadResult {
            value: T::zero(),
            error: 0.0,
            evaluations: 0,
        });
    }
    let (value, error) = gauss_kronrod_panel(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    let mut evaluations = 15;
    while total_err > spec.target(total.magnitude()) {
        if !total_err.is_finite() || !total.magnitude().is_finite() {
            return Err(Error::QuadratureFailure {
                estimate: total.magnitude(),
                error: total_err,
            });
        }
        if heap.len() >= spec.max_intervals {
            return Err(Error::QuadratureFailure {
                estimate: total.magnitude(),
                error: total_err,
            });
        }
        let worst = heap.pop().expect("heap is nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::QuadratureFailure {
                estimate: total.magnitude(),
                error: total_err,
            });
        }
        let (v1, e1) = gauss_kronrod_panel(&f, worst.a, mid);
        let (v2, e2) = gauss_kronrod_panel(&f, mid, worst.b);
        evaluations += 30;
        total = total - worst.value + v1 + v2;
        total_err = total_err - worst.error + e1 + e2;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
        // refresh the running sums to keep cancellation from accumulating
        if heap.len() % 64 == 0 {
            total = heap.iter().fold(T::zero(), |s, p| s + p.value);
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
    Ok(QuadResult {
        value: total,
        error: total_err,
        evaluations,
    })
}

/// Largest abscissa parameter of the tanh-sinh rule.
const TS_RANGE: f64 = 5.0;

/// Tanh-sinh (double exponential) quadrature on `[a, b]` for integrands
/// with endpoint singularities. The integrand receives `(x, x - a, b - x)`
/// with the distances computed without cancellation.
pub fn tanh_sinh<T: QuadValue, F: Fn(f64, f64, f64) -> T>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult<T>> {
    let h = 0.5 * (b - a);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let node = |s: f64| -> Option<T> {
        let u = half_pi * s.sinh();
        let ch = u.cosh();
        let near = h * (-u.abs()).exp() / ch;
        if near <= 0.0 || !ch.is_finite() {
            return None;
        }
        let far = 2.0 * h - near;
        let (dl, dr) = if s >= 0.0 { (far, near) } else { (near, far) };
        let x = if s >= 0.0 { b - near } else { a + near };
        let w = h * half_pi * s.cosh() / (ch * ch);
        Some(f(x, dl, dr) * w)
    };
    let mut step = 1.0;
    let mut sum = T::zero();
    let mut evaluations = 0usize;
    let n0 = (TS_RANGE / step) as i64;
    for j in -n0..=n0 {
        if let Some(v) = node(j as f64 * step) {
            sum = sum + v;
        }
        evaluations += 1;
    }
    let mut estimate = sum * step;
    let max_level = spec.max_intervals.clamp(4, 14);
    for level in 1..=max_level {
        step *= 0.5;
        let n = (TS_RANGE / step) as i64;
        let mut j = -n + if n % 2 == 0 { 1 } else { 0 };
        while j <= n {
            if let Some(v) = node(j as f64 * step) {
                sum = sum + v;
            }
            evaluations += 1;
            j += 2;
        }
        let next = sum * step;
        let error = (next - estimate).magnitude();
        estimate = next;
        if level >= 3 && error <= spec.target(estimate.magnitude()) {
            return Ok(QuadResult {
                value: estimate,
                error,
                evaluations,
            });
        }
        if !estimate.magnitude().is_finite() {
            break;
        }
    }
    Err(Error::QuadratureFailure {
        estimate: estimate.magnitude(),
        error: f64::NAN,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_weights_sum_to_two() {
        let s: f64 = 2.0 * WGK[..7].iter().sum::<f64>() + WGK[7];
        assert!((s - 2.0).abs() < 1e-15);
        let g: f64 = 2.0 * WG[..3].iter().sum::<f64>() + WG[3];
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn panel_exact_for_low_degree() {
        for deg in 0..=22 {
            let (k, _) = gauss_kronrod_panel(&|x: f64| x.powi(deg), -1.0, 1.0);
            let exact = if deg % 2 == 0 {
                2.0 / (deg as f64 + 1.0)
            } else {
                0.0
            };
            assert!((k - exact).abs() < 1e-14, "Kronrod degree {deg}");
        }
        for deg in 0..=13 {
            // the Gauss part is exact to degree 13
            let g = {
                let f = |x: f64| x.powi(deg);
                let mut s = f(0.0) * WG[3];
                for i in 0..3 {
                    let x = XGK[2 * i + 1];
                    s += (f(x) + f(-x)) * WG[i];
                }
                s
            };
            let exact = if deg % 2 == 0 {
                2.0 / (deg as f64 + 1.0)
            } else {
                0.0
            };
            assert!((g - exact).abs() < 1e-14, "Gauss degree {deg}");
        }
    }

    #[test]
    fn adaptive_handles_peaks() {
        let spec = QuadratureSpec::new(1e-13, 1e-12);
        let r = integrate(|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, &spec).unwrap();
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!((r.value - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn adaptive_complex() {
        let spec = QuadratureSpec::new(1e-13, 1e-12);
        let r = integrate(|x: f64| Complex64::new(0.0, 3.0 * x).exp(), 0.0, 1.0, &spec).unwrap();
        let exact = (Complex64::new(0.0, 3.0).exp() - 1.0) / Complex64::new(0.0, 3.0);
        assert!((r.value - exact).norm() < 1e-12);
    }

    #[test]
    fn budget_exhaustion_fails() {
        let spec = QuadratureSpec {
            abs: 1e-15,
            rel: 1e-15,
            max_intervals: 3,
        };
        let r = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &spec);
        assert!(matches!(r, Err(Error::QuadratureFailure { .. })));
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        let spec = QuadratureSpec::new(1e-13, 1e-12);
        // int_0^1 x^(-1/2) (1-x)^(-1/2) = pi, using the supplied distances
        let r = tanh_sinh(
            |_, dl: f64, dr: f64| 1.0 / (dl * dr).sqrt(),
            0.0,
            1.0,
            &spec,
        )
        .unwrap();
        assert!((r.value - std::f64::consts::PI).abs() < 1e-11);
        let r = tanh_sinh(|x: f64, _, _| x.ln(), 0.0, 1.0, &spec).unwrap();
        assert!((r.value + 1.0).abs() < 1e-12);
    }
}
