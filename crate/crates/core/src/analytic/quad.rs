//! Adaptive Gauss–Kronrod (10/21-point) quadrature with a global error
//! budget. The error of each panel is bounded by `|K21 − G10|`, floored by a
//! roundoff term proportional to `∫|f|` over the panel.

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

use super::EvaluatedBound;
use crate::error::{Error, Result};
use crate::fmath::{KahanSum, EPS};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 0.0,
            rel_tol: 1e-13,
            max_panels: 4000,
        }
    }
}

impl QuadConfig {
    pub fn relative(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

#[allow(clippy::excessive_precision)]
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

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
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
        self.err.total_cmp(&other.err)
    }
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    let mut resabs = (fc * WGK[10]).abs();
    for j in 0..10 {
        let dx = half * XGK[j];
        let (f1, f2) = (f(center - dx), f(center + dx));
        kronrod += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    if !value.is_finite() {
        return Err(Error::Precision(alloc::format!(
            "integrand not finite on [{a}, {b}]"
        )));
    }
    let diff = ((kronrod - gauss) * half).abs();
    let roundoff = 50.0 * EPS * resabs * half.abs();
    Ok(Panel {
        a,
        b,
        value,
        err: diff.max(roundoff),
    })
}

/// `∫_a^b f` with a bound on the absolute error.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: QuadConfig) -> Result<EvaluatedBound> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(alloc::format!("integration bounds must be finite: [{a}, {b}]")));
    }
    if a == b {
        return Ok(EvaluatedBound::exact(0.0));
    }
    if a > b {
        return integrate(f, b, a, cfg).map(|r| -r);
    }
    let mut heap = BinaryHeap::new();
    heap.push(gk21(&f, a, b)?);
    let mut total = heap.peek().map_or(0.0, |p| p.value);
    let mut err = heap.peek().map_or(0.0, |p| p.err);
    loop {
        let target = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if err <= target {
            break;
        }
        if heap.len() >= cfg.max_panels {
            return Err(Error::Precision(alloc::format!(
                "quadrature on [{a}, {b}] stalled at error {err:e} (target {target:e})"
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::Precision(alloc::format!(
                "quadrature panel near {mid} cannot be split further"
            )));
        }
        let left = gk21(&f, worst.a, mid)?;
        let right = gk21(&f, mid, worst.b)?;
        total += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
    }
    let mut sum = KahanSum::default();
    let mut err_sum = 0.0;
    for p in heap.iter() {
        sum.add(p.value);
        err_sum += p.err;
    }
    let value = sum.value();
    Ok(EvaluatedBound::new(value, err_sum * (1.0 + 1e-6) + 4.0 * EPS * sum.abs_total()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fmath::{exp, ln};

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| 3.0 * x * x, 0.0, 2.0, QuadConfig::default()).unwrap();
        assert!((r.value - 8.0).abs() < 1e-14);
    }

    #[test]
    fn exponential_within_bound() {
        let r = integrate(exp, 0.0, 10.0, QuadConfig::relative(1e-13)).unwrap();
        let truth = exp(10.0) - 1.0;
        assert!(r.contains(truth), "{r:?} vs {truth}");
        assert!(r.rel_err() <= 1e-12);
    }

    #[test]
    fn reversed_and_empty() {
        let r = integrate(|x| 1.0 / x, 3.0, 1.0, QuadConfig::default()).unwrap();
        assert!((r.value + ln(3.0)).abs() < 1e-13);
        assert_eq!(integrate(|x| x, 2.0, 2.0, QuadConfig::default()).unwrap().value, 0.0);
    }

    #[test]
    fn singular_integrand_fails_loudly() {
        let cfg = QuadConfig {
            max_panels: 50,
            ..QuadConfig::default()
        };
        assert!(integrate(|x| 1.0 / libm::sqrt(x), 0.0, 1.0, cfg).is_err());
    }
}
