//! Globally adaptive 7/15-point Gauss–Kronrod quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! error meets `max(abs_tol, rel_tol * |value|)` or the panel budget runs out.
//! Error estimates follow the QUADPACK rescaling.

use alloc::vec::Vec;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
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

/// Integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = crate::math::powf(200.0 * scaled / res_asc, 1.5);
        scaled = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> Panel {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let scale = half.abs();
    let error = rescale_error((res_k - res_g) * half, res_abs * scale, res_asc * scale);
    Panel {
        lo,
        hi,
        value: res_k * half,
        error,
    }
}

/// Adaptive quadrature settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_panels: 4000,
        }
    }
}

impl Quadrature {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    /// Integrate `f` over `[lo, hi]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, f: F, lo: f64, hi: f64) -> Result<Estimate> {
        self.integrate_panels(f, &[lo, hi])
    }

    /// Integrate over consecutive panels `[b0, b1], [b1, b2], ...`, refining adaptively.
    pub fn integrate_panels<F: FnMut(f64) -> f64>(
        &self,
        mut f: F,
        breakpoints: &[f64],
    ) -> Result<Estimate> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidGrid("quadrature needs at least one panel"));
        }
        let mut panels: Vec<Panel> = breakpoints
            .windows(2)
            .map(|w| kronrod(&mut f, w[0], w[1]))
            .collect();
        loop {
            // Fixed-order summation keeps results reproducible.
            let value: f64 = panels.iter().map(|p| p.value).sum();
            let error: f64 = panels.iter().map(|p| p.error).sum();
            if !value.is_finite() || !error.is_finite() {
                return Err(Error::QuadratureFailure {
                    estimate: value,
                    error,
                });
            }
            if error <= self.abs_tol.max(self.rel_tol * value.abs()) {
                return Ok(Estimate { value, error });
            }
            if panels.len() >= self.max_panels {
                return Err(Error::QuadratureFailure {
                    estimate: value,
                    error,
                });
            }
            let (worst, _) =
                panels
                    .iter()
                    .enumerate()
                    .fold((0, f64::NEG_INFINITY), |acc, (i, p)| {
                        if p.error > acc.1 {
                            (i, p.error)
                        } else {
                            acc
                        }
                    });
            let p = panels[worst];
            let mid = 0.5 * (p.lo + p.hi);
            if !(mid > p.lo && mid < p.hi) {
                return Err(Error::QuadratureFailure {
                    estimate: value,
                    error,
                });
            }
            panels[worst] = kronrod(&mut f, p.lo, mid);
            panels.insert(worst + 1, kronrod(&mut f, mid, p.hi));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math;

    #[test]
    fn polynomial_is_exact() {
        let q = Quadrature::default();
        let est = q.integrate(|x| 3.0 * x * x + 1.0, 0.0, 2.0).unwrap();
        assert!((est.value - 10.0).abs() < 1e-13);
    }

    #[test]
    fn smooth_transcendental() {
        let q = Quadrature::default();
        let est = q.integrate(math::exp, 0.0, 1.0).unwrap();
        assert!((est.value - (core::f64::consts::E - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn inverse_sqrt_endpoint() {
        let q = Quadrature::new(1e-10, 1e-10);
        let est = q.integrate(|x| 1.0 / math::sqrt(x), 0.0, 1.0).unwrap();
        assert!((est.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn panels_match_single_interval() {
        let q = Quadrature::default();
        let one = q.integrate(math::sin, 0.0, 3.0).unwrap();
        let many = q
            .integrate_panels(math::sin, &[0.0, 0.5, 1.7, 3.0])
            .unwrap();
        assert!((one.value - many.value).abs() < 1e-14);
    }

    #[test]
    fn nonintegrable_fails() {
        let q = Quadrature::default();
        assert!(matches!(
            q.integrate(|x| 1.0 / x, 0.0, 1.0),
            Err(Error::QuadratureFailure { .. })
        ));
    }
}
