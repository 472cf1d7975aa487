//! Globally adaptive 7/15-point Gauss–Kronrod quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate meets `max(abs_tol, rel_tol·|I|)`. User breakpoints seed the
//! initial partition so known features (the image lightcone, the diagonal of
//! a double integral) never sit inside a panel.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("no convergence after {subdivisions} subdivisions: value {value:e}, error estimate {error:e}")]
    NoConvergence { value: f64, error: f64, subdivisions: usize },
    #[error("integrand is not finite at x = {0}")]
    NonFinite(f64),
    #[error("invalid interval or breakpoints: {0}")]
    BadInterval(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_subdivisions: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs: 1e-300, rel: 1e-11, max_subdivisions: 2000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
    /// Tolerance met only after discounting the round-off floor of each panel.
    pub roundoff_limited: bool,
}

impl Integral {
    pub(crate) const ZERO: Integral = Integral { value: 0.0, error: 0.0, subdivisions: 0, roundoff_limited: false };
}

#[allow(clippy::excessive_precision)]
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

#[allow(clippy::excessive_precision)]
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

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    floor: f64,
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Panel, QuadratureError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(QuadratureError::NonFinite(x))
        }
    };

    let fc = eval(center)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut res_abs = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let (f1, f2) = (eval(center - dx)?, eval(center + dx)?);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let width = half.abs();
    res_abs *= width;
    res_asc *= width;
    let mut error = ((kronrod - gauss) * half).abs();
    // QUADPACK error rescaling, including its round-off floor.
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(floor);
    }

    Ok(Panel { a, b, value: kronrod * half, error, floor })
}

/// Integrates `f` over `[points[0], points[last]]`; interior entries of
/// `points` are breakpoints and must be increasing.
pub fn integrate<F: Fn(f64) -> f64>(f: F, points: &[f64], tol: Tolerance) -> Result<Integral, QuadratureError> {
    if points.len() < 2 {
        return Err(QuadratureError::BadInterval("need at least two points".into()));
    }
    if points.iter().any(|x| !x.is_finite()) || points.windows(2).any(|w| w[1] < w[0]) {
        return Err(QuadratureError::BadInterval(format!("{points:?}")));
    }

    let mut panels = Vec::with_capacity(tol.max_subdivisions.max(points.len()));
    for w in points.windows(2) {
        if w[1] > w[0] {
            panels.push(gauss_kronrod(&f, w[0], w[1])?);
        }
    }
    if panels.is_empty() {
        return Ok(Integral::ZERO);
    }

    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let target = tol.abs.max(tol.rel * value.abs());
        if error <= target {
            return Ok(Integral { value, error, subdivisions: panels.len(), roundoff_limited: false });
        }
        let reducible: f64 = panels.iter().map(|p| (p.error - p.floor).max(0.0)).sum();
        if reducible <= target {
            return Ok(Integral { value, error, subdivisions: panels.len(), roundoff_limited: true });
        }
        let fail = QuadratureError::NoConvergence { value, error, subdivisions: panels.len() };
        if panels.len() >= tol.max_subdivisions {
            return Err(fail);
        }

        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| (x.1.error - x.1.floor).total_cmp(&(y.1.error - y.1.floor)))
            .expect("non-empty");
        let p = panels[worst];
        let mid = 0.5 * (p.a + p.b);
        // Panel no longer resolvable in floating point.
        if !(mid > p.a && mid < p.b) {
            return Err(fail);
        }
        panels[worst] = gauss_kronrod(&f, p.a, mid)?;
        panels.push(gauss_kronrod(&f, mid, p.b)?);
    }
}
