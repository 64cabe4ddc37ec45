//! Brute-force adaptive integration of scalar and matrix integrands.
//!
//! This module shares no code with the moment expansion in `orthopoly`; it is
//! the reference every moment-based result is checked against. Endpoint
//! singularities are removed by a change of variables before a globally
//! adaptive 7/15-point Gauss–Kronrod scheme is applied.

use crate::error::{Error, Result};
use crate::matcore::{self, Matrix};

/// Behaviour of the integrand at one endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EndpointTag {
    Regular,
    /// `(distance to endpoint)^{−1/2}` behaviour, treated with `x = cos θ`.
    InverseSqrt,
    /// `(distance to endpoint)^α` behaviour with `α > −1`.
    Algebraic(f64),
}

impl EndpointTag {
    fn exponent(self) -> Option<f64> {
        match self {
            EndpointTag::Regular => None,
            EndpointTag::InverseSqrt => Some(-0.5),
            EndpointTag::Algebraic(a) if a != 0.0 => Some(a),
            EndpointTag::Algebraic(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointTags {
    pub left: EndpointTag,
    pub right: EndpointTag,
}

impl EndpointTags {
    pub const REGULAR: EndpointTags = EndpointTags {
        left: EndpointTag::Regular,
        right: EndpointTag::Regular,
    };
    pub const INVERSE_SQRT: EndpointTags = EndpointTags {
        left: EndpointTag::InverseSqrt,
        right: EndpointTag::InverseSqrt,
    };
}

#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            rel_tol: 1e-11,
            abs_tol: 0.0,
            max_panels: 5000,
        }
    }
}

// Kronrod abscissae on [−1, 1]; odd indices are the 7-point Gauss nodes.
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
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs_value: f64,
}

fn kronrod(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    let mut abs_k = WGK[7] * fc.abs();
    for i in 0..7 {
        let dx = h * XGK[i];
        let (f1, f2) = (f(c - dx), f(c + dx));
        k += WGK[i] * (f1 + f2);
        abs_k += WGK[i] * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            g += WG[i / 2] * (f1 + f2);
        }
    }
    Panel {
        a,
        b,
        value: k * h,
        error: ((k - g) * h).abs(),
        abs_value: abs_k * h.abs(),
    }
}

fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, opts: &OracleOptions) -> Result<f64> {
    let mut panels = vec![kronrod(f, a, b)];
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let abs_value: f64 = panels.iter().map(|p| p.abs_value).sum();
        let target = opts
            .abs_tol
            .max(opts.rel_tol * value.abs())
            .max(50.0 * f64::EPSILON * abs_value);
        if !value.is_finite() {
            return Err(Error::OracleFailure {
                estimate: value,
                error,
            });
        }
        if error <= target {
            return Ok(value);
        }
        if panels.len() >= opts.max_panels {
            return Err(Error::OracleFailure {
                estimate: value,
                error,
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            // interval can no longer be split in floating point
            return Err(Error::OracleFailure {
                estimate: value,
                error,
            });
        }
        panels.push(kronrod(f, p.a, mid));
        panels.push(kronrod(f, mid, p.b));
    }
}

/// `∫_a^b f(x) dx` to relative accuracy `opts.rel_tol`.
///
/// With `InverseSqrt` at both ends the substitution `x = c − h cos θ` is used.
/// Otherwise the interval is split at its midpoint and each tagged end gets
/// the power substitution `x − a = (m − a) s^{1/(α+1)}`, which turns
/// `(x − a)^α` into a constant.
pub fn integrate_scalar(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    tags: EndpointTags,
    opts: &OracleOptions,
) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::InvalidArgument(format!(
            "integration interval [{a}, {b}] must be finite and nonempty"
        )));
    }
    if tags == EndpointTags::INVERSE_SQRT {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let g = |t: f64| f(c - h * t.cos()) * h * t.sin();
        return adaptive(&g, 0.0, std::f64::consts::PI, opts);
    }
    let m = 0.5 * (a + b);
    let left = match tags.left.exponent() {
        None => adaptive(&f, a, m, opts)?,
        Some(alpha) => {
            let k = 1.0 / (alpha + 1.0);
            let w = m - a;
            let g = |s: f64| f(a + w * s.powf(k)) * w * k * s.powf(k - 1.0);
            adaptive(&g, 0.0, 1.0, opts)?
        }
    };
    let right = match tags.right.exponent() {
        None => adaptive(&f, m, b, opts)?,
        Some(alpha) => {
            let k = 1.0 / (alpha + 1.0);
            let w = b - m;
            let g = |s: f64| f(b - w * s.powf(k)) * w * k * s.powf(k - 1.0);
            adaptive(&g, 0.0, 1.0, opts)?
        }
    };
    Ok(left + right)
}

/// A matrix integrand on a finite interval.
pub struct IntegrandSpec<'a> {
    pub a: f64,
    pub b: f64,
    pub tags: EndpointTags,
    pub integrand: &'a dyn Fn(f64) -> Matrix,
    /// The integrand is symmetric pointwise; the result is checked and symmetrized.
    pub symmetric: bool,
}

/// Entrywise integration of a matrix integrand.
///
/// Each entry is converged to `rel_tol` relative to the magnitude of the whole
/// integral so that entries that vanish do not stall the refinement.
pub fn integrate_matrix(spec: &IntegrandSpec<'_>, opts: &OracleOptions) -> Result<Matrix> {
    let probe = (spec.integrand)(0.5 * (spec.a + spec.b));
    let (rows, cols) = probe.shape();
    let rough = OracleOptions {
        rel_tol: 1e-6,
        ..*opts
    };
    let scale = integrate_scalar(
        |x| (spec.integrand)(x).norm(),
        spec.a,
        spec.b,
        spec.tags,
        &rough,
    )?;
    let entry_opts = OracleOptions {
        abs_tol: opts.abs_tol.max(opts.rel_tol * scale),
        ..*opts
    };
    let mut out = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            if spec.symmetric && j < i {
                continue;
            }
            out[(i, j)] = integrate_scalar(
                |x| (spec.integrand)(x)[(i, j)],
                spec.a,
                spec.b,
                spec.tags,
                &entry_opts,
            )?;
        }
    }
    if spec.symmetric {
        if rows != cols {
            return Err(Error::DimensionMismatch {
                expected: "square integrand".into(),
                found: format!("{rows}x{cols}"),
            });
        }
        // lower triangle integrated separately to measure the asymmetry
        let tolerance = 100.0 * entry_opts.abs_tol.max(f64::EPSILON * scale);
        for i in 0..rows {
            for j in 0..i {
                let lower = integrate_scalar(
                    |x| (spec.integrand)(x)[(i, j)],
                    spec.a,
                    spec.b,
                    spec.tags,
                    &entry_opts,
                )?;
                let deviation = (lower - out[(j, i)]).abs();
                if deviation > tolerance {
                    return Err(Error::NotSymmetric {
                        deviation,
                        tolerance,
                    });
                }
                let mean = 0.5 * (lower + out[(j, i)]);
                out[(i, j)] = mean;
                out[(j, i)] = mean;
            }
        }
    }
    matcore::check_finite(&out, "oracle integral")?;
    Ok(out)
}
