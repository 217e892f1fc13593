//! Closed-form curvature formulas: weighted projective lines, the warped
//! product for SU(2) on C^2 + R^3, and the SU(2)-on-H^2 frame functions with
//! the full set of curvature-operator entries along the geodesic.
//!
//! The entry functions (`a1`, `b1`, `c1`, `mu`, `e_closed`, `f_closed`, ...)
//! are transcribed as printed, sign conventions included. They are total
//! functions of `t`; domain checks happen in [`appendix_funcs`].

use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, PI};

use serde::Serialize;
use thiserror::Error;

use crate::numkern::{find_root, NumError};

const S3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClosedFormError {
    #[error("weights ({a}, {b}) must be coprime with a >= b >= 1")]
    BadWeights { a: u32, b: u32 },
    #[error("r = {r} is outside (0, pi/2)")]
    OutOfRange { r: f64 },
    #[error("{function} vanishes at t = {t}")]
    Singular { function: &'static str, t: f64 },
    #[error("t = {t} is outside (0, pi/6) with margin {margin:e}")]
    OutsideDomain { t: f64, margin: f64 },
    #[error("{function} is not finite at t = {t}")]
    NotFinite { function: &'static str, t: f64 },
    #[error(transparent)]
    Num(#[from] NumError),
}

fn cs(k: f64, t: f64) -> f64 {
    (k * t).cos()
}

fn sn(k: f64, t: f64) -> f64 {
    (k * t).sin()
}

/// Square root with rounding noise just below zero absorbed.
fn sqrt0(x: f64) -> f64 {
    if (-1e-14..0.0).contains(&x) {
        0.0
    } else {
        x.sqrt()
    }
}

// ---------------------------------------------------------------------------
// Weighted projective lines

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WCP1Params {
    a: u32,
    b: u32,
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl WCP1Params {
    pub fn new(a: u32, b: u32) -> Result<Self, ClosedFormError> {
        if b == 0 || a < b || gcd(a, b) != 1 {
            return Err(ClosedFormError::BadWeights { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn k_inf(&self) -> f64 {
        let (a, b) = (self.a as f64, self.b as f64);
        1.0 + 3.0 * b * b / (a * a)
    }

    pub fn k_sup(&self) -> f64 {
        let (a, b) = (self.a as f64, self.b as f64);
        1.0 + 3.0 * a * a / (b * b)
    }
}

fn check_r(r: f64) -> Result<(), ClosedFormError> {
    if r > 0.0 && r < PI / 2.0 {
        Ok(())
    } else {
        Err(ClosedFormError::OutOfRange { r })
    }
}

/// Coefficient of dtheta^2 in the orbital metric dr^2 + g(r) dtheta^2.
pub fn wcp1_metric_coeff(params: WCP1Params, r: f64) -> Result<f64, ClosedFormError> {
    check_r(r)?;
    let (a2, b2) = ((params.a as f64).powi(2), (params.b as f64).powi(2));
    Ok(0.25 * a2 * sn(2.0, r).powi(2) / (a2 * r.cos().powi(2) + b2 * r.sin().powi(2)))
}

pub fn wcp1_k(params: WCP1Params, r: f64) -> Result<f64, ClosedFormError> {
    check_r(r)?;
    let (a2, b2) = ((params.a as f64).powi(2), (params.b as f64).powi(2));
    let num = 3.0 * a2 * a2 + 26.0 * a2 * b2 + 3.0 * b2 * b2
        + 4.0 * (a2 * a2 - b2 * b2) * cs(2.0, r)
        + (a2 - b2).powi(2) * cs(4.0, r);
    let den = 2.0 * (a2 + b2 + (a2 - b2) * cs(2.0, r)).powi(2);
    Ok(num / den)
}

pub fn wcp1_k_prime(params: WCP1Params, r: f64) -> Result<f64, ClosedFormError> {
    check_r(r)?;
    let (a2, b2) = ((params.a as f64).powi(2), (params.b as f64).powi(2));
    Ok(48.0 * a2 * b2 * (a2 - b2) * sn(2.0, r) / (a2 + b2 + (a2 - b2) * cs(2.0, r)).powi(3))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MonotoneReport {
    Constant { value: f64, max_deviation: f64 },
    Increasing { first: f64, last: f64, min_step: f64, numerator_positive: bool },
    NotMonotone { at: f64 },
}

/// Monotonicity of K on an open grid of `points` values of r.
pub fn wcp1_k_monotone(params: WCP1Params, points: usize) -> Result<MonotoneReport, ClosedFormError> {
    let grid: Vec<f64> = (1..=points).map(|i| PI / 2.0 * i as f64 / (points + 1) as f64).collect();
    let ks = grid.iter().map(|&r| wcp1_k(params, r)).collect::<Result<Vec<_>, _>>()?;
    if params.a == params.b {
        let max_deviation = ks.iter().map(|k| (k - 4.0).abs()).fold(0.0, f64::max);
        return Ok(MonotoneReport::Constant { value: 4.0, max_deviation });
    }
    let mut min_step = f64::INFINITY;
    for (i, w) in ks.windows(2).enumerate() {
        let step = w[1] - w[0];
        if step <= 0.0 {
            return Ok(MonotoneReport::NotMonotone { at: grid[i + 1] });
        }
        min_step = min_step.min(step);
    }
    let numerator_positive = grid.iter().all(|&r| {
        let (a2, b2) = ((params.a as f64).powi(2), (params.b as f64).powi(2));
        48.0 * a2 * b2 * (a2 - b2) * sn(2.0, r) > 0.0
    });
    Ok(MonotoneReport::Increasing { first: ks[0], last: ks[ks.len() - 1], min_step, numerator_positive })
}

// ---------------------------------------------------------------------------
// Warped product for SU(2) on C^2 + R^3

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Warp {
    pub f: f64,
    pub df: f64,
    pub d2f: f64,
}

impl Warp {
    pub fn radial_curvature(&self) -> f64 {
        -self.d2f / self.f
    }

    /// Curvature of planes tangent to the S^2 factor, (1 - f'^2) / f^2.
    pub fn spherical_curvature(&self) -> f64 {
        (1.0 - self.df * self.df) / (self.f * self.f)
    }

    /// The expression (1 - f') / f^2 with f' not squared.
    pub fn spherical_curvature_unsquared(&self) -> f64 {
        (1.0 - self.df) / (self.f * self.f)
    }
}

/// f(r) = sin 2r / (2 sqrt(cos^2 r + 4 sin^2 r)) = s c / sqrt(1 + 3 s^2).
pub fn c2r3_f(r: f64) -> Warp {
    let (s, c) = r.sin_cos();
    let q = 1.0 + 3.0 * s * s;
    Warp {
        f: s * c / q.sqrt(),
        df: (1.0 - 2.0 * s * s - 3.0 * s.powi(4)) / q.powf(1.5),
        d2f: -c * s * (13.0 + 6.0 * s * s + 9.0 * s.powi(4)) / q.powf(2.5),
    }
}

/// -f''/f without the cancelling factor s c, so it extends to both ends.
pub fn c2r3_radial_closed(r: f64) -> f64 {
    let s2 = r.sin().powi(2);
    (13.0 + 6.0 * s2 + 9.0 * s2 * s2) / (1.0 + 3.0 * s2).powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Range {
    pub min: f64,
    pub argmin: f64,
    pub max: f64,
    pub argmax: f64,
}

fn range_over(grid: &[f64], f: impl Fn(f64) -> f64) -> Range {
    let mut r = Range { min: f64::INFINITY, argmin: 0.0, max: f64::NEG_INFINITY, argmax: 0.0 };
    for &x in grid {
        let v = f(x);
        if v < r.min {
            r.min = v;
            r.argmin = x;
        }
        if v > r.max {
            r.max = v;
            r.argmax = x;
        }
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WarpRanges {
    pub radial: Range,
    pub spherical: Range,
    pub spherical_unsquared: Range,
}

pub fn c2r3_ranges(grid: &[f64]) -> WarpRanges {
    WarpRanges {
        radial: range_over(grid, |r| c2r3_f(r).radial_curvature()),
        spherical: range_over(grid, |r| c2r3_f(r).spherical_curvature()),
        spherical_unsquared: range_over(grid, |r| c2r3_f(r).spherical_curvature_unsquared()),
    }
}

/// Richardson extrapolation to h = 0 from values at h1 > h2, assuming the
/// error is a multiple of h^order.
pub fn richardson(f1: f64, h1: f64, f2: f64, h2: f64, order: i32) -> f64 {
    let (p1, p2) = (h1.powi(order), h2.powi(order));
    (f2 * p1 - f1 * p2) / (p1 - p2)
}

// ---------------------------------------------------------------------------
// SU(2) on H^2: frame functions along gamma(t)

/// `<i_L gamma, i_R gamma>`.
pub fn i0(t: f64) -> f64 {
    4.0 * t.cos().powi(2) - 1.0
}

/// `|i_L gamma|^2`.
pub fn i_left_norm_sq(t: f64) -> f64 {
    1.0 + 8.0 * t.cos().powi(2)
}

/// `|i_R^h|^2 = 1 - I0 i0`.
pub fn i_horizontal_sq(t: f64) -> f64 {
    1.0 - i0(t).powi(2) / i_left_norm_sq(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameFunctions {
    pub t: f64,
    /// (i0, j0, k0).
    pub inner: [f64; 3],
    /// (|i_L gamma|^2, |j_L gamma|^2, |k_L gamma|^2).
    pub left_norm_sq: [f64; 3],
    /// (I0, J0, K0).
    pub ratio: [f64; 3],
    /// (I, J, K), the lengths of the horizontal parts of i_R, j_R, k_R.
    pub horizontal_norm: [f64; 3],
}

const FRAME_NAMES: [&str; 3] = ["I", "J", "K"];

/// Frame functions at t. Each of I, J, K vanishes on a coset of
/// (pi/2) Z, so together they vanish at every multiple of pi/6.
pub fn su2_frame(t: f64) -> Result<FrameFunctions, ClosedFormError> {
    let mut f = FrameFunctions { t, inner: [0.0; 3], left_norm_sq: [0.0; 3], ratio: [0.0; 3], horizontal_norm: [0.0; 3] };
    for (k, &function) in FRAME_NAMES.iter().enumerate() {
        let s = t + k as f64 * FRAC_PI_3;
        // Distance from s to the nearest zero of cos s sin s.
        let to_zero = (s / (PI / 2.0)).round() * (PI / 2.0) - s;
        if to_zero.abs() < 1e-6 {
            return Err(ClosedFormError::Singular { function, t });
        }
        f.inner[k] = i0(s);
        f.left_norm_sq[k] = i_left_norm_sq(s);
        f.ratio[k] = f.inner[k] / f.left_norm_sq[k];
        f.horizontal_norm[k] = i_horizontal_sq(s).sqrt();
    }
    Ok(f)
}

/// The numerator -2 sqrt3 - sqrt3 cos 2t + sin 2t + 4 sin 4t of K_ij - 1.
pub fn su2_k_ij_numerator(t: f64) -> f64 {
    -2.0 * S3 - S3 * cs(2.0, t) + sn(2.0, t) + 4.0 * sn(4.0, t)
}

fn d_base(t: f64) -> f64 {
    -10.0 + 2.0 * cs(2.0, t) - 5.0 * cs(4.0, t) + 4.0 * cs(6.0, t)
}

fn d_plus(t: f64) -> f64 {
    d_base(t) + 2.0 * S3 * sn(2.0, t) + 5.0 * S3 * sn(4.0, t)
}

fn d_minus(t: f64) -> f64 {
    d_base(t) - 2.0 * S3 * sn(2.0, t) - 5.0 * S3 * sn(4.0, t)
}

pub fn su2_k_ij_denominator(t: f64) -> f64 {
    (5.0 + 4.0 * cs(2.0, t)) * (5.0 - 2.0 * cs(2.0, t) + 2.0 * S3 * sn(2.0, t)) * d_plus(t)
}

/// Curvature of the plane spanned by i_R^h, j_R^h at gamma(t).
pub fn su2_k_ij(t: f64) -> f64 {
    1.0 - 27.0 * su2_k_ij_numerator(t).powi(2) / su2_k_ij_denominator(t)
}

/// pi/3 - arccos(1/4) / 2.
pub fn t0() -> f64 {
    FRAC_PI_3 - 0.5 * 0.25f64.acos()
}

/// t0 as the root of the numerator of K_ij - 1 inside (0, pi/6).
pub fn t0_numeric(tol: f64) -> Result<f64, ClosedFormError> {
    // The numerator also vanishes at pi/6, so bracket away from it.
    Ok(find_root(su2_k_ij_numerator, 0.1, 0.5, tol)?)
}

// ---------------------------------------------------------------------------
// Curvature-operator entries

fn q1(t: f64) -> f64 {
    5.0 + 4.0 * cs(2.0, t)
}

fn q2(t: f64) -> f64 {
    21.0 - 20.0 * cs(2.0, t) + 8.0 * cs(4.0, t)
}

pub fn a1(t: f64) -> f64 {
    1.0 + 27.0 / q1(t).powi(2)
}

pub fn a2(t: f64) -> f64 {
    1.0 + 27.0 / (-5.0 + 2.0 * cs(2.0, t) + 2.0 * S3 * sn(2.0, t)).powi(2)
}

pub fn a3(t: f64) -> f64 {
    1.0 + 27.0 / (5.0 - 2.0 * cs(2.0, t) + 2.0 * S3 * sn(2.0, t)).powi(2)
}

fn sq6(t: f64) -> f64 {
    sqrt0(sn(6.0, t).powi(2) / (65.0 + 16.0 * cs(6.0, t)))
}

pub fn b1(t: f64) -> f64 {
    let num = -648.0
        * (2.0 - 10.0 * cs(2.0, t) + 2.0 * cs(4.0, t) - 5.0 * cs(6.0, t) + 2.0 * cs(8.0, t))
        * sn(2.0, t);
    num / (q1(t).powi(2) * q2(t).powi(2) * sq6(t))
}

pub fn b2(t: f64) -> f64 {
    let num = -324.0
        * (1.0 + 2.0 * cs(4.0, t))
        * sn(2.0, t)
        * (5.0 * cs(2.0, t) - 2.0 * cs(4.0, t) + S3 * (5.0 * sn(2.0, t) + 2.0 * sn(4.0, t)));
    num / (q1(t).powi(2) * q2(t).powi(2) * sq6(t))
}

pub fn b3(t: f64) -> f64 {
    let num = 324.0
        * (1.0 + 2.0 * cs(4.0, t))
        * sn(2.0, t)
        * (-5.0 * cs(2.0, t) + 2.0 * cs(4.0, t) + S3 * (5.0 * sn(2.0, t) + 2.0 * sn(4.0, t)));
    num / (q1(t).powi(2) * q2(t).powi(2) * sq6(t))
}

pub fn c1(t: f64) -> f64 {
    let m = -5.0 + 2.0 * cs(2.0, t) + 2.0 * S3 * sn(2.0, t);
    let p = 5.0 - 2.0 * cs(2.0, t) + 2.0 * S3 * sn(2.0, t);
    let top = (1.0 - 8.0 * cs(2.0, t) + 2.0 * cs(4.0, t) - 4.0 * cs(6.0, t)).powi(2) * p.powi(2) * m.powi(2);
    1.0 + 27.0 * top / (q1(t) * q2(t).powi(2) * d_minus(t) * d_plus(t))
}

pub fn c2(t: f64) -> f64 {
    let m = -5.0 + 2.0 * cs(2.0, t) + 2.0 * S3 * sn(2.0, t);
    let top = (2.0 * S3 + S3 * cs(2.0, t) + sn(2.0, t) + 4.0 * sn(4.0, t)).powi(2);
    1.0 + 27.0 * top / (q1(t) * m * d_minus(t))
}

pub fn c3(t: f64) -> f64 {
    su2_k_ij(t)
}

pub fn mu(t: f64) -> f64 {
    -27.0 * sqrt0((1.0 - 4.0 * cs(2.0, t)).powi(2) / (q1(t).powi(3) * q2(t))) + b1(t)
}

pub fn e_closed(t: f64) -> f64 {
    (-1.0 + 2.0 * cs(2.0, t)) * (1.0 + 2.0 * cs(2.0, t)).powi(2) / q2(t)
}

pub fn f_closed(t: f64) -> f64 {
    let csc2 = 1.0 / sn(2.0, t).powi(2);
    (1.0 + 2.0 * cs(2.0, t)) * sqrt0(q1(t) * (1.0 + 2.0 * cs(4.0, t)).powi(2) * csc2 / q2(t)) * sn(2.0, t) / q1(t)
}

pub fn beta1_tilde(t: f64) -> f64 {
    -27.0 * (1.0 - 4.0 * cs(2.0, t)) / (q1(t).powi(3) * q2(t)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AppendixFuncs {
    pub t: f64,
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub c: [f64; 3],
    pub mu: f64,
    pub e: f64,
    pub f: f64,
}

impl AppendixFuncs {
    pub fn alpha(&self) -> [f64; 3] {
        self.a.map(|x| x - 1.0)
    }

    pub fn gamma(&self) -> [f64; 3] {
        self.c.map(|x| x - 1.0)
    }

    pub fn beta(&self) -> [f64; 3] {
        self.b.map(|x| x - self.mu)
    }

    /// mu_i^+ or mu_i^- = b_i +- sqrt(alpha_i gamma_i).
    pub fn mu_pm(&self, i: usize, sign: f64) -> f64 {
        self.b[i] + sign * sqrt0(self.alpha()[i] * self.gamma()[i])
    }
}

pub const DOMAIN_MARGIN: f64 = 1e-6;

fn denominators(t: f64) -> [(&'static str, f64); 6] {
    [
        ("5 + 4 cos 2t", q1(t)),
        ("21 - 20 cos 2t + 8 cos 4t", q2(t)),
        ("sin 6t", sn(6.0, t)),
        ("D-", d_minus(t)),
        ("D+", d_plus(t)),
        ("-5 + 2 cos 2t + 2 sqrt3 sin 2t", -5.0 + 2.0 * cs(2.0, t) + 2.0 * S3 * sn(2.0, t)),
    ]
}

/// All twelve entry functions at t in (0, pi/6).
pub fn appendix_funcs(t: f64) -> Result<AppendixFuncs, ClosedFormError> {
    if !(t > DOMAIN_MARGIN && t < FRAC_PI_6 - DOMAIN_MARGIN) {
        return Err(ClosedFormError::OutsideDomain { t, margin: DOMAIN_MARGIN });
    }
    for (name, d) in denominators(t) {
        if d.abs() < 1e-12 {
            return Err(ClosedFormError::Singular { function: name, t });
        }
    }
    let out = AppendixFuncs {
        t,
        a: [a1(t), a2(t), a3(t)],
        b: [b1(t), b2(t), b3(t)],
        c: [c1(t), c2(t), c3(t)],
        mu: mu(t),
        e: e_closed(t),
        f: f_closed(t),
    };
    let all = out.a.iter().chain(&out.b).chain(&out.c).chain([&out.mu, &out.e, &out.f]);
    if all.clone().any(|x| !x.is_finite()) {
        return Err(ClosedFormError::NotFinite { function: "appendix entry", t });
    }
    Ok(out)
}

/// E and F from their definitions through the frame functions.
pub fn ef_from_frame(t: f64) -> Result<(f64, f64), ClosedFormError> {
    let f = su2_frame(t)?;
    let [i0, j0, k0] = f.inner;
    let [ri, rj, rk] = f.ratio;
    let [hi, hj, hk] = f.horizontal_norm;
    let e = 1.0 - rj * j0 - rk * k0 - rj * rk * i0;
    let ff = 2.0 * hj * hk * ri * sn(2.0, t) / hi;
    Ok((e, ff))
}

pub fn ef_funcs(t: f64) -> (f64, f64) {
    (e_closed(t), f_closed(t))
}

/// C1 = alpha1 (alpha1 E - beta1~ F).
pub fn c_one(t: f64) -> f64 {
    let alpha = a1(t) - 1.0;
    alpha * (alpha * e_closed(t) - beta1_tilde(t) * f_closed(t))
}

/// (C1, C2, C3) with C2, C3 the Weyl shifts of C1.
pub fn c_funcs(t: f64) -> [f64; 3] {
    [c_one(t), c_one(t + FRAC_PI_3), c_one(t + 2.0 * FRAC_PI_3)]
}

pub fn eq54_lhs(t: f64) -> f64 {
    (a1(t) - 1.0) * e_closed(t) - beta1_tilde(t) * f_closed(t)
}

/// -54 (1 + 2 cos 4t)^2 / ((5 + 4 cos 2t)^2 (21 - 20 cos 2t + 8 cos 4t)).
pub fn eq54_rhs(t: f64) -> f64 {
    -54.0 * (1.0 + 2.0 * cs(4.0, t)).powi(2) / (q1(t).powi(2) * q2(t))
}

/// Zeros of the closed form of `eq54_rhs` in [lo, hi]. They are double
/// zeros, so the sign-changing factor 1 + 2 cos 4t is bracketed instead.
pub fn eq54_zeros(lo: f64, hi: f64, tol: f64) -> Result<Vec<f64>, ClosedFormError> {
    let factor = |t: f64| 1.0 + 2.0 * cs(4.0, t);
    let n = 2000;
    let step = (hi - lo) / n as f64;
    let mut zeros: Vec<f64> = Vec::new();
    // Widen the scan slightly so zeros sitting on an endpoint are bracketed.
    for k in 0..=n + 1 {
        let x0 = lo + step * (k as f64 - 1.0);
        let x1 = x0 + step;
        if factor(x0).signum() != factor(x1).signum() {
            let z = find_root(factor, x0, x1, tol)?;
            if z >= lo - tol && z <= hi + tol && zeros.last().is_none_or(|&p| (z - p).abs() > 10.0 * tol) {
                zeros.push(z);
            }
        }
    }
    Ok(zeros)
}

/// Intervals on which the three C_i are evaluated (t, t + pi/3, t + 2pi/3
/// for t in (0, pi/6)).
pub fn eq54_evaluation_intervals() -> [(f64, f64); 3] {
    [(0.0, FRAC_PI_6), (FRAC_PI_3, PI / 2.0), (2.0 * FRAC_PI_3, 5.0 * FRAC_PI_6)]
}

// ---------------------------------------------------------------------------
// Identities among the entries

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThorpeIdentityReport {
    pub points: usize,
    /// Max of |lhs - rhs| / max(|rhs|, 1e-300) for the square identity.
    pub square_identity_rel: f64,
    pub sign_conditions_hold: bool,
    pub trace_b: f64,
    pub mu1_minus_vs_mu2_plus: f64,
    /// mu1^- against mu3^+ on t <= t0 and mu3^- on t >= t0.
    pub mu1_minus_vs_mu3: f64,
    /// Where beta3 = b3 - mu changes sign.
    pub branch_switch: f64,
    pub t0: f64,
}

pub fn thorpe_identities(grid: &[f64]) -> Result<ThorpeIdentityReport, ClosedFormError> {
    let t0 = t0();
    let mut rep = ThorpeIdentityReport {
        points: grid.len(),
        square_identity_rel: 0.0,
        sign_conditions_hold: true,
        trace_b: 0.0,
        mu1_minus_vs_mu2_plus: 0.0,
        mu1_minus_vs_mu3: 0.0,
        branch_switch: f64::NAN,
        t0,
    };
    for &t in grid {
        let ap = appendix_funcs(t)?;
        let (al, ga, b) = (ap.alpha(), ap.gamma(), ap.b);
        let lhs = ((b[0] - b[1]).powi(2) - al[0] * ga[0] - al[1] * ga[1]).powi(2);
        let rhs = 4.0 * al[0] * al[1] * ga[0] * ga[1];
        rep.square_identity_rel = rep.square_identity_rel.max((lhs - rhs).abs() / rhs.abs().max(1e-300));
        let disc = (b[0] - b[1]).powi(2) - al[0] * ga[0] - al[1] * ga[1];
        rep.sign_conditions_hold &= disc > 0.0 && b[0] > b[1];
        rep.trace_b = rep.trace_b.max((b[0] + b[1] + b[2]).abs());
        let m1 = ap.mu_pm(0, -1.0);
        rep.mu1_minus_vs_mu2_plus = rep.mu1_minus_vs_mu2_plus.max((m1 - ap.mu_pm(1, 1.0)).abs());
        let m3 = if t <= t0 { ap.mu_pm(2, 1.0) } else { ap.mu_pm(2, -1.0) };
        rep.mu1_minus_vs_mu3 = rep.mu1_minus_vs_mu3.max((m1 - m3).abs());
    }
    rep.branch_switch = find_root(|t| b3(t) - mu(t), 0.3, 0.45, 1e-13)?;
    Ok(rep)
}

/// Open grid of `n` points in (lo, hi) with the given end margin.
pub fn grid(lo: f64, hi: f64, n: usize, margin: f64) -> Vec<f64> {
    if n == 1 {
        return vec![(lo + hi) / 2.0];
    }
    let (a, b) = (lo + margin, hi - margin);
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}
