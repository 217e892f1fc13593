//! Curvature-1 planes of S^7 / SU(2) along gamma(t) and the quadratic form
//! showing they are not horizontal for the U(2) quotient.
//!
//! Bivectors use the basis
//! `(01, 02, 03, 23, 31, 12)` of the frame
//! `f0 = gamma'`, `f1 = i_R^h / I`, `f2 = j_R^h / J`, `f3 = k_R^h / K`.

// Negated comparisons are deliberate: a NaN residual must fail a check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::{FRAC_PI_6, PI};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::actions::{sp1_right_h2, su2_geodesic, su2_geodesic_velocity, u2_c4, SphereAction};
use crate::closedform::{self, appendix_funcs, c_funcs, su2_frame, AppendixFuncs, ClosedFormError};
use crate::numkern::{eig_sym, principal_angles, Matrix, Vector, RANK_TOL};
use crate::oneill::{curvature_operator, frame_at, plane_curvature, OneillError};

/// Bivector index pairs in frame order.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2)];

/// Circle points are not parametrized within this distance of t0.
pub const T0_EXCLUSION: f64 = 1e-4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThorpeError {
    #[error(transparent)]
    ClosedForm(#[from] ClosedFormError),
    #[error(transparent)]
    Oneill(#[from] OneillError),
    #[error("t = {t} is within {T0_EXCLUSION:e} of t0, where the circle chart degenerates")]
    NearT0 { t: f64 },
    #[error("theta = {theta} is out of range at t = {t} (r3^2 = {r3_sq:e})")]
    OutOfRange { t: f64, theta: f64, r3_sq: f64 },
    #[error("kernel of R~ - mu* has dimension {dim} at t = {t}; eigenvalues {eigenvalues:?}")]
    KernelDimension { t: f64, dim: usize, eigenvalues: Vec<f64> },
    #[error("d/dt lies in the plane: (s23, s31, s12) vanishes")]
    NoNormal,
    #[error("boundedness certificate failed: delta = {delta:e} at t = {t}, phi = {phi}")]
    Certificate { delta: f64, t: f64, phi: f64 },
}

/// The SU(2) factor of U(2) acting on C^4.
pub fn su2_action() -> SphereAction {
    u2_c4().restrict(&[0, 1, 2], "su2_sym3_dual", 1)
}

/// `[gamma', i_R^h / I, j_R^h / J, k_R^h / K]` at gamma(t), in R^8.
pub fn lifted_frame(t: f64) -> Result<[Vector; 4], ThorpeError> {
    su2_frame(t)?;
    let p = su2_geodesic(t);
    let frame = frame_at(&su2_action(), &p, RANK_TOL)?;
    let right = sp1_right_h2();
    let lift = |k: usize| {
        let h = frame.horizontal_part(&(&right.generators[k] * &p));
        let n = h.norm();
        h / n
    };
    Ok([su2_geodesic_velocity(t), lift(0), lift(1), lift(2)])
}

/// The 6x6 operator computed by the O'Neill engine on the lifted frame.
pub fn engine_operator_at(t: f64) -> Result<Matrix, ThorpeError> {
    let action = su2_action();
    let frame = frame_at(&action, &su2_geodesic(t), RANK_TOL)?;
    let basis = lifted_frame(t)?;
    Ok(curvature_operator(&action, &frame, &basis, &PAIRS)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureOperator6 {
    pub t: f64,
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub c: [f64; 3],
}

pub fn hodge_star() -> Matrix {
    let mut s = Matrix::zeros(6, 6);
    for i in 0..3 {
        s[(i, i + 3)] = 1.0;
        s[(i + 3, i)] = 1.0;
    }
    s
}

impl CurvatureOperator6 {
    pub fn matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(6, 6);
        for i in 0..3 {
            m[(i, i)] = self.a[i];
            m[(i + 3, i + 3)] = self.c[i];
            m[(i, i + 3)] = self.b[i];
            m[(i + 3, i)] = self.b[i];
        }
        m
    }

    pub fn trace_b(&self) -> f64 {
        self.b.iter().sum()
    }
}

pub fn operator_at(t: f64) -> Result<CurvatureOperator6, ThorpeError> {
    let ap = appendix_funcs(t)?;
    Ok(CurvatureOperator6 { t, a: ap.a, b: ap.b, c: ap.c })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelReport {
    pub t: f64,
    /// Eigenvalues of R~ - mu*, sorted by magnitude.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors of the three smallest eigenvalues.
    pub basis: Vec<[f64; 6]>,
    /// The normalized bivectors -beta_i dt^e_i + alpha_i e_j^e_k.
    pub displayed: Vec<[f64; 6]>,
    pub max_principal_angle: f64,
}

impl KernelReport {
    pub fn third(&self) -> f64 {
        self.eigenvalues[2].abs()
    }

    pub fn fourth(&self) -> f64 {
        self.eigenvalues[3].abs()
    }
}

fn displayed_bivector(ap: &AppendixFuncs, i: usize) -> [f64; 6] {
    let mut v = [0.0; 6];
    v[i] = -ap.beta()[i];
    v[i + 3] = ap.alpha()[i];
    v
}

pub fn kernel_at(t: f64) -> Result<KernelReport, ThorpeError> {
    let ap = appendix_funcs(t)?;
    let op = operator_at(t)?;
    let m = op.matrix() - Matrix::identity(6, 6) - hodge_star() * ap.mu;
    let eig = eig_sym(&m).map_err(|e| ThorpeError::ClosedForm(e.into()))?;
    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&x, &y| eig.values[x].abs().total_cmp(&eig.values[y].abs()));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.values[k]).collect();
    let dim = eigenvalues.iter().filter(|x| x.abs() < 1e-8).count();
    if dim != 3 {
        return Err(ThorpeError::KernelDimension { t, dim, eigenvalues });
    }
    let kernel = Matrix::from_columns(&order[..3].iter().map(|&k| eig.vectors.column(k).into_owned()).collect::<Vec<_>>());
    let displayed: Vec<[f64; 6]> = (0..3)
        .map(|i| {
            let v = displayed_bivector(&ap, i);
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.map(|x| x / n)
        })
        .collect();
    let d = Matrix::from_fn(6, 3, |r, col| displayed[col][r]);
    let angles = principal_angles(&kernel, &d);
    let basis = (0..3).map(|col| std::array::from_fn(|r| kernel[(r, col)])).collect();
    Ok(KernelReport { t, eigenvalues, basis, displayed, max_principal_angle: angles[2] })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrassCirclePoint {
    pub t: f64,
    /// Circle parameter in [0, 2pi).
    pub theta: f64,
    pub branch: Branch,
    /// Hyperbolic parameter of the (r1, r2) chart.
    pub hyperbolic: f64,
    pub r: [f64; 3],
    pub bivector: [f64; 6],
    pub alpha: [f64; 3],
    pub beta: [f64; 3],
}

impl GrassCirclePoint {
    pub fn plucker(&self) -> f64 {
        (0..3).map(|i| self.r[i].powi(2) * self.alpha[i] * self.beta[i]).sum()
    }

    pub fn normalization(&self) -> f64 {
        (0..3).map(|i| self.r[i].powi(2) * (self.alpha[i].powi(2) + self.beta[i].powi(2))).sum::<f64>() - 1.0
    }

    /// sigma ^ sigma coefficient, zero iff the bivector is simple.
    pub fn self_wedge(&self) -> f64 {
        let s = &self.bivector;
        2.0 * (s[0] * s[3] + s[1] * s[4] + s[2] * s[5])
    }
}

struct Chart {
    alpha: [f64; 3],
    beta: [f64; 3],
    a1: f64,
    a2: f64,
    p: [f64; 3],
    before_t0: bool,
}

fn chart(t: f64) -> Result<Chart, ThorpeError> {
    let t0 = closedform::t0();
    if (t - t0).abs() < T0_EXCLUSION {
        return Err(ThorpeError::NearT0 { t });
    }
    let ap = appendix_funcs(t)?;
    let (alpha, beta) = (ap.alpha(), ap.beta());
    let p = std::array::from_fn(|i| alpha[i].powi(2) + beta[i].powi(2));
    let ratio = |i: usize| alpha[i] * beta[i] / (alpha[2] * beta[2]);
    Ok(Chart {
        a1: p[0] - ratio(0) * p[2],
        a2: p[1] - ratio(1) * p[2],
        alpha,
        beta,
        p,
        before_t0: t < t0,
    })
}

impl Chart {
    /// (r1, r2) on the hyperbola r1^2 A1 + r2^2 A2 = 1.
    fn r12(&self, theta: f64, sign: f64) -> (f64, f64) {
        if self.before_t0 {
            (sign * theta.cosh() / self.a1.sqrt(), theta.sinh() / (-self.a2).sqrt())
        } else {
            (theta.sinh() / (-self.a1).sqrt(), sign * theta.cosh() / self.a2.sqrt())
        }
    }

    /// P1/A1 + P2/(-A2) before t0, P2/A2 + P1/(-A1) after.
    fn slope(&self) -> f64 {
        if self.before_t0 {
            self.p[0] / self.a1 + self.p[1] / -self.a2
        } else {
            self.p[1] / self.a2 + self.p[0] / -self.a1
        }
    }

    /// sinh^2 of the largest |theta| with r3^2 >= 0. Uses A_i - P_i =
    /// -(alpha_i beta_i / alpha_3 beta_3) P3 so that no large terms cancel
    /// when A2 (or A1) is small.
    fn sinh_sq_max(&self) -> f64 {
        let (k, a) = if self.before_t0 { (0, self.a1) } else { (1, self.a2) };
        let ratio = self.alpha[k] * self.beta[k] / (self.alpha[2] * self.beta[2]);
        (-ratio * self.p[2] / (a * self.slope())).max(0.0)
    }

    fn theta_max(&self) -> f64 {
        self.sinh_sq_max().sqrt().asinh()
    }

    /// r3^2 written as (sinh^2 theta_max - sinh^2 theta) slope / P3, which
    /// avoids the cancellation in 1 - r1^2 P1 - r2^2 P2 near the endpoints.
    fn r3_sq(&self, theta: f64) -> f64 {
        (self.sinh_sq_max() - theta.sinh().powi(2)) * self.slope() / self.p[2]
    }

    fn point(&self, t: f64, theta: f64, branch: Branch, hyperbolic: f64, r: [f64; 3]) -> GrassCirclePoint {
        let mut bivector = [0.0; 6];
        for i in 0..3 {
            bivector[i] = -r[i] * self.beta[i];
            bivector[i + 3] = r[i] * self.alpha[i];
        }
        GrassCirclePoint { t, theta, branch, hyperbolic, r, bivector, alpha: self.alpha, beta: self.beta }
    }
}

/// Curvature-1 plane on the closed curve cut out of ker(R~ - mu*) by the
/// Grassmannian. The hyperbolic parameter is `theta_max sin(theta)` and r3
/// takes the sign of `cos(theta)`, so `theta` runs once around the curve.
pub fn circle_point(t: f64, theta: f64, branch: Branch) -> Result<GrassCirclePoint, ThorpeError> {
    let ch = chart(t)?;
    let h = ch.theta_max() * theta.sin();
    let (r1, r2) = ch.r12(h, branch.sign());
    let r3_sq = ch.r3_sq(h);
    if r3_sq < -1e-12 {
        return Err(ThorpeError::OutOfRange { t, theta, r3_sq });
    }
    let r3 = r3_sq.max(0.0).sqrt() * if theta.cos() < 0.0 { -1.0 } else { 1.0 };
    Ok(ch.point(t, theta, branch, h, [r1, r2, r3]))
}

/// The literal hyperbolic chart, with r3 >= 0 or r3 <= 0 by `r3_sign`.
pub fn circle_point_hyperbolic(t: f64, hyperbolic: f64, branch: Branch, r3_sign: Branch) -> Result<GrassCirclePoint, ThorpeError> {
    let ch = chart(t)?;
    let (r1, r2) = ch.r12(hyperbolic, branch.sign());
    let r3_sq = ch.r3_sq(hyperbolic);
    if r3_sq < -1e-12 {
        return Err(ThorpeError::OutOfRange { t, theta: hyperbolic, r3_sq });
    }
    let r3 = r3_sign.sign() * r3_sq.max(0.0).sqrt();
    Ok(ch.point(t, f64::NAN, branch, hyperbolic, [r1, r2, r3]))
}

fn bivector_matrix(sigma: &[f64; 6]) -> Matrix {
    let mut s = Matrix::zeros(4, 4);
    for (k, &(a, b)) in PAIRS.iter().enumerate() {
        s[(a, b)] = sigma[k];
        s[(b, a)] = -sigma[k];
    }
    s
}

/// Orthonormal u, v in R^4 spanning the plane of a simple bivector.
pub fn factor_bivector(sigma: &[f64; 6]) -> (Vector, Vector) {
    let svd = bivector_matrix(sigma).svd(true, false);
    let u = svd.u.expect("requested U");
    let mut idx: Vec<usize> = (0..4).collect();
    idx.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
    (u.column(idx[0]).into_owned(), u.column(idx[1]).into_owned())
}

fn lift(frame: &[Vector; 4], x: &Vector) -> Vector {
    let mut out = Vector::zeros(8);
    for (c, f) in x.iter().zip(frame) {
        out.axpy(*c, f, 1.0);
    }
    out
}

/// Curvature of an arbitrary bivector's plane at gamma(t), through the engine.
pub fn bivector_curvature(t: f64, sigma: &[f64; 6]) -> Result<f64, ThorpeError> {
    let frame = lifted_frame(t)?;
    let (u, v) = factor_bivector(sigma);
    let action = su2_action();
    let tf = frame_at(&action, &su2_geodesic(t), RANK_TOL)?;
    Ok(plane_curvature(&action, &tf, &lift(&frame, &u), &lift(&frame, &v))?.value)
}

/// |K - 1| for the plane of a circle point.
pub fn curvature_one_check(point: &GrassCirclePoint) -> Result<f64, ThorpeError> {
    Ok((bivector_curvature(point.t, &point.bivector)? - 1.0).abs())
}

/// (JK s23, KI s31, IJ s12), the right su(2) element normal to the plane.
pub fn normal_generator_raw(t: f64, sigma: &[f64; 6]) -> Result<[f64; 3], ThorpeError> {
    let [i, j, k] = su2_frame(t)?.horizontal_norm;
    if sigma[3..].iter().all(|x| x.abs() < 1e-12) {
        return Err(ThorpeError::NoNormal);
    }
    Ok([j * k * sigma[3], k * i * sigma[4], i * j * sigma[5]])
}

pub fn normal_generator(t: f64, sigma: &[f64; 6]) -> Result<[f64; 3], ThorpeError> {
    let n = normal_generator_raw(t, sigma)?;
    let len = n.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(n.map(|x| x / len))
}

/// The matrix n_1 i_R + n_2 j_R + n_3 k_R on R^8.
pub fn right_element(n: &[f64; 3]) -> Matrix {
    let r = sp1_right_h2();
    &r.generators[0] * n[0] + &r.generators[1] * n[1] + &r.generators[2] * n[2]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticForm {
    /// r1^2 C1 + r2^2 C2 + r3^2 C3.
    pub closed_form: f64,
    /// <n_R u, v> with n = (JK s23, KI s31, IJ s12) unnormalized and u ^ v = sigma.
    pub direct: f64,
    /// The same with n normalized.
    pub direct_unit: f64,
}

pub fn quadratic_form_at(point: &GrassCirclePoint) -> Result<QuadraticForm, ThorpeError> {
    let t = point.t;
    let c = c_funcs(t);
    let closed_form = (0..3).map(|i| point.r[i].powi(2) * c[i]).sum();
    let frame = lifted_frame(t)?;
    let raw = normal_generator_raw(t, &point.bivector)?;
    let unit = normal_generator(t, &point.bivector)?;
    let pair_sum = |n: &[f64; 3]| {
        let m = right_element(n);
        PAIRS
            .iter()
            .zip(&point.bivector)
            .map(|(&(a, b), s)| s * (&m * &frame[a]).dot(&frame[b]))
            .sum::<f64>()
    };
    Ok(QuadraticForm { closed_form, direct: pair_sum(&raw), direct_unit: pair_sum(&unit) })
}

pub fn quadratic_form(t: f64, theta: f64, branch: Branch) -> Result<QuadraticForm, ThorpeError> {
    quadratic_form_at(&circle_point(t, theta, branch)?)
}

/// Largest |<n_R gamma, x>| over x in {u, v, gamma'} for a circle point.
pub fn normal_orthogonality(point: &GrassCirclePoint) -> Result<f64, ThorpeError> {
    let frame = lifted_frame(point.t)?;
    let n = normal_generator(point.t, &point.bivector)?;
    let field = right_element(&n) * su2_geodesic(point.t);
    let (u, v) = factor_bivector(&point.bivector);
    let checks = [lift(&frame, &u), lift(&frame, &v), frame[0].clone()];
    Ok(checks.iter().map(|x| field.dot(x).abs()).fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EndpointLimit {
    pub t_values: [f64; 2],
    pub values: [f64; 2],
    pub extrapolated: f64,
    /// |r_i| at the sample closest to the endpoint.
    pub r_abs: f64,
}

/// r1^2 C1 as t -> 0 and r2^2 C2 as t -> pi/6, Richardson-extrapolated from
/// distances 1e-3 and 1e-4.
pub fn endpoint_limits() -> Result<(EndpointLimit, EndpointLimit), ThorpeError> {
    let hs = [1e-3, 1e-4];
    let eval = |t: f64, i: usize| -> Result<(f64, f64), ThorpeError> {
        let p = circle_point(t, 0.0, Branch::Plus)?;
        Ok((p.r[i].powi(2) * c_funcs(t)[i], p.r[i].abs()))
    };
    let mut out = Vec::new();
    for (i, at) in [(0usize, 0.0f64), (1, FRAC_PI_6)] {
        let ts = hs.map(|h| if at == 0.0 { h } else { at - h });
        let (v0, _) = eval(ts[0], i)?;
        let (v1, r) = eval(ts[1], i)?;
        out.push(EndpointLimit {
            t_values: ts,
            values: [v0, v1],
            extrapolated: closedform::richardson(v0, hs[0], v1, hs[1], 2),
            r_abs: r,
        });
    }
    let second = out.pop().expect("two limits");
    let first = out.pop().expect("two limits");
    Ok((first, second))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundednessCertificate {
    pub n_t: usize,
    pub n_theta: usize,
    pub margin: f64,
    pub delta: f64,
    pub argmin_t: f64,
    pub argmin_theta: f64,
    /// Largest value of the form; it must be nonpositive.
    pub max_value: f64,
    pub max_dual_path_residual: f64,
    pub limit_t_to_0: EndpointLimit,
    pub limit_t_to_pi_6: EndpointLimit,
    pub points: usize,
}

/// Grid values of the t-coordinate, skipping the t0 exclusion window.
pub fn thorpe_t_grid(n_t: usize, margin: f64) -> Vec<f64> {
    let t0 = closedform::t0();
    closedform::grid(0.0, FRAC_PI_6, n_t, margin)
        .into_iter()
        .filter(|t| (t - t0).abs() >= T0_EXCLUSION)
        .collect()
}

pub fn theta_grid(n_theta: usize) -> Vec<f64> {
    (0..n_theta).map(|k| 2.0 * PI * k as f64 / n_theta as f64).collect()
}

pub fn boundedness_certificate(n_t: usize, n_theta: usize) -> Result<BoundednessCertificate, ThorpeError> {
    const MARGIN: f64 = 1e-3;
    let ts = thorpe_t_grid(n_t, MARGIN);
    let thetas = theta_grid(n_theta);
    let rows: Vec<Vec<(f64, f64, QuadraticForm)>> = ts
        .par_iter()
        .map(|&t| {
            let mut row = Vec::with_capacity(2 * thetas.len());
            for branch in [Branch::Plus, Branch::Minus] {
                for &th in &thetas {
                    row.push((t, th, quadratic_form(t, th, branch)?));
                }
            }
            Ok(row)
        })
        .collect::<Result<_, ThorpeError>>()?;
    let (lim0, lim1) = endpoint_limits()?;
    let mut cert = BoundednessCertificate {
        n_t,
        n_theta,
        margin: MARGIN,
        delta: f64::INFINITY,
        argmin_t: f64::NAN,
        argmin_theta: f64::NAN,
        max_value: f64::NEG_INFINITY,
        max_dual_path_residual: 0.0,
        limit_t_to_0: lim0,
        limit_t_to_pi_6: lim1,
        points: 0,
    };
    for (t, th, q) in rows.into_iter().flatten() {
        cert.points += 1;
        cert.max_value = cert.max_value.max(q.closed_form);
        cert.max_dual_path_residual = cert.max_dual_path_residual.max((q.closed_form - q.direct).abs());
        if q.closed_form.abs() < cert.delta {
            cert.delta = q.closed_form.abs();
            cert.argmin_t = t;
            cert.argmin_theta = th;
        }
    }
    for lim in [&cert.limit_t_to_0, &cert.limit_t_to_pi_6] {
        if lim.extrapolated.abs() < cert.delta {
            cert.delta = lim.extrapolated.abs();
            cert.argmin_t = lim.t_values[1];
            cert.argmin_theta = 0.0;
        }
    }
    if !(cert.delta >= 1e-6) {
        return Err(ThorpeError::Certificate { delta: cert.delta, t: cert.argmin_t, phi: cert.argmin_theta });
    }
    Ok(cert)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AuditTolerances {
    pub engine_operator: f64,
    pub trace_b: f64,
    pub square_identity_rel: f64,
    pub mu_identity: f64,
    pub branch_switch: f64,
    pub kernel_third: f64,
    pub kernel_fourth_min: f64,
    pub kernel_angle: f64,
    pub grassmannian: f64,
    pub curvature_one: f64,
    pub quadratic_form_max: f64,
    pub dual_path: f64,
    pub normal_orthogonality: f64,
    pub endpoint: f64,
    pub delta_min: f64,
}

impl Default for AuditTolerances {
    fn default() -> Self {
        Self {
            engine_operator: 1e-8,
            trace_b: 1e-12,
            square_identity_rel: 1e-8,
            mu_identity: 1e-9,
            branch_switch: 1e-6,
            kernel_third: 1e-8,
            kernel_fourth_min: 1e-3,
            kernel_angle: 1e-6,
            grassmannian: 1e-10,
            curvature_one: 1e-6,
            quadratic_form_max: 1e-10,
            dual_path: 1e-9,
            normal_orthogonality: 1e-9,
            endpoint: 1e-3,
            delta_min: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct AuditResiduals {
    pub engine_operator: f64,
    pub trace_b: f64,
    pub square_identity_rel: f64,
    pub mu1_minus_vs_mu2_plus: f64,
    pub mu1_minus_vs_mu3: f64,
    pub branch_switch_vs_t0: f64,
    pub kernel_third: f64,
    pub kernel_angle: f64,
    pub plucker: f64,
    pub normalization: f64,
    pub self_wedge: f64,
    pub curvature_one: f64,
    pub dual_path: f64,
    pub normal_orthogonality: f64,
    pub r1_vs_three_quarters: f64,
    pub r2_vs_seven_over_324: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThorpeAudit {
    pub n_t: usize,
    pub n_theta: usize,
    pub t0: f64,
    pub t0_numeric: f64,
    pub delta: f64,
    pub kernel_fourth_min: f64,
    pub quadratic_form_max: f64,
    pub max_identity_residuals: AuditResiduals,
    pub certificate: BoundednessCertificate,
    pub tolerances: AuditTolerances,
    pub failures: Vec<String>,
}

impl ThorpeAudit {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Default)]
struct PointMax {
    plucker: f64,
    normalization: f64,
    self_wedge: f64,
    curvature_one: f64,
    orthogonality: f64,
}

fn point_residuals(t: f64, thetas: &[f64]) -> Result<PointMax, ThorpeError> {
    let mut m = PointMax::default();
    for branch in [Branch::Plus, Branch::Minus] {
        for &th in thetas {
            let p = circle_point(t, th, branch)?;
            m.plucker = m.plucker.max(p.plucker().abs());
            m.normalization = m.normalization.max(p.normalization().abs());
            m.self_wedge = m.self_wedge.max(p.self_wedge().abs());
            m.curvature_one = m.curvature_one.max(curvature_one_check(&p)?);
            m.orthogonality = m.orthogonality.max(normal_orthogonality(&p)?);
        }
    }
    Ok(m)
}

/// Runs every check of the curvature-1 analysis on an `n_t x n_theta` grid
/// and collects the worst residuals. Check failures are listed in
/// `failures`; structural errors (kernel dimension, chart) abort.
pub fn thorpe_audit(n_t: usize, n_theta: usize, tol: AuditTolerances) -> Result<ThorpeAudit, ThorpeError> {
    let ts = thorpe_t_grid(n_t, 1e-3);
    let thetas = theta_grid(n_theta);
    let t0 = closedform::t0();
    let ids = closedform::thorpe_identities(&ts)?;
    let mut res = AuditResiduals {
        trace_b: ids.trace_b,
        square_identity_rel: ids.square_identity_rel,
        mu1_minus_vs_mu2_plus: ids.mu1_minus_vs_mu2_plus,
        mu1_minus_vs_mu3: ids.mu1_minus_vs_mu3,
        branch_switch_vs_t0: (ids.branch_switch - t0).abs(),
        ..Default::default()
    };
    let per_t: Vec<(f64, KernelReport, PointMax)> = ts
        .par_iter()
        .map(|&t| {
            let engine = engine_operator_at(t)?;
            let diff = (engine - operator_at(t)?.matrix()).abs().max();
            Ok((diff, kernel_at(t)?, point_residuals(t, &thetas)?))
        })
        .collect::<Result<_, ThorpeError>>()?;
    let mut fourth_min = f64::INFINITY;
    for (diff, k, m) in &per_t {
        res.engine_operator = res.engine_operator.max(*diff);
        res.kernel_third = res.kernel_third.max(k.third());
        res.kernel_angle = res.kernel_angle.max(k.max_principal_angle);
        fourth_min = fourth_min.min(k.fourth());
        res.plucker = res.plucker.max(m.plucker);
        res.normalization = res.normalization.max(m.normalization);
        res.self_wedge = res.self_wedge.max(m.self_wedge);
        res.curvature_one = res.curvature_one.max(m.curvature_one);
        res.normal_orthogonality = res.normal_orthogonality.max(m.orthogonality);
    }
    let certificate = boundedness_certificate(n_t, n_theta)?;
    res.dual_path = certificate.max_dual_path_residual;
    res.r1_vs_three_quarters = (circle_point(1e-3, 0.0, Branch::Plus)?.r[0].abs() - 0.75).abs();
    res.r2_vs_seven_over_324 = (circle_point(FRAC_PI_6 - 1e-3, 0.0, Branch::Plus)?.r[1].abs() - 7.0 / 324.0).abs();

    let mut failures = Vec::new();
    let mut check = |name: &str, value: f64, limit: f64| {
        if !(value < limit) {
            failures.push(format!("{name}: {value:e} >= {limit:e}"));
        }
    };
    check("engine_operator", res.engine_operator, tol.engine_operator);
    check("trace_b", res.trace_b, tol.trace_b);
    check("square_identity_rel", res.square_identity_rel, tol.square_identity_rel);
    check("mu1_minus_vs_mu2_plus", res.mu1_minus_vs_mu2_plus, tol.mu_identity);
    check("mu1_minus_vs_mu3", res.mu1_minus_vs_mu3, tol.mu_identity);
    check("branch_switch_vs_t0", res.branch_switch_vs_t0, tol.branch_switch);
    check("kernel_third", res.kernel_third, tol.kernel_third);
    check("kernel_angle", res.kernel_angle, tol.kernel_angle);
    check("plucker", res.plucker, tol.grassmannian);
    check("normalization", res.normalization, tol.grassmannian);
    check("self_wedge", res.self_wedge, tol.grassmannian);
    check("curvature_one", res.curvature_one, tol.curvature_one);
    check("dual_path", res.dual_path, tol.dual_path);
    check("normal_orthogonality", res.normal_orthogonality, tol.normal_orthogonality);
    check("r1_vs_three_quarters", res.r1_vs_three_quarters, tol.endpoint);
    check("r2_vs_seven_over_324", res.r2_vs_seven_over_324, tol.endpoint);
    check("quadratic_form_max", certificate.max_value, tol.quadratic_form_max);
    if !(fourth_min > tol.kernel_fourth_min) {
        failures.push(format!("kernel_fourth_min: {fourth_min:e} <= {:e}", tol.kernel_fourth_min));
    }
    if !(certificate.delta > tol.delta_min) {
        failures.push(format!("delta: {:e} <= {:e}", certificate.delta, tol.delta_min));
    }
    Ok(ThorpeAudit {
        n_t,
        n_theta,
        t0,
        t0_numeric: closedform::t0_numeric(1e-14)?,
        delta: certificate.delta,
        kernel_fourth_min: fourth_min,
        quadratic_form_max: certificate.max_value,
        max_identity_residuals: res,
        certificate,
        tolerances: tol,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_trace_and_entry() {
        let op = operator_at(0.2).unwrap();
        assert!(op.trace_b().abs() < 1e-10);
        assert_eq!(op.matrix()[(0, 0)], closedform::a1(0.2));
        let m = op.matrix();
        assert_eq!(m.clone(), m.transpose());
    }

    #[test]
    fn kernel_on_both_sides_of_t0() {
        for t in [0.2, 0.5] {
            let k = kernel_at(t).unwrap();
            assert!(k.third() < 1e-8);
            assert!(k.fourth() > 1e-3);
            assert!(k.max_principal_angle < 1e-6);
        }
    }

    #[test]
    fn circle_points_are_curvature_one() {
        for (t, th, br) in [(0.2, 0.3, Branch::Plus), (0.45, 1.0, Branch::Minus)] {
            let p = circle_point(t, th, br).unwrap();
            assert!(p.plucker().abs() < 1e-10);
            assert!(p.normalization().abs() < 1e-10);
            assert!(curvature_one_check(&p).unwrap() < 1e-6);
        }
    }

    #[test]
    fn off_kernel_bivector_is_not_curvature_one() {
        let sigma = [0.6, 0.0, 0.0, 0.0, 0.8, 0.0];
        assert!((bivector_curvature(0.2, &sigma).unwrap() - 1.0).abs() > 1e-3);
    }

    #[test]
    fn hyperbolic_chart_rejects_large_theta() {
        assert!(matches!(
            circle_point_hyperbolic(0.2, 0.3, Branch::Plus, Branch::Plus),
            Err(ThorpeError::OutOfRange { .. })
        ));
        assert!(circle_point_hyperbolic(0.2, 0.0, Branch::Plus, Branch::Plus).is_ok());
    }

    #[test]
    fn near_t0_is_excluded() {
        assert!(matches!(circle_point(closedform::t0() + 1e-5, 0.0, Branch::Plus), Err(ThorpeError::NearT0 { .. })));
    }

    #[test]
    fn pure_23_normal_is_i() {
        let n = normal_generator(0.2, &[0.0, 0.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(n, [1.0, 0.0, 0.0]);
        assert_eq!(normal_generator(0.2, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]), Err(ThorpeError::NoNormal));
    }

    #[test]
    fn dual_path_at_sample() {
        let q = quadratic_form(0.2, 0.5, Branch::Plus).unwrap();
        assert!((q.closed_form - q.direct).abs() < 1e-9);
        assert!(q.closed_form <= 1e-10);
    }
}
