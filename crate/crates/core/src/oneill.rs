//! Quotient geometry of S^n / G through the O'Neill A-tensor.
//!
//! For orthonormal horizontal u, v the quotient has curvature
//! `1 + 3 |A_u v|^2`. The vertical part of `A_u v` is pinned down by the
//! Killing-field identity `<A_u v, Z p> = -<v, Z u>`, solved against the
//! Gram matrix of the vectors `Z_i p`.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::actions::{ComplexStructure, SphereAction};
use crate::numkern::{gaussian_with, gram_schmidt, orthogonal_complement, GramInverse, Matrix, NumError, Sampler, Vector, RANK_TOL};

/// Regular-only scans skip points whose vertical Gram matrix is worse
/// conditioned than this.
pub const MAX_CONDITION: f64 = 1e8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OneillError {
    #[error("vector is not horizontal (relative residual {residual:e})")]
    NotHorizontal { residual: f64 },
    #[error("degenerate plane (|u ^ v|^2 = {wedge_sq:e})")]
    DegeneratePlane { wedge_sq: f64 },
    #[error("point is not on the unit sphere (norm {norm})")]
    NotUnit { norm: f64 },
    #[error(transparent)]
    Num(#[from] NumError),
}

#[derive(Debug, Clone)]
pub struct TangentFrame {
    pub p: Vector,
    /// `Z_i p` for each generator, in generator order.
    pub killing: Vec<Vector>,
    pub vertical_basis: Vec<Vector>,
    pub horizontal_basis: Vec<Vector>,
    pub vertical_dim: usize,
    pub gram_pinv: Matrix,
    /// Largest over smallest retained Gram eigenvalue.
    pub condition: f64,
}

impl TangentFrame {
    /// Component of `x` orthogonal to `p` and to the vertical space.
    pub fn horizontal_part(&self, x: &Vector) -> Vector {
        let mut h = x - &self.p * self.p.dot(x);
        for q in &self.vertical_basis {
            h.axpy(-q.dot(x), q, 1.0);
        }
        h
    }

    fn horizontal_residual(&self, x: &Vector) -> f64 {
        let n = x.norm();
        if n == 0.0 {
            return 0.0;
        }
        (x - self.horizontal_part(x)).norm() / n
    }
}

pub fn frame_at(action: &SphereAction, p: &Vector, rank_tol: f64) -> Result<TangentFrame, OneillError> {
    let norm = p.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(OneillError::NotUnit { norm });
    }
    let killing = action.killing(p);
    let k = killing.len();
    let gram = Matrix::from_fn(k, k, |a, b| killing[a].dot(&killing[b]));
    let inv = GramInverse::new(&gram, rank_tol)?;
    let largest = if k == 0 { 0.0 } else { inv.eigen.values[k - 1] };
    let mut vertical = Vec::with_capacity(inv.rank);
    for col in (0..k).rev() {
        let lambda = inv.eigen.values[col];
        if largest <= 0.0 || lambda <= rank_tol * largest {
            break;
        }
        let mut v = Vector::zeros(p.len());
        for (i, z) in killing.iter().enumerate() {
            v.axpy(inv.eigen.vectors[(i, col)] / lambda.sqrt(), z, 1.0);
        }
        vertical.push(v);
    }
    let vertical = gram_schmidt(&vertical, 1e-12);
    let mut spanning = vec![p.clone()];
    spanning.extend(vertical.iter().cloned());
    let horizontal = orthogonal_complement(&spanning, p.len());
    Ok(TangentFrame {
        p: p.clone(),
        killing,
        vertical_dim: vertical.len(),
        vertical_basis: vertical,
        horizontal_basis: horizontal,
        gram_pinv: inv.pinv,
        condition: inv.condition,
    })
}

pub fn orbit_dim(action: &SphereAction, p: &Vector) -> usize {
    frame_at(action, p, RANK_TOL).map_or(0, |f| f.vertical_dim)
}

fn check_horizontal(frame: &TangentFrame, x: &Vector) -> Result<(), OneillError> {
    let residual = frame.horizontal_residual(x);
    if residual > 1e-8 {
        return Err(OneillError::NotHorizontal { residual });
    }
    Ok(())
}

/// The vertical vector `A_u v`.
pub fn a_tensor(action: &SphereAction, frame: &TangentFrame, u: &Vector, v: &Vector) -> Result<Vector, OneillError> {
    check_horizontal(frame, u)?;
    check_horizontal(frame, v)?;
    let rhs = Vector::from_iterator(
        action.generators.len(),
        action.generators.iter().map(|z| -v.dot(&(z * u))),
    );
    let coeffs = &frame.gram_pinv * rhs;
    let mut w = Vector::zeros(u.len());
    for (c, zp) in coeffs.iter().zip(&frame.killing) {
        w.axpy(*c, zp, 1.0);
    }
    Ok(w)
}

#[derive(Debug, Clone)]
pub struct PlaneCurvature {
    pub value: f64,
    /// `|A_e1 e2|^2` for the orthonormalized plane.
    pub a_norm_sq: f64,
    pub plane: (Vector, Vector),
}

pub fn plane_curvature(
    action: &SphereAction,
    frame: &TangentFrame,
    u: &Vector,
    v: &Vector,
) -> Result<PlaneCurvature, OneillError> {
    let wedge_sq = u.norm_squared() * v.norm_squared() - u.dot(v).powi(2);
    if wedge_sq < 1e-12 {
        return Err(OneillError::DegeneratePlane { wedge_sq });
    }
    let w = a_tensor(action, frame, u, v)?;
    let a_norm_sq = w.norm_squared() / wedge_sq;
    let e1 = u / u.norm();
    let mut e2 = v - &e1 * e1.dot(v);
    e2 /= e2.norm();
    Ok(PlaneCurvature { value: 1.0 + 3.0 * a_norm_sq, a_norm_sq, plane: (e1, e2) })
}

/// Curvature operator on bivectors of `basis` (orthonormal horizontal
/// vectors), in the order given by `pairs`:
/// `<R(a^b), c^d> = <a^b, c^d> + 2<A_a b, A_c d> + <A_a c, A_b d> - <A_a d, A_b c>`.
pub fn curvature_operator(
    action: &SphereAction,
    frame: &TangentFrame,
    basis: &[Vector],
    pairs: &[(usize, usize)],
) -> Result<Matrix, OneillError> {
    let m = basis.len();
    let mut a = vec![vec![Vector::zeros(frame.p.len()); m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let w = a_tensor(action, frame, &basis[i], &basis[j])?;
            a[j][i] = -&w;
            a[i][j] = w;
        }
    }
    let metric = |x: usize, y: usize, z: usize, w: usize| {
        basis[x].dot(&basis[z]) * basis[y].dot(&basis[w]) - basis[x].dot(&basis[w]) * basis[y].dot(&basis[z])
    };
    let n = pairs.len();
    Ok(Matrix::from_fn(n, n, |r, s| {
        let (x, y) = pairs[r];
        let (z, w) = pairs[s];
        metric(x, y, z, w) + 2.0 * a[x][y].dot(&a[z][w]) + a[x][z].dot(&a[y][w]) - a[x][w].dot(&a[y][z])
    }))
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanSample {
    pub index: usize,
    pub point: Vec<f64>,
    /// Smallest curvature over the planes sampled at this point.
    pub curvature: f64,
    pub max_curvature: f64,
    #[serde(skip)]
    pub argmin_plane: (Vector, Vector),
}

#[derive(Debug, Clone, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub action: String,
    pub seed: u64,
    pub n_points: usize,
    pub n_planes: usize,
    pub principal_vertical_dim: usize,
    pub n_regular: usize,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub argmin_index: Option<usize>,
    pub histogram: Histogram,
    #[serde(skip)]
    pub samples: Vec<ScanSample>,
}

impl ScanReport {
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn argmin(&self) -> Option<&ScanSample> {
        self.argmin_index.and_then(|i| self.samples.iter().find(|s| s.index == i))
    }

    /// CSV rows `(sample_index, point..., curvature)`, 17 significant digits.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let dim = self.samples.first().map_or(0, |s| s.point.len());
        let mut header = vec!["sample_index".to_string()];
        header.extend((0..dim).map(|k| format!("x{k}")));
        header.push("curvature".into());
        w.write_record(&header)?;
        for s in &self.samples {
            let mut row = vec![s.index.to_string()];
            row.extend(s.point.iter().map(|x| fmt17(*x)));
            row.push(fmt17(s.curvature));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Seventeen significant digits, enough to round-trip an f64.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn histogram(values: &[f64], bins: usize) -> Histogram {
    if values.is_empty() {
        return Histogram { edges: vec![], counts: vec![] };
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo < 1e-12 {
        return Histogram { edges: vec![lo, hi], counts: vec![values.len()] };
    }
    let width = (hi - lo) / bins as f64;
    let edges = (0..=bins).map(|k| lo + width * k as f64).collect();
    let mut counts = vec![0; bins];
    for &v in values {
        let k = (((v - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    Histogram { edges, counts }
}

/// Random orthonormal horizontal pair from Gaussian coefficients.
pub fn random_plane<R: rand::Rng>(frame: &TangentFrame, rng: &mut R) -> Option<(Vector, Vector)> {
    let h = &frame.horizontal_basis;
    if h.len() < 2 {
        return None;
    }
    let mut draw = || {
        let coeffs = gaussian_with(rng, h.len());
        let mut v = Vector::zeros(frame.p.len());
        for (c, e) in coeffs.iter().zip(h) {
            v.axpy(*c, e, 1.0);
        }
        v
    };
    let (a, b) = (draw(), draw());
    let q = gram_schmidt(&[a, b], 1e-8);
    (q.len() == 2).then(|| (q[0].clone(), q[1].clone()))
}

struct PointResult {
    frame: Option<TangentFrame>,
}

/// Minimum of the quotient curvature over random points and random
/// horizontal planes. Point `i` draws from sampler stream `2i` and its
/// planes from stream `2i + 1`, so results do not depend on scheduling.
pub fn kappa_scan(
    action: &SphereAction,
    n_points: usize,
    n_planes: usize,
    seed: u64,
    regular_only: bool,
) -> Result<ScanReport, OneillError> {
    let sampler = Sampler::new(seed);
    let dim = action.ambient_dim;
    let frames: Vec<PointResult> = (0..n_points)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampler.rng(2 * i as u64);
            let mut p = gaussian_with(&mut rng, dim);
            while p.norm() == 0.0 {
                p = gaussian_with(&mut rng, dim);
            }
            p /= p.norm();
            PointResult { frame: frame_at(action, &p, RANK_TOL).ok() }
        })
        .collect();
    let principal = frames.iter().filter_map(|r| r.frame.as_ref()).map(|f| f.vertical_dim).max().unwrap_or(0);
    type PointOutcome = Result<Option<(ScanSample, Vec<f64>)>, OneillError>;
    let samples: Vec<PointOutcome> = frames
        .par_iter()
        .enumerate()
        .map(|(i, r)| {
            let Some(frame) = &r.frame else { return Ok(None) };
            if regular_only && (frame.vertical_dim != principal || frame.condition > MAX_CONDITION) {
                return Ok(None);
            }
            let mut rng = sampler.rng(2 * i as u64 + 1);
            let mut values = Vec::with_capacity(n_planes);
            let mut best: Option<(f64, (Vector, Vector))> = None;
            for _ in 0..n_planes {
                let Some((u, v)) = random_plane(frame, &mut rng) else { continue };
                let k = plane_curvature(action, frame, &u, &v)?;
                values.push(k.value);
                if best.as_ref().is_none_or(|(b, _)| k.value < *b) {
                    best = Some((k.value, k.plane));
                }
            }
            let Some((curvature, argmin_plane)) = best else { return Ok(None) };
            let max_curvature = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            Ok(Some((
                ScanSample { index: i, point: frame.p.iter().copied().collect(), curvature, max_curvature, argmin_plane },
                values,
            )))
        })
        .collect();
    let mut kept = Vec::new();
    let mut all_values = Vec::new();
    for s in samples {
        if let Some((sample, values)) = s? {
            kept.push(sample);
            all_values.extend(values);
        }
    }
    let argmin = kept.iter().min_by(|a, b| a.curvature.total_cmp(&b.curvature));
    Ok(ScanReport {
        action: action.name.clone(),
        seed,
        n_points,
        n_planes,
        principal_vertical_dim: principal,
        n_regular: kept.len(),
        min: argmin.map(|s| s.curvature),
        max: kept.iter().map(|s| s.max_curvature).reduce(f64::max),
        argmin_index: argmin.map(|s| s.index),
        histogram: histogram(&all_values, 20),
        samples: kept,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TotallyReal {
    pub holds: bool,
    pub residual: f64,
}

/// Whether span{u, v} is orthogonal to span{Ju, Jv}.
pub fn is_totally_real(u: &Vector, v: &Vector, j: &ComplexStructure) -> TotallyReal {
    let (ju, jv) = (j.apply(u), j.apply(v));
    let residual = [u.dot(&ju), u.dot(&jv), v.dot(&ju), v.dot(&jv)]
        .iter()
        .fold(0.0f64, |acc, x| acc.max(x.abs()));
    TotallyReal { holds: residual < 1e-10, residual }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{hopf, sp1_h_imh, su2_geodesic, su2_sym3_dual, u1_weights};
    use crate::numkern::sample_sphere;

    #[test]
    fn hopf_frame_and_curvature() {
        for p in sample_sphere(4, 20, 5) {
            let a = hopf();
            let f = frame_at(&a, &p, RANK_TOL).unwrap();
            assert_eq!((f.vertical_dim, f.horizontal_basis.len()), (1, 2));
            let (u, v) = (&f.horizontal_basis[0], &f.horizontal_basis[1]);
            let w = a_tensor(&a, &f, u, v).unwrap();
            assert!((w.norm() - 1.0).abs() < 1e-12);
            assert!((plane_curvature(&a, &f, u, v).unwrap().value - 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn su2_vertical_dim() {
        let f = frame_at(&su2_sym3_dual(), &su2_geodesic(std::f64::consts::PI / 12.0), RANK_TOL).unwrap();
        assert_eq!(f.vertical_dim, 3);
        assert_eq!(f.horizontal_basis.len(), 4);
    }

    #[test]
    fn sp1_h_imh_singular_stratum() {
        let a = sp1_h_imh();
        let p = Vector::from_vec(vec![0., 0., 0., 0., 0., 0.6, 0.8]);
        assert_eq!(frame_at(&a, &p, RANK_TOL).unwrap().vertical_dim, 2);
        let q = Vector::from_vec(vec![0.5, 0.1, 0., 0., 0., 0.6, 0.8]).normalize();
        assert_eq!(orbit_dim(&a, &q), 3);
    }

    #[test]
    fn rejects_vertical_input() {
        let a = hopf();
        let p = Vector::from_vec(vec![1.0, 0.0, 0.0, 0.0]);
        let f = frame_at(&a, &p, RANK_TOL).unwrap();
        let vert = &a.generators[0] * &p;
        assert!(matches!(a_tensor(&a, &f, &vert, &f.horizontal_basis[0]), Err(OneillError::NotHorizontal { .. })));
        let u = &f.horizontal_basis[0];
        assert!(matches!(plane_curvature(&a, &f, u, &(u * 2.0)), Err(OneillError::DegeneratePlane { .. })));
    }

    #[test]
    fn totally_real_examples() {
        let j = ComplexStructure::standard(2);
        let u = Vector::from_vec(vec![1.0, 0.0, 0.0, 0.0]);
        let v = Vector::from_vec(vec![0.0, 0.0, 1.0, 0.0]);
        assert!(is_totally_real(&u, &v, &j).holds);
        assert!(!is_totally_real(&u, &j.apply(&u), &j).holds);
    }

    #[test]
    fn scan_is_deterministic() {
        let a = u1_weights(&[2, 1], 1).unwrap();
        let r1 = kappa_scan(&a, 50, 4, 9, true).unwrap();
        let r2 = kappa_scan(&a, 50, 4, 9, true).unwrap();
        let (mut b1, mut b2) = (Vec::new(), Vec::new());
        r1.write_csv(&mut b1).unwrap();
        r2.write_csv(&mut b2).unwrap();
        assert_eq!(b1, b2);
        assert_eq!(r1.n_regular, 50);
    }

    #[test]
    fn fixed_point_scan_is_empty() {
        // S^1 / U(1) is a point, so there are no horizontal planes.
        let a = u1_weights(&[1], 1).unwrap();
        let r = kappa_scan(&a, 10, 3, 0, true).unwrap();
        assert!(r.is_empty());
        assert!(r.min.is_none());
    }
}
