//! Dense numerical kernel shared by the geometry modules.
//!
//! Matrices never exceed 24x24 here, so everything is dense and backed by
//! `nalgebra`'s dynamic types.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

/// Default relative threshold for the numerical rank of a Gram matrix.
pub const RANK_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (max asymmetry {max_asymmetry:e})")]
    NotSymmetric { max_asymmetry: f64 },
    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e}, largest {largest:e})")]
    NotPsd { eigenvalue: f64, largest: f64 },
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("root finder did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },
}

/// Largest entry of |M - M^T|.
pub fn max_asymmetry(m: &Matrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// Largest entry of |M + M^T|; zero exactly when M is antisymmetric.
pub fn max_antisymmetry_defect(m: &Matrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] + m[(j, i)]).abs());
        }
    }
    worst
}

pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

/// Eigendecomposition of a symmetric matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct EigenSym {
    pub values: Vector,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: Matrix,
}

impl EigenSym {
    pub fn reconstruct(&self) -> Matrix {
        &self.vectors * Matrix::from_diagonal(&self.values) * self.vectors.transpose()
    }
}

pub fn eig_sym(m: &Matrix) -> Result<EigenSym, NumError> {
    if !m.is_square() {
        return Err(NumError::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    let asym = max_asymmetry(m);
    if asym > 1e-10 * max_abs(m).max(1.0) {
        return Err(NumError::NotSymmetric { max_asymmetry: asym });
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym.clone());
    let (diag, q) = jacobi_polish(&sym, eig.eigenvectors);
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| diag[a].total_cmp(&diag[b]));
    let values = Vector::from_iterator(n, order.iter().map(|&k| diag[k]));
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &q.column(src));
    }
    Ok(EigenSym { values, vectors })
}

/// Cyclic Jacobi sweeps on Q^T M Q. The QL iteration occasionally leaves
/// off-diagonal mass near 1e-8 on matrices with many zero entries; a sweep
/// or two from its output brings the residual back to rounding level.
fn jacobi_polish(m: &Matrix, mut q: Matrix) -> (Vec<f64>, Matrix) {
    let n = m.nrows();
    let mut d = q.transpose() * m * &q;
    let floor = f64::EPSILON * max_abs(m).max(f64::MIN_POSITIVE);
    for _ in 0..10 {
        let off = (0..n).flat_map(|i| (0..i).map(move |j| (i, j))).map(|(i, j)| d[(i, j)].abs()).fold(0.0, f64::max);
        if off <= floor {
            break;
        }
        for i in 0..n {
            for j in i + 1..n {
                let apq = d[(i, j)];
                if apq.abs() <= floor * 1e-3 {
                    continue;
                }
                let theta = (d[(j, j)] - d[(i, i)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (dki, dkj) = (d[(k, i)], d[(k, j)]);
                    d[(k, i)] = c * dki - s * dkj;
                    d[(k, j)] = s * dki + c * dkj;
                }
                for k in 0..n {
                    let (dik, djk) = (d[(i, k)], d[(j, k)]);
                    d[(i, k)] = c * dik - s * djk;
                    d[(j, k)] = s * dik + c * djk;
                }
                for k in 0..n {
                    let (qki, qkj) = (q[(k, i)], q[(k, j)]);
                    q[(k, i)] = c * qki - s * qkj;
                    q[(k, j)] = s * qki + c * qkj;
                }
            }
        }
    }
    ((0..n).map(|i| d[(i, i)]).collect(), q)
}

/// Moore-Penrose pseudo-inverse of a PSD Gram matrix.
pub fn pinv_gram(g: &Matrix, rank_tol: f64) -> Result<Matrix, NumError> {
    Ok(GramInverse::new(g, rank_tol)?.pinv)
}

/// Pseudo-inverse together with the rank and conditioning it was built from.
#[derive(Debug, Clone)]
pub struct GramInverse {
    pub pinv: Matrix,
    pub rank: usize,
    /// Ratio of largest to smallest retained eigenvalue.
    pub condition: f64,
    pub eigen: EigenSym,
}

impl GramInverse {
    pub fn new(g: &Matrix, rank_tol: f64) -> Result<Self, NumError> {
        let eigen = eig_sym(g)?;
        let n = g.nrows();
        let largest = if n == 0 { 0.0 } else { eigen.values[n - 1] };
        if n > 0 && eigen.values[0] < -1e-8 * largest.max(0.0) {
            return Err(NumError::NotPsd { eigenvalue: eigen.values[0], largest });
        }
        let cut = rank_tol * largest;
        let mut inv = Vector::zeros(n);
        let mut rank = 0;
        let mut smallest_kept = f64::INFINITY;
        for k in 0..n {
            let lambda = eigen.values[k];
            if largest > 0.0 && lambda > cut {
                inv[k] = 1.0 / lambda;
                rank += 1;
                smallest_kept = smallest_kept.min(lambda);
            }
        }
        let pinv = &eigen.vectors * Matrix::from_diagonal(&inv) * eigen.vectors.transpose();
        let condition = if rank == 0 { f64::INFINITY } else { largest / smallest_kept };
        Ok(Self { pinv, rank, condition, eigen })
    }
}

/// Brent's method on a sign-changing bracket.
///
/// Every iterate stays inside `[lo, hi]`; stops once the bracket is narrower
/// than `tol` or `f` vanishes exactly.
pub fn find_root<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64, NumError>
where
    F: Fn(f64) -> f64,
{
    const MAX_ITER: usize = 200;
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(NumError::NoSignChange { lo, hi, f_lo: fa, f_hi: fb });
    }
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut bisected = true;
    for _ in 0..MAX_ITER {
        if fb == 0.0 || (b - a).abs() <= tol {
            return Ok(b);
        }
        let mut s = if fa != fc && fb != fc {
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo_s = (3.0 * a + b) / 4.0;
        let outside = !((s > lo_s.min(b)) && (s < lo_s.max(b)));
        let slow = if bisected {
            (s - b).abs() >= (b - c).abs() / 2.0 || (b - c).abs() < tol
        } else {
            (s - b).abs() >= (c - d).abs() / 2.0 || (c - d).abs() < tol
        };
        if outside || slow {
            s = (a + b) / 2.0;
            bisected = true;
        } else {
            bisected = false;
        }
        let fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if fa.signum() != fs.signum() {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    Err(NumError::NoConvergence { iterations: MAX_ITER })
}

/// Counter-based Gaussian sampler: stream `index` of a ChaCha generator keyed
/// by `seed`, so any sample can be regenerated independently of the others.
#[derive(Debug, Clone, Copy)]
pub struct Sampler {
    seed: u64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn rng(&self, index: u64) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    pub fn gaussian(&self, dim: usize, index: u64) -> Vector {
        let mut rng = self.rng(index);
        gaussian_with(&mut rng, dim)
    }

    pub fn unit_vector(&self, dim: usize, index: u64) -> Vector {
        let mut rng = self.rng(index);
        loop {
            let v = gaussian_with(&mut rng, dim);
            let n = v.norm();
            if n > 0.0 {
                return v / n;
            }
        }
    }
}

pub fn gaussian_with<R: rand::Rng>(rng: &mut R, dim: usize) -> Vector {
    Vector::from_iterator(dim, (0..dim).map(|_| StandardNormal.sample(rng)))
}

pub fn sample_sphere(dim: usize, count: usize, seed: u64) -> Vec<Vector> {
    let sampler = Sampler::new(seed);
    (0..count as u64).map(|i| sampler.unit_vector(dim, i)).collect()
}

/// Orthonormalize `vs` by modified Gram-Schmidt, dropping vectors whose
/// residual norm falls below `tol`.
pub fn gram_schmidt(vs: &[Vector], tol: f64) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let c = q.dot(&w);
                w.axpy(-c, q, 1.0);
            }
        }
        let n = w.norm();
        if n > tol {
            out.push(w / n);
        }
    }
    out
}

/// Orthonormal basis of the orthogonal complement of span(`vs`) in R^dim.
pub fn orthogonal_complement(vs: &[Vector], dim: usize) -> Vec<Vector> {
    let basis = gram_schmidt(vs, 1e-10);
    let mut proj = Matrix::identity(dim, dim);
    for q in &basis {
        proj -= q * q.transpose();
    }
    let eig = eig_sym(&proj).expect("projector is symmetric");
    let keep = dim - basis.len();
    let cols: Vec<Vector> = (dim - keep..dim).map(|k| eig.vectors.column(k).into_owned()).collect();
    gram_schmidt(&cols, 1e-10)
}

/// Principal angles (radians, ascending) between the column spans of two
/// matrices with orthonormal columns.
pub fn principal_angles(a: &Matrix, b: &Matrix) -> Vec<f64> {
    let m = a.transpose() * b;
    let svd = m.svd(false, false);
    let mut angles: Vec<f64> = svd.singular_values.iter().map(|s| s.clamp(-1.0, 1.0).acos()).collect();
    angles.sort_by(f64::total_cmp);
    angles
}

/// Matrix exponential.
pub fn expm(m: &Matrix) -> Matrix {
    m.clone().exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_eigenvalues() {
        let e = eig_sym(&Matrix::identity(3, 3)).unwrap();
        assert!(e.values.iter().all(|&x| (x - 1.0).abs() < 1e-15));
    }

    #[test]
    fn diagonal_eigenvalues_sorted() {
        let m = Matrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, -1.0]);
        let e = eig_sym(&m).unwrap();
        assert_eq!(e.values.as_slice(), &[-1.0, 2.0]);
        assert!((e.vectors[(1, 0)].abs() - 1.0).abs() < 1e-15);
        assert!((e.vectors[(0, 1)].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_asymmetric() {
        let m = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        match eig_sym(&m) {
            Err(NumError::NotSymmetric { max_asymmetry }) => assert_eq!(max_asymmetry, 2.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn pinv_rank_deficient_diagonal() {
        let g = Matrix::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 0.0]);
        let p = pinv_gram(&g, 1e-9).unwrap();
        assert!((p[(0, 0)] - 0.25).abs() < 1e-15);
        assert!(p[(1, 1)].abs() < 1e-15);
    }

    #[test]
    fn pinv_rejects_indefinite() {
        let g = Matrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(matches!(pinv_gram(&g, 1e-9), Err(NumError::NotPsd { .. })));
    }

    #[test]
    fn pinv_dependent_vectors_in_plane() {
        let vs = Matrix::from_row_slice(2, 3, &[1.0, 0.0, 2.0, 1.0, 1.0, 3.0]);
        let g = vs.transpose() * &vs;
        let p = pinv_gram(&g, 1e-9).unwrap();
        assert!(max_abs(&(&g * &p * &g - &g)) < 1e-10);
    }

    #[test]
    fn root_of_t0_polynomial() {
        let s3 = 3f64.sqrt();
        let f = |t: f64| -2.0 * s3 - s3 * (2.0 * t).cos() + (2.0 * t).sin() + 4.0 * (4.0 * t).sin();
        // f also vanishes at pi/6 itself, so the bracket stops short of it.
        let root = find_root(f, 0.0, 0.5, 1e-14).unwrap();
        let expected = std::f64::consts::FRAC_PI_3 - 0.5 * 0.25f64.acos();
        assert!((root - expected).abs() < 1e-12);
    }

    #[test]
    fn root_linear_and_cos() {
        assert!((find_root(|t| t - 0.5, 0.0, 1.0, 1e-15).unwrap() - 0.5).abs() < 1e-15);
        let r = find_root(f64::cos, 1.0, 2.0, 1e-14).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn root_needs_sign_change() {
        assert!(matches!(find_root(|t| t * t + 1.0, -1.0, 1.0, 1e-12), Err(NumError::NoSignChange { .. })));
    }

    #[test]
    fn sampler_is_reproducible() {
        let a = sample_sphere(8, 1000, 7);
        let b = sample_sphere(8, 1000, 7);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.as_slice(), y.as_slice());
        }
        let c = sample_sphere(2, 1, 0);
        assert!((c[0].norm() - 1.0).abs() < 1e-14);
        assert_eq!(c[0].as_slice(), sample_sphere(2, 1, 0)[0].as_slice());
    }

    #[test]
    fn sampler_unit_norms() {
        let pts = sample_sphere(4, 10_000, 3);
        let mean = pts.iter().map(|p| p.norm()).sum::<f64>() / pts.len() as f64;
        assert!((mean - 1.0).abs() < 1e-14);
    }

    #[test]
    fn complement_is_orthogonal() {
        let v = vec![Vector::from_vec(vec![1.0, 1.0, 0.0, 0.0])];
        let c = orthogonal_complement(&v, 4);
        assert_eq!(c.len(), 3);
        for q in &c {
            assert!(q.dot(&v[0]).abs() < 1e-12);
        }
    }
}
