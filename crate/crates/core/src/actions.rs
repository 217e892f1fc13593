//! Concrete isometric actions on unit spheres, as lists of real antisymmetric
//! generator matrices.
//!
//! Complex coordinates are realified as interleaved pairs: `z_c` sits at real
//! indices `(2c, 2c + 1)` and a complex entry `x + iy` becomes the block
//! `[[x, -y], [y, x]]`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::numkern::{gram_schmidt, max_abs, max_antisymmetry_defect, GramInverse, Matrix, Vector};

pub type CMatrix = nalgebra::DMatrix<Complex64>;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ActionError {
    #[error("all weights are zero: the action is trivial")]
    TrivialAction,
    #[error("weights r = s = {0} are excluded")]
    EqualWeights(i64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("not a complex structure: |J^2 + I| = {square:e}, |J^T J - I| = {orthogonality:e}")]
    NotComplexStructure { square: f64, orthogonality: f64 },
}

#[derive(Debug, Clone)]
pub struct SphereAction {
    pub name: String,
    /// Dimension of the ambient vector space, n + 1.
    pub ambient_dim: usize,
    pub generators: Vec<Matrix>,
    pub group_dim: usize,
    pub group_rank: usize,
    pub tags: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ActionRecord {
    pub name: String,
    pub ambient_dim: usize,
    pub group_dim: usize,
    pub group_rank: usize,
    pub tags: BTreeMap<String, String>,
}

impl SphereAction {
    pub fn new(name: &str, generators: Vec<Matrix>, group_rank: usize) -> Self {
        let ambient_dim = generators.first().map_or(0, |g| g.nrows());
        Self {
            name: name.to_string(),
            ambient_dim,
            group_dim: generators.len(),
            generators,
            group_rank,
            tags: BTreeMap::new(),
        }
    }

    pub fn with_tag(mut self, key: &str, value: impl ToString) -> Self {
        self.tags.insert(key.to_string(), value.to_string());
        self
    }

    /// The Killing fields `Z_i p`.
    pub fn killing(&self, p: &Vector) -> Vec<Vector> {
        self.generators.iter().map(|z| z * p).collect()
    }

    /// Sub-action generated by the listed generators.
    pub fn restrict(&self, indices: &[usize], name: &str, group_rank: usize) -> Self {
        let gens = indices.iter().map(|&i| self.generators[i].clone()).collect();
        let mut sub = Self::new(name, gens, group_rank);
        sub.tags = self.tags.clone();
        sub
    }

    pub fn record(&self) -> ActionRecord {
        ActionRecord {
            name: self.name.clone(),
            ambient_dim: self.ambient_dim,
            group_dim: self.group_dim,
            group_rank: self.group_rank,
            tags: self.tags.clone(),
        }
    }
}

/// An orthogonal J with J^2 = -1.
#[derive(Debug, Clone)]
pub struct ComplexStructure {
    j: Matrix,
}

impl ComplexStructure {
    pub fn new(j: Matrix) -> Result<Self, ActionError> {
        let n = j.nrows();
        let id = Matrix::identity(n, n);
        let square = max_abs(&(&j * &j + &id));
        let orthogonality = max_abs(&(j.transpose() * &j - &id));
        if square > 1e-12 || orthogonality > 1e-12 {
            return Err(ActionError::NotComplexStructure { square, orthogonality });
        }
        Ok(Self { j })
    }

    /// The structure `i` on an interleaved realification of C^n.
    pub fn standard(complex_dim: usize) -> Self {
        Self { j: realify(&(CMatrix::identity(complex_dim, complex_dim) * I)) }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.j
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        &self.j * v
    }
}

pub fn realify(m: &CMatrix) -> Matrix {
    let mut out = Matrix::zeros(2 * m.nrows(), 2 * m.ncols());
    for r in 0..m.nrows() {
        for k in 0..m.ncols() {
            let z = m[(r, k)];
            out[(2 * r, 2 * k)] = z.re;
            out[(2 * r, 2 * k + 1)] = -z.im;
            out[(2 * r + 1, 2 * k)] = z.im;
            out[(2 * r + 1, 2 * k + 1)] = z.re;
        }
    }
    out
}

pub fn realify_vec(z: &[Complex64]) -> Vector {
    Vector::from_iterator(2 * z.len(), z.iter().flat_map(|w| [w.re, w.im]))
}

/// Matrix of a real-linear map on C^n given by its action on vectors.
fn real_linear(complex_dim: usize, f: impl Fn(&[Complex64]) -> Vec<Complex64>) -> Matrix {
    let n = 2 * complex_dim;
    let mut out = Matrix::zeros(n, n);
    for k in 0..n {
        let mut z = vec![Complex64::new(0.0, 0.0); complex_dim];
        z[k / 2] = if k % 2 == 0 { c(1.0, 0.0) } else { I };
        out.set_column(k, &realify_vec(&f(&z)));
    }
    out
}

/// The basis `i, j, k` of su(2) acting on C^2 by columns.
pub fn su2_basis() -> [CMatrix; 3] {
    [
        CMatrix::from_row_slice(2, 2, &[I, c(0.0, 0.0), c(0.0, 0.0), -I]),
        CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
        CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), -I, -I, c(0.0, 0.0)]),
    ]
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Derivative action of `x` in gl(2, C) on Sym^n(C^2), in the orthonormal basis
/// `f_k = sqrt(C(n, k)) e1^(n-k) e2^k`.
pub fn sym_power_algebra(x: &CMatrix, n: usize) -> CMatrix {
    let mut out = CMatrix::zeros(n + 1, n + 1);
    let scale = |j: usize, k: usize| (binomial(n, k) / binomial(n, j)).sqrt();
    for k in 0..=n {
        let a = (n - k) as f64;
        let b = k as f64;
        out[(k, k)] += x[(0, 0)] * a + x[(1, 1)] * b;
        if k < n {
            out[(k + 1, k)] += x[(1, 0)] * a * scale(k + 1, k);
        }
        if k > 0 {
            out[(k - 1, k)] += x[(0, 1)] * b * scale(k - 1, k);
        }
    }
    out
}

fn poly_mul(p: &[Complex64], q: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![c(0.0, 0.0); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// Group action of `g` in GL(2, C) on Sym^n(C^2) in the same basis, by
/// expanding `(g e1)^(n-k) (g e2)^k`.
pub fn sym_power_group(g: &CMatrix, n: usize) -> CMatrix {
    // Coefficient index = power of e2.
    let ge1 = [g[(0, 0)], g[(1, 0)]];
    let ge2 = [g[(0, 1)], g[(1, 1)]];
    let mut out = CMatrix::zeros(n + 1, n + 1);
    for k in 0..=n {
        let mut poly = vec![c(1.0, 0.0)];
        for _ in 0..n - k {
            poly = poly_mul(&poly, &ge1);
        }
        for _ in 0..k {
            poly = poly_mul(&poly, &ge2);
        }
        for (j, coeff) in poly.iter().enumerate() {
            out[(j, k)] = coeff * (binomial(n, k) / binomial(n, j)).sqrt();
        }
    }
    out
}

/// Vector of Sym^n(C^2) given by monomial coefficients `e1^(n-k) e2^k`,
/// expressed in the orthonormal basis `f_k`.
pub fn sym_monomials(n: usize, coeffs: &[(usize, Complex64)]) -> Vec<Complex64> {
    let mut z = vec![c(0.0, 0.0); n + 1];
    for &(k, w) in coeffs {
        z[k] += w / binomial(n, k).sqrt();
    }
    z
}

/// U(1) acting with the given weights, each weight repeated `copies` times.
pub fn u1_weights(weights: &[i64], copies: usize) -> Result<SphereAction, ActionError> {
    if weights.is_empty() || copies == 0 {
        return Err(ActionError::InvalidParameter("need at least one weight and one copy".into()));
    }
    if weights.iter().all(|&w| w == 0) {
        return Err(ActionError::TrivialAction);
    }
    let diag: Vec<Complex64> = (0..copies).flat_map(|_| weights.iter().map(|&w| I * w as f64)).collect();
    let gen = realify(&CMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)));
    let list = weights.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",");
    Ok(SphereAction::new(&format!("u1_weights({list})"), vec![gen], 1)
        .with_tag("family", "u1_weights")
        .with_tag("weights", list)
        .with_tag("copies", copies))
}

pub fn hopf() -> SphereAction {
    let mut a = u1_weights(&[1, 1], 1).expect("nonzero weights");
    a.name = "hopf".into();
    a
}

/// SU(2) on Sym^3(C^2*) = H^2 in the basis u^3/sqrt6, uv^2/sqrt2, v^3/sqrt6, u^2v/sqrt2.
pub fn su2_sym3_dual() -> SphereAction {
    let z = c(0.0, 0.0);
    let s3 = 3f64.sqrt();
    let il = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-3.0 * I, I, 3.0 * I, -I]));
    #[rustfmt::skip]
    let jl = CMatrix::from_row_slice(4, 4, &[
        z, z, z, c(-s3, 0.0),
        z, z, c(-s3, 0.0), c(2.0, 0.0),
        z, c(s3, 0.0), z, z,
        c(s3, 0.0), c(-2.0, 0.0), z, z,
    ]);
    #[rustfmt::skip]
    let kl = CMatrix::from_row_slice(4, 4, &[
        z, z, z, c(0.0, s3),
        z, z, c(0.0, s3), c(0.0, 2.0),
        z, c(0.0, s3), z, z,
        c(0.0, s3), c(0.0, 2.0), z, z,
    ]);
    SphereAction::new("su2_sym3_dual", vec![realify(&il), realify(&jl), realify(&kl)], 1)
        .with_tag("family", "su2_h2")
}

/// Right Sp(1) on H^2 = C^4 with quaternionic coordinates
/// (x1 + j y1, x2 + j y2) = (z0 + j z2, z1 + j z3).
pub fn sp1_right_h2() -> SphereAction {
    let ir = real_linear(4, |z| z.iter().map(|w| -I * w).collect());
    let jr = real_linear(4, |z| vec![z[2].conj(), z[3].conj(), -z[0].conj(), -z[1].conj()]);
    let kr = real_linear(4, |z| {
        vec![-I * z[2].conj(), -I * z[3].conj(), I * z[0].conj(), I * z[1].conj()]
    });
    SphereAction::new("sp1_right_h2", vec![ir, jr, kr], 1).with_tag("family", "su2_h2")
}

/// The geodesic cos t u^3/sqrt6 + sin t uv^2/sqrt2 in R^8.
pub fn su2_geodesic(t: f64) -> Vector {
    let mut p = Vector::zeros(8);
    p[0] = t.cos();
    p[2] = t.sin();
    p
}

pub fn su2_geodesic_velocity(t: f64) -> Vector {
    let mut v = Vector::zeros(8);
    v[0] = -t.sin();
    v[2] = t.cos();
    v
}

/// U(2) on C^4: SU(2) on Sym^3 plus the circle generated by i_R.
pub fn u2_c4() -> SphereAction {
    let mut gens = su2_sym3_dual().generators;
    gens.push(sp1_right_h2().generators[0].clone());
    SphereAction::new("u2_c4", gens, 2).with_tag("family", "u2_c4")
}

fn cross_matrix(axis: usize) -> Matrix {
    let mut m = Matrix::zeros(3, 3);
    let (a, b) = ((axis + 1) % 3, (axis + 2) % 3);
    m[(b, a)] = 1.0;
    m[(a, b)] = -1.0;
    m
}

/// Sp(1) on H + Im H by q.(x, y) = (q x, q y q^-1).
pub fn sp1_h_imh() -> SphereAction {
    // Left multiplication by i, j, k on the basis (1, i, j, k).
    #[rustfmt::skip]
    let left = [
        [[0., -1., 0., 0.], [1., 0., 0., 0.], [0., 0., 0., -1.], [0., 0., 1., 0.]],
        [[0., 0., -1., 0.], [0., 0., 0., 1.], [1., 0., 0., 0.], [0., -1., 0., 0.]],
        [[0., 0., 0., -1.], [0., 0., -1., 0.], [0., 1., 0., 0.], [1., 0., 0., 0.]],
    ];
    let gens = (0..3)
        .map(|a| {
            let mut m = Matrix::zeros(7, 7);
            for r in 0..4 {
                for col in 0..4 {
                    m[(r, col)] = left[a][r][col];
                }
            }
            m.view_mut((4, 4), (3, 3)).copy_from(&(cross_matrix(a) * 2.0));
            m
        })
        .collect();
    SphereAction::new("sp1_h_imh", gens, 1).with_tag("family", "c2r3")
}

/// Orthonormal basis (columns, realified) of the real form of Sym^6(C^2).
pub fn sym6_real_form() -> Matrix {
    let one = c(1.0, 0.0);
    let spans: [&[(usize, Complex64)]; 7] = [
        &[(0, one), (6, one)],
        &[(0, I), (6, -I)],
        &[(1, one), (5, -one)],
        &[(1, I), (5, I)],
        &[(2, one), (4, one)],
        &[(2, I), (4, -I)],
        &[(3, I)],
    ];
    let vs: Vec<Vector> = spans.iter().map(|s| realify_vec(&sym_monomials(6, s))).collect();
    let q = gram_schmidt(&vs, 1e-12);
    Matrix::from_columns(&q)
}

/// SO(3) on R^7, restricted from SU(2) on Sym^6 to the listed real form.
pub fn so3_sym6_real() -> SphereAction {
    let b = sym6_real_form();
    let gens = su2_basis()
        .iter()
        .map(|x| b.transpose() * realify(&sym_power_algebra(x, 6)) * &b)
        .collect();
    SphereAction::new("so3_sym6_real", gens, 1).with_tag("family", "so3_r7")
}

/// Sp(1) x Sp(1) on H^3 (x) H = Sym^5(C^2), with the structures used to
/// build the right factor.
#[derive(Debug, Clone)]
pub struct H3xH {
    /// Generators 0..3 are the left Sym^5 factor, 3..6 the right factor.
    pub action: SphereAction,
    pub complex: ComplexStructure,
    pub quaternionic: ComplexStructure,
}

impl H3xH {
    pub fn left(&self) -> SphereAction {
        self.action.restrict(&[0, 1, 2], "sp1_left_sym5", 1)
    }

    pub fn right(&self) -> SphereAction {
        self.action.restrict(&[3, 4, 5], "sp1_right_h3", 1)
    }
}

pub fn sp1sp1_h3h() -> H3xH {
    let n = 5;
    let mut gens: Vec<Matrix> = su2_basis().iter().map(|x| realify(&sym_power_algebra(x, n))).collect();
    let complex = ComplexStructure::standard(n + 1);
    // e1 -> e2, e2 -> -e1 extended antilinearly: f_k -> (-1)^k f_(5-k).
    let jq = real_linear(n + 1, |z| {
        (0..=n).map(|k| if (n - k) % 2 == 0 { z[n - k].conj() } else { -z[n - k].conj() }).collect()
    });
    let quaternionic = ComplexStructure::new(jq.clone()).expect("J^2 = -1 on Sym^5");
    let kq = complex.matrix() * &jq;
    gens.push(complex.matrix().clone());
    gens.push(jq);
    gens.push(kq);
    let action = SphereAction::new("sp1sp1_h3h", gens, 2).with_tag("family", "h3xh");
    H3xH { action, complex, quaternionic }
}

/// Sp(m) diagonally on C^2m + C^2m with U(1) weights (r, s).
pub fn spm_u1(m: usize, r: i64, s: i64) -> Result<SphereAction, ActionError> {
    if m == 0 {
        return Err(ActionError::InvalidParameter("m must be at least 1".into()));
    }
    if r == s {
        return Err(ActionError::EqualWeights(r));
    }
    if r < 0 || s < 0 {
        return Err(ActionError::InvalidParameter("weights must be nonnegative".into()));
    }
    let d = 2 * m;
    let zero = c(0.0, 0.0);
    let mut jm = CMatrix::zeros(d, d);
    for a in 0..m {
        jm[(a, a + m)] = c(-1.0, 0.0);
        jm[(a + m, a)] = c(1.0, 0.0);
    }
    let jinv = -jm.clone();
    let mut candidates = Vec::new();
    for a in 0..d {
        for b in a..d {
            let mut real = CMatrix::from_element(d, d, zero);
            let mut imag = CMatrix::from_element(d, d, zero);
            if a == b {
                imag[(a, a)] = I;
            } else {
                real[(a, b)] = c(1.0, 0.0);
                real[(b, a)] = c(-1.0, 0.0);
                imag[(a, b)] = I;
                imag[(b, a)] = I;
            }
            for x in [real, imag] {
                if a == b && x.iter().all(|w| *w == zero) {
                    continue;
                }
                // Projection of u(2m) onto sp(m) = {X : J^-1 conj(X) J = X}.
                let proj = (&x + &jinv * x.map(|w| w.conj()) * &jm) * c(0.5, 0.0);
                candidates.push(proj);
            }
        }
    }
    let flat: Vec<Vector> = candidates.iter().map(|x| {
        let r = realify(x);
        Vector::from_column_slice(r.as_slice())
    }).collect();
    let basis = gram_schmidt(&flat, 1e-10);
    let rd = 2 * d;
    let mut gens: Vec<Matrix> = basis
        .iter()
        .map(|v| {
            let x = Matrix::from_column_slice(rd, rd, v.as_slice());
            let mut g = Matrix::zeros(2 * rd, 2 * rd);
            g.view_mut((0, 0), (rd, rd)).copy_from(&x);
            g.view_mut((rd, rd), (rd, rd)).copy_from(&x);
            g
        })
        .collect();
    let u1: Vec<Complex64> = (0..2 * d).map(|k| if k < d { I * r as f64 } else { I * s as f64 }).collect();
    gens.push(realify(&CMatrix::from_diagonal(&nalgebra::DVector::from_vec(u1))));
    Ok(SphereAction::new(&format!("spm_u1({m},{r},{s})"), gens, m + 1)
        .with_tag("family", "spm_u1")
        .with_tag("m", m)
        .with_tag("r", r)
        .with_tag("s", s))
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub name: String,
    /// Largest |Z + Z^T| entry over all generators.
    pub max_antisymmetry: f64,
    /// Largest entry of a bracket's residual after projecting onto the span.
    pub max_closure_residual: f64,
    pub worst_pair: Option<(usize, usize)>,
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn flatten(m: &Matrix) -> Vector {
    Vector::from_column_slice(m.as_slice())
}

/// Bracket closure residual of `[Z_i, Z_j]` against the generator span.
pub fn closure_residual(gens: &[Matrix], i: usize, j: usize, span: &GramInverse, flat: &[Vector]) -> f64 {
    let bracket = &gens[i] * &gens[j] - &gens[j] * &gens[i];
    let b = flatten(&bracket);
    let rhs = Vector::from_iterator(flat.len(), flat.iter().map(|z| z.dot(&b)));
    let coeffs = &span.pinv * rhs;
    let mut fit = Vector::zeros(b.len());
    for (cf, z) in coeffs.iter().zip(flat) {
        fit.axpy(*cf, z, 1.0);
    }
    (b - fit).amax()
}

pub fn validate(action: &SphereAction) -> ValidationReport {
    const ANTISYM_TOL: f64 = 1e-12;
    const CLOSURE_TOL: f64 = 1e-9;
    let gens = &action.generators;
    let mut failures = Vec::new();
    let mut max_antisymmetry = 0.0f64;
    for (i, z) in gens.iter().enumerate() {
        if z.nrows() != action.ambient_dim || z.ncols() != action.ambient_dim {
            failures.push(format!("generator {i} has shape {}x{}", z.nrows(), z.ncols()));
            continue;
        }
        let d = max_antisymmetry_defect(z);
        max_antisymmetry = max_antisymmetry.max(d);
        if d > ANTISYM_TOL {
            failures.push(format!("generator {i} is not antisymmetric (|Z + Z^T| = {d:e})"));
        }
    }
    if action.group_dim != gens.len() {
        failures.push(format!("group_dim {} but {} generators", action.group_dim, gens.len()));
    }
    let mut max_closure_residual = 0.0f64;
    let mut worst_pair = None;
    if failures.is_empty() && !gens.is_empty() {
        let flat: Vec<Vector> = gens.iter().map(flatten).collect();
        let gram = Matrix::from_fn(flat.len(), flat.len(), |a, b| flat[a].dot(&flat[b]));
        match GramInverse::new(&gram, 1e-12) {
            Ok(span) => {
                for i in 0..gens.len() {
                    for j in i + 1..gens.len() {
                        let r = closure_residual(gens, i, j, &span, &flat);
                        if r > max_closure_residual {
                            max_closure_residual = r;
                            worst_pair = Some((i, j));
                        }
                        if r > CLOSURE_TOL {
                            failures.push(format!("bracket [Z_{i}, Z_{j}] leaves the span (residual {r:e})"));
                        }
                    }
                }
            }
            Err(e) => failures.push(format!("generator Gram matrix: {e}")),
        }
    }
    ValidationReport {
        name: action.name.clone(),
        max_antisymmetry,
        max_closure_residual,
        worst_pair,
        failures,
    }
}

/// Every action with a fixed construction, for validation and catalog export.
pub fn builtin_actions() -> Vec<SphereAction> {
    let mut out = vec![
        hopf(),
        u1_weights(&[2, 1], 1).expect("valid weights"),
        su2_sym3_dual(),
        sp1_right_h2(),
        u2_c4(),
        sp1_h_imh(),
        so3_sym6_real(),
        sp1sp1_h3h().action,
    ];
    out.push(spm_u1(1, 1, 0).expect("r != s"));
    out.push(spm_u1(2, 2, 1).expect("r != s"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
        a * b - b * a
    }

    #[test]
    fn hopf_generator_is_complex_structure() {
        let h = hopf();
        assert_eq!(h.ambient_dim, 4);
        assert!(ComplexStructure::new(h.generators[0].clone()).is_ok());
    }

    #[test]
    fn weights_two_one_blocks() {
        let a = u1_weights(&[2, 1], 1).unwrap();
        let z = &a.generators[0];
        assert_eq!(z[(1, 0)], 2.0);
        assert_eq!(z[(0, 1)], -2.0);
        assert_eq!(z[(3, 2)], 1.0);
        assert_eq!(z[(2, 3)], -1.0);
    }

    #[test]
    fn zero_weight_fixes_point() {
        let a = u1_weights(&[1, 0], 1).unwrap();
        let p = Vector::from_vec(vec![0.0, 0.0, 1.0, 0.0]);
        assert!((&a.generators[0] * p).norm() == 0.0);
        assert_eq!(u1_weights(&[0, 0], 1).unwrap_err(), ActionError::TrivialAction);
    }

    #[test]
    fn il_on_first_basis_vector() {
        let a = su2_sym3_dual();
        let mut e = Vector::zeros(8);
        e[0] = 1.0;
        let out = &a.generators[0] * e;
        assert_eq!(out[1], -3.0);
        assert!(out.iter().enumerate().all(|(k, x)| k == 1 || *x == 0.0));
    }

    #[test]
    fn left_brackets_and_non_products() {
        let g = su2_sym3_dual().generators;
        for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            let r = commutator(&g[a], &g[b]) - &g[c] * 2.0;
            assert!(max_abs(&r) < 1e-12);
        }
        assert!(max_abs(&(&g[0] * &g[1] - &g[2])) > 0.5);
    }

    #[test]
    fn ir_on_x1() {
        let r = sp1_right_h2();
        let mut e = Vector::zeros(8);
        e[0] = 1.0;
        let out = &r.generators[0] * e;
        let mut expected = Vector::zeros(8);
        expected[1] = -1.0;
        assert_eq!(out, expected);
    }

    #[test]
    fn left_right_commute_on_h2() {
        let l = su2_sym3_dual().generators;
        let r = sp1_right_h2().generators;
        for a in &l {
            for b in &r {
                assert!(max_abs(&commutator(a, b)) < 1e-11);
            }
        }
    }

    #[test]
    fn i0_at_pi_over_5() {
        let t = std::f64::consts::PI / 5.0;
        let p = su2_geodesic(t);
        let il = &su2_sym3_dual().generators[0] * &p;
        let ir = &sp1_right_h2().generators[0] * &p;
        assert!((il.dot(&ir) - (4.0 * t.cos().powi(2) - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn u2_c4_dimensions() {
        let a = u2_c4();
        assert_eq!((a.group_dim, a.ambient_dim), (4, 8));
        assert!(validate(&a).passed());
    }

    #[test]
    fn sp1_h_imh_left_i() {
        let a = sp1_h_imh();
        let mut e = Vector::zeros(7);
        e[0] = 1.0;
        let out = &a.generators[0] * e;
        let mut expected = Vector::zeros(7);
        expected[1] = 1.0;
        assert_eq!(out, expected);
    }

    #[test]
    fn sym6_real_form_is_invariant() {
        let b = sym6_real_form();
        let proj = Matrix::identity(14, 14) - &b * b.transpose();
        for x in su2_basis() {
            let m = realify(&sym_power_algebra(&x, 6));
            assert!(max_abs(&(&proj * m * &b)) < 1e-12);
        }
    }

    #[test]
    fn sym_power_of_algebra_is_derivative_of_group() {
        let x = &su2_basis()[1];
        let h = 1e-6;
        let id = CMatrix::identity(2, 2);
        let plus = sym_power_group(&(&id + x * c(h, 0.0)), 4);
        let minus = sym_power_group(&(&id - x * c(h, 0.0)), 4);
        let fd = (plus - minus) / c(2.0 * h, 0.0);
        let d = sym_power_algebra(x, 4);
        assert!((fd - d).iter().all(|w| w.norm() < 1e-8));
    }

    #[test]
    fn quaternionic_structure_on_w1() {
        let h = sp1sp1_h3h();
        let w1 = realify_vec(&sym_monomials(5, &[(3, c(1.0, 0.0))]));
        let target = realify_vec(&sym_monomials(5, &[(2, c(-1.0, 0.0))]));
        assert!((h.quaternionic.apply(&w1) - target).amax() < 1e-15);
    }

    #[test]
    fn h3xh_factors_commute() {
        let h = sp1sp1_h3h();
        let g = &h.action.generators;
        for a in 0..3 {
            for b in 3..6 {
                assert!(max_abs(&commutator(&g[a], &g[b])) < 1e-11);
            }
        }
    }

    #[test]
    fn spm_u1_shapes() {
        let a = spm_u1(1, 1, 0).unwrap();
        assert_eq!((a.group_dim, a.ambient_dim), (4, 8));
        let b = spm_u1(2, 2, 1).unwrap();
        assert_eq!((b.group_dim, b.ambient_dim), (11, 16));
        assert_eq!(spm_u1(1, 2, 2).unwrap_err(), ActionError::EqualWeights(2));
    }

    #[test]
    fn builtins_validate() {
        for a in builtin_actions() {
            let r = validate(&a);
            assert!(r.passed(), "{}: {:?}", a.name, r.failures);
            assert!(r.max_closure_residual < 1e-9);
        }
    }

    #[test]
    fn corrupted_generator_is_named() {
        let mut a = u2_c4();
        a.generators[2][(0, 1)] += 0.5;
        let r = validate(&a);
        assert!(!r.passed());
        assert!(r.failures[0].contains("generator 2"));
    }

    #[test]
    fn left_norm_and_weyl_shifts() {
        let il = &su2_sym3_dual().generators[0];
        let l = su2_sym3_dual().generators;
        let r = sp1_right_h2().generators;
        let i0 = |t: f64| {
            let p = su2_geodesic(t);
            (&l[0] * &p).dot(&(&r[0] * &p))
        };
        for k in 0..100 {
            let t = k as f64 * std::f64::consts::PI / 100.0;
            let p = su2_geodesic(t);
            let n2 = (il * &p).norm_squared();
            assert!((n2 - (1.0 + 8.0 * t.cos().powi(2))).abs() < 1e-12);
            let j0 = (&l[1] * &p).dot(&(&r[1] * &p));
            let k0 = (&l[2] * &p).dot(&(&r[2] * &p));
            assert!((j0 - i0(t + std::f64::consts::FRAC_PI_3)).abs() < 1e-12);
            assert!((k0 - i0(t + 2.0 * std::f64::consts::FRAC_PI_3)).abs() < 1e-12);
        }
    }
}
