//! Quaternionic linear algebra on ℝ⁴ⁿ ≅ ℍⁿ.
//!
//! Block layout: coordinate `4λ + c` holds component `c` of the `λ`-th
//! quaternionic coordinate, with `c = 0, 1, 2, 3` the real, `i`, `j`, `k`
//! parts. The standard hypercomplex structure acts by right multiplication,
//! `Iξ = −ξi`, `Jξ = −ξj`, `Kξ = −ξk`, so every operator is a signed
//! permutation of the basis and is applied without storing a matrix.

use std::sync::OnceLock;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used to classify the symmetry of a bilinear form.
pub const SYMMETRY_TAG_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Structure {
    I,
    J,
    K,
}

impl Structure {
    pub const ALL: [Structure; 3] = [Structure::I, Structure::J, Structure::K];

    /// Image of the basis vector `e_c` (c in 0..4) within one block, as (sign, index).
    #[inline]
    fn block_image(self, c: usize) -> (f64, usize) {
        match (self, c) {
            (Structure::I, 0) => (-1.0, 1),
            (Structure::I, 1) => (1.0, 0),
            (Structure::I, 2) => (1.0, 3),
            (Structure::I, 3) => (-1.0, 2),
            (Structure::J, 0) => (-1.0, 2),
            (Structure::J, 1) => (-1.0, 3),
            (Structure::J, 2) => (1.0, 0),
            (Structure::J, 3) => (1.0, 1),
            (Structure::K, 0) => (-1.0, 3),
            (Structure::K, 1) => (1.0, 2),
            (Structure::K, 2) => (-1.0, 1),
            (Structure::K, 3) => (1.0, 0),
            _ => unreachable!("block component out of range"),
        }
    }

    /// Image of basis vector `e_i` in ℝ⁴ⁿ.
    #[inline]
    pub fn basis_image(self, i: usize) -> (f64, usize) {
        let (s, c) = self.block_image(i % 4);
        (s, i - i % 4 + c)
    }

    /// Dense matrix of the operator (column `j` is the image of `e_j`).
    pub fn matrix(self, dim: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(dim, dim);
        for j in 0..dim {
            let (s, i) = self.basis_image(j);
            m[(i, j)] = s;
        }
        m
    }
}

/// Vector in ℝ⁴ⁿ in the block layout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuatVector(Vec<f64>);

impl QuatVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        check_quaternionic(entries.len())?;
        Ok(QuatVector(entries))
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(vec![0.0; dim])
    }

    pub fn basis(dim: usize, i: usize) -> Result<Self> {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn n(&self) -> usize {
        self.0.len() / 4
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dot(&self, other: &QuatVector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }
}

fn check_quaternionic(dim: usize) -> Result<()> {
    if dim == 0 || dim % 4 != 0 {
        return Err(Error::NotQuaternionic(dim));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HypercomplexOp {
    pub kind: Structure,
    pub dim: usize,
}

impl HypercomplexOp {
    pub fn new(kind: Structure, dim: usize) -> Result<Self> {
        check_quaternionic(dim)?;
        Ok(HypercomplexOp { kind, dim })
    }
}

/// Apply one of the standard structures blockwise.
pub fn quat_apply(op: HypercomplexOp, v: &QuatVector) -> Result<QuatVector> {
    if v.dim() != op.dim {
        return Err(Error::DimensionMismatch {
            expected: op.dim,
            got: v.dim(),
        });
    }
    let mut out = vec![0.0; op.dim];
    for (j, &x) in v.0.iter().enumerate() {
        let (s, i) = op.kind.basis_image(j);
        out[i] += s * x;
    }
    Ok(QuatVector(out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryTag {
    Symmetric,
    Skew,
    General,
}

/// Real bilinear form on ℝ⁴ⁿ, stored as its Gram matrix `B[(i, j)] = B(e_i, e_j)`.
#[derive(Clone, Debug)]
pub struct BilinearForm {
    m: DMatrix<f64>,
    tag: OnceLock<SymmetryTag>,
}

impl PartialEq for BilinearForm {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
    }
}

impl BilinearForm {
    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                got: m.ncols(),
            });
        }
        Ok(BilinearForm {
            m,
            tag: OnceLock::new(),
        })
    }

    /// Unchecked constructor for square matrices built internally.
    pub(crate) fn wrap(m: DMatrix<f64>) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        BilinearForm {
            m,
            tag: OnceLock::new(),
        }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> f64) -> Self {
        Self::wrap(DMatrix::from_fn(dim, dim, f))
    }

    pub fn zeros(dim: usize) -> Self {
        Self::wrap(DMatrix::zeros(dim, dim))
    }

    /// The Euclidean inner product in the block layout.
    pub fn euclidean(dim: usize) -> Self {
        Self::wrap(DMatrix::identity(dim, dim))
    }

    /// The Kähler form `Ω_A(X, Y) = ⟨AX, Y⟩` of a standard structure.
    pub fn kahler(kind: Structure, dim: usize) -> Self {
        Self::wrap(kind.matrix(dim).transpose())
    }

    /// `α ⊗ β`, i.e. `(X, Y) ↦ α(X) β(Y)`.
    pub fn outer(alpha: &[f64], beta: &[f64]) -> Self {
        Self::from_fn(alpha.len(), |i, j| alpha[i] * beta[j])
    }

    /// `α ∧ β = α ⊗ β − β ⊗ α`.
    pub fn wedge(alpha: &[f64], beta: &[f64]) -> Self {
        Self::from_fn(alpha.len(), |i, j| alpha[i] * beta[j] - alpha[j] * beta[i])
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                s += x[i] * self.m[(i, j)] * y[j];
            }
        }
        s
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().fold(0.0, |a, &v| a.max(v.abs()))
    }

    pub fn transpose(&self) -> Self {
        Self::wrap(self.m.transpose())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::wrap(&self.m * s)
    }

    pub fn add(&self, other: &BilinearForm) -> Self {
        Self::wrap(&self.m + &other.m)
    }

    pub fn sub(&self, other: &BilinearForm) -> Self {
        Self::wrap(&self.m - &other.m)
    }

    pub fn symmetric_part(&self) -> Self {
        Self::wrap((&self.m + self.m.transpose()) * 0.5)
    }

    pub fn skew_part(&self) -> Self {
        Self::wrap((&self.m - self.m.transpose()) * 0.5)
    }

    /// Max-norm distance.
    pub fn distance(&self, other: &BilinearForm) -> f64 {
        (&self.m - &other.m).iter().fold(0.0, |a, &v| a.max(v.abs()))
    }

    /// Cached classification, relative to the largest entry.
    pub fn symmetry_tag(&self) -> SymmetryTag {
        *self.tag.get_or_init(|| {
            let scale = self.max_abs();
            if scale == 0.0 {
                return SymmetryTag::Symmetric;
            }
            let t = self.m.transpose();
            let sym = (&self.m - &t).iter().fold(0.0f64, |a, &v| a.max(v.abs())) / scale;
            if sym <= SYMMETRY_TAG_TOL {
                return SymmetryTag::Symmetric;
            }
            let skew = (&self.m + &t).iter().fold(0.0f64, |a, &v| a.max(v.abs())) / scale;
            if skew <= SYMMETRY_TAG_TOL {
                SymmetryTag::Skew
            } else {
                SymmetryTag::General
            }
        })
    }

    /// `(X, Y) ↦ B(AX, AY)` for a standard structure `A`.
    pub fn conjugate_by(&self, kind: Structure) -> Self {
        let d = self.dim();
        Self::from_fn(d, |i, j| {
            let (si, pi) = kind.basis_image(i);
            let (sj, pj) = kind.basis_image(j);
            si * sj * self.m[(pi, pj)]
        })
    }
}

fn check_form_dim(b: &BilinearForm) -> Result<()> {
    check_quaternionic(b.dim())
}

/// `(LB)(X, Y) = B(IX, IY) + B(JX, JY) + B(KX, KY)`.
pub fn l_apply(b: &BilinearForm) -> Result<BilinearForm> {
    check_form_dim(b)?;
    let d = b.dim();
    Ok(BilinearForm::from_fn(d, |i, j| {
        Structure::ALL
            .iter()
            .map(|&k| {
                let (si, pi) = k.basis_image(i);
                let (sj, pj) = k.basis_image(j);
                si * sj * b.m[(pi, pj)]
            })
            .sum()
    }))
}

/// Projector onto ℍ-Hermitian forms, `¼(1 + L)`.
pub fn project_hhermitian(b: &BilinearForm) -> Result<BilinearForm> {
    let lb = l_apply(b)?;
    Ok(b.add(&lb).scale(0.25))
}

/// Largest of `‖B(A·, A·) − B‖_max` over the three structures.
pub fn hhermitian_residual(b: &BilinearForm) -> f64 {
    Structure::ALL
        .iter()
        .map(|&k| b.conjugate_by(k).distance(b))
        .fold(0.0, f64::max)
}

pub fn is_hhermitian(b: &BilinearForm, tol: f64) -> bool {
    check_form_dim(b).is_ok() && hhermitian_residual(b) <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Quaternion product oracle, independent of the signed-permutation tables.
    fn qmul(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
        [
            a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
            a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
            a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
            a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
        ]
    }

    fn op(kind: Structure, dim: usize) -> HypercomplexOp {
        HypercomplexOp::new(kind, dim).unwrap()
    }

    #[test]
    fn unit_quaternion_images() {
        let one = QuatVector::basis(4, 0).unwrap();
        let ie = quat_apply(op(Structure::I, 4), &one).unwrap();
        assert_eq!(ie.as_slice(), &[0.0, -1.0, 0.0, 0.0]);
        let je = quat_apply(op(Structure::J, 4), &one).unwrap();
        assert_eq!(je.as_slice(), &[0.0, 0.0, -1.0, 0.0]);
    }

    #[test]
    fn matches_right_multiplication() {
        let units = [[0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]];
        let xi = [0.3, -1.2, 0.7, 2.5];
        for (kind, u) in Structure::ALL.iter().zip(units) {
            let expect = qmul(xi, u).map(|v| -v);
            let got = quat_apply(op(*kind, 4), &QuatVector::new(xi.to_vec()).unwrap()).unwrap();
            assert_eq!(got.as_slice(), &expect);
        }
    }

    #[test]
    fn dimension_errors() {
        assert!(QuatVector::new(vec![1.0; 6]).is_err());
        let v = QuatVector::new(vec![1.0; 4]).unwrap();
        assert!(matches!(
            quat_apply(op(Structure::I, 8), &v),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn l_on_metric_and_kahler_forms() {
        let g = BilinearForm::euclidean(8);
        assert_eq!(l_apply(&g).unwrap(), g.scale(3.0));
        for kind in Structure::ALL {
            let om = BilinearForm::kahler(kind, 8);
            assert_eq!(l_apply(&om).unwrap(), om.scale(-1.0));
            assert_eq!(project_hhermitian(&om).unwrap().max_abs(), 0.0);
            assert!(!is_hhermitian(&om, 1e-12));
        }
        assert_eq!(project_hhermitian(&g).unwrap(), g);
        assert!(is_hhermitian(&g, 1e-12));
    }

    #[test]
    fn symmetry_tags() {
        assert_eq!(BilinearForm::euclidean(4).symmetry_tag(), SymmetryTag::Symmetric);
        assert_eq!(BilinearForm::kahler(Structure::J, 4).symmetry_tag(), SymmetryTag::Skew);
        let general = BilinearForm::from_fn(4, |i, j| (i * 4 + j) as f64);
        assert_eq!(general.symmetry_tag(), SymmetryTag::General);
    }

    fn vec_strategy(dim: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-10.0..10.0f64, dim)
    }

    fn form_strategy(dim: usize) -> impl Strategy<Value = BilinearForm> {
        vec_strategy(dim * dim).prop_map(move |v| BilinearForm::from_fn(dim, |i, j| v[i * dim + j]))
    }

    proptest! {
        #[test]
        fn quaternionic_identities(v in vec_strategy(8)) {
            let v = QuatVector::new(v).unwrap();
            let apply = |k, x: &QuatVector| quat_apply(op(k, 8), x).unwrap();
            for k in Structure::ALL {
                let kk = apply(k, &apply(k, &v));
                for (a, b) in kk.as_slice().iter().zip(v.as_slice()) {
                    prop_assert_eq!(*a, -*b);
                }
                prop_assert!((apply(k, &v).dot(&apply(k, &v)) - v.dot(&v)).abs() <= 1e-12 * v.dot(&v).max(1.0));
            }
            let ij = apply(Structure::I, &apply(Structure::J, &v));
            prop_assert_eq!(ij, apply(Structure::K, &v));
            let ijk = apply(Structure::I, &apply(Structure::J, &apply(Structure::K, &v)));
            for (a, b) in ijk.as_slice().iter().zip(v.as_slice()) {
                prop_assert_eq!(*a, -*b);
            }
        }

        #[test]
        fn l_is_self_adjoint(a in form_strategy(8), b in form_strategy(8)) {
            let la = l_apply(&a).unwrap();
            let lb = l_apply(&b).unwrap();
            let lhs: f64 = la.matrix().component_mul(b.matrix()).sum();
            let rhs: f64 = a.matrix().component_mul(lb.matrix()).sum();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0));
        }

        #[test]
        fn hhermitian_split(b in form_strategy(8)) {
            let bh = project_hhermitian(&b).unwrap();
            let bp = b.sub(&bh);
            let scale = b.max_abs().max(1.0);
            prop_assert!(l_apply(&bh).unwrap().distance(&bh.scale(3.0)) <= 1e-12 * scale);
            prop_assert!(l_apply(&bp).unwrap().distance(&bp.scale(-1.0)) <= 1e-12 * scale);
            prop_assert!(project_hhermitian(&bh).unwrap().distance(&bh) <= 1e-12 * scale);
            prop_assert!(is_hhermitian(&bh, 1e-10 * scale));
        }
    }
}
