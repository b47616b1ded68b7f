//! Small dense matrices over [`HyperDual`].

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hyperdual::HyperDual;
use crate::quatlin::Structure;

#[derive(Clone, Debug, PartialEq)]
pub struct HMat {
    n: usize,
    a: Vec<HyperDual>,
}

impl HMat {
    pub fn zeros(n: usize) -> Self {
        HMat {
            n,
            a: vec![HyperDual::ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = HyperDual::cst(1.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> HyperDual) -> Self {
        let mut a = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                a.push(f(i, j));
            }
        }
        HMat { n, a }
    }

    pub fn from_real(m: &DMatrix<f64>) -> Self {
        Self::from_fn(m.nrows(), |i, j| HyperDual::cst(m[(i, j)]))
    }

    /// Constant matrix of a standard structure.
    pub fn structure(kind: Structure, n: usize) -> Self {
        Self::from_real(&kind.matrix(n))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn re(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self[(i, j)].re())
    }

    pub fn map(&self, f: impl Fn(HyperDual) -> HyperDual) -> Self {
        HMat {
            n: self.n,
            a: self.a.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn add(&self, o: &HMat) -> Self {
        HMat {
            n: self.n,
            a: self.a.iter().zip(&o.a).map(|(&x, &y)| x + y).collect(),
        }
    }

    pub fn sub(&self, o: &HMat) -> Self {
        HMat {
            n: self.n,
            a: self.a.iter().zip(&o.a).map(|(&x, &y)| x - y).collect(),
        }
    }

    pub fn scale(&self, s: HyperDual) -> Self {
        self.map(|v| v * s)
    }

    pub fn mul(&self, o: &HMat) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let v = self[(i, k)];
                if v == HyperDual::ZERO {
                    continue;
                }
                for j in 0..n {
                    out.a[i * n + j] += v * o[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[HyperDual]) -> Vec<HyperDual> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// `vᵀ M` as a row vector.
    pub fn vec_mul(&self, v: &[HyperDual]) -> Vec<HyperDual> {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| v[i] * self[(i, j)]).sum())
            .collect()
    }

    /// Gauss-Jordan inverse, pivoting on real parts.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.a.iter().fold(0.0f64, |m, v| m.max(v.re().abs()));
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&r, &s| a[(r, col)].re().abs().total_cmp(&a[(s, col)].re().abs()))
                .unwrap();
            if a[(piv, col)].re().abs() <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
                return Err(Error::SingularMetric { cond: f64::INFINITY });
            }
            if piv != col {
                for j in 0..n {
                    a.a.swap(piv * n + j, col * n + j);
                    inv.a.swap(piv * n + j, col * n + j);
                }
            }
            let p = a[(col, col)].recip();
            for j in 0..n {
                a.a[col * n + j] *= p;
                inv.a[col * n + j] *= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f == HyperDual::ZERO {
                    continue;
                }
                for j in 0..n {
                    let (x, y) = (a[(col, j)], inv[(col, j)]);
                    a.a[r * n + j] -= f * x;
                    inv.a[r * n + j] -= f * y;
                }
            }
        }
        Ok(inv)
    }
}

impl std::ops::Index<(usize, usize)> for HMat {
    type Output = HyperDual;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &HyperDual {
        &self.a[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for HMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut HyperDual {
        &mut self.a[i * self.n + j]
    }
}
