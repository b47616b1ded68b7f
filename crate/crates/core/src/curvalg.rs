//! Pointwise algebra of 4-tensors on ℝ⁴ⁿ with the Euclidean block metric.
//!
//! Slot convention: `R[(x, y, z, w)] = R(e_x, e_y, e_z, e_w)`. Curvature
//! tensors are lowered with `g(R(X,Y)Z, W) = R(X,Y,Z,W)`, and the scalar
//! curvature is `s = Σ R(e_i, e_j, e_j, e_i)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quatlin::{l_apply, BilinearForm, QuatVector, Structure, SymmetryTag};

/// Largest supported quaternionic dimension.
pub const MAX_N: usize = 3;

/// Default relative tolerance for symmetry profiles.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Dense rank-4 tensor of extent `dim` in every slot.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvTensor {
    dim: usize,
    data: Vec<f64>,
}

impl CurvTensor {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim <= 4 * MAX_N, "tensor extent {dim} exceeds cap {}", 4 * MAX_N);
        CurvTensor {
            dim,
            data: vec![0.0; dim.pow(4)],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize, usize) -> f64) -> Self {
        let mut t = Self::zeros(dim);
        let mut idx = 0;
        for x in 0..dim {
            for y in 0..dim {
                for z in 0..dim {
                    for w in 0..dim {
                        t.data[idx] = f(x, y, z, w);
                        idx += 1;
                    }
                }
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn idx(&self, x: usize, y: usize, z: usize, w: usize) -> usize {
        ((x * self.dim + y) * self.dim + z) * self.dim + w
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, z: usize, w: usize) -> f64 {
        self.data[self.idx(x, y, z, w)]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, z: usize, w: usize, v: f64) {
        let i = self.idx(x, y, z, w);
        self.data[i] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |a, &v| a.max(v.abs()))
    }

    pub fn distance(&self, other: &CurvTensor) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0f64, |a, (x, y)| a.max((x - y).abs()))
    }

    pub fn scale(&self, s: f64) -> Self {
        CurvTensor {
            dim: self.dim,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &CurvTensor) -> Self {
        CurvTensor {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &CurvTensor) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// `(X, Y, Z, W) ↦ Φ(X, Y) Ψ(Z, W)`.
    pub fn outer(phi: &BilinearForm, psi: &BilinearForm) -> Self {
        Self::from_fn(phi.dim(), |x, y, z, w| phi.get(x, y) * psi.get(z, w))
    }

    /// Change of basis: `T'(a,b,c,d) = Σ T(i,j,k,l) M[i][a] M[j][b] M[k][c] M[l][d]`.
    pub fn transform(&self, m: &nalgebra::DMatrix<f64>) -> Self {
        let d = self.dim;
        let mut cur = self.data.clone();
        // contract one slot at a time; the contracted slot moves to the back
        for _ in 0..4 {
            let mut next = vec![0.0; d.pow(4)];
            for i in 0..d {
                for rest in 0..d.pow(3) {
                    let v = cur[i * d.pow(3) + rest];
                    if v == 0.0 {
                        continue;
                    }
                    for a in 0..d {
                        next[rest * d + a] += v * m[(i, a)];
                    }
                }
            }
            cur = next;
        }
        CurvTensor { dim: d, data: cur }
    }

    /// Ricci contraction `Ric(Y, Z) = Σ_i R(e_i, Y, Z, e_i)`.
    pub fn ricci(&self) -> BilinearForm {
        let d = self.dim;
        BilinearForm::from_fn(d, |y, z| (0..d).map(|i| self.get(i, y, z, i)).sum())
    }

    pub fn scalar_curvature(&self) -> f64 {
        let d = self.dim;
        let mut s = 0.0;
        for i in 0..d {
            for j in 0..d {
                s += self.get(i, j, j, i);
            }
        }
        s
    }
}

/// Dense rank-3 tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3 {
    dim: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(dim: usize) -> Self {
        Tensor3 {
            dim,
            data: vec![0.0; dim.pow(3)],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(dim.pow(3));
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    data.push(f(a, b, c));
                }
            }
        }
        Tensor3 { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.data[(a * self.dim + b) * self.dim + c]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |a, &v| a.max(v.abs()))
    }

    pub fn distance(&self, other: &Tensor3) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0f64, |a, (x, y)| a.max((x - y).abs()))
    }

    /// Contraction of the first slot with `x`.
    pub fn contract_first(&self, x: &[f64]) -> BilinearForm {
        let d = self.dim;
        BilinearForm::from_fn(d, |b, c| (0..d).map(|a| x[a] * self.get(a, b, c)).sum())
    }
}

fn check_dims(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// `ΠR(X,Y,Z,W) = R(X,Y,Z,W) + R(Y,X,W,Z) − R(W,Z,X,Y) − R(Z,W,Y,X)`.
pub fn big_pi(r: &CurvTensor) -> CurvTensor {
    CurvTensor::from_fn(r.dim(), |x, y, z, w| {
        r.get(x, y, z, w) + r.get(y, x, w, z) - r.get(w, z, x, y) - r.get(z, w, y, x)
    })
}

/// `τR(X,Y,Z,W) = R(Y,Z,X,W)`.
pub fn tau_apply(r: &CurvTensor) -> CurvTensor {
    CurvTensor::from_fn(r.dim(), |x, y, z, w| r.get(y, z, x, w))
}

/// `c(Φ, R)(X,Y,Z,W) = R(X,Y,Z,FW)` with `⟨FX, Y⟩ = Φ(X, Y)` (Euclidean).
pub fn contract_c(phi: &BilinearForm, r: &CurvTensor) -> Result<CurvTensor> {
    check_dims(r.dim(), phi.dim())?;
    let d = r.dim();
    Ok(CurvTensor::from_fn(d, |x, y, z, w| {
        (0..d).map(|v| r.get(x, y, z, v) * phi.get(w, v)).sum()
    }))
}

/// As [`contract_c`], with `F` dualized through a general metric: `F^k_w = g^{kl} Φ_{wl}`.
pub fn contract_c_with_metric(phi: &BilinearForm, r: &CurvTensor, metric_inverse: &BilinearForm) -> Result<CurvTensor> {
    check_dims(r.dim(), phi.dim())?;
    check_dims(r.dim(), metric_inverse.dim())?;
    let d = r.dim();
    let f = BilinearForm::from_fn(d, |k, w| (0..d).map(|l| metric_inverse.get(k, l) * phi.get(w, l)).sum());
    Ok(CurvTensor::from_fn(d, |x, y, z, w| {
        (0..d).map(|k| r.get(x, y, z, k) * f.get(k, w)).sum()
    }))
}

/// `ι_X R (Y, Z, W) = R(X, Y, Z, W)`.
pub fn iota_contract(x: &QuatVector, r: &CurvTensor) -> Result<Tensor3> {
    check_dims(r.dim(), x.dim())?;
    let d = r.dim();
    let xs = x.as_slice();
    Ok(Tensor3::from_fn(d, |a, b, c| {
        (0..d).map(|i| xs[i] * r.get(i, a, b, c)).sum()
    }))
}

/// `(1 + L)` applied to the (Z, W) slice for every fixed (X, Y).
fn one_plus_l_last_pair(t: &CurvTensor) -> CurvTensor {
    CurvTensor::from_fn(t.dim(), |x, y, z, w| {
        let mut v = t.get(x, y, z, w);
        for k in Structure::ALL {
            let (sz, pz) = k.basis_image(z);
            let (sw, pw) = k.basis_image(w);
            v += sz * sw * t.get(x, y, pz, pw);
        }
        v
    })
}

/// One named symmetry predicate together with its measured residual.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryFlag {
    pub residual: f64,
    pub holds: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorSymmetryProfile {
    pub skew_first_pair: SymmetryFlag,
    pub skew_second_pair: SymmetryFlag,
    pub pair_symmetric: SymmetryFlag,
    pub bianchi_first_three: SymmetryFlag,
    pub hhermitian_first_pair: SymmetryFlag,
    pub hhermitian_second_pair: SymmetryFlag,
    pub tolerance: f64,
}

impl TensorSymmetryProfile {
    /// Residuals are max-entry norms divided by `scale` (taken as 1 when zero).
    pub fn evaluate(r: &CurvTensor, tol: f64, scale: f64) -> Self {
        let d = r.dim();
        let scale = if scale > 0.0 { scale } else { 1.0 };
        let mut res = [0.0f64; 6];
        for x in 0..d {
            for y in 0..d {
                for z in 0..d {
                    for w in 0..d {
                        let v = r.get(x, y, z, w);
                        res[0] = res[0].max((v + r.get(y, x, z, w)).abs());
                        res[1] = res[1].max((v + r.get(x, y, w, z)).abs());
                        res[2] = res[2].max((v - r.get(z, w, x, y)).abs());
                        res[3] = res[3].max((v + r.get(y, z, x, w) + r.get(z, x, y, w)).abs());
                        for k in Structure::ALL {
                            let (sx, px) = k.basis_image(x);
                            let (sy, py) = k.basis_image(y);
                            let (sz, pz) = k.basis_image(z);
                            let (sw, pw) = k.basis_image(w);
                            res[4] = res[4].max((sx * sy * r.get(px, py, z, w) - v).abs());
                            res[5] = res[5].max((sz * sw * r.get(x, y, pz, pw) - v).abs());
                        }
                    }
                }
            }
        }
        let flag = |r: f64| {
            let residual = r / scale;
            SymmetryFlag {
                residual,
                holds: residual <= tol,
            }
        };
        TensorSymmetryProfile {
            skew_first_pair: flag(res[0]),
            skew_second_pair: flag(res[1]),
            pair_symmetric: flag(res[2]),
            bianchi_first_three: flag(res[3]),
            hhermitian_first_pair: flag(res[4]),
            hhermitian_second_pair: flag(res[5]),
            tolerance: tol,
        }
    }

    /// Double skew symmetry, pair symmetry and the first Bianchi identity.
    pub fn is_curvature(&self) -> bool {
        self.skew_first_pair.holds
            && self.skew_second_pair.holds
            && self.pair_symmetric.holds
            && self.bianchi_first_three.holds
    }

    pub fn is_hyperkahler(&self) -> bool {
        self.is_curvature() && self.hhermitian_first_pair.holds && self.hhermitian_second_pair.holds
    }

    pub fn curvature_residual(&self) -> f64 {
        self.skew_first_pair
            .residual
            .max(self.skew_second_pair.residual)
            .max(self.pair_symmetric.residual)
            .max(self.bianchi_first_three.residual)
    }

    pub fn hyperkahler_residual(&self) -> f64 {
        self.curvature_residual()
            .max(self.hhermitian_first_pair.residual)
            .max(self.hhermitian_second_pair.residual)
    }
}

/// Full symmetry profile relative to `‖R‖_max`; overall pass is [`TensorSymmetryProfile::is_hyperkahler`].
pub fn is_hyperkahler_curvature(r: &CurvTensor, tol: f64) -> TensorSymmetryProfile {
    TensorSymmetryProfile::evaluate(r, tol, r.max_abs())
}

fn precondition(check: &str, flag: SymmetryFlag) -> Result<()> {
    if flag.holds {
        Ok(())
    } else {
        Err(Error::Precondition {
            check: check.to_string(),
            residual: flag.residual,
        })
    }
}

fn form_flag(residual: f64, scale: f64, tol: f64) -> SymmetryFlag {
    let residual = if scale > 0.0 { residual / scale } else { residual };
    SymmetryFlag {
        residual,
        holds: residual <= tol,
    }
}

fn skew_flag(b: &BilinearForm, tol: f64) -> SymmetryFlag {
    form_flag(b.distance(&b.transpose().scale(-1.0)), b.max_abs(), tol)
}

fn hhermitian_flag(b: &BilinearForm, tol: f64) -> SymmetryFlag {
    form_flag(crate::quatlin::hhermitian_residual(b), b.max_abs(), tol)
}

/// Projection onto algebraic curvature tensors, `πR = ¼ΠR`.
///
/// Valid for tensors skew in the first pair that satisfy the Bianchi
/// identity in the first three slots; anything else is rejected.
pub fn pi_project(r: &CurvTensor) -> Result<CurvTensor> {
    let prof = is_hyperkahler_curvature(r, DEFAULT_TOL);
    precondition("skew in first pair", prof.skew_first_pair)?;
    precondition("Bianchi in first three slots", prof.bianchi_first_three)?;
    Ok(big_pi(r).scale(0.25))
}

/// Hyper-Kähler projection of `c(Φ, R)`, `π_h c(Φ,R) = ¼Π c(Φ,R)`.
pub fn pi_h_c(phi: &BilinearForm, r: &CurvTensor) -> Result<CurvTensor> {
    check_dims(r.dim(), phi.dim())?;
    let prof = is_hyperkahler_curvature(r, DEFAULT_TOL);
    precondition("R skew in first pair", prof.skew_first_pair)?;
    precondition("R Bianchi in first three slots", prof.bianchi_first_three)?;
    precondition("R ℍ-Hermitian in first pair", prof.hhermitian_first_pair)?;
    precondition("R ℍ-Hermitian in second pair", prof.hhermitian_second_pair)?;
    precondition("Φ ℍ-Hermitian", hhermitian_flag(phi, DEFAULT_TOL))?;
    Ok(big_pi(&contract_c(phi, r)?).scale(0.25))
}

/// `πτ Φ⊗Ψ` for two skew or two symmetric forms.
pub fn pi_tau_outer(phi: &BilinearForm, psi: &BilinearForm) -> Result<CurvTensor> {
    check_dims(phi.dim(), psi.dim())?;
    let d = phi.dim();
    if phi.max_abs() == 0.0 || psi.max_abs() == 0.0 {
        return Ok(CurvTensor::zeros(d));
    }
    let pt = big_pi(&tau_apply(&CurvTensor::outer(phi, psi)));
    match (phi.symmetry_tag(), psi.symmetry_tag()) {
        (SymmetryTag::Skew, SymmetryTag::Skew) => {
            let sym = CurvTensor::outer(phi, psi).add(&CurvTensor::outer(psi, phi));
            Ok(sym.scale(-2.0).add(&pt).scale(1.0 / 12.0))
        }
        (SymmetryTag::Symmetric, SymmetryTag::Symmetric) => Ok(pt.scale(0.25)),
        (a, b) => Err(Error::MixedSymmetry(format!("{a:?} ⊗ {b:?}"))),
    }
}

/// `π_h τ Φ⊗Ψ` for `Φ, Ψ` skew and ℍ-Hermitian.
pub fn pi_h_tau_outer(phi: &BilinearForm, psi: &BilinearForm) -> Result<CurvTensor> {
    check_dims(phi.dim(), psi.dim())?;
    for (name, b) in [("Φ", phi), ("Ψ", psi)] {
        precondition(&format!("{name} skew"), skew_flag(b, DEFAULT_TOL))?;
        precondition(&format!("{name} ℍ-Hermitian"), hhermitian_flag(b, DEFAULT_TOL))?;
    }
    let sym = CurvTensor::outer(phi, psi).add(&CurvTensor::outer(psi, phi));
    let pt = big_pi(&tau_apply(&CurvTensor::outer(phi, psi)));
    Ok(sym.scale(-2.0).add(&one_plus_l_last_pair(&pt)).scale(1.0 / 24.0))
}

/// Curvature tensor of the quaternionic projective model in the block layout.
pub fn build_r0(n: usize) -> Result<CurvTensor> {
    if n == 0 || n > MAX_N {
        return Err(Error::OutOfCap { n, max: MAX_N });
    }
    let d = 4 * n;
    let g = BilinearForm::euclidean(d);
    let pt = big_pi(&tau_apply(&CurvTensor::outer(&g, &g)));
    let first = one_plus_l_last_pair(&pt).scale(0.5);
    // L(X♭ ⊗ Z♭)(Y, W) = Σ_A ⟨X, AY⟩⟨Z, AW⟩
    let second = CurvTensor::from_fn(d, |x, y, z, w| {
        Structure::ALL
            .iter()
            .map(|k| {
                let (sy, py) = k.basis_image(y);
                let (sw, pw) = k.basis_image(w);
                if py == x && pw == z {
                    sy * sw
                } else {
                    0.0
                }
            })
            .sum()
    });
    Ok(first.sub(&second.scale(2.0)))
}

/// Model scalar curvature `s₀ = 16n(n + 2)`.
pub fn model_scalar_curvature(n: usize) -> f64 {
    16.0 * n as f64 * (n as f64 + 2.0)
}

/// The three curvature terms driving `∇_ξ R′`.
#[derive(Clone, Debug)]
pub struct ATerms {
    pub a1: CurvTensor,
    pub a2: CurvTensor,
    pub a3: CurvTensor,
}

/// `A₁ = −½Π c((1+L)φ⊗φ, R′)`, `A₂ = −Π c(Φ, R′)`, `A₃ = 12 π_h τ Φ⊗Φ`.
pub fn build_a_terms(lee: &[f64], phi: &BilinearForm, r_prime: &CurvTensor) -> Result<ATerms> {
    let d = r_prime.dim();
    check_dims(d, lee.len())?;
    check_dims(d, phi.dim())?;
    let prof = TensorSymmetryProfile::evaluate(r_prime, DEFAULT_TOL, r_prime.max_abs());
    precondition(
        "R′ hyper-Kähler curvature",
        SymmetryFlag {
            residual: prof.hyperkahler_residual(),
            holds: prof.is_hyperkahler(),
        },
    )?;
    precondition("Φ skew", skew_flag(phi, DEFAULT_TOL))?;
    precondition("Φ ℍ-Hermitian", hhermitian_flag(phi, DEFAULT_TOL))?;

    let pp = BilinearForm::outer(lee, lee);
    let pp = pp.add(&l_apply(&pp)?);
    let a1 = big_pi(&contract_c(&pp, r_prime)?).scale(-0.5);
    let a2 = big_pi(&contract_c(phi, r_prime)?).scale(-1.0);
    let a3 = if phi.max_abs() == 0.0 {
        CurvTensor::zeros(d)
    } else {
        pi_h_tau_outer(phi, phi)?.scale(12.0)
    };
    Ok(ATerms { a1, a2, a3 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quatlin::project_hhermitian;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_tensor(rng: &mut ChaCha8Rng, d: usize) -> CurvTensor {
        CurvTensor::from_fn(d, |_, _, _, _| rng.random_range(-1.0..1.0))
    }

    fn rand_form(rng: &mut ChaCha8Rng, d: usize) -> BilinearForm {
        BilinearForm::from_fn(d, |_, _| rng.random_range(-1.0..1.0))
    }

    fn rand_s2e(rng: &mut ChaCha8Rng, d: usize) -> BilinearForm {
        project_hhermitian(&rand_form(rng, d).skew_part()).unwrap()
    }

    /// Bianchi residual by explicit cyclic sum, independent of `tau_apply`.
    fn bianchi_oracle(r: &CurvTensor) -> f64 {
        let d = r.dim();
        let mut m = 0.0f64;
        for x in 0..d {
            for y in 0..d {
                for z in 0..d {
                    for w in 0..d {
                        let s = r.get(x, y, z, w) + r.get(y, z, x, w) + r.get(z, x, y, w);
                        m = m.max(s.abs());
                    }
                }
            }
        }
        m
    }

    fn sphere_tensor(d: usize) -> CurvTensor {
        let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        CurvTensor::from_fn(d, |x, y, z, w| delta(y, z) * delta(x, w) - delta(x, z) * delta(y, w))
    }

    #[test]
    fn big_pi_entry_matches_index_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = rand_tensor(&mut rng, 4);
        let pr = big_pi(&r);
        let expect = r.get(0, 1, 2, 3) + r.get(1, 0, 3, 2) - r.get(3, 2, 0, 1) - r.get(2, 3, 1, 0);
        assert_eq!(pr.get(0, 1, 2, 3), expect);
    }

    #[test]
    fn big_pi_on_curvature_and_symmetric_tensors() {
        let r = build_r0(1).unwrap();
        assert!(big_pi(&r).distance(&r.scale(4.0)) < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
        let sym = CurvTensor::from_fn(4, |x, y, z, w| v[x] * v[y] * v[z] * v[w]);
        assert!(big_pi(&sym).max_abs() < 1e-15);
    }

    #[test]
    fn tau_has_order_three() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = rand_tensor(&mut rng, 4);
        assert_eq!(tau_apply(&tau_apply(&tau_apply(&r))), r);
        let g = BilinearForm::euclidean(4);
        let t = tau_apply(&CurvTensor::outer(&g, &g));
        assert_eq!(t.get(0, 1, 0, 1), 0.0);
        let r0 = build_r0(1).unwrap();
        let cyc = r0.add(&tau_apply(&r0)).add(&tau_apply(&tau_apply(&r0)));
        assert!(cyc.max_abs() < 1e-14);
    }

    #[test]
    fn contract_c_cases() {
        let r0 = build_r0(1).unwrap();
        assert_eq!(contract_c(&BilinearForm::zeros(4), &r0).unwrap().max_abs(), 0.0);
        assert!(contract_c(&BilinearForm::euclidean(4), &r0).unwrap().distance(&r0) < 1e-15);
        // Φ = Ω_I: F = I, so c(Ω_I, R)(X,Y,Z,W) = R(X,Y,Z,IW)
        let om = BilinearForm::kahler(Structure::I, 4);
        let c = contract_c(&om, &r0).unwrap();
        let imat = Structure::I.matrix(4);
        for (x, y, z, w) in [(0, 1, 0, 1), (0, 1, 2, 3), (1, 2, 3, 0), (3, 3, 1, 2)] {
            let oracle: f64 = (0..4).map(|v| r0.get(x, y, z, v) * imat[(v, w)]).sum();
            assert!((c.get(x, y, z, w) - oracle).abs() < 1e-15);
        }
        let ginv = BilinearForm::euclidean(4);
        assert!(contract_c_with_metric(&om, &r0, &ginv).unwrap().distance(&c) < 1e-15);
    }

    #[test]
    fn iota_contractions() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let r = rand_tensor(&mut rng, 4);
        let zero = QuatVector::zeros(4).unwrap();
        assert_eq!(iota_contract(&zero, &r).unwrap().max_abs(), 0.0);
        let e0 = QuatVector::basis(4, 0).unwrap();
        let s = iota_contract(&e0, &r).unwrap();
        assert_eq!(s.get(1, 2, 3), r.get(0, 1, 2, 3));
        let x: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
        let y: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
        let two = iota_contract(&QuatVector::new(x.clone()).unwrap(), &r)
            .unwrap()
            .contract_first(&y);
        for z in 0..4 {
            for w in 0..4 {
                let mut oracle = 0.0;
                for a in 0..4 {
                    for b in 0..4 {
                        oracle += x[a] * y[b] * r.get(a, b, z, w);
                    }
                }
                assert!((two.get(z, w) - oracle).abs() < 1e-14);
            }
        }
        assert!(iota_contract(&QuatVector::zeros(8).unwrap(), &r).is_err());
    }

    #[test]
    fn pi_project_contracts() {
        let r0 = build_r0(2).unwrap();
        assert!(pi_project(&r0).unwrap().distance(&r0) < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = rand_form(&mut rng, 4).skew_part();
        let b = rand_form(&mut rng, 4).skew_part();
        // Φ(X,Y)Ψ(Z,W) is skew in the first pair but not Bianchi: its τ-symmetrization is
        let t = CurvTensor::outer(&a, &b);
        let bianchi_free = t.sub(&t.add(&tau_apply(&t)).add(&tau_apply(&tau_apply(&t))).scale(1.0 / 3.0));
        let p = pi_project(&bianchi_free).unwrap();
        assert!(bianchi_oracle(&p) < 1e-14);
        assert!(pi_project(&p).unwrap().distance(&p) < 1e-14);
        assert!(matches!(pi_project(&t), Err(Error::Precondition { .. })));
    }

    #[test]
    fn pi_tau_outer_cases() {
        let g = BilinearForm::euclidean(4);
        let out = pi_tau_outer(&g, &g).unwrap();
        assert!(out.distance(&sphere_tensor(4).scale(0.5)) < 1e-15);
        assert!(bianchi_oracle(&out) < 1e-15);
        let z = BilinearForm::zeros(4);
        assert_eq!(pi_tau_outer(&z, &z).unwrap().max_abs(), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = rand_form(&mut rng, 8).skew_part();
        let b = rand_form(&mut rng, 8).skew_part();
        let out = pi_tau_outer(&a, &b).unwrap();
        assert!(bianchi_oracle(&out) < 1e-12);
        assert!(is_hyperkahler_curvature(&out, 1e-12).is_curvature());
        let g8 = BilinearForm::euclidean(8);
        assert!(matches!(pi_tau_outer(&a, &g8), Err(Error::MixedSymmetry(_))));
        assert!(matches!(pi_tau_outer(&a, &g), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn pi_h_tau_outer_is_hyperkahler() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let z = BilinearForm::zeros(8);
        assert_eq!(pi_h_tau_outer(&z, &z).unwrap().max_abs(), 0.0);
        let phi = rand_s2e(&mut rng, 8);
        let out = pi_h_tau_outer(&phi, &phi).unwrap();
        let prof = is_hyperkahler_curvature(&out, 1e-10);
        assert!(prof.is_hyperkahler(), "{prof:?}");
        // scalar curvature against a direct index-loop evaluation of the two-term formula
        let d = 8;
        let mut s_oracle = 0.0;
        for i in 0..d {
            for j in 0..d {
                let (x, y, z, w) = (i, j, j, i);
                let tphi = |a: usize, b: usize, c: usize, e: usize| phi.get(b, c) * phi.get(a, e);
                let pit = |a, b, c, e| tphi(a, b, c, e) + tphi(b, a, e, c) - tphi(e, c, a, b) - tphi(c, e, b, a);
                let mut v = -4.0 * phi.get(x, y) * phi.get(z, w) + pit(x, y, z, w);
                for k in Structure::ALL {
                    let m = k.matrix(d);
                    for p in 0..d {
                        for q in 0..d {
                            v += m[(p, z)] * m[(q, w)] * pit(x, y, p, q);
                        }
                    }
                }
                s_oracle += v / 24.0;
            }
        }
        assert!((out.scalar_curvature() - s_oracle).abs() < 1e-12);
        let g = BilinearForm::euclidean(8);
        assert!(pi_h_tau_outer(&g, &g).is_err());
        let om = BilinearForm::kahler(Structure::I, 8);
        assert!(pi_h_tau_outer(&om, &om).is_err());
    }

    #[test]
    fn r0_scalar_curvature_and_profile() {
        for n in 1..=3 {
            let r0 = build_r0(n).unwrap();
            let s = r0.scalar_curvature();
            assert!((s - model_scalar_curvature(n)).abs() < 1e-10 * s);
            let ric = r0.ricci();
            let expect = BilinearForm::euclidean(4 * n).scale(s / (4 * n) as f64);
            assert!(ric.distance(&expect) < 1e-12);
            let prof = is_hyperkahler_curvature(&r0, 1e-12);
            assert!(prof.is_curvature());
            assert!(!prof.hhermitian_first_pair.holds);
        }
        assert_eq!(model_scalar_curvature(1), 48.0);
        assert_eq!(model_scalar_curvature(2), 128.0);
        assert!(matches!(build_r0(4), Err(Error::OutOfCap { .. })));
        assert!(build_r0(0).is_err());
    }

    #[test]
    fn r0_matches_closed_form_model() {
        // R(X,Y,Z,W) = ⟨Y,Z⟩⟨X,W⟩ − ⟨X,Z⟩⟨Y,W⟩ + Σ_A [Ω_A(Y,Z)Ω_A(X,W) − Ω_A(X,Z)Ω_A(Y,W) − 2Ω_A(X,Y)Ω_A(Z,W)]
        let d = 8;
        let oms: Vec<_> = Structure::ALL.iter().map(|&k| BilinearForm::kahler(k, d)).collect();
        let model = sphere_tensor(d).add(&CurvTensor::from_fn(d, |x, y, z, w| {
            oms.iter()
                .map(|o| o.get(y, z) * o.get(x, w) - o.get(x, z) * o.get(y, w) - 2.0 * o.get(x, y) * o.get(z, w))
                .sum()
        }));
        assert!(build_r0(2).unwrap().distance(&model) < 1e-14);
    }

    #[test]
    fn pi_h_c_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let phi = rand_s2e(&mut rng, 8);
        let hk = pi_h_tau_outer(&phi, &phi).unwrap();
        let g = BilinearForm::euclidean(8);
        assert!(pi_h_c(&g, &hk).unwrap().distance(&hk) < 1e-14);
        assert_eq!(pi_h_c(&BilinearForm::zeros(8), &hk).unwrap().max_abs(), 0.0);
        let sym = project_hhermitian(&rand_form(&mut rng, 8).symmetric_part()).unwrap();
        let out = pi_h_c(&sym, &hk).unwrap();
        assert!(is_hyperkahler_curvature(&out, 1e-10).is_hyperkahler());
        let r0 = build_r0(2).unwrap();
        assert!(pi_h_c(&g, &r0).is_err());
    }

    #[test]
    fn a_terms() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let phi1 = rand_s2e(&mut rng, 8);
        let phi2 = rand_s2e(&mut rng, 8);
        let rp = pi_h_tau_outer(&phi1, &phi1)
            .unwrap()
            .add(&pi_h_tau_outer(&phi2, &phi2).unwrap());
        let zero_lee = vec![0.0; 8];
        let z = BilinearForm::zeros(8);
        let t = build_a_terms(&zero_lee, &z, &rp).unwrap();
        assert_eq!(t.a1.max_abs() + t.a2.max_abs() + t.a3.max_abs(), 0.0);
        let lee: Vec<f64> = (0..8).map(|_| rng.random_range(-1.0..1.0)).collect();
        let t = build_a_terms(&lee, &z, &rp).unwrap();
        assert_eq!(t.a2.max_abs(), 0.0);
        assert_eq!(t.a3.max_abs(), 0.0);
        assert!(t.a1.max_abs() > 1e-3);
        let big_phi = rand_s2e(&mut rng, 8);
        let t = build_a_terms(&lee, &big_phi, &rp).unwrap();
        for a in [&t.a1, &t.a2, &t.a3] {
            assert!(is_hyperkahler_curvature(a, 1e-10).is_hyperkahler());
        }
    }

    #[test]
    fn linearity_spot_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let r = rand_tensor(&mut rng, 4);
        let s = rand_tensor(&mut rng, 4);
        let (a, b) = (1.7, -0.3);
        let lhs = big_pi(&r.scale(a).add(&s.scale(b)));
        let rhs = big_pi(&r).scale(a).add(&big_pi(&s).scale(b));
        assert!(lhs.distance(&rhs) < 1e-14);
        let phi = rand_form(&mut rng, 4);
        let lhs = contract_c(&phi, &r.scale(a).add(&s.scale(b))).unwrap();
        let rhs = contract_c(&phi, &r)
            .unwrap()
            .scale(a)
            .add(&contract_c(&phi, &s).unwrap().scale(b));
        assert!(lhs.distance(&rhs) < 1e-13);
    }

    #[test]
    fn transform_matches_index_loops() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let r = rand_tensor(&mut rng, 4);
        let m = nalgebra::DMatrix::from_fn(4, 4, |_, _| rng.random_range(-1.0..1.0));
        let t = r.transform(&m);
        let (a, b, c, d) = (0, 3, 1, 2);
        let mut oracle = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        oracle += r.get(i, j, k, l) * m[(i, a)] * m[(j, b)] * m[(k, c)] * m[(l, d)];
                    }
                }
            }
        }
        assert!((t.get(a, b, c, d) - oracle).abs() < 1e-13);
    }
}
