//! First-order geometry of a chart at hyper-dual coordinates.
//!
//! Everything here needs exactly one derivative of the metric and the
//! structures, taken with a fresh infinitesimal above those already carried
//! by the coordinates. Evaluating at seeded coordinates therefore yields
//! the derivatives of these quantities as well.

use super::chart::MetricChart;
use super::hmat::HMat;
use crate::error::Result;
use crate::hyperdual::{next_bit, seeded, HyperDual};

#[derive(Clone, Debug)]
pub struct Local {
    pub dim: usize,
    pub g: HMat,
    pub ginv: HMat,
    /// `dg[k] = ∂_k g`.
    pub dg: Vec<HMat>,
    /// `Γ^k_ij` at `(k·d + i)·d + j`.
    pub gamma: Vec<HyperDual>,
    /// Structure matrices `A^i_j`, in the order I, J, K.
    pub structs: [HMat; 3],
    pub dstructs: [Vec<HMat>; 3],
    /// Kähler forms `Ω_A = Aᵀ g`.
    pub omega: [HMat; 3],
    pub domega: [Vec<HMat>; 3],
    /// `nabla[A][k] = ∇_k A`.
    pub nabla: [Vec<HMat>; 3],
    /// Connection forms in the order a, b, c.
    pub abc: [Vec<HyperDual>; 3],
    pub lee: Vec<HyperDual>,
}

#[inline]
pub fn gidx(d: usize, k: usize, i: usize, j: usize) -> usize {
    (k * d + i) * d + j
}

/// Value and first partials of a vector-valued function of the coordinates.
pub fn jet1<F>(x: &[HyperDual], f: F) -> Result<(Vec<HyperDual>, Vec<Vec<HyperDual>>)>
where
    F: Fn(&[HyperDual]) -> Result<Vec<HyperDual>>,
{
    let bit = next_bit(x);
    let mut value = None;
    let mut partials = Vec::with_capacity(x.len());
    for k in 0..x.len() {
        let out = f(&seeded(x, k, bit))?;
        if value.is_none() {
            value = Some(out.iter().map(|v| v.drop_eps(bit)).collect());
        }
        partials.push(out.iter().map(|v| v.eps(bit)).collect());
    }
    Ok((value.unwrap_or_default(), partials))
}

fn flatten(ms: &[&HMat]) -> Vec<HyperDual> {
    let mut out = Vec::new();
    for m in ms {
        let n = m.dim();
        for i in 0..n {
            for j in 0..n {
                out.push(m[(i, j)]);
            }
        }
    }
    out
}

fn unflatten(v: &[HyperDual], d: usize, count: usize) -> Vec<HMat> {
    (0..count)
        .map(|c| HMat::from_fn(d, |i, j| v[c * d * d + i * d + j]))
        .collect()
}

/// Trace of a product of two matrices.
fn trace_mul(a: &HMat, b: &HMat) -> HyperDual {
    let n = a.dim();
    let mut s = HyperDual::ZERO;
    for i in 0..n {
        for k in 0..n {
            s += a[(i, k)] * b[(k, i)];
        }
    }
    s
}

impl Local {
    pub fn compute(chart: &MetricChart, x: &[HyperDual]) -> Result<Local> {
        let d = chart.dim();
        let (val, parts) = jet1(x, |y| {
            let g = chart.metric_eval(y)?;
            let [i, j, k] = chart.structures_eval(y)?;
            Ok(flatten(&[&g, &i, &j, &k]))
        })?;
        let vals = unflatten(&val, d, 4);
        let g = vals[0].clone();
        let structs = [vals[1].clone(), vals[2].clone(), vals[3].clone()];
        let mut dg = Vec::with_capacity(d);
        let mut dstructs: [Vec<HMat>; 3] = Default::default();
        for p in &parts {
            let ms = unflatten(p, d, 4);
            dg.push(ms[0].clone());
            for a in 0..3 {
                dstructs[a].push(ms[a + 1].clone());
            }
        }
        let ginv = g.inverse()?;

        // Γ^k_ij = ½ g^{kl} (∂_i g_jl + ∂_j g_il − ∂_l g_ij)
        let mut lowered = vec![HyperDual::ZERO; d * d * d];
        for l in 0..d {
            for i in 0..d {
                for j in i..d {
                    let v = (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]) * 0.5;
                    lowered[gidx(d, l, i, j)] = v;
                    lowered[gidx(d, l, j, i)] = v;
                }
            }
        }
        let mut gamma = vec![HyperDual::ZERO; d * d * d];
        for k in 0..d {
            for l in 0..d {
                let gkl = ginv[(k, l)];
                if gkl == HyperDual::ZERO {
                    continue;
                }
                for i in 0..d {
                    for j in i..d {
                        gamma[gidx(d, k, i, j)] += gkl * lowered[gidx(d, l, i, j)];
                    }
                }
            }
            for i in 0..d {
                for j in 0..i {
                    gamma[gidx(d, k, i, j)] = gamma[gidx(d, k, j, i)];
                }
            }
        }

        let omega: [HMat; 3] = std::array::from_fn(|a| structs[a].transpose().mul(&g));
        let domega: [Vec<HMat>; 3] = std::array::from_fn(|a| {
            (0..d)
                .map(|k| {
                    dstructs[a][k]
                        .transpose()
                        .mul(&g)
                        .add(&structs[a].transpose().mul(&dg[k]))
                })
                .collect()
        });

        // (∇_k A)^i_j = ∂_k A^i_j + Γ^i_kl A^l_j − Γ^l_kj A^i_l
        let nabla: [Vec<HMat>; 3] = std::array::from_fn(|a| {
            let s = &structs[a];
            (0..d)
                .map(|k| {
                    let gk = HMat::from_fn(d, |i, l| gamma[gidx(d, i, k, l)]);
                    dstructs[a][k].add(&gk.mul(s)).sub(&s.mul(&gk))
                })
                .collect()
        });

        let nn = HyperDual::cst(d as f64).recip();
        let [si, sj, sk] = &structs;
        let mut abc: [Vec<HyperDual>; 3] = Default::default();
        for k in 0..d {
            abc[0].push(trace_mul(sj, &nabla[2][k]) * nn);
            abc[1].push(trace_mul(sk, &nabla[0][k]) * nn);
            abc[2].push(-trace_mul(sj, &nabla[0][k]) * nn);
        }

        // d*Ω_k = −g^{ij} (∇_i Ω)_jk, φ = ½ I d*Ω_I with (Iψ)_k = −ψ_l I^l_k
        let om = &omega[0];
        let mut codiff = vec![HyperDual::ZERO; d];
        for i in 0..d {
            for j in 0..d {
                let gij = ginv[(i, j)];
                if gij == HyperDual::ZERO {
                    continue;
                }
                for k in 0..d {
                    let mut v = domega[0][i][(j, k)];
                    for l in 0..d {
                        v -= gamma[gidx(d, l, i, j)] * om[(l, k)] + gamma[gidx(d, l, i, k)] * om[(j, l)];
                    }
                    codiff[k] -= gij * v;
                }
            }
        }
        let lee = (0..d)
            .map(|k| -0.5 * (0..d).map(|l| codiff[l] * si[(l, k)]).sum::<HyperDual>())
            .collect();

        Ok(Local {
            dim: d,
            g,
            ginv,
            dg,
            gamma,
            structs,
            dstructs,
            omega,
            domega,
            nabla,
            abc,
            lee,
        })
    }

    /// Apply `f` to every stored number, e.g. to split off one infinitesimal.
    pub fn map(&self, f: &dyn Fn(HyperDual) -> HyperDual) -> Local {
        let mv = |v: &Vec<HyperDual>| v.iter().map(|&x| f(x)).collect::<Vec<_>>();
        let mm = |v: &Vec<HMat>| v.iter().map(|m| m.map(f)).collect::<Vec<_>>();
        Local {
            dim: self.dim,
            g: self.g.map(f),
            ginv: self.ginv.map(f),
            dg: mm(&self.dg),
            gamma: mv(&self.gamma),
            structs: std::array::from_fn(|a| self.structs[a].map(f)),
            dstructs: std::array::from_fn(|a| mm(&self.dstructs[a])),
            omega: std::array::from_fn(|a| self.omega[a].map(f)),
            domega: std::array::from_fn(|a| mm(&self.domega[a])),
            nabla: std::array::from_fn(|a| mm(&self.nabla[a])),
            abc: std::array::from_fn(|a| mv(&self.abc[a])),
            lee: mv(&self.lee),
        }
    }

    pub fn gamma(&self, k: usize, i: usize, j: usize) -> HyperDual {
        self.gamma[gidx(self.dim, k, i, j)]
    }

    /// `Aψ = −ψ ∘ A` on a covector.
    pub fn act_covector(&self, a: usize, psi: &[HyperDual]) -> Vec<HyperDual> {
        act_covector(&self.structs[a], psi)
    }

    /// `ξ = φ♯`.
    pub fn xi(&self) -> Vec<HyperDual> {
        self.ginv.mul_vec(&self.lee)
    }

    /// `g(φ, φ)`.
    pub fn lee_norm2(&self) -> HyperDual {
        let xi = self.xi();
        (0..self.dim).map(|i| xi[i] * self.lee[i]).sum()
    }
}

/// `(Aψ)_k = −ψ_l A^l_k`.
pub fn act_covector(a: &HMat, psi: &[HyperDual]) -> Vec<HyperDual> {
    a.vec_mul(psi).into_iter().map(|v| -v).collect()
}

/// `L B = Σ_A Aᵀ B A` with the given structure matrices.
pub fn l_apply_coords(structs: &[HMat; 3], b: &HMat) -> HMat {
    let mut out = HMat::zeros(b.dim());
    for s in structs {
        out = out.add(&s.transpose().mul(b).mul(s));
    }
    out
}

/// `φ ⊗ ψ` as a matrix.
pub fn outer(a: &[HyperDual], b: &[HyperDual]) -> HMat {
    HMat::from_fn(a.len(), |i, j| a[i] * b[j])
}
