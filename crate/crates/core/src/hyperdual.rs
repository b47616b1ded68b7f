//! Hyper-dual numbers: exact forward-mode differentiation with nesting.
//!
//! A [`HyperDual`] is an element of `ℝ[ε₁, …, ε_k] / (ε₁², …, ε_k²)` with
//! `k ≤ MAX_ORDER`. Seeding a coordinate with a fresh infinitesimal and
//! reading back the matching coefficient yields a directional derivative;
//! seeding several distinct infinitesimals yields mixed partials. This is
//! the same algebra as nested dual numbers `Dual<Dual<…>>`, flattened into
//! one concrete type so that fields can be stored as trait objects.
//!
//! Each value carries its `order`: the number of infinitesimals that may be
//! non-zero in it. A new derivative level always uses bit `order`, so nested
//! differentiation never collides with an outer level.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Maximum number of distinct infinitesimals.
pub const MAX_ORDER: usize = 4;
const SLOTS: usize = 1 << MAX_ORDER;

#[derive(Clone, Copy, PartialEq)]
pub struct HyperDual {
    order: u8,
    c: [f64; SLOTS],
}

impl HyperDual {
    pub const ZERO: HyperDual = HyperDual {
        order: 0,
        c: [0.0; SLOTS],
    };

    #[inline]
    pub fn cst(v: f64) -> Self {
        let mut c = [0.0; SLOTS];
        c[0] = v;
        HyperDual { order: 0, c }
    }

    /// `value + ε_bit`. Panics if `bit` exceeds the supported depth.
    pub fn seed(value: HyperDual, bit: usize) -> Self {
        assert!(
            bit < MAX_ORDER,
            "differentiation depth {} exceeds MAX_ORDER = {MAX_ORDER}",
            bit + 1
        );
        let mut out = value;
        out.order = out.order.max(bit as u8 + 1);
        out.c[1 << bit] += 1.0;
        out
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order as usize
    }

    /// Real part.
    #[inline]
    pub fn re(&self) -> f64 {
        self.c[0]
    }

    /// Coefficient of the monomial identified by `mask`.
    pub fn coeff(&self, mask: usize) -> f64 {
        self.c[mask]
    }

    /// Derivative part along infinitesimal `bit`, as a value of lower order.
    pub fn eps(&self, bit: usize) -> Self {
        let b = 1usize << bit;
        let mut out = HyperDual::ZERO;
        let len = 1usize << self.order;
        if bit >= self.order as usize {
            return out;
        }
        for m in 0..len {
            if m & b != 0 {
                out.c[m & !b] = self.c[m];
            }
        }
        out.order = bit as u8;
        out.order = out.order.max(self.order_without(bit));
        out
    }

    /// Value with infinitesimal `bit` set to zero.
    pub fn drop_eps(&self, bit: usize) -> Self {
        let b = 1usize << bit;
        let mut out = HyperDual::ZERO;
        let len = 1usize << self.order;
        for m in 0..len {
            if m & b == 0 {
                out.c[m] = self.c[m];
            }
        }
        out.order = self.order_without(bit);
        out
    }

    fn order_without(&self, bit: usize) -> u8 {
        if bit + 1 == self.order as usize {
            bit as u8
        } else {
            self.order
        }
    }

    fn nilpotent(&self) -> Self {
        let mut n = *self;
        n.c[0] = 0.0;
        n
    }

    /// `Σ_j coeffs[j] · (self − re)^j`; `coeffs[j]` must be `f⁽ʲ⁾(re)/j!`.
    fn taylor(&self, coeffs: &[f64; MAX_ORDER + 1]) -> Self {
        let n = self.nilpotent();
        let mut out = HyperDual::cst(coeffs[0]);
        out.order = self.order;
        let mut power = HyperDual::cst(1.0);
        for coeff in coeffs.iter().take(self.order as usize + 1).skip(1) {
            power = power * n;
            out += power * *coeff;
        }
        out
    }

    pub fn recip(self) -> Self {
        let a = self.re();
        let mut d = [0.0; MAX_ORDER + 1];
        let inv = 1.0 / a;
        let mut p = inv;
        for (j, dj) in d.iter_mut().enumerate() {
            *dj = if j % 2 == 0 { p } else { -p };
            p *= inv;
        }
        self.taylor(&d)
    }

    pub fn powf(self, r: f64) -> Self {
        let a = self.re();
        let mut d = [0.0; MAX_ORDER + 1];
        let mut binom = 1.0;
        for (j, dj) in d.iter_mut().enumerate() {
            *dj = binom * a.powf(r - j as f64);
            binom *= (r - j as f64) / (j as f64 + 1.0);
        }
        self.taylor(&d)
    }

    pub fn sqrt(self) -> Self {
        self.powf(0.5)
    }

    pub fn ln(self) -> Self {
        let a = self.re();
        let mut d = [0.0; MAX_ORDER + 1];
        d[0] = a.ln();
        let mut p = 1.0;
        for (j, dj) in d.iter_mut().enumerate().skip(1) {
            p /= a;
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            *dj = sign * p / j as f64;
        }
        self.taylor(&d)
    }

    pub fn exp(self) -> Self {
        let e = self.re().exp();
        let mut d = [0.0; MAX_ORDER + 1];
        let mut fact = 1.0;
        for (j, dj) in d.iter_mut().enumerate() {
            if j > 0 {
                fact *= j as f64;
            }
            *dj = e / fact;
        }
        self.taylor(&d)
    }

    /// `|x|`, differentiated on the side of the real part.
    pub fn abs(self) -> Self {
        if self.re() < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn powi(self, k: u32) -> Self {
        let mut out = HyperDual::cst(1.0);
        for _ in 0..k {
            out = out * self;
        }
        out
    }
}

impl Default for HyperDual {
    fn default() -> Self {
        HyperDual::ZERO
    }
}

impl From<f64> for HyperDual {
    fn from(v: f64) -> Self {
        HyperDual::cst(v)
    }
}

impl fmt::Debug for HyperDual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let len = 1usize << self.order;
        write!(f, "HyperDual[{}](", self.order)?;
        for (m, v) in self.c[..len].iter().enumerate() {
            if m > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl Add for HyperDual {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        let order = self.order.max(rhs.order);
        let mut out = self;
        out.order = order;
        for m in 0..(1usize << order) {
            out.c[m] += rhs.c[m];
        }
        out
    }
}

impl Sub for HyperDual {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        let order = self.order.max(rhs.order);
        let mut out = self;
        out.order = order;
        for m in 0..(1usize << order) {
            out.c[m] -= rhs.c[m];
        }
        out
    }
}

impl Mul for HyperDual {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        let order = self.order.max(rhs.order);
        if order == 0 {
            return HyperDual::cst(self.c[0] * rhs.c[0]);
        }
        let mut out = HyperDual::ZERO;
        out.order = order;
        for m in 0..(1usize << order) {
            // sum over submasks s of m
            let mut acc = 0.0;
            let mut s = m;
            loop {
                acc += self.c[s] * rhs.c[m ^ s];
                if s == 0 {
                    break;
                }
                s = (s - 1) & m;
            }
            out.c[m] = acc;
        }
        out
    }
}

impl Div for HyperDual {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        if rhs.order == 0 {
            return self * (1.0 / rhs.c[0]);
        }
        self * rhs.recip()
    }
}

impl Neg for HyperDual {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        let mut out = self;
        for m in 0..(1usize << self.order) {
            out.c[m] = -out.c[m];
        }
        out
    }
}

impl Add<f64> for HyperDual {
    type Output = Self;
    #[inline]
    fn add(self, rhs: f64) -> Self {
        let mut out = self;
        out.c[0] += rhs;
        out
    }
}

impl Sub<f64> for HyperDual {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: f64) -> Self {
        let mut out = self;
        out.c[0] -= rhs;
        out
    }
}

impl Mul<f64> for HyperDual {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: f64) -> Self {
        let mut out = self;
        for m in 0..(1usize << self.order) {
            out.c[m] *= rhs;
        }
        out
    }
}

impl Div<f64> for HyperDual {
    type Output = Self;
    #[inline]
    fn div(self, rhs: f64) -> Self {
        self * (1.0 / rhs)
    }
}

impl Mul<HyperDual> for f64 {
    type Output = HyperDual;
    #[inline]
    fn mul(self, rhs: HyperDual) -> HyperDual {
        rhs * self
    }
}

impl Add<HyperDual> for f64 {
    type Output = HyperDual;
    #[inline]
    fn add(self, rhs: HyperDual) -> HyperDual {
        rhs + self
    }
}

impl Sub<HyperDual> for f64 {
    type Output = HyperDual;
    #[inline]
    fn sub(self, rhs: HyperDual) -> HyperDual {
        -rhs + self
    }
}

impl AddAssign for HyperDual {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for HyperDual {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for HyperDual {
    #[inline]
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl std::iter::Sum for HyperDual {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(HyperDual::ZERO, |a, b| a + b)
    }
}

/// Highest order among the inputs; the next free infinitesimal bit.
pub fn next_bit(x: &[HyperDual]) -> usize {
    x.iter().map(|v| v.order()).max().unwrap_or(0)
}

/// Lift constant coordinates.
pub fn constants(x: &[f64]) -> Vec<HyperDual> {
    x.iter().map(|&v| HyperDual::cst(v)).collect()
}

/// Copy of `x` with coordinate `k` seeded on infinitesimal `bit`.
pub fn seeded(x: &[HyperDual], k: usize, bit: usize) -> Vec<HyperDual> {
    let mut out = x.to_vec();
    out[k] = HyperDual::seed(out[k], bit);
    out
}

/// Exact gradient of a scalar function, at the order of `x`.
pub fn gradient<F>(f: F, x: &[HyperDual]) -> Vec<HyperDual>
where
    F: Fn(&[HyperDual]) -> HyperDual,
{
    let bit = next_bit(x);
    (0..x.len()).map(|k| f(&seeded(x, k, bit)).eps(bit)).collect()
}
