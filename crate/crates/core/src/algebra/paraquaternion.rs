//! Split quaternions `p = t + r₃x + r₁y + r₂z` with exact components.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::epsilon::{eps_rat, CYCLIC};
use crate::scalar::{fmt_rat, int, Rat};

#[derive(Clone, PartialEq, Eq)]
pub struct ParaQuaternion {
    pub t: Rat,
    pub x: Rat,
    pub y: Rat,
    pub z: Rat,
}

impl ParaQuaternion {
    pub fn new(t: Rat, x: Rat, y: Rat, z: Rat) -> Self {
        ParaQuaternion { t, x, y, z }
    }

    pub fn from_i64(t: i64, x: i64, y: i64, z: i64) -> Self {
        Self::new(int(t), int(x), int(y), int(z))
    }

    pub fn one() -> Self {
        Self::from_i64(1, 0, 0, 0)
    }

    /// The imaginary unit `r_s` for axis `s` (0-based: r₁, r₂, r₃).
    pub fn unit(s: usize) -> Self {
        let mut im = [Rat::zero(), Rat::zero(), Rat::zero()];
        im[s] = int(1);
        Self::from_parts(Rat::zero(), im)
    }

    /// Imaginary components indexed by axis: `[y, z, x]`.
    pub fn imaginary(&self) -> [Rat; 3] {
        [self.y.clone(), self.z.clone(), self.x.clone()]
    }

    pub fn real(&self) -> &Rat {
        &self.t
    }

    pub fn from_parts(re: Rat, im: [Rat; 3]) -> Self {
        let [y, z, x] = im;
        ParaQuaternion { t: re, x, y, z }
    }

    pub fn conj(&self) -> Self {
        ParaQuaternion {
            t: self.t.clone(),
            x: -&self.x,
            y: -&self.y,
            z: -&self.z,
        }
    }

    /// `t² + x² - y² - z²`, the real part of `p̄p`.
    pub fn norm(&self) -> Rat {
        &self.t * &self.t + &self.x * &self.x - &self.y * &self.y - &self.z * &self.z
    }

    pub fn is_zero(&self) -> bool {
        self.t.is_zero() && self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }
}

impl Mul for &ParaQuaternion {
    type Output = ParaQuaternion;

    /// `r_s² = ε_s` and `r_i r_j = -r_j r_i = -ε_k r_k` for cyclic `(i,j,k)`.
    fn mul(self, rhs: &ParaQuaternion) -> ParaQuaternion {
        let (a, p) = (self.real(), self.imaginary());
        let (b, q) = (rhs.real(), rhs.imaginary());
        let mut re = a * b;
        let mut im: [Rat; 3] = std::array::from_fn(|s| a * &q[s] + b * &p[s]);
        for s in 0..3 {
            re += eps_rat(s) * &p[s] * &q[s];
        }
        for &(i, j, k) in &CYCLIC {
            let cross = &p[i] * &q[j] - &p[j] * &q[i];
            im[k] -= eps_rat(k) * cross;
        }
        ParaQuaternion::from_parts(re, im)
    }
}

impl Mul for ParaQuaternion {
    type Output = ParaQuaternion;
    fn mul(self, rhs: ParaQuaternion) -> ParaQuaternion {
        &self * &rhs
    }
}

impl Add for &ParaQuaternion {
    type Output = ParaQuaternion;
    fn add(self, rhs: &ParaQuaternion) -> ParaQuaternion {
        ParaQuaternion::new(
            &self.t + &rhs.t,
            &self.x + &rhs.x,
            &self.y + &rhs.y,
            &self.z + &rhs.z,
        )
    }
}

impl Sub for &ParaQuaternion {
    type Output = ParaQuaternion;
    fn sub(self, rhs: &ParaQuaternion) -> ParaQuaternion {
        ParaQuaternion::new(
            &self.t - &rhs.t,
            &self.x - &rhs.x,
            &self.y - &rhs.y,
            &self.z - &rhs.z,
        )
    }
}

impl Neg for &ParaQuaternion {
    type Output = ParaQuaternion;
    fn neg(self) -> ParaQuaternion {
        ParaQuaternion::new(-&self.t, -&self.x, -&self.y, -&self.z)
    }
}

impl fmt::Debug for ParaQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} + {}r3 + {}r1 + {}r2)",
            fmt_rat(&self.t),
            fmt_rat(&self.x),
            fmt_rat(&self.y),
            fmt_rat(&self.z)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: usize) -> ParaQuaternion {
        ParaQuaternion::unit(s)
    }

    #[test]
    fn unit_products() {
        let one = ParaQuaternion::one();
        assert_eq!(&r(0) * &r(0), one);
        assert_eq!(&r(1) * &r(1), one);
        assert_eq!(&r(2) * &r(2), -&one);
        assert_eq!(&r(0) * &r(1), r(2));
        assert_eq!(&r(1) * &r(0), -&r(2));
        assert_eq!(&r(2) * &r(0), -&r(1));
        assert_eq!(&r(1) * &r(2), -&r(0));
    }

    #[test]
    fn one_is_neutral() {
        let p = ParaQuaternion::from_i64(3, -1, 4, 2);
        assert_eq!(&ParaQuaternion::one() * &p, p);
        assert_eq!(&p * &ParaQuaternion::one(), p);
    }

    #[test]
    fn zero_divisor() {
        let p = &ParaQuaternion::one() + &r(0);
        assert_eq!(p.norm(), int(0));
        let q = &ParaQuaternion::one() - &r(0);
        assert!((&p * &q).is_zero());
    }

    #[test]
    fn conj_gives_norm() {
        let p = ParaQuaternion::from_i64(2, 3, -5, 7);
        let n = &p.conj() * &p;
        assert_eq!(n, ParaQuaternion::new(p.norm(), int(0), int(0), int(0)));
    }
}
