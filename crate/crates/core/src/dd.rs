//! Double-word ("double-double") arithmetic on top of any [`Real`], used
//! where a result must round correctly to the working precision.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::scalar::Real;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Dd<F> {
    hi: F,
    lo: F,
}

fn two_sum<F: Real>(a: F, b: F) -> (F, F) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum<F: Real>(a: F, b: F) -> (F, F) {
    let s = a + b;
    (s, b - (s - a))
}

impl<F: Real> Dd<F> {
    pub(crate) fn new(x: F) -> Self {
        Dd { hi: x, lo: F::zero() }
    }

    fn renorm(hi: F, lo: F) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Dd { hi, lo }
    }

    /// Exact product of two working-precision values.
    pub(crate) fn product(a: F, b: F) -> Self {
        let p = a * b;
        Dd { hi: p, lo: a.mul_add(b, -p) }
    }

    pub(crate) fn hi(self) -> F {
        self.hi
    }

    pub(crate) fn value(self) -> F {
        self.hi + self.lo
    }

    pub(crate) fn abs(self) -> Self {
        if self.hi < F::zero() {
            -self
        } else {
            self
        }
    }
}

impl<F: Real> Add for Dd<F> {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        Dd::renorm(s, e + f)
    }
}

impl<F: Real> Neg for Dd<F> {
    type Output = Self;

    fn neg(self) -> Self {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl<F: Real> Sub for Dd<F> {
    type Output = Self;

    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<F: Real> Mul for Dd<F> {
    type Output = Self;

    fn mul(self, o: Self) -> Self {
        let p = Dd::product(self.hi, o.hi);
        Dd::renorm(p.hi, p.lo + (self.hi * o.lo + self.lo * o.hi))
    }
}

impl<F: Real> Div for Dd<F> {
    type Output = Self;

    fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::new(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::new(q2);
        let q3 = r.hi / o.hi;
        Dd::renorm(q1, q2) + Dd::new(q3)
    }
}
