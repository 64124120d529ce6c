//! Real intervals and complex discs (circular complex interval arithmetic).
//!
//! Every operation returns an enclosure of the exact image set. Rounding is
//! not directed; callers budget it through the certificate slack.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Real> Interval<T> {
    pub fn new(lo: T, hi: T) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: T) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Symmetric interval `[c - r, c + r]`.
    pub fn around(c: T, r: T) -> Self {
        Interval { lo: c - r, hi: c + r }
    }

    pub fn width(&self) -> T {
        self.hi - self.lo
    }

    pub fn mid(&self) -> T {
        (self.lo + self.hi) / T::lit(2.0)
    }

    pub fn contains(&self, x: T) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn clamp_below(self, floor: T) -> Self {
        Interval { lo: self.lo.max(floor), hi: self.hi.max(floor) }
    }

    /// `sqrt` of the nonnegative part.
    pub fn sqrt_pos(self) -> Self {
        let z = T::zero();
        Interval { lo: self.lo.max(z).sqrt(), hi: self.hi.max(z).sqrt() }
    }

    pub fn sqr(self) -> Self {
        let a = self.lo * self.lo;
        let b = self.hi * self.hi;
        if self.lo <= T::zero() && self.hi >= T::zero() {
            Interval { lo: T::zero(), hi: a.max(b) }
        } else {
            Interval { lo: a.min(b), hi: a.max(b) }
        }
    }

    pub fn abs(self) -> Self {
        if self.lo >= T::zero() {
            self
        } else if self.hi <= T::zero() {
            -self
        } else {
            Interval { lo: T::zero(), hi: (-self.lo).max(self.hi) }
        }
    }

    pub fn max(self, other: Self) -> Self {
        Interval { lo: self.lo.max(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn hull(self, other: Self) -> Self {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    /// `sin` enclosure using monotone pieces.
    pub fn sin(self) -> Self {
        if self.width() >= T::TAU() {
            return Interval { lo: -T::one(), hi: T::one() };
        }
        let (a, b) = (self.lo.sin(), self.hi.sin());
        let mut lo = a.min(b);
        let mut hi = a.max(b);
        // extremum at pi/2 + k pi inside the interval
        let half_pi = T::FRAC_PI_2();
        let k_start = ((self.lo - half_pi) / T::PI()).ceil();
        let mut k = k_start;
        while half_pi + k * T::PI() <= self.hi {
            let v = (half_pi + k * T::PI()).sin();
            if v > T::zero() {
                hi = T::one();
            } else {
                lo = -T::one();
            }
            k = k + T::one();
        }
        Interval { lo, hi }
    }
}

impl<T: Real> Add for Interval<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Interval { lo: self.lo + o.lo, hi: self.hi + o.hi }
    }
}

impl<T: Real> Sub for Interval<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Interval { lo: self.lo - o.hi, hi: self.hi - o.lo }
    }
}

impl<T: Real> Neg for Interval<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl<T: Real> Mul for Interval<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().copied().fold(T::infinity(), T::min);
        let hi = c.iter().copied().fold(T::neg_infinity(), T::max);
        Interval { lo, hi }
    }
}

/// Closed disc `{c + w : |w| <= r}` in the complex plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disc<T> {
    pub c: Complex<T>,
    pub r: T,
}

impl<T: Real> Disc<T> {
    pub fn new(c: Complex<T>, r: T) -> Self {
        Disc { c, r: r.abs() }
    }

    pub fn point(c: Complex<T>) -> Self {
        Disc { c, r: T::zero() }
    }

    /// Range of `|w|` over the disc.
    pub fn modulus(&self) -> Interval<T> {
        let m = self.c.norm();
        Interval { lo: (m - self.r).max(T::zero()), hi: m + self.r }
    }

    pub fn scale(self, k: Complex<T>) -> Self {
        Disc { c: self.c * k, r: self.r * k.norm() }
    }

    /// Enclosure of `exp(-i phi)` for `phi` in `[a, b]`.
    pub fn exp_neg_i(phi: Interval<T>) -> Self {
        let mid = phi.mid();
        let half = phi.width() / T::lit(2.0);
        // chord length between exp(-i mid) and exp(-i (mid +- half))
        let r = if half >= T::PI() { T::lit(2.0) } else { T::lit(2.0) * (half / T::lit(2.0)).sin() };
        Disc { c: Complex::from_polar(T::one(), -mid), r }
    }
}

impl<T: Real> Add for Disc<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Disc { c: self.c + o.c, r: self.r + o.r }
    }
}

impl<T: Real> Sub for Disc<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Disc { c: self.c - o.c, r: self.r + o.r }
    }
}

impl<T: Real> Mul for Disc<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Disc { c: self.c * o.c, r: self.c.norm() * o.r + o.c.norm() * self.r + self.r * o.r }
    }
}
