//! Double-double arithmetic: just enough to evaluate `e^{z + q/z} z^{-k}` on
//! a circle, where the integrand can exceed the integral by many orders of
//! magnitude and plain `f64` rounding swamps the result.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const LN2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.3190468138462996e-17,
};
const HALF_PI: Dd = Dd {
    hi: std::f64::consts::FRAC_PI_2,
    lo: 6.123233995736766e-17,
};
pub(crate) const TWO_PI: Dd = Dd {
    hi: std::f64::consts::TAU,
    lo: 2.4492935982947064e-16,
};

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Exact scaling by a power of two.
    fn ldexp(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        Dd {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    pub fn div_f64(self, d: f64) -> Self {
        let q1 = self.hi / d;
        let r = self - Dd::from_f64(d) * Dd::from_f64(q1);
        let q2 = r.hi / d;
        let (hi, lo) = fast_two_sum(q1, q2);
        Dd { hi, lo }
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        let k = (self.hi / LN2.hi).round();
        // |r| <= ln2 / 2, then scaled down so the series converges fast.
        let r = (self - LN2 * Dd::from_f64(k)).ldexp(-5);
        let mut term = Dd::ONE;
        let mut sum = Dd::ONE;
        for n in 1..=14 {
            term = (term * r).div_f64(n as f64);
            sum = sum + term;
        }
        for _ in 0..5 {
            sum = sum * sum;
        }
        sum.ldexp(k as i32)
    }

    /// `(sin x, cos x)` by reduction modulo `π/2` and Taylor series.
    pub fn sin_cos(self) -> (Self, Self) {
        let n = (self.hi / HALF_PI.hi).round();
        let r = self - HALF_PI * Dd::from_f64(n);
        let r2 = r * r;
        let (mut s, mut c) = (r, Dd::ONE);
        let (mut ts, mut tc) = (r, Dd::ONE);
        for j in 1..=14 {
            let j = j as f64;
            ts = -(ts * r2).div_f64((2.0 * j) * (2.0 * j + 1.0));
            tc = -(tc * r2).div_f64((2.0 * j - 1.0) * (2.0 * j));
            s = s + ts;
            c = c + tc;
        }
        match (n as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = fast_two_sum(s, e + t);
        let (hi, lo) = fast_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = fast_two_sum(p, e);
        Dd { hi, lo }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub const ZERO: CDd = CDd {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };

    pub fn new(re: Dd, im: Dd) -> Self {
        CDd { re, im }
    }

    pub fn from_c64(z: Complex64) -> Self {
        CDd::new(Dd::from_f64(z.re), Dd::from_f64(z.im))
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// `e^{i θ}`.
    pub fn cis(theta: Dd) -> Self {
        let (s, c) = theta.sin_cos();
        CDd::new(c, s)
    }

    pub fn exp(self) -> Self {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        CDd::new(m * c, m * s)
    }

    pub fn scale(self, x: Dd) -> Self {
        CDd::new(self.re * x, self.im * x)
    }

    pub fn abs_f64(self) -> f64 {
        self.to_c64().norm()
    }
}

impl Add for CDd {
    type Output = CDd;
    fn add(self, o: CDd) -> CDd {
        CDd::new(self.re + o.re, self.im + o.im)
    }
}

impl Mul for CDd {
    type Output = CDd;
    fn mul(self, o: CDd) -> CDd {
        CDd::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_matches_known_digits() {
        // e = 2.71828182845904523536028747135266249...
        let e = Dd::ONE.exp();
        assert_eq!(e.hi, std::f64::consts::E);
        assert!((e.lo - 1.4456468917292502e-16).abs() < 1e-29, "{e:?}");
        let x = Dd::from_f64(9.3) + Dd::from_f64(1e-17);
        let one = x.exp() * (-x).exp() - Dd::ONE;
        assert!(one.to_f64().abs() < 1e-28);
    }

    #[test]
    fn sin_cos_identities() {
        for x in [0.1, 1.0, 7.123456789, -31.4, 100.25] {
            let (s, c) = Dd::from_f64(x).sin_cos();
            assert!((s * s + c * c - Dd::ONE).to_f64().abs() < 1e-30);
            assert!((s.to_f64() - x.sin()).abs() < 1e-15);
            assert!((c.to_f64() - x.cos()).abs() < 1e-15);
        }
        // π in double-double is good to about 1e-32.
        let (s, c) = (TWO_PI * Dd::from_f64(0.5)).sin_cos();
        assert!(s.to_f64().abs() < 1e-31);
        assert!((c + Dd::ONE).to_f64().abs() < 1e-31);
    }
}
