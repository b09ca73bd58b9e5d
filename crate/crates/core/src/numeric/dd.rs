//! Double-double arithmetic (about 32 significant digits).
//!
//! Only what the partition sums need: field operations, `sqrt`, `exp`,
//! `sin`/`cos` and a complex wrapper.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    pub const PI: Dd = Dd {
        hi: std::f64::consts::PI,
        lo: 1.224_646_799_147_353_2e-16,
    };
    pub const TWO_PI: Dd = Dd {
        hi: std::f64::consts::TAU,
        lo: 2.449_293_598_294_706_4e-16,
    };
    pub const LN2: Dd = Dd {
        hi: std::f64::consts::LN_2,
        lo: 2.319_046_813_846_299_6e-17,
    };

    pub const fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }

    pub fn sqr(self) -> Dd {
        self * self
    }

    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::ZERO;
        }
        let s = self.hi.sqrt();
        let r = self - Dd::from_f64(s).sqr();
        Dd::from_f64(s) + Dd::from_f64(r.hi / (2.0 * s))
    }

    pub fn recip(self) -> Dd {
        Dd::ONE / self
    }

    pub fn powi(self, n: u32) -> Dd {
        let mut out = Dd::ONE;
        let mut base = self;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                out = out * base;
            }
            base = base.sqr();
            k >>= 1;
        }
        out
    }

    pub fn exp(self) -> Dd {
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        if self.hi > 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        let m = (self.hi / Dd::LN2.hi).round();
        let r = self - Dd::LN2.mul_f64(m);
        // r / 2^10, Taylor, then square ten times
        let r = r.mul_f64(1.0 / 1024.0);
        let mut term = Dd::ONE;
        let mut sum = Dd::ZERO;
        for k in 1..=14 {
            term = (term * r) / Dd::from_f64(k as f64);
            sum = sum + term;
        }
        // sum = e^r - 1; (1+s)^2 - 1 = 2s + s^2
        for _ in 0..10 {
            sum = sum.mul_f64(2.0) + sum.sqr();
        }
        let e = sum + Dd::ONE;
        let p = 2f64.powi(m as i32);
        Dd { hi: e.hi * p, lo: e.lo * p }
    }

    /// Returns `(sin x, cos x)`.
    pub fn sin_cos(self) -> (Dd, Dd) {
        let k = (self.hi / Dd::TWO_PI.hi).round();
        let r = self - Dd::TWO_PI.mul_f64(k);
        // r / 2^6, Taylor, then double-angle six times
        let r = r.mul_f64(1.0 / 64.0);
        let r2 = r.sqr();
        let mut term = r;
        let mut s = r;
        for k in 1..=12 {
            term = -(term * r2) / Dd::from_f64(((2 * k) * (2 * k + 1)) as f64);
            s = s + term;
        }
        let mut term = Dd::ONE;
        let mut c_minus_one = Dd::ZERO;
        for k in 1..=12 {
            term = -(term * r2) / Dd::from_f64(((2 * k - 1) * (2 * k)) as f64);
            c_minus_one = c_minus_one + term;
        }
        for _ in 0..6 {
            let c = c_minus_one + Dd::ONE;
            let new_s = (s * c).mul_f64(2.0);
            // cos 2a - 1 = -2 sin^2 a
            c_minus_one = -(s.sqr().mul_f64(2.0));
            s = new_s;
        }
        (s, c_minus_one + Dd::ONE)
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Dd {
        Dd::from_f64(x)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from_f64(q3)
    }
}

/// Complex number with double-double parts.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DdComplex {
    pub re: Dd,
    pub im: Dd,
}

impl DdComplex {
    pub fn new(re: Dd, im: Dd) -> Self {
        DdComplex { re, im }
    }

    pub fn from_c64(z: crate::C64) -> Self {
        DdComplex::new(z.re.into(), z.im.into())
    }

    pub fn to_c64(self) -> crate::C64 {
        crate::C64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn scale(self, s: Dd) -> Self {
        DdComplex::new(self.re * s, self.im * s)
    }

    pub fn norm_sqr(self) -> Dd {
        self.re.sqr() + self.im.sqr()
    }

    pub fn recip(self) -> Self {
        let d = self.norm_sqr();
        DdComplex::new(self.re / d, -self.im / d)
    }

    pub fn exp(self) -> Self {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        DdComplex::new(m * c, m * s)
    }

    /// Principal square root.
    pub fn sqrt(self) -> Self {
        if self.re.hi == 0.0 && self.im.hi == 0.0 {
            return DdComplex::default();
        }
        let r = self.norm_sqr().sqrt();
        if self.re.hi >= 0.0 {
            let a = ((r + self.re).mul_f64(0.5)).sqrt();
            DdComplex::new(a, self.im / a.mul_f64(2.0))
        } else {
            let b = ((r - self.re).mul_f64(0.5)).sqrt();
            let b = if self.im.hi < 0.0 { -b } else { b };
            DdComplex::new(self.im / b.mul_f64(2.0), b)
        }
    }
}

impl Add for DdComplex {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        DdComplex::new(self.re + b.re, self.im + b.im)
    }
}

impl Sub for DdComplex {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        DdComplex::new(self.re - b.re, self.im - b.im)
    }
}

impl Mul for DdComplex {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        DdComplex::new(self.re * b.re - self.im * b.im, self.re * b.im + self.im * b.re)
    }
}

impl Div for DdComplex {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        self * b.recip()
    }
}

impl Neg for DdComplex {
    type Output = Self;
    fn neg(self) -> Self {
        DdComplex::new(-self.re, -self.im)
    }
}
