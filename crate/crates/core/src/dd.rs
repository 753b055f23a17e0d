//! Complex double-double arithmetic for short polynomial expressions whose
//! terms cancel. Results are rounded back to `Complex` once at the end.

use std::ops::{Add, Mul, Neg, Sub};

use crate::Complex;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd {
        hi: s,
        lo: b - (s - a),
    }
}

impl Dd {
    fn new(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let r = quick_two_sum(s, e + t);
        quick_two_sum(r.hi, r.lo + f)
    }

    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn mul(self, o: Self) -> Self {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        quick_two_sum(p, e + (self.hi * o.lo + self.lo * o.hi))
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// Complex number with double-double real and imaginary parts.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Cdd {
    re: Dd,
    im: Dd,
}

impl Cdd {
    pub(crate) fn round(self) -> Complex {
        Complex::new(self.re.value(), self.im.value())
    }
}

impl From<Complex> for Cdd {
    fn from(z: Complex) -> Self {
        Self {
            re: Dd::new(z.re),
            im: Dd::new(z.im),
        }
    }
}

impl Add for Cdd {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            re: self.re.add(o.re),
            im: self.im.add(o.im),
        }
    }
}

impl Neg for Cdd {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }
}

impl Sub for Cdd {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + -o
    }
}

impl Mul for Cdd {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            re: self.re.mul(o.re).add(self.im.mul(o.im).neg()),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }
}
