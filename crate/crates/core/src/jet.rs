//! Small truncated-Taylor arithmetic used to push derivatives through the
//! closed forms exactly.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Truncated Taylor series `c[0] + c[1] h + c[2] h² + c[3] h³` around a point,
/// with `c[k] = f⁽ᵏ⁾ / k!`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Taylor3(pub [f64; 4]);

impl Taylor3 {
    /// Builds a series from a value and its first three derivatives.
    pub fn from_derivatives(d: [f64; 4]) -> Self {
        Taylor3([d[0], d[1], d[2] / 2.0, d[3] / 6.0])
    }

    pub fn constant(v: f64) -> Self {
        Taylor3([v, 0.0, 0.0, 0.0])
    }

    pub fn derivatives(&self) -> [f64; 4] {
        let c = self.0;
        [c[0], c[1], 2.0 * c[2], 6.0 * c[3]]
    }

    pub fn scale(self, k: f64) -> Self {
        Taylor3(self.0.map(|c| c * k))
    }

    /// Square root; requires a positive constant term.
    pub fn sqrt(self) -> Self {
        let a = self.0;
        let mut b = [0.0; 4];
        b[0] = a[0].sqrt();
        for n in 1..4 {
            let mut acc = a[n];
            for k in 1..n {
                acc -= b[k] * b[n - k];
            }
            b[n] = acc / (2.0 * b[0]);
        }
        Taylor3(b)
    }
}

impl Add for Taylor3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Taylor3(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for Taylor3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Taylor3(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Mul for Taylor3 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut c = [0.0; 4];
        for (i, ci) in c.iter_mut().enumerate() {
            for k in 0..=i {
                *ci += self.0[k] * o.0[i - k];
            }
        }
        Taylor3(c)
    }
}

/// Value with first and second derivative in one variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Jet2 {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet2 {
    pub const fn new(v: f64, d1: f64, d2: f64) -> Self {
        Jet2 { v, d1, d2 }
    }

    pub fn abs(self) -> Self {
        if self.v < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        let d1 = self.d1 / (2.0 * s);
        let d2 = self.d2 / (2.0 * s) - self.d1 * self.d1 / (4.0 * s * self.v);
        Jet2::new(s, d1, d2)
    }

    /// `ln|x|`.
    pub fn ln_abs(self) -> Self {
        let q = self.d1 / self.v;
        Jet2::new(self.v.abs().ln(), q, self.d2 / self.v - q * q)
    }

    pub fn scale(self, k: f64) -> Self {
        Jet2::new(self.v * k, self.d1 * k, self.d2 * k)
    }
}

impl Add for Jet2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Jet2::new(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2)
    }
}

impl Sub for Jet2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Jet2::new(self.v - o.v, self.d1 - o.d1, self.d2 - o.d2)
    }
}

impl Neg for Jet2 {
    type Output = Self;
    fn neg(self) -> Self {
        Jet2::new(-self.v, -self.d1, -self.d2)
    }
}

impl Mul for Jet2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Jet2::new(
            self.v * o.v,
            self.d1 * o.v + self.v * o.d1,
            self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        )
    }
}

impl Div for Jet2 {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let q = self.v / o.v;
        let d1 = (self.d1 - q * o.d1) / o.v;
        let d2 = (self.d2 - 2.0 * d1 * o.d1 - q * o.d2) / o.v;
        Jet2::new(q, d1, d2)
    }
}
