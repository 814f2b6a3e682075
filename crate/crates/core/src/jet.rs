//! Second-order forward differentiation in two variables.
//!
//! A [`Jet2`] carries a value together with its first and second partial
//! derivatives with respect to the chart parameters `(u, v)`. Evaluating a
//! chart on jets seeded with [`Jet2::var_u`] and [`Jet2::var_v`] yields the
//! exact surface jet without finite-difference truncation.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet2 {
    pub v: f64,
    pub du: f64,
    pub dv: f64,
    pub duu: f64,
    pub duv: f64,
    pub dvv: f64,
}

impl Jet2 {
    pub const fn constant(v: f64) -> Self {
        Self { v, du: 0.0, dv: 0.0, duu: 0.0, duv: 0.0, dvv: 0.0 }
    }

    pub const fn var_u(u: f64) -> Self {
        Self { v: u, du: 1.0, dv: 0.0, duu: 0.0, duv: 0.0, dvv: 0.0 }
    }

    pub const fn var_v(v: f64) -> Self {
        Self { v, du: 0.0, dv: 1.0, duu: 0.0, duv: 0.0, dvv: 0.0 }
    }

    /// Composes a scalar function `f` with derivatives `f0, f1, f2` at `self.v`.
    #[inline]
    fn chain(self, f0: f64, f1: f64, f2: f64) -> Self {
        Self {
            v: f0,
            du: f1 * self.du,
            dv: f1 * self.dv,
            duu: f1 * self.duu + f2 * self.du * self.du,
            duv: f1 * self.duv + f2 * self.du * self.dv,
            dvv: f1 * self.dvv + f2 * self.dv * self.dv,
        }
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn sqrt(self) -> Self {
        let r = self.v.sqrt();
        self.chain(r, 0.5 / r, -0.25 / (r * self.v))
    }

    pub fn recip(self) -> Self {
        let r = 1.0 / self.v;
        self.chain(r, -r * r, 2.0 * r * r * r)
    }

    pub fn powi(self, n: i32) -> Self {
        let f = n as f64;
        self.chain(
            self.v.powi(n),
            f * self.v.powi(n - 1),
            f * (f - 1.0) * self.v.powi(n - 2),
        )
    }
}

impl From<f64> for Jet2 {
    fn from(v: f64) -> Self {
        Jet2::constant(v)
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2 {
            v: self.v + o.v,
            du: self.du + o.du,
            dv: self.dv + o.dv,
            duu: self.duu + o.duu,
            duv: self.duv + o.duv,
            dvv: self.dvv + o.dvv,
        }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        self + (-o)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2 {
            v: -self.v,
            du: -self.du,
            dv: -self.dv,
            duu: -self.duu,
            duv: -self.duv,
            dvv: -self.dvv,
        }
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        Jet2 {
            v: self.v * o.v,
            du: self.du * o.v + self.v * o.du,
            dv: self.dv * o.v + self.v * o.dv,
            duu: self.duu * o.v + 2.0 * self.du * o.du + self.v * o.duu,
            duv: self.duv * o.v + self.du * o.dv + self.dv * o.du + self.v * o.duv,
            dvv: self.dvv * o.v + 2.0 * self.dv * o.dv + self.v * o.dvv,
        }
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet2) -> Jet2 {
        self * o.recip()
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(mut self, o: f64) -> Jet2 {
        self.v += o;
        self
    }
}

impl Sub<f64> for Jet2 {
    type Output = Jet2;
    fn sub(mut self, o: f64) -> Jet2 {
        self.v -= o;
        self
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, o: f64) -> Jet2 {
        Jet2 {
            v: self.v * o,
            du: self.du * o,
            dv: self.dv * o,
            duu: self.duu * o,
            duv: self.duv * o,
            dvv: self.dvv * o,
        }
    }
}

impl Add<Jet2> for f64 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        o + self
    }
}

impl Sub<Jet2> for f64 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        -o + self
    }
}

impl Mul<Jet2> for f64 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        o * self
    }
}
